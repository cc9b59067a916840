//! Program-size complexity read off halting tables: K, time-bounded K,
//! shortest programs, time and depth profiles, mutual information, the chain
//! rule reports and the expected time on the Ω clock.
//!
//! Busy running times are always measured against the unconditional busy
//! beaver (the ε table), also for conditional quantities.

use serde::{Deserialize, Serialize};

use crate::certainty::{Certainty, Measured};
use crate::encoding::{pair_encode, BitString, Dyadic};
use crate::enumeration::{busy_beaver, busy_running_time, clock_reading, HaltingTable};
use crate::error::{Error, Result};
use crate::lab::Lab;
use crate::machine::print_literal;
use crate::profile::{closeness, sharp_finish, Point, Profile};
use crate::report::Report;

/// A halting program with output x.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Producer {
    pub program: BitString,
    pub steps: u64,
    /// False for the print-literal program when it is longer than the
    /// table's length bound.
    pub enumerated: bool,
}

/// Every known producer of `x` given the table's auxiliary string, ordered by
/// length, then running time, then length-lex. Besides the table's rows this
/// includes the print-literal program, so every string has a producer.
pub fn producers(x: &BitString, t_z: &HaltingTable) -> Vec<Producer> {
    let mut out: Vec<Producer> = t_z
        .producers(x)
        .into_iter()
        .map(|(program, steps)| Producer { program, steps, enumerated: true })
        .collect();
    let literal = print_literal(x);
    if literal.len() > t_z.max_len() {
        out.push(Producer { program: literal, steps: x.len() as u64 + 1, enumerated: false });
    }
    out.sort_by(|a, b| {
        (a.program.len(), a.steps, &a.program).cmp(&(b.program.len(), b.steps, &b.program))
    });
    out
}

/// x* (or (x|z)*): a shortest program for x, the fastest among those.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShortestProgram {
    pub program: BitString,
    pub k: usize,
    pub steps: u64,
    /// Exact when no shorter program is left undecided.
    pub certainty: Certainty,
}

impl ShortestProgram {
    pub fn measured_k(&self) -> Measured<usize> {
        Measured::new(self.k, self.certainty)
    }
}

/// K(x|z) with z the table's auxiliary string.
pub fn k_of(x: &BitString, t_z: &HaltingTable) -> Result<ShortestProgram> {
    let best = producers(x, t_z).into_iter().next().ok_or_else(|| not_producible(x, t_z))?;
    let k = best.program.len();
    let exact = best.enumerated && t_z.is_exact_up_to(k - 1);
    Ok(ShortestProgram {
        program: best.program,
        k,
        steps: best.steps,
        certainty: Certainty::exact_if(exact, Certainty::UpperBound),
    })
}

/// K^{B(i)}(x|z): the shortest producer running at most B(i) steps.
pub fn kt_of(
    x: &BitString,
    i: usize,
    t_z: &HaltingTable,
    t_eps: &HaltingTable,
) -> Result<Measured<usize>> {
    let bound = busy_beaver(t_eps, i)?;
    let best = producers(x, t_z)
        .into_iter()
        .find(|p| p.steps <= bound.value)
        .ok_or_else(|| not_producible(x, t_z))?;
    let len = best.program.len();
    let exact = bound.certainty.is_exact() && best.enumerated && t_z.is_exact_up_to(len - 1);
    Ok(Measured::new(len, Certainty::exact_if(exact, Certainty::UpperBound)))
}

/// 𝓛_{x|z}, generated by (brt(p), |p|) over the producers of x.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TimeProfile {
    pub profile: Profile,
    /// Certainty of each generator's first coordinate, aligned with
    /// `profile.generators()`.
    pub certainties: Vec<Certainty>,
    pub shortest: ShortestProgram,
}

impl TimeProfile {
    /// 𝓓 = 𝓛 translated down by K.
    pub fn depth_profile(&self) -> Profile {
        self.profile.translate(-(self.shortest.k as i64)).0
    }

    /// bdepth_c read off the Y-graph of 𝓓.
    pub fn bdepth(&self, c: u32) -> Option<u32> {
        self.depth_profile().i_of(c)
    }
}

pub fn time_profile(x: &BitString, t_z: &HaltingTable, t_eps: &HaltingTable) -> Result<TimeProfile> {
    let shortest = k_of(x, t_z)?;
    let mut pts: Vec<(Point, Certainty)> = producers(x, t_z)
        .into_iter()
        .map(|p| {
            let brt = busy_running_time(t_eps, p.steps);
            ((brt.value as u32, p.program.len() as u32), brt.certainty)
        })
        .collect();
    let profile = Profile::close(pts.iter().map(|(pt, _)| *pt).collect::<Vec<_>>());
    // an exact witness of a generator wins over a bounded one
    pts.sort_by_key(|(pt, c)| (*pt, *c));
    let certainties = profile
        .generators()
        .iter()
        .map(|g| pts.iter().find(|(pt, _)| pt == g).map(|(_, c)| *c).expect("generator has a witness"))
        .collect();
    Ok(TimeProfile { profile, certainties, shortest })
}

/// bdepth_c(x|z) from its definition: the least busy running time among
/// producers at most c bits longer than a shortest one.
pub fn bdepth(
    x: &BitString,
    c: usize,
    t_z: &HaltingTable,
    t_eps: &HaltingTable,
) -> Result<Measured<usize>> {
    let k = k_of(x, t_z)?;
    producers(x, t_z)
        .into_iter()
        .filter(|p| p.program.len() <= k.k + c)
        .map(|p| busy_running_time(t_eps, p.steps))
        .min_by_key(|m| (m.value, m.certainty))
        .map(|m| Measured::new(m.value, m.certainty.and(k.certainty)))
        .ok_or_else(|| not_producible(x, t_z))
}

/// I(x:y) = K(y) − K(y|x*).
pub fn mutual_info(x: &BitString, y: &BitString, lab: &Lab) -> Result<Measured<i64>> {
    let t_eps = lab.eps()?;
    let k_y = k_of(y, &t_eps)?;
    let x_star = k_of(x, &t_eps)?;
    let k_y_given = k_of(y, &*lab.table(&x_star.program)?)?;
    Ok(Measured::new(
        k_y.k as i64 - k_y_given.k as i64,
        // an upper bound on K(y|x*) makes the difference a lower bound
        k_y.certainty.and(x_star.certainty).and(match k_y_given.certainty {
            Certainty::Exact => Certainty::Exact,
            _ => Certainty::LowerBound,
        }),
    ))
}

/// Σ 2^{-|p|} θ(p) over the halting programs of the ε table (those with
/// output `x` if given), with θ read on the Ω clock. Always a lower bound:
/// more programs may halt.
pub fn expected_theta(x: Option<&BitString>, t_eps: &HaltingTable) -> Measured<Dyadic> {
    let mut sum = Dyadic::zero();
    for (p, steps, out) in t_eps.halted() {
        if x.is_some_and(|x| x != out) {
            continue;
        }
        let theta = clock_reading(t_eps, steps).value as u64;
        sum += &Dyadic::mass(p.len()).scale(theta);
    }
    Measured::new(sum, Certainty::LowerBound)
}

fn sharp(p: &Profile, eps: u32) -> bool {
    sharp_finish(p, eps).unwrap_or(false)
}

fn show(v: Option<u32>) -> String {
    v.map_or_else(|| "inf".into(), |v| v.to_string())
}

/// Measured chain-rule constants over all pairs |x|, |y| ≤ n:
///
/// * `eqcr_defect` = K(x,y) − K(x) − K(y|x*), and `pair_overhead`, the extra
///   bits the pair code adds on top of |x| + |y|;
/// * `glue` (once, on the first row): the largest eqcr defect minus overhead;
/// * per certified i: `prop1_shift`, the least s with
///   K^{B(i+s)}(x,y) ≤ K^{B(i)}(x) + K^{B(i)}(y|x) + glue + overhead
///   ("inf" if none up to L), and `prop2_slack` =
///   K^{B(i)}(x) + K^{B(i)}(y|x) − K^{B(i)}(x,y);
/// * `closeness_pair_to_sum` / `closeness_sum_to_pair` between 𝓛_{x,y} and
///   𝓛_x + 𝓛_{y|x}.
pub fn chain_rule_report(n: usize, lab: &Lab) -> Result<Report> {
    let t_eps = lab.eps()?;
    let l = t_eps.max_len();
    let strings: Vec<BitString> = BitString::all_up_to(n).collect();

    struct Pair {
        x: BitString,
        y: BitString,
        kxy: ShortestProgram,
        kx: ShortestProgram,
        ky_xstar: ShortestProgram,
        overhead: usize,
    }
    let mut pairs = Vec::new();
    for x in &strings {
        let kx = k_of(x, &t_eps)?;
        let t_xstar = lab.table(&kx.program)?;
        for y in &strings {
            let xy = pair_encode(x, y);
            pairs.push(Pair {
                x: x.clone(),
                y: y.clone(),
                kxy: k_of(&xy, &t_eps)?,
                kx: kx.clone(),
                ky_xstar: k_of(y, &t_xstar)?,
                overhead: xy.len() - x.len() - y.len(),
            });
        }
    }
    let defect = |p: &Pair| p.kxy.k as i64 - p.kx.k as i64 - p.ky_xstar.k as i64;
    let glue = pairs.iter().map(|p| defect(p) - p.overhead as i64).max().unwrap_or(0);

    let mut report = Report::new("chainrule");
    let mut first = true;
    for p in &pairs {
        let (x, y) = (&p.x, &p.y);
        let cert = p.kxy.certainty.and(p.kx.certainty).and(p.ky_xstar.certainty);
        if first {
            report.push(x, Some(y), "glue", glue, cert);
            first = false;
        }
        report.push(x, Some(y), "K(x,y)", p.kxy.k, p.kxy.certainty);
        report.push(x, Some(y), "K(x)", p.kx.k, p.kx.certainty);
        report.push(x, Some(y), "K(y|x*)", p.ky_xstar.k, p.ky_xstar.certainty);
        report.push(x, Some(y), "eqcr_defect", defect(p), cert);
        report.push(x, Some(y), "pair_overhead", p.overhead, Certainty::Exact);

        let xy = pair_encode(x, y);
        let t_x = lab.table(x)?;
        for i in 0..=l {
            if !t_eps.is_exact_up_to(i) {
                break;
            }
            let (Ok(a), Ok(b), Ok(c)) =
                (kt_of(x, i, &t_eps, &t_eps), kt_of(y, i, &t_x, &t_eps), kt_of(&xy, i, &t_eps, &t_eps))
            else {
                continue;
            };
            let rhs = a.value as i64 + b.value as i64;
            let cert = a.certainty.and(b.certainty).and(c.certainty);
            let shift = (i..=l).find_map(|j| {
                let lhs = kt_of(&xy, j, &t_eps, &t_eps).ok()?;
                (lhs.value as i64 <= rhs + glue + p.overhead as i64).then_some((j - i) as u32)
            });
            report.push(x, Some(y), format!("prop1_shift@{i}"), show(shift), cert);
            report.push(x, Some(y), format!("prop2_slack@{i}"), rhs - c.value as i64, cert);
        }

        let l_xy = time_profile(&xy, &t_eps, &t_eps)?;
        let l_x = time_profile(x, &t_eps, &t_eps)?;
        let l_y_x = time_profile(y, &t_x, &t_eps)?;
        let sum = l_x.profile.sum(&l_y_x.profile);
        let (ab, ba) = closeness(&l_xy.profile, &sum);
        let cert = p.kxy.certainty.and(p.kx.certainty);
        report.push(x, Some(y), "closeness_pair_to_sum", show(ab), cert);
        report.push(x, Some(y), "closeness_sum_to_pair", show(ba), cert);
    }
    Ok(report)
}

/// bdepth₀(x,y) against max{bdepth₀(x), bdepth₀(y|x)} for every pair whose
/// profiles 𝓛_{x,y}, 𝓛_x and 𝓛_{y|x} all finish with a drop larger than
/// `eps`. Other pairs get a single `not_sharp` row.
pub fn depth_pair_report(n: usize, eps: u32, lab: &Lab) -> Result<Report> {
    let t_eps = lab.eps()?;
    let mut report = Report::new("depthpairs");
    for x in BitString::all_up_to(n) {
        let t_x = lab.table(&x)?;
        let l_x = time_profile(&x, &t_eps, &t_eps)?;
        for y in BitString::all_up_to(n) {
            let l_xy = time_profile(&pair_encode(&x, &y), &t_eps, &t_eps)?;
            let l_y_x = time_profile(&y, &t_x, &t_eps)?;
            let cert = l_xy
                .shortest
                .certainty
                .and(l_x.shortest.certainty)
                .and(l_y_x.shortest.certainty);
            if !(sharp(&l_xy.profile, eps) && sharp(&l_x.profile, eps) && sharp(&l_y_x.profile, eps)) {
                report.push(&x, Some(&y), "not_sharp", eps, Certainty::Exact);
                continue;
            }
            let pair = l_xy.bdepth(0).expect("sharp profiles are nonempty");
            let a = l_x.bdepth(0).expect("nonempty");
            let b = l_y_x.bdepth(0).expect("nonempty");
            report.push(&x, Some(&y), "bdepth0(x,y)", pair, cert);
            report.push(&x, Some(&y), "max(bdepth0(x),bdepth0(y|x))", a.max(b), cert);
            report.push(&x, Some(&y), "depth_defect", pair as i64 - a.max(b) as i64, cert);
        }
    }
    Ok(report)
}

fn not_producible(x: &BitString, t_z: &HaltingTable) -> Error {
    Error::NotProducible { x: x.to_string_or_dash(), z: t_z.z().to_string_or_dash() }
}
