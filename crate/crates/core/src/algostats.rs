//! Finite-set models, two-part descriptions, description profiles Λ,
//! structure functions, the sophistication variants, Θ-profiles and the
//! antistochasticity survey.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::certainty::{Certainty, Measured};
use crate::complexity::{k_of, producers, time_profile, ShortestProgram};
use crate::encoding::{ceil_log2, decode_number, encode_number, pair_encode, BitString, Dyadic};
use crate::enumeration::{clock_reading, Clock, Dovetail, HaltingTable};
use crate::error::{Error, Result};
use crate::halting_info::{holographic_rank, reach_curve};
use crate::lab::Lab;
use crate::machine::{PrefixMachine, U0};
use crate::profile::{closeness, sharp_finish, Point, Profile};
use crate::report::Report;

/// The two-part executor α. U0 cannot interpret programs, so α is carried
/// out by [`run_two_part`]; these bits only stand for it in descriptions.
pub const ALPHA: &str = "111";
pub const ALPHA_LEN: usize = 3;

/// Canonical set code: `encode_number(|S|)`, then for each element in
/// length-lex order `encode_number(|e|) e`.
pub fn encode_set(elements: &[BitString]) -> BitString {
    debug_assert!(elements.windows(2).all(|w| w[0] < w[1]), "elements must be sorted and distinct");
    let mut code = encode_number(elements.len() as u64);
    for e in elements {
        code.extend_from(&encode_number(e.len() as u64));
        code.extend_from(e);
    }
    code
}

/// Inverse of [`encode_set`]; `None` unless `code` is exactly a canonical
/// code of a nonempty set.
pub fn decode_set(code: &BitString) -> Option<Vec<BitString>> {
    let (n, mut pos) = decode_number(code, 0).ok()?;
    if n == 0 || n > code.len() as u64 {
        return None;
    }
    let mut out: Vec<BitString> = Vec::with_capacity(n as usize);
    for _ in 0..n {
        let (len, p) = decode_number(code, pos).ok()?;
        let end = p.checked_add(len as usize)?;
        if end > code.len() {
            return None;
        }
        let e = code.slice(p, end);
        if out.last().is_some_and(|last| *last >= e) {
            return None;
        }
        out.push(e);
        pos = end;
    }
    (pos == code.len()).then_some(out)
}

/// A finite set containing x, with the complexity of its code.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Model {
    pub elements: Vec<BitString>,
    pub encoding: BitString,
    /// K(encoding | z).
    pub k_model: Measured<usize>,
    /// A shortest program printing the encoding, and its running time.
    pub witness_program: BitString,
    pub witness_steps: u64,
    /// The auxiliary string the witness runs with.
    pub z: BitString,
    /// ⌈log₂ |S|⌉.
    pub log_card: usize,
}

impl Model {
    pub fn new(elements: Vec<BitString>, t_z: &HaltingTable) -> Result<Model> {
        let encoding = encode_set(&elements);
        let star = k_of(&encoding, t_z)?;
        let log_card = ceil_log2(elements.len() as u64);
        Ok(Model {
            elements,
            encoding,
            k_model: star.measured_k(),
            witness_program: star.program,
            witness_steps: star.steps,
            z: t_z.z().clone(),
            log_card,
        })
    }

    pub fn contains(&self, x: &BitString) -> bool {
        self.elements.binary_search(x).is_ok()
    }

    /// K(S) + ⌈log |S|⌉ + |α|.
    pub fn two_part_length(&self) -> usize {
        self.k_model.value + self.log_card + ALPHA_LEN
    }
}

/// Every set containing x that some halting program of the table prints,
/// plus the singleton {x} (whose code always has at least the print-literal
/// program). Sorted by encoding.
pub fn models_of(x: &BitString, t_z: &HaltingTable) -> Result<Vec<Model>> {
    let mut sets: BTreeMap<BitString, Vec<BitString>> = BTreeMap::new();
    for out in t_z.outputs() {
        if let Some(elements) = decode_set(out) {
            if elements.binary_search(x).is_ok() {
                sets.insert(out.clone(), elements);
            }
        }
    }
    let singleton = vec![x.clone()];
    sets.entry(encode_set(&singleton)).or_insert(singleton);
    sets.into_values().map(|e| Model::new(e, t_z)).collect()
}

/// D(S*, i) = α S* i.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwoPartDescription {
    pub alpha: BitString,
    pub s_star: BitString,
    /// Rank of x in S, written with exactly ⌈log |S|⌉ bits.
    pub index: BitString,
    pub total_length: usize,
}

impl TwoPartDescription {
    pub fn bits(&self) -> BitString {
        self.alpha.concat(&self.s_star).concat(&self.index)
    }
}

/// Builds α S* i and checks it by running it.
pub fn two_part(model: &Model, x: &BitString) -> Result<TwoPartDescription> {
    let rank = model
        .elements
        .binary_search(x)
        .map_err(|_| Error::NotMember { x: x.to_string_or_dash() })?;
    let index = BitString::from_uint(rank as u64, model.log_card);
    let alpha: BitString = ALPHA.parse().expect("constant");
    let total_length = alpha.len() + model.witness_program.len() + index.len();
    let d = TwoPartDescription { alpha, s_star: model.witness_program.clone(), index, total_length };
    if run_two_part(&d.bits(), &model.z, model.witness_steps).as_ref() != Some(x) {
        return Err(Error::NotProducible {
            x: format!("{} from its two-part description", x.to_string_or_dash()),
            z: model.z.to_string_or_dash(),
        });
    }
    Ok(d)
}

/// The executor α: strips α, runs S* self-delimitingly on U0 to get the set
/// code, then reads ⌈log |S|⌉ index bits and returns that element. `None` if
/// any stage fails.
pub fn run_two_part(description: &BitString, z: &BitString, budget: u64) -> Option<BitString> {
    if description.len() < ALPHA_LEN || description.prefix(ALPHA_LEN).to_string() != ALPHA {
        return None;
    }
    let rest = description.slice(ALPHA_LEN, description.len());
    let (code, used, _) = U0::new().run_self_delimiting(&rest, z, budget)?;
    let set = decode_set(&code)?;
    let width = ceil_log2(set.len() as u64);
    if rest.len() != used + width {
        return None;
    }
    let rank = rest.slice(used, rest.len()).to_uint() as usize;
    set.get(rank).cloned()
}

/// Λ_{x|z} with the models it was built from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DescProfile {
    pub profile: Profile,
    pub shortest: ShortestProgram,
    pub models: Vec<Model>,
}

impl DescProfile {
    /// Δ = Λ translated down by K(x|z).
    pub fn delta(&self) -> Profile {
        self.profile.translate(-(self.shortest.k as i64)).0
    }

    /// soph_c read off the Y-graph of Δ.
    pub fn soph_from_graph(&self, c: u32) -> Option<u32> {
        self.delta().i_of(c)
    }

    /// λ(i), the X-graph of Λ.
    pub fn lambda(&self, i: u32) -> Option<u32> {
        self.profile.psi(i)
    }
}

pub fn desc_profile(x: &BitString, t_z: &HaltingTable) -> Result<DescProfile> {
    let shortest = k_of(x, t_z)?;
    let models = models_of(x, t_z)?;
    let profile = Profile::close(
        models
            .iter()
            .map(|m| (m.k_model.value as u32, m.two_part_length() as u32))
            .collect::<Vec<_>>(),
    );
    Ok(DescProfile { profile, shortest, models })
}

/// λ_x, h_x and β_x on i = 0..=i_max, where i_max is the largest model
/// complexity. `None` where no model is simple enough.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureFunctions {
    pub lambda: Vec<Option<u32>>,
    pub h: Vec<Option<u32>>,
    pub beta: Vec<Option<i64>>,
}

/// Unconditional structure functions. β needs K(x | S) for each model, from a
/// table swept with the model's code as auxiliary string.
pub fn structure_functions(x: &BitString, lab: &Lab) -> Result<StructureFunctions> {
    let t_eps = lab.eps()?;
    let dp = desc_profile(x, &t_eps)?;
    let mut deficiency = Vec::with_capacity(dp.models.len());
    for m in &dp.models {
        let k_given = k_of(x, &*lab.table(&m.encoding)?)?;
        deficiency.push(m.log_card as i64 - k_given.k as i64);
    }
    let i_max = dp.models.iter().map(|m| m.k_model.value).max().unwrap_or(0);
    let mut out = StructureFunctions { lambda: vec![], h: vec![], beta: vec![] };
    for i in 0..=i_max {
        let fits = || dp.models.iter().enumerate().filter(move |(_, m)| m.k_model.value <= i);
        out.lambda.push(dp.lambda(i as u32));
        out.h.push(fits().map(|(_, m)| m.log_card as u32).min());
        out.beta.push(fits().map(|(k, _)| deficiency[k]).min());
    }
    Ok(out)
}

/// soph_c(x|z) from its definition.
pub fn soph(x: &BitString, c: u32, t_z: &HaltingTable) -> Result<Measured<usize>> {
    let dp = desc_profile(x, t_z)?;
    soph_in(&dp, c)
}

fn soph_in(dp: &DescProfile, c: u32) -> Result<Measured<usize>> {
    let limit = dp.shortest.k + c as usize;
    dp.models
        .iter()
        .filter(|m| m.two_part_length() <= limit)
        .map(|m| m.k_model)
        .min_by_key(|m| m.value)
        .map(|m| Measured::new(m.value, m.certainty.and(dp.shortest.certainty)))
        .ok_or(Error::NoSufficientModel { c })
}

/// Coarse sophistication min_c (soph_c + c).
pub fn csoph(x: &BitString, t_z: &HaltingTable) -> Result<Measured<usize>> {
    let dp = desc_profile(x, t_z)?;
    // beyond this slack every model qualifies
    let c_top = dp
        .models
        .iter()
        .map(|m| m.two_part_length().saturating_sub(dp.shortest.k))
        .max()
        .unwrap_or(0) as u32;
    (0..=c_top)
        .filter_map(|c| soph_in(&dp, c).ok().map(|s| Measured::new(s.value + c as usize, s.certainty)))
        .min_by_key(|m| m.value)
        .ok_or(Error::NoSufficientModel { c: c_top })
}

/// Θ̃_{y|z} (Ω^z clock) and Θ̂_{y|z} (Ω clock), from the dots (θ(p), |p|)
/// of the producers of y given z.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThetaProfiles {
    pub tilde: Profile,
    pub hat: Profile,
    /// Worst certainty among the clock readings of the generators' witnesses.
    pub tilde_certainty: Certainty,
    pub hat_certainty: Certainty,
    pub shortest: ShortestProgram,
}

pub fn theta_profiles(y: &BitString, t_z: &HaltingTable, t_eps: &HaltingTable) -> Result<ThetaProfiles> {
    if t_z.budget() != t_eps.budget() {
        return Err(Error::BudgetMismatch);
    }
    let shortest = k_of(y, t_z)?;
    let mut tilde_pts = Vec::new();
    let mut hat_pts = Vec::new();
    for p in producers(y, t_z) {
        let len = p.program.len() as u32;
        let a = clock_reading(t_z, p.steps);
        let b = clock_reading(t_eps, p.steps);
        tilde_pts.push(((a.value as u32, len), a.certainty));
        hat_pts.push(((b.value as u32, len), b.certainty));
    }
    let (tilde, tilde_certainty) = close_with_certainty(&tilde_pts);
    let (hat, hat_certainty) = close_with_certainty(&hat_pts);
    Ok(ThetaProfiles { tilde, hat, tilde_certainty, hat_certainty, shortest })
}

fn close_with_certainty(pts: &[(Point, Certainty)]) -> (Profile, Certainty) {
    let profile = Profile::close(pts.iter().map(|(p, _)| *p).collect::<Vec<_>>());
    let mut cert = Certainty::Exact;
    for g in profile.generators() {
        let best = pts.iter().filter(|(p, _)| p == g).map(|(_, c)| *c).min().expect("witnessed");
        cert = cert.and(best);
    }
    (profile, cert)
}

/// Rebuilds gen(Θ) from x* and its clock time θ alone, by replaying the
/// dovetail: a first run until x* halts yields the Ω bits that were stable
/// just before (θ − 1 of them, by the definition of the clock), and a second
/// run marks a dot (θ(p), |p|) for every producer, reading each clock time
/// against those bits. Clock times at or beyond θ are dominated by x*'s own
/// dot and are capped at θ.
///
/// With `Clock::OmegaZ` the clock is the z tail's sum (Θ̃), with
/// `Clock::Omega` the ε tail's (Θ̂); z is the auxiliary string of `t_z`.
pub fn reconstruct_theta(
    x_star: &BitString,
    theta: usize,
    which: Clock,
    t_z: &HaltingTable,
) -> Result<Vec<Point>> {
    let machine = U0::new();
    let z = t_z.z().clone();
    let clock_z = match which {
        Clock::OmegaZ => z.clone(),
        Clock::Omega => BitString::new(),
    };
    let l = t_z.max_len();
    let cap = t_z.budget().max_jsteps;

    let (rt, x) = match machine.run(x_star, &z, cap) {
        crate::machine::ExecutionResult::Success { steps, output } => (steps, output),
        _ => {
            return Err(Error::NotProducible {
                x: format!("a halt of {}", x_star.to_string_or_dash()),
                z: z.to_string_or_dash(),
            })
        }
    };

    // first pass: the clock tail up to the j-step before x* halts
    let mut clock = Dovetail::new(&machine, &clock_z, l);
    while clock.jstep() + 1 < rt {
        clock.step();
    }
    let omega_bits = if theta == 0 {
        BitString::new()
    } else {
        clock.m_at(rt - 1).prefix_bits(theta as u32 - 1)
    };
    let reading = |m: &Dyadic, steps: u64| -> u32 {
        if steps <= 1 || theta == 0 {
            return 0;
        }
        let agree = m.prefix_bits(omega_bits.len() as u32).common_prefix_len(&omega_bits);
        (agree + 1).min(theta) as u32
    };

    // second pass: both tails, far enough for every program that can halt
    // no later than x*
    let horizon = rt.max(l as u64).min(cap);
    let mut tail = Dovetail::new(&machine, &z, l);
    let mut clock = Dovetail::new(&machine, &clock_z, l);
    let mut dots = Vec::new();
    while tail.jstep() < horizon {
        clock.step();
        for h in tail.step() {
            if h.output == x {
                dots.push((h.program.len() as u32, h.steps));
            }
        }
    }
    let literal = crate::machine::print_literal(&x);
    if literal.len() > l {
        dots.push((literal.len() as u32, x.len() as u64 + 1));
    }
    let pts: Vec<Point> = dots
        .into_iter()
        .map(|(len, steps)| (reading(&clock.m_at(steps.saturating_sub(1)), steps), len))
        .collect();
    Ok(Profile::close(pts).generators().to_vec())
}

/// Parameter-free sophistication: min { i : (i, K(y|z)) ∈ Θ̃_{y|z} }.
pub fn soph_free(y: &BitString, t_z: &HaltingTable, t_eps: &HaltingTable) -> Result<Measured<u32>> {
    let tp = theta_profiles(y, t_z, t_eps)?;
    let i = tp.tilde.i_of(tp.shortest.k as u32).expect("x* witnesses height K");
    Ok(Measured::new(i, tp.tilde_certainty.and(tp.shortest.certainty)))
}

/// How far (K(x), |x|) lies outside Λ_x along the diagonal: the least e ≥ 0
/// with (K(x) + e, |x| + e) ∈ Λ_x. Zero when the point is already in Λ_x;
/// larger values mean x is ε-antistochastic for smaller, even negative, ε.
pub fn antistochasticity(x: &BitString, t_z: &HaltingTable) -> Result<Measured<u32>> {
    let dp = desc_profile(x, t_z)?;
    let (k, n) = (dp.shortest.k as u32, x.len() as u32);
    let e = (0..)
        .find(|&e| dp.profile.contains((k + e, n + e)))
        .expect("Λ is nonempty, so large enough points are in it");
    let cert = dp
        .models
        .iter()
        .fold(dp.shortest.certainty, |c, m| c.and(m.k_model.certainty));
    Ok(Measured::new(e, cert))
}

fn show(v: Option<u32>) -> String {
    v.map_or_else(|| "inf".into(), |v| v.to_string())
}

/// One row block per string of length n (K, bdepth₀, soph, antistochasticity,
/// holographic rank, gen(𝓛_x), gen(Λ_x)), the Kraft sum Σ 2^{-K(x)}, and for
/// the most antistochastic string z and each split z = xy the conditional
/// profiles 𝓛_{y|x}, Λ_{y|x}, Θ̃_{y|x}, Θ̂_{y|x} with their closeness.
pub fn survey(n: usize, lab: &Lab) -> Result<Report> {
    let t_eps = lab.eps()?;
    let mut report = Report::new("survey");
    let mut kraft = Dyadic::zero();
    let mut kraft_cert = Certainty::Exact;
    let mut most: Option<(u32, BitString)> = None;
    for x in BitString::all_of_length(n) {
        let lp = time_profile(&x, &t_eps, &t_eps)?;
        let dp = desc_profile(&x, &t_eps)?;
        let k = lp.shortest.measured_k();
        kraft += &Dyadic::mass(k.value);
        kraft_cert = kraft_cert.and(k.certainty);
        let anti = antistochasticity(&x, &t_eps)?;
        let sf = soph_free(&x, &t_eps, &t_eps)?;
        report.push(&x, None, "K", k.value, k.certainty);
        report.push(&x, None, "bdepth0", show(lp.bdepth(0)), lp.certainties.last().copied().unwrap_or(Certainty::Exact));
        report.push(&x, None, "soph_free", sf.value, sf.certainty);
        report.push(&x, None, "soph_free-bdepth0", sf.value as i64 - lp.bdepth(0).unwrap_or(0) as i64, sf.certainty);
        report.push(&x, None, "antistochasticity", anti.value, anti.certainty);
        match holographic_rank(&x, &t_eps) {
            Ok(r) => report.push(&x, None, "holographic_rank", r, Certainty::Exact),
            Err(e) if e.is_budget_insufficiency() => report.push(&x, None, "holographic_rank", "n/a", Certainty::LowerBound),
            Err(e) => return Err(e),
        }
        report.push(&x, None, "gen(L)", &lp.profile, k.certainty);
        report.push(&x, None, "gen(Lambda)", &dp.profile, k.certainty);
        if most.as_ref().is_none_or(|(a, _)| anti.value > *a) {
            most = Some((anti.value, x.clone()));
        }
    }
    let empty = BitString::new();
    report.push(&empty, None, "kraft_sum_2^-K", &kraft, kraft_cert);
    let Some((_, z)) = most else { return Ok(report) };
    report.push(&z, None, "most_antistochastic", z.to_string_or_dash(), Certainty::Exact);
    for cut in 0..=z.len() {
        let x = z.prefix(cut);
        let y = z.slice(cut, z.len());
        let t_x = lab.table(&x)?;
        let l_x = time_profile(&x, &t_eps, &t_eps)?;
        let l_yx = time_profile(&y, &t_x, &t_eps)?;
        let d_yx = desc_profile(&y, &t_x)?;
        let th = theta_profiles(&y, &t_x, &t_eps)?;
        let cert = l_yx.shortest.certainty;
        report.push(&x, Some(&y), "gen(L_x)", &l_x.profile, l_x.shortest.certainty);
        report.push(&x, Some(&y), "gen(L_y|x)", &l_yx.profile, cert);
        report.push(&x, Some(&y), "gen(Lambda_y|x)", &d_yx.profile, cert);
        report.push(&x, Some(&y), "gen(Theta~_y|x)", &th.tilde, th.tilde_certainty);
        report.push(&x, Some(&y), "gen(Theta^_y|x)", &th.hat, th.hat_certainty);
        let pairs: [(&str, &Profile, &Profile); 4] = [
            ("Lambda_y|x~L_y|x", &d_yx.profile, &l_yx.profile),
            ("Theta^_y|x~L_y|x", &th.hat, &l_yx.profile),
            ("Theta~_y|x~Lambda_y|x", &th.tilde, &d_yx.profile),
            ("Theta~_y|x~Theta^_y|x", &th.tilde, &th.hat),
        ];
        for (name, a, b) in pairs {
            let (ab, ba) = closeness(a, b);
            report.push(&x, Some(&y), format!("closeness({name})"), format!("{};{}", show(ab), show(ba)), cert);
        }
    }
    Ok(report)
}

/// The soph-pair law: for pairs whose Θ-profiles Θ_{x,y}, Θ_x and Θ̃_{y|x} all
/// finish with a drop larger than `eps`, tabulates soph(x,y) against
/// max{soph(x), R_x(soph(y|x))}.
pub fn soph_pair_report(n: usize, eps: u32, lab: &Lab) -> Result<Report> {
    let t_eps = lab.eps()?;
    let l = t_eps.max_len();
    let mut report = Report::new("sophpairs");
    for x in BitString::all_up_to(n) {
        let t_x = lab.table(&x)?;
        let th_x = theta_profiles(&x, &t_eps, &t_eps)?;
        let reach = reach_curve(&t_x, &t_eps, l)?;
        for y in BitString::all_up_to(n) {
            let xy = pair_encode(&x, &y);
            let th_xy = theta_profiles(&xy, &t_eps, &t_eps)?;
            let th_yx = theta_profiles(&y, &t_x, &t_eps)?;
            let sharp = |p: &Profile| sharp_finish(p, eps).unwrap_or(false);
            if !(sharp(&th_xy.hat) && sharp(&th_x.hat) && sharp(&th_yx.tilde)) {
                report.push(&x, Some(&y), "not_sharp", eps, Certainty::Exact);
                continue;
            }
            let s_xy = soph_free(&xy, &t_eps, &t_eps)?;
            let s_x = soph_free(&x, &t_eps, &t_eps)?;
            let s_yx = soph_free(&y, &t_x, &t_eps)?;
            let r = match reach.value(s_yx.value as usize) {
                Some(r) => r,
                None => Measured::new(reach.points.last().map_or(0, |m| m.value), Certainty::LowerBound),
            };
            let rhs = s_x.value.max(r.value);
            let cert = s_xy.certainty.and(s_x.certainty).and(s_yx.certainty).and(r.certainty);
            report.push(&x, Some(&y), "soph(x,y)", s_xy.value, cert);
            report.push(&x, Some(&y), "max(soph(x),R_x(soph(y|x)))", rhs, cert);
            report.push(&x, Some(&y), "soph_pair_defect", s_xy.value as i64 - rhs as i64, cert);
        }
    }
    Ok(report)
}

/// Profile equivalences measured over all y with |y| ≤ n and z with
/// |z| ≤ min(n, 2): closeness of 𝓛_{y|z} with Λ_{y|z}, of Θ̂_{y|z} with
/// 𝓛_{y|z} and of Θ̃_{y|z} with Λ_{y|z}. For z = ε also soph_free − bdepth₀,
/// the largest gap h(i) + i + |α| − λ(i) between two structure functions,
/// the number of c ≤ 8 where soph_c by formula and by graph disagree, and
/// whether every two-part description of y runs back to y.
pub fn equivalences_report(n: usize, lab: &Lab) -> Result<Report> {
    let t_eps = lab.eps()?;
    let mut report = Report::new("equivalences");
    for z in BitString::all_up_to(n.min(2)) {
        let t_z = lab.table(&z)?;
        for y in BitString::all_up_to(n) {
            let lp = time_profile(&y, &t_z, &t_eps)?;
            let dp = desc_profile(&y, &t_z)?;
            let th = theta_profiles(&y, &t_z, &t_eps)?;
            let cert = lp.shortest.certainty;
            let pairs: [(&str, &Profile, &Profile, Certainty); 3] = [
                ("closeness(L,Lambda)", &lp.profile, &dp.profile, cert),
                ("closeness(Theta^,L)", &th.hat, &lp.profile, cert.and(th.hat_certainty)),
                ("closeness(Theta~,Lambda)", &th.tilde, &dp.profile, cert.and(th.tilde_certainty)),
            ];
            for (name, a, b, c) in pairs {
                let (ab, ba) = closeness(a, b);
                report.push(&y, Some(&z), name, format!("{};{}", show(ab), show(ba)), c);
            }
            if !z.is_empty() {
                continue;
            }
            let sf = soph_free(&y, &t_eps, &t_eps)?;
            let b0 = lp.bdepth(0).expect("nonempty profile");
            report.push(&y, Some(&z), "soph_free-bdepth0", sf.value as i64 - b0 as i64, sf.certainty);

            let st = structure_functions(&y, lab)?;
            let gap = (0..st.lambda.len())
                .filter_map(|i| Some(st.h[i]? as i64 + i as i64 + ALPHA_LEN as i64 - st.lambda[i]? as i64))
                .max();
            report.push(&y, Some(&z), "affine_gap(h,lambda)", gap.map_or("inf".into(), |g| g.to_string()), cert);

            let mismatches = (0..=8u32)
                .filter(|&c| soph_in(&dp, c).ok().map(|m| m.value as u32) != dp.soph_from_graph(c))
                .count();
            report.push(&y, Some(&z), "soph_formula_vs_graph_mismatches", mismatches, Certainty::Exact);

            let mut ok = true;
            for m in &dp.models {
                let d = two_part(m, &y)?;
                ok &= d.total_length == m.two_part_length();
            }
            report.push(&y, Some(&z), "two_part_verified", ok, Certainty::Exact);
        }
    }
    Ok(report)
}
