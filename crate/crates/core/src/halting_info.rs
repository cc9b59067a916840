//! Relativized halting information: reach curves, the halting
//! materialization distribution H_z, the γ strings realizing a given H shape,
//! and the late-halter probes.

use serde::{Deserialize, Serialize};

use crate::certainty::{Certainty, Measured};
use crate::complexity::k_of;
use crate::encoding::{ceil_log2, BitString, Dyadic};
use crate::enumeration::{badger, busy_beaver, HaltingTable};
use crate::error::{Error, Result};
use crate::profile::Profile;
use crate::report::Report;

/// Outputs longer than the certified prefix by more than this many bits are
/// not considered as reach witnesses.
pub const REACH_SUFFIX_CAP: usize = 8;

/// A non-decreasing curve r(0), r(1), …, r(i_max).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReachCurve {
    pub points: Vec<Measured<u32>>,
    /// Length of the certified Ω prefix the search was limited to.
    pub s_max: usize,
}

impl ReachCurve {
    pub fn i_max(&self) -> u32 {
        self.points.len().saturating_sub(1) as u32
    }

    pub fn value(&self, i: usize) -> Option<Measured<u32>> {
        self.points.get(i).copied()
    }

    /// The upwards-and-leftwards closure of the points, stored as an ordinary
    /// profile after mirroring the first coordinate: (i, r) ↦ (i_max − i, r).
    /// Curves compared by closeness must share `i_max`.
    pub fn closure(&self) -> Profile {
        let top = self.i_max();
        Profile::close(
            self.points
                .iter()
                .enumerate()
                .map(|(i, m)| (top - i as u32, m.value))
                .collect::<Vec<_>>(),
        )
    }

    /// H(i) = r(i) − i.
    pub fn materialization(&self) -> Vec<Measured<i64>> {
        self.points
            .iter()
            .enumerate()
            .map(|(i, m)| Measured::new(m.value as i64 - i as i64, m.certainty))
            .collect()
    }
}

/// R_z(i) for i ≤ i_max: the longest prefix of Ω (within the certified
/// prefix of `t_eps`) that some halting program of length ≤ i outputs given
/// z, followed by anything, as long as the output read as a binary fraction
/// stays below Ω.
pub fn reach_curve(t_z: &HaltingTable, t_eps: &HaltingTable, i_max: usize) -> Result<ReachCurve> {
    let s_max = t_eps.certified_bits();
    if s_max == 0 {
        return Err(Error::NotStabilized { requested: 1, certified: 0 });
    }
    let prefix = t_eps.certified_prefix();
    let omega = t_eps.m_final();
    let i_top = i_max.min(t_z.max_len());
    let mut best_at_len = vec![0u32; i_top + 1];
    for (p, _, w) in t_z.halted() {
        if p.len() > i_top || w.len() > s_max + REACH_SUFFIX_CAP {
            continue;
        }
        if Dyadic::from_fraction_bits(w) >= omega {
            continue;
        }
        let s = w.common_prefix_len(&prefix).min(s_max) as u32;
        best_at_len[p.len()] = best_at_len[p.len()].max(s);
    }
    let mut points = Vec::with_capacity(i_max + 1);
    let mut r = 0;
    for i in 0..=i_max {
        if i <= i_top {
            r = r.max(best_at_len[i]);
        }
        let exact = i <= i_top
            && (r as usize) < s_max
            && t_z.is_exact_up_to(i)
            && t_eps.is_exact();
        points.push(Measured::new(r, Certainty::exact_if(exact, Certainty::LowerBound)));
    }
    Ok(ReachCurve { points, s_max })
}

/// The clock-connection curve: for each i, the number of Ω bits certified
/// stable at the j-step where i bits of Ω^z become stable. Stops at the
/// certified length of Ω^z (or at `i_max`).
pub fn reach_by_badger(t_z: &HaltingTable, t_eps: &HaltingTable, i_max: usize) -> Result<ReachCurve> {
    if t_z.budget() != t_eps.budget() {
        return Err(Error::BudgetMismatch);
    }
    let top = i_max.min(t_z.certified_bits());
    let mut points = Vec::with_capacity(i_max + 1);
    let mut last = Measured::new(0u32, Certainty::LowerBound);
    for i in 0..=i_max {
        if i <= top {
            let j = badger(t_z, i)?;
            let r = t_eps.stable_bits_at(j.value) as u32;
            let exact = j.certainty.is_exact() && t_eps.is_exact();
            last = Measured::new(r, Certainty::exact_if(exact, Certainty::LowerBound));
            points.push(last);
        } else {
            points.push(Measured::new(last.value, Certainty::LowerBound));
        }
    }
    Ok(ReachCurve { points, s_max: t_eps.certified_bits() })
}

/// H_z(i) = R_z(i) − i for i ≤ i_max.
pub fn hmd(t_z: &HaltingTable, t_eps: &HaltingTable, i_max: usize) -> Result<Vec<Measured<i64>>> {
    Ok(reach_curve(t_z, t_eps, i_max)?.materialization())
}

/// A non-decreasing, eventually constant step function h: ℕ → ℕ, given by
/// the positions where it increases and its values there. It is 0 before the
/// first position, which must be at least 1.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepFunction {
    steps: Vec<(usize, usize)>,
}

impl StepFunction {
    pub fn new(steps: Vec<(usize, usize)>) -> Result<Self> {
        let mut prev: Option<(usize, usize)> = None;
        for &(a, v) in &steps {
            let ok = match prev {
                // Ω positions are 1-based, so h(0) = 0
                None => a > 0 && v > 0,
                Some((pa, pv)) => a > pa && v > pv,
            };
            if !ok {
                return Err(Error::Parse(format!(
                    "steps must have increasing positions and increasing positive values: {steps:?}"
                )));
            }
            prev = Some((a, v));
        }
        Ok(StepFunction { steps })
    }

    pub fn value(&self, i: usize) -> usize {
        self.steps.iter().take_while(|(a, _)| *a <= i).last().map_or(0, |(_, v)| *v)
    }

    /// The (a_k, b_k) pairs: a_0 is the first position and b_0 = h(a_0); for
    /// k ≥ 1, a_k is the distance to the previous position and b_k the
    /// increase.
    pub fn increments(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.steps.len());
        let mut prev = (0, 0);
        for &(a, v) in &self.steps {
            out.push((a - prev.0, v - prev.1));
            prev = (a, v);
        }
        out
    }

    /// The Ω positions (1-based, inclusive ranges) whose bits go into γ:
    /// block k runs from the previous block's end plus a_k to that plus b_k.
    pub fn blocks(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = Vec::new();
        let mut end = 0;
        for (a, b) in self.increments() {
            let start = end + a;
            end = start + b;
            out.push((start, end));
        }
        out
    }
}

fn in_blocks(blocks: &[(usize, usize)], c: usize) -> bool {
    blocks.iter().any(|&(s, e)| s <= c && c <= e)
}

/// Bit c (1-based) of the certified Ω prefix.
fn omega_bit(prefix: &BitString, c: usize) -> Result<bool> {
    prefix.get(c - 1).ok_or(Error::PrefixTooShort { needed: c, available: prefix.len() })
}

/// γ: the Ω bits in the blocks of `h`, in order.
pub fn build_gamma(h: &StepFunction, t_eps: &HaltingTable) -> Result<BitString> {
    let prefix = t_eps.certified_prefix();
    let mut gamma = BitString::new();
    for (s, e) in h.blocks() {
        if e > prefix.len() {
            return Err(Error::PrefixTooShort { needed: e, available: prefix.len() });
        }
        for c in s..=e {
            gamma.push(omega_bit(&prefix, c)?);
        }
    }
    Ok(gamma)
}

/// δ: the Ω bits in positions 1..=i + h(i) that γ leaves out.
pub fn patch_advice(h: &StepFunction, i: usize, t_eps: &HaltingTable) -> Result<BitString> {
    let prefix = t_eps.certified_prefix();
    let n = i + h.value(i);
    if n > prefix.len() {
        return Err(Error::PrefixTooShort { needed: n, available: prefix.len() });
    }
    let blocks = h.blocks();
    let mut delta = BitString::new();
    for c in 1..=n {
        if !in_blocks(&blocks, c) {
            delta.push(omega_bit(&prefix, c)?);
        }
    }
    Ok(delta)
}

/// Interleaves γ and δ back into n bits of Ω: block positions take γ's bits,
/// the holes take δ's.
pub fn reassemble(h: &StepFunction, gamma: &BitString, delta: &BitString, n: usize) -> Result<BitString> {
    let blocks = h.blocks();
    let mut g = gamma.bits().iter();
    let mut d = delta.bits().iter();
    let mut out = BitString::new();
    for c in 1..=n {
        let next = if in_blocks(&blocks, c) { g.next() } else { d.next() };
        out.push(*next.ok_or_else(|| Error::Parse(format!("γ/δ too short for {n} bits")))?);
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LateHalters {
    pub k: usize,
    pub s: i64,
    /// B(k − s), the step threshold.
    pub threshold: u64,
    /// Halting programs of length ≤ k running more than the threshold.
    pub count: usize,
    /// ⌈log₂ count⌉ − s, absent when count is 0.
    pub slack: Option<i64>,
}

/// Counts the programs of length ≤ k that halt after B(k − s) steps.
pub fn late_halters(t: &HaltingTable, k: usize, s: i64) -> Result<LateHalters> {
    let base = k as i64 - s;
    if base < 0 || base as usize > t.max_len() || k > t.max_len() {
        return Err(Error::OutOfBudget { n: k.max(base.max(0) as usize), max_len: t.max_len() });
    }
    if !t.is_exact_up_to(k.max(base as usize)) {
        return Err(Error::NotExact(format!("undecided programs of length ≤ {}", k.max(base as usize))));
    }
    let threshold = busy_beaver(t, base as usize)?.value;
    let count = t.halted().filter(|(p, steps, _)| p.len() <= k && *steps > threshold).count();
    let slack = (count > 0).then(|| ceil_log2(count as u64) as i64 - s);
    Ok(LateHalters { k, s, threshold, count, slack })
}

/// late_halters for every k in `ks` that the table covers exactly and every
/// s from −1 to k.
pub fn late_halters_report(t: &HaltingTable, ks: std::ops::RangeInclusive<usize>) -> Result<Report> {
    let mut report = Report::new("latehalters");
    let empty = BitString::new();
    for k in ks {
        if k > t.max_len() || !t.is_exact_up_to(k) {
            break;
        }
        for s in -1..=k as i64 {
            let lh = late_halters(t, k, s)?;
            let q = |name: &str| format!("{name}@k={k},s={s}");
            report.push(&empty, None, q("threshold"), lh.threshold, Certainty::Exact);
            report.push(&empty, None, q("count"), lh.count, Certainty::Exact);
            report.push(&empty, None, q("slack"), lh.slack.map_or("-".into(), |v| v.to_string()), Certainty::Exact);
        }
    }
    Ok(report)
}

/// Position of x* counted from the end when the halting programs of length
/// ≤ K(x) are sorted by running time (ties by program order); 1 means x* is
/// the slowest.
pub fn holographic_rank(x: &BitString, t: &HaltingTable) -> Result<usize> {
    let star = k_of(x, t)?;
    if !star.certainty.is_exact() || !t.is_exact_up_to(star.k) {
        return Err(Error::NotExact(format!("K({}) is only bounded", x.to_string_or_dash())));
    }
    let key = (star.steps, star.program);
    Ok(t.halted()
        .filter(|(p, steps, _)| p.len() <= key.1.len() && (*steps, p) >= (key.0, &key.1))
        .count())
}
