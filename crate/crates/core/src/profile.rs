//! Upwards-and-rightwards closed subsets of ℕ², stored by their generators.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Point = (u32, u32);

/// A profile: the set of points (i', ψ') dominating some generator (i, ψ),
/// i.e. i ≤ i' and ψ ≤ ψ'.
///
/// Generators are kept as a canonical antichain sorted by strictly
/// increasing i (and therefore strictly decreasing ψ), so equal sets have
/// identical representations.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Profile {
    gens: Vec<Point>,
}

impl Profile {
    pub fn empty() -> Self {
        Profile::default()
    }

    /// The closure of an arbitrary point set.
    pub fn close(points: impl IntoIterator<Item = Point>) -> Self {
        let mut pts: Vec<Point> = points.into_iter().collect();
        pts.sort_unstable();
        let mut gens: Vec<Point> = Vec::new();
        for (i, psi) in pts {
            // sorted by i then ψ: a point survives iff it is strictly lower
            // than everything kept so far (which also drops repeated columns)
            if gens.last().is_none_or(|&(_, last)| psi < last) {
                gens.push((i, psi));
            }
        }
        Profile { gens }
    }

    pub fn generators(&self) -> &[Point] {
        &self.gens
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn contains(&self, (i, psi): Point) -> bool {
        self.gens.iter().any(|&(gi, gp)| gi <= i && gp <= psi)
    }

    /// ψ(i): the lowest height in column i, if the column is nonempty.
    pub fn psi(&self, i: u32) -> Option<u32> {
        let k = self.gens.partition_point(|&(gi, _)| gi <= i);
        (k > 0).then(|| self.gens[k - 1].1)
    }

    /// i(ψ): the leftmost position in row ψ, if the row is nonempty.
    pub fn i_of(&self, psi: u32) -> Option<u32> {
        let k = self.gens.partition_point(|&(_, gp)| gp > psi);
        (k < self.gens.len()).then(|| self.gens[k].0)
    }

    /// Largest coordinate of any generator.
    pub fn max_coord(&self) -> u32 {
        self.gens.iter().map(|&(i, p)| i.max(p)).max().unwrap_or(0)
    }

    pub fn x_graph(&self) -> Result<GraphFn> {
        if self.is_empty() {
            return Err(Error::EmptyProfile);
        }
        Ok(GraphFn { kind: GraphKind::X, points: self.gens.clone() })
    }

    pub fn y_graph(&self) -> Result<GraphFn> {
        if self.is_empty() {
            return Err(Error::EmptyProfile);
        }
        let points = self.gens.iter().rev().map(|&(i, p)| (p, i)).collect();
        Ok(GraphFn { kind: GraphKind::Y, points })
    }

    /// Points of ∂Ψ inside the box [0, bound]²: members with a 4-neighbour in
    /// ℕ² outside the profile.
    pub fn boundary(&self, bound: u32) -> Vec<Point> {
        let mut out = Vec::new();
        for i in 0..=bound {
            for psi in 0..=bound {
                if self.contains((i, psi))
                    && ((i > 0 && !self.contains((i - 1, psi)))
                        || (psi > 0 && !self.contains((i, psi - 1))))
                {
                    out.push((i, psi));
                }
            }
        }
        out
    }

    /// Shifts every generator by `dy` on the Y axis. Heights that would go
    /// negative are clipped to 0; the flag reports whether that happened.
    pub fn translate(&self, dy: i64) -> (Profile, bool) {
        let mut clipped = false;
        let pts = self.gens.iter().map(|&(i, p)| {
            let v = p as i64 + dy;
            if v < 0 {
                clipped = true;
            }
            (i, v.max(0) as u32)
        });
        let out = Profile::close(pts.collect::<Vec<_>>());
        (out, clipped)
    }

    /// {(i, ψ + φ) : (i, ψ) ∈ self, (i, φ) ∈ other}.
    pub fn sum(&self, other: &Profile) -> Profile {
        let (Some(&(a0, _)), Some(&(b0, _))) = (self.gens.first(), other.gens.first()) else {
            return Profile::empty();
        };
        let start = a0.max(b0);
        let cols = self
            .gens
            .iter()
            .chain(&other.gens)
            .map(|&(i, _)| i.max(start));
        Profile::close(
            cols.map(|i| (i, self.psi(i).unwrap() + other.psi(i).unwrap()))
                .collect::<Vec<_>>(),
        )
    }

    /// Least ε such that every generator of `self` lies within L∞ distance ε
    /// of `other`; `None` when no ε works (only possible for an empty
    /// `other`).
    pub fn closeness_to(&self, other: &Profile) -> Option<u32> {
        let mut worst = 0;
        for &(gi, gp) in &self.gens {
            let best = other
                .gens
                .iter()
                .map(|&(hi, hp)| hi.saturating_sub(gi).max(hp.saturating_sub(gp)))
                .min()?;
            worst = worst.max(best);
        }
        Some(worst)
    }

    /// Least ε with ψ(i) + ε ≥ φ(i + ε) wherever ψ is defined, searched up to
    /// the bounding box of both profiles.
    pub fn closeness_by_graphs(&self, other: &Profile) -> Option<u32> {
        if self.is_empty() {
            return Some(0);
        }
        let bound = 2 * self.max_coord().max(other.max_coord()) + 1;
        (0..=bound).find(|&eps| {
            // ψ only changes at generators, and φ(i + ε) is non-increasing,
            // so it suffices to test the generator columns
            self.gens.iter().all(|&(i, psi)| {
                other.psi(i + eps).is_some_and(|phi| psi + eps >= phi)
            })
        })
    }
}

/// ε-closeness in both directions: (ε for a ⊆ nbhd(b), ε for b ⊆ nbhd(a)).
pub fn closeness(a: &Profile, b: &Profile) -> (Option<u32>, Option<u32>) {
    let ab = a.closeness_to(b);
    let ba = b.closeness_to(a);
    debug_assert_eq!(ab, a.closeness_by_graphs(b));
    debug_assert_eq!(ba, b.closeness_by_graphs(a));
    (ab, ba)
}

/// True when the last drop of the X-graph exceeds `eps`. A single generator
/// has no drop inside the profile; it counts as a sharp finish.
pub fn sharp_finish(p: &Profile, eps: u32) -> Result<bool> {
    match p.gens.len() {
        0 => Err(Error::EmptyProfile),
        1 => Ok(true),
        n => Ok(p.gens[n - 2].1 - p.gens[n - 1].1 > eps),
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("gen:")?;
        for (i, p) in &self.gens {
            write!(f, " ({i},{p})")?;
        }
        Ok(())
    }
}

impl FromStr for Profile {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("bad profile: {s:?}"));
        let rest = s.trim().strip_prefix("gen:").ok_or_else(bad)?;
        let mut pts = Vec::new();
        for tok in rest.split_whitespace() {
            let inner = tok.strip_prefix('(').and_then(|t| t.strip_suffix(')')).ok_or_else(bad)?;
            let (a, b) = inner.split_once(',').ok_or_else(bad)?;
            pts.push((a.parse().map_err(|_| bad())?, b.parse().map_err(|_| bad())?));
        }
        let p = Profile::close(pts.iter().copied());
        if p.gens != pts {
            return Err(Error::Parse(format!("not a canonical generator list: {s:?}")));
        }
        Ok(p)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GraphKind {
    /// ψ as a function of i.
    X,
    /// i as a function of ψ.
    Y,
}

/// A non-increasing step function: `value(c)` is the value of the last point
/// with coordinate ≤ c, undefined before the first point. The last point's
/// value is the tail.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphFn {
    pub kind: GraphKind,
    pub points: Vec<Point>,
}

impl GraphFn {
    pub fn value(&self, c: u32) -> Option<u32> {
        let k = self.points.partition_point(|&(pc, _)| pc <= c);
        (k > 0).then(|| self.points[k - 1].1)
    }

    pub fn tail(&self) -> Option<u32> {
        self.points.last().map(|&(_, v)| v)
    }
}
