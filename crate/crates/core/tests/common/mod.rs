//! Brute-force set oracles for the profile algebra on a 64×64 box, shared by
//! the property tests and the acceptance run.

#![allow(dead_code)]

use aitbench::profile::{closeness, Point, Profile};
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

pub const BOX: u32 = 64;
// membership is looked up at points shifted by up to ε < 2·BOX
const GRID: u32 = 2 * BOX;

/// Membership grid of the closure of `pts`, by direct domination checks.
pub fn grid(pts: &[Point]) -> Vec<bool> {
    let mut g = vec![false; (GRID * GRID) as usize];
    for i in 0..GRID {
        for psi in 0..GRID {
            g[(i * GRID + psi) as usize] = pts.iter().any(|&(a, b)| a <= i && b <= psi);
        }
    }
    g
}

/// Grid lookup; outside the grid both coordinates exceed every generator.
/// Only meaningful for nonempty point sets.
pub fn member(g: &[bool], (i, psi): Point) -> bool {
    i >= GRID || psi >= GRID || g[(i * GRID + psi) as usize]
}

/// Minimal points of the grid inside the box.
pub fn oracle_generators(g: &[bool]) -> Vec<Point> {
    let mut out = Vec::new();
    for i in 0..BOX {
        for psi in 0..BOX {
            let p = (i, psi);
            if member(g, p) && !(i > 0 && member(g, (i - 1, psi))) && !(psi > 0 && member(g, (i, psi - 1))) {
                out.push(p);
            }
        }
    }
    out
}

/// Least ε with (i + ε, ψ + ε) ∈ b for every (i, ψ) ∈ a in the box.
pub fn oracle_closeness(a_pts: &[Point], b_pts: &[Point]) -> Option<u32> {
    if a_pts.is_empty() {
        return Some(0);
    }
    if b_pts.is_empty() {
        return None;
    }
    let (a, b) = (grid(a_pts), grid(b_pts));
    let mut worst = 0;
    for i in 0..BOX {
        for psi in 0..BOX {
            if member(&a, (i, psi)) {
                let eps = (0..).find(|&e| member(&b, (i + e, psi + e))).unwrap();
                worst = worst.max(eps);
            }
        }
    }
    Some(worst)
}

pub fn points() -> impl Strategy<Value = Vec<Point>> {
    prop::collection::vec((0..BOX, 0..BOX), 0..8)
}

pub fn check_closure_round_trip(pts: &[Point]) -> Result<(), TestCaseError> {
    let p = Profile::close(pts.to_vec());
    if pts.is_empty() {
        prop_assert!(p.is_empty());
        return Ok(());
    }
    let g = grid(pts);
    let gens = oracle_generators(&g);
    prop_assert_eq!(p.generators(), gens.as_slice());
    prop_assert_eq!(&Profile::close(p.generators().to_vec()), &p);
    prop_assert_eq!(&p.to_string().parse::<Profile>().unwrap(), &p);
    for i in 0..BOX {
        for psi in 0..BOX {
            prop_assert_eq!(p.contains((i, psi)), member(&g, (i, psi)));
        }
    }
    Ok(())
}

/// (i, ψ) ∈ Φ ⇔ ψ(i) ≤ ψ ⇔ i(ψ) ≤ i, with ψ(·) and i(·) read off the grid.
pub fn check_pseudo_inverses(pts: &[Point]) -> Result<(), TestCaseError> {
    let p = Profile::close(pts.to_vec());
    if pts.is_empty() {
        prop_assert!(p.x_graph().is_err() && p.y_graph().is_err());
        prop_assert_eq!(p.psi(0), None);
        return Ok(());
    }
    let g = grid(pts);
    let (xg, yg) = (p.x_graph().unwrap(), p.y_graph().unwrap());
    for c in 0..BOX {
        prop_assert_eq!(p.psi(c), (0..GRID).find(|&psi| member(&g, (c, psi))));
        prop_assert_eq!(p.i_of(c), (0..GRID).find(|&i| member(&g, (i, c))));
        prop_assert_eq!(xg.value(c), p.psi(c));
        prop_assert_eq!(yg.value(c), p.i_of(c));
        for d in 0..BOX {
            let inside = member(&g, (c, d));
            prop_assert_eq!(inside, p.psi(c).is_some_and(|v| v <= d));
            prop_assert_eq!(inside, p.i_of(d).is_some_and(|v| v <= c));
        }
    }
    Ok(())
}

pub fn check_closeness(a_pts: &[Point], b_pts: &[Point]) -> Result<(), TestCaseError> {
    let (a, b) = (Profile::close(a_pts.to_vec()), Profile::close(b_pts.to_vec()));
    let (ab, ba) = closeness(&a, &b);
    prop_assert_eq!(ab, oracle_closeness(a_pts, b_pts));
    prop_assert_eq!(ba, oracle_closeness(b_pts, a_pts));
    prop_assert_eq!(ab, a.closeness_by_graphs(&b));
    prop_assert_eq!(ba, b.closeness_by_graphs(&a));
    prop_assert_eq!(a.closeness_to(&a), Some(0));
    Ok(())
}

pub fn check_sum(a_pts: &[Point], b_pts: &[Point]) -> Result<(), TestCaseError> {
    let (a, b) = (Profile::close(a_pts.to_vec()), Profile::close(b_pts.to_vec()));
    let s = a.sum(&b);
    prop_assert_eq!(&s, &b.sum(&a));
    prop_assert_eq!(&a.sum(&Profile::close([(0, 0)])), &a);
    // (i, v) ∈ a + b iff some split v = ψ + φ has both parts in column i
    for i in 0..BOX {
        for v in 0..BOX {
            let oracle = (0..=v).any(|psi| a.contains((i, psi)) && b.contains((i, v - psi)));
            prop_assert_eq!(s.contains((i, v)), oracle);
        }
    }
    Ok(())
}

pub fn check_translate(pts: &[Point], dy: i64) -> Result<(), TestCaseError> {
    let p = Profile::close(pts.to_vec());
    let (t, clipped) = p.translate(dy);
    prop_assert_eq!(clipped, pts.iter().any(|&(_, psi)| (psi as i64) + dy < 0));
    if pts.is_empty() {
        prop_assert!(t.is_empty());
        return Ok(());
    }
    let moved: Vec<Point> = pts.iter().map(|&(i, psi)| (i, (psi as i64 + dy).max(0) as u32)).collect();
    let g = grid(&moved);
    for i in 0..BOX {
        for psi in 0..BOX {
            prop_assert_eq!(t.contains((i, psi)), member(&g, (i, psi)));
        }
    }
    Ok(())
}
