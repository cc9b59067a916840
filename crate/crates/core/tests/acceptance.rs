//! Acceptance run at the reference budget (L = 14, J = 10⁵, conditional
//! tables for every |z| ≤ 3). Prints one PASS/FAIL line per criterion and
//! fails if any criterion fails.

mod common;

use std::collections::HashSet;
use std::fmt::Write as _;
use std::sync::Arc;

use aitbench::algostats::{
    desc_profile, equivalences_report, reconstruct_theta, soph_pair_report, survey, theta_profiles,
};
use aitbench::complexity::{
    chain_rule_report, depth_pair_report, expected_theta, kt_of, producers, time_profile,
};
use aitbench::encoding::{pair_encode, Dyadic};
use aitbench::enumeration::{
    badger, busy_beaver, busy_running_time, clock_reading, halting_from_count, halting_from_omega, sweep, Budget,
    Clock, HaltingTable,
};
use aitbench::halting_info::{
    build_gamma, hmd, late_halters, late_halters_report, patch_advice, reach_by_badger, reach_curve, reassemble,
    StepFunction,
};
use aitbench::lab::Lab;
use aitbench::machine::U0;
use aitbench::profile::{closeness, Profile};
use aitbench::report::{Format, Report};
use aitbench::BitString;
use proptest::strategy::Strategy;
use proptest::test_runner::{Config, TestRunner};

const L: usize = 14;
const J: u64 = 100_000;
const PROFILE_CASES: u32 = 10_000;

// Golden values measured on u0-v1 at (L, J); regression-exact.
const GOLDEN_GLUE: i64 = 7;
const GOLDEN_CHAIN_CLOSENESS: &str = concat!(
    "0,3;0,3;0,3;0,0;0,0;0,0;0,0;",
    "0,6;0,6;0,6;0,6;0,6;0,6;0,6;0,6;0,6;0,6;0,6;0,6;0,6;0,6;",
    "0,12;0,12;0,12;0,12;0,12;0,12;0,12;0,12;0,12;0,12;0,12;0,12;0,12;0,12;",
    "0,12;0,12;0,12;0,12;0,12;0,12;0,12;0,12;0,12;0,12;0,12;0,12;0,12;0,12;",
);
const GOLDEN_THM2: &str = "a7209d039808ec07";
const GOLDEN_LATE_SLACK: i64 = 5;
const GOLDEN_DEPTH_PAIRS: &str = "pairs=49 max=6 digest=00998663e7c16214";
const GOLDEN_SOPH_PAIRS: &str = "pairs=49 max=2 digest=53aaa0b0f0af2f73";
const GOLDEN_REACH_ROUTES: &str = "11,0;11,0;11,0;11,0;11,0;11,0;11,0;11,0;11,0;11,0;11,0;11,0;11,0;11,0;11,0;";

type Outcome = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn budget() -> Budget {
    Budget::new(L, J).unwrap()
}

fn reference_zs() -> Vec<BitString> {
    BitString::all_up_to(3).collect()
}

fn show(v: Option<u32>) -> String {
    v.map_or("inf".into(), |v| v.to_string())
}

fn check(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn golden(name: &str, measured: &str, pinned: &str) -> Result<(), String> {
    check(measured == pinned, || format!("{name} drifted: measured {measured:?}, pinned {pinned:?}"))
}

struct Env {
    lab: Lab,
    tables: Vec<Arc<HaltingTable>>,
}

impl Env {
    fn new() -> Env {
        let lab = Lab::new(budget());
        let tables = reference_zs().iter().map(|z| lab.table(z).unwrap()).collect();
        Env { lab, tables }
    }

    fn eps(&self) -> Arc<HaltingTable> {
        self.tables[0].clone()
    }
}

fn c1_prefix_free_kraft(env: &Env) -> Outcome {
    let one = Dyadic::from_u64(1, 0);
    for t in &env.tables {
        let halted: HashSet<BitString> = t.halted().map(|(p, _, _)| p).collect();
        let mut mass = Dyadic::zero();
        for p in &halted {
            mass += &Dyadic::mass(p.len());
            for k in 0..p.len() {
                check(!halted.contains(&p.prefix(k)), || {
                    format!("z={}: {} extends a halting program", t.z().to_string_or_dash(), p)
                })?;
            }
        }
        check(mass < one, || format!("z={}: Kraft sum {mass} ≥ 1", t.z().to_string_or_dash()))?;
    }
    Ok(format!("{} tables", env.tables.len()))
}

fn c2_dovetail_identities(env: &Env) -> Outcome {
    let m = U0::new();
    let mut checked = 0;
    for t in &env.tables {
        for j in 0..=t.certified_bits().min(L) {
            let expected = t.halted_set(j);
            let a = halting_from_omega(&m, t, &t.certified_prefix().prefix(j)).map_err(|e| e.to_string())?;
            let b = halting_from_count(&m, t, j, expected.programs.len()).map_err(|e| e.to_string())?;
            check(a == expected && b == expected, || {
                format!("z={} j={j}", t.z().to_string_or_dash())
            })?;
            checked += 1;
        }
    }
    Ok(format!("{checked} (z, j) pairs"))
}

fn c3_profile_algebra() -> Outcome {
    use common::*;
    let cfg = Config { cases: PROFILE_CASES, failure_persistence: None, ..Config::default() };
    let mut runner = TestRunner::new_with_rng(cfg.clone(), proptest::test_runner::TestRng::deterministic_rng(cfg.rng_algorithm));
    runner.run(&points(), |p| check_closure_round_trip(&p)).map_err(|e| err("closure", e))?;
    runner.run(&points(), |p| check_pseudo_inverses(&p)).map_err(|e| err("pseudo-inverse", e))?;
    let two = (points(), points());
    runner.run(&two, |(a, b)| check_closeness(&a, &b)).map_err(|e| err("closeness", e))?;
    runner.run(&two, |(a, b)| check_sum(&a, &b)).map_err(|e| err("sum", e))?;
    let shifted = (points(), (-70i64..70).boxed());
    runner.run(&shifted, |(p, dy)| check_translate(&p, dy)).map_err(|e| err("translate", e))?;
    Ok(format!("5 laws × {PROFILE_CASES} cases"))
}

fn c4_time_profile_graph(env: &Env) -> Outcome {
    let t = env.eps();
    let mut points = 0;
    for x in BitString::all_up_to(3) {
        let graph = time_profile(&x, &t, &t).map_err(|e| e.to_string())?.profile.x_graph().unwrap();
        for i in (0..=L).filter(|&i| t.is_exact_up_to(i)) {
            let kt = kt_of(&x, i, &t, &t).ok().map(|m| m.value as u32);
            check(graph.value(i as u32) == kt, || format!("x={x:?} i={i}"))?;
            points += 1;
        }
    }
    Ok(format!("{points} points"))
}

fn c5_beaver_below_badger(env: &Env) -> Outcome {
    let mut upper = Vec::new();
    for t in &env.tables {
        for i in 0..=t.certified_bits().min(L) {
            let b = busy_beaver(t, i).unwrap().value;
            let c = badger(t, i).unwrap().value;
            check(b <= c, || format!("z={} i={i}: B={b} > badger={c}", t.z().to_string_or_dash()))?;
            // upper side: least d with badger(i) ≤ B(i + d)
            let d = (i..=L).find(|&k| busy_beaver(t, k).unwrap().value >= c).map(|k| (k - i) as u32);
            upper.push(d);
        }
    }
    let worst = upper.iter().map(|d| d.map_or(i64::MAX, |d| d as i64)).max().unwrap_or(0);
    Ok(format!("upper-side shift max={}", if worst == i64::MAX { "beyond L".into() } else { worst.to_string() }))
}

fn c6_clock_below_busy_time(env: &Env) -> Outcome {
    let mut gap = 0i64;
    let mut n = 0;
    for t in env.tables.iter().filter(|t| t.is_exact()) {
        for (p, steps, _) in t.halted() {
            let theta = clock_reading(t, steps).value as i64;
            let tau = busy_running_time(t, steps).value as i64;
            check(theta <= tau, || format!("z={} p={p}: θ={theta} > τ={tau}", t.z().to_string_or_dash()))?;
            gap = gap.max(tau - theta);
            n += 1;
        }
    }
    Ok(format!("{n} programs, max τ−θ={gap}"))
}

fn c7_chain_rule(env: &Env) -> Outcome {
    let r = chain_rule_report(3, &env.lab).map_err(|e| e.to_string())?;
    let glue: i64 = r.select("glue").next().unwrap().value.parse().unwrap();
    let defects: Vec<i64> = r.select("eqcr_defect").map(|row| row.value.parse().unwrap()).collect();
    let overheads: Vec<i64> = r.select("pair_overhead").map(|row| row.value.parse().unwrap()).collect();
    for (d, o) in defects.iter().zip(&overheads) {
        check(*d <= o + glue, || format!("defect {d} > overhead {o} + glue {glue}"))?;
    }
    golden("glue", &glue.to_string(), &GOLDEN_GLUE.to_string())?;

    let t = env.eps();
    let mut measured = String::new();
    for x in BitString::all_up_to(2) {
        let t_x = env.lab.table(&x).unwrap();
        let l_x = time_profile(&x, &t, &t).unwrap();
        for y in BitString::all_up_to(2) {
            let l_xy = time_profile(&pair_encode(&x, &y), &t, &t).unwrap();
            let l_yx = time_profile(&y, &t_x, &t).unwrap();
            let (ab, ba) = closeness(&l_xy.profile, &l_x.profile.sum(&l_yx.profile));
            check(ab.is_some() && ba.is_some(), || format!("x={x:?} y={y:?} not close"))?;
            write!(measured, "{},{};", show(ab), show(ba)).unwrap();
        }
    }
    golden("closeness(L_xy, L_x + L_y|x)", &measured, GOLDEN_CHAIN_CLOSENESS)?;
    Ok(format!("{} pairs, glue={glue}", defects.len()))
}

fn c8_remark4(env: &Env) -> Outcome {
    let t = env.eps();
    for y in BitString::all_up_to(3) {
        let th = theta_profiles(&y, &t, &t).map_err(|e| e.to_string())?;
        let direct = Profile::close(
            producers(&y, &t)
                .iter()
                .map(|p| (clock_reading(&t, p.steps).value as u32, p.program.len() as u32))
                .collect::<Vec<_>>(),
        );
        check(th.tilde == th.hat && th.hat == direct, || format!("y={y:?}: {} / {} / {direct}", th.tilde, th.hat))?;
    }
    Ok("15 strings".into())
}

fn c9_reconstruction(env: &Env) -> Outcome {
    let t_eps = env.eps();
    let mut n = 0;
    for z in BitString::all_up_to(2) {
        let t_z = env.lab.table(&z).unwrap();
        for y in BitString::all_up_to(2) {
            let th = theta_profiles(&y, &t_z, &t_eps).map_err(|e| e.to_string())?;
            let star = &th.shortest;
            for (which, clock, direct) in [(Clock::OmegaZ, &t_z, &th.tilde), (Clock::Omega, &t_eps, &th.hat)] {
                let theta = clock_reading(clock, star.steps).value;
                let rebuilt = reconstruct_theta(&star.program, theta, which, &t_z).map_err(|e| e.to_string())?;
                check(rebuilt == direct.generators(), || {
                    format!("z={z:?} y={y:?} {which:?}: {rebuilt:?} vs {direct}")
                })?;
                n += 1;
            }
        }
    }
    Ok(format!("{n} reconstructions"))
}

fn c10_desk_scale_equivalences(env: &Env) -> Outcome {
    let t_eps = env.eps();
    let mut measured = String::new();
    for z in BitString::all_up_to(2) {
        let t_z = env.lab.table(&z).unwrap();
        for y in BitString::all_up_to(3) {
            let lp = time_profile(&y, &t_z, &t_eps).unwrap().profile;
            let dp = desc_profile(&y, &t_z).unwrap().profile;
            let th = theta_profiles(&y, &t_z, &t_eps).unwrap();
            for (a, b) in [(&lp, &dp), (&th.hat, &lp), (&th.tilde, &dp)] {
                let (ab, ba) = closeness(a, b);
                check(ab.is_some() && ba.is_some(), || format!("z={z:?} y={y:?}: not close"))?;
                write!(measured, "{},{};", show(ab), show(ba)).unwrap();
            }
        }
    }
    golden("equivalence closeness", &fnv(&measured), GOLDEN_THM2)?;
    Ok(format!("digest {}", fnv(&measured)))
}

fn c11_expected_clock_time() -> Outcome {
    let two = Dyadic::from_u64(2, 0);
    let mut n = 0;
    for l in 3..=L {
        for j in [1, 10, 1000, J] {
            let t = sweep(&U0::new(), &BitString::new(), Budget::new(l, j).unwrap(), None).unwrap();
            let e = expected_theta(None, &t).value;
            check(e <= two, || format!("L={l} J={j}: E(θ)={e}"))?;
            n += 1;
        }
    }
    Ok(format!("{n} budgets"))
}

fn c12_late_halters(env: &Env) -> Outcome {
    let t = env.eps();
    let mut worst = i64::MIN;
    for k in 0..=12 {
        for s in -1..=k as i64 {
            let lh = late_halters(&t, k, s).map_err(|e| e.to_string())?;
            if s <= 0 {
                check(lh.count == 0, || format!("k={k} s={s}: count {}", lh.count))?;
            }
            if let Some(slack) = lh.slack {
                worst = worst.max(slack);
            }
        }
    }
    check(worst <= GOLDEN_LATE_SLACK, || format!("slack {worst} > pinned {GOLDEN_LATE_SLACK}"))?;
    Ok(format!("max ⌈log count⌉ − s = {worst}"))
}

fn c13_pair_laws(env: &Env) -> Outcome {
    let depth = depth_pair_report(2, 1, &env.lab).map_err(|e| e.to_string())?;
    let soph = soph_pair_report(2, 1, &env.lab).map_err(|e| e.to_string())?;
    let summary = |r: &Report, q: &str| {
        let vals: Vec<i64> = r.select(q).map(|row| row.value.parse().unwrap()).collect();
        let max = vals.iter().copied().max().map_or("-".into(), |v| v.to_string());
        format!("pairs={} max={max} digest={}", vals.len(), fnv(&r.render(Format::Csv)))
    };
    let d = summary(&depth, "depth_defect");
    let s = summary(&soph, "soph_pair_defect");
    golden("depth pairs", &d, GOLDEN_DEPTH_PAIRS)?;
    golden("soph pairs", &s, GOLDEN_SOPH_PAIRS)?;
    Ok(format!("depth {d}; soph {s}"))
}

fn c14_halting_machinery(env: &Env) -> Outcome {
    let t_eps = env.eps();
    let mut routes = String::new();
    for t_z in &env.tables {
        let r = reach_curve(t_z, &t_eps, L).map_err(|e| e.to_string())?;
        let h = hmd(t_z, &t_eps, L).map_err(|e| e.to_string())?;
        for (i, hv) in h.iter().enumerate() {
            check(hv.value == r.points[i].value as i64 - i as i64, || format!("H at {i}"))?;
        }
        let b = reach_by_badger(t_z, &t_eps, L).map_err(|e| e.to_string())?;
        let (ab, ba) = closeness(&r.closure(), &b.closure());
        write!(routes, "{},{};", show(ab), show(ba)).unwrap();
    }
    let prefix = t_eps.certified_prefix();
    for steps in [vec![(1, 2)], vec![(2, 1), (5, 3)], vec![(1, 1), (3, 2), (4, 4)]] {
        let h = StepFunction::new(steps).unwrap();
        let gamma = build_gamma(&h, &t_eps).map_err(|e| e.to_string())?;
        for i in 0..=prefix.len() {
            let n = i + h.value(i);
            if n > prefix.len() {
                break;
            }
            let delta = patch_advice(&h, i, &t_eps).unwrap();
            check(reassemble(&h, &gamma, &delta, n).unwrap() == prefix.prefix(n), || format!("reassembly at i={i}"))?;
        }
    }
    golden("reach routes", &routes, GOLDEN_REACH_ROUTES)?;
    Ok(format!("routes {routes}"))
}

fn c15_determinism() -> Outcome {
    let render = |jobs: usize| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs).build().unwrap();
        pool.install(|| {
            let lab = Lab::new(Budget::new(12, 20_000).unwrap());
            let mut out = String::new();
            let t = lab.eps().unwrap();
            out += &t.to_text();
            for r in [
                chain_rule_report(2, &lab).unwrap(),
                depth_pair_report(2, 1, &lab).unwrap(),
                soph_pair_report(2, 1, &lab).unwrap(),
                equivalences_report(2, &lab).unwrap(),
                late_halters_report(&t, 0..=11).unwrap(),
                survey(2, &lab).unwrap(),
            ] {
                out += &r.render(Format::Csv);
                out += &r.render(Format::Json);
            }
            out
        })
    };
    let (a, b) = (render(1), render(8));
    check(a == b, || "outputs differ between 1 and 8 workers".into())?;
    Ok(format!("{} bytes identical", a.len()))
}

fn err<T: std::fmt::Debug>(name: &str, e: proptest::test_runner::TestError<T>) -> String {
    format!("{name}: {e}")
}

/// FNV-1a, to pin long measured tables compactly.
fn fnv(s: &str) -> String {
    let mut h: u64 = 0xcbf29ce484222325;
    for b in s.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    format!("{h:016x}")
}

#[test]
fn acceptance() {
    let env = Env::new();
    let criteria: Vec<Criterion> = vec![
        ("prefix-freeness and Kraft", Box::new(|| c1_prefix_free_kraft(&env))),
        ("dovetail identities", Box::new(|| c2_dovetail_identities(&env))),
        ("profile algebra", Box::new(c3_profile_algebra)),
        ("time profile graph = K^B(i)", Box::new(|| c4_time_profile_graph(&env))),
        ("B(i) ≤ badger(i)", Box::new(|| c5_beaver_below_badger(&env))),
        ("θ(p) ≤ τ(p)", Box::new(|| c6_clock_below_busy_time(&env))),
        ("chain rule", Box::new(|| c7_chain_rule(&env))),
        ("Θ~ = Θ^ = Θ without condition", Box::new(|| c8_remark4(&env))),
        ("Θ reconstruction", Box::new(|| c9_reconstruction(&env))),
        ("profile equivalences", Box::new(|| c10_desk_scale_equivalences(&env))),
        ("E(θ) ≤ 2", Box::new(c11_expected_clock_time)),
        ("late halters", Box::new(|| c12_late_halters(&env))),
        ("pair laws", Box::new(|| c13_pair_laws(&env))),
        ("halting materialization machinery", Box::new(|| c14_halting_machinery(&env))),
        ("determinism across workers", Box::new(c15_determinism)),
    ];
    let mut failed = Vec::new();
    for (k, (name, run)) in criteria.iter().enumerate() {
        let start = std::time::Instant::now();
        match run() {
            Ok(note) => println!("PASS {:>2} {name}: {note} ({:.1?})", k + 1, start.elapsed()),
            Err(why) => {
                println!("FAIL {:>2} {name}: {why}", k + 1);
                failed.push(k + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
