//! The trie sweep against per-program simulation, resume and worker-count
//! independence, table invariants, and loop detection soundness.

use aitbench::encoding::{BitString, Dyadic};
use aitbench::enumeration::{
    halting_from_count, halting_from_omega, sweep, sweep_exhaustive, Budget, HaltingTable, RowStatus,
};
use aitbench::machine::{ExecutionResult, PrefixMachine, U0};
use proptest::prelude::*;

fn bs(s: &str) -> BitString {
    BitString::parse_or_dash(s).unwrap()
}

fn run_sweep(z: &BitString, l: usize, j: u64) -> HaltingTable {
    sweep(&U0::new(), z, Budget::new(l, j).unwrap(), None).unwrap()
}

#[test]
fn trie_sweep_matches_exhaustive() {
    for z in BitString::all_up_to(2) {
        for j in [1, 7, 50, 2000] {
            let b = Budget::new(10, j).unwrap();
            let fast = sweep(&U0::new(), &z, b, None).unwrap();
            let slow = sweep_exhaustive(&U0::new(), &z, b).unwrap();
            assert_eq!(fast.to_text(), slow.to_text(), "z={z:?} J={j}");
        }
    }
}

#[test]
fn resume_equals_fresh_sweep() {
    let m = U0::new();
    for z in [bs("-"), bs("01")] {
        let small = run_sweep(&z, 8, 100);
        let resumed = sweep(&m, &z, Budget::new(10, 2000).unwrap(), Some(&small)).unwrap();
        assert_eq!(resumed.to_text(), run_sweep(&z, 10, 2000).to_text());
        let longer = sweep(&m, &z, Budget::new(10, 5000).unwrap(), Some(&resumed)).unwrap();
        assert_eq!(longer.to_text(), run_sweep(&z, 10, 5000).to_text());
        assert!(sweep(&m, &z, Budget::new(10, 5000).unwrap(), Some(&longer)).is_err());
        assert!(sweep(&m, &z, Budget::new(9, 9000).unwrap(), Some(&longer)).is_err());
    }
}

#[test]
fn sweep_is_independent_of_worker_count() {
    let text = |n| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(n).build().unwrap();
        pool.install(|| run_sweep(&bs("1"), 12, 10_000).to_text())
    };
    assert_eq!(text(1), text(8));
}

#[test]
fn halted_programs_are_prefix_free_with_kraft_sum_below_one() {
    for z in BitString::all_up_to(2) {
        let t = run_sweep(&z, 12, 20_000);
        let halted: Vec<BitString> = t.halted().map(|(p, _, _)| p).collect();
        let mut mass = Dyadic::zero();
        for p in &halted {
            mass += &Dyadic::mass(p.len());
            for q in &halted {
                assert!(p == q || !p.is_prefix_of(q), "{p:?} is a prefix of {q:?}");
            }
        }
        assert_eq!(mass, t.m_final());
        assert!(mass < Dyadic::from_u64(1, 0));
        assert!(t.m_final() <= t.omega_upper());
    }
}

#[test]
fn halting_sets_recovered_from_omega_and_from_counts() {
    let t = run_sweep(&BitString::new(), 12, 20_000);
    assert!(t.is_exact());
    let m = U0::new();
    for j in 0..=t.certified_bits() {
        let expected = t.halted_set(j);
        let from_omega = halting_from_omega(&m, &t, &t.certified_prefix().prefix(j)).unwrap();
        assert_eq!(from_omega, expected, "j={j}");
        let from_count = halting_from_count(&m, &t, j, expected.programs.len()).unwrap();
        assert_eq!(from_count, expected, "j={j}");
    }
}

#[test]
fn golden_table_file() {
    let t = run_sweep(&BitString::new(), 6, 100);
    assert_eq!(t.to_text(), GOLDEN_L6);
    assert_eq!(HaltingTable::parse(GOLDEN_L6).unwrap().to_text(), GOLDEN_L6);
}

#[test]
fn unknown_rows_only_where_the_step_cap_bites() {
    let t = run_sweep(&BitString::new(), 10, 3);
    for (p, row) in t.rows() {
        if let RowStatus::Unknown { steps_spent } = row {
            assert!(*steps_spent <= 3, "{p:?}");
        }
    }
}

const GOLDEN_L6: &str = include_str!("golden_l6.tbl");

proptest! {
    #![proptest_config(ProptestConfig { cases: 3000, ..ProptestConfig::default() })]

    /// Runs flagged as diverging really run out of any budget, and halting
    /// runs are untouched by the detector.
    #[test]
    fn loop_detection_is_sound(
        p in prop::collection::vec(any::<bool>(), 3..33),
        z in prop::collection::vec(any::<bool>(), 0..4),
    ) {
        let (p, z) = (BitString::from_bits(p), BitString::from_bits(z));
        let budget = 20_000;
        let with = U0::new().run(&p, &z, budget);
        let without = U0::without_loop_detection().run(&p, &z, budget);
        match &with {
            ExecutionResult::Diverges { .. } => {
                let exceeded = matches!(without, ExecutionResult::BudgetExceeded { .. });
                prop_assert!(exceeded, "{:?}", without);
            }
            ExecutionResult::BudgetExceeded { .. } => {
                let exceeded = matches!(without, ExecutionResult::BudgetExceeded { .. });
                prop_assert!(exceeded, "{:?}", without);
            }
            other => prop_assert_eq!(other, &without),
        }
    }
}
