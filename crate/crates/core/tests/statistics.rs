//! Models, descriptions, sophistication and Θ-profiles at the reference
//! budget, checked against their definitions.

use std::sync::OnceLock;

use aitbench::algostats::*;
use aitbench::complexity::{bdepth, k_of, kt_of, time_profile};
use aitbench::enumeration::{clock_reading, Budget, Clock};
use aitbench::lab::Lab;
use aitbench::machine::print_literal;
use aitbench::profile::Profile;
use aitbench::{BitString, Error};

fn lab() -> &'static Lab {
    static LAB: OnceLock<Lab> = OnceLock::new();
    LAB.get_or_init(|| Lab::new(Budget::new(14, 100_000).unwrap()))
}

fn bs(s: &str) -> BitString {
    BitString::parse_or_dash(s).unwrap()
}

#[test]
fn two_part_description_of_zero_in_a_two_element_set() {
    let t = lab().eps().unwrap();
    let model = Model::new(vec![bs("-"), bs("0")], &t).unwrap();
    assert_eq!(model.log_card, 1);
    // no enumerated program prints this code, so its witness is the literal
    assert_eq!(model.witness_program, print_literal(&model.encoding));
    let d = two_part(&model, &bs("0")).unwrap();
    assert_eq!(d.index, bs("1"));
    assert_eq!(run_two_part(&d.bits(), &BitString::new(), model.witness_steps), Some(bs("0")));
    assert_eq!(d.total_length, model.two_part_length());
    assert!(matches!(two_part(&model, &bs("1")), Err(Error::NotMember { .. })));

    let single = Model::new(vec![bs("1")], &t).unwrap();
    assert!(two_part(&single, &bs("1")).unwrap().index.is_empty());
}

#[test]
fn every_model_contains_x_and_verifies() {
    let t = lab().eps().unwrap();
    for x in BitString::all_up_to(3) {
        let models = models_of(&x, &t).unwrap();
        assert!(models.iter().any(|m| m.elements == vec![x.clone()]));
        for m in &models {
            assert!(m.contains(&x));
            assert_eq!(decode_set(&m.encoding).as_ref(), Some(&m.elements));
            assert_eq!(two_part(m, &x).unwrap().total_length, m.two_part_length());
        }
    }
}

#[test]
fn sophistication_by_formula_and_by_graph() {
    let t = lab().eps().unwrap();
    for x in BitString::all_up_to(3) {
        let dp = desc_profile(&x, &t).unwrap();
        let single = dp.models.iter().find(|m| m.elements == vec![x.clone()]).unwrap();
        assert!(dp.profile.contains((single.k_model.value as u32, single.two_part_length() as u32)));
        let mut prev = u32::MAX;
        for c in 0..=40 {
            let by_graph = dp.soph_from_graph(c);
            match soph(&x, c, &t) {
                Ok(s) => {
                    assert_eq!(Some(s.value as u32), by_graph, "x={x:?} c={c}");
                    assert!(s.value as u32 <= prev);
                    prev = s.value as u32;
                }
                Err(Error::NoSufficientModel { .. }) => assert_eq!(by_graph, None),
                Err(e) => panic!("{e}"),
            }
        }
        let big = (single.two_part_length() - dp.shortest.k) as u32;
        assert!(soph(&x, big, &t).unwrap().value <= single.k_model.value);
        let cs = csoph(&x, &t).unwrap().value;
        if let Ok(s0) = soph(&x, 0, &t) {
            assert!(cs <= s0.value);
        }
        assert!(cs <= single.k_model.value + big as usize);
        let a = antistochasticity(&x, &t).unwrap().value as usize;
        assert!(a <= dp.shortest.k.max(x.len()) + single.two_part_length());
    }
}

#[test]
fn structure_functions_orderings() {
    for x in BitString::all_up_to(2) {
        let t = lab().eps().unwrap();
        let singleton_k = Model::new(vec![x.clone()], &t).unwrap().k_model.value;
        let sf = structure_functions(&x, lab()).unwrap();
        for i in 0..sf.h.len() {
            if i >= singleton_k {
                assert_eq!(sf.h[i], Some(0));
            }
            if let (Some(b), Some(h)) = (sf.beta[i], sf.h[i]) {
                assert!(b <= h as i64);
            }
            if i > 0 {
                assert!(sf.lambda[i].is_some() || sf.lambda[i - 1].is_none());
            }
        }
    }
}

#[test]
fn theta_tilde_equals_theta_hat_without_condition() {
    let t = lab().eps().unwrap();
    for y in BitString::all_up_to(3) {
        let th = theta_profiles(&y, &t, &t).unwrap();
        assert_eq!(th.tilde, th.hat, "y={y:?}");
    }
    let eps = theta_profiles(&BitString::new(), &t, &t).unwrap();
    let lowest = eps.tilde.generators().last().unwrap();
    assert_eq!(soph_free(&BitString::new(), &t, &t).unwrap().value, lowest.0);
}

#[test]
fn reconstruction_from_shortest_program_and_clock() {
    let t_eps = lab().eps().unwrap();
    for (y, z) in [("-", "-"), ("0", "0"), ("01", "1")] {
        let (y, z) = (bs(y), bs(z));
        let t_z = lab().table(&z).unwrap();
        let th = theta_profiles(&y, &t_z, &t_eps).unwrap();
        let star = &th.shortest;
        let theta = clock_reading(&t_z, star.steps).value;
        let rebuilt = reconstruct_theta(&star.program, theta, Clock::OmegaZ, &t_z).unwrap();
        assert_eq!(Profile::close(rebuilt), th.tilde);
        let theta = clock_reading(&t_eps, star.steps).value;
        let rebuilt = reconstruct_theta(&star.program, theta, Clock::Omega, &t_z).unwrap();
        assert_eq!(Profile::close(rebuilt), th.hat);
    }
    let x_star = k_of(&BitString::new(), &t_eps).unwrap().program;
    assert!(!reconstruct_theta(&x_star, 0, Clock::Omega, &t_eps).unwrap().is_empty());
}

#[test]
fn time_profile_graph_is_time_bounded_complexity() {
    let t = lab().eps().unwrap();
    for x in BitString::all_up_to(3) {
        let tp = time_profile(&x, &t, &t).unwrap();
        let graph = tp.profile.x_graph().unwrap();
        for i in 0..=t.max_len() {
            let kt = kt_of(&x, i, &t, &t).ok().map(|m| m.value as u32);
            assert_eq!(graph.value(i as u32), kt, "x={x:?} i={i}");
        }
        for c in 0..6 {
            assert_eq!(
                Some(bdepth(&x, c, &t, &t).unwrap().value as u32),
                tp.bdepth(c as u32),
                "x={x:?} c={c}"
            );
        }
    }
}

#[test]
fn survey_of_one_bit_strings() {
    let r = survey(1, lab()).unwrap();
    assert_eq!(r.select("K").count(), 2);
    let kraft: Vec<_> = r.select("kraft_sum_2^-K").collect();
    assert_eq!(kraft.len(), 1);
    let (num, den) = kraft[0].value.split_once("/2^").unwrap();
    assert!(num.parse::<u64>().unwrap() < 1u64 << den.parse::<u32>().unwrap());
    assert!(r.select("most_antistochastic").count() == 1);
}
