mod common;

use proptest::prelude::*;
use rbcsp::analysis::{check_conditions, expected_solutions, p_critical, r_critical};
use rbcsp::encode::{encode_direct, parse_dimacs, write_dimacs};
use rbcsp::io::{format_generated, parse_instance};
use rbcsp::mac::{brute_force, solve_mac, SearchConfig};
use rbcsp::{distance, generate, satisfies, Assignment, DerivedDims, InstanceParams, Model};

fn small_params() -> impl Strategy<Value = InstanceParams> {
    (2usize..=3, 4usize..=8, 0.3f64..1.0, 0.3f64..2.0, 0.05f64..0.7, any::<bool>(), any::<bool>(), any::<u64>())
        .prop_map(|(k, n, alpha, r, p, rd, forced, seed)| {
            let alpha = alpha.min(3f64.ln() / (n as f64).ln()).max(2f64.ln() / (n as f64).ln());
            InstanceParams::new(k, n, alpha, r, p)
                .with_model(if rd { Model::Rd } else { Model::Rb })
                .with_forced(forced)
                .with_seed(seed)
        })
}

proptest! {
    #[test]
    fn distance_is_a_normalised_metric(
        a in proptest::collection::vec(0usize..5, 1..20),
        seed in any::<u64>(),
    ) {
        let b: Vec<usize> = a.iter().enumerate().map(|(i, &x)| (x + (seed >> (i % 64)) as usize % 2) % 5).collect();
        let (a, b) = (Assignment::new(a), Assignment::new(b));
        let dab = distance(&a, &b).unwrap();
        prop_assert_eq!(dab, distance(&b, &a).unwrap());
        prop_assert!((0.0..=1.0).contains(&dab));
        prop_assert_eq!(dab == 0.0, a == b);
        prop_assert_eq!(distance(&a, &a).unwrap(), 0.0);
    }

    #[test]
    fn critical_values_invert_each_other(alpha in 0.2f64..2.0, r in 0.2f64..5.0) {
        let p = p_critical(alpha, r);
        prop_assert!(p > 0.0 && p < 1.0);
        prop_assert!((r_critical(alpha, p) - r).abs() <= 1e-9 * r);
    }

    #[test]
    fn critical_tightness_is_monotone(alpha in 0.2f64..2.0, r in 0.2f64..5.0, eps in 1e-3f64..0.5) {
        prop_assert!(p_critical(alpha + eps, r) > p_critical(alpha, r));
        prop_assert!(p_critical(alpha, r + eps) < p_critical(alpha, r));
    }

    #[test]
    fn bounded_critical_tightness_matches_exponential_form(
        k in 2usize..6, alpha in 0.2f64..2.0, r in 0.2f64..5.0,
    ) {
        let rep = check_conditions(&InstanceParams::new(k, 20, alpha, r, 0.3));
        let bound = (k as f64 - 1.0) / k as f64;
        // skip points on the boundary itself
        prop_assume!((rep.p_cr - bound).abs() > 1e-12);
        prop_assert_eq!(rep.conditions_p.tightness_bounded, rep.k_exp_condition);
    }

    #[test]
    fn expected_solutions_decrease_with_tightness(p in 0.01f64..0.9, dp in 0.001f64..0.09) {
        let params = InstanceParams::new(2, 20, 0.8, 1.0, p);
        let dims = DerivedDims { d: 11, m: 60 };
        prop_assert!(expected_solutions(&params.with_p(p + dp), &dims) < expected_solutions(&params, &dims));
    }

    #[test]
    fn instance_text_round_trips(params in small_params()) {
        let g = generate(&params).unwrap();
        let parsed = parse_instance(&format_generated(&g)).unwrap().into_generated().unwrap();
        prop_assert_eq!(parsed, g);
    }

    #[test]
    fn dimacs_round_trips(params in small_params(), amo in any::<bool>()) {
        let g = generate(&params).unwrap();
        let cnf = encode_direct(&g.instance, amo);
        prop_assert_eq!(parse_dimacs(&write_dimacs(&cnf, &["meta".into()])).unwrap(), cnf);
    }

    #[test]
    fn mac_agrees_with_exhaustive_search(params in small_params()) {
        let g = generate(&params).unwrap();
        let (status, count) = brute_force(&g.instance).unwrap();
        let out = solve_mac(&g.instance, &SearchConfig::default()).unwrap();
        prop_assert_eq!(out.status, status);
        if let Some(w) = &out.witness {
            prop_assert!(satisfies(&g.instance, w).unwrap());
        }
        let all = solve_mac(&g.instance, &SearchConfig { count_all: true, ..Default::default() }).unwrap();
        prop_assert_eq!(all.solutions, Some(count));
    }

    #[test]
    fn satisfies_matches_a_direct_scan(params in small_params(), seed in any::<u64>()) {
        let g = generate(&params).unwrap();
        let d = g.instance.d() as u64;
        let a = Assignment::new((0..g.instance.n() as u64).map(|i| ((seed.rotate_left(i as u32 * 7) ^ i) % d) as usize).collect());
        prop_assert_eq!(satisfies(&g.instance, &a).unwrap(), common::naive_satisfies(&g.instance, &a));
    }
}
