mod common;

use rbcsp::analysis::p_critical;
use rbcsp::encode::{assignment_model, decode_model, encode_direct};
use rbcsp::experiments::{run_sweep, SolverKind, SweepSpec, Vary};
use rbcsp::mac::{brute_force, solve_mac, survival, survival_runs, SearchConfig};
use rbcsp::tabu::{solve_tabu, TabuConfig};
use rbcsp::{generate, sample_batch, satisfies, Assignment, InstanceParams, Status};

#[test]
fn tabu_solves_easy_forced_instances() {
    for n in [10, 15, 20] {
        let p = p_critical(0.8, 1.0) * 0.5;
        let params = InstanceParams::new(2, n, 0.8, 1.0, p).with_forced(true);
        for (i, g) in sample_batch(&params, 50, n as u64).unwrap().iter().enumerate() {
            let out = solve_tabu(&g.instance, &TabuConfig { seed: i as u64, ..Default::default() }).unwrap();
            assert_eq!(out.status, Status::Sat, "n={n} sample {i}");
            assert!(satisfies(&g.instance, out.witness.as_ref().unwrap()).unwrap());
        }
    }
}

#[test]
fn tabu_incremental_state_passes_self_checks() {
    // near the threshold, so most runs spend their whole budget
    let params = InstanceParams::new(2, 20, 0.8, 1.5, p_critical(0.8, 1.5));
    for (i, g) in sample_batch(&params, 10, 6).unwrap().iter().enumerate() {
        for weight_learning in [true, false] {
            let cfg = TabuConfig {
                max_flips: 5_000,
                restarts: 3,
                seed: i as u64,
                weight_learning,
                self_check: true,
                ..Default::default()
            };
            let out = solve_tabu(&g.instance, &cfg).unwrap();
            assert_ne!(out.status, Status::Unsat);
            assert_eq!(solve_tabu(&g.instance, &cfg).unwrap().flips, out.flips);
        }
    }
}

#[test]
fn randomized_and_deterministic_mac_agree() {
    let params = InstanceParams::new(3, 10, 0.6, 1.0, 0.3);
    for (i, g) in sample_batch(&params, 40, 8).unwrap().iter().enumerate() {
        let plain = solve_mac(&g.instance, &SearchConfig::default()).unwrap();
        let rnd = solve_mac(
            &g.instance,
            &SearchConfig { randomized: true, tie_seed: i as u64, ..Default::default() },
        )
        .unwrap();
        assert_eq!(plain.status, rnd.status);
        assert_eq!(plain.status, brute_force(&g.instance).unwrap().0);
    }
}

#[test]
fn survival_runs_are_reproducible() {
    let g = generate(&InstanceParams::new(2, 15, 0.8, 1.5, 0.4).with_seed(1)).unwrap();
    let cfg = SearchConfig { randomized: true, tie_seed: 3, ..Default::default() };
    assert_eq!(survival_runs(&g.instance, 1, &cfg).unwrap().len(), 1);
    let runs = survival_runs(&g.instance, 30, &cfg).unwrap();
    assert_eq!(runs, survival_runs(&g.instance, 30, &cfg).unwrap());
    assert!(survival(&runs, 0) <= 1.0);
    let max = *runs.iter().max().unwrap();
    assert_eq!(survival(&runs, max), 0.0);
    let mut prev = 1.0;
    for x in 0..=max {
        let s = survival(&runs, x);
        assert!(s <= prev);
        prev = s;
    }
}

#[test]
fn encoding_without_amo_keeps_every_solution() {
    let params = InstanceParams::new(2, 6, 0.6, 1.0, 0.3);
    for g in sample_batch(&params, 30, 9).unwrap() {
        let inst = &g.instance;
        let with = common::count_models(&encode_direct(inst, true));
        let without = common::count_models(&encode_direct(inst, false));
        assert_eq!(with, brute_force(inst).unwrap().1 as u128);
        assert!(without >= with);
    }
}

#[test]
fn forced_solution_survives_encoding() {
    let params = InstanceParams::new(3, 8, 0.6, 1.0, 0.4).with_forced(true);
    for g in sample_batch(&params, 20, 10).unwrap() {
        let t = g.forced_solution.unwrap();
        let cnf = encode_direct(&g.instance, true);
        let model = assignment_model(&g.instance, &t);
        let truth = |l: i64| model.contains(&l);
        assert!(cnf.clauses.iter().all(|c| c.iter().any(|&l| truth(l))));
        assert_eq!(decode_model(&g.instance, &model, true).unwrap(), t);
    }
}

#[test]
fn mac_witnesses_decode_through_the_encoding() {
    let params = InstanceParams::new(2, 12, 0.7, 1.0, 0.3);
    for g in sample_batch(&params, 20, 11).unwrap() {
        if let Some(w) = solve_mac(&g.instance, &SearchConfig::default()).unwrap().witness {
            let decoded: Assignment =
                decode_model(&g.instance, &assignment_model(&g.instance, &w), true).unwrap();
            assert!(satisfies(&g.instance, &decoded).unwrap());
        }
    }
}

#[test]
fn forced_sweeps_are_always_satisfiable() {
    let base = InstanceParams::new(2, 15, 0.8, 2.0, 0.2).with_forced(true);
    let mut spec = SweepSpec::new(base, Vary::P, vec![0.1, 0.3, 0.5, 0.7]);
    spec.samples_per_point = 10;
    for rec in run_sweep(&spec).unwrap() {
        assert_eq!(rec.stats.sat_fraction, 1.0);
    }
}

#[test]
fn filtered_tabu_sweeps_only_measure_satisfiable_instances() {
    let base = InstanceParams::new(2, 12, 0.8, 2.0, 0.2);
    let mut spec = SweepSpec::new(base, Vary::P, vec![0.25, 0.35]);
    spec.samples_per_point = 20;
    spec.solver = SolverKind::Tabu;
    spec.filter_unsat = true;
    spec.tabu.max_flips = 5_000;
    for rec in run_sweep(&spec).unwrap() {
        assert_eq!(rec.filtered + rec.stats.runs, rec.samples);
        assert_eq!(rec.stats.sat + rec.stats.timeouts, rec.stats.runs);
    }
    // nothing is filtered without the flag, so UNSAT instances are timeouts
    spec.filter_unsat = false;
    let rec = &run_sweep(&spec).unwrap()[1];
    assert_eq!(rec.filtered, 0);
}
