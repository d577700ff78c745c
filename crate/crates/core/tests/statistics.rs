use rbcsp::generator::rb_tightness_count;
use rbcsp::{generate, sample_batch, InstanceParams, Model};

#[test]
fn rd_forbidden_fraction_matches_p() {
    // d = 6, m = round(0.5 * 20 ln 20) = 30 constraints per instance
    let params = InstanceParams::new(2, 20, 0.6, 0.5, 0.3).with_model(Model::Rd);
    let batch = sample_batch(&params, 334, 1).unwrap();
    let (mut forbidden, mut tuples, mut constraints) = (0usize, 0usize, 0usize);
    for g in &batch {
        for c in g.instance.constraints() {
            forbidden += c.forbidden_len();
            tuples += g.instance.d().pow(2);
            constraints += 1;
        }
    }
    assert!(constraints >= 10_000);
    let fraction = forbidden as f64 / tuples as f64;
    assert!((fraction - 0.3).abs() < 0.01, "fraction {fraction}");
}

#[test]
fn rb_tables_have_the_exact_size() {
    for forced in [false, true] {
        let params = InstanceParams::new(3, 12, 0.7, 1.0, 0.37).with_forced(forced);
        let batch = sample_batch(&params, 20, 2).unwrap();
        let want = rb_tightness_count(0.37, batch[0].dims.d, 3).unwrap() as usize;
        for g in &batch {
            assert!(g.instance.constraints().iter().all(|c| c.forbidden_len() == want));
        }
    }
}

/// Pearson statistic of observed counts against a uniform expectation.
fn chi_square(counts: &[usize]) -> f64 {
    let total: usize = counts.iter().sum();
    let expected = total as f64 / counts.len() as f64;
    counts.iter().map(|&c| (c as f64 - expected).powi(2) / expected).sum()
}

#[test]
fn scopes_are_uniform_over_pairs() {
    // n = 6 gives 15 pairs; 14 degrees of freedom, 0.1% critical value 36.12
    let params = InstanceParams::new(2, 6, 1.0, 10.0, 0.2);
    let mut counts = vec![0usize; 36];
    for g in sample_batch(&params, 200, 3).unwrap() {
        for c in g.instance.constraints() {
            counts[c.scope()[0] * 6 + c.scope()[1]] += 1;
        }
    }
    let pairs: Vec<usize> = (0..6)
        .flat_map(|a| (a + 1..6).map(move |b| (a, b)))
        .map(|(a, b)| counts[a * 6 + b])
        .collect();
    assert_eq!(pairs.iter().sum::<usize>(), counts.iter().sum::<usize>());
    let stat = chi_square(&pairs);
    assert!(stat < 36.12, "chi-square {stat}");
}

#[test]
fn rb_forbidden_tuples_are_uniform() {
    // d = 3: 9 binary tuples, 8 degrees of freedom, 0.1% critical value 26.12
    let params = InstanceParams::new(2, 9, 0.5, 2.0, 0.34);
    let mut counts = vec![0usize; 9];
    for g in sample_batch(&params, 300, 4).unwrap() {
        assert_eq!(g.instance.d(), 3);
        for c in g.instance.constraints() {
            for &code in c.forbidden_codes() {
                counts[code as usize] += 1;
            }
        }
    }
    let stat = chi_square(&counts);
    assert!(stat < 26.12, "chi-square {stat}");
}

#[test]
fn forced_assignment_is_uniform() {
    // 5 values, 4 degrees of freedom, 0.1% critical value 18.47
    let params = InstanceParams::new(2, 8, 0.8, 1.0, 0.2).with_forced(true);
    let mut counts = vec![0usize; 5];
    for g in sample_batch(&params, 500, 5).unwrap() {
        assert_eq!(g.instance.d(), 5);
        for &v in g.forced_solution.unwrap().values() {
            counts[v] += 1;
        }
    }
    assert!(chi_square(&counts) < 18.47);
}

#[test]
fn generation_is_a_function_of_params() {
    let params = InstanceParams::new(2, 15, 0.8, 2.0, 0.3).with_seed(99).with_forced(true);
    assert_eq!(generate(&params).unwrap(), generate(&params).unwrap());
    assert_ne!(generate(&params).unwrap(), generate(&params.with_seed(100)).unwrap());
}
