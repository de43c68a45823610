use nalgebra::DMatrix;
use prodres::tasks::{
    delay_target, legendre_target, legendre_value, lorenz, mackey_glass, prediction_dataset,
    rescale_unit, uniform_input, LorenzParams, MackeyGlassParams,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn legendre_orders_are_orthogonal_on_the_symmetric_interval() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let xs: Vec<f64> = (0..1_000_000).map(|_| rng.random_range(-1.0..=1.0)).collect();
    let evals: Vec<Vec<f64>> = (0..=4).map(|n| xs.iter().map(|&x| legendre_value(x, n)).collect()).collect();
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    for n in 0..=4 {
        for m in 0..n {
            let (a, b) = (&evals[n], &evals[m]);
            let (ma, mb) = (mean(a), mean(b));
            let cov = a.iter().zip(b).map(|(x, y)| (x - ma) * (y - mb)).sum::<f64>() / a.len() as f64;
            assert!(cov.abs() < 3e-3, "orders {n},{m}: {cov}");
        }
    }
}

#[test]
fn legendre_matches_the_three_term_recurrence() {
    // (n + 1) P_{n+1} = (2n + 1) x P_n - n P_{n-1}
    for i in 0..=200 {
        let x = -1.0 + i as f64 / 100.0;
        let (mut p0, mut p1) = (1.0, x);
        for n in 1..15u32 {
            let p2 = ((2 * n + 1) as f64 * x * p1 - n as f64 * p0) / (n + 1) as f64;
            assert!((legendre_value(x, n + 1) - p2).abs() < 1e-9, "x {x} n {}", n + 1);
            p0 = p1;
            p1 = p2;
        }
    }
}

#[test]
fn order_one_legendre_is_the_delayed_input() {
    let u = uniform_input(10_000, 3).unwrap();
    for tau in [0, 1, 7, 50] {
        let a = legendre_target(&u, 1, tau).unwrap();
        let b = delay_target(&u, tau).unwrap();
        assert_eq!(a.start, b.start);
        for (x, y) in a.values.iter().zip(&b.values) {
            assert!((x - y).abs() <= 1e-15);
        }
    }
}

#[test]
fn uniform_input_law_of_large_numbers() {
    let u = uniform_input(100_000, 4).unwrap();
    let mean = u.iter().sum::<f64>() / u.len() as f64;
    assert!((mean - 0.5).abs() < 0.005);
    assert!(u.iter().all(|&v| v > 0.0));
}

#[test]
fn mackey_glass_is_positive_bounded_and_aperiodic() {
    let p = MackeyGlassParams::default();
    let long = mackey_glass(100_000, &p, 1000).unwrap();
    assert!(long.iter().all(|&v| v > 0.0));
    let s = &long[..10_000];
    assert!(s.iter().all(|&v| v > 0.0 && v < 2.0));

    let mean = s.iter().sum::<f64>() / s.len() as f64;
    let var = s.iter().map(|v| (v - mean).powi(2)).sum::<f64>();
    for lag in 100..=1000 {
        let c: f64 = (0..s.len() - lag).map(|i| (s[i] - mean) * (s[i + lag] - mean)).sum();
        let rho = c / var;
        assert!(rho.abs() < 0.99, "lag {lag}: {rho}");
    }
    assert_eq!(mackey_glass(500, &p, 10).unwrap(), mackey_glass(500, &p, 10).unwrap());
}

#[test]
fn lorenz_stays_on_the_attractor() {
    let s = lorenz(100_000, &LorenzParams::default()).unwrap();
    for r in 0..s.nrows() {
        assert!(s[(r, 0)].abs() < 25.0 && s[(r, 1)].abs() < 30.0);
        assert!(s[(r, 2)] > 0.0 && s[(r, 2)] < 55.0);
    }
}

#[test]
fn lorenz_is_sensitive_to_initial_conditions() {
    // start both copies from a point already on the attractor
    let on = lorenz(1, &LorenzParams::default()).unwrap();
    let a = LorenzParams {
        initial: [on[(0, 0)], on[(0, 1)], on[(0, 2)]],
        transient_discard: 0,
        ..Default::default()
    };
    let mut b = a;
    b.initial[0] += 1e-9;
    let sa = lorenz(2500, &a).unwrap();
    let sb = lorenz(2500, &b).unwrap();
    let sep = (0..2500)
        .map(|r| (sa.row(r) - sb.row(r)).norm())
        .fold(0.0, f64::max);
    assert!(sep > 1.0, "{sep}");
}

#[test]
fn rescaling_inverts_away_from_the_clamp() {
    let s = lorenz(3000, &LorenzParams::default()).unwrap();
    let (scaled, map) = rescale_unit(&s, 1e-6).unwrap();
    assert!(scaled.iter().all(|&v| (1e-6..=1.0).contains(&v)));
    let back = map.inverse(&scaled).unwrap();
    for (i, (a, b)) in back.iter().zip(s.iter()).enumerate() {
        if scaled.as_slice()[i] > 1e-6 {
            assert!((a - b).abs() <= 1e-12 * b.abs().max(1.0));
        }
    }
}

#[test]
fn prediction_pairs_align() {
    let s = DMatrix::from_fn(10, 2, |i, j| (i * 10 + j) as f64);
    let one = prediction_dataset(&s, 1).unwrap();
    let twice = prediction_dataset(&one.targets, 1).unwrap();
    let two = prediction_dataset(&s, 2).unwrap();
    assert_eq!(two.targets, twice.targets);
    let last = prediction_dataset(&s, 9).unwrap();
    assert_eq!(last.inputs.nrows(), 1);
    assert!(prediction_dataset(&s, 10).is_err());
}
