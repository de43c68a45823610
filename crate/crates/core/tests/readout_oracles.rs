use nalgebra::{DMatrix, DVector};
use prodres::metrics::nmse;
use prodres::readout::{predict, train_readout, LeastSquares, SolverOptions};
use prodres::reservoir::{generate_weights, run_reservoir, Family, ReservoirSpec, Trajectory};
use prodres::tasks::uniform_input;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

fn gaussian(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> DMatrix<f64> {
    DMatrix::from_fn(rows, cols, |_, _| StandardNormal.sample(rng))
}

fn residual(design: &DMatrix<f64>, psi: &DVector<f64>, y: &DVector<f64>) -> f64 {
    (design * psi - y).norm()
}

#[test]
fn rank_deficient_design_reproduces_targets() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    // 200 x 21 with rank 12
    let design = gaussian(200, 12, &mut rng) * gaussian(12, 21, &mut rng);
    let truth = DVector::from_fn(21, |_, _| StandardNormal.sample(&mut rng));
    let y = &design * &truth;
    let psi = LeastSquares::new(&design, SolverOptions::default())
        .unwrap()
        .solve(&y)
        .unwrap();
    assert!((&design * &psi - &y).amax() <= 1e-8);
    assert!((psi.clone() - truth.clone()).amax() > 1e-3, "coefficients are not identifiable");
    // minimum norm: any null-space component makes the solution longer
    let svd = design.clone().svd(true, true);
    let v_t = svd.v_t.unwrap();
    for k in 12..21 {
        let null = v_t.row(k).transpose();
        assert!((&design * &null).amax() < 1e-9);
        for scale in [1e-3, 0.1, 1.0] {
            assert!((&psi + &null * scale).norm() > psi.norm());
        }
    }
}

#[test]
fn fitted_values_match_normal_equations() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let states = gaussian(150, 6, &mut rng);
    let traj = Trajectory::new(states, 0);
    let y: Vec<f64> = (0..150).map(|_| rng.random_range(-1.0..1.0)).collect();
    let readout = train_readout(&traj, &y, 1e-12).unwrap();
    let fitted = predict(&readout, &traj).unwrap();

    let x = traj.augmented();
    let xtx = x.transpose() * &x;
    let psi = xtx.try_inverse().unwrap() * x.transpose() * DVector::from_vec(y.clone());
    let oracle = &x * psi;
    for (a, b) in fitted.iter().zip(oracle.iter()) {
        assert!((a - b).abs() <= 1e-10);
    }
}

#[test]
fn solution_beats_random_perturbations() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let design = gaussian(120, 9, &mut rng);
    let y = DVector::from_fn(120, |_, _| StandardNormal.sample(&mut rng));
    let psi = LeastSquares::new(&design, SolverOptions::default())
        .unwrap()
        .solve(&y)
        .unwrap();
    let best = residual(&design, &psi, &y);
    for _ in 0..100 {
        let scale = 10f64.powf(rng.random_range(-6.0..0.0));
        let delta = DVector::from_fn(9, |_, _| { let z: f64 = StandardNormal.sample(&mut rng); scale * z });
        assert!(residual(&design, &(&psi + delta), &y) >= best);
    }
}

#[test]
fn affine_targets_of_states_are_recovered_for_every_family() {
    let w = generate_weights(25, 1, 0.8, 0.3, 10).unwrap();
    let u = uniform_input(800, 11).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let coef = DVector::from_fn(25, |_, _| StandardNormal.sample(&mut rng));
    for family in Family::ALL {
        let spec = ReservoirSpec::new(family, w.clone());
        let traj = run_reservoir(&spec, &DMatrix::from_column_slice(800, 1, &u), 0).unwrap();
        let y: Vec<f64> = (traj.states() * &coef).iter().map(|v| 2.5 * v - 0.7).collect();
        let readout = train_readout(&traj, &y, 1e-12).unwrap();
        let fitted = predict(&readout, &traj).unwrap();
        let e = nmse(&fitted, &y).unwrap();
        assert!(e < 1e-8, "{family}: {e}");
    }
}
