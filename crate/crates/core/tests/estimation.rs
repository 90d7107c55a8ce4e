use vdge::ansatz::{haar_random_params, params_to_dense_product};
use vdge::dense::{make_ghz, make_gw, make_w};
use vdge::oracle::{reference_gme, w_eigenvalue, OracleConfig};
use vdge::seed::task_rng;
use vdge::{run_vdge, CspsaConfig, Measurement, ShotConfig};

#[test]
fn w3_estimate_with_twenty_repetitions() {
    let state = make_w(3).unwrap();
    let cfg = CspsaConfig { iterations: 300, seed: 1, ..CspsaConfig::default() };
    let est = run_vdge(&state, ShotConfig::default().into(), &cfg, 20, None).unwrap();
    let reference = reference_gme(&state, &OracleConfig::default()).unwrap();
    assert!((reference.gme - 5.0 / 9.0).abs() < 1e-9);
    assert!((est.estimate - reference.gme).abs() < 0.02, "{}", est.estimate);
    assert_eq!(est.eigenvalue, 1.0 - est.estimate);
}

#[test]
fn separable_state_estimates_near_zero() {
    for seed in 0..3 {
        let params = haar_random_params(4, &mut task_rng(seed, 0));
        let state = params_to_dense_product(&params).unwrap();
        let cfg = CspsaConfig { seed, ..CspsaConfig::default() };
        let est = run_vdge(&state, ShotConfig::default().into(), &cfg, 5, None).unwrap();
        assert!(est.estimate < 0.02, "seed {seed}: {}", est.estimate);
    }
}

#[test]
fn selection_keeps_the_highest_fidelity() {
    let state = make_gw(0.6, 0.4).unwrap();
    let cfg = CspsaConfig { iterations: 60, seed: 8, ..CspsaConfig::default() };
    let est = run_vdge(&state, ShotConfig::default().into(), &cfg, 7, None).unwrap();
    let best = est.estimates.iter().copied().fold(f64::INFINITY, f64::min);
    assert_eq!(est.estimate, best);
    assert_eq!(est.estimates[est.selected], best);
    assert_eq!(est.selected_curve().last().copied(), Some(best));
}

#[test]
fn exact_measurement_converges_from_the_optimum() {
    let n = 8;
    let state = make_w(n).unwrap();
    let init = vdge::oracle::w_optimum(n).unwrap();
    let cfg = CspsaConfig { iterations: 200, ..CspsaConfig::warm_start() };
    let est = run_vdge(&state, Measurement::Exact, &cfg, 1, Some(&init)).unwrap();
    assert!((est.estimate - (1.0 - w_eigenvalue(n))).abs() < 1e-3, "{}", est.estimate);
}

#[test]
fn ghz_readout_noise_inflates_the_error() {
    let state = make_ghz(3).unwrap();
    let mean_err = |flip: f64| {
        (0..8)
            .map(|seed| {
                let cfg = CspsaConfig { seed, ..CspsaConfig::default() };
                let m = Measurement::Sampled(ShotConfig::new(8192, flip).unwrap());
                (run_vdge(&state, m, &cfg, 5, None).unwrap().estimate - 0.5).abs()
            })
            .sum::<f64>()
            / 8.0
    };
    let (clean, noisy) = (mean_err(0.0), mean_err(0.02));
    assert!(noisy > clean, "{clean} {noisy}");
}
