use borel_pde::certificates::*;

fn ts_doubling(start: f64, n: usize) -> Vec<f64> {
    (0..n).map(|k| start * 2f64.powi(k as i32)).collect()
}

fn assert_scaling(model: CertificateModel, start: f64) {
    let e = model.threshold_exponent().unwrap();
    let rows = thresholds(&model, &ts_doubling(start, 5), 2.0, Constants::default()).unwrap();
    for w in rows.windows(2) {
        let ratio = w[1].nu_certified / w[0].nu_certified;
        let target = 2f64.powf(e);
        assert!((ratio / target - 1.0).abs() < 0.05, "{model:?} T={}: ratio {ratio} vs {target}", w[0].t_final);
    }
}

#[test]
fn coefficient_free_ball_is_one_over_b() {
    let inputs = GeneralInputs { alpha_js: [1.0, 1.5, 2.0, 2.5], beta: 1.0, a_b: 0.0, a_r: 1.0, alpha_r: 2.0, a_fi: 0.0 };
    for b in [1.01, 2.0, 10.0] {
        let c = general_certificate(&inputs, 1.0, 20.0, b, None, Constants::default()).unwrap();
        assert!((c.ball_lhs - 1.0 / b).abs() < 1e-15);
        assert!(c.satisfied);
    }
    assert!(general_certificate(&inputs, 1.0, 4.0, 1.0, None, Constants::default()).is_err());
}

#[test]
fn general_margins_grow_with_nu() {
    let inputs = GeneralInputs { alpha_js: [1.0, 1.5, 2.0, 2.5], beta: 1.0, a_b: 2.0, a_r: 1.0, alpha_r: 2.0, a_fi: 0.5 };
    let mut nu = 1.0;
    let mut last = general_certificate(&inputs, 1.0, nu, 2.0, None, Constants::default()).unwrap();
    for _ in 0..6 {
        nu *= 4.0;
        let c = general_certificate(&inputs, 1.0, nu, 2.0, None, Constants::default()).unwrap();
        assert!(c.ball_margin >= last.ball_margin && c.contraction_margin >= last.contraction_margin);
        last = c;
    }
    assert!(last.satisfied);
    // b = 2, T = 1: the least certified ν sits on the boundary.
    let model = CertificateModel::General(inputs);
    let nu = least_certified_nu(&model, 1.0, 2.0, Constants::default(), 0.1, 1e4, 1e-12).unwrap().unwrap();
    assert!(model.evaluate(1.0, nu, 2.0, None, Constants::default()).unwrap().satisfied);
    assert!(!model.evaluate(1.0, nu * (1.0 - 1e-6), 2.0, None, Constants::default()).unwrap().satisfied);
}

#[test]
fn unmet_precondition_is_reported() {
    let inputs = GeneralInputs { alpha_js: [1.0; 4], beta: 1.0, a_b: 1.0, a_r: 100.0, alpha_r: 1.0, a_fi: 0.0 };
    let c = general_certificate(&inputs, 1.0, 2.0, 2.0, None, Constants::default()).unwrap();
    assert!(!c.satisfied);
    assert!(c.reason.unwrap().contains("not below 1"));
}

#[test]
fn vanishing_horizon() {
    for nu in [0.5, 2.0, 50.0] {
        let c = ex1_certificate(0.5, 0.0, nu, 1.5, None, Constants::default()).unwrap();
        assert!((c.ball_lhs - 1.0 / 1.5).abs() < 1e-15 && c.contraction_lhs == 0.0 && c.satisfied);
        assert!(ex2_certificate(0.0, nu, 1.5, None, Constants::default()).unwrap().satisfied);
        assert!(ex3_certificate(1.0, 0.0, nu, 1.5, EX3_K, None, Constants::default()).unwrap().satisfied);
    }
    let small = ex1_certificate(0.5, 1e-12, 8.0, 1.5, None, Constants::default()).unwrap();
    assert!((small.ball_lhs - 1.0 / 1.5).abs() < 1e-3 && small.contraction_lhs < 1e-3);
}

#[test]
fn ex1_a_r_bounds_the_forcing_norm() {
    // F₀ ≤ 3Tp for γ = 1/2, so ‖F₀‖_ν ≤ 3T M₀ sup (1+s²) s e^{−νs}.
    let a_r = ex1_a_r(0.5);
    let m0 = borel_pde::borel_core::m0();
    for nu in [2.0, 4.0, 16.0] {
        let sup = (1..100_000).map(|i| i as f64 * 1e-4).map(|s| (1.0 + s * s) * s * (-nu * s).exp()).fold(0.0, f64::max);
        assert!(3.0 * m0 * sup <= a_r / nu);
    }
}

#[test]
fn measured_norm_replaces_the_bound() {
    let c = ex1_certificate(0.5, 0.1, 8.0, 2.0, Some(0.01), Constants::default()).unwrap();
    assert_eq!(c.f0_norm, 0.01);
    assert!(c.f0_norm_bound > 0.0 && c.f0_norm_measured == Some(0.01));
    let bigger = ex1_certificate(0.5, 0.1, 8.0, 2.0, Some(0.1), Constants::default()).unwrap();
    assert!(bigger.contraction_lhs > c.contraction_lhs);
}

#[test]
fn larger_constants_shrink_the_region() {
    let loose = ex2_certificate(1.0, 20.0, 2.0, None, Constants::default()).unwrap();
    let tight = ex2_certificate(1.0, 20.0, 2.0, None, Constants { c: 5.0, ..Constants::default() }).unwrap();
    assert!(tight.ball_lhs > loose.ball_lhs && tight.contraction_lhs > loose.contraction_lhs);
}

#[test]
fn sweeps_are_monotone() {
    let ts = [0.01, 0.02, 0.05, 0.1, 0.2];
    let nus = [2.0, 4.0, 8.0, 16.0, 32.0];
    for model in [CertificateModel::Ex1 { gamma: 0.5 }, CertificateModel::Ex2, CertificateModel::Ex3 { delta: 1.0, k_bound: EX3_K }] {
        let rows = sweep(&model, &ts, &nus, 2.0, Constants::default()).unwrap();
        assert!(is_monotone(&rows, nus.len()), "{model:?}");
        let csv = sweep_csv(&rows);
        assert_eq!(csv.lines().count(), 26);
        assert_eq!(csv.lines().next().unwrap(), "T,nu,b,ball_lhs,contraction_lhs,satisfied");
    }
    assert!(sweep(&CertificateModel::Ex2, &[], &nus, 2.0, Constants::default()).is_err());
}

#[test]
fn ex1_threshold_scales_like_cube_root() {
    assert_scaling(CertificateModel::Ex1 { gamma: 0.5 }, 1e-6);
}

#[test]
fn ex2_threshold_scales_like_three_halves() {
    assert_scaling(CertificateModel::Ex2, 0.01);
}

#[test]
fn ex3_threshold_scales_like_square_root() {
    assert_scaling(CertificateModel::Ex3 { delta: 1.0, k_bound: EX3_K }, 1e3);
}

#[test]
fn ex3_reports_both_boundaries() {
    let rows = thresholds(&CertificateModel::Ex3 { delta: 1.0, k_bound: EX3_K }, &ts_doubling(1e3, 4), 2.0, Constants::default()).unwrap();
    for w in rows.windows(2) {
        assert!((w[1].nu_similarity / w[0].nu_similarity - 2f64.cbrt()).abs() < 1e-9);
    }
    // The certified boundary outruns the cubic one.
    assert!(rows.last().unwrap().nu_certified > rows.last().unwrap().nu_similarity);
}

#[test]
fn ex3_requires_geometric_convergence() {
    let c = ex3_certificate(1.0, 10.0, 2.0, 2.0, EX3_K, None, Constants::default()).unwrap();
    assert!(!c.satisfied && c.reason.is_some());
}
