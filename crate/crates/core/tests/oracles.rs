use borel_pde::oracles::*;
use borel_pde::validation::{geometric_points, loglog_slope};
use borel_pde::*;
use std::sync::OnceLock;

fn ex1() -> &'static SimilarityProfile {
    static CELL: OnceLock<SimilarityProfile> = OnceLock::new();
    CELL.get_or_init(|| similarity_ode_ex1(0.5, 0.0, 1e4, 1.0).unwrap())
}

fn ex3() -> &'static SimilarityProfile {
    static CELL: OnceLock<SimilarityProfile> = OnceLock::new();
    CELL.get_or_init(|| similarity_ode_ex3(1.0, 0.0, 200.0, 1.0).unwrap())
}

#[test]
fn exponent_identities() {
    for gamma in [0.2, 0.5, 0.8] {
        let (a, b) = SimilarityExample::Ex1 { gamma }.exponents();
        assert!((4.0 * a - 3.0 * b - (a - 1.0)).abs() < 1e-14);
        assert!((a - gamma / (3.0 * (1.0 - gamma))).abs() < 1e-15);
    }
    let (a, b) = SimilarityExample::Ex3 { delta: 1.0 }.exponents();
    assert_eq!((a, b), (-1.5, 1.0 / 6.0));
    assert!((a / 3.0 - 3.0 * b + 1.0).abs() < 1e-15);
}

#[test]
fn ex1_far_field_normalization() {
    // The first correction is γ(γ−1)(γ−2)η^{3γ−3}, 3.75e-4 at γ = 1/2 and η = 100.
    let h = ex1().value(300.0).unwrap();
    assert!((h / 300f64.sqrt() - 1.0).norm() < 1e-4);
    let p = similarity_ode_ex1(0.3, 0.0, 1e4, 1.0).unwrap();
    let h = p.value(100.0).unwrap();
    assert!((h / 100f64.powf(0.3) - 1.0).norm() < 1e-4);
}

#[test]
fn ex1_correction_exponent() {
    let etas = geometric_points(40.0, 250.0, 8);
    let d: Vec<f64> = etas.iter().map(|&e| (ex1().value(e).unwrap() - e.sqrt()).norm()).collect();
    let slope = loglog_slope(&etas, &d);
    assert!((slope - (4.0 * 0.5 - 3.0)).abs() < 0.05, "{slope}");
}

#[test]
fn ex3_far_field_normalization_and_correction() {
    // The first correction is −990η^{−6}, below 1e-4 from η = 20.
    let q = ex3().value(20.0).unwrap();
    assert!((q * 20f64.powi(9) - 1.0).norm() < 1e-4);
    let etas = geometric_points(9.0, 12.5, 8);
    let d: Vec<f64> = etas.iter().map(|&e| (ex3().value(e).unwrap() - e.powi(-9)).norm()).collect();
    let slope = loglog_slope(&etas, &d);
    assert!((slope - (-12.0 - 3.0)).abs() < 0.05, "{slope}");
}

fn ode_residual(profile: &SimilarityProfile, eta: f64) -> f64 {
    // h‴ by a five-point stencil on h″; `a h − b η h′` is normalized by its larger term.
    let h = 1e-3 * eta;
    let h2 = |r: f64| profile.state_at(r).unwrap()[2];
    let d3 = (-h2(eta + 2.0 * h) + 8.0 * h2(eta + h) - 8.0 * h2(eta - h) + h2(eta - 2.0 * h)) / (12.0 * h);
    let [v, v1, _] = profile.state_at(eta).unwrap();
    let (a, b) = profile.exponents;
    let m = match profile.example {
        SimilarityExample::Ex1 { .. } => 3.0,
        SimilarityExample::Ex3 { .. } => 1.0 / 3.0,
    };
    let rhs = profile.example.third_derivative(Complex64::new(eta, 0.0), v, v1);
    let scale = (a * v).norm().max((b * eta * v1).norm());
    ((d3 - rhs) * v.powf(m)).norm() / scale
}

#[test]
fn profiles_satisfy_their_ode() {
    for eta in geometric_points(1.5, 200.0, 10) {
        assert!(ode_residual(ex1(), eta) < 1e-6, "ex1 eta={eta}");
    }
    for eta in geometric_points(1.5, 12.0, 8) {
        assert!(ode_residual(ex3(), eta) < 1e-6, "ex3 eta={eta}");
    }
}

#[test]
fn ex1_reconstruction_solves_the_pde() {
    // H_t = H³H_xxx for H = t^a h(x/t^b): H_t by central differences in t, H_xxx = t^{a−3b}h‴ with h‴
    // by a five-point stencil on h″. H_t is a small difference of terms of size a·H/t, which sets the scale.
    let p = ex1();
    let (a, b) = p.exponents;
    let h = |x: f64, t: f64| p.physical(Complex64::new(x, 0.0), t).unwrap();
    for (x, t) in [(5.0, 1.0), (10.0, 0.5), (20.0, 0.05), (40.0, 0.2)] {
        let dt = 1e-4 * t;
        let ht = (h(x, t + dt) - h(x, t - dt)) / (2.0 * dt);
        let eta = x / t.powf(b);
        let e = 1e-3 * eta;
        let h2 = |r: f64| p.state_at(r).unwrap()[2];
        let d3 = (-h2(eta + 2.0 * e) + 8.0 * h2(eta + e) - 8.0 * h2(eta - e) + h2(eta - 2.0 * e)) / (12.0 * e);
        let hxxx = t.powf(a - 3.0 * b) * d3;
        let rhs = h(x, t).powi(3) * hxxx;
        let scale = a * h(x, t).norm() / t;
        assert!((ht - rhs).norm() < 1e-6 * scale, "x={x} t={t}: {ht} vs {rhs}");
    }
}

#[test]
fn profile_range_and_parameters_are_checked() {
    assert!(ex1().value(0.5).is_err());
    assert!(similarity_ode_ex1(1.2, 0.0, 1e3, 1.0).is_err());
    assert!(similarity_ode_ex1(0.5, 4.5, 1e3, 1.0).is_err());
    assert!(similarity_ode_ex3(-1.0, 0.0, 1e3, 1.0).is_err());
    assert!(similarity_ode_ex1(0.5, 0.0, 1.0, 2.0).is_err());
    assert!(series_start_radius(SimilarityExample::Ex1 { gamma: 0.5 }) > 100.0);
}

#[test]
fn brute_convolution_requires_enough_nodes() {
    let one = |_: Complex64| Complex64::new(1.0, 0.0);
    let v = brute_convolution(one, 0.0, one, 0.0, Complex64::new(2.0, 0.0), 10_000).unwrap();
    assert!((v.re - 2.0).abs() < 1e-12);
    assert!(brute_convolution(one, 0.0, one, 0.0, Complex64::new(2.0, 0.0), 9_999).is_err());
}
