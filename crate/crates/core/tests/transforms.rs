use borel_pde::special::gamma;
use borel_pde::transforms::*;
use borel_pde::validation::loglog_slope;
use borel_pde::*;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm()
}

#[test]
fn power_law_closed_forms() {
    let g = make_grid(0.2, 2.0, 32, 2.0).unwrap();
    let f = ilt_power_law(1.0, c(1.0), g.clone(), TimeGrid::single()).unwrap();
    assert_eq!(f.sigma(), 0.0);
    assert!(f.samples().iter().all(|z| (z - c(1.0)).norm() < 1e-15));
    let f = ilt_power_law(2.0, c(1.0), g.clone(), TimeGrid::single()).unwrap();
    for i in 0..g.len() {
        assert!((f.value(0, i) - g.point(i)).norm() < 1e-14);
    }
    let f = ilt_power_law(4.0 / 3.0, c(1.0), g.clone(), TimeGrid::single()).unwrap();
    assert!((f.sigma() - 1.0 / 3.0).abs() < 1e-15);
    for i in 0..g.len() {
        assert!(rel(f.value(0, i), g.point(i).powf(1.0 / 3.0) / gamma(4.0 / 3.0)) < 1e-14);
    }
    assert!(ilt_power_law(0.0, c(1.0), g.clone(), TimeGrid::single()).is_err());
}

#[test]
fn contour_inversion_of_powers() {
    for theta in [0.0, 0.3] {
        let g = make_grid(theta, 5.0, 64, 2.0).unwrap();
        for spec in [ContourSpec::growth(0.0), ContourSpec::growth(2.0), ContourSpec::unit_apex()] {
            let two = ilt_contour(|y, _| y.powi(-2), g.clone(), TimeGrid::single(), &spec, 1.0).unwrap();
            let one = ilt_contour(|y, _| 1.0 / y, g.clone(), TimeGrid::single(), &spec, 0.0).unwrap();
            let r = ilt_contour(|y, _| 3.0 / (y * y), g.clone(), TimeGrid::single(), &spec, 1.0).unwrap();
            for i in 0..g.len() {
                let p = g.point(i);
                assert!(rel(two.value(0, i), p) < 1e-6, "theta={theta} spec={spec:?} i={i} {}", rel(two.value(0, i), p));
                assert!(rel(one.value(0, i), c(1.0)) < 1e-6);
                assert!(rel(r.value(0, i), 3.0 * p) < 1e-6);
            }
        }
    }
}

#[test]
fn contour_inversion_respects_power_bound() {
    let g = make_grid(0.1, 8.0, 64, 2.0).unwrap();
    for alpha in [1.0, 4.0 / 3.0, 2.5] {
        let f = ilt_contour(|y, _| y.powf(-alpha), g.clone(), TimeGrid::single(), &ContourSpec::growth(1.0), alpha - 1.0).unwrap();
        for i in 0..g.len() {
            let s = g.nodes()[i];
            assert!(f.value(0, i).norm() <= (1.0 + 1e-6) * s.powf(alpha - 1.0) / gamma(alpha));
        }
    }
}

#[test]
fn truncated_contour_reports_tail() {
    let g = make_grid(0.0, 5.0, 32, 2.0).unwrap();
    let spec = ContourSpec { r_max: Some(1.0), ..ContourSpec::growth(0.0) };
    let r = ilt_contour(|y, _| y.powi(-2), g, TimeGrid::single(), &spec, 1.0);
    assert!(matches!(r, Err(BorelError::ContourTail { .. })));
}

#[test]
fn contour_rejects_bad_angles() {
    let g = make_grid(0.3, 5.0, 32, 2.0).unwrap();
    let spec = ContourSpec { phi: 0.2, ..ContourSpec::growth(0.0) };
    assert!(ilt_contour(|y, _| 1.0 / y, g.clone(), TimeGrid::single(), &spec, 0.0).is_err());
    let spec = ContourSpec { phi: 0.6, ..ContourSpec::growth(0.0) };
    assert!(ilt_contour(|y, _| 1.0 / y, g, TimeGrid::single(), &spec, 0.0).is_err());
}

#[test]
fn scaled_transform_at_time_zero_is_power_law() {
    let g = make_grid(0.0, 5.0, 64, 3.0).unwrap();
    for (beta, delta) in [(1.5, 0.0), (2.5, -2.0 / 3.0), (3.5, -1.0), (1.0, 1.0)] {
        let spec = ScaledIltSpec { beta, delta };
        let f = ilt_scaled_ex2(spec, c(1.0), g.clone(), TimeGrid::single(), &ContourSpec::unit_apex()).unwrap();
        let a = spec.order();
        assert!((f.sigma() - (a - 1.0)).abs() < 1e-14);
        for i in 0..g.len() {
            let exact = 1.5f64.powf(-2.0 * beta / 3.0) * g.point(i).powf(a - 1.0) / gamma(a);
            assert!(rel(f.value(0, i), exact) < 1e-8, "beta={beta} delta={delta}");
        }
    }
}

#[test]
fn scaled_transform_matches_series_and_laplace_pair() {
    let g = make_grid(0.0, 5.0, 128, 3.0).unwrap();
    let times = TimeGrid::uniform(0.1, 2).unwrap();
    let spec = ScaledIltSpec { beta: 3.5, delta: -1.0 };
    let pref = c(-15.0 / 8.0);
    let f = ilt_scaled_ex2(spec, pref, g.clone(), times.clone(), &ContourSpec::unit_apex()).unwrap();
    for (n, &t) in times.times().iter().enumerate() {
        for i in (0..g.len()).step_by(9) {
            let series = scaled_ex2_series(spec, pref, g.point(i), t);
            assert!(rel(f.value(n, i), series) < 1e-8);
        }
        for y in [10.0, 20.0] {
            let y = c(y);
            let x = t + (1.5 * y).powf(2.0 / 3.0);
            let exact = pref * x.powf(-3.5) * y;
            let back = laplace_back(&f, y, n, 1.0).unwrap().value;
            assert!(rel(back, exact) < 1e-6, "t={t} y={y}");
        }
    }
}

#[test]
fn scaled_transform_quadrature_self_convergence() {
    let g = make_grid(0.2, 5.0, 32, 3.0).unwrap();
    let times = TimeGrid::uniform(0.05, 1).unwrap();
    let spec = ScaledIltSpec { beta: 2.5, delta: -2.0 / 3.0 };
    let base = ContourSpec::unit_apex();
    let a = ilt_scaled_ex2(spec, c(1.0), g.clone(), times.clone(), &ContourSpec { n_quad: Some(1024), ..base }).unwrap();
    let b = ilt_scaled_ex2(spec, c(1.0), g, times, &ContourSpec { n_quad: Some(2048), ..base }).unwrap();
    let diff = a.sub(&b).unwrap();
    assert!(diff.samples().iter().zip(a.samples()).all(|(d, v)| d.norm() < 1e-8 * v.norm().max(1.0)));
}

#[test]
fn forcing_term_small_p_slope() {
    let g = make_grid(0.0, 5.0, 256, 3.0).unwrap();
    let times = TimeGrid::uniform(0.05, 1).unwrap();
    let f = ilt_scaled_ex2(ScaledIltSpec { beta: 3.5, delta: -1.0 }, c(1.0), g.clone(), times, &ContourSpec::unit_apex()).unwrap();
    assert!((f.sigma() - 1.0 / 3.0).abs() < 1e-14);
    let s: Vec<f64> = g.nodes()[..10].to_vec();
    let v: Vec<f64> = (0..10).map(|i| f.value(1, i).norm()).collect();
    assert!((loglog_slope(&s, &v) - 1.0 / 3.0).abs() < 0.05);
}

#[test]
fn laplace_back_closed_forms() {
    let g = make_grid(0.0, 20.0, 256, 2.0).unwrap();
    let one = ilt_power_law(1.0, c(1.0), g.clone(), TimeGrid::single()).unwrap();
    assert!(rel(laplace_back(&one, c(2.0), 0, 1.0).unwrap().value, c(0.5)) < 1e-12);
    let lin = ilt_power_law(2.0, c(1.0), g.clone(), TimeGrid::single()).unwrap();
    assert!(rel(laplace_back(&lin, c(7.0), 0, 1.0).unwrap().value, c(1.0 / 49.0)) < 1e-12);
    let third = ilt_power_law(4.0 / 3.0, c(1.0), g.clone(), TimeGrid::single()).unwrap();
    assert!(rel(laplace_back(&third, c(5.0), 0, 1.0).unwrap().value, c(5f64.powf(-4.0 / 3.0))) < 1e-10);
    assert!(matches!(laplace_back(&one, c(0.5), 0, 1.0), Err(BorelError::BelowAbscissa { .. })));
}

#[test]
fn round_trip_power_laws() {
    let g = make_grid(0.0, 5.0, 256, 2.0).unwrap();
    for alpha in [1.0, 4.0 / 3.0, 2.0, 3.0] {
        let f = ilt_power_law(alpha, c(1.0), g.clone(), TimeGrid::single()).unwrap();
        for y in [4.0, 8.0, 16.0] {
            let v = laplace_back(&f, c(y), 0, 2.0).unwrap();
            let exact = c(y.powf(-alpha));
            assert!(rel(v.value, exact) + v.tail / exact.norm() < 1e-5, "alpha={alpha} y={y}");
        }
    }
}

#[test]
fn ray_independence() {
    let y = Complex64::new(9.0, 1.5);
    let exact = 1.0 / ((y + 1.0) * (y + 1.0));
    let values: Vec<Complex64> = [0.25, -0.3]
        .iter()
        .map(|&theta| {
            let g = make_grid(theta, 5.0, 256, 2.0).unwrap();
            let f = BorelFunction::from_values(g, TimeGrid::single(), 1.0, |p, _| p * (-p).exp()).unwrap();
            laplace_back(&f, y, 0, 1.0).unwrap().value
        })
        .collect();
    assert!(rel(values[0], values[1]) < 1e-5);
    assert!(rel(values[0], exact) < 1e-5);
}
