use borel_pde::convolution::{conv_power, convolve, monomial_times, ConvPowers};
use borel_pde::oracles::{brute_convolution, rational_self_convolution};
use borel_pde::special::gamma;
use borel_pde::transforms::ilt_power_law;
use borel_pde::*;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn one() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm()
}

#[test]
fn constants_convolve_to_p() {
    let g = make_grid(0.0, 4.0, 64, 2.0).unwrap();
    let f = ilt_power_law(1.0, one(), g.clone(), TimeGrid::single()).unwrap();
    let h = convolve(&f, &f).unwrap();
    assert_eq!(h.sigma(), 1.0);
    for i in 0..g.len() {
        assert!((h.row(0)[i] - one()).norm() < 1e-12);
    }
}

#[test]
fn beta_identities_on_rays() {
    let alphas = [1.0, 4.0 / 3.0, 2.0, 3.0];
    for theta in [0.0, 0.3, -0.4] {
        let g = make_grid(theta, 5.0, 256, 2.0).unwrap();
        for &a in &alphas {
            for &b in &alphas {
                let fa = ilt_power_law(a, one(), g.clone(), TimeGrid::single()).unwrap();
                let fb = ilt_power_law(b, one(), g.clone(), TimeGrid::single()).unwrap();
                let h = convolve(&fa, &fb).unwrap();
                let exact = ilt_power_law(a + b, one(), g.clone(), TimeGrid::single()).unwrap();
                for i in 0..g.len() {
                    let e = exact.value(0, i);
                    assert!(rel(h.value(0, i), e) < 1e-6, "a={a} b={b} theta={theta} i={i}");
                }
            }
        }
    }
}

#[test]
fn rational_kernel_by_convolution() {
    let g = make_grid(0.0, 10.0, 512, 2.0).unwrap();
    let f = BorelFunction::from_values(g.clone(), TimeGrid::single(), 0.0, |p, _| 1.0 / (1.0 + p * p)).unwrap();
    let h = convolve(&f, &f).unwrap();
    for r in [0.1, 1.0, 10.0] {
        let v = eval_at(&h, r, 0).unwrap();
        let exact = rational_self_convolution(Complex64::new(r, 0.0));
        assert!(rel(v, exact) < 1e-8, "r = {r}: {v} vs {exact}");
    }
    let at_one = rational_self_convolution(one()).re;
    assert!((at_one - 2.0 * (2f64.ln() + std::f64::consts::FRAC_PI_4) / 5.0).abs() < 1e-15);
    assert!((at_one - 0.59142).abs() < 1e-5);
}

#[test]
fn agrees_with_brute_force_oracle_for_singular_factors() {
    let theta = 0.2;
    let g = make_grid(theta, 3.0, 256, 2.0).unwrap();
    let phase = g.phase();
    let smooth_f = |p: Complex64| (p * 0.7).cos() + 0.3;
    let smooth_g = |p: Complex64| 1.0 / (1.0 + 0.5 * p);
    let (sf, sg) = (-1.0 / 3.0, 0.5);
    let f = BorelFunction::from_values(g.clone(), TimeGrid::single(), sf, |p, _| p.powf(sf) * smooth_f(p)).unwrap();
    let h = BorelFunction::from_values(g.clone(), TimeGrid::single(), sg, |p, _| p.powf(sg) * smooth_g(p)).unwrap();
    let fh = convolve(&f, &h).unwrap();
    for s in [0.01, 0.4, 1.3, 2.9] {
        let p = s * phase;
        let oracle = brute_convolution(|q| q.powf(sf) * smooth_f(q), sf, |q| q.powf(sg) * smooth_g(q), sg, p, 40_000).unwrap();
        let v = eval_at(&fh, s, 0).unwrap();
        assert!(rel(v, oracle) < 1e-6, "s = {s}: {v} vs {oracle}");
    }
}

#[test]
fn brute_oracle_self_convergence_and_beta() {
    let p = Complex64::new(0.8, 0.3);
    let f = |q: Complex64| q.powf(1.0 / 3.0);
    let g = |q: Complex64| q;
    let a = brute_convolution(f, 1.0 / 3.0, g, 1.0, p, 20_000).unwrap();
    let b = brute_convolution(f, 1.0 / 3.0, g, 1.0, p, 40_000).unwrap();
    assert!((a - b).norm() < 1e-12 * a.norm());
    let exact = gamma(4.0 / 3.0) * gamma(2.0) / gamma(10.0 / 3.0) * p.powf(7.0 / 3.0);
    assert!(rel(a, exact) < 1e-10);
    assert!(brute_convolution(f, 1.0 / 3.0, g, 1.0, p, 100).is_err());
}

#[test]
fn powers_and_monomials() {
    let g = make_grid(0.0, 4.0, 128, 2.0).unwrap();
    let unit = ilt_power_law(1.0, one(), g.clone(), TimeGrid::single()).unwrap();
    let sq = conv_power(&unit, 3).unwrap();
    let lin_again = conv_power(&unit, 2).unwrap();
    let lin = ilt_power_law(2.0, one(), g.clone(), TimeGrid::single()).unwrap();
    let cube = conv_power(&lin, 2).unwrap();
    for i in 0..g.len() {
        let s = g.nodes()[i];
        assert!((lin_again.value(0, i).re - s).abs() < 1e-12 * s);
        assert!((sq.value(0, i).re - s * s / 2.0).abs() < 1e-10 * s * s);
        assert!((cube.value(0, i).re - s.powi(3) / 6.0).abs() < 1e-10 * s.powi(3));
    }
    let same = conv_power(&lin, 1).unwrap();
    assert_eq!(same.samples(), lin.samples());
    assert!(conv_power(&lin, 0).is_err());
    let cache = ConvPowers::new(&lin, 3).unwrap();
    assert_eq!(cache.k_max(), 3);
    assert!(cache.get(0).is_err() && cache.get(4).is_err());
    let m = monomial_times(&unit, 2).unwrap();
    assert_eq!(m.sigma(), 2.0);
    assert!((eval_at(&m, 0.5, 0).unwrap().re - 0.25).abs() < 1e-14);
    assert_eq!(monomial_times(&unit, 3).unwrap().sigma(), 3.0);
    assert_eq!(monomial_times(&unit, 0).unwrap().samples(), unit.samples());
    assert!(monomial_times(&unit, 4).is_err());
}

#[test]
fn grid_mismatch_is_rejected() {
    let a = ilt_power_law(1.0, one(), make_grid(0.0, 4.0, 32, 2.0).unwrap(), TimeGrid::single()).unwrap();
    let b = ilt_power_law(1.0, one(), make_grid(0.0, 5.0, 32, 2.0).unwrap(), TimeGrid::single()).unwrap();
    assert!(matches!(convolve(&a, &b), Err(BorelError::GridMismatch)));
}

fn random_smooth(rng: &mut ChaCha8Rng, grid: std::sync::Arc<RayGrid>) -> BorelFunction {
    let c: Vec<Complex64> = (0..4).map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect();
    let w: Vec<f64> = (0..4).map(|_| rng.random_range(0.0..3.0)).collect();
    BorelFunction::from_smooth(grid, TimeGrid::single(), 0.0, move |s, _| {
        (0..4).map(|k| c[k] * Complex64::from_polar(1.0, w[k] * s)).sum()
    })
    .unwrap()
}

#[test]
fn commutativity_and_associativity() {
    let g = make_grid(0.1, 4.0, 256, 2.0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..5 {
        let a = random_smooth(&mut rng, g.clone());
        let b = random_smooth(&mut rng, g.clone());
        let c = random_smooth(&mut rng, g.clone());
        let ab = convolve(&a, &b).unwrap();
        let ba = convolve(&b, &a).unwrap();
        let scale = nu_norm(&ab, 1.0).value;
        assert!(nu_norm(&ab.sub(&ba).unwrap(), 1.0).value < 1e-6 * scale);
        let l = convolve(&ab, &c).unwrap();
        let r = convolve(&a, &convolve(&b, &c).unwrap()).unwrap();
        let scale = nu_norm(&l, 1.0).value;
        assert!(nu_norm(&l.sub(&r).unwrap(), 1.0).value < 1e-6 * scale);
    }
}

#[test]
fn power_law_kernel_bound() {
    // ‖H*F‖_ν ≤ c Γ(α) ν^{−α} ‖F‖_ν for H = c p^{α−1}.
    let g = make_grid(0.0, 6.0, 256, 2.0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for alpha in [1.0 / 3.0, 1.0, 2.0] {
        let h = BorelFunction::from_smooth(g.clone(), TimeGrid::single(), alpha - 1.0, |_, _| one()).unwrap();
        for nu in [2.0, 4.0, 8.0] {
            for _ in 0..10 {
                let f = random_smooth(&mut rng, g.clone());
                let lhs = nu_norm(&convolve(&h, &f).unwrap(), nu).value;
                let rhs = gamma(alpha) * nu.powf(-alpha) * nu_norm(&f, nu).value;
                assert!(lhs <= rhs * (1.0 + 1e-9), "alpha={alpha} nu={nu}: {lhs} > {rhs}");
            }
        }
    }
}
