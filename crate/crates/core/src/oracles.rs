//! Independent reference values: similarity-solution ODE profiles and brute-force quadratures.

use crate::error::{BorelError, Result};
use crate::quadrature::gauss_legendre;
use num_complex::Complex64;
use ode_solvers::{Dop853, OutputType, System, Vector6};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum SimilarityExample {
    /// `H_t = H³H_xxx`, `H = t^a h(x/t^b)`, `h ~ η^γ`.
    Ex1 { gamma: f64 },
    /// `H_t = H^{1/3}H_xxx`, `H = t^a q(x/t^b)`, `q ~ η^{−9δ}`.
    Ex3 { delta: f64 },
}

impl SimilarityExample {
    /// Time-scaling pair `(a, b)`.
    pub fn exponents(&self) -> (f64, f64) {
        match *self {
            SimilarityExample::Ex1 { gamma } => (gamma / (3.0 * (1.0 - gamma)), 1.0 / (3.0 * (1.0 - gamma))),
            SimilarityExample::Ex3 { delta } => (-3.0 * delta / (1.0 + delta), 1.0 / (3.0 * (1.0 + delta))),
        }
    }

    /// Leading far-field exponent and correction exponent `μ`.
    fn far_field(&self) -> (f64, f64) {
        match *self {
            SimilarityExample::Ex1 { gamma } => (gamma, 3.0 * gamma - 3.0),
            SimilarityExample::Ex3 { delta } => (-9.0 * delta, -3.0 * delta - 3.0),
        }
    }

    /// Power of `h` multiplying `h‴`.
    fn nonlinear_power(&self) -> f64 {
        match *self {
            SimilarityExample::Ex1 { .. } => 3.0,
            SimilarityExample::Ex3 { .. } => 1.0 / 3.0,
        }
    }

    /// `h‴ = (a h − b η h′)/h^m`.
    pub fn third_derivative(&self, eta: Complex64, h: Complex64, h1: Complex64) -> Complex64 {
        let (a, b) = self.exponents();
        (a * h - b * eta * h1) / h.powf(self.nonlinear_power())
    }
}

/// Coefficients `c_n` of `h = η^{e₀} Σ c_n η^{nμ}`; dominant balance gives `n c_n = [P^m D]_{n−1}`.
pub fn far_field_coefficients(example: SimilarityExample, n_terms: usize) -> Vec<f64> {
    let (e0, mu) = example.far_field();
    let m = example.nonlinear_power();
    let mut c = vec![1.0];
    for n in 1..n_terms {
        let pm = series_power(&c, m);
        let d: Vec<f64> = c
            .iter()
            .enumerate()
            .map(|(k, ck)| {
                let e = e0 + k as f64 * mu;
                ck * e * (e - 1.0) * (e - 2.0)
            })
            .collect();
        let mut conv = 0.0;
        for k in 0..n {
            conv += pm[k] * d[n - 1 - k];
        }
        c.push(conv / n as f64);
    }
    c
}

/// `P^α` for a power series with `P₀ = 1`, truncated to the length of `p`.
fn series_power(p: &[f64], alpha: f64) -> Vec<f64> {
    let mut q = vec![1.0];
    for n in 1..p.len() {
        let mut acc = 0.0;
        for k in 1..=n {
            acc += (alpha * k as f64 - (n - k) as f64) * p[k] * q[n - k];
        }
        q.push(acc / n as f64);
    }
    q
}

struct RayOde {
    example: SimilarityExample,
    dir: Complex64,
    r0: f64,
    sign: f64,
}

fn pack(h: [Complex64; 3]) -> Vector6<f64> {
    Vector6::new(h[0].re, h[0].im, h[1].re, h[1].im, h[2].re, h[2].im)
}

fn unpack(y: &Vector6<f64>) -> [Complex64; 3] {
    [Complex64::new(y[0], y[1]), Complex64::new(y[2], y[3]), Complex64::new(y[4], y[5])]
}

/// Independent variable `u = ln(r₀/r)`, increasing from 0 for either direction of travel in `r`
/// (the dense output of the integrator assumes a growing `|u|`).
impl System<f64, Vector6<f64>> for RayOde {
    fn system(&self, u: f64, y: &Vector6<f64>, dy: &mut Vector6<f64>) {
        let [h, h1, h2] = unpack(y);
        let r = self.r0 * (-self.sign * u).exp();
        let eta = r * self.dir;
        let h3 = self.example.third_derivative(eta, h, h1);
        let dr = -self.sign * r;
        *dy = pack([dr * self.dir * h1, dr * self.dir * h2, dr * self.dir * h3]);
    }
}

const RTOL: f64 = 1e-12;

/// Solution of the similarity ODE along the ray `arg η = angle`, stored at geometric radii.
#[derive(Debug, Clone, Serialize)]
pub struct SimilarityProfile {
    pub example: SimilarityExample,
    pub angle: f64,
    pub eta_grid: Vec<f64>,
    /// `(h, h′, h″)` at each radius.
    pub states: Vec<[Complex64; 3]>,
    pub exponents: (f64, f64),
    pub series_terms: usize,
    /// Radii above this are served by the far-field series.
    pub eta_max: f64,
}

impl SimilarityProfile {
    fn integrate(&self, from: f64, state: [Complex64; 3], to: f64) -> Result<[Complex64; 3]> {
        integrate_ray(self.example, self.angle, from, state, to)
    }

    /// `(h, h′, h″)` at radius `r` in the stored range, integrated from the nearest stored node.
    pub fn state_at(&self, r: f64) -> Result<[Complex64; 3]> {
        let lo = *self.eta_grid.last().expect("non-empty profile");
        let hi = self.eta_max.max(self.eta_grid[0]);
        if !(r >= lo * (1.0 - 1e-12) && r <= hi * (1.0 + 1e-12)) {
            return Err(BorelError::param("eta", format!("radius {r} outside profile range [{lo}, {hi}]")));
        }
        if r >= self.eta_grid[0] {
            return Ok(self.asymptotic(r));
        }
        let k = self
            .eta_grid
            .iter()
            .enumerate()
            .min_by(|a, b| (a.1 - r).abs().total_cmp(&(b.1 - r).abs()))
            .map(|(k, _)| k)
            .expect("non-empty");
        if self.eta_grid[k] == r {
            return Ok(self.states[k]);
        }
        self.integrate(self.eta_grid[k], self.states[k], r)
    }

    pub fn value(&self, r: f64) -> Result<Complex64> {
        Ok(self.state_at(r)?[0])
    }

    /// `H(x, t) = t^a h(x/t^b)` for `x` on the profile ray.
    pub fn physical(&self, x: Complex64, t: f64) -> Result<Complex64> {
        let (a, b) = self.exponents;
        let eta = x / t.powf(b);
        if (eta.arg() - self.angle).abs() > 1e-9 {
            return Err(BorelError::param("x", format!("arg x/t^b = {} is off the profile ray {}", eta.arg(), self.angle)));
        }
        Ok(t.powf(a) * self.value(eta.norm())?)
    }

    /// Far-field series value at radius `r`.
    pub fn asymptotic(&self, r: f64) -> [Complex64; 3] {
        far_field_state(self.example, self.angle, r, self.series_terms)
    }
}

fn integrate_ray(example: SimilarityExample, angle: f64, from: f64, state: [Complex64; 3], to: f64) -> Result<[Complex64; 3]> {
    if from == to {
        return Ok(state);
    }
    let scale = state.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1e-300);
    let sign = if to < from { 1.0 } else { -1.0 };
    let u_end = sign * (from / to).ln();
    let ode = RayOde { example, dir: Complex64::from_polar(1.0, angle), r0: from, sign };
    // The linearization has purely oscillatory modes, so the integrator's stiffness test is disabled.
    let mut solver = Dop853::from_param(
        ode,
        0.0,
        u_end,
        u_end,
        pack(state),
        RTOL,
        RTOL * 1e-3 * scale,
        0.9,
        0.0,
        0.333,
        6.0,
        u_end,
        0.0,
        1_000_000,
        u32::MAX,
        OutputType::Sparse,
    );
    solver
        .integrate()
        .map_err(|e| BorelError::Numerical(format!("similarity ODE failed between radii {from} and {to}: {e}")))?;
    let end = *solver.x_out().last().expect("output");
    if (end - u_end).abs() > 1e-9 * u_end.max(1.0) {
        let r = from * (-sign * end).exp();
        return Err(BorelError::Numerical(format!("similarity ODE stopped at radius {r} before {to}")));
    }
    let y = unpack(solver.y_out().last().expect("output"));
    if y.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) || y[0].norm() < 1e-300 {
        return Err(BorelError::Numerical(format!("singularity of the similarity profile near radius {to}")));
    }
    Ok(y)
}

/// `(h, h′, h″)` from the far-field series with `n_terms` terms.
fn far_field_state(example: SimilarityExample, angle: f64, r: f64, n_terms: usize) -> [Complex64; 3] {
    let (e0, mu) = example.far_field();
    let c = far_field_coefficients(example, n_terms);
    let eta = Complex64::from_polar(r, angle);
    let mut out = [Complex64::new(0.0, 0.0); 3];
    for (n, cn) in c.iter().enumerate() {
        let e = e0 + n as f64 * mu;
        let term = cn * eta.powf(e);
        out[0] += term;
        out[1] += term * e / eta;
        out[2] += term * e * (e - 1.0) / (eta * eta);
    }
    out
}

/// Number of far-field correction terms used for initialization.
const CORRECTIONS: usize = 2;

/// Smallest radius at which the first neglected far-field term is below `1e-10` relative.
pub fn series_start_radius(example: SimilarityExample) -> f64 {
    let (_, mu) = example.far_field();
    let c = far_field_coefficients(example, CORRECTIONS + 2);
    let next = c[CORRECTIONS + 1].abs().max(1e-300);
    (1e-10 / next).powf(1.0 / ((CORRECTIONS + 1) as f64 * mu)).max(1.0)
}

fn similarity_profile(example: SimilarityExample, angle: f64, eta_max: f64, eta_min: f64) -> Result<SimilarityProfile> {
    if !(eta_min > 0.0 && eta_max > eta_min) {
        return Err(BorelError::param("eta", format!("need 0 < eta_min < eta_max, got [{eta_min}, {eta_max}]")));
    }
    let start = series_start_radius(example).max(eta_min * 1.5);
    let n_terms = CORRECTIONS + 1;
    let mut state = far_field_state(example, angle, start, n_terms);
    let n = 200;
    let ratio = (eta_min / start).powf(1.0 / n as f64);
    let mut eta_grid = vec![start];
    let mut states = vec![state];
    let mut r = start;
    for k in 1..=n {
        let next = if k == n { eta_min } else { r * ratio };
        state = integrate_ray(example, angle, r, state, next).map_err(|e| match e {
            BorelError::Numerical(msg) => {
                BorelError::Numerical(format!("{msg} (ray angle {angle}, searching down to {eta_min})"))
            }
            other => other,
        })?;
        r = next;
        eta_grid.push(r);
        states.push(state);
    }
    Ok(SimilarityProfile { example, angle, eta_grid, states, exponents: example.exponents(), series_terms: n_terms, eta_max })
}

/// Profile `h` of `H = t^{γ/(3(1−γ))} h(x/t^{1/(3(1−γ))})` for `H_t = H³H_xxx`.
///
/// Substituting gives `a h − b η h′ = h³ h‴`; integration runs inward from the far-field series
/// `h ~ η^γ(1 + c₁η^{3γ−3} + c₂η^{6γ−6})`.
pub fn similarity_ode_ex1(gamma: f64, eta_ray_angle: f64, eta_max: f64, eta_min: f64) -> Result<SimilarityProfile> {
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(BorelError::param("gamma", format!("must lie in (0, 1), got {gamma}")));
    }
    let limit = 2.0 * std::f64::consts::PI / (3.0 * (1.0 - gamma));
    if !(eta_ray_angle.abs() < limit) {
        return Err(BorelError::SectorViolation { theta: eta_ray_angle, limit });
    }
    similarity_profile(SimilarityExample::Ex1 { gamma }, eta_ray_angle, eta_max, eta_min)
}

/// Profile `q` of `H = t^{−3δ/(1+δ)} q(x/t^{1/(3(1+δ))})` for `H_t = H^{1/3}H_xxx`:
/// `a q − b η q′ = q^{1/3} q‴` with `q ~ η^{−9δ}`.
pub fn similarity_ode_ex3(delta: f64, eta_ray_angle: f64, eta_max: f64, eta_min: f64) -> Result<SimilarityProfile> {
    if !(delta > 0.0) {
        return Err(BorelError::param("delta", format!("must be positive, got {delta}")));
    }
    let limit = 2.0 * std::f64::consts::PI / (3.0 * (1.0 + delta));
    if !(eta_ray_angle.abs() < limit) {
        return Err(BorelError::SectorViolation { theta: eta_ray_angle, limit });
    }
    similarity_profile(SimilarityExample::Ex3 { delta }, eta_ray_angle, eta_max, eta_min)
}

const BRUTE_ORDER: usize = 20;
/// Geometric panels reach down to this fraction of each half-interval.
const BRUTE_DEPTH: f64 = 1e-30;

/// `∫₀^{1} φ(u) du` on geometric panels accumulating at `u = 0`.
fn graded_integral<P: Fn(f64) -> Complex64>(phi: P, panels: usize) -> Complex64 {
    let rule = gauss_legendre(BRUTE_ORDER);
    let k = -BRUTE_DEPTH.ln() / panels as f64;
    let mut acc = Complex64::new(0.0, 0.0);
    let mut hi = 1.0;
    for level in 1..=panels + 1 {
        let lo = if level > panels { 0.0 } else { (-k * level as f64).exp() };
        let h = hi - lo;
        for (x, w) in rule.nodes.iter().zip(&rule.weights) {
            acc += h * w * phi(lo + h * x);
        }
        hi = lo;
    }
    acc
}

/// `(F*G)(p) = ∫₀^{|p|} F(s e^{iθ}) G(p − s e^{iθ}) e^{iθ} ds` by brute-force quadrature.
///
/// `F = s^{σF} f̃` near the origin and `G` likewise; each half is mapped by `u = s^{1+σ}` and
/// integrated on geometric panels. `n_oracle` is the total number of integrand evaluations.
pub fn brute_convolution<F, G>(f: F, sigma_f: f64, g: G, sigma_g: f64, p: Complex64, n_oracle: usize) -> Result<Complex64>
where
    F: Fn(Complex64) -> Complex64,
    G: Fn(Complex64) -> Complex64,
{
    if n_oracle < 10_000 {
        return Err(BorelError::param("n_oracle", format!("need at least 10^4 evaluations, got {n_oracle}")));
    }
    if !(sigma_f > -1.0 && sigma_g > -1.0) {
        return Err(BorelError::param("sigma", "origin exponents must exceed -1"));
    }
    let phase = Complex64::from_polar(1.0, p.arg());
    let half = 0.5 * p.norm();
    let panels = n_oracle / (2 * BRUTE_ORDER) - 1;
    let mut total = Complex64::new(0.0, 0.0);
    // `s = half·u^{1/(1+σ)}`, `ds = half/(1+σ)·u^{1/(1+σ)−1} du`; the `u` power cancels `s^σ` up to the smooth factor.
    for (sigma, left) in [(sigma_f, true), (sigma_g, false)] {
        let e = 1.0 / (1.0 + sigma);
        let integrand = |u: f64| {
            if u == 0.0 {
                return Complex64::new(0.0, 0.0);
            }
            let s = half * u.powf(e);
            let jac = half * e * u.powf(e - 1.0);
            let near = s * phase;
            let far = p - near;
            let v = if left { f(near) * g(far) } else { f(far) * g(near) };
            v * jac
        };
        total += graded_integral(integrand, panels);
    }
    Ok(phase * total)
}

/// `∫₀^r ds / ((1+s²)(1+(r−s)²)) = 2(ln(1+r²) + r·arctan r)/(r(r²+4))`, analytically continued in `r`.
pub fn rational_self_convolution(p: Complex64) -> Complex64 {
    let one = Complex64::new(1.0, 0.0);
    2.0 * ((one + p * p).ln() + p * p.atan()) / (p * (p * p + 4.0))
}

/// `∫₀^t e^{−p³(t−τ)} q(τ) dτ` by composite Gauss–Legendre with `panels` panels.
pub fn time_integral_oracle<Q>(q: Q, p: Complex64, t: f64, panels: usize) -> Complex64
where
    Q: Fn(f64) -> Complex64,
{
    let rule = gauss_legendre(BRUTE_ORDER);
    let lam = p * p * p;
    let h = t / panels as f64;
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 0..panels {
        for (x, w) in rule.nodes.iter().zip(&rule.weights) {
            let tau = h * (k as f64 + x);
            acc += h * w * (-lam * (t - tau)).exp() * q(tau);
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_correction_coefficient_ex1() {
        let g: f64 = 0.5;
        let c = far_field_coefficients(SimilarityExample::Ex1 { gamma: g }, 3);
        assert!((c[1] - g * (g - 1.0) * (g - 2.0)).abs() < 1e-14);
    }

    #[test]
    fn exponent_identities() {
        let (a, b) = SimilarityExample::Ex1 { gamma: 0.3 }.exponents();
        assert!((4.0 * a - 3.0 * b - (a - 1.0)).abs() < 1e-14);
        let (a, b) = SimilarityExample::Ex3 { delta: 1.0 }.exponents();
        assert!((a / 3.0 - 3.0 * b + 1.0).abs() < 1e-14);
    }

    #[test]
    fn series_power_cube_root() {
        let p = [1.0, 0.3, -0.2, 0.05];
        let q = series_power(&p, 1.0 / 3.0);
        let q3 = series_power(&q, 3.0);
        for (a, b) in p.iter().zip(&q3) {
            assert!((a - b).abs() < 1e-14);
        }
    }
}
