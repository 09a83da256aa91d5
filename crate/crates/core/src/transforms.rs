//! Inverse Laplace transforms into the Borel plane and the Laplace transform back along the ray.

use crate::borel_core::{interp, BorelFunction, RayGrid, TimeGrid};
use crate::error::{BorelError, Result};
use crate::quadrature::{gauss_jacobi_left, gauss_legendre};
use crate::special::{gamma, rgamma};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::PI;
use std::sync::Arc;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };
const PANEL_ORDER: usize = 16;
/// `e^{-DECAY_TARGET}` bounds the discarded contour tail.
const DECAY_TARGET: f64 = 37.0;

/// `c·p^{α−1}/Γ(α)` on the grid: origin exponent `α−1`, constant smooth factor.
pub fn ilt_power_law(alpha: f64, c: Complex64, grid: Arc<RayGrid>, times: Arc<TimeGrid>) -> Result<BorelFunction> {
    if !(alpha > 0.0) {
        return Err(BorelError::param("alpha", format!("must be positive, got {alpha}")));
    }
    let smooth = c * Complex64::from_polar(1.0, (alpha - 1.0) * grid.theta()) / gamma(alpha);
    BorelFunction::from_smooth(grid, times, alpha - 1.0, |_, _| smooth)
}

/// Where the contour crosses the positive real axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Apex {
    /// `ρ₁ + |p|^{-1}`.
    Growth { rho1: f64 },
    Fixed(f64),
}

/// Two-leg contour `apex + i r e^{iφ sign r}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ContourSpec {
    pub apex: Apex,
    pub phi: f64,
    /// Leg length in the scaled variable `u = |p| y`; chosen from the decay rate when `None`.
    pub r_max: Option<f64>,
    /// Quadrature nodes per leg; panels of width about 2 in `r` when `None`.
    pub n_quad: Option<usize>,
}

impl ContourSpec {
    pub fn growth(rho1: f64) -> Self {
        ContourSpec { apex: Apex::Growth { rho1 }, phi: PI / 6.0 - 0.02, r_max: None, n_quad: None }
    }

    pub fn unit_apex() -> Self {
        ContourSpec { apex: Apex::Fixed(1.0), phi: PI / 6.0 - 0.02, r_max: None, n_quad: None }
    }

    fn validate(&self, theta: f64) -> Result<()> {
        if !(self.phi > 0.0 && self.phi < PI / 6.0) {
            return Err(BorelError::param("phi", format!("leg angle must lie in (0, pi/6), got {}", self.phi)));
        }
        if !(self.phi > theta.abs()) {
            return Err(BorelError::param("phi", format!("leg angle {} must exceed |theta| = {}", self.phi, theta.abs())));
        }
        let apex_ok = match self.apex {
            Apex::Growth { rho1 } => rho1 >= 0.0,
            Apex::Fixed(a) => a > 0.0,
        };
        if !apex_ok {
            return Err(BorelError::param("apex", "apex must be positive"));
        }
        if matches!(self.n_quad, Some(n) if n < PANEL_ORDER) {
            return Err(BorelError::param("n_quad", format!("need at least {PANEL_ORDER} nodes per leg")));
        }
        Ok(())
    }

    fn leg_nodes(&self, decay: f64, growth: f64) -> (Vec<f64>, Vec<f64>) {
        let r_max = self.r_max.unwrap_or((DECAY_TARGET + growth) / decay);
        let panels = match self.n_quad {
            Some(n) => (n / PANEL_ORDER).max(1),
            None => (r_max / 2.0).ceil() as usize,
        };
        let rule = gauss_legendre(PANEL_ORDER);
        let h = r_max / panels as f64;
        let mut r = Vec::with_capacity(panels * PANEL_ORDER);
        let mut w = Vec::with_capacity(panels * PANEL_ORDER);
        for k in 0..panels {
            for (x, wx) in rule.nodes.iter().zip(&rule.weights) {
                r.push(h * (k as f64 + x));
                w.push(h * wx);
            }
        }
        (r, w)
    }
}

/// Numerical inverse Laplace transform `(1/2πi)∫ e^{py} g(y,t) dy` at every grid and time node.
///
/// With `u = |p| y` the contour is scale-free: apex `|p|·apex_y` (at least 1), legs `u = apex + i r e^{±iφ}`
/// decaying like `e^{-r sin(φ ∓ θ)}`. The result is stored with origin exponent `sigma`.
pub fn ilt_contour<G>(
    g: G,
    grid: Arc<RayGrid>,
    times: Arc<TimeGrid>,
    spec: &ContourSpec,
    sigma: f64,
) -> Result<BorelFunction>
where
    G: Fn(Complex64, f64) -> Complex64 + Sync,
{
    let theta = grid.theta();
    spec.validate(theta)?;
    let phase = grid.phase();
    let decay = (spec.phi - theta.abs()).sin();
    let (rs, ws) = spec.leg_nodes(decay, 0.0);
    let r_end = *rs.last().expect("nodes") + 0.5 * (rs[1] - rs[0]);
    let n = grid.len();
    let cells: Vec<(usize, usize)> = (0..times.len()).flat_map(|t| (0..n).map(move |i| (t, i))).collect();
    let values: Vec<Result<Complex64>> = cells
        .par_iter()
        .map(|&(t_idx, i)| {
            let s = grid.nodes()[i];
            let t = times.times()[t_idx];
            let apex = match spec.apex {
                Apex::Growth { rho1 } => rho1 * s + 1.0,
                // Never closer than u = 1 to the origin; moving right is free by Cauchy's theorem.
                Apex::Fixed(a) => (a * s).max(1.0),
            };
            let integrand = |u: Complex64| (phase * u).exp() * g(u / s, t);
            let mut acc = Complex64::new(0.0, 0.0);
            let mut tail = 0.0;
            for sign in [1.0, -1.0] {
                let dir = I * Complex64::from_polar(1.0, sign * spec.phi);
                for (r, w) in rs.iter().zip(&ws) {
                    let u = apex + sign * r * dir;
                    acc += integrand(u) * (dir * w);
                }
                tail += integrand(apex + sign * r_end * dir).norm() / decay;
            }
            let value = acc / (2.0 * PI * I * s);
            let tail = tail / (2.0 * PI * s);
            if tail > 1e-10 * value.norm().max(1e-300) && tail > 1e-14 {
                return Err(BorelError::ContourTail { estimate: tail });
            }
            Ok(value / s.powf(sigma))
        })
        .collect();
    let samples = values.into_iter().collect::<Result<Vec<_>>>()?;
    BorelFunction::new(grid, times, sigma, samples)
}

/// A term `x^{-β} y^{-δ}` with `x = t + (3y/2)^{2/3}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScaledIltSpec {
    pub beta: f64,
    pub delta: f64,
}

impl ScaledIltSpec {
    /// `a = 2β/3 + δ`, the decay exponent in `y` at `t = 0`.
    pub fn order(&self) -> f64 {
        2.0 * self.beta / 3.0 + self.delta
    }
}

/// Inverse transform of a scaled term split into a sampled regular part and a Dirac weight.
#[derive(Debug, Clone)]
pub struct ScaledIlt {
    pub regular: BorelFunction,
    pub dirac: Complex64,
}

/// `κ = (2/3)^{2/3}`.
fn kappa() -> f64 {
    (2.0f64 / 3.0).powf(2.0 / 3.0)
}

/// Contour nodes in the `s`-plane, shared across terms and Borel points.
struct UnitContour {
    apex: f64,
    ln_s: Vec<Complex64>,
    z: Vec<Complex64>,
    weight: Vec<Complex64>,
}

impl UnitContour {
    /// Apex at least `min_apex`; for `s^{-a}` the saddle sits at `s = a`.
    fn new(spec: &ContourSpec, min_apex: f64) -> Self {
        let decay = spec.phi.sin();
        let apex = match spec.apex {
            Apex::Fixed(a) => a,
            Apex::Growth { rho1 } => rho1 + 1.0,
        }
        .max(min_apex);
        let (rs, ws) = spec.leg_nodes(decay, apex);
        let mut out = UnitContour { apex, ln_s: Vec::new(), z: Vec::new(), weight: Vec::new() };
        for sign in [1.0, -1.0] {
            let dir = I * Complex64::from_polar(1.0, sign * spec.phi);
            for (r, w) in rs.iter().zip(&ws) {
                let s = apex + sign * r * dir;
                let ln_s = s.ln();
                out.ln_s.push(ln_s);
                out.z.push((-2.0 / 3.0 * ln_s).exp());
                out.weight.push(s.exp() * dir * w / (2.0 * PI * I));
            }
        }
        out
    }
}

/// `((1+w)^{-β} − 1)/w`, stable as `w → 0`.
fn binomial_difference(w: Complex64, beta: f64) -> Complex64 {
    if w.norm() < 1e-3 {
        let mut term = Complex64::new(-beta, 0.0);
        let mut sum = term;
        for k in 1..8 {
            term *= -w * (beta + k as f64) / (k as f64 + 1.0);
            sum += term;
        }
        sum
    } else {
        ((1.0 + w).powf(-beta) - 1.0) / w
    }
}

/// Inverse transforms of `prefactor · x^{-β} y^{-δ}` for a batch of terms, via
/// `G = A p^{a-1} (1/2πi)∫ e^s s^{-a} (1 + κ t p^{2/3} s^{-2/3})^{-β} ds`, `A = prefactor (3/2)^{-2β/3}`.
///
/// Terms with `a = 2β/3 + δ = 0` carry a Dirac part `A δ(p)`; their regular part is returned with
/// origin exponent `-1/3`, computed from the subtracted integrand.
pub fn ilt_scaled_ex2_batch(
    terms: &[(ScaledIltSpec, Complex64)],
    grid: Arc<RayGrid>,
    times: Arc<TimeGrid>,
    contour: &ContourSpec,
) -> Result<Vec<ScaledIlt>> {
    contour.validate(grid.theta())?;
    for (spec, _) in terms {
        if !(spec.beta > 0.0) || spec.order() < -1e-12 {
            return Err(BorelError::param(
                "ScaledIltSpec",
                format!("need beta > 0 and 2beta/3 + delta >= 0, got ({}, {})", spec.beta, spec.delta),
            ));
        }
    }
    let kc = kappa();
    let mut contours: Vec<UnitContour> = Vec::new();
    let which: Vec<usize> = terms
        .iter()
        .map(|(spec, _)| {
            let c = UnitContour::new(contour, spec.order());
            match contours.iter().position(|u| u.apex == c.apex) {
                Some(k) => k,
                None => {
                    contours.push(c);
                    contours.len() - 1
                }
            }
        })
        .collect();
    let theta = grid.theta();
    let n = grid.len();
    let cells: Vec<(usize, usize)> = (0..times.len()).flat_map(|t| (0..n).map(move |i| (t, i))).collect();
    let amplitudes: Vec<f64> = terms.iter().map(|(s, _)| 1.5f64.powf(-2.0 * s.beta / 3.0)).collect();
    let per_cell: Vec<Vec<Complex64>> = cells
        .par_iter()
        .map(|&(t_idx, i)| {
            let s_p = grid.nodes()[i];
            let t = times.times()[t_idx];
            let c = t * s_p.powf(2.0 / 3.0) * Complex64::from_polar(1.0, 2.0 * theta / 3.0);
            let prepared: Vec<(Vec<Complex64>, Vec<Complex64>)> = contours
                .iter()
                .map(|u| {
                    let w: Vec<Complex64> = u.z.iter().map(|z| kc * c * z).collect();
                    let ln1p = w.iter().map(|w| (1.0 + w).ln()).collect();
                    (w, ln1p)
                })
                .collect();
            terms
                .iter()
                .zip(&amplitudes)
                .zip(&which)
                .map(|(((spec, pref), amp), &k)| {
                    let a = spec.order();
                    let nodes = &contours[k];
                    let (w, ln1p) = &prepared[k];
                    if a.abs() < 1e-12 {
                        // Regular part t·A·e^{-iθ/3}·(1/2πi)∫ e^s [(1+κcz)^{-β} − 1]/c ds.
                        let mut acc = Complex64::new(0.0, 0.0);
                        for q in 0..w.len() {
                            acc += nodes.weight[q] * kc * nodes.z[q] * binomial_difference(w[q], spec.beta);
                        }
                        pref * amp * t * Complex64::from_polar(1.0, -theta / 3.0) * acc
                    } else {
                        let mut acc = Complex64::new(0.0, 0.0);
                        for q in 0..w.len() {
                            acc += nodes.weight[q] * (-a * nodes.ln_s[q] - spec.beta * ln1p[q]).exp();
                        }
                        pref * amp * Complex64::from_polar(1.0, (a - 1.0) * theta) * acc
                    }
                })
                .collect()
        })
        .collect();
    terms
        .iter()
        .zip(&amplitudes)
        .enumerate()
        .map(|(k, ((spec, pref), amp))| {
            let a = spec.order();
            let (sigma, dirac) = if a.abs() < 1e-12 { (-1.0 / 3.0, pref * amp) } else { (a - 1.0, Complex64::new(0.0, 0.0)) };
            let samples = per_cell.iter().map(|v| v[k]).collect();
            Ok(ScaledIlt { regular: BorelFunction::new(grid.clone(), times.clone(), sigma, samples)?, dirac })
        })
        .collect()
}

/// Inverse transform of one term `prefactor · x^{-β} y^{-δ}` with `2β/3 + δ > 0`.
pub fn ilt_scaled_ex2(
    spec: ScaledIltSpec,
    prefactor: Complex64,
    grid: Arc<RayGrid>,
    times: Arc<TimeGrid>,
    contour: &ContourSpec,
) -> Result<BorelFunction> {
    if !(spec.order() > 0.0) {
        return Err(BorelError::param("ScaledIltSpec", "2beta/3 + delta must be positive"));
    }
    let mut out = ilt_scaled_ex2_batch(&[(spec, prefactor)], grid, times, contour)?;
    Ok(out.remove(0).regular)
}

/// Series form of the same transform, entire in `c = t p^{2/3}`:
/// `A p^{a-1} Σ_n C(−β,n) κⁿ cⁿ / Γ(a + 2n/3)`. Used as an independent check.
pub fn scaled_ex2_series(spec: ScaledIltSpec, prefactor: Complex64, p: Complex64, t: f64) -> Complex64 {
    let a = spec.order();
    let amp = prefactor * 1.5f64.powf(-2.0 * spec.beta / 3.0);
    let c = t * p.powf(2.0 / 3.0);
    let kc = kappa() * c;
    let mut sum = Complex64::new(0.0, 0.0);
    let mut binom = 1.0;
    let mut power = Complex64::new(1.0, 0.0);
    for n in 0..200 {
        let term = binom * power * rgamma(a + 2.0 * n as f64 / 3.0);
        sum += term;
        if n > 5 && term.norm() < 1e-18 * sum.norm().max(1e-300) {
            break;
        }
        binom *= (-spec.beta - n as f64) / (n as f64 + 1.0);
        power *= kc;
    }
    amp * p.powf(a - 1.0) * sum
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LaplaceValue {
    pub value: Complex64,
    /// Analytic bound on `|∫_{p_max}^∞ e^{-py} F dp|` under `|F| ≤ |F(p_max)| e^{ν(|p|-p_max)}`.
    pub tail: f64,
}

const LAPLACE_ORDER: usize = 6;

/// `∫₀^{p_max} e^{-py} F(p, t) dp` along the ray, plus the tail bound.
pub fn laplace_back(f: &BorelFunction, y: Complex64, t_index: usize, nu_min: f64) -> Result<LaplaceValue> {
    let grid = f.grid();
    let phase = grid.phase();
    let lambda = phase * y;
    if !(lambda.re > nu_min) {
        return Err(BorelError::BelowAbscissa { y: format!("{y}"), abscissa: nu_min });
    }
    if t_index >= f.time_grid().len() {
        return Err(BorelError::param("t_index", "beyond time grid"));
    }
    let row = f.row(t_index);
    let n = grid.len();
    let g = grid.grading();
    let p_max = grid.p_max();
    let sigma = f.sigma();
    let h = 1.0 / n as f64;
    let mut acc = Complex64::new(0.0, 0.0);
    // First panel: w^{gσ+g−1} carried by Gauss–Jacobi.
    let e = g * sigma + g - 1.0;
    let first = gauss_jacobi_left(LAPLACE_ORDER + 2, e);
    let pref0 = g * p_max.powf(sigma + 1.0) * h.powf(e + 1.0);
    for (x, wq) in first.nodes.iter().zip(&first.weights) {
        let w = h * x;
        let s = p_max * w.powf(g);
        acc += pref0 * wq * (-lambda * s).exp() * interp(row, n as f64 * w);
    }
    let rule = gauss_legendre(LAPLACE_ORDER);
    for panel in 1..n {
        let lo = panel as f64 * h;
        for (x, wq) in rule.nodes.iter().zip(&rule.weights) {
            let w = lo + h * x;
            let s = p_max * w.powf(g);
            let jac = g * p_max * w.powf(g - 1.0) * s.powf(sigma);
            acc += h * wq * jac * (-lambda * s).exp() * interp(row, n as f64 * w);
        }
    }
    let last = row[n - 1].norm() * p_max.powf(sigma);
    let tail = last * (-lambda.re * p_max).exp() / (lambda.re - nu_min.max(0.0));
    Ok(LaplaceValue { value: phase * acc, tail })
}
