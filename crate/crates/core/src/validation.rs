//! Physical-space checks of a solved problem: PDE residual by finite differences, decay fits,
//! and comparison against similarity profiles.

use crate::borel_core::BorelFunction;
use crate::coefficients::CoefficientSet;
use crate::error::{BorelError, Result};
use crate::oracles::SimilarityProfile;
use crate::solver::{h_of_f, x_of_y, ProblemSpec};
use crate::transforms::laplace_back;
use num_complex::Complex64;
use serde::Serialize;

/// Least-squares slope of `ln y` against `ln x`.
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// `n` points geometrically spaced on `[lo, hi]`.
pub fn geometric_points(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| lo * (hi / lo).powf(i as f64 / (n - 1).max(1) as f64)).collect()
}

/// Richardson-extrapolated central difference of order `order ∈ {1,2,3}` along direction `dir`.
///
/// Steps `h, h/2, h/4, …` are extrapolated in `h²` until two successive diagonal entries agree to
/// `rel_tol`; returns the estimate and the last difference.
pub fn richardson_derivative<F>(f: F, y: Complex64, dir: Complex64, order: usize, h0: f64, rel_tol: f64) -> Result<(Complex64, f64)>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    let stencil = |h: f64| -> Result<Complex64> {
        let d = h * dir;
        Ok(match order {
            1 => (f(y + d)? - f(y - d)?) / (2.0 * d),
            2 => (f(y + d)? - 2.0 * f(y)? + f(y - d)?) / (d * d),
            3 => (f(y + 2.0 * d)? - 2.0 * f(y + d)? + 2.0 * f(y - d)? - f(y - 2.0 * d)?) / (2.0 * d * d * d),
            _ => return Err(BorelError::param("order", "finite differences of order 1 to 3 only")),
        })
    };
    let mut table: Vec<Vec<Complex64>> = Vec::new();
    let mut h = h0;
    let mut last_err = f64::INFINITY;
    for level in 0..8 {
        let mut row = vec![stencil(h)?];
        for m in 1..=level {
            let factor = 4f64.powi(m as i32);
            let prev = &table[level - 1];
            let v = (factor * row[m - 1] - prev[m - 1]) / (factor - 1.0);
            row.push(v);
        }
        if level > 0 {
            let err = (row[level] - table[level - 1][level - 1]).norm();
            if err <= rel_tol * row[level].norm() {
                return Ok((row[level], err));
            }
            if level > 2 && err > 2.0 * last_err {
                // Rounding has taken over; keep the previous estimate.
                return Ok((table[level - 1][level - 1], last_err));
            }
            last_err = err;
        }
        table.push(row);
        h *= 0.5;
    }
    let best = *table.last().and_then(|r| r.last()).expect("table");
    Ok((best, last_err))
}

/// Five-point-and-refined time derivative of sampled values on a uniform grid at interior node `n`.
///
/// Central differences with spans `4Δ, 2Δ, Δ` are extrapolated in `Δ²`.
pub fn time_derivative(values: &[Complex64], dt: f64, n: usize) -> Result<Complex64> {
    if n < 4 || n + 4 >= values.len() {
        return Err(BorelError::param("t_index", format!("node {n} needs four neighbours on each side")));
    }
    let d = |k: usize| (values[n + k] - values[n - k]) / (2.0 * k as f64 * dt);
    let (d4, d2, d1) = (d(4), d(2), d(1));
    let e1 = (4.0 * d2 - d4) / 3.0;
    let e2 = (4.0 * d1 - d2) / 3.0;
    Ok((16.0 * e2 - e1) / 15.0)
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct ResidualPoint {
    pub y: Complex64,
    pub t: f64,
    pub residual: Complex64,
    /// Largest of `|f_t|, |f_yyy|, |b_j f^{(j)}|, |r|`.
    pub scale: f64,
    pub relative: f64,
}

/// `f_t − f_yyy − Σ_j b_j(y,t,f) ∂_y^j f − r` with `f = ℒF` and derivatives by finite differences.
pub fn pde_residual(
    f: &BorelFunction,
    coefficients: &CoefficientSet,
    nu: f64,
    y_points: &[Complex64],
    t_indices: &[usize],
) -> Result<Vec<ResidualPoint>> {
    let times = f.time_grid().times().to_vec();
    let dt = f.time_grid().step();
    let mut out = Vec::new();
    for &n in t_indices {
        let t = times[n];
        for &y in y_points {
            let eval = |z: Complex64| laplace_back(f, z, n, nu).map(|v| v.value);
            let dir = Complex64::from_polar(1.0, y.arg());
            let h0 = 0.05 * y.norm();
            let fy = eval(y)?;
            let mut derivs = [fy, Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)];
            for (order, slot) in derivs.iter_mut().enumerate().skip(1) {
                *slot = richardson_derivative(eval, y, dir, order, h0, 1e-9)?.0;
            }
            let series: Vec<Complex64> = (0..times.len())
                .map(|m| laplace_back(f, y, m, nu).map(|v| v.value))
                .collect::<Result<_>>()?;
            let ft = time_derivative(&series, dt, n)?;
            let r = coefficients.r(y, t);
            let mut terms = vec![ft, derivs[3], r];
            let mut residual = ft - derivs[3] - r;
            for (j, dj) in derivs.iter().enumerate() {
                let term = coefficients.b_j(j, y, t, fy) * dj;
                residual -= term;
                terms.push(term);
            }
            let scale = terms.iter().map(|z| z.norm()).fold(0.0, f64::max);
            out.push(ResidualPoint { y, t, residual, scale, relative: residual.norm() / scale.max(1e-300) });
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct Comparison {
    pub y: Complex64,
    pub x: Complex64,
    pub t: f64,
    pub solver: Complex64,
    pub oracle: Complex64,
    pub relative: f64,
}

/// `H(x, t)` from the solver against the similarity profile at each `(y, t_index)`.
pub fn compare_similarity(
    f: &BorelFunction,
    spec: &ProblemSpec,
    profile: &SimilarityProfile,
    y_points: &[Complex64],
    t_indices: &[usize],
) -> Result<Vec<Comparison>> {
    let mut out = Vec::new();
    for &n in t_indices {
        let t = f.time_grid().times()[n];
        for &y in y_points {
            let fy = laplace_back(f, y, n, spec.nu_run)?.value;
            let x = x_of_y(&spec.example, y, t).ok_or_else(|| BorelError::param("example", "no change of variables"))?;
            let h = h_of_f(&spec.example, x, y, fy).expect("change of variables defined");
            let oracle = profile.physical(x, t)?;
            out.push(Comparison { y, x, t, solver: h, oracle, relative: ((h - oracle) / oracle).norm() });
        }
    }
    Ok(out)
}
