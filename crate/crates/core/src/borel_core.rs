//! Ray grids in the Borel plane, sampled functions with an explicit origin exponent,
//! and the weighted sup norm `‖F‖_ν = M₀ sup (1+|p|²) e^{-ν|p|} |F(p)|`.

use crate::error::{BorelError, Result};
use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;
use std::sync::{Arc, OnceLock};

/// Largest admissible sector half-angle.
pub const SECTOR_LIMIT: f64 = PI / 6.0;

/// Discretization of the ray `p = s e^{iθ}`, `s ∈ (0, p_max]`, with nodes `s_i = p_max (i/n)^g`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RayGrid {
    theta: f64,
    nodes: Vec<f64>,
    p_max: f64,
    grading: f64,
}

impl RayGrid {
    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn p_max(&self) -> f64 {
        self.p_max
    }

    pub fn grading(&self) -> f64 {
        self.grading
    }

    /// `e^{iθ}`.
    pub fn phase(&self) -> Complex64 {
        Complex64::from_polar(1.0, self.theta)
    }

    /// Borel-plane point of node `i` (0-based).
    pub fn point(&self, i: usize) -> Complex64 {
        self.nodes[i] * self.phase()
    }

    /// Fractional node coordinate `n (s/p_max)^{1/g}`; node `i` (1-based) sits at `i`.
    pub fn coordinate(&self, s: f64) -> f64 {
        self.len() as f64 * self.root(s / self.p_max)
    }

    /// `v^{1/g}` with fast paths for the usual gradings.
    pub(crate) fn root(&self, v: f64) -> f64 {
        match self.grading {
            g if g == 1.0 => v,
            g if g == 2.0 => v.sqrt(),
            g if g == 3.0 => v.cbrt(),
            g => v.powf(1.0 / g),
        }
    }
}

/// Builds a graded ray grid.
pub fn make_grid(theta: f64, p_max: f64, n: usize, grading_exponent: f64) -> Result<Arc<RayGrid>> {
    if !(theta.abs() < SECTOR_LIMIT) {
        return Err(BorelError::SectorViolation { theta, limit: SECTOR_LIMIT });
    }
    if n < 16 {
        return Err(BorelError::param("n", format!("need at least 16 nodes, got {n}")));
    }
    if !(p_max > 0.0 && p_max.is_finite()) {
        return Err(BorelError::param("p_max", format!("must be positive, got {p_max}")));
    }
    if !(grading_exponent >= 1.0) {
        return Err(BorelError::param("grading_exponent", format!("must be >= 1, got {grading_exponent}")));
    }
    let nodes = (1..=n)
        .map(|i| if i == n { p_max } else { p_max * (i as f64 / n as f64).powf(grading_exponent) })
        .collect();
    Ok(Arc::new(RayGrid { theta, nodes, p_max, grading: grading_exponent }))
}

/// Uniform time nodes `0 = t_0 < … < t_m = T`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TimeGrid {
    t_final: f64,
    times: Vec<f64>,
}

impl TimeGrid {
    pub fn uniform(t_final: f64, m: usize) -> Result<Arc<TimeGrid>> {
        if !(t_final >= 0.0 && t_final.is_finite()) {
            return Err(BorelError::param("T", format!("must be finite and non-negative, got {t_final}")));
        }
        if t_final > 0.0 && m == 0 {
            return Err(BorelError::param("time_steps", "need at least one step for T > 0"));
        }
        let m = if t_final == 0.0 { 0 } else { m };
        let times = (0..=m)
            .map(|i| if i == m { t_final } else { t_final * i as f64 / m as f64 })
            .collect();
        Ok(Arc::new(TimeGrid { t_final, times }))
    }

    /// The single node `t = 0`, used for time-independent functions.
    pub fn single() -> Arc<TimeGrid> {
        Arc::new(TimeGrid { t_final: 0.0, times: vec![0.0] })
    }

    pub fn t_final(&self) -> f64 {
        self.t_final
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn step(&self) -> f64 {
        if self.times.len() < 2 {
            0.0
        } else {
            self.t_final / (self.times.len() - 1) as f64
        }
    }
}

/// A function on a ray grid, stored as `F(s e^{iθ}, t_n) = s^σ · samples[n][i]`.
#[derive(Debug, Clone)]
pub struct BorelFunction {
    grid: Arc<RayGrid>,
    times: Arc<TimeGrid>,
    sigma: f64,
    samples: Vec<Complex64>,
}

impl BorelFunction {
    pub fn new(grid: Arc<RayGrid>, times: Arc<TimeGrid>, sigma: f64, samples: Vec<Complex64>) -> Result<Self> {
        if !(sigma > -1.0) {
            return Err(BorelError::param("sigma", format!("origin exponent must exceed -1, got {sigma}")));
        }
        if samples.len() != grid.len() * times.len() {
            return Err(BorelError::param("samples", "length does not match grid x time nodes"));
        }
        if samples.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(BorelError::Numerical("non-finite sample".into()));
        }
        Ok(BorelFunction { grid, times, sigma, samples })
    }

    pub(crate) fn from_parts(grid: Arc<RayGrid>, times: Arc<TimeGrid>, sigma: f64, samples: Vec<Complex64>) -> Self {
        debug_assert_eq!(samples.len(), grid.len() * times.len());
        BorelFunction { grid, times, sigma, samples }
    }

    pub fn zeros(grid: Arc<RayGrid>, times: Arc<TimeGrid>, sigma: f64) -> Self {
        let len = grid.len() * times.len();
        BorelFunction { grid, times, sigma, samples: vec![Complex64::new(0.0, 0.0); len] }
    }

    /// Samples the smooth factor `smooth(s, t)`.
    pub fn from_smooth<S>(grid: Arc<RayGrid>, times: Arc<TimeGrid>, sigma: f64, smooth: S) -> Result<Self>
    where
        S: Fn(f64, f64) -> Complex64,
    {
        let mut samples = Vec::with_capacity(grid.len() * times.len());
        for &t in times.times() {
            for &s in grid.nodes() {
                samples.push(smooth(s, t));
            }
        }
        Self::new(grid, times, sigma, samples)
    }

    /// Samples full values `value(p, t)` and divides out `|p|^σ`.
    pub fn from_values<V>(grid: Arc<RayGrid>, times: Arc<TimeGrid>, sigma: f64, value: V) -> Result<Self>
    where
        V: Fn(Complex64, f64) -> Complex64,
    {
        let phase = grid.phase();
        Self::from_smooth(grid, times, sigma, |s, t| value(s * phase, t) / s.powf(sigma))
    }

    pub fn grid(&self) -> &Arc<RayGrid> {
        &self.grid
    }

    pub fn time_grid(&self) -> &Arc<TimeGrid> {
        &self.times
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    /// Smooth-factor samples at time node `t`.
    pub fn row(&self, t: usize) -> &[Complex64] {
        let n = self.grid.len();
        &self.samples[t * n..(t + 1) * n]
    }

    /// Function value at node `i`, time node `t`.
    pub fn value(&self, t: usize, i: usize) -> Complex64 {
        self.row(t)[i] * self.grid.nodes()[i].powf(self.sigma)
    }

    pub fn same_support(&self, other: &BorelFunction) -> bool {
        (Arc::ptr_eq(&self.grid, &other.grid) || *self.grid == *other.grid)
            && (Arc::ptr_eq(&self.times, &other.times) || *self.times == *other.times)
    }

    /// Same function with a smaller origin exponent (`sigma_new ≤ σ`).
    pub fn rebased(&self, sigma_new: f64) -> Result<Self> {
        if sigma_new > self.sigma + 1e-12 {
            return Err(BorelError::param("sigma", "rebase can only lower the origin exponent"));
        }
        let d = self.sigma - sigma_new;
        let mut out = self.clone();
        out.sigma = sigma_new;
        if d != 0.0 {
            let factors: Vec<f64> = self.grid.nodes().iter().map(|s| s.powf(d)).collect();
            for row in out.samples.chunks_mut(self.grid.len()) {
                for (z, f) in row.iter_mut().zip(&factors) {
                    *z *= f;
                }
            }
        }
        Ok(out)
    }

    /// `self + c·other`, expressed with the smaller of the two origin exponents.
    pub fn add_scaled(&self, other: &BorelFunction, c: Complex64) -> Result<Self> {
        if !self.same_support(other) {
            return Err(BorelError::GridMismatch);
        }
        let sigma = self.sigma.min(other.sigma);
        let mut out = self.rebased(sigma)?;
        let o = other.rebased(sigma)?;
        for (a, b) in out.samples.iter_mut().zip(&o.samples) {
            *a += c * b;
        }
        Ok(out)
    }

    pub fn add(&self, other: &BorelFunction) -> Result<Self> {
        self.add_scaled(other, Complex64::new(1.0, 0.0))
    }

    pub fn sub(&self, other: &BorelFunction) -> Result<Self> {
        self.add_scaled(other, Complex64::new(-1.0, 0.0))
    }

    pub fn scaled(&self, c: Complex64) -> Self {
        let mut out = self.clone();
        out.samples.iter_mut().for_each(|z| *z *= c);
        out
    }

    /// Restriction to a single time node, as a time-independent function.
    pub fn at_time(&self, t: usize) -> Self {
        BorelFunction {
            grid: self.grid.clone(),
            times: TimeGrid::single(),
            sigma: self.sigma,
            samples: self.row(t).to_vec(),
        }
    }

    /// Repeats a time-independent function on every node of `times`.
    pub fn broadcast(&self, times: Arc<TimeGrid>) -> Self {
        let row = self.row(0).to_vec();
        let samples = (0..times.len()).flat_map(|_| row.iter().copied()).collect();
        BorelFunction { grid: self.grid.clone(), times, sigma: self.sigma, samples }
    }
}

/// Four-point Lagrange interpolation of a row at fractional coordinate `x` (node `i` at `x = i`).
#[inline]
pub(crate) fn interp(row: &[Complex64], x: f64) -> Complex64 {
    let n = row.len();
    let base = ((x.floor() as isize) - 1).clamp(1, n as isize - 3) as usize;
    let u = x - base as f64;
    let (u1, u2, u3) = (u - 1.0, u - 2.0, u - 3.0);
    let l0 = -u1 * u2 * u3 / 6.0;
    let l1 = u * u2 * u3 / 2.0;
    let l2 = -u * u1 * u3 / 2.0;
    let l3 = u * u1 * u2 / 6.0;
    let r = &row[base - 1..base + 3];
    r[0] * l0 + r[1] * l1 + r[2] * l2 + r[3] * l3
}

/// Value of `F` at radius `s` on the ray at time node `t_index`.
///
/// The smooth factor is interpolated by local cubics in the grading variable `(s/p_max)^{1/g}`.
pub fn eval_at(f: &BorelFunction, s: f64, t_index: usize) -> Result<Complex64> {
    let p_max = f.grid.p_max();
    if !(s > 0.0 && s <= p_max * (1.0 + 1e-12)) {
        return Err(BorelError::OutOfRange { s, p_max });
    }
    if t_index >= f.times.len() {
        return Err(BorelError::param("t_index", format!("{t_index} beyond {} time nodes", f.times.len())));
    }
    Ok(interp(f.row(t_index), f.grid.coordinate(s)) * s.powf(f.sigma))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormReport {
    pub nu: f64,
    pub value: f64,
    pub sup_node: usize,
    pub sup_time: usize,
}

/// Discrete ν-norm over all grid and time nodes.
pub fn nu_norm(f: &BorelFunction, nu: f64) -> NormReport {
    let weights: Vec<f64> = f
        .grid
        .nodes()
        .iter()
        .map(|&s| (1.0 + s * s) * (-nu * s).exp() * s.powf(f.sigma))
        .collect();
    let mut best = (0.0, 0, 0);
    for t in 0..f.times.len() {
        for (i, (z, w)) in f.row(t).iter().zip(&weights).enumerate() {
            let v = z.norm() * w;
            if v > best.0 {
                best = (v, i, t);
            }
        }
    }
    NormReport { nu, value: m0() * best.0, sup_node: best.1, sup_time: best.2 }
}

/// The function maximized by `M₀`: `2(1+s²)(ln(1+s²) + s·arctan s)/(s(s²+4))`.
pub fn m0_objective(s: f64) -> f64 {
    2.0 * (1.0 + s * s) * ((s * s).ln_1p() + s * s.atan()) / (s * (s * s + 4.0))
}

/// Maximizes [`m0_objective`] by a log-spaced scan followed by golden-section refinement.
pub fn compute_m0() -> f64 {
    let grid: Vec<f64> = (0..=400).map(|i| 10f64.powf(-3.0 + 6.0 * i as f64 / 400.0)).collect();
    let k = (1..grid.len() - 1)
        .max_by(|&a, &b| m0_objective(grid[a]).total_cmp(&m0_objective(grid[b])))
        .expect("non-empty scan");
    let (mut a, mut b) = (grid[k - 1], grid[k + 1]);
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    while b - a > 1e-12 {
        if m0_objective(c) > m0_objective(d) {
            b = d;
        } else {
            a = c;
        }
        c = b - r * (b - a);
        d = a + r * (b - a);
    }
    m0_objective(0.5 * (a + b))
}

/// Cached `M₀ ≈ 3.76`.
pub fn m0() -> f64 {
    static M0: OnceLock<f64> = OnceLock::new();
    *M0.get_or_init(compute_m0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interpolation_is_exact_at_nodes() {
        let g = make_grid(0.0, 3.0, 32, 2.0).unwrap();
        let f = BorelFunction::from_smooth(g.clone(), TimeGrid::single(), 0.0, |s, _| Complex64::new(s.sin(), s)).unwrap();
        for (i, &s) in g.nodes().iter().enumerate() {
            let v = eval_at(&f, s, 0).unwrap();
            assert!((v - f.row(0)[i]).norm() < 1e-14);
        }
    }

    #[test]
    fn time_grid_ends_exactly() {
        let tg = TimeGrid::uniform(0.3, 7).unwrap();
        assert_eq!(tg.times()[7], 0.3);
        assert_eq!(tg.len(), 8);
    }
}
