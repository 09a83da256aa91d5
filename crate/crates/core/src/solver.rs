//! Integral equation `F = F₀ + Σ_j Σ_k (−1)^j ∫₀^t e^{−p³(t−τ)} [(p^j F) * B_{j,k} * F^{*k}](p,τ) dτ`
//! and its Picard iteration.

use crate::borel_core::{make_grid, nu_norm, BorelFunction, RayGrid, TimeGrid};
use crate::coefficients::{
    ex1_coefficients, ex2_coefficients, ex3_coefficients, materialize, CoefficientSet, Ex3Table, ExampleId, Materialized,
    MaterializedSet,
};
use crate::convolution::{convolve, monomial_times, ConvPowers};
use crate::error::{BorelError, Result};
use crate::transforms::{laplace_back, ContourSpec};
use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;
use std::sync::Arc;

/// Below this `|λΔt|` the exponential weights switch to series.
const SERIES_THRESHOLD: f64 = 1e-4;
const ABSOLUTE_FLOOR: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Example {
    Ex1 { gamma: f64 },
    Ex2,
    Ex3 { delta: f64, table: Ex3Table },
    Custom(CoefficientSet),
}

impl Example {
    pub fn name(&self) -> &'static str {
        match self {
            Example::Ex1 { .. } => "ex1",
            Example::Ex2 => "ex2",
            Example::Ex3 { .. } => "ex3",
            Example::Custom(_) => "custom",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProblemSpec {
    pub example: Example,
    pub t_final: f64,
    pub theta: f64,
    pub phi: f64,
    /// Series truncation for Example 3.
    pub k_trunc: usize,
    pub nodes: usize,
    pub p_max: f64,
    pub grading: f64,
    pub time_steps: usize,
    pub picard_tol: f64,
    pub max_iter: usize,
    pub nu_run: f64,
}

impl ProblemSpec {
    /// Defaults: 256 nodes, 16 time steps, `ν = 8`, `p_max = 40/ν`, grading 3 for Example 2 and 2 otherwise.
    pub fn new(example: Example, t_final: f64) -> Self {
        let grading = if matches!(example, Example::Ex2) { 3.0 } else { 2.0 };
        let nu_run = 8.0;
        ProblemSpec {
            example,
            t_final,
            theta: 0.0,
            phi: PI / 6.0 - 0.02,
            k_trunc: 24,
            nodes: 256,
            p_max: 40.0 / nu_run,
            grading,
            time_steps: 16,
            picard_tol: 1e-10,
            max_iter: 60,
            nu_run,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.phi > 0.0 && self.phi < PI / 6.0) {
            return Err(BorelError::param("phi", format!("sector half-angle must lie in (0, pi/6), got {}", self.phi)));
        }
        if !(self.theta.abs() < self.phi) {
            return Err(BorelError::SectorViolation { theta: self.theta, limit: self.phi });
        }
        if !(self.picard_tol > 0.0) {
            return Err(BorelError::param("picard_tol", "must be positive"));
        }
        if !(self.t_final >= 0.0 && self.t_final.is_finite()) {
            return Err(BorelError::param("T", format!("final time must be non-negative, got {}", self.t_final)));
        }
        if !(self.nu_run > 0.0) {
            return Err(BorelError::param("nu", "must be positive"));
        }
        if self.max_iter == 0 {
            return Err(BorelError::param("max_iter", "must be at least 1"));
        }
        if self.time_steps == 0 && self.t_final > 0.0 {
            return Err(BorelError::param("time_steps", "need at least one step for T > 0"));
        }
        Ok(())
    }

    pub fn coefficient_set(&self) -> Result<CoefficientSet> {
        match &self.example {
            Example::Ex1 { gamma } => ex1_coefficients(*gamma),
            Example::Ex2 => ex2_coefficients(),
            Example::Ex3 { delta, table } => ex3_coefficients(*delta, self.k_trunc, *table),
            Example::Custom(set) => Ok(set.clone()),
        }
    }

    /// The contour used for scaled coefficient transforms: legs at the sector half-angle.
    pub fn contour(&self) -> ContourSpec {
        ContourSpec { phi: self.phi, ..ContourSpec::unit_apex() }
    }
}

/// A problem with its grids, materialized coefficients and inhomogeneity.
#[derive(Debug, Clone)]
pub struct Problem {
    pub spec: ProblemSpec,
    pub grid: Arc<RayGrid>,
    pub times: Arc<TimeGrid>,
    pub coefficients: CoefficientSet,
    pub materialized: MaterializedSet,
    pub f0: BorelFunction,
}

impl Problem {
    pub fn new(spec: ProblemSpec) -> Result<Self> {
        spec.validate()?;
        let coefficients = spec.coefficient_set()?;
        Self::with_coefficients(spec, coefficients)
    }

    /// Uses `coefficients` in place of the example's own set.
    pub fn with_coefficients(spec: ProblemSpec, coefficients: CoefficientSet) -> Result<Self> {
        spec.validate()?;
        let grid = make_grid(spec.theta, spec.p_max, spec.nodes, spec.grading)?;
        let times = TimeGrid::uniform(spec.t_final, spec.time_steps)?;
        let materialized = materialize(&coefficients, grid.clone(), times.clone(), &spec.contour())?;
        let f0 = build_f0(&materialized.r, &grid, &times)?;
        Ok(Problem { spec, grid, times, coefficients, materialized, f0 })
    }
}

/// `λ = p³` on the grid nodes.
fn lambdas(grid: &RayGrid) -> Vec<Complex64> {
    let phase3 = Complex64::from_polar(1.0, 3.0 * grid.theta());
    grid.nodes().iter().map(|s| s * s * s * phase3).collect()
}

/// `(1 − e^{−z})/z`.
fn phi1(z: Complex64) -> Complex64 {
    if z.norm() < SERIES_THRESHOLD {
        1.0 - z / 2.0 + z * z / 6.0 - z * z * z / 24.0
    } else {
        (1.0 - (-z).exp()) / z
    }
}

/// `∫₀¹ e^{−zv} v dv`.
fn phi_linear(z: Complex64) -> Complex64 {
    if z.norm() < SERIES_THRESHOLD {
        0.5 - z / 3.0 + z * z / 8.0 - z * z * z / 30.0
    } else {
        let e = (-z).exp();
        (1.0 - e) / (z * z) - e / z
    }
}

/// `Y(t_n) = ∫₀^{t_n} e^{−p³(t_n−τ)} Q(p,τ) dτ` with `Q` linear in `τ` between time nodes.
pub fn exp_integrate(q: &BorelFunction, times: &Arc<TimeGrid>) -> Result<BorelFunction> {
    let q = if q.time_grid().len() == 1 && times.len() > 1 { q.broadcast(times.clone()) } else { q.clone() };
    if q.time_grid().len() != times.len() {
        return Err(BorelError::GridMismatch);
    }
    let grid = q.grid().clone();
    let n = grid.len();
    let dt = times.step();
    let lam = lambdas(&grid);
    // Panel weights: Y_m = e^{−z} Y_{m−1} + w_old Q_{m−1} + w_new Q_m.
    let weights: Vec<(Complex64, Complex64, Complex64)> = lam
        .iter()
        .map(|l| {
            let z = l * dt;
            let i0 = dt * phi1(z);
            let i1 = dt * phi_linear(z);
            ((-z).exp(), i1, i0 - i1)
        })
        .collect();
    let mut out = vec![Complex64::new(0.0, 0.0); n * times.len()];
    for m in 1..times.len() {
        let (prev_rows, next_rows) = out.split_at_mut(m * n);
        let prev = &prev_rows[(m - 1) * n..];
        let cur = &mut next_rows[..n];
        let q_old = q.row(m - 1);
        let q_new = q.row(m);
        for i in 0..n {
            let (e, w_old, w_new) = weights[i];
            cur[i] = e * prev[i] + w_old * q_old[i] + w_new * q_new[i];
        }
    }
    BorelFunction::new(grid, times.clone(), q.sigma(), out)
}

/// `F₀ = ∫₀^t e^{−p³(t−τ)} R(p,τ) dτ` (zero initial data), exact in `τ` for time-independent `R`.
pub fn build_f0(r: &Materialized, grid: &Arc<RayGrid>, times: &Arc<TimeGrid>) -> Result<BorelFunction> {
    if r.dirac != Complex64::new(0.0, 0.0) {
        return Err(BorelError::param("R", "a forcing with a Dirac part is outside the problem class"));
    }
    let Some(r) = &r.regular else {
        return Ok(BorelFunction::zeros(grid.clone(), times.clone(), 0.0));
    };
    if r.time_grid().len() > 1 {
        return exp_integrate(r, times);
    }
    let lam = lambdas(grid);
    let row = r.row(0);
    let n = grid.len();
    let mut samples = Vec::with_capacity(n * times.len());
    for &t in times.times() {
        for i in 0..n {
            samples.push(row[i] * t * phi1(lam[i] * t));
        }
    }
    BorelFunction::new(grid.clone(), times.clone(), r.sigma(), samples)
}

fn accumulate(acc: &mut Option<BorelFunction>, f: BorelFunction, c: Complex64, times: &Arc<TimeGrid>) -> Result<()> {
    let f = if f.time_grid().len() == 1 && times.len() > 1 { f.broadcast(times.clone()) } else { f };
    *acc = Some(match acc.take() {
        None => f.scaled(c),
        Some(a) => a.add_scaled(&f, c)?,
    });
    Ok(())
}

/// The star-product integrand `Q(p,τ) = Σ_j (−1)^j Σ_k (p^j F) * B_{j,k} * F^{*k}` at every time node.
pub fn nonlinear_integrand(f: &BorelFunction, problem: &Problem) -> Result<Option<BorelFunction>> {
    let mat = &problem.materialized;
    let times = &problem.times;
    let k_max = mat.k_max;
    let needs_powers = (0..=3).any(|j| (1..=k_max).any(|k| mat.get(j, k).is_some_and(|m| !m.is_zero())));
    let powers = if needs_powers { Some(ConvPowers::new(f, k_max)?) } else { None };
    let one = Complex64::new(1.0, 0.0);
    let mut q: Option<BorelFunction> = None;
    for j in 0..=3 {
        let sign = if j % 2 == 0 { one } else { -one };
        let mut s_j: Option<BorelFunction> = None;
        for k in 1..=k_max {
            let Some(entry) = mat.get(j, k) else { continue };
            if entry.is_zero() {
                continue;
            }
            let fk = powers.as_ref().expect("powers computed").get(k)?;
            if let Some(b) = &entry.regular {
                accumulate(&mut s_j, convolve(b, fk)?, one, times)?;
            }
            if entry.dirac != Complex64::new(0.0, 0.0) {
                accumulate(&mut s_j, fk.clone(), entry.dirac, times)?;
            }
        }
        let base = mat.get(j, 0);
        if let Some(b) = base.and_then(|m| m.regular.clone()) {
            accumulate(&mut s_j, b, one, times)?;
        }
        let dirac0 = base.map(|m| m.dirac).unwrap_or_default();
        if s_j.is_none() && dirac0 == Complex64::new(0.0, 0.0) {
            continue;
        }
        let pjf = monomial_times(f, j)?;
        if let Some(s) = s_j {
            accumulate(&mut q, convolve(&pjf, &s)?, sign, times)?;
        }
        if dirac0 != Complex64::new(0.0, 0.0) {
            accumulate(&mut q, pjf, sign * dirac0, times)?;
        }
    }
    Ok(q)
}

/// `𝒩F = F₀ + ∫₀^t e^{−p³(t−τ)} Q(p,τ) dτ`.
pub fn apply_n(f: &BorelFunction, problem: &Problem) -> Result<BorelFunction> {
    match nonlinear_integrand(f, problem)? {
        None => Ok(problem.f0.clone()),
        Some(q) => {
            let y = exp_integrate(&q, &problem.times)?;
            problem.f0.add(&y)
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct IterationRecord {
    pub iteration: usize,
    pub nu_norm: f64,
    pub increment: f64,
    pub ratio: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct SolveResult {
    pub f: BorelFunction,
    pub iterations: usize,
    pub nu_norm_history: Vec<f64>,
    pub increments: Vec<f64>,
    pub contraction_ratios: Vec<f64>,
    /// Every ratio after the first step is below one.
    pub contractive: bool,
}

impl SolveResult {
    pub fn records(&self) -> Vec<IterationRecord> {
        (0..self.iterations)
            .map(|n| IterationRecord {
                iteration: n + 1,
                nu_norm: self.nu_norm_history[n + 1],
                increment: self.increments[n],
                ratio: if n == 0 { None } else { Some(self.contraction_ratios[n - 1]) },
            })
            .collect()
    }

    pub fn max_ratio(&self) -> Option<f64> {
        self.contraction_ratios.iter().copied().reduce(f64::max)
    }
}

/// Picard iteration from `F₀`.
pub fn picard_solve(problem: &Problem) -> Result<SolveResult> {
    picard_solve_from(problem, problem.f0.clone())
}

/// Picard iteration from a given initial iterate.
pub fn picard_solve_from(problem: &Problem, init: BorelFunction) -> Result<SolveResult> {
    let nu = problem.spec.nu_run;
    let tol = problem.spec.picard_tol;
    let mut f = init;
    let mut history = vec![nu_norm(&f, nu).value];
    let mut increments = Vec::new();
    let mut ratios = Vec::new();
    let mut rising = 0;
    for iteration in 1..=problem.spec.max_iter {
        let next = apply_n(&f, problem)?;
        let increment = nu_norm(&next.sub(&f)?, nu).value;
        let norm = nu_norm(&next, nu).value;
        if !increment.is_finite() || !norm.is_finite() {
            return Err(BorelError::Divergence { iteration, ratio: f64::INFINITY });
        }
        if let Some(&last) = increments.last() {
            let ratio = if last > 0.0 { increment / last } else { 0.0 };
            ratios.push(ratio);
            rising = if ratio >= 1.0 && increment > ABSOLUTE_FLOOR { rising + 1 } else { 0 };
            if rising >= 3 {
                return Err(BorelError::Divergence { iteration, ratio });
            }
        }
        increments.push(increment);
        history.push(norm);
        f = next;
        if increment <= tol * norm || increment < ABSOLUTE_FLOOR {
            let contractive = ratios.iter().all(|&r| r < 1.0);
            return Ok(SolveResult {
                f,
                iterations: iteration,
                nu_norm_history: history,
                increments,
                contraction_ratios: ratios,
                contractive,
            });
        }
    }
    Err(BorelError::MaxIterations { max_iter: problem.spec.max_iter, increment: *increments.last().unwrap_or(&f64::NAN) })
}

/// `‖𝒩F − F‖_ν / ‖F‖_ν`.
pub fn fixed_point_residual(f: &BorelFunction, problem: &Problem) -> Result<f64> {
    let nu = problem.spec.nu_run;
    let diff = apply_n(f, problem)?.sub(f)?;
    Ok(nu_norm(&diff, nu).value / nu_norm(f, nu).value.max(ABSOLUTE_FLOOR))
}

/// `x(y, t)` for the example's change of variables, on the principal branch.
pub fn x_of_y(example: &Example, y: Complex64, t: f64) -> Option<Complex64> {
    match example {
        Example::Ex1 { gamma } => Some(((1.0 - gamma) * y).powf(1.0 / (1.0 - gamma))),
        Example::Ex2 => Some(t + (1.5 * y).powf(2.0 / 3.0)),
        Example::Ex3 { delta, .. } => Some(((1.0 + delta) * y).powf(1.0 / (1.0 + delta))),
        Example::Custom(_) => None,
    }
}

/// `y(x, t)`, the forward change of variables.
pub fn y_of_x(example: &Example, x: Complex64, t: f64) -> Option<Complex64> {
    match example {
        Example::Ex1 { gamma } => Some(x.powf(1.0 - gamma) / (1.0 - gamma)),
        Example::Ex2 => Some((x - t).powf(1.5) / 1.5),
        Example::Ex3 { delta, .. } => Some(x.powf(1.0 + delta) / (1.0 + delta)),
        Example::Custom(_) => None,
    }
}

/// `H(x, t)` from `f(y, t)`.
pub fn h_of_f(example: &Example, x: Complex64, y: Complex64, f: Complex64) -> Option<Complex64> {
    match example {
        Example::Ex1 { gamma } => Some(x.powf(*gamma) * (1.0 + f / y)),
        Example::Ex2 => Some(x.powf(-0.5) + x.powf(-1.5) * f / y),
        Example::Ex3 { delta, .. } => Some(x.powf(-9.0 * delta) * (1.0 + f / y)),
        Example::Custom(_) => None,
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct PhysicalPoint {
    pub y: Complex64,
    pub t_index: usize,
    pub t: f64,
    pub f: Complex64,
    pub tail: f64,
    pub x: Option<Complex64>,
    pub h: Option<Complex64>,
}

/// `f = ℒF` at the requested points and, where the example defines it, `H(x, t)`.
///
/// Points need `Re(e^{iθ}y) > ν_run`, the abscissa implied by the ν-norm bound.
pub fn recover_physical(
    f: &BorelFunction,
    spec: &ProblemSpec,
    y_points: &[Complex64],
    t_indices: &[usize],
) -> Result<Vec<PhysicalPoint>> {
    let mut out = Vec::with_capacity(y_points.len() * t_indices.len());
    for &t_index in t_indices {
        let t = *f
            .time_grid()
            .times()
            .get(t_index)
            .ok_or_else(|| BorelError::param("t_index", format!("{t_index} beyond time grid")))?;
        for &y in y_points {
            let lv = laplace_back(f, y, t_index, spec.nu_run)?;
            let x = x_of_y(&spec.example, y, t);
            let h = x.and_then(|x| h_of_f(&spec.example, x, y, lv.value));
            out.push(PhysicalPoint { y, t_index, t, f: lv.value, tail: lv.tail, x, h });
        }
    }
    Ok(out)
}

impl From<&ProblemSpec> for ExampleId {
    fn from(spec: &ProblemSpec) -> Self {
        match &spec.example {
            Example::Ex1 { gamma } => ExampleId::Ex1 { gamma: *gamma },
            Example::Ex2 => ExampleId::Ex2,
            Example::Ex3 { delta, table } => ExampleId::Ex3 { delta: *delta, table: *table },
            Example::Custom(_) => ExampleId::Custom,
        }
    }
}
