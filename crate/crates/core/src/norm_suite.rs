//! Seeded random checks of the ν-norm inequalities: the Banach-algebra bound `‖F*G‖ ≤ ‖F‖‖G‖` and the
//! pointwise bound `|((p^j F)*G)(p)| ≤ |p|^j e^{ν|p|}/(M₀(1+|p|²)) ‖F‖‖G‖`.

use crate::borel_core::{m0, make_grid, nu_norm, BorelFunction, RayGrid, TimeGrid};
use crate::convolution::{convolve, monomial_times};
use crate::error::{BorelError, Result};
use num_complex::Complex64;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::sync::Arc;

/// Rounding slack on the ratio `lhs/rhs`.
const SLACK: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormSuiteConfig {
    pub seed: u64,
    pub pairs: usize,
    pub nus: Vec<f64>,
    pub theta: f64,
    pub nodes: usize,
    pub p_max: f64,
}

impl Default for NormSuiteConfig {
    fn default() -> Self {
        NormSuiteConfig { seed: 0, pairs: 100, nus: vec![2.0, 4.0, 8.0], theta: 0.0, nodes: 256, p_max: 10.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormViolation {
    pub pair: usize,
    pub nu: f64,
    /// `None` for the Banach-algebra bound, `Some(j)` for the pointwise bound.
    pub j: Option<usize>,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormSuiteReport {
    pub config: NormSuiteConfig,
    pub checks: usize,
    pub violations: Vec<NormViolation>,
    /// Largest `‖F*G‖/(‖F‖‖G‖)`.
    pub worst_banach: f64,
    /// Largest pointwise ratio over all nodes and `j`.
    pub worst_mixed: f64,
}

impl NormSuiteReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// A smooth function `Σ c_k e^{(κ_k + i w_k) p}/(1 + a_k p²)` with growth `κ_k < ν`.
pub fn random_test_function(rng: &mut ChaCha8Rng, grid: Arc<RayGrid>, nu: f64) -> Result<BorelFunction> {
    let terms: Vec<(Complex64, Complex64, f64)> = (0..3)
        .map(|_| {
            let c = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            let rate = Complex64::new(rng.random_range(0.0..0.9 * nu), rng.random_range(-3.0..3.0));
            (c, rate, rng.random_range(0.0..2.0))
        })
        .collect();
    BorelFunction::from_values(grid, TimeGrid::single(), 0.0, move |p, _| {
        terms.iter().map(|&(c, rate, a)| c * (rate * p).exp() / (1.0 + a * p * p)).sum()
    })
}

pub fn norm_suite(config: &NormSuiteConfig) -> Result<NormSuiteReport> {
    if config.pairs == 0 || config.nus.is_empty() {
        return Err(BorelError::param("norm suite", "need at least one pair and one nu"));
    }
    let grid = make_grid(config.theta, config.p_max, config.nodes, 2.0)?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut report = NormSuiteReport {
        config: config.clone(),
        checks: 0,
        violations: Vec::new(),
        worst_banach: 0.0,
        worst_mixed: 0.0,
    };
    let m0 = m0();
    for pair in 0..config.pairs {
        for &nu in &config.nus {
            let f = random_test_function(&mut rng, grid.clone(), nu)?;
            let g = random_test_function(&mut rng, grid.clone(), nu)?;
            let product = nu_norm(&f, nu).value * nu_norm(&g, nu).value;
            let ratio = nu_norm(&convolve(&f, &g)?, nu).value / product;
            report.checks += 1;
            report.worst_banach = report.worst_banach.max(ratio);
            if ratio > 1.0 + SLACK {
                report.violations.push(NormViolation { pair, nu, j: None, ratio });
            }
            for j in 0..=3 {
                let h = convolve(&monomial_times(&f, j)?, &g)?;
                let mut worst = 0.0f64;
                for (i, &s) in grid.nodes().iter().enumerate() {
                    let bound = s.powi(j as i32) * (nu * s).exp() / (m0 * (1.0 + s * s)) * product;
                    worst = worst.max(h.value(0, i).norm() / bound);
                }
                report.checks += 1;
                report.worst_mixed = report.worst_mixed.max(worst);
                if worst > 1.0 + SLACK {
                    report.violations.push(NormViolation { pair, nu, j: Some(j), ratio: worst });
                }
            }
        }
    }
    Ok(report)
}
