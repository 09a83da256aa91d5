//! Ray convolution `(F*G)(p) = ∫₀^p F(q) G(p−q) dq` along the grid ray, convolution powers,
//! and multiplication by `p^j`.
//!
//! Writing `q = p v` the integral becomes `p^{σF+σG+1} ∫₀¹ v^{σF}(1−v)^{σG} f̃(pv) g̃(p(1−v)) dv`.
//! Each half of `[0,1]` is mapped to the grading variable `u = v^{1/g}` (resp. `(1−v)^{1/g}`), in
//! which the sampled smooth factors are smooth; the endpoint weight is carried exactly by a
//! Gauss–Jacobi rule on the first panel.

use crate::borel_core::{interp, BorelFunction, RayGrid, TimeGrid};
use crate::error::{BorelError, Result};
use crate::quadrature::{gauss_jacobi_left, gauss_legendre};
use num_complex::Complex64;
use rayon::prelude::*;
use std::sync::Arc;

const PANELS_PER_HALF: usize = 4;
const ORDER: usize = 12;

/// Quadrature in `v` for one pair of origin exponents, shared by every target node.
struct ConvRule {
    weights: Vec<f64>,
    xf: Vec<f64>,
    xg: Vec<f64>,
}

impl ConvRule {
    fn new(grid: &RayGrid, a: f64, b: f64) -> Self {
        let g = grid.grading();
        let mut rule = ConvRule { weights: Vec::new(), xf: Vec::new(), xg: Vec::new() };
        // Left half: the `v^a` endpoint; right half: `(1-v)^b`, with the roles of F and G swapped.
        for (own, other, left) in [(a, b, true), (b, a, false)] {
            let u_end = 0.5f64.powf(1.0 / g);
            let e = g * (own + 1.0) - 1.0;
            let h = u_end / PANELS_PER_HALF as f64;
            for panel in 0..PANELS_PER_HALF {
                let lo = h * panel as f64;
                let (nodes, weights): (Vec<f64>, Vec<f64>) = if panel == 0 {
                    let r = gauss_jacobi_left(ORDER, e);
                    let scale = h.powf(e + 1.0);
                    (r.nodes.iter().map(|x| h * x).collect(), r.weights.iter().map(|w| w * scale).collect())
                } else {
                    let r = gauss_legendre(ORDER);
                    (
                        r.nodes.iter().map(|x| lo + h * x).collect(),
                        r.nodes.iter().zip(&r.weights).map(|(x, w)| h * w * (lo + h * x).powf(e)).collect(),
                    )
                };
                for (u, w) in nodes.into_iter().zip(weights) {
                    let ug = u.powf(g);
                    let complement = 1.0 - ug;
                    let weight = w * g * complement.powf(other);
                    let far = grid.root(complement);
                    rule.weights.push(weight);
                    if left {
                        rule.xf.push(u);
                        rule.xg.push(far);
                    } else {
                        rule.xf.push(far);
                        rule.xg.push(u);
                    }
                }
            }
        }
        rule
    }
}

fn support(f: &BorelFunction, g: &BorelFunction) -> Result<Arc<TimeGrid>> {
    let gf = f.grid();
    let gg = g.grid();
    if !(Arc::ptr_eq(gf, gg) || **gf == **gg) {
        return Err(BorelError::GridMismatch);
    }
    let (tf, tg) = (f.time_grid(), g.time_grid());
    if Arc::ptr_eq(tf, tg) || **tf == **tg {
        Ok(tf.clone())
    } else if tf.len() == 1 {
        Ok(tg.clone())
    } else if tg.len() == 1 {
        Ok(tf.clone())
    } else {
        Err(BorelError::GridMismatch)
    }
}

/// Ray convolution of two sampled functions.
///
/// A time-independent operand (single time node) is broadcast against a time-dependent one.
pub fn convolve(f: &BorelFunction, g: &BorelFunction) -> Result<BorelFunction> {
    let times = support(f, g)?;
    let (a, b) = (f.sigma(), g.sigma());
    if a <= -1.0 || b <= -1.0 {
        return Err(BorelError::param("sigma", "origin exponents must exceed -1"));
    }
    let grid = f.grid().clone();
    let n = grid.len();
    let rule = ConvRule::new(&grid, a, b);
    let phase = grid.phase();
    let mut out = vec![Complex64::new(0.0, 0.0); n * times.len()];
    out.par_chunks_mut(n).enumerate().for_each(|(t, row_out)| {
        let fr = f.row(if f.time_grid().len() == 1 { 0 } else { t });
        let gr = g.row(if g.time_grid().len() == 1 { 0 } else { t });
        for (k0, slot) in row_out.iter_mut().enumerate() {
            let k = (k0 + 1) as f64;
            let mut acc = Complex64::new(0.0, 0.0);
            for q in 0..rule.weights.len() {
                acc += rule.weights[q] * interp(fr, k * rule.xf[q]) * interp(gr, k * rule.xg[q]);
            }
            *slot = phase * acc;
        }
    });
    Ok(BorelFunction::from_parts(grid, times, a + b + 1.0, out))
}

/// `F^{*k}` for `k ≥ 1`. The Dirac unit `F^{*0}` only exists symbolically inside star-products.
pub fn conv_power(f: &BorelFunction, k: usize) -> Result<BorelFunction> {
    if k == 0 {
        return Err(BorelError::param("k", "F^{*0} is the convolution identity and cannot be sampled"));
    }
    let mut acc = f.clone();
    for _ in 1..k {
        acc = convolve(&acc, f)?;
    }
    Ok(acc)
}

/// Cached powers `F, F^{*2}, …, F^{*K}` of one function.
#[derive(Debug, Clone)]
pub struct ConvPowers {
    powers: Vec<BorelFunction>,
}

impl ConvPowers {
    pub fn new(f: &BorelFunction, k_max: usize) -> Result<Self> {
        let mut powers = Vec::with_capacity(k_max);
        if k_max >= 1 {
            powers.push(f.clone());
        }
        for k in 2..=k_max {
            let next = convolve(&powers[k - 2], f)?;
            powers.push(next);
        }
        Ok(ConvPowers { powers })
    }

    pub fn k_max(&self) -> usize {
        self.powers.len()
    }

    /// `F^{*k}`, `1 ≤ k ≤ K`.
    pub fn get(&self, k: usize) -> Result<&BorelFunction> {
        if k == 0 {
            return Err(BorelError::param("k", "F^{*0} is the convolution identity and cannot be sampled"));
        }
        self.powers.get(k - 1).ok_or_else(|| BorelError::param("k", format!("power {k} beyond cache")))
    }
}

/// `p^j F` for `0 ≤ j ≤ 3`: the origin exponent grows by `j`, the smooth factor picks up `e^{ijθ}`.
pub fn monomial_times(f: &BorelFunction, j: usize) -> Result<BorelFunction> {
    if j > 3 {
        return Err(BorelError::param("j", format!("derivative order {j} exceeds 3")));
    }
    let phase = Complex64::from_polar(1.0, j as f64 * f.grid().theta());
    let mut out = f.scaled(phase);
    out = BorelFunction::from_parts(out.grid().clone(), out.time_grid().clone(), f.sigma() + j as f64, out.samples().to_vec());
    Ok(out)
}
