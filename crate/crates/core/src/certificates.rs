//! Ball-mapping and contraction inequalities for the Picard map, evaluated numerically over `(T, ν)`.
//!
//! Every bound carries unspecified constants `C(φ)`; they enter as [`Constants`] with default 1 and
//! every certificate is relative to them.

use crate::borel_core::m0;
use crate::error::{BorelError, Result};
use serde::Serialize;
use std::fmt::Write as _;

/// The unspecified constants of the bounds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Constants {
    /// Multiplier of the coefficient sums.
    pub c: f64,
    /// Per-derivative constants `C_j(φ)` of the general condition.
    pub c_j: [f64; 4],
    /// Constant in the `‖F₀‖_ν` bound.
    pub c_f0: f64,
}

impl Default for Constants {
    fn default() -> Self {
        Constants { c: 1.0, c_j: [1.0; 4], c_f0: 1.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Certificate {
    pub example: String,
    pub t_final: f64,
    pub nu: f64,
    pub b: f64,
    /// `‖F₀‖_ν` used in the conditions.
    pub f0_norm: f64,
    pub f0_norm_bound: f64,
    pub f0_norm_measured: Option<f64>,
    pub ball_lhs: f64,
    pub contraction_lhs: f64,
    pub ball_satisfied: bool,
    pub contraction_satisfied: bool,
    pub satisfied: bool,
    pub ball_margin: f64,
    pub contraction_margin: f64,
    pub reason: Option<String>,
    pub constants: Constants,
}

impl Certificate {
    #[allow(clippy::too_many_arguments)]
    fn build(
        example: &str,
        t_final: f64,
        nu: f64,
        b: f64,
        f0_bound: f64,
        f0_measured: Option<f64>,
        lhs: std::result::Result<(f64, f64), String>,
        constants: Constants,
    ) -> Self {
        let f0_norm = f0_measured.unwrap_or(f0_bound);
        let (ball_lhs, contraction_lhs, reason) = match lhs {
            Ok((ball, contraction)) => (ball, contraction, None),
            Err(reason) => (f64::INFINITY, f64::INFINITY, Some(reason)),
        };
        let ball_satisfied = ball_lhs < 1.0;
        let contraction_satisfied = contraction_lhs < 1.0;
        let reason = reason.or_else(|| match (ball_satisfied, contraction_satisfied) {
            (true, true) => None,
            (false, true) => Some("ball condition fails".to_string()),
            (true, false) => Some("contraction condition fails".to_string()),
            (false, false) => Some("ball and contraction conditions fail".to_string()),
        });
        Certificate {
            example: example.to_string(),
            t_final,
            nu,
            b,
            f0_norm,
            f0_norm_bound: f0_bound,
            f0_norm_measured: f0_measured,
            ball_lhs,
            contraction_lhs,
            ball_satisfied,
            contraction_satisfied,
            satisfied: ball_satisfied && contraction_satisfied,
            ball_margin: 1.0 - ball_lhs,
            contraction_margin: 1.0 - contraction_lhs,
            reason,
            constants,
        }
    }
}

fn check_inputs(t: f64, nu: f64, b: f64) -> Result<()> {
    if !(b > 1.0) {
        return Err(BorelError::param("b", format!("ball factor must exceed 1, got {b}")));
    }
    if !(nu > 0.0 && nu.is_finite()) {
        return Err(BorelError::param("nu", format!("must be positive, got {nu}")));
    }
    if !(t >= 0.0 && t.is_finite()) {
        return Err(BorelError::param("T", format!("must be non-negative, got {t}")));
    }
    Ok(())
}

/// Inputs of the general condition.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GeneralInputs {
    /// Decay exponents `α_j` of `|B_j|` in `(ν/2)`.
    pub alpha_js: [f64; 4],
    pub beta: f64,
    /// Bound `A_b(T)` on the coefficients.
    pub a_b: f64,
    /// Bound `A_r` on the inhomogeneity.
    pub a_r: f64,
    /// Exponent `α_r` of `r = O(y^{−α_r})`.
    pub alpha_r: f64,
    /// Bound on the initial data term.
    pub a_fi: f64,
}

/// The general ball-mapping and contraction conditions.
///
/// With `q = (ν/2)^{−β} b‖F₀‖_ν` and `S = A_b Σ_j C_j (ν/2)^{−α_j} T^{(3−j)/3}`:
/// ball `1/b + S/(1−q) < 1`, contraction `S/(1−q)² < 1`. `‖F₀‖_ν` is bounded by
/// `C(T A_r + A_fI)(ν/2)^{1−α_r}` unless a measured value is given.
pub fn general_certificate(
    inputs: &GeneralInputs,
    t: f64,
    nu: f64,
    b: f64,
    f0_measured: Option<f64>,
    constants: Constants,
) -> Result<Certificate> {
    check_inputs(t, nu, b)?;
    let half = nu / 2.0;
    let f0_bound = constants.c_f0 * (t * inputs.a_r + inputs.a_fi) * half.powf(1.0 - inputs.alpha_r);
    let f0 = f0_measured.unwrap_or(f0_bound);
    let q = half.powf(-inputs.beta) * b * f0;
    let lhs = if q < 1.0 {
        let s: f64 = (0..4)
            .map(|j| constants.c_j[j] * half.powf(-inputs.alpha_js[j]) * t.powf((3 - j) as f64 / 3.0))
            .sum::<f64>()
            * inputs.a_b;
        Ok((1.0 / b + s / (1.0 - q), s / ((1.0 - q) * (1.0 - q))))
    } else {
        Err(format!("(nu/2)^-beta * b * |F0| = {q} is not below 1"))
    };
    Ok(Certificate::build("general", t, nu, b, f0_bound, f0_measured, lhs, constants))
}

/// `A_r` with `‖F₀‖_ν ≤ A_r T/ν` for every `ν ≥ 2` in Example 1.
///
/// `|F₀(p,t)| ≤ T|c||p|` with `c = −γ(γ−2)/(γ−1)²`, and `ν sup_s (1+s²) s e^{−νs}` decreases in `ν`.
pub fn ex1_a_r(gamma: f64) -> f64 {
    let c = (-gamma * (gamma - 2.0) / ((gamma - 1.0) * (gamma - 1.0))).abs();
    let nu = 2.0;
    let sup = (1..=20_000)
        .map(|i| {
            let s = i as f64 * 1e-3;
            (1.0 + s * s) * s * (-nu * s).exp()
        })
        .fold(0.0, f64::max);
    // Grid maximum of a smooth function with spacing 1e-3; pad for the discretization.
    c * m0() * nu * sup * (1.0 + 1e-5)
}

/// `(j, k)` pairs of the primed sums: everything in `0..=3 × 0..=k_max` except `(3, 0)`.
pub fn primed_pairs(k_max: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..=3).flat_map(move |j| (0..=k_max).map(move |k| (j, k))).filter(|&(j, k)| !(j == 3 && k == 0))
}

/// Example 1 conditions
/// `1/b + C Σ′ b^k A_r^k T^k ν^{−2k+j−3} T^{(3−j)/3} < 1` and
/// `C Σ′ b^k (k+1) A_r^k T^k ν^{−2k+j−3} T^{(3−j)/3} < 1`.
///
/// A measured `‖F₀‖_ν` replaces `A_r T/ν`.
pub fn ex1_certificate(gamma: f64, t: f64, nu: f64, b: f64, f0_measured: Option<f64>, constants: Constants) -> Result<Certificate> {
    check_inputs(t, nu, b)?;
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(BorelError::param("gamma", format!("must lie in (0, 1), got {gamma}")));
    }
    let f0_bound = constants.c_f0 * ex1_a_r(gamma) * t / nu;
    let f0 = f0_measured.unwrap_or(f0_bound);
    // b A_r T ν^{−2} = b ‖F₀‖ ν^{−1}
    let q = b * f0 / nu;
    let (mut ball, mut contraction) = (0.0, 0.0);
    for (j, k) in primed_pairs(3) {
        let term = q.powi(k as i32) * nu.powi(j as i32 - 3) * t.powf((3 - j) as f64 / 3.0);
        ball += term;
        contraction += (k + 1) as f64 * term;
    }
    let lhs = Ok((1.0 / b + constants.c * ball, constants.c * contraction));
    Ok(Certificate::build(&format!("ex1(gamma={gamma})"), t, nu, b, f0_bound, f0_measured, lhs, constants))
}

/// Example 2 conditions with `w = Tν^{−2/3}` and `v = b‖F₀‖_ν ν^{−1/3}` (`= bw` under the bound
/// `‖F₀‖_ν ≤ C T ν^{−1/3}`):
/// `1/b + C Σ′ w^{(3−j)/3} v^k + C w < 1` and `C Σ′ (k+1) w^{(3−j)/3} v^k + C w < 1`.
pub fn ex2_certificate(t: f64, nu: f64, b: f64, f0_measured: Option<f64>, constants: Constants) -> Result<Certificate> {
    check_inputs(t, nu, b)?;
    let w = t * nu.powf(-2.0 / 3.0);
    let f0_bound = constants.c_f0 * t * nu.powf(-1.0 / 3.0);
    let f0 = f0_measured.unwrap_or(f0_bound);
    let v = b * f0 * nu.powf(-1.0 / 3.0);
    let (mut ball, mut contraction) = (0.0, 0.0);
    for (j, k) in primed_pairs(3) {
        let term = w.powf((3 - j) as f64 / 3.0) * v.powi(k as i32);
        ball += term;
        contraction += (k + 1) as f64 * term;
    }
    let c = constants.c;
    let lhs = Ok((1.0 / b + c * ball + c * w, c * contraction + c * w));
    Ok(Certificate::build("ex2", t, nu, b, f0_bound, f0_measured, lhs, constants))
}

/// Default `K` in `‖F₀‖_ν < K T ν^{−1}` for Example 3.
pub const EX3_K: f64 = 1.0;

/// Example 3 conditions, summed over all `k ≥ 0` in closed form with `u = ν^{−3}T` and
/// `q = ν^{−1} b ‖F₀‖_ν` (`≤ bKTν^{−2}`):
/// `C Σ′_j Σ_k u^{(3−j)/3} q^k + 1/b < 1` and `C Σ′_j Σ_k u^{(3−j)/3} (k+1) q^k < 1`, both needing `q < 1`.
pub fn ex3_certificate(
    delta: f64,
    t: f64,
    nu: f64,
    b: f64,
    k_bound: f64,
    f0_measured: Option<f64>,
    constants: Constants,
) -> Result<Certificate> {
    check_inputs(t, nu, b)?;
    if !(delta > 0.0) {
        return Err(BorelError::param("delta", format!("must be positive, got {delta}")));
    }
    let f0_bound = k_bound * t / nu;
    let f0 = f0_measured.unwrap_or(f0_bound);
    let q = b * f0 / nu;
    let lhs = if q < 1.0 {
        let u = t / nu.powi(3);
        let geometric = 1.0 / (1.0 - q);
        let weighted = geometric * geometric;
        let lower: f64 = (0..3).map(|j| u.powf((3 - j) as f64 / 3.0)).sum();
        let ball = lower * geometric + (geometric - 1.0);
        let contraction = lower * weighted + (weighted - 1.0);
        Ok((constants.c * ball + 1.0 / b, constants.c * contraction))
    } else {
        Err(format!("b K T nu^-2 = {q} is not below 1"))
    };
    Ok(Certificate::build(&format!("ex3(delta={delta})"), t, nu, b, f0_bound, f0_measured, lhs, constants))
}

/// Which certificate a sweep evaluates.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum CertificateModel {
    General(GeneralInputs),
    Ex1 { gamma: f64 },
    Ex2,
    Ex3 { delta: f64, k_bound: f64 },
}

impl CertificateModel {
    pub fn evaluate(&self, t: f64, nu: f64, b: f64, f0_measured: Option<f64>, constants: Constants) -> Result<Certificate> {
        match self {
            CertificateModel::General(inputs) => general_certificate(inputs, t, nu, b, f0_measured, constants),
            CertificateModel::Ex1 { gamma } => ex1_certificate(*gamma, t, nu, b, f0_measured, constants),
            CertificateModel::Ex2 => ex2_certificate(t, nu, b, f0_measured, constants),
            CertificateModel::Ex3 { delta, k_bound } => ex3_certificate(*delta, t, nu, b, *k_bound, f0_measured, constants),
        }
    }

    /// Exponent `e` of the threshold scaling `ν*(T) ∝ T^e`.
    pub fn threshold_exponent(&self) -> Option<f64> {
        match self {
            CertificateModel::General(_) => None,
            CertificateModel::Ex1 { .. } => Some(1.0 / 3.0),
            CertificateModel::Ex2 => Some(1.5),
            CertificateModel::Ex3 { .. } => Some(0.5),
        }
    }
}

/// Certificates on the grid `ts × nus`, `T` outermost.
pub fn sweep(model: &CertificateModel, ts: &[f64], nus: &[f64], b: f64, constants: Constants) -> Result<Vec<Certificate>> {
    if ts.is_empty() || nus.is_empty() {
        return Err(BorelError::param("sweep", "empty sweep range"));
    }
    let mut out = Vec::with_capacity(ts.len() * nus.len());
    for &t in ts {
        for &nu in nus {
            out.push(model.evaluate(t, nu, b, None, constants)?);
        }
    }
    Ok(out)
}

/// CSV with columns `T,nu,b,ball_lhs,contraction_lhs,satisfied`.
pub fn sweep_csv(rows: &[Certificate]) -> String {
    let mut s = String::from("T,nu,b,ball_lhs,contraction_lhs,satisfied\n");
    for c in rows {
        writeln!(s, "{:e},{:e},{:e},{:e},{:e},{}", c.t_final, c.nu, c.b, c.ball_lhs, c.contraction_lhs, c.satisfied)
            .expect("writing to a String");
    }
    s
}

/// Least certified `ν` in `[nu_lo, nu_hi]` by bisection in `ln ν`, assuming monotonicity in `ν`.
///
/// `None` when `nu_hi` is not certified; `nu_lo` when it already is.
pub fn least_certified_nu(
    model: &CertificateModel,
    t: f64,
    b: f64,
    constants: Constants,
    nu_lo: f64,
    nu_hi: f64,
    rel_tol: f64,
) -> Result<Option<f64>> {
    if !(nu_lo > 0.0 && nu_hi > nu_lo) {
        return Err(BorelError::param("nu", format!("need 0 < nu_lo < nu_hi, got [{nu_lo}, {nu_hi}]")));
    }
    let ok = |nu: f64| model.evaluate(t, nu, b, None, constants).map(|c| c.satisfied);
    if !ok(nu_hi)? {
        return Ok(None);
    }
    if ok(nu_lo)? {
        return Ok(Some(nu_lo));
    }
    let (mut lo, mut hi) = (nu_lo.ln(), nu_hi.ln());
    while hi - lo > rel_tol {
        let mid = 0.5 * (lo + hi);
        if ok(mid.exp())? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(Some(hi.exp()))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThresholdRow {
    pub t_final: f64,
    /// Least certified `ν`.
    pub nu_certified: f64,
    /// `ν` on the `Tν^{−3}` level curve through the first certified threshold.
    pub nu_similarity: f64,
}

/// `ν*(T)` for each `T`, with the cubic-scaling boundary reported alongside.
pub fn thresholds(model: &CertificateModel, ts: &[f64], b: f64, constants: Constants) -> Result<Vec<ThresholdRow>> {
    let mut rows = Vec::new();
    let mut level = None;
    for &t in ts {
        let nu = least_certified_nu(model, t, b, constants, 1e-6, 1e9, 1e-10)?
            .ok_or_else(|| BorelError::Numerical(format!("no certified nu below 1e9 at T = {t}")))?;
        let level = *level.get_or_insert(t / nu.powi(3));
        rows.push(ThresholdRow { t_final: t, nu_certified: nu, nu_similarity: (t / level).cbrt() });
    }
    Ok(rows)
}

/// True when, along each row of a `T`-major sweep, satisfied cells form a suffix in `ν`, and the
/// first satisfied index does not decrease as `T` grows.
pub fn is_monotone(rows: &[Certificate], n_nu: usize) -> bool {
    if n_nu == 0 || rows.len() % n_nu != 0 {
        return false;
    }
    let mut previous = 0;
    for row in rows.chunks(n_nu) {
        let first = row.iter().position(|c| c.satisfied).unwrap_or(n_nu);
        if row[first..].iter().any(|c| !c.satisfied) || first < previous {
            return false;
        }
        previous = first;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_coefficients_leave_one_over_b() {
        let inputs = GeneralInputs { alpha_js: [1.0; 4], beta: 1.0, a_b: 0.0, a_r: 1.0, alpha_r: 2.0, a_fi: 0.0 };
        let c = general_certificate(&inputs, 1.0, 8.0, 1.5, None, Constants::default()).unwrap();
        assert_eq!(c.ball_lhs, 1.0 / 1.5);
        assert!(c.satisfied);
    }

    #[test]
    fn vanishing_horizon_ex1() {
        let c = ex1_certificate(0.5, 0.0, 3.0, 1.1, None, Constants::default()).unwrap();
        assert!((c.ball_lhs - 1.0 / 1.1).abs() < 1e-15);
        assert_eq!(c.contraction_lhs, 0.0);
        assert!(c.satisfied);
    }

    #[test]
    fn ex3_needs_geometric_convergence() {
        let c = ex3_certificate(1.0, 10.0, 2.0, 2.0, EX3_K, None, Constants::default()).unwrap();
        assert!(!c.satisfied);
        assert!(c.reason.unwrap().contains("not below 1"));
    }

    #[test]
    fn primed_sum_skips_one_pair() {
        let pairs: Vec<_> = primed_pairs(3).collect();
        assert_eq!(pairs.len(), 15);
        assert!(!pairs.contains(&(3, 0)));
    }
}
