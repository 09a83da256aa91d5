//! Gauss rules mapped to the unit interval.

use gauss_quad::{GaussJacobi, GaussLegendre};
use std::num::NonZeroUsize;
use std::sync::OnceLock;

/// A quadrature rule on `[0, 1]`.
#[derive(Debug, Clone)]
pub struct UnitRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

fn legendre(n: usize) -> UnitRule {
    let rule = GaussLegendre::new(NonZeroUsize::new(n).expect("n > 0"));
    let mut pairs: Vec<(f64, f64)> = rule.iter().map(|(x, w)| (0.5 * (x + 1.0), 0.5 * w)).collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    UnitRule {
        nodes: pairs.iter().map(|p| p.0).collect(),
        weights: pairs.iter().map(|p| p.1).collect(),
    }
}

/// Gauss–Legendre on `[0, 1]`; the common orders are cached.
pub fn gauss_legendre(n: usize) -> UnitRule {
    static CACHE: OnceLock<Vec<UnitRule>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| (1..=32).map(legendre).collect());
    if (1..=32).contains(&n) {
        cache[n - 1].clone()
    } else {
        legendre(n)
    }
}

/// Rule for `∫₀¹ u^a φ(u) du` with the weight `u^a` (`a > -1`) integrated exactly.
///
/// Only even orders are requested from the Golub–Welsch backend; an odd `n` is rounded up.
pub fn gauss_jacobi_left(n: usize, a: f64) -> UnitRule {
    assert!(a > -1.0, "Jacobi exponent must exceed -1");
    if a == 0.0 {
        return gauss_legendre(n);
    }
    let n = n + n % 2;
    let rule = GaussJacobi::new(
        NonZeroUsize::new(n).expect("n > 0"),
        0.0.try_into().expect("finite"),
        a.try_into().expect("a > -1"),
    );
    let scale = 2f64.powf(-a - 1.0);
    let mut pairs: Vec<(f64, f64)> = rule.iter().map(|(x, w)| (0.5 * (x + 1.0), w * scale)).collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    UnitRule {
        nodes: pairs.iter().map(|p| p.0).collect(),
        weights: pairs.iter().map(|p| p.1).collect(),
    }
}

/// Composite Gauss–Legendre nodes and weights on `[a, b]` with `panels` equal panels.
pub fn composite_legendre(a: f64, b: f64, panels: usize, order: usize) -> (Vec<f64>, Vec<f64>) {
    let rule = gauss_legendre(order);
    let h = (b - a) / panels as f64;
    let mut xs = Vec::with_capacity(panels * order);
    let mut ws = Vec::with_capacity(panels * order);
    for p in 0..panels {
        let lo = a + h * p as f64;
        for (x, w) in rule.nodes.iter().zip(&rule.weights) {
            xs.push(lo + h * x);
            ws.push(h * w);
        }
    }
    (xs, ws)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jacobi_moments_are_exact() {
        for &a in &[-1.0 / 3.0, 0.5, 1.0 / 3.0, 2.0, 5.0] {
            let rule = gauss_jacobi_left(10, a);
            for k in 0..12 {
                let q: f64 = rule.nodes.iter().zip(&rule.weights).map(|(u, w)| w * u.powi(k)).sum();
                let exact = 1.0 / (a + k as f64 + 1.0);
                assert!((q - exact).abs() < 1e-13 * exact.max(1.0), "a={a} k={k} {q} {exact}");
            }
        }
    }

    #[test]
    fn legendre_is_sorted_and_exact() {
        let rule = gauss_legendre(8);
        assert!(rule.nodes.windows(2).all(|w| w[0] < w[1]));
        let q: f64 = rule.nodes.iter().zip(&rule.weights).map(|(u, w)| w * u.powi(15)).sum();
        assert!((q - 1.0 / 16.0).abs() < 1e-15);
    }
}
