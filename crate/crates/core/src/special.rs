//! Gamma function and generalized binomial coefficients.

pub fn gamma(x: f64) -> f64 {
    statrs::function::gamma::gamma(x)
}

/// `1/Γ(x)`, zero at the poles `x = 0, -1, -2, …`.
pub fn rgamma(x: f64) -> f64 {
    if x <= 0.0 && x == x.floor() {
        0.0
    } else {
        1.0 / gamma(x)
    }
}

/// Generalized binomial coefficient `C(a, k) = a(a-1)…(a-k+1)/k!`.
pub fn binomial(a: f64, k: usize) -> f64 {
    let mut c = 1.0;
    for i in 0..k {
        c *= (a - i as f64) / (i as f64 + 1.0);
    }
    c
}

pub fn factorial(k: usize) -> f64 {
    (1..=k).fold(1.0, |acc, i| acc * i as f64)
}
