//! Orthogonal polynomials, log-factorials and Gauss-Legendre nodes.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

#[allow(unused_imports)]
use num_traits::Float;

/// `ln(n!)` by direct summation.
pub fn ln_factorial(n: u32) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

/// Physicists' Hermite polynomial `H_n(x)` by the three-term recurrence.
pub fn hermite(n: u32, x: f64) -> f64 {
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = 2.0 * x;
    for k in 1..n {
        let next = 2.0 * x * cur - 2.0 * k as f64 * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Normalized oscillator eigenfunction
/// `pi^{-1/4} (2^n n!)^{-1/2} H_n(x) exp(-x^2/2)`.
///
/// The normalized recurrence keeps every intermediate of order one, so
/// `n` up to a few hundred is safe without factorial overflow.
pub fn hermite_function(n: u32, x: f64) -> f64 {
    let mut prev = PI.powf(-0.25) * (-0.5 * x * x).exp();
    if n == 0 {
        return prev;
    }
    let mut cur = core::f64::consts::SQRT_2 * x * prev;
    for k in 1..n {
        let kf = k as f64;
        let next = (2.0 / (kf + 1.0)).sqrt() * x * cur - (kf / (kf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Laguerre polynomial `L_n(x)`.
pub fn laguerre(n: u32, x: f64) -> f64 {
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = 1.0 - x;
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 - x) * cur - kf * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// Jacobi polynomial `P_n^{(a,b)}(x)` for `a, b > -1`.
pub fn jacobi(n: u32, a: f64, b: f64, x: f64) -> f64 {
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = 0.5 * (a - b) + 0.5 * (a + b + 2.0) * x;
    for k in 1..n {
        let k = k as f64;
        // P_{k+1} from P_k, P_{k-1}
        let s = 2.0 * k + a + b;
        let c1 = 2.0 * (k + 1.0) * (k + a + b + 1.0) * s;
        let c2 = (s + 1.0) * (a * a - b * b);
        let c3 = s * (s + 1.0) * (s + 2.0);
        let c4 = 2.0 * (k + a) * (k + b) * (s + 2.0);
        let next = ((c2 + c3 * x) * cur - c4 * prev) / c1;
        prev = cur;
        cur = next;
    }
    cur
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`, nodes ascending.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let p = if n == 0 { 1.0 } else { p1 };
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p, d)
}

/// Composite Gauss-Legendre rule on `[a, b]` with `panels` equal panels of
/// `order` nodes each.
pub fn composite_gauss_legendre(a: f64, b: f64, panels: usize, order: usize) -> (Vec<f64>, Vec<f64>) {
    let (x, w) = gauss_legendre(order);
    let h = (b - a) / panels as f64;
    let mut nodes = Vec::with_capacity(panels * order);
    let mut weights = Vec::with_capacity(panels * order);
    for p in 0..panels {
        let lo = a + p as f64 * h;
        for (xi, wi) in x.iter().zip(&w) {
            nodes.push(lo + 0.5 * h * (xi + 1.0));
            weights.push(0.5 * h * wi);
        }
    }
    (nodes, weights)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hermite_matches_closed_forms() {
        let x = 0.7;
        assert_eq!(hermite(0, x), 1.0);
        assert!((hermite(1, x) - 2.0 * x).abs() < 1e-15);
        assert!((hermite(2, x) - (4.0 * x * x - 2.0)).abs() < 1e-14);
        assert!((hermite(3, x) - (8.0 * x * x * x - 12.0 * x)).abs() < 1e-14);
    }

    #[test]
    fn hermite_function_agrees_with_polynomial_form() {
        for n in 0..12u32 {
            for &x in &[-2.3, -0.4, 0.0, 1.1, 3.7] {
                let direct = PI.powf(-0.25)
                    * (-(n as f64) * 2f64.ln() * 0.5 - 0.5 * ln_factorial(n)).exp()
                    * hermite(n, x)
                    * (-0.5 * x * x).exp();
                assert!((hermite_function(n, x) - direct).abs() < 1e-12, "n={n} x={x}");
            }
        }
    }

    #[test]
    fn hermite_function_survives_large_order() {
        let v = hermite_function(64, 3.0);
        assert!(v.is_finite() && v.abs() < 1.0);
    }

    #[test]
    fn laguerre_closed_forms() {
        let x = 1.3;
        assert!((laguerre(2, x) - 0.5 * (x * x - 4.0 * x + 2.0)).abs() < 1e-14);
        let l3 = (-x * x * x + 9.0 * x * x - 18.0 * x + 6.0) / 6.0;
        assert!((laguerre(3, x) - l3).abs() < 1e-14);
    }

    #[test]
    fn jacobi_reduces_to_legendre() {
        for n in 0..6u32 {
            let x = 0.37;
            let (p, _) = legendre_with_derivative(n as usize, x);
            assert!((jacobi(n, 0.0, 0.0, x) - p).abs() < 1e-14);
        }
        // P_1^{(a,b)}(x) = (a+1) + (a+b+2)(x-1)/2
        let (a, b, x) = (2.0, 1.0, -0.3);
        assert!((jacobi(1, a, b, x) - ((a + 1.0) + (a + b + 2.0) * (x - 1.0) / 2.0)).abs() < 1e-14);
    }

    #[test]
    fn gauss_legendre_integrates_polynomials_exactly() {
        let (x, w) = gauss_legendre(5);
        for deg in 0..10 {
            let num: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(deg)).sum();
            let exact = if deg % 2 == 1 { 0.0 } else { 2.0 / (deg as f64 + 1.0) };
            assert!((num - exact).abs() < 1e-14, "degree {deg}");
        }
    }
}
