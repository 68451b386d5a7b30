//! Small dense complex linear algebra: products, adjoints and Hermitian
//! eigenvalues (cyclic Jacobi on the real symmetric embedding).

use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::grid::Array2;

pub type CMatrix = Array2<Complex64>;

pub fn identity(n: usize) -> CMatrix {
    Array2::from_fn(n, n, |i, j| if i == j { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) })
}

pub fn matmul(a: &CMatrix, b: &CMatrix) -> CMatrix {
    assert_eq!(a.cols(), b.rows());
    Array2::from_fn(a.rows(), b.cols(), |i, j| {
        (0..a.cols()).fold(Complex64::new(0.0, 0.0), |acc, k| acc + a[(i, k)] * b[(k, j)])
    })
}

pub fn adjoint(a: &CMatrix) -> CMatrix {
    Array2::from_fn(a.cols(), a.rows(), |i, j| a[(j, i)].conj())
}

pub fn trace(a: &CMatrix) -> Complex64 {
    (0..a.rows().min(a.cols())).map(|i| a[(i, i)]).sum()
}

/// `max |a_ij - conj(a_ji)|`.
pub fn hermitian_defect(a: &CMatrix) -> f64 {
    let n = a.rows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            worst = worst.max((a[(i, j)] - a[(j, i)].conj()).norm());
        }
    }
    worst
}

/// `max |a_ij - b_ij|`.
pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Eigenvalues of a Hermitian matrix, ascending.
///
/// The `n x n` complex problem is embedded as the `2n x 2n` real symmetric
/// matrix `[[Re, -Im], [Im, Re]]`, whose spectrum is that of the input with
/// every eigenvalue doubled.
pub fn hermitian_eigenvalues(a: &CMatrix) -> Vec<f64> {
    let n = a.rows();
    let m = 2 * n;
    let mut s = Array2::filled(m, m, 0.0f64);
    for i in 0..n {
        for j in 0..n {
            let h = 0.5 * (a[(i, j)] + a[(j, i)].conj());
            s[(i, j)] = h.re;
            s[(i + n, j + n)] = h.re;
            s[(i, j + n)] = -h.im;
            s[(i + n, j)] = h.im;
        }
    }
    let mut ev = symmetric_eigenvalues(s);
    ev.sort_by(|x, y| x.total_cmp(y));
    ev.into_iter().step_by(2).collect()
}

/// Cyclic Jacobi eigenvalue iteration for a real symmetric matrix.
pub fn symmetric_eigenvalues(mut a: Array2<f64>) -> Vec<f64> {
    let n = a.rows();
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)] * a[(i, j)])
            .sum();
        let scale: f64 = a.iter().map(|x| x * x).sum::<f64>().max(f64::MIN_POSITIVE);
        if off <= 1e-30 * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                if apq.abs() < 1e-300 {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
            }
        }
    }
    (0..n).map(|i| a[(i, i)]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn eigenvalues_of_pauli_y() {
        let y = Array2::from_vec(2, 2, alloc::vec![c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)]).unwrap();
        let ev = hermitian_eigenvalues(&y);
        assert!((ev[0] + 1.0).abs() < 1e-14 && (ev[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn eigenvalues_sum_to_trace() {
        let a = Array2::from_fn(4, 4, |i, j| {
            let base = c((i + j) as f64 * 0.3, (i as f64 - j as f64) * 0.2);
            if i == j {
                c(base.re + 1.0, 0.0)
            } else {
                base
            }
        });
        let ev = hermitian_eigenvalues(&a);
        let sum: f64 = ev.iter().sum();
        assert!((sum - trace(&a).re).abs() < 1e-12);
        let sq: f64 = ev.iter().map(|x| x * x).sum();
        let fro: f64 = a.iter().map(|z| z.norm_sqr()).sum();
        assert!((sq - fro).abs() < 1e-11);
    }
}
