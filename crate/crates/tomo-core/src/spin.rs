//! Spin tomography: Wigner small-d and D functions, 3j symbols, the
//! forward tomogram `w(m, alpha, beta)` and density-matrix reconstruction.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Result, TomoError};
use crate::grid::{AngleCoverage, Array2, Grid1D};
use crate::linalg::{hermitian_defect, CMatrix};
use crate::special::{gauss_legendre, jacobi, ln_factorial};
use crate::states::{SpinState, SpinTomogram};

/// Integer or half-integer, stored as twice its value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Half(i32);

impl Half {
    pub const fn from_twice(twice: i32) -> Self {
        Self(twice)
    }

    pub const fn from_int(n: i32) -> Self {
        Self(2 * n)
    }

    pub const fn twice(self) -> i32 {
        self.0
    }

    pub fn value(self) -> f64 {
        0.5 * self.0 as f64
    }

    pub fn is_integer(self) -> bool {
        self.0 % 2 == 0
    }

    /// `2j + 1` for a spin `j`.
    pub fn multiplicity(self) -> usize {
        (self.0 + 1).max(0) as usize
    }

    /// Row index of projection `m` (0 is `m = +j`), if `m` belongs to spin `self`.
    pub fn index_of(self, m: Half) -> Option<usize> {
        if m.0.abs() > self.0 || (self.0 - m.0) % 2 != 0 {
            return None;
        }
        Some(((self.0 - m.0) / 2) as usize)
    }

    /// Projection at row index `idx`.
    pub fn projection(self, idx: usize) -> Half {
        Half(self.0 - 2 * idx as i32)
    }

    /// Projections `j, j-1, ..., -j`.
    pub fn projections(self) -> impl Iterator<Item = Half> {
        (0..self.multiplicity()).map(move |i| self.projection(i))
    }
}

impl core::ops::Neg for Half {
    type Output = Half;

    fn neg(self) -> Half {
        Half(-self.0)
    }
}

impl core::ops::Add for Half {
    type Output = Half;

    fn add(self, o: Half) -> Half {
        Half(self.0 + o.0)
    }
}

impl core::ops::Sub for Half {
    type Output = Half;

    fn sub(self, o: Half) -> Half {
        Half(self.0 - o.0)
    }
}

impl fmt::Display for Half {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 % 2 == 0 {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

/// `(-1)^k` for an integer `k` given as a `Half` with even twice-value.
fn parity(k: Half) -> f64 {
    if (k.0 / 2) % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Euler angles `(alpha, beta, gamma)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EulerAngles {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl EulerAngles {
    pub fn new(alpha: f64, beta: f64, gamma: f64) -> Result<Self> {
        let full = 0.0..2.0 * PI;
        if !full.contains(&alpha) || !full.contains(&gamma) || !(0.0..=PI).contains(&beta) {
            return Err(TomoError::InvalidArgument("Euler angles out of range".into()));
        }
        Ok(Self { alpha, beta, gamma })
    }
}

/// The polar-angle axis of a spin tomogram.
#[derive(Debug, Clone, PartialEq)]
pub enum BetaNodes {
    /// Uniform grid on `[0, pi]`.
    Uniform(Grid1D),
    /// `n` Gauss-Legendre nodes in `cos beta`, the layout required for
    /// exact reconstruction.
    GaussLegendre(usize),
}

impl BetaNodes {
    pub fn len(&self) -> usize {
        match self {
            Self::Uniform(g) => g.len(),
            Self::GaussLegendre(n) => *n,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Polar angles, ascending.
    pub fn angles(&self) -> Vec<f64> {
        match self {
            Self::Uniform(g) => g.to_vec(),
            Self::GaussLegendre(n) => {
                let (x, _) = gauss_legendre(*n);
                x.iter().rev().map(|x| x.acos()).collect()
            }
        }
    }

    /// Weights of `∫_0^pi f(beta) sin(beta) d beta` at [`Self::angles`].
    pub fn weights(&self) -> Vec<f64> {
        match self {
            Self::Uniform(g) => g.trapezoid_weights().into_iter().zip(g.points()).map(|(w, b)| w * b.sin()).collect(),
            Self::GaussLegendre(n) => {
                let (_, w) = gauss_legendre(*n);
                w.into_iter().rev().collect()
            }
        }
    }
}

fn check_index(j: Half, m: Half) -> Result<()> {
    if j.0 < 0 || j.index_of(m).is_none() {
        Err(TomoError::IndexOutOfRange)
    } else {
        Ok(())
    }
}

/// Jacobi form valid for `mp >= |m|`.
fn small_d_canonical(j: Half, mp: Half, m: Half, beta: f64) -> f64 {
    let jm = |x: Half, s: i32| ((j.0 + s * x.0) / 2) as u32;
    let log_pref =
        0.5 * (ln_factorial(jm(mp, 1)) + ln_factorial(jm(mp, -1)) - ln_factorial(jm(m, 1)) - ln_factorial(jm(m, -1)));
    let a = (mp.0 - m.0) / 2;
    let b = (mp.0 + m.0) / 2;
    let n = ((j.0 - mp.0) / 2) as u32;
    let (s, c) = (0.5 * beta).sin_cos();
    log_pref.exp() * c.powi(b) * s.powi(a) * jacobi(n, a as f64, b as f64, beta.cos())
}

/// Wigner small-d function `d^j_{m' m}(beta)`.
pub fn wigner_small_d(j: Half, m_prime: Half, m: Half, beta: f64) -> Result<f64> {
    check_index(j, m_prime)?;
    check_index(j, m)?;
    let (mp, mm) = (m_prime, m);
    let v = if mp.0 >= mm.0.abs() {
        small_d_canonical(j, mp, mm, beta)
    } else if mm.0 >= mp.0.abs() {
        parity(mp - mm) * small_d_canonical(j, mm, mp, beta)
    } else if -mp.0 >= mm.0.abs() {
        parity(mp - mm) * small_d_canonical(j, -mp, -mm, beta)
    } else {
        small_d_canonical(j, -mm, -mp, beta)
    };
    Ok(v)
}

/// `D^j_{m' m}(alpha, beta, gamma) = e^{i m' gamma} d^j_{m' m}(beta) e^{i m alpha}`.
pub fn wigner_d(j: Half, m_prime: Half, m: Half, angles: &EulerAngles) -> Result<Complex64> {
    let d = wigner_small_d(j, m_prime, m, angles.beta)?;
    let phase = m_prime.value() * angles.gamma + m.value() * angles.alpha;
    Ok(Complex64::from_polar(d, phase))
}

/// Full `(2j+1) x (2j+1)` rotation matrix, rows and columns ordered `+j..-j`.
pub fn wigner_d_matrix(j: Half, angles: &EulerAngles) -> CMatrix {
    let n = j.multiplicity();
    Array2::from_fn(n, n, |a, b| wigner_d(j, j.projection(a), j.projection(b), angles).expect("indices in range"))
}

/// Wigner 3j symbol `(j1 j2 j3; m1 m2 m3)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThreeJ {
    pub j: [Half; 3],
    pub m: [Half; 3],
}

impl ThreeJ {
    pub fn new(j: [Half; 3], m: [Half; 3]) -> Self {
        Self { j, m }
    }
}

/// Racah's single-sum formula; selection-rule violations yield exactly 0.
pub fn three_j(sym: &ThreeJ) -> f64 {
    let [j1, j2, j3] = sym.j.map(|x| x.0);
    let [m1, m2, m3] = sym.m.map(|x| x.0);
    if m1 + m2 + m3 != 0 {
        return 0.0;
    }
    for (j, m) in [(j1, m1), (j2, m2), (j3, m3)] {
        if j < 0 || m.abs() > j || (j - m) % 2 != 0 {
            return 0.0;
        }
    }
    if (j1 + j2 + j3) % 2 != 0 || j3 > j1 + j2 || j3 < (j1 - j2).abs() {
        return 0.0;
    }
    // all quantities below are twice-values halved into integers
    let h = |x: i32| (x / 2) as i64;
    let t1 = h(j1 + j2 - j3);
    let t2 = h(j1 - j2 + j3);
    let t3 = h(-j1 + j2 + j3);
    let t4 = h(j1 + j2 + j3) + 1;
    let lf = |x: i64| ln_factorial(x as u32);
    let log_delta = 0.5 * (lf(t1) + lf(t2) + lf(t3) - lf(t4));
    let log_norm =
        0.5 * (lf(h(j1 + m1)) + lf(h(j1 - m1)) + lf(h(j2 + m2)) + lf(h(j2 - m2)) + lf(h(j3 + m3)) + lf(h(j3 - m3)));
    let a1 = h(j3 - j2 + m1);
    let a2 = h(j3 - j1 - m2);
    let b1 = h(j1 + j2 - j3);
    let b2 = h(j1 - m1);
    let b3 = h(j2 + m2);
    let kmin = 0.max(-a1).max(-a2);
    let kmax = b1.min(b2).min(b3);
    let mut sum = 0.0;
    for k in kmin..=kmax {
        let log_term = lf(k) + lf(b1 - k) + lf(b2 - k) + lf(b3 - k) + lf(a1 + k) + lf(a2 + k);
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        sum += sign * (log_delta + log_norm - log_term).exp();
    }
    let phase = h(j1 - j2 - m3);
    if phase.rem_euclid(2) == 0 {
        sum
    } else {
        -sum
    }
}

fn rotated_diagonal(rho: &CMatrix, d: &CMatrix) -> Vec<f64> {
    let n = rho.rows();
    (0..n)
        .map(|m| {
            let mut acc = Complex64::new(0.0, 0.0);
            for a in 0..n {
                let da = d[(m, a)];
                if da == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let mut inner = Complex64::new(0.0, 0.0);
                for b in 0..n {
                    inner += rho[(a, b)] * d[(m, b)].conj();
                }
                acc += da * inner;
            }
            acc.re
        })
        .collect()
}

/// Forward spin tomogram `w(m, alpha, beta) = (D rho D^dagger)_{mm}` at
/// `gamma = 0`.
pub fn spin_tomogram(state: &SpinState, alpha_grid: &Grid1D, beta: &BetaNodes) -> Result<SpinTomogram> {
    let j = state.j();
    let dim = j.multiplicity();
    let na = alpha_grid.len();
    let betas = beta.angles();
    let nb = betas.len();
    let mut values = vec![0.0; dim * na * nb];
    for (a, alpha) in alpha_grid.points().enumerate() {
        for (b, &bt) in betas.iter().enumerate() {
            let d = wigner_d_matrix(j, &EulerAngles { alpha, beta: bt, gamma: 0.0 });
            for (m, v) in rotated_diagonal(state.rho(), &d).into_iter().enumerate() {
                values[(m * na + a) * nb + b] = v;
            }
        }
    }
    SpinTomogram::new(j, *alpha_grid, beta.clone(), values)
}

/// Uniform `alpha` nodes and weights of `∫_0^{2 pi} d alpha`, requiring the
/// grid to cover the full turn.
fn alpha_quadrature(grid: &Grid1D) -> Result<(usize, f64)> {
    match AngleCoverage::of(grid) {
        Some(cov) if cov.period == 2.0 * PI => Ok((cov.distinct, 2.0 * PI / cov.distinct as f64)),
        _ => Err(TomoError::QuadratureTooCoarse("alpha grid must cover [0, 2 pi) uniformly".into())),
    }
}

/// Inverse map from a spin tomogram to the density matrix.
///
/// `rho_{ab} = sum_{J, M} (2J+1)^2 sum_{m1} (-1)^{m1 - b} (j j J; m1 -m1 0)
/// (j j J; a -b M) <w(m1) D^J_{0M}>`, where `<.>` is the rotation-group
/// average. The `alpha` average is the trapezoid rule and the `beta`
/// average Gauss-Legendre in `cos beta`, both exact for the band-limited
/// integrand.
pub fn reconstruct_spin_state(tomo: &SpinTomogram) -> Result<SpinState> {
    let j = tomo.j();
    let dim = j.multiplicity();
    let (na, wa) = alpha_quadrature(tomo.alpha_grid())?;
    let need_alpha = (2 * j.twice() + 2) as usize;
    if na < need_alpha {
        return Err(TomoError::QuadratureTooCoarse(alloc::format!("{na} distinct alpha nodes, need {need_alpha}")));
    }
    let need_beta = (j.twice() + 2) as usize;
    match tomo.beta() {
        BetaNodes::GaussLegendre(n) if *n >= need_beta => {}
        BetaNodes::GaussLegendre(n) => {
            return Err(TomoError::QuadratureTooCoarse(alloc::format!(
                "{n} Gauss-Legendre beta nodes, need {need_beta}"
            )))
        }
        BetaNodes::Uniform(_) => {
            return Err(TomoError::QuadratureTooCoarse("reconstruction needs Gauss-Legendre beta nodes".into()))
        }
    }
    let betas = tomo.beta().angles();
    let wb = tomo.beta().weights();
    let alphas: Vec<f64> = (0..na).map(|i| tomo.alpha_grid().point(i)).collect();

    let mut rho = Array2::filled(dim, dim, Complex64::new(0.0, 0.0));
    for big in 0..=j.twice() {
        let big_j = Half::from_int(big);
        let weight = (2.0 * big as f64 + 1.0).powi(2);
        for big_m in big_j.projections() {
            // <w(m1) D^J_{0M}> for every m1
            let d0m: Vec<f64> =
                betas.iter().map(|&b| wigner_small_d(big_j, Half(0), big_m, b).expect("valid index")).collect();
            let mut avg = vec![Complex64::new(0.0, 0.0); dim];
            for (m1, slot) in avg.iter_mut().enumerate() {
                let mut acc = Complex64::new(0.0, 0.0);
                for (a, &alpha) in alphas.iter().enumerate() {
                    let phase = Complex64::from_polar(1.0, big_m.value() * alpha);
                    let mut beta_sum = 0.0;
                    for b in 0..betas.len() {
                        beta_sum += wb[b] * tomo.get(m1, a, b) * d0m[b];
                    }
                    acc += phase * beta_sum;
                }
                *slot = acc * (wa / (4.0 * PI));
            }
            let mut coupling = Complex64::new(0.0, 0.0);
            let mut any = false;
            for (m1_idx, avg_m1) in avg.iter().enumerate() {
                let m1 = j.projection(m1_idx);
                let c = three_j(&ThreeJ::new([j, j, big_j], [m1, -m1, Half(0)]));
                if c != 0.0 {
                    any = true;
                    coupling += *avg_m1 * (c * parity(m1 - j));
                }
            }
            if !any {
                continue;
            }
            for a in 0..dim {
                for b in 0..dim {
                    let (ma, mb) = (j.projection(a), j.projection(b));
                    let c = three_j(&ThreeJ::new([j, j, big_j], [ma, -mb, big_m]));
                    if c == 0.0 {
                        continue;
                    }
                    // (-1)^{m1 - b} = (-1)^{m1 - j} (-1)^{j - b}
                    rho[(a, b)] += coupling * (weight * c * parity(j - mb));
                }
            }
        }
    }
    let asymmetry = hermitian_defect(&rho);
    if asymmetry > 1e-10 {
        return Err(TomoError::NonHermitianResult { asymmetry });
    }
    let herm = Array2::from_fn(dim, dim, |a, b| 0.5 * (rho[(a, b)] + rho[(b, a)].conj()));
    SpinState::new(j, herm)
}

/// Grid sizes for the rotation-group average of three D functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GroupQuadrature {
    pub alpha: usize,
    pub beta: usize,
    pub gamma: usize,
}

impl GroupQuadrature {
    /// Smallest grids that integrate the triple product exactly.
    pub fn minimal(j: [Half; 3]) -> Self {
        let jmax = j.iter().map(|x| x.twice()).max().unwrap_or(0) as usize;
        let jsum = j.iter().map(|x| x.twice()).sum::<i32>() as usize;
        Self { alpha: 2 * jmax + 2, beta: jsum / 2 + 2, gamma: 2 * jmax + 2 }
    }
}

/// `∫ D^{j1}_{m1' m1} D^{j2}_{m2' m2} D^{j3}_{m3' m3} dω / (8 pi^2)` minus
/// the product of 3j symbols `(j; m') (j; m)`.
pub fn d_orthogonality_check(j: [Half; 3], m_prime: [Half; 3], m: [Half; 3], quad: &GroupQuadrature) -> Result<f64> {
    for i in 0..3 {
        check_index(j[i], m_prime[i])?;
        check_index(j[i], m[i])?;
    }
    let need = GroupQuadrature::minimal(j);
    if quad.alpha < need.alpha || quad.gamma < need.gamma || quad.beta < need.beta {
        return Err(TomoError::QuadratureTooCoarse(alloc::format!("{quad:?}, need at least {need:?}")));
    }
    let (xb, wb) = gauss_legendre(quad.beta);
    let mut total = Complex64::new(0.0, 0.0);
    for (x, w) in xb.iter().zip(&wb) {
        let beta = x.acos();
        let mut d = 1.0;
        for i in 0..3 {
            d *= wigner_small_d(j[i], m_prime[i], m[i], beta)?;
        }
        total += Complex64::new(w * d, 0.0);
    }
    let phase_avg = |n: usize, freq: f64| -> Complex64 {
        (0..n).map(|k| Complex64::from_polar(1.0, freq * 2.0 * PI * k as f64 / n as f64)).sum::<Complex64>() / n as f64
    };
    let alpha_freq: f64 = m.iter().map(|x| x.value()).sum();
    let gamma_freq: f64 = m_prime.iter().map(|x| x.value()).sum();
    // alpha and gamma averages over [0, 2 pi); beta weight 1/2 from ∫ sin β dβ = 2
    let value = total * 0.5 * phase_avg(quad.alpha, alpha_freq) * phase_avg(quad.gamma, gamma_freq);
    let product = three_j(&ThreeJ::new(j, m_prime)) * three_j(&ThreeJ::new(j, m));
    Ok((value - product).norm())
}

/// Largest deviation of `(2j+1) sum_{m1,m2} (j1 j2 j; m1 m2 m)(j1 j2 j'; m1 m2 m')`
/// from `delta_{jj'} delta_{mm'}` over allowed `j, j'`.
pub fn three_j_coupling_defect(j1: Half, j2: Half) -> f64 {
    let lo = (j1.twice() - j2.twice()).abs();
    let hi = j1.twice() + j2.twice();
    let mut worst = 0.0f64;
    for ja in (lo..=hi).step_by(2) {
        for jb in (lo..=hi).step_by(2) {
            let (ja, jb) = (Half::from_twice(ja), Half::from_twice(jb));
            for m in ja.projections() {
                for mp in jb.projections() {
                    let mut s = 0.0;
                    for m1 in j1.projections() {
                        for m2 in j2.projections() {
                            s += three_j(&ThreeJ::new([j1, j2, ja], [m1, m2, m]))
                                * three_j(&ThreeJ::new([j1, j2, jb], [m1, m2, mp]));
                        }
                    }
                    s *= (ja.twice() + 1) as f64;
                    let target = if ja == jb && m == mp { 1.0 } else { 0.0 };
                    worst = worst.max((s - target).abs());
                }
            }
        }
    }
    worst
}

/// Largest deviation of `sum_{j,m} (2j+1) (j1 j2 j; m1 m2 m)(j1 j2 j; m1' m2' m)`
/// from `delta_{m1 m1'} delta_{m2 m2'}`.
pub fn three_j_completeness_defect(j1: Half, j2: Half) -> f64 {
    let lo = (j1.twice() - j2.twice()).abs();
    let hi = j1.twice() + j2.twice();
    let mut worst = 0.0f64;
    for m1 in j1.projections() {
        for m2 in j2.projections() {
            for n1 in j1.projections() {
                for n2 in j2.projections() {
                    let mut s = 0.0;
                    for jt in (lo..=hi).step_by(2) {
                        let j = Half::from_twice(jt);
                        for m in j.projections() {
                            s += (jt + 1) as f64
                                * three_j(&ThreeJ::new([j1, j2, j], [m1, m2, m]))
                                * three_j(&ThreeJ::new([j1, j2, j], [n1, n2, m]));
                        }
                    }
                    let target = if m1 == n1 && m2 == n2 { 1.0 } else { 0.0 };
                    worst = worst.max((s - target).abs());
                }
            }
        }
    }
    worst
}

impl SpinState {
    /// `G G^dagger / tr(G G^dagger)` from row-major entries of `G`.
    pub fn from_gram(j: Half, entries: &[Complex64]) -> Result<Self> {
        let n = j.multiplicity();
        let g = Array2::from_vec(n, n, entries.to_vec())?;
        let mut rho = Array2::from_fn(n, n, |a, b| (0..n).map(|k| g[(a, k)] * g[(b, k)].conj()).sum::<Complex64>());
        let tr: f64 = (0..n).map(|i| rho[(i, i)].re).sum();
        if !(tr > 0.0) {
            return Err(TomoError::InvalidArgument("zero Gram matrix".into()));
        }
        for a in 0..n {
            for b in 0..n {
                rho[(a, b)] /= tr;
            }
        }
        Self::new(j, rho)
    }
}
