//! Scalar functionals of tomograms: moments, entropy, uncertainty products
//! and transition probabilities.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Result, TomoError};
use crate::grid::{integrate_2d, Array2, Grid1D};
use crate::par;
use crate::special::composite_gauss_legendre;
use crate::states::{SliceQuadrature, SymplecticFrame, Tomogram, WignerGrid};

/// `∫ X^order w(X, mu, nu) dX` for `order` in `{0, 1, 2}`.
pub fn moment(tomo: &Tomogram, frame: &SymplecticFrame, order: u32, quad: &SliceQuadrature) -> Result<f64> {
    if order > 2 {
        return Err(TomoError::InvalidArgument(format!("moment order {order} not in {{0, 1, 2}}")));
    }
    let s = tomo.slice(frame, quad);
    let norm: f64 = s.w.iter().zip(&s.weights).map(|(w, h)| w * h).sum();
    if (norm - 1.0).abs() > 1e-2 {
        return Err(TomoError::NotNormalized { norm });
    }
    Ok(s.x.iter().zip(&s.w).zip(&s.weights).map(|((x, w), h)| x.powi(order as i32) * w * h).sum())
}

/// Variance of `X` in the given frame.
pub fn variance(tomo: &Tomogram, frame: &SymplecticFrame, quad: &SliceQuadrature) -> Result<f64> {
    let m0 = moment(tomo, frame, 0, quad)?;
    let m1 = moment(tomo, frame, 1, quad)? / m0;
    let m2 = moment(tomo, frame, 2, quad)? / m0;
    Ok(m2 - m1 * m1)
}

/// Differential entropy `-∫ w ln w dX` in nats; samples below `1e-30`
/// contribute nothing.
pub fn entropy(tomo: &Tomogram, frame: &SymplecticFrame, quad: &SliceQuadrature) -> f64 {
    let s = tomo.slice(frame, quad);
    -s.w.iter().zip(&s.weights).filter(|(w, _)| **w >= 1e-30).map(|(w, h)| w * w.ln() * h).sum::<f64>()
}

/// Product of the position-frame and momentum-frame variances.
pub fn uncertainty_product(tomo: &Tomogram, quad: &SliceQuadrature) -> Result<f64> {
    Ok(variance(tomo, &SymplecticFrame::position(), quad)? * variance(tomo, &SymplecticFrame::momentum(), quad)?)
}

/// Quadrature for the tomographic overlap integral.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize), serde(default))]
pub struct OverlapQuadrature {
    /// Uniform angles over the full turn.
    pub angles: usize,
    /// Radial cutoff of the frame plane.
    pub radial_cutoff: f64,
    pub radial_panels: usize,
    pub radial_order: usize,
    /// `X` integration interval `[-x_half_width, x_half_width]`.
    pub x_half_width: f64,
    pub x_points: usize,
    /// Largest tolerated contribution of the outer tenth of the radial range.
    pub tail_tolerance: f64,
}

impl Default for OverlapQuadrature {
    fn default() -> Self {
        Self {
            angles: 64,
            radial_cutoff: 12.0,
            radial_panels: 24,
            radial_order: 8,
            x_half_width: 12.0,
            x_points: 1025,
            tail_tolerance: 1e-3,
        }
    }
}

/// Samples of `chi(r, phi) = ∫ w(X, cos phi, sin phi) e^{i r X} dX` on the
/// overlap quadrature nodes. Building one table per state lets a whole
/// overlap matrix reuse the transforms.
#[derive(Debug, Clone)]
pub struct CharacteristicTable {
    quad: OverlapQuadrature,
    radii: Vec<f64>,
    radial_weights: Vec<f64>,
    /// Rows are angles, columns radii.
    chi: Array2<Complex64>,
}

impl CharacteristicTable {
    pub fn new(tomo: &Tomogram, quad: &OverlapQuadrature) -> Result<Self> {
        if quad.angles < 4 || quad.x_points < 2 || quad.radial_panels < 10 || quad.radial_order < 1 {
            return Err(TomoError::InvalidArgument(format!("overlap quadrature {quad:?} too small")));
        }
        let (radii, radial_weights) =
            composite_gauss_legendre(0.0, quad.radial_cutoff, quad.radial_panels, quad.radial_order);
        let xg = Grid1D::symmetric(quad.x_half_width, quad.x_points)?;
        let xw = xg.trapezoid_weights();
        let xs = xg.to_vec();
        let rows = par::map_indexed(quad.angles, |i| {
            let phi = 2.0 * PI * i as f64 / quad.angles as f64;
            let (s, c) = phi.sin_cos();
            let w: Vec<f64> = xs.iter().zip(&xw).map(|(&x, h)| tomo.eval(x, c, s) * h).collect();
            radii
                .iter()
                .map(|&r| {
                    let step = Complex64::from_polar(1.0, r * xg.spacing());
                    let mut phase = Complex64::from_polar(1.0, r * xg.min());
                    let mut acc = Complex64::new(0.0, 0.0);
                    for wi in &w {
                        acc += phase * *wi;
                        phase *= step;
                    }
                    acc
                })
                .collect::<Vec<_>>()
        });
        let chi = Array2::from_rows(rows)?;
        Ok(Self { quad: *quad, radii, radial_weights, chi })
    }

    /// Transition probability
    /// `P = (1/2pi) ∫ dphi ∫ r dr chi_1(r, phi) conj(chi_2(r, phi))`.
    pub fn overlap(&self, other: &CharacteristicTable) -> Result<f64> {
        if self.quad != other.quad {
            return Err(TomoError::InvalidArgument("tables built with different quadratures".into()));
        }
        let tail_start = 0.9 * self.quad.radial_cutoff;
        let mut total = Complex64::new(0.0, 0.0);
        let mut tail = Complex64::new(0.0, 0.0);
        for i in 0..self.quad.angles {
            let (a, b) = (self.chi.row(i), other.chi.row(i));
            for k in 0..self.radii.len() {
                let term = a[k] * b[k].conj() * (self.radii[k] * self.radial_weights[k]);
                total += term;
                if self.radii[k] >= tail_start {
                    tail += term;
                }
            }
        }
        let dphi = 2.0 * PI / self.quad.angles as f64;
        let p = total * (dphi / (2.0 * PI));
        let tail = tail.norm() * dphi / (2.0 * PI);
        if tail > self.quad.tail_tolerance {
            return Err(TomoError::IntegrationDiverged { tail });
        }
        if p.im.abs() > 1e-3 {
            return Err(TomoError::ComplexResidue { residue: p.im.abs() });
        }
        Ok(p.re)
    }
}

/// Transition probability between two tomograms via the frame-plane
/// overlap integral.
pub fn transition_probability(t1: &Tomogram, t2: &Tomogram, quad: &OverlapQuadrature) -> Result<f64> {
    CharacteristicTable::new(t1, quad)?.overlap(&CharacteristicTable::new(t2, quad)?)
}

/// Largest accepted state list for [`orthogonality_matrix`].
pub const MAX_OVERLAP_STATES: usize = 8;

/// Pairwise transition probabilities.
pub fn orthogonality_matrix(states: &[Tomogram], quad: &OverlapQuadrature) -> Result<Array2<f64>> {
    if states.len() > MAX_OVERLAP_STATES {
        return Err(TomoError::TooManyStates { got: states.len(), max: MAX_OVERLAP_STATES });
    }
    let tables = states.iter().map(|t| CharacteristicTable::new(t, quad)).collect::<Result<Vec<_>>>()?;
    let n = tables.len();
    let mut out = Array2::filled(n, n, 0.0);
    for i in 0..n {
        for j in 0..n {
            out[(i, j)] = tables[i].overlap(&tables[j])?;
        }
    }
    Ok(out)
}

/// `(1/2pi) ∫ W_1 W_2 dq dp` on a shared grid.
pub fn wigner_overlap(w1: &WignerGrid, w2: &WignerGrid) -> Result<f64> {
    if w1.q_grid() != w2.q_grid() || w1.p_grid() != w2.p_grid() {
        return Err(TomoError::ShapeMismatch("Wigner grids differ".into()));
    }
    let prod = Array2::from_fn(w1.q_grid().len(), w1.p_grid().len(), |i, j| w1.values()[(i, j)] * w2.values()[(i, j)]);
    Ok(integrate_2d(&prod, w1.q_grid(), w1.p_grid()) / (2.0 * PI))
}
