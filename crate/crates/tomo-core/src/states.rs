//! State containers shared by every module: frames, tomograms, Wigner and
//! classical phase-space fields, coordinate density kernels, wave functions
//! and spin states, together with their invariant checks.

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Result, TomoError};
use crate::grid::{integrate_2d, wrap, AngleCoverage, Array2, Grid1D};
use crate::linalg::{hermitian_defect, hermitian_eigenvalues, trace, CMatrix};
use crate::spin::{BetaNodes, Half};

/// Reference frame `(mu, nu)` of the observable `X = mu q + nu p`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SymplecticFrame {
    mu: f64,
    nu: f64,
}

impl SymplecticFrame {
    pub fn new(mu: f64, nu: f64) -> Result<Self> {
        if mu == 0.0 && nu == 0.0 {
            return Err(TomoError::InvalidArgument("frame (0, 0) is not admissible".into()));
        }
        if !(mu.is_finite() && nu.is_finite()) {
            return Err(TomoError::InvalidArgument("frame must be finite".into()));
        }
        Ok(Self { mu, nu })
    }

    /// Optical frame `mu = cos phi, nu = sin phi`.
    pub fn optical(phi: f64) -> Self {
        Self { mu: phi.cos(), nu: phi.sin() }
    }

    pub fn position() -> Self {
        Self { mu: 1.0, nu: 0.0 }
    }

    pub fn momentum() -> Self {
        Self { mu: 0.0, nu: 1.0 }
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn radius(&self) -> f64 {
        self.mu.hypot(self.nu)
    }

    pub fn angle(&self) -> f64 {
        self.nu.atan2(self.mu)
    }

    pub fn scaled(&self, lambda: f64) -> Result<Self> {
        Self::new(lambda * self.mu, lambda * self.nu)
    }
}

type Evaluator = dyn Fn(f64, f64, f64) -> f64 + Send + Sync;

/// Closed-form tomogram `w(X, mu, nu)` valid on the whole `(mu, nu)` plane.
#[derive(Clone)]
pub struct AnalyticTomogram {
    label: String,
    eval: Arc<Evaluator>,
    rotation_invariant: bool,
}

impl AnalyticTomogram {
    pub fn new(label: impl Into<String>, eval: impl Fn(f64, f64, f64) -> f64 + Send + Sync + 'static) -> Self {
        Self { label: label.into(), eval: Arc::new(eval), rotation_invariant: false }
    }

    /// Marks a tomogram that depends on `(mu, nu)` only through `mu^2 + nu^2`.
    pub fn with_rotation_invariance(self) -> Self {
        Self { rotation_invariant: true, ..self }
    }

    pub fn is_rotation_invariant(&self) -> bool {
        self.rotation_invariant
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn relabeled(&self, label: impl Into<String>) -> Self {
        Self { label: label.into(), ..self.clone() }
    }

    pub fn eval(&self, x: f64, mu: f64, nu: f64) -> f64 {
        (self.eval)(x, mu, nu)
    }

    /// Sample on the optical circle.
    pub fn sample(&self, x_grid: &Grid1D, phi_grid: &Grid1D) -> OpticalSamples {
        let values = Array2::from_fn(phi_grid.len(), x_grid.len(), |i, j| {
            let phi = phi_grid.point(i);
            self.eval(x_grid.point(j), phi.cos(), phi.sin())
        });
        OpticalSamples { x_grid: *x_grid, phi_grid: *phi_grid, values }
    }
}

impl fmt::Debug for AnalyticTomogram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AnalyticTomogram").field("label", &self.label).finish()
    }
}

/// Tomogram sampled on an `(X, phi)` lattice, `mu = cos phi`, `nu = sin phi`.
///
/// Rows of `values` are angles, columns are `X` nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct OpticalSamples {
    x_grid: Grid1D,
    phi_grid: Grid1D,
    values: Array2<f64>,
}

impl OpticalSamples {
    pub fn new(x_grid: Grid1D, phi_grid: Grid1D, values: Array2<f64>) -> Result<Self> {
        if values.shape() != (phi_grid.len(), x_grid.len()) {
            return Err(TomoError::ShapeMismatch(format!(
                "values {:?} vs (phi, X) = ({}, {})",
                values.shape(),
                phi_grid.len(),
                x_grid.len()
            )));
        }
        Ok(Self { x_grid, phi_grid, values })
    }

    pub fn x_grid(&self) -> &Grid1D {
        &self.x_grid
    }

    pub fn phi_grid(&self) -> &Grid1D {
        &self.phi_grid
    }

    pub fn values(&self) -> &Array2<f64> {
        &self.values
    }

    /// Samples at the `i`-th angle.
    pub fn column(&self, i: usize) -> &[f64] {
        self.values.row(i)
    }

    /// Optical tomogram at arbitrary `phi`, linearly interpolated in both
    /// `X` and `phi`. Angles outside the sampled range are mapped back with
    /// `w(X, phi + pi) = w(-X, phi)` when the grid covers a half or full
    /// turn; otherwise the nearest column is used.
    pub fn eval_optical(&self, x: f64, phi: f64) -> f64 {
        let n = self.phi_grid.len();
        let h = self.phi_grid.spacing();
        let phi0 = self.phi_grid.min();
        let at = |i: usize, x: f64| self.x_grid.interpolate(self.values.row(i), x);
        match AngleCoverage::of(&self.phi_grid) {
            Some(cov) => {
                let mut d = wrap(phi - phi0, 2.0 * PI);
                let mut xx = x;
                if cov.period < 2.0 * PI && d >= PI {
                    d -= PI;
                    xx = -xx;
                }
                let s = d / h;
                let i = (s.floor() as usize).min(cov.distinct - 1);
                let t = s - i as f64;
                let lo = at(i, xx);
                if t < 1e-12 {
                    return lo;
                }
                let hi = if i + 1 < cov.distinct {
                    at(i + 1, xx)
                } else if cov.period < 2.0 * PI {
                    at(0, -xx)
                } else {
                    at(0, xx)
                };
                lo * (1.0 - t) + hi * t
            }
            None => {
                let s = ((phi - phi0) / h).clamp(0.0, (n - 1) as f64);
                let i = (s.floor() as usize).min(n - 2);
                let t = s - i as f64;
                at(i, x) * (1.0 - t) + at(i + 1, x) * t
            }
        }
    }

    /// Homogeneity extension `w(X, mu, nu) = w_opt(X / r, atan2(nu, mu)) / r`.
    pub fn eval(&self, x: f64, mu: f64, nu: f64) -> f64 {
        let r = mu.hypot(nu);
        self.eval_optical(x / r, nu.atan2(mu)) / r
    }
}

/// Positive marginal distribution of `X = mu q + nu p`.
#[derive(Debug, Clone)]
pub enum Tomogram {
    Analytic(AnalyticTomogram),
    Samples(OpticalSamples),
}

impl From<AnalyticTomogram> for Tomogram {
    fn from(t: AnalyticTomogram) -> Self {
        Self::Analytic(t)
    }
}

impl From<OpticalSamples> for Tomogram {
    fn from(t: OpticalSamples) -> Self {
        Self::Samples(t)
    }
}

/// Quadrature used to integrate frame slices of analytic tomograms; the
/// interval is scaled by the frame radius so that slice integrals obey the
/// homogeneity law exactly.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize), serde(default))]
pub struct SliceQuadrature {
    pub half_width: f64,
    pub points: usize,
}

impl Default for SliceQuadrature {
    fn default() -> Self {
        Self { half_width: 16.0, points: 4097 }
    }
}

/// One frame slice `X -> w(X, mu, nu)` with trapezoid weights.
#[derive(Debug, Clone)]
pub struct Slice {
    pub x: Vec<f64>,
    pub weights: Vec<f64>,
    pub w: Vec<f64>,
}

impl Tomogram {
    pub fn eval(&self, x: f64, mu: f64, nu: f64) -> f64 {
        match self {
            Self::Analytic(a) => a.eval(x, mu, nu),
            Self::Samples(s) => s.eval(x, mu, nu),
        }
    }

    pub fn as_analytic(&self) -> Option<&AnalyticTomogram> {
        match self {
            Self::Analytic(a) => Some(a),
            Self::Samples(_) => None,
        }
    }

    pub fn as_samples(&self) -> Option<&OpticalSamples> {
        match self {
            Self::Samples(s) => Some(s),
            Self::Analytic(_) => None,
        }
    }

    /// Slice at `frame`. Analytic tomograms use `quad` scaled by the frame
    /// radius; sampled ones use their own `X` grid scaled the same way.
    pub fn slice(&self, frame: &SymplecticFrame, quad: &SliceQuadrature) -> Slice {
        let r = frame.radius();
        let grid = match self {
            Self::Analytic(_) => Grid1D::symmetric(quad.half_width, quad.points.max(2)).expect("valid quadrature"),
            Self::Samples(s) => *s.x_grid(),
        };
        let weights: Vec<f64> = grid.trapezoid_weights().into_iter().map(|w| w * r).collect();
        let x: Vec<f64> = grid.points().map(|y| y * r).collect();
        let w = match self {
            Self::Analytic(a) => x.iter().map(|&x| a.eval(x, frame.mu(), frame.nu())).collect(),
            Self::Samples(s) => {
                let phi = frame.angle();
                grid.points().map(|y| s.eval_optical(y, phi) / r).collect()
            }
        };
        Slice { x, weights, w }
    }
}

/// Wigner quasidistribution on a `(q, p)` grid; rows are `q`, columns `p`.
/// Normalized so that `∫ W dq dp / (2 pi) = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct WignerGrid {
    q_grid: Grid1D,
    p_grid: Grid1D,
    values: Array2<f64>,
}

impl WignerGrid {
    pub fn new(q_grid: Grid1D, p_grid: Grid1D, values: Array2<f64>) -> Result<Self> {
        check_shape(&values, &q_grid, &p_grid)?;
        Ok(Self { q_grid, p_grid, values })
    }

    pub fn from_fn(q_grid: Grid1D, p_grid: Grid1D, f: impl Fn(f64, f64) -> f64) -> Self {
        let values = Array2::from_fn(q_grid.len(), p_grid.len(), |i, j| f(q_grid.point(i), p_grid.point(j)));
        Self { q_grid, p_grid, values }
    }

    pub fn q_grid(&self) -> &Grid1D {
        &self.q_grid
    }

    pub fn p_grid(&self) -> &Grid1D {
        &self.p_grid
    }

    pub fn values(&self) -> &Array2<f64> {
        &self.values
    }

    /// `∫ W dq dp / (2 pi)`.
    pub fn norm(&self) -> f64 {
        integrate_2d(&self.values, &self.q_grid, &self.p_grid) / (2.0 * PI)
    }
}

/// Classical phase-space density `f(q, p)`; rows are `q`, columns `p`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseDensity {
    q_grid: Grid1D,
    p_grid: Grid1D,
    values: Array2<f64>,
}

impl PhaseDensity {
    pub fn new(q_grid: Grid1D, p_grid: Grid1D, values: Array2<f64>) -> Result<Self> {
        check_shape(&values, &q_grid, &p_grid)?;
        Ok(Self { q_grid, p_grid, values })
    }

    pub fn from_fn(q_grid: Grid1D, p_grid: Grid1D, f: impl Fn(f64, f64) -> f64) -> Self {
        let values = Array2::from_fn(q_grid.len(), p_grid.len(), |i, j| f(q_grid.point(i), p_grid.point(j)));
        Self { q_grid, p_grid, values }
    }

    pub fn q_grid(&self) -> &Grid1D {
        &self.q_grid
    }

    pub fn p_grid(&self) -> &Grid1D {
        &self.p_grid
    }

    pub fn values(&self) -> &Array2<f64> {
        &self.values
    }

    pub fn mass(&self) -> f64 {
        integrate_2d(&self.values, &self.q_grid, &self.p_grid)
    }
}

fn check_shape<T>(values: &Array2<T>, rows: &Grid1D, cols: &Grid1D) -> Result<()> {
    if values.shape() != (rows.len(), cols.len()) {
        return Err(TomoError::ShapeMismatch(format!(
            "values {:?} vs grids ({}, {})",
            values.shape(),
            rows.len(),
            cols.len()
        )));
    }
    Ok(())
}

/// Coordinate-representation density matrix `rho(X, X')`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityKernel {
    x_grid: Grid1D,
    values: CMatrix,
}

impl DensityKernel {
    pub fn new(x_grid: Grid1D, values: CMatrix) -> Result<Self> {
        check_shape(&values, &x_grid, &x_grid)?;
        Ok(Self { x_grid, values })
    }

    /// `rho(X, X') = psi(X) conj(psi(X'))`.
    pub fn from_pure(psi: &WaveFunction) -> Self {
        let v = psi.values();
        let values = Array2::from_fn(v.len(), v.len(), |i, j| v[i] * v[j].conj());
        Self { x_grid: *psi.x_grid(), values }
    }

    /// Convex combination `sum_k a_k rho_k`; all kernels must share a grid.
    pub fn mixture(parts: &[(f64, &DensityKernel)]) -> Result<Self> {
        let first = parts.first().ok_or_else(|| TomoError::InvalidArgument("empty mixture".into()))?.1;
        let grid = first.x_grid;
        let n = grid.len();
        let mut values = Array2::filled(n, n, Complex64::new(0.0, 0.0));
        for (a, rho) in parts {
            if rho.x_grid != grid {
                return Err(TomoError::ShapeMismatch("mixture components use different grids".into()));
            }
            for i in 0..n {
                for j in 0..n {
                    values[(i, j)] += rho.values[(i, j)] * *a;
                }
            }
        }
        Ok(Self { x_grid: grid, values })
    }

    pub fn x_grid(&self) -> &Grid1D {
        &self.x_grid
    }

    pub fn values(&self) -> &CMatrix {
        &self.values
    }

    /// Trapezoid integral of the diagonal.
    pub fn trace(&self) -> f64 {
        let diag: Vec<f64> = (0..self.x_grid.len()).map(|i| self.values[(i, i)].re).collect();
        self.x_grid.integrate(&diag)
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.x_grid.len()).map(|i| self.values[(i, i)].re).collect()
    }
}

/// Wave function `psi(y)` on a coordinate grid.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveFunction {
    x_grid: Grid1D,
    values: Vec<Complex64>,
}

impl WaveFunction {
    pub fn new(x_grid: Grid1D, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != x_grid.len() {
            return Err(TomoError::ShapeMismatch(format!("{} values on a {}-point grid", values.len(), x_grid.len())));
        }
        Ok(Self { x_grid, values })
    }

    pub fn from_fn(x_grid: Grid1D, f: impl Fn(f64) -> Complex64) -> Self {
        let values = x_grid.points().map(f).collect();
        Self { x_grid, values }
    }

    pub fn x_grid(&self) -> &Grid1D {
        &self.x_grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// Trapezoid `∫ |psi|^2`.
    pub fn norm_sqr(&self) -> f64 {
        let d: Vec<f64> = self.values.iter().map(|z| z.norm_sqr()).collect();
        self.x_grid.integrate(&d)
    }

    /// Trapezoid `<self|other>`; grids must match.
    pub fn inner(&self, other: &WaveFunction) -> Result<Complex64> {
        if self.x_grid != other.x_grid {
            return Err(TomoError::ShapeMismatch("wave functions use different grids".into()));
        }
        let w = self.x_grid.trapezoid_weights();
        Ok(self.values.iter().zip(&other.values).zip(&w).map(|((a, b), w)| a.conj() * b * *w).sum())
    }
}

/// Spin-`j` density matrix indexed by `m, m' = j, j-1, ..., -j` (row 0 is
/// `m = +j`).
#[derive(Debug, Clone, PartialEq)]
pub struct SpinState {
    j: Half,
    rho: CMatrix,
}

impl SpinState {
    pub fn new(j: Half, rho: CMatrix) -> Result<Self> {
        if j.twice() < 0 {
            return Err(TomoError::InvalidArgument("spin j must be nonnegative".into()));
        }
        let dim = j.multiplicity();
        if rho.shape() != (dim, dim) {
            return Err(TomoError::ShapeMismatch(format!(
                "spin {} needs a {dim}x{dim} matrix, got {:?}",
                j,
                rho.shape()
            )));
        }
        Ok(Self { j, rho })
    }

    /// `|m><m|` for the given projection.
    pub fn basis(j: Half, m: Half) -> Result<Self> {
        let idx = j.index_of(m).ok_or(TomoError::IndexOutOfRange)?;
        let dim = j.multiplicity();
        let rho = Array2::from_fn(dim, dim, |a, b| {
            if a == idx && b == idx {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        Ok(Self { j, rho })
    }

    pub fn maximally_mixed(j: Half) -> Self {
        let dim = j.multiplicity();
        let rho = Array2::from_fn(dim, dim, |a, b| {
            if a == b {
                Complex64::new(1.0 / dim as f64, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        Self { j, rho }
    }

    pub fn j(&self) -> Half {
        self.j
    }

    pub fn rho(&self) -> &CMatrix {
        &self.rho
    }

    /// Element `rho_{m m'}`.
    pub fn element(&self, m: Half, m_prime: Half) -> Option<Complex64> {
        Some(self.rho[(self.j.index_of(m)?, self.j.index_of(m_prime)?)])
    }
}

/// Spin tomogram `w(m, alpha, beta)`; `gamma` drops out of the diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinTomogram {
    j: Half,
    alpha_grid: Grid1D,
    beta: BetaNodes,
    /// Flattened `(m index, alpha index, beta index)`.
    values: Vec<f64>,
}

impl SpinTomogram {
    pub fn new(j: Half, alpha_grid: Grid1D, beta: BetaNodes, values: Vec<f64>) -> Result<Self> {
        let expected = j.multiplicity() * alpha_grid.len() * beta.len();
        if values.len() != expected {
            return Err(TomoError::ShapeMismatch(format!("{} values, expected {expected}", values.len())));
        }
        Ok(Self { j, alpha_grid, beta, values })
    }

    pub fn j(&self) -> Half {
        self.j
    }

    pub fn alpha_grid(&self) -> &Grid1D {
        &self.alpha_grid
    }

    pub fn beta(&self) -> &BetaNodes {
        &self.beta
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Probability of projection index `m_idx` (0 is `m = +j`) at node
    /// `(a, b)`.
    pub fn get(&self, m_idx: usize, a: usize, b: usize) -> f64 {
        let na = self.alpha_grid.len();
        let nb = self.beta.len();
        self.values[(m_idx * na + a) * nb + b]
    }
}

/// A failed invariant.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub invariant: &'static str,
    pub detail: String,
}

impl Violation {
    fn new(invariant: &'static str, detail: String) -> Self {
        Self { invariant, detail }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} violated: {}", self.invariant, self.detail)
    }
}

/// Invariant diagnostics; an empty list means the value is admissible.
pub trait Validate {
    fn validate(&self) -> Vec<Violation>;
}

/// Negative samples above this magnitude count as a positivity violation.
pub const NEGATIVITY_TOL: f64 = 1e-10;
pub const TOMOGRAM_NORM_TOL: f64 = 1e-3;
pub const WIGNER_NORM_TOL: f64 = 1e-2;
pub const DENSITY_HERMITIAN_TOL: f64 = 1e-10;
pub const DENSITY_TRACE_TOL: f64 = 1e-3;
pub const WAVEFUNCTION_NORM_TOL: f64 = 1e-3;
pub const PHASE_DENSITY_NORM_TOL: f64 = 1e-2;
pub const SPIN_TOL: f64 = 1e-12;
pub const SPIN_EIGEN_TOL: f64 = 1e-10;
pub const HOMOGENEITY_TOL: f64 = 1e-10;

impl Validate for Grid1D {
    fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        if !(self.max() > self.min()) || self.len() < 2 || !(self.spacing() > 0.0) {
            out.push(Violation::new("grid", format!("{self:?}")));
        }
        out
    }
}

impl Validate for OpticalSamples {
    fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let min = self.values.iter().copied().fold(f64::INFINITY, f64::min);
        if min < -NEGATIVITY_TOL {
            out.push(Violation::new("values ≥ 0", format!("minimum sample {min:.3e}")));
        }
        for i in 0..self.phi_grid.len() {
            let norm = self.x_grid.integrate(self.column(i));
            if (norm - 1.0).abs() > TOMOGRAM_NORM_TOL {
                out.push(Violation::new(
                    "column normalization",
                    format!("phi = {:.6}: ∫w dX = {norm:.6}", self.phi_grid.point(i)),
                ));
                break;
            }
        }
        out
    }
}

impl Validate for AnalyticTomogram {
    fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let quad = SliceQuadrature::default();
        let frames = [0.0, 0.4, PI / 2.0, 2.2, 3.0].map(SymplecticFrame::optical);
        let mut min = f64::INFINITY;
        for frame in frames.iter().chain([SymplecticFrame { mu: 0.7, nu: -1.9 }].iter()) {
            let s = Tomogram::Analytic(self.clone()).slice(frame, &quad);
            min = s.w.iter().copied().fold(min, f64::min);
            let norm: f64 = s.w.iter().zip(&s.weights).map(|(w, h)| w * h).sum();
            if (norm - 1.0).abs() > TOMOGRAM_NORM_TOL {
                out.push(Violation::new(
                    "column normalization",
                    format!("frame ({:.3}, {:.3}): ∫w dX = {norm:.6}", frame.mu(), frame.nu()),
                ));
            }
        }
        if min < -NEGATIVITY_TOL {
            out.push(Violation::new("values ≥ 0", format!("minimum sample {min:.3e}")));
        }
        let mut worst = 0.0f64;
        for &lambda in &[0.5, 2.0, -1.0, 3.7] {
            for &(x, mu, nu) in &[(0.3, 1.0, 0.0), (-0.8, 0.6, 0.8), (1.4, -0.3, 1.1), (0.0, 0.2, -0.5)] {
                let base = self.eval(x, mu, nu);
                let scaled = self.eval(lambda * x, lambda * mu, lambda * nu) * lambda.abs();
                let rel = (scaled - base).abs() / base.abs().max(1e-300);
                if base.abs() > 1e-200 {
                    worst = worst.max(rel);
                }
            }
        }
        if worst > HOMOGENEITY_TOL {
            out.push(Violation::new("homogeneity", format!("relative defect {worst:.3e}")));
        }
        out
    }
}

impl Validate for Tomogram {
    fn validate(&self) -> Vec<Violation> {
        match self {
            Self::Analytic(a) => a.validate(),
            Self::Samples(s) => s.validate(),
        }
    }
}

impl Validate for WignerGrid {
    fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let norm = self.norm();
        if (norm - 1.0).abs() > WIGNER_NORM_TOL {
            out.push(Violation::new("∫W/(2π) = 1", format!("norm {norm:.6}")));
        }
        out
    }
}

impl Validate for PhaseDensity {
    fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let min = self.values.iter().copied().fold(f64::INFINITY, f64::min);
        if min < 0.0 {
            out.push(Violation::new("values ≥ 0", format!("minimum {min:.3e}")));
        }
        let mass = self.mass();
        if (mass - 1.0).abs() > PHASE_DENSITY_NORM_TOL {
            out.push(Violation::new("∫f = 1", format!("mass {mass:.6}")));
        }
        out
    }
}

impl Validate for DensityKernel {
    fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let defect = hermitian_defect(&self.values);
        if defect > DENSITY_HERMITIAN_TOL {
            out.push(Violation::new("Hermitian", format!("defect {defect:.3e}")));
        }
        let tr = self.trace();
        if (tr - 1.0).abs() > DENSITY_TRACE_TOL {
            out.push(Violation::new("trace = 1", format!("trace {tr:.6}")));
        }
        let n = self.x_grid.len();
        let min_diag = (0..n).map(|i| self.values[(i, i)].re).fold(f64::INFINITY, f64::min);
        let max_imag = (0..n).map(|i| self.values[(i, i)].im.abs()).fold(0.0, f64::max);
        if min_diag < -NEGATIVITY_TOL || max_imag > DENSITY_HERMITIAN_TOL {
            out.push(Violation::new("diagonal real and ≥ 0", format!("min {min_diag:.3e}, max |Im| {max_imag:.3e}")));
        }
        out
    }
}

impl Validate for WaveFunction {
    fn validate(&self) -> Vec<Violation> {
        let norm = self.norm_sqr();
        if (norm - 1.0).abs() > WAVEFUNCTION_NORM_TOL {
            vec![Violation::new("∫|ψ|² = 1", format!("norm {norm:.6}"))]
        } else {
            Vec::new()
        }
    }
}

impl Validate for SpinState {
    fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let defect = hermitian_defect(&self.rho);
        if defect > SPIN_TOL {
            out.push(Violation::new("Hermitian", format!("defect {defect:.3e}")));
        }
        let tr = trace(&self.rho);
        if (tr.re - 1.0).abs() > SPIN_TOL || tr.im.abs() > SPIN_TOL {
            out.push(Violation::new("trace = 1", format!("trace {tr}")));
        }
        let min_ev = hermitian_eigenvalues(&self.rho).first().copied().unwrap_or(0.0);
        if min_ev < -SPIN_EIGEN_TOL {
            out.push(Violation::new("eigenvalues ≥ 0", format!("min eigenvalue {min_ev:.3e}")));
        }
        out
    }
}

impl Validate for SpinTomogram {
    fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let dim = self.j.multiplicity();
        let mut worst = 0.0f64;
        let mut min = f64::INFINITY;
        for a in 0..self.alpha_grid.len() {
            for b in 0..self.beta.len() {
                let s: f64 = (0..dim).map(|m| self.get(m, a, b)).sum();
                worst = worst.max((s - 1.0).abs());
                for m in 0..dim {
                    min = min.min(self.get(m, a, b));
                }
            }
        }
        if worst > SPIN_TOL {
            out.push(Violation::new("Σ_m w = 1", format!("defect {worst:.3e}")));
        }
        if min < -SPIN_TOL {
            out.push(Violation::new("values ≥ 0", format!("minimum {min:.3e}")));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic;

    #[test]
    fn ground_state_wavefunction_is_valid() {
        let grid = Grid1D::symmetric(8.0, 512).unwrap();
        let psi = WaveFunction::from_fn(grid, |y| Complex64::new(PI.powf(-0.25) * (-0.5 * y * y).exp(), 0.0));
        assert!(psi.validate().is_empty());
    }

    #[test]
    fn spin_up_is_valid() {
        let s = SpinState::basis(Half::from_twice(1), Half::from_twice(1)).unwrap();
        assert_eq!(s.rho()[(0, 0)], Complex64::new(1.0, 0.0));
        assert!(s.validate().is_empty());
    }

    #[test]
    fn negative_sample_is_reported() {
        let x = Grid1D::symmetric(8.0, 256).unwrap();
        let phi = Grid1D::periodic(0.0, PI, 8).unwrap();
        let t = analytic::fock_tomogram(analytic::FockLabel::new(0).unwrap()).sample(&x, &phi);
        let mut values = t.values.clone();
        values[(3, 100)] = -0.01;
        let t = OpticalSamples::new(x, phi, values).unwrap();
        let v = t.validate();
        assert!(v.iter().any(|x| x.invariant == "values ≥ 0"), "{v:?}");
    }

    #[test]
    fn non_positive_spin_state_is_reported() {
        let j = Half::from_twice(1);
        let rho = Array2::from_vec(
            2,
            2,
            vec![
                Complex64::new(1.2, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(-0.2, 0.0),
            ],
        )
        .unwrap();
        let v = SpinState::new(j, rho).unwrap().validate();
        assert!(v.iter().any(|v| v.invariant == "eigenvalues ≥ 0"));
    }

    #[test]
    fn frame_rejects_origin() {
        assert!(SymplecticFrame::new(0.0, 0.0).is_err());
        assert!(SymplecticFrame::new(0.0, 1e-9).is_ok());
    }

    #[test]
    fn homogeneity_extension_of_samples() {
        let x = Grid1D::symmetric(8.0, 1025).unwrap();
        let phi = Grid1D::periodic(0.0, PI, 64).unwrap();
        let c = analytic::coherent_tomogram(analytic::CoherentLabel::new(Complex64::new(0.8, -0.3)).unwrap());
        let s = c.sample(&x, &phi);
        for &(xx, mu, nu) in &[(0.5, 1.0, 0.0), (-0.4, -0.7, 0.2), (1.2, 0.3, -1.7), (0.1, -2.0, -0.5)] {
            let exact = c.eval(xx, mu, nu);
            assert!((s.eval(xx, mu, nu) - exact).abs() < 5e-3, "({xx}, {mu}, {nu})");
        }
    }
}
