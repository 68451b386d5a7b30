//! Evolution under quadratic Hamiltonians through linear integrals of
//! motion, tomographic propagators as exact frame pullbacks, classical
//! Liouville transport, and residuals of the oscillator evolution and
//! eigenvalue equations.
//!
//! Phase-space vectors are ordered `Q = (p, q)`. With `J = [[0, 1], [-1, 0]]`
//! Hamilton's equations read `dQ/dt = J (B Q + C)`, and the integral of
//! motion `I = Lambda Q + Delta` stays constant when
//! `dLambda/dt = Lambda J B` and `dDelta/dt = Lambda J C`.

use alloc::format;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;

#[allow(unused_imports)]
use num_traits::Float;

use crate::analytic::{fock_tomogram_fourier, CoherentLabel, FockLabel};
use crate::error::{Result, TomoError};
use crate::grid::{bilinear, integrate_2d, Array2, Grid1D};
use crate::states::{AnalyticTomogram, PhaseDensity, SymplecticFrame};
use crate::transforms::{classical_tomogram, TransformConfig};

pub type Mat2 = [[f64; 2]; 2];
pub type Vec2 = [f64; 2];

const IDENTITY: Mat2 = [[1.0, 0.0], [0.0, 1.0]];

fn mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut out = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

fn apply(a: &Mat2, v: &Vec2) -> Vec2 {
    [a[0][0] * v[0] + a[0][1] * v[1], a[1][0] * v[0] + a[1][1] * v[1]]
}

fn det(a: &Mat2) -> f64 {
    a[0][0] * a[1][1] - a[0][1] * a[1][0]
}

/// `J M` with `J = [[0, 1], [-1, 0]]`.
fn j_times(m: &Mat2) -> Mat2 {
    [[m[1][0], m[1][1]], [-m[0][0], -m[0][1]]]
}

/// `J v`.
fn j_apply(v: &Vec2) -> Vec2 {
    [v[1], -v[0]]
}

type MatrixFn = dyn Fn(f64) -> Mat2 + Send + Sync;
type VectorFn = dyn Fn(f64) -> Vec2 + Send + Sync;

/// `H = Q B(t) Q / 2 + C(t) Q` on `Q = (p, q)`.
#[derive(Clone)]
pub struct QuadraticHamiltonian {
    b: Arc<MatrixFn>,
    c: Arc<VectorFn>,
}

impl fmt::Debug for QuadraticHamiltonian {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("QuadraticHamiltonian").field("B(0)", &(self.b)(0.0)).field("C(0)", &(self.c)(0.0)).finish()
    }
}

impl QuadraticHamiltonian {
    pub fn new(
        b: impl Fn(f64) -> Mat2 + Send + Sync + 'static,
        c: impl Fn(f64) -> Vec2 + Send + Sync + 'static,
    ) -> Self {
        Self { b: Arc::new(b), c: Arc::new(c) }
    }

    /// Time-independent coefficients.
    pub fn constant(b: Mat2, c: Vec2) -> Self {
        Self::new(move |_| b, move |_| c)
    }

    /// `H = p^2 / 2`.
    pub fn free() -> Self {
        Self::constant([[1.0, 0.0], [0.0, 0.0]], [0.0, 0.0])
    }

    /// `H = (p^2 + q^2) / 2`.
    pub fn oscillator() -> Self {
        Self::constant(IDENTITY, [0.0, 0.0])
    }

    pub fn b(&self, t: f64) -> Mat2 {
        (self.b)(t)
    }

    pub fn c(&self, t: f64) -> Vec2 {
        (self.c)(t)
    }

    /// Largest `|B_01 - B_10|` over the sample times.
    pub fn asymmetry(&self, times: &[f64]) -> f64 {
        times
            .iter()
            .map(|&t| {
                let b = self.b(t);
                (b[0][1] - b[1][0]).abs()
            })
            .fold(0.0, f64::max)
    }
}

/// `Lambda(t)`, `Delta(t)` of the integral of motion `I = Lambda Q + Delta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearInvariants {
    pub lambda: Mat2,
    pub delta: Vec2,
    pub t: f64,
}

impl LinearInvariants {
    pub fn identity() -> Self {
        Self { lambda: IDENTITY, delta: [0.0, 0.0], t: 0.0 }
    }

    pub fn det(&self) -> f64 {
        det(&self.lambda)
    }
}

/// Largest step accepted by [`linear_invariants`].
pub const MAX_STEP: f64 = 1e-2;

/// Classical fourth-order Runge-Kutta integration of the invariant equations
/// from `t0` to `t1`, with the identity at `t0`.
pub fn linear_invariants_between(h: &QuadraticHamiltonian, t0: f64, t1: f64, dt: f64) -> Result<LinearInvariants> {
    if !(dt > 0.0 && dt <= MAX_STEP) {
        return Err(TomoError::InvalidArgument(format!("step {dt} outside (0, {MAX_STEP}]")));
    }
    if !(t0.is_finite() && t1.is_finite()) {
        return Err(TomoError::InvalidArgument("time must be finite".into()));
    }
    let span = t1 - t0;
    let steps = (span.abs() / dt).ceil() as usize;
    let mut lambda = IDENTITY;
    let mut delta = [0.0, 0.0];
    if steps > 0 {
        let step = span / steps as f64;
        let rhs = |t: f64, l: &Mat2| -> (Mat2, Vec2) { (mul(l, &j_times(&h.b(t))), apply(l, &j_apply(&h.c(t)))) };
        let axpy = |l: &Mat2, d: &Vec2, k: &(Mat2, Vec2), s: f64| -> (Mat2, Vec2) {
            let mut nl = *l;
            let mut nd = *d;
            for i in 0..2 {
                nd[i] += s * k.1[i];
                for j in 0..2 {
                    nl[i][j] += s * k.0[i][j];
                }
            }
            (nl, nd)
        };
        for n in 0..steps {
            let t = t0 + n as f64 * step;
            let k1 = rhs(t, &lambda);
            let (l2, _) = axpy(&lambda, &delta, &k1, 0.5 * step);
            let k2 = rhs(t + 0.5 * step, &l2);
            let (l3, _) = axpy(&lambda, &delta, &k2, 0.5 * step);
            let k3 = rhs(t + 0.5 * step, &l3);
            let (l4, _) = axpy(&lambda, &delta, &k3, step);
            let k4 = rhs(t + step, &l4);
            for i in 0..2 {
                delta[i] += step / 6.0 * (k1.1[i] + 2.0 * k2.1[i] + 2.0 * k3.1[i] + k4.1[i]);
                for j in 0..2 {
                    lambda[i][j] += step / 6.0 * (k1.0[i][j] + 2.0 * k2.0[i][j] + 2.0 * k3.0[i][j] + k4.0[i][j]);
                }
            }
        }
    }
    let d = det(&lambda);
    if (d - 1.0).abs() > 1e-6 {
        return Err(TomoError::SymplecticityLost { det: d });
    }
    Ok(LinearInvariants { lambda, delta, t: t1 })
}

/// Invariants from `0` to `t`.
pub fn linear_invariants(h: &QuadraticHamiltonian, t: f64, dt: f64) -> Result<LinearInvariants> {
    linear_invariants_between(h, 0.0, t, dt)
}

/// Which closed form, if any, a propagator uses.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PropagatorKind {
    /// `H = p^2 / 2`: `Lambda = [[1, 0], [-t, 1]]`.
    FreeMotion,
    /// `H = (p^2 + q^2) / 2`: `Lambda = [[cos t, sin t], [-sin t, cos t]]`.
    Oscillator,
    /// Integrated invariants of a general quadratic Hamiltonian.
    Quadratic(LinearInvariants),
}

/// Tomographic propagator from `start` to `end`, realized as the pullback
/// `(X, mu, nu) -> (X + N Lambda^{-1} Delta, mu', nu')` with
/// `(nu', mu') = N Lambda^{-1}` and `N = (nu, mu)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TomographicPropagator {
    pub kind: PropagatorKind,
    pub start: f64,
    pub end: f64,
}

impl TomographicPropagator {
    pub fn free_motion(t: f64) -> Self {
        Self { kind: PropagatorKind::FreeMotion, start: 0.0, end: t }
    }

    pub fn oscillator(t: f64) -> Self {
        Self { kind: PropagatorKind::Oscillator, start: 0.0, end: t }
    }

    /// Integrates the invariants of `h` over `[start, end]`.
    pub fn quadratic(h: &QuadraticHamiltonian, start: f64, end: f64, dt: f64) -> Result<Self> {
        Ok(Self { kind: PropagatorKind::Quadratic(linear_invariants_between(h, start, end, dt)?), start, end })
    }

    /// Same propagator over `[start, start + duration]`; only meaningful
    /// for the time-independent closed forms.
    pub fn starting_at(self, start: f64) -> Self {
        Self { start, end: start + (self.end - self.start), ..self }
    }

    pub fn invariants(&self) -> LinearInvariants {
        let tau = self.end - self.start;
        match self.kind {
            PropagatorKind::FreeMotion => {
                LinearInvariants { lambda: [[1.0, 0.0], [-tau, 1.0]], delta: [0.0, 0.0], t: self.end }
            }
            PropagatorKind::Oscillator => {
                let (s, c) = tau.sin_cos();
                LinearInvariants { lambda: [[c, s], [-s, c]], delta: [0.0, 0.0], t: self.end }
            }
            PropagatorKind::Quadratic(inv) => inv,
        }
    }

    /// Pulled-back arguments `(X', mu', nu')`.
    pub fn pullback(&self, x: f64, mu: f64, nu: f64) -> (f64, f64, f64) {
        match self.kind {
            PropagatorKind::FreeMotion => (x, mu, nu + mu * (self.end - self.start)),
            PropagatorKind::Oscillator => {
                let (s, c) = (self.end - self.start).sin_cos();
                (x, mu * c - nu * s, nu * c + mu * s)
            }
            PropagatorKind::Quadratic(inv) => {
                let l = inv.lambda;
                let d = det(&l);
                // N Lambda^{-1} with Lambda^{-1} = [[l11, -l01], [-l10, l00]] / det
                let a = (nu * l[1][1] - mu * l[1][0]) / d;
                let b = (-nu * l[0][1] + mu * l[0][0]) / d;
                (x + a * inv.delta[0] + b * inv.delta[1], b, a)
            }
        }
    }
}

/// `w_t(X, mu, nu) = w_0(pullback(X, mu, nu))`.
pub fn propagate_tomogram(tomo: &AnalyticTomogram, prop: &TomographicPropagator) -> AnalyticTomogram {
    let label = format!("{}@t={}", tomo.label(), prop.end);
    if tomo.is_rotation_invariant() && prop.kind == PropagatorKind::Oscillator {
        return tomo.relabeled(label);
    }
    let inner = tomo.clone();
    let prop = *prop;
    AnalyticTomogram::new(label, move |x, mu, nu| {
        let (x0, mu0, nu0) = prop.pullback(x, mu, nu);
        inner.eval(x0, mu0, nu0)
    })
}

/// Chapman-Kolmogorov composition of `first` (`t1 -> t'`) and `second`
/// (`t' -> t2`).
///
/// With `Q(t1) = L_a Q(t') + D_a` and `Q(t') = L_b Q(t2) + D_b`, the
/// composite is `L = L_a L_b`, `D = L_a D_b + D_a`.
pub fn compose_propagators(
    first: &TomographicPropagator,
    second: &TomographicPropagator,
) -> Result<TomographicPropagator> {
    if (first.end - second.start).abs() > 1e-12 * (1.0 + first.end.abs()) {
        return Err(TomoError::TimeMismatch { end: first.end, start: second.start });
    }
    let a = first.invariants();
    let b = second.invariants();
    let lambda = mul(&a.lambda, &b.lambda);
    let shifted = apply(&a.lambda, &b.delta);
    Ok(TomographicPropagator {
        kind: PropagatorKind::Quadratic(LinearInvariants {
            lambda,
            delta: [shifted[0] + a.delta[0], shifted[1] + a.delta[1]],
            t: second.end,
        }),
        start: first.start,
        end: second.end,
    })
}

/// Classical transport `f_t(q, p) = f_0(q_0, p_0)` with
/// `(p_0, q_0) = Lambda (p, q) + Delta`.
pub fn liouville_evolve(f: &PhaseDensity, h: &QuadraticHamiltonian, t: f64, dt: f64) -> Result<PhaseDensity> {
    let inv = linear_invariants(h, t, dt)?;
    liouville_with(f, &inv)
}

fn liouville_with(f: &PhaseDensity, inv: &LinearInvariants) -> Result<PhaseDensity> {
    let (qg, pg) = (f.q_grid(), f.p_grid());
    let values = Array2::from_fn(qg.len(), pg.len(), |i, j| {
        let [p0, q0] = apply(&inv.lambda, &[pg.point(j), qg.point(i)]);
        bilinear(f.values(), qg, pg, q0 + inv.delta[1], p0 + inv.delta[0])
    });
    let before = f.mass();
    let after = integrate_2d(&values, qg, pg);
    let lost = (before - after) / before;
    if lost > 1e-3 {
        return Err(TomoError::BoundaryOutflow { lost });
    }
    PhaseDensity::new(*qg, *pg, values)
}

/// Grids for [`classical_quantum_agreement`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AgreementGrids {
    pub phase_space: Grid1D,
    pub x_out: Grid1D,
    pub angles: usize,
}

impl Default for AgreementGrids {
    fn default() -> Self {
        Self {
            phase_space: Grid1D::symmetric(8.0, 641).expect("valid grid"),
            x_out: Grid1D::symmetric(6.0, 241).expect("valid grid"),
            angles: 32,
        }
    }
}

/// Largest difference between the classical route (Liouville transport of
/// the coherent state's Gaussian density, then projection) and the quantum
/// route (oscillator pullback of the coherent tomogram).
pub fn classical_quantum_agreement(
    state: CoherentLabel,
    t: f64,
    grids: &AgreementGrids,
    cfg: &TransformConfig,
) -> Result<f64> {
    let g = grids.phase_space;
    let (q0, p0) = state.center();
    let f0 = PhaseDensity::from_fn(g, g, |q, p| (-(q - q0) * (q - q0) - (p - p0) * (p - p0)).exp() / PI);
    let prop = TomographicPropagator::oscillator(t);
    let ft = liouville_with(&f0, &prop.invariants())?;
    let phi = Grid1D::periodic(0.0, PI, grids.angles)?;
    let classical = classical_tomogram(&ft, &grids.x_out, &phi, cfg)?;
    let quantum = propagate_tomogram(&crate::analytic::coherent_tomogram(state), &prop).sample(&grids.x_out, &phi);
    Ok(classical.values().iter().zip(quantum.values().iter()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
}

/// Central-difference step of the residual checks.
pub const FD_STEP: f64 = 1e-4;

/// Sample points `(X, mu, nu)` of the residual checks.
pub fn standard_samples() -> Vec<(f64, f64, f64)> {
    let mut out = Vec::new();
    for &x in &[-1.7, -0.6, 0.0, 0.45, 1.2, 2.3] {
        for &(r, a) in &[(1.0, 0.3), (1.0, 2.1), (0.8, 4.0), (1.3, 5.5), (1.1, 1.0)] {
            let (s, c) = a.sin_cos();
            out.push((x, r * c, r * s));
        }
    }
    out
}

/// `max |mu dw/dnu - nu dw/dmu|` over [`standard_samples`].
pub fn stationarity_residual(tomo: &AnalyticTomogram) -> f64 {
    let h = FD_STEP;
    standard_samples()
        .into_iter()
        .map(|(x, mu, nu)| {
            let d_nu = (tomo.eval(x, mu, nu + h) - tomo.eval(x, mu, nu - h)) / (2.0 * h);
            let d_mu = (tomo.eval(x, mu + h, nu) - tomo.eval(x, mu - h, nu)) / (2.0 * h);
            (mu * d_nu - nu * d_mu).abs()
        })
        .fold(0.0, f64::max)
}

/// `max |dw/dt - mu dw/dnu + nu dw/dmu|` at time `t` for a family
/// `family(X, mu, nu, t)`.
pub fn oscillator_evolution_residual(family: impl Fn(f64, f64, f64, f64) -> f64, t: f64) -> f64 {
    let h = FD_STEP;
    standard_samples()
        .into_iter()
        .map(|(x, mu, nu)| {
            let d_t = (family(x, mu, nu, t + h) - family(x, mu, nu, t - h)) / (2.0 * h);
            let d_nu = (family(x, mu, nu + h, t) - family(x, mu, nu - h, t)) / (2.0 * h);
            let d_mu = (family(x, mu + h, nu, t) - family(x, mu - h, nu, t)) / (2.0 * h);
            (d_t - mu * d_nu + nu * d_mu).abs()
        })
        .fold(0.0, f64::max)
}

/// Oscillator pullback family of an initial tomogram.
pub fn oscillator_family(tomo: &AnalyticTomogram) -> impl Fn(f64, f64, f64, f64) -> f64 {
    let tomo = tomo.clone();
    move |x, mu, nu, t| {
        let (x0, mu0, nu0) = TomographicPropagator::oscillator(t).pullback(x, mu, nu);
        tomo.eval(x0, mu0, nu0)
    }
}

/// Pointwise eigenvalue estimates and their summary.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergyEstimate {
    pub values: Vec<f64>,
    pub mean: f64,
    pub variance: f64,
}

/// Magnitudes below this count as a node of the Fourier component.
pub const NODE_THRESHOLD: f64 = 1e-8;

/// Default sample set `(k, mu, nu)`; every point keeps `k^2 r^2 / 2` below
/// the first Laguerre zero for `n <= 5`.
pub fn energy_samples() -> Vec<(f64, f64, f64)> {
    let mut out = Vec::new();
    for &(k, r2, a) in &[
        (0.5, 0.5, 0.2),
        (0.5, 1.5, 1.3),
        (0.6, 1.0, 2.6),
        (0.55, 0.8, 3.9),
        (0.7, 0.6, 5.0),
        (0.5, 1.2, 0.7),
        (-0.6, 0.9, 4.4),
    ] {
        let r = r2.sqrt();
        let (s, c) = a.sin_cos();
        out.push((k, r * c, r * s));
    }
    out
}

/// Applies `-(1/2k^2)(d^2/dnu^2 + d^2/dmu^2) + k^2 (mu^2 + nu^2) / 8` to the
/// Fock Fourier component by central differences and divides by the
/// component.
pub fn oscillator_energy_estimate(n: FockLabel, sample: &[(f64, f64, f64)]) -> Result<EnergyEstimate> {
    if sample.is_empty() {
        return Err(TomoError::InvalidArgument("empty sample".into()));
    }
    let h = FD_STEP;
    let f =
        |k: f64, mu: f64, nu: f64| fock_tomogram_fourier(n, k, &SymplecticFrame::new(mu, nu).expect("nonzero frame"));
    let mut values = Vec::with_capacity(sample.len());
    for &(k, mu, nu) in sample {
        let r2 = mu * mu + nu * nu;
        if !(0.5..=3.0).contains(&k.abs()) || !(0.5..=4.0).contains(&r2) {
            return Err(TomoError::InvalidArgument(format!(
                "sample ({k}, {mu}, {nu}) outside |k| in [0.5, 3], mu^2 + nu^2 in [0.5, 4]"
            )));
        }
        let w = f(k, mu, nu);
        if w.abs() < NODE_THRESHOLD {
            return Err(TomoError::NearNode { value: w });
        }
        let lap = (f(k, mu, nu + h) + f(k, mu, nu - h) + f(k, mu + h, nu) + f(k, mu - h, nu) - 4.0 * w) / (h * h);
        values.push((-lap / (2.0 * k * k) + k * k * r2 / 8.0 * w) / w);
    }
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    let variance = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / values.len() as f64;
    Ok(EnergyEstimate { values, mean, variance })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &Mat2, b: &Mat2, tol: f64) -> bool {
        (0..2).all(|i| (0..2).all(|j| (a[i][j] - b[i][j]).abs() <= tol))
    }

    #[test]
    fn free_motion_invariants() {
        let inv = linear_invariants(&QuadraticHamiltonian::free(), 2.5, 1e-3).unwrap();
        assert!(close(&inv.lambda, &[[1.0, 0.0], [-2.5, 1.0]], 1e-12));
    }

    #[test]
    fn oscillator_invariants() {
        let t = 1.3f64;
        let inv = linear_invariants(&QuadraticHamiltonian::oscillator(), t, 1e-3).unwrap();
        let (s, c) = t.sin_cos();
        assert!(close(&inv.lambda, &[[c, s], [-s, c]], 1e-10));
    }

    #[test]
    fn zero_time_is_identity() {
        let inv = linear_invariants(&QuadraticHamiltonian::oscillator(), 0.0, 1e-3).unwrap();
        assert_eq!(inv.lambda, IDENTITY);
        assert_eq!(inv.delta, [0.0, 0.0]);
    }

    #[test]
    fn large_step_is_rejected() {
        assert!(linear_invariants(&QuadraticHamiltonian::free(), 1.0, 0.1).is_err());
    }

    #[test]
    fn mismatched_times() {
        let a = TomographicPropagator::free_motion(1.0);
        let b = TomographicPropagator::free_motion(1.0);
        assert_eq!(compose_propagators(&a, &b).unwrap_err().name(), "TimeMismatch");
    }

    #[test]
    fn ground_energy() {
        let e = oscillator_energy_estimate(FockLabel::new(0).unwrap(), &energy_samples()).unwrap();
        assert!((e.mean - 0.5).abs() < 1e-6, "{}", e.mean);
    }

    #[test]
    fn laguerre_node_is_reported() {
        // L_1(k^2 r^2 / 2) = 0 at k = 1, r^2 = 2
        let err = oscillator_energy_estimate(FockLabel::new(1).unwrap(), &[(1.0, 1.0, 1.0)]).unwrap_err();
        assert_eq!(err.name(), "NearNode");
    }
}
