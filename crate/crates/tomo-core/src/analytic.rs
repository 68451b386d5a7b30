//! Closed-form oscillator states: Fock and coherent tomograms, their wave
//! functions and Wigner functions, and mollified classical point states.

use alloc::format;
use core::f64::consts::{PI, SQRT_2};

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Result, TomoError};
use crate::grid::Grid1D;
use crate::special::{hermite_function, laguerre};
use crate::states::{AnalyticTomogram, SymplecticFrame, Tomogram, WaveFunction};
use crate::statistics::{CharacteristicTable, OverlapQuadrature};

/// Oscillator level `n <= 64`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FockLabel(u32);

impl FockLabel {
    pub const MAX: u32 = 64;

    pub fn new(n: u32) -> Result<Self> {
        if n > Self::MAX {
            return Err(TomoError::InvalidLabel(format!("Fock level {n} exceeds {}", Self::MAX)));
        }
        Ok(Self(n))
    }

    pub fn n(self) -> u32 {
        self.0
    }
}

/// Coherent amplitude with `|alpha| <= 8`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoherentLabel(Complex64);

impl CoherentLabel {
    pub const MAX_MODULUS: f64 = 8.0;

    pub fn new(alpha: Complex64) -> Result<Self> {
        if !(alpha.norm() <= Self::MAX_MODULUS) {
            return Err(TomoError::InvalidLabel(format!("coherent amplitude |{alpha}| exceeds {}", Self::MAX_MODULUS)));
        }
        Ok(Self(alpha))
    }

    pub fn alpha(self) -> Complex64 {
        self.0
    }

    /// Phase-space centre `(q0, p0) = sqrt(2) (Re alpha, Im alpha)`.
    pub fn center(self) -> (f64, f64) {
        (SQRT_2 * self.0.re, SQRT_2 * self.0.im)
    }
}

/// `w_n(X, mu, nu) = psi_n(X / r)^2 / r` with `r^2 = mu^2 + nu^2`.
pub fn fock_tomogram(n: FockLabel) -> AnalyticTomogram {
    let n = n.n();
    AnalyticTomogram::new(format!("fock:{n}"), move |x, mu, nu| {
        let r = mu.hypot(nu);
        let psi = hermite_function(n, x / r);
        psi * psi / r
    })
    .with_rotation_invariance()
}

/// `(1/2pi) exp(-k^2 r^2 / 4) L_n(k^2 r^2 / 2)`, the `X`-Fourier component
/// of the Fock tomogram.
pub fn fock_tomogram_fourier(n: FockLabel, k: f64, frame: &SymplecticFrame) -> f64 {
    let s = k * k * (frame.mu() * frame.mu() + frame.nu() * frame.nu());
    (-0.25 * s).exp() * laguerre(n.n(), 0.5 * s) / (2.0 * PI)
}

/// Coherent-state exponent, evaluated term by term in complex arithmetic.
fn coherent_exponent(alpha: Complex64, x: f64, mu: f64, nu: f64) -> Complex64 {
    let r2 = mu * mu + nu * nu;
    let i = Complex64::i();
    let zp = Complex64::new(nu, mu);
    let zm = Complex64::new(nu, -mu);
    let ac = alpha.conj();
    -alpha.norm_sqr() - x * x / r2 + alpha * alpha * zp * zp / (2.0 * r2) + ac * ac * zm * zm / (2.0 * r2)
        - i * SQRT_2 * alpha * x * zp / r2
        + i * SQRT_2 * ac * x * zm / r2
}

/// Coherent-state tomogram; Gaussian in `X` with mean
/// `sqrt(2) (Re alpha mu + Im alpha nu)` and variance `(mu^2 + nu^2) / 2`.
pub fn coherent_tomogram(a: CoherentLabel) -> AnalyticTomogram {
    let alpha = a.alpha();
    AnalyticTomogram::new(format!("coherent:{},{}", alpha.re, alpha.im), move |x, mu, nu| {
        let e = coherent_exponent(alpha, x, mu, nu);
        debug_assert!(e.im.abs() <= 1e-12 * (1.0 + e.norm()), "imaginary residue {}", e.im);
        e.re.exp() / (PI * (mu * mu + nu * nu)).sqrt()
    })
}

/// Normalized oscillator eigenfunction on `grid`; the grid must reach the
/// classical turning points with a factor-two margin.
pub fn fock_wavefunction(n: FockLabel, grid: &Grid1D) -> Result<WaveFunction> {
    let required = 2.0 * (2.0 * n.n() as f64 + 1.0).sqrt();
    if grid.min() > -required || grid.max() < required {
        return Err(TomoError::GridTooNarrow { required });
    }
    Ok(WaveFunction::from_fn(*grid, |y| Complex64::new(hermite_function(n.n(), y), 0.0)))
}

/// Coherent-state wave function
/// `pi^{-1/4} exp(-(y - q0)^2 / 2 + i p0 y - i q0 p0 / 2)`.
pub fn coherent_wavefunction(a: CoherentLabel, grid: &Grid1D) -> WaveFunction {
    let (q0, p0) = a.center();
    WaveFunction::from_fn(*grid, |y| {
        let amp = PI.powf(-0.25) * (-0.5 * (y - q0) * (y - q0)).exp();
        Complex64::from_polar(amp, p0 * y - 0.5 * q0 * p0)
    })
}

/// `W_n(q, p) = 2 (-1)^n L_n(2(q^2 + p^2)) exp(-(q^2 + p^2))`.
pub fn fock_wigner(n: FockLabel, q: f64, p: f64) -> f64 {
    let r2 = q * q + p * p;
    let sign = if n.n().is_multiple_of(2) { 1.0 } else { -1.0 };
    2.0 * sign * laguerre(n.n(), 2.0 * r2) * (-r2).exp()
}

/// `W_alpha(q, p) = 2 exp(-(q - q0)^2 - (p - p0)^2)`.
pub fn coherent_wigner(a: CoherentLabel, q: f64, p: f64) -> f64 {
    let (q0, p0) = a.center();
    2.0 * (-(q - q0) * (q - q0) - (p - p0) * (p - p0)).exp()
}

/// Mollified point state: Gaussian of width `eps r` centred at
/// `mu x0 + nu p0`.
pub fn classical_point_tomogram(x0: f64, p0: f64, eps: f64) -> Result<AnalyticTomogram> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(TomoError::InvalidArgument(format!("mollifier width {eps} must be positive")));
    }
    Ok(AnalyticTomogram::new(format!("classical-point:{x0},{p0},{eps}"), move |x, mu, nu| {
        let sigma = eps * mu.hypot(nu);
        let d = (x - mu * x0 - nu * p0) / sigma;
        (-0.5 * d * d).exp() / ((2.0 * PI).sqrt() * sigma)
    }))
}

/// `sum_{n <= n_max} P(alpha -> n)` through the tomographic overlap; tends to
/// 1 as `n_max` grows.
pub fn white_noise_tomogram_pairing(alpha: CoherentLabel, n_max: u32, quad: &OverlapQuadrature) -> Result<f64> {
    let coherent = CharacteristicTable::new(&Tomogram::Analytic(coherent_tomogram(alpha)), quad)?;
    let mut total = 0.0;
    for n in 0..=n_max {
        let fock = CharacteristicTable::new(&Tomogram::Analytic(fock_tomogram(FockLabel::new(n)?)), quad)?;
        total += coherent.overlap(&fock)?;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::ln_factorial;

    #[test]
    fn fock_zero_is_ground_form() {
        let w = fock_tomogram(FockLabel::new(0).unwrap());
        for &(x, mu, nu) in &[(0.0, 1.0, 0.0), (0.7, 0.6, 0.8), (-1.3, 2.0, -0.5)] {
            let r2: f64 = mu * mu + nu * nu;
            let ground = (-x * x / r2).exp() / (PI * r2).sqrt();
            assert!((w.eval(x, mu, nu) - ground).abs() < 1e-15);
        }
    }

    #[test]
    fn fock_matches_hermite_closed_form() {
        for n in 0..8u32 {
            let w = fock_tomogram(FockLabel::new(n).unwrap());
            let (x, mu, nu) = (0.9, 0.6, 1.1);
            let r2: f64 = mu * mu + nu * nu;
            let y = x / r2.sqrt();
            let h = crate::special::hermite(n, y);
            let closed =
                (PI * r2).powf(-0.5) * (-(n as f64) * 2f64.ln() - ln_factorial(n)).exp() * (-y * y).exp() * h * h;
            assert!((w.eval(x, mu, nu) - closed).abs() < 1e-13, "n = {n}");
        }
    }

    #[test]
    fn coherent_vacuum_is_ground() {
        let c = coherent_tomogram(CoherentLabel::new(Complex64::new(0.0, 0.0)).unwrap());
        let f = fock_tomogram(FockLabel::new(0).unwrap());
        for &(x, mu, nu) in &[(0.0, 1.0, 0.0), (0.4, -0.3, 0.9), (2.1, 1.5, 1.5)] {
            assert!((c.eval(x, mu, nu) - f.eval(x, mu, nu)).abs() <= 1e-16);
        }
    }

    #[test]
    fn coherent_peak_value() {
        let c = coherent_tomogram(CoherentLabel::new(Complex64::new(1.0, 0.0)).unwrap());
        assert!((c.eval(SQRT_2, 1.0, 0.0) - PI.powf(-0.5)).abs() < 1e-15);
    }

    #[test]
    fn labels_are_bounded() {
        assert!(FockLabel::new(65).is_err());
        assert!(CoherentLabel::new(Complex64::new(8.5, 0.0)).is_err());
    }

    #[test]
    fn narrow_grid_is_rejected() {
        let g = Grid1D::symmetric(3.0, 64).unwrap();
        assert!(matches!(fock_wavefunction(FockLabel::new(3).unwrap(), &g), Err(TomoError::GridTooNarrow { .. })));
    }

    #[test]
    fn fourier_component_at_zero() {
        let frame = SymplecticFrame::new(0.3, 1.7).unwrap();
        for n in 0..10 {
            let v = fock_tomogram_fourier(FockLabel::new(n).unwrap(), 0.0, &frame);
            assert!((v - 1.0 / (2.0 * PI)).abs() < 1e-16);
        }
    }
}
