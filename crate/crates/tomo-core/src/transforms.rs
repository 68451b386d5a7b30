//! Maps between wave functions, density kernels, Wigner functions, classical
//! phase-space densities and optical tomograms.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Result, TomoError};
use crate::grid::{bilinear, wrap, AngleCoverage, Array2, Grid1D};
use crate::linalg::hermitian_defect;
use crate::par;
use crate::special::composite_gauss_legendre;
use crate::states::{DensityKernel, OpticalSamples, PhaseDensity, WaveFunction, WignerGrid, NEGATIVITY_TOL};

/// Tunables of the transforms.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize), serde(default))]
pub struct TransformConfig {
    /// Fraction of the Nyquist frequency where the ramp filter starts its
    /// cosine roll-off.
    pub taper_start: f64,
    /// Frame-parameter cutoff of the density inversion.
    pub mu_cutoff: f64,
    pub mu_step: f64,
    /// Largest tolerated interpolation error estimate of a projection.
    pub projection_tolerance: f64,
    /// Back-projections exceeding this multiple of the bound `|W| <= 2`
    /// are rejected.
    pub ringing_factor: f64,
    /// Accepted ratio `min / max` of a classical phase-space density.
    pub negativity_tolerance: f64,
}

impl Default for TransformConfig {
    fn default() -> Self {
        Self {
            taper_start: 0.8,
            mu_cutoff: 12.0,
            mu_step: 0.05,
            projection_tolerance: 1e-4,
            ringing_factor: 10.0,
            negativity_tolerance: 1e-3,
        }
    }
}

/// Fewest distinct angles accepted by the inverse transforms.
pub const MIN_ANGLES: usize = 16;
/// Frames with `|sin phi|` below this are excluded from quadrature.
pub const DEGENERATE_BAND: f64 = 1e-6;

/// `Some(cos phi)` when `phi` is an exact multiple of `pi`.
fn axis_sign(phi: f64) -> Option<f64> {
    let k = phi / PI;
    if k.fract() == 0.0 {
        Some(if (k as i64).rem_euclid(2) == 0 { 1.0 } else { -1.0 })
    } else {
        None
    }
}

/// Four-point Lagrange stencil around `x`; `None` outside the grid.
fn cubic_stencil(grid: &Grid1D, x: f64) -> Option<(usize, [f64; 4])> {
    let n = grid.len();
    let s = grid.locate(x);
    if !(s >= 0.0 && s <= (n - 1) as f64) {
        return None;
    }
    if n < 4 {
        let i = (s.floor() as usize).min(n - 2);
        let t = s - i as f64;
        return Some((i, [1.0 - t, t, 0.0, 0.0]));
    }
    let i = (s.floor() as isize - 1).clamp(0, n as isize - 4) as usize;
    let t = s - i as f64;
    Some((
        i,
        [
            -(t - 1.0) * (t - 2.0) * (t - 3.0) / 6.0,
            t * (t - 2.0) * (t - 3.0) / 2.0,
            -t * (t - 1.0) * (t - 3.0) / 2.0,
            t * (t - 1.0) * (t - 2.0) / 6.0,
        ],
    ))
}

fn cubic_complex(grid: &Grid1D, values: &[Complex64], x: f64) -> Complex64 {
    match cubic_stencil(grid, x) {
        Some((i, w)) => (0..4).filter(|&k| i + k < values.len()).map(|k| values[i + k] * w[k]).sum(),
        None => Complex64::new(0.0, 0.0),
    }
}

/// Range of grid points where `magnitude` exceeds `1e-10` of its maximum.
fn support(grid: &Grid1D, magnitude: impl Fn(usize) -> f64) -> (f64, f64) {
    let n = grid.len();
    let peak = (0..n).map(&magnitude).fold(0.0, f64::max);
    let inside: Vec<usize> = (0..n).filter(|&i| magnitude(i) > 1e-10 * peak).collect();
    match (inside.first(), inside.last()) {
        (Some(&a), Some(&b)) => (grid.point(a), grid.point(b)),
        _ => (0.0, 0.0),
    }
}

/// Largest phase advance per step of `exp(i mu y^2 / (2 nu) - i y X / nu)`
/// over the support and the requested `X` range.
fn aliasing_guard(h: f64, supp: (f64, f64), x_out: &Grid1D, mu: f64, nu: f64) -> Result<()> {
    let mut advance = 0.0f64;
    for y in [supp.0, supp.1] {
        for x in [x_out.min(), x_out.max()] {
            advance = advance.max((mu * y - x).abs() * h / nu.abs());
        }
    }
    if advance > PI {
        return Err(TomoError::GridTooCoarse { estimate: advance, limit: PI });
    }
    Ok(())
}

fn collect_columns(cols: Vec<Result<Vec<f64>>>, x_out: &Grid1D, phi_grid: &Grid1D) -> Result<OpticalSamples> {
    let rows = cols.into_iter().collect::<Result<Vec<_>>>()?;
    OpticalSamples::new(*x_out, *phi_grid, Array2::from_rows(rows)?)
}

/// Optical tomogram of a pure state,
/// `w(X, phi) = |∫ psi(y) exp(i mu y^2/(2 nu) - i y X / nu) dy|^2 / (2 pi |nu|)`.
///
/// Angles that are exact multiples of `pi` use the position density
/// `|psi(X cos phi)|^2`; other angles with `|sin phi| < 1e-6` fail.
pub fn tomogram_from_wavefunction(psi: &WaveFunction, x_out: &Grid1D, phi_grid: &Grid1D) -> Result<OpticalSamples> {
    let grid = psi.x_grid();
    let v = psi.values();
    let h = grid.spacing();
    let supp = support(grid, |i| v[i].norm());
    let weights = grid.trapezoid_weights();
    let ys = grid.to_vec();
    let cols = par::map_indexed(phi_grid.len(), |i| -> Result<Vec<f64>> {
        let phi = phi_grid.point(i);
        if let Some(sign) = axis_sign(phi) {
            return Ok(x_out.points().map(|x| cubic_complex(grid, v, sign * x).norm_sqr()).collect());
        }
        let (nu, mu) = phi.sin_cos();
        if nu.abs() < DEGENERATE_BAND {
            return Err(TomoError::DegenerateFrame { phi });
        }
        aliasing_guard(h, supp, x_out, mu, nu)?;
        let chirp: Vec<Complex64> = ys
            .iter()
            .zip(v)
            .zip(&weights)
            .map(|((&y, &z), &w)| z * Complex64::from_polar(w, mu * y * y / (2.0 * nu)))
            .collect();
        let norm = 1.0 / (2.0 * PI * nu.abs());
        Ok(x_out
            .points()
            .map(|x| {
                let step = Complex64::from_polar(1.0, -h * x / nu);
                let mut phase = Complex64::from_polar(1.0, -ys[0] * x / nu);
                let mut acc = Complex64::new(0.0, 0.0);
                for c in &chirp {
                    acc += c * phase;
                    phase *= step;
                }
                acc.norm_sqr() * norm
            })
            .collect())
    });
    collect_columns(cols, x_out, phi_grid)
}

/// Optical tomogram of a density kernel,
/// `w = (1/(2 pi |nu|)) ∫∫ rho(Z, Z') exp(i mu (Z^2 - Z'^2)/(2 nu) - i X (Z - Z')/nu)`.
///
/// The double sum is grouped by index difference `Z - Z' = k h`, so each
/// `X` costs one pass over the `2n - 1` diagonals.
pub fn tomogram_from_density(rho: &DensityKernel, x_out: &Grid1D, phi_grid: &Grid1D) -> Result<OpticalSamples> {
    let grid = rho.x_grid();
    let n = grid.len();
    let h = grid.spacing();
    let m = rho.values();
    let supp = support(grid, |i| m[(i, i)].norm());
    let weights = grid.trapezoid_weights();
    let zs = grid.to_vec();
    let diag: Vec<Complex64> = (0..n).map(|i| m[(i, i)]).collect();
    let cols = par::map_indexed(phi_grid.len(), |i| -> Result<Vec<f64>> {
        let phi = phi_grid.point(i);
        if let Some(sign) = axis_sign(phi) {
            return Ok(x_out.points().map(|x| cubic_complex(grid, &diag, sign * x).re).collect());
        }
        let (nu, mu) = phi.sin_cos();
        if nu.abs() < DEGENERATE_BAND {
            return Err(TomoError::DegenerateFrame { phi });
        }
        aliasing_guard(h, supp, x_out, mu, nu)?;
        let chirp: Vec<Complex64> =
            zs.iter().zip(&weights).map(|(&z, &w)| Complex64::from_polar(w, mu * z * z / (2.0 * nu))).collect();
        // s_k = sum_{a - b = k} rho~_{ab}, k >= 0; negative k follow by conjugation
        let mut s = vec![Complex64::new(0.0, 0.0); n];
        for (k, sk) in s.iter_mut().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for b in 0..n - k {
                let a = b + k;
                acc += m[(a, b)] * chirp[a] * chirp[b].conj();
            }
            *sk = acc;
        }
        let norm = 1.0 / (2.0 * PI * nu.abs());
        Ok(x_out
            .points()
            .map(|x| {
                let step = Complex64::from_polar(1.0, -h * x / nu);
                let mut phase = step;
                let mut acc = 0.0;
                for sk in &s[1..] {
                    acc += (sk * phase).re;
                    phase *= step;
                }
                let v = (s[0].re + 2.0 * acc) * norm;
                // the sum is a squared modulus up to rounding
                if v < 0.0 && v > -NEGATIVITY_TOL {
                    0.0
                } else {
                    v
                }
            })
            .collect())
    });
    collect_columns(cols, x_out, phi_grid)
}

/// Line integrals `scale * ∫ F(X cos phi - P sin phi, X sin phi + P cos phi) dP`
/// of a gridded phase-space field.
fn project(
    values: &Array2<f64>,
    q_grid: &Grid1D,
    p_grid: &Grid1D,
    x_out: &Grid1D,
    phi_grid: &Grid1D,
    scale: f64,
    cfg: &TransformConfig,
) -> Result<OpticalSamples> {
    let (hq, hp) = (q_grid.spacing(), p_grid.spacing());
    let reach = q_grid.min().abs().max(q_grid.max().abs()).hypot(p_grid.min().abs().max(p_grid.max().abs()));
    let dp = hq.min(hp);
    let n_p = (2.0 * reach / dp).ceil() as usize + 1;
    let line = Grid1D::symmetric(reach, n_p.max(2))?;
    let lw = line.trapezoid_weights();
    let ps = line.to_vec();
    let cols = par::map_indexed(phi_grid.len(), |i| -> Vec<f64> {
        let (s, c) = phi_grid.point(i).sin_cos();
        x_out
            .points()
            .map(|x| {
                let mut acc = 0.0;
                for (p, w) in ps.iter().zip(&lw) {
                    acc += w * bilinear(values, q_grid, p_grid, x * c - p * s, x * s + p * c);
                }
                let v = acc * scale;
                if v < 0.0 && v >= -cfg.projection_tolerance {
                    0.0
                } else {
                    v
                }
            })
            .collect()
    });
    // a-posteriori interpolation error h^2/12 max|d^2 w / dX^2|
    let hmax = hq.max(hp);
    let hx = x_out.spacing();
    let mut curvature = 0.0f64;
    for col in &cols {
        for k in 1..col.len().saturating_sub(1) {
            curvature = curvature.max(((col[k + 1] - 2.0 * col[k] + col[k - 1]) / (hx * hx)).abs());
        }
    }
    let estimate = hmax * hmax / 12.0 * curvature;
    if estimate > cfg.projection_tolerance {
        return Err(TomoError::GridTooCoarse { estimate, limit: cfg.projection_tolerance });
    }
    OpticalSamples::new(*x_out, *phi_grid, Array2::from_rows(cols)?)
}

/// Optical tomogram of a Wigner function,
/// `w(X, phi) = ∫ W(X cos phi - P sin phi, X sin phi + P cos phi) dP / (2 pi)`.
pub fn tomogram_from_wigner(
    w: &WignerGrid,
    x_out: &Grid1D,
    phi_grid: &Grid1D,
    cfg: &TransformConfig,
) -> Result<OpticalSamples> {
    project(w.values(), w.q_grid(), w.p_grid(), x_out, phi_grid, 1.0 / (2.0 * PI), cfg)
}

/// Classical tomogram `w(X, mu, nu) = ∫ f(q, p) delta(mu q + nu p - X) dq dp`;
/// the same projection as [`tomogram_from_wigner`] with `f = W / (2 pi)`.
pub fn classical_tomogram(
    f: &PhaseDensity,
    x_out: &Grid1D,
    phi_grid: &Grid1D,
    cfg: &TransformConfig,
) -> Result<OpticalSamples> {
    project(f.values(), f.q_grid(), f.p_grid(), x_out, phi_grid, 1.0, cfg)
}

fn angle_layout(tomo: &OpticalSamples) -> Result<AngleCoverage> {
    let cov = AngleCoverage::of(tomo.phi_grid())
        .ok_or(TomoError::InvalidGrid("angle grid must cover a half or full turn uniformly"))?;
    if cov.distinct < MIN_ANGLES {
        return Err(TomoError::InsufficientAngles { got: cov.distinct, need: MIN_ANGLES });
    }
    Ok(cov)
}

/// Spatial ramp kernel `h(x) = (1/pi) ∫_0^K k T(k) cos(k x) dk` sampled at
/// the lags `m hx`, `K = pi / hx`, where `T` is one below
/// `taper_start * K` and rolls off as a raised cosine above.
fn ramp_kernel(n: usize, hx: f64, taper_start: f64) -> Vec<f64> {
    let k_nyq = PI / hx;
    let a = taper_start.clamp(0.0, 1.0) * k_nyq;
    let (nodes, weights) = composite_gauss_legendre(a, k_nyq, 64, 8);
    let taper: Vec<f64> =
        nodes.iter().zip(&weights).map(|(k, w)| w * k * 0.5 * (1.0 + (PI * (k - a) / (k_nyq - a)).cos())).collect();
    (0..n)
        .map(|m| {
            let x = m as f64 * hx;
            let flat = if m == 0 { 0.5 * a * a } else { a * (a * x).sin() / x + ((a * x).cos() - 1.0) / (x * x) };
            let rolled: f64 = nodes.iter().zip(&taper).map(|(k, t)| t * (k * x).cos()).sum();
            (flat + rolled) / PI
        })
        .collect()
}

/// `∫_0^pi dphi (w_phi * h)(q cos phi + p sin phi)`, the filtered
/// back-projection. With the Wigner normalization used here this is `W`.
fn back_project(tomo: &OpticalSamples, q_grid: &Grid1D, p_grid: &Grid1D, cfg: &TransformConfig) -> Result<Array2<f64>> {
    let cov = angle_layout(tomo)?;
    let xg = tomo.x_grid();
    let n = xg.len();
    let hx = xg.spacing();
    let kernel = ramp_kernel(n, hx, cfg.taper_start);
    let filtered = par::map_indexed(cov.distinct, |i| -> Vec<f64> {
        let w = tomo.column(i);
        (0..n).map(|s| hx * (0..n).map(|j| w[j] * kernel[s.abs_diff(j)]).sum::<f64>()).collect()
    });
    let trig: Vec<(f64, f64)> = (0..cov.distinct).map(|i| tomo.phi_grid().point(i).sin_cos()).collect();
    let weight = PI / cov.distinct as f64;
    let rows = par::map_indexed(q_grid.len(), |a| -> Vec<f64> {
        let q = q_grid.point(a);
        p_grid
            .points()
            .map(|p| {
                let mut acc = 0.0;
                for (g, (s, c)) in filtered.iter().zip(&trig) {
                    acc += xg.interpolate(g, q * c + p * s);
                }
                acc * weight
            })
            .collect()
    });
    Array2::from_rows(rows)
}

/// Wigner function from an optical tomogram by filtered back-projection.
pub fn wigner_from_tomogram(
    tomo: &OpticalSamples,
    q_grid: &Grid1D,
    p_grid: &Grid1D,
    cfg: &TransformConfig,
) -> Result<WignerGrid> {
    let values = back_project(tomo, q_grid, p_grid, cfg)?;
    let bound = 2.0 * cfg.ringing_factor;
    let peak = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if peak > bound {
        return Err(TomoError::RingingDetected { peak, bound });
    }
    WignerGrid::new(*q_grid, *p_grid, values)
}

/// Classical density from its tomogram; a quantum tomogram whose inverse
/// goes negative beyond the tolerance is rejected.
pub fn phase_density_from_tomogram(
    tomo: &OpticalSamples,
    q_grid: &Grid1D,
    p_grid: &Grid1D,
    cfg: &TransformConfig,
) -> Result<PhaseDensity> {
    let values = back_project(tomo, q_grid, p_grid, cfg)?.map(|v| v / (2.0 * PI));
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    if min < -cfg.negativity_tolerance * max {
        return Err(TomoError::NegativityDetected { ratio: min / max });
    }
    PhaseDensity::new(*q_grid, *p_grid, values.map(|v| v.max(0.0)))
}

/// Transform `∫ w(u, phi) e^{i r u} du` of one column.
fn column_transform(xs: &[f64], weights: &[f64], col: &[f64], r: f64) -> Complex64 {
    let h = if xs.len() > 1 { xs[1] - xs[0] } else { 0.0 };
    let step = Complex64::from_polar(1.0, r * h);
    let mut phase = Complex64::from_polar(1.0, r * xs[0]);
    let mut acc = Complex64::new(0.0, 0.0);
    for (w, v) in weights.iter().zip(col) {
        acc += phase * (w * v);
        phase *= step;
    }
    acc
}

/// `chi(mu, nu) = ∫ w(Y, mu, nu) e^{iY} dY`, which by homogeneity is the
/// optical transform at radius `r` and angle `atan2(nu, mu)`, linearly
/// interpolated between angle columns.
fn characteristic(
    tomo: &OpticalSamples,
    cov: &AngleCoverage,
    xs: &[f64],
    weights: &[f64],
    mu: f64,
    nu: f64,
) -> Complex64 {
    let r = mu.hypot(nu);
    let phi = nu.atan2(mu);
    let hphi = tomo.phi_grid().spacing();
    let mut d = wrap(phi - tomo.phi_grid().min(), 2.0 * PI);
    let mut flip = false;
    if cov.period < 2.0 * PI && d >= PI {
        d -= PI;
        flip = true;
    }
    let s = d / hphi;
    let i = (s.floor() as usize).min(cov.distinct - 1);
    let t = s - i as f64;
    let at = |col: usize, flipped: bool| {
        let z = column_transform(xs, weights, tomo.column(col), r);
        if flipped {
            z.conj()
        } else {
            z
        }
    };
    let lo = at(i, flip);
    if t < 1e-12 {
        return lo;
    }
    let hi = if i + 1 < cov.distinct {
        at(i + 1, flip)
    } else if cov.period < 2.0 * PI {
        at(0, !flip)
    } else {
        at(0, flip)
    };
    lo * (1.0 - t) + hi * t
}

/// Density kernel from an optical tomogram,
/// `rho(X, X') = (1/2pi) ∫ dmu chi(mu, X - X') exp(-i mu (X + X')/2)`.
pub fn density_from_tomogram(tomo: &OpticalSamples, x_out: &Grid1D, cfg: &TransformConfig) -> Result<DensityKernel> {
    let cov = angle_layout(tomo)?;
    let xg = tomo.x_grid();
    let xs = xg.to_vec();
    let weights = xg.trapezoid_weights();
    let n = x_out.len();
    let h = x_out.spacing();
    let n_mu = (2.0 * cfg.mu_cutoff / cfg.mu_step).round() as usize + 1;
    let mu_grid = Grid1D::symmetric(cfg.mu_cutoff, n_mu.max(2))?;
    let mu_w = mu_grid.trapezoid_weights();
    let mus = mu_grid.to_vec();
    // chi rows indexed by k + n - 1 for nu = k h, k in -(n-1)..=(n-1)
    let chi = par::map_indexed(2 * n - 1, |row| -> Vec<Complex64> {
        let nu = (row as f64 - (n - 1) as f64) * h;
        mus.iter()
            .map(|&mu| {
                if mu == 0.0 && nu == 0.0 {
                    Complex64::new(xg.integrate(tomo.column(0)), 0.0)
                } else {
                    characteristic(tomo, &cov, &xs, &weights, mu, nu)
                }
            })
            .collect()
    });
    let xo = x_out.to_vec();
    let rows = par::map_indexed(n, |a| -> Vec<Complex64> {
        (0..n)
            .map(|b| {
                let c = &chi[a + n - 1 - b];
                let centre = 0.5 * (xo[a] + xo[b]);
                let step = Complex64::from_polar(1.0, -mu_grid.spacing() * centre);
                let mut phase = Complex64::from_polar(1.0, -mus[0] * centre);
                let mut acc = Complex64::new(0.0, 0.0);
                for (z, w) in c.iter().zip(&mu_w) {
                    acc += z * phase * *w;
                    phase *= step;
                }
                acc / (2.0 * PI)
            })
            .collect()
    });
    let raw = Array2::from_rows(rows)?;
    let asymmetry = hermitian_defect(&raw);
    if asymmetry > 1e-3 {
        return Err(TomoError::NonHermitianResult { asymmetry });
    }
    let values = Array2::from_fn(n, n, |a, b| 0.5 * (raw[(a, b)] + raw[(b, a)].conj()));
    check_positive(&values)?;
    DensityKernel::new(*x_out, values)
}

/// Rejects kernels with markedly negative diagonal or a `2x2` principal
/// minor `rho_aa rho_bb - |rho_ab|^2` clearly below zero.
fn check_positive(values: &Array2<Complex64>) -> Result<()> {
    let n = values.rows();
    let diag: Vec<f64> = (0..n).map(|i| values[(i, i)].re).collect();
    let dmax = diag.iter().copied().fold(0.0, f64::max);
    if !(dmax > 0.0) {
        return Err(TomoError::NotPositive { excess: 1.0 });
    }
    let scale = dmax * dmax;
    let mut excess = 0.0f64;
    for a in 0..n {
        excess = excess.max(-diag[a] / dmax);
        for b in 0..a {
            let minor = values[(a, b)].norm_sqr() - diag[a].max(0.0) * diag[b].max(0.0);
            excess = excess.max(minor / scale);
        }
    }
    if excess > 1e-2 {
        return Err(TomoError::NotPositive { excess });
    }
    Ok(())
}

/// Wigner function of a density kernel,
/// `W(q, p) = 2 ∫ rho(x, 2q - x) exp(-2ip(x - q)) dx`.
///
/// The second argument is exact for `q` on the half-lattice of the kernel
/// grid and cubic-interpolated otherwise.
pub fn wigner_from_density(rho: &DensityKernel, q_grid: &Grid1D, p_grid: &Grid1D) -> Result<WignerGrid> {
    let xg = rho.x_grid();
    let n = xg.len();
    let h = xg.spacing();
    let m = rho.values();
    let weights = xg.trapezoid_weights();
    let xs = xg.to_vec();
    let rows = par::map_indexed(q_grid.len(), |a| -> (Vec<f64>, f64) {
        let q = q_grid.point(a);
        let r: Vec<Complex64> = (0..n)
            .map(|k| {
                let y = 2.0 * q - xs[k];
                let v = match xg.node_of(y, 1e-9) {
                    Some(j) => m[(k, j)],
                    None => cubic_complex(xg, m.row(k), y),
                };
                v * weights[k]
            })
            .collect();
        let mut residue = 0.0f64;
        let row = p_grid
            .points()
            .map(|p| {
                let step = Complex64::from_polar(1.0, -2.0 * p * h);
                let mut phase = Complex64::from_polar(1.0, -2.0 * p * (xs[0] - q));
                let mut acc = Complex64::new(0.0, 0.0);
                for z in &r {
                    acc += z * phase;
                    phase *= step;
                }
                residue = residue.max(2.0 * acc.im.abs());
                2.0 * acc.re
            })
            .collect();
        (row, residue)
    });
    let residue = rows.iter().map(|r| r.1).fold(0.0, f64::max);
    if residue > 1e-6 {
        return Err(TomoError::ComplexResidue { residue });
    }
    WignerGrid::new(*q_grid, *p_grid, Array2::from_rows(rows.into_iter().map(|r| r.0).collect())?)
}
