//! The verbs behind `tomo`.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use serde::{Deserialize, Serialize};
use tomo_core::evolution::{propagate_tomogram, Mat2, QuadraticHamiltonian, TomographicPropagator};
use tomo_core::spin::{reconstruct_spin_state, spin_tomogram, BetaNodes};
use tomo_core::statistics::transition_probability;
use tomo_core::transforms::{
    classical_tomogram, density_from_tomogram, phase_density_from_tomogram, tomogram_from_density,
    tomogram_from_wigner, wigner_from_tomogram,
};
use tomo_core::{Grid1D, OpticalSamples, SpinState, SpinTomogram, TomoError, Tomogram};

use crate::checks::{self, Report, Suite};
use crate::config::Config;
use crate::descriptor::StateDescriptor;
use crate::error::{CliError, CliResult};
use crate::io::{read_optical, read_spin_matrix, read_spin_tomogram, write_outputs, Manifest};

/// `X` nodes `-x_max, ..., x_max - h` with `h = 2 x_max / n`, so an even
/// count puts a node at the origin; angles `k pi / angles`.
pub fn optical_grids(cfg: &Config) -> CliResult<(Grid1D, Grid1D)> {
    let bad = |e: TomoError| CliError::input(format!("sampling grid: {e}"));
    if !(cfg.x_max > 0.0) || cfg.x_points < 2 {
        return Err(CliError::input("sampling grid needs x_max > 0 and at least two X points"));
    }
    let h = 2.0 * cfg.x_max / cfg.x_points as f64;
    let x = Grid1D::new(-cfg.x_max, cfg.x_max - h, cfg.x_points).map_err(bad)?;
    let phi = Grid1D::periodic(0.0, PI, cfg.angles).map_err(bad)?;
    Ok((x, phi))
}

fn symmetric(half_width: f64, points: usize, what: &str) -> CliResult<Grid1D> {
    Grid1D::symmetric(half_width, points).map_err(|e| CliError::input(format!("{what} grid: {e}")))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BetaLayout {
    /// Gauss-Legendre nodes in `cos beta`, needed for reconstruction.
    Gauss,
    /// Uniform polar angles including both poles.
    Uniform,
}

/// Spin tomogram sampling; zero counts pick the smallest exact layout.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SpinLayout {
    pub alpha_points: usize,
    pub beta_points: usize,
    pub beta: BetaLayout,
}

impl SpinLayout {
    pub fn from_config(cfg: &Config) -> Self {
        Self { alpha_points: cfg.spin_alpha_points, beta_points: cfg.spin_beta_points, beta: BetaLayout::Gauss }
    }

    fn nodes(&self, state: &SpinState) -> CliResult<(Grid1D, BetaNodes)> {
        let tw = state.j().twice() as usize;
        let na = if self.alpha_points == 0 { 2 * tw + 2 } else { self.alpha_points };
        let nb = if self.beta_points == 0 { tw + 2 } else { self.beta_points };
        let alpha = Grid1D::periodic(0.0, 2.0 * PI, na).map_err(|e| CliError::input(format!("alpha grid: {e}")))?;
        let beta = match self.beta {
            BetaLayout::Gauss => BetaNodes::GaussLegendre(nb),
            BetaLayout::Uniform => {
                BetaNodes::Uniform(Grid1D::new(0.0, PI, nb).map_err(|e| CliError::input(format!("beta grid: {e}")))?)
            }
        };
        Ok((alpha, beta))
    }
}

fn spin_state(desc: &StateDescriptor) -> CliResult<SpinState> {
    match desc {
        StateDescriptor::Spin { j, matrix } => read_spin_matrix(matrix, *j),
        other => Err(CliError::input(format!("{other} is not a spin state"))),
    }
}

fn write_spin_tomogram(
    state: &SpinState,
    desc: &StateDescriptor,
    layout: &SpinLayout,
    cfg: &Config,
    out: &Path,
) -> CliResult<Vec<PathBuf>> {
    let (alpha, beta) = layout.nodes(state)?;
    let t = spin_tomogram(state, &alpha, &beta)?;
    let m = Manifest::spin_tomogram(&t).with_seed(cfg.seed).with("state", desc.to_string());
    write_outputs(out, "spin_tomogram", &m)
}

/// Samples a library state: optical tomogram for oscillator states, spin
/// tomogram for `spin:` descriptors.
pub fn state(desc: &StateDescriptor, layout: &SpinLayout, cfg: &Config, out: &Path) -> CliResult<Vec<PathBuf>> {
    if let StateDescriptor::Spin { .. } = desc {
        return write_spin_tomogram(&spin_state(desc)?, desc, layout, cfg, out);
    }
    let (x, phi) = optical_grids(cfg)?;
    let samples = desc.analytic(cfg.point_width)?.sample(&x, &phi);
    let m = Manifest::optical(&samples).with_seed(cfg.seed).with("state", desc.to_string());
    write_outputs(out, "tomogram", &m)
}

pub fn spin_tomogram_cmd(
    desc: &StateDescriptor,
    layout: &SpinLayout,
    cfg: &Config,
    out: &Path,
) -> CliResult<Vec<PathBuf>> {
    write_spin_tomogram(&spin_state(desc)?, desc, layout, cfg, out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    /// Wigner function by filtered back-projection.
    Wigner,
    /// Density kernel in the position representation.
    Density,
    /// Classical phase-space density; quantum tomograms with negative
    /// inverses are rejected.
    Classical,
}

/// Round-trip diagnostic stored in reconstruction manifests.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RoundTrip {
    pub metric: &'static str,
    pub value: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<&'static str>,
}

impl RoundTrip {
    fn of(metric: &'static str, r: Result<f64, TomoError>) -> Self {
        match r {
            Ok(v) => Self { metric, value: Some(v), error: None },
            Err(e) => Self { metric, value: None, error: Some(e.name()) },
        }
    }
}

fn relative_l2(a: &[f64], b: &[f64]) -> f64 {
    let (mut num, mut den) = (0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        num += (x - y) * (x - y);
        den += y * y;
    }
    (num / den).sqrt()
}

/// Angles of `t` with `|sin phi| >= sin 0.4`, as one contiguous uniform run.
fn oblique_angles(t: &OpticalSamples) -> Result<Grid1D, TomoError> {
    let phi = t.phi_grid();
    let ok: Vec<usize> = (0..phi.len()).filter(|&i| phi.point(i).sin().abs() >= 0.4f64.sin()).collect();
    let first = *ok.first().ok_or(TomoError::InsufficientAngles { got: 0, need: 2 })?;
    let run = ok.iter().enumerate().take_while(|(k, &i)| i == first + k).count();
    Grid1D::new(phi.point(first), phi.point(first + run - 1), run)
}

fn density_round_trip(t: &OpticalSamples, rho: &tomo_core::DensityKernel, cfg: &Config) -> Result<f64, TomoError> {
    let phi = oblique_angles(t)?;
    let reach = (cfg.density_half_width - 1.0).min(t.x_grid().max()).max(0.5);
    let x = Grid1D::symmetric(reach, 51)?;
    let back = tomogram_from_density(rho, &x, &phi)?;
    let exact: Vec<f64> = phi.points().flat_map(|p| x.points().map(move |xv| t.eval_optical(xv, p))).collect();
    Ok(relative_l2(back.values().as_slice(), &exact))
}

/// Inverts an optical tomogram and reports how well the result projects
/// back onto the input.
pub fn reconstruct(input: &Path, mode: Mode, cfg: &Config, out: &Path) -> CliResult<Vec<PathBuf>> {
    let t = read_optical(input)?;
    let tc = &cfg.transform;
    let g = symmetric(cfg.phase_half_width, cfg.phase_points, "phase-space")?;
    let fine = symmetric(cfg.phase_half_width, cfg.round_trip_points, "round-trip")?;
    let (x, phi) = (t.x_grid(), t.phi_grid());
    let source = t.values().as_slice();
    let (manifest, stem, round) = match mode {
        Mode::Wigner => {
            let w = wigner_from_tomogram(&t, &g, &g, tc)?;
            let round = wigner_from_tomogram(&t, &fine, &fine, tc)
                .and_then(|wf| tomogram_from_wigner(&wf, x, phi, tc))
                .map(|b| relative_l2(b.values().as_slice(), source));
            (Manifest::wigner(&w), "wigner", RoundTrip::of("relative_l2", round))
        }
        Mode::Classical => {
            let f = phase_density_from_tomogram(&t, &g, &g, tc)?;
            let round = phase_density_from_tomogram(&t, &fine, &fine, tc)
                .and_then(|ff| classical_tomogram(&ff, x, phi, tc))
                .map(|b| relative_l2(b.values().as_slice(), source));
            (Manifest::phase_density(&f), "phase_density", RoundTrip::of("relative_l2", round))
        }
        Mode::Density => {
            let xo = symmetric(cfg.density_half_width, cfg.density_points, "density")?;
            let rho = density_from_tomogram(&t, &xo, tc)?;
            let round = density_round_trip(&t, &rho, cfg);
            (Manifest::density(&rho), "density", RoundTrip::of("relative_l2", round))
        }
    };
    let m = manifest.with_seed(cfg.seed).with("source", input.display().to_string()).with("round_trip", round);
    write_outputs(out, stem, &m)
}

/// Constant quadratic Hamiltonian `H = Q B Q / 2 + C Q`, `Q = (p, q)`.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HamiltonianFile {
    pub b: Mat2,
    #[serde(default)]
    pub c: [f64; 2],
}

#[derive(Debug, Clone, PartialEq)]
pub enum Hamiltonian {
    Free,
    Oscillator,
    Quadratic(PathBuf),
}

impl std::str::FromStr for Hamiltonian {
    type Err = std::convert::Infallible;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "free" => Self::Free,
            "oscillator" => Self::Oscillator,
            path => Self::Quadratic(PathBuf::from(path)),
        })
    }
}

impl Hamiltonian {
    fn name(&self) -> String {
        match self {
            Self::Free => "free".into(),
            Self::Oscillator => "oscillator".into(),
            Self::Quadratic(p) => p.display().to_string(),
        }
    }

    fn propagator(&self, t: f64, cfg: &Config) -> CliResult<TomographicPropagator> {
        Ok(match self {
            Self::Free => TomographicPropagator::free_motion(t),
            Self::Oscillator => TomographicPropagator::oscillator(t),
            Self::Quadratic(path) => {
                let text =
                    std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
                let h: HamiltonianFile =
                    serde_json::from_str(&text).map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
                if h.b.iter().flatten().chain(&h.c).any(|v| !v.is_finite()) {
                    return Err(CliError::input("Hamiltonian coefficients must be finite"));
                }
                TomographicPropagator::quadratic(&QuadraticHamiltonian::constant(h.b, h.c), 0.0, t, cfg.ode_step)?
            }
        })
    }
}

/// Evolves a library state for time `t` and records the invariants used.
pub fn evolve(desc: &StateDescriptor, h: &Hamiltonian, t: f64, cfg: &Config, out: &Path) -> CliResult<Vec<PathBuf>> {
    if !t.is_finite() {
        return Err(CliError::input("t must be finite"));
    }
    let tomo = desc.analytic(cfg.point_width)?;
    let prop = h.propagator(t, cfg)?;
    let (x, phi) = optical_grids(cfg)?;
    let samples = propagate_tomogram(&tomo, &prop).sample(&x, &phi);
    let inv = prop.invariants();
    let m = Manifest::optical(&samples)
        .with_seed(cfg.seed)
        .with("state", desc.to_string())
        .with("hamiltonian", h.name())
        .with("t", t)
        .with("lambda", inv.lambda)
        .with("delta", inv.delta);
    write_outputs(out, "tomogram", &m)
}

/// A descriptor, or a tomogram file when the argument is not one.
fn operand(s: &str, cfg: &Config) -> CliResult<Tomogram> {
    match s.parse::<StateDescriptor>() {
        Ok(d) => Ok(d.analytic(cfg.point_width)?.into()),
        Err(_) if Path::new(s).is_file() => Ok(read_optical(Path::new(s))?.into()),
        Err(e) => Err(e),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OverlapReport {
    pub states: [String; 2],
    pub probability: f64,
}

pub fn overlap(a: &str, b: &str, cfg: &Config) -> CliResult<OverlapReport> {
    let p = transition_probability(&operand(a, cfg)?, &operand(b, cfg)?, &cfg.overlap)?;
    Ok(OverlapReport { states: [a.to_string(), b.to_string()], probability: p })
}

/// Density matrix from a spin tomogram manifest, with the largest deviation
/// of its own tomogram from the input.
pub fn spin_reconstruct(input: &Path, cfg: &Config, out: &Path) -> CliResult<Vec<PathBuf>> {
    let t: SpinTomogram = read_spin_tomogram(input)?;
    let s = reconstruct_spin_state(&t)?;
    let round = spin_tomogram(&s, t.alpha_grid(), t.beta())
        .map(|b| b.values().iter().zip(t.values()).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max));
    let m = Manifest::spin_state(&s)
        .with_seed(cfg.seed)
        .with("source", input.display().to_string())
        .with("round_trip", RoundTrip::of("max_abs", round));
    write_outputs(out, "spin_density", &m)
}

pub fn check(suite: Suite, cfg: &Config) -> Report {
    checks::run(suite, cfg)
}
