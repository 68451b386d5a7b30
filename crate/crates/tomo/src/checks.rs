//! Named invariant checks run by `tomo check`.

use std::f64::consts::PI;

use clap::ValueEnum;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use tomo_core::analytic::{
    classical_point_tomogram, coherent_tomogram, fock_tomogram, fock_wavefunction, fock_wigner,
    white_noise_tomogram_pairing, CoherentLabel, FockLabel,
};
use tomo_core::evolution::{
    classical_quantum_agreement, compose_propagators, energy_samples, linear_invariants, oscillator_energy_estimate,
    oscillator_evolution_residual, oscillator_family, propagate_tomogram, stationarity_residual, AgreementGrids,
    QuadraticHamiltonian, TomographicPropagator,
};
use tomo_core::linalg::{adjoint, identity, matmul, max_abs_diff};
use tomo_core::spin::{
    reconstruct_spin_state, spin_tomogram, three_j_completeness_defect, three_j_coupling_defect, wigner_d,
    wigner_d_matrix, BetaNodes, EulerAngles, Half,
};
use tomo_core::statistics::{
    entropy, orthogonality_matrix, transition_probability, uncertainty_product, wigner_overlap,
};
use tomo_core::transforms::{
    phase_density_from_tomogram, tomogram_from_wavefunction, tomogram_from_wigner, wigner_from_tomogram,
};
use tomo_core::{Grid1D, SpinState, SymplecticFrame, TomoError, Tomogram, WignerGrid};

use crate::config::Config;

type Measured<T = f64> = Result<T, TomoError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    All,
    Cv,
    Spin,
    Evolution,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    /// `None` when the computation itself failed.
    pub value: Option<f64>,
    /// Target of a two-sided check; one-sided checks require
    /// `value <= tolerance`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected: Option<f64>,
    pub tolerance: f64,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl CheckResult {
    /// One human-readable line, e.g. `energy_n3: 3.5 ± 1e-4: pass`.
    pub fn line(&self) -> String {
        let verdict = if self.pass { "pass" } else { "FAIL" };
        match (self.value, self.expected, &self.error) {
            (_, _, Some(e)) => format!("{}: {e}: {verdict}", self.name),
            (Some(v), Some(_), _) => format!("{}: {} ± {}: {verdict}", self.name, compact(v), tol(self.tolerance)),
            (Some(v), None, _) => format!("{}: {v:.2e} ≤ {}: {verdict}", self.name, tol(self.tolerance)),
            (None, _, _) => format!("{}: {verdict}", self.name),
        }
    }
}

fn tol(t: f64) -> String {
    if t == 0.0 || (0.1..1e4).contains(&t.abs()) {
        format!("{t}")
    } else {
        format!("{t:e}")
    }
}

fn compact(v: f64) -> String {
    let s = format!("{v:.6}");
    let s = s.trim_end_matches('0');
    s.strip_suffix('.').unwrap_or(s).to_string()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub suite: Suite,
    pub seed: u64,
    pub pass: bool,
    pub checks: Vec<CheckResult>,
}

impl Report {
    pub fn failures(&self) -> usize {
        self.checks.iter().filter(|c| !c.pass).count()
    }
}

struct Checker<'a> {
    cfg: &'a Config,
    results: Vec<CheckResult>,
}

impl Checker<'_> {
    fn push(&mut self, name: &str, value: Measured, expected: Option<f64>, tolerance: f64) {
        let tolerance = self.cfg.tolerance(name, tolerance);
        let (value, pass, error) = match value {
            Ok(v) => {
                let pass = match expected {
                    Some(e) => (v - e).abs() <= tolerance,
                    None => v <= tolerance,
                };
                (Some(v), pass, None)
            }
            Err(e) => (None, false, Some(e.name().to_string())),
        };
        self.results.push(CheckResult { name: name.into(), value, expected, tolerance, pass, error });
    }

    /// Passes when `value <= tolerance`.
    fn bound(&mut self, name: &str, value: Measured, tolerance: f64) {
        self.push(name, value, None, tolerance);
    }

    /// Passes when `|value - expected| <= tolerance`.
    fn near(&mut self, name: &str, value: Measured, expected: f64, tolerance: f64) {
        self.push(name, value, Some(expected), tolerance);
    }
}

fn fock(n: u32) -> FockLabel {
    FockLabel::new(n).expect("library level")
}

fn coherent(re: f64, im: f64) -> CoherentLabel {
    CoherentLabel::new(Complex64::new(re, im)).expect("library amplitude")
}

fn grid(half: f64, n: usize) -> Grid1D {
    Grid1D::symmetric(half, n).expect("valid grid")
}

fn half_turn(n: usize) -> Grid1D {
    Grid1D::periodic(0.0, PI, n).expect("valid grid")
}

fn max_diff<'a>(a: impl Iterator<Item = &'a f64>, b: impl Iterator<Item = &'a f64>) -> f64 {
    a.zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn cv(c: &mut Checker) {
    let cfg = c.cfg;
    let anchor = (|| -> Measured {
        let psi = fock_wavefunction(fock(0), &grid(8.0, 512))?;
        let t = tomogram_from_wavefunction(&psi, &grid(1.0, 3), &Grid1D::new(PI / 2.0, PI, 2)?)?;
        Ok(t.column(0)[1])
    })();
    c.near("ground_anchor", anchor, PI.powf(-0.5), 1e-6);

    let closed = (|| -> Measured {
        let (wf, x, phi) = (grid(8.0, 2048), grid(6.0, 241), half_turn(64));
        let mut worst = 0.0f64;
        for n in 0..=5 {
            let numeric = tomogram_from_wavefunction(&fock_wavefunction(fock(n), &wf)?, &x, &phi)?;
            let exact = fock_tomogram(fock(n)).sample(&x, &phi);
            worst = worst.max(max_diff(numeric.values().iter(), exact.values().iter()));
        }
        Ok(worst)
    })();
    c.bound("fock_closed_form_n_le_5", closed, 1e-6);

    let states: Vec<Tomogram> = (0..4).map(|n| fock_tomogram(fock(n)).into()).collect();
    match orthogonality_matrix(&states, &cfg.overlap) {
        Ok(m) => {
            let g = grid(8.0, 401);
            let w: Vec<WignerGrid> =
                (0..4).map(|n| WignerGrid::from_fn(g, g, |q, p| fock_wigner(fock(n), q, p))).collect();
            let (mut ortho, mut cross) = (0.0f64, Ok(0.0f64));
            for i in 0..4 {
                for j in 0..4 {
                    let target = if i == j { 1.0 } else { 0.0 };
                    ortho = ortho.max((m[(i, j)] - target).abs());
                    cross = cross.and_then(|x: f64| Ok(x.max((m[(i, j)] - wigner_overlap(&w[i], &w[j])?).abs())));
                }
            }
            c.bound("orthogonality_fock_0_3", Ok(ortho), 1e-3);
            c.bound("overlap_routes_fock_0_3", cross, 1e-3);
        }
        Err(e) => {
            c.bound("orthogonality_fock_0_3", Err(e.clone()), 1e-3);
            c.bound("overlap_routes_fock_0_3", Err(e), 1e-3);
        }
    }

    let total = white_noise_tomogram_pairing(coherent(1.0, 0.0), 10, &cfg.overlap);
    c.bound("completeness_coherent_1", total.map(|s| 1.0 - s), 1e-3);
    let poisson = (|| -> Measured {
        let a: Tomogram = coherent_tomogram(coherent(1.0, 0.0)).into();
        let (mut factorial, mut worst) = (1.0, 0.0f64);
        for n in 0..=10u32 {
            factorial *= n.max(1) as f64;
            let p = transition_probability(&a, &fock_tomogram(fock(n)).into(), &cfg.overlap)?;
            worst = worst.max((p - (-1.0f64).exp() / factorial).abs());
        }
        Ok(worst)
    })();
    c.bound("poisson_coherent_1", poisson, 1e-3);

    let u = |t: Tomogram| uncertainty_product(&t, &cfg.slice);
    c.near("uncertainty_ground", u(fock_tomogram(fock(0)).into()), 0.25, 1e-6);
    c.near("uncertainty_coherent", u(coherent_tomogram(coherent(0.3, -1.2)).into()), 0.25, 1e-6);
    for n in 1..=3u32 {
        let e = n as f64 + 0.5;
        c.near(&format!("uncertainty_fock_{n}"), u(fock_tomogram(fock(n)).into()), e * e, 1e-4);
    }

    let radon = (|| -> Measured {
        let (x, phi) = (grid(8.0, 256), half_turn(128));
        let source = coherent_tomogram(coherent(1.0, 0.5)).sample(&x, &phi);
        let g = grid(6.0, 385);
        let w = wigner_from_tomogram(&source, &g, &g, &cfg.transform)?;
        let back = tomogram_from_wigner(&w, &x, &phi, &cfg.transform)?;
        Ok(relative_l2(back.values().iter(), source.values().iter()))
    })();
    c.bound("radon_round_trip_coherent", radon, 2e-2);

    let (x, phi) = (grid(8.0, 256), half_turn(128));
    let t = fock_tomogram(fock(1)).sample(&x, &phi);
    let g = grid(6.0, 121);
    let wmin = wigner_from_tomogram(&t, &g, &g, &cfg.transform)
        .map(|w| w.values().iter().copied().fold(f64::INFINITY, f64::min));
    c.bound("wigner_negativity_fock_1", wmin, -1e-2);
    let rejected = match phase_density_from_tomogram(&t, &g, &g, &cfg.transform) {
        Err(TomoError::NegativityDetected { .. }) => Ok(1.0),
        Err(e) => Err(e),
        Ok(_) => Ok(0.0),
    };
    c.near("classical_inversion_fock_1_rejected", rejected, 1.0, 0.0);

    let mut library = vec![coherent_tomogram(coherent(1.0, 0.5)), coherent_tomogram(coherent(-0.4, 1.3))];
    library.extend((0..=5).map(|n| fock_tomogram(fock(n))));
    let base = SymplecticFrame::new(0.8, -0.6).expect("nonzero frame");
    let (mut scaling, mut shift) = (0.0f64, 0.0f64);
    for s in &library {
        for &lambda in &[0.5, 2.0, -1.0] {
            for &(x, mu, nu) in &[(0.3, 1.0, 0.2), (-1.1, 0.4, 0.9), (2.2, -0.7, 1.5)] {
                let rhs = s.eval(x, mu, nu) / f64::abs(lambda);
                scaling = scaling.max((s.eval(lambda * x, lambda * mu, lambda * nu) - rhs).abs() / rhs.max(1e-300));
            }
            let t: Tomogram = s.clone().into();
            let scaled = base.scaled(lambda).expect("nonzero scale");
            shift = shift
                .max((entropy(&t, &scaled, &cfg.slice) - entropy(&t, &base, &cfg.slice) - f64::abs(lambda).ln()).abs());
        }
    }
    c.bound("homogeneity_scaling", Ok(scaling), 1e-12);
    c.bound("entropy_scaling", Ok(shift), 1e-6);
}

fn relative_l2<'a>(a: impl Iterator<Item = &'a f64>, b: impl Iterator<Item = &'a f64>) -> f64 {
    let (mut num, mut den) = (0.0, 0.0);
    for (x, y) in a.zip(b) {
        num += (x - y) * (x - y);
        den += y * y;
    }
    (num / den).sqrt()
}

/// `G G^dagger / tr` with `G` uniform in the complex unit square.
pub fn random_spin_state(rng: &mut ChaCha8Rng, j: Half) -> SpinState {
    let n = j.multiplicity();
    let entries: Vec<Complex64> =
        (0..n * n).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
    SpinState::from_gram(j, &entries).expect("nonzero Gram matrix")
}

fn spin(c: &mut Checker) {
    let half = Half::from_twice(1);
    let anchors = (|| -> Measured<(f64, f64)> {
        let alpha = Grid1D::periodic(0.0, 2.0 * PI, 4)?;
        let betas = BetaNodes::Uniform(Grid1D::new(0.0, PI, 9)?);
        let up = spin_tomogram(&SpinState::basis(half, half)?, &alpha, &betas)?;
        let (mut cos2, mut sin2) = (0.0f64, 0.0f64);
        for (b, beta) in betas.angles().into_iter().enumerate() {
            for a in 0..alpha.len() {
                cos2 = cos2.max((up.get(0, a, b) - (0.5 * beta).cos().powi(2)).abs());
                sin2 = sin2.max((up.get(1, a, b) - (0.5 * beta).sin().powi(2)).abs());
            }
        }
        Ok((cos2, sin2))
    })();
    c.bound("d3_spin_half_cos2", anchors.clone().map(|a| a.0), 1e-12);
    c.bound("d4_spin_half_sin2", anchors.map(|a| a.1), 1e-12);

    let mut rng = ChaCha8Rng::seed_from_u64(c.cfg.seed);
    let round = (|| -> Measured {
        let mut worst = 0.0f64;
        for twice in 1..=4 {
            let j = Half::from_twice(twice);
            let alpha = Grid1D::periodic(0.0, 2.0 * PI, 2 * twice as usize + 2)?;
            let beta = BetaNodes::GaussLegendre(twice as usize + 2);
            for _ in 0..20 {
                let state = random_spin_state(&mut rng, j);
                let back = reconstruct_spin_state(&spin_tomogram(&state, &alpha, &beta)?)?;
                worst = worst.max(max_abs_diff(back.rho(), state.rho()));
            }
        }
        Ok(worst)
    })();
    c.bound("spin_round_trip_random", round, 1e-10);

    let (mut coupling, mut completeness) = (0.0f64, 0.0f64);
    for j1 in 0..=4 {
        for j2 in 0..=4 {
            let (a, b) = (Half::from_twice(j1), Half::from_twice(j2));
            coupling = coupling.max(three_j_coupling_defect(a, b));
            completeness = completeness.max(three_j_completeness_defect(a, b));
        }
    }
    c.bound("three_j_coupling_orthogonality", Ok(coupling), 1e-12);
    c.bound("three_j_projection_completeness", Ok(completeness), 1e-12);

    let (mut unitary, mut symmetry) = (0.0f64, 0.0f64);
    for twice in 0..=5 {
        let j = Half::from_twice(twice);
        for _ in 0..20 {
            let angles =
                EulerAngles::new(rng.gen_range(0.0..2.0 * PI), rng.gen_range(0.0..PI), rng.gen_range(0.0..2.0 * PI))
                    .expect("angles in range");
            let d = wigner_d_matrix(j, &angles);
            unitary = unitary.max(max_abs_diff(&matmul(&d, &adjoint(&d)), &identity(d.rows())));
            for mp in j.projections() {
                for m in j.projections() {
                    let sign = if (mp - m).twice().rem_euclid(4) == 0 { 1.0 } else { -1.0 };
                    let lhs = wigner_d(j, mp, m, &angles).expect("valid indices").conj();
                    let rhs = wigner_d(j, -mp, -m, &angles).expect("valid indices") * sign;
                    symmetry = symmetry.max((lhs - rhs).norm());
                }
            }
        }
    }
    c.bound("d_unitarity", Ok(unitary), 1e-12);
    c.bound("d_conjugation_symmetry", Ok(symmetry), 1e-12);
}

fn evolution(c: &mut Checker) {
    let cfg = c.cfg;
    let mut variance = Ok(0.0f64);
    for n in 0..=3u32 {
        let est = oscillator_energy_estimate(fock(n), &energy_samples());
        c.near(&format!("energy_n{n}"), est.clone().map(|e| e.mean), n as f64 + 0.5, 1e-4);
        variance = variance.and_then(|v: f64| Ok(v.max(est?.variance)));
    }
    c.bound("energy_variance", variance, 1e-6);

    let stat = (0..=5).map(|n| stationarity_residual(&fock_tomogram(fock(n)))).fold(0.0, f64::max);
    c.bound("stationarity_fock_n_le_5", Ok(stat), 1e-6);
    let mut tie = 0.0f64;
    for &(re, im) in &[(1.0, 0.0), (0.5, -0.8)] {
        let family = oscillator_family(&coherent_tomogram(coherent(re, im)));
        for &t in &[0.3, 1.1, 2.5] {
            tie = tie.max(oscillator_evolution_residual(&family, t));
        }
    }
    c.bound("oscillator_equation_coherent", Ok(tie), 1e-5);

    let (x0, p0, t) = (1.0, 2.0, 1.0);
    let peaks = (|| -> Measured {
        let moved =
            propagate_tomogram(&classical_point_tomogram(x0, p0, 0.05)?, &TomographicPropagator::free_motion(t));
        let (x, phi) = (grid(8.0, 801), half_turn(16));
        let s = moved.sample(&x, &phi);
        let mut worst = 0.0f64;
        for (i, ph) in phi.points().enumerate() {
            let col = s.column(i);
            let k = (0..col.len()).max_by(|&a, &b| col[a].total_cmp(&col[b])).unwrap_or(0);
            let expected = ph.cos() * (x0 + p0 * t) + ph.sin() * p0;
            worst = worst.max((x.point(k) - expected).abs() / x.spacing());
        }
        Ok(worst)
    })();
    c.bound("free_point_peak_in_spacings", peaks, 1.0);

    let ode = (|| -> Measured {
        let mut worst = 0.0f64;
        for &t in &[0.5, 1.0, 2.7] {
            for (h, exact) in [
                (QuadraticHamiltonian::free(), TomographicPropagator::free_motion(t)),
                (QuadraticHamiltonian::oscillator(), TomographicPropagator::oscillator(t)),
            ] {
                let inv = linear_invariants(&h, t, cfg.ode_step)?;
                let exact = exact.invariants();
                for r in 0..2 {
                    for k in 0..2 {
                        worst = worst.max((inv.lambda[r][k] - exact.lambda[r][k]).abs());
                    }
                    worst = worst.max((inv.delta[r] - exact.delta[r]).abs());
                }
            }
        }
        Ok(worst)
    })();
    c.bound("invariants_ode_vs_closed_form", ode, 1e-8);

    let h = QuadraticHamiltonian::new(|t| [[1.0 + 0.3 * t.sin(), 0.2], [0.2, 0.5]], |t| [0.1 * t, -0.4]);
    c.bound("symplecticity", linear_invariants(&h, 10.0, cfg.ode_step).map(|i| (i.det() - 1.0).abs()), 1e-8);

    let probes = [(0.3, 1.0, 0.0), (-1.2, 0.4, 0.9), (2.0, -0.7, 1.3)];
    let ck = (|| -> Measured {
        let first = TomographicPropagator::quadratic(&QuadraticHamiltonian::oscillator(), 0.0, 0.7, cfg.ode_step)?;
        let composed = compose_propagators(&first, &TomographicPropagator::oscillator(1.2).starting_at(0.7))?;
        let direct = TomographicPropagator::oscillator(1.9);
        Ok(probes.iter().fold(0.0f64, |m, &(x, mu, nu)| {
            let (a, b) = (composed.pullback(x, mu, nu), direct.pullback(x, mu, nu));
            m.max((a.0 - b.0).abs()).max((a.1 - b.1).abs()).max((a.2 - b.2).abs())
        }))
    })();
    c.bound("chapman_kolmogorov", ck, 1e-8);
    let turn = TomographicPropagator::oscillator(2.0 * PI);
    let period = probes.iter().fold(0.0f64, |m, &(x, mu, nu)| {
        let a = turn.pullback(x, mu, nu);
        m.max((a.0 - x).abs()).max((a.1 - mu).abs()).max((a.2 - nu).abs())
    });
    c.bound("oscillator_period_2pi", Ok(period), 1e-10);

    for (label, t) in [("pi_4", PI / 4.0), ("pi_2", PI / 2.0), ("pi", PI)] {
        let d = classical_quantum_agreement(coherent(1.0, 0.0), t, &AgreementGrids::default(), &cfg.transform);
        c.bound(&format!("classical_quantum_agreement_t_{label}"), d, 1e-3);
    }
}

/// Runs `suite`; random states are drawn from `cfg.seed`.
pub fn run(suite: Suite, cfg: &Config) -> Report {
    let mut c = Checker { cfg, results: Vec::new() };
    if matches!(suite, Suite::All | Suite::Cv) {
        cv(&mut c);
    }
    if matches!(suite, Suite::All | Suite::Spin) {
        spin(&mut c);
    }
    if matches!(suite, Suite::All | Suite::Evolution) {
        evolution(&mut c);
    }
    Report { suite, seed: cfg.seed, pass: c.results.iter().all(|r| r.pass), checks: c.results }
}
