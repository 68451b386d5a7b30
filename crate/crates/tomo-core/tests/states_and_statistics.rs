use std::f64::consts::{E, PI, SQRT_2};

use num_complex::Complex64;
use tomo_core::analytic::{
    classical_point_tomogram, coherent_tomogram, fock_tomogram, fock_tomogram_fourier, fock_wavefunction,
    white_noise_tomogram_pairing, CoherentLabel, FockLabel,
};
use tomo_core::special::{composite_gauss_legendre, laguerre};
use tomo_core::statistics::{
    entropy, moment, orthogonality_matrix, transition_probability, uncertainty_product, OverlapQuadrature,
};
use tomo_core::{Grid1D, SliceQuadrature, SymplecticFrame, Tomogram, Validate};

fn fock(n: u32) -> FockLabel {
    FockLabel::new(n).unwrap()
}

fn alpha(re: f64, im: f64) -> CoherentLabel {
    CoherentLabel::new(Complex64::new(re, im)).unwrap()
}

fn library() -> Vec<Tomogram> {
    let mut out: Vec<Tomogram> = (0..=5).map(|n| fock_tomogram(fock(n)).into()).collect();
    for &(re, im) in &[(0.0, 0.0), (1.0, 0.0), (0.5, -1.5), (-2.0, 1.0)] {
        out.push(coherent_tomogram(alpha(re, im)).into());
    }
    out
}

#[test]
fn fock_three_from_laguerre_integral() {
    // w_n(X, mu, nu) = ∫ dk e^{-ikX} (1/2pi) e^{-k^2 r^2/4} L_n(k^2 r^2/2)
    let (x, mu, nu) = (1.0, 0.6, 0.8);
    let r2: f64 = mu * mu + nu * nu;
    let (k, w) = composite_gauss_legendre(0.0, 20.0, 200, 8);
    let integral: f64 = k
        .iter()
        .zip(&w)
        .map(|(k, w)| w * 2.0 * (k * x).cos() * (-k * k * r2 / 4.0).exp() * laguerre(3, k * k * r2 / 2.0))
        .sum::<f64>()
        / (2.0 * PI);
    assert!((fock_tomogram(fock(3)).eval(x, mu, nu) - integral).abs() < 1e-8);
}

#[test]
fn fourier_component_values() {
    let frame = SymplecticFrame::optical(0.7);
    let v = fock_tomogram_fourier(fock(0), 2.0, &frame);
    assert!((v - (-1.0f64).exp() / (2.0 * PI)).abs() < 1e-15);

    let (k, frame) = (1.3, SymplecticFrame::position());
    let t = fock_tomogram(fock(2));
    let (xs, ws) = composite_gauss_legendre(-12.0, 12.0, 96, 8);
    let numeric: f64 =
        xs.iter().zip(&ws).map(|(x, w)| w * (k * x).cos() * t.eval(*x, 1.0, 0.0)).sum::<f64>() / (2.0 * PI);
    assert!((fock_tomogram_fourier(fock(2), k, &frame) - numeric).abs() < 1e-8);
}

#[test]
fn fock_columns_are_phase_independent() {
    let x = Grid1D::symmetric(8.0, 256).unwrap();
    let phi = Grid1D::periodic(0.0, PI, 16).unwrap();
    for n in 0..=5 {
        let s = fock_tomogram(fock(n)).sample(&x, &phi);
        for i in 1..phi.len() {
            for (a, b) in s.column(i).iter().zip(s.column(0)) {
                assert!((a - b).abs() < 1e-12);
            }
        }
        assert!(s.validate().is_empty(), "n = {n}: {:?}", s.validate());
    }
}

#[test]
fn sampled_library_states_are_valid() {
    let x = Grid1D::symmetric(8.0, 256).unwrap();
    let phi = Grid1D::periodic(0.0, PI, 16).unwrap();
    for t in library() {
        let a = t.as_analytic().unwrap();
        assert!(a.validate().is_empty(), "{}: {:?}", a.label(), a.validate());
        assert!(a.sample(&x, &phi).validate().is_empty(), "{}", a.label());
    }
}

#[test]
fn wavefunctions_are_orthonormal() {
    let grid = Grid1D::symmetric(10.0, 1001).unwrap();
    let psis: Vec<_> = (0..=5).map(|n| fock_wavefunction(fock(n), &grid).unwrap()).collect();
    for (n, a) in psis.iter().enumerate() {
        assert!(a.validate().is_empty());
        for (m, b) in psis.iter().enumerate() {
            let target = if n == m { 1.0 } else { 0.0 };
            assert!((a.inner(b).unwrap() - target).norm() < 1e-10);
        }
    }
    let ground = &psis[0];
    assert!((ground.values()[500].re - PI.powf(-0.25)).abs() < 1e-15);
    assert!(psis[1].values()[500].norm() < 1e-15);
}

#[test]
fn point_state_peaks() {
    let t = classical_point_tomogram(1.0, 2.0, 0.05).unwrap();
    let x = Grid1D::symmetric(4.0, 801).unwrap();
    let peak = |phi: f64| {
        let f = SymplecticFrame::optical(phi);
        x.points().max_by(|a, b| t.eval(*a, f.mu(), f.nu()).total_cmp(&t.eval(*b, f.mu(), f.nu()))).unwrap()
    };
    assert!((peak(0.0) - 1.0).abs() < 1e-9);
    assert!((peak(PI / 2.0) - 2.0).abs() < 1e-9);
    for &phi in &[0.0, 1.0, 2.5] {
        let m0 = moment(&t.clone().into(), &SymplecticFrame::optical(phi), 0, &SliceQuadrature::default()).unwrap();
        assert!((m0 - 1.0).abs() < 1e-10);
    }
}

#[test]
fn pairing_values() {
    let quad = OverlapQuadrature::default();
    let vacuum = white_noise_tomogram_pairing(alpha(0.0, 0.0), 0, &quad).unwrap();
    assert!((vacuum - 1.0).abs() < 1e-6);
    let one = white_noise_tomogram_pairing(alpha(1.0, 0.0), 10, &quad).unwrap();
    let poisson: f64 = (0..=10).map(|n| (-1.0f64).exp() / (1..=n).product::<u64>() as f64).sum();
    assert!(one >= poisson - 1e-6);
    let two = white_noise_tomogram_pairing(alpha(2.0, 0.0), 2, &quad).unwrap();
    assert!((two - (-4.0f64).exp() * (1.0 + 4.0 + 8.0)).abs() < 1e-3, "{two}");
}

#[test]
fn moments_of_library_states() {
    let quad = SliceQuadrature::default();
    for t in library() {
        for &phi in &[0.0, 0.9, 2.2] {
            let m0 = moment(&t, &SymplecticFrame::optical(phi), 0, &quad).unwrap();
            assert!((m0 - 1.0).abs() < 1e-3);
        }
    }
    for n in 0..=5 {
        let m1 = moment(&fock_tomogram(fock(n)).into(), &SymplecticFrame::new(0.3, -1.1).unwrap(), 1, &quad).unwrap();
        assert!(m1.abs() < 1e-12);
    }
    let point: Tomogram = classical_point_tomogram(1.0, 2.0, 0.05).unwrap().into();
    assert!((moment(&point, &SymplecticFrame::position(), 1, &quad).unwrap() - 1.0).abs() < 1e-10);
    let c: Tomogram = coherent_tomogram(alpha(1.0, 0.0)).into();
    assert!((moment(&c, &SymplecticFrame::position(), 1, &quad).unwrap() - SQRT_2).abs() < 1e-10);
}

#[test]
fn entropy_values() {
    let quad = SliceQuadrature::default();
    let frame = SymplecticFrame::optical(1.2);
    let ground = entropy(&fock_tomogram(fock(0)).into(), &frame, &quad);
    assert!((ground - 0.5 * (PI * E).ln()).abs() < 1e-6);
    let shifted = entropy(&coherent_tomogram(alpha(1.5, -0.5)).into(), &frame, &quad);
    assert!((shifted - ground).abs() < 1e-8);
    let scaled = entropy(&fock_tomogram(fock(0)).into(), &frame.scaled(2.0).unwrap(), &quad);
    assert!((scaled - ground - 2f64.ln()).abs() < 1e-6);
}

#[test]
fn uncertainty_of_point_state_is_inadmissible() {
    let point: Tomogram = classical_point_tomogram(0.0, 0.0, 0.05).unwrap().into();
    let u = uncertainty_product(&point, &SliceQuadrature::default()).unwrap();
    assert!((u - 0.05f64.powi(4)).abs() < 1e-10);
    assert!(u < 0.25);
}

#[test]
fn library_respects_uncertainty_bound() {
    for t in library() {
        assert!(uncertainty_product(&t, &SliceQuadrature::default()).unwrap() >= 0.25 - 1e-6);
    }
}

#[test]
fn coherent_and_fock_overlaps() {
    let quad = OverlapQuadrature::default();
    let m = orthogonality_matrix(
        &[
            coherent_tomogram(alpha(0.0, 0.0)).into(),
            fock_tomogram(fock(0)).into(),
            coherent_tomogram(alpha(1.0, 0.0)).into(),
            coherent_tomogram(alpha(-1.0, 0.0)).into(),
        ],
        &quad,
    )
    .unwrap();
    assert!((m[(0, 1)] - 1.0).abs() < 1e-3);
    assert!((m[(2, 3)] - (-4.0f64).exp()).abs() < 1e-3);
    for i in 0..4 {
        assert!((m[(i, i)] - 1.0).abs() < 1e-3);
        for j in 0..4 {
            assert!((m[(i, j)] - m[(j, i)]).abs() < 1e-6);
        }
    }
    let c: Tomogram = coherent_tomogram(alpha(1.0, 0.0)).into();
    let p2 = transition_probability(&c, &fock_tomogram(fock(2)).into(), &quad).unwrap();
    assert!((p2 - (-1.0f64).exp() / 2.0).abs() < 1e-3);
}

#[test]
fn sampled_tomograms_overlap_like_analytic_ones() {
    let x = Grid1D::symmetric(8.0, 512).unwrap();
    let phi = Grid1D::periodic(0.0, PI, 128).unwrap();
    let a: Tomogram = fock_tomogram(fock(1)).sample(&x, &phi).into();
    let b: Tomogram = fock_tomogram(fock(1)).into();
    let p = transition_probability(&a, &b, &OverlapQuadrature::default()).unwrap();
    assert!((p - 1.0).abs() < 1e-2, "{p}");
}
