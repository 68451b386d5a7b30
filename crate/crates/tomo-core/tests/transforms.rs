use std::f64::consts::PI;

use num_complex::Complex64;
use tomo_core::analytic::{
    classical_point_tomogram, coherent_tomogram, coherent_wavefunction, coherent_wigner, fock_tomogram,
    fock_wavefunction, CoherentLabel, FockLabel,
};
use tomo_core::transforms::{
    classical_tomogram, density_from_tomogram, phase_density_from_tomogram, tomogram_from_density,
    tomogram_from_wavefunction, tomogram_from_wigner, wigner_from_density, wigner_from_tomogram, TransformConfig,
};
use tomo_core::{DensityKernel, Grid1D, OpticalSamples, PhaseDensity, TomoError, Validate, WignerGrid};

fn fock(n: u32) -> FockLabel {
    FockLabel::new(n).unwrap()
}

fn alpha(re: f64, im: f64) -> CoherentLabel {
    CoherentLabel::new(Complex64::new(re, im)).unwrap()
}

fn max_diff(a: &OpticalSamples, b: &OpticalSamples) -> f64 {
    a.values().iter().zip(b.values().iter()).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn relative_l2(a: impl Iterator<Item = f64>, b: impl Iterator<Item = f64>) -> f64 {
    let (mut num, mut den) = (0.0, 0.0);
    for (x, y) in a.zip(b) {
        num += (x - y) * (x - y);
        den += y * y;
    }
    (num / den).sqrt()
}

fn standard_grid() -> Grid1D {
    Grid1D::symmetric(8.0, 1024).unwrap()
}

#[test]
fn fock_one_vanishes_at_origin() {
    let psi = fock_wavefunction(fock(1), &standard_grid()).unwrap();
    let x = Grid1D::symmetric(1.0, 3).unwrap();
    let phi = Grid1D::periodic(0.1, PI, 16).unwrap();
    let t = tomogram_from_wavefunction(&psi, &x, &phi).unwrap();
    for i in 0..phi.len() {
        assert!(t.column(i)[1].abs() < 1e-12);
    }
}

#[test]
fn coherent_quadrature_matches_closed_form() {
    let a = alpha(1.0, 0.0);
    let psi = coherent_wavefunction(a, &standard_grid());
    let x = Grid1D::symmetric(6.0, 121).unwrap();
    let phi = Grid1D::periodic(0.0, PI, 32).unwrap();
    let t = tomogram_from_wavefunction(&psi, &x, &phi).unwrap();
    assert!(max_diff(&t, &coherent_tomogram(a).sample(&x, &phi)) < 1e-6);
    assert!(t.validate().is_empty());
}

#[test]
fn ground_wigner_projects_to_ground_tomogram() {
    let g = Grid1D::symmetric(6.0, 481).unwrap();
    let w = WignerGrid::from_fn(g, g, |q, p| 2.0 * (-q * q - p * p).exp());
    let x = Grid1D::symmetric(4.0, 81).unwrap();
    let phi = Grid1D::periodic(0.0, PI, 12).unwrap();
    let t = tomogram_from_wigner(&w, &x, &phi, &TransformConfig::default()).unwrap();
    let exact = fock_tomogram(fock(0)).sample(&x, &phi);
    assert!(max_diff(&t, &exact) < 1e-4);
    let first = t.column(0).to_vec();
    for i in 1..phi.len() {
        for (a, b) in t.column(i).iter().zip(&first) {
            assert!((a - b).abs() < 1e-4);
        }
    }
}

#[test]
fn coherent_wigner_projects_to_coherent_tomogram() {
    let a = alpha(1.0, 0.5);
    let g = Grid1D::symmetric(8.0, 512).unwrap();
    let w = WignerGrid::from_fn(g, g, |q, p| coherent_wigner(a, q, p));
    let x = Grid1D::symmetric(5.0, 101).unwrap();
    let phi = Grid1D::periodic(0.0, PI, 16).unwrap();
    let t = tomogram_from_wigner(&w, &x, &phi, &TransformConfig::default()).unwrap();
    assert!(max_diff(&t, &coherent_tomogram(a).sample(&x, &phi)) < 2e-4);
}

#[test]
fn back_projection_recovers_ground_wigner() {
    let x = Grid1D::symmetric(8.0, 256).unwrap();
    let phi = Grid1D::periodic(0.0, PI, 128).unwrap();
    let t = fock_tomogram(fock(0)).sample(&x, &phi);
    let g = Grid1D::symmetric(5.0, 101).unwrap();
    let w = wigner_from_tomogram(&t, &g, &g, &TransformConfig::default()).unwrap();
    let exact = WignerGrid::from_fn(g, g, |q, p| 2.0 * (-q * q - p * p).exp());
    assert!(relative_l2(w.values().iter().copied(), exact.values().iter().copied()) < 2e-2);
    assert!(w.validate().is_empty());
}

#[test]
fn wigner_round_trip_for_low_fock_states() {
    let x = Grid1D::symmetric(8.0, 256).unwrap();
    let phi = Grid1D::periodic(0.0, PI, 128).unwrap();
    let g = Grid1D::symmetric(6.0, 769).unwrap();
    let cfg = TransformConfig::default();
    for n in 0..=3 {
        let source = fock_tomogram(fock(n)).sample(&x, &phi);
        let w = wigner_from_tomogram(&source, &g, &g, &cfg).unwrap();
        let back = tomogram_from_wigner(&w, &x, &phi, &cfg).unwrap();
        let err = relative_l2(back.values().iter().copied(), source.values().iter().copied());
        assert!(err < 2e-2, "n = {n}: {err}");
    }
}

#[test]
fn narrow_phi_independent_column_rings() {
    let x = Grid1D::symmetric(8.0, 256).unwrap();
    let phi = Grid1D::periodic(0.0, PI, 64).unwrap();
    let spike = classical_point_tomogram(0.0, 0.0, 0.02).unwrap();
    let t = OpticalSamples::new(
        x,
        phi,
        tomo_core::Array2::from_fn(phi.len(), x.len(), |_, j| spike.eval(x.point(j) - 2.0, 1.0, 0.0)),
    )
    .unwrap();
    let g = Grid1D::symmetric(4.0, 41).unwrap();
    assert!(matches!(
        wigner_from_tomogram(&t, &g, &g, &TransformConfig::default()),
        Err(TomoError::RingingDetected { .. })
    ));
}

#[test]
fn too_few_angles() {
    let x = Grid1D::symmetric(8.0, 256).unwrap();
    let phi = Grid1D::periodic(0.0, PI, 8).unwrap();
    let t = fock_tomogram(fock(0)).sample(&x, &phi);
    let g = Grid1D::symmetric(2.0, 5).unwrap();
    assert!(matches!(
        wigner_from_tomogram(&t, &g, &g, &TransformConfig::default()),
        Err(TomoError::InsufficientAngles { got: 8, need: 16 })
    ));
}

#[test]
fn fock_one_back_projection_dips_at_origin() {
    let x = Grid1D::symmetric(8.0, 256).unwrap();
    let phi = Grid1D::periodic(0.0, PI, 128).unwrap();
    let t = fock_tomogram(fock(1)).sample(&x, &phi);
    let g = Grid1D::symmetric(1.0, 3).unwrap();
    let w = wigner_from_tomogram(&t, &g, &g, &TransformConfig::default()).unwrap();
    assert!(w.values()[(1, 1)] < -1.9);
}

#[test]
fn density_route_matches_wavefunction_route() {
    let grid = Grid1D::symmetric(8.0, 257).unwrap();
    let x = Grid1D::symmetric(5.0, 51).unwrap();
    let phi = Grid1D::new(0.4, PI - 0.4, 12).unwrap();
    let states = [
        fock_wavefunction(fock(0), &grid).unwrap(),
        fock_wavefunction(fock(2), &grid).unwrap(),
        coherent_wavefunction(alpha(0.7, -0.4), &grid),
    ];
    for psi in &states {
        let a = tomogram_from_wavefunction(psi, &x, &phi).unwrap();
        let b = tomogram_from_density(&DensityKernel::from_pure(psi), &x, &phi).unwrap();
        assert!(max_diff(&a, &b) < 1e-8);
    }
}

#[test]
fn thermal_mixture_is_convex_sum() {
    let grid = Grid1D::symmetric(8.0, 257).unwrap();
    let x = Grid1D::symmetric(5.0, 51).unwrap();
    let phi = Grid1D::new(0.4, PI - 0.4, 12).unwrap();
    let r0 = DensityKernel::from_pure(&fock_wavefunction(fock(0), &grid).unwrap());
    let r1 = DensityKernel::from_pure(&fock_wavefunction(fock(1), &grid).unwrap());
    let mix = DensityKernel::mixture(&[(0.5, &r0), (0.5, &r1)]).unwrap();
    let t = tomogram_from_density(&mix, &x, &phi).unwrap();
    let (w0, w1) = (fock_tomogram(fock(0)).sample(&x, &phi), fock_tomogram(fock(1)).sample(&x, &phi));
    for ((a, b), c) in t.values().iter().zip(w0.values().iter()).zip(w1.values().iter()) {
        assert!((a - 0.5 * (b + c)).abs() < 1e-6);
    }
}

#[test]
fn density_linearity() {
    let grid = Grid1D::symmetric(8.0, 257).unwrap();
    let x = Grid1D::symmetric(5.0, 41).unwrap();
    let phi = Grid1D::new(0.4, PI - 0.4, 8).unwrap();
    let r1 = DensityKernel::from_pure(&fock_wavefunction(fock(2), &grid).unwrap());
    let r2 = DensityKernel::from_pure(&coherent_wavefunction(alpha(-0.5, 1.0), &grid));
    let t1 = tomogram_from_density(&r1, &x, &phi).unwrap();
    let t2 = tomogram_from_density(&r2, &x, &phi).unwrap();
    for &a in &[0.0, 0.25, 0.5, 1.0] {
        let mix = DensityKernel::mixture(&[(a, &r1), (1.0 - a, &r2)]).unwrap();
        let t = tomogram_from_density(&mix, &x, &phi).unwrap();
        for ((m, u), v) in t.values().iter().zip(t1.values().iter()).zip(t2.values().iter()) {
            assert!((m - (a * u + (1.0 - a) * v)).abs() < 1e-10);
        }
    }
}

fn inversion_samples(n: u32) -> OpticalSamples {
    let x = Grid1D::symmetric(8.0, 321).unwrap();
    let phi = Grid1D::periodic(0.0, PI, 64).unwrap();
    fock_tomogram(fock(n)).sample(&x, &phi)
}

#[test]
fn ground_density_inversion() {
    let out = Grid1D::symmetric(4.0, 33).unwrap();
    let rho = density_from_tomogram(&inversion_samples(0), &out, &TransformConfig::default()).unwrap();
    let mut worst = 0.0f64;
    for (i, a) in out.points().enumerate() {
        for (j, b) in out.points().enumerate() {
            let exact = PI.powf(-0.5) * (-(a * a + b * b) / 2.0).exp();
            worst = worst.max((rho.values()[(i, j)] - exact).norm());
        }
    }
    assert!(worst < 1e-3, "{worst}");
    assert!(rho.validate().is_empty(), "{:?}", rho.validate());
}

#[test]
fn fock_one_density_diagonal_is_position_density() {
    let out = Grid1D::symmetric(4.0, 33).unwrap();
    let rho = density_from_tomogram(&inversion_samples(1), &out, &TransformConfig::default()).unwrap();
    let w1 = fock_tomogram(fock(1));
    for (i, x) in rho.diagonal().iter().zip(out.points()) {
        assert!((i - w1.eval(x, 1.0, 0.0)).abs() < 2e-3);
    }
}

#[test]
fn density_inversion_round_trip() {
    let source = inversion_samples(1);
    let out = Grid1D::symmetric(6.0, 97).unwrap();
    let rho = density_from_tomogram(&source, &out, &TransformConfig::default()).unwrap();
    let x = Grid1D::symmetric(5.0, 51).unwrap();
    let phi = Grid1D::new(0.4, PI - 0.4, 8).unwrap();
    let back = tomogram_from_density(&rho, &x, &phi).unwrap();
    let exact = fock_tomogram(fock(1)).sample(&x, &phi);
    assert!(relative_l2(back.values().iter().copied(), exact.values().iter().copied()) < 2e-2);
}

#[test]
fn point_state_is_not_a_density() {
    let x = Grid1D::symmetric(8.0, 321).unwrap();
    let phi = Grid1D::periodic(0.0, PI, 64).unwrap();
    let t = classical_point_tomogram(1.0, 0.5, 0.05).unwrap().sample(&x, &phi);
    let out = Grid1D::symmetric(4.0, 33).unwrap();
    let r = density_from_tomogram(&t, &out, &TransformConfig::default());
    assert!(matches!(r, Err(TomoError::NonHermitianResult { .. }) | Err(TomoError::NotPositive { .. })), "{r:?}");
}

#[test]
fn ground_density_gives_gaussian_wigner() {
    let grid = Grid1D::symmetric(8.0, 257).unwrap();
    let rho = DensityKernel::from_pure(&fock_wavefunction(fock(0), &grid).unwrap());
    let g = Grid1D::symmetric(3.0, 25).unwrap();
    let w = wigner_from_density(&rho, &g, &g).unwrap();
    for (i, q) in g.points().enumerate() {
        for (j, p) in g.points().enumerate() {
            assert!((w.values()[(i, j)] - 2.0 * (-q * q - p * p).exp()).abs() < 1e-6);
        }
    }
}

#[test]
fn non_hermitian_density_leaves_imaginary_residue() {
    let grid = Grid1D::symmetric(6.0, 97).unwrap();
    let psi = fock_wavefunction(fock(0), &grid).unwrap();
    let mut values = DensityKernel::from_pure(&psi).values().clone();
    for i in 0..grid.len() {
        for j in 0..grid.len() {
            values[(i, j)] *= Complex64::from_polar(1.0, 0.3 * (grid.point(i) - 2.0 * grid.point(j)));
        }
    }
    let rho = DensityKernel::new(grid, values).unwrap();
    let g = Grid1D::symmetric(2.0, 9).unwrap();
    assert!(matches!(wigner_from_density(&rho, &g, &g), Err(TomoError::ComplexResidue { .. })));
}

#[test]
fn kernel_contrast_on_fock_one() {
    let grid = Grid1D::symmetric(8.0, 257).unwrap();
    let rho = DensityKernel::from_pure(&fock_wavefunction(fock(1), &grid).unwrap());
    let g = Grid1D::symmetric(3.0, 25).unwrap();
    let w = wigner_from_density(&rho, &g, &g).unwrap();
    assert!(w.values().iter().copied().fold(f64::INFINITY, f64::min) < -1.0);
    let t = tomogram_from_density(&rho, &Grid1D::symmetric(5.0, 51).unwrap(), &Grid1D::new(0.4, PI - 0.4, 16).unwrap())
        .unwrap();
    assert!(t.values().iter().all(|v| *v >= 0.0));
}

#[test]
fn classical_gaussian_projection() {
    let g = Grid1D::symmetric(6.0, 961).unwrap();
    let (x0, p0, s) = (1.0, 0.0, 0.5);
    let f = PhaseDensity::from_fn(g, g, |q, p| {
        (-((q - x0) * (q - x0) + (p - p0) * (p - p0)) / (2.0 * s * s)).exp() / (2.0 * PI * s * s)
    });
    let x = Grid1D::symmetric(4.0, 81).unwrap();
    let phi = Grid1D::periodic(0.0, PI, 8).unwrap();
    let t = classical_tomogram(&f, &x, &phi, &TransformConfig::default()).unwrap();
    for (i, ph) in phi.points().enumerate() {
        let centre = x0 * ph.cos() + p0 * ph.sin();
        for (j, xv) in x.points().enumerate() {
            let exact = (-(xv - centre) * (xv - centre) / (2.0 * s * s)).exp() / ((2.0 * PI).sqrt() * s);
            assert!((t.column(i)[j] - exact).abs() < 2e-4);
        }
    }
}

#[test]
fn classical_round_trip() {
    let x = Grid1D::symmetric(8.0, 256).unwrap();
    let phi = Grid1D::periodic(0.0, PI, 128).unwrap();
    let s = 0.7;
    let t = classical_point_tomogram(0.5, -0.5, s).unwrap().sample(&x, &phi);
    let g = Grid1D::symmetric(5.0, 101).unwrap();
    let f = phase_density_from_tomogram(&t, &g, &g, &TransformConfig::default()).unwrap();
    let exact = PhaseDensity::from_fn(g, g, |q, p| {
        (-((q - 0.5) * (q - 0.5) + (p + 0.5) * (p + 0.5)) / (2.0 * s * s)).exp() / (2.0 * PI * s * s)
    });
    assert!(relative_l2(f.values().iter().copied(), exact.values().iter().copied()) < 2e-2);
}

#[test]
fn ground_tomogram_is_classically_admissible() {
    let x = Grid1D::symmetric(8.0, 256).unwrap();
    let phi = Grid1D::periodic(0.0, PI, 64).unwrap();
    let t = fock_tomogram(fock(0)).sample(&x, &phi);
    let g = Grid1D::symmetric(4.0, 41).unwrap();
    let f = phase_density_from_tomogram(&t, &g, &g, &TransformConfig::default()).unwrap();
    assert!(f.values().iter().all(|v| *v >= 0.0));
}

#[test]
fn fock_one_is_classically_inadmissible() {
    let x = Grid1D::symmetric(8.0, 256).unwrap();
    let phi = Grid1D::periodic(0.0, PI, 64).unwrap();
    let t = fock_tomogram(fock(1)).sample(&x, &phi);
    let g = Grid1D::symmetric(4.0, 41).unwrap();
    assert!(matches!(
        phase_density_from_tomogram(&t, &g, &g, &TransformConfig::default()),
        Err(TomoError::NegativityDetected { .. })
    ));
}
