use std::f64::consts::PI;

use num_complex::Complex64;
use tomo_core::linalg::{identity, max_abs_diff};
use tomo_core::spin::{
    d_orthogonality_check, reconstruct_spin_state, spin_tomogram, three_j, wigner_d_matrix, wigner_small_d, BetaNodes,
    EulerAngles, GroupQuadrature, Half, ThreeJ,
};
use tomo_core::{Grid1D, SpinState, TomoError, Validate};

const HALF: Half = Half::from_twice(1);

fn int(n: i32) -> Half {
    Half::from_int(n)
}

#[test]
fn small_d_at_zero_is_identity() {
    for tw in 0..=6 {
        let j = Half::from_twice(tw);
        for a in j.projections() {
            for b in j.projections() {
                let target = if a == b { 1.0 } else { 0.0 };
                assert!((wigner_small_d(j, a, b, 0.0).unwrap() - target).abs() < 1e-15);
            }
        }
    }
}

#[test]
fn small_d_matches_generator_exponential() {
    // d^1(beta) = exp(-i beta J_y) for j = 1, summed as a power series
    let beta = 0.9f64;
    let s = 1.0 / 2f64.sqrt();
    // -i J_y in the basis +1, 0, -1 is real
    let g = [[0.0, -s, 0.0], [s, 0.0, -s], [0.0, s, 0.0]];
    let mut term = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
    let mut sum = term;
    for k in 1..40 {
        let mut next = [[0.0; 3]; 3];
        for r in 0..3 {
            for c in 0..3 {
                next[r][c] = (0..3).map(|m| term[r][m] * g[m][c]).sum::<f64>() * beta / k as f64;
            }
        }
        term = next;
        for r in 0..3 {
            for c in 0..3 {
                sum[r][c] += term[r][c];
            }
        }
    }
    let j = int(1);
    for (r, mp) in j.projections().enumerate() {
        for (c, m) in j.projections().enumerate() {
            let d = wigner_small_d(j, mp, m, beta).unwrap();
            // columns of the exponential index m', rows index m
            assert!((d - sum[c][r]).abs() < 1e-12, "({mp}, {m}): {d} vs {}", sum[c][r]);
        }
    }
    let v = wigner_small_d(j, int(1), int(0), PI / 2.0).unwrap();
    assert!((v.abs() - 1.0 / 2f64.sqrt()).abs() < 1e-15);
}

#[test]
fn identity_angles_give_identity() {
    let angles = EulerAngles::new(0.0, 0.0, 0.0).unwrap();
    for tw in 0..=4 {
        let d = wigner_d_matrix(Half::from_twice(tw), &angles);
        assert!(max_abs_diff(&d, &identity(d.rows())) < 1e-15);
    }
}

#[test]
fn angle_ranges_are_checked() {
    assert!(EulerAngles::new(-0.1, 0.5, 0.5).is_err());
    assert!(EulerAngles::new(0.1, 3.5, 0.5).is_err());
    assert!(EulerAngles::new(0.1, 0.5, 2.0 * PI).is_err());
}

#[test]
fn three_j_selection_rules() {
    assert_eq!(three_j(&ThreeJ::new([HALF, HALF, int(1)], [HALF, HALF, int(0)])), 0.0);
    assert_eq!(three_j(&ThreeJ::new([HALF, HALF, int(2)], [HALF, -HALF, int(0)])), 0.0);
    assert_eq!(three_j(&ThreeJ::new([int(1), int(1), int(1)], [int(0), int(0), int(0)])), 0.0);
}

#[test]
fn spin_half_anchors() {
    let alpha = Grid1D::periodic(0.0, 2.0 * PI, 8).unwrap();
    let beta = BetaNodes::Uniform(Grid1D::new(0.0, PI, 13).unwrap());
    let t = spin_tomogram(&SpinState::basis(HALF, HALF).unwrap(), &alpha, &beta).unwrap();
    for (b, bt) in beta.angles().into_iter().enumerate() {
        for a in 0..alpha.len() {
            assert!((t.get(0, a, b) - (bt / 2.0).cos().powi(2)).abs() < 1e-12);
            assert!((t.get(1, a, b) - (bt / 2.0).sin().powi(2)).abs() < 1e-12);
        }
    }
    assert!(t.validate().is_empty());
}

#[test]
fn maximally_mixed_is_uniform_and_recovered() {
    for tw in 1..=4 {
        let j = Half::from_twice(tw);
        let state = SpinState::maximally_mixed(j);
        let alpha = Grid1D::periodic(0.0, 2.0 * PI, 2 * tw as usize + 2).unwrap();
        let beta = BetaNodes::GaussLegendre(tw as usize + 2);
        let t = spin_tomogram(&state, &alpha, &beta).unwrap();
        let u = 1.0 / j.multiplicity() as f64;
        assert!(t.values().iter().all(|v| (v - u).abs() < 1e-12));
        let back = reconstruct_spin_state(&t).unwrap();
        assert!(max_abs_diff(back.rho(), state.rho()) < 1e-12);
    }
}

#[test]
fn spin_one_round_trip() {
    let entries: Vec<Complex64> =
        (0..9).map(|k| Complex64::new((k as f64 * 0.7).sin(), (k as f64 * 1.3).cos())).collect();
    let state = SpinState::from_gram(int(1), &entries).unwrap();
    let t = spin_tomogram(&state, &Grid1D::periodic(0.0, 2.0 * PI, 6).unwrap(), &BetaNodes::GaussLegendre(4)).unwrap();
    let back = reconstruct_spin_state(&t).unwrap();
    assert!(max_abs_diff(back.rho(), state.rho()) < 1e-10);
    assert!(back.validate().is_empty());
}

#[test]
fn too_few_beta_nodes() {
    let state = SpinState::maximally_mixed(HALF);
    let t = spin_tomogram(&state, &Grid1D::periodic(0.0, 2.0 * PI, 4).unwrap(), &BetaNodes::GaussLegendre(2)).unwrap();
    assert!(matches!(reconstruct_spin_state(&t), Err(TomoError::QuadratureTooCoarse(_))));
}

#[test]
fn triple_d_integrals() {
    let js = [HALF, HALF, int(0)];
    let quad = GroupQuadrature::minimal(js);
    assert!(d_orthogonality_check(js, [HALF, -HALF, int(0)], [-HALF, HALF, int(0)], &quad).unwrap() < 1e-10);

    let bad = [HALF, HALF, int(2)];
    assert!(
        d_orthogonality_check(bad, [HALF, -HALF, int(0)], [HALF, -HALF, int(0)], &GroupQuadrature::minimal(bad))
            .unwrap()
            < 1e-10
    );

    let ones = [int(1), int(1), int(1)];
    let quad = GroupQuadrature::minimal(ones);
    for (mp, m) in [
        ([int(1), int(0), int(-1)], [int(0), int(1), int(-1)]),
        ([int(1), int(-1), int(0)], [int(1), int(-1), int(0)]),
        ([int(0), int(0), int(0)], [int(1), int(0), int(-1)]),
    ] {
        assert!(d_orthogonality_check(ones, mp, m, &quad).unwrap() < 1e-10);
    }
    let coarse = GroupQuadrature { alpha: 2, beta: 2, gamma: 2 };
    assert!(matches!(
        d_orthogonality_check(ones, [int(0); 3], [int(0); 3], &coarse),
        Err(TomoError::QuadratureTooCoarse(_))
    ));
}
