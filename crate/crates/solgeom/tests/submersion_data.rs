//! Extraction of the adapted-frame bracket data: closed-form values for
//! every catalog frame, the bracket-shape residual as a precondition
//! gate, and harmonicity classification.

use approx::assert_abs_diff_eq;
use solgeom::catalog::{oblique_frame, rotation_frame, Catalog};
use solgeom::frame::FrameField;
use solgeom::sample::halton_points;
use solgeom::submersion::{
    check_jacobi, data_at, harmonicity_residual, is_harmonic, shape_residual_at,
};
use solgeom::Error;

const DATA_TOL: f64 = 1e-10;
const SHAPE_TOL: f64 = 1e-8;

fn sample_points() -> Vec<Vec<f64>> {
    let mut pts = vec![vec![0.0, 0.0, 0.0], vec![0.3, -0.7, 0.5]];
    pts.extend(halton_points(4, 3));
    pts
}

#[test]
fn constant_frame_data() {
    let cat = Catalog::standard();
    // (f1, f2, f3, kappa1, kappa2, sigma) per frame.
    let want: &[(&str, [f64; 6])] = &[
        ("case1", [0.0, 1.0, 0.0, -1.0, 0.0, 0.0]),
        ("case1_alt", [0.0, 1.0, 0.0, -1.0, 0.0, 0.0]),
        ("case2", [0.0, -1.0, 0.0, 1.0, 0.0, 0.0]),
        ("cr1_zero", [-1.0, 0.0, 0.0, 0.0, -1.0, 0.0]),
        (
            "cr1_const",
            [
                -(0.4f64.cos()),
                0.4f64.sin(),
                0.0,
                -(0.4f64.sin()),
                -(0.4f64.cos()),
                0.0,
            ],
        ),
        ("euclid_frame", [0.0; 6]),
    ];
    for (name, expect) in want {
        let frame = cat.frame(name).unwrap();
        for p in sample_points() {
            let d = data_at(frame, &p).unwrap();
            let got = [d.f1, d.f2, d.f3, d.kappa1, d.kappa2, d.sigma];
            for (g, w) in got.iter().zip(expect) {
                assert_abs_diff_eq!(*g, *w, epsilon = DATA_TOL);
            }
        }
    }
}

#[test]
fn rotation_family_data_follows_the_angle_field() {
    let cat = Catalog::standard();
    // cr1_twist rotates by t = 0.3 + 0.1 z + 0.2 x; the angle derivatives
    // enter f1, f2 through the rotated horizontal members and f3 through
    // the vertical derivative of the angle.
    let frame = cat.frame("cr1_twist").unwrap();
    for p in sample_points() {
        let (x, z) = (p[0], p[2]);
        let t = 0.3 + 0.1 * z + 0.2 * x;
        let d = data_at(frame, &p).unwrap();
        assert_abs_diff_eq!(d.f1, -t.cos() - 0.1 * t.sin(), epsilon = DATA_TOL);
        assert_abs_diff_eq!(d.f2, t.sin() - 0.1 * t.cos(), epsilon = DATA_TOL);
        assert_abs_diff_eq!(d.f3, -0.2 * (-z).exp(), epsilon = DATA_TOL);
        assert_abs_diff_eq!(d.kappa1, -t.sin(), epsilon = DATA_TOL);
        assert_abs_diff_eq!(d.kappa2, -t.cos(), epsilon = DATA_TOL);
        assert_abs_diff_eq!(d.sigma, 0.0, epsilon = DATA_TOL);
    }
}

#[test]
fn exponential_frame_data() {
    let cat = Catalog::standard();
    // cos t = e^{z-3}; write c = e^{z-3}, s = sqrt(1 - c^2).
    let frame = cat.frame("cr1_exp").unwrap();
    for p in sample_points() {
        let c = (p[2] - 3.0).exp();
        let s = (1.0 - c * c).sqrt();
        let d = data_at(frame, &p).unwrap();
        assert_abs_diff_eq!(d.f1, 0.0, epsilon = DATA_TOL);
        assert_abs_diff_eq!(d.f2, 1.0 / s, epsilon = DATA_TOL);
        assert_abs_diff_eq!(d.f3, 0.0, epsilon = DATA_TOL);
        assert_abs_diff_eq!(d.kappa1, -s, epsilon = DATA_TOL);
        assert_abs_diff_eq!(d.kappa2, -c, epsilon = DATA_TOL);
        assert_abs_diff_eq!(d.sigma, 0.0, epsilon = DATA_TOL);
    }
}

#[test]
fn adapted_frames_have_the_submersion_bracket_shape() {
    let cat = Catalog::standard();
    for name in [
        "case1",
        "case1_alt",
        "case2",
        "cr1_zero",
        "cr1_const",
        "cr1_exp",
        "cr1_twist",
        "euclid_frame",
        "euclid_twist",
    ] {
        let frame = cat.frame(name).unwrap();
        for p in sample_points() {
            let r = shape_residual_at(frame, &p).unwrap();
            assert!(r <= SHAPE_TOL, "{name} at {p:?}: shape residual {r}");
        }
    }
}

#[test]
fn vertical_third_axis_frame_fails_the_shape_test() {
    let cat = Catalog::standard();
    // {E1, E2, E3} with E3 marked vertical: [E1, E3] = E1 has a component
    // along e1 itself, which the adapted bracket shape forbids.
    let frame = cat.frame("sol_frame").unwrap();
    for p in sample_points() {
        let r = shape_residual_at(frame, &p).unwrap();
        assert_abs_diff_eq!(r, 1.0, epsilon = 1e-9);
    }
}

#[test]
fn tilted_vertical_direction_fails_the_shape_test() {
    let cat = Catalog::standard();
    let sol = cat.manifold("sol").unwrap().clone();
    // Rotate the vertical member away from E1 by a constant tilt 0.2
    // while keeping the triple orthonormal; the resulting residual is
    // approximately cos(0.3) sin(0.2), far above the pass threshold.
    let tilted = FrameField::from_strs(
        "tilted",
        sol,
        &[
            &["0", "cos(0.3)*exp(z)", "sin(0.3)"],
            &[
                "sin(0.2)*exp(-z)",
                "-sin(0.3)*cos(0.2)*exp(z)",
                "cos(0.3)*cos(0.2)",
            ],
            &[
                "cos(0.2)*exp(-z)",
                "sin(0.3)*sin(0.2)*exp(z)",
                "-cos(0.3)*sin(0.2)",
            ],
        ],
        Some(2),
    )
    .unwrap();
    for p in sample_points() {
        assert!(tilted.orthonormality_residual_at(&p).unwrap() < 1e-10);
        let r = shape_residual_at(&tilted, &p).unwrap();
        assert!(
            r > 0.05,
            "tilted frame unexpectedly close to the shape: residual {r}"
        );
    }
}

#[test]
fn two_angle_frame_agrees_with_the_rotation_family_and_the_explicit_tilt() {
    let cat = Catalog::standard();
    let sol = cat.manifold("sol").unwrap().clone();

    // At zero tilt the two-angle family collapses onto the single-angle
    // rotation family, member by member, even for a varying angle field.
    let theta = solgeom::parse("0.3+0.1*z").unwrap();
    let reduced = oblique_frame(
        "reduced",
        sol.clone(),
        theta.clone(),
        solgeom::parse("0").unwrap(),
    )
    .unwrap();
    let rot = rotation_frame("rot", sol.clone(), theta).unwrap();

    // At constant angles it reproduces the hand-written tilted triple
    // from the shape test above.
    let built = oblique_frame(
        "tilted2",
        sol.clone(),
        solgeom::parse("0.3").unwrap(),
        solgeom::parse("0.2").unwrap(),
    )
    .unwrap();
    let literal = FrameField::from_strs(
        "tilted",
        sol,
        &[
            &["0", "cos(0.3)*exp(z)", "sin(0.3)"],
            &[
                "sin(0.2)*exp(-z)",
                "-sin(0.3)*cos(0.2)*exp(z)",
                "cos(0.3)*cos(0.2)",
            ],
            &[
                "cos(0.2)*exp(-z)",
                "sin(0.3)*sin(0.2)*exp(z)",
                "-cos(0.3)*sin(0.2)",
            ],
        ],
        Some(2),
    )
    .unwrap();

    for p in sample_points() {
        for (lhs, rhs) in [(&reduced, &rot), (&built, &literal)] {
            let a = lhs.components_at(&p).unwrap();
            let b = rhs.components_at(&p).unwrap();
            for i in 0..3 {
                for j in 0..3 {
                    assert_abs_diff_eq!(a[i][j], b[i][j], epsilon = 1e-12);
                }
            }
        }
    }
}

#[test]
fn off_shape_frame_passes_the_vector_jacobi_identity_but_not_the_data_form() {
    let cat = Catalog::standard();
    let sol = cat.manifold("sol").unwrap().clone();
    // A varying tilt keeps the triple orthonormal, so the honest
    // vector-field Jacobi identity still holds at roundoff.  The data-form
    // consistency equations, however, presuppose the one-dimensional-fiber
    // bracket shape; off that shape they are not identities, and here they
    // miss by a few percent, in line with the O(0.1) shape residual.
    let frame = oblique_frame(
        "drifting_tilt",
        sol,
        solgeom::parse("0.3+0.1*z").unwrap(),
        solgeom::parse("0.2+0.05*x").unwrap(),
    )
    .unwrap();
    let mut worst_data_form: f64 = 0.0;
    for p in sample_points() {
        assert!(frame.orthonormality_residual_at(&p).unwrap() < 1e-12);
        assert!(frame.jacobi_residual_at(&p).unwrap() < 1e-12);
        assert!(shape_residual_at(&frame, &p).unwrap() > 0.05);
        let jac = check_jacobi(&frame, &p).unwrap();
        let max = jac.iter().fold(0.0f64, |m, r| m.max(r.abs()));
        worst_data_form = worst_data_form.max(max);
    }
    assert!(
        worst_data_form > 1e-2,
        "data-form equations unexpectedly near zero off the shape: {worst_data_form}"
    );
}

#[test]
fn data_extraction_requires_a_marked_vertical_member() {
    let cat = Catalog::standard();
    let sol = cat.manifold("sol").unwrap().clone();
    let unmarked = FrameField::from_strs(
        "unmarked",
        sol,
        &[
            &["exp(-z)", "0", "0"],
            &["0", "exp(z)", "0"],
            &["0", "0", "1"],
        ],
        None,
    )
    .unwrap();
    assert!(matches!(
        data_at(&unmarked, &[0.0, 0.0, 0.0]),
        Err(Error::Precondition { .. })
    ));
}

#[test]
fn model_frames_are_never_harmonic_and_flat_frames_are() {
    let cat = Catalog::standard();
    for name in [
        "case1",
        "case1_alt",
        "case2",
        "cr1_zero",
        "cr1_const",
        "cr1_exp",
        "cr1_twist",
    ] {
        let frame = cat.frame(name).unwrap();
        for p in sample_points() {
            // kappa1^2 + kappa2^2 = 1 across the whole family.
            assert_abs_diff_eq!(
                harmonicity_residual(frame, &p).unwrap(),
                1.0,
                epsilon = 1e-9
            );
            assert!(!is_harmonic(frame, &p, 1e-8).unwrap());
        }
    }
    for name in ["euclid_frame", "euclid_twist"] {
        let frame = cat.frame(name).unwrap();
        for p in sample_points() {
            assert!(is_harmonic(frame, &p, 1e-10).unwrap());
        }
    }
}
