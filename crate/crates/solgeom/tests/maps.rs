//! Tension and bitension fields of the built-in maps, submersion
//! diagnostics, and the parametrized polynomial family.

use approx::assert_abs_diff_eq;
use solgeom::catalog::Catalog;
use solgeom::sample::halton_points;
use solgeom::Error;

const VALUE_TOL: f64 = 1e-9;
const BITENSION_TOL: f64 = 1e-6;

fn sol_points() -> Vec<Vec<f64>> {
    let mut pts = vec![vec![0.0, 0.0, 0.0], vec![0.3, -0.7, 0.5]];
    pts.extend(halton_points(4, 3));
    pts
}

#[test]
fn coordinate_projection_differentials() {
    let cat = Catalog::standard();
    let pi1 = cat.map("pi1").unwrap();
    let pi2 = cat.map("pi2").unwrap();
    for p in sol_points() {
        let d1 = pi1.differential_at(&p).unwrap();
        assert_eq!(d1, vec![vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0]]);
        let d2 = pi2.differential_at(&p).unwrap();
        assert_eq!(d2, vec![vec![1.0, 0.0, 0.0], vec![0.0, 0.0, 1.0]]);
    }
}

#[test]
fn projection_tension_fields_are_constant_unit_vectors() {
    let cat = Catalog::standard();
    for (name, expected) in [("pi1", [0.0, 1.0]), ("pi2", [0.0, -1.0])] {
        let map = cat.map(name).unwrap();
        for p in sol_points() {
            let tau = map.tension_at(&p).unwrap();
            assert_abs_diff_eq!(tau[0], expected[0], epsilon = VALUE_TOL);
            assert_abs_diff_eq!(tau[1], expected[1], epsilon = VALUE_TOL);
            assert_abs_diff_eq!(map.tension_norm_at(&p).unwrap(), 1.0, epsilon = VALUE_TOL);
        }
    }
}

#[test]
fn projection_bitension_fields_have_constant_norm_two() {
    let cat = Catalog::standard();
    for (name, expected) in [("pi1", [0.0, -2.0]), ("pi2", [0.0, 2.0])] {
        let map = cat.map(name).unwrap();
        for p in sol_points() {
            let tau2 = map.bitension_at(&p).unwrap();
            assert_abs_diff_eq!(tau2[0], expected[0], epsilon = BITENSION_TOL);
            assert_abs_diff_eq!(tau2[1], expected[1], epsilon = BITENSION_TOL);
            assert_abs_diff_eq!(
                map.bitension_norm_at(&p).unwrap(),
                2.0,
                epsilon = BITENSION_TOL
            );
        }
    }
}

#[test]
fn projections_are_riemannian_submersions_with_vertical_coordinate_fibers() {
    let cat = Catalog::standard();
    let cases: [(&str, fn(f64) -> Vec<f64>); 2] = [
        ("pi1", |z| vec![(-z).exp(), 0.0, 0.0]),
        ("pi2", |z| vec![0.0, z.exp(), 0.0]),
    ];
    for (name, vert) in cases {
        let map = cat.map(name).unwrap();
        for p in sol_points() {
            let v = map.vertical_unit_at(&p).unwrap();
            let expected = vert(p[2]);
            for i in 0..3 {
                assert_abs_diff_eq!(v[i], expected[i], epsilon = VALUE_TOL);
            }
            let chk = map.submersion_check_at(&p).unwrap();
            assert!(chk.isometry_residual < VALUE_TOL, "{name}: {chk:?}");
            // The tension equals minus the push-forward of the fiber
            // acceleration; the residual compares the two.
            assert!(chk.tension_vs_fiber_residual < 1e-7, "{name}: {chk:?}");
            assert!(map.is_riemannian_submersion_at(&p, 1e-8).unwrap());
        }
    }
}

#[test]
fn flat_projection_is_harmonic_and_biharmonic() {
    let cat = Catalog::standard();
    let map = cat.map("euclid_proj").unwrap();
    for p in sol_points() {
        let tau = map.tension_at(&p).unwrap();
        let tau2 = map.bitension_at(&p).unwrap();
        for c in 0..2 {
            assert_abs_diff_eq!(tau[c], 0.0, epsilon = VALUE_TOL);
            assert_abs_diff_eq!(tau2[c], 0.0, epsilon = BITENSION_TOL);
        }
        let chk = map.submersion_check_at(&p).unwrap();
        assert!(chk.isometry_residual < VALUE_TOL);
        assert!(chk.tension_vs_fiber_residual < 1e-7);
    }
}

#[test]
fn polynomial_family_tension_follows_the_coefficients() {
    let cat = Catalog::standard();
    let map = cat.map("example").unwrap();
    // Default parameters A = 1, B = 1, C = 0, D = 0.
    for p in sol_points() {
        let z = p[2];
        let tau = map.tension_at(&p).unwrap();
        assert_abs_diff_eq!(tau[0], 0.0, epsilon = VALUE_TOL);
        assert_abs_diff_eq!(tau[1], 6.0 * z + 2.0, epsilon = VALUE_TOL);
        // The whole family is biharmonic regardless of parameters.
        let tau2 = map.bitension_at(&p).unwrap();
        assert_abs_diff_eq!(tau2[0], 0.0, epsilon = BITENSION_TOL);
        assert_abs_diff_eq!(tau2[1], 0.0, epsilon = BITENSION_TOL);
    }

    let cubic = map.with_params(&[("A", 1.0), ("B", 0.0), ("C", 0.0), ("D", 0.0)]);
    let tau = cubic.tension_at(&[0.4, -0.2, 2.0]).unwrap();
    assert_abs_diff_eq!(tau[0], 0.0, epsilon = VALUE_TOL);
    assert_abs_diff_eq!(tau[1], 12.0, epsilon = VALUE_TOL);

    // Killing the quadratic and cubic terms leaves a totally geodesic
    // (affine-in-z) map: harmonic, hence trivially biharmonic.
    let affine = map.with_params(&[("A", 0.0), ("B", 0.0), ("C", 0.5), ("D", 1.0)]);
    for p in sol_points() {
        assert_abs_diff_eq!(affine.tension_norm_at(&p).unwrap(), 0.0, epsilon = VALUE_TOL);
        assert_abs_diff_eq!(
            affine.bitension_norm_at(&p).unwrap(),
            0.0,
            epsilon = BITENSION_TOL
        );
    }
}

#[test]
fn polynomial_family_is_not_a_riemannian_submersion() {
    let cat = Catalog::standard();
    let map = cat.map("example").unwrap();
    let p = [0.0, 0.0, 1.0];
    assert!(!map.is_riemannian_submersion_at(&p, 1e-6).unwrap());
    let chk = map.submersion_check_at(&p).unwrap();
    assert!(chk.isometry_residual > 1.0, "{chk:?}");
    // With default parameters the z-derivative of the second component
    // vanishes at z = 0, so the differential drops rank there.
    match map.vertical_unit_at(&[0.0, 0.0, 0.0]) {
        Err(Error::NotASubmersion { .. }) => {}
        other => panic!("expected rank failure, got {other:?}"),
    }
}

#[test]
fn slab_embedding_is_totally_geodesic() {
    let cat = Catalog::standard();
    let map = cat.map("slab_xz").unwrap();
    for p in [[0.0, 0.0], [0.4, -0.9], [-1.3, 1.1]] {
        let tau = map.tension_at(&p).unwrap();
        let tau2 = map.bitension_at(&p).unwrap();
        for c in 0..3 {
            assert_abs_diff_eq!(tau[c], 0.0, epsilon = VALUE_TOL);
            assert_abs_diff_eq!(tau2[c], 0.0, epsilon = BITENSION_TOL);
        }
    }
    // Fiber diagnostics need a 3-to-2 map; a 2-to-3 embedding is rejected.
    assert!(matches!(
        map.vertical_unit_at(&[0.0, 0.0]),
        Err(Error::DimensionMismatch { .. })
    ));
}

#[test]
fn map_values_compose_chart_coordinates() {
    let cat = Catalog::standard();
    let pi1 = cat.map("pi1").unwrap();
    assert_eq!(pi1.value_at(&[1.5, -0.25, 0.75]).unwrap(), vec![-0.25, 0.75]);
    let slab = cat.map("slab_xz").unwrap();
    assert_eq!(slab.value_at(&[0.4, -0.9]).unwrap(), vec![0.4, 0.7, -0.9]);
}

#[test]
fn identity_map_is_harmonic_and_biharmonic() {
    let cat = Catalog::standard();
    let sol = cat.manifold("sol").unwrap();
    let id = solgeom::SmoothMap::from_strs(
        "identity",
        sol.clone(),
        sol.clone(),
        &["x", "y", "z"],
        &[],
    )
    .unwrap();
    for p in sol_points() {
        let d = id.differential_at(&p).unwrap();
        for r in 0..3 {
            for c in 0..3 {
                assert_eq!(d[r][c], if r == c { 1.0 } else { 0.0 });
            }
        }
        // An isometry has vanishing tension; any map with identically
        // zero tension has vanishing bitension.
        assert_abs_diff_eq!(id.tension_norm_at(&p).unwrap(), 0.0, epsilon = VALUE_TOL);
        assert_abs_diff_eq!(
            id.bitension_norm_at(&p).unwrap(),
            0.0,
            epsilon = BITENSION_TOL
        );
    }
}

#[test]
fn tension_commutes_with_target_translations() {
    // Both base models have translation-invariant metrics along their
    // first coordinate, so post-composing with a coordinate shift is a
    // target isometry with identity differential: the tension components
    // of the shifted map must match the original ones.
    let cat = Catalog::standard();
    for (name, shifted_components) in [
        ("pi1", ["y+0.7", "z"]),
        ("pi2", ["x-1.3", "z"]),
    ] {
        let base = cat.map(name).unwrap();
        let shifted = solgeom::SmoothMap::from_strs(
            "shifted",
            base.source().clone(),
            base.target().clone(),
            &[shifted_components[0], shifted_components[1]],
            &[],
        )
        .unwrap();
        for p in sol_points() {
            let t0 = base.tension_at(&p).unwrap();
            let t1 = shifted.tension_at(&p).unwrap();
            for c in 0..2 {
                assert_abs_diff_eq!(t0[c], t1[c], epsilon = 1e-8);
            }
        }
    }
}
