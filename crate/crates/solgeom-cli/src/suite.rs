//! Record builders: the full verification suite and the per-subject
//! record sets behind the focused subcommands.
//!
//! The `paper-verify` suite is a fixed, ordered list of records named in
//! [`REQUIRED_RECORDS`]; assembly asserts that exactly that list was
//! produced, in order, so a missing catalog entry or a silently skipped
//! check fails the run instead of shrinking it. Randomized point clouds
//! are drawn from per-record substreams of the run seed, which keeps
//! every record's points independent of the others and the whole report
//! reproducible byte for byte.

use solgeom::catalog::{
    Catalog, BASE_CURVATURE_SUITE, COMPONENT_IDENTITY_SUITE, CURVATURE_IDENTITY_SUITE,
    FOURTH_ORDER_VALUE_SUITE, JACOBI_SUITE, NORM_CROSS_SUITE, SUBMERSION_SUITE,
    TOTALLY_GEODESIC_SUITE,
};
use solgeom::frame::FrameField;
use solgeom::sample::{halton_points, PointSpec, SplitMix64, SAMPLE_BOX};
use solgeom::{submersion, ChartedManifold, Result, SmoothMap};

use crate::report::Record;
use crate::tolerances::{self, Family, Overrides};

/// Points per subject in the randomized records.
const CLOUD: usize = 50;

/// Points in the quasi-random submersion cloud.
const SUBMERSION_CLOUD: usize = 64;

/// Record names of the full verification suite, in report order.
pub const REQUIRED_RECORDS: &[&str] = &[
    "metric/sol",
    "So1/sol_frame",
    "So2/sol_frame",
    "So3/sol_frame",
    "ricci/sol",
    "gauss/hyperbolic_xz",
    "gauss/hyperbolic_yz",
    "brackets/case1",
    "connection/case2",
    "components/case1",
    "components/cr1_zero",
    "differential/pi1",
    "submersion/pi1",
    "submersion/pi2",
    "R1-data/case1",
    "R1-data/case2",
    "Jac/catalog",
    "RC0/case1",
    "RC0/case2",
    "RC0/rotation-family",
    "thb2/catalog",
    "GCB0/catalog",
    "GCB1/flat-vertical",
    "harmonic/case1",
    "harmonic/case2",
    "harmonic/euclid",
    "pro1/case1",
    "pro1/case2",
    "tension-norm/pi1",
    "tension-norm/pi2",
    "bitension-norm/pi1",
    "bitension-norm/pi2",
    "cross-norm/catalog",
    "bitension-zero/example",
    "proper-biharmonic/example",
    "totally-geodesic/slab_xz",
    "RCH/probe-min",
    "RCH/probe",
    "RCH/control",
];

/// Shared state for one run: the catalog, the seed, and tolerance knobs.
pub struct Suite<'a> {
    pub cat: &'a Catalog,
    pub seed: u64,
    pub restarts: usize,
    pub tols: Overrides,
}

impl Suite<'_> {
    /// A reproducible point cloud for record number `idx`.
    fn cloud(&self, idx: u64, n: usize, dim: usize) -> Vec<Vec<f64>> {
        let mut rng = SplitMix64::substream(self.seed, idx);
        let (lo, hi) = SAMPLE_BOX;
        (0..n)
            .map(|_| (0..dim).map(|_| rng.uniform(lo, hi)).collect())
            .collect()
    }

    fn tol(&self, family: Family, base: f64) -> f64 {
        self.tols.resolve(family, base)
    }

    /// Names the suite insists on finding in the catalog before building
    /// anything. Some entries are only reached through copies owned by
    /// other objects, so without this roster a thinned catalog could
    /// still assemble and silently verify less.
    fn assert_roster(&self) -> Result<()> {
        for name in ["sol", "hyperbolic_xz", "hyperbolic_yz", "euclidean2", "euclidean3"] {
            self.cat.manifold(name)?;
        }
        for name in JACOBI_SUITE {
            self.cat.frame(name)?;
        }
        for name in SUBMERSION_SUITE.iter().chain(TOTALLY_GEODESIC_SUITE) {
            self.cat.map(name)?;
        }
        self.cat.map("example")?;
        Ok(())
    }

    /// Builds the full suite and checks it against [`REQUIRED_RECORDS`].
    pub fn paper_verify(&self) -> Result<Vec<Record>> {
        self.assert_roster()?;
        let mut records = Vec::with_capacity(REQUIRED_RECORDS.len());
        records.push(self.metric_sol(0)?);
        records.push(self.brackets_sol(1)?);
        records.push(self.connection_sol(2)?);
        records.push(self.curvature_sol(3)?);
        records.push(self.ricci_sol(4)?);
        records.push(self.gauss_base(5, "hyperbolic_xz")?);
        records.push(self.gauss_base(6, "hyperbolic_yz")?);
        records.push(self.brackets_case1(7)?);
        records.push(self.connection_case2(8)?);
        records.push(self.components_case1(9)?);
        records.push(self.components_cr1_zero(10)?);
        records.push(self.differential_pi1(11)?);
        records.push(self.submersion_record(12, "pi1")?);
        records.push(self.submersion_record(13, "pi2")?);
        records.push(self.data_record(14, "R1-data/case1", &["case1", "case1_alt"],
            [0.0, 1.0, 0.0, -1.0, 0.0, 0.0])?);
        records.push(self.data_record(15, "R1-data/case2", &["case2"],
            [0.0, -1.0, 0.0, 1.0, 0.0, 0.0])?);
        records.push(self.jacobi_catalog(16)?);
        records.push(self.contraction_record(17, "RC0/case1", &["case1"])?);
        records.push(self.contraction_record(18, "RC0/case2", &["case2"])?);
        let rotation: Vec<&str> = CURVATURE_IDENTITY_SUITE
            .iter()
            .copied()
            .filter(|n| *n != "case1" && *n != "case2")
            .collect();
        records.push(self.contraction_record(19, "RC0/rotation-family", &rotation)?);
        records.push(self.thb2_catalog(20)?);
        records.push(self.base_curvature_catalog(21)?);
        records.push(self.base_curvature_flat(22)?);
        records.push(self.harmonic_record(23, "harmonic/case1", &["case1", "case1_alt"], false)?);
        records.push(self.harmonic_record(24, "harmonic/case2", &["case2"], false)?);
        records.push(self.harmonic_record(
            25,
            "harmonic/euclid",
            &["euclid_frame", "euclid_twist"],
            true,
        )?);
        records.push(self.fourth_order_record(26, "pro1/case1", &["case1", "case1_alt"])?);
        records.push(self.fourth_order_record(27, "pro1/case2", &["case2"])?);
        records.push(self.tension_norm_record(28, "pi1")?);
        records.push(self.tension_norm_record(29, "pi2")?);
        records.push(self.bitension_norm_record(30, "pi1")?);
        records.push(self.bitension_norm_record(31, "pi2")?);
        records.push(self.cross_norm_catalog(32)?);
        records.push(self.bitension_zero_example(33)?);
        records.push(self.proper_biharmonic_example(34)?);
        records.push(self.totally_geodesic_record(35)?);
        records.extend(self.probe_records());

        debug_assert_eq!(records.len(), REQUIRED_RECORDS.len());
        for (rec, want) in records.iter().zip(REQUIRED_RECORDS) {
            assert_eq!(rec.name, *want, "suite assembled out of order");
        }
        Ok(records)
    }

    fn metric_sol(&self, idx: u64) -> Result<Record> {
        let m = self.cat.manifold("sol")?;
        let mut pts = self.cloud(idx, CLOUD, 3);
        pts.push(vec![0.0, 0.0, 1.0]);
        let mut worst = 0.0f64;
        for p in &pts {
            let g = m.metric_at(p)?;
            let ginv = m.inverse_metric_at(p)?;
            let want = [(2.0 * p[2]).exp(), (-2.0 * p[2]).exp(), 1.0];
            for i in 0..3 {
                for j in 0..3 {
                    let w = if i == j { want[i] } else { 0.0 };
                    let winv = if i == j { 1.0 / want[i] } else { 0.0 };
                    worst = worst.max((g[i][j] - w).abs()).max((ginv[i][j] - winv).abs());
                }
            }
        }
        Ok(Record::residual(
            "metric/sol",
            "g = e^{2z} dx^2 + e^{-2z} dy^2 + dz^2; at (0,0,1) the matrix is diag(e^2, e^{-2}, 1), and the inverse is the reciprocal diagonal",
            pts.len(),
            worst,
            self.tol(Family::Identity, tolerances::EXACT),
        ))
    }

    fn brackets_sol(&self, idx: u64) -> Result<Record> {
        let frame = self.cat.frame("sol_frame")?;
        let mut golden = [[[0.0f64; 3]; 3]; 3];
        golden[0][2][0] = 1.0;
        golden[2][0][0] = -1.0;
        golden[1][2][1] = -1.0;
        golden[2][1][1] = 1.0;
        let worst = self.table_worst(idx, frame, &golden, FrameField::brackets_at)?;
        Ok(Record::residual(
            "So1/sol_frame",
            "[E1,E3] = E1, [E2,E3] = -E2, [E1,E2] = 0 for E1 = e^{-z} d/dx, E2 = e^{z} d/dy, E3 = d/dz",
            CLOUD,
            worst,
            self.tol(Family::Identity, tolerances::STRUCTURE),
        ))
    }

    fn connection_sol(&self, idx: u64) -> Result<Record> {
        let frame = self.cat.frame("sol_frame")?;
        let mut golden = [[[0.0f64; 3]; 3]; 3];
        golden[0][0][2] = -1.0;
        golden[0][2][0] = 1.0;
        golden[1][1][2] = 1.0;
        golden[1][2][1] = -1.0;
        let worst = self.table_worst(idx, frame, &golden, FrameField::connection_at)?;
        Ok(Record::residual(
            "So2/sol_frame",
            "nabla_{E1}E1 = -E3, nabla_{E1}E3 = E1, nabla_{E2}E2 = E3, nabla_{E2}E3 = -E2, all nabla_{E3} vanish",
            CLOUD,
            worst,
            self.tol(Family::Identity, tolerances::STRUCTURE),
        ))
    }

    fn curvature_sol(&self, idx: u64) -> Result<Record> {
        let frame = self.cat.frame("sol_frame")?;
        let m = self.cat.manifold("sol")?;
        let golden = sectional_golden(&[(0, 1, 1.0), (0, 2, -1.0), (1, 2, -1.0)]);
        let pts = self.cloud(idx, CLOUD, 3);
        let mut worst = 0.0f64;
        for p in &pts {
            let r = frame.curvature_at(p)?;
            // Independent route: contract the chart curvature tensor with
            // the frame's coordinate components.
            let low = m.riemann_at(p)?;
            let comp = frame.components_at(p)?;
            for i in 0..3 {
                for j in 0..3 {
                    for k in 0..3 {
                        for l in 0..3 {
                            worst = worst.max((r[i][j][k][l] - golden[i][j][k][l]).abs());
                            let mut acc = 0.0;
                            for (a, ca) in comp[i].iter().enumerate() {
                                for (b, cb) in comp[j].iter().enumerate() {
                                    for (c, cc) in comp[k].iter().enumerate() {
                                        for (d, cd) in comp[l].iter().enumerate() {
                                            acc += ca * cb * cc * cd * low[a][b][c][d];
                                        }
                                    }
                                }
                            }
                            worst = worst.max((acc - golden[i][j][k][l]).abs());
                        }
                    }
                }
            }
        }
        Ok(Record::residual(
            "So3/sol_frame",
            "R(E1,E2,E1,E2) = 1, R(E1,E3,E1,E3) = R(E2,E3,E2,E3) = -1, all other frame components follow by symmetry or vanish; checked through the frame route and the chart-tensor contraction",
            2 * pts.len(),
            worst,
            self.tol(Family::Curvature, tolerances::CURVATURE),
        ))
    }

    fn ricci_sol(&self, idx: u64) -> Result<Record> {
        let frame = self.cat.frame("sol_frame")?;
        let m = self.cat.manifold("sol")?;
        let pts = self.cloud(idx, CLOUD, 3);
        let mut worst = 0.0f64;
        for p in &pts {
            let ric = frame.ricci_at(p)?;
            for i in 0..3 {
                for j in 0..3 {
                    let want = if i == 2 && j == 2 { -2.0 } else { 0.0 };
                    worst = worst.max((ric[i][j] - want).abs());
                }
            }
            worst = worst.max((m.scalar_curvature_at(p)? + 2.0).abs());
        }
        Ok(Record::residual(
            "ricci/sol",
            "Ric = diag(0, 0, -2) in the model frame and the scalar curvature is -2",
            pts.len(),
            worst,
            self.tol(Family::Curvature, tolerances::CURVATURE),
        ))
    }

    fn gauss_base(&self, idx: u64, name: &str) -> Result<Record> {
        let m = self.cat.manifold(name)?;
        let pts = self.cloud(idx, CLOUD, m.dim());
        let mut worst = 0.0f64;
        for p in &pts {
            worst = worst.max((m.gauss_curvature_at(p)? + 1.0).abs());
        }
        let anchor = if name == "hyperbolic_xz" {
            "K = -1 everywhere on the half-plane model (R^2, e^{2z} dx^2 + dz^2)"
        } else {
            "K = -1 everywhere on the half-plane model (R^2, e^{-2z} dy^2 + dz^2)"
        };
        Ok(Record::residual(
            &format!("gauss/{name}"),
            anchor,
            pts.len(),
            worst,
            self.tol(Family::Curvature, tolerances::CURVATURE),
        ))
    }

    fn brackets_case1(&self, idx: u64) -> Result<Record> {
        let mut golden = [[[0.0f64; 3]; 3]; 3];
        golden[0][1][1] = 1.0;
        golden[1][0][1] = -1.0;
        golden[0][2][2] = -1.0;
        golden[2][0][2] = 1.0;
        let mut worst = 0.0f64;
        for name in ["case1", "case1_alt"] {
            let frame = self.cat.frame(name)?;
            worst = worst.max(self.table_worst(idx, frame, &golden, FrameField::brackets_at)?);
        }
        Ok(Record::residual(
            "brackets/case1",
            "[e1,e2] = e2, [e1,e3] = -e3, [e2,e3] = 0 for the adapted triple e1 = E3, e2 = E2, e3 = -E1; both vertical orientations agree",
            2 * CLOUD,
            worst,
            self.tol(Family::Identity, tolerances::STRUCTURE),
        ))
    }

    fn connection_case2(&self, idx: u64) -> Result<Record> {
        let frame = self.cat.frame("case2")?;
        let mut golden = [[[0.0f64; 3]; 3]; 3];
        golden[1][0][1] = 1.0;
        golden[1][1][0] = -1.0;
        golden[2][0][2] = -1.0;
        golden[2][2][0] = 1.0;
        let worst = self.table_worst(idx, frame, &golden, FrameField::connection_at)?;
        Ok(Record::residual(
            "connection/case2",
            "for e1 = E3, e2 = E1, e3 = E2: nabla_{e2}e2 = -e1, nabla_{e3}e3 = e1, nabla_{e2}e1 = e2, nabla_{e3}e1 = -e3, all nabla_{e1} vanish (the e2-line follows from [e1,e2] = -e2 and torsion-freeness)",
            CLOUD,
            worst,
            self.tol(Family::Identity, tolerances::STRUCTURE),
        ))
    }

    fn components_case1(&self, idx: u64) -> Result<Record> {
        let frame = self.cat.frame("case1")?;
        let golden = [[0.0, 0.0, 1.0], [0.0, 1.0, 0.0], [-1.0, 0.0, 0.0]];
        let worst = self.model_component_worst(idx, frame, &golden)?;
        Ok(Record::residual(
            "components/case1",
            "rows of the adapted triple in the model frame: (0,0,1), (0,1,0), (-1,0,0)",
            CLOUD,
            worst,
            self.tol(Family::Identity, tolerances::EXACT),
        ))
    }

    fn components_cr1_zero(&self, idx: u64) -> Result<Record> {
        let frame = self.cat.frame("cr1_zero")?;
        let golden = [[0.0, 1.0, 0.0], [0.0, 0.0, 1.0], [1.0, 0.0, 0.0]];
        let worst = self.model_component_worst(idx, frame, &golden)?;
        Ok(Record::residual(
            "components/cr1_zero",
            "the rotation-family frame at angle parameters (0,0) has model-frame rows (0,1,0), (0,0,1), (1,0,0)",
            CLOUD,
            worst,
            self.tol(Family::Identity, tolerances::EXACT),
        ))
    }

    fn differential_pi1(&self, idx: u64) -> Result<Record> {
        let map = self.cat.map("pi1")?;
        let golden = [[0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
        let pts = self.cloud(idx, CLOUD, 3);
        let mut worst = 0.0f64;
        for p in &pts {
            let d = map.differential_at(p)?;
            for (row, want) in d.iter().zip(&golden) {
                for (v, w) in row.iter().zip(want) {
                    worst = worst.max((v - w).abs());
                }
            }
        }
        Ok(Record::residual(
            "differential/pi1",
            "the coordinate differential of (x,y,z) -> (y,z) is [[0,1,0],[0,0,1]] at every point",
            pts.len(),
            worst,
            self.tol(Family::Identity, tolerances::EXACT),
        ))
    }

    fn submersion_record(&self, _idx: u64, name: &str) -> Result<Record> {
        let map = self.cat.map(name)?;
        let dim = map.source().dim();
        let mut worst = 0.0f64;
        for p in halton_points(SUBMERSION_CLOUD, dim) {
            let check = map.submersion_check_at(&p)?;
            worst = worst.max(check.isometry_residual);
            // The vertical direction is determined up to sign; compare
            // against the expected model axis both ways.
            let want: Vec<f64> = if name == "pi1" {
                vec![(-p[2]).exp(), 0.0, 0.0]
            } else {
                vec![0.0, p[2].exp(), 0.0]
            };
            let mut plus = 0.0f64;
            let mut minus = 0.0f64;
            for (v, w) in check.vertical.iter().zip(&want) {
                plus = plus.max((v - w).abs());
                minus = minus.max((v + w).abs());
            }
            worst = worst.max(plus.min(minus));
        }
        let anchor = if name == "pi1" {
            "(x,y,z) -> (y,z) is a Riemannian submersion onto (R^2, e^{-2z} dy^2 + dz^2) with vertical field +-E1"
        } else {
            "(x,y,z) -> (x,z) is a Riemannian submersion onto (R^2, e^{2z} dx^2 + dz^2) with vertical field +-E2"
        };
        Ok(Record::residual(
            &format!("submersion/{name}"),
            anchor,
            SUBMERSION_CLOUD,
            worst,
            self.tol(Family::Curvature, tolerances::CURVATURE),
        ))
    }

    fn data_record(
        &self,
        idx: u64,
        record: &str,
        frames: &[&str],
        want: [f64; 6],
    ) -> Result<Record> {
        let pts = self.cloud(idx, CLOUD, 3);
        let mut worst = 0.0f64;
        for name in frames {
            let frame = self.cat.frame(name)?;
            for p in &pts {
                let d = submersion::data_at(frame, p)?;
                let got = [d.f1, d.f2, d.f3, d.kappa1, d.kappa2, d.sigma];
                for (g, w) in got.iter().zip(&want) {
                    worst = worst.max((g - w).abs());
                }
                worst = worst.max(submersion::shape_residual_at(frame, p)?);
            }
        }
        let anchor = if record.ends_with("case1") {
            "adapted structure data f1 = f3 = kappa2 = sigma = 0, f2 = 1, kappa1 = -1; identical for both vertical orientations"
        } else {
            "adapted structure data f1 = f3 = kappa2 = sigma = 0, f2 = -1, kappa1 = 1"
        };
        Ok(Record::residual(
            record,
            anchor,
            frames.len() * pts.len(),
            worst,
            self.tol(Family::Identity, tolerances::STRUCTURE),
        ))
    }

    fn jacobi_catalog(&self, idx: u64) -> Result<Record> {
        let pts = self.cloud(idx, CLOUD, 3);
        let mut worst = 0.0f64;
        let mut evals = 0;
        for name in JACOBI_SUITE {
            let frame = self.cat.frame(name)?;
            let dim = frame.manifold().dim();
            let pts3;
            let use_pts = if dim == 3 {
                &pts
            } else {
                pts3 = self.cloud(idx, CLOUD, dim);
                &pts3
            };
            for p in use_pts {
                for r in submersion::check_jacobi(frame, p)? {
                    worst = worst.max(r.abs());
                }
                evals += 1;
            }
        }
        Ok(Record::residual(
            "Jac/catalog",
            "the three Jacobi consistency equations of the structure data, e.g. e3(f1) = -sigma kappa2 - f3 kappa2 + e2(sigma) + e2(f3), vanish on every designated-vertical catalog frame",
            evals,
            worst,
            self.tol(Family::Identity, tolerances::IDENTITY),
        ))
    }

    fn contraction_record(&self, idx: u64, record: &str, frames: &[&str]) -> Result<Record> {
        let pts = self.cloud(idx, CLOUD, 3);
        let mut worst = 0.0f64;
        for name in frames {
            let frame = self.cat.frame(name)?;
            for p in &pts {
                for line in submersion::check_curvature_identities(frame, p)? {
                    worst = worst
                        .max(line.data_residual())
                        .max(line.component_residual())
                        .max((line.data_side - line.component_side).abs());
                }
            }
        }
        let anchor = match record {
            "RC0/case1" => {
                "the seven curvature contractions agree with both closed forms on the first flat-vertical frame; line 4 reads e1(f2) - f2^2 - 3 sigma^2 = -1 = 2 (a_3^3)^2 - 1 with a_3^3 = 0"
            }
            "RC0/case2" => {
                "the seven curvature contractions agree with both closed forms on the second flat-vertical frame"
            }
            _ => {
                "the seven curvature contractions agree with both closed forms across the rotation-family frames"
            }
        };
        Ok(Record::residual(
            record,
            anchor,
            frames.len() * pts.len(),
            worst,
            self.tol(Family::Curvature, tolerances::CONTRACTION),
        ))
    }

    fn thb2_catalog(&self, idx: u64) -> Result<Record> {
        let pts = self.cloud(idx, CLOUD, 3);
        let mut worst = 0.0f64;
        for name in COMPONENT_IDENTITY_SUITE {
            let frame = self.cat.frame(name)?;
            for p in &pts {
                for r in submersion::check_thb2(frame, p)? {
                    worst = worst.max(r.abs());
                }
            }
        }
        Ok(Record::residual(
            "thb2/catalog",
            "the twelve-line component identity system holds on every frame satisfying its a_1^1 = 0 and f1 = 0 preconditions",
            COMPONENT_IDENTITY_SUITE.len() * pts.len(),
            worst,
            self.tol(Family::Identity, tolerances::IDENTITY),
        ))
    }

    fn base_curvature_catalog(&self, idx: u64) -> Result<Record> {
        let pts = self.cloud(idx, CLOUD, 3);
        let mut worst = 0.0f64;
        for (name, expected) in BASE_CURVATURE_SUITE {
            let frame = self.cat.frame(name)?;
            for p in &pts {
                let bc = submersion::gauss_curvature_base(frame, p)?;
                worst = worst.max((bc.k - expected).abs()).max(bc.e3_derivative.abs());
            }
        }
        Ok(Record::residual(
            "GCB0/catalog",
            "K = e1(f2) - e2(f1) - f1^2 - f2^2 + 2 f3 sigma equals -1 on every model-space catalog frame and 0 on the Euclidean controls, and e3(K) = 0 so K descends to the base",
            BASE_CURVATURE_SUITE.len() * pts.len(),
            worst,
            self.tol(Family::Identity, tolerances::IDENTITY),
        ))
    }

    fn base_curvature_flat(&self, idx: u64) -> Result<Record> {
        let pts = self.cloud(idx, CLOUD, 3);
        let mut worst = 0.0f64;
        for name in ["case1", "case1_alt", "case2"] {
            let frame = self.cat.frame(name)?;
            for p in &pts {
                let bc = submersion::gauss_curvature_base(frame, p)?;
                worst = worst.max((bc.k + 1.0).abs());
                match bc.f3_zero_form {
                    Some(v) => worst = worst.max((v + 1.0).abs()),
                    None => worst = worst.max(1.0),
                }
            }
        }
        Ok(Record::residual(
            "GCB1/flat-vertical",
            "with constant data the base curvature reduces to K = e1(f2) - f2^2 = -1 for both flat-vertical frames",
            3 * pts.len(),
            worst,
            self.tol(Family::Identity, tolerances::EXACT),
        ))
    }

    fn harmonic_record(
        &self,
        idx: u64,
        record: &str,
        frames: &[&str],
        want_harmonic: bool,
    ) -> Result<Record> {
        let mut worst = 0.0f64;
        let mut evals = 0;
        for name in frames {
            let frame = self.cat.frame(name)?;
            let dim = frame.manifold().dim();
            for p in self.cloud(idx, CLOUD, dim) {
                let r = submersion::harmonicity_residual(frame, &p)?;
                let classified = submersion::is_harmonic(frame, &p, tolerances::IDENTITY)?;
                if want_harmonic {
                    worst = worst.max(r);
                    if !classified {
                        worst = worst.max(1.0);
                    }
                } else {
                    // The tension norm of these submersions is exactly 1,
                    // so harmonicity must be rejected with margin.
                    worst = worst.max((r - 1.0).abs());
                    if classified {
                        worst = worst.max(1.0);
                    }
                }
                evals += 1;
            }
        }
        let anchor = if want_harmonic {
            "sqrt(kappa1^2 + kappa2^2) = 0 for the Euclidean product projections: harmonic"
        } else {
            "sqrt(kappa1^2 + kappa2^2) = 1, so the submersion is not harmonic"
        };
        Ok(Record::residual(
            record,
            anchor,
            evals,
            worst,
            self.tol(Family::Identity, tolerances::IDENTITY),
        ))
    }

    fn fourth_order_record(&self, idx: u64, record: &str, frames: &[&str]) -> Result<Record> {
        let pts = self.cloud(idx, CLOUD, 3);
        let mut worst = 0.0f64;
        for name in frames {
            let frame = self.cat.frame(name)?;
            let want = FOURTH_ORDER_VALUE_SUITE
                .iter()
                .find(|(n, _)| n == name)
                .map(|(_, v)| oriented_pair(*v))
                .ok_or_else(|| solgeom::Error::UnknownCatalogEntry {
                    kind: "fourth-order value",
                    name: name.to_string(),
                })?;
            for p in &pts {
                let pair = oriented_pair(submersion::biharmonic_residual(frame, p)?);
                worst = worst
                    .max((pair[0] - want[0]).abs())
                    .max((pair[1] - want[1]).abs());
            }
        }
        Ok(Record::residual(
            record,
            anchor_fourth_order(record),
            frames.len() * pts.len(),
            worst,
            self.tol(Family::Identity, tolerances::IDENTITY),
        ))
    }

    fn tension_norm_record(&self, idx: u64, name: &str) -> Result<Record> {
        let map = self.cat.map(name)?;
        let pts = self.cloud(idx, CLOUD, map.source().dim());
        let mut worst = 0.0f64;
        for p in &pts {
            worst = worst.max((map.tension_norm_at(p)? - 1.0).abs());
        }
        Ok(Record::residual(
            &format!("tension-norm/{name}"),
            "|tau| = 1 at every point: the tension equals the push-forward of the fiber mean curvature, which has unit length",
            pts.len(),
            worst,
            self.tol(Family::Identity, tolerances::IDENTITY),
        ))
    }

    fn bitension_norm_record(&self, idx: u64, name: &str) -> Result<Record> {
        let map = self.cat.map(name)?;
        let pts = self.cloud(idx, CLOUD, map.source().dim());
        let mut worst = 0.0f64;
        for p in &pts {
            worst = worst.max((map.bitension_norm_at(p)? - 2.0).abs());
        }
        let anchor = if name == "pi2" {
            "|tau^2| = 2 at every point of (x,y,z) -> (x,z): the bitension reduces to kappa1 times twice the unit tension direction, with kappa1^2 = 1"
        } else {
            "|tau^2| = 2 at every point of (x,y,z) -> (y,z)"
        };
        Ok(Record::residual(
            &format!("bitension-norm/{name}"),
            anchor,
            pts.len(),
            worst,
            self.tol(Family::Bitension, tolerances::FOURTH_ORDER),
        ))
    }

    fn cross_norm_catalog(&self, idx: u64) -> Result<Record> {
        let pts = self.cloud(idx, CLOUD, 3);
        let mut worst = 0.0f64;
        for (map_name, frame_name) in NORM_CROSS_SUITE {
            let map = self.cat.map(map_name)?;
            let frame = self.cat.frame(frame_name)?;
            for p in &pts {
                let pair = submersion::biharmonic_residual(frame, p)?;
                let data_norm = (pair[0] * pair[0] + pair[1] * pair[1]).sqrt();
                worst = worst.max((map.bitension_norm_at(p)? - data_norm).abs());
            }
        }
        Ok(Record::residual(
            "cross-norm/catalog",
            "|tau^2| of each catalog submersion equals the norm of the fourth-order residual pair of its adapted frame, pointwise",
            NORM_CROSS_SUITE.len() * pts.len(),
            worst,
            self.tol(Family::Bitension, tolerances::FOURTH_ORDER),
        ))
    }

    fn bitension_zero_example(&self, idx: u64) -> Result<Record> {
        let map = self.cat.map("example")?;
        let pts = self.cloud(idx, CLOUD, 3);
        let mut rng = SplitMix64::substream(self.seed, 1000 + idx);
        let mut draws: Vec<[f64; 4]> = vec![[1.0, 1.0, 0.0, 0.0]];
        while draws.len() < 4 {
            let d = [
                rng.uniform(-2.0, 2.0),
                rng.uniform(-2.0, 2.0),
                rng.uniform(-2.0, 2.0),
                rng.uniform(-2.0, 2.0),
            ];
            if d[0] * d[0] + d[1] * d[1] > 1e-4 {
                draws.push(d);
            }
        }
        let mut worst = 0.0f64;
        for d in &draws {
            let inst = map.with_params(&[("A", d[0]), ("B", d[1]), ("C", d[2]), ("D", d[3])]);
            for p in &pts {
                worst = worst.max(inst.bitension_norm_at(p)?);
            }
        }
        Ok(Record::residual(
            "bitension-zero/example",
            "tau^2 = 0 for (x,y,z) -> (y, A z^3 + B z^2 + C z + D) into the Euclidean plane, for every coefficient choice",
            draws.len() * pts.len(),
            worst,
            self.tol(Family::Bitension, tolerances::FOURTH_ORDER),
        ))
    }

    fn proper_biharmonic_example(&self, idx: u64) -> Result<Record> {
        let map = self.cat.map("example")?;
        let mut pts = self.cloud(idx, 25, 3);
        for p in &mut pts {
            p[2] = 1.0;
        }
        let mut worst = 0.0f64;
        let mut max_tension = 0.0f64;
        for p in &pts {
            worst = worst.max(map.bitension_norm_at(p)?);
            max_tension = max_tension.max(map.tension_norm_at(p)?);
        }
        // Properness: the tension must not vanish along z = 1, encoded as
        // a shortfall below a conservative floor.
        worst = worst.max((1e-3 - max_tension).max(0.0));
        Ok(Record::residual(
            "proper-biharmonic/example",
            "with A = B = 1, C = D = 0 the polynomial family is biharmonic but not harmonic: tau^2 = 0 while tau != 0 on the slice z = 1",
            pts.len(),
            worst,
            self.tol(Family::Bitension, tolerances::FOURTH_ORDER),
        ))
    }

    fn totally_geodesic_record(&self, idx: u64) -> Result<Record> {
        let mut worst = 0.0f64;
        let mut evals = 0;
        for name in TOTALLY_GEODESIC_SUITE {
            let map = self.cat.map(name)?;
            for p in self.cloud(idx, CLOUD, map.source().dim()) {
                worst = worst.max(map.tension_norm_at(&p)?);
                worst = worst.max(map.bitension_norm_at(&p)?);
                evals += 1;
            }
        }
        Ok(Record::residual(
            "totally-geodesic/slab_xz",
            "the isometric slab (x,z) -> (x, 0.7, z) of the half-plane model has tau = 0 and tau^2 = 0: totally geodesic fibers embed without tension",
            evals,
            worst,
            self.tol(Family::Identity, tolerances::IDENTITY),
        ))
    }

    /// The three probe records, shared with the `probe-rch` subcommand.
    pub fn probe_records(&self) -> Vec<Record> {
        let outcome = solgeom::probe::probe_infeasibility(self.restarts, self.seed);
        let control = solgeom::probe::probe_control(self.restarts, self.seed);
        vec![
            Record::value(
                "RCH/probe-min",
                "smallest residual of the obstruction system sigma^2 + (a_1^3)^2 = 1 + (a_2^3)^2, sigma^2 + (a_2^3)^2 = 1 + (a_1^3)^2, sigma a_3^3 = 0, |a^3| = 1 found by multistart search",
                self.restarts,
                outcome.min,
            ),
            Record::residual(
                "RCH/probe",
                "the obstruction system has no solution: the search minimum stays within 0.1 of the analytic floor 1, never near zero",
                self.restarts,
                (outcome.min - 1.0).abs(),
                tolerances::PROBE_SHORTFALL,
            ),
            Record::residual(
                "RCH/control",
                "the sign-flipped control system is feasible: the same search drives its residual to zero",
                self.restarts,
                control.min,
                tolerances::IDENTITY,
            ),
        ]
    }

    /// Worst deviation of a frame table (brackets or connection
    /// coefficients) from a constant golden table over a point cloud.
    fn table_worst(
        &self,
        idx: u64,
        frame: &FrameField,
        golden: &[[[f64; 3]; 3]; 3],
        table: impl Fn(&FrameField, &[f64]) -> Result<Vec<Vec<Vec<f64>>>>,
    ) -> Result<f64> {
        let mut worst = 0.0f64;
        for p in self.cloud(idx, CLOUD, 3) {
            let t = table(frame, &p)?;
            for i in 0..3 {
                for j in 0..3 {
                    for k in 0..3 {
                        worst = worst.max((t[i][j][k] - golden[i][j][k]).abs());
                    }
                }
            }
        }
        Ok(worst)
    }

    /// Worst deviation of a frame's rows, re-expressed in the model frame
    /// {e^{-z} d/dx, e^{z} d/dy, d/dz}, from constant golden rows.
    fn model_component_worst(
        &self,
        idx: u64,
        frame: &FrameField,
        golden: &[[f64; 3]; 3],
    ) -> Result<f64> {
        let mut worst = 0.0f64;
        for p in self.cloud(idx, CLOUD, 3) {
            let comp = frame.components_at(&p)?;
            let scale = [p[2].exp(), (-p[2]).exp(), 1.0];
            for i in 0..3 {
                for j in 0..3 {
                    worst = worst.max((comp[i][j] * scale[j] - golden[i][j]).abs());
                }
            }
        }
        Ok(worst)
    }
}

/// Sign-normalizes a residual pair: the first component of significant
/// magnitude is made positive. The underlying equations only determine
/// the pair up to the orientation of the vertical direction, and this
/// rule makes the reported values deterministic across orientations.
pub fn oriented_pair(pair: [f64; 2]) -> [f64; 2] {
    let s = if pair[0].abs() > 1e-9 {
        pair[0].signum()
    } else if pair[1].abs() > 1e-9 {
        pair[1].signum()
    } else {
        1.0
    };
    [s * pair[0], s * pair[1]]
}

fn anchor_fourth_order(record: &str) -> &'static str {
    if record.ends_with("case1") {
        "the fourth-order residual pair of the first flat-vertical frame is (2, 0) after sign normalization: Lap kappa1 - kappa1 (-K + f2^2) = 0 + 1 * 2 = 2, so the submersion is not biharmonic"
    } else {
        "the fourth-order residual pair of the second flat-vertical frame is (2, 0) after sign normalization, so the submersion is not biharmonic"
    }
}

/// Full frame curvature table generated from sectional values on
/// coordinate pairs: `R[i][j][i][j] = k` with the three index symmetries,
/// zero elsewhere.
fn sectional_golden(pairs: &[(usize, usize, f64)]) -> [[[[f64; 3]; 3]; 3]; 3] {
    let mut r = [[[[0.0f64; 3]; 3]; 3]; 3];
    for &(i, j, k) in pairs {
        r[i][j][i][j] = k;
        r[j][i][j][i] = k;
        r[i][j][j][i] = -k;
        r[j][i][i][j] = -k;
    }
    r
}

/// Records for the `curvature` subcommand: chart-level symmetry checks
/// and, when a frame is supplied, frame-route consistency.
pub fn curvature_records(
    manifold: &ChartedManifold,
    frame: Option<&FrameField>,
    pts: &[Vec<f64>],
    tols: &Overrides,
) -> Result<Vec<Record>> {
    let mut records = Vec::new();
    let d = manifold.dim();
    let mut sym = 0.0f64;
    for p in pts {
        let r = manifold.riemann_at(p)?;
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    for l in 0..d {
                        sym = sym.max((r[i][j][k][l] + r[j][i][k][l]).abs());
                        sym = sym.max((r[i][j][k][l] + r[i][j][l][k]).abs());
                        sym = sym.max((r[i][j][k][l] - r[k][l][i][j]).abs());
                        let bianchi = r[i][j][k][l] + r[i][k][l][j] + r[i][l][j][k];
                        sym = sym.max(bianchi.abs());
                    }
                }
            }
        }
    }
    records.push(Record::residual(
        &format!("curvature-symmetries/{}", manifold.name()),
        "antisymmetry in both index pairs, pair exchange symmetry, and the first Bianchi identity of the curvature tensor",
        pts.len(),
        sym,
        tols.resolve(Family::Curvature, tolerances::CURVATURE),
    ));

    if let Some(f) = frame {
        let mut orth = 0.0f64;
        let mut jac = 0.0f64;
        let mut consistency = 0.0f64;
        let mut trace = 0.0f64;
        for p in pts {
            orth = orth.max(f.orthonormality_residual_at(p)?);
            jac = jac.max(f.jacobi_residual_at(p)?);
            let rf = f.curvature_at(p)?;
            let low = manifold.riemann_at(p)?;
            let comp = f.components_at(p)?;
            for i in 0..d {
                for j in 0..d {
                    for k in 0..d {
                        for l in 0..d {
                            let mut acc = 0.0;
                            for (a, ca) in comp[i].iter().enumerate() {
                                for (b, cb) in comp[j].iter().enumerate() {
                                    for (c, cc) in comp[k].iter().enumerate() {
                                        for (dd, cd) in comp[l].iter().enumerate() {
                                            acc += ca * cb * cc * cd * low[a][b][c][dd];
                                        }
                                    }
                                }
                            }
                            consistency = consistency.max((acc - rf[i][j][k][l]).abs());
                        }
                    }
                }
            }
            let ric = f.ricci_at(p)?;
            let tr: f64 = (0..d).map(|i| ric[i][i]).sum();
            trace = trace.max((tr - manifold.scalar_curvature_at(p)?).abs());
        }
        let name = f.name();
        records.push(Record::residual(
            &format!("orthonormal/{name}"),
            "the Gram matrix of the frame is the identity at every sample",
            pts.len(),
            orth,
            tols.resolve(Family::Identity, tolerances::STRUCTURE),
        ));
        records.push(Record::residual(
            &format!("jacobi-vector/{name}"),
            "the vector-field Jacobi identity for the frame's structure coefficients",
            pts.len(),
            jac,
            tols.resolve(Family::Identity, tolerances::STRUCTURE),
        ));
        records.push(Record::residual(
            &format!("frame-consistency/{name}"),
            "frame curvature components equal the chart curvature tensor contracted with the frame rows",
            pts.len(),
            consistency,
            tols.resolve(Family::Curvature, tolerances::CURVATURE),
        ));
        records.push(Record::residual(
            &format!("ricci-trace/{name}"),
            "the trace of the frame Ricci tensor equals the chart scalar curvature",
            pts.len(),
            trace,
            tols.resolve(Family::Curvature, tolerances::CURVATURE),
        ));
    }
    Ok(records)
}

/// Per-point tension norm records for the `tension` subcommand.
pub fn tension_records(map: &SmoothMap, pts: &[Vec<f64>]) -> Result<Vec<Record>> {
    pts.iter()
        .enumerate()
        .map(|(i, p)| {
            let norm = map.tension_norm_at(p)?;
            Ok(Record::value(
                &format!("tension/{}/{i:03}", map.name()),
                &format!("|tau| at {p:?}"),
                1,
                norm,
            ))
        })
        .collect()
}

/// Per-point bitension norm records for the `bitension` subcommand.
pub fn bitension_records(map: &SmoothMap, pts: &[Vec<f64>]) -> Result<Vec<Record>> {
    pts.iter()
        .enumerate()
        .map(|(i, p)| {
            let norm = map.bitension_norm_at(p)?;
            Ok(Record::value(
                &format!("bitension/{}/{i:03}", map.name()),
                &format!("|tau^2| at {p:?}"),
                1,
                norm,
            ))
        })
        .collect()
}

/// Records for the `integrability` subcommand: the bracket shape, the
/// data-form consistency systems, and base-curvature descent for one
/// frame. Checks whose preconditions the frame does not meet are skipped
/// (the skip is deterministic, depending only on the frame).
pub fn integrability_records(
    frame: &FrameField,
    pts: &[Vec<f64>],
    tols: &Overrides,
) -> Result<Vec<Record>> {
    let name = frame.name();
    let mut records = Vec::new();

    let mut shape = 0.0f64;
    for p in pts {
        shape = shape.max(submersion::shape_residual_at(frame, p)?);
    }
    records.push(Record::residual(
        &format!("shape/{name}"),
        "the off-pattern bracket components vanish: [e1,e3] = f3 e2 + kappa1 e3 and [e2,e3] = -f3 e1 + kappa2 e3 hold in the designated-vertical frame",
        pts.len(),
        shape,
        tols.resolve(Family::Identity, tolerances::IDENTITY),
    ));

    let mut jac = 0.0f64;
    for p in pts {
        for r in submersion::check_jacobi(frame, p)? {
            jac = jac.max(r.abs());
        }
    }
    records.push(Record::residual(
        &format!("Jac/{name}"),
        "the three Jacobi consistency equations of the structure data",
        pts.len(),
        jac,
        tols.resolve(Family::Identity, tolerances::IDENTITY),
    ));

    let mut contraction = 0.0f64;
    for p in pts {
        for line in submersion::check_curvature_identities(frame, p)? {
            contraction = contraction
                .max(line.data_residual())
                .max(line.component_residual())
                .max((line.data_side - line.component_side).abs());
        }
    }
    records.push(Record::residual(
        &format!("RC0/{name}"),
        "the seven curvature contraction lines agree with their data-side and component-side closed forms",
        pts.len(),
        contraction,
        tols.resolve(Family::Curvature, tolerances::CONTRACTION),
    ));

    let mut descent = 0.0f64;
    for p in pts {
        descent = descent.max(submersion::gauss_curvature_base(frame, p)?.e3_derivative.abs());
    }
    records.push(Record::residual(
        &format!("GCB-descends/{name}"),
        "e3(K) = 0: the base curvature expression is constant along the fibers",
        pts.len(),
        descent,
        tols.resolve(Family::Identity, tolerances::IDENTITY),
    ));

    // The component identity system presupposes a_1^1 = 0; attempt one
    // point and skip the record when the frame is rejected.
    if submersion::check_thb2(frame, &pts[0]).is_ok() {
        let mut worst = 0.0f64;
        for p in pts {
            for r in submersion::check_thb2(frame, p)? {
                worst = worst.max(r.abs());
            }
        }
        records.push(Record::residual(
            &format!("thb2/{name}"),
            "the twelve-line component identity system (precondition a_1^1 = 0 met)",
            pts.len(),
            worst,
            tols.resolve(Family::Identity, tolerances::IDENTITY),
        ));
    }

    // The fourth-order residual eliminates the fiber rotation; skip when
    // f3 does not vanish.
    if submersion::biharmonic_residual(frame, &pts[0]).is_ok() {
        let mut norm = 0.0f64;
        for p in pts {
            let pair = submersion::biharmonic_residual(frame, p)?;
            norm = norm.max((pair[0] * pair[0] + pair[1] * pair[1]).sqrt());
        }
        records.push(Record::value(
            &format!("pro1-norm/{name}"),
            "largest norm of the fourth-order residual pair over the samples; 0 exactly for biharmonic submersions",
            pts.len(),
            norm,
        ));
    }
    Ok(records)
}

/// Records for the `submersion-check` subcommand.
pub fn submersion_records(
    map: &SmoothMap,
    pts: &[Vec<f64>],
    tols: &Overrides,
) -> Result<Vec<Record>> {
    let name = map.name();
    let mut isometry = 0.0f64;
    let mut fiber = 0.0f64;
    let mut tension_max = 0.0f64;
    for p in pts {
        let check = map.submersion_check_at(p)?;
        isometry = isometry.max(check.isometry_residual);
        fiber = fiber.max(check.tension_vs_fiber_residual);
        tension_max = tension_max.max(map.tension_norm_at(p)?);
    }
    Ok(vec![
        Record::residual(
            &format!("isometry/{name}"),
            "the differential carries a g-orthonormal horizontal basis to an h-orthonormal basis at every sample",
            pts.len(),
            isometry,
            tols.resolve(Family::Curvature, tolerances::CURVATURE),
        ),
        Record::residual(
            &format!("fiber-tension/{name}"),
            "tau + d phi(nabla_v v) = 0: the tension is minus the push-forward of the fiber mean curvature",
            pts.len(),
            fiber,
            tols.resolve(Family::Identity, tolerances::IDENTITY),
        ),
        Record::value(
            &format!("tension-range/{name}"),
            "largest tension norm over the samples; 0 exactly for harmonic submersions",
            pts.len(),
            tension_max,
        ),
    ])
}

/// Default point spec for the subject-focused subcommands.
pub fn default_points(seed: u64) -> PointSpec {
    PointSpec::Random { n: CLOUD, seed }
}

/// Default quasi-random cloud for `submersion-check`.
pub fn default_submersion_points(dim: usize) -> Vec<Vec<f64>> {
    halton_points(SUBMERSION_CLOUD, dim)
}
