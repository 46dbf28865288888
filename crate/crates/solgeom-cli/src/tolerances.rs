//! Report tolerances, centralized.
//!
//! Every residual record carries one of the base tolerances below, chosen
//! by the numerical depth of the quantity being checked rather than per
//! call site:
//!
//! * [`EXACT`]: closed-form golden values whose only error source is float
//!   roundoff through `exp`/`sqrt` (metric entries, constant frame rows,
//!   constant-data base curvature).
//! * [`STRUCTURE`]: first-order structure of frames (Lie brackets,
//!   connection coefficients, extracted submersion data). One symbolic
//!   differentiation on top of the chart data.
//! * [`CURVATURE`]: second-order curvature quantities (frame curvature
//!   tables, Ricci, Gauss curvature, submersion isometry residuals).
//! * [`IDENTITY`]: multi-term identity systems that sum many curvature and
//!   derivative terms (Jacobi consistency, the twelve-line component
//!   system, base-curvature matching, harmonicity, tension norms).
//! * [`CONTRACTION`]: the seven curvature-contraction lines compared three
//!   ways (curvature value, data expression, component expression).
//! * [`FOURTH_ORDER`]: fourth-order quantities: bitension norms, the
//!   second-order-on-second-order residual pair, and norm cross-checks.
//!
//! The probe records use [`PROBE_SHORTFALL`]: the multistart minimum must
//! come within that distance of the analytic floor of 1. It is a search
//! quality bound, not a float tolerance, and no flag overrides it.
//!
//! Three command-line knobs override whole groups: `--tol-identity`
//! replaces the bases of the `EXACT`/`STRUCTURE`/`IDENTITY` records,
//! `--tol-curvature` the `CURVATURE`/`CONTRACTION` records, and
//! `--tol-bitension` the `FOURTH_ORDER` records.

/// Closed-form values, pure roundoff.
pub const EXACT: f64 = 1e-12;

/// First-order frame structure: brackets, connection tables, data fields.
pub const STRUCTURE: f64 = 1e-10;

/// Curvature tables, Ricci, Gauss curvature, isometry residuals.
pub const CURVATURE: f64 = 1e-9;

/// Multi-term identity systems and tension norms.
pub const IDENTITY: f64 = 1e-8;

/// Curvature-contraction lines compared pairwise across three routes.
pub const CONTRACTION: f64 = 1e-7;

/// Bitension norms and fourth-order residual comparisons.
pub const FOURTH_ORDER: f64 = 1e-6;

/// Allowed gap between the multistart minimum and the analytic floor.
pub const PROBE_SHORTFALL: f64 = 0.1;

/// Which override knob, if any, governs a record's tolerance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// `--tol-identity`: exact values, structure tables, identity systems.
    Identity,
    /// `--tol-curvature`: curvature tables and contraction lines.
    Curvature,
    /// `--tol-bitension`: fourth-order quantities.
    Bitension,
    /// Never overridden (the probe search-quality bound).
    Fixed,
}

/// Optional per-family overrides collected from the command line.
#[derive(Debug, Clone, Copy, Default)]
pub struct Overrides {
    pub identity: Option<f64>,
    pub curvature: Option<f64>,
    pub bitension: Option<f64>,
}

impl Overrides {
    /// The tolerance a record should carry: the family override when the
    /// flag was given, otherwise the record's base.
    pub fn resolve(&self, family: Family, base: f64) -> f64 {
        match family {
            Family::Identity => self.identity.unwrap_or(base),
            Family::Curvature => self.curvature.unwrap_or(base),
            Family::Bitension => self.bitension.unwrap_or(base),
            Family::Fixed => base,
        }
    }
}
