//! Chart-based Riemannian geometry engine.
//!
//! The crate evaluates differential-geometric quantities of manifolds given
//! by a single coordinate chart with a symbolic metric, and of smooth maps
//! between such manifolds given by symbolic component expressions:
//!
//! * Levi-Civita connection, curvature tensor, Ricci tensor, Gauss curvature
//!   ([`geometry`]);
//! * orthonormal frame fields, their Lie brackets, connection coefficients
//!   and frame curvature ([`frame`]);
//! * differentials, tension and bitension fields of maps, Riemannian
//!   submersion checks ([`mapcalc`]);
//! * the adapted-frame calculus of a submersion with one-dimensional fibers:
//!   structure data, Jacobi consistency, curvature contractions, base Gauss
//!   curvature, harmonicity and the fourth-order residual ([`submersion`]);
//! * a numerical infeasibility probe for a small algebraic obstruction
//!   system ([`probe`]);
//! * ready-made model spaces, frames and projections ([`catalog`]).
//!
//! All differentiation is exact forward-mode arithmetic in a truncated
//! multivariate Taylor algebra ([`expr::taylor`]); no finite differences are
//! used anywhere in the engine. Finite differences appear only in the test
//! suite as an independent oracle.
//!
//! # Conventions
//!
//! The curvature operator is
//! `R(X,Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_[X,Y] Z`
//! and the lowered tensor is `R(X,Y,Z,W) = g(R(Z,W)Y, X)`, equivalently
//! `-g(R(X,Y)Z, W)`. With this pairing the round sphere of radius 1 has
//! `R(X,Y,X,Y) = +1` for orthonormal `X, Y`, and sectional curvature equals
//! `R(X,Y,X,Y)` on orthonormal pairs. The Ricci tensor is the trace
//! `Ric(X,Y) = sum_i g(R(X, E_i) E_i, Y)` over an orthonormal frame.
//!
//! The crate is `no_std`-compatible: disable the default `std` feature and
//! enable `libm` to route float math through software implementations.
#![cfg_attr(not(feature = "std"), no_std)]
#![deny(unsafe_code)]

extern crate alloc;

#[cfg(all(not(feature = "std"), not(feature = "libm")))]
compile_error!("either the `std` or the `libm` feature must be enabled");

pub mod catalog;
pub mod error;
pub mod expr;
pub mod frame;
pub mod geometry;
pub mod mapcalc;
pub mod probe;
pub mod sample;
mod scalar;
pub mod submersion;

pub use error::Error;
pub use expr::{parse, Expr, Jet};
pub use geometry::ChartedManifold;
pub use mapcalc::SmoothMap;

/// Crate-wide result alias.
pub type Result<T> = core::result::Result<T, Error>;
