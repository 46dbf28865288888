//! Orthonormal frame fields on a charted manifold.
//!
//! A [`FrameField`] assigns to each chart point an ordered tuple of vector
//! fields, given componentwise by expressions in the chart coordinates.
//! Every evaluation first validates `g`-orthonormality at the point (Gram
//! matrix within `1e-10` of the identity) and fails loudly otherwise.
//!
//! Derived pointwise data:
//!
//! * Lie brackets `[e_i, e_j]^a = e_i^b d_b e_j^a - e_j^b d_b e_i^a`,
//!   expanded in the frame itself through the structure coefficients
//!   `c^k_ij = <[e_i, e_j], e_k>`;
//! * Levi-Civita connection coefficients via the Koszul formula, which for
//!   orthonormal frames collapses to
//!   `w^k_ij = <nabla_{e_i} e_j, e_k> = (c_ijk - c_jki + c_kij) / 2`;
//! * curvature components `R(e_i, e_j, e_k, e_l)` by contracting the
//!   lowered coordinate curvature with the frame components, and the frame
//!   Ricci tensor likewise.
//!
//! The connection coefficients satisfy `w^k_ij = -w^j_ik` (metric
//! compatibility) and `w^k_ij - w^k_ji = c^k_ij` (zero torsion); both are
//! exercised by the test suite.

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::error::Error;
use crate::expr::jet::eval_tl;
use crate::expr::taylor::{TaylorCtx, Tl};
use crate::expr::{parse, Expr};
use crate::geometry::{ChartedManifold, MetricJets};
use crate::scalar;
use crate::Result;

/// Gram-matrix deviation above which a frame is rejected as not
/// orthonormal. Catalog frames are exact up to rounding in `exp`/`sqrt`;
/// anything near this bound indicates a genuinely wrong frame.
pub const ORTHONORMALITY_TOL: f64 = 1e-10;

/// An ordered orthonormal frame field on a chart.
#[derive(Debug, Clone)]
pub struct FrameField {
    name: String,
    manifold: ChartedManifold,
    /// `vectors[i]` holds the chart components of the i-th frame field.
    vectors: Vec<Vec<Expr>>,
    /// Index of the member designated as vertical, if any.
    vertical: Option<usize>,
}

impl FrameField {
    pub fn new(
        name: &str,
        manifold: ChartedManifold,
        vectors: &[Vec<Expr>],
        vertical: Option<usize>,
    ) -> Result<FrameField> {
        let dim = manifold.dim();
        if vectors.len() != dim {
            return Err(Error::DimensionMismatch {
                context: alloc::format!("frame `{name}` member count"),
                expected: dim,
                found: vectors.len(),
            });
        }
        for (i, v) in vectors.iter().enumerate() {
            if v.len() != dim {
                return Err(Error::DimensionMismatch {
                    context: alloc::format!("components of member {i} of frame `{name}`"),
                    expected: dim,
                    found: v.len(),
                });
            }
        }
        if let Some(k) = vertical {
            if k >= dim {
                return Err(Error::DimensionMismatch {
                    context: alloc::format!("vertical index of frame `{name}`"),
                    expected: dim - 1,
                    found: k,
                });
            }
        }
        Ok(FrameField {
            name: name.to_string(),
            manifold,
            vectors: vectors.to_vec(),
            vertical,
        })
    }

    /// Convenience constructor parsing components from text; `vectors[i]`
    /// lists the chart components of the i-th member.
    pub fn from_strs(
        name: &str,
        manifold: ChartedManifold,
        vectors: &[&[&str]],
        vertical: Option<usize>,
    ) -> Result<FrameField> {
        let mut rows = Vec::with_capacity(vectors.len());
        for row in vectors {
            let mut parsed = Vec::with_capacity(row.len());
            for s in *row {
                parsed.push(parse(s)?);
            }
            rows.push(parsed);
        }
        FrameField::new(name, manifold, &rows, vertical)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn manifold(&self) -> &ChartedManifold {
        &self.manifold
    }

    pub fn dim(&self) -> usize {
        self.manifold.dim()
    }

    pub fn vertical_index(&self) -> Option<usize> {
        self.vertical
    }

    pub fn component_expr(&self, member: usize, coord: usize) -> &Expr {
        &self.vectors[member][coord]
    }

    /// Frame component values at a point, `[member][coordinate]`.
    pub fn components_at(&self, p: &[f64]) -> Result<Vec<Vec<f64>>> {
        let fj = self.jets_at(p)?;
        Ok((0..fj.dim())
            .map(|i| {
                (0..fj.dim())
                    .map(|a| fj.mj.ctx.value(&fj.e[i][a]))
                    .collect()
            })
            .collect())
    }

    /// Max deviation of the Gram matrix from the identity at a point.
    pub fn orthonormality_residual_at(&self, p: &[f64]) -> Result<f64> {
        let fj = self.jets_unchecked(p)?;
        Ok(fj.gram_residual())
    }

    /// Evaluates the frame at `p` and validates orthonormality.
    pub(crate) fn jets_at(&self, p: &[f64]) -> Result<FrameJets> {
        let fj = self.jets_unchecked(p)?;
        let residual = fj.gram_residual();
        if residual > ORTHONORMALITY_TOL {
            return Err(Error::NonOrthonormalFrame {
                point: p.to_vec(),
                residual,
            });
        }
        Ok(fj)
    }

    fn jets_unchecked(&self, p: &[f64]) -> Result<FrameJets> {
        let mj = self.manifold.jets_at(p)?;
        let dim = mj.dim;
        let mut e = Vec::with_capacity(dim);
        for member in &self.vectors {
            let mut comps = Vec::with_capacity(dim);
            for expr in member {
                comps.push(eval_expr(expr, &mj, &self.manifold)?);
            }
            e.push(comps);
        }
        Ok(FrameJets { mj, e })
    }

    /// Structure coefficients `c^k_ij` with `[e_i, e_j] = c^k_ij e_k`,
    /// indexed `[i][j][k]`.
    pub fn brackets_at(&self, p: &[f64]) -> Result<Vec<Vec<Vec<f64>>>> {
        let fj = self.jets_at(p)?;
        let c = fj.structure_tl();
        let d = fj.dim();
        Ok((0..d)
            .map(|i| {
                (0..d)
                    .map(|j| (0..d).map(|k| fj.mj.ctx.value(&c[(i * d + j) * d + k])).collect())
                    .collect()
            })
            .collect())
    }

    /// Connection coefficients `w^k_ij = <nabla_{e_i} e_j, e_k>`, indexed
    /// `[i][j][k]`.
    pub fn connection_at(&self, p: &[f64]) -> Result<Vec<Vec<Vec<f64>>>> {
        let fj = self.jets_at(p)?;
        let w = fj.connection_tl(&fj.structure_tl());
        let d = fj.dim();
        Ok((0..d)
            .map(|i| {
                (0..d)
                    .map(|j| (0..d).map(|k| fj.mj.ctx.value(&w[(i * d + j) * d + k])).collect())
                    .collect()
            })
            .collect())
    }

    /// Curvature components `R(e_i, e_j, e_k, e_l)` under the crate's
    /// pairing, indexed `[i][j][k][l]`.
    pub fn curvature_at(&self, p: &[f64]) -> Result<Vec<Vec<Vec<Vec<f64>>>>> {
        let fj = self.jets_at(p)?;
        let low = fj.mj.riemann_lowered();
        let d = fj.dim();
        let comp: Vec<Vec<f64>> = (0..d)
            .map(|i| (0..d).map(|a| fj.mj.ctx.value(&fj.e[i][a])).collect())
            .collect();
        let low_v: Vec<f64> = low.iter().map(|t| fj.mj.ctx.value(t)).collect();
        let idx = |i: usize, j: usize, k: usize, l: usize| ((i * d + j) * d + k) * d + l;
        let mut out = vec![vec![vec![vec![0.0; d]; d]; d]; d];
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    for l in 0..d {
                        let mut acc = 0.0;
                        for a in 0..d {
                            for b in 0..d {
                                for cc in 0..d {
                                    for dd in 0..d {
                                        let w = comp[i][a] * comp[j][b] * comp[k][cc] * comp[l][dd];
                                        if w != 0.0 {
                                            acc += w * low_v[idx(a, b, cc, dd)];
                                        }
                                    }
                                }
                            }
                        }
                        out[i][j][k][l] = acc;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Ricci tensor in the frame, `Ric(e_i, e_j)`, indexed `[i][j]`.
    pub fn ricci_at(&self, p: &[f64]) -> Result<Vec<Vec<f64>>> {
        let r = self.curvature_at(p)?;
        let d = self.dim();
        // Ric(X, Y) = sum_i R(X, e_i, Y, e_i) for orthonormal frames.
        Ok((0..d)
            .map(|i| {
                (0..d)
                    .map(|j| (0..d).map(|k| r[i][k][j][k]).sum())
                    .collect()
            })
            .collect())
    }

    /// Max residual of the Jacobi identity expressed through structure
    /// coefficients:
    /// `sum_cyc(i,j,k) [ e_i(c^l_jk) + c^m_jk c^l_im ] = 0` for each `l`.
    pub fn jacobi_residual_at(&self, p: &[f64]) -> Result<f64> {
        let fj = self.jets_at(p)?;
        let ctx = &fj.mj.ctx;
        let d = fj.dim();
        let c = fj.structure_tl();
        let at = |i: usize, j: usize, k: usize| &c[(i * d + j) * d + k];
        let mut worst: f64 = 0.0;
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    for l in 0..d {
                        let mut acc = 0.0;
                        for (a, b, cc) in [(i, j, k), (j, k, i), (k, i, j)] {
                            acc += ctx.value(&fj.dir_deriv(a, at(b, cc, l)));
                            for m in 0..d {
                                acc += ctx.value(at(b, cc, m)) * ctx.value(at(a, m, l));
                            }
                        }
                        worst = worst.max(scalar::abs(acc));
                    }
                }
            }
        }
        Ok(worst)
    }
}

fn eval_expr(expr: &Expr, mj: &MetricJets, manifold: &ChartedManifold) -> Result<Tl> {
    let mut lookup = |name: &str| {
        manifold
            .coords()
            .iter()
            .position(|c| c == name)
            .map(|i| mj.seeds[i].clone())
    };
    eval_tl(expr, &mj.ctx, &mut lookup)
}

/// One frame evaluated at one point, in Taylor form.
pub(crate) struct FrameJets {
    pub mj: MetricJets,
    /// `e[member][coordinate]`, order-4 accurate.
    pub e: Vec<Vec<Tl>>,
}

impl FrameJets {
    pub fn dim(&self) -> usize {
        self.mj.dim
    }

    pub fn ctx(&self) -> &TaylorCtx {
        &self.mj.ctx
    }

    fn gram_residual(&self) -> f64 {
        let ctx = &self.mj.ctx;
        let d = self.dim();
        let mut worst: f64 = 0.0;
        for i in 0..d {
            for j in 0..d {
                let ip = ctx.value(&self.inner(&self.e[i], &self.e[j]));
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max(scalar::abs(ip - target));
            }
        }
        worst
    }

    /// `g`-inner product of two component vectors.
    pub fn inner(&self, u: &[Tl], v: &[Tl]) -> Tl {
        let ctx = &self.mj.ctx;
        let d = self.dim();
        let mut acc = ctx.zero();
        for a in 0..d {
            for b in 0..d {
                acc = ctx.add(&acc, &ctx.mul(&self.mj.g[a * d + b], &ctx.mul(&u[a], &v[b])));
            }
        }
        acc
    }

    /// Directional derivative of a scalar series along frame member `i`.
    pub fn dir_deriv(&self, i: usize, s: &Tl) -> Tl {
        let ctx = &self.mj.ctx;
        let mut acc = ctx.zero();
        for a in 0..self.dim() {
            acc = ctx.add(&acc, &ctx.mul(&self.e[i][a], &ctx.deriv(s, a)));
        }
        acc
    }

    /// Chart components of `[e_i, e_j]`, order-3 accurate.
    pub fn bracket(&self, i: usize, j: usize) -> Vec<Tl> {
        let ctx = &self.mj.ctx;
        let d = self.dim();
        (0..d)
            .map(|a| {
                let mut acc = ctx.zero();
                for b in 0..d {
                    acc = ctx.add(&acc, &ctx.mul(&self.e[i][b], &ctx.deriv(&self.e[j][a], b)));
                    acc = ctx.sub(&acc, &ctx.mul(&self.e[j][b], &ctx.deriv(&self.e[i][a], b)));
                }
                acc
            })
            .collect()
    }

    /// Structure coefficients `c_ijk = <[e_i, e_j], e_k>` flattened at
    /// `(i*d + j)*d + k`, order-3 accurate. For orthonormal frames these
    /// equal the expansion coefficients `c^k_ij`.
    pub fn structure_tl(&self) -> Vec<Tl> {
        let d = self.dim();
        let mut out = vec![self.mj.ctx.zero(); d * d * d];
        for i in 0..d {
            for j in (i + 1)..d {
                let br = self.bracket(i, j);
                for k in 0..d {
                    let c = self.inner(&br, &self.e[k]);
                    out[(i * d + j) * d + k] = c.clone();
                    out[(j * d + i) * d + k] = self.mj.ctx.neg(&c);
                }
            }
        }
        out
    }

    /// Koszul connection coefficients `w^k_ij` flattened like
    /// [`Self::structure_tl`], order-3 accurate.
    pub fn connection_tl(&self, c: &[Tl]) -> Vec<Tl> {
        let ctx = &self.mj.ctx;
        let d = self.dim();
        let at = |i: usize, j: usize, k: usize| &c[(i * d + j) * d + k];
        let mut out = vec![ctx.zero(); d * d * d];
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    let s = ctx.add(&ctx.sub(at(i, j, k), at(j, k, i)), at(k, i, j));
                    out[(i * d + j) * d + k] = ctx.scale(0.5, &s);
                }
            }
        }
        out
    }
}
