//! Chart-based Riemannian manifolds and their curvature.
//!
//! A [`ChartedManifold`] is a single coordinate chart of dimension 2 or 3
//! with a symbolic metric. The metric is supplied as the upper triangle of
//! its coefficient matrix and mirrored, so symmetry holds by construction;
//! positive definiteness is validated pointwise through leading principal
//! minors whenever something is evaluated.
//!
//! All pointwise quantities are computed by evaluating the metric
//! coefficients into the truncated Taylor algebra and applying the
//! coordinate formulas:
//!
//! * Christoffel symbols
//!   `Gamma^k_ij = 1/2 g^kl (d_i g_lj + d_j g_li - d_l g_ij)`;
//! * mixed curvature
//!   `R^m_j;kl = d_k Gamma^m_lj - d_l Gamma^m_kj
//!              + Gamma^m_kn Gamma^n_lj - Gamma^m_ln Gamma^n_kj`,
//!   which is the operator `R(d_k, d_l) d_j` expressed in the chart;
//! * lowered curvature `R[i][j][k][l] = g_im R^m_j;kl`, equal to
//!   `R(d_i, d_j, d_k, d_l)` under the pairing fixed in the crate docs
//!   (`R(X,Y,Z,W) = g(R(Z,W)Y, X)`);
//! * Ricci `Ric_cd = g^ab R[d][b][c][a]` (trace over an orthonormal frame
//!   of `g(R(X, e)e, Y)`);
//! * Gauss curvature of a surface chart `K = R[0][1][0][1] / det g`.

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::error::Error;
use crate::expr::jet::eval_tl;
use crate::expr::taylor::{TaylorCtx, Tl};
use crate::expr::{parse, Expr};
use crate::Result;

/// A coordinate chart with a symbolic Riemannian metric.
#[derive(Debug, Clone)]
pub struct ChartedManifold {
    name: String,
    coords: Vec<String>,
    /// Full symmetric coefficient matrix, row-major.
    metric: Vec<Expr>,
}

impl ChartedManifold {
    /// Builds a chart from coordinate names and the upper triangle of the
    /// metric: `upper[i]` holds `g[i][i], g[i][i+1], ..., g[i][dim-1]`.
    /// Supplying full square rows is rejected, which keeps symmetry a
    /// construction invariant rather than a runtime check.
    pub fn new(name: &str, coords: &[&str], upper: &[Vec<Expr>]) -> Result<ChartedManifold> {
        let dim = coords.len();
        if !(2..=3).contains(&dim) {
            return Err(Error::DimensionMismatch {
                context: "chart dimension (supported: 2 or 3)".to_string(),
                expected: if dim < 2 { 2 } else { 3 },
                found: dim,
            });
        }
        for (i, c) in coords.iter().enumerate() {
            let ok = !c.is_empty()
                && c.bytes().next().is_some_and(|b| b.is_ascii_alphabetic() || b == b'_')
                && c.bytes().all(|b| b.is_ascii_alphanumeric() || b == b'_');
            if !ok {
                return Err(Error::Parse {
                    offset: 0,
                    message: alloc::format!("invalid coordinate name `{c}`"),
                });
            }
            if coords[..i].contains(c) {
                return Err(Error::Parse {
                    offset: 0,
                    message: alloc::format!("duplicate coordinate name `{c}`"),
                });
            }
        }
        if upper.len() != dim {
            return Err(Error::DimensionMismatch {
                context: alloc::format!("metric rows of `{name}`"),
                expected: dim,
                found: upper.len(),
            });
        }
        let mut metric = vec![Expr::Num(0.0); dim * dim];
        for (i, row) in upper.iter().enumerate() {
            if row.len() != dim - i {
                return Err(Error::DimensionMismatch {
                    context: alloc::format!(
                        "metric row {i} of `{name}` (upper triangle: g[{i}][{i}..])"
                    ),
                    expected: dim - i,
                    found: row.len(),
                });
            }
            for (off, e) in row.iter().enumerate() {
                let j = i + off;
                metric[i * dim + j] = e.clone();
                metric[j * dim + i] = e.clone();
            }
        }
        Ok(ChartedManifold {
            name: name.to_string(),
            coords: coords.iter().map(|c| c.to_string()).collect(),
            metric,
        })
    }

    /// Convenience constructor parsing the upper-triangle entries from text.
    pub fn from_strs(name: &str, coords: &[&str], upper: &[&[&str]]) -> Result<ChartedManifold> {
        let mut rows = Vec::with_capacity(upper.len());
        for row in upper {
            let mut parsed = Vec::with_capacity(row.len());
            for s in *row {
                parsed.push(parse(s)?);
            }
            rows.push(parsed);
        }
        ChartedManifold::new(name, coords, &rows)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[String] {
        &self.coords
    }

    /// Metric coefficient expression `g[i][j]`.
    pub fn metric_expr(&self, i: usize, j: usize) -> &Expr {
        &self.metric[i * self.dim() + j]
    }

    fn check_point(&self, p: &[f64]) -> Result<()> {
        if p.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                context: alloc::format!("point on `{}`", self.name),
                expected: self.dim(),
                found: p.len(),
            });
        }
        Ok(())
    }

    /// Evaluates metric machinery at `p` into the shared Taylor context.
    /// Accuracy: metric and inverse metric to order 4, Christoffels to 3.
    pub(crate) fn jets_at(&self, p: &[f64]) -> Result<MetricJets> {
        self.check_point(p)?;
        let dim = self.dim();
        let ctx = TaylorCtx::new(dim, 4);
        let seeds: Vec<Tl> = (0..dim).map(|i| ctx.variable(i, p[i])).collect();
        let mut lookup = |name: &str| {
            self.coords
                .iter()
                .position(|c| c == name)
                .map(|i| seeds[i].clone())
        };
        let mut g = Vec::with_capacity(dim * dim);
        for e in &self.metric {
            g.push(eval_tl(e, &ctx, &mut lookup)?);
        }
        // Positive definiteness at the point: leading principal minors.
        let vals: Vec<f64> = g.iter().map(|t| ctx.value(t)).collect();
        for k in 1..=dim {
            if leading_minor(&vals, dim, k) <= 0.0 {
                return Err(Error::MetricNotPositiveDefinite {
                    point: p.to_vec(),
                    leading_minor: k,
                });
            }
        }
        let ginv = ctx
            .invert_matrix(&g, dim)
            .map_err(|_| Error::MetricNotPositiveDefinite {
                point: p.to_vec(),
                leading_minor: dim,
            })?;
        // dg[l][i][j] = d_l g_ij
        let mut dg = vec![ctx.zero(); dim * dim * dim];
        for l in 0..dim {
            for i in 0..dim {
                for j in 0..dim {
                    dg[(l * dim + i) * dim + j] = ctx.deriv(&g[i * dim + j], l);
                }
            }
        }
        let mut gamma = vec![ctx.zero(); dim * dim * dim];
        for k in 0..dim {
            for i in 0..dim {
                for j in 0..=i {
                    let mut acc = ctx.zero();
                    for l in 0..dim {
                        // d_i g_lj + d_j g_li - d_l g_ij
                        let mut s = ctx.add(
                            &dg[(i * dim + l) * dim + j],
                            &dg[(j * dim + l) * dim + i],
                        );
                        s = ctx.sub(&s, &dg[(l * dim + i) * dim + j]);
                        acc = ctx.add(&acc, &ctx.mul(&ginv[k * dim + l], &s));
                    }
                    let half = ctx.scale(0.5, &acc);
                    gamma[(k * dim + i) * dim + j] = half.clone();
                    gamma[(k * dim + j) * dim + i] = half;
                }
            }
        }
        Ok(MetricJets {
            ctx,
            dim,
            seeds,
            g,
            ginv,
            gamma,
        })
    }

    /// Metric coefficients at a point (validated positive definite).
    pub fn metric_at(&self, p: &[f64]) -> Result<Vec<Vec<f64>>> {
        let mj = self.jets_at(p)?;
        Ok(mj.matrix_values(&mj.g))
    }

    /// Inverse metric coefficients at a point.
    pub fn inverse_metric_at(&self, p: &[f64]) -> Result<Vec<Vec<f64>>> {
        let mj = self.jets_at(p)?;
        Ok(mj.matrix_values(&mj.ginv))
    }

    /// Christoffel symbols `Gamma^k_ij` at a point, indexed `[k][i][j]`.
    pub fn christoffel_at(&self, p: &[f64]) -> Result<Vec<Vec<Vec<f64>>>> {
        let mj = self.jets_at(p)?;
        let d = mj.dim;
        Ok((0..d)
            .map(|k| {
                (0..d)
                    .map(|i| (0..d).map(|j| mj.ctx.value(&mj.gamma_tl(k, i, j))).collect())
                    .collect()
            })
            .collect())
    }

    /// Lowered curvature `R(d_i, d_j, d_k, d_l)` at a point, indexed
    /// `[i][j][k][l]`; see the module docs for the pairing.
    pub fn riemann_at(&self, p: &[f64]) -> Result<Vec<Vec<Vec<Vec<f64>>>>> {
        let mj = self.jets_at(p)?;
        let low = mj.riemann_lowered();
        let d = mj.dim;
        Ok((0..d)
            .map(|i| {
                (0..d)
                    .map(|j| {
                        (0..d)
                            .map(|k| {
                                (0..d)
                                    .map(|l| mj.ctx.value(&low[((i * d + j) * d + k) * d + l]))
                                    .collect()
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect())
    }

    /// Ricci tensor at a point, indexed `[i][j]`.
    pub fn ricci_at(&self, p: &[f64]) -> Result<Vec<Vec<f64>>> {
        let mj = self.jets_at(p)?;
        let low = mj.riemann_lowered();
        let d = mj.dim;
        let idx = |i: usize, j: usize, k: usize, l: usize| ((i * d + j) * d + k) * d + l;
        let mut ric = vec![vec![0.0; d]; d];
        for c in 0..d {
            for dd in 0..d {
                let mut acc = 0.0;
                for a in 0..d {
                    for b in 0..d {
                        acc += mj.ctx.value(&mj.ginv[a * d + b])
                            * mj.ctx.value(&low[idx(dd, b, c, a)]);
                    }
                }
                ric[c][dd] = acc;
            }
        }
        Ok(ric)
    }

    /// Scalar curvature at a point.
    pub fn scalar_curvature_at(&self, p: &[f64]) -> Result<f64> {
        let ric = self.ricci_at(p)?;
        let ginv = self.inverse_metric_at(p)?;
        let d = self.dim();
        let mut acc = 0.0;
        for i in 0..d {
            for j in 0..d {
                acc += ginv[i][j] * ric[i][j];
            }
        }
        Ok(acc)
    }

    /// Gauss curvature of a 2-dimensional chart:
    /// `K = R(d_1, d_2, d_1, d_2) / det g`.
    pub fn gauss_curvature_at(&self, p: &[f64]) -> Result<f64> {
        if self.dim() != 2 {
            return Err(Error::DimensionMismatch {
                context: alloc::format!("gauss curvature of `{}`", self.name),
                expected: 2,
                found: self.dim(),
            });
        }
        let mj = self.jets_at(p)?;
        let low = mj.riemann_lowered();
        let r1212 = mj.ctx.value(&low[((0 * 2 + 1) * 2 + 0) * 2 + 1]);
        let det = mj.ctx.value(&mj.g[0]) * mj.ctx.value(&mj.g[3])
            - mj.ctx.value(&mj.g[1]) * mj.ctx.value(&mj.g[2]);
        Ok(r1212 / det)
    }
}

fn leading_minor(vals: &[f64], dim: usize, k: usize) -> f64 {
    match k {
        1 => vals[0],
        2 => vals[0] * vals[dim + 1] - vals[1] * vals[dim],
        3 => {
            let m = |i: usize, j: usize| vals[i * dim + j];
            m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1))
                - m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0))
                + m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0))
        }
        _ => unreachable!("dim <= 3"),
    }
}

/// Metric data of one chart evaluated at one point, in Taylor form.
pub(crate) struct MetricJets {
    pub ctx: TaylorCtx,
    pub dim: usize,
    /// Coordinate variables seeded at the point.
    #[allow(dead_code)]
    pub seeds: Vec<Tl>,
    /// `g[i*dim+j]`, order-4 accurate.
    pub g: Vec<Tl>,
    /// `g^ij`, order-4 accurate.
    pub ginv: Vec<Tl>,
    /// `Gamma^k_ij` at `(k*dim+i)*dim+j`, order-3 accurate.
    pub gamma: Vec<Tl>,
}

impl MetricJets {
    pub fn gamma_tl(&self, k: usize, i: usize, j: usize) -> Tl {
        self.gamma[(k * self.dim + i) * self.dim + j].clone()
    }

    fn matrix_values(&self, m: &[Tl]) -> Vec<Vec<f64>> {
        let d = self.dim;
        (0..d)
            .map(|i| (0..d).map(|j| self.ctx.value(&m[i * d + j])).collect())
            .collect()
    }

    /// Mixed curvature `R^m_j;kl` at `((m*d+j)*d+k)*d+l`, order-2 accurate.
    pub fn riemann_mixed(&self) -> Vec<Tl> {
        let d = self.dim;
        let ctx = &self.ctx;
        let gam = |k: usize, i: usize, j: usize| &self.gamma[(k * d + i) * d + j];
        let mut out = vec![ctx.zero(); d * d * d * d];
        for m in 0..d {
            for j in 0..d {
                for k in 0..d {
                    for l in 0..d {
                        let mut acc = ctx.sub(&ctx.deriv(gam(m, l, j), k), &ctx.deriv(gam(m, k, j), l));
                        for n in 0..d {
                            acc = ctx.add(&acc, &ctx.mul(gam(m, k, n), gam(n, l, j)));
                            acc = ctx.sub(&acc, &ctx.mul(gam(m, l, n), gam(n, k, j)));
                        }
                        out[((m * d + j) * d + k) * d + l] = acc;
                    }
                }
            }
        }
        out
    }

    /// Lowered curvature `R[i][j][k][l] = g_im R^m_j;kl`, order-2 accurate.
    pub fn riemann_lowered(&self) -> Vec<Tl> {
        let d = self.dim;
        let ctx = &self.ctx;
        let mixed = self.riemann_mixed();
        let mut out = vec![ctx.zero(); d * d * d * d];
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    for l in 0..d {
                        let mut acc = ctx.zero();
                        for m in 0..d {
                            acc = ctx.add(
                                &acc,
                                &ctx.mul(&self.g[i * d + m], &mixed[((m * d + j) * d + k) * d + l]),
                            );
                        }
                        out[((i * d + j) * d + k) * d + l] = acc;
                    }
                }
            }
        }
        out
    }
}
