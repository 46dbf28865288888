//! Smooth maps between charted manifolds: differential, tension, bitension.
//!
//! A [`SmoothMap`] carries symbolic component expressions in the source
//! coordinates (plus named constant parameters). The second-order invariant
//! computed here is the tension field
//!
//! ```text
//! tau^c = g^ij ( d_i d_j phi^c - Gamma^k_ij d_k phi^c
//!                + (Gbar^c_ab o phi) d_i phi^a d_j phi^b )
//! ```
//!
//! with `Gamma` the source and `Gbar` the target Christoffel symbols; a map
//! is harmonic when `tau` vanishes. The fourth-order invariant is the
//! bitension field
//!
//! ```text
//! tau2 = trace_g ( D^phi D^phi tau - D^phi_{nabla^M} tau )
//!        - trace_g Rbar(d phi, tau) d phi
//! ```
//!
//! where `D^phi` is the pull-back connection and `Rbar` the target
//! curvature operator; a map is biharmonic when `tau2` vanishes.
//! Target-side quantities are composed with the map in the truncated
//! Taylor algebra (target series re-expanded in source increments), so the
//! whole tower stays exact forward-mode arithmetic.
//!
//! For candidate Riemannian submersions (source dimension 3, target 2) the
//! module also produces the unit vertical field (kernel of the
//! differential, sign-normalized), the horizontal isometry residual, and
//! the residual of `tau(phi) = -d phi(nabla_v v)` relating tension to the
//! mean curvature of the fibers.

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::error::Error;
use crate::expr::jet::eval_tl;
use crate::expr::taylor::Tl;
use crate::expr::{parse, Expr};
use crate::geometry::{ChartedManifold, MetricJets};
use crate::scalar;
use crate::Result;

/// A map between charts, defined by component expressions.
#[derive(Debug, Clone)]
pub struct SmoothMap {
    name: String,
    source: ChartedManifold,
    target: ChartedManifold,
    components: Vec<Expr>,
    params: Vec<(String, f64)>,
}

impl SmoothMap {
    pub fn new(
        name: &str,
        source: ChartedManifold,
        target: ChartedManifold,
        components: &[Expr],
        params: &[(&str, f64)],
    ) -> Result<SmoothMap> {
        if components.len() != target.dim() {
            return Err(Error::DimensionMismatch {
                context: alloc::format!("components of map `{name}`"),
                expected: target.dim(),
                found: components.len(),
            });
        }
        for (pname, _) in params {
            if source.coords().iter().any(|c| c == pname) {
                return Err(Error::Parse {
                    offset: 0,
                    message: alloc::format!(
                        "parameter `{pname}` of map `{name}` shadows a source coordinate"
                    ),
                });
            }
        }
        Ok(SmoothMap {
            name: name.to_string(),
            source,
            target,
            components: components.to_vec(),
            params: params
                .iter()
                .map(|(n, v)| (n.to_string(), *v))
                .collect(),
        })
    }

    /// Convenience constructor parsing components from text.
    pub fn from_strs(
        name: &str,
        source: ChartedManifold,
        target: ChartedManifold,
        components: &[&str],
        params: &[(&str, f64)],
    ) -> Result<SmoothMap> {
        let mut parsed = Vec::with_capacity(components.len());
        for s in components {
            parsed.push(parse(s)?);
        }
        SmoothMap::new(name, source, target, &parsed, params)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn source(&self) -> &ChartedManifold {
        &self.source
    }

    pub fn target(&self) -> &ChartedManifold {
        &self.target
    }

    pub fn params(&self) -> &[(String, f64)] {
        &self.params
    }

    pub fn component_expr(&self, c: usize) -> &Expr {
        &self.components[c]
    }

    /// Returns a copy with different parameter values.
    pub fn with_params(&self, params: &[(&str, f64)]) -> SmoothMap {
        let mut out = self.clone();
        out.params = params.iter().map(|(n, v)| (n.to_string(), *v)).collect();
        out
    }

    /// Image point `phi(p)` in target coordinates.
    pub fn value_at(&self, p: &[f64]) -> Result<Vec<f64>> {
        let mj = self.jets_at(p)?;
        Ok(mj.phi.iter().map(|t| mj.src.ctx.value(t)).collect())
    }

    /// Differential `d phi` at `p`, indexed `[target component][source coord]`.
    pub fn differential_at(&self, p: &[f64]) -> Result<Vec<Vec<f64>>> {
        let mj = self.jets_at(p)?;
        Ok(mj
            .dphi
            .iter()
            .map(|row| row.iter().map(|t| mj.src.ctx.value(t)).collect())
            .collect())
    }

    /// Tension field components at `p` (target chart basis).
    pub fn tension_at(&self, p: &[f64]) -> Result<Vec<f64>> {
        let mj = self.jets_at(p)?;
        let tau = mj.tension_tl();
        Ok(tau.iter().map(|t| mj.src.ctx.value(t)).collect())
    }

    /// Target-metric norm of the tension field at `p`.
    pub fn tension_norm_at(&self, p: &[f64]) -> Result<f64> {
        let mj = self.jets_at(p)?;
        let tau = mj.tension_tl();
        let vals: Vec<f64> = tau.iter().map(|t| mj.src.ctx.value(t)).collect();
        Ok(scalar::sqrt(mj.target_sq_norm(&vals)))
    }

    /// Bitension field components at `p` (target chart basis).
    pub fn bitension_at(&self, p: &[f64]) -> Result<Vec<f64>> {
        let mj = self.jets_at(p)?;
        Ok(mj.bitension())
    }

    /// Target-metric norm of the bitension field at `p`.
    pub fn bitension_norm_at(&self, p: &[f64]) -> Result<f64> {
        let mj = self.jets_at(p)?;
        let vals = mj.bitension();
        Ok(scalar::sqrt(mj.target_sq_norm(&vals)))
    }

    /// Unit vertical field (g-normalized kernel of the differential) at a
    /// point of a candidate submersion, sign-normalized so its first
    /// nonnegligible chart component is positive.
    pub fn vertical_unit_at(&self, p: &[f64]) -> Result<Vec<f64>> {
        let mj = self.jets_at(p)?;
        let v = mj.vertical_unit_tl(p)?;
        Ok(v.iter().map(|t| mj.src.ctx.value(t)).collect())
    }

    /// Full submersion diagnostics at a point.
    pub fn submersion_check_at(&self, p: &[f64]) -> Result<SubmersionCheck> {
        let mj = self.jets_at(p)?;
        mj.submersion_check(p)
    }

    /// Whether the map is a Riemannian submersion at `p` within `tol`:
    /// full rank, and the differential restricted to the horizontal space
    /// is isometric.
    pub fn is_riemannian_submersion_at(&self, p: &[f64], tol: f64) -> Result<bool> {
        match self.submersion_check_at(p) {
            Ok(chk) => Ok(chk.isometry_residual <= tol),
            Err(Error::NotASubmersion { .. }) => Ok(false),
            Err(e) => Err(e),
        }
    }

    pub(crate) fn jets_at(&self, p: &[f64]) -> Result<MapJets> {
        let src = self.source.jets_at(p)?;
        let sd = src.dim;
        let td = self.target.dim();
        let param_refs: Vec<(&str, f64)> =
            self.params.iter().map(|(n, v)| (n.as_str(), *v)).collect();
        let mut phi = Vec::with_capacity(td);
        for e in &self.components {
            let mut lookup = |name: &str| {
                if let Some(i) = self.source.coords().iter().position(|c| c == name) {
                    return Some(src.seeds[i].clone());
                }
                param_refs
                    .iter()
                    .find(|(n, _)| *n == name)
                    .map(|(_, v)| src.ctx.constant(*v))
            };
            phi.push(eval_tl(e, &src.ctx, &mut lookup)?);
        }
        let q: Vec<f64> = phi.iter().map(|t| src.ctx.value(t)).collect();
        let tgt = self.target.jets_at(&q)?;
        // Compose target Christoffels with the map: source-side series of
        // Gbar^c_ab o phi, order-3 accurate.
        let mut tgt_gamma = vec![src.ctx.zero(); td * td * td];
        for c in 0..td {
            for a in 0..td {
                for b in 0..td {
                    let gam = tgt.gamma_tl(c, a, b);
                    tgt_gamma[(c * td + a) * td + b] =
                        src.ctx.compose_series(&tgt.ctx, &gam, &phi);
                }
            }
        }
        let tgt_mixed: Vec<f64> = tgt.riemann_mixed().iter().map(|t| tgt.ctx.value(t)).collect();
        let tgt_g: Vec<f64> = tgt.g.iter().map(|t| tgt.ctx.value(t)).collect();
        let dphi: Vec<Vec<Tl>> = phi
            .iter()
            .map(|f| (0..sd).map(|i| src.ctx.deriv(f, i)).collect())
            .collect();
        Ok(MapJets {
            src,
            sd,
            td,
            phi,
            dphi,
            tgt_gamma,
            tgt_mixed,
            tgt_g,
        })
    }
}

/// Pointwise submersion diagnostics.
#[derive(Debug, Clone)]
pub struct SubmersionCheck {
    /// Unit vertical chart components.
    pub vertical: Vec<f64>,
    /// Max deviation of `h(d phi h_a, d phi h_b)` from the identity over a
    /// g-orthonormal horizontal basis.
    pub isometry_residual: f64,
    /// Norm of `tau(phi) + d phi(nabla_v v)`; zero exactly when the tension
    /// equals minus the push-forward of the fiber mean curvature.
    pub tension_vs_fiber_residual: f64,
}

/// One map evaluated at one point, in Taylor form.
pub(crate) struct MapJets {
    pub src: MetricJets,
    pub sd: usize,
    pub td: usize,
    /// Components, order-4 accurate.
    pub phi: Vec<Tl>,
    /// `d phi^c / d x^i` at `[c][i]`, order-3 accurate.
    pub dphi: Vec<Vec<Tl>>,
    /// `(Gbar^c_ab o phi)` at `(c*td + a)*td + b`, order-3 accurate.
    pub tgt_gamma: Vec<Tl>,
    /// Target mixed curvature values at the image point.
    pub tgt_mixed: Vec<f64>,
    /// Target metric values at the image point.
    pub tgt_g: Vec<f64>,
}

impl MapJets {
    /// Tension components as source-side series, order-2 accurate.
    pub fn tension_tl(&self) -> Vec<Tl> {
        let ctx = &self.src.ctx;
        let (sd, td) = (self.sd, self.td);
        let mut tau = vec![ctx.zero(); td];
        for c in 0..td {
            let mut acc = ctx.zero();
            for i in 0..sd {
                for j in 0..sd {
                    let mut term = ctx.deriv(&self.dphi[c][j], i);
                    for k in 0..sd {
                        term = ctx.sub(&term, &ctx.mul(&self.src.gamma_tl(k, i, j), &self.dphi[c][k]));
                    }
                    for a in 0..td {
                        for b in 0..td {
                            let gam = &self.tgt_gamma[(c * td + a) * td + b];
                            term = ctx.add(
                                &term,
                                &ctx.mul(gam, &ctx.mul(&self.dphi[a][i], &self.dphi[b][j])),
                            );
                        }
                    }
                    acc = ctx.add(&acc, &ctx.mul(&self.src.ginv[i * sd + j], &term));
                }
            }
            tau[c] = acc;
        }
        tau
    }

    /// Squared target norm of a component vector at the image point.
    pub fn target_sq_norm(&self, v: &[f64]) -> f64 {
        let td = self.td;
        let mut acc = 0.0;
        for a in 0..td {
            for b in 0..td {
                acc += self.tgt_g[a * td + b] * v[a] * v[b];
            }
        }
        acc
    }

    /// Bitension component values.
    pub fn bitension(&self) -> Vec<f64> {
        let ctx = &self.src.ctx;
        let (sd, td) = (self.sd, self.td);
        let tau = self.tension_tl();
        // Pull-back covariant derivative of tau along coordinate direction i:
        // (D_i tau)^c = d_i tau^c + (Gbar^c_ab o phi) d_i phi^a tau^b,
        // order-1 accurate.
        let mut dtau = vec![ctx.zero(); sd * td];
        for i in 0..sd {
            for c in 0..td {
                let mut acc = ctx.deriv(&tau[c], i);
                for a in 0..td {
                    for b in 0..td {
                        let gam = &self.tgt_gamma[(c * td + a) * td + b];
                        acc = ctx.add(&acc, &ctx.mul(gam, &ctx.mul(&self.dphi[a][i], &tau[b])));
                    }
                }
                dtau[i * td + c] = acc;
            }
        }
        let tau_v: Vec<f64> = tau.iter().map(|t| ctx.value(t)).collect();
        let dphi_v: Vec<Vec<f64>> = self
            .dphi
            .iter()
            .map(|row| row.iter().map(|t| ctx.value(t)).collect())
            .collect();
        let mut out = vec![0.0; td];
        for c in 0..td {
            let mut acc = 0.0;
            for i in 0..sd {
                for j in 0..sd {
                    let gij = ctx.value(&self.src.ginv[i * sd + j]);
                    if gij == 0.0 {
                        continue;
                    }
                    // Second pull-back derivative, traced:
                    // D_i (D_j tau)^c - Gamma^k_ij (D_k tau)^c
                    let mut term = ctx.value(&ctx.deriv(&dtau[j * td + c], i));
                    for a in 0..td {
                        for b in 0..td {
                            term += ctx.value(&self.tgt_gamma[(c * td + a) * td + b])
                                * dphi_v[a][i]
                                * ctx.value(&dtau[j * td + b]);
                        }
                    }
                    for k in 0..sd {
                        term -= ctx.value(&self.src.gamma_tl(k, i, j))
                            * ctx.value(&dtau[k * td + c]);
                    }
                    // Curvature term: (Rbar(d phi_i, tau) d phi_j)^c
                    //   = Rbar^c_d;ab (d phi_i)^a tau^b (d phi_j)^d.
                    let mut curv = 0.0;
                    for a in 0..td {
                        for b in 0..td {
                            for dd in 0..td {
                                curv += self.tgt_mixed[((c * td + dd) * td + a) * td + b]
                                    * dphi_v[a][i]
                                    * tau_v[b]
                                    * dphi_v[dd][j];
                            }
                        }
                    }
                    acc += gij * (term - curv);
                }
            }
            out[c] = acc;
        }
        out
    }

    /// Unit vertical field as source-side series, order-3 accurate.
    /// Only defined for source dimension 3, target dimension 2.
    pub fn vertical_unit_tl(&self, p: &[f64]) -> Result<Vec<Tl>> {
        let ctx = &self.src.ctx;
        if self.sd != 3 || self.td != 2 {
            return Err(Error::DimensionMismatch {
                context: "submersion check (needs source dim 3, target dim 2)".to_string(),
                expected: 3,
                found: self.sd,
            });
        }
        // Kernel of the coordinate differential: cross product of the rows.
        let r0 = &self.dphi[0];
        let r1 = &self.dphi[1];
        let mut v = vec![ctx.zero(); 3];
        for a in 0..3 {
            let (b, c) = ((a + 1) % 3, (a + 2) % 3);
            v[a] = ctx.sub(&ctx.mul(&r0[b], &r1[c]), &ctx.mul(&r0[c], &r1[b]));
        }
        let vals: Vec<f64> = v.iter().map(|t| ctx.value(t)).collect();
        let vnorm = scalar::sqrt(vals.iter().map(|x| x * x).sum());
        let row_scale = |r: &[Tl]| -> f64 {
            scalar::sqrt(r.iter().map(|t| ctx.value(t) * ctx.value(t)).sum())
        };
        if vnorm <= 1e-9 * (row_scale(r0) * row_scale(r1)).max(f64::MIN_POSITIVE) {
            return Err(Error::NotASubmersion {
                point: p.to_vec(),
                detail: "differential is rank deficient".to_string(),
            });
        }
        // g-normalize.
        let mut sq = ctx.zero();
        for a in 0..3 {
            for b in 0..3 {
                sq = ctx.add(&sq, &ctx.mul(&self.src.g[a * 3 + b], &ctx.mul(&v[a], &v[b])));
            }
        }
        let inv_norm = ctx
            .recip(&ctx.sqrt(&sq).map_err(|_| Error::NotASubmersion {
                point: p.to_vec(),
                detail: "vertical direction has nonpositive squared norm".to_string(),
            })?)
            .expect("norm > 0");
        let mut unit: Vec<Tl> = v.iter().map(|t| ctx.mul(t, &inv_norm)).collect();
        // Sign normalization: first component that is clearly nonzero
        // becomes positive.
        let unit_vals: Vec<f64> = unit.iter().map(|t| ctx.value(t)).collect();
        let biggest = unit_vals.iter().fold(0.0f64, |m, x| m.max(scalar::abs(*x)));
        for val in &unit_vals {
            if scalar::abs(*val) > 1e-9 * biggest {
                if *val < 0.0 {
                    unit = unit.iter().map(|t| ctx.neg(t)).collect();
                }
                break;
            }
        }
        Ok(unit)
    }

    fn submersion_check(&self, p: &[f64]) -> Result<SubmersionCheck> {
        let ctx = &self.src.ctx;
        let sd = self.sd;
        let v = self.vertical_unit_tl(p)?;
        let v_vals: Vec<f64> = v.iter().map(|t| ctx.value(t)).collect();
        let g_vals: Vec<f64> = self.src.g.iter().map(|t| ctx.value(t)).collect();
        let ip = |x: &[f64], y: &[f64]| -> f64 {
            let mut acc = 0.0;
            for a in 0..sd {
                for b in 0..sd {
                    acc += g_vals[a * sd + b] * x[a] * y[b];
                }
            }
            acc
        };
        // Horizontal g-orthonormal basis by projecting coordinate
        // directions and taking the two largest remainders.
        let mut horiz: Vec<Vec<f64>> = Vec::new();
        let mut candidates: Vec<Vec<f64>> = Vec::new();
        for a in 0..sd {
            let mut u = vec![0.0; sd];
            u[a] = 1.0;
            let c = ip(&u, &v_vals);
            for (x, vb) in u.iter_mut().zip(&v_vals) {
                *x -= c * vb;
            }
            candidates.push(u);
        }
        while horiz.len() < 2 {
            let (best, _) = candidates
                .iter()
                .enumerate()
                .map(|(i, u)| (i, ip(u, u)))
                .fold((usize::MAX, -1.0), |acc, cur| if cur.1 > acc.1 { cur } else { acc });
            let mut u = candidates.swap_remove(best);
            for hprev in &horiz {
                let c = ip(&u, hprev);
                for (x, hb) in u.iter_mut().zip(hprev) {
                    *x -= c * hb;
                }
            }
            let n = scalar::sqrt(ip(&u, &u));
            if n <= 1e-12 {
                return Err(Error::NotASubmersion {
                    point: p.to_vec(),
                    detail: "horizontal space is degenerate".to_string(),
                });
            }
            for x in u.iter_mut() {
                *x /= n;
            }
            horiz.push(u);
        }
        // Push the horizontal basis through the differential and compare
        // the target Gram matrix with the identity.
        let dphi_v: Vec<Vec<f64>> = self
            .dphi
            .iter()
            .map(|row| row.iter().map(|t| ctx.value(t)).collect())
            .collect();
        let push = |u: &[f64]| -> Vec<f64> {
            (0..self.td)
                .map(|c| (0..sd).map(|i| dphi_v[c][i] * u[i]).sum())
                .collect()
        };
        let hu: Vec<Vec<f64>> = horiz.iter().map(|u| push(u)).collect();
        let mut isometry_residual: f64 = 0.0;
        for a in 0..2 {
            for b in 0..2 {
                let mut acc = 0.0;
                for c in 0..self.td {
                    for d in 0..self.td {
                        acc += self.tgt_g[c * self.td + d] * hu[a][c] * hu[b][d];
                    }
                }
                let target = if a == b { 1.0 } else { 0.0 };
                isometry_residual = isometry_residual.max(scalar::abs(acc - target));
            }
        }
        // tau(phi) + d phi(nabla_v v): nabla_v v in chart components is
        // v^b d_b v^k + Gamma^k_ab v^a v^b.
        let mut nvv = vec![0.0; sd];
        for k in 0..sd {
            let mut acc = 0.0;
            for b in 0..sd {
                acc += ctx.value(&v[b]) * ctx.value(&ctx.deriv(&v[k], b));
            }
            for a in 0..sd {
                for b in 0..sd {
                    acc += ctx.value(&self.src.gamma_tl(k, a, b)) * v_vals[a] * v_vals[b];
                }
            }
            nvv[k] = acc;
        }
        let pushed = push(&nvv);
        let tau = self.tension_tl();
        let resid_vec: Vec<f64> = (0..self.td)
            .map(|c| ctx.value(&tau[c]) + pushed[c])
            .collect();
        let tension_vs_fiber_residual = scalar::sqrt(self.target_sq_norm(&resid_vec));
        Ok(SubmersionCheck {
            vertical: v_vals,
            isometry_residual,
            tension_vs_fiber_residual,
        })
    }
}
