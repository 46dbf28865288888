//! Jet evaluation: expressions to values and truncated Taylor expansions.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::taylor::{NumErr, TaylorCtx, Tl, MAX_ORDER, MAX_VARS};
use super::{Expr, Func};
use crate::error::Error;
use crate::scalar;

/// Partial-derivative bundle of an expression at a point.
///
/// Produced by [`eval_jet`]; stores the truncated Taylor expansion in the
/// differentiation variables and exposes derivatives through multi-index
/// accessors. All derivatives up to the requested order are exact
/// forward-mode values, not finite differences.
#[derive(Debug, Clone)]
pub struct Jet {
    names: Vec<String>,
    ctx: TaylorCtx,
    tl: Tl,
}

impl Jet {
    /// Differentiation variable names, in binding order.
    pub fn vars(&self) -> &[String] {
        &self.names
    }

    pub fn order(&self) -> usize {
        self.ctx.order()
    }

    pub fn value(&self) -> f64 {
        self.ctx.value(&self.tl)
    }

    /// Partial derivative for a multi-index, one entry per variable in
    /// binding order; e.g. `&[1, 2]` is `d^3 f / dx dy^2`.
    pub fn partial(&self, orders: &[usize]) -> crate::Result<f64> {
        if orders.len() != self.names.len() {
            return Err(Error::DimensionMismatch {
                context: "jet multi-index".to_string(),
                expected: self.names.len(),
                found: orders.len(),
            });
        }
        let idx = self.ctx.index_of(orders).ok_or(Error::OrderTooHigh {
            order: orders.iter().sum(),
            max: self.ctx.order(),
        })?;
        Ok(self.tl.c[idx] * self.ctx.factorial(idx))
    }

    /// First partial in variable `i`.
    pub fn first(&self, i: usize) -> crate::Result<f64> {
        let mut m = alloc::vec![0usize; self.names.len()];
        m[i] = 1;
        self.partial(&m)
    }

    /// Second partial in variables `i`, `j`.
    pub fn second(&self, i: usize, j: usize) -> crate::Result<f64> {
        let mut m = alloc::vec![0usize; self.names.len()];
        m[i] += 1;
        m[j] += 1;
        self.partial(&m)
    }
}

fn decorate(err: NumErr, at: &Expr) -> Error {
    let subtree = alloc::format!("{at}");
    match err {
        NumErr::DivZero => Error::DivisionByZero { subtree },
        NumErr::LogDomain(v) => Error::Domain {
            op: "log",
            value: v,
            subtree,
        },
        NumErr::SqrtDomain(v) => Error::Domain {
            op: "sqrt",
            value: v,
            subtree,
        },
        NumErr::PowDomain(v) => Error::Domain {
            op: "pow",
            value: v,
            subtree,
        },
        NumErr::Singular => Error::Precondition {
            what: "nonsingular matrix".to_string(),
            residual: 0.0,
        },
    }
}

/// Evaluates `e` in the truncated algebra with a caller-supplied variable
/// lookup. Shared by the jet API and the geometry layers.
pub(crate) fn eval_tl(
    e: &Expr,
    ctx: &TaylorCtx,
    lookup: &mut dyn FnMut(&str) -> Option<Tl>,
) -> crate::Result<Tl> {
    match e {
        Expr::Num(c) => Ok(ctx.constant(*c)),
        Expr::Var(name) => lookup(name).ok_or_else(|| Error::UnboundVariable {
            name: name.clone(),
        }),
        Expr::Neg(a) => Ok(ctx.neg(&eval_tl(a, ctx, lookup)?)),
        Expr::Add(a, b) => Ok(ctx.add(&eval_tl(a, ctx, lookup)?, &eval_tl(b, ctx, lookup)?)),
        Expr::Sub(a, b) => Ok(ctx.sub(&eval_tl(a, ctx, lookup)?, &eval_tl(b, ctx, lookup)?)),
        Expr::Mul(a, b) => Ok(ctx.mul(&eval_tl(a, ctx, lookup)?, &eval_tl(b, ctx, lookup)?)),
        Expr::Div(a, b) => {
            let num = eval_tl(a, ctx, lookup)?;
            let den = eval_tl(b, ctx, lookup)?;
            ctx.div(&num, &den).map_err(|err| decorate(err, e))
        }
        Expr::Pow(a, b) => {
            let base = eval_tl(a, ctx, lookup)?;
            let exp = eval_tl(b, ctx, lookup)?;
            ctx.pow(&base, &exp).map_err(|err| decorate(err, e))
        }
        Expr::Call(func, a) => {
            let arg = eval_tl(a, ctx, lookup)?;
            match func {
                Func::Sin => Ok(ctx.sin(&arg)),
                Func::Cos => Ok(ctx.cos(&arg)),
                Func::Tan => ctx.tan(&arg).map_err(|err| decorate(err, e)),
                Func::Exp => Ok(ctx.exp(&arg)),
                Func::Log => ctx.log(&arg).map_err(|err| decorate(err, e)),
                Func::Sqrt => ctx.sqrt(&arg).map_err(|err| decorate(err, e)),
                Func::Sinh => Ok(ctx.sinh(&arg)),
                Func::Cosh => Ok(ctx.cosh(&arg)),
                Func::Tanh => Ok(ctx.tanh(&arg)),
            }
        }
    }
}

/// Evaluates `e` to a [`Jet`] of the given order.
///
/// `vars` binds the differentiation variables (at most [`MAX_VARS`]) to
/// point coordinates; `consts` binds further names to constant values.
/// Every free variable of `e` must be bound by exactly one of the two
/// lists; duplicate names across the lists resolve to the `vars` entry.
pub fn eval_jet(
    e: &Expr,
    vars: &[(&str, f64)],
    consts: &[(&str, f64)],
    order: usize,
) -> crate::Result<Jet> {
    if vars.len() > MAX_VARS {
        return Err(Error::TooManyVariables {
            count: vars.len(),
            max: MAX_VARS,
        });
    }
    if order > MAX_ORDER {
        return Err(Error::OrderTooHigh {
            order,
            max: MAX_ORDER,
        });
    }
    let ctx = TaylorCtx::new(vars.len(), order);
    let seeds: Vec<Tl> = vars
        .iter()
        .enumerate()
        .map(|(i, (_, v))| ctx.variable(i, *v))
        .collect();
    let mut lookup = |name: &str| {
        if let Some(i) = vars.iter().position(|(n, _)| *n == name) {
            return Some(seeds[i].clone());
        }
        consts
            .iter()
            .find(|(n, _)| *n == name)
            .map(|(_, v)| ctx.constant(*v))
    };
    let tl = eval_tl(e, &ctx, &mut lookup)?;
    Ok(Jet {
        names: vars.iter().map(|(n, _)| n.to_string()).collect(),
        ctx,
        tl,
    })
}

/// Evaluates `e` to a plain value with all variables bound to constants.
pub fn eval(e: &Expr, binds: &[(&str, f64)]) -> crate::Result<f64> {
    match e {
        Expr::Num(c) => Ok(*c),
        Expr::Var(name) => binds
            .iter()
            .find(|(n, _)| *n == name)
            .map(|(_, v)| *v)
            .ok_or_else(|| Error::UnboundVariable { name: name.clone() }),
        Expr::Neg(a) => Ok(-eval(a, binds)?),
        Expr::Add(a, b) => Ok(eval(a, binds)? + eval(b, binds)?),
        Expr::Sub(a, b) => Ok(eval(a, binds)? - eval(b, binds)?),
        Expr::Mul(a, b) => Ok(eval(a, binds)? * eval(b, binds)?),
        Expr::Div(a, b) => {
            let den = eval(b, binds)?;
            if den == 0.0 {
                return Err(Error::DivisionByZero {
                    subtree: alloc::format!("{e}"),
                });
            }
            Ok(eval(a, binds)? / den)
        }
        Expr::Pow(a, b) => {
            let base = eval(a, binds)?;
            let exp = eval(b, binds)?;
            let integral = exp == scalar::trunc(exp) && scalar::abs(exp) <= 1e15;
            if base < 0.0 && !integral {
                return Err(Error::Domain {
                    op: "pow",
                    value: base,
                    subtree: alloc::format!("{e}"),
                });
            }
            if base == 0.0 && exp < 0.0 {
                return Err(Error::DivisionByZero {
                    subtree: alloc::format!("{e}"),
                });
            }
            Ok(scalar::powf(base, exp))
        }
        Expr::Call(func, a) => {
            let v = eval(a, binds)?;
            match func {
                Func::Sin => Ok(scalar::sin(v)),
                Func::Cos => Ok(scalar::cos(v)),
                Func::Tan => {
                    let c = scalar::cos(v);
                    if c == 0.0 {
                        return Err(Error::DivisionByZero {
                            subtree: alloc::format!("{e}"),
                        });
                    }
                    Ok(scalar::sin(v) / c)
                }
                Func::Exp => Ok(scalar::exp(v)),
                Func::Log => {
                    if v <= 0.0 {
                        return Err(Error::Domain {
                            op: "log",
                            value: v,
                            subtree: alloc::format!("{e}"),
                        });
                    }
                    Ok(scalar::ln(v))
                }
                Func::Sqrt => {
                    if v < 0.0 {
                        return Err(Error::Domain {
                            op: "sqrt",
                            value: v,
                            subtree: alloc::format!("{e}"),
                        });
                    }
                    Ok(scalar::sqrt(v))
                }
                Func::Sinh => Ok(scalar::sinh(v)),
                Func::Cosh => Ok(scalar::cosh(v)),
                Func::Tanh => Ok(scalar::tanh(v)),
            }
        }
    }
}
