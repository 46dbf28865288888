//! Truncated multivariate Taylor arithmetic.
//!
//! A [`Tl`] is a polynomial `sum_m c_m (x - p)^m` over multi-indices `m`
//! with total degree at most the context order; the coefficient of `m` is
//! `(d^m f)(p) / m!`. Arithmetic on these truncated series is exact
//! forward-mode differentiation: sums, products, quotients and analytic
//! function composition all produce the truncated series of the result.
//!
//! Truncation is graded: the degree-`k` coefficients of any product,
//! quotient or composition depend only on coefficients of degree at most
//! `k` of the operands. Consequently a series whose high-order
//! coefficients are meaningless (after formal differentiation, say) still
//! yields correct lower-order output, which is what lets one fixed-order
//! context serve a whole tower of derived quantities.
//!
//! The context supports up to [`MAX_VARS`] variables and order
//! [`MAX_ORDER`]; multiplication runs over a precomputed monomial product
//! table.

use alloc::vec;
use alloc::vec::Vec;

use crate::scalar;

/// Maximum number of simultaneous differentiation variables.
pub const MAX_VARS: usize = 4;
/// Maximum supported truncation order.
pub const MAX_ORDER: usize = 4;

const RADIX: usize = MAX_ORDER + 1;
const KEYS: usize = RADIX * RADIX * RADIX * RADIX;
const NONE: u16 = u16::MAX;

/// Numeric failures inside Taylor arithmetic. The expression evaluator
/// decorates these with the offending subtree.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NumErr {
    DivZero,
    LogDomain(f64),
    SqrtDomain(f64),
    /// Fractional power of a nonpositive base.
    PowDomain(f64),
    /// Matrix inversion met a numerically singular matrix.
    Singular,
}

/// Shared tables for one (nvars, order) truncated algebra.
#[derive(Debug, Clone)]
pub struct TaylorCtx {
    nvars: usize,
    order: usize,
    monos: Vec<[u8; MAX_VARS]>,
    pos: Vec<u16>,
    prod: Vec<u16>,
}

/// Truncated Taylor series; coefficients are indexed by the context's
/// monomial list and only meaningful together with that context.
#[derive(Debug, Clone, PartialEq)]
pub struct Tl {
    pub(crate) c: Vec<f64>,
}

fn key_of(m: &[u8; MAX_VARS]) -> usize {
    m[0] as usize + RADIX * (m[1] as usize + RADIX * (m[2] as usize + RADIX * m[3] as usize))
}

fn degree(m: &[u8; MAX_VARS]) -> usize {
    m.iter().map(|&x| x as usize).sum()
}

impl TaylorCtx {
    /// Builds the monomial and product tables. `nvars <= MAX_VARS`,
    /// `order <= MAX_ORDER`; both are enforced by the callers with typed
    /// errors before reaching here.
    pub fn new(nvars: usize, order: usize) -> TaylorCtx {
        assert!(nvars <= MAX_VARS && order <= MAX_ORDER);
        let mut monos: Vec<[u8; MAX_VARS]> = Vec::new();
        for key in 0..KEYS {
            let mut m = [0u8; MAX_VARS];
            let mut k = key;
            for slot in m.iter_mut() {
                *slot = (k % RADIX) as u8;
                k /= RADIX;
            }
            if degree(&m) <= order && m.iter().skip(nvars).all(|&x| x == 0) {
                monos.push(m);
            }
        }
        monos.sort_by_key(|m| (degree(m), key_of(m)));
        let mut pos = vec![NONE; KEYS];
        for (i, m) in monos.iter().enumerate() {
            pos[key_of(m)] = i as u16;
        }
        let nm = monos.len();
        let mut prod = vec![NONE; nm * nm];
        for i in 0..nm {
            for j in 0..nm {
                if degree(&monos[i]) + degree(&monos[j]) <= order {
                    let mut s = [0u8; MAX_VARS];
                    for v in 0..MAX_VARS {
                        s[v] = monos[i][v] + monos[j][v];
                    }
                    prod[i * nm + j] = pos[key_of(&s)];
                }
            }
        }
        TaylorCtx {
            nvars,
            order,
            monos,
            pos,
            prod,
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn len(&self) -> usize {
        self.monos.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Position of a multi-index in the coefficient vector.
    pub fn index_of(&self, orders: &[usize]) -> Option<usize> {
        if orders.len() != self.nvars {
            return None;
        }
        let mut m = [0u8; MAX_VARS];
        for (slot, &o) in m.iter_mut().zip(orders) {
            if o > self.order {
                return None;
            }
            *slot = o as u8;
        }
        if degree(&m) > self.order {
            return None;
        }
        let p = self.pos[key_of(&m)];
        (p != NONE).then(|| p as usize)
    }

    /// `m!` for the monomial at `idx`.
    pub fn factorial(&self, idx: usize) -> f64 {
        const FACT: [f64; RADIX] = [1.0, 1.0, 2.0, 6.0, 24.0];
        self.monos[idx].iter().map(|&e| FACT[e as usize]).product()
    }

    pub fn zero(&self) -> Tl {
        Tl {
            c: vec![0.0; self.len()],
        }
    }

    pub fn constant(&self, v: f64) -> Tl {
        let mut t = self.zero();
        t.c[0] = v;
        t
    }

    /// The series of the `i`-th coordinate around value `v`: `v + (x_i - p_i)`.
    pub fn variable(&self, i: usize, v: f64) -> Tl {
        assert!(i < self.nvars);
        let mut t = self.constant(v);
        if self.order >= 1 {
            let mut m = [0u8; MAX_VARS];
            m[i] = 1;
            t.c[self.pos[key_of(&m)] as usize] = 1.0;
        }
        t
    }

    pub fn is_constant(&self, a: &Tl) -> bool {
        a.c[1..].iter().all(|&x| x == 0.0)
    }

    pub fn add(&self, a: &Tl, b: &Tl) -> Tl {
        Tl {
            c: a.c.iter().zip(&b.c).map(|(x, y)| x + y).collect(),
        }
    }

    pub fn sub(&self, a: &Tl, b: &Tl) -> Tl {
        Tl {
            c: a.c.iter().zip(&b.c).map(|(x, y)| x - y).collect(),
        }
    }

    pub fn neg(&self, a: &Tl) -> Tl {
        Tl {
            c: a.c.iter().map(|x| -x).collect(),
        }
    }

    pub fn scale(&self, s: f64, a: &Tl) -> Tl {
        Tl {
            c: a.c.iter().map(|x| s * x).collect(),
        }
    }

    /// `acc += s * a`.
    pub fn axpy(&self, acc: &mut Tl, s: f64, a: &Tl) {
        for (x, y) in acc.c.iter_mut().zip(&a.c) {
            *x += s * y;
        }
    }

    pub fn mul(&self, a: &Tl, b: &Tl) -> Tl {
        let nm = self.len();
        let mut out = vec![0.0; nm];
        for i in 0..nm {
            let ai = a.c[i];
            if ai == 0.0 {
                continue;
            }
            let row = &self.prod[i * nm..(i + 1) * nm];
            for (j, &p) in row.iter().enumerate() {
                if p != NONE {
                    out[p as usize] += ai * b.c[j];
                }
            }
        }
        Tl { c: out }
    }

    /// Composes an analytic function with `f`: given the scaled derivatives
    /// `s[j] = g^(j)(f(0)) / j!`, returns the series of `g(f)`. Exact in the
    /// truncated ring because `(f - f(0))^(order+1)` vanishes.
    pub fn compose_analytic(&self, f: &Tl, s: &[f64]) -> Tl {
        let mut fh = f.clone();
        fh.c[0] = 0.0;
        let mut acc = self.constant(s[0]);
        if self.order == 0 {
            return acc;
        }
        let mut p = fh.clone();
        for (j, &sj) in s.iter().enumerate().take(self.order + 1).skip(1) {
            self.axpy(&mut acc, sj, &p);
            if j < self.order {
                p = self.mul(&p, &fh);
            }
        }
        acc
    }

    pub fn recip(&self, a: &Tl) -> Result<Tl, NumErr> {
        let v = a.c[0];
        if v == 0.0 {
            return Err(NumErr::DivZero);
        }
        let mut s = [0.0; MAX_ORDER + 1];
        let mut p = 1.0 / v;
        for sj in s.iter_mut() {
            *sj = p;
            p = -p / v;
        }
        Ok(self.compose_analytic(a, &s))
    }

    pub fn div(&self, a: &Tl, b: &Tl) -> Result<Tl, NumErr> {
        Ok(self.mul(a, &self.recip(b)?))
    }

    pub fn exp(&self, a: &Tl) -> Tl {
        let e = scalar::exp(a.c[0]);
        let s = [e, e, e / 2.0, e / 6.0, e / 24.0];
        self.compose_analytic(a, &s)
    }

    pub fn log(&self, a: &Tl) -> Result<Tl, NumErr> {
        let v = a.c[0];
        if v <= 0.0 {
            return Err(NumErr::LogDomain(v));
        }
        let mut s = [scalar::ln(v), 0.0, 0.0, 0.0, 0.0];
        let mut p = 1.0 / v;
        for j in 1..=MAX_ORDER {
            // g^(j)/j! = (-1)^(j+1) / (j v^j)
            s[j] = if j % 2 == 1 { p / j as f64 } else { -p / j as f64 };
            p /= v;
        }
        Ok(self.compose_analytic(a, &s))
    }

    pub fn sqrt(&self, a: &Tl) -> Result<Tl, NumErr> {
        let v = a.c[0];
        if v <= 0.0 {
            return Err(NumErr::SqrtDomain(v));
        }
        let r = scalar::sqrt(v);
        let s = [
            r,
            0.5 / r,
            -1.0 / (8.0 * r * v),
            1.0 / (16.0 * r * v * v),
            -5.0 / (128.0 * r * v * v * v),
        ];
        Ok(self.compose_analytic(a, &s))
    }

    pub fn sin(&self, a: &Tl) -> Tl {
        let (sn, cs) = (scalar::sin(a.c[0]), scalar::cos(a.c[0]));
        let s = [sn, cs, -sn / 2.0, -cs / 6.0, sn / 24.0];
        self.compose_analytic(a, &s)
    }

    pub fn cos(&self, a: &Tl) -> Tl {
        let (sn, cs) = (scalar::sin(a.c[0]), scalar::cos(a.c[0]));
        let s = [cs, -sn, -cs / 2.0, sn / 6.0, cs / 24.0];
        self.compose_analytic(a, &s)
    }

    pub fn tan(&self, a: &Tl) -> Result<Tl, NumErr> {
        self.div(&self.sin(a), &self.cos(a))
    }

    pub fn sinh(&self, a: &Tl) -> Tl {
        let (sh, ch) = (scalar::sinh(a.c[0]), scalar::cosh(a.c[0]));
        let s = [sh, ch, sh / 2.0, ch / 6.0, sh / 24.0];
        self.compose_analytic(a, &s)
    }

    pub fn cosh(&self, a: &Tl) -> Tl {
        let (sh, ch) = (scalar::sinh(a.c[0]), scalar::cosh(a.c[0]));
        let s = [ch, sh, ch / 2.0, sh / 6.0, ch / 24.0];
        self.compose_analytic(a, &s)
    }

    pub fn tanh(&self, a: &Tl) -> Tl {
        // cosh is never zero, so the division cannot fail.
        self.div(&self.sinh(a), &self.cosh(a)).expect("cosh > 0")
    }

    /// Integer power by repeated multiplication; valid for any base value.
    pub fn powi(&self, a: &Tl, n: i64) -> Result<Tl, NumErr> {
        if n < 0 {
            return self.powi(&self.recip(a)?, -n);
        }
        let mut acc = self.constant(1.0);
        let mut base = a.clone();
        let mut k = n;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            k >>= 1;
            if k > 0 {
                base = self.mul(&base, &base);
            }
        }
        Ok(acc)
    }

    /// General power. Constant integer exponents use repeated
    /// multiplication (any base); constant fractional exponents use the
    /// binomial series (positive base); nonconstant exponents fall back to
    /// `exp(b log a)` (positive base).
    pub fn pow(&self, a: &Tl, b: &Tl) -> Result<Tl, NumErr> {
        if self.is_constant(b) {
            let v = b.c[0];
            if v == libm_round(v) && scalar::abs(v) <= 64.0 {
                return self.powi(a, v as i64);
            }
            let base = a.c[0];
            if base <= 0.0 {
                return Err(NumErr::PowDomain(base));
            }
            let mut s = [0.0; MAX_ORDER + 1];
            s[0] = scalar::powf(base, v);
            let mut coef = 1.0;
            for j in 1..=MAX_ORDER {
                coef *= (v - (j as f64 - 1.0)) / j as f64;
                s[j] = coef * scalar::powf(base, v - j as f64);
            }
            return Ok(self.compose_analytic(a, &s));
        }
        if a.c[0] <= 0.0 {
            return Err(NumErr::PowDomain(a.c[0]));
        }
        Ok(self.exp(&self.mul(b, &self.log(a)?)))
    }

    /// Formal partial derivative in variable `i`. The result is accurate to
    /// one order less than the operand; its top-degree coefficients are
    /// meaningless and must not be read.
    pub fn deriv(&self, a: &Tl, i: usize) -> Tl {
        assert!(i < self.nvars);
        let mut out = self.zero();
        for (q, m) in self.monos.iter().enumerate() {
            if m[i] > 0 {
                let mut md = *m;
                md[i] -= 1;
                let p = self.pos[key_of(&md)] as usize;
                out.c[p] = a.c[q] * m[i] as f64;
            }
        }
        out
    }

    pub fn value(&self, a: &Tl) -> f64 {
        a.c[0]
    }

    /// Composes a series from another context with increment series from
    /// this context: `target` is a series in `k` variables, `incs` holds
    /// `k` series (in this context) whose values are the expansion point of
    /// `target`. Returns the chain-rule composite.
    pub fn compose_series(&self, target_ctx: &TaylorCtx, target: &Tl, incs: &[Tl]) -> Tl {
        assert_eq!(incs.len(), target_ctx.nvars);
        // Increment series with the constant removed; only their offsets
        // from the expansion point enter.
        let mut dh: Vec<Tl> = Vec::with_capacity(incs.len());
        for inc in incs {
            let mut t = inc.clone();
            t.c[0] = 0.0;
            dh.push(t);
        }
        // Cache powers dh[v]^e for e = 0..=order.
        let mut pows: Vec<Vec<Tl>> = Vec::with_capacity(incs.len());
        for d in &dh {
            let mut row = Vec::with_capacity(self.order + 2);
            row.push(self.constant(1.0));
            for e in 1..=self.order {
                let prev = &row[e - 1];
                row.push(self.mul(prev, d));
            }
            pows.push(row);
        }
        let mut acc = self.zero();
        for (q, m) in target_ctx.monos.iter().enumerate() {
            let cm = target.c[q];
            if cm == 0.0 {
                continue;
            }
            let mut term = self.constant(cm);
            for v in 0..target_ctx.nvars {
                let e = m[v] as usize;
                if e > 0 {
                    term = self.mul(&term, &pows[v][e]);
                }
            }
            acc = self.add(&acc, &term);
        }
        acc
    }

    /// Inverts a square matrix of series by Gauss-Jordan elimination with
    /// value-coefficient pivoting. `m` is row-major `n x n`.
    pub fn invert_matrix(&self, m: &[Tl], n: usize) -> Result<Vec<Tl>, NumErr> {
        assert_eq!(m.len(), n * n);
        let mut a: Vec<Tl> = m.to_vec();
        let mut inv: Vec<Tl> = Vec::with_capacity(n * n);
        for r in 0..n {
            for c in 0..n {
                inv.push(self.constant(if r == c { 1.0 } else { 0.0 }));
            }
        }
        for col in 0..n {
            let mut piv = col;
            for r in col + 1..n {
                if scalar::abs(a[r * n + col].c[0]) > scalar::abs(a[piv * n + col].c[0]) {
                    piv = r;
                }
            }
            if scalar::abs(a[piv * n + col].c[0]) < 1e-300 {
                return Err(NumErr::Singular);
            }
            if piv != col {
                for c in 0..n {
                    a.swap(col * n + c, piv * n + c);
                    inv.swap(col * n + c, piv * n + c);
                }
            }
            let pinv = self.recip(&a[col * n + col])?;
            for c in 0..n {
                a[col * n + c] = self.mul(&a[col * n + c], &pinv);
                inv[col * n + c] = self.mul(&inv[col * n + c], &pinv);
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let factor = a[r * n + col].clone();
                if factor.c.iter().all(|&x| x == 0.0) {
                    continue;
                }
                for c in 0..n {
                    let t = self.mul(&factor, &a[col * n + c]);
                    a[r * n + c] = self.sub(&a[r * n + c], &t);
                    let t = self.mul(&factor, &inv[col * n + c]);
                    inv[r * n + c] = self.sub(&inv[r * n + c], &t);
                }
            }
        }
        Ok(inv)
    }
}

/// `round` without std; exact for the magnitudes the exponent check uses.
fn libm_round(v: f64) -> f64 {
    let t = v + 0.5;
    let fl = t as i64 as f64;
    let fl = if fl > t { fl - 1.0 } else { fl };
    // Round-half-up is fine here: the caller only compares v == round(v).
    if scalar::abs(v) > 1e15 {
        v
    } else {
        fl
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx2() -> TaylorCtx {
        TaylorCtx::new(2, 4)
    }

    fn coeff(ctx: &TaylorCtx, t: &Tl, m: &[usize]) -> f64 {
        t.c[ctx.index_of(m).unwrap()]
    }

    #[test]
    fn product_of_linear_series() {
        let ctx = ctx2();
        let a = ctx.add(&ctx.constant(1.0), &ctx.variable(0, 0.0));
        let b = ctx.add(&ctx.constant(1.0), &ctx.variable(1, 0.0));
        // Seeded at 0, so the series are 1 + x and 1 + y literally.
        let p = ctx.mul(&a, &b);
        assert_eq!(coeff(&ctx, &p, &[0, 0]), 1.0);
        assert_eq!(coeff(&ctx, &p, &[1, 0]), 1.0);
        assert_eq!(coeff(&ctx, &p, &[0, 1]), 1.0);
        assert_eq!(coeff(&ctx, &p, &[1, 1]), 1.0);
        assert_eq!(coeff(&ctx, &p, &[2, 0]), 0.0);
    }

    #[test]
    fn reciprocal_is_geometric_series() {
        let ctx = TaylorCtx::new(1, 4);
        let a = ctx.add(&ctx.constant(1.0), &ctx.variable(0, 0.0));
        let r = ctx.recip(&a).unwrap();
        for k in 0..=4 {
            let want = if k % 2 == 0 { 1.0 } else { -1.0 };
            assert!((coeff(&ctx, &r, &[k]) - want).abs() < 1e-15);
        }
    }

    #[test]
    fn division_matches_multiplication_by_reciprocal() {
        let ctx = ctx2();
        let x = ctx.variable(0, 0.7);
        let y = ctx.variable(1, -0.2);
        let num = ctx.add(&ctx.mul(&x, &y), &ctx.constant(2.0));
        let den = ctx.add(&ctx.exp(&y), &ctx.mul(&x, &x));
        let q = ctx.div(&num, &den).unwrap();
        let back = ctx.mul(&q, &den);
        for (a, b) in back.c.iter().zip(&num.c) {
            assert!((a - b).abs() < 1e-13);
        }
    }

    #[test]
    fn exp_series_coefficients() {
        let ctx = TaylorCtx::new(1, 4);
        let x = ctx.variable(0, 0.3);
        let e = ctx.exp(&x);
        let v = crate::scalar::exp(0.3);
        let fact = [1.0, 1.0, 2.0, 6.0, 24.0];
        for k in 0..=4 {
            assert!((coeff(&ctx, &e, &[k]) - v / fact[k]).abs() < 1e-12);
        }
    }

    #[test]
    fn log_of_exp_is_identity() {
        let ctx = TaylorCtx::new(1, 4);
        let x = ctx.variable(0, 0.9);
        let roundtrip = ctx.log(&ctx.exp(&x)).unwrap();
        assert!((coeff(&ctx, &roundtrip, &[0]) - 0.9).abs() < 1e-12);
        assert!((coeff(&ctx, &roundtrip, &[1]) - 1.0).abs() < 1e-12);
        for k in 2..=4 {
            assert!(coeff(&ctx, &roundtrip, &[k]).abs() < 1e-12);
        }
    }

    #[test]
    fn sin_cos_pythagoras_in_the_ring() {
        let ctx = ctx2();
        let arg = ctx.add(&ctx.variable(0, 0.4), &ctx.mul(&ctx.variable(1, 1.1), &ctx.variable(1, 1.1)));
        let s = ctx.sin(&arg);
        let c = ctx.cos(&arg);
        let one = ctx.add(&ctx.mul(&s, &s), &ctx.mul(&c, &c));
        assert!((one.c[0] - 1.0).abs() < 1e-13);
        for &x in &one.c[1..] {
            assert!(x.abs() < 1e-12);
        }
    }

    #[test]
    fn formal_derivative_shifts_grades() {
        let ctx = TaylorCtx::new(1, 4);
        let x = ctx.variable(0, 0.5);
        let f = ctx.powi(&x, 4).unwrap();
        let df = ctx.deriv(&f, 0);
        // d/dx x^4 = 4x^3 at 0.5: value 0.5, then 4 * 0.125 = 0.5.
        assert!((df.c[0] - 4.0 * 0.125).abs() < 1e-14);
        assert!((coeff(&ctx, &df, &[1]) - 12.0 * 0.25).abs() < 1e-14);
    }

    #[test]
    fn integer_power_handles_negative_base() {
        let ctx = TaylorCtx::new(1, 4);
        let x = ctx.variable(0, -2.0);
        let p = ctx.pow(&x, &ctx.constant(3.0)).unwrap();
        assert!((p.c[0] + 8.0).abs() < 1e-14);
        assert!((coeff(&ctx, &p, &[1]) - 12.0).abs() < 1e-14);
    }

    #[test]
    fn fractional_power_uses_binomial_series() {
        let ctx = TaylorCtx::new(1, 4);
        let x = ctx.variable(0, 4.0);
        let p = ctx.pow(&x, &ctx.constant(2.5)).unwrap();
        assert!((p.c[0] - 32.0).abs() < 1e-12);
        assert!((coeff(&ctx, &p, &[1]) - 20.0).abs() < 1e-12);
        let neg = ctx.variable(0, -4.0);
        assert!(matches!(
            ctx.pow(&neg, &ctx.constant(2.5)),
            Err(NumErr::PowDomain(_))
        ));
    }

    #[test]
    fn domain_errors_carry_the_value() {
        let ctx = TaylorCtx::new(1, 4);
        let x = ctx.variable(0, -1.5);
        assert!(matches!(ctx.log(&x), Err(NumErr::LogDomain(v)) if v == -1.5));
        assert!(matches!(ctx.sqrt(&x), Err(NumErr::SqrtDomain(v)) if v == -1.5));
        assert!(matches!(ctx.recip(&ctx.constant(0.0)), Err(NumErr::DivZero)));
    }

    #[test]
    fn matrix_inverse_in_the_ring() {
        let ctx = ctx2();
        let x = ctx.variable(0, 0.2);
        let m = alloc::vec![
            ctx.add(&ctx.constant(2.0), &x),
            ctx.constant(1.0),
            ctx.constant(1.0),
            ctx.add(&ctx.constant(1.0), &ctx.mul(&x, &x)),
        ];
        let inv = ctx.invert_matrix(&m, 2).unwrap();
        // m * inv should be the identity as series.
        for r in 0..2 {
            for c in 0..2 {
                let mut acc = ctx.zero();
                for k in 0..2 {
                    acc = ctx.add(&acc, &ctx.mul(&m[r * 2 + k], &inv[k * 2 + c]));
                }
                let want = if r == c { 1.0 } else { 0.0 };
                assert!((acc.c[0] - want).abs() < 1e-12);
                for &hi in &acc.c[1..] {
                    assert!(hi.abs() < 1e-11);
                }
            }
        }
    }

    #[test]
    fn singular_matrix_is_rejected() {
        let ctx = TaylorCtx::new(1, 2);
        let m = alloc::vec![
            ctx.constant(1.0),
            ctx.constant(2.0),
            ctx.constant(2.0),
            ctx.constant(4.0),
        ];
        assert!(matches!(ctx.invert_matrix(&m, 2), Err(NumErr::Singular)));
    }
}
