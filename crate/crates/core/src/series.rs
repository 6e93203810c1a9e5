//! Truncated exact arithmetic in `Q[[z]][y]/(y^2 - 1)` and its three-variable
//! extension `Q[[x,z]][y]/(y^2 - 1)`.
//!
//! A [`SignedSeries`] stores, per weight `q <= trunc`, a pair of coefficients
//! (even part, odd part). The relation `y^2 = 1` is structural: there are
//! exactly two sign components per weight and products combine them as
//! `(a + by)(c + dy) = (ac + bd) + (ad + bc) y`.
//!
//! A [`TriSeries`] adds the homological variable `x`; its support is
//! restricted to slots `(n, q, eps)` with `n <= q`.
//!
//! Every value carries its truncation bound. Binary operations truncate to
//! the minimum of the two bounds. All values are immutable after
//! construction and every operation is a pure function.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde_json::{json, Value};
use thiserror::Error;

use crate::scalar::{Parity, Scalar};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeriesError {
    #[error("constant term must be 1 to invert")]
    NonUnitConstant,
    #[error("constant term must be invertible (c_even^2 - c_odd^2 != 0)")]
    NonInvertibleConstant,
    #[error("series must have zero constant term")]
    NonzeroConstant,
    #[error("slot (n={n}, q={q}) outside the support region n <= q")]
    UnsupportedSlot { n: u32, q: u32 },
}

/// One weight's worth of coefficients: `even + odd * y`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CoefPair<T> {
    pub even: T,
    pub odd: T,
}

impl<T: Scalar> CoefPair<T> {
    pub fn zero() -> Self {
        CoefPair {
            even: T::zero(),
            odd: T::zero(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.even.is_zero() && self.odd.is_zero()
    }

    pub fn get(&self, p: Parity) -> &T {
        match p {
            Parity::Even => &self.even,
            Parity::Odd => &self.odd,
        }
    }

    pub fn get_mut(&mut self, p: Parity) -> &mut T {
        match p {
            Parity::Even => &mut self.even,
            Parity::Odd => &mut self.odd,
        }
    }

    fn add(&self, o: &Self) -> Self {
        CoefPair {
            even: self.even.clone() + o.even.clone(),
            odd: self.odd.clone() + o.odd.clone(),
        }
    }

    fn sub(&self, o: &Self) -> Self {
        CoefPair {
            even: self.even.clone() - o.even.clone(),
            odd: self.odd.clone() - o.odd.clone(),
        }
    }

    /// Product in `T[y]/(y^2-1)`.
    fn mul(&self, o: &Self) -> Self {
        CoefPair {
            even: self.even.clone() * o.even.clone() + self.odd.clone() * o.odd.clone(),
            odd: self.even.clone() * o.odd.clone() + self.odd.clone() * o.even.clone(),
        }
    }

    fn neg(&self) -> Self {
        CoefPair {
            even: -self.even.clone(),
            odd: -self.odd.clone(),
        }
    }

    fn scale(&self, c: &T) -> Self {
        CoefPair {
            even: self.even.clone() * c.clone(),
            odd: self.odd.clone() * c.clone(),
        }
    }

    /// Inverse in `T[y]/(y^2-1)`, defined when `even^2 - odd^2 != 0`.
    fn invert(&self) -> Option<Self> {
        let det = self.even.clone() * self.even.clone() - self.odd.clone() * self.odd.clone();
        if det.is_zero() {
            return None;
        }
        Some(CoefPair {
            even: self.even.clone() / det.clone(),
            odd: -self.odd.clone() / det,
        })
    }
}

/// Truncated element of `Q[[z]][y]/(y^2-1)`: dense per-weight storage.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SignedSeries<T> {
    trunc: u32,
    coef: Vec<CoefPair<T>>,
}

impl<T: Scalar> SignedSeries<T> {
    pub fn zero(trunc: u32) -> Self {
        SignedSeries {
            trunc,
            coef: (0..=trunc).map(|_| CoefPair::zero()).collect(),
        }
    }

    pub fn one(trunc: u32) -> Self {
        Self::constant(T::one(), trunc)
    }

    pub fn constant(c: T, trunc: u32) -> Self {
        let mut s = Self::zero(trunc);
        s.coef[0].even = c;
        s
    }

    /// The single term `c * y^eps * z^q` (zero if `q > trunc`).
    pub fn term(c: T, q: u32, eps: Parity, trunc: u32) -> Self {
        let mut s = Self::zero(trunc);
        if q <= trunc {
            *s.coef[q as usize].get_mut(eps) = c;
        }
        s
    }

    pub fn trunc(&self) -> u32 {
        self.trunc
    }

    pub fn coef_at(&self, q: u32) -> &CoefPair<T> {
        &self.coef[q as usize]
    }

    pub fn get(&self, q: u32, eps: Parity) -> T {
        if q > self.trunc {
            T::zero()
        } else {
            self.coef[q as usize].get(eps).clone()
        }
    }

    pub fn set(&mut self, q: u32, eps: Parity, c: T) {
        if q <= self.trunc {
            *self.coef[q as usize].get_mut(eps) = c;
        }
    }

    pub fn add_to(&mut self, q: u32, eps: Parity, c: T) {
        if q <= self.trunc {
            let slot = self.coef[q as usize].get_mut(eps);
            *slot = slot.clone() + c;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coef.iter().all(CoefPair::is_zero)
    }

    pub fn constant_term(&self) -> &CoefPair<T> {
        &self.coef[0]
    }

    pub fn has_constant_one(&self) -> bool {
        self.coef[0].even.is_one() && self.coef[0].odd.is_zero()
    }

    pub fn has_zero_constant(&self) -> bool {
        self.coef[0].is_zero()
    }

    /// Least weight with a nonzero coefficient.
    pub fn ord(&self) -> Option<u32> {
        self.coef.iter().position(|c| !c.is_zero()).map(|q| q as u32)
    }

    pub fn truncate(&self, trunc: u32) -> Self {
        let t = trunc.min(self.trunc);
        SignedSeries {
            trunc,
            coef: (0..=trunc)
                .map(|q| {
                    if q <= t {
                        self.coef[q as usize].clone()
                    } else {
                        CoefPair::zero()
                    }
                })
                .collect(),
        }
    }

    pub fn scale(&self, c: &T) -> Self {
        SignedSeries {
            trunc: self.trunc,
            coef: self.coef.iter().map(|p| p.scale(c)).collect(),
        }
    }

    /// Multiply by `y`: swaps the two sign components.
    pub fn mul_y(&self) -> Self {
        SignedSeries {
            trunc: self.trunc,
            coef: self
                .coef
                .iter()
                .map(|p| CoefPair {
                    even: p.odd.clone(),
                    odd: p.even.clone(),
                })
                .collect(),
        }
    }

    fn binop(&self, o: &Self, f: impl Fn(&CoefPair<T>, &CoefPair<T>) -> CoefPair<T>) -> Self {
        let trunc = self.trunc.min(o.trunc);
        SignedSeries {
            trunc,
            coef: (0..=trunc as usize)
                .map(|q| f(&self.coef[q], &o.coef[q]))
                .collect(),
        }
    }

    fn mul_impl(&self, o: &Self) -> Self {
        let trunc = self.trunc.min(o.trunc);
        let mut out = Self::zero(trunc);
        for (qa, ca) in self.coef.iter().enumerate().take(trunc as usize + 1) {
            if ca.is_zero() {
                continue;
            }
            for (qb, cb) in o.coef.iter().enumerate().take(trunc as usize + 1 - qa) {
                if cb.is_zero() {
                    continue;
                }
                let prod = ca.mul(cb);
                out.coef[qa + qb] = out.coef[qa + qb].add(&prod);
            }
        }
        out
    }

    /// Multiplicative inverse for series with constant term exactly 1.
    pub fn invert(&self) -> Result<Self, SeriesError> {
        if !self.has_constant_one() {
            return Err(SeriesError::NonUnitConstant);
        }
        let n = self.trunc;
        let mut g = Self::zero(n);
        g.coef[0].even = T::one();
        // g_q = -sum_{j=1..q} f_j * g_{q-j}
        for q in 1..=n as usize {
            let mut acc = CoefPair::zero();
            for j in 1..=q {
                if self.coef[j].is_zero() {
                    continue;
                }
                acc = acc.add(&self.coef[j].mul(&g.coef[q - j]));
            }
            g.coef[q] = acc.neg();
        }
        Ok(g)
    }

    /// Inverse of any unit: constant term `c` with `c_even^2 - c_odd^2 != 0`.
    /// Used by the evaluator's division; `invert` keeps the stricter
    /// constant-term-1 contract.
    pub fn invert_unit(&self) -> Result<Self, SeriesError> {
        let c_inv = self
            .coef[0]
            .invert()
            .ok_or(SeriesError::NonInvertibleConstant)?;
        let normalized = SignedSeries {
            trunc: self.trunc,
            coef: self.coef.iter().map(|p| p.mul(&c_inv)).collect(),
        };
        // constant term of `normalized` is exactly 1 now
        Ok(normalized.invert()?.into_scaled(&c_inv))
    }

    fn into_scaled(self, c: &CoefPair<T>) -> Self {
        SignedSeries {
            trunc: self.trunc,
            coef: self.coef.iter().map(|p| p.mul(c)).collect(),
        }
    }

    /// The substitution `z -> z^k`, `y -> (-1)^{k+1} y^k`. For odd `k` each
    /// `(a_q, b_q)` moves to weight `kq` unchanged; for even `k` it becomes
    /// `(a_q - b_q, 0)` there.
    pub fn substitute_power(&self, k: u32) -> Self {
        assert!(k >= 1, "substitution exponent must be >= 1");
        let mut out = Self::zero(self.trunc);
        for (q, c) in self.coef.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let target = (q as u64) * (k as u64);
            if target > self.trunc as u64 {
                continue;
            }
            let t = target as usize;
            if k % 2 == 1 {
                out.coef[t] = out.coef[t].add(c);
            } else {
                out.coef[t].even =
                    out.coef[t].even.clone() + c.even.clone() - c.odd.clone();
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.trunc);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_impl(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_impl(&base);
            }
        }
        acc
    }

    /// Nonzero coefficients as `(q, eps, value)`, ascending in `(q, eps)`.
    pub fn iter_nonzero(&self) -> impl Iterator<Item = (u32, Parity, &T)> {
        self.coef.iter().enumerate().flat_map(|(q, c)| {
            let mut v = Vec::with_capacity(2);
            if !c.even.is_zero() {
                v.push((q as u32, Parity::Even, &c.even));
            }
            if !c.odd.is_zero() {
                v.push((q as u32, Parity::Odd, &c.odd));
            }
            v
        })
    }

    /// Structured-text rendering: `{"trunc": N, "coeffs": [[q, even, odd], ...]}`
    /// with rationals as strings; rows with both parts zero are omitted.
    pub fn to_json(&self) -> Value {
        let coeffs: Vec<Value> = self
            .coef
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(q, c)| json!([q, c.even.to_string(), c.odd.to_string()]))
            .collect();
        json!({ "trunc": self.trunc, "coeffs": coeffs })
    }
}

/// Evaluate `sum_k phi[k] * f^k`, truncated. Requires `f(0) = 0`, which makes
/// the sum finite: only `k <= trunc` contribute.
pub fn compose<T: Scalar>(
    phi: &[T],
    f: &SignedSeries<T>,
) -> Result<SignedSeries<T>, SeriesError> {
    if !f.has_zero_constant() {
        return Err(SeriesError::NonzeroConstant);
    }
    let top = phi.len().min(f.trunc() as usize + 2);
    // Horner: (((phi_m f + phi_{m-1}) f + ...) f + phi_0)
    let mut acc = SignedSeries::zero(f.trunc());
    for k in (0..top).rev() {
        acc = acc.mul_impl(f);
        acc.coef[0].even = acc.coef[0].even.clone() + phi[k].clone();
    }
    Ok(acc)
}

impl<T: Scalar> Add for &SignedSeries<T> {
    type Output = SignedSeries<T>;
    fn add(self, rhs: Self) -> SignedSeries<T> {
        self.binop(rhs, CoefPair::add)
    }
}

impl<T: Scalar> Sub for &SignedSeries<T> {
    type Output = SignedSeries<T>;
    fn sub(self, rhs: Self) -> SignedSeries<T> {
        self.binop(rhs, CoefPair::sub)
    }
}

impl<T: Scalar> Mul for &SignedSeries<T> {
    type Output = SignedSeries<T>;
    fn mul(self, rhs: Self) -> SignedSeries<T> {
        self.mul_impl(rhs)
    }
}

impl<T: Scalar> Neg for &SignedSeries<T> {
    type Output = SignedSeries<T>;
    fn neg(self) -> SignedSeries<T> {
        SignedSeries {
            trunc: self.trunc,
            coef: self.coef.iter().map(CoefPair::neg).collect(),
        }
    }
}

fn push_term(out: &mut String, neg: bool, body: String, first: bool) {
    if first {
        if neg {
            out.push('-');
        }
    } else if neg {
        out.push_str(" - ");
    } else {
        out.push_str(" + ");
    }
    out.push_str(&body);
}

fn scalar_term<T: Scalar>(c: &T, monomial: &str) -> (bool, String) {
    let neg = c.is_negative();
    let a = c.abs();
    let body = if monomial.is_empty() {
        format!("{}", a)
    } else if a.is_one() {
        monomial.to_string()
    } else {
        format!("{}*{}", a, monomial)
    };
    (neg, body)
}

fn z_monomial(q: u32, eps: Parity) -> String {
    let mut m = String::new();
    if eps.is_odd() {
        m.push('y');
    }
    if q > 0 {
        if !m.is_empty() {
            m.push('*');
        }
        if q == 1 {
            m.push('z');
        } else {
            m.push_str(&format!("z^{}", q));
        }
    }
    m
}

/// Canonical plain-text rendering, bit-stable: terms ascend by weight, even
/// part before odd part, e.g. `1 + (a_q + b_q y) z^q` prints as
/// `1 + a_q*z^q + b_q*y*z^q`.
impl<T: Scalar> fmt::Display for SignedSeries<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        let mut first = true;
        for (q, eps, c) in self.iter_nonzero() {
            let (neg, body) = scalar_term(c, &z_monomial(q, eps));
            push_term(&mut out, neg, body, first);
            first = false;
        }
        if first {
            out.push('0');
        }
        f.write_str(&out)
    }
}

/// Truncated element of `Q[[x,z]][y]/(y^2-1)` with support `0 <= n <= q`.
/// Sparse: only nonzero slots are stored, keyed `(q, n, eps)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TriSeries<T> {
    trunc: u32,
    coef: BTreeMap<(u32, u32, Parity), T>,
}

impl<T: Scalar> TriSeries<T> {
    pub fn zero(trunc: u32) -> Self {
        TriSeries {
            trunc,
            coef: BTreeMap::new(),
        }
    }

    pub fn one(trunc: u32) -> Self {
        Self::term(T::one(), 0, 0, Parity::Even, trunc)
    }

    /// The single term `c * x^n * y^eps * z^q`.
    ///
    /// Panics if `n > q`: such slots are identically zero here.
    pub fn term(c: T, n: u32, q: u32, eps: Parity, trunc: u32) -> Self {
        let mut s = Self::zero(trunc);
        s.add_to(n, q, eps, c);
        s
    }

    pub fn trunc(&self) -> u32 {
        self.trunc
    }

    pub fn get(&self, n: u32, q: u32, eps: Parity) -> T {
        self.coef
            .get(&(q, n, eps))
            .cloned()
            .unwrap_or_else(T::zero)
    }

    pub fn add_to(&mut self, n: u32, q: u32, eps: Parity, c: T) {
        assert!(n <= q, "slot (n={}, q={}) violates n <= q", n, q);
        if q > self.trunc || c.is_zero() {
            return;
        }
        let slot = self.coef.entry((q, n, eps)).or_insert_with(T::zero);
        *slot = slot.clone() + c;
        if slot.is_zero() {
            self.coef.remove(&(q, n, eps));
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coef.is_empty()
    }

    /// Nonzero slots as `(n, q, eps, value)`, ascending in `(q, n, eps)`.
    pub fn iter_nonzero(&self) -> impl Iterator<Item = (u32, u32, Parity, &T)> {
        self.coef.iter().map(|(&(q, n, e), v)| (n, q, e, v))
    }

    pub fn truncate(&self, trunc: u32) -> Self {
        let mut out = Self::zero(trunc);
        for (&(q, n, e), v) in &self.coef {
            if q <= trunc {
                out.coef.insert((q, n, e), v.clone());
            }
        }
        out
    }

    pub fn scale(&self, c: &T) -> Self {
        if c.is_zero() {
            return Self::zero(self.trunc);
        }
        TriSeries {
            trunc: self.trunc,
            coef: self
                .coef
                .iter()
                .map(|(k, v)| (*k, v.clone() * c.clone()))
                .collect(),
        }
    }

    /// Embed a two-variable series at homological degree `n`, optionally
    /// multiplied by `y` (parity flip). Fails if the series has a nonzero
    /// coefficient below weight `n`.
    pub fn from_signed_at(
        s: &SignedSeries<T>,
        n: u32,
        flip: bool,
    ) -> Result<Self, SeriesError> {
        let mut out = Self::zero(s.trunc());
        for (q, eps, c) in s.iter_nonzero() {
            if q < n {
                return Err(SeriesError::UnsupportedSlot { n, q });
            }
            let e = if flip { eps.flip() } else { eps };
            out.add_to(n, q, e, c.clone());
        }
        Ok(out)
    }

    /// Embedding at `n = 0`.
    pub fn from_signed(s: &SignedSeries<T>) -> Self {
        Self::from_signed_at(s, 0, false).expect("n = 0 embedding cannot fail")
    }

    fn binop(&self, o: &Self, sub: bool) -> Self {
        let trunc = self.trunc.min(o.trunc);
        let mut out = self.truncate(trunc);
        for (&(q, n, e), v) in &o.coef {
            if q <= trunc {
                let w = if sub { -v.clone() } else { v.clone() };
                out.add_to(n, q, e, w);
            }
        }
        out
    }

    fn mul_impl(&self, o: &Self) -> Self {
        let trunc = self.trunc.min(o.trunc);
        let mut out = Self::zero(trunc);
        for (&(qa, na, ea), va) in &self.coef {
            if qa > trunc {
                continue;
            }
            for (&(qb, nb, eb), vb) in &o.coef {
                if qa + qb > trunc {
                    break;
                }
                out.add_to(na + nb, qa + qb, ea + eb, va.clone() * vb.clone());
            }
        }
        out
    }

    /// Inverse of a unit tri-series. The constant pair (slots `(0,0,.)`)
    /// must be invertible in `T[y]/(y^2-1)`; the rest is a Neumann series,
    /// finite because every non-constant slot has `q >= 1`.
    pub fn invert_unit(&self) -> Result<Self, SeriesError> {
        let c = CoefPair {
            even: self.get(0, 0, Parity::Even),
            odd: self.get(0, 0, Parity::Odd),
        };
        let c_inv = c.invert().ok_or(SeriesError::NonInvertibleConstant)?;
        let c_inv_t = {
            let mut s = Self::zero(self.trunc);
            s.add_to(0, 0, Parity::Even, c_inv.even.clone());
            s.add_to(0, 0, Parity::Odd, c_inv.odd.clone());
            s
        };
        // u = 1 - f/c has q >= 1 everywhere; 1/f = (1/c) * sum u^k
        let u = &Self::one(self.trunc) - &self.mul_impl(&c_inv_t);
        let mut acc = Self::one(self.trunc);
        for _ in 0..self.trunc {
            acc = &Self::one(self.trunc) + &acc.mul_impl(&u);
        }
        Ok(acc.mul_impl(&c_inv_t))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.trunc);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_impl(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_impl(&base);
            }
        }
        acc
    }

    /// `{"trunc": N, "coeffs": [[n, q, eps, value], ...]}` sorted by `(q, n, eps)`.
    pub fn to_json(&self) -> Value {
        let coeffs: Vec<Value> = self
            .coef
            .iter()
            .map(|(&(q, n, e), v)| json!([n, q, e.as_u32(), v.to_string()]))
            .collect();
        json!({ "trunc": self.trunc, "coeffs": coeffs })
    }
}

impl<T: Scalar> Add for &TriSeries<T> {
    type Output = TriSeries<T>;
    fn add(self, rhs: Self) -> TriSeries<T> {
        self.binop(rhs, false)
    }
}

impl<T: Scalar> Sub for &TriSeries<T> {
    type Output = TriSeries<T>;
    fn sub(self, rhs: Self) -> TriSeries<T> {
        self.binop(rhs, true)
    }
}

impl<T: Scalar> Mul for &TriSeries<T> {
    type Output = TriSeries<T>;
    fn mul(self, rhs: Self) -> TriSeries<T> {
        self.mul_impl(rhs)
    }
}

impl<T: Scalar> Neg for &TriSeries<T> {
    type Output = TriSeries<T>;
    fn neg(self) -> TriSeries<T> {
        TriSeries {
            trunc: self.trunc,
            coef: self
                .coef
                .iter()
                .map(|(k, v)| (*k, -v.clone()))
                .collect(),
        }
    }
}

fn x_monomial(n: u32, q: u32, eps: Parity) -> String {
    let mut m = String::new();
    if n == 1 {
        m.push('x');
    } else if n > 1 {
        m.push_str(&format!("x^{}", n));
    }
    let zy = z_monomial(q, eps);
    if !zy.is_empty() {
        if !m.is_empty() {
            m.push('*');
        }
        m.push_str(&zy);
    }
    m
}

impl<T: Scalar> fmt::Display for TriSeries<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        let mut first = true;
        for (n, q, eps, c) in self.iter_nonzero() {
            let (neg, body) = scalar_term(c, &x_monomial(n, q, eps));
            push_term(&mut out, neg, body, first);
            first = false;
        }
        if first {
            out.push('0');
        }
        f.write_str(&out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rat;
    use num_traits::{FromPrimitive, One, Zero};

    fn r(n: i64) -> Rat {
        Rat::from_i64(n).unwrap()
    }

    fn z(trunc: u32) -> SignedSeries<Rat> {
        SignedSeries::term(Rat::one(), 1, Parity::Even, trunc)
    }

    fn yz(trunc: u32) -> SignedSeries<Rat> {
        SignedSeries::term(Rat::one(), 1, Parity::Odd, trunc)
    }

    #[test]
    fn geometric_identity() {
        // (1 - z) * (1 + z + z^2 + ...) = 1
        let n = 12;
        let one_minus_z = &SignedSeries::one(n) - &z(n);
        let mut geo = SignedSeries::zero(n);
        for q in 0..=n {
            geo.set(q, Parity::Even, Rat::one());
        }
        assert_eq!(&one_minus_z * &geo, SignedSeries::one(n));
    }

    #[test]
    fn y_squares_to_one() {
        let n = 8;
        // (1 + yz)(1 - yz) = 1 - z^2
        let a = &SignedSeries::one(n) + &yz(n);
        let b = &SignedSeries::one(n) - &yz(n);
        let expect = &SignedSeries::one(n) - &SignedSeries::term(Rat::one(), 2, Parity::Even, n);
        assert_eq!(&a * &b, expect);
        // (yz)(yz) = z^2
        assert_eq!(
            &yz(n) * &yz(n),
            SignedSeries::term(Rat::one(), 2, Parity::Even, n)
        );
    }

    #[test]
    fn invert_geometric() {
        let n = 10;
        let f = &SignedSeries::one(n) - &z(n);
        let g = f.invert().unwrap();
        for q in 0..=n {
            assert_eq!(g.get(q, Parity::Even), Rat::one());
        }
        assert_eq!(&f * &g, SignedSeries::one(n));
    }

    #[test]
    fn invert_two_z() {
        // 1/(1-2z) = sum 2^q z^q
        let n = 10;
        let f = &SignedSeries::one(n) - &z(n).scale(&r(2));
        let g = f.invert().unwrap();
        for q in 0..=n {
            assert_eq!(g.get(q, Parity::Even), r(1 << q));
        }
    }

    #[test]
    fn invert_squared_geometric() {
        // 1/(1-2z+z^2) = 1/(1-z)^2 = sum (q+1) z^q   (expand (1-z)^{-2} binomially)
        let n = 10;
        let mut f = SignedSeries::one(n);
        f.set(1, Parity::Even, r(-2));
        f.set(2, Parity::Even, Rat::one());
        let g = f.invert().unwrap();
        for q in 0..=n {
            assert_eq!(g.get(q, Parity::Even), r(q as i64 + 1));
        }
    }

    #[test]
    fn invert_rejects_non_unit() {
        let n = 4;
        assert_eq!(z(n).invert(), Err(SeriesError::NonUnitConstant));
        let two = SignedSeries::constant(r(2), n);
        assert_eq!(two.invert(), Err(SeriesError::NonUnitConstant));
        // but the general unit inverse handles it
        assert_eq!(
            two.invert_unit().unwrap(),
            SignedSeries::constant(Rat::from_ratio(1, 2), n)
        );
    }

    #[test]
    fn invert_unit_with_odd_constant() {
        // 1/(2 + y) = (2 - y)/3
        let n = 6;
        let mut f = SignedSeries::constant(r(2), n);
        f.set(0, Parity::Odd, Rat::one());
        f.set(3, Parity::Odd, r(5));
        let g = f.invert_unit().unwrap();
        assert_eq!(&f * &g, SignedSeries::one(n));
        // y itself is a unit: 1/y = y
        let y = SignedSeries::term(Rat::one(), 0, Parity::Odd, n);
        assert_eq!(y.invert_unit().unwrap(), y);
    }

    #[test]
    fn substitute_power_examples() {
        let n = 8;
        let one_plus_yz = &SignedSeries::one(n) + &yz(n);
        // k = 2: y -> -1, z -> z^2
        let s2 = one_plus_yz.substitute_power(2);
        let expect2 = &SignedSeries::one(n) - &SignedSeries::term(Rat::one(), 2, Parity::Even, n);
        assert_eq!(s2, expect2);
        // k = 3: y -> y, z -> z^3
        let s3 = one_plus_yz.substitute_power(3);
        let expect3 = &SignedSeries::one(n) + &SignedSeries::term(Rat::one(), 3, Parity::Odd, n);
        assert_eq!(s3, expect3);
        // componentwise rule on 2z + 3yz^2 at k = 2: -> 2z^2 - 3z^4
        let mut f = SignedSeries::zero(n);
        f.set(1, Parity::Even, r(2));
        f.set(2, Parity::Odd, r(3));
        let g = f.substitute_power(2);
        let mut expect = SignedSeries::zero(n);
        expect.set(2, Parity::Even, r(2));
        expect.set(4, Parity::Even, r(-3));
        assert_eq!(g, expect);
    }

    #[test]
    fn compose_examples() {
        let n = 8;
        // exp-type coefficients applied to 0 give 1
        let phi: Vec<Rat> = (0..=n as i64)
            .scan(Rat::one(), |acc, k| {
                if k > 0 {
                    *acc = acc.clone() / r(k);
                }
                Some(acc.clone())
            })
            .collect();
        let zero = SignedSeries::zero(n);
        assert_eq!(compose(&phi, &zero).unwrap(), SignedSeries::one(n));

        // geometric coefficients applied to yz give 1/(1-yz) = (1+yz)/(1-z^2)
        let geo: Vec<Rat> = (0..=n).map(|_| Rat::one()).collect();
        let lhs = compose(&geo, &yz(n)).unwrap();
        let denom = &SignedSeries::one(n) - &SignedSeries::term(Rat::one(), 2, Parity::Even, n);
        let rhs = &(&SignedSeries::one(n) + &yz(n)) * &denom.invert().unwrap();
        assert_eq!(lhs, rhs);

        // nonzero constant term is rejected
        assert!(compose(&geo, &SignedSeries::one(n)).is_err());
    }

    #[test]
    fn mixed_trunc_takes_min() {
        let a = z(10);
        let b = z(6);
        assert_eq!((&a + &b).trunc(), 6);
        assert_eq!((&a * &b).trunc(), 6);
    }

    #[test]
    fn tri_mul_squares_xyz() {
        // (1 + xyz)^2 = 1 + 2xyz + x^2 z^2 since (xy)^2 = x^2
        let n = 6;
        let f = &TriSeries::one(n) + &TriSeries::term(Rat::one(), 1, 1, Parity::Odd, n);
        let sq = &f * &f;
        let mut expect = TriSeries::one(n);
        expect.add_to(1, 1, Parity::Odd, r(2));
        expect.add_to(2, 2, Parity::Even, Rat::one());
        assert_eq!(sq, expect);
    }

    #[test]
    fn tri_from_signed_places_at_level_zero() {
        let n = 5;
        let t = TriSeries::from_signed(&yz(n));
        assert_eq!(t.get(0, 1, Parity::Odd), Rat::one());
        assert_eq!(t.iter_nonzero().count(), 1);
    }

    #[test]
    fn tri_hkr_two_variables_low_weight() {
        // (1 + yxz)^2 / (1-z)^2 up to weight 2:
        // 1 + 2z + 2xyz + 3z^2 + 4xyz^2 + x^2 z^2
        let n = 2;
        let f = &TriSeries::one(n) + &TriSeries::term(Rat::one(), 1, 1, Parity::Odd, n);
        let mut denom = TriSeries::one(n);
        denom.add_to(0, 1, Parity::Even, r(-1));
        let h = &f.pow(2) * &denom.pow(2).invert_unit().unwrap();
        assert_eq!(h.get(0, 0, Parity::Even), Rat::one());
        assert_eq!(h.get(0, 1, Parity::Even), r(2));
        assert_eq!(h.get(1, 1, Parity::Odd), r(2));
        assert_eq!(h.get(0, 2, Parity::Even), r(3));
        assert_eq!(h.get(1, 2, Parity::Odd), r(4));
        assert_eq!(h.get(2, 2, Parity::Even), Rat::one());
    }

    #[test]
    fn tri_invert_unit_round_trip() {
        let n = 6;
        let mut f = TriSeries::one(n);
        f.add_to(1, 2, Parity::Odd, r(3));
        f.add_to(0, 1, Parity::Even, r(-2));
        f.add_to(0, 0, Parity::Odd, r(2)); // constant 1 + 2y, det = 1-4 = -3
        let g = f.invert_unit().unwrap();
        assert_eq!(&f * &g, TriSeries::one(n));
    }

    #[test]
    fn display_is_canonical() {
        let n = 5;
        let mut s = SignedSeries::one(n);
        s.set(1, Parity::Odd, r(7));
        s.set(2, Parity::Even, r(-3));
        s.set(4, Parity::Even, Rat::from_ratio(1, 2));
        assert_eq!(s.to_string(), "1 + 7*y*z - 3*z^2 + 1/2*z^4");
        assert_eq!(SignedSeries::<Rat>::zero(3).to_string(), "0");

        let mut t = TriSeries::one(n);
        t.add_to(1, 2, Parity::Odd, r(21));
        t.add_to(2, 3, Parity::Even, r(98));
        assert_eq!(t.to_string(), "1 + 21*x*y*z^2 + 98*x^2*z^3");
    }

    #[test]
    fn json_rendering_is_stable() {
        let n = 3;
        let mut s = SignedSeries::one(n);
        s.set(2, Parity::Odd, Rat::from_ratio(-1, 3));
        assert_eq!(
            s.to_json().to_string(),
            r#"{"coeffs":[[0,"1","0"],[2,"0","-1/3"]],"trunc":3}"#
        );
        let t = TriSeries::term(r(2), 1, 2, Parity::Odd, n);
        assert_eq!(
            t.to_json().to_string(),
            r#"{"coeffs":[[1,2,1,"2"]],"trunc":3}"#
        );
    }
}
