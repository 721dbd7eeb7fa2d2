//! Precision-tracked elements of R((u))((t)) for a coefficient ring R.
//!
//! `Laurent2` (R = F_q) is the two-dimensional local field, `PadicLaurent2` (R = W_s(F_q))
//! its characteristic-zero lift. A row (fixed t-exponent) is a dense Laurent series in u
//! with its own absolute u-precision; rows missing below `t_prec` are exactly zero.

use crate::error::{Error, Result};
use crate::ff::{FieldSpec, Fq, Zq};
use crate::ring::Ring;
use num_bigint::BigInt;
use std::collections::BTreeMap;
use std::fmt;

/// Stand-in for an infinite precision bound.
pub const INF: i64 = i64::MAX / 4;

fn padd(a: i64, b: i64) -> i64 {
    if a >= INF || b >= INF {
        INF
    } else {
        a + b
    }
}

/// Relative working precision used when an operation must truncate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Precision {
    pub t: i64,
    pub u: i64,
}

impl Default for Precision {
    fn default() -> Self {
        Precision { t: 12, u: 12 }
    }
}

impl Precision {
    pub fn new(t: i64, u: i64) -> Self {
        Precision { t, u }
    }
    pub fn doubled(self) -> Self {
        Precision { t: self.t * 2, u: self.u * 2 }
    }
}

/// `sum c[k] u^(start+k) + O(u^prec)`; no leading or trailing zeros.
#[derive(Clone, Debug, PartialEq)]
pub struct USeries<E> {
    pub start: i64,
    pub c: Vec<E>,
    pub prec: i64,
}

impl<E: Clone> USeries<E> {
    pub fn exact_zero() -> Self {
        USeries { start: 0, c: vec![], prec: INF }
    }
    pub fn big_o(prec: i64) -> Self {
        USeries { start: prec, c: vec![], prec }
    }
    /// Valuation lower bound.
    pub fn val(&self) -> i64 {
        if self.c.is_empty() {
            self.prec
        } else {
            self.start
        }
    }
    pub fn is_exact(&self) -> bool {
        self.prec >= INF
    }
    pub fn end(&self) -> i64 {
        self.start + self.c.len() as i64
    }
    pub fn is_exact_zero(&self) -> bool {
        self.c.is_empty() && self.is_exact()
    }
    pub fn iter(&self) -> impl Iterator<Item = (i64, &E)> {
        self.c.iter().enumerate().map(move |(k, e)| (self.start + k as i64, e))
    }
}

fn us_norm<R: Ring>(r: &R, mut s: USeries<R::Elem>) -> USeries<R::Elem> {
    let lim = (s.prec - s.start).max(0) as usize;
    if s.c.len() > lim {
        s.c.truncate(lim);
    }
    while s.c.last().is_some_and(|x| r.is_zero(x)) {
        s.c.pop();
    }
    let lead = s.c.iter().position(|x| !r.is_zero(x));
    match lead {
        None => {
            s.c.clear();
            s.start = if s.is_exact() { 0 } else { s.prec };
        }
        Some(k) if k > 0 => {
            s.c.drain(..k);
            s.start += k as i64;
        }
        _ => {}
    }
    s
}

pub(crate) fn us_add<R: Ring>(r: &R, a: &USeries<R::Elem>, b: &USeries<R::Elem>) -> USeries<R::Elem> {
    let prec = a.prec.min(b.prec);
    if a.c.is_empty() && b.c.is_empty() {
        return USeries { start: if prec >= INF { 0 } else { prec }, c: vec![], prec };
    }
    let start = if a.c.is_empty() {
        b.start
    } else if b.c.is_empty() {
        a.start
    } else {
        a.start.min(b.start)
    };
    let end = a.end().max(b.end()).min(prec);
    if end <= start {
        return us_norm(r, USeries { start, c: vec![], prec });
    }
    let mut c = vec![r.zero(); (end - start) as usize];
    for (i, x) in a.iter() {
        if i < end {
            c[(i - start) as usize] = x.clone();
        }
    }
    for (i, x) in b.iter() {
        if i < end {
            let k = (i - start) as usize;
            c[k] = r.add(&c[k], x);
        }
    }
    us_norm(r, USeries { start, c, prec })
}

fn us_neg<R: Ring>(r: &R, a: &USeries<R::Elem>) -> USeries<R::Elem> {
    USeries { start: a.start, c: a.c.iter().map(|x| r.neg(x)).collect(), prec: a.prec }
}

fn us_scale<R: Ring>(r: &R, a: &USeries<R::Elem>, k: &R::Elem) -> USeries<R::Elem> {
    us_norm(r, USeries { start: a.start, c: a.c.iter().map(|x| r.mul(x, k)).collect(), prec: a.prec })
}

pub(crate) fn us_mul<R: Ring>(r: &R, a: &USeries<R::Elem>, b: &USeries<R::Elem>) -> USeries<R::Elem> {
    if a.is_exact_zero() || b.is_exact_zero() {
        return USeries::exact_zero();
    }
    let prec = padd(a.prec, b.val()).min(padd(b.prec, a.val()));
    if a.c.is_empty() || b.c.is_empty() {
        return USeries::big_o(prec);
    }
    let start = a.start + b.start;
    let len = ((a.c.len() + b.c.len() - 1) as i64).min(prec - start).max(0) as usize;
    let mut c = vec![r.zero(); len];
    for (i, x) in a.c.iter().enumerate() {
        if i >= len || r.is_zero(x) {
            continue;
        }
        for (j, y) in b.c.iter().enumerate().take(len - i) {
            c[i + j] = r.add(&c[i + j], &r.mul(x, y));
        }
    }
    us_norm(r, USeries { start, c, prec })
}

/// Inverse of a row whose leading coefficient is a unit.
fn us_inv<R: Ring>(r: &R, a: &USeries<R::Elem>, rel_u: i64) -> Result<USeries<R::Elem>> {
    if a.c.is_empty() {
        return Err(Error::ZeroDivisor);
    }
    let c0i = r.inv(&a.c[0]).ok_or(Error::ZeroDivisor)?;
    let start = -a.start;
    if a.c.len() == 1 && a.is_exact() {
        return Ok(USeries { start, c: vec![c0i], prec: INF });
    }
    let rel = if a.is_exact() { rel_u } else { a.prec - a.start };
    let len = rel.max(0) as usize;
    let mut out: Vec<R::Elem> = Vec::with_capacity(len);
    for k in 0..len {
        if k == 0 {
            out.push(c0i.clone());
            continue;
        }
        let mut acc = r.zero();
        for i in 1..=k.min(a.c.len() - 1) {
            acc = r.add(&acc, &r.mul(&a.c[i], &out[k - i]));
        }
        out.push(r.neg(&r.mul(&c0i, &acc)));
    }
    Ok(us_norm(r, USeries { start, c: out, prec: start + rel }))
}

/// An element of R((u))((t)) with tracked precision.
#[derive(Clone)]
pub struct Series2<R: Ring> {
    pub ring: R,
    pub rows: BTreeMap<i64, USeries<R::Elem>>,
    pub t_prec: i64,
}

pub type Laurent2 = Series2<FieldSpec>;
pub type PadicLaurent2 = Series2<Zq>;

impl<R: Ring> PartialEq for Series2<R> {
    fn eq(&self, o: &Self) -> bool {
        self.t_prec == o.t_prec && self.rows == o.rows
    }
}

impl<R: Ring> fmt::Debug for Series2<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Series2").field("rows", &self.rows).field("t_prec", &self.t_prec).finish()
    }
}

impl<R: Ring> Series2<R> {
    pub fn zero(ring: &R) -> Self {
        Series2 { ring: ring.clone(), rows: BTreeMap::new(), t_prec: INF }
    }
    pub fn one(ring: &R) -> Self {
        Self::monomial(ring, ring.one(), 0, 0)
    }
    /// `c u^i t^j`.
    pub fn monomial(ring: &R, c: R::Elem, i: i64, j: i64) -> Self {
        let mut s = Self::zero(ring);
        if !ring.is_zero(&c) {
            s.rows.insert(j, USeries { start: i, c: vec![c], prec: INF });
        }
        s
    }
    pub fn constant(ring: &R, c: R::Elem) -> Self {
        Self::monomial(ring, c, 0, 0)
    }
    pub fn u(ring: &R) -> Self {
        Self::monomial(ring, ring.one(), 1, 0)
    }
    pub fn t(ring: &R) -> Self {
        Self::monomial(ring, ring.one(), 0, 1)
    }
    /// `O(t^n)`.
    pub fn big_o_t(ring: &R, n: i64) -> Self {
        Series2 { ring: ring.clone(), rows: BTreeMap::new(), t_prec: n }
    }
    /// `O(u^n) t^j`.
    pub fn big_o_u(ring: &R, n: i64, j: i64) -> Self {
        let mut s = Self::zero(ring);
        s.rows.insert(j, USeries::big_o(n));
        s
    }
    /// Builds from `(i, j, c)` terms, exact.
    pub fn from_terms(ring: &R, terms: impl IntoIterator<Item = (i64, i64, R::Elem)>) -> Self {
        let mut s = Self::zero(ring);
        for (i, j, c) in terms {
            s = s.add(&Self::monomial(ring, c, i, j));
        }
        s
    }

    fn normalize(mut self) -> Self {
        let tp = self.t_prec;
        self.rows.retain(|&j, r| j < tp && !r.is_exact_zero());
        self
    }

    pub fn is_exact(&self) -> bool {
        self.t_prec >= INF && self.rows.values().all(|r| r.is_exact())
    }
    /// No stored term and no known-nonzero coefficient.
    pub fn is_zero(&self) -> bool {
        self.rows.values().all(|r| r.c.is_empty())
    }
    pub fn is_exact_zero(&self) -> bool {
        self.rows.is_empty() && self.t_prec >= INF
    }
    /// Number of stored coefficients.
    pub fn nterms(&self) -> usize {
        self.rows.values().map(|r| r.c.iter().filter(|x| !self.ring.is_zero(x)).count()).sum()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, i64, &R::Elem)> {
        self.rows
            .iter()
            .flat_map(|(&j, r)| r.iter().filter(|(_, x)| !self.ring.is_zero(x)).map(move |(i, x)| (i, j, x)))
    }

    /// Coefficient of u^i t^j, failing outside the known precision.
    pub fn coeff(&self, i: i64, j: i64) -> Result<R::Elem> {
        if j >= self.t_prec {
            return Err(Error::CoefficientOutsidePrecision { i, j });
        }
        match self.rows.get(&j) {
            None => Ok(self.ring.zero()),
            Some(r) => {
                if i >= r.prec {
                    return Err(Error::CoefficientOutsidePrecision { i, j });
                }
                if i < r.start || i >= r.end() {
                    Ok(self.ring.zero())
                } else {
                    Ok(r.c[(i - r.start) as usize].clone())
                }
            }
        }
    }

    pub fn row(&self, j: i64) -> Option<&USeries<R::Elem>> {
        self.rows.get(&j)
    }

    pub fn add(&self, o: &Self) -> Self {
        let r = &self.ring;
        let t_prec = self.t_prec.min(o.t_prec);
        let mut rows = BTreeMap::new();
        for (&j, a) in self.rows.range(..t_prec) {
            rows.insert(j, a.clone());
        }
        for (&j, b) in o.rows.range(..t_prec) {
            let v = match rows.get(&j) {
                Some(a) => us_add(r, a, b),
                None => b.clone(),
            };
            rows.insert(j, v);
        }
        Series2 { ring: r.clone(), rows, t_prec }.normalize()
    }

    pub fn neg(&self) -> Self {
        let r = &self.ring;
        Series2 { ring: r.clone(), rows: self.rows.iter().map(|(&j, a)| (j, us_neg(r, a))).collect(), t_prec: self.t_prec }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, k: &R::Elem) -> Self {
        let r = &self.ring;
        Series2 {
            ring: r.clone(),
            rows: self.rows.iter().map(|(&j, a)| (j, us_scale(r, a, k))).collect(),
            t_prec: self.t_prec,
        }
        .normalize()
    }

    /// Multiplication by u^i t^j.
    pub fn shift(&self, i: i64, j: i64) -> Self {
        Series2 {
            ring: self.ring.clone(),
            rows: self
                .rows
                .iter()
                .map(|(&jj, a)| {
                    (jj + j, USeries { start: a.start + i, c: a.c.clone(), prec: padd(a.prec, i) })
                })
                .collect(),
            t_prec: padd(self.t_prec, j),
        }
    }

    /// Lower bound for the t-valuation.
    pub fn t_val(&self) -> i64 {
        self.rows.keys().next().copied().unwrap_or(self.t_prec)
    }

    pub fn mul(&self, o: &Self) -> Self {
        let r = &self.ring;
        if self.is_exact_zero() || o.is_exact_zero() {
            return Self::zero(r);
        }
        let t_prec = padd(self.t_prec, o.t_val()).min(padd(o.t_prec, self.t_val()));
        let mut rows: BTreeMap<i64, USeries<R::Elem>> = BTreeMap::new();
        for (&ja, a) in &self.rows {
            for (&jb, b) in &o.rows {
                let j = ja + jb;
                if j >= t_prec {
                    break;
                }
                let p = us_mul(r, a, b);
                let v = match rows.remove(&j) {
                    Some(x) => us_add(r, &x, &p),
                    None => p,
                };
                rows.insert(j, v);
            }
        }
        Series2 { ring: r.clone(), rows, t_prec }.normalize()
    }

    /// Coefficient of u^i t^j in `self * o` without forming the product.
    pub fn mul_coeff_at(&self, o: &Self, i: i64, j: i64) -> Result<R::Elem> {
        let r = &self.ring;
        if self.is_exact_zero() || o.is_exact_zero() {
            return Ok(r.zero());
        }
        let t_prec = padd(self.t_prec, o.t_val()).min(padd(o.t_prec, self.t_val()));
        if j >= t_prec {
            return Err(Error::CoefficientOutsidePrecision { i, j });
        }
        let mut acc = r.zero();
        for (&ja, a) in &self.rows {
            let Some(b) = o.rows.get(&(j - ja)) else { continue };
            let prec = padd(a.prec, b.val()).min(padd(b.prec, a.val()));
            if i >= prec {
                return Err(Error::CoefficientOutsidePrecision { i, j });
            }
            for (ia, x) in a.iter() {
                let ib = i - ia;
                if ib >= b.start && ib < b.end() {
                    acc = r.add(&acc, &r.mul(x, &b.c[(ib - b.start) as usize]));
                }
            }
        }
        Ok(acc)
    }

    /// Leading row (least t-exponent), which must have a known nonzero coefficient.
    fn leading_row(&self) -> Result<(i64, &USeries<R::Elem>)> {
        match self.rows.iter().next() {
            None => Err(Error::ZeroElement),
            Some((&j, r)) if r.c.is_empty() => {
                Err(Error::PrecisionTooLow(format!("leading coefficient series at t^{j} is unknown")))
            }
            Some((&j, r)) => Ok((j, r)),
        }
    }

    pub fn outer_valuation(&self) -> Result<i64> {
        Ok(self.leading_row()?.0)
    }

    pub fn bar_valuation(&self) -> Result<i64> {
        Ok(self.leading_row()?.1.start)
    }

    /// Leading coefficient (of u^bar t^outer).
    pub fn leading_coeff(&self) -> Result<R::Elem> {
        Ok(self.leading_row()?.1.c[0].clone())
    }

    pub fn invert(&self, prec: Precision) -> Result<Self> {
        let r = &self.ring;
        let (j0, lead) = match self.leading_row() {
            Ok(x) => x,
            Err(Error::ZeroElement) => return Err(Error::ZeroDivisor),
            Err(e) => return Err(e),
        };
        let g0 = us_inv(r, lead, prec.u)?;
        let single = self.rows.len() == 1 && self.t_prec >= INF;
        if single {
            let mut rows = BTreeMap::new();
            rows.insert(-j0, g0);
            return Ok(Series2 { ring: r.clone(), rows, t_prec: INF });
        }
        let len = if self.t_prec >= INF { prec.t } else { self.t_prec - j0 };
        let neg_g0 = us_neg(r, &g0);
        let mut out: Vec<USeries<R::Elem>> = Vec::with_capacity(len.max(0) as usize);
        for k in 0..len {
            if k == 0 {
                out.push(g0.clone());
                continue;
            }
            let mut acc: USeries<R::Elem> = USeries::exact_zero();
            for (&j, fr) in self.rows.range(j0 + 1..=j0 + k) {
                let i = j - j0;
                acc = us_add(r, &acc, &us_mul(r, fr, &out[(k - i) as usize]));
            }
            out.push(us_mul(r, &neg_g0, &acc));
        }
        let rows = out.into_iter().enumerate().map(|(k, s)| (k as i64 - j0, s)).collect();
        Ok(Series2 { ring: r.clone(), rows, t_prec: -j0 + len }.normalize())
    }

    pub fn div(&self, o: &Self, prec: Precision) -> Result<Self> {
        Ok(self.mul(&o.invert(prec)?))
    }

    pub fn pow(&self, e: i64, prec: Precision) -> Result<Self> {
        let base = if e < 0 { self.invert(prec)? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = Self::one(&self.ring);
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&b);
            }
            e >>= 1;
            if e > 0 {
                b = b.mul(&b);
            }
        }
        Ok(acc)
    }

    pub fn deriv_u(&self) -> Self {
        let r = &self.ring;
        let rows = self
            .rows
            .iter()
            .map(|(&j, a)| {
                let c = a.iter().map(|(i, x)| r.mul(&r.from_i64(i), x)).collect();
                (j, us_norm(r, USeries { start: a.start - 1, c, prec: padd(a.prec, -1) }))
            })
            .collect();
        Series2 { ring: r.clone(), rows, t_prec: self.t_prec }.normalize()
    }

    pub fn deriv_t(&self) -> Self {
        let r = &self.ring;
        let rows = self
            .rows
            .iter()
            .map(|(&j, a)| (j - 1, us_scale(r, a, &r.from_i64(j))))
            .collect();
        Series2 { ring: r.clone(), rows, t_prec: padd(self.t_prec, -1) }.normalize()
    }

    /// Drops everything at t-exponent >= n.
    pub fn truncate_t(&self, n: i64) -> Self {
        let mut s = self.clone();
        s.t_prec = s.t_prec.min(n);
        s.normalize()
    }

    /// Caps the absolute u-precision of every row at `n`.
    pub fn truncate_u(&self, n: i64) -> Self {
        let r = &self.ring;
        let rows = self
            .rows
            .iter()
            .map(|(&j, a)| {
                let mut a = a.clone();
                a.prec = a.prec.min(n);
                (j, us_norm(r, a))
            })
            .collect();
        Series2 { ring: r.clone(), rows, t_prec: self.t_prec }.normalize()
    }

    /// True when every known coefficient of `self - o` vanishes.
    pub fn agrees_with(&self, o: &Self) -> bool {
        self.sub(o).is_zero()
    }

    /// Applies a ring map coefficientwise.
    pub fn map<S: Ring>(&self, ring: &S, f: impl Fn(&R::Elem) -> S::Elem) -> Series2<S> {
        let rows = self
            .rows
            .iter()
            .map(|(&j, a)| {
                (j, us_norm(ring, USeries { start: a.start, c: a.c.iter().map(&f).collect(), prec: a.prec }))
            })
            .collect();
        Series2 { ring: ring.clone(), rows, t_prec: self.t_prec }.normalize()
    }

    /// Result precision summary (u-precision per inexact row).
    pub fn precision_summary(&self) -> (i64, Vec<(i64, i64)>) {
        (self.t_prec, self.rows.iter().filter(|(_, r)| !r.is_exact()).map(|(&j, r)| (j, r.prec)).collect())
    }
}

/// Decomposition `zeta^zeta_exp * u^u_exp * t^t_exp * principal`.
#[derive(Clone, Debug, PartialEq)]
pub struct UnitDecomposition {
    pub zeta_exp: u32,
    pub u_exp: i64,
    pub t_exp: i64,
    pub principal: Laurent2,
}

impl Laurent2 {
    pub fn field(&self) -> &FieldSpec {
        &self.ring
    }

    pub fn unit_decompose(&self) -> Result<UnitDecomposition> {
        let k = &self.ring;
        let j0 = self.outer_valuation()?;
        let i0 = self.bar_valuation()?;
        let c = self.leading_coeff()?;
        let ci = k.inv(c).unwrap();
        let principal = self.scale(&ci).shift(-i0, -j0);
        Ok(UnitDecomposition { zeta_exp: k.log(c), u_exp: i0, t_exp: j0, principal })
    }

    /// Coefficientwise Teichmuller lift to precision s.
    pub fn lift_padic(&self, s: u32) -> PadicLaurent2 {
        let zq = Zq::new(&self.ring, s);
        let tab = self.ring.teich_table(s);
        let z = zq.zero();
        self.map(&zq, |&a| if a == 0 { z.clone() } else { tab[self.ring.log(a) as usize].clone() })
    }

    /// The residue `t^-v * f mod t` as a row.
    pub fn residue_row(&self) -> Result<USeries<Fq>> {
        Ok(self.leading_row()?.1.clone())
    }
}

impl UnitDecomposition {
    pub fn recompose(&self) -> Laurent2 {
        let k = self.principal.field();
        self.principal.scale(&k.zeta_pow(self.zeta_exp as i64)).shift(self.u_exp, self.t_exp)
    }
}

impl PadicLaurent2 {
    /// Reduction modulo p.
    pub fn reduce(&self) -> Laurent2 {
        let zq = self.ring.clone();
        self.map(zq.field(), |a| zq.reduce(a))
    }
}

/// Coefficient ring of series, carrying the working precision for inversion.
#[derive(Clone, Debug, PartialEq)]
pub struct SeriesRing<R: Ring> {
    pub base: R,
    pub prec: Precision,
}

impl<R: Ring> Ring for SeriesRing<R> {
    type Elem = Series2<R>;
    fn zero(&self) -> Series2<R> {
        Series2::zero(&self.base)
    }
    fn one(&self) -> Series2<R> {
        Series2::one(&self.base)
    }
    fn add(&self, a: &Series2<R>, b: &Series2<R>) -> Series2<R> {
        a.add(b)
    }
    fn neg(&self, a: &Series2<R>) -> Series2<R> {
        a.neg()
    }
    fn sub(&self, a: &Series2<R>, b: &Series2<R>) -> Series2<R> {
        a.sub(b)
    }
    fn mul(&self, a: &Series2<R>, b: &Series2<R>) -> Series2<R> {
        a.mul(b)
    }
    fn is_zero(&self, a: &Series2<R>) -> bool {
        a.is_exact_zero()
    }
    fn inv(&self, a: &Series2<R>) -> Option<Series2<R>> {
        a.invert(self.prec).ok()
    }
    fn from_bigint(&self, v: &BigInt) -> Series2<R> {
        Series2::constant(&self.base, self.base.from_bigint(v))
    }
    fn char_p(&self) -> Option<u32> {
        self.base.char_p()
    }
}

fn fmt_mono(coef: String, i: i64, j: i64) -> String {
    let mut parts = Vec::new();
    let unit = coef == "1";
    if !unit || (i == 0 && j == 0) {
        parts.push(if coef.contains(['+', ' ']) { format!("({coef})") } else { coef });
    }
    match i {
        0 => {}
        1 => parts.push("u".into()),
        _ => parts.push(format!("u^{i}")),
    }
    match j {
        0 => {}
        1 => parts.push("t".into()),
        _ => parts.push(format!("t^{j}")),
    }
    parts.join("*")
}

fn fmt_series<R: Ring>(s: &Series2<R>, coef: impl Fn(&R::Elem) -> String) -> String {
    let mut parts = Vec::new();
    for (&j, r) in &s.rows {
        for (i, x) in r.iter() {
            if !s.ring.is_zero(x) {
                parts.push(fmt_mono(coef(x), i, j));
            }
        }
        if !r.is_exact() {
            parts.push(match j {
                0 => format!("O_u({})", r.prec),
                1 => format!("O_u({})*t", r.prec),
                _ => format!("O_u({})*t^{j}", r.prec),
            });
        }
    }
    if s.t_prec < INF {
        parts.push(format!("O_t({})", s.t_prec));
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

impl fmt::Display for Laurent2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", fmt_series(self, |&a| self.ring.fmt_elem(a)))
    }
}

impl fmt::Display for PadicLaurent2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.ring.field().n();
        write!(
            f,
            "{}",
            fmt_series(self, |a| {
                if n == 1 {
                    a[0].to_string()
                } else {
                    format!("[{}]", a.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
                }
            })
        )
    }
}
