//! Exact rational functions over F_q: univariate in u, and bivariate in (u, t).

use crate::error::{Error, Result};
use crate::ff::{FieldSpec, Fq};
use crate::poly::Poly;
use crate::series::{Laurent2, Precision};
use std::collections::BTreeMap;
use std::fmt;

/// `num / den` in F_q(u), reduced, `den` monic.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatU {
    pub num: Poly,
    pub den: Poly,
}

impl fmt::Debug for RatU {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl RatU {
    pub fn new(num: Poly, den: Poly) -> Result<RatU> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let k = num.field.clone();
        if num.is_zero() {
            return Ok(RatU { num, den: Poly::one(&k) });
        }
        let g = num.gcd(&den);
        let (n, d) = (num.div_exact(&g), den.div_exact(&g));
        let c = k.inv(d.lead()).unwrap();
        Ok(RatU { num: n.scale(c), den: d.scale(c) })
    }
    pub fn from_poly(p: Poly) -> RatU {
        let k = p.field.clone();
        RatU { num: p, den: Poly::one(&k) }
    }
    pub fn zero(k: &FieldSpec) -> RatU {
        Self::from_poly(Poly::zero(k))
    }
    pub fn one(k: &FieldSpec) -> RatU {
        Self::from_poly(Poly::one(k))
    }
    pub fn constant(k: &FieldSpec, a: Fq) -> RatU {
        Self::from_poly(Poly::constant(k, a))
    }
    pub fn field(&self) -> &FieldSpec {
        &self.num.field
    }
    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    pub fn is_poly(&self) -> bool {
        self.den.deg() == 0
    }
    pub fn add(&self, o: &RatU) -> RatU {
        Self::new(self.num.mul(&o.den).add(&o.num.mul(&self.den)), self.den.mul(&o.den)).unwrap()
    }
    pub fn neg(&self) -> RatU {
        RatU { num: self.num.neg(), den: self.den.clone() }
    }
    pub fn sub(&self, o: &RatU) -> RatU {
        self.add(&o.neg())
    }
    pub fn mul(&self, o: &RatU) -> RatU {
        Self::new(self.num.mul(&o.num), self.den.mul(&o.den)).unwrap()
    }
    pub fn div(&self, o: &RatU) -> Result<RatU> {
        Self::new(self.num.mul(&o.den), self.den.mul(&o.num))
    }
    pub fn scale(&self, a: Fq) -> RatU {
        Self::new(self.num.scale(a), self.den.clone()).unwrap()
    }
    pub fn pow(&self, e: u64) -> RatU {
        RatU { num: self.num.pow(e), den: self.den.pow(e) }
    }

    /// `self = sum_{r<p} u^r g_r^p`; returns `[g_0, ..., g_{p-1}]`.
    pub fn p_decompose(&self) -> Vec<RatU> {
        let k = self.field().clone();
        let p = k.p() as usize;
        let c = self.num.mul(&self.den.pow(p as u64 - 1));
        let root = |a: Fq| k.pow(a, (k.q() / k.p()) as i64).unwrap();
        (0..p)
            .map(|r| {
                let mut g = vec![];
                let mut idx = r;
                while idx < c.c.len() {
                    g.push(root(c.c[idx]));
                    idx += p;
                }
                RatU::new(Poly::new(&k, g), self.den.clone()).unwrap()
            })
            .collect()
    }

    /// Order of vanishing at the place `pi` (irreducible).
    pub fn ord_at(&self, pi: &Poly) -> i64 {
        let ord = |mut x: Poly| {
            let mut n = 0;
            if x.is_zero() {
                return i64::MAX / 4;
            }
            loop {
                let (q, r) = x.divrem(pi);
                if !r.is_zero() {
                    return n;
                }
                x = q;
                n += 1;
            }
        };
        ord(self.num.clone()) - ord(self.den.clone())
    }

    /// `-deg`: order at infinity.
    pub fn ord_at_infinity(&self) -> i64 {
        self.den.deg() - self.num.deg()
    }
}

impl fmt::Display for RatU {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_poly() {
            write!(f, "{}", self.num.to_string_in("u"))
        } else {
            write!(f, "({})/({})", self.num.to_string_in("u"), self.den.to_string_in("u"))
        }
    }
}

/// Polynomial in (u, t): coefficient of t^j is `c[j]` in F_q[u].
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly2 {
    pub field: FieldSpec,
    pub c: Vec<Poly>,
}

impl fmt::Debug for Poly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Poly2 {
    pub fn new(field: &FieldSpec, mut c: Vec<Poly>) -> Poly2 {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        Poly2 { field: field.clone(), c }
    }
    pub fn zero(k: &FieldSpec) -> Poly2 {
        Self::new(k, vec![])
    }
    pub fn one(k: &FieldSpec) -> Poly2 {
        Self::from_u(Poly::one(k))
    }
    pub fn constant(k: &FieldSpec, a: Fq) -> Poly2 {
        Self::from_u(Poly::constant(k, a))
    }
    pub fn from_u(p: Poly) -> Poly2 {
        let k = p.field.clone();
        Self::new(&k, vec![p])
    }
    /// `a u^i t^j`.
    pub fn monomial(k: &FieldSpec, a: Fq, i: usize, j: usize) -> Poly2 {
        let mut c = vec![Poly::zero(k); j + 1];
        c[j] = Poly::monomial(k, a, i);
        Self::new(k, c)
    }
    pub fn u(k: &FieldSpec) -> Poly2 {
        Self::monomial(k, 1, 1, 0)
    }
    pub fn t(k: &FieldSpec) -> Poly2 {
        Self::monomial(k, 1, 0, 1)
    }
    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }
    /// Degree in t (-1 for zero).
    pub fn deg_t(&self) -> i64 {
        self.c.len() as i64 - 1
    }
    pub fn lead(&self) -> &Poly {
        self.c.last().unwrap()
    }
    pub fn coeff_t(&self, j: usize) -> Poly {
        self.c.get(j).cloned().unwrap_or_else(|| Poly::zero(&self.field))
    }
    /// `(i, j, a)` for every nonzero `a u^i t^j`, sorted by (j, i).
    pub fn terms(&self) -> Vec<(usize, usize, Fq)> {
        let mut out = vec![];
        for (j, p) in self.c.iter().enumerate() {
            for (i, &a) in p.c.iter().enumerate() {
                if a != 0 {
                    out.push((i, j, a));
                }
            }
        }
        out
    }
    pub fn from_terms(k: &FieldSpec, terms: impl IntoIterator<Item = (usize, usize, Fq)>) -> Poly2 {
        let mut s = Self::zero(k);
        for (i, j, a) in terms {
            s = s.add(&Self::monomial(k, a, i, j));
        }
        s
    }
    /// Value at u = t = 0.
    pub fn at_origin(&self) -> Fq {
        self.c.first().map(|p| p.coeff(0)).unwrap_or(0)
    }
    pub fn add(&self, o: &Poly2) -> Poly2 {
        let n = self.c.len().max(o.c.len());
        Self::new(&self.field, (0..n).map(|j| self.coeff_t(j).add(&o.coeff_t(j))).collect())
    }
    pub fn neg(&self) -> Poly2 {
        Self::new(&self.field, self.c.iter().map(|p| p.neg()).collect())
    }
    pub fn sub(&self, o: &Poly2) -> Poly2 {
        self.add(&o.neg())
    }
    pub fn scale_u(&self, a: &Poly) -> Poly2 {
        Self::new(&self.field, self.c.iter().map(|p| p.mul(a)).collect())
    }
    pub fn shift_t(&self, k: usize) -> Poly2 {
        let mut c = vec![Poly::zero(&self.field); k];
        c.extend(self.c.iter().cloned());
        Self::new(&self.field, c)
    }
    pub fn mul(&self, o: &Poly2) -> Poly2 {
        if self.is_zero() || o.is_zero() {
            return Self::zero(&self.field);
        }
        let mut c = vec![Poly::zero(&self.field); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            for (j, b) in o.c.iter().enumerate() {
                c[i + j] = c[i + j].add(&a.mul(b));
            }
        }
        Self::new(&self.field, c)
    }
    pub fn pow(&self, mut e: u64) -> Poly2 {
        let mut acc = Self::one(&self.field);
        let mut b = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&b);
            }
            e >>= 1;
            if e > 0 {
                b = b.mul(&b);
            }
        }
        acc
    }
    /// gcd of the u-coefficients, monic.
    pub fn content(&self) -> Poly {
        let mut g = Poly::zero(&self.field);
        for p in &self.c {
            g = g.gcd(p);
        }
        g
    }
    fn div_u_exact(&self, d: &Poly) -> Poly2 {
        Self::new(&self.field, self.c.iter().map(|p| p.div_exact(d)).collect())
    }
    fn primitive(&self) -> Poly2 {
        if self.is_zero() {
            return self.clone();
        }
        self.div_u_exact(&self.content())
    }
    fn pseudo_rem(&self, d: &Poly2) -> Poly2 {
        let lc = d.lead().clone();
        let mut r = self.clone();
        while !r.is_zero() && r.deg_t() >= d.deg_t() {
            let s = (r.deg_t() - d.deg_t()) as usize;
            let lr = r.lead().clone();
            r = r.scale_u(&lc).sub(&d.scale_u(&lr).shift_t(s));
        }
        r
    }
    /// Scales so the leading coefficient (highest t, then highest u) is 1.
    pub fn normalized(&self) -> Poly2 {
        if self.is_zero() {
            return self.clone();
        }
        let c = self.field.inv(self.lead().lead()).unwrap();
        self.scale_u(&Poly::constant(&self.field, c))
    }
    pub fn gcd(&self, o: &Poly2) -> Poly2 {
        if self.is_zero() {
            return o.normalized();
        }
        if o.is_zero() {
            return self.normalized();
        }
        let g = self.content().gcd(&o.content());
        let (mut a, mut b) = (self.primitive(), o.primitive());
        if a.deg_t() < b.deg_t() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.pseudo_rem(&b).primitive();
            a = b;
            b = r;
        }
        a.scale_u(&g).normalized()
    }
    /// Quotient when `d` divides `self` exactly.
    pub fn div_exact(&self, d: &Poly2) -> Option<Poly2> {
        if d.is_zero() {
            return None;
        }
        let mut r = self.clone();
        let mut q = Self::zero(&self.field);
        while !r.is_zero() {
            if r.deg_t() < d.deg_t() {
                return None;
            }
            let (qc, rem) = r.lead().divrem(d.lead());
            if !rem.is_zero() {
                return None;
            }
            let s = (r.deg_t() - d.deg_t()) as usize;
            let term = Poly2::from_u(qc).shift_t(s);
            r = r.sub(&d.mul(&term));
            q = q.add(&term);
        }
        Some(q)
    }
    /// `self(a, b)`.
    pub fn substitute(&self, a: &Poly2, b: &Poly2) -> Poly2 {
        let mut acc = Self::zero(&self.field);
        for pj in self.c.iter().rev() {
            let mut cj = Self::zero(&self.field);
            for &x in pj.c.iter().rev() {
                cj = cj.mul(a).add(&Self::constant(&self.field, x));
            }
            acc = acc.mul(b).add(&cj);
        }
        acc
    }
    /// Exchanges u and t.
    pub fn swap(&self) -> Poly2 {
        Self::from_terms(&self.field, self.terms().into_iter().map(|(i, j, a)| (j, i, a)))
    }
    /// As an exact series with `u` inner and `t` outer.
    pub fn to_laurent(&self) -> Laurent2 {
        Laurent2::from_terms(&self.field, self.terms().into_iter().map(|(i, j, a)| (i as i64, j as i64, a)))
    }
    /// Lowest t-exponent with a nonzero coefficient.
    pub fn t_ord(&self) -> usize {
        self.c.iter().position(|p| !p.is_zero()).unwrap_or(0)
    }
}

fn fmt_monomial(k: &FieldSpec, a: Fq, i: usize, j: usize) -> String {
    let mut parts = vec![];
    if a != 1 || (i == 0 && j == 0) {
        parts.push(k.fmt_elem(a));
    }
    for (v, e) in [("u", i), ("t", j)] {
        match e {
            0 => {}
            1 => parts.push(v.to_string()),
            _ => parts.push(format!("{v}^{e}")),
        }
    }
    parts.join("*")
}

impl fmt::Display for Poly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms().into_iter().map(|(i, j, a)| fmt_monomial(&self.field, a, i, j)).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// `num / den` in F_q(u, t), reduced, `den` normalized.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    pub num: Poly2,
    pub den: Poly2,
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl RatFunc {
    pub fn new(num: Poly2, den: Poly2) -> Result<RatFunc> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let k = num.field.clone();
        if num.is_zero() {
            return Ok(RatFunc { num, den: Poly2::one(&k) });
        }
        let g = num.gcd(&den);
        let n = num.div_exact(&g).expect("gcd divides");
        let d = den.div_exact(&g).expect("gcd divides");
        let c = k.inv(d.lead().lead()).unwrap();
        let cp = Poly::constant(&k, c);
        Ok(RatFunc { num: n.scale_u(&cp), den: d.scale_u(&cp) })
    }
    pub fn from_poly(p: Poly2) -> RatFunc {
        let k = p.field.clone();
        RatFunc { num: p, den: Poly2::one(&k) }
    }
    pub fn constant(k: &FieldSpec, a: Fq) -> RatFunc {
        Self::from_poly(Poly2::constant(k, a))
    }
    pub fn u(k: &FieldSpec) -> RatFunc {
        Self::from_poly(Poly2::u(k))
    }
    pub fn t(k: &FieldSpec) -> RatFunc {
        Self::from_poly(Poly2::t(k))
    }
    pub fn from_ratu(r: &RatU) -> RatFunc {
        Self::new(Poly2::from_u(r.num.clone()), Poly2::from_u(r.den.clone())).unwrap()
    }
    pub fn field(&self) -> &FieldSpec {
        &self.num.field
    }
    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    pub fn add(&self, o: &RatFunc) -> RatFunc {
        Self::new(self.num.mul(&o.den).add(&o.num.mul(&self.den)), self.den.mul(&o.den)).unwrap()
    }
    pub fn neg(&self) -> RatFunc {
        RatFunc { num: self.num.neg(), den: self.den.clone() }
    }
    pub fn sub(&self, o: &RatFunc) -> RatFunc {
        self.add(&o.neg())
    }
    pub fn mul(&self, o: &RatFunc) -> RatFunc {
        Self::new(self.num.mul(&o.num), self.den.mul(&o.den)).unwrap()
    }
    pub fn div(&self, o: &RatFunc) -> Result<RatFunc> {
        Self::new(self.num.mul(&o.den), self.den.mul(&o.num))
    }
    pub fn pow(&self, e: i64) -> Result<RatFunc> {
        if e >= 0 {
            Ok(RatFunc { num: self.num.pow(e as u64), den: self.den.pow(e as u64) })
        } else {
            Self::new(self.den.pow(e.unsigned_abs()), self.num.pow(e.unsigned_abs()))
        }
    }
    /// `self * t^k`.
    pub fn shift_t(&self, k: i64) -> RatFunc {
        if k >= 0 {
            Self::new(self.num.shift_t(k as usize), self.den.clone()).unwrap()
        } else {
            Self::new(self.num.clone(), self.den.shift_t((-k) as usize)).unwrap()
        }
    }

    /// t-adic expansion with exact F_q(u) coefficients: `(v, [f_v, ..., f_{upto-1}])`.
    pub fn t_coeffs(&self, upto: i64) -> Result<(i64, Vec<RatU>)> {
        let k = self.field().clone();
        if self.is_zero() {
            return Ok((upto, vec![]));
        }
        let (vn, vd) = (self.num.t_ord(), self.den.t_ord());
        let v = vn as i64 - vd as i64;
        let n = (upto - v).max(0) as usize;
        let d0 = RatU::from_poly(self.den.coeff_t(vd));
        let d0i = RatU::one(&k).div(&d0)?;
        // 1/den * t^vd as a t-series
        let mut inv: Vec<RatU> = Vec::with_capacity(n);
        for m in 0..n {
            if m == 0 {
                inv.push(d0i.clone());
                continue;
            }
            let mut acc = RatU::zero(&k);
            for i in 1..=m {
                let di = self.den.coeff_t(vd + i);
                if !di.is_zero() {
                    acc = acc.add(&RatU::from_poly(di).mul(&inv[m - i]));
                }
            }
            inv.push(acc.neg().mul(&d0i));
        }
        let mut out = Vec::with_capacity(n);
        for m in 0..n {
            let mut acc = RatU::zero(&k);
            for i in 0..=m {
                let ni = self.num.coeff_t(vn + i);
                if !ni.is_zero() {
                    acc = acc.add(&RatU::from_poly(ni).mul(&inv[m - i]));
                }
            }
            out.push(acc);
        }
        Ok((v, out))
    }

    /// Expansion at u = t = 0 with u inner and t outer.
    pub fn expand_origin(&self, prec: Precision) -> Result<Laurent2> {
        self.num.to_laurent().div(&self.den.to_laurent(), prec)
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let one = Poly2::one(&self.num.field);
        if self.den == one {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

/// Exponents of the curve equations dividing `f`, and the remaining cofactor `(num, den)`.
pub fn split_factors(f: &RatFunc, eqs: &[Poly2]) -> (Vec<i64>, Poly2, Poly2) {
    let mut exps = vec![0i64; eqs.len()];
    let strip = |mut x: Poly2, sign: i64, exps: &mut Vec<i64>| {
        for (n, e) in eqs.iter().enumerate() {
            while let Some(q) = x.div_exact(e) {
                x = q;
                exps[n] += sign;
            }
        }
        x
    };
    let num = strip(f.num.clone(), 1, &mut exps);
    let den = strip(f.den.clone(), -1, &mut exps);
    (exps, num, den)
}

/// Sparse map view used by printers: (i, j) -> a.
pub fn poly2_map(p: &Poly2) -> BTreeMap<(usize, usize), Fq> {
    p.terms().into_iter().map(|(i, j, a)| ((i, j), a)).collect()
}
