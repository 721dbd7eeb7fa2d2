//! Dense univariate polynomials over a finite field, with factorization.

use crate::ff::{FieldSpec, Fq};
use rand::Rng as _;
use rand_chacha::ChaCha8Rng;
use std::fmt;

/// Coefficients constant-first, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    pub field: FieldSpec,
    pub c: Vec<Fq>,
}

impl std::hash::Hash for FieldSpec {
    fn hash<H: std::hash::Hasher>(&self, h: &mut H) {
        self.p().hash(h);
        self.modulus().hash(h);
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly{:?}", self.c)
    }
}

impl Poly {
    pub fn new(field: &FieldSpec, mut c: Vec<Fq>) -> Poly {
        while c.last() == Some(&0) {
            c.pop();
        }
        Poly { field: field.clone(), c }
    }
    pub fn zero(field: &FieldSpec) -> Poly {
        Poly::new(field, vec![])
    }
    pub fn constant(field: &FieldSpec, a: Fq) -> Poly {
        Poly::new(field, vec![a])
    }
    pub fn one(field: &FieldSpec) -> Poly {
        Poly::constant(field, 1)
    }
    pub fn x(field: &FieldSpec) -> Poly {
        Poly::new(field, vec![0, 1])
    }
    pub fn monomial(field: &FieldSpec, a: Fq, k: usize) -> Poly {
        let mut c = vec![0; k + 1];
        c[k] = a;
        Poly::new(field, c)
    }
    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }
    pub fn is_one(&self) -> bool {
        self.c == [1]
    }
    /// Degree, -1 for zero.
    pub fn deg(&self) -> i64 {
        self.c.len() as i64 - 1
    }
    pub fn lead(&self) -> Fq {
        *self.c.last().unwrap_or(&0)
    }
    pub fn coeff(&self, k: usize) -> Fq {
        *self.c.get(k).unwrap_or(&0)
    }
    /// Lowest k with nonzero coefficient.
    pub fn ord(&self) -> Option<usize> {
        self.c.iter().position(|&a| a != 0)
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let k = &self.field;
        let n = self.c.len().max(o.c.len());
        Poly::new(k, (0..n).map(|i| k.add(self.coeff(i), o.coeff(i))).collect())
    }
    pub fn sub(&self, o: &Poly) -> Poly {
        let k = &self.field;
        let n = self.c.len().max(o.c.len());
        Poly::new(k, (0..n).map(|i| k.sub(self.coeff(i), o.coeff(i))).collect())
    }
    pub fn neg(&self) -> Poly {
        Poly::new(&self.field, self.c.iter().map(|&a| self.field.neg(a)).collect())
    }
    pub fn scale(&self, a: Fq) -> Poly {
        Poly::new(&self.field, self.c.iter().map(|&x| self.field.mul(x, a)).collect())
    }
    pub fn shift(&self, k: usize) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = vec![0; k];
        c.extend_from_slice(&self.c);
        Poly::new(&self.field, c)
    }
    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero(&self.field);
        }
        let k = &self.field;
        let mut r = vec![0; self.c.len() + o.c.len() - 1];
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.c.iter().enumerate() {
                r[i + j] = k.add(r[i + j], k.mul(a, b));
            }
        }
        Poly::new(k, r)
    }
    pub fn pow(&self, mut e: u64) -> Poly {
        let mut acc = Poly::one(&self.field);
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

    pub fn divrem(&self, d: &Poly) -> (Poly, Poly) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let k = &self.field;
        let mut r = self.c.clone();
        let dl = d.c.len();
        if r.len() < dl {
            return (Poly::zero(k), self.clone());
        }
        let li = k.inv(d.lead()).unwrap();
        let mut qc = vec![0; r.len() - dl + 1];
        for i in (0..qc.len()).rev() {
            let c = k.mul(r[i + dl - 1], li);
            qc[i] = c;
            if c != 0 {
                for (j, &b) in d.c.iter().enumerate() {
                    r[i + j] = k.sub(r[i + j], k.mul(c, b));
                }
            }
        }
        r.truncate(dl - 1);
        (Poly::new(k, qc), Poly::new(k, r))
    }
    pub fn rem(&self, d: &Poly) -> Poly {
        self.divrem(d).1
    }
    /// Exact quotient; panics if the remainder is nonzero.
    pub fn div_exact(&self, d: &Poly) -> Poly {
        let (q, r) = self.divrem(d);
        assert!(r.is_zero(), "inexact polynomial division");
        q
    }
    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(self.field.inv(self.lead()).unwrap())
    }
    pub fn gcd(&self, o: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }
    /// Returns (g, s, t) with s*self + t*o = g monic.
    pub fn xgcd(&self, o: &Poly) -> (Poly, Poly, Poly) {
        let k = &self.field;
        let (mut r0, mut r1) = (self.clone(), o.clone());
        let (mut s0, mut s1) = (Poly::one(k), Poly::zero(k));
        let (mut t0, mut t1) = (Poly::zero(k), Poly::one(k));
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1);
            r0 = std::mem::replace(&mut r1, r);
            let s = s0.sub(&q.mul(&s1));
            s0 = std::mem::replace(&mut s1, s);
            let t = t0.sub(&q.mul(&t1));
            t0 = std::mem::replace(&mut t1, t);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let li = k.inv(r0.lead()).unwrap();
        (r0.scale(li), s0.scale(li), t0.scale(li))
    }
    pub fn mulmod(&self, o: &Poly, m: &Poly) -> Poly {
        self.mul(o).rem(m)
    }
    pub fn powmod(&self, mut e: u128, m: &Poly) -> Poly {
        let mut acc = Poly::one(&self.field).rem(m);
        let mut b = self.rem(m);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mulmod(&b, m);
            }
            e >>= 1;
            if e > 0 {
                b = b.mulmod(&b, m);
            }
        }
        acc
    }
    pub fn derivative(&self) -> Poly {
        let k = &self.field;
        Poly::new(
            k,
            self.c.iter().enumerate().skip(1).map(|(i, &a)| k.mul(k.from_int(i as i64), a)).collect(),
        )
    }
    pub fn eval(&self, x: Fq) -> Fq {
        let k = &self.field;
        self.c.iter().rev().fold(0, |acc, &a| k.add(k.mul(acc, x), a))
    }
    /// Substitutes another polynomial.
    pub fn compose(&self, g: &Poly) -> Poly {
        let mut acc = Poly::zero(&self.field);
        for &a in self.c.iter().rev() {
            acc = acc.mul(g).add(&Poly::constant(&self.field, a));
        }
        acc
    }

    /// p-th root of a polynomial whose derivative vanishes.
    fn pth_root(&self) -> Poly {
        let k = &self.field;
        let p = k.p() as usize;
        let e = (k.q() / k.p()) as i64;
        let c = (0..=self.c.len().saturating_sub(1) / p).map(|i| k.pow(self.coeff(i * p), e).unwrap()).collect();
        Poly::new(k, c)
    }

    /// Ben-Or irreducibility test.
    pub fn is_irreducible(&self) -> bool {
        let d = self.deg();
        if d < 1 {
            return false;
        }
        if d == 1 {
            return true;
        }
        let f = self.monic();
        let q = self.field.q() as u128;
        let x = Poly::x(&self.field);
        let mut xp = x.clone();
        for _ in 0..d / 2 {
            xp = xp.powmod(q, &f);
            if !f.gcd(&xp.sub(&x)).is_one() {
                return false;
            }
        }
        true
    }

    /// Monic irreducible factors with multiplicities, sorted canonically.
    pub fn factor(&self, rng: &mut ChaCha8Rng) -> Vec<(Poly, u32)> {
        assert!(!self.is_zero());
        let mut out = Vec::new();
        for (g, m) in self.monic().squarefree() {
            for (d, h) in g.ddf() {
                for f in h.edf(d, rng) {
                    out.push((f, m));
                }
            }
        }
        out.sort_by(|a, b| a.0.cmp_key().cmp(&b.0.cmp_key()));
        out
    }

    /// Ordering key: degree, then coefficients from the top.
    pub fn cmp_key(&self) -> (i64, Vec<Fq>) {
        (self.deg(), self.c.iter().rev().copied().collect())
    }

    fn squarefree(&self) -> Vec<(Poly, u32)> {
        let k = &self.field;
        let mut out = Vec::new();
        let f = self.monic();
        if f.deg() < 1 {
            return out;
        }
        let d = f.derivative();
        if d.is_zero() {
            for (g, m) in f.pth_root().squarefree() {
                out.push((g, m * k.p()));
            }
            return out;
        }
        let mut c = f.gcd(&d);
        let mut w = f.div_exact(&c);
        let mut i = 1;
        while !w.is_one() {
            let y = w.gcd(&c);
            let z = w.div_exact(&y);
            if z.deg() > 0 {
                out.push((z, i));
            }
            i += 1;
            w = y;
            c = c.div_exact(&w);
        }
        if c.deg() > 0 {
            for (g, m) in c.pth_root().squarefree() {
                out.push((g, m * k.p()));
            }
        }
        out
    }

    fn ddf(&self) -> Vec<(usize, Poly)> {
        let q = self.field.q() as u128;
        let x = Poly::x(&self.field);
        let mut out = Vec::new();
        let mut f = self.clone();
        let mut xp = x.clone();
        let mut d = 1;
        while f.deg() >= 2 * d as i64 {
            xp = xp.powmod(q, &f);
            let g = f.gcd(&xp.sub(&x));
            if !g.is_one() {
                f = f.div_exact(&g);
                xp = xp.rem(&f);
                out.push((d, g));
            }
            d += 1;
        }
        if f.deg() > 0 {
            out.push((f.deg() as usize, f));
        }
        out
    }

    fn edf(&self, d: usize, rng: &mut ChaCha8Rng) -> Vec<Poly> {
        let n = self.deg() as usize;
        if n == d {
            return vec![self.clone()];
        }
        let k = &self.field;
        let q = k.q() as u128;
        loop {
            let a = Poly::new(k, (0..n).map(|_| rng.gen_range(0..k.q())).collect());
            if a.deg() < 1 {
                continue;
            }
            let g = if k.p() == 2 {
                // Trace map a + a^2 + ... + a^(2^(nd-1)), n_total = k.n * d.
                let mut t = a.clone();
                let mut acc = a.clone();
                for _ in 1..(k.n() as usize * d) {
                    t = t.mulmod(&t, self);
                    acc = acc.add(&t);
                }
                acc
            } else {
                let e = (q.pow(d as u32) - 1) / 2;
                a.powmod(e, self).sub(&Poly::one(k))
            };
            let h = self.gcd(&g);
            if h.deg() > 0 && h.deg() < n as i64 {
                let mut out = h.edf(d, rng);
                out.extend(self.div_exact(&h).edf(d, rng));
                return out;
            }
        }
    }

    pub fn to_string_in(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let k = &self.field;
        let mut parts = Vec::new();
        for (i, &a) in self.c.iter().enumerate().rev() {
            if a == 0 {
                continue;
            }
            let coef = k.fmt_elem(a);
            let mon = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            parts.push(match (i, a) {
                (0, _) => coef,
                (_, 1) => mon,
                _ => format!("{coef}*{mon}"),
            });
        }
        parts.join(" + ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn factor_small() {
        let f2 = FieldSpec::parse("2").unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        // u^2 + u = u (u + 1)
        let f = Poly::new(&f2, vec![0, 1, 1]);
        let fac = f.factor(&mut rng);
        assert_eq!(fac, vec![(Poly::new(&f2, vec![0, 1]), 1), (Poly::new(&f2, vec![1, 1]), 1)]);
    }

    #[test]
    fn factor_recombines() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for t in ["2", "3", "2^2", "5", "3^2"] {
            let k = FieldSpec::parse(t).unwrap();
            for _ in 0..30 {
                let n = rng.gen_range(1..9);
                let mut c: Vec<Fq> = (0..n).map(|_| rng.gen_range(0..k.q())).collect();
                c.push(1);
                let f = Poly::new(&k, c);
                let fac = f.factor(&mut rng);
                let mut prod = Poly::one(&k);
                for (g, m) in &fac {
                    assert!(g.is_irreducible());
                    prod = prod.mul(&g.pow(*m as u64));
                }
                assert_eq!(prod, f);
            }
        }
    }

    #[test]
    fn xgcd_identity() {
        let k = FieldSpec::parse("3^2").unwrap();
        let a = Poly::new(&k, vec![1, 2, 0, 1]);
        let b = Poly::new(&k, vec![2, 1, 1]);
        let (g, s, t) = a.xgcd(&b);
        assert_eq!(s.mul(&a).add(&t.mul(&b)), g);
    }
}
