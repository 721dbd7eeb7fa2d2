//! Finite fields F_q = F_p[x]/(m(x)), q <= 2^16, and the truncated Witt rings W_s(F_q).
//!
//! An element of F_q is the index `sum c_k p^k` of its coefficient vector (c_0 constant term).

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::ring::{PadicRing, Ring};
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use smallvec::SmallVec;
use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

pub type Fq = u32;

pub const MAX_Q: u64 = 1 << 16;

struct Inner {
    p: u32,
    n: u32,
    q: u32,
    modulus: Vec<u32>,
    zeta: Fq,
    exp: Vec<Fq>,
    log: Vec<u32>,
    add: Option<Vec<Fq>>,
    teich: Mutex<HashMap<u32, Arc<Vec<ZqElem>>>>,
}

/// A validated finite field. Cloning is cheap.
#[derive(Clone)]
pub struct FieldSpec(Arc<Inner>);

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.0.p == other.0.p && self.0.modulus == other.0.modulus)
    }
}
impl Eq for FieldSpec {}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldSpec({})", self.to_text())
    }
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn digits_of(mut a: u32, p: u32, n: u32) -> SmallVec<[u32; 8]> {
    let mut out = SmallVec::new();
    for _ in 0..n {
        out.push(a % p);
        a /= p;
    }
    out
}

fn index_of(d: &[u32], p: u32) -> u32 {
    d.iter().rev().fold(0, |acc, &c| acc * p + c)
}

/// The r-th coefficient vector in lexicographic order with c_0 most significant, as an index.
fn lex_nth(r: u32, p: u32, n: u32) -> u32 {
    let mut d = digits_of(r, p, n);
    d.reverse();
    index_of(&d, p)
}

fn raw_mul(a: &[u32], b: &[u32], modulus: &[u32], p: u32) -> Vec<u32> {
    let n = modulus.len() - 1;
    let mut r = vec![0u64; 2 * n.max(1)];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            r[i + j] = (r[i + j] + x as u64 * y as u64) % p as u64;
        }
    }
    for k in (n..r.len()).rev() {
        let c = r[k];
        if c == 0 {
            continue;
        }
        r[k] = 0;
        for j in 0..n {
            let sub = c * modulus[j] as u64 % p as u64;
            r[k - n + j] = (r[k - n + j] + p as u64 - sub) % p as u64;
        }
    }
    r.truncate(n);
    r.into_iter().map(|x| x as u32).collect()
}

/// Builds F_q. Without a modulus the lexicographically least monic irreducible is used.
pub fn make_field(p: u64, n: u32, modulus: Option<Vec<u32>>) -> Result<FieldSpec> {
    if !is_prime(p) {
        return Err(Error::CompositeP(p));
    }
    if n == 0 {
        return Err(Error::BadFieldSpec("degree must be positive".into()));
    }
    let q = (p as u128).checked_pow(n).unwrap_or(u128::MAX);
    if q > MAX_Q as u128 {
        return Err(Error::FieldTooLarge(q.min(u64::MAX as u128) as u64));
    }
    let p = p as u32;
    let q = q as u32;
    let modulus = match modulus {
        Some(m) => {
            if m.len() != n as usize + 1 || m[n as usize] != 1 || m.iter().any(|&c| c >= p) {
                return Err(Error::BadFieldSpec(format!(
                    "modulus must be monic of degree {n} with coefficients below {p}"
                )));
            }
            if n > 1 && !irreducible_over_prime(p, &m) {
                return Err(Error::ReducibleModulus(p));
            }
            m
        }
        None => {
            if n == 1 {
                vec![0, 1]
            } else {
                let mut found = None;
                for r in 0..q {
                    let c = digits_of(lex_nth(r, p, n), p, n);
                    let mut m: Vec<u32> = c.to_vec();
                    m.push(1);
                    if irreducible_over_prime(p, &m) {
                        found = Some(m);
                        break;
                    }
                }
                found.expect("irreducible polynomials exist in every degree")
            }
        }
    };
    build(p, n, q, modulus)
}

fn irreducible_over_prime(p: u32, m: &[u32]) -> bool {
    let fp = build(p, 1, p, vec![0, 1]).expect("prime field");
    Poly::new(&fp, m.to_vec()).is_irreducible()
}

fn build(p: u32, n: u32, q: u32, modulus: Vec<u32>) -> Result<FieldSpec> {
    let add = if p != 2 && q <= 256 {
        let mut t = vec![0; (q * q) as usize];
        for a in 0..q {
            let da = digits_of(a, p, n);
            for b in 0..q {
                let db = digits_of(b, p, n);
                let s: SmallVec<[u32; 8]> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                t[(a * q + b) as usize] = index_of(&s, p);
            }
        }
        Some(t)
    } else {
        None
    };
    // First generator of the multiplicative group in lexicographic order.
    let mut zeta = 1;
    let mut exp = vec![1];
    if q > 2 {
        for r in 0..q {
            let cand = lex_nth(r, p, n);
            if cand == 0 {
                continue;
            }
            let cd = digits_of(cand, p, n);
            let mut table = Vec::with_capacity(q as usize - 1);
            let mut cur: Vec<u32> = digits_of(1, p, n).to_vec();
            let mut ok = true;
            for k in 0..q - 1 {
                let idx = index_of(&cur, p);
                if k > 0 && idx == 1 {
                    ok = false;
                    break;
                }
                table.push(idx);
                cur = raw_mul(&cur, &cd, &modulus, p);
            }
            if ok {
                zeta = cand;
                exp = table;
                break;
            }
        }
    }
    let mut log = vec![0u32; q as usize];
    for (k, &e) in exp.iter().enumerate() {
        log[e as usize] = k as u32;
    }
    Ok(FieldSpec(Arc::new(Inner {
        p,
        n,
        q,
        modulus,
        zeta,
        exp,
        log,
        add,
        teich: Mutex::new(HashMap::new()),
    })))
}

impl FieldSpec {
    /// Parses `p`, `p^n` or `p^n/c0,c1,...,cn`.
    pub fn parse(text: &str) -> Result<FieldSpec> {
        let bad = || Error::BadFieldSpec(text.to_string());
        let text = text.trim();
        let (head, coeffs) = match text.split_once('/') {
            Some((h, c)) => (h, Some(c)),
            None => (text, None),
        };
        let (p, n) = match head.split_once('^') {
            Some((p, n)) => (
                p.trim().parse::<u64>().map_err(|_| bad())?,
                n.trim().parse::<u32>().map_err(|_| bad())?,
            ),
            None => (head.trim().parse::<u64>().map_err(|_| bad())?, 1),
        };
        let modulus = match coeffs {
            Some(c) => Some(
                c.split(',')
                    .map(|x| x.trim().parse::<u32>().map_err(|_| bad()))
                    .collect::<Result<Vec<_>>>()?,
            ),
            None => None,
        };
        make_field(p, n, modulus)
    }

    pub fn to_text(&self) -> String {
        let m: Vec<String> = self.0.modulus.iter().map(|c| c.to_string()).collect();
        format!("{}^{}/{}", self.0.p, self.0.n, m.join(","))
    }

    pub fn p(&self) -> u32 {
        self.0.p
    }
    pub fn n(&self) -> u32 {
        self.0.n
    }
    pub fn q(&self) -> u32 {
        self.0.q
    }
    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }
    pub fn is_prime_field(&self) -> bool {
        self.0.n == 1
    }
    pub fn ptr_eq(&self, other: &FieldSpec) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }

    /// The fixed generator of the multiplicative group.
    pub fn zeta(&self) -> Fq {
        self.0.zeta
    }

    pub fn elements(&self) -> impl Iterator<Item = Fq> {
        0..self.0.q
    }

    pub fn coeffs(&self, a: Fq) -> Vec<u32> {
        digits_of(a, self.0.p, self.0.n).to_vec()
    }

    pub fn from_coeffs(&self, c: &[u32]) -> Result<Fq> {
        if c.len() != self.0.n as usize || c.iter().any(|&x| x >= self.0.p) {
            return Err(Error::Invalid(format!("coefficient vector {c:?} for {}", self.to_text())));
        }
        Ok(index_of(c, self.0.p))
    }

    /// The polynomial generator x of F_p[x]/(m).
    pub fn gen(&self) -> Fq {
        if self.0.n == 1 {
            self.from_int(-(self.0.modulus[0] as i64))
        } else {
            self.0.p
        }
    }

    pub fn from_int(&self, v: i64) -> Fq {
        v.rem_euclid(self.0.p as i64) as u32
    }

    pub fn add(&self, a: Fq, b: Fq) -> Fq {
        let i = &self.0;
        if i.p == 2 {
            return a ^ b;
        }
        if i.n == 1 {
            return (a + b) % i.p;
        }
        if let Some(t) = &i.add {
            return t[(a * i.q + b) as usize];
        }
        let da = digits_of(a, i.p, i.n);
        let db = digits_of(b, i.p, i.n);
        let s: SmallVec<[u32; 8]> = da.iter().zip(&db).map(|(x, y)| (x + y) % i.p).collect();
        index_of(&s, i.p)
    }

    pub fn neg(&self, a: Fq) -> Fq {
        let i = &self.0;
        if i.p == 2 {
            return a;
        }
        if i.n == 1 {
            return (i.p - a) % i.p;
        }
        let d: SmallVec<[u32; 8]> = digits_of(a, i.p, i.n).iter().map(|x| (i.p - x) % i.p).collect();
        index_of(&d, i.p)
    }

    pub fn sub(&self, a: Fq, b: Fq) -> Fq {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Fq, b: Fq) -> Fq {
        if a == 0 || b == 0 {
            return 0;
        }
        let i = &self.0;
        let k = (i.log[a as usize] as u64 + i.log[b as usize] as u64) % (i.q as u64 - 1);
        i.exp[k as usize]
    }

    pub fn inv(&self, a: Fq) -> Option<Fq> {
        if a == 0 {
            return None;
        }
        let i = &self.0;
        let k = (i.q - 1 - i.log[a as usize]) % (i.q - 1);
        Some(i.exp[k as usize])
    }

    pub fn div(&self, a: Fq, b: Fq) -> Result<Fq> {
        let bi = self.inv(b).ok_or(Error::DivisionByZero)?;
        Ok(self.mul(a, bi))
    }

    /// a^e for any integer e; 0^e with e <= 0 is reported as division by zero for e < 0 and 1 for e = 0.
    pub fn pow(&self, a: Fq, e: i64) -> Result<Fq> {
        if e == 0 {
            return Ok(1);
        }
        if a == 0 {
            return if e > 0 { Ok(0) } else { Err(Error::DivisionByZero) };
        }
        Ok(self.zeta_pow(self.log(a) as i64 * e))
    }

    /// Discrete logarithm base zeta, for a nonzero.
    pub fn log(&self, a: Fq) -> u32 {
        debug_assert!(a != 0);
        self.0.log[a as usize]
    }

    pub fn zeta_pow(&self, k: i64) -> Fq {
        let m = self.0.q as i64 - 1;
        self.0.exp[k.rem_euclid(m) as usize]
    }

    pub fn frobenius(&self, a: Fq) -> Fq {
        self.pow(a, self.0.p as i64).unwrap()
    }

    /// Absolute trace to F_p, returned as an integer in [0, p).
    pub fn trace_abs(&self, a: Fq) -> u32 {
        let mut acc = 0;
        let mut x = a;
        for _ in 0..self.0.n {
            acc = self.add(acc, x);
            x = self.frobenius(x);
        }
        debug_assert!(acc < self.0.p);
        acc
    }

    /// Basis {1, z, z^2, ...} of F_q over F_p, z the fixed generator.
    pub fn fp_basis(&self) -> Vec<Fq> {
        (0..self.0.n as i64).map(|k| self.zeta_pow(k)).collect()
    }

    pub fn teich_table(&self, s: u32) -> Arc<Vec<ZqElem>> {
        let mut cache = self.0.teich.lock().unwrap();
        if let Some(t) = cache.get(&s) {
            return t.clone();
        }
        let zq = Zq::new(self, s);
        let mut y = zq.lift_digits(self.zeta());
        for _ in 0..s {
            y = zq.pow(&y, self.0.q as u64);
        }
        let mut table = Vec::with_capacity(self.0.q as usize - 1);
        let mut cur = zq.one();
        for _ in 0..self.0.q - 1 {
            table.push(cur.clone());
            cur = zq.mul(&cur, &y);
        }
        let t = Arc::new(table);
        cache.insert(s, t.clone());
        t
    }

    /// Multiplicative representative of `a` in W_s(F_q).
    pub fn teichmuller_lift(&self, a: Fq, s: u32) -> ZqElem {
        let zq = Zq::new(self, s);
        if a == 0 {
            return zq.zero();
        }
        self.teich_table(s)[self.log(a) as usize].clone()
    }

    /// Text form used in series output: integers over F_p, powers of z otherwise.
    pub fn fmt_elem(&self, a: Fq) -> String {
        if self.0.n == 1 {
            a.to_string()
        } else if a == 0 {
            "0".into()
        } else {
            match self.log(a) {
                0 => "1".into(),
                1 => "z".into(),
                k => format!("z^{k}"),
            }
        }
    }
}

impl Ring for FieldSpec {
    type Elem = Fq;
    fn zero(&self) -> Fq {
        0
    }
    fn one(&self) -> Fq {
        1
    }
    fn add(&self, a: &Fq, b: &Fq) -> Fq {
        FieldSpec::add(self, *a, *b)
    }
    fn neg(&self, a: &Fq) -> Fq {
        FieldSpec::neg(self, *a)
    }
    fn sub(&self, a: &Fq, b: &Fq) -> Fq {
        FieldSpec::sub(self, *a, *b)
    }
    fn mul(&self, a: &Fq, b: &Fq) -> Fq {
        FieldSpec::mul(self, *a, *b)
    }
    fn is_zero(&self, a: &Fq) -> bool {
        *a == 0
    }
    fn inv(&self, a: &Fq) -> Option<Fq> {
        FieldSpec::inv(self, *a)
    }
    fn from_bigint(&self, v: &BigInt) -> Fq {
        let p = BigInt::from(self.0.p);
        let r = ((v % &p) + &p) % &p;
        r.to_u32().unwrap()
    }
    fn from_i64(&self, v: i64) -> Fq {
        self.from_int(v)
    }
    fn char_p(&self) -> Option<u32> {
        Some(self.0.p)
    }
    fn pow(&self, a: &Fq, e: u64) -> Fq {
        if e == 0 {
            1
        } else if *a == 0 {
            0
        } else {
            let m = self.0.q as u64 - 1;
            self.0.exp[((self.log(*a) as u64 % m) * (e % m) % m) as usize]
        }
    }
}

/// Embedding of a subfield `small` into `big`, with image and preimage tables.
#[derive(Clone, Debug)]
pub struct Embedding {
    pub small: FieldSpec,
    pub big: FieldSpec,
    image: Vec<Fq>,
    pre: HashMap<Fq, Fq>,
}

impl Embedding {
    pub fn new(small: &FieldSpec, big: &FieldSpec) -> Result<Embedding> {
        if small.p() != big.p() || big.n() % small.n() != 0 {
            return Err(Error::NotASubfield);
        }
        let m = small.modulus();
        let eval = |x: Fq| {
            m.iter().rev().fold(0, |acc, &c| big.add(big.mul(acc, x), c))
        };
        let root = (0..big.q())
            .map(|r| lex_nth(r, big.p(), big.n()))
            .find(|&x| eval(x) == 0)
            .ok_or(Error::NotASubfield)?;
        let mut image = Vec::with_capacity(small.q() as usize);
        let mut pre = HashMap::new();
        for a in 0..small.q() {
            let c = small.coeffs(a);
            let v = c.iter().rev().fold(0, |acc, &d| big.add(big.mul(acc, root), d));
            image.push(v);
            pre.insert(v, a);
        }
        Ok(Embedding { small: small.clone(), big: big.clone(), image, pre })
    }

    pub fn degree(&self) -> u32 {
        self.big.n() / self.small.n()
    }

    pub fn image(&self, a: Fq) -> Fq {
        self.image[a as usize]
    }

    pub fn preimage(&self, b: Fq) -> Option<Fq> {
        self.pre.get(&b).copied()
    }

    pub fn norm(&self, b: Fq) -> Fq {
        let e = (self.big.q() as i64 - 1) / (self.small.q() as i64 - 1);
        let v = self.big.pow(b, e).unwrap();
        self.preimage(v).expect("norm lies in the subfield")
    }

    pub fn trace(&self, b: Fq) -> Fq {
        let mut acc = 0;
        let mut x = b;
        for _ in 0..self.degree() {
            acc = self.big.add(acc, x);
            x = self.big.pow(x, self.small.q() as i64).unwrap();
        }
        self.preimage(acc).expect("trace lies in the subfield")
    }
}

/// Relative norm from the field of `a` down to `subfield`.
pub fn norm_rel(field: &FieldSpec, a: Fq, subfield: &FieldSpec) -> Result<Fq> {
    Ok(Embedding::new(subfield, field)?.norm(a))
}

pub type ZqElem = SmallVec<[u64; 4]>;

/// W_s(F_q) = Z_p[x]/(M(x), p^s) with M the integer lift of the modulus.
#[derive(Clone, Debug)]
pub struct Zq {
    field: FieldSpec,
    s: u32,
    ps: u64,
}

impl PartialEq for Zq {
    fn eq(&self, o: &Self) -> bool {
        self.field == o.field && self.s == o.s
    }
}

impl Zq {
    pub fn new(field: &FieldSpec, s: u32) -> Zq {
        assert!(s >= 1);
        let ps = (field.p() as u64).checked_pow(s).filter(|&v| v < 1 << 62).expect("p^s must stay below 2^62");
        Zq { field: field.clone(), s, ps }
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }
    pub fn modulus_value(&self) -> u64 {
        self.ps
    }

    /// Same ring at another p-adic precision.
    pub fn with_prec(&self, s: u32) -> Zq {
        Zq::new(&self.field, s)
    }

    pub fn lift_digits(&self, a: Fq) -> ZqElem {
        self.field.coeffs(a).into_iter().map(|c| c as u64).collect()
    }

    pub fn teich(&self, a: Fq) -> ZqElem {
        self.field.teichmuller_lift(a, self.s)
    }

    pub fn reduce(&self, a: &ZqElem) -> Fq {
        let p = self.field.p() as u64;
        let d: SmallVec<[u32; 8]> = a.iter().map(|&x| (x % p) as u32).collect();
        index_of(&d, self.field.p())
    }

    /// Reduction to precision s' <= s.
    pub fn truncate(&self, a: &ZqElem, s: u32) -> ZqElem {
        let m = (self.field.p() as u64).pow(s);
        a.iter().map(|&x| x % m).collect()
    }

    /// p-adic valuation, capped at s.
    pub fn valuation(&self, a: &ZqElem) -> u32 {
        let p = self.field.p() as u64;
        let mut v = self.s;
        for &x in a {
            if x != 0 {
                let mut k = 0;
                let mut y = x;
                while y % p == 0 {
                    y /= p;
                    k += 1;
                }
                v = v.min(k);
            }
        }
        v
    }

    fn mulmod(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.ps as u128) as u64
    }

    pub fn scalar(&self, v: u64) -> ZqElem {
        let mut e: ZqElem = SmallVec::from_elem(0, self.field.n() as usize);
        e[0] = v % self.ps;
        e
    }
}

impl Ring for Zq {
    type Elem = ZqElem;
    fn zero(&self) -> ZqElem {
        SmallVec::from_elem(0, self.field.n() as usize)
    }
    fn one(&self) -> ZqElem {
        self.scalar(1)
    }
    fn add(&self, a: &ZqElem, b: &ZqElem) -> ZqElem {
        a.iter().zip(b).map(|(&x, &y)| (x + y) % self.ps).collect()
    }
    fn neg(&self, a: &ZqElem) -> ZqElem {
        a.iter().map(|&x| (self.ps - x) % self.ps).collect()
    }
    fn sub(&self, a: &ZqElem, b: &ZqElem) -> ZqElem {
        a.iter().zip(b).map(|(&x, &y)| (x + self.ps - y) % self.ps).collect()
    }
    fn mul(&self, a: &ZqElem, b: &ZqElem) -> ZqElem {
        let n = self.field.n() as usize;
        if n == 1 {
            return SmallVec::from_elem(self.mulmod(a[0], b[0]), 1);
        }
        let mut r = vec![0u64; 2 * n - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                r[i + j] = (r[i + j] + self.mulmod(x, y)) % self.ps;
            }
        }
        let m = self.field.modulus();
        for k in (n..r.len()).rev() {
            let c = r[k];
            if c == 0 {
                continue;
            }
            r[k] = 0;
            for j in 0..n {
                let sub = self.mulmod(c, m[j] as u64);
                r[k - n + j] = (r[k - n + j] + self.ps - sub) % self.ps;
            }
        }
        r.truncate(n);
        r.into_iter().collect()
    }
    fn is_zero(&self, a: &ZqElem) -> bool {
        a.iter().all(|&x| x == 0)
    }
    fn inv(&self, a: &ZqElem) -> Option<ZqElem> {
        let a0 = self.reduce(a);
        let b0 = self.field.inv(a0)?;
        let mut y = self.lift_digits(b0);
        let two = self.scalar(2);
        let mut prec = 1;
        while prec < self.s {
            y = self.mul(&y, &self.sub(&two, &self.mul(a, &y)));
            prec *= 2;
        }
        Some(y)
    }
    fn from_bigint(&self, v: &BigInt) -> ZqElem {
        let m = BigInt::from(self.ps);
        let r = ((v % &m) + &m) % &m;
        self.scalar(r.to_u64().unwrap())
    }
    fn from_i64(&self, v: i64) -> ZqElem {
        self.scalar(v.rem_euclid(self.ps as i64) as u64)
    }
    fn char_p(&self) -> Option<u32> {
        if self.s == 1 {
            Some(self.field.p())
        } else {
            None
        }
    }
}

impl PadicRing for Zq {
    fn prime(&self) -> u32 {
        self.field.p()
    }
    fn padic_prec(&self) -> u32 {
        self.s
    }
    fn div_p(&self, a: &ZqElem) -> Option<ZqElem> {
        let p = self.field.p() as u64;
        if a.iter().all(|&x| x % p == 0) {
            Some(a.iter().map(|&x| x / p).collect())
        } else {
            None
        }
    }
}

/// Z/p^s, the scalar case of the truncated Witt ring.
#[derive(Clone, Debug, PartialEq)]
pub struct Zps {
    p: u32,
    s: u32,
    ps: u64,
}

impl Zps {
    pub fn new(p: u32, s: u32) -> Zps {
        let ps = (p as u64).checked_pow(s).filter(|&v| v < 1 << 62).expect("p^s must stay below 2^62");
        Zps { p, s, ps }
    }
    pub fn modulus_value(&self) -> u64 {
        self.ps
    }
}

impl Ring for Zps {
    type Elem = u64;
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.ps
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.ps
    }
    fn neg(&self, a: &u64) -> u64 {
        (self.ps - a) % self.ps
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 * *b as u128) % self.ps as u128) as u64
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        if a % self.p as u64 == 0 {
            return None;
        }
        // a^(phi(p^s) - 1)
        let phi = self.ps / self.p as u64 * (self.p as u64 - 1);
        Some(self.pow(a, phi - 1))
    }
    fn from_bigint(&self, v: &BigInt) -> u64 {
        let m = BigInt::from(self.ps);
        (((v % &m) + &m) % &m).to_u64().unwrap()
    }
    fn from_i64(&self, v: i64) -> u64 {
        v.rem_euclid(self.ps as i64) as u64
    }
    fn char_p(&self) -> Option<u32> {
        if self.s == 1 {
            Some(self.p)
        } else {
            None
        }
    }
}

impl PadicRing for Zps {
    fn prime(&self) -> u32 {
        self.p
    }
    fn padic_prec(&self) -> u32 {
        self.s
    }
    fn div_p(&self, a: &u64) -> Option<u64> {
        if a % self.p as u64 == 0 {
            Some(a / self.p as u64)
        } else {
            None
        }
    }
}
