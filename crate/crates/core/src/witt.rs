//! Finite-length p-typical Witt vectors over an arbitrary coefficient ring.
//!
//! Sum, product and negation use universal integer polynomials obtained once per prime by
//! inverting the ghost map symbolically, with every division by p checked to be exact.

use crate::error::{Error, Result};
use crate::ff::FieldSpec;
use crate::ring::{PadicRing, Ring};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

/// Lengths up to this bound are supported unless a caller asks for more.
pub const DEFAULT_MAX_LEN: usize = 4;

/// Integer polynomial in `2m` variables: X_0..X_{m-1} then Y_0..Y_{m-1}.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct MPoly {
    pub terms: BTreeMap<Vec<u32>, BigInt>,
}

impl MPoly {
    fn var(nvars: usize, v: usize) -> MPoly {
        let mut e = vec![0; nvars];
        e[v] = 1;
        let mut terms = BTreeMap::new();
        terms.insert(e, BigInt::one());
        MPoly { terms }
    }
    fn constant(nvars: usize, c: BigInt) -> MPoly {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(vec![0; nvars], c);
        }
        MPoly { terms }
    }
    fn add_assign(&mut self, o: &MPoly, sign: i32) {
        for (e, c) in &o.terms {
            let v = self.terms.entry(e.clone()).or_insert_with(BigInt::zero);
            if sign > 0 {
                *v += c;
            } else {
                *v -= c;
            }
            if v.is_zero() {
                self.terms.remove(e);
            }
        }
    }
    fn mul(&self, o: &MPoly) -> MPoly {
        let mut terms: BTreeMap<Vec<u32>, BigInt> = BTreeMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                *terms.entry(e).or_insert_with(BigInt::zero) += c1 * c2;
            }
        }
        terms.retain(|_, c| !c.is_zero());
        MPoly { terms }
    }
    fn pow(&self, mut e: u64, nvars: usize) -> MPoly {
        let mut acc = MPoly::constant(nvars, BigInt::one());
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
    fn scale(&self, k: &BigInt) -> MPoly {
        MPoly { terms: self.terms.iter().map(|(e, c)| (e.clone(), c * k)).filter(|(_, c)| !c.is_zero()).collect() }
    }
    fn div_exact(&self, k: &BigInt) -> MPoly {
        MPoly {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let (q, r) = c.div_rem(k);
                    assert!(r.is_zero(), "universal Witt polynomial has a non-integral coefficient");
                    (e.clone(), q)
                })
                .collect(),
        }
    }

    /// Evaluates in `ring`; monomials whose coefficient vanishes in the ring are skipped.
    pub fn eval<R: Ring>(&self, ring: &R, vars: &[R::Elem], powers: &mut HashMap<(usize, u32), R::Elem>) -> R::Elem {
        let mut acc = ring.zero();
        for (e, c) in &self.terms {
            let cr = ring.from_bigint(c);
            if ring.is_zero(&cr) {
                continue;
            }
            let mut m = cr;
            for (v, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                let pw = powers.entry((v, k)).or_insert_with(|| ring.pow(&vars[v], k as u64)).clone();
                m = ring.mul(&m, &pw);
            }
            acc = ring.add(&acc, &m);
        }
        acc
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum WittOp {
    Add,
    Mul,
    Neg,
}

type Cache = Mutex<HashMap<(u32, WittOp, usize), Arc<Vec<MPoly>>>>;

fn cache() -> &'static Cache {
    static C: OnceLock<Cache> = OnceLock::new();
    C.get_or_init(|| Mutex::new(HashMap::new()))
}

/// The universal polynomials S_0..S_{m-1} of `op` for the prime p, cached.
pub fn universal(p: u32, op: WittOp, m: usize) -> Arc<Vec<MPoly>> {
    if let Some(v) = cache().lock().unwrap().get(&(p, op, m)) {
        return v.clone();
    }
    let nv = 2 * m;
    let pb = BigInt::from(p);
    let ghost_of = |off: usize, k: usize| {
        let mut g = MPoly::default();
        for j in 0..=k {
            let term = MPoly::var(nv, off + j).pow((p as u64).pow((k - j) as u32), nv).scale(&pb.pow(j as u32));
            g.add_assign(&term, 1);
        }
        g
    };
    let mut s: Vec<MPoly> = Vec::with_capacity(m);
    for k in 0..m {
        let gx = ghost_of(0, k);
        let mut target = match op {
            WittOp::Add => {
                let mut t = gx;
                t.add_assign(&ghost_of(m, k), 1);
                t
            }
            WittOp::Mul => gx.mul(&ghost_of(m, k)),
            WittOp::Neg => gx.scale(&BigInt::from(-1)),
        };
        for (j, sj) in s.iter().enumerate() {
            let term = sj.pow((p as u64).pow((k - j) as u32), nv).scale(&pb.pow(j as u32));
            target.add_assign(&term, -1);
        }
        s.push(target.div_exact(&pb.pow(k as u32)));
    }
    let v = Arc::new(s);
    cache().lock().unwrap().insert((p, op, m), v.clone());
    v
}

/// A Witt vector of fixed length over `ring`, for the prime `p`.
#[derive(Clone, Debug, PartialEq)]
pub struct WittVec<R: Ring> {
    pub p: u32,
    pub ring: R,
    pub comps: Vec<R::Elem>,
}

impl<R: Ring + PartialEq> WittVec<R> {
    pub fn new(p: u32, ring: &R, comps: Vec<R::Elem>) -> Self {
        WittVec { p, ring: ring.clone(), comps }
    }
    pub fn zero(p: u32, ring: &R, m: usize) -> Self {
        WittVec { p, ring: ring.clone(), comps: vec![ring.zero(); m] }
    }
    /// `(a, 0, ..., 0)`, the Teichmuller representative of a.
    pub fn teich(p: u32, ring: &R, a: R::Elem, m: usize) -> Self {
        let mut w = Self::zero(p, ring, m);
        if m > 0 {
            w.comps[0] = a;
        }
        w
    }
    pub fn len(&self) -> usize {
        self.comps.len()
    }
    pub fn is_empty(&self) -> bool {
        self.comps.is_empty()
    }
    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(|c| self.ring.is_zero(c))
    }

    fn check(&self, o: &Self) -> Result<()> {
        if self.p != o.p || self.ring != o.ring || self.len() != o.len() {
            return Err(Error::RingMismatch);
        }
        Ok(())
    }

    fn apply(&self, o: Option<&Self>, op: WittOp) -> Self {
        let m = self.len();
        let polys = universal(self.p, op, m);
        let mut vars = self.comps.clone();
        match o {
            Some(o) => vars.extend(o.comps.iter().cloned()),
            None => vars.extend(std::iter::repeat(self.ring.zero()).take(m)),
        }
        let mut powers = HashMap::new();
        let comps = polys.iter().map(|s| s.eval(&self.ring, &vars, &mut powers)).collect();
        WittVec { p: self.p, ring: self.ring.clone(), comps }
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        Ok(self.apply(Some(o), WittOp::Add))
    }
    pub fn mul(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        Ok(self.apply(Some(o), WittOp::Mul))
    }
    pub fn neg(&self) -> Self {
        self.apply(None, WittOp::Neg)
    }
    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        Ok(self.apply(Some(&o.neg()), WittOp::Add))
    }

    /// `V(w) = (0, w_0, ..., w_{m-1})`, one longer.
    pub fn verschiebung(&self) -> Self {
        let mut comps = vec![self.ring.zero()];
        comps.extend(self.comps.iter().cloned());
        WittVec { p: self.p, ring: self.ring.clone(), comps }
    }

    /// Componentwise p-th power; the ring must have characteristic p.
    pub fn frobenius(&self) -> Result<Self> {
        if self.ring.char_p() != Some(self.p) {
            return Err(Error::WrongCharacteristic);
        }
        Ok(WittVec {
            p: self.p,
            ring: self.ring.clone(),
            comps: self.comps.iter().map(|c| self.ring.pow(c, self.p as u64)).collect(),
        })
    }

    /// The first `k` components.
    pub fn truncate(&self, k: usize) -> Self {
        WittVec { p: self.p, ring: self.ring.clone(), comps: self.comps[..k].to_vec() }
    }

    /// Applies a ring map componentwise.
    pub fn map<S: Ring + PartialEq>(&self, ring: &S, f: impl Fn(&R::Elem) -> S::Elem) -> WittVec<S> {
        WittVec { p: self.p, ring: ring.clone(), comps: self.comps.iter().map(f).collect() }
    }

    /// Sum of a family, zero of length m if empty.
    pub fn sum<'a>(p: u32, ring: &R, m: usize, items: impl IntoIterator<Item = &'a Self>) -> Result<Self>
    where
        R: 'a,
    {
        let mut acc = Self::zero(p, ring, m);
        for w in items {
            acc = acc.add(w)?;
        }
        Ok(acc)
    }
}

/// Ghost components `x(k) = sum_{j<=k} p^j w_j^{p^{k-j}}`.
pub fn ghost<R: PadicRing + PartialEq>(w: &WittVec<R>) -> Result<Vec<R::Elem>> {
    let r = &w.ring;
    let m = w.len() as u32;
    if r.padic_prec() < m {
        return Err(Error::InsufficientPadicPrecision { have: r.padic_prec(), need: m });
    }
    let p = r.prime() as u64;
    let mut out = Vec::with_capacity(w.len());
    for k in 0..w.len() {
        let mut acc = r.zero();
        for j in 0..=k {
            let term = r.pow(&w.comps[j], p.pow((k - j) as u32));
            acc = r.add(&acc, &r.mul(&r.from_i64(p.pow(j as u32) as i64), &term));
        }
        out.push(acc);
    }
    Ok(out)
}

/// Inverse of the ghost map. Component k is determined modulo p^(s-k).
pub fn unghost<R: PadicRing + PartialEq>(p: u32, ring: &R, g: &[R::Elem]) -> Result<WittVec<R>> {
    let m = g.len() as u32;
    if ring.padic_prec() < m {
        return Err(Error::InsufficientPadicPrecision { have: ring.padic_prec(), need: m });
    }
    let pp = p as u64;
    let mut comps: Vec<R::Elem> = Vec::with_capacity(g.len());
    for k in 0..g.len() {
        let mut acc = g[k].clone();
        for (j, xj) in comps.iter().enumerate() {
            let term = ring.pow(xj, pp.pow((k - j) as u32));
            acc = ring.sub(&acc, &ring.mul(&ring.from_i64(pp.pow(j as u32) as i64), &term));
        }
        for _ in 0..k {
            acc = ring.div_p(&acc).ok_or(Error::NonIntegralGhost(k))?;
        }
        comps.push(acc);
    }
    Ok(WittVec { p, ring: ring.clone(), comps })
}

/// Trace W_m(F_q) -> W_m(F_p): the Witt sum of the Frobenius conjugates. Returns components in [0, p).
pub fn witt_trace(w: &WittVec<FieldSpec>) -> Vec<u32> {
    let k = &w.ring;
    let mut acc = WittVec::zero(w.p, k, w.len());
    let mut x = w.clone();
    for _ in 0..k.n() {
        acc = acc.add(&x).expect("same ring");
        x = x.frobenius().expect("characteristic p");
    }
    acc.comps.iter().map(|&c| {
        debug_assert!(c < k.p());
        c
    }).collect()
}

/// The isomorphism W_m(F_p) -> Z/p^m, `(w_k) -> sum p^k [w_k]` with Teichmuller digits.
pub fn witt_fp_to_int(p: u32, w: &[u32]) -> u64 {
    let m = w.len() as u32;
    if m == 0 {
        return 0;
    }
    let fp = crate::ff::make_field(p as u64, 1, None).expect("prime");
    let pm = (p as u64).pow(m);
    let mut acc = 0u64;
    for (k, &c) in w.iter().enumerate() {
        let t = fp.teichmuller_lift(c, m)[0];
        acc = (acc + (p as u64).pow(k as u32) % pm * t) % pm;
    }
    acc
}
