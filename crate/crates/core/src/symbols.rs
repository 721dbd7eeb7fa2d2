//! Milnor K2 symbols over F_q((u))((t)): tame symbols, boundary, the Witt pairing,
//! decomposition into the topological basis, and a level-bounded equivalence test.

use crate::error::{Error, Result};
use crate::ff::{FieldSpec, Fq, Zq};
use crate::forms::dlog_wedge;
use crate::par::Exec;
use crate::ring::Ring;
use crate::series::{Laurent2, PadicLaurent2, Precision, SeriesRing, INF};
use crate::witt::{unghost, witt_trace, WittVec};
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt;

/// Witt vectors with Laurent2 components.
pub type LWitt = WittVec<SeriesRing<FieldSpec>>;

/// Formal product of symbols `{f, g}^e`.
#[derive(Clone, Debug, PartialEq)]
pub struct K2Elem {
    pub field: FieldSpec,
    pub factors: Vec<(Laurent2, Laurent2, i64)>,
}

impl K2Elem {
    pub fn trivial(field: &FieldSpec) -> Self {
        K2Elem { field: field.clone(), factors: vec![] }
    }
    pub fn symbol(f: &Laurent2, g: &Laurent2) -> Self {
        Self::symbol_pow(f, g, 1)
    }
    pub fn symbol_pow(f: &Laurent2, g: &Laurent2, e: i64) -> Self {
        let mut k = Self::trivial(f.field());
        if e != 0 {
            k.factors.push((f.clone(), g.clone(), e));
        }
        k
    }
    pub fn mul(&self, o: &Self) -> Self {
        let mut f = self.factors.clone();
        f.extend(o.factors.iter().cloned());
        K2Elem { field: self.field.clone(), factors: f }
    }
    pub fn inv(&self) -> Self {
        self.pow(-1)
    }
    pub fn pow(&self, e: i64) -> Self {
        if e == 0 {
            return Self::trivial(&self.field);
        }
        K2Elem { field: self.field.clone(), factors: self.factors.iter().map(|(f, g, k)| (f.clone(), g.clone(), k * e)).collect() }
    }
    /// `self * o^-1`.
    pub fn div(&self, o: &Self) -> Self {
        self.mul(&o.inv())
    }
    fn check_units(&self) -> Result<()> {
        for (f, g, _) in &self.factors {
            for x in [f, g] {
                if x.is_zero() && x.t_prec >= INF {
                    return Err(Error::ZeroArgument);
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for K2Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|(a, b, e)| if *e == 1 { format!("{{{a}; {b}}}") } else { format!("{{{a}; {b}}}^{e}") })
            .collect();
        write!(f, "{}", parts.join(" * "))
    }
}

/// `(v_bar, v_y, leading coefficient)`.
fn vals(f: &Laurent2) -> Result<(i64, i64, Fq)> {
    if f.is_exact_zero() {
        return Err(Error::ZeroArgument);
    }
    Ok((f.bar_valuation()?, f.outer_valuation()?, f.leading_coeff()?))
}

fn minus_one_pow(k: &FieldSpec, e: i64) -> Fq {
    if e.rem_euclid(2) == 0 {
        1
    } else {
        k.neg(1)
    }
}

/// Determinant form: residue of `f1^b1 f2^b2 f3^b3 (-1)^b` with cofactor exponents of the valuation matrix.
pub fn tame_symbol_det(f1: &Laurent2, f2: &Laurent2, f3: &Laurent2) -> Result<Fq> {
    let k = f1.field();
    let v = [vals(f1)?, vals(f2)?, vals(f3)?];
    let m = |s: usize, j: usize| if s == 0 { v[j].0 } else { v[j].1 };
    let others = |j: usize| -> (usize, usize) {
        match j {
            0 => (1, 2),
            1 => (0, 2),
            _ => (0, 1),
        }
    };
    let mut value: Fq = 1;
    for j in 0..3 {
        let (a, b) = others(j);
        let minor = m(0, a) * m(1, b) - m(0, b) * m(1, a);
        let bj = if j % 2 == 0 { minor } else { -minor };
        value = k.mul(value, k.pow(v[j].2, bj)?);
    }
    let mut sign = 0i64;
    for s in 0..2 {
        for i in 0..3 {
            for j in i + 1..3 {
                let rest = 3 - i - j;
                sign += m(s, i) * m(s, j) * m(1 - s, rest);
            }
        }
    }
    Ok(k.mul(value, minus_one_pow(k, sign)))
}

/// Which exponent orientation the signed monomial formula uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Orientation {
    /// Exponents as printed, with v = (v_bar, v_y); yields the inverse of the determinant form.
    Literal,
    /// Exponents negated to match the determinant form.
    Det,
}

/// Leading term of f with everything beyond it marked unknown.
fn leading_part(f: &Laurent2) -> Result<Laurent2> {
    let (vb, vy, _) = vals(f)?;
    Ok(f.truncate_t(vy + 1).truncate_u(vb + 1))
}

/// Signed monomial formula evaluated with series arithmetic, reduced modulo the maximal ideal.
pub fn tame_symbol_signed_with(f: &Laurent2, g: &Laurent2, h: &Laurent2, o: Orientation) -> Result<Fq> {
    let k = f.field();
    let (vbf, vyf, _) = vals(f)?;
    let (vbg, vyg, _) = vals(g)?;
    let (vbh, vyh, _) = vals(h)?;
    let ef = vyg * vbh - vyh * vbg;
    let eg = -(vyf * vbh - vyh * vbf);
    let eh = vyf * vbg - vyg * vbf;
    let alpha = vyf * vyg * vbh + vyf * vyh * vbg + vyg * vyh * vbf + vyf * vbg * vbh + vyg * vbf * vbh + vyh * vbf * vbg;
    let sgn = if o == Orientation::Det { -1 } else { 1 };
    let p = Precision::new(2, 2);
    let prod = leading_part(f)?
        .pow(sgn * ef, p)?
        .mul(&leading_part(g)?.pow(sgn * eg, p)?)
        .mul(&leading_part(h)?.pow(sgn * eh, p)?);
    let (vb, vy) = (prod.bar_valuation()?, prod.outer_valuation()?);
    if (vb, vy) != (0, 0) {
        return Err(Error::PrecisionTooLow(format!("monomial has valuation ({vb}, {vy})")));
    }
    let c = prod.coeff(0, 0)?;
    Ok(k.mul(c, minus_one_pow(k, alpha)))
}

pub fn tame_symbol_signed(f: &Laurent2, g: &Laurent2, h: &Laurent2) -> Result<Fq> {
    tame_symbol_signed_with(f, g, h, Orientation::Det)
}

/// Tame symbol of a K2 element against h.
pub fn tame_k2(e: &K2Elem, h: &Laurent2) -> Result<Fq> {
    e.check_units()?;
    let k = &e.field;
    let mut acc = 1;
    for (f, g, x) in &e.factors {
        acc = k.mul(acc, k.pow(tame_symbol_det(f, g, h)?, *x)?);
    }
    Ok(acc)
}

/// Boundary to K1 of the residue field k((u)), as a single-row series.
pub fn boundary(e: &K2Elem, prec: Precision) -> Result<Laurent2> {
    e.check_units()?;
    let k = &e.field;
    let mut acc = Laurent2::one(k);
    for (a, b, x) in &e.factors {
        let (va, vb) = (a.outer_valuation()?, b.outer_valuation()?);
        let ra = a.truncate_t(va + 1).shift(0, -va).truncate_t(1);
        let rb = b.truncate_t(vb + 1).shift(0, -vb).truncate_t(1);
        let term = ra.pow(vb, prec)?.mul(&rb.pow(-va, prec)?).scale(&minus_one_pow(k, va * vb));
        acc = acc.mul(&term.pow(*x, prec)?);
    }
    // Row 0 only; the t-precision marker carries no information here.
    let mut out = acc.clone();
    out.t_prec = INF;
    out.rows.retain(|&j, _| j == 0);
    Ok(out)
}

/// The u-valuation of the boundary.
pub fn unramified_exponent(e: &K2Elem) -> Result<i64> {
    e.check_units()?;
    let mut s = 0;
    for (a, b, x) in &e.factors {
        let (vba, vya, _) = vals(a)?;
        let (vbb, vyb, _) = vals(b)?;
        s += x * (vyb * vba - vya * vbb);
    }
    Ok(s)
}

/// Working parameters for pairing computations.
#[derive(Clone, Copy, Debug)]
pub struct PairConfig {
    pub prec: Precision,
    /// Retries with doubled precision before reporting `PrecisionTooLow`.
    pub max_doublings: u32,
    pub exec: Exec,
}

impl Default for PairConfig {
    fn default() -> Self {
        PairConfig { prec: Precision::default(), max_doublings: 4, exec: Exec::default() }
    }
}

/// `sum_k e_k dlog f_k ^ dlog g_k` on Teichmuller lifts at p-adic precision s.
pub fn eta_lift(e: &K2Elem, s: u32, prec: Precision) -> Result<PadicLaurent2> {
    e.check_units()?;
    let zq = Zq::new(&e.field, s);
    let mut acc = PadicLaurent2::zero(&zq);
    for (f, g, x) in &e.factors {
        let w = dlog_wedge(&f.lift_padic(s), &g.lift_padic(s), prec)?;
        acc = acc.add(&w.a.scale(&zq.from_i64(*x)));
    }
    Ok(acc)
}

pub(crate) fn is_precision_error(e: &Error) -> bool {
    matches!(e, Error::PrecisionTooLow(_) | Error::CoefficientOutsidePrecision { .. })
}

/// Precision large enough to read the residue against poles of the given size.
fn prec_for(base: Precision, g: &[Laurent2], p: u32) -> Precision {
    let m = g.len().max(1) as u32;
    let scale = (p as i64).pow(m - 1);
    let mut tneed = 0i64;
    let mut uneed = 0i64;
    for x in g {
        if let Some((&j, _)) = x.rows.iter().next() {
            tneed = tneed.max(-j * scale);
        }
        for (i, _, _) in x.terms() {
            uneed = uneed.max(i.abs() * scale);
        }
    }
    Precision::new(base.t.max(tneed + 4), base.u.max(uneed + 4))
}

/// Untraced pairing values in W_m(F_q).
pub fn witt_pair_local_untraced(e: &K2Elem, g: &LWitt, cfg: &PairConfig) -> Result<WittVec<FieldSpec>> {
    let k = &e.field;
    let m = g.len();
    if m == 0 {
        return Ok(WittVec::zero(k.p(), k, 0));
    }
    let s = m as u32 + 2;
    let mut prec = prec_for(cfg.prec, &g.comps, k.p());
    let mut tries = 0;
    loop {
        match pair_attempt(e, &g.comps, s, prec) {
            Err(err) if is_precision_error(&err) && tries < cfg.max_doublings => {
                tries += 1;
                prec = prec.doubled();
            }
            other => return other,
        }
    }
}

fn pair_attempt(e: &K2Elem, g: &[Laurent2], s: u32, prec: Precision) -> Result<WittVec<FieldSpec>> {
    let k = &e.field;
    let p = k.p();
    let zq = Zq::new(k, s);
    let m = g.len();
    let eta = eta_lift(e, s, prec)?;
    let lifts: Vec<PadicLaurent2> = g.iter().map(|x| x.lift_padic(s)).collect();
    let mut ghosts = Vec::with_capacity(m);
    for kk in 0..m {
        let mut acc = zq.zero();
        for (j, gj) in lifts.iter().enumerate().take(kk + 1) {
            let pw = gj.pow((p as i64).pow((kk - j) as u32), prec)?;
            let r = pw.mul_coeff_at(&eta, -1, -1)?;
            acc = zq.add(&acc, &zq.mul(&zq.from_i64((p as i64).pow(j as u32)), &r));
        }
        ghosts.push(acc);
    }
    let w = unghost(p, &zq, &ghosts)?;
    Ok(WittVec::new(p, k, w.comps.iter().map(|x| zq.reduce(x)).collect()))
}

/// The Witt pairing `(e | g]` in W_m(F_p), components in [0, p).
pub fn witt_pair_local(e: &K2Elem, g: &LWitt, cfg: &PairConfig) -> Result<Vec<u32>> {
    Ok(witt_trace(&witt_pair_local_untraced(e, g, cfg)?))
}

/// Witt vector with Laurent2 components.
pub fn lwitt(field: &FieldSpec, comps: Vec<Laurent2>, prec: Precision) -> LWitt {
    WittVec::new(field.p(), &SeriesRing { base: field.clone(), prec }, comps)
}

/// Default u-window for test vectors and decompositions.
pub const DEFAULT_U_WINDOW: i64 = 12;

/// Parameters of the level-bounded equivalence test.
#[derive(Clone, Copy, Debug)]
pub struct EquivConfig {
    /// t-adic level N: test vectors have t-pole at most N - 1.
    pub level: i64,
    /// Test vectors have u-exponent in [-u_window, u_window].
    pub u_window: i64,
    pub exec: Exec,
}

impl EquivConfig {
    pub fn new(level: i64) -> Self {
        EquivConfig { level, u_window: DEFAULT_U_WINDOW, exec: Exec::default() }
    }
}

/// The length-m test vector `(c u^-a t^-b, 0, ...)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TestVector {
    pub c: Fq,
    pub a: i64,
    pub b: i64,
    pub m: usize,
}

/// Why two elements were found inequivalent.
#[derive(Clone, Debug, PartialEq)]
pub enum Witness {
    Boundary,
    /// Tame symbol against u, t or zeta differs.
    Tame(&'static str),
    Pairing(TestVector, Vec<u32>),
}

/// All test vectors at the configured level, in a fixed order.
pub fn test_vectors(k: &FieldSpec, cfg: &EquivConfig) -> Vec<TestVector> {
    let p = k.p() as i64;
    let mut out = vec![];
    for m in 1..=2usize {
        let scale = if m == 1 { 1 } else { p };
        for b in 0..cfg.level {
            if scale * b > cfg.level - 1 {
                break;
            }
            for a in -cfg.u_window..=cfg.u_window {
                if scale * a.abs() > cfg.u_window || (b == 0 && a <= 0) {
                    continue;
                }
                for &c in &k.fp_basis() {
                    out.push(TestVector { c, a, b, m });
                }
            }
        }
    }
    out
}

/// `eta` coefficients at the requested positions, raising precision until they are all known.
fn eta_coeffs(e: &K2Elem, s: u32, need: &[(i64, i64)], base: Precision) -> Result<BTreeMap<(i64, i64), <Zq as Ring>::Elem>> {
    let mut prec = base;
    for attempt in 0..=5 {
        let got = eta_lift(e, s, prec).and_then(|eta| {
            need.iter().map(|&(i, j)| Ok(((i, j), eta.coeff(i, j)?))).collect::<Result<BTreeMap<_, _>>>()
        });
        match got {
            Err(err) if is_precision_error(&err) && attempt < 5 => prec = prec.doubled(),
            other => return other,
        }
    }
    unreachable!()
}

/// Evaluates every test vector on `d`; returns the first one with a nonzero pairing.
fn pairing_witness(d: &K2Elem, cfg: &EquivConfig) -> Result<Option<Witness>> {
    let k = &d.field;
    let p = k.p() as i64;
    let tvs = test_vectors(k, cfg);
    let mut need = vec![];
    for tv in &tvs {
        need.push((tv.a - 1, tv.b - 1));
        if tv.m == 2 {
            need.push((p * tv.a - 1, p * tv.b - 1));
        }
    }
    need.sort();
    need.dedup();
    let shift: i64 = d.factors.iter().map(|(f, g, _)| {
        let v = |x: &Laurent2| x.outer_valuation().unwrap_or(0).abs() + x.bar_valuation().unwrap_or(0).abs();
        v(f) + v(g)
    }).max().unwrap_or(0);
    let s = 3;
    let base = Precision::new(cfg.level * p + shift + 4, cfg.u_window * 2 + shift + 4);
    let eta = eta_coeffs(d, s, &need, base)?;
    let zq = Zq::new(k, s);
    let vals = cfg.exec.try_map(tvs, |tv| -> Result<Option<Witness>> {
        let c = zq.teich(tv.c);
        let x0 = zq.mul(&c, &eta[&(tv.a - 1, tv.b - 1)]);
        let w = if tv.m == 1 {
            vec![k.trace_abs(zq.reduce(&x0))]
        } else {
            let x1 = zq.mul(&zq.pow(&c, p as u64), &eta[&(p * tv.a - 1, p * tv.b - 1)]);
            let wv = unghost(k.p(), &zq, &[x0, x1])?;
            witt_trace(&WittVec::new(k.p(), k, wv.comps.iter().map(|x| zq.reduce(x)).collect()))
        };
        Ok(if w.iter().any(|&x| x != 0) { Some(Witness::Pairing(tv, w)) } else { None })
    })?;
    Ok(vals.into_iter().flatten().next())
}

/// First invariant separating `a` from `b` at the configured level, if any.
pub fn k2_equiv_witness(a: &K2Elem, b: &K2Elem, cfg: &EquivConfig) -> Result<Option<Witness>> {
    if !a.field.ptr_eq(&b.field) && a.field != b.field {
        return Err(Error::FieldMismatch);
    }
    let d = a.div(b);
    d.check_units()?;
    let k = &d.field;
    let bp = Precision::new(cfg.level + 4, cfg.u_window + 4);
    if !boundary(&d, bp)?.agrees_with(&Laurent2::one(k)) {
        return Ok(Some(Witness::Boundary));
    }
    for (name, h) in [("u", Laurent2::u(k)), ("t", Laurent2::t(k)), ("zeta", Laurent2::constant(k, k.zeta()))] {
        if tame_k2(&d, &h)? != 1 {
            return Ok(Some(Witness::Tame(name)));
        }
    }
    pairing_witness(&d, cfg)
}

/// Level-bounded equivalence: boundary, tame data and all test-vector pairings of `a / b` vanish.
pub fn k2_equiv(a: &K2Elem, b: &K2Elem, level: i64) -> Result<bool> {
    k2_equiv_with(a, b, &EquivConfig::new(level))
}

pub fn k2_equiv_with(a: &K2Elem, b: &K2Elem, cfg: &EquivConfig) -> Result<bool> {
    Ok(k2_equiv_witness(a, b, cfg)?.is_none())
}

/// Basis decomposition of a K2 element modulo the level-N filtration.
#[derive(Clone, Debug, PartialEq)]
pub struct K2Basis {
    pub field: FieldSpec,
    /// Exponent of {u, t}.
    pub ut_exp: i64,
    /// Exponents of {zeta, u} and {zeta, t}, modulo q-1.
    pub zeta_u_exp: i64,
    pub zeta_t_exp: i64,
    /// `{1 + a u^i t^j, t}` terms, keyed by (i, j).
    pub e1_terms: BTreeMap<(i64, i64), Fq>,
    /// `{1 + a u^i t^j, u}` terms, keyed by (i, j).
    pub e2_terms: BTreeMap<(i64, i64), Fq>,
    pub level: i64,
}

impl K2Basis {
    /// The product of basis symbols this decomposition denotes.
    pub fn recompose(&self) -> K2Elem {
        let k = &self.field;
        let (u, t) = (Laurent2::u(k), Laurent2::t(k));
        let z = Laurent2::constant(k, k.zeta());
        let mut e = K2Elem::symbol_pow(&u, &t, self.ut_exp)
            .mul(&K2Elem::symbol_pow(&z, &u, self.zeta_u_exp))
            .mul(&K2Elem::symbol_pow(&z, &t, self.zeta_t_exp));
        for (slot, terms) in [(&t, &self.e1_terms), (&u, &self.e2_terms)] {
            for (&(i, j), &a) in terms {
                e = e.mul(&K2Elem::symbol(&Laurent2::one(k).add(&Laurent2::monomial(k, a, i, j)), slot));
            }
        }
        e
    }

    pub fn to_json(&self) -> serde_json::Value {
        let k = &self.field;
        let terms = |m: &BTreeMap<(i64, i64), Fq>| -> Vec<serde_json::Value> {
            m.iter().map(|(&(i, j), &a)| serde_json::json!({ "i": i, "j": j, "a": k.coeffs(a) })).collect()
        };
        serde_json::json!({
            "ut_exp": self.ut_exp,
            "zeta_u_exp": self.zeta_u_exp,
            "zeta_t_exp": self.zeta_t_exp,
            "e1_terms": terms(&self.e1_terms),
            "e2_terms": terms(&self.e2_terms),
            "level": self.level,
        })
    }
}

fn vp(mut x: i64, p: i64) -> u32 {
    if x == 0 {
        return u32::MAX;
    }
    let mut r = 0;
    while x % p == 0 {
        x /= p;
        r += 1;
    }
    r
}

/// Inverse of a unit modulo `m`.
fn inv_mod(a: i64, m: i64) -> i64 {
    let (mut r0, mut r1, mut s0, mut s1) = (a.rem_euclid(m), m, 1i64, 0i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    debug_assert_eq!(r0, 1);
    s0.rem_euclid(m)
}

/// State of the decomposition: the two slot accumulators and the explicit exponents.
struct Decomposer {
    k: FieldSpec,
    p: i64,
    level: i64,
    ucap: i64,
    /// p^R with p^R >= max(level, ucap + 1); principal units raised to it vanish modulo the cut.
    period: i64,
    e1: Laurent2,
    e2: Laurent2,
    ut: i64,
    zu: i64,
    zt: i64,
}

impl Decomposer {
    fn prec(&self) -> Precision {
        Precision::new(self.level + 1, self.ucap + 1)
    }
    fn cut(&self, x: &Laurent2) -> Laurent2 {
        x.truncate_t(self.level).truncate_u(self.ucap)
    }
    /// `x^e` for a principal unit, exponent reduced modulo the period.
    fn upow(&self, x: &Laurent2, e: i64) -> Result<Laurent2> {
        let e = e.rem_euclid(self.period);
        let mut acc = Laurent2::one(&self.k);
        let mut b = self.cut(x);
        let mut n = e;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.cut(&acc.mul(&b));
            }
            n >>= 1;
            if n > 0 {
                b = self.cut(&b.mul(&b));
            }
        }
        Ok(acc)
    }
    fn mul_into(&self, acc: &Laurent2, x: &Laurent2, e: i64) -> Result<Laurent2> {
        Ok(self.cut(&acc.mul(&self.upow(x, e)?)))
    }
    fn divide_out(&self, acc: &Laurent2, x: &Laurent2) -> Result<Laurent2> {
        Ok(self.cut(&acc.mul(&x.invert(self.prec())?)))
    }

    /// `{eps1, eps2}^e` for principal units via `{1+x, 1+y} = {1 + xy/(1+x), 1+y}^-1 {w, u}^-i {w, t}^-j`,
    /// `w = 1 + x(1+y)`; the leftover first arguments are collected into one accumulator.
    fn principal_pair(&mut self, eps1: &Laurent2, eps2: &Laurent2, e: i64) -> Result<()> {
        let k = self.k.clone();
        let eps2 = self.cut(eps2);
        let mut f = self.cut(eps1);
        while let Some((i, j, a)) = lowest_term(&f, self.level) {
            let x = Laurent2::monomial(&k, a, i, j);
            let w = self.cut(&Laurent2::one(&k).add(&x.mul(&eps2)));
            self.e2 = self.mul_into(&self.e2, &w, -i * e)?;
            self.e1 = self.mul_into(&self.e1, &w, -j * e)?;
            f = self.divide_out(&f, &w)?;
        }
        Ok(())
    }

    fn add_factor(&mut self, f: &Laurent2, g: &Laurent2, e: i64) -> Result<()> {
        let k = &self.k;
        let h = if self.p == 2 { 0 } else { (k.q() as i64 - 1) / 2 };
        let df = f.unit_decompose()?;
        let dg = g.unit_decompose()?;
        let (a1, i1, j1) = (df.zeta_exp as i64, df.u_exp, df.t_exp);
        let (a2, i2, j2) = (dg.zeta_exp as i64, dg.u_exp, dg.t_exp);
        self.zu += e * (a1 * i2 - a2 * i1 + h * i1 * i2);
        self.zt += e * (a1 * j2 - a2 * j1 + h * j1 * j2);
        self.ut += e * (i1 * j2 - j1 * i2);
        let (e1p, e2p) = (df.principal, dg.principal);
        self.e2 = self.mul_into(&self.e2, &e2p, -i1 * e)?;
        self.e1 = self.mul_into(&self.e1, &e2p, -j1 * e)?;
        self.e2 = self.mul_into(&self.e2, &e1p, i2 * e)?;
        self.e1 = self.mul_into(&self.e1, &e1p, j2 * e)?;
        self.principal_pair(&e1p, &e2p, e)
    }

    /// `c = num/den` in Z_p, reduced modulo a power of p large enough at t-level j.
    fn padic_ratio(&self, num: i64, den: i64, j: i64) -> i64 {
        let mut m = self.p;
        while m * j < self.level {
            m *= self.p;
        }
        (num.rem_euclid(m) * inv_mod(den, m)).rem_euclid(m)
    }

    /// Peels both accumulators in filtration order, moving each term into the slot its type prescribes.
    fn peel(&mut self) -> Result<K2Basis> {
        let k = self.k.clone();
        let mut e1_terms = BTreeMap::new();
        let mut e2_terms = BTreeMap::new();
        loop {
            let l1 = lowest_term(&self.e1, self.level);
            let l2 = lowest_term(&self.e2, self.level);
            let pos = match (l1, l2) {
                (None, None) => break,
                (Some((i, j, _)), None) | (None, Some((i, j, _))) => (j, i),
                (Some((i1, j1, _)), Some((i2, j2, _))) => (j1, i1).min((j2, i2)),
            };
            let (j, i) = pos;
            let r = vp(i, self.p).min(vp(j, self.p));
            let pr = self.p.pow(r);
            let (i0, j0) = (i / pr, j / pr);
            let t_type = j == 0 || i0 % self.p != 0;
            let at = |x: &Laurent2| x.coeff(i, j).unwrap_or(0);
            let z = |a: Fq| Laurent2::one(&k).add(&Laurent2::monomial(&k, a, i, j));
            if t_type {
                let a = at(&self.e2);
                if a != 0 {
                    self.e2 = self.divide_out(&self.e2, &z(a))?;
                    if j > 0 {
                        let c = self.padic_ratio(-j0, i0, j);
                        self.e1 = self.mul_into(&self.e1, &z(a), c)?;
                    }
                }
                let a = at(&self.e1);
                if a != 0 {
                    self.e1 = self.divide_out(&self.e1, &z(a))?;
                    e1_terms.insert((i, j), a);
                }
            } else {
                let a = at(&self.e1);
                if a != 0 {
                    self.e1 = self.divide_out(&self.e1, &z(a))?;
                    let c = self.padic_ratio(-i0, j0, j);
                    self.e2 = self.mul_into(&self.e2, &z(a), c)?;
                }
                let a = at(&self.e2);
                if a != 0 {
                    self.e2 = self.divide_out(&self.e2, &z(a))?;
                    e2_terms.insert((i, j), a);
                }
            }
        }
        let qm1 = k.q() as i64 - 1;
        Ok(K2Basis {
            field: k,
            ut_exp: self.ut,
            zeta_u_exp: self.zu.rem_euclid(qm1),
            zeta_t_exp: self.zt.rem_euclid(qm1),
            e1_terms,
            e2_terms,
            level: self.level,
        })
    }
}

/// Lowest known nonconstant term of a principal unit in (t, then u) order, below t-level `level`.
fn lowest_term(x: &Laurent2, level: i64) -> Option<(i64, i64, Fq)> {
    for (&j, row) in x.rows.range(..level) {
        for (i, &c) in row.iter() {
            if c != 0 && (i, j) != (0, 0) {
                return Some((i, j, c));
            }
        }
    }
    None
}

/// Decomposition with an explicit u-cut.
pub fn k2_decompose_with(e: &K2Elem, level: i64, ucap: i64) -> Result<K2Basis> {
    e.check_units()?;
    let k = &e.field;
    for (f, g, _) in &e.factors {
        for x in [f, g] {
            let rel = x.t_prec.saturating_sub(x.outer_valuation()?);
            if rel < level {
                return Err(Error::LevelExceedsPrecision { level, prec: rel });
            }
        }
    }
    let p = k.p() as i64;
    let mut period = p;
    while period < level.max(ucap + 1) {
        period *= p;
    }
    let mut d = Decomposer {
        k: k.clone(),
        p,
        level,
        ucap,
        period,
        e1: Laurent2::one(k),
        e2: Laurent2::one(k),
        ut: 0,
        zu: 0,
        zt: 0,
    };
    for (f, g, x) in &e.factors {
        d.add_factor(f, g, *x)?;
    }
    d.peel()
}

/// Decomposes `e` into basis symbols modulo level N, widening the u-cut until the recomposition
/// is equivalent to `e` at that level.
pub fn k2_decompose(e: &K2Elem, level: i64) -> Result<K2Basis> {
    let cfg = EquivConfig::new(level);
    let mut ucap = cfg.u_window + 2;
    for _ in 0..4 {
        let b = k2_decompose_with(e, level, ucap)?;
        if k2_equiv_with(e, &b.recompose(), &cfg)? {
            return Ok(b);
        }
        ucap += cfg.u_window;
    }
    Err(Error::LevelExceedsPrecision { level, prec: ucap })
}

/// Parameters of the three filtration identities.
#[derive(Clone, Debug)]
pub enum AppendixParams {
    /// `{1 + d^p t^k, t} = {1 + d^p t^k, d}^p` modulo level k+1.
    One { delta: Laurent2, k: i64 },
    /// `{1 - i v u^i t^j, u} = {1 + j v u^i t^j, t}` modulo level j+1.
    Two { v: Fq, i: i64, j: i64 },
    /// `{1 + f u^i t^l, 1 + g u^j} = {1 + f u^i (j g u^j / (1 + g u^j)) t^l, u}` modulo level l+1.
    Three { f: Fq, g: Fq, i: i64, j: i64, l: i64 },
}

impl AppendixParams {
    pub fn which(&self) -> u8 {
        match self {
            AppendixParams::One { .. } => 1,
            AppendixParams::Two { .. } => 2,
            AppendixParams::Three { .. } => 3,
        }
    }
    /// The filtration level at which the identity is stated.
    pub fn level(&self) -> i64 {
        match self {
            AppendixParams::One { k, .. } => k + 1,
            AppendixParams::Two { j, .. } => j + 1,
            AppendixParams::Three { l, .. } => l + 1,
        }
    }
}

/// Both sides of an identity.
pub fn appendix_sides(field: &FieldSpec, params: &AppendixParams, prec: Precision) -> Result<(K2Elem, K2Elem)> {
    let k = field;
    let one = Laurent2::one(k);
    let (u, t) = (Laurent2::u(k), Laurent2::t(k));
    Ok(match params {
        AppendixParams::One { delta, k: kk } => {
            let x = one.add(&delta.pow(k.p() as i64, prec)?.shift(0, *kk));
            (K2Elem::symbol(&x, &t), K2Elem::symbol_pow(&x, delta, k.p() as i64))
        }
        AppendixParams::Two { v, i, j } => {
            let lhs = one.sub(&Laurent2::monomial(k, k.mul(k.from_int(*i), *v), *i, *j));
            let rhs = one.add(&Laurent2::monomial(k, k.mul(k.from_int(*j), *v), *i, *j));
            (K2Elem::symbol(&lhs, &u), K2Elem::symbol(&rhs, &t))
        }
        AppendixParams::Three { f, g, i, j, l } => {
            let gu = Laurent2::monomial(k, *g, *j, 0);
            let y = one.add(&gu);
            let lhs = K2Elem::symbol(&one.add(&Laurent2::monomial(k, *f, *i, *l)), &y);
            let frac = gu.scale(&k.from_int(*j)).div(&y, prec)?;
            let x = one.add(&frac.mul(&Laurent2::monomial(k, *f, *i, *l)));
            (lhs, K2Elem::symbol(&x, &u))
        }
    })
}

/// Builds both sides and tests them with `k2_equiv` at `level`, which must be the identity's own level.
pub fn verify_appendix_identity(field: &FieldSpec, params: &AppendixParams, level: i64) -> Result<bool> {
    if level != params.level() {
        return Err(Error::Invalid(format!("identity {} is stated at level {}, got {level}", params.which(), params.level())));
    }
    let cfg = EquivConfig::new(level);
    let prec = Precision::new(level + 4, 2 * cfg.u_window + 8);
    let (a, b) = appendix_sides(field, params, prec)?;
    k2_equiv_with(&a, &b, &cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k(t: &str) -> FieldSpec {
        FieldSpec::parse(t).unwrap()
    }
    fn mono(f: &FieldSpec, c: Fq, i: i64, j: i64) -> Laurent2 {
        Laurent2::monomial(f, c, i, j)
    }

    #[test]
    fn tame_examples() {
        let f4 = k("2^2");
        let z = f4.zeta();
        let (zz, u, t) = (Laurent2::constant(&f4, z), Laurent2::u(&f4), Laurent2::t(&f4));
        assert_eq!(tame_symbol_det(&zz, &u, &t).unwrap(), z);
        assert_eq!(tame_symbol_signed(&zz, &u, &t).unwrap(), z);
        assert_eq!(tame_symbol_signed_with(&zz, &u, &t, Orientation::Literal).unwrap(), f4.inv(z).unwrap());
        assert_eq!(tame_symbol_det(&u, &t, &zz).unwrap(), z);
        let f2 = k("2");
        let u2 = Laurent2::u(&f2);
        assert_eq!(tame_symbol_det(&u2, &u2, &Laurent2::one(&f2)).unwrap(), 1);
        let one = Laurent2::one(&f4);
        let eps = one.add(&mono(&f4, 1, 1, 1));
        assert_eq!(tame_symbol_det(&eps, &one.add(&mono(&f4, z, 2, 0)), &one.add(&u)).unwrap(), 1);
        // Steinberg
        let f = mono(&f4, z, 1, 0).add(&mono(&f4, 1, 0, 1));
        let g = one.sub(&f);
        assert_eq!(tame_symbol_det(&f, &g, &t).unwrap(), 1);
        assert_eq!(tame_symbol_signed(&f, &g, &u).unwrap(), 1);
    }

    #[test]
    fn zero_argument() {
        let f3 = k("3");
        let z = Laurent2::zero(&f3);
        let u = Laurent2::u(&f3);
        assert_eq!(tame_symbol_det(&z, &u, &u).unwrap_err(), Error::ZeroArgument);
    }

    #[test]
    fn boundary_examples() {
        let f3 = k("3");
        let p = Precision::default();
        let (u, t) = (Laurent2::u(&f3), Laurent2::t(&f3));
        assert_eq!(boundary(&K2Elem::symbol(&u, &t), p).unwrap(), u);
        let a = Laurent2::one(&f3).add(&u);
        let b = Laurent2::constant(&f3, 2).add(&mono(&f3, 1, 0, 1));
        assert_eq!(boundary(&K2Elem::symbol(&a, &b), p).unwrap(), Laurent2::one(&f3));
        assert_eq!(boundary(&K2Elem::symbol(&t, &t), p).unwrap(), Laurent2::constant(&f3, 2));
    }

    #[test]
    fn unramified_examples() {
        let f3 = k("3");
        let (u, t) = (Laurent2::u(&f3), Laurent2::t(&f3));
        assert_eq!(unramified_exponent(&K2Elem::symbol(&u, &t)).unwrap(), 1);
        assert_eq!(unramified_exponent(&K2Elem::symbol(&Laurent2::constant(&f3, 2), &t)).unwrap(), 0);
        let eps = Laurent2::one(&f3).add(&mono(&f3, 1, -3, 1));
        assert_eq!(unramified_exponent(&K2Elem::symbol(&eps, &t)).unwrap(), 0);
    }

    #[test]
    fn witt_pair_examples() {
        let cfg = PairConfig::default();
        for fs in ["2", "3", "2^2", "3^2"] {
            let f = k(fs);
            let (u, t) = (Laurent2::u(&f), Laurent2::t(&f));
            for c in f.elements() {
                let g = lwitt(&f, vec![Laurent2::constant(&f, c)], cfg.prec);
                assert_eq!(witt_pair_local(&K2Elem::symbol(&u, &t), &g, &cfg).unwrap(), vec![f.trace_abs(c)]);
                for a in f.elements() {
                    let e = K2Elem::symbol(&Laurent2::one(&f).add(&mono(&f, a, 1, 1)), &t);
                    let g = lwitt(&f, vec![mono(&f, c, -1, -1)], cfg.prec);
                    assert_eq!(witt_pair_local(&e, &g, &cfg).unwrap(), vec![f.trace_abs(f.mul(a, c))]);
                }
            }
        }
    }

    #[test]
    fn witt_pair_steinberg_m3() {
        let f2 = k("2");
        let cfg = PairConfig::default();
        let x = mono(&f2, 1, 1, 0).add(&mono(&f2, 1, -1, 1));
        let e = K2Elem::symbol(&x, &Laurent2::one(&f2).sub(&x));
        let g = lwitt(&f2, vec![mono(&f2, 1, -1, -1), mono(&f2, 1, -2, -1), mono(&f2, 1, 0, -1)], cfg.prec);
        assert_eq!(witt_pair_local(&e, &g, &cfg).unwrap(), vec![0, 0, 0]);
    }
    #[test]
    fn equiv_examples() {
        for fs in ["2", "3", "2^2", "5"] {
            let f = k(fs);
            let (u, t) = (Laurent2::u(&f), Laurent2::t(&f));
            let one = Laurent2::one(&f);
            let a = K2Elem::symbol(&one.sub(&mono(&f, 1, 1, 1)), &u);
            let b = K2Elem::symbol(&one.add(&mono(&f, 1, 1, 1)), &t);
            assert!(k2_equiv(&a, &a, 3).unwrap());
            assert!(k2_equiv(&a, &b, 2).unwrap(), "{fs}");
            let w = k2_equiv_witness(&b, &K2Elem::trivial(&f), &EquivConfig::new(2)).unwrap();
            assert!(matches!(w, Some(Witness::Pairing(TestVector { a: 1, b: 1, m: 1, .. }, _))), "{w:?}");
            assert!(!k2_equiv(&K2Elem::symbol(&u, &t), &K2Elem::trivial(&f), 1).unwrap());
        }
    }

    #[test]
    fn decompose_examples() {
        for fs in ["2", "3", "2^2", "5"] {
            let f = k(fs);
            let (u, t) = (Laurent2::u(&f), Laurent2::t(&f));
            let one = Laurent2::one(&f);
            let b = k2_decompose(&K2Elem::symbol(&u, &t), 3).unwrap();
            assert_eq!(b.ut_exp, 1);
            assert!(b.e1_terms.is_empty() && b.e2_terms.is_empty() && b.zeta_u_exp == 0 && b.zeta_t_exp == 0);
            let b = k2_decompose(&K2Elem::symbol(&one.sub(&mono(&f, 1, 1, 1)), &u), 2).unwrap();
            assert_eq!(b.e1_terms.get(&(1, 1)), Some(&1), "{fs}");
            assert!(b.e2_terms.is_empty());
            let e = K2Elem::symbol(&one.add(&mono(&f, 1, 1, 1)), &u.mul(&u));
            let b = k2_decompose(&e, 3).unwrap();
            assert_eq!(b.e1_terms.get(&(1, 1)).copied().unwrap_or(0), f.from_int(-2), "{fs}");
            assert!(k2_equiv(&e, &b.recompose(), 3).unwrap());
        }
    }

    #[test]
    fn decompose_recomposes_randomized() {
        use crate::gen;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for fs in ["2", "3", "2^2"] {
            let f = k(fs);
            for _ in 0..6 {
                let a = gen::unit(&f, &mut rng, 2, 2, 2);
                let b = gen::unit(&f, &mut rng, 2, 2, 2);
                let e = K2Elem::symbol(&a, &b);
                for level in [1, 2, 3] {
                    let d = k2_decompose(&e, level).unwrap();
                    assert!(k2_equiv(&e, &d.recompose(), level).unwrap(), "{fs} {e} {level}");
                }
            }
        }
    }

    #[test]
    fn appendix_examples() {
        let f2 = k("2");
        assert!(verify_appendix_identity(&f2, &AppendixParams::Two { v: 1, i: 1, j: 1 }, 2).unwrap());
        assert!(verify_appendix_identity(&f2, &AppendixParams::One { delta: Laurent2::one(&f2), k: 1 }, 2).unwrap());
        assert!(verify_appendix_identity(&f2, &AppendixParams::Three { f: 1, g: 1, i: 1, j: 1, l: 1 }, 2).unwrap());
        assert!(verify_appendix_identity(&f2, &AppendixParams::Two { v: 1, i: 1, j: 1 }, 3).is_err());
    }
    mod props {
        use super::*;
        use crate::gen;
        use proptest::prelude::*;
        use rand::SeedableRng;
        use rand_chacha::ChaCha8Rng;

        const FIELDS: [&str; 5] = ["2", "3", "2^2", "5", "3^2"];

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(48))]

            #[test]
            fn tame_forms_agree(seed in any::<u64>(), fi in 0usize..5) {
                let f = k(FIELDS[fi]);
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let v: Vec<Laurent2> = (0..3).map(|_| gen::unit(&f, &mut rng, 2, 2, 2)).collect();
                prop_assert_eq!(tame_symbol_det(&v[0], &v[1], &v[2]).unwrap(), tame_symbol_signed(&v[0], &v[1], &v[2]).unwrap());
            }

            #[test]
            fn tame_multiplicative_and_steinberg(seed in any::<u64>(), fi in 0usize..5) {
                let f = k(FIELDS[fi]);
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let v: Vec<Laurent2> = (0..4).map(|_| gen::unit(&f, &mut rng, 2, 2, 2)).collect();
                let lhs = tame_symbol_det(&v[0].mul(&v[3]), &v[1], &v[2]).unwrap();
                let rhs = f.mul(tame_symbol_det(&v[0], &v[1], &v[2]).unwrap(), tame_symbol_det(&v[3], &v[1], &v[2]).unwrap());
                prop_assert_eq!(lhs, rhs);
                let lhs = tame_symbol_signed(&v[0], &v[1], &v[2].mul(&v[3])).unwrap();
                let rhs = f.mul(tame_symbol_signed(&v[0], &v[1], &v[2]).unwrap(), tame_symbol_signed(&v[0], &v[1], &v[3]).unwrap());
                prop_assert_eq!(lhs, rhs);
                let x = v[0].clone();
                let one_minus = Laurent2::one(&f).sub(&x);
                if one_minus.is_zero() { return Ok(()); }
                prop_assert_eq!(tame_symbol_det(&x, &one_minus, &v[1]).unwrap(), 1);
                prop_assert_eq!(tame_symbol_signed(&x, &one_minus, &v[1]).unwrap(), 1);
            }

            #[test]
            fn boundary_kills_integral_units(seed in any::<u64>(), fi in 0usize..5) {
                let f = k(FIELDS[fi]);
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let mk = |rng: &mut ChaCha8Rng| gen::principal_unit(&f, rng, 3, 2, 2).scale(&gen::nonzero(&f, rng));
                let (a, b) = (mk(&mut rng), mk(&mut rng));
                let d = boundary(&K2Elem::symbol(&a, &b), Precision::default()).unwrap();
                prop_assert!(d.agrees_with(&Laurent2::one(&f)));
            }

            #[test]
            fn integral_symbols_pair_to_zero(seed in any::<u64>(), fi in 0usize..5) {
                let f = k(FIELDS[fi]);
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let mk = |rng: &mut ChaCha8Rng| gen::principal_unit(&f, rng, 3, 2, 2).scale(&gen::nonzero(&f, rng));
                let integral = |x: &Laurent2| x.terms().all(|(i, j, _)| j > 0 || i >= 0);
                let (a, b) = (mk(&mut rng), mk(&mut rng));
                prop_assume!(integral(&a) && integral(&b));
                let h = gen::laurent_poly(&f, &mut rng, 3, 0, 0, 2);
                let h = Laurent2::from_terms(&f, h.terms().filter(|(i, _, _)| *i >= 0).map(|(i, j, c)| (i, j, *c)));
                let cfg = PairConfig::default();
                let v = witt_pair_local(&K2Elem::symbol(&a, &b), &lwitt(&f, vec![h], cfg.prec), &cfg).unwrap();
                prop_assert_eq!(v, vec![0]);
            }
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(16))]

            #[test]
            fn decomposition_recomposes(seed in any::<u64>(), fi in 0usize..5, level in 1i64..4) {
                let f = k(FIELDS[fi]);
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let a = gen::unit(&f, &mut rng, 2, 2, 2);
                let b = gen::unit(&f, &mut rng, 2, 2, 2);
                let e = K2Elem::symbol(&a, &b);
                let d = k2_decompose(&e, level).unwrap();
                prop_assert!(k2_equiv(&e, &d.recompose(), level).unwrap());
            }
        }
    }
}
