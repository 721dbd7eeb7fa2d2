//! Places of F_q(u) on the projective u-line and coefficientwise expansion there.

use crate::error::{Error, Result};
use crate::ff::{make_field, Embedding, FieldSpec, Fq};
use crate::poly::Poly;
use crate::rational::{RatFunc, RatU};
use crate::series::{Laurent2, Precision};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum PlaceKind {
    /// Zero locus of a monic irreducible `pi(u)`.
    Finite(Poly),
    Infinity,
}

/// A closed point of the projective u-line over F_q.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CurvePlace {
    pub kind: PlaceKind,
    pub residue_degree: u32,
}

impl CurvePlace {
    pub fn finite(pi: Poly) -> Result<CurvePlace> {
        if !pi.is_irreducible() {
            return Err(Error::Invalid(format!("{} is not irreducible", pi.to_string_in("u"))));
        }
        let pi = pi.monic();
        let d = pi.deg() as u32;
        Ok(CurvePlace { kind: PlaceKind::Finite(pi), residue_degree: d })
    }
    pub fn infinity() -> CurvePlace {
        CurvePlace { kind: PlaceKind::Infinity, residue_degree: 1 }
    }
    pub fn label(&self) -> String {
        match &self.kind {
            PlaceKind::Finite(pi) => pi.to_string_in("u"),
            PlaceKind::Infinity => "inf".into(),
        }
    }
    fn sort_key(&self) -> (u8, i64, Vec<Fq>) {
        match &self.kind {
            PlaceKind::Finite(pi) => {
                let (d, c) = pi.cmp_key();
                (0, d, c)
            }
            PlaceKind::Infinity => (1, 0, vec![]),
        }
    }
    /// Order of a rational function of u at this place.
    pub fn ord(&self, r: &RatU) -> i64 {
        match &self.kind {
            PlaceKind::Finite(pi) => r.ord_at(pi),
            PlaceKind::Infinity => r.ord_at_infinity(),
        }
    }
}

impl fmt::Display for CurvePlace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}

/// Residue field k(x) with its embedding of the base field (`None` when k(x) = F_q).
#[derive(Clone, Debug)]
pub struct ResidueField {
    pub field: FieldSpec,
    pub emb: Option<Embedding>,
}

impl ResidueField {
    pub fn base(k: &FieldSpec) -> Self {
        ResidueField { field: k.clone(), emb: None }
    }
    pub fn extension(k: &FieldSpec, d: u32) -> Result<Self> {
        if d == 1 {
            return Ok(Self::base(k));
        }
        let big = make_field(k.p() as u64, k.n() * d, None)?;
        let emb = Embedding::new(k, &big)?;
        Ok(ResidueField { field: big, emb: Some(emb) })
    }
    pub fn image(&self, a: Fq) -> Fq {
        self.emb.as_ref().map_or(a, |e| e.image(a))
    }
    /// Norm down to the base field.
    pub fn norm(&self, a: Fq) -> Fq {
        self.emb.as_ref().map_or(a, |e| e.norm(a))
    }
}

fn factor_into(p: &Poly, out: &mut Vec<Poly>, rng: &mut ChaCha8Rng) {
    if p.is_zero() || p.deg() < 1 {
        return;
    }
    for (f, _) in p.factor(rng) {
        if !out.contains(&f) {
            out.push(f);
        }
    }
}

/// Every finite place dividing a u-coefficient of a numerator or denominator, then infinity.
pub fn list_places(inputs: &[RatFunc]) -> Vec<CurvePlace> {
    list_places_seeded(inputs, 0)
}

/// As [`list_places`], with an explicit seed for the factorization. The result does not depend on it.
pub fn list_places_seeded(inputs: &[RatFunc], seed: u64) -> Vec<CurvePlace> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut polys = vec![];
    for f in inputs {
        for c in f.num.c.iter().chain(f.den.c.iter()) {
            factor_into(c, &mut polys, &mut rng);
        }
    }
    let mut places: Vec<CurvePlace> = polys
        .into_iter()
        .map(|pi| CurvePlace { residue_degree: pi.deg() as u32, kind: PlaceKind::Finite(pi) })
        .collect();
    places.push(CurvePlace::infinity());
    places.sort_by_key(|x| x.sort_key());
    places
}

/// Expansion engine for one place.
pub struct PlaceExpander {
    pub place: CurvePlace,
    pub residue: ResidueField,
    /// `u` as a series in the local parameter, with its u-precision.
    u_series: Option<Laurent2>,
    u_prec: i64,
}

fn row(field: &FieldSpec, terms: impl IntoIterator<Item = (i64, Fq)>) -> Laurent2 {
    Laurent2::from_terms(field, terms.into_iter().map(|(i, a)| (i, 0, a)))
}

impl PlaceExpander {
    pub fn new(k: &FieldSpec, place: &CurvePlace, u_prec: i64) -> Result<Self> {
        let residue = ResidueField::extension(k, place.residue_degree)?;
        let mut ex = PlaceExpander { place: place.clone(), residue, u_series: None, u_prec };
        ex.u_series = match &place.kind {
            PlaceKind::Infinity => None,
            PlaceKind::Finite(pi) => Some(ex.local_u(pi)?),
        };
        Ok(ex)
    }

    /// Root-of-`pi` lift: the series U(s) with pi(U(s)) = s.
    fn local_u(&self, pi: &Poly) -> Result<Laurent2> {
        let big = &self.residue.field;
        let img: Vec<Fq> = pi.c.iter().map(|&a| self.residue.image(a)).collect();
        let ev = |x: Fq| img.iter().rev().fold(0, |acc, &c| big.add(big.mul(acc, x), c));
        let theta = big.elements().find(|&x| ev(x) == 0).ok_or(Error::NotASubfield)?;
        let s = row(big, [(1, 1)]);
        if pi.deg() == 1 {
            return Ok(row(big, [(0, theta)]).add(&s));
        }
        let dpi: Vec<Fq> = pi.derivative().c.iter().map(|&a| self.residue.image(a)).collect();
        let d_theta = dpi.iter().rev().fold(0, |acc, &c| big.add(big.mul(acc, theta), c));
        let c = big.inv(d_theta).ok_or(Error::ZeroDivisor)?;
        let mut u = row(big, [(0, theta)]).truncate_u(self.u_prec);
        for _ in 0..=self.u_prec {
            let val = self.horner(&img, &u).sub(&s);
            u = u.sub(&val.scale(&c)).truncate_u(self.u_prec);
        }
        Ok(u)
    }

    fn horner(&self, coeffs: &[Fq], x: &Laurent2) -> Laurent2 {
        let big = &self.residue.field;
        let mut acc = Laurent2::zero(big);
        for &a in coeffs.iter().rev() {
            acc = acc.mul(x).add(&row(big, [(0, a)]));
            if !acc.is_exact() {
                acc = acc.truncate_u(self.u_prec);
            }
        }
        acc
    }

    fn poly(&self, p: &Poly) -> Laurent2 {
        let big = &self.residue.field;
        match &self.u_series {
            None => row(big, p.c.iter().enumerate().map(|(i, &a)| (-(i as i64), self.residue.image(a)))),
            Some(u) => {
                let img: Vec<Fq> = p.c.iter().map(|&a| self.residue.image(a)).collect();
                self.horner(&img, u)
            }
        }
    }

    /// A rational function of u as a Laurent series in the local parameter.
    pub fn ratu(&self, r: &RatU) -> Result<Laurent2> {
        let n = self.poly(&r.num);
        if r.is_poly() {
            return Ok(n);
        }
        n.div(&self.poly(&r.den), Precision::new(1, self.u_prec))
    }

    /// Coefficientwise expansion of `f` with `t_terms` t-coefficients.
    pub fn expand(&self, f: &RatFunc, t_terms: i64) -> Result<Laurent2> {
        let big = &self.residue.field;
        if f.is_zero() {
            return Ok(Laurent2::zero(big));
        }
        let exact_t = f.den.c.len() == f.den.t_ord() + 1;
        let (v, coeffs) = if exact_t {
            let v = f.num.t_ord() as i64 - f.den.t_ord() as i64;
            f.t_coeffs(f.num.deg_t() - f.den.t_ord() as i64 + 1).map(|(_, c)| (v, c))?
        } else {
            f.t_coeffs(f.num.t_ord() as i64 - f.den.t_ord() as i64 + t_terms)?
        };
        let mut acc = Laurent2::zero(big);
        for (m, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                acc = acc.add(&self.ratu(c)?.shift(0, v + m as i64));
            }
        }
        if !exact_t {
            acc = acc.add(&Laurent2::big_o_t(big, v + coeffs.len() as i64));
        }
        Ok(acc)
    }
}

/// One-shot expansion of `f` at `x` with `prec.t` t-coefficients and u-precision `prec.u`.
pub fn expand_at_place(f: &RatFunc, x: &CurvePlace, prec: Precision) -> Result<Laurent2> {
    if prec.t < 1 || prec.u < 1 {
        return Err(Error::PrecisionTooLow("expansion precision must be positive".into()));
    }
    PlaceExpander::new(f.field(), x, prec.u)?.expand(f, prec.t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k(t: &str) -> FieldSpec {
        FieldSpec::parse(t).unwrap()
    }

    #[test]
    fn place_lists() {
        let f2 = k("2");
        let u = RatFunc::u(&f2);
        let labels = |v: Vec<CurvePlace>| v.iter().map(|x| x.label()).collect::<Vec<_>>();
        assert_eq!(labels(list_places(&[u.clone()])), ["u", "inf"]);
        assert_eq!(labels(list_places(&[u.mul(&u).add(&u)])), ["u", "u + 1", "inf"]);
        assert_eq!(labels(list_places(&[RatFunc::constant(&f2, 1)])), ["inf"]);
    }

    #[test]
    fn expansions() {
        let f2 = k("2");
        let u = RatFunc::u(&f2);
        let one = RatFunc::constant(&f2, 1);
        let at_u = CurvePlace::finite(Poly::x(&f2)).unwrap();
        let e = expand_at_place(&u, &at_u, Precision::new(4, 4)).unwrap();
        assert_eq!(e, Laurent2::u(&f2));
        let g = one.div(&one.sub(&u)).unwrap();
        let e = expand_at_place(&g, &at_u, Precision::new(4, 3)).unwrap();
        for i in 0..3 {
            assert_eq!(e.coeff(i, 0).unwrap(), 1);
        }
        assert!(e.coeff(3, 0).is_err());
        let e = expand_at_place(&u, &CurvePlace::infinity(), Precision::new(4, 4)).unwrap();
        assert_eq!(e, Laurent2::monomial(&f2, 1, -1, 0));
    }

    #[test]
    fn degree_two_place_parameter() {
        // pi(U(s)) = s at the place u^2 + u + 1 over F_2.
        let f2 = k("2");
        let pi = Poly::new(&f2, vec![1, 1, 1]);
        let x = CurvePlace::finite(pi.clone()).unwrap();
        let ex = PlaceExpander::new(&f2, &x, 8).unwrap();
        let f = RatFunc::from_ratu(&RatU::from_poly(pi));
        let e = ex.expand(&f, 4).unwrap();
        assert_eq!(e.truncate_u(8), Laurent2::u(&ex.residue.field).truncate_u(8));
        assert_eq!(ex.residue.field.q(), 4);
    }
}
