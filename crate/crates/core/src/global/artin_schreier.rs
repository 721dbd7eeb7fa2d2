//! Canonical representatives of F_q(u)((t)) modulo (Frob - 1) and constants.
//!
//! The part of nonnegative t-order is dropped (it is `h^p - h + const`). A coefficient at
//! an index divisible by p is split as `sum_r u^r g_r^p`; the `g_0^p t^k` piece is replaced
//! by `g_0 t^(k/p)`, so every surviving coefficient at such an index has `g_0 = 0`. For
//! polynomial coefficients this is the set of polynomials with no u-exponent divisible by p.

use crate::error::Result;
use crate::ff::FieldSpec;
use crate::rational::{RatFunc, RatU};
use serde_json::json;
use std::collections::BTreeMap;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalASRep {
    pub field: FieldSpec,
    /// Index k < 0 -> coefficient f_k; zero coefficients are absent.
    pub terms: BTreeMap<i64, RatU>,
}

impl CanonicalASRep {
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `sum f_k t^k`.
    pub fn recompose(&self) -> RatFunc {
        let mut acc = RatFunc::constant(&self.field, 0);
        for (&k, c) in &self.terms {
            acc = acc.add(&RatFunc::from_ratu(c).shift_t(k));
        }
        acc
    }

    /// For each index divisible by p: whether its coefficient lies in the representative set.
    pub fn constraint_flags(&self) -> BTreeMap<i64, bool> {
        let p = self.field.p() as i64;
        self.terms
            .iter()
            .filter(|(k, _)| *k % p == 0)
            .map(|(&k, c)| (k, c.p_decompose()[0].is_zero()))
            .collect()
    }

    /// True when some coefficient has a nonconstant denominator.
    pub fn has_rational_coefficients(&self) -> bool {
        self.terms.values().any(|c| !c.is_poly())
    }

    pub fn to_json(&self) -> serde_json::Value {
        let flags = self.constraint_flags();
        let terms: Vec<_> = self
            .terms
            .iter()
            .map(|(k, c)| {
                json!({
                    "k": k,
                    "num": c.num.c.iter().map(|&a| self.field.coeffs(a)).collect::<Vec<_>>(),
                    "den": c.den.c.iter().map(|&a| self.field.coeffs(a)).collect::<Vec<_>>(),
                    "text": c.to_string(),
                    "in_representative_set": flags.get(k).copied(),
                })
            })
            .collect();
        json!({ "terms": terms, "rational_coefficients": self.has_rational_coefficients() })
    }
}

fn negative_part(f: &RatFunc) -> Result<BTreeMap<i64, RatU>> {
    let (v, c) = f.t_coeffs(0)?;
    Ok(c.into_iter()
        .enumerate()
        .map(|(m, x)| (v + m as i64, x))
        .filter(|(_, x)| !x.is_zero())
        .collect())
}

/// Canonical representative of `f` modulo (Frob - 1) and F_q(u).
pub fn as_reduce(f: &RatFunc) -> Result<CanonicalASRep> {
    let k = f.field().clone();
    let p = k.p() as i64;
    let mut terms = negative_part(f)?;
    let Some(&lowest) = terms.keys().next() else {
        return Ok(CanonicalASRep { field: k, terms });
    };
    // Transfers only move coefficients to larger indices, so one ascending pass suffices.
    for idx in lowest..0 {
        if idx % p != 0 {
            continue;
        }
        let Some(c) = terms.remove(&idx) else { continue };
        let parts = c.p_decompose();
        let rest = parts.iter().enumerate().skip(1).fold(RatU::zero(&k), |acc, (r, g)| {
            acc.add(&g.pow(p as u64).mul(&RatU::from_poly(crate::poly::Poly::monomial(&k, 1, r))))
        });
        if !rest.is_zero() {
            terms.insert(idx, rest);
        }
        if !parts[0].is_zero() {
            let e = terms.entry(idx / p).or_insert_with(|| RatU::zero(&k));
            *e = e.add(&parts[0]);
            if e.is_zero() {
                terms.remove(&(idx / p));
            }
        }
    }
    Ok(CanonicalASRep { field: k, terms })
}

/// Solves `f - recompose(rep) = h^p - h + (t-integral)` for the negative part of h.
/// Returns `None` if no such h exists.
pub fn as_residual(f: &RatFunc, rep: &CanonicalASRep) -> Result<Option<BTreeMap<i64, RatU>>> {
    let k = f.field().clone();
    let p = k.p() as i64;
    let r = negative_part(&f.sub(&rep.recompose()))?;
    let mut h: BTreeMap<i64, RatU> = BTreeMap::new();
    let Some(&lowest) = r.keys().next() else {
        return Ok(Some(h));
    };
    let zero = RatU::zero(&k);
    // Coefficient at idx of h^p - h is h_{idx/p}^p [p | idx] - h_idx.
    for idx in lowest..0 {
        let ri = r.get(&idx).unwrap_or(&zero);
        let hi = h.get(&idx).cloned().unwrap_or_else(|| zero.clone());
        if idx % p == 0 {
            let x = ri.add(&hi);
            let parts = x.p_decompose();
            if parts[1..].iter().any(|g| !g.is_zero()) {
                return Ok(None);
            }
            if !parts[0].is_zero() {
                h.insert(idx / p, parts[0].clone());
            }
        } else if hi.add(ri) != zero {
            return Ok(None);
        }
    }
    Ok(Some(h))
}
