//! Adelic K_2 vectors of finite support and the global pairings.

use super::{prime_field, GlobalConfig, ResidueField, Site};
use crate::error::{Error, Result};
use crate::ff::{Embedding, FieldSpec, Fq};
use crate::rational::RatFunc;
use crate::series::Laurent2;
use crate::symbols::{tame_k2, witt_pair_local, K2Elem, LWitt};
use crate::witt::WittVec;
use std::collections::BTreeMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Ambient {
    /// Places of a fixed curve.
    Curve,
    /// Curves through a fixed point.
    Point,
}

/// Finite table site -> local K_2 element; absent sites are the identity.
#[derive(Clone, Debug)]
pub struct AdeleK2 {
    pub base: FieldSpec,
    pub ambient: Ambient,
    pub entries: BTreeMap<String, K2Elem>,
}

#[derive(Clone, Debug)]
pub enum AdeleCoeffs {
    Witt(BTreeMap<String, LWitt>),
    Tame(BTreeMap<String, Laurent2>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairMode {
    Witt(usize),
    Tame,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AdeleValue {
    /// In W_m(F_p).
    Witt(Vec<u32>),
    /// In F_q^x.
    Tame(Fq),
}

fn norm_to(base: &FieldSpec, local: &FieldSpec, v: Fq) -> Result<Fq> {
    if local == base {
        Ok(v)
    } else {
        Ok(Embedding::new(base, local)?.norm(v))
    }
}

/// Global pairing: sum (Witt) or product (tame) of local values over the support.
pub fn adele_pair(e: &AdeleK2, h: &AdeleCoeffs, mode: PairMode, cfg: &GlobalConfig) -> Result<AdeleValue> {
    let k = &e.base;
    match (mode, h) {
        (PairMode::Witt(m), AdeleCoeffs::Witt(hs)) => {
            if hs.values().any(|w| w.len() != m) {
                return Err(Error::ModeMismatch);
            }
            let p = k.p();
            let fp = prime_field(p);
            let keys: Vec<&String> = e.entries.keys().filter(|s| hs.contains_key(*s)).collect();
            let values = cfg.exec.try_map(keys, |s| witt_pair_local(&e.entries[s], &hs[s], &cfg.pair_cfg(cfg.prec)))?;
            let mut acc = WittVec::zero(p, &fp, m);
            for v in values {
                acc = acc.add(&WittVec::new(p, &fp, v))?;
            }
            Ok(AdeleValue::Witt(acc.comps))
        }
        (PairMode::Tame, AdeleCoeffs::Tame(hs)) => {
            let mut acc: Fq = 1;
            for (s, x) in &e.entries {
                let Some(hx) = hs.get(s) else { continue };
                let v = tame_k2(x, hx)?;
                acc = k.mul(acc, norm_to(k, &x.field, v)?);
            }
            Ok(AdeleValue::Tame(acc))
        }
        _ => Err(Error::ModeMismatch),
    }
}

/// The diagonal image of `({f, g}, h)` on the given sites at the configured precision.
pub fn diagonal_adele(
    sites: &[Site],
    f: &RatFunc,
    g: &RatFunc,
    h: &[RatFunc],
    mode: PairMode,
    cfg: &GlobalConfig,
) -> Result<(AdeleK2, AdeleCoeffs)> {
    let k = f.field().clone();
    let prec = cfg.prec;
    let ambient = match sites.first() {
        Some(Site::Curve(_)) => Ambient::Point,
        _ => Ambient::Curve,
    };
    let mut entries = BTreeMap::new();
    let mut witt = BTreeMap::new();
    let mut tame = BTreeMap::new();
    for s in sites {
        let mut all = vec![f, g];
        all.extend(h.iter());
        let (res, ex): (ResidueField, Vec<Laurent2>) = s.expand_all(&k, &all, prec)?;
        entries.insert(s.label(), K2Elem::symbol(&ex[0], &ex[1]));
        match mode {
            PairMode::Witt(_) => {
                witt.insert(s.label(), crate::symbols::lwitt(&res.field, ex[2..].to_vec(), prec));
            }
            PairMode::Tame => {
                let hx = ex.get(2).cloned().ok_or(Error::Invalid("tame mode needs one coefficient".into()))?;
                tame.insert(s.label(), hx);
            }
        }
    }
    let coeffs = match mode {
        PairMode::Witt(m) if m != h.len() => return Err(Error::ModeMismatch),
        PairMode::Witt(_) => AdeleCoeffs::Witt(witt),
        PairMode::Tame => AdeleCoeffs::Tame(tame),
    };
    Ok((AdeleK2 { base: k, ambient, entries }, coeffs))
}

#[cfg(test)]
mod tests {
    use super::super::*;
    use super::*;

    #[test]
    fn trivial_supports_and_mismatch() {
        let k = FieldSpec::parse("3").unwrap();
        let cfg = GlobalConfig::default();
        let e = AdeleK2 { base: k.clone(), ambient: Ambient::Curve, entries: BTreeMap::new() };
        let w = AdeleCoeffs::Witt(BTreeMap::new());
        assert_eq!(adele_pair(&e, &w, PairMode::Witt(2), &cfg).unwrap(), AdeleValue::Witt(vec![0, 0]));
        let t = AdeleCoeffs::Tame(BTreeMap::new());
        assert_eq!(adele_pair(&e, &t, PairMode::Tame, &cfg).unwrap(), AdeleValue::Tame(1));
        assert_eq!(adele_pair(&e, &t, PairMode::Witt(1), &cfg), Err(Error::ModeMismatch));
    }

    #[test]
    fn diagonal_vanishes_and_singleton_is_local() {
        let k = FieldSpec::parse("3").unwrap();
        let cfg = GlobalConfig::default();
        let (u, t) = (RatFunc::u(&k), RatFunc::t(&k));
        let one = RatFunc::constant(&k, 1);
        let f = u.add(&one);
        let h = vec![u.pow(-1).unwrap().add(&t.pow(-1).unwrap())];
        let sites = curve_sites(&[&f, &t, &h[0]]);
        let (e, c) = diagonal_adele(&sites, &f, &t, &h, PairMode::Witt(1), &cfg).unwrap();
        assert_eq!(adele_pair(&e, &c, PairMode::Witt(1), &cfg).unwrap(), AdeleValue::Witt(vec![0]));
        let first = sites[0].clone();
        let (e1, c1) = diagonal_adele(std::slice::from_ref(&first), &f, &t, &h, PairMode::Witt(1), &cfg).unwrap();
        let local = local_witt(&k, &first, &f, &t, &h, &cfg).unwrap();
        assert_eq!(adele_pair(&e1, &c1, PairMode::Witt(1), &cfg).unwrap(), AdeleValue::Witt(local));
        let (e, c) = diagonal_adele(&sites, &f, &t, &[u.clone()], PairMode::Tame, &cfg).unwrap();
        assert_eq!(adele_pair(&e, &c, PairMode::Tame, &cfg).unwrap(), AdeleValue::Tame(1));
    }
}
