//! Semi-global objects on the surface with coordinates (u, t): places of the curve t = 0,
//! admissible curves through the origin, reciprocity laws, adeles of finite support,
//! Artin-Schreier canonical forms and finite-level duality checks.
//!
//! Contributions of distinct places or curves are computed independently (in parallel
//! under `Exec::Parallel`) and combined in canonical order.

mod adele;
mod artin_schreier;
mod duality;
mod places;
mod point;

pub use adele::{adele_pair, diagonal_adele, AdeleCoeffs, AdeleK2, AdeleValue, Ambient, PairMode};
pub use artin_schreier::{as_reduce, as_residual, CanonicalASRep};
pub use duality::{duality_kernel_point, duality_level_curve, CurveDualityReport, PointDualityReport};
pub use places::{expand_at_place, list_places, list_places_seeded, CurvePlace, PlaceExpander, PlaceKind, ResidueField};
pub use point::{check_admissible, AdmissibleCurve, CurveKind};

use crate::error::{Error, Result};
use crate::ff::{make_field, FieldSpec, Fq};
use crate::par::Exec;
use crate::rational::RatFunc;
use crate::series::{Laurent2, Precision};
use crate::symbols::{is_precision_error, lwitt, tame_symbol_det, witt_pair_local, K2Elem, PairConfig};
use crate::witt::WittVec;
use serde::Serialize;

/// Working precision for expansions and local pairings.
#[derive(Clone, Copy, Debug)]
pub struct GlobalConfig {
    /// t-coefficients and u-precision of local expansions.
    pub prec: Precision,
    pub max_doublings: u32,
    pub exec: Exec,
}

impl Default for GlobalConfig {
    fn default() -> Self {
        GlobalConfig { prec: Precision::new(10, 10), max_doublings: 4, exec: Exec::default() }
    }
}

impl GlobalConfig {
    pub(crate) fn pair_cfg(&self, prec: Precision) -> PairConfig {
        PairConfig { prec, max_doublings: 1, exec: Exec::Sequential }
    }

    pub(crate) fn retry<T>(&self, mut f: impl FnMut(Precision) -> Result<T>) -> Result<T> {
        let mut prec = self.prec;
        let mut tries = 0;
        loop {
            match f(prec) {
                Err(e) if is_precision_error(&e) && tries < self.max_doublings => {
                    tries += 1;
                    prec = prec.doubled();
                }
                other => return other,
            }
        }
    }
}

/// Where a local contribution lives.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Site {
    /// A place of the curve t = 0.
    Place(CurvePlace),
    /// An admissible curve through the origin.
    Curve(AdmissibleCurve),
}

impl Site {
    pub fn label(&self) -> String {
        match self {
            Site::Place(x) => x.label(),
            Site::Curve(c) => c.label(),
        }
    }
    pub fn residue_degree(&self) -> u32 {
        match self {
            Site::Place(x) => x.residue_degree,
            Site::Curve(_) => 1,
        }
    }
    /// Local expansions of all of `fs` together with the residue field.
    pub fn expand_all(&self, k: &FieldSpec, fs: &[&RatFunc], prec: Precision) -> Result<(ResidueField, Vec<Laurent2>)> {
        match self {
            Site::Place(x) => {
                let ex = PlaceExpander::new(k, x, prec.u)?;
                let v = fs.iter().map(|f| ex.expand(f, prec.t)).collect::<Result<_>>()?;
                Ok((ex.residue, v))
            }
            Site::Curve(c) => {
                let v = fs.iter().map(|f| c.expand(f, prec)).collect::<Result<_>>()?;
                Ok((ResidueField::base(k), v))
            }
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LocalWitt {
    pub site: String,
    pub residue_degree: u32,
    pub value: Vec<u32>,
}

/// Local Witt pairings and their sum in W_m(F_p).
#[derive(Clone, Debug, Serialize)]
pub struct WittReciprocityReport {
    pub p: u32,
    pub m: usize,
    pub locals: Vec<LocalWitt>,
    pub running: Vec<Vec<u32>>,
    pub sum: Vec<u32>,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct LocalTame {
    pub site: String,
    pub residue_degree: u32,
    /// Local symbol in k(x), coefficient vector.
    pub value: Vec<u32>,
    /// Its norm to F_q.
    pub norm: Vec<u32>,
}

/// Local tame symbols, their norms and product in F_q^x.
#[derive(Clone, Debug, Serialize)]
pub struct TameReciprocityReport {
    pub locals: Vec<LocalTame>,
    pub running: Vec<Vec<u32>>,
    pub product: Vec<u32>,
    #[serde(skip)]
    pub product_elem: Fq,
    pub holds: bool,
}

fn check_inputs(f: &RatFunc, g: &RatFunc, h: &[RatFunc]) -> Result<FieldSpec> {
    let k = f.field().clone();
    if g.field() != &k || h.iter().any(|x| x.field() != &k) {
        return Err(Error::FieldMismatch);
    }
    if f.is_zero() || g.is_zero() {
        return Err(Error::ZeroArgument);
    }
    Ok(k)
}

/// `({f, g} | h]` at one site, traced to W_m(F_p).
pub fn local_witt(k: &FieldSpec, site: &Site, f: &RatFunc, g: &RatFunc, h: &[RatFunc], cfg: &GlobalConfig) -> Result<Vec<u32>> {
    cfg.retry(|prec| {
        let mut all = vec![f, g];
        all.extend(h.iter());
        let (res, ex) = site.expand_all(k, &all, prec)?;
        let e = K2Elem::symbol(&ex[0], &ex[1]);
        let hw = lwitt(&res.field, ex[2..].to_vec(), prec);
        witt_pair_local(&e, &hw, &cfg.pair_cfg(prec))
    })
}

/// `({f, g}, h)` at one site in k(x).
pub fn local_tame(k: &FieldSpec, site: &Site, f: &RatFunc, g: &RatFunc, h: &RatFunc, cfg: &GlobalConfig) -> Result<(ResidueField, Fq)> {
    cfg.retry(|prec| {
        let (res, ex) = site.expand_all(k, &[f, g, h], prec)?;
        let v = tame_symbol_det(&ex[0], &ex[1], &ex[2])?;
        Ok((res, v))
    })
}

pub(crate) fn prime_field(p: u32) -> FieldSpec {
    make_field(p as u64, 1, None).expect("prime field")
}

fn witt_report(p: u32, m: usize, sites: &[Site], values: Vec<Vec<u32>>) -> Result<WittReciprocityReport> {
    let fp = prime_field(p);
    let mut acc = WittVec::zero(p, &fp, m);
    let mut running = vec![];
    let mut locals = vec![];
    for (s, v) in sites.iter().zip(values) {
        acc = acc.add(&WittVec::new(p, &fp, v.clone()))?;
        running.push(acc.comps.clone());
        locals.push(LocalWitt { site: s.label(), residue_degree: s.residue_degree(), value: v });
    }
    Ok(WittReciprocityReport { p, m, locals, running, holds: acc.is_zero(), sum: acc.comps })
}

fn tame_report(k: &FieldSpec, sites: &[Site], values: Vec<(ResidueField, Fq)>) -> TameReciprocityReport {
    let mut acc: Fq = 1;
    let mut running = vec![];
    let mut locals = vec![];
    for (s, (res, v)) in sites.iter().zip(values) {
        let nv = res.norm(v);
        acc = k.mul(acc, nv);
        running.push(k.coeffs(acc));
        locals.push(LocalTame {
            site: s.label(),
            residue_degree: s.residue_degree(),
            value: res.field.coeffs(v),
            norm: k.coeffs(nv),
        });
    }
    TameReciprocityReport { locals, running, product: k.coeffs(acc), product_elem: acc, holds: acc == 1 }
}

/// Sum over sites of traced local Witt pairings.
pub fn witt_reciprocity(sites: &[Site], f: &RatFunc, g: &RatFunc, h: &[RatFunc], cfg: &GlobalConfig) -> Result<WittReciprocityReport> {
    let k = check_inputs(f, g, h)?;
    let values = cfg.exec.try_map(sites.to_vec(), |s| local_witt(&k, &s, f, g, h, cfg))?;
    witt_report(k.p(), h.len(), sites, values)
}

/// Product over sites of normed local tame symbols.
pub fn tame_reciprocity(sites: &[Site], f: &RatFunc, g: &RatFunc, h: &RatFunc, cfg: &GlobalConfig) -> Result<TameReciprocityReport> {
    let k = check_inputs(f, g, std::slice::from_ref(h))?;
    if h.is_zero() {
        return Err(Error::ZeroArgument);
    }
    let values = cfg.exec.try_map(sites.to_vec(), |s| local_tame(&k, &s, f, g, h, cfg))?;
    Ok(tame_report(&k, sites, values))
}

/// Sites of the curve t = 0 relevant to the given functions.
pub fn curve_sites(inputs: &[&RatFunc]) -> Vec<Site> {
    let owned: Vec<RatFunc> = inputs.iter().map(|f| (*f).clone()).collect();
    list_places(&owned).into_iter().map(Site::Place).collect()
}

/// Witt reciprocity along the curve t = 0, summed over all its places including infinity.
pub fn curve_witt_reciprocity(f: &RatFunc, g: &RatFunc, h: &[RatFunc], cfg: &GlobalConfig) -> Result<WittReciprocityReport> {
    let mut all = vec![f, g];
    all.extend(h.iter());
    witt_reciprocity(&curve_sites(&all), f, g, h, cfg)
}

/// Tame reciprocity along the curve t = 0.
pub fn curve_tame_reciprocity(f: &RatFunc, g: &RatFunc, h: &RatFunc, cfg: &GlobalConfig) -> Result<TameReciprocityReport> {
    tame_reciprocity(&curve_sites(&[f, g, h]), f, g, h, cfg)
}

fn point_sites(inputs: &[&RatFunc], curves: &[AdmissibleCurve]) -> Result<Vec<Site>> {
    check_admissible(inputs, curves)?;
    Ok(curves.iter().cloned().map(Site::Curve).collect())
}

/// Witt reciprocity at the origin, summed over the declared curves.
pub fn point_witt_reciprocity(f: &RatFunc, g: &RatFunc, h: &[RatFunc], curves: &[AdmissibleCurve], cfg: &GlobalConfig) -> Result<WittReciprocityReport> {
    let mut all = vec![f, g];
    all.extend(h.iter());
    let sites = point_sites(&all, curves)?;
    witt_reciprocity(&sites, f, g, h, cfg)
}

/// Tame reciprocity at the origin.
pub fn point_tame_reciprocity(f: &RatFunc, g: &RatFunc, h: &RatFunc, curves: &[AdmissibleCurve], cfg: &GlobalConfig) -> Result<TameReciprocityReport> {
    let sites = point_sites(&[f, g, h], curves)?;
    tame_reciprocity(&sites, f, g, h, cfg)
}
