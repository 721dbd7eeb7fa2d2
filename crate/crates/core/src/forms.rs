//! Continuous 1- and 2-forms in du, dt with series coefficients, and the residue.

use crate::error::{Error, Result};
use crate::ff::FieldSpec;
use crate::ring::Ring;
use crate::series::{Precision, Series2};
use std::fmt;

/// `a du + b dt`.
#[derive(Clone, Debug, PartialEq)]
pub struct OneForm<R: Ring> {
    pub a: Series2<R>,
    pub b: Series2<R>,
}

/// `a du^dt`, u inner and t outer.
#[derive(Clone, Debug, PartialEq)]
pub struct TwoForm<R: Ring> {
    pub a: Series2<R>,
}

impl<R: Ring> OneForm<R> {
    pub fn add(&self, o: &Self) -> Self {
        OneForm { a: self.a.add(&o.a), b: self.b.add(&o.b) }
    }
}

impl<R: Ring> TwoForm<R> {
    pub fn zero(ring: &R) -> Self {
        TwoForm { a: Series2::zero(ring) }
    }
    pub fn add(&self, o: &Self) -> Self {
        TwoForm { a: self.a.add(&o.a) }
    }
    pub fn scale_int(&self, k: i64) -> Self {
        TwoForm { a: self.a.scale(&self.a.ring.from_i64(k)) }
    }
    pub fn mul_fn(&self, g: &Series2<R>) -> Self {
        TwoForm { a: self.a.mul(g) }
    }
}

/// `df/f = (f_u / f) du + (f_t / f) dt`.
pub fn dlog<R: Ring>(f: &Series2<R>, prec: Precision) -> Result<OneForm<R>> {
    let fi = f.invert(prec)?;
    Ok(OneForm { a: f.deriv_u().mul(&fi), b: f.deriv_t().mul(&fi) })
}

pub fn wedge<R: Ring>(x: &OneForm<R>, y: &OneForm<R>) -> TwoForm<R> {
    TwoForm { a: x.a.mul(&y.b).sub(&x.b.mul(&y.a)) }
}

/// `dlog f ^ dlog g`, computed as `(f_u g_t - f_t g_u) / (f g)` with one inversion.
pub fn dlog_wedge<R: Ring>(f: &Series2<R>, g: &Series2<R>, prec: Precision) -> Result<TwoForm<R>> {
    let num = f.deriv_u().mul(&g.deriv_t()).sub(&f.deriv_t().mul(&g.deriv_u()));
    if num.is_exact_zero() {
        return Ok(TwoForm::zero(&f.ring));
    }
    let den = f.mul(g).invert(prec)?;
    Ok(TwoForm { a: num.mul(&den) })
}

/// The coefficient of u^-1 t^-1 du^dt (no trace applied).
pub fn residue<R: Ring>(w: &TwoForm<R>) -> Result<R::Elem> {
    w.a.coeff(-1, -1).map_err(|_| Error::CoefficientOutsidePrecision { i: -1, j: -1 })
}

impl fmt::Display for TwoForm<FieldSpec> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) du^dt", self.a)
    }
}
