//! Admissible curves through the origin of the (u, t)-plane and branch expansions.

use crate::error::{Error, Result};
use crate::ff::FieldSpec;
use crate::poly::Poly;
use crate::rational::{split_factors, Poly2, RatFunc};
use crate::series::{Laurent2, Precision};
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CurveKind {
    /// t = 0
    AxisU,
    /// u = 0
    AxisT,
    /// t = phi(u)
    GraphTOfU,
    /// u = phi(t)
    GraphUOfT,
}

/// A smooth curve through the origin whose branch field is algorithmic.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AdmissibleCurve {
    pub kind: CurveKind,
    /// `phi` for graph curves; zero constant term.
    pub graph_poly: Option<Poly>,
}

impl AdmissibleCurve {
    pub fn axis_u() -> Self {
        AdmissibleCurve { kind: CurveKind::AxisU, graph_poly: None }
    }
    pub fn axis_t() -> Self {
        AdmissibleCurve { kind: CurveKind::AxisT, graph_poly: None }
    }
    pub fn graph(kind: CurveKind, phi: Poly) -> Result<Self> {
        if !matches!(kind, CurveKind::GraphTOfU | CurveKind::GraphUOfT) {
            return Err(Error::Invalid("graph curves need a graph kind".into()));
        }
        if phi.coeff(0) != 0 {
            return Err(Error::Invalid("graph polynomial must vanish at 0".into()));
        }
        if phi.is_zero() {
            return Ok(match kind {
                CurveKind::GraphTOfU => Self::axis_u(),
                _ => Self::axis_t(),
            });
        }
        Ok(AdmissibleCurve { kind, graph_poly: Some(phi) })
    }

    fn phi(&self, k: &FieldSpec) -> Poly {
        self.graph_poly.clone().unwrap_or_else(|| Poly::zero(k))
    }

    /// Local equation t_y.
    pub fn equation(&self, k: &FieldSpec) -> Poly2 {
        let (u, t) = (Poly2::u(k), Poly2::t(k));
        match self.kind {
            CurveKind::AxisU => t,
            CurveKind::AxisT => u,
            CurveKind::GraphTOfU => t.sub(&Poly2::from_u(self.phi(k))),
            CurveKind::GraphUOfT => u.sub(&Poly2::from_u(self.phi(k)).swap()),
        }
    }

    pub fn label(&self) -> String {
        match self.kind {
            CurveKind::AxisU => "axis_u".into(),
            CurveKind::AxisT => "axis_t".into(),
            CurveKind::GraphTOfU => format!("t={}", self.graph_poly.as_ref().unwrap().to_string_in("u")),
            CurveKind::GraphUOfT => format!("u={}", self.graph_poly.as_ref().unwrap().to_string_in("t")),
        }
    }

    /// Images of (u, t) in the branch coordinates (inner parameter, equation).
    fn coordinates(&self, k: &FieldSpec) -> (Poly2, Poly2) {
        let (x, y) = (Poly2::u(k), Poly2::t(k));
        let phi_x = Poly2::from_u(self.phi(k));
        match self.kind {
            CurveKind::AxisU => (x, y),
            CurveKind::AxisT => (y, x),
            CurveKind::GraphTOfU => (x, y.add(&phi_x)),
            CurveKind::GraphUOfT => (y.add(&phi_x), x),
        }
    }

    /// Expansion in k((u_{x,y}))((t_y)) at the origin.
    pub fn expand(&self, f: &RatFunc, prec: Precision) -> Result<Laurent2> {
        let k = f.field();
        let (a, b) = self.coordinates(k);
        let num = f.num.substitute(&a, &b);
        let den = f.den.substitute(&a, &b);
        num.to_laurent().div(&den.to_laurent(), prec)
    }
}

/// Checks the curve set and that every input factors through it near the origin.
pub fn check_admissible(inputs: &[&RatFunc], curves: &[AdmissibleCurve]) -> Result<()> {
    for (i, c) in curves.iter().enumerate() {
        if curves[..i].contains(c) {
            return Err(Error::Invalid(format!("curve {} declared twice", c.label())));
        }
    }
    let Some(k) = inputs.first().map(|f| f.field().clone()) else {
        return Ok(());
    };
    let eqs: Vec<Poly2> = curves.iter().map(|c| c.equation(&k)).collect();
    for f in inputs {
        if f.field() != &k {
            return Err(Error::FieldMismatch);
        }
        let (_, num, den) = split_factors(f, &eqs);
        for rest in [num, den] {
            if rest.at_origin() == 0 {
                return Err(Error::UndeclaredCurveFactor(rest.to_string()));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn branch_coordinates() {
        let f3 = FieldSpec::parse("3").unwrap();
        let (u, t) = (RatFunc::u(&f3), RatFunc::t(&f3));
        let g = AdmissibleCurve::graph(CurveKind::GraphTOfU, Poly::x(&f3)).unwrap();
        // t - u is the equation of the graph, so it becomes the outer parameter.
        let e = g.expand(&t.sub(&u), Precision::new(4, 4)).unwrap();
        assert_eq!(e, Laurent2::t(&f3));
        let e = AdmissibleCurve::axis_t().expand(&u, Precision::new(4, 4)).unwrap();
        assert_eq!(e, Laurent2::t(&f3));
        assert_eq!(g.label(), "t=u");
    }

    #[test]
    fn undeclared_factor() {
        let f2 = FieldSpec::parse("2").unwrap();
        let (u, t) = (RatFunc::u(&f2), RatFunc::t(&f2));
        let axes = [AdmissibleCurve::axis_u(), AdmissibleCurve::axis_t()];
        assert!(check_admissible(&[&u, &t.mul(&u)], &axes).is_ok());
        let bad = t.add(&u);
        assert!(matches!(check_admissible(&[&bad], &axes), Err(Error::UndeclaredCurveFactor(_))));
        let one = RatFunc::constant(&f2, 1);
        assert!(check_admissible(&[&one.add(&bad)], &axes).is_ok());
    }
}
