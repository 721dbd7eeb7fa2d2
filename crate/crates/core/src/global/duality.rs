//! Finite-level duality: graded pieces of K_2 against graded pieces of the additive group.

use super::{curve_witt_reciprocity, GlobalConfig};
use crate::error::{Error, Result};
use crate::ff::{FieldSpec, Fq};
use crate::rational::RatFunc;
use crate::series::Laurent2;
use crate::symbols::{lwitt, witt_pair_local, witt_pair_local_untraced, K2Elem};
use serde::Serialize;

/// Nullspace of `a` (rows x cols) over F_p, as a basis of column vectors.
fn nullspace(a: &[Vec<u32>], cols: usize, p: u32) -> Vec<Vec<u32>> {
    let mut m: Vec<Vec<u32>> = a.to_vec();
    let mut pivots = vec![];
    let mut r = 0;
    let inv = |x: u32| (1..p).find(|y| x * y % p == 1).unwrap();
    for c in 0..cols {
        let Some(pr) = (r..m.len()).find(|&i| m[i][c] != 0) else { continue };
        m.swap(r, pr);
        let s = inv(m[r][c]);
        for x in m[r].iter_mut() {
            *x = *x * s % p;
        }
        for i in 0..m.len() {
            if i != r && m[i][c] != 0 {
                let f = m[i][c];
                for cc in 0..cols {
                    m[i][cc] = (m[i][cc] + p * p - f * m[r][cc] % p) % p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![0u32; cols];
            v[fc] = 1;
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = (p - m[row][fc]) % p;
            }
            v
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PointCase {
    /// p does not divide i, p divides j: slots (t, t).
    TT,
    /// p divides i: slots (u, u).
    UU,
    /// p divides neither: slots (t, u).
    TU,
}

/// Kernel of the pairing between level-(i, j) pairs of branch symbols and `c u^-i t^-j`.
#[derive(Clone, Debug, Serialize)]
pub struct PointDualityReport {
    pub i: i64,
    pub j: i64,
    pub p: u32,
    pub case: PointCase,
    /// Kernel elements (a, b) as coefficient vectors.
    pub kernel: Vec<(Vec<u32>, Vec<u32>)>,
    pub predicted_kernel: Vec<(Vec<u32>, Vec<u32>)>,
    pub kernel_matches: bool,
    pub closed_form_checked: usize,
    pub closed_form_mismatches: usize,
    pub vanishing_checked: usize,
    pub vanishing_failures: usize,
}

struct PointSetup {
    k: FieldSpec,
    i: i64,
    j: i64,
    case: PointCase,
}

impl PointSetup {
    /// Branch elements in F_{u,t} (u inner) and F_{t,u} (t inner).
    fn elements(&self, a: Fq, b: Fq) -> (K2Elem, K2Elem) {
        let k = &self.k;
        let one = Laurent2::one(k);
        let x = one.add(&Laurent2::monomial(k, a, self.i, self.j));
        let y = one.add(&Laurent2::monomial(k, b, self.j, self.i));
        // In F_{u,t} t is the outer parameter; in F_{t,u} it is the inner one.
        let (s1, s2) = match self.case {
            PointCase::TT => (Laurent2::t(k), Laurent2::u(k)),
            PointCase::UU => (Laurent2::u(k), Laurent2::t(k)),
            PointCase::TU => (Laurent2::t(k), Laurent2::t(k)),
        };
        (K2Elem::symbol(&x, &s1), K2Elem::symbol(&y, &s2))
    }

    /// Untraced sum over both branches against `c u^ku t^lt`.
    fn value(&self, e: &(K2Elem, K2Elem), c: Fq, ku: i64, lt: i64, cfg: &GlobalConfig) -> Result<Fq> {
        let k = &self.k;
        let pc = cfg.pair_cfg(cfg.prec);
        let z1 = lwitt(k, vec![Laurent2::monomial(k, c, ku, lt)], cfg.prec);
        let z2 = lwitt(k, vec![Laurent2::monomial(k, c, lt, ku)], cfg.prec);
        let v1 = witt_pair_local_untraced(&e.0, &z1, &pc)?.comps[0];
        let v2 = witt_pair_local_untraced(&e.1, &z2, &pc)?.comps[0];
        Ok(k.add(v1, v2))
    }

    fn closed_form(&self, a: Fq, b: Fq, c: Fq) -> Fq {
        let k = &self.k;
        let (fi, fj) = (k.from_int(self.i), k.from_int(self.j));
        let v = match self.case {
            PointCase::TT => k.mul(fi, k.sub(a, b)),
            PointCase::UU => k.mul(fj, k.sub(b, a)),
            PointCase::TU => k.add(k.mul(fi, a), k.mul(fj, b)),
        };
        k.mul(c, v)
    }
}

/// Exhaustive check over F_q of the two-branch pairing at level (i, j).
pub fn duality_kernel_point(i: i64, j: i64, field: &FieldSpec, cfg: &GlobalConfig) -> Result<PointDualityReport> {
    let p = field.p() as i64;
    if i < 1 || j < 1 || (i % p == 0 && j % p == 0) {
        return Err(Error::BadIndexPair(i, j));
    }
    let case = if i % p == 0 {
        PointCase::UU
    } else if j % p == 0 {
        PointCase::TT
    } else {
        PointCase::TU
    };
    let st = PointSetup { k: field.clone(), i, j, case };
    let k = field;
    let pairs: Vec<(Fq, Fq)> = k.elements().flat_map(|a| k.elements().map(move |b| (a, b))).collect();
    let grid: Vec<(i64, i64)> = (-i..=0).flat_map(|x| (-j..=0).map(move |y| (x, y))).filter(|&g| g != (-i, -j)).collect();
    struct Row {
        in_kernel: bool,
        predicted: bool,
        mismatches: usize,
        checked: usize,
        vanishing_failures: usize,
        vanishing_checked: usize,
    }
    let rows = cfg.exec.try_map(pairs.clone(), |(a, b)| -> Result<Row> {
        let e = st.elements(a, b);
        let mut row = Row { in_kernel: true, predicted: true, mismatches: 0, checked: 0, vanishing_failures: 0, vanishing_checked: 0 };
        for c in k.elements() {
            let v = st.value(&e, c, -i, -j, cfg)?;
            let w = st.closed_form(a, b, c);
            row.checked += 1;
            row.mismatches += usize::from(v != w);
            row.in_kernel &= v == 0;
            row.predicted &= w == 0;
            for &(ku, lt) in &grid {
                row.vanishing_checked += 1;
                row.vanishing_failures += usize::from(st.value(&e, c, ku, lt, cfg)? != 0);
            }
        }
        Ok(row)
    })?;
    let pick = |sel: &dyn Fn(&Row) -> bool| -> Vec<(Vec<u32>, Vec<u32>)> {
        pairs.iter().zip(&rows).filter(|(_, r)| sel(r)).map(|(&(a, b), _)| (k.coeffs(a), k.coeffs(b))).collect()
    };
    let kernel = pick(&|r| r.in_kernel);
    let predicted_kernel = pick(&|r| r.predicted);
    Ok(PointDualityReport {
        i,
        j,
        p: k.p(),
        case,
        kernel_matches: kernel == predicted_kernel,
        kernel,
        predicted_kernel,
        closed_form_checked: rows.iter().map(|r| r.checked).sum(),
        closed_form_mismatches: rows.iter().map(|r| r.mismatches).sum(),
        vanishing_checked: rows.iter().map(|r| r.vanishing_checked).sum(),
        vanishing_failures: rows.iter().map(|r| r.vanishing_failures).sum(),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct DiagonalCheck {
    pub h: String,
    pub b: String,
    pub f: String,
    pub sum: Vec<u32>,
    pub holds: bool,
}

/// Pairing matrix at level k between K_2 generators and `f t^-k` with f in L(D).
#[derive(Clone, Debug, Serialize)]
pub struct CurveDualityReport {
    pub k: i64,
    pub pole_bound: i64,
    pub p: u32,
    /// Generator labels: `{1 + c u^-e t^k, t}` or `{1 + c u^-e t^k, u}`.
    pub rows: Vec<String>,
    /// Test function labels `c u^a`.
    pub cols: Vec<String>,
    /// Traced pairings in F_p.
    pub matrix: Vec<Vec<u32>>,
    pub closed_form_mismatches: usize,
    pub rank: usize,
    /// Basis of the left kernel (row combinations pairing to zero with every column).
    pub kernel: Vec<Vec<u32>>,
    pub predicted_kernel_dim: usize,
    pub kernel_matches: bool,
    pub diagonal_checks: Vec<DiagonalCheck>,
}

/// Level-k duality on the curve t = 0 near the place u = 0.
pub fn duality_level_curve(k: i64, pole_bound: i64, field: &FieldSpec, cfg: &GlobalConfig) -> Result<CurveDualityReport> {
    if k < 1 || pole_bound < 0 {
        return Err(Error::Invalid("need k >= 1 and a nonnegative pole bound".into()));
    }
    let fq = field;
    let p = fq.p() as i64;
    let basis = fq.fp_basis();
    // (exponent e, slot is u, coefficient c)
    let mut gens: Vec<(i64, bool, Fq)> = vec![];
    for e in 1..=pole_bound {
        if e % p != 0 {
            gens.extend(basis.iter().map(|&c| (e, false, c)));
        }
    }
    for e in (0..=pole_bound).filter(|e| e % p == 0) {
        gens.extend(basis.iter().map(|&c| (e, true, c)));
    }
    let cols: Vec<(i64, Fq)> = (0..=pole_bound).flat_map(|a| basis.iter().map(move |&c| (a, c))).collect();
    let one = Laurent2::one(fq);
    let elem = |&(e, slot_u, c): &(i64, bool, Fq)| {
        let x = one.add(&Laurent2::monomial(fq, c, -e, k));
        let s = if slot_u { Laurent2::u(fq) } else { Laurent2::t(fq) };
        K2Elem::symbol(&x, &s)
    };
    let closed = |&(e, slot_u, c): &(i64, bool, Fq), &(a, c2): &(i64, Fq)| -> u32 {
        if a != e {
            return 0;
        }
        let coef = if slot_u { -k } else { -e };
        fq.trace_abs(fq.mul(fq.from_int(coef), fq.mul(c, c2)))
    };
    let matrix = cfg.exec.try_map(gens.clone(), |g| -> Result<Vec<u32>> {
        let x = elem(&g);
        cols.iter()
            .map(|&(a, c2)| {
                let h = lwitt(fq, vec![Laurent2::monomial(fq, c2, a, -k)], cfg.prec);
                Ok(witt_pair_local(&x, &h, &cfg.pair_cfg(cfg.prec))?[0])
            })
            .collect()
    })?;
    let mut mismatches = 0;
    for (g, row) in gens.iter().zip(&matrix) {
        for (col, &v) in cols.iter().zip(row) {
            mismatches += usize::from(closed(g, col) != v);
        }
    }
    let pu = fq.p();
    let transposed: Vec<Vec<u32>> = (0..cols.len()).map(|c| matrix.iter().map(|r| r[c]).collect()).collect();
    let kernel = nullspace(&transposed, gens.len(), pu);
    let rank = gens.len() - kernel.len();
    let u_rows: Vec<usize> = gens.iter().enumerate().filter(|(_, g)| g.1).map(|(n, _)| n).collect();
    let predicted_kernel_dim = if k % p == 0 { u_rows.len() } else { 0 };
    let u_rows_zero = u_rows.iter().all(|&n| matrix[n].iter().all(|&v| v == 0));
    let kernel_matches = kernel.len() == predicted_kernel_dim && (k % p != 0 || u_rows_zero);

    // Global symbols {1 + h t^k, b} pair to zero with global f t^-k summed over all places.
    let (u, t) = (RatFunc::u(fq), RatFunc::t(fq));
    let c1 = RatFunc::constant(fq, 1);
    let hs = [c1.clone(), u.pow(-1)?, c1.div(&u.add(&c1))?];
    let bs = [u.clone(), u.add(&c1)];
    let mut fs = vec![c1.clone()];
    if pole_bound > 0 {
        fs.push(u.pow(pole_bound)?);
    }
    let tk = t.pow(k)?;
    let tmk = t.pow(-k)?;
    let mut diagonal_checks = vec![];
    for h in &hs {
        for b in &bs {
            for f in &fs {
                let r = curve_witt_reciprocity(&c1.add(&h.mul(&tk)), b, &[f.mul(&tmk)], cfg)?;
                diagonal_checks.push(DiagonalCheck {
                    h: h.to_string(),
                    b: b.to_string(),
                    f: f.to_string(),
                    holds: r.holds,
                    sum: r.sum,
                });
            }
        }
    }
    let label = |&(e, slot_u, c): &(i64, bool, Fq)| {
        format!("{{1 + {}*u^{} t^{}, {}}}", fq.fmt_elem(c), -e, k, if slot_u { "u" } else { "t" })
    };
    Ok(CurveDualityReport {
        k,
        pole_bound,
        p: pu,
        rows: gens.iter().map(label).collect(),
        cols: cols.iter().map(|&(a, c)| format!("{}*u^{}", fq.fmt_elem(c), a)).collect(),
        matrix,
        closed_form_mismatches: mismatches,
        rank,
        kernel,
        predicted_kernel_dim,
        kernel_matches,
        diagonal_checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k(t: &str) -> FieldSpec {
        FieldSpec::parse(t).unwrap()
    }

    #[test]
    fn nullspace_small() {
        let a = vec![vec![1, 1, 0], vec![0, 0, 0]];
        let n = nullspace(&a, 3, 2);
        assert_eq!(n.len(), 2);
        for v in n {
            assert_eq!((v[0] + v[1]) % 2, 0);
        }
    }

    #[test]
    fn point_examples() {
        let cfg = GlobalConfig::default();
        let r = duality_kernel_point(1, 2, &k("2"), &cfg).unwrap();
        assert!(r.kernel_matches && r.closed_form_mismatches == 0 && r.vanishing_failures == 0);
        assert_eq!(r.kernel, vec![(vec![0], vec![0]), (vec![1], vec![1])]);
        let r = duality_kernel_point(1, 1, &k("3"), &cfg).unwrap();
        assert!(r.kernel_matches && r.closed_form_mismatches == 0);
        assert_eq!(r.kernel.len(), 3);
        assert!(r.kernel.contains(&(vec![0], vec![0])));
        assert!(r.kernel.contains(&(vec![1], vec![2])));
        assert_eq!(duality_kernel_point(2, 4, &k("2"), &cfg).unwrap_err(), Error::BadIndexPair(2, 4));
    }

    #[test]
    fn curve_examples() {
        let cfg = GlobalConfig::default();
        let r = duality_level_curve(1, 0, &k("2"), &cfg).unwrap();
        assert_eq!(r.matrix, vec![vec![1]]);
        assert!(r.kernel.is_empty() && r.kernel_matches);
        assert!(r.diagonal_checks.iter().all(|d| d.holds));
        let r = duality_level_curve(3, 4, &k("3"), &cfg).unwrap();
        assert_eq!(r.closed_form_mismatches, 0);
        assert!(r.kernel_matches);
        assert_eq!(r.kernel.len(), 2);
        let r = duality_level_curve(2, 3, &k("2^2"), &cfg).unwrap();
        assert_eq!(r.closed_form_mismatches, 0);
        assert!(r.kernel_matches && r.diagonal_checks.iter().all(|d| d.holds));
    }
}
