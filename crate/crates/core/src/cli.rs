//! Command-line front end. `run` is pure (returns exit code and output) so tests can drive it.

use crate::error::{Error, Result};
use crate::ff::FieldSpec;
use crate::global::{
    adele_pair, as_reduce, as_residual, diagonal_adele, duality_kernel_point, duality_level_curve, list_places_seeded,
    witt_reciprocity, tame_reciprocity, check_admissible, AdeleValue, AdmissibleCurve, CurveKind, GlobalConfig, PairMode,
    Site,
};
use crate::parser::parse_rat;
use crate::rational::RatFunc;
use crate::series::{Laurent2, Precision, INF};
use crate::symbols::{
    boundary, k2_decompose_with, k2_equiv_witness, lwitt, tame_symbol_det, witt_pair_local, EquivConfig, K2Elem,
    PairConfig, Witness, DEFAULT_U_WINDOW,
};
use clap::{Parser, Subcommand};
use serde_json::{json, Value};
use std::ffi::OsString;

#[derive(Parser, Debug)]
#[command(name = "k2sym", version, about = "Symbols, Witt pairings and reciprocity checks over F_q((u))((t))")]
pub struct Cli {
    #[command(subcommand)]
    pub verb: Verb,
    /// Field as p^n, optionally with a modulus: p^n/c0,...,cn (constant coefficient first).
    #[arg(long, global = true, default_value = "2")]
    pub field: String,
    /// Relative t-precision of expansions.
    #[arg(long = "prec-t", global = true, default_value_t = 10)]
    pub prec_t: i64,
    /// Relative u-precision of expansions.
    #[arg(long = "prec-u", global = true, default_value_t = 10)]
    pub prec_u: i64,
    /// Witt vector length.
    #[arg(long, global = true, default_value_t = 1)]
    pub m: usize,
    /// Filtration level for `decompose` and `equiv`.
    #[arg(long, global = true, default_value_t = 2)]
    pub level: i64,
    /// Emit one JSON object instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Seed for the factorization used when enumerating places.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Subcommand, Debug)]
pub enum Verb {
    /// Higher tame symbol (f, g, h) at the origin.
    Tame {
        #[arg(allow_hyphen_values = true)]
        f: String,
        #[arg(allow_hyphen_values = true)]
        g: String,
        #[arg(allow_hyphen_values = true)]
        h: String,
    },
    /// Witt pairing ({f, g} | h] at the origin; h has up to m components.
    WittPair {
        #[arg(allow_hyphen_values = true)]
        f: String,
        #[arg(allow_hyphen_values = true)]
        g: String,
        #[arg(allow_hyphen_values = true)]
        h: Vec<String>,
    },
    /// Boundary of {f, g} in the residue field F_q((u)).
    Boundary {
        #[arg(allow_hyphen_values = true)]
        f: String,
        #[arg(allow_hyphen_values = true)]
        g: String,
    },
    /// Topological basis decomposition of {f, g} modulo the given level.
    Decompose {
        #[arg(allow_hyphen_values = true)]
        f: String,
        #[arg(allow_hyphen_values = true)]
        g: String,
    },
    /// Sum over the places of t = 0 (with --tame: product of tame symbols).
    ReciprocityCurve {
        #[arg(allow_hyphen_values = true)]
        f: String,
        #[arg(allow_hyphen_values = true)]
        g: String,
        #[arg(allow_hyphen_values = true)]
        h: Vec<String>,
        #[arg(long)]
        tame: bool,
        /// Also evaluate the global pairing on the diagonal adele.
        #[arg(long)]
        adele: bool,
    },
    /// Sum over admissible curves through the origin.
    ReciprocityPoint {
        #[arg(allow_hyphen_values = true)]
        f: String,
        #[arg(allow_hyphen_values = true)]
        g: String,
        #[arg(allow_hyphen_values = true)]
        h: Vec<String>,
        /// axis_u, axis_t, t=<poly in u> or u=<poly in t>; default: both axes.
        #[arg(long = "curve")]
        curves: Vec<String>,
        #[arg(long)]
        tame: bool,
        #[arg(long)]
        adele: bool,
    },
    /// Two-branch duality kernel at level (i, j).
    DualityPoint { i: i64, j: i64 },
    /// Level-k pairing matrix on the curve t = 0 with pole bound D.
    DualityCurve { k: i64, pole_bound: i64 },
    /// Canonical representative modulo (Frob - 1).
    AsReduce {
        #[arg(allow_hyphen_values = true)]
        f: String,
    },
    /// Whether {f1, g1} and {f2, g2} agree modulo the given level.
    Equiv {
        #[arg(allow_hyphen_values = true)]
        f1: String,
        #[arg(allow_hyphen_values = true)]
        g1: String,
        #[arg(allow_hyphen_values = true)]
        f2: String,
        #[arg(allow_hyphen_values = true)]
        g2: String,
    },
}

impl Verb {
    fn name(&self) -> &'static str {
        match self {
            Verb::Tame { .. } => "tame",
            Verb::WittPair { .. } => "witt-pair",
            Verb::Boundary { .. } => "boundary",
            Verb::Decompose { .. } => "decompose",
            Verb::ReciprocityCurve { .. } => "reciprocity-curve",
            Verb::ReciprocityPoint { .. } => "reciprocity-point",
            Verb::DualityPoint { .. } => "duality-point",
            Verb::DualityCurve { .. } => "duality-curve",
            Verb::AsReduce { .. } => "as-reduce",
            Verb::Equiv { .. } => "equiv",
        }
    }
}

/// Exit status and captured streams of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

struct Reply {
    ok: bool,
    json: Value,
    text: String,
}

fn elem_json(k: &FieldSpec, a: u32) -> Value {
    json!(k.coeffs(a))
}

fn series_json(s: &Laurent2) -> Value {
    let k = s.field();
    let terms: Vec<Value> = s.terms().map(|(i, j, &a)| json!({"i": i, "j": j, "c": k.coeffs(a)})).collect();
    let rows: Vec<Value> = s
        .rows
        .iter()
        .filter(|(_, r)| r.prec < INF)
        .map(|(&j, r)| json!({"j": j, "u_prec": r.prec}))
        .collect();
    json!({
        "text": s.to_string(),
        "terms": terms,
        "t_prec": if s.t_prec >= INF { Value::Null } else { json!(s.t_prec) },
        "inexact_rows": rows,
    })
}

fn parse_curve(text: &str, k: &FieldSpec) -> Result<AdmissibleCurve> {
    let text = text.trim();
    match text {
        "axis_u" => return Ok(AdmissibleCurve::axis_u()),
        "axis_t" => return Ok(AdmissibleCurve::axis_t()),
        _ => {}
    }
    let bad = || Error::Invalid(format!("curve '{text}' is not axis_u, axis_t, t=<poly in u> or u=<poly in t>"));
    let (lhs, rhs) = text.split_once('=').ok_or_else(bad)?;
    let f = parse_rat(rhs, k)?;
    if f.den != RatFunc::constant(k, 1).den {
        return Err(bad());
    }
    match lhs.trim() {
        "t" if f.num.deg_t() <= 0 => AdmissibleCurve::graph(CurveKind::GraphTOfU, f.num.coeff_t(0)),
        "u" => {
            let sw = f.num.swap();
            if sw.deg_t() > 0 {
                return Err(bad());
            }
            AdmissibleCurve::graph(CurveKind::GraphUOfT, sw.coeff_t(0))
        }
        _ => Err(bad()),
    }
}

struct Ctx {
    k: FieldSpec,
    prec: Precision,
    cfg: GlobalConfig,
    m: usize,
    level: i64,
    seed: u64,
}

impl Ctx {
    fn rat(&self, s: &str) -> Result<RatFunc> {
        parse_rat(s, &self.k)
    }
    fn local(&self, s: &str) -> Result<Laurent2> {
        let f = self.rat(s)?;
        if f.is_zero() {
            return Err(Error::ZeroArgument);
        }
        f.expand_origin(self.prec)
    }
    fn symbol(&self, f: &str, g: &str) -> Result<K2Elem> {
        Ok(K2Elem::symbol(&self.local(f)?, &self.local(g)?))
    }
    fn witt_inputs(&self, h: &[String]) -> Result<Vec<RatFunc>> {
        if h.len() > self.m {
            return Err(Error::Invalid(format!("{} Witt components given but --m is {}", h.len(), self.m)));
        }
        let mut out: Vec<RatFunc> = h.iter().map(|x| self.rat(x)).collect::<Result<_>>()?;
        out.resize(self.m, RatFunc::constant(&self.k, 0));
        Ok(out)
    }
}

fn witt_text(v: &[u32]) -> String {
    format!("({})", v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", "))
}

fn reciprocity(ctx: &Ctx, sites: Vec<Site>, f: &str, g: &str, h: &[String], tame: bool, adele: bool) -> Result<Reply> {
    let k = &ctx.k;
    let (f, g) = (ctx.rat(f)?, ctx.rat(g)?);
    if tame {
        if h.len() != 1 {
            return Err(Error::Invalid("tame reciprocity takes exactly three functions".into()));
        }
        let h = ctx.rat(&h[0])?;
        let r = tame_reciprocity(&sites, &f, &g, &h, &ctx.cfg)?;
        let mut j = json!({"mode": "tame", "report": r});
        let mut text = String::new();
        for l in &r.locals {
            text += &format!("{:>12}  deg {}  value {:?}  norm {:?}\n", l.site, l.residue_degree, l.value, l.norm);
        }
        text += &format!("product {}  {}", k.fmt_elem(r.product_elem), if r.holds { "holds" } else { "FAILS" });
        let mut ok = r.holds;
        if adele {
            let (e, c) = diagonal_adele(&sites, &f, &g, std::slice::from_ref(&h), PairMode::Tame, &ctx.cfg)?;
            let AdeleValue::Tame(v) = adele_pair(&e, &c, PairMode::Tame, &ctx.cfg)? else { unreachable!() };
            j["adele_value"] = elem_json(k, v);
            text += &format!("\nadelic pairing {}", k.fmt_elem(v));
            ok &= v == 1;
        }
        return Ok(Reply { ok, json: j, text });
    }
    let h = ctx.witt_inputs(h)?;
    let r = witt_reciprocity(&sites, &f, &g, &h, &ctx.cfg)?;
    let mut j = json!({"mode": "witt", "report": r});
    let mut text = String::new();
    for l in &r.locals {
        text += &format!("{:>12}  deg {}  value {}\n", l.site, l.residue_degree, witt_text(&l.value));
    }
    text += &format!("sum {}  {}", witt_text(&r.sum), if r.holds { "holds" } else { "FAILS" });
    let mut ok = r.holds;
    if adele {
        let (e, c) = diagonal_adele(&sites, &f, &g, &h, PairMode::Witt(ctx.m), &ctx.cfg)?;
        let AdeleValue::Witt(v) = adele_pair(&e, &c, PairMode::Witt(ctx.m), &ctx.cfg)? else { unreachable!() };
        text += &format!("\nadelic pairing {}", witt_text(&v));
        ok &= v.iter().all(|&x| x == 0);
        j["adele_value"] = json!(v);
    }
    Ok(Reply { ok, json: j, text })
}

fn dispatch(ctx: &Ctx, verb: &Verb) -> Result<Reply> {
    let k = &ctx.k;
    match verb {
        Verb::Tame { f, g, h } => {
            let v = tame_symbol_det(&ctx.local(f)?, &ctx.local(g)?, &ctx.local(h)?)?;
            Ok(Reply { ok: true, json: json!({"value": elem_json(k, v)}), text: k.fmt_elem(v) })
        }
        Verb::WittPair { f, g, h } => {
            let e = ctx.symbol(f, g)?;
            let comps = ctx.witt_inputs(h)?.iter().map(|x| x.expand_origin(ctx.prec)).collect::<Result<Vec<_>>>()?;
            let w = lwitt(k, comps, ctx.prec);
            let pc = PairConfig { prec: ctx.prec, ..PairConfig::default() };
            let v = witt_pair_local(&e, &w, &pc)?;
            Ok(Reply { ok: true, text: witt_text(&v), json: json!({"value": v}) })
        }
        Verb::Boundary { f, g } => {
            let b = boundary(&ctx.symbol(f, g)?, ctx.prec)?;
            Ok(Reply { ok: true, text: b.to_string(), json: json!({"value": series_json(&b)}) })
        }
        Verb::Decompose { f, g } => {
            let d = k2_decompose_with(&ctx.symbol(f, g)?, ctx.level, DEFAULT_U_WINDOW + 2)?;
            let j = d.to_json();
            let text = serde_json::to_string(&j).unwrap();
            Ok(Reply { ok: true, json: json!({"level": ctx.level, "basis": j}), text })
        }
        Verb::ReciprocityCurve { f, g, h, tame, adele } => {
            let mut inputs = vec![ctx.rat(f)?, ctx.rat(g)?];
            for x in h {
                inputs.push(ctx.rat(x)?);
            }
            let sites = list_places_seeded(&inputs, ctx.seed).into_iter().map(Site::Place).collect();
            reciprocity(ctx, sites, f, g, h, *tame, *adele)
        }
        Verb::ReciprocityPoint { f, g, h, curves, tame, adele } => {
            let curves: Vec<AdmissibleCurve> = if curves.is_empty() {
                vec![AdmissibleCurve::axis_u(), AdmissibleCurve::axis_t()]
            } else {
                curves.iter().map(|c| parse_curve(c, k)).collect::<Result<_>>()?
            };
            let mut inputs = vec![ctx.rat(f)?, ctx.rat(g)?];
            for x in h {
                inputs.push(ctx.rat(x)?);
            }
            check_admissible(&inputs.iter().collect::<Vec<_>>(), &curves)?;
            let sites = curves.into_iter().map(Site::Curve).collect();
            reciprocity(ctx, sites, f, g, h, *tame, *adele)
        }
        Verb::DualityPoint { i, j } => {
            let r = duality_kernel_point(*i, *j, k, &ctx.cfg)?;
            let ok = r.kernel_matches && r.closed_form_mismatches == 0 && r.vanishing_failures == 0;
            let text = format!(
                "case {:?}  kernel size {} (predicted {})  closed-form mismatches {}/{}  vanishing failures {}/{}",
                r.case,
                r.kernel.len(),
                r.predicted_kernel.len(),
                r.closed_form_mismatches,
                r.closed_form_checked,
                r.vanishing_failures,
                r.vanishing_checked
            );
            Ok(Reply { ok, json: json!({"report": r}), text })
        }
        Verb::DualityCurve { k: lvl, pole_bound } => {
            let r = duality_level_curve(*lvl, *pole_bound, k, &ctx.cfg)?;
            let diag_ok = r.diagonal_checks.iter().all(|d| d.holds);
            let ok = r.kernel_matches && r.closed_form_mismatches == 0 && diag_ok;
            let mut text = String::new();
            for (label, row) in r.rows.iter().zip(&r.matrix) {
                text += &format!("{label:<28} {row:?}\n");
            }
            text += &format!(
                "rank {}  kernel dim {} (predicted {})  closed-form mismatches {}  diagonal checks {}",
                r.rank,
                r.kernel.len(),
                r.predicted_kernel_dim,
                r.closed_form_mismatches,
                if diag_ok { "hold" } else { "FAIL" }
            );
            Ok(Reply { ok, json: json!({"report": r}), text })
        }
        Verb::AsReduce { f } => {
            let f = ctx.rat(f)?;
            let rep = as_reduce(&f)?;
            let h = as_residual(&f, &rep)?;
            let ok = h.is_some();
            let mut j = json!({"representative": rep.to_json(), "residual_solved": ok});
            if let Some(h) = &h {
                j["h"] = json!(h.iter().map(|(k, c)| json!({"k": k, "text": c.to_string()})).collect::<Vec<_>>());
            }
            let text = if rep.is_zero() {
                "0".to_string()
            } else {
                let terms: Vec<String> = rep.terms.iter().map(|(k, c)| format!("({c})*t^{k}")).collect();
                terms.join(" + ")
            };
            Ok(Reply { ok, json: j, text })
        }
        Verb::Equiv { f1, g1, f2, g2 } => {
            let cfg = EquivConfig::new(ctx.level);
            let w = k2_equiv_witness(&ctx.symbol(f1, g1)?, &ctx.symbol(f2, g2)?, &cfg)?;
            let (eq, wj) = match &w {
                None => (true, Value::Null),
                Some(Witness::Boundary) => (false, json!({"kind": "boundary"})),
                Some(Witness::Tame(which)) => (false, json!({"kind": "tame", "against": which})),
                Some(Witness::Pairing(v, val)) => (false, json!({"kind": "pairing", "vector": v, "value": val})),
            };
            let text = if eq { "equivalent".into() } else { format!("not equivalent: {wj}") };
            Ok(Reply { ok: true, json: json!({"level": ctx.level, "equivalent": eq, "witness": wj}), text })
        }
    }
}

fn error_kind(e: &Error) -> String {
    let d = format!("{e:?}");
    d.split(|c: char| !c.is_alphanumeric()).next().unwrap_or("Error").to_string()
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    let name = cli.verb.name();
    let result = FieldSpec::parse(&cli.field).and_then(|k| {
        if cli.prec_t < 1 || cli.prec_u < 1 {
            return Err(Error::PrecisionTooLow("precision flags must be positive".into()));
        }
        let prec = Precision::new(cli.prec_t, cli.prec_u);
        let ctx = Ctx {
            cfg: GlobalConfig { prec, ..GlobalConfig::default() },
            k,
            prec,
            m: cli.m,
            level: cli.level,
            seed: cli.seed,
        };
        dispatch(&ctx, &cli.verb).map(|r| (ctx.k.to_text(), r))
    });
    match result {
        Ok((field, r)) => {
            let code = if r.ok { 0 } else { 1 };
            let stdout = if cli.json {
                let mut j = json!({"schema": 1, "command": name, "field": field, "ok": r.ok});
                if let (Value::Object(dst), Value::Object(src)) = (&mut j, r.json) {
                    dst.extend(src);
                }
                serde_json::to_string_pretty(&j).unwrap() + "\n"
            } else {
                r.text + "\n"
            };
            Outcome { code, stdout, stderr: String::new() }
        }
        Err(e) => {
            let stdout = if cli.json {
                let j = json!({"schema": 1, "command": name, "error": {"kind": error_kind(&e), "message": e.to_string()}});
                serde_json::to_string_pretty(&j).unwrap() + "\n"
            } else {
                String::new()
            };
            Outcome { code: 2, stdout, stderr: format!("error: {e}\n") }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn go(args: &[&str]) -> Outcome {
        run(std::iter::once("k2sym").chain(args.iter().copied()))
    }

    #[test]
    fn spec_examples() {
        let o = go(&["tame", "--field", "2^2/1,1,1", "z", "u", "t"]);
        assert_eq!((o.code, o.stdout.as_str()), (0, "z\n"));
        let o = go(&["reciprocity-curve", "--field", "3^1", "--m", "1", "u", "t", "u^-1"]);
        assert_eq!(o.code, 0, "{o:?}");
        assert!(o.stdout.contains("sum (0)"));
        let o = go(&["witt-pair", "--field", "2^1", "--m", "3", "u", "1-u", "u^-1*t^-1", "u^-3*t^-1", "t^-2"]);
        assert_eq!((o.code, o.stdout.as_str()), (0, "(0, 0, 0)\n"));
    }

    #[test]
    fn exit_codes() {
        assert_eq!(go(&["tame", "u", "t", "x"]).code, 2);
        assert_eq!(go(&["tame", "--field", "4", "u", "t", "u"]).code, 2);
        assert_eq!(go(&["bogus"]).code, 2);
        let o = go(&["tame", "--json", "u", "t", "1/(u-u)"]);
        assert_eq!(o.code, 2);
        assert!(o.stdout.contains("\"DivisionByZero\""));
        assert_eq!(go(&["--help"]).code, 0);
        let o = go(&["reciprocity-point", "u", "t-u", "t"]);
        assert_eq!(o.code, 2);
        assert!(o.stderr.contains("not one of the declared curves"));
    }

    #[test]
    fn curve_parsing() {
        let k = FieldSpec::parse("3").unwrap();
        assert_eq!(parse_curve("t=u^2", &k).unwrap().label(), "t=u^2");
        assert_eq!(parse_curve("u = 2*t", &k).unwrap().label(), "u=2*t");
        assert!(parse_curve("t=t", &k).is_err());
        assert!(parse_curve("t=1+u", &k).is_err());
    }
}
