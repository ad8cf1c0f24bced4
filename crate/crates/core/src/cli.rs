//! Command line front end. Every command builds a JSON report; `--format
//! text` renders the same report line by line.

use std::collections::BTreeMap;

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::cycles::{
    cohomology_window, differential, reciprocity_defect, trace, Coord, CycleClass, FormalSum, FormalSymbol,
    FormalUnit, Morphism,
};
use crate::error::{Error, Result};
use crate::exactfield::parse::{parse_expr_at, parse_field, parse_poly, Expr, FieldLiteral};
use crate::exactfield::{unit_factor, FfEmbedding, FiniteField};
use crate::milnor::{cor, symbol, FieldMap, FieldRef, KElement, Place, Unit};
use crate::premodule::{milnor_instance, parse_instance, replay, run_relation_suite, sample, SuiteConfig, CATALOGUE};
use crate::schemes::{parse_scheme, MPoly, PointId, SchemeKind, SchemeModel};

#[derive(Parser, Debug, Clone)]
#[command(name = "cyclemod", version, about = "Milnor K-theory, cycle premodules and Chow groups with coefficients")]
pub struct Invocation {
    #[command(subcommand)]
    pub command: Command,
    /// Seed for every randomized check.
    #[arg(long, global = true, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the report to this file instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Normal form of a sum of symbols. The symbol may carry its field and
    /// degree as in `{t, t+1}@GF(3)(t):2`.
    Symbol {
        #[arg(long)]
        field: Option<String>,
        #[arg(long)]
        symbol: String,
    },
    /// Residue of a class of `F_q(t)` at a place.
    Residue {
        #[arg(long)]
        field: Option<String>,
        #[arg(long)]
        place: String,
        #[arg(long)]
        symbol: String,
        #[arg(long, default_value = "milnor")]
        instance: String,
    },
    /// Corestriction from the degree-`a` constant extension (`--map ext:a`).
    Norm {
        #[arg(long)]
        field: String,
        #[arg(long)]
        map: String,
        /// A class over the extension; `g` is its generator.
        #[arg(long)]
        symbol: String,
    },
    /// Differential of a one-point class.
    Diff {
        #[arg(long)]
        scheme: String,
        #[arg(long)]
        field: String,
        /// `generic`, a place of a line, or a curve id of a plane.
        #[arg(long, default_value = "generic")]
        point: String,
        #[arg(long)]
        symbol: String,
        #[arg(long, default_value = "milnor")]
        instance: String,
    },
    /// `A^p(X; M)_n` on the window of points of degree at most the bound.
    Cohomology {
        #[arg(long)]
        scheme: String,
        #[arg(long)]
        field: String,
        #[arg(long)]
        p: usize,
        #[arg(long)]
        n: i64,
        #[arg(long, default_value_t = 2)]
        degree_bound: u32,
        #[arg(long, default_value = "milnor")]
        instance: String,
    },
    /// The relation suite.
    Axioms {
        #[arg(long, default_value = "milnor")]
        instance: String,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        /// Comma-separated relation ids; all by default.
        #[arg(long)]
        relation: Option<String>,
        /// Re-evaluate a single trial of one relation.
        #[arg(long)]
        replay: Option<usize>,
    },
    /// Weil reciprocity on random or given classes of `K_2(F_q(t))`.
    Reciprocity {
        #[arg(long)]
        field: String,
        #[arg(long, default_value_t = 500)]
        trials: usize,
        #[arg(long)]
        symbol: Option<String>,
    },
    /// `f_*(1)` for a finite map of lines: `t->g(t)` or `ext:a`.
    Trace {
        #[arg(long)]
        map: String,
        #[arg(long, default_value = "P1")]
        scheme: String,
        #[arg(long)]
        field: String,
    },
}

/// Exit status and report text.
pub fn run(inv: &Invocation) -> (i32, String) {
    let (code, report) = match execute(inv) {
        Ok((ok, v)) => (if ok { 0 } else { 1 }, v),
        Err(e) => (2, json!({"error": e.to_string(), "kind": error_kind(&e)})),
    };
    let text = match inv.format {
        Format::Json => serde_json::to_string_pretty(&report).expect("serializable") + "\n",
        Format::Text => render_text(&report),
    };
    (code, text)
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Parse { .. } => "parse",
        Error::Scheme { .. } => "scheme",
        Error::Unsupported(_) => "unsupported",
        _ => "input",
    }
}

fn execute(inv: &Invocation) -> Result<(bool, Value)> {
    match &inv.command {
        Command::Symbol { field, symbol } => {
            let (f, _, x) = literal(symbol, field.as_deref())?;
            Ok((true, json!({"command": "symbol", "field": f.to_string(), "result": x.render(), "kelement": x.to_json()})))
        }
        Command::Residue {
            field,
            place,
            symbol,
            instance,
        } => {
            let inst = parse_instance(instance)?;
            let (f, var, x) = literal(symbol, field.as_deref())?;
            let FieldRef::Rational(base) = &f else {
                return Err(Error::Invalid("residues need a rational function field".into()));
            };
            let v = place_in(place, base, &var)?;
            let x = inst.from_milnor(&x);
            let r = inst.residue(&v, &x)?;
            Ok((
                true,
                json!({
                    "command": "residue",
                    "field": f.to_string(),
                    "place": v.render(),
                    "instance": inst.name(),
                    "result": r.render(),
                    "kelement": r.to_json(),
                }),
            ))
        }
        Command::Norm { field, map, symbol } => {
            let (f, var) = field_ref(field)?;
            let a: u32 = map
                .strip_prefix("ext:")
                .and_then(|s| s.trim().parse().ok())
                .filter(|&a| a >= 1)
                .ok_or_else(|| Error::Parse { pos: 0, msg: format!("expected 'ext:<degree>', got '{map}'") })?;
            let base = f.base().clone();
            let big = base.extension(a)?;
            let emb = FfEmbedding::canonical(&base, &big)?;
            let (src, fmap) = match f {
                FieldRef::Finite(_) => (FieldRef::Finite(big), FieldMap::Finite(emb)),
                FieldRef::Rational(_) => (FieldRef::Rational(big), FieldMap::constant_extension(emb)),
            };
            let x = parse_symbol_sum(symbol, &src, &var)?;
            let r = cor(&fmap, &x)?;
            Ok((
                true,
                json!({
                    "command": "norm",
                    "from": src.to_string(),
                    "to": f.to_string(),
                    "symbol": x.render(),
                    "result": r.render(),
                    "kelement": r.to_json(),
                }),
            ))
        }
        Command::Diff {
            scheme,
            field,
            point,
            symbol,
            instance,
        } => {
            let inst = parse_instance(instance)?;
            let f = finite_field(field)?;
            let x = parse_scheme(scheme, &f)?;
            let at = parse_point(&x, point)?;
            let r = x.resolve(&at)?;
            let coord = match &r.residue {
                Some(k) => Coord::K(inst.from_milnor(&parse_symbol_sum(symbol, k, "t")?)),
                None => Coord::Formal(parse_formal_sum(symbol, &x)?),
            };
            let degree = match &coord {
                Coord::K(k) => inst.degree_of(k),
                Coord::Formal(s) => s.degree - inst.shift(),
            };
            let c = CycleClass::new(&x, &inst, r.codim, degree + r.codim as i64)?.with_coord(&at, &coord)?;
            let d = differential(&c)?;
            Ok((
                true,
                json!({
                    "command": "diff",
                    "class": c.to_json(),
                    "result": d.render(),
                    "differential": d.to_json(),
                }),
            ))
        }
        Command::Cohomology {
            scheme,
            field,
            p,
            n,
            degree_bound,
            instance,
        } => {
            let inst = parse_instance(instance)?;
            let f = finite_field(field)?;
            let x = parse_scheme(scheme, &f)?;
            let g = cohomology_window(&x, &inst, *p, *n, *degree_bound)?;
            Ok((
                true,
                json!({
                    "command": "cohomology",
                    "scheme": x.name(),
                    "instance": inst.name(),
                    "p": p,
                    "n": n,
                    "degree_bound": degree_bound,
                    "presentation": g.to_json(),
                }),
            ))
        }
        Command::Axioms {
            instance,
            trials,
            relation,
            replay: which,
        } => {
            let inst = parse_instance(instance)?;
            let relations: Vec<String> = match relation {
                Some(r) => r.split(',').map(|s| s.trim().to_string()).collect(),
                None => CATALOGUE.iter().map(|s| s.to_string()).collect(),
            };
            if let Some(k) = which {
                let [id] = relations.as_slice() else {
                    return Err(Error::Invalid("--replay needs exactly one --relation".into()));
                };
                let failure = replay(&inst, id, inv.seed, *k)?;
                return Ok((
                    failure.is_none(),
                    json!({
                        "command": "axioms",
                        "instance": inst.name(),
                        "relation": id,
                        "seed": inv.seed,
                        "trial": k,
                        "passed": failure.is_none(),
                        "failure": failure,
                    }),
                ));
            }
            let config = SuiteConfig {
                trials: *trials,
                seed: inv.seed,
                relations,
            };
            let reports = run_relation_suite(&inst, &config)?;
            let passed = reports.iter().all(|r| r.passed);
            Ok((
                passed,
                json!({
                    "command": "axioms",
                    "instance": inst.name(),
                    "seed": inv.seed,
                    "trials": trials,
                    "passed": passed,
                    "relations": reports,
                }),
            ))
        }
        Command::Reciprocity { field, trials, symbol } => {
            let f = finite_field(field)?;
            let inst = milnor_instance();
            let rational = FieldRef::Rational(f.clone());
            let classes: Vec<KElement> = match symbol {
                Some(s) => vec![parse_symbol_sum(s, &rational, "t")?],
                None => {
                    let mut rng = ChaCha8Rng::seed_from_u64(inv.seed);
                    (0..*trials).map(|_| sample::milnor(&mut rng, &rational, 2)).collect()
                }
            };
            let mut failures = Vec::new();
            for (i, x) in classes.iter().enumerate() {
                if x.degree() != 2 {
                    return Err(Error::DegreeMismatch(2, x.degree()));
                }
                let defect = reciprocity_defect(x, &inst)?;
                if !defect.is_zero() {
                    failures.push(json!({"trial": i, "class": x.render(), "defect": defect.render()}));
                }
            }
            let passed = failures.is_empty();
            Ok((
                passed,
                json!({
                    "command": "reciprocity",
                    "field": f.to_string(),
                    "seed": inv.seed,
                    "classes": classes.len(),
                    "passed": passed,
                    "failures": failures,
                }),
            ))
        }
        Command::Trace { map, scheme, field } => {
            let f = finite_field(field)?;
            let x = parse_scheme(scheme, &f)?;
            let (m, degree) = parse_map(map, &x)?;
            let value = trace(&m, &milnor_instance())?;
            let passed = value == degree as i64;
            Ok((
                passed,
                json!({
                    "command": "trace",
                    "map": map,
                    "scheme": m.source.name(),
                    "degree": degree,
                    "trace": value,
                    "passed": passed,
                }),
            ))
        }
    }
}

fn field_ref(s: &str) -> Result<(FieldRef, String)> {
    Ok(match parse_field(s)? {
        FieldLiteral::Finite(f) => (FieldRef::Finite(f), "t".into()),
        FieldLiteral::Rational(f, var) => (FieldRef::Rational(f), var),
    })
}

/// A symbol sum with an optional `@field[:degree]` suffix; the suffix wins
/// over `--field`.
fn literal(s: &str, field: Option<&str>) -> Result<(FieldRef, String, KElement)> {
    let (body, suffix) = match s.find('@') {
        Some(at) => (&s[..at], Some((&s[at + 1..], at + 1))),
        None => (s, None),
    };
    let mut degree = None;
    let spec = match suffix {
        Some((rest, at)) => match rest.rfind(':') {
            Some(c) if rest[c + 1..].trim().chars().all(|ch| ch.is_ascii_digit()) && c + 1 < rest.len() => {
                degree = Some((rest[c + 1..].trim().parse::<i64>().map_err(|_| Error::Parse {
                    pos: at + c + 1,
                    msg: "bad degree".into(),
                })?, at + c + 1));
                rest[..c].to_string()
            }
            _ => rest.to_string(),
        },
        None => field
            .ok_or_else(|| Error::Parse { pos: 0, msg: "no field: pass --field or a '@field' suffix".into() })?
            .to_string(),
    };
    let (f, var) = field_ref(&spec)?;
    let x = parse_symbol_sum(body, &f, &var)?;
    if let Some((n, pos)) = degree {
        if x.degree() != n {
            return Err(Error::Parse { pos, msg: format!("declared degree {n}, symbol has degree {}", x.degree()) });
        }
    }
    Ok((f, var, x))
}

fn finite_field(s: &str) -> Result<FiniteField> {
    Ok(field_ref(s)?.0.base().clone())
}

fn place_in(s: &str, f: &FiniteField, var: &str) -> Result<Place> {
    let s = s.trim();
    if s == "inf" || s == "infinity" {
        return Ok(Place::infinite(f));
    }
    Place::finite(parse_poly(s, f, var)?)
}

fn parse_point(x: &SchemeModel, s: &str) -> Result<PointId> {
    let s = s.trim();
    if s == "generic" {
        return Ok(PointId::Generic);
    }
    match x.kind() {
        SchemeKind::Line { .. } => Ok(PointId::Place(place_in(s, x.base(), "t")?)),
        SchemeKind::Plane { .. } => x
            .curves()
            .iter()
            .position(|c| c.id == s)
            .map(PointId::Curve)
            .ok_or_else(|| Error::UnknownPoint(format!("no curve '{s}' on {}", x.name()))),
        _ => Err(Error::UnknownPoint(format!("'{s}' on {}", x.name()))),
    }
}

/// `t->g(t)` or `ext:a`, with the degree of the map.
fn parse_map(s: &str, x: &SchemeModel) -> Result<(Morphism, u64)> {
    let s = s.trim();
    if let Some(rest) = s.strip_prefix("ext:") {
        let a: u32 = rest
            .trim()
            .parse()
            .ok()
            .filter(|&a| a >= 1)
            .ok_or_else(|| Error::Parse { pos: 4, msg: format!("bad extension degree '{rest}'") })?;
        let emb = FfEmbedding::canonical(x.base(), &x.base().extension(a)?)?;
        return Ok((Morphism::base_change(x, &emb)?, a as u64));
    }
    let arrow = s
        .find("->")
        .ok_or_else(|| Error::Parse { pos: 0, msg: "expected 't->g(t)' or 'ext:<degree>'".into() })?;
    if s[..arrow].trim() != "t" {
        return Err(Error::Parse { pos: 0, msg: "the map variable must be 't'".into() });
    }
    let g = parse_expr_at(&s[arrow + 2..], arrow + 2)?.to_rational(x.base(), "t")?;
    if !g.den().is_one() {
        return Err(Error::Unsupported("substitution by a non-polynomial".into()));
    }
    let g = g.num().clone();
    let d = g.deg() as u64;
    Ok((Morphism::substitution(x, &g)?, d))
}

/// Top-level terms `[k*]{a, b, ...}` or integers, with their offsets.
fn split_terms(s: &str) -> Result<Vec<(i64, Option<Vec<(String, usize)>>, usize)>> {
    let b = s.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    let mut sign = 1i64;
    let skip = |i: &mut usize| {
        while *i < b.len() && b[*i].is_ascii_whitespace() {
            *i += 1;
        }
    };
    loop {
        skip(&mut i);
        if i < b.len() && (b[i] == b'+' || b[i] == b'-') {
            if b[i] == b'-' {
                sign = -sign;
            }
            i += 1;
            continue;
        }
        if i >= b.len() {
            return Err(Error::Parse { pos: i, msg: "expected a symbol".into() });
        }
        let start = i;
        let mut coeff = 1i64;
        if b[i].is_ascii_digit() {
            let j = i + b[i..].iter().take_while(|c| c.is_ascii_digit()).count();
            coeff = s[i..j].parse().map_err(|_| Error::Parse { pos: i, msg: "coefficient too large".into() })?;
            i = j;
            skip(&mut i);
            if i < b.len() && b[i] == b'*' {
                i += 1;
                skip(&mut i);
            } else {
                out.push((sign * coeff, None, start));
                sign = 1;
                skip(&mut i);
                if i >= b.len() {
                    return Ok(out);
                }
                if b[i] != b'+' && b[i] != b'-' {
                    return Err(Error::Parse { pos: i, msg: "expected '+' or '-'".into() });
                }
                continue;
            }
        }
        if i >= b.len() || b[i] != b'{' {
            return Err(Error::Parse { pos: i, msg: "expected '{'".into() });
        }
        let close = s[i..]
            .find('}')
            .map(|k| i + k)
            .ok_or_else(|| Error::Parse { pos: i, msg: "unclosed '{'".into() })?;
        let inner = &s[i + 1..close];
        let mut entries = Vec::new();
        if !inner.trim().is_empty() {
            let mut off = i + 1;
            for part in inner.split(',') {
                entries.push((part.to_string(), off));
                off += part.len() + 1;
            }
        }
        out.push((sign * coeff, Some(entries), start));
        sign = 1;
        i = close + 1;
        skip(&mut i);
        if i >= b.len() {
            return Ok(out);
        }
        if b[i] != b'+' && b[i] != b'-' {
            return Err(Error::Parse { pos: i, msg: "expected '+' or '-'".into() });
        }
    }
}

/// Parses a sum of symbols over `field` into its normal form.
pub fn parse_symbol_sum(s: &str, field: &FieldRef, var: &str) -> Result<KElement> {
    let mut acc: Option<KElement> = None;
    for (coeff, entries, pos) in split_terms(s)? {
        let term = match entries {
            None => KElement::integer(field, 1, 0),
            Some(entries) => {
                let mut units = Vec::with_capacity(entries.len());
                for (text, off) in entries {
                    let e = parse_expr_at(&text, off)?;
                    units.push(unit_of_expr(&e, field, var).map_err(|err| match err {
                        Error::Parse { .. } => err,
                        other => Error::Parse { pos: off, msg: other.to_string() },
                    })?);
                }
                symbol(field, &units, 0)?
            }
        };
        let term = term.scale(coeff)?;
        acc = Some(match acc {
            None => term,
            Some(a) => a.add(&term).map_err(|e| Error::Parse { pos, msg: e.to_string() })?,
        });
    }
    acc.ok_or_else(|| Error::Parse { pos: 0, msg: "empty symbol".into() })
}

fn unit_of_expr(e: &Expr, field: &FieldRef, var: &str) -> Result<Unit> {
    match field {
        FieldRef::Finite(f) => {
            let r = e.to_rational(f, "\u{0}")?;
            if r.num().deg() > 0 || !r.den().is_one() {
                return Err(Error::Invalid("entry is not a constant".into()));
            }
            Unit::constant(field, r.num().coeff(0))
        }
        FieldRef::Rational(f) => {
            let r = e.to_rational(f, var)?;
            if r.is_zero() {
                return Err(Error::ZeroElement);
            }
            Ok(Unit::Rational(unit_factor(&r)?))
        }
    }
}

/// Parses a sum of symbols whose entries are products of declared curve
/// equations and constants, in the plane coordinates.
pub fn parse_formal_sum(s: &str, x: &SchemeModel) -> Result<FormalSum> {
    let vars: &[&str] = if x.is_projective() { &["X", "Y", "Z"] } else { &["x", "y"] };
    let mut terms = Vec::new();
    let mut degree = None;
    for (coeff, entries, pos) in split_terms(s)? {
        let entries = entries.unwrap_or_default();
        if *degree.get_or_insert(entries.len()) != entries.len() {
            return Err(Error::Parse { pos, msg: "terms of different degrees".into() });
        }
        let mut units = Vec::new();
        for (text, off) in entries {
            let e = parse_expr_at(&text, off)?;
            units.push(formal_unit(&e, x, vars).map_err(|err| match err {
                Error::Parse { .. } => err,
                other => Error::Parse { pos: off, msg: other.to_string() },
            })?);
        }
        terms.push(FormalSymbol { coeff, units });
    }
    Ok(FormalSum {
        degree: degree.unwrap_or(0) as i64,
        terms,
    })
}

fn formal_unit(e: &Expr, x: &SchemeModel, vars: &[&str]) -> Result<FormalUnit> {
    let f = x.base();
    Ok(match e {
        Expr::Mul(a, b) => formal_unit(a, x, vars)?.mul(&formal_unit(b, x, vars)?, f),
        Expr::Div(a, b) => formal_unit(a, x, vars)?.mul(&formal_unit(b, x, vars)?.pow(-1, f), f),
        Expr::Pow(a, k) => formal_unit(a, x, vars)?.pow(*k, f),
        Expr::Neg(a) => formal_unit(a, x, vars)?.mul(&FormalUnit::constant(f.neg(1)), f),
        _ => {
            let p = MPoly::from_expr(e, f, vars)?;
            if p.is_zero() {
                return Err(Error::ZeroElement);
            }
            if p.total_degree() == 0 {
                return Ok(FormalUnit::constant(*p.terms().values().next().expect("nonzero")));
            }
            let n = p.normalized();
            let j = x
                .curves()
                .iter()
                .position(|c| c.equation.normalized() == n)
                .ok_or_else(|| Error::UndeclaredSupport(format!("'{}' is not a declared curve", p.render(vars))))?;
            let lead = *p.terms().values().next_back().expect("nonzero");
            let clead = *x.curves()[j].equation.terms().values().next_back().expect("nonzero");
            FormalUnit {
                constant: f.div(lead, clead)?,
                exps: BTreeMap::from([(j, 1)]),
            }
        }
    })
}

fn render_text(v: &Value) -> String {
    let mut out = String::new();
    render_value(v, 0, &mut out);
    out
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("null".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(a) if a.is_empty() => Some("[]".into()),
        Value::Array(a) if a.iter().all(|x| matches!(x, Value::Number(_) | Value::String(_))) => {
            Some(format!("[{}]", a.iter().map(|x| scalar(x).unwrap()).collect::<Vec<_>>().join(", ")))
        }
        Value::Object(o) if o.is_empty() => Some("{}".into()),
        _ => None,
    }
}

fn render_value(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(o) => {
            for (k, x) in o {
                match scalar(x) {
                    Some(s) => out.push_str(&format!("{pad}{k}: {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        render_value(x, indent + 1, out);
                    }
                }
            }
        }
        Value::Array(a) => {
            for x in a {
                match scalar(x) {
                    Some(s) => out.push_str(&format!("{pad}- {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}-\n"));
                        render_value(x, indent + 1, out);
                    }
                }
            }
        }
        other => out.push_str(&format!("{pad}{}\n", scalar(other).unwrap_or_default())),
    }
}

/// Parses arguments, runs, and writes the report; returns the exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let inv = match Invocation::try_parse_from(args) {
        Ok(inv) => inv,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let (code, text) = run(&inv);
    match &inv.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &text) {
                eprintln!("cannot write {path}: {e}");
                return 2;
            }
        }
        None => print!("{text}"),
    }
    code
}
