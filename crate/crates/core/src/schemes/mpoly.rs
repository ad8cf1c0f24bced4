//! Sparse multivariate polynomials over a finite field, used for plane curve
//! equations.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::exactfield::parse::Expr;
use crate::exactfield::{FfEmbedding, FiniteField, Poly};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MPoly {
    field: FiniteField,
    nvars: usize,
    terms: BTreeMap<Vec<u32>, u32>,
}

impl MPoly {
    pub fn zero(field: &FiniteField, nvars: usize) -> MPoly {
        MPoly {
            field: field.clone(),
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(field: &FiniteField, nvars: usize, c: u32) -> MPoly {
        let mut out = MPoly::zero(field, nvars);
        if c != 0 {
            out.terms.insert(vec![0; nvars], c);
        }
        out
    }

    pub fn var(field: &FiniteField, nvars: usize, i: usize) -> MPoly {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut out = MPoly::zero(field, nvars);
        out.terms.insert(e, 1);
        out
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }
    pub fn nvars(&self) -> usize {
        self.nvars
    }
    pub fn terms(&self) -> &BTreeMap<Vec<u32>, u32> {
        &self.terms
    }
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, e: Vec<u32>, c: u32) {
        let cur = self.terms.get(&e).copied().unwrap_or(0);
        let s = self.field.add(cur, c);
        if s == 0 {
            self.terms.remove(&e);
        } else {
            self.terms.insert(e, s);
        }
    }

    pub fn add(&self, o: &MPoly) -> MPoly {
        let mut out = self.clone();
        for (e, &c) in &o.terms {
            out.add_term(e.clone(), c);
        }
        out
    }

    pub fn scale(&self, c: u32) -> MPoly {
        let mut out = MPoly::zero(&self.field, self.nvars);
        for (e, &k) in &self.terms {
            out.add_term(e.clone(), self.field.mul(k, c));
        }
        out
    }

    pub fn neg(&self) -> MPoly {
        self.scale(self.field.neg(1))
    }

    pub fn sub(&self, o: &MPoly) -> MPoly {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &MPoly) -> MPoly {
        let mut out = MPoly::zero(&self.field, self.nvars);
        for (a, &x) in &self.terms {
            for (b, &y) in &o.terms {
                let e: Vec<u32> = a.iter().zip(b).map(|(i, j)| i + j).collect();
                out.add_term(e, self.field.mul(x, y));
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> MPoly {
        let mut out = MPoly::constant(&self.field, self.nvars, 1);
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    pub fn is_homogeneous(&self) -> bool {
        let d = self.total_degree();
        self.terms.keys().all(|e| e.iter().sum::<u32>() == d)
    }

    /// Scalar multiple with leading coefficient 1 (largest exponent vector).
    pub fn normalized(&self) -> MPoly {
        match self.terms.iter().next_back() {
            Some((_, &c)) => self.scale(self.field.inv(c).expect("nonzero")),
            None => self.clone(),
        }
    }

    /// Substitutes univariate polynomials for the variables.
    pub fn compose(&self, polys: &[Poly]) -> Poly {
        let mut acc = Poly::zero(&self.field);
        for (e, &c) in &self.terms {
            let mut term = Poly::constant(&self.field, c);
            for (p, &k) in polys.iter().zip(e) {
                term = term.mul(&p.pow(k as u64));
            }
            acc = acc.add(&term);
        }
        acc
    }

    /// Value at a point with coordinates in an extension, coefficients mapped by `emb`.
    pub fn eval_in(&self, emb: &FfEmbedding, point: &[u32]) -> u32 {
        let k = emb.dst();
        let mut acc = 0;
        for (e, &c) in &self.terms {
            let mut term = emb.apply(c);
            for (&x, &i) in point.iter().zip(e) {
                term = k.mul(term, k.pow(x, i as i64));
            }
            acc = k.add(acc, term);
        }
        acc
    }

    /// Evaluates an expression tree; division only by nonzero constants.
    pub fn from_expr(expr: &Expr, field: &FiniteField, vars: &[&str]) -> Result<MPoly> {
        let n = vars.len();
        Ok(match expr {
            Expr::Int(k) => MPoly::constant(field, n, field.from_int(*k)),
            Expr::Gen => MPoly::constant(field, n, field.generator()),
            Expr::Var(v) => {
                let i = vars
                    .iter()
                    .position(|w| w == v)
                    .ok_or_else(|| Error::Invalid(format!("unknown variable '{v}', expected one of {vars:?}")))?;
                MPoly::var(field, n, i)
            }
            Expr::Neg(a) => MPoly::from_expr(a, field, vars)?.neg(),
            Expr::Add(a, b) => MPoly::from_expr(a, field, vars)?.add(&MPoly::from_expr(b, field, vars)?),
            Expr::Sub(a, b) => MPoly::from_expr(a, field, vars)?.sub(&MPoly::from_expr(b, field, vars)?),
            Expr::Mul(a, b) => MPoly::from_expr(a, field, vars)?.mul(&MPoly::from_expr(b, field, vars)?),
            Expr::Div(a, b) => {
                let d = MPoly::from_expr(b, field, vars)?;
                let c = match d.terms.iter().next() {
                    Some((e, &c)) if d.terms.len() == 1 && e.iter().all(|&k| k == 0) => c,
                    _ => return Err(Error::Invalid("polynomial division by a nonconstant".into())),
                };
                MPoly::from_expr(a, field, vars)?.scale(field.inv(c)?)
            }
            Expr::Pow(a, k) => {
                if *k < 0 {
                    return Err(Error::Invalid("negative power in a polynomial".into()));
                }
                MPoly::from_expr(a, field, vars)?.pow(*k as u32)
            }
        })
    }

    pub fn render(&self, vars: &[&str]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (e, &c) in self.terms.iter().rev() {
            let mono: Vec<String> = e
                .iter()
                .zip(vars)
                .filter(|(&k, _)| k > 0)
                .map(|(&k, v)| if k == 1 { v.to_string() } else { format!("{v}^{k}") })
                .collect();
            let coeff = self.field.render(c);
            parts.push(match (mono.is_empty(), c == 1) {
                (true, _) => coeff,
                (false, true) => mono.join("*"),
                (false, false) => format!("{coeff}*{}", mono.join("*")),
            });
        }
        parts.join(" + ")
    }
}

impl fmt::Debug for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = ["x0", "x1", "x2", "x3"];
        write!(f, "{}", self.render(&names[..self.nvars.min(4)]))
    }
}
