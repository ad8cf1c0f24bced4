//! Cycle classes: finitely supported assignments of instance values to the
//! points of a scheme model.

use std::collections::BTreeMap;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exactfield::{FactoredUnit, FiniteField, Poly};
use crate::milnor::{local_residue, FieldRef, KElement, Unit};
use crate::premodule::PremoduleInstance;
use crate::schemes::{PointId, SchemeModel};

/// `c * prod F_j^(e_j)` for declared curve equations `F_j`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct FormalUnit {
    pub constant: u32,
    pub exps: BTreeMap<usize, i64>,
}

impl FormalUnit {
    pub fn constant(c: u32) -> FormalUnit {
        FormalUnit {
            constant: c,
            exps: BTreeMap::new(),
        }
    }

    pub fn curve(j: usize) -> FormalUnit {
        FormalUnit {
            constant: 1,
            exps: [(j, 1)].into_iter().collect(),
        }
    }

    pub fn mul(&self, o: &FormalUnit, f: &FiniteField) -> FormalUnit {
        let mut exps = self.exps.clone();
        for (&j, &e) in &o.exps {
            *exps.entry(j).or_insert(0) += e;
        }
        exps.retain(|_, e| *e != 0);
        FormalUnit {
            constant: f.mul(self.constant, o.constant),
            exps,
        }
    }

    pub fn pow(&self, k: i64, f: &FiniteField) -> FormalUnit {
        FormalUnit {
            constant: f.pow(self.constant, k),
            exps: self.exps.iter().map(|(&j, &e)| (j, e * k)).filter(|(_, e)| *e != 0).collect(),
        }
    }

    pub fn render(&self, scheme: &SchemeModel) -> String {
        let f = scheme.base();
        let mut parts = vec![];
        if self.constant != 1 || self.exps.is_empty() {
            parts.push(f.render(self.constant));
        }
        for (&j, &e) in &self.exps {
            let name = scheme.curves().get(j).map(|c| c.description.clone()).unwrap_or_default();
            parts.push(if e == 1 { format!("({name})") } else { format!("({name})^{e}") });
        }
        parts.join("*")
    }
}

/// `coeff * {u_1, ..., u_r}`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FormalSymbol {
    pub coeff: i64,
    pub units: Vec<FormalUnit>,
}

/// A class of Milnor K-theory of the function field of a plane, written with
/// units supported on the declared curves. Not a normal form.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FormalSum {
    pub degree: i64,
    pub terms: Vec<FormalSymbol>,
}

impl FormalSum {
    pub fn zero(degree: i64) -> FormalSum {
        FormalSum { degree, terms: vec![] }
    }

    pub fn symbol(coeff: i64, units: Vec<FormalUnit>) -> FormalSum {
        FormalSum {
            degree: units.len() as i64,
            terms: vec![FormalSymbol { coeff, units }],
        }
    }

    /// Curves on which some unit has nonzero valuation.
    pub fn curves(&self) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .terms
            .iter()
            .flat_map(|t| t.units.iter().flat_map(|u| u.exps.keys().copied()))
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn render(&self, scheme: &SchemeModel) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|t| {
                let units: Vec<String> = t.units.iter().map(|u| u.render(scheme)).collect();
                let body = format!("{{{}}}", units.join(", "));
                if t.coeff == 1 {
                    body
                } else {
                    format!("{}*{body}", t.coeff)
                }
            })
            .collect();
        parts.join(" + ")
    }
}

/// Uniformizing coordinate form on the projective plane: a coordinate not
/// vanishing identically on curve `j`.
fn chart_form(scheme: &SchemeModel, j: usize) -> usize {
    let c = &scheme.curves()[j];
    (0..3).find(|&i| !c.param[i].is_zero()).expect("nonconstant parametrization")
}

/// Residue along curve `j` of a formal sum, as an integral Milnor class of
/// the function field of the curve's normalization.
pub fn formal_residue(scheme: &SchemeModel, j: usize, x: &FormalSum) -> Result<KElement> {
    let f = scheme.base();
    let kappa = FieldRef::Rational(f.clone());
    let curve = scheme
        .curves()
        .get(j)
        .ok_or_else(|| Error::UnknownPoint(format!("curve {j} on {}", scheme.name())))?;
    let projective = scheme.is_projective();
    let param: &[Poly] = if projective { &curve.param } else { &curve.param[..2] };
    let restricted: Vec<Option<FactoredUnit>> = scheme
        .curves()
        .iter()
        .enumerate()
        .map(|(k, c)| {
            if k == j {
                Ok(None)
            } else {
                FactoredUnit::from_poly(&c.equation.compose(param)).map(Some)
            }
        })
        .collect::<Result<_>>()?;
    let chart = if projective {
        Some(FactoredUnit::from_poly(&curve.param[chart_form(scheme, j)])?)
    } else {
        None
    };
    let mut acc = KElement::zero(&kappa, x.degree - 1, 0);
    if x.degree <= 0 {
        return Ok(acc);
    }
    for term in &x.terms {
        let mut locals = Vec::with_capacity(term.units.len());
        for u in &term.units {
            let a = u.exps.get(&j).copied().unwrap_or(0);
            let mut w = FactoredUnit::constant(f, u.constant)?;
            for (&k, &e) in &u.exps {
                if let Some(r) = &restricted[k] {
                    w = w.mul(&r.pow(e));
                }
            }
            if let Some(l) = &chart {
                w = w.mul(&l.pow(a * curve.degree as i64));
            }
            locals.push((a, Unit::Rational(w)));
        }
        acc = acc.add(&local_residue(&kappa, &locals)?.scale(term.coeff)?)?;
    }
    Ok(acc)
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Coord {
    K(KElement),
    Formal(FormalSum),
}

impl Coord {
    pub fn as_k(&self) -> Option<&KElement> {
        match self {
            Coord::K(x) => Some(x),
            Coord::Formal(_) => None,
        }
    }
}

/// An element of `C^p(X; M)_n`: the coordinate at a point `x` of codimension
/// `p` lies in `M(kappa_x, n - p)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CycleClass {
    pub scheme: SchemeModel,
    pub instance: PremoduleInstance,
    pub p: usize,
    pub n: i64,
    coords: BTreeMap<PointId, Coord>,
}

impl CycleClass {
    pub fn new(scheme: &SchemeModel, instance: &PremoduleInstance, p: usize, n: i64) -> Result<CycleClass> {
        if p > scheme.dim() {
            return Err(Error::CodimOutOfRange {
                p: p as i64,
                dim: scheme.dim() as i64,
            });
        }
        Ok(CycleClass {
            scheme: scheme.clone(),
            instance: instance.clone(),
            p,
            n,
            coords: BTreeMap::new(),
        })
    }

    /// Internal Milnor degree of every coordinate.
    pub fn coordinate_degree(&self) -> i64 {
        self.instance.internal(self.n - self.p as i64)
    }

    pub fn coords(&self) -> &BTreeMap<PointId, Coord> {
        &self.coords
    }

    pub fn get(&self, x: &PointId) -> Option<&Coord> {
        self.coords.get(x)
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_empty()
    }

    /// Adds `v` to the coordinate at `x`.
    pub fn add_k(&mut self, x: &PointId, v: &KElement) -> Result<()> {
        let r = self.scheme.resolve(x)?;
        if r.codim != self.p {
            return Err(Error::Invalid(format!(
                "point {} has codimension {}, class has {}",
                self.scheme.render_point(x),
                r.codim,
                self.p
            )));
        }
        let field = r
            .residue
            .ok_or_else(|| Error::Invalid("generic point of a plane takes a formal coordinate".into()))?;
        if v.field() != &field {
            return Err(Error::FieldMismatch(format!("coordinate over {} at a point with residue field {field}", v.field())));
        }
        if v.degree() != self.coordinate_degree() {
            return Err(Error::DegreeMismatch(self.coordinate_degree(), v.degree()));
        }
        if v.cap() != self.instance.cap() {
            return Err(Error::Invalid("coordinate not in the instance's coefficients".into()));
        }
        let sum = match self.coords.get(x) {
            Some(Coord::K(old)) => self.instance.add(old, v)?,
            Some(Coord::Formal(_)) => unreachable!("formal coordinates only at plane generic points"),
            None => v.clone(),
        };
        if sum.is_zero() {
            self.coords.remove(x);
        } else {
            self.coords.insert(x.clone(), Coord::K(sum));
        }
        Ok(())
    }

    /// Adds a formal sum at the generic point of a plane.
    pub fn add_formal(&mut self, x: &PointId, v: &FormalSum) -> Result<()> {
        let r = self.scheme.resolve(x)?;
        if r.residue.is_some() || r.codim != 0 || self.p != 0 {
            return Err(Error::Invalid("formal coordinates live at the generic point of a plane".into()));
        }
        if v.degree != self.coordinate_degree() {
            return Err(Error::DegreeMismatch(self.coordinate_degree(), v.degree));
        }
        let (model, _) = self.scheme.locate(x);
        let f = model.base();
        for t in &v.terms {
            if t.units.len() as i64 != v.degree {
                return Err(Error::DegreeMismatch(v.degree, t.units.len() as i64));
            }
            for u in &t.units {
                if u.constant == 0 || u.constant >= f.order() {
                    return Err(Error::ZeroElement);
                }
                if let Some((&j, _)) = u.exps.iter().find(|(&j, _)| j >= model.curves().len()) {
                    return Err(Error::UndeclaredSupport(format!("curve index {j}")));
                }
                let weight: i64 = u.exps.iter().map(|(&j, &e)| e * model.curves()[j].degree as i64).sum();
                if model.is_projective() && weight != 0 {
                    return Err(Error::Invalid("unit on the projective plane must have degree 0".into()));
                }
            }
        }
        let mut sum = match self.coords.remove(x) {
            Some(Coord::Formal(s)) => s,
            _ => FormalSum::zero(v.degree),
        };
        sum.terms.extend(v.terms.iter().filter(|t| t.coeff != 0).cloned());
        if !sum.terms.is_empty() {
            self.coords.insert(x.clone(), Coord::Formal(sum));
        }
        Ok(())
    }

    pub fn with_coord(mut self, x: &PointId, v: &Coord) -> Result<CycleClass> {
        match v {
            Coord::K(k) => self.add_k(x, k)?,
            Coord::Formal(s) => self.add_formal(x, s)?,
        }
        Ok(self)
    }

    pub fn render(&self) -> String {
        if self.coords.is_empty() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .coords
            .iter()
            .map(|(x, c)| {
                let v = match c {
                    Coord::K(k) => k.render(),
                    Coord::Formal(s) => s.render(self.scheme.locate(x).0),
                };
                format!("{} -> {v}", self.scheme.render_point(x))
            })
            .collect();
        format!("[{}]", parts.join("; "))
    }

    pub fn to_json(&self) -> Value {
        let coords: Vec<Value> = self
            .coords
            .iter()
            .map(|(x, c)| {
                let k = match c {
                    Coord::K(k) => k.to_json(),
                    Coord::Formal(s) => json!({"formal": s.render(self.scheme.locate(x).0), "degree": s.degree}),
                };
                json!({"point": self.scheme.render_point(x), "kelement": k})
            })
            .collect();
        json!({
            "scheme": self.scheme.name(),
            "instance": self.instance.name(),
            "p": self.p,
            "n": self.n,
            "coords": coords,
        })
    }
}
