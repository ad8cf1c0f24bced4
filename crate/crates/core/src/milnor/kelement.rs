//! Normal form of Milnor K-theory classes.
//!
//! Coordinates:
//! * `K_0`: one integer at `Int`.
//! * `K_1(F_q)`: discrete log at `Const`, modulo `q - 1`.
//! * `K_1(F_q(t))`: `Const` holds the log of the leading constant, `Place(pi)`
//!   the exponent of `pi`.
//! * `K_2(F_q(t))`: `Place(pi)` holds the tame symbol at `pi` as a log in
//!   the residue field, modulo `q^deg(pi) - 1`.
//!
//! Everything else is zero. A nonzero `cap` reads every coordinate in the
//! quotient by `cap`.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use serde_json::{json, Value};

use super::field::FieldRef;
use crate::error::{Error, Result};
use crate::exactfield::{FactoredUnit, Poly};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum CoordKey {
    Int,
    Const,
    Place(Poly),
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct KElement {
    field: FieldRef,
    degree: i64,
    cap: u64,
    coords: BTreeMap<CoordKey, i64>,
}

/// Modulus of a coordinate in the integral group (0 for `Z`); `None` when the
/// key does not occur in that degree.
pub fn natural_modulus(field: &FieldRef, degree: i64, key: &CoordKey) -> Option<u64> {
    let q = field.base().order() as u64;
    match (degree, key, field) {
        (0, CoordKey::Int, _) => Some(0),
        (1, CoordKey::Const, _) => Some(q - 1),
        (1, CoordKey::Place(_), FieldRef::Rational(_)) => Some(0),
        (2, CoordKey::Place(p), FieldRef::Rational(_)) => Some(q.pow(p.deg() as u32) - 1),
        _ => None,
    }
}

fn effective(nat: u64, cap: u64) -> u64 {
    match (nat, cap) {
        (n, 0) => n,
        (0, c) => c,
        (n, c) => n.gcd(&c),
    }
}

impl KElement {
    pub fn zero(field: &FieldRef, degree: i64, cap: u64) -> KElement {
        KElement {
            field: field.clone(),
            degree,
            cap,
            coords: BTreeMap::new(),
        }
    }

    /// Builds from coordinates and normalizes.
    pub fn from_coords(
        field: &FieldRef,
        degree: i64,
        cap: u64,
        coords: impl IntoIterator<Item = (CoordKey, i64)>,
    ) -> Result<KElement> {
        let mut out = KElement::zero(field, degree, cap);
        for (k, v) in coords {
            out.add_coord(k, v)?;
        }
        Ok(out)
    }

    pub fn integer(field: &FieldRef, n: i64, cap: u64) -> KElement {
        Self::from_coords(field, 0, cap, [(CoordKey::Int, n)]).expect("K_0 coordinate")
    }

    /// `{u}` for a unit of `F_q(t)` given in factored form.
    pub fn from_unit(u: &FactoredUnit, cap: u64) -> KElement {
        let field = FieldRef::Rational(u.field().clone());
        let c = u.field().log(u.leading_constant()).expect("unit") as i64;
        let coords = std::iter::once((CoordKey::Const, c))
            .chain(u.factors().iter().map(|(p, &e)| (CoordKey::Place(p.clone()), e)));
        Self::from_coords(&field, 1, cap, coords).expect("K_1 coordinates")
    }

    /// `{a}` for a nonzero element of a finite field, given by its log.
    pub fn from_log(field: &FieldRef, log: i64, cap: u64) -> KElement {
        Self::from_coords(field, 1, cap, [(CoordKey::Const, log)]).expect("K_1 coordinate")
    }

    pub fn field(&self) -> &FieldRef {
        &self.field
    }
    pub fn degree(&self) -> i64 {
        self.degree
    }
    pub fn cap(&self) -> u64 {
        self.cap
    }
    pub fn coords(&self) -> &BTreeMap<CoordKey, i64> {
        &self.coords
    }
    pub fn is_zero(&self) -> bool {
        self.coords.is_empty()
    }
    pub fn get(&self, key: &CoordKey) -> i64 {
        self.coords.get(key).copied().unwrap_or(0)
    }

    /// Modulus of `key` in this group (0 for `Z`).
    pub fn modulus(&self, key: &CoordKey) -> Option<u64> {
        natural_modulus(&self.field, self.degree, key).map(|n| effective(n, self.cap))
    }

    fn add_coord(&mut self, key: CoordKey, v: i64) -> Result<()> {
        let m = self
            .modulus(&key)
            .ok_or_else(|| Error::Invalid(format!("coordinate {key:?} absent in degree {}", self.degree)))?;
        let cur = self.get(&key);
        let mut x = cur.checked_add(v).ok_or(Error::Overflow("K-group coordinate"))?;
        if m > 0 {
            x = x.rem_euclid(m as i64);
        }
        if x == 0 {
            self.coords.remove(&key);
        } else {
            self.coords.insert(key, x);
        }
        Ok(())
    }

    fn check_compatible(&self, o: &KElement) -> Result<()> {
        if self.field != o.field {
            return Err(Error::FieldMismatch(format!("{} vs {}", self.field, o.field)));
        }
        if self.degree != o.degree {
            return Err(Error::DegreeMismatch(self.degree, o.degree));
        }
        if self.cap != o.cap {
            return Err(Error::Invalid(format!("coefficients mod {} vs mod {}", self.cap, o.cap)));
        }
        Ok(())
    }

    pub fn add(&self, o: &KElement) -> Result<KElement> {
        self.check_compatible(o)?;
        let mut out = self.clone();
        for (k, &v) in &o.coords {
            out.add_coord(k.clone(), v)?;
        }
        Ok(out)
    }

    pub fn neg(&self) -> KElement {
        self.scale(-1).expect("negation")
    }

    pub fn sub(&self, o: &KElement) -> Result<KElement> {
        self.add(&o.neg())
    }

    pub fn scale(&self, k: i64) -> Result<KElement> {
        let mut out = KElement::zero(&self.field, self.degree, self.cap);
        for (key, &v) in &self.coords {
            let x = v.checked_mul(k).ok_or(Error::Overflow("K-group coordinate"))?;
            out.add_coord(key.clone(), x)?;
        }
        Ok(out)
    }

    /// Coordinate-wise sum without reduction; generally not a normal form.
    pub fn add_unreduced(&self, o: &KElement) -> Result<KElement> {
        self.check_compatible(o)?;
        let mut out = self.clone();
        for (k, &v) in &o.coords {
            let e = out.coords.entry(k.clone()).or_insert(0);
            *e = e.checked_add(v).ok_or(Error::Overflow("K-group coordinate"))?;
        }
        out.coords.retain(|_, v| *v != 0);
        Ok(out)
    }

    /// Coordinate-wise multiple without reduction.
    pub fn scale_unreduced(&self, k: i64) -> Result<KElement> {
        let mut out = self.clone();
        for v in out.coords.values_mut() {
            *v = v.checked_mul(k).ok_or(Error::Overflow("K-group coordinate"))?;
        }
        out.coords.retain(|_, v| *v != 0);
        Ok(out)
    }

    /// Image in the quotient by `m` (composable with an existing cap).
    pub fn reduce(&self, m: u64) -> KElement {
        let cap = effective(self.cap, m);
        Self::from_coords(&self.field, self.degree, cap, self.coords.clone()).expect("same keys")
    }

    /// A representative in the integral group.
    pub fn lift(&self) -> KElement {
        Self::from_coords(&self.field, self.degree, 0, self.coords.clone()).expect("same keys")
    }

    pub fn with_field(&self, field: &FieldRef) -> Result<KElement> {
        Self::from_coords(field, self.degree, self.cap, self.coords.clone())
    }

    /// Integral `K_1(F_q(t))` class as a factored unit.
    pub fn to_unit(&self) -> Result<FactoredUnit> {
        if self.degree != 1 || !self.field.is_rational() {
            return Err(Error::Invalid("not a K_1 class of a rational function field".into()));
        }
        let base = self.field.base();
        let c = base.exp(self.get(&CoordKey::Const));
        FactoredUnit::from_parts(
            base,
            c,
            self.coords.iter().filter_map(|(k, &v)| match k {
                CoordKey::Place(p) => Some((p.clone(), v)),
                _ => None,
            }),
        )
    }

    pub fn render(&self) -> String {
        if self.degree == 0 {
            return self.get(&CoordKey::Int).to_string();
        }
        if self.is_zero() {
            return "0".into();
        }
        let base = self.field.base();
        let body = match (self.degree, &self.field) {
            (1, FieldRef::Finite(_)) => format!("{{{}}}", base.render(base.exp(self.get(&CoordKey::Const)))),
            (1, FieldRef::Rational(_)) => match self.to_unit() {
                Ok(u) => format!("{{{}}}", u.render("t")),
                Err(_) => format!("{:?}", self.coords),
            },
            _ => {
                let parts: Vec<String> = self
                    .coords
                    .iter()
                    .map(|(k, &v)| match k {
                        CoordKey::Place(p) => {
                            let kp = base.extension(p.deg() as u32).expect("residue field");
                            format!("({}): {}", p.render("t"), kp.render(kp.exp(v)))
                        }
                        _ => format!("{k:?}: {v}"),
                    })
                    .collect();
                format!("tame[{}]", parts.join(", "))
            }
        };
        if self.cap > 0 {
            format!("{body} mod {}", self.cap)
        } else {
            body
        }
    }

    /// Deterministic JSON encoding.
    pub fn to_json(&self) -> Value {
        let base = self.field.base();
        let payload = match (self.degree, &self.field) {
            (0, _) => json!(self.get(&CoordKey::Int)),
            _ if self.is_zero() => Value::Null,
            (1, FieldRef::Finite(_)) => {
                let l = self.get(&CoordKey::Const);
                json!({"log": l, "value": base.render(base.exp(l))})
            }
            (1, FieldRef::Rational(_)) => {
                let factors: Vec<Value> = self
                    .coords
                    .iter()
                    .filter_map(|(k, &v)| match k {
                        CoordKey::Place(p) => Some(json!([p.render("t"), v])),
                        _ => None,
                    })
                    .collect();
                let l = self.get(&CoordKey::Const);
                json!({"constant": base.render(base.exp(l)), "factors": factors})
            }
            _ => {
                let tame: Vec<Value> = self
                    .coords
                    .iter()
                    .filter_map(|(k, &v)| match k {
                        CoordKey::Place(p) => Some(json!([p.render("t"), v])),
                        _ => None,
                    })
                    .collect();
                json!({"tame": tame})
            }
        };
        let mut obj = json!({
            "field": self.field.to_string(),
            "degree": self.degree,
            "value": payload,
            "text": self.render(),
        });
        if self.cap > 0 {
            obj["mod"] = json!(self.cap);
        }
        obj
    }
}

impl fmt::Debug for KElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "K{}({})[{}]", self.degree, self.field, self.render())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::make_field;

    #[test]
    fn reduction_of_coordinates() {
        let f5 = FieldRef::Finite(make_field(5, 1).unwrap());
        let a = KElement::from_log(&f5, 3, 0);
        let b = KElement::from_log(&f5, 1, 0);
        assert!(a.add(&b).unwrap().is_zero());
        assert_eq!(a.reduce(2).get(&CoordKey::Const), 1);
        assert!(a.reduce(3).is_zero() || a.reduce(3).get(&CoordKey::Const) == 0);
        assert!(KElement::integer(&f5, 4, 2).is_zero());
    }

    #[test]
    fn mismatched_degrees_are_rejected() {
        let f5 = FieldRef::Finite(make_field(5, 1).unwrap());
        let a = KElement::from_log(&f5, 3, 0);
        let b = KElement::integer(&f5, 1, 0);
        assert_eq!(a.add(&b).unwrap_err(), Error::DegreeMismatch(1, 0));
    }
}
