//! Cycle premodule instances over the field universe.
//!
//! An instance value in `M(E, n)` is a [`KElement`] of internal degree
//! `n + shift`, read modulo the instance cap.

use std::fmt;

use crate::error::{Error, Result};
use crate::exactfield::{FactoredUnit, FfEmbedding, Poly};
use crate::milnor::{self, FieldMap, FieldRef, KElement, Place};

/// Deliberately broken variants of the Milnor instance.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Mutant {
    /// Residue of degree-2 classes at the infinite place has the wrong sign.
    R3eSign,
    /// Restriction along `t -> g(s)` forgets multiplicities of the factors of `pi(g(s))`.
    DroppedRamification,
    /// Degree-2 residues use the last-slot convention.
    WrongSlot,
    /// Restriction ignores the Frobenius twist of constant embeddings.
    MissingConjugate,
    /// Addition and scaling of `K_1` coordinates skip reduction; equality is raw.
    NonNormalized,
}

impl Mutant {
    pub const ALL: [Mutant; 5] = [
        Mutant::R3eSign,
        Mutant::DroppedRamification,
        Mutant::WrongSlot,
        Mutant::MissingConjugate,
        Mutant::NonNormalized,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Mutant::R3eSign => "r3e-sign",
            Mutant::DroppedRamification => "dropped-ramification",
            Mutant::WrongSlot => "wrong-slot",
            Mutant::MissingConjugate => "missing-conjugate",
            Mutant::NonNormalized => "non-normalized",
        }
    }

    /// The relation this mutant is designed to break.
    pub fn target(&self) -> &'static str {
        match self {
            Mutant::R3eSign => "R3e",
            Mutant::DroppedRamification => "R3a",
            Mutant::WrongSlot => "R3d",
            Mutant::MissingConjugate => "R1c",
            Mutant::NonNormalized => "L5",
        }
    }

    pub fn parse(s: &str) -> Result<Mutant> {
        Mutant::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::Invalid(format!("unknown mutant '{s}'")))
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PremoduleInstance {
    base: String,
    cap: u64,
    shift: i64,
    mutant: Option<Mutant>,
}

impl fmt::Debug for PremoduleInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

pub fn milnor_instance() -> PremoduleInstance {
    PremoduleInstance {
        base: "milnor".into(),
        cap: 0,
        shift: 0,
        mutant: None,
    }
}

pub fn mod_instance(m: u64) -> Result<PremoduleInstance> {
    if m < 2 {
        return Err(Error::Invalid(format!("modulus must be at least 2, got {m}")));
    }
    Ok(PremoduleInstance {
        base: format!("mod:{m}"),
        cap: m,
        shift: 0,
        mutant: None,
    })
}

/// `M{r}(E, n) = M(E, n + r)`.
pub fn twist_instance(inst: &PremoduleInstance, r: i64) -> PremoduleInstance {
    PremoduleInstance {
        shift: inst.shift + r,
        ..inst.clone()
    }
}

pub fn mutant_instance(kind: Mutant) -> PremoduleInstance {
    PremoduleInstance {
        base: format!("mutant:{}", kind.name()),
        cap: 0,
        shift: 0,
        mutant: Some(kind),
    }
}

/// Parses `milnor`, `mod:m`, `mutant:<name>`, optionally followed by `+twist:r`.
pub fn parse_instance(s: &str) -> Result<PremoduleInstance> {
    let mut parts = s.split('+');
    let head = parts.next().unwrap_or("").trim();
    let mut inst = if head == "milnor" {
        milnor_instance()
    } else if let Some(m) = head.strip_prefix("mod:") {
        mod_instance(m.parse().map_err(|_| Error::Invalid(format!("bad modulus in '{s}'")))?)?
    } else if let Some(m) = head.strip_prefix("mutant:") {
        mutant_instance(Mutant::parse(m)?)
    } else if let Some(r) = head.strip_prefix("twist:") {
        twist_instance(&milnor_instance(), r.parse().map_err(|_| Error::Invalid(format!("bad twist in '{s}'")))?)
    } else {
        return Err(Error::Invalid(format!("unknown instance '{s}'")));
    };
    for p in parts {
        let r = p
            .trim()
            .strip_prefix("twist:")
            .and_then(|r| r.parse().ok())
            .ok_or_else(|| Error::Invalid(format!("bad twist in '{s}'")))?;
        inst = twist_instance(&inst, r);
    }
    Ok(inst)
}

impl PremoduleInstance {
    pub fn name(&self) -> String {
        if self.shift == 0 {
            self.base.clone()
        } else {
            format!("{}+twist:{}", self.base, self.shift)
        }
    }
    pub fn cap(&self) -> u64 {
        self.cap
    }
    pub fn shift(&self) -> i64 {
        self.shift
    }
    pub fn mutant(&self) -> Option<Mutant> {
        self.mutant
    }

    /// Internal Milnor degree of `M(E, n)`.
    pub fn internal(&self, n: i64) -> i64 {
        n + self.shift
    }

    /// The degree `n` with `x` in `M(E, n)`.
    pub fn degree_of(&self, x: &KElement) -> i64 {
        x.degree() - self.shift
    }

    pub fn zero(&self, field: &FieldRef, n: i64) -> KElement {
        KElement::zero(field, self.internal(n), self.cap)
    }

    /// The image of a Milnor class of degree `internal(n)`.
    pub fn from_milnor(&self, x: &KElement) -> KElement {
        x.reduce(self.cap)
    }

    fn check(&self, x: &KElement) -> Result<()> {
        if x.cap() != self.cap {
            return Err(Error::Invalid(format!("element mod {} used in instance {}", x.cap(), self.name())));
        }
        Ok(())
    }

    pub fn add(&self, a: &KElement, b: &KElement) -> Result<KElement> {
        self.check(a)?;
        if self.mutant == Some(Mutant::NonNormalized) {
            return a.add_unreduced(b);
        }
        a.add(b)
    }

    pub fn neg(&self, a: &KElement) -> Result<KElement> {
        self.scale(a, -1)
    }

    pub fn sub(&self, a: &KElement, b: &KElement) -> Result<KElement> {
        self.add(a, &self.neg(b)?)
    }

    pub fn scale(&self, a: &KElement, k: i64) -> Result<KElement> {
        self.check(a)?;
        if self.mutant == Some(Mutant::NonNormalized) {
            return a.scale_unreduced(k);
        }
        a.scale(k)
    }

    pub fn eq(&self, a: &KElement, b: &KElement) -> bool {
        a == b
    }

    /// Datum (D1).
    pub fn restrict(&self, map: &FieldMap, x: &KElement) -> Result<KElement> {
        self.check(x)?;
        match self.mutant {
            Some(Mutant::MissingConjugate) => milnor::res(&untwisted(map)?, x),
            Some(Mutant::DroppedRamification) => match map {
                FieldMap::Rational { emb, image } if x.degree() >= 1 && x.degree() <= 2 && !x.is_zero() => {
                    let cap = x.cap();
                    let y = x.lift();
                    let out = if y.degree() == 1 {
                        KElement::from_unit(&radical_substitute(&y.to_unit()?, emb, image)?, 0)
                    } else {
                        let mut acc = KElement::zero(&map.dst(), 2, 0);
                        for (pi, a) in milnor::presentation(&y)? {
                            let f = radical_substitute(&FactoredUnit::from_poly(&pi)?, emb, image)?;
                            let g = radical_substitute(&FactoredUnit::from_poly(&a)?, emb, image)?;
                            acc = acc.add(&milnor::tame_symbol(&f, &g)?)?;
                        }
                        acc
                    };
                    Ok(out.reduce(cap))
                }
                _ => milnor::res(map, x),
            },
            _ => milnor::res(map, x),
        }
    }

    /// Datum (D2).
    pub fn corestrict(&self, map: &FieldMap, x: &KElement) -> Result<KElement> {
        self.check(x)?;
        milnor::cor(map, x)
    }

    /// Datum (D3): `gamma_s(x) = s . x` for a Milnor class `s`.
    pub fn gamma(&self, s: &KElement, x: &KElement) -> Result<KElement> {
        self.check(x)?;
        if s.cap() != 0 {
            return Err(Error::Invalid("gamma expects an integral Milnor class".into()));
        }
        milnor::product(s, x)
    }

    /// `x . s = (-1)^(deg x deg s) s . x`.
    pub fn right_gamma(&self, x: &KElement, s: &KElement) -> Result<KElement> {
        let y = self.gamma(s, x)?;
        if (x.degree() * s.degree()) % 2 == 0 {
            Ok(y)
        } else {
            self.neg(&y)
        }
    }

    /// Datum (D4).
    pub fn residue(&self, v: &Place, x: &KElement) -> Result<KElement> {
        self.check(x)?;
        let r = milnor::residue(v, x)?;
        let flip = match self.mutant {
            Some(Mutant::R3eSign) => x.degree() == 2 && v.is_infinite(),
            Some(Mutant::WrongSlot) => x.degree() == 2,
            _ => false,
        };
        if flip {
            Ok(r.neg())
        } else {
            Ok(r)
        }
    }
}

fn untwist(e: &FfEmbedding) -> Result<FfEmbedding> {
    FfEmbedding::canonical(e.src(), e.dst())
}

fn untwisted(map: &FieldMap) -> Result<FieldMap> {
    Ok(match map {
        FieldMap::Finite(e) => FieldMap::Finite(untwist(e)?),
        FieldMap::Constants(e) => FieldMap::Constants(untwist(e)?),
        FieldMap::Rational { emb, image } => FieldMap::Rational {
            emb: untwist(emb)?,
            image: image.clone(),
        },
    })
}

/// Substitution keeping each irreducible factor of `pi(g(s))` once.
fn radical_substitute(u: &FactoredUnit, emb: &FfEmbedding, g: &Poly) -> Result<FactoredUnit> {
    let dst = emb.dst();
    let mut out = FactoredUnit::constant(dst, emb.apply(u.leading_constant()))?;
    for (p, &e) in u.factors() {
        let image = p.map_coeffs(emb).compose(g);
        let f = FactoredUnit::from_poly(&image)?;
        let rad = FactoredUnit::from_parts(dst, f.leading_constant(), f.factors().keys().map(|k| (k.clone(), 1)))?;
        out = out.mul(&rad.pow(e));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::make_field;
    use crate::milnor::CoordKey;

    #[test]
    fn residue_delegates() {
        let f3 = make_field(3, 1).unwrap();
        let t = Place::finite(Poly::x(&f3)).unwrap();
        let x = KElement::from_unit(&FactoredUnit::from_poly(&Poly::x(&f3)).unwrap(), 0);
        let r = milnor_instance().residue(&t, &x).unwrap();
        assert_eq!(r.get(&CoordKey::Int), 1);
    }

    #[test]
    fn mod_two_over_f5() {
        let inst = mod_instance(2).unwrap();
        let f5 = FieldRef::Finite(make_field(5, 1).unwrap());
        let two = inst.from_milnor(&KElement::from_log(&f5, 1, 0));
        assert!(inst.add(&two, &two).unwrap().is_zero());
        let four = inst.from_milnor(&KElement::from_log(&f5, 2, 0));
        assert!(four.is_zero());
        assert!(mod_instance(1).is_err());
    }

    #[test]
    fn twists_compose() {
        let a = twist_instance(&twist_instance(&milnor_instance(), 2), -3);
        assert_eq!(a, twist_instance(&milnor_instance(), -1));
        assert_eq!(parse_instance("milnor+twist:-1").unwrap(), a);
        assert_eq!(twist_instance(&milnor_instance(), 1).internal(0), 1);
    }
}
