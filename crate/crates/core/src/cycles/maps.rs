//! Pullbacks and pushforwards of cycle classes along the supported maps.

use super::chow::a0_membership;
use super::class::{formal_residue, Coord, CycleClass, FormalSum, FormalSymbol, FormalUnit};
use super::differential::differential;
use crate::error::{Error, Result};
use crate::exactfield::{FactoredUnit, FfEmbedding, Poly};
use crate::milnor::{CoordKey, FieldMap, FieldRef, KElement, Place};
use crate::premodule::PremoduleInstance;
use crate::schemes::{line, spec, PointId, SchemeKind, SchemeModel};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MorphismKind {
    /// Inclusion of an open subscheme.
    Open,
    /// `X_{F'} -> X` for a finite extension of the base field.
    BaseChange(FfEmbedding),
    /// `X -> Spec F`.
    Structural,
    /// `t -> g(t)` on a line.
    Substitution(Poly),
    /// `A^2 -> A^1`; not implemented.
    Projection,
}

/// A morphism `source -> target` of scheme models.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Morphism {
    pub source: SchemeModel,
    pub target: SchemeModel,
    pub kind: MorphismKind,
}

/// Largest degree of a substitution map.
pub const MAX_SUBSTITUTION_DEGREE: usize = 5;

impl Morphism {
    pub fn open_immersion(source: &SchemeModel, target: &SchemeModel) -> Result<Morphism> {
        let ok = match (source.kind(), target.kind()) {
            (SchemeKind::Line { projective: a }, SchemeKind::Line { projective: b }) => {
                source.base() == target.base()
                    && (!a || b)
                    && target.removed().iter().all(|v| !source.contains_place(v))
            }
            _ => false,
        };
        if !ok {
            return Err(Error::Unsupported(format!("{} is not an open subscheme of {}", source.name(), target.name())));
        }
        Ok(Morphism {
            source: source.clone(),
            target: target.clone(),
            kind: MorphismKind::Open,
        })
    }

    /// `X_{F'} -> X` along `emb: F -> F'`, for `Spec` and lines.
    pub fn base_change(target: &SchemeModel, emb: &FfEmbedding) -> Result<Morphism> {
        if emb.src() != target.base() {
            return Err(Error::FieldMismatch("extension of a different base field".into()));
        }
        let source = match target.kind() {
            SchemeKind::Spec => spec(emb.dst()),
            SchemeKind::Line { projective } => {
                let map = FieldMap::constant_extension(emb.clone());
                let mut removed = Vec::new();
                for v in target.removed() {
                    removed.extend(map.places_above(v)?.into_iter().map(|(w, _)| w));
                }
                line(emb.dst(), projective, removed)?
            }
            _ => return Err(Error::Unsupported(format!("base change of {}", target.name()))),
        };
        Ok(Morphism {
            source,
            target: target.clone(),
            kind: MorphismKind::BaseChange(emb.clone()),
        })
    }

    pub fn structural(source: &SchemeModel) -> Result<Morphism> {
        if source.kind() == SchemeKind::Union {
            return Err(Error::Unsupported("structural map of a disjoint union".into()));
        }
        Ok(Morphism {
            source: source.clone(),
            target: spec(source.base()),
            kind: MorphismKind::Structural,
        })
    }

    /// `t -> g(t)` from a line to itself; on the affine line `g` must be a
    /// polynomial map, which is finite.
    pub fn substitution(x: &SchemeModel, g: &Poly) -> Result<Morphism> {
        if !x.is_line() || !x.removed().is_empty() {
            return Err(Error::Unsupported("substitution maps are defined on A1 and P1".into()));
        }
        if g.field() != x.base() || g.deg() == 0 {
            return Err(Error::Invalid("substitution needs a nonconstant polynomial over the base".into()));
        }
        if g.deg() > MAX_SUBSTITUTION_DEGREE {
            return Err(Error::Unsupported(format!("substitution of degree {} > {MAX_SUBSTITUTION_DEGREE}", g.deg())));
        }
        Ok(Morphism {
            source: x.clone(),
            target: x.clone(),
            kind: MorphismKind::Substitution(g.clone()),
        })
    }

    pub fn projection(source: &SchemeModel) -> Result<Morphism> {
        Err(Error::Unsupported(format!("projection {} -> A1", source.name())))
    }

    /// The map of function fields `K(target) -> K(source)`, for lines.
    fn function_field_map(&self) -> Result<FieldMap> {
        let f = self.target.base();
        match &self.kind {
            MorphismKind::BaseChange(emb) => Ok(FieldMap::constant_extension(emb.clone())),
            MorphismKind::Substitution(g) => FieldMap::substitution(FfEmbedding::identity(f), g.clone()),
            _ => Err(Error::Unsupported("not a finite map of lines".into())),
        }
    }
}

fn check_source(c: &CycleClass, on: &SchemeModel) -> Result<()> {
    if &c.scheme != on {
        return Err(Error::Invalid(format!("class on {} given to a map out of {}", c.scheme.name(), on.name())));
    }
    Ok(())
}

/// Flat pullback `f^*: C^p(Y) -> C^p(X)` for open immersions, base change
/// and structural maps.
pub fn flat_pullback(f: &Morphism, c: &CycleClass) -> Result<CycleClass> {
    check_source(c, &f.target)?;
    let inst = &c.instance;
    let mut out = CycleClass::new(&f.source, inst, c.p.min(f.source.dim()), c.n)?;
    out.p = c.p;
    if c.p > f.source.dim() {
        return Ok(out);
    }
    match &f.kind {
        MorphismKind::Open => {
            for (x, rho) in c.coords() {
                let keep = match x {
                    PointId::Place(v) => f.source.contains_place(v),
                    _ => true,
                };
                if keep {
                    out = out.with_coord(x, rho)?;
                }
            }
        }
        MorphismKind::BaseChange(emb) => {
            for (x, rho) in c.coords() {
                let rho = rho.as_k().ok_or_else(|| Error::Unsupported("base change of formal classes".into()))?;
                match x {
                    PointId::Generic => {
                        let map = match f.target.kind() {
                            SchemeKind::Spec => FieldMap::Finite(emb.clone()),
                            _ => FieldMap::constant_extension(emb.clone()),
                        };
                        out.add_k(x, &inst.restrict(&map, rho)?)?;
                    }
                    PointId::Place(v) => {
                        let map = FieldMap::constant_extension(emb.clone());
                        for (w, e) in map.places_above(v)? {
                            let r = map.induced_residue_map(v, &w)?;
                            let y = inst.restrict(&FieldMap::Finite(r), rho)?;
                            out.add_k(&PointId::Place(w), &inst.scale(&y, e)?)?;
                        }
                    }
                    _ => return Err(Error::Unsupported("base change of this point".into())),
                }
            }
        }
        MorphismKind::Structural => {
            let rho = match c.get(&PointId::Generic) {
                Some(Coord::K(k)) => k.clone(),
                Some(Coord::Formal(_)) => unreachable!("a point has no formal coordinates"),
                None => return Ok(out),
            };
            match f.source.kind() {
                SchemeKind::Spec => out.add_k(&PointId::Generic, &rho)?,
                SchemeKind::Line { .. } => {
                    let map = FieldMap::Constants(FfEmbedding::identity(f.source.base()));
                    out.add_k(&PointId::Generic, &inst.restrict(&map, &rho)?)?;
                }
                SchemeKind::Plane { .. } => out.add_formal(&PointId::Generic, &constant_formal(&rho)?)?,
                SchemeKind::Union => unreachable!("rejected at construction"),
            }
        }
        MorphismKind::Substitution(_) => return Err(Error::Unsupported("pullback along a substitution map".into())),
        MorphismKind::Projection => return Err(Error::Unsupported("pullback along a projection".into())),
    }
    Ok(out)
}

/// A class of `K_n(F_q)` as a formal sum of constant symbols.
fn constant_formal(rho: &KElement) -> Result<FormalSum> {
    if rho.cap() != 0 {
        return Err(Error::Unsupported("formal sums carry integral coefficients".into()));
    }
    let f = rho.field().base();
    Ok(match rho.degree() {
        0 => FormalSum {
            degree: 0,
            terms: vec![FormalSymbol {
                coeff: rho.get(&CoordKey::Int),
                units: vec![],
            }],
        },
        1 => FormalSum::symbol(1, vec![FormalUnit::constant(f.exp(rho.get(&CoordKey::Const)))]),
        d => FormalSum::zero(d),
    })
}

/// The place of the target under a place `w` of the source.
pub fn place_below(map: &FieldMap, w: &Place) -> Result<Place> {
    let (emb, image) = match map {
        FieldMap::Rational { emb, image } => (emb, image),
        _ => return Err(Error::Unsupported("places below require a map of rational function fields".into())),
    };
    if w.is_infinite() {
        return Ok(Place::infinite(emb.src()));
    }
    let kw = w.residue_field();
    let to_kw = emb.then(&w.constants_embedding())?;
    let beta = image.eval_in(&w.constants_embedding(), w.root());
    let step = emb.src().degree();
    let mut conj = vec![beta];
    let mut c = kw.frobenius(beta, step);
    while c != beta {
        conj.push(c);
        c = kw.frobenius(c, step);
    }
    let mut m = Poly::one(&kw);
    for c in conj {
        m = m.mul(&Poly::linear(&kw, c));
    }
    let m = m
        .pull_coeffs(&to_kw)
        .ok_or_else(|| Error::Invalid("minimal polynomial outside the base".into()))?;
    Place::finite(m)
}

/// Proper pushforward `f_*` for finite maps of lines, and for the structural
/// map of a line (`C^1(X)_n -> C^0(Spec)_(n-1)`) and of a point.
pub fn pushforward_finite(f: &Morphism, c: &CycleClass) -> Result<CycleClass> {
    check_source(c, &f.source)?;
    let inst = &c.instance;
    match &f.kind {
        MorphismKind::BaseChange(emb) if f.target.kind() == SchemeKind::Spec => {
            let mut out = CycleClass::new(&f.target, inst, c.p, c.n)?;
            if let Some(Coord::K(x)) = c.get(&PointId::Generic) {
                out.add_k(&PointId::Generic, &inst.corestrict(&FieldMap::Finite(emb.clone()), x)?)?;
            }
            Ok(out)
        }
        MorphismKind::BaseChange(_) | MorphismKind::Substitution(_) => {
            let map = f.function_field_map()?;
            let mut out = CycleClass::new(&f.target, inst, c.p, c.n)?;
            for (x, rho) in c.coords() {
                let rho = rho.as_k().ok_or_else(|| Error::Unsupported("pushforward of formal classes".into()))?;
                match x {
                    PointId::Generic => out.add_k(x, &inst.corestrict(&map, rho)?)?,
                    PointId::Place(w) => {
                        let v = place_below(&map, w)?;
                        let r = map.induced_residue_map(&v, w)?;
                        out.add_k(&PointId::Place(v), &inst.corestrict(&FieldMap::Finite(r), rho)?)?;
                    }
                    _ => return Err(Error::Unsupported("pushforward of this point".into())),
                }
            }
            Ok(out)
        }
        MorphismKind::Structural => match f.source.kind() {
            SchemeKind::Spec => {
                let mut out = CycleClass::new(&f.target, inst, c.p, c.n)?;
                for (x, rho) in c.coords() {
                    out = out.with_coord(x, rho)?;
                }
                Ok(out)
            }
            SchemeKind::Line { projective: true } if c.p == 1 => {
                let mut out = CycleClass::new(&f.target, inst, 0, c.n - 1)?;
                for (x, rho) in c.coords() {
                    let (PointId::Place(v), Coord::K(rho)) = (x, rho) else {
                        unreachable!("codimension one points of a line are places")
                    };
                    out.add_k(&PointId::Generic, &inst.corestrict(&FieldMap::Finite(v.constants_embedding()), rho)?)?;
                }
                Ok(out)
            }
            _ => Err(Error::Unsupported(format!(
                "pushforward of codimension {} classes from {} to a point",
                c.p,
                f.source.name()
            ))),
        },
        _ => Err(Error::Unsupported("pushforward along a map that is not finite".into())),
    }
}

/// `f_*(1)` for a finite map of lines, read as an integer.
pub fn trace(f: &Morphism, inst: &PremoduleInstance) -> Result<i64> {
    let field = FieldRef::Rational(f.source.base().clone());
    let n = -inst.shift();
    let one = inst.from_milnor(&KElement::integer(&field, 1, 0));
    let c = CycleClass::new(&f.source, inst, 0, n)?.with_coord(&PointId::Generic, &Coord::K(one))?;
    let out = pushforward_finite(f, &c)?;
    Ok(match out.get(&PointId::Generic) {
        Some(Coord::K(k)) => k.get(&CoordKey::Int),
        _ => 0,
    })
}

/// `p_* d [generic -> x]` for the structural map of `P^1`; zero by Weil
/// reciprocity.
pub fn reciprocity_defect(x: &KElement, inst: &PremoduleInstance) -> Result<KElement> {
    let f = x.field().base().clone();
    let p1 = line(&f, true, vec![])?;
    let n = inst.degree_of(x);
    let c = CycleClass::new(&p1, inst, 0, n)?.with_coord(&PointId::Generic, &Coord::K(x.clone()))?;
    let pushed = pushforward_finite(&Morphism::structural(&p1)?, &differential(&c)?)?;
    Ok(match pushed.get(&PointId::Generic) {
        Some(Coord::K(k)) => k.clone(),
        _ => inst.zero(&FieldRef::Finite(f), n - 1),
    })
}

/// Pullback `i^*: A^0(X) -> A^0(Z)` to the zero locus `Z` of a regular
/// function, computed as `d_Z(gamma_pi(a))`.
///
/// On a line `Z` is the place `z` and `pi` its uniformizer; the result lies
/// over the residue field of `z`. On an affine plane `Z` is a declared curve
/// and the result lies over the function field of its normalization.
pub fn divisor_pullback(x: &SchemeModel, z: &PointId, inst: &PremoduleInstance, n: i64, a: &Coord) -> Result<KElement> {
    if !a0_membership(x, inst, n, a)? {
        return Err(Error::NotInA0(format!("class on {}", x.name())));
    }
    match (x.kind(), z, a) {
        (SchemeKind::Line { .. }, PointId::Place(v), Coord::K(a)) => {
            if !x.contains_place(v) || v.is_infinite() {
                return Err(Error::Invalid(format!("{} is not cut out by a regular function on {}", v.render(), x.name())));
            }
            let pi = KElement::from_unit(&v.uniformizer(), 0);
            inst.residue(v, &inst.gamma(&pi, a)?)
        }
        (SchemeKind::Plane { projective: false }, PointId::Curve(j), Coord::Formal(s)) => {
            if *j >= x.curves().len() {
                return Err(Error::UndeclaredSupport(format!("curve {j}")));
            }
            let mut terms = Vec::with_capacity(s.terms.len());
            for t in &s.terms {
                let mut units = vec![FormalUnit::curve(*j)];
                units.extend(t.units.iter().cloned());
                terms.push(FormalSymbol { coeff: t.coeff, units });
            }
            let prefixed = FormalSum {
                degree: s.degree + 1,
                terms,
            };
            Ok(inst.from_milnor(&formal_residue(x, *j, &prefixed)?))
        }
        (SchemeKind::Plane { projective: true }, _, _) => {
            Err(Error::Unsupported("curves on the projective plane are not principal".into()))
        }
        _ => Err(Error::Invalid("divisor not cut out on this model".into())),
    }
}

/// `{u(alpha)}` for the value of a unit at the root of a place, or `None`
/// where `u` has a zero or pole.
pub fn evaluate_unit(u: &FactoredUnit, v: &Place) -> Option<KElement> {
    if v.valuation(u) != 0 || v.is_infinite() {
        return None;
    }
    let k = v.residue_field();
    let emb = v.constants_embedding();
    let mut val = emb.apply(u.leading_constant());
    for (p, &e) in u.factors() {
        let y = p.eval_in(&emb, v.root());
        if y == 0 {
            return None;
        }
        val = k.mul(val, k.pow(y, e));
    }
    Some(KElement::from_log(&v.residue_ref(), k.log(val).ok()? as i64, 0))
}
