//! The differential `d^p_X = sum_(x, y) d^x_y` of the cycle complex.

use std::collections::BTreeSet;

use super::class::{formal_residue, Coord, CycleClass};
use crate::error::{Error, Result};
use crate::exactfield::irreducibles_of_degree;
use crate::milnor::{CoordKey, FieldMap, KElement, Place};
use crate::premodule::PremoduleInstance;
use crate::schemes::{PointId, SchemeKind, SchemeModel};

/// Which places of a function field to visit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PlaceSource {
    /// Places where the coordinate can have a nonzero residue.
    Support,
    /// All places of degree at most the bound.
    Window(u32),
}

/// Places of `F_q(t)` in the support of a class, with the infinite place.
pub fn support_places(x: &KElement) -> Result<Vec<Place>> {
    let mut out = BTreeSet::new();
    for k in x.coords().keys() {
        if let CoordKey::Place(pi) = k {
            out.insert(Place::finite(pi.clone())?);
        }
    }
    out.insert(Place::infinite(x.field().base()));
    Ok(out.into_iter().collect())
}

fn window_places(x: &KElement, bound: u32) -> Result<Vec<Place>> {
    let f = x.field().base();
    let mut out = Vec::new();
    for d in 1..=bound {
        for pi in irreducibles_of_degree(f, d as usize) {
            out.push(Place::finite(pi)?);
        }
    }
    out.push(Place::infinite(f));
    Ok(out)
}

fn places(x: &KElement, src: PlaceSource) -> Result<Vec<Place>> {
    match src {
        PlaceSource::Support => support_places(x),
        PlaceSource::Window(d) => window_places(x, d),
    }
}

/// Largest degree of a support place of a coordinate (at least 1).
pub fn support_degree(c: &CycleClass) -> u32 {
    c.coords()
        .values()
        .filter_map(Coord::as_k)
        .flat_map(|x| x.coords().keys())
        .filter_map(|k| match k {
            CoordKey::Place(pi) => Some(pi.deg() as u32),
            _ => None,
        })
        .max()
        .unwrap_or(1)
        .max(1)
}

/// The components `(y, d^x_y(rho))` of the differential of one coordinate.
fn d_point(
    scheme: &SchemeModel,
    inst: &PremoduleInstance,
    x: &PointId,
    rho: &Coord,
    src: PlaceSource,
) -> Result<Vec<(PointId, KElement)>> {
    let mut out = Vec::new();
    match (scheme.kind(), x, rho) {
        (SchemeKind::Union, PointId::In(i, inner), _) => {
            let c = &scheme.components()[*i];
            for (y, v) in d_point(c, inst, inner, rho, src)? {
                out.push((PointId::In(*i, Box::new(y)), v));
            }
        }
        (SchemeKind::Line { .. }, PointId::Generic, Coord::K(r)) => {
            for v in places(r, src)? {
                if scheme.contains_place(&v) {
                    out.push((PointId::Place(v.clone()), inst.residue(&v, r)?));
                }
            }
        }
        (SchemeKind::Plane { .. }, PointId::Generic, Coord::Formal(s)) => {
            let curves: Vec<usize> = match src {
                PlaceSource::Support => s.curves(),
                PlaceSource::Window(_) => (0..scheme.curves().len()).collect(),
            };
            for j in curves {
                out.push((PointId::Curve(j), inst.from_milnor(&formal_residue(scheme, j, s)?)));
            }
        }
        (SchemeKind::Plane { projective }, PointId::Curve(j), Coord::K(r)) => {
            for t in places(r, src)? {
                if t.is_infinite() && !projective {
                    continue;
                }
                let res = inst.residue(&t, r)?;
                if res.is_zero() {
                    continue;
                }
                let (y, fib) = scheme.image_of_place(*j, &t)?;
                out.push((PointId::Closed(y), inst.corestrict(&FieldMap::Finite(fib.embedding), &res)?));
            }
        }
        (SchemeKind::Plane { .. }, PointId::Generic, Coord::K(_)) => {
            return Err(Error::UndeclaredSupport("plane generic coordinates must be formal sums over declared curves".into()))
        }
        _ => {}
    }
    Ok(out)
}

fn differential_with(c: &CycleClass, src: PlaceSource) -> Result<CycleClass> {
    let mut out = CycleClass::new(&c.scheme, &c.instance, (c.p + 1).min(c.scheme.dim()), c.n)?;
    out.p = c.p + 1;
    if c.p >= c.scheme.dim() {
        return Ok(out);
    }
    for (x, rho) in c.coords() {
        for (y, v) in d_point(&c.scheme, &c.instance, x, rho, src)? {
            if !v.is_zero() {
                out.add_k(&y, &v)?;
            }
        }
    }
    Ok(out)
}

/// `d^p_X(c)`, computed from the supports of the coordinates.
pub fn differential(c: &CycleClass) -> Result<CycleClass> {
    differential_with(c, PlaceSource::Support)
}

/// `d^p_X(c)` summed over places of degree at most `bound` only.
pub fn differential_window(c: &CycleClass, bound: u32) -> Result<CycleClass> {
    differential_with(c, PlaceSource::Window(bound))
}

/// `d^x_y(rho)`; zero when `y` is not a specialization of `x`.
pub fn residue_pair(c_scheme: &SchemeModel, inst: &PremoduleInstance, x: &PointId, y: &PointId, rho: &Coord) -> Result<KElement> {
    let rx = c_scheme.resolve(x)?;
    let ry = c_scheme.resolve(y)?;
    let field = ry
        .residue
        .ok_or_else(|| Error::Invalid("the generic point specializes to nothing of lower codimension".into()))?;
    let degree = match rho {
        Coord::K(k) => k.degree(),
        Coord::Formal(s) => s.degree,
    } - 1;
    let mut acc = KElement::zero(&field, degree, inst.cap());
    if ry.codim != rx.codim + 1 {
        return Ok(acc);
    }
    for (z, v) in d_point(c_scheme, inst, x, rho, PlaceSource::Support)? {
        if &z == y {
            acc = inst.add(&acc, &v)?;
        }
    }
    Ok(acc)
}
