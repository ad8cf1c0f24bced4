//! Scheme models: `Spec` of a finite field, affine and projective lines
//! (optionally punctured), affine and projective planes with a closed table of
//! rational curves, and disjoint unions.

use std::collections::{BTreeMap, BTreeSet};

use num_integer::Integer;

use super::mpoly::MPoly;
use crate::error::{Error, Result};
use crate::exactfield::parse::{parse_constant, parse_expr, parse_poly};
use crate::exactfield::{irreducibles_of_degree, FfEmbedding, FiniteField, Poly};
use crate::milnor::{FieldRef, Place};

/// A closed point of a plane: the Frobenius orbit of its coordinates, stored
/// as the smallest conjugate. Projective coordinates are scaled so that the
/// first nonzero one is 1.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct ClosedPoint {
    pub degree: u32,
    pub coords: Vec<u32>,
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum PointId {
    Generic,
    /// A place of a line.
    Place(Place),
    /// A declared curve of a plane, by index.
    Curve(usize),
    Closed(ClosedPoint),
    /// A point of the `i`-th component of a disjoint union.
    In(usize, Box<PointId>),
}

/// A point with its codimension and residue field; `residue` is `None` for
/// the generic point of a plane, whose function field has two variables.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PointRef {
    pub codim: usize,
    pub id: PointId,
    pub residue: Option<FieldRef>,
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum SchemeKind {
    Spec,
    Line { projective: bool },
    Plane { projective: bool },
    Union,
}

/// A rational plane curve with a birational parametrization by the line.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Curve {
    pub id: String,
    pub description: String,
    pub equation: MPoly,
    /// Homogeneous coordinates `[X(t) : Y(t) : Z(t)]`; `Z = 1` on affine planes.
    pub param: Vec<Poly>,
    pub degree: u32,
}

/// A point `t` of the normalization lying over a closed point.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FiberPoint {
    pub place: Place,
    /// `kappa(y) -> kappa(t)`.
    pub embedding: FfEmbedding,
    pub ramification: u32,
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct SchemeModel {
    name: String,
    kind: SchemeKind,
    base: FiniteField,
    removed: Vec<Place>,
    curves: Vec<Curve>,
    components: Vec<SchemeModel>,
}

/// Enumeration of closed points stops beyond this many candidates.
const ENUMERATION_CAP: u64 = 1 << 22;

fn scheme_err(path: &str, msg: impl Into<String>) -> Error {
    Error::Scheme {
        path: path.to_string(),
        msg: msg.into(),
    }
}

pub fn spec(f: &FiniteField) -> SchemeModel {
    SchemeModel {
        name: format!("Spec {f}"),
        kind: SchemeKind::Spec,
        base: f.clone(),
        removed: vec![],
        curves: vec![],
        components: vec![],
    }
}

pub fn affine_line(f: &FiniteField) -> SchemeModel {
    line(f, false, vec![]).expect("no removed places")
}

pub fn proj_line(f: &FiniteField) -> SchemeModel {
    line(f, true, vec![]).expect("no removed places")
}

/// `A^1` minus finitely many places.
pub fn punctured_line(f: &FiniteField, removed: Vec<Place>) -> Result<SchemeModel> {
    line(f, false, removed)
}

/// A line with removed places (the infinite place only on the projective line).
pub fn line(f: &FiniteField, projective: bool, removed: Vec<Place>) -> Result<SchemeModel> {
    let mut set = BTreeSet::new();
    for v in removed {
        if v.base() != f {
            return Err(Error::FieldMismatch(format!("removed place {} not over {f}", v.render())));
        }
        if v.is_infinite() && !projective {
            return Err(Error::Invalid("the affine line has no infinite place to remove".into()));
        }
        set.insert(v);
    }
    let removed: Vec<Place> = set.into_iter().collect();
    let head = if projective { "P1" } else { "A1" };
    let name = if removed.is_empty() {
        format!("{head}/{f}")
    } else {
        let r: Vec<String> = removed.iter().map(Place::render).collect();
        format!("{head}/{f} minus {{{}}}", r.join(", "))
    };
    Ok(SchemeModel {
        name,
        kind: SchemeKind::Line { projective },
        base: f.clone(),
        removed,
        curves: vec![],
        components: vec![],
    })
}

/// A declared curve: equation and parametrization as expression strings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveDecl {
    pub id: String,
    pub description: String,
    pub parametrization: Vec<String>,
}

impl CurveDecl {
    pub fn new(id: &str, description: &str, parametrization: &[&str]) -> CurveDecl {
        CurveDecl {
            id: id.into(),
            description: description.into(),
            parametrization: parametrization.iter().map(|s| s.to_string()).collect(),
        }
    }
}

pub fn default_affine_curves() -> Vec<CurveDecl> {
    vec![
        CurveDecl::new("x=0", "x", &["0", "t"]),
        CurveDecl::new("y=0", "y", &["t", "0"]),
        CurveDecl::new("y=x", "y - x", &["t", "t"]),
        CurveDecl::new("x=1", "x - 1", &["1", "t"]),
        CurveDecl::new("y=x^2", "y - x^2", &["t", "t^2"]),
        CurveDecl::new("y=x+1", "y - x - 1", &["t", "t+1"]),
    ]
}

pub fn default_projective_curves() -> Vec<CurveDecl> {
    vec![
        CurveDecl::new("X=0", "X", &["0", "t", "1"]),
        CurveDecl::new("Y=0", "Y", &["t", "0", "1"]),
        CurveDecl::new("Z=0", "Z", &["1", "t", "0"]),
        CurveDecl::new("Y=X", "Y - X", &["t", "t", "1"]),
        CurveDecl::new("YZ=X^2", "Y*Z - X^2", &["t", "t^2", "1"]),
        CurveDecl::new("Y=X+Z", "Y - X - Z", &["t", "t+1", "1"]),
    ]
}

pub fn affine_plane(f: &FiniteField, curves: &[CurveDecl]) -> Result<SchemeModel> {
    plane(f, false, curves)
}

pub fn proj_plane(f: &FiniteField, curves: &[CurveDecl]) -> Result<SchemeModel> {
    plane(f, true, curves)
}

pub fn default_affine_plane(f: &FiniteField) -> SchemeModel {
    affine_plane(f, &default_affine_curves()).expect("default table is valid")
}

pub fn default_proj_plane(f: &FiniteField) -> SchemeModel {
    proj_plane(f, &default_projective_curves()).expect("default table is valid")
}

fn plane(f: &FiniteField, projective: bool, decls: &[CurveDecl]) -> Result<SchemeModel> {
    let mut curves: Vec<Curve> = Vec::new();
    for (i, d) in decls.iter().enumerate() {
        let c = Curve::new(f, projective, d).map_err(|(sub, msg)| scheme_err(&format!("curves[{i}]{sub}"), msg))?;
        if let Some(j) = curves.iter().position(|o| o.equation.normalized() == c.equation.normalized()) {
            return Err(scheme_err(&format!("curves[{i}]"), format!("same curve as curves[{j}]")));
        }
        if curves.iter().any(|o| o.id == c.id) {
            return Err(scheme_err(&format!("curves[{i}].id"), format!("duplicate id '{}'", c.id)));
        }
        curves.push(c);
    }
    let head = if projective { "P2" } else { "A2" };
    Ok(SchemeModel {
        name: format!("{head}/{f}"),
        kind: SchemeKind::Plane { projective },
        base: f.clone(),
        removed: vec![],
        curves,
        components: vec![],
    })
}

pub fn disjoint_union(parts: Vec<SchemeModel>) -> Result<SchemeModel> {
    let first = parts.first().ok_or_else(|| Error::Invalid("empty disjoint union".into()))?;
    let base = first.base.clone();
    if parts.iter().any(|p| p.base != base) {
        return Err(Error::FieldMismatch("components over different base fields".into()));
    }
    let names: Vec<String> = parts.iter().map(|p| p.name.clone()).collect();
    Ok(SchemeModel {
        name: names.join(" + "),
        kind: SchemeKind::Union,
        base,
        removed: vec![],
        curves: vec![],
        components: parts,
    })
}

fn plane_vars(projective: bool) -> &'static [&'static str] {
    if projective {
        &["X", "Y", "Z"]
    } else {
        &["x", "y"]
    }
}

impl Curve {
    fn new(f: &FiniteField, projective: bool, d: &CurveDecl) -> std::result::Result<Curve, (String, String)> {
        let vars = plane_vars(projective);
        let expr = parse_expr(&d.description).map_err(|e| (".description".to_string(), e.to_string()))?;
        let equation = MPoly::from_expr(&expr, f, vars).map_err(|e| (".description".to_string(), e.to_string()))?;
        if equation.total_degree() == 0 {
            return Err((".description".into(), "equation must be nonconstant".into()));
        }
        if projective && !equation.is_homogeneous() {
            return Err((".description".into(), "equation must be homogeneous".into()));
        }
        let want = if projective { 3 } else { 2 };
        if d.parametrization.len() != want {
            return Err((
                ".parametrization".into(),
                format!("expected {want} coordinate functions, got {}", d.parametrization.len()),
            ));
        }
        let mut param = Vec::new();
        for (k, s) in d.parametrization.iter().enumerate() {
            let p = parse_poly(s, f, "t").map_err(|e| (format!(".parametrization[{k}]"), e.to_string()))?;
            param.push(p);
        }
        if !projective {
            param.push(Poly::one(f));
        }
        if param.iter().take(want).all(Poly::is_constant) {
            return Err((".parametrization".into(), "parametrization is constant".into()));
        }
        let g = param.iter().fold(Poly::zero(f), |acc, p| acc.gcd(p));
        if g.deg() > 0 {
            return Err((".parametrization".into(), "coordinate functions have a common zero".into()));
        }
        let degree = param.iter().map(Poly::deg).max().unwrap_or(0) as u32;
        let comp = equation.compose(if projective { &param[..] } else { &param[..2] });
        if !comp.is_zero() {
            return Err((".parametrization".into(), "parametrization does not satisfy the equation".into()));
        }
        if equation.total_degree() != degree {
            return Err((
                ".parametrization".into(),
                format!(
                    "parametrization degree {degree} differs from the curve degree {}",
                    equation.total_degree()
                ),
            ));
        }
        if map_degree(f, &param) != 1 {
            return Err((".parametrization".into(), "parametrization is not birational".into()));
        }
        Ok(Curve {
            id: d.id.clone(),
            description: d.description.clone(),
            equation,
            param,
            degree,
        })
    }
}

/// Degree of `t -> [P_0 : P_1 : P_2]` onto its image: the minimum over sample
/// points `s` of the degree of the gcd of the `2x2` minors `P_a(t) P_b(s) - P_b(t) P_a(s)`.
fn map_degree(f: &FiniteField, param: &[Poly]) -> usize {
    let mut best = usize::MAX;
    for k in 1..=3u32 {
        if k == 3 && f.order() > 4 {
            break;
        }
        let kf = f.extension(k).expect("small extension");
        let emb = FfEmbedding::canonical(f, &kf).expect("subfield");
        let lifted: Vec<Poly> = param
            .iter()
            .map(|p| Poly::new(kf.clone(), p.coeffs().iter().map(|&c| emb.apply(c)).collect()))
            .collect();
        for s in kf.elements() {
            let vals: Vec<u32> = param.iter().map(|p| p.eval_in(&emb, s)).collect();
            let mut g = Poly::zero(&kf);
            for a in 0..3 {
                for b in a + 1..3 {
                    let m = lifted[a].scale(vals[b]).sub(&lifted[b].scale(vals[a]));
                    g = g.gcd(&m);
                }
            }
            if !g.is_zero() {
                best = best.min(g.deg());
            }
        }
        if best == 1 {
            break;
        }
    }
    best
}

/// Degree over `base` of the subfield generated by `a` in `k`.
fn degree_over(base: &FiniteField, k: &FiniteField, a: u32) -> u32 {
    let kp = k.prime_degree_of(a);
    let m = base.degree();
    kp.lcm(&m) / m
}

/// Smallest Frobenius conjugate of a coordinate vector in `F_{q^d}`.
fn canonical_coords(base: &FiniteField, k: &FiniteField, coords: &[u32]) -> Vec<u32> {
    let d = k.degree() / base.degree();
    (0..d)
        .map(|j| coords.iter().map(|&a| k.frobenius(a, base.degree() * j)).collect::<Vec<u32>>())
        .min()
        .expect("at least one conjugate")
}

/// Scales projective coordinates so the first nonzero entry is 1.
fn normalize_projective(k: &FiniteField, v: &mut [u32]) -> Option<usize> {
    let i = v.iter().position(|&a| a != 0)?;
    let inv = k.inv(v[i]).expect("nonzero");
    for a in v.iter_mut() {
        *a = k.mul(*a, inv);
    }
    Some(i)
}

/// Multiplicity of `alpha` as a root of `h`.
fn root_multiplicity(h: &Poly, alpha: u32) -> u32 {
    let k = h.field().clone();
    let lin = Poly::new(k.clone(), vec![k.neg(alpha), 1]);
    let mut cur = h.clone();
    let mut m = 0;
    while !cur.is_zero() {
        let (q, r) = cur.div_rem(&lin).expect("nonzero divisor");
        if !r.is_zero() {
            break;
        }
        m += 1;
        cur = q;
    }
    m
}

impl SchemeModel {
    pub fn name(&self) -> &str {
        &self.name
    }
    pub fn kind(&self) -> SchemeKind {
        self.kind
    }
    pub fn base(&self) -> &FiniteField {
        &self.base
    }
    pub fn removed(&self) -> &[Place] {
        &self.removed
    }
    pub fn curves(&self) -> &[Curve] {
        &self.curves
    }
    pub fn components(&self) -> &[SchemeModel] {
        &self.components
    }

    /// The component containing `x` and the point within it.
    pub fn locate<'a>(&'a self, x: &'a PointId) -> (&'a SchemeModel, &'a PointId) {
        match (self.kind, x) {
            (SchemeKind::Union, PointId::In(i, inner)) if *i < self.components.len() => {
                self.components[*i].locate(inner)
            }
            _ => (self, x),
        }
    }

    pub fn dim(&self) -> usize {
        match self.kind {
            SchemeKind::Spec => 0,
            SchemeKind::Line { .. } => 1,
            SchemeKind::Plane { .. } => 2,
            SchemeKind::Union => self.components.iter().map(SchemeModel::dim).max().unwrap_or(0),
        }
    }

    pub fn is_projective(&self) -> bool {
        matches!(self.kind, SchemeKind::Line { projective: true } | SchemeKind::Plane { projective: true })
    }

    pub fn is_plane(&self) -> bool {
        matches!(self.kind, SchemeKind::Plane { .. })
    }

    pub fn is_line(&self) -> bool {
        matches!(self.kind, SchemeKind::Line { .. })
    }

    /// Whether a place of the line is a point of this model.
    pub fn contains_place(&self, v: &Place) -> bool {
        self.is_line()
            && v.base() == &self.base
            && (!v.is_infinite() || self.is_projective())
            && !self.removed.contains(v)
    }

    fn coord_count(&self) -> usize {
        if self.is_projective() {
            3
        } else {
            2
        }
    }

    /// Codimension and residue field of a point; errors if it does not resolve.
    pub fn resolve(&self, x: &PointId) -> Result<PointRef> {
        let unknown = || Error::UnknownPoint(format!("{x:?} on {}", self.name));
        let (codim, residue) = match (self.kind, x) {
            (SchemeKind::Union, PointId::In(i, inner)) => {
                let c = self.components.get(*i).ok_or_else(unknown)?;
                let r = c.resolve(inner)?;
                return Ok(PointRef {
                    codim: r.codim,
                    id: x.clone(),
                    residue: r.residue,
                });
            }
            (SchemeKind::Spec, PointId::Generic) => (0, Some(FieldRef::Finite(self.base.clone()))),
            (SchemeKind::Line { .. }, PointId::Generic) => (0, Some(FieldRef::Rational(self.base.clone()))),
            (SchemeKind::Line { .. }, PointId::Place(v)) if self.contains_place(v) => (1, Some(v.residue_ref())),
            (SchemeKind::Plane { .. }, PointId::Generic) => (0, None),
            (SchemeKind::Plane { .. }, PointId::Curve(i)) if *i < self.curves.len() => {
                (1, Some(FieldRef::Rational(self.base.clone())))
            }
            (SchemeKind::Plane { .. }, PointId::Closed(y)) => {
                let k = self.base.extension(y.degree).map_err(|_| unknown())?;
                if y.coords.len() != self.coord_count() || y.coords.iter().any(|&a| a >= k.order()) {
                    return Err(unknown());
                }
                let deg = y.coords.iter().map(|&a| degree_over(&self.base, &k, a)).fold(1, |a, b| a.lcm(&b));
                let mut norm = y.coords.clone();
                if self.is_projective() && normalize_projective(&k, &mut norm).is_none() {
                    return Err(unknown());
                }
                if deg != y.degree || norm != y.coords || canonical_coords(&self.base, &k, &y.coords) != y.coords {
                    return Err(unknown());
                }
                (2, Some(FieldRef::Finite(k)))
            }
            _ => return Err(unknown()),
        };
        Ok(PointRef {
            codim,
            id: x.clone(),
            residue,
        })
    }

    /// Codimension-`p` points with residue degree at most `bound` (declared
    /// curves regardless of the bound), in a fixed order.
    pub fn points(&self, p: usize, bound: u32) -> Result<Vec<PointRef>> {
        if p > self.dim() {
            return Err(Error::CodimOutOfRange {
                p: p as i64,
                dim: self.dim() as i64,
            });
        }
        if bound == 0 {
            return Err(Error::Invalid("degree bound must be at least 1".into()));
        }
        let ids: Vec<PointId> = match (self.kind, p) {
            (SchemeKind::Union, _) => {
                let mut out = Vec::new();
                for (i, c) in self.components.iter().enumerate() {
                    if p <= c.dim() {
                        out.extend(c.points(p, bound)?.into_iter().map(|r| PointId::In(i, Box::new(r.id))));
                    }
                }
                out
            }
            (_, 0) => vec![PointId::Generic],
            (SchemeKind::Line { projective }, 1) => {
                let mut out = Vec::new();
                for d in 1..=bound {
                    for pi in irreducibles_of_degree(&self.base, d as usize) {
                        out.push(Place::finite(pi)?);
                    }
                    if d == 1 && projective {
                        out.push(Place::infinite(&self.base));
                    }
                }
                out.into_iter()
                    .filter(|v| !self.removed.contains(v))
                    .map(PointId::Place)
                    .collect()
            }
            (SchemeKind::Plane { .. }, 1) => (0..self.curves.len()).map(PointId::Curve).collect(),
            (SchemeKind::Plane { .. }, 2) => self.closed_points(bound)?.into_iter().map(PointId::Closed).collect(),
            _ => unreachable!("codimension checked against the dimension"),
        };
        ids.iter().map(|x| self.resolve(x)).collect()
    }

    fn closed_points(&self, bound: u32) -> Result<Vec<ClosedPoint>> {
        let mut out = Vec::new();
        for d in 1..=bound {
            let k = self.base.extension(d)?;
            let n = k.order() as u64;
            if n * n > ENUMERATION_CAP {
                return Err(Error::Unsupported(format!(
                    "closed points of degree {d} over {} exceed the enumeration cap",
                    self.base
                )));
            }
            let mut reps: Vec<Vec<u32>> = Vec::new();
            if self.is_projective() {
                for a in k.elements() {
                    for b in k.elements() {
                        reps.push(vec![1, a, b]);
                    }
                }
                for b in k.elements() {
                    reps.push(vec![0, 1, b]);
                }
                reps.push(vec![0, 0, 1]);
            } else {
                for a in k.elements() {
                    for b in k.elements() {
                        reps.push(vec![a, b]);
                    }
                }
            }
            let mut set = BTreeSet::new();
            for r in reps {
                let deg = r.iter().map(|&a| degree_over(&self.base, &k, a)).fold(1, |a, b| a.lcm(&b));
                if deg == d {
                    set.insert(canonical_coords(&self.base, &k, &r));
                }
            }
            out.extend(set.into_iter().map(|coords| ClosedPoint { degree: d, coords }));
        }
        Ok(out)
    }

    /// The closed point under a place `t` of the normalization of curve `j`,
    /// with the residue embedding and the multiplicity of `t` in the fiber.
    pub fn image_of_place(&self, j: usize, t: &Place) -> Result<(ClosedPoint, FiberPoint)> {
        let c = self
            .curves
            .get(j)
            .ok_or_else(|| Error::UnknownPoint(format!("curve {j} on {}", self.name)))?;
        if t.base() != &self.base {
            return Err(Error::FieldMismatch("place over a different base field".into()));
        }
        let projective = self.is_projective();
        if t.is_infinite() && !projective {
            return Err(Error::Invalid(format!("the infinite place of curve '{}' is not on {}", c.id, self.name)));
        }
        let kt = t.residue_field();
        let emb = t.constants_embedding();
        // Local coordinate functions and the point `alpha` they are read at.
        let (local, alpha): (Vec<Poly>, u32) = if t.is_infinite() {
            let d = c.degree as usize;
            let rev = c
                .param
                .iter()
                .map(|p| Poly::new(self.base.clone(), (0..=d).map(|i| p.coeff(d - i)).collect()))
                .collect();
            (rev, 0)
        } else {
            (c.param.clone(), t.root())
        };
        let mut vals: Vec<u32> = local.iter().map(|p| p.eval_in(&emb, alpha)).collect();
        let chart = if projective {
            normalize_projective(&kt, &mut vals).expect("coordinate functions have no common zero")
        } else {
            vals.truncate(2);
            2
        };
        let d = vals.iter().map(|&a| degree_over(&self.base, &kt, a)).fold(1, |a, b| a.lcm(&b));
        let ky = self.base.extension(d)?;
        let iota = FfEmbedding::canonical(&ky, &kt)?;
        let pulled: Vec<u32> = vals.iter().map(|&a| iota.preimage(a).expect("in the subfield")).collect();
        let coords = canonical_coords(&self.base, &ky, &pulled);
        let g = self.base.generator();
        let mut constraints: Vec<(u32, u32)> = coords.iter().copied().zip(vals.iter().copied()).collect();
        constraints.push((FfEmbedding::canonical(&self.base, &ky)?.apply(g), emb.apply(g)));
        let embedding = FfEmbedding::solve(&ky, &kt, &constraints)?;
        // Multiplicity: order of vanishing of the local equations of the point.
        let lifted: Vec<Poly> = local
            .iter()
            .map(|p| Poly::new(kt.clone(), p.coeffs().iter().map(|&a| emb.apply(a)).collect()))
            .collect();
        let mut e = u32::MAX;
        for i in 0..(if projective { 3 } else { 2 }) {
            let h = if projective {
                if i == chart {
                    continue;
                }
                lifted[i].sub(&lifted[chart].scale(vals[i]))
            } else {
                lifted[i].sub(&Poly::constant(&kt, vals[i]))
            };
            if !h.is_zero() {
                e = e.min(root_multiplicity(&h, alpha));
            }
        }
        Ok((
            ClosedPoint { degree: d, coords },
            FiberPoint {
                place: t.clone(),
                embedding,
                ramification: if e == u32::MAX { 1 } else { e },
            },
        ))
    }

    /// Specializations of `x` with normalization fibers, for points of
    /// residue degree at most `bound`.
    pub fn specializations(&self, x: &PointId, bound: u32) -> Result<Vec<(PointId, Vec<FiberPoint>)>> {
        let r = self.resolve(x)?;
        if let (SchemeKind::Union, PointId::In(i, inner)) = (self.kind, x) {
            let out = self.components[*i].specializations(inner, bound)?;
            return Ok(out.into_iter().map(|(y, f)| (PointId::In(*i, Box::new(y)), f)).collect());
        }
        match (self.kind, &r.id) {
            (SchemeKind::Line { .. }, PointId::Generic) => Ok(self
                .points(1, bound)?
                .into_iter()
                .map(|y| {
                    let v = match &y.id {
                        PointId::Place(v) => v.clone(),
                        _ => unreachable!(),
                    };
                    let fib = FiberPoint {
                        embedding: FfEmbedding::identity(&v.residue_field()),
                        place: v,
                        ramification: 1,
                    };
                    (y.id, vec![fib])
                })
                .collect()),
            (SchemeKind::Plane { .. }, PointId::Generic) => {
                Ok((0..self.curves.len()).map(|j| (PointId::Curve(j), vec![])).collect())
            }
            (SchemeKind::Plane { projective }, PointId::Curve(j)) => {
                let mut grouped: BTreeMap<ClosedPoint, Vec<FiberPoint>> = BTreeMap::new();
                let mut places = Vec::new();
                for d in 1..=bound {
                    for pi in irreducibles_of_degree(&self.base, d as usize) {
                        places.push(Place::finite(pi)?);
                    }
                }
                if projective {
                    places.push(Place::infinite(&self.base));
                }
                for t in places {
                    let (y, fib) = self.image_of_place(*j, &t)?;
                    if y.degree <= bound {
                        grouped.entry(y).or_default().push(fib);
                    }
                }
                Ok(grouped.into_iter().map(|(y, f)| (PointId::Closed(y), f)).collect())
            }
            _ => Ok(vec![]),
        }
    }

    pub fn render_point(&self, x: &PointId) -> String {
        match x {
            PointId::Generic => "generic".into(),
            PointId::Place(v) => v.render(),
            PointId::Curve(j) => self.curves.get(*j).map(|c| c.id.clone()).unwrap_or_else(|| format!("curve#{j}")),
            PointId::Closed(y) => {
                let k = self.base.extension(y.degree).expect("resolved point");
                let parts: Vec<String> = y.coords.iter().map(|&a| k.render(a)).collect();
                if self.is_projective() {
                    format!("[{}]@{}", parts.join(":"), k)
                } else {
                    format!("({})@{}", parts.join(","), k)
                }
            }
            PointId::In(i, inner) => match self.components.get(*i) {
                Some(c) => format!("{i}:{}", c.render_point(inner)),
                None => format!("{i}:?"),
            },
        }
    }

    /// Validates declared fibers: each place maps to the stated coordinates.
    pub fn check_declared_fiber(&self, j: usize, t: &Place, coords: &[u32]) -> Result<bool> {
        self.image_of_place(j, t)?;
        let kt = t.residue_field();
        let c = &self.curves[j];
        let emb = t.constants_embedding();
        let mut vals: Vec<u32> = if t.is_infinite() {
            c.param.iter().map(|p| emb.apply(p.coeff(c.degree as usize))).collect()
        } else {
            c.param.iter().map(|p| p.eval_in(&emb, t.root())).collect()
        };
        if self.is_projective() {
            normalize_projective(&kt, &mut vals);
        } else {
            vals.truncate(2);
        }
        let mut want = coords.to_vec();
        if self.is_projective() {
            normalize_projective(&kt, &mut want);
        }
        Ok(vals == want)
    }
}

/// Parses a place of `F_q(t)`: `inf` or a monic irreducible polynomial in `t`.
pub fn parse_place(s: &str, f: &FiniteField) -> Result<Place> {
    let s = s.trim();
    if s == "inf" || s == "infinity" {
        return Ok(Place::infinite(f));
    }
    Place::finite(parse_poly(s, f, "t")?)
}

fn parse_point_coords(v: &serde_json::Value, k: &FiniteField, path: &str) -> Result<Vec<u32>> {
    let arr = v.as_array().ok_or_else(|| scheme_err(path, "expected an array of coordinates"))?;
    arr.iter()
        .enumerate()
        .map(|(i, c)| {
            let s = match c {
                serde_json::Value::String(s) => s.clone(),
                serde_json::Value::Number(n) => n.to_string(),
                _ => return Err(scheme_err(&format!("{path}[{i}]"), "expected a constant")),
            };
            parse_constant(&s, k).map_err(|e| scheme_err(&format!("{path}[{i}]"), e.to_string()))
        })
        .collect()
}

fn str_list(v: Option<&serde_json::Value>, path: &str) -> Result<Vec<String>> {
    match v {
        None => Ok(vec![]),
        Some(serde_json::Value::Array(a)) => a
            .iter()
            .enumerate()
            .map(|(i, x)| {
                x.as_str()
                    .map(str::to_string)
                    .ok_or_else(|| scheme_err(&format!("{path}[{i}]"), "expected a string"))
            })
            .collect(),
        Some(_) => Err(scheme_err(path, "expected an array")),
    }
}

/// Loads a model from its JSON description.
pub fn scheme_from_json(v: &serde_json::Value) -> Result<SchemeModel> {
    from_json_at(v, "")
}

fn from_json_at(v: &serde_json::Value, prefix: &str) -> Result<SchemeModel> {
    let at = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    let obj = v.as_object().ok_or_else(|| scheme_err(prefix, "expected an object"))?;
    let kind = obj
        .get("kind")
        .and_then(|k| k.as_str())
        .ok_or_else(|| scheme_err(&at("kind"), "missing or not a string"))?;
    let base = {
        let b = obj.get("base").ok_or_else(|| scheme_err(&at("base"), "missing"))?;
        let p = b.get("p").and_then(|x| x.as_u64()).ok_or_else(|| scheme_err(&at("base.p"), "expected an integer"))?;
        let m = b.get("m").and_then(|x| x.as_u64()).unwrap_or(1);
        crate::exactfield::make_field(p as u32, m as u32).map_err(|e| scheme_err(&at("base"), e.to_string()))?
    };
    let removed_src = str_list(obj.get("removed"), &at("removed"))?;
    let mut removed = Vec::new();
    for (i, s) in removed_src.iter().enumerate() {
        removed.push(parse_place(s, &base).map_err(|e| scheme_err(&format!("{}[{i}]", at("removed")), e.to_string()))?);
    }
    let with_path = |e: Error| match e {
        Error::Scheme { .. } => e,
        other => scheme_err(prefix, other.to_string()),
    };
    let model = match kind {
        "SPEC" => {
            let d = obj.get("degree").and_then(|x| x.as_u64()).unwrap_or(1) as u32;
            spec(&base.extension(d).map_err(|e| scheme_err(&at("degree"), e.to_string()))?)
        }
        "A1" | "PUNCTURED" => line(&base, false, removed).map_err(with_path)?,
        "P1" => line(&base, true, removed).map_err(with_path)?,
        "A2" | "P2" => {
            let projective = kind == "P2";
            let decls = match obj.get("curves") {
                None => {
                    if projective {
                        default_projective_curves()
                    } else {
                        default_affine_curves()
                    }
                }
                Some(serde_json::Value::Array(a)) => {
                    let mut out = Vec::new();
                    for (i, c) in a.iter().enumerate() {
                        let cp = format!("{}[{i}]", at("curves"));
                        let id = c.get("id").and_then(|x| x.as_str()).ok_or_else(|| scheme_err(&format!("{cp}.id"), "missing"))?;
                        let description = c
                            .get("description")
                            .and_then(|x| x.as_str())
                            .ok_or_else(|| scheme_err(&format!("{cp}.description"), "missing"))?;
                        let parametrization = str_list(c.get("parametrization"), &format!("{cp}.parametrization"))?;
                        out.push(CurveDecl {
                            id: id.into(),
                            description: description.into(),
                            parametrization,
                        });
                    }
                    out
                }
                Some(_) => return Err(scheme_err(&at("curves"), "expected an array")),
            };
            let model = plane(&base, projective, &decls).map_err(|e| match e {
                Error::Scheme { path, msg } => scheme_err(&at(&path), msg),
                other => other,
            })?;
            if let Some(serde_json::Value::Array(a)) = obj.get("curves") {
                for (i, c) in a.iter().enumerate() {
                    let Some(fibers) = c.get("fibers") else { continue };
                    let fp = format!("{}[{i}].fibers", at("curves"));
                    let fibers = fibers.as_array().ok_or_else(|| scheme_err(&fp, "expected an array"))?;
                    for (k, fib) in fibers.iter().enumerate() {
                        let p = format!("{fp}[{k}]");
                        let place_s = fib
                            .get("place")
                            .and_then(|x| x.as_str())
                            .ok_or_else(|| scheme_err(&format!("{p}.place"), "missing"))?;
                        let t = parse_place(place_s, &base).map_err(|e| scheme_err(&format!("{p}.place"), e.to_string()))?;
                        let pt = fib.get("point").ok_or_else(|| scheme_err(&format!("{p}.point"), "missing"))?;
                        let coords = parse_point_coords(pt, &t.residue_field(), &format!("{p}.point"))?;
                        let want = if projective { 3 } else { 2 };
                        if coords.len() != want {
                            return Err(scheme_err(&format!("{p}.point"), format!("expected {want} coordinates")));
                        }
                        let ok = model
                            .check_declared_fiber(i, &t, &coords)
                            .map_err(|e| scheme_err(&p, e.to_string()))?;
                        if !ok {
                            return Err(scheme_err(&p, "place does not map to the declared point"));
                        }
                    }
                }
            }
            model
        }
        "UNION" => {
            let parts = obj
                .get("components")
                .and_then(|x| x.as_array())
                .ok_or_else(|| scheme_err(&at("components"), "expected an array"))?;
            let mut models = Vec::new();
            for (i, c) in parts.iter().enumerate() {
                models.push(from_json_at(c, &format!("{}[{i}]", at("components")))?);
            }
            disjoint_union(models).map_err(with_path)?
        }
        other => return Err(scheme_err(&at("kind"), format!("unknown kind '{other}'"))),
    };
    Ok(model)
}

/// Builtin names (`SPEC`, `A1`, `P1`, `A2`, `P2`, `PUNCTURED:t,t+1`) or a JSON file.
pub fn parse_scheme(s: &str, f: &FiniteField) -> Result<SchemeModel> {
    let s = s.trim();
    match s {
        "SPEC" => return Ok(spec(f)),
        "A1" => return Ok(affine_line(f)),
        "P1" => return Ok(proj_line(f)),
        "A2" => return Ok(default_affine_plane(f)),
        "P2" => return Ok(default_proj_plane(f)),
        _ => {}
    }
    if let Some(rest) = s.strip_prefix("PUNCTURED:") {
        let mut removed = Vec::new();
        for part in rest.split(',') {
            removed.push(parse_place(part, f)?);
        }
        return punctured_line(f, removed);
    }
    if let Some(rest) = s.strip_prefix("SPEC:") {
        let d: u32 = rest.parse().map_err(|_| Error::Invalid(format!("bad degree in '{s}'")))?;
        return Ok(spec(&f.extension(d)?));
    }
    let text = std::fs::read_to_string(s).map_err(|e| Error::Invalid(format!("cannot read scheme '{s}': {e}")))?;
    let v: serde_json::Value = serde_json::from_str(&text).map_err(|e| Error::Scheme {
        path: format!("line {} column {}", e.line(), e.column()),
        msg: e.to_string(),
    })?;
    scheme_from_json(&v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::make_field;

    #[test]
    fn projective_line_places() {
        let f2 = make_field(2, 1).unwrap();
        let pts = proj_line(&f2).points(1, 2).unwrap();
        let names: Vec<String> = pts.iter().map(|r| proj_line(&f2).render_point(&r.id)).collect();
        assert_eq!(names, ["t", "t+1", "inf", "t^2+t+1"]);
        let aff = affine_line(&f2).points(1, 1).unwrap();
        assert_eq!(aff.len(), 2);
        assert!(spec(&make_field(3, 1).unwrap()).points(1, 3).is_err());
    }

    #[test]
    fn parabola_over_origin() {
        let f3 = make_field(3, 1).unwrap();
        let a2 = default_affine_plane(&f3);
        let t = Place::finite(Poly::x(&f3)).unwrap();
        let (y, fib) = a2.image_of_place(4, &t).unwrap();
        assert_eq!(y, ClosedPoint { degree: 1, coords: vec![0, 0] });
        assert_eq!(fib.ramification, 1);
    }

    #[test]
    fn invalid_curves_are_rejected() {
        let f3 = make_field(3, 1).unwrap();
        let bad = [
            CurveDecl::new("c", "y - x^2", &["t", "t"]),
            CurveDecl::new("c", "y - x^2", &["t^2", "t^4"]),
            CurveDecl::new("c", "y - x", &["t", "t", "1"]),
        ];
        for d in bad {
            assert!(matches!(affine_plane(&f3, &[d]), Err(Error::Scheme { .. })));
        }
        let dup = [CurveDecl::new("a", "x", &["0", "t"]), CurveDecl::new("b", "2*x", &["0", "t"])];
        assert!(affine_plane(&f3, &dup).is_err());
    }

    #[test]
    fn closed_point_counts() {
        let f2 = make_field(2, 1).unwrap();
        // A^2(F_4) has 16 points: 4 rational, 12 in 6 orbits of size 2.
        assert_eq!(default_affine_plane(&f2).points(2, 2).unwrap().len(), 10);
        // P^2(F_2) has 7 points.
        assert_eq!(default_proj_plane(&f2).points(2, 1).unwrap().len(), 7);
    }
}
