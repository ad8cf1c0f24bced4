//! Field references, places of `F_q(t)`, and the supported field maps.

use std::collections::HashMap;
use std::fmt;
use std::sync::Mutex;

use once_cell::sync::Lazy;

use crate::error::{Error, Result};
use crate::exactfield::{factor_poly, FactoredUnit, FfEmbedding, FiniteField, Poly};

/// A field of the universe. Residue fields of places are resolved to
/// `Finite` through the fixed identification `t mod pi -> root of pi`
/// (see [`Place::root`]).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FieldRef {
    Finite(FiniteField),
    Rational(FiniteField),
}

impl FieldRef {
    /// The constant field.
    pub fn base(&self) -> &FiniteField {
        match self {
            FieldRef::Finite(f) | FieldRef::Rational(f) => f,
        }
    }

    pub fn is_rational(&self) -> bool {
        matches!(self, FieldRef::Rational(_))
    }

    /// Largest degree with possibly nonzero Milnor K-group.
    pub fn top_degree(&self) -> i64 {
        match self {
            FieldRef::Finite(_) => 1,
            FieldRef::Rational(_) => 2,
        }
    }
}

impl fmt::Display for FieldRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldRef::Finite(k) => write!(f, "{k}"),
            FieldRef::Rational(k) => write!(f, "{k}(t)"),
        }
    }
}

impl fmt::Debug for FieldRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PlaceKind {
    /// A monic irreducible polynomial.
    Finite(Poly),
    /// `v(f) = deg den - deg num`, uniformizer `1/t`.
    Infinite,
}

/// A place of `F_q(t)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Place {
    base: FiniteField,
    kind: PlaceKind,
}

static ROOTS: Lazy<Mutex<HashMap<Poly, u32>>> = Lazy::new(|| Mutex::new(HashMap::new()));

impl Place {
    pub fn finite(pi: Poly) -> Result<Place> {
        if !pi.is_monic() || !pi.is_irreducible() {
            return Err(Error::NotIrreducible(pi.to_string()));
        }
        Ok(Place {
            base: pi.field().clone(),
            kind: PlaceKind::Finite(pi),
        })
    }

    pub fn infinite(base: &FiniteField) -> Place {
        Place {
            base: base.clone(),
            kind: PlaceKind::Infinite,
        }
    }

    pub fn kind(&self) -> &PlaceKind {
        &self.kind
    }

    pub fn base(&self) -> &FiniteField {
        &self.base
    }

    /// The field the valuation lives on.
    pub fn field(&self) -> FieldRef {
        FieldRef::Rational(self.base.clone())
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self.kind, PlaceKind::Infinite)
    }

    pub fn poly(&self) -> Option<&Poly> {
        match &self.kind {
            PlaceKind::Finite(p) => Some(p),
            PlaceKind::Infinite => None,
        }
    }

    /// Residue degree over the constant field.
    pub fn degree(&self) -> u32 {
        match &self.kind {
            PlaceKind::Finite(p) => p.deg() as u32,
            PlaceKind::Infinite => 1,
        }
    }

    pub fn residue_field(&self) -> FiniteField {
        self.try_residue_field().expect("residue field within the size cap")
    }

    pub fn try_residue_field(&self) -> Result<FiniteField> {
        self.base.extension(self.degree())
    }

    pub fn residue_ref(&self) -> FieldRef {
        FieldRef::Finite(self.residue_field())
    }

    /// Canonical embedding of constants into the residue field.
    pub fn constants_embedding(&self) -> FfEmbedding {
        FfEmbedding::canonical(&self.base, &self.residue_field()).expect("subfield")
    }

    /// The image of `t` in the residue field: the root of `pi` with the
    /// smallest discrete logarithm (0 for `pi = t`). For the infinite place
    /// there is no such image; returns 0.
    pub fn root(&self) -> u32 {
        let pi = match &self.kind {
            PlaceKind::Finite(p) => p,
            PlaceKind::Infinite => return 0,
        };
        if let Some(&r) = ROOTS.lock().unwrap().get(pi) {
            return r;
        }
        let k = self.residue_field();
        let lifted = pi.map_coeffs(&self.constants_embedding());
        let (_, fac) = factor_poly(&lifted).expect("nonzero");
        let root = fac
            .iter()
            .map(|(f, _)| k.neg(f.coeff(0)))
            .min_by_key(|&r| if r == 0 { 0 } else { k.log(r).unwrap() + 1 })
            .expect("pi splits in its residue field");
        ROOTS.lock().unwrap().insert(pi.clone(), root);
        root
    }

    /// `p mod pi` as a residue-field element (finite places only).
    pub fn reduce_poly(&self, p: &Poly) -> u32 {
        p.eval_in(&self.constants_embedding(), self.root())
    }

    /// Normalized valuation of a unit.
    pub fn valuation(&self, u: &FactoredUnit) -> i64 {
        match &self.kind {
            PlaceKind::Finite(p) => u.exponent(p),
            PlaceKind::Infinite => u.valuation_at_infinity(),
        }
    }

    /// Residue class of `u / uniformizer^v(u)`. At infinity the substitution
    /// `t -> 1/s` turns every monic factor of degree `d` into
    /// `s^-d * rev(pi)(s)` and the unit part is read at `s = 0`.
    pub fn unit_residue(&self, u: &FactoredUnit) -> u32 {
        let k = self.residue_field();
        let emb = self.constants_embedding();
        let mut acc = emb.apply(u.leading_constant());
        match &self.kind {
            PlaceKind::Finite(pi) => {
                for (f, &e) in u.factors() {
                    if f != pi {
                        acc = k.mul(acc, k.pow(self.reduce_poly(f), e));
                    }
                }
            }
            PlaceKind::Infinite => {
                for (f, &e) in u.factors() {
                    let at_zero = f.reversed().coeff(0);
                    acc = k.mul(acc, k.pow(emb.apply(at_zero), e));
                }
            }
        }
        acc
    }

    /// Uniformizer as a unit: `pi`, or `1/t` at infinity.
    pub fn uniformizer(&self) -> FactoredUnit {
        let f = &self.base;
        match &self.kind {
            PlaceKind::Finite(p) => FactoredUnit::from_parts(f, 1, [(p.clone(), 1)]).unwrap(),
            PlaceKind::Infinite => FactoredUnit::from_parts(f, 1, [(Poly::x(f), -1)]).unwrap(),
        }
    }

    /// A polynomial of degree `< deg pi` reducing to `a` (finite places),
    /// found by solving for its coefficients over `F_p`.
    pub fn lift(&self, a: u32) -> Poly {
        let pi = self.poly().expect("finite place");
        let k = self.residue_field();
        let p = k.characteristic();
        let m = self.base.degree() as usize;
        let d = pi.deg();
        let n = m * d;
        let digits = |mut x: u32| -> Vec<u32> {
            (0..n)
                .map(|_| {
                    let c = x % p;
                    x /= p;
                    c
                })
                .collect()
        };
        // Column (i, j) is the image of x^j * t^i.
        let emb = self.constants_embedding();
        let xq = if m == 1 { 1 } else { p };
        let xq = emb.apply(xq);
        let alpha = self.root();
        let mut cols = Vec::with_capacity(n);
        for i in 0..d {
            for j in 0..m {
                cols.push(digits(k.mul(k.pow(alpha, i as i64), k.pow(xq, j as i64))));
            }
        }
        // Augmented rows for Gaussian elimination mod p.
        let target = digits(a);
        let mut rows: Vec<Vec<u32>> = (0..n)
            .map(|r| {
                let mut row: Vec<u32> = cols.iter().map(|c| c[r]).collect();
                row.push(target[r]);
                row
            })
            .collect();
        let inv = |x: u32| crate::exactfield::mod_inv(x as u64, p as u64).expect("nonzero") as u32;
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..n {
            let Some(pr) = (r..n).find(|&i| rows[i][c] != 0) else { continue };
            rows.swap(r, pr);
            let s = inv(rows[r][c]);
            for x in rows[r].iter_mut() {
                *x = *x * s % p;
            }
            for i in 0..n {
                if i != r && rows[i][c] != 0 {
                    let f = rows[i][c];
                    for j in 0..=n {
                        rows[i][j] = (rows[i][j] + (p - f) * rows[r][j]) % p;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        debug_assert_eq!(pivots.len(), n, "powers of the root span the residue field");
        let mut sol = vec![0u32; n];
        for (row, &c) in pivots.iter().enumerate() {
            sol[c] = rows[row][n];
        }
        let coeffs = (0..d)
            .map(|i| (0..m).rev().fold(0u32, |acc, j| acc * p + sol[i * m + j]))
            .collect();
        Poly::new(self.base.clone(), coeffs)
    }

    pub fn render(&self) -> String {
        match &self.kind {
            PlaceKind::Finite(p) => p.render("t"),
            PlaceKind::Infinite => "inf".into(),
        }
    }
}

impl fmt::Debug for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})@{}", self.render(), self.base)
    }
}

/// A supported field homomorphism.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum FieldMap {
    /// `F_{p^a} -> F_{p^b}`.
    Finite(FfEmbedding),
    /// Constants `F_{p^a} -> F_{p^b}(t)`.
    Constants(FfEmbedding),
    /// `F_{p^a}(t) -> F_{p^b}(s)`, coefficients through `emb`, `t -> image(s)`
    /// with `image` nonconstant. `image = s` is a constant-field extension.
    Rational { emb: FfEmbedding, image: Poly },
}

impl FieldMap {
    pub fn constant_extension(emb: FfEmbedding) -> FieldMap {
        let image = Poly::x(emb.dst());
        FieldMap::Rational { emb, image }
    }

    pub fn substitution(emb: FfEmbedding, image: Poly) -> Result<FieldMap> {
        if image.deg() == 0 || image.field() != emb.dst() {
            return Err(Error::Invalid("substitution image must be a nonconstant polynomial over the target".into()));
        }
        Ok(FieldMap::Rational { emb, image })
    }

    pub fn src(&self) -> FieldRef {
        match self {
            FieldMap::Finite(e) | FieldMap::Constants(e) => FieldRef::Finite(e.src().clone()),
            FieldMap::Rational { emb, .. } => FieldRef::Rational(emb.src().clone()),
        }
    }

    pub fn dst(&self) -> FieldRef {
        match self {
            FieldMap::Finite(e) => FieldRef::Finite(e.dst().clone()),
            FieldMap::Constants(e) | FieldMap::Rational { emb: e, .. } => FieldRef::Rational(e.dst().clone()),
        }
    }

    pub fn embedding(&self) -> &FfEmbedding {
        match self {
            FieldMap::Finite(e) | FieldMap::Constants(e) | FieldMap::Rational { emb: e, .. } => e,
        }
    }

    /// `[dst : src]` for finite maps.
    pub fn degree(&self) -> Option<u64> {
        match self {
            FieldMap::Finite(e) => Some(e.degree() as u64),
            FieldMap::Constants(_) => None,
            FieldMap::Rational { emb, image } => Some(emb.degree() as u64 * image.deg() as u64),
        }
    }

    pub fn is_constant_extension(&self) -> bool {
        matches!(self, FieldMap::Rational { image, .. } if image.deg() == 1 && image.coeff(0) == 0 && image.coeff(1) == 1)
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &FieldMap) -> Result<FieldMap> {
        if self.dst() != next.src() {
            return Err(Error::FieldMismatch(format!("cannot compose {self:?} with {next:?}")));
        }
        Ok(match (self, next) {
            (FieldMap::Finite(a), FieldMap::Finite(b)) => FieldMap::Finite(a.then(b)?),
            (FieldMap::Finite(a), FieldMap::Constants(b)) => FieldMap::Constants(a.then(b)?),
            (FieldMap::Constants(a), FieldMap::Rational { emb, .. }) => FieldMap::Constants(a.then(emb)?),
            (FieldMap::Rational { emb: a, image: g }, FieldMap::Rational { emb: b, image: h }) => FieldMap::Rational {
                emb: a.then(b)?,
                image: g.map_coeffs(b).compose(h),
            },
            _ => return Err(Error::FieldMismatch("incomposable maps".into())),
        })
    }

    /// Places of the target lying over `w`, with ramification indices.
    pub fn places_above(&self, w: &Place) -> Result<Vec<(Place, i64)>> {
        let (emb, image) = match self {
            FieldMap::Rational { emb, image } => (emb, image),
            _ => return Err(Error::Unsupported("places above require a map of rational function fields".into())),
        };
        if w.base() != emb.src() {
            return Err(Error::FieldMismatch("place not on the source field".into()));
        }
        match w.kind() {
            PlaceKind::Finite(pi) => {
                let pulled = pi.map_coeffs(emb).compose(image);
                let (_, fac) = factor_poly(&pulled)?;
                fac.into_iter()
                    .map(|(p, e)| Ok((Place::finite(p)?, e as i64)))
                    .collect()
            }
            PlaceKind::Infinite => Ok(vec![(Place::infinite(emb.dst()), image.deg() as i64)]),
        }
    }

    /// Induced map `kappa(w) -> kappa(v)` for `v` over `w`.
    pub fn induced_residue_map(&self, w: &Place, v: &Place) -> Result<FfEmbedding> {
        let (emb, image) = match self {
            FieldMap::Rational { emb, image } => (emb, image),
            _ => return Err(Error::Unsupported("residue maps require a map of rational function fields".into())),
        };
        let kw = w.residue_field();
        let kv = v.residue_field();
        let g = emb.src().generator();
        let mut constraints = vec![(
            w.constants_embedding().apply(g),
            v.constants_embedding().apply(emb.apply(g)),
        )];
        match (w.kind(), v.kind()) {
            (PlaceKind::Finite(_), PlaceKind::Finite(_)) => {
                let img = image.map_coeffs(&FfEmbedding::identity(emb.dst()));
                constraints.push((w.root(), v.reduce_poly(&img)));
            }
            (PlaceKind::Infinite, PlaceKind::Infinite) => {}
            _ => return Err(Error::Invalid("place does not lie over the given place".into())),
        }
        FfEmbedding::solve(&kw, &kv, &constraints)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::make_field;

    #[test]
    fn roots_and_reduction() {
        let f3 = make_field(3, 1).unwrap();
        let v = Place::finite(Poly::new(f3.clone(), vec![1, 0, 1])).unwrap();
        let k = v.residue_field();
        assert_eq!(k.order(), 9);
        let r = v.root();
        assert_eq!(k.add(k.mul(r, r), 1), 0);
        // t^2 reduces to -1.
        assert_eq!(v.reduce_poly(&Poly::new(f3.clone(), vec![0, 0, 1])), 2);
        let a = k.generator();
        let lift = v.lift(a);
        assert!(lift.deg() < 2);
        assert_eq!(v.reduce_poly(&lift), a);
    }

    #[test]
    fn infinite_residue_reads_leading_coefficients() {
        let f5 = make_field(5, 1).unwrap();
        let inf = Place::infinite(&f5);
        let u = FactoredUnit::from_poly(&Poly::new(f5.clone(), vec![1, 0, 3])).unwrap();
        assert_eq!(inf.valuation(&u), -2);
        assert_eq!(inf.unit_residue(&u), 3);
    }

    #[test]
    fn places_above_ramified_substitution() {
        let f3 = make_field(3, 1).unwrap();
        let id = FfEmbedding::identity(&f3);
        let map = FieldMap::substitution(id, Poly::new(f3.clone(), vec![0, 0, 1])).unwrap();
        let t = Place::finite(Poly::x(&f3)).unwrap();
        let above = map.places_above(&t).unwrap();
        assert_eq!(above, vec![(t.clone(), 2)]);
        let e = map.induced_residue_map(&t, &t).unwrap();
        assert_eq!(e.degree(), 1);
    }
}
