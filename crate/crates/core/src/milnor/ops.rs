//! Symbols, products, restriction, corestriction, residues and specialization.

use super::field::{FieldMap, FieldRef, Place, PlaceKind};
use super::kelement::{CoordKey, KElement};
use crate::error::{Error, Result};
use crate::exactfield::{FactoredUnit, FfEmbedding, FiniteField, Poly};

/// A nonzero element of a field of the universe.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Unit {
    Finite(FiniteField, u32),
    Rational(FactoredUnit),
}

impl Unit {
    pub fn field(&self) -> FieldRef {
        match self {
            Unit::Finite(f, _) => FieldRef::Finite(f.clone()),
            Unit::Rational(u) => FieldRef::Rational(u.field().clone()),
        }
    }

    pub fn constant(field: &FieldRef, c: u32) -> Result<Unit> {
        if c == 0 {
            return Err(Error::ZeroElement);
        }
        Ok(match field {
            FieldRef::Finite(f) => Unit::Finite(f.clone(), c),
            FieldRef::Rational(f) => Unit::Rational(FactoredUnit::constant(f, c)?),
        })
    }

    pub fn minus_one(field: &FieldRef) -> Unit {
        let f = field.base();
        Unit::constant(field, f.neg(1)).expect("-1 is a unit")
    }
}

/// `log(-1)` in `F_q^*`.
pub fn log_minus_one(f: &FiniteField) -> i64 {
    if f.order() % 2 == 1 {
        (f.unit_order() / 2) as i64
    } else {
        0
    }
}

/// The symbol `{a_1, ..., a_n}` in `K_n`, reduced by `cap`.
pub fn symbol(field: &FieldRef, entries: &[Unit], cap: u64) -> Result<KElement> {
    for e in entries {
        if &e.field() != field {
            return Err(Error::FieldMismatch(format!("entry over {} in a symbol over {field}", e.field())));
        }
    }
    let n = entries.len() as i64;
    if n > field.top_degree() {
        return Ok(KElement::zero(field, n, cap));
    }
    let out = match entries {
        [] => KElement::integer(field, 1, 0),
        [Unit::Finite(f, a)] => KElement::from_log(field, f.log(*a)? as i64, 0),
        [Unit::Rational(u)] => KElement::from_unit(u, 0),
        [Unit::Rational(f), Unit::Rational(g)] => tame_symbol(f, g)?,
        _ => unreachable!("degrees above the top degree vanish"),
    };
    Ok(out.reduce(cap))
}

/// Tame coordinates of `{f, g}` in `K_2(F_q(t))`.
pub fn tame_symbol(f: &FactoredUnit, g: &FactoredUnit) -> Result<KElement> {
    if f.field() != g.field() {
        return Err(Error::FieldMismatch("symbol entries over different fields".into()));
    }
    let base = f.field();
    let field = FieldRef::Rational(base.clone());
    let mut places: Vec<&Poly> = f.factors().keys().chain(g.factors().keys()).collect();
    places.sort();
    places.dedup();
    let mut coords = Vec::new();
    for pi in places {
        let v = Place::finite(pi.clone())?;
        let k = v.try_residue_field()?;
        let (a, b) = (f.exponent(pi) as i128, g.exponent(pi) as i128);
        let lu = k.log(v.unit_residue(f))? as i128;
        let lw = k.log(v.unit_residue(g))? as i128;
        let n = k.unit_order() as i128;
        let c = (a * b * log_minus_one(&k) as i128 + a * lw - b * lu).rem_euclid(n);
        coords.push((CoordKey::Place(pi.clone()), c as i64));
    }
    KElement::from_coords(&field, 2, 0, coords)
}

fn combined_cap(a: u64, b: u64) -> u64 {
    match (a, b) {
        (0, c) | (c, 0) => c,
        (a, b) => num_integer::gcd(a, b),
    }
}

/// The product `x * y` in Milnor K-theory (or its quotient).
pub fn product(x: &KElement, y: &KElement) -> Result<KElement> {
    if x.field() != y.field() {
        return Err(Error::FieldMismatch(format!("{} vs {}", x.field(), y.field())));
    }
    let field = x.field();
    let cap = combined_cap(x.cap(), y.cap());
    let n = x.degree() + y.degree();
    if x.degree() < 0 || y.degree() < 0 || n > field.top_degree() {
        return Ok(KElement::zero(field, n, cap));
    }
    let (x, y) = (x.lift(), y.lift());
    let out = if x.degree() == 0 {
        y.scale(x.get(&CoordKey::Int))?
    } else if y.degree() == 0 {
        x.scale(y.get(&CoordKey::Int))?
    } else {
        tame_symbol(&x.to_unit()?, &y.to_unit()?)?
    };
    Ok(out.reduce(cap))
}

/// Restriction along a field map.
pub fn res(map: &FieldMap, x: &KElement) -> Result<KElement> {
    if x.field() != &map.src() {
        return Err(Error::FieldMismatch(format!("restriction source {} vs element over {}", map.src(), x.field())));
    }
    let dst = map.dst();
    let n = x.degree();
    if n < 0 || n > map.src().top_degree() || x.is_zero() {
        return Ok(KElement::zero(&dst, n, x.cap()));
    }
    if n == 0 {
        return x.with_field(&dst);
    }
    let cap = x.cap();
    let x = x.lift();
    let out = match (map, n) {
        (FieldMap::Finite(e) | FieldMap::Constants(e), 1) => {
            KElement::from_log(&dst, e.map_log(x.get(&CoordKey::Const) as u64) as i64, 0)
        }
        (FieldMap::Rational { emb, image }, 1) => KElement::from_unit(&x.to_unit()?.substitute(emb, image)?, 0),
        (FieldMap::Rational { emb, image }, 2) => {
            let pull = |p: &Poly| FactoredUnit::from_poly(&p.map_coeffs(emb).compose(image));
            let mut acc = KElement::zero(&dst, 2, 0);
            for (pi, a) in presentation(&x)? {
                acc = acc.add(&tame_symbol(&pull(&pi)?, &pull(&a)?)?)?;
            }
            acc
        }
        _ => unreachable!("degree bounded by the source"),
    };
    Ok(out.reduce(cap))
}

/// Writes a `K_2(F_q(t))` class as `sum {pi_i, a_i}` with monic irreducible
/// `pi_i` and nonzero `deg a_i < deg pi_i`, eliminating the largest place first.
pub fn presentation(x: &KElement) -> Result<Vec<(Poly, Poly)>> {
    if x.degree() != 2 || !x.field().is_rational() {
        return Err(Error::Invalid("presentation needs a K_2 class of a rational function field".into()));
    }
    let mut rest = x.lift();
    let mut out = Vec::new();
    while let Some((key, &l)) = rest.coords().iter().next_back() {
        let pi = match key {
            CoordKey::Place(p) => p.clone(),
            _ => unreachable!("K_2 coordinates sit at places"),
        };
        let v = Place::finite(pi.clone())?;
        let a = v.lift(v.residue_field().exp(l));
        let sym = tame_symbol(&FactoredUnit::from_poly(&pi)?, &FactoredUnit::from_poly(&a)?)?;
        rest = rest.sub(&sym)?;
        debug_assert_eq!(rest.get(&CoordKey::Place(pi.clone())), 0);
        out.push((pi, a));
    }
    Ok(out)
}

/// Norm of a monic irreducible `rho(s)` along `F(t) -> F(s)`, `t -> g(s)`.
fn substitution_norm(rho: &Poly, g: &Poly) -> Result<FactoredUnit> {
    let f = rho.field();
    let v = Place::finite(rho.clone())?;
    let k = v.residue_field();
    let gamma = v.reduce_poly(g);
    let mut conj = vec![gamma];
    let mut c = k.frobenius(gamma, f.degree());
    while c != gamma {
        conj.push(c);
        c = k.frobenius(c, f.degree());
    }
    let emb = v.constants_embedding();
    let mut minpoly = Poly::one(&k);
    for c in &conj {
        minpoly = minpoly.mul(&Poly::linear(&k, *c));
    }
    let minpoly = minpoly
        .pull_coeffs(&emb)
        .ok_or_else(|| Error::Invalid("minimal polynomial outside the constants".into()))?;
    let d = rho.deg() as i64;
    let e = g.deg() as i64;
    let sign = if ((e + 1) * d) % 2 == 0 { 1 } else { f.neg(1) };
    let c = f.mul(sign, f.pow(g.lc(), -d));
    let charpoly = FactoredUnit::from_poly(&minpoly)?.pow(d / conj.len() as i64);
    Ok(charpoly.mul(&FactoredUnit::constant(f, c)?))
}

/// Norm along the constant extension `F_a(t) -> F_b(t)` given by `emb`.
fn constant_norm(u: &FactoredUnit, emb: &FfEmbedding) -> Result<FactoredUnit> {
    let src = emb.src();
    let c = src.exp(emb.norm_log(emb.dst().log(u.leading_constant())?) as i64);
    let mut out = FactoredUnit::constant(src, c)?;
    for (rho, &e) in u.factors() {
        out = out.mul(&constant_norm_poly(rho, emb)?.pow(e));
    }
    Ok(out)
}

fn constant_norm_poly(rho: &Poly, emb: &FfEmbedding) -> Result<FactoredUnit> {
    let step = emb.src().degree();
    let mut prod = Poly::one(emb.dst());
    for i in 0..emb.degree() {
        prod = prod.mul(&rho.frobenius(step * i));
    }
    let pulled = prod
        .pull_coeffs(emb)
        .ok_or_else(|| Error::Invalid("norm polynomial outside the base".into()))?;
    FactoredUnit::from_poly(&pulled)
}

/// Corestriction along a finite field map.
pub fn cor(map: &FieldMap, x: &KElement) -> Result<KElement> {
    if x.field() != &map.dst() {
        return Err(Error::FieldMismatch(format!("corestriction target {} vs element over {}", map.dst(), x.field())));
    }
    let deg = map
        .degree()
        .ok_or_else(|| Error::Unsupported("corestriction along an infinite extension".into()))?;
    let src = map.src();
    let n = x.degree();
    if n < 0 || n > x.field().top_degree() || x.is_zero() {
        return Ok(KElement::zero(&src, n, x.cap()));
    }
    if n == 0 {
        return x.with_field(&src)?.scale(deg as i64);
    }
    let cap = x.cap();
    let x = x.lift();
    let out = match map {
        FieldMap::Finite(e) => KElement::from_log(&src, e.norm_log(x.get(&CoordKey::Const) as u64) as i64, 0),
        FieldMap::Constants(_) => unreachable!("no degree"),
        FieldMap::Rational { emb, image } => {
            let mid = FieldRef::Rational(emb.dst().clone());
            let is_s = image.deg() == 1 && image.coeff(0) == 0 && image.coeff(1) == 1;
            let y = if is_s {
                x.with_field(&mid)?
            } else {
                let sub = FieldMap::substitution(FfEmbedding::identity(emb.dst()), image.clone())?;
                match n {
                    1 => {
                        let u = x.to_unit()?;
                        let b = emb.dst();
                        let mut acc = FactoredUnit::constant(b, b.pow(u.leading_constant(), image.deg() as i64))?;
                        for (rho, &e) in u.factors() {
                            acc = acc.mul(&substitution_norm(rho, image)?.pow(e));
                        }
                        KElement::from_unit(&acc, 0)
                    }
                    _ => push_tame(&sub, &x, &mid)?,
                }
            };
            if emb.degree() == 1 && emb.twist() == 0 {
                y
            } else {
                match n {
                    1 => KElement::from_unit(&constant_norm(&y.to_unit()?, emb)?, 0),
                    _ => push_tame(&FieldMap::constant_extension(emb.clone()), &y, &src)?,
                }
            }
        }
    };
    Ok(out.reduce(cap))
}

/// Pushes tame coordinates down along a finite map of rational function
/// fields: each place contributes the residue-field transfer at the place
/// below it.
fn push_tame(map: &FieldMap, x: &KElement, src: &FieldRef) -> Result<KElement> {
    let (emb, image) = match map {
        FieldMap::Rational { emb, image } => (emb, image),
        _ => unreachable!(),
    };
    let mut acc = KElement::zero(src, 2, 0);
    for (key, &l) in x.coords() {
        let rho = match key {
            CoordKey::Place(p) => p,
            _ => unreachable!(),
        };
        let v = Place::finite(rho.clone())?;
        let below = if map.is_constant_extension() {
            constant_norm_poly(rho, emb)?
        } else {
            substitution_norm(rho, image)?
        };
        let pi = below
            .factors()
            .keys()
            .next()
            .cloned()
            .ok_or_else(|| Error::Invalid("place lies over no place".into()))?;
        let w = Place::finite(pi.clone())?;
        let r = map.induced_residue_map(&w, &v)?;
        let c = KElement::from_coords(src, 2, 0, [(CoordKey::Place(pi), r.norm_log(l as u64) as i64)])?;
        acc = acc.add(&c)?;
    }
    Ok(acc)
}

/// Residue `d_v: K_n(F_q(t)) -> K_{n-1}(kappa(v))` with the first-slot
/// convention `d_v{pi, u} = {u mod v}`.
pub fn residue(v: &Place, x: &KElement) -> Result<KElement> {
    if x.field() != &v.field() {
        return Err(Error::FieldMismatch(format!("place over {} applied to an element over {}", v.field(), x.field())));
    }
    let kappa = v.residue_ref();
    let n = x.degree();
    if n <= 0 || n > 2 || x.is_zero() {
        return Ok(KElement::zero(&kappa, n - 1, x.cap()));
    }
    let cap = x.cap();
    let x = x.lift();
    let out = match (n, v.kind()) {
        (1, _) => KElement::integer(&kappa, v.valuation(&x.to_unit()?), 0),
        (2, PlaceKind::Finite(pi)) => KElement::from_log(&kappa, x.get(&CoordKey::Place(pi.clone())), 0),
        (2, PlaceKind::Infinite) => residue_via_presentation(v, 1, &x)?,
        _ => unreachable!(),
    };
    Ok(out.reduce(cap))
}

/// Residue computed from the symbol presentation with the uniformizer
/// `c * pi` (or `c / t` at infinity).
pub fn residue_with_uniformizer(v: &Place, c: u32, x: &KElement) -> Result<KElement> {
    if x.field() != &v.field() {
        return Err(Error::FieldMismatch("place and element over different fields".into()));
    }
    if c == 0 {
        return Err(Error::ZeroElement);
    }
    let kappa = v.residue_ref();
    let n = x.degree();
    if n <= 0 || n > 2 || x.is_zero() {
        return Ok(KElement::zero(&kappa, n - 1, x.cap()));
    }
    let cap = x.cap();
    let x = x.lift();
    let out = match n {
        1 => KElement::integer(&kappa, v.valuation(&x.to_unit()?), 0),
        _ => residue_via_presentation(v, c, &x)?,
    };
    Ok(out.reduce(cap))
}

fn residue_via_presentation(v: &Place, c: u32, x: &KElement) -> Result<KElement> {
    let kappa = v.residue_ref();
    let k = v.residue_field();
    let cc = v.constants_embedding().apply(c);
    let local = |u: &FactoredUnit| -> Result<(i64, Unit)> {
        let a = v.valuation(u);
        Ok((a, Unit::Finite(k.clone(), k.mul(v.unit_residue(u), k.pow(cc, -a)))))
    };
    let mut acc = KElement::zero(&kappa, 1, 0);
    for (pi, a) in presentation(x)? {
        let locals = [local(&FactoredUnit::from_poly(&pi)?)?, local(&FactoredUnit::from_poly(&a)?)?];
        acc = acc.add(&local_residue(&kappa, &locals)?)?;
    }
    Ok(acc)
}

/// Residue of `{a_1, ..., a_n}` from local data `(v(a_k), residue of the unit
/// part)`: multilinear expansion over nonempty slot sets `S`, each term
/// `(-1)^(min S - 1) prod_{k in S} v_k` times the symbol with the first slot of
/// `S` removed, the other slots of `S` set to `-1`, and the remaining slots
/// set to the unit residues.
pub fn local_residue(kappa: &FieldRef, locals: &[(i64, Unit)]) -> Result<KElement> {
    let n = locals.len();
    if n == 0 {
        return Err(Error::Invalid("residue of the empty symbol".into()));
    }
    let mut acc = KElement::zero(kappa, n as i64 - 1, 0);
    for mask in 1u32..(1 << n) {
        let first = mask.trailing_zeros() as usize;
        let mut coeff: i64 = if first % 2 == 0 { 1 } else { -1 };
        for k in 0..n {
            if mask & (1 << k) != 0 {
                coeff = coeff.checked_mul(locals[k].0).ok_or(Error::Overflow("residue coefficient"))?;
            }
        }
        if coeff == 0 {
            continue;
        }
        let entries: Vec<Unit> = (0..n)
            .filter(|&k| k != first)
            .map(|k| {
                if mask & (1 << k) != 0 {
                    Unit::minus_one(kappa)
                } else {
                    locals[k].1.clone()
                }
            })
            .collect();
        acc = acc.add(&symbol(kappa, &entries, 0)?.scale(coeff)?)?;
    }
    Ok(acc)
}

/// Specialization `s_v(x) = d_v({-pi} x)`.
pub fn specialize(v: &Place, x: &KElement) -> Result<KElement> {
    let f = v.base();
    let minus_pi = v.uniformizer().mul(&FactoredUnit::constant(f, f.neg(1))?);
    let sym = KElement::from_unit(&minus_pi, 0);
    residue(v, &product(&sym, x)?)
}
