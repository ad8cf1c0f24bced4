//! Pseudo-random witnesses over the field universe `q in {2, 3, 4, 5, 9}`.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::Result;
use crate::exactfield::{make_field, FactoredUnit, FfEmbedding, FiniteField, Poly};
use crate::milnor::{tame_symbol, FieldMap, FieldRef, KElement, Place};

pub const UNIVERSE: [(u32, u32); 5] = [(2, 1), (3, 1), (2, 2), (5, 1), (3, 2)];

/// Largest residue field the samplers aim for.
const RESIDUE_BUDGET: u64 = 1 << 14;
/// Largest finite field used in towers.
const TOWER_BUDGET: u64 = 1 << 16;

pub fn base_field<R: Rng>(rng: &mut R) -> FiniteField {
    let (p, m) = *UNIVERSE.choose(rng).unwrap();
    make_field(p, m).expect("universe field")
}

pub fn base_ref<R: Rng>(rng: &mut R) -> FieldRef {
    let f = base_field(rng);
    if rng.gen_bool(0.5) {
        FieldRef::Finite(f)
    } else {
        FieldRef::Rational(f)
    }
}

pub fn nonzero<R: Rng>(rng: &mut R, f: &FiniteField) -> u32 {
    rng.gen_range(1..f.order())
}

/// Random polynomial of exact degree `d`.
pub fn poly<R: Rng>(rng: &mut R, f: &FiniteField, d: usize) -> Poly {
    let mut c: Vec<u32> = (0..d).map(|_| rng.gen_range(0..f.order())).collect();
    c.push(nonzero(rng, f));
    Poly::new(f.clone(), c)
}

pub fn irreducible<R: Rng>(rng: &mut R, f: &FiniteField, d: usize) -> Poly {
    loop {
        let p = poly(rng, f, d).monic();
        if p.is_irreducible() {
            return p;
        }
    }
}

/// Largest place degree keeping residue fields within budget.
pub fn max_place_degree(f: &FiniteField, cap: usize) -> usize {
    let q = f.order() as u64;
    let mut d = 1;
    while d < cap && q.pow(d as u32 + 1) <= RESIDUE_BUDGET {
        d += 1;
    }
    d
}

pub fn unit<R: Rng>(rng: &mut R, f: &FiniteField, max_factors: usize, max_deg: usize) -> FactoredUnit {
    let mut u = FactoredUnit::constant(f, nonzero(rng, f)).unwrap();
    let k = rng.gen_range(0..=max_factors);
    for _ in 0..k {
        let d = rng.gen_range(1..=max_deg);
        let e = *[-2i64, -1, 1, 1, 2].choose(rng).unwrap();
        u = u.mul(&FactoredUnit::from_poly(&poly(rng, f, d)).unwrap().pow(e));
    }
    u
}

/// Random integral Milnor class of degree `n`.
pub fn milnor<R: Rng>(rng: &mut R, field: &FieldRef, n: i64) -> KElement {
    let f = field.base();
    let md = max_place_degree(f, 2);
    match (n, field) {
        (0, _) => KElement::integer(field, rng.gen_range(-4..=4), 0),
        (1, FieldRef::Finite(_)) => KElement::from_log(field, rng.gen_range(0..f.unit_order() as i64), 0),
        (1, FieldRef::Rational(_)) => KElement::from_unit(&unit(rng, f, 2, md), 0),
        (2, FieldRef::Rational(_)) => {
            let mut acc = KElement::zero(field, 2, 0);
            for _ in 0..rng.gen_range(1..=2) {
                let a = unit(rng, f, 2, md);
                let b = unit(rng, f, 2, md);
                acc = acc.add(&tame_symbol(&a, &b).unwrap()).unwrap();
            }
            acc
        }
        _ => KElement::zero(field, n, 0),
    }
}

/// Like [`milnor`], biased to involve the uniformizer of `v`.
pub fn milnor_at<R: Rng>(rng: &mut R, v: &Place, n: i64) -> KElement {
    let field = v.field();
    let f = v.base();
    let md = max_place_degree(f, 2);
    let k = rng.gen_range(-2i64..=2);
    let pik = v.uniformizer().pow(k);
    match n {
        1 => KElement::from_unit(&pik.mul(&unit(rng, f, 1, md)), 0),
        2 => {
            let a = pik.mul(&unit(rng, f, 1, md));
            let b = v.uniformizer().pow(rng.gen_range(-1..=1)).mul(&unit(rng, f, 1, md));
            tame_symbol(&a, &b).unwrap().add(&milnor(rng, &field, 2)).unwrap()
        }
        _ => milnor(rng, &field, n),
    }
}

pub fn place<R: Rng>(rng: &mut R, f: &FiniteField, max_deg: usize, allow_inf: bool) -> Place {
    if allow_inf && rng.gen_bool(0.25) {
        return Place::infinite(f);
    }
    let d = rng.gen_range(1..=max_deg.max(1));
    Place::finite(irreducible(rng, f, d)).unwrap()
}

/// A unit with `v(u) = 0`.
pub fn unit_at<R: Rng>(rng: &mut R, v: &Place) -> FactoredUnit {
    let f = v.base();
    let u = unit(rng, f, 2, max_place_degree(f, 2));
    let a = v.valuation(&u);
    u.mul(&v.uniformizer().pow(-a))
}

/// Random extension `F -> F'` with `[F' : F] <= max_rel` and `|F'| <= budget`.
pub fn extension<R: Rng>(rng: &mut R, f: &FiniteField, max_rel: u32, budget: u64) -> FfEmbedding {
    let q = f.order() as u64;
    let rels: Vec<u32> = (1..=max_rel).filter(|&a| q.pow(a) <= budget).collect();
    let a = *rels.choose(rng).unwrap();
    let dst = f.extension(a).unwrap();
    FfEmbedding::new(f, &dst, rng.gen_range(0..f.degree())).unwrap()
}

pub fn tower_extension<R: Rng>(rng: &mut R, f: &FiniteField, max_rel: u32) -> FfEmbedding {
    extension(rng, f, max_rel, TOWER_BUDGET)
}

/// Constant field of a rational function field: small enough for degree-2 places.
pub fn constant_extension<R: Rng>(rng: &mut R, f: &FiniteField) -> FfEmbedding {
    extension(rng, f, 2, 81)
}

/// A finite map of rational function fields: constant extension, substitution,
/// or both.
pub fn rational_map<R: Rng>(rng: &mut R, f: &FiniteField) -> FieldMap {
    let emb = if rng.gen_bool(0.5) {
        constant_extension(rng, f)
    } else {
        FfEmbedding::new(f, f, rng.gen_range(0..f.degree())).unwrap()
    };
    let q = emb.dst().order() as u64;
    let md = max_place_degree(f, 2) as u32;
    let max_g = (1..=3u32).filter(|&d| q.pow(d * md) <= TOWER_BUDGET).max().unwrap_or(1) as usize;
    if rng.gen_bool(0.35) || max_g == 1 && emb.degree() > 1 {
        FieldMap::constant_extension(emb)
    } else {
        let d = rng.gen_range(1..=max_g);
        FieldMap::substitution(emb.clone(), poly(rng, emb.dst(), d)).unwrap()
    }
}

/// Any supported field map out of a random source.
pub fn any_map<R: Rng>(rng: &mut R) -> FieldMap {
    let f = base_field(rng);
    match rng.gen_range(0..3) {
        0 => FieldMap::Finite(tower_extension(rng, &f, 3)),
        1 => FieldMap::Constants(constant_extension(rng, &f)),
        _ => rational_map(rng, &f),
    }
}

/// A random finite map.
pub fn finite_map<R: Rng>(rng: &mut R) -> FieldMap {
    let f = base_field(rng);
    if rng.gen_bool(0.4) {
        FieldMap::Finite(tower_extension(rng, &f, 3))
    } else {
        rational_map(rng, &f)
    }
}

/// Instance value in `M(E, n)` for a random admissible `n`.
pub fn value<R: Rng>(rng: &mut R, inst: &super::PremoduleInstance, field: &FieldRef) -> KElement {
    let d = rng.gen_range(0..=field.top_degree());
    inst.from_milnor(&milnor(rng, field, d))
}

pub fn value_at<R: Rng>(rng: &mut R, inst: &super::PremoduleInstance, v: &Place) -> KElement {
    let d = rng.gen_range(0..=2);
    inst.from_milnor(&milnor_at(rng, v, d))
}

/// Uniformizer-scaled symbol `{-c pi}`.
pub fn minus_prime(v: &Place, c: u32) -> Result<KElement> {
    let f = v.base();
    let u = v.uniformizer().mul(&FactoredUnit::constant(f, f.neg(c))?);
    Ok(KElement::from_unit(&u, 0))
}
