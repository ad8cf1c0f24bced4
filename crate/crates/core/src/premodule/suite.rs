//! Executable relations (R0)-(R3e), lemma laws L4-L7, and the (FD)/(C)
//! checks, evaluated on seeded pseudo-random witnesses.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use super::instance::PremoduleInstance;
use super::sample;
use crate::error::{Error, Result};
use crate::exactfield::{make_field, FactoredUnit, FfEmbedding, FiniteField, Poly};
use crate::milnor::{self, FieldMap, FieldRef, KElement, Place};

pub const CATALOGUE: [&str; 18] = [
    "R0", "R1a", "R1b", "R1c", "R2a", "R2b", "R2c", "R3a", "R3b", "R3c", "R3d", "R3e", "L4", "L5", "L6", "L7", "FD",
    "C",
];

/// One evaluated witness: both sides of the law as lists of values.
pub struct Trial {
    pub witness: BTreeMap<String, String>,
    pub lhs: Vec<KElement>,
    pub rhs: Vec<KElement>,
}

impl Trial {
    pub fn new() -> Trial {
        Trial {
            witness: BTreeMap::new(),
            lhs: Vec::new(),
            rhs: Vec::new(),
        }
    }

    pub fn note(&mut self, key: &str, value: impl std::fmt::Debug) -> &mut Self {
        self.witness.insert(key.to_string(), format!("{value:?}"));
        self
    }

    pub fn sides(mut self, lhs: KElement, rhs: KElement) -> Self {
        self.lhs.push(lhs);
        self.rhs.push(rhs);
        self
    }

    pub fn holds(&self, inst: &PremoduleInstance) -> bool {
        self.lhs.len() == self.rhs.len() && self.lhs.iter().zip(&self.rhs).all(|(a, b)| inst.eq(a, b))
    }
}

impl Default for Trial {
    fn default() -> Self {
        Trial::new()
    }
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct Failure {
    pub trial: usize,
    pub witness: Value,
    pub lhs: Value,
    pub rhs: Value,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct RelationReport {
    pub relation: String,
    pub instance: String,
    pub trials: usize,
    pub seed: u64,
    pub passed: bool,
    pub failures: Vec<Failure>,
}

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub trials: usize,
    pub seed: u64,
    pub relations: Vec<String>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            trials: 200,
            seed: 42,
            relations: CATALOGUE.iter().map(|s| s.to_string()).collect(),
        }
    }
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// The generator driving trial `trial` of relation `id`.
pub fn trial_rng(seed: u64, id: &str, trial: usize) -> ChaCha8Rng {
    let tag = id.bytes().fold(0u64, |h, b| h.wrapping_mul(131).wrapping_add(b as u64));
    ChaCha8Rng::seed_from_u64(splitmix(splitmix(seed ^ tag) ^ trial as u64))
}

type TrialFn = fn(&PremoduleInstance, &mut ChaCha8Rng) -> Result<Trial>;

fn lookup(id: &str) -> Result<TrialFn> {
    Ok(match id {
        "R0" => r0,
        "R1a" => r1a,
        "R1b" => r1b,
        "R1c" => r1c,
        "R2a" => r2a,
        "R2b" => r2b,
        "R2c" => r2c,
        "R3a" => r3a,
        "R3b" => r3b,
        "R3c" => r3c,
        "R3d" => r3d,
        "R3e" => r3e,
        "L4" => l4,
        "L5" => l5,
        "L6" => l6,
        "L7" => l7,
        "FD" => crate::cycles::fd_trial,
        "C" => crate::cycles::c_trial,
        _ => return Err(Error::Invalid(format!("unknown relation '{id}'"))),
    })
}

/// Evaluates a single trial; `None` when the law holds.
pub fn replay(inst: &PremoduleInstance, id: &str, seed: u64, trial: usize) -> Result<Option<Failure>> {
    let f = lookup(id)?;
    let mut rng = trial_rng(seed, id, trial);
    Ok(match f(inst, &mut rng) {
        Ok(t) if t.holds(inst) => None,
        Ok(t) => Some(Failure {
            trial,
            witness: json!(t.witness),
            lhs: Value::Array(t.lhs.iter().map(KElement::to_json).collect()),
            rhs: Value::Array(t.rhs.iter().map(KElement::to_json).collect()),
        }),
        Err(e) => {
            let mut w = BTreeMap::new();
            w.insert("error".to_string(), e.to_string());
            Some(Failure {
                trial,
                witness: json!(w),
                lhs: Value::Null,
                rhs: Value::Null,
            })
        }
    })
}

pub fn check_relation(inst: &PremoduleInstance, id: &str, trials: usize, seed: u64) -> Result<RelationReport> {
    lookup(id)?;
    let results: Vec<Result<Option<Failure>>> =
        (0..trials).into_par_iter().map(|i| replay(inst, id, seed, i)).collect();
    let mut failures = Vec::new();
    for r in results {
        if let Some(f) = r? {
            failures.push(f);
        }
    }
    Ok(RelationReport {
        relation: id.to_string(),
        instance: inst.name(),
        trials,
        seed,
        passed: failures.is_empty(),
        failures,
    })
}

pub fn run_relation_suite(inst: &PremoduleInstance, config: &SuiteConfig) -> Result<Vec<RelationReport>> {
    config
        .relations
        .iter()
        .map(|id| check_relation(inst, id, config.trials, config.seed))
        .collect()
}

// Witness shapes.

fn finite_ref(f: &FiniteField) -> FieldRef {
    FieldRef::Finite(f.clone())
}

fn random_symbol(rng: &mut ChaCha8Rng, field: &FieldRef) -> KElement {
    let r = rng.gen_range(0..=field.top_degree());
    sample::milnor(rng, field, r)
}

/// Two composable maps.
fn tower(rng: &mut ChaCha8Rng, finite_only: bool) -> (FieldMap, FieldMap) {
    let f = sample::base_field(rng);
    let shape = if finite_only { rng.gen_range(0..2) * 3 } else { rng.gen_range(0..4) };
    match shape {
        0 => {
            let a = sample::tower_extension(rng, &f, 2);
            let b = sample::extension(rng, a.dst(), 2, 1 << 16);
            (FieldMap::Finite(a), FieldMap::Finite(b))
        }
        1 => {
            let a = sample::extension(rng, &f, 2, 81);
            let b = sample::constant_extension(rng, a.dst());
            let b = if b.dst().order() > 81 { FfEmbedding::identity(a.dst()) } else { b };
            (FieldMap::Finite(a), FieldMap::Constants(b))
        }
        2 => {
            let a = sample::constant_extension(rng, &f);
            let b = sample::rational_map(rng, a.dst());
            (FieldMap::Constants(a), b)
        }
        _ => {
            let a = sample::rational_map(rng, &f);
            let b = small_follow_up(rng, &a);
            (a, b)
        }
    }
}

/// A second rational map keeping residue fields small.
fn small_follow_up(rng: &mut ChaCha8Rng, a: &FieldMap) -> FieldMap {
    let dst = a.embedding().dst().clone();
    let g_deg = match a {
        FieldMap::Rational { image, .. } => image.deg(),
        _ => 1,
    };
    let twist = rng.gen_range(0..dst.degree());
    let emb = FfEmbedding::new(&dst, &dst, twist).unwrap();
    if g_deg == 1 && dst.order() <= 9 && rng.gen_bool(0.5) {
        FieldMap::substitution(emb, sample::poly(rng, &dst, 2)).unwrap()
    } else {
        FieldMap::substitution(emb, sample::poly(rng, &dst, 1)).unwrap()
    }
}

fn r0(inst: &PremoduleInstance, rng: &mut ChaCha8Rng) -> Result<Trial> {
    let field = sample::base_ref(rng);
    let x = random_symbol(rng, &field);
    let y = random_symbol(rng, &field);
    let rho = sample::value(rng, inst, &field);
    let lhs = inst.gamma(&x, &inst.gamma(&y, &rho)?)?;
    let rhs = inst.gamma(&milnor::product(&x, &y)?, &rho)?;
    let mut t = Trial::new();
    t.note("field", &field).note("x", &x).note("y", &y).note("rho", &rho);
    Ok(t.sides(lhs, rhs))
}

fn r1a(inst: &PremoduleInstance, rng: &mut ChaCha8Rng) -> Result<Trial> {
    let (phi, psi) = tower(rng, false);
    let x = sample::value(rng, inst, &phi.src());
    let lhs = inst.restrict(&phi.then(&psi)?, &x)?;
    let rhs = inst.restrict(&psi, &inst.restrict(&phi, &x)?)?;
    let mut t = Trial::new();
    t.note("phi", &phi).note("psi", &psi).note("x", &x);
    Ok(t.sides(lhs, rhs))
}

fn r1b(inst: &PremoduleInstance, rng: &mut ChaCha8Rng) -> Result<Trial> {
    let (phi, psi) = loop {
        let (a, b) = tower(rng, true);
        if !matches!(b, FieldMap::Constants(_)) {
            break (a, b);
        }
    };
    let (phi, psi) = if rng.gen_bool(0.5) {
        (phi, psi)
    } else {
        let f = sample::base_field(rng);
        let a = sample::rational_map(rng, &f);
        let b = small_follow_up(rng, &a);
        (a, b)
    };
    let x = sample::value(rng, inst, &psi.dst());
    let lhs = inst.corestrict(&phi.then(&psi)?, &x)?;
    let rhs = inst.corestrict(&phi, &inst.corestrict(&psi, &x)?)?;
    let mut t = Trial::new();
    t.note("phi", &phi).note("psi", &psi).note("x", &x);
    Ok(t.sides(lhs, rhs))
}

/// Points of `Spec(E (x)_K L)` as pairs of embeddings into the compositum,
/// one per orbit of its automorphism group: `(alpha: E -> M, beta: L -> M)`.
pub fn compositum_points(phi: &FfEmbedding, psi: &FfEmbedding) -> Result<Vec<(FfEmbedding, FfEmbedding)>> {
    let (e, l) = (phi.dst(), psi.dst());
    let m = num_integer::lcm(e.degree(), l.degree());
    let big = make_field(e.characteristic(), m)?;
    let auts = FfEmbedding::all(&big, &big)?;
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for alpha in FfEmbedding::all(e, &big)? {
        for beta in FfEmbedding::all(l, &big)? {
            if phi.then(&alpha)? != psi.then(&beta)? {
                continue;
            }
            let key = auts
                .iter()
                .map(|s| Ok((alpha.then(s)?.twist(), beta.then(s)?.twist())))
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .min()
                .unwrap();
            if seen.insert(key) {
                out.push((alpha.clone(), beta.clone()));
            }
        }
    }
    Ok(out)
}

fn wrap(e: &FfEmbedding, rational: bool) -> FieldMap {
    if rational {
        FieldMap::constant_extension(e.clone())
    } else {
        FieldMap::Finite(e.clone())
    }
}

/// `K -> E`, `K -> L` with degrees from `{1,2,3}` and a compositum within budget.
fn two_extensions(rng: &mut ChaCha8Rng, budget: u64, divides: bool) -> (FfEmbedding, FfEmbedding) {
    loop {
        let k = sample::base_field(rng);
        let a = rng.gen_range(1..=3u32);
        let b = rng.gen_range(1..=3u32);
        if divides && b % a != 0 {
            continue;
        }
        let l = num_integer::lcm(a, b);
        if (k.order() as u64).pow(l) > budget {
            continue;
        }
        let e = k.extension(a).unwrap();
        let lf = k.extension(b).unwrap();
        let phi = FfEmbedding::new(&k, &e, rng.gen_range(0..k.degree())).unwrap();
        let psi = FfEmbedding::new(&k, &lf, rng.gen_range(0..k.degree())).unwrap();
        return (phi, psi);
    }
}

/// A rational value whose corestriction to the base and restriction to a
/// constant field of order `big` keeps residue fields under the field cap.
fn bounded_value(rng: &mut ChaCha8Rng, inst: &PremoduleInstance, field: &FieldRef, rel: u32, big: u64) -> KElement {
    loop {
        let x = sample::value(rng, inst, field);
        let d = x
            .coords()
            .keys()
            .filter_map(|k| match k {
                milnor::CoordKey::Place(p) => Some(p.deg() as u32),
                _ => None,
            })
            .max()
            .unwrap_or(1);
        let worst = (rel * d).saturating_sub(1).max(1);
        if x.degree() < 2 || (big as f64).powi(worst as i32) <= crate::exactfield::DEFAULT_FIELD_CAP as f64 {
            return x;
        }
    }
}

fn base_change(inst: &PremoduleInstance, rng: &mut ChaCha8Rng, rational: bool) -> Result<Trial> {
    let budget = if rational { 81 } else { 1 << 16 };
    let (phi, psi) = two_extensions(rng, budget, false);
    let (fphi, fpsi) = (wrap(&phi, rational), wrap(&psi, rational));
    let big = (phi.src().order() as u64).pow(num_integer::lcm(phi.degree(), psi.degree()));
    let x = bounded_value(rng, inst, &fphi.dst(), phi.degree(), big);
    let n = inst.degree_of(&x);
    let lhs = inst.restrict(&fpsi, &inst.corestrict(&fphi, &x)?)?;
    let mut rhs = inst.zero(&fpsi.dst(), n);
    let points = compositum_points(&phi, &psi)?;
    for (alpha, beta) in &points {
        let term = inst.corestrict(&wrap(beta, rational), &inst.restrict(&wrap(alpha, rational), &x)?)?;
        rhs = inst.add(&rhs, &term)?;
    }
    let mut t = Trial::new();
    t.note("phi", &fphi).note("psi", &fpsi).note("x", &x).note("points", points.len());
    Ok(t.sides(lhs, rhs))
}

fn r1c(inst: &PremoduleInstance, rng: &mut ChaCha8Rng) -> Result<Trial> {
    let rational = rng.gen_bool(0.5);
    base_change(inst, rng, rational)
}

fn l6(inst: &PremoduleInstance, rng: &mut ChaCha8Rng) -> Result<Trial> {
    let rational = rng.gen_bool(0.5);
    base_change(inst, rng, rational)
}

fn l7(inst: &PremoduleInstance, rng: &mut ChaCha8Rng) -> Result<Trial> {
    let rational = rng.gen_bool(0.5);
    let budget = if rational { 81 } else { 1 << 16 };
    let (phi, psi) = two_extensions(rng, budget, true);
    let (fphi, fpsi) = (wrap(&phi, rational), wrap(&psi, rational));
    let x = bounded_value(rng, inst, &fphi.dst(), phi.degree(), psi.dst().order() as u64);
    let n = inst.degree_of(&x);
    let lhs = inst.restrict(&fpsi, &inst.corestrict(&fphi, &x)?)?;
    let mut rhs = inst.zero(&fpsi.dst(), n);
    let mut homs = 0;
    for j in FfEmbedding::all(phi.dst(), psi.dst())? {
        if phi.then(&j)? == psi {
            homs += 1;
            rhs = inst.add(&rhs, &inst.restrict(&wrap(&j, rational), &x)?)?;
        }
    }
    let mut t = Trial::new();
    t.note("phi", &fphi).note("psi", &fpsi).note("x", &x).note("homs", homs);
    Ok(t.sides(lhs, rhs))
}

fn r2a(inst: &PremoduleInstance, rng: &mut ChaCha8Rng) -> Result<Trial> {
    let phi = sample::any_map(rng);
    let x = random_symbol(rng, &phi.src());
    let rho = sample::value(rng, inst, &phi.src());
    let lhs = inst.restrict(&phi, &inst.gamma(&x, &rho)?)?;
    let rhs = inst.gamma(&milnor::res(&phi, &x)?, &inst.restrict(&phi, &rho)?)?;
    let mut t = Trial::new();
    t.note("phi", &phi).note("x", &x).note("rho", &rho);
    Ok(t.sides(lhs, rhs))
}

fn r2b(inst: &PremoduleInstance, rng: &mut ChaCha8Rng) -> Result<Trial> {
    let phi = sample::finite_map(rng);
    let x = random_symbol(rng, &phi.src());
    let rho = sample::value(rng, inst, &phi.dst());
    let lhs = inst.corestrict(&phi, &inst.gamma(&milnor::res(&phi, &x)?, &rho)?)?;
    let rhs = inst.gamma(&x, &inst.corestrict(&phi, &rho)?)?;
    let mut t = Trial::new();
    t.note("phi", &phi).note("x", &x).note("rho", &rho);
    Ok(t.sides(lhs, rhs))
}

fn r2c(inst: &PremoduleInstance, rng: &mut ChaCha8Rng) -> Result<Trial> {
    let phi = sample::finite_map(rng);
    let y = random_symbol(rng, &phi.dst());
    let rho = sample::value(rng, inst, &phi.src());
    let lhs = inst.corestrict(&phi, &inst.gamma(&y, &inst.restrict(&phi, &rho)?)?)?;
    let rhs = inst.gamma(&milnor::cor(&phi, &y)?, &rho)?;
    let mut t = Trial::new();
    t.note("phi", &phi).note("y", &y).note("rho", &rho);
    Ok(t.sides(lhs, rhs))
}

/// A map of rational function fields with a place `w` below and `v` above,
/// ramified in about half of the draws.
fn valued_pair(rng: &mut ChaCha8Rng) -> Result<(FieldMap, Place, Place, i64)> {
    let f = sample::base_field(rng);
    if rng.gen_bool(0.5) {
        let emb = if rng.gen_bool(0.3) {
            sample::constant_extension(rng, &f)
        } else {
            FfEmbedding::new(&f, &f, rng.gen_range(0..f.degree())).unwrap()
        };
        let dst = emb.dst().clone();
        let c0 = rng.gen_range(0..f.order());
        let w = Place::finite(Poly::linear(&f, c0))?;
        let e = rng.gen_range(2..=3usize);
        let rho = Poly::linear(&dst, rng.gen_range(0..dst.order()));
        let extra = if (dst.order() as u64).pow(e as u32 + 1) <= 1 << 16 { rng.gen_range(0..=1) } else { 0 };
        let r = sample::poly(rng, &dst, extra);
        let g = rho.pow(e as u64).mul(&r).add(&Poly::constant(&dst, emb.apply(c0)));
        let map = FieldMap::substitution(emb, g)?;
        let (v, e) = map
            .places_above(&w)?
            .into_iter()
            .find(|(v, _)| v.poly() == Some(&rho))
            .expect("rho lies over w");
        Ok((map, w, v, e))
    } else {
        let map = sample::rational_map(rng, &f);
        let w = sample::place(rng, &f, sample::max_place_degree(&f, 2), true);
        let above = map.places_above(&w)?;
        let (v, e) = above.choose(rng).unwrap().clone();
        Ok((map, w, v, e))
    }
}

fn r3a(inst: &PremoduleInstance, rng: &mut ChaCha8Rng) -> Result<Trial> {
    let (map, w, v, e) = valued_pair(rng)?;
    let d = rng.gen_range(0..=2);
    let x = inst.from_milnor(&sample::milnor_at(rng, &w, d));
    let bar = map.induced_residue_map(&w, &v)?;
    let lhs = inst.residue(&v, &inst.restrict(&map, &x)?)?;
    let rhs = inst.scale(&inst.restrict(&FieldMap::Finite(bar), &inst.residue(&w, &x)?)?, e)?;
    let mut t = Trial::new();
    t.note("phi", &map).note("w", &w).note("v", &v).note("e", e).note("x", &x);
    Ok(t.sides(lhs, rhs))
}

fn r3b(inst: &PremoduleInstance, rng: &mut ChaCha8Rng) -> Result<Trial> {
    let f = sample::base_field(rng);
    let map = sample::rational_map(rng, &f);
    let v = sample::place(rng, &f, sample::max_place_degree(&f, 2), true);
    let above = map.places_above(&v)?;
    let (w0, _) = above.choose(rng).unwrap().clone();
    let x = sample::value_at(rng, inst, &w0);
    let x = inst.from_milnor(&x.lift());
    let n = inst.degree_of(&x);
    let lhs = inst.residue(&v, &inst.corestrict(&map, &x)?)?;
    let mut rhs = inst.zero(&v.residue_ref(), n - 1);
    for (w, _) in &above {
        let bar = map.induced_residue_map(&v, w)?;
        rhs = inst.add(&rhs, &inst.corestrict(&FieldMap::Finite(bar), &inst.residue(w, &x)?)?)?;
    }
    let mut t = Trial::new();
    t.note("phi", &map).note("v", &v).note("x", &x).note("above", above.len());
    Ok(t.sides(lhs, rhs))
}

fn r3c(inst: &PremoduleInstance, rng: &mut ChaCha8Rng) -> Result<Trial> {
    let f = sample::base_field(rng);
    let emb = sample::constant_extension(rng, &f);
    let phi = FieldMap::Constants(emb.clone());
    let v = sample::place(rng, emb.dst(), 2, true);
    let x = sample::value(rng, inst, &finite_ref(&f));
    let n = inst.degree_of(&x);
    let lhs = inst.residue(&v, &inst.restrict(&phi, &x)?)?;
    let rhs = inst.zero(&v.residue_ref(), n - 1);
    let mut t = Trial::new();
    t.note("phi", &phi).note("v", &v).note("x", &x);
    Ok(t.sides(lhs, rhs))
}

fn r3d(inst: &PremoduleInstance, rng: &mut ChaCha8Rng) -> Result<Trial> {
    let f = sample::base_field(rng);
    let emb = sample::constant_extension(rng, &f);
    let phi = FieldMap::Constants(emb.clone());
    let v = sample::place(rng, emb.dst(), 2, true);
    let c = sample::nonzero(rng, emb.dst());
    let minus_pi = sample::minus_prime(&v, c)?;
    let x = sample::value(rng, inst, &finite_ref(&f));
    let lhs = inst.residue(&v, &inst.gamma(&minus_pi, &inst.restrict(&phi, &x)?)?)?;
    let bar = FieldMap::Finite(emb.then(&v.constants_embedding())?);
    let rhs = inst.restrict(&bar, &x)?;
    let mut t = Trial::new();
    t.note("phi", &phi).note("v", &v).note("pi_scale", c).note("x", &x);
    Ok(t.sides(lhs, rhs))
}

fn r3e(inst: &PremoduleInstance, rng: &mut ChaCha8Rng) -> Result<Trial> {
    let f = sample::base_field(rng);
    let v = if rng.gen_bool(0.3) {
        Place::infinite(&f)
    } else {
        sample::place(rng, &f, sample::max_place_degree(&f, 2), true)
    };
    let u = sample::unit_at(rng, &v);
    let rho = sample::value_at(rng, inst, &v);
    let ubar = KElement::from_log(&v.residue_ref(), v.residue_field().log(v.unit_residue(&u))? as i64, 0);
    let lhs = inst.residue(&v, &inst.gamma(&KElement::from_unit(&u, 0), &rho)?)?;
    let rhs = inst.neg(&inst.gamma(&ubar, &inst.residue(&v, &rho)?)?)?;
    let mut t = Trial::new();
    t.note("v", &v).note("u", &u).note("rho", &rho);
    Ok(t.sides(lhs, rhs))
}

fn l4(inst: &PremoduleInstance, rng: &mut ChaCha8Rng) -> Result<Trial> {
    let phi = sample::finite_map(rng);
    let rho = sample::value(rng, inst, &phi.dst());
    let y = random_symbol(rng, &phi.src());
    let ry = milnor::res(&phi, &y)?;
    let lhs1 = inst.corestrict(&phi, &inst.right_gamma(&rho, &ry)?)?;
    let rhs1 = inst.right_gamma(&inst.corestrict(&phi, &rho)?, &y)?;
    let lhs2 = inst.corestrict(&phi, &inst.gamma(&ry, &rho)?)?;
    let rhs2 = inst.gamma(&y, &inst.corestrict(&phi, &rho)?)?;
    let mut t = Trial::new();
    t.note("phi", &phi).note("x", &rho).note("y", &y);
    Ok(t.sides(lhs1, rhs1).sides(lhs2, rhs2))
}

fn l5(inst: &PremoduleInstance, rng: &mut ChaCha8Rng) -> Result<Trial> {
    let phi = sample::finite_map(rng);
    let x = sample::value(rng, inst, &phi.src());
    let d = phi.degree().expect("finite map") as i64;
    let lhs = inst.corestrict(&phi, &inst.restrict(&phi, &x)?)?;
    let rhs = inst.scale(&x, d)?;
    let mut t = Trial::new();
    t.note("phi", &phi).note("x", &x).note("degree", d);
    Ok(t.sides(lhs, rhs))
}

/// A unit of `F_q(t)` built from the given factors, for tests.
pub fn unit_of(f: &FiniteField, c: u32, factors: &[(&[u32], i64)]) -> Result<FactoredUnit> {
    let mut u = FactoredUnit::constant(f, c)?;
    for (coeffs, e) in factors {
        u = u.mul(&FactoredUnit::from_poly(&Poly::new(f.clone(), coeffs.to_vec()))?.pow(*e));
    }
    Ok(u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::premodule::{milnor_instance, mutant_instance, Mutant};

    #[test]
    fn compositum_point_counts() {
        for (p, a, b) in [(2u32, 2u32, 3u32), (3, 2, 2), (2, 2, 4), (5, 1, 2)] {
            let k = make_field(p, 1).unwrap();
            let phi = FfEmbedding::canonical(&k, &k.extension(a).unwrap()).unwrap();
            let psi = FfEmbedding::canonical(&k, &k.extension(b).unwrap()).unwrap();
            let pts = compositum_points(&phi, &psi).unwrap();
            assert_eq!(pts.len() as u32, num_integer::gcd(a, b), "p={p} a={a} b={b}");
        }
    }

    #[test]
    fn trials_replay() {
        let inst = milnor_instance();
        let a = replay(&inst, "R3e", 7, 3).unwrap();
        let b = replay(&inst, "R3e", 7, 3).unwrap();
        assert_eq!(a, b);
        assert!(check_relation(&inst, "R9", 1, 0).is_err());
    }

    #[test]
    fn r3e_sign_mutant_fails_r3e() {
        let report = check_relation(&mutant_instance(Mutant::R3eSign), "R3e", 200, 7).unwrap();
        assert!(!report.passed);
        let first = &report.failures[0];
        let again = replay(&mutant_instance(Mutant::R3eSign), "R3e", 7, first.trial).unwrap();
        assert_eq!(again.as_ref(), Some(first));
    }
}
