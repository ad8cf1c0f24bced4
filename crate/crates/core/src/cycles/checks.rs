//! The (FD) and (C) checks on sampled classes.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::class::{Coord, CycleClass, FormalSum, FormalSymbol, FormalUnit};
use super::differential::{differential, differential_window, support_degree};
use crate::error::Result;
use crate::exactfield::{make_field, FiniteField};
use crate::milnor::{FieldRef, KElement};
use crate::premodule::{sample, trial_rng, Failure, PremoduleInstance, RelationReport, Trial};
use crate::schemes::{
    affine_line, default_affine_plane, default_proj_plane, proj_line, punctured_line, PointId, SchemeKind,
    SchemeModel,
};

/// Planes are sampled over fields small enough to keep curve residue fields tiny.
const PLANE_FIELDS: [(u32, u32); 3] = [(2, 1), (3, 1), (2, 2)];

/// A random line or plane over the field universe.
pub fn random_scheme(rng: &mut ChaCha8Rng) -> SchemeModel {
    match rng.gen_range(0..5) {
        0 => affine_line(&sample::base_field(rng)),
        1 => proj_line(&sample::base_field(rng)),
        2 => {
            let f = sample::base_field(rng);
            let k = rng.gen_range(1..=2);
            let removed = (0..k).map(|_| sample::place(rng, &f, 2, false)).collect();
            punctured_line(&f, removed).expect("finite places over the base")
        }
        3 => default_affine_plane(&plane_field(rng)),
        _ => default_proj_plane(&plane_field(rng)),
    }
}

fn plane_field(rng: &mut ChaCha8Rng) -> FiniteField {
    let (p, m) = *PLANE_FIELDS.choose(rng).unwrap();
    make_field(p, m).expect("universe field")
}

/// A random formal unit on a plane; of degree zero on the projective plane.
fn formal_unit(rng: &mut ChaCha8Rng, x: &SchemeModel) -> FormalUnit {
    let f = x.base();
    let mut u = FormalUnit::constant(sample::nonzero(rng, f));
    let m = x.curves().len();
    let k = rng.gen_range(0..=2);
    for _ in 0..k {
        if x.is_projective() {
            let a = rng.gen_range(0..m);
            let b = rng.gen_range(0..m);
            let e = rng.gen_range(-1..=1);
            let (da, db) = (x.curves()[a].degree as i64, x.curves()[b].degree as i64);
            *u.exps.entry(a).or_insert(0) += e * db;
            *u.exps.entry(b).or_insert(0) -= e * da;
        } else {
            let j = rng.gen_range(0..m);
            *u.exps.entry(j).or_insert(0) += *[-2i64, -1, 1, 2].choose(rng).unwrap();
        }
    }
    u.exps.retain(|_, e| *e != 0);
    u
}

/// A random formal sum of symbols of degree `r` on a plane.
pub fn formal_sum(rng: &mut ChaCha8Rng, x: &SchemeModel, r: usize) -> FormalSum {
    let terms = (0..rng.gen_range(1..=2))
        .map(|_| FormalSymbol {
            coeff: *[-2i64, -1, 1, 1, 2].choose(rng).unwrap(),
            units: (0..r).map(|_| formal_unit(rng, x)).collect(),
        })
        .collect();
    FormalSum { degree: r as i64, terms }
}

/// A random class of codimension `p` on a line or plane.
pub fn sample_class(rng: &mut ChaCha8Rng, x: &SchemeModel, inst: &PremoduleInstance, p: usize) -> Result<CycleClass> {
    let f = x.base().clone();
    let internal: i64 = match (x.kind(), p) {
        (SchemeKind::Plane { .. }, 0) => rng.gen_range(1..=3),
        _ => rng.gen_range(0..=2),
    };
    let n = internal - inst.shift() + p as i64;
    let mut c = CycleClass::new(x, inst, p, n)?;
    match (x.kind(), p) {
        (SchemeKind::Line { .. }, 0) => {
            let v = sample::milnor(rng, &FieldRef::Rational(f), internal);
            c.add_k(&PointId::Generic, &inst.from_milnor(&v))?;
        }
        (SchemeKind::Line { .. }, 1) => {
            for _ in 0..rng.gen_range(1..=3) {
                let v = sample::place(rng, &f, 2, x.is_projective());
                if x.contains_place(&v) {
                    let y = sample::milnor(rng, &v.residue_ref(), internal);
                    c.add_k(&PointId::Place(v), &inst.from_milnor(&y))?;
                }
            }
        }
        (SchemeKind::Plane { .. }, 0) => c.add_formal(&PointId::Generic, &formal_sum(rng, x, internal as usize))?,
        (SchemeKind::Plane { .. }, 1) => {
            for _ in 0..rng.gen_range(1..=2) {
                let j = rng.gen_range(0..x.curves().len());
                let y = sample::milnor(rng, &FieldRef::Rational(f.clone()), internal);
                c.add_k(&PointId::Curve(j), &inst.from_milnor(&y))?;
            }
        }
        _ => {}
    }
    Ok(c)
}

fn note_class(t: &mut Trial, c: &CycleClass) {
    t.note("scheme", c.scheme.name()).note("class", c.render());
}

/// Both classes as aligned coordinate lists (zeros where absent).
fn aligned(a: &CycleClass, b: &CycleClass) -> Result<(Vec<KElement>, Vec<KElement>)> {
    let keys: BTreeSet<&PointId> = a.coords().keys().chain(b.coords().keys()).collect();
    let degree = a.coordinate_degree();
    let mut lhs = Vec::new();
    let mut rhs = Vec::new();
    for y in keys {
        let field = a.scheme.resolve(y)?.residue.expect("codimension at least one");
        let zero = KElement::zero(&field, degree, a.instance.cap());
        let get = |c: &CycleClass| c.get(y).and_then(Coord::as_k).cloned().unwrap_or_else(|| zero.clone());
        lhs.push(get(a));
        rhs.push(get(b));
    }
    Ok((lhs, rhs))
}

fn c_witness(rng: &mut ChaCha8Rng, x: &SchemeModel, inst: &PremoduleInstance) -> Result<Trial> {
    let c = sample_class(rng, x, inst, 0)?;
    let dd = differential(&differential(&c)?)?;
    let mut t = Trial::new();
    note_class(&mut t, &c);
    for (y, v) in dd.coords() {
        let v = v.as_k().expect("codimension two coordinates").clone();
        t.note(&format!("d(d(c)) at {}", x.render_point(y)), v.render());
        let zero = KElement::zero(v.field(), v.degree(), v.cap());
        t = t.sides(v, zero);
    }
    Ok(t)
}

/// (C): `d(d(c)) = 0` on a class of a random scheme.
pub fn c_trial(inst: &PremoduleInstance, rng: &mut ChaCha8Rng) -> Result<Trial> {
    let x = random_scheme(rng);
    c_witness(rng, &x, inst)
}

fn fd_witness(rng: &mut ChaCha8Rng, x: &SchemeModel, inst: &PremoduleInstance) -> Result<Trial> {
    let p = rng.gen_range(0..x.dim().max(1));
    let c = sample_class(rng, x, inst, p)?;
    let d = differential(&c)?;
    let bound = support_degree(&c);
    let mut t = Trial::new();
    note_class(&mut t, &c);
    t.note("bound", bound);
    for b in [bound, bound + 1] {
        let w = differential_window(&c, b)?;
        let (lhs, rhs) = aligned(&d, &w)?;
        t.lhs.extend(lhs);
        t.rhs.extend(rhs);
    }
    Ok(t)
}

/// (FD): the differential computed from supports agrees with the sum over
/// every point of degree up to the support bound and one beyond it.
pub fn fd_trial(inst: &PremoduleInstance, rng: &mut ChaCha8Rng) -> Result<Trial> {
    let x = random_scheme(rng);
    fd_witness(rng, &x, inst)
}

type Witness = fn(&mut ChaCha8Rng, &SchemeModel, &PremoduleInstance) -> Result<Trial>;

fn check_on(x: &SchemeModel, inst: &PremoduleInstance, id: &str, w: Witness, trials: usize, seed: u64) -> RelationReport {
    let tag = format!("{id}:{}", x.name());
    let results: Vec<Option<Failure>> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = trial_rng(seed, &tag, i);
            let (witness, lhs, rhs) = match w(&mut rng, x, inst) {
                Ok(t) if t.holds(inst) => return None,
                Ok(t) => (
                    serde_json::json!(t.witness),
                    serde_json::Value::Array(t.lhs.iter().map(KElement::to_json).collect()),
                    serde_json::Value::Array(t.rhs.iter().map(KElement::to_json).collect()),
                ),
                Err(e) => (serde_json::json!({"error": e.to_string()}), serde_json::Value::Null, serde_json::Value::Null),
            };
            Some(Failure {
                trial: i,
                witness,
                lhs,
                rhs,
            })
        })
        .collect();
    let failures: Vec<Failure> = results.into_iter().flatten().collect();
    RelationReport {
        relation: format!("{id} on {}", x.name()),
        instance: inst.name(),
        trials,
        seed,
        passed: failures.is_empty(),
        failures,
    }
}

/// (C) on a fixed scheme.
pub fn check_c(x: &SchemeModel, inst: &PremoduleInstance, trials: usize, seed: u64) -> RelationReport {
    check_on(x, inst, "C", c_witness, trials, seed)
}

/// (FD) on a fixed scheme.
pub fn check_fd(x: &SchemeModel, inst: &PremoduleInstance, trials: usize, seed: u64) -> RelationReport {
    check_on(x, inst, "FD", fd_witness, trials, seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::premodule::milnor_instance;

    #[test]
    fn d_squared_vanishes_on_planes() {
        let f3 = make_field(3, 1).unwrap();
        for x in [default_affine_plane(&f3), default_proj_plane(&f3)] {
            let r = check_c(&x, &milnor_instance(), 30, 11);
            assert!(r.passed, "{:?}", r.failures.first());
        }
    }

    #[test]
    fn supports_are_stable() {
        let f2 = make_field(2, 1).unwrap();
        for x in [affine_line(&f2), default_affine_plane(&f2)] {
            let r = check_fd(&x, &milnor_instance(), 20, 5);
            assert!(r.passed, "{:?}", r.failures.first());
        }
    }
}
