mod common;

use common::Naive;
use cyclemod::exactfield::parse::parse_rational;
use cyclemod::exactfield::{make_field, unit_factor, FfEmbedding, FiniteField, Poly};
use cyclemod::milnor::{cor, product, res, residue, specialize, symbol, CoordKey, FieldMap, FieldRef, KElement, Place, Unit};
use cyclemod::premodule::milnor_instance;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn field(p: u32, m: u32) -> FiniteField {
    make_field(p, m).unwrap()
}

fn rat(f: &FiniteField, s: &str) -> Unit {
    Unit::Rational(unit_factor(&parse_rational(s, f, "t").unwrap()).unwrap())
}

fn rsym(f: &FiniteField, entries: &[&str]) -> KElement {
    let units: Vec<Unit> = entries.iter().map(|s| rat(f, s)).collect();
    symbol(&FieldRef::Rational(f.clone()), &units, 0).unwrap()
}

fn place(f: &FiniteField, c: &[u32]) -> Place {
    Place::finite(Poly::new(f.clone(), c.to_vec())).unwrap()
}

fn k1(f: &FiniteField, a: u32) -> KElement {
    symbol(&FieldRef::Finite(f.clone()), &[Unit::Finite(f.clone(), a)], 0).unwrap()
}

/// `K_1` class over a finite field with the given naive value.
fn k1_oracle(f: &FiniteField, value: u32) -> KElement {
    let log = Naive::of(f).log(f.generator(), value);
    KElement::from_log(&FieldRef::Finite(f.clone()), log as i64, 0)
}

#[test]
fn steinberg_relation_vanishes() {
    assert!(rsym(&field(5, 1), &["t", "1-t"]).is_zero());
}

#[test]
fn symbol_of_a_with_itself() {
    let f5 = field(5, 1);
    let x = rsym(&f5, &["t", "t"]);
    assert_eq!(x, rsym(&f5, &["t", "-1"]));
    let t = place(&f5, &[0, 1]);
    // Classical tame symbol of {t, t} at 0 is -1; the residue is its inverse.
    let n = Naive::of(&f5);
    let classical = n.tame_at(&[0, 1], &[0, 1], 0);
    assert_eq!(residue(&t, &x).unwrap(), k1_oracle(&f5, n.inv(classical)));
}

#[test]
fn finite_fields_have_no_k2() {
    for (p, m) in [(2, 1), (3, 1), (2, 2), (5, 1), (7, 1), (2, 3), (3, 2)] {
        let f = field(p, m);
        assert_eq!(Naive::of(&f).k2_order(f.generator()), 1, "GF({})", f.order());
    }
}

#[test]
fn degree_three_symbols_vanish() {
    let x = rsym(&field(2, 1), &["t", "t+1", "t^2+t+1"]);
    assert_eq!(x.degree(), 3);
    assert!(x.is_zero());
}

#[test]
fn gamma_of_a_constant_on_t() {
    let f5 = field(5, 1);
    let inst = milnor_instance();
    let two = rsym(&f5, &["2"]);
    let x = inst.gamma(&two, &rsym(&f5, &["t"])).unwrap();
    assert_eq!(x.degree(), 2);
    assert_eq!(x.coords().len(), 1);
    let t = place(&f5, &[0, 1]);
    assert!(x.coords().contains_key(&CoordKey::Place(t.poly().unwrap().clone())));
    let n = Naive::of(&f5);
    let classical = n.tame_at(&[2], &[0, 1], 0);
    assert_eq!(classical, 2);
    assert_eq!(residue(&t, &x).unwrap(), k1_oracle(&f5, n.inv(classical)));
}

#[test]
fn gamma_on_f9_vanishes() {
    let f9 = field(3, 2);
    let g = k1(&f9, f9.generator());
    assert!(product(&g, &g).unwrap().is_zero());
    assert_eq!(Naive::of(&f9).k2_order(f9.generator()), 1);
}

#[test]
fn restriction_from_f3_to_f9() {
    let (f3, f9) = (field(3, 1), field(3, 2));
    let map = FieldMap::Finite(FfEmbedding::canonical(&f3, &f9).unwrap());
    let y = res(&map, &k1(&f3, 2)).unwrap();
    let n9 = Naive::of(&f9);
    assert_eq!(n9.log(f9.generator(), 2), 4);
    assert_eq!(y, k1_oracle(&f9, 2));
}

#[test]
fn restriction_of_integers_is_identity() {
    for (p, m) in [(2, 1), (5, 1), (3, 2)] {
        let f = field(p, m);
        let map = FieldMap::Constants(FfEmbedding::identity(&f));
        let k = KElement::integer(&FieldRef::Finite(f.clone()), 7, 0);
        assert_eq!(res(&map, &k).unwrap(), KElement::integer(&FieldRef::Rational(f), 7, 0));
    }
}

#[test]
fn restriction_splits_over_f4() {
    let (f2, f4) = (field(2, 1), field(2, 2));
    let map = FieldMap::constant_extension(FfEmbedding::canonical(&f2, &f4).unwrap());
    let y = res(&map, &rsym(&f2, &["t^2+t+1"])).unwrap();
    let mut got: Vec<(Vec<u32>, i64)> = y.to_unit().unwrap().factors().iter().map(|(p, e)| (p.coeffs().to_vec(), *e)).collect();
    got.sort();
    let n4 = Naive::of(&f4);
    let mut oracle: Vec<(Vec<u32>, i64)> = n4.factor(&[1, 1, 1]).into_iter().map(|(p, k)| (p, k as i64)).collect();
    oracle.sort();
    assert_eq!(oracle.len(), 2);
    assert!(oracle.iter().all(|(p, _)| p.len() == 2));
    assert_eq!(got, oracle);
}

#[test]
fn corestriction_examples() {
    let (f3, f9) = (field(3, 1), field(3, 2));
    let map = FieldMap::Finite(FfEmbedding::canonical(&f3, &f9).unwrap());
    let x = k1(&f3, 2);
    let back = cor(&map, &res(&map, &x).unwrap()).unwrap();
    assert_eq!(back, x.scale(2).unwrap());
    assert!(back.is_zero());
    let one = KElement::integer(&FieldRef::Finite(f9.clone()), 1, 0);
    assert_eq!(cor(&map, &one).unwrap(), KElement::integer(&FieldRef::Finite(f3), 2, 0));
}

#[test]
fn projection_formula_over_f9() {
    let (f3, f9) = (field(3, 1), field(3, 2));
    let map = FieldMap::Finite(FfEmbedding::canonical(&f3, &f9).unwrap());
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..100 {
        let (x, y) = if rng.gen_bool(0.5) {
            (KElement::integer(&FieldRef::Finite(f9.clone()), rng.gen_range(-5..=5), 0), k1(&f3, rng.gen_range(1..3)))
        } else {
            (k1(&f9, rng.gen_range(1..9)), KElement::integer(&FieldRef::Finite(f3.clone()), rng.gen_range(-5..=5), 0))
        };
        let lhs = cor(&map, &product(&x, &res(&map, &y).unwrap()).unwrap()).unwrap();
        let rhs = product(&cor(&map, &x).unwrap(), &y).unwrap();
        assert_eq!(lhs, rhs);
    }
}

#[test]
fn corestriction_on_k1_is_the_norm() {
    for ((p, a), b) in [((2, 1), 2), ((3, 1), 2), ((2, 1), 3), ((5, 1), 2)] {
        let (sub, ext) = (field(p, a), field(p, b));
        let map = FieldMap::Finite(FfEmbedding::canonical(&sub, &ext).unwrap());
        let ne = Naive::of(&ext);
        let emb = FfEmbedding::canonical(&sub, &ext).unwrap();
        for x in 1..ext.order() {
            let mut norm = 1;
            for i in 0..b {
                norm = ne.mul(norm, ne.pow(x, (sub.order() as u64).pow(i)));
            }
            let value = (1..sub.order()).find(|&c| emb.apply(c) == norm).unwrap();
            assert_eq!(cor(&map, &k1(&ext, x)).unwrap(), k1_oracle(&sub, value));
        }
    }
}

#[test]
fn residue_examples() {
    let f3 = field(3, 1);
    let t3 = place(&f3, &[0, 1]);
    assert_eq!(residue(&t3, &rsym(&f3, &["t"])).unwrap(), KElement::integer(&FieldRef::Finite(f3.clone()), 1, 0));
    assert!(residue(&t3, &rsym(&f3, &["t+1"])).unwrap().is_zero());

    let f5 = field(5, 1);
    let t5 = place(&f5, &[0, 1]);
    assert_eq!(residue(&t5, &rsym(&f5, &["t", "2"])).unwrap(), k1_oracle(&f5, 2));
    assert_eq!(residue(&t5, &rsym(&f5, &["2", "t"])).unwrap(), k1_oracle(&f5, 3));
}

#[test]
fn specialization_examples() {
    let f5 = field(5, 1);
    let t = place(&f5, &[0, 1]);
    assert_eq!(specialize(&t, &rsym(&f5, &["t+2"])).unwrap(), k1_oracle(&f5, 2));
    for c in 1..5 {
        let constant = res(&FieldMap::Constants(FfEmbedding::identity(&f5)), &k1(&f5, c)).unwrap();
        assert_eq!(specialize(&t, &constant).unwrap(), k1(&f5, c));
    }
    let zero = KElement::zero(&FieldRef::Rational(f5.clone()), 1, 0);
    assert!(specialize(&t, &zero).unwrap().is_zero());
}

fn random_poly(rng: &mut ChaCha8Rng, f: &FiniteField) -> Vec<u32> {
    loop {
        let d = rng.gen_range(0..=3);
        let c: Vec<u32> = (0..=d).map(|_| rng.gen_range(0..f.order())).collect();
        if c.last() != Some(&0) {
            return c;
        }
    }
}

#[test]
fn tame_coordinates_at_rational_places() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for (p, m) in [(2, 1), (3, 1), (5, 1), (2, 2)] {
        let f = field(p, m);
        let n = Naive::of(&f);
        for _ in 0..60 {
            let (a, b) = (random_poly(&mut rng, &f), random_poly(&mut rng, &f));
            let ua = Unit::Rational(unit_factor(&cyclemod::exactfield::RationalFunction::from_poly(Poly::new(f.clone(), a.clone()))).unwrap());
            let ub = Unit::Rational(unit_factor(&cyclemod::exactfield::RationalFunction::from_poly(Poly::new(f.clone(), b.clone()))).unwrap());
            let x = symbol(&FieldRef::Rational(f.clone()), &[ua, ub], 0).unwrap();
            for c in 0..f.order() {
                let v = place(&f, &[f.neg(c), 1]);
                let classical = n.tame_at(&a, &b, c);
                assert_eq!(residue(&v, &x).unwrap(), k1_oracle(&f, n.inv(classical)), "{a:?} {b:?} at {c}");
            }
        }
    }
}
