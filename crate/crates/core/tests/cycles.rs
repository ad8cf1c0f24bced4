mod common;

use common::Naive;
use cyclemod::cycles::{
    a0_membership, check_c, cohomology_window, differential, divisor_pullback, flat_pullback, pushforward_finite,
    residue_pair, Coord, CycleClass, FormalSum, FormalUnit, Morphism,
};
use cyclemod::exactfield::parse::parse_rational;
use cyclemod::exactfield::{make_field, unit_factor, FfEmbedding, FiniteField, Poly};
use cyclemod::milnor::{specialize, symbol, CoordKey, FieldRef, KElement, Place, Unit};
use cyclemod::premodule::{milnor_instance, mutant_instance, Mutant, PremoduleInstance};
use cyclemod::schemes::{
    affine_line, affine_plane, default_affine_plane, proj_line, punctured_line, spec, ClosedPoint, CurveDecl, PointId,
    SchemeModel,
};

fn field(p: u32, m: u32) -> FiniteField {
    make_field(p, m).unwrap()
}

fn rsym(f: &FiniteField, entries: &[&str]) -> KElement {
    let units: Vec<Unit> =
        entries.iter().map(|s| Unit::Rational(unit_factor(&parse_rational(s, f, "t").unwrap()).unwrap())).collect();
    symbol(&FieldRef::Rational(f.clone()), &units, 0).unwrap()
}

fn place(f: &FiniteField, c: &[u32]) -> Place {
    Place::finite(Poly::new(f.clone(), c.to_vec())).unwrap()
}

fn generic(x: &SchemeModel, inst: &PremoduleInstance, k: &KElement) -> CycleClass {
    CycleClass::new(x, inst, 0, k.degree()).unwrap().with_coord(&PointId::Generic, &Coord::K(k.clone())).unwrap()
}

fn int(f: &FiniteField, n: i64) -> KElement {
    KElement::integer(&FieldRef::Finite(f.clone()), n, 0)
}

fn k1_oracle(f: &FiniteField, value: u32) -> KElement {
    let log = Naive::of(f).log(f.generator(), value);
    KElement::from_log(&FieldRef::Finite(f.clone()), log as i64, 0)
}

fn three_lines(f: &FiniteField) -> SchemeModel {
    affine_plane(
        f,
        &[
            CurveDecl::new("x=0", "x", &["0", "t"]),
            CurveDecl::new("y=0", "y", &["t", "0"]),
            CurveDecl::new("y=x", "y - x", &["t", "t"]),
        ],
    )
    .unwrap()
}

fn origin() -> PointId {
    PointId::Closed(ClosedPoint { degree: 1, coords: vec![0, 0] })
}

#[test]
fn residue_pair_of_uniformizer_on_the_line() {
    let f = field(3, 1);
    let x = affine_line(&f);
    let v = PointId::Place(place(&f, &[0, 1]));
    let r = residue_pair(&x, &milnor_instance(), &PointId::Generic, &v, &Coord::K(rsym(&f, &["t"]))).unwrap();
    assert_eq!(r, int(&f, 1));
}

#[test]
fn residue_pair_along_a_plane_curve() {
    let f = field(3, 1);
    let x = three_lines(&f);
    // On y=0 the coordinate function x restricts to the parameter t.
    let rho = Coord::K(rsym(&f, &["t"]));
    let r = residue_pair(&x, &milnor_instance(), &PointId::Curve(1), &origin(), &rho).unwrap();
    assert_eq!(r, int(&f, 1));
    let away = PointId::Closed(ClosedPoint { degree: 1, coords: vec![1, 2] });
    assert!(residue_pair(&x, &milnor_instance(), &PointId::Curve(1), &away, &rho).unwrap().is_zero());
}

#[test]
fn divisor_of_a_rational_function() {
    let f = field(3, 1);
    let x = affine_line(&f);
    let inst = milnor_instance();
    let d = differential(&generic(&x, &inst, &rsym(&f, &["t/(t+1)"]))).unwrap();
    let oracle: Vec<(Vec<u32>, i64)> = vec![(vec![0, 1], 1), (vec![1, 1], -1)];
    let mut got: Vec<(Vec<u32>, i64)> = d
        .coords()
        .iter()
        .map(|(y, c)| match y {
            PointId::Place(v) => (v.poly().unwrap().coeffs().to_vec(), c.as_k().unwrap().get(&CoordKey::Int)),
            _ => panic!("unexpected point"),
        })
        .collect();
    got.sort();
    assert_eq!(got, oracle);
    assert!(differential(&generic(&x, &inst, &rsym(&f, &["2"]))).unwrap().is_zero());
}

#[test]
fn differential_of_x_y_on_the_plane() {
    let f = field(3, 1);
    let x = three_lines(&f);
    let inst = milnor_instance();
    let s = FormalSum::symbol(1, vec![FormalUnit::curve(0), FormalUnit::curve(1)]);
    let c = CycleClass::new(&x, &inst, 0, 2).unwrap().with_coord(&PointId::Generic, &Coord::Formal(s)).unwrap();
    let d = differential(&c).unwrap();
    // x=0 is parametrized by (0, t), y=0 by (t, 0).
    assert_eq!(d.get(&PointId::Curve(0)).and_then(Coord::as_k), Some(&rsym(&f, &["t"])));
    assert_eq!(d.get(&PointId::Curve(1)).and_then(Coord::as_k), Some(&rsym(&f, &["t"]).neg()));
    assert!(d.get(&PointId::Curve(2)).is_none());
    let dd = differential(&d).unwrap();
    assert!(dd.is_zero());
    assert!(dd.get(&origin()).is_none());
    // The two contributions at the origin are +1 and -1.
    let a = residue_pair(&x, &inst, &PointId::Curve(0), &origin(), d.get(&PointId::Curve(0)).unwrap()).unwrap();
    let b = residue_pair(&x, &inst, &PointId::Curve(1), &origin(), d.get(&PointId::Curve(1)).unwrap()).unwrap();
    assert_eq!((a.get(&CoordKey::Int), b.get(&CoordKey::Int)), (1, -1));
}

#[test]
fn closedness_on_three_lines() {
    let r = check_c(&three_lines(&field(3, 1)), &milnor_instance(), 100, 11);
    assert!(r.passed, "{:?}", r.failures.first());
    assert_eq!(r.trials, 100);
}

#[test]
fn closedness_on_the_projective_line() {
    for (p, m) in [(2, 1), (3, 1), (5, 1)] {
        let r = check_c(&proj_line(&field(p, m)), &milnor_instance(), 50, 1);
        assert!(r.passed);
    }
}

#[test]
fn closedness_catches_the_sign_mutant() {
    let inst = mutant_instance(Mutant::R3eSign);
    let mut caught = false;
    for (p, m) in [(2, 1), (3, 1), (2, 2)] {
        for x in [default_affine_plane(&field(p, m)), cyclemod::schemes::default_proj_plane(&field(p, m))] {
            let r = check_c(&x, &inst, 100, 7);
            if let Some(f) = r.failures.first() {
                caught = true;
                assert!(!f.witness.is_null());
                let again = check_c(&x, &inst, 100, 7);
                assert_eq!(again.failures, r.failures);
            }
        }
    }
    assert!(caught);
}

#[test]
fn constants_lie_in_a0_and_round_trip() {
    let inst = milnor_instance();
    for (p, m) in [(3, 1), (5, 1), (2, 2)] {
        let f = field(p, m);
        let x = affine_line(&f);
        let pt = spec(&f);
        for a in 1..f.order() {
            let c = KElement::from_log(&FieldRef::Finite(f.clone()), f.log(a).unwrap() as i64, 0);
            let pulled = flat_pullback(&Morphism::structural(&x).unwrap(), &generic(&pt, &inst, &c)).unwrap();
            let zero = Coord::K(inst.zero(&FieldRef::Rational(f.clone()), 1));
            let coord = pulled.get(&PointId::Generic).cloned().unwrap_or(zero);
            assert!(a0_membership(&x, &inst, 1, &coord).unwrap());
            let v = place(&f, &[0, 1]);
            assert_eq!(specialize(&v, coord.as_k().unwrap()).unwrap(), c);
        }
        assert!(!a0_membership(&x, &inst, 1, &Coord::K(rsym(&f, &["t"]))).unwrap());
    }
}

#[test]
fn picard_group_of_the_projective_line() {
    let f = field(3, 1);
    for d in 1..=4 {
        let g = cohomology_window(&proj_line(&f), &milnor_instance(), 1, 1, d).unwrap();
        assert_eq!(g.render(), "Z");
        assert_eq!((g.rank(), g.torsion()), (1, vec![]));
        // The distinguished map is the degree.
        for (label, image) in g.generators.iter().zip(&g.distinguished) {
            let deg = if label == "inf" { 1 } else { label.split('^').nth(1).map_or(1, |s| s[..1].parse().unwrap()) };
            assert_eq!(image, &vec![deg as i64], "{label}");
        }
    }
}

#[test]
fn affine_line_has_no_divisor_classes() {
    let g = cohomology_window(&affine_line(&field(3, 1)), &milnor_instance(), 1, 1, 2).unwrap();
    assert!(g.is_trivial());
    assert_eq!(g.render(), "0");
}

#[test]
fn cohomology_of_a_point_is_k_theory() {
    let f = field(5, 1);
    for (n, want) in [(0, "Z"), (1, "Z/4"), (2, "0")] {
        assert_eq!(cohomology_window(&spec(&f), &milnor_instance(), 0, n, 1).unwrap().render(), want);
    }
}

#[test]
fn open_restriction_drops_removed_places() {
    let f = field(3, 1);
    let inst = milnor_instance();
    let a1 = affine_line(&f);
    let u = punctured_line(&f, vec![place(&f, &[1, 1])]).unwrap();
    let c = differential(&generic(&a1, &inst, &rsym(&f, &["t/(t+1)"]))).unwrap();
    let r = flat_pullback(&Morphism::open_immersion(&u, &a1).unwrap(), &c).unwrap();
    assert_eq!(r.coords().len(), 1);
    assert!(r.get(&PointId::Place(place(&f, &[0, 1]))).is_some());
}

#[test]
fn base_change_splits_the_quadratic_place() {
    let (f2, f4) = (field(2, 1), field(2, 2));
    let inst = milnor_instance();
    let x = affine_line(&f2);
    let bc = Morphism::base_change(&x, &FfEmbedding::canonical(&f2, &f4).unwrap()).unwrap();
    let c = generic(&x, &inst, &rsym(&f2, &["t^2+t+1"]));
    let d = differential(&flat_pullback(&bc, &c).unwrap()).unwrap();
    let mut roots: Vec<u32> = d
        .coords()
        .keys()
        .map(|y| match y {
            PointId::Place(w) => {
                assert_eq!(w.degree(), 1);
                f4.neg(w.poly().unwrap().coeff(0))
            }
            _ => panic!(),
        })
        .collect();
    roots.sort();
    let n = Naive::of(&f4);
    let oracle: Vec<u32> = (0..4).filter(|&a| n.peval(&[1, 1, 1], a) == 0).collect();
    assert_eq!(roots, oracle);
}

#[test]
fn divisor_pullback_examples() {
    let inst = milnor_instance();
    let f5 = field(5, 1);
    let u = punctured_line(&f5, vec![place(&f5, &[2, 1])]).unwrap();
    let z = PointId::Place(place(&f5, &[0, 1]));
    let a = Coord::K(rsym(&f5, &["t+2"]));
    assert_eq!(divisor_pullback(&u, &z, &inst, 1, &a).unwrap(), k1_oracle(&f5, Naive::of(&f5).peval(&[2, 1], 0)));
    for c in 1..5 {
        let k = Coord::K(rsym(&f5, &[&c.to_string()]));
        assert_eq!(divisor_pullback(&u, &z, &inst, 1, &k).unwrap(), k1_oracle(&f5, c));
    }
    let f3 = field(3, 1);
    let w = punctured_line(&f3, vec![place(&f3, &[0, 1])]).unwrap();
    let z1 = PointId::Place(place(&f3, &[2, 1]));
    assert!(divisor_pullback(&w, &z1, &inst, 1, &Coord::K(rsym(&f3, &["t"]))).unwrap().is_zero());
    assert!(divisor_pullback(&affine_line(&f3), &z1, &inst, 1, &Coord::K(rsym(&f3, &["t"]))).is_err());
}

#[test]
fn structural_pushforward_multiplies_by_degree() {
    let inst = milnor_instance();
    let f = field(3, 1);
    let p1 = proj_line(&f);
    let push = Morphism::structural(&p1).unwrap();
    for pi in [vec![0, 1], vec![1, 0, 1], vec![1, 2, 0, 1]] {
        let v = place(&f, &pi);
        let rho = KElement::integer(&v.residue_ref(), 1, 0);
        let c = CycleClass::new(&p1, &inst, 1, 1).unwrap().with_coord(&PointId::Place(v), &Coord::K(rho)).unwrap();
        let out = pushforward_finite(&push, &c).unwrap();
        assert_eq!(out.get(&PointId::Generic).and_then(Coord::as_k), Some(&int(&f, pi.len() as i64 - 1)));
    }
}
