mod common;

use common::Naive;
use cyclemod::exactfield::make_field;
use cyclemod::milnor::FieldRef;
use cyclemod::schemes::{
    affine_line, affine_plane, default_affine_plane, default_proj_plane, proj_line, scheme_from_json, spec, ClosedPoint,
    CurveDecl, PointId,
};
use cyclemod::Error;
use serde_json::json;

fn labels(x: &cyclemod::schemes::SchemeModel, p: usize, d: u32) -> Vec<String> {
    x.points(p, d).unwrap().iter().map(|y| x.render_point(&y.id)).collect()
}

#[test]
fn spec_of_f3_has_one_point() {
    let f3 = make_field(3, 1).unwrap();
    let x = spec(&f3);
    let pts = x.points(0, 1).unwrap();
    assert_eq!(pts.len(), 1);
    assert_eq!(pts[0].residue, Some(FieldRef::Finite(f3)));
    assert!(x.points(1, 3).map(|v| v.is_empty()).unwrap_or(true));
}

#[test]
fn affine_line_over_f2() {
    let f2 = make_field(2, 1).unwrap();
    let x = affine_line(&f2);
    assert_eq!(x.points(0, 1).unwrap()[0].residue, Some(FieldRef::Rational(f2)));
    assert_eq!(labels(&x, 1, 1), vec!["t", "t+1"]);
}

#[test]
fn projective_line_over_f2_to_degree_two() {
    let f2 = make_field(2, 1).unwrap();
    let got = labels(&proj_line(&f2), 1, 2);
    let n = Naive::of(&f2);
    let mut oracle = 1;
    for d in 1..=2 {
        oracle += n.monics(d).iter().filter(|g| n.is_irreducible(g)).count();
    }
    assert_eq!(got.len(), oracle);
    assert_eq!(got, vec!["t", "t+1", "inf", "t^2+t+1"]);
}

#[test]
fn place_counts_match_brute_force() {
    for (p, m) in [(2, 1), (3, 1), (2, 2), (5, 1)] {
        let f = make_field(p, m).unwrap();
        let n = Naive::of(&f);
        let mut finite = 0;
        let mut last = Vec::new();
        for d in 1..=3 {
            finite += n.monics(d).iter().filter(|g| n.is_irreducible(g)).count();
            let a = labels(&affine_line(&f), 1, d as u32);
            let pr = labels(&proj_line(&f), 1, d as u32);
            assert_eq!(a.len(), finite);
            assert_eq!(pr.len(), finite + 1);
            assert!(last.iter().all(|l| a.contains(l)));
            assert_eq!(a, labels(&affine_line(&f), 1, d as u32));
            last = a;
        }
    }
}

#[test]
fn plane_with_three_lines_through_the_origin() {
    let f3 = make_field(3, 1).unwrap();
    let curves = [
        CurveDecl::new("x=0", "x", &["0", "t"]),
        CurveDecl::new("y=0", "y", &["t", "0"]),
        CurveDecl::new("y=x", "y - x", &["t", "t"]),
    ];
    let x = affine_plane(&f3, &curves).unwrap();
    let origin = PointId::Closed(ClosedPoint { degree: 1, coords: vec![0, 0] });
    for j in 0..3 {
        let r = x.resolve(&PointId::Curve(j)).unwrap();
        assert_eq!(r.codim, 1);
        assert_eq!(r.residue, Some(FieldRef::Rational(f3.clone())));
        let sp = x.specializations(&PointId::Curve(j), 1).unwrap();
        let (_, fib) = sp.iter().find(|(y, _)| *y == origin).expect("origin lies on every curve");
        assert_eq!(fib.len(), 1);
        assert_eq!(fib[0].ramification, 1);
        // Substitution oracle: the parametrization at the fiber place is the origin.
        let c = &x.curves()[j];
        let root = fib[0].place.root();
        assert!(c.param.iter().take(2).all(|p| p.eval(root) == 0));
        assert!(x.check_declared_fiber(j, &fib[0].place, &[0, 0]).unwrap());
    }
}

#[test]
fn parabola_fiber_over_the_origin() {
    let f3 = make_field(3, 1).unwrap();
    let x = default_affine_plane(&f3);
    let j = x.curves().iter().position(|c| c.id == "y=x^2").unwrap();
    let origin = PointId::Closed(ClosedPoint { degree: 1, coords: vec![0, 0] });
    let sp = x.specializations(&PointId::Curve(j), 2).unwrap();
    let (_, fib) = sp.iter().find(|(y, _)| *y == origin).unwrap();
    assert_eq!(fib.len(), 1);
    assert_eq!(fib[0].ramification, 1);
    assert_eq!(fib[0].place.poly().unwrap().coeffs(), &[0, 1]);
    assert!(x.specializations(&origin, 2).unwrap().is_empty());
}

#[test]
fn parametrizations_satisfy_their_equations() {
    for (p, m) in [(2, 1), (3, 1), (2, 2), (5, 1)] {
        let f = make_field(p, m).unwrap();
        for x in [default_affine_plane(&f), default_proj_plane(&f)] {
            assert_eq!(x.curves().len(), 6);
            for c in x.curves() {
                let param = if x.is_projective() { c.param.clone() } else { c.param[..2].to_vec() };
                assert!(c.equation.compose(&param).is_zero(), "{} on {}", c.id, x.name());
            }
        }
    }
}

#[test]
fn specialization_raises_codimension() {
    let f2 = make_field(2, 1).unwrap();
    for x in [affine_line(&f2), proj_line(&f2), default_affine_plane(&f2), default_proj_plane(&f2)] {
        for p in 0..=x.dim() {
            for y in x.points(p, 2).unwrap() {
                for (z, _) in x.specializations(&y.id, 2).unwrap() {
                    assert_eq!(x.resolve(&z).unwrap().codim, p + 1);
                }
            }
        }
    }
}

#[test]
fn non_birational_parametrization_is_rejected() {
    let f3 = make_field(3, 1).unwrap();
    let bad = [CurveDecl::new("y=x^2", "y - x^2", &["t^2", "t^4"])];
    assert!(affine_plane(&f3, &bad).is_err());
    let wrong = [CurveDecl::new("y=x", "y - x", &["t", "t+1"])];
    assert!(affine_plane(&f3, &wrong).is_err());
}

#[test]
fn scheme_files_report_the_failing_path() {
    let ok = json!({"kind": "PUNCTURED", "base": {"p": 5}, "removed": ["t+2"]});
    let x = scheme_from_json(&ok).unwrap();
    assert_eq!(labels(&x, 1, 1).len(), 4);

    let bad_place = json!({"kind": "P1", "base": {"p": 3}, "removed": ["t", "t^2"]});
    match scheme_from_json(&bad_place) {
        Err(Error::Scheme { path, .. }) => assert_eq!(path, "removed[1]"),
        other => panic!("{other:?}"),
    }
    let bad_curve = json!({"kind": "A2", "base": {"p": 3}, "curves": [{"id": "c", "description": "y - x", "parametrization": ["t"]}]});
    match scheme_from_json(&bad_curve) {
        Err(Error::Scheme { path, .. }) => assert!(path.starts_with("curves[0]"), "{path}"),
        other => panic!("{other:?}"),
    }
}
