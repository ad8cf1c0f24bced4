//! Acceptance run: one PASS/FAIL line per criterion, exact comparisons only.

use std::io::Write;
use std::process::Command;
use std::time::{Duration, Instant};

use cyclemod::cycles::{
    a0_membership, check_c, check_fd, cohomology_window, differential, divisor_pullback, evaluate_unit, flat_pullback,
    reciprocity_defect, sample_class, trace, Coord, CycleClass, Morphism,
};
use cyclemod::exactfield::{make_field, FactoredUnit, FfEmbedding, FiniteField, Poly};
use cyclemod::milnor::{product, specialize, FieldRef, KElement, Place};
use cyclemod::premodule::{check_relation, milnor_instance, mutant_instance, replay, run_relation_suite, sample, Mutant, SuiteConfig};
use cyclemod::schemes::{affine_line, default_affine_plane, default_proj_plane, proj_line, punctured_line, spec, PointId};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn field(p: u32, m: u32) -> FiniteField {
    make_field(p, m).unwrap()
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn relation_suite() -> Outcome {
    let start = Instant::now();
    let reports = run_relation_suite(&milnor_instance(), &SuiteConfig::default()).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    for r in &reports {
        ensure(r.trials == 200, || format!("{} ran {} trials", r.relation, r.trials))?;
        ensure(r.passed, || format!("{} failed: {:?}", r.relation, r.failures.first()))?;
    }
    ensure(elapsed < Duration::from_secs(120), || format!("took {elapsed:?}"))?;
    Ok(format!("{} relations x 200 trials in {:.1}s", reports.len(), elapsed.as_secs_f64()))
}

fn mutation_sensitivity() -> Outcome {
    let mut notes = Vec::new();
    for m in Mutant::ALL {
        let inst = mutant_instance(m);
        let r = check_relation(&inst, m.target(), 200, 42).map_err(|e| e.to_string())?;
        let f = r.failures.first().ok_or_else(|| format!("{} survived {}", m.name(), m.target()))?;
        let again = replay(&inst, m.target(), 42, f.trial).map_err(|e| e.to_string())?;
        ensure(again.as_ref() == Some(f), || format!("{} witness {} does not replay", m.name(), f.trial))?;
        notes.push(format!("{}->{}#{}", m.name(), m.target(), f.trial));
    }
    Ok(notes.join(" "))
}

fn closedness_and_finiteness() -> Outcome {
    let inst = milnor_instance();
    let mut checked = 0;
    for (p, m) in [(2, 1), (3, 1), (2, 2), (5, 1)] {
        let f = field(p, m);
        let mut schemes = vec![affine_line(&f), proj_line(&f)];
        if f.order() <= 4 {
            schemes.push(default_affine_plane(&f));
            schemes.push(default_proj_plane(&f));
        }
        for x in schemes {
            ensure(!x.is_plane() || x.curves().len() == 6, || format!("{} declares {} curves", x.name(), x.curves().len()))?;
            for r in [check_c(&x, &inst, 100, 42), check_fd(&x, &inst, 100, 42)] {
                ensure(r.passed, || format!("{}: {:?}", r.relation, r.failures.first()))?;
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} scheme checks x 100 samples"))
}

fn chow_groups() -> Outcome {
    let inst = milnor_instance();
    for (p, m) in [(2, 1), (3, 1), (5, 1)] {
        let f = field(p, m);
        for d in 1..=4 {
            let g = cohomology_window(&proj_line(&f), &inst, 1, 1, d).map_err(|e| e.to_string())?;
            ensure(g.rank() == 1 && g.torsion().is_empty(), || format!("A1(P1) over F{} at D={d}: {}", f.order(), g.render()))?;
            ensure(g.distinguished.iter().any(|im| im == &vec![1] || im == &vec![-1]), || {
                format!("no degree-one generator at D={d}")
            })?;
        }
        let a1 = cohomology_window(&affine_line(&f), &inst, 1, 1, 2).map_err(|e| e.to_string())?;
        ensure(a1.is_trivial(), || format!("A1(A1) = {}", a1.render()))?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for i in 0..100 {
        let f = sample::base_field(&mut rng);
        let n = rng.gen_range(0..=2);
        let c = sample::milnor(&mut rng, &FieldRef::Finite(f.clone()), n);
        let x = affine_line(&f);
        let pt = CycleClass::new(&spec(&f), &inst, 0, n)
            .and_then(|k| k.with_coord(&PointId::Generic, &Coord::K(c.clone())))
            .map_err(|e| e.to_string())?;
        let pulled = flat_pullback(&Morphism::structural(&x).map_err(|e| e.to_string())?, &pt).map_err(|e| e.to_string())?;
        let coord = pulled
            .get(&PointId::Generic)
            .cloned()
            .unwrap_or_else(|| Coord::K(inst.zero(&FieldRef::Rational(f.clone()), n)));
        ensure(a0_membership(&x, &inst, n, &coord).map_err(|e| e.to_string())?, || format!("sample {i} not in A0"))?;
        let v = sample::place(&mut rng, &f, 2, false);
        let back = specialize(&v, coord.as_k().unwrap()).map_err(|e| e.to_string())?;
        let want = cyclemod::milnor::res(&cyclemod::milnor::FieldMap::Finite(v.constants_embedding()), &c)
            .map_err(|e| e.to_string())?;
        ensure(back == want, || format!("sample {i}: {} came back as {}", c.render(), back.render()))?;
    }
    Ok("A1(P1)=Z for D=1..4, A1(A1)=0, 100 round trips".into())
}

fn trace_formula() -> Outcome {
    let inst = milnor_instance();
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let mut maps = 0;
    for p in [3, 5] {
        let f = field(p, 1);
        for d in 1..=5 {
            for x in [proj_line(&f), affine_line(&f)] {
                let g = sample::poly(&mut rng, &f, d);
                let g = if g.deg() == d { g } else { Poly::new(f.clone(), [g.coeffs(), &[1]].concat()) };
                let got = trace(&Morphism::substitution(&x, &g).map_err(|e| e.to_string())?, &inst).map_err(|e| e.to_string())?;
                ensure(got == d as i64, || format!("trace of t->{} on {} is {got}", g.render("t"), x.name()))?;
                maps += 1;
            }
        }
    }
    ensure(maps == 20, || format!("{maps} maps"))?;
    Ok("20 maps".into())
}

fn weil_reciprocity() -> Outcome {
    let inst = milnor_instance();
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for p in [2, 3, 5] {
        let f = field(p, 1);
        for i in 0..500 {
            let x = sample::milnor(&mut rng, &FieldRef::Rational(f.clone()), 2);
            let defect = reciprocity_defect(&x, &inst).map_err(|e| e.to_string())?;
            ensure(defect.is_zero(), || format!("F{p} class {i} {}: defect {}", x.render(), defect.render()))?;
        }
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(30), || format!("took {elapsed:?}"))?;
    Ok(format!("3 x 500 classes in {:.2}s", elapsed.as_secs_f64()))
}

fn pullbacks() -> Outcome {
    let inst = milnor_instance();
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let mut witnesses = 0;
    while witnesses < 200 {
        let f = sample::base_field(&mut rng);
        let removed: Vec<Place> = (0..rng.gen_range(1..=2)).map(|_| sample::place(&mut rng, &f, 2, false)).collect();
        let z = sample::place(&mut rng, &f, 2, false);
        if removed.contains(&z) {
            continue;
        }
        let u = punctured_line(&f, removed.clone()).map_err(|e| e.to_string())?;
        let mut unit = || {
            let mut a = FactoredUnit::constant(&f, sample::nonzero(&mut rng, &f)).unwrap();
            for v in &removed {
                a = a.mul(&FactoredUnit::from_poly(v.poly().unwrap()).unwrap().pow(rng.gen_range(-2..=2)));
            }
            a
        };
        let (a, b) = (unit(), unit());
        let n = witnesses % 3;
        let rational = FieldRef::Rational(f.clone());
        let (class, want) = match n {
            0 => (KElement::integer(&rational, 1 + witnesses as i64 % 5, 0), KElement::integer(&z.residue_ref(), 1 + witnesses as i64 % 5, 0)),
            1 => (KElement::from_unit(&a, 0), evaluate_unit(&a, &z).unwrap()),
            _ => (
                product(&KElement::from_unit(&a, 0), &KElement::from_unit(&b, 0)).unwrap(),
                product(&evaluate_unit(&a, &z).unwrap(), &evaluate_unit(&b, &z).unwrap()).unwrap(),
            ),
        };
        let got = divisor_pullback(&u, &PointId::Place(z.clone()), &inst, n as i64, &Coord::K(class.clone()))
            .map_err(|e| e.to_string())?;
        ensure(got == want, || format!("{} at {}: {} vs {}", class.render(), z.render(), got.render(), want.render()))?;
        witnesses += 1;
    }
    for i in 0..200u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(1000 + i);
        let f = field(*[2, 3, 5].get(i as usize % 3).unwrap(), 1);
        let a1 = affine_line(&f);
        let (map, target) = match i % 3 {
            0 => {
                let v = sample::place(&mut rng, &f, 2, false);
                (Morphism::open_immersion(&punctured_line(&f, vec![v]).unwrap(), &a1).unwrap(), a1.clone())
            }
            1 => {
                let p1 = proj_line(&f);
                (Morphism::open_immersion(&a1, &p1).unwrap(), p1)
            }
            _ => {
                let ext = f.extension(2).unwrap();
                (Morphism::base_change(&a1, &FfEmbedding::canonical(&f, &ext).unwrap()).unwrap(), a1.clone())
            }
        };
        let p = rng.gen_range(0..=1);
        let c = sample_class(&mut rng, &target, &inst, p).map_err(|e| e.to_string())?;
        let lhs = differential(&flat_pullback(&map, &c).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        let rhs = flat_pullback(&map, &differential(&c).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        ensure(lhs.coords() == rhs.coords(), || format!("chain map fails on {}", c.render()))?;
    }
    Ok("200 divisor pullbacks, 200 chain-map witnesses".into())
}

const CLI_RUN: [&[&str]; 4] = [
    &["axioms", "--instance", "milnor", "--seed", "42"],
    &["cohomology", "--scheme", "P1", "--field", "GF(3)", "--p", "1", "--n", "1", "--degree-bound", "4", "--seed", "42"],
    &["trace", "--map", "t->t^3+t", "--scheme", "P1", "--field", "GF(5)", "--seed", "42"],
    &["reciprocity", "--field", "GF(5)", "--seed", "42"],
];

fn cli_run() -> Result<Vec<Vec<u8>>, String> {
    CLI_RUN
        .iter()
        .map(|args| {
            let out = Command::new(env!("CARGO_BIN_EXE_cyclemod")).args(*args).output().map_err(|e| e.to_string())?;
            ensure(out.status.success(), || format!("{args:?} exited {:?}", out.status.code()))?;
            Ok(out.stdout)
        })
        .collect()
}

fn reproducibility() -> Outcome {
    let first = cli_run()?;
    let second = cli_run()?;
    for (i, (a, b)) in first.iter().zip(&second).enumerate() {
        ensure(a == b, || format!("{} differs between runs", CLI_RUN[i][0]))?;
    }
    Ok(format!("{} commands, {} bytes", first.len(), first.iter().map(Vec::len).sum::<usize>()))
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("relation suite", relation_suite),
        ("mutation sensitivity", mutation_sensitivity),
        ("closedness and finite supports", closedness_and_finiteness),
        ("chow groups", chow_groups),
        ("trace formula", trace_formula),
        ("weil reciprocity", weil_reciprocity),
        ("pullbacks", pullbacks),
        ("reproducibility", reproducibility),
    ];
    let mut failed = Vec::new();
    for (i, (name, check)) in criteria.iter().enumerate() {
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let line = match &outcome {
            Ok(detail) => format!("criterion {}: PASS {name} ({detail})", i + 1),
            Err(why) => format!("criterion {}: FAIL {name} ({why})", i + 1),
        };
        writeln!(std::io::stdout().lock(), "{line}").unwrap();
        if outcome.is_err() {
            failed.push(i + 1);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
