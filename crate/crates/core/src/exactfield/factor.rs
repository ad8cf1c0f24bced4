//! Univariate factorization over finite fields: squarefree decomposition,
//! distinct-degree splitting, then Cantor-Zassenhaus equal-degree splitting.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::poly::Poly;
use crate::error::{Error, Result};

/// Factors `f = lc(f) * prod pi_i^e_i` with monic irreducible `pi_i`, sorted
/// graded-lexicographically.
pub fn factor_poly(f: &Poly) -> Result<(u32, Vec<(Poly, u32)>)> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let lc = f.lc();
    let mut acc: BTreeMap<Poly, u32> = BTreeMap::new();
    if f.deg() > 0 {
        let mut rng = ChaCha8Rng::seed_from_u64(0xc0ffee ^ f.deg() as u64);
        for (part, mult) in squarefree_parts(&f.monic()) {
            for (d, chunk) in distinct_degree(&part) {
                for irr in equal_degree(&chunk, d, &mut rng) {
                    *acc.entry(irr).or_insert(0) += mult;
                }
            }
        }
    }
    Ok((lc, acc.into_iter().collect()))
}

fn pth_root(g: &Poly) -> Poly {
    let field = g.field();
    let p = field.characteristic() as usize;
    let m = field.degree();
    let coeffs: Vec<u32> = g
        .coeffs()
        .iter()
        .step_by(p)
        .map(|&c| field.frobenius(c, m - 1))
        .collect();
    Poly::new(field.clone(), coeffs)
}

fn squarefree_parts(f: &Poly) -> Vec<(Poly, u32)> {
    let mut out = Vec::new();
    if f.deg() == 0 {
        return out;
    }
    let p = f.field().characteristic();
    let d = f.derivative();
    if d.is_zero() {
        for (z, m) in squarefree_parts(&pth_root(f)) {
            out.push((z, m * p));
        }
        return out;
    }
    let mut g = f.gcd(&d);
    let mut w = f.div_exact(&g).expect("gcd divides");
    let mut i = 1;
    while !w.is_one() {
        let y = w.gcd(&g);
        let z = w.div_exact(&y).expect("gcd divides");
        if !z.is_one() {
            out.push((z, i));
        }
        i += 1;
        w = y.clone();
        g = g.div_exact(&y).expect("gcd divides");
    }
    if !g.is_one() {
        for (z, m) in squarefree_parts(&pth_root(&g)) {
            out.push((z, m * p));
        }
    }
    out
}

fn distinct_degree(f: &Poly) -> Vec<(usize, Poly)> {
    let field = f.field();
    let q = BigUint::from(field.order());
    let x = Poly::x(field);
    let mut out = Vec::new();
    let mut rest = f.clone();
    let mut h = x.clone();
    let mut d = 1;
    while rest.deg() >= 2 * d {
        h = h.pow_mod(&q, &rest);
        let g = rest.gcd(&h.sub(&x));
        if !g.is_one() {
            rest = rest.div_exact(&g).expect("gcd divides");
            h = h.rem(&rest).expect("nonzero");
            out.push((d, g));
        }
        d += 1;
    }
    if rest.deg() > 0 {
        out.push((rest.deg(), rest));
    }
    out
}

fn equal_degree(f: &Poly, d: usize, rng: &mut ChaCha8Rng) -> Vec<Poly> {
    if f.deg() == d {
        return vec![f.monic()];
    }
    let field = f.field();
    let q = field.order() as u64;
    let n = f.deg();
    loop {
        let a = Poly::new(
            field.clone(),
            (0..n).map(|_| rng.gen_range(0..q) as u32).collect(),
        );
        if a.is_constant() {
            continue;
        }
        let b = if field.characteristic() == 2 {
            // Absolute trace down to F_2 of a in F_q^d.
            let k = field.degree() as usize * d;
            let mut t = a.rem(f).expect("nonzero");
            let mut acc = t.clone();
            for _ in 1..k {
                t = t.mul_mod(&t, f);
                acc = acc.add(&t);
            }
            acc
        } else {
            let e = (BigUint::from(q).pow(d as u32) - 1u32) / 2u32;
            a.pow_mod(&e, f).sub(&Poly::one(field))
        };
        let g = f.gcd(&b);
        if g.deg() > 0 && g.deg() < n {
            let h = f.div_exact(&g).expect("gcd divides");
            let mut out = equal_degree(&g, d, rng);
            out.extend(equal_degree(&h, d, rng));
            return out;
        }
    }
}

/// Roots of `f` in its coefficient field, ascending.
pub fn roots(f: &Poly) -> Result<Vec<u32>> {
    let (_, fac) = factor_poly(f)?;
    let mut r: Vec<u32> = fac
        .iter()
        .filter(|(p, _)| p.deg() == 1)
        .map(|(p, _)| f.field().neg(p.coeff(0)))
        .collect();
    r.sort_unstable();
    Ok(r)
}
