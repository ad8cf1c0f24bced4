//! Dense univariate polynomials over a [`FiniteField`].

use std::cmp::Ordering;
use std::fmt;

use super::ff::{FfEmbedding, FiniteField};
use crate::error::{Error, Result};

/// Coefficients low to high, no trailing zeros. The zero polynomial has no
/// coefficients.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    field: FiniteField,
    coeffs: Vec<u32>,
}

impl Poly {
    pub fn new(field: FiniteField, mut coeffs: Vec<u32>) -> Poly {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Poly { field, coeffs }
    }

    pub fn zero(field: &FiniteField) -> Poly {
        Poly::new(field.clone(), vec![])
    }

    pub fn one(field: &FiniteField) -> Poly {
        Poly::new(field.clone(), vec![1])
    }

    pub fn constant(field: &FiniteField, c: u32) -> Poly {
        Poly::new(field.clone(), vec![c])
    }

    /// The variable `t`.
    pub fn x(field: &FiniteField) -> Poly {
        Poly::new(field.clone(), vec![0, 1])
    }

    /// `t - a`.
    pub fn linear(field: &FiniteField, a: u32) -> Poly {
        Poly::new(field.clone(), vec![field.neg(a), 1])
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> u32 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with `deg 0 = 0`; callers must rule out zero first.
    pub fn deg(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn lc(&self) -> u32 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn is_monic(&self) -> bool {
        self.lc() == 1
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.field.inv(self.lc()).expect("nonzero leading coefficient");
        self.scale(inv)
    }

    pub fn scale(&self, c: u32) -> Poly {
        let f = &self.field;
        Poly::new(f.clone(), self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let f = &self.field;
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly::new(f.clone(), (0..n).map(|i| f.add(self.coeff(i), o.coeff(i))).collect())
    }

    pub fn neg(&self) -> Poly {
        let f = &self.field;
        Poly::new(f.clone(), self.coeffs.iter().map(|&a| f.neg(a)).collect())
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero(&self.field);
        }
        let f = &self.field;
        let mut out = vec![0u32; self.coeffs.len() + o.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.coeffs.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        Poly::new(f.clone(), out)
    }

    pub fn pow(&self, mut e: u64) -> Poly {
        let mut acc = Poly::one(&self.field);
        let mut b = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&b);
            }
            b = b.mul(&b);
            e >>= 1;
        }
        acc
    }

    pub fn div_rem(&self, d: &Poly) -> Result<(Poly, Poly)> {
        if d.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let f = &self.field;
        let dd = d.deg();
        let inv = f.inv(d.lc())?;
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return Ok((Poly::zero(f), self.clone()));
        }
        let mut q = vec![0u32; r.len() - dd];
        for k in (dd..r.len()).rev() {
            let c = r[k];
            if c == 0 {
                continue;
            }
            let factor = f.mul(c, inv);
            q[k - dd] = factor;
            for (i, &b) in d.coeffs.iter().enumerate() {
                r[k - dd + i] = f.sub(r[k - dd + i], f.mul(factor, b));
            }
        }
        r.truncate(dd);
        Ok((Poly::new(f.clone(), q), Poly::new(f.clone(), r)))
    }

    pub fn rem(&self, d: &Poly) -> Result<Poly> {
        Ok(self.div_rem(d)?.1)
    }

    /// Exact division; errors when `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly) -> Result<Poly> {
        let (q, r) = self.div_rem(d)?;
        if !r.is_zero() {
            return Err(Error::Invalid("inexact polynomial division".into()));
        }
        Ok(q)
    }

    /// Monic gcd (zero when both are zero).
    pub fn gcd(&self, o: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn mul_mod(&self, o: &Poly, m: &Poly) -> Poly {
        self.mul(o).rem(m).expect("nonzero modulus")
    }

    pub fn pow_mod(&self, e: &num_bigint::BigUint, m: &Poly) -> Poly {
        let mut acc = Poly::one(&self.field).rem(m).expect("nonzero modulus");
        let base = self.rem(m).expect("nonzero modulus");
        for i in (0..e.bits()).rev() {
            acc = acc.mul_mod(&acc, m);
            if e.bit(i) {
                acc = acc.mul_mod(&base, m);
            }
        }
        acc
    }

    pub fn derivative(&self) -> Poly {
        let f = &self.field;
        Poly::new(
            f.clone(),
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| f.mul(f.from_int(i as i64), c))
                .collect(),
        )
    }

    pub fn eval(&self, x: u32) -> u32 {
        let f = &self.field;
        self.coeffs.iter().rev().fold(0, |acc, &c| f.add(f.mul(acc, x), c))
    }

    /// Evaluates at an element of a larger field, mapping coefficients by `emb`.
    pub fn eval_in(&self, emb: &FfEmbedding, x: u32) -> u32 {
        let g = emb.dst();
        self.coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| g.add(g.mul(acc, x), emb.apply(c)))
    }

    /// `self(g(t))`.
    pub fn compose(&self, g: &Poly) -> Poly {
        let mut acc = Poly::zero(&g.field);
        for &c in self.coeffs.iter().rev() {
            acc = acc.mul(g).add(&Poly::constant(&g.field, c));
        }
        acc
    }

    /// Applies a field embedding to the coefficients.
    pub fn map_coeffs(&self, emb: &FfEmbedding) -> Poly {
        Poly::new(emb.dst().clone(), self.coeffs.iter().map(|&c| emb.apply(c)).collect())
    }

    /// Pulls coefficients back along `emb`; `None` if some coefficient is outside the image.
    pub fn pull_coeffs(&self, emb: &FfEmbedding) -> Option<Poly> {
        let c: Option<Vec<u32>> = self.coeffs.iter().map(|&c| emb.preimage(c)).collect();
        Some(Poly::new(emb.src().clone(), c?))
    }

    /// Applies Frobenius `x -> x^(p^j)` to every coefficient.
    pub fn frobenius(&self, j: u32) -> Poly {
        let f = &self.field;
        Poly::new(f.clone(), self.coeffs.iter().map(|&c| f.frobenius(c, j)).collect())
    }

    /// Reversal `t^deg f(1/t)`.
    pub fn reversed(&self) -> Poly {
        let mut c = self.coeffs.clone();
        c.reverse();
        Poly::new(self.field.clone(), c)
    }

    /// Multiplicity of `p` as a factor (p nonconstant).
    pub fn valuation(&self, p: &Poly) -> u32 {
        if self.is_zero() {
            return u32::MAX;
        }
        let mut v = 0;
        let mut cur = self.clone();
        loop {
            let (q, r) = cur.div_rem(p).expect("nonzero");
            if !r.is_zero() {
                return v;
            }
            v += 1;
            cur = q;
        }
    }

    /// Rabin irreducibility test.
    pub fn is_irreducible(&self) -> bool {
        let n = match self.degree() {
            None | Some(0) => return false,
            Some(1) => return true,
            Some(n) => n as u64,
        };
        let f = self.monic();
        let q = num_bigint::BigUint::from(self.field.order());
        let x = Poly::x(&self.field);
        let frob = |k: u64| x.pow_mod(&q.pow(k as u32), &f);
        if frob(n).sub(&x).rem(&f).map(|r| !r.is_zero()).unwrap_or(true) {
            return false;
        }
        for r in super::ff::prime_divisors(n) {
            let h = frob(n / r).sub(&x);
            if !f.gcd(&h).is_one() {
                return false;
            }
        }
        true
    }

    /// Renders with the given variable name, e.g. `t^2+2*t+1`.
    pub fn render(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let cs = self.field.render(c);
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            parts.push(match (i, c) {
                (0, _) => cs,
                (_, 1) => mono,
                _ => format!("{cs}*{mono}"),
            });
        }
        parts.join("+")
    }
}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Graded-lexicographic: field, then degree, then coefficients from the top.
impl Ord for Poly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.field
            .cmp(&other.field)
            .then(self.coeffs.len().cmp(&other.coeffs.len()))
            .then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render("t"))
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render("t"))
    }
}

/// All monic polynomials of exact degree `d`, in graded-lex order.
pub fn monic_of_degree(field: &FiniteField, d: usize) -> impl Iterator<Item = Poly> + '_ {
    let q = field.order() as u64;
    let count = q.pow(d as u32);
    (0..count).map(move |k| {
        let mut c: Vec<u32> = (0..d).map(|i| ((k / q.pow(i as u32)) % q) as u32).collect();
        c.push(1);
        Poly::new(field.clone(), c)
    })
}

/// Monic irreducibles of degree `d`, graded-lex order.
pub fn irreducibles_of_degree(field: &FiniteField, d: usize) -> Vec<Poly> {
    monic_of_degree(field, d).filter(|p| p.is_irreducible()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::ff::make_field;

    #[test]
    fn division_identity() {
        let f = make_field(5, 1).unwrap();
        let a = Poly::new(f.clone(), vec![1, 2, 3, 4, 1]);
        let b = Poly::new(f.clone(), vec![3, 0, 2]);
        let (q, r) = a.div_rem(&b).unwrap();
        assert_eq!(q.mul(&b).add(&r), a);
        assert!(r.deg() < b.deg());
    }

    #[test]
    fn irreducible_counts() {
        // Number of monic irreducibles of degree d over F_q (necklace formula).
        let f2 = make_field(2, 1).unwrap();
        assert_eq!(irreducibles_of_degree(&f2, 2).len(), 1);
        assert_eq!(irreducibles_of_degree(&f2, 3).len(), 2);
        assert_eq!(irreducibles_of_degree(&f2, 4).len(), 3);
        let f3 = make_field(3, 1).unwrap();
        assert_eq!(irreducibles_of_degree(&f3, 2).len(), 3);
        let f4 = make_field(2, 2).unwrap();
        assert_eq!(irreducibles_of_degree(&f4, 2).len(), 6);
    }

    #[test]
    fn graded_lex_order() {
        let f3 = make_field(3, 1).unwrap();
        let a = Poly::new(f3.clone(), vec![1, 0, 1]);
        let b = Poly::new(f3.clone(), vec![2, 1, 1]);
        let c = Poly::new(f3.clone(), vec![0, 1]);
        assert!(c < a && a < b);
        assert_eq!(a.render("t"), "t^2+1");
    }
}
