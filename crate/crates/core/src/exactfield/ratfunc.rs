//! Rational functions over `F_q` and their factored multiplicative normal form.

use std::collections::BTreeMap;
use std::fmt;

use super::factor::factor_poly;
use super::ff::{FfEmbedding, FiniteField};
use super::poly::Poly;
use crate::error::{Error, Result};

/// `num / den` with `den` monic and `gcd(num, den) = 1`; zero is `0/1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    num: Poly,
    den: Poly,
}

impl RationalFunction {
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroElement);
        }
        if num.is_zero() {
            return Ok(Self::zero(num.field()));
        }
        let g = num.gcd(&den);
        let (mut n, mut d) = (num.div_exact(&g)?, den.div_exact(&g)?);
        let inv = d.field().inv(d.lc())?;
        n = n.scale(inv);
        d = d.scale(inv);
        Ok(RationalFunction { num: n, den: d })
    }

    pub fn from_poly(p: Poly) -> Self {
        let one = Poly::one(p.field());
        RationalFunction { num: p, den: one }
    }

    pub fn zero(field: &FiniteField) -> Self {
        RationalFunction {
            num: Poly::zero(field),
            den: Poly::one(field),
        }
    }

    pub fn one(field: &FiniteField) -> Self {
        Self::from_poly(Poly::one(field))
    }

    pub fn field(&self) -> &FiniteField {
        self.num.field()
    }
    pub fn num(&self) -> &Poly {
        &self.num
    }
    pub fn den(&self) -> &Poly {
        &self.den
    }
    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::new(
            self.num.mul(&o.den).add(&o.num.mul(&self.den)),
            self.den.mul(&o.den),
        )
        .expect("nonzero denominator")
    }

    pub fn neg(&self) -> Self {
        RationalFunction {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self::new(self.num.mul(&o.num), self.den.mul(&o.den)).expect("nonzero denominator")
    }

    pub fn inv(&self) -> Result<Self> {
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        Ok(self.mul(&o.inv()?))
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let k = e.unsigned_abs();
        Self::new(base.num.pow(k), base.den.pow(k))
    }

    pub fn render(&self, var: &str) -> String {
        if self.den.is_one() {
            self.num.render(var)
        } else {
            format!("({})/({})", self.num.render(var), self.den.render(var))
        }
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render("t"))
    }
}

/// `c * prod pi_i^e_i` with distinct monic irreducible `pi_i` and `e_i != 0`.
/// Factors are kept in graded-lex order.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FactoredUnit {
    field: FiniteField,
    constant: u32,
    factors: BTreeMap<Poly, i64>,
}

impl FactoredUnit {
    pub fn constant(field: &FiniteField, c: u32) -> Result<Self> {
        if c == 0 {
            return Err(Error::ZeroElement);
        }
        Ok(FactoredUnit {
            field: field.clone(),
            constant: c,
            factors: BTreeMap::new(),
        })
    }

    pub fn one(field: &FiniteField) -> Self {
        Self::constant(field, 1).expect("1 is a unit")
    }

    /// Builds from parts, normalizing: factors must be monic irreducible.
    pub fn from_parts(field: &FiniteField, constant: u32, factors: impl IntoIterator<Item = (Poly, i64)>) -> Result<Self> {
        let mut u = Self::constant(field, constant)?;
        for (p, e) in factors {
            if !p.is_monic() || p.deg() == 0 {
                return Err(Error::NotIrreducible(p.to_string()));
            }
            u.push_factor(p, e);
        }
        Ok(u)
    }

    fn push_factor(&mut self, p: Poly, e: i64) {
        if e == 0 {
            return;
        }
        let entry = self.factors.entry(p).or_insert(0);
        *entry += e;
        if *entry == 0 {
            self.factors.retain(|_, v| *v != 0);
        }
    }

    /// Factors a nonzero polynomial.
    pub fn from_poly(p: &Poly) -> Result<Self> {
        let (lc, fac) = factor_poly(p)?;
        Self::from_parts(p.field(), lc, fac.into_iter().map(|(f, e)| (f, e as i64)))
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }
    pub fn leading_constant(&self) -> u32 {
        self.constant
    }
    pub fn factors(&self) -> &BTreeMap<Poly, i64> {
        &self.factors
    }
    pub fn exponent(&self, p: &Poly) -> i64 {
        self.factors.get(p).copied().unwrap_or(0)
    }
    pub fn is_constant(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut out = self.clone();
        out.constant = self.field.mul(self.constant, o.constant);
        for (p, &e) in &o.factors {
            out.push_factor(p.clone(), e);
        }
        out
    }

    pub fn pow(&self, e: i64) -> Self {
        FactoredUnit {
            field: self.field.clone(),
            constant: self.field.pow(self.constant, e),
            factors: if e == 0 {
                BTreeMap::new()
            } else {
                self.factors.iter().map(|(p, &k)| (p.clone(), k * e)).collect()
            },
        }
    }

    pub fn inv(&self) -> Self {
        self.pow(-1)
    }

    /// Multiplies by `(factor)^e` where `factor` is any nonzero polynomial.
    pub fn mul_poly_pow(&self, p: &Poly, e: i64) -> Result<Self> {
        Ok(self.mul(&Self::from_poly(p)?.pow(e)))
    }

    pub fn expand(&self) -> RationalFunction {
        let mut num = Poly::constant(&self.field, self.constant);
        let mut den = Poly::one(&self.field);
        for (p, &e) in &self.factors {
            if e > 0 {
                num = num.mul(&p.pow(e as u64));
            } else {
                den = den.mul(&p.pow((-e) as u64));
            }
        }
        RationalFunction::new(num, den).expect("nonzero")
    }

    /// Valuation at `t = infinity`: `-(sum e_i deg pi_i)`.
    pub fn valuation_at_infinity(&self) -> i64 {
        -self.factors.iter().map(|(p, &e)| e * p.deg() as i64).sum::<i64>()
    }

    /// Re-factors after mapping coefficients through `emb` and substituting `t -> g`.
    pub fn substitute(&self, emb: &FfEmbedding, g: &Poly) -> Result<Self> {
        let mut out = Self::constant(emb.dst(), emb.apply(self.constant))?;
        for (p, &e) in &self.factors {
            let image = p.map_coeffs(emb).compose(g);
            out = out.mul(&Self::from_poly(&image)?.pow(e));
        }
        Ok(out)
    }

    pub fn render(&self, var: &str) -> String {
        let mut parts = Vec::new();
        if self.constant != 1 || self.factors.is_empty() {
            parts.push(self.field.render(self.constant));
        }
        for (p, &e) in &self.factors {
            if e == 1 {
                parts.push(format!("({})", p.render(var)));
            } else {
                parts.push(format!("({})^{}", p.render(var), e));
            }
        }
        parts.join("*")
    }
}

impl fmt::Debug for FactoredUnit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render("t"))
    }
}

/// Canonical factored form of a nonzero rational function.
pub fn unit_factor(x: &RationalFunction) -> Result<FactoredUnit> {
    if x.is_zero() {
        return Err(Error::ZeroElement);
    }
    let n = FactoredUnit::from_poly(x.num())?;
    let d = FactoredUnit::from_poly(x.den())?;
    Ok(n.mul(&d.inv()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::ff::make_field;

    #[test]
    fn factored_examples() {
        let f3 = make_field(3, 1).unwrap();
        let t = Poly::x(&f3);
        let t1 = Poly::linear(&f3, 2); // t + 1
        let x = RationalFunction::new(t.clone(), t1.clone()).unwrap();
        let u = unit_factor(&x).unwrap();
        assert_eq!(u.leading_constant(), 1);
        assert_eq!(u.factors().iter().map(|(p, e)| (p.clone(), *e)).collect::<Vec<_>>(), vec![(t.clone(), 1), (t1.clone(), -1)]);

        let y = RationalFunction::from_poly(Poly::new(f3.clone(), vec![0, 2, 2]));
        let u = unit_factor(&y).unwrap();
        assert_eq!(u.leading_constant(), 2);
        assert_eq!(u.factors().len(), 2);
        assert_eq!(u.expand(), y);

        let f5 = make_field(5, 1).unwrap();
        let c = RationalFunction::from_poly(Poly::constant(&f5, 2));
        let u = unit_factor(&c).unwrap();
        assert!(u.is_constant());
        assert_eq!(u.leading_constant(), 2);
        assert_eq!(unit_factor(&RationalFunction::zero(&f5)).unwrap_err(), Error::ZeroElement);
    }
}
