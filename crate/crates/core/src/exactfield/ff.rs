//! Finite fields `F_{p^m}` with deterministic models.
//!
//! Elements are encoded as integers `sum c_i p^i` over the coefficients of
//! their representative polynomial, so the integer order is the
//! representative order (highest coefficient most significant). Every field
//! carries a fixed primitive element and log/exp tables built from it.
//!
//! Generators are chosen compatibly across the subfield lattice: for every
//! proper divisor `d` of `m`, `g_m^((p^m-1)/(p^d-1))` is a conjugate-free
//! image of `g_d`, i.e. a root of the minimal polynomial of `g_d`. The
//! canonical embedding `F_{p^d} -> F_{p^m}` therefore sends `g_d` to that
//! power, and embeddings compose.

use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, Mutex};

use once_cell::sync::Lazy;

use crate::error::{Error, Result};

/// Default cap on field orders.
pub const DEFAULT_FIELD_CAP: u64 = 1 << 20;

pub struct FieldData {
    p: u32,
    m: u32,
    q: u32,
    modulus: Vec<u32>,
    generator: u32,
    exp: Vec<u32>,
    log: Vec<u32>,
}

/// A finite field handle. Cheap to clone; equality is by `(p, m)`.
#[derive(Clone)]
pub struct FiniteField(Arc<FieldData>);

static REGISTRY: Lazy<Mutex<HashMap<(u32, u32), FiniteField>>> =
    Lazy::new(|| Mutex::new(HashMap::new()));

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Distinct prime divisors, ascending.
pub fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub fn mod_pow(base: u64, mut e: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut b = (base % m) as u128;
    let mut acc: u128 = 1;
    let m = m as u128;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc as u64
}

/// Inverse of `a` modulo `m` when `gcd(a, m) = 1`.
pub fn mod_inv(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let k = r0 / r1;
        (r0, r1) = (r1, r0 - k * r1);
        (s0, s1) = (s1, s0 - k * s1);
    }
    if r0 != 1 {
        return None;
    }
    Some(s0.rem_euclid(m as i128) as u64)
}

/// Parses `q` into `(p, m)` with `q = p^m`.
pub fn prime_power(q: u64) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q % d == 0)?;
    let mut m = 0;
    let mut r = q;
    while r % p == 0 {
        r /= p;
        m += 1;
    }
    (r == 1).then_some((p as u32, m))
}

/// Builds (or fetches) `F_{p^m}` under the default size cap.
pub fn make_field(p: u32, m: u32) -> Result<FiniteField> {
    make_field_capped(p, m, DEFAULT_FIELD_CAP)
}

pub fn make_field_capped(p: u32, m: u32, cap: u64) -> Result<FiniteField> {
    if !is_prime(p as u64) {
        return Err(Error::NotPrime(p as u64));
    }
    if m == 0 {
        return Err(Error::Invalid("extension degree must be at least 1".into()));
    }
    let order = (p as u128).checked_pow(m).unwrap_or(u128::MAX);
    if order > cap as u128 || order > u32::MAX as u128 {
        return Err(Error::FieldTooLarge { order, cap });
    }
    if let Some(f) = REGISTRY.lock().unwrap().get(&(p, m)) {
        return Ok(f.clone());
    }
    let data = if m == 1 {
        build_prime(p)
    } else {
        build_extension(p, m)?
    };
    let field = FiniteField(Arc::new(data));
    let mut reg = REGISTRY.lock().unwrap();
    Ok(reg.entry((p, m)).or_insert(field).clone())
}

fn build_prime(p: u32) -> FieldData {
    let q = p;
    let generator = if p == 2 {
        1
    } else {
        let divs = prime_divisors((p - 1) as u64);
        (2..p)
            .find(|&g| divs.iter().all(|r| mod_pow(g as u64, (p as u64 - 1) / r, p as u64) != 1))
            .expect("primitive root exists")
    };
    let mut data = FieldData {
        p,
        m: 1,
        q,
        modulus: vec![0, 1],
        generator,
        exp: Vec::new(),
        log: Vec::new(),
    };
    fill_tables(&mut data, |a, b| ((a as u64 * b as u64) % p as u64) as u32);
    data
}

fn fill_tables(data: &mut FieldData, mul: impl Fn(u32, u32) -> u32) {
    let n = (data.q - 1) as usize;
    let mut exp = Vec::with_capacity(n);
    let mut log = vec![0u32; data.q as usize];
    let mut x = 1u32;
    for i in 0..n {
        exp.push(x);
        log[x as usize] = i as u32;
        x = mul(x, data.generator);
    }
    data.exp = exp;
    data.log = log;
}

// Arithmetic on digit vectors, used while the tables are not built yet.
struct RawExt {
    p: u32,
    m: usize,
    modulus: Vec<u32>,
}

impl RawExt {
    fn digits(&self, mut x: u32) -> Vec<u32> {
        let mut d = vec![0; self.m];
        for c in d.iter_mut() {
            *c = x % self.p;
            x /= self.p;
        }
        d
    }

    fn encode(&self, d: &[u32]) -> u32 {
        d.iter().rev().fold(0, |acc, &c| acc * self.p + c)
    }

    fn mul(&self, a: u32, b: u32) -> u32 {
        let (da, db) = (self.digits(a), self.digits(b));
        let p = self.p as u64;
        let mut prod = vec![0u64; 2 * self.m];
        for (i, &x) in da.iter().enumerate() {
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p;
            }
        }
        for k in (self.m..2 * self.m).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            prod[k] = 0;
            for i in 0..self.m {
                let sub = c * self.modulus[i] as u64 % p;
                prod[k - self.m + i] = (prod[k - self.m + i] + p - sub) % p;
            }
        }
        let low: Vec<u32> = prod[..self.m].iter().map(|&c| c as u32).collect();
        self.encode(&low)
    }

    fn add(&self, a: u32, b: u32) -> u32 {
        let (da, db) = (self.digits(a), self.digits(b));
        let s: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % self.p).collect();
        self.encode(&s)
    }

    fn pow(&self, a: u32, mut e: u64) -> u32 {
        let mut acc = 1;
        let mut b = a;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        acc
    }
}

fn build_extension(p: u32, m: u32) -> Result<FieldData> {
    use super::poly::Poly;
    let prime = make_field(p, 1)?;
    let q = p.pow(m);
    // Smallest monic irreducible in graded-lex order: lower coefficients read
    // as a base-p integer with c_{m-1} most significant.
    let modulus = (0..q)
        .map(|k| {
            let mut c: Vec<u32> = (0..m).map(|i| (k / p.pow(i)) % p).collect();
            c.push(1);
            c
        })
        .find(|c| Poly::new(prime.clone(), c.clone()).is_irreducible())
        .expect("irreducible polynomials exist in every degree");
    let raw = RawExt {
        p,
        m: m as usize,
        modulus: modulus.clone(),
    };
    let order = (q - 1) as u64;
    let divs = prime_divisors(order);
    // Minimal polynomials of the subfield generators, as prime-field coefficient lists.
    let mut sub_conditions = Vec::new();
    for d in 1..m {
        if m % d != 0 {
            continue;
        }
        let sub = make_field(p, d)?;
        let mp = sub.min_poly_over_prime(sub.generator());
        let n = order / (sub.order() as u64 - 1);
        sub_conditions.push((n, mp));
    }
    let generator = (1..q)
        .find(|&g| {
            divs.iter().all(|r| raw.pow(g, order / r) != 1)
                && sub_conditions.iter().all(|(n, mp)| {
                    let h = raw.pow(g, *n);
                    // Horner evaluation of the prime-field polynomial at h.
                    let v = mp.iter().rev().fold(0u32, |acc, &c| raw.add(raw.mul(acc, h), c));
                    v == 0
                })
        })
        .ok_or_else(|| Error::Invalid(format!("no compatible generator for GF({p}^{m})")))?;
    let mut data = FieldData {
        p,
        m,
        q,
        modulus,
        generator,
        exp: Vec::new(),
        log: Vec::new(),
    };
    fill_tables(&mut data, |a, b| raw.mul(a, b));
    Ok(data)
}

impl PartialEq for FiniteField {
    fn eq(&self, other: &Self) -> bool {
        self.0.p == other.0.p && self.0.m == other.0.m
    }
}
impl Eq for FiniteField {}
impl Hash for FiniteField {
    fn hash<H: Hasher>(&self, state: &mut H) {
        (self.0.p, self.0.m).hash(state);
    }
}
impl PartialOrd for FiniteField {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for FiniteField {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.0.p, self.0.m).cmp(&(other.0.p, other.0.m))
    }
}

impl fmt::Debug for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.0.q)
    }
}

impl fmt::Display for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.0.q)
    }
}

impl FiniteField {
    pub fn characteristic(&self) -> u32 {
        self.0.p
    }
    pub fn degree(&self) -> u32 {
        self.0.m
    }
    pub fn order(&self) -> u32 {
        self.0.q
    }
    /// Order of the unit group, `q - 1`.
    pub fn unit_order(&self) -> u64 {
        self.0.q as u64 - 1
    }
    /// Modulus coefficients, low to high, monic.
    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }
    pub fn generator(&self) -> u32 {
        self.0.generator
    }
    pub fn prime_field(&self) -> FiniteField {
        make_field(self.0.p, 1).expect("prime field of an existing field")
    }
    /// `F_{q^d}` where `q` is the order of this field.
    pub fn extension(&self, d: u32) -> Result<FiniteField> {
        make_field(self.0.p, self.0.m * d)
    }

    pub fn zero(&self) -> u32 {
        0
    }
    pub fn one(&self) -> u32 {
        1
    }

    /// Embeds an integer through the prime subfield.
    pub fn from_int(&self, n: i64) -> u32 {
        n.rem_euclid(self.0.p as i64) as u32
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        let p = self.0.p;
        if self.0.m == 1 {
            let s = a + b;
            return if s >= p { s - p } else { s };
        }
        if p == 2 {
            return a ^ b;
        }
        let (mut a, mut b) = (a, b);
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.0.m {
            let s = (a % p + b % p) % p;
            out += s * place;
            place *= p;
            a /= p;
            b /= p;
        }
        out
    }

    pub fn neg(&self, a: u32) -> u32 {
        let p = self.0.p;
        if p == 2 {
            return a;
        }
        let mut a = a;
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.0.m {
            let d = a % p;
            out += ((p - d) % p) * place;
            place *= p;
            a /= p;
        }
        out
    }

    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let n = self.0.q as u64 - 1;
        let e = (self.0.log[a as usize] as u64 + self.0.log[b as usize] as u64) % n;
        self.0.exp[e as usize]
    }

    pub fn inv(&self, a: u32) -> Result<u32> {
        if a == 0 {
            return Err(Error::ZeroElement);
        }
        let n = self.0.q as u64 - 1;
        let e = (n - self.0.log[a as usize] as u64) % n;
        Ok(self.0.exp[e as usize])
    }

    pub fn div(&self, a: u32, b: u32) -> Result<u32> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: u32, e: i64) -> u32 {
        if a == 0 {
            return if e == 0 { 1 } else { 0 };
        }
        let n = self.unit_order() as i128;
        let l = (self.0.log[a as usize] as i128 * e as i128).rem_euclid(n);
        self.0.exp[l as usize]
    }

    /// Discrete logarithm with respect to the fixed generator.
    pub fn log(&self, a: u32) -> Result<u64> {
        if a == 0 {
            return Err(Error::ZeroElement);
        }
        Ok(self.0.log[a as usize] as u64)
    }

    pub fn exp(&self, k: i64) -> u32 {
        let n = self.unit_order() as i64;
        self.0.exp[k.rem_euclid(n) as usize]
    }

    /// Frobenius `x -> x^(p^j)`.
    pub fn frobenius(&self, a: u32, j: u32) -> u32 {
        if a == 0 {
            return 0;
        }
        let n = self.unit_order();
        let l = self.0.log[a as usize] as u64 * mod_pow(self.0.p as u64, j as u64, n) % n;
        self.0.exp[l as usize]
    }

    /// Multiplicative order of a unit.
    pub fn element_order(&self, a: u32) -> Result<u64> {
        let l = self.log(a)?;
        let n = self.unit_order();
        Ok(n / num_integer::gcd(l, n))
    }

    /// Minimal polynomial over `F_p` of `a`, low to high (values in `0..p`).
    pub fn min_poly_over_prime(&self, a: u32) -> Vec<u32> {
        let mut conj = vec![a];
        let mut x = self.frobenius(a, 1);
        while x != a {
            conj.push(x);
            x = self.frobenius(x, 1);
        }
        let mut coeffs = vec![1u32];
        for c in conj {
            let nc = self.neg(c);
            let mut next = vec![0u32; coeffs.len() + 1];
            for (i, &k) in coeffs.iter().enumerate() {
                next[i + 1] = self.add(next[i + 1], k);
                next[i] = self.add(next[i], self.mul(k, nc));
            }
            coeffs = next;
        }
        debug_assert!(coeffs.iter().all(|&c| c < self.0.p));
        coeffs
    }

    /// Degree over `F_p` of the smallest subfield containing `a`.
    pub fn prime_degree_of(&self, a: u32) -> u32 {
        if a == 0 {
            return 1;
        }
        let mut k = 1;
        let mut x = self.frobenius(a, 1);
        while x != a {
            k += 1;
            x = self.frobenius(x, 1);
        }
        k
    }

    pub fn elem(&self, idx: u32) -> FFElem {
        FFElem {
            field: self.clone(),
            idx,
        }
    }

    /// Renders an element: integers for prime-field values, `g^k` otherwise.
    pub fn render(&self, a: u32) -> String {
        if a < self.0.p {
            a.to_string()
        } else {
            format!("g^{}", self.0.log[a as usize])
        }
    }

    /// Iterates all elements in representative order.
    pub fn elements(&self) -> impl Iterator<Item = u32> {
        0..self.0.q
    }
}

/// A field element bundled with its field.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FFElem {
    field: FiniteField,
    idx: u32,
}

impl FFElem {
    pub fn field(&self) -> &FiniteField {
        &self.field
    }
    pub fn index(&self) -> u32 {
        self.idx
    }
    pub fn is_zero(&self) -> bool {
        self.idx == 0
    }
    pub fn add(&self, o: &FFElem) -> FFElem {
        self.field.elem(self.field.add(self.idx, o.idx))
    }
    pub fn mul(&self, o: &FFElem) -> FFElem {
        self.field.elem(self.field.mul(self.idx, o.idx))
    }
    pub fn neg(&self) -> FFElem {
        self.field.elem(self.field.neg(self.idx))
    }
    pub fn inv(&self) -> Result<FFElem> {
        Ok(self.field.elem(self.field.inv(self.idx)?))
    }
    pub fn pow(&self, e: i64) -> FFElem {
        self.field.elem(self.field.pow(self.idx, e))
    }
}

impl fmt::Debug for FFElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{}", self.field.render(self.idx), self.field)
    }
}

/// The field homomorphism `F_{p^a} -> F_{p^b}`, `x -> Frob^twist(iota(x))`,
/// where `iota` is the canonical embedding. Requires `a | b`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FfEmbedding {
    src: FiniteField,
    dst: FiniteField,
    twist: u32,
}

impl fmt::Debug for FfEmbedding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}->{}[frob^{}]", self.src, self.dst, self.twist)
    }
}

impl FfEmbedding {
    pub fn new(src: &FiniteField, dst: &FiniteField, twist: u32) -> Result<Self> {
        if src.characteristic() != dst.characteristic() || dst.degree() % src.degree() != 0 {
            return Err(Error::FieldMismatch(format!("{src} does not embed in {dst}")));
        }
        Ok(FfEmbedding {
            src: src.clone(),
            dst: dst.clone(),
            twist: twist % src.degree(),
        })
    }

    pub fn canonical(src: &FiniteField, dst: &FiniteField) -> Result<Self> {
        Self::new(src, dst, 0)
    }

    pub fn identity(f: &FiniteField) -> Self {
        FfEmbedding {
            src: f.clone(),
            dst: f.clone(),
            twist: 0,
        }
    }

    pub fn src(&self) -> &FiniteField {
        &self.src
    }
    pub fn dst(&self) -> &FiniteField {
        &self.dst
    }
    pub fn twist(&self) -> u32 {
        self.twist
    }
    /// `[dst : src]`.
    pub fn degree(&self) -> u32 {
        self.dst.degree() / self.src.degree()
    }

    /// `(q_b - 1) / (q_a - 1)`.
    fn index_ratio(&self) -> u64 {
        self.dst.unit_order() / self.src.unit_order()
    }

    /// Image of a discrete logarithm.
    pub fn map_log(&self, k: u64) -> u64 {
        let n = self.dst.unit_order();
        let p = self.src.characteristic() as u64;
        ((k as u128 * self.index_ratio() as u128 % n as u128) * mod_pow(p, self.twist as u64, n) as u128
            % n as u128) as u64
    }

    pub fn apply(&self, a: u32) -> u32 {
        if a == 0 {
            return 0;
        }
        let k = self.src.log(a).expect("nonzero");
        self.dst.exp(self.map_log(k) as i64)
    }

    /// Transfer on discrete logs: the log of the norm of `dst^x` pulled back to `src`.
    pub fn norm_log(&self, k: u64) -> u64 {
        let n = self.src.unit_order();
        let p = self.src.characteristic() as u64;
        let inv = mod_inv(mod_pow(p, self.twist as u64, n), n).expect("p is a unit mod p^a - 1");
        ((k % n) as u128 * inv as u128 % n as u128) as u64
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &FfEmbedding) -> Result<FfEmbedding> {
        if self.dst != next.src {
            return Err(Error::FieldMismatch(format!("cannot compose {self:?} with {next:?}")));
        }
        FfEmbedding::new(&self.src, &next.dst, self.twist + next.twist)
    }

    /// Preimage of an element lying in the image, if any.
    pub fn preimage(&self, b: u32) -> Option<u32> {
        if b == 0 {
            return Some(0);
        }
        let k = self.dst.log(b).ok()?;
        let r = self.index_ratio();
        if k % r != 0 {
            return None;
        }
        // Solve map_log(x) = k.
        let n = self.src.unit_order();
        let p = self.src.characteristic() as u64;
        let inv = mod_inv(mod_pow(p, self.twist as u64, n), n)?;
        let x = ((k / r) as u128 * inv as u128 % n as u128) as u64;
        Some(self.src.exp(x as i64))
    }

    /// All embeddings `src -> dst` (one per twist).
    pub fn all(src: &FiniteField, dst: &FiniteField) -> Result<Vec<FfEmbedding>> {
        (0..src.degree()).map(|j| FfEmbedding::new(src, dst, j)).collect()
    }

    /// Finds the embedding sending each `constraints[i].0` to `constraints[i].1`.
    pub fn solve(src: &FiniteField, dst: &FiniteField, constraints: &[(u32, u32)]) -> Result<FfEmbedding> {
        for e in Self::all(src, dst)? {
            if constraints.iter().all(|&(a, b)| e.apply(a) == b) {
                return Ok(e);
            }
        }
        Err(Error::FieldMismatch(format!(
            "no embedding {src} -> {dst} satisfies the given images"
        )))
    }
}

/// `N_{ext/sub}(x) = x^(1 + q + ... + q^(d-1))` with the result read in `sub`
/// through the canonical embedding.
pub fn norm_ff(sub: &FiniteField, ext: &FiniteField, x: u32) -> Result<u32> {
    let emb = FfEmbedding::canonical(sub, ext)?;
    if x == 0 {
        return Ok(0);
    }
    let q = sub.order() as u64;
    let d = emb.degree();
    let mut e: u64 = 0;
    let mut qi: u64 = 1;
    for _ in 0..d {
        e += qi;
        qi *= q;
    }
    let n = ext.unit_order();
    let y = ext.pow(x, (e % n) as i64);
    emb.preimage(y)
        .ok_or_else(|| Error::Invalid("norm did not land in the subfield".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_fields() {
        let f3 = make_field(3, 1).unwrap();
        assert_eq!(f3.modulus(), &[0, 1]);
        assert_eq!(f3.generator(), 2);
        let f5 = make_field(5, 1).unwrap();
        assert_eq!(f5.generator(), 2);
        assert_eq!(f5.element_order(2).unwrap(), 4);
    }

    #[test]
    fn small_extensions() {
        let f4 = make_field(2, 2).unwrap();
        assert_eq!(f4.modulus(), &[1, 1, 1]);
        let f9 = make_field(3, 2).unwrap();
        assert_eq!(f9.modulus(), &[1, 0, 1]);
        assert_eq!(f9.element_order(f9.generator()).unwrap(), 8);
    }

    #[test]
    fn errors() {
        assert_eq!(make_field(4, 1).unwrap_err(), Error::NotPrime(4));
        assert!(matches!(make_field(2, 40), Err(Error::FieldTooLarge { .. })));
        assert!(matches!(make_field_capped(3, 3, 20), Err(Error::FieldTooLarge { .. })));
    }

    #[test]
    fn norm_examples() {
        let f3 = make_field(3, 1).unwrap();
        let f9 = make_field(3, 2).unwrap();
        assert_eq!(norm_ff(&f3, &f9, f9.generator()).unwrap(), 2);
        assert_eq!(norm_ff(&f3, &f9, 2).unwrap(), 1);
        let f2 = make_field(2, 1).unwrap();
        let f4 = make_field(2, 2).unwrap();
        for x in 1..4 {
            assert_eq!(norm_ff(&f2, &f4, x).unwrap(), 1);
        }
    }

    #[test]
    fn embeddings_are_ring_maps_and_compose() {
        for (p, a, b, c) in [(2, 1, 2, 4), (3, 1, 2, 4), (2, 2, 4, 8), (3, 1, 3, 6), (5, 1, 2, 4)] {
            let fa = make_field(p, a).unwrap();
            let fb = make_field(p, b).unwrap();
            let fc = make_field(p, c).unwrap();
            for j in 0..a {
                let e = FfEmbedding::new(&fa, &fb, j).unwrap();
                for x in fa.elements() {
                    for y in fa.elements().step_by(3) {
                        assert_eq!(e.apply(fa.add(x, y)), fb.add(e.apply(x), e.apply(y)));
                        assert_eq!(e.apply(fa.mul(x, y)), fb.mul(e.apply(x), e.apply(y)));
                    }
                }
                for k in 0..b {
                    let f = FfEmbedding::new(&fb, &fc, k).unwrap();
                    let composed = e.then(&f).unwrap();
                    for x in fa.elements() {
                        assert_eq!(composed.apply(x), f.apply(e.apply(x)));
                    }
                }
            }
        }
    }
}
