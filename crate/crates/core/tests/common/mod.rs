//! Brute-force oracles shared by the integration tests. Nothing here uses the
//! log/exp tables, factoring or residue code of the library.

#![allow(dead_code)]

use cyclemod::exactfield::FiniteField;

/// Schoolbook arithmetic in `F_p[x] / (modulus)` on the library's integer
/// encoding of elements.
#[derive(Clone, Debug)]
pub struct Naive {
    pub p: u32,
    pub m: usize,
    pub modulus: Vec<u32>,
}

impl Naive {
    pub fn of(f: &FiniteField) -> Naive {
        Naive {
            p: f.characteristic(),
            m: f.degree() as usize,
            modulus: f.modulus().to_vec(),
        }
    }

    pub fn q(&self) -> u32 {
        self.p.pow(self.m as u32)
    }

    fn digits(&self, mut x: u32) -> Vec<u32> {
        (0..self.m)
            .map(|_| {
                let d = x % self.p;
                x /= self.p;
                d
            })
            .collect()
    }

    fn encode(&self, d: &[u32]) -> u32 {
        d.iter().rev().fold(0, |acc, &c| acc * self.p + c)
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        let (x, y) = (self.digits(a), self.digits(b));
        self.encode(&x.iter().zip(&y).map(|(u, v)| (u + v) % self.p).collect::<Vec<_>>())
    }

    pub fn neg(&self, a: u32) -> u32 {
        self.encode(&self.digits(a).iter().map(|u| (self.p - u) % self.p).collect::<Vec<_>>())
    }

    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        let (x, y) = (self.digits(a), self.digits(b));
        let p = self.p as u64;
        let mut prod = vec![0u64; 2 * self.m];
        for (i, &u) in x.iter().enumerate() {
            for (j, &v) in y.iter().enumerate() {
                prod[i + j] = (prod[i + j] + u as u64 * v as u64) % p;
            }
        }
        for k in (self.m..prod.len()).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            for (i, &mc) in self.modulus.iter().enumerate() {
                let idx = k - self.m + i;
                prod[idx] = (prod[idx] + (p - c) * mc as u64) % p;
            }
        }
        self.encode(&prod[..self.m].iter().map(|&c| c as u32).collect::<Vec<_>>())
    }

    pub fn pow(&self, a: u32, e: u64) -> u32 {
        let mut acc = 1;
        for _ in 0..e {
            acc = self.mul(acc, a);
        }
        acc
    }

    pub fn inv(&self, a: u32) -> u32 {
        assert_ne!(a, 0);
        (1..self.q()).find(|&b| self.mul(a, b) == 1).unwrap()
    }

    pub fn order(&self, a: u32) -> u64 {
        let mut x = a;
        let mut k = 1;
        while x != 1 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// Exponent of `a` with respect to `g`, by walking the powers of `g`.
    pub fn log(&self, g: u32, a: u32) -> u64 {
        let mut x = 1;
        for k in 0..self.q() as u64 {
            if x == a {
                return k;
            }
            x = self.mul(x, g);
        }
        panic!("{a} is not a power of {g}")
    }

    /// Order of `K_2(F_q)`: `K_1` is cyclic on `g`, so `K_2` is cyclic on
    /// `{g, g}` with order `q - 1` cut down by every Steinberg pair
    /// `g^i + g^j = 1`.
    pub fn k2_order(&self, g: u32) -> u64 {
        let n = self.q() as u64 - 1;
        let mut acc = n;
        let mut xi = 1;
        for i in 0..n {
            let one_minus = self.sub(1, xi);
            if one_minus != 0 {
                let j = self.log(g, one_minus);
                acc = gcd(acc, (i * j) % n);
            }
            xi = self.mul(xi, g);
        }
        acc
    }

    // Polynomials over the field, low to high, trimmed.

    pub fn trim(&self, mut f: Vec<u32>) -> Vec<u32> {
        while f.last() == Some(&0) {
            f.pop();
        }
        f
    }

    pub fn pmul(&self, f: &[u32], g: &[u32]) -> Vec<u32> {
        if f.is_empty() || g.is_empty() {
            return vec![];
        }
        let mut out = vec![0; f.len() + g.len() - 1];
        for (i, &a) in f.iter().enumerate() {
            for (j, &b) in g.iter().enumerate() {
                out[i + j] = self.add(out[i + j], self.mul(a, b));
            }
        }
        self.trim(out)
    }

    pub fn pdivrem(&self, f: &[u32], d: &[u32]) -> (Vec<u32>, Vec<u32>) {
        let d = self.trim(d.to_vec());
        let mut r = self.trim(f.to_vec());
        if r.len() < d.len() {
            return (vec![], r);
        }
        let lead_inv = self.inv(*d.last().unwrap());
        let mut q = vec![0; r.len() - d.len() + 1];
        while r.len() >= d.len() {
            let shift = r.len() - d.len();
            let c = self.mul(*r.last().unwrap(), lead_inv);
            q[shift] = c;
            for (i, &b) in d.iter().enumerate() {
                r[shift + i] = self.sub(r[shift + i], self.mul(c, b));
            }
            r = self.trim(r);
        }
        (self.trim(q), r)
    }

    pub fn peval(&self, f: &[u32], x: u32) -> u32 {
        f.iter().rev().fold(0, |acc, &c| self.add(self.mul(acc, x), c))
    }

    /// Every monic polynomial of degree `d`.
    pub fn monics(&self, d: usize) -> Vec<Vec<u32>> {
        let q = self.q() as usize;
        (0..q.pow(d as u32))
            .map(|mut k| {
                let mut f: Vec<u32> = (0..d)
                    .map(|_| {
                        let c = (k % q) as u32;
                        k /= q;
                        c
                    })
                    .collect();
                f.push(1);
                f
            })
            .collect()
    }

    pub fn is_irreducible(&self, f: &[u32]) -> bool {
        let n = f.len() - 1;
        (1..=n / 2).all(|d| self.monics(d).iter().all(|g| !self.pdivrem(f, g).1.is_empty()))
    }

    /// Trial division by monic polynomials of increasing degree.
    pub fn factor(&self, f: &[u32]) -> Vec<(Vec<u32>, u32)> {
        let mut rest = self.trim(f.to_vec());
        let mut out = Vec::new();
        let mut d = 1;
        while rest.len() > 1 && d < rest.len() {
            for g in self.monics(d) {
                let mut k = 0;
                loop {
                    let (q, r) = self.pdivrem(&rest, &g);
                    if !r.is_empty() {
                        break;
                    }
                    rest = q;
                    k += 1;
                }
                if k > 0 {
                    out.push((g, k));
                }
            }
            d += 1;
        }
        if rest.len() > 1 {
            let lc = *rest.last().unwrap();
            let inv = self.inv(lc);
            out.push((rest.iter().map(|&c| self.mul(c, inv)).collect(), 1));
        }
        out
    }

    /// Order of vanishing at `t = c` and the value of `f / (t - c)^k` there.
    pub fn local(&self, f: &[u32], c: u32) -> (i64, u32) {
        let lin = vec![self.neg(c), 1];
        let mut rest = self.trim(f.to_vec());
        let mut k = 0;
        loop {
            let (q, r) = self.pdivrem(&rest, &lin);
            if !r.is_empty() {
                return (k, self.peval(&rest, c));
            }
            rest = q;
            k += 1;
        }
    }

    /// The classical tame symbol `(-1)^(ab) f^b / g^a` at `t = c` for
    /// polynomials `f`, `g` with `a`, `b` their orders of vanishing.
    pub fn tame_at(&self, f: &[u32], g: &[u32], c: u32) -> u32 {
        let (a, u) = self.local(f, c);
        let (b, w) = self.local(g, c);
        let sign = if (a * b) % 2 == 0 { 1 } else { self.neg(1) };
        let num = self.pow(u, b as u64);
        let den = self.pow(w, a as u64);
        self.mul(sign, self.mul(num, self.inv(den)))
    }
}

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}
