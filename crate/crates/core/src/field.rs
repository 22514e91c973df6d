//! Exact arithmetic in GF(q^2) = GF(p^{2a}), with GF(q) = GF(p^a) as the
//! subfield fixed by the Frobenius map x -> x^q.
//!
//! Elements are stored as a packed integer code: the polynomial
//! `c_0 + c_1 x + ... + c_{2a-1} x^{2a-1}` has code `sum c_i p^i`. Codes are the
//! canonical total order on elements used for every enumeration downstream.

use serde::{Deserialize, Serialize};
use std::fmt;

use crate::error::{Error, Result};

/// Default cap on the field order `p^{2a}`.
pub const DEFAULT_FIELD_CAP: u64 = 1 << 32;

/// Full addition/multiplication tables are cached up to this field order.
pub const TABLE_CAP: u64 = 1 << 10;

/// An element of GF(q^2), identified by its packed coefficient code.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Elem(pub u32);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone)]
struct Tables {
    add: Vec<u32>,
    mul: Vec<u32>,
    neg: Vec<u32>,
    inv: Vec<u32>,
}

/// The field GF(q^2) together with its subfield parameters.
///
/// Immutable after construction, so it can be shared freely across threads.
#[derive(Clone)]
pub struct FieldSpec {
    p: u32,
    a: u32,
    q: u64,
    q2: u64,
    /// Low coefficients `c_0..c_{2a-1}` of the monic modulus.
    modulus: Vec<u32>,
    tables: Option<Tables>,
}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldSpec")
            .field("p", &self.p)
            .field("a", &self.a)
            .field("q", &self.q)
            .field("modulus", &self.modulus)
            .finish()
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits `q` as `p^a`, failing unless `q` is a prime power.
pub fn prime_power(q: u64) -> Result<(u64, u32)> {
    if q < 2 {
        return Err(Error::NotPrimePower(q));
    }
    let mut p = 2u64;
    while p * p <= q && q % p != 0 {
        p += 1;
    }
    if q % p != 0 {
        p = q;
    }
    let mut rest = q;
    let mut a = 0;
    while rest % p == 0 {
        rest /= p;
        a += 1;
    }
    if rest != 1 {
        return Err(Error::NotPrimePower(q));
    }
    Ok((p, a))
}

// Polynomials over GF(p) as little-endian coefficient vectors.

fn poly_rem_monic(num: &[u32], div: &[u32], p: u32) -> Vec<u32> {
    // `div` is monic with the leading 1 included.
    let mut r: Vec<u64> = num.iter().map(|&c| c as u64).collect();
    let dd = div.len() - 1;
    let p64 = p as u64;
    for i in (dd..r.len()).rev() {
        let c = r[i] % p64;
        if c == 0 {
            continue;
        }
        for (j, &dj) in div.iter().enumerate() {
            let idx = i - dd + j;
            r[idx] = (r[idx] + (p64 - c) * dj as u64) % p64;
        }
    }
    r.truncate(dd);
    r.into_iter().map(|c| (c % p64) as u32).collect()
}

/// Trial division by every monic polynomial of degree `1..=deg/2`.
fn is_irreducible(low: &[u32], p: u32) -> bool {
    let n = low.len();
    let mut f: Vec<u32> = low.to_vec();
    f.push(1);
    for d in 1..=n / 2 {
        let count = (p as u64).pow(d as u32);
        let mut g = vec![0u32; d + 1];
        g[d] = 1;
        for k in 0..count {
            let mut k = k;
            for c in g.iter_mut().take(d) {
                *c = (k % p as u64) as u32;
                k /= p as u64;
            }
            if poly_rem_monic(&f, &g, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

/// Lexicographically smallest monic irreducible polynomial of degree `n`
/// over GF(p), comparing coefficient vectors from the constant term upward.
pub fn smallest_irreducible(p: u32, n: u32) -> Vec<u32> {
    let n = n as usize;
    let pp = p as u64;
    let total = pp.pow(n as u32);
    // Codes with a zero constant term are divisible by x; skip them.
    let start = if n == 1 { 0 } else { total / pp };
    for k in start..total {
        // c_0 is the most significant digit of k.
        let mut low = vec![0u32; n];
        let mut rest = k;
        for i in (0..n).rev() {
            low[i] = (rest % pp) as u32;
            rest /= pp;
        }
        if is_irreducible(&low, p) {
            return low;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

impl FieldSpec {
    /// Builds GF(p^{2a}) with the default order cap.
    pub fn new(p: u64, a: u32) -> Result<Self> {
        Self::with_cap(p, a, DEFAULT_FIELD_CAP)
    }

    /// Builds GF(q^2) for a prime power `q`.
    pub fn for_q(q: u64) -> Result<Self> {
        let (p, a) = prime_power(q)?;
        Self::new(p, a)
    }

    pub fn with_cap(p: u64, a: u32, cap: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if a == 0 {
            return Err(Error::ZeroDegree);
        }
        let degree = 2 * a;
        let q2 = p.checked_pow(degree).filter(|&v| v <= cap);
        let Some(q2) = q2 else {
            return Err(Error::CapExceeded { p, degree, cap });
        };
        let p32 = p as u32;
        let modulus = smallest_irreducible(p32, degree);
        let mut spec = FieldSpec {
            p: p32,
            a,
            q: p.pow(a),
            q2,
            modulus,
            tables: None,
        };
        if q2 <= TABLE_CAP {
            spec.tables = Some(spec.build_tables());
        }
        Ok(spec)
    }

    fn build_tables(&self) -> Tables {
        let n = self.q2 as usize;
        let mut add = vec![0u32; n * n];
        let mut mul = vec![0u32; n * n];
        let mut neg = vec![0u32; n];
        for x in 0..n {
            neg[x] = self.slow_neg(Elem(x as u32)).0;
            for y in x..n {
                let s = self.slow_add(Elem(x as u32), Elem(y as u32)).0;
                let m = self.slow_mul(Elem(x as u32), Elem(y as u32)).0;
                add[x * n + y] = s;
                add[y * n + x] = s;
                mul[x * n + y] = m;
                mul[y * n + x] = m;
            }
        }
        let mut inv = vec![0u32; n];
        for x in 1..n {
            for y in 1..n {
                if mul[x * n + y] == 1 {
                    inv[x] = y as u32;
                    break;
                }
            }
        }
        Tables { add, mul, neg, inv }
    }

    pub fn p(&self) -> u64 {
        self.p as u64
    }

    /// Degree of GF(q) over GF(p).
    pub fn a(&self) -> u32 {
        self.a
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    /// Order of the full field, `q^2`.
    pub fn q2(&self) -> u64 {
        self.q2
    }

    /// Low coefficients of the monic modulus, constant term first.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// Human-readable modulus, e.g. `x^2+x+1`.
    pub fn modulus_string(&self) -> String {
        let mut terms = vec![format!("x^{}", self.modulus.len())];
        for (i, &c) in self.modulus.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => "x".to_string(),
                _ => format!("x^{i}"),
            };
            terms.push(match (c, i) {
                (1, 0) => "1".to_string(),
                (1, _) => mono,
                (_, 0) => c.to_string(),
                _ => format!("{c}{mono}"),
            });
        }
        terms.join("+")
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        (0..self.q2 as u32).map(Elem)
    }

    /// Coefficients of `x` in the polynomial basis, constant term first.
    pub fn coeffs(&self, x: Elem) -> Vec<u32> {
        let mut out = Vec::with_capacity(2 * self.a as usize);
        let mut v = x.0 as u64;
        for _ in 0..2 * self.a {
            out.push((v % self.p as u64) as u32);
            v /= self.p as u64;
        }
        out
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<Elem> {
        if coeffs.len() > 2 * self.a as usize {
            return Err(Error::InvalidArgument(format!(
                "{} coefficients for a degree-{} extension",
                coeffs.len(),
                2 * self.a
            )));
        }
        let mut v = 0u64;
        for &c in coeffs.iter().rev() {
            if c >= self.p {
                return Err(Error::InvalidArgument(format!("coefficient {c} not below p={}", self.p)));
            }
            v = v * self.p as u64 + c as u64;
        }
        Ok(Elem(v as u32))
    }

    /// Embeds an integer of the prime subfield.
    pub fn from_int(&self, k: u64) -> Elem {
        Elem((k % self.p as u64) as u32)
    }

    fn slow_add(&self, x: Elem, y: Elem) -> Elem {
        let (cx, cy) = (self.coeffs(x), self.coeffs(y));
        let sum: Vec<u32> = cx.iter().zip(&cy).map(|(a, b)| (a + b) % self.p).collect();
        self.pack(&sum)
    }

    fn slow_neg(&self, x: Elem) -> Elem {
        let c: Vec<u32> = self.coeffs(x).iter().map(|&a| (self.p - a) % self.p).collect();
        self.pack(&c)
    }

    fn slow_mul(&self, x: Elem, y: Elem) -> Elem {
        let (cx, cy) = (self.coeffs(x), self.coeffs(y));
        let mut prod = vec![0u32; cx.len() + cy.len() - 1];
        let p = self.p as u64;
        for (i, &a) in cx.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in cy.iter().enumerate() {
                prod[i + j] = ((prod[i + j] as u64 + a as u64 * b as u64) % p) as u32;
            }
        }
        let mut div = self.modulus.clone();
        div.push(1);
        self.pack(&poly_rem_monic(&prod, &div, self.p))
    }

    fn pack(&self, coeffs: &[u32]) -> Elem {
        let mut v = 0u64;
        for &c in coeffs.iter().rev() {
            v = v * self.p as u64 + c as u64;
        }
        Elem(v as u32)
    }

    #[inline]
    pub fn add(&self, x: Elem, y: Elem) -> Elem {
        match &self.tables {
            Some(t) => Elem(t.add[x.0 as usize * self.q2 as usize + y.0 as usize]),
            None if self.p == 2 => Elem(x.0 ^ y.0),
            None => self.slow_add(x, y),
        }
    }

    #[inline]
    pub fn neg(&self, x: Elem) -> Elem {
        match &self.tables {
            Some(t) => Elem(t.neg[x.0 as usize]),
            None if self.p == 2 => x,
            None => self.slow_neg(x),
        }
    }

    #[inline]
    pub fn sub(&self, x: Elem, y: Elem) -> Elem {
        self.add(x, self.neg(y))
    }

    #[inline]
    pub fn mul(&self, x: Elem, y: Elem) -> Elem {
        match &self.tables {
            Some(t) => Elem(t.mul[x.0 as usize * self.q2 as usize + y.0 as usize]),
            None => self.slow_mul(x, y),
        }
    }

    pub fn pow(&self, x: Elem, mut e: u64) -> Elem {
        let mut base = x;
        let mut acc = Elem::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, x: Elem) -> Result<Elem> {
        if x.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(match &self.tables {
            Some(t) => Elem(t.inv[x.0 as usize]),
            None => self.pow(x, self.q2 - 2),
        })
    }

    pub fn div(&self, x: Elem, y: Elem) -> Result<Elem> {
        Ok(self.mul(x, self.inv(y)?))
    }

    /// `x^q`, computed as `a` successive p-th powers.
    pub fn frobenius_q(&self, x: Elem) -> Elem {
        (0..self.a).fold(x, |acc, _| self.pow(acc, self.p as u64))
    }

    /// `x^{q+1}`; always lands in GF(q).
    pub fn hermitian_norm(&self, x: Elem) -> Elem {
        self.pow(x, self.q + 1)
    }

    pub fn in_subfield(&self, x: Elem) -> bool {
        self.frobenius_q(x) == x
    }
}
