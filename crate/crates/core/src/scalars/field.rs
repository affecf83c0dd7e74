use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported field order.
pub const MAX_ORDER: u64 = 1 << 16;

/// Fields up to this order multiply through log/antilog tables.
const TABLE_LIMIT: u32 = 1 << 12;

/// An element of F_q, encoded as the integer whose base-p digits are its
/// coordinates in the power basis of the modulus (lowest digit first).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Fq(pub u32);

impl Fq {
    pub const ZERO: Fq = Fq(0);
    pub const ONE: Fq = Fq(1);

    pub fn code(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

struct Tables {
    exp: Vec<u32>,
    log: Vec<u32>,
}

struct Inner {
    p: u32,
    m: u32,
    q: u32,
    modulus: Vec<u32>,
    tables: Option<Tables>,
}

/// Description of a finite field F_q with q = p^m. Cheap to clone.
#[derive(Clone)]
pub struct FieldDesc(Arc<Inner>);

impl PartialEq for FieldDesc {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p && self.0.m == other.0.m && self.0.modulus == other.0.modulus)
    }
}

impl Eq for FieldDesc {}

impl fmt::Debug for FieldDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.0.q)?;
        if self.0.m > 1 {
            write!(f, " mod {:?}", self.0.modulus)?;
        }
        Ok(())
    }
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits a prime power q into (p, m).
pub fn prime_power(q: u64) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while !q.is_multiple_of(p) {
        p += 1;
    }
    let mut rest = q;
    let mut m = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        m += 1;
    }
    (rest == 1).then_some((p as u32, m))
}

impl FieldDesc {
    /// The prime field F_p.
    pub fn prime(p: u32) -> Result<Self> {
        Self::new(p, 1, None)
    }

    /// F_q given by its order, using the default modulus.
    pub fn with_order(q: u64) -> Result<Self> {
        let (p, m) = prime_power(q).ok_or(Error::NotPrime(q))?;
        Self::new(p, m, None)
    }

    /// F_{p^m} with the given monic modulus (coefficients lowest first), or the
    /// lexicographically smallest monic irreducible of degree m when `None`.
    /// The modulus is ignored for m = 1.
    pub fn new(p: u32, m: u32, modulus: Option<&[u32]>) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        if m == 0 {
            return Err(Error::BadModulus("extension degree must be at least 1".into()));
        }
        let q = (p as u64).checked_pow(m).filter(|&q| q <= MAX_ORDER);
        let q = match q {
            Some(q) => q as u32,
            None => return Err(Error::FieldTooLarge((p as u64).saturating_pow(m))),
        };
        let modulus = if m == 1 {
            Vec::new()
        } else {
            match modulus {
                Some(md) => {
                    if md.len() != m as usize + 1 || md[m as usize] != 1 {
                        return Err(Error::BadModulus(format!(
                            "expected {} coefficients ending in 1, got {:?}",
                            m + 1,
                            md
                        )));
                    }
                    if md.iter().any(|&c| c >= p) {
                        return Err(Error::BadModulus(format!("coefficients must be below {p}")));
                    }
                    if !irreducible_over_prime(p, md) {
                        return Err(Error::BadModulus(format!("{md:?} is reducible over F_{p}")));
                    }
                    md.to_vec()
                }
                None => default_modulus(p, m),
            }
        };
        let mut inner = Inner { p, m, q, modulus, tables: None };
        if m > 1 && q <= TABLE_LIMIT {
            inner.tables = Some(build_tables(&inner));
        }
        Ok(FieldDesc(Arc::new(inner)))
    }

    pub fn p(&self) -> u32 {
        self.0.p
    }

    pub fn m(&self) -> u32 {
        self.0.m
    }

    pub fn q(&self) -> u32 {
        self.0.q
    }

    /// Monic modulus, lowest coefficient first; empty for prime fields.
    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    pub fn is_prime_field(&self) -> bool {
        self.0.m == 1
    }

    pub fn zero(&self) -> Fq {
        Fq::ZERO
    }

    pub fn one(&self) -> Fq {
        Fq::ONE
    }

    /// Validates an integer code.
    pub fn element(&self, code: u64) -> Result<Fq> {
        if code < self.0.q as u64 {
            Ok(Fq(code as u32))
        } else {
            Err(Error::InvalidElement { code, q: self.0.q as u64 })
        }
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> Fq {
        Fq(n.rem_euclid(self.0.p as i64) as u32)
    }

    /// All field elements in code order.
    pub fn elements(&self) -> impl Iterator<Item = Fq> {
        (0..self.0.q).map(Fq)
    }

    pub fn add(&self, a: Fq, b: Fq) -> Fq {
        let inner = &*self.0;
        if inner.m == 1 {
            let s = a.0 + b.0;
            Fq(if s >= inner.p { s - inner.p } else { s })
        } else if inner.p == 2 {
            Fq(a.0 ^ b.0)
        } else {
            let p = inner.p;
            let (mut x, mut y, mut out, mut place) = (a.0, b.0, 0, 1);
            while x > 0 || y > 0 {
                out += ((x % p + y % p) % p) * place;
                x /= p;
                y /= p;
                place *= p;
            }
            Fq(out)
        }
    }

    pub fn neg(&self, a: Fq) -> Fq {
        let inner = &*self.0;
        if inner.p == 2 {
            a
        } else if inner.m == 1 {
            Fq(if a.0 == 0 { 0 } else { inner.p - a.0 })
        } else {
            let p = inner.p;
            let (mut x, mut out, mut place) = (a.0, 0, 1);
            while x > 0 {
                out += ((p - x % p) % p) * place;
                x /= p;
                place *= p;
            }
            Fq(out)
        }
    }

    pub fn sub(&self, a: Fq, b: Fq) -> Fq {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Fq, b: Fq) -> Fq {
        if a.0 == 0 || b.0 == 0 {
            return Fq::ZERO;
        }
        let inner = &*self.0;
        if inner.m == 1 {
            return Fq(((a.0 as u64 * b.0 as u64) % inner.p as u64) as u32);
        }
        match &inner.tables {
            Some(t) => Fq(t.exp[(t.log[a.0 as usize] + t.log[b.0 as usize]) as usize]),
            None => Fq(slow_mul(inner, a.0, b.0)),
        }
    }

    pub fn inv(&self, a: Fq) -> Result<Fq> {
        if a.0 == 0 {
            return Err(Error::DivisionByZero);
        }
        let inner = &*self.0;
        if let Some(t) = &inner.tables {
            let l = t.log[a.0 as usize];
            return Ok(Fq(t.exp[((inner.q - 1 - l) % (inner.q - 1)) as usize]));
        }
        Ok(self.pow_u(a, inner.q as u64 - 2))
    }

    pub fn div(&self, a: Fq, b: Fq) -> Result<Fq> {
        Ok(self.mul(a, self.inv(b)?))
    }

    fn pow_u(&self, a: Fq, mut e: u64) -> Fq {
        let mut base = a;
        let mut acc = Fq::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// a^e for any integer e; 0^0 = 1 and negative powers of 0 fail.
    pub fn pow(&self, a: Fq, e: i64) -> Result<Fq> {
        if e >= 0 {
            let order = self.0.q as i64 - 1;
            if a.0 == 0 {
                return Ok(if e == 0 { Fq::ONE } else { Fq::ZERO });
            }
            Ok(self.pow_u(a, e.rem_euclid(order) as u64))
        } else {
            let inv = self.inv(a)?;
            Ok(self.pow_u(inv, e.unsigned_abs() % (self.0.q as u64 - 1)))
        }
    }

    /// a^(p^n), the n-th power of the absolute Frobenius.
    pub fn frobenius_p(&self, a: Fq, n: u32) -> Fq {
        let mut x = a;
        for _ in 0..(n % self.0.m) {
            x = self.pow_u(x, self.0.p as u64);
        }
        x
    }

    /// a^(q^n). This is the identity on F_q.
    pub fn frobenius(&self, a: Fq, _n: u32) -> Fq {
        a
    }

    /// Order of a nonzero element in the multiplicative group.
    pub fn order(&self, a: Fq) -> Result<u64> {
        if a.0 == 0 {
            return Err(Error::DivisionByZero);
        }
        let n = self.0.q as u64 - 1;
        let mut ord = n;
        for r in prime_factors(n) {
            while ord.is_multiple_of(r) && self.pow_u(a, ord / r) == Fq::ONE {
                ord /= r;
            }
        }
        Ok(ord)
    }

    /// Sum of products, with a single reduction for prime fields.
    pub fn dot(&self, pairs: impl Iterator<Item = (Fq, Fq)>) -> Fq {
        if self.0.m == 1 {
            let p = self.0.p as u64;
            let mut acc: u64 = 0;
            for (i, (a, b)) in pairs.enumerate() {
                acc += a.0 as u64 * b.0 as u64;
                if i & 0xffff == 0xffff {
                    acc %= p;
                }
            }
            Fq((acc % p) as u32)
        } else {
            pairs.fold(Fq::ZERO, |acc, (a, b)| self.add(acc, self.mul(a, b)))
        }
    }
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
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

fn digits(p: u32, m: u32, mut x: u32) -> Vec<u32> {
    let mut out = vec![0; m as usize];
    for d in out.iter_mut() {
        *d = x % p;
        x /= p;
    }
    out
}

fn undigits(p: u32, ds: &[u32]) -> u32 {
    ds.iter().rev().fold(0, |acc, &d| acc * p + d)
}

fn slow_mul(inner: &Inner, a: u32, b: u32) -> u32 {
    let (p, m) = (inner.p, inner.m as usize);
    let da = digits(p, inner.m, a);
    let db = digits(p, inner.m, b);
    let mut prod = vec![0u64; 2 * m - 1];
    for (i, &x) in da.iter().enumerate() {
        for (j, &y) in db.iter().enumerate() {
            prod[i + j] += x as u64 * y as u64;
        }
    }
    let p64 = p as u64;
    for c in prod.iter_mut() {
        *c %= p64;
    }
    for k in (m..2 * m - 1).rev() {
        let c = prod[k];
        if c == 0 {
            continue;
        }
        prod[k] = 0;
        for (i, &r) in inner.modulus[..m].iter().enumerate() {
            let idx = k - m + i;
            prod[idx] = (prod[idx] + (p64 - c) * r as u64) % p64;
        }
    }
    let low: Vec<u32> = prod[..m].iter().map(|&c| c as u32).collect();
    undigits(p, &low)
}

fn build_tables(inner: &Inner) -> Tables {
    let q = inner.q;
    let n = (q - 1) as u64;
    let factors = prime_factors(n);
    let pow = |mut base: u32, mut e: u64| {
        let mut acc = 1u32;
        while e > 0 {
            if e & 1 == 1 {
                acc = slow_mul(inner, acc, base);
            }
            base = slow_mul(inner, base, base);
            e >>= 1;
        }
        acc
    };
    let g = (2..q)
        .find(|&g| factors.iter().all(|&r| pow(g, n / r) != 1))
        .expect("multiplicative group of a finite field is cyclic");
    let mut exp = vec![0u32; 2 * (q as usize - 1)];
    let mut log = vec![0u32; q as usize];
    let mut x = 1u32;
    for i in 0..(q - 1) as usize {
        exp[i] = x;
        exp[i + q as usize - 1] = x;
        log[x as usize] = i as u32;
        x = slow_mul(inner, x, g);
    }
    Tables { exp, log }
}

/// Trial division over F_p by every monic polynomial of degree at most m/2.
fn irreducible_over_prime(p: u32, poly: &[u32]) -> bool {
    let m = poly.len() - 1;
    for d in 1..=m / 2 {
        let count = (p as u64).pow(d as u32);
        for k in 0..count {
            let mut div = digits(p, d as u32, k as u32);
            div.push(1);
            if poly_rem_is_zero(p, poly, &div) {
                return false;
            }
        }
    }
    true
}

fn poly_rem_is_zero(p: u32, num: &[u32], monic_div: &[u32]) -> bool {
    let mut r: Vec<u64> = num.iter().map(|&c| c as u64).collect();
    let p64 = p as u64;
    let dd = monic_div.len() - 1;
    for k in (dd..r.len()).rev() {
        let c = r[k] % p64;
        if c == 0 {
            continue;
        }
        for (i, &b) in monic_div.iter().enumerate() {
            let idx = k - dd + i;
            r[idx] = (r[idx] + (p64 - c) * b as u64) % p64;
        }
    }
    r[..dd].iter().all(|&c| c % p64 == 0)
}

/// Lexicographically smallest monic irreducible of degree m: candidates are
/// scanned in the same order as monic enumeration.
fn default_modulus(p: u32, m: u32) -> Vec<u32> {
    let count = (p as u64).pow(m);
    for k in 0..count {
        let mut cand = digits(p, m, k as u32);
        cand.push(1);
        if irreducible_over_prime(p, &cand) {
            return cand;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_moduli() {
        assert_eq!(FieldDesc::with_order(4).unwrap().modulus(), &[1, 1, 1]);
        assert_eq!(FieldDesc::with_order(9).unwrap().modulus(), &[1, 0, 1]);
        assert_eq!(FieldDesc::with_order(8).unwrap().modulus(), &[1, 1, 0, 1]);
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(FieldDesc::prime(4).unwrap_err(), Error::NotPrime(4));
        assert!(matches!(FieldDesc::new(2, 2, Some(&[1, 0, 1])), Err(Error::BadModulus(_))));
        assert!(matches!(FieldDesc::new(2, 17, None), Err(Error::FieldTooLarge(_))));
    }

    fn check_axioms(f: &FieldDesc) {
        let els: Vec<Fq> = f.elements().collect();
        for &a in &els {
            assert_eq!(f.add(a, f.neg(a)), Fq::ZERO);
            if !a.is_zero() {
                assert_eq!(f.mul(a, f.inv(a).unwrap()), Fq::ONE);
                assert_eq!(f.pow(a, f.q() as i64 - 1).unwrap(), Fq::ONE);
            }
            assert_eq!(f.pow(a, f.q() as i64).unwrap(), a);
            for &b in els.iter().step_by(3) {
                assert_eq!(f.mul(a, b), f.mul(b, a));
                for &c in els.iter().step_by(5) {
                    assert_eq!(
                        f.mul(a, f.add(b, c)),
                        f.add(f.mul(a, b), f.mul(a, c))
                    );
                }
            }
        }
    }

    #[test]
    fn axioms_small_fields() {
        for q in [2, 3, 4, 5, 8, 9, 25, 27] {
            check_axioms(&FieldDesc::with_order(q).unwrap());
        }
    }

    #[test]
    fn tables_agree_with_convolution() {
        let f = FieldDesc::with_order(81).unwrap();
        for a in f.elements() {
            for b in f.elements() {
                assert_eq!(f.mul(a, b).0, slow_mul(&f.0, a.0, b.0));
            }
        }
    }

    #[test]
    fn large_field_without_tables() {
        let f = FieldDesc::new(2, 13, None).unwrap();
        assert!(f.0.tables.is_none());
        let a = Fq(12345);
        assert_eq!(f.mul(a, f.inv(a).unwrap()), Fq::ONE);
        assert_eq!(f.order(Fq(2)).unwrap(), 8191);
    }

    #[test]
    fn generator_order() {
        let f = FieldDesc::with_order(4).unwrap();
        assert_eq!(f.order(Fq(2)).unwrap(), 3);
    }
}
