use std::fmt;

use crate::error::{Error, Result};
use crate::scalars::field::{FieldDesc, Fq};

/// A polynomial in theta over F_q, coefficients lowest degree first, trimmed.
#[derive(Clone, PartialEq, Eq)]
pub struct PolyTheta {
    field: FieldDesc,
    coeffs: Vec<Fq>,
}

impl fmt::Debug for PolyTheta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for PolyTheta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match (k, c.0) {
                (0, v) => write!(f, "{v}")?,
                (1, 1) => write!(f, "theta")?,
                (1, v) => write!(f, "{v}*theta")?,
                (k, 1) => write!(f, "theta^{k}")?,
                (k, v) => write!(f, "{v}*theta^{k}")?,
            }
        }
        Ok(())
    }
}

impl PolyTheta {
    pub fn new(field: &FieldDesc, mut coeffs: Vec<Fq>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        PolyTheta { field: field.clone(), coeffs }
    }

    /// Builds from integer codes, validating each.
    pub fn from_codes(field: &FieldDesc, codes: &[u64]) -> Result<Self> {
        let cs = codes.iter().map(|&c| field.element(c)).collect::<Result<Vec<_>>>()?;
        Ok(Self::new(field, cs))
    }

    pub fn zero(field: &FieldDesc) -> Self {
        Self::new(field, Vec::new())
    }

    pub fn one(field: &FieldDesc) -> Self {
        Self::constant(field, Fq::ONE)
    }

    pub fn constant(field: &FieldDesc, c: Fq) -> Self {
        Self::new(field, vec![c])
    }

    pub fn theta(field: &FieldDesc) -> Self {
        Self::monomial(field, Fq::ONE, 1)
    }

    pub fn monomial(field: &FieldDesc, c: Fq, k: usize) -> Self {
        let mut cs = vec![Fq::ZERO; k + 1];
        cs[k] = c;
        Self::new(field, cs)
    }

    pub fn field(&self) -> &FieldDesc {
        &self.field
    }

    pub fn coeffs(&self) -> &[Fq] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Fq {
        self.coeffs.get(k).copied().unwrap_or(Fq::ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [Fq::ONE]
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<Fq> {
        self.coeffs.last().copied()
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == Some(Fq::ONE)
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let f = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let cs = (0..n).map(|k| f.add(self.coeff(k), other.coeff(k))).collect();
        Ok(Self::new(f, cs))
    }

    pub fn neg(&self) -> Self {
        let f = &self.field;
        Self::new(f, self.coeffs.iter().map(|&c| f.neg(c)).collect())
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: Fq) -> Self {
        let f = &self.field;
        Self::new(f, self.coeffs.iter().map(|&x| f.mul(x, c)).collect())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(&self.field));
        }
        let f = &self.field;
        let n = self.coeffs.len() + other.coeffs.len() - 1;
        let cs = (0..n)
            .map(|k| {
                let lo = k.saturating_sub(other.coeffs.len() - 1);
                let hi = k.min(self.coeffs.len() - 1);
                f.dot((lo..=hi).map(|i| (self.coeffs[i], other.coeffs[k - i])))
            })
            .collect();
        Ok(Self::new(f, cs))
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(&self.field);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).expect("same field");
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base).expect("same field");
            }
        }
        acc
    }

    /// Euclidean division.
    pub fn divrem(&self, divisor: &Self) -> Result<(Self, Self)> {
        self.check(divisor)?;
        let f = &self.field;
        let dd = divisor.degree().ok_or(Error::DivisionByZero)?;
        let lead_inv = f.inv(divisor.coeffs[dd])?;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Self::zero(f), self.clone()));
        }
        let mut quot = vec![Fq::ZERO; rem.len() - dd];
        for k in (dd..rem.len()).rev() {
            let c = f.mul(rem[k], lead_inv);
            if c.is_zero() {
                continue;
            }
            quot[k - dd] = c;
            for (i, &b) in divisor.coeffs.iter().enumerate() {
                let idx = k - dd + i;
                rem[idx] = f.sub(rem[idx], f.mul(c, b));
            }
        }
        rem.truncate(dd);
        Ok((Self::new(f, quot), Self::new(f, rem)))
    }

    /// Exact division; fails if the remainder is nonzero.
    pub fn div_exact(&self, divisor: &Self) -> Result<Self> {
        let (q, r) = self.divrem(divisor)?;
        if r.is_zero() {
            Ok(q)
        } else {
            Err(Error::InvalidArgument(format!("{divisor} does not divide {self}")))
        }
    }

    /// Monic associate; zero stays zero.
    pub fn monic(&self) -> Self {
        match self.leading() {
            Some(c) => self.scale(self.field.inv(c).expect("nonzero leading coefficient")),
            None => self.clone(),
        }
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.divrem(&b)?.1;
            a = b;
            b = r;
        }
        Ok(a.monic())
    }

    pub fn eval(&self, x: Fq) -> Fq {
        let f = &self.field;
        self.coeffs.iter().rev().fold(Fq::ZERO, |acc, &c| f.add(f.mul(acc, x), c))
    }

    /// Raises every coefficient to the power q^n. On F_q this is the identity.
    pub fn eval_frobenius_power(&self, n: u32) -> Self {
        let f = &self.field;
        Self::new(f, self.coeffs.iter().map(|&c| f.frobenius(c, n)).collect())
    }

    /// Substitutes theta -> theta^k.
    pub fn substitute_power(&self, k: usize) -> Self {
        if self.coeffs.is_empty() || k == 1 {
            return self.clone();
        }
        let mut cs = vec![Fq::ZERO; (self.coeffs.len() - 1) * k + 1];
        for (i, &c) in self.coeffs.iter().enumerate() {
            cs[i * k] = c;
        }
        Self::new(&self.field, cs)
    }

    /// The twist f(theta^(q^n)).
    pub fn twist(&self, n: u32) -> Result<Self> {
        let qn = (self.field.q() as usize)
            .checked_pow(n)
            .ok_or_else(|| Error::Unsupported("twist exponent too large".into()))?;
        Ok(self.eval_frobenius_power(n).substitute_power(qn))
    }

    /// Inverse twist, when every exponent is divisible by q^n.
    pub fn untwist(&self, n: u32) -> Option<Self> {
        let qn = (self.field.q() as usize).checked_pow(n)?;
        if self.coeffs.iter().enumerate().any(|(i, c)| !c.is_zero() && i % qn != 0) {
            return None;
        }
        let cs = self.coeffs.iter().step_by(qn).copied().collect();
        Some(Self::new(&self.field, cs))
    }
}

/// The monic polynomial of degree d whose lower coefficients are the base-q
/// digits of `index` (lowest digit = constant term).
pub fn monic_from_index(field: &FieldDesc, d: usize, mut index: u64) -> PolyTheta {
    let q = field.q() as u64;
    let mut cs = Vec::with_capacity(d + 1);
    for _ in 0..d {
        cs.push(Fq((index % q) as u32));
        index /= q;
    }
    cs.push(Fq::ONE);
    PolyTheta::new(field, cs)
}

/// Number of monic polynomials of degree d, if it fits in a u64.
pub fn monic_count(field: &FieldDesc, d: usize) -> Option<u64> {
    (field.q() as u64).checked_pow(d as u32)
}

/// All monic polynomials of degree d, in lexicographic order of their
/// coefficient tuples read from the top.
pub fn enumerate_monics(field: &FieldDesc, d: usize) -> Result<impl Iterator<Item = PolyTheta> + '_> {
    let count = monic_count(field, d)
        .ok_or(Error::BudgetExceeded { required: u128::MAX, budget: u64::MAX })?;
    Ok((0..count).map(move |k| monic_from_index(field, d, k)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(q: u64) -> FieldDesc {
        FieldDesc::with_order(q).unwrap()
    }

    #[test]
    fn enumeration_order() {
        let f2 = f(2);
        let got: Vec<String> = enumerate_monics(&f2, 2).unwrap().map(|p| p.to_string()).collect();
        assert_eq!(got, ["theta^2", "theta^2 + 1", "theta^2 + theta", "theta^2 + theta + 1"]);
        assert_eq!(enumerate_monics(&f(3), 3).unwrap().count(), 27);
        assert_eq!(enumerate_monics(&f2, 0).unwrap().map(|p| p.is_one()).collect::<Vec<_>>(), [true]);
    }

    #[test]
    fn division_and_gcd() {
        let f3 = f(3);
        let a = PolyTheta::from_codes(&f3, &[1, 0, 1]).unwrap();
        let b = PolyTheta::from_codes(&f3, &[2, 1]).unwrap();
        let prod = a.mul(&b).unwrap();
        assert_eq!(prod.div_exact(&b).unwrap(), a);
        let (q, r) = prod.add(&PolyTheta::one(&f3)).unwrap().divrem(&a).unwrap();
        assert_eq!(q, b);
        assert!(r.is_one());
        assert_eq!(prod.gcd(&a.mul(&a).unwrap()).unwrap(), a);
        assert!(a.divrem(&PolyTheta::zero(&f3)).is_err());
    }

    #[test]
    fn twist_roundtrip() {
        let f2 = f(2);
        let a = PolyTheta::from_codes(&f2, &[1, 1, 0, 1]).unwrap();
        let t = a.twist(2).unwrap();
        assert_eq!(t.degree(), Some(12));
        assert_eq!(t.untwist(2).unwrap(), a);
        assert!(a.untwist(1).is_none());
    }

    #[test]
    fn mismatched_fields() {
        let a = PolyTheta::one(&f(2));
        let b = PolyTheta::one(&f(3));
        assert_eq!(a.add(&b).unwrap_err(), Error::FieldMismatch);
    }
}
