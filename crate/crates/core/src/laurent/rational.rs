use std::fmt;

use crate::error::{Error, Result};
use crate::laurent::LaurentL;
use crate::scalars::{FieldDesc, Fq, PolyTheta};

/// An element of F_q(theta) in lowest terms with a monic denominator.
#[derive(Clone, PartialEq, Eq)]
pub struct RationalK {
    num: PolyTheta,
    den: PolyTheta,
}

impl fmt::Debug for RationalK {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for RationalK {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl RationalK {
    pub fn new(num: PolyTheta, den: PolyTheta) -> Result<Self> {
        if num.field() != den.field() {
            return Err(Error::FieldMismatch);
        }
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let f = num.field().clone();
        if num.is_zero() {
            return Ok(RationalK { num, den: PolyTheta::one(&f) });
        }
        let g = num.gcd(&den)?;
        let num = num.div_exact(&g)?;
        let den = den.div_exact(&g)?;
        let lead_inv = f.inv(den.leading().expect("nonzero"))?;
        Ok(RationalK { num: num.scale(lead_inv), den: den.scale(lead_inv) })
    }

    pub fn from_poly(p: PolyTheta) -> Self {
        let f = p.field().clone();
        RationalK { num: p, den: PolyTheta::one(&f) }
    }

    pub fn from_int(field: &FieldDesc, n: i64) -> Self {
        Self::from_poly(PolyTheta::constant(field, field.from_int(n)))
    }

    pub fn constant(field: &FieldDesc, c: Fq) -> Self {
        Self::from_poly(PolyTheta::constant(field, c))
    }

    pub fn zero(field: &FieldDesc) -> Self {
        Self::from_poly(PolyTheta::zero(field))
    }

    pub fn one(field: &FieldDesc) -> Self {
        Self::from_poly(PolyTheta::one(field))
    }

    pub fn theta(field: &FieldDesc) -> Self {
        Self::from_poly(PolyTheta::theta(field))
    }

    pub fn field(&self) -> &FieldDesc {
        self.num.field()
    }

    pub fn num(&self) -> &PolyTheta {
        &self.num
    }

    pub fn den(&self) -> &PolyTheta {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    /// Constant in F_q, if the value is one.
    pub fn as_constant(&self) -> Option<Fq> {
        if self.den.is_one() && self.num.degree().unwrap_or(0) == 0 {
            Some(self.num.coeff(0))
        } else {
            None
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let num = self.num.mul(&other.den)?.add(&other.num.mul(&self.den)?)?;
        Self::new(num, self.den.mul(&other.den)?)
    }

    pub fn neg(&self) -> Self {
        RationalK { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        Self::new(self.num.mul(&other.num)?, self.den.mul(&other.den)?)
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        self.mul(&other.inv()?)
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let k = e.unsigned_abs();
        Self::new(base.num.pow(k), base.den.pow(k))
    }

    /// Valuation in s: (q - 1)(deg den - deg num).
    pub fn valuation_s(&self) -> Option<i64> {
        let dn = self.num.degree()? as i64;
        let dd = self.den.degree().unwrap_or(0) as i64;
        Some((self.field().q() as i64 - 1) * (dd - dn))
    }

    /// The n-fold twist, theta -> theta^(q^n).
    pub fn twist(&self, n: u32) -> Result<Self> {
        Ok(RationalK { num: self.num.twist(n)?, den: self.den.twist(n)? })
    }

    /// Inverse twist, when it exists in F_q(theta).
    pub fn untwist(&self) -> Option<Self> {
        Some(RationalK { num: self.num.untwist(1)?, den: self.den.untwist(1)? })
    }

    /// Expansion in F_q((1/s)) known down to s^floor.
    pub fn to_laurent(&self, floor: i64) -> Result<LaurentL> {
        let num = LaurentL::from_poly(&self.num);
        if self.den.is_one() {
            return Ok(num);
        }
        let den = LaurentL::from_poly(&self.den);
        let top = num.top().unwrap_or(0);
        let inv = den.inv_to(Some(floor - top))?;
        num.mul_to(&inv, floor)
    }

    /// Exact expansion when the denominator is a power of theta.
    pub fn to_laurent_exact(&self) -> Option<LaurentL> {
        let dd = self.den.degree()?;
        if self.den.coeffs()[..dd].iter().all(|c| c.is_zero()) {
            let num = LaurentL::from_poly(&self.num);
            Some(num.mul(&LaurentL::theta_power(self.field(), -(dd as i64))).ok()?)
        } else {
            None
        }
    }
}
