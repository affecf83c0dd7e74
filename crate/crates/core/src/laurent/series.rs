use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalars::{FieldDesc, Fq, PolyTheta};

/// A truncated Laurent series in s^{-1} over F_q, where s^{q-1} = -theta.
///
/// Coefficients are stored for exponents `low..=top`. An exact series has
/// finite support; an inexact one is known only for exponents at or above its
/// floor (`low`) and everything below is unknown.
#[derive(Clone, PartialEq, Eq)]
pub struct LaurentL {
    field: FieldDesc,
    low: i64,
    coeffs: Vec<Fq>,
    exact: bool,
}

/// Valuation with respect to theta, kept as the fraction v_s / (q - 1).
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct ThetaValuation {
    pub num: i64,
    pub den: i64,
}

impl ThetaValuation {
    pub fn reduced(self) -> (i64, i64) {
        let g = gcd(self.num.unsigned_abs(), self.den.unsigned_abs()).max(1) as i64;
        (self.num / g, self.den / g)
    }

    pub fn as_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl PartialEq for ThetaValuation {
    fn eq(&self, other: &Self) -> bool {
        self.num as i128 * other.den as i128 == other.num as i128 * self.den as i128
    }
}

impl Eq for ThetaValuation {}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl fmt::Debug for LaurentL {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for LaurentL {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{}*s^{}", c.0, self.low + i as i64)?;
        }
        if !self.exact {
            if !first {
                write!(f, " + ")?;
            }
            write!(f, "O(s^{})", self.low - 1)?;
        } else if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl LaurentL {
    /// Builds a series from coefficients of s^low, s^(low+1), ...
    pub fn from_coeffs(field: &FieldDesc, low: i64, coeffs: Vec<Fq>, exact: bool) -> Self {
        let mut out = LaurentL { field: field.clone(), low, coeffs, exact };
        out.normalize();
        out
    }

    fn normalize(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
        if self.exact {
            let lead = self.coeffs.iter().take_while(|c| c.is_zero()).count();
            if lead > 0 {
                self.coeffs.drain(..lead);
                self.low += lead as i64;
            }
            if self.coeffs.is_empty() {
                self.low = 0;
            }
        }
    }

    pub fn zero(field: &FieldDesc) -> Self {
        Self::from_coeffs(field, 0, Vec::new(), true)
    }

    /// Zero known down to exponent `floor`.
    pub fn zero_to(field: &FieldDesc, floor: i64) -> Self {
        Self::from_coeffs(field, floor, Vec::new(), false)
    }

    pub fn one(field: &FieldDesc) -> Self {
        Self::monomial(field, Fq::ONE, 0)
    }

    pub fn constant(field: &FieldDesc, c: Fq) -> Self {
        Self::monomial(field, c, 0)
    }

    /// c * s^e.
    pub fn monomial(field: &FieldDesc, c: Fq, e: i64) -> Self {
        Self::from_coeffs(field, e, vec![c], true)
    }

    /// The uniformizer s.
    pub fn s_gen(field: &FieldDesc) -> Self {
        Self::monomial(field, Fq::ONE, 1)
    }

    /// theta^k = (-1)^k s^(k(q-1)).
    pub fn theta_power(field: &FieldDesc, k: i64) -> Self {
        let c = if k.rem_euclid(2) == 0 { Fq::ONE } else { field.neg(Fq::ONE) };
        Self::monomial(field, c, k * (field.q() as i64 - 1))
    }

    pub fn theta(field: &FieldDesc) -> Self {
        Self::theta_power(field, 1)
    }

    /// Exact image of a polynomial in theta.
    pub fn from_poly(poly: &PolyTheta) -> Self {
        let f = poly.field();
        let step = f.q() as usize - 1;
        let n = poly.coeffs().len();
        if n == 0 {
            return Self::zero(f);
        }
        let mut cs = vec![Fq::ZERO; (n - 1) * step + 1];
        for (k, &c) in poly.coeffs().iter().enumerate() {
            cs[k * step] = if k % 2 == 0 { c } else { f.neg(c) };
        }
        Self::from_coeffs(f, 0, cs, true)
    }

    pub fn field(&self) -> &FieldDesc {
        &self.field
    }

    pub fn is_exact(&self) -> bool {
        self.exact
    }

    /// Lowest known exponent of an inexact series; `None` when exact.
    pub fn floor(&self) -> Option<i64> {
        (!self.exact).then_some(self.low)
    }

    /// Exponent of the lowest stored coefficient.
    pub fn low(&self) -> i64 {
        self.low
    }

    /// Stored coefficients, lowest exponent first.
    pub fn coeffs(&self) -> &[Fq] {
        &self.coeffs
    }

    /// Leading exponent, or `None` when every known coefficient vanishes.
    pub fn top(&self) -> Option<i64> {
        (!self.coeffs.is_empty()).then(|| self.low + self.coeffs.len() as i64 - 1)
    }

    /// Coefficient of s^e, or `None` when it lies below the floor.
    pub fn coeff(&self, e: i64) -> Option<Fq> {
        if !self.exact && e < self.low {
            return None;
        }
        let i = e - self.low;
        if i < 0 || i >= self.coeffs.len() as i64 {
            Some(Fq::ZERO)
        } else {
            Some(self.coeffs[i as usize])
        }
    }

    pub fn leading(&self) -> Option<(i64, Fq)> {
        self.top().map(|t| (t, *self.coeffs.last().unwrap()))
    }

    /// True when every known coefficient vanishes.
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_exact_zero(&self) -> bool {
        self.exact && self.coeffs.is_empty()
    }

    pub fn is_monomial(&self) -> bool {
        self.exact && self.coeffs.len() == 1
    }

    /// Largest exponent that could carry a nonzero coefficient.
    fn effective_top(&self) -> i64 {
        match self.top() {
            Some(t) => t,
            None => self.low - 1,
        }
    }

    /// Lower bound for v_s, `None` for the exact zero.
    pub fn valuation_lower_bound(&self) -> Option<i64> {
        if self.is_exact_zero() {
            None
        } else {
            Some(-self.effective_top())
        }
    }

    /// Valuation in s, which is minus the leading exponent.
    pub fn valuation_s(&self) -> Result<i64> {
        match self.top() {
            Some(t) => Ok(-t),
            None => Err(Error::UnknownValuation { floor: if self.exact { i64::MAX } else { self.low } }),
        }
    }

    /// Valuation in theta, with v(theta) = -1.
    pub fn valuation_theta(&self) -> Result<ThetaValuation> {
        Ok(ThetaValuation { num: self.valuation_s()?, den: self.field.q() as i64 - 1 })
    }

    /// log_|theta| of the absolute value, which is -v_theta.
    pub fn norm_exponent(&self) -> Result<f64> {
        Ok(-self.valuation_theta()?.as_f64())
    }

    /// True when every nonzero coefficient sits at an exponent divisible by
    /// q - 1, i.e. the value lies in F_q((1/theta)).
    pub fn in_k_infinity(&self) -> bool {
        let step = self.field.q() as i64 - 1;
        self.coeffs
            .iter()
            .enumerate()
            .all(|(i, c)| c.is_zero() || (self.low + i as i64).rem_euclid(step) == 0)
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    /// Restricts the known window to exponents >= floor.
    pub fn truncate(&self, floor: i64) -> Result<Self> {
        if !self.exact && self.low > floor {
            return Err(Error::InsufficientPrecision { have: self.low, need: floor });
        }
        Ok(self.clip(floor))
    }

    /// Drops every coefficient below `floor` without checking that the
    /// current window reaches it.
    pub fn clip(&self, floor: i64) -> Self {
        let floor = if self.exact { floor } else { floor.max(self.low) };
        let cs = match self.top() {
            Some(top) if top >= floor => (floor..=top).map(|e| self.coeff(e).unwrap_or(Fq::ZERO)).collect(),
            _ => Vec::new(),
        };
        Self::from_coeffs(&self.field, floor, cs, false)
    }

    pub fn neg(&self) -> Self {
        let f = &self.field;
        LaurentL {
            field: f.clone(),
            low: self.low,
            coeffs: self.coeffs.iter().map(|&c| f.neg(c)).collect(),
            exact: self.exact,
        }
    }

    pub fn scale(&self, c: Fq) -> Self {
        if c.is_zero() && self.exact {
            return Self::zero(&self.field);
        }
        let f = &self.field;
        Self::from_coeffs(f, self.low, self.coeffs.iter().map(|&x| f.mul(x, c)).collect(), self.exact)
    }

    /// Multiplication by s^k.
    pub fn shift(&self, k: i64) -> Self {
        let mut out = self.clone();
        if !(out.exact && out.coeffs.is_empty()) {
            out.low += k;
        }
        out
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let floor = match (self.floor(), other.floor()) {
            (None, None) => None,
            (a, b) => Some(a.unwrap_or(i64::MIN).max(b.unwrap_or(i64::MIN))),
        };
        let tops = [self.top(), other.top()];
        let hi = match tops.iter().flatten().max() {
            Some(&h) => h,
            None => return Ok(floor.map_or_else(|| Self::zero(&self.field), |fl| Self::zero_to(&self.field, fl))),
        };
        let mut lo = i64::MAX;
        for x in [self, other] {
            if !x.coeffs.is_empty() {
                lo = lo.min(x.low);
            }
        }
        if let Some(fl) = floor {
            lo = fl;
        }
        if lo > hi {
            return Ok(Self::zero_to(&self.field, floor.expect("empty window only when inexact")));
        }
        let f = &self.field;
        let mut cs = vec![Fq::ZERO; (hi - lo + 1) as usize];
        for x in [self, other] {
            for (i, &c) in x.coeffs.iter().enumerate() {
                let e = x.low + i as i64;
                if e >= lo && !c.is_zero() {
                    let slot = &mut cs[(e - lo) as usize];
                    *slot = f.add(*slot, c);
                }
            }
        }
        Ok(Self::from_coeffs(f, lo, cs, floor.is_none()))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    /// Floor below which the product of two series is unknown.
    fn product_floor(&self, other: &Self) -> Option<i64> {
        match (self.exact, other.exact) {
            (true, true) => None,
            (true, false) => Some(self.effective_top() + other.low),
            (false, true) => Some(other.effective_top() + self.low),
            (false, false) => Some(
                (self.effective_top() + other.low)
                    .max(other.effective_top() + self.low)
                    .max(self.low + other.low - 1),
            ),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.mul_impl(other, None)
    }

    /// Product computed only for exponents >= `floor`.
    pub fn mul_to(&self, other: &Self, floor: i64) -> Result<Self> {
        self.mul_impl(other, Some(floor))
    }

    fn mul_impl(&self, other: &Self, request: Option<i64>) -> Result<Self> {
        self.check(other)?;
        let f = &self.field;
        if self.is_exact_zero() || other.is_exact_zero() {
            return Ok(Self::zero(f));
        }
        let natural = self.product_floor(other);
        let floor = match (natural, request) {
            (None, None) => None,
            (a, b) => Some(a.unwrap_or(i64::MIN).max(b.unwrap_or(i64::MIN))),
        };
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Ok(Self::zero_to(f, floor.expect("inexact operand")));
        }
        let hi = self.top().unwrap() + other.top().unwrap();
        let lo = floor.unwrap_or(self.low + other.low);
        if lo > hi {
            return Ok(Self::zero_to(f, floor.expect("window can only be empty when truncated")));
        }
        let len = (hi - lo + 1) as usize;
        let cs = convolve(f, &self.coeffs, self.low, &other.coeffs, other.low, lo, len);
        Ok(Self::from_coeffs(f, lo, cs, floor.is_none()))
    }

    pub fn square(&self) -> Result<Self> {
        self.mul(self)
    }

    /// Inverse keeping the relative window length.
    pub fn inv(&self) -> Result<Self> {
        self.inv_to(None)
    }

    /// Inverse known down to `floor` (or the natural floor when `None`). An
    /// exact series that is not a monomial needs an explicit floor.
    pub fn inv_to(&self, floor: Option<i64>) -> Result<Self> {
        let f = &self.field;
        let (top, lead) = self.leading().ok_or(Error::ZeroToPrecision)?;
        if self.is_monomial() {
            return Ok(Self::monomial(f, f.inv(lead)?, -top));
        }
        let known = if self.exact { i64::MAX } else { top - self.low };
        let target = match (floor, self.exact) {
            (Some(fl), _) => fl,
            (None, false) => -top - known,
            (None, true) => {
                return Err(Error::Unsupported("inverse of an exact non-monomial needs a target floor".into()))
            }
        };
        let k_max = (-top - target).min(known).max(0) as usize;
        let a: Vec<Fq> = (0..=k_max as i64).map(|k| self.coeff(top - k).unwrap_or(Fq::ZERO)).collect();
        let r0 = f.inv(lead)?;
        let minus_r0 = f.neg(r0);
        let mut r = Vec::with_capacity(k_max + 1);
        r.push(r0);
        for k in 1..=k_max {
            let s = f.dot((1..=k).filter(|&i| !a[i].is_zero()).map(|i| (a[i], r[k - i])));
            r.push(f.mul(minus_r0, s));
        }
        r.reverse();
        let low = -top - k_max as i64;
        let out = Self::from_coeffs(f, low, r, false);
        Ok(if target > low { out.clip(target) } else { out })
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        if other.is_monomial() {
            return self.mul(&other.inv()?);
        }
        if other.exact {
            let floor = self.floor().ok_or_else(|| {
                Error::Unsupported("exact quotient by a non-monomial needs a target floor".into())
            })?;
            return self.div_to(other, floor);
        }
        self.mul(&other.inv()?)
    }

    /// Quotient computed for exponents >= `floor`.
    pub fn div_to(&self, other: &Self, floor: i64) -> Result<Self> {
        let top = self.top().unwrap_or(self.low);
        let inv = if other.is_monomial() { other.inv()? } else { other.inv_to(Some(floor - top))? };
        self.mul_to(&inv, floor)
    }

    /// Integer power; negative exponents invert first.
    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        Ok(base.pow_u(e.unsigned_abs(), None))
    }

    /// Non-negative power computed for exponents >= `floor`.
    pub fn pow_to(&self, e: u64, floor: i64) -> Result<Self> {
        Ok(self.pow_u(e, Some(floor)))
    }

    fn pow_u(&self, mut e: u64, floor: Option<i64>) -> Self {
        let mul = |a: &Self, b: &Self| match floor {
            Some(fl) => a.mul_to(b, fl).expect("same field"),
            None => a.mul(b).expect("same field"),
        };
        let mut acc: Option<Self> = None;
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = Some(match acc {
                    Some(a) => mul(&a, &base),
                    None => base.clone(),
                });
            }
            e >>= 1;
            if e > 0 {
                base = mul(&base, &base);
            }
        }
        let one = Self::one(&self.field);
        let out = acc.unwrap_or(one);
        match floor {
            Some(fl) if out.exact => out.clip(fl),
            _ => out,
        }
    }

    /// n-fold twist: c * s^e becomes c^(q^n) * s^(e q^n).
    pub fn frobenius_power(&self, n: u32) -> Result<Self> {
        self.frobenius_power_to(n, None)
    }

    /// Twist keeping only exponents >= `floor`.
    pub fn frobenius_power_to(&self, n: u32, floor: Option<i64>) -> Result<Self> {
        let f = &self.field;
        let qn = (f.q() as i64)
            .checked_pow(n)
            .ok_or_else(|| Error::Unsupported("twist exponent too large".into()))?;
        if n == 0 {
            return Ok(match floor {
                Some(fl) => self.clip(fl.max(self.floor().unwrap_or(i64::MIN))),
                None => self.clone(),
            });
        }
        let natural = self.floor().map(|fl| (fl - 1) * qn + 1);
        let fl = match (natural, floor) {
            (None, None) => None,
            (a, b) => Some(a.unwrap_or(i64::MIN).max(b.unwrap_or(i64::MIN))),
        };
        let Some(top) = self.top() else {
            return Ok(match fl {
                Some(x) => Self::zero_to(f, x),
                None => Self::zero(f),
            });
        };
        let hi = top * qn;
        let lo = fl.unwrap_or(self.low * qn);
        if lo > hi {
            return Ok(Self::zero_to(f, fl.expect("window can only be empty when truncated")));
        }
        let mut cs = vec![Fq::ZERO; (hi - lo + 1) as usize];
        for (i, &c) in self.coeffs.iter().enumerate() {
            let e = (self.low + i as i64) * qn;
            if e >= lo && !c.is_zero() {
                cs[(e - lo) as usize] = f.frobenius(c, n);
            }
        }
        Ok(Self::from_coeffs(f, lo, cs, fl.is_none()))
    }

    /// Lowest exponent known in both operands.
    pub fn common_floor(&self, other: &Self) -> Option<i64> {
        match (self.floor(), other.floor()) {
            (None, None) => None,
            (a, b) => Some(a.unwrap_or(i64::MIN).max(b.unwrap_or(i64::MIN))),
        }
    }

    /// Highest exponent on the common window where the two series differ.
    pub fn first_difference(&self, other: &Self) -> Option<i64> {
        let floor = self.common_floor(other);
        let tops = [self.top(), other.top()];
        let hi = *tops.iter().flatten().max()?;
        let lo = match floor {
            Some(fl) => fl,
            None => self.low.min(other.low),
        };
        (lo..=hi).rev().find(|&e| self.coeff(e) != other.coeff(e))
    }

    /// Agreement on the common window.
    pub fn agrees_with(&self, other: &Self) -> bool {
        self.field == other.field && self.first_difference(other).is_none()
    }

    /// Adds `c` to the coefficient of s^e (used to inject faults in tests).
    pub fn perturb(&mut self, e: i64, c: Fq) {
        let f = self.field.clone();
        let mut one = Self::monomial(&f, c, e);
        if !self.exact {
            one = one.clip(self.low);
        }
        *self = self.add(&one).expect("same field");
    }
}

/// Coefficients of s^lo .. s^(lo+len-1) in the product of two coefficient runs.
fn convolve(f: &FieldDesc, a: &[Fq], a_low: i64, b: &[Fq], b_low: i64, lo: i64, len: usize) -> Vec<Fq> {
    let b_len = b.len() as i64;
    if f.is_prime_field() {
        let p = f.p() as u64;
        let mut acc = vec![0u64; len];
        let limit = u64::MAX - (p - 1) * (p - 1);
        for (i, &x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            let ea = a_low + i as i64;
            let j0 = (lo - ea - b_low).max(0);
            let j1 = (lo + len as i64 - 1 - ea - b_low).min(b_len - 1);
            if j0 > j1 {
                continue;
            }
            let xv = x.0 as u64;
            let base = (ea + b_low + j0 - lo) as usize;
            for (k, &y) in b[j0 as usize..=j1 as usize].iter().enumerate() {
                let slot = &mut acc[base + k];
                *slot += xv * y.0 as u64;
                if *slot > limit {
                    *slot %= p;
                }
            }
        }
        acc.into_iter().map(|v| Fq((v % p) as u32)).collect()
    } else {
        let mut out = vec![Fq::ZERO; len];
        for (i, &x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            let ea = a_low + i as i64;
            let j0 = (lo - ea - b_low).max(0);
            let j1 = (lo + len as i64 - 1 - ea - b_low).min(b_len - 1);
            if j0 > j1 {
                continue;
            }
            let base = (ea + b_low + j0 - lo) as usize;
            for (k, &y) in b[j0 as usize..=j1 as usize].iter().enumerate() {
                if !y.is_zero() {
                    let slot = &mut out[base + k];
                    *slot = f.add(*slot, f.mul(x, y));
                }
            }
        }
        out
    }
}
