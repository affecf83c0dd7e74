use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::laurent::{theta_floor, LaurentL};
use crate::scalars::FieldDesc;

/// What is known about coefficients beyond the stored t-degrees.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Tail {
    /// The series is a polynomial: every omitted coefficient is zero.
    Zero,
    /// v_s(coefficient of t^k) >= base + slope * k for every k.
    Bounded { base: i64, slope: i64 },
    /// No information.
    Unknown,
}

/// Per-degree precision request: the coefficient of t^k is wanted down to
/// s^(floor - tilt * k), for k = 0..=t_deg.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesPrecision {
    pub t_deg: usize,
    pub floor: i64,
    pub tilt: i64,
}

impl SeriesPrecision {
    /// Every coefficient to absolute theta-precision `n`.
    pub fn uniform(field: &FieldDesc, t_deg: usize, n: i64) -> Self {
        SeriesPrecision { t_deg, floor: theta_floor(field.q(), n), tilt: 0 }
    }

    /// Enough per-degree precision to evaluate at t = theta to precision `n`.
    pub fn for_evaluation(field: &FieldDesc, t_deg: usize, n: i64) -> Self {
        SeriesPrecision { t_deg, floor: theta_floor(field.q(), n), tilt: field.q() as i64 - 1 }
    }

    pub fn floor_at(&self, k: usize) -> i64 {
        self.floor - self.tilt * k as i64
    }

    /// Lowest floor over all requested degrees.
    pub fn min_floor(&self) -> i64 {
        self.floor_at(self.t_deg)
    }

    /// The same request with every floor lowered by `guard`.
    pub fn guarded(&self, guard: i64) -> Self {
        SeriesPrecision { floor: self.floor - guard, ..*self }
    }
}

/// A power series in t with coefficients in the Laurent field, truncated at
/// a finite t-degree, together with a growth certificate for the tail.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TSeries {
    field: FieldDesc,
    coeffs: Vec<LaurentL>,
    tail: Tail,
}

fn lb(x: &LaurentL) -> Option<i64> {
    x.valuation_lower_bound()
}

impl TSeries {
    pub fn new(field: &FieldDesc, coeffs: Vec<LaurentL>, tail: Tail) -> Self {
        let mut out = TSeries { field: field.clone(), coeffs, tail };
        if out.tail == Tail::Zero {
            while out.coeffs.last().is_some_and(|c| c.is_exact_zero()) {
                out.coeffs.pop();
            }
        }
        out
    }

    /// A polynomial in t with the given coefficients.
    pub fn polynomial(field: &FieldDesc, coeffs: Vec<LaurentL>) -> Self {
        Self::new(field, coeffs, Tail::Zero)
    }

    pub fn constant(c: LaurentL) -> Self {
        let f = c.field().clone();
        Self::polynomial(&f, vec![c])
    }

    pub fn one(field: &FieldDesc) -> Self {
        Self::constant(LaurentL::one(field))
    }

    pub fn zero(field: &FieldDesc) -> Self {
        Self::polynomial(field, Vec::new())
    }

    /// t - c.
    pub fn t_minus(c: &LaurentL) -> Self {
        let f = c.field().clone();
        Self::polynomial(&f, vec![c.neg(), LaurentL::one(&f)])
    }

    pub fn field(&self) -> &FieldDesc {
        &self.field
    }

    pub fn coeffs(&self) -> &[LaurentL] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [LaurentL] {
        &mut self.coeffs
    }

    pub fn tail(&self) -> Tail {
        self.tail
    }

    pub fn set_tail(&mut self, tail: Tail) {
        self.tail = tail;
    }

    pub fn is_polynomial(&self) -> bool {
        self.tail == Tail::Zero
    }

    /// Highest stored degree, or `None` for a polynomial (known in every degree).
    pub fn t_prec(&self) -> Option<usize> {
        if self.is_polynomial() {
            None
        } else {
            Some(self.coeffs.len().saturating_sub(1))
        }
    }

    /// Coefficient of t^k, if known.
    pub fn coeff(&self, k: usize) -> Option<LaurentL> {
        match self.coeffs.get(k) {
            Some(c) => Some(c.clone()),
            None if self.is_polynomial() => Some(LaurentL::zero(&self.field)),
            None => None,
        }
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    fn result_len(&self, other: &Self, full: usize) -> (usize, bool) {
        match (self.t_prec(), other.t_prec()) {
            (None, None) => (full, true),
            (Some(a), None) | (None, Some(a)) => (a + 1, false),
            (Some(a), Some(b)) => (a.min(b) + 1, false),
        }
    }

    /// Lower bound for min_j (v(p_j) - slope * j) over a polynomial.
    fn poly_offset(&self, slope: i64) -> i64 {
        self.coeffs
            .iter()
            .enumerate()
            .filter_map(|(j, c)| lb(c).map(|v| v - slope * j as i64))
            .min()
            .unwrap_or(i64::MAX / 4)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let full = self.coeffs.len().max(other.coeffs.len());
        let (len, poly) = self.result_len(other, full);
        let zero = LaurentL::zero(&self.field);
        let coeffs = (0..len)
            .map(|k| {
                let a = self.coeffs.get(k).unwrap_or(&zero);
                let b = other.coeffs.get(k).unwrap_or(&zero);
                a.add(b)
            })
            .collect::<Result<Vec<_>>>()?;
        let tail = if poly {
            Tail::Zero
        } else {
            match (self.tail, other.tail) {
                (Tail::Unknown, _) | (_, Tail::Unknown) => Tail::Unknown,
                (Tail::Bounded { base: b1, slope: s1 }, Tail::Bounded { base: b2, slope: s2 }) => {
                    Tail::Bounded { base: b1.min(b2), slope: s1.min(s2) }
                }
                (Tail::Zero, Tail::Bounded { base, slope }) => {
                    Tail::Bounded { base: base.min(self.poly_offset(slope)), slope }
                }
                (Tail::Bounded { base, slope }, Tail::Zero) => {
                    Tail::Bounded { base: base.min(other.poly_offset(slope)), slope }
                }
                (Tail::Zero, Tail::Zero) => Tail::Zero,
            }
        };
        Ok(Self::new(&self.field, coeffs, tail))
    }

    pub fn neg(&self) -> Self {
        Self::new(&self.field, self.coeffs.iter().map(|c| c.neg()).collect(), self.tail)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.mul_impl(other, None)
    }

    /// Product with each coefficient computed only down to the requested floor.
    pub fn mul_to(&self, other: &Self, prec: &SeriesPrecision) -> Result<Self> {
        self.mul_impl(other, Some(prec))
    }

    fn mul_impl(&self, other: &Self, prec: Option<&SeriesPrecision>) -> Result<Self> {
        self.check(other)?;
        let f = &self.field;
        let full = (self.coeffs.len() + other.coeffs.len()).saturating_sub(1);
        let (mut len, poly) = self.result_len(other, full);
        let mut poly = poly;
        if let Some(p) = prec {
            if len > p.t_deg + 1 {
                len = p.t_deg + 1;
                poly = false;
            }
        }
        let mut coeffs = Vec::with_capacity(len);
        for k in 0..len {
            let mut acc: Option<LaurentL> = None;
            for i in 0..=k {
                let (Some(a), Some(b)) = (self.coeffs.get(i), other.coeffs.get(k - i)) else {
                    continue;
                };
                if a.is_exact_zero() || b.is_exact_zero() {
                    continue;
                }
                let term = match prec {
                    Some(p) => a.mul_to(b, p.floor_at(k))?,
                    None => a.mul(b)?,
                };
                acc = Some(match acc {
                    Some(x) => x.add(&term)?,
                    None => term,
                });
            }
            let c = acc.unwrap_or_else(|| LaurentL::zero(f));
            coeffs.push(match prec {
                Some(p) if c.is_exact() => c.clip(p.floor_at(k)),
                _ => c,
            });
        }
        let tail = if poly {
            Tail::Zero
        } else {
            let (self_poly, other_poly) = (self.is_polynomial(), other.is_polynomial());
            match (self.tail, other.tail) {
                (Tail::Unknown, _) | (_, Tail::Unknown) => Tail::Unknown,
                (Tail::Bounded { base: b1, slope: s1 }, Tail::Bounded { base: b2, slope: s2 }) => {
                    Tail::Bounded { base: b1 + b2, slope: s1.min(s2) }
                }
                (Tail::Zero, Tail::Bounded { base, slope }) => {
                    Tail::Bounded { base: base + self.poly_offset(slope), slope }
                }
                (Tail::Bounded { base, slope }, Tail::Zero) => {
                    Tail::Bounded { base: base + other.poly_offset(slope), slope }
                }
                (Tail::Zero, Tail::Zero) => {
                    debug_assert!(self_poly && other_poly);
                    self.truncated_poly_tail(other)
                }
            }
        };
        Ok(Self::new(f, coeffs, tail))
    }

    /// Growth certificate for the product of two polynomials cut short.
    fn truncated_poly_tail(&self, other: &Self) -> Tail {
        let a = self.poly_offset(0);
        let b = other.poly_offset(0);
        Tail::Bounded { base: a.saturating_add(b), slope: 0 }
    }

    /// Multiplication by a Laurent constant.
    pub fn scale(&self, c: &LaurentL) -> Result<Self> {
        let coeffs = self.coeffs.iter().map(|x| x.mul(c)).collect::<Result<Vec<_>>>()?;
        let tail = match self.tail {
            Tail::Bounded { base, slope } => match lb(c) {
                Some(v) => Tail::Bounded { base: base + v, slope },
                None => Tail::Zero,
            },
            t => t,
        };
        if c.is_exact_zero() {
            return Ok(Self::zero(&self.field));
        }
        Ok(Self::new(&self.field, coeffs, tail))
    }

    /// Integer power by repeated squaring, truncated to `prec`.
    pub fn pow_to(&self, mut e: u64, prec: &SeriesPrecision) -> Result<Self> {
        let mut acc = Self::one(&self.field);
        let mut base = self.clone();
        let mut first = true;
        while e > 0 {
            if e & 1 == 1 {
                acc = if first { base.clone() } else { acc.mul_to(&base, prec)? };
                first = false;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_to(&base, prec)?;
            }
        }
        acc.truncate_to(prec)
    }

    /// Cuts the t-degree to `prec.t_deg` and clips every coefficient to its
    /// requested floor, failing if a coefficient is not known that far.
    pub fn truncate_to(&self, prec: &SeriesPrecision) -> Result<Self> {
        let len = match self.t_prec() {
            Some(t) if t < prec.t_deg => {
                return Err(Error::TruncationInsufficient { have: t, required: prec.t_deg })
            }
            _ => prec.t_deg + 1,
        };
        let zero = LaurentL::zero(&self.field);
        let coeffs = (0..len)
            .map(|k| self.coeffs.get(k).unwrap_or(&zero).truncate(prec.floor_at(k)))
            .collect::<Result<Vec<_>>>()?;
        let tail = match self.tail {
            Tail::Zero if self.coeffs.len() <= len => Tail::Zero,
            Tail::Zero => {
                let rest = TSeries::polynomial(&self.field, self.coeffs[len..].to_vec());
                let slope = 0;
                Tail::Bounded { base: rest.poly_offset(slope), slope }
            }
            t => t,
        };
        Ok(Self::new(&self.field, coeffs, tail))
    }

    /// The n-fold twist: every coefficient is twisted, t is left alone.
    pub fn twist(&self, n: i64) -> Result<Self> {
        if n < 0 {
            return Err(Error::Unsupported("negative twists of series are not implemented".into()));
        }
        let n = n as u32;
        let qn = (self.field.q() as i64)
            .checked_pow(n)
            .ok_or_else(|| Error::Unsupported("twist exponent too large".into()))?;
        let coeffs = self.coeffs.iter().map(|c| c.frobenius_power(n)).collect::<Result<Vec<_>>>()?;
        let tail = match self.tail {
            Tail::Bounded { base, slope } => Tail::Bounded {
                base: base.saturating_mul(qn),
                slope: slope.saturating_mul(qn),
            },
            t => t,
        };
        Ok(Self::new(&self.field, coeffs, tail))
    }

    /// Multiplicative inverse as a power series in t.
    pub fn inv(&self) -> Result<Self> {
        let f = &self.field;
        let c0 = self.coeffs.first().ok_or(Error::ZeroToPrecision)?;
        let c0_inv = c0.inv()?;
        let len = self.t_prec().map_or(self.coeffs.len(), |t| t + 1);
        let len = if self.is_polynomial() {
            return Err(Error::Unsupported("inverse of a polynomial needs a t-truncation".into()));
        } else {
            len
        };
        let mut out: Vec<LaurentL> = Vec::with_capacity(len);
        out.push(c0_inv.clone());
        for k in 1..len {
            let mut acc = LaurentL::zero(f);
            for i in 1..=k {
                acc = acc.add(&self.coeffs[i].mul(&out[k - i])?)?;
            }
            out.push(acc.mul(&c0_inv)?.neg());
        }
        Ok(Self::new(f, out, Tail::Unknown))
    }

    /// Inverse truncated to `t_deg`, for polynomial input.
    pub fn inv_series(&self, t_deg: usize) -> Result<Self> {
        let mut padded = self.coeffs.clone();
        padded.resize(t_deg + 1, LaurentL::zero(&self.field));
        padded.truncate(t_deg + 1);
        TSeries::new(&self.field, padded, Tail::Unknown).inv()
    }

    /// Smallest t-truncation for which `eval_at_theta(n)` can succeed.
    pub fn required_t_for_eval(&self, n: i64) -> Result<usize> {
        match self.tail {
            Tail::Zero => Ok(0),
            Tail::Unknown => Err(Error::Unsupported("no growth certificate for the tail".into())),
            Tail::Bounded { base, slope } => required_t(self.field.q(), base, slope, n),
        }
    }

    /// Evaluates at t = theta to absolute theta-precision `n`.
    pub fn eval_at_theta(&self, n: i64) -> Result<LaurentL> {
        let f = &self.field;
        let floor = theta_floor(f.q(), n);
        if let Some(have) = self.t_prec() {
            let need = self.required_t_for_eval(n)?;
            if have < need {
                return Err(Error::TruncationInsufficient { have, required: need });
            }
        }
        let mut acc = LaurentL::zero_to(f, floor);
        for (k, c) in self.coeffs.iter().enumerate() {
            let term = c.mul(&LaurentL::theta_power(f, k as i64))?;
            acc = acc.add(&term.truncate(floor)?)?;
        }
        Ok(acc)
    }

    /// Highest-priority mismatch on the common window: the lowest t-degree,
    /// then the highest s-exponent.
    pub fn first_difference(&self, other: &Self) -> Option<(usize, i64)> {
        let len = self.coeffs.len().max(other.coeffs.len());
        for k in 0..len {
            let (Some(a), Some(b)) = (self.coeff(k), other.coeff(k)) else {
                break;
            };
            if let Some(e) = a.first_difference(&b) {
                return Some((k, e));
            }
        }
        None
    }

    /// Worst (highest) floor over the common window of t-degrees, together
    /// with the number of degrees compared.
    pub fn common_window(&self, other: &Self) -> (usize, Option<i64>) {
        let len = match (self.t_prec(), other.t_prec()) {
            (None, None) => self.coeffs.len().max(other.coeffs.len()),
            (Some(a), None) | (None, Some(a)) => a + 1,
            (Some(a), Some(b)) => a.min(b) + 1,
        };
        let mut worst: Option<i64> = None;
        for k in 0..len {
            if let (Some(a), Some(b)) = (self.coeff(k), other.coeff(k)) {
                if let Some(fl) = a.common_floor(&b) {
                    worst = Some(worst.map_or(fl, |w: i64| w.max(fl)));
                }
            }
        }
        (len, worst)
    }
}

/// Smallest T such that every omitted term c_k theta^k (k > T) lies below the
/// s-floor of theta-precision `n`, given v_s(c_k) >= base + slope k.
pub fn required_t(q: u32, base: i64, slope: i64, n: i64) -> Result<usize> {
    let gain = slope - (q as i64 - 1);
    if gain <= 0 {
        return Err(Error::NoDecay);
    }
    let floor = theta_floor(q, n);
    let need = 1 - floor - base;
    let k_min = if need <= 0 { 0 } else { (need + gain - 1) / gain };
    Ok((k_min - 1).max(0) as usize)
}
