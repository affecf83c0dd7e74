use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::laurent::{FieldJson, LaurentL, RationalK};
use crate::scalars::{FieldDesc, PolyTheta};
use crate::tate::{SeriesPrecision, TSeries};

/// A polynomial in t with coefficients in F_q(theta), lowest degree first.
#[derive(Clone, PartialEq, Eq)]
pub struct KtPoly {
    field: FieldDesc,
    coeffs: Vec<RationalK>,
}

impl fmt::Debug for KtPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for KtPoly {
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
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})*t")?,
                _ => write!(f, "({c})*t^{k}")?,
            }
        }
        Ok(())
    }
}

impl KtPoly {
    pub fn new(field: &FieldDesc, mut coeffs: Vec<RationalK>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        KtPoly { field: field.clone(), coeffs }
    }

    pub fn constant(c: RationalK) -> Self {
        let f = c.field().clone();
        Self::new(&f, vec![c])
    }

    pub fn zero(field: &FieldDesc) -> Self {
        Self::new(field, Vec::new())
    }

    pub fn one(field: &FieldDesc) -> Self {
        Self::constant(RationalK::one(field))
    }

    pub fn t(field: &FieldDesc) -> Self {
        Self::new(field, vec![RationalK::zero(field), RationalK::one(field)])
    }

    /// t - theta^k.
    pub fn t_minus_theta_power(field: &FieldDesc, k: usize) -> Self {
        let th = PolyTheta::monomial(field, field.one(), k);
        Self::new(field, vec![RationalK::from_poly(th).neg(), RationalK::one(field)])
    }

    pub fn field(&self) -> &FieldDesc {
        &self.field
    }

    pub fn coeffs(&self) -> &[RationalK] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// The value as an element of F_q(theta), when t does not occur.
    pub fn as_scalar(&self) -> Option<RationalK> {
        match self.coeffs.len() {
            0 => Some(RationalK::zero(&self.field)),
            1 => Some(self.coeffs[0].clone()),
            _ => None,
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = RationalK::zero(&self.field);
        let cs = (0..n)
            .map(|k| self.coeffs.get(k).unwrap_or(&zero).add(other.coeffs.get(k).unwrap_or(&zero)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::new(&self.field, cs))
    }

    pub fn neg(&self) -> Self {
        Self::new(&self.field, self.coeffs.iter().map(|c| c.neg()).collect())
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(&self.field));
        }
        let mut cs = vec![RationalK::zero(&self.field); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                cs[i + j] = cs[i + j].add(&a.mul(b)?)?;
            }
        }
        Ok(Self::new(&self.field, cs))
    }

    pub fn scale(&self, c: &RationalK) -> Result<Self> {
        Ok(Self::new(&self.field, self.coeffs.iter().map(|x| x.mul(c)).collect::<Result<_>>()?))
    }

    pub fn pow(&self, e: u32) -> Result<Self> {
        let mut acc = Self::one(&self.field);
        for _ in 0..e {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Twist of every coefficient.
    pub fn twist(&self, n: u32) -> Result<Self> {
        Ok(Self::new(&self.field, self.coeffs.iter().map(|c| c.twist(n)).collect::<Result<_>>()?))
    }

    /// Inverse twist, when every coefficient has one in F_q(theta).
    pub fn untwist(&self) -> Option<Self> {
        let cs = self.coeffs.iter().map(|c| c.untwist()).collect::<Option<Vec<_>>>()?;
        Some(Self::new(&self.field, cs))
    }

    /// Minimum s-valuation over the nonzero coefficients.
    pub fn min_valuation_s(&self) -> Option<i64> {
        self.coeffs.iter().filter_map(|c| c.valuation_s()).min()
    }

    /// True when every coefficient is a polynomial in theta.
    pub fn has_polynomial_coeffs(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_polynomial())
    }

    /// The polynomial as a t-series. Polynomial coefficients stay exact,
    /// other coefficients are expanded down to the requested floors.
    pub fn to_tseries(&self, prec: &SeriesPrecision) -> Result<TSeries> {
        let cs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| if c.is_polynomial() { Ok(LaurentL::from_poly(c.num())) } else { c.to_laurent(prec.floor_at(k)) })
            .collect::<Result<Vec<_>>>()?;
        Ok(TSeries::polynomial(&self.field, cs))
    }

    /// The n-fold twist as a t-series, computed so that each coefficient is
    /// known down to the requested floor.
    pub fn twisted_tseries(&self, n: u32, prec: &SeriesPrecision) -> Result<TSeries> {
        let q = self.field.q() as i64;
        let qn = q.pow(n);
        let cs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| {
                if c.is_polynomial() {
                    LaurentL::from_poly(c.num()).frobenius_power(n)
                } else {
                    let fl = prec.floor_at(k);
                    let src = (fl - 1).div_euclid(qn) + 1;
                    c.to_laurent(src)?.frobenius_power_to(n, Some(fl))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(TSeries::polynomial(&self.field, cs))
    }
}

#[derive(Serialize, Deserialize)]
struct KtPolyJson {
    field: FieldJson,
    coeffs: Vec<(Vec<u32>, Vec<u32>)>,
}

impl Serialize for KtPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use crate::laurent::poly_codes;
        KtPolyJson {
            field: (&self.field).into(),
            coeffs: self.coeffs.iter().map(|c| (poly_codes(c.num()), poly_codes(c.den()))).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for KtPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use crate::laurent::poly_from_codes;
        let j = KtPolyJson::deserialize(d)?;
        let build = || -> Result<KtPoly> {
            let f = j.field.to_field()?;
            let cs = j
                .coeffs
                .iter()
                .map(|(n, dn)| RationalK::new(poly_from_codes(&f, n)?, poly_from_codes(&f, dn)?))
                .collect::<Result<Vec<_>>>()?;
            Ok(KtPoly::new(&f, cs))
        };
        build().map_err(serde::de::Error::custom)
    }
}
