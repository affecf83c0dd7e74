use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::laurent::{LaurentL, RationalK};
use crate::scalars::{FieldDesc, Fq, PolyTheta};

/// Serialized form of a field description.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldJson {
    pub q: u32,
    pub p: u32,
    pub m: u32,
    pub modulus: Vec<u32>,
}

impl From<&FieldDesc> for FieldJson {
    fn from(f: &FieldDesc) -> Self {
        FieldJson { q: f.q(), p: f.p(), m: f.m(), modulus: f.modulus().to_vec() }
    }
}

impl FieldJson {
    pub fn to_field(&self) -> Result<FieldDesc> {
        let md = (self.m > 1).then_some(self.modulus.as_slice());
        let f = FieldDesc::new(self.p, self.m, md)?;
        if f.q() != self.q {
            return Err(Error::InvalidArgument(format!("q = {} does not match p^m", self.q)));
        }
        Ok(f)
    }
}

impl Serialize for FieldDesc {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        FieldJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for FieldDesc {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        FieldJson::deserialize(d)?.to_field().map_err(serde::de::Error::custom)
    }
}

/// Serialized form of a series: coefficients run from `v_start_s` downward,
/// ending at `prec_s` for inexact values.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LaurentJson {
    pub q: u32,
    pub p: u32,
    pub m: u32,
    pub modulus: Vec<u32>,
    pub v_start_s: Option<i64>,
    pub prec_s: Option<i64>,
    pub coeffs: Vec<u32>,
    pub valuation_theta: Option<ValuationJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValuationJson {
    pub num: i64,
    pub den: i64,
}

impl From<&LaurentL> for LaurentJson {
    fn from(x: &LaurentL) -> Self {
        let fj = FieldJson::from(x.field());
        let coeffs: Vec<u32> = x.coeffs().iter().rev().map(|c| c.0).collect();
        LaurentJson {
            q: fj.q,
            p: fj.p,
            m: fj.m,
            modulus: fj.modulus,
            v_start_s: x.top(),
            prec_s: x.floor(),
            coeffs,
            valuation_theta: x.valuation_theta().ok().map(|v| ValuationJson { num: v.num, den: v.den }),
        }
    }
}

impl TryFrom<LaurentJson> for LaurentL {
    type Error = Error;

    fn try_from(j: LaurentJson) -> Result<Self> {
        let f = FieldJson { q: j.q, p: j.p, m: j.m, modulus: j.modulus }.to_field()?;
        let coeffs = j
            .coeffs
            .iter()
            .rev()
            .map(|&c| f.element(c as u64))
            .collect::<Result<Vec<Fq>>>()?;
        let exact = j.prec_s.is_none();
        match j.v_start_s {
            None => {
                if !coeffs.is_empty() {
                    return Err(Error::Parse("coefficients given without a leading exponent".into()));
                }
                Ok(match j.prec_s {
                    Some(fl) => LaurentL::zero_to(&f, fl),
                    None => LaurentL::zero(&f),
                })
            }
            Some(top) => {
                let low = top - coeffs.len() as i64 + 1;
                if let Some(fl) = j.prec_s {
                    if fl != low {
                        return Err(Error::Parse(format!("window [{fl}, {top}] does not match {} coefficients", coeffs.len())));
                    }
                }
                Ok(LaurentL::from_coeffs(&f, low, coeffs, exact))
            }
        }
    }
}

impl Serialize for LaurentL {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        LaurentJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for LaurentL {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        LaurentL::try_from(LaurentJson::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}

/// Serialized form of a rational function: coefficient codes, lowest first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalJson {
    pub field: FieldJson,
    pub num: Vec<u32>,
    pub den: Vec<u32>,
}

pub fn poly_codes(p: &PolyTheta) -> Vec<u32> {
    p.coeffs().iter().map(|c| c.0).collect()
}

pub fn poly_from_codes(f: &FieldDesc, codes: &[u32]) -> Result<PolyTheta> {
    PolyTheta::from_codes(f, &codes.iter().map(|&c| c as u64).collect::<Vec<_>>())
}

impl Serialize for RationalK {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RationalJson { field: self.field().into(), num: poly_codes(self.num()), den: poly_codes(self.den()) }
            .serialize(s)
    }
}

impl<'de> Deserialize<'de> for RationalK {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = RationalJson::deserialize(d)?;
        let build = || -> Result<RationalK> {
            let f = j.field.to_field()?;
            RationalK::new(poly_from_codes(&f, &j.num)?, poly_from_codes(&f, &j.den)?)
        };
        build().map_err(serde::de::Error::custom)
    }
}
