use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::laurent::poly_codes;
use crate::scalars::{FieldDesc, PolyTheta};

fn q_pow(field: &FieldDesc, i: usize) -> Result<usize> {
    (field.q() as usize)
        .checked_pow(i as u32)
        .filter(|&v| v <= 1 << 24)
        .ok_or_else(|| Error::Unsupported(format!("q^{i} is too large")))
}

fn theta_pow(field: &FieldDesc, k: usize) -> PolyTheta {
    PolyTheta::monomial(field, field.one(), k)
}

/// D_i = prod_{j < i} (theta^(q^i) - theta^(q^j)), the product of all monic
/// polynomials of degree i.
pub fn carlitz_d(field: &FieldDesc, i: usize) -> Result<PolyTheta> {
    let qi = q_pow(field, i)?;
    let mut acc = PolyTheta::one(field);
    for j in 0..i {
        let factor = theta_pow(field, qi).sub(&theta_pow(field, q_pow(field, j)?))?;
        acc = acc.mul(&factor)?;
    }
    Ok(acc)
}

/// L_i = prod_{k=1}^{i} (theta^(q^k) - theta).
pub fn carlitz_l(field: &FieldDesc, i: usize) -> Result<PolyTheta> {
    let mut acc = PolyTheta::one(field);
    for k in 1..=i {
        acc = acc.mul(&theta_pow(field, q_pow(field, k)?).sub(&PolyTheta::theta(field))?)?;
    }
    Ok(acc)
}

/// l_i = prod_{k=1}^{i} (theta - theta^(q^k)) = (-1)^i L_i, the denominators
/// of the Carlitz logarithm.
pub fn carlitz_ell(field: &FieldDesc, i: usize) -> Result<PolyTheta> {
    let mut acc = PolyTheta::one(field);
    for k in 1..=i {
        acc = acc.mul(&PolyTheta::theta(field).sub(&theta_pow(field, q_pow(field, k)?))?)?;
    }
    Ok(acc)
}

/// Base-q digits of n, lowest first.
pub fn q_digits(q: u64, mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    while n > 0 {
        out.push(n % q);
        n /= q;
    }
    out
}

/// Carlitz factorial Gamma_n = prod D_i^(c_i) where n - 1 = sum c_i q^i.
pub fn carlitz_gamma(field: &FieldDesc, n: u64) -> Result<PolyTheta> {
    if n == 0 {
        return Err(Error::InvalidArgument("Gamma_n needs n >= 1".into()));
    }
    let mut acc = PolyTheta::one(field);
    for (i, &c) in q_digits(field.q() as u64, n - 1).iter().enumerate() {
        if c > 0 {
            acc = acc.mul(&carlitz_d(field, i)?.pow(c))?;
        }
    }
    Ok(acc)
}

/// Tables of D_i, l_i (i <= max_i) and Gamma_n (1 <= n <= up_to).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CarlitzConstants {
    pub d: Vec<PolyTheta>,
    pub ell: Vec<PolyTheta>,
    pub gamma: Vec<PolyTheta>,
}

/// Serialized constants: coefficient codes, lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CarlitzConstantsJson {
    pub d: Vec<Vec<u32>>,
    pub ell: Vec<Vec<u32>>,
    pub gamma: Vec<Vec<u32>>,
}

impl CarlitzConstants {
    pub fn to_json(&self) -> CarlitzConstantsJson {
        CarlitzConstantsJson {
            d: self.d.iter().map(poly_codes).collect(),
            ell: self.ell.iter().map(poly_codes).collect(),
            gamma: self.gamma.iter().map(poly_codes).collect(),
        }
    }
}

/// Carlitz constants needed for indices with parts up to `up_to`.
pub fn carlitz_constants(field: &FieldDesc, up_to: u64) -> Result<CarlitzConstants> {
    let q = field.q() as u64;
    let mut max_i = 0;
    while q.pow(max_i as u32 + 1) <= up_to.max(1) {
        max_i += 1;
    }
    let d = (0..=max_i).map(|i| carlitz_d(field, i)).collect::<Result<Vec<_>>>()?;
    let ell = (0..=max_i).map(|i| carlitz_ell(field, i)).collect::<Result<Vec<_>>>()?;
    let gamma = (1..=up_to)
        .map(|n| {
            let mut acc = PolyTheta::one(field);
            for (i, &c) in q_digits(q, n - 1).iter().enumerate() {
                if c > 0 {
                    acc = acc.mul(&d[i].pow(c))?;
                }
            }
            Ok(acc)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CarlitzConstants { d, ell, gamma })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::enumerate_monics;

    #[test]
    fn d_is_product_of_monics() {
        for q in [2, 3, 4] {
            let f = FieldDesc::with_order(q).unwrap();
            for i in 0..=2 {
                let prod = enumerate_monics(&f, i).unwrap().fold(PolyTheta::one(&f), |acc, a| acc.mul(&a).unwrap());
                assert_eq!(prod, carlitz_d(&f, i).unwrap(), "q={q} i={i}");
            }
        }
    }

    #[test]
    fn gamma_small_n_is_one() {
        for q in [2u64, 3, 4, 5] {
            let f = FieldDesc::with_order(q).unwrap();
            for n in 1..=q {
                assert!(carlitz_gamma(&f, n).unwrap().is_one());
            }
            assert_eq!(carlitz_gamma(&f, q + 1).unwrap(), carlitz_d(&f, 1).unwrap());
        }
    }

    #[test]
    fn ell_sign() {
        let f = FieldDesc::with_order(3).unwrap();
        let l2 = carlitz_l(&f, 2).unwrap();
        assert_eq!(carlitz_ell(&f, 2).unwrap(), l2);
        assert_eq!(carlitz_ell(&f, 1).unwrap(), carlitz_l(&f, 1).unwrap().neg());
        let c = carlitz_constants(&f, 10).unwrap();
        assert_eq!(c.gamma.len(), 10);
        assert_eq!(c.d.len(), 3);
    }
}
