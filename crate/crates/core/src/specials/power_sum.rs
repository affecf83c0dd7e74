use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::laurent::{theta_floor, LaurentL};
use crate::scalars::{monic_count, monic_from_index, FieldDesc, PolyTheta};
use crate::specials::carlitz::{carlitz_d, carlitz_ell, carlitz_l};

/// Default cap on the number of enumerated terms.
pub const DEFAULT_BUDGET: u64 = 1 << 22;

/// Environment variable overriding the enumeration budget.
pub const BUDGET_ENV: &str = "FFMZV_ENUM_BUDGET";

/// Budget from the environment, or the default.
pub fn default_budget() -> u64 {
    std::env::var(BUDGET_ENV).ok().and_then(|v| v.trim().parse().ok()).unwrap_or(DEFAULT_BUDGET)
}

/// How power sums are obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PowerSumMethod {
    /// Sum over every monic polynomial of the degree, under a budget.
    Enumeration { budget: u64 },
    /// Expansion through the coefficients of the Carlitz polynomial E_d.
    Expansion,
}

/// a^(-n) known down to `floor`.
pub(crate) fn inverse_power(a: &PolyTheta, n: u32, floor: i64) -> Result<LaurentL> {
    LaurentL::from_poly(&a.pow(n as u64)).inv_to(Some(floor))
}

/// S_d(n) = sum over monic a of degree d of a^(-n), to theta-precision `prec`,
/// by direct enumeration.
pub fn power_sum(field: &FieldDesc, d: usize, n: u32, prec: i64, budget: u64) -> Result<LaurentL> {
    if n == 0 {
        return Err(Error::InvalidArgument("power sums need n >= 1".into()));
    }
    let count = monic_count(field, d).filter(|&c| c <= budget);
    let Some(count) = count else {
        let required = (field.q() as u128).checked_pow(d as u32).unwrap_or(u128::MAX);
        return Err(Error::BudgetExceeded { required, budget });
    };
    let floor = theta_floor(field.q(), prec);
    let zero = LaurentL::zero_to(field, floor);
    (0..count)
        .into_par_iter()
        .map(|k| inverse_power(&monic_from_index(field, d, k), n, floor))
        .try_reduce(|| zero.clone(), |a, b| a.add(&b))
}

/// Lower bound for the theta-valuation of S_d(n): both n d and
/// q + q^2 + ... + q^d bound it from below.
pub fn power_sum_valuation_bound(q: u32, d: usize, n: u32) -> i64 {
    let mut geo: i64 = 0;
    let mut qk: i64 = 1;
    for _ in 0..d {
        qk = qk.saturating_mul(q as i64);
        geo = geo.saturating_add(qk);
    }
    geo.max(n as i64 * d as i64)
}

/// Coefficients gamma_i of e(y) = E_d(y) / D_d = sum_i gamma_i y^(q^i),
/// where E_d(y) = prod_{deg a < d} (y - a). Exact rationals as (num, den)
/// polynomial pairs with num = (-1)^(d-i).
pub fn carlitz_e_coefficients(field: &FieldDesc, d: usize) -> Result<Vec<(PolyTheta, PolyTheta)>> {
    (0..=d)
        .map(|i| {
            let sign = if (d - i).is_multiple_of(2) { field.one() } else { field.neg(field.one()) };
            let den = carlitz_d(field, i)?.mul(&carlitz_l(field, d - i)?.twist(i as u32)?)?;
            Ok((PolyTheta::constant(field, sign), den))
        })
        .collect()
}

/// S_d(n) for n = 1..=n_max via
/// sum_n S_d(n) y^(n-1) = gamma_0 / (1 - e(y)), to theta-precision `prec`.
pub fn power_sums_expansion(field: &FieldDesc, d: usize, n_max: u32, prec: i64) -> Result<Vec<LaurentL>> {
    let q = field.q();
    let floor = theta_floor(q, prec);
    let n_max = n_max as usize;
    if power_sum_valuation_bound(q, d, 1) > prec {
        return Ok(vec![LaurentL::zero_to(field, floor); n_max]);
    }
    let coeffs = carlitz_e_coefficients(field, d)?;
    let mut gammas: Vec<(usize, LaurentL)> = Vec::new();
    let mut qi = 1usize;
    for (num, den) in &coeffs {
        if qi > n_max {
            break;
        }
        let g = LaurentL::from_poly(num).mul_to(&LaurentL::from_poly(den).inv_to(Some(floor))?, floor)?;
        gammas.push((qi, g));
        qi = qi.saturating_mul(q as usize);
    }
    let gamma0 = gammas[0].1.clone();
    // G(y) = 1 / (1 - e(y)); S_d(n) = gamma_0 * G_{n-1}.
    let mut g: Vec<LaurentL> = Vec::with_capacity(n_max);
    g.push(LaurentL::one(field).truncate(floor)?);
    for m in 1..n_max {
        let mut acc = LaurentL::zero_to(field, floor);
        for (step, gi) in &gammas {
            if *step <= m {
                acc = acc.add(&gi.mul_to(&g[m - step], floor)?)?;
            }
        }
        g.push(acc);
    }
    g.iter().map(|x| gamma0.mul_to(x, floor)).collect()
}

/// S_d(n) through the Carlitz expansion.
pub fn power_sum_expansion(field: &FieldDesc, d: usize, n: u32, prec: i64) -> Result<LaurentL> {
    if n == 0 {
        return Err(Error::InvalidArgument("power sums need n >= 1".into()));
    }
    Ok(power_sums_expansion(field, d, n, prec)?.pop().expect("n >= 1"))
}

/// Dispatches on the method.
pub fn power_sum_with(field: &FieldDesc, d: usize, n: u32, prec: i64, method: PowerSumMethod) -> Result<LaurentL> {
    match method {
        PowerSumMethod::Enumeration { budget } => power_sum(field, d, n, prec, budget),
        PowerSumMethod::Expansion => power_sum_expansion(field, d, n, prec),
    }
}

/// For n <= q the power sum is 1 / l_d^n.
pub fn power_sum_small_exponent(field: &FieldDesc, d: usize, n: u32, prec: i64) -> Result<LaurentL> {
    if n > field.q() {
        return Err(Error::InvalidArgument("closed form only holds for n <= q".into()));
    }
    let floor = theta_floor(field.q(), prec);
    LaurentL::from_poly(&carlitz_ell(field, d)?.pow(n as u64)).inv_to(Some(floor))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::RationalK;
    use crate::scalars::enumerate_monics;

    #[test]
    fn s1_of_1_over_f2() {
        let f = FieldDesc::with_order(2).unwrap();
        let s = power_sum(&f, 1, 1, 12, DEFAULT_BUDGET).unwrap();
        let v = s.valuation_theta().unwrap();
        assert_eq!(v.reduced(), (2, 1));
    }

    #[test]
    fn e_coefficients_match_product() {
        for q in [2u64, 3] {
            let f = FieldDesc::with_order(q).unwrap();
            for d in 0..=2usize {
                // E_d(y) = prod_{deg a < d} (y - a), as a polynomial in y over F_q[theta].
                let mut poly: Vec<PolyTheta> = vec![PolyTheta::one(&f)];
                for k in 0..(q.pow(d as u32)) {
                    let a = crate::scalars::PolyTheta::new(
                        &f,
                        crate::specials::carlitz::q_digits(q, k)
                            .iter()
                            .map(|&c| crate::scalars::Fq(c as u32))
                            .collect(),
                    );
                    let mut next = vec![PolyTheta::zero(&f); poly.len() + 1];
                    for (j, c) in poly.iter().enumerate() {
                        next[j + 1] = next[j + 1].add(c).unwrap();
                        next[j] = next[j].sub(&c.mul(&a).unwrap()).unwrap();
                    }
                    poly = next;
                }
                let dd = RationalK::from_poly(carlitz_d(&f, d).unwrap());
                let coeffs = carlitz_e_coefficients(&f, d).unwrap();
                for (i, (num, den)) in coeffs.iter().enumerate() {
                    let deg = q.pow(i as u32) as usize;
                    let expect = RationalK::from_poly(poly[deg].clone()).div(&dd).unwrap();
                    assert_eq!(RationalK::new(num.clone(), den.clone()).unwrap(), expect, "q={q} d={d} i={i}");
                }
                let nonzero: Vec<usize> = poly.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(j, _)| j).collect();
                assert!(nonzero.iter().all(|&j| (0..=d).any(|i| q.pow(i as u32) as usize == j)));
            }
        }
    }

    #[test]
    fn expansion_matches_enumeration() {
        for q in [2u64, 3, 4] {
            let f = FieldDesc::with_order(q).unwrap();
            for d in 0..=3usize {
                if q.pow(d as u32) > 100 {
                    continue;
                }
                let fast = power_sums_expansion(&f, d, 9, 30).unwrap();
                for n in 1..=9u32 {
                    let slow = power_sum(&f, d, n, 30, DEFAULT_BUDGET).unwrap();
                    assert!(slow.agrees_with(&fast[n as usize - 1]), "q={q} d={d} n={n}");
                }
            }
        }
    }

    #[test]
    fn small_exponent_closed_form() {
        let f = FieldDesc::with_order(3).unwrap();
        for d in 0..3 {
            for n in 1..=3 {
                let a = power_sum(&f, d, n, 25, DEFAULT_BUDGET).unwrap();
                let b = power_sum_small_exponent(&f, d, n, 25).unwrap();
                assert!(a.agrees_with(&b));
            }
        }
    }

    #[test]
    fn budget_is_enforced() {
        let f = FieldDesc::with_order(3).unwrap();
        let err = power_sum(&f, 5, 1, 10, 100).unwrap_err();
        assert_eq!(err, Error::BudgetExceeded { required: 243, budget: 100 });
        assert_eq!(enumerate_monics(&f, 5).unwrap().count(), 243);
    }
}
