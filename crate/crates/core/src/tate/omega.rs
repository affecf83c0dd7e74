use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::laurent::{theta_floor, LaurentL};
use crate::scalars::FieldDesc;
use crate::tate::{SeriesPrecision, TSeries, Tail};

/// Anderson-Thakur function
/// Omega = s^(-q) * prod_{i >= 1} (1 - t / theta^(q^i)),
/// with the coefficient of t^k known down to `prec.floor_at(k)`.
pub fn omega(field: &FieldDesc, prec: &SeriesPrecision) -> Result<TSeries> {
    let q = field.q() as i64;
    let t_deg = prec.t_deg;
    let lowest = prec.min_floor();
    let mut coeffs: Vec<LaurentL> = (0..=t_deg)
        .map(|k| {
            let c = if k == 0 { LaurentL::monomial(field, field.one(), -q) } else { LaurentL::zero(field) };
            c.truncate(prec.floor_at(k))
        })
        .collect::<Result<_>>()?;
    let mut qi = q;
    loop {
        // Factor i can only reach exponents at most -q - (q-1) q^i.
        if -q - (q - 1) * qi < lowest {
            break;
        }
        let shift = LaurentL::theta_power(field, -qi);
        for k in (1..=t_deg).rev() {
            let term = coeffs[k - 1].mul_to(&shift, prec.floor_at(k))?;
            coeffs[k] = coeffs[k].sub(&term)?;
        }
        qi = qi.checked_mul(q).ok_or_else(|| Error::Unsupported("precision too large".into()))?;
    }
    Ok(TSeries::new(field, coeffs, Tail::Bounded { base: q, slope: q * (q - 1) }))
}

/// Omega with every coefficient to theta-precision `n`.
pub fn omega_uniform(field: &FieldDesc, t_deg: usize, n: i64) -> Result<TSeries> {
    omega(field, &SeriesPrecision::uniform(field, t_deg, n))
}

/// Carlitz period pi~ = s^q * prod_{i >= 1} (1 - theta^(1 - q^i))^(-1),
/// to absolute theta-precision `n`.
pub fn carlitz_pi(field: &FieldDesc, n: i64) -> Result<LaurentL> {
    let q = field.q() as i64;
    let floor = theta_floor(field.q(), n);
    let unit_floor = floor - q;
    let mut unit = LaurentL::one(field).truncate(unit_floor)?;
    let mut qi = q;
    loop {
        let step = (q - 1) * (1 - qi);
        if step < unit_floor {
            break;
        }
        let mut geo = LaurentL::zero(field);
        let mut m = 0i64;
        while m * step >= unit_floor {
            geo = geo.add(&LaurentL::theta_power(field, m * (1 - qi)))?;
            m += 1;
        }
        unit = unit.mul_to(&geo, unit_floor)?;
        qi = qi.checked_mul(q).ok_or_else(|| Error::Unsupported("precision too large".into()))?;
    }
    Ok(unit.shift(q))
}

/// Outcome of checking Omega = (t - theta^q) Omega^(1) on a window.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OmegaReport {
    pub holds: bool,
    /// (t-degree, s-exponent) of the first mismatch.
    pub first_difference: Option<(usize, i64)>,
    pub t_deg: usize,
    pub s_floor: i64,
}

/// Checks the functional equation with every coefficient of t^0..t^T
/// compared down to theta-precision `n`. With `inject_fault` one
/// coefficient of Omega is changed first.
pub fn omega_functional_check(field: &FieldDesc, t_deg: usize, n: i64, inject_fault: bool) -> Result<OmegaReport> {
    let q = field.q() as i64;
    let prec = SeriesPrecision::uniform(field, t_deg, n);
    let mut om = omega(field, &prec.guarded(q * (q - 1)))?;
    if inject_fault {
        om.coeffs_mut()[0].perturb(prec.floor, field.one());
    }
    let rhs = TSeries::t_minus(&LaurentL::theta_power(field, q)).mul(&om.twist(1)?)?.truncate_to(&prec)?;
    let lhs = om.truncate_to(&prec)?;
    let first_difference = lhs.first_difference(&rhs);
    Ok(OmegaReport { holds: first_difference.is_none(), first_difference, t_deg, s_floor: prec.floor })
}

/// Omega(theta) to theta-precision `n`, summing the series in t.
pub fn omega_at_theta(field: &FieldDesc, n: i64) -> Result<LaurentL> {
    let prec = SeriesPrecision::for_evaluation(field, 0, n);
    let t_deg = omega(field, &prec)?.required_t_for_eval(n)?;
    omega(field, &SeriesPrecision { t_deg, ..prec })?.eval_at_theta(n)
}

/// Whether Omega(theta) * pi~ = 1 down to theta-precision `n`.
pub fn pi_reciprocal_check(field: &FieldDesc, n: i64) -> Result<bool> {
    let work = n + 2;
    let prod = omega_at_theta(field, work)?.mul(&carlitz_pi(field, work)?)?;
    Ok(prod.truncate(theta_floor(field.q(), n))?.agrees_with(&LaurentL::one(field)))
}
