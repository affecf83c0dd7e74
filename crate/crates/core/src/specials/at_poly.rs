use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::laurent::{theta_floor, LaurentL, RationalK};
use crate::scalars::{FieldDesc, PolyTheta};
use crate::specials::carlitz::{carlitz_d, carlitz_gamma, q_digits};
use crate::specials::cmpl::within_norm_bound;
use crate::specials::lseries::lseries_value_at_theta;
use crate::specials::mzv::mzv_bruteforce;
use crate::specials::power_sum::default_budget;
use crate::specials::Index;
use crate::tate::KtPoly;

/// Default theta-precision of the identity check.
pub const DEFAULT_CHECK_PRECISION: i64 = 20;

/// Polynomial in t with coefficients in F_q[theta], indexed by t-degree.
#[derive(Clone, Debug)]
struct BiPoly {
    field: FieldDesc,
    coeffs: Vec<PolyTheta>,
}

impl BiPoly {
    fn new(field: &FieldDesc, mut coeffs: Vec<PolyTheta>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        BiPoly { field: field.clone(), coeffs }
    }

    fn one(field: &FieldDesc) -> Self {
        Self::new(field, vec![PolyTheta::one(field)])
    }

    fn add(&self, other: &Self) -> Result<Self> {
        let n = self.coeffs.len().max(other.coeffs.len());
        let z = PolyTheta::zero(&self.field);
        let cs = (0..n)
            .map(|k| self.coeffs.get(k).unwrap_or(&z).add(other.coeffs.get(k).unwrap_or(&z)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::new(&self.field, cs))
    }

    fn mul(&self, other: &Self) -> Result<Self> {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Ok(Self::new(&self.field, Vec::new()));
        }
        let mut cs = vec![PolyTheta::zero(&self.field); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    cs[i + j] = cs[i + j].add(&a.mul(b)?)?;
                }
            }
        }
        Ok(Self::new(&self.field, cs))
    }

    /// A univariate polynomial read as a polynomial in t.
    fn from_t_poly(p: &PolyTheta) -> Self {
        let f = p.field();
        Self::new(f, p.coeffs().iter().map(|&c| PolyTheta::constant(f, c)).collect())
    }

    /// Exact division by a monic polynomial in t alone.
    fn div_exact_t(&self, divisor: &PolyTheta) -> Result<Self> {
        let f = &self.field;
        let dd = divisor.degree().ok_or(Error::DivisionByZero)?;
        if !divisor.is_monic() {
            return Err(Error::InvalidArgument("divisor must be monic in t".into()));
        }
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return if rem.is_empty() {
                Ok(Self::new(f, Vec::new()))
            } else {
                Err(Error::IdentityCheckFailed("non-exact division in F_q[theta][t]".into()))
            };
        }
        let mut quot = vec![PolyTheta::zero(f); rem.len() - dd];
        for k in (dd..rem.len()).rev() {
            let c = rem[k].clone();
            if c.is_zero() {
                continue;
            }
            for (i, &b) in divisor.coeffs().iter().enumerate() {
                if !b.is_zero() {
                    rem[k - dd + i] = rem[k - dd + i].sub(&c.scale(b))?;
                }
            }
            quot[k - dd] = c;
        }
        if rem[..dd].iter().any(|c| !c.is_zero()) {
            return Err(Error::IdentityCheckFailed("non-exact division in F_q[theta][t]".into()));
        }
        Ok(Self::new(f, quot))
    }

    fn to_ktpoly(&self) -> KtPoly {
        KtPoly::new(&self.field, self.coeffs.iter().map(|c| RationalK::from_poly(c.clone())).collect())
    }
}

/// Candidate H_m from the generating function
/// (1 - sum_i prod_{j=1}^{i} (t^(q^i) - theta^(q^j)) / D_i(t) x^(q^i))^(-1)
///   = sum_m H_m / Gamma_{m+1}(t) x^m,
/// where D_i(t) and Gamma_{m+1}(t) have theta replaced by t.
fn generating_candidate(field: &FieldDesc, m: u64) -> Result<KtPoly> {
    let q = field.q() as u64;
    let mut steps: Vec<u64> = Vec::new();
    let mut qi = 1u64;
    while qi <= m.max(1) {
        steps.push(qi);
        qi *= q;
    }
    let d_t: Vec<PolyTheta> = (0..steps.len()).map(|i| carlitz_d(field, i)).collect::<Result<_>>()?;
    let numer: Vec<BiPoly> = steps
        .iter()
        .enumerate()
        .map(|(i, &qi)| {
            let mut acc = BiPoly::one(field);
            for j in 1..=i {
                let qj = q.pow(j as u32) as usize;
                let mut cs = vec![PolyTheta::zero(field); qi as usize + 1];
                cs[0] = PolyTheta::monomial(field, field.one(), qj).neg();
                cs[qi as usize] = cs[qi as usize].add(&PolyTheta::one(field))?;
                acc = acc.mul(&BiPoly::new(field, cs))?;
            }
            Ok(acc)
        })
        .collect::<Result<_>>()?;
    // Delta_k = prod_i D_i(t)^floor(k / q^i), so that c_k = A_k / Delta_k.
    let delta = |k: u64| -> Result<PolyTheta> {
        let mut acc = PolyTheta::one(field);
        for (i, &qi) in steps.iter().enumerate() {
            acc = acc.mul(&d_t[i].pow(k / qi))?;
        }
        Ok(acc)
    };
    let mut a: Vec<BiPoly> = vec![BiPoly::one(field)];
    for k in 1..=m {
        let dk = delta(k)?;
        let mut acc = BiPoly::new(field, Vec::new());
        for (i, &qi) in steps.iter().enumerate() {
            if qi > k {
                break;
            }
            let cofactor = dk.div_exact(&d_t[i].mul(&delta(k - qi)?)?)?;
            let term = numer[i].mul(&a[(k - qi) as usize])?.mul(&BiPoly::from_t_poly(&cofactor))?;
            acc = acc.add(&term)?;
        }
        a.push(acc);
    }
    // H_m = Gamma_{m+1}(t) A_m / Delta_m.
    let digits = q_digits(q, m);
    let mut rest = PolyTheta::one(field);
    for (i, &qi) in steps.iter().enumerate() {
        let c = digits.get(i).copied().unwrap_or(0);
        rest = rest.mul(&d_t[i].pow(m / qi - c))?;
    }
    Ok(a[m as usize].div_exact_t(&rest)?.to_ktpoly())
}

type CacheKey = (u32, u32, Vec<u32>, u32, i64);

fn cache() -> &'static Mutex<HashMap<CacheKey, KtPoly>> {
    static CACHE: OnceLock<Mutex<HashMap<CacheKey, KtPoly>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Checks L_{H, (n)}(theta) = Gamma_n zeta(n) against direct enumeration.
pub fn verify_at_identity(field: &FieldDesc, n: u32, h: &KtPoly, prec: i64) -> Result<bool> {
    let nu = Index::new(vec![n])?;
    let gamma = carlitz_gamma(field, n as u64)?;
    let extra = gamma.degree().unwrap_or(0) as i64;
    let zeta = mzv_bruteforce(field, &nu, prec + extra, default_budget())?;
    let rhs = LaurentL::from_poly(&gamma).mul(&zeta)?.truncate(theta_floor(field.q(), prec))?;
    let lhs = lseries_value_at_theta(field, &nu, std::slice::from_ref(h), prec)?;
    Ok(lhs.agrees_with(&rhs))
}

/// The Anderson-Thakur polynomial H_{n-1}, returned only after its defining
/// identity has been checked at theta-precision `check_prec`.
pub fn at_polynomial(field: &FieldDesc, n: u32, check_prec: i64) -> Result<KtPoly> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    let key = (field.p(), field.m(), field.modulus().to_vec(), n, check_prec);
    if let Some(h) = cache().lock().expect("cache lock").get(&key) {
        return Ok(h.clone());
    }
    let h = if n <= field.q() { KtPoly::one(field) } else { generating_candidate(field, n as u64 - 1)? };
    let v = h.min_valuation_s().ok_or_else(|| Error::IdentityCheckFailed("H vanishes".into()))?;
    if !within_norm_bound(v, n, field.q()) {
        return Err(Error::IdentityCheckFailed(format!("H_{} violates the norm bound (v_s = {v})", n - 1)));
    }
    if !verify_at_identity(field, n, &h, check_prec)? {
        return Err(Error::IdentityCheckFailed(format!(
            "L_(H, {n})(theta) differs from Gamma_{n} zeta({n}) at precision {check_prec}"
        )));
    }
    cache().lock().expect("cache lock").insert(key, h.clone());
    Ok(h)
}
