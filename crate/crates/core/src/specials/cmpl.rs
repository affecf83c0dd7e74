use crate::error::{Error, Result};
use crate::laurent::{theta_floor, LaurentL, RationalK};
use crate::scalars::FieldDesc;
use crate::specials::carlitz::carlitz_ell;
use crate::specials::Index;

/// Convergence condition |z| < |theta|^(n q / (q - 1)), stated on s-valuations:
/// v_s(z) > -n q. This is the only place the constant appears.
pub fn within_norm_bound(v_s: i64, n: u32, q: u32) -> bool {
    v_s > -(n as i64) * q as i64
}

/// Checks every coordinate against the norm bound; zero coordinates pass.
pub fn check_domain(index: &Index, valuations: &[Option<i64>], q: u32) -> Result<()> {
    if valuations.len() != index.depth() {
        return Err(Error::InvalidArgument(format!(
            "{} coordinates for an index of depth {}",
            valuations.len(),
            index.depth()
        )));
    }
    for (j, v) in valuations.iter().enumerate() {
        let n = index.part(j + 1);
        if let Some(v) = *v {
            if !within_norm_bound(v, n, q) {
                return Err(Error::Domain {
                    coordinate: j + 1,
                    detail: format!("v_s = {v} but the bound needs v_s > {}", -(n as i64) * q as i64),
                });
            }
        }
    }
    Ok(())
}

/// v_s of the level-i term z^(q^i) / l_i^n.
pub(crate) fn level_valuation(v_s: i64, n: u32, q: u32, i: u32) -> i64 {
    let qi = (q as i64).saturating_pow(i);
    let nq = n as i64 * q as i64;
    qi.saturating_mul(v_s + nq).saturating_sub(nq)
}

/// Carlitz multiple polylogarithm
/// Li_index(z) = sum_{i_1 > ... > i_d >= 0} prod_j z_j^(q^(i_j)) / l_(i_j)^(n_j),
/// to theta-precision `prec`.
pub fn cmpl_eval(field: &FieldDesc, index: &Index, z: &[RationalK], prec: i64) -> Result<LaurentL> {
    index.require_nonempty()?;
    let q = field.q();
    let vals: Vec<Option<i64>> = z.iter().map(|x| x.valuation_s()).collect();
    check_domain(index, &vals, q)?;
    let floor = theta_floor(q, prec);
    if vals.iter().any(|v| v.is_none()) {
        return Ok(LaurentL::zero(field));
    }
    let vals: Vec<i64> = vals.into_iter().map(|v| v.unwrap()).collect();
    let d = index.depth();
    // Terms with i_1 = i have valuation >= level_valuation(v_1, i) + sum_{j >= 2} v_j.
    let rest: i64 = vals[1..].iter().sum();
    let guard: i64 = vals.iter().map(|&v| (-v).max(0)).sum::<i64>() + 1;
    let work = floor - guard;
    let mut levels = (d as u32).saturating_sub(1);
    while -(level_valuation(vals[0], index.part(1), q, levels + 1) + rest) >= work {
        levels += 1;
    }
    let z_series = z.iter().map(|x| x.to_laurent(work)).collect::<Result<Vec<_>>>()?;
    // term[j][i] = z_j^(q^i) / l_i^(n_j)
    let mut terms: Vec<Vec<LaurentL>> = vec![Vec::new(); d];
    for i in 0..=levels {
        let ell = LaurentL::from_poly(&carlitz_ell(field, i as usize)?);
        for j in 0..d {
            let n = index.part(j + 1);
            let zi = z_series[j].frobenius_power_to(i, Some(work - (-vals[j]).max(0)))?;
            let den = ell.pow(n as i64)?;
            let inv = den.inv_to(Some(work - (q as i64).pow(i) * (-vals[j]).max(0)))?;
            terms[j].push(zi.mul_to(&inv, work)?);
        }
    }
    // P_d(i) = term_d(i); P_j(i) = term_j(i) * sum_{i' < i} P_{j+1}(i').
    let mut p = terms[d - 1].clone();
    for j in (0..d - 1).rev() {
        let mut prefix = LaurentL::zero_to(field, work);
        let mut next = Vec::with_capacity(p.len());
        for i in 0..p.len() {
            next.push(terms[j][i].mul_to(&prefix, work)?);
            prefix = prefix.add(&p[i])?;
        }
        p = next;
    }
    let total = p.iter().try_fold(LaurentL::zero_to(field, work), |acc, x| acc.add(x))?;
    total.truncate(floor)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::PolyTheta;
    use crate::specials::mzv::mzv_bruteforce;
    use crate::specials::power_sum::DEFAULT_BUDGET;

    #[test]
    fn domain_error_names_coordinate() {
        let f = FieldDesc::with_order(3).unwrap();
        let z = RationalK::from_poly(PolyTheta::monomial(&f, f.one(), 2));
        let err = cmpl_eval(&f, &"1".parse().unwrap(), &[z], 10).unwrap_err();
        assert!(matches!(err, Error::Domain { coordinate: 1, .. }));
        let ok = RationalK::theta(&f);
        assert!(cmpl_eval(&f, &"1".parse().unwrap(), &[ok], 10).is_ok());
    }

    #[test]
    fn polylog_at_one_is_zeta() {
        for q in [2u64, 3] {
            let f = FieldDesc::with_order(q).unwrap();
            for n in 1..=q as u32 {
                let nu: Index = Index::new(vec![n]).unwrap();
                let li = cmpl_eval(&f, &nu, &[RationalK::one(&f)], 20).unwrap();
                let z = mzv_bruteforce(&f, &nu, 20, DEFAULT_BUDGET).unwrap();
                assert!(li.agrees_with(&z), "q={q} n={n}");
            }
        }
    }

    #[test]
    fn zero_coordinate() {
        let f = FieldDesc::with_order(2).unwrap();
        let v = cmpl_eval(&f, &"1,1".parse().unwrap(), &[RationalK::one(&f), RationalK::zero(&f)], 10).unwrap();
        assert!(v.is_exact_zero());
    }
}
