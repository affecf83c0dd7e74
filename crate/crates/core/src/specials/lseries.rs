use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::laurent::{LaurentL, RationalK};
use crate::scalars::FieldDesc;
use crate::specials::cmpl::{check_domain, level_valuation};
use crate::specials::Index;
use crate::tate::{required_t, KtPoly, SeriesPrecision, TSeries, Tail};

/// Coordinates of a point: t-polynomials over F_q(theta).
pub type TPoint = Vec<KtPoly>;

/// A point whose coordinates do not involve t.
pub fn scalar_point(z: &[RationalK]) -> TPoint {
    z.iter().map(|x| KtPoly::constant(x.clone())).collect()
}

const MAX_ATTEMPTS: usize = 5;

/// Growth certificate of L_{u, index}: with E the total t-degree of u,
/// v_s(coefficient of t^k) >= sum_j v_s(u_j) - q(q-1) E + q(q-1) k.
pub fn lseries_tail(field: &FieldDesc, index: &Index, u: &[KtPoly]) -> Tail {
    let q = field.q() as i64;
    let slope = q * (q - 1);
    if index.depth() == 0 {
        return Tail::Zero;
    }
    let mut base = 0i64;
    for x in u {
        match x.min_valuation_s() {
            Some(v) => base += v - slope * x.degree().unwrap_or(0) as i64,
            None => return Tail::Zero,
        }
    }
    Tail::Bounded { base, slope }
}

fn validate(field: &FieldDesc, index: &Index, u: &[KtPoly]) -> Result<Option<Vec<i64>>> {
    if u.len() != index.depth() {
        return Err(Error::InvalidArgument(format!(
            "{} coordinates for an index of depth {}",
            u.len(),
            index.depth()
        )));
    }
    if u.iter().any(|x| x.field() != field) {
        return Err(Error::FieldMismatch);
    }
    let vals: Vec<Option<i64>> = u.iter().map(|x| x.min_valuation_s()).collect();
    check_domain(index, &vals, field.q())?;
    if vals.iter().any(|v| v.is_none()) {
        return Ok(None);
    }
    Ok(Some(vals.into_iter().map(|v| v.unwrap()).collect()))
}

/// L_{u, index}(t) = sum_{i_1 > ... > i_d >= 0} prod_j u_j^(i_j) / Q_(i_j)^(n_j)
/// with Q_i = prod_{k=1}^{i} (t - theta^(q^k)), truncated to `prec`.
pub fn lseries_build(field: &FieldDesc, index: &Index, u: &[KtPoly], prec: &SeriesPrecision) -> Result<TSeries> {
    let Some(vals) = validate(field, index, u)? else {
        return Ok(TSeries::zero(field));
    };
    if index.depth() == 0 {
        return Ok(TSeries::one(field));
    }
    let tail = lseries_tail(field, index, u);
    let mut guard: i64 = vals.iter().map(|&v| (-v).max(0)).sum::<i64>() + 2;
    let mut last_err = None;
    for _ in 0..MAX_ATTEMPTS {
        let raw = build_guarded(field, index, u, &vals, &prec.guarded(guard))?;
        match raw.truncate_to(prec) {
            Ok(mut s) => {
                s.set_tail(tail);
                return Ok(s);
            }
            Err(e @ Error::InsufficientPrecision { .. }) => {
                last_err = Some(e);
                guard *= 2;
            }
            Err(e) => return Err(e),
        }
    }
    Err(last_err.expect("at least one attempt"))
}

fn build_guarded(field: &FieldDesc, index: &Index, u: &[KtPoly], vals: &[i64], work: &SeriesPrecision) -> Result<TSeries> {
    let q = field.q();
    let d = index.depth();
    let rest: i64 = vals[1..].iter().sum();
    let lowest = work.min_floor();
    let mut levels = (d as u32).saturating_sub(1);
    while -(level_valuation(vals[0], index.part(1), q, levels + 1) + rest) >= lowest {
        levels += 1;
    }
    let worst_top = vals.iter().map(|&v| (-v).max(0)).max().unwrap_or(0);
    let extra = (q as i64).saturating_pow(levels).saturating_mul(worst_top);
    let inv_prec = work.guarded(extra);
    let mut parts: Vec<u32> = index.parts().to_vec();
    parts.sort_unstable();
    parts.dedup();

    let mut inv_q = TSeries::one(field).truncate_to(&inv_prec)?;
    // terms[j][i] = u_j^(i) / Q_i^(n_j)
    let mut terms: Vec<Vec<TSeries>> = vec![Vec::new(); d];
    for i in 0..=levels {
        if i > 0 {
            let c = LaurentL::theta_power(field, (q as i64).pow(i));
            inv_q = inv_q.mul_to(&inverse_linear(&c, &inv_prec)?, &inv_prec)?;
        }
        let powers: Vec<(u32, TSeries)> = parts
            .iter()
            .map(|&n| Ok((n, inv_q.pow_to(n as u64, &inv_prec)?)))
            .collect::<Result<_>>()?;
        for j in 0..d {
            let n = index.part(j + 1);
            let qn = &powers.iter().find(|(m, _)| *m == n).unwrap().1;
            let tw = u[j].twisted_tseries(i, work)?;
            terms[j].push(tw.mul_to(qn, work)?);
        }
    }
    let mut p = terms[d - 1].clone();
    for j in (0..d - 1).rev() {
        let mut prefix: Option<TSeries> = None;
        let mut next = Vec::with_capacity(p.len());
        for i in 0..p.len() {
            next.push(match &prefix {
                Some(c) => terms[j][i].mul_to(c, work)?,
                None => TSeries::zero(field),
            });
            prefix = Some(match prefix {
                Some(c) => c.add(&p[i])?,
                None => p[i].clone(),
            });
        }
        p = next;
    }
    let mut total = TSeries::zero(field);
    for x in &p {
        total = total.add(x)?;
    }
    let zero = TSeries::zero(field).truncate_to(work)?;
    let total = total.add(&zero)?;
    Ok(total)
}

/// 1 / (t - c) = -sum_m c^(-(m+1)) t^m, with exact monomial coefficients
/// when c is a monomial.
fn inverse_linear(c: &LaurentL, prec: &SeriesPrecision) -> Result<TSeries> {
    let f = c.field();
    let ci = c.inv()?;
    let mut coeffs = Vec::with_capacity(prec.t_deg + 1);
    let mut pow = ci.clone();
    for k in 0..=prec.t_deg {
        coeffs.push(pow.neg().clip(prec.floor_at(k)));
        pow = pow.mul(&ci)?;
    }
    let v = ci.valuation_lower_bound().unwrap_or(0);
    Ok(TSeries::new(f, coeffs, Tail::Bounded { base: v, slope: v }))
}

/// t-truncation and precision for evaluating L_{u, index} at theta.
pub fn evaluation_precision(field: &FieldDesc, index: &Index, u: &[KtPoly], prec: i64) -> Result<SeriesPrecision> {
    let t_deg = match lseries_tail(field, index, u) {
        Tail::Bounded { base, slope } => required_t(field.q(), base, slope, prec)?,
        _ => 0,
    };
    Ok(SeriesPrecision::for_evaluation(field, t_deg, prec))
}

/// L_{u, index}(theta) to theta-precision `prec`, choosing the t-truncation
/// from the growth certificate.
pub fn lseries_value_at_theta(field: &FieldDesc, index: &Index, u: &[KtPoly], prec: i64) -> Result<LaurentL> {
    let p = evaluation_precision(field, index, u, prec)?;
    lseries_build(field, index, u, &p)?.eval_at_theta(prec)
}

/// Outcome of checking (t - theta^q)^wt L = u_d (t - theta^q)^(n_d) L'^(1) + L^(1),
/// where L' drops the last coordinate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecursionReport {
    pub holds: bool,
    pub first_difference: Option<(usize, i64)>,
    pub t_deg_checked: usize,
    pub window_floor: Option<i64>,
}

/// Verifies the twisted recursion on the window requested by `prec`.
pub fn lseries_recursion_check(field: &FieldDesc, index: &Index, u: &[KtPoly], prec: &SeriesPrecision) -> Result<RecursionReport> {
    lseries_recursion_check_with(field, index, u, prec, false)
}

/// As [`lseries_recursion_check`]; with `inject_fault` the constant term of
/// L is changed at the bottom of the window before comparing.
pub fn lseries_recursion_check_with(
    field: &FieldDesc,
    index: &Index,
    u: &[KtPoly],
    prec: &SeriesPrecision,
    inject_fault: bool,
) -> Result<RecursionReport> {
    index.require_nonempty()?;
    let q = field.q() as i64;
    let d = index.depth();
    let wt = index.weight();
    let guard = q * (q - 1) * wt as i64 + u.iter().filter_map(|x| x.min_valuation_s()).map(|v| (-v).max(0) * q).sum::<i64>();
    let work = prec.guarded(guard);
    let mut l = lseries_build(field, index, u, &work)?;
    if inject_fault {
        l.coeffs_mut()[0].perturb(prec.floor, field.one());
    }
    let head = Index::new(index.parts()[..d - 1].to_vec())?;
    let l_head = lseries_build(field, &head, &u[..d - 1], &work)?;
    let lin = TSeries::t_minus(&LaurentL::theta_power(field, q));
    let lin_pow = |e: u64| -> Result<TSeries> {
        let mut acc = TSeries::one(field);
        for _ in 0..e {
            acc = acc.mul(&lin)?;
        }
        Ok(acc)
    };
    let lhs = lin_pow(wt)?.mul(&l)?;
    let ud = u[d - 1].to_tseries(&work)?;
    let rhs = ud.mul(&lin_pow(index.part(d) as u64)?)?.mul(&l_head.twist(1)?)?.add(&l.twist(1)?)?;
    let lhs = lhs.truncate_to(prec)?;
    let rhs = rhs.truncate_to(prec)?;
    let first_difference = lhs.first_difference(&rhs);
    let (len, window_floor) = lhs.common_window(&rhs);
    Ok(RecursionReport {
        holds: first_difference.is_none(),
        first_difference,
        t_deg_checked: len.saturating_sub(1),
        window_floor,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::PolyTheta;
    use crate::specials::cmpl::cmpl_eval;

    fn idx(s: &str) -> Index {
        s.parse().unwrap()
    }

    #[test]
    fn matches_polylog_at_theta() {
        for q in [2u64, 3] {
            let f = FieldDesc::with_order(q).unwrap();
            let th = RationalK::theta(&f);
            let one = RationalK::one(&f);
            for (nu, z) in [("1", vec![one.clone()]), ("2", vec![th.clone()]), ("1,2", vec![one.clone(), th.clone()])] {
                let nu = idx(nu);
                let a = lseries_value_at_theta(&f, &nu, &scalar_point(&z), 20).unwrap();
                let b = cmpl_eval(&f, &nu, &z, 20).unwrap();
                assert!(a.agrees_with(&b), "q={q} {nu}");
            }
        }
    }

    #[test]
    fn recursion_holds() {
        let f = FieldDesc::with_order(3).unwrap();
        let u = vec![
            KtPoly::constant(RationalK::one(&f)),
            KtPoly::new(&f, vec![RationalK::theta(&f), RationalK::one(&f)]),
        ];
        let prec = SeriesPrecision::uniform(&f, 6, 30);
        let rep = lseries_recursion_check(&f, &idx("1,2"), &u, &prec).unwrap();
        assert!(rep.holds, "{rep:?}");
        assert_eq!(rep.t_deg_checked, 6);
    }

    #[test]
    fn domain_violation() {
        let f = FieldDesc::with_order(3).unwrap();
        let big = KtPoly::constant(RationalK::from_poly(PolyTheta::monomial(&f, f.one(), 2)));
        let err = lseries_build(&f, &idx("1"), &[big], &SeriesPrecision::uniform(&f, 3, 10)).unwrap_err();
        assert!(matches!(err, Error::Domain { coordinate: 1, .. }));
    }
}
