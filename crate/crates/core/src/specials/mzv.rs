use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::laurent::{theta_floor, LaurentL};
use crate::scalars::{monic_from_index, FieldDesc};
use crate::specials::power_sum::{
    inverse_power, power_sum, power_sum_valuation_bound, power_sums_expansion, PowerSumMethod,
};
use crate::specials::Index;

/// Largest D with n_1 D + sum_{i >= 2} n_i (d - i) <= N: terms whose leading
/// degree exceeds it have valuation above the precision.
pub fn degree_bound(index: &Index, prec: i64) -> Option<usize> {
    let d = index.depth();
    let rest: i64 = (2..=d).map(|i| index.part(i) as i64 * (d - i) as i64).sum();
    let n1 = index.part(1) as i64;
    let avail = prec - rest;
    (avail >= n1 * (d as i64 - 1)).then(|| (avail / n1) as usize)
}

/// Strictly decreasing degree tuples D_1 > ... > D_d >= 0 whose terms can
/// survive at precision `prec`. A tuple with sum_i n_i D_i = V and D_1 + V > prec
/// sums to zero: the first coordinate's terms then depend only on the top
/// prec - V coefficients, so they come in classes of size divisible by q.
fn surviving_degree_tuples(index: &Index, prec: i64) -> Vec<Vec<usize>> {
    let d = index.depth();
    let Some(dmax) = degree_bound(index, prec) else {
        return Vec::new();
    };
    let parts = index.parts();
    let mut out = Vec::new();
    fn rec(
        pos: usize,
        upper: usize,
        cur: &mut Vec<usize>,
        parts: &[u32],
        prec: i64,
        out: &mut Vec<Vec<usize>>,
    ) {
        let d = parts.len();
        if pos == d {
            let v: i64 = cur.iter().zip(parts).map(|(&dd, &n)| dd as i64 * n as i64).sum();
            if cur[0] as i64 + v <= prec {
                out.push(cur.clone());
            }
            return;
        }
        let remaining = d - pos - 1;
        for dd in remaining..upper {
            cur.push(dd);
            rec(pos + 1, dd, cur, parts, prec, out);
            cur.pop();
        }
    }
    rec(0, dmax + 1, &mut Vec::with_capacity(d), parts, prec, &mut out);
    out
}

/// Number of monic tuples the brute-force evaluation visits.
pub fn bruteforce_cost(field: &FieldDesc, index: &Index, prec: i64) -> u128 {
    let q = field.q() as u128;
    surviving_degree_tuples(index, prec)
        .iter()
        .map(|t| t.iter().map(|&d| q.saturating_pow(d as u32)).product::<u128>())
        .fold(0u128, |a, b| a.saturating_add(b))
}

/// zeta(index) = sum over monic a_1, ..., a_d with deg a_1 > ... > deg a_d of
/// prod a_i^(-n_i), to theta-precision `prec`, by visiting every monic tuple.
pub fn mzv_bruteforce(field: &FieldDesc, index: &Index, prec: i64, budget: u64) -> Result<LaurentL> {
    index.require_nonempty()?;
    let required = bruteforce_cost(field, index, prec);
    if required > budget as u128 {
        return Err(Error::BudgetExceeded { required, budget });
    }
    let floor = theta_floor(field.q(), prec);
    let tuples = surviving_degree_tuples(index, prec);
    let d = index.depth();
    let max_deg = tuples.iter().map(|t| t[0]).max().unwrap_or(0);
    // inv[j][D] = list of a^(-n_j) for monic a of degree D.
    let mut inv: Vec<Vec<Option<Vec<LaurentL>>>> = vec![vec![None; max_deg + 1]; d];
    for t in &tuples {
        for (j, &dd) in t.iter().enumerate() {
            if inv[j][dd].is_none() {
                let n = index.part(j + 1);
                let count = (field.q() as u64).pow(dd as u32);
                let list = (0..count)
                    .into_par_iter()
                    .map(|k| inverse_power(&monic_from_index(field, dd, k), n, floor))
                    .collect::<Result<Vec<_>>>()?;
                inv[j][dd] = Some(list);
            }
        }
    }
    let mut total = LaurentL::zero_to(field, floor);
    for t in &tuples {
        let lists: Vec<&Vec<LaurentL>> = t.iter().enumerate().map(|(j, &dd)| inv[j][dd].as_ref().unwrap()).collect();
        let part = lists[0]
            .par_iter()
            .map(|first| tuple_sum(first, &lists[1..], floor))
            .try_reduce(|| LaurentL::zero_to(field, floor), |a, b| a.add(&b))?;
        total = total.add(&part)?;
    }
    Ok(total)
}

/// Sum over all choices from the remaining lists of prefix * product.
fn tuple_sum(prefix: &LaurentL, rest: &[&Vec<LaurentL>], floor: i64) -> Result<LaurentL> {
    let Some((head, tail)) = rest.split_first() else {
        return Ok(prefix.clone());
    };
    let mut acc = LaurentL::zero_to(prefix.field(), floor);
    for x in head.iter() {
        let p = prefix.mul_to(x, floor)?;
        if p.is_zero() {
            continue;
        }
        acc = acc.add(&tuple_sum(&p, tail, floor)?)?;
    }
    Ok(acc)
}

/// Power sums S_D(n) for every D that can contribute at precision `prec`.
fn power_sum_table(field: &FieldDesc, n: u32, dmax: usize, prec: i64, method: PowerSumMethod) -> Result<Vec<LaurentL>> {
    let floor = theta_floor(field.q(), prec);
    (0..=dmax)
        .map(|dd| {
            if power_sum_valuation_bound(field.q(), dd, n) > prec {
                return Ok(LaurentL::zero_to(field, floor));
            }
            match method {
                PowerSumMethod::Enumeration { budget } => power_sum(field, dd, n, prec, budget),
                PowerSumMethod::Expansion => Ok(power_sums_expansion(field, dd, n, prec)?.pop().unwrap()),
            }
        })
        .collect()
}

/// zeta(index) through prefix sums of power sums.
pub fn mzv_fast_with(field: &FieldDesc, index: &Index, prec: i64, method: PowerSumMethod) -> Result<LaurentL> {
    index.require_nonempty()?;
    let floor = theta_floor(field.q(), prec);
    let Some(dmax) = degree_bound(index, prec) else {
        return Ok(LaurentL::zero_to(field, floor));
    };
    let d = index.depth();
    // P_d(D) = S_D(n_d); P_j(D) = S_D(n_j) * sum_{e < D} P_{j+1}(e).
    let mut p = power_sum_table(field, index.part(d), dmax, prec, method)?;
    for j in (1..d).rev() {
        let s = power_sum_table(field, index.part(j), dmax, prec, method)?;
        let mut prefix = LaurentL::zero_to(field, floor);
        let mut next = Vec::with_capacity(dmax + 1);
        for dd in 0..=dmax {
            next.push(s[dd].mul_to(&prefix, floor)?);
            prefix = prefix.add(&p[dd])?;
        }
        p = next;
    }
    p.iter().try_fold(LaurentL::zero_to(field, floor), |acc, x| acc.add(x))
}

/// zeta(index) to theta-precision `prec`, using the Carlitz expansion for
/// the power sums.
pub fn mzv_fast(field: &FieldDesc, index: &Index, prec: i64) -> Result<LaurentL> {
    mzv_fast_with(field, index, prec, PowerSumMethod::Expansion)
}

/// Alias for [`mzv_fast`].
pub fn zeta(field: &FieldDesc, index: &Index, prec: i64) -> Result<LaurentL> {
    mzv_fast(field, index, prec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specials::power_sum::DEFAULT_BUDGET;

    fn idx(s: &str) -> Index {
        s.parse().unwrap()
    }

    #[test]
    fn brute_matches_fast_small() {
        for q in [2u64, 3] {
            let f = FieldDesc::with_order(q).unwrap();
            for nu in ["1", "2", "1,1", "2,1", "1,2", "1,1,1"] {
                let nu = idx(nu);
                let b = mzv_bruteforce(&f, &nu, 10, DEFAULT_BUDGET).unwrap();
                let a = mzv_fast(&f, &nu, 10).unwrap();
                let e = mzv_fast_with(&f, &nu, 10, PowerSumMethod::Enumeration { budget: DEFAULT_BUDGET }).unwrap();
                assert!(a.agrees_with(&b), "q={q} {nu}: {a} vs {b}");
                assert!(e.agrees_with(&b));
            }
        }
    }

    #[test]
    fn q2_square_identity() {
        let f = FieldDesc::with_order(2).unwrap();
        let z1 = mzv_fast(&f, &idx("1"), 40).unwrap();
        let z2 = mzv_fast(&f, &idx("2"), 40).unwrap();
        assert!(z1.square().unwrap().agrees_with(&z2));
    }

    #[test]
    fn brute_budget() {
        let f = FieldDesc::with_order(3).unwrap();
        assert!(matches!(mzv_bruteforce(&f, &idx("1"), 40, 1000), Err(Error::BudgetExceeded { .. })));
    }
}
