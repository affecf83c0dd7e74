use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::laurent::{theta_floor, LaurentL};
use crate::motives::system::{unit_point, EntryResidual, PeriodSystem, ResidualStatus};
use crate::scalars::{FieldDesc, Fq};
use crate::specials::{lseries_build, Index, TPoint};
use crate::tate::{omega, SeriesPrecision, TSeries};

/// Element of F_q((s1^-1)) (x) F_q((s2^-1)), known on the quadrant
/// e1 >= floor[0], e2 >= floor[1] (a missing floor means exact in that
/// variable). `top` bounds the true support in each variable.
#[derive(Clone, Debug)]
struct BiLaurent {
    terms: BTreeMap<(i64, i64), Fq>,
    floor: [Option<i64>; 2],
    top: Option<[i64; 2]>,
}

impl BiLaurent {
    fn exact_zero() -> Self {
        BiLaurent { terms: BTreeMap::new(), floor: [None, None], top: None }
    }

    fn lift(x: &LaurentL, side: usize) -> Self {
        if x.is_exact_zero() {
            return Self::exact_zero();
        }
        let mut terms = BTreeMap::new();
        let lo = x.floor().unwrap_or(x.low());
        if let Some(top) = x.top() {
            for e in lo..=top {
                if let Some(c) = x.coeff(e).filter(|c| !c.is_zero()) {
                    terms.insert(if side == 0 { (e, 0) } else { (0, e) }, c);
                }
            }
        }
        let t = x.top().unwrap_or(lo - 1).max(x.floor().map_or(i64::MIN, |f| f - 1));
        let mut floor = [None, None];
        floor[side] = x.floor();
        let top = if side == 0 { [t, 0] } else { [0, t] };
        BiLaurent { terms, floor, top: Some(top) }
    }

    fn known(&self, e: (i64, i64)) -> bool {
        self.floor[0].is_none_or(|f| e.0 >= f) && self.floor[1].is_none_or(|f| e.1 >= f)
    }

    fn add(&self, other: &Self, f: &FieldDesc) -> Self {
        let top = match (self.top, other.top) {
            (None, t) | (t, None) => t,
            (Some(a), Some(b)) => Some([a[0].max(b[0]), a[1].max(b[1])]),
        };
        let floor = [0, 1].map(|k| match (self.floor[k], other.floor[k]) {
            (None, x) | (x, None) => x,
            (Some(a), Some(b)) => Some(a.max(b)),
        });
        let mut out = BiLaurent { terms: BTreeMap::new(), floor, top };
        for (e, c) in self.terms.iter().chain(other.terms.iter()) {
            if out.known(*e) {
                let v = out.terms.get(e).copied().unwrap_or(Fq::ZERO);
                out.terms.insert(*e, f.add(v, *c));
            }
        }
        out.terms.retain(|_, c| !c.is_zero());
        out
    }

    fn mul(&self, other: &Self, f: &FieldDesc) -> Self {
        let (Some(ta), Some(tb)) = (self.top, other.top) else {
            return Self::exact_zero();
        };
        let floor = [0, 1].map(|k| {
            let a = self.floor[k].map(|fl| fl + tb[k]);
            let b = other.floor[k].map(|fl| fl + ta[k]);
            match (a, b) {
                (None, x) | (x, None) => x,
                (Some(a), Some(b)) => Some(a.max(b)),
            }
        });
        let mut out = BiLaurent { terms: BTreeMap::new(), floor, top: Some([ta[0] + tb[0], ta[1] + tb[1]]) };
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = (ea.0 + eb.0, ea.1 + eb.1);
                if out.known(e) {
                    let v = out.terms.get(&e).copied().unwrap_or(Fq::ZERO);
                    out.terms.insert(e, f.add(v, f.mul(*ca, *cb)));
                }
            }
        }
        out.terms.retain(|_, c| !c.is_zero());
        out
    }

    /// Largest exponent pair (in reverse lexicographic scan) where the two
    /// differ on the common quadrant.
    fn first_difference(&self, other: &Self) -> Option<(i64, i64)> {
        let floor = [0, 1].map(|k| match (self.floor[k], other.floor[k]) {
            (None, x) | (x, None) => x,
            (Some(a), Some(b)) => Some(a.max(b)),
        });
        let known = |e: &(i64, i64)| floor[0].is_none_or(|f| e.0 >= f) && floor[1].is_none_or(|f| e.1 >= f);
        let keys: std::collections::BTreeSet<(i64, i64)> =
            self.terms.keys().chain(other.terms.keys()).copied().filter(known).collect();
        keys.into_iter().rev().find(|e| self.terms.get(e) != other.terms.get(e))
    }
}

/// Power series in t over the two-variable coefficient ring, truncated at a
/// common t-degree.
#[derive(Clone, Debug)]
struct BiSeries {
    coeffs: Vec<BiLaurent>,
}

impl BiSeries {
    fn lift(x: &TSeries, side: usize, t_deg: usize) -> Self {
        let zero = LaurentL::zero(x.field());
        BiSeries {
            coeffs: (0..=t_deg).map(|k| BiLaurent::lift(x.coeffs().get(k).unwrap_or(&zero), side)).collect(),
        }
    }

    fn constant_one(t_deg: usize) -> Self {
        let mut coeffs = vec![BiLaurent::exact_zero(); t_deg + 1];
        coeffs[0] = BiLaurent { terms: BTreeMap::from([((0, 0), Fq::ONE)]), floor: [None, None], top: Some([0, 0]) };
        BiSeries { coeffs }
    }

    fn zero(t_deg: usize) -> Self {
        BiSeries { coeffs: vec![BiLaurent::exact_zero(); t_deg + 1] }
    }

    fn add(&self, other: &Self, f: &FieldDesc) -> Self {
        BiSeries { coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.add(b, f)).collect() }
    }

    fn mul(&self, other: &Self, f: &FieldDesc) -> Self {
        let n = self.coeffs.len();
        let coeffs = (0..n)
            .map(|k| {
                (0..=k).fold(BiLaurent::exact_zero(), |acc, i| acc.add(&self.coeffs[i].mul(&other.coeffs[k - i], f), f))
            })
            .collect();
        BiSeries { coeffs }
    }

    fn pow(&self, e: u64, f: &FieldDesc) -> Self {
        (0..e).fold(Self::constant_one(self.coeffs.len() - 1), |acc, _| acc.mul(self, f))
    }

    /// (t-degree, (e1, e2)) of the first difference, and the worst floor pair.
    fn compare(&self, other: &Self) -> (Option<(usize, (i64, i64))>, [Option<i64>; 2]) {
        let mut worst = [None, None];
        for (k, (a, b)) in self.coeffs.iter().zip(&other.coeffs).enumerate() {
            for side in 0..2 {
                let fl = [a.floor[side], b.floor[side]].into_iter().flatten().max();
                worst[side] = match (worst[side], fl) {
                    (None, x) | (x, None) => x,
                    (Some(w), Some(x)) => Some(w.max(x)),
                };
            }
            if let Some(e) = a.first_difference(b) {
                return (Some((k, e)), worst);
            }
        }
        (None, worst)
    }
}

/// Outcome of comparing the inverse-product with the closed double-sum formula.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PsiTildeReport {
    pub all_equal: bool,
    pub t_deg: usize,
    /// Lowest s-exponent in each variable on which both sides were compared.
    pub window: [i64; 2],
    pub entries: Vec<EntryResidual>,
}

const MAX_DEPTH: usize = 2;

/// Compares Psi_1^(-1) Psi_2 with
/// (Omega^-1 (x) Omega)^(w_i) sum_{s=j}^{i} sum_r (-1)^r
///   sum_{s = i_0 < ... < i_r = i} L_{i_1 i_0} ... L_{i_r i_{r-1}} (x) Omega^(w_j - w_i) L_{s j},
/// where the r = 0 term occurs only for s = i and L_{jj} = 1.
pub fn psi_tilde_check(field: &FieldDesc, index: &Index, u: Option<TPoint>, t_deg: usize, n: i64) -> Result<PsiTildeReport> {
    psi_tilde_check_with(field, index, u, t_deg, n, false)
}

/// As [`psi_tilde_check`]; with `inject_fault` one coefficient of Psi is
/// changed before the product side is formed.
pub fn psi_tilde_check_with(
    field: &FieldDesc,
    index: &Index,
    u: Option<TPoint>,
    t_deg: usize,
    n: i64,
    inject_fault: bool,
) -> Result<PsiTildeReport> {
    let d = index.depth();
    if d == 0 || d > MAX_DEPTH {
        return Err(Error::Unsupported(format!("the two-variable check is limited to depth <= {MAX_DEPTH}")));
    }
    let u = u.unwrap_or_else(|| unit_point(field, d));
    let q = field.q() as i64;
    let target = theta_floor(field.q(), n);
    let weights = index.tail_weights();
    // Inverting Omega raises floors by about q per power.
    let guard = 2 * q * (weights[0] as i64 + 1) + q;
    let work = SeriesPrecision::uniform(field, t_deg, n).guarded(guard);
    let mut sys = PeriodSystem::build_with(field, index, &u, &work)?;
    if inject_fault {
        sys.inject_fault((d + 1, 1), 0, -q)?;
    }
    let r = d + 1;
    let f = field;

    // Left side: (Psi^-1 (x) 1)(1 (x) Psi).
    let inv = triangular_inverse(&sys.psi, t_deg)?;
    let lifted_inv: Vec<Vec<BiSeries>> =
        inv.iter().map(|row| row.iter().map(|x| BiSeries::lift(x, 0, t_deg)).collect()).collect();
    let lifted_psi: Vec<Vec<BiSeries>> =
        sys.psi.iter().map(|row| row.iter().map(|x| BiSeries::lift(x, 1, t_deg)).collect()).collect();
    let mut product = vec![vec![BiSeries::zero(t_deg); r]; r];
    for i in 0..r {
        for j in 0..=i {
            let mut acc = BiSeries::zero(t_deg);
            for m in j..=i {
                acc = acc.add(&lifted_inv[i][m].mul(&lifted_psi[m][j], f), f);
            }
            product[i][j] = acc;
        }
    }

    // Right side from Omega and the L-series alone.
    let om = omega(f, &work)?;
    let om_inv = om.inv()?;
    let mut ell: Vec<Vec<Option<TSeries>>> = vec![vec![None; r]; r];
    for i in 0..r {
        for j in 0..i {
            let nu = Index::new(index.parts()[j..i].to_vec())?;
            ell[i][j] = Some(lseries_build(f, &nu, &u[j..i], &work)?);
        }
    }
    let one = TSeries::one(f);
    let l_at = |i: usize, j: usize| -> &TSeries { if i == j { &one } else { ell[i][j].as_ref().unwrap() } };
    let pre = BiSeries::lift(&om_inv, 0, t_deg).mul(&BiSeries::lift(&om, 1, t_deg), f);
    let mut closed = vec![vec![BiSeries::zero(t_deg); r]; r];
    for i in 0..r {
        for j in 0..=i {
            let mut sum = BiSeries::zero(t_deg);
            for s in j..=i {
                let left = alternating_chain_sum(s, i, &l_at, f)?;
                let w = weights[j] - weights[i];
                let right = if w == 0 { l_at(s, j).clone() } else { om.pow_to(w, &work)?.mul(l_at(s, j))? };
                let term = BiSeries::lift(&left, 0, t_deg).mul(&BiSeries::lift(&right, 1, t_deg), f);
                sum = sum.add(&term, f);
            }
            closed[i][j] = pre.pow(weights[i], f).mul(&sum, f);
        }
    }

    let mut entries = Vec::new();
    let mut window = [i64::MIN, i64::MIN];
    for i in 0..r {
        for j in 0..=i {
            let (bad, worst) = product[i][j].compare(&closed[i][j]);
            for k in 0..2 {
                if let Some(w) = worst[k] {
                    window[k] = window[k].max(w);
                }
            }
            entries.push(EntryResidual {
                entry: (i + 1, j + 1),
                status: if bad.is_none() { ResidualStatus::Zero } else { ResidualStatus::Nonzero },
                first_bad_exponent: bad.map(|(k, e)| (k, e.0.min(e.1))),
            });
        }
    }
    if window.iter().any(|&w| w > target) {
        return Err(Error::InsufficientPrecision { have: window[0].max(window[1]), need: target });
    }
    Ok(PsiTildeReport {
        all_equal: entries.iter().all(|e| e.status == ResidualStatus::Zero),
        t_deg,
        window,
        entries,
    })
}

/// sum_r (-1)^r over chains s = i_0 < ... < i_r = i of L_{i_1 i_0} ... L_{i_r i_{r-1}}.
fn alternating_chain_sum<'a>(s: usize, i: usize, l_at: &impl Fn(usize, usize) -> &'a TSeries, f: &FieldDesc) -> Result<TSeries> {
    if s == i {
        return Ok(TSeries::one(f));
    }
    let interior: Vec<usize> = (s + 1..i).collect();
    let mut total = TSeries::zero(f);
    for mask in 0u32..(1 << interior.len()) {
        let mut chain = vec![s];
        chain.extend(interior.iter().enumerate().filter(|(b, _)| mask >> b & 1 == 1).map(|(_, &x)| x));
        chain.push(i);
        let mut prod = TSeries::one(f);
        for w in chain.windows(2) {
            prod = prod.mul(l_at(w[1], w[0]))?;
        }
        let rlen = chain.len() - 1;
        total = if rlen % 2 == 0 { total.add(&prod)? } else { total.sub(&prod)? };
    }
    Ok(total)
}

/// Inverse of a lower triangular matrix of t-series.
fn triangular_inverse(m: &[Vec<TSeries>], t_deg: usize) -> Result<Vec<Vec<TSeries>>> {
    let r = m.len();
    let f = m[0][0].field().clone();
    let mut inv = vec![vec![TSeries::zero(&f); r]; r];
    for i in 0..r {
        inv[i][i] = diagonal_inverse(&m[i][i], t_deg)?;
        for j in (0..i).rev() {
            let mut acc = TSeries::zero(&f);
            for k in j..i {
                acc = acc.add(&m[i][k].mul(&inv[k][j])?)?;
            }
            inv[i][j] = inv[i][i].mul(&acc)?.neg();
        }
    }
    Ok(inv)
}

fn diagonal_inverse(x: &TSeries, t_deg: usize) -> Result<TSeries> {
    if x.is_polynomial() {
        x.inv_series(t_deg)
    } else {
        x.inv()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn depth_one() {
        let f = FieldDesc::with_order(2).unwrap();
        let rep = psi_tilde_check(&f, &"2".parse().unwrap(), None, 3, 12).unwrap();
        assert!(rep.all_equal, "{rep:?}");
    }

    #[test]
    fn fault_is_visible() {
        let f = FieldDesc::with_order(2).unwrap();
        let rep = psi_tilde_check_with(&f, &"1".parse().unwrap(), None, 2, 10, true).unwrap();
        assert!(!rep.all_equal);
    }

    #[test]
    fn depth_three_rejected() {
        let f = FieldDesc::with_order(2).unwrap();
        assert!(psi_tilde_check(&f, &"1,1,1".parse().unwrap(), None, 2, 8).is_err());
    }
}
