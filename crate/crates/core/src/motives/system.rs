use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::laurent::{theta_floor, LaurentL, RationalK};
use crate::motives::index_set::IdElement;
use crate::scalars::FieldDesc;
use crate::specials::{lseries_build, lseries_value_at_theta, Index, TPoint};
use crate::tate::{omega, KtPoly, SeriesPrecision, TSeries};

const MAX_ATTEMPTS: usize = 5;

/// Lower triangular pair (Phi, Psi) with Psi = Phi^(1) Psi^(1).
///
/// Matrices are 0-based here; row/column r corresponds to r + 1 in the
/// usual 1-based notation. `phi` is stored only when every coordinate of u
/// has an inverse twist in F_q(theta); `phi_twisted` is always present.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeriodSystem {
    pub field: FieldDesc,
    pub index: Index,
    pub u: TPoint,
    /// Diagonal exponents w_1, ..., w_r (w_r = 0 for the full system).
    pub weights: Vec<u64>,
    pub phi: Option<Vec<Vec<KtPoly>>>,
    pub phi_twisted: Vec<Vec<KtPoly>>,
    pub psi: Vec<Vec<TSeries>>,
    pub precision: SeriesPrecision,
    /// Position of the top-left corner inside the parent system.
    pub offset: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ResidualStatus {
    Zero,
    Nonzero,
}

/// Residual of one entry; `entry` is 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntryResidual {
    pub entry: (usize, usize),
    pub status: ResidualStatus,
    /// (t-degree, s-exponent) of the first nonzero residual coefficient.
    pub first_bad_exponent: Option<(usize, i64)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub all_zero: bool,
    pub t_deg: usize,
    pub s_floor: i64,
    pub entries: Vec<EntryResidual>,
}

fn linear_power(field: &FieldDesc, theta_exp: usize, e: u64) -> Result<KtPoly> {
    KtPoly::t_minus_theta_power(field, theta_exp).pow(e as u32)
}

impl PeriodSystem {
    /// Builds Phi and Psi for the index and point, with every Psi entry known
    /// to t-degree `t_deg` and theta-precision `n`.
    pub fn build(field: &FieldDesc, index: &Index, u: &[KtPoly], t_deg: usize, n: i64) -> Result<Self> {
        Self::build_with(field, index, u, &SeriesPrecision::uniform(field, t_deg, n))
    }

    pub fn build_with(field: &FieldDesc, index: &Index, u: &[KtPoly], prec: &SeriesPrecision) -> Result<Self> {
        index.require_nonempty()?;
        let d = index.depth();
        if u.len() != d {
            return Err(Error::InvalidArgument(format!("{} coordinates for an index of depth {d}", u.len())));
        }
        let q = field.q() as usize;
        let weights = index.tail_weights();
        let r = d + 1;
        let zero = KtPoly::zero(field);
        let mut phi_twisted = vec![vec![zero.clone(); r]; r];
        for i in 0..r {
            phi_twisted[i][i] = linear_power(field, q, weights[i])?;
            if i + 1 < r {
                phi_twisted[i + 1][i] = u[i].mul(&linear_power(field, q, weights[i])?)?;
            }
        }
        let phi = match u.iter().map(|x| x.untwist()).collect::<Option<Vec<_>>>() {
            Some(pre) => {
                let mut m = vec![vec![zero.clone(); r]; r];
                for i in 0..r {
                    m[i][i] = linear_power(field, 1, weights[i])?;
                    if i + 1 < r {
                        m[i + 1][i] = pre[i].mul(&linear_power(field, 1, weights[i])?)?;
                    }
                }
                Some(m)
            }
            None => None,
        };
        let psi = build_psi(field, index, u, &weights, prec)?;
        Ok(PeriodSystem {
            field: field.clone(),
            index: index.clone(),
            u: u.to_vec(),
            weights,
            phi,
            phi_twisted,
            psi,
            precision: *prec,
            offset: 0,
        })
    }

    pub fn size(&self) -> usize {
        self.psi.len()
    }

    /// Psi entry (i, j), 1-based.
    pub fn psi_entry(&self, i: usize, j: usize) -> &TSeries {
        &self.psi[i - 1][j - 1]
    }

    /// det Phi^(1) = prod of the diagonal.
    pub fn det_phi_twisted(&self) -> Result<KtPoly> {
        (0..self.size()).try_fold(KtPoly::one(&self.field), |acc, i| acc.mul(&self.phi_twisted[i][i]))
    }

    /// det Phi, when Phi itself is stored.
    pub fn det_phi(&self) -> Result<Option<KtPoly>> {
        let Some(phi) = &self.phi else { return Ok(None) };
        Ok(Some((0..self.size()).try_fold(KtPoly::one(&self.field), |acc, i| acc.mul(&phi[i][i]))?))
    }

    /// (t - theta)^(sum of the diagonal exponents).
    pub fn expected_det(&self) -> Result<KtPoly> {
        linear_power(&self.field, 1, self.weights.iter().sum())
    }

    /// Checks Psi - Phi^(1) Psi^(1) = 0 entrywise on the stored window.
    pub fn verify_difference_equation(&self) -> Result<ResidualReport> {
        let r = self.size();
        let prec = self.precision;
        let twisted: Vec<Vec<TSeries>> = self
            .psi
            .iter()
            .map(|row| row.iter().map(|x| x.twist(1)).collect::<Result<Vec<_>>>())
            .collect::<Result<_>>()?;
        let phi_series: Vec<Vec<TSeries>> = self
            .phi_twisted
            .iter()
            .map(|row| row.iter().map(|x| x.to_tseries(&prec)).collect::<Result<Vec<_>>>())
            .collect::<Result<_>>()?;
        let cells: Vec<(usize, usize)> = (0..r).flat_map(|i| (0..=i).map(move |j| (i, j))).collect();
        let entries = cells
            .par_iter()
            .map(|&(i, j)| {
                let mut rhs = TSeries::zero(&self.field);
                for m in j..=i {
                    if phi_series[i][m].is_polynomial() && phi_series[i][m].coeffs().is_empty() {
                        continue;
                    }
                    rhs = rhs.add(&phi_series[i][m].mul(&twisted[m][j])?)?;
                }
                let rhs = rhs.truncate_to(&prec)?;
                let bad = self.psi[i][j].first_difference(&rhs);
                Ok(EntryResidual {
                    entry: (i + 1, j + 1),
                    status: if bad.is_none() { ResidualStatus::Zero } else { ResidualStatus::Nonzero },
                    first_bad_exponent: bad,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ResidualReport {
            all_zero: entries.iter().all(|e| e.status == ResidualStatus::Zero),
            t_deg: prec.t_deg,
            s_floor: prec.floor,
            entries,
        })
    }

    /// Changes one coefficient of a Psi entry (1-based), for testing the verifier.
    pub fn inject_fault(&mut self, entry: (usize, usize), t_deg: usize, exponent: i64) -> Result<()> {
        let (i, j) = entry;
        if i == 0 || j == 0 || i > self.size() || j > i || t_deg > self.precision.t_deg {
            return Err(Error::InvalidArgument(format!("no Psi entry ({i},{j}) at t^{t_deg}")));
        }
        let c = &mut self.psi[i - 1][j - 1].coeffs_mut()[t_deg];
        if c.coeff(exponent).is_none() {
            return Err(Error::InvalidArgument(format!("s^{exponent} outside the window")));
        }
        c.perturb(exponent, self.field.one());
        Ok(())
    }

    /// The default fault: the bottom coefficient of the lower-left entry at t^0.
    pub fn inject_default_fault(&mut self) -> Result<()> {
        let r = self.size();
        self.inject_fault((r, 1), 0, self.precision.floor)
    }

    /// Phi[k, l] and Psi[k, l]: rows and columns l..=k of this system.
    pub fn submatrix(&self, el: IdElement) -> Result<Self> {
        IdElement::new(el.i, el.j, self.size() - 1)?;
        let (k, l) = (el.i, el.j);
        let block = |m: &Vec<Vec<KtPoly>>| -> Vec<Vec<KtPoly>> {
            (l - 1..k).map(|i| (l - 1..k).map(|j| m[i][j].clone()).collect()).collect()
        };
        let psi = (l - 1..k).map(|i| (l - 1..k).map(|j| self.psi[i][j].clone()).collect()).collect();
        Ok(PeriodSystem {
            field: self.field.clone(),
            index: self.index.slice(k.min(self.index.depth() + 1), l)?,
            u: self.u[l - 1..k - 1].to_vec(),
            weights: self.weights[l - 1..k].to_vec(),
            phi: self.phi.as_ref().map(block),
            phi_twisted: block(&self.phi_twisted),
            psi,
            precision: self.precision,
            offset: self.offset + l - 1,
        })
    }

    /// Psi(theta) to theta-precision `n`: entry (i, j) is
    /// Omega(theta)^(w_j) L_(u_ij, nu_ij)(theta), computed from the defining
    /// series rather than from the stored truncation.
    pub fn period_matrix(&self, n: i64) -> Result<Vec<Vec<LaurentL>>> {
        let f = &self.field;
        let r = self.size();
        let floor = theta_floor(f.q(), n);
        let mut values: Vec<Vec<Option<LaurentL>>> = vec![vec![None; r]; r];
        let mut guard = 0i64;
        for i in 0..r {
            for j in 0..i {
                let nu = self.index_slice(i, j)?;
                let v = lseries_value_at_theta(f, &nu, &self.u[j..i], n)?;
                if let Some(t) = v.top() {
                    guard = guard.max((t + f.q() as i64 - 2).div_euclid(f.q() as i64 - 1));
                }
                values[i][j] = Some(v);
            }
        }
        let om_prec = n + guard + 1;
        let om_series = omega(f, &SeriesPrecision::for_evaluation(f, 0, om_prec))?;
        let t_need = om_series.required_t_for_eval(om_prec)?;
        let om = omega(f, &SeriesPrecision::for_evaluation(f, t_need, om_prec))?.eval_at_theta(om_prec)?;
        let mut out = vec![vec![LaurentL::zero(f); r]; r];
        for i in 0..r {
            for j in 0..=i {
                let w = self.weights[j];
                let pw = om.pow_to(w, theta_floor(f.q(), om_prec))?;
                out[i][j] = match &values[i][j] {
                    Some(v) => pw.mul(v)?.truncate(floor)?,
                    None if w == 0 => LaurentL::one(f),
                    None => pw.truncate(floor)?,
                };
            }
        }
        Ok(out)
    }

    /// nu_ij for 0-based local rows, relative to the stored index.
    fn index_slice(&self, i: usize, j: usize) -> Result<Index> {
        Index::new(self.index.parts()[j..i].to_vec())
    }
}

/// Psi with entries Omega^(w_j) L_ij below the diagonal, Omega^(w_i) on it.
fn build_psi(field: &FieldDesc, index: &Index, u: &[KtPoly], weights: &[u64], prec: &SeriesPrecision) -> Result<Vec<Vec<TSeries>>> {
    let r = index.depth() + 1;
    let mut guard = 2i64;
    let mut last = None;
    for _ in 0..MAX_ATTEMPTS {
        let work = prec.guarded(guard);
        match build_psi_at(field, index, u, weights, &work).and_then(|m| {
            m.into_iter()
                .map(|row| row.into_iter().map(|x| x.truncate_to(prec)).collect::<Result<Vec<_>>>())
                .collect::<Result<Vec<_>>>()
        }) {
            Ok(m) => {
                debug_assert_eq!(m.len(), r);
                return Ok(m);
            }
            Err(e @ Error::InsufficientPrecision { .. }) => {
                last = Some(e);
                guard *= 2;
            }
            Err(e) => return Err(e),
        }
    }
    Err(last.expect("at least one attempt"))
}

fn build_psi_at(field: &FieldDesc, index: &Index, u: &[KtPoly], weights: &[u64], work: &SeriesPrecision) -> Result<Vec<Vec<TSeries>>> {
    let r = index.depth() + 1;
    let om = omega(field, work)?;
    let mut powers: Vec<Option<TSeries>> = vec![None; r];
    for j in 0..r {
        if powers[j].is_none() {
            powers[j] = Some(if weights[j] == 0 { TSeries::one(field) } else { om.pow_to(weights[j], work)? });
        }
    }
    let cells: Vec<(usize, usize)> = (0..r).flat_map(|i| (0..i).map(move |j| (i, j))).collect();
    let lower = cells
        .par_iter()
        .map(|&(i, j)| {
            let nu = Index::new(index.parts()[j..i].to_vec())?;
            let l = lseries_build(field, &nu, &u[j..i], work)?;
            powers[j].as_ref().unwrap().mul_to(&l, work)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut m = vec![vec![TSeries::zero(field); r]; r];
    for (&(i, j), v) in cells.iter().zip(lower) {
        m[i][j] = v;
    }
    for i in 0..r {
        m[i][i] = powers[i].clone().unwrap();
    }
    Ok(m)
}

/// The all-ones point of depth d.
pub fn unit_point(field: &FieldDesc, d: usize) -> TPoint {
    vec![KtPoly::constant(RationalK::one(field)); d]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::motives::index_set::index_set;
    use crate::specials::cmpl_eval;
    use crate::tate::carlitz_pi;

    fn idx(s: &str) -> Index {
        s.parse().unwrap()
    }

    #[test]
    fn residual_vanishes_and_fault_is_found() {
        let f = FieldDesc::with_order(3).unwrap();
        let mut sys = PeriodSystem::build(&f, &idx("1,2"), &unit_point(&f, 2), 6, 30).unwrap();
        let rep = sys.verify_difference_equation().unwrap();
        assert!(rep.all_zero, "{rep:?}");
        assert_eq!(sys.det_phi().unwrap().unwrap(), sys.expected_det().unwrap());
        sys.inject_default_fault().unwrap();
        let rep = sys.verify_difference_equation().unwrap();
        assert!(!rep.all_zero);
        let bad: Vec<_> = rep.entries.iter().filter(|e| e.status == ResidualStatus::Nonzero).collect();
        assert_eq!(bad.len(), 1);
        assert_eq!(bad[0].entry, (3, 1));
    }

    #[test]
    fn carlitz_case() {
        let f = FieldDesc::with_order(2).unwrap();
        let sys = PeriodSystem::build(&f, &idx("1"), &unit_point(&f, 1), 5, 20).unwrap();
        let top = sys.submatrix(IdElement { i: 2, j: 1 }).unwrap();
        assert_eq!(top, sys);
        assert!(sys.verify_difference_equation().unwrap().all_zero);
    }

    #[test]
    fn submatrices_pass() {
        let f = FieldDesc::with_order(2).unwrap();
        let sys = PeriodSystem::build(&f, &idx("1,2,1"), &unit_point(&f, 3), 4, 15).unwrap();
        for el in index_set(3).unwrap() {
            let sub = sys.submatrix(el).unwrap();
            assert_eq!(sub.size(), el.depth() + 1);
            assert_eq!(sub.psi[el.depth()][0], sys.psi[el.i - 1][el.j - 1]);
            assert!(sub.verify_difference_equation().unwrap().all_zero, "{el}");
        }
    }

    #[test]
    fn periods_match_polylogs() {
        let f = FieldDesc::with_order(3).unwrap();
        let sys = PeriodSystem::build(&f, &idx("1,2"), &unit_point(&f, 2), 2, 10).unwrap();
        let pm = sys.period_matrix(20).unwrap();
        let pi_inv = carlitz_pi(&f, 30).unwrap().inv().unwrap();
        let one = RationalK::one(&f);
        let li = cmpl_eval(&f, &idx("1,2"), &[one.clone(), one], 30).unwrap();
        let expect = pi_inv.pow(3).unwrap().mul(&li).unwrap();
        assert!(pm[2][0].agrees_with(&expect));
        assert_eq!(pm[2][2], LaurentL::one(&f));
    }
}
