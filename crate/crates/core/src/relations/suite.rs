use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::laurent::LaurentL;
use crate::motives::index_set;
use crate::relations::expr::Expr;
use crate::relations::search::{
    find_linear_relations, rational_reconstruct_stable, RelationBasis, RelationQuery, StableReconstruction, DEFAULT_SLACK,
};
use crate::scalars::FieldDesc;
use crate::specials::{lseries_value_at_theta, zeta, Index, TPoint};
use crate::tate::carlitz_pi;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteConfig {
    /// Rationality is tested for the "even" n in 1..=n_max.
    pub n_max: u32,
    pub prec: i64,
    /// Second, larger precision for the stability check.
    pub prec_high: i64,
    pub degree_bound: usize,
    pub slack_min: i64,
    /// Frobenius cases cover every index up to this depth and weight.
    pub frobenius_depth: usize,
    pub frobenius_weight: u32,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            n_max: 3,
            prec: 40,
            prec_high: 60,
            degree_bound: 8,
            slack_min: DEFAULT_SLACK,
            frobenius_depth: 2,
            frobenius_weight: 4,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CaseKind {
    EvenRationality,
    Frobenius,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteCase {
    pub name: String,
    pub kind: CaseKind,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub field: FieldDesc,
    pub config: SuiteConfig,
    pub all_passed: bool,
    pub cases: Vec<SuiteCase>,
}

/// n is "even" when q - 1 divides it.
pub fn is_even(q: u32, n: u32) -> bool {
    n.is_multiple_of(q - 1)
}

/// zeta(n) / pi^n reconstructed at two precisions.
pub fn even_ratio_reconstruction(f: &FieldDesc, n: u32, config: &SuiteConfig) -> Result<StableReconstruction> {
    let expr = Expr::Div(
        Box::new(Expr::Zeta(Index::new(vec![n])?)),
        Box::new(Expr::Pow(Box::new(Expr::Pi), n as i64)),
    );
    let lo = expr.eval(f, config.prec)?;
    let hi = expr.eval(f, config.prec_high)?;
    rational_reconstruct_stable(&lo, &hi, (config.prec, config.prec_high), config.degree_bound, config.slack_min)
}

/// zeta(p nu) against zeta(nu)^p, coefficient by coefficient.
pub fn frobenius_case(f: &FieldDesc, nu: &Index, prec: i64) -> Result<(bool, Option<i64>)> {
    let p = f.p();
    let lhs = zeta(f, &nu.scaled(p), prec)?;
    let rhs = zeta(f, nu, prec)?.pow(p as i64)?;
    let diff = lhs.first_difference(&rhs);
    Ok((diff.is_none(), diff))
}

/// Known relations: rationality of zeta(n) / pi^n for "even" n and
/// zeta(p nu) = zeta(nu)^p. Failures are report entries, not errors.
pub fn known_relation_suite(f: &FieldDesc, config: &SuiteConfig) -> Result<SuiteReport> {
    let q = f.q();
    let mut cases = Vec::new();
    for n in (1..=config.n_max).filter(|&n| is_even(q, n)) {
        let name = format!("zeta({n})/pi^{n} in K");
        let case = match even_ratio_reconstruction(f, n, config) {
            Ok(r) => SuiteCase {
                name,
                kind: CaseKind::EvenRationality,
                passed: r.stable,
                detail: match &r.value {
                    Some(v) => format!("{v}, stable at N = {} and {}", config.prec, config.prec_high),
                    None => format!("no stable fraction of degree <= {}", config.degree_bound),
                },
            },
            Err(e) => SuiteCase { name, kind: CaseKind::EvenRationality, passed: false, detail: e.to_string() },
        };
        cases.push(case);
    }
    for nu in Index::all_up_to(config.frobenius_depth, config.frobenius_weight) {
        let name = format!("zeta({}) = zeta{nu}^{}", nu.scaled(f.p()).parts().iter().map(u32::to_string).collect::<Vec<_>>().join(","), f.p());
        let case = match frobenius_case(f, &nu, config.prec) {
            Ok((ok, diff)) => SuiteCase {
                name,
                kind: CaseKind::Frobenius,
                passed: ok,
                detail: match diff {
                    None => format!("equal to N = {}", config.prec),
                    Some(e) => format!("differ at s^{e}"),
                },
            },
            Err(e) => SuiteCase { name, kind: CaseKind::Frobenius, passed: false, detail: e.to_string() },
        };
        cases.push(case);
    }
    Ok(SuiteReport { field: f.clone(), config: config.clone(), all_passed: cases.iter().all(|c| c.passed), cases })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndependenceConfig {
    pub degree_bound: usize,
    pub prec: i64,
    /// Strictly larger precision at which candidate relations must persist.
    pub prec_check: i64,
    pub slack_min: i64,
    /// Largest total degree of the monomials scanned.
    pub max_degree: u32,
    pub max_monomials: usize,
}

impl Default for IndependenceConfig {
    fn default() -> Self {
        IndependenceConfig { degree_bound: 3, prec: 60, prec_check: 120, slack_min: DEFAULT_SLACK, max_degree: 2, max_monomials: 30 }
    }
}

/// Hypotheses of the independence theorems for an index.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypothesisCheck {
    pub distinct_parts: bool,
    /// No part is divisible by q - 1.
    pub odd_parts: bool,
    /// No ratio of two parts is an integral power of p.
    pub non_p_power_ratios: bool,
    pub violations: Vec<String>,
    pub hypotheses_met: bool,
}

fn is_power_of(mut x: u32, p: u32) -> bool {
    while x.is_multiple_of(p) {
        x /= p;
    }
    x == 1
}

pub fn check_hypotheses(f: &FieldDesc, index: &Index) -> HypothesisCheck {
    let q = f.q();
    let p = f.p();
    let parts = index.parts();
    let mut violations = Vec::new();
    for (i, &n) in parts.iter().enumerate() {
        if is_even(q, n) {
            violations.push(format!("q - 1 = {} divides n_{} = {n}", q - 1, i + 1));
        }
    }
    let odd_parts = violations.is_empty();
    let mut distinct_parts = true;
    let mut non_p_power_ratios = true;
    for i in 0..parts.len() {
        for j in i + 1..parts.len() {
            let (a, b) = (parts[i].max(parts[j]), parts[i].min(parts[j]));
            if a == b {
                distinct_parts = false;
                violations.push(format!("n_{} = n_{} = {a}", i + 1, j + 1));
            } else if a % b == 0 && is_power_of(a / b, p) {
                non_p_power_ratios = false;
                violations.push(format!("n_{}/n_{} = {} is a power of p = {p}", i + 1, j + 1, Ratio(parts[i], parts[j])));
            }
        }
    }
    HypothesisCheck {
        distinct_parts,
        odd_parts,
        non_p_power_ratios,
        hypotheses_met: violations.is_empty(),
        violations,
    }
}

struct Ratio(u32, u32);

impl std::fmt::Display for Ratio {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.0.is_multiple_of(self.1) {
            write!(f, "{}", self.0 / self.1)
        } else {
            write!(f, "{}/{}", self.0, self.1)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndependenceReport {
    pub index: Index,
    pub value_labels: Vec<String>,
    pub monomial_labels: Vec<String>,
    pub linear: RelationBasis,
    pub monomial: RelationBasis,
    /// The same scans at `config.prec_check`.
    pub linear_check: RelationBasis,
    pub monomial_check: RelationBasis,
    /// Relations that persist at the larger precision (expected 0).
    pub relation_count: usize,
    /// Relations seen at `prec` that fail at `prec_check`.
    pub unstable_count: usize,
    pub hypotheses: HypothesisCheck,
    pub label: String,
    pub config: IndependenceConfig,
}

/// Exponent vectors of total degree <= max_degree in k variables, by degree.
fn exponent_vectors(k: usize, max_degree: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    for deg in 0..=max_degree {
        let mut cur = vec![0u32; k];
        fn rec(pos: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
            if pos + 1 == cur.len() {
                cur[pos] = left;
                out.push(cur.clone());
                return;
            }
            for e in (0..=left).rev() {
                cur[pos] = e;
                rec(pos + 1, left - e, cur, out);
            }
        }
        if k > 0 {
            rec(0, deg, &mut cur, &mut out);
        }
    }
    out
}

/// Values and monomial labels scanned by [`independence_report`].
fn period_values(f: &FieldDesc, index: &Index, u: &TPoint, prec: i64) -> Result<(Vec<String>, Vec<LaurentL>)> {
    let mut labels = vec!["pi".to_string()];
    let mut values = vec![carlitz_pi(f, prec)?];
    for el in index_set(index.depth())? {
        let nu = index.slice(el.i, el.j)?;
        labels.push(format!("L{nu}"));
        values.push(lseries_value_at_theta(f, &nu, &u[el.j - 1..el.i - 1], prec)?);
    }
    Ok((labels, values))
}

fn monomials(labels: &[String], values: &[LaurentL], config: &IndependenceConfig) -> Result<(Vec<String>, Vec<LaurentL>)> {
    let f = values[0].field();
    let mut out = Vec::new();
    let mut names = Vec::new();
    for ev in exponent_vectors(values.len(), config.max_degree).into_iter().take(config.max_monomials) {
        let mut acc = LaurentL::one(f);
        let mut name = Vec::new();
        for (i, &e) in ev.iter().enumerate() {
            if e > 0 {
                acc = acc.mul(&values[i].pow(e as i64)?)?;
                name.push(if e == 1 { labels[i].clone() } else { format!("{}^{e}", labels[i]) });
            }
        }
        names.push(if name.is_empty() { "1".into() } else { name.join("*") });
        out.push(acc);
    }
    Ok((names, out))
}

/// Scans pi~ and the periods L_(u_ij, nu_ij)(theta), (i, j) in the index set,
/// and their low-degree monomials for K-linear relations. A relation counts
/// only if it also holds at `config.prec_check`.
pub fn independence_report(f: &FieldDesc, index: &Index, u: &TPoint, config: &IndependenceConfig) -> Result<IndependenceReport> {
    index.require_nonempty()?;
    if config.prec_check <= config.prec {
        return Err(Error::InvalidArgument("the check precision must exceed the scan precision".into()));
    }
    if u.len() != index.depth() {
        return Err(Error::InvalidArgument(format!("{} coordinates for an index of depth {}", u.len(), index.depth())));
    }
    let scan = |prec: i64| -> Result<(Vec<String>, Vec<String>, RelationBasis, RelationBasis)> {
        let (labels, values) = period_values(f, index, u, prec)?;
        let linear = find_linear_relations(&RelationQuery::new(values.clone(), config.degree_bound).with_slack(config.slack_min))?;
        let (names, monos) = monomials(&labels, &values, config)?;
        let monomial = find_linear_relations(&RelationQuery::new(monos, config.degree_bound).with_slack(config.slack_min))?;
        Ok((labels, names, linear, monomial))
    };
    let (labels, monomial_labels, linear, monomial) = scan(config.prec)?;
    let (_, _, linear_check, monomial_check) = scan(config.prec_check)?;
    let found = linear.relations.len() + monomial.relations.len();
    let relation_count = linear_check.relations.len() + monomial_check.relations.len();
    let hypotheses = check_hypotheses(f, index);
    let label = if hypotheses.hypotheses_met {
        "finite-precision evidence; hypotheses met".to_string()
    } else {
        "finite-precision evidence; hypotheses not met".to_string()
    };
    Ok(IndependenceReport {
        index: index.clone(),
        value_labels: labels,
        monomial_labels,
        linear,
        monomial,
        linear_check,
        monomial_check,
        relation_count,
        unstable_count: found.saturating_sub(relation_count),
        hypotheses,
        label,
        config: config.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hypothesis_flags() {
        let f = FieldDesc::with_order(3).unwrap();
        let h = check_hypotheses(&f, &"1,3".parse().unwrap());
        assert!(!h.non_p_power_ratios && h.odd_parts);
        let h = check_hypotheses(&f, &"2,5".parse().unwrap());
        assert!(!h.odd_parts);
        let h = check_hypotheses(&f, &"1,5".parse().unwrap());
        assert!(h.hypotheses_met);
    }

    #[test]
    fn truncation_artifact_is_unstable() {
        // At N = 60 the value L(5) equals 1 + 1/ell_1^5 on the whole window,
        // which admits a relation that disappears at higher precision.
        let f = FieldDesc::with_order(3).unwrap();
        let nu: Index = "1,5".parse().unwrap();
        let u = crate::motives::unit_point(&f, 2);
        let r = independence_report(&f, &nu, &u, &IndependenceConfig::default()).unwrap();
        assert_eq!(r.relation_count, 0);
        assert_eq!(r.unstable_count, 1);
        assert!(r.monomial.slack >= 20 && r.monomial_check.slack > r.monomial.slack);
    }

    #[test]
    fn monomial_count() {
        assert_eq!(exponent_vectors(4, 2).len(), 15);
        assert_eq!(exponent_vectors(4, 2)[0], vec![0, 0, 0, 0]);
    }

    #[test]
    fn frobenius_small() {
        let f = FieldDesc::with_order(2).unwrap();
        assert!(frobenius_case(&f, &"1,2".parse().unwrap(), 15).unwrap().0);
    }
}
