use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::laurent::{poly_codes, poly_from_codes, FieldJson, LaurentL, RationalK};
use crate::relations::linalg::{in_span, kernel};
use crate::scalars::{FieldDesc, Fq, PolyTheta};

/// Required excess of equations over unknowns.
pub const DEFAULT_SLACK: i64 = 20;

/// Largest exhaustive scan allowed.
const EXHAUSTIVE_LIMIT: u128 = 1 << 20;

#[derive(Clone, Debug)]
pub struct RelationQuery {
    pub values: Vec<LaurentL>,
    /// Largest theta-degree of a coefficient polynomial.
    pub degree_bound: usize,
    pub slack_min: i64,
}

impl RelationQuery {
    pub fn new(values: Vec<LaurentL>, degree_bound: usize) -> Self {
        RelationQuery { values, degree_bound, slack_min: DEFAULT_SLACK }
    }

    pub fn with_slack(mut self, slack_min: i64) -> Self {
        self.slack_min = slack_min;
        self
    }

    fn field(&self) -> Result<FieldDesc> {
        let f = self.values.first().ok_or_else(|| Error::InvalidArgument("no values".into()))?.field().clone();
        if self.values.iter().any(|v| v.field() != &f) {
            return Err(Error::FieldMismatch);
        }
        Ok(f)
    }

    pub fn unknowns(&self) -> usize {
        self.values.len() * (self.degree_bound + 1)
    }

    /// Exponent range [lo, hi] of s on which every theta^k v_i is known.
    pub fn window(&self) -> Result<(i64, i64)> {
        let f = self.field()?;
        let shift = self.degree_bound as i64 * (f.q() as i64 - 1);
        let floors: Vec<i64> = self.values.iter().filter_map(|v| v.floor()).collect();
        let lo = match floors.iter().max() {
            Some(&fl) => fl + shift,
            None => self.values.iter().map(|v| v.low()).min().unwrap_or(0),
        };
        let hi = self.values.iter().filter_map(|v| v.top()).max().map_or(lo, |t| (t + shift).max(lo));
        Ok((lo, hi))
    }

    /// Coefficient equations: row e holds the s^e coefficients of theta^k v_i.
    fn equations(&self, f: &FieldDesc, lo: i64, hi: i64) -> Vec<Vec<Fq>> {
        let b = self.degree_bound;
        let step = f.q() as i64 - 1;
        (lo..=hi)
            .map(|e| {
                let mut row = Vec::with_capacity(self.unknowns());
                for v in &self.values {
                    for k in 0..=b {
                        let c = v.coeff(e - k as i64 * step).unwrap_or(Fq::ZERO);
                        row.push(if k % 2 == 1 { f.neg(c) } else { c });
                    }
                }
                row
            })
            .filter(|row| row.iter().any(|c| !c.is_zero()))
            .collect()
    }

    /// Coefficient polynomials of a vector of unknowns.
    pub fn polynomials(&self, f: &FieldDesc, v: &[Fq]) -> Vec<PolyTheta> {
        v.chunks(self.degree_bound + 1).map(|c| PolyTheta::new(f, c.to_vec())).collect()
    }

    /// sum_i c_i(theta) v_i vanishes wherever it is known.
    pub fn substitutes_to_zero(&self, coeffs: &[PolyTheta]) -> Result<bool> {
        let f = self.field()?;
        let mut acc: Option<LaurentL> = None;
        for (c, v) in coeffs.iter().zip(&self.values) {
            if c.is_zero() {
                continue;
            }
            let term = LaurentL::from_poly(c).mul(v)?;
            acc = Some(match acc {
                Some(a) => a.add(&term)?,
                None => term,
            });
        }
        Ok(acc.is_none_or(|a| a.field() == &f && a.is_zero()))
    }
}

/// Kernel of the relation map, as coefficient-polynomial tuples.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationBasis {
    pub field: FieldDesc,
    pub relations: Vec<Vec<PolyTheta>>,
    /// Nonzero equations minus unknowns.
    pub slack: i64,
    /// Every relation re-substitutes to zero on the whole window.
    pub verified: bool,
    pub degree_bound: usize,
    pub unknowns: usize,
    pub equations: usize,
    pub window: (i64, i64),
}

impl RelationBasis {
    pub fn is_empty(&self) -> bool {
        self.relations.is_empty()
    }

    /// The relations as flat F_q vectors, in unknown order.
    pub fn vectors(&self) -> Vec<Vec<Fq>> {
        let b = self.degree_bound;
        self.relations
            .iter()
            .map(|rel| rel.iter().flat_map(|p| (0..=b).map(move |k| p.coeff(k))).collect())
            .collect()
    }
}

#[derive(Serialize, Deserialize)]
struct RelationBasisJson {
    field: FieldJson,
    basis: Vec<Vec<Vec<u32>>>,
    slack: i64,
    verified: bool,
    degree_bound: usize,
    unknowns: usize,
    equations: usize,
    window: (i64, i64),
}

impl Serialize for RelationBasis {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RelationBasisJson {
            field: FieldJson::from(&self.field),
            basis: self.relations.iter().map(|r| r.iter().map(poly_codes).collect()).collect(),
            slack: self.slack,
            verified: self.verified,
            degree_bound: self.degree_bound,
            unknowns: self.unknowns,
            equations: self.equations,
            window: self.window,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for RelationBasis {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = RelationBasisJson::deserialize(d)?;
        let f = j.field.to_field().map_err(serde::de::Error::custom)?;
        let relations = j
            .basis
            .iter()
            .map(|r| r.iter().map(|c| poly_from_codes(&f, c)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()
            .map_err(serde::de::Error::custom)?;
        Ok(RelationBasis {
            field: f,
            relations,
            slack: j.slack,
            verified: j.verified,
            degree_bound: j.degree_bound,
            unknowns: j.unknowns,
            equations: j.equations,
            window: j.window,
        })
    }
}

/// All F_q-linear relations sum_i c_i(theta) v_i = 0 with deg c_i <= B that
/// hold on the known window. An empty basis is evidence of independence to
/// degree B, never a proof.
pub fn find_linear_relations(query: &RelationQuery) -> Result<RelationBasis> {
    let f = query.field()?;
    let (lo, hi) = query.window()?;
    let n = query.unknowns();
    let available = (hi - lo + 1).max(0) as usize;
    let required = n + query.slack_min.max(0) as usize;
    if available < required {
        return Err(Error::WindowTooShort { available, required });
    }
    let rows = query.equations(&f, lo, hi);
    let vectors = kernel(&f, &rows, n);
    let relations: Vec<Vec<PolyTheta>> = vectors.iter().map(|v| query.polynomials(&f, v)).collect();
    let verified = relations.iter().map(|r| query.substitutes_to_zero(r)).collect::<Result<Vec<_>>>()?.into_iter().all(|b| b);
    Ok(RelationBasis {
        field: f,
        relations,
        slack: rows.len() as i64 - n as i64,
        verified,
        degree_bound: query.degree_bound,
        unknowns: n,
        equations: rows.len(),
        window: (lo, hi),
    })
}

/// Every coefficient vector (in unknown order) whose relation vanishes on the
/// window, found by trying all q^(m(B+1)) of them.
pub fn exhaustive_relations(query: &RelationQuery) -> Result<Vec<Vec<Fq>>> {
    let f = query.field()?;
    let n = query.unknowns();
    let q = f.q() as u128;
    let total = q.checked_pow(n as u32).filter(|&t| t <= EXHAUSTIVE_LIMIT).ok_or(Error::BudgetExceeded {
        required: q.saturating_pow(n as u32),
        budget: EXHAUSTIVE_LIMIT as u64,
    })?;
    let mut out = Vec::new();
    for code in 0..total {
        let mut c = code;
        let v: Vec<Fq> = (0..n)
            .map(|_| {
                let d = (c % q) as u32;
                c /= q;
                Fq(d)
            })
            .collect();
        if query.substitutes_to_zero(&query.polynomials(&f, &v))? {
            out.push(v);
        }
    }
    Ok(out)
}

/// Whether the kernel basis spans exactly the exhaustively found set.
pub fn kernel_matches_exhaustive(basis: &RelationBasis, exhaustive: &[Vec<Fq>]) -> bool {
    let f = &basis.field;
    let vecs = basis.vectors();
    let expected = (f.q() as usize).pow(vecs.len() as u32);
    exhaustive.len() == expected && exhaustive.iter().all(|v| in_span(f, &vecs, v))
}

/// Outcome of a reconstruction attempt at one precision.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Reconstruction {
    pub value: Option<RationalK>,
    pub degree_bound: usize,
    pub slack: i64,
    pub window: (i64, i64),
}

/// Looks for a/b with deg a, deg b <= B and b v = a on the known window.
pub fn rational_reconstruct(v: &LaurentL, degree_bound: usize, slack_min: i64) -> Result<Reconstruction> {
    let f = v.field();
    let query = RelationQuery::new(vec![LaurentL::one(f), v.clone()], degree_bound).with_slack(slack_min);
    let basis = find_linear_relations(&query)?;
    let value = basis
        .relations
        .iter()
        .find(|r| !r[1].is_zero())
        .map(|r| RationalK::new(r[0].neg(), r[1].clone()))
        .transpose()?;
    Ok(Reconstruction { value, degree_bound, slack: basis.slack, window: basis.window })
}

/// Reconstructions at two precisions; stable when both succeed and agree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StableReconstruction {
    pub value: Option<RationalK>,
    pub stable: bool,
    pub low: Reconstruction,
    pub high: Reconstruction,
    pub precision_pair: (i64, i64),
}

pub fn rational_reconstruct_stable(
    low: &LaurentL,
    high: &LaurentL,
    precision_pair: (i64, i64),
    degree_bound: usize,
    slack_min: i64,
) -> Result<StableReconstruction> {
    if precision_pair.1 <= precision_pair.0 {
        return Err(Error::InvalidArgument("the second precision must be larger".into()));
    }
    let lo = rational_reconstruct(low, degree_bound, slack_min)?;
    let hi = rational_reconstruct(high, degree_bound, slack_min)?;
    let stable = lo.value.is_some() && lo.value == hi.value;
    Ok(StableReconstruction {
        value: if stable { lo.value.clone() } else { None },
        stable,
        low: lo,
        high: hi,
        precision_pair,
    })
}
