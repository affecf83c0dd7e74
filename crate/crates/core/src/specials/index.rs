use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A tuple of positive integers (n_1, ..., n_d).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Index(Vec<u32>);

impl Index {
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if let Some(pos) = parts.iter().position(|&n| n == 0) {
            return Err(Error::InvalidIndex(format!("index parts must be ≥ 1 (part {} is 0)", pos + 1)));
        }
        Ok(Index(parts))
    }

    /// The empty index of depth 0.
    pub fn empty() -> Self {
        Index(Vec::new())
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn depth(&self) -> usize {
        self.0.len()
    }

    pub fn weight(&self) -> u64 {
        self.0.iter().map(|&n| n as u64).sum()
    }

    /// n_i, 1-based.
    pub fn part(&self, i: usize) -> u32 {
        self.0[i - 1]
    }

    /// (n_j, ..., n_{i-1}) for 1 <= j <= i <= d + 1.
    pub fn slice(&self, i: usize, j: usize) -> Result<Index> {
        if j < 1 || j > i || i > self.depth() + 1 {
            return Err(Error::InvalidIndex(format!("slice ({i},{j}) outside depth {}", self.depth())));
        }
        Ok(Index(self.0[j - 1..i - 1].to_vec()))
    }

    /// w_i = n_i + ... + n_d for i = 1..=d+1 (w_{d+1} = 0).
    pub fn tail_weights(&self) -> Vec<u64> {
        let mut out = vec![0u64; self.depth() + 1];
        for i in (0..self.depth()).rev() {
            out[i] = out[i + 1] + self.0[i] as u64;
        }
        out
    }

    /// Every part multiplied by k.
    pub fn scaled(&self, k: u32) -> Index {
        Index(self.0.iter().map(|&n| n * k).collect())
    }

    pub fn require_nonempty(&self) -> Result<()> {
        if self.0.is_empty() {
            Err(Error::InvalidIndex("depth must be at least 1".into()))
        } else {
            Ok(())
        }
    }

    /// All indices of depth 1..=max_depth and weight <= max_weight.
    pub fn all_up_to(max_depth: usize, max_weight: u32) -> Vec<Index> {
        fn rec(prefix: &mut Vec<u32>, left: u32, depth_left: usize, out: &mut Vec<Index>) {
            if !prefix.is_empty() {
                out.push(Index(prefix.clone()));
            }
            if depth_left == 0 {
                return;
            }
            for n in 1..=left {
                prefix.push(n);
                rec(prefix, left - n, depth_left - 1, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        rec(&mut Vec::new(), max_weight, max_depth, &mut out);
        out.sort_by(|a, b| (a.depth(), a.weight(), &a.0).cmp(&(b.depth(), b.weight(), &b.0)));
        out
    }
}

impl TryFrom<Vec<u32>> for Index {
    type Error = Error;
    fn try_from(v: Vec<u32>) -> Result<Self> {
        Index::new(v)
    }
}

impl From<Index> for Vec<u32> {
    fn from(i: Index) -> Self {
        i.0
    }
}

impl fmt::Display for Index {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|n| n.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl FromStr for Index {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().trim_start_matches('(').trim_end_matches(')');
        if s.trim().is_empty() {
            return Ok(Index::empty());
        }
        let parts = s
            .split(',')
            .map(|x| x.trim().parse::<u32>().map_err(|_| Error::Parse(format!("bad index part '{x}'"))))
            .collect::<Result<Vec<_>>>()?;
        Index::new(parts)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_slice() {
        let nu: Index = "1,2,3".parse().unwrap();
        assert_eq!(nu.weight(), 6);
        assert_eq!(nu.slice(4, 2).unwrap().parts(), &[2, 3]);
        assert_eq!(nu.slice(3, 3).unwrap().depth(), 0);
        assert_eq!(nu.tail_weights(), vec![6, 5, 3, 0]);
        assert!(matches!("0,1".parse::<Index>(), Err(Error::InvalidIndex(_))));
    }

    #[test]
    fn enumeration() {
        let all = Index::all_up_to(3, 5);
        assert_eq!(all.iter().filter(|i| i.depth() == 1).count(), 5);
        assert_eq!(all.iter().filter(|i| i.depth() == 2).count(), 10);
        assert_eq!(all.iter().filter(|i| i.depth() == 3).count(), 10);
    }
}
