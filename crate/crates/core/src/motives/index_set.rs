use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::specials::Index;

/// A pair (i, j) with 1 <= j < i <= d + 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IdElement {
    pub i: usize,
    pub j: usize,
}

impl IdElement {
    pub fn new(i: usize, j: usize, d: usize) -> Result<Self> {
        if j < 1 || j >= i || i > d + 1 {
            return Err(Error::InvalidIndex(format!("({i},{j}) is not in the index set for depth {d}")));
        }
        Ok(IdElement { i, j })
    }

    /// i - j.
    pub fn depth(&self) -> usize {
        self.i - self.j
    }
}

impl Ord for IdElement {
    fn cmp(&self, other: &Self) -> Ordering {
        self.depth().cmp(&other.depth()).then(self.j.cmp(&other.j))
    }
}

impl PartialOrd for IdElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for IdElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.i, self.j)
    }
}

/// All elements for depth d, smallest first: by depth, then by j.
pub fn index_set(d: usize) -> Result<Vec<IdElement>> {
    if d == 0 {
        return Err(Error::InvalidArgument("the index set needs d >= 1".into()));
    }
    Ok((1..=d)
        .flat_map(|dep| (1..=d + 1 - dep).map(move |j| IdElement { i: j + dep, j }))
        .collect())
}

pub fn successor(el: IdElement, d: usize) -> Result<Option<IdElement>> {
    IdElement::new(el.i, el.j, d)?;
    if el.i < d + 1 {
        Ok(Some(IdElement { i: el.i + 1, j: el.j + 1 }))
    } else if el.depth() < d {
        Ok(Some(IdElement { i: el.depth() + 2, j: 1 }))
    } else {
        Ok(None)
    }
}

pub fn predecessor(el: IdElement, d: usize) -> Result<Option<IdElement>> {
    IdElement::new(el.i, el.j, d)?;
    if el.j > 1 {
        Ok(Some(IdElement { i: el.i - 1, j: el.j - 1 }))
    } else if el.depth() > 1 {
        Ok(Some(IdElement { i: d + 1, j: d + 2 - el.depth() }))
    } else {
        Ok(None)
    }
}

/// (n_j, ..., n_{i-1}).
pub fn slice(index: &Index, el: IdElement) -> Result<Index> {
    IdElement::new(el.i, el.j, index.depth())?;
    index.slice(el.i, el.j)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_for_depth_two() {
        let s = index_set(2).unwrap();
        assert_eq!(s, vec![IdElement { i: 2, j: 1 }, IdElement { i: 3, j: 2 }, IdElement { i: 3, j: 1 }]);
        assert!(s.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn walk_matches_list() {
        for d in 1..=5 {
            let s = index_set(d).unwrap();
            assert_eq!(s.len(), d * (d + 1) / 2);
            for w in s.windows(2) {
                assert_eq!(successor(w[0], d).unwrap(), Some(w[1]));
                assert_eq!(predecessor(w[1], d).unwrap(), Some(w[0]));
            }
            assert_eq!(successor(*s.last().unwrap(), d).unwrap(), None);
            assert_eq!(predecessor(s[0], d).unwrap(), None);
        }
    }

    #[test]
    fn slices() {
        let nu = Index::new(vec![4, 5, 6]).unwrap();
        assert_eq!(slice(&nu, IdElement { i: 4, j: 2 }).unwrap().parts(), &[5, 6]);
        assert_eq!(IdElement::new(3, 1, 2).unwrap().depth(), 2);
        assert!(IdElement::new(5, 1, 3).is_err());
        assert!(IdElement::new(2, 2, 3).is_err());
    }
}
