use crate::scalars::{FieldDesc, Fq};

/// Row-reduces in place and returns the pivot columns.
pub fn rref(f: &FieldDesc, m: &mut [Vec<Fq>], cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        let Some(p) = (row..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let inv = f.inv(m[row][col]).expect("nonzero pivot");
        for c in m[row].iter_mut() {
            *c = f.mul(*c, inv);
        }
        for r in 0..m.len() {
            if r != row && !m[r][col].is_zero() {
                let factor = m[r][col];
                for c in col..cols {
                    let sub = f.mul(factor, m[row][c]);
                    m[r][c] = f.sub(m[r][c], sub);
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == m.len() {
            break;
        }
    }
    pivots
}

/// Basis of the right kernel, in reduced echelon form with respect to the
/// reversed column order: each vector's last nonzero entry is 1 and no other
/// basis vector is nonzero there.
pub fn kernel(f: &FieldDesc, rows: &[Vec<Fq>], cols: usize) -> Vec<Vec<Fq>> {
    let mut m: Vec<Vec<Fq>> = rows.to_vec();
    let pivots = rref(f, &mut m, cols);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    let mut basis: Vec<Vec<Fq>> = free
        .iter()
        .map(|&fc| {
            let mut v = vec![Fq::ZERO; cols];
            v[fc] = Fq::ONE;
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(m[r][fc]);
            }
            v
        })
        .collect();
    // Echelon form with pivots at the last nonzero coordinate.
    let mut rev: Vec<Vec<Fq>> = basis.iter().map(|v| v.iter().rev().copied().collect()).collect();
    rref(f, &mut rev, cols);
    basis = rev.into_iter().map(|v| v.into_iter().rev().collect()).collect();
    basis.retain(|v| v.iter().any(|c| !c.is_zero()));
    basis
}

/// Whether `v` lies in the F_q-span of `basis` (assumed independent).
pub fn in_span(f: &FieldDesc, basis: &[Vec<Fq>], v: &[Fq]) -> bool {
    let cols = v.len();
    let mut m: Vec<Vec<Fq>> = basis.to_vec();
    let r0 = rref(f, &mut m, cols).len();
    m.push(v.to_vec());
    rref(f, &mut m, cols).len() == r0
}
