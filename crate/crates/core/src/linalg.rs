//! Exact Gaussian elimination over any of the supported fields.

use crate::fields::{FieldDescriptor, FieldElement};

pub type Row = Vec<FieldElement>;

#[derive(Debug, Clone)]
pub struct Echelon {
    /// Reduced rows; only the first `pivots.len()` are nonzero.
    pub rows: Vec<Row>,
    pub pivots: Vec<usize>,
    pub cols: usize,
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

pub fn rref(f: &FieldDescriptor, mut rows: Vec<Row>, cols: usize) -> Echelon {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !f.is_zero(&rows[i][c])) else {
            continue;
        };
        rows.swap(r, p);
        let inv = f.inv(&rows[r][c]).expect("nonzero pivot");
        for x in rows[r].iter_mut() {
            *x = f.mul(x, &inv);
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || f.is_zero(&row[c]) {
                continue;
            }
            let factor = row[c].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                *x = f.sub(x, &f.mul(&factor, p));
            }
        }
        pivots.push(c);
        r += 1;
    }
    Echelon { rows, pivots, cols }
}

/// Kernel basis, one vector per free column in increasing order; each has
/// a 1 in its free column and 0 in the other free columns.
pub fn kernel(f: &FieldDescriptor, rows: Vec<Row>, cols: usize) -> Vec<Row> {
    let e = rref(f, rows, cols);
    let free: Vec<usize> = (0..cols).filter(|c| !e.pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![f.zero(); cols];
            v[fc] = f.one();
            for (r, &pc) in e.pivots.iter().enumerate() {
                v[pc] = f.neg(&e.rows[r][fc]);
            }
            v
        })
        .collect()
}

/// Some solution of `A x = b` (free variables set to zero), or `None` when
/// the system is inconsistent.
pub fn solve(f: &FieldDescriptor, a: &[Row], b: &[FieldElement], cols: usize) -> Option<Row> {
    let aug: Vec<Row> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let e = rref(f, aug, cols + 1);
    if e.pivots.last() == Some(&cols) {
        return None;
    }
    let mut x = vec![f.zero(); cols];
    for (r, &pc) in e.pivots.iter().enumerate() {
        x[pc] = e.rows[r][cols].clone();
    }
    Some(x)
}

pub fn mat_vec(f: &FieldDescriptor, a: &[Row], x: &[FieldElement]) -> Row {
    a.iter()
        .map(|row| {
            row.iter()
                .zip(x)
                .fold(f.zero(), |acc, (p, q)| f.add(&acc, &f.mul(p, q)))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(f: &FieldDescriptor, rows: &[&[i64]]) -> Vec<Row> {
        rows.iter().map(|r| r.iter().map(|&x| f.from_i64(x)).collect()).collect()
    }

    #[test]
    fn rank_and_kernel() {
        let f = FieldDescriptor::Rational;
        let a = m(&f, &[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        let k = kernel(&f, a.clone(), 3);
        assert_eq!(k.len(), 1);
        assert!(mat_vec(&f, &a, &k[0]).iter().all(|x| f.is_zero(x)));
        assert_eq!(rref(&f, a, 3).rank(), 2);
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let f = FieldDescriptor::prime(5).unwrap();
        let a = m(&f, &[&[1, 1], &[2, 2]]);
        let x = solve(&f, &a, &[f.from_i64(3), f.from_i64(1)], 2).unwrap();
        assert_eq!(x, vec![f.from_i64(3), f.zero()]);
        assert!(solve(&f, &a, &[f.from_i64(3), f.from_i64(2)], 2).is_none());
    }
}
