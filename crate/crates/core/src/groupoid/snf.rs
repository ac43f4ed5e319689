//! Smith normal form over the integers.
//!
//! Arithmetic is exact on `i128` with every operation overflow-checked;
//! any intermediate leaving the `i64` range is rejected with
//! [`Error::Overflow`].

use crate::error::{Error, Result};

/// `left · input · right = diag(diagonal)` with unimodular `left`, `right`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub rows: usize,
    pub cols: usize,
    /// Diagonal entries, non-negative, each dividing the next nonzero one;
    /// length `min(rows, cols)`.
    pub diagonal: Vec<i64>,
    pub left: Vec<Vec<i64>>,
    pub right: Vec<Vec<i64>>,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        self.diagonal.iter().filter(|&&d| d != 0).count()
    }

    /// Invariant factors: the nonzero diagonal entries.
    pub fn invariant_factors(&self) -> Vec<i64> {
        self.diagonal.iter().copied().filter(|&d| d != 0).collect()
    }
}

fn checked(x: Option<i128>, what: &str) -> Result<i128> {
    match x {
        Some(v) if v > i64::MIN as i128 && v <= i64::MAX as i128 => Ok(v),
        _ => Err(Error::Overflow(format!("{what} leaves the 64-bit range"))),
    }
}

struct Work {
    a: Vec<Vec<i128>>,
    u: Vec<Vec<i128>>,
    v: Vec<Vec<i128>>,
}

impl Work {
    /// row_i -= q * row_t (on `a` and `u`)
    fn row_axpy(&mut self, i: usize, t: usize, q: i128) -> Result<()> {
        for m in [&mut self.a, &mut self.u] {
            let (ri, rt) = two_rows(m, i, t);
            for (x, &y) in ri.iter_mut().zip(rt.iter()) {
                *x = checked(y.checked_mul(q).and_then(|p| x.checked_sub(p)), "row operation")?;
            }
        }
        Ok(())
    }

    /// col_j -= q * col_t (on `a` and `v`)
    fn col_axpy(&mut self, j: usize, t: usize, q: i128) -> Result<()> {
        for m in [&mut self.a, &mut self.v] {
            for row in m.iter_mut() {
                let y = row[t];
                row[j] = checked(y.checked_mul(q).and_then(|p| row[j].checked_sub(p)), "column operation")?;
            }
        }
        Ok(())
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap(i, j);
        self.u.swap(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        for m in [&mut self.a, &mut self.v] {
            for row in m.iter_mut() {
                row.swap(i, j);
            }
        }
    }

    fn negate_row(&mut self, i: usize) {
        for m in [&mut self.a, &mut self.u] {
            for x in m[i].iter_mut() {
                *x = -*x;
            }
        }
    }
}

fn two_rows(m: &mut [Vec<i128>], i: usize, t: usize) -> (&mut Vec<i128>, &Vec<i128>) {
    assert_ne!(i, t);
    if i < t {
        let (lo, hi) = m.split_at_mut(t);
        (&mut lo[i], &hi[0])
    } else {
        let (lo, hi) = m.split_at_mut(i);
        (&mut hi[0], &lo[t])
    }
}

/// `q` with `|a − q·p| ≤ |p|/2`.
fn nearest_quotient(a: i128, p: i128) -> i128 {
    let q = a.div_euclid(p);
    let r = a - q * p;
    if 2 * r.abs() > p.abs() {
        q + p.signum()
    } else {
        q
    }
}

fn identity(n: usize) -> Vec<Vec<i128>> {
    (0..n).map(|i| (0..n).map(|j| i128::from(i == j)).collect()).collect()
}

/// Smith normal form of a `rows × cols` integer matrix given row-major.
pub fn smith_normal_form(matrix: &[Vec<i64>], cols: usize) -> Result<SmithForm> {
    let rows = matrix.len();
    for r in matrix {
        if r.len() != cols {
            return Err(Error::Precondition("ragged matrix".into()));
        }
    }
    let mut w = Work {
        a: matrix.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect(),
        u: identity(rows),
        v: identity(cols),
    };
    let steps = rows.min(cols);
    for t in 0..steps {
        loop {
            // smallest nonzero |entry| of the trailing block becomes the pivot
            let mut best: Option<(i128, usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    let x = w.a[i][j].abs();
                    if x != 0 && best.is_none_or(|(b, _, _)| x < b) {
                        best = Some((x, i, j));
                    }
                }
            }
            let Some((_, pi, pj)) = best else { break };
            if pi != t {
                w.swap_rows(t, pi);
            }
            if pj != t {
                w.swap_cols(t, pj);
            }
            let p = w.a[t][t];
            let mut remainder = false;
            for i in t + 1..rows {
                if w.a[i][t] != 0 {
                    w.row_axpy(i, t, nearest_quotient(w.a[i][t], p))?;
                    remainder |= w.a[i][t] != 0;
                }
            }
            for j in t + 1..cols {
                if w.a[t][j] != 0 {
                    w.col_axpy(j, t, nearest_quotient(w.a[t][j], p))?;
                    remainder |= w.a[t][j] != 0;
                }
            }
            if remainder {
                continue;
            }
            // the pivot must divide the whole trailing block
            match (t + 1..rows).find(|&i| (t + 1..cols).any(|j| w.a[i][j] % p != 0)) {
                Some(i) => w.row_axpy(t, i, -1)?,
                None => break,
            }
        }
        if w.a[t][t] < 0 {
            w.negate_row(t);
        }
    }
    let to64 = |m: Vec<Vec<i128>>| -> Vec<Vec<i64>> {
        m.into_iter().map(|r| r.into_iter().map(|x| x as i64).collect()).collect()
    };
    let diagonal = (0..steps).map(|i| w.a[i][i] as i64).collect();
    Ok(SmithForm { rows, cols, diagonal, left: to64(w.u), right: to64(w.v) })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
        let inner = b.len();
        let cols = b.first().map_or(0, |r| r.len());
        a.iter()
            .map(|r| (0..cols).map(|j| (0..inner).map(|k| r[k] * b[k][j]).sum()).collect())
            .collect()
    }

    #[test]
    fn two_by_two_example() {
        let m = vec![vec![2, 4], vec![6, 8]];
        let s = smith_normal_form(&m, 2).unwrap();
        assert_eq!(s.diagonal, vec![2, 4]);
        let d = mul(&mul(&s.left, &m), &s.right);
        assert_eq!(d, vec![vec![2, 0], vec![0, 4]]);
    }

    #[test]
    fn divisibility_fix_up() {
        let m = vec![vec![2, 0], vec![0, 3]];
        let s = smith_normal_form(&m, 2).unwrap();
        assert_eq!(s.diagonal, vec![1, 6]);
    }

    #[test]
    fn empty_and_zero_matrices() {
        let s = smith_normal_form(&[], 3).unwrap();
        assert!(s.diagonal.is_empty());
        assert_eq!(s.right.len(), 3);
        let s = smith_normal_form(&[vec![0, 0]], 2).unwrap();
        assert_eq!(s.diagonal, vec![0]);
        assert_eq!(s.rank(), 0);
    }

    #[test]
    fn overflow_is_reported() {
        let big = i64::MAX / 2;
        let m = vec![vec![big, 1], vec![1, big]];
        assert!(matches!(smith_normal_form(&m, 2), Err(Error::Overflow(_))));
    }
}
