//! Small exact linear algebra over the rationals (row reduction, rank, kernels).

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::number::{scale_to_integers, IVec, Rational};

fn to_rows(rows: &[IVec]) -> Vec<Vec<Rational>> {
    rows.iter()
        .map(|r| r.iter().cloned().map(Rational::from_integer).collect())
        .collect()
}

/// Reduced row echelon form in place; returns the pivot columns.
fn rref(m: &mut [Vec<Rational>], cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        if row == m.len() {
            break;
        }
        let Some(p) = (row..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let inv = Rational::one() / &m[row][col];
        for x in m[row].iter_mut() {
            *x *= &inv;
        }
        for r in 0..m.len() {
            if r != row && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for c in col..cols {
                    let delta = &f * &m[row][c];
                    m[r][c] -= delta;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    pivots
}

pub fn rank(rows: &[IVec]) -> usize {
    let Some(first) = rows.first() else {
        return 0;
    };
    let cols = first.len();
    let mut m = to_rows(rows);
    rref(&mut m, cols).len()
}

/// Integer basis of `{x : r·x = 0 for every row r}` in dimension `dim`.
pub fn null_space(rows: &[IVec], dim: usize) -> Vec<IVec> {
    let mut m = to_rows(rows);
    let pivots = rref(&mut m, dim);
    let free: Vec<usize> = (0..dim).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = vec![Rational::zero(); dim];
            x[f] = Rational::one();
            for (r, &pc) in pivots.iter().enumerate() {
                x[pc] = -m[r][f].clone();
            }
            scale_to_integers(&x)
        })
        .collect()
}

/// Indices of a maximal linearly independent subset, chosen greedily in order.
pub fn independent_subset(rows: &[IVec]) -> Vec<usize> {
    let mut chosen: Vec<usize> = Vec::new();
    let mut basis: Vec<IVec> = Vec::new();
    for (i, r) in rows.iter().enumerate() {
        basis.push(r.clone());
        if rank(&basis) == basis.len() {
            chosen.push(i);
        } else {
            basis.pop();
        }
    }
    chosen
}

/// Integer basis of the orthogonal complement of a nonzero vector `n`:
/// `n_p e_j - n_j e_p` for `j != p`, where `p` is the first nonzero entry.
pub fn complement_basis(n: &[BigInt]) -> Vec<IVec> {
    let k = n.len();
    let p = n.iter().position(|x| !x.is_zero()).expect("nonzero normal");
    (0..k)
        .filter(|&j| j != p)
        .map(|j| {
            let mut e = vec![BigInt::zero(); k];
            e[j] = n[p].clone();
            e[p] = -n[j].clone();
            e
        })
        .collect()
}

/// Exact inverse of a square rational matrix, `None` if singular.
pub fn inverse(m: &[Vec<Rational>]) -> Option<Vec<Vec<Rational>>> {
    let n = m.len();
    let mut aug: Vec<Vec<Rational>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
            r
        })
        .collect();
    let pivots = rref(&mut aug, 2 * n);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::number::{idot, ivec_from_i64, rat};

    #[test]
    fn rank_and_kernel() {
        let rows = vec![ivec_from_i64(&[1, 2, 3]), ivec_from_i64(&[2, 4, 6])];
        assert_eq!(rank(&rows), 1);
        let ker = null_space(&rows, 3);
        assert_eq!(ker.len(), 2);
        for k in &ker {
            assert!(idot(k, &rows[0]).is_zero());
        }
        assert_eq!(independent_subset(&rows), vec![0]);
    }

    #[test]
    fn complement_is_orthogonal_and_spanning() {
        let n = ivec_from_i64(&[0, 3, -2]);
        let basis = complement_basis(&n);
        assert_eq!(basis.len(), 2);
        for b in &basis {
            assert!(idot(b, &n).is_zero());
        }
        let mut all = basis.clone();
        all.push(n);
        assert_eq!(rank(&all), 3);
    }

    #[test]
    fn inverse_of_small_matrix() {
        let m = vec![vec![rat(2, 1), rat(1, 1)], vec![rat(1, 1), rat(1, 1)]];
        let inv = inverse(&m).unwrap();
        assert_eq!(inv, vec![vec![rat(1, 1), rat(-1, 1)], vec![rat(-1, 1), rat(2, 1)]]);
        assert!(inverse(&[vec![rat(1, 1), rat(2, 1)], vec![rat(2, 1), rat(4, 1)]]).is_none());
    }
}
