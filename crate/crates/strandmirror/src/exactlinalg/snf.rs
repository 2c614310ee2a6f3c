//! Smith normal form over ℤ and an exact integer linear solver built on it.

use num::{bigint::Sign, BigInt, Integer, Signed, Zero};

use super::SparseMatrix;
use crate::{Error, Result};

/// Result of a Smith normal form computation.
///
/// `diagonal` holds the nonzero invariant factors `d_1 | d_2 | …`; `rank`
/// equals their count.  When transforms are requested, `U · M · V` equals the
/// diagonal matrix (verified before returning).
#[derive(Debug, Clone)]
pub struct SnfResult {
    pub diagonal: Vec<BigInt>,
    pub rank: usize,
    pub left: Option<SparseMatrix>,
    pub right: Option<SparseMatrix>,
}

/// Smith normal form by pivoting on least-absolute-value entries.
///
/// Dense working copy: the matrices this crate feeds in are small, and SNF
/// fill-in defeats sparse storage anyway.
pub fn smith_normal_form(m: &SparseMatrix, with_transforms: bool) -> SnfResult {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a: Vec<Vec<BigInt>> = vec![vec![BigInt::zero(); cols]; rows];
    for (r, c, v) in m.iter() {
        a[r][c] = v.clone();
    }
    let mut u: Vec<Vec<BigInt>> = identity_dense(rows);
    let mut v: Vec<Vec<BigInt>> = identity_dense(cols);

    let n = rows.min(cols);
    let mut t = 0;
    while t < n {
        let Some((pi, pj)) = find_pivot(&a, t) else { break };
        swap_rows(&mut a, &mut u, t, pi);
        swap_cols(&mut a, &mut v, t, pj);

        loop {
            // clear column t below the pivot
            let mut dirty = false;
            for i in (t + 1)..rows {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = div_nearest(&a[i][t], &a[t][t]);
                row_op(&mut a, &mut u, i, t, &q);
                if !a[i][t].is_zero() {
                    // remainder became the smaller pivot candidate
                    swap_rows(&mut a, &mut u, t, i);
                    dirty = true;
                }
            }
            for j in (t + 1)..cols {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = div_nearest(&a[t][j], &a[t][t]);
                col_op(&mut a, &mut v, j, t, &q);
                if !a[t][j].is_zero() {
                    swap_cols(&mut a, &mut v, t, j);
                    dirty = true;
                }
            }
            let col_clear = ((t + 1)..rows).all(|i| a[i][t].is_zero());
            let row_clear = ((t + 1)..cols).all(|j| a[t][j].is_zero());
            if col_clear && row_clear && !dirty {
                break;
            }
        }

        // enforce divisibility: pivot must divide every remaining entry
        let mut fixed = true;
        'scan: for i in (t + 1)..rows {
            for j in (t + 1)..cols {
                if !(&a[i][j] % &a[t][t]).is_zero() {
                    // fold row i into row t and restart this pivot
                    let one = BigInt::from(-1);
                    row_op(&mut a, &mut u, t, i, &one);
                    fixed = false;
                    break 'scan;
                }
            }
        }
        if fixed {
            t += 1;
        }
    }

    // normalize signs on the diagonal
    for i in 0..n {
        if a[i][i].sign() == Sign::Minus {
            for j in 0..cols {
                a[i][j] = -a[i][j].clone();
            }
            for j in 0..rows {
                u[i][j] = -u[i][j].clone();
            }
        }
    }

    let diagonal: Vec<BigInt> = (0..n).map(|i| a[i][i].clone()).filter(|d| !d.is_zero()).collect();
    let rank = diagonal.len();

    let (left, right) = if with_transforms {
        let us = dense_to_sparse(&u);
        let vs = dense_to_sparse(&v);
        // U · M · V must equal the diagonal
        let prod = us.mul(m).unwrap().mul(&vs).unwrap();
        let mut diag = SparseMatrix::zero(rows, cols);
        for (i, d) in diagonal.iter().enumerate() {
            diag.set(i, i, d.clone());
        }
        assert_eq!(prod, diag, "SNF transform verification failed");
        (Some(us), Some(vs))
    } else {
        (None, None)
    };

    SnfResult { diagonal, rank, left, right }
}

/// Solves `A x = b` over ℤ.  Returns `None` when no integer solution exists.
pub fn solve_integer_system(a: &SparseMatrix, b: &[BigInt]) -> Result<Option<Vec<BigInt>>> {
    if b.len() != a.rows() {
        return Err(Error::DimensionMismatch(format!(
            "rhs length {} vs {} rows",
            b.len(),
            a.rows()
        )));
    }
    let snf = smith_normal_form(a, true);
    let u = snf.left.as_ref().unwrap();
    let v = snf.right.as_ref().unwrap();
    // y solves D y = U b, then x = V y.
    let mut ub = vec![BigInt::zero(); a.rows()];
    for (r, c, coef) in u.iter() {
        ub[r] += coef * &b[c];
    }
    let mut y = vec![BigInt::zero(); a.cols()];
    for (i, ubi) in ub.iter().enumerate() {
        if i < snf.diagonal.len() {
            let d = &snf.diagonal[i];
            let (q, r) = ubi.div_rem(d);
            if !r.is_zero() {
                return Ok(None);
            }
            y[i] = q;
        } else if !ubi.is_zero() {
            return Ok(None);
        }
    }
    let mut x = vec![BigInt::zero(); a.cols()];
    for (r, c, coef) in v.iter() {
        x[r] += coef * &y[c];
    }
    Ok(Some(x))
}

fn identity_dense(n: usize) -> Vec<Vec<BigInt>> {
    let mut m = vec![vec![BigInt::zero(); n]; n];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = BigInt::from(1);
    }
    m
}

fn dense_to_sparse(d: &[Vec<BigInt>]) -> SparseMatrix {
    let rows = d.len();
    let cols = d.first().map_or(0, Vec::len);
    let mut m = SparseMatrix::zero(rows, cols);
    for (r, row) in d.iter().enumerate() {
        for (c, v) in row.iter().enumerate() {
            if !v.is_zero() {
                m.set(r, c, v.clone());
            }
        }
    }
    m
}

fn find_pivot(a: &[Vec<BigInt>], t: usize) -> Option<(usize, usize)> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut best: Option<(BigInt, usize, usize)> = None;
    for i in t..rows {
        for j in t..cols {
            if a[i][j].is_zero() {
                continue;
            }
            let mag = a[i][j].abs();
            if best.as_ref().map_or(true, |(m, _, _)| mag < *m) {
                best = Some((mag, i, j));
            }
        }
    }
    best.map(|(_, i, j)| (i, j))
}

/// Quotient rounding toward the nearest integer keeps remainders small.
fn div_nearest(a: &BigInt, b: &BigInt) -> BigInt {
    let (mut q, r) = a.div_rem(b);
    let two_r = BigInt::from(2) * r.abs();
    if two_r > b.abs() {
        if (a.sign() == b.sign()) || r.is_zero() {
            q += 1;
        } else {
            q -= 1;
        }
    }
    q
}

/// row_i -= q · row_t   (tracked in U)
fn row_op(a: &mut [Vec<BigInt>], u: &mut [Vec<BigInt>], i: usize, t: usize, q: &BigInt) {
    let cols = a[0].len();
    for j in 0..cols {
        let d = q * &a[t][j];
        a[i][j] -= d;
    }
    let un = u[0].len();
    for j in 0..un {
        let d = q * &u[t][j];
        u[i][j] -= d;
    }
}

/// col_j -= q · col_t   (tracked in V)
fn col_op(a: &mut [Vec<BigInt>], v: &mut [Vec<BigInt>], j: usize, t: usize, q: &BigInt) {
    for row in a.iter_mut() {
        let d = q * &row[t];
        row[j] -= d;
    }
    for row in v.iter_mut() {
        let d = q * &row[t];
        row[j] -= d;
    }
}

fn swap_rows(a: &mut [Vec<BigInt>], u: &mut [Vec<BigInt>], i: usize, j: usize) {
    if i != j {
        a.swap(i, j);
        u.swap(i, j);
    }
}

fn swap_cols(a: &mut [Vec<BigInt>], v: &mut [Vec<BigInt>], i: usize, j: usize) {
    if i == j {
        return;
    }
    for row in a.iter_mut() {
        row.swap(i, j);
    }
    for row in v.iter_mut() {
        row.swap(i, j);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlinalg::FieldKind;

    fn m(rows: usize, cols: usize, entries: &[(usize, usize, i64)]) -> SparseMatrix {
        SparseMatrix::from_triples(
            rows,
            cols,
            entries.iter().map(|&(r, c, v)| (r, c, BigInt::from(v))),
        )
        .unwrap()
    }

    fn diag_i64(s: &SnfResult) -> Vec<i64> {
        s.diagonal.iter().map(|d| i64::try_from(d).unwrap()).collect()
    }

    #[test]
    fn snf_of_diag_2_3() {
        let a = m(2, 2, &[(0, 0, 2), (1, 1, 3)]);
        let s = smith_normal_form(&a, true);
        assert_eq!(diag_i64(&s), vec![1, 6]);
        assert_eq!(s.rank, 2);
    }

    #[test]
    fn snf_zero_matrix() {
        let s = smith_normal_form(&SparseMatrix::zero(3, 4), false);
        assert!(s.diagonal.is_empty());
        assert_eq!(s.rank, 0);
    }

    #[test]
    fn snf_identity() {
        let s = smith_normal_form(&SparseMatrix::identity(2), true);
        assert_eq!(diag_i64(&s), vec![1, 1]);
    }

    #[test]
    fn snf_with_torsion() {
        // boundary of the real projective plane's 2-cell gives a factor 2
        let a = m(3, 3, &[(0, 0, 1), (0, 1, 1), (1, 0, 1), (1, 1, -1), (1, 2, 2), (2, 2, 2)]);
        let s = smith_normal_form(&a, true);
        let d = diag_i64(&s);
        assert_eq!(d.len(), 3);
        assert!(d.windows(2).all(|w| w[1] % w[0] == 0));
    }

    #[test]
    fn snf_rank_matches_rational_rank() {
        // random-ish fixed matrices
        let mats = [
            m(3, 3, &[(0, 0, 2), (0, 1, 4), (1, 0, 1), (1, 1, 2), (2, 2, 5)]),
            m(2, 4, &[(0, 0, 6), (0, 3, -2), (1, 1, 7)]),
            m(4, 2, &[(0, 0, 1), (1, 0, 2), (2, 1, 3), (3, 1, 4)]),
        ];
        for a in &mats {
            let s = smith_normal_form(a, false);
            assert_eq!(s.rank, a.rank(FieldKind::Q).unwrap());
        }
    }

    #[test]
    fn integer_solve() {
        // 2x + 4y = 6, x + 2y = 3 has integer solutions
        let a = m(2, 2, &[(0, 0, 2), (0, 1, 4), (1, 0, 1), (1, 1, 2)]);
        let b = vec![BigInt::from(6), BigInt::from(3)];
        let x = solve_integer_system(&a, &b).unwrap().unwrap();
        assert_eq!(&a.get(0, 0) * &x[0] + &a.get(0, 1) * &x[1], BigInt::from(6));
        // 2x = 3 has none
        let a2 = m(1, 1, &[(0, 0, 2)]);
        assert!(solve_integer_system(&a2, &[BigInt::from(3)]).unwrap().is_none());
    }
}
