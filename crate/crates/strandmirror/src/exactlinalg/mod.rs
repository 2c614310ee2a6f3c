//! Exact scalars and sparse linear algebra.
//!
//! Everything downstream (strand-complex cohomology, Ext tables, the
//! homology of the subset complex `X(n,k)`) reduces to three primitives
//! over exact coefficients: rank over a field, homology dimensions of a
//! two-step complex, and Smith normal form over ℤ.  Entries are
//! arbitrary-precision, so nothing overflows and nothing is approximate.

mod scalar;
mod snf;

pub use scalar::{FieldKind, Scalar};
pub use snf::{smith_normal_form, solve_integer_system, SnfResult};

use std::collections::BTreeMap;

use num::{BigInt, BigRational, Zero};

use crate::{Error, Result};

/// Sparse matrix with exact entries.  Zero entries are never stored.
///
/// A matrix acts on column vectors: an `r × c` matrix maps `k^c → k^r`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    entries: BTreeMap<(usize, usize), BigInt>,
}

impl SparseMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        SparseMatrix { rows, cols, entries: BTreeMap::new() }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = SparseMatrix::zero(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::from(1));
        }
        m
    }

    pub fn from_triples<I>(rows: usize, cols: usize, triples: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, BigInt)>,
    {
        let mut m = SparseMatrix::zero(rows, cols);
        for (r, c, v) in triples {
            if r >= rows || c >= cols {
                return Err(Error::DimensionMismatch(format!(
                    "entry ({r},{c}) out of bounds for {rows}×{cols}"
                )));
            }
            let cur = m.get(r, c) + v;
            m.set(r, c, cur);
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, r: usize, c: usize) -> BigInt {
        self.entries.get(&(r, c)).cloned().unwrap_or_else(BigInt::zero)
    }

    /// Sets an entry, dropping it from storage when zero.
    pub fn set(&mut self, r: usize, c: usize, v: BigInt) {
        assert!(r < self.rows && c < self.cols, "index out of bounds");
        if v.is_zero() {
            self.entries.remove(&(r, c));
        } else {
            self.entries.insert((r, c), v);
        }
    }

    /// Adds `v` to the entry at `(r, c)`.
    pub fn add_to(&mut self, r: usize, c: usize, v: &BigInt) {
        let cur = self.get(r, c) + v;
        self.set(r, c, cur);
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, &BigInt)> {
        self.entries.iter().map(|(&(r, c), v)| (r, c, v))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// Matrix product `self · rhs`.
    pub fn mul(&self, rhs: &SparseMatrix) -> Result<SparseMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}×{} · {}×{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        // rhs by rows for sparse access
        let mut rhs_rows: Vec<Vec<(usize, &BigInt)>> = vec![Vec::new(); rhs.rows];
        for (r, c, v) in rhs.iter() {
            rhs_rows[r].push((c, v));
        }
        let mut out = SparseMatrix::zero(self.rows, rhs.cols);
        for (r, mid, v) in self.iter() {
            for &(c, w) in &rhs_rows[mid] {
                out.add_to(r, c, &(v * w));
            }
        }
        Ok(out)
    }

    pub fn transpose(&self) -> SparseMatrix {
        let mut out = SparseMatrix::zero(self.cols, self.rows);
        for (r, c, v) in self.iter() {
            out.set(c, r, v.clone());
        }
        out
    }

    /// Rank over the requested field.  Integer kind is rejected: over ℤ the
    /// meaningful invariant is the Smith normal form.
    pub fn rank(&self, field: FieldKind) -> Result<usize> {
        match field {
            FieldKind::Z => Err(Error::IntegerRank),
            FieldKind::Q => Ok(rank_rational(self)),
            FieldKind::Fp(p) => {
                FieldKind::check_prime(p)?;
                Ok(rank_mod_p(self, p))
            }
        }
    }
}

/// Field operations used by the elimination skeleton.
trait FieldOps {
    type Elem: Clone + PartialEq;
    fn zero(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
}

struct RatOps;

impl FieldOps for RatOps {
    type Elem = BigRational;
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn div(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a / b
    }
}

struct FpOps {
    p: u64,
}

impl FieldOps for FpOps {
    type Elem = u64;
    fn zero(&self) -> u64 {
        0
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        (a + self.p - b) % self.p
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        mulmod(*a, *b, self.p)
    }
    fn div(&self, a: &u64, b: &u64) -> u64 {
        mulmod(*a, inv_mod(*b, self.p), self.p)
    }
}

/// Gaussian elimination over ℚ with a Markowitz-style least-fill pivot.
///
/// The pivot choice only affects fill-in; the returned rank is
/// pivot-independent.
fn rank_rational(m: &SparseMatrix) -> usize {
    let mut rows: Vec<BTreeMap<usize, BigRational>> = vec![BTreeMap::new(); m.rows()];
    for (r, c, v) in m.iter() {
        rows[r].insert(c, BigRational::from(v.clone()));
    }
    eliminate(rows, &RatOps)
}

fn rank_mod_p(m: &SparseMatrix, p: u64) -> usize {
    let pb = BigInt::from(p);
    let mut rows: Vec<BTreeMap<usize, u64>> = vec![BTreeMap::new(); m.rows()];
    for (r, c, v) in m.iter() {
        let mut red = v % &pb;
        if red < BigInt::zero() {
            red += &pb;
        }
        let red: u64 = red.try_into().expect("residue fits in u64");
        if red != 0 {
            rows[r].insert(c, red);
        }
    }
    eliminate(rows, &FpOps { p })
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn inv_mod(a: u64, p: u64) -> u64 {
    // Fermat: p is prime and a ≠ 0 mod p.
    let mut base = a % p;
    let mut exp = p - 2;
    let mut acc: u64 = 1;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulmod(acc, base, p);
        }
        base = mulmod(base, base, p);
        exp >>= 1;
    }
    acc
}

fn eliminate<F: FieldOps>(mut rows: Vec<BTreeMap<usize, F::Elem>>, field: &F) -> usize {
    let nrows = rows.len();
    let mut active_rows: Vec<bool> = rows.iter().map(|r| !r.is_empty()).collect();
    let mut col_count: BTreeMap<usize, usize> = BTreeMap::new();
    for (r, row) in rows.iter().enumerate() {
        if active_rows[r] {
            for &c in row.keys() {
                *col_count.entry(c).or_insert(0) += 1;
            }
        }
    }
    let mut rank = 0;
    loop {
        // Markowitz pivot: minimize (row_nnz − 1)(col_nnz − 1), ties by index.
        let mut best: Option<(usize, usize, usize)> = None;
        for r in 0..nrows {
            if !active_rows[r] || rows[r].is_empty() {
                continue;
            }
            let rn = rows[r].len();
            for &c in rows[r].keys() {
                let cn = col_count[&c];
                let score = (rn - 1) * (cn - 1);
                if best.map_or(true, |(s, br, bc)| score < s || (score == s && (r, c) < (br, bc))) {
                    best = Some((score, r, c));
                }
            }
        }
        let Some((_, pr, pc)) = best else { break };
        rank += 1;
        let pivot_row = rows[pr].clone();
        let pivot_val = pivot_row[&pc].clone();
        active_rows[pr] = false;
        for &c in pivot_row.keys() {
            *col_count.get_mut(&c).unwrap() -= 1;
        }
        for r in 0..nrows {
            if !active_rows[r] {
                continue;
            }
            let Some(val) = rows[r].get(&pc).cloned() else { continue };
            let factor = field.div(&val, &pivot_val);
            // row_r -= factor · pivot_row
            for (&c, pv) in &pivot_row {
                let delta = field.mul(&factor, pv);
                let had = rows[r].contains_key(&c);
                let new_val = match rows[r].get(&c) {
                    Some(old) => field.sub(old, &delta),
                    None => field.sub(&field.zero(), &delta),
                };
                let now_zero = field.is_zero(&new_val);
                if now_zero {
                    rows[r].remove(&c);
                } else {
                    rows[r].insert(c, new_val);
                }
                match (had, now_zero) {
                    (false, false) => *col_count.entry(c).or_insert(0) += 1,
                    (true, true) => *col_count.get_mut(&c).unwrap() -= 1,
                    _ => {}
                }
            }
            debug_assert!(!rows[r].contains_key(&pc));
        }
    }
    rank
}

/// Dimension of `ker(d_out) / im(d_in)` over a field.
///
/// `d_in : C_prev → C_mid`, `d_out : C_mid → C_next`, so the middle dimension
/// is `rows(d_in) = cols(d_out)`.  Fails if the dimensions disagree or if
/// `d_out ∘ d_in ≠ 0`.
pub fn homology_dims(d_in: &SparseMatrix, d_out: &SparseMatrix, field: FieldKind) -> Result<usize> {
    if d_in.rows() != d_out.cols() {
        return Err(Error::DimensionMismatch(format!(
            "middle dimension: d_in has {} rows, d_out has {} cols",
            d_in.rows(),
            d_out.cols()
        )));
    }
    if !d_out.mul(d_in)?.is_zero() {
        return Err(Error::NonzeroComposite);
    }
    let mid = d_in.rows();
    let ker = mid - d_out.rank(field)?;
    let im = d_in.rank(field)?;
    Ok(ker - im)
}

/// Homology of a two-step integral complex: free rank and torsion invariants.
///
/// Torsion comes from the nontrivial invariant factors of `d_in`.
pub fn homology_z(d_in: &SparseMatrix, d_out: &SparseMatrix) -> Result<(usize, Vec<BigInt>)> {
    if d_in.rows() != d_out.cols() {
        return Err(Error::DimensionMismatch(format!(
            "middle dimension: d_in has {} rows, d_out has {} cols",
            d_in.rows(),
            d_out.cols()
        )));
    }
    if !d_out.mul(d_in)?.is_zero() {
        return Err(Error::NonzeroComposite);
    }
    let mid = d_in.rows();
    let snf_out = smith_normal_form(d_out, false);
    let snf_in = smith_normal_form(d_in, false);
    let betti = mid - snf_out.rank - snf_in.rank;
    let torsion: Vec<BigInt> =
        snf_in.diagonal.iter().filter(|d| **d > BigInt::from(1)).cloned().collect();
    Ok((betti, torsion))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: usize, cols: usize, entries: &[(usize, usize, i64)]) -> SparseMatrix {
        SparseMatrix::from_triples(
            rows,
            cols,
            entries.iter().map(|&(r, c, v)| (r, c, BigInt::from(v))),
        )
        .unwrap()
    }

    #[test]
    fn rank_empty_matrix_is_zero() {
        let z = SparseMatrix::zero(0, 0);
        assert_eq!(z.rank(FieldKind::Q).unwrap(), 0);
    }

    #[test]
    fn rank_identity() {
        assert_eq!(SparseMatrix::identity(3).rank(FieldKind::Q).unwrap(), 3);
    }

    #[test]
    fn rank_dependent_rows() {
        // [[2,4],[1,2]]: second row is half the first; hand elimination gives 1.
        let a = m(2, 2, &[(0, 0, 2), (0, 1, 4), (1, 0, 1), (1, 1, 2)]);
        assert_eq!(a.rank(FieldKind::Q).unwrap(), 1);
        assert_eq!(a.rank(FieldKind::fp(5).unwrap()).unwrap(), 1);
    }

    #[test]
    fn rank_rejects_integers() {
        let a = SparseMatrix::identity(2);
        assert!(matches!(a.rank(FieldKind::Z), Err(Error::IntegerRank)));
    }

    #[test]
    fn rank_depends_on_characteristic() {
        let a = m(1, 1, &[(0, 0, 2)]);
        assert_eq!(a.rank(FieldKind::Q).unwrap(), 1);
        assert_eq!(a.rank(FieldKind::fp(2).unwrap()).unwrap(), 0);
    }

    #[test]
    fn homology_zero_differentials() {
        let d_in = SparseMatrix::zero(5, 0);
        let d_out = SparseMatrix::zero(0, 5);
        assert_eq!(homology_dims(&d_in, &d_out, FieldKind::Q).unwrap(), 5);
    }

    #[test]
    fn homology_exact_identity() {
        let d_in = SparseMatrix::identity(4);
        let d_out = SparseMatrix::zero(0, 4);
        assert_eq!(homology_dims(&d_in, &d_out, FieldKind::Q).unwrap(), 0);
    }

    #[test]
    fn homology_multiplication_by_two_over_f2() {
        // k →(2) k : over F_2 the map vanishes, homology at the source is 1.
        let d_in = SparseMatrix::zero(1, 0);
        let d_out = m(1, 1, &[(0, 0, 2)]);
        assert_eq!(homology_dims(&d_in, &d_out, FieldKind::fp(2).unwrap()).unwrap(), 1);
        assert_eq!(homology_dims(&d_in, &d_out, FieldKind::Q).unwrap(), 0);
    }

    #[test]
    fn homology_rejects_nonzero_composite() {
        let d_in = SparseMatrix::identity(2);
        let d_out = SparseMatrix::identity(2);
        assert!(matches!(
            homology_dims(&d_in, &d_out, FieldKind::Q),
            Err(Error::NonzeroComposite)
        ));
    }

    #[test]
    fn homology_rejects_dimension_mismatch() {
        let d_in = SparseMatrix::zero(3, 1);
        let d_out = SparseMatrix::zero(1, 2);
        assert!(homology_dims(&d_in, &d_out, FieldKind::Q).is_err());
    }

    #[test]
    fn homology_permutation_invariant() {
        // permuting rows/columns of the differentials preserves homology dims
        let d_in = m(3, 2, &[(0, 0, 1), (1, 0, 2), (2, 1, 3)]);
        let d_out = m(1, 3, &[(0, 0, 6), (0, 1, -3), (0, 2, 0)]);
        let h = homology_dims(&d_in, &d_out, FieldKind::Q).unwrap();
        // swap middle coordinates 0 and 2 in both matrices
        let d_in_p = m(3, 2, &[(2, 0, 1), (1, 0, 2), (0, 1, 3)]);
        let d_out_p = m(1, 3, &[(0, 2, 6), (0, 1, -3), (0, 0, 0)]);
        assert_eq!(homology_dims(&d_in_p, &d_out_p, FieldKind::Q).unwrap(), h);
    }
}
