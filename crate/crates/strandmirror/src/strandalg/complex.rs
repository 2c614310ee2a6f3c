//! Fixed-multidegree chain complexes and their cohomology.

use std::collections::BTreeMap;

use num::BigInt;
use serde::{Deserialize, Serialize};

use crate::combinat::SubsetLabel;
use crate::exactlinalg::{homology_dims, homology_z, FieldKind, SparseMatrix};
use crate::Result;

use super::{differential_gen, hom_basis, LocalMonomialJson, Multidegree, StrandGenerator};

/// The finite complex of a morphism space in one winding multidegree,
/// bucketed by cohomological degree (the total `c`-exponent).
#[derive(Debug, Clone)]
pub struct GradedComplex {
    pub source: SubsetLabel,
    pub target: SubsetLabel,
    pub w: Multidegree,
    pub basis: Vec<Vec<StrandGenerator>>,
    /// `diffs[m]` maps degree `m` to degree `m+1`; rows index the degree
    /// `m+1` basis, columns the degree `m` basis.
    pub diffs: Vec<SparseMatrix>,
}

impl GradedComplex {
    pub fn build(
        s: &SubsetLabel,
        s2: &SubsetLabel,
        w: &Multidegree,
        bound: u32,
    ) -> Result<GradedComplex> {
        let all = hom_basis(s, s2, w, bound)?;
        let top = all.iter().map(StrandGenerator::c_degree).max().unwrap_or(0) as usize;
        let mut basis: Vec<Vec<StrandGenerator>> = vec![Vec::new(); top + 1];
        for g in all {
            basis[g.c_degree() as usize].push(g);
        }
        let mut index: Vec<BTreeMap<&StrandGenerator, usize>> = Vec::with_capacity(top + 1);
        for level in &basis {
            index.push(level.iter().enumerate().map(|(i, g)| (g, i)).collect());
        }
        let mut diffs = Vec::with_capacity(top + 1);
        for m in 0..=top {
            let rows = if m + 1 <= top { basis[m + 1].len() } else { 0 };
            let mut mat = SparseMatrix::zero(rows, basis[m].len());
            for (col, g) in basis[m].iter().enumerate() {
                for (dg, sign) in differential_gen(g) {
                    debug_assert_eq!(dg.c_degree() as usize, m + 1);
                    debug_assert_eq!(dg.multidegree(), *w);
                    let row = index[m + 1][&dg];
                    mat.add_to(row, col, &BigInt::from(sign));
                }
            }
            diffs.push(mat);
        }
        Ok(GradedComplex { source: s.clone(), target: s2.clone(), w: w.clone(), basis, diffs })
    }

    pub fn dim(&self, degree: usize) -> usize {
        self.basis.get(degree).map_or(0, Vec::len)
    }

    pub fn top_degree(&self) -> usize {
        self.basis.len().saturating_sub(1)
    }

    /// `d ∘ d = 0` across all degrees.
    pub fn verify_dd_zero(&self) -> Result<bool> {
        for m in 0..self.diffs.len().saturating_sub(1) {
            if !self.diffs[m + 1].mul(&self.diffs[m])?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn incoming(&self, m: usize) -> SparseMatrix {
        if m == 0 {
            SparseMatrix::zero(self.dim(0), 0)
        } else {
            self.diffs[m - 1].clone()
        }
    }

    fn outgoing(&self, m: usize) -> SparseMatrix {
        self.diffs.get(m).cloned().unwrap_or_else(|| SparseMatrix::zero(0, self.dim(m)))
    }

    /// Homology dimensions per cohomological degree over a field.
    pub fn homology(&self, field: FieldKind) -> Result<BTreeMap<usize, usize>> {
        let mut out = BTreeMap::new();
        for m in 0..self.basis.len() {
            let h = homology_dims(&self.incoming(m), &self.outgoing(m), field)?;
            if h > 0 {
                out.insert(m, h);
            }
        }
        Ok(out)
    }

    /// Integral homology: free rank and torsion per degree.
    pub fn homology_integral(&self) -> Result<BTreeMap<usize, (usize, Vec<BigInt>)>> {
        let mut out = BTreeMap::new();
        for m in 0..self.basis.len() {
            let (betti, torsion) = homology_z(&self.incoming(m), &self.outgoing(m))?;
            if betti > 0 || !torsion.is_empty() {
                out.insert(m, (betti, torsion));
            }
        }
        Ok(out)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let basis: Vec<Vec<Vec<LocalMonomialJson>>> = self
            .basis
            .iter()
            .map(|level| {
                level
                    .iter()
                    .map(|g| {
                        g.locals.iter().map(|(&p, loc)| LocalMonomialJson::encode(p, loc)).collect()
                    })
                    .collect()
            })
            .collect();
        let diffs: Vec<Vec<(usize, usize, String)>> = self
            .diffs
            .iter()
            .map(|d| d.iter().map(|(r, c, v)| (r, c, v.to_string())).collect())
            .collect();
        serde_json::json!({
            "source": self.source.elems(),
            "target": self.target.elems(),
            "multidegree": self.w.0,
            "basis": basis,
            "differential": diffs,
        })
    }
}

/// Serializable homology table of one graded piece.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CohomologyTable {
    pub w: Vec<u32>,
    pub ranks: BTreeMap<usize, usize>,
}

/// Cohomology ranks per degree of `hom(L_S, L_{S'})` in multidegree `w`.
pub fn cohomology(
    s: &SubsetLabel,
    s2: &SubsetLabel,
    w: &Multidegree,
    field: FieldKind,
    bound: u32,
) -> Result<BTreeMap<usize, usize>> {
    GradedComplex::build(s, s2, w, bound)?.homology(field)
}

/// Integral cohomology (free rank, torsion) per degree.
pub fn cohomology_z(
    s: &SubsetLabel,
    s2: &SubsetLabel,
    w: &Multidegree,
    bound: u32,
) -> Result<BTreeMap<usize, (usize, Vec<BigInt>)>> {
    GradedComplex::build(s, s2, w, bound)?.homology_integral()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sl(k: u8, e: &[u8]) -> SubsetLabel {
        SubsetLabel::new(k, e.to_vec()).unwrap()
    }

    fn md(w: &[u32]) -> Multidegree {
        Multidegree(w.to_vec())
    }

    #[test]
    fn identity_class_at_zero() {
        let s = sl(3, &[1, 2]);
        let h = cohomology(&s, &s, &md(&[0, 0, 0]), FieldKind::Q, 6).unwrap();
        assert_eq!(h, BTreeMap::from([(0, 1)]));
    }

    #[test]
    fn end_l1_l2_matches_quotient_ring() {
        // End(L_1 × L_2), k=3 ≅ R/(x_1x_2x_3):
        // rank 1 at w = (2,2,0) (the class of x_1 x_2) ...
        let s = sl(3, &[1, 2]);
        let h = cohomology(&s, &s, &md(&[2, 2, 0]), FieldKind::Q, 6).unwrap();
        assert_eq!(h, BTreeMap::from([(0, 1)]));
        // ... and 0 at w = (2,2,2) since x_1 x_2 x_3 = 0
        let h = cohomology(&s, &s, &md(&[2, 2, 2]), FieldKind::Q, 6).unwrap();
        assert!(h.is_empty());
    }

    #[test]
    fn pair_end_cohomology_concentrated_in_degree_zero() {
        // End(L_0 × L_1) at k=2, w = (2m, 0): single class x_1^m
        let s = sl(2, &[0, 1]);
        for m in 1..=3u32 {
            let h = cohomology(&s, &s, &md(&[2 * m, 0]), FieldKind::Q, 6).unwrap();
            assert_eq!(h, BTreeMap::from([(0, 1)]), "w=(2{m},0)");
        }
    }

    #[test]
    fn dd_zero_and_integral_agreement() {
        let s = sl(2, &[0, 1]);
        for w in Multidegree::all_bounded(2, 4) {
            let c = GradedComplex::build(&s, &s, &w, 6).unwrap();
            assert!(c.verify_dd_zero().unwrap());
            let hq = c.homology(FieldKind::Q).unwrap();
            let hz = c.homology_integral().unwrap();
            for (m, (betti, torsion)) in &hz {
                assert!(torsion.is_empty(), "unexpected torsion at {m}");
                assert_eq!(hq.get(m).copied().unwrap_or(0), *betti);
            }
        }
    }
}
