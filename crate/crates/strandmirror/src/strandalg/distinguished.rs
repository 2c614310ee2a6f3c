//! Chain-level representatives of the formal generators `x_i` and
//! `f_{S,S'}`, and the structure-constant table of the span they generate.
//!
//! The `x_i` representative in `End(L_S)` is the sum of the one or two loop
//! terms at puncture `i`; `f_{S,S'}` is the tensor of primitive chords along
//! the interval partition.  These are cocycles, their span is closed under
//! composition, and every product of basis monomials `x^α f_{S,S'}` lands on
//! a basis monomial again:
//!
//! ```text
//!   f_{S',S''} · f_{S,S'} = (∏_{i ∈ T(S,S',S'')} x_i) · f_{S,S''}
//! ```
//!
//! when `S, S''` are close, and zero otherwise.  `structure_constants`
//! recomputes every such product at chain level and fails hard if one falls
//! outside the distinguished span.

use num::BigInt;
use serde::{Deserialize, Serialize};

use crate::combinat::{
    close_partition, is_close, triple_overlap, ClosePartition, SubsetLabel,
};
use crate::{Error, Result};

use super::{
    multiply, LocalMonomial, MorElement, Multidegree, StrandGenerator, TwoStrandKind,
};

use super::basis::oracle_rank;

/// Chain representative of `x_i` in `End(L_S)`: zero when neither adjacent
/// arc belongs to `S`.
pub fn distinguished_x(s: &SubsetLabel, i: u8) -> Result<MorElement> {
    let k = s.k();
    if i == 0 || i > k {
        return Err(Error::InvalidInput(format!("variable index {i} outside [1,{k}]")));
    }
    let left = s.contains(i - 1);
    let right = s.contains(i);
    let mut out = MorElement::zero(s, s);
    if left && right {
        for kind in [TwoStrandKind::A, TwoStrandKind::B] {
            let mut g = StrandGenerator::identity(s);
            g.locals.insert(i, LocalMonomial::two_strand(kind, 1, 0)?);
            out.add_term(g, BigInt::from(1));
        }
    } else if left {
        let mut g = StrandGenerator::identity(s);
        g.locals.insert(i, LocalMonomial::LoopRight { m: 1 });
        out.add_term(g, BigInt::from(1));
    } else if right {
        let mut g = StrandGenerator::identity(s);
        g.locals.insert(i, LocalMonomial::LoopLeft { m: 1 });
        out.add_term(g, BigInt::from(1));
    }
    Ok(out)
}

/// Multidegree of `f_{S,S'}`: one letter at each puncture interior to a
/// partition interval.
pub fn f_multidegree(k: u8, part: &ClosePartition) -> Multidegree {
    let mut w = Multidegree::zero(k);
    for iv in part.up_intervals.iter().chain(part.down_intervals.iter()) {
        let (lo, hi) = iv.bounds().expect("partition intervals are nonempty");
        for p in lo + 1..=hi {
            w.0[p as usize - 1] += 1;
        }
    }
    w
}

/// Chain representative of the distinguished generator `f_{S,S'}`: primitive
/// `u`-chords along each up interval and `v`-chords along each down
/// interval.  The identity when `S = S'`.
pub fn f_rep(s: &SubsetLabel, s2: &SubsetLabel) -> Result<MorElement> {
    let part = close_partition(s, s2)?;
    let mut g = StrandGenerator {
        source: s.clone(),
        target: s2.clone(),
        locals: Default::default(),
    };
    for iv in &part.up_intervals {
        let (lo, hi) = iv.bounds().unwrap();
        for p in lo + 1..=hi {
            g.locals.insert(p, LocalMonomial::ChordU { m: 0 });
        }
    }
    for iv in &part.down_intervals {
        let (lo, hi) = iv.bounds().unwrap();
        for p in lo + 1..=hi {
            g.locals.insert(p, LocalMonomial::ChordV { m: 0 });
        }
    }
    g.validate()?;
    let mut out = MorElement::zero(s, s2);
    out.add_term(g, BigInt::from(1));
    Ok(out)
}

/// Chain representative of `x^α f_{S,S'}`: the `f` generator multiplied on
/// the left by the `x_i` representatives of the target, in increasing
/// variable order.
pub fn monomial_rep(s: &SubsetLabel, s2: &SubsetLabel, alpha: &[u32]) -> Result<MorElement> {
    let k = s.k();
    if alpha.len() != k as usize {
        return Err(Error::InvalidInput("exponent vector length must be k".into()));
    }
    let mut acc = f_rep(s, s2)?;
    for i in 1..=k {
        if acc.is_zero() {
            return Ok(acc);
        }
        let x = distinguished_x(s2, i)?;
        for _ in 0..alpha[i as usize - 1] {
            acc = multiply(&acc, &x)?;
        }
    }
    Ok(acc)
}

/// One verified product in the distinguished span.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StructEntry {
    pub source: Vec<u8>,
    pub mid: Vec<u8>,
    pub target: Vec<u8>,
    pub alpha: Vec<u32>,
    pub beta: Vec<u32>,
    /// `None` when the product is zero, otherwise the exponent of the result
    /// `x^γ f_{S,S''}`.
    pub gamma: Option<Vec<u32>>,
}

/// Structure constants over the distinguished basis, keyed by
/// `(S, S', α, S'', β)`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StructureTable {
    pub n: usize,
    pub k: u8,
    pub wmax: u32,
    pub entries: Vec<StructEntry>,
}

/// Exponent vectors `α` with `2α + base ≤ wmax` componentwise that survive
/// in `A(S,S')` (checked through the monomial-counting oracle).
pub fn valid_exponents(
    s: &SubsetLabel,
    s2: &SubsetLabel,
    base: &Multidegree,
    wmax: u32,
) -> Result<Vec<Vec<u32>>> {
    let k = s.k();
    let caps: Vec<u32> =
        (0..k as usize).map(|i| (wmax.saturating_sub(base.0[i])) / 2).collect();
    let mut out = Vec::new();
    let mut alpha = vec![0u32; k as usize];
    loop {
        let w = Multidegree(
            (0..k as usize).map(|i| base.0[i] + 2 * alpha[i]).collect(),
        );
        if oracle_rank(s, s2, &w)? == 1 {
            out.push(alpha.clone());
        }
        let mut i = 0;
        loop {
            if i == k as usize {
                return Ok(out);
            }
            alpha[i] += 1;
            if alpha[i] <= caps[i] {
                break;
            }
            alpha[i] = 0;
            i += 1;
        }
    }
}

/// Computes all products of distinguished basis elements within the
/// multidegree bound, verifying each against the expected monomial.
///
/// A product that disagrees with the composition rule — zero where a basis
/// monomial is expected, nonzero where zero is expected, or anything outside
/// the span — is a hard failure.
pub fn structure_constants(n: usize, k: u8, wmax: u32) -> Result<StructureTable> {
    let all = SubsetLabel::all(n, k);
    let mut entries = Vec::new();
    for s in &all {
        for s2 in &all {
            if !is_close(s, s2)? {
                continue;
            }
            let part12 = close_partition(s, s2)?;
            let w_f12 = f_multidegree(k, &part12);
            let alphas = valid_exponents(s, s2, &w_f12, wmax)?;
            for s3 in &all {
                if !is_close(s2, s3)? {
                    continue;
                }
                let part23 = close_partition(s2, s3)?;
                let w_f23 = f_multidegree(k, &part23);
                let betas = valid_exponents(s2, s3, &w_f23, wmax)?;
                for alpha in &alphas {
                    for beta in &betas {
                        let total = Multidegree(
                            (0..k as usize)
                                .map(|i| {
                                    w_f12.0[i]
                                        + w_f23.0[i]
                                        + 2 * (alpha[i] + beta[i])
                                })
                                .collect(),
                        );
                        if !total.within(wmax) {
                            continue;
                        }
                        let gamma =
                            verify_product(s, s2, s3, alpha, beta, &total)?;
                        entries.push(StructEntry {
                            source: s.elems().to_vec(),
                            mid: s2.elems().to_vec(),
                            target: s3.elems().to_vec(),
                            alpha: alpha.clone(),
                            beta: beta.clone(),
                            gamma,
                        });
                    }
                }
            }
        }
    }
    Ok(StructureTable { n, k, wmax, entries })
}

/// Chain-level check of one product `x^β f_{S',S''} ∘ x^α f_{S,S'}`.
pub fn verify_product(
    s: &SubsetLabel,
    s2: &SubsetLabel,
    s3: &SubsetLabel,
    alpha: &[u32],
    beta: &[u32],
    total: &Multidegree,
) -> Result<Option<Vec<u32>>> {
    let k = s.k();
    let left = monomial_rep(s, s2, alpha)?;
    let right = monomial_rep(s2, s3, beta)?;
    let product = multiply(&left, &right)?;

    // expected: close targets compose to x^γ f_{S,S''} with
    // γ = α + β + 1_{T(S,S',S'')}, zero if S,S'' are not close or the
    // monomial dies in A(S,S'')
    let expected_gamma: Option<Vec<u32>> = if is_close(s, s3)? {
        let t = triple_overlap(s, s2, s3)?;
        let gamma: Vec<u32> = (0..k as usize)
            .map(|i| {
                alpha[i] + beta[i] + u32::from(t.contains(&(i as u8 + 1)))
            })
            .collect();
        if oracle_rank(s, s3, total)? == 1 {
            Some(gamma)
        } else {
            None
        }
    } else {
        None
    };

    let expected = match &expected_gamma {
        Some(gamma) => monomial_rep(s, s3, gamma)?,
        None => MorElement::zero(s, s3),
    };
    if product != expected {
        return Err(Error::OutsideDistinguishedSpan(format!(
            "({s} → {s2} → {s3}), α={alpha:?}, β={beta:?}: got {product}, expected {expected}"
        )));
    }
    Ok(expected_gamma)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sl(k: u8, e: &[u8]) -> SubsetLabel {
        SubsetLabel::new(k, e.to_vec()).unwrap()
    }

    #[test]
    fn x_rep_pair_of_arcs() {
        // x_1 in End(L_0 × L_1) is a_1 + b_1
        let x = distinguished_x(&sl(2, &[0, 1]), 1).unwrap();
        assert_eq!(x.terms.len(), 2);
    }

    #[test]
    fn x_rep_endpoint_cases() {
        // S = {1}, k = 2: x_1 is a left loop at 1, x_2 a right loop at 2
        let s = sl(2, &[1]);
        let x1 = distinguished_x(&s, 1).unwrap();
        let g1 = x1.terms.keys().next().unwrap();
        assert_eq!(g1.locals[&1], LocalMonomial::LoopLeft { m: 1 });
        let x2 = distinguished_x(&s, 2).unwrap();
        let g2 = x2.terms.keys().next().unwrap();
        assert_eq!(g2.locals[&2], LocalMonomial::LoopRight { m: 1 });
    }

    #[test]
    fn x_rep_zero_when_detached() {
        // S = {3}, k = 3: x_1 touches arcs 0 and 1 only
        assert!(distinguished_x(&sl(3, &[3]), 1).unwrap().is_zero());
    }

    #[test]
    fn f_rep_two_up_intervals() {
        // S = {0,2} → S' = {1,3}: chords u at punctures 1 and 3
        let f = f_rep(&sl(3, &[0, 2]), &sl(3, &[1, 3])).unwrap();
        let g = f.terms.keys().next().unwrap();
        assert_eq!(g.locals[&1], LocalMonomial::ChordU { m: 0 });
        assert_eq!(g.locals[&3], LocalMonomial::ChordU { m: 0 });
    }

    #[test]
    fn f_reps_are_cocycles() {
        for k in 2..=3u8 {
            for n in 1..=(k as usize) {
                let all = SubsetLabel::all(n, k);
                for s in &all {
                    for s2 in &all {
                        if is_close(s, s2).unwrap() {
                            let f = f_rep(s, s2).unwrap();
                            assert!(super::super::differential(&f).is_zero());
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn x_reps_are_cocycles_and_commute() {
        let s = sl(3, &[1, 2]);
        for i in 1..=3u8 {
            let x = distinguished_x(&s, i).unwrap();
            assert!(super::super::differential(&x).is_zero());
            for j in 1..=3u8 {
                let y = distinguished_x(&s, j).unwrap();
                let xy = multiply(&x, &y).unwrap();
                let yx = multiply(&y, &x).unwrap();
                assert_eq!(xy, yx, "x_{i} and x_{j} must commute");
            }
        }
    }

    #[test]
    fn powers_of_x_are_sums_of_pure_loops() {
        // (a+b)^m = a^m + b^m in End(L_0 × L_1)
        let s = sl(2, &[0, 1]);
        let x = distinguished_x(&s, 1).unwrap();
        let x2 = multiply(&x, &x).unwrap();
        assert_eq!(x2.terms.len(), 2);
        for (g, c) in &x2.terms {
            assert_eq!(*c, BigInt::from(1));
            match g.locals[&1] {
                LocalMonomial::TwoStrand { m: 2, n: 0, .. } => {}
                ref other => panic!("unexpected term {other:?}"),
            }
        }
    }

    #[test]
    fn composition_rule_single_interval() {
        // f_{S',S} ∘ f_{S,S'} = x_1 · id for S = {0}, S' = {1}, k = 2
        let s = sl(2, &[0]);
        let s2 = sl(2, &[1]);
        let total = Multidegree(vec![2, 0]);
        let gamma = verify_product(&s, &s2, &s, &[0, 0], &[0, 0], &total).unwrap();
        assert_eq!(gamma, Some(vec![1, 0]));
    }

    #[test]
    fn structure_constants_small() {
        // n=1, k=2 and n=2, k=3 close without failures
        structure_constants(1, 2, 4).unwrap();
        structure_constants(2, 3, 4).unwrap();
    }
}
