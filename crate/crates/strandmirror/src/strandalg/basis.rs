//! Basis enumeration per multidegree, and the independent monomial-counting
//! oracle it is checked against.

use std::collections::BTreeMap;

use crate::combinat::{close_partition, is_close, SubsetLabel};
use crate::{Error, Result};

use super::{LocalMonomial, Multidegree, StrandGenerator, TwoStrandKind};

/// Tracks the pending roles of arc `p−1` when processing puncture `p`.
#[derive(Debug, Clone, Copy)]
struct ArcState {
    /// arc is in `S` and not yet consumed as a strand source
    src_out: bool,
    /// arc is in `S'` and not yet hit as a target
    tgt_out: bool,
}

/// All generators of `hom(L_S, L_{S'})` with multidegree exactly `w`, in a
/// deterministic lexicographic order.  `bound` caps the componentwise
/// multidegree; exceeding it is an error.
pub fn hom_basis(
    s: &SubsetLabel,
    s2: &SubsetLabel,
    w: &Multidegree,
    bound: u32,
) -> Result<Vec<StrandGenerator>> {
    if s.len() != s2.len() || s.k() != s2.k() {
        return Err(Error::InvalidInput("labels must share size and k".into()));
    }
    let k = s.k();
    if w.k() != k {
        return Err(Error::InvalidInput("multidegree length must be k".into()));
    }
    if !w.within(bound) {
        return Err(Error::BoundExceeded);
    }

    let mut out = Vec::new();
    let init = ArcState { src_out: s.contains(0), tgt_out: s2.contains(0) };
    let mut locals: Vec<(u8, LocalMonomial)> = Vec::new();
    sweep(1, init, s, s2, w, &mut locals, &mut out);
    out.sort();
    if cfg!(debug_assertions) {
        for g in &out {
            g.validate().expect("enumerated generator must validate");
        }
    }
    Ok(out)
}

/// Depth-first sweep over punctures `p = 1..=k`.  At each puncture exactly
/// one local shape (or nothing) absorbs the letter budget `w_p`; the state
/// records what is still owed on the shared arc `p−1`.
fn sweep(
    p: u8,
    st: ArcState,
    s: &SubsetLabel,
    s2: &SubsetLabel,
    w: &Multidegree,
    locals: &mut Vec<(u8, LocalMonomial)>,
    out: &mut Vec<StrandGenerator>,
) {
    let k = s.k();
    if p > k {
        // arc k must be settled: both roles open (free idle) or both closed
        if st.src_out == st.tgt_out {
            out.push(StrandGenerator {
                source: s.clone(),
                target: s2.clone(),
                locals: locals.iter().cloned().collect(),
            });
        }
        return;
    }
    let b = w.at(p);
    let av1 = s.contains(p);
    let tv1 = s2.contains(p);
    // arc p−1 gets no further chances after this puncture: its open roles
    // must either both close here or both stay open as a free idle arc
    let settled0 = !st.src_out && !st.tgt_out;
    let idle0 = st.src_out && st.tgt_out;

    if b == 0 {
        if settled0 || idle0 {
            sweep(p + 1, ArcState { src_out: av1, tgt_out: tv1 }, s, s2, w, locals, out);
        }
        return;
    }

    let mut push = |loc: LocalMonomial,
                    next: ArcState,
                    locals: &mut Vec<(u8, LocalMonomial)>,
                    out: &mut Vec<StrandGenerator>| {
        locals.push((p, loc));
        sweep(p + 1, next, s, s2, w, locals, out);
        locals.pop();
    };

    if b % 2 == 0 {
        let m = b / 2;
        // lone loop on arc p−1
        if st.src_out && st.tgt_out {
            let next = ArcState { src_out: av1, tgt_out: tv1 };
            push(LocalMonomial::LoopRight { m }, next, locals, out);
        }
        // lone loop on arc p; arc p−1 settled or left idle
        if (settled0 || idle0) && av1 && tv1 {
            let next = ArcState { src_out: false, tgt_out: false };
            push(LocalMonomial::LoopLeft { m }, next, locals, out);
        }
        // two-strand shapes letter both arcs: 2(m'+n') letters with n' ≥ 1
        if st.src_out && st.tgt_out && av1 && tv1 {
            let consumed = ArcState { src_out: false, tgt_out: false };
            for nn in 1..=m {
                let mm = m - nn;
                if mm >= 1 {
                    for kind in [TwoStrandKind::A, TwoStrandKind::B] {
                        push(
                            LocalMonomial::TwoStrand { kind, m: mm, n: nn },
                            consumed,
                            locals,
                            out,
                        );
                    }
                } else {
                    push(
                        LocalMonomial::TwoStrand { kind: TwoStrandKind::C, m: 0, n: nn },
                        consumed,
                        locals,
                        out,
                    );
                }
            }
        }
    } else {
        // odd letter totals are single chords; a two-strand shape always
        // carries an even letter count
        let m = (b - 1) / 2;
        // chord u: arc p−1 → arc p
        if st.src_out && !st.tgt_out && tv1 {
            let next = ArcState { src_out: av1, tgt_out: false };
            push(LocalMonomial::ChordU { m }, next, locals, out);
        }
        // chord v: arc p → arc p−1
        if !st.src_out && st.tgt_out && av1 {
            let next = ArcState { src_out: false, tgt_out: tv1 };
            push(LocalMonomial::ChordV { m }, next, locals, out);
        }
    }
}

/// Purely combinatorial rank of `Hom(L_S, L_{S'})` in multidegree `w`: the
/// number (0 or 1) of monomials `x^α f_{S,S'}` with `2α + wdeg(f) = w`.
///
/// The variable support and the vanishing products come straight from the
/// interval partition; no chain-level machinery is involved, which is what
/// makes this an independent oracle for the cohomology computation.
pub fn oracle_rank(s: &SubsetLabel, s2: &SubsetLabel, w: &Multidegree) -> Result<usize> {
    if s.len() != s2.len() || s.k() != s2.k() {
        return Err(Error::InvalidInput("labels must share size and k".into()));
    }
    if !is_close(s, s2)? {
        return Ok(0);
    }
    let k = s.k();
    let part = close_partition(s, s2)?;
    let wf = super::distinguished::f_multidegree(k, &part);
    let mut alpha = vec![0u32; k as usize];
    for p in 1..=k {
        let have = w.at(p);
        let need = wf.at(p);
        if have < need || (have - need) % 2 != 0 {
            return Ok(0);
        }
        alpha[p as usize - 1] = (have - need) / 2;
    }

    // variable factors of A(S,S'): free polynomial blocks from the moved
    // intervals, and one block per run of the fixed part, truncated unless
    // the run touches an end of [0,k]
    #[derive(Clone)]
    struct Block {
        vars: Vec<u8>,
        truncated: bool,
    }
    let mut blocks: Vec<Block> = Vec::new();
    for iv in part.up_intervals.iter().chain(part.down_intervals.iter()) {
        let (lo, hi) = iv.bounds().expect("nonempty interval");
        blocks.push(Block { vars: (lo + 1..=hi).collect(), truncated: false });
    }
    let fixed = SubsetLabel::new(k, part.fixed.clone());
    if let Ok(fixed) = fixed {
        for run in fixed.runs() {
            let (lo, hi) = run.bounds().unwrap();
            let vlo = lo.max(1);
            let vhi = (hi + 1).min(k);
            blocks.push(Block {
                vars: (vlo..=vhi).collect(),
                truncated: lo > 0 && hi < k,
            });
        }
    }

    let mut covered = vec![false; k as usize];
    for b in &blocks {
        for &v in &b.vars {
            covered[v as usize - 1] = true;
        }
    }
    for p in 1..=k {
        if alpha[p as usize - 1] > 0 && !covered[p as usize - 1] {
            return Ok(0); // variable acts by zero here
        }
    }
    for b in &blocks {
        if b.truncated && b.vars.iter().all(|&v| alpha[v as usize - 1] > 0) {
            return Ok(0); // full product of a truncated block vanishes
        }
    }
    Ok(1)
}
