//! The strand-calculus side: objects `L_S` indexed by subsets `S ⊆ [0,k]`,
//! morphism complexes spanned by per-puncture boundary paths, products by
//! strand concatenation with the no-double-crossing rule, and the crossing
//! resolution differential.
//!
//! At an interior puncture `p` the two arcs `L_{p−1}` and `L_p` end on the
//! same boundary circle, carrying the primitive chords `u_p : L_{p−1} → L_p`
//! and `v_p : L_p → L_{p−1}`.  A morphism assigns each arc of `S` a single
//! boundary path (or the identity); a path lives at exactly one puncture,
//! and two strands meet only when both arcs of a puncture stay inside the
//! pair.  That local two-strand system is the quadratic dg-algebra on
//!
//! ```text
//!   a = vu ⊗ id,   b = id ⊗ uv,   c = u ⊗ v
//!   ab = ba = 0,   ac = cb,   bc = ca,   ∂a = −∂b = c,   ∂c = 0
//! ```
//!
//! with monomial basis `c^n, a^m c^n, b^m c^n` — every pair of strands at a
//! puncture is exactly one such normal form.  Everything else (single
//! strands) has zero differential, and products concatenate or vanish by
//! slot-locality.  The winding multidegree `w_p` counts `u_p`/`v_p` letters
//! and splits all complexes into finite pieces.

mod basis;
mod complex;
mod distinguished;
mod ops;

pub use basis::{hom_basis, oracle_rank};
pub use complex::{cohomology, cohomology_z, GradedComplex};
pub use distinguished::{
    distinguished_x, f_multidegree, f_rep, monomial_rep, structure_constants, StructEntry,
    StructureTable,
};
pub use ops::{compose_generators, differential, differential_gen, multiply};

use std::collections::BTreeMap;
use std::fmt;

use num::{BigInt, Zero};
use serde::{Deserialize, Serialize};

use crate::combinat::SubsetLabel;
use crate::{Error, Result};

/// Which normal-form family a two-strand monomial belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum TwoStrandKind {
    /// `a^m c^n` with `m ≥ 1`
    A,
    /// `b^m c^n` with `m ≥ 1`
    B,
    /// `c^n` with `n ≥ 1`
    C,
}

/// The letters a morphism carries at one interior puncture `p`.
///
/// Single-strand shapes describe one boundary path; `TwoStrand` packs the
/// two-strand normal form when both arcs `p−1, p` carry letters at `p`.
/// The normal forms with a letterless side (`a^m c^0`, `b^m c^0`) appear in
/// stored generators as lone loops: their other strand is an idle arc whose
/// horizontal line is shared between its two punctures, so the differential
/// and product recover the `a`/`b` behaviour from global idleness rather
/// than from the stored shape.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum LocalMonomial {
    /// `(u_p v_p)^m`, a loop on arc `p` (m ≥ 1)
    LoopLeft { m: u32 },
    /// `(v_p u_p)^m`, a loop on arc `p−1` (m ≥ 1)
    LoopRight { m: u32 },
    /// `u_p (v_p u_p)^m : L_{p−1} → L_p` (m ≥ 0)
    ChordU { m: u32 },
    /// `v_p (u_p v_p)^m : L_p → L_{p−1}` (m ≥ 0)
    ChordV { m: u32 },
    /// a two-strand normal form
    TwoStrand { kind: TwoStrandKind, m: u32, n: u32 },
}

impl LocalMonomial {
    pub fn two_strand(kind: TwoStrandKind, m: u32, n: u32) -> Result<LocalMonomial> {
        let ok = match kind {
            TwoStrandKind::A | TwoStrandKind::B => m >= 1,
            TwoStrandKind::C => m == 0 && n >= 1,
        };
        if !ok {
            return Err(Error::InvalidInput(format!("invalid two-strand data ({kind:?},{m},{n})")));
        }
        Ok(LocalMonomial::TwoStrand { kind, m, n })
    }

    /// Total letter count at the puncture.
    pub fn letters(&self) -> u32 {
        match *self {
            LocalMonomial::LoopLeft { m } | LocalMonomial::LoopRight { m } => 2 * m,
            LocalMonomial::ChordU { m } | LocalMonomial::ChordV { m } => 2 * m + 1,
            LocalMonomial::TwoStrand { kind: TwoStrandKind::C, n, .. } => 2 * n,
            LocalMonomial::TwoStrand { m, n, .. } => 2 * m + 2 * n,
        }
    }

    /// Letters on the strand starting at arc `p−1` and on the strand
    /// starting at arc `p` (in that order).
    pub fn strand_letters(&self) -> (u32, u32) {
        match *self {
            LocalMonomial::LoopLeft { m } => (0, 2 * m),
            LocalMonomial::LoopRight { m } => (2 * m, 0),
            LocalMonomial::ChordU { m } => (2 * m + 1, 0),
            LocalMonomial::ChordV { m } => (0, 2 * m + 1),
            LocalMonomial::TwoStrand { kind, m, n } => {
                let (long, short) = (2 * m + n, n);
                match (kind, n % 2 == 0) {
                    (TwoStrandKind::C, _) => (n, n),
                    (TwoStrandKind::A, true) | (TwoStrandKind::B, false) => (long, short),
                    (TwoStrandKind::A, false) | (TwoStrandKind::B, true) => (short, long),
                }
            }
        }
    }

    /// Reconstructs the normal form from strand letter counts.  Valid pairs
    /// have equal parity and at least one letter.
    pub fn from_strand_letters(l0: u32, l1: u32) -> Result<LocalMonomial> {
        if l0 % 2 != l1 % 2 || (l0 == 0 && l1 == 0) {
            return Err(Error::InvalidInput(format!("invalid strand letter pair ({l0},{l1})")));
        }
        let n = l0.min(l1);
        let m = l0.abs_diff(l1) / 2;
        let kind = if l0 == l1 {
            TwoStrandKind::C
        } else if (l0 > l1) == (n % 2 == 0) {
            TwoStrandKind::A
        } else {
            TwoStrandKind::B
        };
        LocalMonomial::two_strand(kind, m, n)
    }

    /// Cohomological degree contribution: the `c`-exponent.
    pub fn c_degree(&self) -> u32 {
        match *self {
            LocalMonomial::TwoStrand { n, .. } => n,
            _ => 0,
        }
    }

    /// Whether this shape occupies both arcs of the puncture.
    pub fn is_two_strand(&self) -> bool {
        matches!(self, LocalMonomial::TwoStrand { .. })
    }

    /// The arc moves `(source, target)` induced at puncture `p`, including
    /// the pinned zero-letter side of a two-strand shape.
    pub fn moves(&self, p: u8) -> Vec<(u8, u8)> {
        match *self {
            LocalMonomial::LoopLeft { .. } => vec![(p, p)],
            LocalMonomial::LoopRight { .. } => vec![(p - 1, p - 1)],
            LocalMonomial::ChordU { .. } => vec![(p - 1, p)],
            LocalMonomial::ChordV { .. } => vec![(p, p - 1)],
            LocalMonomial::TwoStrand { n, .. } => {
                if n % 2 == 0 {
                    vec![(p - 1, p - 1), (p, p)]
                } else {
                    vec![(p - 1, p), (p, p - 1)]
                }
            }
        }
    }
}

/// Winding multidegree: `u`/`v` letter counts per interior puncture.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Multidegree(pub Vec<u32>);

impl Multidegree {
    pub fn zero(k: u8) -> Multidegree {
        Multidegree(vec![0; k as usize])
    }

    pub fn k(&self) -> u8 {
        self.0.len() as u8
    }

    /// Letter count at puncture `p` (1-based).
    pub fn at(&self, p: u8) -> u32 {
        self.0[p as usize - 1]
    }

    pub fn add(&self, other: &Multidegree) -> Multidegree {
        Multidegree(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn within(&self, bound: u32) -> bool {
        self.0.iter().all(|&w| w <= bound)
    }

    /// All multidegrees with each component at most `bound`.
    pub fn all_bounded(k: u8, bound: u32) -> Vec<Multidegree> {
        let mut out = vec![Multidegree::zero(k)];
        for p in 0..k as usize {
            let mut next = Vec::with_capacity(out.len() * (bound as usize + 1));
            for w in out {
                for v in 0..=bound {
                    let mut w2 = w.clone();
                    w2.0[p] = v;
                    next.push(w2);
                }
            }
            out = next;
        }
        out
    }
}

impl fmt::Display for Multidegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, w) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{w}")?;
        }
        write!(f, ")")
    }
}

/// A basis element of a morphism complex: per-puncture normal forms plus the
/// induced bijection of arcs.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct StrandGenerator {
    pub source: SubsetLabel,
    pub target: SubsetLabel,
    /// puncture → letters there; punctures without letters are omitted,
    /// except that a two-strand shape with a zero-letter side pins that arc
    pub locals: BTreeMap<u8, LocalMonomial>,
}

impl StrandGenerator {
    /// Identity endomorphism generator of `L_S`.
    pub fn identity(s: &SubsetLabel) -> StrandGenerator {
        StrandGenerator { source: s.clone(), target: s.clone(), locals: BTreeMap::new() }
    }

    pub fn multidegree(&self) -> Multidegree {
        let mut w = Multidegree::zero(self.source.k());
        for (&p, loc) in &self.locals {
            w.0[p as usize - 1] += loc.letters();
        }
        w
    }

    /// Total cohomological degree before any pair shift: the sum of local
    /// `c`-exponents.
    pub fn c_degree(&self) -> u32 {
        self.locals.values().map(LocalMonomial::c_degree).sum()
    }

    /// The induced bijection `S → S'` as a map; arcs untouched by any local
    /// shape map to themselves.
    pub fn sigma(&self) -> BTreeMap<u8, u8> {
        let mut map = BTreeMap::new();
        for (&p, loc) in &self.locals {
            for (src, tgt) in loc.moves(p) {
                map.insert(src, tgt);
            }
        }
        for &s in self.source.elems() {
            map.entry(s).or_insert(s);
        }
        map
    }

    /// Lettered strands: source arc → (puncture, letters, target arc).
    pub fn slot_paths(&self) -> BTreeMap<u8, (u8, u32, u8)> {
        let mut out = BTreeMap::new();
        for (&p, loc) in &self.locals {
            let (l0, l1) = loc.strand_letters();
            for (src, tgt) in loc.moves(p) {
                let letters = if src == p - 1 { l0 } else { l1 };
                if letters > 0 {
                    out.insert(src, (p, letters, tgt));
                }
            }
        }
        out
    }

    /// Whether arc `q` is globally idle: present on both sides, never a
    /// strand source, never a chord target.  An idle arc contributes a
    /// horizontal strand at *both* of its punctures, so it is shared rather
    /// than attached to a single local shape.
    pub fn arc_is_idle(&self, q: u8) -> bool {
        if !self.source.contains(q) || !self.target.contains(q) {
            return false;
        }
        for (&p, loc) in &self.locals {
            for (src, tgt) in loc.moves(p) {
                if src == q || tgt == q {
                    return false;
                }
            }
        }
        true
    }

    /// Structural validity: shapes in range, arcs available, the induced map
    /// a bijection onto the target; letters at the exterior puncture are
    /// excluded by the puncture range.  Stored shapes carry letters on every
    /// strand they mention: a two-strand normal form with a letterless side
    /// (`a^m`, `b^m`) is stored as the corresponding lone loop instead, with
    /// the idle partner left implicit.
    pub fn validate(&self) -> Result<()> {
        let k = self.source.k();
        if self.target.k() != k || self.source.len() != self.target.len() {
            return Err(Error::InvalidInput("label mismatch".into()));
        }
        let mut seen_src: BTreeMap<u8, u8> = BTreeMap::new();
        let mut seen_tgt: BTreeMap<u8, u8> = BTreeMap::new();
        for (&p, loc) in &self.locals {
            if p == 0 || p > k {
                return Err(Error::InvalidInput(format!("puncture {p} outside [1,{k}]")));
            }
            if let LocalMonomial::TwoStrand { n, .. } = loc {
                if *n == 0 {
                    return Err(Error::InvalidInput(
                        "stored two-strand must letter both strands (n ≥ 1)".into(),
                    ));
                }
                for arc in [p - 1, p] {
                    if !self.source.contains(arc) || !self.target.contains(arc) {
                        return Err(Error::InvalidInput(format!(
                            "two-strand at {p} needs arcs {},{} on both sides",
                            p - 1,
                            p
                        )));
                    }
                }
            } else if loc.letters() == 0 {
                return Err(Error::InvalidInput("letterless single shape".into()));
            }
            for (src, tgt) in loc.moves(p) {
                if !self.source.contains(src) {
                    return Err(Error::InvalidInput(format!("arc {src} not in source")));
                }
                if !self.target.contains(tgt) {
                    return Err(Error::InvalidInput(format!("arc {tgt} not in target")));
                }
                if seen_src.insert(src, p).is_some() {
                    return Err(Error::InvalidInput(format!("arc {src} used twice")));
                }
                if seen_tgt.insert(tgt, p).is_some() {
                    return Err(Error::InvalidInput(format!("target {tgt} hit twice")));
                }
            }
        }
        // untouched arcs are idle: must belong to both sides, and their
        // self-target must be free
        for &s in self.source.elems() {
            if !seen_src.contains_key(&s) {
                if !self.target.contains(s) {
                    return Err(Error::InvalidInput(format!("arc {s} has nowhere to go")));
                }
                if seen_tgt.insert(s, 0).is_some() {
                    return Err(Error::InvalidInput(format!("idle arc {s} target taken")));
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for StrandGenerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.locals.is_empty() {
            return write!(f, "id");
        }
        for (i, (p, loc)) in self.locals.iter().enumerate() {
            if i > 0 {
                write!(f, "·")?;
            }
            match *loc {
                LocalMonomial::LoopLeft { m } => write!(f, "(u{p}v{p})^{m}")?,
                LocalMonomial::LoopRight { m } => write!(f, "(v{p}u{p})^{m}")?,
                LocalMonomial::ChordU { m } => write!(f, "u{p}(v{p}u{p})^{m}")?,
                LocalMonomial::ChordV { m } => write!(f, "v{p}(u{p}v{p})^{m}")?,
                LocalMonomial::TwoStrand { kind, m, n } => match kind {
                    TwoStrandKind::A => write!(f, "a{p}^{m}c{p}^{n}")?,
                    TwoStrandKind::B => write!(f, "b{p}^{m}c{p}^{n}")?,
                    TwoStrandKind::C => write!(f, "c{p}^{n}")?,
                },
            }
        }
        Ok(())
    }
}

/// A finite integer combination of generators sharing source and target.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MorElement {
    pub source: SubsetLabel,
    pub target: SubsetLabel,
    pub terms: BTreeMap<StrandGenerator, BigInt>,
}

impl MorElement {
    pub fn zero(source: &SubsetLabel, target: &SubsetLabel) -> MorElement {
        MorElement { source: source.clone(), target: target.clone(), terms: BTreeMap::new() }
    }

    pub fn identity(s: &SubsetLabel) -> MorElement {
        let mut e = MorElement::zero(s, s);
        e.add_term(StrandGenerator::identity(s), BigInt::from(1));
        e
    }

    pub fn from_generator(g: StrandGenerator) -> MorElement {
        let mut e = MorElement::zero(&g.source.clone(), &g.target.clone());
        e.add_term(g, BigInt::from(1));
        e
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, g: StrandGenerator, coeff: BigInt) {
        if coeff.is_zero() {
            return;
        }
        debug_assert_eq!(g.source, self.source);
        debug_assert_eq!(g.target, self.target);
        let entry = self.terms.entry(g).or_insert_with(BigInt::zero);
        *entry += coeff;
        if entry.is_zero() {
            let key = self
                .terms
                .iter()
                .find(|(_, v)| v.is_zero())
                .map(|(k, _)| k.clone())
                .expect("zero entry present");
            self.terms.remove(&key);
        }
    }

    pub fn add(&self, other: &MorElement) -> MorElement {
        debug_assert_eq!(self.source, other.source);
        debug_assert_eq!(self.target, other.target);
        let mut out = self.clone();
        for (g, c) in &other.terms {
            out.add_term(g.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &BigInt) -> MorElement {
        if c.is_zero() {
            return MorElement::zero(&self.source, &self.target);
        }
        let mut out = MorElement::zero(&self.source, &self.target);
        for (g, v) in &self.terms {
            out.add_term(g.clone(), v * c);
        }
        out
    }
}

impl fmt::Display for MorElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (g, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if *c == BigInt::from(1) {
                write!(f, "{g}")?;
            } else {
                write!(f, "{c}·{g}")?;
            }
        }
        Ok(())
    }
}

/// JSON encoding of a local monomial: `{"p", "shape", "m", "n"}` with shape
/// one of `A|B|C|uL|uR|lL|lR` (`uR` = rightward chord `u`, `uL` = leftward
/// chord `v`, `lL`/`lR` = loops on the left/right arc of the puncture).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LocalMonomialJson {
    pub p: u8,
    pub shape: String,
    pub m: u32,
    pub n: u32,
}

impl LocalMonomialJson {
    pub fn encode(p: u8, loc: &LocalMonomial) -> LocalMonomialJson {
        let (shape, m, n) = match *loc {
            LocalMonomial::LoopLeft { m } => ("lL", m, 0),
            LocalMonomial::LoopRight { m } => ("lR", m, 0),
            LocalMonomial::ChordU { m } => ("uR", m, 0),
            LocalMonomial::ChordV { m } => ("uL", m, 0),
            LocalMonomial::TwoStrand { kind: TwoStrandKind::A, m, n } => ("A", m, n),
            LocalMonomial::TwoStrand { kind: TwoStrandKind::B, m, n } => ("B", m, n),
            LocalMonomial::TwoStrand { kind: TwoStrandKind::C, m, n } => ("C", m, n),
        };
        LocalMonomialJson { p, shape: shape.to_string(), m, n }
    }

    pub fn decode(&self) -> Result<(u8, LocalMonomial)> {
        let loc = match self.shape.as_str() {
            "lL" => LocalMonomial::LoopLeft { m: self.m },
            "lR" => LocalMonomial::LoopRight { m: self.m },
            "uR" => LocalMonomial::ChordU { m: self.m },
            "uL" => LocalMonomial::ChordV { m: self.m },
            "A" => LocalMonomial::two_strand(TwoStrandKind::A, self.m, self.n)?,
            "B" => LocalMonomial::two_strand(TwoStrandKind::B, self.m, self.n)?,
            "C" => LocalMonomial::two_strand(TwoStrandKind::C, self.m, self.n)?,
            other => return Err(Error::InvalidInput(format!("unknown shape {other:?}"))),
        };
        Ok((self.p, loc))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strand_letters_round_trip() {
        for l0 in 0..8u32 {
            for l1 in 0..8u32 {
                if l0 % 2 != l1 % 2 || (l0 == 0 && l1 == 0) {
                    continue;
                }
                let m = LocalMonomial::from_strand_letters(l0, l1).unwrap();
                assert_eq!(m.strand_letters(), (l0, l1), "pair ({l0},{l1})");
            }
        }
    }

    #[test]
    fn two_strand_letter_totals() {
        let a = LocalMonomial::two_strand(TwoStrandKind::A, 2, 1).unwrap();
        assert_eq!(a.letters(), 6);
        let c = LocalMonomial::two_strand(TwoStrandKind::C, 0, 3).unwrap();
        assert_eq!(c.letters(), 6);
        assert_eq!(c.c_degree(), 3);
    }

    #[test]
    fn json_round_trip() {
        let shapes = [
            LocalMonomial::LoopLeft { m: 2 },
            LocalMonomial::ChordU { m: 0 },
            LocalMonomial::two_strand(TwoStrandKind::B, 1, 4).unwrap(),
        ];
        for s in shapes {
            let j = LocalMonomialJson::encode(3, &s);
            let (p, back) = j.decode().unwrap();
            assert_eq!(p, 3);
            assert_eq!(back, s);
        }
    }
}
