//! Exact-arithmetic computation of two finite-rank algebras and a machine
//! check that they agree.
//!
//! On one side, arcs `L_0, ..., L_k` on a disk with `k` interior punctures
//! (and two stops on the outer boundary) generate a dg-category whose
//! morphisms are strand diagrams: tuples of boundary paths at the punctures.
//! Products concatenate strands with a no-double-crossing rule and the
//! differential resolves crossings.  Everything is graded by the *winding
//! multidegree* `w ∈ ℕ^k` (letter count per puncture), so each graded piece
//! is a finite complex over ℤ.
//!
//! On the other side, `R = k[x_1..x_k]/(x_1⋯x_k)` and the modules `R/(x_I)`
//! for subintervals `I ⊆ [1,k]` give endomorphism algebras with hom spaces
//! `Hom(P_I, P_J) = x_{I∖J}·R/(x_{I∩J})`, projective complexes presenting the
//! modules `M{I,J}` and `P̄_i`, Ext tables, semiorthogonality and
//! localization-kernel checks.
//!
//! For `n = k−1` the dictionary `L_{[0,k]∖{i,j}} ↔ [i+1,j]` identifies the
//! two sides; [`mirrorcheck`] verifies dimensions and structure constants
//! bit-exactly, translates the stop-resolution complexes, and builds the
//! Γ-graded crossed products for finite abelian covers.
//!
//! All arithmetic is exact: arbitrary-precision integers and rationals, or a
//! prime field `F_p`.  No floating point anywhere.

pub mod bsidealg;
pub mod cli;
pub mod combinat;
pub mod exactlinalg;
pub mod mirrorcheck;
pub mod strandalg;

mod error;

pub use error::Error;

/// Crate-wide result type.
pub type Result<T> = std::result::Result<T, Error>;
