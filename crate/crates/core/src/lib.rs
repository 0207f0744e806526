//! Completely positive maps on `M_n(ℂ)` and the Hilbert spaces attached to
//! their GNS correspondences.
//!
//! * [`numerics`] – dense complex matrices, a Jacobi Hermitian eigensolver,
//!   numerical rank, Kronecker products and basis permutations.
//! * [`channel`] – Kraus, Choi and superoperator forms of a CP map and its
//!   index `d(P)`.
//! * [`gns`] – Gram matrices of the reduced correspondence `F_P` and of the
//!   corner space, and the isometry `F_P ≅ ℂ^{d(P)}`.
//! * [`compose`] – the two-step correspondence of a pair of maps and its
//!   factorization `F_{P₁P₂} ≅ F_{P₁} ⊗ F_{P₂}`.
//!
//! Indices are 0-based and matrices row-major throughout. A pair label
//! `(i, j)` with `0 ≤ i, j < n` sits at position `i·n + j`.

pub mod channel;
pub mod compose;
pub mod error;
pub mod gns;
pub mod numerics;

pub use channel::{ChoiMatrix, CpMap, IndexReport};
pub use compose::{FactorizationReport, TwoStepGram};
pub use error::{Error, Result};
pub use gns::{GramMatrix, MoritaWitness, TheoremOneReport};
pub use numerics::{ComplexMatrix, RankPolicy};
