//! Algebras by structure constants, Hopf data, smash products and algebra
//! morphisms.

pub mod algebra;
pub mod axioms;
pub mod morphism;
pub mod smash;
pub mod sparse;

pub use algebra::{dual_hopf, tensor_algebra, AlgebraData, AlgebraRef, HopfData, StructuredAlgebra, WordBasis};
pub use axioms::{check_algebra_axioms, check_hopf_axioms, AxiomReport};
pub use morphism::AlgebraMorphism;
pub use smash::{Algebra, LazySmash};
pub use sparse::{sparse_rank, SparseTable, SparseVec};
pub mod serial;
pub use serial::{canonical_json, AlgebraFile, MorphismFile, SmashFile};
