//! Finite-dimensional modules over the catalog algebras.

pub mod module;
pub mod ops;

pub use module::{FDModule, ModuleFile, MAX_MODULE_DIM};
pub use ops::{hom_space, is_isomorphic, socle_element, CoproductChoice, ModuleMorphism};
