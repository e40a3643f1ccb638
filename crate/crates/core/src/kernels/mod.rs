//! Catalog constructors: coordinate and group algebras of Frobenius kernels,
//! Drinfeld doubles, extended doubles, O(G_(r)) and the maps between them.

pub mod coadjoint;
pub mod coord;
pub mod doubles;
pub mod quasilog;
pub mod spec;

pub use coadjoint::{coadjoint_action, conjugation_coaction};
pub use coord::{
    coordinate_algebra, divided_power_algebra, group_algebra, lucas_binomial, same_structure,
    truncated_symmetric_algebra, Monomials,
};
pub use doubles::{
    double, extended_double, frobenius_id, nu_isomorphism, o_freeness, o_subalgebra, quotient_to_double,
    twisted_subalgebra, BundleFile, FreenessReport, KernelBundle,
};
pub use quasilog::{quasilogarithm, Quasilog};
pub use spec::{CaseId, GroupSchemeSpec, Kind};
