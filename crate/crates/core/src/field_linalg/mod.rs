//! Finite fields, dense matrices and Jordan types.

pub mod field;
pub mod jordan;
pub mod matrix;

pub use field::{Elem, Field, FieldDesc};
pub use jordan::{is_free_nilpotent, is_free_over_truncated_line, jordan_type, Partition};
pub use matrix::{Matrix, RowSpace, MAX_DIM};
