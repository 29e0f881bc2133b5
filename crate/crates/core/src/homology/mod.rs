//! Exact integer homological algebra: Smith normal form, homology of finite
//! graded complexes, induced maps and the tower/reduced splitting of
//! `ℤ[U]`-modules.

mod complex;
mod group;
pub mod matrix;
mod tower;

pub use complex::{ChainMap, GradedComplex, SparseMap};
pub use group::{graded_homology, induced_map, Chain, DegreeHomology, GradedGroup, InducedMap, Summand};
pub use matrix::{smith_normal_form, smith_normal_form_i64, IntMatrix, Matrix, SmithForm};
pub use tower::{tower_decompose, TowerDecomposition};
