//! Exact arithmetic for power-sum (Waring) decompositions of the determinant.

pub mod cyclotomic;
pub mod decompositions;
pub mod independence;
pub mod linalg;
pub mod multipoly;
pub mod perm;
pub mod symmetry;
pub mod varieties;
pub mod verify;

/// How loops over independent work items are run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Exec {
    Sequential,
    #[default]
    Parallel,
}
