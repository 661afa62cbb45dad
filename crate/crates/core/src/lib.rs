//! Exact computer algebra for double bubble plumbings.
//!
//! The crate builds the dg quiver presentations `W_k`, `A_k` and the Ginzburg
//! algebra `G_k`, checks their differentials and the comparison map between
//! them, computes degree-zero cohomology through a noncommutative rewriting
//! engine, and carries the commutative, group-theoretic and 3-manifold
//! arithmetic that goes with them.

pub mod arith;
pub mod expr;
pub mod linalg;
pub mod path_algebra;
pub mod presentation_file;
pub mod dg;
pub mod families;
pub mod gate;
pub mod ginzburg;
pub mod groups;
pub mod h0;
pub mod report;
pub mod rewriting;
pub mod singularity;

pub use arith::{smith_normal_form, ArithError, Field, IntMatrix, Scalar};
pub use path_algebra::{AlgebraElement, Monomial, Path, Quiver};
