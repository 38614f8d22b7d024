//! Set-valued analysis on finite point sets in `R^d`.
//!
//! The crate models nonempty compact sets as finite [`PointCloud`]s and convex
//! compact sets as vertex-represented [`ConvexBody`]s, and builds on them:
//!
//! - [`geometry`]: Minkowski arithmetic, hulls, point-to-set distances, the
//!   Pompeiu-Hausdorff metric and budgeted pruning of large clouds.
//! - [`convergence`]: finite-prefix diagnostics for Hausdorff, Fisher and
//!   Wijsman convergence of set sequences.
//! - [`convexification`]: repeated Minkowski averages, epsilon-nets of set
//!   families, quantization of sequences onto nets and a Shapley-Folkman
//!   gap oracle.
//! - [`random_sets`]: simple (finitely-atomic) random sets, their Aumann and
//!   Hukuhara expectations and sampled selection integrals.
//! - [`radstrom`]: support-function embedding of convex bodies on a direction
//!   grid.
//! - [`slln`]: the strong-law harness tying everything together.

pub mod convergence;
pub mod convexification;
mod error;
pub mod geometry;
pub mod radstrom;
pub mod random_sets;
pub mod scenarios;
pub mod slln;

pub use error::{Error, Result};
pub use geometry::{ConvexBody, PointCloud, PruneBudget, Vector};
