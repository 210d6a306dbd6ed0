//! Complete and continuous isometry invariants of finite unlabeled point clouds.
//!
//! A cloud of `m` unlabeled points in `R^n` is summarised by distributions of
//! distance matrices taken relative to every small subset of its points:
//!
//! * [`invariants::sdd`] builds the Simplexwise Distance Distribution, valid in any
//!   metric space, together with the cheaper [`invariants::sdv`], [`invariants::pdd`],
//!   [`invariants::amd`] and moment vectors ([`invariants::sdm`]).
//! * [`oriented::scd`] builds the Simplexwise Centered Distribution, a complete
//!   invariant of Euclidean clouds up to rigid motion, whose orientation signs are
//!   smoothed by the simplex [`oriented::strength`].
//! * [`metrics`] compares these invariants with Lipschitz-continuous metrics
//!   (bottleneck, Linear Assignment Cost, Earth Mover's Distance).
//! * [`oracle`] holds brute-force ground truth used to validate all of the above.

pub mod error;
pub mod geometry;
pub mod invariants;
pub mod io;
pub mod metrics;
pub mod oracle;
pub mod oriented;
mod perm;

pub use error::{Error, Result};
pub use geometry::{Cloud, CondensedDistances, Isometry};
pub use invariants::{MomentVector, Rdd, Sdd};
pub use metrics::{CostMatrix, DistanceMode, Equivalence, WeightedDistribution};
pub use oriented::{Ocd, Scd, SignFeature, StrengthConfig};
