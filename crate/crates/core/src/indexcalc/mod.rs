//! Exact multi-index arithmetic, homogeneities, population counts,
//! populated-set membership and enumeration up to a grade cutoff.

mod enumerate;
mod graded;
mod multi_index;

pub use enumerate::{brute_force_populated, enumerate_populated, IndexSet, SetFilter};
pub use graded::{check_surrogate_order, GradeKind, GradedValue, HomParams};
pub use multi_index::{Membership, MultiIndex, PolyExp};
