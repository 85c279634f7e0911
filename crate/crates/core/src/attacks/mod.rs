//! Attacks on the scheme.
//!
//! Both attacks exploit the same structural facts: every block is verified
//! on its own, and the only secret involved in a block's authentication is
//! the fixed permutation of its watermark bits.

mod collage;
mod crack;
mod forge;

pub use self::collage::{collage, RegionAssignment};
pub use self::crack::{
    count_candidates, count_candidates_u64, crack_permutation, CrackBudget, CrackResult, Cracker,
    LONG_SEARCH_ELEMENTS, MAX_SEARCH_ELEMENTS, WORK_UNIT,
};
pub use self::forge::forge;
