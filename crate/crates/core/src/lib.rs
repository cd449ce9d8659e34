//! Expansions of numbers in `[0,1]` with respect to two integer bases.
//!
//! For `1 < a < b`, digit 0 acts as `T_0(x) = x/a` and digits `j >= 1` as
//! `T_j(x) = (x + j)/b`. A digit sequence `d` expands
//! `π(d) = lim T_{d1} ∘ … ∘ T_{dn}(0)`. Because `T_0([0,1])` and `T_1([0,1])`
//! overlap on `[1/b, 1/a]`, points generally have many expansions.
//!
//! Everything that decides membership or equality is computed with exact
//! rationals; floats only appear in dimension estimates and statistics.

pub mod affine;
pub mod cli;
pub mod dimension;
pub mod dynamics;
pub mod error;
pub mod multiplicity;
pub mod params;
pub mod rational;
pub mod word;

pub use affine::{compose_word, cylinder, pi_periodic, pi_prefix, pi_shifts, AffineMap, Interval};
pub use dimension::{
    box_count_dimension, detect_exact_overlaps, hausdorff_formula, is_commensurable,
    similarity_dimension, DigitSet, DimensionCase, DimensionResult, OverlapPair,
};
pub use dynamics::{
    greedy_expand, greedy_step, invariant_density_histogram, orbit, overlap_hit_stats,
    DensityHistogram, OrbitStats,
};
pub use error::{Error, Result};
pub use multiplicity::{
    check_unique, enumerate_prefixes, search_unique_periodic, thm42_language,
    verify_language_bounds, viable_digits, GoodRegion, PrefixCount, UniquenessVerdict,
};
pub use params::{validate_params, Params};
pub use rational::{parse_rational, Rational};
pub use word::{Digit, DigitWord, EventuallyPeriodicWord};
