//! Words over `Q ∪ Z_ρ`: rewriting into `τ_1 τ_2 τ_3` form, two word-length
//! oracles, the geodesic control bound and a four-point `δ` estimator.

mod bfs;
mod delta;
mod length;
mod letter;
mod short;

pub use bfs::{bfs_ball, word_length_bfs, BfsLength, Truncation};
pub use delta::{four_point_defect, four_point_delta, four_point_delta_sampled};
pub use length::{
    focal_lower_bound, k0_bound, k0_from_ell0, q_additive_length, unit_ball_split, word_length_tau,
    AdditiveLength, K0Bound, TauLength, DEFAULT_ADDITIVE_BOUND, DEFAULT_ADDITIVE_DEPTH,
};
pub use letter::{Direction, Letter, NormalForm, WordContext};
pub use short::{short_length, ShortLength};
