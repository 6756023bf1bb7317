//! Random sampling from matrix groups, big and small.
//!
//! The crate draws (near-)uniform random elements from:
//!
//! - `SL(2,Z)` with bounded Frobenius norm, by uniform sampling in a
//!   hyperbolic disk followed by Gauss reduction ([`sl2z`]), with a naive
//!   rejection sampler and an exhaustive enumeration oracle as ground truth;
//! - integer lattice balls and bounded-norm integer matrices ([`lattice`]);
//! - `O(n)` under Haar measure, `O(n,Z)` (signed permutations), and the
//!   rational points of `SO(2)` ([`orthogonal`]);
//! - `SL(n,p)`, `Sp(2n,p)`, symmetric groups, and an expander-walk
//!   approximate sampler ([`finite`]);
//! - Dirichlet domains of user-supplied Fuchsian groups by greedy reduction
//!   ([`fuchsian`]).
//!
//! Everything is driven by the deterministic seedable generator in [`rng`],
//! and every uniformity claim is checkable through the statistics harness in
//! [`stats`].

pub mod error;
pub mod fuchsian;
pub mod hyperbolic;
pub mod lattice;
pub mod orthogonal;
pub mod rng;
pub mod sl2z;
pub mod stats;

mod dd;
pub mod finite;

pub use error::{Error, Result};
pub use fuchsian::{
    greedy_reduce, greedy_reduce_capped, step_count_experiment, GeneratorSet, ReductionTrace,
    StepStats,
};
pub use hyperbolic::{
    halfplane_point, hdist, mobius_apply, pick_halfplane, pick_hyperbolic, HPoint, Mobius,
    PolarHPoint,
};
pub use lattice::{ball_point, pick_lattice_vector, pick_matrix, LatticeVector, MatNZ};
pub use orthogonal::{
    enumerate_rational_rotations, random_orthogonal, random_signed_permutation,
    sample_rational_rotation, two_squares_count, visible_point_count, OrthoMatrix,
    RationalRotation,
};
pub use rng::{gaussian_pair, gen_random, DensitySpec, RandomStream};
pub use sl2z::{
    enumerate_sl2z, pick_fancy, pick_fancy_traced, pick_sl_naive, pick_sl_naive_traced,
    radius_schedule, reduce2, reduce2_traced, translation_distance, FancyDraw, Mat2Z, ReducedPair,
    SingularProfile,
};
pub use stats::{
    chi_square_two_sample, chi_square_uniform, ks2_p_value, ks2_statistic, ks_statistic,
    tv_distance_uniform, SampleReport,
};
pub use finite::{
    expander_walk_sample, gen_perm, gen_rand_sl, gen_rand_sp, is_symplectic, symplectic_project,
    transvection_generators, FpMatrix, Permutation, PrimeField, SymplecticSpace,
};
