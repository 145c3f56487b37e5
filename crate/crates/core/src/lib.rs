//! Exact and asymptotic probabilities of specified points in uniformly
//! random 312-avoiding permutations.
//!
//! - [`exact`]: closed-form counts for points below the diagonal.
//! - [`asymptotics`]: leading-order approximations of those counts.
//! - [`corner`]: the lower-right corner limit and its random walk.
//! - [`sampler`]: exact uniform sampling through Dyck paths.
//! - [`oracle`] and [`verify`]: brute-force references for small `N`.
//!
//! ```
//! use permlab::{event_prob, EventSpec};
//!
//! let p = event_prob(4, &EventSpec::new(vec![(3, 2)]).unwrap()).unwrap();
//! assert_eq!(p.to_string(), "3/14");
//! ```

pub mod asymptotics;
pub mod bigmath;
pub mod corner;
pub mod dyck;
pub mod error;
pub mod exact;
pub mod exec;
pub mod oracle;
pub mod perm;
pub mod prob;
pub mod sampler;
pub mod verify;

pub use asymptotics::{
    approx_one_point, approx_two_decreasing, approx_two_increasing, cov_limit, kstar, CovCase,
    ScaledPoint,
};
pub use bigmath::{binomial, catalan, BigCount};
pub use corner::{
    chain_exact_corner_prob, chain_limit_prob, pi_jump, rho, sample_corner_walk, theta_limit,
    CornerChain, CornerEvent, CornerPoint,
};
pub use dyck::{dyck_to_perm, perm_to_dyck, sample_dyck, DyckPath};
pub use error::{Error, Result};
pub use exact::{
    conditional_corner_prob, count_k_decreasing, count_lambda, count_one_point, count_sbox,
    count_two_increasing, event_count, event_prob,
};
pub use exec::Execution;
pub use perm::{EventSpec, Pattern, Permutation};
pub use prob::ExactProb;
pub use sampler::{estimate_event, heatmap, sample_uniform_312, Estimate, Heatmap};
