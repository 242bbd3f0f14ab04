//! Exact sphere and ball cardinalities in symmetric groups under
//! right-invariant metrics.
//!
//! The main route is the split-type pipeline: count connected permutations
//! by distance, convolve them into split-type counts `β(R, m, q)`, and sum
//! `β(R, m, q) [n + q - m choose q]`. An exhaustive oracle over `S_n` checks
//! it for small `n`.
//!
//! ```
//! use permsphere::{Enumerator, Metric, Radius};
//!
//! let e = Enumerator::default();
//! let a = e.pipeline_sphere(Metric::L1, 5, Radius(12)).unwrap();
//! assert_eq!(a, e.oracle_sphere(Metric::L1, 5, Radius(12)).unwrap());
//! assert_eq!(a.to_string(), "20");
//! ```

pub mod closed_form;
pub mod decimal;
pub mod enumeration;
pub mod growth;
pub mod metrics;
pub mod perm;
pub mod poly;
pub mod scalar;
pub mod series;
pub mod verify;

pub use closed_form::{closed_form_beta, ClosedForm, Family};
pub use enumeration::{BetaTable, CountReport, EnumConfig, EnumError, Enumerator, Method};
pub use growth::{
    ball_polynomial, hamming_sphere, leading_term_check, q_polynomial, r_polynomial,
    series_coefficients, sphere_polynomial, CountPoly,
};
pub use metrics::{Metric, MetricError, Radius};
pub use perm::{PermError, Permutation, SplitDecomposition, SplitType};
pub use poly::{Basis, BinomialPoly, RationalPoly, Term};
pub use series::PowerSeries;
pub use verify::{run_verify, Check, Verdict, VerifyOptions, VerifyReport};

/// Exact counts.
pub type Count = num_bigint::BigUint;
/// Monomial-basis view of a counting polynomial.
pub type ExpandedPoly = RationalPoly<num_bigint::BigInt>;
