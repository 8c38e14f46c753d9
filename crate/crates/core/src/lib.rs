//! Exact-arithmetic divisor theory and tropical linear series on metric graphs.
//!
//! Everything here is computed over arbitrary-precision rationals; there is no
//! floating point anywhere in the core. The crate provides:
//!
//! * metric graphs with rational edge lengths, points, tangent directions and
//!   subdivisions ([`graph`]),
//! * piecewise-linear functions with integer slopes and divisors ([`plfn`],
//!   [`divisor`]),
//! * reduced divisors, Baker-Norine rank and extremal functions ([`rank`]),
//! * finitely generated tropical submodules: membership, minimal generators,
//!   slope vectors and covered loci ([`submodule`]),
//! * tropical dependence with verifiable witnesses ([`dependence`]),
//! * the tropical-linear-series axiom checks and the constructive rank-1
//!   machinery ([`tls`]),
//! * matroids, valuated matroids and the Levi-graph rank-2 construction
//!   ([`matroid`]),
//! * tropical modifications, coordinate maps and balancing checks
//!   ([`morphism`]),
//! * built-in example graphs used as regression fixtures ([`fixtures`]) and
//!   JSON codecs for all of the above ([`json`]).

pub mod dependence;
pub mod divisor;
pub mod envelope;
pub mod error;
pub mod fixtures;
pub mod graph;
pub mod json;
pub mod matroid;
pub mod morphism;
pub mod plfn;
pub mod rank;
pub mod rational;
pub mod submodule;
pub mod tls;

pub use dependence::{decide_dependence, exhaustive_dependence_3, verify_combination};
pub use dependence::{CombinationVerdict, DependenceAnswer};
pub use divisor::Divisor;
pub use error::Error;
pub use graph::{MetricGraph, Point, Subdivision, TangentVector};
pub use plfn::PLFunction;
pub use rank::{bn_rank, dhar_reduce, extremal_function, is_equivalent_effective};
pub use rational::Rational;
pub use submodule::{SlopeVector, TropicalSubmodule};
