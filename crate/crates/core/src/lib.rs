//! Ramified-prime statistics for number fields of low degree.
//!
//! The crate computes, in exact arithmetic where possible:
//!
//! * the local ramification densities `rho_d(p)` of degree-`d` fields and
//!   their multiplicative extension to squarefree moduli ([`densities`]);
//! * the independent-Bernoulli model `R_d(Z) = sum_{p <= Z} R_{d,p}`, its
//!   exact law, cumulant-based moments and a seeded sampler ([`model`]);
//! * the distribution of `omega(n)` for `n <= X` by a segmented sieve
//!   ([`intsieve`]);
//! * quadratic fields via fundamental discriminants ([`quadratic`]) and cubic
//!   fields via reduced binary cubic forms ([`cubic`]);
//! * moment and distribution statistics over enumerated fields ([`stats`]).
//!
//! Everything here is `no_std` + `alloc` and single threaded. Work is exposed
//! in independent units (sieve blocks, coefficient ranges, draw ranges) whose
//! results merge associatively, so a caller with threads can fan out without
//! changing any result.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod cubic;
pub mod densities;
pub mod error;
pub mod float;
pub mod histogram;
pub mod intsieve;
pub mod model;
pub mod primes;
pub mod quadratic;
pub mod stats;

pub use densities::{density, gaussian_moment, local_density, loglog_mean, FamilySpec, Rational};
pub use error::{Error, Result};
pub use histogram::Histogram;
pub use model::{BernoulliFamily, ModelDistribution, MomentReport, MomentSource};
pub use primes::PrimeTable;
pub use quadratic::FieldRecord;
