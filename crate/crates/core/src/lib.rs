//! Subset-averaged complexity for shifts of finite type and Markov measures.
//!
//! The crate computes, for a vertex shift of finite type `X` and a system of
//! coefficients `c(n, |S|)`:
//!
//! * word counts `N(S) = |L_S(X)|` at arbitrary index sets `S`,
//! * the finite-horizon average sample complexity, intricacy, average
//!   configuration complexity and alternate complexity functions,
//! * closed-form series for shifts whose squared adjacency matrix is positive,
//! * average sample pressure for single-coordinate potentials,
//! * the measure-theoretic analogues for (higher-step) Markov measures,
//!   including series, finite-horizon averages and a first-return Monte Carlo
//!   estimator,
//! * grid scans and simplex refinement over parameterised Markov families.
//!
//! Everything here is pure computation and `no_std` (with `alloc`). File
//! formats, the command-line interface and parallel drivers live in the
//! companion `intricacy` crate.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod coeffs;
mod error;
pub mod linalg;
pub mod markov;
pub mod numeric;
pub mod oracle;
pub mod pressure;
pub mod sft;
pub mod subset;
pub mod sweep;
pub mod table;
pub mod topo;

pub use coeffs::{CoefficientKind, CoefficientSystem, SymmetricMeasure, ValidationReport};
pub use error::{Error, Result};
pub use markov::{KStepConditionals, MarkovMeasure, McEstimate, SampledEntropyResult, SeriesResult};
pub use pressure::Potential;
pub use sft::{Sft, WordCount};
pub use subset::SubsetSpec;
pub use sweep::{MarkovFamily, Objective, SweepResult};
pub use topo::ComplexityProfile;
