//! Dense numerical simulation of phase-discrimination circuits and the
//! quantum-walk search and eigenspace-filtering algorithms built on them.
//!
//! The crate is organised around a small dense complex linear-algebra layer
//! ([`linalg`], [`eig`]) and the algorithm modules on top of it:
//!
//! - [`chebyshev`]: Chebyshev polynomials, the quasi-Chebyshev recurrence,
//!   and the analytical rotation-angle schedule.
//! - [`qpd`]: the phase-discrimination circuit `C(U, lambda, L)`, both in the
//!   reduced single-eigenstate picture and as a full dense unitary.
//! - [`graph`]: simple undirected graphs, Laplacian spectra, continuous-time
//!   walk propagators, and classical hitting times.
//! - [`search`]: the approximate reflection `R(delta)`, controlled intermittent
//!   walks, recursive amplitude amplification, and the search process.
//! - [`filter`]: phase-filter projection onto the 1-eigenspace of a
//!   two-subspace reflection product, with the effective-spectral-gap check.
//! - [`baseline`]: the even Chebyshev eigenstate-filtering polynomial and
//!   the one-qubit `sin` block encoding, used as a comparison baseline.
//!
//! Everything is `f64`, deterministic, and `no_std`-compatible (with `alloc`);
//! float transcendentals go through `libm` in all configurations so results
//! do not depend on the build flavor.
//!
//! # Quick start
//!
//! Size an angle schedule for a gap and error budget, then read off the
//! accept amplitude of a single eigenstate:
//!
//! ```
//! use qpdkit_core::chebyshev::make_schedule;
//! use qpdkit_core::linalg::cabs;
//! use qpdkit_core::qpd::ancilla_response;
//! use std::f64::consts::PI;
//!
//! let schedule = make_schedule(PI / 8.0, 0.1, 2).unwrap();
//! assert_eq!(schedule.depth, 17);
//! // Zero eigenphase is accepted exactly ...
//! assert!((cabs(ancilla_response(0.0, &schedule)) - 1.0).abs() < 1e-12);
//! // ... and everything outside the gap leaks at most delta.
//! assert!(cabs(ancilla_response(1.0, &schedule)) <= 0.1);
//! ```
//!
//! Search a cycle for a marked vertex with exact probability accounting:
//!
//! ```
//! use qpdkit_core::graph::cycle;
//! use qpdkit_core::search::{search, SearchConfig, SearchMode};
//!
//! let cfg = SearchConfig::new(cycle(16), vec![3], 1.0 / 16.0, 0.1, 7).unwrap();
//! let trace = search(&cfg, SearchMode::Exact).unwrap();
//! assert!(trace.cumulative_success > trace.success_bound);
//! ```

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod baseline;
pub mod chebyshev;
pub mod eig;
mod error;
pub mod filter;
pub(crate) mod fmath;
pub mod graph;
pub mod linalg;
pub mod qpd;
pub mod rng;
pub mod search;

pub use error::Error;

// The domain types most callers touch, re-exported from their home modules.
pub use chebyshev::AngleSchedule;
pub use graph::{Graph, GraphSpectrum};
pub use qpd::{DenseUnitary, StateVector};
pub use search::{SearchConfig, SearchTrace};

/// Crate-wide result alias.
pub type Result<T> = core::result::Result<T, Error>;

/// Default relative/absolute tolerance for exact identities.
pub const DEFAULT_TOL: f64 = 1e-10;
