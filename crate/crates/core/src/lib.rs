//! Exact and approximate spectra of a Josephson junction between two finite
//! superconducting islands.
//!
//! The junction is a two-site Bose-Hubbard dimer with `2N` Cooper pairs. In
//! the charge basis `|n⟩, n ∈ {−N, …, N}` its Hamiltonian is tridiagonal,
//!
//! ```text
//! H = E_C (n − n_g)² − (E_J/2N) Σ √((N−n)(N+n+1)) (|n+1⟩⟨n| + h.c.)
//! ```
//!
//! and reduces to the usual transmon/Cooper-pair-box model as `N → ∞`.
//!
//! * [`model`]: parameters, the Bose-Hubbard map, material estimates.
//! * [`hamiltonian`]: coefficient streams, charge windows, spin matrices.
//! * [`eigensolve`]: Sturm bisection, inverse iteration and a dense QL oracle.
//! * [`observables`]: qubit frequency, `⟨n⟩`, susceptibility, sweeps, curvatures.
//! * [`perturbation`]: closed forms for both regimes.
//! * [`wick`]: normal ordering and vacuum expectation values of ladder polynomials.
//! * [`cli`]: the `finite-jj` command line.

// `!(x > 0.0)` is used on purpose so that NaN is rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod constants;
pub mod eigensolve;
pub mod error;
pub mod hamiltonian;
pub mod model;
pub mod observables;
pub mod perturbation;
pub mod table;
pub mod wick;

pub use eigensolve::{EigenPair, Spectrum, SymTridiagonal};
pub use error::{Error, Result};
pub use hamiltonian::{ChargeWindow, TridiagonalHamiltonian};
pub use model::{BoseHubbardParams, CircuitParams, MaterialProps, ValidityReport};
pub use observables::WindowPolicy;
pub use perturbation::BogoliubovCoeffs;
pub use table::SweepTable;
pub use wick::OperatorPoly;
