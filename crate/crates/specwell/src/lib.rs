//! Inverse spectral reconstruction of one-dimensional polynomial potential
//! wells, and the nonlinear-optical response of what comes back.
//!
//! The forward problem is routine: given a potential `V(x)`, discretize the
//! time-independent Schrödinger equation on a grid, diagonalize, and read off
//! energies `E_n` and transition dipole moments `x_ij = ⟨i|x|j⟩`. This crate
//! also runs that machine *backwards*: given a truncated `N`-state spectrum
//! and dipole matrix, it assembles the linear system that a polynomial
//! potential of degree `M−1 = N(N+1)/2 − 1` would have to satisfy, solves it
//! in the least-norm sense through an SVD pseudo-inverse, carves a bounded
//! well out of the resulting polynomial, and then re-solves the forward
//! problem to judge the reconstruction by a scale-free figure of merit.
//!
//! Everything is in atomic units (`ħ = m = e = 1`). The natural length scale
//! of an `N`-state system is `x_max = 1/√(2 E_10)` — the dipole magnitude
//! that saturates the ground-row Thomas-Reiche-Kuhn sum rule in a two-level
//! system — and intrinsic (dimensionless) hyperpolarizabilities quote β
//! against the fundamental limit `β_max = 3^{1/4}/E_10^{7/2}`.
//!
//! Module map:
//!
//! * [`spectra`] — the `SpectralData` model, TRK sum-rule diagnostics,
//!   residual-strength row completion, and the figure of merit.
//! * [`eigensolver`] — grid discretization, Dirichlet walls (including
//!   infinite-sentinel clipping), a hand-rolled symmetric tridiagonal
//!   eigensolver, dipole extraction, and automatic domain sizing.
//! * [`response`] — zero-frequency sum-over-states hyperpolarizability, the
//!   fundamental limit, and the intrinsic ratio.
//! * [`inverse`] — the B/C assembly, SVD least-norm solve, well-domain
//!   search (minimum selection + boundary placement), and the full
//!   spectra → polynomial → spectra roundtrip.
//! * [`families`] — closed-form oscillator ladders (full and clipped) used
//!   as exact, width-scalable inputs for the scans.
//! * [`pipelines`] — the four reproducible studies: scale scan, clipped-
//!   oscillator state-count convergence, Monte Carlo large-β search, and the
//!   half-power exponent scan. Seeded, deterministic, thread-count-stable.
//! * [`io`] — JSON/CSV emission with fixed layouts and atomic file writes.
//!
//! The library never prints; all operations return values or typed errors
//! ([`Error`]). Statuses that are *results* rather than failures (a
//! reconstruction with no usable well, say) are recorded as data by the
//! pipelines instead of being raised.

pub mod error;
pub mod rng;
pub mod spectra;
pub mod tridiag;
pub mod eigensolver;
pub mod response;
pub mod inverse;
pub mod families;
pub mod pipelines;
pub mod io;

pub use error::{Error, Result};
pub use spectra::SpectralData;
pub use eigensolver::{EigenSolution, GridSpec, PotentialSpec};
pub use inverse::{InverseSolution, PolynomialPotential, WellDomain};
pub use response::ResponseReport;

/// Compiles the README's code examples alongside the doctests so they can't
/// drift from the API.
#[cfg(doctest)]
#[doc = include_str!("../../../README.md")]
struct ReadmeDoctests;
