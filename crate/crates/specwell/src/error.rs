//! Error taxonomy.
//!
//! Two kinds of failure live here. Hard errors (`DimensionMismatch`,
//! `InvalidInput`, …) mean the caller handed us something malformed. Physical
//! statuses (`NoMinimum`, `NoConfinement`, `NegativeResidual`,
//! `UnresolvedStates`) are legitimate outcomes of the algorithms — a
//! reconstructed polynomial really can be a pure barrier — and the pipelines
//! record them per-sample rather than aborting.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Two spectra (or a matrix/vector pair) disagree about the state count.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// Input data violates a `SpectralData` invariant (symmetry, ordering…).
    #[error("invalid spectra: {0}")]
    InvalidSpectra(String),

    /// A configuration value is out of its documented range.
    #[error("invalid config: {0}")]
    InvalidConfig(String),

    /// The ground-row oscillator strength left for the target state is
    /// negative: the supplied dipole moments already over-saturate the
    /// Thomas-Reiche-Kuhn sum `Σ E_i0 |x_0i|² = 1/2`.
    #[error("negative residual oscillator strength: {residual:.6e}")]
    NegativeResidual {
        /// The (negative) residual strength in atomic units.
        residual: f64,
    },

    /// Fewer usable interior grid points than the resolution guard allows.
    #[error("insufficient grid: {0}")]
    InsufficientGrid(String),

    /// The requested top state sits above the potential at an artificial
    /// (grid-edge) wall, so its wavefunction is shaped by the box, not the
    /// well. Enlarge the domain.
    #[error(
        "unresolved states: E_{top_index} = {energy:.6} exceeds the artificial-wall \
         potential {wall_potential:.6}; the domain is too narrow"
    )]
    UnresolvedStates {
        top_index: usize,
        energy: f64,
        wall_potential: f64,
    },

    /// Domain expansion hit its width cap without confining the requested
    /// number of states (e.g. a barrier, or a well too shallow to hold them).
    #[error("no confinement: {0}")]
    NoConfinement(String),

    /// The polynomial has no local minimum anywhere on the scan interval —
    /// it is monotone or a pure barrier. Meaningful output for an inversion:
    /// the procedure found no well to bound.
    #[error("no minimum: polynomial has no local minimum on the scan interval")]
    NoMinimum,

    /// SVD input was identically zero; no direction carries any information.
    #[error("zero matrix passed to the least-norm solver")]
    ZeroMatrix,

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Whether this error is a *physical status* — an outcome the pipelines
    /// record as data — rather than a malformed-input failure.
    #[must_use]
    pub fn is_physical(&self) -> bool {
        matches!(
            self,
            Error::NegativeResidual { .. }
                | Error::NoConfinement(_)
                | Error::NoMinimum
                | Error::UnresolvedStates { .. }
        )
    }
}
