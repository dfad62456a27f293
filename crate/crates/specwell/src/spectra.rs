//! Spectral data model, Thomas-Reiche-Kuhn diagnostics, row completion, and
//! the scale-free figure of merit.
//!
//! A truncated `N`-state system is fully described by its energies and the
//! real symmetric transition dipole matrix `x_ij = ⟨i|x|j⟩`. Everything
//! downstream — sum rules, hyperpolarizabilities, the inverse problem —
//! consumes exactly this pair, so it gets a validated type with the
//! invariants checked once at the boundary:
//!
//! * `x_ij = x_ji` exactly (dipole operators are Hermitian and real here),
//! * energies strictly ascending,
//! * `E_10 = E_1 − E_0 > 0` (the scale that defines `x_max`).
//!
//! The TRK sum rules tie the two halves together. For a one-electron
//! mechanical Hamiltonian the generalized rule reads (a.u.)
//!
//! ```text
//! S_pq = Σ_n [E_n − (E_p + E_q)/2] x_pn x_nq = (1/2) δ_pq ,
//! ```
//!
//! exact over the *complete* basis. Truncation to `N` states leaves the
//! low-index rows nearly saturated and pushes the deficit into the top rows;
//! [`trk_residual`] reports the deviation matrix, and
//! [`complete_dipole_row`] runs the (0,0) rule backwards to solve for one
//! missing ground-row moment from the leftover strength.

use crate::error::{Error, Result};

/// ħ, m, e — all pinned to 1 (atomic units) in every shipped configuration.
///
/// Kept as a value rather than a convention-by-comment so the handful of
/// places where a formula genuinely carries `ħ²/2m` can spell it out.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UnitSystem {
    pub hbar: f64,
    pub mass: f64,
    pub charge: f64,
}

impl Default for UnitSystem {
    fn default() -> Self {
        Self { hbar: 1.0, mass: 1.0, charge: 1.0 }
    }
}

impl UnitSystem {
    /// The `ħ²/2m` prefactor that appears in the sum rules; 1/2 in a.u.
    #[must_use]
    pub fn half_hbar2_over_m(&self) -> f64 {
        0.5 * self.hbar * self.hbar / self.mass
    }
}

/// Energies and transition dipole matrix of a truncated `N`-state system.
///
/// The dipole matrix is stored row-major, `N×N`. Construction validates the
/// invariants; accessors never re-check.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralData {
    energies: Vec<f64>,
    dipole: Vec<f64>,
}

impl SpectralData {
    /// Build from raw parts, enforcing the type invariants.
    ///
    /// `dipole` is row-major `N×N` with `N = energies.len()`. Symmetry is
    /// required *exactly*: the matrix either came from a symmetrizing
    /// extractor or from a JSON round-trip of one, and any true asymmetry
    /// means the caller's data is wrong, not merely noisy.
    pub fn new(energies: Vec<f64>, dipole: Vec<f64>) -> Result<Self> {
        let n = energies.len();
        if n < 2 {
            return Err(Error::InvalidSpectra(format!(
                "need at least 2 states, got {n}"
            )));
        }
        if dipole.len() != n * n {
            return Err(Error::InvalidSpectra(format!(
                "dipole has {} entries, expected {n}×{n} = {}",
                dipole.len(),
                n * n
            )));
        }
        if !energies.iter().all(|e| e.is_finite()) || !dipole.iter().all(|x| x.is_finite()) {
            return Err(Error::InvalidSpectra(
                "energies and dipole entries must be finite".into(),
            ));
        }
        for w in energies.windows(2) {
            if w[1] <= w[0] {
                return Err(Error::InvalidSpectra(format!(
                    "energies must be strictly ascending; found {} after {}",
                    w[1], w[0]
                )));
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if dipole[i * n + j] != dipole[j * n + i] {
                    return Err(Error::InvalidSpectra(format!(
                        "dipole not symmetric at ({i},{j}): {} vs {}",
                        dipole[i * n + j],
                        dipole[j * n + i]
                    )));
                }
            }
        }
        Ok(Self { energies, dipole })
    }

    /// Number of states `N`.
    #[must_use]
    pub fn num_states(&self) -> usize {
        self.energies.len()
    }

    /// Energy of state `n` (a.u.).
    #[must_use]
    pub fn energy(&self, n: usize) -> f64 {
        self.energies[n]
    }

    /// All energies, ascending.
    #[must_use]
    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    /// Transition energy `E_nℓ = E_n − E_ℓ`.
    #[must_use]
    pub fn de(&self, n: usize, l: usize) -> f64 {
        self.energies[n] - self.energies[l]
    }

    /// The fundamental gap `E_10 > 0`.
    #[must_use]
    pub fn e10(&self) -> f64 {
        self.energies[1] - self.energies[0]
    }

    /// Dipole element `x_ij`.
    #[must_use]
    pub fn x(&self, i: usize, j: usize) -> f64 {
        self.dipole[i * self.num_states() + j]
    }

    /// Raw dipole matrix, row-major.
    #[must_use]
    pub fn dipole(&self) -> &[f64] {
        &self.dipole
    }

    /// Centered element `x̄_ij = x_ij − δ_ij x_00`: positions measured from
    /// the ground-state mean, which shifts every diagonal element and leaves
    /// off-diagonals alone. This is the natural variable of the inverse
    /// problem (the polynomial is expanded about `c = x_00`).
    #[must_use]
    pub fn xbar(&self, i: usize, j: usize) -> f64 {
        if i == j {
            self.x(i, j) - self.x(0, 0)
        } else {
            self.x(i, j)
        }
    }

    /// The two-level sum-rule-saturating dipole scale
    /// `x_max = ħ/√(2 m E_10)` — 1/√(2 E_10) in a.u. No transition moment
    /// from the ground state can exceed it, and all scale-free quantities
    /// divide lengths by it.
    #[must_use]
    pub fn x_max(&self) -> f64 {
        1.0 / (2.0 * self.e10()).sqrt()
    }
}

/// Dimensionless copy of a spectrum: energies in units of `E_10`, dipoles in
/// units of `x_max`.
#[derive(Clone, Debug)]
pub struct ScaleFreeSpectra {
    /// `e_n = E_n / E_10`; by construction `e_1 − e_0 = 1`.
    pub e_n: Vec<f64>,
    /// `ξ_ij = x_ij / x_max`, row-major `N×N`.
    pub xi: Vec<f64>,
    /// The length scale that was divided out.
    pub x_max: f64,
}

impl ScaleFreeSpectra {
    #[must_use]
    pub fn from_spectra(s: &SpectralData) -> Self {
        let e10 = s.e10();
        let x_max = s.x_max();
        Self {
            e_n: s.energies().iter().map(|e| e / e10).collect(),
            xi: s.dipole().iter().map(|x| x / x_max).collect(),
            x_max,
        }
    }
}

/// Generalized TRK deviation matrix.
///
/// Returns the `N×N` matrix
///
/// ```text
/// S_pq = Σ_n [E_n − (E_p + E_q)/2] x_pn x_nq − (ħ²/2m) δ_pq ,
/// ```
///
/// zero for a spectrally complete system. Under truncation the missing
/// states bite hardest where they would have contributed most: for the exact
/// harmonic ladder cut at `N` states, every entry vanishes except
/// `S_{N−1,N−1} = −N/2` (the top state has lost its up-going partner).
#[must_use]
pub fn trk_residual(s: &SpectralData) -> Vec<f64> {
    let n = s.num_states();
    let units = UnitSystem::default();
    let mut out = vec![0.0; n * n];
    for p in 0..n {
        for q in 0..n {
            let avg = 0.5 * (s.energy(p) + s.energy(q));
            let mut acc = 0.0;
            for k in 0..n {
                acc += (s.energy(k) - avg) * s.x(p, k) * s.x(k, q);
            }
            if p == q {
                acc -= units.half_hbar2_over_m();
            }
            out[p * n + q] = acc;
        }
    }
    out
}

/// Solve the ground-row TRK rule for one missing moment.
///
/// Given every `x_0i` except `i = target_state`, the (0,0) rule
/// `Σ_i E_i0 |x_0i|² = 1/2` has exactly the residual oscillator strength
/// left for the target:
///
/// ```text
/// |x_{0,target}| = √[(1/2 − Σ_{i≠target} E_i0 |x_0i|²) / E_{target,0}] .
/// ```
///
/// Returns the magnitude; the caller assigns a sign (the convention
/// elsewhere in this crate is the positive root — flipping the sign of an
/// entire row is a gauge choice of wavefunction phase, invisible to every
/// observable computed here).
///
/// # Errors
///
/// [`Error::NegativeResidual`] when the supplied moments already
/// over-saturate the rule — the input row is unphysical as given.
pub fn complete_dipole_row(s: &SpectralData, target_state: usize) -> Result<f64> {
    let n = s.num_states();
    assert!(
        target_state > 0 && target_state < n,
        "target_state {target_state} out of range 1..{n} (state 0 is the row itself)"
    );
    let units = UnitSystem::default();
    let mut residual = units.half_hbar2_over_m();
    for i in 1..n {
        if i != target_state {
            residual -= s.de(i, 0) * s.x(0, i) * s.x(0, i);
        }
    }
    // Exactly saturated rows land a few ulps below zero after the
    // subtractions above; only a genuine deficit is an error.
    if residual < -1e-12 {
        return Err(Error::NegativeResidual { residual });
    }
    Ok((residual.max(0.0) / s.de(target_state, 0)).sqrt())
}

/// Scale-free figure of merit between a reconstructed spectrum and the
/// input it came from.
///
/// ```text
/// FOM = Σ_{ij} ( |x̄_ij^calc|²/x_max_calc² − |x̄_ij^init|²/x_max_init² )² ,
/// ```
///
/// where each system contributes its own `x_max² = 1/(2 E_10)`. Dividing by
/// the per-system scale makes the FOM blind to uniform width rescaling
/// (`x → λx`, `E → E/λ²` moves every ratio not at all), which is exactly the
/// gauge freedom the inverse problem cannot and should not resolve. Zero
/// means the dipole *shapes* agree; energies enter only through `E_10`.
///
/// # Errors
///
/// [`Error::DimensionMismatch`] when the two systems disagree on `N`.
pub fn fom(calc: &SpectralData, init: &SpectralData) -> Result<f64> {
    let n = calc.num_states();
    if init.num_states() != n {
        return Err(Error::DimensionMismatch(format!(
            "fom: calc has {n} states, init has {}",
            init.num_states()
        )));
    }
    let xm2_calc = calc.x_max() * calc.x_max();
    let xm2_init = init.x_max() * init.x_max();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            let a = calc.xbar(i, j).powi(2) / xm2_calc;
            let b = init.xbar(i, j).powi(2) / xm2_init;
            acc += (a - b) * (a - b);
        }
    }
    Ok(acc)
}

/// FOM divided by `N²` — the per-element normalization used when comparing
/// reconstructions across different state counts (the raw sum has `N²`
/// terms, so it grows with truncation size even at fixed per-element error).
#[must_use]
pub fn normalized_fom(f: f64, n_states: usize) -> f64 {
    assert!(n_states >= 2, "normalized_fom needs n_states >= 2, got {n_states}");
    f / (n_states * n_states) as f64
}
