//! Analytic spectra families: the harmonic-oscillator ladder in closed form,
//! and the clipped oscillator from a cached fine-grid master solve.
//!
//! The scale scans need *exact* input spectra at arbitrary width, not
//! forward-solved ones — the whole point is to feed the inverter data whose
//! only imperfection is the `N`-state truncation. Width scaling makes one
//! master solve sufficient for a whole family: under `x → x/√ω` (so that
//! `V = ½ω²x²` keeps the unit-frequency shape),
//!
//! ```text
//!   E_n(ω) = ω · E_n(1),        x_ij(ω) = x_ij(1) / √ω
//! ```
//!
//! For the full oscillator the ladder is classical textbook material:
//! `E_n = ω(n + ½)`, `x_{n,n+1} = √((n+1)/(2ω))`, all else zero. The
//! clipped oscillator (infinite wall at `x ≤ 0`) keeps exactly the odd
//! oscillator states, renormalized by `√2` on the half line, so its
//! energies are `ω(2n + 3/2)` — but its dipole matrix is dense and has no
//! elementary closed form, so the `ω = 1` master is solved once on
//! `[0, 30] × 24001` for 20 states (wall value `V(30) = 450 ≫ E_19 = 39.5`)
//! and cached for the life of the process.

use std::sync::OnceLock;

use crate::eigensolver::{extract_spectra, solve, GridSpec, PotentialSpec};
use crate::spectra::SpectralData;

/// States held by the clipped-oscillator master solve (and therefore the
/// largest `num_states` that [`exact_cqho`] can serve).
pub const CQHO_MASTER_STATES: usize = 20;

const CQHO_MASTER_DOMAIN: f64 = 30.0;
const CQHO_MASTER_NPTS: usize = 24_001;

/// Exact harmonic-oscillator spectra: `E_n = ω(n + ½)`,
/// `x_{n,n+1} = √((n+1)/(2ω))`.
///
/// # Panics
///
/// When `omega` is not positive and finite or `num_states < 2`.
#[must_use]
pub fn exact_qho(omega: f64, num_states: usize) -> SpectralData {
    assert!(
        omega.is_finite() && omega > 0.0,
        "oscillator frequency must be positive, got {omega}"
    );
    assert!(num_states >= 2, "spectra need at least two states");
    let energies: Vec<f64> = (0..num_states)
        .map(|n| omega * (n as f64 + 0.5))
        .collect();
    let mut x = vec![0.0; num_states * num_states];
    for n in 0..num_states - 1 {
        let v = ((n + 1) as f64 / (2.0 * omega)).sqrt();
        x[n * num_states + n + 1] = v;
        x[(n + 1) * num_states + n] = v;
    }
    SpectralData::new(energies, x).expect("analytic ladder is valid")
}

/// The `ω = 1` clipped-oscillator master dipole matrix, solved once.
fn cqho_master() -> &'static SpectralData {
    static MASTER: OnceLock<SpectralData> = OnceLock::new();
    MASTER.get_or_init(|| {
        let grid = GridSpec {
            x_min: 0.0,
            x_max: CQHO_MASTER_DOMAIN,
            num_points: CQHO_MASTER_NPTS,
        };
        let sol = solve(
            &PotentialSpec::ClippedHarmonic { omega: 1.0 },
            &grid,
            CQHO_MASTER_STATES,
        )
        .expect("the master clipped-oscillator solve is well-posed by construction");
        extract_spectra(&sol, CQHO_MASTER_STATES)
            .expect("master spectra satisfy the SpectralData invariants")
    })
}

/// Clipped-oscillator spectra at width scale `ω`: exact energies
/// `E_n = ω(2n + 3/2)`, dipoles from the cached `ω = 1` master scaled by
/// `1/√ω`.
///
/// # Panics
///
/// When `omega` is not positive and finite, or `num_states` is outside
/// `2..=`[`CQHO_MASTER_STATES`].
#[must_use]
pub fn exact_cqho(omega: f64, num_states: usize) -> SpectralData {
    assert!(
        omega.is_finite() && omega > 0.0,
        "oscillator frequency must be positive, got {omega}"
    );
    assert!(
        (2..=CQHO_MASTER_STATES).contains(&num_states),
        "clipped-oscillator family serves 2..={CQHO_MASTER_STATES} states, asked for {num_states}"
    );
    let master = cqho_master();
    let energies: Vec<f64> = (0..num_states)
        .map(|n| omega * (2.0 * n as f64 + 1.5))
        .collect();
    let scale = omega.sqrt();
    let mut x = vec![0.0; num_states * num_states];
    for i in 0..num_states {
        for j in 0..num_states {
            x[i * num_states + j] = master.x(i, j) / scale;
        }
    }
    SpectralData::new(energies, x).expect("scaled master stays valid")
}
