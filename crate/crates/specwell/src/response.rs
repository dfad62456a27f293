//! Zero-frequency first hyperpolarizability: sum-over-states value,
//! fundamental limit, and the intrinsic (dimensionless) ratio.
//!
//! The static sum-over-states form used throughout is
//!
//! ```text
//!   β = 3 e³ Σ_{n=1}^{N−1} Σ_{m=1}^{N−1}  x_0n x̄_nm x_m0 / (E_n0 E_m0)
//!   x̄_nm = x_nm − δ_nm x_00
//! ```
//!
//! and the fundamental limit for a single electron is
//!
//! ```text
//!   β_max = 3^{1/4} · (eħ/√m)³ · N_e^{3/2} / E_10^{7/2}
//! ```
//!
//! both in atomic units (`ħ = m = e = 1`), so the intrinsic value
//! `β_int = β/β_max` is a pure number in `[−1, 1]`. The convention pair is
//! pinned operationally: the clipped harmonic oscillator must come out at
//! `β_int ≈ 0.57`. Any consistent alternative prefactor convention would
//! have to change β and β_max together to keep that anchor.
//!
//! Both β and β_int are invariant under per-state sign flips of the
//! wavefunctions (each flip touches an even number of factors in every
//! surviving term) and β_int is invariant under width rescaling of the
//! potential — `x → x/λ`, `E → λ²E` sends both β and β_max to `λ⁻⁷` times
//! themselves.

use serde::Serialize;

use crate::spectra::SpectralData;

/// The three response numbers for one spectra set.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ResponseReport {
    /// Sum-over-states hyperpolarizability, atomic units.
    pub beta: f64,
    /// Fundamental limit for one electron at this system's `E_10`, atomic
    /// units; always positive.
    pub beta_max: f64,
    /// `beta / beta_max`, dimensionless.
    pub beta_int: f64,
    /// Number of states the sum ran over (diagnostic: β converges in N,
    /// so two reports are comparable only at equal counts).
    pub num_states_used: usize,
}

/// Zero-frequency sum-over-states hyperpolarizability.
///
/// Excited-state sums run over `1..N`; the ground diagonal element is
/// removed through `x̄` so the value is origin-independent. Symmetric
/// potentials give zero: every term carries an odd product of definite-
/// parity matrix elements.
#[must_use]
pub fn beta_sos(s: &SpectralData) -> f64 {
    let n_states = s.num_states();
    let mut total = 0.0;
    for n in 1..n_states {
        let en0 = s.de(n, 0);
        for m in 1..n_states {
            let em0 = s.de(m, 0);
            total += s.x(0, n) * s.xbar(n, m) * s.x(m, 0) / (en0 * em0);
        }
    }
    3.0 * total
}

/// Fundamental limit of the first hyperpolarizability,
/// `β_max = 3^{1/4} N_e^{3/2} / E_10^{7/2}` in atomic units.
///
/// # Panics
///
/// When `e10` is not positive and finite, or `num_electrons` is zero.
#[must_use]
pub fn beta_limit(e10: f64, num_electrons: u32) -> f64 {
    assert!(
        e10.is_finite() && e10 > 0.0,
        "fundamental limit needs E_10 > 0, got {e10}"
    );
    assert!(num_electrons >= 1, "at least one electron is required");
    let ne = f64::from(num_electrons);
    3.0_f64.powf(0.25) * ne.powf(1.5) / e10.powf(3.5)
}

/// Assemble the full report: β, the single-electron limit at this system's
/// `E_10`, and their ratio.
#[must_use]
pub fn beta_intrinsic(s: &SpectralData) -> ResponseReport {
    let beta = beta_sos(s);
    let beta_max = beta_limit(s.e10(), 1);
    ResponseReport {
        beta,
        beta_max,
        beta_int: beta / beta_max,
        num_states_used: s.num_states(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Three-level toy with hand-expandable sum: E = (0, 1, 2),
    /// x_01 = 0.5, x_12 = 0.4, x_02 = 0.1, all diagonals zero.
    fn toy() -> SpectralData {
        SpectralData::new(
            vec![0.0, 1.0, 2.0],
            vec![
                0.0, 0.5, 0.1, //
                0.5, 0.0, 0.4, //
                0.1, 0.4, 0.0,
            ],
        )
        .expect("toy spectra are valid")
    }

    #[test]
    fn three_level_toy_matches_hand_expansion() {
        // Surviving terms: (n,m) = (1,2) and (2,1), each
        // 0.5·0.4·0.1/(1·2) = 0.01; diagonal terms carry x̄_nn = 0.
        let b = beta_sos(&toy());
        assert!(
            (b - 0.06).abs() < 1e-15,
            "hand-expanded 3-level sum gives 0.06, got {b}"
        );
    }

    #[test]
    fn parity_kills_beta_for_symmetric_ladder() {
        // Analytic QHO ladder: x_{n,n+1} = √((n+1)/2), everything else
        // zero. Every sum term then contains a vanishing factor.
        let n = 6;
        let mut x = vec![0.0; n * n];
        for i in 0..n - 1 {
            let v = ((i + 1) as f64 / 2.0).sqrt();
            x[i * n + i + 1] = v;
            x[(i + 1) * n + i] = v;
        }
        let energies: Vec<f64> = (0..n).map(|i| i as f64 + 0.5).collect();
        let s = SpectralData::new(energies, x).unwrap();
        assert!(
            beta_sos(&s).abs() < 1e-8,
            "even-potential β must vanish, got {}",
            beta_sos(&s)
        );
    }

    #[test]
    fn limit_has_unit_value_and_scaling_law() {
        let b1 = beta_limit(1.0, 1);
        assert!(
            (b1 - 3.0_f64.powf(0.25)).abs() < 1e-15,
            "E_10 = 1, N_e = 1 must give 3^(1/4) ≈ 1.31607, got {b1}"
        );
        let b4 = beta_limit(4.0, 1);
        assert!(
            (b4 - 3.0_f64.powf(0.25) / 128.0).abs() < 1e-15,
            "E_10 = 4 must give 3^(1/4)/128, got {b4}"
        );
        // β_max(λ²E) = λ⁻⁷ β_max(E)
        let lambda: f64 = 1.7;
        let ratio = beta_limit(lambda * lambda * 2.3, 1) / beta_limit(2.3, 1);
        let expect = lambda.powi(-7);
        assert!(
            (ratio / expect - 1.0).abs() < 1e-12,
            "scaling exponent broken: ratio {ratio}, expected {expect}"
        );
    }

    #[test]
    fn report_fields_are_consistent() {
        let r = beta_intrinsic(&toy());
        assert_eq!(r.num_states_used, 3);
        assert!(r.beta_max > 0.0);
        assert!(
            (r.beta_int * r.beta_max - r.beta).abs() < 1e-15,
            "β_int·β_max must reproduce β"
        );
    }

    #[test]
    fn intrinsic_value_is_scale_invariant() {
        // Width rescaling x → x/λ, E → λ²E leaves β_int untouched.
        let s = toy();
        let lambda: f64 = 2.9;
        let n = s.num_states();
        let energies: Vec<f64> = (0..n).map(|i| lambda * lambda * s.energy(i)).collect();
        let mut x = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                x[i * n + j] = s.x(i, j) / lambda;
            }
        }
        let scaled = SpectralData::new(energies, x).unwrap();
        let (a, b) = (beta_intrinsic(&s).beta_int, beta_intrinsic(&scaled).beta_int);
        assert!(
            (a - b).abs() < 1e-12,
            "β_int must be scale-free: {a} vs {b}"
        );
    }
}
