//! Reproducible Monte Carlo studies built on the inversion machinery: the
//! well-width (ω) scan, clipped-oscillator state-count convergence, the
//! randomized large-β target search, and the half-power exponent scan.
//!
//! # Determinism contract
//!
//! Every study is a pure function of its configuration. Randomness comes
//! exclusively from [`stream`]`(seed, i)` — an independent SplitMix64 stream
//! per sample or trial index — so samples can be evaluated in parallel in any
//! order and still reproduce the serial run bit for bit. Results are always
//! collected in index order. Re-running any pipeline with the same seed
//! yields byte-identical output regardless of thread count.
//!
//! # Statuses are data
//!
//! A trial that fails *physically* — its polynomial has no minimum, its
//! domain expansion finds nothing to confine, or its random dipole draws
//! over-saturate a sum rule — is a legitimate experimental outcome, recorded
//! in the trial's [`ScanRecord`] with an infinite figure of merit. Only
//! malformed configurations and I/O problems surface as [`Error`]s.

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::eigensolver::{auto_grid, extract_spectra, solve, PotentialSpec};
use crate::error::{Error, Result};
use crate::families::{exact_cqho, exact_qho, CQHO_MASTER_STATES};
use crate::inverse::{roundtrip, PolynomialPotential, WellDomain};
use crate::response::beta_intrinsic;
use crate::rng::{stream, SplitMix64};
use crate::spectra::{normalized_fom, SpectralData};

/// Samples per ω scan when a config does not say otherwise.
pub const DEFAULT_NUM_SAMPLES: usize = 75;

/// Default ω-scan exponent window: ω = 10^u with u uniform in [−1, 2], i.e.
/// two orders of magnitude on either side of ω = 1… in log space, the range
/// where the reconstruction quality turns over (see the FOM scale study).
pub const DEFAULT_OMEGA_LOG10_RANGE: (f64, f64) = (-1.0, 2.0);

/// Default wall-height ratio κ for the automatic grid and the well walker.
pub const DEFAULT_KAPPA: f64 = 10.0;

/// Trials the search command runs when not told otherwise.
pub const DEFAULT_SEARCH_TRIALS: usize = 200;

/// Model states the half-power scan command uses by default.
///
/// Note for curve-shape work: with fifteen states the η-curve develops a
/// genuine (grid-converged) ripple of a few parts in 10⁵ on the plateau near
/// η ≈ 0.14, so studies that rely on strict monotonicity of β_int(η) should
/// run with ten states, where the curve is strictly decreasing on
/// log-spaced grids over [0.1, 30].
pub const POWER_SCAN_DEFAULT_STATES: usize = 15;

/// Half-width of the uniform level-spacing band for intermediate states.
const GAP_RANGE: (f64, f64) = (0.02, 0.08);

/// Splitting band for the near-degenerate first/second excited pair.
const PAIR_SPLIT_RANGE: (f64, f64) = (0.001, 0.01);

/// The top state's energy is 10^u with u uniform in this band: far above the
/// intermediate cluster, but not so far that its sum-rule completion moment
/// underflows.
const TOP_EXPONENT_RANGE: (f64, f64) = (1.2, 2.0);

/// Relative width of the upward-biased band around the three-level-optimal
/// skeleton coupling: `x_01 = 3^{−1/4}·x_max·(1 + 0.15u)`, `u ∈ [0, 1)`.
/// Reconstructed β_int peaks with the skeleton slightly *above* the
/// three-level optimum, so the band is one-sided.
const X01_BAND: f64 = 0.15;

/// Magnitude scale for every random matrix element that is not a ground-row
/// intermediate: excited-state couplings `x_{ij}` (`i, j ≥ 1`) are drawn
/// uniform in ±this. The ground-row scale is the caller's `epsilon_dipole`;
/// this internal scale is fixed so that ε sweeps change only the ground-row
/// physics the sum rules actually constrain.
pub const SEARCH_COUPLING_SCALE: f64 = 0.02;

/// How many top-ranked search hits retain their full reconstruction
/// (potential, domain, diagnostics).
pub const TOP_RANKS_RETAINED: usize = 5;

/// Outcome tag for one sample or trial.
///
/// `Ok` means the full chain ran: target spectra → least-norm polynomial →
/// bounded well → re-solved spectra. The other three name the stage that
/// ended the trial; each corresponds to the physical [`Error`] of the same
/// name.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RunStatus {
    /// Full roundtrip completed; `fom` and `beta_int` are meaningful.
    Ok,
    /// The reconstructed polynomial is monotone or a pure barrier.
    NoMinimum,
    /// No candidate well produced a solvable bounded potential.
    NoConfinement,
    /// The random dipole draws over-saturated a sum rule (nothing left for
    /// the completion moment), or a degenerate draw zeroed a skeleton
    /// coupling.
    NegativeResidual,
}

impl RunStatus {
    /// Map a *physical* error onto its record status.
    ///
    /// `UnresolvedStates` cannot escape the roundtrip (candidate solves that
    /// fail are skipped, and the automatic grid loops until resolved), but if
    /// it ever did it would mean a domain failed to confine the spectrum, so
    /// it files under `NoConfinement`. Non-physical errors return `None` and
    /// must propagate.
    fn from_error(e: &Error) -> Option<Self> {
        match e {
            Error::NoMinimum => Some(Self::NoMinimum),
            Error::NoConfinement(_) | Error::UnresolvedStates { .. } => Some(Self::NoConfinement),
            Error::NegativeResidual { .. } => Some(Self::NegativeResidual),
            _ => None,
        }
    }
}

impl fmt::Display for RunStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Ok => "Ok",
            Self::NoMinimum => "NoMinimum",
            Self::NoConfinement => "NoConfinement",
            Self::NegativeResidual => "NegativeResidual",
        })
    }
}

/// Which analytic spectra family feeds the ω scan.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ScanFamily {
    /// Full oscillator `V = ½ω²x²` — closed-form ladder.
    Harmonic,
    /// Half oscillator (infinite wall at `x ≤ 0`) — exact energies, master
    /// dipoles.
    ClippedHarmonic,
}

/// Configuration shared by the scan pipelines.
#[derive(Debug, Clone, Serialize)]
pub struct ScanConfig {
    /// Root seed; sample `i` uses the independent stream `stream(seed, i)`.
    pub seed: u64,
    /// Number of ω samples per scan.
    pub num_samples: usize,
    /// ω is drawn as 10^u with u uniform in this (lo, hi) window.
    pub omega_log10_range: (f64, f64),
    /// Model states `N` carried through inversion and re-solve.
    pub num_states: usize,
    /// Relative SVD cutoff for the least-norm solve; `None` uses the
    /// rank-revealing machine default `M·ε_machine`.
    pub svd_cutoff: Option<f64>,
    /// Wall-height ratio: candidate wells stop where `V` reaches κ·E_top.
    pub kappa: f64,
}

impl ScanConfig {
    /// A config with the documented defaults: 75 samples, ω ∈ [0.1, 100],
    /// machine SVD cutoff, κ = 10.
    #[must_use]
    pub fn new(seed: u64, num_states: usize) -> Self {
        Self {
            seed,
            num_samples: DEFAULT_NUM_SAMPLES,
            omega_log10_range: DEFAULT_OMEGA_LOG10_RANGE,
            num_states,
            svd_cutoff: None,
            kappa: DEFAULT_KAPPA,
        }
    }

    /// Check every field against its documented range.
    ///
    /// # Errors
    ///
    /// `InvalidConfig` naming the offending field.
    pub fn validate(&self) -> Result<()> {
        if self.num_samples == 0 {
            return Err(Error::InvalidConfig("num_samples must be ≥ 1".into()));
        }
        let (lo, hi) = self.omega_log10_range;
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::InvalidConfig(format!(
                "omega_log10_range must be finite with lo < hi, got ({lo}, {hi})"
            )));
        }
        if self.num_states < 2 {
            return Err(Error::InvalidConfig(format!(
                "num_states must be ≥ 2, got {}",
                self.num_states
            )));
        }
        if let Some(c) = self.svd_cutoff {
            if !(c.is_finite() && c > 0.0 && c < 1.0) {
                return Err(Error::InvalidConfig(format!(
                    "svd_cutoff must lie in (0, 1), got {c}"
                )));
            }
        }
        if !(self.kappa.is_finite() && self.kappa >= 1.0) {
            return Err(Error::InvalidConfig(format!(
                "kappa must be finite and ≥ 1, got {}",
                self.kappa
            )));
        }
        Ok(())
    }
}

/// One sample's (or trial's) outcome.
#[derive(Debug, Clone, Serialize)]
pub struct ScanRecord {
    /// Sample index within the scan (for the convergence study: the state
    /// count `N` of the row; for the search: the trial index).
    pub sample: u64,
    /// The drawn well width, when the pipeline samples one.
    pub omega: Option<f64>,
    /// Figure of merit of the reconstruction; ∞ when the trial failed.
    pub fom: f64,
    /// `fom / N²` — the per-element discrepancy, comparable across state
    /// counts.
    pub fom_norm: f64,
    /// Intrinsic hyperpolarizability attached to the record (present only
    /// when `status` is `Ok`; which spectra it refers to is documented per
    /// pipeline).
    pub beta_int: Option<f64>,
    /// What happened.
    pub status: RunStatus,
}

/// A full scan: every record, plus the index of the smallest-FOM sample.
#[derive(Debug, Clone, Serialize)]
pub struct ScanOutcome {
    /// One record per sample, in sample order.
    pub records: Vec<ScanRecord>,
    /// Index into `records` of the smallest FOM (first on ties; 0 if every
    /// sample failed).
    pub best: usize,
}

fn argmin_fom(records: &[ScanRecord]) -> usize {
    let mut best = 0;
    for (i, r) in records.iter().enumerate().skip(1) {
        if r.fom < records[best].fom {
            best = i;
        }
    }
    best
}

/// Run one sample of a scan: exact spectra at ω, then the full roundtrip.
fn scan_sample(family: ScanFamily, cfg: &ScanConfig, i: u64) -> Result<ScanRecord> {
    let mut g = stream(cfg.seed, i);
    let (lo, hi) = cfg.omega_log10_range;
    let omega = 10f64.powf(g.uniform(lo, hi));
    let spectra = match family {
        ScanFamily::Harmonic => exact_qho(omega, cfg.num_states),
        ScanFamily::ClippedHarmonic => exact_cqho(omega, cfg.num_states),
    };
    match roundtrip(&spectra, cfg.svd_cutoff, cfg.kappa) {
        Ok(rt) => Ok(ScanRecord {
            sample: i,
            omega: Some(omega),
            fom: rt.fom,
            fom_norm: normalized_fom(rt.fom, cfg.num_states),
            beta_int: Some(beta_intrinsic(&rt.spectra).beta_int),
            status: RunStatus::Ok,
        }),
        Err(e) => match RunStatus::from_error(&e) {
            Some(status) => Ok(ScanRecord {
                sample: i,
                omega: Some(omega),
                fom: f64::INFINITY,
                fom_norm: f64::INFINITY,
                beta_int: None,
                status,
            }),
            None => Err(e),
        },
    }
}

/// Scan the well width over the configured window: for each sample,
/// ω = 10^u with u uniform in `omega_log10_range`, build the family's exact
/// `N`-state spectra, run the inversion roundtrip, and record the figure of
/// merit. `beta_int` on each `Ok` record is the intrinsic value of the
/// *reconstructed* spectra.
///
/// Samples run in parallel; records come back in sample order and are
/// bit-reproducible for a fixed seed.
///
/// # Errors
///
/// `InvalidConfig` for a bad config (including more clipped-oscillator
/// states than the master solve holds). Physical per-sample failures are
/// recorded, never raised.
pub fn omega_scan(family: ScanFamily, cfg: &ScanConfig) -> Result<ScanOutcome> {
    cfg.validate()?;
    if family == ScanFamily::ClippedHarmonic {
        if cfg.num_states > CQHO_MASTER_STATES {
            return Err(Error::InvalidConfig(format!(
                "clipped-oscillator scans serve at most {CQHO_MASTER_STATES} states, asked for {}",
                cfg.num_states
            )));
        }
        // Touch the cached master before fanning out so the first parallel
        // samples don't all block on its construction.
        let _ = exact_cqho(1.0, 2);
    }
    let records = (0..cfg.num_samples as u64)
        .into_par_iter()
        .map(|i| scan_sample(family, cfg, i))
        .collect::<Result<Vec<_>>>()?;
    let best = argmin_fom(&records);
    Ok(ScanOutcome { records, best })
}

/// Clipped-oscillator convergence study: for each state count
/// `N ∈ [n_min, n_max]`, run the ω Monte Carlo, keep the smallest-FOM
/// sample, and report its normalized FOM together with the intrinsic
/// hyperpolarizability of that winning sample's *input* spectra (the
/// `N`-state clipped-oscillator value — scale-free, so ω drops out).
///
/// The returned records use `sample` = N and `omega` = the winning width.
/// `cfg.num_states` is ignored — each row supplies its own N.
///
/// # Errors
///
/// `InvalidConfig` unless `3 ≤ n_min < n_max ≤ 12` and the config is valid.
pub fn cqho_convergence(n_min: usize, n_max: usize, cfg: &ScanConfig) -> Result<Vec<ScanRecord>> {
    if !(3 <= n_min && n_min < n_max && n_max <= 12) {
        return Err(Error::InvalidConfig(format!(
            "state-count window must satisfy 3 ≤ n_min < n_max ≤ 12, got [{n_min}, {n_max}]"
        )));
    }
    (n_min..=n_max)
        .map(|n| {
            let mut per = cfg.clone();
            per.num_states = n;
            let outcome = omega_scan(ScanFamily::ClippedHarmonic, &per)?;
            let winner = &outcome.records[outcome.best];
            let beta_int = match (winner.status, winner.omega) {
                (RunStatus::Ok, Some(om)) => {
                    Some(beta_intrinsic(&exact_cqho(om, n)).beta_int)
                }
                _ => None,
            };
            Ok(ScanRecord {
                sample: n as u64,
                omega: winner.omega,
                fom: winner.fom,
                fom_norm: normalized_fom(winner.fom, n),
                beta_int,
                status: winner.status,
            })
        })
        .collect()
}

/// Which level-structure archetype [`synthesize_target`] builds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum EnergyPattern {
    /// Ground + first excited + a dense low cluster + one far top state;
    /// the (0,1) coupling carries nearly all the ground-row oscillator
    /// strength. Needs `num_states ≥ 3`.
    ThreeLevelLike,
    /// States 1 and 2 nearly degenerate, sharing the skeleton strength as
    /// `x_01 = X cos φ`, `x_02 = X sin φ`. Needs `num_states ≥ 4`.
    NearDegeneratePair,
}

/// Recipe for a randomized spectra target fed to the inverter.
#[derive(Debug, Clone, Serialize)]
pub struct SearchTargetSpec {
    /// States `N` in the synthesized model.
    pub num_states: usize,
    /// Magnitude scale ε of the random ground-row intermediates `x_{0i}`,
    /// `1 < i < N−1`, drawn uniform in ±ε. Must be positive: exactly-zero
    /// intermediates collapse the target onto an embedded few-level model
    /// whose inversion behaves qualitatively differently.
    pub epsilon_dipole: f64,
    /// Level-structure archetype.
    pub energy_pattern: EnergyPattern,
    /// Root seed; trial `t` draws from `stream(seed, t)`.
    pub seed: u64,
}

impl SearchTargetSpec {
    /// Check the recipe against its documented ranges.
    ///
    /// # Errors
    ///
    /// `InvalidConfig` naming the offending field.
    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon_dipole.is_finite() && self.epsilon_dipole > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "epsilon_dipole must be positive and finite, got {}",
                self.epsilon_dipole
            )));
        }
        let floor = match self.energy_pattern {
            EnergyPattern::ThreeLevelLike => 3,
            EnergyPattern::NearDegeneratePair => 4,
        };
        if self.num_states < floor {
            return Err(Error::InvalidConfig(format!(
                "{:?} needs at least {floor} states, got {}",
                self.energy_pattern, self.num_states
            )));
        }
        Ok(())
    }
}

fn sym_set(x: &mut [f64], n: usize, i: usize, j: usize, v: f64) {
    x[i * n + j] = v;
    x[j * n + i] = v;
}

/// Solve row `r`'s own sum rule `S_rr = Σ_i (E_i − E_r) x_ri² = 1/2` for the
/// one unknown coupling to the top state, installing
/// `x_{r,N−1} = sign·√(residual/(E_{N−1} − E_r))`.
fn complete_row_against_top(e: &[f64], x: &mut [f64], n: usize, r: usize, sign: f64) -> Result<()> {
    let mut residual = 0.5;
    for i in 0..n - 1 {
        if i == r {
            continue;
        }
        residual -= (e[i] - e[r]) * x[r * n + i] * x[r * n + i];
    }
    if residual <= 0.0 {
        return Err(Error::NegativeResidual { residual });
    }
    sym_set(x, n, r, n - 1, sign * (residual / (e[n - 1] - e[r])).sqrt());
    Ok(())
}

/// Set the diagonal `x̄_rr` so the ground-to-`r` cross rule
/// `S_0r = Σ_i [E_i − (E_0+E_r)/2] x_0i x_ir = 0` holds (with `x_00 = 0`,
/// the `i = r` term is `(E_r − Ē) x_0r x_rr`, linear in the unknown).
fn pin_diagonal_from_cross_rule(e: &[f64], x: &mut [f64], n: usize, r: usize) -> Result<()> {
    let ebar = 0.5 * e[r];
    let x0r = x[r];
    if x0r == 0.0 {
        // A degenerate draw zeroed the skeleton coupling; there is no
        // diagonal value that can balance the cross rule.
        return Err(Error::NegativeResidual { residual: 0.0 });
    }
    let mut acc = 0.0;
    for i in 1..n {
        if i == r {
            continue;
        }
        acc += (e[i] - ebar) * x[i] * x[i * n + r];
    }
    x[r * n + r] = -acc / ((e[r] - ebar) * x0r);
    Ok(())
}

/// Three-level-like target. Draw order (fixed; part of the determinism
/// contract):
///
/// ```text
/// 1. level gaps        E_{i} − E_{i−1} ~ U[0.02, 0.08]   for i = 2 … N−2
/// 2. top state         E_{N−1} = 10^u, u ~ U[1.2, 2.0]
/// 3. skeleton          x_01 = 3^{−1/4}·x_max·(1 + 0.15u), u ~ U[0, 1)
/// 4. intermediates     x_0i ~ U[−ε, ε]                    for i = 2 … N−2
///    → x_{0,N−1} completed from S_00 = 1/2 (positive root)
/// 5. row-1 couplings   x_1i ~ U[−s, s], s = 0.02          for i = 2 … N−2
///    → x_{1,N−1} completed from S_11 = 1/2 (negative root)
///    → x̄_11 pinned by S_01 = 0
/// 6. excited block     x_ij ~ U[−s, s] for 2 ≤ i ≤ j ≤ N−1, row-major
/// ```
///
/// `E_0 = 0`, `E_1 = 1`, `x_max = 1/√(2E_10)`. The negative root in step 5
/// and the diagonal in step 5 reproduce the sign structure of the
/// three-level model at its optimum.
fn synthesize_three_level_like(n: usize, eps: f64, rng: &mut SplitMix64) -> Result<SpectralData> {
    let s = SEARCH_COUPLING_SCALE;
    let mut e = vec![0.0; n];
    e[1] = 1.0;
    for i in 2..n - 1 {
        e[i] = e[i - 1] + rng.uniform(GAP_RANGE.0, GAP_RANGE.1);
    }
    e[n - 1] = 10f64.powf(rng.uniform(TOP_EXPONENT_RANGE.0, TOP_EXPONENT_RANGE.1));
    if e[n - 1] <= e[n - 2] {
        return Err(Error::NegativeResidual {
            residual: e[n - 1] - e[n - 2],
        });
    }
    let mut x = vec![0.0; n * n];
    let x_max = (0.5 / (e[1] - e[0])).sqrt();
    let x01 = 3f64.powf(-0.25) * x_max * (1.0 + X01_BAND * rng.next_f64());
    sym_set(&mut x, n, 0, 1, x01);
    for i in 2..n - 1 {
        let v = rng.symmetric(eps);
        sym_set(&mut x, n, 0, i, v);
    }
    complete_row_against_top(&e, &mut x, n, 0, 1.0)?;
    for i in 2..n - 1 {
        let v = rng.symmetric(s);
        sym_set(&mut x, n, 1, i, v);
    }
    complete_row_against_top(&e, &mut x, n, 1, -1.0)?;
    pin_diagonal_from_cross_rule(&e, &mut x, n, 1)?;
    for i in 2..n {
        for j in i..n {
            let v = rng.symmetric(s);
            sym_set(&mut x, n, i, j, v);
        }
    }
    SpectralData::new(e, x)
}

/// Near-degenerate-pair target: as [`synthesize_three_level_like`], but the
/// skeleton strength `X = 3^{−1/4}·x_max·(1 + 0.15u)` is split across two
/// almost-degenerate excited states, `x_01 = X cos φ`, `x_02 = X sin φ`,
/// `φ ~ U[0, π/2)`, with `E_2 − E_1 ~ U[0.001, 0.01]`. Both rows 1 and 2 are
/// completed against their own sum rules and both diagonals pinned by their
/// ground cross rules. Draw order after the split: ground intermediates
/// (`i = 3 … N−2`), row 1 (`i = 2 … N−2`), row 2 (`i = 3 … N−2`), then the
/// remaining excited block `3 ≤ i ≤ j ≤ N−1` row-major.
///
/// When φ lands near either axis one skeleton coupling nearly vanishes and
/// the pinned diagonal blows up — the drawn model is then far over the
/// fundamental limit and its inversion typically fails or reconstructs
/// poorly. That is the phenomenon this archetype exists to exhibit, so such
/// draws are kept, not rejected.
fn synthesize_near_degenerate_pair(n: usize, eps: f64, rng: &mut SplitMix64) -> Result<SpectralData> {
    let s = SEARCH_COUPLING_SCALE;
    let mut e = vec![0.0; n];
    e[1] = 1.0;
    e[2] = e[1] + rng.uniform(PAIR_SPLIT_RANGE.0, PAIR_SPLIT_RANGE.1);
    for i in 3..n - 1 {
        e[i] = e[i - 1] + rng.uniform(GAP_RANGE.0, GAP_RANGE.1);
    }
    e[n - 1] = 10f64.powf(rng.uniform(TOP_EXPONENT_RANGE.0, TOP_EXPONENT_RANGE.1));
    if e[n - 1] <= e[n - 2] {
        return Err(Error::NegativeResidual {
            residual: e[n - 1] - e[n - 2],
        });
    }
    let mut x = vec![0.0; n * n];
    let x_max = (0.5 / (e[1] - e[0])).sqrt();
    let strength = 3f64.powf(-0.25) * x_max * (1.0 + X01_BAND * rng.next_f64());
    let phi = std::f64::consts::FRAC_PI_2 * rng.next_f64();
    sym_set(&mut x, n, 0, 1, strength * phi.cos());
    sym_set(&mut x, n, 0, 2, strength * phi.sin());
    for i in 3..n - 1 {
        let v = rng.symmetric(eps);
        sym_set(&mut x, n, 0, i, v);
    }
    complete_row_against_top(&e, &mut x, n, 0, 1.0)?;
    for i in 2..n - 1 {
        let v = rng.symmetric(s);
        sym_set(&mut x, n, 1, i, v);
    }
    complete_row_against_top(&e, &mut x, n, 1, -1.0)?;
    pin_diagonal_from_cross_rule(&e, &mut x, n, 1)?;
    for i in 3..n - 1 {
        let v = rng.symmetric(s);
        sym_set(&mut x, n, 2, i, v);
    }
    complete_row_against_top(&e, &mut x, n, 2, -1.0)?;
    pin_diagonal_from_cross_rule(&e, &mut x, n, 2)?;
    for i in 3..n {
        for j in i..n {
            let v = rng.symmetric(s);
            sym_set(&mut x, n, i, j, v);
        }
    }
    SpectralData::new(e, x)
}

/// Synthesize the target spectra for one specific trial index.
///
/// # Errors
///
/// `InvalidConfig` for a bad spec; `NegativeResidual` when the ε-draws
/// over-saturate a sum rule (a physical rejection the search records).
pub fn synthesize_target_trial(spec: &SearchTargetSpec, trial: u64) -> Result<SpectralData> {
    spec.validate()?;
    let mut rng = stream(spec.seed, trial);
    match spec.energy_pattern {
        EnergyPattern::ThreeLevelLike => {
            synthesize_three_level_like(spec.num_states, spec.epsilon_dipole, &mut rng)
        }
        EnergyPattern::NearDegeneratePair => {
            synthesize_near_degenerate_pair(spec.num_states, spec.epsilon_dipole, &mut rng)
        }
    }
}

/// Synthesize trial 0 of a target spec. Sum-rule structure by construction:
/// the ground row and row 1 (and row 2 for the pair archetype) satisfy their
/// TRK rules to rounding, and the pinned diagonals zero the ground cross
/// rules — the target is *kinematically* consistent even though no potential
/// generated it.
///
/// # Errors
///
/// As [`synthesize_target_trial`].
pub fn synthesize_target(spec: &SearchTargetSpec) -> Result<SpectralData> {
    synthesize_target_trial(spec, 0)
}

/// One retained search hit: the reconstruction behind a top-ranked trial.
#[derive(Debug, Clone, Serialize)]
pub struct SearchHit {
    /// Trial index (its record sits at `records[trial]`).
    pub trial: u64,
    /// Intrinsic hyperpolarizability of the reconstructed bounded well.
    pub beta_int: f64,
    /// Intrinsic value of the raw synthesized target (may exceed 1 — the
    /// target is a dipole matrix, not a Hamiltonian's).
    pub beta_input: f64,
    /// Figure of merit of the reconstruction.
    pub fom: f64,
    /// The reconstructed polynomial with its walls.
    pub potential: PolynomialPotential,
    /// The selected well domain.
    pub domain: WellDomain,
}

/// A complete search: per-trial records plus the top-ranked reconstructions.
#[derive(Debug, Clone, Serialize)]
pub struct SearchOutcome {
    /// One record per trial, in trial order. `beta_int` on `Ok` records is
    /// the *reconstructed* well's intrinsic value.
    pub records: Vec<ScanRecord>,
    /// Up to [`TOP_RANKS_RETAINED`] `Ok` trials, ranked by reconstructed
    /// β_int descending (ties to the earlier trial).
    pub top: Vec<SearchHit>,
}

/// Monte Carlo search for large-β wells: repeat synthesize → invert →
/// bound → re-solve, rank `Ok` trials by the reconstructed intrinsic
/// hyperpolarizability, and retain full diagnostics for the top ranks.
///
/// Only `cfg.svd_cutoff` and `cfg.kappa` are read from the scan config; the
/// randomness is governed by `spec.seed` with one stream per trial index, so
/// the outcome is bit-reproducible across runs and thread counts.
///
/// # Errors
///
/// `InvalidConfig` for bad inputs (including `trials = 0`). Per-trial
/// physical failures are recorded, never raised.
pub fn large_beta_search(
    spec: &SearchTargetSpec,
    trials: usize,
    cfg: &ScanConfig,
) -> Result<SearchOutcome> {
    spec.validate()?;
    cfg.validate()?;
    if trials == 0 {
        return Err(Error::InvalidConfig("trials must be ≥ 1".into()));
    }
    let per_trial = (0..trials as u64)
        .into_par_iter()
        .map(|t| -> Result<(ScanRecord, Option<SearchHit>)> {
            let fail = |status: RunStatus| ScanRecord {
                sample: t,
                omega: None,
                fom: f64::INFINITY,
                fom_norm: f64::INFINITY,
                beta_int: None,
                status,
            };
            let target = match synthesize_target_trial(spec, t) {
                Ok(target) => target,
                Err(e) => {
                    return match RunStatus::from_error(&e) {
                        Some(status) => Ok((fail(status), None)),
                        None => Err(e),
                    }
                }
            };
            match roundtrip(&target, cfg.svd_cutoff, cfg.kappa) {
                Ok(rt) => {
                    let beta_int = beta_intrinsic(&rt.spectra).beta_int;
                    let record = ScanRecord {
                        sample: t,
                        omega: None,
                        fom: rt.fom,
                        fom_norm: normalized_fom(rt.fom, spec.num_states),
                        beta_int: Some(beta_int),
                        status: RunStatus::Ok,
                    };
                    let hit = SearchHit {
                        trial: t,
                        beta_int,
                        beta_input: beta_intrinsic(&target).beta_int,
                        fom: rt.fom,
                        potential: rt.potential,
                        domain: rt.domain,
                    };
                    Ok((record, Some(hit)))
                }
                Err(e) => match RunStatus::from_error(&e) {
                    Some(status) => Ok((fail(status), None)),
                    None => Err(e),
                },
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let mut records = Vec::with_capacity(trials);
    let mut top = Vec::new();
    for (record, hit) in per_trial {
        records.push(record);
        if let Some(h) = hit {
            top.push(h);
        }
    }
    top.sort_by(|a, b| {
        b.beta_int
            .partial_cmp(&a.beta_int)
            .expect("reconstructed β is finite")
            .then(a.trial.cmp(&b.trial))
    });
    top.truncate(TOP_RANKS_RETAINED);
    Ok(SearchOutcome { records, top })
}

/// β_int of the half-power well `V(x) = x^η` (`x > 0`, wall at the origin)
/// for each exponent, each on its own automatically sized grid.
///
/// Returns `(η, β_int)` pairs in input order. Exponents run in parallel.
///
/// # Errors
///
/// `InvalidConfig` for non-positive or non-finite exponents (or a bad state
/// count / κ); `NoConfinement` when an exponent is too shallow to confine
/// `num_states` states within the automatic domain cap.
pub fn power_scan(eta_values: &[f64], num_states: usize, kappa: f64) -> Result<Vec<(f64, f64)>> {
    for &eta in eta_values {
        if !(eta.is_finite() && eta > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "half-power exponents must be positive and finite, got {eta}"
            )));
        }
    }
    if num_states < 2 {
        return Err(Error::InvalidConfig(format!(
            "num_states must be ≥ 2, got {num_states}"
        )));
    }
    if !(kappa.is_finite() && kappa >= 1.0) {
        return Err(Error::InvalidConfig(format!(
            "kappa must be finite and ≥ 1, got {kappa}"
        )));
    }
    eta_values
        .par_iter()
        .map(|&eta| {
            let pot = PotentialSpec::HalfPower { eta };
            let grid = auto_grid(&pot, num_states, kappa)?;
            let sol = solve(&pot, &grid, num_states)?;
            let spectra = extract_spectra(&sol, num_states)?;
            Ok((eta, beta_intrinsic(&spectra).beta_int))
        })
        .collect()
}
