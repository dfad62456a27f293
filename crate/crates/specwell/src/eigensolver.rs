//! Forward solver: one-dimensional time-independent Schrödinger equation on a
//! uniform grid with Dirichlet walls.
//!
//! The discretization is deliberately plain. With `ħ = m = 1` the
//! second-order central-difference form of
//!
//! ```text
//!   −½ ψ″(x) + V(x) ψ(x) = E ψ(x)
//! ```
//!
//! on the interior points of a uniform grid `x_j = x_min + j·h` is the
//! symmetric tridiagonal eigenproblem
//!
//! ```text
//!   −(ψ_{j+1} − 2ψ_j + ψ_{j−1}) / (2h²) + V_j ψ_j = E ψ_j
//!   diagonal  d_j = 1/h² + V_j,   off-diagonal  e = −1/(2h²)
//! ```
//!
//! whose lowest eigenpairs [`crate::tridiag::SymTridiag`] delivers by Sturm
//! bisection and inverse iteration. Endpoint rows are dropped (ψ = 0 there),
//! and any grid point where the potential hits the infinite sentinel — the
//! half-line potentials for `x ≤ 0`, a bounded polynomial outside its walls,
//! values at or above [`POTENTIAL_WALL`] — is likewise excluded, so a hard
//! wall sits at the last finite point. Eigenvectors come back normalized as
//! grid vectors (`Σ v_j² = 1`); dividing by `√h` makes the trapezoid-rule
//! integral `∫ψ² dx` equal to one *exactly*, since the Dirichlet zeros kill
//! the endpoint half-weights.
//!
//! Two quality guards matter in practice. A solve refuses to return states
//! whose energy exceeds the potential at a *finite* grid endpoint
//! ([`crate::Error::UnresolvedStates`]): those states lean on the artificial
//! box, not the well. (An endpoint at the infinite sentinel is a genuine
//! wall — the clipped oscillator on `[0, L]` is *supposed* to feel it — and
//! is exempt.) And [`momentum_consistency`] checks the discrete Ehrenfest
//! identity `⟨n|∂/∂x|ℓ⟩ = −(E_n − E_ℓ)·x_nℓ`, which the central-difference
//! scheme satisfies to rounding when the eigenvectors are converged, making
//! it a sharp solver diagnostic rather than a mere discretization estimate.

use crate::error::{Error, Result};
use crate::spectra::SpectralData;
use crate::tridiag::SymTridiag;

/// Finite values at or above this threshold are treated as the infinite
/// sentinel: the grid point is excluded from the interior and a hard wall
/// sits at the last point below it.
///
/// `1e12` is far above any bound-state energy this crate touches (tens of
/// atomic units) yet far below overflow territory, so tabulated potentials
/// may encode walls as large finite numbers without tripping arithmetic.
pub const POTENTIAL_WALL: f64 = 1e12;

/// Points-per-de-Broglie-wavelength target used by [`auto_grid`] once it has
/// a first energy estimate: `h = 2π / (PPW · √(2·(E_top − V_floor)))`.
const AUTO_PPW: f64 = 512.0;

/// [`auto_grid`] gives up (NoConfinement) when the half-width exceeds this.
const AUTO_MAX_HALF_WIDTH: f64 = 1e6;

/// Relative change in `E_top` between expansion rounds below which the
/// domain is declared converged even if the κ-condition is out of reach
/// (slowly growing potentials like `x^0.1` cannot satisfy it under the
/// point-count cap).
const AUTO_REL_TOL: f64 = 1e-6;

/// Point-count clamp for [`auto_grid`] grids.
const AUTO_NPTS_MIN: usize = 1001;
const AUTO_NPTS_MAX: usize = 200_001;

/// A one-dimensional potential, in atomic units throughout.
///
/// Evaluation ([`evaluate_potential`]) returns `f64::INFINITY` wherever the
/// potential is a hard wall by *definition* (outside a half-line domain,
/// outside a bounded polynomial's walls, outside a table's range). Soft
/// walls — finite values ≥ [`POTENTIAL_WALL`] — are handled at solve time.
#[derive(Debug, Clone, PartialEq)]
pub enum PotentialSpec {
    /// `V(x) = ½ ω² x²` on the whole line.
    Harmonic {
        /// Angular frequency ω > 0.
        omega: f64,
    },
    /// The clipped oscillator: `V(x) = ½ ω² x²` for `x > 0`, infinite for
    /// `x ≤ 0`. Keeps exactly the odd-parity states of the full oscillator,
    /// so its spectrum is `ω·(2n + 3/2)`.
    ClippedHarmonic {
        /// Angular frequency ω > 0.
        omega: f64,
    },
    /// The half-power family: `V(x) = x^η` for `x > 0`, infinite for
    /// `x ≤ 0`. `η = 2` is the clipped oscillator with `ω = √2`; `η → ∞`
    /// approaches a unit box; small `η` is a nearly flat shelf with a wall.
    HalfPower {
        /// Exponent η > 0.
        eta: f64,
    },
    /// `V(x) = Σ_q a_q (x − c)^q`, optionally walled: with boundaries
    /// `(x_L, x_R)` set, the potential is infinite for `x ≤ x_L` and
    /// `x ≥ x_R` (the walls belong to the *outside*, so a grid that ends
    /// exactly on a wall sees a genuine infinite endpoint, not an
    /// artificial one).
    Polynomial {
        /// Coefficients `a_0, a_1, …` of powers of `(x − c)`.
        coeffs: Vec<f64>,
        /// Expansion center `c`.
        center: f64,
        /// Optional hard walls `x_L < x_R`.
        boundaries: Option<(f64, f64)>,
    },
    /// Piecewise-linear interpolation through `(x_i, v_i)` samples, infinite
    /// outside `[x_0, x_{last}]`.
    TabulatedGrid {
        /// Strictly ascending sample abscissae.
        x: Vec<f64>,
        /// Potential values at the abscissae.
        v: Vec<f64>,
    },
}

impl PotentialSpec {
    /// Check the variant's parameter invariants.
    ///
    /// # Errors
    ///
    /// `InvalidConfig` for a non-positive or non-finite ω or η, an empty or
    /// non-finite polynomial, misordered boundaries, or a table that is too
    /// short, unsorted, or contains non-finite numbers.
    pub fn validate(&self) -> Result<()> {
        match self {
            PotentialSpec::Harmonic { omega } | PotentialSpec::ClippedHarmonic { omega } => {
                if !(omega.is_finite() && *omega > 0.0) {
                    return Err(Error::InvalidConfig(format!(
                        "harmonic frequency must be finite and positive, got {omega}"
                    )));
                }
            }
            PotentialSpec::HalfPower { eta } => {
                if !(eta.is_finite() && *eta > 0.0) {
                    return Err(Error::InvalidConfig(format!(
                        "half-power exponent must be finite and positive, got {eta}"
                    )));
                }
            }
            PotentialSpec::Polynomial {
                coeffs,
                center,
                boundaries,
            } => {
                if coeffs.is_empty() {
                    return Err(Error::InvalidConfig(
                        "polynomial needs at least one coefficient".into(),
                    ));
                }
                if coeffs.iter().any(|a| !a.is_finite()) || !center.is_finite() {
                    return Err(Error::InvalidConfig(
                        "polynomial coefficients and center must be finite".into(),
                    ));
                }
                if let Some((lo, hi)) = boundaries {
                    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                        return Err(Error::InvalidConfig(format!(
                            "polynomial boundaries must be finite with x_L < x_R, \
                             got ({lo}, {hi})"
                        )));
                    }
                }
            }
            PotentialSpec::TabulatedGrid { x, v } => {
                if x.len() < 2 || x.len() != v.len() {
                    return Err(Error::InvalidConfig(format!(
                        "tabulated potential needs ≥ 2 samples with matching lengths, \
                         got {} abscissae and {} values",
                        x.len(),
                        v.len()
                    )));
                }
                if x.windows(2).any(|w| !(w[0] < w[1])) || x.iter().any(|t| !t.is_finite()) {
                    return Err(Error::InvalidConfig(
                        "tabulated abscissae must be finite and strictly ascending".into(),
                    ));
                }
                if v.iter().any(|t| t.is_nan()) {
                    return Err(Error::InvalidConfig(
                        "tabulated potential values must not be NaN".into(),
                    ));
                }
            }
        }
        Ok(())
    }
}

/// Evaluate a potential at one point.
///
/// Returns `f64::INFINITY` where the potential is a wall by definition:
/// `x ≤ 0` for the half-line variants, at or beyond the walls of a bounded
/// polynomial, outside the sampled range of a table. The value is *not*
/// clamped against [`POTENTIAL_WALL`]; that comparison happens in [`solve`].
#[must_use]
pub fn evaluate_potential(p: &PotentialSpec, x: f64) -> f64 {
    match p {
        PotentialSpec::Harmonic { omega } => 0.5 * omega * omega * x * x,
        PotentialSpec::ClippedHarmonic { omega } => {
            if x > 0.0 {
                0.5 * omega * omega * x * x
            } else {
                f64::INFINITY
            }
        }
        PotentialSpec::HalfPower { eta } => {
            if x > 0.0 {
                x.powf(*eta)
            } else {
                f64::INFINITY
            }
        }
        PotentialSpec::Polynomial {
            coeffs,
            center,
            boundaries,
        } => {
            if let Some((lo, hi)) = boundaries {
                if x <= *lo || x >= *hi {
                    return f64::INFINITY;
                }
            }
            let u = x - center;
            // Horner's rule over powers of (x − c).
            coeffs.iter().rev().fold(0.0, |acc, a| acc * u + a)
        }
        PotentialSpec::TabulatedGrid { x: xs, v } => {
            let (first, last) = (xs[0], xs[xs.len() - 1]);
            if x < first || x > last {
                return f64::INFINITY;
            }
            // partition_point gives the first index with xs[i] > x, so the
            // sample interval is [idx−1, idx]; clamp keeps x == last inside.
            let idx = xs.partition_point(|t| *t <= x).clamp(1, xs.len() - 1);
            let (x0, x1) = (xs[idx - 1], xs[idx]);
            let t = (x - x0) / (x1 - x0);
            v[idx - 1] + t * (v[idx] - v[idx - 1])
        }
    }
}

/// Whether an evaluated potential value counts as *finite well interior*
/// rather than wall. NaN (e.g. polynomial overflow at extreme range) is
/// conservatively treated as wall.
fn below_wall(v: f64) -> bool {
    v.is_finite() && v < POTENTIAL_WALL
}

/// A uniform grid `x_j = x_min + j·h`, `h = (x_max − x_min)/(num_points−1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    /// Left endpoint.
    pub x_min: f64,
    /// Right endpoint (> `x_min`).
    pub x_max: f64,
    /// Number of grid points including both endpoints (≥ 64).
    pub num_points: usize,
}

impl GridSpec {
    /// Validate ordering, finiteness, and the minimum point count.
    ///
    /// # Errors
    ///
    /// `InvalidConfig` when `x_min ≥ x_max`, an endpoint is non-finite, or
    /// `num_points < 64`.
    pub fn validate(&self) -> Result<()> {
        if !(self.x_min.is_finite() && self.x_max.is_finite() && self.x_min < self.x_max) {
            return Err(Error::InvalidConfig(format!(
                "grid endpoints must be finite with x_min < x_max, got [{}, {}]",
                self.x_min, self.x_max
            )));
        }
        if self.num_points < 64 {
            return Err(Error::InvalidConfig(format!(
                "grid needs at least 64 points, got {}",
                self.num_points
            )));
        }
        Ok(())
    }

    /// Grid spacing `h`.
    #[must_use]
    pub fn h(&self) -> f64 {
        (self.x_max - self.x_min) / (self.num_points - 1) as f64
    }

    /// All grid points. The last point is set to `x_max` exactly rather than
    /// accumulated, so both walls sit where they were asked for.
    #[must_use]
    pub fn points(&self) -> Vec<f64> {
        let h = self.h();
        let mut xs: Vec<f64> = (0..self.num_points)
            .map(|j| self.x_min + j as f64 * h)
            .collect();
        xs[self.num_points - 1] = self.x_max;
        xs
    }
}

/// The lowest eigenpairs of a discretized potential.
///
/// Produced by [`solve`]; invariants guaranteed there:
///
/// * `energies` strictly ascending (bisection resolves ties at rounding
///   level; exactly degenerate pairs would be unphysical for 1D bound
///   states).
/// * Each row of `wavefunctions` spans the *full* grid, vanishes at both
///   endpoints and on every wall point, and integrates to
///   `∫ψ² dx = 1` exactly under the trapezoid rule.
#[derive(Debug, Clone)]
pub struct EigenSolution {
    /// The grid the problem was discretized on.
    pub grid: GridSpec,
    /// Lowest `K` eigenvalues, ascending, in atomic units.
    pub energies: Vec<f64>,
    /// `K` rows × `num_points` columns; row `n` is ψ_n sampled on the grid.
    pub wavefunctions: Vec<Vec<f64>>,
}

impl EigenSolution {
    /// Number of states `K` held.
    #[must_use]
    pub fn num_states(&self) -> usize {
        self.energies.len()
    }
}

/// Solve the time-independent Schrödinger equation for the lowest
/// `num_states` eigenpairs of `p` discretized on `g`.
///
/// Grid points whose potential is non-finite or ≥ [`POTENTIAL_WALL`] are
/// excluded from the interior; the remaining finite window must be
/// contiguous. Endpoint rows are always dropped (Dirichlet).
///
/// # Errors
///
/// * `InsufficientGrid` — `num_states > num_points/8` (resolution guard),
///   no finite window at all, or fewer interior points than states.
/// * `InvalidConfig` — malformed potential/grid, `num_states = 0`, or a
///   disconnected finite region (two wells separated by a wall).
/// * `UnresolvedStates` — `E_{K−1}` exceeds the potential at a *finite* grid
///   endpoint: the top state is propped up by the artificial box wall and
///   the domain must be enlarged. Endpoints at the infinite sentinel are
///   genuine walls and do not trigger this.
pub fn solve(p: &PotentialSpec, g: &GridSpec, num_states: usize) -> Result<EigenSolution> {
    p.validate()?;
    g.validate()?;
    if num_states == 0 {
        return Err(Error::InvalidConfig("num_states must be ≥ 1".into()));
    }
    let n = g.num_points;
    if num_states * 8 > n {
        return Err(Error::InsufficientGrid(format!(
            "{num_states} states need ≥ {} grid points (8 per state), got {n}",
            num_states * 8
        )));
    }

    let xs = g.points();
    let v: Vec<f64> = xs.iter().map(|&x| evaluate_potential(p, x)).collect();

    let Some(lo) = v.iter().position(|&t| below_wall(t)) else {
        return Err(Error::InsufficientGrid(
            "potential is a wall at every grid point".into(),
        ));
    };
    let hi = v.iter().rposition(|&t| below_wall(t)).expect("lo exists");
    if v[lo..=hi].iter().any(|&t| !below_wall(t)) {
        return Err(Error::InvalidConfig(
            "potential's finite region is disconnected on this grid \
             (interior wall between finite stretches)"
                .into(),
        ));
    }

    // Dirichlet: endpoint rows drop even when finite; a wall immediately
    // left of `lo` (or right of `hi`) already enforces ψ = 0 there.
    let i0 = if lo > 0 { lo } else { 1 };
    let i1 = if hi < n - 1 { hi } else { n - 2 };
    if i1 < i0 || i1 - i0 + 1 < num_states {
        return Err(Error::InsufficientGrid(format!(
            "finite interior has {} points, fewer than {num_states} states",
            if i1 < i0 { 0 } else { i1 - i0 + 1 }
        )));
    }

    let h = g.h();
    let inv_h2 = 1.0 / (h * h);
    let m = i1 - i0 + 1;
    let diag: Vec<f64> = (0..m).map(|t| inv_h2 + v[i0 + t]).collect();
    let off = vec![-0.5 * inv_h2; m - 1];
    let (energies, vecs) = SymTridiag::new(diag, off).lowest_eigenpairs(num_states);

    let e_top = energies[num_states - 1];
    let wall = [v[0], v[n - 1]]
        .into_iter()
        .filter(|&t| below_wall(t))
        .fold(f64::INFINITY, f64::min);
    if e_top > wall {
        return Err(Error::UnresolvedStates {
            top_index: num_states - 1,
            energy: e_top,
            wall_potential: wall,
        });
    }

    // Embed grid vectors into the full grid and convert Σv² = 1 into
    // ∫ψ² dx = 1 (trapezoid): ψ_j = v_j / √h, zero outside the window.
    let root_h = h.sqrt();
    let wavefunctions: Vec<Vec<f64>> = vecs
        .into_iter()
        .map(|vec| {
            let mut psi = vec![0.0; n];
            for (t, val) in vec.into_iter().enumerate() {
                psi[i0 + t] = val / root_h;
            }
            psi
        })
        .collect();

    Ok(EigenSolution {
        grid: *g,
        energies,
        wavefunctions,
    })
}

/// Trapezoid-rule integral of uniformly sampled values.
#[cfg(test)]
#[must_use]
fn trapezoid(f: &[f64], h: f64) -> f64 {
    assert!(f.len() >= 2, "trapezoid needs at least two samples");
    let inner: f64 = f[1..f.len() - 1].iter().sum();
    h * (inner + 0.5 * (f[0] + f[f.len() - 1]))
}

/// Extract the lowest `num_states` energies and the transition dipole matrix
/// `x_ij = ∫ ψ_i x ψ_j dx` (trapezoid rule) from a solution.
///
/// Only the upper triangle is integrated; each value is assigned to both
/// `(i,j)` and `(j,i)`, so the matrix is symmetric to the bit, as
/// [`SpectralData`] demands. (The two integrands are mathematically
/// identical; evaluating one of them twice would still differ in rounding.)
///
/// # Panics
///
/// When `num_states` exceeds the states held by `sol`.
///
/// # Errors
///
/// `InvalidSpectra` if the energies fail `SpectralData`'s ordering check —
/// possible only for a numerically degenerate pair, which no shipped
/// potential produces.
pub fn extract_spectra(sol: &EigenSolution, num_states: usize) -> Result<SpectralData> {
    assert!(
        num_states <= sol.num_states(),
        "asked for {num_states} states from a {}-state solution",
        sol.num_states()
    );
    let xs = sol.grid.points();
    let h = sol.grid.h();
    let n = sol.grid.num_points;
    let mut x = vec![0.0; num_states * num_states];
    for i in 0..num_states {
        for j in i..num_states {
            let pi = &sol.wavefunctions[i];
            let pj = &sol.wavefunctions[j];
            // Dirichlet zeros at both ends make the plain h·Σ equal to the
            // trapezoid rule exactly.
            let mut s = 0.0;
            for t in 0..n {
                s += pi[t] * xs[t] * pj[t];
            }
            let val = h * s;
            x[i * num_states + j] = val;
            x[j * num_states + i] = val;
        }
    }
    SpectralData::new(sol.energies[..num_states].to_vec(), x)
}

/// Grid-derivative matrix element `⟨n|∂/∂x|ℓ⟩ = ∫ ψ_n ψ_ℓ′ dx` with the
/// central-difference derivative `ψ′_j = (ψ_{j+1} − ψ_{j−1})/(2h)`.
///
/// Endpoint terms vanish (Dirichlet), so the trapezoid sum reduces to
/// `½ Σ_j ψ_n[j] (ψ_ℓ[j+1] − ψ_ℓ[j−1])` over interior points.
#[must_use]
pub fn momentum_element(sol: &EigenSolution, n: usize, l: usize) -> f64 {
    let pn = &sol.wavefunctions[n];
    let pl = &sol.wavefunctions[l];
    let pts = sol.grid.num_points;
    let mut s = 0.0;
    for j in 1..pts - 1 {
        s += pn[j] * (pl[j + 1] - pl[j - 1]);
    }
    0.5 * s
}

/// Worst-case violation of the discrete Ehrenfest identity across all state
/// pairs in `s`:
///
/// ```text
///   metric = max_{n,ℓ} | ⟨n|∂/∂x|ℓ⟩ + (E_n − E_ℓ) · x_nℓ |
/// ```
///
/// which is the momentum sum rule `p_nℓ = −i m E_nℓ x_nℓ / ħ` with the
/// grid-derivative momentum substituted (ħ = m = 1). For the
/// central-difference Hamiltonian this identity holds *exactly* — the
/// discrete commutator `[H, X]` telescopes to the central-difference
/// derivative — so the metric measures eigensolver convergence and rounding
/// (∼10⁻¹²), not the O(h²) discretization error.
///
/// # Panics
///
/// When `s` holds more states than `sol`, or its energies are not the ones
/// `sol` produced (the check is for bit-identity, since [`extract_spectra`]
/// copies them).
#[must_use]
pub fn momentum_consistency(sol: &EigenSolution, s: &SpectralData) -> f64 {
    let n = s.num_states();
    assert!(
        n <= sol.num_states(),
        "spectra hold {n} states but the solution only {}",
        sol.num_states()
    );
    for i in 0..n {
        assert!(
            s.energy(i) == sol.energies[i],
            "spectra were not extracted from this solution: E_{i} differs \
             ({} vs {})",
            s.energy(i),
            sol.energies[i]
        );
    }
    let mut worst = 0.0f64;
    for p in 0..n {
        for q in 0..n {
            let d = momentum_element(sol, p, q);
            let resid = d + (s.energy(p) - s.energy(q)) * s.x(p, q);
            worst = worst.max(resid.abs());
        }
    }
    worst
}

/// Expansion anchor: a point expected to sit inside the well.
fn anchor_point(p: &PotentialSpec) -> f64 {
    match p {
        PotentialSpec::Harmonic { .. } => 0.0,
        // Half-line wells: any positive point works; 1.0 keeps the first
        // window clear of the wall at the origin.
        PotentialSpec::ClippedHarmonic { .. } | PotentialSpec::HalfPower { .. } => 1.0,
        PotentialSpec::Polynomial {
            center, boundaries, ..
        } => boundaries.map_or(*center, |(lo, hi)| 0.5 * (lo + hi)),
        PotentialSpec::TabulatedGrid { x, .. } => 0.5 * (x[0] + x[x.len() - 1]),
    }
}

/// Bisect the finite/wall transition between `inside` (finite) and
/// `outside` (wall), returning the *wall-side* end after 64 halvings.
///
/// Returning the wall side puts the grid endpoint at (or just past) the
/// genuine wall, so the endpoint potential is non-finite and the Dirichlet
/// zero there is physical rather than artificial.
fn wall_bisect(p: &PotentialSpec, inside: f64, outside: f64) -> f64 {
    let (mut fin, mut wall) = (inside, outside);
    for _ in 0..64 {
        let mid = 0.5 * (fin + wall);
        if below_wall(evaluate_potential(p, mid)) {
            fin = mid;
        } else {
            wall = mid;
        }
    }
    wall
}

/// Choose a grid that confines the lowest `num_states` states of `p`:
/// every *finite* grid-endpoint potential satisfies
/// `V(endpoint) ≥ kappa · E_{K−1}` (infinite endpoints are genuine walls and
/// trivially fine), or — for potentials that grow too slowly to reach the
/// κ-condition under the point-count cap — the top energy has stopped
/// moving (relative change ≤ 10⁻⁶ between doublings).
///
/// The procedure: start from a well anchor, double the half-width; bisect
/// raw endpoints that land beyond a genuine wall back onto it; solve; on
/// `UnresolvedStates`, keep expanding. After the first wall-clear solve the
/// spacing locks to [`AUTO_PPW`] points per local de-Broglie wavelength at
/// the top state, clamped to `[1001, 200001]` points.
///
/// # Errors
///
/// * `NoConfinement` — expansion reached half-width 10⁶ a.u. without
///   confining `num_states` states (a barrier, a monotone slope, or a well
///   too shallow), or the potential has no finite point at the anchor.
/// * `InvalidConfig` — malformed potential, `num_states = 0`, or
///   `kappa` not finite and positive.
///
/// Any solver error other than `UnresolvedStates` propagates.
pub fn auto_grid(p: &PotentialSpec, num_states: usize, kappa: f64) -> Result<GridSpec> {
    p.validate()?;
    if num_states == 0 {
        return Err(Error::InvalidConfig("num_states must be ≥ 1".into()));
    }
    if !(kappa.is_finite() && kappa > 0.0) {
        return Err(Error::InvalidConfig(format!(
            "boundary safety factor must be finite and positive, got {kappa}"
        )));
    }
    let anchor = anchor_point(p);
    if !below_wall(evaluate_potential(p, anchor)) {
        return Err(Error::NoConfinement(format!(
            "potential is a wall at its expansion anchor x = {anchor}"
        )));
    }
    let npts_min = AUTO_NPTS_MIN.max(8 * num_states + 1);

    let mut half_width = 1.0f64;
    let mut h_lock: Option<f64> = None;
    let mut prev_top: Option<f64> = None;
    while half_width <= AUTO_MAX_HALF_WIDTH {
        let (lo_raw, hi_raw) = (anchor - half_width, anchor + half_width);
        let x0 = if below_wall(evaluate_potential(p, lo_raw)) {
            lo_raw
        } else {
            wall_bisect(p, anchor, lo_raw)
        };
        let x1 = if below_wall(evaluate_potential(p, hi_raw)) {
            hi_raw
        } else {
            wall_bisect(p, anchor, hi_raw)
        };
        let width = x1 - x0;
        if width < 1e-9 {
            return Err(Error::NoConfinement(
                "finite window between walls is vanishingly narrow".into(),
            ));
        }
        // Until the first wall-clear solve fixes the energy scale, resolve
        // the window with a provisional 2000-interval grid.
        let h = h_lock.unwrap_or(width / 2000.0);
        #[allow(clippy::cast_possible_truncation, clippy::cast_sign_loss)]
        let num_points = (((width / h).round() as usize) + 1).clamp(npts_min, AUTO_NPTS_MAX);
        let grid = GridSpec {
            x_min: x0,
            x_max: x1,
            num_points,
        };
        let sol = match solve(p, &grid, num_states) {
            Ok(sol) => sol,
            Err(Error::UnresolvedStates { .. }) => {
                half_width *= 2.0;
                continue;
            }
            Err(e) => return Err(e),
        };
        let e_top = sol.energies[num_states - 1];

        if h_lock.is_none() {
            let v_floor = grid
                .points()
                .iter()
                .map(|&x| evaluate_potential(p, x))
                .filter(|&t| below_wall(t))
                .fold(f64::INFINITY, f64::min);
            // λ_top = 2π/√(2·(E−V_floor)); guard the depth for nearly flat
            // wells so the spacing stays finite.
            let depth = (e_top - v_floor).max(1e-3);
            h_lock = Some(2.0 * std::f64::consts::PI / (AUTO_PPW * (2.0 * depth).sqrt()));
        }

        let kappa_ok = [x0, x1].into_iter().all(|xe| {
            let ve = evaluate_potential(p, xe);
            !below_wall(ve) || ve >= kappa * e_top
        });
        let stable = prev_top
            .is_some_and(|prev| (e_top - prev).abs() <= AUTO_REL_TOL * e_top.abs().max(1e-300));
        if kappa_ok || stable {
            let h_final = h_lock.expect("locked after first successful solve");
            #[allow(clippy::cast_possible_truncation, clippy::cast_sign_loss)]
            let n_final = (((width / h_final).round() as usize) + 1).clamp(npts_min, AUTO_NPTS_MAX);
            return Ok(GridSpec {
                x_min: x0,
                x_max: x1,
                num_points: n_final,
            });
        }
        prev_top = Some(e_top);
        half_width *= 2.0;
    }
    Err(Error::NoConfinement(format!(
        "no confinement of {num_states} states within half-width {AUTO_MAX_HALF_WIDTH:.0e} a.u."
    )))
}
