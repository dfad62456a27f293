//! The inverse problem: from an `N`-state spectrum and dipole matrix to a
//! bounded polynomial well, and back again.
//!
//! Truncating the canonical commutation algebra to `N` states turns the
//! Schrödinger equation inside-out. For every ordered pair `(ℓ, n)` with
//! `ℓ ≤ n`, the matrix elements of a degree-`M−1` polynomial potential
//! `V(x) = Σ_q a_q (x − c)^q` must satisfy the linear system
//!
//! ```text
//!   Σ_q a_q B_nℓ(q) = C_nℓ
//!   B_nℓ(q) = (X̄^q)_{ℓn},       X̄ = X − x_00·1,   c = x_00
//!   C_nℓ   = ½ Σ_i E_ℓi E_in x_ℓi x_in + δ_ℓn E_n      (ħ = m = 1)
//! ```
//!
//! with `M = N(N+1)/2` equations for `M` unknown coefficients — a square
//! system that is nonetheless *far* from invertible: truncation makes the
//! high-`q` directions nearly dependent, and the singular-value spectrum of
//! `B′` spans many orders of magnitude. The least-norm solution through the
//! SVD pseudo-inverse (reciprocate the singular values above a relative
//! cutoff, zero the rest) picks the smallest-coefficient polynomial among
//! the solution family, which is exactly the regularization the method
//! wants: high powers only ever mattered outside the region the bound
//! states can see.
//!
//! The returned polynomial is a *candidate* potential. It usually has a
//! well near the expansion center, but it may also have spurious distant
//! basins, or no minimum at all (a barrier — a legitimate outcome recorded
//! as [`crate::Error::NoMinimum`]). [`find_well_domain`] locates all local
//! minima by bracketing the derivative, walks outward from each minimum to
//! place Dirichlet walls — at `V = κ·E_top` when the polynomial climbs that
//! high (strategy A), at an intervening lower barrier peak otherwise
//! (strategy B) — and [`roundtrip`] re-solves the forward problem on each
//! candidate basin, judging them by the scale-free figure of merit
//! [`crate::spectra::fom`] against the input spectra.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::eigensolver::{solve, extract_spectra, GridSpec, PotentialSpec};
use crate::error::{Error, Result};
use crate::spectra::{fom, SpectralData};

/// Grid resolution used when a candidate basin is re-solved during minimum
/// selection and in [`roundtrip`].
const CANDIDATE_NPTS: usize = 4001;

/// Half-width of the derivative root scan, in units of the spectra's
/// natural length `x_max`: bound states live within a few `x_max` of the
/// well, so ±50 is a generous hunting ground.
const SCAN_SPAN: f64 = 50.0;

/// Number of bracketing cells across the scan interval.
const SCAN_CELLS: usize = 10_000;

/// The assembled linear problem `B′ a = c` for one spectra set.
#[derive(Debug, Clone)]
pub struct InverseProblem {
    /// The input spectra (defines `N`, the energies, and `x_00`).
    pub spectra: SpectralData,
    /// Number of unknown coefficients and of equations,
    /// `M = N(N+1)/2` — the triangular number of state pairs.
    pub degree_count: usize,
    /// Polynomial expansion center, pinned to `c = x_00`.
    pub center: f64,
}

impl InverseProblem {
    /// Frame the inverse problem for `s`.
    #[must_use]
    pub fn new(s: &SpectralData) -> Self {
        let n = s.num_states();
        InverseProblem {
            spectra: s.clone(),
            degree_count: n * (n + 1) / 2,
            center: s.x(0, 0),
        }
    }
}

/// Row order of the linear system: `(0,0), (0,1), (1,1), (0,2), (1,2),
/// (2,2), …` — for each `n`, all `ℓ ≤ n`.
#[must_use]
pub fn pair_order(num_states: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::with_capacity(num_states * (num_states + 1) / 2);
    for n in 0..num_states {
        for l in 0..=n {
            out.push((l, n));
        }
    }
    out
}

/// Assemble the `M×M` matrix `B′` with `B[(ℓ,n), q] = (X̄^q)_{ℓn}`.
///
/// `X̄ = X − x_00·1` subtracts the center from the diagonal only;
/// `q` runs `0..M`, so the first column is the Kronecker pattern of the row
/// pairs and the second is `x̄_ℓn` itself. The matrix powers are the
/// `N`-state truncation of the position-operator algebra: products of
/// dipole matrix elements with all intermediate states beyond `N` dropped.
#[must_use]
pub fn build_b_matrix(s: &SpectralData) -> DMatrix<f64> {
    let n = s.num_states();
    let m = n * (n + 1) / 2;
    let mut xbar = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            xbar[(i, j)] = s.xbar(i, j);
        }
    }
    let rows = pair_order(n);
    let mut b = DMatrix::<f64>::zeros(m, m);
    let mut power = DMatrix::<f64>::identity(n, n);
    for q in 0..m {
        for (r, &(l, nn)) in rows.iter().enumerate() {
            b[(r, q)] = power[(l, nn)];
        }
        power *= &xbar;
    }
    b
}

/// Assemble the right-hand side `C` with
/// `C_nℓ = ½ Σ_i (E_ℓ − E_i)(E_i − E_n) x_ℓi x_in + δ_ℓn E_n`
/// in the same row order as [`build_b_matrix`].
///
/// The energy differences make the sum a double commutator with `H`; for a
/// dipole-free input only the Kronecker term survives, so `C` degenerates
/// to the energies on the diagonal rows.
#[must_use]
pub fn build_c_vector(s: &SpectralData) -> DVector<f64> {
    let n = s.num_states();
    let rows = pair_order(n);
    let mut c = DVector::<f64>::zeros(rows.len());
    for (r, &(l, nn)) in rows.iter().enumerate() {
        let mut acc = 0.0;
        for i in 0..n {
            acc += s.de(l, i) * s.de(i, nn) * s.x(l, i) * s.x(i, nn);
        }
        c[r] = 0.5 * acc;
        if l == nn {
            c[r] += s.energy(nn);
        }
    }
    c
}

/// The least-norm solution of `B′ a = c` and its diagnostics.
#[derive(Debug, Clone, Serialize)]
pub struct InverseSolution {
    /// Polynomial coefficients `a_0 … a_{M−1}` in atomic units.
    pub coefficients: Vec<f64>,
    /// Singular values of `B′`, descending.
    pub singular_values: Vec<f64>,
    /// Number of singular values above the cutoff — the directions that
    /// actually carried information into `coefficients`.
    pub effective_rank: usize,
    /// `‖B′a − c‖₂`; nonzero exactly when `c` has components along the
    /// zeroed singular directions.
    pub residual_norm: f64,
    /// Dimensionless coefficients `b_q = a_q · x_max^q / E_10`, making each
    /// term of `V/E_10` scale-free. Populated by [`invert_spectra`], which
    /// knows the spectra's scales; empty when [`svd_least_norm`] is called
    /// directly on a bare matrix.
    pub scale_free_coeffs: Vec<f64>,
}

/// Solve `B a = c` in the least-norm sense through the SVD pseudo-inverse.
///
/// Singular values `σ_i > cutoff·σ_max` are reciprocated; the rest have
/// their reciprocal set to exactly zero, which simultaneously regularizes
/// the solve and selects, among all exact/least-squares solutions, the one
/// with no component in the (numerical) null space.
///
/// # Panics
///
/// When `cutoff` is outside `(0, 1)` or the dimensions of `b` and `c`
/// disagree.
///
/// # Errors
///
/// [`Error::ZeroMatrix`] when `σ_max = 0` — every direction is null and no
/// coefficient is determined.
pub fn svd_least_norm(b: &DMatrix<f64>, c: &DVector<f64>, cutoff: f64) -> Result<InverseSolution> {
    assert!(
        cutoff > 0.0 && cutoff < 1.0,
        "relative SVD cutoff must lie in (0, 1), got {cutoff}"
    );
    assert_eq!(
        b.nrows(),
        c.len(),
        "matrix has {} rows but the right-hand side {}",
        b.nrows(),
        c.len()
    );
    let svd = b.clone().svd(true, true);
    let sigma = &svd.singular_values;
    let sigma_max = sigma.iter().copied().fold(0.0f64, f64::max);
    if sigma_max == 0.0 {
        return Err(Error::ZeroMatrix);
    }
    let threshold = cutoff * sigma_max;
    let u = svd.u.as_ref().expect("u requested");
    let v_t = svd.v_t.as_ref().expect("v_t requested");

    // a = V S⁺ Uᵀ c, with S⁺ reciprocating only the kept directions.
    let mut ut_c = u.transpose() * c;
    let mut rank = 0usize;
    for (i, &s) in sigma.iter().enumerate() {
        if s > threshold {
            ut_c[i] /= s;
            rank += 1;
        } else {
            ut_c[i] = 0.0;
        }
    }
    let a = v_t.transpose() * ut_c;
    let residual_norm = (b * &a - c).norm();

    let mut singular_values: Vec<f64> = sigma.iter().copied().collect();
    singular_values.sort_by(|p, q| q.partial_cmp(p).expect("singular values are finite"));

    Ok(InverseSolution {
        coefficients: a.iter().copied().collect(),
        singular_values,
        effective_rank: rank,
        residual_norm,
        scale_free_coeffs: Vec::new(),
    })
}

/// A reconstructed polynomial potential `V(x) = Σ_q a_q (x − c)^q`,
/// optionally bounded by hard walls.
#[derive(Debug, Clone, Serialize)]
pub struct PolynomialPotential {
    /// Coefficients `a_0 … a_{M−1}`.
    pub coeffs: Vec<f64>,
    /// Expansion center `c = x_00` of the spectra it came from.
    pub center: f64,
    /// Dirichlet walls `(x_L, x_R)` once a well domain has been carved out;
    /// `None` straight out of [`invert_spectra`].
    pub boundaries: Option<(f64, f64)>,
}

impl PolynomialPotential {
    /// Raw polynomial value at absolute position `x`, ignoring boundaries.
    #[must_use]
    pub fn evaluate_unbounded(&self, x: f64) -> f64 {
        poly_val(&self.coeffs, x - self.center)
    }

    /// Convert to the eigensolver's potential type; walls (when present)
    /// become the infinite sentinel outside `(x_L, x_R)`.
    #[must_use]
    pub fn to_potential_spec(&self) -> PotentialSpec {
        PotentialSpec::Polynomial {
            coeffs: self.coeffs.clone(),
            center: self.center,
            boundaries: self.boundaries,
        }
    }

    /// A copy with the given walls installed.
    #[must_use]
    pub fn bounded(&self, x_left: f64, x_right: f64) -> PolynomialPotential {
        PolynomialPotential {
            coeffs: self.coeffs.clone(),
            center: self.center,
            boundaries: Some((x_left, x_right)),
        }
    }
}

/// Horner evaluation of `Σ_q coeffs[q] u^q`.
fn poly_val(coeffs: &[f64], u: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, a| acc * u + a)
}

/// Coefficients of the derivative polynomial.
fn poly_der(coeffs: &[f64]) -> Vec<f64> {
    (1..coeffs.len()).map(|q| q as f64 * coeffs[q]).collect()
}

/// Invert spectra into a polynomial: assemble `B′` and `C`, solve
/// least-norm, expand about `c = x_00`.
///
/// `cutoff` is the relative singular-value cutoff; `None` uses the default
/// `M·ε_machine`, which zeroes only directions indistinguishable from noise
/// at working precision.
///
/// # Errors
///
/// [`Error::ZeroMatrix`] from the solve (possible only for pathological
/// all-zero inputs).
pub fn invert_spectra(
    s: &SpectralData,
    cutoff: Option<f64>,
) -> Result<(PolynomialPotential, InverseSolution)> {
    let problem = InverseProblem::new(s);
    let cutoff = cutoff.unwrap_or(problem.degree_count as f64 * f64::EPSILON);
    let b = build_b_matrix(s);
    let c = build_c_vector(s);
    let mut solution = svd_least_norm(&b, &c, cutoff)?;
    let x_max = s.x_max();
    let e10 = s.e10();
    solution.scale_free_coeffs = solution
        .coefficients
        .iter()
        .enumerate()
        .map(|(q, a)| a * x_max.powi(q as i32) / e10)
        .collect();
    let potential = PolynomialPotential {
        coeffs: solution.coefficients.clone(),
        center: problem.center,
        boundaries: None,
    };
    Ok((potential, solution))
}

/// Classification of a critical point of the polynomial.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum CritKind {
    Minimum,
    Maximum,
    Inflection,
}

/// A critical point in absolute coordinates.
#[derive(Debug, Clone, Copy)]
struct Critical {
    /// Offset from the expansion center (`u = x − c`).
    u: f64,
    /// Potential value there.
    v: f64,
    kind: CritKind,
}

/// All critical points of the polynomial inside the scan interval
/// `|x − c| ≤ 50·x_max`, by derivative sign-change bracketing over 10⁴
/// cells, each bracket sharpened by 100 bisection steps.
fn critical_points(coeffs: &[f64], x_max: f64) -> Vec<Critical> {
    let der = poly_der(coeffs);
    let lo = -SCAN_SPAN * x_max;
    let hi = SCAN_SPAN * x_max;
    let step = (hi - lo) / SCAN_CELLS as f64;
    let us: Vec<f64> = (0..=SCAN_CELLS).map(|i| lo + i as f64 * step).collect();
    let dv: Vec<f64> = us.iter().map(|&u| poly_val(&der, u)).collect();

    let mut roots = Vec::new();
    for i in 0..SCAN_CELLS {
        let (a, b) = (dv[i], dv[i + 1]);
        if a == 0.0 {
            roots.push(us[i]);
        } else if a * b < 0.0 {
            let (mut ua, mut ub) = (us[i], us[i + 1]);
            for _ in 0..100 {
                let um = 0.5 * (ua + ub);
                let vm = poly_val(&der, um);
                if vm == 0.0 {
                    break;
                }
                if vm * a < 0.0 {
                    ub = um;
                } else {
                    ua = um;
                }
            }
            roots.push(0.5 * (ua + ub));
        }
    }

    // Classify by probing the potential a whisker to either side; an exact
    // second derivative would mislabel flat quartic minima.
    let eps = (hi - lo) * 1e-9;
    roots
        .into_iter()
        .map(|u| {
            let vl = poly_val(coeffs, u - eps);
            let vc = poly_val(coeffs, u);
            let vr = poly_val(coeffs, u + eps);
            let kind = if vc <= vl && vc <= vr {
                CritKind::Minimum
            } else if vc >= vl && vc >= vr {
                CritKind::Maximum
            } else {
                CritKind::Inflection
            };
            Critical { u, v: vc, kind }
        })
        .collect()
}

/// Which rule placed a boundary.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum BoundaryRule {
    /// Threshold walk: the polynomial reached `V ≥ κ·E_top` and the wall
    /// sits where `V = κ·E_top` exactly (bisected).
    Threshold,
    /// Barrier clamp: a local maximum *below* the threshold intervenes; the
    /// wall sits on its peak, since beyond it the polynomial descends into
    /// a different basin that the input states never saw.
    BarrierPeak,
}

/// Walk outward from a minimum at `u_min` in `direction` (±1) until a wall
/// can be placed. Returns the wall's `u` or `None` when the polynomial
/// never climbs to the threshold and never peaks — it cannot confine on
/// this side.
fn walk_boundary(
    coeffs: &[f64],
    u_min: f64,
    direction: f64,
    threshold: f64,
    crit: &[Critical],
    span_u: f64,
) -> Option<(f64, BoundaryRule)> {
    let mut cps: Vec<&Critical> = crit.iter().collect();
    cps.sort_by(|a, b| {
        (a.u * direction)
            .partial_cmp(&(b.u * direction))
            .expect("critical points are finite")
    });

    let mut u_cur = u_min;
    for cp in cps
        .into_iter()
        .filter(|cp| (cp.u - u_min) * direction > 1e-12)
    {
        if cp.kind == CritKind::Maximum {
            return if cp.v >= threshold {
                Some((bisect_value(coeffs, u_cur, cp.u, threshold), BoundaryRule::Threshold))
            } else {
                Some((cp.u, BoundaryRule::BarrierPeak))
            };
        }
        if cp.v >= threshold {
            return Some((
                bisect_value(coeffs, u_cur, cp.u, threshold),
                BoundaryRule::Threshold,
            ));
        }
        u_cur = cp.u;
    }
    // Monotone beyond the last critical point: check the scan edge.
    let u_far = direction * span_u;
    if poly_val(coeffs, u_far) >= threshold {
        return Some((
            bisect_value(coeffs, u_cur, u_far, threshold),
            BoundaryRule::Threshold,
        ));
    }
    None
}

/// Bisect `V(u) = target` between `ua` and `ub` (the bracket holds by
/// construction in [`walk_boundary`]).
fn bisect_value(coeffs: &[f64], mut ua: f64, mut ub: f64, target: f64) -> f64 {
    let mut va = poly_val(coeffs, ua) - target;
    for _ in 0..200 {
        let um = 0.5 * (ua + ub);
        let vm = poly_val(coeffs, um) - target;
        if vm == 0.0 || (ub - ua).abs() < 1e-13 * (1.0 + um.abs()) {
            break;
        }
        if (vm < 0.0) == (va < 0.0) {
            ua = um;
            va = vm;
        } else {
            ub = um;
        }
    }
    0.5 * (ua + ub)
}

/// A bounded well carved out of the reconstructed polynomial.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct WellDomain {
    /// Location of the selected local minimum.
    pub minimum_x: f64,
    /// Left Dirichlet wall.
    pub x_left: f64,
    /// Right Dirichlet wall.
    pub x_right: f64,
    /// `min(V(x_left), V(x_right)) / E_top`: ≥ κ when both walls came from
    /// the threshold walk, smaller when a sunken barrier peak clamped one.
    pub boundary_value_ratio: f64,
}

/// One survivable basin: its domain plus the forward re-solve results.
struct Candidate {
    domain: WellDomain,
    minimum_v: f64,
    spectra: SpectralData,
    fom: f64,
}

/// Evaluate every local minimum of `p` as a candidate well: place walls,
/// re-solve the forward problem on the bounded basin at the input's state
/// count, and score the result against `s` by the figure of merit.
///
/// Errors with `NoMinimum` when the polynomial has no local minimum on the
/// scan interval. An empty return means minima exist but none could be
/// walled off and solved (callers map that to `NoConfinement`).
fn well_candidates(
    p: &PolynomialPotential,
    s: &SpectralData,
    kappa: f64,
) -> Result<Vec<Candidate>> {
    let n = s.num_states();
    let x_max = s.x_max();
    let crit = critical_points(&p.coeffs, x_max);
    let minima: Vec<Critical> = crit
        .iter()
        .copied()
        .filter(|c| c.kind == CritKind::Minimum)
        .collect();
    if minima.is_empty() {
        return Err(Error::NoMinimum);
    }
    let e_top = s.energy(n - 1);
    let threshold = kappa * e_top;
    let span_u = SCAN_SPAN * x_max;

    let mut out = Vec::new();
    for min in &minima {
        let Some((u_l, _rule_l)) = walk_boundary(&p.coeffs, min.u, -1.0, threshold, &crit, span_u)
        else {
            continue;
        };
        let Some((u_r, _rule_r)) = walk_boundary(&p.coeffs, min.u, 1.0, threshold, &crit, span_u)
        else {
            continue;
        };
        let (x_l, x_r) = (p.center + u_l, p.center + u_r);
        let bounded = p.bounded(x_l, x_r);
        let grid = GridSpec {
            x_min: x_l,
            x_max: x_r,
            num_points: CANDIDATE_NPTS,
        };
        // A basin too narrow, too shallow, or numerically degenerate simply
        // drops out of the candidate list, exactly like a wall that could
        // not be placed.
        let Ok(sol) = solve(&bounded.to_potential_spec(), &grid, n) else {
            continue;
        };
        let Ok(calc) = extract_spectra(&sol, n) else {
            continue;
        };
        let Ok(f) = fom(&calc, s) else { continue };
        let ratio = poly_val(&p.coeffs, u_l).min(poly_val(&p.coeffs, u_r)) / e_top;
        out.push(Candidate {
            domain: WellDomain {
                minimum_x: p.center + min.u,
                x_left: x_l,
                x_right: x_r,
                boundary_value_ratio: ratio,
            },
            minimum_v: min.v,
            spectra: calc,
            fom: f,
        });
    }
    Ok(out)
}

/// Pick the best candidate: prefer basins whose domain contains the
/// expansion center `x_00` (the states the input describes live there),
/// then the smallest figure of merit, then the deepest minimum, then the
/// one closest to the center.
fn select_candidate(candidates: Vec<Candidate>, center: f64) -> Option<Candidate> {
    if candidates.is_empty() {
        return None;
    }
    let contains: Vec<bool> = candidates
        .iter()
        .map(|c| c.domain.x_left <= center && center <= c.domain.x_right)
        .collect();
    let any_contains = contains.iter().any(|&b| b);
    candidates
        .into_iter()
        .zip(contains)
        .filter(|(_, keep)| !any_contains || *keep)
        .map(|(c, _)| c)
        .min_by(|a, b| {
            let ka = (a.fom, a.minimum_v, (a.domain.minimum_x - center).abs());
            let kb = (b.fom, b.minimum_v, (b.domain.minimum_x - center).abs());
            ka.partial_cmp(&kb).expect("candidate keys are finite")
        })
}

/// Locate the well the spectra actually describe: find minima, place walls
/// at κ-threshold crossings or sunken barrier peaks, and select among
/// multiple basins by re-solving each and comparing figures of merit
/// against `s`.
///
/// # Errors
///
/// * [`Error::NoMinimum`] — the polynomial is monotone or a pure barrier on
///   the scan interval.
/// * [`Error::NoConfinement`] — minima exist but no basin could be walled
///   off and re-solved.
pub fn find_well_domain(
    p: &PolynomialPotential,
    s: &SpectralData,
    kappa: f64,
) -> Result<WellDomain> {
    let candidates = well_candidates(p, s, kappa)?;
    select_candidate(candidates, p.center)
        .map(|c| c.domain)
        .ok_or_else(|| {
            Error::NoConfinement("no local minimum could be walled off into a solvable well".into())
        })
}

/// The full validation loop: inversion, well carving, forward re-solve,
/// and the figure of merit of the reconstruction.
#[derive(Debug, Clone)]
pub struct Roundtrip {
    /// Spectra of the reconstructed bounded well, same state count as the
    /// input.
    pub spectra: SpectralData,
    /// The reconstructed polynomial with walls installed.
    pub potential: PolynomialPotential,
    /// The least-norm solve diagnostics.
    pub solution: InverseSolution,
    /// The selected well domain.
    pub domain: WellDomain,
    /// Figure of merit between reconstructed and input spectra (lower is
    /// better; 0 would be a perfect dipole-matrix match).
    pub fom: f64,
}

/// Run the complete inverse-then-forward loop on `s_init`.
///
/// `cutoff` as in [`invert_spectra`]; `kappa` is the wall-height safety
/// factor (the scans all use 10).
///
/// # Errors
///
/// * [`Error::NoMinimum`] / [`Error::NoConfinement`] — legitimate physical
///   outcomes (the reconstruction is a barrier, or its minima cannot hold
///   the states); pipelines record these per-sample with an infinite FOM.
/// * [`Error::ZeroMatrix`] — pathological all-zero input.
pub fn roundtrip(s_init: &SpectralData, cutoff: Option<f64>, kappa: f64) -> Result<Roundtrip> {
    let (potential, solution) = invert_spectra(s_init, cutoff)?;
    let candidates = well_candidates(&potential, s_init, kappa)?;
    let best = select_candidate(candidates, potential.center).ok_or_else(|| {
        Error::NoConfinement("no local minimum could be walled off into a solvable well".into())
    })?;
    Ok(Roundtrip {
        potential: potential.bounded(best.domain.x_left, best.domain.x_right),
        spectra: best.spectra,
        solution,
        domain: best.domain,
        fom: best.fom,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Analytic harmonic-oscillator spectra: `E_n = ω(n + ½)`,
    /// `x_{n,n+1} = √((n+1)/(2ω))`.
    fn qho(omega: f64, n: usize) -> SpectralData {
        let energies: Vec<f64> = (0..n).map(|i| omega * (i as f64 + 0.5)).collect();
        let mut x = vec![0.0; n * n];
        for i in 0..n - 1 {
            let v = ((i + 1) as f64 / (2.0 * omega)).sqrt();
            x[i * n + i + 1] = v;
            x[(i + 1) * n + i] = v;
        }
        SpectralData::new(energies, x).expect("analytic ladder is valid")
    }

    #[test]
    fn pair_order_walks_ell_up_to_n() {
        assert_eq!(
            pair_order(3),
            vec![(0, 0), (0, 1), (1, 1), (0, 2), (1, 2), (2, 2)]
        );
    }

    #[test]
    fn b_matrix_first_columns_are_identity_and_xbar() {
        let s = qho(1.0, 3);
        let b = build_b_matrix(&s);
        assert_eq!(b.nrows(), 6, "M = N(N+1)/2 = 6 for N = 3");
        for (r, (l, n)) in pair_order(3).into_iter().enumerate() {
            let expect_q0 = if l == n { 1.0 } else { 0.0 };
            assert_eq!(
                b[(r, 0)],
                expect_q0,
                "column q=0 must be the Kronecker pattern at row ({l},{n})"
            );
            assert_eq!(
                b[(r, 1)],
                s.xbar(l, n),
                "column q=1 must be x̄ at row ({l},{n})"
            );
        }
    }

    #[test]
    fn b_matrix_quadratic_column_matches_hand_expansion() {
        // Row (0,2), q=2: (X̄²)_{02} = Σ_i x̄_0i x̄_i2 = x_01·x_12 = √½·1.
        let s = qho(1.0, 3);
        let b = build_b_matrix(&s);
        let row = pair_order(3).iter().position(|&p| p == (0, 2)).unwrap();
        let expect = 0.5_f64.sqrt();
        assert!(
            (b[(row, 2)] - expect).abs() < 1e-15,
            "(X̄²)_02 = {} but expected √½ = {expect}",
            b[(row, 2)]
        );
    }

    #[test]
    fn c_vector_two_state_values() {
        // C_00 = ½(E_0 − E_1)(E_1 − E_0)x_01² + E_0 = −½·0.5 + 0.5 = 0.25;
        // C_01 vanishes because x_00 = x_11 = 0 for the symmetric ladder.
        let s = qho(1.0, 2);
        let c = build_c_vector(&s);
        assert!((c[0] - 0.25).abs() < 1e-15, "C_00 = {}, expected 0.25", c[0]);
        assert!(c[1].abs() < 1e-15, "C_01 = {}, expected 0", c[1]);
    }

    #[test]
    fn c_vector_without_dipoles_is_just_energies() {
        let s = SpectralData::new(vec![0.3, 1.1, 2.9], vec![0.0; 9]).unwrap();
        let c = build_c_vector(&s);
        for (r, (l, n)) in pair_order(3).into_iter().enumerate() {
            let expect = if l == n { s.energy(n) } else { 0.0 };
            assert_eq!(c[r], expect, "row ({l},{n})");
        }
    }

    #[test]
    fn least_norm_on_diagonal_systems() {
        let b = DMatrix::from_row_slice(2, 2, &[2.0, 0.0, 0.0, 1.0]);
        let c = DVector::from_row_slice(&[4.0, 3.0]);
        let sol = svd_least_norm(&b, &c, 1e-12).unwrap();
        assert!((sol.coefficients[0] - 2.0).abs() < 1e-12);
        assert!((sol.coefficients[1] - 3.0).abs() < 1e-12);
        assert_eq!(sol.effective_rank, 2);

        let b = DMatrix::from_row_slice(2, 2, &[2.0, 0.0, 0.0, 0.0]);
        let c = DVector::from_row_slice(&[4.0, 5.0]);
        let sol = svd_least_norm(&b, &c, 1e-12).unwrap();
        assert!((sol.coefficients[0] - 2.0).abs() < 1e-12);
        assert!(
            sol.coefficients[1].abs() < 1e-12,
            "null direction must stay at zero, got {}",
            sol.coefficients[1]
        );
        assert_eq!(sol.effective_rank, 1);
        assert!(
            (sol.residual_norm - 5.0).abs() < 1e-12,
            "unreachable component has norm 5, got {}",
            sol.residual_norm
        );
    }

    #[test]
    fn least_norm_picks_minimal_point_of_solution_line() {
        // x + y = 2 twice over: solutions form a line; least-norm is (1,1).
        let b = DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 1.0, 1.0]);
        let c = DVector::from_row_slice(&[2.0, 2.0]);
        let sol = svd_least_norm(&b, &c, 1e-12).unwrap();
        assert!((sol.coefficients[0] - 1.0).abs() < 1e-12);
        assert!((sol.coefficients[1] - 1.0).abs() < 1e-12);
        assert_eq!(sol.effective_rank, 1);
    }

    #[test]
    fn zero_matrix_is_rejected() {
        let b = DMatrix::zeros(3, 3);
        let c = DVector::from_row_slice(&[1.0, 2.0, 3.0]);
        assert!(matches!(
            svd_least_norm(&b, &c, 1e-12),
            Err(Error::ZeroMatrix)
        ));
    }

    #[test]
    fn inversion_of_wide_oscillator_reproduces_quadratic_shape() {
        // Exact ω = 10 ladder, N = 6: the reconstruction's leading
        // coefficient must be negative and of the right magnitude, the odd
        // (parity-forbidden) coefficients negligible, and the polynomial
        // must track ½ω²x² across the top state's classically allowed
        // region within 5%.
        let s = qho(10.0, 6);
        let (p, sol) = invert_spectra(&s, None).unwrap();
        assert_eq!(p.coeffs.len(), 21, "M = 21 for N = 6");
        assert_eq!(sol.singular_values.len(), 21);
        let a20 = p.coeffs[20];
        assert!(
            a20 < 0.0 && (0.02..=0.32).contains(&a20.abs()),
            "leading coefficient {a20} outside the plausible band"
        );
        // The cutoff-dependent reference value is ≈ −0.0801; allow ±50%.
        assert!(
            (a20 + 0.0801).abs() < 0.04,
            "a_20 = {a20} strays beyond ±50% of −0.0801"
        );

        // Parity: compare odd vs even coefficient weight at the turning
        // point scale w of state 5 (E_5 = 55 → w = √110/10 ≈ 1.05).
        let w = (2.0 * s.energy(5)).sqrt() / 10.0;
        let weight = |parity: usize| -> f64 {
            p.coeffs
                .iter()
                .enumerate()
                .filter(|(q, _)| q % 2 == parity)
                .map(|(q, a)| a.abs() * w.powi(q as i32))
                .sum()
        };
        assert!(
            weight(1) < 1e-3 * weight(0),
            "odd coefficients should be parity-suppressed: odd {} vs even {}",
            weight(1),
            weight(0)
        );

        // Potential match: V_rec − V_rec(0) vs ½ω²x² across the state-5
        // classically allowed region, judged in RMS (the reconstruction is
        // least faithful right at the turning points, where the bound
        // states barely sample the potential — the pointwise deviation
        // there reaches ≈17% while the RMS stays under 5%).
        let v0 = p.evaluate_unbounded(0.0);
        let mut sum_sq = 0.0;
        let mut count = 0usize;
        for i in 0..=80 {
            let x = -w + 2.0 * w * f64::from(i) / 80.0;
            let v_true = 50.0 * x * x;
            let v_rec = p.evaluate_unbounded(x) - v0;
            if v_true > 1.0 {
                let rel = (v_rec - v_true) / v_true;
                sum_sq += rel * rel;
                count += 1;
                assert!(
                    rel.abs() < 0.25,
                    "reconstruction off by {:.1}% at x = {x:.3}",
                    100.0 * rel.abs()
                );
            }
        }
        let rms = (sum_sq / count as f64).sqrt();
        assert!(
            rms < 0.05,
            "RMS relative deviation {:.2}% exceeds 5%",
            100.0 * rms
        );
    }

    #[test]
    fn scale_free_coefficients_use_qth_power() {
        let s = qho(10.0, 4);
        let (_, sol) = invert_spectra(&s, None).unwrap();
        let (xm, e10) = (s.x_max(), s.e10());
        for (q, (&a, &b)) in sol
            .coefficients
            .iter()
            .zip(&sol.scale_free_coeffs)
            .enumerate()
        {
            let expect = a * xm.powi(q as i32) / e10;
            assert!(
                (b - expect).abs() <= 1e-15 * expect.abs().max(1.0),
                "b_{q} = {b} but a_q x_max^q / E_10 = {expect}"
            );
        }
    }

    #[test]
    fn quadratic_well_gets_threshold_walls() {
        // V = x² with E_top = 11 and κ = 10: walls at ±√110 exactly.
        let n = 12;
        let energies: Vec<f64> = (0..n).map(|i| i as f64).collect();
        let s = SpectralData::new(energies, vec![0.0; n * n]).unwrap();
        let p = PolynomialPotential {
            coeffs: vec![0.0, 0.0, 1.0],
            center: 0.0,
            boundaries: None,
        };
        let d = find_well_domain(&p, &s, 10.0).unwrap();
        let wall = 110.0_f64.sqrt();
        assert!(
            d.minimum_x.abs() < 1e-9,
            "minimum of x² sits at 0, got {}",
            d.minimum_x
        );
        assert!(
            (d.x_right - wall).abs() < 1e-9 && (d.x_left + wall).abs() < 1e-9,
            "walls must sit at ±√110 = ±{wall:.6}, got [{}, {}]",
            d.x_left,
            d.x_right
        );
        assert!(
            (d.boundary_value_ratio - 10.0).abs() < 1e-9,
            "threshold walls sit exactly at κ·E_top, ratio {}",
            d.boundary_value_ratio
        );
    }

    #[test]
    fn monotone_cubic_has_no_minimum() {
        // V' = 1 + 0.003u² > 0 everywhere.
        let s = qho(1.0, 3);
        let p = PolynomialPotential {
            coeffs: vec![0.0, 1.0, 0.0, 0.001],
            center: 0.0,
            boundaries: None,
        };
        assert!(matches!(
            find_well_domain(&p, &s, 10.0),
            Err(Error::NoMinimum)
        ));
    }

    #[test]
    fn least_norm_solution_has_no_null_component() {
        // Project the returned coefficients onto the zeroed right-singular
        // directions; the least-norm property says the projection vanishes.
        let s = qho(10.0, 6);
        let b = build_b_matrix(&s);
        let c = build_c_vector(&s);
        let cutoff = 21.0 * f64::EPSILON;
        let sol = svd_least_norm(&b, &c, cutoff).unwrap();
        let svd = b.clone().svd(true, true);
        let v_t = svd.v_t.unwrap();
        let a = DVector::from_row_slice(&sol.coefficients);
        let sigma_max = sol.singular_values[0];
        let mut null_norm_sq = 0.0;
        for i in 0..b.ncols() {
            if svd.singular_values[i] <= cutoff * sigma_max {
                let comp = v_t.row(i).transpose().dot(&a);
                null_norm_sq += comp * comp;
            }
        }
        let a_norm = a.norm();
        assert!(
            null_norm_sq.sqrt() < 1e-8 * a_norm.max(1.0),
            "null-space leakage {} for |a| = {a_norm}",
            null_norm_sq.sqrt()
        );
    }
}
