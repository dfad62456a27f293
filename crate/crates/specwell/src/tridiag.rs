//! Symmetric tridiagonal eigensolver: Sturm-sequence bisection for the
//! lowest eigenvalues, shifted inverse iteration for their eigenvectors.
//!
//! The discretized 1D Hamiltonian is symmetric tridiagonal, and only the
//! bottom `K ≪ n` eigenpairs are ever wanted, so a targeted solver beats a
//! full diagonalization by orders of magnitude. The two stages:
//!
//! 1. **Bisection.** For a symmetric tridiagonal `T` the sequence
//!
//!    ```text
//!    d_1 = t_11 − x ,    d_i = (t_ii − x) − t_{i,i−1}² / d_{i−1} ,
//!    ```
//!
//!    has as many negative terms as `T` has eigenvalues below `x` (Sturm
//!    count). Bisecting inside the Gershgorin interval pins each eigenvalue
//!    to a couple of ulps, independent of clustering.
//!
//! 2. **Inverse iteration.** With a shift that accurate, one or two solves
//!    of `(T − λI) y = v` rotate any start vector onto the eigenvector; we
//!    run a fixed four, orthogonalizing against all previously accepted
//!    vectors each pass so that clustered eigenvalues (symmetric double
//!    wells split by ~1e-12) still come out mutually orthogonal.
//!
//! Determinism is part of the contract: start vectors come from a fixed
//! [`crate::rng`] stream keyed by eigenvalue index, the iteration count is
//! fixed, and the returned sign makes the first significant component
//! positive. Two calls on the same matrix produce bit-identical output.

use crate::rng::stream;
#[cfg(test)]
use crate::rng::SplitMix64;

/// Fixed root for inverse-iteration start vectors. Any constant works; this
/// one is pinned so eigensolves reproduce bit-for-bit across runs and hosts.
const START_VECTOR_SEED: u64 = 0x9A3F_51D2_C4B7_8E61;

/// Inverse-iteration sweeps. The shift is already eigenvalue-accurate, so
/// convergence is immediate; the fixed count exists for determinism, and the
/// spares absorb pathological starts in tight clusters.
const INVERSE_ITERS: usize = 4;

/// Symmetric tridiagonal matrix in two-array form.
#[derive(Clone, Debug)]
pub struct SymTridiag {
    /// Main diagonal, length `n`.
    pub diag: Vec<f64>,
    /// Off-diagonal, length `n − 1`.
    pub off: Vec<f64>,
}

impl SymTridiag {
    /// Wrap a diagonal / off-diagonal pair.
    #[must_use]
    pub fn new(diag: Vec<f64>, off: Vec<f64>) -> Self {
        assert!(
            !diag.is_empty() && off.len() + 1 == diag.len(),
            "tridiagonal shape mismatch: {} diagonal vs {} off-diagonal entries",
            diag.len(),
            off.len()
        );
        Self { diag, off }
    }

    /// Matrix dimension.
    #[must_use]
    pub fn n(&self) -> usize {
        self.diag.len()
    }

    /// `T v` — used by residual checks and nowhere on the hot path.
    #[must_use]
    pub fn multiply(&self, v: &[f64]) -> Vec<f64> {
        let n = self.n();
        assert_eq!(v.len(), n, "multiply: vector length {} != {n}", v.len());
        let mut out = vec![0.0; n];
        for i in 0..n {
            let mut acc = self.diag[i] * v[i];
            if i > 0 {
                acc += self.off[i - 1] * v[i - 1];
            }
            if i + 1 < n {
                acc += self.off[i] * v[i + 1];
            }
            out[i] = acc;
        }
        out
    }

    /// Gershgorin bounds: every eigenvalue lies in `[lo, hi]`.
    #[must_use]
    pub fn gershgorin(&self) -> (f64, f64) {
        let n = self.n();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let mut r = 0.0;
            if i > 0 {
                r += self.off[i - 1].abs();
            }
            if i + 1 < n {
                r += self.off[i].abs();
            }
            lo = lo.min(self.diag[i] - r);
            hi = hi.max(self.diag[i] + r);
        }
        (lo, hi)
    }

    /// Smallest admissible pivot for the Sturm recurrence — keeps the count
    /// exact when a shift lands on a leading-minor root.
    fn pivmin(&self) -> f64 {
        let max_off_sq = self
            .off
            .iter()
            .fold(1.0f64, |m, &b| m.max(b * b));
        f64::MIN_POSITIVE * max_off_sq
    }

    /// Number of eigenvalues strictly below `x` (Sturm count).
    #[must_use]
    pub fn count_below(&self, x: f64) -> usize {
        let pivmin = self.pivmin();
        let mut count = 0usize;
        let mut d = 1.0f64;
        for i in 0..self.n() {
            let off_sq = if i > 0 { self.off[i - 1] * self.off[i - 1] } else { 0.0 };
            d = (self.diag[i] - x) - off_sq / d;
            if d.abs() < pivmin {
                d = -pivmin;
            }
            if d < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// The `k` smallest eigenvalues, ascending, each bisected to a few ulps.
    #[must_use]
    pub fn lowest_eigenvalues(&self, k: usize) -> Vec<f64> {
        let n = self.n();
        assert!(k <= n, "asked for {k} eigenvalues of an {n}×{n} matrix");
        let (gl, gu) = self.gershgorin();
        let scale = gl.abs().max(gu.abs()).max(1.0);
        let tol = 2.0 * f64::EPSILON * scale;
        let mut evals = Vec::with_capacity(k);
        let mut floor = gl;
        for j in 0..k {
            // λ_j is sandwiched: count(lo) ≤ j < count(hi). Monotonicity of
            // the spectrum lets each search start at the previous root.
            let mut lo = floor;
            let mut hi = gu;
            for _ in 0..128 {
                if hi - lo <= tol {
                    break;
                }
                let mid = 0.5 * (lo + hi);
                if self.count_below(mid) >= j + 1 {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            let lambda = 0.5 * (lo + hi);
            evals.push(lambda);
            floor = lo;
        }
        evals
    }

    /// The `k` smallest eigenpairs: ascending eigenvalues and orthonormal
    /// eigenvectors (rows of the returned matrix, each of length `n`).
    ///
    /// Signs follow the first-significant-component-positive convention, so
    /// repeated calls — and calls on a bit-identical matrix built elsewhere —
    /// agree exactly.
    #[must_use]
    pub fn lowest_eigenpairs(&self, k: usize) -> (Vec<f64>, Vec<Vec<f64>>) {
        let n = self.n();
        let evals = self.lowest_eigenvalues(k);
        let mut vecs: Vec<Vec<f64>> = Vec::with_capacity(k);
        for (j, &lambda) in evals.iter().enumerate() {
            let lu = ShiftedLu::factor(self, lambda);
            let mut rng = stream(START_VECTOR_SEED, j as u64);
            let mut v: Vec<f64> = (0..n).map(|_| rng.next_f64() - 0.5).collect();
            normalize(&mut v);
            for _ in 0..INVERSE_ITERS {
                let mut y = lu.solve(&v);
                // Full re-orthogonalization: cheap at k ≤ a few dozen, and it
                // is what rescues clusters whose splitting is below the
                // bisection tolerance.
                for prev in &vecs {
                    let proj = dot(&y, prev);
                    for (yi, pi) in y.iter_mut().zip(prev) {
                        *yi -= proj * pi;
                    }
                }
                normalize(&mut y);
                v = y;
            }
            fix_sign(&mut v);
            vecs.push(v);
        }
        (evals, vecs)
    }
}

/// LU factors of `T − λI` with partial pivoting. Row swaps give `U` a second
/// superdiagonal; all of it stays in five flat arrays.
struct ShiftedLu {
    u: Vec<f64>,
    v1: Vec<f64>,
    v2: Vec<f64>,
    mult: Vec<f64>,
    swapped: Vec<bool>,
}

impl ShiftedLu {
    fn factor(t: &SymTridiag, shift: f64) -> Self {
        let n = t.n();
        let anorm = {
            let (gl, gu) = t.gershgorin();
            gl.abs().max(gu.abs()).max(1.0)
        };
        // Zero pivots are expected — the shift IS an eigenvalue. Replacing
        // them with ±tiny turns the singular solve into the huge-amplitude
        // solve inverse iteration wants.
        let tiny = f64::EPSILON * anorm * f64::EPSILON;
        let mut u = vec![0.0; n];
        let mut v1 = vec![0.0; n];
        let mut v2 = vec![0.0; n];
        let mut mult = vec![0.0; n];
        let mut swapped = vec![false; n];

        // Running row i after updates from step i−1: entries at columns
        // (i, i+1, i+2).
        let mut dcur = t.diag[0] - shift;
        let mut ccur = if n > 1 { t.off[0] } else { 0.0 };
        let mut ecur = 0.0;
        for i in 0..n.saturating_sub(1) {
            let sub = t.off[i];
            let b_diag = t.diag[i + 1] - shift;
            let b_super = if i + 2 < n { t.off[i + 1] } else { 0.0 };
            if dcur.abs() >= sub.abs() {
                let piv = if dcur == 0.0 { tiny } else { dcur };
                let m = sub / piv;
                u[i] = piv;
                v1[i] = ccur;
                v2[i] = ecur;
                mult[i] = m;
                dcur = b_diag - m * ccur;
                ccur = b_super - m * ecur;
            } else {
                let m = dcur / sub;
                u[i] = sub;
                v1[i] = b_diag;
                v2[i] = b_super;
                mult[i] = m;
                swapped[i] = true;
                dcur = ccur - m * b_diag;
                ccur = ecur - m * b_super;
            }
            ecur = 0.0;
        }
        u[n - 1] = if dcur == 0.0 { tiny } else { dcur };
        Self { u, v1, v2, mult, swapped }
    }

    fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.u.len();
        let mut y = b.to_vec();
        for i in 0..n.saturating_sub(1) {
            if self.swapped[i] {
                y.swap(i, i + 1);
            }
            y[i + 1] -= self.mult[i] * y[i];
        }
        let mut x = vec![0.0; n];
        for i in (0..n).rev() {
            let mut acc = y[i];
            if i + 1 < n {
                acc -= self.v1[i] * x[i + 1];
            }
            if i + 2 < n {
                acc -= self.v2[i] * x[i + 2];
            }
            x[i] = acc / self.u[i];
        }
        x
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn normalize(v: &mut [f64]) {
    let norm = dot(v, v).sqrt();
    assert!(
        norm > 0.0 && norm.is_finite(),
        "inverse iteration produced a vector with norm {norm}"
    );
    for x in v.iter_mut() {
        *x /= norm;
    }
}

/// Flip the overall sign so the first component exceeding `1e-8·max|v|` is
/// positive. Phase is not an observable; pinning it makes output comparable.
fn fix_sign(v: &mut [f64]) {
    let max_abs = v.iter().fold(0.0f64, |m, &x| m.max(x.abs()));
    let thresh = 1e-8 * max_abs;
    if let Some(first) = v.iter().find(|x| x.abs() > thresh) {
        if *first < 0.0 {
            for x in v.iter_mut() {
                *x = -*x;
            }
        }
    }
}
