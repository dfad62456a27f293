//! End-to-end behavior of the randomized large-β search: the ceiling on
//! reconstructed intrinsic hyperpolarizabilities, the shape of the winning
//! wells, and the breakdown phenomenology of the near-degenerate archetype.

use specwell::pipelines::{
    large_beta_search, EnergyPattern, RunStatus, ScanConfig, SearchTargetSpec,
};

fn six_level(pattern: EnergyPattern, seed: u64) -> SearchTargetSpec {
    SearchTargetSpec {
        num_states: 6,
        epsilon_dipole: 0.02,
        energy_pattern: pattern,
        seed,
    }
}

#[test]
fn three_level_like_search_hits_large_beta_but_respects_the_ceiling() {
    let spec = six_level(EnergyPattern::ThreeLevelLike, 1);
    let cfg = ScanConfig::new(1, 6);
    let out = large_beta_search(&spec, 200, &cfg).expect("search runs");
    assert_eq!(out.records.len(), 200);

    let ok: Vec<f64> = out
        .records
        .iter()
        .filter(|r| r.status == RunStatus::Ok)
        .map(|r| r.beta_int.expect("Ok records carry β"))
        .collect();
    let hits = ok.iter().filter(|&&b| b >= 0.60).count();
    let max = ok.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    println!(
        "three-level-like: {} Ok / 200, {} with β ≥ 0.60, max β = {:.4} (trial {})",
        ok.len(),
        hits,
        max,
        out.top.first().map_or(0, |h| h.trial),
    );
    for h in &out.top {
        println!(
            "  top trial {:3}: β_out = {:.4}, β_in = {:.4}, fom = {:.3e}, \
             well [{:+.3}, {:+.3}]",
            h.trial, h.beta_int, h.beta_input, h.fom, h.domain.x_left, h.domain.x_right
        );
    }

    assert!(
        ok.len() >= 190,
        "three-level-like targets should nearly always invert, got {} Ok",
        ok.len()
    );
    assert!(
        hits >= 1,
        "at least one reconstruction should reach β_int ≥ 0.60, best was {max}"
    );
    assert!(
        max <= 0.714,
        "no actual well may cross the apparent ceiling: max β_int = {max}"
    );
}

#[test]
fn winning_wells_are_simple_monotone_basins() {
    let spec = six_level(EnergyPattern::ThreeLevelLike, 1);
    let cfg = ScanConfig::new(1, 6);
    let out = large_beta_search(&spec, 200, &cfg).expect("search runs");
    assert!(!out.top.is_empty(), "the search should retain top hits");

    for h in &out.top {
        let (xl, xr) = (h.domain.x_left, h.domain.x_right);
        let m = 400;
        let vals: Vec<f64> = (0..=m)
            .map(|i| {
                let x = xl + (xr - xl) * i as f64 / m as f64;
                h.potential.evaluate_unbounded(x)
            })
            .collect();
        let span = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
            - vals.iter().cloned().fold(f64::INFINITY, f64::min);
        let tol = span * 1e-9;
        for i in 1..m {
            assert!(
                !(vals[i] > vals[i - 1] + tol && vals[i] > vals[i + 1] + tol),
                "trial {}: interior local max at grid point {i} — the best \
                 wells should fall monotonically into one basin",
                h.trial
            );
        }
    }
}

#[test]
fn near_degenerate_pair_search_shows_the_breakdown_phenomenology() {
    let spec = six_level(EnergyPattern::NearDegeneratePair, 1);
    let cfg = ScanConfig::new(1, 6);
    let out = large_beta_search(&spec, 200, &cfg).expect("search runs");

    let no_minimum = out
        .records
        .iter()
        .filter(|r| r.status == RunStatus::NoMinimum)
        .count();
    let ok: Vec<&specwell::pipelines::ScanRecord> = out
        .records
        .iter()
        .filter(|r| r.status == RunStatus::Ok)
        .collect();
    let max_out = ok
        .iter()
        .map(|r| r.beta_int.unwrap())
        .fold(f64::NEG_INFINITY, f64::max);
    let max_in = out
        .top
        .iter()
        .map(|h| h.beta_input)
        .fold(f64::NEG_INFINITY, f64::max);
    println!(
        "near-degenerate pair: {} Ok, {} NoMinimum, max β_out = {:.4}, \
         top-hit max β_in = {:.4}",
        ok.len(),
        no_minimum,
        max_out,
        max_in
    );

    // Splitting the skeleton strength across a near-degenerate pair pushes
    // many draws over the fundamental limit; their inversions produce
    // barrier-like polynomials with no minimum far more often than the
    // three-level-like archetype (which loses at most a handful of trials).
    assert!(
        (10..=90).contains(&no_minimum),
        "expected an elevated NoMinimum rate, got {no_minimum}/200"
    );
    assert!(
        max_out <= 0.714,
        "reconstructed wells must respect the ceiling: {max_out}"
    );
    // The raw targets themselves are over-limit dipole matrices…
    let any_over_limit = out
        .records
        .iter()
        .filter(|r| r.status == RunStatus::Ok)
        .count()
        > 0
        && {
            // β_in is retained only on top hits; scan a few trials directly.
            use specwell::pipelines::synthesize_target_trial;
            use specwell::response::beta_intrinsic;
            (0..200u64).any(|t| {
                synthesize_target_trial(&spec, t)
                    .map(|s| beta_intrinsic(&s).beta_int > 1.0)
                    .unwrap_or(false)
            })
        };
    assert!(
        any_over_limit,
        "the pair archetype should generate over-limit raw targets"
    );
}
