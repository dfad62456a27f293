//! `specwell scan` — the seeded batch pipelines.
//!
//! Four kinds, one flag:
//!
//! * `--kind omega`  — random-width ω scan over one analytic family
//!   (`--family harmonic|clipped`); emits `scan.csv` + `scan_summary.json`.
//! * `--kind cqho`   — clipped-oscillator convergence study across state
//!   counts `--nmin ..= --nmax`; emits `scan.csv` (one winning row per N)
//!   + `scan_summary.json`.
//! * `--kind power`  — half-power sweep `V = x^η` over a log grid
//!   `--eta a:b:n`; emits `power.csv` (`eta,beta_int`) +
//!   `scan_summary.json`.
//! * `--kind search` — large-β Monte Carlo target search; emits `scan.csv`
//!   (one row per trial) + `search_summary.json` with the full top-hit
//!   diagnostics (coefficients, walls, both β values).
//!
//! Every kind prints its best record and is bit-reproducible for a fixed
//! seed regardless of thread count.

use std::path::PathBuf;

use clap::Args;
use serde_json::json;
use specwell::io;
use specwell::pipelines::{
    cqho_convergence, large_beta_search, omega_scan, power_scan, EnergyPattern, RunStatus,
    ScanConfig, ScanFamily, ScanRecord, SearchTargetSpec, POWER_SCAN_DEFAULT_STATES,
};

use crate::config::{parse_f64, parse_usize, FileConfig};
use crate::{sci9, Failure};

#[derive(Args)]
pub struct ScanArgs {
    /// Pipeline: omega | cqho | power | search
    #[arg(long)]
    kind: Option<String>,

    /// Analytic family for --kind omega: harmonic | clipped
    /// [default: harmonic]
    #[arg(long)]
    family: Option<String>,

    /// Root seed [default: 1]
    #[arg(long)]
    seed: Option<u64>,

    /// Samples per scan row [default: 75]
    #[arg(long)]
    samples: Option<usize>,

    /// States per sample [default: 6 (omega/search); 15 for power]
    #[arg(long)]
    states: Option<usize>,

    /// Lower log10 ω bound for --kind omega [default: -1]
    #[arg(long = "omega-log10-min", allow_negative_numbers = true)]
    omega_log10_min: Option<f64>,

    /// Upper log10 ω bound for --kind omega [default: 2]
    #[arg(long = "omega-log10-max", allow_negative_numbers = true)]
    omega_log10_max: Option<f64>,

    /// Relative SVD cutoff override in (0, 1) [default: M·ε]
    #[arg(long)]
    cutoff: Option<f64>,

    /// Wall-clearance factor κ [default: 10]
    #[arg(long)]
    kappa: Option<f64>,

    /// Smallest state count for --kind cqho [default: 3]
    #[arg(long)]
    nmin: Option<usize>,

    /// Largest state count for --kind cqho [default: 12]
    #[arg(long)]
    nmax: Option<usize>,

    /// Log-spaced η grid a:b:n for --kind power [default: 0.1:30:20]
    #[arg(long)]
    eta: Option<String>,

    /// Ladder size for --kind search [default: 6]
    #[arg(long)]
    levels: Option<usize>,

    /// Trial count for --kind search [default: 200]
    #[arg(long)]
    trials: Option<usize>,

    /// Dipole noise scale ε for --kind search [default: 0.02]
    #[arg(long)]
    epsilon: Option<f64>,

    /// Target archetype for --kind search: three-level | pair
    /// [default: three-level]
    #[arg(long)]
    pattern: Option<String>,

    /// Output directory [default: .]
    #[arg(long)]
    out: Option<PathBuf>,

    /// Key-value config file; flags given here win over it
    #[arg(long)]
    config: Option<PathBuf>,
}

/// Parse the `a:b:n` log-grid spec into explicit η values (both endpoints
/// exact).
fn parse_eta_grid(v: &str) -> Result<Vec<f64>, Failure> {
    let parts: Vec<&str> = v.split(':').collect();
    let [a, b, n] = parts.as_slice() else {
        return Err(Failure::config(format!(
            "eta: expected a:b:n (log-spaced grid), got {v:?}"
        )));
    };
    let (a, b) = (parse_f64("eta (start)", a)?, parse_f64("eta (end)", b)?);
    let n = parse_usize("eta (count)", n)?;
    if !(a.is_finite() && a > 0.0 && b.is_finite() && b > a) {
        return Err(Failure::config(format!(
            "eta: need 0 < start < end, got {a} and {b}"
        )));
    }
    if n < 2 {
        return Err(Failure::config(format!("eta: need ≥ 2 points, got {n}")));
    }
    let (la, lb) = (a.log10(), b.log10());
    let mut grid: Vec<f64> = (0..n)
        .map(|i| 10.0_f64.powf(la + (lb - la) * i as f64 / (n - 1) as f64))
        .collect();
    grid[0] = a;
    grid[n - 1] = b;
    Ok(grid)
}

/// One human line for a scan record.
fn record_line(r: &ScanRecord) -> String {
    format!(
        "sample {} | omega {} | fom {} | beta_int {} | {}",
        r.sample,
        r.omega.map_or_else(|| "-".into(), sci9),
        sci9(r.fom),
        r.beta_int.map_or_else(|| "-".into(), sci9),
        r.status
    )
}

pub fn run(args: &ScanArgs) -> Result<(), Failure> {
    let cfg = FileConfig::load(args.config.as_deref())?;

    let kind = args
        .kind
        .clone()
        .or_else(|| cfg.str("scan.kind").map(ToOwned::to_owned))
        .ok_or_else(|| Failure::config("missing --kind (omega | cqho | power | search)".into()))?;
    let seed = args.seed.or(cfg.u64("scan.seed")?).unwrap_or(1);
    let samples = args.samples.or(cfg.usize("scan.samples")?).unwrap_or(75);
    let states = args.states.or(cfg.usize("scan.states")?);
    let lo = match args.omega_log10_min.or(cfg.f64("scan.omega_log10_min")?) {
        Some(v) => v,
        None => -1.0,
    };
    let hi = match args.omega_log10_max.or(cfg.f64("scan.omega_log10_max")?) {
        Some(v) => v,
        None => 2.0,
    };
    let cutoff = args.cutoff.or(cfg.f64("scan.cutoff")?);
    let kappa = match args.kappa.or(cfg.f64("scan.kappa")?) {
        Some(k) => k,
        None => 10.0,
    };
    let out = args
        .out
        .clone()
        .or_else(|| cfg.str("out").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."));
    std::fs::create_dir_all(&out)?;
    let write = |name: &str, text: &str| -> Result<(), Failure> {
        io::write_text(&out.join(name), text).map_err(|e| Failure::config(e.to_string()))
    };
    let to_json = |v: &serde_json::Value| -> Result<String, Failure> {
        io::to_json(v).map_err(|e| Failure::config(e.to_string()))
    };

    match kind.as_str() {
        "omega" => {
            let family = match args
                .family
                .clone()
                .or_else(|| cfg.str("scan.family").map(ToOwned::to_owned))
                .as_deref()
            {
                None | Some("harmonic") => ScanFamily::Harmonic,
                Some("clipped") => ScanFamily::ClippedHarmonic,
                Some(other) => {
                    return Err(Failure::config(format!(
                        "unknown family {other:?} (expected harmonic | clipped)"
                    )))
                }
            };
            let scan_cfg = ScanConfig {
                seed,
                num_samples: samples,
                omega_log10_range: (lo, hi),
                num_states: states.unwrap_or(6),
                svd_cutoff: cutoff,
                kappa,
            };
            let outcome =
                omega_scan(family, &scan_cfg).map_err(|e| Failure::from_solver_error(&e))?;
            write("scan.csv", &io::records_to_csv(&outcome.records))?;
            let best = &outcome.records[outcome.best];
            let summary = json!({
                "kind": "omega",
                "family": family,
                "config": scan_cfg,
                "best": best,
            });
            write("scan_summary.json", &to_json(&summary)?)?;
            println!("best: {}", record_line(best));
        }
        "cqho" => {
            let nmin = args.nmin.or(cfg.usize("scan.nmin")?).unwrap_or(3);
            let nmax = args.nmax.or(cfg.usize("scan.nmax")?).unwrap_or(12);
            let scan_cfg = ScanConfig {
                seed,
                num_samples: samples,
                omega_log10_range: (lo, hi),
                num_states: 2, // overridden per row with each N
                svd_cutoff: cutoff,
                kappa,
            };
            let rows =
                cqho_convergence(nmin, nmax, &scan_cfg).map_err(|e| Failure::from_solver_error(&e))?;
            write("scan.csv", &io::records_to_csv(&rows))?;
            let summary = json!({
                "kind": "cqho",
                "nmin": nmin,
                "nmax": nmax,
                "config": scan_cfg,
                "rows": rows,
            });
            write("scan_summary.json", &to_json(&summary)?)?;
            println!("{:>3}  {:>16}  {:>16}", "N", "fom_norm", "beta_int");
            for r in &rows {
                println!(
                    "{:>3}  {:>16}  {:>16}",
                    r.sample,
                    sci9(r.fom_norm),
                    r.beta_int.map_or_else(|| "-".into(), sci9)
                );
            }
            if let Some(last) = rows.last() {
                println!("best: {}", record_line(last));
            }
        }
        "power" => {
            let grid = parse_eta_grid(
                &args
                    .eta
                    .clone()
                    .or_else(|| cfg.str("scan.eta").map(ToOwned::to_owned))
                    .unwrap_or_else(|| "0.1:30:20".into()),
            )?;
            let num_states = states.unwrap_or(POWER_SCAN_DEFAULT_STATES);
            let rows = power_scan(&grid, num_states, kappa)
                .map_err(|e| Failure::from_solver_error(&e))?;
            let mut csv = String::from("eta,beta_int\n");
            for (eta, beta) in &rows {
                csv.push_str(&io::fmt_f64(*eta));
                csv.push(',');
                csv.push_str(&io::fmt_f64(*beta));
                csv.push('\n');
            }
            write("power.csv", &csv)?;
            let best = rows
                .iter()
                .copied()
                .max_by(|a, b| a.1.total_cmp(&b.1))
                .expect("grid has ≥ 2 points");
            let summary = json!({
                "kind": "power",
                "num_states": num_states,
                "kappa": kappa,
                "rows": rows.iter().map(|(e, b)| json!({"eta": e, "beta_int": b})).collect::<Vec<_>>(),
                "best": {"eta": best.0, "beta_int": best.1},
            });
            write("scan_summary.json", &to_json(&summary)?)?;
            println!(
                "best: eta {} | beta_int {}",
                sci9(best.0),
                sci9(best.1)
            );
        }
        "search" => {
            let levels = args.levels.or(cfg.usize("scan.levels")?).unwrap_or(6);
            let trials = args.trials.or(cfg.usize("scan.trials")?).unwrap_or(200);
            let epsilon = match args.epsilon.or(cfg.f64("scan.epsilon")?) {
                Some(e) => e,
                None => 0.02,
            };
            let pattern = match args
                .pattern
                .clone()
                .or_else(|| cfg.str("scan.pattern").map(ToOwned::to_owned))
                .as_deref()
            {
                None | Some("three-level") => EnergyPattern::ThreeLevelLike,
                Some("pair") => EnergyPattern::NearDegeneratePair,
                Some(other) => {
                    return Err(Failure::config(format!(
                        "unknown pattern {other:?} (expected three-level | pair)"
                    )))
                }
            };
            let spec = SearchTargetSpec {
                num_states: levels,
                epsilon_dipole: epsilon,
                energy_pattern: pattern,
                seed,
            };
            let scan_cfg = ScanConfig {
                svd_cutoff: cutoff,
                kappa,
                ..ScanConfig::new(seed, levels)
            };
            let outcome = large_beta_search(&spec, trials, &scan_cfg)
                .map_err(|e| Failure::from_solver_error(&e))?;
            write("scan.csv", &io::records_to_csv(&outcome.records))?;
            let ok = outcome
                .records
                .iter()
                .filter(|r| matches!(r.status, RunStatus::Ok))
                .count();
            let summary = json!({
                "kind": "search",
                "spec": spec,
                "trials": trials,
                "ok_trials": ok,
                "top": outcome.top,
            });
            write("search_summary.json", &to_json(&summary)?)?;
            match outcome.top.first() {
                Some(hit) => println!(
                    "best: trial {} | beta_int {} | beta_input {} | fom {}",
                    hit.trial,
                    sci9(hit.beta_int),
                    sci9(hit.beta_input),
                    sci9(hit.fom)
                ),
                None => println!("best: none — no trial survived the roundtrip"),
            }
        }
        other => {
            return Err(Failure::config(format!(
                "unknown kind {other:?} (expected omega | cqho | power | search)"
            )))
        }
    }
    Ok(())
}
