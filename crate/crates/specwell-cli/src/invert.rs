//! `specwell invert` — reconstruct a polynomial well from spectra JSON.
//!
//! Writes into `--out`:
//!
//! * `inversion.json` — status, figure of merit, polynomial coefficients
//!   (raw and scale-free), singular values, effective rank, residual norm,
//!   selected well domain, and the response report of the reconstruction;
//! * `reconstructed_spectra.json` — the re-solved bounded well's spectra
//!   (absent when the inversion broke down before a well existed);
//! * `potential.csv` — `x, V(x)` samples across the walled domain.
//!
//! Breakdown is *reported, not silent*: an inversion that finds no minimum,
//! cannot confine the states, or lands above `--fom-limit` still writes
//! `inversion.json` with the failure status, prints why, and exits 3.

use std::path::PathBuf;

use clap::Args;
use serde_json::json;
use specwell::inverse::roundtrip;
use specwell::io;
use specwell::response::beta_intrinsic;
use specwell::spectra::normalized_fom;
use specwell::Error;

use crate::config::FileConfig;
use crate::{sci9, Failure};

#[derive(Args)]
pub struct InvertArgs {
    /// Input spectra JSON (`energies` + symmetric `dipole` matrix)
    #[arg(long)]
    input: Option<PathBuf>,

    /// Relative SVD cutoff in (0, 1) [default: M·ε, M = number of
    /// coefficients]
    #[arg(long)]
    cutoff: Option<f64>,

    /// Wall-clearance factor κ for the re-solve [default: 10]
    #[arg(long)]
    kappa: Option<f64>,

    /// Figure-of-merit ceiling for a usable reconstruction; at or above
    /// it the run reports breakdown and exits 3 [default: 10]
    #[arg(long = "fom-limit")]
    fom_limit: Option<f64>,

    /// Output directory [default: .]
    #[arg(long)]
    out: Option<PathBuf>,

    /// Key-value config file; flags given here win over it
    #[arg(long)]
    config: Option<PathBuf>,
}

pub fn run(args: &InvertArgs) -> Result<(), Failure> {
    let cfg = FileConfig::load(args.config.as_deref())?;

    let input = args
        .input
        .clone()
        .or_else(|| cfg.str("invert.input").map(PathBuf::from))
        .ok_or_else(|| Failure::config("missing --input spectra.json".into()))?;
    let cutoff = args.cutoff.or(cfg.f64("invert.cutoff")?);
    if let Some(c) = cutoff {
        if !(c > 0.0 && c < 1.0) {
            return Err(Failure::config(format!(
                "cutoff must lie in (0, 1), got {c}"
            )));
        }
    }
    let kappa = match args.kappa.or(cfg.f64("invert.kappa")?) {
        Some(k) => k,
        None => 10.0,
    };
    let fom_limit = match args.fom_limit.or(cfg.f64("invert.fom_limit")?) {
        Some(l) => l,
        None => 10.0,
    };
    if !(fom_limit.is_finite() && fom_limit > 0.0) {
        return Err(Failure::config(format!(
            "fom-limit must be positive and finite, got {fom_limit}"
        )));
    }
    let out = args
        .out
        .clone()
        .or_else(|| cfg.str("out").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."));

    let text = std::fs::read_to_string(&input)
        .map_err(|e| Failure::config(format!("cannot read {}: {e}", input.display())))?;
    let spectra = io::spectra_from_json(&text).map_err(|e| Failure::config(e.to_string()))?;

    std::fs::create_dir_all(&out)?;
    let rt = match roundtrip(&spectra, cutoff, kappa) {
        Ok(rt) => rt,
        Err(e @ (Error::NoMinimum | Error::NoConfinement(_))) => {
            let status = match &e {
                Error::NoMinimum => "NoMinimum",
                _ => "NoConfinement",
            };
            let report = json!({
                "status": status,
                "error": e.to_string(),
                "num_states": spectra.num_states(),
                "svd_cutoff": cutoff,
                "kappa": kappa,
                "fom_limit": fom_limit,
            });
            io::write_text(
                &out.join("inversion.json"),
                &io::to_json(&report).map_err(|je| Failure::config(je.to_string()))?,
            )
            .map_err(|we| Failure::config(we.to_string()))?;
            return Err(Failure::breakdown(format!(
                "inversion produced no well ({status}): {e}"
            )));
        }
        Err(e) => return Err(Failure::config(e.to_string())),
    };

    let n = spectra.num_states();
    let usable = rt.fom < fom_limit;
    let status = if usable { "Ok" } else { "FomLimit" };
    let response = beta_intrinsic(&rt.spectra);
    let report = json!({
        "status": status,
        "fom": rt.fom,
        "fom_normalized": normalized_fom(rt.fom, n),
        "fom_limit": fom_limit,
        "num_states": n,
        "svd_cutoff": cutoff,
        "kappa": kappa,
        "coefficients": rt.potential.coeffs,
        "scale_free_coefficients": rt.solution.scale_free_coeffs,
        "singular_values": rt.solution.singular_values,
        "effective_rank": rt.solution.effective_rank,
        "residual_norm": rt.solution.residual_norm,
        "expansion_center": rt.potential.center,
        "domain": {
            "minimum_x": rt.domain.minimum_x,
            "x_left": rt.domain.x_left,
            "x_right": rt.domain.x_right,
            "boundary_value_ratio": rt.domain.boundary_value_ratio,
        },
        "response": response,
    });
    io::write_text(
        &out.join("inversion.json"),
        &io::to_json(&report).map_err(|e| Failure::config(e.to_string()))?,
    )
    .map_err(|e| Failure::config(e.to_string()))?;
    io::write_text(
        &out.join("reconstructed_spectra.json"),
        &io::spectra_to_json(&rt.spectra),
    )
    .map_err(|e| Failure::config(e.to_string()))?;
    io::write_text(
        &out.join("potential.csv"),
        &io::potential_samples_csv(&rt.potential, (rt.domain.x_left, rt.domain.x_right), 401),
    )
    .map_err(|e| Failure::config(e.to_string()))?;

    println!(
        "figure of merit {} (normalized {}), rank {}/{}",
        sci9(rt.fom),
        sci9(normalized_fom(rt.fom, n)),
        rt.solution.effective_rank,
        rt.solution.singular_values.len()
    );
    println!(
        "well: minimum at {}, walls [{}, {}]",
        sci9(rt.domain.minimum_x),
        sci9(rt.domain.x_left),
        sci9(rt.domain.x_right)
    );
    println!("beta_int of reconstruction: {}", sci9(response.beta_int));

    if usable {
        Ok(())
    } else {
        Err(Failure::breakdown(format!(
            "reconstruction figure of merit {} is at or above the limit {} — \
             no faithful well (diagnostics in inversion.json)",
            sci9(rt.fom),
            sci9(fom_limit)
        )))
    }
}
