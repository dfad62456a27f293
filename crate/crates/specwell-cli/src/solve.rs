//! `specwell solve` — forward eigenproblem for one potential.
//!
//! Writes into `--out`:
//!
//! * `spectra.json` — energies + dipole matrix in the documented format
//!   (the file `invert` consumes);
//! * `wavefunctions.csv` — `x, psi_0 … psi_{K−1}` over the grid;
//! * `solve_summary.json` — potential echo, grid actually used, energies,
//!   the ground-row sum-rule residual as a quality diagnostic, and (for
//!   `halfpower --eta 2`) the equivalent clipped-oscillator frequency √2.

use std::path::PathBuf;

use clap::Args;
use serde_json::json;
use specwell::eigensolver::{auto_grid, extract_spectra, solve, GridSpec, PotentialSpec};
use specwell::io;
use specwell::spectra::trk_residual;

use crate::config::{parse_f64, FileConfig};
use crate::{sci9, Failure};

#[derive(Args)]
pub struct SolveArgs {
    /// Potential family: qho | cqho | halfpower | poly | table
    #[arg(long)]
    potential: Option<String>,

    /// Oscillator frequency ω for qho/cqho [default: 1]
    #[arg(long)]
    omega: Option<f64>,

    /// Exponent η for halfpower [default: 2]
    #[arg(long)]
    eta: Option<f64>,

    /// Polynomial coefficients a_0,a_1,… (comma-separated) for poly
    #[arg(long, allow_hyphen_values = true)]
    coeffs: Option<String>,

    /// Expansion center for poly [default: 0]
    #[arg(long, allow_negative_numbers = true)]
    center: Option<f64>,

    /// Hard walls xl:xr for poly [default: none]
    #[arg(long, allow_hyphen_values = true)]
    walls: Option<String>,

    /// CSV of x,V(x) samples (strictly ascending x) for table
    #[arg(long)]
    table: Option<PathBuf>,

    /// Number of states to resolve [default: 6]
    #[arg(long)]
    states: Option<usize>,

    /// Grid left edge (explicit grid: give all of xmin/xmax/points;
    /// omit all three for the automatic grid policy: domain doubled until
    /// the walls clear κ·E_top, then 512 points per shortest wavelength)
    #[arg(long, allow_negative_numbers = true)]
    xmin: Option<f64>,

    /// Grid right edge (see --xmin)
    #[arg(long, allow_negative_numbers = true)]
    xmax: Option<f64>,

    /// Grid point count (see --xmin)
    #[arg(long)]
    points: Option<usize>,

    /// Wall-clearance factor κ for the automatic grid [default: 10]
    #[arg(long)]
    kappa: Option<f64>,

    /// Output directory [default: .]
    #[arg(long)]
    out: Option<PathBuf>,

    /// Key-value config file; flags given here win over it
    #[arg(long)]
    config: Option<PathBuf>,
}

/// Parse `xl:xr` walls.
fn parse_walls(v: &str) -> Result<(f64, f64), Failure> {
    let Some((l, r)) = v.split_once(':') else {
        return Err(Failure::config(format!(
            "walls: expected xl:xr, got {v:?}"
        )));
    };
    Ok((parse_f64("walls (left)", l.trim())?, parse_f64("walls (right)", r.trim())?))
}

/// Parse a comma-separated coefficient list.
fn parse_coeffs(v: &str) -> Result<Vec<f64>, Failure> {
    v.split(',')
        .map(|c| parse_f64("coeffs", c.trim()))
        .collect()
}

pub fn run(args: &SolveArgs) -> Result<(), Failure> {
    let cfg = FileConfig::load(args.config.as_deref())?;

    let kind = args
        .potential
        .clone()
        .or_else(|| cfg.str("solve.potential").map(ToOwned::to_owned))
        .ok_or_else(|| Failure::config("missing --potential (qho | cqho | halfpower | poly | table)".into()))?;
    let omega = match args.omega.or(cfg.f64("solve.omega")?) {
        Some(w) => w,
        None => 1.0,
    };
    let eta = match args.eta.or(cfg.f64("solve.eta")?) {
        Some(e) => e,
        None => 2.0,
    };
    let num_states = args.states.or(cfg.usize("solve.states")?).unwrap_or(6);
    let kappa = match args.kappa.or(cfg.f64("solve.kappa")?) {
        Some(k) => k,
        None => 10.0,
    };
    let out = args
        .out
        .clone()
        .or_else(|| cfg.str("out").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."));

    let (potential, echo) = match kind.as_str() {
        "qho" => (
            PotentialSpec::Harmonic { omega },
            json!({"kind": "qho", "omega": omega}),
        ),
        "cqho" => (
            PotentialSpec::ClippedHarmonic { omega },
            json!({"kind": "cqho", "omega": omega}),
        ),
        "halfpower" => (
            PotentialSpec::HalfPower { eta },
            json!({"kind": "halfpower", "eta": eta}),
        ),
        "poly" => {
            let raw = args
                .coeffs
                .clone()
                .or_else(|| cfg.str("solve.coeffs").map(ToOwned::to_owned))
                .ok_or_else(|| Failure::config("poly potential needs --coeffs a_0,a_1,…".into()))?;
            let coeffs = parse_coeffs(&raw)?;
            let center = match args.center.or(cfg.f64("solve.center")?) {
                Some(c) => c,
                None => 0.0,
            };
            let walls = args
                .walls
                .clone()
                .or_else(|| cfg.str("solve.walls").map(ToOwned::to_owned));
            let boundaries = walls.as_deref().map(parse_walls).transpose()?;
            (
                PotentialSpec::Polynomial {
                    coeffs: coeffs.clone(),
                    center,
                    boundaries,
                },
                json!({
                    "kind": "poly",
                    "coeffs": coeffs,
                    "center": center,
                    "walls": boundaries.map(|(l, r)| vec![l, r]),
                }),
            )
        }
        "table" => {
            let path = args
                .table
                .clone()
                .or_else(|| cfg.str("solve.table").map(PathBuf::from))
                .ok_or_else(|| Failure::config("table potential needs --table FILE".into()))?;
            let spec = io::read_tabulated_csv(&path)
                .map_err(|e| Failure::config(e.to_string()))?;
            (spec, json!({"kind": "table", "path": path.display().to_string()}))
        }
        other => {
            return Err(Failure::config(format!(
                "unknown potential {other:?} (expected qho | cqho | halfpower | poly | table)"
            )))
        }
    };
    potential
        .validate()
        .map_err(|e| Failure::config(e.to_string()))?;

    let xmin = args.xmin.or(cfg.f64("solve.xmin")?);
    let xmax = args.xmax.or(cfg.f64("solve.xmax")?);
    let points = args.points.or(cfg.usize("solve.points")?);
    let (grid, auto) = match (xmin, xmax, points) {
        (None, None, None) => (
            auto_grid(&potential, num_states, kappa).map_err(|e| Failure::from_solver_error(&e))?,
            true,
        ),
        (Some(x_min), Some(x_max), Some(num_points)) => {
            let g = GridSpec {
                x_min,
                x_max,
                num_points,
            };
            g.validate().map_err(|e| Failure::config(e.to_string()))?;
            (g, false)
        }
        _ => {
            return Err(Failure::config(
                "explicit grids need all of --xmin/--xmax/--points (omit all three for the automatic grid)".into(),
            ))
        }
    };

    let sol = solve(&potential, &grid, num_states).map_err(|e| Failure::from_solver_error(&e))?;
    let spectra = extract_spectra(&sol, num_states).map_err(|e| Failure::config(e.to_string()))?;
    let s00 = trk_residual(&spectra)[0];

    // η = 2 *is* the clipped oscillator at ω = √2; note the equivalence so
    // downstream tooling can compare against the closed-form ladder.
    let omega_equivalent = match &potential {
        PotentialSpec::HalfPower { eta } if (*eta - 2.0).abs() < 1e-12 => {
            Some(2.0_f64.sqrt())
        }
        _ => None,
    };

    std::fs::create_dir_all(&out)?;
    io::write_text(&out.join("spectra.json"), &io::spectra_to_json(&spectra))
        .map_err(|e| Failure::config(e.to_string()))?;
    io::write_text(&out.join("wavefunctions.csv"), &io::wavefunctions_to_csv(&sol))
        .map_err(|e| Failure::config(e.to_string()))?;
    let summary = json!({
        "potential": echo,
        "grid": {
            "x_min": grid.x_min,
            "x_max": grid.x_max,
            "num_points": grid.num_points,
            "spacing": grid.h(),
            "automatic": auto,
            "kappa": if auto { Some(kappa) } else { None },
        },
        "num_states": num_states,
        "energies": spectra.energies(),
        "trk_ground_row_residual": s00,
        "omega_equivalent": omega_equivalent,
    });
    io::write_text(
        &out.join("solve_summary.json"),
        &io::to_json(&summary).map_err(|e| Failure::config(e.to_string()))?,
    )
    .map_err(|e| Failure::config(e.to_string()))?;

    println!(
        "grid [{}, {}] × {} ({})",
        sci9(grid.x_min),
        sci9(grid.x_max),
        grid.num_points,
        if auto { "automatic" } else { "explicit" }
    );
    println!("{:>3}  {:>16}  {:>16}", "n", "energy", "x_0n");
    for n in 0..num_states {
        println!(
            "{n:>3}  {:>16}  {:>16}",
            sci9(spectra.energy(n)),
            sci9(spectra.x(0, n))
        );
    }
    println!("ground-row sum-rule residual: {}", sci9(s00));
    if let Some(w) = omega_equivalent {
        println!("equivalent clipped oscillator: omega = {}", sci9(w));
    }
    Ok(())
}
