//! File formats and atomic emission.
//!
//! Three rules govern every artifact this crate writes:
//!
//! 1. **Full precision.** Floating-point values in machine-readable output
//!    carry 17 significant digits (`d.dddddddddddddddde±x`), the shortest
//!    count that round-trips every IEEE double bit-exactly. Human tables are
//!    the CLI's business, not this module's.
//! 2. **Fixed layouts.** CSV headers and JSON key orders are part of the
//!    contract and never depend on configuration: scan records are
//!    `sample,omega,fom,fom_norm,beta_int,status`; spectra documents are
//!    `{"energies": […], "dipole": [[…], …]}`.
//! 3. **All or nothing.** Files are written to a hidden temp name in the
//!    target directory, synced, then renamed into place — a crash mid-write
//!    leaves the destination absent or intact, never truncated.
//!
//! Non-finite values: CSV spells them `inf`/`-inf` (a failed trial's figure
//! of merit); JSON has no such literals, so they render as `null`.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::eigensolver::{EigenSolution, PotentialSpec};
use crate::error::{Error, Result};
use crate::inverse::PolynomialPotential;
use crate::pipelines::ScanRecord;
use crate::spectra::SpectralData;

/// Format one float at 17 significant digits (bit-exact round trip).
/// Non-finite values print as `inf`, `-inf`, or `nan`.
#[must_use]
pub fn fmt_f64(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else if v.is_nan() {
        "nan".into()
    } else if v > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

fn render_json(v: &Value, indent: usize, out: &mut String) {
    const STEP: &str = "  ";
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                out.push_str(&i.to_string());
            } else if let Some(u) = n.as_u64() {
                out.push_str(&u.to_string());
            } else {
                // `Value` holds no non-finite floats (they become Null at
                // construction), so this is always a plain double.
                out.push_str(&fmt_f64(n.as_f64().expect("numeric JSON node")));
            }
        }
        Value::String(s) => {
            out.push_str(&serde_json::to_string(s).expect("strings always serialize"));
        }
        Value::Array(items) => {
            if items.is_empty() {
                out.push_str("[]");
                return;
            }
            out.push('[');
            for (k, item) in items.iter().enumerate() {
                out.push('\n');
                out.push_str(&STEP.repeat(indent + 1));
                render_json(item, indent + 1, out);
                if k + 1 < items.len() {
                    out.push(',');
                }
            }
            out.push('\n');
            out.push_str(&STEP.repeat(indent));
            out.push(']');
        }
        Value::Object(map) => {
            if map.is_empty() {
                out.push_str("{}");
                return;
            }
            out.push('{');
            for (k, (key, item)) in map.iter().enumerate() {
                out.push('\n');
                out.push_str(&STEP.repeat(indent + 1));
                out.push_str(&serde_json::to_string(key).expect("keys always serialize"));
                out.push_str(": ");
                render_json(item, indent + 1, out);
                if k + 1 < map.len() {
                    out.push(',');
                }
            }
            out.push('\n');
            out.push_str(&STEP.repeat(indent));
            out.push('}');
        }
    }
}

/// Serialize any value to pretty JSON with every float at 17 significant
/// digits and keys in declaration order. Ends with a newline.
///
/// # Errors
///
/// `Json` if the value cannot be represented as a JSON tree.
pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let tree = serde_json::to_value(value)?;
    let mut out = String::new();
    render_json(&tree, 0, &mut out);
    out.push('\n');
    Ok(out)
}

#[derive(Serialize, Deserialize)]
struct SpectraFile {
    energies: Vec<f64>,
    dipole: Vec<Vec<f64>>,
}

/// Render spectra as the documented JSON layout
/// `{"energies": […], "dipole": [[…], …]}` (dipole in row order).
#[must_use]
pub fn spectra_to_json(s: &SpectralData) -> String {
    let n = s.num_states();
    let file = SpectraFile {
        energies: (0..n).map(|i| s.energy(i)).collect(),
        dipole: (0..n)
            .map(|i| (0..n).map(|j| s.x(i, j)).collect())
            .collect(),
    };
    to_json(&file).expect("spectra are plain finite arrays")
}

/// Parse a spectra JSON document and validate it into [`SpectralData`].
///
/// # Errors
///
/// `Json` for malformed JSON; `InvalidSpectra` naming the first violated
/// invariant (ragged rows, asymmetry, non-ascending energies…).
pub fn spectra_from_json(text: &str) -> Result<SpectralData> {
    let file: SpectraFile = serde_json::from_str(text)?;
    let n = file.energies.len();
    if file.dipole.len() != n {
        return Err(Error::InvalidSpectra(format!(
            "dipole has {} rows for {n} energies",
            file.dipole.len()
        )));
    }
    let mut flat = Vec::with_capacity(n * n);
    for (i, row) in file.dipole.iter().enumerate() {
        if row.len() != n {
            return Err(Error::InvalidSpectra(format!(
                "dipole row {i} has {} entries, expected {n}",
                row.len()
            )));
        }
        flat.extend_from_slice(row);
    }
    SpectralData::new(file.energies, flat)
}

/// Render scan records as CSV under the fixed header
/// `sample,omega,fom,fom_norm,beta_int,status`. Optional fields leave their
/// cell empty; infinite figures of merit print as `inf`.
#[must_use]
pub fn records_to_csv(records: &[ScanRecord]) -> String {
    let mut out = String::from("sample,omega,fom,fom_norm,beta_int,status\n");
    for r in records {
        let opt = |v: Option<f64>| v.map(fmt_f64).unwrap_or_default();
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.sample,
            opt(r.omega),
            fmt_f64(r.fom),
            fmt_f64(r.fom_norm),
            opt(r.beta_int),
            r.status
        ));
    }
    out
}

/// Render a grid solution's wavefunctions as CSV: first column `x`, one
/// column `psi_k` per state. Rows run over grid points, so the file plots
/// directly.
#[must_use]
pub fn wavefunctions_to_csv(sol: &EigenSolution) -> String {
    let xs = sol.grid.points();
    let k = sol.num_states();
    let mut out = String::from("x");
    for state in 0..k {
        out.push_str(&format!(",psi_{state}"));
    }
    out.push('\n');
    for (j, &x) in xs.iter().enumerate() {
        out.push_str(&fmt_f64(x));
        for psi in &sol.wavefunctions {
            out.push(',');
            out.push_str(&fmt_f64(psi[j]));
        }
        out.push('\n');
    }
    out
}

/// Sample a reconstructed polynomial over `[lo, hi]` into two-column CSV
/// (`x,v`) for plotting. The walls are *not* applied — this samples the bare
/// polynomial, which is what one overlays against a reference well.
///
/// # Panics
///
/// When the range is not finite and ascending, or `num_points < 2`.
#[must_use]
pub fn potential_samples_csv(p: &PolynomialPotential, range: (f64, f64), num_points: usize) -> String {
    let (lo, hi) = range;
    assert!(
        lo.is_finite() && hi.is_finite() && lo < hi,
        "sampling range must be finite and ascending, got [{lo}, {hi}]"
    );
    assert!(num_points >= 2, "need at least two sample points");
    let mut out = String::from("x,v\n");
    let h = (hi - lo) / (num_points - 1) as f64;
    for i in 0..num_points {
        let x = if i + 1 == num_points { hi } else { lo + h * i as f64 };
        out.push_str(&fmt_f64(x));
        out.push(',');
        out.push_str(&fmt_f64(p.evaluate_unbounded(x)));
        out.push('\n');
    }
    out
}

/// Parse a two-column CSV (`x, V`) into a tabulated potential. A first row
/// that does not parse as two numbers is treated as a header and skipped;
/// any later non-numeric row is an error. Sample positions must be strictly
/// ascending.
///
/// # Errors
///
/// `InvalidConfig` naming the offending row; `Io` for file problems.
pub fn parse_tabulated_csv(text: &str) -> Result<PotentialSpec> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(text.as_bytes());
    let mut xs: Vec<f64> = Vec::new();
    let mut vs: Vec<f64> = Vec::new();
    for (row, record) in reader.records().enumerate() {
        let record = record.map_err(|e| {
            Error::InvalidConfig(format!("tabulated potential row {row}: {e}"))
        })?;
        if record.len() == 1 && record[0].is_empty() {
            continue; // blank line
        }
        if record.len() != 2 {
            return Err(Error::InvalidConfig(format!(
                "tabulated potential row {row} has {} fields, expected 2 (x, V)",
                record.len()
            )));
        }
        match (record[0].parse::<f64>(), record[1].parse::<f64>()) {
            (Ok(x), Ok(v)) => {
                if let Some(&last) = xs.last() {
                    if x <= last {
                        return Err(Error::InvalidConfig(format!(
                            "tabulated potential row {row}: x = {x} does not ascend past {last}"
                        )));
                    }
                }
                xs.push(x);
                vs.push(v);
            }
            _ if row == 0 => {} // header line
            _ => {
                return Err(Error::InvalidConfig(format!(
                    "tabulated potential row {row}: fields {:?} are not numbers",
                    (&record[0], &record[1])
                )));
            }
        }
    }
    if xs.len() < 2 {
        return Err(Error::InvalidConfig(format!(
            "tabulated potential needs at least 2 samples, got {}",
            xs.len()
        )));
    }
    Ok(PotentialSpec::TabulatedGrid { x: xs, v: vs })
}

/// [`parse_tabulated_csv`] straight from a file.
///
/// # Errors
///
/// As the parser, plus `Io`.
pub fn read_tabulated_csv(path: &Path) -> Result<PotentialSpec> {
    parse_tabulated_csv(&fs::read_to_string(path)?)
}

/// Write `contents` to `path` atomically: a hidden temp file in the same
/// directory is fully written and synced, then renamed over the target.
/// On any failure the temp file is removed and the destination is left
/// untouched (absent or at its previous content).
///
/// # Errors
///
/// `Io` from the underlying filesystem; `InvalidConfig` for a path with no
/// file name.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let name = path
        .file_name()
        .ok_or_else(|| {
            Error::InvalidConfig(format!("output path {} has no file name", path.display()))
        })?
        .to_string_lossy()
        .into_owned();
    let parent = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    };
    let tmp = parent.join(format!(".{name}.tmp"));
    let written = (|| -> Result<()> {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(contents)?;
        f.sync_all()?;
        Ok(())
    })();
    if let Err(e) = written {
        let _ = fs::remove_file(&tmp);
        return Err(e);
    }
    fs::rename(&tmp, path).map_err(|e| {
        let _ = fs::remove_file(&tmp);
        Error::Io(e)
    })
}

/// [`write_atomic`] for text.
///
/// # Errors
///
/// As [`write_atomic`].
pub fn write_text(path: &Path, text: &str) -> Result<()> {
    write_atomic(path, text.as_bytes())
}
