//! The flat key-value config file.
//!
//! Format: one `key = value` per line, `#` starts a comment line, blank
//! lines are ignored. Keys use dotted sections matching the subcommand that
//! consumes them (`solve.omega`, `scan.seed`, …) plus the two top-level
//! keys `out` and `threads`. Values are raw strings; each consumer parses
//! its own type and reports the offending key on failure.
//!
//! Rules, in order of precedence:
//!
//! 1. a command-line flag always wins over the file;
//! 2. a key present in the file wins over the built-in default;
//! 3. an *unknown* key anywhere in the file is an error (typos must not
//!    silently fall back to defaults);
//! 4. a *duplicated* key is an error (two values for one knob is a merge
//!    conflict, not a preference).

use std::collections::BTreeMap;
use std::path::Path;

use crate::Failure;

/// Every key the config file may contain. Keys for subcommands other than
/// the one being run are legal (one file can drive a whole study); unknown
/// keys are not.
const KNOWN_KEYS: &[&str] = &[
    "out",
    "threads",
    "solve.potential",
    "solve.omega",
    "solve.eta",
    "solve.coeffs",
    "solve.center",
    "solve.walls",
    "solve.table",
    "solve.states",
    "solve.xmin",
    "solve.xmax",
    "solve.points",
    "solve.kappa",
    "invert.input",
    "invert.cutoff",
    "invert.kappa",
    "invert.fom_limit",
    "scan.kind",
    "scan.family",
    "scan.seed",
    "scan.samples",
    "scan.states",
    "scan.omega_log10_min",
    "scan.omega_log10_max",
    "scan.cutoff",
    "scan.kappa",
    "scan.nmin",
    "scan.nmax",
    "scan.eta",
    "scan.levels",
    "scan.trials",
    "scan.epsilon",
    "scan.pattern",
];

/// Parsed config file; an empty one when no `--config` was given.
#[derive(Debug, Default)]
pub struct FileConfig {
    map: BTreeMap<String, String>,
}

impl FileConfig {
    /// Load and validate `path`, or return the empty config for `None`.
    ///
    /// # Errors
    ///
    /// Unreadable file, a line without `=`, an unknown key, or a duplicated
    /// key — all exit-code-1 config failures naming the problem.
    pub fn load(path: Option<&Path>) -> Result<Self, Failure> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = std::fs::read_to_string(path).map_err(|e| {
            Failure::config(format!("cannot read config {}: {e}", path.display()))
        })?;
        let mut map = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(Failure::config(format!(
                    "config line {}: expected `key = value`, got {line:?}",
                    lineno + 1
                )));
            };
            let key = key.trim().to_owned();
            if !KNOWN_KEYS.contains(&key.as_str()) {
                return Err(Failure::config(format!(
                    "config line {}: unknown key {key:?}",
                    lineno + 1
                )));
            }
            if map.insert(key.clone(), value.trim().to_owned()).is_some() {
                return Err(Failure::config(format!(
                    "config line {}: key {key:?} given twice",
                    lineno + 1
                )));
            }
        }
        Ok(Self { map })
    }

    /// Raw string value, if the file set this key.
    #[must_use]
    pub fn str(&self, key: &str) -> Option<&str> {
        debug_assert!(KNOWN_KEYS.contains(&key), "consumer asked for unlisted key {key}");
        self.map.get(key).map(String::as_str)
    }

    /// Typed lookup through the shared flag parsers.
    pub fn f64(&self, key: &str) -> Result<Option<f64>, Failure> {
        self.str(key).map(|v| parse_f64(key, v)).transpose()
    }

    pub fn usize(&self, key: &str) -> Result<Option<usize>, Failure> {
        self.str(key).map(|v| parse_usize(key, v)).transpose()
    }

    pub fn u64(&self, key: &str) -> Result<Option<u64>, Failure> {
        self.str(key)
            .map(|v| {
                v.parse::<u64>().map_err(|_| {
                    Failure::config(format!("{key}: expected an unsigned integer, got {v:?}"))
                })
            })
            .transpose()
    }
}

/// Parse a float, naming the offending knob on failure.
pub fn parse_f64(key: &str, v: &str) -> Result<f64, Failure> {
    v.parse::<f64>()
        .map_err(|_| Failure::config(format!("{key}: expected a number, got {v:?}")))
}

/// Parse a count, naming the offending knob on failure.
pub fn parse_usize(key: &str, v: &str) -> Result<usize, Failure> {
    v.parse::<usize>()
        .map_err(|_| Failure::config(format!("{key}: expected a count, got {v:?}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn write_cfg(text: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().expect("tempfile");
        f.write_all(text.as_bytes()).expect("write");
        f
    }

    #[test]
    fn parses_comments_blanks_and_values() {
        let f = write_cfg("# a study\n\nscan.seed = 42\nout = results\n");
        let cfg = FileConfig::load(Some(f.path())).expect("valid config");
        assert_eq!(cfg.str("scan.seed"), Some("42"));
        assert_eq!(cfg.str("out"), Some("results"));
        assert_eq!(cfg.str("scan.kind"), None);
    }

    #[test]
    fn rejects_unknown_keys() {
        let f = write_cfg("scan.sede = 42\n");
        let err = FileConfig::load(Some(f.path())).expect_err("typo must not pass");
        assert!(
            err.message.contains("unknown key") && err.message.contains("scan.sede"),
            "message should name the bad key: {}",
            err.message
        );
        assert_eq!(err.code, 1);
    }

    #[test]
    fn rejects_duplicates_and_bare_lines() {
        let f = write_cfg("scan.seed = 1\nscan.seed = 2\n");
        let err = FileConfig::load(Some(f.path())).expect_err("duplicate");
        assert!(err.message.contains("twice"), "got: {}", err.message);

        let f = write_cfg("scan.seed\n");
        let err = FileConfig::load(Some(f.path())).expect_err("no equals sign");
        assert!(err.message.contains("key = value"), "got: {}", err.message);
    }

    #[test]
    fn typed_getters_name_the_key() {
        let f = write_cfg("solve.omega = fast\n");
        let cfg = FileConfig::load(Some(f.path())).expect("schema-valid");
        let err = cfg.f64("solve.omega").expect_err("not a number");
        assert!(
            err.message.contains("solve.omega"),
            "got: {}",
            err.message
        );
    }
}
