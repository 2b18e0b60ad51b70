//! Evaluation settings shared by the library entry points and the CLI.
//!
//! Defaults can be overridden by a plain `key = value` file whose path is
//! given in the `QEULER_CONFIG` environment variable. Blank lines and lines
//! starting with `#` are ignored.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::padic::PadicSettings;

pub const CONFIG_ENV: &str = "QEULER_CONFIG";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Csv,
    Plain,
}

impl FromStr for OutputFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            "plain" => Ok(OutputFormat::Plain),
            other => Err(Error::Parse(format!("unknown output format '{other}'"))),
        }
    }
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OutputFormat::Json => "json",
            OutputFormat::Csv => "csv",
            OutputFormat::Plain => "plain",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalConfig {
    /// Comparison tolerance for cross-checks and reported agreement.
    pub tol: f64,
    /// Relative truncation target of the regularized series.
    pub series_tol: f64,
    /// Hard cap on series terms.
    pub max_terms: usize,
    /// `|1 + w q^h|` below this is treated as a pole.
    pub pole_tol: f64,
    pub padic_prime: u64,
    pub padic_precision: u32,
    pub padic_level_cap: u32,
    /// Valuation to which p-adic results must be known.
    pub padic_target: u32,
    pub output: OutputFormat,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig {
            tol: 1e-10,
            series_tol: 1e-15,
            max_terms: 1_000_000,
            pole_tol: 1e-8,
            padic_prime: 3,
            padic_precision: 16,
            padic_level_cap: crate::padic::DEFAULT_LEVEL_CAP,
            padic_target: 8,
            output: OutputFormat::Json,
        }
    }
}

fn parse_value<T: FromStr>(key: &str, value: &str) -> Result<T>
where
    T::Err: fmt::Display,
{
    value.parse::<T>().map_err(|e| Error::Parse(format!("config key '{key}': {e}")))
}

impl EvalConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0) || !(self.series_tol > 0.0) || !(self.pole_tol > 0.0) {
            return Err(Error::OutOfRange("tolerances must be positive".into()));
        }
        if self.max_terms == 0 {
            return Err(Error::OutOfRange("max_terms must be positive".into()));
        }
        crate::padic::PadicInt::one(self.padic_prime, self.padic_precision)?;
        if self.padic_level_cap == 0 {
            return Err(Error::OutOfRange("padic_level_cap must be positive".into()));
        }
        Ok(())
    }

    /// Apply `key = value` overrides on top of `self`.
    pub fn apply_overrides(mut self, text: &str) -> Result<Self> {
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("config line {}: expected key = value", lineno + 1)))?;
            let (key, value) = (key.trim(), value.trim());
            match key {
                "tol" => self.tol = parse_value(key, value)?,
                "series_tol" => self.series_tol = parse_value(key, value)?,
                "max_terms" => self.max_terms = parse_value(key, value)?,
                "pole_tol" => self.pole_tol = parse_value(key, value)?,
                "padic_prime" => self.padic_prime = parse_value(key, value)?,
                "padic_precision" => self.padic_precision = parse_value(key, value)?,
                "padic_level_cap" => self.padic_level_cap = parse_value(key, value)?,
                "padic_target" => self.padic_target = parse_value(key, value)?,
                "output" => self.output = value.parse()?,
                other => return Err(Error::Parse(format!("unknown config key '{other}'"))),
            }
        }
        self.validate()?;
        Ok(self)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text =
            std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("reading {}: {e}", path.display())))?;
        EvalConfig::default().apply_overrides(&text)
    }

    /// Defaults, overridden by the file named in `QEULER_CONFIG` if set.
    pub fn from_env() -> Result<Self> {
        match std::env::var_os(CONFIG_ENV) {
            Some(path) => Self::from_file(Path::new(&path)),
            None => Ok(EvalConfig::default()),
        }
    }

    /// p-adic settings for a twist of order `p^twist_exponent`.
    pub fn padic_settings(&self, twist_exponent: u32) -> PadicSettings {
        let mut s = PadicSettings::new(self.padic_prime, self.padic_precision, twist_exponent, self.padic_target);
        s.level_cap = self.padic_level_cap;
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        let cfg = EvalConfig::default();
        cfg.validate().unwrap();
        assert_eq!(cfg.tol, 1e-10);
        assert_eq!(cfg.max_terms, 1_000_000);
        assert_eq!(cfg.padic_level_cap, 12);
    }

    #[test]
    fn overrides() {
        let cfg =
            EvalConfig::default().apply_overrides("# comment\n tol = 1e-6\noutput=csv\n\npadic_prime = 5\n").unwrap();
        assert_eq!(cfg.tol, 1e-6);
        assert_eq!(cfg.output, OutputFormat::Csv);
        assert_eq!(cfg.padic_prime, 5);
    }

    #[test]
    fn bad_overrides() {
        let base = EvalConfig::default;
        assert!(base().apply_overrides("tol = -1").is_err());
        assert!(base().apply_overrides("padic_prime = 4").is_err());
        assert!(base().apply_overrides("colour = blue").is_err());
        assert!(base().apply_overrides("tol").is_err());
    }
}
