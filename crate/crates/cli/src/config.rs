use std::fmt;
use std::str::FromStr;

use ehall_core::kfield::{is_degenerate, KError};
use ehall_core::lattice::Window;
use num_rational::BigRational;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConfigError {
    #[error("window must look like LO..HI with LO <= HI, got {0:?}")]
    Window(String),
    #[error("--sigma and --sigmabar must be given together")]
    HalfPoint,
    #[error("cannot read {0:?} as a rational number")]
    Rational(String),
    #[error(transparent)]
    Field(#[from] KError),
    #[error("unknown format {0:?}; expected text, json or csv")]
    Format(String),
}

/// Where coefficients live: the function field itself or a rational point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FieldMode {
    Symbolic,
    Point(BigRational, BigRational),
}

impl FieldMode {
    pub fn from_flags(sigma: Option<&str>, sigmabar: Option<&str>) -> Result<Self, ConfigError> {
        match (sigma, sigmabar) {
            (None, None) => Ok(FieldMode::Symbolic),
            (Some(s), Some(t)) => {
                let s = parse_rational(s)?;
                let t = parse_rational(t)?;
                if is_degenerate(&s, &t) {
                    return Err(KError::DegenerateSpecialization.into());
                }
                Ok(FieldMode::Point(s, t))
            }
            _ => Err(ConfigError::HalfPoint),
        }
    }
}

impl fmt::Display for FieldMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldMode::Symbolic => write!(f, "symbolic"),
            FieldMode::Point(s, t) => write!(f, "sigma={s}, sigmabar={t}"),
        }
    }
}

fn parse_rational(s: &str) -> Result<BigRational, ConfigError> {
    BigRational::from_str(s.trim()).map_err(|_| ConfigError::Rational(s.to_string()))
}

pub fn parse_window(s: &str) -> Result<Window, ConfigError> {
    let bad = || ConfigError::Window(s.to_string());
    let (lo, hi) = s.split_once("..").ok_or_else(bad)?;
    let lo: i64 = lo.trim().parse().map_err(|_| bad())?;
    let hi: i64 = hi.trim().parse().map_err(|_| bad())?;
    Window::new(lo, hi).map_err(|_| bad())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Text,
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "text" => Ok(Format::Text),
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            _ => Err(ConfigError::Format(s.to_string())),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub field: FieldMode,
    pub window: Window,
    /// Largest rank the shuffle model is prepared for.
    pub rank_bound: usize,
    pub seed: u64,
    /// Worker count; 0 uses every core, 1 runs sequentially.
    pub jobs: usize,
    pub format: Format,
    pub paranoid: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            field: FieldMode::Symbolic,
            window: Window { lo: -2, hi: 2 },
            rank_bound: 6,
            seed: 0,
            jobs: 0,
            format: Format::Text,
            paranoid: false,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn windows() {
        assert_eq!(parse_window("-2..2").unwrap(), Window { lo: -2, hi: 2 });
        assert_eq!(parse_window(" 0 .. 0").unwrap(), Window { lo: 0, hi: 0 });
        assert!(parse_window("2..-2").is_err());
        assert!(parse_window("2").is_err());
    }

    #[test]
    fn field_flags() {
        assert_eq!(FieldMode::from_flags(None, None).unwrap(), FieldMode::Symbolic);
        assert!(matches!(FieldMode::from_flags(Some("2"), Some("3/5")).unwrap(), FieldMode::Point(..)));
        assert_eq!(FieldMode::from_flags(Some("2"), None), Err(ConfigError::HalfPoint));
        assert!(FieldMode::from_flags(Some("1"), Some("3")).is_err());
        assert!(FieldMode::from_flags(Some("x"), Some("3")).is_err());
    }
}
