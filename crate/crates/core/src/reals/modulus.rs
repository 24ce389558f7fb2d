use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A total function `ℕ → ℕ` used as a rate or convergence modulus.
///
/// Evaluation returns the running maximum `max_{k ≤ n} g(k)`, so the
/// wrapped function is always non-decreasing even if `g` is not.
#[derive(Clone)]
pub struct Modulus {
    g: Arc<dyn Fn(u64) -> u64 + Send + Sync>,
    label: String,
}

impl Modulus {
    pub fn from_fn(
        label: impl Into<String>,
        g: impl Fn(u64) -> u64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            g: Arc::new(g),
            label: label.into(),
        }
    }

    /// `n ↦ n + c`.
    pub fn shift(c: u64) -> Self {
        Self::from_fn(format!("shift:{c}"), move |n| n + c)
    }

    /// `n ↦ a·n + b`.
    pub fn linear(a: u64, b: u64) -> Self {
        Self::from_fn(format!("linear:{a},{b}"), move |n| a * n + b)
    }

    /// `n ↦ 2^(n+c)`.
    pub fn pow2(c: u64) -> Self {
        Self::from_fn(format!("pow2:{c}"), move |n| 1u64 << (n + c))
    }

    pub fn at(&self, n: u64) -> u64 {
        (0..=n).map(|k| (self.g)(k)).max().unwrap_or(0)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// `r(0) < r(1) < … < r(n_max)`.
    pub fn check_strictly_increasing(&self, n_max: u64) -> Result<()> {
        for n in 0..n_max {
            if self.at(n + 1) <= self.at(n) {
                return Err(Error::InvalidRate(format!(
                    "{} is not strictly increasing at {n}",
                    self.label
                )));
            }
        }
        Ok(())
    }

    /// Values `r(0), …, r(n_max)`.
    pub fn table(&self, n_max: u64) -> Vec<u64> {
        (0..=n_max).map(|n| self.at(n)).collect()
    }
}

impl fmt::Debug for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Modulus({})", self.label)
    }
}

/// Serializable rate descriptions; short form `shift:2`, `linear:3,1`,
/// `pow2:4`, `dimgap:2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum RateSpec {
    Shift {
        c: u64,
    },
    Linear {
        a: u64,
        b: u64,
    },
    Pow2 {
        c: u64,
    },
    /// `n ↦ (m+2)·n`.
    DimGap {
        m: u64,
    },
}

impl RateSpec {
    pub fn build(&self) -> Modulus {
        match *self {
            RateSpec::Shift { c } => Modulus::shift(c),
            RateSpec::Linear { a, b } => Modulus::linear(a, b),
            RateSpec::Pow2 { c } => Modulus::pow2(c),
            RateSpec::DimGap { m } => Modulus::linear(m + 2, 0),
        }
    }
}

impl FromStr for RateSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidInput(format!("unrecognised rate {s:?}"));
        let (kind, args) = s.split_once(':').ok_or_else(bad)?;
        let nums: Vec<u64> = args
            .split(',')
            .map(|a| a.trim().parse::<u64>().map_err(|_| bad()))
            .collect::<Result<_>>()?;
        match (kind, nums.as_slice()) {
            ("shift", [c]) => Ok(RateSpec::Shift { c: *c }),
            ("linear", [a, b]) => Ok(RateSpec::Linear { a: *a, b: *b }),
            ("pow2", [c]) if *c < 48 => Ok(RateSpec::Pow2 { c: *c }),
            ("dimgap", [m]) => Ok(RateSpec::DimGap { m: *m }),
            _ => Err(bad()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn running_max_enforces_monotonicity() {
        let g = Modulus::from_fn("zigzag", |n| if n % 2 == 0 { n } else { 0 });
        assert_eq!(g.table(5), vec![0, 0, 2, 2, 4, 4]);
    }

    #[test]
    fn parse_rates() {
        assert_eq!(
            "shift:2".parse::<RateSpec>().unwrap().build().table(2),
            vec![2, 3, 4]
        );
        assert_eq!("pow2:3".parse::<RateSpec>().unwrap().build().at(1), 16);
        assert_eq!("dimgap:2".parse::<RateSpec>().unwrap().build().at(5), 20);
        assert!("shift".parse::<RateSpec>().is_err());
        assert!("linear:1".parse::<RateSpec>().is_err());
    }

    #[test]
    fn strictness() {
        assert!(Modulus::shift(2).check_strictly_increasing(10).is_ok());
        assert!(Modulus::linear(0, 3).check_strictly_increasing(2).is_err());
    }
}
