use num_rational::Ratio;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::foundations::BitStream;
use crate::machines::{complexity, Budget, ComplexityStatus, ComplexityValue, PrefixMachine};
use crate::reals::Modulus;

/// `K_M(x↾n)` for `n = 0..=n_max` under one budget.
#[derive(Clone, Debug, Serialize)]
pub struct ComplexityProfile {
    pub machine: String,
    pub budget: Budget,
    pub entries: Vec<(u64, ComplexityValue)>,
}

/// One CSV row: `n, K, status, L, t`; `K` is empty when no witness exists.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProfileRow {
    pub n: u64,
    #[serde(rename = "K")]
    pub k: Option<u64>,
    pub status: ComplexityStatus,
    #[serde(rename = "L")]
    pub max_len: usize,
    pub t: u64,
}

impl ComplexityProfile {
    pub fn value(&self, n: u64) -> Option<&ComplexityValue> {
        self.entries.iter().find(|(m, _)| *m == n).map(|(_, v)| v)
    }

    pub fn rows(&self) -> Vec<ProfileRow> {
        self.entries
            .iter()
            .map(|(n, v)| ProfileRow {
                n: *n,
                k: v.value,
                status: v.status,
                max_len: self.budget.max_len,
                t: self.budget.max_steps,
            })
            .collect()
    }
}

pub fn profile(
    m: &PrefixMachine,
    x: &BitStream,
    n_max: u64,
    budget: &Budget,
) -> Result<ComplexityProfile> {
    let prefix = x.prefix(n_max as usize)?;
    let entries = (0..=n_max)
        .map(|n| Ok((n, complexity(m, &prefix.prefix(n as usize), budget)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(ComplexityProfile {
        machine: m.id().to_string(),
        budget: budget.clone(),
        entries,
    })
}

fn ratio_text<S: Serializer>(r: &Ratio<u64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

/// Window statistics of `K(x↾n)/n`; an estimate over `[n0, n1]`, never a
/// limit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DimEstimate {
    pub window: (u64, u64),
    #[serde(serialize_with = "ratio_text")]
    pub min_ratio: Ratio<u64>,
    #[serde(serialize_with = "ratio_text")]
    pub max_ratio: Ratio<u64>,
    /// Window points whose value is only an upper bound.
    pub upper_bound_points: Vec<u64>,
    /// Window points left out: unknown value, or `n = 0`.
    pub excluded: Vec<u64>,
}

pub fn dim_window(p: &ComplexityProfile, n0: u64, n1: u64) -> Result<DimEstimate> {
    let top = p.entries.last().map_or(0, |(n, _)| *n);
    if n0 > n1 || n1 > top {
        return Err(Error::InvalidInput(format!(
            "window [{n0}, {n1}] outside profile range [0, {top}]"
        )));
    }
    let mut ratios = Vec::new();
    let mut upper_bound_points = Vec::new();
    let mut excluded = Vec::new();
    for (n, v) in p.entries.iter().filter(|(n, _)| (n0..=n1).contains(n)) {
        match (v.value, v.status) {
            (Some(k), status) if *n > 0 && status != ComplexityStatus::Unknown => {
                if status == ComplexityStatus::UpperBound {
                    upper_bound_points.push(*n);
                }
                ratios.push(Ratio::new(k, *n));
            }
            _ => excluded.push(*n),
        }
    }
    let min_ratio = *ratios
        .iter()
        .min()
        .ok_or_else(|| Error::InvalidInput("no usable entries in window".into()))?;
    let max_ratio = *ratios.iter().max().expect("non-empty");
    Ok(DimEstimate {
        window: (n0, n1),
        min_ratio,
        max_ratio,
        upper_bound_points,
        excluded,
    })
}

/// `n ↦ (m+2)·n`: a rate for sequences with `K(x↾n) ≤ (m+1)/(m+2)·n`.
pub fn dim_gap_rate(m: u64) -> Modulus {
    Modulus::from_fn(format!("dimgap:{m}"), move |n| (m + 2) * n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::foundations::bs;
    use crate::machines::repeat_encode;

    #[test]
    fn periodic_profile_is_logarithmic() {
        let x = BitStream::periodic(&bs("01"));
        let p = profile(
            &PrefixMachine::reference(),
            &x,
            64,
            &Budget::new(24, 100_000),
        )
        .unwrap();
        assert_eq!(p.value(0).unwrap().value, Some(2));
        for n in 4..=64u64 {
            let rep = repeat_encode(n, &bs("01")).unwrap().len() as u64;
            assert!(p.value(n).unwrap().value.unwrap() <= rep, "n = {n}");
        }
        // the repeat program for n = 32 has 2·5 + 8 = 18 bits
        let est = dim_window(&p, 32, 64).unwrap();
        assert_eq!(est.max_ratio, Ratio::new(9, 16));
        assert!(dim_window(&p, 36, 64).unwrap().max_ratio <= Ratio::new(1, 2));
        let point = dim_window(&p, 40, 40).unwrap();
        assert_eq!(point.min_ratio, point.max_ratio);
    }

    #[test]
    fn rates() {
        assert_eq!(dim_gap_rate(0).table(3), vec![0, 2, 4, 6]);
        assert_eq!(dim_gap_rate(2).at(5), 20);
    }
}
