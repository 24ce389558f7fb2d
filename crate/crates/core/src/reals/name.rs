use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{IncreasingSpec, Modulus};
use crate::error::{Error, Result};
use crate::foundations::Dyadic;

/// How much of a name is known.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Extent {
    /// Defined on all of ℕ.
    Total,
    /// The name itself is finite: its value is the dyadic partial sum.
    Finite(u64),
    /// Only the first terms of a longer name were produced.
    Truncated(u64),
}

/// A name `f: ℕ → ℕ` of a real, `Σ_k 2^-f(k) = x`. Values may repeat.
#[derive(Clone)]
pub struct NameStream {
    f: Arc<dyn Fn(u64) -> u64 + Send + Sync>,
    extent: Extent,
    label: String,
}

impl NameStream {
    pub fn from_fn(
        label: impl Into<String>,
        f: impl Fn(u64) -> u64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            f: Arc::new(f),
            extent: Extent::Total,
            label: label.into(),
        }
    }

    /// An exactly finite name.
    pub fn finite(values: Vec<u64>) -> Self {
        let len = values.len() as u64;
        let label = format!("list({len} terms)");
        Self {
            f: Arc::new(move |k| values[k as usize]),
            extent: Extent::Finite(len),
            label,
        }
    }

    /// The first terms of a name whose continuation is unknown.
    pub fn truncated(values: Vec<u64>) -> Self {
        let len = values.len() as u64;
        let label = format!("prefix({len} terms)");
        Self {
            f: Arc::new(move |k| values[k as usize]),
            extent: Extent::Truncated(len),
            label,
        }
    }

    /// `k ↦ a·k + b`.
    pub fn progression(a: u64, b: u64) -> Self {
        Self::from_fn(format!("ap:{a},{b}"), move |k| a * k + b)
    }

    pub fn extent(&self) -> Extent {
        self.extent
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn is_finite(&self) -> bool {
        matches!(self.extent, Extent::Finite(_))
    }

    /// `f(k)`, or `None` past the end of a finite or truncated name.
    pub fn get(&self, k: u64) -> Option<u64> {
        match self.extent {
            Extent::Finite(n) | Extent::Truncated(n) if k >= n => None,
            _ => Some((self.f)(k)),
        }
    }

    /// Terms `f(0), …, f(T)`. Finite names stop at their end; reading a
    /// truncated name past its known prefix is an error.
    pub fn terms(&self, stage: u64) -> Result<Vec<u64>> {
        match self.extent {
            Extent::Truncated(n) if stage >= n => Err(Error::HorizonExceeded {
                index: stage,
                horizon: n,
            }),
            Extent::Finite(n) => Ok((0..n.min(stage + 1)).map(|k| (self.f)(k)).collect()),
            _ => Ok((0..=stage).map(|k| (self.f)(k)).collect()),
        }
    }

    /// Number of terms actually available, capped at `cap`.
    pub fn available(&self, cap: u64) -> u64 {
        match self.extent {
            Extent::Total => cap,
            Extent::Finite(n) | Extent::Truncated(n) => n.min(cap),
        }
    }
}

impl fmt::Debug for NameStream {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("NameStream")
            .field("label", &self.label)
            .field("extent", &self.extent)
            .finish()
    }
}

/// `Σ_{k ≤ T} 2^-f(k)`, failing as soon as the running sum exceeds 1.
pub fn partial_sum(f: &NameStream, stage: u64) -> Result<Dyadic> {
    let one = Dyadic::one();
    let mut sum = Dyadic::zero();
    for (k, v) in f.terms(stage)?.into_iter().enumerate() {
        sum += &Dyadic::pow2_neg(v);
        if sum > one {
            return Err(Error::InvalidName { term: k as u64 });
        }
    }
    Ok(sum)
}

/// `u_f(m)` for the terms `f(0), …, f(T)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiplicityTable {
    pub counts: BTreeMap<u64, u64>,
    pub stage: u64,
}

impl MultiplicityTable {
    pub fn from_values(values: &[u64], stage: u64) -> Self {
        let mut counts = BTreeMap::new();
        for &v in values {
            *counts.entry(v).or_insert(0) += 1;
        }
        Self { counts, stage }
    }

    pub fn count(&self, m: u64) -> u64 {
        self.counts.get(&m).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    /// `Σ_m u(m)·2^-m` over the whole table.
    pub fn weighted_sum(&self) -> Dyadic {
        self.weighted_sum_from(0)
    }

    /// `Σ_{m ≥ m0} u(m)·2^-m`.
    pub fn weighted_sum_from(&self, m0: u64) -> Dyadic {
        self.counts
            .range(m0..)
            .map(|(&m, &c)| Dyadic::pow2_neg(m).scale(c))
            .sum()
    }
}

pub fn multiplicities(f: &NameStream, stage: u64) -> Result<MultiplicityTable> {
    Ok(MultiplicityTable::from_values(&f.terms(stage)?, stage))
}

/// `Σ_{k ≤ T, f(k) ≥ m0} 2^-f(k)`: the stage-`T` lower bound of the tail
/// of the rearranged series from `m0` on.
pub fn tail_weight(f: &NameStream, m0: u64, stage: u64) -> Result<Dyadic> {
    Ok(f.terms(stage)?
        .into_iter()
        .filter(|&v| v >= m0)
        .map(Dyadic::pow2_neg)
        .sum())
}

/// Outcome of checking a convergence certificate at a finite stage.
/// Refutation is final; consistency only holds relative to the stage.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "kebab-case")]
pub enum CertificateCheck {
    Consistent {
        n: u64,
        stage: u64,
        tail: Dyadic,
    },
    Refuted {
        n: u64,
        stage: u64,
        tail: Dyadic,
        bound: Dyadic,
    },
}

impl CertificateCheck {
    pub fn is_refuted(&self) -> bool {
        matches!(self, CertificateCheck::Refuted { .. })
    }
}

/// Checks `Σ_{k ≥ r(n)} u_f(k)·2^-k ≤ 2^-n` against the terms seen by
/// stage `T`.
pub fn roc_certificate_check(
    f: &NameStream,
    r: &Modulus,
    n: u64,
    stage: u64,
) -> Result<CertificateCheck> {
    let tail = tail_weight(f, r.at(n), stage)?;
    let bound = Dyadic::pow2_neg(n);
    Ok(if tail > bound {
        CertificateCheck::Refuted {
            n,
            stage,
            tail,
            bound,
        }
    } else {
        CertificateCheck::Consistent { n, stage, tail }
    })
}

/// Serializable name descriptions; short form `ap:a,b` or `list:v,v,…`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum NameSpec {
    List { values: Vec<u64> },
    Ap { a: u64, b: u64 },
    Blocks { stream: IncreasingSpec, steps: u64 },
}

impl NameSpec {
    pub fn build(&self) -> Result<NameStream> {
        match self {
            NameSpec::List { values } => Ok(NameStream::finite(values.clone())),
            NameSpec::Ap { a, b } => Ok(NameStream::progression(*a, *b)),
            NameSpec::Blocks { stream, steps } => {
                Ok(super::name_from_increasing(&stream.build()?, *steps)?.name)
            }
        }
    }
}

impl FromStr for NameSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidInput(format!("unrecognised name {s:?}"));
        let (kind, args) = s.split_once(':').ok_or_else(bad)?;
        let nums: Vec<u64> = if args.is_empty() {
            Vec::new()
        } else {
            args.split(',')
                .map(|a| a.trim().parse::<u64>().map_err(|_| bad()))
                .collect::<Result<_>>()?
        };
        match (kind, nums.as_slice()) {
            ("ap", [a, b]) => Ok(NameSpec::Ap { a: *a, b: *b }),
            ("list", _) => Ok(NameSpec::List { values: nums }),
            _ => Err(bad()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(s: &str) -> Dyadic {
        s.parse().unwrap()
    }

    #[test]
    fn partial_sum_examples() {
        assert_eq!(
            partial_sum(&NameStream::from_fn("one", |_| 1), 0).unwrap(),
            d("1/2")
        );
        assert_eq!(
            partial_sum(&NameStream::progression(2, 1), 2).unwrap(),
            d("21/32")
        );
        assert_eq!(
            partial_sum(&NameStream::finite(vec![1, 1, 1]), 2),
            Err(Error::InvalidName { term: 2 })
        );
    }

    #[test]
    fn multiplicity_examples() {
        let t = multiplicities(&NameStream::finite(vec![3, 1, 3, 5]), 3).unwrap();
        assert_eq!(
            (t.count(3), t.count(1), t.count(5), t.count(0)),
            (2, 1, 1, 0)
        );
        let t = multiplicities(&NameStream::progression(1, 0), 10).unwrap();
        assert!((0..=10).all(|m| t.count(m) == 1));
        assert_eq!(t.total(), 11);
    }

    #[test]
    fn tail_weight_examples() {
        let f = NameStream::progression(2, 1);
        // exact oracle: odd k with 5 <= k <= 21
        let expected: Dyadic = (5..=21u64).step_by(2).map(Dyadic::pow2_neg).sum();
        assert_eq!(tail_weight(&f, 4, 10).unwrap(), expected);
        assert_eq!(
            tail_weight(&f, 0, 10).unwrap(),
            partial_sum(&f, 10).unwrap()
        );
        assert_eq!(
            tail_weight(&NameStream::finite(vec![]), 0, 5).unwrap(),
            Dyadic::zero()
        );
    }

    #[test]
    fn truncated_names_fail_past_their_prefix() {
        let f = NameStream::truncated(vec![2, 3]);
        assert!(partial_sum(&f, 1).is_ok());
        assert!(partial_sum(&f, 2).is_err());
    }

    #[test]
    fn certificate_geometric_family() {
        // the true tail Σ_{odd k ≥ n+2} 2^-k = (2/3)·2^-(n+1) or less is below 2^-n
        let f = NameStream::progression(2, 1);
        let r = Modulus::shift(2);
        for n in 0..=8 {
            assert!(!roc_certificate_check(&f, &r, n, 1000).unwrap().is_refuted());
        }
    }

    #[test]
    fn certificate_refutes_adversarial_name() {
        // r(n) = n + 2; a name carrying weight 2^-n + 2^-T at exponents ≥ r(n)
        let (n, t) = (3u64, 12u64);
        let mut values = vec![1];
        values.extend(std::iter::repeat_n(n + 2, 4)); // 4·2^-(n+2) = 2^-n
        values.push(t);
        let f = NameStream::finite(values);
        let check = roc_certificate_check(&f, &Modulus::shift(2), n, 100).unwrap();
        assert!(check.is_refuted());
    }

    #[test]
    fn certificate_vacuous_beyond_emitted_values() {
        let f = NameStream::finite(vec![1, 2, 3]);
        let check = roc_certificate_check(&f, &Modulus::shift(10), 2, 50).unwrap();
        assert_eq!(
            check,
            CertificateCheck::Consistent {
                n: 2,
                stage: 50,
                tail: Dyadic::zero()
            }
        );
    }

    #[test]
    fn name_spec_short_forms() {
        assert_eq!(
            "ap:2,1".parse::<NameSpec>().unwrap(),
            NameSpec::Ap { a: 2, b: 1 }
        );
        assert_eq!(
            "list:3,1".parse::<NameSpec>().unwrap(),
            NameSpec::List { values: vec![3, 1] }
        );
    }
}
