use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::NameStream;
use crate::error::{Error, Result};
use crate::foundations::{BitString, Dyadic, NatSetView, SetSpec};

/// A replayable sequence `t ↦ x_t` of dyadics in `[0, 1]`, non-decreasing.
#[derive(Clone)]
pub struct IncreasingDyadicStream {
    x: Arc<dyn Fn(u64) -> Dyadic + Send + Sync>,
    strict: bool,
    settles_at: Option<u64>,
    label: String,
}

impl IncreasingDyadicStream {
    /// `strict` flags a strictly increasing sequence.
    pub fn from_fn(
        label: impl Into<String>,
        strict: bool,
        x: impl Fn(u64) -> Dyadic + Send + Sync + 'static,
    ) -> Self {
        Self {
            x: Arc::new(x),
            strict,
            settles_at: None,
            label: label.into(),
        }
    }

    /// Constant from index `t0` on.
    pub fn settling_at(mut self, t0: u64) -> Self {
        self.settles_at = Some(t0);
        self
    }

    /// An explicit finite list, constant after its last entry.
    pub fn finite(values: Vec<Dyadic>) -> Self {
        assert!(!values.is_empty(), "need at least x_0");
        let last = values.len() as u64 - 1;
        let strict = values.windows(2).all(|w| w[0] < w[1]) && values.len() > 1;
        let label = format!("list({} values)", values.len());
        Self::from_fn(label, strict, move |t| values[t.min(last) as usize].clone())
            .settling_at(last)
    }

    /// `x_t = 0.(pattern^t)`: the value of the first `t` periods of
    /// `pattern^ω`. For pattern `01` these are the approximants of 1/3.
    pub fn periodic_approximants(pattern: &BitString) -> Self {
        assert!(
            !pattern.is_empty() && pattern.bits().iter().any(|&b| b),
            "pattern needs a 1"
        );
        let p = pattern.clone();
        let label = format!("periodic:{}", pattern.to_text());
        Self::from_fn(label, true, move |t| {
            let mut bits = BitString::new();
            for _ in 0..t {
                bits.extend_from(&p);
            }
            Dyadic::from_bits(&bits)
        })
    }

    pub fn at(&self, t: u64) -> Dyadic {
        (self.x)(t)
    }

    pub fn is_strict(&self) -> bool {
        self.strict
    }

    pub fn settles_at(&self) -> Option<u64> {
        self.settles_at
    }

    /// The limit, when the sequence is known to be eventually constant.
    pub fn known_limit(&self) -> Option<Dyadic> {
        self.settles_at.map(|t| self.at(t))
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Checks monotonicity (strict if flagged) and `[0, 1]` bounds for
    /// `t ≤ horizon`.
    pub fn check(&self, horizon: u64) -> Result<()> {
        let one = Dyadic::one();
        let mut prev = self.at(0);
        if prev.is_negative() || prev > one {
            return Err(Error::InvalidInput(format!("x_0 = {prev} outside [0, 1]")));
        }
        for t in 1..=horizon {
            let cur = self.at(t);
            let bad_order = if self.strict && self.settles_at.is_none_or(|s| t <= s) {
                cur <= prev
            } else {
                cur < prev
            };
            if bad_order {
                return Err(Error::MonotonicityViolation { index: t });
            }
            if cur > one {
                return Err(Error::InvalidInput(format!("x_{t} = {cur} exceeds 1")));
            }
            prev = cur;
        }
        Ok(())
    }
}

impl fmt::Debug for IncreasingDyadicStream {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("IncreasingDyadicStream")
            .field("label", &self.label)
            .field("strict", &self.strict)
            .field("settles_at", &self.settles_at)
            .finish()
    }
}

/// A name assembled block by block from an increasing sequence.
#[derive(Clone, Debug)]
pub struct BlockName {
    pub name: NameStream,
    /// Block `t` holds the exponents of the binary digits of
    /// `x_{t+1} − x_t`, in increasing order.
    pub blocks: Vec<Vec<u64>>,
}

impl BlockName {
    /// Number of name terms emitted by the first `t` blocks.
    pub fn boundary(&self, t: usize) -> usize {
        self.blocks[..t].iter().map(Vec::len).sum()
    }

    pub fn values(&self) -> Vec<u64> {
        self.blocks.iter().flatten().copied().collect()
    }

    /// `Σ 2^-f(k)` over the first `t` blocks.
    pub fn sum_through_block(&self, t: usize) -> Dyadic {
        self.blocks[..t]
            .iter()
            .flatten()
            .map(|&v| Dyadic::pow2_neg(v))
            .sum()
    }
}

/// Exponents `e` (with `2^-e` summing to `d`) of a dyadic `0 ≤ d ≤ 1`:
/// position `j` after the point contributes exponent `j + 1`.
pub fn digit_exponents(d: &Dyadic) -> Vec<u64> {
    if *d == Dyadic::one() {
        return vec![0];
    }
    d.one_positions().into_iter().map(|j| j + 1).collect()
}

/// Reads off a name from `x_0 = 0 ≤ x_1 ≤ …`: for each step `t < steps`
/// emits the exponents of the binary digits of `x_{t+1} − x_t` in
/// increasing order.
pub fn name_from_increasing(xs: &IncreasingDyadicStream, steps: u64) -> Result<BlockName> {
    if !xs.at(0).is_zero() {
        return Err(Error::InvalidInput(format!(
            "x_0 must be 0, got {}",
            xs.at(0)
        )));
    }
    let one = Dyadic::one();
    let mut blocks = Vec::with_capacity(steps as usize);
    let mut prev = Dyadic::zero();
    for t in 0..steps {
        let cur = xs.at(t + 1);
        let diff = &cur - &prev;
        if diff.is_negative() {
            return Err(Error::MonotonicityViolation { index: t + 1 });
        }
        if cur > one {
            return Err(Error::InvalidInput(format!(
                "x_{} = {cur} exceeds 1",
                t + 1
            )));
        }
        blocks.push(digit_exponents(&diff));
        prev = cur;
    }
    let values: Vec<u64> = blocks.iter().flatten().copied().collect();
    let name = match xs.settles_at() {
        Some(t0) if t0 <= steps => NameStream::finite(values),
        _ => NameStream::truncated(values),
    };
    Ok(BlockName { name, blocks })
}

/// `x_t = Σ_{first t enumerated j} 2^-(j+1)` for a c.e. set `W`.
///
/// The first `check_steps` enumerated elements are checked for
/// distinctness; a repeat is reported as [`Error::NotASet`].
pub fn strongly_lc(w: &NatSetView, check_steps: u64) -> Result<IncreasingDyadicStream> {
    let first = w
        .enumerate()
        .ok_or_else(|| Error::InvalidInput("strongly_lc needs an enumerator".into()))?;
    let mut seen = HashSet::new();
    let mut emitted = 0u64;
    for j in first.take(check_steps as usize) {
        if !seen.insert(j) {
            return Err(Error::NotASet { element: j });
        }
        emitted += 1;
    }
    let view = w.clone();
    let stream = IncreasingDyadicStream::from_fn(format!("slc({})", w.label()), false, move |t| {
        view.enumerate()
            .into_iter()
            .flatten()
            .take(t as usize)
            .map(|j| Dyadic::pow2_neg(j + 1))
            .sum()
    });
    Ok(if emitted < check_steps {
        stream.settling_at(emitted)
    } else {
        stream
    })
}

/// Pointwise sum of strongly left-computable streams.
pub fn regular_sum(parts: &[IncreasingDyadicStream]) -> IncreasingDyadicStream {
    let owned: Vec<_> = parts.to_vec();
    let strict = parts.iter().any(|p| p.is_strict());
    let settles = parts
        .iter()
        .map(|p| p.settles_at())
        .collect::<Option<Vec<_>>>()
        .map(|v| v.into_iter().max().unwrap_or(0));
    let label = format!(
        "sum({})",
        parts
            .iter()
            .map(|p| p.label())
            .collect::<Vec<_>>()
            .join(", ")
    );
    let s = IncreasingDyadicStream::from_fn(label, strict, move |t| {
        owned.iter().map(|p| p.at(t)).sum()
    });
    match settles {
        Some(t0) => s.settling_at(t0),
        None => s,
    }
}

/// Serializable increasing-sequence descriptions; short form
/// `periodic:01` or `list:0,1/2,3/4`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum IncreasingSpec {
    Periodic { pattern: BitString },
    List { values: Vec<Dyadic> },
    StronglyLc { set: SetSpec, check_steps: u64 },
    Sum { parts: Vec<IncreasingSpec> },
}

impl IncreasingSpec {
    pub fn build(&self) -> Result<IncreasingDyadicStream> {
        match self {
            IncreasingSpec::Periodic { pattern } => {
                if !pattern.bits().iter().any(|&b| b) {
                    return Err(Error::InvalidInput("periodic pattern needs a 1".into()));
                }
                Ok(IncreasingDyadicStream::periodic_approximants(pattern))
            }
            IncreasingSpec::List { values } => {
                if values.is_empty() {
                    return Err(Error::InvalidInput("empty list".into()));
                }
                Ok(IncreasingDyadicStream::finite(values.clone()))
            }
            IncreasingSpec::StronglyLc { set, check_steps } => {
                strongly_lc(&set.build()?, *check_steps)
            }
            IncreasingSpec::Sum { parts } => {
                let built = parts
                    .iter()
                    .map(IncreasingSpec::build)
                    .collect::<Result<Vec<_>>>()?;
                Ok(regular_sum(&built))
            }
        }
    }
}

impl FromStr for IncreasingSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidInput(format!("unrecognised increasing sequence {s:?}"));
        let (kind, args) = s.split_once(':').ok_or_else(bad)?;
        match kind {
            "periodic" => Ok(IncreasingSpec::Periodic {
                pattern: args.parse()?,
            }),
            "list" => Ok(IncreasingSpec::List {
                values: args.split(',').map(str::parse).collect::<Result<_>>()?,
            }),
            _ => Err(bad()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::foundations::bs;

    fn d(s: &str) -> Dyadic {
        s.parse().unwrap()
    }

    #[test]
    fn digit_read_off() {
        let xs = IncreasingDyadicStream::finite(vec![d("0"), d("1/2"), d("3/4")]);
        assert_eq!(name_from_increasing(&xs, 2).unwrap().values(), vec![1, 2]);
        let xs = IncreasingDyadicStream::finite(vec![d("0"), d("3/8")]);
        assert_eq!(name_from_increasing(&xs, 1).unwrap().values(), vec![2, 3]);
    }

    #[test]
    fn non_increasing_input_is_rejected() {
        let xs = IncreasingDyadicStream::from_fn("bad", false, |t| {
            if t == 2 {
                d("1/8")
            } else {
                d("1/4").scale(t.min(1))
            }
        });
        assert_eq!(
            name_from_increasing(&xs, 3).unwrap_err(),
            Error::MonotonicityViolation { index: 2 }
        );
        assert_eq!(xs.check(3), Err(Error::MonotonicityViolation { index: 2 }));
    }

    #[test]
    fn periodic_approximants_of_one_third() {
        let xs = IncreasingDyadicStream::periodic_approximants(&bs("01"));
        assert_eq!(xs.at(0), Dyadic::zero());
        assert_eq!(xs.at(2), d("5/16"));
        assert!(xs.check(20).is_ok());
        // 3·x_t + 4^-t = 1
        for t in 0..20u64 {
            assert_eq!(&xs.at(t).scale(3) + &Dyadic::pow2_neg(2 * t), Dyadic::one());
        }
    }

    #[test]
    fn strongly_lc_of_evens() {
        let w = NatSetView::evens(1000);
        let xs = strongly_lc(&w, 100).unwrap();
        assert!(xs.check(30).is_ok());
        // x_t = Σ_{i<t} 2^-(2i+1) and 3·x_t + 2·4^-t = 2
        for t in 0..30u64 {
            assert_eq!(
                &xs.at(t).scale(3) + &Dyadic::pow2_neg(2 * t).scale(2),
                Dyadic::from(2)
            );
        }
    }

    #[test]
    fn strongly_lc_empty_and_duplicates() {
        let xs = strongly_lc(&NatSetView::empty(10), 10).unwrap();
        assert_eq!(xs.at(5), Dyadic::zero());
        assert_eq!(xs.known_limit(), Some(Dyadic::zero()));
        let dup = NatSetView::empty(10).with_enumerator(|| vec![1u64, 4, 1].into_iter());
        assert_eq!(
            strongly_lc(&dup, 10).unwrap_err(),
            Error::NotASet { element: 1 }
        );
    }

    #[test]
    fn regular_sum_of_two_halves() {
        let half = strongly_lc(&NatSetView::explicit(&[0], 4), 4).unwrap();
        let s = regular_sum(&[half.clone(), half]);
        assert_eq!(s.at(0), Dyadic::zero());
        assert_eq!(s.at(1), Dyadic::one());
        assert_eq!(s.at(9), Dyadic::one());
        assert_eq!(s.known_limit(), Some(Dyadic::one()));
    }
}
