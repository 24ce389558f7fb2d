use std::fmt;
use std::sync::Arc;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use super::{pair, BitStream, BitString, Dyadic};
use crate::error::{Error, Result};

type Membership = dyn Fn(u64) -> bool + Send + Sync;
type Enumerator = dyn Fn() -> Box<dyn Iterator<Item = u64> + Send> + Send + Sync;

/// A view of a set `A ⊆ ℕ` on the initial segment `[0, horizon)`, with an
/// optional replayable enumerator (for c.e. sets `W_e`).
///
/// Every call to [`NatSetView::enumerate`] starts a fresh enumeration.
#[derive(Clone)]
pub struct NatSetView {
    membership: Arc<Membership>,
    horizon: u64,
    enumerator: Option<Arc<Enumerator>>,
    label: String,
}

impl NatSetView {
    pub fn from_fn(
        label: impl Into<String>,
        horizon: u64,
        membership: impl Fn(u64) -> bool + Send + Sync + 'static,
    ) -> Self {
        Self {
            membership: Arc::new(membership),
            horizon,
            enumerator: None,
            label: label.into(),
        }
    }

    pub fn with_enumerator<I>(mut self, enumerator: impl Fn() -> I + Send + Sync + 'static) -> Self
    where
        I: Iterator<Item = u64> + Send + 'static,
    {
        self.enumerator = Some(Arc::new(move || Box::new(enumerator())));
        self
    }

    pub fn empty(horizon: u64) -> Self {
        Self::from_fn("empty", horizon, |_| false).with_enumerator(std::iter::empty)
    }

    pub fn explicit(elements: &[u64], horizon: u64) -> Self {
        let mut sorted = elements.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        let lookup = sorted.clone();
        let enumerated = Arc::new(sorted);
        Self::from_fn(
            format!("explicit({} elements)", lookup.len()),
            horizon,
            move |j| lookup.binary_search(&j).is_ok(),
        )
        .with_enumerator(move || {
            let e = Arc::clone(&enumerated);
            (0..e.len()).map(move |i| e[i])
        })
    }

    /// `{step·k + offset | k ∈ ℕ}`.
    pub fn progression(step: u64, offset: u64, horizon: u64) -> Self {
        assert!(step > 0, "progression step must be positive");
        Self::from_fn(
            format!("progression({step}k+{offset})"),
            horizon,
            move |j| j >= offset && (j - offset).is_multiple_of(step),
        )
        .with_enumerator(move || (0..).map(move |k| step * k + offset))
    }

    pub fn evens(horizon: u64) -> Self {
        Self::progression(2, 0, horizon)
    }

    pub fn odds(horizon: u64) -> Self {
        Self::progression(2, 1, horizon)
    }

    /// `{p² − 1 | p ≥ 1}`: the 0-based indices of the square positions.
    pub fn squares_minus_one(horizon: u64) -> Self {
        Self::from_fn("squares-minus-one", horizon, |j| {
            let p = num_integer::Roots::sqrt(&(j + 1));
            p * p == j + 1
        })
        .with_enumerator(|| (1u64..).map(|p| p * p - 1))
    }

    /// The column `{⟨i, j⟩ | j ∈ ℕ}` of the pairing function.
    pub fn column(i: u64, horizon: u64) -> Self {
        Self::from_fn(format!("column({i})"), horizon, move |n| {
            super::unpair(n).0 == i
        })
        .with_enumerator(move || (0..).map(move |j| pair(i, j)))
    }

    /// The finite view whose characteristic string is `bits`.
    pub fn from_bits(bits: &BitString) -> Self {
        let b = bits.bits().to_vec();
        let h = b.len() as u64;
        let elements: Vec<u64> = (0..h).filter(|&j| b[j as usize]).collect();
        Self::explicit(&elements, h)
    }

    /// The set `{j | x(j) = 1}` viewed below `horizon`.
    pub fn from_stream(x: &BitStream, horizon: u64) -> Self {
        let s = x.clone();
        let label = format!("ones-of({})", x.label());
        Self::from_fn(label, horizon, move |j| s.bit(j).unwrap_or(false)).with_enumerator_by_scan()
    }

    /// Enumerates the members below the horizon by scanning membership.
    pub fn with_enumerator_by_scan(self) -> Self {
        let m = Arc::clone(&self.membership);
        let h = self.horizon;
        self.with_enumerator(move || {
            let m = Arc::clone(&m);
            (0..h).filter(move |&j| m(j))
        })
    }

    pub fn horizon(&self) -> u64 {
        self.horizon
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn has_enumerator(&self) -> bool {
        self.enumerator.is_some()
    }

    pub fn contains(&self, j: u64) -> Result<bool> {
        if j >= self.horizon {
            return Err(Error::HorizonExceeded {
                index: j,
                horizon: self.horizon,
            });
        }
        Ok((self.membership)(j))
    }

    /// A fresh enumeration, if this view carries an enumerator.
    pub fn enumerate(&self) -> Option<Box<dyn Iterator<Item = u64> + Send>> {
        self.enumerator.as_ref().map(|e| e())
    }

    /// Members of the view below `min(n, horizon)`, in increasing order.
    pub fn members_below(&self, n: u64) -> Vec<u64> {
        (0..n.min(self.horizon))
            .filter(|&j| (self.membership)(j))
            .collect()
    }

    /// `A↾n` as a characteristic string.
    pub fn restriction(&self, n: u64) -> Result<BitString> {
        (0..n).map(|j| self.contains(j)).collect()
    }

    /// `Σ_{j ∈ A, j < n} 2^-(j+1)`.
    pub fn value_below(&self, n: u64) -> Result<Dyadic> {
        Ok(Dyadic::from_bits(&self.restriction(n)?))
    }

    /// Complement below the same horizon.
    pub fn complement(&self) -> Self {
        let m = Arc::clone(&self.membership);
        Self::from_fn(
            format!("complement({})", self.label),
            self.horizon,
            move |j| !m(j),
        )
        .with_enumerator_by_scan()
    }

    /// Elements emitted by the first `steps` enumeration steps that lie
    /// below `bound`, in emission order (duplicates removed).
    pub fn enumerated_below(&self, bound: u64, steps: usize) -> Option<Vec<u64>> {
        let it = self.enumerate()?;
        Some(it.take(steps).filter(|&j| j < bound).unique().collect())
    }
}

impl fmt::Debug for NatSetView {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("NatSetView")
            .field("label", &self.label)
            .field("horizon", &self.horizon)
            .field("enumerator", &self.enumerator.is_some())
            .finish()
    }
}

/// The characteristic sequence of `A`: bit `j` is 1 iff `j ∈ A`. Reading
/// past the view's horizon fails.
pub fn charseq(a: &NatSetView) -> BitStream {
    let view = a.clone();
    BitStream::from_fn(format!("charseq({})", a.label()), move |j| {
        (view.membership)(j)
    })
    .with_horizon(a.horizon())
}

/// `A ⊕ B = {2n | n ∈ A} ∪ {2n+1 | n ∈ B}`.
pub fn join(a: &NatSetView, b: &NatSetView) -> Result<NatSetView> {
    if a.horizon() != b.horizon() {
        return Err(Error::InvalidInput(format!(
            "join needs a common horizon, got {} and {}",
            a.horizon(),
            b.horizon()
        )));
    }
    let (ma, mb) = (Arc::clone(&a.membership), Arc::clone(&b.membership));
    let label = format!("join({}, {})", a.label(), b.label());
    let view = NatSetView::from_fn(label, 2 * a.horizon(), move |j| {
        if j % 2 == 0 {
            ma(j / 2)
        } else {
            mb(j / 2)
        }
    });
    match (&a.enumerator, &b.enumerator) {
        (Some(ea), Some(eb)) => {
            let (ea, eb) = (Arc::clone(ea), Arc::clone(eb));
            Ok(view
                .with_enumerator(move || ea().map(|n| 2 * n).interleave(eb().map(|n| 2 * n + 1))))
        }
        _ => Ok(view.with_enumerator_by_scan()),
    }
}

/// Serializable description of a set view.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SetSpec {
    Explicit {
        elements: Vec<u64>,
        horizon: u64,
    },
    Progression {
        step: u64,
        offset: u64,
        horizon: u64,
    },
    SquaresMinusOne {
        horizon: u64,
    },
    Column {
        index: u64,
        horizon: u64,
    },
    Bits {
        bits: BitString,
    },
    /// Characteristic sequence drawn from the seeded random stream.
    Random {
        seed: u64,
        horizon: u64,
    },
    Join {
        left: Box<SetSpec>,
        right: Box<SetSpec>,
    },
    Complement {
        of: Box<SetSpec>,
    },
}

impl SetSpec {
    pub fn build(&self) -> Result<NatSetView> {
        Ok(match self {
            SetSpec::Explicit { elements, horizon } => {
                if let Some(&bad) = elements.iter().find(|&&e| e >= *horizon) {
                    return Err(Error::HorizonExceeded {
                        index: bad,
                        horizon: *horizon,
                    });
                }
                NatSetView::explicit(elements, *horizon)
            }
            SetSpec::Progression {
                step,
                offset,
                horizon,
            } => {
                if *step == 0 {
                    return Err(Error::InvalidInput(
                        "progression step must be positive".into(),
                    ));
                }
                NatSetView::progression(*step, *offset, *horizon)
            }
            SetSpec::SquaresMinusOne { horizon } => NatSetView::squares_minus_one(*horizon),
            SetSpec::Column { index, horizon } => NatSetView::column(*index, *horizon),
            SetSpec::Bits { bits } => NatSetView::from_bits(bits),
            SetSpec::Random { seed, horizon } => {
                NatSetView::from_stream(&BitStream::random(*seed), *horizon)
            }
            SetSpec::Join { left, right } => join(&left.build()?, &right.build()?)?,
            SetSpec::Complement { of } => of.build()?.complement(),
        })
    }
}
