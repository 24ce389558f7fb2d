//! Finite-horizon falsifiers for immunity-type properties of sets.
//!
//! Every verdict is either `refuted-at-horizon`, with evidence that can be
//! re-checked below the horizon, or `consistent-at-horizon`. Nothing here
//! asserts that a set has one of these properties.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::foundations::NatSetView;
use crate::reals::Modulus;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Property {
    Immune,
    Hyperimmune,
    Hyperhyperimmune,
    StronglyHyperhyperimmune,
    Cohesive,
    BiImmune,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    RefutedAtHorizon,
    ConsistentAtHorizon,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Evidence {
    /// Enumerated elements of `W` below the horizon and how many lie in `A`.
    Subset {
        enumerated: u64,
        inside: u64,
        first_outside: Option<u64>,
    },
    /// `p_A(n) ≤ f(n)` checked for `n < checked`.
    Majorization {
        checked: u64,
        first_failure: Option<(u64, u64, u64)>,
    },
    /// Per block, the least element of `A` it contains (if any).
    Blocks { hits: Vec<Option<u64>> },
    /// Sizes of `A ∩ W` and `A ∩ complement(W)` below the horizon.
    Split { inside: u64, outside: u64 },
    BiImmune {
        set_side: Box<ImmunityVerdict>,
        complement_side: Box<ImmunityVerdict>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ImmunityVerdict {
    pub property: Property,
    pub result: Outcome,
    pub witness: Evidence,
    pub horizon: u64,
    pub threshold: u64,
}

impl ImmunityVerdict {
    pub fn is_refuted(&self) -> bool {
        self.result == Outcome::RefutedAtHorizon
    }
}

/// `⌈horizon / 4⌉`: how many witnesses below the horizon stand in for
/// "infinitely many".
pub fn default_threshold(horizon: u64) -> u64 {
    horizon.div_ceil(4)
}

fn outcome(refuted: bool) -> Outcome {
    if refuted {
        Outcome::RefutedAtHorizon
    } else {
        Outcome::ConsistentAtHorizon
    }
}

fn elements_below(w: &NatSetView, horizon: u64) -> Result<Vec<u64>> {
    match w.enumerated_below(horizon, horizon as usize) {
        Some(v) => Ok(v),
        None => Ok(w.members_below(horizon)),
    }
}

/// Refutes immunity when every enumerated element of `W` below the horizon
/// lies in `A` and there are at least `threshold` of them.
pub fn check_immune(
    a: &NatSetView,
    w: &NatSetView,
    horizon: u64,
    threshold: Option<u64>,
) -> Result<ImmunityVerdict> {
    let threshold = threshold.unwrap_or_else(|| default_threshold(horizon));
    let elements = elements_below(w, horizon)?;
    let mut inside = 0;
    let mut first_outside = None;
    for &j in &elements {
        if a.contains(j)? {
            inside += 1;
        } else if first_outside.is_none() {
            first_outside = Some(j);
        }
    }
    let refuted = first_outside.is_none() && inside >= threshold;
    Ok(ImmunityVerdict {
        property: Property::Immune,
        result: outcome(refuted),
        witness: Evidence::Subset {
            enumerated: elements.len() as u64,
            inside,
            first_outside,
        },
        horizon,
        threshold,
    })
}

/// Refutes hyperimmunity when `p_A(n) ≤ f(n)` for all `n < horizon`.
pub fn check_hyperimmune(a: &NatSetView, f: &Modulus, horizon: u64) -> Result<ImmunityVerdict> {
    let members = a.members_below(a.horizon());
    if (members.len() as u64) < horizon {
        return Err(Error::InsufficientElements {
            found: members.len() as u64,
            needed: horizon,
        });
    }
    let mut first_failure = None;
    for (n, &p) in members.iter().take(horizon as usize).enumerate() {
        let bound = f.at(n as u64);
        if p > bound {
            first_failure = Some((n as u64, p, bound));
            break;
        }
    }
    Ok(ImmunityVerdict {
        property: Property::Hyperimmune,
        result: outcome(first_failure.is_none()),
        witness: Evidence::Majorization {
            checked: horizon,
            first_failure,
        },
        horizon,
        threshold: horizon,
    })
}

/// Disjointness of the blocks' elements below the horizon.
fn check_disjoint(blocks: &[Vec<u64>]) -> Result<()> {
    let mut owner: BTreeMap<u64, usize> = BTreeMap::new();
    for (i, block) in blocks.iter().enumerate() {
        for &j in block {
            if let Some(&first) = owner.get(&j) {
                if first != i {
                    return Err(Error::DisjointnessViolation {
                        first,
                        second: i,
                        element: j,
                    });
                }
            }
            owner.insert(j, i);
        }
    }
    Ok(())
}

fn blocks_verdict(
    property: Property,
    a: &NatSetView,
    blocks: &[Vec<u64>],
    horizon: u64,
    threshold: Option<u64>,
) -> Result<ImmunityVerdict> {
    check_disjoint(blocks)?;
    let threshold = threshold.unwrap_or_else(|| default_threshold(horizon));
    let mut hits = Vec::with_capacity(blocks.len());
    for block in blocks {
        let mut hit = None;
        for &j in block {
            if a.contains(j)? {
                hit = Some(hit.map_or(j, |h: u64| h.min(j)));
            }
        }
        hits.push(hit);
    }
    let refuted = hits.iter().all(Option::is_some) && hits.len() as u64 >= threshold;
    Ok(ImmunityVerdict {
        property,
        result: outcome(refuted),
        witness: Evidence::Blocks { hits },
        horizon,
        threshold,
    })
}

/// Refutes hyperhyperimmunity with pairwise disjoint finite blocks that
/// all meet `A`, at least `threshold` of them.
pub fn check_hhi(
    a: &NatSetView,
    blocks: &[Vec<u64>],
    horizon: u64,
    threshold: Option<u64>,
) -> Result<ImmunityVerdict> {
    blocks_verdict(Property::Hyperhyperimmune, a, blocks, horizon, threshold)
}

/// As [`check_hhi`] with possibly infinite blocks, read through their
/// enumerators up to the horizon.
pub fn check_shhi(
    a: &NatSetView,
    blocks: &[NatSetView],
    horizon: u64,
    threshold: Option<u64>,
) -> Result<ImmunityVerdict> {
    let finite = blocks
        .iter()
        .map(|b| elements_below(b, horizon))
        .collect::<Result<Vec<_>>>()?;
    blocks_verdict(
        Property::StronglyHyperhyperimmune,
        a,
        &finite,
        horizon,
        threshold,
    )
}

/// Column blocks `{⟨i, j⟩ | j ∈ ℕ}` for `i < count`.
pub fn column_blocks(count: u64, horizon: u64) -> Vec<NatSetView> {
    (0..count).map(|i| NatSetView::column(i, horizon)).collect()
}

/// Refutes cohesiveness when both `A ∩ W` and `A ∩ complement(W)` have at
/// least `threshold` elements below the horizon.
pub fn check_cohesive(
    a: &NatSetView,
    w: &NatSetView,
    horizon: u64,
    threshold: Option<u64>,
) -> Result<ImmunityVerdict> {
    let threshold = threshold.unwrap_or_else(|| default_threshold(horizon));
    let (mut inside, mut outside) = (0, 0);
    for j in 0..horizon {
        if a.contains(j)? {
            if w.contains(j)? {
                inside += 1;
            } else {
                outside += 1;
            }
        }
    }
    Ok(ImmunityVerdict {
        property: Property::Cohesive,
        result: outcome(inside >= threshold && outside >= threshold),
        witness: Evidence::Split { inside, outside },
        horizon,
        threshold,
    })
}

/// Refutes bi-immunity when either `A` or its complement fails
/// [`check_immune`] with the given witness set.
pub fn check_bi_immune(
    a: &NatSetView,
    w_set: &NatSetView,
    w_complement: &NatSetView,
    horizon: u64,
    threshold: Option<u64>,
) -> Result<ImmunityVerdict> {
    let set_side = check_immune(a, w_set, horizon, threshold)?;
    let complement_side = check_immune(&a.complement(), w_complement, horizon, threshold)?;
    let refuted = set_side.is_refuted() || complement_side.is_refuted();
    let threshold = set_side.threshold;
    Ok(ImmunityVerdict {
        property: Property::BiImmune,
        result: outcome(refuted),
        witness: Evidence::BiImmune {
            set_side: Box::new(set_side),
            complement_side: Box::new(complement_side),
        },
        horizon,
        threshold,
    })
}
