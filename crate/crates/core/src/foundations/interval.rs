use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use super::{BitString, Dyadic};
use crate::error::{Error, Result};

/// A closed interval `[lo, hi]` with exact dyadic endpoints.
///
/// Used both as the cylinder interval `I_τ` of a string and as the
/// endpoints of an open interval (see [`DyadicInterval::open_meets_cylinder`]).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DyadicInterval {
    pub lo: Dyadic,
    pub hi: Dyadic,
}

impl DyadicInterval {
    pub fn new(lo: Dyadic, hi: Dyadic) -> Result<Self> {
        if lo > hi {
            return Err(Error::InvalidInput(format!(
                "interval bounds out of order: {lo} > {hi}"
            )));
        }
        Ok(Self { lo, hi })
    }

    pub fn point(x: Dyadic) -> Self {
        Self {
            lo: x.clone(),
            hi: x,
        }
    }

    /// `[0.τ, 0.τ + 2^-|τ|]`.
    pub fn of(tau: &BitString) -> Self {
        let lo = Dyadic::from_bits(tau);
        let hi = &lo + &Dyadic::pow2_neg(tau.len() as u64);
        Self { lo, hi }
    }

    pub fn width(&self) -> Dyadic {
        &self.hi - &self.lo
    }

    pub fn contains(&self, x: &Dyadic) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_open(&self, x: &Dyadic) -> bool {
        &self.lo < x && x < &self.hi
    }

    pub fn is_subset_of(&self, other: &DyadicInterval) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    /// Whether the open interval `]lo, hi[` meets the closed cylinder `I_τ`.
    pub fn open_meets_cylinder(&self, tau: &BitString) -> bool {
        let cyl = Self::of(tau);
        cyl.lo < self.hi && self.lo < cyl.hi
    }

    /// All strings of length `len` whose cylinder meets the open interval
    /// `]lo, hi[`, in lexicographic order. Assumes `[lo, hi] ⊆ [0, 1]`.
    pub fn cylinders_meeting_open(&self, len: usize) -> Vec<BitString> {
        if self.lo >= self.hi {
            return Vec::new();
        }
        let first = self.lo.floor_scale(len as u64);
        let limit = BigUint::from(1u32) << len;
        let mut out = Vec::new();
        let mut k = first;
        while k < limit {
            let tau = to_bits(&k, len);
            let cyl_lo = Dyadic::from_bits(&tau);
            if cyl_lo >= self.hi {
                break;
            }
            if self.open_meets_cylinder(&tau) {
                out.push(tau);
            }
            k += 1u32;
        }
        out
    }
}

fn to_bits(k: &BigUint, len: usize) -> BitString {
    (0..len).rev().map(|i| k.bit(i as u64)).collect()
}

/// `I_τ`.
pub fn interval_of(tau: &BitString) -> DyadicInterval {
    DyadicInterval::of(tau)
}
