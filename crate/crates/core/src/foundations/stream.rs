use std::fmt;
use std::sync::Arc;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{BitString, Dyadic};
use crate::error::{Error, Result};

type BitFn = dyn Fn(u64) -> bool + Send + Sync;

/// A replayable binary sequence: `bit(i)` is a pure function of `i`.
///
/// Clones share the generator; no state is mutated by evaluation. An
/// optional horizon marks finite views, beyond which reads fail.
#[derive(Clone)]
pub struct BitStream {
    source: Arc<BitFn>,
    horizon: Option<u64>,
    label: String,
}

impl BitStream {
    pub fn from_fn(
        label: impl Into<String>,
        f: impl Fn(u64) -> bool + Send + Sync + 'static,
    ) -> Self {
        Self {
            source: Arc::new(f),
            horizon: None,
            label: label.into(),
        }
    }

    pub fn with_horizon(mut self, horizon: u64) -> Self {
        self.horizon = Some(self.horizon.map_or(horizon, |h| h.min(horizon)));
        self
    }

    pub fn horizon(&self) -> Option<u64> {
        self.horizon
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn bit(&self, i: u64) -> Result<bool> {
        match self.horizon {
            Some(h) if i >= h => Err(Error::HorizonExceeded {
                index: i,
                horizon: h,
            }),
            _ => Ok((self.source)(i)),
        }
    }

    /// `x↾n`.
    pub fn prefix(&self, n: usize) -> Result<BitString> {
        (0..n as u64).map(|i| self.bit(i)).collect()
    }

    /// `0.x↾n` as an exact dyadic.
    pub fn prefix_value(&self, n: usize) -> Result<Dyadic> {
        Ok(Dyadic::from_bits(&self.prefix(n)?))
    }

    pub fn zeros() -> Self {
        Self::from_fn("zeros", |_| false)
    }

    pub fn ones() -> Self {
        Self::from_fn("ones", |_| true)
    }

    /// `pattern` repeated forever.
    pub fn periodic(pattern: &BitString) -> Self {
        assert!(!pattern.is_empty(), "periodic pattern must be non-empty");
        let bits = pattern.bits().to_vec();
        let label = format!("periodic:{}", pattern.to_text());
        Self::from_fn(label, move |i| bits[(i % bits.len() as u64) as usize])
    }

    /// `prefix` followed by zeros: the trailing-zero expansion of a dyadic.
    pub fn finite(prefix: &BitString) -> Self {
        let bits = prefix.bits().to_vec();
        let label = format!("prefix:{}", prefix.to_text());
        Self::from_fn(label, move |i| {
            bits.get(i as usize).copied().unwrap_or(false)
        })
    }

    /// Binary expansion (trailing zeros) of a dyadic in `[0, 1)`.
    pub fn of_dyadic(x: &Dyadic) -> Self {
        let n = x.exponent() as usize;
        Self::finite(&x.prefix_bits(n))
    }

    /// Pseudo-random bits; bit `i` is computed by random access into a
    /// seeded ChaCha8 keystream, so evaluation stays a pure function of `i`.
    pub fn random(seed: u64) -> Self {
        Self::from_fn(format!("random:{seed}"), move |i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_word_pos(u128::from(i / 32));
            (rng.next_u32() >> (i % 32)) & 1 == 1
        })
    }

    pub fn map_positions(
        &self,
        label: impl Into<String>,
        f: impl Fn(&BitStream, u64) -> bool + Send + Sync + 'static,
    ) -> Self {
        let inner = self.clone();
        Self::from_fn(label, move |i| f(&inner, i))
    }
}

impl fmt::Debug for BitStream {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BitStream")
            .field("label", &self.label)
            .field("horizon", &self.horizon)
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::foundations::bs;

    #[test]
    fn replayable_clones_agree() {
        let s = BitStream::random(7);
        let t = s.clone();
        for i in 0..500 {
            assert_eq!(s.bit(i).unwrap(), t.bit(i).unwrap());
        }
        assert_eq!(s.prefix(64).unwrap(), t.prefix(64).unwrap());
    }

    #[test]
    fn horizon_fails_loudly() {
        let s = BitStream::zeros().with_horizon(4);
        assert!(s.bit(3).is_ok());
        assert_eq!(
            s.bit(4),
            Err(Error::HorizonExceeded {
                index: 4,
                horizon: 4
            })
        );
    }

    #[test]
    fn periodic_and_dyadic() {
        assert_eq!(
            BitStream::periodic(&bs("01")).prefix(5).unwrap(),
            bs("01010")
        );
        let x: Dyadic = "3/8".parse().unwrap();
        assert_eq!(BitStream::of_dyadic(&x).prefix(6).unwrap(), bs("011000"));
    }
}
