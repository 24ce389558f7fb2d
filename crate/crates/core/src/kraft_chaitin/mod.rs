//! Online Kraft–Chaitin codeword allocation.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::foundations::{BitString, Dyadic};
use crate::machines::{PrefixMachine, TableMachine};

/// Hands out prefix-free codewords of requested lengths, in request order.
///
/// Free space is kept as at most one aligned interval per size. A request
/// for length `ℓ` takes the free interval of size `2^-ℓ` if there is one;
/// otherwise it splits the smallest larger free interval `w`, issuing
/// `w0…0` and freeing `w1, w01, …, w0…01`.
#[derive(Clone, Debug)]
pub struct KcAllocator {
    /// size exponent -> free codeword of that length
    free: BTreeMap<usize, BitString>,
    committed: Dyadic,
    issued: Vec<BitString>,
}

impl Default for KcAllocator {
    fn default() -> Self {
        Self::new()
    }
}

impl KcAllocator {
    pub fn new() -> Self {
        Self {
            free: BTreeMap::from([(0, BitString::new())]),
            committed: Dyadic::zero(),
            issued: Vec::new(),
        }
    }

    pub fn committed_weight(&self) -> &Dyadic {
        &self.committed
    }

    pub fn issued(&self) -> &[BitString] {
        &self.issued
    }

    /// Free intervals ordered by position.
    pub fn free_intervals(&self) -> Vec<BitString> {
        let mut v: Vec<BitString> = self.free.values().cloned().collect();
        v.sort_by(|a, b| a.cmp_lex(b));
        v
    }

    /// Issues a codeword of length exactly `len`. On
    /// [`Error::WeightExceeded`] the allocator is left unchanged.
    pub fn request(&mut self, len: usize) -> Result<BitString> {
        let weight = &self.committed + &Dyadic::pow2_neg(len as u64);
        if weight > Dyadic::one() {
            return Err(Error::WeightExceeded { length: len as u64 });
        }
        let (&size, _) = self
            .free
            .range(..=len)
            .next_back()
            .ok_or(Error::WeightExceeded { length: len as u64 })?;
        let mut w = self.free.remove(&size).expect("present");
        for k in size..len {
            let mut sibling = w.clone();
            sibling.push(true);
            self.free.insert(k + 1, sibling);
            w.push(false);
        }
        self.committed = weight;
        self.issued.push(w.clone());
        Ok(w)
    }
}

/// One coding request: a codeword of length `len` for `payload`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KcRequest(pub usize, pub BitString);

/// Allocates codewords for `requests` in order and returns the resulting
/// table machine, mapping each codeword to its payload.
pub fn kc_build_machine(requests: &[KcRequest]) -> Result<PrefixMachine> {
    let mut alloc = KcAllocator::new();
    let entries = requests
        .iter()
        .map(|KcRequest(len, payload)| Ok((alloc.request(*len)?, payload.clone())))
        .collect::<Result<Vec<_>>>()?;
    Ok(PrefixMachine::Table(TableMachine::new("kc", entries)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::foundations::bs;
    use crate::machines::{complexity, Budget};

    fn run(lens: &[usize]) -> Vec<Result<String>> {
        let mut a = KcAllocator::new();
        lens.iter()
            .map(|&l| a.request(l).map(|c| c.to_text()))
            .collect()
    }

    #[test]
    fn one_two_two() {
        let got: Vec<String> = run(&[1, 2, 2]).into_iter().map(|r| r.unwrap()).collect();
        assert_eq!(got, ["0", "10", "11"]);
    }

    #[test]
    fn third_half_fails() {
        let got = run(&[1, 1, 1]);
        assert!(got[1].is_ok());
        assert_eq!(got[2], Err(Error::WeightExceeded { length: 1 }));
    }

    #[test]
    fn exact_fit_reuses_freed_sibling() {
        let got: Vec<String> = run(&[3, 2, 3, 1]).into_iter().map(|r| r.unwrap()).collect();
        assert_eq!(got, ["000", "01", "001", "1"]);
    }

    #[test]
    fn failure_leaves_state() {
        let mut a = KcAllocator::new();
        a.request(1).unwrap();
        a.request(2).unwrap();
        let before = (a.committed_weight().clone(), a.free_intervals());
        assert!(a.request(1).is_err());
        assert_eq!((a.committed_weight().clone(), a.free_intervals()), before);
        assert_eq!(a.request(2).unwrap(), bs("11"));
    }

    #[test]
    fn build_machine() {
        let m = kc_build_machine(&[KcRequest(2, bs("000")), KcRequest(2, bs("001"))]).unwrap();
        let b = Budget::new(4, 0);
        assert_eq!(complexity(&m, &bs("000"), &b).unwrap().value, Some(2));
        assert_eq!(complexity(&m, &bs("001"), &b).unwrap().value, Some(2));
        match kc_build_machine(&[]).unwrap() {
            PrefixMachine::Table(t) => assert!(t.is_empty()),
            _ => unreachable!(),
        }
    }
}
