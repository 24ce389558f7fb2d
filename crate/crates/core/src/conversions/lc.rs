use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::foundations::Dyadic;
use crate::machines::{complexity, Budget, PrefixMachine};
use crate::reals::{
    digit_exponents, name_from_increasing, BlockName, IncreasingDyadicStream, Modulus, NameStream,
};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum SearchStatus {
    Complete,
    /// No `m ≤ T` qualified as `s(n)`.
    SearchExhausted {
        n: u64,
    },
    /// The sequence is eventually constant, so its limit is dyadic and has
    /// a finite name.
    DyadicShortcut,
}

#[derive(Clone, Debug)]
pub struct LcToRoc {
    pub status: SearchStatus,
    /// `s(0) = 0, s(1), …` as far as the search got.
    pub s: Vec<u64>,
    pub name: BlockName,
}

/// `K_M(x_m ↾ r(k)) ≤ r(k) − k` for every `k ≤ n`, using the budgeted value.
fn qualifies(
    xs: &IncreasingDyadicStream,
    m: u64,
    r: &Modulus,
    n: u64,
    machine: &PrefixMachine,
    budget: &Budget,
) -> Result<bool> {
    let x = xs.at(m);
    for k in 0..=n {
        let rk = r.at(k);
        let tau = x.prefix_bits(rk as usize);
        let bound = rk.saturating_sub(k);
        match complexity(machine, &tau, budget)?.value {
            Some(v) if v <= bound && rk >= k => {}
            _ => return Ok(false),
        }
    }
    Ok(true)
}

/// Searches `s(1) < … < s(blocks)` with `s(n+1)` the least `m ≤ T` beyond
/// `s(n)` whose prefixes `x_m ↾ r(k)`, `k ≤ n`, are compressible by `k`
/// bits, then reads off a name block by block from `x_{s(0)}, x_{s(1)}, …`.
pub fn lc_to_roc(
    xs: &IncreasingDyadicStream,
    r: &Modulus,
    machine: &PrefixMachine,
    budget: &Budget,
    stages: u64,
    blocks: u64,
) -> Result<LcToRoc> {
    if let Some(limit) = xs.known_limit() {
        let values = if limit.is_zero() {
            Vec::new()
        } else {
            digit_exponents(&limit)
        };
        let name = BlockName {
            name: NameStream::finite(values.clone()),
            blocks: vec![values],
        };
        return Ok(LcToRoc {
            status: SearchStatus::DyadicShortcut,
            s: vec![0],
            name,
        });
    }
    r.check_strictly_increasing(blocks)?;
    let mut s = vec![0u64];
    let mut status = SearchStatus::Complete;
    for n in 0..blocks {
        let prev = *s.last().expect("non-empty");
        let mut found = None;
        for m in prev + 1..=stages {
            if qualifies(xs, m, r, n, machine, budget)? {
                found = Some(m);
                break;
            }
        }
        match found {
            Some(m) => s.push(m),
            None => {
                status = SearchStatus::SearchExhausted { n: n + 1 };
                break;
            }
        }
    }
    let sampled = s.clone();
    let ys = IncreasingDyadicStream::from_fn("sampled", true, {
        let xs = xs.clone();
        move |t| xs.at(sampled[(t as usize).min(sampled.len() - 1)])
    });
    let name = name_from_increasing(&ys, s.len() as u64 - 1)?;
    Ok(LcToRoc { status, s, name })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "kebab-case")]
pub enum TailCheck {
    HoldsAtStage {
        n: u64,
        stage: u64,
        tail: Dyadic,
        bound: Dyadic,
    },
    Violated {
        n: u64,
        stage: u64,
        tail: Dyadic,
        bound: Dyadic,
    },
}

impl TailCheck {
    pub fn holds(&self) -> bool {
        matches!(self, TailCheck::HoldsAtStage { .. })
    }
}

/// `Σ_{m > r(n)} u_f(m)·2^-m ≤ (n+1)·2^-n` over the first `T` terms.
pub fn tail_bound_check(f: &NameStream, r: &Modulus, n: u64, stage: u64) -> TailCheck {
    let cut = r.at(n);
    let seen = f.available(stage);
    let tail: Dyadic = (0..seen)
        .filter_map(|k| f.get(k))
        .filter(|&v| v > cut)
        .map(Dyadic::pow2_neg)
        .sum();
    let bound = Dyadic::pow2_neg(n).scale(n + 1);
    if tail > bound {
        TailCheck::Violated {
            n,
            stage: seen,
            tail,
            bound,
        }
    } else {
        TailCheck::HoldsAtStage {
            n,
            stage: seen,
            tail,
            bound,
        }
    }
}

/// `R[t] = ⌊2^r(n) · Σ_{m > r(n)} u_{f[t]}(m)·2^-m⌋` after each block, and
/// the stages `t` with `R[t+1] > R[t]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CarryReport {
    pub values: Vec<BigUint>,
    pub carries: Vec<usize>,
    /// `R[t+1] ≤ R[t] + 1` at every stage.
    pub step_bound_holds: bool,
}

pub fn carry_counter(blocks: &[Vec<u64>], rn: u64) -> CarryReport {
    let mut tail = Dyadic::zero();
    let mut values = vec![BigUint::default()];
    for block in blocks {
        for &v in block.iter().filter(|&&v| v > rn) {
            tail += &Dyadic::pow2_neg(v);
        }
        values.push(tail.floor_scale(rn));
    }
    let carries = (0..values.len() - 1)
        .filter(|&t| values[t + 1] > values[t])
        .collect();
    let step_bound_holds = values.windows(2).all(|w| w[1] <= &w[0] + 1u32);
    CarryReport {
        values,
        carries,
        step_bound_holds,
    }
}
