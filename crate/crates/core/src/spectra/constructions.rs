use num_integer::Roots;
use serde::Serialize;

use crate::error::Result;
use crate::foundations::{BitStream, BitString};
use crate::machines::{enumerate_domain, Budget, PrefixMachine, TableMachine};
use crate::reals::IncreasingDyadicStream;

/// Zeros at the square positions `1, 4, 9, …` (1-based), the bits of `ω`
/// in order everywhere else.
pub fn square_interleave(omega: &BitStream) -> BitStream {
    let src = omega.clone();
    let out = BitStream::from_fn(format!("square-interleave({})", omega.label()), move |i| {
        let p = i + 1;
        let root = p.sqrt();
        if root * root == p {
            false
        } else {
            src.bit(p - 1 - root).unwrap_or(false)
        }
    });
    match omega.horizon() {
        // keep reads inside the source's horizon
        Some(h) => out.with_horizon(h + h.sqrt()),
        None => out,
    }
}

/// Recovers the source bits from the non-square positions of the first `n`
/// output bits.
pub fn square_extract(x: &BitStream, n: u64) -> Result<BitString> {
    (0..n)
        .filter(|&i| {
            let p = i + 1;
            let r = p.sqrt();
            r * r != p
        })
        .map(|i| x.bit(i))
        .collect()
}

/// A branch of the sum machine that never synchronised within the budget.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UnmetWait {
    pub program: BitString,
    pub branch: u8,
}

#[derive(Clone, Debug)]
pub struct SumMachine {
    pub machine: PrefixMachine,
    pub unmet: Vec<UnmetWait>,
}

fn right_neighbour(rho: &BitString) -> BitString {
    rho.successor()
        .unwrap_or_else(|| BitString::ones(rho.len()))
}

/// For each `σ` with `U(σ) = τ` and `a ∈ {0,1}`: wait (up to `stages`) for
/// the first `t` where the `a`-th summand's approximation starts with `τ`,
/// then map `σa00, σa01, σa10` to `z_t↾|τ|` and its two right neighbours,
/// where `z_t = x_t + y_t`. Right neighbours saturate at `1^|τ|`.
pub fn sum_machine(
    u: &PrefixMachine,
    budget: &Budget,
    xs: &IncreasingDyadicStream,
    ys: &IncreasingDyadicStream,
    stages: u64,
) -> Result<SumMachine> {
    let domain = enumerate_domain(u, budget)?;
    let mut entries = Vec::new();
    let mut unmet = Vec::new();
    for (sigma, tau) in &domain.entries {
        let l = tau.len();
        for (branch, summand) in [(0u8, xs), (1u8, ys)] {
            let hit = (0..=stages).find(|&t| summand.at(t).prefix_bits(l) == *tau);
            let Some(t) = hit else {
                unmet.push(UnmetWait {
                    program: sigma.clone(),
                    branch,
                });
                continue;
            };
            let rho1 = (&xs.at(t) + &ys.at(t)).prefix_bits(l);
            let rho2 = right_neighbour(&rho1);
            let rho3 = right_neighbour(&rho2);
            let a = branch == 1;
            for (tail, rho) in [
                ([a, false, false], rho1),
                ([a, false, true], rho2),
                ([a, true, false], rho3),
            ] {
                let mut program = sigma.clone();
                program.extend_from(&BitString::from_bits(tail.to_vec()));
                entries.push((program, rho));
            }
        }
    }
    let machine = PrefixMachine::Table(TableMachine::new(format!("sum({})", u.id()), entries)?);
    Ok(SumMachine { machine, unmet })
}
