use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::foundations::{
    ceil_log2, ceil_log2_log2, floor_log2, gamma_encode, BitString, NatSetView,
};
use crate::machines::{complexity, Budget, ComplexityStatus, PrefixMachine, TableMachine};

/// Elias delta code: `γ(|bin n|)` followed by `bin n` without its leading 1.
pub fn delta_encode(n: u64) -> BitString {
    assert!(n >= 1, "delta code needs n >= 1");
    let width = floor_log2(n) as usize + 1;
    let mut out = gamma_encode(width as u64);
    out.extend_from(&BitString::from_u64(n, width - 1));
    out
}

/// Table mapping `δ(n)·bin(k)` to `A↾n` for `1 ≤ n ≤ n_max`, where
/// `k = |A ∩ [0, n)|` is written with `⌊log n⌋ + 1` bits.
pub fn ce_prefix_table(a: &NatSetView, n_max: u64) -> Result<TableMachine> {
    let mut entries = Vec::new();
    for n in 1..=n_max {
        let prefix = a.restriction(n)?;
        let k = prefix.bits().iter().filter(|&&b| b).count() as u64;
        let mut key = delta_encode(n);
        key.extend_from(&BitString::from_u64(k, floor_log2(n) as usize + 1));
        entries.push((key, prefix));
    }
    TableMachine::new(format!("ce-prefixes({})", a.label()), entries)
}

/// `2⌈log n⌉ + 2⌈log log n⌉ + c`; the ceilings make the bound at least the
/// real-valued one, so exceeding it is a sound refutation.
pub fn log_bound(n: u64, c: u64) -> u64 {
    2 * ceil_log2(n) + 2 * ceil_log2_log2(n) + c
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "kebab-case")]
pub enum LogBoundCheck {
    Consistent { n_max: u64, undecided: Vec<u64> },
    Refuted { n: u64, value: u64, bound: u64 },
}

/// Looks for `n ≤ n_max` (`n ≥ 2`) with an exact `K_M(A↾n)` above the bound.
/// Points with only an upper bound or no witness cannot refute and are
/// listed as undecided when their value exceeds the bound.
pub fn ce_log_bound_check(
    a: &NatSetView,
    m: &PrefixMachine,
    c: u64,
    n_max: u64,
    budget: &Budget,
) -> Result<LogBoundCheck> {
    let mut undecided = Vec::new();
    for n in 2..=n_max {
        let tau = a.restriction(n)?;
        let k = complexity(m, &tau, budget)?;
        let bound = log_bound(n, c);
        match (k.value, k.status) {
            (Some(v), ComplexityStatus::Exact) if v > bound => {
                return Ok(LogBoundCheck::Refuted { n, value: v, bound })
            }
            (None, ComplexityStatus::Exact) => {
                return Ok(LogBoundCheck::Refuted {
                    n,
                    value: u64::MAX,
                    bound,
                })
            }
            (Some(v), _) if v <= bound => {}
            _ => undecided.push(n),
        }
    }
    Ok(LogBoundCheck::Consistent { n_max, undecided })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::foundations::{bs, gamma_decode};
    use crate::machines::Interpreter;

    #[test]
    fn delta_codes() {
        assert_eq!(delta_encode(1), bs("1"));
        assert_eq!(delta_encode(2), bs("0100"));
        assert_eq!(delta_encode(5), bs("01101"));
        for n in 1..500u64 {
            let d = delta_encode(n);
            let (w, used) = gamma_decode(d.bits()).unwrap();
            assert_eq!(used as u64 + w - 1, d.len() as u64);
        }
    }

    #[test]
    fn evens_are_logarithmic() {
        let a = NatSetView::evens(64);
        let table = ce_prefix_table(&a, 40).unwrap();
        let u = PrefixMachine::Interpreter(Interpreter::new("u", vec![Arc::new(table)]));
        let out = ce_log_bound_check(&a, &u, 8, 40, &Budget::new(30, 10_000)).unwrap();
        assert_eq!(
            out,
            LogBoundCheck::Consistent {
                n_max: 40,
                undecided: vec![]
            }
        );
        assert_eq!(
            ce_log_bound_check(&a, &u, 0, 1, &Budget::new(4, 10)).unwrap(),
            LogBoundCheck::Consistent {
                n_max: 1,
                undecided: vec![]
            }
        );
    }

    #[test]
    fn incompressible_refutes() {
        let a = NatSetView::from_stream(&crate::foundations::BitStream::random(5), 64);
        let out = ce_log_bound_check(
            &a,
            &PrefixMachine::reference(),
            0,
            16,
            &Budget::new(30, 10_000),
        )
        .unwrap();
        assert!(matches!(out, LogBoundCheck::Refuted { .. }));
    }
}
