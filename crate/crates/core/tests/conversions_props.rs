use proptest::prelude::*;
use rcw_core::conversions::{
    carry_counter, count_bound_check, interval_exponent, lc_to_roc, roc_to_skt, tail_bound_check,
    RocToSkt, SearchStatus,
};
use rcw_core::foundations::{BitString, Dyadic};
use rcw_core::machines::{Budget, PrefixMachine};
use rcw_core::randomness_tests::validate;
use rcw_core::reals::{partial_sum, IncreasingDyadicStream, Modulus, NameStream};
use rcw_core::Error;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn roc_intervals_start_at_partial_sums(a in 1u64..4, b in 1u64..4) {
        let f = NameStream::progression(a, b);
        let r = Modulus::shift(b + 1);
        let out = roc_to_skt(&f, &r, 150, 3).unwrap();
        let RocToSkt::Built { trace, family, exponents } = out else {
            return Err(TestCaseError::fail("infinite name took the dyadic shortcut"));
        };
        prop_assert!(!validate(&family, 3, usize::MAX).unwrap().is_refuted());
        for j in &trace.intervals {
            prop_assert_eq!(&j.lo, &partial_sum(&f, j.t).unwrap());
            let width = Dyadic::pow2_neg(interval_exponent(&r, j.level));
            prop_assert_eq!(&j.hi - &j.lo, width);
        }
        for (n, &s) in exponents.iter().enumerate() {
            prop_assert_eq!(s, interval_exponent(&r, n as u64));
            prop_assert!(count_bound_check(&trace, &r, n as u64).holds());
        }
        for e in 0..4 {
            let mut previous = 0;
            for t in 0..150 {
                let p = trace.pointer_at(e, t);
                prop_assert!(p >= previous);
                previous = p;
            }
        }
    }
}

/// Every pattern of length 2 to 6 with at least one 1: 119 pipelines.
#[test]
fn carries_step_by_one() {
    let r = Modulus::pow2(5);
    let u = PrefixMachine::reference();
    let mut pipelines = 0;
    for len in 2..=6usize {
        for v in 1..(1u64 << len) {
            let pattern = BitString::from_u64(v, len);
            let xs = IncreasingDyadicStream::periodic_approximants(&pattern);
            let out = lc_to_roc(&xs, &r, &u, &Budget::new(28, 4096), 140, 3).unwrap();
            assert_eq!(out.status, SearchStatus::Complete, "{}", pattern.to_text());
            for (t, &st) in out.s.iter().enumerate() {
                assert_eq!(out.name.sum_through_block(t), xs.at(st));
            }
            let total = out.name.values().len() as u64;
            for n in 0..=2u64 {
                let report = carry_counter(&out.name.blocks, r.at(n));
                assert!(report.step_bound_holds, "{} at n={n}", pattern.to_text());
                assert!(report.values.windows(2).all(|w| w[0] <= w[1]));
                assert!(tail_bound_check(&out.name.name, &r, n, total).holds());
            }
            pipelines += 1;
        }
    }
    assert_eq!(pipelines, 119);
}

#[test]
fn finite_names_take_the_shortcut() {
    let out = roc_to_skt(&NameStream::finite(vec![1, 3]), &Modulus::shift(2), 10, 2).unwrap();
    assert!(matches!(out, RocToSkt::DyadicShortcut { value } if value == "5/8".parse().unwrap()));
}

#[test]
fn bad_certificates_are_refused() {
    let slow = roc_to_skt(&NameStream::progression(1, 1), &Modulus::shift(0), 100, 2);
    assert!(matches!(slow, Err(Error::PreconditionRefuted(_))));
    let not_above = roc_to_skt(&NameStream::progression(2, 3), &Modulus::shift(3), 100, 2);
    assert!(matches!(not_above, Err(Error::PreconditionRefuted(_))));
}

#[test]
fn single_jump_carries_once() {
    let report = carry_counter(&[vec![4], vec![4]], 3);
    assert_eq!(report.carries, vec![1]);
    let none = carry_counter(&[vec![1, 2, 3], vec![2]], 3);
    assert!(none.carries.is_empty());
}

#[test]
fn duplicate_heavy_name_breaks_tail_bound() {
    let f = NameStream::finite(vec![6; 60]);
    let check = tail_bound_check(&f, &Modulus::shift(1), 2, 60);
    assert!(!check.holds());
    assert!(tail_bound_check(&f, &Modulus::shift(1), 0, 60).holds());
}

#[test]
fn dyadic_limit_takes_the_shortcut() {
    let xs = IncreasingDyadicStream::finite(vec![Dyadic::zero(), "1/4".parse().unwrap()]);
    let out = lc_to_roc(
        &xs,
        &Modulus::shift(1),
        &PrefixMachine::reference(),
        &Budget::new(8, 100),
        10,
        2,
    )
    .unwrap();
    assert_eq!(out.status, SearchStatus::DyadicShortcut);
    assert_eq!(out.name.values(), vec![2]);
    assert_eq!(out.name.blocks, vec![vec![2u64]]);
}
