use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::foundations::{BitString, Dyadic, DyadicInterval};
use crate::randomness_tests::{Level, TestFamily, TestKind};
use crate::reals::{roc_certificate_check, CertificateCheck, Modulus, NameStream};

/// `s(n) = r(n+2) + n + 2`.
pub fn interval_exponent(r: &Modulus, n: u64) -> u64 {
    r.at(n + 2) + n + 2
}

/// One enumerated open interval `]x_t, x_t + 2^-s(level)[`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageInterval {
    pub t: u64,
    pub lo: Dyadic,
    pub hi: Dyadic,
    pub level: u64,
}

/// Record of a staged run: intervals, pointer updates and the pointer
/// values reached within the stage budget.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageTrace {
    pub stages: u64,
    pub intervals: Vec<StageInterval>,
    /// `(e, t)`: pointer `p(e)` was set to `t` at stage `t`.
    pub updates: Vec<(u64, u64)>,
    /// Last value of each pointer that moved; untouched pointers are 0.
    pub pointers: BTreeMap<u64, u64>,
}

impl StageTrace {
    /// `p(e)[t]` replayed from the update log.
    pub fn pointer_at(&self, e: u64, t: u64) -> u64 {
        self.updates
            .iter()
            .filter(|&&(level, stage)| level == e && stage <= t)
            .map(|&(_, stage)| stage)
            .next_back()
            .unwrap_or(0)
    }

    pub fn count_at_level(&self, n: u64) -> u64 {
        self.intervals.iter().filter(|j| j.level == n).count() as u64
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "result", rename_all = "kebab-case")]
pub enum RocToSkt {
    Built {
        trace: StageTrace,
        family: TestFamily,
        exponents: Vec<u64>,
    },
    /// The name is finite, so its value is dyadic and no open interval
    /// needs to catch it.
    DyadicShortcut { value: Dyadic },
}

/// Runs `stages` stages of the interval enumeration for the name `f` with
/// tail rate `r`, and collects levels `0..=n_max` of the resulting test.
///
/// At stage `t+1` the least `m` with `Σ_{p(m) ≤ k ≤ t} 2^-f(k) > 2^-s(m)` is
/// chosen, `p(m)` moves to `t+1`, and `]x_t, x_t + 2^-s(m)[` is emitted.
pub fn roc_to_skt(f: &NameStream, r: &Modulus, stages: u64, n_max: u64) -> Result<RocToSkt> {
    if f.is_finite() {
        let n = f.available(u64::MAX);
        let value = (0..n)
            .map(|k| Dyadic::pow2_neg(f.get(k).expect("in range")))
            .sum();
        return Ok(RocToSkt::DyadicShortcut { value });
    }
    r.check_strictly_increasing(n_max + 2)?;
    if stages == 0 {
        return Err(Error::InvalidInput("need at least one stage".into()));
    }
    let terms = f.terms(stages - 1)?;
    if r.at(0) <= terms[0] {
        return Err(Error::PreconditionRefuted(format!(
            "r(0) = {} must exceed f(0) = {}",
            r.at(0),
            terms[0]
        )));
    }
    for n in 0..=n_max + 2 {
        if let CertificateCheck::Refuted { tail, bound, .. } =
            roc_certificate_check(f, r, n, stages - 1)?
        {
            return Err(Error::PreconditionRefuted(format!(
                "tail from r({n}) = {} weighs {tail} > {bound}",
                r.at(n)
            )));
        }
    }
    // prefix[j] = Σ_{k<j} 2^-f(k), so x_t = prefix[t+1]
    let mut prefix = Vec::with_capacity(terms.len() + 1);
    prefix.push(Dyadic::zero());
    for &v in &terms {
        let next = prefix.last().expect("non-empty") + &Dyadic::pow2_neg(v);
        if next > Dyadic::one() {
            return Err(Error::InvalidName {
                term: prefix.len() as u64 - 1,
            });
        }
        prefix.push(next);
    }
    let mut exps: Vec<u64> = Vec::new();
    let mut exp_of = |m: u64, r: &Modulus| -> u64 {
        while exps.len() as u64 <= m {
            exps.push(interval_exponent(r, exps.len() as u64));
        }
        exps[m as usize]
    };
    let mut p: Vec<u64> = Vec::new();
    let mut trace = StageTrace {
        stages,
        ..StageTrace::default()
    };
    for t in 0..stages {
        let x_t = &prefix[t as usize + 1];
        let mut chosen = None;
        for m in 0..=t {
            let start = p.get(m as usize).copied().unwrap_or(0);
            let weight = x_t - &prefix[start as usize];
            if weight > Dyadic::pow2_neg(exp_of(m, r)) {
                chosen = Some(m);
                break;
            }
        }
        let m = chosen.ok_or_else(|| {
            Error::PreconditionRefuted(format!("no level m <= {t} qualifies at stage {}", t + 1))
        })?;
        if p.len() as u64 <= m {
            p.resize(m as usize + 1, 0);
        }
        p[m as usize] = t + 1;
        trace.updates.push((m, t + 1));
        trace.pointers.insert(m, t + 1);
        let width = Dyadic::pow2_neg(exp_of(m, r));
        trace.intervals.push(StageInterval {
            t,
            lo: x_t.clone(),
            hi: x_t + &width,
            level: m,
        });
    }
    let exponents: Vec<u64> = (0..=n_max).map(|n| exp_of(n, r)).collect();
    let levels = exponents
        .iter()
        .enumerate()
        .map(|(n, &s)| {
            let mut strings: Vec<BitString> = Vec::new();
            for j in trace.intervals.iter().filter(|j| j.level == n as u64) {
                let open = DyadicInterval {
                    lo: j.lo.clone(),
                    hi: j.hi.clone(),
                };
                strings.extend(open.cylinders_meeting_open(s as usize));
            }
            strings.sort();
            Level::new(strings, false)
        })
        .collect();
    let family = TestFamily {
        kind: TestKind::StrongKurtz,
        levels,
        card: None,
    };
    Ok(RocToSkt::Built {
        trace,
        family,
        exponents,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "kebab-case")]
pub enum CountCheck {
    Holds { n: u64, count: u64, bound: String },
    Violated { n: u64, count: u64, bound: String },
}

impl CountCheck {
    pub fn holds(&self) -> bool {
        matches!(self, CountCheck::Holds { .. })
    }
}

/// `#{t : |J_t| = 2^-s(n)} ≤ 2^(r(n+2)+1)`.
pub fn count_bound_check(trace: &StageTrace, r: &Modulus, n: u64) -> CountCheck {
    let count = trace.count_at_level(n);
    let e = r.at(n + 2) + 1;
    let within = e >= 64 || count <= 1u64 << e;
    let bound = format!("2^{e}");
    if within {
        CountCheck::Holds { n, count, bound }
    } else {
        CountCheck::Violated { n, count, bound }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::randomness_tests::{validate, Validation};

    fn two_thirds(stages: u64) -> (StageTrace, TestFamily) {
        match roc_to_skt(
            &NameStream::progression(2, 1),
            &Modulus::shift(2),
            stages,
            3,
        )
        .unwrap()
        {
            RocToSkt::Built { trace, family, .. } => (trace, family),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn opening_stages() {
        let (trace, _) = two_thirds(8);
        // 1/2, 1/8, 1/32 each beat 2^-6; 1/128 does not
        let levels: Vec<u64> = trace.intervals.iter().map(|j| j.level).collect();
        assert_eq!(&levels[..4], &[0, 0, 0, 1]);
        assert_eq!(trace.intervals[0].lo, "1/2".parse().unwrap());
        assert_eq!(trace.intervals[0].hi, "33/64".parse().unwrap());
        assert_eq!(trace.pointer_at(0, 3), 3);
        assert_eq!(trace.pointer_at(1, 3), 0);
        assert_eq!(trace.pointer_at(1, 4), 4);
    }

    #[test]
    fn small_run_is_a_test() {
        let (trace, family) = two_thirds(200);
        assert!(!validate(&family, 3, usize::MAX).unwrap().is_refuted());
        for n in 0..=3 {
            assert!(count_bound_check(&trace, &Modulus::shift(2), n).holds());
        }
        assert!(matches!(
            validate(&family, 3, usize::MAX).unwrap(),
            Validation::Consistent { .. }
        ));
    }

    #[test]
    fn injected_interval_breaks_count() {
        let (mut trace, _) = two_thirds(50);
        let r = Modulus::shift(2);
        let extra = trace.intervals[0].clone();
        let bound = 1u64 << (r.at(2) + 1);
        while trace.count_at_level(0) <= bound {
            trace.intervals.push(StageInterval {
                level: 0,
                ..extra.clone()
            });
        }
        assert!(!count_bound_check(&trace, &r, 0).holds());
        assert!(count_bound_check(&trace, &r, 40).holds());
    }

    #[test]
    fn finite_names_shortcut() {
        let out = roc_to_skt(&NameStream::finite(vec![1, 2]), &Modulus::shift(2), 10, 2).unwrap();
        assert!(
            matches!(out, RocToSkt::DyadicShortcut { value } if value == "3/4".parse().unwrap())
        );
    }

    #[test]
    fn rate_must_exceed_first_term() {
        let err =
            roc_to_skt(&NameStream::progression(2, 3), &Modulus::shift(2), 10, 1).unwrap_err();
        assert!(matches!(err, Error::PreconditionRefuted(_)));
    }
}
