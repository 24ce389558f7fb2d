//! Martin-Löf and strong Kurtz test families with exact weight accounting,
//! and the two conversions between strong Kurtz tests and complexity rates.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::foundations::{BitStream, BitString, Dyadic};
use crate::kraft_chaitin::{kc_build_machine, KcRequest};
use crate::machines::{scan_domain, Budget, OutputFilter, PrefixMachine};
use crate::reals::Modulus;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TestKind {
    MartinLof,
    StrongKurtz,
}

/// One level `V_{f(n)}` in enumeration order, without repeats.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Level {
    pub strings: Vec<BitString>,
    /// The enumeration is known to have stopped.
    #[serde(default = "yes")]
    pub complete: bool,
}

fn yes() -> bool {
    true
}

impl Level {
    pub fn new(strings: Vec<BitString>, complete: bool) -> Self {
        let mut seen = BTreeSet::new();
        let strings = strings
            .into_iter()
            .filter(|s| seen.insert(s.clone()))
            .collect();
        Self { strings, complete }
    }

    pub fn first(&self, stage: usize) -> &[BitString] {
        &self.strings[..stage.min(self.strings.len())]
    }
}

/// A finite family of levels. JSON:
/// `{"kind":"strong-kurtz","levels":[["00","01"],["111"]]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TestFamily {
    pub kind: TestKind,
    pub levels: Vec<Level>,
    /// Announced level sizes, when the family is cardinality-computable.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub card: Option<Vec<u64>>,
}

#[derive(Deserialize)]
struct FamilyRepr {
    kind: TestKind,
    levels: Vec<LevelRepr>,
    #[serde(default)]
    card: Option<Vec<u64>>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum LevelRepr {
    Plain(Vec<BitString>),
    Full(Level),
}

impl<'de> Deserialize<'de> for TestFamily {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = FamilyRepr::deserialize(d)?;
        let levels = repr
            .levels
            .into_iter()
            .map(|l| match l {
                LevelRepr::Plain(s) => Level::new(s, true),
                LevelRepr::Full(l) => Level::new(l.strings, l.complete),
            })
            .collect();
        Ok(TestFamily {
            kind: repr.kind,
            levels,
            card: repr.card,
        })
    }
}

impl TestFamily {
    pub fn new(kind: TestKind, levels: Vec<Vec<BitString>>) -> Self {
        let levels = levels.into_iter().map(|l| Level::new(l, true)).collect();
        Self {
            kind,
            levels,
            card: None,
        }
    }

    pub fn with_card(mut self, card: Vec<u64>) -> Self {
        self.card = Some(card);
        self
    }

    pub fn level(&self, n: u64) -> Result<&Level> {
        self.levels.get(n as usize).ok_or_else(|| {
            Error::InvalidInput(format!(
                "family has {} levels, level {n} requested",
                self.levels.len()
            ))
        })
    }
}

/// `Σ 2^-|τ|` over the first `stage` strings of level `n`.
pub fn level_weight(t: &TestFamily, n: u64, stage: usize) -> Result<Dyadic> {
    Ok(t.level(n)?
        .first(stage)
        .iter()
        .map(|s| Dyadic::pow2_neg(s.len() as u64))
        .sum())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "reason", rename_all = "kebab-case")]
pub enum Violation {
    Weight { weight: Dyadic },
    MixedLengths { first: BitString, other: BitString },
    Cardinality { announced: u64, found: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum Validation {
    Consistent { n_max: u64, stage: usize },
    Refuted { level: u64, violation: Violation },
}

impl Validation {
    pub fn is_refuted(&self) -> bool {
        matches!(self, Validation::Refuted { .. })
    }
}

/// Checks levels `0..=n_max` at the given stage. A refutation is final: the
/// strings seen so far already break the definition.
pub fn validate(t: &TestFamily, n_max: u64, stage: usize) -> Result<Validation> {
    for n in 0..=n_max {
        let level = t.level(n)?;
        let seen = level.first(stage);
        let weight = level_weight(t, n, stage)?;
        if weight > Dyadic::pow2_neg(n) {
            return Ok(Validation::Refuted {
                level: n,
                violation: Violation::Weight { weight },
            });
        }
        if t.kind == TestKind::StrongKurtz {
            if let Some(other) = seen.iter().find(|s| s.len() != seen[0].len()) {
                return Ok(Validation::Refuted {
                    level: n,
                    violation: Violation::MixedLengths {
                        first: seen[0].clone(),
                        other: other.clone(),
                    },
                });
            }
        }
        if let Some(card) = &t.card {
            let announced = card.get(n as usize).copied().ok_or_else(|| {
                Error::InvalidInput(format!("no announced cardinality for level {n}"))
            })?;
            let found = seen.len() as u64;
            let exhausted = stage >= level.strings.len() && level.complete;
            if found > announced || (exhausted && found != announced) {
                return Ok(Validation::Refuted {
                    level: n,
                    violation: Violation::Cardinality { announced, found },
                });
            }
        }
    }
    Ok(Validation::Consistent { n_max, stage })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverageReport {
    pub level: u64,
    pub witness: Option<BitString>,
    pub stage: usize,
}

/// Looks for a prefix of `x` among the first `stage` strings of level `n`.
pub fn covers(t: &TestFamily, x: &BitStream, n: u64, stage: usize) -> Result<CoverageReport> {
    let seen = t.level(n)?.first(stage);
    let depth = seen.iter().map(BitString::len).max().unwrap_or(0);
    let prefix = x.prefix(depth)?;
    let witness = seen.iter().find(|s| s.is_prefix_of(&prefix)).cloned();
    Ok(CoverageReport {
        level: n,
        witness,
        stage,
    })
}

/// A strong Kurtz family read off a machine and a rate.
#[derive(Clone, Debug, Serialize)]
pub struct SktBuild {
    pub family: TestFamily,
    pub rates: Vec<u64>,
    /// Level `n` may be missing strings: its program-length bound
    /// `r(n) − n` exceeds the budget or the step bound cut the scan.
    pub budget_insufficient: Vec<bool>,
}

/// Level `n` collects the outputs of length `r(n)` of programs of length at
/// most `r(n) − n`.
pub fn skt_from_rate(
    m: &PrefixMachine,
    r: &Modulus,
    n_max: u64,
    budget: &Budget,
) -> Result<SktBuild> {
    r.check_strictly_increasing(n_max)?;
    let rates = r.table(n_max);
    let mut levels = Vec::new();
    let mut flags = Vec::new();
    for (n, &rn) in rates.iter().enumerate() {
        if rn < n as u64 {
            return Err(Error::InvalidRate(format!("r({n}) = {rn} is below {n}")));
        }
        let bound = (rn - n as u64) as usize;
        let level_budget = Budget {
            max_len: bound.min(budget.max_len),
            ..budget.clone()
        };
        let scan = scan_domain(m, &level_budget, &OutputFilter::Length(rn as usize))?;
        let outputs: BTreeSet<BitString> = scan.entries.into_iter().map(|(_, out)| out).collect();
        if bound < 64 && outputs.len() as u64 >= 1u64 << bound {
            return Err(Error::PreconditionRefuted(format!(
                "level {n} has {} strings, not fewer than 2^{bound}",
                outputs.len()
            )));
        }
        let incomplete = scan.step_limited || bound > budget.max_len;
        flags.push(incomplete);
        levels.push(Level::new(outputs.into_iter().collect(), !incomplete));
    }
    Ok(SktBuild {
        family: TestFamily {
            kind: TestKind::StrongKurtz,
            levels,
            card: None,
        },
        rates,
        budget_insufficient: flags,
    })
}

/// A machine coding the family plus the rate it certifies.
#[derive(Clone, Debug)]
pub struct RateBuild {
    pub machine: PrefixMachine,
    /// `r(0..=n_max)`.
    pub rates: Vec<u64>,
    pub constant: u64,
    pub requests: Vec<KcRequest>,
}

/// Codes each `τ` in level `2n+1` by a program of length `|τ| − n` and
/// returns `r(n)` = the common length at level `2(n+c)+1`.
pub fn rate_from_skt(t: &TestFamily, c: u64, n_max: u64) -> Result<RateBuild> {
    if t.kind != TestKind::StrongKurtz {
        return Err(Error::PreconditionRefuted(
            "family is not of strong Kurtz kind".into(),
        ));
    }
    let top = n_max + c;
    let needed = 2 * top + 1;
    if let Validation::Refuted { level, violation } = validate(t, needed, usize::MAX)? {
        return Err(Error::PreconditionRefuted(format!(
            "level {level} violates {violation:?}"
        )));
    }
    let mut requests = Vec::new();
    for n in 0..=top {
        for tau in &t.level(2 * n + 1)?.strings {
            requests.push(KcRequest(tau.len() - n as usize, tau.clone()));
        }
    }
    let machine = kc_build_machine(&requests)?;
    let rates = (0..=n_max)
        .map(|n| {
            let level = 2 * (n + c) + 1;
            t.level(level)?
                .strings
                .first()
                .map(|s| s.len() as u64)
                .ok_or(Error::LevelEmpty { level })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(RateBuild {
        machine,
        rates,
        constant: c,
        requests,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum KurtzCheck {
    PrefixFound { witness: BitString },
    NotFoundAtStage { stage: usize },
}

/// Searches the first `stage` strings of a prefix-free set of total weight
/// exactly 1 for a prefix of `x`.
pub fn kurtz_witness_check(s: &[BitString], x: &BitStream, stage: usize) -> Result<KurtzCheck> {
    let mut sorted: Vec<&BitString> = s.iter().collect();
    sorted.sort_by(|a, b| a.cmp_lex(b));
    for w in sorted.windows(2) {
        if w[0].is_prefix_of(w[1]) {
            return Err(Error::PrefixViolation(w[0].clone(), w[1].clone()));
        }
    }
    let weight: Dyadic = s.iter().map(|t| Dyadic::pow2_neg(t.len() as u64)).sum();
    if weight != Dyadic::one() {
        return Err(Error::WeightNotOne {
            weight: weight.to_string(),
        });
    }
    let seen = &s[..stage.min(s.len())];
    let depth = seen.iter().map(BitString::len).max().unwrap_or(0);
    let prefix = x.prefix(depth)?;
    Ok(match seen.iter().find(|t| t.is_prefix_of(&prefix)) {
        Some(w) => KurtzCheck::PrefixFound { witness: w.clone() },
        None => KurtzCheck::NotFoundAtStage { stage },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::foundations::bs;
    use crate::machines::{complexity, validate_table};

    fn three() -> PrefixMachine {
        validate_table(vec![
            (bs("0"), bs("00")),
            (bs("10"), bs("01")),
            (bs("11"), bs("111")),
        ])
        .unwrap()
    }

    #[test]
    fn weights() {
        let t = TestFamily::new(
            TestKind::MartinLof,
            vec![vec![], vec![bs("000"), bs("001"), bs("000")]],
        );
        assert_eq!(level_weight(&t, 1, 10).unwrap(), "1/4".parse().unwrap());
        assert_eq!(level_weight(&t, 0, 10).unwrap(), Dyadic::zero());
    }

    #[test]
    fn three_entry_levels() {
        let b = skt_from_rate(&three(), &Modulus::shift(2), 2, &Budget::new(20, 100)).unwrap();
        assert_eq!(b.family.levels[0].strings, vec![bs("00"), bs("01")]);
        assert_eq!(b.family.levels[1].strings, vec![bs("111")]);
        assert!(b.family.levels[2].strings.is_empty());
        assert_eq!(
            validate(&b.family, 2, usize::MAX).unwrap(),
            Validation::Consistent {
                n_max: 2,
                stage: usize::MAX
            }
        );
    }

    #[test]
    fn refutations() {
        let mixed = TestFamily::new(
            TestKind::StrongKurtz,
            vec![vec![bs("0")], vec![bs("00")], vec![bs("000"), bs("0010")]],
        );
        assert!(matches!(
            validate(&mixed, 2, 10).unwrap(),
            Validation::Refuted { level: 2, .. }
        ));
        let heavy = TestFamily::new(TestKind::MartinLof, vec![vec![bs("0"), bs("10")]]);
        assert!(matches!(
            validate(&heavy, 0, 10).unwrap(),
            Validation::Consistent { .. }
        ));
        let heavy = TestFamily::new(TestKind::MartinLof, vec![vec![], vec![bs("0"), bs("1000")]]);
        assert!(matches!(
            validate(&heavy, 1, 10).unwrap(),
            Validation::Refuted {
                level: 1,
                violation: Violation::Weight { .. }
            }
        ));
        assert!(matches!(
            validate(&heavy, 1, 1).unwrap(),
            Validation::Consistent { .. }
        ));
        let card = TestFamily::new(TestKind::StrongKurtz, vec![vec![bs("0")]]).with_card(vec![2]);
        assert!(validate(&card, 0, 10).unwrap().is_refuted());
    }

    #[test]
    fn coverage() {
        let x = BitStream::periodic(&bs("01"));
        let t = TestFamily::new(TestKind::StrongKurtz, vec![vec![bs("01")], vec![bs("11")]]);
        assert_eq!(covers(&t, &x, 0, 5).unwrap().witness, Some(bs("01")));
        assert_eq!(covers(&t, &x, 1, 5).unwrap().witness, None);
    }

    #[test]
    fn singleton_levels_round_trip() {
        // level 2n+1 = {1^(3n+3)}, other levels empty
        let levels: Vec<Vec<BitString>> = (0..8u64)
            .map(|k| {
                if k % 2 == 1 {
                    vec![BitString::ones(3 * (k as usize / 2) + 3)]
                } else {
                    vec![]
                }
            })
            .collect();
        let t = TestFamily::new(TestKind::StrongKurtz, levels);
        let built = rate_from_skt(&t, 0, 3).unwrap();
        for n in 0..=3u64 {
            let tau = BitString::ones(3 * n as usize + 3);
            assert!(built
                .requests
                .contains(&KcRequest(2 * n as usize + 3, tau.clone())));
            let k = complexity(&built.machine, &tau, &Budget::new(20, 0)).unwrap();
            assert_eq!(k.value, Some(2 * n + 3));
        }
        assert_eq!(built.rates, vec![3, 6, 9, 12]);
        let empty = TestFamily::new(TestKind::StrongKurtz, vec![vec![]; 4]);
        assert_eq!(
            rate_from_skt(&empty, 0, 1).unwrap_err(),
            Error::LevelEmpty { level: 1 }
        );
    }

    #[test]
    fn kurtz_complete_codes() {
        let x = BitStream::random(3);
        let code = [bs("0"), bs("10"), bs("11")];
        assert!(matches!(
            kurtz_witness_check(&code, &x, 3).unwrap(),
            KurtzCheck::PrefixFound { .. }
        ));
        let short = [bs("0"), bs("10")];
        assert!(matches!(
            kurtz_witness_check(&short, &x, 3),
            Err(Error::WeightNotOne { .. })
        ));
        let bad = [bs("0"), bs("01"), bs("1")];
        assert!(matches!(
            kurtz_witness_check(&bad, &x, 3),
            Err(Error::PrefixViolation(..))
        ));
    }
}
