use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_rational::Ratio;
use num_traits::{One, Zero};

use super::interpreter::{Feed, OutputFilter, Parser};
use super::{Budget, ComplexityStatus, ComplexityValue, Interpreter, PrefixMachine};
use crate::error::{Error, Result};
use crate::foundations::{BitString, Dyadic, DyadicInterval};

/// Halting programs found by a budgeted scan, in length-lexicographic
/// order of the program.
#[derive(Clone, Debug, Default)]
pub struct DomainScan {
    pub entries: Vec<(BitString, BitString)>,
    /// Some program prefix within the length bound ran out of steps.
    pub step_limited: bool,
    /// Shortest program prefix cut by the step bound whose output so far
    /// agreed with the filter.
    pub shortest_cut: Option<usize>,
}

/// Domain size per program length.
#[derive(Clone, Debug, Default)]
pub struct LengthCounts {
    pub counts: BTreeMap<usize, BigUint>,
    pub step_limited: bool,
}

impl LengthCounts {
    pub fn total(&self) -> BigUint {
        self.counts.values().sum()
    }

    /// `Σ 2^-|σ|` over the counted programs.
    pub fn weight(&self) -> Dyadic {
        self.counts
            .iter()
            .map(|(&len, c)| Dyadic::new(BigInt::from(c.clone()), len as u64))
            .sum()
    }
}

enum Event<'e> {
    Halt {
        program: &'e BitString,
        output: &'e BitString,
    },
    Bulk {
        len: usize,
        free_bits: u64,
    },
    Cut {
        len: usize,
        compatible: bool,
    },
}

struct Walker<'w, F: FnMut(Event<'_>)> {
    budget: &'w Budget,
    filter: &'w OutputFilter,
    collapse: bool,
    program: BitString,
    sink: F,
}

impl<F: FnMut(Event<'_>)> Walker<'_, F> {
    fn visible_compatible(&self, p: &Parser<'_>) -> bool {
        let excess = p.steps - self.budget.max_steps;
        let visible = p.out_len.saturating_sub(excess);
        match self.filter {
            OutputFilter::Any => true,
            OutputFilter::Length(l) => visible <= *l as u64,
            OutputFilter::Exact(t) => p.output.prefix(visible as usize).is_prefix_of(t),
        }
    }

    fn descend(&mut self, parser: Parser<'_>) {
        for bit in [false, true] {
            if self.program.len() + 1 > self.budget.max_len {
                return;
            }
            let mut p = parser.clone();
            self.program.push(bit);
            let fed = p.feed(bit);
            self.visit(fed, p);
            self.program = self.program.prefix(self.program.len() - 1);
        }
    }

    fn visit(&mut self, fed: Feed, p: Parser<'_>) {
        if fed == Feed::Dead {
            return;
        }
        if p.steps > self.budget.max_steps {
            let compatible = self.visible_compatible(&p);
            (self.sink)(Event::Cut {
                len: p.read,
                compatible,
            });
            return;
        }
        if !self.filter.compatible(p.out_len, &p.output) {
            return;
        }
        if fed == Feed::Halted {
            if self.filter.accepts(p.out_len, &p.output) {
                (self.sink)(Event::Halt {
                    program: &self.program,
                    output: &p.output,
                });
            }
            return;
        }
        if p.read as u64 + p.min_remaining() > self.budget.max_len as u64 {
            return;
        }
        if self.collapse && !self.filter.needs_bits() {
            if let Some((free, extra, final_len)) = p.free_tail() {
                let len = p.read + free as usize;
                let wanted = self.filter.target_len().is_none_or(|l| l == final_len);
                if len <= self.budget.max_len && wanted {
                    if p.steps + extra <= self.budget.max_steps {
                        (self.sink)(Event::Bulk {
                            len,
                            free_bits: free,
                        });
                    } else {
                        (self.sink)(Event::Cut {
                            len: p.read,
                            compatible: true,
                        });
                    }
                }
                return;
            }
        }
        self.descend(p);
    }
}

fn walk(
    u: &Interpreter,
    budget: &Budget,
    filter: &OutputFilter,
    collapse: bool,
    sink: impl FnMut(Event<'_>),
) {
    let parser = Parser::new(u, filter, !collapse);
    let mut w = Walker {
        budget,
        filter,
        collapse,
        program: BitString::new(),
        sink,
    };
    w.descend(parser);
}

/// All programs of length `≤ L` halting within `t` steps whose output
/// passes `filter`.
pub fn scan_domain(
    m: &PrefixMachine,
    budget: &Budget,
    filter: &OutputFilter,
) -> Result<DomainScan> {
    budget.check()?;
    let mut scan = DomainScan::default();
    match m {
        PrefixMachine::Table(t) => {
            scan.entries = t
                .entries()
                .filter(|(k, v)| k.len() <= budget.max_len && filter.accepts(v.len() as u64, v))
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect();
        }
        PrefixMachine::Interpreter(u) => {
            walk(u, budget, filter, false, |e| match e {
                Event::Halt { program, output } => {
                    scan.entries.push((program.clone(), output.clone()))
                }
                Event::Cut { len, compatible } => {
                    scan.step_limited = true;
                    if compatible {
                        scan.shortest_cut = Some(scan.shortest_cut.map_or(len, |c| c.min(len)));
                    }
                }
                Event::Bulk { .. } => unreachable!("bulk events need collapsing"),
            });
            scan.entries.sort();
        }
    }
    Ok(scan)
}

pub fn enumerate_domain(m: &PrefixMachine, budget: &Budget) -> Result<DomainScan> {
    scan_domain(m, budget, &OutputFilter::Any)
}

/// Counts halting programs per length without listing them.
pub fn length_counts(m: &PrefixMachine, budget: &Budget) -> Result<LengthCounts> {
    budget.check()?;
    let mut counts = LengthCounts::default();
    match m {
        PrefixMachine::Table(t) => {
            for (k, _) in t.entries().filter(|(k, _)| k.len() <= budget.max_len) {
                *counts.counts.entry(k.len()).or_default() += 1u32;
            }
        }
        PrefixMachine::Interpreter(u) => {
            walk(u, budget, &OutputFilter::Any, true, |e| match e {
                Event::Halt { program, .. } => {
                    *counts.counts.entry(program.len()).or_default() += 1u32
                }
                Event::Bulk { len, free_bits } => {
                    *counts.counts.entry(len).or_default() += BigUint::one() << free_bits
                }
                Event::Cut { .. } => counts.step_limited = true,
            });
        }
    }
    Ok(counts)
}

/// Budgeted `K_M(τ)`.
pub fn complexity(m: &PrefixMachine, tau: &BitString, budget: &Budget) -> Result<ComplexityValue> {
    let scan = scan_domain(m, budget, &OutputFilter::Exact(tau.clone()))?;
    let witness = scan.entries.iter().map(|(p, _)| p).min().cloned();
    let status = match (&witness, m) {
        (Some(w), _) => match scan.shortest_cut {
            Some(c) if c < w.len() => ComplexityStatus::UpperBound,
            _ => ComplexityStatus::Exact,
        },
        (None, PrefixMachine::Table(t)) if t.max_key_len() <= budget.max_len => {
            ComplexityStatus::Exact
        }
        (None, _) => ComplexityStatus::Unknown,
    };
    Ok(ComplexityValue {
        value: witness.as_ref().map(|w| w.len() as u64),
        status,
        budget: budget.clone(),
        witness,
    })
}

/// `Σ 2^-|σ|` over the programs found within the budget.
pub fn omega_lower(m: &PrefixMachine, budget: &Budget) -> Result<Dyadic> {
    Ok(length_counts(m, budget)?.weight())
}

/// Bounds on `2^-(r/a)` for `0 ≤ r < a`, as numerators over `2^p`.
fn root_bounds(r: u64, a: u64, p: u64) -> (BigUint, BigUint) {
    let one = BigUint::one();
    if r == 0 {
        let exact = &one << p;
        return (exact.clone(), exact);
    }
    // Largest m with m^a <= 2^(p·a - r).
    let target = &one << (p * a - r);
    let (mut lo, mut hi) = (BigUint::zero(), &one << p);
    while &lo + 1u32 < hi {
        let mid: BigUint = (&lo + &hi) >> 1u32;
        if mid.pow(a as u32) <= target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    if lo.pow(a as u32) == target {
        (lo.clone(), lo)
    } else {
        let up = &lo + 1u32;
        (lo, up)
    }
}

/// Interval containing `Σ 2^(-|σ|/s)` over the programs found within the
/// budget, each term rounded outward to `precision` fractional bits.
pub fn omega_s_bounds(
    m: &PrefixMachine,
    s: Ratio<u64>,
    budget: &Budget,
    precision: u64,
) -> Result<DyadicInterval> {
    if *s.numer() == 0 || s >= Ratio::from_integer(1) {
        return Err(Error::InvalidInput(format!(
            "s must lie in (0, 1), got {s}"
        )));
    }
    let (a, c) = (*s.numer(), *s.denom());
    let counts = length_counts(m, budget)?;
    let (mut lo, mut hi) = (Dyadic::zero(), Dyadic::zero());
    for (&len, count) in &counts.counts {
        let scaled = len as u64 * c;
        let (q, r) = (scaled / a, scaled % a);
        let (l, h) = root_bounds(r, a, precision);
        let count = BigInt::from(count.clone());
        lo += &Dyadic::new(&count * BigInt::from(l), q + precision);
        hi += &Dyadic::new(&count * BigInt::from(h), q + precision);
    }
    DyadicInterval::new(lo, hi)
}
