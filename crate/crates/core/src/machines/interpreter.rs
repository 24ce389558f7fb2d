use std::sync::Arc;

use super::TableMachine;
use crate::error::{Error, Result};
use crate::foundations::{gamma_encode, gamma_len, BitString};

/// The reference self-delimiting interpreter.
///
/// Programs start with an opcode: `0` literal, `10` repeat, `11` table call.
/// * literal: `γ(|τ|+1)` then the payload `τ`.
/// * repeat: `γ(count)`, `γ(plen)`, then `plen` pattern bits; outputs the
///   first `count` bits of `pattern^ω`. Needs `plen ≤ count`.
/// * table call: `γ(i+1)` then a program of auxiliary table `i`.
///
/// Every program bit read and every output bit written costs one step.
#[derive(Clone, Debug)]
pub struct Interpreter {
    id: String,
    aux: Vec<Arc<TableMachine>>,
}

impl Interpreter {
    pub fn new(id: impl Into<String>, aux: Vec<Arc<TableMachine>>) -> Self {
        Self { id: id.into(), aux }
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn aux(&self) -> &[Arc<TableMachine>] {
        &self.aux
    }
}

pub fn literal_encode(tau: &BitString) -> BitString {
    let mut p = BitString::from_bits(vec![false]);
    p.extend_from(&gamma_encode(tau.len() as u64 + 1));
    p.extend_from(tau);
    p
}

pub fn repeat_encode(count: u64, pattern: &BitString) -> Result<BitString> {
    let plen = pattern.len() as u64;
    if plen == 0 || plen > count {
        return Err(Error::InvalidInput(format!(
            "repeat needs 1 <= pattern length <= count, got {plen} and {count}"
        )));
    }
    let mut p = BitString::from_bits(vec![true, false]);
    p.extend_from(&gamma_encode(count));
    p.extend_from(&gamma_encode(plen));
    p.extend_from(pattern);
    Ok(p)
}

pub fn table_call_encode(index: usize, program: &BitString) -> BitString {
    let mut p = BitString::from_bits(vec![true, true]);
    p.extend_from(&gamma_encode(index as u64 + 1));
    p.extend_from(program);
    p
}

/// Bits a table call adds in front of an auxiliary program: the
/// additive constant in `K_U(τ) ≤ K_T(τ) + c` for auxiliary table `T`.
pub fn table_call_overhead(index: usize) -> usize {
    2 + gamma_len(index as u64 + 1) as usize
}

/// Which outputs a scan cares about.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OutputFilter {
    Any,
    Length(usize),
    Exact(BitString),
}

impl OutputFilter {
    pub(crate) fn target_len(&self) -> Option<u64> {
        match self {
            OutputFilter::Any => None,
            OutputFilter::Length(l) => Some(*l as u64),
            OutputFilter::Exact(t) => Some(t.len() as u64),
        }
    }

    /// The output emitted so far can still grow into an accepted one.
    pub(crate) fn compatible(&self, out_len: u64, output: &BitString) -> bool {
        match self {
            OutputFilter::Any => true,
            OutputFilter::Length(l) => out_len <= *l as u64,
            OutputFilter::Exact(t) => output.is_prefix_of(t),
        }
    }

    pub(crate) fn accepts(&self, out_len: u64, output: &BitString) -> bool {
        match self {
            OutputFilter::Any => true,
            OutputFilter::Length(l) => out_len == *l as u64,
            OutputFilter::Exact(t) => output == t,
        }
    }

    pub(crate) fn needs_bits(&self) -> bool {
        matches!(self, OutputFilter::Exact(_))
    }
}

#[derive(Clone, Copy, Debug)]
enum Role {
    LiteralLen,
    RepeatCount,
    RepeatPlen { count: u64 },
    TableIndex,
}

#[derive(Clone, Debug)]
enum Phase {
    Opcode,
    OpcodeOne,
    Gamma {
        role: Role,
        zeros: u32,
        value: u64,
        remaining: Option<u32>,
        lo: u64,
        hi: u64,
    },
    Literal {
        remaining: u64,
    },
    Pattern {
        count: u64,
        plen: u64,
        pattern: Vec<bool>,
    },
    Table {
        aux: usize,
        node: usize,
    },
    Halted,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Feed {
    More,
    Halted,
    Dead,
}

/// Resumable bit-at-a-time parse of one program.
#[derive(Clone, Debug)]
pub(crate) struct Parser<'a> {
    machine: &'a Interpreter,
    target: Option<u64>,
    track: bool,
    phase: Phase,
    pub read: usize,
    pub steps: u64,
    pub out_len: u64,
    pub output: BitString,
}

impl<'a> Parser<'a> {
    pub(crate) fn new(machine: &'a Interpreter, filter: &OutputFilter, track: bool) -> Self {
        Self {
            machine,
            target: filter.target_len(),
            track: track || filter.needs_bits(),
            phase: Phase::Opcode,
            read: 0,
            steps: 0,
            out_len: 0,
            output: BitString::new(),
        }
    }

    fn emit(&mut self, bit: bool) {
        self.steps += 1;
        self.out_len += 1;
        if self.track {
            self.output.push(bit);
        }
    }

    fn gamma(role: Role, lo: u64, hi: u64) -> Phase {
        Phase::Gamma {
            role,
            zeros: 0,
            value: 0,
            remaining: None,
            lo,
            hi,
        }
    }

    fn enter_table(&mut self, aux: usize) -> Feed {
        self.phase = Phase::Table {
            aux,
            node: self.machine.aux[aux].root(),
        };
        self.check_table_output(aux, self.machine.aux[aux].root())
    }

    fn check_table_output(&mut self, aux: usize, node: usize) -> Feed {
        let table = Arc::clone(&self.machine.aux[aux]);
        match table.output_at(node) {
            Some(out) => {
                for &b in out.bits() {
                    self.emit(b);
                }
                self.phase = Phase::Halted;
                Feed::Halted
            }
            None => Feed::More,
        }
    }

    fn finish_gamma(&mut self, role: Role, v: u64) -> Feed {
        match role {
            Role::LiteralLen => {
                if v == 1 {
                    self.phase = Phase::Halted;
                    return Feed::Halted;
                }
                self.phase = Phase::Literal { remaining: v - 1 };
            }
            Role::RepeatCount => self.phase = Self::gamma(Role::RepeatPlen { count: v }, 1, v),
            Role::RepeatPlen { count } => {
                self.phase = Phase::Pattern {
                    count,
                    plen: v,
                    pattern: Vec::with_capacity(v as usize),
                }
            }
            Role::TableIndex => return self.enter_table(v as usize - 1),
        }
        Feed::More
    }

    pub(crate) fn feed(&mut self, bit: bool) -> Feed {
        self.read += 1;
        self.steps += 1;
        let phase = std::mem::replace(&mut self.phase, Phase::Halted);
        match phase {
            Phase::Halted => Feed::Dead,
            Phase::Opcode => {
                self.phase = if bit {
                    Phase::OpcodeOne
                } else {
                    let (lo, hi) = match self.target {
                        Some(l) => (l + 1, l + 1),
                        None => (1, u64::MAX),
                    };
                    Self::gamma(Role::LiteralLen, lo, hi)
                };
                Feed::More
            }
            Phase::OpcodeOne => {
                if bit {
                    if self.machine.aux.is_empty() {
                        return Feed::Dead;
                    }
                    self.phase = Self::gamma(Role::TableIndex, 1, self.machine.aux.len() as u64);
                } else {
                    let (lo, hi) = match self.target {
                        Some(0) => return Feed::Dead,
                        Some(l) => (l, l),
                        None => (1, u64::MAX),
                    };
                    self.phase = Self::gamma(Role::RepeatCount, lo, hi);
                }
                Feed::More
            }
            Phase::Gamma {
                role,
                mut zeros,
                mut value,
                remaining,
                lo,
                hi,
            } => {
                let remaining = match remaining {
                    None if !bit => {
                        zeros += 1;
                        if zeros > 62 || (1u64 << zeros) > hi {
                            return Feed::Dead;
                        }
                        self.phase = Phase::Gamma {
                            role,
                            zeros,
                            value,
                            remaining: None,
                            lo,
                            hi,
                        };
                        return Feed::More;
                    }
                    None => {
                        value = 1;
                        zeros
                    }
                    Some(r) => {
                        value = (value << 1) | u64::from(bit);
                        r - 1
                    }
                };
                let min = u128::from(value) << remaining;
                let max = min + (1u128 << remaining) - 1;
                if max < u128::from(lo) || min > u128::from(hi) {
                    return Feed::Dead;
                }
                if remaining == 0 {
                    return self.finish_gamma(role, value);
                }
                self.phase = Phase::Gamma {
                    role,
                    zeros,
                    value,
                    remaining: Some(remaining),
                    lo,
                    hi,
                };
                Feed::More
            }
            Phase::Literal { remaining } => {
                self.emit(bit);
                if remaining == 1 {
                    return Feed::Halted;
                }
                self.phase = Phase::Literal {
                    remaining: remaining - 1,
                };
                Feed::More
            }
            Phase::Pattern {
                count,
                plen,
                mut pattern,
            } => {
                pattern.push(bit);
                self.emit(bit);
                if pattern.len() as u64 == plen {
                    for i in plen..count {
                        self.emit(pattern[(i % plen) as usize]);
                    }
                    return Feed::Halted;
                }
                self.phase = Phase::Pattern {
                    count,
                    plen,
                    pattern,
                };
                Feed::More
            }
            Phase::Table { aux, node } => match self.machine.aux[aux].step(node, bit) {
                None => Feed::Dead,
                Some(next) => {
                    self.phase = Phase::Table { aux, node: next };
                    self.check_table_output(aux, next)
                }
            },
        }
    }

    /// Lower bound on the program bits still to be read before halting.
    pub(crate) fn min_remaining(&self) -> u64 {
        match &self.phase {
            Phase::Opcode => 2,
            Phase::OpcodeOne => 1,
            Phase::Gamma {
                role,
                zeros,
                value,
                remaining,
                lo,
                ..
            } => {
                let (floor, rest_gamma) = match remaining {
                    None => ((1u64 << zeros).max(*lo), u64::from(*zeros) + 1),
                    Some(r) => ((value << r).max(*lo), u64::from(*r)),
                };
                let after = match role {
                    Role::LiteralLen => floor - 1,
                    Role::RepeatCount => 2,
                    Role::RepeatPlen { .. } => floor,
                    Role::TableIndex => 0,
                };
                rest_gamma + after
            }
            Phase::Literal { remaining } => *remaining,
            Phase::Pattern { plen, pattern, .. } => plen - pattern.len() as u64,
            Phase::Table { .. } => 1,
            Phase::Halted => 0,
        }
    }

    /// When every completion of the current state halts after a fixed
    /// number of further reads, returns `(free bits, extra steps, final
    /// output length)`.
    pub(crate) fn free_tail(&self) -> Option<(u64, u64, u64)> {
        match &self.phase {
            Phase::Literal { remaining } => {
                Some((*remaining, 2 * remaining, self.out_len + remaining))
            }
            Phase::Pattern {
                count,
                plen,
                pattern,
            } => {
                let k = plen - pattern.len() as u64;
                Some((k, 2 * k + (count - plen), self.out_len + k + (count - plen)))
            }
            _ => None,
        }
    }
}

/// Result of running a single program under a step bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RunOutcome {
    Halted {
        output: BitString,
        steps: u64,
    },
    /// The program ended before the interpreter halted.
    NeedsMore,
    /// The bits cannot be completed to a halting program, or extend one.
    Undefined,
    /// Still running when the step bound was reached.
    StepLimit {
        steps: u64,
    },
}

pub fn run(machine: &Interpreter, program: &BitString, max_steps: u64) -> RunOutcome {
    let mut parser = Parser::new(machine, &OutputFilter::Any, true);
    let n = program.len();
    for (i, &b) in program.bits().iter().enumerate() {
        let fed = parser.feed(b);
        if parser.steps > max_steps {
            return RunOutcome::StepLimit {
                steps: parser.steps,
            };
        }
        match fed {
            Feed::Dead => return RunOutcome::Undefined,
            Feed::Halted if i + 1 == n => {
                return RunOutcome::Halted {
                    output: parser.output,
                    steps: parser.steps,
                }
            }
            Feed::Halted => return RunOutcome::Undefined,
            Feed::More => {}
        }
    }
    RunOutcome::NeedsMore
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::foundations::bs;

    fn plain() -> Interpreter {
        Interpreter::new("u", Vec::new())
    }

    fn halted(out: RunOutcome) -> BitString {
        match out {
            RunOutcome::Halted { output, .. } => output,
            other => panic!("expected halt, got {other:?}"),
        }
    }

    #[test]
    fn literal_layout() {
        // 0, gamma(4) = 00100, payload
        assert_eq!(literal_encode(&bs("101")).to_text(), "000100101");
        assert_eq!(literal_encode(&BitString::new()).to_text(), "01");
        assert_eq!(
            halted(run(&plain(), &literal_encode(&bs("101")), 100)),
            bs("101")
        );
    }

    #[test]
    fn literal_step_count() {
        let p = literal_encode(&bs("1101"));
        match run(&plain(), &p, 1000) {
            RunOutcome::Halted { steps, .. } => assert_eq!(steps, p.len() as u64 + 4),
            other => panic!("{other:?}"),
        }
        assert!(matches!(run(&plain(), &p, 5), RunOutcome::StepLimit { .. }));
    }

    #[test]
    fn repeat_cycles_pattern() {
        let p = repeat_encode(7, &bs("01")).unwrap();
        assert_eq!(halted(run(&plain(), &p, 1000)), bs("0101010"));
        assert!(repeat_encode(1, &bs("01")).is_err());
    }

    #[test]
    fn table_call_dispatches() {
        let t = TableMachine::new("t", vec![(bs("0"), bs("111")), (bs("1"), bs("0"))]).unwrap();
        let u = Interpreter::new("u", vec![Arc::new(t)]);
        let p = table_call_encode(0, &bs("0"));
        assert_eq!(p.to_text(), "1110");
        assert_eq!(table_call_overhead(0), 3);
        assert_eq!(halted(run(&u, &p, 100)), bs("111"));
        assert_eq!(
            run(&u, &table_call_encode(1, &bs("0")), 100),
            RunOutcome::Undefined
        );
    }

    #[test]
    fn trailing_bits_and_short_programs() {
        let mut p = literal_encode(&bs("1"));
        assert_eq!(run(&plain(), &p.prefix(2), 100), RunOutcome::NeedsMore);
        p.push(false);
        assert_eq!(run(&plain(), &p, 100), RunOutcome::Undefined);
    }

    #[test]
    fn literal_round_trip_exhaustive() {
        let u = plain();
        for len in 0..=12usize {
            for v in 0..(1u64 << len) {
                let tau = BitString::from_u64(v, len);
                assert_eq!(halted(run(&u, &literal_encode(&tau), u64::MAX)), tau);
            }
        }
    }
}
