//! Prefix-free machines: validated tables and the reference interpreter,
//! budgeted domain scans, complexity and halting-probability bounds.

mod interpreter;
mod scan;
mod table;

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

pub use interpreter::{
    literal_encode, repeat_encode, run, table_call_encode, table_call_overhead, Interpreter,
    OutputFilter, RunOutcome,
};
pub use scan::{
    complexity, enumerate_domain, length_counts, omega_lower, omega_s_bounds, scan_domain,
    DomainScan, LengthCounts,
};
pub use table::TableMachine;

use crate::error::{Error, Result};
use crate::foundations::BitString;

/// Largest program length scanned unless the guard is lifted.
pub const DEFAULT_MAX_LEN_GUARD: usize = 40;

/// Scan limits: program length `L` and step bound `t`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    #[serde(rename = "L")]
    pub max_len: usize,
    #[serde(rename = "t")]
    pub max_steps: u64,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub unguarded: bool,
}

impl Budget {
    pub fn new(max_len: usize, max_steps: u64) -> Self {
        Self {
            max_len,
            max_steps,
            unguarded: false,
        }
    }

    pub fn unguarded(mut self) -> Self {
        self.unguarded = true;
        self
    }

    pub fn check(&self) -> Result<()> {
        if !self.unguarded && self.max_len > DEFAULT_MAX_LEN_GUARD {
            return Err(Error::BudgetGuard {
                requested: self.max_len as u64,
                limit: DEFAULT_MAX_LEN_GUARD as u64,
            });
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ComplexityStatus {
    /// No shorter program halts: the scan below the value was complete.
    Exact,
    /// A witness exists but the scan below it hit the step bound.
    UpperBound,
    /// No witness within the budget.
    Unknown,
}

/// A budgeted complexity value; `value: None` is infinity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexityValue {
    pub value: Option<u64>,
    pub status: ComplexityStatus,
    pub budget: Budget,
    pub witness: Option<BitString>,
}

#[derive(Clone, Debug)]
pub enum PrefixMachine {
    Table(TableMachine),
    Interpreter(Interpreter),
}

impl PrefixMachine {
    pub fn id(&self) -> &str {
        match self {
            PrefixMachine::Table(t) => t.id(),
            PrefixMachine::Interpreter(u) => u.id(),
        }
    }

    /// The reference interpreter with no auxiliary tables.
    pub fn reference() -> Self {
        PrefixMachine::Interpreter(Interpreter::new("reference", Vec::new()))
    }

    /// Runs one program; table machines ignore the step bound.
    pub fn run(&self, program: &BitString, max_steps: u64) -> RunOutcome {
        match self {
            PrefixMachine::Table(t) => match t.get(program) {
                Some(out) => RunOutcome::Halted {
                    output: out.clone(),
                    steps: 0,
                },
                None if t.entries().any(|(k, _)| program.is_prefix_of(k)) => RunOutcome::NeedsMore,
                None => RunOutcome::Undefined,
            },
            PrefixMachine::Interpreter(u) => interpreter::run(u, program, max_steps),
        }
    }
}

pub fn validate_table(entries: Vec<(BitString, BitString)>) -> Result<PrefixMachine> {
    Ok(PrefixMachine::Table(TableMachine::new("table", entries)?))
}

/// Machine JSON: `{"kind":"table","entries":[["0","00"],…]}` or
/// `{"kind":"interpreter","aux":["id",…]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum MachineSpec {
    Table {
        entries: Vec<(BitString, BitString)>,
    },
    Interpreter {
        #[serde(default)]
        aux: Vec<String>,
    },
}

/// Named machine descriptions; interpreters refer to their auxiliary
/// tables by name.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MachineRegistry {
    pub machines: BTreeMap<String, MachineSpec>,
}

impl MachineRegistry {
    pub fn build(&self, spec: &MachineSpec, id: &str) -> Result<PrefixMachine> {
        match spec {
            MachineSpec::Table { entries } => Ok(PrefixMachine::Table(TableMachine::new(
                id,
                entries.clone(),
            )?)),
            MachineSpec::Interpreter { aux } => {
                let tables = aux
                    .iter()
                    .map(|name| match self.machines.get(name) {
                        Some(MachineSpec::Table { entries }) => {
                            Ok(Arc::new(TableMachine::new(name.clone(), entries.clone())?))
                        }
                        Some(_) => Err(Error::InvalidInput(format!(
                            "auxiliary machine {name:?} is not a table"
                        ))),
                        None => Err(Error::InvalidInput(format!("unknown machine {name:?}"))),
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(PrefixMachine::Interpreter(Interpreter::new(id, tables)))
            }
        }
    }

    pub fn get(&self, id: &str) -> Result<PrefixMachine> {
        let spec = self
            .machines
            .get(id)
            .ok_or_else(|| Error::InvalidInput(format!("unknown machine {id:?}")))?;
        self.build(spec, id)
    }
}
