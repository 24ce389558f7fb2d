pub mod construct;
pub mod convert;
pub mod immunity;
pub mod kc;
pub mod machine;
pub mod skt;
pub mod spectra;

use rcw_core::machines::Budget;
use serde::Serialize;

use crate::artifact::{Report, RunManifest};
use crate::error::CliError;

/// Flag values shared by every subcommand. Accessors record what a command
/// actually used in its manifest.
pub struct Ctx {
    pub manifest: RunManifest,
    pub registry: Option<String>,
    budget: Budget,
    stages: u64,
    horizon: u64,
}

impl Ctx {
    pub fn new(
        manifest: RunManifest,
        registry: Option<String>,
        budget: Budget,
        stages: u64,
        horizon: u64,
    ) -> Self {
        Self {
            manifest,
            registry,
            budget,
            stages,
            horizon,
        }
    }

    pub fn budget(&mut self) -> Result<Budget, CliError> {
        self.budget.check()?;
        self.manifest.budget = Some(self.budget.clone());
        Ok(self.budget.clone())
    }

    pub fn stages(&mut self) -> u64 {
        self.manifest.stages = Some(self.stages);
        self.stages
    }

    pub fn horizon(&mut self) -> u64 {
        self.manifest.horizon = Some(self.horizon);
        self.horizon
    }

    pub fn machine(&mut self, arg: &str) -> Result<rcw_core::machines::PrefixMachine, CliError> {
        let registry = self.registry.clone();
        crate::inputs::machine(&mut self.manifest, arg, registry.as_deref())
    }
}

#[derive(Serialize)]
struct Refusal {
    verdict: &'static str,
    reason: String,
}

/// A failed precondition is a refutation, not a tool error.
pub fn refusal_or_error(schema: &'static str, err: rcw_core::Error) -> Result<Report, CliError> {
    match err {
        rcw_core::Error::PreconditionRefuted(reason) => Ok(Report::json(
            schema,
            &Refusal {
                verdict: "precondition-refuted",
                reason,
            },
            true,
        )),
        other => Err(other.into()),
    }
}
