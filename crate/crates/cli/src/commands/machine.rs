use std::path::Path;

use rcw_core::foundations::{BitString, Dyadic};
use rcw_core::machines::{complexity, enumerate_domain, PrefixMachine};
use rcw_core::Error;
use serde::Serialize;

use super::Ctx;
use crate::artifact::Report;
use crate::error::CliError;
use crate::inputs;

#[derive(Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
enum TableCheck {
    Valid {
        id: String,
        kind: &'static str,
        entries: Option<usize>,
        max_program_len: Option<usize>,
    },
    PrefixViolation {
        prefix: BitString,
        extension: BitString,
    },
}

pub fn validate(ctx: &mut Ctx, file: &str) -> Result<Report, CliError> {
    let registry = ctx.registry.clone();
    let (spec, reg) = inputs::machine_spec(&mut ctx.manifest, file, registry.as_deref())?;
    let id = Path::new(file)
        .file_stem()
        .map_or("machine".into(), |s| s.to_string_lossy().into_owned());
    let check = match reg.build(&spec, &id) {
        Ok(PrefixMachine::Table(t)) => TableCheck::Valid {
            id,
            kind: "table",
            entries: Some(t.len()),
            max_program_len: Some(t.max_key_len()),
        },
        Ok(PrefixMachine::Interpreter(_)) => TableCheck::Valid {
            id,
            kind: "interpreter",
            entries: None,
            max_program_len: None,
        },
        Err(Error::PrefixViolation(prefix, extension)) => {
            TableCheck::PrefixViolation { prefix, extension }
        }
        Err(e) => return Err(e.into()),
    };
    let refuted = matches!(check, TableCheck::PrefixViolation { .. });
    Ok(Report::json("rcw.machine-check/1", &check, refuted))
}

#[derive(Serialize)]
struct Domain {
    machine: String,
    entries: Vec<(BitString, BitString)>,
    weight: String,
    step_limited: bool,
    shortest_cut: Option<usize>,
}

pub fn enumerate(ctx: &mut Ctx, machine: &str) -> Result<Report, CliError> {
    let m = ctx.machine(machine)?;
    let budget = ctx.budget()?;
    let scan = enumerate_domain(&m, &budget)?;
    let weight: Dyadic = scan
        .entries
        .iter()
        .map(|(p, _)| Dyadic::pow2_neg(p.len() as u64))
        .sum();
    let domain = Domain {
        machine: m.id().to_string(),
        entries: scan.entries,
        weight: weight.to_string(),
        step_limited: scan.step_limited,
        shortest_cut: scan.shortest_cut,
    };
    Ok(Report::json("rcw.domain/1", &domain, false))
}

pub fn k(ctx: &mut Ctx, machine: &str, tau: &str) -> Result<Report, CliError> {
    let tau: BitString = tau.parse()?;
    let m = ctx.machine(machine)?;
    let budget = ctx.budget()?;
    let value = complexity(&m, &tau, &budget)?;
    Ok(Report::json("rcw.complexity/1", &value, false))
}
