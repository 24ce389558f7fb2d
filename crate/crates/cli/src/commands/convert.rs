use rcw_core::conversions::{
    carry_counter, count_bound_check, lc_to_roc as search, roc_to_skt as enumerate,
    tail_bound_check, CountCheck, RocToSkt, SearchStatus, StageTrace, TailCheck,
};
use rcw_core::randomness_tests::{validate, TestFamily, Validation};
use serde::Serialize;

use super::{refusal_or_error, Ctx};
use crate::artifact::Report;
use crate::error::CliError;
use crate::inputs;

const ROC_SCHEMA: &str = "rcw.roc-to-skt/1";
const LC_SCHEMA: &str = "rcw.lc-to-roc/1";

#[derive(Serialize)]
#[serde(tag = "result", rename_all = "kebab-case")]
enum RocOut {
    Built {
        exponents: Vec<u64>,
        count_checks: Vec<CountCheck>,
        validation: Validation,
        family: Box<TestFamily>,
        trace: Box<StageTrace>,
    },
    DyadicShortcut {
        value: String,
    },
}

pub fn roc_to_skt(ctx: &mut Ctx, name: &str, rate: &str, n_max: u64) -> Result<Report, CliError> {
    let f = inputs::name(&mut ctx.manifest, name)?.build()?;
    let r = inputs::rate(rate)?.build();
    let stages = ctx.stages();
    let built = match enumerate(&f, &r, stages, n_max) {
        Ok(b) => b,
        Err(e) => return refusal_or_error(ROC_SCHEMA, e),
    };
    let out = match built {
        RocToSkt::Built {
            trace,
            family,
            exponents,
        } => {
            let count_checks: Vec<CountCheck> = (0..=n_max)
                .map(|n| count_bound_check(&trace, &r, n))
                .collect();
            let validation = validate(&family, n_max, super::skt::stage_or_all(&family, None))?;
            RocOut::Built {
                exponents,
                count_checks,
                validation,
                family: Box::new(family),
                trace: Box::new(trace),
            }
        }
        RocToSkt::DyadicShortcut { value } => RocOut::DyadicShortcut {
            value: value.to_string(),
        },
    };
    let refuted = match &out {
        RocOut::Built {
            count_checks,
            validation,
            ..
        } => validation.is_refuted() || !count_checks.iter().all(CountCheck::holds),
        RocOut::DyadicShortcut { .. } => false,
    };
    Ok(Report::json(ROC_SCHEMA, &out, refuted))
}

#[derive(Serialize)]
struct Carries {
    n: u64,
    cut: u64,
    values: Vec<String>,
    carries: Vec<usize>,
    step_bound_holds: bool,
}

#[derive(Serialize)]
struct LcOut {
    status: SearchStatus,
    s: Vec<u64>,
    name: Vec<u64>,
    blocks: Vec<Vec<u64>>,
    tail_checks: Vec<TailCheck>,
    carries: Vec<Carries>,
}

pub fn lc_to_roc(
    ctx: &mut Ctx,
    xs: &str,
    rate: &str,
    machine: &str,
    blocks: u64,
    n_max: u64,
) -> Result<Report, CliError> {
    let xs = inputs::increasing(&mut ctx.manifest, xs)?.build()?;
    let r = inputs::rate(rate)?.build();
    let m = ctx.machine(machine)?;
    let budget = ctx.budget()?;
    let stages = ctx.stages();
    let found = match search(&xs, &r, &m, &budget, stages, blocks) {
        Ok(v) => v,
        Err(e) => return refusal_or_error(LC_SCHEMA, e),
    };
    let values = found.name.values();
    let total = values.len() as u64;
    let tail_checks: Vec<TailCheck> = (0..=n_max)
        .map(|n| tail_bound_check(&found.name.name, &r, n, total))
        .collect();
    let carries: Vec<Carries> = (0..=n_max)
        .map(|n| {
            let cut = r.at(n);
            let report = carry_counter(&found.name.blocks, cut);
            Carries {
                n,
                cut,
                values: report.values.iter().map(ToString::to_string).collect(),
                carries: report.carries,
                step_bound_holds: report.step_bound_holds,
            }
        })
        .collect();
    let refuted =
        !tail_checks.iter().all(TailCheck::holds) || !carries.iter().all(|c| c.step_bound_holds);
    let out = LcOut {
        status: found.status,
        s: found.s,
        name: values,
        blocks: found.name.blocks,
        tail_checks,
        carries,
    };
    Ok(Report::json(LC_SCHEMA, &out, refuted))
}
