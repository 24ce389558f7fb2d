use rcw_core::randomness_tests::{
    covers as level_covers, skt_from_rate, validate as check, TestFamily,
};
use serde::Serialize;
use serde_json::Value;

use super::{refusal_or_error, Ctx};
use crate::artifact::{unwrap_envelope, Report};
use crate::error::CliError;
use crate::inputs::{self, FAMILY_SCHEMA};

const SCHEMA: &str = "rcw.skt/1";

/// A family file, or any artifact carrying one under `family`.
fn load_family(ctx: &mut Ctx, file: &str) -> Result<TestFamily, CliError> {
    let value: Value = inputs::load_json(&mut ctx.manifest, file, FAMILY_SCHEMA)?;
    let value = match unwrap_envelope(value) {
        Value::Object(mut map) if map.contains_key("family") => {
            map.remove("family").expect("checked")
        }
        other => other,
    };
    serde_json::from_value(value).map_err(|e| CliError::Schema {
        what: file.to_string(),
        detail: e.to_string(),
        schema: FAMILY_SCHEMA,
    })
}

/// Without `--stage`, every listed string is seen.
pub fn stage_or_all(family: &TestFamily, stage: Option<usize>) -> usize {
    stage.unwrap_or_else(|| {
        family
            .levels
            .iter()
            .map(|l| l.strings.len())
            .max()
            .unwrap_or(0)
    })
}

#[derive(Serialize)]
struct FromRate<'a> {
    rate: String,
    #[serde(flatten)]
    build: &'a rcw_core::randomness_tests::SktBuild,
    validation: rcw_core::randomness_tests::Validation,
}

pub fn from_rate(ctx: &mut Ctx, machine: &str, rate: &str, n_max: u64) -> Result<Report, CliError> {
    let rate_spec = inputs::rate(rate)?;
    let m = ctx.machine(machine)?;
    let budget = ctx.budget()?;
    let build = match skt_from_rate(&m, &rate_spec.build(), n_max, &budget) {
        Ok(b) => b,
        Err(e) => return refusal_or_error(SCHEMA, e),
    };
    let validation = check(&build.family, n_max, stage_or_all(&build.family, None))?;
    let refuted = validation.is_refuted();
    let out = FromRate {
        rate: rate.to_string(),
        build: &build,
        validation,
    };
    Ok(Report::json(SCHEMA, &out, refuted))
}

pub fn validate(
    ctx: &mut Ctx,
    file: &str,
    n_max: u64,
    stage: Option<usize>,
) -> Result<Report, CliError> {
    let family = load_family(ctx, file)?;
    let v = check(&family, n_max, stage_or_all(&family, stage))?;
    let refuted = v.is_refuted();
    Ok(Report::json("rcw.skt-validation/1", &v, refuted))
}

pub fn covers(
    ctx: &mut Ctx,
    file: &str,
    stream: &str,
    level: u64,
    stage: Option<usize>,
) -> Result<Report, CliError> {
    let family = load_family(ctx, file)?;
    let x = inputs::stream(&mut ctx.manifest, stream)?;
    let report = level_covers(&family, &x, level, stage_or_all(&family, stage))?;
    Ok(Report::json("rcw.skt-coverage/1", &report, false))
}
