use rcw_core::immunity::{
    check_bi_immune, check_cohesive, check_hhi, check_hyperimmune, check_immune, check_shhi,
    column_blocks, Property,
};

use super::Ctx;
use crate::artifact::Report;
use crate::error::CliError;
use crate::inputs::{self, BLOCKS_SCHEMA};

#[derive(Default)]
pub struct ImmunityArgs {
    pub set: String,
    pub witness: Option<String>,
    pub complement_witness: Option<String>,
    pub bound: Option<String>,
    pub blocks: Option<String>,
    pub columns: Option<u64>,
    pub threshold: Option<u64>,
}

fn need<'a>(value: &'a Option<String>, flag: &str, property: &str) -> Result<&'a str, CliError> {
    value
        .as_deref()
        .ok_or_else(|| CliError::Usage(format!("{property} needs {flag}")))
}

pub fn run(ctx: &mut Ctx, property: Property, args: &ImmunityArgs) -> Result<Report, CliError> {
    let a = inputs::set(&mut ctx.manifest, &args.set)?;
    let horizon = ctx.horizon();
    let t = args.threshold;
    let verdict = match property {
        Property::Immune => {
            let w = inputs::set(
                &mut ctx.manifest,
                need(&args.witness, "--witness", "immune")?,
            )?;
            check_immune(&a, &w, horizon, t)?
        }
        Property::Hyperimmune => {
            let f = inputs::rate(need(&args.bound, "--bound", "hyperimmune")?)?.build();
            check_hyperimmune(&a, &f, horizon)?
        }
        Property::Hyperhyperimmune => {
            let file = need(&args.blocks, "--blocks", "hyperhyperimmune")?;
            let blocks: Vec<Vec<u64>> = inputs::load_json(&mut ctx.manifest, file, BLOCKS_SCHEMA)?;
            check_hhi(&a, &blocks, horizon, t)?
        }
        Property::StronglyHyperhyperimmune => {
            let count = args.columns.ok_or_else(|| {
                CliError::Usage("strongly-hyperhyperimmune needs --columns".into())
            })?;
            check_shhi(&a, &column_blocks(count, horizon), horizon, t)?
        }
        Property::Cohesive => {
            let w = inputs::set(
                &mut ctx.manifest,
                need(&args.witness, "--witness", "cohesive")?,
            )?;
            check_cohesive(&a, &w, horizon, t)?
        }
        Property::BiImmune => {
            let w = inputs::set(
                &mut ctx.manifest,
                need(&args.witness, "--witness", "bi-immune")?,
            )?;
            let wc = inputs::set(
                &mut ctx.manifest,
                need(
                    &args.complement_witness,
                    "--complement-witness",
                    "bi-immune",
                )?,
            )?;
            check_bi_immune(&a, &w, &wc, horizon, t)?
        }
    };
    let refuted = verdict.is_refuted();
    Ok(Report::json("rcw.immunity/1", &verdict, refuted))
}
