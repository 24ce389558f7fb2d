use num_rational::Ratio;
use rcw_core::machines::{length_counts, omega_s_bounds, ComplexityStatus};
use rcw_core::spectra::{dim_window, profile as complexity_profile};
use serde::Serialize;
use std::collections::BTreeMap;

use super::Ctx;
use crate::artifact::{Body, Report};
use crate::error::CliError;
use crate::inputs;

fn status_text(s: ComplexityStatus) -> String {
    serde_json::to_value(s)
        .ok()
        .and_then(|v| v.as_str().map(str::to_string))
        .unwrap_or_default()
}

pub fn profile(
    ctx: &mut Ctx,
    machine: &str,
    stream: &str,
    n_max: u64,
    json: bool,
) -> Result<Report, CliError> {
    let m = ctx.machine(machine)?;
    let x = inputs::stream(&mut ctx.manifest, stream)?;
    let budget = ctx.budget()?;
    let p = complexity_profile(&m, &x, n_max, &budget)?;
    if json {
        return Ok(Report::json("rcw.profile/1", &p.rows(), false));
    }
    let rows = p
        .rows()
        .into_iter()
        .map(|r| {
            vec![
                r.n.to_string(),
                r.k.map_or(String::new(), |k| k.to_string()),
                status_text(r.status),
                r.max_len.to_string(),
                r.t.to_string(),
            ]
        })
        .collect();
    Ok(Report {
        schema: "rcw.profile-csv/1",
        body: Body::Csv {
            header: ["n", "K", "status", "L", "t"].map(String::from).to_vec(),
            rows,
        },
        refuted: false,
    })
}

pub fn dim(
    ctx: &mut Ctx,
    machine: &str,
    stream: &str,
    n0: u64,
    n1: u64,
) -> Result<Report, CliError> {
    let m = ctx.machine(machine)?;
    let x = inputs::stream(&mut ctx.manifest, stream)?;
    let budget = ctx.budget()?;
    let p = complexity_profile(&m, &x, n1, &budget)?;
    let estimate = dim_window(&p, n0, n1)?;
    Ok(Report::json("rcw.dim-window/1", &estimate, false))
}

#[derive(Serialize)]
struct OmegaOut {
    machine: String,
    lower: String,
    programs_by_length: BTreeMap<usize, String>,
    step_limited: bool,
}

pub fn omega(ctx: &mut Ctx, machine: &str) -> Result<Report, CliError> {
    let m = ctx.machine(machine)?;
    let budget = ctx.budget()?;
    let counts = length_counts(&m, &budget)?;
    let out = OmegaOut {
        machine: m.id().to_string(),
        lower: counts.weight().to_string(),
        programs_by_length: counts
            .counts
            .iter()
            .map(|(l, c)| (*l, c.to_string()))
            .collect(),
        step_limited: counts.step_limited,
    };
    Ok(Report::json("rcw.omega/1", &out, false))
}

#[derive(Serialize)]
struct OmegaSOut {
    machine: String,
    s: String,
    precision: u64,
    lo: String,
    hi: String,
    exact: bool,
}

pub fn omega_s(ctx: &mut Ctx, machine: &str, s: &str, precision: u64) -> Result<Report, CliError> {
    let ratio: Ratio<u64> = s
        .parse()
        .map_err(|_| CliError::Usage(format!("--s expects a fraction a/b in (0, 1), got {s:?}")))?;
    let m = ctx.machine(machine)?;
    let budget = ctx.budget()?;
    let bounds = omega_s_bounds(&m, ratio, &budget, precision)?;
    let out = OmegaSOut {
        machine: m.id().to_string(),
        s: ratio.to_string(),
        precision,
        exact: bounds.lo == bounds.hi,
        lo: bounds.lo.to_string(),
        hi: bounds.hi.to_string(),
    };
    Ok(Report::json("rcw.omega-s/1", &out, false))
}
