use rcw_core::foundations::{bs, join as join_sets, BitString};
use rcw_core::reals::regular_sum;
use rcw_core::spectra::{square_extract, square_interleave};
use serde::Serialize;

use super::Ctx;
use crate::artifact::Report;
use crate::error::CliError;
use crate::inputs;

#[derive(Serialize)]
struct Interleaved {
    n: u64,
    bits: BitString,
    squares_are_zero: bool,
    source: BitString,
}

pub fn interleave(ctx: &mut Ctx, stream: &str, n: u64) -> Result<Report, CliError> {
    let source = inputs::stream(&mut ctx.manifest, stream)?;
    let x = square_interleave(&source);
    let bits = x.prefix(n as usize)?;
    let squares_are_zero = (1..)
        .map(|k: u64| k * k)
        .take_while(|&sq| sq <= n)
        .all(|sq| bits.get(sq as usize - 1) == Some(false));
    let out = Interleaved {
        n,
        squares_are_zero,
        source: square_extract(&x, n)?,
        bits,
    };
    let refuted = !out.squares_are_zero;
    Ok(Report::json("rcw.interleave/1", &out, refuted))
}

#[derive(Serialize)]
struct Joined {
    n: u64,
    bits: BitString,
    contains_010: bool,
    contains_101: bool,
}

pub fn join(ctx: &mut Ctx, left: &str, right: &str, n: Option<u64>) -> Result<Report, CliError> {
    let a = inputs::set(&mut ctx.manifest, left)?;
    let b = inputs::set(&mut ctx.manifest, right)?;
    let joined = join_sets(&a, &b)?;
    let n = n.unwrap_or(joined.horizon());
    let bits = joined.restriction(n)?;
    let out = Joined {
        n,
        contains_010: bits.contains_substring(&bs("010")),
        contains_101: bits.contains_substring(&bs("101")),
        bits,
    };
    Ok(Report::json("rcw.join/1", &out, false))
}

#[derive(Serialize)]
struct Regular {
    parts: usize,
    values: Vec<String>,
    limit: Option<String>,
}

pub fn regular(ctx: &mut Ctx, parts: &[String]) -> Result<Report, CliError> {
    if parts.is_empty() {
        return Err(CliError::Usage("regular needs at least one --part".into()));
    }
    let built = parts
        .iter()
        .map(|p| Ok(inputs::increasing(&mut ctx.manifest, p)?.build()?))
        .collect::<Result<Vec<_>, CliError>>()?;
    let stages = ctx.stages();
    let sum = regular_sum(&built);
    let out = Regular {
        parts: built.len(),
        values: (0..=stages).map(|t| sum.at(t).to_string()).collect(),
        limit: sum.known_limit().map(|d| d.to_string()),
    };
    Ok(Report::json("rcw.regular/1", &out, false))
}
