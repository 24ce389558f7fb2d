use std::path::Path;
use std::str::FromStr;

use rcw_core::foundations::{BitStream, BitString, Dyadic, NatSetView, SetSpec};
use rcw_core::machines::{MachineRegistry, MachineSpec, PrefixMachine};
use rcw_core::reals::{IncreasingSpec, NameSpec, RateSpec};
use rcw_core::spectra::square_interleave;
use serde::de::DeserializeOwned;

use crate::artifact::{unwrap_envelope, RunManifest};
use crate::error::CliError;

pub const MACHINE_SCHEMA: &str = r#"{"kind":"table","entries":[["0","00"],["10","01"]]} or {"kind":"interpreter","aux":["table-id"]}"#;
pub const REGISTRY_SCHEMA: &str = r#"{"machines":{"id":{"kind":"table","entries":[["0","00"]]}}}"#;
pub const FAMILY_SCHEMA: &str = r#"{"kind":"strong-kurtz","levels":[["00","01"],["111"]]}"#;
pub const LENGTHS_SCHEMA: &str = r#"[3, 1, 2, 4]"#;
pub const REQUESTS_SCHEMA: &str = r#"[[2, "0110"], [3, "1"]]"#;
pub const BLOCKS_SCHEMA: &str = r#"[[0, 1], [4, 5, 6]]"#;
pub const SET_SCHEMA: &str = r#"evens:H, odds:H, ap:STEP,OFFSET:H, squares-1:H, column:I:H, random:SEED:H, or {"kind":"progression","step":2,"offset":0,"horizon":100}"#;
pub const STREAM_SCHEMA: &str =
    "zeros, ones, periodic:BITS, bits:BITS, random:SEED, squares:SEED, dyadic:A/2^E";
pub const NAME_SCHEMA: &str = r#"ap:A,B, list:V,V,… or {"kind":"blocks","stream":{…},"steps":T}"#;
pub const INCREASING_SCHEMA: &str =
    r#"periodic:BITS, list:0,1/2,3/4 or {"kind":"sum","parts":[…]}"#;
pub const RATE_SCHEMA: &str = "shift:C, linear:A,B, pow2:C, dimgap:M";

pub const REGISTRY_ENV: &str = "RCW_MACHINE_REGISTRY";

/// Reads a JSON file, recording its digest.
pub fn load_json<T: DeserializeOwned>(
    manifest: &mut RunManifest,
    path: &str,
    schema: &'static str,
) -> Result<T, CliError> {
    let bytes = manifest.read_input(path)?;
    let schema_err = |detail: String| CliError::Schema {
        what: path.to_string(),
        detail,
        schema,
    };
    let value: serde_json::Value =
        serde_json::from_slice(&bytes).map_err(|e| schema_err(e.to_string()))?;
    serde_json::from_value(unwrap_envelope(value)).map_err(|e| schema_err(e.to_string()))
}

/// Inline JSON, short form, or a path to a JSON file, tried in that order.
fn spec_arg<T: DeserializeOwned + FromStr>(
    manifest: &mut RunManifest,
    arg: &str,
    what: &str,
    schema: &'static str,
) -> Result<T, CliError>
where
    T::Err: std::fmt::Display,
{
    let schema_err = |detail: String| CliError::Schema {
        what: format!("{what} {arg:?}"),
        detail,
        schema,
    };
    if arg.trim_start().starts_with('{') {
        return serde_json::from_str(arg).map_err(|e| schema_err(e.to_string()));
    }
    match arg.parse::<T>() {
        Ok(v) => Ok(v),
        Err(_) if Path::new(arg).is_file() => load_json(manifest, arg, schema),
        Err(e) => Err(schema_err(e.to_string())),
    }
}

pub fn rate(arg: &str) -> Result<RateSpec, CliError> {
    arg.parse().map_err(|e: rcw_core::Error| CliError::Schema {
        what: format!("rate {arg:?}"),
        detail: e.to_string(),
        schema: RATE_SCHEMA,
    })
}

pub fn name(manifest: &mut RunManifest, arg: &str) -> Result<NameSpec, CliError> {
    spec_arg(manifest, arg, "name", NAME_SCHEMA)
}

pub fn increasing(manifest: &mut RunManifest, arg: &str) -> Result<IncreasingSpec, CliError> {
    let spec: IncreasingSpec = spec_arg(manifest, arg, "increasing sequence", INCREASING_SCHEMA)?;
    note_increasing_seeds(manifest, &spec);
    Ok(spec)
}

fn note_increasing_seeds(manifest: &mut RunManifest, spec: &IncreasingSpec) {
    match spec {
        IncreasingSpec::StronglyLc { set, .. } => note_set_seeds(manifest, set),
        IncreasingSpec::Sum { parts } => parts
            .iter()
            .for_each(|p| note_increasing_seeds(manifest, p)),
        _ => {}
    }
}

fn note_set_seeds(manifest: &mut RunManifest, spec: &SetSpec) {
    match spec {
        SetSpec::Random { seed, .. } => manifest.seed(*seed),
        SetSpec::Join { left, right } => {
            note_set_seeds(manifest, left);
            note_set_seeds(manifest, right);
        }
        SetSpec::Complement { of } => note_set_seeds(manifest, of),
        _ => {}
    }
}

fn set_shorthand(arg: &str) -> Option<SetSpec> {
    let parts: Vec<&str> = arg.split(':').collect();
    let num = |s: &str| s.trim().parse::<u64>().ok();
    Some(match parts.as_slice() {
        ["evens", h] => SetSpec::Progression {
            step: 2,
            offset: 0,
            horizon: num(h)?,
        },
        ["odds", h] => SetSpec::Progression {
            step: 2,
            offset: 1,
            horizon: num(h)?,
        },
        ["ap", args, h] => {
            let (step, offset) = args.split_once(',')?;
            SetSpec::Progression {
                step: num(step)?,
                offset: num(offset)?,
                horizon: num(h)?,
            }
        }
        ["squares-1", h] => SetSpec::SquaresMinusOne { horizon: num(h)? },
        ["column", i, h] => SetSpec::Column {
            index: num(i)?,
            horizon: num(h)?,
        },
        ["random", seed, h] => SetSpec::Random {
            seed: num(seed)?,
            horizon: num(h)?,
        },
        _ => return None,
    })
}

pub fn set(manifest: &mut RunManifest, arg: &str) -> Result<NatSetView, CliError> {
    let spec = if arg.trim_start().starts_with('{') {
        serde_json::from_str(arg).map_err(|e| CliError::Schema {
            what: format!("set {arg:?}"),
            detail: e.to_string(),
            schema: SET_SCHEMA,
        })?
    } else if let Some(spec) = set_shorthand(arg) {
        spec
    } else if Path::new(arg).is_file() {
        load_json(manifest, arg, SET_SCHEMA)?
    } else {
        return Err(CliError::Schema {
            what: format!("set {arg:?}"),
            detail: "not a recognised short form or file".into(),
            schema: SET_SCHEMA,
        });
    };
    note_set_seeds(manifest, &spec);
    Ok(spec.build()?)
}

pub fn stream(manifest: &mut RunManifest, arg: &str) -> Result<BitStream, CliError> {
    let bad = |detail: String| CliError::Schema {
        what: format!("stream {arg:?}"),
        detail,
        schema: STREAM_SCHEMA,
    };
    let (kind, rest) = arg.split_once(':').unwrap_or((arg, ""));
    let bits = |s: &str| s.parse::<BitString>().map_err(|e| bad(e.to_string()));
    let seed = |s: &str| s.parse::<u64>().map_err(|e| bad(e.to_string()));
    Ok(match kind {
        "zeros" => BitStream::zeros(),
        "ones" => BitStream::ones(),
        "periodic" => {
            let pattern = bits(rest)?;
            if pattern.is_empty() {
                return Err(bad("empty pattern".into()));
            }
            BitStream::periodic(&pattern)
        }
        "bits" => BitStream::finite(&bits(rest)?),
        "random" => {
            let s = seed(rest)?;
            manifest.seed(s);
            BitStream::random(s)
        }
        "squares" => {
            let s = seed(rest)?;
            manifest.seed(s);
            square_interleave(&BitStream::random(s))
        }
        "dyadic" => {
            let d: Dyadic = rest
                .parse()
                .map_err(|e: rcw_core::Error| bad(e.to_string()))?;
            if d.is_negative() || d > Dyadic::one() {
                return Err(bad("value must lie in [0, 1]".into()));
            }
            BitStream::of_dyadic(&d)
        }
        _ => return Err(bad("unknown stream kind".into())),
    })
}

fn registry(manifest: &mut RunManifest, path: Option<&str>) -> Result<MachineRegistry, CliError> {
    match path {
        Some(p) => load_json(manifest, p, REGISTRY_SCHEMA),
        None => Ok(MachineRegistry::default()),
    }
}

/// `reference`, a registry id, or a path to a machine JSON file.
pub fn machine(
    manifest: &mut RunManifest,
    arg: &str,
    registry_path: Option<&str>,
) -> Result<PrefixMachine, CliError> {
    if arg == "reference" {
        return Ok(PrefixMachine::reference());
    }
    let reg = registry(manifest, registry_path)?;
    if reg.machines.contains_key(arg) {
        return Ok(reg.get(arg)?);
    }
    if Path::new(arg).is_file() {
        let spec: MachineSpec = load_json(manifest, arg, MACHINE_SCHEMA)?;
        let id = Path::new(arg)
            .file_stem()
            .map_or("machine".into(), |s| s.to_string_lossy().into_owned());
        return Ok(reg.build(&spec, &id)?);
    }
    Err(CliError::Usage(format!(
        "unknown machine {arg:?}: use `reference`, an id from the registry (--registry or ${REGISTRY_ENV}), or a machine file\nmachine schema: {MACHINE_SCHEMA}"
    )))
}

pub fn machine_spec(
    manifest: &mut RunManifest,
    path: &str,
    registry_path: Option<&str>,
) -> Result<(MachineSpec, MachineRegistry), CliError> {
    let reg = registry(manifest, registry_path)?;
    let spec = load_json(manifest, path, MACHINE_SCHEMA)?;
    Ok((spec, reg))
}
