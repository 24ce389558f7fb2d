use rcw_core::foundations::BitString;
use rcw_core::kraft_chaitin::{kc_build_machine, KcAllocator, KcRequest};
use rcw_core::machines::{MachineSpec, PrefixMachine};
use rcw_core::Error;
use serde::Serialize;

use super::Ctx;
use crate::artifact::Report;
use crate::error::CliError;
use crate::inputs::{self, LENGTHS_SCHEMA, REQUESTS_SCHEMA};

#[derive(Serialize)]
struct Codeword {
    index: usize,
    length: usize,
    codeword: BitString,
}

#[derive(Serialize)]
struct Rejection {
    index: usize,
    length: usize,
    reason: String,
}

#[derive(Serialize)]
struct Allocation {
    codewords: Vec<Codeword>,
    committed_weight: String,
    rejected: Option<Rejection>,
}

/// Stops at the first request that would push the weight above 1.
pub fn alloc(ctx: &mut Ctx, file: &str) -> Result<Report, CliError> {
    let lengths: Vec<usize> = inputs::load_json(&mut ctx.manifest, file, LENGTHS_SCHEMA)?;
    let mut kc = KcAllocator::new();
    let mut codewords = Vec::new();
    let mut rejected = None;
    for (index, &length) in lengths.iter().enumerate() {
        match kc.request(length) {
            Ok(codeword) => codewords.push(Codeword {
                index,
                length,
                codeword,
            }),
            Err(e @ Error::WeightExceeded { .. }) => {
                rejected = Some(Rejection {
                    index,
                    length,
                    reason: e.to_string(),
                });
                break;
            }
            Err(e) => return Err(e.into()),
        }
    }
    let refuted = rejected.is_some();
    let out = Allocation {
        codewords,
        committed_weight: kc.committed_weight().to_string(),
        rejected,
    };
    Ok(Report::json("rcw.kc-allocation/1", &out, refuted))
}

/// Emits a machine file usable wherever `--machine` takes a path.
pub fn build(ctx: &mut Ctx, file: &str) -> Result<Report, CliError> {
    let requests: Vec<KcRequest> = inputs::load_json(&mut ctx.manifest, file, REQUESTS_SCHEMA)?;
    match kc_build_machine(&requests) {
        Ok(PrefixMachine::Table(t)) => {
            let spec = MachineSpec::Table {
                entries: t.entries().map(|(k, v)| (k.clone(), v.clone())).collect(),
            };
            Ok(Report::json("rcw.machine/1", &spec, false))
        }
        Ok(PrefixMachine::Interpreter(_)) => unreachable!("coding yields a table"),
        Err(e @ Error::WeightExceeded { .. }) => Ok(Report::json(
            "rcw.machine/1",
            &serde_json::json!({ "verdict": "weight-exceeded", "reason": e.to_string() }),
            true,
        )),
        Err(e) => Err(e.into()),
    }
}
