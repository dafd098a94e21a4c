//! CSV and JSON emission of sweep results.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use super::{PointResult, SweepConfig, SweepResult};
use crate::error::{Error, Result};
use crate::product::{code_parameters, CodeParameters, BLOCK_BITS};

pub const CSV_HEADER: &str = "ebn0_db,blocks,info_bits,bit_errors,block_errors,output_ber,output_bler,channel_ber,mean_iterations,wall_time_s";

#[derive(Debug, Serialize, Deserialize)]
struct CsvRow {
    ebn0_db: f64,
    blocks: u64,
    info_bits: u64,
    bit_errors: u64,
    block_errors: u64,
    output_ber: f64,
    output_bler: f64,
    channel_ber: f64,
    mean_iterations: f64,
    wall_time_s: f64,
}

pub fn write_csv<W: Write>(result: &SweepResult, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for p in &result.points {
        w.serialize(CsvRow {
            ebn0_db: p.ebn0_db,
            blocks: p.blocks,
            info_bits: p.info_bits,
            bit_errors: p.bit_errors,
            block_errors: p.block_errors,
            output_ber: p.output_ber,
            output_bler: p.output_bler,
            channel_ber: p.channel_ber,
            mean_iterations: p.mean_iterations,
            wall_time_s: p.wall_time_s,
        })
        .map_err(io_error)?;
    }
    w.flush().map_err(|e| Error::Usage(e.to_string()))?;
    Ok(())
}

/// Reads a CSV written by [`write_csv`]. The code rate is the product code's.
pub fn read_csv<R: Read>(input: R) -> Result<SweepResult> {
    let mut r = csv::Reader::from_reader(input);
    let header = r
        .headers()
        .map_err(io_error)?
        .iter()
        .collect::<Vec<_>>()
        .join(",");
    if header != CSV_HEADER {
        return Err(Error::Usage(format!("unexpected CSV header: {header}")));
    }
    let mut points = Vec::new();
    for row in r.deserialize() {
        let row: CsvRow = row.map_err(io_error)?;
        points.push(PointResult {
            ebn0_db: row.ebn0_db,
            blocks: row.blocks,
            info_bits: row.info_bits,
            bit_errors: row.bit_errors,
            block_errors: row.block_errors,
            output_ber: row.output_ber,
            output_bler: row.output_bler,
            channel_ber: row.channel_ber,
            mean_iterations: row.mean_iterations,
            wall_time_s: row.wall_time_s,
            channel_bit_errors: (row.channel_ber * (row.blocks * BLOCK_BITS as u64) as f64).round()
                as u64,
        });
    }
    Ok(SweepResult {
        rate: code_parameters().rate,
        points,
    })
}

fn io_error(e: csv::Error) -> Error {
    Error::Usage(format!("CSV: {e}"))
}

/// Everything needed to reproduce and interpret a sweep.
#[derive(Debug, Serialize)]
pub struct RunManifest<'a> {
    pub tool: &'static str,
    pub version: &'static str,
    pub code: CodeParameters,
    pub config: &'a SweepConfig,
    pub result: &'a SweepResult,
}

impl<'a> RunManifest<'a> {
    pub fn new(config: &'a SweepConfig, result: &'a SweepResult) -> Self {
        RunManifest {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            code: code_parameters(),
            config,
            result,
        }
    }
}

pub fn write_json<W: Write>(manifest: &RunManifest<'_>, out: W) -> Result<()> {
    serde_json::to_writer_pretty(out, manifest).map_err(|e| Error::Usage(format!("JSON: {e}")))
}
