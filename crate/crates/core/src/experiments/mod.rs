//! Batch experiments behind the `lcu` binary.

pub mod config;
pub mod csv;
pub mod jc;
pub mod rh;
pub mod scaling;
pub mod synthesize;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;

pub use config::{Experiment, RunConfig, TaylorSettings};
pub use csv::{format_float, to_csv, Cell, CsvRow};
pub use jc::{adaptive_propagator, jc_analytic, run_jc_transition, JcRow};
pub use rh::{lcu_cx_bound, propagate, rh_problem, run_resources, run_rh_overlap, Propagated, ResourceRow, RhRow};
pub use scaling::{run_scaling, ScalingRow};
pub use synthesize::{synthesize_text, SynthesisReport};

use crate::error::Result;
use crate::synth::{crossover_n, crossover_table};

/// Rows of any experiment.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Table {
    Jc(Vec<JcRow>),
    Rh(Vec<RhRow>),
    Resources(Vec<ResourceRow>),
    Scaling(Vec<ScalingRow>),
}

impl Table {
    pub fn csv(&self) -> String {
        match self {
            Table::Jc(r) => to_csv(r),
            Table::Rh(r) => to_csv(r),
            Table::Resources(r) => to_csv(r),
            Table::Scaling(r) => to_csv(r),
        }
    }

    pub fn len(&self) -> usize {
        match self {
            Table::Jc(r) => r.len(),
            Table::Rh(r) => r.len(),
            Table::Resources(r) => r.len(),
            Table::Scaling(r) => r.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Everything a run produces besides the CSV rows.
#[derive(Clone, Debug, Serialize)]
pub struct RunOutput {
    pub config: RunConfig,
    pub table: Table,
    /// JSON-lines propagator records (overlap runs only).
    #[serde(skip)]
    pub records: Vec<crate::propagator::PropagatorRecord>,
    pub notes: Vec<String>,
}

fn crossover_note() -> Result<String> {
    let table = crossover_table(2..=12, 1..=64)?;
    let always = table.iter().all(|r| r.multiplexor_cheaper);
    let last = (2..=12)
        .map(|k| crossover_n(k, 64))
        .collect::<Result<Vec<_>>>()?;
    Ok(format!(
        "multiplexor vs unary-iteration SELECT CX formulas over k=2..12, n=1..64: \
         multiplexor cheaper everywhere = {always}; largest n with the multiplexor cheaper per k = {last:?}"
    ))
}

pub fn run(cfg: &RunConfig) -> Result<RunOutput> {
    cfg.validate()?;
    let mut notes = Vec::new();
    let mut records = Vec::new();
    let table = match cfg.experiment {
        Experiment::JcTransition => Table::Jc(run_jc_transition(cfg)?),
        Experiment::RhOverlap => {
            let (rows, recs) = run_rh_overlap(cfg)?;
            records = recs;
            Table::Rh(rows)
        }
        Experiment::Resources => {
            let rows = run_resources(cfg)?;
            if rows.iter().any(|r| !r.full_synthesized) {
                notes.push(format!(
                    "full LCUs above {} terms are costed by the PREPARE + SELECT CX bound plus state preparation",
                    cfg.full_term_limit
                ));
            }
            Table::Resources(rows)
        }
        Experiment::Scaling => {
            notes.push(crossover_note()?);
            Table::Scaling(run_scaling(cfg)?)
        }
    };
    Ok(RunOutput {
        config: cfg.clone(),
        table,
        records,
        notes,
    })
}

/// `<stem>.json` next to `csv_path`.
pub fn sidecar_path(csv_path: &Path, suffix: &str) -> PathBuf {
    let stem = csv_path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    csv_path.with_file_name(format!("{stem}{suffix}"))
}

/// Writes the CSV, the JSON sidecar and, for overlap runs, the propagator records.
pub fn write_output(out: &RunOutput, csv_path: &Path) -> Result<()> {
    if let Some(dir) = csv_path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    fs::write(csv_path, out.table.csv())?;
    fs::write(sidecar_path(csv_path, ".json"), serde_json::to_string_pretty(out)?)?;
    if !out.records.is_empty() {
        let mut f = fs::File::create(sidecar_path(csv_path, ".propagator.jsonl"))?;
        for r in &out.records {
            writeln!(f, "{}", serde_json::to_string(r)?)?;
        }
    }
    Ok(())
}
