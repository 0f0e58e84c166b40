use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use opineq_core::catalog::{run_trial, Fingerprint, InequalitySpec};
use rayon::prelude::*;

use crate::config::CampaignConfig;
use crate::report::{Aggregator, CampaignReport, Outcome, TrialRow};
use crate::HarnessError;

/// Environment variable capping the number of worker threads.
pub const THREADS_VAR: &str = "OPINEQ_THREADS";

/// Runs every selected entry on every dimension. Rows are merged in
/// (entry, dimension, trial) order whatever the thread count, so the report
/// depends on the configuration only.
pub fn run_campaign(config: &CampaignConfig) -> Result<CampaignReport, HarnessError> {
    config.validate()?;
    let specs = config.specs.resolve()?;
    let pool = thread_pool()?;
    let mut rows_out = match &config.output.rows {
        Some(path) => Some((
            BufWriter::new(File::create(path).map_err(|e| HarnessError::io(path, e))?),
            path.as_path(),
        )),
        None => None,
    };

    let mut aggregates = Vec::with_capacity(specs.len());
    let mut violation_rows = Vec::new();
    for spec in specs {
        let rows = pool.install(|| spec_rows(spec, config));
        let mut agg = Aggregator::new(spec);
        let mut kept = 0;
        for row in &rows {
            agg.push(row);
            if kept < config.retained_violations && row.result().is_some_and(|r| r.is_violation()) {
                violation_rows.push(row.clone());
                kept += 1;
            }
        }
        if let Some((writer, path)) = rows_out.as_mut() {
            write_rows(writer, path, &rows)?;
        }
        aggregates.push(agg.finish());
    }
    if let Some((mut writer, path)) = rows_out {
        writer.flush().map_err(|e| HarnessError::io(path, e))?;
    }

    let report = CampaignReport::new(config.clone(), aggregates, violation_rows);
    if let Some(path) = &config.output.report {
        report.write_json(path)?;
    }
    if let Some(path) = &config.output.summary {
        report.write_summary(path)?;
    }
    Ok(report)
}

/// All rows of one entry in (dimension, trial) order.
pub fn spec_rows(spec: &InequalitySpec, config: &CampaignConfig) -> Vec<TrialRow> {
    let bindings = spec.bindings(&config.grid);
    let options = config.trial_options();
    let tasks: Vec<(usize, u64)> = config
        .dims
        .iter()
        .flat_map(|&d| (0..config.trials_per_dim).map(move |t| (d, t)))
        .collect();
    tasks
        .par_iter()
        .map(|&(dim, trial)| {
            let params = bindings[(trial % bindings.len() as u64) as usize].clone();
            let fingerprint = Fingerprint::new(spec, config.seed, dim, trial, params, options)
                .expect("bindings carry the parameters their recipe needs");
            let outcome = match run_trial(&fingerprint) {
                Ok(result) => Outcome::Result(result),
                Err(err) => Outcome::Error(err.to_string()),
            };
            TrialRow {
                fingerprint,
                outcome,
            }
        })
        .collect()
}

fn write_rows(
    writer: &mut BufWriter<File>,
    path: &Path,
    rows: &[TrialRow],
) -> Result<(), HarnessError> {
    for row in rows {
        serde_json::to_writer(&mut *writer, row)?;
        writer
            .write_all(b"\n")
            .map_err(|e| HarnessError::io(path, e))?;
    }
    Ok(())
}

fn thread_pool() -> Result<rayon::ThreadPool, HarnessError> {
    let available = std::thread::available_parallelism().map_or(1, usize::from);
    let threads = match std::env::var(THREADS_VAR) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n >= 1 => n,
            _ => {
                return Err(HarnessError::ConfigInvalid(format!(
                    "{THREADS_VAR}={v:?} is not a positive integer"
                )))
            }
        },
        Err(_) => available,
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| HarnessError::ConfigInvalid(format!("thread pool: {e}")))
}

/// Reads a JSON-lines row file written by a campaign.
pub fn read_rows(path: &Path) -> Result<Vec<TrialRow>, HarnessError> {
    let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| Ok(serde_json::from_str(l)?))
        .collect()
}
