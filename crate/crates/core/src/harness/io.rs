//! CSV exports. Numbers are written as `{:.16e}` (17 significant digits), so
//! every `f64` survives a write/read cycle bit for bit and output is stable
//! byte for byte.

use std::path::Path;

use super::experiment::{ExperimentResult, ResultRow};
use crate::circuit::CircuitRun;
use crate::error::{Error, Result};
use crate::train::SpikeTrain;

pub const RESULT_HEADER: [&str; 5] = ["condition", "dw_model", "dw_circuit", "abs_err", "rel_err"];
pub const FRAME_HEADER: [&str; 7] = [
    "frame",
    "slot",
    "p_width_s",
    "n_width_s",
    "differential_v",
    "delta_w",
    "weight",
];

pub fn fmt_num(v: f64) -> String {
    format!("{v:.16e}")
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(fmt_num).unwrap_or_default()
}

fn to_string<F>(header: &[&str], rows: F) -> Result<String>
where
    F: FnOnce(&mut csv::Writer<Vec<u8>>) -> csv::Result<()>,
{
    let mut w = csv::Writer::from_writer(Vec::new());
    let run = |w: &mut csv::Writer<Vec<u8>>| -> csv::Result<()> {
        w.write_record(header)?;
        rows(w)?;
        w.flush()?;
        Ok(())
    };
    run(&mut w).map_err(|e| Error::csv("<memory>", e))?;
    let bytes = w
        .into_inner()
        .map_err(|e| Error::io("<memory>", e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is always utf-8"))
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(|e| Error::io(path, e))
}

pub fn result_csv(result: &ExperimentResult) -> Result<String> {
    if result.rows.is_empty() {
        return Err(Error::invalid("refusing to write a result without rows"));
    }
    to_string(&RESULT_HEADER, |w| {
        for r in &result.rows {
            w.write_record([
                r.condition.clone(),
                fmt_opt(r.dw_model),
                fmt_opt(r.dw_circuit),
                fmt_opt(r.abs_err),
                fmt_opt(r.rel_err),
            ])?;
        }
        Ok(())
    })
}

/// Header `condition,dw_model,dw_circuit,abs_err,rel_err`, one row per sweep
/// point. Columns of an engine that did not run are left empty.
pub fn emit_csv(result: &ExperimentResult, path: impl AsRef<Path>) -> Result<()> {
    write_file(path.as_ref(), &result_csv(result)?)
}

fn parse_opt(path: &Path, field: &str) -> Result<Option<f64>> {
    if field.is_empty() {
        return Ok(None);
    }
    field
        .parse::<f64>()
        .map(Some)
        .map_err(|_| Error::Config(format!("{}: bad number {field:?}", path.display())))
}

/// Reads back a file written by [`emit_csv`].
pub fn read_result_csv(path: impl AsRef<Path>) -> Result<Vec<ResultRow>> {
    let path = path.as_ref();
    let mut rdr = csv::Reader::from_path(path).map_err(|e| Error::csv(path, e))?;
    let header = rdr.headers().map_err(|e| Error::csv(path, e))?.clone();
    if header.iter().ne(RESULT_HEADER) {
        return Err(Error::Config(format!(
            "{}: unexpected header {:?}",
            path.display(),
            header
        )));
    }
    rdr.records()
        .map(|rec| {
            let rec = rec.map_err(|e| Error::csv(path, e))?;
            Ok(ResultRow {
                condition: rec[0].to_owned(),
                dw_model: parse_opt(path, &rec[1])?,
                dw_circuit: parse_opt(path, &rec[2])?,
                abs_err: parse_opt(path, &rec[3])?,
                rel_err: parse_opt(path, &rec[4])?,
            })
        })
        .collect()
}

/// `pulse_index,weight` for a synapse ramp (pulses numbered from 1).
pub fn characterization_csv(weights: &[f64]) -> Result<String> {
    to_string(&["pulse_index", "weight"], |w| {
        for (i, v) in weights.iter().enumerate() {
            w.write_record([(i + 1).to_string(), fmt_num(*v)])?;
        }
        Ok(())
    })
}

pub fn emit_characterization(weights: &[f64], path: impl AsRef<Path>) -> Result<()> {
    write_file(path.as_ref(), &characterization_csv(weights)?)
}

/// One row per slot of every active frame.
pub fn frames_csv(run: &CircuitRun) -> Result<String> {
    to_string(&FRAME_HEADER, |w| {
        for f in &run.frames {
            for (i, slot) in f.schedule.slots.iter().enumerate() {
                let (differential, _) = crate::circuit::overlap_voltage(&slot.p, &slot.n);
                w.write_record([
                    f.frame_index.to_string(),
                    i.to_string(),
                    fmt_num(slot.p.width_s),
                    fmt_num(slot.n.width_s),
                    fmt_num(differential),
                    fmt_num(f.slot_delta_w[i]),
                    fmt_num(f.slot_weight[i]),
                ])?;
            }
        }
        Ok(())
    })
}

pub fn emit_frames(run: &CircuitRun, path: impl AsRef<Path>) -> Result<()> {
    write_file(path.as_ref(), &frames_csv(run)?)
}

/// `time_ms,neuron` in time order.
pub fn train_csv(train: &SpikeTrain) -> Result<String> {
    to_string(&["time_ms", "neuron"], |w| {
        for (t, n) in train.events() {
            w.write_record([fmt_num(t), n.to_string()])?;
        }
        Ok(())
    })
}

pub fn emit_train(train: &SpikeTrain, path: impl AsRef<Path>) -> Result<()> {
    write_file(path.as_ref(), &train_csv(train)?)
}
