use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use super::config::{ParameterSet, Sweep};
use super::metrics::{nmse, relative_rms};
use crate::circuit::{calibrate, quantize_train, run_circuit, CircuitParams};
use crate::error::{Error, Result};
use crate::model::run_model;
use crate::protocols::{Protocol, ProtocolSpec};
use crate::synapse::MemristiveSynapse;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EngineSelection {
    Model,
    Circuit,
    Both,
}

impl EngineSelection {
    pub fn model(self) -> bool {
        matches!(self, EngineSelection::Model | EngineSelection::Both)
    }

    pub fn circuit(self) -> bool {
        matches!(self, EngineSelection::Circuit | EngineSelection::Both)
    }
}

impl FromStr for EngineSelection {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "model" => Ok(EngineSelection::Model),
            "circuit" => Ok(EngineSelection::Circuit),
            "both" => Ok(EngineSelection::Both),
            _ => Err(Error::invalid(format!(
                "unknown engine {s:?} (model, circuit or both)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub params: ParameterSet,
    pub engine: EngineSelection,
    /// Protocol at its non-swept settings; the swept field is overwritten per point.
    pub base: ProtocolSpec,
    pub sweep: Sweep,
    /// Standard errors of the reference values, one per sweep point.
    pub sigma: Option<Vec<f64>>,
    /// Evaluate the model on the frame-quantized train instead of the nominal one.
    pub quantize_model: bool,
    /// Fail the run when any point's relative engine error exceeds this.
    pub abort_rel_error: Option<f64>,
}

impl ExperimentConfig {
    pub fn new(
        params: ParameterSet,
        engine: EngineSelection,
        base: ProtocolSpec,
        sweep: Sweep,
    ) -> Self {
        Self {
            params,
            engine,
            base,
            sweep,
            sigma: None,
            quantize_model: false,
            abort_rel_error: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        if self.sweep.is_empty() {
            return Err(Error::Config("sweep has no points".into()));
        }
        let compatible = matches!(
            (&self.sweep, &self.base.protocol),
            (Sweep::Rho(_), _)
                | (Sweep::Dt(_), Protocol::Pairing { .. })
                | (Sweep::Intervals(_), Protocol::Triplet { .. })
                | (Sweep::Separation(_), Protocol::Quadruplet { .. })
        );
        if !compatible {
            return Err(Error::Config(format!(
                "a {} sweep does not apply to the {} protocol",
                self.sweep.axis(),
                self.base.protocol.name()
            )));
        }
        if let Some(sigma) = &self.sigma {
            if sigma.len() != self.sweep.len() {
                return Err(Error::Config(format!(
                    "{} standard errors given for {} sweep points",
                    sigma.len(),
                    self.sweep.len()
                )));
            }
        }
        if let Some(t) = self.abort_rel_error {
            if !(t >= 0.0) {
                return Err(Error::Config(format!(
                    "abort threshold must be >= 0, got {t}"
                )));
            }
        }
        Ok(())
    }

    /// `(condition label, protocol)` for every sweep point, in sweep order.
    pub fn points(&self) -> Vec<(String, ProtocolSpec)> {
        let base = self.base;
        match &self.sweep {
            Sweep::Rho(v) => v
                .iter()
                .map(|&rho| (format!("rho={rho}"), ProtocolSpec { rho, ..base }))
                .collect(),
            Sweep::Dt(v) => v
                .iter()
                .map(|&dt_ms| {
                    (
                        format!("dt={dt_ms}"),
                        ProtocolSpec {
                            protocol: Protocol::Pairing { dt_ms },
                            ..base
                        },
                    )
                })
                .collect(),
            Sweep::Intervals(v) => {
                let variant = match base.protocol {
                    Protocol::Triplet { variant, .. } => variant,
                    _ => unreachable!("validated sweep/protocol pairing"),
                };
                v.iter()
                    .map(|&(dt1_ms, dt2_ms)| {
                        (
                            format!("dt1={dt1_ms};dt2={dt2_ms}"),
                            ProtocolSpec {
                                protocol: Protocol::Triplet {
                                    variant,
                                    dt1_ms,
                                    dt2_ms,
                                },
                                ..base
                            },
                        )
                    })
                    .collect()
            }
            Sweep::Separation(v) => v
                .iter()
                .map(|&t_ms| {
                    (
                        format!("T={t_ms}"),
                        ProtocolSpec {
                            protocol: Protocol::Quadruplet { t_ms },
                            ..base
                        },
                    )
                })
                .collect(),
        }
    }

    pub fn circuit_params(&self) -> Result<CircuitParams> {
        let p = &self.params;
        let cp = calibrate(&p.model, p.device.v_p, p.device.v_d, p.slot_ms)?;
        Ok(CircuitParams {
            delay_ms: p.delay_ms,
            ..cp
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub condition: String,
    pub dw_model: Option<f64>,
    pub dw_circuit: Option<f64>,
    pub abs_err: Option<f64>,
    pub rel_err: Option<f64>,
}

impl ResultRow {
    pub fn new(condition: String, dw_model: Option<f64>, dw_circuit: Option<f64>) -> Self {
        let (abs_err, rel_err) = match (dw_model, dw_circuit) {
            (Some(m), Some(c)) => {
                let abs = (c - m).abs();
                let rel = if m != 0.0 {
                    abs / m.abs()
                } else if abs == 0.0 {
                    0.0
                } else {
                    f64::INFINITY
                };
                (Some(abs), Some(rel))
            }
            _ => (None, None),
        };
        Self {
            condition,
            dw_model,
            dw_circuit,
            abs_err,
            rel_err,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Summary {
    /// Only one engine ran; nothing to compare.
    None,
    Nmse(f64),
    RelativeRms(f64),
}

impl Summary {
    pub fn from_rows(rows: &[ResultRow], sigma: Option<&[f64]>) -> Result<Self> {
        let pairs: Option<(Vec<f64>, Vec<f64>)> = rows
            .iter()
            .map(|r| Some((r.dw_circuit?, r.dw_model?)))
            .collect::<Option<Vec<_>>>()
            .map(|v| v.into_iter().unzip());
        let Some((cir, model)) = pairs else {
            return Ok(Summary::None);
        };
        match sigma {
            Some(s) => Ok(Summary::Nmse(nmse(&cir, &model, s)?)),
            None => Ok(Summary::RelativeRms(relative_rms(&cir, &model)?)),
        }
    }

    pub fn value(&self) -> Option<f64> {
        match *self {
            Summary::None => None,
            Summary::Nmse(v) | Summary::RelativeRms(v) => Some(v),
        }
    }
}

impl fmt::Display for Summary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Summary::None => write!(f, "metric=none"),
            Summary::Nmse(v) => write!(f, "metric=nmse value={v:.6e} ({:.4}%)", v * 100.0),
            Summary::RelativeRms(v) => write!(
                f,
                "metric=relative_rms value={v:.6e} ({:.4}%; no standard errors supplied)",
                v * 100.0
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentResult {
    pub rows: Vec<ResultRow>,
    pub summary: Summary,
    /// Programming segments clipped by the weight bounds, summed over all points.
    pub clamp_events: usize,
}

struct PointOutcome {
    row: ResultRow,
    clamp_events: usize,
}

fn run_point(
    cfg: &ExperimentConfig,
    circuit: Option<&CircuitParams>,
    label: String,
    spec: &ProtocolSpec,
) -> Result<PointOutcome> {
    let params = &cfg.params;
    let train = spec.generate()?;
    let dw_model = if cfg.engine.model() {
        let train = match (cfg.quantize_model, circuit) {
            (true, Some(cp)) => quantize_train(&train, cp.frame_ms())?,
            (true, None) => quantize_train(&train, cfg.circuit_params()?.frame_ms())?,
            (false, _) => train.clone(),
        };
        Some(run_model(&train, &params.model, params.w0)?.total_delta_w)
    } else {
        None
    };
    let (dw_circuit, clamp_events) = match circuit {
        Some(cp) => {
            let syn = MemristiveSynapse::new(params.device, params.w0)?;
            let run = run_circuit(&train, cp, syn)?;
            (Some(run.total_delta_w), run.clamp_events)
        }
        None => (None, 0),
    };
    Ok(PointOutcome {
        row: ResultRow::new(label, dw_model, dw_circuit),
        clamp_events,
    })
}

/// Run every sweep point through the selected engines.
///
/// Points run in parallel; rows come back in sweep order.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentResult> {
    cfg.validate()?;
    let circuit = if cfg.engine.circuit() {
        Some(cfg.circuit_params()?)
    } else {
        None
    };
    let outcomes: Vec<PointOutcome> = cfg
        .points()
        .into_par_iter()
        .map(|(label, spec)| run_point(cfg, circuit.as_ref(), label, &spec))
        .collect::<Result<_>>()?;

    if let Some(threshold) = cfg.abort_rel_error {
        if let Some(row) = outcomes
            .iter()
            .map(|o| &o.row)
            .find(|r| r.rel_err.is_some_and(|e| e > threshold))
        {
            return Err(Error::EngineDisagreement {
                condition: row.condition.clone(),
                rel_error: row.rel_err.unwrap_or(f64::NAN),
                threshold,
            });
        }
    }

    let clamp_events = outcomes.iter().map(|o| o.clamp_events).sum();
    let rows: Vec<ResultRow> = outcomes.into_iter().map(|o| o.row).collect();
    let summary = Summary::from_rows(&rows, cfg.sigma.as_deref())?;
    Ok(ExperimentResult {
        rows,
        summary,
        clamp_events,
    })
}
