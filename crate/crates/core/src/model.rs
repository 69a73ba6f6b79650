//! Algorithmic reference engine for the minimal nearest-spike triplet rule.
//!
//! Every presynaptic spike depresses the weight in proportion to the fast
//! postsynaptic trace `y1`. Every postsynaptic spike potentiates it in
//! proportion to the presynaptic trace `x`, with an extra term gated by the
//! slow postsynaptic trace `y2` read just before that spike resets it.
//!
//! Traces are always read before the resets of the spikes at the current
//! instant. When a pre and a post spike coincide, both reads see the
//! pre-update trace values, LTD is applied first, then LTP, then all resets.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::trace::TraceState;
use crate::train::{Neuron, SpikeTrain};

/// Default initial weight, normalized units.
pub const DEFAULT_W0: f64 = 0.5;

/// Default read-before-update margin, ms.
pub const DEFAULT_EPSILON_MS: f64 = 1.0;

/// Amplitudes and time constants of the triplet rule.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TripletParams {
    pub a2_plus: f64,
    pub a3_plus: f64,
    pub a2_minus: f64,
    /// Presynaptic trace time constant, ms.
    pub tau_j: f64,
    /// Fast postsynaptic trace time constant, ms.
    pub tau_i1: f64,
    /// Slow postsynaptic trace time constant, ms.
    pub tau_i2: f64,
    /// Read-before-update margin, ms. Only its sign matters to this engine:
    /// `y2` is evaluated exactly at the pre-reset value.
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
}

fn default_epsilon() -> f64 {
    DEFAULT_EPSILON_MS
}

impl TripletParams {
    /// Visual cortex fit (nearest-spike minimal model).
    pub const VISUAL_CORTEX: TripletParams = TripletParams {
        a2_plus: 0.0,
        a3_plus: 50.0e-3,
        a2_minus: 8.0e-3,
        tau_j: 16.8,
        tau_i1: 33.7,
        tau_i2: 40.0,
        epsilon: DEFAULT_EPSILON_MS,
    };

    /// Hippocampal culture fit (nearest-spike minimal model).
    pub const HIPPOCAMPAL: TripletParams = TripletParams {
        a2_plus: 4.6e-3,
        a3_plus: 9.1e-3,
        a2_minus: 3.0e-3,
        tau_j: 16.8,
        tau_i1: 33.7,
        tau_i2: 48.0,
        epsilon: DEFAULT_EPSILON_MS,
    };

    pub fn validate(&self) -> Result<()> {
        for (name, a) in [
            ("a2_plus", self.a2_plus),
            ("a3_plus", self.a3_plus),
            ("a2_minus", self.a2_minus),
        ] {
            if !(a.is_finite() && a >= 0.0) {
                return Err(Error::invalid(format!(
                    "{name} must be finite and >= 0, got {a}"
                )));
            }
        }
        for (name, tau) in [
            ("tau_j", self.tau_j),
            ("tau_i1", self.tau_i1),
            ("tau_i2", self.tau_i2),
            ("epsilon", self.epsilon),
        ] {
            if !(tau.is_finite() && tau > 0.0) {
                return Err(Error::invalid(format!(
                    "{name} must be finite and > 0, got {tau}"
                )));
            }
        }
        if self.tau_i1 >= self.tau_i2 {
            return Err(Error::invalid(format!(
                "fast post trace must decay faster than the slow one (tau_i1 = {} >= tau_i2 = {})",
                self.tau_i1, self.tau_i2
            )));
        }
        Ok(())
    }

    /// Amplitudes multiplied by `k`, time constants unchanged.
    pub fn scaled(&self, k: f64) -> Self {
        Self {
            a2_plus: self.a2_plus * k,
            a3_plus: self.a3_plus * k,
            a2_minus: self.a2_minus * k,
            ..*self
        }
    }
}

fn check_unit(name: &str, v: f64) -> Result<()> {
    if (0.0..=1.0).contains(&v) {
        Ok(())
    } else {
        Err(Error::invalid(format!(
            "{name} trace value {v} outside [0, 1]"
        )))
    }
}

/// Depression at a presynaptic spike, given the fast post trace at that instant.
pub fn ltd_at_pre(params: &TripletParams, y1: f64) -> Result<f64> {
    check_unit("y1", y1)?;
    Ok(-params.a2_minus * y1)
}

/// Potentiation at a postsynaptic spike, given the pre trace at that instant
/// and the slow post trace read before this spike resets it.
pub fn ltp_at_post(params: &TripletParams, x: f64, y2_before_update: f64) -> Result<f64> {
    check_unit("x", x)?;
    check_unit("y2", y2_before_update)?;
    Ok(params.a2_plus * x + params.a3_plus * x * y2_before_update)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelEvent {
    pub time: f64,
    pub kind: Neuron,
    /// Trace values read for this event (pre-update).
    pub x: f64,
    pub y1: f64,
    pub y2: f64,
    pub delta_w: f64,
    pub weight_after: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModelRun {
    pub initial_weight: f64,
    pub events: Vec<ModelEvent>,
    pub total_delta_w: f64,
}

impl ModelRun {
    pub fn final_weight(&self) -> f64 {
        self.events
            .last()
            .map_or(self.initial_weight, |e| e.weight_after)
    }
}

/// Run the triplet rule over `train`, starting from weight `w0`.
///
/// Weights are not clamped: the rule is linear and state independent.
/// Repeated spikes of one neuron at an identical time count once.
pub fn run_model(train: &SpikeTrain, params: &TripletParams, w0: f64) -> Result<ModelRun> {
    params.validate()?;
    if !w0.is_finite() {
        return Err(Error::invalid(format!(
            "initial weight must be finite, got {w0}"
        )));
    }

    let mut x = TraceState::new(params.tau_j)?;
    let mut y1 = TraceState::new(params.tau_i1)?;
    let mut y2 = TraceState::new(params.tau_i2)?;

    let mut events = Vec::with_capacity(train.pre().len() + train.post().len());
    let mut weight = w0;
    let mut total = 0.0;

    let stream = train.events();
    let mut i = 0;
    while i < stream.len() {
        let t = stream[i].0;
        let mut has_pre = false;
        let mut has_post = false;
        while i < stream.len() && stream[i].0 == t {
            match stream[i].1 {
                Neuron::Pre => has_pre = true,
                Neuron::Post => has_post = true,
            }
            i += 1;
        }

        x = x.advance_to(t)?;
        y1 = y1.advance_to(t)?;
        y2 = y2.advance_to(t)?;
        let (xv, y1v, y2v) = (x.value(), y1.value(), y2.value());

        let mut push = |kind, delta_w: f64| {
            weight += delta_w;
            total += delta_w;
            events.push(ModelEvent {
                time: t,
                kind,
                x: xv,
                y1: y1v,
                y2: y2v,
                delta_w,
                weight_after: weight,
            });
        };
        if has_pre {
            push(Neuron::Pre, ltd_at_pre(params, y1v)?);
        }
        if has_post {
            push(Neuron::Post, ltp_at_post(params, xv, y2v)?);
        }

        if has_pre {
            x = x.on_spike();
        }
        if has_post {
            y1 = y1.on_spike();
            y2 = y2.on_spike();
        }
    }

    Ok(ModelRun {
        initial_weight: w0,
        events,
        total_delta_w: total,
    })
}
