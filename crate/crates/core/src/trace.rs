//! Nearest-spike exponential traces.
//!
//! A trace jumps to [`X_MAX`] at every spike of its neuron and decays with
//! time constant `tau` in between. Two spikes only ever interact through the
//! most recent one: the trace is reset, never accumulated. Evaluation is
//! closed-form throughout, so there is no integration step error anywhere
//! downstream.
//!
//! The circuit side sees traces through a zero-order hold clocked on a fixed
//! grid (`t = 0, p, 2p, ...`), see [`SampledTrace`] and [`SpikeTrack::held_at`].
//! A spike that lands exactly on a sample instant is visible to that sample.

use crate::error::{Error, Result};

/// Peak trace value reached at every spike.
pub const X_MAX: f64 = 1.0;

/// Slack used when snapping a time onto the sample grid, in units of samples.
const GRID_SNAP: f64 = 1e-9;

fn check_tau(tau: f64) -> Result<()> {
    if tau.is_finite() && tau > 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(format!(
            "time constant must be finite and > 0, got {tau}"
        )))
    }
}

fn check_sorted(times: &[f64]) -> Result<()> {
    if let Some(t) = times.iter().find(|t| !t.is_finite()) {
        return Err(Error::invalid(format!("spike time {t} is not finite")));
    }
    if let Some(w) = times.windows(2).find(|w| w[1] < w[0]) {
        return Err(Error::invalid(format!(
            "spike times must be sorted ascending ({} follows {})",
            w[1], w[0]
        )));
    }
    Ok(())
}

/// Event-driven trace state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceState {
    value: f64,
    last_update_time: f64,
    tau: f64,
}

impl TraceState {
    /// A silent trace (value 0) at `t = 0`.
    pub fn new(tau: f64) -> Result<Self> {
        Self::with_value(0.0, tau, 0.0)
    }

    pub fn with_value(value: f64, tau: f64, time: f64) -> Result<Self> {
        check_tau(tau)?;
        if !(0.0..=X_MAX).contains(&value) {
            return Err(Error::invalid(format!(
                "trace value {value} outside [0, {X_MAX}]"
            )));
        }
        if !time.is_finite() {
            return Err(Error::invalid(format!("trace time {time} is not finite")));
        }
        Ok(Self {
            value,
            last_update_time: time,
            tau,
        })
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn last_update_time(&self) -> f64 {
        self.last_update_time
    }

    /// Let the trace relax for `dt` milliseconds.
    pub fn decay(self, dt: f64) -> Result<Self> {
        if !(dt >= 0.0) || !dt.is_finite() {
            return Err(Error::invalid(format!(
                "decay interval must be finite and >= 0, got {dt}"
            )));
        }
        Ok(Self {
            value: self.value * (-dt / self.tau).exp(),
            last_update_time: self.last_update_time + dt,
            tau: self.tau,
        })
    }

    /// Decay up to absolute time `t` (which must not precede the last update).
    pub fn advance_to(self, t: f64) -> Result<Self> {
        if t < self.last_update_time {
            return Err(Error::invalid(format!(
                "cannot advance trace backwards from {} to {t}",
                self.last_update_time
            )));
        }
        self.decay(t - self.last_update_time)
    }

    /// Nearest-spike reset.
    pub fn on_spike(self) -> Self {
        Self {
            value: X_MAX,
            ..self
        }
    }
}

/// Validated, sorted spike times of one neuron, evaluated as a trace with a
/// given time constant.
#[derive(Debug, Clone, PartialEq)]
pub struct SpikeTrack<'a> {
    times: &'a [f64],
    tau: f64,
}

impl<'a> SpikeTrack<'a> {
    pub fn new(times: &'a [f64], tau: f64) -> Result<Self> {
        check_tau(tau)?;
        check_sorted(times)?;
        Ok(Self { times, tau })
    }

    fn decayed_from(&self, latest: Option<f64>, t: f64) -> f64 {
        latest.map_or(0.0, |s| X_MAX * (-(t - s) / self.tau).exp())
    }

    /// Trace at `t`, including a spike that fires exactly at `t`.
    pub fn value_at(&self, t: f64) -> f64 {
        let idx = self.times.partition_point(|&s| s <= t);
        self.decayed_from(idx.checked_sub(1).map(|i| self.times[i]), t)
    }

    /// Trace just before `t`: spikes at exactly `t` have not been applied yet.
    pub fn value_before(&self, t: f64) -> f64 {
        let idx = self.times.partition_point(|&s| s < t);
        self.decayed_from(idx.checked_sub(1).map(|i| self.times[i]), t)
    }

    /// Zero-order-hold output at `t` for a sampler clocked every `period` ms
    /// from `t = 0`. Before the first sample instant the hold reads 0.
    pub fn held_at(&self, period: f64, t: f64) -> f64 {
        if t < 0.0 {
            return 0.0;
        }
        self.value_at(grid_floor(period, t))
    }
}

/// Latest sample instant `k * period <= t`.
pub(crate) fn grid_floor(period: f64, t: f64) -> f64 {
    (t / period + GRID_SNAP).floor() * period
}

/// Closed-form trace value at `t` given the neuron's sorted spike times.
pub fn value_at(spike_times: &[f64], tau: f64, t: f64) -> Result<f64> {
    Ok(SpikeTrack::new(spike_times, tau)?.value_at(t))
}

/// Sample-and-hold view of a trace on the global clock grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledTrace {
    pub sample_period: f64,
    /// `(sample instant, held value)`, ascending in time.
    pub samples: Vec<(f64, f64)>,
}

impl SampledTrace {
    /// Held value at an arbitrary `t` inside the sampled window.
    pub fn held_at(&self, t: f64) -> f64 {
        let idx = self.samples.partition_point(|&(s, _)| s <= t);
        idx.checked_sub(1).map_or(0.0, |i| self.samples[i].1)
    }
}

/// Sample the trace generated by `spike_times` at `0, p, 2p, ...` up to and
/// including `window_end`.
pub fn sample_hold(
    spike_times: &[f64],
    tau: f64,
    window_end: f64,
    sample_period: f64,
) -> Result<SampledTrace> {
    if !(sample_period.is_finite() && sample_period > 0.0) {
        return Err(Error::invalid(format!(
            "sample period must be finite and > 0, got {sample_period}"
        )));
    }
    if !(window_end.is_finite() && window_end >= 0.0) {
        return Err(Error::invalid(format!(
            "sampling window end must be finite and >= 0, got {window_end}"
        )));
    }
    let track = SpikeTrack::new(spike_times, tau)?;
    let n = (window_end / sample_period + GRID_SNAP).floor() as usize;
    let samples = (0..=n)
        .map(|k| {
            let t = k as f64 * sample_period;
            (t, track.value_at(t))
        })
        .collect();
    Ok(SampledTrace {
        sample_period,
        samples,
    })
}
