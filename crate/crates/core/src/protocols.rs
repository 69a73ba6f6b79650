//! Pairing, triplet and quadruplet stimulation protocols.
//!
//! Groups repeat every `1000 / rho` ms starting at `t = 0`. In all protocols
//! a positive interval places the postsynaptic spike after the presynaptic
//! one (the potentiating order).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::train::SpikeTrain;

pub const DEFAULT_REPETITIONS: usize = 60;
/// Delay inside each pair of a quadruplet, ms.
pub const QUADRUPLET_PAIR_DELAY_MS: f64 = 5.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TripletVariant {
    PrePostPre,
    PostPrePost,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Protocol {
    Pairing {
        dt_ms: f64,
    },
    Triplet {
        variant: TripletVariant,
        dt1_ms: f64,
        dt2_ms: f64,
    },
    Quadruplet {
        t_ms: f64,
    },
}

impl Protocol {
    /// Time from the first to the last spike of one group, ms.
    pub fn span(&self) -> f64 {
        match *self {
            Protocol::Pairing { dt_ms } => dt_ms.abs(),
            Protocol::Triplet { dt1_ms, dt2_ms, .. } => dt1_ms + dt2_ms,
            Protocol::Quadruplet { t_ms } => 2.0 * QUADRUPLET_PAIR_DELAY_MS + t_ms.abs(),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Protocol::Pairing { .. } => "pairing",
            Protocol::Triplet { .. } => "triplet",
            Protocol::Quadruplet { .. } => "quadruplet",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProtocolSpec {
    pub protocol: Protocol,
    /// Repetition frequency, Hz.
    pub rho: f64,
    pub repetitions: usize,
}

impl ProtocolSpec {
    pub fn new(protocol: Protocol, rho: f64) -> Self {
        Self {
            protocol,
            rho,
            repetitions: DEFAULT_REPETITIONS,
        }
    }

    pub fn period_ms(&self) -> f64 {
        1000.0 / self.rho
    }

    pub fn generate(&self) -> Result<SpikeTrain> {
        match self.protocol {
            Protocol::Pairing { dt_ms } => pairing(dt_ms, self.rho, self.repetitions),
            Protocol::Triplet {
                variant,
                dt1_ms,
                dt2_ms,
            } => triplet(variant, dt1_ms, dt2_ms, self.rho, self.repetitions),
            Protocol::Quadruplet { t_ms } => quadruplet(t_ms, self.rho, self.repetitions),
        }
    }
}

fn check_schedule(span: f64, rho: f64, n: usize) -> Result<f64> {
    if !(rho.is_finite() && rho > 0.0) {
        return Err(Error::invalid(format!(
            "repetition frequency must be > 0 Hz, got {rho}"
        )));
    }
    if n == 0 {
        return Err(Error::invalid("a protocol needs at least one repetition"));
    }
    let period = 1000.0 / rho;
    if !(span.is_finite() && span < period) {
        return Err(Error::invalid(format!(
            "group span {span} ms does not fit in the {period} ms repetition period"
        )));
    }
    Ok(period)
}

/// Spike groups, each given as `(offset_ms, is_pre)` relative to its group start.
fn repeat(group: &[(f64, bool)], period: f64, n: usize) -> Result<SpikeTrain> {
    let mut pre = Vec::with_capacity(n * group.len());
    let mut post = Vec::with_capacity(n * group.len());
    for k in 0..n {
        let start = k as f64 * period;
        for &(offset, is_pre) in group {
            if is_pre {
                pre.push(start + offset);
            } else {
                post.push(start + offset);
            }
        }
    }
    SpikeTrain::new(pre, post, n as f64 * period)
}

/// `n` pre/post pairs; `dt_ms > 0` fires post `dt_ms` after pre, `dt_ms < 0` before.
pub fn pairing(dt_ms: f64, rho: f64, n: usize) -> Result<SpikeTrain> {
    let period = check_schedule(dt_ms.abs(), rho, n)?;
    let group = if dt_ms >= 0.0 {
        [(0.0, true), (dt_ms, false)]
    } else {
        [(0.0, false), (-dt_ms, true)]
    };
    repeat(&group, period, n)
}

pub fn triplet(
    variant: TripletVariant,
    dt1_ms: f64,
    dt2_ms: f64,
    rho: f64,
    n: usize,
) -> Result<SpikeTrain> {
    if !(dt1_ms > 0.0 && dt2_ms > 0.0) {
        return Err(Error::invalid(format!(
            "triplet intervals must be > 0, got ({dt1_ms}, {dt2_ms})"
        )));
    }
    let period = check_schedule(dt1_ms + dt2_ms, rho, n)?;
    let outer = variant == TripletVariant::PrePostPre;
    let group = [(0.0, outer), (dt1_ms, !outer), (dt1_ms + dt2_ms, outer)];
    repeat(&group, period, n)
}

/// A +5 ms pre-post pair and a -5 ms post-pre pair separated by `t_ms`.
/// For negative `t_ms` the order is mirrored into post-pre-pre-post.
pub fn quadruplet(t_ms: f64, rho: f64, n: usize) -> Result<SpikeTrain> {
    if t_ms == 0.0 || !t_ms.is_finite() {
        return Err(Error::invalid(format!(
            "quadruplet separation must be finite and non-zero, got {t_ms}"
        )));
    }
    let d = QUADRUPLET_PAIR_DELAY_MS;
    let gap = t_ms.abs();
    let period = check_schedule(2.0 * d + gap, rho, n)?;
    let lead_pre = t_ms > 0.0;
    let group = [
        (0.0, lead_pre),
        (d, !lead_pre),
        (d + gap, !lead_pre),
        (2.0 * d + gap, lead_pre),
    ];
    repeat(&group, period, n)
}
