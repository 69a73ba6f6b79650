//! Three-slot TDM frame: what each synapse terminal sees in each slot.
//!
//! Slot 0 carries spike transmission, slot 1 LTP programming, slot 2 LTD
//! programming. Every pulse starts at its slot boundary. A single terminal
//! only ever drives `node_amplitude`, which sits inside the device dead zone;
//! programming needs the opposite terminal to be driven the other way at the
//! same time so that the differential reaches `2 * node_amplitude`.

use serde::Serialize;

use crate::error::{Error, Result};

/// Width slack when checking pulses against the slot length, seconds.
const WIDTH_SLACK_S: f64 = 1e-15;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SlotRole {
    Transmission,
    Ltp,
    Ltd,
}

impl SlotRole {
    pub const ORDER: [SlotRole; 3] = [SlotRole::Transmission, SlotRole::Ltp, SlotRole::Ltd];
}

/// Rectangular pulse starting at the slot boundary.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Pulse {
    pub level: f64,
    pub width_s: f64,
}

impl Pulse {
    pub const IDLE: Pulse = Pulse {
        level: 0.0,
        width_s: 0.0,
    };

    pub fn new(level: f64, width_s: f64) -> Self {
        Self { level, width_s }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SlotSignals {
    pub role: SlotRole,
    /// Positive (pre-side) terminal.
    pub p: Pulse,
    /// Negative (post-side) terminal.
    pub n: Pulse,
}

impl SlotSignals {
    /// Piecewise-constant differential `V_P - V_N` over the slot as
    /// `(level, duration_s)` segments. Zero-level stretches are omitted.
    pub fn segments(&self) -> Vec<(f64, f64)> {
        let (first_level, first_len) = overlap_voltage(&self.p, &self.n);
        let mut out = Vec::with_capacity(2);
        if first_len > 0.0 && first_level != 0.0 {
            out.push((first_level, first_len));
        }
        let tail = (self.p.width_s - self.n.width_s).abs();
        let level = if self.p.width_s > self.n.width_s {
            self.p.level
        } else {
            -self.n.level
        };
        if tail > 0.0 && level != 0.0 {
            out.push((level, tail));
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FrameSchedule {
    pub frame_index: u64,
    pub slots: [SlotSignals; 3],
}

impl FrameSchedule {
    pub fn slot(&self, role: SlotRole) -> &SlotSignals {
        // slots are stored in ORDER
        &self.slots[role as usize]
    }
}

/// Differential level during the overlap of two slot-aligned pulses, and the
/// length of that overlap.
pub fn overlap_voltage(p: &Pulse, n: &Pulse) -> (f64, f64) {
    (p.level - n.level, p.width_s.min(n.width_s))
}

/// Node signals for one frame.
///
/// * slot 1: the pre side drives `+A` on P for `ltp_width_s`; the post side
///   enables it with `-A` on N for the whole slot only if a post spike fired
///   in this frame.
/// * slot 2: the post side drives `+A` on N for `ltd_width_s`; the pre side
///   enables it with `-A` on P for the whole slot only if a pre spike fired.
/// * slot 0: each spiking neuron drives `+A` on its own terminal, which never
///   exceeds `A` in magnitude across the device.
pub fn build_frame(
    frame_index: u64,
    has_pre: bool,
    has_post: bool,
    ltp_width_s: f64,
    ltd_width_s: f64,
    node_amplitude: f64,
    slot_s: f64,
) -> Result<FrameSchedule> {
    for (name, w) in [("LTP", ltp_width_s), ("LTD", ltd_width_s)] {
        if !(w >= 0.0 && w <= slot_s + WIDTH_SLACK_S) {
            return Err(Error::invalid(format!(
                "{name} pulse width {w} s does not fit in a {slot_s} s slot"
            )));
        }
    }
    let a = node_amplitude;
    let spike = |fired: bool| {
        if fired {
            Pulse::new(a, slot_s)
        } else {
            Pulse::IDLE
        }
    };
    let enable = |fired: bool| {
        if fired {
            Pulse::new(-a, slot_s)
        } else {
            Pulse::IDLE
        }
    };
    let drive = |width: f64| {
        if width > 0.0 {
            Pulse::new(a, width.min(slot_s))
        } else {
            Pulse::IDLE
        }
    };

    Ok(FrameSchedule {
        frame_index,
        slots: [
            SlotSignals {
                role: SlotRole::Transmission,
                p: spike(has_pre),
                n: spike(has_post),
            },
            SlotSignals {
                role: SlotRole::Ltp,
                p: drive(ltp_width_s),
                n: enable(has_post),
            },
            SlotSignals {
                role: SlotRole::Ltd,
                p: enable(has_pre),
                n: drive(ltd_width_s),
            },
        ],
    })
}
