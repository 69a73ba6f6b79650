//! Fit circuit constants to a set of rule amplitudes.
//!
//! Time constants carry over directly. The gain ratio `g1 : g2` follows
//! `a2_plus : a3_plus` with small integer gains, and the carrier peaks follow
//! from the weight change of one unsaturated programming pulse:
//!
//! ```text
//! a2_plus  = v_p * t_slot * g1 / v_j_peak
//! a3_plus  = v_p * t_slot * g2 / v_j_peak
//! a2_minus = v_d * t_slot      / v_i_peak
//! ```

use super::{CircuitParams, DEFAULT_DELAY_MS, SLOTS_PER_FRAME};
use crate::error::{Error, Result};
use crate::model::{TripletParams, DEFAULT_EPSILON_MS};

/// Accepted relative mismatch between `g2 / g1` and `a3_plus / a2_plus`.
pub const GAIN_RATIO_TOLERANCE: f64 = 0.02;
const MAX_GAIN: u32 = 100;

/// Smallest integer gains whose ratio tracks `a3_plus / a2_plus`.
pub fn gain_pair(a2_plus: f64, a3_plus: f64) -> Result<(f64, f64)> {
    match (a2_plus > 0.0, a3_plus > 0.0) {
        (false, false) => Err(Error::DegenerateCalibration(
            "both LTP amplitudes are zero, no carrier peak can be solved".into(),
        )),
        (false, true) => Ok((0.0, 1.0)),
        (true, false) => Ok((1.0, 0.0)),
        (true, true) => {
            let ratio = a3_plus / a2_plus;
            let mismatch = |g1: f64, g2: f64| ((g2 / g1) / ratio - 1.0).abs();
            let mut best = (1.0, ratio.round().max(1.0));
            for g1 in 1..=MAX_GAIN {
                let g1 = f64::from(g1);
                let g2 = (g1 * ratio).round().max(1.0);
                if mismatch(g1, g2) <= GAIN_RATIO_TOLERANCE {
                    return Ok((g1, g2));
                }
                if mismatch(g1, g2) < mismatch(best.0, best.1) {
                    best = (g1, g2);
                }
            }
            Ok(best)
        }
    }
}

/// Circuit constants reproducing `tp` on a device with programming rates
/// `v_p`, `v_d` (weight units / s) and slot length `slot_ms`.
pub fn calibrate(tp: &TripletParams, v_p: f64, v_d: f64, slot_ms: f64) -> Result<CircuitParams> {
    tp.validate()?;
    for (name, v) in [("v_p", v_p), ("v_d", v_d), ("slot_ms", slot_ms)] {
        if !(v.is_finite() && v > 0.0) {
            return Err(Error::invalid(format!(
                "{name} must be finite and > 0, got {v}"
            )));
        }
    }
    let (g1, g2) = gain_pair(tp.a2_plus, tp.a3_plus)?;
    if tp.a2_minus == 0.0 {
        return Err(Error::DegenerateCalibration(
            "a2_minus is zero, the LTD carrier peak would be unbounded".into(),
        ));
    }
    let slot_s = slot_ms * 1e-3;
    let v_j_peak = if g1 > 0.0 {
        v_p * slot_s * g1 / tp.a2_plus
    } else {
        v_p * slot_s * g2 / tp.a3_plus
    };
    let v_i_peak = v_d * slot_s / tp.a2_minus;

    Ok(CircuitParams {
        v_j_peak,
        v_i_peak,
        g1,
        g2,
        tau_j: tp.tau_j,
        tau_i1: tp.tau_i1,
        tau_i2: tp.tau_i2,
        slot_ms,
        slots_per_frame: SLOTS_PER_FRAME,
        delay_ms: DEFAULT_DELAY_MS,
    })
}

/// Rule amplitudes that the circuit `cp` actually realizes on a device with
/// rates `v_p`, `v_d`, as long as no PWM conversion saturates.
pub fn realized_params(cp: &CircuitParams, v_p: f64, v_d: f64) -> TripletParams {
    let slot_s = cp.slot_ms * 1e-3;
    TripletParams {
        a2_plus: v_p * slot_s * cp.g1 / cp.v_j_peak,
        a3_plus: v_p * slot_s * cp.g2 / cp.v_j_peak,
        a2_minus: v_d * slot_s / cp.v_i_peak,
        tau_j: cp.tau_j,
        tau_i1: cp.tau_i1,
        tau_i2: cp.tau_i2,
        epsilon: DEFAULT_EPSILON_MS,
    }
}
