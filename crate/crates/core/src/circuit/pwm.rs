//! Analog front end: adder/multiplier and sawtooth-comparator PWM.

use crate::error::{Error, Result};

/// Comparator output width (seconds) for a held sample `value` against a
/// rising sawtooth carrier of peak `v_peak` and period `slot_ms`.
///
/// The output stays high until the carrier crosses the sample, so the duty
/// cycle is `value / v_peak`, saturating at a full slot.
pub fn pwm_encode(value: f64, v_peak: f64, slot_ms: f64) -> Result<f64> {
    if !(v_peak.is_finite() && v_peak > 0.0) {
        return Err(Error::invalid(format!(
            "carrier peak must be > 0, got {v_peak}"
        )));
    }
    if !(slot_ms.is_finite() && slot_ms > 0.0) {
        return Err(Error::invalid(format!(
            "slot length must be > 0, got {slot_ms}"
        )));
    }
    if !(value >= 0.0) {
        return Err(Error::invalid(format!(
            "PWM input must be >= 0, got {value}"
        )));
    }
    let duty = (value / v_peak).min(1.0);
    Ok(duty * slot_ms * 1e-3)
}

/// `g1 * x + g2 * x * y2`: the LTP drive assembled from the pre trace and the
/// delayed slow post trace.
pub fn ltp_drive(x: f64, y2_delayed: f64, g1: f64, g2: f64) -> f64 {
    g1 * x + g2 * x * y2_delayed
}
