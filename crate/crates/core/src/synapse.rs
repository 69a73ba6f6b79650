//! Ideal pulse-width-encoded memristive synapse.
//!
//! Above `v_on` the weight climbs at a constant `v_p` per second, below
//! `v_off` it falls at `v_d` per second, and in between nothing happens.
//! The weight is clamped to `[w_min, w_max]` after every applied pulse.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Polarity {
    Potentiate,
    Depress,
}

/// Device constants of the synapse.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeviceParams {
    pub w_min: f64,
    pub w_max: f64,
    /// LTP threshold, volts (> 0).
    pub v_on: f64,
    /// LTD threshold, volts (< 0).
    pub v_off: f64,
    /// Potentiation rate, weight units per second.
    pub v_p: f64,
    /// Depression rate magnitude, weight units per second.
    pub v_d: f64,
    /// Drive level of a single terminal, volts.
    pub node_amplitude: f64,
}

impl Default for DeviceParams {
    fn default() -> Self {
        Self {
            w_min: 0.0,
            w_max: 1.0,
            v_on: 3.0,
            v_off: -3.0,
            v_p: 68.5,
            v_d: 63.9,
            node_amplitude: 2.0,
        }
    }
}

impl DeviceParams {
    pub fn validate(&self) -> Result<()> {
        let all = [
            self.w_min,
            self.w_max,
            self.v_on,
            self.v_off,
            self.v_p,
            self.v_d,
            self.node_amplitude,
        ];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("device parameters must all be finite"));
        }
        if self.w_min > self.w_max {
            return Err(Error::invalid(format!(
                "w_min = {} exceeds w_max = {}",
                self.w_min, self.w_max
            )));
        }
        if !(self.v_off < 0.0 && 0.0 < self.v_on) {
            return Err(Error::invalid(format!(
                "thresholds must satisfy v_off < 0 < v_on, got v_off = {}, v_on = {}",
                self.v_off, self.v_on
            )));
        }
        if !(self.v_p > 0.0 && self.v_d > 0.0) {
            return Err(Error::invalid(format!(
                "programming rates must be > 0, got v_p = {}, v_d = {}",
                self.v_p, self.v_d
            )));
        }
        if !(self.node_amplitude > 0.0) {
            return Err(Error::invalid(format!(
                "node amplitude must be > 0, got {}",
                self.node_amplitude
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MemristiveSynapse {
    weight: f64,
    params: DeviceParams,
}

impl MemristiveSynapse {
    /// A synapse at `weight`, which must already lie within the device bounds.
    pub fn new(params: DeviceParams, weight: f64) -> Result<Self> {
        params.validate()?;
        if !(params.w_min..=params.w_max).contains(&weight) {
            return Err(Error::invalid(format!(
                "initial weight {weight} outside [{}, {}]",
                params.w_min, params.w_max
            )));
        }
        Ok(Self { weight, params })
    }

    pub fn weight(&self) -> f64 {
        self.weight
    }

    pub fn params(&self) -> &DeviceParams {
        &self.params
    }

    /// Rate of change (weight units / s) under a constant voltage `v`.
    pub fn rate(&self, v: f64) -> f64 {
        if v >= self.params.v_on {
            self.params.v_p
        } else if v <= self.params.v_off {
            -self.params.v_d
        } else {
            0.0
        }
    }

    /// Hold voltage `v` across the device for `duration` seconds.
    pub fn apply_voltage(self, v: f64, duration: f64) -> Result<Self> {
        if !(duration.is_finite() && duration >= 0.0) {
            return Err(Error::invalid(format!(
                "pulse duration must be finite and >= 0, got {duration}"
            )));
        }
        let rate = self.rate(v);
        if rate == 0.0 || duration == 0.0 {
            return Ok(self);
        }
        let weight = (self.weight + rate * duration).clamp(self.params.w_min, self.params.w_max);
        Ok(Self { weight, ..self })
    }

    /// Amplitude seen across the device when both terminals overlap at full drive.
    pub fn overlap_level(&self, polarity: Polarity) -> f64 {
        match polarity {
            Polarity::Potentiate => 2.0 * self.params.node_amplitude,
            Polarity::Depress => -2.0 * self.params.node_amplitude,
        }
    }

    /// One programming pulse of `pulse_width` seconds at the overlapped differential level.
    pub fn program(self, polarity: Polarity, pulse_width: f64) -> Result<Self> {
        if !(pulse_width.is_finite() && pulse_width >= 0.0) {
            return Err(Error::invalid(format!(
                "pulse width must be finite and >= 0, got {pulse_width}"
            )));
        }
        self.apply_voltage(self.overlap_level(polarity), pulse_width)
    }

    /// Weight after each of `n_pulses` identical programming pulses.
    pub fn ramp_characterize(
        self,
        n_pulses: usize,
        polarity: Polarity,
        pulse_width: f64,
    ) -> Result<Vec<f64>> {
        if n_pulses == 0 {
            return Err(Error::invalid("ramp needs at least one pulse"));
        }
        let mut syn = self;
        let mut out = Vec::with_capacity(n_pulses);
        for _ in 0..n_pulses {
            syn = syn.program(polarity, pulse_width)?;
            out.push(syn.weight);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn syn(w: f64) -> MemristiveSynapse {
        MemristiveSynapse::new(DeviceParams::default(), w).unwrap()
    }

    #[test]
    fn dead_zone_and_thresholds() {
        let s = syn(0.5);
        assert_eq!(s.apply_voltage(2.0, 1.0).unwrap().weight(), 0.5);
        assert_eq!(s.apply_voltage(-2.99, 1.0).unwrap().weight(), 0.5);
        let up = s.apply_voltage(4.0, 1e-3).unwrap().weight();
        assert!((up - (0.5 + 68.5e-3)).abs() < 1e-15);
        let at_threshold = s.apply_voltage(3.0, 1e-3).unwrap().weight();
        assert_eq!(at_threshold, up);
        let down = s.apply_voltage(-3.0, 1e-3).unwrap().weight();
        assert!((down - (0.5 - 63.9e-3)).abs() < 1e-15);
    }

    #[test]
    fn clamps_at_bounds() {
        assert_eq!(syn(1.0).apply_voltage(4.0, 1.0).unwrap().weight(), 1.0);
        assert_eq!(syn(0.0).apply_voltage(-4.0, 1.0).unwrap().weight(), 0.0);
    }

    #[test]
    fn negative_durations_rejected() {
        assert!(syn(0.5).apply_voltage(4.0, -1.0).is_err());
        assert!(syn(0.5).program(Polarity::Potentiate, -1e-3).is_err());
    }

    #[test]
    fn program_examples() {
        assert_eq!(
            syn(0.2)
                .program(Polarity::Potentiate, 0.0)
                .unwrap()
                .weight(),
            0.2
        );
        // v_p * 1 ms = 68.5 * 0.001
        let w = syn(0.2)
            .program(Polarity::Potentiate, 1e-3)
            .unwrap()
            .weight();
        assert!((w - 0.2 - 0.0685).abs() < 1e-15);
        let twice = syn(0.2)
            .program(Polarity::Depress, 1e-3)
            .unwrap()
            .program(Polarity::Depress, 1e-3)
            .unwrap()
            .weight();
        let once = syn(0.2).program(Polarity::Depress, 2e-3).unwrap().weight();
        assert!((twice - once).abs() < 1e-15);
    }

    #[test]
    fn program_matches_apply_voltage() {
        let s = syn(0.3);
        let a = s.program(Polarity::Potentiate, 4e-4).unwrap();
        let b = s
            .apply_voltage(s.overlap_level(Polarity::Potentiate), 4e-4)
            .unwrap();
        assert_eq!(a.weight().to_bits(), b.weight().to_bits());
        let a = s.program(Polarity::Depress, 4e-4).unwrap();
        let b = s.apply_voltage(-4.0, 4e-4).unwrap();
        assert_eq!(a.weight().to_bits(), b.weight().to_bits());
    }

    #[test]
    fn ramps() {
        let start = syn(0.0);
        let one = start
            .ramp_characterize(1, Polarity::Potentiate, 1e-3)
            .unwrap();
        assert_eq!(
            one,
            vec![start.program(Polarity::Potentiate, 1e-3).unwrap().weight()]
        );

        let down = syn(1.0)
            .ramp_characterize(40, Polarity::Depress, 1e-3)
            .unwrap();
        assert_eq!(*down.last().unwrap(), 0.0);
        assert!(down.windows(2).all(|w| w[1] <= w[0]));
        assert!(start.ramp_characterize(0, Polarity::Depress, 1e-3).is_err());
    }

    #[test]
    fn dead_zone_sweep() {
        let s = syn(0.5);
        let p = *s.params();
        for k in 1..1000 {
            let v = p.v_off + (p.v_on - p.v_off) * k as f64 / 1000.0;
            assert_eq!(s.apply_voltage(v, 1.0).unwrap().weight(), 0.5, "v = {v}");
        }
    }

    #[test]
    fn device_validation() {
        let bad = DeviceParams {
            v_off: 1.0,
            ..DeviceParams::default()
        };
        assert!(MemristiveSynapse::new(bad, 0.5).is_err());
        assert!(MemristiveSynapse::new(DeviceParams::default(), 1.5).is_err());
    }

    proptest! {
        #[test]
        fn symmetric_round_trip(w in 0.2f64..0.8, width in 0.0f64..1e-3) {
            let params = DeviceParams { v_d: 68.5, ..DeviceParams::default() };
            let s = MemristiveSynapse::new(params, w).unwrap();
            let back = s.program(Polarity::Potentiate, width).unwrap()
                .program(Polarity::Depress, width).unwrap();
            prop_assert!((back.weight() - w).abs() < 1e-15);
        }

        #[test]
        fn state_independent(w1 in 0.1f64..0.9, w2 in 0.1f64..0.9, width in 0.0f64..1e-3) {
            let d1 = syn(w1).program(Polarity::Potentiate, width).unwrap().weight() - w1;
            let d2 = syn(w2).program(Polarity::Potentiate, width).unwrap().weight() - w2;
            prop_assert!((d1 - d2).abs() < 1e-14);
        }
    }
}
