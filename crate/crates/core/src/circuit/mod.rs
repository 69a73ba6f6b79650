//! Behavioral model of the frame-quantized triplet STDP circuit.
//!
//! The whole circuit runs off one clock. Spikes are only seen at frame
//! boundaries (three 1 ms slots per frame). Three RC trace modules (`x` on the
//! pre side, `y1` and `y2` on the post side) are sampled on the slot grid and
//! latched at each frame boundary. The slow trace goes through an extra
//! `delay_ms` hold so a post spike sees its pre-reset value. Holds convert
//! to pulse widths against sawtooth carriers of peak `v_j_peak` (LTP) and
//! `v_i_peak` (LTD), and the widths program the synapse in the LTP and LTD
//! slots of the frame. All analog blocks are ideal operators.

pub mod calibrate;
pub mod pwm;
pub mod tdm;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::synapse::MemristiveSynapse;
use crate::trace::SpikeTrack;
use crate::train::SpikeTrain;

pub use calibrate::{calibrate, gain_pair, realized_params, GAIN_RATIO_TOLERANCE};
pub use pwm::{ltp_drive, pwm_encode};
pub use tdm::{build_frame, overlap_voltage, FrameSchedule, Pulse, SlotRole, SlotSignals};

/// Frame length in slots (the decoder's counter modulus).
pub const SLOTS_PER_FRAME: u32 = 3;
pub const DEFAULT_SLOT_MS: f64 = 1.0;
pub const DEFAULT_DELAY_MS: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CircuitParams {
    /// Pre-side sawtooth peak, volts.
    pub v_j_peak: f64,
    /// Post-side sawtooth peak, volts.
    pub v_i_peak: f64,
    pub g1: f64,
    pub g2: f64,
    pub tau_j: f64,
    pub tau_i1: f64,
    pub tau_i2: f64,
    pub slot_ms: f64,
    pub slots_per_frame: u32,
    /// Extra hold on the slow post trace, ms.
    pub delay_ms: f64,
}

impl CircuitParams {
    pub fn frame_ms(&self) -> f64 {
        f64::from(self.slots_per_frame) * self.slot_ms
    }

    pub fn validate(&self) -> Result<()> {
        if self.slots_per_frame != SLOTS_PER_FRAME {
            return Err(Error::invalid(format!(
                "frames have exactly {SLOTS_PER_FRAME} slots, got {}",
                self.slots_per_frame
            )));
        }
        for (name, v) in [
            ("v_j_peak", self.v_j_peak),
            ("v_i_peak", self.v_i_peak),
            ("tau_j", self.tau_j),
            ("tau_i1", self.tau_i1),
            ("tau_i2", self.tau_i2),
            ("slot_ms", self.slot_ms),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::invalid(format!(
                    "{name} must be finite and > 0, got {v}"
                )));
            }
        }
        for (name, v) in [
            ("g1", self.g1),
            ("g2", self.g2),
            ("delay_ms", self.delay_ms),
        ] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::invalid(format!(
                    "{name} must be finite and >= 0, got {v}"
                )));
            }
        }
        Ok(())
    }
}

/// Frame index of a spike at `t` ms: nearest frame boundary, ties rounding up.
pub fn frame_index(t: f64, frame_ms: f64) -> u64 {
    (t / frame_ms + 0.5).floor() as u64
}

fn frame_indices(times: &[f64], frame_ms: f64) -> Vec<u64> {
    let mut idx: Vec<u64> = times.iter().map(|&t| frame_index(t, frame_ms)).collect();
    idx.dedup();
    idx
}

/// Snap every spike to its frame boundary, merging spikes of one neuron that
/// land in the same frame.
pub fn quantize_train(train: &SpikeTrain, frame_ms: f64) -> Result<SpikeTrain> {
    if !(frame_ms.is_finite() && frame_ms > 0.0) {
        return Err(Error::invalid(format!(
            "frame length must be > 0, got {frame_ms}"
        )));
    }
    let snap = |times: &[f64]| -> Vec<f64> {
        frame_indices(times, frame_ms)
            .into_iter()
            .map(|k| k as f64 * frame_ms)
            .collect()
    };
    let pre = snap(train.pre());
    let post = snap(train.post());
    let last = pre
        .last()
        .copied()
        .unwrap_or(0.0)
        .max(post.last().copied().unwrap_or(0.0));
    let duration = (frame_index(train.duration(), frame_ms) as f64 * frame_ms).max(last);
    SpikeTrain::new(pre, post, duration)
}

/// One frame in which at least one neuron spiked.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FrameRecord {
    pub frame_index: u64,
    pub time_ms: f64,
    pub pre: bool,
    pub post: bool,
    /// Held trace values latched at the frame boundary.
    pub x: f64,
    pub y1: f64,
    pub y2_delayed: f64,
    pub ltp_width_s: f64,
    pub ltd_width_s: f64,
    pub schedule: FrameSchedule,
    /// Weight change caused in each slot, in slot order.
    pub slot_delta_w: [f64; 3],
    /// Weight at the end of each slot.
    pub slot_weight: [f64; 3],
    pub delta_w: f64,
    pub weight_after: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CircuitRun {
    pub initial_weight: f64,
    pub frames: Vec<FrameRecord>,
    /// Final minus initial weight; includes the effect of clamping.
    pub total_delta_w: f64,
    /// Programming segments whose change was cut short by a weight bound.
    pub clamp_events: usize,
}

impl CircuitRun {
    pub fn final_weight(&self) -> f64 {
        self.frames
            .last()
            .map_or(self.initial_weight, |f| f.weight_after)
    }
}

fn check_gating(syn: &MemristiveSynapse) -> Result<()> {
    let p = syn.params();
    let a = p.node_amplitude;
    if !(a < p.v_on && p.v_on <= 2.0 * a && -2.0 * a <= p.v_off && p.v_off < -a) {
        return Err(Error::invalid(format!(
            "node amplitude {a} V must stay inside the dead zone ({}, {}) while twice it crosses both thresholds",
            p.v_off, p.v_on
        )));
    }
    Ok(())
}

/// Run the circuit over `train`, programming `syn` frame by frame.
pub fn run_circuit(
    train: &SpikeTrain,
    cp: &CircuitParams,
    syn: MemristiveSynapse,
) -> Result<CircuitRun> {
    cp.validate()?;
    check_gating(&syn)?;

    let frame_ms = cp.frame_ms();
    let slot_s = cp.slot_ms * 1e-3;
    let q = quantize_train(train, frame_ms)?;
    let x = SpikeTrack::new(q.pre(), cp.tau_j)?;
    let y1 = SpikeTrack::new(q.post(), cp.tau_i1)?;
    let y2 = SpikeTrack::new(q.post(), cp.tau_i2)?;

    let pre_frames = frame_indices(q.pre(), frame_ms);
    let post_frames = frame_indices(q.post(), frame_ms);
    let mut active: Vec<u64> = pre_frames.iter().chain(&post_frames).copied().collect();
    active.sort_unstable();
    active.dedup();

    let initial_weight = syn.weight();
    let amplitude = syn.params().node_amplitude;
    let mut syn = syn;
    let mut frames = Vec::with_capacity(active.len());
    let mut clamp_events = 0;

    for k in active {
        let has_pre = pre_frames.binary_search(&k).is_ok();
        let has_post = post_frames.binary_search(&k).is_ok();
        let t = k as f64 * frame_ms;

        let xv = x.held_at(cp.slot_ms, t);
        let y1v = y1.held_at(cp.slot_ms, t);
        let y2v = y2.held_at(cp.slot_ms, t - cp.delay_ms);

        let ltp_width_s = pwm_encode(ltp_drive(xv, y2v, cp.g1, cp.g2), cp.v_j_peak, cp.slot_ms)?;
        let ltd_width_s = pwm_encode(y1v, cp.v_i_peak, cp.slot_ms)?;
        let schedule = build_frame(
            k,
            has_pre,
            has_post,
            ltp_width_s,
            ltd_width_s,
            amplitude,
            slot_s,
        )?;

        let frame_start = syn.weight();
        let mut slot_delta_w = [0.0; 3];
        let mut slot_weight = [0.0; 3];
        for (i, slot) in schedule.slots.iter().enumerate() {
            let before = syn.weight();
            for (level, duration) in slot.segments() {
                let pre_segment = syn.weight();
                syn = syn.apply_voltage(level, duration)?;
                let unclamped = pre_segment + syn.rate(level) * duration;
                if syn.weight() != unclamped && syn.rate(level) != 0.0 {
                    clamp_events += 1;
                }
            }
            slot_delta_w[i] = syn.weight() - before;
            slot_weight[i] = syn.weight();
        }

        frames.push(FrameRecord {
            frame_index: k,
            time_ms: t,
            pre: has_pre,
            post: has_post,
            x: xv,
            y1: y1v,
            y2_delayed: y2v,
            ltp_width_s,
            ltd_width_s,
            schedule,
            slot_delta_w,
            slot_weight,
            delta_w: syn.weight() - frame_start,
            weight_after: syn.weight(),
        });
    }

    Ok(CircuitRun {
        initial_weight,
        total_delta_w: syn.weight() - initial_weight,
        frames,
        clamp_events,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::TripletParams;
    use crate::synapse::DeviceParams;

    fn hippo_device() -> DeviceParams {
        DeviceParams {
            v_p: 58.3,
            v_d: 53.7,
            ..DeviceParams::default()
        }
    }

    fn hippo_circuit() -> CircuitParams {
        calibrate(&TripletParams::HIPPOCAMPAL, 58.3, 53.7, 1.0).unwrap()
    }

    fn syn(device: DeviceParams) -> MemristiveSynapse {
        MemristiveSynapse::new(device, 0.5).unwrap()
    }

    #[test]
    fn quantize_examples() {
        assert_eq!(frame_index(0.0, 3.0), 0);
        assert_eq!(frame_index(10.0, 3.0), 3);
        assert_eq!(frame_index(4.5, 3.0), 2);
        assert_eq!(frame_index(4.4, 3.0), 1);
        let train = SpikeTrain::new(vec![0.0, 1.0], vec![10.0], 10.0).unwrap();
        let q = quantize_train(&train, 3.0).unwrap();
        assert_eq!(q.pre(), &[0.0]);
        assert_eq!(q.post(), &[9.0]);
        assert!(quantize_train(&train, 0.0).is_err());
    }

    #[test]
    fn empty_train_keeps_weight() {
        let run = run_circuit(
            &SpikeTrain::empty(100.0).unwrap(),
            &hippo_circuit(),
            syn(hippo_device()),
        )
        .unwrap();
        assert!(run.frames.is_empty());
        assert_eq!(run.total_delta_w, 0.0);
        assert_eq!(run.final_weight(), 0.5);
    }

    #[test]
    fn single_pair_composes_per_op_oracles() {
        let cp = hippo_circuit();
        let device = hippo_device();
        let train = SpikeTrain::new(vec![0.0], vec![10.0], 10.0).unwrap();
        let run = run_circuit(&train, &cp, syn(device)).unwrap();
        let x9 = (-9.0f64 / 16.8).exp();
        let width = pwm_encode(cp.g1 * x9, cp.v_j_peak, cp.slot_ms).unwrap();
        let expected = device.v_p * width;
        assert!((run.total_delta_w - expected).abs() < 1e-15);
        // a pre spike with no prior post trace depresses by nothing
        assert_eq!(run.frames[0].delta_w, 0.0);
        assert_eq!(run.frames[1].frame_index, 3);
    }

    #[test]
    fn delay_hides_the_coincident_reset() {
        let cp = hippo_circuit();
        let device = hippo_device();
        // post-pre-post with 9 ms gaps
        let train = SpikeTrain::new(vec![9.0], vec![0.0, 18.0], 18.0).unwrap();
        let run = run_circuit(&train, &cp, syn(device)).unwrap();
        let last = run.frames.last().unwrap();
        assert!((last.y2_delayed - (-17.0f64 / 48.0).exp()).abs() < 1e-15);

        let undelayed = CircuitParams {
            delay_ms: 0.0,
            ..cp
        };
        let run = run_circuit(&train, &undelayed, syn(device)).unwrap();
        assert_eq!(run.frames.last().unwrap().y2_delayed, 1.0);
    }

    #[test]
    fn pre_only_never_programs_ltp() {
        let cp = CircuitParams {
            g1: 1.0,
            g2: 1.0,
            ..hippo_circuit()
        };
        let train = SpikeTrain::new(vec![0.0, 6.0, 12.0], vec![], 12.0).unwrap();
        let run = run_circuit(&train, &cp, syn(hippo_device())).unwrap();
        for f in &run.frames {
            assert!(f.ltp_width_s > 0.0 || f.frame_index == 0);
            assert_eq!(f.slot_delta_w[1], 0.0);
        }
    }

    #[test]
    fn weight_chain_is_consistent() {
        let train = SpikeTrain::new(vec![0.0, 30.0, 31.0], vec![10.0, 20.0, 31.0], 40.0).unwrap();
        let run = run_circuit(&train, &hippo_circuit(), syn(hippo_device())).unwrap();
        let mut w = run.initial_weight;
        for f in &run.frames {
            assert!((w + f.delta_w - f.weight_after).abs() < 1e-15);
            w = f.weight_after;
        }
        let sum: f64 = run.frames.iter().map(|f| f.delta_w).sum();
        assert!((sum - run.total_delta_w).abs() < 1e-14);
    }

    #[test]
    fn clamping_is_counted() {
        let device = DeviceParams {
            w_max: 0.5,
            ..hippo_device()
        };
        let train = SpikeTrain::new(vec![0.0], vec![3.0], 3.0).unwrap();
        let run = run_circuit(&train, &hippo_circuit(), syn(device)).unwrap();
        assert_eq!(run.total_delta_w, 0.0);
        assert_eq!(run.clamp_events, 1);
    }

    #[test]
    fn rejects_ungated_device() {
        let device = DeviceParams {
            v_on: 1.5,
            ..hippo_device()
        };
        let train = SpikeTrain::new(vec![0.0], vec![3.0], 3.0).unwrap();
        assert!(run_circuit(&train, &hippo_circuit(), syn(device)).is_err());
        let bad = CircuitParams {
            slots_per_frame: 4,
            ..hippo_circuit()
        };
        assert!(run_circuit(&train, &bad, syn(hippo_device())).is_err());
    }
}
