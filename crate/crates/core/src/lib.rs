//! Simulation of multiple-step quantized (MSQ) triplet STDP.
//!
//! Two engines compute the weight change of a single synapse under a spike
//! train:
//!
//! * [`model`]: the exact nearest-spike minimal triplet rule, event driven.
//! * [`circuit`]: a behavioral model of the clocked mixed-signal circuit,
//!   with frame-quantized spikes, sampled RC traces, PWM-encoded programming
//!   pulses, a three-slot TDM frame and an ideal memristive [`synapse`].
//!
//! [`protocols`] builds the pairing, triplet and quadruplet stimulation
//! trains and [`harness`] sweeps them through both engines.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod circuit;
pub mod error;
pub mod harness;
pub mod model;
pub mod protocols;
pub mod synapse;
pub mod trace;
pub mod train;

pub use circuit::{calibrate, quantize_train, run_circuit, CircuitParams, CircuitRun};
pub use error::{Error, ErrorCategory, Result};
pub use model::{run_model, ModelRun, TripletParams};
pub use protocols::{Protocol, ProtocolSpec, TripletVariant};
pub use synapse::{DeviceParams, MemristiveSynapse, Polarity};
pub use train::{Neuron, SpikeTrain};
