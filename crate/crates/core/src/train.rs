use std::fmt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Neuron {
    Pre,
    Post,
}

impl fmt::Display for Neuron {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Neuron::Pre => "pre",
            Neuron::Post => "post",
        })
    }
}

/// Spike times (milliseconds) of the pre- and postsynaptic neuron of a single
/// synapse, both sorted ascending and contained in `[0, duration]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpikeTrain {
    pre: Vec<f64>,
    post: Vec<f64>,
    duration: f64,
}

impl SpikeTrain {
    pub fn new(pre: Vec<f64>, post: Vec<f64>, duration: f64) -> Result<Self> {
        if !(duration.is_finite() && duration >= 0.0) {
            return Err(Error::invalid(format!(
                "train duration must be finite and >= 0, got {duration}"
            )));
        }
        for (name, times) in [("pre", &pre), ("post", &post)] {
            if let Some(t) = times.iter().find(|&&t| !(0.0..=duration).contains(&t)) {
                return Err(Error::invalid(format!(
                    "{name} spike at {t} ms lies outside [0, {duration}]"
                )));
            }
            if let Some(w) = times.windows(2).find(|w| w[1] < w[0]) {
                return Err(Error::invalid(format!(
                    "{name} spikes must be sorted ascending ({} follows {})",
                    w[1], w[0]
                )));
            }
        }
        Ok(Self {
            pre,
            post,
            duration,
        })
    }

    pub fn empty(duration: f64) -> Result<Self> {
        Self::new(Vec::new(), Vec::new(), duration)
    }

    pub fn pre(&self) -> &[f64] {
        &self.pre
    }

    pub fn post(&self) -> &[f64] {
        &self.post
    }

    pub fn duration(&self) -> f64 {
        self.duration
    }

    pub fn is_empty(&self) -> bool {
        self.pre.is_empty() && self.post.is_empty()
    }

    /// Same train with every spike shifted by `offset` ms (duration grows by `offset`).
    pub fn shifted(&self, offset: f64) -> Result<Self> {
        Self::new(
            self.pre.iter().map(|t| t + offset).collect(),
            self.post.iter().map(|t| t + offset).collect(),
            self.duration + offset,
        )
    }

    /// Pre and post roles exchanged.
    pub fn swapped(&self) -> Self {
        Self {
            pre: self.post.clone(),
            post: self.pre.clone(),
            duration: self.duration,
        }
    }

    /// All spikes in time order; at equal times pre precedes post.
    pub fn events(&self) -> Vec<(f64, Neuron)> {
        let mut events: Vec<(f64, Neuron)> = self
            .pre
            .iter()
            .map(|&t| (t, Neuron::Pre))
            .chain(self.post.iter().map(|&t| (t, Neuron::Post)))
            .collect();
        events.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        events
    }
}
