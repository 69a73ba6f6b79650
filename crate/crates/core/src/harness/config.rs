//! Parameter sets, parameter files and sweep specifications.
//!
//! A parameter file is TOML. Every section is optional when `base` names a
//! compiled-in set, otherwise `[model]` must be complete. Unknown keys are
//! rejected.
//!
//! ```toml
//! name = "my-fit"          # optional label
//! base = "hippocampal"     # optional: start from a named set
//!
//! [model]
//! a2_plus = 4.6e-3
//! a3_plus = 9.1e-3
//! a2_minus = 3.0e-3
//! tau_j = 16.8
//! tau_i1 = 33.7
//! tau_i2 = 48.0
//! epsilon = 1.0
//!
//! [device]
//! w_min = 0.0
//! w_max = 1.0
//! v_on = 3.0
//! v_off = -3.0
//! v_p = 58.3
//! v_d = 53.7
//! node_amplitude = 2.0
//!
//! [circuit]
//! slot_ms = 1.0
//! delay_ms = 1.0
//!
//! [run]
//! w0 = 0.5
//! ```

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::circuit::{DEFAULT_DELAY_MS, DEFAULT_SLOT_MS};
use crate::error::{Error, Result};
use crate::model::{TripletParams, DEFAULT_W0};
use crate::synapse::DeviceParams;

/// Everything needed to drive both engines for one experiment.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParameterSet {
    pub name: String,
    pub model: TripletParams,
    pub device: DeviceParams,
    pub slot_ms: f64,
    pub delay_ms: f64,
    pub w0: f64,
}

impl ParameterSet {
    pub const NAMES: [&'static str; 2] = ["visual-cortex", "hippocampal"];

    fn with(name: &str, model: TripletParams, v_p: f64, v_d: f64) -> Self {
        Self {
            name: name.to_owned(),
            model,
            device: DeviceParams {
                v_p,
                v_d,
                ..DeviceParams::default()
            },
            slot_ms: DEFAULT_SLOT_MS,
            delay_ms: DEFAULT_DELAY_MS,
            w0: DEFAULT_W0,
        }
    }

    /// Visual cortex set; the device rates reproduce `v_j_peak = 1.37 V`
    /// and `v_i_peak = 7.99 V` on calibration.
    pub fn visual_cortex() -> Self {
        Self::with("visual-cortex", TripletParams::VISUAL_CORTEX, 68.5, 63.9)
    }

    /// Hippocampal set; the device rates reproduce `v_j_peak = 12.67 V`
    /// and `v_i_peak = 17.90 V` on calibration.
    pub fn hippocampal() -> Self {
        Self::with("hippocampal", TripletParams::HIPPOCAMPAL, 58.3, 53.7)
    }

    pub fn named(name: &str) -> Option<Self> {
        match name {
            "visual-cortex" => Some(Self::visual_cortex()),
            "hippocampal" => Some(Self::hippocampal()),
            _ => None,
        }
    }

    /// A compiled-in name, or else a path to a parameter file.
    pub fn resolve(name_or_path: &str) -> Result<Self> {
        match Self::named(name_or_path) {
            Some(set) => Ok(set),
            None if Path::new(name_or_path).exists() => Self::from_file(name_or_path),
            None => Err(Error::Config(format!(
                "unknown parameter set {name_or_path:?}: expected {} or a parameter file path",
                Self::NAMES.join(", ")
            ))),
        }
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml(&text).map_err(|e| match e {
            Error::Config(msg) => Error::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let file: ParamsFile = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        file.into_set()
    }

    pub fn validate(&self) -> Result<()> {
        self.model.validate()?;
        self.device.validate()?;
        for (name, v) in [("slot_ms", self.slot_ms)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::Config(format!("{name} must be > 0, got {v}")));
            }
        }
        if !(self.delay_ms.is_finite() && self.delay_ms >= 0.0) {
            return Err(Error::Config(format!(
                "delay_ms must be >= 0, got {}",
                self.delay_ms
            )));
        }
        if !(self.device.w_min..=self.device.w_max).contains(&self.w0) {
            return Err(Error::Config(format!(
                "w0 = {} lies outside the device bounds [{}, {}]",
                self.w0, self.device.w_min, self.device.w_max
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ParamsFile {
    name: Option<String>,
    base: Option<String>,
    model: Option<ModelSection>,
    device: Option<DeviceSection>,
    circuit: Option<CircuitSection>,
    run: Option<RunSection>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelSection {
    a2_plus: Option<f64>,
    a3_plus: Option<f64>,
    a2_minus: Option<f64>,
    tau_j: Option<f64>,
    tau_i1: Option<f64>,
    tau_i2: Option<f64>,
    epsilon: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct DeviceSection {
    w_min: Option<f64>,
    w_max: Option<f64>,
    v_on: Option<f64>,
    v_off: Option<f64>,
    v_p: Option<f64>,
    v_d: Option<f64>,
    node_amplitude: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct CircuitSection {
    slot_ms: Option<f64>,
    delay_ms: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RunSection {
    w0: Option<f64>,
}

impl ParamsFile {
    fn into_set(self) -> Result<ParameterSet> {
        let model = self.model.unwrap_or_default();
        let mut set = match &self.base {
            Some(base) => ParameterSet::named(base).ok_or_else(|| {
                Error::Config(format!(
                    "unknown base parameter set {base:?} (expected one of {:?})",
                    ParameterSet::NAMES
                ))
            })?,
            None => {
                let need = |name: &str, v: Option<f64>| {
                    v.ok_or_else(|| {
                        Error::Config(format!("missing model.{name} (and no base set)"))
                    })
                };
                let tp = TripletParams {
                    a2_plus: need("a2_plus", model.a2_plus)?,
                    a3_plus: need("a3_plus", model.a3_plus)?,
                    a2_minus: need("a2_minus", model.a2_minus)?,
                    tau_j: need("tau_j", model.tau_j)?,
                    tau_i1: need("tau_i1", model.tau_i1)?,
                    tau_i2: need("tau_i2", model.tau_i2)?,
                    epsilon: model.epsilon.unwrap_or(crate::model::DEFAULT_EPSILON_MS),
                };
                ParameterSet {
                    name: "custom".into(),
                    model: tp,
                    device: DeviceParams::default(),
                    slot_ms: DEFAULT_SLOT_MS,
                    delay_ms: DEFAULT_DELAY_MS,
                    w0: DEFAULT_W0,
                }
            }
        };

        fn over(dst: &mut f64, src: Option<f64>) {
            if let Some(v) = src {
                *dst = v;
            }
        }
        let m = &mut set.model;
        over(&mut m.a2_plus, model.a2_plus);
        over(&mut m.a3_plus, model.a3_plus);
        over(&mut m.a2_minus, model.a2_minus);
        over(&mut m.tau_j, model.tau_j);
        over(&mut m.tau_i1, model.tau_i1);
        over(&mut m.tau_i2, model.tau_i2);
        over(&mut m.epsilon, model.epsilon);

        let device = self.device.unwrap_or_default();
        let d = &mut set.device;
        over(&mut d.w_min, device.w_min);
        over(&mut d.w_max, device.w_max);
        over(&mut d.v_on, device.v_on);
        over(&mut d.v_off, device.v_off);
        over(&mut d.v_p, device.v_p);
        over(&mut d.v_d, device.v_d);
        over(&mut d.node_amplitude, device.node_amplitude);

        let circuit = self.circuit.unwrap_or_default();
        over(&mut set.slot_ms, circuit.slot_ms);
        over(&mut set.delay_ms, circuit.delay_ms);
        over(&mut set.w0, self.run.unwrap_or_default().w0);

        if let Some(name) = self.name {
            set.name = name;
        } else if self.base.is_some() {
            set.name = format!("{}-custom", set.name);
        }
        set.validate().map_err(|e| match e {
            Error::InvalidArgument(msg) => Error::Config(msg),
            other => other,
        })?;
        Ok(set)
    }
}

/// Values taken by the swept protocol parameter.
#[derive(Debug, Clone, PartialEq)]
pub enum Sweep {
    /// Repetition frequency, Hz.
    Rho(Vec<f64>),
    /// Pairing interval, ms (positive: post after pre).
    Dt(Vec<f64>),
    /// Triplet intervals `(dt1, dt2)`, ms.
    Intervals(Vec<(f64, f64)>),
    /// Quadruplet separation `T`, ms.
    Separation(Vec<f64>),
}

impl Sweep {
    pub fn len(&self) -> usize {
        match self {
            Sweep::Rho(v) | Sweep::Dt(v) | Sweep::Separation(v) => v.len(),
            Sweep::Intervals(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn axis(&self) -> &'static str {
        match self {
            Sweep::Rho(_) => "rho",
            Sweep::Dt(_) => "dt",
            Sweep::Intervals(_) => "pairs",
            Sweep::Separation(_) => "T",
        }
    }
}

fn parse_list(axis: &str, values: &str) -> Result<Vec<f64>> {
    values
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| Error::invalid(format!("bad {axis} sweep value {s:?}")))
        })
        .collect()
}

impl FromStr for Sweep {
    type Err = Error;

    /// `rho=0.1,10,20`, `dt=-10,10`, `pairs=5/5,10/10` or `T=-20,20`.
    fn from_str(s: &str) -> Result<Self> {
        let (axis, values) = s.split_once('=').ok_or_else(|| {
            Error::invalid(format!("sweep {s:?} is not of the form <axis>=<values>"))
        })?;
        let axis = axis.trim();
        let sweep = match axis {
            "rho" => Sweep::Rho(parse_list(axis, values)?),
            "dt" => Sweep::Dt(parse_list(axis, values)?),
            "T" | "t" => Sweep::Separation(parse_list(axis, values)?),
            "pairs" => Sweep::Intervals(
                values
                    .split(',')
                    .map(str::trim)
                    .filter(|p| !p.is_empty())
                    .map(|p| {
                        let (a, b) = p.split_once('/').ok_or_else(|| {
                            Error::invalid(format!(
                                "interval pair {p:?} is not of the form dt1/dt2"
                            ))
                        })?;
                        let a = parse_list(axis, a)?;
                        let b = parse_list(axis, b)?;
                        match (a.as_slice(), b.as_slice()) {
                            ([a], [b]) => Ok((*a, *b)),
                            _ => Err(Error::invalid(format!("bad interval pair {p:?}"))),
                        }
                    })
                    .collect::<Result<_>>()?,
            ),
            other => {
                return Err(Error::invalid(format!(
                    "unknown sweep axis {other:?} (expected rho, dt, pairs or T)"
                )))
            }
        };
        if sweep.is_empty() {
            return Err(Error::invalid(format!("sweep {s:?} has no values")));
        }
        Ok(sweep)
    }
}

impl fmt::Display for Sweep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[f64]| v.iter().map(f64::to_string).collect::<Vec<_>>().join(",");
        match self {
            Sweep::Rho(v) => write!(f, "rho={}", join(v)),
            Sweep::Dt(v) => write!(f, "dt={}", join(v)),
            Sweep::Separation(v) => write!(f, "T={}", join(v)),
            Sweep::Intervals(v) => {
                let pairs: Vec<String> = v.iter().map(|(a, b)| format!("{a}/{b}")).collect();
                write!(f, "pairs={}", pairs.join(","))
            }
        }
    }
}

/// Reads one standard error per non-empty line; `#` starts a comment.
pub fn read_sigma_file(path: impl AsRef<Path>) -> Result<Vec<f64>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    text.lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
        .map(|l| {
            l.parse::<f64>()
                .map_err(|_| Error::Config(format!("{}: bad standard error {l:?}", path.display())))
        })
        .collect()
}
