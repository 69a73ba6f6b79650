//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use msq_stdp::circuit::{frame_index, GAIN_RATIO_TOLERANCE};
use msq_stdp::harness::{
    read_result_csv, relative_rms, result_csv, run_experiment, EngineSelection, ExperimentConfig,
    ParameterSet, Sweep,
};
use msq_stdp::protocols::{pairing, quadruplet, triplet};
use msq_stdp::trace::TraceState;
use msq_stdp::{
    calibrate, quantize_train, run_circuit, run_model, DeviceParams, MemristiveSynapse, Polarity,
    Protocol, ProtocolSpec, SpikeTrain, TripletParams, TripletVariant,
};
use rand::{rngs::StdRng, Rng, SeedableRng};

use common::{brute_force_dw, rel_close};

type Check = Result<String, String>;
type Criterion = fn() -> Check;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(limit: Duration, started: Instant) -> Result<Duration, String> {
    let took = started.elapsed();
    ensure(took < limit, || format!("took {took:?}, limit {limit:?}"))?;
    Ok(took)
}

const HIPPO: TripletParams = TripletParams::HIPPOCAMPAL;
const VISUAL: TripletParams = TripletParams::VISUAL_CORTEX;
const PAIR_GRID: [f64; 6] = [3.0, 5.0, 10.0, 20.0, 40.0, 60.0];
const TRIPLET_GRID: [f64; 3] = [6.0, 9.0, 15.0];
/// One-frame decay of the fastest trace, the worst drop a sampled trace can show.
fn trace_drop() -> f64 {
    1.0 - (-3.0f64 / HIPPO.tau_j).exp()
}

fn signed_pair_grid() -> Vec<f64> {
    PAIR_GRID
        .iter()
        .map(|d| -d)
        .rev()
        .chain(PAIR_GRID)
        .collect()
}

fn model_dw(train: &SpikeTrain, p: &TripletParams) -> f64 {
    run_model(train, p, 0.5).unwrap().total_delta_w
}

fn c1_trace_exactness() -> Check {
    let started = Instant::now();
    let mut rng = StdRng::seed_from_u64(0x7ace);
    let (mut worst_decay, mut worst_semigroup) = (0.0f64, 0.0f64);
    for _ in 0..10_000 {
        let v = rng.random_range(0.0..=1.0);
        let tau = rng.random_range(1.0..200.0);
        let a = rng.random_range(0.0..500.0);
        let b = rng.random_range(0.0..500.0);
        let s = TraceState::with_value(v, tau, 0.0).unwrap();
        let closed = v * (-a / tau).exp();
        let got = s.decay(a).unwrap().value();
        let err = |x: f64, y: f64| {
            if x == y {
                0.0
            } else {
                (x - y).abs() / x.abs().max(y.abs())
            }
        };
        worst_decay = worst_decay.max(err(got, closed));
        let split = s.decay(a).unwrap().decay(b).unwrap().value();
        let joint = s.decay(a + b).unwrap().value();
        worst_semigroup = worst_semigroup.max(err(split, joint));
    }
    let took = within(Duration::from_secs(1), started)?;
    ensure(worst_decay <= 1e-12 && worst_semigroup <= 1e-12, || {
        format!("max rel error decay {worst_decay:e}, semigroup {worst_semigroup:e}")
    })?;
    Ok(format!(
        "10^4 triples: max rel err decay {worst_decay:.1e}, semigroup {worst_semigroup:.1e} ({took:.0?})"
    ))
}

fn c2_single_pair() -> Check {
    // 4.6e-3 * exp(-10/16.8) and -3.0e-3 * exp(-10/33.7)
    const LTP: f64 = 0.002536583782568018;
    const LTD: f64 = -0.0022297208173554617;
    let ltp = model_dw(
        &SpikeTrain::new(vec![0.0], vec![10.0], 10.0).unwrap(),
        &HIPPO,
    );
    let ltd = model_dw(
        &SpikeTrain::new(vec![10.0], vec![0.0], 10.0).unwrap(),
        &HIPPO,
    );
    ensure(rel_close(ltp, LTP, 1e-9), || {
        format!("pre-post {ltp:e} vs {LTP:e}")
    })?;
    ensure(rel_close(ltd, LTD, 1e-9), || {
        format!("post-pre {ltd:e} vs {LTD:e}")
    })?;
    Ok(format!("pre-post {ltp:.12e}, post-pre {ltd:.12e}"))
}

fn c3_pairwise_window() -> Check {
    let started = Instant::now();
    let mut worst = 0.0f64;
    for dt in signed_pair_grid() {
        let dw = model_dw(&pairing(dt, 1.0, 60).unwrap(), &HIPPO);
        ensure((dt > 0.0 && dw > 0.0) || (dt < 0.0 && dw < 0.0), || {
            format!("dt={dt}: dW={dw:e} has the wrong sign")
        })?;
        let single = model_dw(&pairing(dt, 1.0, 1).unwrap(), &HIPPO);
        let rel = (dw - 60.0 * single).abs() / (60.0 * single).abs();
        ensure(rel <= 1e-6, || {
            format!("dt={dt}: 60-pair total off 60x single by {rel:e}")
        })?;
        worst = worst.max(rel);
    }
    let took = within(Duration::from_secs(1), started)?;
    Ok(format!(
        "12 points, signs bipolar; max |60x single - total| rel {worst:.1e} ({took:.0?})"
    ))
}

fn c4_frequency_dependence() -> Check {
    let started = Instant::now();
    let rhos = [0.1, 10.0, 20.0, 40.0, 50.0];
    let dws: Vec<f64> = rhos
        .iter()
        .map(|&rho| model_dw(&pairing(10.0, rho, 60).unwrap(), &VISUAL))
        .collect();
    ensure(dws.windows(2).all(|w| w[1] > w[0]), || {
        format!("not strictly increasing: {dws:?}")
    })?;
    ensure(dws[0] < 0.05 * dws[4], || {
        format!("dW(0.1 Hz)={:e} vs dW(50 Hz)={:e}", dws[0], dws[4])
    })?;
    let took = within(Duration::from_secs(1), started)?;
    let shown: Vec<String> = dws.iter().map(|d| format!("{d:.3e}")).collect();
    Ok(format!(
        "dW over rho {rhos:?} = [{}] ({took:.0?})",
        shown.join(", ")
    ))
}

fn c5_triplet_asymmetry() -> Check {
    const PRE_POST_PRE: f64 = 0.00030686296521255634;
    const POST_PRE_POST: f64 = 0.0036149485590223234;
    let per_group = |v| model_dw(&triplet(v, 10.0, 10.0, 1.0, 60).unwrap(), &HIPPO) / 60.0;
    let a = per_group(TripletVariant::PrePostPre);
    let b = per_group(TripletVariant::PostPrePost);
    ensure(rel_close(a, PRE_POST_PRE, 1e-6), || {
        format!("pre-post-pre {a:e} vs {PRE_POST_PRE:e}")
    })?;
    ensure(rel_close(b, POST_PRE_POST, 1e-6), || {
        format!("post-pre-post {b:e} vs {POST_PRE_POST:e}")
    })?;
    ensure(b > a, || "no triplet effect".into())?;
    Ok(format!(
        "per group: pre-post-pre {a:.6e}, post-pre-post {b:.6e}"
    ))
}

struct Agreement {
    cir: Vec<f64>,
    model: Vec<f64>,
    worst_bound_use: f64,
}

/// Circuit vs model at frame-quantized times, one point per protocol, with
/// the per-point trace-drop bound checked along the way.
fn agreement(specs: &[ProtocolSpec]) -> Result<Agreement, String> {
    let set = ParameterSet::hippocampal();
    let cp = calibrate(&set.model, set.device.v_p, set.device.v_d, set.slot_ms)
        .map_err(|e| e.to_string())?;
    let b = trace_drop();
    let factor = 1.0 - (1.0 - b).powi(2);
    let mut out = Agreement {
        cir: vec![],
        model: vec![],
        worst_bound_use: 0.0,
    };
    for spec in specs {
        let train = spec.generate().unwrap();
        let q = quantize_train(&train, cp.frame_ms()).unwrap();
        let model = run_model(&q, &set.model, set.w0).unwrap();
        let syn = MemristiveSynapse::new(set.device, set.w0).unwrap();
        let cir = run_circuit(&train, &cp, syn).unwrap();
        ensure(cir.clamp_events == 0, || format!("{spec:?} clamps"))?;
        let bound = factor * model.events.iter().map(|e| e.delta_w.abs()).sum::<f64>();
        let dev = (cir.total_delta_w - model.total_delta_w).abs();
        ensure(dev <= bound, || {
            format!("{spec:?}: |cir - model| = {dev:e} exceeds bound {bound:e}")
        })?;
        out.worst_bound_use = out.worst_bound_use.max(dev / bound);
        out.cir.push(cir.total_delta_w);
        out.model.push(model.total_delta_w);
    }
    Ok(out)
}

fn c6_circuit_vs_model() -> Check {
    let started = Instant::now();
    let mut specs: Vec<ProtocolSpec> = signed_pair_grid()
        .into_iter()
        .map(|dt_ms| ProtocolSpec::new(Protocol::Pairing { dt_ms }, 1.0))
        .collect();
    for variant in [TripletVariant::PrePostPre, TripletVariant::PostPrePost] {
        for dt1_ms in TRIPLET_GRID {
            for dt2_ms in TRIPLET_GRID {
                specs.push(ProtocolSpec::new(
                    Protocol::Triplet {
                        variant,
                        dt1_ms,
                        dt2_ms,
                    },
                    1.0,
                ));
            }
        }
    }
    let a = agreement(&specs)?;
    let rms = relative_rms(&a.cir, &a.model).map_err(|e| e.to_string())?;
    ensure(rms <= 0.10, || format!("relative RMS {rms:e} > 0.10"))?;
    let took = within(Duration::from_secs(5), started)?;
    Ok(format!(
        "{} points: relative RMS {:.3}% (limit 10%); worst point uses {:.1}% of its trace-drop bound ({took:.0?})",
        specs.len(),
        rms * 100.0,
        a.worst_bound_use * 100.0
    ))
}

fn c7_calibration() -> Check {
    let vc = ParameterSet::visual_cortex();
    let cp = calibrate(&vc.model, vc.device.v_p, vc.device.v_d, 1.0).map_err(|e| e.to_string())?;
    ensure((vc.device.v_p * 1e-3 - 0.0685).abs() < 1e-15, || {
        "visual v_p * slot".into()
    })?;
    ensure((vc.device.v_d * 1e-3 - 0.0639).abs() < 1e-15, || {
        "visual v_d * slot".into()
    })?;
    ensure((cp.g1, cp.g2) == (0.0, 1.0), || {
        format!("visual gains [{}, {}]", cp.g1, cp.g2)
    })?;
    ensure((cp.v_j_peak - 1.37).abs() <= 1e-12, || {
        format!("visual v_j_peak {}", cp.v_j_peak)
    })?;
    // the table prints two decimals
    ensure((cp.v_i_peak - 7.99).abs() <= 0.005, || {
        format!("visual v_i_peak {}", cp.v_i_peak)
    })?;

    let hc = ParameterSet::hippocampal();
    let hp = calibrate(&hc.model, hc.device.v_p, hc.device.v_d, 1.0).map_err(|e| e.to_string())?;
    ensure((hp.g1, hp.g2) == (1.0, 2.0), || {
        format!("hippocampal gains [{}, {}]", hp.g1, hp.g2)
    })?;
    let target = 9.1 / 4.6;
    let ratio_err = (hp.g2 / hp.g1 - target).abs() / target;
    ensure(ratio_err <= GAIN_RATIO_TOLERANCE, || {
        format!("gain ratio off by {ratio_err:e}")
    })?;
    ensure((hp.v_j_peak - 12.67).abs() <= 0.005, || {
        format!("hippocampal v_j_peak {}", hp.v_j_peak)
    })?;
    ensure((hp.v_i_peak - 17.90).abs() <= 0.005, || {
        format!("hippocampal v_i_peak {}", hp.v_i_peak)
    })?;
    Ok(format!(
        "visual [0,1] {:.4} V / {:.4} V; hippocampal [1,2] {:.4} V / {:.4} V, ratio err {:.2}%",
        cp.v_j_peak,
        cp.v_i_peak,
        hp.v_j_peak,
        hp.v_i_peak,
        ratio_err * 100.0
    ))
}

fn c8_synapse_linearity() -> Check {
    let started = Instant::now();
    let device = ParameterSet::hippocampal().device;
    let width = 0.2e-3;
    let step = device.v_p * width;
    let ramp = MemristiveSynapse::new(device, device.w_min)
        .unwrap()
        .ramp_characterize(100, Polarity::Potentiate, width)
        .map_err(|e| e.to_string())?;
    let mut clamped_at = None;
    let mut worst = 0.0f64;
    for (i, &w) in ramp.iter().enumerate() {
        let k = (i + 1) as f64;
        let ideal = device.w_min + k * step;
        if ideal >= device.w_max {
            clamped_at.get_or_insert(i + 1);
            ensure(w == device.w_max, || {
                format!("pulse {}: {w} past the clamp", i + 1)
            })?;
        } else {
            // a running sum of k equal steps accumulates at most k roundings
            let dev = (w - ideal).abs();
            ensure(dev <= k * f64::EPSILON * ideal, || {
                format!("pulse {}: {w} vs {ideal}", i + 1)
            })?;
            worst = worst.max(dev);
        }
    }

    let symmetric = DeviceParams {
        v_d: device.v_p,
        ..device
    };
    let mut rng = StdRng::seed_from_u64(8);
    for _ in 0..1000 {
        let w0 = rng.random_range(0.1..0.9);
        let width = rng.random_range(0.0..1e-3);
        let back = MemristiveSynapse::new(symmetric, w0)
            .unwrap()
            .program(Polarity::Potentiate, width)
            .and_then(|s| s.program(Polarity::Depress, width))
            .map_err(|e| e.to_string())?
            .weight();
        // one rounding each way
        ensure((back - w0).abs() <= f64::EPSILON, || {
            format!("round trip {w0} -> {back}")
        })?;
    }
    let took = within(Duration::from_secs(1), started)?;
    Ok(format!(
        "step {step:.5}: arithmetic until clamp at pulse {}, max dev {worst:.1e}; 1000 round trips within 1 ulp ({took:.0?})",
        clamped_at.map_or("-".into(), |k| k.to_string())
    ))
}

fn c9_quantization() -> Check {
    let set = ParameterSet::hippocampal();
    let cp =
        calibrate(&set.model, set.device.v_p, set.device.v_d, 1.0).map_err(|e| e.to_string())?;
    let frames = frame_index(10.0, cp.frame_ms()) - frame_index(0.0, cp.frame_ms());
    let effective = frames as f64 * cp.frame_ms();
    ensure(frames == 3 && effective == 9.0, || {
        format!("10 ms -> {frames} frames = {effective} ms")
    })?;
    let spec = ProtocolSpec {
        repetitions: 1,
        ..ProtocolSpec::new(Protocol::Pairing { dt_ms: 10.0 }, 1.0)
    };
    let a = agreement(&[spec])?;
    let at_nine = model_dw(&SpikeTrain::new(vec![0.0], vec![9.0], 9.0).unwrap(), &HIPPO);
    ensure(a.model[0] == at_nine, || {
        "quantized model is not the 9 ms pair".into()
    })?;
    Ok(format!(
        "10 ms -> 3 frames = 9 ms; circuit {:.6e} vs model(9 ms) {:.6e} ({:.2}% of bound)",
        a.cir[0],
        at_nine,
        a.worst_bound_use * 100.0
    ))
}

fn c10_quadruplet() -> Check {
    let started = Instant::now();
    let mut dws = vec![];
    for t in [20.0, -20.0] {
        let train = quadruplet(t, 1.0, 60).unwrap();
        let dw = model_dw(&train, &HIPPO);
        let oracle = brute_force_dw(train.pre(), train.post(), &HIPPO);
        ensure(rel_close(dw, oracle, 1e-9), || {
            format!("T={t}: engine {dw:e} vs oracle {oracle:e}")
        })?;
        dws.push(dw);
    }
    ensure(!rel_close(dws[0], dws[1], 1e-3), || {
        format!("T=+-20 indistinguishable: {dws:?}")
    })?;
    let took = within(Duration::from_secs(1), started)?;
    Ok(format!(
        "T=+20 {:.6e}, T=-20 {:.6e}, both match the oracle ({took:.0?})",
        dws[0], dws[1]
    ))
}

fn c11_determinism_and_io() -> Check {
    let cfg = ExperimentConfig {
        quantize_model: true,
        ..ExperimentConfig::new(
            ParameterSet::hippocampal(),
            EngineSelection::Both,
            ProtocolSpec::new(Protocol::Quadruplet { t_ms: 20.0 }, 1.0),
            Sweep::Separation(vec![-60.0, -20.0, -10.0, 10.0, 20.0, 60.0]),
        )
    };
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut files = vec![];
    for i in 0..3 {
        let path = dir.path().join(format!("run{i}.csv"));
        let result = run_experiment(&cfg).map_err(|e| e.to_string())?;
        msq_stdp::harness::emit_csv(&result, &path).map_err(|e| e.to_string())?;
        files.push((path, result));
    }
    let bytes: Vec<Vec<u8>> = files
        .iter()
        .map(|(p, _)| std::fs::read(p).unwrap())
        .collect();
    ensure(bytes.windows(2).all(|w| w[0] == w[1]), || {
        "CSV differs between runs".into()
    })?;
    let (path, result) = &files[0];
    ensure(result_csv(result).unwrap().as_bytes() == bytes[0], || {
        "file differs from in-memory CSV".into()
    })?;
    let back = read_result_csv(path).map_err(|e| e.to_string())?;
    ensure(back == result.rows, || "round trip changed a field".into())?;
    Ok(format!(
        "3 runs byte-identical ({} bytes); {} rows round-trip bit-exact",
        bytes[0].len(),
        back.len()
    ))
}

fn main() -> ExitCode {
    let criteria: [(&str, Criterion); 11] = [
        ("trace exactness", c1_trace_exactness),
        ("single-pair oracle", c2_single_pair),
        ("pairwise window", c3_pairwise_window),
        ("frequency dependence", c4_frequency_dependence),
        ("triplet asymmetry", c5_triplet_asymmetry),
        ("circuit vs model agreement", c6_circuit_vs_model),
        ("calibration identities", c7_calibration),
        ("synapse linearity", c8_synapse_linearity),
        ("quantization example", c9_quantization),
        ("quadruplet asymmetry", c10_quadruplet),
        ("determinism and I/O", c11_determinism_and_io),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let outcome =
            catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why}", i + 1);
            }
        }
    }
    println!(
        "{} of {} acceptance criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
