//! Reference implementations shared by the integration tests.
#![allow(dead_code)]

use msq_stdp::TripletParams;

/// Latest time in `times` strictly before `t`.
fn last_before(times: &[f64], t: f64) -> Option<f64> {
    times
        .iter()
        .copied()
        .filter(|&s| s < t)
        .fold(None, |m, s| Some(m.map_or(s, |m: f64| m.max(s))))
}

fn trace(times: &[f64], tau: f64, t: f64) -> f64 {
    last_before(times, t).map_or(0.0, |s| (-(t - s) / tau).exp())
}

/// Nearest-spike triplet rule evaluated directly from the spike lists: every
/// distinct pre time contributes `-A2- * y1`, every distinct post time
/// `A2+ * x + A3+ * x * y2`, each trace taken from the latest earlier spike.
pub fn brute_force_dw(pre: &[f64], post: &[f64], p: &TripletParams) -> f64 {
    let mut pre_times = pre.to_vec();
    pre_times.dedup();
    let mut post_times = post.to_vec();
    post_times.dedup();
    let ltd: f64 = pre_times
        .iter()
        .map(|&t| -p.a2_minus * trace(post, p.tau_i1, t))
        .sum();
    let ltp: f64 = post_times
        .iter()
        .map(|&t| {
            let x = trace(pre, p.tau_j, t);
            p.a2_plus * x + p.a3_plus * x * trace(post, p.tau_i2, t)
        })
        .sum();
    ltd + ltp
}

pub fn rel_close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs())
}
