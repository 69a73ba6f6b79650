use crate::error::{Error, Result};

fn check_lengths(cir: &[f64], model: &[f64]) -> Result<()> {
    if cir.len() != model.len() {
        return Err(Error::invalid(format!(
            "series lengths differ: {} circuit values vs {} model values",
            cir.len(),
            model.len()
        )));
    }
    if cir.is_empty() {
        return Err(Error::invalid("metrics need at least one data point"));
    }
    Ok(())
}

/// Normalized mean square error `(1/P) * sum(((cir - model) / sigma)^2)`.
pub fn nmse(cir: &[f64], model: &[f64], sigma: &[f64]) -> Result<f64> {
    check_lengths(cir, model)?;
    if sigma.len() != cir.len() {
        return Err(Error::invalid(format!(
            "expected {} standard errors, got {}",
            cir.len(),
            sigma.len()
        )));
    }
    if let Some(s) = sigma.iter().find(|s| !(s.is_finite() && **s > 0.0)) {
        return Err(Error::invalid(format!(
            "standard errors must be > 0, got {s}"
        )));
    }
    let sum: f64 = cir
        .iter()
        .zip(model)
        .zip(sigma)
        .map(|((c, m), s)| ((c - m) / s).powi(2))
        .sum();
    Ok(sum / cir.len() as f64)
}

/// `sqrt(sum((cir - model)^2) / sum(model^2))`.
pub fn relative_rms(cir: &[f64], model: &[f64]) -> Result<f64> {
    check_lengths(cir, model)?;
    let reference: f64 = model.iter().map(|m| m * m).sum();
    if reference == 0.0 {
        return Err(Error::DegenerateMetric(
            "reference series is identically zero".into(),
        ));
    }
    let err: f64 = cir.iter().zip(model).map(|(c, m)| (c - m).powi(2)).sum();
    Ok((err / reference).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn nmse_examples() {
        assert_eq!(nmse(&[0.3, -0.2], &[0.3, -0.2], &[1.0, 5.0]).unwrap(), 0.0);
        assert!((nmse(&[0.1], &[0.0], &[1.0]).unwrap() - 0.01).abs() < 1e-15);
        assert_eq!(nmse(&[1.0, 2.0], &[0.0, 0.0], &[1.0, 2.0]).unwrap(), 1.0);
    }

    #[test]
    fn nmse_errors() {
        assert!(nmse(&[1.0], &[1.0, 2.0], &[1.0]).is_err());
        assert!(nmse(&[1.0], &[1.0], &[0.0]).is_err());
        assert!(nmse(&[1.0], &[1.0], &[-1.0]).is_err());
        assert!(nmse(&[1.0, 2.0], &[1.0, 2.0], &[1.0]).is_err());
        assert!(nmse(&[], &[], &[]).is_err());
    }

    #[test]
    fn relative_rms_examples() {
        assert_eq!(relative_rms(&[1.0, 2.0], &[1.0, 2.0]).unwrap(), 0.0);
        let model = [0.5, -1.0, 2.0];
        let cir: Vec<f64> = model.iter().map(|m| 1.1 * m).collect();
        assert!((relative_rms(&cir, &model).unwrap() - 0.1).abs() < 1e-12);
        assert!((relative_rms(&[1.0, 0.0], &[1.0, 1.0]).unwrap() - 0.5f64.sqrt()).abs() < 1e-15);
        assert!(matches!(
            relative_rms(&[1.0], &[0.0]),
            Err(Error::DegenerateMetric(_))
        ));
    }

    proptest! {
        #[test]
        fn nmse_zero_on_identity(xs in proptest::collection::vec(-1.0f64..1.0, 1..20), s in 0.01f64..2.0) {
            let sigma = vec![s; xs.len()];
            prop_assert_eq!(nmse(&xs, &xs, &sigma).unwrap(), 0.0);
        }

        #[test]
        fn nmse_permutation_invariant(
            rows in proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0, 0.01f64..2.0), 1..20),
            seed in any::<u64>(),
        ) {
            let mut shuffled = rows.clone();
            // deterministic Fisher-Yates driven by the seed
            let mut state = seed | 1;
            for i in (1..shuffled.len()).rev() {
                state ^= state << 13;
                state ^= state >> 7;
                state ^= state << 17;
                shuffled.swap(i, (state % (i as u64 + 1)) as usize);
            }
            let split = |r: &[(f64, f64, f64)]| -> (Vec<f64>, Vec<f64>, Vec<f64>) {
                (r.iter().map(|x| x.0).collect(), r.iter().map(|x| x.1).collect(), r.iter().map(|x| x.2).collect())
            };
            let (c, m, s) = split(&rows);
            let (c2, m2, s2) = split(&shuffled);
            let a = nmse(&c, &m, &s).unwrap();
            let b = nmse(&c2, &m2, &s2).unwrap();
            prop_assert!((a - b).abs() <= 1e-12 * a.abs().max(1e-300));
        }

        #[test]
        fn relative_rms_uniform_scaling(xs in proptest::collection::vec(0.01f64..1.0, 1..20), k in 0.0f64..3.0) {
            let scaled: Vec<f64> = xs.iter().map(|x| k * x).collect();
            prop_assert!((relative_rms(&scaled, &xs).unwrap() - (k - 1.0).abs()).abs() < 1e-12);
        }
    }
}
