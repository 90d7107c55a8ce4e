//! Order statistics and percentile bootstrap.
//!
//! Quantiles use linear interpolation between order statistics at position
//! `p·(m − 1)` of the sorted sample.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::{GmeError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SummaryStats {
    pub median: f64,
    pub q1: f64,
    pub q3: f64,
    pub iqr: f64,
    pub bootstrap_ci: Option<(f64, f64)>,
}

fn sorted(values: &[f64]) -> Result<Vec<f64>> {
    if values.is_empty() {
        return Err(GmeError::EmptyInput);
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    Ok(v)
}

fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    let pos = p * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

/// Linearly interpolated quantile `p ∈ [0, 1]`.
pub fn quantile(values: &[f64], p: f64) -> Result<f64> {
    Ok(quantile_sorted(&sorted(values)?, p.clamp(0.0, 1.0)))
}

pub fn median(values: &[f64]) -> Result<f64> {
    quantile(values, 0.5)
}

pub fn mean(values: &[f64]) -> Result<f64> {
    if values.is_empty() {
        return Err(GmeError::EmptyInput);
    }
    Ok(values.iter().sum::<f64>() / values.len() as f64)
}

/// Median and quartiles.
pub fn summarize(values: &[f64]) -> Result<SummaryStats> {
    let v = sorted(values)?;
    let q1 = quantile_sorted(&v, 0.25);
    let q3 = quantile_sorted(&v, 0.75);
    Ok(SummaryStats {
        median: quantile_sorted(&v, 0.5),
        q1,
        q3,
        iqr: q3 - q1,
        bootstrap_ci: None,
    })
}

/// Percentile bootstrap interval of `statistic` at `confidence`.
pub fn bootstrap<F, R>(
    values: &[f64],
    statistic: F,
    resamples: usize,
    confidence: f64,
    rng: &mut R,
) -> Result<(f64, f64)>
where
    F: Fn(&[f64]) -> f64,
    R: Rng + ?Sized,
{
    if values.is_empty() {
        return Err(GmeError::EmptyInput);
    }
    if resamples == 0 {
        return Err(GmeError::OutOfRange {
            what: "resamples",
            value: 0.0,
            range: "≥ 1",
        });
    }
    if !(confidence > 0.0 && confidence < 1.0) {
        return Err(GmeError::OutOfRange {
            what: "confidence",
            value: confidence,
            range: "(0, 1)",
        });
    }
    let m = values.len();
    let mut scratch = vec![0.0; m];
    let mut stats: Vec<f64> = (0..resamples)
        .map(|_| {
            for slot in scratch.iter_mut() {
                *slot = values[rng.random_range(0..m)];
            }
            statistic(&scratch)
        })
        .collect();
    stats.sort_by(f64::total_cmp);
    let tail = 0.5 * (1.0 - confidence);
    Ok((
        quantile_sorted(&stats, tail),
        quantile_sorted(&stats, 1.0 - tail),
    ))
}

/// [`summarize`] plus a bootstrap interval for the median.
pub fn summarize_with_bootstrap<R: Rng + ?Sized>(
    values: &[f64],
    resamples: usize,
    confidence: f64,
    rng: &mut R,
) -> Result<SummaryStats> {
    let mut s = summarize(values)?;
    s.bootstrap_ci = Some(bootstrap(
        values,
        |v| median(v).expect("non-empty resample"),
        resamples,
        confidence,
        rng,
    )?);
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn summary_examples() {
        let s = summarize(&[1.0, 2.0, 3.0, 4.0]).unwrap();
        assert_eq!((s.median, s.q1, s.q3, s.iqr), (2.5, 1.75, 3.25, 1.5));
        let s = summarize(&[5.0]).unwrap();
        assert_eq!((s.median, s.iqr), (5.0, 0.0));
        assert_eq!(summarize(&[3.0, 1.0, 2.0]).unwrap().median, 2.0);
        assert!(matches!(summarize(&[]), Err(GmeError::EmptyInput)));
    }

    #[test]
    fn bootstrap_of_constant_is_degenerate() {
        let v = vec![0.5; 100];
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let ci = bootstrap(&v, |x| median(x).unwrap(), 1000, 0.95, &mut rng).unwrap();
        assert_eq!(ci, (0.5, 0.5));
        assert!(bootstrap(&[], |x| x[0], 10, 0.95, &mut rng).is_err());
    }

    #[test]
    fn bootstrap_is_seeded() {
        let v: Vec<f64> = (0..50).map(|i| (i as f64).sin()).collect();
        let run = |seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            bootstrap(&v, |x| mean(x).unwrap(), 500, 0.9, &mut rng).unwrap()
        };
        assert_eq!(run(3), run(3));
    }

    #[test]
    fn bootstrap_mean_coverage() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let covered = (0..100)
            .filter(|_| {
                let sample: Vec<f64> = (0..10_000).map(|_| rng.random::<f64>()).collect();
                let (lo, hi) = bootstrap(&sample, |x| mean(x).unwrap(), 1000, 0.95, &mut rng).unwrap();
                lo <= 0.5 && 0.5 <= hi
            })
            .count();
        assert!(covered >= 90, "covered {covered}/100");
    }

    #[test]
    fn bootstrap_narrows_with_sample_size() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut width = |m: usize| {
            let sample: Vec<f64> = (0..m).map(|_| rng.random::<f64>()).collect();
            let (lo, hi) = bootstrap(&sample, |x| mean(x).unwrap(), 1000, 0.95, &mut rng).unwrap();
            hi - lo
        };
        let small = width(100);
        let large = width(10_000);
        assert!(large < small, "{large} vs {small}");
    }

    proptest! {
        #[test]
        fn summary_is_permutation_invariant(
            mut values in proptest::collection::vec(-1e6f64..1e6, 1..60),
            seed in any::<u64>(),
        ) {
            let before = summarize(&values).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            use rand::seq::SliceRandom;
            values.shuffle(&mut rng);
            let after = summarize(&values).unwrap();
            prop_assert_eq!(before, after);
            prop_assert!(after.q1 <= after.median && after.median <= after.q3);
            prop_assert!(after.iqr >= 0.0);
        }
    }
}
