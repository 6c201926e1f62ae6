//! The weighted average against the power semicircle law.

use rwa_core::distributions::PowerSemicircleParams;
use rwa_core::ks;
use rwa_core::moments::{moment_report, MonteCarlo};
use rwa_core::rng::stream;
use rwa_core::rwa::{rwa_batch, rwa_sample, RwaSpec};
use rwa_core::Rational;

const ALPHA: f64 = 0.01;

fn mean_and_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

#[test]
fn second_moment_bands() {
    for (n, exact) in [(2, 1.0 / 3.0), (3, 0.25)] {
        let spec = RwaSpec::new(n, 1.0).unwrap();
        let mut rng = stream(100 + n as u64, 0);
        let sq: Vec<f64> = (0..1_000_000)
            .map(|_| rwa_sample(&spec, &mut rng).powi(2))
            .collect();
        let (m, se) = mean_and_se(&sq);
        assert!((m - exact).abs() <= 4.0 * se, "n={n}: {m} vs {exact}");
    }
}

#[test]
fn batch_support_and_mean() {
    let spec = RwaSpec::new(4, 1.7).unwrap();
    let batch = rwa_batch(&spec, 1_000_000, 21).unwrap();
    assert_eq!(batch.values.len(), 1_000_000);
    assert!(batch.values.iter().all(|v| v.abs() <= 1.7));

    let spec5 = RwaSpec::new(5, 1.0).unwrap();
    let batch5 = rwa_batch(&spec5, 1_000_000, 22).unwrap();
    let (m, se) = mean_and_se(&batch5.values);
    assert!(m.abs() <= 4.0 * se, "mean={m}");
}

#[test]
fn symmetric_law() {
    let spec = RwaSpec::new(3, 1.0).unwrap();
    let batch = rwa_batch(&spec, 100_000, 23).unwrap();
    let res = ks::two_sample_test(&batch.values, &batch.negated(), ALPHA);
    assert!(res.pass, "{res:?}");
}

#[test]
fn law_matches_power_semicircle() {
    for (i, n) in [2u32, 3, 4, 5, 8].into_iter().enumerate() {
        let spec = RwaSpec::new(n, 1.0).unwrap();
        let batch = rwa_batch(&spec, 100_000, 300 + i as u64).unwrap();
        let law = PowerSemicircleParams::for_rwa(n, 1.0).unwrap();
        let res = ks::one_sample_test(&batch.values, |x| law.cdf(x), ALPHA);
        assert!(res.pass, "n={n}: {res:?}");
    }
}

#[test]
fn agrees_with_reference_sampler() {
    for (i, n) in [3u32, 6].into_iter().enumerate() {
        let spec = RwaSpec::new(n, 2.0).unwrap();
        let batch = rwa_batch(&spec, 100_000, 400 + i as u64).unwrap();
        let law = PowerSemicircleParams::for_rwa(n, 2.0).unwrap();
        let mut rng = stream(500 + i as u64, 0);
        let reference: Vec<f64> = (0..100_000).map(|_| law.sample(&mut rng)).collect();
        let res = ks::two_sample_test(&batch.values, &reference, ALPHA);
        assert!(res.pass, "n={n}: {res:?}");
    }
}

#[test]
fn scale_equivariance() {
    for n in [2, 5, 7] {
        let unit = rwa_batch(&RwaSpec::new(n, 1.0).unwrap(), 10_000, 55).unwrap();
        for a in [0.5, 3.0] {
            let scaled = rwa_batch(&RwaSpec::new(n, a).unwrap(), 10_000, 55).unwrap();
            for (s, u) in scaled.values.iter().zip(&unit.values) {
                let expect = a * u;
                assert!((s - expect).abs() <= 1e-12 * expect.abs().max(f64::MIN_POSITIVE));
            }
        }
    }
}

#[test]
fn report_with_monte_carlo() {
    let spec = RwaSpec::new(4, 1.0).unwrap();
    let r = moment_report(
        &spec,
        2,
        Some(MonteCarlo {
            count: 1_000_000,
            seed: 77,
        }),
    )
    .unwrap();
    assert_eq!(r.oracle, Rational::new(3.into(), 35.into()));
    assert!(r.agrees());
    assert_eq!(r.within_band(4.0), Some(true), "{r:?}");
}
