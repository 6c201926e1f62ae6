//! Kolmogorov–Smirnov goodness-of-fit statistics with asymptotic critical
//! values.

/// Asymptotic coefficient `c(α)` such that `P(√N · D > c(α)) ≈ α`.
///
/// Tabulated values are used for the usual levels (`c(0.01) = 1.628`);
/// other levels fall back to `√(-ln(α/2) / 2)`.
pub fn critical_coefficient(alpha: f64) -> f64 {
    const TABLE: [(f64, f64); 5] = [
        (0.20, 1.073),
        (0.10, 1.224),
        (0.05, 1.358),
        (0.01, 1.628),
        (0.001, 1.949),
    ];
    TABLE
        .iter()
        .find(|(level, _)| (level - alpha).abs() < 1e-15)
        .map(|&(_, c)| c)
        .unwrap_or_else(|| (-(alpha / 2.0).ln() / 2.0).sqrt())
}

/// One-sample critical value `c(α) / √N`.
pub fn one_sample_critical(alpha: f64, n: usize) -> f64 {
    critical_coefficient(alpha) / (n as f64).sqrt()
}

/// Two-sample critical value `c(α) √((n + m) / (n m))`.
pub fn two_sample_critical(alpha: f64, n: usize, m: usize) -> f64 {
    let (n, m) = (n as f64, m as f64);
    critical_coefficient(alpha) * ((n + m) / (n * m)).sqrt()
}

/// `sup_x |F_N(x) - F(x)|` for the empirical CDF of `sample`.
///
/// NaNs sort last and will dominate the statistic.
pub fn one_sample_statistic<F: Fn(f64) -> f64>(sample: &[f64], cdf: F) -> f64 {
    let mut sorted = sample.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    sorted
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).max((i + 1) as f64 / n - f)
        })
        .fold(0.0, f64::max)
}

/// `sup_x |F_N(x) - G_M(x)|` between two empirical CDFs.
pub fn two_sample_statistic(xs: &[f64], ys: &[f64]) -> f64 {
    let mut a = xs.to_vec();
    let mut b = ys.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (n, m) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0usize, 0usize);
    let mut d: f64 = 0.0;
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / n - j as f64 / m).abs());
    }
    d
}

/// Outcome of a KS test at a fixed level.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct KsResult {
    pub statistic: f64,
    pub critical: f64,
    pub pass: bool,
}

pub fn one_sample_test<F: Fn(f64) -> f64>(sample: &[f64], cdf: F, alpha: f64) -> KsResult {
    let statistic = one_sample_statistic(sample, cdf);
    let critical = one_sample_critical(alpha, sample.len());
    KsResult {
        statistic,
        critical,
        pass: statistic < critical,
    }
}

pub fn two_sample_test(xs: &[f64], ys: &[f64], alpha: f64) -> KsResult {
    let statistic = two_sample_statistic(xs, ys);
    let critical = two_sample_critical(alpha, xs.len(), ys.len());
    KsResult {
        statistic,
        critical,
        pass: statistic < critical,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coefficient_table_and_formula() {
        assert_eq!(critical_coefficient(0.01), 1.628);
        assert!((critical_coefficient(0.02) - 1.5174).abs() < 1e-3);
        assert!((one_sample_critical(0.01, 10_000) - 0.01628).abs() < 1e-12);
    }

    #[test]
    fn one_sample_hand_computed() {
        // uniform CDF, sample {0.1, 0.5, 0.6}: max(0.1, 1/3-... ) etc.
        let d = one_sample_statistic(&[0.6, 0.1, 0.5], |x| x);
        // gaps: i=0: max(0.1-0, 1/3-0.1)=0.2333; i=1: max(0.5-1/3, 2/3-0.5)=0.1667;
        // i=2: max(0.6-2/3, 1-0.6)=0.4
        assert!((d - 0.4).abs() < 1e-15);
    }

    #[test]
    fn two_sample_hand_computed() {
        assert_eq!(two_sample_statistic(&[1.0, 2.0], &[1.0, 2.0]), 0.0);
        assert_eq!(two_sample_statistic(&[1.0, 2.0], &[3.0, 4.0]), 1.0);
        let d = two_sample_statistic(&[1.0, 2.0, 3.0, 4.0], &[2.5]);
        assert!((d - 0.5).abs() < 1e-15);
    }

    #[test]
    fn two_sample_ties() {
        let d = two_sample_statistic(&[0.0, 0.0, 1.0], &[0.0, 1.0, 1.0]);
        assert!((d - 1.0 / 3.0).abs() < 1e-15);
    }
}
