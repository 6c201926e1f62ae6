//! Subcommands of the `rwa` binary.
//!
//! Exit codes: 0 when every check passes, 1 when checks ran and failed (or
//! on I/O errors), 2 for usage errors.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use rwa_core::distributions::{
    spacings_sample_with, ArcsineParams, PowerSemicircleParams, SpacingsMethod,
};
use rwa_core::exact::{to_decimal_string, Rational, DECIMAL_DIGITS};
use rwa_core::ks::{self, KsResult};
use rwa_core::moments::{
    lemma_check, oracle_term_count, rwa_moment_closed, rwa_moment_oracle, DirichletParams,
    MomentOrder, MomentReport,
};
use rwa_core::rng::stream;
use rwa_core::rwa::{rwa_batch_sharded, write_value_csv, RwaSpec};
use rwa_core::HalfInteger;
use serde::Serialize;

pub mod args;

/// Oracle sums above this many compositions print a warning.
pub const TERM_WARNING_THRESHOLD: u64 = 10_000_000;

/// Moment rows pass when the empirical value is within this many standard
/// errors of the exact one.
pub const MOMENT_BANDS: f64 = 4.0;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("I/O error: {0}")]
    Io(#[from] io::Error),
    #[error(transparent)]
    Core(#[from] rwa_core::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Core(rwa_core::Error::Parameter(_))
            | CliError::Core(rwa_core::Error::ParseHalfInteger(_)) => 2,
            CliError::Io(_) | CliError::Core(_) => 1,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// Outcome of a subcommand: whether all of its checks passed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
}

impl Status {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Status::Pass => 0,
            Status::Fail => 1,
        }
    }
}

/// Caps the global worker pool at `RWA_THREADS` when that variable is set.
pub fn configure_threads() -> CliResult<()> {
    let Ok(raw) = std::env::var("RWA_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw.trim().parse().ok().filter(|&t| t > 0).ok_or_else(|| {
        CliError::Usage(format!(
            "RWA_THREADS must be a positive integer, got {raw:?}"
        ))
    })?;
    // Fails only if a pool already exists, in which case it is kept.
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global();
    Ok(())
}

/// Opens `path` for writing, or stdout when `None`.
fn open_output(path: Option<&Path>) -> CliResult<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn write_json<T: Serialize>(value: &T, out: Option<&Path>) -> CliResult<()> {
    let mut w = open_output(out)?;
    serde_json::to_writer_pretty(&mut w, value).map_err(io::Error::from)?;
    w.write_all(b"\n")?;
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Table,
    Json,
}

// ---------------------------------------------------------------- moment

#[derive(Debug, Clone, PartialEq)]
pub struct MomentRow {
    pub k: u32,
    pub closed_form: Rational,
    pub oracle: Rational,
}

impl MomentRow {
    pub fn equal(&self) -> bool {
        self.closed_form == self.oracle
    }
}

/// Closed form and composition-sum oracle for `k = 0..=k_max`.
pub fn moment_rows(n: u32, k_max: u32) -> CliResult<Vec<MomentRow>> {
    if n < 2 {
        return Err(CliError::Usage(format!("--n must be at least 2, got {n}")));
    }
    for k in 0..=k_max {
        let terms = oracle_term_count(n, 2 * k);
        if terms > TERM_WARNING_THRESHOLD.into() {
            eprintln!("warning: oracle at n = {n}, k = {k} enumerates {terms} compositions");
        }
    }
    Ok((0..=k_max)
        .map(|k| MomentRow {
            k,
            closed_form: rwa_moment_closed(n, k),
            oracle: rwa_moment_oracle(n, 2 * k),
        })
        .collect())
}

pub fn cmd_moment(
    n: u32,
    k_max: u32,
    a: f64,
    format: Format,
    out: &mut dyn Write,
) -> CliResult<Status> {
    let spec = RwaSpec::new(n, a).map_err(|e| CliError::Usage(e.to_string()))?;
    let rows = moment_rows(n, k_max)?;
    let all_equal = rows.iter().all(MomentRow::equal);
    match format {
        Format::Table => {
            writeln!(out, "k\tclosed_form\toracle\tdecimal\tequal")?;
            for row in &rows {
                let scaled = scale_rational(&row.closed_form, a, 2 * row.k);
                writeln!(
                    out,
                    "{}\t{}\t{}\t{}\t{}",
                    row.k,
                    row.closed_form,
                    row.oracle,
                    scaled,
                    if row.equal() { "yes" } else { "NO" }
                )?;
            }
        }
        Format::Json => {
            let reports: Vec<MomentReport> = rows
                .iter()
                .map(|row| MomentReport {
                    spec,
                    order: MomentOrder::even(row.k),
                    closed_form: row.closed_form.clone(),
                    oracle: row.oracle.clone(),
                    empirical: None,
                    std_error: None,
                })
                .collect();
            #[derive(Serialize)]
            struct Doc<'a> {
                spec: RwaSpec,
                k_max: u32,
                rows: &'a [MomentReport],
                all_equal: bool,
            }
            serde_json::to_writer_pretty(
                &mut *out,
                &Doc {
                    spec,
                    k_max,
                    rows: &reports,
                    all_equal,
                },
            )
            .map_err(io::Error::from)?;
            writeln!(out)?;
        }
    }
    Ok(Status::from_bool(all_equal))
}

/// Decimal rendering of `x · a^power`; exact when `a` is an integer or a
/// finite binary fraction, which every `f64` is.
fn scale_rational(x: &Rational, a: f64, power: u32) -> String {
    let a = Rational::from_float(a).expect("finite");
    let scaled = x * num_traits::pow(a, power as usize);
    to_decimal_string(&scaled, DECIMAL_DIGITS)
}

// ----------------------------------------------------------- lemma-check

pub fn cmd_lemma_check(
    params: &[HalfInteger],
    r_max: u32,
    format: Format,
    out: &mut dyn Write,
) -> CliResult<Status> {
    let d = DirichletParams::new(params.to_vec()).map_err(|e| CliError::Usage(e.to_string()))?;
    let rows = lemma_check(&d, r_max);
    let all_equal = rows.iter().all(|r| r.holds());
    match format {
        Format::Table => {
            writeln!(out, "r\tlhs\trhs\tequal")?;
            for row in &rows {
                writeln!(
                    out,
                    "{}\t{}\t{}\t{}",
                    row.r,
                    row.lhs,
                    row.rhs,
                    if row.holds() { "yes" } else { "NO" }
                )?;
            }
        }
        Format::Json => {
            #[derive(Serialize)]
            struct Row {
                r: u32,
                lhs: rwa_core::exact::ExactValue,
                rhs: rwa_core::exact::ExactValue,
                equal: bool,
            }
            #[derive(Serialize)]
            struct Doc {
                params: Vec<String>,
                r_max: u32,
                rows: Vec<Row>,
                all_equal: bool,
            }
            let doc = Doc {
                params: params.iter().map(|p| p.to_string()).collect(),
                r_max,
                rows: rows
                    .iter()
                    .map(|row| Row {
                        r: row.r,
                        lhs: (&row.lhs).into(),
                        rhs: (&row.rhs).into(),
                        equal: row.holds(),
                    })
                    .collect(),
                all_equal,
            };
            serde_json::to_writer_pretty(&mut *out, &doc).map_err(io::Error::from)?;
            writeln!(out)?;
        }
    }
    Ok(Status::from_bool(all_equal))
}

// ---------------------------------------------------------------- sample

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SampleSource {
    Arcsine { a: f64 },
    PowerSemicircle { lambda: f64, a: f64 },
    Rwa { n: u32, a: f64 },
    Spacings { n: u32, method: SpacingsMethod },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SampleJob {
    pub source: SampleSource,
    pub count: usize,
    pub seed: u64,
    pub shards: usize,
    pub out: Option<PathBuf>,
    /// Provenance JSON for `rwa` batches.
    pub envelope: Option<PathBuf>,
}

/// Draws `count` values from the stream of `seed` and writes them as CSV.
pub fn cmd_sample(job: &SampleJob) -> CliResult<Status> {
    if job.count == 0 {
        return Err(CliError::Usage("--count must be at least 1".into()));
    }
    let mut out = open_output(job.out.as_deref())?;
    match job.source {
        SampleSource::Arcsine { a } => {
            let p = ArcsineParams::new(a).map_err(|e| CliError::Usage(e.to_string()))?;
            let mut rng = stream(job.seed, 0);
            let values: Vec<f64> = (0..job.count).map(|_| p.sample(&mut rng)).collect();
            write_value_csv(&values, &mut out)?;
        }
        SampleSource::PowerSemicircle { lambda, a } => {
            let p = PowerSemicircleParams::new(lambda, a)
                .map_err(|e| CliError::Usage(e.to_string()))?;
            let mut rng = stream(job.seed, 0);
            let values: Vec<f64> = (0..job.count).map(|_| p.sample(&mut rng)).collect();
            write_value_csv(&values, &mut out)?;
        }
        SampleSource::Rwa { n, a } => {
            let spec = RwaSpec::new(n, a).map_err(|e| CliError::Usage(e.to_string()))?;
            let batch = rwa_batch_sharded(&spec, job.count, job.seed, job.shards)?;
            batch.write_csv(&mut out)?;
            if let Some(path) = &job.envelope {
                write_json(&batch.envelope(), Some(path))?;
            }
        }
        SampleSource::Spacings { n, method } => {
            if n < 2 {
                return Err(CliError::Usage(format!("--n must be at least 2, got {n}")));
            }
            let mut rng = stream(job.seed, 0);
            let header: Vec<String> = (1..=n).map(|i| format!("r{i}")).collect();
            writeln!(out, "{}", header.join(","))?;
            for _ in 0..job.count {
                let w = spacings_sample_with(n, method, &mut rng)?;
                let row: Vec<String> = w.as_slice().iter().map(|x| x.to_string()).collect();
                writeln!(out, "{}", row.join(","))?;
            }
        }
    }
    out.flush()?;
    Ok(Status::Pass)
}

// ---------------------------------------------------------------- verify

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyConfig {
    pub spec: RwaSpec,
    pub sample_count: usize,
    pub seed: u64,
    pub shards: usize,
    pub max_moment_k: u32,
    pub alpha: f64,
    /// Test-only: compare against PowerSemicircle(λ) with this λ instead of
    /// (n - 1) / 2.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda_override: Option<f64>,
}

impl VerifyConfig {
    pub fn validate(&self) -> CliResult<()> {
        RwaSpec::new(self.spec.n, self.spec.a).map_err(|e| CliError::Usage(e.to_string()))?;
        if self.sample_count < 100 {
            return Err(CliError::Usage(format!(
                "sample count must be at least 100, got {}",
                self.sample_count
            )));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(CliError::Usage(format!(
                "alpha must lie in (0, 1), got {}",
                self.alpha
            )));
        }
        if self.shards == 0 {
            return Err(CliError::Usage("--shards must be at least 1".into()));
        }
        if let Some(l) = self.lambda_override {
            if !(l.is_finite() && l >= 0.0) {
                return Err(CliError::Usage(format!(
                    "lambda override must be >= 0, got {l}"
                )));
            }
        }
        Ok(())
    }

    pub fn null_lambda(&self) -> f64 {
        self.lambda_override.unwrap_or_else(|| self.spec.lambda())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyMomentRow {
    #[serde(flatten)]
    pub report: MomentReport,
    pub within_band: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyOutcome {
    pub config: VerifyConfig,
    pub null_lambda: f64,
    pub ks_statistic: f64,
    pub ks_critical: f64,
    pub ks_pass: bool,
    pub moment_bands: f64,
    pub moment_rows: Vec<VerifyMomentRow>,
    pub overall_pass: bool,
}

/// Samples `S_n`, tests it against the power semicircle CDF and checks even
/// moments of order `2, 4, …, 2·max_moment_k` against the exact values.
pub fn run_verify(cfg: &VerifyConfig) -> CliResult<VerifyOutcome> {
    cfg.validate()?;
    let spec = cfg.spec;
    let batch = rwa_batch_sharded(&spec, cfg.sample_count, cfg.seed, cfg.shards)?;
    let null = PowerSemicircleParams::new(cfg.null_lambda(), spec.a)?;
    let KsResult {
        statistic,
        critical,
        pass: ks_pass,
    } = ks::one_sample_test(&batch.values, |x| null.cdf(x), cfg.alpha);

    let moment_rows: Vec<VerifyMomentRow> = (1..=cfg.max_moment_k)
        .map(|k| {
            let report = MomentReport {
                spec,
                order: MomentOrder::even(k),
                closed_form: rwa_moment_closed(spec.n, k),
                oracle: rwa_moment_oracle(spec.n, 2 * k),
                empirical: None,
                std_error: None,
            }
            .with_empirical(&batch.values);
            let within_band = report.agrees() && report.within_band(MOMENT_BANDS) == Some(true);
            VerifyMomentRow {
                report,
                within_band,
            }
        })
        .collect();

    let overall_pass = ks_pass && moment_rows.iter().all(|r| r.within_band);
    Ok(VerifyOutcome {
        config: cfg.clone(),
        null_lambda: cfg.null_lambda(),
        ks_statistic: statistic,
        ks_critical: critical,
        ks_pass,
        moment_bands: MOMENT_BANDS,
        moment_rows,
        overall_pass,
    })
}

pub fn cmd_verify(cfg: &VerifyConfig, out: Option<&Path>) -> CliResult<(Status, VerifyOutcome)> {
    let outcome = run_verify(cfg)?;
    eprintln!(
        "KS D = {:.6} (critical {:.6}) {}",
        outcome.ks_statistic,
        outcome.ks_critical,
        if outcome.ks_pass { "pass" } else { "FAIL" }
    );
    for row in &outcome.moment_rows {
        eprintln!(
            "E(S^{}) exact {:.10} empirical {:.10} se {:.2e} {}",
            row.report.order.r,
            row.report.exact_at_scale(),
            row.report.empirical.unwrap_or(f64::NAN),
            row.report.std_error.unwrap_or(f64::NAN),
            if row.within_band { "pass" } else { "FAIL" }
        );
    }
    write_json(&outcome, out)?;
    Ok((Status::from_bool(outcome.overall_pass), outcome))
}

// ------------------------------------------------------------- plot-data

#[derive(Debug, Clone, PartialEq)]
pub struct HistogramRow {
    pub bin_center: f64,
    pub empirical_density: f64,
    pub theoretical_density: f64,
}

/// `⌈2 N^{1/3}⌉`.
pub fn rice_bins(count: usize) -> usize {
    (2.0 * (count as f64).cbrt()).ceil() as usize
}

/// Equal-width density histogram of `values` over `[-a, a]` next to the
/// power semicircle density at each bin centre.
pub fn histogram(values: &[f64], spec: &RwaSpec, bins: usize) -> CliResult<Vec<HistogramRow>> {
    if bins < 10 {
        return Err(CliError::Usage(format!(
            "--bins must be at least 10, got {bins}"
        )));
    }
    let a = spec.a;
    let width = 2.0 * a / bins as f64;
    let mut counts = vec![0usize; bins];
    for &v in values {
        let idx = (((v + a) / width).floor().max(0.0) as usize).min(bins - 1);
        counts[idx] += 1;
    }
    let law = PowerSemicircleParams::for_rwa(spec.n, a)?;
    let n = values.len() as f64;
    counts
        .iter()
        .enumerate()
        .map(|(i, &c)| {
            let center = -a + (i as f64 + 0.5) * width;
            Ok(HistogramRow {
                bin_center: center,
                empirical_density: c as f64 / (n * width),
                theoretical_density: law.pdf(center)?,
            })
        })
        .collect()
}

pub fn cmd_plot_data(
    spec: &RwaSpec,
    bins: Option<usize>,
    count: usize,
    seed: u64,
    shards: usize,
    out: Option<&Path>,
) -> CliResult<Status> {
    let spec = RwaSpec::new(spec.n, spec.a).map_err(|e| CliError::Usage(e.to_string()))?;
    if count == 0 {
        return Err(CliError::Usage("--count must be at least 1".into()));
    }
    let bins = bins.unwrap_or_else(|| rice_bins(count));
    if bins < 10 {
        return Err(CliError::Usage(format!(
            "--bins must be at least 10, got {bins}"
        )));
    }
    let batch = rwa_batch_sharded(&spec, count, seed, shards)?;
    let rows = histogram(&batch.values, &spec, bins)?;
    let mut w = open_output(out)?;
    writeln!(w, "bin_center,empirical_density,theoretical_density")?;
    for r in &rows {
        writeln!(
            w,
            "{},{},{}",
            r.bin_center, r.empirical_density, r.theoretical_density
        )?;
    }
    w.flush()?;
    Ok(Status::Pass)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rice_rule() {
        assert_eq!(rice_bins(1000), 20);
        assert_eq!(rice_bins(100_000), 93);
    }

    #[test]
    fn histogram_normalizes() {
        let spec = RwaSpec::new(3, 1.0).unwrap();
        let values = [-1.0, -0.5, 0.0, 0.25, 0.999, 1.0];
        let rows = histogram(&values, &spec, 10).unwrap();
        let width = 0.2;
        let mass: f64 = rows.iter().map(|r| r.empirical_density * width).sum();
        assert!((mass - 1.0).abs() < 1e-12);
        assert!(histogram(&values, &spec, 9).is_err());
    }

    #[test]
    fn verify_config_validation() {
        let mut cfg = VerifyConfig {
            spec: RwaSpec { n: 3, a: 1.0 },
            sample_count: 100,
            seed: 1,
            shards: 1,
            max_moment_k: 1,
            alpha: 0.01,
            lambda_override: None,
        };
        assert!(cfg.validate().is_ok());
        cfg.sample_count = 99;
        assert_eq!(cfg.validate().unwrap_err().exit_code(), 2);
        cfg.sample_count = 100;
        cfg.alpha = 1.0;
        assert!(cfg.validate().is_err());
        cfg.alpha = 0.05;
        cfg.spec.n = 1;
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn scaled_decimal() {
        let x = Rational::new(1.into(), 4.into());
        assert_eq!(scale_rational(&x, 2.0, 2), format!("1.{}", "0".repeat(29)));
    }
}
