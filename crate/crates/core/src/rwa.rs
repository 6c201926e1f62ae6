//! The randomly weighted average `S_n = R_1 X_1 + ⋯ + R_n X_n` with
//! uniform-spacings weights and i.i.d. Arcsine(a) summands.
//!
//! One draw consumes the generator in a fixed order: the weights first
//! (`n - 1` uniforms for order statistics, `n` exponentials for the other
//! method), then `X_1, …, X_n` (one uniform each). Batches are therefore
//! bit-reproducible from `(spec, count, seed, shards)`.

use std::io::{self, Write};

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::distributions::{fill_spacings, unit_arcsine, SpacingsMethod};
use crate::error::{Error, Result};
use crate::rng::{shard_sizes, stream};

/// One instance of the construction: `n ≥ 2` summands on `(-a, a)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RwaSpec {
    pub n: u32,
    pub a: f64,
}

impl RwaSpec {
    pub fn new(n: u32, a: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::Parameter(format!("n must be at least 2, got {n}")));
        }
        if !(a.is_finite() && a > 0.0) {
            return Err(Error::Parameter(format!(
                "a must be positive and finite, got {a}"
            )));
        }
        Ok(RwaSpec { n, a })
    }

    /// λ = (n - 1) / 2 of the limiting power semicircle law.
    pub fn lambda(&self) -> f64 {
        (self.n as f64 - 1.0) / 2.0
    }
}

/// `Σ R_i X_i`, evaluated as `X_n + Σ_{i<n} R_i (X_i - X_n)`.
///
/// The two agree on the simplex; the second returns a constant input
/// unchanged, bit for bit.
pub fn convex_combination(weights: &[f64], xs: &[f64]) -> f64 {
    assert_eq!(weights.len(), xs.len());
    let Some((&anchor, rest)) = xs.split_last() else {
        return 0.0;
    };
    anchor
        + weights
            .iter()
            .zip(rest)
            .map(|(w, x)| w * (x - anchor))
            .sum::<f64>()
}

/// Reusable per-thread buffers for repeated draws.
struct Scratch {
    weights: Vec<f64>,
    xs: Vec<f64>,
}

impl Scratch {
    fn new(n: u32) -> Self {
        Scratch {
            weights: vec![0.0; n as usize],
            xs: vec![0.0; n as usize],
        }
    }

    fn draw<R: Rng + ?Sized>(
        &mut self,
        spec: &RwaSpec,
        method: SpacingsMethod,
        rng: &mut R,
    ) -> f64 {
        fill_spacings(method, rng, &mut self.weights);
        for x in &mut self.xs {
            *x = unit_arcsine(rng);
        }
        // X_i = a·cos(πU_i); the scale factors out of the convex combination.
        spec.a * convex_combination(&self.weights, &self.xs).clamp(-1.0, 1.0)
    }
}

/// One draw of `S_n`.
pub fn rwa_sample<R: Rng + ?Sized>(spec: &RwaSpec, rng: &mut R) -> f64 {
    rwa_sample_with(spec, SpacingsMethod::default(), rng)
}

pub fn rwa_sample_with<R: Rng + ?Sized>(
    spec: &RwaSpec,
    method: SpacingsMethod,
    rng: &mut R,
) -> f64 {
    Scratch::new(spec.n).draw(spec, method, rng)
}

/// One draw with the summands fixed to `xs` and only the weights random.
///
/// Test hook for the convex-combination identity.
pub fn rwa_sample_fixed_summands<R: Rng + ?Sized>(xs: &[f64], rng: &mut R) -> Result<f64> {
    let n = u32::try_from(xs.len()).map_err(|_| Error::Parameter("too many summands".into()))?;
    crate::distributions::check_spacings_n(n)?;
    let mut w = vec![0.0; xs.len()];
    fill_spacings(SpacingsMethod::default(), rng, &mut w);
    Ok(convex_combination(&w, xs))
}

/// A reproducible batch of `S_n` draws.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleBatch {
    pub values: Vec<f64>,
    pub spec: RwaSpec,
    pub seed: u64,
    pub count: usize,
    pub shards: usize,
}

/// `count` draws from the single stream of `seed`.
pub fn rwa_batch(spec: &RwaSpec, count: usize, seed: u64) -> Result<SampleBatch> {
    rwa_batch_sharded(spec, count, seed, 1)
}

/// `count` draws split over `shards` independent streams.
///
/// Shard `i` uses stream `seed + i` and draws the `i`-th chunk of
/// [`shard_sizes`]; chunks are concatenated in shard order, so the output
/// depends on `(seed, shards)` but not on the number of worker threads.
pub fn rwa_batch_sharded(
    spec: &RwaSpec,
    count: usize,
    seed: u64,
    shards: usize,
) -> Result<SampleBatch> {
    if count == 0 {
        return Err(Error::Parameter("sample count must be at least 1".into()));
    }
    if shards == 0 {
        return Err(Error::Parameter("shard count must be at least 1".into()));
    }
    let spec = RwaSpec::new(spec.n, spec.a)?;
    let chunks: Vec<Vec<f64>> = shard_sizes(count, shards)
        .into_par_iter()
        .enumerate()
        .map(|(i, size)| {
            let mut rng = stream(seed, i as u64);
            let mut scratch = Scratch::new(spec.n);
            (0..size)
                .map(|_| scratch.draw(&spec, SpacingsMethod::default(), &mut rng))
                .collect()
        })
        .collect();
    Ok(SampleBatch {
        values: chunks.concat(),
        spec,
        seed,
        count,
        shards,
    })
}

/// SHA-256 over the little-endian bytes of each value, hex encoded.
pub fn values_digest(values: &[f64]) -> String {
    let mut h = Sha256::new();
    for v in values {
        h.update(v.to_le_bytes());
    }
    hex::encode(h.finalize())
}

/// Provenance record written next to a batch's CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatchEnvelope {
    pub spec: RwaSpec,
    pub seed: u64,
    pub count: usize,
    pub shards: usize,
    pub values_digest: String,
}

impl SampleBatch {
    pub fn envelope(&self) -> BatchEnvelope {
        BatchEnvelope {
            spec: self.spec,
            seed: self.seed,
            count: self.count,
            shards: self.shards,
            values_digest: values_digest(&self.values),
        }
    }

    /// Header `value`, one value per LF-terminated line.
    pub fn write_csv<W: Write>(&self, out: W) -> io::Result<()> {
        write_value_csv(&self.values, out)
    }

    pub fn negated(&self) -> Vec<f64> {
        self.values.iter().map(|v| -v).collect()
    }
}

pub fn write_value_csv<W: Write>(values: &[f64], mut out: W) -> io::Result<()> {
    out.write_all(b"value\n")?;
    for v in values {
        writeln!(out, "{v}")?;
    }
    out.flush()
}
