//! Exact sampling of simplex-uniform, ℓ1-norm symmetric and Archimedean
//! copula observations, reproducible by construction.
//!
//! Randomness comes from counter-based ChaCha substreams: one named stream
//! per role (radial part, each simplex coordinate), each consuming exactly
//! one 64-bit word per draw. Chunks of a stream can be generated on any
//! number of threads by seeking the word counter, so output is identical
//! regardless of parallelism.

use std::io::Write;

use serde::Serialize;

use crate::error::Result;
use crate::gen::Generator;
use crate::radial::{radial_from_generator, RadialDistribution};

pub(crate) mod streams {
    use rand_chacha::rand_core::{RngCore, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    pub const RADIAL_STREAM: u64 = 0;
    pub const MIXTURE_STREAM: u64 = 1000;
    pub const COORD_STREAM_BASE: u64 = 1;

    /// Stream `stream` of the generator seeded by `seed`, positioned at draw
    /// index `skip` (one `next_u64` per draw).
    pub fn substream_at(seed: u64, stream: u64, skip: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        rng.set_word_pos(skip as u128 * 2);
        rng
    }

    /// Uniform draw on [0, 1) consuming exactly one 64-bit word.
    pub fn uniform(rng: &mut ChaCha8Rng) -> f64 {
        (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    fn thread_budget() -> usize {
        let available = std::thread::available_parallelism()
            .map(|n| n.get())
            .unwrap_or(1);
        match std::env::var("ARCHIMAX_THREADS") {
            Ok(v) => v.parse::<usize>().map(|n| n.clamp(1, 64)).unwrap_or(1).min(available.max(1)),
            Err(_) => available.clamp(1, 16),
        }
    }

    /// Fill `n` values of `f(u)` over the stream's uniforms, chunked across
    /// threads along the draw counter.
    pub fn fill_stream<F>(seed: u64, stream: u64, n: usize, f: F) -> Vec<f64>
    where
        F: Fn(f64) -> f64 + Send + Sync,
    {
        let threads = if n < (1 << 15) { 1 } else { thread_budget() };
        let mut out = vec![0.0f64; n];
        if threads <= 1 {
            let mut rng = substream_at(seed, stream, 0);
            for slot in out.iter_mut() {
                *slot = f(uniform(&mut rng));
            }
            return out;
        }
        let chunk = n.div_ceil(threads);
        let f = &f;
        std::thread::scope(|scope| {
            for (c, slice) in out.chunks_mut(chunk).enumerate() {
                let start = (c * chunk) as u64;
                scope.spawn(move || {
                    let mut rng = substream_at(seed, stream, start);
                    for slot in slice.iter_mut() {
                        *slot = f(uniform(&mut rng));
                    }
                });
            }
        });
        out
    }
}

/// Which space a sample matrix lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SampleSpace {
    Simplex,
    L1ns,
    Copula,
}

/// An n×d matrix of observations with seed provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleMatrix {
    data: Vec<f64>,
    pub n: usize,
    pub d: usize,
    pub space: SampleSpace,
    pub seed: u64,
    pub provenance: String,
}

impl SampleMatrix {
    pub(crate) fn from_raw(
        data: Vec<f64>,
        n: usize,
        d: usize,
        space: SampleSpace,
        seed: u64,
        provenance: String,
    ) -> Self {
        assert_eq!(data.len(), n * d);
        SampleMatrix {
            data,
            n,
            d,
            space,
            seed,
            provenance,
        }
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.d..(i + 1) * self.d]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.n).map(|i| self.data[i * self.d + j]).collect()
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    /// CSV with header `u1,…,ud` (copula) or `x1,…,xd` (otherwise), full
    /// double precision, LF line endings.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        let prefix = match self.space {
            SampleSpace::Copula => "u",
            _ => "x",
        };
        let header: Vec<String> = (1..=self.d).map(|j| format!("{prefix}{j}")).collect();
        w.write_all(header.join(",").as_bytes())?;
        w.write_all(b"\n")?;
        let mut line = String::with_capacity(self.d * 26);
        for i in 0..self.n {
            line.clear();
            for (j, v) in self.row(i).iter().enumerate() {
                if j > 0 {
                    line.push(',');
                }
                line.push_str(&format!("{v:.16e}"));
            }
            line.push('\n');
            w.write_all(line.as_bytes())?;
        }
        Ok(())
    }
}

/// Uniform samples on the unit simplex: each row is `E/‖E‖₁` for i.i.d.
/// standard exponentials, i.e. Dirichlet(1,…,1).
pub fn sample_simplex(d: usize, n: usize, seed: u64) -> SampleMatrix {
    assert!(d >= 2 && n >= 1);
    let columns: Vec<Vec<f64>> = (0..d)
        .map(|j| {
            streams::fill_stream(seed, streams::COORD_STREAM_BASE + j as u64, n, |u| {
                -(-u).ln_1p()
            })
        })
        .collect();
    let mut data = vec![0.0f64; n * d];
    for i in 0..n {
        let mut total = 0.0;
        for col in &columns {
            total += col[i];
        }
        if total == 0.0 {
            // All-zero exponentials have probability ~2^-53d; fall back to
            // the barycenter rather than dividing by zero.
            for j in 0..d {
                data[i * d + j] = 1.0 / d as f64;
            }
            continue;
        }
        for (j, col) in columns.iter().enumerate() {
            data[i * d + j] = col[i] / total;
        }
    }
    SampleMatrix {
        data,
        n,
        d,
        space: SampleSpace::Simplex,
        seed,
        provenance: format!("simplex d={d}"),
    }
}

/// ℓ1-norm symmetric samples `R·S` with `R` drawn from `radial` and `S`
/// simplex-uniform, independent.
pub fn sample_l1ns(radial: &RadialDistribution, d: usize, n: usize, seed: u64) -> SampleMatrix {
    let mut m = sample_simplex(d, n, seed);
    let r = radial.sample(n, seed);
    for i in 0..n {
        for j in 0..d {
            m.data[i * d + j] *= r[i];
        }
    }
    m.space = SampleSpace::L1ns;
    m.provenance = format!("l1ns[{}] d={d}", radial.tag());
    m
}

/// Copula observations: draw `X` ℓ1-norm symmetric with the radial law
/// recovered from the generator, then map `U_i = ψ(X_i)`.
pub fn sample_copula(gen: &Generator, d: usize, n: usize, seed: u64) -> Result<SampleMatrix> {
    let radial = radial_from_generator(gen, d)?;
    let mut m = sample_l1ns(&radial, d, n, seed);
    for v in m.data.iter_mut() {
        *v = gen.eval(*v);
    }
    m.space = SampleSpace::Copula;
    m.provenance = format!("copula[{}] d={d}", gen.label());
    Ok(m)
}
