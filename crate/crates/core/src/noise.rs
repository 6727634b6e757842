//! Reproducible increments of a Wiener process truncated to `K` modes.
//!
//! Each increment is addressed by `(master_seed, path_index, k, n)`: the
//! ChaCha stream is keyed by the seed, the stream id is the path index and
//! the word position encodes `(k, n)`. Any increment can be regenerated on
//! its own, so paths are independent of evaluation order and thread count.

use std::io::Write;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::grid::TimeGrid;

/// ChaCha words reserved per increment (one block).
const WORDS_PER_DRAW: u128 = 16;

#[derive(Debug, Clone, PartialEq)]
pub struct NoisePath {
    modes: usize,
    n_steps: usize,
    dt: f64,
    master_seed: u64,
    path_index: u64,
    /// Step-major: `increments[n * modes + k]`.
    increments: Vec<f64>,
}

impl NoisePath {
    pub fn sample(master_seed: u64, path_index: u64, modes: usize, time: &TimeGrid) -> Self {
        let n_steps = time.n_steps();
        let dt = time.dt();
        let mut rng = stream(master_seed, path_index);
        let mut increments = Vec::with_capacity(modes * n_steps);
        for n in 0..n_steps {
            for k in 0..modes {
                increments.push(draw(&mut rng, k, n, dt));
            }
        }
        Self {
            modes,
            n_steps,
            dt,
            master_seed,
            path_index,
            increments,
        }
    }

    /// A path without modes, for deterministic runs.
    pub fn empty(time: &TimeGrid) -> Self {
        Self::sample(0, 0, 0, time)
    }

    /// Regenerates a single increment without building the path.
    pub fn increment_at(master_seed: u64, path_index: u64, k: usize, n: usize, dt: f64) -> f64 {
        draw(&mut stream(master_seed, path_index), k, n, dt)
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn n_steps(&self) -> usize {
        self.n_steps
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    pub fn path_index(&self) -> u64 {
        self.path_index
    }

    pub fn is_empty(&self) -> bool {
        self.increments.is_empty()
    }

    pub fn increment(&self, k: usize, n: usize) -> f64 {
        self.increments[n * self.modes + k]
    }

    /// Increments of all modes over step `n`.
    pub fn step(&self, n: usize) -> &[f64] {
        &self.increments[n * self.modes..(n + 1) * self.modes]
    }

    /// CSV with header `k,n,increment`, rows ordered by mode then step.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "k,n,increment")?;
        for k in 0..self.modes {
            for n in 0..self.n_steps {
                writeln!(out, "{k},{n},{}", self.increment(k, n))?;
            }
        }
        Ok(())
    }
}

fn stream(master_seed: u64, path_index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(path_index);
    rng
}

fn draw(rng: &mut ChaCha8Rng, k: usize, n: usize, dt: f64) -> f64 {
    let counter = ((k as u128) << 32) | n as u128;
    rng.set_word_pos(counter * WORDS_PER_DRAW);
    let z: f64 = StandardNormal.sample(rng);
    z * dt.sqrt()
}
