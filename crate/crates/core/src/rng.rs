//! Counter-based random substreams.
//!
//! Every Monte Carlo sample draws from its own ChaCha8 stream, keyed by
//! `(seed, domain, sample index)`. A sample's draws therefore never depend on
//! which worker evaluates it or in which order batches run, and two estimates
//! sharing a seed see identical draws for identical sample indices.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Separates draws used for different purposes under one master seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Domain {
    /// Exponential weights of the section-volume formulas.
    Exponential,
    /// Uniform points of the hit-or-miss oracle.
    HitOrMiss,
    /// Random parameters (dilations, test pairs) drawn by the analysis layer.
    Parameters,
}

impl Domain {
    fn tag(self) -> u64 {
        match self {
            Domain::Exponential => 0x6578_706f_6e65_6e74,
            Domain::HitOrMiss => 0x6869_746d_6973_7321,
            Domain::Parameters => 0x7061_7261_6d73_2121,
        }
    }
}

/// Factory for per-index substreams under a fixed `(seed, domain)`.
#[derive(Debug, Clone)]
pub struct StreamFamily {
    base: ChaCha8Rng,
}

impl StreamFamily {
    pub fn new(seed: u64, domain: Domain) -> Self {
        Self { base: ChaCha8Rng::seed_from_u64(seed ^ domain.tag()) }
    }

    /// The substream for `index`, positioned at its first word.
    pub fn substream(&self, index: u64) -> Substream {
        let mut rng = self.base.clone();
        rng.set_stream(index);
        rng.set_word_pos(0);
        Substream { rng }
    }
}

/// A single counter-addressed stream of random numbers.
#[derive(Debug, Clone)]
pub struct Substream {
    rng: ChaCha8Rng,
}

impl Substream {
    /// Uniform on the open interval (0, 1); exact zeros are redrawn.
    pub fn uniform_open(&mut self) -> f64 {
        loop {
            let u: f64 = self.rng.gen();
            if u > 0.0 {
                return u;
            }
        }
    }

    /// Uniform on `[-r, r)`.
    pub fn uniform_symmetric(&mut self, r: f64) -> f64 {
        r * (2.0 * self.rng.gen::<f64>() - 1.0)
    }

    /// Standard one-sided exponential by inversion, `-ln U`.
    pub fn exponential(&mut self) -> f64 {
        -self.uniform_open().ln()
    }

    /// Fills `out` with i.i.d. Exp(1) draws.
    pub fn fill_exponentials(&mut self, out: &mut [f64]) {
        for y in out {
            *y = self.exponential();
        }
    }
}

/// `n` i.i.d. standard exponential draws from `stream`.
pub fn sample_exponentials(stream: &mut Substream, n: usize) -> Vec<f64> {
    let mut ys = vec![0.0; n];
    stream.fill_exponentials(&mut ys);
    ys
}
