//! Seeded two-Gaussian score generator, written in the scores layout.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{CliError, Result};
use crate::format::fmt_f64;

/// Positives score `N(mu_pos, sigma_pos)`, negatives `N(mu_neg, sigma_neg)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoGaussian {
    pub mu_pos: f64,
    pub sigma_pos: f64,
    pub mu_neg: f64,
    pub sigma_neg: f64,
}

impl TwoGaussian {
    pub fn new(mu_pos: f64, sigma_pos: f64, mu_neg: f64, sigma_neg: f64) -> Result<Self> {
        for (name, s) in [("sigma_pos", sigma_pos), ("sigma_neg", sigma_neg)] {
            if s <= 0.0 || !s.is_finite() {
                return Err(CliError::Config(format!("{name} must be positive, got {s}")));
            }
        }
        if !(mu_pos.is_finite() && mu_neg.is_finite()) {
            return Err(CliError::Config("means must be finite".into()));
        }
        Ok(Self {
            mu_pos,
            sigma_pos,
            mu_neg,
            sigma_neg,
        })
    }

    /// `n_pos` positive then `n_neg` negative scores.
    pub fn sample(&self, n_pos: usize, n_neg: usize, seed: u64) -> Result<(Vec<f64>, Vec<bool>)> {
        if n_pos == 0 || n_neg == 0 {
            return Err(CliError::Config("need at least one example per class".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pos = Normal::new(self.mu_pos, self.sigma_pos).expect("validated");
        let neg = Normal::new(self.mu_neg, self.sigma_neg).expect("validated");
        let mut scores = Vec::with_capacity(n_pos + n_neg);
        let mut labels = Vec::with_capacity(n_pos + n_neg);
        for _ in 0..n_pos {
            scores.push(pos.sample(&mut rng));
            labels.push(true);
        }
        for _ in 0..n_neg {
            scores.push(neg.sample(&mut rng));
            labels.push(false);
        }
        Ok((scores, labels))
    }
}

/// Scores-layout CSV text.
pub fn scores_csv(scores: &[f64], labels: &[bool]) -> String {
    let mut out = String::from("id,score,label\n");
    for (i, (s, l)) in scores.iter().zip(labels).enumerate() {
        out.push_str(&format!("{i},{},{}\n", fmt_f64(*s), u8::from(*l)));
    }
    out
}
