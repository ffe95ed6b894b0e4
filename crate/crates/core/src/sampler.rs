//! O(1) discrete sampling with Vose's alias method.

use rand::Rng;

use crate::{Error, Result};

/// Alias table over outcomes `0..len`.
#[derive(Debug, Clone)]
pub struct DiscreteSampler {
    probabilities: Vec<f64>,
    threshold: Vec<f64>,
    alias: Vec<u32>,
}

impl DiscreteSampler {
    /// Builds a sampler from nonnegative, not-all-zero weights.
    pub fn new(weights: &[f64]) -> Result<Self> {
        let n = weights.len();
        if n == 0 {
            return Err(Error::InvalidWeights("empty"));
        }
        if n > u32::MAX as usize {
            return Err(Error::InvalidWeights("too many outcomes"));
        }
        if weights.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
            return Err(Error::InvalidWeights("negative or non-finite weight"));
        }
        let total: f64 = weights.iter().sum();
        if total <= 0.0 {
            return Err(Error::InvalidWeights("all weights are zero"));
        }
        let probabilities: Vec<f64> = weights.iter().map(|w| w / total).collect();

        let mut scaled: Vec<f64> = probabilities.iter().map(|p| p * n as f64).collect();
        let mut alias: Vec<u32> = (0..n as u32).collect();
        let mut small = Vec::new();
        let mut large = Vec::new();
        for (i, &s) in scaled.iter().enumerate() {
            if s < 1.0 {
                small.push(i);
            } else {
                large.push(i);
            }
        }
        while let (Some(&s), Some(&l)) = (small.last(), large.last()) {
            small.pop();
            alias[s] = l as u32;
            scaled[l] -= 1.0 - scaled[s];
            if scaled[l] < 1.0 {
                large.pop();
                small.push(l);
            }
        }
        // leftovers are 1 up to rounding; an outcome with zero weight must
        // never be reachable through its own column
        for i in large.into_iter().chain(small) {
            scaled[i] = if probabilities[i] > 0.0 { 1.0 } else { 0.0 };
            if probabilities[i] == 0.0 {
                alias[i] = probabilities
                    .iter()
                    .position(|&p| p > 0.0)
                    .expect("total > 0") as u32;
            }
        }
        Ok(Self {
            probabilities,
            threshold: scaled,
            alias,
        })
    }

    pub fn len(&self) -> usize {
        self.probabilities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probabilities.is_empty()
    }

    /// Normalized probability of `index`.
    pub fn probability(&self, index: usize) -> f64 {
        self.probabilities[index]
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let column = rng.random_range(0..self.len());
        if rng.random::<f64>() < self.threshold[column] {
            column
        } else {
            self.alias[column] as usize
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed::rng_from_seed;

    #[test]
    fn single_nonzero_weight() {
        let s = DiscreteSampler::new(&[0.0, 0.0, 3.0, 0.0]).unwrap();
        let mut rng = rng_from_seed(1);
        assert!((0..1000).all(|_| s.sample(&mut rng) == 2));
    }

    #[test]
    fn rejects_bad_weights() {
        assert!(DiscreteSampler::new(&[]).is_err());
        assert!(DiscreteSampler::new(&[0.0, 0.0]).is_err());
        assert!(DiscreteSampler::new(&[1.0, -0.1]).is_err());
        assert!(DiscreteSampler::new(&[1.0, f64::NAN]).is_err());
    }

    #[test]
    fn table_reproduces_probabilities_exactly() {
        // the mass assigned to each outcome by the table equals its probability
        let w = [0.7, 0.0, 0.2, 0.1, 1e-9, 3.0];
        let s = DiscreteSampler::new(&w).unwrap();
        let n = w.len() as f64;
        let mut mass = vec![0.0; w.len()];
        for col in 0..w.len() {
            mass[col] += s.threshold[col] / n;
            mass[s.alias[col] as usize] += (1.0 - s.threshold[col]) / n;
        }
        for (i, m) in mass.iter().enumerate() {
            assert!((m - s.probability(i)).abs() < 1e-15, "{i}: {m}");
        }
    }
}
