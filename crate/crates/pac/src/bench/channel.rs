//! BPSK over additive white Gaussian noise.
//!
//! Bit 0 maps to `+1.0`, bit 1 to `-1.0`; symbols have unit energy. With
//! code rate `R`, `σ² = 1 / (2 R 10^(Eb/N0 / 10))`.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Channel LLRs are clipped to this magnitude (natural-log units).
pub const LLR_CAP: f64 = 300.0;

/// Noise variance for unit-energy BPSK at the given Eb/N0 and code rate.
pub fn noise_variance(ebn0_db: f64, code_rate: f64) -> f64 {
    1.0 / (2.0 * code_rate * 10f64.powf(ebn0_db / 10.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelParams {
    pub ebn0_db: f64,
    pub code_rate: f64,
    pub sigma: f64,
}

impl ChannelParams {
    pub fn new(ebn0_db: f64, code_rate: f64) -> Result<Self> {
        if !(code_rate > 0.0 && code_rate <= 1.0) {
            return Err(Error::InvalidRate(code_rate));
        }
        if !ebn0_db.is_finite() {
            return Err(Error::InvalidConfig(format!("Eb/N0 must be finite, got {ebn0_db}")));
        }
        Ok(Self {
            ebn0_db,
            code_rate,
            sigma: noise_variance(ebn0_db, code_rate).sqrt(),
        })
    }

    /// Same rate and nominal SNR, but with the noise level forced to `sigma`.
    pub fn with_sigma(mut self, sigma: f64) -> Result<Self> {
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(Error::NonPositiveVariance(sigma * sigma));
        }
        self.sigma = sigma;
        Ok(self)
    }

    pub fn variance(&self) -> f64 {
        self.sigma * self.sigma
    }
}

pub fn modulate(x: &[u8]) -> Vec<f64> {
    x.iter().map(|&b| if b == 0 { 1.0 } else { -1.0 }).collect()
}

pub fn awgn<R: Rng + ?Sized>(symbols: &[f64], sigma: f64, rng: &mut R) -> Vec<f64> {
    symbols
        .iter()
        .map(|&s| {
            let n: f64 = rng.sample(StandardNormal);
            s + sigma * n
        })
        .collect()
}

/// `ln(P(bit = 0 | y) / P(bit = 1 | y)) = 2y/σ²`, clipped to [`LLR_CAP`].
#[inline]
pub fn channel_llr(y: f64, sigma: f64) -> f64 {
    (2.0 * y / (sigma * sigma)).clamp(-LLR_CAP, LLR_CAP)
}

pub fn channel_llrs(y: &[f64], sigma: f64) -> Vec<f64> {
    y.iter().map(|&v| channel_llr(v, sigma)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn bpsk_mapping() {
        assert_eq!(modulate(&[0, 0, 0]), vec![1.0, 1.0, 1.0]);
        assert_eq!(modulate(&[1, 1]), vec![-1.0, -1.0]);
        let hard: Vec<u8> = modulate(&[0, 1, 1, 0])
            .iter()
            .map(|&s| u8::from(channel_llr(s, 1e-6) < 0.0))
            .collect();
        assert_eq!(hard, vec![0, 1, 1, 0]);
    }

    #[test]
    fn llr_is_zero_at_origin_and_capped() {
        assert_eq!(channel_llr(0.0, 0.7), 0.0);
        assert_eq!(channel_llr(1.0, 1e-9), LLR_CAP);
        assert_eq!(channel_llr(-1.0, 1e-9), -LLR_CAP);
    }

    #[test]
    fn variance_convention() {
        // R = 1/2, 0 dB: sigma^2 = 1.
        assert!((noise_variance(0.0, 0.5) - 1.0).abs() < 1e-15);
        let p = ChannelParams::new(3.0, 0.5).unwrap();
        assert!((p.variance() - 1.0 / 10f64.powf(0.3)).abs() < 1e-12);
        assert!(ChannelParams::new(1.0, 0.0).is_err());
        assert!(ChannelParams::new(1.0, 1.5).is_err());
    }

    #[test]
    fn llr_mean_matches_ga_root() {
        let sigma = noise_variance(1.0, 0.5).sqrt();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let n = 100_000;
        let y = awgn(&vec![1.0; n], sigma, &mut rng);
        let mean = channel_llrs(&y, sigma).iter().sum::<f64>() / n as f64;
        let expected = 2.0 / (sigma * sigma);
        // standard error of the mean is 2/sigma/sqrt(n)
        let se = 2.0 / sigma / (n as f64).sqrt();
        assert!((mean - expected).abs() < 5.0 * se, "{mean} vs {expected}");
    }
}
