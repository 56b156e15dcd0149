//! Bit-channel reliabilities under the Gaussian approximation.
//!
//! Each bit-channel LLR is modelled as a consistent Gaussian `N(m, 2m)`, so
//! only its mean is tracked through the polarization butterflies:
//!
//! * bad child: `m⁻ = φ⁻¹(1 − (1 − φ(m))²)`
//! * good child: `m⁺ = 2m`
//!
//! starting from `2/σ²` for unit-energy BPSK. From the means we derive the
//! Bhattacharyya parameter `Z = exp(−m/4)` and the cutoff rate
//! `E0 = 1 − log2(1 + Z)`.

use serde::{Deserialize, Serialize};

use crate::bench::channel::noise_variance;
use crate::{Error, Result};

/// Crossover between the exponential and asymptotic pieces of `φ`.
pub const PHI_CROSSOVER: f64 = 10.0;

/// LLR means are clamped here; beyond it `Z` is exactly 0.
pub const MAX_LLR_MEAN: f64 = 1e5;

const PHI_ALPHA: f64 = -0.4527;
const PHI_BETA: f64 = 0.86;
const PHI_GAMMA: f64 = 0.0218;
const PHI_INV_RTOL: f64 = 1e-9;

/// `ln φ(x)` for the two-piece approximation of
/// `φ(x) = 1 − E[tanh(L/2)]`, `L ~ N(x, 2x)`.
fn ln_phi(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else if x < PHI_CROSSOVER {
        PHI_ALPHA * x.powf(PHI_BETA) + PHI_GAMMA
    } else {
        0.5 * (std::f64::consts::PI / x).ln() - x / 4.0 + (1.0 - 10.0 / (7.0 * x)).ln()
    }
}

/// `φ(x)`, clamped to `(0, 1]`.
pub fn phi(x: f64) -> f64 {
    ln_phi(x).exp().clamp(f64::MIN_POSITIVE, 1.0)
}

/// Inverse of [`phi`] given `ln y`, by bisection on `ln φ`.
fn phi_inv_ln(ln_y: f64) -> f64 {
    if ln_y >= 0.0 {
        return 0.0;
    }
    let mut lo = 0.0;
    let mut hi = 1.0;
    while ln_phi(hi) > ln_y {
        hi *= 2.0;
        if hi >= MAX_LLR_MEAN {
            return MAX_LLR_MEAN;
        }
    }
    while hi - lo > PHI_INV_RTOL * hi {
        let mid = 0.5 * (lo + hi);
        if ln_phi(mid) > ln_y {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

pub fn phi_inv(y: f64) -> f64 {
    phi_inv_ln(y.ln())
}

/// Mean of the degraded ("check") child of a bit-channel with LLR mean `m`.
pub fn bad_child_mean(m: f64) -> f64 {
    if m <= 0.0 {
        return 0.0;
    }
    // 1 − (1 − φ)² = φ(2 − φ), kept in log form so tiny φ survives.
    let p = ln_phi(m);
    let target = p + (2.0 - p.exp()).ln();
    phi_inv_ln(target).min(m)
}

pub fn good_child_mean(m: f64) -> f64 {
    (2.0 * m).min(MAX_LLR_MEAN)
}

/// Bit-channel LLR means for a length-`n` polar transform.
///
/// Index `i` is the bit-channel seen by `u_i` when decoding in natural order:
/// the most significant bit of `i` selects the butterfly nearest the channel,
/// the least significant bit the one nearest `u`.
pub fn ga_llr_means(n: usize, noise_variance: f64) -> Result<Vec<f64>> {
    if !n.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(n));
    }
    if !(noise_variance > 0.0) {
        return Err(Error::NonPositiveVariance(noise_variance));
    }
    let mut means = vec![(2.0 / noise_variance).min(MAX_LLR_MEAN)];
    while means.len() < n {
        means = means
            .iter()
            .flat_map(|&m| [bad_child_mean(m), good_child_mean(m)])
            .collect();
    }
    Ok(means)
}

/// `Z = exp(−m/4)`, the BI-AWGN Bhattacharyya parameter for LLR mean `m`.
pub fn bhattacharyya_from_mean(llr_mean: f64) -> Result<f64> {
    if llr_mean.is_nan() || llr_mean < 0.0 {
        return Err(Error::NegativeMean(llr_mean));
    }
    if llr_mean >= MAX_LLR_MEAN {
        return Ok(0.0);
    }
    Ok((-llr_mean / 4.0).exp())
}

/// `E0(1, W) = 1 − log2(1 + Z)`.
pub fn cutoff_rate(z: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&z) {
        return Err(Error::InvalidBhattacharyya(z));
    }
    Ok(1.0 - z.ln_1p() / std::f64::consts::LN_2)
}

/// One-bit quantizer: 1 if `x ≥ delta`.
pub fn quantize(x: f64, delta: f64) -> Result<u8> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidQuantizationLevel(delta));
    }
    Ok(u8::from(x >= delta))
}

/// Per-bit-channel reliability quantities at one operating point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReliabilityTable {
    pub n_bits: usize,
    pub ebn0_db: f64,
    pub code_rate: f64,
    pub llr_means: Vec<f64>,
    pub bhattacharyya: Vec<f64>,
    pub cutoff_rates: Vec<f64>,
}

impl ReliabilityTable {
    pub fn compute(n: usize, ebn0_db: f64, code_rate: f64) -> Result<Self> {
        if !(code_rate > 0.0 && code_rate <= 1.0) {
            return Err(Error::InvalidRate(code_rate));
        }
        let llr_means = ga_llr_means(n, noise_variance(ebn0_db, code_rate))?;
        let bhattacharyya = llr_means
            .iter()
            .map(|&m| bhattacharyya_from_mean(m))
            .collect::<Result<Vec<_>>>()?;
        let cutoff_rates = bhattacharyya
            .iter()
            .map(|&z| cutoff_rate(z))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            n_bits: n,
            ebn0_db,
            code_rate,
            llr_means,
            bhattacharyya,
            cutoff_rates,
        })
    }

    /// `1 − E0_i = log2(1 + Z_i)` without cancellation for reliable channels.
    pub fn cutoff_complements(&self) -> Vec<f64> {
        self.bhattacharyya
            .iter()
            .map(|z| z.ln_1p() / std::f64::consts::LN_2)
            .collect()
    }

    /// Number of bit-channels with `q(E0_i, delta) = 1`.
    pub fn quantized_count(&self, delta: f64) -> Result<usize> {
        let mut count = 0;
        for &e in &self.cutoff_rates {
            count += usize::from(quantize(e, delta)?);
        }
        Ok(count)
    }

    /// Checks the length and range invariants, e.g. after deserializing.
    pub fn validate(&self) -> Result<()> {
        if !self.n_bits.is_power_of_two() {
            return Err(Error::NotPowerOfTwo(self.n_bits));
        }
        for len in [
            self.llr_means.len(),
            self.bhattacharyya.len(),
            self.cutoff_rates.len(),
        ] {
            if len != self.n_bits {
                return Err(Error::LengthMismatch {
                    expected: self.n_bits,
                    actual: len,
                });
            }
        }
        if let Some(&m) = self.llr_means.iter().find(|m| !(**m >= 0.0)) {
            return Err(Error::NegativeMean(m));
        }
        for (&z, &e) in self.bhattacharyya.iter().zip(&self.cutoff_rates) {
            let expected = cutoff_rate(z)?;
            if !((e - expected).abs() <= 1e-9) {
                return Err(Error::InvalidConfig(format!(
                    "cutoff rate {e} inconsistent with Z = {z}"
                )));
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let table: Self = serde_json::from_str(s)?;
        table.validate()?;
        Ok(table)
    }
}
