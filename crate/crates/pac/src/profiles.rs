//! Rate profiles: which carrier-word positions hold message bits.
//!
//! A profile is stored as a boolean mask `α` over `0..N`. The hex form packs
//! `α_0` into the most significant bit of the first digit, four positions per
//! digit, uppercase.

use serde::{Deserialize, Serialize};

use crate::polarization::ReliabilityTable;
use crate::{Error, Result};

/// Monte-Carlo constructed profiles (δ = 0.5, `g = 3211`) used as reference
/// points: `(N, K, construction Eb/N0 in dB, hex)`.
pub const REFERENCE_PROFILES: [(usize, usize, f64, &str); 5] = [
    (256, 128, 1.5, "00000000000001170001013F037F7FFF0001017F077F7FFF177F7FFF7FFFFFFF"),
    (256, 128, 2.5, "000000010001011F0001013F077FFFFF0001037F177F7FFF011F1FFF7FFFFFFF"),
    (256, 128, 3.0, "000000010001013F0001037F077FFFFF0001077F177F7FFF013F1FFF177F7FFF"),
    (64, 32, 3.0, "0001017F017F7FFF"),
    (64, 32, 5.0, "0007077F031F17FF"),
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RateProfile {
    mask: Vec<bool>,
    info: Vec<usize>,
}

impl RateProfile {
    pub fn from_mask(mask: Vec<bool>) -> Result<Self> {
        if !mask.len().is_power_of_two() {
            return Err(Error::NotPowerOfTwo(mask.len()));
        }
        let info: Vec<usize> = mask
            .iter()
            .enumerate()
            .filter_map(|(i, &b)| b.then_some(i))
            .collect();
        if info.is_empty() {
            return Err(Error::EmptyProfile);
        }
        Ok(Self { mask, info })
    }

    pub fn from_indices(n: usize, indices: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut mask = vec![false; n];
        for i in indices {
            *mask
                .get_mut(i)
                .ok_or(Error::IndexOutOfRange { index: i, n })? = true;
        }
        Self::from_mask(mask)
    }

    pub fn n(&self) -> usize {
        self.mask.len()
    }

    pub fn k(&self) -> usize {
        self.info.len()
    }

    pub fn rate(&self) -> f64 {
        self.k() as f64 / self.n() as f64
    }

    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    /// Information positions in increasing order.
    pub fn info_indices(&self) -> &[usize] {
        &self.info
    }

    #[inline]
    pub fn is_info(&self, i: usize) -> bool {
        self.mask[i]
    }

    /// Copy of this profile with position `i` frozen.
    pub fn without(&self, i: usize) -> Result<Self> {
        if i >= self.n() {
            return Err(Error::IndexOutOfRange { index: i, n: self.n() });
        }
        let mut mask = self.mask.clone();
        mask[i] = false;
        Self::from_mask(mask)
    }

    pub fn is_subset_of(&self, other: &RateProfile) -> bool {
        self.n() == other.n() && self.info.iter().all(|&i| other.mask[i])
    }

    pub fn to_hex(&self) -> Result<String> {
        if self.n() % 4 != 0 {
            return Err(Error::InvalidHex(format!(
                "N = {} is not a multiple of 4",
                self.n()
            )));
        }
        Ok(self
            .mask
            .chunks_exact(4)
            .map(|c| {
                let v = c.iter().fold(0u32, |acc, &b| (acc << 1) | u32::from(b));
                char::from_digit(v, 16).expect("nibble").to_ascii_uppercase()
            })
            .collect())
    }

    /// Parses exactly `n / 4` uppercase hex digits.
    pub fn from_hex(s: &str, n: usize) -> Result<Self> {
        if n % 4 != 0 || s.len() != n / 4 {
            return Err(Error::InvalidHex(format!(
                "expected {} digits for N = {n}, got {}",
                n / 4,
                s.len()
            )));
        }
        let mut mask = Vec::with_capacity(n);
        for ch in s.chars() {
            let v = match ch {
                '0'..='9' | 'A'..='F' => ch.to_digit(16).expect("hex digit"),
                other => return Err(Error::InvalidHex(format!("bad character {other:?}"))),
            };
            mask.extend((0..4).rev().map(|b| (v >> b) & 1 == 1));
        }
        Self::from_mask(mask)
    }

    /// Reads the single-line profile file format; `N` is four times the
    /// number of digits.
    pub fn from_hex_file_contents(contents: &str) -> Result<Self> {
        let line = contents
            .strip_suffix('\n')
            .map(|l| l.strip_suffix('\r').unwrap_or(l))
            .unwrap_or(contents);
        Self::from_hex(line, 4 * line.len())
    }

    /// Single line, newline-terminated.
    pub fn to_hex_file_contents(&self) -> Result<String> {
        Ok(format!("{}\n", self.to_hex()?))
    }

    pub fn to_json(&self) -> Result<String> {
        let doc = ProfileDocument {
            n: self.n(),
            k: self.k(),
            hex: self.to_hex()?,
        };
        Ok(serde_json::to_string(&doc)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let doc: ProfileDocument = serde_json::from_str(s)?;
        let p = Self::from_hex(&doc.hex, doc.n)?;
        if p.k() != doc.k {
            return Err(Error::LengthMismatch {
                expected: doc.k,
                actual: p.k(),
            });
        }
        Ok(p)
    }

    /// Prefix cutoff-rate condition against `cutoff_rates`.
    pub fn check_complexity_condition(&self, cutoff_rates: &[f64]) -> Result<ComplexityCheck> {
        check_complexity_condition(&self.mask, cutoff_rates)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct ProfileDocument {
    n: usize,
    k: usize,
    hex: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexityCheck {
    pub holds: bool,
    /// Smallest prefix length `l` (1-based) with `λ_l ≥ Σ_{i<l} E0_i`.
    pub first_violation: Option<usize>,
}

/// Checks `λ_l < Σ_{i=1}^{l} E0_i` for every prefix length `l`, where `λ_l`
/// counts information positions among the first `l`.
pub fn check_complexity_condition(mask: &[bool], cutoff_rates: &[f64]) -> Result<ComplexityCheck> {
    if mask.len() != cutoff_rates.len() {
        return Err(Error::LengthMismatch {
            expected: mask.len(),
            actual: cutoff_rates.len(),
        });
    }
    let mut info = 0usize;
    let mut budget = 0.0;
    for (l, (&m, &e)) in mask.iter().zip(cutoff_rates).enumerate() {
        info += usize::from(m);
        budget += e;
        if !((info as f64) < budget) {
            return Ok(ComplexityCheck {
                holds: false,
                first_violation: Some(l + 1),
            });
        }
    }
    Ok(ComplexityCheck {
        holds: true,
        first_violation: None,
    })
}

fn check_k(k: usize, n: usize) -> Result<()> {
    if k > n {
        return Err(Error::TooManyInformationBits { k, n });
    }
    if k == 0 {
        return Err(Error::EmptyProfile);
    }
    Ok(())
}

/// Indices sorted from most to least reliable; equal means prefer the larger
/// index.
fn reliability_order(means: &[f64], candidates: impl IntoIterator<Item = usize>) -> Vec<usize> {
    let mut idx: Vec<usize> = candidates.into_iter().collect();
    idx.sort_by(|&a, &b| means[b].total_cmp(&means[a]).then(b.cmp(&a)));
    idx
}

/// The `K` most reliable bit-channels.
pub fn polar_profile(table: &ReliabilityTable, k: usize) -> Result<RateProfile> {
    let n = table.n_bits;
    check_k(k, n)?;
    let order = reliability_order(&table.llr_means, 0..n);
    RateProfile::from_indices(n, order.into_iter().take(k))
}

/// Hamming weight of row `index` (0-based) of `F^{⊗n}`: `2^popcount(index)`.
pub fn row_weight(index: usize, n: usize) -> Result<usize> {
    if index >= n {
        return Err(Error::IndexOutOfRange { index, n });
    }
    Ok(1 << index.count_ones())
}

/// Reed-Muller/polar hybrid profile: every row heavier than the critical
/// weight, then the most reliable rows of the critical weight.
///
/// The critical weight `w*` is the largest weight whose rows, together with
/// all heavier rows, number at least `K`.
pub fn rm_polar_profile(table: &ReliabilityTable, k: usize) -> Result<RateProfile> {
    let n = table.n_bits;
    check_k(k, n)?;
    let weights: Vec<usize> = (0..n).map(|i| 1usize << i.count_ones()).collect();
    let mut critical = n;
    while weights.iter().filter(|&&w| w >= critical).count() < k {
        critical /= 2;
    }
    let heavier = (0..n).filter(|&i| weights[i] > critical);
    let fill = k - (0..n).filter(|&i| weights[i] > critical).count();
    let critical_rows = reliability_order(
        &table.llr_means,
        (0..n).filter(|&i| weights[i] == critical),
    );
    RateProfile::from_indices(n, heavier.chain(critical_rows.into_iter().take(fill)))
}
