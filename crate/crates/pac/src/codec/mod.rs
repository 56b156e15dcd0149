//! Transmit chain: data insertion, convolutional pre-transform and polar
//! transform, plus the successive-cancellation demapper used by the decoders.
//!
//! Bits are stored one per `u8` with values 0 or 1.

mod demapper;

pub use demapper::Demapper;

use crate::profiles::RateProfile;
use crate::{Error, Result};

/// Longest supported shift register.
pub const MAX_MEMORY: usize = 63;

/// Connection polynomial `g = (c_0, …, c_m)` of the rate-1 convolutional
/// pre-transform. `T` is the upper-triangular Toeplitz matrix whose first row
/// is `g`, so `u_i = Σ_j c_j v_{i−j}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConvSpec {
    taps: Vec<u8>,
    /// bit `j − 1` holds `c_j` for `j ≥ 1`
    mask: u64,
}

impl ConvSpec {
    pub fn new(taps: Vec<u8>) -> Result<Self> {
        if taps.is_empty() {
            return Err(Error::InvalidPolynomial("no taps".into()));
        }
        if taps[0] != 1 {
            return Err(Error::InvalidPolynomial("first tap must be 1".into()));
        }
        if taps.iter().any(|&t| t > 1) {
            return Err(Error::InvalidPolynomial("taps must be 0 or 1".into()));
        }
        if taps.len() - 1 > MAX_MEMORY {
            return Err(Error::InvalidPolynomial(format!(
                "memory {} exceeds {MAX_MEMORY}",
                taps.len() - 1
            )));
        }
        let mask = taps[1..]
            .iter()
            .enumerate()
            .fold(0u64, |acc, (j, &t)| acc | (u64::from(t) << j));
        Ok(Self { taps, mask })
    }

    /// No pre-transform: the PAC code degenerates to a polar code.
    pub fn identity() -> Self {
        Self::new(vec![1]).expect("valid")
    }

    /// Parses an octal polynomial such as `3211` (`11010001001₂`). The leading
    /// `1` bit becomes `c_0`; an optional `0o` prefix is accepted.
    pub fn from_octal(s: &str) -> Result<Self> {
        let digits = s.trim();
        let digits = digits.strip_prefix("0o").unwrap_or(digits);
        if digits.is_empty() {
            return Err(Error::InvalidPolynomial("empty".into()));
        }
        let mut bits = Vec::with_capacity(3 * digits.len());
        for ch in digits.chars() {
            let d = ch
                .to_digit(8)
                .ok_or_else(|| Error::InvalidPolynomial(format!("non-octal digit {ch:?}")))?;
            bits.extend([(d >> 2) & 1, (d >> 1) & 1, d & 1].map(|b| b as u8));
        }
        let first = bits
            .iter()
            .position(|&b| b == 1)
            .ok_or_else(|| Error::InvalidPolynomial("zero polynomial".into()))?;
        Self::new(bits.split_off(first))
    }

    pub fn to_octal(&self) -> String {
        let pad = (3 - self.taps.len() % 3) % 3;
        let bits: Vec<u8> = std::iter::repeat(0).take(pad).chain(self.taps.iter().copied()).collect();
        bits.chunks(3)
            .map(|c| char::from(b'0' + (c[0] << 2 | c[1] << 1 | c[2])))
            .collect()
    }

    pub fn taps(&self) -> &[u8] {
        &self.taps
    }

    pub fn memory(&self) -> usize {
        self.taps.len() - 1
    }

    /// One step of the shift register. `state` bit `j − 1` holds `v_{i−j}`.
    #[inline]
    pub fn step(&self, state: u64, v_bit: u8) -> (u8, u64) {
        let u = (v_bit & self.taps[0]) ^ ((state & self.mask).count_ones() & 1) as u8;
        let next = if self.memory() == 0 {
            0
        } else {
            ((state << 1) | u64::from(v_bit)) & (u64::MAX >> (64 - self.memory()))
        };
        (u, next)
    }
}

impl Default for ConvSpec {
    /// `g = 3211` (octal).
    fn default() -> Self {
        Self::from_octal("3211").expect("valid")
    }
}

/// Carrier word `v` tied to the profile it was built with.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CarrierWord<'a> {
    bits: Vec<u8>,
    profile: &'a RateProfile,
}

impl<'a> CarrierWord<'a> {
    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn profile(&self) -> &'a RateProfile {
        self.profile
    }

    pub fn into_bits(self) -> Vec<u8> {
        self.bits
    }
}

/// Places `d` on the information positions of `profile` in increasing order.
pub fn insert_data<'a>(d: &[u8], profile: &'a RateProfile) -> Result<CarrierWord<'a>> {
    if d.len() != profile.k() {
        return Err(Error::LengthMismatch {
            expected: profile.k(),
            actual: d.len(),
        });
    }
    let mut bits = vec![0u8; profile.n()];
    for (&pos, &b) in profile.info_indices().iter().zip(d) {
        bits[pos] = b & 1;
    }
    Ok(CarrierWord { bits, profile })
}

pub fn extract_data(v: &[u8], profile: &RateProfile) -> Result<Vec<u8>> {
    if v.len() != profile.n() {
        return Err(Error::LengthMismatch {
            expected: profile.n(),
            actual: v.len(),
        });
    }
    Ok(profile.info_indices().iter().map(|&i| v[i]).collect())
}

/// `u = vT` over GF(2).
pub fn conv_encode(v: &[u8], spec: &ConvSpec) -> Vec<u8> {
    let mut state = 0u64;
    v.iter()
        .map(|&b| {
            let (u, next) = spec.step(state, b);
            state = next;
            u
        })
        .collect()
}

/// `x = u F^{⊗n}` in place, butterfly form.
pub fn polar_transform_in_place(x: &mut [u8]) -> Result<()> {
    let n = x.len();
    if !n.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(n));
    }
    let mut half = 1;
    while half < n {
        for block in x.chunks_exact_mut(2 * half) {
            let (lo, hi) = block.split_at_mut(half);
            for (a, b) in lo.iter_mut().zip(hi.iter()) {
                *a ^= *b;
            }
        }
        half *= 2;
    }
    Ok(())
}

pub fn polar_transform(u: &[u8]) -> Result<Vec<u8>> {
    let mut x = u.to_vec();
    polar_transform_in_place(&mut x)?;
    Ok(x)
}

/// Full PAC encoder: insertion, pre-transform, polar transform.
pub fn encode(d: &[u8], profile: &RateProfile, spec: &ConvSpec) -> Result<Vec<u8>> {
    let v = insert_data(d, profile)?;
    let mut x = conv_encode(v.bits(), spec);
    polar_transform_in_place(&mut x)?;
    Ok(x)
}

/// Parses a bit vector written either as a string of `0`/`1` characters
/// (whitespace ignored) or as a JSON array of 0/1 integers.
pub fn parse_bits(s: &str) -> Result<Vec<u8>> {
    let trimmed = s.trim();
    if trimmed.starts_with('[') {
        let values: Vec<u8> = serde_json::from_str(trimmed)?;
        if let Some(v) = values.iter().find(|&&v| v > 1) {
            return Err(Error::InvalidBits(format!("value {v} is not a bit")));
        }
        return Ok(values);
    }
    trimmed
        .chars()
        .filter(|c| !c.is_whitespace())
        .map(|c| match c {
            '0' => Ok(0),
            '1' => Ok(1),
            other => Err(Error::InvalidBits(format!("unexpected character {other:?}"))),
        })
        .collect()
}

pub fn format_bits(bits: &[u8]) -> String {
    bits.iter().map(|&b| if b == 0 { '0' } else { '1' }).collect()
}
