//! Fano sequential decoding over the PAC code tree.
//!
//! The tree has depth `N`; a node at depth `i` has two children when `i` is an
//! information position and one (`v_i = 0`) when it is frozen. Moving along a
//! branch `v_i` runs the convolutional register to get `u_i`, whose branch
//! metric is
//!
//! `μ(z_i, u_i) = 1 − b_i − log2(1 + exp(−(1 − 2u_i) z_i))`
//!
//! with `z_i` from the SC demapper and bias `b_i` (by default the bit-channel
//! cutoff rate). The search is the classical Fano algorithm with threshold
//! spacing `Δ`: look forward, move forward and tighten on first visits, look
//! back or loosen when the best continuation falls below the threshold.
//!
//! `Θ` counts forward looks: every time the decoder consults the metric of a
//! child node, first visits and revisits alike.

use std::f64::consts::LN_2;

use crate::codec::{ConvSpec, Demapper};
use crate::polarization::ReliabilityTable;
use crate::profiles::RateProfile;
use crate::{Error, Result};

/// Default visit budget per bit.
pub const DEFAULT_MAX_VISITS_PER_BIT: u64 = 1_000_000;

/// `log2(1 + exp(−x))` without overflow.
#[inline]
pub(crate) fn log2_one_plus_exp_neg(x: f64) -> f64 {
    if x >= 0.0 {
        (-x).exp().ln_1p() / LN_2
    } else {
        (-x + x.exp().ln_1p()) / LN_2
    }
}

/// `1 − bias − log2(1 + exp(−(1 − 2u) llr))`.
pub fn branch_metric(llr: f64, u_bit: u8, bias: f64) -> f64 {
    1.0 - bias - log2_one_plus_exp_neg(signed_llr(llr, u_bit))
}

#[inline]
fn signed_llr(llr: f64, u_bit: u8) -> f64 {
    if u_bit == 0 {
        llr
    } else {
        -llr
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FanoConfig {
    pub delta: f64,
    pub max_visits: Option<u64>,
    pub conv: ConvSpec,
    bias: Vec<f64>,
    /// `1 − bias`, kept separately so reliable bit-channels keep a positive margin
    headroom: Vec<f64>,
}

impl FanoConfig {
    /// Arbitrary per-bit bias.
    pub fn new(delta: f64, bias: Vec<f64>, conv: ConvSpec) -> Result<Self> {
        let headroom = bias.iter().map(|b| 1.0 - b).collect();
        Self::build(delta, bias, headroom, conv)
    }

    /// Bias `b_i = E0(1, W_N^(i))` from a reliability table at the decoding SNR.
    pub fn with_cutoff_bias(table: &ReliabilityTable, delta: f64, conv: ConvSpec) -> Result<Self> {
        Self::build(delta, table.cutoff_rates.clone(), table.cutoff_complements(), conv)
    }

    /// Constant bias equal to the code rate.
    pub fn with_rate_bias(n: usize, rate: f64, delta: f64, conv: ConvSpec) -> Result<Self> {
        Self::new(delta, vec![rate; n], conv)
    }

    fn build(delta: f64, bias: Vec<f64>, headroom: Vec<f64>, conv: ConvSpec) -> Result<Self> {
        if !(delta > 0.0 && delta.is_finite()) {
            return Err(Error::InvalidThresholdSpacing(delta));
        }
        if !bias.len().is_power_of_two() {
            return Err(Error::NotPowerOfTwo(bias.len()));
        }
        let n = bias.len() as u64;
        Ok(Self {
            delta,
            max_visits: Some(DEFAULT_MAX_VISITS_PER_BIT * n),
            conv,
            bias,
            headroom,
        })
    }

    pub fn with_max_visits(mut self, max_visits: Option<u64>) -> Self {
        self.max_visits = max_visits;
        self
    }

    pub fn bias(&self) -> &[f64] {
        &self.bias
    }

    pub fn n(&self) -> usize {
        self.bias.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FanoStatus {
    Decoded,
    AbortedOnMaxVisits,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FanoOutcome {
    /// Estimated carrier word; on abort, the current path padded with zeros.
    pub v_hat: Vec<u8>,
    pub theta: u64,
    pub status: FanoStatus,
}

impl FanoOutcome {
    pub fn is_decoded(&self) -> bool {
        self.status == FanoStatus::Decoded
    }
}

#[derive(Debug, Clone, Copy, Default)]
struct Branch {
    v: u8,
    u: u8,
    metric: f64,
}

#[derive(Debug, Clone, Copy, Default)]
struct Node {
    branches: [Branch; 2],
    count: u8,
    choice: u8,
    /// path metric on arrival
    metric: f64,
    /// register contents on arrival
    state: u64,
}

/// Decodes one frame. `dm` must hold the channel LLRs of the frame; it is
/// rewound to position 0 before the search starts.
pub fn fano_decode(dm: &mut Demapper, profile: &RateProfile, cfg: &FanoConfig) -> Result<FanoOutcome> {
    let n = profile.n();
    if dm.n() != n {
        return Err(Error::LengthMismatch { expected: n, actual: dm.n() });
    }
    if cfg.n() != n {
        return Err(Error::LengthMismatch { expected: n, actual: cfg.n() });
    }
    dm.rewind(0)?;

    let delta = cfg.delta;
    let max_visits = cfg.max_visits.unwrap_or(u64::MAX);
    let mut nodes = vec![Node::default(); n + 1];
    let expand = |dm: &mut Demapper, node: &mut Node, i: usize| -> Result<()> {
        let z = dm.next_llr()?;
        let (u0, _) = cfg.conv.step(node.state, 0);
        let h = cfg.headroom[i];
        let b0 = Branch { v: 0, u: u0, metric: h - log2_one_plus_exp_neg(signed_llr(z, u0)) };
        if profile.is_info(i) {
            let u1 = u0 ^ 1;
            let b1 = Branch { v: 1, u: u1, metric: h - log2_one_plus_exp_neg(signed_llr(z, u1)) };
            node.branches = if b1.metric > b0.metric { [b1, b0] } else { [b0, b1] };
            node.count = 2;
        } else {
            node.branches = [b0, b0];
            node.count = 1;
        }
        node.choice = 0;
        Ok(())
    };

    // threshold is `steps * delta`
    let mut steps: i64 = 0;
    let mut theta: u64 = 0;
    let mut i = 0usize;
    expand(dm, &mut nodes[0], 0)?;

    loop {
        theta += 1;
        if theta > max_visits {
            let mut v_hat: Vec<u8> = nodes[..i].iter().map(|nd| nd.branches[nd.choice as usize].v).collect();
            v_hat.resize(n, 0);
            return Ok(FanoOutcome { v_hat, theta: theta - 1, status: FanoStatus::AbortedOnMaxVisits });
        }
        let threshold = steps as f64 * delta;
        let node = nodes[i];
        let br = node.branches[node.choice as usize];
        let forward = node.metric + br.metric;

        if forward >= threshold {
            if dm.position() != i {
                dm.rewind(i)?;
            }
            dm.feed(br.u)?;
            let (_, state) = cfg.conv.step(node.state, br.v);
            if node.metric < threshold + delta {
                while forward >= (steps + 1) as f64 * delta {
                    steps += 1;
                }
            }
            i += 1;
            nodes[i].metric = forward;
            nodes[i].state = state;
            if i == n {
                let v_hat = nodes[..n].iter().map(|nd| nd.branches[nd.choice as usize].v).collect();
                return Ok(FanoOutcome { v_hat, theta, status: FanoStatus::Decoded });
            }
            expand(dm, &mut nodes[i], i)?;
            continue;
        }

        // look back
        loop {
            if i == 0 || nodes[i - 1].metric < threshold {
                steps -= 1;
                nodes[i].choice = 0;
                break;
            }
            i -= 1;
            if nodes[i].choice + 1 < nodes[i].count {
                nodes[i].choice += 1;
                break;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bench::channel::LLR_CAP;
    use crate::codec::{conv_encode, insert_data, polar_transform};
    use crate::profiles::polar_profile;
    use approx::assert_relative_eq;

    #[test]
    fn metric_examples() {
        assert_eq!(branch_metric(0.0, 0, 0.0), 0.0);
        assert_eq!(branch_metric(0.0, 1, 0.0), 0.0);
        assert_relative_eq!(branch_metric(1e4, 0, 0.3), 0.7, max_relative = 1e-12);
        assert_relative_eq!(branch_metric(3f64.ln(), 0, 0.0), 0.5849625007211563, max_relative = 1e-12);
        let worst = branch_metric(50.0, 1, 0.2);
        assert_relative_eq!(worst, 0.8 - 50.0 / LN_2, max_relative = 1e-12);
        assert!(branch_metric(-800.0, 0, 0.0).is_finite());
    }

    #[test]
    fn config_validation() {
        assert!(FanoConfig::new(0.0, vec![0.5; 4], ConvSpec::identity()).is_err());
        assert!(FanoConfig::new(2.0, vec![0.5; 3], ConvSpec::identity()).is_err());
        let cfg = FanoConfig::with_rate_bias(8, 0.5, 2.0, ConvSpec::identity()).unwrap();
        assert_eq!(cfg.max_visits, Some(8_000_000));
    }

    fn noiseless_llrs(x: &[u8]) -> Vec<f64> {
        x.iter().map(|&b| if b == 0 { LLR_CAP } else { -LLR_CAP }).collect()
    }

    #[test]
    fn noiseless_decodes_without_backtracking() {
        let table = ReliabilityTable::compute(64, 2.0, 0.5).unwrap();
        let profile = polar_profile(&table, 32).unwrap();
        let cfg = FanoConfig::with_cutoff_bias(&table, 2.0, ConvSpec::default()).unwrap();
        for seed in 0..20u32 {
            let d: Vec<u8> = (0..32).map(|j| ((seed.wrapping_mul(2654435761) >> (j % 32)) & 1) as u8).collect();
            let v = insert_data(&d, &profile).unwrap().into_bits();
            let x = polar_transform(&conv_encode(&v, &cfg.conv)).unwrap();
            let mut dm = Demapper::new(&noiseless_llrs(&x)).unwrap();
            let out = fano_decode(&mut dm, &profile, &cfg).unwrap();
            assert!(out.is_decoded());
            assert_eq!(out.v_hat, v);
            assert_eq!(out.theta, 64);
        }
    }

    #[test]
    fn single_information_bit_is_ml() {
        let profile = RateProfile::from_mask(vec![false, true]).unwrap();
        let cfg = FanoConfig::with_rate_bias(2, 0.5, 2.0, ConvSpec::identity()).unwrap();
        for a in [-3.0, -0.7, -0.1, 0.2, 1.5] {
            for b in [-2.0, -0.3, 0.4, 2.5] {
                // codewords (0,0) and (1,1): ML picks (1,1) iff a + b < 0
                let ml = u8::from(a + b < 0.0);
                let mut dm = Demapper::new(&[a, b]).unwrap();
                let out = fano_decode(&mut dm, &profile, &cfg).unwrap();
                assert_eq!(out.v_hat, vec![0, ml], "a={a} b={b}");
            }
        }
    }

    #[test]
    fn frozen_positions_stay_zero_and_run_is_deterministic() {
        let table = ReliabilityTable::compute(64, 1.0, 0.5).unwrap();
        let profile = polar_profile(&table, 32).unwrap();
        let cfg = FanoConfig::with_cutoff_bias(&table, 2.0, ConvSpec::default()).unwrap();
        let llrs: Vec<f64> = (0..64).map(|i| (((i * 7919) % 23) as f64 - 9.0) / 3.0).collect();
        let mut dm = Demapper::new(&llrs).unwrap();
        let a = fano_decode(&mut dm, &profile, &cfg).unwrap();
        let b = fano_decode(&mut Demapper::new(&llrs).unwrap(), &profile, &cfg).unwrap();
        assert_eq!(a, b);
        assert!(a.theta >= 64);
        for i in 0..64 {
            if !profile.is_info(i) {
                assert_eq!(a.v_hat[i], 0);
            }
        }
    }

    #[test]
    fn visit_cap_aborts() {
        let table = ReliabilityTable::compute(64, 1.0, 0.5).unwrap();
        let profile = polar_profile(&table, 32).unwrap();
        let cfg = FanoConfig::with_cutoff_bias(&table, 2.0, ConvSpec::default())
            .unwrap()
            .with_max_visits(Some(10));
        let llrs = vec![0.01; 64];
        let out = fano_decode(&mut Demapper::new(&llrs).unwrap(), &profile, &cfg).unwrap();
        assert_eq!(out.status, FanoStatus::AbortedOnMaxVisits);
        assert_eq!(out.theta, 10);
        assert_eq!(out.v_hat.len(), 64);
    }

    #[test]
    fn length_mismatch() {
        let profile = RateProfile::from_mask(vec![false, true]).unwrap();
        let cfg = FanoConfig::with_rate_bias(4, 0.5, 2.0, ConvSpec::identity()).unwrap();
        assert!(fano_decode(&mut Demapper::new(&[1.0, 1.0]).unwrap(), &profile, &cfg).is_err());
    }
}
