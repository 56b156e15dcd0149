//! Monte-Carlo rate-profile construction.
//!
//! Starting from every bit-channel whose cutoff rate clears the quantization
//! level `δ` at the target SNR, the construction repeatedly simulates the code
//! under Fano decoding, histograms the first-bit-error (FBE) positions of the
//! failed frames, and freezes the position that was most often the first
//! error. It stops once `K` positions remain.
//!
//! This module also computes the burst profile after the FBE: the fraction of
//! positions `j + t` decoded wrongly given the first error at `j`.

use serde::{Deserialize, Serialize};

use crate::bench::channel::ChannelParams;
use crate::bench::rng::{run_ordered, trial_rng, DEFAULT_BATCH, MAX_TRIALS_PER_GROUP};
use crate::bench::transmit;
use crate::codec::{ConvSpec, Demapper};
use crate::fano::{fano_decode, FanoConfig, FanoStatus};
use crate::polarization::{quantize, ReliabilityTable};
use crate::profiles::{ComplexityCheck, RateProfile};
use crate::{Error, Result};

/// Step 1–2 profile: `{ i : q(E0_i, δ) = 1 }`.
///
/// Fails with [`Error::InfeasibleTarget`] unless `N·R` is strictly below the
/// number of selected positions.
pub fn initial_profile(n: usize, rate: f64, table: &ReliabilityTable, delta: f64) -> Result<RateProfile> {
    if table.n_bits != n {
        return Err(Error::LengthMismatch { expected: n, actual: table.n_bits });
    }
    if !(rate > 0.0 && rate <= 1.0) {
        return Err(Error::InvalidRate(rate));
    }
    let mask = table
        .cutoff_rates
        .iter()
        .map(|&e| quantize(e, delta).map(|q| q == 1))
        .collect::<Result<Vec<bool>>>()?;
    let achieved = mask.iter().filter(|&&b| b).count();
    let required = n as f64 * rate;
    if !(required < achieved as f64) {
        return Err(Error::InfeasibleTarget { required, achieved });
    }
    RateProfile::from_mask(mask)
}

/// Smallest index where `v` and `v_hat` differ.
pub fn fbe_index(v: &[u8], v_hat: &[u8]) -> Result<Option<usize>> {
    if v.len() != v_hat.len() {
        return Err(Error::LengthMismatch { expected: v.len(), actual: v_hat.len() });
    }
    Ok(v.iter().zip(v_hat).position(|(a, b)| a != b))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FbeHistogram {
    pub counts: Vec<u64>,
    pub trials_observed: u64,
    pub failures_observed: u64,
}

impl FbeHistogram {
    pub fn new(n: usize) -> Self {
        Self { counts: vec![0; n], trials_observed: 0, failures_observed: 0 }
    }

    /// Index of the largest count, smallest index on ties; `None` if empty.
    pub fn argmax(&self) -> Option<usize> {
        let mut best: Option<(usize, u64)> = None;
        for (i, &c) in self.counts.iter().enumerate() {
            if c > 0 && best.map_or(true, |(_, b)| c > b) {
                best = Some((i, c));
            }
        }
        best.map(|(i, _)| i)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstructionConfig {
    pub n: usize,
    pub k: usize,
    pub target_ebn0_db: f64,
    /// quantization level δ
    pub delta: f64,
    pub trials_per_iteration: u64,
    pub failure_target: u64,
    pub rng_seed: u64,
    #[serde(skip, default)]
    pub conv: ConvSpec,
    /// Fano threshold spacing Δ
    pub fano_delta: f64,
    pub max_visits_per_bit: u64,
}

impl ConstructionConfig {
    pub fn new(n: usize, k: usize, target_ebn0_db: f64) -> Self {
        Self {
            n,
            k,
            target_ebn0_db,
            delta: 0.5,
            trials_per_iteration: 100_000,
            failure_target: 200,
            rng_seed: 0,
            conv: ConvSpec::default(),
            fano_delta: 2.0,
            max_visits_per_bit: 10_000,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.n.is_power_of_two() {
            return Err(Error::NotPowerOfTwo(self.n));
        }
        if self.k == 0 {
            return Err(Error::EmptyProfile);
        }
        if self.k > self.n {
            return Err(Error::TooManyInformationBits { k: self.k, n: self.n });
        }
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(Error::InvalidQuantizationLevel(self.delta));
        }
        if self.trials_per_iteration == 0 || self.trials_per_iteration > MAX_TRIALS_PER_GROUP {
            return Err(Error::InvalidConfig(format!(
                "trials_per_iteration = {}",
                self.trials_per_iteration
            )));
        }
        if self.failure_target == 0 {
            return Err(Error::InvalidConfig("failure_target must be positive".into()));
        }
        Ok(())
    }

    pub fn rate(&self) -> f64 {
        self.k as f64 / self.n as f64
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterationRecord {
    pub iteration: usize,
    pub profile_size: usize,
    pub removed: usize,
    /// No failure was observed; the least reliable position was removed instead.
    pub fallback: bool,
    pub histogram: FbeHistogram,
    pub aborts: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstructionLog {
    pub config: ConstructionConfig,
    pub g_octal: String,
    pub initial_size: usize,
    pub initial_hex: Option<String>,
    pub iterations: Vec<IterationRecord>,
    pub final_hex: Option<String>,
    /// prefix cutoff-rate condition of the result at the target SNR
    pub complexity_check: ComplexityCheck,
}

#[derive(Debug, Clone)]
pub struct Construction {
    pub profile: RateProfile,
    pub log: ConstructionLog,
}

#[derive(Debug, Clone, Copy)]
enum TrialKind {
    Correct,
    Failure(usize),
    Aborted,
}

fn fano_config(cfg: &ConstructionConfig, table: &ReliabilityTable) -> Result<FanoConfig> {
    Ok(FanoConfig::with_cutoff_bias(table, cfg.fano_delta, cfg.conv.clone())?
        .with_max_visits(Some(cfg.max_visits_per_bit.saturating_mul(cfg.n as u64))))
}

/// Runs the construction; `table` must describe the target SNR at rate `K/N`.
pub fn mc_construct(cfg: &ConstructionConfig, table: &ReliabilityTable) -> Result<Construction> {
    cfg.validate()?;
    table.validate()?;
    if table.n_bits != cfg.n {
        return Err(Error::LengthMismatch { expected: cfg.n, actual: table.n_bits });
    }
    let initial = initial_profile(cfg.n, cfg.rate(), table, cfg.delta)?;
    let fano = fano_config(cfg, table)?;
    let sigma = ChannelParams::new(cfg.target_ebn0_db, cfg.rate())?.sigma;

    let mut profile = initial.clone();
    let mut iterations = Vec::with_capacity(initial.k() - cfg.k);
    while profile.k() > cfg.k {
        let iteration = iterations.len();
        let mut hist = FbeHistogram::new(cfg.n);
        let mut aborts = 0;
        let current = &profile;
        let trial = |t: u64| -> Result<TrialKind> {
            let mut rng = trial_rng(cfg.rng_seed, iteration as u64, t);
            let frame = transmit(current, &cfg.conv, sigma, &mut rng)?;
            let mut dm = Demapper::new(&frame.llrs)?;
            let out = fano_decode(&mut dm, current, &fano)?;
            if out.status == FanoStatus::AbortedOnMaxVisits {
                return Ok(TrialKind::Aborted);
            }
            Ok(match fbe_index(&frame.v, &out.v_hat)? {
                Some(j) => TrialKind::Failure(j),
                None => TrialKind::Correct,
            })
        };
        run_ordered(cfg.trials_per_iteration, DEFAULT_BATCH, trial, |kind| {
            hist.trials_observed += 1;
            match kind {
                TrialKind::Correct => {}
                TrialKind::Aborted => aborts += 1,
                TrialKind::Failure(j) => {
                    hist.counts[j] += 1;
                    hist.failures_observed += 1;
                }
            }
            hist.failures_observed >= cfg.failure_target
        })?;

        let (removed, fallback) = match hist.argmax() {
            Some(j) => (j, false),
            None => {
                let j = profile
                    .info_indices()
                    .iter()
                    .copied()
                    .min_by(|&a, &b| table.llr_means[a].total_cmp(&table.llr_means[b]).then(a.cmp(&b)))
                    .expect("profile is nonempty");
                log::warn!(
                    "iteration {iteration}: no failures in {} trials, removing least reliable index {j}",
                    hist.trials_observed
                );
                (j, true)
            }
        };
        debug_assert!(profile.is_info(removed));
        log::info!(
            "iteration {iteration}: |A| = {}, removed {removed} ({} failures / {} trials, {aborts} aborts)",
            profile.k(),
            hist.failures_observed,
            hist.trials_observed
        );
        iterations.push(IterationRecord {
            iteration,
            profile_size: profile.k(),
            removed,
            fallback,
            histogram: hist,
            aborts,
        });
        profile = profile.without(removed)?;
    }

    let complexity_check = profile.check_complexity_condition(&table.cutoff_rates)?;
    if !complexity_check.holds {
        log::warn!(
            "constructed profile violates the prefix cutoff-rate condition at l = {:?}",
            complexity_check.first_violation
        );
    }
    let log = ConstructionLog {
        config: cfg.clone(),
        g_octal: cfg.conv.to_octal(),
        initial_size: initial.k(),
        initial_hex: initial.to_hex().ok(),
        iterations,
        final_hex: profile.to_hex().ok(),
        complexity_check,
    };
    Ok(Construction { profile, log })
}

/// Mean error indicator at each offset after the FBE.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FbeDistribution {
    /// `fractions[t − 1]` is the error rate at offset `t ≥ 1`.
    pub fractions: Vec<f64>,
    /// failures contributing to each offset
    pub samples: Vec<u64>,
    /// wrong post-FBE positions over all post-FBE positions, pooled across failures
    pub mean_fraction: f64,
}

/// Burst profile of a set of failed frames `(v, v_hat)`.
pub fn fbe_error_distribution(failures: &[(Vec<u8>, Vec<u8>)]) -> Result<FbeDistribution> {
    if failures.is_empty() {
        return Err(Error::EmptyInput("no failures"));
    }
    let mut wrong: Vec<u64> = Vec::new();
    let mut samples: Vec<u64> = Vec::new();
    for (v, v_hat) in failures {
        let j = fbe_index(v, v_hat)?
            .ok_or_else(|| Error::InvalidConfig("frame without a decoding error".into()))?;
        let tail = v.len() - j - 1;
        if wrong.len() < tail {
            wrong.resize(tail, 0);
            samples.resize(tail, 0);
        }
        for t in 0..tail {
            samples[t] += 1;
            wrong[t] += u64::from(v[j + 1 + t] != v_hat[j + 1 + t]);
        }
    }
    let total: u64 = samples.iter().sum();
    let total_wrong: u64 = wrong.iter().sum();
    Ok(FbeDistribution {
        fractions: wrong.iter().zip(&samples).map(|(&w, &s)| w as f64 / s as f64).collect(),
        samples,
        mean_fraction: if total == 0 { 0.0 } else { total_wrong as f64 / total as f64 },
    })
}

/// Simulates Fano decoding at `ebn0_db` until `failures` decoding errors
/// (excluding aborts) are collected or `max_trials` frames are sent. Returns
/// the failed `(v, v_hat)` pairs and the number of trials used.
#[allow(clippy::too_many_arguments)]
pub fn collect_failures(
    profile: &RateProfile,
    conv: &ConvSpec,
    ebn0_db: f64,
    fano_delta: f64,
    max_visits_per_bit: u64,
    failures: usize,
    max_trials: u64,
    seed: u64,
) -> Result<(Vec<(Vec<u8>, Vec<u8>)>, u64)> {
    let n = profile.n();
    let rate = profile.rate();
    let table = ReliabilityTable::compute(n, ebn0_db, rate)?;
    let fano = FanoConfig::with_cutoff_bias(&table, fano_delta, conv.clone())?
        .with_max_visits(Some(max_visits_per_bit.saturating_mul(n as u64)));
    let sigma = ChannelParams::new(ebn0_db, rate)?.sigma;
    let mut out = Vec::with_capacity(failures);
    if failures == 0 {
        return Ok((out, 0));
    }
    let trial = |t: u64| -> Result<Option<(Vec<u8>, Vec<u8>)>> {
        let mut rng = trial_rng(seed, 0, t);
        let frame = transmit(profile, conv, sigma, &mut rng)?;
        let mut dm = Demapper::new(&frame.llrs)?;
        let res = fano_decode(&mut dm, profile, &fano)?;
        Ok((res.is_decoded() && res.v_hat != frame.v).then(|| (frame.v, res.v_hat)))
    };
    let used = run_ordered(max_trials, DEFAULT_BATCH, trial, |f| {
        if let Some(pair) = f {
            out.push(pair);
        }
        out.len() >= failures
    })?;
    Ok((out, used))
}
