use rand::Rng;
use serde::{Deserialize, Serialize};

use super::channel::{awgn, channel_llrs, modulate, ChannelParams};
use super::rng::{run_ordered, trial_rng, DEFAULT_BATCH, MAX_TRIALS_PER_GROUP};
use crate::codec::{conv_encode, insert_data, polar_transform_in_place, ConvSpec, Demapper};
use crate::fano::{fano_decode, FanoConfig, FanoStatus};
use crate::list::list_decode;
use crate::polarization::ReliabilityTable;
use crate::profiles::RateProfile;
use crate::{Error, Result};

pub const CSV_HEADER: &str = "ebn0_db,trials,frame_errors,fer,fer_ci95,theta_sum,anv,aborts";

/// One transmitted frame as seen by the receiver.
#[derive(Debug, Clone)]
pub struct Frame {
    pub v: Vec<u8>,
    pub llrs: Vec<f64>,
}

/// Draws a uniform message, encodes it and passes it through BPSK/AWGN.
pub fn transmit<R: Rng + ?Sized>(
    profile: &RateProfile,
    conv: &ConvSpec,
    sigma: f64,
    rng: &mut R,
) -> Result<Frame> {
    let d: Vec<u8> = (0..profile.k()).map(|_| u8::from(rng.gen::<bool>())).collect();
    let v = insert_data(&d, profile)?.into_bits();
    let mut x = conv_encode(&v, conv);
    polar_transform_in_place(&mut x)?;
    let y = awgn(&modulate(&x), sigma, rng);
    Ok(Frame { v, llrs: channel_llrs(&y, sigma) })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BiasChoice {
    /// `b_i = E0(1, W_N^(i))` at the simulated SNR
    CutoffRate,
    /// `b_i = K/N`
    CodeRate,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum DecoderChoice {
    Fano {
        delta: f64,
        bias: BiasChoice,
        max_visits_per_bit: Option<u64>,
    },
    List {
        size: usize,
    },
}

impl DecoderChoice {
    pub fn fano(delta: f64) -> Self {
        DecoderChoice::Fano {
            delta,
            bias: BiasChoice::CutoffRate,
            max_visits_per_bit: Some(crate::fano::DEFAULT_MAX_VISITS_PER_BIT),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StopRule {
    pub min_frame_errors: u64,
    pub max_trials: u64,
}

impl Default for StopRule {
    fn default() -> Self {
        Self {
            min_frame_errors: 400,
            max_trials: 2_000_000,
        }
    }
}

/// Counts accumulated at one SNR point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimStats {
    pub ebn0_db: f64,
    pub n_bits: usize,
    pub trials: u64,
    pub frame_errors: u64,
    pub theta_sum: u64,
    /// Σ Θ², for the ANV interval
    pub theta_sq_sum: u128,
    pub aborts: u64,
}

impl SimStats {
    pub fn new(ebn0_db: f64, n_bits: usize) -> Self {
        Self {
            ebn0_db,
            n_bits,
            trials: 0,
            frame_errors: 0,
            theta_sum: 0,
            theta_sq_sum: 0,
            aborts: 0,
        }
    }

    pub fn fer(&self) -> f64 {
        if self.trials == 0 {
            0.0
        } else {
            self.frame_errors as f64 / self.trials as f64
        }
    }

    /// Half-width of the normal-approximation 95% interval on the FER.
    pub fn fer_ci95(&self) -> f64 {
        if self.trials == 0 {
            return 0.0;
        }
        let p = self.fer();
        1.96 * (p * (1.0 - p) / self.trials as f64).sqrt()
    }

    /// `E[Θ]/N`; zero for decoders that do not count visits.
    pub fn anv(&self) -> f64 {
        if self.trials == 0 {
            0.0
        } else {
            self.theta_sum as f64 / (self.trials as f64 * self.n_bits as f64)
        }
    }

    /// Half-width of the normal-approximation 95% interval on the ANV.
    pub fn anv_ci95(&self) -> f64 {
        if self.trials < 2 {
            return 0.0;
        }
        let n = self.trials as f64;
        let mean = self.theta_sum as f64 / n;
        let var = (self.theta_sq_sum as f64 / n - mean * mean).max(0.0) * n / (n - 1.0);
        1.96 * (var / n).sqrt() / self.n_bits as f64
    }

    /// Statistics of the concatenated trial sets.
    pub fn merge(&self, other: &SimStats) -> Result<SimStats> {
        if self.n_bits != other.n_bits || self.ebn0_db.to_bits() != other.ebn0_db.to_bits() {
            return Err(Error::InvalidConfig("merging statistics of different operating points".into()));
        }
        Ok(SimStats {
            trials: self.trials + other.trials,
            frame_errors: self.frame_errors + other.frame_errors,
            theta_sum: self.theta_sum + other.theta_sum,
            theta_sq_sum: self.theta_sq_sum + other.theta_sq_sum,
            aborts: self.aborts + other.aborts,
            ..*self
        })
    }

    pub fn to_csv_row(&self) -> String {
        format!(
            "{},{},{},{:e},{:e},{},{},{}",
            self.ebn0_db,
            self.trials,
            self.frame_errors,
            self.fer(),
            self.fer_ci95(),
            self.theta_sum,
            self.anv(),
            self.aborts
        )
    }

    fn record(&mut self, t: &TrialResult) {
        self.trials += 1;
        self.frame_errors += u64::from(t.frame_error);
        self.theta_sum += t.theta;
        self.theta_sq_sum += u128::from(t.theta) * u128::from(t.theta);
        self.aborts += u64::from(t.aborted);
    }
}

#[derive(Debug, Clone, Copy)]
struct TrialResult {
    frame_error: bool,
    theta: u64,
    aborted: bool,
}

/// A FER/ANV simulation of one code and decoder over an SNR grid.
#[derive(Debug, Clone)]
pub struct Simulation {
    pub profile: RateProfile,
    pub conv: ConvSpec,
    pub decoder: DecoderChoice,
    pub stop: StopRule,
    pub seed: u64,
    /// Forces the noise standard deviation, keeping the nominal Eb/N0 for the
    /// decoder's bias.
    pub sigma_override: Option<f64>,
    pub batch: u64,
}

impl Simulation {
    pub fn new(profile: RateProfile, conv: ConvSpec, decoder: DecoderChoice) -> Self {
        Self {
            profile,
            conv,
            decoder,
            stop: StopRule::default(),
            seed: 0,
            sigma_override: None,
            batch: DEFAULT_BATCH,
        }
    }

    pub fn run(&self, snr_grid: &[f64]) -> Result<Vec<SimStats>> {
        if snr_grid.is_empty() {
            return Err(Error::InvalidConfig("empty SNR grid".into()));
        }
        snr_grid
            .iter()
            .enumerate()
            .map(|(idx, &db)| self.run_point(idx as u64, db))
            .collect()
    }

    /// Runs one grid point; `index` selects the random-stream group.
    pub fn run_point(&self, index: u64, ebn0_db: f64) -> Result<SimStats> {
        if self.stop.max_trials == 0 || self.stop.max_trials > MAX_TRIALS_PER_GROUP {
            return Err(Error::InvalidConfig(format!("max_trials = {}", self.stop.max_trials)));
        }
        let n = self.profile.n();
        let rate = self.profile.rate();
        let mut channel = ChannelParams::new(ebn0_db, rate)?;
        if let Some(sigma) = self.sigma_override {
            channel = channel.with_sigma(sigma)?;
        }
        let fano_cfg = match self.decoder {
            DecoderChoice::Fano { delta, bias, max_visits_per_bit } => {
                let cfg = match bias {
                    BiasChoice::CutoffRate => {
                        let table = ReliabilityTable::compute(n, ebn0_db, rate)?;
                        FanoConfig::with_cutoff_bias(&table, delta, self.conv.clone())?
                    }
                    BiasChoice::CodeRate => FanoConfig::with_rate_bias(n, rate, delta, self.conv.clone())?,
                };
                Some(cfg.with_max_visits(max_visits_per_bit.map(|m| m.saturating_mul(n as u64))))
            }
            DecoderChoice::List { size } => {
                if size == 0 {
                    return Err(Error::InvalidListSize);
                }
                None
            }
        };

        let trial = |t: u64| -> Result<TrialResult> {
            let mut rng = trial_rng(self.seed, index, t);
            let frame = transmit(&self.profile, &self.conv, channel.sigma, &mut rng)?;
            let (v_hat, theta, aborted) = match (&self.decoder, &fano_cfg) {
                (DecoderChoice::Fano { .. }, Some(cfg)) => {
                    let mut dm = Demapper::new(&frame.llrs)?;
                    let out = fano_decode(&mut dm, &self.profile, cfg)?;
                    (out.v_hat, out.theta, out.status == FanoStatus::AbortedOnMaxVisits)
                }
                (DecoderChoice::List { size }, _) => {
                    (list_decode(&frame.llrs, &self.profile, &self.conv, *size)?.v_hat, 0, false)
                }
                _ => unreachable!("decoder configuration prepared above"),
            };
            debug_assert!((0..n).all(|i| self.profile.is_info(i) || v_hat[i] == 0));
            Ok(TrialResult { frame_error: v_hat != frame.v, theta, aborted })
        };

        let mut stats = SimStats::new(ebn0_db, n);
        let min_errors = self.stop.min_frame_errors;
        run_ordered(self.stop.max_trials, self.batch, trial, |t| {
            stats.record(&t);
            min_errors > 0 && stats.frame_errors >= min_errors
        })?;
        log::debug!(
            "Eb/N0 {ebn0_db} dB: {} trials, FER {:.3e}, ANV {:.3}",
            stats.trials,
            stats.fer(),
            stats.anv()
        );
        Ok(stats)
    }
}

/// Convenience wrapper over [`Simulation`].
pub fn simulate(
    profile: &RateProfile,
    conv: &ConvSpec,
    decoder: DecoderChoice,
    snr_grid: &[f64],
    stop: StopRule,
    seed: u64,
) -> Result<Vec<SimStats>> {
    let mut sim = Simulation::new(profile.clone(), conv.clone(), decoder);
    sim.stop = stop;
    sim.seed = seed;
    sim.run(snr_grid)
}
