use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use log::info;

use pac_codes::bench::{BiasChoice, DecoderChoice, Simulation, StopRule, CSV_HEADER};
use pac_codes::codec::{encode, format_bits, parse_bits};
use pac_codes::construction::{collect_failures, fbe_error_distribution, mc_construct, ConstructionConfig};
use pac_codes::fano::DEFAULT_MAX_VISITS_PER_BIT;
use pac_codes::polarization::ReliabilityTable;
use pac_codes::profiles::{polar_profile, rm_polar_profile, RateProfile};
use pac_codes::ConvSpec;

#[derive(Parser)]
#[command(name = "pac", version, about = "PAC code construction, encoding and simulation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ProfileMode {
    Polar,
    Rmpolar,
}

#[derive(Clone, Copy, ValueEnum)]
enum DecoderKind {
    Fano,
    List,
}

#[derive(Subcommand)]
enum Command {
    /// Bit-channel LLR means, Bhattacharyya parameters and cutoff rates as JSON.
    Reliabilities {
        #[arg(long)]
        n: usize,
        #[arg(long, allow_hyphen_values = true)]
        ebn0_db: f64,
        #[arg(long)]
        rate: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Monte-Carlo rate-profile construction.
    Construct {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, allow_hyphen_values = true)]
        ebn0_db: f64,
        /// quantization level of the initial profile
        #[arg(long, default_value_t = 0.5)]
        delta: f64,
        #[arg(long, default_value_t = 100_000)]
        trials_per_iter: u64,
        #[arg(long, default_value_t = 200)]
        failure_target: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        /// JSON construction log
        #[arg(long)]
        log: Option<PathBuf>,
        /// connection polynomial, octal
        #[arg(long, default_value = "3211")]
        g: String,
        #[arg(long, default_value_t = 2.0)]
        delta_fano: f64,
        #[arg(long, default_value_t = 10_000)]
        max_visits_per_bit: u64,
    },
    /// Baseline polar or RM-Polar rate profile.
    Profile {
        #[arg(long, value_enum)]
        mode: ProfileMode,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, allow_hyphen_values = true)]
        ebn0_db: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Encodes K data bits into an N-bit PAC codeword.
    Encode {
        #[arg(long)]
        profile: PathBuf,
        #[arg(long, default_value = "3211")]
        g: String,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// FER/ANV simulation over an Eb/N0 grid, written as CSV.
    Simulate {
        #[arg(long)]
        profile: PathBuf,
        #[arg(long, default_value = "3211")]
        g: String,
        #[arg(long, value_enum)]
        decoder: DecoderKind,
        #[arg(long, default_value_t = 2.0)]
        delta_fano: f64,
        #[arg(long, default_value_t = 32)]
        list_size: usize,
        /// use b_i = K/N instead of the bit-channel cutoff rates
        #[arg(long)]
        rate_bias: bool,
        #[arg(long, default_value_t = DEFAULT_MAX_VISITS_PER_BIT)]
        max_visits_per_bit: u64,
        #[arg(long, allow_hyphen_values = true)]
        ebn0_start: f64,
        #[arg(long, allow_hyphen_values = true)]
        ebn0_stop: f64,
        #[arg(long)]
        ebn0_step: f64,
        #[arg(long, default_value_t = 400)]
        min_errors: u64,
        #[arg(long, default_value_t = 2_000_000)]
        max_trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Error rate of the bits following the first bit error, as CSV.
    AnalyzeFbe {
        #[arg(long)]
        profile: PathBuf,
        #[arg(long, default_value = "3211")]
        g: String,
        #[arg(long, allow_hyphen_values = true)]
        ebn0_db: f64,
        #[arg(long)]
        failures: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 2.0)]
        delta_fano: f64,
        #[arg(long, default_value_t = 100_000_000)]
        max_trials: u64,
        #[arg(long, default_value_t = 10_000)]
        max_visits_per_bit: u64,
    },
}

fn read_profile(path: &Path) -> Result<RateProfile> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    RateProfile::from_hex_file_contents(&text).with_context(|| format!("parsing profile {}", path.display()))
}

fn write(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
}

fn snr_grid(start: f64, stop: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0) || !start.is_finite() || !stop.is_finite() || stop < start {
        bail!("invalid Eb/N0 grid {start}:{step}:{stop}");
    }
    let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
    // round to suppress accumulated float noise in the CSV
    Ok((0..count).map(|i| ((start + i as f64 * step) * 1e9).round() / 1e9).collect())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Reliabilities { n, ebn0_db, rate, out } => {
            let table = ReliabilityTable::compute(n, ebn0_db, rate)?;
            write(&out, &table.to_json()?)?;
        }
        Command::Construct {
            n,
            k,
            ebn0_db,
            delta,
            trials_per_iter,
            failure_target,
            seed,
            out,
            log,
            g,
            delta_fano,
            max_visits_per_bit,
        } => {
            let mut cfg = ConstructionConfig::new(n, k, ebn0_db);
            cfg.delta = delta;
            cfg.trials_per_iteration = trials_per_iter;
            cfg.failure_target = failure_target;
            cfg.rng_seed = seed;
            cfg.conv = ConvSpec::from_octal(&g)?;
            cfg.fano_delta = delta_fano;
            cfg.max_visits_per_bit = max_visits_per_bit;
            let table = ReliabilityTable::compute(n, ebn0_db, cfg.rate())?;
            let result = mc_construct(&cfg, &table)?;
            info!(
                "{} removals from an initial profile of {}",
                result.log.iterations.len(),
                result.log.initial_size
            );
            if !result.log.complexity_check.holds {
                log::warn!(
                    "constructed profile violates the prefix cutoff-rate condition at l = {:?}",
                    result.log.complexity_check.first_violation
                );
            }
            write(&out, &result.profile.to_hex_file_contents()?)?;
            if let Some(path) = log {
                write(&path, &serde_json::to_string_pretty(&result.log)?)?;
            }
        }
        Command::Profile { mode, n, k, ebn0_db, out } => {
            if k == 0 || k > n {
                bail!("need 0 < k <= n, got k = {k}, n = {n}");
            }
            let table = ReliabilityTable::compute(n, ebn0_db, k as f64 / n as f64)?;
            let profile = match mode {
                ProfileMode::Polar => polar_profile(&table, k)?,
                ProfileMode::Rmpolar => rm_polar_profile(&table, k)?,
            };
            write(&out, &profile.to_hex_file_contents()?)?;
        }
        Command::Encode { profile, g, input, out } => {
            let profile = read_profile(&profile)?;
            let conv = ConvSpec::from_octal(&g)?;
            let text = fs::read_to_string(&input).with_context(|| format!("reading {}", input.display()))?;
            let d = parse_bits(&text)?;
            let x = encode(&d, &profile, &conv)?;
            write(&out, &format!("{}\n", format_bits(&x)))?;
        }
        Command::Simulate {
            profile,
            g,
            decoder,
            delta_fano,
            list_size,
            rate_bias,
            max_visits_per_bit,
            ebn0_start,
            ebn0_stop,
            ebn0_step,
            min_errors,
            max_trials,
            seed,
            out,
        } => {
            let profile = read_profile(&profile)?;
            let conv = ConvSpec::from_octal(&g)?;
            let decoder = match decoder {
                DecoderKind::Fano => DecoderChoice::Fano {
                    delta: delta_fano,
                    bias: if rate_bias { BiasChoice::CodeRate } else { BiasChoice::CutoffRate },
                    max_visits_per_bit: Some(max_visits_per_bit),
                },
                DecoderKind::List => DecoderChoice::List { size: list_size },
            };
            let grid = snr_grid(ebn0_start, ebn0_stop, ebn0_step)?;
            let mut sim = Simulation::new(profile, conv, decoder);
            sim.stop = StopRule { min_frame_errors: min_errors, max_trials };
            sim.seed = seed;
            let mut csv = format!("{CSV_HEADER}\n");
            for (idx, &db) in grid.iter().enumerate() {
                let stats = sim.run_point(idx as u64, db)?;
                info!("{db} dB: FER {:.3e} over {} trials, ANV {:.3}", stats.fer(), stats.trials, stats.anv());
                csv.push_str(&stats.to_csv_row());
                csv.push('\n');
            }
            write(&out, &csv)?;
        }
        Command::AnalyzeFbe {
            profile,
            g,
            ebn0_db,
            failures,
            seed,
            out,
            delta_fano,
            max_trials,
            max_visits_per_bit,
        } => {
            if failures == 0 {
                bail!("--failures must be positive");
            }
            let profile = read_profile(&profile)?;
            let conv = ConvSpec::from_octal(&g)?;
            let (pairs, trials) = collect_failures(
                &profile,
                &conv,
                ebn0_db,
                delta_fano,
                max_visits_per_bit,
                failures,
                max_trials,
                seed,
            )?;
            if pairs.len() < failures {
                log::warn!("only {} failures in {trials} trials", pairs.len());
            }
            let dist = fbe_error_distribution(&pairs)?;
            info!(
                "{} failures in {trials} trials, mean post-FBE error fraction {:.4}",
                pairs.len(),
                dist.mean_fraction
            );
            let mut csv = String::from("offset,fraction,samples\n");
            for (t, (f, s)) in dist.fractions.iter().zip(&dist.samples).enumerate() {
                csv.push_str(&format!("{},{f},{s}\n", t + 1));
            }
            write(&out, &csv)?;
        }
    }
    Ok(())
}

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    if let Err(e) = run(Cli::parse()) {
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}
