//! Polarization-adjusted convolutional (PAC) codes.
//!
//! A PAC code places `K` message bits into a length-`N` carrier word `v`
//! according to a rate profile, convolves it with a connection polynomial
//! (`u = vT`, `T` upper-triangular Toeplitz) and applies the polar transform
//! `x = u F^{⊗n}`. This crate provides:
//!
//! * [`polarization`]: Gaussian-approximation reliabilities, Bhattacharyya
//!   parameters and bit-channel cutoff rates.
//! * [`codec`]: the transmit chain and a rewindable successive-cancellation
//!   demapper.
//! * [`profiles`]: rate profiles, polar/RM-Polar baselines, hex I/O and the
//!   prefix cutoff-rate condition.
//! * [`fano`] and [`list`]: sequential and list decoders.
//! * [`construction`]: Monte-Carlo rate-profile construction driven by
//!   first-bit-error statistics.
//! * [`bench`]: BPSK/AWGN channel and the FER/ANV simulation harness.
//!
//! All bit positions in the public API are zero-based.

pub mod bench;
pub mod codec;
pub mod construction;
mod error;
pub mod fano;
pub mod list;
pub mod polarization;
pub mod profiles;

pub use codec::{ConvSpec, Demapper};
pub use error::{Error, Result};
pub use fano::{FanoConfig, FanoOutcome, FanoStatus};
pub use polarization::ReliabilityTable;
pub use profiles::RateProfile;
