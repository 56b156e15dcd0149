//! Channel model, reproducible random streams and the Monte-Carlo FER/ANV
//! harness.

pub mod channel;
pub mod rng;
mod sim;

pub use sim::{
    simulate, transmit, BiasChoice, DecoderChoice, Frame, SimStats, Simulation, StopRule, CSV_HEADER,
};
