//! Behavioral model of an event-camera pixel array.
//!
//! Each pixel log-compresses incident illuminance, low-pass filters it
//! through two bias-dependent poles, and emits ON/OFF events whenever the
//! filtered log signal moves a threshold away from its last reset level.
//! Bias currents set the thresholds, the bandwidth, the refractory period
//! and the noise floor, so the same scene produces very different event
//! streams at different operating points.
//!
//! The crate is `no_std` (with `alloc`) so the model can run inside
//! firmware test benches as well as on the host. IO, file formats and the
//! command-line front end live in the companion `evpix` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod array;
pub mod bias;
pub mod characterize;
pub mod params;
pub mod pixel;
pub mod recommend;
pub mod rng;
pub mod stimulus;

pub use array::{ArrayConfig, ArrayError, MismatchField, SimOutput};
pub use bias::{
    apply_onoff_balance_tweak, apply_threshold_tweak, derive, refractory_from_tweak,
    thresholds_from_biases, BiasConfig, BiasError, DerivedPixelParams,
};
pub use params::PixelParams;
pub use pixel::{Event, PixelState, Polarity};
pub use stimulus::{Stimulus, StimulusError};
