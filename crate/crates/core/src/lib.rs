//! Bound states, scattering data and oscillator spectra of a spin-1/2
//! charged particle in an Aharonov–Bohm flux tube on a cone.
//!
//! Everything is generic over the scalar type through [`Real`]; the aliases
//! at the crate root fix it to `f64` or `f32`.

// tabulated constants are quoted to full mpmath precision, and `!(x < y)` is
// the NaN-rejecting form of a bounds check
#![allow(clippy::excessive_precision, clippy::neg_cmp_op_on_partial_ord)]

pub mod bound;
pub mod channel;
pub mod error;
pub mod oscillator;
pub mod quad;
pub mod roots;
pub mod scalar;
pub mod scatter;
pub mod specfun;
pub mod verify;

pub use error::{Error, Result};
pub use scalar::Real;

pub type ChannelParamsF64 = channel::ChannelParams<f64>;
pub type EffectiveChannelF64 = channel::EffectiveChannel<f64>;
pub type ExtensionParamF64 = bound::ExtensionParam<f64>;
pub type BoundStateF64 = bound::BoundState<f64>;
pub type ScatterRecordF64 = scatter::ScatterRecord<f64>;
pub type HoParamsF64 = oscillator::HoParams<f64>;
pub type HoLevelF64 = oscillator::HoLevel<f64>;

pub type ChannelParamsF32 = channel::ChannelParams<f32>;
pub type EffectiveChannelF32 = channel::EffectiveChannel<f32>;
pub type ExtensionParamF32 = bound::ExtensionParam<f32>;
pub type BoundStateF32 = bound::BoundState<f32>;
pub type ScatterRecordF32 = scatter::ScatterRecord<f32>;
pub type HoParamsF32 = oscillator::HoParams<f32>;
pub type HoLevelF32 = oscillator::HoLevel<f32>;
