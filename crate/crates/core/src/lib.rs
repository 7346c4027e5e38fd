//! Acoustically driven gas bubble as an audio effect and as a physical
//! reservoir computer.
//!
//! The numerical core is generic over the floating-point type through
//! [`Scalar`]; the `*64` aliases at the bottom of this file are what the
//! command-line front end uses.
//!
//! Module map:
//!
//! - [`physics`]: dimensional water/air parameters and the nondimensional groups.
//! - [`score`]: score parsing and square-pulse forcing signals.
//! - [`solver`]: Keller-Miksis RK4 integrator, scattered pressure and the
//!   linearised step-response oracle.
//! - [`analysis`]: power spectra, envelopes, relaxation fits, correlation.
//! - [`reservoir`]: echo state network, ridge readout, memory capacities.
//! - [`audio`]: resampling, normalisation and 16-bit PCM WAV files.
//! - [`study`]: single-pulse experiment with per-segment spectra and decay fits.
//! - [`export`]: CSV writers for every artifact type.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod audio;
mod error;
pub mod export;
pub mod physics;
pub mod reservoir;
pub mod score;
pub mod solver;
pub mod study;

use std::fmt::{Debug, Display, LowerExp};

use num_traits::{Float, FloatConst, FromPrimitive};

pub use error::{Error, Result};

/// Floating-point scalar accepted by every numerical routine in the crate.
pub trait Scalar:
    Float + FloatConst + FromPrimitive + Default + Debug + Display + LowerExp + Send + Sync + 'static
{
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// Converts an `f64` literal into `T`.
#[inline]
pub(crate) fn lit<T: Scalar>(x: f64) -> T {
    T::from_f64(x).expect("literal representable in scalar type")
}

#[inline]
pub(crate) fn to_f64<T: Scalar>(x: T) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

pub type FluidProperties64 = physics::FluidProperties<f64>;
pub type BubbleConfig64 = physics::BubbleConfig<f64>;
pub type DriveConfig64 = physics::DriveConfig<f64>;
pub type DimensionlessSet64 = physics::DimensionlessSet<f64>;
pub type PressureSignal64 = score::PressureSignal<f64>;
pub type BubbleState64 = solver::BubbleState<f64>;
pub type Trajectory64 = solver::Trajectory<f64>;
pub type SolverOptions64 = solver::SolverOptions<f64>;
pub type LinearOscillatorParams64 = solver::LinearOscillatorParams<f64>;
pub type PowerSpectrum64 = analysis::PowerSpectrum<f64>;
pub type Envelope64 = analysis::Envelope<f64>;
pub type StateMatrix64 = reservoir::StateMatrix<f64>;
pub type ReadoutModel64 = reservoir::ReadoutModel<f64>;
pub type EsnWeights64 = reservoir::EsnWeights<f64>;
pub type AudioBuffer64 = audio::AudioBuffer<f64>;

pub type FluidProperties32 = physics::FluidProperties<f32>;
pub type BubbleConfig32 = physics::BubbleConfig<f32>;
pub type DriveConfig32 = physics::DriveConfig<f32>;
pub type DimensionlessSet32 = physics::DimensionlessSet<f32>;
pub type Trajectory32 = solver::Trajectory<f32>;
