//! The bubble as a single-node reservoir: bits drive square pressure
//! pulses, and the scattered pressure sampled at `N_v` points per symbol
//! slot forms the state vector.

use super::capacity::{memory_capacity, CapacityReport};
use super::StateMatrix;
use crate::physics::{
    dimensionless_groups, relaxation_time, BubbleConfig, DimensionlessSet, DriveConfig, FluidProperties,
};
use crate::score::{encode_binary, BinarySequence, PressureSignal};
use crate::solver::{default_dtau, simulate, BubbleState, SolverOptions, Trajectory};
use crate::{lit, to_f64, Error, Result, Scalar};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BubbleReservoirConfig<T> {
    /// Pulse amplitude in Pa.
    pub alpha: T,
    /// Virtual neurons `N_v` per symbol.
    pub virtual_neurons: usize,
    /// Symbol slot length in units of the relaxation time (`c_tau`).
    pub slot_factor: T,
    pub beta: T,
    pub k_max: usize,
    pub n_bits: usize,
    pub seed: u64,
    /// Solver resolution: the step is the largest that divides the slot
    /// evenly while giving at least this many steps per natural period.
    pub steps_per_period: T,
    pub far_field: T,
}

impl<T: Scalar> Default for BubbleReservoirConfig<T> {
    fn default() -> Self {
        Self {
            alpha: lit(1e4),
            virtual_neurons: 20,
            slot_factor: T::one(),
            beta: lit(1e-8),
            k_max: 15,
            n_bits: 2000,
            seed: 1,
            steps_per_period: lit(50.0),
            far_field: lit(SolverOptions::<T>::DEFAULT_FAR_FIELD),
        }
    }
}

impl<T: Scalar> BubbleReservoirConfig<T> {
    pub fn validate(&self) -> Result<()> {
        if self.virtual_neurons == 0 {
            return Err(Error::domain("N_v", 0.0, "need at least one virtual neuron"));
        }
        if !(self.slot_factor > T::zero()) {
            return Err(Error::domain("c_tau", to_f64(self.slot_factor), "must be > 0"));
        }
        if !(self.beta >= T::zero()) {
            return Err(Error::domain("beta", to_f64(self.beta), "must be >= 0"));
        }
        if self.k_max == 0 {
            return Err(Error::domain("k_max", 0.0, "must be >= 1"));
        }
        if self.n_bits == 0 {
            return Err(Error::domain("n_bits", 0.0, "must be >= 1"));
        }
        if !(self.steps_per_period >= lit(SolverOptions::<T>::MIN_STEPS_PER_PERIOD)) {
            return Err(Error::domain(
                "steps_per_period",
                to_f64(self.steps_per_period),
                "must be >= 40",
            ));
        }
        Ok(())
    }
}

/// Output of one bubble-reservoir run.
#[derive(Debug, Clone, PartialEq)]
pub struct BubbleReservoir<T> {
    pub bits: Vec<u8>,
    pub slot_tau: T,
    pub dtau: T,
    pub states: StateMatrix<T>,
    pub report: CapacityReport<T>,
}

/// Square-pulse forcing for `bits` with slots of `slot_tau`, sampled every `dtau`.
pub fn bits_to_forcing<T: Scalar>(
    bits: &[u8],
    slot_tau: T,
    dtau: T,
    groups: &DimensionlessSet<T>,
) -> Result<PressureSignal<T>> {
    let seq = BinarySequence::new(bits.to_vec(), groups.to_seconds(slot_tau))?;
    encode_binary(&seq, groups.to_seconds(dtau))
}

/// Samples the scattered pressure at the midpoints of `n_v` equal
/// sub-intervals of each slot, linearly interpolating between solver steps.
pub fn harvest_virtual_neurons<T: Scalar>(
    traj: &Trajectory<T>,
    inputs: &[T],
    slot_tau: T,
    n_v: usize,
) -> Result<StateMatrix<T>> {
    if n_v == 0 {
        return Err(Error::domain("N_v", 0.0, "need at least one virtual neuron"));
    }
    if !(slot_tau > T::zero()) {
        return Err(Error::domain("slot", to_f64(slot_tau), "must be > 0"));
    }
    let needed = traj.tau_start + slot_tau * lit(inputs.len() as f64);
    if traj.tau_end() < needed - traj.dtau * lit(0.5) {
        return Err(Error::TooShort {
            what: "trajectory steps for symbol slots",
            needed: to_f64((needed - traj.tau_start) / traj.dtau).ceil() as usize + 1,
            got: traj.len(),
        });
    }
    let sub = slot_tau / lit(n_v as f64);
    let states = (0..inputs.len())
        .map(|n| {
            let start = traj.tau_start + slot_tau * lit(n as f64);
            (0..n_v)
                .map(|j| {
                    let t = start + sub * (lit::<T>(j as f64) + lit(0.5));
                    traj.p_scat_at(t).ok_or(Error::TooShort {
                        what: "trajectory for virtual neuron sample",
                        needed: n + 1,
                        got: n,
                    })
                })
                .collect::<Result<Vec<T>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    StateMatrix::assemble(inputs, &states)
}

/// Solver step for a slot: an integer number of steps per slot, at least
/// `steps_per_period` per natural period.
pub(crate) fn slot_step<T: Scalar>(groups: &DimensionlessSet<T>, slot_tau: T, steps_per_period: T) -> T {
    let max_step = default_dtau(groups, steps_per_period);
    let steps = (slot_tau / max_step).ceil().max(T::one());
    slot_tau / steps
}

/// Drives the bubble with a seeded random bit stream and evaluates the
/// STM and parity capacities of the harvested states.
pub fn run_bubble_memory<T: Scalar>(
    fluid: &FluidProperties<T>,
    bubble: &BubbleConfig<T>,
    reference_frequency: T,
    cfg: &BubbleReservoirConfig<T>,
) -> Result<BubbleReservoir<T>> {
    cfg.validate()?;
    let groups = dimensionless_groups(fluid, bubble, &DriveConfig::new(cfg.alpha, reference_frequency))?;
    let bits = BinarySequence::<T>::random(cfg.n_bits, cfg.seed, T::one())?.bits;
    run_bits(&groups, &bits, cfg)
}

/// As [`run_bubble_memory`] for a given bit stream and prepared groups.
pub fn run_bits<T: Scalar>(
    groups: &DimensionlessSet<T>,
    bits: &[u8],
    cfg: &BubbleReservoirConfig<T>,
) -> Result<BubbleReservoir<T>> {
    cfg.validate()?;
    let slot_tau = cfg.slot_factor * relaxation_time(groups)?;
    let dtau = slot_step(groups, slot_tau, cfg.steps_per_period);
    let forcing = bits_to_forcing(bits, slot_tau, dtau, groups)?;
    let opts = SolverOptions {
        dtau,
        tau_end: slot_tau * lit(bits.len() as f64),
        far_field: cfg.far_field,
        ..SolverOptions::for_groups(groups, T::one())
    };
    let traj = simulate(&BubbleState::equilibrium(), Some(&forcing), groups, &opts)?;
    let inputs: Vec<T> = bits.iter().map(|&b| lit(b as f64)).collect();
    let states = harvest_virtual_neurons(&traj, &inputs, slot_tau, cfg.virtual_neurons)?;
    let report = memory_capacity(&states, bits, cfg.beta, cfg.k_max)?;
    Ok(BubbleReservoir {
        bits: bits.to_vec(),
        slot_tau,
        dtau,
        states,
        report,
    })
}
