//! Single-pulse experiment: a square pressure step of amplitude `alpha`
//! held for a few relaxation times, then released. The scattered pressure
//! is analysed separately during and after the pulse.

use rustfft::FftNum;

use crate::analysis::{
    dominant_frequency, envelope, fit_relaxation, harmonic_ratio, noise_floor, power_spectrum_padded, to_db,
    PowerSpectrum, Window,
};
use crate::physics::{
    dimensionless_groups, relaxation_time, BubbleConfig, DimensionlessSet, DriveConfig, FluidProperties,
};
use crate::solver::{
    default_dtau, linear_oracle, linear_step_response, simulate, step_pulse, BubbleState, DerivativeTerm, OracleForm,
    SolverOptions, Trajectory,
};
use crate::{lit, to_f64, Error, Result, Scalar};

/// Harmonic orders reported for each segment.
pub const HARMONICS: [usize; 3] = [2, 3, 4];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PulseStudyConfig<T> {
    /// Pulse length in relaxation times; the run lasts twice as long.
    pub pulse_factor: T,
    pub steps_per_period: T,
    /// FFT length as a multiple of the segment length.
    pub zero_pad: usize,
    pub window: Window,
    pub far_field: T,
    pub derivative_term: DerivativeTerm,
}

impl<T: Scalar> Default for PulseStudyConfig<T> {
    fn default() -> Self {
        Self {
            pulse_factor: lit(4.0),
            steps_per_period: lit(SolverOptions::<T>::DEFAULT_STEPS_PER_PERIOD),
            zero_pad: 8,
            window: Window::Hann,
            far_field: lit(SolverOptions::<T>::DEFAULT_FAR_FIELD),
            derivative_term: DerivativeTerm::Dropped,
        }
    }
}

/// Spectral and envelope measurements of one oscillating segment.
#[derive(Debug, Clone, PartialEq)]
pub struct Oscillation<T> {
    pub dominant_hz: T,
    /// Envelope decay time in seconds; `None` when the envelope does not decay.
    pub relaxation_seconds: Option<T>,
    /// `harmonic_ratio` in dB for each order in [`HARMONICS`]; `None` above Nyquist.
    pub harmonics_db: Vec<Option<T>>,
    /// Median spectral power between half the fundamental and six times it,
    /// in dB relative to the fundamental peak.
    pub noise_floor_db: T,
    pub spectrum: PowerSpectrum<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PulseReport<T> {
    pub alpha: T,
    pub pulse_seconds: T,
    /// Damped natural frequency of the linearised bubble, Hz.
    pub linear_hz: T,
    pub trajectory: Trajectory<T>,
    /// Index of the first sample after the pulse.
    pub release_index: usize,
    /// `None` when the segment does not oscillate.
    pub in_pulse: Option<Oscillation<T>>,
    pub post_pulse: Option<Oscillation<T>>,
}

pub fn pulse_experiment<T: Scalar + FftNum>(
    fluid: &FluidProperties<T>,
    bubble: &BubbleConfig<T>,
    reference_frequency: T,
    alpha: T,
    cfg: &PulseStudyConfig<T>,
) -> Result<PulseReport<T>> {
    if !(Float::abs(alpha) < bubble.static_pressure) {
        return Err(Error::domain("alpha", to_f64(alpha), "|alpha| must stay below P0"));
    }
    if !(cfg.pulse_factor > T::zero()) {
        return Err(Error::domain("pulse_factor", to_f64(cfg.pulse_factor), "must be > 0"));
    }
    let groups = dimensionless_groups(fluid, bubble, &DriveConfig::new(alpha, reference_frequency))?;
    let unforced = groups.with_forcing(fluid, T::zero());
    let linear = linear_oracle(&unforced, OracleForm::Exact)?;
    if linear.overdamped {
        return Err(Error::Overdamped {
            omega0_sq: to_f64(linear.omega0 * linear.omega0),
            damping_sq: to_f64((lit::<T>(4.0) * linear.quality * linear.quality).recip()),
        });
    }
    let linear_hz = groups.angular_to_hz(linear.omega_damped);

    let dtau = default_dtau(&groups, cfg.steps_per_period);
    let pulse_steps = (cfg.pulse_factor * relaxation_time(&groups)? / dtau).round();
    let pulse_tau = pulse_steps * dtau;
    let dt = groups.to_seconds(dtau);
    let forcing = step_pulse(
        T::one(),
        groups.to_seconds(pulse_tau),
        groups.to_seconds(lit::<T>(2.0) * pulse_tau),
        dt,
    )?;
    let opts = SolverOptions {
        dtau,
        tau_end: lit::<T>(2.0) * pulse_tau,
        far_field: cfg.far_field,
        derivative_term: cfg.derivative_term,
        ..SolverOptions::for_groups(&groups, T::one())
    };
    let trajectory = simulate(&BubbleState::equilibrium(), Some(&forcing), &groups, &opts)?;
    let release_index = pulse_steps.to_usize().unwrap_or(0);

    let band = (lit::<T>(0.5) * linear_hz, lit::<T>(1.5) * linear_hz);
    let in_pulse = analyse_segment(&trajectory.p_scat[..release_index], dt, band, cfg)?;
    let post_pulse = analyse_segment(&trajectory.p_scat[release_index..], dt, band, cfg)?;
    Ok(PulseReport {
        alpha,
        pulse_seconds: groups.to_seconds(pulse_tau),
        linear_hz,
        trajectory,
        release_index,
        in_pulse,
        post_pulse,
    })
}

use num_traits::Float;

/// Relative L2 distance between a simulated unit step response and the
/// linearised closed form, over `span` relaxation times at step `dtau`.
pub fn linear_oracle_error<T: Scalar>(groups: &DimensionlessSet<T>, dtau: T, span: T) -> Result<T> {
    let params = linear_oracle(groups, OracleForm::Exact)?;
    let tau_end = span * params.tau0;
    let total = groups.to_seconds(tau_end + dtau);
    let forcing = step_pulse(T::one(), total, total, groups.to_seconds(dtau))?;
    let opts = SolverOptions {
        dtau,
        tau_end,
        ..SolverOptions::for_groups(groups, tau_end)
    };
    let traj = simulate(&BubbleState::equilibrium(), Some(&forcing), groups, &opts)?;
    let (mut num, mut den) = (T::zero(), T::zero());
    for (i, &r) in traj.r.iter().enumerate() {
        let exact = linear_step_response(&params, traj.tau(i))?;
        let d = r - T::one() - exact;
        num = num + d * d;
        den = den + exact * exact;
    }
    if !(den > T::zero()) {
        return Err(Error::ZeroVariance("linear step response"));
    }
    Ok((num / den).sqrt())
}

/// Mean-removed segment analysis; `None` for a segment without oscillation.
pub fn analyse_segment<T: Scalar + FftNum>(
    samples: &[T],
    dt: T,
    band: (T, T),
    cfg: &PulseStudyConfig<T>,
) -> Result<Option<Oscillation<T>>> {
    let n = lit::<T>(samples.len() as f64);
    let mean = samples.iter().fold(T::zero(), |s, &x| s + x) / n;
    let centred: Vec<T> = samples.iter().map(|&x| x - mean).collect();
    if centred.iter().all(|&x| x == T::zero()) {
        return Ok(None);
    }
    let spectrum = power_spectrum_padded(&centred, dt, cfg.window, samples.len() * cfg.zero_pad.max(1))?;
    let dominant_hz = match dominant_frequency(&spectrum, band.0, band.1) {
        Ok(f) => f,
        Err(Error::ZeroVariance(_)) => return Ok(None),
        Err(e) => return Err(e),
    };
    let harmonics_db = HARMONICS
        .iter()
        .map(|&k| match harmonic_ratio(&spectrum, dominant_hz, k) {
            Ok(db) => Ok(Some(db)),
            Err(Error::HarmonicOutOfRange { .. }) => Ok(None),
            Err(e) => Err(e),
        })
        .collect::<Result<Vec<_>>>()?;
    let fundamental = spectrum.peak_near(dominant_hz, lit(1.5))?;
    let floor = noise_floor(&spectrum, lit::<T>(0.5) * dominant_hz, lit::<T>(6.0) * dominant_hz)?;
    let relaxation_seconds = envelope(&centred, dt).ok().and_then(|env| {
        let (lo, hi) = env.default_fit_range();
        fit_relaxation(&env, lo, hi).ok()
    });
    Ok(Some(Oscillation {
        dominant_hz,
        relaxation_seconds,
        harmonics_db,
        noise_floor_db: to_db(floor / fundamental),
        spectrum,
    }))
}
