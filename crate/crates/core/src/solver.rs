//! Keller-Miksis bubble dynamics in nondimensional form, integrated with a
//! fixed-step classic Runge-Kutta scheme.
//!
//! With `r = R/R0`, `tau = omega_p t` and primes for `d/dtau`:
//!
//! ```text
//! r''[(1 - Omega r') r + Omega R] = (Omega r' - 3) r'^2 / 2 - (W + R r') / r
//!     + (M + W) [1 + (1 - 3 kappa) Omega r'] / r^(3 kappa)
//!     - (1 + Omega r') (M + Me P_a) - Me Omega r P_a'
//! ```
//!
//! Forcing is held constant across each step (zero-order hold sampled at
//! the step midpoint), so square-pulse edges land on step boundaries and the
//! scheme stays fourth order between edges.

use crate::physics::DimensionlessSet;
use crate::score::PressureSignal;
use crate::{lit, to_f64, Error, Result, Scalar};

const SINGULAR_EPS: f64 = 1e-9;

/// Instantaneous bubble state in nondimensional variables.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BubbleState<T> {
    pub r: T,
    pub r_dot: T,
    pub tau: T,
}

impl<T: Scalar> BubbleState<T> {
    pub fn equilibrium() -> Self {
        Self {
            r: T::one(),
            r_dot: T::zero(),
            tau: T::zero(),
        }
    }

    pub fn displaced(r: T) -> Self {
        Self {
            r,
            ..Self::equilibrium()
        }
    }
}

impl<T: Scalar> Default for BubbleState<T> {
    fn default() -> Self {
        Self::equilibrium()
    }
}

/// How the `-Me Omega r P_a'` term is realised for sampled forcing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DerivativeTerm {
    /// Omit the term; its size is O(Omega) relative to the direct forcing.
    #[default]
    Dropped,
    /// First difference of the held forcing divided by the step, which
    /// concentrates each edge impulse into one step.
    FirstDifference,
}

impl std::str::FromStr for DerivativeTerm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "dropped" | "off" | "none" => Ok(DerivativeTerm::Dropped),
            "first-difference" | "first_difference" | "on" => Ok(DerivativeTerm::FirstDifference),
            other => Err(format!("unknown derivative-term mode `{other}`")),
        }
    }
}

impl std::fmt::Display for DerivativeTerm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            DerivativeTerm::Dropped => "dropped",
            DerivativeTerm::FirstDifference => "first-difference",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions<T> {
    /// Step in `tau`.
    pub dtau: T,
    /// Integration end time in `tau`.
    pub tau_end: T,
    /// Far-field observation distance in units of `R0`.
    pub far_field: T,
    pub derivative_term: DerivativeTerm,
    /// Integration aborts once `r` falls below this radius.
    pub collapse_radius: T,
}

impl<T: Scalar> SolverOptions<T> {
    pub const DEFAULT_FAR_FIELD: f64 = 100.0;
    pub const DEFAULT_STEPS_PER_PERIOD: f64 = 100.0;
    pub const MIN_STEPS_PER_PERIOD: f64 = 40.0;

    /// Step of one hundredth of the natural period, `h = 100`, equilibrium guard `1e-3`.
    pub fn for_groups(groups: &DimensionlessSet<T>, tau_end: T) -> Self {
        Self {
            dtau: default_dtau(groups, lit(Self::DEFAULT_STEPS_PER_PERIOD)),
            tau_end,
            far_field: lit(Self::DEFAULT_FAR_FIELD),
            derivative_term: DerivativeTerm::Dropped,
            collapse_radius: lit(1e-3),
        }
    }
}

/// Step that resolves the natural period with `steps_per_period` steps.
pub fn default_dtau<T: Scalar>(groups: &DimensionlessSet<T>, steps_per_period: T) -> T {
    T::TAU() / (natural_omega(groups) * steps_per_period)
}

/// Undamped small-amplitude angular frequency `sqrt(A / (1 + Omega R))` in `tau` units.
pub fn natural_omega<T: Scalar>(groups: &DimensionlessSet<T>) -> T {
    (stiffness(groups) / (T::one() + groups.omega * groups.viscous)).sqrt()
}

/// `A = (3W + 3M) kappa - W`, the linear restoring coefficient.
fn stiffness<T: Scalar>(g: &DimensionlessSet<T>) -> T {
    (lit::<T>(3.0) * g.surface + lit::<T>(3.0) * g.elastic) * g.kappa() - g.surface
}

/// Sampled bubble response.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<T> {
    pub tau_start: T,
    pub dtau: T,
    /// `omega_p` in rad/s, for converting `tau` to seconds.
    pub omega_p: T,
    pub r: Vec<T>,
    pub r_dot: Vec<T>,
    /// Nondimensional scattered pressure `(r/h)(r r'' + 2 r'^2)`.
    pub p_scat: Vec<T>,
}

impl<T: Scalar> Trajectory<T> {
    pub fn len(&self) -> usize {
        self.r.len()
    }

    pub fn is_empty(&self) -> bool {
        self.r.is_empty()
    }

    pub fn tau(&self, i: usize) -> T {
        self.tau_start + lit::<T>(i as f64) * self.dtau
    }

    pub fn tau_end(&self) -> T {
        self.tau(self.len().saturating_sub(1))
    }

    pub fn seconds(&self, i: usize) -> T {
        self.tau(i) / self.omega_p
    }

    pub fn dt_seconds(&self) -> T {
        self.dtau / self.omega_p
    }

    /// Linear interpolation of the scattered pressure at `tau`.
    pub fn p_scat_at(&self, tau: T) -> Option<T> {
        let x = (tau - self.tau_start) / self.dtau;
        if x < T::zero() {
            return None;
        }
        let i = x.floor().to_usize()?;
        let frac = x - lit(i as f64);
        match (self.p_scat.get(i), self.p_scat.get(i + 1)) {
            (Some(&a), Some(&b)) => Some(a + (b - a) * frac),
            (Some(&a), None) if frac <= lit(1e-9) => Some(a),
            _ => None,
        }
    }
}

/// Returns `(r', r'')` for the given state and forcing value/derivative.
pub fn km_rhs<T: Scalar>(state: &BubbleState<T>, p_a: T, p_a_dot: T, groups: &DimensionlessSet<T>) -> Result<(T, T)> {
    let BubbleState { r, r_dot: v, tau } = *state;
    let g = groups;
    let coef = (T::one() - g.omega * v) * r + g.omega * g.viscous;
    if !(coef.abs() > lit(SINGULAR_EPS)) {
        return Err(Error::Singularity {
            tau: to_f64(tau),
            r: to_f64(r),
            r_dot: to_f64(v),
        });
    }

    let half = lit::<T>(0.5);
    let gas = (T::one() + (T::one() - g.polytropic) * g.omega * v) * r.powf(-g.polytropic);
    // (M+W) gas - W/r - (1 + Omega v) M, grouped so that the equilibrium
    // r = 1, v = 0 cancels exactly in floating point.
    let pressure = g.elastic * (gas - T::one() - g.omega * v) + g.surface * (gas - r.recip());
    let rhs = (g.omega * v - lit(3.0)) * v * v * half - g.viscous * v / r + pressure
        - (T::one() + g.omega * v) * g.forcing * p_a
        - g.forcing * g.omega * r * p_a_dot;
    Ok((v, rhs / coef))
}

/// Nondimensional far-field scattered pressure `(r/h)(r r'' + 2 r'^2)`.
pub fn scattered_pressure<T: Scalar>(r: T, r_dot: T, r_ddot: T, h: T) -> Result<T> {
    if !(h > T::zero()) {
        return Err(Error::domain("h", to_f64(h), "far-field distance must be > 0"));
    }
    Ok(r / h * (r * r_ddot + lit::<T>(2.0) * r_dot * r_dot))
}

/// One classic RK4 step for a two-component autonomous-in-step system.
pub fn rk4_step<T, F>(y: [T; 2], h: T, mut f: F) -> Result<[T; 2]>
where
    T: Scalar,
    F: FnMut([T; 2]) -> Result<[T; 2]>,
{
    let half = lit::<T>(0.5);
    let two = lit::<T>(2.0);
    let k1 = f(y)?;
    let k2 = f([y[0] + half * h * k1[0], y[1] + half * h * k1[1]])?;
    let k3 = f([y[0] + half * h * k2[0], y[1] + half * h * k2[1]])?;
    let k4 = f([y[0] + h * k3[0], y[1] + h * k3[1]])?;
    let sixth = h / lit(6.0);
    Ok([
        y[0] + sixth * (k1[0] + two * k2[0] + two * k3[0] + k4[0]),
        y[1] + sixth * (k1[1] + two * k2[1] + two * k3[1] + k4[1]),
    ])
}

/// Integrates the Keller-Miksis equation from `initial` up to `opts.tau_end`.
///
/// `forcing` is interpreted on its own sample grid (seconds, converted with
/// `omega_p`) and must cover the whole run; `None` means no forcing.
pub fn simulate<T: Scalar>(
    initial: &BubbleState<T>,
    forcing: Option<&PressureSignal<T>>,
    groups: &DimensionlessSet<T>,
    opts: &SolverOptions<T>,
) -> Result<Trajectory<T>> {
    let dtau = opts.dtau;
    if !(dtau > T::zero() && dtau.is_finite()) {
        return Err(Error::domain("dtau", to_f64(dtau), "must be finite and > 0"));
    }
    if !(opts.tau_end > T::zero()) {
        return Err(Error::domain("tau_end", to_f64(opts.tau_end), "must be > 0"));
    }
    if !(opts.far_field > T::zero()) {
        return Err(Error::domain(
            "h",
            to_f64(opts.far_field),
            "far-field distance must be > 0",
        ));
    }
    if !(initial.r > opts.collapse_radius) {
        return Err(Error::domain(
            "r",
            to_f64(initial.r),
            "initial radius must exceed the collapse guard",
        ));
    }
    let max_dtau = default_dtau(groups, lit(SolverOptions::<T>::MIN_STEPS_PER_PERIOD));
    if dtau > max_dtau {
        return Err(Error::domain(
            "dtau",
            to_f64(dtau),
            "fewer than 40 steps per natural period",
        ));
    }

    let steps = (opts.tau_end / dtau).round().to_usize().unwrap_or(0).max(1);
    let held = hold_forcing(forcing, groups, initial.tau, dtau, steps)?;

    let mut r = Vec::with_capacity(steps + 1);
    let mut r_dot = Vec::with_capacity(steps + 1);
    let mut p_scat = Vec::with_capacity(steps + 1);

    let mut y = [initial.r, initial.r_dot];
    let mut prev_pa = T::zero();
    for i in 0..=steps {
        let tau = initial.tau + lit::<T>(i as f64) * dtau;
        let pa = held[i.min(steps - 1)];
        let pa_dot = match opts.derivative_term {
            DerivativeTerm::Dropped => T::zero(),
            DerivativeTerm::FirstDifference if i < steps => (pa - prev_pa) / dtau,
            DerivativeTerm::FirstDifference => T::zero(),
        };

        let state = BubbleState {
            r: y[0],
            r_dot: y[1],
            tau,
        };
        let (_, acc) = km_rhs(&state, pa, pa_dot, groups)?;
        r.push(y[0]);
        r_dot.push(y[1]);
        p_scat.push(scattered_pressure(y[0], y[1], acc, opts.far_field)?);
        if i == steps {
            break;
        }

        y = rk4_step(y, dtau, |[rr, vv]| {
            let s = BubbleState { r: rr, r_dot: vv, tau };
            km_rhs(&s, pa, pa_dot, groups).map(|(a, b)| [a, b])
        })?;
        if !(y[0] > opts.collapse_radius) || !y[1].is_finite() {
            return Err(Error::Collapse {
                tau: to_f64(tau + dtau),
                r: to_f64(y[0]),
            });
        }
        prev_pa = pa;
    }

    Ok(Trajectory {
        tau_start: initial.tau,
        dtau,
        omega_p: groups.omega_p,
        r,
        r_dot,
        p_scat,
    })
}

/// Forcing value for each integration step.
fn hold_forcing<T: Scalar>(
    forcing: Option<&PressureSignal<T>>,
    groups: &DimensionlessSet<T>,
    tau_start: T,
    dtau: T,
    steps: usize,
) -> Result<Vec<T>> {
    let Some(signal) = forcing else {
        return Ok(vec![T::zero(); steps]);
    };
    let sample_tau = groups.to_tau(signal.dt_seconds);
    // One solver step per forcing sample at most, with rounding slack.
    if dtau > sample_tau * lit(1.0 + 1e-9) {
        return Err(Error::domain(
            "dtau",
            to_f64(dtau),
            "coarser than the forcing sample spacing",
        ));
    }
    let covered = groups.to_tau(signal.duration_seconds());
    let needed = tau_start + lit::<T>(steps as f64) * dtau;
    if covered < needed - sample_tau {
        return Err(Error::ForcingTooShort {
            covered: to_f64(covered),
            needed: to_f64(needed),
        });
    }
    let last = signal.samples.last().copied().unwrap_or_else(T::zero);
    Ok((0..steps)
        .map(|i| {
            let mid = tau_start + (lit::<T>(i as f64) + lit(0.5)) * dtau;
            let idx = (mid / sample_tau).floor().to_usize().unwrap_or(0);
            signal.samples.get(idx).copied().unwrap_or(last)
        })
        .collect())
}

/// Closed-form coefficients of the linearised step response.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearOscillatorParams<T> {
    pub quality: T,
    /// Forcing scale `Lambda`.
    pub lambda: T,
    /// Undamped natural frequency `omega0` (rad per `tau`).
    pub omega0: T,
    /// Damped natural frequency `omega'`; for an overdamped set this holds
    /// `sqrt(1/(4Q^2) - omega0^2)` and `overdamped` is true.
    pub omega_damped: T,
    /// Relaxation time `tau0 = 2Q`.
    pub tau0: T,
    pub overdamped: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OracleForm {
    /// Full linearisation coefficients.
    #[default]
    Exact,
    /// Leading order for `M >> W, R`: `Q = Omega/(K M0)`, `Lambda = Me0/Omega^2`,
    /// `omega0 = sqrt(K M0)/Omega`.
    Approximate,
}

pub fn linear_oracle<T: Scalar>(groups: &DimensionlessSet<T>, form: OracleForm) -> Result<LinearOscillatorParams<T>> {
    let g = groups;
    let km0 = g.polytropic * g.elastic0;
    if !(km0 > T::zero()) {
        return Err(Error::domain("K*M0", to_f64(km0), "must be > 0"));
    }
    let (quality, lambda, omega0) = match form {
        OracleForm::Exact => {
            let a = stiffness(g);
            let inertia = T::one() + g.omega * g.viscous;
            let damping = g.viscous + g.forcing * g.omega + a * g.omega;
            (inertia / damping, g.forcing / inertia, (a / inertia).sqrt())
        }
        OracleForm::Approximate => (g.omega / km0, g.forcing0 / (g.omega * g.omega), km0.sqrt() / g.omega),
    };
    let damping_sq = (lit::<T>(4.0) * quality * quality).recip();
    let omega0_sq = omega0 * omega0;
    let overdamped = omega0_sq <= damping_sq;
    Ok(LinearOscillatorParams {
        quality,
        lambda,
        omega0,
        omega_damped: (omega0_sq - damping_sq).abs().sqrt(),
        tau0: lit::<T>(2.0) * quality,
        overdamped,
    })
}

/// Deviation `r1 = r - 1` of the linearised bubble after a unit step in
/// forcing at `tau = 0`, starting from rest.
pub fn linear_step_response<T: Scalar>(params: &LinearOscillatorParams<T>, tau: T) -> Result<T> {
    if params.overdamped {
        return Err(Error::Overdamped {
            omega0_sq: to_f64(params.omega0 * params.omega0),
            damping_sq: to_f64((lit::<T>(4.0) * params.quality * params.quality).recip()),
        });
    }
    if tau < T::zero() {
        return Err(Error::domain("tau", to_f64(tau), "must be >= 0"));
    }
    let LinearOscillatorParams {
        quality: q,
        lambda,
        omega0,
        omega_damped: wd,
        tau0,
        ..
    } = *params;
    let w02 = omega0 * omega0;
    let transient = (-tau / tau0).exp()
        * (lambda * (wd * tau).sin() / (lit::<T>(2.0) * q * w02 * wd) + lambda * (wd * tau).cos() / w02);
    Ok(transient - lambda / w02)
}

/// Single square pulse of height `amplitude` lasting `pulse_seconds`,
/// followed by silence up to `total_seconds`.
pub fn step_pulse<T: Scalar>(amplitude: T, pulse_seconds: T, total_seconds: T, dt: T) -> Result<PressureSignal<T>> {
    if !(pulse_seconds > T::zero()) {
        return Err(Error::domain("tau_p", to_f64(pulse_seconds), "must be > 0"));
    }
    if !(dt > T::zero()) {
        return Err(Error::domain("dt", to_f64(dt), "must be > 0"));
    }
    let on = (pulse_seconds / dt).round().to_usize().unwrap_or(0);
    let total = (total_seconds / dt).round().to_usize().unwrap_or(0).max(on);
    let mut samples = vec![T::zero(); total];
    samples[..on].iter_mut().for_each(|s| *s = amplitude);
    PressureSignal::new(samples, dt)
}
