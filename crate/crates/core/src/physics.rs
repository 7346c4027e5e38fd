//! Physical parameters of the liquid, the bubble and the acoustic drive, and
//! the nondimensional groups of the Keller-Miksis equation.
//!
//! Length is scaled by the equilibrium radius `R0` and time by `1/omega_p`
//! with `omega_p = 2 pi f_p`. The groups are
//!
//! ```text
//! Omega = omega_p R0 / c
//! R  = R_0  / Omega^2,   R_0  = 4 mu omega_p / (rho c^2)
//! W  = W_0  / Omega^3,   W_0  = 2 sigma omega_p / (rho c^3)
//! M  = M_0  / Omega^2,   M_0  = (P0 - Pv) / (rho c^2)
//! Me = Me_0 / Omega^2,   Me_0 = alpha / (rho c^2)
//! K  = 3 kappa
//! ```

use crate::{lit, to_f64, Error, Result, Scalar};

/// Liquid surrounding the bubble.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FluidProperties<T> {
    /// Speed of sound, m/s.
    pub sound_speed: T,
    /// Dynamic viscosity, kg/(m s).
    pub dynamic_viscosity: T,
    /// Surface tension of the gas-liquid interface, N/m.
    pub surface_tension: T,
    /// Density, kg/m^3.
    pub density: T,
    /// Saturated vapour pressure, Pa.
    pub vapor_pressure: T,
}

impl<T: Scalar> FluidProperties<T> {
    /// Water at 20 degrees C.
    pub fn water_20c() -> Self {
        Self {
            sound_speed: lit(1484.0),
            dynamic_viscosity: lit(1.0e-3),
            surface_tension: lit(7.25e-2),
            density: lit(1.0e3),
            vapor_pressure: lit(2330.0),
        }
    }

    pub fn validate(&self) -> Result<()> {
        positive("c", self.sound_speed)?;
        // mu = 0 is the inviscid limit and stays admissible.
        finite("mu", self.dynamic_viscosity)?;
        if self.dynamic_viscosity < T::zero() {
            return Err(Error::domain("mu", to_f64(self.dynamic_viscosity), "must be >= 0"));
        }
        positive("sigma", self.surface_tension)?;
        positive("rho", self.density)?;
        positive("p_v", self.vapor_pressure)?;
        Ok(())
    }
}

impl<T: Scalar> Default for FluidProperties<T> {
    fn default() -> Self {
        Self::water_20c()
    }
}

/// Gas bubble at rest.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BubbleConfig<T> {
    /// Equilibrium radius `R0`, m.
    pub equilibrium_radius: T,
    /// Static ambient pressure `P0`, Pa.
    pub static_pressure: T,
    /// Polytropic exponent of the gas.
    pub polytropic_exponent: T,
}

impl<T: Scalar> BubbleConfig<T> {
    /// 1 mm air bubble at 100 kPa with `kappa = 4/3`.
    pub fn air_1mm() -> Self {
        Self {
            equilibrium_radius: lit(1.0e-3),
            static_pressure: lit(1.0e5),
            polytropic_exponent: lit(4.0 / 3.0),
        }
    }

    pub fn validate(&self, fluid: &FluidProperties<T>) -> Result<()> {
        positive("r0", self.equilibrium_radius)?;
        positive("p0", self.static_pressure)?;
        finite("kappa", self.polytropic_exponent)?;
        if self.polytropic_exponent < T::one() {
            return Err(Error::domain("kappa", to_f64(self.polytropic_exponent), "must be >= 1"));
        }
        if self.static_pressure <= fluid.vapor_pressure {
            return Err(Error::domain(
                "p0",
                to_f64(self.static_pressure),
                "must exceed the vapour pressure p_v",
            ));
        }
        Ok(())
    }
}

impl<T: Scalar> Default for BubbleConfig<T> {
    fn default() -> Self {
        Self::air_1mm()
    }
}

/// Acoustic forcing scale and the reference frequency that sets the time unit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriveConfig<T> {
    /// Signed pressure amplitude `alpha` multiplying `P_a`, Pa.
    pub pressure_amplitude: T,
    /// Reference (pulse repetition) frequency `f_p`, Hz.
    pub reference_frequency: T,
}

impl<T: Scalar> DriveConfig<T> {
    pub fn new(pressure_amplitude: T, reference_frequency: T) -> Self {
        Self {
            pressure_amplitude,
            reference_frequency,
        }
    }

    /// Angular reference frequency `omega_p = 2 pi f_p`, rad/s.
    pub fn omega_p(&self) -> T {
        T::TAU() * self.reference_frequency
    }

    pub fn validate(&self) -> Result<()> {
        finite("alpha", self.pressure_amplitude)?;
        positive("f_p", self.reference_frequency)
    }
}

impl<T: Scalar> Default for DriveConfig<T> {
    /// `alpha = 0.2 P0` at `f_p = 100 Hz`.
    fn default() -> Self {
        Self::new(lit(2.0e4), lit(100.0))
    }
}

/// Nondimensional groups of the Keller-Miksis equation together with their
/// `Omega`-independent bases.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DimensionlessSet<T> {
    /// `Omega = omega_p R0 / c`: bubble size relative to the acoustic wavelength.
    pub omega: T,
    /// Inverse Reynolds number `R`.
    pub viscous: T,
    /// Inverse Weber number `W`.
    pub surface: T,
    /// Gas elasticity `M`.
    pub elastic: T,
    /// Forcing strength `Me`.
    pub forcing: T,
    /// `K = 3 kappa`.
    pub polytropic: T,
    pub viscous0: T,
    pub surface0: T,
    pub elastic0: T,
    pub forcing0: T,
    /// Reference angular frequency `omega_p` (rad/s) used to dimensionalise time.
    pub omega_p: T,
}

impl<T: Scalar> DimensionlessSet<T> {
    /// Polytropic exponent `kappa = K / 3`.
    pub fn kappa(&self) -> T {
        self.polytropic / lit(3.0)
    }

    /// Same groups with a different forcing amplitude, keeping everything else.
    pub fn with_forcing(mut self, fluid: &FluidProperties<T>, alpha: T) -> Self {
        let rho_c2 = fluid.density * fluid.sound_speed * fluid.sound_speed;
        self.forcing0 = alpha / rho_c2;
        self.forcing = self.forcing0 / (self.omega * self.omega);
        self
    }

    /// Converts a nondimensional time to seconds.
    pub fn to_seconds(&self, tau: T) -> T {
        tau / self.omega_p
    }

    /// Converts seconds to nondimensional time.
    pub fn to_tau(&self, seconds: T) -> T {
        seconds * self.omega_p
    }

    /// Converts an angular frequency in `tau` units to Hz.
    pub fn angular_to_hz(&self, omega_tau: T) -> T {
        omega_tau * self.omega_p / T::TAU()
    }
}

/// Evaluates the nondimensional groups from dimensional inputs.
pub fn dimensionless_groups<T: Scalar>(
    fluid: &FluidProperties<T>,
    bubble: &BubbleConfig<T>,
    drive: &DriveConfig<T>,
) -> Result<DimensionlessSet<T>> {
    fluid.validate()?;
    bubble.validate(fluid)?;
    drive.validate()?;

    let c = fluid.sound_speed;
    let rho_c2 = fluid.density * c * c;
    let omega_p = drive.omega_p();
    let omega = omega_p * bubble.equilibrium_radius / c;

    let viscous0 = lit::<T>(4.0) * fluid.dynamic_viscosity * omega_p / rho_c2;
    let surface0 = lit::<T>(2.0) * fluid.surface_tension * omega_p / (rho_c2 * c);
    let elastic0 = (bubble.static_pressure - fluid.vapor_pressure) / rho_c2;
    let forcing0 = drive.pressure_amplitude / rho_c2;

    let omega2 = omega * omega;
    Ok(DimensionlessSet {
        omega,
        viscous: viscous0 / omega2,
        surface: surface0 / (omega2 * omega),
        elastic: elastic0 / omega2,
        forcing: forcing0 / omega2,
        polytropic: lit::<T>(3.0) * bubble.polytropic_exponent,
        viscous0,
        surface0,
        elastic0,
        forcing0,
        omega_p,
    })
}

/// Small-amplitude natural frequency of the bubble in Hz,
/// `f0 = sqrt(3 kappa (P0 - Pv) / rho) / (2 pi R0)`.
pub fn natural_frequency<T: Scalar>(fluid: &FluidProperties<T>, bubble: &BubbleConfig<T>) -> Result<T> {
    fluid.validate()?;
    bubble.validate(fluid)?;
    let stiffness =
        lit::<T>(3.0) * bubble.polytropic_exponent * (bubble.static_pressure - fluid.vapor_pressure) / fluid.density;
    Ok(stiffness.sqrt() / (T::TAU() * bubble.equilibrium_radius))
}

/// Relaxation time `tau0 ~ 2 Omega / (K M_0)` of free oscillations, in `tau` units.
pub fn relaxation_time<T: Scalar>(groups: &DimensionlessSet<T>) -> Result<T> {
    let km0 = groups.polytropic * groups.elastic0;
    if !(km0 > T::zero()) {
        return Err(Error::domain("K*M0", to_f64(km0), "must be > 0"));
    }
    Ok(lit::<T>(2.0) * groups.omega / km0)
}

fn positive<T: Scalar>(field: &'static str, v: T) -> Result<()> {
    if v.is_finite() && v > T::zero() {
        Ok(())
    } else {
        Err(Error::domain(field, to_f64(v), "must be finite and > 0"))
    }
}

fn finite<T: Scalar>(field: &'static str, v: T) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(field, to_f64(v), "must be finite"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn defaults() -> DimensionlessSet<f64> {
        dimensionless_groups(
            &FluidProperties::water_20c(),
            &BubbleConfig::air_1mm(),
            &DriveConfig::default(),
        )
        .unwrap()
    }

    #[test]
    fn base_groups_match_printed_values() {
        let g = defaults();
        assert_relative_eq!(g.elastic0, 4.43e-5, max_relative = 0.01);
        assert_relative_eq!(g.viscous0, 1.14e-9, max_relative = 0.01);
        assert_relative_eq!(g.surface0, 2.79e-11, max_relative = 0.01);
        // alpha / (rho c^2) with alpha = 0.2 P0
        assert_relative_eq!(g.forcing0, 9.08e-6, max_relative = 0.01);
        assert_relative_eq!(g.polytropic, 4.0);
    }

    #[test]
    fn omega_from_definition() {
        let g = defaults();
        let expected = 2.0 * std::f64::consts::PI * 100.0 * 1e-3 / 1484.0;
        assert_relative_eq!(g.omega, expected, max_relative = 1e-14);
        assert_relative_eq!(g.omega, 4.234e-4, max_relative = 1e-3);
        assert_relative_eq!(g.elastic, g.elastic0 / (g.omega * g.omega), max_relative = 1e-14);
        assert_relative_eq!(
            g.surface,
            g.surface0 / (g.omega * g.omega * g.omega),
            max_relative = 1e-14
        );
    }

    #[test]
    fn inviscid_limit() {
        let mut fluid = FluidProperties::<f64>::water_20c();
        fluid.dynamic_viscosity = 0.0;
        let g = dimensionless_groups(&fluid, &BubbleConfig::air_1mm(), &DriveConfig::default()).unwrap();
        assert_eq!(g.viscous0, 0.0);
        assert_eq!(g.viscous, 0.0);
    }

    #[test]
    fn elasticity_dominates_for_mm_bubbles() {
        let g = defaults();
        let fluid = FluidProperties::<f64>::water_20c();
        let bubble = BubbleConfig::<f64>::air_1mm();
        // M/W is the gas pressure over the Laplace pressure, about 670 here.
        let laplace_ratio =
            (bubble.static_pressure - fluid.vapor_pressure) * bubble.equilibrium_radius / (2.0 * fluid.surface_tension);
        assert_relative_eq!(g.elastic / g.surface, laplace_ratio, max_relative = 1e-12);
        assert!(g.elastic / g.surface > 500.0);
        assert!(g.elastic / g.viscous > 1e4);
    }

    #[test]
    fn rejects_bad_inputs() {
        let mut fluid = FluidProperties::<f64>::water_20c();
        fluid.density = -1.0;
        let err = dimensionless_groups(&fluid, &BubbleConfig::air_1mm(), &DriveConfig::default()).unwrap_err();
        assert!(matches!(err, Error::Domain { field: "rho", .. }), "{err}");

        let mut bubble = BubbleConfig::<f64>::air_1mm();
        bubble.static_pressure = 2000.0;
        let err = natural_frequency(&FluidProperties::water_20c(), &bubble).unwrap_err();
        assert!(matches!(err, Error::Domain { field: "p0", .. }), "{err}");

        let drive = DriveConfig::<f64>::new(0.0, 0.0);
        let err = dimensionless_groups(&FluidProperties::water_20c(), &BubbleConfig::air_1mm(), &drive).unwrap_err();
        assert!(matches!(err, Error::Domain { field: "f_p", .. }), "{err}");
    }

    #[test]
    fn natural_frequency_values() {
        let fluid = FluidProperties::<f64>::water_20c();
        let bubble = BubbleConfig::air_1mm();
        // sqrt(4 * 97670 / 1000) / (2 pi 1e-3)
        let f0 = natural_frequency(&fluid, &bubble).unwrap();
        assert_relative_eq!(f0, 3145.84, max_relative = 1e-4);

        let mut big = bubble;
        big.equilibrium_radius *= 2.0;
        assert_relative_eq!(natural_frequency(&fluid, &big).unwrap(), f0 / 2.0, max_relative = 1e-14);

        // Consistent with the nondimensional sqrt(K M0) / Omega.
        let g = defaults();
        let omega0 = (g.polytropic * g.elastic0).sqrt() / g.omega;
        assert_relative_eq!(g.angular_to_hz(omega0), f0, max_relative = 1e-12);
    }

    #[test]
    fn relaxation_time_scaling() {
        let g = defaults();
        let tau0 = relaxation_time(&g).unwrap();
        assert_relative_eq!(tau0, 2.0 * g.omega / (4.0 * g.elastic0), max_relative = 1e-14);

        // Dimensional relaxation time does not depend on f_p.
        let fluid = FluidProperties::water_20c();
        let bubble = BubbleConfig::air_1mm();
        let g2 = dimensionless_groups(&fluid, &bubble, &DriveConfig::new(2.0e4, 250.0)).unwrap();
        let t_a = g.to_seconds(tau0);
        let t_b = g2.to_seconds(relaxation_time(&g2).unwrap());
        assert_relative_eq!(t_a, t_b, max_relative = 1e-12);
        assert_relative_eq!(relaxation_time(&g2).unwrap(), 2.5 * tau0, max_relative = 1e-12);
    }

    #[test]
    fn generic_over_f32() {
        let g = dimensionless_groups(
            &FluidProperties::<f32>::water_20c(),
            &BubbleConfig::air_1mm(),
            &DriveConfig::default(),
        )
        .unwrap();
        assert_relative_eq!(g.elastic0, 4.435e-5f32, max_relative = 1e-3);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn doubling_fp_scales_groups(fp in 10.0f64..5000.0, r0 in 1e-4f64..1e-2) {
                let fluid = FluidProperties::water_20c();
                let bubble = BubbleConfig { equilibrium_radius: r0, ..BubbleConfig::air_1mm() };
                let a = dimensionless_groups(&fluid, &bubble, &DriveConfig::new(1e4, fp)).unwrap();
                let b = dimensionless_groups(&fluid, &bubble, &DriveConfig::new(1e4, 2.0 * fp)).unwrap();
                prop_assert!((b.omega / a.omega - 2.0).abs() < 1e-12);
                prop_assert!((b.elastic / a.elastic - 0.25).abs() < 1e-12);
            }

            #[test]
            fn minnaert_product_constant(r0 in 1e-5f64..1e-2) {
                let fluid = FluidProperties::water_20c();
                let bubble = BubbleConfig { equilibrium_radius: r0, ..BubbleConfig::air_1mm() };
                let f0 = natural_frequency(&fluid, &bubble).unwrap();
                prop_assert!((f0 * r0 - 3.14584).abs() < 1e-4);
            }
        }
    }
}
