//! Run configuration: one TOML file with a section per subsystem, plus
//! `section.key=value` overrides from the command line.

use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use bubble_core::analysis::Window;
use bubble_core::physics::{BubbleConfig, DriveConfig, FluidProperties};
use bubble_core::reservoir::BubbleReservoirConfig;
use bubble_core::score::{Polarity, PulseOptions};
use bubble_core::solver::DerivativeTerm;
use bubble_core::study::PulseStudyConfig;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub physics: PhysicsSection,
    pub encoding: EncodingSection,
    pub solver: SolverSection,
    pub reservoir: ReservoirSection,
    pub audio: AudioSection,
    pub step: StepSection,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PhysicsSection {
    /// Sound speed, m/s.
    pub c: f64,
    /// Dynamic viscosity, Pa s.
    pub mu: f64,
    /// Surface tension, N/m.
    pub sigma: f64,
    /// Density, kg/m^3.
    pub rho: f64,
    /// Vapour pressure, Pa.
    pub p_v: f64,
    /// Equilibrium radius, m.
    pub r0: f64,
    /// Static pressure, Pa.
    pub p0: f64,
    pub kappa: f64,
    /// Pulse amplitude for `render`, Pa.
    pub alpha: f64,
    /// Reference frequency, Hz.
    pub f_p: f64,
}

impl Default for PhysicsSection {
    fn default() -> Self {
        let fluid = FluidProperties::<f64>::water_20c();
        let bubble = BubbleConfig::<f64>::air_1mm();
        let drive = DriveConfig::<f64>::default();
        Self {
            c: fluid.sound_speed,
            mu: fluid.dynamic_viscosity,
            sigma: fluid.surface_tension,
            rho: fluid.density,
            p_v: fluid.vapor_pressure,
            r0: bubble.equilibrium_radius,
            p0: bubble.static_pressure,
            kappa: bubble.polytropic_exponent,
            alpha: drive.pressure_amplitude,
            f_p: drive.reference_frequency,
        }
    }
}

impl PhysicsSection {
    pub fn fluid(&self) -> FluidProperties<f64> {
        FluidProperties {
            sound_speed: self.c,
            dynamic_viscosity: self.mu,
            surface_tension: self.sigma,
            density: self.rho,
            vapor_pressure: self.p_v,
        }
    }

    pub fn bubble(&self) -> BubbleConfig<f64> {
        BubbleConfig {
            equilibrium_radius: self.r0,
            static_pressure: self.p0,
            polytropic_exponent: self.kappa,
        }
    }

    pub fn drive(&self) -> DriveConfig<f64> {
        DriveConfig::new(self.alpha, self.f_p)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EncodingSection {
    pub duty: f64,
    pub articulation: f64,
    /// `positive` or `negative`.
    pub polarity: String,
}

impl Default for EncodingSection {
    fn default() -> Self {
        let opts = PulseOptions::default();
        Self {
            duty: opts.duty,
            articulation: opts.articulation,
            polarity: "positive".into(),
        }
    }
}

impl EncodingSection {
    pub fn pulse_options(&self) -> Result<PulseOptions> {
        let polarity: Polarity = self.polarity.parse().map_err(|e| anyhow!("encoding.polarity: {e}"))?;
        let opts = PulseOptions {
            polarity,
            duty: self.duty,
            articulation: self.articulation,
        };
        opts.validate()?;
        Ok(opts)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverSection {
    /// Steps per natural period; ignored when `dtau` or `dt` is set.
    pub steps_per_period: f64,
    /// Explicit step in nondimensional time.
    pub dtau: Option<f64>,
    /// Explicit step in seconds.
    pub dt: Option<f64>,
    /// Far-field distance in equilibrium radii.
    pub h: f64,
    /// `dropped` or `first-difference`.
    pub derivative_term: String,
}

impl Default for SolverSection {
    fn default() -> Self {
        Self {
            steps_per_period: 100.0,
            dtau: None,
            dt: None,
            h: 100.0,
            derivative_term: DerivativeTerm::default().to_string(),
        }
    }
}

impl SolverSection {
    pub fn derivative_term(&self) -> Result<DerivativeTerm> {
        self.derivative_term
            .parse()
            .map_err(|e| anyhow!("solver.derivative_term: {e}"))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ReservoirSection {
    /// Virtual neurons per symbol.
    pub n_v: usize,
    /// Symbol length in relaxation times.
    pub c_tau: f64,
    pub beta: f64,
    pub k_max: usize,
    pub seed: u64,
    pub n_bits: usize,
    /// Bit pulse amplitude, Pa.
    pub alpha: f64,
    pub steps_per_period: f64,
}

impl Default for ReservoirSection {
    fn default() -> Self {
        let d = BubbleReservoirConfig::<f64>::default();
        Self {
            n_v: d.virtual_neurons,
            c_tau: d.slot_factor,
            beta: d.beta,
            k_max: d.k_max,
            seed: d.seed,
            n_bits: d.n_bits,
            alpha: d.alpha,
            steps_per_period: d.steps_per_period,
        }
    }
}

impl ReservoirSection {
    pub fn to_core(&self, h: f64) -> BubbleReservoirConfig<f64> {
        BubbleReservoirConfig {
            alpha: self.alpha,
            virtual_neurons: self.n_v,
            slot_factor: self.c_tau,
            beta: self.beta,
            k_max: self.k_max,
            n_bits: self.n_bits,
            seed: self.seed,
            steps_per_period: self.steps_per_period,
            far_field: h,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AudioSection {
    pub rate: u32,
    pub peak: f64,
}

impl Default for AudioSection {
    fn default() -> Self {
        Self {
            rate: bubble_core::audio::DEFAULT_SAMPLE_RATE,
            peak: 0.9,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StepSection {
    /// Pulse amplitudes, Pa.
    pub amplitudes: Vec<f64>,
    /// Pulse length in relaxation times.
    pub pulse_factor: f64,
    pub zero_pad: usize,
    /// `hann` or `rectangular`.
    pub window: String,
}

impl Default for StepSection {
    fn default() -> Self {
        let d = PulseStudyConfig::<f64>::default();
        Self {
            amplitudes: vec![-2.0e4, 0.0, 2.0e4],
            pulse_factor: d.pulse_factor,
            zero_pad: d.zero_pad,
            window: d.window.to_string(),
        }
    }
}

impl RunConfig {
    /// Loads `path` (or the defaults) and applies `overrides` in order.
    pub fn load(path: Option<&Path>, overrides: &[String]) -> Result<Self> {
        let mut table = match path {
            Some(p) => {
                let text = std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
                text.parse::<toml::Table>()
                    .with_context(|| format!("parsing {}", p.display()))?
            }
            None => toml::Table::new(),
        };
        for o in overrides {
            apply_override(&mut table, o)?;
        }
        let cfg: RunConfig = toml::Value::Table(table).try_into().context("invalid configuration")?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Checks every section against the preconditions of the code that consumes it.
    pub fn validate(&self) -> Result<()> {
        let fluid = self.physics.fluid();
        fluid.validate().context("[physics]")?;
        self.physics.bubble().validate(&fluid).context("[physics]")?;
        self.physics.drive().validate().context("[physics]")?;
        if !(self.physics.alpha.abs() < self.physics.p0) {
            bail!("[physics] alpha must satisfy |alpha| < p0");
        }
        self.encoding.pulse_options().context("[encoding]")?;
        if !(self.solver.steps_per_period >= 40.0) {
            bail!("[solver] steps_per_period must be >= 40");
        }
        if self.solver.dtau.is_some() && self.solver.dt.is_some() {
            bail!("[solver] set at most one of dtau and dt");
        }
        for (name, v) in [("dtau", self.solver.dtau), ("dt", self.solver.dt)] {
            if let Some(v) = v {
                if !(v > 0.0 && v.is_finite()) {
                    bail!("[solver] {name} must be finite and > 0");
                }
            }
        }
        if !(self.solver.h > 0.0) {
            bail!("[solver] h must be > 0");
        }
        self.solver.derivative_term()?;
        self.reservoir
            .to_core(self.solver.h)
            .validate()
            .context("[reservoir]")?;
        if !(self.reservoir.alpha.abs() < self.physics.p0) {
            bail!("[reservoir] alpha must satisfy |alpha| < p0");
        }
        if self.audio.rate == 0 {
            bail!("[audio] rate must be > 0");
        }
        if !(self.audio.peak > 0.0 && self.audio.peak <= 1.0) {
            bail!("[audio] peak must lie in (0, 1]");
        }
        if let Some(a) = self.step.amplitudes.iter().find(|a| !(a.abs() < self.physics.p0)) {
            bail!("[step] amplitude {a} Pa outside (-p0, p0)");
        }
        if !(self.step.pulse_factor > 0.0) {
            bail!("[step] pulse_factor must be > 0");
        }
        self.step_window()?;
        Ok(())
    }

    pub fn step_window(&self) -> Result<Window> {
        self.step.window.parse().map_err(|e| anyhow!("step.window: {e}"))
    }

    pub fn pulse_study(&self) -> Result<PulseStudyConfig<f64>> {
        Ok(PulseStudyConfig {
            pulse_factor: self.step.pulse_factor,
            steps_per_period: self.solver.steps_per_period,
            zero_pad: self.step.zero_pad,
            window: self.step_window()?,
            far_field: self.solver.h,
            derivative_term: self.solver.derivative_term()?,
        })
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serialises")
    }

    /// SHA-256 of the effective configuration in canonical TOML form.
    pub fn hash(&self) -> String {
        let digest = Sha256::digest(self.to_toml().as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }
}

/// Applies one `section.key=value` override. The value is read as a TOML
/// literal when possible, otherwise as a bare string.
pub fn apply_override(table: &mut toml::Table, spec: &str) -> Result<()> {
    let (path, raw) = spec
        .split_once('=')
        .ok_or_else(|| anyhow!("override `{spec}` is not of the form section.key=value"))?;
    let (section, key) = path
        .trim()
        .split_once('.')
        .ok_or_else(|| anyhow!("override key `{path}` must be section.key"))?;
    let raw = raw.trim();
    let value = format!("v = {raw}")
        .parse::<toml::Table>()
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| toml::Value::String(raw.to_string()));
    let entry = table
        .entry(section.to_string())
        .or_insert_with(|| toml::Value::Table(toml::Table::new()));
    let toml::Value::Table(sec) = entry else {
        bail!("`{section}` is not a section");
    };
    sec.insert(key.to_string(), value);
    Ok(())
}
