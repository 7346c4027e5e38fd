use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use rayon::prelude::*;

use bubble_core::analysis::{count_peaks, dominant_frequency, harmonic_ratio, power_spectrum, PowerSpectrum, Window};
use bubble_core::audio::{normalize, read_wav, resample, write_wav, AudioBuffer};
use bubble_core::export::{
    read_csv_column, write_capacity_csv, write_signal_csv, write_spectrum_csv, write_trajectory_csv,
};
use bubble_core::physics::{dimensionless_groups, DimensionlessSet};
use bubble_core::reservoir::{run_bubble_memory, BubbleReservoir};
use bubble_core::score::{articulation_gaps, parse_score, render_pulse_train, PressureSignal, Score};
use bubble_core::solver::{default_dtau, simulate, BubbleState, SolverOptions, Trajectory};
use bubble_core::study::{pulse_experiment, Oscillation, PulseReport, HARMONICS};

use crate::config::RunConfig;
use crate::manifest::Manifest;

/// Audible band used for peak counting, Hz.
pub const AUDIO_BAND: (f64, f64) = (20.0, 20_000.0);
/// Peaks must be within this many dB of the strongest one.
pub const PEAK_THRESHOLD_DB: f64 = -40.0;
pub const PEAK_PROMINENCE_DB: f64 = 10.0;

/// Solver step in `tau` from the `[solver]` section.
pub fn solver_dtau(cfg: &RunConfig, groups: &DimensionlessSet<f64>) -> f64 {
    match (cfg.solver.dtau, cfg.solver.dt) {
        (Some(dtau), _) => dtau,
        (None, Some(dt)) => groups.to_tau(dt),
        (None, None) => default_dtau(groups, cfg.solver.steps_per_period),
    }
}

/// Spectrum summary of one signal.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumSummary {
    pub spectrum: PowerSpectrum<f64>,
    pub peaks: usize,
    pub dominant_hz: f64,
    pub harmonics_db: Vec<Option<f64>>,
}

pub fn summarize_spectrum(samples: &[f64], dt: f64, window: Window) -> Result<SpectrumSummary> {
    let mean = samples.iter().sum::<f64>() / samples.len().max(1) as f64;
    let centred: Vec<f64> = samples.iter().map(|x| x - mean).collect();
    let spectrum = power_spectrum(&centred, dt, window)?;
    let hi = AUDIO_BAND.1.min(spectrum.nyquist());
    let peaks = count_peaks(&spectrum, AUDIO_BAND.0, hi, PEAK_THRESHOLD_DB, PEAK_PROMINENCE_DB)?;
    let dominant_hz = dominant_frequency(&spectrum, AUDIO_BAND.0, hi)?;
    let harmonics_db = HARMONICS
        .iter()
        .map(|&k| harmonic_ratio(&spectrum, dominant_hz, k).ok())
        .collect();
    Ok(SpectrumSummary {
        spectrum,
        peaks,
        dominant_hz,
        harmonics_db,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct RenderOutput {
    pub score: Score,
    pub forcing: PressureSignal<f64>,
    pub trajectory: Trajectory<f64>,
    pub melody: AudioBuffer<f64>,
    pub response: AudioBuffer<f64>,
    pub input: SpectrumSummary,
    pub output: SpectrumSummary,
    /// Mean square of the forcing and of the scattered pressure inside
    /// articulation gaps.
    pub input_gap_power: f64,
    pub output_gap_power: f64,
}

/// Score text to forcing, bubble response, audio buffers and spectra.
pub fn render(score_text: &str, cfg: &RunConfig) -> Result<RenderOutput> {
    let score = parse_score(score_text)?;
    let opts = cfg.encoding.pulse_options()?;
    let groups = dimensionless_groups(&cfg.physics.fluid(), &cfg.physics.bubble(), &cfg.physics.drive())?;
    let dtau = solver_dtau(cfg, &groups);
    let dt = groups.to_seconds(dtau);
    let forcing = render_pulse_train(&score, dt, &opts)?;
    let solver = SolverOptions {
        dtau,
        tau_end: dtau * forcing.len() as f64,
        far_field: cfg.solver.h,
        derivative_term: cfg.solver.derivative_term()?,
        ..SolverOptions::for_groups(&groups, 1.0)
    };
    let trajectory = simulate(&BubbleState::equilibrium(), Some(&forcing), &groups, &solver)?;
    let response_raw = &trajectory.p_scat[..forcing.len()];

    let melody = normalize(
        &resample(&forcing.samples, dt, cfg.audio.rate)?,
        cfg.audio.peak,
        cfg.audio.rate,
    )?;
    let response = normalize(
        &resample(response_raw, dt, cfg.audio.rate)?,
        cfg.audio.peak,
        cfg.audio.rate,
    )?;
    let adt = 1.0 / cfg.audio.rate as f64;
    let input = summarize_spectrum(&melody.samples, adt, Window::Hann)?;
    let output = summarize_spectrum(&response.samples, adt, Window::Hann)?;

    let gaps = articulation_gaps(&score, &opts);
    let gap_power = |x: &[f64]| {
        let (mut sum, mut n) = (0.0, 0usize);
        for &(a, b) in &gaps {
            let lo = (a / dt).ceil() as usize;
            let hi = ((b / dt).floor() as usize).min(x.len());
            for v in x.get(lo..hi).unwrap_or(&[]) {
                sum += v * v;
                n += 1;
            }
        }
        if n == 0 {
            0.0
        } else {
            sum / n as f64
        }
    };
    let input_gap_power = gap_power(&forcing.samples);
    let output_gap_power = gap_power(response_raw);

    Ok(RenderOutput {
        score,
        forcing,
        trajectory,
        melody,
        response,
        input,
        output,
        input_gap_power,
        output_gap_power,
    })
}

pub struct RenderPaths {
    pub response_wav: PathBuf,
    pub melody_wav: PathBuf,
    pub trajectory_csv: PathBuf,
}

impl RenderPaths {
    pub fn in_dir(out: &Path) -> Self {
        Self {
            response_wav: out.join("response.wav"),
            melody_wav: out.join("melody.wav"),
            trajectory_csv: out.join("trajectory.csv"),
        }
    }
}

pub fn cmd_render(score_path: &Path, cfg: &RunConfig, out: &Path, paths: &RenderPaths) -> Result<RenderOutput> {
    let text = std::fs::read_to_string(score_path).with_context(|| format!("reading {}", score_path.display()))?;
    let result = render(&text, cfg).with_context(|| format!("rendering {}", score_path.display()))?;

    write_wav(&result.response, &paths.response_wav)?;
    write_wav(&result.melody, &paths.melody_wav)?;
    let stride = ((1.0 / cfg.audio.rate as f64) / result.trajectory.dt_seconds())
        .round()
        .max(1.0) as usize;
    write_trajectory_csv(&result.trajectory, stride, &paths.trajectory_csv)?;
    let spec_in = out.join("spectrum_melody.csv");
    let spec_out = out.join("spectrum_response.csv");
    write_spectrum_csv(&result.input.spectrum, &spec_in)?;
    write_spectrum_csv(&result.output.spectrum, &spec_out)?;

    let mut manifest = Manifest::new("render");
    manifest.inputs.push(score_path.to_path_buf());
    manifest.outputs.extend([
        paths.response_wav.clone(),
        paths.melody_wav.clone(),
        paths.trajectory_csv.clone(),
        spec_in,
        spec_out,
    ]);
    manifest.write(out, cfg)?;
    Ok(result)
}

/// Result of one amplitude in a step-response study.
pub type StepOutcome = (f64, Result<PulseReport<f64>, String>);

pub fn step_study(cfg: &RunConfig) -> Result<Vec<StepOutcome>> {
    let study = cfg.pulse_study()?;
    let fluid = cfg.physics.fluid();
    let bubble = cfg.physics.bubble();
    Ok(cfg
        .step
        .amplitudes
        .par_iter()
        .map(|&alpha| {
            let r = pulse_experiment(&fluid, &bubble, cfg.physics.f_p, alpha, &study).map_err(|e| e.to_string());
            (alpha, r)
        })
        .collect())
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.6}")).unwrap_or_default()
}

fn segment_row(alpha: f64, segment: &str, osc: &Option<Oscillation<f64>>) -> String {
    match osc {
        None => format!("{alpha},{segment},no oscillation,,,,,,"),
        Some(o) => {
            let h: Vec<String> = o.harmonics_db.iter().map(|&v| fmt_opt(v)).collect();
            format!(
                "{alpha},{segment},ok,{:.6},{},{},{:.6}",
                o.dominant_hz,
                fmt_opt(o.relaxation_seconds),
                h.join(","),
                o.noise_floor_db
            )
        }
    }
}

/// Runs the step study and writes `step_response.csv` plus per-amplitude
/// trajectories and segment spectra.
pub fn cmd_step(cfg: &RunConfig, out: &Path) -> Result<Vec<StepOutcome>> {
    let outcomes = step_study(cfg)?;
    let mut manifest = Manifest::new("step-response");
    let mut rows =
        vec!["alpha_pa,segment,status,dominant_hz,relaxation_s,h2_db,h3_db,h4_db,noise_floor_db".to_string()];
    for (alpha, outcome) in &outcomes {
        match outcome {
            Err(e) => rows.push(format!("{alpha},all,error: {},,,,,,", e.replace(',', ";"))),
            Ok(report) => {
                rows.push(segment_row(*alpha, "in_pulse", &report.in_pulse));
                rows.push(segment_row(*alpha, "post_pulse", &report.post_pulse));
                let tag = format!("{alpha:+}").replace('.', "p");
                let traj = out.join(format!("step_{tag}_trajectory.csv"));
                write_trajectory_csv(&report.trajectory, 1, &traj)?;
                manifest.outputs.push(traj);
                for (name, seg) in [("in", &report.in_pulse), ("post", &report.post_pulse)] {
                    if let Some(o) = seg {
                        let p = out.join(format!("step_{tag}_spectrum_{name}.csv"));
                        write_spectrum_csv(&o.spectrum, &p)?;
                        manifest.outputs.push(p);
                    }
                }
            }
        }
    }
    let summary = out.join("step_response.csv");
    std::fs::write(&summary, rows.join("\n") + "\n").with_context(|| format!("writing {}", summary.display()))?;
    manifest.outputs.insert(0, summary);
    manifest.write(out, cfg)?;
    Ok(outcomes)
}

pub fn memory_test(cfg: &RunConfig) -> Result<BubbleReservoir<f64>> {
    Ok(run_bubble_memory(
        &cfg.physics.fluid(),
        &cfg.physics.bubble(),
        cfg.physics.f_p,
        &cfg.reservoir.to_core(cfg.solver.h),
    )?)
}

pub fn cmd_memory(cfg: &RunConfig, out: &Path) -> Result<BubbleReservoir<f64>> {
    let res = memory_test(cfg)?;
    let path = out.join("capacity.csv");
    write_capacity_csv(&res.report, &path)?;
    let mut manifest = Manifest::new("memory-test");
    manifest.outputs.push(path);
    manifest.write(out, cfg)?;
    Ok(res)
}

/// Loads samples and spacing from a WAV file or a CSV column.
pub fn load_signal(path: &Path, column: Option<&str>, dt: Option<f64>) -> Result<(Vec<f64>, f64)> {
    let ext = path
        .extension()
        .and_then(|e| e.to_str())
        .unwrap_or("")
        .to_ascii_lowercase();
    match ext.as_str() {
        "wav" => {
            let b: AudioBuffer<f64> = read_wav(path)?;
            Ok((b.samples, 1.0 / b.sample_rate as f64))
        }
        "csv" => {
            let column = column.unwrap_or("p_scat");
            let samples = read_csv_column(path, column)?;
            let dt = match dt {
                Some(dt) => dt,
                None => {
                    let t = read_csv_column(path, "t_seconds")
                        .context("no --dt given and no t_seconds column to infer it from")?;
                    if t.len() < 2 {
                        bail!("{}: need at least two rows to infer dt", path.display());
                    }
                    (t[t.len() - 1] - t[0]) / (t.len() - 1) as f64
                }
            };
            Ok((samples, dt))
        }
        other => bail!("unsupported input extension `{other}` (expected .wav or .csv)"),
    }
}

pub fn cmd_spectrum(
    cfg: &RunConfig,
    input: &Path,
    column: Option<&str>,
    dt: Option<f64>,
    window: Window,
    out: &Path,
) -> Result<SpectrumSummary> {
    let (samples, dt) = load_signal(input, column, dt)?;
    let summary = summarize_spectrum(&samples, dt, window)?;
    let path = out.join("spectrum.csv");
    write_spectrum_csv(&summary.spectrum, &path)?;
    let mut manifest = Manifest::new("spectrum");
    manifest.inputs.push(input.to_path_buf());
    manifest.outputs.push(path);
    manifest.write(out, cfg)?;
    Ok(summary)
}

pub fn write_forcing_csv(signal: &PressureSignal<f64>, path: &Path) -> Result<()> {
    Ok(write_signal_csv(signal, path)?)
}
