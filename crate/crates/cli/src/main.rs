use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};

use bubble_cli::pipeline::{self, RenderPaths};
use bubble_cli::RunConfig;
use bubble_core::analysis::Window;

#[derive(Parser)]
#[command(
    name = "bubble",
    version,
    about = "Acoustically driven bubble: audio effect and reservoir benchmarks"
)]
struct Cli {
    /// TOML configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Seed for random bit streams (overrides reservoir.seed).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    /// Override a configuration value, e.g. `--set physics.alpha=1e4`.
    #[arg(long = "set", value_name = "SECTION.KEY=VALUE", global = true)]
    overrides: Vec<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Score to bubble-response audio.
    Render {
        score: PathBuf,
        #[arg(long)]
        wav: Option<PathBuf>,
        #[arg(long)]
        melody_wav: Option<PathBuf>,
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Also write the forcing signal as CSV.
        #[arg(long)]
        forcing_csv: Option<PathBuf>,
    },
    /// Single square-pulse experiments over the configured amplitudes.
    StepResponse {
        /// Amplitudes in Pa (replaces step.amplitudes).
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        amplitudes: Option<Vec<f64>>,
    },
    /// Power spectrum of a WAV file or a CSV column.
    Spectrum {
        input: PathBuf,
        #[arg(long)]
        column: Option<String>,
        /// Sample spacing in seconds for CSV input without a t_seconds column.
        #[arg(long)]
        dt: Option<f64>,
        #[arg(long, default_value = "hann")]
        window: Window,
    },
    /// Short-term-memory and parity-check capacities of the bubble reservoir.
    MemoryTest,
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    let mut overrides = cli.overrides.clone();
    if let Some(seed) = cli.seed {
        overrides.push(format!("reservoir.seed={seed}"));
    }
    if let Command::StepResponse { amplitudes: Some(a) } = &cli.command {
        let list: Vec<String> = a.iter().map(|v| format!("{v:?}")).collect();
        overrides.push(format!("step.amplitudes=[{}]", list.join(",")));
    }
    let cfg = RunConfig::load(cli.config.as_deref(), &overrides)?;
    std::fs::create_dir_all(&cli.out).with_context(|| format!("creating {}", cli.out.display()))?;

    match cli.command {
        Command::Render {
            score,
            wav,
            melody_wav,
            csv,
            forcing_csv,
        } => {
            let mut paths = RenderPaths::in_dir(&cli.out);
            if let Some(p) = wav {
                paths.response_wav = p;
            }
            if let Some(p) = melody_wav {
                paths.melody_wav = p;
            }
            if let Some(p) = csv {
                paths.trajectory_csv = p;
            }
            let r = pipeline::cmd_render(&score, &cfg, &cli.out, &paths)?;
            if let Some(p) = forcing_csv {
                pipeline::write_forcing_csv(&r.forcing, &p)?;
            }
            println!("duration: {:.3} s", r.forcing.duration_seconds());
            println!(
                "spectral peaks (melody / response): {} / {}",
                r.input.peaks, r.output.peaks
            );
            println!("response dominant frequency: {:.2} Hz", r.output.dominant_hz);
            for (k, h) in [2, 3, 4].iter().zip(&r.output.harmonics_db) {
                match h {
                    Some(db) => println!("response harmonic {k}: {db:.1} dB"),
                    None => println!("response harmonic {k}: above Nyquist"),
                }
            }
            println!(
                "gap power (melody / response): {:.3e} / {:.3e}",
                r.input_gap_power, r.output_gap_power
            );
            println!("wrote {}", paths.response_wav.display());
        }
        Command::StepResponse { .. } => {
            let outcomes = pipeline::cmd_step(&cfg, &cli.out)?;
            for (alpha, o) in &outcomes {
                match o {
                    Err(e) => println!("alpha {alpha:+.1} Pa: {e}"),
                    Ok(r) => {
                        let f = |s: &Option<bubble_core::study::Oscillation<f64>>| match s {
                            Some(o) => format!(
                                "{:.2} Hz, decay {}",
                                o.dominant_hz,
                                o.relaxation_seconds
                                    .map(|t| format!("{:.3} ms", t * 1e3))
                                    .unwrap_or_else(|| "n/a".into())
                            ),
                            None => "no oscillation".into(),
                        };
                        println!(
                            "alpha {alpha:+.1} Pa: in-pulse {}; post-pulse {}",
                            f(&r.in_pulse),
                            f(&r.post_pulse)
                        );
                    }
                }
            }
            println!("wrote {}", cli.out.join("step_response.csv").display());
        }
        Command::Spectrum {
            input,
            column,
            dt,
            window,
        } => {
            let s = pipeline::cmd_spectrum(&cfg, &input, column.as_deref(), dt, window, &cli.out)?;
            println!("dominant frequency: {:.2} Hz", s.dominant_hz);
            println!("peaks above {} dB: {}", pipeline::PEAK_THRESHOLD_DB, s.peaks);
            for (k, h) in [2, 3, 4].iter().zip(&s.harmonics_db) {
                if let Some(db) = h {
                    println!("harmonic {k}: {db:.1} dB");
                }
            }
        }
        Command::MemoryTest => {
            let r = pipeline::cmd_memory(&cfg, &cli.out)?;
            println!("C_STM = {:.3} bits", r.report.c_stm());
            println!("C_PC  = {:.3} bits", r.report.c_pc());
            println!("r2(k=0) = {:.3}", r.report.stm.r2[0]);
            println!("wrote {}", cli.out.join("capacity.csv").display());
        }
    }
    Ok(())
}
