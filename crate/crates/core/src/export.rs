//! CSV writers for trajectories, spectra, forcing signals, capacity
//! reports and audio buffers.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::analysis::PowerSpectrum;
use crate::audio::AudioBuffer;
use crate::reservoir::CapacityReport;
use crate::score::PressureSignal;
use crate::solver::Trajectory;
use crate::{lit, Error, Result, Scalar};

fn write_with<F>(path: &Path, body: F) -> Result<()>
where
    F: FnOnce(&mut BufWriter<File>) -> std::io::Result<()>,
{
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    body(&mut w).and_then(|_| w.flush()).map_err(|e| Error::io(path, e))
}

/// `t_seconds,tau,r,r_dot,p_scat`, every `stride`-th sample.
pub fn write_trajectory_csv<T: Scalar>(traj: &Trajectory<T>, stride: usize, path: impl AsRef<Path>) -> Result<()> {
    let stride = stride.max(1);
    write_with(path.as_ref(), |w| {
        writeln!(w, "t_seconds,tau,r,r_dot,p_scat")?;
        for i in (0..traj.len()).step_by(stride) {
            writeln!(
                w,
                "{:e},{:e},{:e},{:e},{:e}",
                traj.seconds(i),
                traj.tau(i),
                traj.r[i],
                traj.r_dot[i],
                traj.p_scat[i]
            )?;
        }
        Ok(())
    })
}

/// `f_hz,power`.
pub fn write_spectrum_csv<T: Scalar>(spec: &PowerSpectrum<T>, path: impl AsRef<Path>) -> Result<()> {
    write_with(path.as_ref(), |w| {
        writeln!(w, "f_hz,power")?;
        for (f, p) in spec.frequencies.iter().zip(&spec.power) {
            writeln!(w, "{f:e},{p:e}")?;
        }
        Ok(())
    })
}

/// `t_seconds,p_a`.
pub fn write_signal_csv<T: Scalar>(signal: &PressureSignal<T>, path: impl AsRef<Path>) -> Result<()> {
    write_with(path.as_ref(), |w| {
        writeln!(w, "t_seconds,p_a")?;
        for (t, s) in signal.times().zip(&signal.samples) {
            writeln!(w, "{t:e},{s:e}")?;
        }
        Ok(())
    })
}

/// `k,r2_stm,r2_pc` rows followed by a `# C_STM=..,C_PC=..` summary line.
pub fn write_capacity_csv<T: Scalar>(report: &CapacityReport<T>, path: impl AsRef<Path>) -> Result<()> {
    write_with(path.as_ref(), |w| {
        writeln!(w, "k,r2_stm,r2_pc")?;
        for (k, (s, p)) in report.stm.r2.iter().zip(&report.pc.r2).enumerate() {
            writeln!(w, "{k},{s:.6},{p:.6}")?;
        }
        writeln!(w, "# C_STM={:.6},C_PC={:.6}", report.c_stm(), report.c_pc())
    })
}

/// `t_seconds,sample`.
pub fn write_audio_csv<T: Scalar>(buffer: &AudioBuffer<T>, path: impl AsRef<Path>) -> Result<()> {
    let dt = lit::<T>(buffer.sample_rate as f64).recip();
    write_with(path.as_ref(), |w| {
        writeln!(w, "t_seconds,sample")?;
        for (i, s) in buffer.samples.iter().enumerate() {
            writeln!(w, "{:e},{s:e}", lit::<T>(i as f64) * dt)?;
        }
        Ok(())
    })
}

/// Reads one numeric column (by header name) from a CSV written by this module
/// or any comma-separated file with a header row. Lines starting with `#` are skipped.
pub fn read_csv_column(path: impl AsRef<Path>, column: &str) -> Result<Vec<f64>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut lines = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.starts_with('#'));
    let (_, header) = lines.next().ok_or(Error::Empty("CSV file"))?;
    let idx = header
        .split(',')
        .position(|h| h.trim() == column)
        .ok_or_else(|| Error::Parse {
            line: 1,
            message: format!("no column `{column}` in header `{header}`"),
        })?;
    lines
        .map(|(i, l)| {
            let field = l.split(',').nth(idx).ok_or_else(|| Error::Parse {
                line: i + 1,
                message: format!("missing column {}", idx + 1),
            })?;
            field.trim().parse::<f64>().map_err(|e| Error::Parse {
                line: i + 1,
                message: format!("`{}`: {e}", field.trim()),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reservoir::TaskCapacity;

    #[test]
    fn capacity_csv_layout() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cap.csv");
        let report = CapacityReport {
            stm: TaskCapacity {
                r2: vec![1.0, 0.5, 0.25],
                capacity: 0.75,
            },
            pc: TaskCapacity {
                r2: vec![0.1, 0.2, 0.3],
                capacity: 0.5,
            },
        };
        write_capacity_csv(&report, &path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "k,r2_stm,r2_pc");
        assert_eq!(lines[2], "1,0.500000,0.200000");
        assert_eq!(lines[4], "# C_STM=0.750000,C_PC=0.500000");
        assert_eq!(read_csv_column(&path, "r2_pc").unwrap(), vec![0.1, 0.2, 0.3]);
    }

    #[test]
    fn signal_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("sig.csv");
        let s = PressureSignal::new(vec![0.0, 1.0, -0.5, 0.25], 1e-3).unwrap();
        write_signal_csv(&s, &path).unwrap();
        assert_eq!(read_csv_column(&path, "p_a").unwrap(), s.samples);
        let t = read_csv_column(&path, "t_seconds").unwrap();
        assert!((t[3] - 3e-3).abs() < 1e-15);
        assert!(read_csv_column(&path, "missing").is_err());
    }

    #[test]
    fn unwritable_path_reports_path() {
        let s = PressureSignal::new(vec![0.0; 4], 1e-3).unwrap();
        let err = write_signal_csv(&s, "/nonexistent-dir/sig.csv").unwrap_err();
        assert!(err.to_string().contains("/nonexistent-dir/sig.csv"));
    }
}
