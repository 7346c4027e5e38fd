//! Resampling, normalisation and 16-bit PCM mono WAV files.

use std::fs;
use std::path::Path;

use crate::{lit, to_f64, Error, Result, Scalar};

pub const DEFAULT_SAMPLE_RATE: u32 = 44_100;
const HEADER_LEN: usize = 44;

#[derive(Debug, Clone, PartialEq)]
pub struct AudioBuffer<T> {
    pub samples: Vec<T>,
    /// Samples per second.
    pub sample_rate: u32,
}

impl<T: Scalar> AudioBuffer<T> {
    /// Rejects samples outside `[-1, 1]` and a zero rate.
    pub fn new(samples: Vec<T>, sample_rate: u32) -> Result<Self> {
        if sample_rate == 0 {
            return Err(Error::domain("sample_rate", 0.0, "must be > 0"));
        }
        if let Some(&s) = samples.iter().find(|s| !(s.abs() <= T::one())) {
            return Err(Error::domain("sample", to_f64(s), "must lie in [-1, 1]"));
        }
        Ok(Self { samples, sample_rate })
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn dt(&self) -> T {
        lit::<T>(self.sample_rate as f64).recip()
    }

    pub fn duration_seconds(&self) -> T {
        lit::<T>(self.samples.len() as f64) * self.dt()
    }
}

/// Resamples `samples` spaced `dt_in` seconds apart to `rate_out` Hz.
///
/// Downsampling averages every input sample that falls in each output
/// period; upsampling interpolates linearly. The result is not range-checked,
/// so it is returned as plain samples.
pub fn resample<T: Scalar>(samples: &[T], dt_in: T, rate_out: u32) -> Result<Vec<T>> {
    if samples.is_empty() {
        return Err(Error::Empty("resample input"));
    }
    if !(dt_in > T::zero()) {
        return Err(Error::domain("dt", to_f64(dt_in), "must be > 0"));
    }
    if rate_out == 0 {
        return Err(Error::domain("sample_rate", 0.0, "must be > 0"));
    }
    // Input samples per output sample.
    let ratio = 1.0 / (to_f64(dt_in) * rate_out as f64);
    if (ratio - 1.0).abs() < 1e-12 {
        return Ok(samples.to_vec());
    }
    let n_out = ((samples.len() as f64 / ratio).round() as usize).max(1);
    let n_in = samples.len();

    if ratio > 1.0 {
        Ok((0..n_out)
            .map(|i| {
                let lo = ((i as f64 * ratio).floor() as usize).min(n_in - 1);
                let hi = (((i + 1) as f64 * ratio).floor() as usize).clamp(lo + 1, n_in);
                let sum = samples[lo..hi].iter().fold(T::zero(), |s, &v| s + v);
                sum / lit((hi - lo) as f64)
            })
            .collect())
    } else {
        Ok((0..n_out)
            .map(|i| {
                let x = i as f64 * ratio;
                let k = x.floor() as usize;
                if k + 1 >= n_in {
                    return samples[n_in - 1];
                }
                let f = lit::<T>(x - k as f64);
                samples[k] + (samples[k + 1] - samples[k]) * f
            })
            .collect())
    }
}

/// Scales so that the largest magnitude equals `peak`.
pub fn normalize<T: Scalar>(samples: &[T], peak: T, sample_rate: u32) -> Result<AudioBuffer<T>> {
    if !(peak > T::zero() && peak <= T::one()) {
        return Err(Error::domain("peak", to_f64(peak), "must lie in (0, 1]"));
    }
    let max = samples.iter().fold(T::zero(), |m, &s| m.max(s.abs()));
    if !(max > T::zero()) {
        return Err(Error::ZeroVariance("audio buffer (all samples zero)"));
    }
    if !max.is_finite() {
        return Err(Error::domain("sample", to_f64(max), "must be finite"));
    }
    let gain = peak / max;
    let scaled = samples
        .iter()
        .map(|&s| (s * gain).max(-T::one()).min(T::one()))
        .collect();
    AudioBuffer::new(scaled, sample_rate)
}

/// Canonical 44-byte header followed by little-endian 16-bit samples.
pub fn encode_wav<T: Scalar>(buffer: &AudioBuffer<T>) -> Vec<u8> {
    let data_len = (buffer.samples.len() * 2) as u32;
    let mut out = Vec::with_capacity(HEADER_LEN + data_len as usize);
    out.extend_from_slice(b"RIFF");
    out.extend_from_slice(&(36 + data_len).to_le_bytes());
    out.extend_from_slice(b"WAVEfmt ");
    out.extend_from_slice(&16u32.to_le_bytes());
    out.extend_from_slice(&1u16.to_le_bytes()); // PCM
    out.extend_from_slice(&1u16.to_le_bytes()); // mono
    out.extend_from_slice(&buffer.sample_rate.to_le_bytes());
    out.extend_from_slice(&(buffer.sample_rate * 2).to_le_bytes());
    out.extend_from_slice(&2u16.to_le_bytes());
    out.extend_from_slice(&16u16.to_le_bytes());
    out.extend_from_slice(b"data");
    out.extend_from_slice(&data_len.to_le_bytes());
    for &s in &buffer.samples {
        out.extend_from_slice(&quantize(s).to_le_bytes());
    }
    out
}

fn quantize<T: Scalar>(s: T) -> i16 {
    (to_f64(s) * 32767.0).round().clamp(-32768.0, 32767.0) as i16
}

pub fn write_wav<T: Scalar>(buffer: &AudioBuffer<T>, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, encode_wav(buffer)).map_err(|e| Error::io(path, e))
}

/// Reads the format written by [`write_wav`]: PCM, mono, 16-bit. Chunks
/// other than `fmt ` and `data` are skipped.
pub fn read_wav<T: Scalar>(path: impl AsRef<Path>) -> Result<AudioBuffer<T>> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    let bad = |reason| Error::BadWav {
        path: path.to_path_buf(),
        reason,
    };
    if bytes.len() < 12 || &bytes[0..4] != b"RIFF" || &bytes[8..12] != b"WAVE" {
        return Err(bad("missing RIFF/WAVE magic"));
    }
    let u16_at = |i: usize| u16::from_le_bytes([bytes[i], bytes[i + 1]]);
    let u32_at = |i: usize| u32::from_le_bytes([bytes[i], bytes[i + 1], bytes[i + 2], bytes[i + 3]]);

    let mut pos = 12;
    let mut rate = None;
    while pos + 8 <= bytes.len() {
        let id = &bytes[pos..pos + 4];
        let len = u32_at(pos + 4) as usize;
        let body = pos + 8;
        if body + len > bytes.len() {
            return Err(bad("truncated chunk"));
        }
        match id {
            b"fmt " => {
                if len < 16 {
                    return Err(bad("short fmt chunk"));
                }
                if u16_at(body) != 1 {
                    return Err(bad("not PCM"));
                }
                if u16_at(body + 2) != 1 {
                    return Err(bad("not mono"));
                }
                if u16_at(body + 14) != 16 {
                    return Err(bad("not 16-bit"));
                }
                rate = Some(u32_at(body + 4));
            }
            b"data" => {
                let rate = rate.ok_or_else(|| bad("data before fmt"))?;
                let samples = bytes[body..body + len]
                    .chunks_exact(2)
                    .map(|c| lit::<T>(i16::from_le_bytes([c[0], c[1]]) as f64 / 32767.0).max(-T::one()))
                    .collect();
                return AudioBuffer::new(samples, rate);
            }
            _ => {}
        }
        pos = body + len + (len & 1);
    }
    Err(bad("no data chunk"))
}
