//! Spectral and temporal analysis of sampled signals.

use std::fmt;
use std::str::FromStr;

use rustfft::num_complex::Complex;
use rustfft::{FftNum, FftPlanner};

use crate::{lit, to_f64, Error, Result, Scalar};

const MIN_SPECTRUM_SAMPLES: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Window {
    #[default]
    Rectangular,
    Hann,
}

impl Window {
    /// Periodic window coefficients of length `n`.
    pub fn coefficients<T: Scalar>(self, n: usize) -> Vec<T> {
        match self {
            Window::Rectangular => vec![T::one(); n],
            Window::Hann => {
                let half = lit::<T>(0.5);
                let step = T::TAU() / lit(n as f64);
                (0..n).map(|i| half - half * (step * lit(i as f64)).cos()).collect()
            }
        }
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Window::Rectangular => "rectangular",
            Window::Hann => "hann",
        })
    }
}

impl FromStr for Window {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "rectangular" | "rect" | "none" => Ok(Window::Rectangular),
            "hann" | "hanning" => Ok(Window::Hann),
            other => Err(format!("unknown window `{other}`")),
        }
    }
}

/// One-sided power spectrum.
///
/// Scaled so that the sum of all bins equals the energy `sum (w x)^2` of the
/// windowed (and zero-padded) signal.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerSpectrum<T> {
    pub frequencies: Vec<T>,
    pub power: Vec<T>,
    pub window: Window,
    /// Transform length including zero padding; bin spacing is `1 / (fft_len dt)`.
    pub fft_len: usize,
}

impl<T: Scalar> PowerSpectrum<T> {
    pub fn bin_width(&self) -> T {
        self.frequencies.get(1).copied().unwrap_or_else(T::zero)
    }

    pub fn nyquist(&self) -> T {
        self.frequencies.last().copied().unwrap_or_else(T::zero)
    }

    pub fn len(&self) -> usize {
        self.power.len()
    }

    pub fn is_empty(&self) -> bool {
        self.power.is_empty()
    }

    fn band_indices(&self, lo: T, hi: T) -> Result<std::ops::Range<usize>> {
        let start = self.frequencies.partition_point(|&f| f < lo);
        let end = self.frequencies.partition_point(|&f| f <= hi);
        if start >= end {
            return Err(Error::EmptyBand {
                lo: to_f64(lo),
                hi: to_f64(hi),
            });
        }
        Ok(start..end)
    }

    /// Largest power within `half_width_bins` bins of `freq`.
    pub fn peak_near(&self, freq: T, half_width_bins: T) -> Result<T> {
        let half = half_width_bins * self.bin_width();
        let range = self.band_indices(freq - half, freq + half)?;
        Ok(self.power[range].iter().copied().fold(T::zero(), T::max))
    }
}

pub fn power_spectrum<T: Scalar + FftNum>(samples: &[T], dt: T, window: Window) -> Result<PowerSpectrum<T>> {
    power_spectrum_padded(samples, dt, window, samples.len())
}

/// Power spectrum of `samples` zero-padded to `fft_len` (at least the signal length).
pub fn power_spectrum_padded<T: Scalar + FftNum>(
    samples: &[T],
    dt: T,
    window: Window,
    fft_len: usize,
) -> Result<PowerSpectrum<T>> {
    let n = samples.len();
    if n < MIN_SPECTRUM_SAMPLES {
        return Err(Error::TooShort {
            what: "spectrum input",
            needed: MIN_SPECTRUM_SAMPLES,
            got: n,
        });
    }
    if !(dt > T::zero()) {
        return Err(Error::domain("dt", to_f64(dt), "must be > 0"));
    }
    let fft_len = fft_len.max(n);

    let mut buffer: Vec<Complex<T>> = samples
        .iter()
        .zip(window.coefficients::<T>(n))
        .map(|(&x, w)| Complex::new(x * w, T::zero()))
        .collect();
    buffer.resize(fft_len, Complex::new(T::zero(), T::zero()));
    FftPlanner::new().plan_fft_forward(fft_len).process(&mut buffer);

    let bins = fft_len / 2 + 1;
    let norm = lit::<T>(fft_len as f64).recip();
    let two = lit::<T>(2.0);
    let power = buffer[..bins]
        .iter()
        .enumerate()
        .map(|(k, c)| {
            let p = c.norm_sqr() * norm;
            // DC and (for even lengths) Nyquist appear once in the full spectrum.
            if k == 0 || (fft_len.is_multiple_of(2) && k == bins - 1) {
                p
            } else {
                p * two
            }
        })
        .collect();
    let df = (lit::<T>(fft_len as f64) * dt).recip();
    let frequencies = (0..bins).map(|k| lit::<T>(k as f64) * df).collect();

    Ok(PowerSpectrum {
        frequencies,
        power,
        window,
        fft_len,
    })
}

/// Frequency of the strongest bin in `[lo, hi]`, refined by fitting a
/// parabola through it and its two neighbours.
pub fn dominant_frequency<T: Scalar>(spec: &PowerSpectrum<T>, lo: T, hi: T) -> Result<T> {
    let range = spec.band_indices(lo, hi)?;
    let (peak, &max) = spec.power[range.clone()]
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.partial_cmp(b.1).unwrap_or(std::cmp::Ordering::Equal))
        .map(|(i, p)| (i + range.start, p))
        .expect("band is non-empty");
    if !(max > T::zero()) {
        return Err(Error::ZeroVariance("spectrum band"));
    }
    if peak == 0 || peak + 1 >= spec.len() {
        return Ok(spec.frequencies[peak]);
    }
    let (a, b, c) = (spec.power[peak - 1], max, spec.power[peak + 1]);
    let denom = a - lit::<T>(2.0) * b + c;
    let offset = if denom < T::zero() {
        lit::<T>(0.5) * (a - c) / denom
    } else {
        T::zero()
    };
    Ok(spec.frequencies[peak] + offset * spec.bin_width())
}

/// `10 log10(P(k f0) / P(f0))`, each power the maximum within 1.5 bins.
pub fn harmonic_ratio<T: Scalar>(spec: &PowerSpectrum<T>, f0: T, k: usize) -> Result<T> {
    if k == 0 || !(f0 > T::zero()) {
        return Err(Error::domain("harmonic", k as f64, "k and f0 must be positive"));
    }
    let half_width = lit::<T>(1.5);
    let target = lit::<T>(k as f64) * f0;
    if target + half_width * spec.bin_width() > spec.nyquist() {
        return Err(Error::HarmonicOutOfRange {
            k,
            f0: to_f64(f0),
            nyquist: to_f64(spec.nyquist()),
        });
    }
    let fundamental = spec.peak_near(f0, half_width)?;
    let harmonic = spec.peak_near(target, half_width)?;
    if !(fundamental > T::zero()) {
        return Err(Error::ZeroVariance("fundamental bin"));
    }
    Ok(to_db(harmonic / fundamental))
}

/// Median bin power in `[lo, hi]`, a robust noise-floor estimate.
pub fn noise_floor<T: Scalar>(spec: &PowerSpectrum<T>, lo: T, hi: T) -> Result<T> {
    let range = spec.band_indices(lo, hi)?;
    let mut band = spec.power[range].to_vec();
    band.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    Ok(band[band.len() / 2])
}

/// Counts spectral peaks in `[lo, hi]` whose power is within `threshold_db`
/// of the band maximum and whose topographic prominence is at least
/// `min_prominence_db`.
pub fn count_peaks<T: Scalar>(
    spec: &PowerSpectrum<T>,
    lo: T,
    hi: T,
    threshold_db: T,
    min_prominence_db: T,
) -> Result<usize> {
    let range = spec.band_indices(lo, hi)?;
    let max = spec.power[range.clone()].iter().copied().fold(T::zero(), T::max);
    if !(max > T::zero()) {
        return Ok(0);
    }
    let floor = lit::<T>(-400.0);
    let db: Vec<T> = spec.power[range].iter().map(|&p| to_db(p / max).max(floor)).collect();

    let mut count = 0;
    for i in 1..db.len().saturating_sub(1) {
        let p = db[i];
        if !(p > db[i - 1] && p >= db[i + 1] && p >= threshold_db) {
            continue;
        }
        let base_left = db[..i].iter().rev().take_while(|&&v| v <= p).copied().fold(p, T::min);
        let base_right = db[i + 1..].iter().take_while(|&&v| v <= p).copied().fold(p, T::min);
        if p - base_left.max(base_right) >= min_prominence_db {
            count += 1;
        }
    }
    Ok(count)
}

pub fn to_db<T: Scalar>(ratio: T) -> T {
    lit::<T>(10.0) * ratio.log10()
}

/// Peak envelope of an oscillatory signal: the local maxima of `|x|`,
/// joined by straight lines.
#[derive(Debug, Clone, PartialEq)]
pub struct Envelope<T> {
    pub times: Vec<T>,
    pub magnitudes: Vec<T>,
    pub normalized: bool,
}

impl<T: Scalar> Envelope<T> {
    /// Scales the envelope to a unit maximum.
    pub fn normalized(mut self) -> Self {
        let max = self.magnitudes.iter().copied().fold(T::zero(), T::max);
        if max > T::zero() {
            self.magnitudes.iter_mut().for_each(|m| *m = *m / max);
            self.normalized = true;
        }
        self
    }

    /// Linear interpolation between peaks, held constant outside them.
    pub fn value_at(&self, t: T) -> T {
        let i = self.times.partition_point(|&x| x <= t);
        if i == 0 {
            return self.magnitudes[0];
        }
        if i == self.times.len() {
            return self.magnitudes[i - 1];
        }
        let (t0, t1) = (self.times[i - 1], self.times[i]);
        let (m0, m1) = (self.magnitudes[i - 1], self.magnitudes[i]);
        m0 + (m1 - m0) * (t - t0) / (t1 - t0)
    }

    /// `[time of the largest peak, first later time the envelope drops below
    /// 10% of it]`, which skips start-up transients and the noise floor.
    pub fn default_fit_range(&self) -> (T, T) {
        let (imax, &max) = self
            .magnitudes
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.partial_cmp(b.1).unwrap_or(std::cmp::Ordering::Equal))
            .expect("envelope is non-empty");
        let cutoff = max * lit(0.1);
        let end = self.magnitudes[imax..]
            .iter()
            .position(|&m| m < cutoff)
            .map(|j| self.times[imax + j])
            .unwrap_or_else(|| *self.times.last().expect("non-empty"));
        (self.times[imax], end)
    }
}

pub fn envelope<T: Scalar>(samples: &[T], dt: T) -> Result<Envelope<T>> {
    let mut times = Vec::new();
    let mut magnitudes = Vec::new();
    for i in 1..samples.len().saturating_sub(1) {
        let (a, b, c) = (samples[i - 1].abs(), samples[i].abs(), samples[i + 1].abs());
        if b > a && b >= c {
            times.push(lit::<T>(i as f64) * dt);
            magnitudes.push(b);
        }
    }
    if magnitudes.len() < 3 {
        return Err(Error::TooFewExtrema {
            needed: 3,
            found: magnitudes.len(),
        });
    }
    Ok(Envelope {
        times,
        magnitudes,
        normalized: false,
    })
}

/// Relaxation time from a least-squares line through `ln(envelope)` on
/// `[t_lo, t_hi]`: `tau = -1 / slope`.
pub fn fit_relaxation<T: Scalar>(env: &Envelope<T>, t_lo: T, t_hi: T) -> Result<T> {
    let points: Vec<(T, T)> = env
        .times
        .iter()
        .zip(&env.magnitudes)
        .filter(|(&t, _)| t >= t_lo && t <= t_hi)
        .map(|(&t, &m)| (t, m))
        .collect();
    if points.len() < 2 {
        return Err(Error::TooShort {
            what: "envelope points in fit range",
            needed: 2,
            got: points.len(),
        });
    }
    if let Some(&(_, m)) = points.iter().find(|(_, m)| !(*m > T::zero())) {
        return Err(Error::domain("envelope", to_f64(m), "must be > 0 in the fit range"));
    }

    let n = lit::<T>(points.len() as f64);
    let mean_t = points.iter().fold(T::zero(), |s, p| s + p.0) / n;
    let mean_y = points.iter().fold(T::zero(), |s, p| s + p.1.ln()) / n;
    let (sxy, sxx) = points.iter().fold((T::zero(), T::zero()), |(sxy, sxx), &(t, m)| {
        let dx = t - mean_t;
        (sxy + dx * (m.ln() - mean_y), sxx + dx * dx)
    });
    let slope = sxy / sxx;
    if !(slope < T::zero()) {
        return Err(Error::domain(
            "envelope slope",
            to_f64(slope),
            "envelope is not decaying",
        ));
    }
    Ok(-slope.recip())
}

/// Squared Pearson correlation coefficient.
pub fn pearson_r2<T: Scalar>(a: &[T], b: &[T]) -> Result<T> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            what: "pearson_r2",
            expected: a.len(),
            found: b.len(),
        });
    }
    if a.len() < 2 {
        return Err(Error::TooShort {
            what: "correlation input",
            needed: 2,
            got: a.len(),
        });
    }
    let n = lit::<T>(a.len() as f64);
    let mean_a = a.iter().fold(T::zero(), |s, &x| s + x) / n;
    let mean_b = b.iter().fold(T::zero(), |s, &x| s + x) / n;
    let (mut sab, mut saa, mut sbb) = (T::zero(), T::zero(), T::zero());
    for (&x, &y) in a.iter().zip(b) {
        let (dx, dy) = (x - mean_a, y - mean_b);
        sab = sab + dx * dy;
        saa = saa + dx * dx;
        sbb = sbb + dy * dy;
    }
    if !(saa > T::zero()) {
        return Err(Error::ZeroVariance("first series"));
    }
    if !(sbb > T::zero()) {
        return Err(Error::ZeroVariance("second series"));
    }
    Ok(((sab * sab) / (saa * sbb)).min(T::one()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::TAU;

    fn sine(freq: f64, dt: f64, n: usize) -> Vec<f64> {
        (0..n).map(|i| (TAU * freq * i as f64 * dt).sin()).collect()
    }

    #[test]
    fn exact_bin_sine_is_a_single_line() {
        let (n, dt) = (1024, 1.0 / 1024.0);
        let spec = power_spectrum(&sine(64.0, dt, n), dt, Window::Rectangular).unwrap();
        assert_eq!(spec.len(), 513);
        assert_relative_eq!(spec.bin_width(), 1.0);
        let peak = spec.power[64];
        for (k, &p) in spec.power.iter().enumerate() {
            if k != 64 {
                assert!(p < 1e-10 * peak, "bin {k}: {p}");
            }
        }
    }

    #[test]
    fn parseval_holds_for_both_windows() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for n in [100usize, 257, 1024] {
            let x: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
            for window in [Window::Rectangular, Window::Hann] {
                let w = window.coefficients::<f64>(n);
                let energy: f64 = x.iter().zip(&w).map(|(a, b)| (a * b).powi(2)).sum();
                for len in [n, 3 * n] {
                    let spec = power_spectrum_padded(&x, 0.01, window, len).unwrap();
                    let total: f64 = spec.power.iter().sum();
                    assert_relative_eq!(total, energy, max_relative = 1e-9);
                }
            }
        }
    }

    #[test]
    fn too_short_signal() {
        let err = power_spectrum(&[1.0f64; 8], 1.0, Window::Hann).unwrap_err();
        assert!(matches!(err, Error::TooShort { needed: 16, got: 8, .. }));
    }

    #[test]
    fn dominant_frequency_of_a_tone() {
        let dt = 1.0 / 44_100.0;
        let x = sine(440.0, dt, 44_100 / 2);
        let spec = power_spectrum(&x, dt, Window::Hann).unwrap();
        let f = dominant_frequency(&spec, 100.0, 2000.0).unwrap();
        assert!((f - 440.0).abs() < spec.bin_width(), "{f}");
    }

    #[test]
    fn band_isolates_second_peak() {
        let dt = 1.0 / 8000.0;
        let x: Vec<f64> = (0..8000)
            .map(|i| {
                let t = i as f64 * dt;
                (TAU * 300.0 * t).sin() + 0.2 * (TAU * 1250.0 * t).sin()
            })
            .collect();
        let spec = power_spectrum(&x, dt, Window::Hann).unwrap();
        assert!((dominant_frequency(&spec, 0.0, 4000.0).unwrap() - 300.0).abs() < 1.0);
        assert!((dominant_frequency(&spec, 800.0, 4000.0).unwrap() - 1250.0).abs() < 1.0);
        assert!(matches!(
            dominant_frequency(&spec, 300.2, 300.4),
            Err(Error::EmptyBand { .. })
        ));
    }

    #[test]
    fn harmonic_ratio_of_pure_and_distorted_tones() {
        let dt = 1.0 / 8192.0;
        let pure = sine(256.0, dt, 8192);
        let spec = power_spectrum(&pure, dt, Window::Rectangular).unwrap();
        assert!(harmonic_ratio(&spec, 256.0, 2).unwrap() <= -100.0);

        let distorted: Vec<f64> = pure.iter().map(|&s| s + 0.1 * s * s).collect();
        let spec = power_spectrum(&distorted, dt, Window::Rectangular).unwrap();
        // 0.1 sin^2 = 0.05 - 0.05 cos(2wt): amplitude ratio 0.05.
        assert_relative_eq!(
            harmonic_ratio(&spec, 256.0, 2).unwrap(),
            20.0 * 0.05f64.log10(),
            max_relative = 1e-6
        );
        assert!(matches!(
            harmonic_ratio(&spec, 256.0, 20),
            Err(Error::HarmonicOutOfRange { .. })
        ));
    }

    #[test]
    fn envelope_of_damped_sine() {
        let (dt, tau, f) = (1e-4, 0.2, 200.0);
        let x: Vec<f64> = (0..10_000)
            .map(|i| {
                let t = i as f64 * dt;
                (-t / tau).exp() * (TAU * f * t).sin()
            })
            .collect();
        let env = envelope(&x, dt).unwrap();
        for i in 1..9 {
            let t = i as f64 * 0.1;
            let expected = (-t / tau).exp();
            assert!((env.value_at(t) - expected).abs() < 0.05 * expected, "t = {t}");
        }
        let fitted = fit_relaxation(&env, 0.05, 0.8).unwrap();
        assert_relative_eq!(fitted, tau, max_relative = 1e-3);
    }

    #[test]
    fn flat_envelope_and_normalisation() {
        let dt = 1e-3;
        let x: Vec<f64> = sine(5.0, dt, 2000).iter().map(|s| 3.0 * s).collect();
        let env = envelope(&x, dt).unwrap().normalized();
        assert!(env.normalized);
        let max = env.magnitudes.iter().cloned().fold(0.0, f64::max);
        assert_eq!(max, 1.0);
        assert!(env.magnitudes.iter().all(|&m| (m - 1.0).abs() < 0.01));
    }

    #[test]
    fn envelope_needs_extrema() {
        assert!(matches!(
            envelope(&[0.0f64; 100], 1.0),
            Err(Error::TooFewExtrema { found: 0, .. })
        ));
    }

    #[test]
    fn exact_exponential_fit() {
        let env = Envelope {
            times: (0..50).map(|i| i as f64 * 0.1).collect(),
            magnitudes: (0..50).map(|i| (-(i as f64 * 0.1) / 2.0).exp()).collect(),
            normalized: false,
        };
        assert_relative_eq!(fit_relaxation(&env, 0.0, 5.0).unwrap(), 2.0, max_relative = 1e-6);
        let (lo, hi) = env.default_fit_range();
        assert_eq!(lo, 0.0);
        // e^{-t/2} < 0.1 first at t = 4.7
        assert_relative_eq!(hi, 4.7, max_relative = 1e-9);

        let mut bad = env.clone();
        bad.magnitudes[3] = 0.0;
        assert!(matches!(fit_relaxation(&bad, 0.0, 5.0), Err(Error::Domain { .. })));
    }

    #[test]
    fn pearson_cases() {
        let a: Vec<f64> = (0..50).map(|i| ((i * 7) % 13) as f64).collect();
        assert_relative_eq!(pearson_r2(&a, &a).unwrap(), 1.0, max_relative = 1e-12);
        let b: Vec<f64> = a.iter().map(|x| -3.0 * x + 7.0).collect();
        assert_relative_eq!(pearson_r2(&a, &b).unwrap(), 1.0, max_relative = 1e-12);
        assert!(matches!(pearson_r2(&a, &[1.0; 50]), Err(Error::ZeroVariance(_))));
        assert!(pearson_r2(&a, &a[..10]).is_err());

        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let x: Vec<f64> = (0..1000).map(|_| rng.random()).collect();
        let y: Vec<f64> = (0..1000).map(|_| rng.random()).collect();
        assert!(pearson_r2(&x, &y).unwrap() < 0.01);
    }

    #[test]
    fn peak_counting_respects_threshold_and_prominence() {
        let dt = 1.0 / 8192.0;
        let x: Vec<f64> = (0..8192)
            .map(|i| {
                let t = i as f64 * dt;
                (TAU * 500.0 * t).sin() + 0.1 * (TAU * 1000.0 * t).sin() + 1e-3 * (TAU * 1500.0 * t).sin()
            })
            .collect();
        let spec = power_spectrum(&x, dt, Window::Hann).unwrap();
        assert_eq!(count_peaks(&spec, 20.0, 4000.0, -40.0, 10.0).unwrap(), 2);
        assert_eq!(count_peaks(&spec, 20.0, 4000.0, -80.0, 10.0).unwrap(), 3);
        assert_eq!(count_peaks(&spec, 20.0, 4000.0, -10.0, 10.0).unwrap(), 1);
    }

    mod props {
        use super::*;
        use proptest::prelude::{prop_assert, proptest};

        proptest! {
            #[test]
            fn circular_shift_keeps_power(shift in 0usize..256, seed in 0u64..1000) {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let x: Vec<f64> = (0..256).map(|_| rng.random_range(-1.0..1.0)).collect();
                let mut y = x.clone();
                y.rotate_left(shift);
                let a = power_spectrum(&x, 1.0, Window::Rectangular).unwrap();
                let b = power_spectrum(&y, 1.0, Window::Rectangular).unwrap();
                let scale: f64 = a.power.iter().cloned().fold(0.0, f64::max);
                for (p, q) in a.power.iter().zip(&b.power) {
                    prop_assert!((p - q).abs() <= 1e-9 * scale);
                }
            }

            #[test]
            fn dominant_frequency_scale_invariant(scale in 1e-6f64..1e6, f in 50.0f64..400.0) {
                let dt = 1.0 / 2048.0;
                let x: Vec<f64> = (0..2048).map(|i| (TAU * f * i as f64 * dt).sin()).collect();
                let y: Vec<f64> = x.iter().map(|v| v * scale).collect();
                let a = dominant_frequency(&power_spectrum(&x, dt, Window::Hann).unwrap(), 10.0, 1000.0).unwrap();
                let b = dominant_frequency(&power_spectrum(&y, dt, Window::Hann).unwrap(), 10.0, 1000.0).unwrap();
                prop_assert!((a - b).abs() < 1e-9);
            }

            #[test]
            fn pearson_symmetric_and_affine_invariant(
                seed in 0u64..1000, m in 0.1f64..10.0, c in -10.0f64..10.0, neg in proptest::bool::ANY,
            ) {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let a: Vec<f64> = (0..64).map(|_| rng.random()).collect();
                let b: Vec<f64> = (0..64).map(|_| rng.random()).collect();
                let m = if neg { -m } else { m };
                let b2: Vec<f64> = b.iter().map(|x| m * x + c).collect();
                let r = pearson_r2(&a, &b).unwrap();
                prop_assert!((r - pearson_r2(&b, &a).unwrap()).abs() < 1e-12);
                prop_assert!((r - pearson_r2(&a, &b2).unwrap()).abs() < 1e-9);
                prop_assert!((0.0..=1.0).contains(&r));
            }
        }
    }
}
