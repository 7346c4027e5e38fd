//! Textual scores and square-pulse forcing signals.
//!
//! Score format (UTF-8, conventionally `*.score`):
//!
//! ```text
//! ; comment lines start with ';'
//! tempo=120 beats_per_bar=4
//! B3  1/2
//! C#4 1/2
//! 49  1        ; key numbers are accepted too (A4 = 49)
//! R   2        ; rest
//! ```
//!
//! The first non-blank line is the header. Every following line holds one
//! event: a pitch (note name, piano key number or `R`) and a duration in
//! beats, written as an integer or a fraction.

use std::str::FromStr;

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{lit, to_f64, Error, Result, Scalar};

/// Duration in beats.
pub type Beats = Ratio<u32>;

/// Frequency of piano key `n` (A4 = 49 = 440 Hz) in equal temperament.
pub fn key_frequency<T: Scalar>(key: i64) -> Result<T> {
    if !(1..=88).contains(&key) {
        return Err(Error::KeyOutOfRange(key));
    }
    let exponent = lit::<T>((key - 49) as f64) / lit(12.0);
    Ok(lit::<T>(2.0).powf(exponent) * lit(440.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pitch {
    Key(u8),
    Rest,
}

impl FromStr for Pitch {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.eq_ignore_ascii_case("r") || s.eq_ignore_ascii_case("rest") {
            return Ok(Pitch::Rest);
        }
        if let Ok(n) = s.parse::<i64>() {
            return key_in_range(n);
        }

        let mut chars = s.chars();
        let letter = chars.next().ok_or("empty pitch")?;
        let semitone: i64 = match letter.to_ascii_uppercase() {
            'C' => 0,
            'D' => 2,
            'E' => 4,
            'F' => 5,
            'G' => 7,
            'A' => 9,
            'B' => 11,
            _ => return Err(format!("unrecognised pitch `{s}`")),
        };
        let rest = chars.as_str();
        let (accidental, octave) = match rest.strip_prefix('#') {
            Some(o) => (1, o),
            None => match rest.strip_prefix('b') {
                Some(o) => (-1, o),
                None => (0, rest),
            },
        };
        let octave: i64 = octave.parse().map_err(|_| format!("missing or bad octave in `{s}`"))?;
        key_in_range(12 * octave + semitone + accidental - 8)
    }
}

fn key_in_range(n: i64) -> Result<Pitch, String> {
    if (1..=88).contains(&n) {
        Ok(Pitch::Key(n as u8))
    } else {
        Err(format!("piano key {n} outside 1..=88"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NoteEvent {
    pub pitch: Pitch,
    pub duration_beats: Beats,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Score {
    pub tempo_bpm: f64,
    pub beats_per_bar: u32,
    pub events: Vec<NoteEvent>,
}

impl Score {
    pub fn seconds_per_beat(&self) -> f64 {
        60.0 / self.tempo_bpm
    }

    pub fn bar_seconds(&self) -> f64 {
        self.beats_per_bar as f64 * self.seconds_per_beat()
    }

    pub fn total_beats(&self) -> Beats {
        self.events
            .iter()
            .fold(Beats::from_integer(0), |acc, e| acc + e.duration_beats)
    }

    pub fn duration_seconds(&self) -> f64 {
        ratio_f64(self.total_beats()) * self.seconds_per_beat()
    }

    /// Highest sounding key, if any note is not a rest.
    pub fn highest_key(&self) -> Option<u8> {
        self.events
            .iter()
            .filter_map(|e| match e.pitch {
                Pitch::Key(k) => Some(k),
                Pitch::Rest => None,
            })
            .max()
    }
}

fn ratio_f64(r: Beats) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

pub fn parse_score(text: &str) -> Result<Score> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, strip_comment(l).trim()))
        .filter(|(_, l)| !l.is_empty());

    let (header_line, header) = lines.next().ok_or(Error::EmptyScore)?;
    let (tempo_bpm, beats_per_bar) = parse_header(header).map_err(|message| Error::Parse {
        line: header_line,
        message,
    })?;

    let events = lines
        .map(|(line, l)| parse_event(l).map_err(|message| Error::Parse { line, message }))
        .collect::<Result<Vec<_>>>()?;
    if events.is_empty() {
        return Err(Error::EmptyScore);
    }

    Ok(Score {
        tempo_bpm,
        beats_per_bar,
        events,
    })
}

fn strip_comment(line: &str) -> &str {
    line.split(';').next().unwrap_or("")
}

fn parse_header(line: &str) -> Result<(f64, u32), String> {
    let mut tempo = None;
    let mut beats_per_bar = 4;
    for pair in line.split_whitespace() {
        let (key, value) = pair
            .split_once('=')
            .ok_or_else(|| format!("expected key=value in header, found `{pair}`"))?;
        match key {
            "tempo" => {
                let t: f64 = value.parse().map_err(|_| format!("bad tempo `{value}`"))?;
                if !(t.is_finite() && t > 0.0) {
                    return Err(format!("tempo must be > 0, got {value}"));
                }
                tempo = Some(t);
            }
            "beats_per_bar" => {
                beats_per_bar = value
                    .parse()
                    .ok()
                    .filter(|&b: &u32| b >= 1)
                    .ok_or_else(|| format!("beats_per_bar must be an integer >= 1, got `{value}`"))?;
            }
            other => return Err(format!("unknown header key `{other}`")),
        }
    }
    let tempo = tempo.ok_or("header must set tempo=<bpm>")?;
    Ok((tempo, beats_per_bar))
}

fn parse_event(line: &str) -> Result<NoteEvent, String> {
    let mut fields = line.split_whitespace();
    let pitch: Pitch = fields.next().ok_or("empty event")?.parse()?;
    let duration = fields
        .next()
        .ok_or("missing duration")
        .and_then(|d| parse_beats(d).ok_or("bad duration"))
        .map_err(|e| format!("{e} in `{line}`"))?;
    if let Some(extra) = fields.next() {
        return Err(format!("unexpected token `{extra}`"));
    }
    Ok(NoteEvent {
        pitch,
        duration_beats: duration,
    })
}

fn parse_beats(s: &str) -> Option<Beats> {
    let r = match s.split_once('/') {
        Some((n, d)) => {
            let d: u32 = d.parse().ok()?;
            if d == 0 {
                return None;
            }
            Beats::new(n.parse().ok()?, d)
        }
        None => Beats::from_integer(s.parse().ok()?),
    };
    (*r.numer() > 0).then_some(r)
}

/// Sampled forcing waveform `P_a` with values in `[-1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PressureSignal<T> {
    pub samples: Vec<T>,
    pub dt_seconds: T,
    /// Pressure amplitude `alpha` (Pa) the waveform is meant to be scaled by.
    pub amplitude_scale: Option<T>,
}

impl<T: Scalar> PressureSignal<T> {
    pub fn new(samples: Vec<T>, dt_seconds: T) -> Result<Self> {
        if !(dt_seconds > T::zero()) {
            return Err(Error::domain("dt_seconds", to_f64(dt_seconds), "must be > 0"));
        }
        if let Some(bad) = samples.iter().find(|s| !(s.abs() <= T::one())) {
            return Err(Error::domain("p_a sample", to_f64(*bad), "must lie in [-1, 1]"));
        }
        Ok(Self {
            samples,
            dt_seconds,
            amplitude_scale: None,
        })
    }

    /// All-zero forcing of the given length.
    pub fn silence(len: usize, dt_seconds: T) -> Result<Self> {
        Self::new(vec![T::zero(); len], dt_seconds)
    }

    pub fn with_amplitude(mut self, alpha: T) -> Self {
        self.amplitude_scale = Some(alpha);
        self
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn duration_seconds(&self) -> T {
        lit::<T>(self.samples.len() as f64) * self.dt_seconds
    }

    /// Zero-order-hold value at `t` seconds; zero outside the sampled span.
    pub fn value_at(&self, t: T) -> T {
        if t < T::zero() {
            return T::zero();
        }
        (t / self.dt_seconds)
            .floor()
            .to_usize()
            .and_then(|i| self.samples.get(i).copied())
            .unwrap_or_else(T::zero)
    }

    pub fn times(&self) -> impl Iterator<Item = T> + '_ {
        (0..self.samples.len()).map(move |i| lit::<T>(i as f64) * self.dt_seconds)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Polarity {
    #[default]
    Positive,
    Negative,
}

impl Polarity {
    pub fn sign<T: Scalar>(self) -> T {
        match self {
            Polarity::Positive => T::one(),
            Polarity::Negative => -T::one(),
        }
    }
}

impl FromStr for Polarity {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "+1" | "1" | "positive" | "+" => Ok(Polarity::Positive),
            "-1" | "negative" | "-" => Ok(Polarity::Negative),
            _ => Err(format!("polarity must be +1 or -1, got `{s}`")),
        }
    }
}

/// Shape of the square waves a score is rendered with.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PulseOptions {
    pub polarity: Polarity,
    /// Fraction of each period the pulse is on.
    pub duty: f64,
    /// Silent fraction at the end of every note.
    pub articulation: f64,
}

impl Default for PulseOptions {
    fn default() -> Self {
        Self {
            polarity: Polarity::Positive,
            duty: 0.5,
            articulation: 0.1,
        }
    }
}

impl PulseOptions {
    pub fn validate(&self) -> Result<()> {
        if !(self.duty > 0.0 && self.duty < 1.0) {
            return Err(Error::domain("duty", self.duty, "must lie in (0, 1)"));
        }
        if !(self.articulation >= 0.0 && self.articulation < 1.0) {
            return Err(Error::domain("articulation", self.articulation, "must lie in [0, 1)"));
        }
        Ok(())
    }
}

/// Encodes every note as a unipolar square wave at its key frequency.
///
/// Within the sounding part `(1 - articulation)` of a note the signal takes
/// the value `polarity` for the first `duty` of each period and 0 otherwise;
/// rests and articulation gaps are 0. The phase restarts at every note.
pub fn render_pulse_train<T: Scalar>(score: &Score, dt: T, opts: &PulseOptions) -> Result<PressureSignal<T>> {
    opts.validate()?;
    let dt_f = to_f64(dt);
    if !(dt_f > 0.0) {
        return Err(Error::domain("dt", dt_f, "must be > 0"));
    }
    if score.events.is_empty() {
        return Err(Error::EmptyScore);
    }
    if let Some(key) = score.highest_key() {
        let freq: f64 = key_frequency(key as i64)?;
        let limit = 1.0 / (2.0 * freq);
        if dt_f >= limit {
            return Err(Error::DtTooCoarse {
                key,
                freq,
                dt: dt_f,
                limit,
            });
        }
    }

    let spb = score.seconds_per_beat();
    let total = (score.duration_seconds() / dt_f).round() as usize;
    let level: T = opts.polarity.sign();
    let mut samples = vec![T::zero(); total];

    let mut start_beats = Beats::from_integer(0);
    for event in &score.events {
        let end_beats = start_beats + event.duration_beats;
        let start = ratio_f64(start_beats) * spb;
        let end = ratio_f64(end_beats) * spb;
        start_beats = end_beats;

        let Pitch::Key(key) = event.pitch else {
            continue;
        };
        let freq: f64 = key_frequency(key as i64)?;
        let sounding = (end - start) * (1.0 - opts.articulation);
        let first = (start / dt_f).round() as usize;
        let last = ((end / dt_f).round() as usize).min(total);
        for (i, s) in samples.iter_mut().enumerate().take(last).skip(first) {
            let local = i as f64 * dt_f - start;
            if local < sounding && (local * freq).fract() < opts.duty {
                *s = level;
            }
        }
    }

    PressureSignal::new(samples, dt)
}

/// `[start, end)` in seconds of the silent tail of every sounding note.
pub fn articulation_gaps(score: &Score, opts: &PulseOptions) -> Vec<(f64, f64)> {
    let spb = score.seconds_per_beat();
    let mut start = 0.0;
    let mut gaps = Vec::new();
    for ev in &score.events {
        let dur = ratio_f64(ev.duration_beats) * spb;
        if matches!(ev.pitch, Pitch::Key(_)) && opts.articulation > 0.0 {
            gaps.push((start + (1.0 - opts.articulation) * dur, start + dur));
        }
        start += dur;
    }
    gaps
}

/// Bit stream with a fixed symbol duration.
#[derive(Debug, Clone, PartialEq)]
pub struct BinarySequence<T> {
    pub bits: Vec<u8>,
    pub symbol_seconds: T,
}

impl<T: Scalar> BinarySequence<T> {
    pub fn new(bits: Vec<u8>, symbol_seconds: T) -> Result<Self> {
        if !(symbol_seconds > T::zero()) {
            return Err(Error::domain("symbol_seconds", to_f64(symbol_seconds), "must be > 0"));
        }
        if let Some(&b) = bits.iter().find(|&&b| b > 1) {
            return Err(Error::domain("bit", b as f64, "must be 0 or 1"));
        }
        Ok(Self { bits, symbol_seconds })
    }

    /// Parses a string of `0`/`1` characters.
    pub fn from_bit_str(s: &str, symbol_seconds: T) -> Result<Self> {
        let bits = s
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                _ => Err(Error::Parse {
                    line: 1,
                    message: format!("unexpected character `{c}` in bit string"),
                }),
            })
            .collect::<Result<Vec<u8>>>()?;
        Self::new(bits, symbol_seconds)
    }

    /// Uniform random bits reproducible from `seed`.
    pub fn random(len: usize, seed: u64, symbol_seconds: T) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let bits = (0..len).map(|_| rng.random_range(0..=1u8)).collect();
        Self::new(bits, symbol_seconds)
    }

    pub fn as_inputs(&self) -> Vec<T> {
        self.bits.iter().map(|&b| lit(b as f64)).collect()
    }
}

/// Encodes bits as unit pulses: `1` holds +1 for one symbol slot, `0` holds 0.
///
/// Slot boundaries are placed at `round(n * symbol_seconds / dt)` so that the
/// accumulated timing error never exceeds one sample.
pub fn encode_binary<T: Scalar>(seq: &BinarySequence<T>, dt: T) -> Result<PressureSignal<T>> {
    if seq.bits.is_empty() {
        return Err(Error::Empty("bit sequence"));
    }
    let ratio = to_f64(seq.symbol_seconds) / to_f64(dt);
    if !(ratio >= 1.0) {
        return Err(Error::domain("dt", to_f64(dt), "must not exceed the symbol duration"));
    }
    let boundary = |n: usize| (n as f64 * ratio).round() as usize;
    let mut samples = Vec::with_capacity(boundary(seq.bits.len()));
    for (n, &bit) in seq.bits.iter().enumerate() {
        let value = if bit == 1 { T::one() } else { T::zero() };
        samples.resize(boundary(n + 1), value);
    }
    PressureSignal::new(samples, dt)
}
