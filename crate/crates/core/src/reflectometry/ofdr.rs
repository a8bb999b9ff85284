use std::f64::consts::PI;

use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use super::paths::ReflectionEvent;
use super::{add_noise, Trace, TraceNoise, DEFAULT_GROUP_INDEX, SPEED_OF_LIGHT};
use crate::error::{Error, Result};
use crate::units::{db_to_linear, linear_to_db};

/// Span between the strongest possible beat and the instrument floor.
pub const DEFAULT_DYNAMIC_RANGE_DB: f64 = 80.0;

/// Linear optical-frequency sweep and its detector sampling.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub sweep_rate_hz_per_s: f64,
    pub duration_s: f64,
    pub sample_rate_hz: f64,
}

impl SweepSpec {
    pub fn samples(&self) -> usize {
        (self.duration_s * self.sample_rate_hz).round() as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OfdrConfig {
    pub sweep: SweepSpec,
    pub coherence_length_m: f64,
    /// Reflection inside the instrument that acts as local oscillator.
    pub lo_reflectance_db: f64,
    pub group_index: f64,
    pub dynamic_range_db: f64,
    #[serde(default)]
    pub noise: Option<TraceNoise>,
}

impl OfdrConfig {
    pub fn new(sweep: SweepSpec, coherence_length_m: f64, lo_reflectance_db: f64) -> Self {
        OfdrConfig {
            sweep,
            coherence_length_m,
            lo_reflectance_db,
            group_index: DEFAULT_GROUP_INDEX,
            dynamic_range_db: DEFAULT_DYNAMIC_RANGE_DB,
            noise: None,
        }
    }

    /// Beat frequency of an echo at one-way distance `z`.
    pub fn beat_frequency(&self, z: f64) -> f64 {
        self.sweep.sweep_rate_hz_per_s * 2.0 * self.group_index * z / SPEED_OF_LIGHT
    }

    /// Distance covered by one transform bin.
    pub fn bin_m(&self) -> f64 {
        let df = self.sweep.sample_rate_hz / self.sweep.samples() as f64;
        df * SPEED_OF_LIGHT / (2.0 * self.group_index * self.sweep.sweep_rate_hz_per_s)
    }

    /// Longest distance whose beat stays below Nyquist.
    pub fn max_range_m(&self) -> f64 {
        self.sweep.sample_rate_hz / 2.0 * SPEED_OF_LIGHT / (2.0 * self.group_index * self.sweep.sweep_rate_hz_per_s)
    }

    fn validate(&self) -> Result<()> {
        let s = &self.sweep;
        for (name, v) in [
            ("sweep rate", s.sweep_rate_hz_per_s),
            ("sweep duration", s.duration_s),
            ("sample rate", s.sample_rate_hz),
            ("coherence length", self.coherence_length_m),
            ("group index", self.group_index),
            ("dynamic range", self.dynamic_range_db),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::invalid(format!("{name} must be positive and finite, got {v}")));
            }
        }
        let lo = self.lo_reflectance_db;
        if lo.is_nan() || lo > 0.0 || lo == f64::NEG_INFINITY {
            return Err(Error::invalid(
                "local-oscillator reflectance must be finite and <= 0 dB",
            ));
        }
        if s.samples() < 16 {
            return Err(Error::invalid(format!("sweep yields only {} samples", s.samples())));
        }
        Ok(())
    }
}

/// 4-term Blackman-Harris window (-92 dB sidelobes).
fn blackman_harris(n: usize) -> Vec<f64> {
    const A: [f64; 4] = [0.35875, 0.48829, 0.14128, 0.01168];
    let m = n as f64;
    (0..n)
        .map(|i| {
            let x = 2.0 * PI * i as f64 / m;
            A[0] - A[1] * x.cos() + A[2] * (2.0 * x).cos() - A[3] * (3.0 * x).cos()
        })
        .collect()
}

/// Frequency-domain reflectometer trace.
///
/// The detector sees the local-oscillator reflection beat against every echo
/// at `f = sweep_rate * 2 n_g z / c`. A beat's amplitude is
/// `sqrt(P_lo * P_echo)` times the visibility `exp(-z / coherence_length)`.
/// The windowed signal is Fourier transformed and the one-sided power
/// spectrum is mapped back to distance, scaled so that a tone centered on a
/// bin reads its squared amplitude. Samples are floored at
/// `dynamic_range_db` below the strongest beat the echoes could produce at
/// full visibility.
pub fn synthesize_ofdr(events: &[ReflectionEvent], cfg: &OfdrConfig) -> Result<Trace> {
    cfg.validate()?;
    let nyquist = cfg.sweep.sample_rate_hz / 2.0;
    let max_beat = events
        .iter()
        .map(|e| cfg.beat_frequency(e.distance_m))
        .fold(0.0, f64::max);
    if max_beat > nyquist {
        return Err(Error::NyquistViolation {
            max_beat_hz: max_beat,
            nyquist_hz: nyquist,
        });
    }

    let n = cfg.sweep.samples();
    let lo = db_to_linear(cfg.lo_reflectance_db);
    let tones: Vec<(f64, f64)> = events
        .iter()
        .map(|e| {
            let visibility = (-e.distance_m / cfg.coherence_length_m).exp();
            let amp = (lo * e.linear_power()).sqrt() * visibility;
            (
                2.0 * PI * cfg.beat_frequency(e.distance_m) / cfg.sweep.sample_rate_hz,
                amp,
            )
        })
        .filter(|(_, a)| *a > 0.0)
        .collect();

    let window = blackman_harris(n);
    let mut buf: Vec<Complex64> = window
        .iter()
        .enumerate()
        .map(|(i, w)| {
            let s: f64 = tones.iter().map(|(omega, a)| a * (omega * i as f64).cos()).sum();
            Complex64::new(s * w, 0.0)
        })
        .collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);

    let gain = 2.0 / window.iter().sum::<f64>();
    let strongest = events.iter().map(|e| e.linear_power()).fold(0.0, f64::max);
    let floor = (lo * strongest).max(f64::MIN_POSITIVE) * db_to_linear(-cfg.dynamic_range_db);
    let mut lin: Vec<f64> = buf[..=n / 2]
        .iter()
        .map(|x| (x.norm() * gain).powi(2) + floor)
        .collect();
    if let Some(noise) = &cfg.noise {
        add_noise(&mut lin, floor, noise);
    }
    Ok(Trace {
        start_m: 0.0,
        step_m: cfg.bin_m(),
        power_db: lin.into_iter().map(linear_to_db).collect(),
        noise_floor_db: linear_to_db(floor),
    })
}
