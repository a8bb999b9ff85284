use serde::{Deserialize, Serialize};

use super::circuit::{ComponentKind, OpticalCircuit};
use super::paths::ReflectionEvent;
use super::{add_noise, Trace, TraceNoise};
use crate::error::{Error, Result};
use crate::units::{db_to_linear, linear_to_db};

/// Uniform distance grid `start_m, start_m + step_m, ... <= stop_m`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SamplingGrid {
    pub start_m: f64,
    pub stop_m: f64,
    pub step_m: f64,
}

impl SamplingGrid {
    pub fn len(&self) -> usize {
        ((self.stop_m - self.start_m) / self.step_m + 1e-9).floor() as usize + 1
    }

    pub fn is_empty(&self) -> bool {
        self.stop_m < self.start_m
    }

    /// Grid from one pulse width before the entry to two past the furthest
    /// feature, sampled at a quarter pulse width.
    pub fn covering(events: &[ReflectionEvent], spans: &[RayleighSpan], pulse_width_m: f64) -> Self {
        let far = events
            .iter()
            .map(|e| e.distance_m)
            .chain(spans.iter().map(|s| s.start_m + s.length_m))
            .fold(0.0, f64::max);
        SamplingGrid {
            start_m: -pulse_width_m,
            stop_m: far + 2.0 * pulse_width_m,
            step_m: pulse_width_m / 4.0,
        }
    }
}

/// Distributed backscatter of one fiber span, covering `[start_m, start_m + length_m)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RayleighSpan {
    pub start_m: f64,
    pub length_m: f64,
    /// Backscatter per meter of fiber, dB/m.
    pub level_db_per_m: f64,
    /// Round-trip loss accumulated before the span, dB.
    pub round_trip_loss_db: f64,
    /// One-pass loss of the span itself, dB; spread uniformly along it.
    pub span_loss_db: f64,
}

impl OpticalCircuit {
    /// Rayleigh contributions of the circuit's fiber spans.
    pub fn rayleigh_spans(&self) -> Vec<RayleighSpan> {
        self.components
            .iter()
            .enumerate()
            .filter(|(_, c)| c.kind == ComponentKind::FiberSpan)
            .filter_map(|(i, c)| {
                Some(RayleighSpan {
                    start_m: c.position_m,
                    length_m: c.length_m?,
                    level_db_per_m: c.rayleigh_db_per_m?,
                    round_trip_loss_db: 2.0 * self.loss_before_db(i),
                    span_loss_db: c.insertion_loss_db,
                })
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OtdrConfig {
    pub pulse_width_m: f64,
    pub grid: SamplingGrid,
    /// Level of a trace with no backscatter at all.
    pub noise_floor_db: f64,
    #[serde(default)]
    pub noise: Option<TraceNoise>,
}

impl OtdrConfig {
    pub const DEFAULT_NOISE_FLOOR_DB: f64 = -120.0;

    pub fn new(pulse_width_m: f64, grid: SamplingGrid) -> Self {
        OtdrConfig {
            pulse_width_m,
            grid,
            noise_floor_db: Self::DEFAULT_NOISE_FLOOR_DB,
            noise: None,
        }
    }
}

/// Pulsed reflectometer trace.
///
/// Every echo appears as a rectangular pulse of width `pulse_width_m`
/// centered on its distance; fiber spans add a continuous level of
/// `rayleigh_db_per_m` integrated over the pulse width. Contributions add in
/// linear power, so echoes closer than a pulse width merge.
pub fn synthesize_otdr(events: &[ReflectionEvent], rayleigh: &[RayleighSpan], cfg: &OtdrConfig) -> Result<Trace> {
    let w = cfg.pulse_width_m;
    if !(w > 0.0 && w.is_finite()) {
        return Err(Error::invalid(format!("pulse width must be > 0, got {w}")));
    }
    let g = cfg.grid;
    if g.step_m.is_nan() || g.step_m <= 0.0 || g.step_m > w / 2.0 {
        return Err(Error::invalid(format!(
            "grid step {} m must be positive and at most half the pulse width {} m",
            g.step_m, w
        )));
    }
    if g.is_empty() {
        return Err(Error::invalid("sampling grid is empty"));
    }
    let n = g.len();
    let floor = db_to_linear(cfg.noise_floor_db);
    let mut lin = vec![floor; n];
    let x = |i: usize| g.start_m + g.step_m * i as f64;
    // sample indices within [lo, hi]
    let span = |lo: f64, hi: f64| {
        let a = ((lo - g.start_m) / g.step_m - 1e-9).ceil().max(0.0) as usize;
        let b = ((hi - g.start_m) / g.step_m + 1e-9).floor();
        (a, if b < 0.0 { None } else { Some((b as usize).min(n - 1)) })
    };

    for s in rayleigh {
        let per_pulse = db_to_linear(s.level_db_per_m) * w;
        if let (a, Some(b)) = span(s.start_m, s.start_m + s.length_m) {
            for (i, v) in lin.iter_mut().enumerate().take(b + 1).skip(a) {
                if x(i) >= s.start_m + s.length_m {
                    break;
                }
                let frac = (x(i) - s.start_m) / s.length_m;
                *v += per_pulse * db_to_linear(s.round_trip_loss_db + 2.0 * s.span_loss_db * frac);
            }
        }
    }
    for e in events {
        let p = e.linear_power();
        if let (a, Some(b)) = span(e.distance_m - w / 2.0, e.distance_m + w / 2.0) {
            for v in lin.iter_mut().take(b + 1).skip(a) {
                *v += p;
            }
        }
    }
    if let Some(noise) = &cfg.noise {
        add_noise(&mut lin, floor, noise);
    }
    Ok(Trace {
        start_m: g.start_m,
        step_m: g.step_m,
        power_db: lin.into_iter().map(linear_to_db).collect(),
        noise_floor_db: cfg.noise_floor_db,
    })
}
