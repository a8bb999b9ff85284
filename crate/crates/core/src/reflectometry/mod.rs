//! Reflectometry of an optical apparatus seen from its input port.
//!
//! An apparatus is an ordered list of components along one fiber path. Each
//! discrete reflector sends part of the probe back; light may also bounce
//! between reflectors several times before leaving. [`enumerate_reflection_paths`]
//! lists those echoes, [`synthesize_otdr`] and [`synthesize_ofdr`] turn them
//! into instrument traces, and [`detect_peaks`] reads them back.
//!
//! Distances are one-way equivalent: half the round-trip optical path, which
//! is how reflectometers label their axis.

mod circuit;
mod ofdr;
mod otdr;
mod paths;
mod peaks;

pub use circuit::{ComponentKind, InterferometerSpec, OpticalCircuit, OpticalComponent};
pub use ofdr::{synthesize_ofdr, OfdrConfig, SweepSpec, DEFAULT_DYNAMIC_RANGE_DB};
pub use otdr::{synthesize_otdr, OtdrConfig, RayleighSpan, SamplingGrid};
pub use paths::{
    enumerate_reflection_paths, expand_interferometer, PathOptions, ReflectionEvent, DEFAULT_CANDIDATE_CAP,
};
pub use peaks::{detect_peaks, Peak};

use std::fmt::Write as _;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::info::{trojan_info, InformationGain};
use crate::output::sig9;
use crate::stats::MeanPhotonNumber;
use crate::units::db_to_linear;

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Group index of standard single-mode fiber.
pub const DEFAULT_GROUP_INDEX: f64 = 1.468;

/// A reflectometer trace on a uniform distance grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trace {
    pub start_m: f64,
    pub step_m: f64,
    pub power_db: Vec<f64>,
    pub noise_floor_db: f64,
}

impl Trace {
    pub fn len(&self) -> usize {
        self.power_db.len()
    }

    pub fn is_empty(&self) -> bool {
        self.power_db.is_empty()
    }

    pub fn distance(&self, i: usize) -> f64 {
        self.start_m + self.step_m * i as f64
    }

    /// Power at the grid sample nearest to `distance_m`.
    pub fn power_at(&self, distance_m: f64) -> Option<f64> {
        let i = ((distance_m - self.start_m) / self.step_m).round();
        if i < 0.0 {
            return None;
        }
        self.power_db.get(i as usize).copied()
    }

    /// CSV with columns `distance_m,power_db`.
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(24 * self.len() + 20);
        out.push_str("distance_m,power_db\n");
        for (i, p) in self.power_db.iter().enumerate() {
            let _ = writeln!(out, "{},{}", sig9(self.distance(i)), sig9(*p));
        }
        out
    }
}

/// Additive Gaussian noise on the linear power of each trace sample.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceNoise {
    /// Standard deviation relative to the trace's noise floor power.
    pub sigma_rel_floor: f64,
    pub seed: u64,
}

pub(crate) fn add_noise(linear: &mut [f64], floor_lin: f64, noise: &TraceNoise) {
    let mut rng = ChaCha8Rng::seed_from_u64(noise.seed);
    let normal = Normal::new(0.0, noise.sigma_rel_floor * floor_lin).expect("finite sigma");
    for x in linear.iter_mut() {
        *x = (*x + normal.sample(&mut rng)).max(floor_lin * 1e-3);
    }
}

/// Information Eve extracts from a phase modulator whose two settings differ
/// in reflectance by `contrast_db`.
///
/// `mu_probe` is the mean photon number returned to Eve by the modulator in
/// its reference setting; the other setting returns `mu_probe * 10^(contrast/10)`.
/// Eve is credited with the coherent-state gain at the differential level
/// `mu_probe * |1 - 10^(contrast/10)|`.
pub fn modulator_distinguishability(contrast_db: f64, mu_probe: MeanPhotonNumber) -> InformationGain {
    let mu_eff = mu_probe.get() * (1.0 - db_to_linear(contrast_db)).abs();
    trojan_info(MeanPhotonNumber::new(mu_eff).unwrap_or(MeanPhotonNumber::ZERO))
}
