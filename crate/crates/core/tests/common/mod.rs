#![allow(dead_code)]

use qkd_trojan::reflectometry::{ComponentKind, OpticalCircuit, OpticalComponent};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const KINDS: [ComponentKind; 6] = [
    ComponentKind::Connector,
    ComponentKind::BeamSplitter,
    ComponentKind::Attenuator,
    ComponentKind::PhaseModulator,
    ComponentKind::DetectorTap,
    ComponentKind::Filter,
];

/// 1 to 8 discrete reflectors between -50 and -20 dB, at most 1 dB of
/// insertion loss each, spaced 2.5 to 10 pulse widths apart.
pub fn random_circuit(seed: u64, pulse_width_m: f64) -> OpticalCircuit {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.random_range(1..=8);
    let mut pos = 0.0;
    let components = (0..n)
        .map(|_| {
            pos += rng.random_range(2.5..10.0) * pulse_width_m;
            let kind = KINDS[rng.random_range(0..KINDS.len())];
            OpticalComponent::new(kind, pos, rng.random_range(-50.0..-20.0), rng.random_range(-1.0..=0.0))
        })
        .collect();
    OpticalCircuit::new(components).unwrap()
}

/// Expected first-order echo of each component: (distance, power dB).
pub fn first_order(c: &OpticalCircuit) -> Vec<(f64, f64)> {
    c.components
        .iter()
        .enumerate()
        .filter(|(_, k)| k.is_reflector())
        .map(|(i, k)| (k.position_m, k.reflectance_db + 2.0 * c.loss_before_db(i)))
        .collect()
}

pub fn nearest(xs: impl IntoIterator<Item = f64>, x: f64) -> f64 {
    xs.into_iter()
        .min_by(|a, b| (a - x).abs().total_cmp(&(b - x).abs()))
        .unwrap_or(f64::NAN)
}
