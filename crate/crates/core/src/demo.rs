//! Bundled example inputs, shared by the examples, the tests and the CLI docs.

use std::path::Path;

use crate::audit::AttackScenario;
use crate::error::Result;
use crate::reflectometry::OpticalCircuit;

/// A plug-and-play sender: beam splitter, connector, variable attenuator,
/// monitor detector, phase modulator and Faraday mirror joined by fiber.
pub const ALICE_CIRCUIT_JSON: &str = include_str!("../assets/alice_plug_and_play.json");

/// A receiver behind an unbalanced interferometer with 11.5 m arm difference.
pub const BOB_CIRCUIT_JSON: &str = include_str!("../assets/bob_interferometer.json");

/// A single -10 dB reflector behind a 30 dB attenuator (-70 dB round trip)
/// and a monitor that tolerates 10^6 photons per pulse: 0.1 photons return.
pub const AUDIT_SCENARIO_JSON: &str = include_str!("../assets/audit_scenario.json");

pub fn alice_circuit() -> OpticalCircuit {
    OpticalCircuit::from_json(ALICE_CIRCUIT_JSON).expect("bundled circuit is valid")
}

pub fn bob_circuit() -> OpticalCircuit {
    OpticalCircuit::from_json(BOB_CIRCUIT_JSON).expect("bundled circuit is valid")
}

pub fn audit_scenario() -> Result<AttackScenario> {
    AttackScenario::from_json(AUDIT_SCENARIO_JSON, Path::new("."))
}
