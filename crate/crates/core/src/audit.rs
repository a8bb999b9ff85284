//! End-to-end Trojan-horse audit of one apparatus.
//!
//! The monitor detector bounds how much light Eve can inject without being
//! noticed; the circuit's reflection paths, the filter and the gating decide
//! how much of it comes back to her; the information bounds turn that into
//! bits per qubit, which is the extra privacy amplification to apply.

use std::fmt::{self, Write as _};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{parse_json, Error, Result};
use crate::info::{reduced_info, trojan_info, InformationGain};
use crate::output::sig9;
use crate::reflectometry::{ComponentKind, OpticalCircuit, PathOptions, ReflectionEvent};
use crate::stats::{multi_photon_prob_exact, MeanPhotonNumber, PhotonNumberDistribution, TransmissionFactor};
use crate::units::{db_serde, db_to_linear};

fn default_monitor_k() -> f64 {
    3.0
}

fn default_gate_duty() -> f64 {
    1.0
}

fn default_max_order() -> u32 {
    3
}

fn default_floor_db() -> f64 {
    -150.0
}

/// Wavelength filter at the apparatus input.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FilterBand {
    pub center_nm: f64,
    pub width_nm: f64,
    /// Out-of-band attenuation, one pass; `"-inf"` for a perfect filter.
    #[serde(with = "db_serde")]
    pub rejection_db: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CountermeasureConfig {
    /// Mean photon number per pulse above which the monitor raises an alarm.
    pub monitor_threshold_mean: f64,
    /// Fluctuation of the monitor reading, photons.
    #[serde(default)]
    pub monitor_sigma: f64,
    /// Sigmas of headroom granted to Eve.
    #[serde(default = "default_monitor_k")]
    pub monitor_k: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub filter_band: Option<FilterBand>,
    /// Fraction of time the modulator is active.
    #[serde(default = "default_gate_duty")]
    pub gate_duty: f64,
    /// One-way setting of the variable attenuator. Replaces the insertion
    /// loss of the circuit's first attenuator, or acts at the entry if the
    /// circuit has none. `None` keeps the circuit as written.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub attenuator_db: Option<f64>,
    #[serde(default)]
    pub phase_randomization: bool,
    /// Extra return loss for probes outside the modulator gate, dB.
    #[serde(default)]
    pub off_gate_penalty_db: f64,
}

impl CountermeasureConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::invalid(format!("countermeasures: {m}")));
        if !(self.monitor_threshold_mean >= 0.0 && self.monitor_threshold_mean.is_finite()) {
            return bad(format!(
                "monitor_threshold_mean must be >= 0, got {}",
                self.monitor_threshold_mean
            ));
        }
        if !(self.monitor_sigma >= 0.0 && self.monitor_sigma.is_finite()) {
            return bad(format!("monitor_sigma must be >= 0, got {}", self.monitor_sigma));
        }
        if !(self.monitor_k > 0.0 && self.monitor_k.is_finite()) {
            return bad(format!("monitor_k must be > 0, got {}", self.monitor_k));
        }
        if !(self.gate_duty > 0.0 && self.gate_duty <= 1.0) {
            return bad(format!("gate_duty must lie in (0, 1], got {}", self.gate_duty));
        }
        if let Some(a) = self.attenuator_db {
            if a.is_nan() || a > 0.0 || a == f64::NEG_INFINITY {
                return bad(format!("attenuator_db must be finite and <= 0, got {a}"));
            }
        }
        if let Some(f) = &self.filter_band {
            if f.rejection_db.is_nan() || f.rejection_db > 0.0 {
                return bad(format!("rejection_db must be <= 0, got {}", f.rejection_db));
            }
            if f.width_nm.is_nan() || f.width_nm <= 0.0 {
                return bad(format!("filter width must be > 0, got {}", f.width_nm));
            }
        }
        if self.off_gate_penalty_db.is_nan() || self.off_gate_penalty_db > 0.0 {
            return bad(format!(
                "off_gate_penalty_db must be <= 0, got {}",
                self.off_gate_penalty_db
            ));
        }
        Ok(())
    }
}

/// Largest per-pulse injection the monitor cannot tell from legitimate
/// fluctuation: `threshold + k * sigma`.
pub fn max_undetected_probe(cm: &CountermeasureConfig) -> f64 {
    cm.monitor_threshold_mean + cm.monitor_k * cm.monitor_sigma
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AttackScenario {
    pub circuit: OpticalCircuit,
    pub countermeasures: CountermeasureConfig,
    pub probe_wavelength_in_band: bool,
    pub probe_within_gate: bool,
    /// Reflection-path enumeration depth.
    pub max_order: u32,
    /// Echoes weaker than this are neglected.
    pub floor_db: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioFile {
    #[serde(default)]
    circuit: Option<OpticalCircuit>,
    #[serde(default)]
    circuit_file: Option<PathBuf>,
    countermeasures: CountermeasureConfig,
    #[serde(default = "yes")]
    probe_wavelength_in_band: bool,
    #[serde(default = "yes")]
    probe_within_gate: bool,
    #[serde(default = "default_max_order")]
    max_order: u32,
    #[serde(default = "default_floor_db")]
    floor_db: f64,
}

fn yes() -> bool {
    true
}

impl AttackScenario {
    pub fn new(circuit: OpticalCircuit, countermeasures: CountermeasureConfig) -> Result<Self> {
        let s = AttackScenario {
            circuit,
            countermeasures,
            probe_wavelength_in_band: true,
            probe_within_gate: true,
            max_order: default_max_order(),
            floor_db: default_floor_db(),
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        self.circuit.validate()?;
        self.countermeasures.validate()
    }

    /// Parses scenario JSON. The circuit is given inline as `circuit` or by
    /// path as `circuit_file`, resolved against `base_dir`.
    pub fn from_json(s: &str, base_dir: &Path) -> Result<Self> {
        let f: ScenarioFile = parse_json(s)?;
        let circuit = match (f.circuit, f.circuit_file) {
            (Some(c), None) => c,
            (None, Some(p)) => {
                let path = if p.is_absolute() { p } else { base_dir.join(p) };
                let text = std::fs::read_to_string(&path).map_err(|e| Error::Parse {
                    path: "circuit_file".into(),
                    message: format!("{}: {e}", path.display()),
                })?;
                OpticalCircuit::from_json(&text)?
            }
            _ => {
                return Err(Error::Parse {
                    path: "circuit".into(),
                    message: "exactly one of `circuit` and `circuit_file` is required".into(),
                })
            }
        };
        let s = AttackScenario {
            circuit,
            countermeasures: f.countermeasures,
            probe_wavelength_in_band: f.probe_wavelength_in_band,
            probe_within_gate: f.probe_within_gate,
            max_order: f.max_order,
            floor_db: f.floor_db,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let base = path.parent().unwrap_or(Path::new("."));
        Self::from_json(&std::fs::read_to_string(path)?, base)
    }

    fn path_options(&self) -> PathOptions {
        PathOptions::new(self.max_order, self.floor_db)
    }

    /// The circuit with the variable attenuator set per the countermeasures,
    /// plus the loss of an entry attenuator when the circuit has none.
    fn effective_circuit(&self) -> (OpticalCircuit, f64) {
        let mut c = self.circuit.clone();
        let first = c.indices_of(ComponentKind::Attenuator).next();
        match self.countermeasures.attenuator_db {
            None => (c, 0.0),
            Some(a) => match first {
                Some(i) => {
                    c.components[i].insertion_loss_db = a;
                    (c, 0.0)
                }
                None => (c, a),
            },
        }
    }

    /// Reflection events as Eve sees them, attenuator setting applied.
    pub fn reflection_events(&self) -> Result<Vec<ReflectionEvent>> {
        let (c, entry_db) = self.effective_circuit();
        let mut opts = self.path_options();
        opts.floor_db -= 2.0 * entry_db;
        if opts.floor_db >= 0.0 {
            return Ok(Vec::new());
        }
        let mut events = c.reflection_events(&opts)?;
        for e in &mut events {
            e.power_db += 2.0 * entry_db;
        }
        Ok(events)
    }

    /// Fraction of launched probe power returned to Eve.
    pub fn return_fraction(&self) -> Result<f64> {
        let paths: f64 = self.reflection_events()?.iter().map(|e| e.linear_power()).sum();
        let cm = &self.countermeasures;
        let filter = match (&cm.filter_band, self.probe_wavelength_in_band) {
            (Some(f), false) => db_to_linear(2.0 * f.rejection_db),
            _ => 1.0,
        };
        let gate = if self.probe_within_gate {
            1.0
        } else {
            db_to_linear(cm.off_gate_penalty_db)
        };
        Ok(paths * filter * gate)
    }

    /// Power transmission of the apparatus for light that goes in and comes
    /// back out: the first-order echo of the last Faraday mirror if there is
    /// one, otherwise a double pass through every component.
    pub fn go_return_transmission(&self) -> f64 {
        let (c, entry_db) = self.effective_circuit();
        let db = match c.indices_of(ComponentKind::FaradayMirror).last() {
            Some(i) => 2.0 * c.loss_before_db(i) + c.components[i].reflectance_db,
            None => 2.0 * c.loss_before_db(c.components.len()),
        };
        db_to_linear(db + 2.0 * entry_db)
    }
}

/// Mean photon number returned to Eve when she injects `mu_in` per pulse.
///
/// The filter's rejection is charged on the way in and on the way out.
pub fn back_reflected_mu(scenario: &AttackScenario, mu_in: f64) -> Result<f64> {
    if !(mu_in >= 0.0 && mu_in.is_finite()) {
        return Err(Error::invalid(format!(
            "probe mean photon number must be >= 0, got {mu_in}"
        )));
    }
    Ok(mu_in * scenario.return_fraction()?)
}

/// Worst-case multi-photon probabilities of the pulse leaving a 2-way
/// apparatus, for the two input families the analysis covers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TwoWayBound {
    /// Coherent input of mean `mu_in`: `(mu_in t)^2 / 2`.
    pub coherent: f64,
    /// Fock input `N = ceil(mu_in)`: `(N^2 - N) t^2 / 2`.
    pub fock: f64,
    /// Larger of the two plus the safety margin.
    pub bound: f64,
}

/// Leading-order multi-photon bounds, capped at 1. `margin_coeff` adds
/// `margin_coeff * (mu_in t)^3` on top; zero is already an upper bound for
/// both families, since `Prob(m >= 2) <= << n(n-1) >> t^2 / 2` holds exactly
/// for coherent and Fock inputs.
pub fn two_way_bound(mu_in: f64, t: TransmissionFactor, margin_coeff: f64) -> Result<TwoWayBound> {
    if !(mu_in >= 0.0 && mu_in.is_finite()) {
        return Err(Error::invalid(format!(
            "input mean photon number must be >= 0, got {mu_in}"
        )));
    }
    let t = t.get();
    let n = mu_in.ceil();
    let coherent = ((mu_in * t).powi(2) / 2.0).min(1.0);
    let fock = ((n * n - n) * t * t / 2.0).min(1.0);
    let bound = (coherent.max(fock) + margin_coeff.max(0.0) * (mu_in * t).powi(3)).min(1.0);
    Ok(TwoWayBound { coherent, fock, bound })
}

/// Multi-photon bound on the pulse Alice sends back out, given that Eve's
/// input carries at most `mu_in_bound` photons on average.
pub fn two_way_reduction_check(mu_in_bound: f64, t_go_return: TransmissionFactor) -> Result<f64> {
    Ok(two_way_bound(mu_in_bound, t_go_return, 0.0)?.bound)
}

/// Exact multi-photon probability for an explicit input photon-number
/// distribution after phase randomization and attenuation.
pub fn two_way_multi_photon(input: &PhotonNumberDistribution, t_go_return: TransmissionFactor) -> f64 {
    multi_photon_prob_exact(input, t_go_return)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AuditReport {
    pub mu_in_max: f64,
    pub mu_back: f64,
    pub info_bits: InformationGain,
    pub pa_fraction: f64,
    pub multi_photon_bound: f64,
    pub phase_randomization: bool,
    pub probe_within_gate: bool,
    pub return_loss_db: f64,
    pub go_return_transmission: f64,
    pub trojan_bits: f64,
    pub reduced_bits: f64,
    pub reflection_paths: usize,
}

impl AuditReport {
    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

impl fmt::Display for AuditReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows = [
            ("max undetected probe (photons/pulse)", sig9(self.mu_in_max)),
            ("return loss (dB)", sig9(self.return_loss_db)),
            ("reflection paths", self.reflection_paths.to_string()),
            ("back-reflected mean photon number", sig9(self.mu_back)),
            ("probe within gate", self.probe_within_gate.to_string()),
            ("phase randomization", self.phase_randomization.to_string()),
            ("info gain, phase reference (bits)", sig9(self.trojan_bits)),
            ("info gain, randomized (bits)", sig9(self.reduced_bits)),
            ("Eve information (bits/qubit)", sig9(self.info_bits.bits())),
            ("privacy amplification (bits/bit)", sig9(self.pa_fraction)),
            ("go-and-return transmission", sig9(self.go_return_transmission)),
            ("multi-photon bound", sig9(self.multi_photon_bound)),
        ];
        let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
        for (k, v) in rows {
            writeln!(f, "{k:<width$}  {v}")?;
        }
        Ok(())
    }
}

/// Runs the audit at the largest undetectable probe.
///
/// Outside the modulator gate nothing setting-dependent comes back, so the
/// information is zero there while `mu_back` is still reported.
pub fn run_audit(scenario: &AttackScenario) -> Result<AuditReport> {
    scenario.validate()?;
    let cm = &scenario.countermeasures;
    let mu_in_max = max_undetected_probe(cm);
    let events = scenario.reflection_events()?;
    let fraction = scenario.return_fraction()?;
    let mu_back = mu_in_max * fraction;
    let m = MeanPhotonNumber::new(mu_back)?;
    let (trojan, reduced) = (trojan_info(m), reduced_info(m));
    let info_bits = match (scenario.probe_within_gate, cm.phase_randomization) {
        (false, _) => InformationGain::ZERO,
        (true, true) => reduced,
        (true, false) => trojan,
    };
    let t = scenario.go_return_transmission();
    let multi_photon_bound = match TransmissionFactor::new(t) {
        Ok(t) => two_way_reduction_check(mu_in_max, t)?,
        Err(_) => 0.0,
    };
    Ok(AuditReport {
        mu_in_max,
        mu_back,
        info_bits,
        pa_fraction: info_bits.bits(),
        multi_photon_bound,
        phase_randomization: cm.phase_randomization,
        probe_within_gate: scenario.probe_within_gate,
        return_loss_db: 10.0 * fraction.log10(),
        go_return_transmission: t,
        trojan_bits: trojan.bits(),
        reduced_bits: reduced.bits(),
        reflection_paths: events.len(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PaBudgetRow {
    pub mu_in: f64,
    pub mu_back: f64,
    pub trojan_bits: f64,
    pub reduced_bits: f64,
}

/// Information bounds for each probe strength in `mu_grid` (photons
/// injected per pulse) against this scenario.
pub fn pa_budget_sweep(scenario: &AttackScenario, mu_grid: &[f64]) -> Result<Vec<PaBudgetRow>> {
    let fraction = scenario.return_fraction()?;
    mu_grid
        .iter()
        .map(|&mu_in| {
            if !(mu_in >= 0.0 && mu_in.is_finite()) {
                return Err(Error::invalid(format!("grid value must be >= 0, got {mu_in}")));
            }
            let mu_back = mu_in * fraction;
            let m = MeanPhotonNumber::new(mu_back)?;
            Ok(PaBudgetRow {
                mu_in,
                mu_back,
                trojan_bits: trojan_info(m).bits(),
                reduced_bits: reduced_info(m).bits(),
            })
        })
        .collect()
}

pub fn pa_budget_csv(rows: &[PaBudgetRow]) -> String {
    let mut out = String::from("mu_in,mu_back,trojan_bits,reduced_bits\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            sig9(r.mu_in),
            sig9(r.mu_back),
            sig9(r.trojan_bits),
            sig9(r.reduced_bits)
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reflectometry::OpticalComponent;
    use ComponentKind::*;

    fn cm(threshold: f64) -> CountermeasureConfig {
        CountermeasureConfig {
            monitor_threshold_mean: threshold,
            monitor_sigma: 0.0,
            monitor_k: 3.0,
            filter_band: None,
            gate_duty: 1.0,
            attenuator_db: None,
            phase_randomization: false,
            off_gate_penalty_db: 0.0,
        }
    }

    /// -10 dB reflector behind a 30 dB attenuator: -70 dB round trip.
    fn seventy_db_scenario(threshold: f64) -> AttackScenario {
        let circuit = OpticalCircuit::new(vec![
            OpticalComponent::new(Attenuator, 1.0, f64::NEG_INFINITY, 0.0),
            OpticalComponent::new(PhaseModulator, 3.0, -10.0, 0.0),
        ])
        .unwrap();
        let mut c = cm(threshold);
        c.attenuator_db = Some(-30.0);
        AttackScenario::new(circuit, c).unwrap()
    }

    #[test]
    fn monitor_bound() {
        assert_eq!(max_undetected_probe(&cm(1e6)), 1e6);
        let mut c = cm(1e6);
        c.monitor_sigma = 1e4;
        assert_eq!(max_undetected_probe(&c), 1.03e6);
        assert_eq!(max_undetected_probe(&cm(0.0)), 0.0);
    }

    #[test]
    fn back_reflection_arithmetic() {
        let s = seventy_db_scenario(1e6);
        assert!((back_reflected_mu(&s, 1e6).unwrap() - 0.1).abs() < 1e-12);
        assert_eq!(back_reflected_mu(&s, 0.0).unwrap(), 0.0);
        let one = back_reflected_mu(&s, 123.0).unwrap();
        assert_eq!(back_reflected_mu(&s, 246.0).unwrap(), 2.0 * one);
        assert!(back_reflected_mu(&s, -1.0).is_err());
    }

    #[test]
    fn entry_attenuator_when_circuit_has_none() {
        let circuit = OpticalCircuit::new(vec![OpticalComponent::new(FaradayMirror, 3.0, -10.0, 0.0)]).unwrap();
        let mut c = cm(1e6);
        c.attenuator_db = Some(-30.0);
        let s = AttackScenario::new(circuit, c).unwrap();
        assert!((back_reflected_mu(&s, 1e6).unwrap() - 0.1).abs() < 1e-12);
        assert!((s.go_return_transmission() - 1e-7).abs() < 1e-20);

        let mut buried = s.clone();
        buried.countermeasures.attenuator_db = Some(-80.0);
        assert_eq!(back_reflected_mu(&buried, 1e6).unwrap(), 0.0);
    }

    #[test]
    fn fig8_audit_values() {
        let mut s = seventy_db_scenario(1e6);
        let r = run_audit(&s).unwrap();
        assert!((r.mu_back - 0.1).abs() < 1e-12);
        assert!((r.info_bits.bits() - 0.135).abs() < 1e-3);
        assert_eq!(r.pa_fraction, r.info_bits.bits());
        s.countermeasures.phase_randomization = true;
        let r = run_audit(&s).unwrap();
        assert!((r.info_bits.bits() - 0.095).abs() < 1e-3);
    }

    #[test]
    fn perfect_countermeasures_leak_nothing() {
        let r = run_audit(&seventy_db_scenario(0.0)).unwrap();
        assert_eq!(r.mu_back, 0.0);
        assert_eq!(r.info_bits.bits(), 0.0);
        assert_eq!(r.pa_fraction, 0.0);
        assert_eq!(r.multi_photon_bound, 0.0);

        let mut s = seventy_db_scenario(1e6);
        s.countermeasures.filter_band = Some(FilterBand {
            center_nm: 1550.0,
            width_nm: 1.0,
            rejection_db: f64::NEG_INFINITY,
        });
        s.probe_wavelength_in_band = false;
        let r = run_audit(&s).unwrap();
        assert_eq!(r.mu_back, 0.0);
        assert_eq!(r.info_bits.bits(), 0.0);
    }

    #[test]
    fn off_gate_probe_reports_light_but_no_information() {
        let mut s = seventy_db_scenario(1e6);
        s.probe_within_gate = false;
        let r = run_audit(&s).unwrap();
        assert!((r.mu_back - 0.1).abs() < 1e-12);
        assert_eq!(r.info_bits.bits(), 0.0);
    }

    #[test]
    fn two_way_families() {
        let t = TransmissionFactor::new(0.01).unwrap();
        let b = two_way_bound(4.0, t, 0.0).unwrap();
        assert!((b.coherent - 0.04f64.powi(2) / 2.0).abs() < 1e-15);
        assert!((b.fock - 12.0 * 1e-4 / 2.0).abs() < 1e-15);
        assert!(b.fock < b.coherent);
        assert_eq!(two_way_reduction_check(0.0, t).unwrap(), 0.0);
        assert!(two_way_reduction_check(-1.0, t).is_err());
        assert_eq!(
            two_way_bound(1e6, TransmissionFactor::new(1e-4).unwrap(), 0.0)
                .unwrap()
                .bound,
            1.0
        );
        let with_margin = two_way_bound(4.0, t, 1.0).unwrap();
        assert!((with_margin.bound - b.bound - 0.04f64.powi(3)).abs() < 1e-15);

        let fock2 = PhotonNumberDistribution::fock(2);
        let t = TransmissionFactor::new(0.1).unwrap();
        assert!((two_way_multi_photon(&fock2, t) - 0.01).abs() < 1e-15);
    }

    #[test]
    fn sweep_rows() {
        let unit = AttackScenario::new(
            OpticalCircuit::new(vec![OpticalComponent::new(FaradayMirror, 1.0, 0.0, 0.0)]).unwrap(),
            cm(1.0),
        )
        .unwrap();
        let rows = pa_budget_sweep(&unit, &[0.0, 0.1]).unwrap();
        assert_eq!(
            rows[0],
            PaBudgetRow {
                mu_in: 0.0,
                mu_back: 0.0,
                trojan_bits: 0.0,
                reduced_bits: 0.0
            }
        );
        assert!((rows[1].mu_back - 0.1).abs() < 1e-15);
        assert!((rows[1].trojan_bits - 0.135).abs() < 1e-3);
        assert!((rows[1].reduced_bits - 0.095).abs() < 1e-3);
        assert!(pa_budget_sweep(&unit, &[-0.1]).is_err());
        assert!(pa_budget_csv(&rows).starts_with("mu_in,mu_back,trojan_bits,reduced_bits\n0,0,0,0\n"));
    }

    #[test]
    fn scenario_json() {
        let json = r#"{
            "circuit": {"components": [
                {"kind": "attenuator", "position_m": 1},
                {"kind": "phase_modulator", "position_m": 3, "reflectance_db": -10}
            ]},
            "countermeasures": {"monitor_threshold_mean": 1e6, "attenuator_db": -30}
        }"#;
        let s = AttackScenario::from_json(json, Path::new(".")).unwrap();
        assert_eq!(s.countermeasures.monitor_k, 3.0);
        assert!(s.probe_within_gate && s.probe_wavelength_in_band);
        assert!((run_audit(&s).unwrap().mu_back - 0.1).abs() < 1e-12);

        let missing = r#"{"countermeasures": {"monitor_threshold_mean": 1}}"#;
        assert!(matches!(
            AttackScenario::from_json(missing, Path::new(".")),
            Err(Error::Parse { .. })
        ));
        let typo = r#"{"circuit": {"components": [{"kind": "mirror", "position_m": 1}]},
                       "countermeasures": {"monitor_threshold_mean": 1}}"#;
        match AttackScenario::from_json(typo, Path::new(".")) {
            Err(Error::Parse { path, .. }) => assert_eq!(path, "circuit.components[0].kind"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn report_text_table() {
        let text = run_audit(&seventy_db_scenario(1e6)).unwrap().to_string();
        assert!(text.contains("back-reflected mean photon number"));
        assert!(text.lines().count() >= 10);
    }
}
