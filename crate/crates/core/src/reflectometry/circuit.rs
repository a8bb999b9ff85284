use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{parse_json, Error, Result};
use crate::units::{db_serde, neg_inf};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ComponentKind {
    FiberSpan,
    Connector,
    BeamSplitter,
    Attenuator,
    PhaseModulator,
    FaradayMirror,
    DetectorTap,
    Filter,
}

/// One element of the apparatus.
///
/// `reflectance_db` is the discrete reflection of the element (`-inf`, the
/// default, for none). `insertion_loss_db` is charged every time light passes
/// through. Fiber spans additionally backscatter `rayleigh_db_per_m` along
/// `length_m`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OpticalComponent {
    pub kind: ComponentKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub position_m: f64,
    #[serde(default = "neg_inf", with = "db_serde")]
    pub reflectance_db: f64,
    #[serde(default)]
    pub insertion_loss_db: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub length_m: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rayleigh_db_per_m: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub split_ratio: Option<f64>,
    /// Phase modulators: reflectance change between the two settings, dB.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub setting_contrast_db: Option<f64>,
}

impl OpticalComponent {
    pub fn new(kind: ComponentKind, position_m: f64, reflectance_db: f64, insertion_loss_db: f64) -> Self {
        OpticalComponent {
            kind,
            label: None,
            position_m,
            reflectance_db,
            insertion_loss_db,
            length_m: None,
            rayleigh_db_per_m: None,
            split_ratio: None,
            setting_contrast_db: None,
        }
    }

    pub fn fiber_span(position_m: f64, length_m: f64, rayleigh_db_per_m: f64, loss_db: f64) -> Self {
        OpticalComponent {
            length_m: Some(length_m),
            rayleigh_db_per_m: Some(rayleigh_db_per_m),
            ..Self::new(ComponentKind::FiberSpan, position_m, f64::NEG_INFINITY, loss_db)
        }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    /// Label if set, otherwise the kind in snake case.
    pub fn name(&self) -> String {
        match &self.label {
            Some(l) => l.clone(),
            None => serde_json::to_value(self.kind)
                .ok()
                .and_then(|v| v.as_str().map(str::to_owned))
                .unwrap_or_default(),
        }
    }

    pub fn is_reflector(&self) -> bool {
        self.reflectance_db > f64::NEG_INFINITY
    }

    /// Far end of the component (its position, unless it is a fiber span).
    pub fn end_m(&self) -> f64 {
        self.position_m + self.length_m.unwrap_or(0.0)
    }
}

/// Unbalanced interferometer at the apparatus input.
///
/// Light reflected behind it can take the short or the long arm on the way
/// in and again on the way out, so each echo is seen three times.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InterferometerSpec {
    /// Peak spacing produced by one long-arm passage, meters.
    pub arm_difference_m: f64,
    /// Fraction of power routed to the short arm at each passage.
    pub split_ratio: f64,
    /// Echoes beyond this distance are split; defaults to the entry.
    #[serde(default)]
    pub position_m: f64,
}

impl InterferometerSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.arm_difference_m > 0.0 && self.arm_difference_m.is_finite()) {
            return Err(Error::InvalidCircuit(format!(
                "interferometer arm difference must be > 0, got {}",
                self.arm_difference_m
            )));
        }
        if !(self.split_ratio >= 0.0 && self.split_ratio <= 1.0) {
            return Err(Error::InvalidCircuit(format!(
                "interferometer split ratio must lie in [0, 1], got {}",
                self.split_ratio
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OpticalCircuit {
    pub components: Vec<OpticalComponent>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub interferometer: Option<InterferometerSpec>,
}

impl OpticalCircuit {
    pub fn new(components: Vec<OpticalComponent>) -> Result<Self> {
        let c = OpticalCircuit {
            components,
            interferometer: None,
        };
        c.validate()?;
        Ok(c)
    }

    pub fn with_interferometer(mut self, spec: InterferometerSpec) -> Result<Self> {
        spec.validate()?;
        self.interferometer = Some(spec);
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if self.components.is_empty() {
            return Err(Error::InvalidCircuit("circuit has no components".into()));
        }
        for (i, c) in self.components.iter().enumerate() {
            let at = |msg: String| Error::InvalidCircuit(format!("components[{i}] ({}): {msg}", c.name()));
            if !c.position_m.is_finite() || c.position_m < 0.0 {
                return Err(at(format!("position_m must be finite and >= 0, got {}", c.position_m)));
            }
            if c.reflectance_db > 0.0 || c.reflectance_db.is_nan() {
                return Err(at(format!("reflectance_db must be <= 0, got {}", c.reflectance_db)));
            }
            if c.insertion_loss_db.is_nan() || c.insertion_loss_db > 0.0 || c.insertion_loss_db == f64::NEG_INFINITY {
                return Err(at(format!(
                    "insertion_loss_db must be finite and <= 0, got {}",
                    c.insertion_loss_db
                )));
            }
            if let Some(r) = c.split_ratio {
                if !(r > 0.0 && r < 1.0) {
                    return Err(at(format!("split_ratio must lie in (0, 1), got {r}")));
                }
            }
            if c.kind == ComponentKind::FiberSpan {
                match c.length_m {
                    Some(l) if l > 0.0 && l.is_finite() => {}
                    other => return Err(at(format!("fiber_span needs length_m > 0, got {other:?}"))),
                }
                if let Some(r) = c.rayleigh_db_per_m {
                    if r.is_nan() || r > 0.0 {
                        return Err(at(format!("rayleigh_db_per_m must be <= 0, got {r}")));
                    }
                }
            }
            if i > 0 {
                let prev = &self.components[i - 1];
                if c.position_m <= prev.position_m {
                    return Err(at("positions must be strictly increasing".into()));
                }
                if c.position_m < prev.end_m() {
                    return Err(at(format!("starts inside the fiber span ending at {} m", prev.end_m())));
                }
            }
        }
        if let Some(spec) = &self.interferometer {
            spec.validate()?;
        }
        Ok(())
    }

    /// Parses and validates circuit JSON. Parse errors name the offending
    /// field, e.g. `components[2].kind`.
    pub fn from_json(s: &str) -> Result<Self> {
        let c: OpticalCircuit = parse_json(s)?;
        c.validate()?;
        Ok(c)
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("circuit serializes")
    }

    /// Sum of one-pass insertion losses of the components in front of `index`.
    pub fn loss_before_db(&self, index: usize) -> f64 {
        self.components[..index].iter().map(|c| c.insertion_loss_db).sum()
    }

    /// Indices of components of the given kind.
    pub fn indices_of(&self, kind: ComponentKind) -> impl Iterator<Item = usize> + '_ {
        self.components
            .iter()
            .enumerate()
            .filter(move |(_, c)| c.kind == kind)
            .map(|(i, _)| i)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ComponentKind::*;

    #[test]
    fn parses_minimal_circuit() {
        let c =
            OpticalCircuit::from_json(r#"{"components":[{"kind":"connector","position_m":100,"reflectance_db":-40}]}"#)
                .unwrap();
        assert_eq!(c.components[0].kind, Connector);
        assert_eq!(c.components[0].insertion_loss_db, 0.0);
        assert!(c.interferometer.is_none());
    }

    #[test]
    fn unknown_kind_names_the_field() {
        let err = OpticalCircuit::from_json(
            r#"{"components":[{"kind":"connector","position_m":1},{"kind":"laser","position_m":2}]}"#,
        )
        .unwrap_err();
        match err {
            Error::Parse { path, message } => {
                assert_eq!(path, "components[1].kind");
                assert!(message.contains("laser"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_bad_circuits() {
        assert!(matches!(
            OpticalCircuit::from_json(r#"{"components":[]}"#),
            Err(Error::InvalidCircuit(_))
        ));
        let unordered = vec![
            OpticalComponent::new(Connector, 5.0, -40.0, 0.0),
            OpticalComponent::new(Connector, 5.0, -40.0, 0.0),
        ];
        assert!(OpticalCircuit::new(unordered).is_err());
        let gain = vec![OpticalComponent::new(Connector, 5.0, -40.0, 0.5)];
        assert!(OpticalCircuit::new(gain).is_err());
        let bright = vec![OpticalComponent::new(FaradayMirror, 5.0, 1.0, 0.0)];
        assert!(OpticalCircuit::new(bright).is_err());
        let overlap = vec![
            OpticalComponent::fiber_span(0.0, 10.0, -70.0, 0.0),
            OpticalComponent::new(Connector, 5.0, -40.0, 0.0),
        ];
        assert!(OpticalCircuit::new(overlap).is_err());
        let c = OpticalCircuit::new(vec![OpticalComponent::new(Connector, 1.0, -40.0, 0.0)]).unwrap();
        let bad = InterferometerSpec {
            arm_difference_m: 0.0,
            split_ratio: 0.5,
            position_m: 0.0,
        };
        assert!(c.with_interferometer(bad).is_err());
        assert!(matches!(OpticalCircuit::from_json("{"), Err(Error::Parse { .. })));
    }

    #[test]
    fn neg_inf_reflectance_in_json() {
        let c = OpticalCircuit::new(vec![
            OpticalComponent::fiber_span(0.0, 10.0, -70.0, -0.002),
            OpticalComponent::new(Attenuator, 10.0, f64::NEG_INFINITY, -3.0),
        ])
        .unwrap();
        let back = OpticalCircuit::from_json(&c.to_json_pretty()).unwrap();
        assert_eq!(back, c);
        assert!(c.to_json_pretty().contains("\"-inf\""));
        assert!((c.loss_before_db(2) + 3.002).abs() < 1e-12);
    }
}
