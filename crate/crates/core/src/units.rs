//! Decibel helpers.
//!
//! All powers and losses in this crate are ratios in dB (`<= 0` for passive
//! elements). `-inf` dB means no light at all; JSON has no infinity, so it is
//! written as the string `"-inf"`.

use serde::{Deserialize, Deserializer, Serializer};

#[inline]
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

#[inline]
pub fn linear_to_db(x: f64) -> f64 {
    10.0 * x.log10()
}

/// Serde adapter for dB values that may be `-inf`.
pub mod db_serde {
    use super::*;

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Num(f64),
        Text(String),
    }

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if *v == f64::NEG_INFINITY {
            s.serialize_str("-inf")
        } else {
            s.serialize_f64(*v)
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Num(x) => Ok(x),
            Repr::Text(t) => match t.trim().to_ascii_lowercase().as_str() {
                "-inf" | "-infinity" => Ok(f64::NEG_INFINITY),
                other => Err(serde::de::Error::custom(format!(
                    "expected a number or \"-inf\", got {other:?}"
                ))),
            },
        }
    }
}

pub(crate) fn neg_inf() -> f64 {
    f64::NEG_INFINITY
}
