//! Eve's per-qubit information gain from back-reflected probe light.
//!
//! Eve knows the basis and must tell `|alpha, 0>` from `|0, alpha>`. Holding
//! a phase reference she discriminates the two coherent states optimally;
//! once the legitimate party randomizes the phase, she is left with two
//! Poisson mixtures and learns the setting only when she counts a photon.

use std::f64::consts::LN_2;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::output::sig9;
use crate::stats::MeanPhotonNumber;

/// Shannon information in bits per qubit, in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct InformationGain(f64);

impl InformationGain {
    pub const ZERO: Self = InformationGain(0.0);

    pub fn new(bits: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&bits) {
            return Err(Error::invalid(format!(
                "information gain must lie in [0, 1], got {bits}"
            )));
        }
        Ok(InformationGain(bits))
    }

    /// Clamps rounding excursions just outside `[0, 1]`.
    fn clamped(bits: f64) -> Self {
        InformationGain(bits.clamp(0.0, 1.0))
    }

    #[inline]
    pub fn bits(self) -> f64 {
        self.0
    }
}

/// Optimal probability of guessing which of two states was sent, in `[1/2, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
#[serde(transparent)]
pub struct DiscriminationProbability(f64);

impl DiscriminationProbability {
    #[inline]
    pub fn get(self) -> f64 {
        self.0
    }
}

/// `H(p) = -p log2 p - (1-p) log2 (1-p)` with `0 log 0 = 0`.
pub fn binary_entropy(p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::invalid(format!("binary entropy needs p in [0, 1], got {p}")));
    }
    let term = |x: f64| if x > 0.0 { -x * x.log2() } else { 0.0 };
    Ok(term(p) + term(1.0 - p))
}

/// `sqrt(1 - e^{-2 mu})`, the trace distance between `|alpha,0>` and `|0,alpha>`.
fn trace_distance(mu: MeanPhotonNumber) -> f64 {
    (-(-2.0 * mu.get()).exp_m1()).sqrt()
}

/// Helstrom guessing probability `(1 + sqrt(1 - e^{-2 mu})) / 2`.
pub fn discrimination_p(mu: MeanPhotonNumber) -> DiscriminationProbability {
    DiscriminationProbability(((1.0 + trace_distance(mu)) / 2.0).min(1.0))
}

/// Information gain with a phase reference: `1 - H(p)`.
pub fn trojan_info(mu: MeanPhotonNumber) -> InformationGain {
    // 1 - H((1+s)/2) = [(1+s) ln(1+s) + (1-s) ln(1-s)] / (2 ln 2),
    // written with ln_1p so small s keeps its relative precision.
    let s = trace_distance(mu);
    let minus = if s < 1.0 { (1.0 - s) * (-s).ln_1p() } else { 0.0 };
    let bits = ((1.0 + s) * s.ln_1p() + minus) / (2.0 * LN_2);
    InformationGain::clamped(bits)
}

/// Small-signal slope `mu / ln 2`, clamped to one bit.
pub fn trojan_info_small_mu(mu: MeanPhotonNumber) -> InformationGain {
    InformationGain::clamped(mu.get() / LN_2)
}

/// Probability that a coherent pulse of mean `mu` holds at least one photon.
pub fn non_empty_prob(mu: MeanPhotonNumber) -> f64 {
    -(-mu.get()).exp_m1()
}

/// Information gain after phase randomization: `1 - e^{-mu}`.
pub fn reduced_info(mu: MeanPhotonNumber) -> InformationGain {
    InformationGain::clamped(non_empty_prob(mu))
}

/// How many times more Eve learns without phase randomization.
pub fn randomization_gain_ratio(mu: MeanPhotonNumber) -> Result<f64> {
    if mu.get() == 0.0 {
        return Err(Error::invalid("gain ratio is undefined at mu = 0"));
    }
    Ok(trojan_info(mu).bits() / reduced_info(mu).bits())
}

/// One row of an information-gain sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InfoGainPoint {
    pub mu: f64,
    pub trojan_bits: f64,
    pub reduced_bits: f64,
    /// `None` at `mu = 0`.
    pub ratio: Option<f64>,
}

impl InfoGainPoint {
    pub fn at(mu: MeanPhotonNumber) -> Self {
        InfoGainPoint {
            mu: mu.get(),
            trojan_bits: trojan_info(mu).bits(),
            reduced_bits: reduced_info(mu).bits(),
            ratio: randomization_gain_ratio(mu).ok(),
        }
    }
}

pub fn info_gain_sweep(grid: &[f64]) -> Result<Vec<InfoGainPoint>> {
    grid.iter()
        .map(|&m| MeanPhotonNumber::new(m).map(InfoGainPoint::at))
        .collect()
}

/// CSV with columns `mu,trojan_bits,reduced_bits,ratio`; the ratio is left
/// empty where undefined.
pub fn info_gain_csv(points: &[InfoGainPoint]) -> String {
    let mut out = String::from("mu,trojan_bits,reduced_bits,ratio\n");
    for p in points {
        let ratio = p.ratio.map(sig9).unwrap_or_default();
        let _ = writeln!(
            out,
            "{},{},{},{}",
            sig9(p.mu),
            sig9(p.trojan_bits),
            sig9(p.reduced_bits),
            ratio
        );
    }
    out
}

/// `n` points spaced logarithmically over `[lo, hi]`.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![lo],
        _ => {
            let (a, b) = (lo.ln(), hi.ln());
            (0..n)
                .map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp())
                .collect()
        }
    }
}

/// `n` points spaced linearly over `[lo, hi]`.
pub fn linear_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![lo],
        _ => (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect(),
    }
}
