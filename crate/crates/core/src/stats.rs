//! Photon-number statistics of a probe pulse.
//!
//! Everything here works on diagonal Fock mixtures: once a global phase is
//! randomized, the state of a single optical mode is fully described by its
//! photon-number distribution, and a lossy element of power transmission `t`
//! acts on it as binomial thinning (each photon survives independently with
//! probability `t`).

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use rustfft::num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::output::sig9;

/// Allowed deviation of a distribution's total mass from one.
pub const NORMALIZATION_TOL: f64 = 1e-9;

/// Largest probability mass a truncated Poisson vector may discard.
pub const TRUNCATION_TAIL: f64 = 1e-12;

/// Above this cutoff coherent inputs are attenuated in closed form instead of
/// by explicit thinning, which is quadratic in the cutoff.
pub const DEFAULT_DIRECT_CAP: usize = 4096;

/// Shots per Monte Carlo shard. Shard `i` draws from a generator seeded with
/// `seed + i`, so the result does not depend on how shards are scheduled.
pub const MC_SHARD_SHOTS: u64 = 1 << 16;

/// Mean photon number `|alpha|^2` of a coherent state.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
#[serde(transparent)]
pub struct MeanPhotonNumber(f64);

impl MeanPhotonNumber {
    pub const ZERO: Self = MeanPhotonNumber(0.0);

    pub fn new(mu: f64) -> Result<Self> {
        if !mu.is_finite() || mu < 0.0 {
            return Err(Error::invalid(format!(
                "mean photon number must be finite and >= 0, got {mu}"
            )));
        }
        Ok(MeanPhotonNumber(mu))
    }

    #[inline]
    pub fn get(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for MeanPhotonNumber {
    type Error = Error;
    fn try_from(mu: f64) -> Result<Self> {
        Self::new(mu)
    }
}

impl<'de> Deserialize<'de> for MeanPhotonNumber {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let mu = f64::deserialize(d)?;
        Self::new(mu).map_err(serde::de::Error::custom)
    }
}

/// Power transmission of a passive element, in `(0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
#[serde(transparent)]
pub struct TransmissionFactor(f64);

impl TransmissionFactor {
    pub const UNITY: Self = TransmissionFactor(1.0);

    pub fn new(t: f64) -> Result<Self> {
        if !(t > 0.0 && t <= 1.0) {
            return Err(Error::invalid(format!("transmission must lie in (0, 1], got {t}")));
        }
        Ok(TransmissionFactor(t))
    }

    /// Transmission for a loss given in dB (`loss_db <= 0`).
    pub fn from_db(loss_db: f64) -> Result<Self> {
        Self::new(10f64.powf(loss_db / 10.0))
    }

    #[inline]
    pub fn get(self) -> f64 {
        self.0
    }

    pub fn to_db(self) -> f64 {
        10.0 * self.0.log10()
    }
}

impl<'de> Deserialize<'de> for TransmissionFactor {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let t = f64::deserialize(d)?;
        Self::new(t).map_err(serde::de::Error::custom)
    }
}

/// Normalized probability vector over photon number `n = 0..=n_max`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DistributionRepr", into = "DistributionRepr")]
pub struct PhotonNumberDistribution {
    probs: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct DistributionRepr {
    n_max: usize,
    probs: Vec<f64>,
}

impl TryFrom<DistributionRepr> for PhotonNumberDistribution {
    type Error = Error;
    fn try_from(r: DistributionRepr) -> Result<Self> {
        if r.probs.len() != r.n_max + 1 {
            return Err(Error::InvalidDistribution(format!(
                "n_max = {} but {} probabilities given",
                r.n_max,
                r.probs.len()
            )));
        }
        PhotonNumberDistribution::new(r.probs)
    }
}

impl From<PhotonNumberDistribution> for DistributionRepr {
    fn from(d: PhotonNumberDistribution) -> Self {
        DistributionRepr {
            n_max: d.n_max(),
            probs: d.probs,
        }
    }
}

impl PhotonNumberDistribution {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::InvalidDistribution("empty probability vector".into()));
        }
        if let Some((n, p)) = probs.iter().enumerate().find(|(_, p)| !(p.is_finite() && **p >= 0.0)) {
            return Err(Error::InvalidDistribution(format!("entry {n} is {p}")));
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::InvalidDistribution(format!("entries sum to {sum}")));
        }
        Ok(PhotonNumberDistribution { probs })
    }

    /// The vacuum state `|0>`.
    pub fn vacuum() -> Self {
        Self::fock(0)
    }

    /// The Fock state `|n>`.
    pub fn fock(n: usize) -> Self {
        let mut probs = vec![0.0; n + 1];
        probs[n] = 1.0;
        PhotonNumberDistribution { probs }
    }

    pub fn n_max(&self) -> usize {
        self.probs.len() - 1
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// Probability of exactly `n` photons; zero beyond the cutoff.
    pub fn prob(&self, n: usize) -> f64 {
        self.probs.get(n).copied().unwrap_or(0.0)
    }

    pub fn mean(&self) -> f64 {
        self.probs.iter().enumerate().map(|(n, p)| n as f64 * p).sum()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,prob\n");
        for (n, p) in self.probs.iter().enumerate() {
            let _ = writeln!(out, "{n},{}", sig9(*p));
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("distribution serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

/// Truncated Poisson distribution of mean `mu` over `0..=n_max`.
///
/// Fails with [`Error::TailTooHeavy`] when the mass beyond `n_max` is not
/// below [`TRUNCATION_TAIL`].
pub fn poisson_distribution(mu: MeanPhotonNumber, n_max: usize) -> Result<PhotonNumberDistribution> {
    let mu = mu.get();
    if mu == 0.0 {
        let mut probs = vec![0.0; n_max + 1];
        probs[0] = 1.0;
        return Ok(PhotonNumberDistribution { probs });
    }
    let probs: Vec<f64> = PoissonTerms::new(mu).take(n_max + 1).collect();
    let tail = poisson_upper_tail(mu, n_max, probs.iter().sum());
    if tail >= TRUNCATION_TAIL {
        return Err(Error::TailTooHeavy {
            n_max,
            tail,
            limit: TRUNCATION_TAIL,
        });
    }
    PhotonNumberDistribution::new(probs)
}

/// Smallest cutoff for which [`poisson_distribution`] succeeds.
pub fn poisson_cutoff(mu: MeanPhotonNumber) -> usize {
    let m = mu.get();
    if m == 0.0 {
        return 0;
    }
    let mut head = 0.0;
    for (n, p) in PoissonTerms::new(m).enumerate() {
        head += p;
        if n as f64 >= m && poisson_upper_tail(m, n, head) < TRUNCATION_TAIL {
            return n;
        }
    }
    unreachable!("Poisson terms are infinite")
}

/// Poisson pmf terms by the ratio recurrence, carried in log space so that
/// `exp(-mu)` never underflows for large means.
struct PoissonTerms {
    ln_mu: f64,
    ln_p: f64,
    n: usize,
}

impl PoissonTerms {
    fn new(mu: f64) -> Self {
        PoissonTerms {
            ln_mu: mu.ln(),
            ln_p: -mu,
            n: 0,
        }
    }
}

impl Iterator for PoissonTerms {
    type Item = f64;
    fn next(&mut self) -> Option<f64> {
        if self.n > 0 {
            self.ln_p += self.ln_mu - (self.n as f64).ln();
        }
        self.n += 1;
        Some(self.ln_p.exp())
    }
}

fn poisson_upper_tail(mu: f64, n_max: usize, head: f64) -> f64 {
    if (n_max as f64) < mu {
        // Past-the-mode mass is at least ~1/2; the complement is accurate enough.
        return (1.0 - head).max(0.0);
    }
    let mut tail = 0.0;
    for p in PoissonTerms::new(mu).skip(n_max + 1) {
        tail += p;
        if p <= tail * 1e-17 || p == 0.0 {
            break;
        }
    }
    tail
}

/// Fock-basis amplitudes `c_n = e^{-mu/2} alpha^n / sqrt(n!)` of the coherent
/// state with `|alpha|^2 = mu` and `arg(alpha) = phase`.
pub fn coherent_amplitudes(mu: MeanPhotonNumber, phase: f64, n_max: usize) -> Vec<Complex64> {
    let r = mu.get().sqrt();
    let mut out = Vec::with_capacity(n_max + 1);
    let mut mag = (-mu.get() / 2.0).exp();
    for n in 0..=n_max {
        if n > 0 {
            mag *= r / (n as f64).sqrt();
        }
        out.push(Complex64::from_polar(mag, phase * n as f64));
    }
    out
}

/// Averages a pure state over a uniformly random global phase, leaving the
/// diagonal `|c_n|^2`.
pub fn phase_randomize(amplitudes: &[Complex64]) -> Result<PhotonNumberDistribution> {
    let probs: Vec<f64> = amplitudes.iter().map(|c| c.norm_sqr()).collect();
    let sum: f64 = probs.iter().sum();
    if probs.is_empty() || (sum - 1.0).abs() > NORMALIZATION_TOL {
        return Err(Error::NotNormalized { sum });
    }
    PhotonNumberDistribution::new(probs)
}

/// Binomial thinning: the photon-number distribution after a lossy element of
/// transmission `t`,
///
/// `q_m = t^m * sum_{n >= m} C(n, m) p_n (1 - t)^(n - m)`.
///
/// The binomial row for each `n` is anchored at its mode and filled outward by
/// the term-ratio recurrence, so no factorial is ever formed.
pub fn attenuate(d: &PhotonNumberDistribution, t: TransmissionFactor) -> PhotonNumberDistribution {
    let t = t.get();
    if t == 1.0 {
        return d.clone();
    }
    let n_max = d.n_max();
    let ln_fact = ln_factorials(n_max);
    let (ln_t, ln_s) = (t.ln(), (-t).ln_1p());
    let up = t / (1.0 - t);
    let mut q = vec![0.0; n_max + 1];

    for (n, &p) in d.probs.iter().enumerate() {
        if p == 0.0 {
            continue;
        }
        let mode = (((n + 1) as f64 * t).floor() as usize).min(n);
        let anchor =
            (ln_fact[n] - ln_fact[mode] - ln_fact[n - mode] + mode as f64 * ln_t + (n - mode) as f64 * ln_s).exp();

        let mut b = anchor;
        for (m, qm) in q.iter_mut().enumerate().take(n + 1).skip(mode) {
            if m > mode {
                b *= (n - m + 1) as f64 / m as f64 * up;
            }
            if b == 0.0 {
                break;
            }
            *qm += p * b;
        }
        b = anchor;
        for m in (0..mode).rev() {
            b *= (m + 1) as f64 / (n - m) as f64 / up;
            if b == 0.0 {
                break;
            }
            q[m] += p * b;
        }
    }
    PhotonNumberDistribution { probs: q }
}

/// Attenuated coherent state of mean `mu`. Below `direct_cap` photons this
/// thins an explicit Poisson vector; above it the closed form `Poisson(mu t)`
/// is used.
pub fn attenuate_coherent(
    mu: MeanPhotonNumber,
    t: TransmissionFactor,
    direct_cap: usize,
) -> Result<PhotonNumberDistribution> {
    let cutoff = poisson_cutoff(mu);
    if cutoff > direct_cap {
        let out = MeanPhotonNumber::new(mu.get() * t.get())?;
        return poisson_distribution(out, poisson_cutoff(out));
    }
    Ok(attenuate(&poisson_distribution(mu, cutoff)?, t))
}

fn ln_factorials(n_max: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(n_max + 1);
    let mut acc = 0.0;
    out.push(0.0);
    for k in 1..=n_max {
        acc += (k as f64).ln();
        out.push(acc);
    }
    out
}

/// `k`-th factorial moment `<< n (n-1) ... (n-k+1) >>`.
pub fn factorial_moment(d: &PhotonNumberDistribution, k: usize) -> Result<f64> {
    if k < 1 {
        return Err(Error::invalid("factorial moment order must be >= 1"));
    }
    Ok(d.probs
        .iter()
        .enumerate()
        .skip(k - 1)
        .map(|(n, p)| {
            let falling: f64 = (0..k).map(|j| (n - j) as f64).product();
            falling * p
        })
        .sum())
}

/// Exact probability that at least two photons survive transmission `t`.
///
/// Summed directly over `m >= 2` rather than as `1 - q_0 - q_1`, which would
/// cancel catastrophically for small `t`.
pub fn multi_photon_prob_exact(d: &PhotonNumberDistribution, t: TransmissionFactor) -> f64 {
    attenuate(d, t).probs.iter().skip(2).sum()
}

/// Leading-order multi-photon probability `<< n(n-1) >> t^2 / 2`.
pub fn multi_photon_prob_leading(d: &PhotonNumberDistribution, t: TransmissionFactor) -> f64 {
    let moment = factorial_moment(d, 2).expect("order 2 is valid");
    moment * t.get() * t.get() / 2.0
}

/// Total-variation distance; the shorter vector is zero-padded.
pub fn tv_distance(a: &PhotonNumberDistribution, b: &PhotonNumberDistribution) -> f64 {
    let len = a.probs.len().max(b.probs.len());
    let sum: f64 = (0..len).map(|n| (a.prob(n) - b.prob(n)).abs()).sum();
    (sum / 2.0).min(1.0)
}

/// Empirical thinning of a Fock state `|n_in>`: each of `shots` trials lets
/// every photon survive with an independent Bernoulli(`t`) draw.
///
/// Uses ChaCha8 seeded through `SeedableRng::seed_from_u64`. Shots are split
/// into shards of [`MC_SHARD_SHOTS`]; shard `i` uses seed `seed + i`. Shards
/// run in parallel and their integer counts are summed, so the result is
/// bit-identical to a sequential run.
pub fn monte_carlo_thin(n_in: usize, t: TransmissionFactor, shots: u64, seed: u64) -> Result<PhotonNumberDistribution> {
    if shots < 1 {
        return Err(Error::invalid("Monte Carlo needs at least one shot"));
    }
    let t = t.get();
    let shards = shots.div_ceil(MC_SHARD_SHOTS);
    let counts = (0..shards)
        .into_par_iter()
        .map(|shard| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(shard));
            let len = MC_SHARD_SHOTS.min(shots - shard * MC_SHARD_SHOTS);
            let mut counts = vec![0u64; n_in + 1];
            for _ in 0..len {
                let survivors = (0..n_in).filter(|_| rng.random_bool(t)).count();
                counts[survivors] += 1;
            }
            counts
        })
        .reduce(
            || vec![0u64; n_in + 1],
            |mut a, b| {
                a.iter_mut().zip(&b).for_each(|(x, y)| *x += y);
                a
            },
        );
    let probs = counts.iter().map(|&c| c as f64 / shots as f64).collect();
    PhotonNumberDistribution::new(probs)
}
