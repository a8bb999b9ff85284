use serde::{Deserialize, Serialize};

use super::circuit::{InterferometerSpec, OpticalCircuit};
use crate::error::{Error, Result};
use crate::units::{db_to_linear, linear_to_db};

pub const DEFAULT_CANDIDATE_CAP: usize = 1_000_000;

/// One echo returned to the input port.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReflectionEvent {
    /// One-way equivalent distance: half the round-trip path length.
    pub distance_m: f64,
    /// Returned power relative to the launched power.
    pub power_db: f64,
    /// Number of reflections along the path (odd).
    pub order: u32,
    /// Indices of the reflecting components, in the order visited.
    #[serde(default)]
    pub reflectors: Vec<usize>,
}

impl ReflectionEvent {
    pub fn round_trip_m(&self) -> f64 {
        2.0 * self.distance_m
    }

    pub fn linear_power(&self) -> f64 {
        db_to_linear(self.power_db)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathOptions {
    pub max_order: u32,
    /// Echoes weaker than this are dropped.
    pub floor_db: f64,
    /// Maximum number of candidate path extensions examined, counted before
    /// the floor is applied.
    pub candidate_cap: usize,
}

impl PathOptions {
    pub fn new(max_order: u32, floor_db: f64) -> Self {
        PathOptions {
            max_order,
            floor_db,
            candidate_cap: DEFAULT_CANDIDATE_CAP,
        }
    }
}

impl Default for PathOptions {
    fn default() -> Self {
        PathOptions::new(3, -150.0)
    }
}

struct Walker<'a> {
    pos: Vec<f64>,
    refl: Vec<f64>,
    /// `prefix[k]`: one-pass loss of components `0..k`.
    prefix: Vec<f64>,
    opts: &'a PathOptions,
    candidates: usize,
    out: Vec<ReflectionEvent>,
    stack: Vec<usize>,
}

impl Walker<'_> {
    /// Loss of the components strictly between `a` and `b` (`a < b`).
    fn between(&self, a: usize, b: usize) -> f64 {
        self.prefix[b] - self.prefix[a + 1]
    }

    fn count(&mut self) -> Result<()> {
        self.candidates += 1;
        if self.candidates > self.opts.candidate_cap {
            return Err(Error::PathExplosion {
                cap: self.opts.candidate_cap,
            });
        }
        Ok(())
    }

    /// Light has just been reflected backwards at `k`.
    fn backward(&mut self, k: usize, power: f64, length: f64, order: u32) -> Result<()> {
        let exit_power = power + self.prefix[k];
        let total = length + self.pos[k];
        if exit_power >= self.opts.floor_db {
            self.out.push(ReflectionEvent {
                distance_m: total / 2.0,
                power_db: exit_power,
                order,
                reflectors: self.stack.clone(),
            });
        }
        if order + 2 > self.opts.max_order {
            return Ok(());
        }
        for j in 0..k {
            if self.refl[j] == f64::NEG_INFINITY {
                continue;
            }
            self.count()?;
            let p = power + self.between(j, k) + self.refl[j];
            // every continuation still has to leave through components 0..j
            if p + self.prefix[j] < self.opts.floor_db {
                continue;
            }
            self.stack.push(j);
            self.forward(j, p, length + self.pos[k] - self.pos[j], order + 1)?;
            self.stack.pop();
        }
        Ok(())
    }

    /// Light has just been reflected forwards at `j`.
    fn forward(&mut self, j: usize, power: f64, length: f64, order: u32) -> Result<()> {
        for k in j + 1..self.pos.len() {
            if self.refl[k] == f64::NEG_INFINITY {
                continue;
            }
            self.count()?;
            let p = power + self.between(j, k) + self.refl[k];
            if p + self.prefix[k] < self.opts.floor_db {
                continue;
            }
            self.stack.push(k);
            self.backward(k, p, length + self.pos[k] - self.pos[j], order + 1)?;
            self.stack.pop();
        }
        Ok(())
    }
}

/// Lists every echo with at most `max_order` reflections whose returned power
/// reaches `floor_db`, sorted by distance.
///
/// A path's power is the sum of the reflectances it bounces off plus the
/// insertion loss of every component it passes, counted once per passage.
/// The interferometer, if any, is not applied here; see
/// [`expand_interferometer`].
pub fn enumerate_reflection_paths(circuit: &OpticalCircuit, opts: &PathOptions) -> Result<Vec<ReflectionEvent>> {
    if opts.max_order < 1 {
        return Err(Error::invalid("max_order must be >= 1"));
    }
    if opts.floor_db.is_nan() || opts.floor_db >= 0.0 {
        return Err(Error::invalid(format!("floor_db must be < 0, got {}", opts.floor_db)));
    }
    circuit.validate()?;
    let comps = &circuit.components;
    let mut prefix = Vec::with_capacity(comps.len() + 1);
    prefix.push(0.0);
    for c in comps {
        prefix.push(prefix.last().unwrap() + c.insertion_loss_db);
    }
    let mut w = Walker {
        pos: comps.iter().map(|c| c.position_m).collect(),
        refl: comps.iter().map(|c| c.reflectance_db).collect(),
        prefix,
        opts,
        candidates: 0,
        out: Vec::new(),
        stack: Vec::new(),
    };
    for k in 0..comps.len() {
        if w.refl[k] == f64::NEG_INFINITY {
            continue;
        }
        w.count()?;
        let p = w.prefix[k] + w.refl[k];
        if p + w.prefix[k] < opts.floor_db {
            continue;
        }
        w.stack.push(k);
        w.backward(k, p, w.pos[k], 1)?;
        w.stack.pop();
    }
    let mut out = w.out;
    sort_events(&mut out);
    Ok(out)
}

fn sort_events(events: &mut [ReflectionEvent]) {
    events.sort_by(|a, b| {
        a.distance_m
            .total_cmp(&b.distance_m)
            .then(a.order.cmp(&b.order))
            .then(b.power_db.total_cmp(&a.power_db))
    });
}

/// Splits every echo behind the interferometer into the short-short,
/// short-long and long-long combinations: offsets `0, D, 2D` with power
/// weights `r^2, 2r(1-r), (1-r)^2` for split ratio `r`. Zero-weight
/// combinations are dropped.
pub fn expand_interferometer(events: &[ReflectionEvent], spec: &InterferometerSpec) -> Vec<ReflectionEvent> {
    let r = spec.split_ratio;
    let weights = [r * r, 2.0 * r * (1.0 - r), (1.0 - r) * (1.0 - r)];
    let mut out = Vec::with_capacity(events.len() * 3);
    for e in events {
        if e.distance_m <= spec.position_m {
            out.push(e.clone());
            continue;
        }
        for (i, w) in weights.iter().enumerate() {
            if *w == 0.0 {
                continue;
            }
            out.push(ReflectionEvent {
                distance_m: e.distance_m + i as f64 * spec.arm_difference_m,
                power_db: e.power_db + linear_to_db(*w),
                ..e.clone()
            });
        }
    }
    sort_events(&mut out);
    out
}

impl OpticalCircuit {
    /// Echoes of this circuit, including the interferometer triplication.
    pub fn reflection_events(&self, opts: &PathOptions) -> Result<Vec<ReflectionEvent>> {
        let events = enumerate_reflection_paths(self, opts)?;
        Ok(match &self.interferometer {
            Some(spec) => expand_interferometer(&events, spec),
            None => events,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::super::circuit::{ComponentKind::*, OpticalComponent};
    use super::*;

    fn circuit(parts: &[(f64, f64, f64)]) -> OpticalCircuit {
        OpticalCircuit::new(
            parts
                .iter()
                .map(|&(x, r, il)| OpticalComponent::new(Connector, x, r, il))
                .collect(),
        )
        .unwrap()
    }

    /// Brute force: all reflector sequences k1 > j1 < k2 > ... of odd length.
    fn brute_force(c: &OpticalCircuit, max_order: u32) -> Vec<(f64, f64, u32)> {
        let n = c.components.len();
        let il: Vec<f64> = c.components.iter().map(|c| c.insertion_loss_db).collect();
        let pass = |a: usize, b: usize| -> f64 { il[a.min(b) + 1..a.max(b)].iter().sum() };
        let entry = |k: usize| -> f64 { il[..k].iter().sum() };
        let mut out = vec![];
        let mut seqs: Vec<Vec<usize>> = (0..n).map(|k| vec![k]).collect();
        while let Some(s) = seqs.pop() {
            let order = s.len() as u32;
            if order % 2 == 1 {
                let mut p = entry(s[0]) + entry(*s.last().unwrap());
                let mut len = c.components[s[0]].position_m + c.components[*s.last().unwrap()].position_m;
                for w in s.windows(2) {
                    p += pass(w[0], w[1]);
                    len += (c.components[w[0]].position_m - c.components[w[1]].position_m).abs();
                }
                p += s.iter().map(|&i| c.components[i].reflectance_db).sum::<f64>();
                out.push((len / 2.0, p, order));
            }
            if order < max_order {
                let last = *s.last().unwrap();
                let going_back = order % 2 == 1;
                for next in 0..n {
                    if (going_back && next < last) || (!going_back && next > last) {
                        let mut t = s.clone();
                        t.push(next);
                        seqs.push(t);
                    }
                }
            }
        }
        out.retain(|e| e.2 % 2 == 1);
        out.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.2.cmp(&b.2)).then(b.1.total_cmp(&a.1)));
        out
    }

    #[test]
    fn single_connector() {
        let c = circuit(&[(100.0, -40.0, 0.0)]);
        let ev = enumerate_reflection_paths(&c, &PathOptions::new(3, -200.0)).unwrap();
        assert_eq!(ev.len(), 1);
        assert_eq!(ev[0].distance_m, 100.0);
        assert_eq!(ev[0].round_trip_m(), 200.0);
        assert_eq!(ev[0].power_db, -40.0);
        assert_eq!(ev[0].order, 1);
    }

    #[test]
    fn two_mirror_echo() {
        // mirrors at 10 m and 20 m, 0.5 dB loss each
        let c = circuit(&[(10.0, -1.0, -0.5), (20.0, -1.0, -0.5)]);
        let ev = enumerate_reflection_paths(&c, &PathOptions::new(3, -60.0)).unwrap();
        let got: Vec<(f64, f64, u32)> = ev.iter().map(|e| (e.distance_m, e.power_db, e.order)).collect();
        // by hand: -1 | -1 - 2*0.5 | order 3 at 30 m: in through the first
        // mirror, bounce 2->1->2, out again: 3*(-1) - 2*0.5
        assert_eq!(got, vec![(10.0, -1.0, 1), (20.0, -2.0, 1), (30.0, -4.0, 3)]);
        assert_eq!(ev[2].reflectors, vec![1, 0, 1]);
    }

    #[test]
    fn matches_brute_force() {
        let c = circuit(&[
            (1.0, -14.0, -0.3),
            (2.5, -30.0, -1.0),
            (4.0, -3.0, 0.0),
            (7.0, -20.0, -0.2),
            (9.0, -1.0, -0.1),
        ]);
        for order in [1, 3, 5] {
            let ev = enumerate_reflection_paths(&c, &PathOptions::new(order, -1e9)).unwrap();
            let want = brute_force(&c, order);
            assert_eq!(ev.len(), want.len(), "order {order}");
            for (e, w) in ev.iter().zip(&want) {
                assert!((e.distance_m - w.0).abs() < 1e-9);
                assert!((e.power_db - w.1).abs() < 1e-9);
                assert_eq!(e.order, w.2);
            }
        }
    }

    #[test]
    fn floor_prunes_and_unbounded_floor_keeps_all_first_order() {
        let mut comps = vec![
            OpticalComponent::new(Connector, 1.0, -40.0, 0.0),
            OpticalComponent::new(Attenuator, 2.0, f64::NEG_INFINITY, -3.0),
            OpticalComponent::new(PhaseModulator, 3.0, -20.0, -3.0),
            OpticalComponent::new(FaradayMirror, 4.0, -1.0, 0.0),
        ];
        comps[1].label = Some("va".into());
        let c = OpticalCircuit::new(comps).unwrap();
        let all = enumerate_reflection_paths(&c, &PathOptions::new(1, f64::NEG_INFINITY)).unwrap();
        assert_eq!(all.len(), 3);
        let some = enumerate_reflection_paths(&c, &PathOptions::new(1, -15.0)).unwrap();
        assert_eq!(some.len(), 1);
        assert_eq!(some[0].power_db, -13.0);
    }

    #[test]
    fn candidate_cap() {
        let parts: Vec<(f64, f64, f64)> = (1..=12).map(|i| (i as f64, -1.0, 0.0)).collect();
        let c = circuit(&parts);
        let opts = PathOptions {
            max_order: 9,
            floor_db: -1000.0,
            candidate_cap: 10_000,
        };
        assert!(matches!(
            enumerate_reflection_paths(&c, &opts),
            Err(Error::PathExplosion { cap: 10_000 })
        ));
        let opts = PathOptions {
            max_order: 9,
            floor_db: -2.5,
            candidate_cap: 10_000,
        };
        assert!(enumerate_reflection_paths(&c, &opts).is_ok());
    }

    #[test]
    fn bad_options() {
        let c = circuit(&[(1.0, -40.0, 0.0)]);
        assert!(enumerate_reflection_paths(&c, &PathOptions::new(0, -50.0)).is_err());
        assert!(enumerate_reflection_paths(&c, &PathOptions::new(1, 0.0)).is_err());
    }

    #[test]
    fn interferometer_triplet() {
        let ev = vec![ReflectionEvent {
            distance_m: 40.0,
            power_db: -20.0,
            order: 1,
            reflectors: vec![0],
        }];
        let spec = InterferometerSpec {
            arm_difference_m: 11.5,
            split_ratio: 0.5,
            position_m: 0.0,
        };
        let out = expand_interferometer(&ev, &spec);
        let d: Vec<f64> = out.iter().map(|e| e.distance_m).collect();
        assert_eq!(d, vec![40.0, 51.5, 63.0]);
        let w: Vec<f64> = out.iter().map(|e| e.linear_power() / ev[0].linear_power()).collect();
        for (got, want) in w.iter().zip([0.25, 0.5, 0.25]) {
            assert!((got - want).abs() < 1e-12);
        }
        let total: f64 = out.iter().map(|e| e.linear_power()).sum();
        assert!((total - ev[0].linear_power()).abs() < 1e-12);

        let all_short = InterferometerSpec {
            split_ratio: 1.0,
            ..spec
        };
        assert_eq!(expand_interferometer(&ev, &all_short), ev);

        let in_front = InterferometerSpec {
            position_m: 50.0,
            ..spec
        };
        assert_eq!(expand_interferometer(&ev, &in_front), ev);
    }
}
