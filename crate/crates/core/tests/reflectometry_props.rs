mod common;

use std::collections::HashMap;

use common::{first_order, nearest, random_circuit};
use proptest::prelude::*;
use qkd_trojan::demo;
use qkd_trojan::reflectometry::*;

const PULSE: f64 = 1.0;

fn otdr_of(c: &OpticalCircuit, max_order: u32) -> Trace {
    let events = c.reflection_events(&PathOptions::new(max_order, -150.0)).unwrap();
    let spans = c.rayleigh_spans();
    let cfg = OtdrConfig::new(PULSE, SamplingGrid::covering(&events, &spans, PULSE));
    synthesize_otdr(&events, &spans, &cfg).unwrap()
}

fn ofdr_config() -> OfdrConfig {
    let sweep = SweepSpec {
        sweep_rate_hz_per_s: 1e12,
        duration_s: 1e-3,
        sample_rate_hz: 4e6,
    };
    OfdrConfig::new(sweep, 1e6, -10.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn otdr_round_trip(seed in any::<u64>()) {
        let c = random_circuit(seed, PULSE);
        let peaks = detect_peaks(&otdr_of(&c, 1), 3.0);
        let want = first_order(&c);
        prop_assert_eq!(peaks.len(), want.len());
        for (p, (d, db)) in peaks.iter().zip(&want) {
            prop_assert!((p.distance_m - d).abs() <= PULSE, "{} vs {}", p.distance_m, d);
            prop_assert!((p.power_db - db).abs() <= 0.5, "{} vs {}", p.power_db, db);
        }
    }

    #[test]
    fn extra_loss_never_brightens_an_echo(seed in any::<u64>(), k in 0usize..8, extra in -6.0f64..0.0) {
        let c = random_circuit(seed, PULSE);
        let mut lossy = c.clone();
        let k = k % c.components.len();
        lossy.components[k].insertion_loss_db += extra;
        let opts = PathOptions::new(5, -150.0);
        let before: HashMap<Vec<usize>, f64> = c
            .reflection_events(&opts)
            .unwrap()
            .into_iter()
            .map(|e| (e.reflectors, e.power_db))
            .collect();
        for e in lossy.reflection_events(&opts).unwrap() {
            let p = before.get(&e.reflectors).copied().unwrap_or(f64::NEG_INFINITY);
            prop_assert!(e.power_db <= p + 1e-9, "{:?}: {} > {}", e.reflectors, e.power_db, p);
        }
    }

    #[test]
    fn interferometer_conserves_power(
        d in 0.5f64..500.0, db in -80.0f64..0.0, r in 0.01f64..0.99, arm in 0.1f64..50.0,
    ) {
        let source = ReflectionEvent { distance_m: d, power_db: db, order: 1, reflectors: vec![0] };
        let spec = InterferometerSpec { arm_difference_m: arm, split_ratio: r, position_m: 0.0 };
        let out = expand_interferometer(std::slice::from_ref(&source), &spec);
        prop_assert_eq!(out.len(), 3);
        let total: f64 = out.iter().map(|e| e.linear_power()).sum();
        prop_assert!((total / source.linear_power() - 1.0).abs() < 1e-12);
        prop_assert!((out[1].distance_m - out[0].distance_m - arm).abs() < 1e-9);
        prop_assert!((out[2].distance_m - out[1].distance_m - arm).abs() < 1e-9);
    }

    #[test]
    fn ofdr_agrees_with_otdr(seed in any::<u64>()) {
        let c = random_circuit(seed, PULSE);
        let events = c.reflection_events(&PathOptions::new(1, -150.0)).unwrap();
        let cfg = ofdr_config();
        let f = detect_peaks(&synthesize_ofdr(&events, &cfg).unwrap(), 3.0);
        let o = detect_peaks(&otdr_of(&c, 1), 3.0);
        let cell = PULSE.max(cfg.bin_m());
        for (d, _) in first_order(&c) {
            let a = nearest(o.iter().map(|p| p.distance_m), d);
            let b = nearest(f.iter().map(|p| p.distance_m), d);
            prop_assert!((a - b).abs() <= cell, "{d}: otdr {a}, ofdr {b}");
        }
    }
}

#[test]
fn traces_are_bit_identical() {
    let c = demo::alice_circuit();
    assert_eq!(otdr_of(&c, 3).to_csv(), otdr_of(&c, 3).to_csv());
    let events = c.reflection_events(&PathOptions::default()).unwrap();
    let a = synthesize_ofdr(&events, &ofdr_config()).unwrap();
    let b = synthesize_ofdr(&events, &ofdr_config()).unwrap();
    assert_eq!(a.to_csv(), b.to_csv());
}

#[test]
fn alice_components_all_visible() {
    let c = demo::alice_circuit();
    let peaks = detect_peaks(&otdr_of(&c, 3), 3.0);
    for label in ["BS", "C", "VA", "PM", "FM"] {
        let comp = c.components.iter().find(|k| k.label.as_deref() == Some(label)).unwrap();
        let d = nearest(peaks.iter().map(|p| p.distance_m), comp.position_m);
        assert!((d - comp.position_m).abs() <= PULSE / 2.0, "{label}: nearest peak {d}");
    }
}

#[test]
fn bob_interferometer_triples_every_echo() {
    let c = demo::bob_circuit();
    let spec = c.interferometer.unwrap();
    let events = c.reflection_events(&PathOptions::new(1, -150.0)).unwrap();
    let peaks = detect_peaks(&otdr_of(&c, 1), 3.0);
    for k in c
        .components
        .iter()
        .filter(|k| k.is_reflector() && k.position_m > spec.position_m)
    {
        for j in 0..3 {
            let want = k.position_m + j as f64 * spec.arm_difference_m;
            assert!(events.iter().any(|e| (e.distance_m - want).abs() < 1e-9));
            let d = nearest(peaks.iter().map(|p| p.distance_m), want);
            assert!((d - want).abs() <= PULSE / 2.0, "{:?} copy {j}: {d}", k.label);
        }
    }
}

#[test]
fn short_coherence_hides_distant_echoes() {
    let far = OpticalCircuit::new(vec![
        OpticalComponent::new(ComponentKind::Connector, 10.0, -40.0, 0.0),
        OpticalComponent::new(ComponentKind::Connector, 1000.0, -40.0, 0.0),
    ])
    .unwrap();
    let sweep = SweepSpec {
        sweep_rate_hz_per_s: 1e12,
        duration_s: 1e-3,
        sample_rate_hz: 4e7,
    };
    let cfg = OfdrConfig::new(sweep, 100.0, -10.0);
    let events = far.reflection_events(&PathOptions::new(1, -150.0)).unwrap();
    let t = synthesize_ofdr(&events, &cfg).unwrap();
    let peaks = detect_peaks(&t, 3.0);
    assert_eq!(peaks.len(), 1, "{peaks:?}");
    assert!((peaks[0].distance_m - 10.0).abs() <= t.step_m);
    assert!(t.power_at(1000.0).unwrap() < t.noise_floor_db + 1.0);
}
