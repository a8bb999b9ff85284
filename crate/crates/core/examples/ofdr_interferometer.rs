//! Swept-laser reflectometry of the bundled receiver. Every echo behind the
//! unbalanced interferometer shows up three times, 11.5 m apart, with the
//! middle copy twice as strong.

use qkd_trojan::demo;
use qkd_trojan::reflectometry::{detect_peaks, synthesize_ofdr, OfdrConfig, PathOptions, SweepSpec};

fn main() -> qkd_trojan::Result<()> {
    let circuit = demo::bob_circuit();
    let sweep = SweepSpec {
        sweep_rate_hz_per_s: 1e12,
        duration_s: 1e-3,
        sample_rate_hz: 4e6,
    };
    let cfg = OfdrConfig::new(sweep, 200.0, -10.0);
    println!("resolution {:.3} m, range {:.1} m", cfg.bin_m(), cfg.max_range_m());

    let events = circuit.reflection_events(&PathOptions::new(1, -150.0))?;
    let trace = synthesize_ofdr(&events, &cfg)?;
    for p in detect_peaks(&trace, 10.0) {
        println!("{:>8.3} m  {:>7.2} dB", p.distance_m, p.power_db);
    }

    // longer coherence keeps the far copies visible
    for lc in [2.0, 20.0, 2000.0] {
        let t = synthesize_ofdr(&events, &OfdrConfig::new(sweep, lc, -10.0))?;
        println!("coherence {lc:>6} m: {} peaks", detect_peaks(&t, 10.0).len());
    }
    Ok(())
}
