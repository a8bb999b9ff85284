//! Pulsed reflectometry of the bundled sender circuit, with each detected
//! peak attributed to the component that produced it.

use qkd_trojan::demo;
use qkd_trojan::reflectometry::{detect_peaks, synthesize_otdr, OtdrConfig, PathOptions, SamplingGrid};

fn main() -> qkd_trojan::Result<()> {
    let circuit = demo::alice_circuit();
    let pulse = 1.0;
    let events = circuit.reflection_events(&PathOptions::new(3, -150.0))?;
    let spans = circuit.rayleigh_spans();
    let cfg = OtdrConfig::new(pulse, SamplingGrid::covering(&events, &spans, pulse));
    let trace = synthesize_otdr(&events, &spans, &cfg)?;

    println!("{:>10}  {:>9}  source", "distance", "level");
    for p in detect_peaks(&trace, 3.0) {
        let source = events
            .iter()
            .filter(|e| (e.distance_m - p.distance_m).abs() <= pulse / 2.0)
            .max_by(|a, b| a.power_db.total_cmp(&b.power_db))
            .map(|e| {
                let names: Vec<String> = e.reflectors.iter().map(|&i| circuit.components[i].name()).collect();
                names.join(" > ")
            })
            .unwrap_or_default();
        println!("{:>8.2} m  {:>6.1} dB  {source}", p.distance_m, p.power_db);
    }
    Ok(())
}
