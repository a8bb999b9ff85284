//! Audits the bundled scenario with and without phase randomization, then
//! shows how the privacy-amplification budget grows with Eve's probe.

use qkd_trojan::audit::{pa_budget_sweep, run_audit};
use qkd_trojan::demo;
use qkd_trojan::info::log_grid;

fn main() -> qkd_trojan::Result<()> {
    let mut scenario = demo::audit_scenario()?;
    println!("{}", run_audit(&scenario)?);
    scenario.countermeasures.phase_randomization = true;
    println!("{}", run_audit(&scenario)?);

    println!(
        "{:>12}  {:>12}  {:>10}  {:>10}",
        "injected", "returned", "reference", "randomized"
    );
    for row in pa_budget_sweep(&scenario, &log_grid(1e4, 1e8, 9))? {
        println!(
            "{:>12.3e}  {:>12.3e}  {:>10.6}  {:>10.6}",
            row.mu_in, row.mu_back, row.trojan_bits, row.reduced_bits
        );
    }
    Ok(())
}
