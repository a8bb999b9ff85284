//! Eve's information per qubit against the returned mean photon number, for
//! a phase-referenced and a phase-randomized source. Writes CSV to stdout.

use qkd_trojan::info::{info_gain_csv, info_gain_sweep, log_grid};

fn main() -> qkd_trojan::Result<()> {
    let points = info_gain_sweep(&log_grid(1e-4, 10.0, 51))?;
    print!("{}", info_gain_csv(&points));
    Ok(())
}
