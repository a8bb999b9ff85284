//! In a two-way system the pulse Alice sends back was first injected by
//! whoever sits on the channel. Bounding that input bounds the multi-photon
//! probability of what leaves Alice; coherent inputs are the worse case.

use qkd_trojan::audit::{two_way_bound, two_way_multi_photon};
use qkd_trojan::stats::{poisson_cutoff, poisson_distribution, MeanPhotonNumber, TransmissionFactor};

fn main() -> qkd_trojan::Result<()> {
    println!(
        "{:>6}  {:>8}  {:>12}  {:>12}  {:>12}",
        "mean", "t", "coherent", "Fock", "exact coh."
    );
    for n in [1.0, 10.0, 1e3, 1e6] {
        for t in [1e-7, 1e-4] {
            let tf = TransmissionFactor::new(t)?;
            let b = two_way_bound(n, tf, 0.0)?;
            let exact = if n <= 1e3 {
                let mu = MeanPhotonNumber::new(n)?;
                format!(
                    "{:12.4e}",
                    two_way_multi_photon(&poisson_distribution(mu, poisson_cutoff(mu))?, tf)
                )
            } else {
                format!("{:>12}", "-")
            };
            println!("{n:>6.0e}  {t:>8.0e}  {:12.4e}  {:12.4e}  {exact}", b.coherent, b.fock);
        }
    }
    Ok(())
}
