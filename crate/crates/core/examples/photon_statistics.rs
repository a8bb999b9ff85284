//! Loss drives any photon-number distribution towards Poisson. A Fock state
//! with mean 0.5 after attenuation is compared against the coherent state of
//! the same mean, and one case is cross-checked by Monte Carlo.

use qkd_trojan::stats::*;

fn main() -> qkd_trojan::Result<()> {
    let target = MeanPhotonNumber::new(0.5)?;
    let poisson = poisson_distribution(target, 40)?;
    for t in [0.5f64, 0.1, 0.01, 0.001] {
        let n = (0.5 / t).ceil() as usize;
        let out = attenuate(&PhotonNumberDistribution::fock(n), TransmissionFactor::new(t)?);
        println!(
            "Fock({n:>3}) x {t:<6} -> mean {:.4}, distance to Poisson {:.3e}",
            out.mean(),
            tv_distance(&out, &poisson)
        );
    }

    let t = TransmissionFactor::new(0.2)?;
    let exact = attenuate(&PhotonNumberDistribution::fock(6), t);
    let sampled = monte_carlo_thin(6, t, 1_000_000, 0)?;
    println!("\n m   exact       sampled");
    for m in 0..=6 {
        println!("{m:>2}  {:.6}  {:.6}", exact.prob(m), sampled.prob(m));
    }

    println!("\nmulti-photon probability after t = 0.01");
    for (name, d) in [
        ("Fock(2)", PhotonNumberDistribution::fock(2)),
        ("coherent(2)", poisson_distribution(MeanPhotonNumber::new(2.0)?, 40)?),
    ] {
        let t = TransmissionFactor::new(0.01)?;
        println!(
            "{name:<12} exact {:.6e}  leading {:.6e}",
            multi_photon_prob_exact(&d, t),
            multi_photon_prob_leading(&d, t)
        );
    }
    Ok(())
}
