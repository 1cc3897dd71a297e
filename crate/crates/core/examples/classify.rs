// Map cashless shares to the index and its four grades.

use cashless_cti::ema::{self, EmaConfig, Region};

fn main() -> cashless_cti::Result<()> {
    let cfg = EmaConfig::default();
    println!("{:>6} {:>9} {:>7}  region", "share", "sigma_e", "CTI");
    for p in [0.0, 0.1, 0.2864, 1.0 / 3.0, 0.5, 0.7136, 0.9, 1.0] {
        let sigma = ema::solve_two_phase(p, &cfg)?;
        let cti = ema::cti_from_conductivity(sigma, &cfg);
        println!("{p:>6.4} {sigma:>9.5} {cti:>7.4}  {}", ema::classify(cti)?);
    }

    println!("\nshare range of each grade:");
    for region in Region::ALL {
        let (lo, hi) = region.cti_range();
        println!(
            "  {region:<15} CTI [{lo}, {hi}) -> p [{:.4}, {:.4})",
            ema::share_from_cti(lo, &cfg)?,
            ema::share_from_cti(hi, &cfg)?
        );
    }
    Ok(())
}
