// Effective conductivity of a mixture with more than two payment channels,
// and the percolation threshold of a nearly insulating cash phase.

use cashless_cti::ema::{self, EmaConfig, MixtureComponent};

fn main() -> cashless_cti::Result<()> {
    // Cash, cards and mobile payments with increasing conductivity.
    let mix = [
        MixtureComponent::new(1.0, 0.5),
        MixtureComponent::new(6.0, 0.3),
        MixtureComponent::new(10.0, 0.2),
    ];
    for z in [3.0, 4.0, 6.0] {
        println!("z = {z}: sigma_e = {:.6}", ema::solve_general(&mix, z)?);
    }

    let z = 4.0;
    let cfg = EmaConfig::new(1e-11, 10.0, z)?;
    println!(
        "\ninsulating cash, threshold 2/z = {}",
        ema::ema_insulator_threshold(z)?
    );
    for p in [0.40, 0.45, 0.50, 0.55, 0.60] {
        println!(
            "  p = {p:.2}: sigma_e = {:.3e}",
            ema::solve_two_phase(p, &cfg)?
        );
    }
    Ok(())
}
