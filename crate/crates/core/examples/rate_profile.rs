// When does each country's index grow fastest?

use cashless_cti::ema::EmaConfig;
use cashless_cti::grid::time_grid;
use cashless_cti::rate;
use cashless_cti::reference::COUNTRIES;

fn main() -> cashless_cti::Result<()> {
    let cfg = EmaConfig::default();
    let grid = time_grid(0.0, 200.0, 0.25)?;
    println!(
        "{:<12} {:>8} {:>12} {:>9}",
        "country", "peak t", "dCTI/dt", "delta_t0"
    );
    for row in &COUNTRIES {
        let profile = rate::rate_profile(&row.params, &cfg, &grid)?;
        let peak = profile
            .iter()
            .max_by(|a, b| a.dcti_dt.total_cmp(&b.dcti_dt))
            .expect("nonempty grid");
        // Trial time zero lies delta_t0 years before the first data year.
        println!(
            "{:<12} {:>8.2} {:>12.5} {:>9}",
            row.country, peak.t_years, peak.dcti_dt, row.params.delta_t0
        );
    }
    Ok(())
}
