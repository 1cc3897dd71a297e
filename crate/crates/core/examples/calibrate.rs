// Calibrate the trial function from a `country,year,share` table.

use cashless_cti::calibration::{self, CalibrationOptions, ModelChoice};
use cashless_cti::data::{self, ShareUnit};

/// Synthetic series: an early-stage market and a mature one.
fn table() -> String {
    let mut csv = String::from("country,year,share\n");
    for k in 0..21 {
        let t = f64::from(k);
        let early = -0.0032 * t * t - 0.00644 * t + 1.388706;
        let mature = -0.0833 * t + 0.074;
        for (name, y) in [("Early", early), ("Mature", mature)] {
            csv.push_str(&format!(
                "{name},{},{:.10}\n",
                2000 + k,
                1.0 / (1.0 + f64::exp(y))
            ));
        }
    }
    csv
}

fn main() -> cashless_cti::Result<()> {
    let series = data::load_series(table().as_bytes(), ShareUnit::Fraction)?;
    for s in &series {
        for model in [ModelChoice::Auto, ModelChoice::Linear] {
            let opts = CalibrationOptions {
                model,
                ..CalibrationOptions::default()
            };
            let r = match calibration::calibrate_country(s, &opts) {
                Ok(r) => r,
                Err(e) => {
                    println!("{:<7} {:<6?} -> rejected: {e}", s.country(), model);
                    continue;
                }
            };
            println!(
                "{:<7} {:<6?} -> {:<9} R2 = {:.6}  alpha = {:.4}  beta = {:.4}  gamma = {:.4}  delta_t0 = {:.2}",
                r.country,
                model,
                r.selected,
                r.selected_fit().r_squared,
                r.params.alpha,
                r.params.beta,
                r.params.gamma,
                r.params.delta_t0
            );
            for w in &r.warnings {
                println!("        warning: {w}");
            }
        }
    }

    let early = calibration::calibrate_country(&series[0], &CalibrationOptions::default())?;
    println!("\n{}", data::save_report(&early)?);
    Ok(())
}
