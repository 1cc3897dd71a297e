// The logistic trial function: half-share time, log-odds extremum and the
// two asymptotic regimes.

use cashless_cti::reference;
use cashless_cti::share;

fn main() -> cashless_cti::Result<()> {
    for name in ["Hungary", "Netherlands", "Japan"] {
        let params = reference::params(name).expect("published row");
        println!(
            "{name}: a2(0) = {:.5}, half share at t = {:.2} years",
            share::slope_a2(0.0, &params),
            share::half_share_time(&params)?
        );
        match share::y_extremum_time(&params) {
            Some(t) => println!("  log-odds peaks at t = {t:.3} years"),
            None => println!("  log-odds decreases from the start"),
        }
        for t in [0.0, 5.0, 100.0, 300.0] {
            println!(
                "  t = {t:>5}: y = {:>9.4}, quadratic asymptote {:>9.4}, linear asymptote {:>9.4}, p = {:.6}",
                share::y_trial(t, &params),
                share::asymptote_quadratic(&params, t),
                share::asymptote_linear(&params, t),
                share::share_at(t, &params)
            );
        }
    }
    Ok(())
}
