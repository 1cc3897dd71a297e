// Compare accelerating policies for Japan and chart them as SVG.

use cashless_cti::ema::EmaConfig;
use cashless_cti::grid::time_grid;
use cashless_cti::plot::{self, Plot, PlotSeries};
use cashless_cti::policy::{self, PolicyEvent, Scenario};
use cashless_cti::reference;

fn main() -> cashless_cti::Result<()> {
    let japan = reference::params("Japan").expect("published row");
    let cfg = EmaConfig::default();
    let scenarios = [0.0, 0.1, 0.2]
        .iter()
        .map(|&eps| {
            Scenario::new(
                format!("eps = {eps}"),
                japan,
                vec![PolicyEvent::new(eps, 15.0, 10.0)?],
            )
        })
        .collect::<cashless_cti::Result<Vec<_>>>()?;

    let grid = time_grid(0.0, 40.0, 0.5)?;
    let rows = policy::compare_scenarios(&scenarios, &cfg, &grid)?;
    let mut chart = Plot::new("Japan: policy at t = 15, omega = 10", "t (years)", "CTI");
    for sc in &scenarios {
        let points: Vec<(f64, f64)> = rows
            .iter()
            .filter(|r| r.label == sc.label)
            .map(|r| (r.point.t_years, r.point.cti))
            .collect();
        let at = |t: f64| points.iter().find(|p| p.0 == t).map_or(f64::NAN, |p| p.1);
        println!(
            "{:<10} CTI(20) = {:.4}  CTI(30) = {:.4}",
            sc.label,
            at(20.0),
            at(30.0)
        );
        chart = chart.with_series(PlotSeries::new(sc.label.clone(), points));
    }

    let dir = std::env::temp_dir().join("cashless_cti_examples");
    std::fs::create_dir_all(&dir)?;
    let svg = dir.join("japan_policy.svg");
    let csv = plot::emit_plot(&chart, &svg)?;
    println!("wrote {} and {}", svg.display(), csv.display());
    Ok(())
}
