// Published parameter sets as documents, with projected index grades.

use cashless_cti::data::{self, Cell, Table};
use cashless_cti::ema::EmaConfig;
use cashless_cti::policy;
use cashless_cti::reference::COUNTRIES;

fn main() -> cashless_cti::Result<()> {
    let cfg = EmaConfig::default();
    let horizons = [0.0, 20.0, 40.0];
    let mut table = Table::new([
        "country",
        "regime",
        "cti_t0",
        "cti_t20",
        "cti_t40",
        "grade_t40",
    ]);
    for row in &COUNTRIES {
        let points = policy::project_trajectory(&row.params, &cfg, &horizons)?;
        let mut cells = vec![Cell::from(row.country), row.regime.name().into()];
        cells.extend(points.iter().map(|p| Cell::from(p.cti)));
        cells.push(points[2].region.name().into());
        table.push(cells);
    }
    data::write_table(&table, std::io::stdout().lock())?;

    let finland = COUNTRIES
        .iter()
        .find(|r| r.country == "Finland")
        .expect("row");
    let doc = data::save_params(&finland.params)?;
    println!("\nFinland parameter document:\n{doc}");
    assert_eq!(data::load_params(&doc)?, finland.params);
    Ok(())
}
