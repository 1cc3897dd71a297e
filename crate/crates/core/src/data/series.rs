//! Country share time series and their CSV ingestion.

use std::collections::HashMap;
use std::io::Read;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, RowIssue};

/// How share values are written in an input table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ShareUnit {
    #[default]
    Fraction,
    Percent,
}

impl ShareUnit {
    pub fn to_fraction(self, value: f64) -> f64 {
        match self {
            ShareUnit::Fraction => value,
            ShareUnit::Percent => value / 100.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Observation {
    pub year: i32,
    /// Cashless share as a fraction in `(0, 1)`.
    pub share: f64,
}

/// Annual cashless-share observations for one country, sorted by year.
#[derive(Debug, Clone, PartialEq)]
pub struct CountrySeries {
    country: String,
    observations: Vec<Observation>,
}

impl CountrySeries {
    /// Sorts the observations and rejects duplicate years or shares outside `(0, 1)`.
    pub fn new(country: impl Into<String>, mut observations: Vec<Observation>) -> Result<Self> {
        let country = country.into();
        if observations.is_empty() {
            return Err(Error::domain(format!(
                "series `{country}` has no observations"
            )));
        }
        if let Some(o) = observations
            .iter()
            .find(|o| !(o.share > 0.0 && o.share < 1.0))
        {
            return Err(Error::domain(format!(
                "share must be strictly inside (0,1): `{country}` {} has {}",
                o.year, o.share
            )));
        }
        observations.sort_by_key(|o| o.year);
        if let Some(w) = observations.windows(2).find(|w| w[0].year == w[1].year) {
            return Err(Error::domain(format!(
                "duplicate year {} in series `{country}`",
                w[0].year
            )));
        }
        Ok(CountrySeries {
            country,
            observations,
        })
    }

    /// Builds a series from `(year, share)` pairs.
    pub fn from_pairs(country: impl Into<String>, pairs: &[(i32, f64)]) -> Result<Self> {
        let obs = pairs
            .iter()
            .map(|&(year, share)| Observation { year, share })
            .collect();
        Self::new(country, obs)
    }

    pub fn country(&self) -> &str {
        &self.country
    }

    pub fn observations(&self) -> &[Observation] {
        &self.observations
    }

    pub fn len(&self) -> usize {
        self.observations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.observations.is_empty()
    }

    /// Earliest year present; `t = 0` in fits.
    pub fn t_origin(&self) -> i32 {
        self.observations[0].year
    }

    /// `(years since t_origin, share)` pairs.
    pub fn points(&self) -> Vec<(f64, f64)> {
        let origin = self.t_origin();
        self.observations
            .iter()
            .map(|o| (f64::from(o.year - origin), o.share))
            .collect()
    }
}

/// Reads a `country,year,share` CSV into per-country series.
///
/// Series come out in order of first appearance. Every bad row is reported
/// with its line number; nothing is returned unless all rows are valid.
pub fn load_series<R: Read>(source: R, unit: ShareUnit) -> Result<Vec<CountrySeries>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(source);

    let header_ok = match reader.headers() {
        Ok(h) => {
            let cols: Vec<&str> = h.iter().collect();
            cols == ["country", "year", "share"]
        }
        Err(e) => {
            return Err(Error::Rows(vec![RowIssue {
                line: 1,
                message: e.to_string(),
            }]))
        }
    };
    if !header_ok {
        return Err(Error::Rows(vec![RowIssue {
            line: 1,
            message: "header must be `country,year,share`".into(),
        }]));
    }

    let mut issues = Vec::new();
    let mut order: Vec<String> = Vec::new();
    let mut rows: HashMap<String, Vec<(u64, Observation)>> = HashMap::new();

    for record in reader.records() {
        let record = match record {
            Ok(r) => r,
            Err(e) => {
                let line = e.position().map_or(0, |p| p.line());
                issues.push(RowIssue {
                    line,
                    message: format!("malformed row: {e}"),
                });
                continue;
            }
        };
        let line = record.position().map_or(0, |p| p.line());
        if record.iter().all(str::is_empty) {
            continue;
        }
        if record.len() != 3 {
            issues.push(RowIssue {
                line,
                message: format!("expected 3 fields, found {}", record.len()),
            });
            continue;
        }
        let country = &record[0];
        if country.is_empty() {
            issues.push(RowIssue {
                line,
                message: "country is empty".into(),
            });
            continue;
        }
        let year = match record[1].parse::<i32>() {
            Ok(y) => y,
            Err(_) => {
                issues.push(RowIssue {
                    line,
                    message: format!("year `{}` is not an integer", &record[1]),
                });
                continue;
            }
        };
        let raw = match record[2].parse::<f64>() {
            Ok(v) if v.is_finite() => v,
            _ => {
                issues.push(RowIssue {
                    line,
                    message: format!("share `{}` is not a number", &record[2]),
                });
                continue;
            }
        };
        let share = unit.to_fraction(raw);
        if !(share > 0.0 && share < 1.0) {
            issues.push(RowIssue {
                line,
                message: format!("share must be strictly inside (0,1), got {share}"),
            });
            continue;
        }
        let entry = rows.entry(country.to_owned()).or_insert_with(|| {
            order.push(country.to_owned());
            Vec::new()
        });
        if let Some((first, _)) = entry.iter().find(|(_, o)| o.year == year) {
            issues.push(RowIssue {
                line,
                message: format!("duplicate year {year} for `{country}` (first at line {first})"),
            });
            continue;
        }
        entry.push((line, Observation { year, share }));
    }

    if !issues.is_empty() {
        return Err(Error::Rows(issues));
    }
    order
        .into_iter()
        .map(|country| {
            let obs = rows
                .remove(&country)
                .unwrap_or_default()
                .into_iter()
                .map(|(_, o)| o)
                .collect();
            CountrySeries::new(country, obs)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn happy_path() {
        let csv = "country,year,share\nJapan,2016,0.20\nJapan,2015,0.18\n";
        let series = load_series(csv.as_bytes(), ShareUnit::Fraction).unwrap();
        assert_eq!(series.len(), 1);
        assert_eq!(series[0].country(), "Japan");
        assert_eq!(series[0].len(), 2);
        assert_eq!(series[0].t_origin(), 2015);
        assert_eq!(series[0].observations()[1].share, 0.20);
    }

    #[test]
    fn percent_unit() {
        let csv = "country,year,share\r\nJapan,2017,20\r\n";
        let series = load_series(csv.as_bytes(), ShareUnit::Percent).unwrap();
        assert!((series[0].observations()[0].share - 0.20).abs() < 1e-15);
    }

    #[test]
    fn boundary_share_rejected_with_line() {
        let csv = "country,year,share\nX,2015,1.0\n";
        match load_series(csv.as_bytes(), ShareUnit::Fraction) {
            Err(Error::Rows(issues)) => {
                assert_eq!(issues.len(), 1);
                assert_eq!(issues[0].line, 2);
                assert!(issues[0]
                    .message
                    .contains("share must be strictly inside (0,1)"));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn all_bad_rows_itemized() {
        let csv = "country,year,share\nA,2015,0.1\nA,20x6,0.2\nA,2015,0.3\nB,2015\n,2016,0.2\n";
        match load_series(csv.as_bytes(), ShareUnit::Fraction) {
            Err(Error::Rows(issues)) => {
                let lines: Vec<u64> = issues.iter().map(|i| i.line).collect();
                assert_eq!(lines, vec![3, 4, 5, 6]);
                assert!(issues[1].message.contains("duplicate year 2015"));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn header_is_mandatory() {
        let csv = "Japan,2015,0.18\n";
        assert!(matches!(
            load_series(csv.as_bytes(), ShareUnit::Fraction),
            Err(Error::Rows(_))
        ));
    }

    #[test]
    fn series_keeps_first_appearance_order() {
        let csv = "country,year,share\nB,2001,0.2\nA,2001,0.3\nB,2000,0.1\n";
        let s = load_series(csv.as_bytes(), ShareUnit::Fraction).unwrap();
        let names: Vec<&str> = s.iter().map(|c| c.country()).collect();
        assert_eq!(names, ["B", "A"]);
        assert_eq!(s[0].t_origin(), 2000);
    }
}
