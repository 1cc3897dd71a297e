//! Input series, run configuration, parameter documents and output tables.

mod config;
pub mod document;
mod series;
mod table;

use std::fs;
use std::io::Write;
use std::path::Path;

pub use config::RunConfig;
pub use document::{
    load_params, load_report, load_scenario, save_params, save_report, save_scenario,
};
pub use series::{load_series, CountrySeries, Observation, ShareUnit};
pub use table::{format_sig, write_table, Cell, Table, SIGNIFICANT_DIGITS};

use crate::error::Result;

/// Writes `bytes` to a temporary sibling of `path`, then renames it into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let name = path.file_name().ok_or_else(|| {
        crate::error::Error::domain(format!("not a file path: {}", path.display()))
    })?;
    let mut tmp_name = std::ffi::OsString::from(".");
    tmp_name.push(name);
    tmp_name.push(".tmp");
    let tmp = path.with_file_name(tmp_name);
    let result = (|| {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
        fs::rename(&tmp, path)
    })();
    if result.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    Ok(result?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn atomic_write_replaces() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("out.csv");
        write_atomic(&path, b"one\n").unwrap();
        write_atomic(&path, b"two\n").unwrap();
        assert_eq!(fs::read(&path).unwrap(), b"two\n");
        assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 1);
    }
}
