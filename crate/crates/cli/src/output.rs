//! Output files.
//!
//! Every CSV starts with one line `# {json}` holding the command, the column
//! names and the full [`RunConfig`]; the rest is plain CSV with a header
//! row. Files are written to a temporary file in the target directory and
//! renamed into place.

use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::config::RunConfig;
use crate::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CsvHeader {
    pub command: String,
    pub columns: Vec<String>,
    pub config: RunConfig,
}

/// Writes `bytes` to `dir/name` via a temporary file and a rename.
pub fn write_atomic(dir: &Path, name: &str, bytes: &[u8]) -> Result<PathBuf, CliError> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let target = dir.join(name);
    let mut tmp = tempfile::Builder::new()
        .prefix(&format!(".{name}."))
        .tempfile_in(dir)
        .map_err(|e| CliError::io(dir, e))?;
    tmp.write_all(bytes).map_err(|e| CliError::io(&target, e))?;
    tmp.as_file().sync_all().map_err(|e| CliError::io(&target, e))?;
    tmp.persist(&target).map_err(|e| CliError::io(&target, e.error))?;
    Ok(target)
}

pub fn csv_bytes(
    command: &str,
    config: &RunConfig,
    columns: &[&str],
    rows: &[Vec<String>],
) -> Result<Vec<u8>, CliError> {
    let header = CsvHeader {
        command: command.to_owned(),
        columns: columns.iter().map(|c| (*c).to_owned()).collect(),
        config: config.clone(),
    };
    let mut out = Vec::new();
    out.extend_from_slice(b"# ");
    serde_json::to_writer(&mut out, &header).map_err(CliError::other)?;
    out.push(b'\n');
    let mut writer = csv::Writer::from_writer(out);
    writer.write_record(columns).map_err(CliError::other)?;
    for row in rows {
        writer.write_record(row).map_err(CliError::other)?;
    }
    writer.into_inner().map_err(|e| CliError::other(e.into_error()))
}

pub fn write_csv(
    config: &RunConfig,
    name: &str,
    command: &str,
    columns: &[&str],
    rows: &[Vec<String>],
) -> Result<PathBuf, CliError> {
    let bytes = csv_bytes(command, config, columns, rows)?;
    write_atomic(&config.out_dir, name, &bytes)
}

pub fn write_json<T: Serialize>(config: &RunConfig, name: &str, value: &T) -> Result<PathBuf, CliError> {
    let mut bytes = serde_json::to_vec_pretty(value).map_err(CliError::other)?;
    bytes.push(b'\n');
    write_atomic(&config.out_dir, name, &bytes)
}

/// Parses the `# {json}` first line of a CSV written by this tool.
pub fn read_header(path: &Path) -> Result<CsvHeader, CliError> {
    let file = std::fs::File::open(path).map_err(|e| CliError::io(path, e))?;
    let mut line = String::new();
    BufReader::new(file)
        .read_line(&mut line)
        .map_err(|e| CliError::io(path, e))?;
    let json = line
        .strip_prefix("# ")
        .ok_or_else(|| CliError::Usage(format!("{} has no `# {{json}}` header line", path.display())))?;
    serde_json::from_str(json).map_err(CliError::other)
}

/// Formats a float so that it parses back to the same value.
pub fn num(x: f64) -> String {
    format!("{x:e}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_round_trips() {
        let dir = tempfile::tempdir().unwrap();
        let config = RunConfig {
            out_dir: dir.path().to_path_buf(),
            ..Default::default()
        };
        let rows = vec![vec![num(0.1), num(-2.5e-300)]];
        let path = write_csv(&config, "t.csv", "test", &["a", "b"], &rows).unwrap();
        let header = read_header(&path).unwrap();
        assert_eq!(header.config, config);
        header.config.validate().unwrap();
        assert_eq!(header.columns, ["a", "b"]);
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(text.lines().nth(1), Some("a,b"));
        assert_eq!(text.lines().nth(2), Some("1e-1,-2.5e-300"));
    }

    #[test]
    fn no_temporary_files_remain() {
        let dir = tempfile::tempdir().unwrap();
        write_atomic(dir.path(), "x.json", b"{}").unwrap();
        write_atomic(dir.path(), "x.json", b"[]").unwrap();
        let names: Vec<_> = std::fs::read_dir(dir.path())
            .unwrap()
            .map(|e| e.unwrap().file_name().into_string().unwrap())
            .collect();
        assert_eq!(names, ["x.json"]);
        assert_eq!(std::fs::read(dir.path().join("x.json")).unwrap(), b"[]");
    }

    #[test]
    fn floats_round_trip() {
        for x in [0.1, 1.0 / 3.0, -7.25e-17, 6.0, f64::MIN_POSITIVE] {
            assert_eq!(num(x).parse::<f64>().unwrap(), x);
        }
    }
}
