//! Matrix text formats: inline `2,1;1,1` and files with one row per line.

use std::path::Path;

use num_bigint::BigInt;
use torfill::IntMatrix;

fn parse_row(line: &str) -> Result<Vec<BigInt>, String> {
    line.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<BigInt>().map_err(|_| format!("bad matrix entry {t:?}")))
        .collect()
}

fn from_rows(rows: Vec<Vec<BigInt>>) -> Result<IntMatrix, String> {
    if rows.is_empty() {
        return Err("empty matrix".into());
    }
    let n = rows.len();
    if let Some(r) = rows.iter().find(|r| r.len() != n) {
        return Err(format!("matrix must be square: {n} rows but a row of length {}", r.len()));
    }
    IntMatrix::from_rows(rows).map_err(|e| e.to_string())
}

pub fn parse_inline(s: &str) -> Result<IntMatrix, String> {
    let rows = s
        .split(';')
        .map(str::trim)
        .filter(|r| !r.is_empty())
        .map(parse_row)
        .collect::<Result<Vec<_>, _>>()?;
    from_rows(rows)
}

/// Blank lines and lines starting with `#` are skipped.
pub fn parse_file(path: &Path) -> Result<IntMatrix, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let rows = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(parse_row)
        .collect::<Result<Vec<_>, _>>()?;
    from_rows(rows)
}

pub fn format_inline(m: &IntMatrix) -> String {
    m.to_rows()
        .iter()
        .map(|r| r.iter().map(ToString::to_string).collect::<Vec<_>>().join(","))
        .collect::<Vec<_>>()
        .join(";")
}
