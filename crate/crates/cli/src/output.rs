//! Deterministic, atomically written CSV and JSON artifacts.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::Path;

use vpconfine::elliptic::{Grid, ScalarField};

/// Floats are written with 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Writes `bytes` to a temporary sibling file and renames it into place.
pub fn atomic_write(path: &Path, bytes: &[u8]) -> io::Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    fs::create_dir_all(dir)?;
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let tmp = dir.join(format!(".{name}.tmp{}", std::process::id()));
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)
}

/// CSV with a single header row and one line per record.
pub fn csv<R: AsRef<[f64]>>(header: &[&str], rows: impl IntoIterator<Item = R>) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        let cells: Vec<String> = row.as_ref().iter().map(|&x| fmt_f64(x)).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

/// Node values over the in-domain grid nodes as `r,z,<name>`.
pub fn field_csv(grid: &Grid, field: &ScalarField, name: &str) -> String {
    let mut out = format!("r,z,{name}\n");
    for k in 0..grid.len() {
        if !grid.kinds[k].in_domain() {
            continue;
        }
        let p = grid.point(k);
        let _ = writeln!(out, "{},{},{}", fmt_f64(p.r), fmt_f64(p.z), fmt_f64(field.values[k]));
    }
    out
}

pub fn json_string(value: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("JSON values always serialize");
    s.push('\n');
    s
}
