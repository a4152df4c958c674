//! Output files. Each is written to a temporary file next to its target and
//! renamed into place.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::usage;

pub fn write_atomic(path: &Path, f: impl FnOnce(&mut BufWriter<&mut File>) -> anyhow::Result<()>) -> anyhow::Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    {
        let mut w = BufWriter::new(tmp.as_file_mut());
        f(&mut w)?;
        w.flush()?;
    }
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

/// Refuse outputs that already exist (unless `force`) or that name the same
/// file twice.
pub fn claim_outputs(paths: &[&PathBuf], force: bool) -> anyhow::Result<()> {
    for (i, p) in paths.iter().enumerate() {
        if paths[..i].contains(p) {
            return Err(usage(format!("output path {} is given twice", p.display())));
        }
        if p.exists() && !force {
            return Err(usage(format!("{} exists; pass --force to overwrite", p.display())));
        }
    }
    Ok(())
}

pub fn header_text(lines: &[String]) -> String {
    lines.iter().map(|l| format!("{l}\n")).collect()
}
