//! Solved tables on disk, keyed by a content hash of the game and numeric
//! mode.

use std::fs::{self, File};
use std::io::BufReader;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use recruit_core::equilibrium::{solve_with, EquilibriumTable, Retention, SolveOptions};
use recruit_core::persist::{read_table, write_table, FORMAT_VERSION};
use recruit_core::{GameSpec, Scalar};

use crate::output::write_atomic;

pub struct Cache {
    dir: PathBuf,
}

/// How a table was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Source {
    Solved,
    Hit,
    Stored,
}

impl Source {
    pub fn as_str(self) -> &'static str {
        match self {
            Source::Solved => "off",
            Source::Hit => "hit",
            Source::Stored => "stored",
        }
    }
}

pub fn key<S: Scalar>(spec: &GameSpec, retention: Retention) -> String {
    let descriptor = format!(
        "v{FORMAT_VERSION};k={};q={};x1={};x2={};rule={};p={};mode={};retention={}",
        spec.k(),
        spec.q(),
        spec.x1(),
        spec.x2(),
        spec.rule().id(),
        spec.rule().param().map(|p| p.to_string()).unwrap_or_default(),
        S::MODE,
        match retention {
            Retention::Full => "full",
            Retention::RootOnly => "root",
        }
    );
    let digest = Sha256::digest(descriptor.as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Cache { dir: dir.into() }
    }

    pub fn path<S: Scalar>(&self, spec: &GameSpec, retention: Retention) -> PathBuf {
        self.dir.join(format!("{}.ndjson", key::<S>(spec, retention)))
    }

    /// A cached table at least as complete as `retention`. Unreadable entries
    /// count as misses.
    pub fn load<S: Scalar>(&self, spec: &GameSpec, retention: Retention) -> Option<EquilibriumTable<S>> {
        let candidates: &[Retention] = match retention {
            Retention::Full => &[Retention::Full],
            Retention::RootOnly => &[Retention::RootOnly, Retention::Full],
        };
        for &r in candidates {
            let path = self.path::<S>(spec, r);
            let Ok(file) = File::open(&path) else { continue };
            match read_table::<S, _>(BufReader::new(file)) {
                Ok(t) if t.spec() == spec => return Some(t),
                Ok(_) => eprintln!("recruit: ignoring cache entry {} for a different game", path.display()),
                Err(e) => eprintln!("recruit: ignoring unreadable cache entry {}: {e}", path.display()),
            }
        }
        None
    }

    pub fn store<S: Scalar>(&self, table: &EquilibriumTable<S>) -> anyhow::Result<PathBuf> {
        fs::create_dir_all(&self.dir)?;
        let path = self.path::<S>(table.spec(), table.retention());
        write_atomic(&path, |w| Ok(write_table(table, w)?))?;
        Ok(path)
    }
}

/// Solve, going through the cache when one is given.
pub fn obtain<S: Scalar>(
    spec: &GameSpec,
    retention: Retention,
    cache: Option<&Cache>,
) -> anyhow::Result<(EquilibriumTable<S>, Source)> {
    if let Some(c) = cache {
        if let Some(t) = c.load::<S>(spec, retention) {
            return Ok((t, Source::Hit));
        }
    }
    let opts = SolveOptions { retention, ..Default::default() };
    let table = solve_with::<S>(spec, &opts)?;
    match cache {
        Some(c) => {
            c.store(&table)?;
            Ok((table, Source::Stored))
        }
        None => Ok((table, Source::Solved)),
    }
}

/// Load a table file written by `solve --out`.
pub fn load_file<S: Scalar>(path: &Path) -> anyhow::Result<EquilibriumTable<S>> {
    let file = File::open(path).map_err(|e| crate::usage(format!("cannot open {}: {e}", path.display())))?;
    Ok(read_table(BufReader::new(file))?)
}
