//! Newline-delimited table files: one header object, then one record per
//! decision state in `states()` order.
//!
//! Values are written as exact ratio strings in exact mode and as shortest
//! round-trip decimals in float mode, so a read-back table re-encodes to the
//! same bytes.

use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::equilibrium::{EquilibriumTable, Layer, Retention};
use crate::error::{Error, Result};
use crate::game::{ActionProfile, CompetitionRule, GameSpec, Quality, Reputation};
use crate::numeric::{Number, NumericMode, Scalar};

pub const FORMAT_VERSION: u32 = 1;

/// Name and version of this library, recorded in every emitted file.
pub const ARTIFACT_VERSION: &str = concat!(env!("CARGO_PKG_NAME"), " ", env!("CARGO_PKG_VERSION"));

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TableHeader {
    pub format_version: u32,
    pub artifact: String,
    pub k: u32,
    pub q: Quality,
    pub x1: Reputation,
    pub x2: Reputation,
    pub rule: String,
    pub p: Option<Number>,
    pub numeric_mode: NumericMode,
    pub retention: Retention,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
struct Record {
    remaining: u32,
    x1: Reputation,
    x2: Reputation,
    profile: String,
    u1: String,
    u2: String,
}

impl TableHeader {
    pub fn of<S: Scalar>(table: &EquilibriumTable<S>) -> Self {
        let spec = table.spec();
        TableHeader {
            format_version: FORMAT_VERSION,
            artifact: ARTIFACT_VERSION.to_string(),
            k: spec.k(),
            q: spec.q().clone(),
            x1: spec.x1(),
            x2: spec.x2(),
            rule: spec.rule().id(),
            p: spec.rule().param().cloned(),
            numeric_mode: S::MODE,
            retention: table.retention(),
        }
    }

    pub fn spec(&self) -> Result<GameSpec> {
        let rule = match (self.rule.as_str(), &self.p) {
            ("tullock", None) => CompetitionRule::Tullock,
            ("fixed_p", Some(p)) => CompetitionRule::fixed_p(p.clone())?,
            (id, _) => return Err(Error::Format(format!("cannot restore competition rule {id:?}"))),
        };
        GameSpec::new(self.k, self.q.clone(), self.x1, self.x2, rule)
    }
}

fn json_line<T: Serialize, W: Write>(w: &mut W, value: &T) -> Result<()> {
    serde_json::to_writer(&mut *w, value).map_err(|e| Error::Format(e.to_string()))?;
    w.write_all(b"\n")?;
    Ok(())
}

/// Write the header and every decision state. Terminal states carry no
/// information and are omitted.
pub fn write_table<S: Scalar, W: Write>(table: &EquilibriumTable<S>, mut w: W) -> Result<()> {
    if !table.spec().rule().is_builtin() {
        return Err(Error::NotApplicable("tables with custom competition rules cannot be persisted".into()));
    }
    json_line(&mut w, &TableHeader::of(table))?;
    for (key, v) in table.states() {
        let Some(profile) = v.profile else { continue };
        let record = Record {
            remaining: key.remaining,
            x1: key.x1,
            x2: key.x2,
            profile: profile.code().to_string(),
            u1: v.u1.encode(),
            u2: v.u2.encode(),
        };
        json_line(&mut w, &record)?;
    }
    w.flush()?;
    Ok(())
}

/// Read only the header line.
pub fn read_header<R: BufRead>(r: R) -> Result<TableHeader> {
    let line = r.lines().next().ok_or_else(|| Error::Format("empty table file".into()))??;
    parse_header(&line)
}

fn parse_header(line: &str) -> Result<TableHeader> {
    let header: TableHeader =
        serde_json::from_str(line).map_err(|e| Error::Format(format!("bad table header: {e}")))?;
    if header.format_version != FORMAT_VERSION {
        return Err(Error::Format(format!("unsupported table format version {}", header.format_version)));
    }
    Ok(header)
}

pub fn read_table<S: Scalar, R: BufRead>(r: R) -> Result<EquilibriumTable<S>> {
    let mut lines = r.lines();
    let first = lines.next().ok_or_else(|| Error::Format("empty table file".into()))??;
    let header = parse_header(&first)?;
    if header.numeric_mode != S::MODE {
        return Err(Error::Format(format!(
            "table was written in {} mode, requested {}",
            header.numeric_mode,
            S::MODE
        )));
    }
    let spec = header.spec()?;
    let k = spec.k();
    let (r1, r2) = spec.start();
    let decision_layers: Vec<u32> = match header.retention {
        Retention::Full => (1..=k).rev().collect(),
        Retention::RootOnly if k > 0 => vec![k],
        Retention::RootOnly => Vec::new(),
    };

    let mut layers = Vec::new();
    for &j in &decision_layers {
        let len = (k - j) as usize + 1;
        let mut layer = Layer { profiles: Vec::with_capacity(len), u1: Vec::with_capacity(len), u2: Vec::with_capacity(len) };
        for i in 0..len as u64 {
            let line = lines.next().ok_or_else(|| Error::Format(format!("table ends early in layer {j}")))??;
            let rec: Record = serde_json::from_str(&line).map_err(|e| Error::Format(format!("bad record: {e}")))?;
            let want = (j, r1 + i, r2 + (k - j) as u64 - i);
            if (rec.remaining, rec.x1, rec.x2) != want {
                return Err(Error::Format(format!(
                    "expected state {want:?}, found ({}, {}, {})",
                    rec.remaining, rec.x1, rec.x2
                )));
            }
            layer.profiles.push(rec.profile.parse::<ActionProfile>()?);
            layer.u1.push(S::decode(&rec.u1)?);
            layer.u2.push(S::decode(&rec.u2)?);
        }
        layers.push(layer);
    }
    if let Some(extra) = lines.next() {
        if !extra?.trim().is_empty() {
            return Err(Error::Format("trailing data after the last record".into()));
        }
    }
    layers.reverse();
    Ok(EquilibriumTable::from_decision_layers(spec, header.retention, layers))
}
