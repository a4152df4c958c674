//! Shared argument groups and grid parsing.

use std::path::PathBuf;

use clap::{Args, ValueEnum};
use num::{BigRational, Zero};
use serde::Serialize;

use recruit_core::report::format_sig;
use recruit_core::{CompetitionRule, GameSpec, Number, NumericMode, Quality, Reputation};

use crate::usage;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RuleArg {
    Tullock,
    #[value(name = "fixed_p", alias = "fixed-p")]
    FixedP,
}

/// Game parameters. `k` and `q` fall back to per-command defaults.
#[derive(Args, Clone, Debug)]
pub struct GameArgs {
    /// Number of rounds.
    #[arg(long)]
    pub k: Option<u32>,
    /// Weak-candidate quality in (0, 1), as a decimal or "num/den".
    #[arg(long)]
    pub q: Option<String>,
    #[arg(long, default_value_t = 1)]
    pub x1: Reputation,
    #[arg(long, default_value_t = 1)]
    pub x2: Reputation,
    #[arg(long, value_enum, default_value = "tullock")]
    pub rule: RuleArg,
    /// Lower player's win probability under the fixed-p rule.
    #[arg(long)]
    pub p: Option<String>,
    /// Rational arithmetic. q and p must then be given as "num/den".
    #[arg(long)]
    pub exact: bool,
}

/// Resolved game configuration, recorded in output headers.
#[derive(Clone, Debug, Serialize)]
pub struct GameConfig {
    pub k: u32,
    pub q: Quality,
    pub x1: Reputation,
    pub x2: Reputation,
    pub rule: RuleArg,
    pub p: Option<Number>,
    pub numeric_mode: NumericMode,
}

impl GameConfig {
    pub fn spec(&self) -> anyhow::Result<GameSpec> {
        let rule = match self.rule {
            RuleArg::Tullock => CompetitionRule::Tullock,
            RuleArg::FixedP => CompetitionRule::fixed_p(self.p.clone().expect("checked when resolving"))?,
        };
        Ok(GameSpec::new(self.k, self.q.clone(), self.x1, self.x2, rule)?)
    }
}

pub fn mode(exact: bool) -> NumericMode {
    if exact {
        NumericMode::Exact
    } else {
        NumericMode::Float
    }
}

/// Parse a number, refusing decimals in exact mode.
pub fn parse_number(name: &str, s: &str, exact: bool) -> anyhow::Result<Number> {
    let n: Number = s.parse().map_err(|e| usage(format!("--{name}: {e}")))?;
    if exact && !n.is_exact() {
        return Err(usage(format!("--{name} {s} is a decimal; with --exact give it as num/den")));
    }
    Ok(n)
}

pub fn parse_quality(s: &str, exact: bool) -> anyhow::Result<Quality> {
    Quality::new(parse_number("q", s, exact)?).map_err(|e| usage(format!("--q: {e}")))
}

impl GameArgs {
    pub fn resolve(&self, default_k: Option<u32>, default_q: Option<&str>) -> anyhow::Result<GameConfig> {
        let k = self.k.or(default_k).ok_or_else(|| usage("--k is required"))?;
        if k < 1 {
            return Err(usage("--k must be at least 1"));
        }
        let q = self.q.as_deref().or(default_q).ok_or_else(|| usage("--q is required"))?;
        let q = parse_quality(q, self.exact)?;
        if self.x1 == 0 && self.x2 == 0 {
            return Err(usage("starting reputations cannot both be zero"));
        }
        let p = match (self.rule, &self.p) {
            (RuleArg::Tullock, None) => None,
            (RuleArg::Tullock, Some(_)) => return Err(usage("--p only applies to --rule fixed_p")),
            (RuleArg::FixedP, None) => return Err(usage("--rule fixed_p needs --p")),
            (RuleArg::FixedP, Some(p)) => {
                let p = parse_number("p", p, self.exact)?;
                CompetitionRule::fixed_p(p.clone()).map_err(|e| usage(format!("--p: {e}")))?;
                Some(p)
            }
        };
        Ok(GameConfig { k, q, x1: self.x1, x2: self.x2, rule: self.rule, p, numeric_mode: mode(self.exact) })
    }
}

/// Where solved tables are cached.
#[derive(Args, Clone, Debug)]
pub struct CacheArgs {
    /// Reuse and store solved tables in the cache directory.
    #[arg(long)]
    pub cache: bool,
    #[arg(long, env = "RECRUIT_CACHE_DIR", default_value = ".recruit-cache")]
    pub cache_dir: PathBuf,
}

/// Integer grid: comma-separated values and inclusive ranges `a..b` or
/// `a..b:step`.
pub fn parse_int_grid(s: &str) -> anyhow::Result<Vec<u32>> {
    let mut out = Vec::new();
    for item in s.split(',').map(str::trim).filter(|i| !i.is_empty()) {
        let bad = || usage(format!("bad grid entry {item:?}"));
        match item.split_once("..") {
            None => out.push(item.parse().map_err(|_| bad())?),
            Some((lo, rest)) => {
                let (hi, step) = rest.split_once(':').unwrap_or((rest, "1"));
                let lo: u32 = lo.trim().parse().map_err(|_| bad())?;
                let hi: u32 = hi.trim().parse().map_err(|_| bad())?;
                let step: u32 = step.trim().parse().map_err(|_| bad())?;
                if step == 0 || lo > hi {
                    return Err(bad());
                }
                out.extend((lo..=hi).step_by(step as usize));
            }
        }
    }
    Ok(out)
}

/// Number grid: comma-separated values and inclusive ranges `lo..hi:step`.
/// A range of ratios stays exact; a decimal range is rounded to twelve
/// significant digits so that `0.05..0.95:0.05` yields `0.15`, not
/// `0.15000000000000002`.
pub fn parse_number_grid(name: &str, s: &str, exact: bool) -> anyhow::Result<Vec<Number>> {
    let mut out = Vec::new();
    for item in s.split(',').map(str::trim).filter(|i| !i.is_empty()) {
        let Some((lo, rest)) = item.split_once("..") else {
            out.push(parse_number(name, item, exact)?);
            continue;
        };
        let (hi, step) = rest.split_once(':').ok_or_else(|| usage(format!("range {item:?} needs a step, lo..hi:step")))?;
        let (lo, hi, step) =
            (parse_number(name, lo, exact)?, parse_number(name, hi, exact)?, parse_number(name, step, exact)?);
        match (lo.as_ratio(), hi.as_ratio(), step.as_ratio()) {
            (Some(lo), Some(hi), Some(step)) => {
                if *step <= BigRational::zero() || lo > hi {
                    return Err(usage(format!("empty range {item:?}")));
                }
                let mut v = lo.clone();
                while v <= *hi {
                    out.push(Number::Ratio(v.clone()));
                    v += step;
                }
            }
            _ => {
                let (lo, hi, step) = (lo.to_f64(), hi.to_f64(), step.to_f64());
                if step.is_nan() || step <= 0.0 || lo > hi {
                    return Err(usage(format!("empty range {item:?}")));
                }
                let n = ((hi - lo) / step + 1e-9).floor() as u64;
                for i in 0..=n {
                    let v: f64 = format_sig(lo + i as f64 * step).parse().expect("formatted float");
                    out.push(Number::Decimal(v));
                }
            }
        }
    }
    Ok(out)
}

pub fn parse_start(s: &str) -> anyhow::Result<(Reputation, Reputation)> {
    let bad = || usage(format!("--start {s:?}: expected x1,x2"));
    let (a, b) = s.split_once(',').ok_or_else(bad)?;
    let start = (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?);
    if start == (0, 0) {
        return Err(bad());
    }
    Ok(start)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn int_grids() {
        assert_eq!(parse_int_grid("1..4").unwrap(), vec![1, 2, 3, 4]);
        assert_eq!(parse_int_grid("100, 400,1600..6400:4800").unwrap(), vec![100, 400, 1600, 6400]);
        assert!(parse_int_grid("5..1").is_err());
        assert!(parse_int_grid("").unwrap().is_empty());
    }

    #[test]
    fn number_grids() {
        let g = parse_number_grid("q", "0.05..0.95:0.05", false).unwrap();
        assert_eq!(g.len(), 19);
        assert_eq!(g[2], Number::Decimal(0.15));
        assert_eq!(g[18], Number::Decimal(0.95));
        let g = parse_number_grid("q", "1/4..3/4:1/4", true).unwrap();
        assert_eq!(g, vec![Number::ratio(1, 4), Number::ratio(1, 2), Number::ratio(3, 4)]);
        assert!(parse_number_grid("q", "0.25", true).is_err());
    }

    #[test]
    fn decimal_with_exact_is_refused() {
        let args = GameArgs {
            k: Some(2),
            q: Some("0.6".into()),
            x1: 1,
            x2: 1,
            rule: RuleArg::Tullock,
            p: None,
            exact: true,
        };
        assert!(args.resolve(None, None).is_err());
        let args = GameArgs { q: Some("3/5".into()), ..args };
        assert_eq!(args.resolve(None, None).unwrap().q, Quality::ratio(3, 5).unwrap());
    }
}
