//! Keyed-text (JSON) problem descriptions: dimension, generator
//! polynomials, content candidates, strata and blow-up charts.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Deserialize;

use crate::derivation::{Derivation, Substitution, DEFAULT_NILPOTENCY_BOUND};
use crate::error::{Error, Result};
use crate::limits::{ChartMap, Stratum};
use crate::parse::parse_poly;
use crate::poly::MultiPoly;
use crate::vars::{VarKind, VarTable};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpec {
    n: usize,
    delta: Vec<String>,
    #[serde(default)]
    content_candidates: Vec<String>,
    #[serde(default)]
    strata: Vec<RawStratum>,
    #[serde(default)]
    charts: Vec<RawChart>,
    #[serde(default)]
    seed: Option<u64>,
    #[serde(default)]
    nilpotency_bound: Option<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawStratum {
    name: String,
    sub: BTreeMap<String, String>,
    #[serde(default)]
    candidates: Vec<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawChart {
    name: String,
    sub: BTreeMap<String, String>,
    exceptional: String,
}

/// A fully parsed problem: the derivation with its caches plus the
/// boundary data, all over one shared variable table.
#[derive(Debug)]
pub struct Problem {
    pub table: Arc<VarTable>,
    pub derivation: Derivation,
    pub content_candidates: Vec<MultiPoly>,
    pub strata: Vec<Stratum>,
    pub charts: Vec<ChartMap>,
    pub seed: Option<u64>,
}

pub fn load_str(text: &str) -> Result<Problem> {
    let raw: RawSpec = serde_json::from_str(text).map_err(|e| Error::InvalidSpec(e.to_string()))?;
    if raw.n == 0 {
        return Err(Error::InvalidSpec("n must be at least 1".to_string()));
    }
    if raw.delta.len() != raw.n {
        return Err(Error::InvalidSpec(format!(
            "delta must list exactly n = {} polynomials, got {}",
            raw.n,
            raw.delta.len()
        )));
    }
    let mut max_xi = 0usize;
    let mut texts: Vec<&str> = Vec::new();
    texts.extend(raw.delta.iter().map(|s| s.as_str()));
    texts.extend(raw.content_candidates.iter().map(|s| s.as_str()));
    for s in &raw.strata {
        texts.extend(s.sub.values().map(|v| v.as_str()));
        texts.extend(s.candidates.iter().map(|v| v.as_str()));
    }
    for c in &raw.charts {
        texts.extend(c.sub.values().map(|v| v.as_str()));
        texts.push(c.exceptional.as_str());
    }
    for t in &texts {
        max_xi = max_xi.max(max_xi_index(t));
    }
    let table = VarTable::new(raw.n, max_xi);
    let bound = raw.nilpotency_bound.unwrap_or(DEFAULT_NILPOTENCY_BOUND);

    let generators: Vec<MultiPoly> = raw
        .delta
        .iter()
        .map(|s| parse_poly(s, &table))
        .collect::<Result<_>>()?;
    let derivation = Derivation::new(&table, generators, bound)?;

    let content_candidates: Vec<MultiPoly> = raw
        .content_candidates
        .iter()
        .map(|s| parse_poly(s, &table))
        .collect::<Result<_>>()?;

    let parse_sub = |m: &BTreeMap<String, String>| -> Result<Substitution> {
        let mut sub = Substitution::new();
        for (k, v) in m {
            let var = table
                .lookup(k)
                .ok_or_else(|| Error::UnknownVariable(k.clone()))?;
            match table.kind(var) {
                VarKind::Coord(j) if j >= 1 => {}
                _ => {
                    return Err(Error::InvalidSpec(format!(
                        "substitution key `{k}` is not a coordinate x1..x{}",
                        raw.n
                    )))
                }
            }
            sub.insert(var, parse_poly(v, &table)?);
        }
        Ok(sub)
    };

    let strata: Vec<Stratum> = raw
        .strata
        .iter()
        .map(|s| {
            Ok(Stratum {
                name: s.name.clone(),
                sub: parse_sub(&s.sub)?,
                candidates: s
                    .candidates
                    .iter()
                    .map(|c| parse_poly(c, &table))
                    .collect::<Result<_>>()?,
            })
        })
        .collect::<Result<_>>()?;

    let charts: Vec<ChartMap> = raw
        .charts
        .iter()
        .map(|c| {
            let exceptional = parse_poly(&c.exceptional, &table)?;
            if exceptional.is_zero() {
                return Err(Error::InvalidSpec(format!(
                    "chart `{}` has a zero exceptional generator",
                    c.name
                )));
            }
            Ok(ChartMap {
                name: c.name.clone(),
                sub: parse_sub(&c.sub)?,
                exceptional,
            })
        })
        .collect::<Result<_>>()?;

    Ok(Problem {
        table,
        derivation,
        content_candidates,
        strata,
        charts,
        seed: raw.seed,
    })
}

pub fn load_path(path: &std::path::Path) -> Result<Problem> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidSpec(format!("cannot read {}: {e}", path.display())))?;
    load_str(&text)
}

/// Largest k such that `xi<k>` occurs in the text.
fn max_xi_index(text: &str) -> usize {
    let bytes = text.as_bytes();
    let mut best = 0usize;
    let mut i = 0;
    while i + 1 < bytes.len() {
        if bytes[i] == b'x' && bytes[i + 1] == b'i' {
            let mut j = i + 2;
            while j < bytes.len() && bytes[j].is_ascii_digit() {
                j += 1;
            }
            if j > i + 2 {
                if let Ok(k) = std::str::from_utf8(&bytes[i + 2..j])
                    .unwrap()
                    .parse::<usize>()
                {
                    best = best.max(k);
                }
                i = j;
                continue;
            }
        }
        i += 1;
    }
    best
}

/// The actions analyzed in the bundled suite.
pub mod bundled {
    /// Degree-two action on C^3; proper with a global slice.
    pub const QUADRATIC_C3: &str = include_str!("../specs/quadratic_c3.json");
    /// Degree-two action on C^5; proper after one blow-up.
    pub const PROPER_C5: &str = include_str!("../specs/proper_c5.json");
    /// Degree-two action on C^4 with non-Hausdorff quotient topology.
    pub const NONHAUSDORFF_C4: &str = include_str!("../specs/nonhausdorff_c4.json");
    /// Coordinate translation on C^2; the degree-one reference case.
    pub const TRANSLATION_C2: &str = include_str!("../specs/translation_c2.json");

    pub fn all() -> [(&'static str, &'static str); 4] {
        [
            ("quadratic_c3", QUADRATIC_C3),
            ("proper_c5", PROPER_C5),
            ("nonhausdorff_c4", NONHAUSDORFF_C4),
            ("translation_c2", TRANSLATION_C2),
        ]
    }
}
