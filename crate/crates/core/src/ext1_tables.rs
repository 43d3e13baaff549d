//! `Ext^1_G(λ, μ)` for `λ ∈ {(0,0), (1,0), (0,1), (1,1)}` and simple `μ`.
//!
//! Each table row is a family of simple modules `μ`, given as a tensor
//! pattern in `p` and a free index `i ≥ 0`. A non-zero Ext group is always
//! one-dimensional, so the lookup answers 0 or 1 together with the family
//! that fired. Known misprints are corrected by an errata overlay that can
//! be switched off to inspect the printed reading.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::g1_cohom::Regime;
use crate::pattern::{ResolvedPattern, TensorPattern};
use crate::weight_lattice::{Decomposition, Prime, Weight};

pub const EXT1_TABLE_FILE: &str = "ext1.tbl";
pub const ERRATA_FILE: &str = "errata.overlay";

pub const SUPPORTED_ROWS: [Weight; 4] = [
    Weight::new(0, 0),
    Weight::new(1, 0),
    Weight::new(0, 1),
    Weight::new(1, 1),
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EntryPattern {
    Parsed(TensorPattern),
    /// Kept verbatim; never matches.
    Unreadable(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OverlayNote {
    pub line: usize,
    pub printed: String,
    pub justification: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtEntry {
    pub line: usize,
    pub regime: Regime,
    pub row: Weight,
    /// Active pattern text (the overlay replacement when one applies).
    pub text: String,
    pub pattern: EntryPattern,
    pub overlay: Option<OverlayNote>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ext1Table {
    source: String,
    overlay_source: Option<String>,
    entries: Vec<ExtEntry>,
}

fn parse_row(s: &str) -> Result<Weight, String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("bad row `{s}`"))?;
    let a: i64 = a.parse().map_err(|_| format!("bad row `{s}`"))?;
    let b: i64 = b.parse().map_err(|_| format!("bad row `{s}`"))?;
    let w = Weight::new(a, b);
    if !SUPPORTED_ROWS.contains(&w) {
        return Err(format!("unsupported row {w}"));
    }
    Ok(w)
}

fn entry_pattern(text: &str) -> EntryPattern {
    match TensorPattern::parse(text) {
        Ok(p) => EntryPattern::Parsed(p),
        Err(e) => EntryPattern::Unreadable(e),
    }
}

impl Ext1Table {
    pub fn parse(source: &str, text: &str) -> Result<Self> {
        let mut entries = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let row = raw.trim();
            if row.is_empty() || row.starts_with('#') {
                continue;
            }
            let err = |message: String| Error::Parse {
                file: source.to_string(),
                line,
                message,
            };
            let fields: Vec<&str> = row.split(';').map(str::trim).collect();
            let [regime, lam, mu] = fields[..] else {
                return Err(err(format!("expected 3 fields, found {}", fields.len())));
            };
            entries.push(ExtEntry {
                line,
                regime: Regime::parse(regime).map_err(err)?,
                row: parse_row(lam).map_err(err)?,
                text: mu.to_string(),
                pattern: entry_pattern(mu),
                overlay: None,
            });
        }
        Ok(Ext1Table {
            source: source.to_string(),
            overlay_source: None,
            entries,
        })
    }

    /// Applies `replace;<regime>;<row>;<old>;<new>;<justification>` lines.
    pub fn apply_overlay(&mut self, source: &str, text: &str) -> Result<()> {
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let row = raw.trim();
            if row.is_empty() || row.starts_with('#') {
                continue;
            }
            let err = |message: String| Error::Parse {
                file: source.to_string(),
                line,
                message,
            };
            let fields: Vec<&str> = row.splitn(6, ';').map(str::trim).collect();
            let ["replace", regime, lam, old, new, justification] = fields[..] else {
                return Err(err("expected `replace;<regime>;<row>;<old>;<new>;<justification>`".into()));
            };
            let regime = Regime::parse(regime).map_err(err)?;
            let lam = parse_row(lam).map_err(err)?;
            let replacement = TensorPattern::parse(new).map_err(err)?;
            let target = self
                .entries
                .iter_mut()
                .find(|e| e.regime == regime && e.row == lam && e.text == old && e.overlay.is_none())
                .ok_or_else(|| err(format!("no {regime} row {lam} entry reads `{old}`")))?;
            target.overlay = Some(OverlayNote {
                line,
                printed: target.text.clone(),
                justification: justification.to_string(),
            });
            target.text = new.to_string();
            target.pattern = EntryPattern::Parsed(replacement);
        }
        self.overlay_source = Some(source.to_string());
        Ok(())
    }

    pub fn entries(&self) -> &[ExtEntry] {
        &self.entries
    }

    pub fn unreadable(&self) -> impl Iterator<Item = &ExtEntry> {
        self.entries
            .iter()
            .filter(|e| matches!(e.pattern, EntryPattern::Unreadable(_)))
    }

    pub fn at(&self, p: Prime) -> Ext1AtPrime {
        let families = self
            .entries
            .iter()
            .filter(|e| e.regime.applies(p))
            .filter_map(|e| match &e.pattern {
                EntryPattern::Parsed(pat) => Some(Family {
                    row: e.row,
                    resolved: pat.resolve(p),
                    id: FamilyId {
                        family: e.text.clone(),
                        source: self.source.clone(),
                        line: e.line,
                        overlay: e.overlay.as_ref().map(|o| {
                            format!("{}:{}", self.overlay_source.as_deref().unwrap_or(ERRATA_FILE), o.line)
                        }),
                    },
                }),
                EntryPattern::Unreadable(_) => None,
            })
            .collect();
        Ext1AtPrime { p, families }
    }
}

/// Identifies the table family behind an Ext value.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FamilyId {
    pub family: String,
    pub source: String,
    pub line: usize,
    /// Overlay line that rewrote this entry, if any.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub overlay: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ExtMatch {
    #[serde(flatten)]
    pub id: FamilyId,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub i: Option<usize>,
}

#[derive(Debug, Clone)]
struct Family {
    row: Weight,
    resolved: ResolvedPattern,
    id: FamilyId,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ext1Value {
    pub dim: u32,
    pub family: Option<ExtMatch>,
}

/// The Ext^1 tables evaluated at one prime.
#[derive(Debug, Clone)]
pub struct Ext1AtPrime {
    p: Prime,
    families: Vec<Family>,
}

impl Ext1AtPrime {
    pub fn prime(&self) -> Prime {
        self.p
    }

    /// Every family (and index value) whose instance is exactly `mu`.
    pub fn matches(&self, row: &Weight, mu: &Decomposition) -> Result<Vec<ExtMatch>> {
        if !SUPPORTED_ROWS.contains(row) {
            return Err(Error::UnsupportedExtRow(row.to_string()));
        }
        Ok(self
            .families
            .iter()
            .filter(|f| f.row == *row)
            .flat_map(|f| {
                f.resolved.match_exact(mu, 0).into_iter().map(|i| ExtMatch {
                    id: f.id.clone(),
                    i,
                })
            })
            .collect())
    }

    pub fn ext1_dim(&self, row: &Weight, mu: &Decomposition) -> Result<Ext1Value> {
        let family = self.matches(row, mu)?.into_iter().next();
        Ok(Ext1Value {
            dim: family.is_some() as u32,
            family,
        })
    }

    /// `H^1(G, μ) = Ext^1_G(K, μ)`.
    pub fn h1_g(&self, mu: &Decomposition) -> Ext1Value {
        self.ext1_dim(&Weight::ZERO, mu).expect("(0,0) is a supported row")
    }
}
