//! Cohomology of the first Frobenius kernel, `H^i(G_1, L(λ))^[-1]` for
//! restricted `λ` and `i ∈ {0, 1, 2}`, read from a data table and closed
//! under duality.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::module_expr::ModuleExpr;
use crate::pattern::{ModulePattern, WeightPattern};
use crate::weight_lattice::{dual, Prime, Weight};

pub const G1_TABLE_FILE: &str = "g1_cohom.tbl";

/// Which primes a table row applies to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Regime {
    #[serde(rename = "any")]
    Any,
    #[serde(rename = "p>3")]
    Generic,
    #[serde(rename = "p=3")]
    Three,
    #[serde(rename = "p=2")]
    Two,
}

impl Regime {
    pub fn parse(s: &str) -> Result<Self, String> {
        match s {
            "any" => Ok(Regime::Any),
            "p>3" => Ok(Regime::Generic),
            "p=3" => Ok(Regime::Three),
            "p=2" => Ok(Regime::Two),
            _ => Err(format!("unknown regime `{s}`")),
        }
    }

    pub fn for_prime(p: Prime) -> Regime {
        match p.get() {
            2 => Regime::Two,
            3 => Regime::Three,
            _ => Regime::Generic,
        }
    }

    pub fn applies(self, p: Prime) -> bool {
        self == Regime::Any || self == Regime::for_prime(p)
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Regime::Any => "any",
            Regime::Generic => "p>3",
            Regime::Three => "p=3",
            Regime::Two => "p=2",
        })
    }
}

/// Provenance of a looked-up value: a table line, possibly reached through
/// the dual closure, or the fixed degree-zero rule.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RowRef {
    pub source: String,
    pub line: usize,
    pub dual: bool,
}

impl RowRef {
    pub fn degree_zero() -> Self {
        RowRef {
            source: "H^0(G_1,K)=K".into(),
            line: 0,
            dual: false,
        }
    }
}

impl fmt::Display for RowRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line == 0 {
            write!(f, "{}", self.source)?;
        } else {
            write!(f, "{}:{}", self.source, self.line)?;
        }
        if self.dual {
            write!(f, " (dual)")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct G1Entry {
    pub line: usize,
    pub regime: Regime,
    pub degree: u8,
    pub weight: WeightPattern,
    pub value: ModulePattern,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct G1Table {
    source: String,
    entries: Vec<G1Entry>,
}

impl G1Table {
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
            let [regime, degree, weight, value] = fields[..] else {
                return Err(err(format!("expected 4 fields, found {}", fields.len())));
            };
            let degree: u8 = degree.parse().map_err(|_| err(format!("bad degree `{degree}`")))?;
            if !(1..=2).contains(&degree) {
                return Err(err(format!("degree {degree} is not tabulated (only 1 and 2)")));
            }
            entries.push(G1Entry {
                line,
                regime: Regime::parse(regime).map_err(err)?,
                degree,
                weight: WeightPattern::parse(weight).map_err(err)?,
                value: ModulePattern::parse(value).map_err(err)?,
            });
        }
        Ok(G1Table {
            source: source.to_string(),
            entries,
        })
    }

    pub fn entries(&self) -> &[G1Entry] {
        &self.entries
    }

    /// Instantiates the applicable rows at `p` and adds their duals.
    pub fn at(&self, p: Prime) -> G1AtPrime {
        let mut values: HashMap<(u8, Weight), (ModuleExpr, RowRef)> = HashMap::new();
        let mut defects = Vec::new();
        let hand: Vec<_> = self
            .entries
            .iter()
            .filter(|e| e.regime.applies(p))
            .map(|e| {
                let row = RowRef {
                    source: self.source.clone(),
                    line: e.line,
                    dual: false,
                };
                (e.degree, e.weight.eval(p), e.value.eval(p), row)
            })
            .collect();
        for (degree, w, m, row) in &hand {
            if let Some((prev, prev_row)) = values.get(&(*degree, *w)) {
                if prev != m {
                    defects.push(format!("H^{degree} at {w}: {prev_row} gives {prev}, {row} gives {m}"));
                }
                continue;
            }
            values.insert((*degree, *w), (m.clone(), row.clone()));
        }
        for (degree, w, m, row) in &hand {
            let dw = dual(w);
            let dm = m.dualize();
            if dw == *w {
                if dm != *m {
                    defects.push(format!(
                        "H^{degree} at self-dual {w}: {row} gives {m}, whose dual {dm} differs"
                    ));
                }
                continue;
            }
            let dual_row = RowRef {
                dual: true,
                ..row.clone()
            };
            match values.get(&(*degree, dw)) {
                Some((prev, prev_row)) if !prev_row.dual => {
                    if *prev != dm {
                        defects.push(format!("H^{degree} at {dw}: {prev_row} gives {prev}, dual of {row} gives {dm}"));
                    }
                }
                Some(_) => {}
                None => {
                    values.insert((*degree, dw), (dm, dual_row));
                }
            }
        }
        G1AtPrime { p, values, defects }
    }
}

/// The G1-cohomology table evaluated at one prime.
#[derive(Debug, Clone)]
pub struct G1AtPrime {
    p: Prime,
    values: HashMap<(u8, Weight), (ModuleExpr, RowRef)>,
    defects: Vec<String>,
}

impl G1AtPrime {
    pub fn prime(&self) -> Prime {
        self.p
    }

    /// `H^degree(G_1, L(lam0))^[-1]` and the row it came from; `None` for the
    /// zero module.
    pub fn lookup(&self, degree: u8, lam0: &Weight) -> Result<Option<(&ModuleExpr, &RowRef)>> {
        if degree > 2 {
            return Err(Error::UnsupportedDegree(degree));
        }
        lam0.ensure_restricted(self.p)?;
        if degree == 0 {
            return Ok(lam0.is_zero().then_some((&*TRIVIAL, &*DEGREE_ZERO_ROW)));
        }
        Ok(self.values.get(&(degree, *lam0)).map(|(m, r)| (m, r)))
    }

    pub fn h_g1(&self, degree: u8, lam0: &Weight) -> Result<ModuleExpr> {
        Ok(self
            .lookup(degree, lam0)?
            .map(|(m, _)| m.clone())
            .unwrap_or_else(ModuleExpr::zero))
    }

    /// Inconsistencies found while closing the table under duality.
    pub fn defects(&self) -> &[String] {
        &self.defects
    }
}

static TRIVIAL: std::sync::LazyLock<ModuleExpr> = std::sync::LazyLock::new(|| ModuleExpr::simple(Weight::ZERO));
static DEGREE_ZERO_ROW: std::sync::LazyLock<RowRef> = std::sync::LazyLock::new(RowRef::degree_zero);
