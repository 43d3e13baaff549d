//! Query records, bulk tables and the route cross-check.

use std::collections::BTreeSet;
use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::ext1_tables::ExtMatch;
use crate::h2_classifier::{Classifier, PatternMatch};
use crate::h2_pipeline::{H2Pipeline, Trace};
use crate::tables::Tables;
use crate::weight_lattice::{check_guard, steinberg_decompose, Decomposition, Prime, Weight};
use crate::weyl_linkage::{g1_linkage_witnesses, g_linkage_witnesses};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Route {
    Pipeline,
    Theorem,
    #[default]
    Both,
}

impl Route {
    pub fn pipeline(self) -> bool {
        self != Route::Theorem
    }

    pub fn theorem(self) -> bool {
        self != Route::Pipeline
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct E2Terms {
    pub e2_02: u32,
    pub e2_11: u32,
    pub e2_20: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct H2Record {
    pub p: Prime,
    pub weight: Weight,
    /// Factor list as entered, when the weight was given factor-wise.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub factors: Option<Vec<Weight>>,
    pub twist: usize,
    pub decomposition: String,
    pub route: Route,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h2_pipeline: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h2_theorem: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub e2: Option<E2Terms>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub pattern_ids: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub matches: Vec<PatternMatch>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub agree: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace: Option<Trace>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinkageRecord {
    pub p: Prime,
    pub weight: Weight,
    pub linked: bool,
    pub witnesses: Vec<String>,
    /// Only for restricted weights.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g1_linked: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g1_witnesses: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ext1Record {
    pub p: Prime,
    pub row: Weight,
    pub mu: Weight,
    pub decomposition: String,
    pub dim: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<ExtMatch>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum QueryRecord {
    H2(H2Record),
    Linkage(LinkageRecord),
    Ext1(Ext1Record),
}

/// A weight as entered: a plain pair, or restricted factors starting at `twist`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WeightInput {
    Pair(Weight),
    Factors(Vec<Weight>),
}

impl WeightInput {
    /// `a,b` or `a0,b0;a1,b1;...`.
    pub fn parse(s: &str) -> std::result::Result<Self, String> {
        let pair = |t: &str| -> std::result::Result<Weight, String> {
            let (a, b) = t.split_once(',').ok_or_else(|| format!("expected a,b in {t:?}"))?;
            let a = a.trim().parse::<i64>().map_err(|e| format!("{a:?}: {e}"))?;
            let b = b.trim().parse::<i64>().map_err(|e| format!("{b:?}: {e}"))?;
            if a < 0 || b < 0 {
                return Err(format!("weight ({a},{b}) is not dominant"));
            }
            Ok(Weight::new(a, b))
        };
        if s.contains(';') {
            Ok(WeightInput::Factors(s.split(';').map(pair).collect::<std::result::Result<_, _>>()?))
        } else {
            Ok(WeightInput::Pair(pair(s)?))
        }
    }

    pub fn decomposition(&self, p: Prime, twist: usize) -> Result<Decomposition> {
        match self {
            WeightInput::Pair(w) => Ok(steinberg_decompose(p, w)?.twisted(twist)),
            WeightInput::Factors(f) => Ok(Decomposition::from_digits(p, f)?.twisted(twist)),
        }
    }
}

/// Both routes at one prime.
#[derive(Debug, Clone)]
pub struct Engine {
    pub pipeline: H2Pipeline,
    pub classifier: Classifier,
}

impl Engine {
    pub fn new(tables: &Tables, p: Prime) -> Self {
        Engine {
            pipeline: H2Pipeline::new(tables, p),
            classifier: Classifier::new(p),
        }
    }

    pub fn prime(&self) -> Prime {
        self.pipeline.prime()
    }

    pub fn h2_record(&self, input: &WeightInput, twist: usize, route: Route, explain: bool) -> Result<H2Record> {
        let p = self.prime();
        let dec = input.decomposition(p, twist)?;
        let weight: Weight = dec.recompose()?;
        check_guard(p, &weight)?;
        let mut rec = H2Record {
            p,
            weight,
            factors: match input {
                WeightInput::Factors(f) => Some(f.clone()),
                WeightInput::Pair(_) => None,
            },
            twist,
            decomposition: dec.to_string(),
            route,
            h2_pipeline: None,
            h2_theorem: None,
            e2: None,
            pattern_ids: Vec::new(),
            matches: Vec::new(),
            agree: None,
            trace: None,
        };
        if route.pipeline() {
            let r = self.pipeline.h2_decomposition(&dec)?;
            rec.h2_pipeline = Some(r.total);
            rec.e2 = Some(E2Terms {
                e2_02: r.e2_02,
                e2_11: r.e2_11,
                e2_20: r.e2_20,
            });
            if explain {
                rec.trace = Some(r.trace);
            }
        }
        if route.theorem() {
            let c = self.classifier.classify_decomposition(&dec);
            rec.h2_theorem = Some(c.dim);
            rec.pattern_ids = pattern_ids(&c.matches);
            rec.matches = c.matches;
        }
        if let (Some(a), Some(b)) = (rec.h2_pipeline, rec.h2_theorem) {
            rec.agree = Some(a == b);
        }
        Ok(rec)
    }
}

/// Distinct match labels in order, e.g. `["2", "9'"]`.
pub fn pattern_ids(matches: &[PatternMatch]) -> Vec<String> {
    let mut ids: Vec<String> = Vec::new();
    for m in matches {
        let l = m.label();
        if !ids.contains(&l) {
            ids.push(l);
        }
    }
    ids
}

pub fn linkage_record(p: Prime, w: &Weight) -> Result<LinkageRecord> {
    check_guard(p, w)?;
    let witnesses = g_linkage_witnesses(p, w);
    let (g1_linked, g1_witnesses) = if w.is_restricted(p) {
        let g1 = g1_linkage_witnesses(p, w)?;
        (Some(!g1.is_empty()), Some(g1.iter().map(|e| e.name().to_string()).collect()))
    } else {
        (None, None)
    };
    Ok(LinkageRecord {
        p,
        weight: *w,
        linked: !witnesses.is_empty(),
        witnesses: witnesses.iter().map(|e| e.name().to_string()).collect(),
        g1_linked,
        g1_witnesses,
    })
}

pub fn ext1_record(tables: &Tables, p: Prime, row: &Weight, mu: &Weight) -> Result<Ext1Record> {
    let dec = steinberg_decompose(p, mu)?;
    let v = tables.at(p).ext1.ext1_dim(row, &dec)?;
    Ok(Ext1Record {
        p,
        row: *row,
        mu: *mu,
        decomposition: dec.to_string(),
        dim: v.dim,
        family: v.family,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    pub a: i64,
    pub b: i64,
    pub h2_pipeline: u32,
    pub h2_theorem: u32,
    pub agree: bool,
    /// Space-separated match labels.
    pub pattern_ids: String,
    pub e2_02: u32,
    pub e2_11: u32,
    pub e2_20: u32,
}

impl Engine {
    pub fn table_row(&self, w: &Weight) -> Result<TableRow> {
        let rec = self.h2_record(&WeightInput::Pair(*w), 0, Route::Both, false)?;
        let e2 = rec.e2.expect("pipeline ran");
        Ok(TableRow {
            a: w.a,
            b: w.b,
            h2_pipeline: rec.h2_pipeline.unwrap_or_default(),
            h2_theorem: rec.h2_theorem.unwrap_or_default(),
            agree: rec.agree == Some(true),
            pattern_ids: rec.pattern_ids.join(" "),
            e2_02: e2.e2_02,
            e2_11: e2.e2_11,
            e2_20: e2.e2_20,
        })
    }

    /// Rows for every `(a,b)` with `a,b < max`, ordered by `(a,b)`.
    pub fn table(&self, max: i64, discrepancies_only: bool) -> Result<Vec<TableRow>> {
        if max > 0 {
            check_guard(self.prime(), &Weight::new(max - 1, max - 1))?;
        }
        let rows: Vec<TableRow> = (0..max.max(0))
            .into_par_iter()
            .flat_map_iter(|a| (0..max).map(move |b| Weight::new(a, b)))
            .map(|w| self.table_row(&w))
            .collect::<Result<_>>()?;
        Ok(if discrepancies_only {
            rows.into_iter().filter(|r| !r.agree).collect()
        } else {
            rows
        })
    }
}

pub fn write_csv<W: Write>(out: W, rows: &[TableRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    if rows.is_empty() {
        w.write_record(["a", "b", "h2_pipeline", "h2_theorem", "agree", "pattern_ids", "e2_02", "e2_11", "e2_20"])
            .map_err(csv_err)?;
    }
    for r in rows {
        w.serialize(r).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

fn csv_err(e: csv::Error) -> crate::error::Error {
    crate::error::Error::Io(e.to_string())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrosscheckOptions {
    /// Enumerate every `(a,b)` with `a,b < p^max_len`.
    pub max_len: u32,
    pub max_r: usize,
    pub max_d: usize,
}

impl Default for CrosscheckOptions {
    fn default() -> Self {
        CrosscheckOptions {
            max_len: 3,
            max_r: 4,
            max_d: 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Discrepancy {
    pub weight: Weight,
    pub decomposition: String,
    pub h2_pipeline: u32,
    pub h2_theorem: u32,
    pub pattern_ids: Vec<String>,
    pub matches: Vec<PatternMatch>,
    pub trace: Trace,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeReport {
    pub p: Prime,
    pub checked: usize,
    pub agreeing: usize,
    pub discrepancies: Vec<Discrepancy>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrosscheckReport {
    pub options: CrosscheckOptions,
    pub errata: bool,
    pub primes: Vec<PrimeReport>,
}

impl Engine {
    /// The enumeration box together with every pattern instance up to the
    /// given `r` and `d`, sorted and deduplicated.
    pub fn crosscheck_weights(&self, opts: &CrosscheckOptions) -> Result<Vec<Weight>> {
        let p = self.prime();
        let bound = p.as_i64().pow(opts.max_len);
        check_guard(p, &Weight::new(bound - 1, bound - 1))?;
        let mut set: BTreeSet<Weight> = (0..bound).flat_map(|a| (0..bound).map(move |b| Weight::new(a, b))).collect();
        for inst in self.classifier.instantiate_patterns(opts.max_r) {
            let Some(dec) = inst.decomposition else { continue };
            for d in 0..=opts.max_d {
                let w: Weight = dec.twisted(d).recompose()?;
                check_guard(p, &w)?;
                set.insert(w);
            }
        }
        Ok(set.into_iter().collect())
    }

    pub fn crosscheck(&self, opts: &CrosscheckOptions) -> Result<PrimeReport> {
        let weights = self.crosscheck_weights(opts)?;
        let results: Vec<Option<Discrepancy>> = weights
            .par_iter()
            .map(|w| {
                let dec = steinberg_decompose(self.prime(), w)?;
                let r = self.pipeline.h2_decomposition(&dec)?;
                let c = self.classifier.classify_decomposition(&dec);
                Ok((r.total != c.dim).then(|| Discrepancy {
                    weight: *w,
                    decomposition: dec.to_string(),
                    h2_pipeline: r.total,
                    h2_theorem: c.dim,
                    pattern_ids: pattern_ids(&c.matches),
                    matches: c.matches,
                    trace: r.trace,
                }))
            })
            .collect::<Result<_>>()?;
        let checked = results.len();
        let discrepancies: Vec<Discrepancy> = results.into_iter().flatten().collect();
        Ok(PrimeReport {
            p: self.prime(),
            checked,
            agreeing: checked - discrepancies.len(),
            discrepancies,
        })
    }
}

pub fn crosscheck(tables: &Tables, primes: &[Prime], opts: &CrosscheckOptions) -> Result<CrosscheckReport> {
    let mut ps = primes.to_vec();
    ps.sort();
    ps.dedup();
    let primes = ps
        .into_iter()
        .map(|p| Engine::new(tables, p).crosscheck(opts))
        .collect::<Result<_>>()?;
    Ok(CrosscheckReport {
        options: *opts,
        errata: tables.errata == crate::tables::Errata::On,
        primes,
    })
}

/// Pretty JSON with a trailing newline; stable across runs.
pub fn crosscheck_json(report: &CrosscheckReport) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report serializes");
    s.push('\n');
    s
}
