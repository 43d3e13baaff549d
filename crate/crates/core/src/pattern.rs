//! Symbolic weight patterns parametrised by `p` and a free twist index.
//!
//! This is the one grammar shared by the G1-cohomology table, the Ext^1
//! tables, the errata overlay and the classification families. See
//! `data/GRAMMAR.md` for the file-level syntax.
//!
//! ```text
//! coord      := INT | "p" | "p-" INT | "p+" INT
//! weight     := coord "," coord
//! chain      := weight ( "|" weight )*
//! module     := "0" | chain ( "+" chain )*
//! twist      := INT | VAR | VAR "+" INT          VAR := "i" | "r"
//! factor     := "(" weight ")" [ "^[" twist "]" ]
//! tensor     := factor ( "*" factor )*
//! ```
//!
//! Every coordinate is read mod p on evaluation, so at `p = 2` the token
//! `p-3` denotes `1`. Factors that read as `(0,0)` are trivial and drop out.

use std::fmt;

use crate::module_expr::{Chain, ModuleExpr};
use crate::weight_lattice::{Decomposition, Prime, Weight};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CoordExpr {
    uses_p: bool,
    offset: i64,
}

impl CoordExpr {
    pub fn literal(n: i64) -> Self {
        CoordExpr { uses_p: false, offset: n }
    }

    pub fn p_minus(k: i64) -> Self {
        CoordExpr { uses_p: true, offset: -k }
    }

    /// Value read mod p.
    pub fn eval(&self, p: Prime) -> i64 {
        let raw = if self.uses_p { p.as_i64() + self.offset } else { self.offset };
        raw.rem_euclid(p.as_i64())
    }

    fn parse(s: &str) -> Result<Self, String> {
        if let Some(rest) = s.strip_prefix('p') {
            if rest.is_empty() {
                return Ok(CoordExpr { uses_p: true, offset: 0 });
            }
            let (sign, digits) = rest.split_at(1);
            let k = parse_uint(digits)? as i64;
            match sign {
                "-" => Ok(CoordExpr::p_minus(k)),
                "+" => Ok(CoordExpr { uses_p: true, offset: k }),
                _ => Err(format!("bad coordinate `{s}`")),
            }
        } else {
            Ok(CoordExpr::literal(parse_uint(s)? as i64))
        }
    }
}

impl fmt::Display for CoordExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.uses_p, self.offset) {
            (false, n) => write!(f, "{n}"),
            (true, 0) => write!(f, "p"),
            (true, n) if n < 0 => write!(f, "p-{}", -n),
            (true, n) => write!(f, "p+{n}"),
        }
    }
}

fn parse_uint(s: &str) -> Result<u64, String> {
    if s.is_empty() || !s.bytes().all(|c| c.is_ascii_digit()) {
        return Err(format!("expected an unsigned integer, found `{s}`"));
    }
    s.parse().map_err(|e| format!("`{s}`: {e}"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct WeightPattern {
    pub a: CoordExpr,
    pub b: CoordExpr,
}

impl WeightPattern {
    pub fn parse(s: &str) -> Result<Self, String> {
        let (a, b) = s
            .split_once(',')
            .ok_or_else(|| format!("expected `a,b`, found `{s}`"))?;
        Ok(WeightPattern {
            a: CoordExpr::parse(a)?,
            b: CoordExpr::parse(b)?,
        })
    }

    pub fn eval(&self, p: Prime) -> Weight {
        Weight::new(self.a.eval(p), self.b.eval(p))
    }

    pub fn dual(&self) -> Self {
        WeightPattern { a: self.b, b: self.a }
    }
}

impl fmt::Display for WeightPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.a, self.b)
    }
}

/// A module value such as `1,1|0,0+1,0+0,1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ModulePattern {
    chains: Vec<Vec<WeightPattern>>,
}

impl ModulePattern {
    pub fn parse(s: &str) -> Result<Self, String> {
        if s == "0" {
            return Ok(ModulePattern { chains: vec![] });
        }
        let chains = s
            .split('+')
            .map(|c| c.split('|').map(WeightPattern::parse).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        Ok(ModulePattern { chains })
    }

    pub fn eval(&self, p: Prime) -> ModuleExpr {
        ModuleExpr::from_chains(
            self.chains
                .iter()
                .map(|c| Chain::new(c.iter().map(|w| w.eval(p)).collect()).expect("parser rejects empty chains"))
                .collect(),
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TwistExpr {
    Fixed(usize),
    /// The free index plus a constant offset.
    Var(usize),
}

impl TwistExpr {
    pub fn at(&self, v: usize) -> usize {
        match *self {
            TwistExpr::Fixed(n) => n,
            TwistExpr::Var(k) => v + k,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FactorPattern {
    pub weight: WeightPattern,
    pub twist: TwistExpr,
}

/// A tensor product of twisted restricted factors, e.g.
/// `(p-2,1)*(0,1)^[1]*(p-2,p-2)^[r+1]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TensorPattern {
    factors: Vec<FactorPattern>,
    var: Option<char>,
}

impl TensorPattern {
    pub fn parse(s: &str) -> Result<Self, String> {
        if s.is_empty() {
            return Err("empty tensor pattern".into());
        }
        let mut var = None;
        let mut factors = Vec::new();
        for part in s.split('*') {
            let body = part
                .strip_prefix('(')
                .ok_or_else(|| format!("factor `{part}` must start with `(`"))?;
            let (weight, after) = body
                .split_once(')')
                .ok_or_else(|| format!("factor `{part}` is missing `)`"))?;
            let weight = WeightPattern::parse(weight)?;
            let twist = if after.is_empty() {
                TwistExpr::Fixed(0)
            } else {
                let inner = after
                    .strip_prefix("^[")
                    .and_then(|t| t.strip_suffix(']'))
                    .ok_or_else(|| format!("bad twist suffix `{after}`"))?;
                parse_twist(inner, &mut var)?
            };
            factors.push(FactorPattern { weight, twist });
        }
        Ok(TensorPattern { factors, var })
    }

    pub fn factors(&self) -> &[FactorPattern] {
        &self.factors
    }

    pub fn var(&self) -> Option<char> {
        self.var
    }

    pub fn dual(&self) -> Self {
        TensorPattern {
            factors: self
                .factors
                .iter()
                .map(|f| FactorPattern {
                    weight: f.weight.dual(),
                    twist: f.twist,
                })
                .collect(),
            var: self.var,
        }
    }

    /// Evaluates every coordinate at `p`; trivial factors are dropped and
    /// their indices recorded.
    pub fn resolve(&self, p: Prime) -> ResolvedPattern {
        let mut fixed = Vec::new();
        let mut varying = Vec::new();
        let mut collapsed = Vec::new();
        for (idx, f) in self.factors.iter().enumerate() {
            let w = f.weight.eval(p);
            if w.is_zero() {
                collapsed.push(idx);
                continue;
            }
            match f.twist {
                TwistExpr::Fixed(n) => fixed.push((n, w)),
                TwistExpr::Var(k) => varying.push((k, w)),
            }
        }
        ResolvedPattern {
            p,
            fixed,
            varying,
            has_var: self.var.is_some(),
            collapsed,
        }
    }
}

fn parse_twist(s: &str, var: &mut Option<char>) -> Result<TwistExpr, String> {
    let first = s.chars().next().ok_or("empty twist")?;
    if first.is_ascii_digit() {
        return Ok(TwistExpr::Fixed(parse_uint(s)? as usize));
    }
    if first != 'i' && first != 'r' {
        return Err(format!("unknown twist index `{first}`"));
    }
    match var {
        Some(v) if *v != first => return Err(format!("mixed twist indices `{v}` and `{first}`")),
        _ => *var = Some(first),
    }
    let rest = &s[1..];
    if rest.is_empty() {
        return Ok(TwistExpr::Var(0));
    }
    let k = rest
        .strip_prefix('+')
        .ok_or_else(|| format!("bad twist `{s}`"))?;
    Ok(TwistExpr::Var(parse_uint(k)? as usize))
}

impl fmt::Display for TensorPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let var = self.var.unwrap_or('i');
        for (i, factor) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            write!(f, "({})", factor.weight)?;
            match factor.twist {
                TwistExpr::Fixed(0) => {}
                TwistExpr::Fixed(n) => write!(f, "^[{n}]")?,
                TwistExpr::Var(0) => write!(f, "^[{var}]")?,
                TwistExpr::Var(k) => write!(f, "^[{var}+{k}]")?,
            }
        }
        Ok(())
    }
}

/// A pattern evaluated at a fixed prime, with trivial factors removed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResolvedPattern {
    p: Prime,
    fixed: Vec<(usize, Weight)>,
    varying: Vec<(usize, Weight)>,
    has_var: bool,
    collapsed: Vec<usize>,
}

impl ResolvedPattern {
    /// Indices of factors that read as `(0,0)` at this prime.
    pub fn collapsed(&self) -> &[usize] {
        &self.collapsed
    }

    /// Whether the free index still affects the instance.
    pub fn depends_on_var(&self) -> bool {
        !self.varying.is_empty()
    }

    pub fn collapses_to_zero(&self) -> bool {
        self.fixed.is_empty() && self.varying.is_empty()
    }

    /// Sorted non-zero digits for index value `v`; `None` when two factors
    /// land on the same position.
    pub fn instance(&self, v: usize) -> Option<Vec<(usize, Weight)>> {
        let mut digits: Vec<(usize, Weight)> = self
            .fixed
            .iter()
            .copied()
            .chain(self.varying.iter().map(|&(k, w)| (v + k, w)))
            .collect();
        digits.sort();
        if digits.windows(2).any(|pair| pair[0].0 == pair[1].0) {
            return None;
        }
        Some(digits)
    }

    pub fn decomposition(&self, v: usize) -> Option<Decomposition> {
        Decomposition::from_positions(self.p, self.instance(v)?).ok()
    }

    fn candidates(&self, min_var: usize, top: usize) -> Vec<Option<usize>> {
        if self.depends_on_var() {
            (min_var..=top.max(min_var)).map(Some).collect()
        } else {
            vec![None]
        }
    }

    /// Index values (or `None` when the index is absent or has no effect)
    /// for which the instance is exactly `target`.
    pub fn match_exact(&self, target: &Decomposition, min_var: usize) -> Vec<Option<usize>> {
        let digits: Vec<(usize, Weight)> = target.nonzero_digits().collect();
        self.candidates(min_var, target.top_position())
            .into_iter()
            .filter(|v| self.instance(v.unwrap_or(min_var)).as_deref() == Some(digits.as_slice()))
            .collect()
    }

    /// Pairs `(index, d)` with `d >= 0` such that the instance twisted by `d`
    /// is `target`.
    pub fn match_up_to_twist(&self, target: &Decomposition, min_var: usize) -> Vec<(Option<usize>, usize)> {
        let digits: Vec<(usize, Weight)> = target.nonzero_digits().collect();
        let Some(&(target_low, _)) = digits.first() else {
            return vec![];
        };
        let mut out = Vec::new();
        for v in self.candidates(min_var, target.top_position()) {
            let Some(inst) = self.instance(v.unwrap_or(min_var)) else {
                continue;
            };
            let Some(&(low, _)) = inst.first() else {
                continue;
            };
            if low > target_low {
                continue;
            }
            let d = target_low - low;
            if inst.len() == digits.len()
                && inst.iter().zip(&digits).all(|(&(i, w), &(j, u))| i + d == j && w == u)
            {
                out.push((v, d));
            }
        }
        out
    }
}
