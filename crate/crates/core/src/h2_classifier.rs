//! Classification of the simple modules with non-zero `H^2`.
//!
//! `H^2(G, V) = K` exactly when `V = L(a,b)^[d]` with `(a,b)` or `(b,a)` one
//! of ten families below (for some `r > 0`, coordinates read mod p), and
//! `H^2(G, V) = 0` otherwise.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::pattern::{ResolvedPattern, TensorPattern};
use crate::scalar::Coord;
use crate::weight_lattice::{steinberg_decompose, Decomposition, Prime, Weight};

pub const FAMILIES: [&str; 10] = [
    "(1,1)^[1]",
    "(p-3,0)*(0,1)^[1]",
    "(p-2,1)*(p-3,p-2)^[1]",
    "(p-2,1)*(2,p-3)^[1]*(1,0)^[2]",
    "(p-2,1)*(p-2,2)^[1]*(0,1)^[2]",
    "(p-2,1)*(0,1)^[1]*(p-2,p-2)^[r+1]",
    "(p-2,1)*(0,1)^[1]*(p-2,1)^[r+1]*(0,1)^[r+2]",
    "(p-2,1)*(0,1)^[1]*(1,p-2)^[r+1]*(1,0)^[r+2]",
    "(p-2,p-2)*(p-2,p-2)^[r]",
    "(p-2,p-2)*(1,p-2)^[r]*(1,0)^[r+1]",
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TheoremPattern {
    pub id: u8,
    pub pattern: TensorPattern,
}

pub fn theorem_patterns() -> Vec<TheoremPattern> {
    FAMILIES
        .iter()
        .enumerate()
        .map(|(i, s)| TheoremPattern {
            id: i as u8 + 1,
            pattern: TensorPattern::parse(s).expect("family patterns parse"),
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PatternMatch {
    pub id: u8,
    /// `None` for families without `r`, or whose `r`-dependent factors all
    /// read as trivial at this prime.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<usize>,
    pub d: usize,
    pub dual: bool,
}

impl PatternMatch {
    /// Short label such as `9` or `2'` (primed for the dual variant).
    pub fn label(&self) -> String {
        if self.dual {
            format!("{}'", self.id)
        } else {
            self.id.to_string()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub dim: u32,
    pub matches: Vec<PatternMatch>,
}

/// One family instantiated at a prime and a value of `r`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatternInstance {
    pub id: u8,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<usize>,
    pub dual: bool,
    /// `None` when every factor reads as trivial, i.e. the zero weight.
    pub decomposition: Option<Decomposition>,
    /// Indices (in the family as written) of factors that read as `(0,0)`.
    pub collapsed: Vec<usize>,
}

#[derive(Debug, Clone)]
struct Variant {
    id: u8,
    dual: bool,
    resolved: ResolvedPattern,
}

/// The ten families resolved at one prime, in both dual variants.
#[derive(Debug, Clone)]
pub struct Classifier {
    p: Prime,
    variants: Vec<Variant>,
}

impl Classifier {
    pub fn new(p: Prime) -> Self {
        let variants = theorem_patterns()
            .into_iter()
            .flat_map(|tp| {
                [(false, tp.pattern.clone()), (true, tp.pattern.dual())]
                    .into_iter()
                    .map(move |(dual, pat)| Variant {
                        id: tp.id,
                        dual,
                        resolved: pat.resolve(p),
                    })
            })
            .collect();
        Classifier { p, variants }
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn classify<T: Coord>(&self, w: &Weight<T>) -> Result<Classification> {
        let dec = steinberg_decompose(self.p, w)?;
        Ok(self.classify_decomposition(&dec))
    }

    /// All `(family, r, d, dual)` whose instance twisted by `d` is `dec`.
    pub fn classify_decomposition(&self, dec: &Decomposition) -> Classification {
        let mut matches: Vec<PatternMatch> = self
            .variants
            .iter()
            .flat_map(|v| {
                v.resolved
                    .match_up_to_twist(dec, 1)
                    .into_iter()
                    .map(|(r, d)| PatternMatch {
                        id: v.id,
                        r,
                        d,
                        dual: v.dual,
                    })
            })
            .collect();
        matches.sort();
        matches.dedup();
        Classification {
            dim: !matches.is_empty() as u32,
            matches,
        }
    }

    /// Every family for `r = 1..=max_r` (once if `r` is absent or has no
    /// effect), both dual variants.
    pub fn instantiate_patterns(&self, max_r: usize) -> Vec<PatternInstance> {
        let mut out = Vec::new();
        for v in &self.variants {
            let rs: Vec<Option<usize>> = if v.resolved.depends_on_var() {
                (1..=max_r).map(Some).collect()
            } else {
                vec![None]
            };
            for r in rs {
                let decomposition = if v.resolved.collapses_to_zero() {
                    None
                } else {
                    v.resolved.decomposition(r.unwrap_or(1))
                };
                out.push(PatternInstance {
                    id: v.id,
                    r,
                    dual: v.dual,
                    decomposition,
                    collapsed: v.resolved.collapsed().to_vec(),
                });
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weyl_linkage::g_linked_to_zero;

    fn p(n: u32) -> Prime {
        Prime::new(n).unwrap()
    }

    fn w(a: i64, b: i64) -> Weight {
        Weight::new(a, b)
    }

    fn classify(q: u32, a: i64, b: i64) -> Classification {
        Classifier::new(p(q)).classify(&w(a, b)).unwrap()
    }

    #[test]
    fn classify_examples() {
        let c = classify(5, 5, 5);
        assert_eq!(c.dim, 1);
        assert!(c.matches.contains(&PatternMatch { id: 1, r: None, d: 0, dual: false }));

        let c = classify(5, 2, 5);
        assert!(c.matches.iter().any(|m| m.id == 2 && m.d == 0 && !m.dual));

        let c = classify(5, 3 * 26, 3 * 26);
        assert!(c.matches.contains(&PatternMatch { id: 9, r: Some(2), d: 0, dual: false }));

        assert_eq!(classify(5, 1, 1).dim, 0);

        // (0,1)^[1] at p = 3 is family 2 with its first factor collapsed, read dually.
        let c = classify(3, 0, 3);
        assert_eq!(c.dim, 1);
        assert!(c.matches.iter().any(|m| m.id == 2 && m.d == 0 && !m.dual));
        let c = classify(3, 3, 0);
        assert!(c.matches.iter().any(|m| m.id == 2 && m.dual));
    }

    #[test]
    fn twists_are_absorbed_but_never_removed() {
        assert!(classify(5, 125, 125).matches.contains(&PatternMatch { id: 1, r: None, d: 2, dual: false }));
        assert_eq!(classify(5, 1, 1).dim, 0);
        assert_eq!(classify(3, 0, 1).dim, 0);
    }

    #[test]
    fn zero_weight_never_matches() {
        for q in [2, 3, 5] {
            assert_eq!(classify(q, 0, 0).dim, 0);
        }
    }

    #[test]
    fn instantiation_examples() {
        let inst = Classifier::new(p(5)).instantiate_patterns(1);
        assert_eq!(inst.len(), 20);
        let six = inst.iter().find(|i| i.id == 6 && !i.dual).unwrap();
        assert_eq!(six.decomposition.as_ref().unwrap().to_string(), "(3,1)*(0,1)^[1]*(3,3)^[2]");

        let inst = Classifier::new(p(2)).instantiate_patterns(1);
        let nine = inst.iter().find(|i| i.id == 9 && !i.dual).unwrap();
        assert!(nine.decomposition.is_none());
        assert_eq!(nine.collapsed, vec![0, 1]);

        let inst = Classifier::new(p(3)).instantiate_patterns(2);
        let one = inst.iter().find(|i| i.id == 1 && !i.dual).unwrap();
        assert_eq!(one.decomposition.as_ref().unwrap().to_string(), "(1,1)^[1]");
        assert_eq!(one.r, None);
    }

    #[test]
    fn instances_classify_as_themselves() {
        for q in [5u32, 7] {
            let cl = Classifier::new(p(q));
            for inst in cl.instantiate_patterns(4) {
                let dec = inst.decomposition.clone().unwrap();
                for d in 0..=2 {
                    let c = cl.classify_decomposition(&dec.twisted(d));
                    assert!(
                        c.matches.contains(&PatternMatch { id: inst.id, r: inst.r, d, dual: inst.dual }),
                        "p={q} {inst:?} d={d}: {c:?}"
                    );
                }
            }
        }
    }

    #[test]
    fn instances_are_linked_to_zero() {
        for q in [3u32, 5, 7, 11] {
            for inst in Classifier::new(p(q)).instantiate_patterns(3) {
                if let Some(dec) = &inst.decomposition {
                    let wt: Weight = dec.recompose().unwrap();
                    assert!(g_linked_to_zero(p(q), &wt), "p={q} {inst:?}");
                }
            }
        }
    }

    #[test]
    fn p2_reading_leaves_the_root_lattice() {
        // p-3 read mod 2 is 1, which moves families 2 to 5 off the coset of 0.
        let mut off: Vec<(u8, bool)> = Classifier::new(p(2))
            .instantiate_patterns(3)
            .into_iter()
            .filter_map(|inst| {
                let wt: Weight = inst.decomposition.as_ref()?.recompose().unwrap();
                (!g_linked_to_zero(p(2), &wt)).then_some((inst.id, inst.dual))
            })
            .collect();
        off.dedup();
        let expected: Vec<(u8, bool)> = (2..=5).flat_map(|i| [(i, false), (i, true)]).collect();
        assert_eq!(off, expected);
    }

    #[test]
    fn classify_is_dual_invariant() {
        for q in [3u32, 5] {
            let bound = (q as i64).pow(3);
            let cl = Classifier::new(p(q));
            for a in 0..bound {
                for b in 0..bound {
                    assert_eq!(cl.classify(&w(a, b)).unwrap().dim, cl.classify(&w(b, a)).unwrap().dim);
                }
            }
        }
    }
}
