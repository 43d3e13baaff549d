//! Formal G-module structures: direct sums of uniserial chains of simples.
//!
//! A chain lists its composition factors socle first, so `[(1,1), (0,0)]`
//! is the uniserial module with socle `L(1,1)` and head `L(0,0)`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::weight_lattice::{dual, Prime, Weight};
use crate::weyl_linkage::enumerate_g1_linked;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<Weight>", into = "Vec<Weight>")]
pub struct Chain(Vec<Weight>);

impl Chain {
    pub fn new(layers: Vec<Weight>) -> Result<Self> {
        if layers.is_empty() {
            return Err(Error::TableDefect("empty uniserial chain".into()));
        }
        Ok(Chain(layers))
    }

    pub fn simple(w: Weight) -> Self {
        Chain(vec![w])
    }

    pub fn layers(&self) -> &[Weight] {
        &self.0
    }

    pub fn socle(&self) -> Weight {
        self.0[0]
    }

    pub fn head(&self) -> Weight {
        *self.0.last().unwrap()
    }

    pub fn is_simple(&self) -> bool {
        self.0.len() == 1
    }

    pub fn dualize(&self) -> Chain {
        Chain(self.0.iter().rev().map(dual).collect())
    }
}

impl TryFrom<Vec<Weight>> for Chain {
    type Error = Error;
    fn try_from(v: Vec<Weight>) -> Result<Self> {
        Chain::new(v)
    }
}

impl From<Chain> for Vec<Weight> {
    fn from(c: Chain) -> Self {
        c.0
    }
}

/// A finite direct sum of chains. Summands are kept sorted, so equal
/// modules compare equal regardless of construction order.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ModuleExpr {
    summands: Vec<Chain>,
}

impl ModuleExpr {
    pub fn zero() -> Self {
        ModuleExpr::default()
    }

    pub fn simple(w: Weight) -> Self {
        ModuleExpr {
            summands: vec![Chain::simple(w)],
        }
    }

    pub fn from_chains(mut summands: Vec<Chain>) -> Self {
        summands.sort();
        ModuleExpr { summands }
    }

    pub fn summands(&self) -> &[Chain] {
        &self.summands
    }

    pub fn is_zero(&self) -> bool {
        self.summands.is_empty()
    }

    pub fn is_semisimple(&self) -> bool {
        self.summands.iter().all(Chain::is_simple)
    }

    pub fn direct_sum(&self, other: &ModuleExpr) -> ModuleExpr {
        let mut all = self.summands.clone();
        all.extend(other.summands.iter().cloned());
        ModuleExpr::from_chains(all)
    }

    /// Reverses every chain and dualises every label.
    pub fn dualize(&self) -> ModuleExpr {
        ModuleExpr::from_chains(self.summands.iter().map(Chain::dualize).collect())
    }

    /// Multiset of heads, sorted.
    pub fn head(&self) -> Vec<Weight> {
        let mut h: Vec<Weight> = self.summands.iter().map(Chain::head).collect();
        h.sort();
        h
    }

    /// Multiset of socles, sorted.
    pub fn socle(&self) -> Vec<Weight> {
        let mut s: Vec<Weight> = self.summands.iter().map(Chain::socle).collect();
        s.sort();
        s
    }

    /// `dim Hom_G(M, L(s))`: the multiplicity of `s` in the head.
    pub fn hom_to_simple(&self, s: &Weight) -> usize {
        self.summands.iter().filter(|c| c.head() == *s).count()
    }
}

impl fmt::Display for ModuleExpr {
    /// `0` for the zero module, else chains joined by ` + ` with layers
    /// joined by `|` socle first.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, c) in self.summands.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            for (j, l) in c.layers().iter().enumerate() {
                if j > 0 {
                    write!(f, "|")?;
                }
                write!(f, "{l}")?;
            }
        }
        Ok(())
    }
}

/// Structure of the induced module `H^0(λ)` for a restricted weight that is
/// G1-linked to zero: simple, except `H^0(p-2,p-2)` for odd p, which is
/// uniserial with socle `(p-2,p-2)` and head `(0,0)`.
pub fn induced_structure(p: Prime, lam: &Weight) -> Result<ModuleExpr> {
    lam.ensure_restricted(p)?;
    if !enumerate_g1_linked(p).contains(lam) {
        return Err(Error::NotLinked(lam.to_string()));
    }
    let q = p.as_i64();
    if p.get() > 2 && *lam == Weight::new(q - 2, q - 2) {
        Ok(ModuleExpr::from_chains(vec![Chain(vec![*lam, Weight::ZERO])]))
    } else {
        Ok(ModuleExpr::simple(*lam))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w(a: i64, b: i64) -> Weight {
        Weight::new(a, b)
    }

    fn p(n: u32) -> Prime {
        Prime::new(n).unwrap()
    }

    fn chain(v: &[(i64, i64)]) -> Chain {
        Chain::new(v.iter().map(|&(a, b)| w(a, b)).collect()).unwrap()
    }

    /// The degree-two G1 value at p = 3: `H^0(1,1) + (1,0) + (0,1)`.
    fn p3_h2_value() -> ModuleExpr {
        ModuleExpr::from_chains(vec![chain(&[(1, 1), (0, 0)]), chain(&[(1, 0)]), chain(&[(0, 1)])])
    }

    #[test]
    fn dualize_examples() {
        let m = ModuleExpr::from_chains(vec![chain(&[(1, 1), (0, 0)])]);
        assert_eq!(m.dualize(), ModuleExpr::from_chains(vec![chain(&[(0, 0), (1, 1)])]));
        assert_eq!(ModuleExpr::simple(w(1, 0)).dualize(), ModuleExpr::simple(w(0, 1)));
        assert_eq!(ModuleExpr::zero().dualize(), ModuleExpr::zero());
    }

    #[test]
    fn head_examples() {
        assert_eq!(p3_h2_value().dualize().head(), vec![w(0, 1), w(1, 0), w(1, 1)]);
        let m = ModuleExpr::simple(w(1, 0)).direct_sum(&ModuleExpr::simple(w(1, 0)));
        assert_eq!(m.head(), vec![w(1, 0), w(1, 0)]);
        assert!(ModuleExpr::zero().head().is_empty());
    }

    #[test]
    fn hom_examples() {
        assert_eq!(p3_h2_value().dualize().hom_to_simple(&w(0, 1)), 1);
        let h0 = induced_structure(p(3), &w(1, 1)).unwrap();
        assert_eq!(h0.dualize().hom_to_simple(&w(0, 0)), 0);
        assert_eq!(h0.hom_to_simple(&w(0, 0)), 1);
        assert_eq!(ModuleExpr::zero().hom_to_simple(&w(0, 0)), 0);
    }

    #[test]
    fn induced_examples() {
        assert_eq!(induced_structure(p(5), &w(2, 0)).unwrap(), ModuleExpr::simple(w(2, 0)));
        assert_eq!(
            induced_structure(p(3), &w(1, 1)).unwrap(),
            ModuleExpr::from_chains(vec![chain(&[(1, 1), (0, 0)])])
        );
        assert_eq!(induced_structure(p(2), &w(0, 0)).unwrap(), ModuleExpr::simple(w(0, 0)));
        assert_eq!(
            induced_structure(p(5), &w(3, 3)).unwrap(),
            ModuleExpr::from_chains(vec![chain(&[(3, 3), (0, 0)])])
        );
        assert!(matches!(induced_structure(p(5), &w(1, 1)), Err(Error::NotLinked(_))));
        assert!(induced_structure(p(5), &w(5, 1)).is_err());
    }

    #[test]
    fn display() {
        assert_eq!(p3_h2_value().to_string(), "(0,1) + (1,0) + (1,1)|(0,0)");
        assert_eq!(ModuleExpr::zero().to_string(), "0");
    }

    #[test]
    fn empty_chain_rejected() {
        assert!(Chain::new(vec![]).is_err());
    }

    fn arb_module() -> impl Strategy<Value = ModuleExpr> {
        let weight = (0i64..6, 0i64..6).prop_map(|(a, b)| w(a, b));
        let chain = prop::collection::vec(weight, 1..4).prop_map(|v| Chain::new(v).unwrap());
        prop::collection::vec(chain, 0..5).prop_map(ModuleExpr::from_chains)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn dualize_is_involution(m in arb_module()) {
            prop_assert_eq!(m.dualize().dualize(), m);
        }

        #[test]
        fn head_of_dual_is_dual_socle(m in arb_module()) {
            let mut expected: Vec<Weight> = m.socle().iter().map(dual).collect();
            expected.sort();
            prop_assert_eq!(m.dualize().head(), expected);
        }

        #[test]
        fn hom_bounded_by_summand_count(m in arb_module(), a in 0i64..6, b in 0i64..6) {
            prop_assert!(m.hom_to_simple(&w(a, b)) <= m.summands().len());
        }
    }
}
