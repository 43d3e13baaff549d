//! The Weyl group of type A2, its dot action, and linkage to the zero weight.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::scalar::Coord;
use crate::weight_lattice::{in_p_scaled_root_lattice, Prime, Weight};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeylElement {
    #[serde(rename = "e")]
    Identity,
    SAlpha,
    SBeta,
    /// `s_β ∘ s_α`
    SBetaAlpha,
    /// `s_α ∘ s_β`
    SAlphaBeta,
    W0,
}

impl WeylElement {
    pub const ALL: [WeylElement; 6] = [
        WeylElement::Identity,
        WeylElement::SAlpha,
        WeylElement::SBeta,
        WeylElement::SBetaAlpha,
        WeylElement::SAlphaBeta,
        WeylElement::W0,
    ];

    pub fn length(self) -> u8 {
        match self {
            WeylElement::Identity => 0,
            WeylElement::SAlpha | WeylElement::SBeta => 1,
            WeylElement::SBetaAlpha | WeylElement::SAlphaBeta => 2,
            WeylElement::W0 => 3,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            WeylElement::Identity => "e",
            WeylElement::SAlpha => "s_alpha",
            WeylElement::SBeta => "s_beta",
            WeylElement::SBetaAlpha => "s_beta_alpha",
            WeylElement::SAlphaBeta => "s_alpha_beta",
            WeylElement::W0 => "w0",
        }
    }

    /// Linear action on the fundamental-weight basis as an integer matrix
    /// (row-major, acting on column vectors). Built from the two simple
    /// reflections `s_α(a,b) = (-a, a+b)` and `s_β(a,b) = (a+b, -b)`.
    pub fn matrix(self) -> [[i64; 2]; 2] {
        const ID: [[i64; 2]; 2] = [[1, 0], [0, 1]];
        const SA: [[i64; 2]; 2] = [[-1, 0], [1, 1]];
        const SB: [[i64; 2]; 2] = [[1, 1], [0, -1]];
        fn mul(x: [[i64; 2]; 2], y: [[i64; 2]; 2]) -> [[i64; 2]; 2] {
            let mut out = [[0; 2]; 2];
            for (i, row) in out.iter_mut().enumerate() {
                for (j, cell) in row.iter_mut().enumerate() {
                    *cell = x[i][0] * y[0][j] + x[i][1] * y[1][j];
                }
            }
            out
        }
        match self {
            WeylElement::Identity => ID,
            WeylElement::SAlpha => SA,
            WeylElement::SBeta => SB,
            WeylElement::SBetaAlpha => mul(SB, SA),
            WeylElement::SAlphaBeta => mul(SA, SB),
            WeylElement::W0 => mul(SA, mul(SB, SA)),
        }
    }
}

impl fmt::Display for WeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// `w·λ` from the closed forms.
///
/// The longest element gives `(-b-2, -a-2)`: `w0` sends `λ` to `-λ*`.
pub fn dot_action<T: Coord>(w: WeylElement, lam: &Weight<T>) -> Weight<T> {
    let c = |n: i64| T::from_i64(n).unwrap();
    let (a, b) = (lam.a.clone(), lam.b.clone());
    let (x, y) = match w {
        WeylElement::Identity => (a, b),
        WeylElement::SAlpha => (c(-2) - a.clone(), a + b + c(1)),
        WeylElement::SBeta => (a + b.clone() + c(1), c(-2) - b),
        WeylElement::SBetaAlpha => (b.clone(), c(-3) - a - b),
        WeylElement::SAlphaBeta => (c(-3) - a.clone() - b, a),
        WeylElement::W0 => (c(-2) - b, c(-2) - a),
    };
    Weight::from_coords(x, y)
}

/// `w(λ+ρ) − ρ` with `ρ = (1,1)`, evaluated through [`WeylElement::matrix`].
pub fn dot_action_by_matrix(w: WeylElement, lam: &Weight) -> Weight {
    let m = w.matrix();
    let (a, b) = (lam.a + 1, lam.b + 1);
    Weight::new(m[0][0] * a + m[0][1] * b - 1, m[1][0] * a + m[1][1] * b - 1)
}

/// Weyl elements `w` with `lam ∈ w·0 + pZR`.
pub fn g_linkage_witnesses<T: Coord>(p: Prime, lam: &Weight<T>) -> Vec<WeylElement> {
    let zero = Weight::from_coords(T::zero(), T::zero());
    WeylElement::ALL
        .into_iter()
        .filter(|&w| in_p_scaled_root_lattice(p, &lam.sub(&dot_action(w, &zero))))
        .collect()
}

/// Whether `lam` lies in the affine dot orbit `W_p·0`.
pub fn g_linked_to_zero<T: Coord>(p: Prime, lam: &Weight<T>) -> bool {
    !g_linkage_witnesses(p, lam).is_empty()
}

/// Weyl elements `w` with `lam0 ≡ w·0 (mod p)` componentwise.
pub fn g1_linkage_witnesses(p: Prime, lam0: &Weight) -> Result<Vec<WeylElement>> {
    lam0.ensure_restricted(p)?;
    Ok(WeylElement::ALL
        .into_iter()
        .filter(|&w| dot_action(w, &Weight::ZERO).reduce_mod(p) == *lam0)
        .collect())
}

/// Whether a restricted weight lies in `W_p·0 + pX(T)`.
pub fn g1_linked_restricted(p: Prime, lam0: &Weight) -> Result<bool> {
    Ok(!g1_linkage_witnesses(p, lam0)?.is_empty())
}

/// The restricted weights G1-linked to zero:
/// `(0,0), (p-2,1), (1,p-2), (p-3,0), (0,p-3), (p-2,p-2)` read mod p.
pub fn enumerate_g1_linked(p: Prime) -> BTreeSet<Weight> {
    let q = p.as_i64();
    [
        (0, 0),
        (q - 2, 1),
        (1, q - 2),
        (q - 3, 0),
        (0, q - 3),
        (q - 2, q - 2),
    ]
    .into_iter()
    .map(|(a, b)| Weight::new(a, b).reduce_mod(p))
    .collect()
}
