use std::fmt;

use super::matrix::IntMatrix;
use super::snf::{row_hnf, snf_with, solve, Track};
use crate::scalar::Scalar;

/// A sublattice of ℤⁿ, stored as a canonical (HNF) basis, one generator per
/// row.  Construction normalizes, so equality is structural.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Sublattice<S> {
    ambient: usize,
    basis: IntMatrix<S>,
}

impl<S: Scalar> Sublattice<S> {
    pub fn from_generators(ambient: usize, gens: IntMatrix<S>) -> Self {
        assert_eq!(gens.cols(), ambient, "generator length must match ambient rank");
        Sublattice { ambient, basis: row_hnf(&gens) }
    }

    pub fn from_rows(ambient: usize, rows: Vec<Vec<S>>) -> Self {
        let gens = if rows.is_empty() {
            IntMatrix::zeros(0, ambient)
        } else {
            IntMatrix::from_rows(rows)
        };
        Self::from_generators(ambient, gens)
    }

    pub fn zero(ambient: usize) -> Self {
        Sublattice { ambient, basis: IntMatrix::zeros(0, ambient) }
    }

    pub fn full(ambient: usize) -> Self {
        Sublattice { ambient, basis: IntMatrix::identity(ambient) }
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient
    }

    pub fn rank(&self) -> usize {
        self.basis.rows()
    }

    /// Canonical basis, one generator per row.
    pub fn basis(&self) -> &IntMatrix<S> {
        &self.basis
    }

    pub fn is_zero(&self) -> bool {
        self.rank() == 0
    }

    pub fn is_full(&self) -> bool {
        self.basis.is_identity()
    }

    pub fn contains(&self, v: &[S]) -> bool {
        assert_eq!(v.len(), self.ambient);
        // v ∈ rowspan(B)  ⟺  Bᵗ·x = v solvable.
        solve(&self.basis.transpose(), v).is_some()
    }

    pub fn contains_lattice(&self, other: &Self) -> bool {
        assert_eq!(self.ambient, other.ambient);
        other.basis.iter_rows().all(|r| self.contains(r))
    }

    pub fn sum(&self, other: &Self) -> Self {
        assert_eq!(self.ambient, other.ambient);
        Self::from_generators(self.ambient, self.basis.vstack(&other.basis))
    }

    /// (L ⊗ ℚ) ∩ ℤⁿ — the smallest saturated sublattice containing L.
    pub fn saturate(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let f = snf_with(&self.basis, Track::VInvOnly);
        let v_inv = f.v_inv.unwrap();
        let idx: Vec<usize> = (0..f.rank).collect();
        Self::from_generators(self.ambient, v_inv.select_rows(&idx))
    }

    pub fn is_saturated(&self) -> bool {
        self == &self.saturate()
    }

    /// Expresses `v` in the canonical basis; `None` when `v` is outside.
    pub fn coordinates(&self, v: &[S]) -> Option<Vec<S>> {
        solve(&self.basis.transpose(), v)
    }
}

impl<S: Scalar> fmt::Debug for Sublattice<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Sublattice(ambient={}, basis={:?})", self.ambient, self.basis)
    }
}

/// Invariant-factor presentation of a finitely generated abelian group:
/// free rank plus the torsion chain d₁ | d₂ | …, each entry > 1.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct AbelianInvariants<S> {
    pub free_rank: usize,
    pub torsion: Vec<S>,
}

impl<S: Scalar> AbelianInvariants<S> {
    pub fn trivial() -> Self {
        AbelianInvariants { free_rank: 0, torsion: Vec::new() }
    }

    pub fn free(rank: usize) -> Self {
        AbelianInvariants { free_rank: rank, torsion: Vec::new() }
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    /// Order of the torsion part.
    pub fn torsion_order(&self) -> S {
        self.torsion.iter().fold(S::one(), |acc, d| acc * d.clone())
    }

    /// Checks the divisibility chain and that every factor exceeds 1.
    pub fn is_normalized(&self) -> bool {
        self.torsion.iter().all(|d| d > &S::one())
            && self.torsion.windows(2).all(|w| (w[1].clone() % w[0].clone()).is_zero())
    }
}

impl<S: Scalar> fmt::Debug for AbelianInvariants<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl<S: Scalar> fmt::Display for AbelianInvariants<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        if self.free_rank > 0 {
            parts.push(if self.free_rank == 1 {
                "Z".to_string()
            } else {
                format!("Z^{}", self.free_rank)
            });
        }
        for d in &self.torsion {
            parts.push(format!("Z/{}", d));
        }
        write!(f, "{}", parts.join(" + "))
    }
}

/// Invariant factors of ℤⁿ / L.
pub fn quotient_invariants<S: Scalar>(ambient: usize, l: &Sublattice<S>) -> AbelianInvariants<S> {
    assert_eq!(l.ambient_rank(), ambient);
    let f = snf_with(l.basis(), Track::None);
    let torsion: Vec<S> =
        f.diagonal().into_iter().take(f.rank).filter(|d| !d.is_one()).collect();
    AbelianInvariants { free_rank: ambient - f.rank, torsion }
}

/// For a saturated L ⊆ ℤⁿ of rank k, returns `(proj, section)` with
/// `proj: ℤⁿ → ℤ^(n−k)` surjective with kernel exactly L and
/// `proj · section = id`.  Both are matrices in the column convention.
pub fn quotient_map<S: Scalar>(l: &Sublattice<S>) -> (IntMatrix<S>, IntMatrix<S>) {
    let n = l.ambient_rank();
    let k = l.rank();
    // Columns of Bᵗ span L as column vectors.
    let f = snf_with(&l.basis().transpose(), Track::All);
    assert_eq!(f.rank, k);
    assert!(
        f.d.iter_rows().enumerate().all(|(i, r)| i >= k || r[i].is_one()),
        "quotient_map requires a saturated sublattice"
    );
    let u = f.u.unwrap();
    let u_inv = f.u_inv.unwrap();
    let idx: Vec<usize> = (k..n).collect();
    let proj = u.select_rows(&idx);
    let section = u_inv.select_cols(&idx);
    (proj, section)
}
