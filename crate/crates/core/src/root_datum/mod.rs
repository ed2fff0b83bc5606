//! Split root data and their operations.
//!
//! A root datum is a quadruple (M, M∨, R, R∨) with M ≅ ℤⁿ, M∨ its dual under
//! the standard pairing, and indexed lists of roots and coroots (index `i`
//! pairs root αᵢ with coroot αᵢ∨).  This module provides validation against
//! the axioms, reflections, Weyl groups, simple systems, Dynkin
//! classification, the six derived data (ad, sc, der, ss, rad, corad),
//! duality, morphisms, and automorphism groups.

mod auto;
mod catalog;
mod dynkin;
mod weyl;

#[cfg(test)]
pub(crate) mod tests;

pub use auto::{aut_group, factor_automorphism, isomorphisms, map_is_isomorphism, AutGroup,
    DiagramAuto, RootDatumMorphism};
pub use catalog::{standard, standard_names, CatalogForm};
pub use dynkin::{
    cartan_matrix, classify, diagram_from_cartan, Bond, DynkinComponent, DynkinDiagram,
    DynkinType, TypeKind,
};
pub use weyl::{coxeter_element, simple_system, weyl_group, WeylGroup};
pub(crate) use weyl::{matrix_closure_list, matrix_closure_set};

use crate::lattice::{kernel_basis, solve, Sublattice};
use crate::{Big, Int, Mat};

/// Errors surfaced by root-datum operations.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RootDatumError {
    #[error("automorphism group may be infinite; apply derive(ss) first")]
    NotSemisimple,
    #[error("operation requires a reduced root datum")]
    NotReduced,
    #[error("root index {0} out of range")]
    IndexOutOfRange(usize),
    #[error("simple-root index list is not a simple system")]
    BadPinning,
}

/// One failed axiom, with a witness index into the root list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AxiomViolation {
    /// ⟨αᵢ∨, αᵢ⟩ ≠ 2.
    PairingNotTwo { index: usize, value: Int },
    LengthMismatch,
    DuplicateRoot { first: usize, second: usize },
    DuplicateCoroot { first: usize, second: usize },
    /// −αᵢ is missing, or present with the wrong coroot.
    MissingNegative { index: usize },
    /// s_{αᵢ}(αⱼ) is not a root.
    ReflectionEscapes { reflection: usize, root: usize },
    /// s_{αᵢ}(αⱼ) = α_k but s_{αᵢ∨}(αⱼ∨) ≠ α_k∨.
    BijectionBroken { reflection: usize, root: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<AxiomViolation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// The seven derived-datum operations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DeriveOp {
    Ad,
    Sc,
    Der,
    Ss,
    Rad,
    Corad,
    Dual,
}

impl DeriveOp {
    pub const ALL: [DeriveOp; 7] = [
        DeriveOp::Ad,
        DeriveOp::Sc,
        DeriveOp::Der,
        DeriveOp::Ss,
        DeriveOp::Rad,
        DeriveOp::Corad,
        DeriveOp::Dual,
    ];

    pub fn name(self) -> &'static str {
        match self {
            DeriveOp::Ad => "ad",
            DeriveOp::Sc => "sc",
            DeriveOp::Der => "der",
            DeriveOp::Ss => "ss",
            DeriveOp::Rad => "rad",
            DeriveOp::Corad => "corad",
            DeriveOp::Dual => "dual",
        }
    }
}

/// Structural flags computed by lattice rank and equality tests.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Predicates {
    pub reduced: bool,
    pub semisimple: bool,
    pub adjoint: bool,
    pub simply_connected: bool,
}

/// A split root datum.  Root/coroot pairs are kept sorted (lexicographically
/// by root, then coroot), so structural equality is canonical.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RootDatum {
    rank: usize,
    roots: Vec<Vec<Int>>,
    coroots: Vec<Vec<Int>>,
}

impl std::fmt::Debug for RootDatum {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "RootDatum(rank={}, {} roots)", self.rank, self.roots.len())
    }
}

pub(crate) fn dot(a: &[Int], b: &[Int]) -> Int {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

impl RootDatum {
    /// Builds a datum from indexed root/coroot lists.  Pairs are sorted into
    /// canonical order; no axiom checking happens here (see [`Self::validate`]).
    pub fn new(rank: usize, roots: Vec<Vec<Int>>, coroots: Vec<Vec<Int>>) -> Self {
        assert_eq!(roots.len(), coroots.len(), "roots and coroots must be paired");
        for (r, c) in roots.iter().zip(&coroots) {
            assert_eq!(r.len(), rank);
            assert_eq!(c.len(), rank);
        }
        let mut pairs: Vec<(Vec<Int>, Vec<Int>)> = roots.into_iter().zip(coroots).collect();
        pairs.sort();
        pairs.dedup();
        let (roots, coroots) = pairs.into_iter().unzip();
        RootDatum { rank, roots, coroots }
    }

    /// The torus datum: rank n, no roots.
    pub fn torus(rank: usize) -> Self {
        RootDatum { rank, roots: Vec::new(), coroots: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn num_roots(&self) -> usize {
        self.roots.len()
    }

    pub fn roots(&self) -> &[Vec<Int>] {
        &self.roots
    }

    pub fn coroots(&self) -> &[Vec<Int>] {
        &self.coroots
    }

    pub fn root(&self, i: usize) -> &[Int] {
        &self.roots[i]
    }

    pub fn coroot(&self, i: usize) -> &[Int] {
        &self.coroots[i]
    }

    pub fn root_index(&self, r: &[Int]) -> Option<usize> {
        self.roots.binary_search_by(|probe| probe.as_slice().cmp(r)).ok()
    }

    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        if self.roots.len() != self.coroots.len() {
            violations.push(AxiomViolation::LengthMismatch);
            return ValidationReport { violations };
        }
        for i in 0..self.roots.len() {
            let p = dot(&self.coroots[i], &self.roots[i]);
            if p != 2 {
                violations.push(AxiomViolation::PairingNotTwo { index: i, value: p });
            }
        }
        for i in 0..self.roots.len() {
            for j in i + 1..self.roots.len() {
                if self.roots[i] == self.roots[j] {
                    violations.push(AxiomViolation::DuplicateRoot { first: i, second: j });
                }
                if self.coroots[i] == self.coroots[j] {
                    violations.push(AxiomViolation::DuplicateCoroot { first: i, second: j });
                }
            }
        }
        for i in 0..self.roots.len() {
            let neg: Vec<Int> = self.roots[i].iter().map(|v| -v).collect();
            let ok = self
                .root_index(&neg)
                .map(|j| self.coroots[j] == self.coroots[i].iter().map(|v| -v).collect::<Vec<_>>())
                .unwrap_or(false);
            if !ok {
                violations.push(AxiomViolation::MissingNegative { index: i });
            }
        }
        // Reflection checks are meaningless if the pairings are off.
        if !violations.is_empty() {
            return ValidationReport { violations };
        }
        for i in 0..self.roots.len() {
            for j in 0..self.roots.len() {
                let refl = self.reflect(i, &self.roots[j]);
                match self.root_index(&refl) {
                    None => violations
                        .push(AxiomViolation::ReflectionEscapes { reflection: i, root: j }),
                    Some(k) => {
                        let corefl = self.coreflect(i, &self.coroots[j]);
                        if corefl != self.coroots[k] {
                            violations
                                .push(AxiomViolation::BijectionBroken { reflection: i, root: j });
                        }
                    }
                }
            }
        }
        ValidationReport { violations }
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_ok()
    }

    /// s_{αᵢ}(x) = x − ⟨αᵢ∨, x⟩ αᵢ.
    pub fn reflect(&self, i: usize, x: &[Int]) -> Vec<Int> {
        let c = dot(&self.coroots[i], x);
        x.iter().zip(&self.roots[i]).map(|(v, a)| v - c * a).collect()
    }

    /// The dual reflection s_{αᵢ∨}(y) = y − ⟨y, αᵢ⟩ αᵢ∨ on M∨.
    pub fn coreflect(&self, i: usize, y: &[Int]) -> Vec<Int> {
        let c = dot(y, &self.roots[i]);
        y.iter().zip(&self.coroots[i]).map(|(v, a)| v - c * a).collect()
    }

    /// Checked variant of [`Self::reflect`].
    pub fn reflection(&self, i: usize, x: &[Int]) -> Result<Vec<Int>, RootDatumError> {
        if i >= self.roots.len() {
            return Err(RootDatumError::IndexOutOfRange(i));
        }
        assert_eq!(x.len(), self.rank);
        Ok(self.reflect(i, x))
    }

    /// Matrix of s_{αᵢ} acting on M (column convention): I − αᵢ·(αᵢ∨)ᵗ.
    pub fn reflection_matrix(&self, i: usize) -> Mat {
        Mat::from_fn(self.rank, self.rank, |r, c| {
            let delta: Int = if r == c { 1 } else { 0 };
            delta - self.roots[i][r] * self.coroots[i][c]
        })
    }

    /// Γ₀(R): the sublattice of M generated by the roots.
    pub fn root_span(&self) -> Sublattice<Int> {
        Sublattice::from_rows(self.rank, self.roots.clone())
    }

    /// Γ₀(R∨) inside M∨.
    pub fn coroot_span(&self) -> Sublattice<Int> {
        Sublattice::from_rows(self.rank, self.coroots.clone())
    }

    /// N = {x ∈ M : ⟨α∨, x⟩ = 0 for every coroot} — the coradical directions.
    pub fn coradical_sublattice(&self) -> Sublattice<Int> {
        if self.coroots.is_empty() {
            return Sublattice::full(self.rank);
        }
        let a = Mat::from_rows(self.coroots.clone()).convert::<Big>();
        Sublattice::from_generators(self.rank, kernel_basis(&a).convert::<Int>())
    }

    pub fn predicates(&self) -> Predicates {
        let reduced = self.roots.iter().all(|r| {
            let twice: Vec<Int> = r.iter().map(|v| 2 * v).collect();
            self.root_index(&twice).is_none()
        });
        Predicates {
            reduced,
            semisimple: big_saturate(&self.root_span()).rank() == self.rank,
            adjoint: self.root_span().is_full() || self.rank == 0,
            simply_connected: self.coroot_span().is_full() || self.rank == 0,
        }
    }

    pub fn is_semisimple(&self) -> bool {
        self.predicates().semisimple
    }

    /// (M∨, M, R∨, R).
    pub fn dual(&self) -> RootDatum {
        RootDatum::new(self.rank, self.coroots.clone(), self.roots.clone())
    }

    /// Induced datum for a sublattice N with Γ₀(R) ⊆ N ⊆ M.  Returns the new
    /// datum together with the inclusion N ↪ M as a matrix (column
    /// convention: new coordinates ↦ old).
    fn induced_to(&self, n: &Sublattice<Int>) -> (RootDatum, Mat) {
        let h = n.basis();
        let d = n.rank();
        let incl = h.transpose(); // rank × d: c ↦ Hᵗ·c
        let roots: Vec<Vec<Int>> = self
            .roots
            .iter()
            .map(|r| {
                n.coordinates(r)
                    .expect("every root must lie in the target sublattice of an induced datum")
            })
            .collect();
        let coroots: Vec<Vec<Int>> = self.coroots.iter().map(|c| h.mul_vec(c)).collect();
        (RootDatum::new(d, roots, coroots), incl)
    }

    pub fn derive(&self, op: DeriveOp) -> RootDatum {
        match op {
            DeriveOp::Dual => self.dual(),
            DeriveOp::Ad => self.induced_to(&self.root_span()).0,
            DeriveOp::Ss => self.induced_to(&big_saturate(&self.root_span())).0,
            DeriveOp::Der => self.dual().derive(DeriveOp::Ss).dual(),
            DeriveOp::Sc => self.dual().derive(DeriveOp::Ad).dual(),
            DeriveOp::Corad => RootDatum::torus(self.coradical_sublattice().rank()),
            DeriveOp::Rad => self.dual().derive(DeriveOp::Corad).dual(),
        }
    }

    /// The simply connected datum together with the induced map on character
    /// lattices M → M_sc (column convention): pairing with a basis of
    /// Γ₀(R∨).
    pub fn sc_with_map(&self) -> (RootDatum, Mat) {
        let dual = self.dual();
        let span = dual.root_span();
        let (ad_dual, _incl) = dual.induced_to(&span);
        (ad_dual.dual(), span.basis().clone())
    }

    /// The semisimple quotient datum together with the inclusion
    /// M_ss ↪ M of character lattices (old = incl · new).
    pub fn ss_with_inclusion(&self) -> (RootDatum, Mat) {
        let n = big_saturate(&self.root_span());
        self.induced_to(&n)
    }

    /// Public face of [`Self::induced_to`] for Γ₀(R) ⊆ N ⊆ M.
    pub fn induced_with_inclusion(&self, n: &Sublattice<Int>) -> (RootDatum, Mat) {
        self.induced_to(n)
    }

    /// The index of root i of `self` inside `self.derive(op)`'s root list,
    /// for the root-preserving operations.
    pub fn derive_root_bijection(&self, op: DeriveOp) -> Vec<usize> {
        match op {
            DeriveOp::Dual => {
                let dual = self.dual();
                (0..self.num_roots())
                    .map(|i| dual.root_index(self.coroot(i)).expect("coroot is a dual root"))
                    .collect()
            }
            DeriveOp::Ad | DeriveOp::Ss => {
                let n = if op == DeriveOp::Ad {
                    self.root_span()
                } else {
                    big_saturate(&self.root_span())
                };
                let derived = self.induced_to(&n).0;
                (0..self.num_roots())
                    .map(|i| {
                        let coords = n.coordinates(self.root(i)).expect("root lies in the span");
                        derived.root_index(&coords).expect("image is a root")
                    })
                    .collect()
            }
            DeriveOp::Sc | DeriveOp::Der => {
                let inner = if op == DeriveOp::Sc { DeriveOp::Ad } else { DeriveOp::Ss };
                let d1 = self.derive_root_bijection(DeriveOp::Dual);
                let dual = self.dual();
                let d2 = dual.derive_root_bijection(inner);
                let mid = dual.derive(inner);
                let d3 = mid.derive_root_bijection(DeriveOp::Dual);
                (0..self.num_roots()).map(|i| d3[d2[d1[i]]]).collect()
            }
            DeriveOp::Rad | DeriveOp::Corad => panic!("radical data carry no roots"),
        }
    }
}

/// Saturation routed through arbitrary-precision arithmetic.
pub(crate) fn big_saturate(l: &Sublattice<Int>) -> Sublattice<Int> {
    let big = Sublattice::from_generators(l.ambient_rank(), l.basis().convert::<Big>());
    Sublattice::from_generators(l.ambient_rank(), big.saturate().basis().convert::<Int>())
}

/// Transports an endomorphism along a full-column-rank lattice map:
/// returns the unique B with B·map = map·a, if it is integral.
/// `map` is d×n, `a` is n×n, the result d×d.
pub(crate) fn transport_endomorphism(map: &Mat, a: &Mat) -> Option<Mat> {
    let rhs = (map * a).transpose().convert::<Big>();
    // B·map = map·a  ⟺  mapᵗ·Bᵗ = (map·a)ᵗ; solve column by column.
    let lhs = map.transpose().convert::<Big>();
    let d = map.rows();
    let mut cols: Vec<Vec<Int>> = Vec::with_capacity(d);
    for j in 0..d {
        let x = solve(&lhs, &rhs.col_vec(j))?;
        cols.push(
            x.iter()
                .map(|v| num_traits::ToPrimitive::to_i64(v).expect("transported entry fits i64"))
                .collect(),
        );
    }
    // cols[j] is column j of the transposed unknown, i.e. row j of B.
    Some(Mat::from_fn(d, d, |i, j| cols[i][j]))
}

/// A root datum with a chosen simple system Δ (indices into the root list).
#[derive(Clone, PartialEq, Eq)]
pub struct PinnedRootDatum {
    base: RootDatum,
    delta: Vec<usize>,
}

impl std::fmt::Debug for PinnedRootDatum {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "PinnedRootDatum(rank={}, |Δ|={})", self.base.rank(), self.delta.len())
    }
}

impl PinnedRootDatum {
    /// Wraps a base and a simple system, verifying that every root is a
    /// uniform-sign integer combination of Δ.
    pub fn new(base: RootDatum, delta: Vec<usize>) -> Result<Self, RootDatumError> {
        let p = PinnedRootDatum { base, delta };
        for i in 0..p.base.num_roots() {
            if p.expand_in_simple_roots(p.base.root(i)).is_none() {
                return Err(RootDatumError::BadPinning);
            }
        }
        Ok(p)
    }

    pub fn base(&self) -> &RootDatum {
        &self.base
    }

    pub fn delta(&self) -> &[usize] {
        &self.delta
    }

    pub fn simple_root(&self, node: usize) -> &[Int] {
        self.base.root(self.delta[node])
    }

    pub fn simple_coroot(&self, node: usize) -> &[Int] {
        self.base.coroot(self.delta[node])
    }

    pub fn num_nodes(&self) -> usize {
        self.delta.len()
    }

    /// Integer coefficients of `x` over Δ, if `x` lies in Γ₀(R) and the
    /// coefficients are all ≥ 0 or all ≤ 0.
    pub fn expand_in_simple_roots(&self, x: &[Int]) -> Option<Vec<Int>> {
        if self.delta.is_empty() {
            return x.iter().all(|v| *v == 0).then(Vec::new);
        }
        let cols: Vec<Vec<Int>> = self.delta.iter().map(|&i| self.base.root(i).to_vec()).collect();
        let a = Mat::from_rows(cols).transpose().convert::<Big>();
        let b: Vec<Big> = x.iter().map(|v| Big::from(*v)).collect();
        let c = solve(&a, &b)?;
        let c: Vec<Int> =
            c.iter().map(|v| num_traits::ToPrimitive::to_i64(v).unwrap()).collect();
        let nonneg = c.iter().all(|v| *v >= 0);
        let nonpos = c.iter().all(|v| *v <= 0);
        (nonneg || nonpos).then_some(c)
    }
}
