//! Finite groups acting on lattices and on root data: the combinatorial
//! model of twisted root data and tori.
//!
//! The profinite Galois group is modeled by its finite quotient acting on a
//! chosen splitting field; that quotient is the `FiniteGroup` here.  Actions
//! are stored per element and validated as homomorphisms on construction.

mod perm;

#[cfg(test)]
mod tests;

pub use perm::{
    compose, groups, identity_perm, invert, FiniteGroup, GroupError, Perm, Subgroup,
    DEFAULT_ORDER_CAP,
};

use crate::lattice::{kernel_basis, Sublattice};
use crate::root_datum::{
    aut_group, factor_automorphism, map_is_isomorphism, simple_system, weyl_group,
    PinnedRootDatum, RootDatum, RootDatumError,
};
use crate::{Big, Int, Mat};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ActionError {
    #[error("generator count does not match the group's generator list")]
    GeneratorCountMismatch,
    #[error("action matrices do not define a homomorphism")]
    NotAHomomorphism,
    #[error("action matrix is not an automorphism of the structure")]
    NotAnAutomorphism,
    #[error("torsion exponents must be all positive (finite module)")]
    MixedTorsion,
    #[error("action does not preserve the torsion relations")]
    TorsionNotPreserved,
    #[error("operation requires a torsion-free lattice")]
    TorsionUnsupported,
    #[error("not a subgroup of the acting group")]
    NotASubgroup,
    #[error(transparent)]
    RootDatum(#[from] RootDatumError),
}

/// Extends generator images to per-element matrices along the Cayley graph
/// and verifies the homomorphism property.
fn extend_action(
    group: &FiniteGroup,
    rank: usize,
    gen_mats: &[Mat],
) -> Result<Vec<Mat>, ActionError> {
    let gens = group.generator_indices();
    if gens.len() != gen_mats.len() {
        return Err(ActionError::GeneratorCountMismatch);
    }
    for m in gen_mats {
        if m.rows() != rank || m.cols() != rank || !m.is_unimodular() {
            return Err(ActionError::NotAnAutomorphism);
        }
    }
    let n = group.order();
    let mut mats: Vec<Option<Mat>> = vec![None; n];
    mats[group.identity()] = Some(Mat::identity(rank));
    let mut queue = std::collections::VecDeque::new();
    queue.push_back(group.identity());
    while let Some(x) = queue.pop_front() {
        for (k, &g) in gens.iter().enumerate() {
            let y = group.mul(g, x);
            if mats[y].is_none() {
                let m = &gen_mats[k] * mats[x].as_ref().unwrap();
                mats[y] = Some(m);
                queue.push_back(y);
            }
        }
    }
    let mats: Vec<Mat> = mats.into_iter().map(|m| m.expect("generators generate")).collect();
    // Consistency on the whole Cayley graph forces the homomorphism property.
    for (k, &g) in gens.iter().enumerate() {
        for x in 0..n {
            if &gen_mats[k] * &mats[x] != mats[group.mul(g, x)] {
                return Err(ActionError::NotAHomomorphism);
            }
        }
    }
    Ok(mats)
}

/// A finite group acting on a finitely generated abelian group, presented
/// as ℤ^rank modulo the diagonal relation lattice given by `torsion`
/// exponents (`None` = torsion-free lattice; all exponents positive =
/// finite module).
#[derive(Clone)]
pub struct GammaLattice {
    group: FiniteGroup,
    rank: usize,
    action: Vec<Mat>,
    torsion: Option<Vec<Int>>,
}

impl std::fmt::Debug for GammaLattice {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match &self.torsion {
            None => write!(f, "GammaLattice(|Γ|={}, rank={})", self.group.order(), self.rank),
            Some(t) => write!(
                f,
                "GammaLattice(|Γ|={}, rank={}, torsion={:?})",
                self.group.order(),
                self.rank,
                t
            ),
        }
    }
}

impl GammaLattice {
    pub fn new(group: FiniteGroup, rank: usize, gen_mats: Vec<Mat>) -> Result<Self, ActionError> {
        let action = extend_action(&group, rank, &gen_mats)?;
        Ok(GammaLattice { group, rank, action, torsion: None })
    }

    /// A finite module ℤ^rank / diag(exponents), every exponent > 0.
    pub fn with_torsion(
        group: FiniteGroup,
        rank: usize,
        gen_mats: Vec<Mat>,
        exponents: Vec<Int>,
    ) -> Result<Self, ActionError> {
        if exponents.len() != rank || exponents.iter().any(|&e| e <= 0) {
            return Err(ActionError::MixedTorsion);
        }
        let action = extend_action(&group, rank, &gen_mats)?;
        // g·(λ_j e_j) must stay inside ⊕ λ_i ℤ e_i.
        for m in &action {
            for i in 0..rank {
                for j in 0..rank {
                    if (m.get(i, j) * exponents[j]) % exponents[i] != 0 {
                        return Err(ActionError::TorsionNotPreserved);
                    }
                }
            }
        }
        Ok(GammaLattice { group, rank, action, torsion: Some(exponents) })
    }

    pub fn trivial(group: FiniteGroup, rank: usize) -> Self {
        let n = group.order();
        GammaLattice { group, rank, action: vec![Mat::identity(rank); n], torsion: None }
    }

    /// ℤ/m with trivial action.
    pub fn finite_cyclic_trivial(group: FiniteGroup, m: Int) -> Self {
        let n = group.order();
        GammaLattice { group, rank: 1, action: vec![Mat::identity(1); n], torsion: Some(vec![m]) }
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn torsion(&self) -> Option<&[Int]> {
        self.torsion.as_deref()
    }

    pub fn is_lattice(&self) -> bool {
        self.torsion.is_none()
    }

    pub fn matrix(&self, element: usize) -> &Mat {
        &self.action[element]
    }

    pub fn matrices(&self) -> &[Mat] {
        &self.action
    }

    /// The same module viewed through a subgroup.
    pub fn restrict(&self, d: &Subgroup) -> Result<GammaLattice, ActionError> {
        if !self.group.is_subgroup(d) {
            return Err(ActionError::NotASubgroup);
        }
        let perms: Vec<Perm> = d.elements.iter().map(|&i| self.group.perm(i).clone()).collect();
        let sub = FiniteGroup::new(self.group.degree(), perms)
            .expect("subgroup closure stays within the parent");
        let action: Vec<Mat> = sub
            .elements()
            .iter()
            .map(|p| {
                let parent = self.group.index_of(p).expect("subgroup element in parent");
                self.action[parent].clone()
            })
            .collect();
        Ok(GammaLattice { group: sub, rank: self.rank, action, torsion: self.torsion.clone() })
    }
}

/// Saturated basis of {x : g·x = x for all g}.
pub fn fixed_sublattice(l: &GammaLattice) -> Result<Sublattice<Int>, ActionError> {
    if !l.is_lattice() {
        return Err(ActionError::TorsionUnsupported);
    }
    let gens: Vec<&Mat> = l.group().generator_indices().iter().map(|&g| l.matrix(g)).collect();
    Ok(fixed_sublattice_of_matrices(l.rank(), &gens))
}

pub(crate) fn fixed_sublattice_of_matrices(rank: usize, mats: &[&Mat]) -> Sublattice<Int> {
    let id = Mat::identity(rank);
    let mut stacked: Option<Mat> = None;
    for m in mats {
        let diff = *m - &id;
        stacked = Some(match stacked {
            None => diff,
            Some(s) => s.vstack(&diff),
        });
    }
    let Some(stacked) = stacked else {
        return Sublattice::full(rank);
    };
    let k = kernel_basis(&stacked.convert::<Big>()).convert::<Int>();
    Sublattice::from_generators(rank, k)
}

/// Fixed sublattice under a subgroup's action.
pub fn fixed_sublattice_under(
    l: &GammaLattice,
    d: &Subgroup,
) -> Result<Sublattice<Int>, ActionError> {
    if !l.is_lattice() {
        return Err(ActionError::TorsionUnsupported);
    }
    if !l.group().is_subgroup(d) {
        return Err(ActionError::NotASubgroup);
    }
    let gens: Vec<&Mat> = if d.generators.is_empty() {
        d.elements.iter().map(|&i| l.matrix(i)).collect()
    } else {
        d.generators.iter().map(|&i| l.matrix(i)).collect()
    };
    Ok(fixed_sublattice_of_matrices(l.rank(), &gens))
}

/// True iff the fixed sublattice under `d` is zero.
pub fn is_anisotropic(l: &GammaLattice, d: &Subgroup) -> Result<bool, ActionError> {
    Ok(fixed_sublattice_under(l, d)?.is_zero())
}

/// A finite Γ-set: a permutation action of the group on {0..size−1}.
#[derive(Clone)]
pub struct GammaSet {
    group: FiniteGroup,
    size: usize,
    action: Vec<Perm>,
}

impl std::fmt::Debug for GammaSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "GammaSet(|Γ|={}, size={})", self.group.order(), self.size)
    }
}

impl GammaSet {
    /// Builds from generator images; the homomorphism property is enforced
    /// by Cayley-graph consistency.
    pub fn new(group: FiniteGroup, size: usize, gen_perms: Vec<Perm>) -> Result<Self, ActionError> {
        let gens = group.generator_indices();
        if gens.len() != gen_perms.len() {
            return Err(ActionError::GeneratorCountMismatch);
        }
        for p in &gen_perms {
            if p.len() != size {
                return Err(ActionError::NotAnAutomorphism);
            }
        }
        let n = group.order();
        let mut perms: Vec<Option<Perm>> = vec![None; n];
        perms[group.identity()] = Some(identity_perm(size));
        let mut queue = std::collections::VecDeque::new();
        queue.push_back(group.identity());
        while let Some(x) = queue.pop_front() {
            for (k, &g) in gens.iter().enumerate() {
                let y = group.mul(g, x);
                if perms[y].is_none() {
                    perms[y] = Some(compose(&gen_perms[k], perms[x].as_ref().unwrap()));
                    queue.push_back(y);
                }
            }
        }
        let perms: Vec<Perm> = perms.into_iter().map(|p| p.expect("generators generate")).collect();
        for (k, &g) in gens.iter().enumerate() {
            for x in 0..n {
                if compose(&gen_perms[k], &perms[x]) != perms[group.mul(g, x)] {
                    return Err(ActionError::NotAHomomorphism);
                }
            }
        }
        Ok(GammaSet { group, size, action: perms })
    }

    pub fn trivial(group: FiniteGroup, size: usize) -> Self {
        let n = group.order();
        GammaSet { group, size, action: vec![identity_perm(size); n] }
    }

    /// The group acting on itself by left multiplication.
    pub fn regular(group: &FiniteGroup) -> Self {
        let n = group.order();
        let action: Vec<Perm> = (0..n).map(|g| (0..n).map(|x| group.mul(g, x)).collect()).collect();
        GammaSet { group: group.clone(), size: n, action }
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn apply(&self, element: usize, point: usize) -> usize {
        self.action[element][point]
    }

    pub fn perm(&self, element: usize) -> &Perm {
        &self.action[element]
    }

    /// Orbits of the restriction of the action to a subgroup.
    pub fn orbits_under(&self, d: &Subgroup) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.size];
        let mut out = Vec::new();
        for start in 0..self.size {
            if seen[start] {
                continue;
            }
            let mut orbit = vec![start];
            seen[start] = true;
            let mut stack = vec![start];
            while let Some(x) = stack.pop() {
                for &g in &d.elements {
                    let y = self.apply(g, x);
                    if !seen[y] {
                        seen[y] = true;
                        orbit.push(y);
                        stack.push(y);
                    }
                }
            }
            orbit.sort_unstable();
            out.push(orbit);
        }
        out
    }

    pub fn orbits(&self) -> Vec<Vec<usize>> {
        self.orbits_under(&self.group.full_subgroup())
    }
}

/// ℤ[X] with the permutation action.
pub fn induced_lattice(x: &GammaSet) -> GammaLattice {
    let rank = x.size();
    let action: Vec<Mat> = (0..x.group().order())
        .map(|g| Mat::from_fn(rank, rank, |i, j| if x.apply(g, j) == i { 1 } else { 0 }))
        .collect();
    GammaLattice { group: x.group().clone(), rank, action, torsion: None }
}

/// The kernel of the sum map ℤ[X] → ℤ, with basis bᵢ = eᵢ − e_{n−1}.
pub fn augmentation_sub(x: &GammaSet) -> GammaLattice {
    let n = x.size();
    assert!(n >= 1);
    let rank = n - 1;
    let action: Vec<Mat> = (0..x.group().order())
        .map(|g| {
            // g·bⱼ = e_{g(j)} − e_{g(n−1)} = b_{g(j)} − b_{g(n−1)} with b_{n−1} = 0.
            Mat::from_fn(rank, rank, |i, j| {
                let plus = x.apply(g, j);
                let minus = x.apply(g, n - 1);
                let mut v: Int = 0;
                if plus == i {
                    v += 1;
                }
                if minus == i {
                    v -= 1;
                }
                v
            })
        })
        .collect();
    GammaLattice { group: x.group().clone(), rank, action, torsion: None }
}

/// ℤ[X] / ℤ·(Σ eᵢ) with basis the classes [eᵢ], i < n−1.
pub fn norm_one_quotient(x: &GammaSet) -> GammaLattice {
    let n = x.size();
    assert!(n >= 1);
    let rank = n - 1;
    let action: Vec<Mat> = (0..x.group().order())
        .map(|g| {
            Mat::from_fn(rank, rank, |i, j| {
                let img = x.apply(g, j);
                if img == n - 1 {
                    // [e_{n−1}] = −Σ_{i<n−1} [eᵢ]
                    -1
                } else if img == i {
                    1
                } else {
                    0
                }
            })
        })
        .collect();
    GammaLattice { group: x.group().clone(), rank, action, torsion: None }
}

/// A root datum with a finite group acting through its automorphisms.
#[derive(Clone)]
pub struct TwistedRootDatum {
    base: RootDatum,
    group: FiniteGroup,
    action: Vec<Mat>,
}

impl std::fmt::Debug for TwistedRootDatum {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "TwistedRootDatum({:?}, |Γ|={})", self.base, self.group.order())
    }
}

impl TwistedRootDatum {
    pub fn new(
        base: RootDatum,
        group: FiniteGroup,
        gen_mats: Vec<Mat>,
    ) -> Result<Self, ActionError> {
        let action = extend_action(&group, base.rank(), &gen_mats)?;
        for m in &action {
            if !map_is_isomorphism(&base, &base, m) {
                return Err(ActionError::NotAnAutomorphism);
            }
        }
        Ok(TwistedRootDatum { base, group, action })
    }

    pub fn split(base: RootDatum, group: FiniteGroup) -> Self {
        let n = group.order();
        let action = vec![Mat::identity(base.rank()); n];
        TwistedRootDatum { base, group, action }
    }

    pub fn base(&self) -> &RootDatum {
        &self.base
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn matrix(&self, element: usize) -> &Mat {
        &self.action[element]
    }

    pub fn matrices(&self) -> &[Mat] {
        &self.action
    }

    /// The character lattice of the underlying torus, with the same action.
    pub fn character_lattice(&self) -> GammaLattice {
        GammaLattice {
            group: self.group.clone(),
            rank: self.base.rank(),
            action: self.action.clone(),
            torsion: None,
        }
    }

    /// Transports the action to the simply connected datum along the
    /// canonical map M → M_sc.
    pub fn simply_connected_twist(&self) -> TwistedRootDatum {
        let (sc, map) = self.base.sc_with_map();
        let action: Vec<Mat> = self
            .action
            .iter()
            .map(|a| {
                crate::root_datum::transport_endomorphism(&map, a)
                    .expect("automorphisms preserve the coroot span")
            })
            .collect();
        debug_assert!(action.iter().all(|m| map_is_isomorphism(&sc, &sc, m)));
        TwistedRootDatum { base: sc, group: self.group.clone(), action }
    }

    /// Transports the action to the semisimple quotient along the inclusion
    /// M_ss ↪ M.
    pub fn semisimple_twist(&self) -> TwistedRootDatum {
        let n = crate::root_datum::big_saturate(&self.base.root_span());
        self.induced_twist(&n)
    }

    /// Transports the action to the adjoint datum along Γ₀(R) ↪ M.
    pub fn adjoint_twist(&self) -> TwistedRootDatum {
        self.induced_twist(&self.base.root_span())
    }

    fn induced_twist(&self, n: &crate::lattice::Sublattice<Int>) -> TwistedRootDatum {
        let (derived, incl) = self.base.induced_with_inclusion(n);
        let incl_t = incl.transpose();
        let action: Vec<Mat> = self
            .action
            .iter()
            .map(|a| {
                crate::root_datum::transport_endomorphism(&incl_t, &a.transpose())
                    .expect("automorphisms preserve the root span")
                    .transpose()
            })
            .collect();
        debug_assert!(action.iter().all(|m| map_is_isomorphism(&derived, &derived, m)));
        TwistedRootDatum { base: derived, group: self.group.clone(), action }
    }

    /// The dual datum with the contragredient action.
    pub fn dual_twist(&self) -> TwistedRootDatum {
        let action: Vec<Mat> = self
            .action
            .iter()
            .map(|a| a.inverse().expect("action matrices are unimodular").transpose())
            .collect();
        TwistedRootDatum { base: self.base.dual(), group: self.group.clone(), action }
    }

    /// The derived-datum twist for the four root-preserving operations.
    pub fn derive_twist(&self, op: crate::root_datum::DeriveOp) -> TwistedRootDatum {
        use crate::root_datum::DeriveOp::*;
        match op {
            Ad => self.adjoint_twist(),
            Ss => self.semisimple_twist(),
            Sc => self.simply_connected_twist(),
            Der => self.dual_twist().semisimple_twist().dual_twist(),
            Dual => self.dual_twist(),
            Rad | Corad => panic!("radical twists carry no roots to transport"),
        }
    }

    /// True iff the image of Γ in Aut(ψ) contains the full Weyl group.
    pub fn is_generic(&self) -> Result<bool, ActionError> {
        if !self.base.is_semisimple() {
            return Err(RootDatumError::NotSemisimple.into());
        }
        let image = crate::root_datum::matrix_closure_set(self.base.rank(), &self.action);
        let w = weyl_group(&self.base);
        Ok(w.elements().iter().all(|m| image.contains(&matrix_key(m))))
    }

    /// The diagram permutation of each group element: factor the action as
    /// w·e against the canonical pinning and return e's node permutation.
    pub fn star_action(&self) -> Result<Vec<Perm>, ActionError> {
        let p = self.pinning()?;
        let aut = aut_group(&p)?;
        self.action
            .iter()
            .map(|a| {
                let (_, ei) = factor_automorphism(&aut, a).ok_or(ActionError::NotAnAutomorphism)?;
                Ok(aut.diagram_autos[ei].node_perm.clone())
            })
            .collect()
    }

    /// Canonical pinning of the base.
    pub fn pinning(&self) -> Result<PinnedRootDatum, ActionError> {
        if !self.base.is_semisimple() {
            return Err(RootDatumError::NotSemisimple.into());
        }
        Ok(simple_system(&self.base))
    }
}

pub(crate) fn matrix_key(m: &Mat) -> Vec<Int> {
    let mut k = Vec::with_capacity(m.rows() * m.cols());
    for i in 0..m.rows() {
        k.extend_from_slice(m.row(i));
    }
    k
}
