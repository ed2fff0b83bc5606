//! Finite permutation groups: closure enumeration, subgroups, conjugacy
//! classes of cyclic subgroups, and a catalog of small groups.

use std::collections::{BTreeSet, HashMap, VecDeque};

/// A permutation of {0..degree−1} given by its image list.
pub type Perm = Vec<usize>;

pub fn compose(p: &Perm, q: &Perm) -> Perm {
    // (p∘q)(x) = p(q(x))
    q.iter().map(|&x| p[x]).collect()
}

pub fn invert(p: &Perm) -> Perm {
    let mut inv = vec![0; p.len()];
    for (i, &x) in p.iter().enumerate() {
        inv[x] = i;
    }
    inv
}

pub fn identity_perm(degree: usize) -> Perm {
    (0..degree).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GroupError {
    #[error("group order exceeds the configured cap of {cap}")]
    OrderCapExceeded { cap: usize },
    #[error("permutation degree mismatch")]
    DegreeMismatch,
    #[error("not a valid permutation of the ground set")]
    NotAPermutation,
}

pub const DEFAULT_ORDER_CAP: usize = 10_000;

/// A finite group, fully enumerated as permutations, with elements in
/// deterministic (lexicographic) order.
#[derive(Clone)]
pub struct FiniteGroup {
    degree: usize,
    elements: Vec<Perm>,
    index: HashMap<Perm, usize>,
    generators: Vec<usize>,
    inverses: Vec<usize>,
    identity: usize,
}

impl std::fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "FiniteGroup(degree={}, order={})", self.degree, self.order())
    }
}

impl FiniteGroup {
    pub fn new(degree: usize, generators: Vec<Perm>) -> Result<Self, GroupError> {
        Self::with_cap(degree, generators, DEFAULT_ORDER_CAP)
    }

    pub fn with_cap(degree: usize, generators: Vec<Perm>, cap: usize) -> Result<Self, GroupError> {
        for g in &generators {
            if g.len() != degree {
                return Err(GroupError::DegreeMismatch);
            }
            let mut seen = vec![false; degree];
            for &x in g {
                if x >= degree || seen[x] {
                    return Err(GroupError::NotAPermutation);
                }
                seen[x] = true;
            }
        }
        // BFS closure.
        let mut elements: BTreeSet<Perm> = BTreeSet::new();
        let id = identity_perm(degree);
        elements.insert(id.clone());
        let mut queue: VecDeque<Perm> = VecDeque::new();
        queue.push_back(id);
        while let Some(p) = queue.pop_front() {
            for g in &generators {
                let next = compose(g, &p);
                if !elements.contains(&next) {
                    if elements.len() >= cap {
                        return Err(GroupError::OrderCapExceeded { cap });
                    }
                    elements.insert(next.clone());
                    queue.push_back(next);
                }
            }
        }
        let elements: Vec<Perm> = elements.into_iter().collect();
        let index: HashMap<Perm, usize> =
            elements.iter().enumerate().map(|(i, p)| (p.clone(), i)).collect();
        let inverses = elements.iter().map(|p| index[&invert(p)]).collect();
        let identity = index[&identity_perm(degree)];
        let generators = generators.iter().map(|g| index[g]).collect();
        Ok(FiniteGroup { degree, elements, index, generators, inverses, identity })
    }

    pub fn trivial() -> Self {
        Self::new(1, Vec::new()).unwrap()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Perm] {
        &self.elements
    }

    pub fn perm(&self, i: usize) -> &Perm {
        &self.elements[i]
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn generator_indices(&self) -> &[usize] {
        &self.generators
    }

    pub fn mul(&self, i: usize, j: usize) -> usize {
        self.index[&compose(&self.elements[i], &self.elements[j])]
    }

    pub fn inv(&self, i: usize) -> usize {
        self.inverses[i]
    }

    pub fn index_of(&self, p: &Perm) -> Option<usize> {
        self.index.get(p).copied()
    }

    pub fn element_order(&self, i: usize) -> usize {
        let mut n = 1;
        let mut cur = i;
        while cur != self.identity {
            cur = self.mul(cur, i);
            n += 1;
        }
        n
    }

    /// The multiplication table; materialized on demand.
    pub fn multiplication_table(&self) -> Vec<Vec<usize>> {
        (0..self.order()).map(|i| (0..self.order()).map(|j| self.mul(i, j)).collect()).collect()
    }

    pub fn subgroup(&self, generator_indices: &[usize]) -> Subgroup {
        let mut elems: BTreeSet<usize> = BTreeSet::new();
        elems.insert(self.identity);
        let mut queue: VecDeque<usize> = VecDeque::new();
        queue.push_back(self.identity);
        while let Some(x) = queue.pop_front() {
            for &g in generator_indices {
                let next = self.mul(g, x);
                if elems.insert(next) {
                    queue.push_back(next);
                }
            }
        }
        Subgroup { elements: elems.into_iter().collect(), generators: generator_indices.to_vec() }
    }

    pub fn full_subgroup(&self) -> Subgroup {
        Subgroup {
            elements: (0..self.order()).collect(),
            generators: self.generators.clone(),
        }
    }

    pub fn trivial_subgroup(&self) -> Subgroup {
        Subgroup { elements: vec![self.identity], generators: Vec::new() }
    }

    pub fn is_subgroup(&self, s: &Subgroup) -> bool {
        let set: BTreeSet<usize> = s.elements.iter().copied().collect();
        set.contains(&self.identity)
            && set.iter().all(|&x| set.contains(&self.inv(x)))
            && set.iter().all(|&x| set.iter().all(|&y| set.contains(&self.mul(x, y))))
    }

    /// All distinct cyclic subgroups.
    pub fn cyclic_subgroups(&self) -> Vec<Subgroup> {
        let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
        let mut out = Vec::new();
        for i in 0..self.order() {
            let s = self.subgroup(&[i]);
            if seen.insert(s.elements.clone()) {
                out.push(s);
            }
        }
        out
    }

    /// One representative per conjugacy class of cyclic subgroups, chosen as
    /// the class member with the least element-index set.
    pub fn cyclic_subgroup_classes(&self) -> Vec<Subgroup> {
        let mut reps: BTreeSet<Vec<usize>> = BTreeSet::new();
        for s in self.cyclic_subgroups() {
            let canon = self.conjugacy_canonical_form(&s);
            reps.insert(canon);
        }
        reps.into_iter()
            .map(|elements| {
                // A cyclic subgroup is generated by any element of maximal order.
                let gen = elements
                    .iter()
                    .copied()
                    .max_by_key(|&x| self.element_order(x))
                    .unwrap_or(self.identity);
                Subgroup { elements, generators: vec![gen] }
            })
            .collect()
    }

    fn conjugacy_canonical_form(&self, s: &Subgroup) -> Vec<usize> {
        let mut best: Option<Vec<usize>> = None;
        for g in 0..self.order() {
            let gi = self.inv(g);
            let mut conj: Vec<usize> =
                s.elements.iter().map(|&x| self.mul(self.mul(g, x), gi)).collect();
            conj.sort_unstable();
            if best.as_ref().is_none_or(|b| &conj < b) {
                best = Some(conj);
            }
        }
        best.unwrap()
    }
}

/// A subgroup, stored as sorted element indices into the parent group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subgroup {
    pub elements: Vec<usize>,
    pub generators: Vec<usize>,
}

impl Subgroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.elements.binary_search(&i).is_ok()
    }
}

/// Constructors for the groups used throughout the test corpus.
pub mod groups {
    use super::{FiniteGroup, Perm};

    pub fn cyclic(n: usize) -> FiniteGroup {
        assert!(n >= 1);
        if n == 1 {
            return FiniteGroup::trivial();
        }
        let shift: Perm = (0..n).map(|i| (i + 1) % n).collect();
        FiniteGroup::new(n, vec![shift]).unwrap()
    }

    pub fn symmetric(n: usize) -> FiniteGroup {
        assert!(n >= 1);
        if n == 1 {
            return FiniteGroup::trivial();
        }
        let mut transposition = super::identity_perm(n);
        transposition.swap(0, 1);
        let cycle: Perm = (0..n).map(|i| (i + 1) % n).collect();
        FiniteGroup::new(n, vec![transposition, cycle]).unwrap()
    }

    pub fn alternating4() -> FiniteGroup {
        // (0 1 2) and (0 1)(2 3).
        FiniteGroup::new(4, vec![vec![1, 2, 0, 3], vec![1, 0, 3, 2]]).unwrap()
    }

    /// Dihedral group of order 2n acting on n points.
    pub fn dihedral(n: usize) -> FiniteGroup {
        assert!(n >= 3);
        let rot: Perm = (0..n).map(|i| (i + 1) % n).collect();
        let flip: Perm = (0..n).map(|i| (n - i) % n).collect();
        FiniteGroup::new(n, vec![rot, flip]).unwrap()
    }

    /// Quaternion group of order 8 in its regular representation on
    /// {1, i, −1, −i, j, k, −j, −k}.
    pub fn quaternion8() -> FiniteGroup {
        // Left multiplication by i: 1→i→−1→−i→1, j→−k... indices:
        // 0:1 1:i 2:−1 3:−i 4:j 5:k 6:−j 7:−k
        // i·j = k, i·k = −j, i·(−j) = −k, i·(−k) = j.
        let by_i: Perm = vec![1, 2, 3, 0, 5, 6, 7, 4];
        // j·1 = j, j·i = −k, j·−1 = −j, j·−i = k, j·j = −1, j·k = i, j·−j = 1, j·−k = −i.
        let by_j: Perm = vec![4, 7, 6, 5, 2, 1, 0, 3];
        FiniteGroup::new(8, vec![by_i, by_j]).unwrap()
    }

    /// Direct product acting on the disjoint union of the factors' points.
    pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup) -> FiniteGroup {
        let d = a.degree() + b.degree();
        let mut gens: Vec<Perm> = Vec::new();
        for &gi in a.generator_indices() {
            let g = a.perm(gi);
            let mut p = super::identity_perm(d);
            for (x, &y) in g.iter().enumerate() {
                p[x] = y;
            }
            gens.push(p);
        }
        for &gi in b.generator_indices() {
            let g = b.perm(gi);
            let mut p = super::identity_perm(d);
            for (x, &y) in g.iter().enumerate() {
                p[a.degree() + x] = a.degree() + y;
            }
            gens.push(p);
        }
        FiniteGroup::new(d, gens).unwrap()
    }

    pub fn klein_four() -> FiniteGroup {
        direct_product(&cyclic(2), &cyclic(2))
    }

    /// Named catalog of all groups used by the order ≤ 24 sweeps.
    pub fn catalog_up_to_24() -> Vec<(String, FiniteGroup)> {
        let mut out: Vec<(String, FiniteGroup)> = Vec::new();
        for n in 1..=24 {
            out.push((format!("Z{n}"), cyclic(n)));
        }
        let named: Vec<(&str, FiniteGroup)> = vec![
            ("Z2xZ2", klein_four()),
            ("Z2xZ4", direct_product(&cyclic(2), &cyclic(4))),
            ("Z2xZ6", direct_product(&cyclic(2), &cyclic(6))),
            ("Z2xZ8", direct_product(&cyclic(2), &cyclic(8))),
            ("Z2xZ10", direct_product(&cyclic(2), &cyclic(10))),
            ("Z2xZ12", direct_product(&cyclic(2), &cyclic(12))),
            ("Z3xZ3", direct_product(&cyclic(3), &cyclic(3))),
            ("Z3xZ6", direct_product(&cyclic(3), &cyclic(6))),
            ("Z4xZ4", direct_product(&cyclic(4), &cyclic(4))),
            ("Z4xZ6", direct_product(&cyclic(4), &cyclic(6))),
            ("Z2xZ2xZ2", direct_product(&klein_four(), &cyclic(2))),
            ("Z2xZ2xZ4", direct_product(&klein_four(), &cyclic(4))),
            ("Z2xZ2xZ6", direct_product(&klein_four(), &cyclic(6))),
            ("S3", symmetric(3)),
            ("S4", symmetric(4)),
            ("A4", alternating4()),
            ("Q8", quaternion8()),
            ("D4", dihedral(4)),
            ("D5", dihedral(5)),
            ("D6", dihedral(6)),
            ("D7", dihedral(7)),
            ("D8", dihedral(8)),
            ("D9", dihedral(9)),
            ("D10", dihedral(10)),
            ("D11", dihedral(11)),
            ("D12", dihedral(12)),
            ("Z2xS3", direct_product(&cyclic(2), &symmetric(3))),
            ("Z2xA4", direct_product(&cyclic(2), &alternating4())),
            ("Z3xS3", direct_product(&cyclic(3), &symmetric(3))),
            ("Z4xS3", direct_product(&cyclic(4), &symmetric(3))),
            ("Z2xQ8", direct_product(&cyclic(2), &quaternion8())),
            ("Z2xD4", direct_product(&cyclic(2), &dihedral(4))),
        ];
        for (name, g) in named {
            out.push((name.to_string(), g));
        }
        out.retain(|(_, g)| g.order() <= 24);
        out
    }

    /// Looks up a group by catalog name (e.g. "Z6", "S3", "Z2xZ2").
    pub fn by_name(name: &str) -> Option<FiniteGroup> {
        catalog_up_to_24().into_iter().find(|(n, _)| n == name).map(|(_, g)| g)
    }
}
