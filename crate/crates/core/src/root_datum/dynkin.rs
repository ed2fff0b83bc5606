//! Cartan matrices and Dynkin diagram classification.
//!
//! Convention: C[i][j] = ⟨αᵢ∨, αⱼ⟩ (rows indexed by coroots).  For a bond of
//! multiplicity ≥ 2, |C[i][j]| > |C[j][i]| means αᵢ is the shorter root, so
//! the arrow points from the long end to the short end.

use super::{dot, PinnedRootDatum, RootDatumError};
use crate::Mat;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TypeKind {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl TypeKind {
    pub fn letter(self) -> char {
        match self {
            TypeKind::A => 'A',
            TypeKind::B => 'B',
            TypeKind::C => 'C',
            TypeKind::D => 'D',
            TypeKind::E => 'E',
            TypeKind::F => 'F',
            TypeKind::G => 'G',
        }
    }
}

/// A classified component type, e.g. B3 or G2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DynkinType {
    pub kind: TypeKind,
    pub rank: usize,
}

impl DynkinType {
    pub fn new(kind: TypeKind, rank: usize) -> Self {
        DynkinType { kind, rank }
    }

    /// Resolves the classical coincidences to a canonical label:
    /// B1 = C1 = A1, B2 = C2 (kept as B2), D2 = A1×A1 (not a single type),
    /// D3 = A3.
    pub fn normalized(self) -> Self {
        match (self.kind, self.rank) {
            (TypeKind::B | TypeKind::C, 1) => DynkinType::new(TypeKind::A, 1),
            (TypeKind::C, 2) => DynkinType::new(TypeKind::B, 2),
            (TypeKind::D, 3) => DynkinType::new(TypeKind::A, 3),
            _ => self,
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        let kind = match s.chars().next()? {
            'A' => TypeKind::A,
            'B' => TypeKind::B,
            'C' => TypeKind::C,
            'D' => TypeKind::D,
            'E' => TypeKind::E,
            'F' => TypeKind::F,
            'G' => TypeKind::G,
            _ => return None,
        };
        let rank: usize = s[1..].parse().ok()?;
        Some(DynkinType { kind, rank })
    }
}

impl std::fmt::Display for DynkinType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}{}", self.kind.letter(), self.rank)
    }
}

/// An edge of the diagram.  `long_end` is the node carrying the longer root
/// when the multiplicity is ≥ 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Bond {
    pub a: usize,
    pub b: usize,
    pub multiplicity: u8,
    pub long_end: Option<usize>,
}

/// One connected component with its classification and its nodes listed in
/// the standard (Bourbaki) order for that type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DynkinComponent {
    pub kind: DynkinType,
    pub nodes: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DynkinDiagram {
    pub num_nodes: usize,
    pub bonds: Vec<Bond>,
    pub components: Vec<DynkinComponent>,
}

impl DynkinDiagram {
    /// Multiset of component types, normalized, as a display string.
    pub fn type_string(&self) -> String {
        let mut types: Vec<String> =
            self.components.iter().map(|c| c.kind.normalized().to_string()).collect();
        types.sort();
        if types.is_empty() {
            "0".to_string()
        } else {
            types.join("+")
        }
    }

    pub fn is_isotypical(&self, kind: TypeKind) -> bool {
        !self.components.is_empty()
            && self.components.iter().all(|c| c.kind.normalized().kind == kind)
    }

    /// Symplectic-family test: every component is C_m (counting the rank-1
    /// and rank-2 coincidences A1 = C1 and B2 = C2 as type C).
    pub fn all_type_c(&self) -> bool {
        !self.components.is_empty()
            && self.components.iter().all(|c| {
                let t = c.kind.normalized();
                matches!(t.kind, TypeKind::C) || (t.kind == TypeKind::A && t.rank == 1) || (t.kind == TypeKind::B && t.rank == 2)
            })
    }

    pub fn neighbors(&self, n: usize) -> Vec<usize> {
        self.bonds
            .iter()
            .filter_map(|b| {
                if b.a == n {
                    Some(b.b)
                } else if b.b == n {
                    Some(b.a)
                } else {
                    None
                }
            })
            .collect()
    }
}

/// C[i][j] = ⟨αᵢ∨, αⱼ⟩ over the simple system.
pub fn cartan_matrix(p: &PinnedRootDatum) -> Mat {
    let k = p.num_nodes();
    Mat::from_fn(k, k, |i, j| dot(p.simple_coroot(i), p.simple_root(j)))
}

/// Classifies the diagram of a reduced pinned datum.
pub fn classify(p: &PinnedRootDatum) -> Result<DynkinDiagram, RootDatumError> {
    if !p.base().predicates().reduced {
        return Err(RootDatumError::NotReduced);
    }
    let c = cartan_matrix(p);
    diagram_from_cartan(&c)
}

/// Builds and classifies the diagram directly from a Cartan matrix.
pub fn diagram_from_cartan(c: &Mat) -> Result<DynkinDiagram, RootDatumError> {
    let n = c.rows();
    let mut bonds = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let m = (c.get(i, j) * c.get(j, i)) as u8;
            if m == 0 {
                continue;
            }
            if m > 3 {
                return Err(RootDatumError::BadPinning);
            }
            let long_end = if m >= 2 {
                // |C[i][j]| > |C[j][i]| means αᵢ is shorter; the long end is j.
                Some(if c.get(i, j).abs() > c.get(j, i).abs() { j } else { i })
            } else {
                None
            };
            bonds.push(Bond { a: i, b: j, multiplicity: m, long_end });
        }
    }
    let components = split_components(n, &bonds)
        .into_iter()
        .map(|nodes| classify_component(&nodes, &bonds))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(DynkinDiagram { num_nodes: n, bonds, components })
}

fn split_components(n: usize, bonds: &[Bond]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut comp = vec![start];
        seen[start] = true;
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            for b in bonds {
                let w = if b.a == v {
                    b.b
                } else if b.b == v {
                    b.a
                } else {
                    continue;
                };
                if !seen[w] {
                    seen[w] = true;
                    comp.push(w);
                    stack.push(w);
                }
            }
        }
        comp.sort();
        out.push(comp);
    }
    out
}

struct CompView<'a> {
    nodes: &'a [usize],
    bonds: &'a [Bond],
}

impl CompView<'_> {
    fn adj(&self, v: usize) -> Vec<usize> {
        self.bonds
            .iter()
            .filter_map(|b| {
                if b.a == v && self.nodes.contains(&b.b) {
                    Some(b.b)
                } else if b.b == v && self.nodes.contains(&b.a) {
                    Some(b.a)
                } else {
                    None
                }
            })
            .collect()
    }

    /// Walks a path component from `end` to the other end.
    fn path_order(&self, end: usize) -> Vec<usize> {
        let mut order = vec![end];
        let mut prev = None;
        let mut cur = end;
        loop {
            let next: Vec<usize> =
                self.adj(cur).into_iter().filter(|&x| Some(x) != prev).collect();
            match next.as_slice() {
                [] => break,
                [n] => {
                    order.push(*n);
                    prev = Some(cur);
                    cur = *n;
                }
                _ => break, // branch: caller handles
            }
        }
        order
    }
}

fn classify_component(nodes: &[usize], bonds: &[Bond]) -> Result<DynkinComponent, RootDatumError> {
    let view = CompView { nodes, bonds };
    let n = nodes.len();
    if n == 1 {
        return Ok(DynkinComponent { kind: DynkinType::new(TypeKind::A, 1), nodes: nodes.to_vec() });
    }
    let comp_bonds: Vec<&Bond> =
        bonds.iter().filter(|b| nodes.contains(&b.a) && nodes.contains(&b.b)).collect();
    if comp_bonds.len() != n - 1 {
        return Err(RootDatumError::BadPinning); // cycle: not a finite type
    }
    let degrees: Vec<(usize, usize)> = nodes.iter().map(|&v| (v, view.adj(v).len())).collect();
    let branch_nodes: Vec<usize> =
        degrees.iter().filter(|(_, d)| *d >= 3).map(|(v, _)| *v).collect();
    let triple = comp_bonds.iter().find(|b| b.multiplicity == 3);
    let doubles: Vec<&&Bond> = comp_bonds.iter().filter(|b| b.multiplicity == 2).collect();

    if let Some(t) = triple {
        if n != 2 || doubles.len() != 0 {
            return Err(RootDatumError::BadPinning);
        }
        // G2: node 1 is the short root.
        let short = if t.long_end == Some(t.a) { t.b } else { t.a };
        let long = if short == t.a { t.b } else { t.a };
        return Ok(DynkinComponent { kind: DynkinType::new(TypeKind::G, 2), nodes: vec![short, long] });
    }

    if !doubles.is_empty() {
        if doubles.len() != 1 || !branch_nodes.is_empty() {
            return Err(RootDatumError::BadPinning);
        }
        let d = doubles[0];
        let ends: Vec<usize> = degrees.iter().filter(|(_, deg)| *deg == 1).map(|(v, _)| *v).collect();
        if ends.len() != 2 {
            return Err(RootDatumError::BadPinning);
        }
        if n == 2 {
            // B2 = C2: canonical order starts at the long root.
            let long = d.long_end.unwrap();
            let short = if long == d.a { d.b } else { d.a };
            return Ok(DynkinComponent {
                kind: DynkinType::new(TypeKind::B, 2),
                nodes: vec![long, short],
            });
        }
        // Path with one double bond.  F4 iff the double bond is interior.
        let at_end = ends.iter().any(|&e| e == d.a || e == d.b);
        if !at_end {
            if n != 4 {
                return Err(RootDatumError::BadPinning);
            }
            // F4: order from the long side: α1 α2 ⇒ α3 α4.
            let long = d.long_end.unwrap();
            let end_on_long_side = ends
                .iter()
                .copied()
                .find(|&e| {
                    let path = view.path_order(e);
                    path.iter().position(|&x| x == long).unwrap() == 1
                })
                .ok_or(RootDatumError::BadPinning)?;
            return Ok(DynkinComponent {
                kind: DynkinType::new(TypeKind::F, 4),
                nodes: view.path_order(end_on_long_side),
            });
        }
        // B_n or C_n: the double bond touches one end; order starts at the
        // far simple end, finishing across the double bond.
        let end_at_double =
            ends.iter().copied().find(|&e| e == d.a || e == d.b).unwrap();
        let far_end = ends.iter().copied().find(|&e| e != end_at_double).unwrap();
        let order = view.path_order(far_end);
        // B_n: the end node across the double bond is the short root.
        let last = *order.last().unwrap();
        let kind = if d.long_end == Some(last) { TypeKind::C } else { TypeKind::B };
        return Ok(DynkinComponent { kind: DynkinType::new(kind, n), nodes: order });
    }

    // Simply laced.
    match branch_nodes.len() {
        0 => {
            // A_n: orient so the node sequence is lexicographically least.
            let ends: Vec<usize> =
                degrees.iter().filter(|(_, d)| *d == 1).map(|(v, _)| *v).collect();
            let o1 = view.path_order(ends[0]);
            let o2 = view.path_order(ends[1]);
            let nodes = if o1 <= o2 { o1 } else { o2 };
            Ok(DynkinComponent { kind: DynkinType::new(TypeKind::A, n), nodes })
        }
        1 => {
            let c = branch_nodes[0];
            if view.adj(c).len() != 3 {
                return Err(RootDatumError::BadPinning);
            }
            // Arms from the branch node, outward, shortest first; ties by
            // lexicographic node order for determinism.
            let mut arms: Vec<Vec<usize>> = view
                .adj(c)
                .into_iter()
                .map(|first| {
                    let mut arm = vec![first];
                    let mut prev = c;
                    let mut cur = first;
                    loop {
                        let next: Vec<usize> =
                            view.adj(cur).into_iter().filter(|&x| x != prev).collect();
                        match next.as_slice() {
                            [] => break,
                            [nx] => {
                                arm.push(*nx);
                                prev = cur;
                                cur = *nx;
                            }
                            _ => break,
                        }
                    }
                    arm
                })
                .collect();
            arms.sort_by_key(|a| (a.len(), a.clone()));
            let lens: Vec<usize> = arms.iter().map(Vec::len).collect();
            match lens.as_slice() {
                [1, 1, k] => {
                    // D_{k+3}: chain α1..α_{n−2} then the two fork nodes.
                    let mut order: Vec<usize> = arms[2].iter().rev().copied().collect();
                    order.push(c);
                    order.push(arms[0][0]);
                    order.push(arms[1][0]);
                    Ok(DynkinComponent { kind: DynkinType::new(TypeKind::D, k + 3), nodes: order })
                }
                [1, 2, k @ (2 | 3 | 4)] => {
                    // E_{k+4} with Bourbaki numbering: 1-3-4-5-…, node 2 on 4.
                    let mut order = Vec::with_capacity(n);
                    order.push(arms[1][1]); // α1
                    order.push(arms[0][0]); // α2
                    order.push(arms[1][0]); // α3
                    order.push(c); // α4
                    order.extend(arms[2].iter().copied()); // α5..
                    Ok(DynkinComponent { kind: DynkinType::new(TypeKind::E, k + 4), nodes: order })
                }
                _ => Err(RootDatumError::BadPinning),
            }
        }
        _ => Err(RootDatumError::BadPinning),
    }
}
