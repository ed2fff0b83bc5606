//! Automorphism groups Aut(ψ) = W ⋊ E_Δ and isomorphism sets between data.

use std::collections::HashSet;

use super::{cartan_matrix, simple_system, weyl_group, PinnedRootDatum, RootDatum, RootDatumError, WeylGroup};
use crate::lattice::solve;
use crate::{Big, Int, Mat};

/// A Δ-preserving automorphism: the matrix on M together with the node
/// permutation it induces on the simple system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagramAuto {
    pub matrix: Mat,
    pub node_perm: Vec<usize>,
}

/// Aut(ψ) presented through the semidirect decomposition W ⋊ E_Δ.
pub struct AutGroup {
    pub pinned: PinnedRootDatum,
    pub weyl: std::sync::Arc<WeylGroup>,
    pub diagram_autos: Vec<DiagramAuto>,
}

impl AutGroup {
    pub fn order(&self) -> usize {
        self.weyl.order() * self.diagram_autos.len()
    }
}

/// A morphism of root data carried by the character-lattice map
/// f: M_source → M_target (column convention).  The underlying torus map
/// runs the other way; this contravariance is fixed once, here.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootDatumMorphism {
    pub source: RootDatum,
    pub target: RootDatum,
    pub map: Mat,
}

impl RootDatumMorphism {
    /// Checks the defining condition: `map` restricts to a bijection on
    /// roots and its transpose to a bijection on coroots (target → source).
    pub fn is_valid(&self) -> bool {
        map_is_isomorphism(&self.source, &self.target, &self.map)
    }
}

/// True when f(R₁) = R₂ bijectively and ᵗf(R₂∨) = R₁∨ bijectively.
pub fn map_is_isomorphism(source: &RootDatum, target: &RootDatum, f: &Mat) -> bool {
    if source.num_roots() != target.num_roots() {
        return false;
    }
    let ft = f.transpose();
    let mut seen = HashSet::new();
    for i in 0..source.num_roots() {
        let img = f.mul_vec(source.root(i));
        match target.root_index(&img) {
            None => return false,
            Some(k) => {
                if !seen.insert(k) {
                    return false;
                }
                // Coroot compatibility: ᵗf(f(α)∨) = α∨.
                if ft.mul_vec(target.coroot(k)) != source.coroot(i) {
                    return false;
                }
            }
        }
    }
    true
}

/// All bijections π: nodes(c1) → nodes(c2) with C₂[πi][πj] = C₁[i][j].
fn cartan_isomorphisms(c1: &Mat, c2: &Mat) -> Vec<Vec<usize>> {
    let n = c1.rows();
    if c2.rows() != n {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut perm: Vec<usize> = Vec::with_capacity(n);
    let mut used = vec![false; n];
    fn rec(
        c1: &Mat,
        c2: &Mat,
        perm: &mut Vec<usize>,
        used: &mut Vec<bool>,
        out: &mut Vec<Vec<usize>>,
    ) {
        let n = c1.rows();
        let i = perm.len();
        if i == n {
            out.push(perm.clone());
            return;
        }
        for cand in 0..n {
            if used[cand] {
                continue;
            }
            let ok = (0..i).all(|j| {
                c2.get(cand, perm[j]) == c1.get(i, j) && c2.get(perm[j], cand) == c1.get(j, i)
            }) && c2.get(cand, cand) == c1.get(i, i);
            if ok {
                used[cand] = true;
                perm.push(cand);
                rec(c1, c2, perm, used, out);
                perm.pop();
                used[cand] = false;
            }
        }
    }
    rec(c1, c2, &mut perm, &mut used, &mut out);
    out
}

/// The linear map sending simple roots of `p1` to simple roots of `p2`
/// along the node bijection, if it is integral on all of M with integral
/// inverse.  Requires both bases to span M ⊗ ℚ (i.e. semisimple data).
fn extend_node_map(p1: &PinnedRootDatum, p2: &PinnedRootDatum, perm: &[usize]) -> Option<Mat> {
    let rank = p1.base().rank();
    if p2.base().rank() != rank {
        return None;
    }
    // Solve f · P₁ = P₂∘π column by column through the transpose.
    let p1_cols: Vec<Vec<Int>> = (0..p1.num_nodes()).map(|i| p1.simple_root(i).to_vec()).collect();
    let p2_cols: Vec<Vec<Int>> =
        (0..p1.num_nodes()).map(|i| p2.simple_root(perm[i]).to_vec()).collect();
    let a = Mat::from_rows(p1_cols).convert::<Big>(); // rows = simple roots: this is P₁ᵗ
    let mut f_rows: Vec<Vec<Int>> = Vec::with_capacity(rank);
    for r in 0..rank {
        // Row r of f satisfies P₁ᵗ · (row r)ᵗ = (r-th coords of images).
        let b: Vec<Big> = p2_cols.iter().map(|c| Big::from(c[r])).collect();
        let x = solve(&a, &b)?;
        f_rows.push(x.iter().map(|v| num_traits::ToPrimitive::to_i64(v).unwrap()).collect());
    }
    let f = Mat::from_rows(f_rows);
    f.is_unimodular().then_some(f)
}

/// Enumerates Aut(ψ) as W ⋊ E_Δ.  Errors on non-semisimple input, where the
/// automorphism group can be infinite.
pub fn aut_group(pinned: &PinnedRootDatum) -> Result<AutGroup, RootDatumError> {
    let base = pinned.base();
    if !base.is_semisimple() {
        return Err(RootDatumError::NotSemisimple);
    }
    let weyl = weyl_group(base);
    let c = cartan_matrix(pinned);
    let mut diagram_autos = Vec::new();
    for perm in cartan_isomorphisms(&c, &c) {
        if let Some(m) = extend_node_map(pinned, pinned, &perm) {
            if map_is_isomorphism(base, base, &m) {
                diagram_autos.push(DiagramAuto { matrix: m, node_perm: perm });
            }
        }
    }
    Ok(AutGroup { pinned: pinned.clone(), weyl, diagram_autos })
}

/// Factors an automorphism as a = w·e with w ∈ W and e ∈ E_Δ; the
/// factorization is unique when it exists.
pub fn factor_automorphism(aut: &AutGroup, a: &Mat) -> Option<(usize, usize)> {
    let delta_set: HashSet<Vec<Int>> = (0..aut.pinned.num_nodes())
        .map(|i| a.mul_vec(aut.pinned.simple_root(i)))
        .collect();
    for (wi, w) in aut.weyl.elements().iter().enumerate() {
        let image: HashSet<Vec<Int>> = (0..aut.pinned.num_nodes())
            .map(|i| w.mul_vec(aut.pinned.simple_root(i)))
            .collect();
        if image == delta_set {
            let w_inv = w.inverse().expect("weyl elements are unimodular");
            let e = &w_inv * a;
            if let Some(ei) = aut.diagram_autos.iter().position(|d| d.matrix == e) {
                return Some((wi, ei));
            }
            return None;
        }
    }
    None
}

/// All isomorphisms ψ₁ → ψ₂ of semisimple root data.  The result is a
/// torsor under Aut(ψ₁) when nonempty.
pub fn isomorphisms(
    psi1: &RootDatum,
    psi2: &RootDatum,
) -> Result<Vec<RootDatumMorphism>, RootDatumError> {
    if !psi1.is_semisimple() || !psi2.is_semisimple() {
        return Err(RootDatumError::NotSemisimple);
    }
    let p1 = simple_system(psi1);
    let p2 = simple_system(psi2);
    let c1 = cartan_matrix(&p1);
    let c2 = cartan_matrix(&p2);
    let mut base_maps = Vec::new();
    for perm in cartan_isomorphisms(&c1, &c2) {
        if let Some(m) = extend_node_map(&p1, &p2, &perm) {
            if map_is_isomorphism(psi1, psi2, &m) {
                base_maps.push(m);
            }
        }
    }
    let w2 = weyl_group(psi2);
    let mut out = Vec::new();
    for f in base_maps {
        for w in w2.elements() {
            out.push(RootDatumMorphism {
                source: psi1.clone(),
                target: psi2.clone(),
                map: w * &f,
            });
        }
    }
    Ok(out)
}
