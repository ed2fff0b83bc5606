//! Tits indices, orientations, the local embedding criterion, and the
//! local-global certificates with their obstruction groups.
//!
//! A Tits index here is the type of a minimal parabolic: the set of simple
//! roots vanishing identically on the fixed cocharacter space of the
//! (local) Galois action — the anisotropic-kernel nodes.  A split action
//! gives the empty set; an anisotropic one gives all nodes.  The local
//! criterion compares two indices through the diagram map of an
//! orientation: the embedding exists iff the mapped index of the torus
//! datum contains the group's index.


use std::collections::BTreeSet;

use crate::cohomology::{
    sha, sha_cyclic, CohomologyConfig, CohomologyError, CohomologyGroup, PlaceModel,
};
use crate::galois::{fixed_sublattice_of_matrices, ActionError, Subgroup, TwistedRootDatum};
use crate::lattice::Sublattice;
use crate::root_datum::{
    cartan_matrix, classify, diagram_from_cartan, weyl_group, DeriveOp, DynkinDiagram,
    PinnedRootDatum, RootDatum, RootDatumError, WeylGroup,
};
use crate::{Int, Mat};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EmbedError {
    #[error("the two data have different Dynkin types")]
    TypeMismatch,
    #[error("orientation composition requires matching middle data")]
    CompositionMismatch,
    #[error("the distinguished set is not stable under the star action")]
    IndexNotStable,
    #[error("no orientation with the requested diagram map exists")]
    NoOrientation,
    #[error(transparent)]
    RootDatum(#[from] RootDatumError),
    #[error(transparent)]
    Action(#[from] ActionError),
    #[error(transparent)]
    Cohomology(#[from] CohomologyError),
}

/// A Galois-stable subset of Dynkin nodes on the canonical pinning: the
/// anisotropic-kernel nodes (type of a minimal parabolic).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TitsIndex {
    pub diagram: DynkinDiagram,
    pub distinguished: BTreeSet<usize>,
}

impl TitsIndex {
    pub fn new(diagram: DynkinDiagram, distinguished: BTreeSet<usize>) -> Self {
        TitsIndex { diagram, distinguished }
    }

    pub fn split(diagram: DynkinDiagram) -> Self {
        TitsIndex { diagram, distinguished: BTreeSet::new() }
    }

    pub fn anisotropic(diagram: DynkinDiagram) -> Self {
        let all = (0..diagram.num_nodes).collect();
        TitsIndex { diagram, distinguished: all }
    }

    pub fn is_split(&self) -> bool {
        self.distinguished.is_empty()
    }

    pub fn is_anisotropic(&self) -> bool {
        self.distinguished.len() == self.diagram.num_nodes
    }
}

/// The combinatorial shadow of a reductive group over a local field: its
/// twisted root datum and its Tits index.
#[derive(Debug, Clone)]
pub struct LocalGroupDatum {
    pub datum: TwistedRootDatum,
    pub index: TitsIndex,
}

impl LocalGroupDatum {
    /// Validates that the index lives on the datum's diagram and is stable
    /// under the datum's star action.
    pub fn new(datum: TwistedRootDatum, index: TitsIndex) -> Result<Self, EmbedError> {
        let pinned = datum.pinning()?;
        let diagram = classify(&pinned)?;
        if diagram.num_nodes != index.diagram.num_nodes {
            return Err(EmbedError::TypeMismatch);
        }
        let star = datum.star_action()?;
        for perm in &star {
            let mapped: BTreeSet<usize> =
                index.distinguished.iter().map(|&n| perm[n]).collect();
            if mapped != index.distinguished {
                return Err(EmbedError::IndexNotStable);
            }
        }
        Ok(LocalGroupDatum { datum, index })
    }
}

/// Positivity adapted to a fixed cocharacter space: a root is positive when
/// its pairing vector against the fixed basis — extended by the plain
/// coordinates as a tiebreak — has positive leading entry.
fn adapted_key(fixed: &Sublattice<Int>, root: &[Int]) -> Vec<Int> {
    let mut key: Vec<Int> =
        fixed.basis().iter_rows().map(|f| crate::root_datum::dot(f, root)).collect();
    key.extend_from_slice(root);
    key
}

fn is_positive_key(key: &[Int]) -> bool {
    key.iter().find(|x| **x != 0).is_some_and(|x| *x > 0)
}

/// Simple system adapted to the fixed cocharacter space `fixed`.
fn adapted_simple_system(base: &RootDatum, fixed: &Sublattice<Int>) -> Vec<usize> {
    let positives: Vec<usize> = (0..base.num_roots())
        .filter(|&i| is_positive_key(&adapted_key(fixed, base.root(i))))
        .collect();
    let pos_set: std::collections::HashSet<&[Int]> =
        positives.iter().map(|&i| base.root(i)).collect();
    positives
        .iter()
        .copied()
        .filter(|&i| {
            let alpha = base.root(i);
            !positives.iter().any(|&j| {
                if i == j {
                    return false;
                }
                let diff: Vec<Int> =
                    alpha.iter().zip(base.root(j)).map(|(a, b)| a - b).collect();
                pos_set.contains(diff.as_slice())
            })
        })
        .collect()
}

/// Finds the Weyl element carrying one simple system onto another
/// (as sets of roots), by scanning the enumerated group.
fn base_aligning_element(
    w: &WeylGroup,
    base: &RootDatum,
    from: &[Vec<Int>],
    to: &[Vec<Int>],
) -> Option<Mat> {
    let target: BTreeSet<&[Int]> = to.iter().map(Vec::as_slice).collect();
    let _ = base;
    for m in w.elements() {
        let image: BTreeSet<Vec<Int>> = from.iter().map(|r| m.mul_vec(r)).collect();
        if image.len() == target.len()
            && image.iter().all(|r| target.contains(r.as_slice()))
        {
            return Some(m.clone());
        }
    }
    None
}

/// The Tits index of a twisted datum under a decomposition subgroup: the
/// nodes of the canonical pinning whose roots vanish identically on the
/// D-fixed cocharacter space, closed under the star action of D.
pub fn compute_tits_index(
    psi: &TwistedRootDatum,
    d: &Subgroup,
) -> Result<TitsIndex, EmbedError> {
    let base = psi.base();
    let preds = base.predicates();
    if !preds.reduced {
        return Err(EmbedError::RootDatum(RootDatumError::NotReduced));
    }
    if !preds.semisimple {
        return Err(EmbedError::RootDatum(RootDatumError::NotSemisimple));
    }
    if !psi.group().is_subgroup(d) {
        return Err(EmbedError::Action(ActionError::NotASubgroup));
    }
    // Fixed cocharacters: the contragredient action on M∨.
    let duals: Vec<Mat> = d
        .elements
        .iter()
        .map(|&g| psi.matrix(g).inverse().expect("unimodular").transpose())
        .collect();
    let dual_refs: Vec<&Mat> = duals.iter().collect();
    let fixed = fixed_sublattice_of_matrices(base.rank(), &dual_refs);

    // Adapted base and the anisotropic nodes within it.
    let delta_f = adapted_simple_system(base, &fixed);
    let anisotropic: Vec<usize> = delta_f
        .iter()
        .copied()
        .filter(|&i| {
            fixed.basis().iter_rows().all(|f| crate::root_datum::dot(f, base.root(i)) == 0)
        })
        .collect();

    // Carry the result onto the canonical pinning.
    let pinned = psi.pinning()?;
    let diagram = classify(&pinned)?;
    let w = weyl_group(base);
    let from: Vec<Vec<Int>> = delta_f.iter().map(|&i| base.root(i).to_vec()).collect();
    let to: Vec<Vec<Int>> =
        pinned.delta().iter().map(|&i| base.root(i).to_vec()).collect();
    let align = base_aligning_element(&w, base, &from, &to)
        .expect("all simple systems are Weyl-conjugate");
    let canonical_node = |root_idx: usize| -> usize {
        let img = align.mul_vec(base.root(root_idx));
        pinned
            .delta()
            .iter()
            .position(|&k| base.root(k) == img.as_slice())
            .expect("aligned image is a canonical simple root")
    };
    let mut distinguished: BTreeSet<usize> = anisotropic.iter().map(|&i| canonical_node(i)).collect();

    // Close under the star action of the decomposition subgroup.
    let star = psi.star_action()?;
    loop {
        let mut grew = false;
        for &g in &d.elements {
            let perm = &star[g];
            let mapped: Vec<usize> = distinguished.iter().map(|&n| perm[n]).collect();
            for n in mapped {
                grew |= distinguished.insert(n);
            }
        }
        if !grew {
            break;
        }
    }
    Ok(TitsIndex { diagram, distinguished })
}

/// A Galois-fixed W(target)-coset of root-datum isomorphisms, stored by its
/// lexicographically least representative and the induced diagram map.
#[derive(Clone)]
pub struct Orientation {
    pub source: RootDatum,
    pub target: RootDatum,
    /// Canonical coset representative (least matrix in the coset).
    pub rep: Mat,
    /// Node map between the canonical pinnings of source and target.
    pub node_map: Vec<usize>,
}

impl std::fmt::Debug for Orientation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Orientation(node_map={:?})", self.node_map)
    }
}

impl PartialEq for Orientation {
    fn eq(&self, other: &Self) -> bool {
        self.source == other.source && self.target == other.target && self.rep == other.rep
    }
}
impl Eq for Orientation {}

fn matrix_lex_key(m: &Mat) -> Vec<Int> {
    let mut k = Vec::with_capacity(m.rows() * m.cols());
    for i in 0..m.rows() {
        k.extend_from_slice(m.row(i));
    }
    k
}

fn canonical_coset_rep(w_target: &WeylGroup, f: &Mat) -> Mat {
    w_target
        .elements()
        .iter()
        .map(|w| w * f)
        .min_by(|a, b| matrix_lex_key(a).cmp(&matrix_lex_key(b)))
        .expect("Weyl groups are nonempty")
}

fn coset_node_map(
    w_target: &WeylGroup,
    f: &Mat,
    p_source: &PinnedRootDatum,
    p_target: &PinnedRootDatum,
) -> Vec<usize> {
    let from: Vec<Vec<Int>> =
        (0..p_source.num_nodes()).map(|i| f.mul_vec(p_source.simple_root(i))).collect();
    let to: Vec<Vec<Int>> = (0..p_target.num_nodes())
        .map(|i| p_target.simple_root(i).to_vec())
        .collect();
    let align = base_aligning_element(w_target, p_target.base(), &from, &to)
        .expect("the image of a base is a base");
    (0..p_source.num_nodes())
        .map(|i| {
            let img = align.mul_vec(&from[i]);
            to.iter().position(|r| r == &img).expect("aligned image is simple")
        })
        .collect()
}

/// All Γ-fixed orientations between two twisted data of equal split type.
pub fn enumerate_orientations(
    psi: &TwistedRootDatum,
    phi: &TwistedRootDatum,
) -> Result<Vec<Orientation>, EmbedError> {
    let p_psi = psi.pinning()?;
    let p_phi = phi.pinning()?;
    let d_psi = classify(&p_psi)?;
    let d_phi = classify(&p_phi)?;
    if d_psi.type_string() != d_phi.type_string() {
        return Err(EmbedError::TypeMismatch);
    }
    if psi.group().order() != phi.group().order() {
        return Err(EmbedError::TypeMismatch);
    }
    let isoms = crate::root_datum::isomorphisms(psi.base(), phi.base())?;
    let w_phi = weyl_group(phi.base());
    // One representative per W(φ)-coset: cosets are distinguished by their
    // canonical representative.
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for f in &isoms {
        let rep = canonical_coset_rep(&w_phi, &f.map);
        if !seen.insert(matrix_lex_key(&rep)) {
            continue;
        }
        // Γ-fixedness: γ_φ ∘ f ∘ γ_ψ⁻¹ stays in the coset for every γ.
        let f_inv = f.map.inverse().expect("isomorphisms are unimodular");
        let fixed = (0..psi.group().order()).all(|g| {
            let twisted = &(phi.matrix(g) * &f.map)
                * &psi.matrix(g).inverse().expect("unimodular");
            let shift = &twisted * &f_inv;
            w_phi.contains(&shift)
        });
        if fixed {
            let node_map = coset_node_map(&w_phi, &rep, &p_psi, &p_phi);
            out.push(Orientation {
                source: psi.base().clone(),
                target: phi.base().clone(),
                rep,
                node_map,
            });
        }
    }
    out.sort_by(|a, b| matrix_lex_key(&a.rep).cmp(&matrix_lex_key(&b.rep)));
    Ok(out)
}

/// Composition target∘source: an orientation G→Ψ followed by Ψ→G′ gives
/// G→G′.  Well-defined on cosets because Weyl groups transport.
pub fn compose_orientations(u: &Orientation, w: &Orientation) -> Result<Orientation, EmbedError> {
    // u: Ψ → G′, w: G → Ψ.
    if u.source != w.target {
        return Err(EmbedError::CompositionMismatch);
    }
    let rep_raw = &u.rep * &w.rep;
    let w_target = weyl_group(&u.target);
    let rep = canonical_coset_rep(&w_target, &rep_raw);
    let node_map = w.node_map.iter().map(|&i| u.node_map[i]).collect();
    Ok(Orientation { source: w.source.clone(), target: u.target.clone(), rep, node_map })
}

/// The inverse orientation along u ↦ u⁻¹.
pub fn invert_orientation(u: &Orientation) -> Orientation {
    let rep_raw = u.rep.inverse().expect("orientation representatives are unimodular");
    let w_source = weyl_group(&u.source);
    let rep = canonical_coset_rep(&w_source, &rep_raw);
    let mut node_map = vec![0; u.node_map.len()];
    for (i, &j) in u.node_map.iter().enumerate() {
        node_map[j] = i;
    }
    Orientation { source: u.target.clone(), target: u.source.clone(), rep, node_map }
}

/// The identity orientation of a twisted datum.
pub fn identity_orientation(psi: &TwistedRootDatum) -> Result<Orientation, EmbedError> {
    let p = psi.pinning()?;
    let w = weyl_group(psi.base());
    let rep = canonical_coset_rep(&w, &Mat::identity(psi.base().rank()));
    let node_map = (0..p.num_nodes()).collect();
    Ok(Orientation { source: psi.base().clone(), target: psi.base().clone(), rep, node_map })
}

/// Outcome of the local criterion, with the mapped index as witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalDecision {
    pub holds: bool,
    pub mapped_index: BTreeSet<usize>,
}

/// The local criterion: points exist iff u(Δ°(Ψ)) ⊇ Δ°(G).
pub fn decide_local(
    psi_index: &TitsIndex,
    g_index: &TitsIndex,
    u: &Orientation,
) -> Result<LocalDecision, EmbedError> {
    if psi_index.diagram.num_nodes != g_index.diagram.num_nodes
        || u.node_map.len() != psi_index.diagram.num_nodes
    {
        return Err(EmbedError::TypeMismatch);
    }
    let mapped: BTreeSet<usize> =
        psi_index.distinguished.iter().map(|&n| u.node_map[n]).collect();
    let holds = g_index.distinguished.is_subset(&mapped);
    Ok(LocalDecision { holds, mapped_index: mapped })
}

/// Transports an orientation along one of the derived-datum operations.
/// The diagram map is unchanged up to the canonical node correspondences of
/// the derived pinnings.
pub fn transport_orientation(
    u: &Orientation,
    psi: &TwistedRootDatum,
    phi: &TwistedRootDatum,
    op: DeriveOp,
) -> Result<Orientation, EmbedError> {
    assert!(matches!(op, DeriveOp::Ad | DeriveOp::Sc | DeriveOp::Der | DeriveOp::Ss));
    let psi_d = psi.derive_twist(op);
    let phi_d = phi.derive_twist(op);
    let c_psi = node_correspondence(psi.base(), op)?;
    let c_phi = node_correspondence(phi.base(), op)?;
    let wanted: Vec<usize> = {
        // node in derived ψ → node in ψ → u → node in φ → node in derived φ
        let mut inv_c_psi = vec![0; c_psi.len()];
        for (i, &j) in c_psi.iter().enumerate() {
            inv_c_psi[j] = i;
        }
        (0..c_psi.len()).map(|nd| c_phi[u.node_map[inv_c_psi[nd]]]).collect()
    };
    let all = enumerate_orientations(&psi_d, &phi_d)?;
    all.into_iter()
        .find(|o| o.node_map == wanted)
        .ok_or(EmbedError::NoOrientation)
}

/// Node correspondence between the canonical pinning of a datum and the
/// canonical pinning of its derived datum, through the root bijection.
fn node_correspondence(base: &RootDatum, op: DeriveOp) -> Result<Vec<usize>, EmbedError> {
    let bij = base.derive_root_bijection(op);
    let derived = base.derive(op);
    let p = crate::root_datum::simple_system(base);
    let p_d = crate::root_datum::simple_system(&derived);
    let w_d = weyl_group(&derived);
    let from: Vec<Vec<Int>> =
        p.delta().iter().map(|&i| derived.root(bij[i]).to_vec()).collect();
    let to: Vec<Vec<Int>> =
        p_d.delta().iter().map(|&i| derived.root(i).to_vec()).collect();
    let align = base_aligning_element(&w_d, &derived, &from, &to)
        .expect("the image of a base is a base");
    Ok((0..from.len())
        .map(|i| {
            let img = align.mul_vec(&from[i]);
            to.iter().position(|r| r == &img).expect("aligned image is simple")
        })
        .collect())
}

/// A global embedding scenario: the torus datum, the global shadow of the
/// receiving group (sharing the split type), and per-place group indices
/// attached to decomposition subgroups.
#[derive(Clone)]
pub struct GlobalScenario {
    pub psi: TwistedRootDatum,
    pub g_global: TwistedRootDatum,
    pub per_place: Vec<(PlaceModel, TitsIndex)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GlobalVerdict {
    /// One orientation passes everywhere.
    GlobalOk,
    /// Every place passes for some orientation, but no single one works.
    LocalOnly,
    /// Some place has no passing orientation.
    LocalFail,
}

impl GlobalVerdict {
    pub fn label(self) -> &'static str {
        match self {
            GlobalVerdict::GlobalOk => "GLOBAL_OK",
            GlobalVerdict::LocalOnly => "LOCAL_ONLY",
            GlobalVerdict::LocalFail => "LOCAL_FAIL",
        }
    }
}

/// The per-place × per-orientation truth table and the global verdict.
#[derive(Debug, Clone)]
pub struct OrientationTable {
    pub orientations: Vec<Orientation>,
    pub psi_indices: Vec<TitsIndex>,
    /// table[place][orientation]
    pub table: Vec<Vec<bool>>,
    pub per_place_exists: Vec<bool>,
    pub verdict: GlobalVerdict,
}

/// Evaluates the local criterion at every place and orientation.
pub fn decide_all_orientations(scenario: &GlobalScenario) -> Result<OrientationTable, EmbedError> {
    let orientations = enumerate_orientations(&scenario.psi, &scenario.g_global)?;
    let mut psi_indices = Vec::new();
    let mut table = Vec::new();
    for (place, g_index) in &scenario.per_place {
        let psi_index = compute_tits_index(&scenario.psi, &place.decomposition)?;
        let row: Vec<bool> = orientations
            .iter()
            .map(|u| decide_local(&psi_index, g_index, u).map(|d| d.holds))
            .collect::<Result<_, _>>()?;
        psi_indices.push(psi_index);
        table.push(row);
    }
    let per_place_exists: Vec<bool> =
        table.iter().map(|row| row.iter().any(|&b| b)).collect();
    let global_ok = (0..orientations.len())
        .any(|j| table.iter().all(|row| row[j]));
    let verdict = if global_ok && !table.is_empty() {
        GlobalVerdict::GlobalOk
    } else if table.is_empty() {
        GlobalVerdict::GlobalOk
    } else if per_place_exists.iter().all(|&b| b) {
        GlobalVerdict::LocalOnly
    } else {
        GlobalVerdict::LocalFail
    };
    if verdict == GlobalVerdict::LocalOnly {
        debug_assert!(
            orientations.len() >= 2,
            "a local-only verdict needs at least two orientations"
        );
    }
    Ok(OrientationTable { orientations, psi_indices, table, per_place_exists, verdict })
}

/// The place list: explicit decomposition data or the Chebotarev-saturated
/// model (every cyclic subgroup occurs as a decomposition group).
#[derive(Debug, Clone)]
pub enum PlaceSet {
    Explicit(Vec<PlaceModel>),
    Chebotarev,
}

/// A certificate implying that local solvability everywhere entails global
/// solvability for the oriented functor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certificate {
    /// Every diagram component is of type C.
    TypeC,
    /// The torus is anisotropic at the named place.
    AnisotropicAt { place: String },
    /// The Galois image contains the Weyl group; the witness is a cyclic
    /// subgroup acting without fixed cocharacters (a Coxeter class).
    Generic { witness: Option<String> },
    None,
}

/// Certificate search for a twisted datum over the given place set.
pub fn lgp_certificate(
    psi: &TwistedRootDatum,
    places: &PlaceSet,
) -> Result<Certificate, EmbedError> {
    let pinned = psi.pinning()?;
    let diagram = classify(&pinned)?;
    if diagram.all_type_c() {
        return Ok(Certificate::TypeC);
    }
    let lattice = psi.character_lattice();
    let resolved: Vec<PlaceModel> = match places {
        PlaceSet::Explicit(v) => v.clone(),
        PlaceSet::Chebotarev => psi
            .group()
            .cyclic_subgroup_classes()
            .into_iter()
            .enumerate()
            .map(|(i, s)| PlaceModel::new(format!("cyc{i}"), s))
            .collect(),
    };
    for place in &resolved {
        if crate::galois::is_anisotropic(&lattice, &place.decomposition)? {
            return Ok(Certificate::AnisotropicAt { place: place.label.clone() });
        }
    }
    if psi.is_generic()? {
        // A Coxeter-class element acts with zero fixed cocharacters; find a
        // group element realizing one.
        let witness = (0..psi.group().order()).find_map(|g| {
            let mats = [psi.matrix(g)];
            let fixed = fixed_sublattice_of_matrices(psi.base().rank(), &mats);
            fixed.is_zero().then(|| format!("cyclic<{g}>"))
        });
        return Ok(Certificate::Generic { witness });
    }
    Ok(Certificate::None)
}

/// The obstruction group of the oriented local-global problem: the
/// Shafarevich kernel of H¹ of the character lattice of the simply
/// connected datum over the given places.  A trivial output certifies the
/// local-global principle for the oriented functor.
pub fn obstruction_group(
    psi: &TwistedRootDatum,
    places: &PlaceSet,
    cfg: &CohomologyConfig,
) -> Result<CohomologyGroup, EmbedError> {
    if !psi.base().predicates().reduced {
        return Err(EmbedError::RootDatum(RootDatumError::NotReduced));
    }
    let sc = psi.simply_connected_twist();
    let m = sc.character_lattice();
    let out = match places {
        PlaceSet::Explicit(v) => sha(1, &m, v, cfg)?,
        PlaceSet::Chebotarev => sha_cyclic(1, &m, cfg)?,
    };
    Ok(out)
}

/// Convenience: the diagram of a split catalog type, for building indices.
pub fn diagram_of(pinned: &PinnedRootDatum) -> Result<DynkinDiagram, EmbedError> {
    Ok(classify(pinned)?)
}

/// Convenience: the diagram straight from a Cartan matrix.
pub fn diagram_of_cartan(p: &PinnedRootDatum) -> Result<DynkinDiagram, EmbedError> {
    Ok(diagram_from_cartan(&cartan_matrix(p))?)
}
