//! Scenario schema and dispatch.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use torem::algebra_model::{
    self, AlgebraError, AlgebraKind, EtaleInvolution, LocalAlgebraData, TauType,
};
use torem::cohomology::{
    h, sha, sha_cyclic, tate_cyclic_oracle, CohomologyConfig, CohomologyError, PlaceModel,
};
use torem::embed::{
    compute_tits_index, decide_all_orientations, decide_local, enumerate_orientations,
    lgp_certificate, obstruction_group, Certificate, EmbedError, GlobalScenario, PlaceSet,
    TitsIndex,
};
use torem::galois::{groups, ActionError, FiniteGroup, GammaLattice, GammaSet, GroupError, Subgroup, TwistedRootDatum};
use torem::lattice::AbelianInvariants;
use torem::root_datum::{
    aut_group, classify, coxeter_element, simple_system, standard, weyl_group, CatalogForm,
    RootDatumError,
};
use torem::{Int, Mat};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    /// Schema or input validation failures — exit code 2.
    #[error("validation: {0}")]
    Validation(String),
    /// Resource-cap failures — exit code 3.
    #[error("resource: {0}")]
    Resource(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Validation(_) => 2,
            RunError::Resource(_) => 3,
            RunError::Io(_) => 2,
        }
    }
}

impl From<CohomologyError> for RunError {
    fn from(e: CohomologyError) -> Self {
        match e {
            CohomologyError::CostCapExceeded { .. } => RunError::Resource(e.to_string()),
            other => RunError::Validation(other.to_string()),
        }
    }
}

impl From<EmbedError> for RunError {
    fn from(e: EmbedError) -> Self {
        match e {
            EmbedError::Cohomology(c) => c.into(),
            other => RunError::Validation(other.to_string()),
        }
    }
}

impl From<AlgebraError> for RunError {
    fn from(e: AlgebraError) -> Self {
        match e {
            AlgebraError::Embed(inner) => inner.into(),
            other => RunError::Validation(other.to_string()),
        }
    }
}

impl From<ActionError> for RunError {
    fn from(e: ActionError) -> Self {
        RunError::Validation(e.to_string())
    }
}

impl From<GroupError> for RunError {
    fn from(e: GroupError) -> Self {
        match e {
            GroupError::OrderCapExceeded { .. } => RunError::Resource(e.to_string()),
            other => RunError::Validation(other.to_string()),
        }
    }
}

impl From<RootDatumError> for RunError {
    fn from(e: RootDatumError) -> Self {
        RunError::Validation(e.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlacesMode {
    Explicit,
    Chebotarev,
}

#[derive(Debug, Clone)]
pub struct RunOptions {
    pub group_cap: usize,
    pub places_mode: PlacesMode,
    pub seed: u64,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions { group_cap: 10_000, places_mode: PlacesMode::Chebotarev, seed: 0 }
    }
}

/// Top level of a scenario file.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub version: u32,
    #[serde(flatten)]
    pub scenario: Scenario,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", content = "payload", rename_all = "snake_case")]
#[serde(deny_unknown_fields)]
pub enum Scenario {
    RootDatumQuery(RootDatumQuery),
    CohomologyQuery(CohomologyQuery),
    EmbeddingQuery(EmbeddingQuery),
    AlgebraQuery(AlgebraQuery),
    /// The scripted four-place local-global failure reproduction.
    LgpFailureDemo {},
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RootDatumQuery {
    #[serde(rename = "type")]
    pub type_name: String,
    #[serde(default = "default_form")]
    pub form: String,
    pub op: String,
}

fn default_form() -> String {
    "sc".to_string()
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CohomologyQuery {
    pub group: String,
    pub module: ModuleSpec,
    pub op: String,
    #[serde(default)]
    pub degree: Option<u8>,
    #[serde(default)]
    pub places: Option<Vec<DecompSpec>>,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ModuleSpec {
    /// "Z_trivial", "Z(-1)", "regular", "Z/<m>_trivial"
    Named { name: String },
    Explicit {
        rank: usize,
        generators: Vec<Vec<Vec<Int>>>,
        #[serde(default)]
        torsion: Option<Vec<Int>>,
    },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum DecompSpec {
    Named(String),
    Generators { label: String, generators: Vec<usize> },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EmbeddingQuery {
    #[serde(rename = "type")]
    pub type_name: String,
    #[serde(default = "default_form")]
    pub form: String,
    pub psi_action: ActionSpec,
    #[serde(default)]
    pub g_action: Option<ActionSpec>,
    #[serde(flatten)]
    pub mode: EmbedMode,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum EmbedMode {
    DecideLocal {
        psi_place: DecompSpec,
        g_index: Vec<usize>,
    },
    DecideAll {
        places: Vec<PlaceSpec>,
    },
    Certificate {
        #[serde(default)]
        places: Option<Vec<DecompSpec>>,
    },
    Obstruction {
        #[serde(default)]
        places: Option<Vec<DecompSpec>>,
    },
    Orientations {},
}

#[derive(Debug, Deserialize)]
pub struct PlaceSpec {
    pub label: String,
    pub decomposition: DecompSpec,
    pub g_index: Vec<usize>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum ActionSpec {
    Named(String),
    Matrices { matrices: Vec<Vec<Vec<Int>>> },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraQuery {
    pub op: String,
    pub tau: String,
    #[serde(default)]
    pub n: Option<usize>,
    #[serde(default)]
    pub etale: Option<EtaleSpec>,
    #[serde(default)]
    pub place: Option<DecompSpec>,
    #[serde(default)]
    pub algebra_kind: Option<String>,
    #[serde(default)]
    pub locals: Option<Vec<LocalSpec>>,
    #[serde(default)]
    pub instances: Option<usize>,
}

#[derive(Debug, Deserialize)]
pub struct EtaleSpec {
    pub points: usize,
    pub sigma: Vec<usize>,
    #[serde(default)]
    pub generators: Vec<Vec<usize>>,
    #[serde(default)]
    pub grading: Option<Vec<u8>>,
}

#[derive(Debug, Deserialize)]
pub struct LocalSpec {
    pub label: String,
    pub decomposition: DecompSpec,
    pub algebra_split: bool,
    pub discriminant_split: bool,
}

/// The machine-readable output of one run.
#[derive(Debug, Serialize)]
pub struct Report {
    pub version: u32,
    pub kind: String,
    pub result: Value,
}

fn invariants_json(inv: &AbelianInvariants<Int>) -> Value {
    json!({ "free_rank": inv.free_rank, "torsion": inv.torsion, "display": inv.to_string() })
}

fn resolve_subgroup(g: &FiniteGroup, spec: &DecompSpec) -> Result<(String, Subgroup), RunError> {
    match spec {
        DecompSpec::Named(name) => match name.as_str() {
            "full" => Ok(("full".into(), g.full_subgroup())),
            "trivial" => Ok(("trivial".into(), g.trivial_subgroup())),
            other => Err(RunError::Validation(format!(
                "places/decomposition: unknown named subgroup '{other}' (use \"full\", \"trivial\", or generators)"
            ))),
        },
        DecompSpec::Generators { label, generators } => {
            for &i in generators {
                if i >= g.order() {
                    return Err(RunError::Validation(format!(
                        "places/decomposition: generator index {i} out of range for a group of order {}",
                        g.order()
                    )));
                }
            }
            Ok((label.clone(), g.subgroup(generators)))
        }
    }
}

fn build_group(name: &str, cap: usize) -> Result<FiniteGroup, RunError> {
    let g = groups::by_name(name)
        .ok_or_else(|| RunError::Validation(format!("group: unknown catalog name '{name}'")))?;
    if g.order() > cap {
        return Err(RunError::Resource(format!(
            "group order {} exceeds the cap {cap}",
            g.order()
        )));
    }
    Ok(g)
}

fn build_module(g: &FiniteGroup, spec: &ModuleSpec) -> Result<GammaLattice, RunError> {
    match spec {
        ModuleSpec::Named { name } => match name.as_str() {
            "Z_trivial" => Ok(GammaLattice::trivial(g.clone(), 1)),
            "Z(-1)" => {
                let gens = vec![Mat::from_i64(1, 1, &[-1]); g.generator_indices().len()];
                GammaLattice::new(g.clone(), 1, gens)
                    .map_err(|e| RunError::Validation(format!("module: {e}")))
            }
            "regular" => Ok(torem::galois::induced_lattice(&GammaSet::regular(g))),
            other => {
                if let Some(m) = other.strip_prefix("Z/").and_then(|s| s.strip_suffix("_trivial"))
                {
                    let m: Int = m
                        .parse()
                        .map_err(|_| RunError::Validation(format!("module: bad modulus in '{other}'")))?;
                    return Ok(GammaLattice::finite_cyclic_trivial(g.clone(), m));
                }
                Err(RunError::Validation(format!("module: unknown named module '{other}'")))
            }
        },
        ModuleSpec::Explicit { rank, generators, torsion } => {
            let mats: Vec<Mat> = generators
                .iter()
                .map(|rows| {
                    if rows.len() != *rank || rows.iter().any(|r| r.len() != *rank) {
                        return Err(RunError::Validation(
                            "module: generator matrix shape mismatch".into(),
                        ));
                    }
                    Ok(Mat::from_rows(rows.clone()))
                })
                .collect::<Result<_, _>>()?;
            match torsion {
                None => Ok(GammaLattice::new(g.clone(), *rank, mats)?),
                Some(t) => Ok(GammaLattice::with_torsion(g.clone(), *rank, mats, t.clone())?),
            }
        }
    }
}

fn build_twist(
    base: &torem::root_datum::RootDatum,
    spec: &ActionSpec,
    cap: usize,
) -> Result<TwistedRootDatum, RunError> {
    match spec {
        ActionSpec::Named(name) => match name.as_str() {
            "split" => Ok(TwistedRootDatum::split(base.clone(), groups::cyclic(1))),
            "minus_one" => {
                let m = Mat::from_fn(base.rank(), base.rank(), |i, j| if i == j { -1 } else { 0 });
                Ok(TwistedRootDatum::new(base.clone(), groups::cyclic(2), vec![m])?)
            }
            other => Err(RunError::Validation(format!(
                "psi_action: unknown named action '{other}' (use \"split\", \"minus_one\", or matrices)"
            ))),
        },
        ActionSpec::Matrices { matrices } => {
            let mats: Vec<Mat> = matrices.iter().map(|rows| Mat::from_rows(rows.clone())).collect();
            torem::sampling::twisted_from_matrices(base, mats, cap).ok_or_else(|| {
                RunError::Resource("psi_action: matrix closure exceeds the group cap".into())
            })
        }
    }
}

fn catalog_pinned(name: &str, form: &str) -> Result<torem::root_datum::PinnedRootDatum, RunError> {
    let form = match form {
        "sc" => CatalogForm::SimplyConnected,
        "ad" => CatalogForm::Adjoint,
        other => {
            return Err(RunError::Validation(format!(
                "form: expected \"sc\" or \"ad\", got '{other}'"
            )))
        }
    };
    standard(name, form)
        .ok_or_else(|| RunError::Validation(format!("type: unknown catalog type '{name}'")))
}

fn run_root_datum(q: &RootDatumQuery) -> Result<Value, RunError> {
    let pinned = catalog_pinned(&q.type_name, &q.form)?;
    let base = pinned.base();
    match q.op.as_str() {
        "weyl_order" => Ok(json!({ "weyl_order": weyl_group(base).order() })),
        "aut_structure" => {
            let aut = aut_group(&pinned)?;
            Ok(json!({
                "weyl_order": aut.weyl.order(),
                "diagram_autos": aut.diagram_autos.len(),
                "aut_order": aut.order(),
            }))
        }
        "predicates" => {
            let p = base.predicates();
            Ok(json!({
                "reduced": p.reduced,
                "semisimple": p.semisimple,
                "adjoint": p.adjoint,
                "simply_connected": p.simply_connected,
            }))
        }
        "classify" => {
            let d = classify(&pinned)?;
            Ok(json!({ "type": d.type_string(), "nodes": d.num_nodes }))
        }
        "coxeter_order" => {
            let c = coxeter_element(&pinned);
            let mut order = 1usize;
            let mut m = c.clone();
            while !m.is_identity() {
                m = &m * &c;
                order += 1;
            }
            Ok(json!({ "coxeter_order": order }))
        }
        "derive_check" => {
            let mut out = serde_json::Map::new();
            for op in torem::root_datum::DeriveOp::ALL {
                let derived = base.derive(op);
                out.insert(
                    op.name().to_string(),
                    json!({
                        "rank": derived.rank(),
                        "roots": derived.num_roots(),
                        "valid": derived.is_valid(),
                    }),
                );
            }
            Ok(Value::Object(out))
        }
        other => Err(RunError::Validation(format!("op: unknown root_datum op '{other}'"))),
    }
}

fn run_cohomology(q: &CohomologyQuery, opts: &RunOptions) -> Result<Value, RunError> {
    let g = build_group(&q.group, opts.group_cap)?;
    let m = build_module(&g, &q.module)?;
    let cfg = CohomologyConfig::default();
    let need_degree = || {
        q.degree.ok_or_else(|| RunError::Validation("degree: required for this op".into()))
    };
    match q.op.as_str() {
        "h" => {
            let out = h(need_degree()?, &m, &cfg)?;
            Ok(json!({ "invariants": invariants_json(&out.invariants) }))
        }
        "tate_oracle" => {
            let out = tate_cyclic_oracle(&m, need_degree()?)?;
            Ok(json!({ "invariants": invariants_json(&out) }))
        }
        "sha_cyclic" => {
            let out = sha_cyclic(need_degree()?, &m, &cfg)?;
            Ok(json!({ "invariants": invariants_json(&out.invariants) }))
        }
        "sha" => {
            let specs = q
                .places
                .as_ref()
                .ok_or_else(|| RunError::Validation("places: required for sha".into()))?;
            let places: Vec<PlaceModel> = specs
                .iter()
                .map(|s| {
                    let (label, sub) = resolve_subgroup(&g, s)?;
                    Ok(PlaceModel::new(label, sub))
                })
                .collect::<Result<_, RunError>>()?;
            let out = sha(need_degree()?, &m, &places, &cfg)?;
            Ok(json!({ "invariants": invariants_json(&out.invariants) }))
        }
        other => Err(RunError::Validation(format!("op: unknown cohomology op '{other}'"))),
    }
}

fn tits_index_json(idx: &TitsIndex) -> Value {
    json!({
        "type": idx.diagram.type_string(),
        "distinguished": idx.distinguished.iter().copied().collect::<Vec<usize>>(),
    })
}

fn run_embedding(q: &EmbeddingQuery, opts: &RunOptions) -> Result<Value, RunError> {
    let pinned = catalog_pinned(&q.type_name, &q.form)?;
    let base = pinned.base().clone();
    let psi = build_twist(&base, &q.psi_action, opts.group_cap)?;
    let g_twist = match &q.g_action {
        Some(spec) => build_twist(&base, spec, opts.group_cap)?,
        None => TwistedRootDatum::split(base.clone(), psi.group().clone()),
    };
    let diagram = classify(&simple_system(&base))?;

    match &q.mode {
        EmbedMode::Orientations {} => {
            let ors = enumerate_orientations(&psi, &g_twist)?;
            Ok(json!({
                "count": ors.len(),
                "node_maps": ors.iter().map(|o| o.node_map.clone()).collect::<Vec<_>>(),
            }))
        }
        EmbedMode::DecideLocal { psi_place, g_index } => {
            let (_, sub) = resolve_subgroup(psi.group(), psi_place)?;
            let psi_index = compute_tits_index(&psi, &sub)?;
            let g_idx = TitsIndex::new(diagram.clone(), g_index.iter().copied().collect());
            let ors = enumerate_orientations(&psi, &g_twist)?;
            let per_orientation: Vec<Value> = ors
                .iter()
                .map(|u| {
                    let d = decide_local(&psi_index, &g_idx, u)?;
                    Ok(json!({
                        "node_map": u.node_map,
                        "holds": d.holds,
                        "witness": d.mapped_index.iter().copied().collect::<Vec<usize>>(),
                    }))
                })
                .collect::<Result<_, RunError>>()?;
            let any = per_orientation
                .iter()
                .any(|v| v["holds"].as_bool().unwrap_or(false));
            Ok(json!({
                "psi_index": tits_index_json(&psi_index),
                "g_index": g_index,
                "orientations": per_orientation,
                "exists": any,
            }))
        }
        EmbedMode::DecideAll { places } => {
            let per_place: Vec<(PlaceModel, TitsIndex)> = places
                .iter()
                .map(|p| {
                    let (_, sub) = resolve_subgroup(psi.group(), &p.decomposition)?;
                    Ok((
                        PlaceModel::new(p.label.clone(), sub),
                        TitsIndex::new(diagram.clone(), p.g_index.iter().copied().collect()),
                    ))
                })
                .collect::<Result<_, RunError>>()?;
            let scenario = GlobalScenario { psi, g_global: g_twist, per_place };
            let out = decide_all_orientations(&scenario)?;
            Ok(json!({
                "orientations": out.orientations.iter().map(|o| o.node_map.clone()).collect::<Vec<_>>(),
                "psi_indices": out.psi_indices.iter().map(tits_index_json).collect::<Vec<_>>(),
                "table": out.table,
                "per_place_exists": out.per_place_exists,
                "verdict": out.verdict.label(),
            }))
        }
        EmbedMode::Certificate { places } => {
            let ps = resolve_place_set(&psi, places.as_deref(), opts)?;
            let cert = lgp_certificate(&psi, &ps)?;
            Ok(json!({ "certificate": certificate_json(&cert) }))
        }
        EmbedMode::Obstruction { places } => {
            let ps = resolve_place_set(&psi, places.as_deref(), opts)?;
            let out = obstruction_group(&psi, &ps, &CohomologyConfig::default())?;
            Ok(json!({ "invariants": invariants_json(&out.invariants), "trivial": out.is_trivial() }))
        }
    }
}

fn resolve_place_set(
    psi: &TwistedRootDatum,
    specs: Option<&[DecompSpec]>,
    opts: &RunOptions,
) -> Result<PlaceSet, RunError> {
    match specs {
        Some(list) => {
            let places: Vec<PlaceModel> = list
                .iter()
                .map(|s| {
                    let (label, sub) = resolve_subgroup(psi.group(), s)?;
                    Ok(PlaceModel::new(label, sub))
                })
                .collect::<Result<_, RunError>>()?;
            Ok(PlaceSet::Explicit(places))
        }
        None => match opts.places_mode {
            PlacesMode::Chebotarev => Ok(PlaceSet::Chebotarev),
            PlacesMode::Explicit => Ok(PlaceSet::Explicit(Vec::new())),
        },
    }
}

fn certificate_json(c: &Certificate) -> Value {
    match c {
        Certificate::TypeC => json!({ "kind": "TYPE_C" }),
        Certificate::AnisotropicAt { place } => {
            json!({ "kind": "ANISOTROPIC_AT", "place": place })
        }
        Certificate::Generic { witness } => json!({ "kind": "GENERIC", "witness": witness }),
        Certificate::None => json!({ "kind": "NONE" }),
    }
}

fn parse_tau(s: &str) -> Result<TauType, RunError> {
    match s {
        "orthogonal" => Ok(TauType::Orthogonal),
        "symplectic" => Ok(TauType::Symplectic),
        "unitary" => Ok(TauType::Unitary),
        other => Err(RunError::Validation(format!("tau: unknown involution type '{other}'"))),
    }
}

fn build_etale(spec: &EtaleSpec, tau: TauType, cap: usize) -> Result<EtaleInvolution, RunError> {
    let group = FiniteGroup::with_cap(spec.points, spec.generators.clone(), cap)?;
    let gen_perms: Vec<Vec<usize>> =
        group.generator_indices().iter().map(|&g| group.perm(g).clone()).collect();
    let points = GammaSet::new(group, spec.points, gen_perms)?;
    Ok(EtaleInvolution::new(points, spec.sigma.clone(), tau, spec.grading.clone())?)
}

fn run_algebra(q: &AlgebraQuery, opts: &RunOptions) -> Result<Value, RunError> {
    let tau = parse_tau(&q.tau)?;
    let need_n =
        || q.n.ok_or_else(|| RunError::Validation("n: required for this op".into()));
    let need_etale = |tau| -> Result<EtaleInvolution, RunError> {
        let spec = q
            .etale
            .as_ref()
            .ok_or_else(|| RunError::Validation("etale: required for this op".into()))?;
        build_etale(spec, tau, opts.group_cap)
    };
    match q.op.as_str() {
        "split_model" => {
            let model = algebra_model::split_model(tau, need_n()?)?;
            let b: Vec<Vec<Int>> = (0..model.b.rows()).map(|i| model.b.row_vec(i)).collect();
            Ok(json!({ "degree": model.degree, "b": b, "exchange": model.exchange }))
        }
        "split_root_datum" => {
            let p = algebra_model::split_root_datum(tau, need_n()?)?;
            Ok(json!({
                "rank": p.base().rank(),
                "roots": p.base().num_roots(),
                "type": algebra_model::classify_split(&p)?,
            }))
        }
        "torus_rank" => {
            let e = need_etale(tau)?;
            Ok(json!({ "rank": algebra_model::torus_lattice(&e).rank() }))
        }
        "square_class_check" => {
            let e = need_etale(tau)?;
            let spec = q
                .place
                .as_ref()
                .ok_or_else(|| RunError::Validation("place: required".into()))?;
            let (label, sub) = resolve_subgroup(e.group(), spec)?;
            let agree = algebra_model::square_classes_agree_at(&e, &sub)?;
            Ok(json!({ "place": label, "agree": agree }))
        }
        "sc_presentation" => {
            let e = need_etale(tau)?;
            let report = algebra_model::verify_sc_presentation(&e)?;
            Ok(json!({
                "rank_p": report.rank_p,
                "rank_j_e": report.rank_j_e,
                "rank_j_f": report.rank_j_f,
                "exact_sequence": report.exact_sequence,
                "iso_found": report.iso_found,
                "parity_ok": report.parity_ok,
                "passed": report.passed(),
            }))
        }
        "even_orthogonal_conditions" => {
            let e = need_etale(tau)?;
            let kind = match q.algebra_kind.as_deref() {
                Some("matrix_over_field") => AlgebraKind::MatrixOverField,
                Some("odd_over_quaternion") => AlgebraKind::OddOverQuaternion,
                Some("even_over_quaternion") => AlgebraKind::EvenOverQuaternion,
                other => {
                    return Err(RunError::Validation(format!(
                        "algebra_kind: expected matrix_over_field/odd_over_quaternion/even_over_quaternion, got {other:?}"
                    )))
                }
            };
            let locals: Vec<LocalAlgebraData> = q
                .locals
                .as_deref()
                .unwrap_or(&[])
                .iter()
                .map(|l| {
                    let (_, sub) = resolve_subgroup(e.group(), &l.decomposition)?;
                    Ok(LocalAlgebraData {
                        place: PlaceModel::new(l.label.clone(), sub),
                        algebra_split: l.algebra_split,
                        discriminant_split: l.discriminant_split,
                    })
                })
                .collect::<Result<_, RunError>>()?;
            let ok = algebra_model::even_orthogonal_local_conditions(kind, &locals, &e)?;
            Ok(json!({ "holds": ok }))
        }
        "second_kind_orientation" => {
            let e = need_etale(tau)?;
            let psi = algebra_model::build_twisted_datum(&e)?;
            let g = TwistedRootDatum::split(psi.base().clone(), e.group().clone());
            let both = algebra_model::second_kind_orientations(&e, &g)?;
            let distinguished = algebra_model::second_kind_orientation(&e, &g)?;
            Ok(json!({
                "orientations": both.len(),
                "zetas": both.iter().map(|(_, z)| *z).collect::<Vec<Int>>(),
                "distinguished_node_map": distinguished.node_map,
            }))
        }
        "random_consistency_sweep" => {
            // Seeded sweep: the square-class hypothesis at a cyclic place
            // forces a trivial obstruction group.
            let instances = q.instances.unwrap_or(10);
            let mut rng = torem::sampling::rng(opts.seed);
            let cfg = CohomologyConfig::default();
            let mut checked = 0usize;
            let mut hypothesis_hits = 0usize;
            for _ in 0..instances {
                let e = match tau {
                    TauType::Orthogonal => torem::sampling::random_odd_orthogonal(&mut rng, 4, 12),
                    TauType::Symplectic => torem::sampling::random_symplectic(&mut rng, 4, 12),
                    TauType::Unitary => {
                        return Err(RunError::Validation(
                            "random_consistency_sweep: unitary sweeps are not defined".into(),
                        ))
                    }
                };
                let psi = algebra_model::build_twisted_datum(&e)?;
                let obstruction = obstruction_group(&psi, &PlaceSet::Chebotarev, &cfg)?;
                checked += 1;
                let hyp = match tau {
                    TauType::Orthogonal => e
                        .group()
                        .cyclic_subgroup_classes()
                        .iter()
                        .any(|s| algebra_model::square_classes_agree_at(&e, s).unwrap_or(false)),
                    _ => true,
                };
                if hyp {
                    hypothesis_hits += 1;
                    if !obstruction.is_trivial() {
                        return Ok(json!({
                            "checked": checked,
                            "violations": 1,
                            "ok": false,
                        }));
                    }
                }
            }
            Ok(json!({ "checked": checked, "hypothesis_hits": hypothesis_hits, "violations": 0, "ok": true }))
        }
        other => Err(RunError::Validation(format!("op: unknown algebra op '{other}'"))),
    }
}

pub fn run_scenario(file: &ScenarioFile, opts: &RunOptions) -> Result<Report, RunError> {
    if file.version != SCHEMA_VERSION {
        return Err(RunError::Validation(format!(
            "version: expected {SCHEMA_VERSION}, got {}",
            file.version
        )));
    }
    let (kind, result) = match &file.scenario {
        Scenario::RootDatumQuery(q) => ("root_datum_query", run_root_datum(q)?),
        Scenario::CohomologyQuery(q) => ("cohomology_query", run_cohomology(q, opts)?),
        Scenario::EmbeddingQuery(q) => ("embedding_query", run_embedding(q, opts)?),
        Scenario::AlgebraQuery(q) => ("algebra_query", run_algebra(q, opts)?),
        Scenario::LgpFailureDemo {} => {
            ("lgp_failure_demo", crate::demo::run_failure_demo()?.to_json())
        }
    };
    Ok(Report { version: SCHEMA_VERSION, kind: kind.to_string(), result })
}

pub fn run_str(content: &str, opts: &RunOptions) -> Result<Report, RunError> {
    let file: ScenarioFile = serde_json::from_str(content)
        .map_err(|e| RunError::Validation(format!("schema: {e}")))?;
    run_scenario(&file, opts)
}
