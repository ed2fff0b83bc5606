//! The scripted four-place local-global failure: a rank-12 étale algebra
//! with exchange involution whose torus datum is an inner twist of split
//! D6, against a group whose Tits indices at two pairs of places pick
//! opposite fork nodes.  Every place admits an embedding for some
//! orientation, the two orientations succeed at complementary places, and
//! no global orientation works.

use serde_json::{json, Value};

use torem::algebra_model::{build_twisted_datum, EtaleInvolution, TauType};
use torem::cohomology::PlaceModel;
use torem::embed::{
    compute_tits_index, decide_all_orientations, GlobalScenario, GlobalVerdict, TitsIndex,
};
use torem::galois::{groups, GammaSet, TwistedRootDatum};
use torem::root_datum::classify;

use crate::scenario::RunError;

#[derive(Debug)]
pub struct FailureDemoReport {
    pub per_place_existence: Vec<bool>,
    /// verdicts[orientation][place]
    pub orientation_verdicts: Vec<Vec<bool>>,
    pub verdict: GlobalVerdict,
    pub psi_index: Vec<usize>,
    pub g_indices: Vec<Vec<usize>>,
    pub place_labels: Vec<String>,
}

impl FailureDemoReport {
    pub fn to_json(&self) -> Value {
        json!({
            "per_place_existence": self.per_place_existence,
            "orientation_verdicts": self.orientation_verdicts,
            "verdict": self.verdict.label(),
            "psi_index": self.psi_index,
            "g_indices": self.g_indices,
            "places": self.place_labels,
        })
    }
}

/// Builds and evaluates the four-place scenario.
pub fn run_failure_demo() -> Result<FailureDemoReport, RunError> {
    // E = E′ × E′ with the exchange involution, E′ three copies of one
    // quadratic field: twelve points, pairs (k, 6+k), and the quadratic
    // conjugation flipping the two embeddings of each factor of E′.
    let z2 = groups::cyclic(2);
    let n = 12usize;
    let sigma: Vec<usize> = (0..n).map(|y| (y + 6) % n).collect();
    // Points of E′ = fiber {0..5}: factor f has embeddings 2f, 2f+1; the
    // conjugation swaps them, simultaneously on both σ-fibers.
    let flip: Vec<usize> = (0..n)
        .map(|y| {
            let fiber = y / 6;
            let local = y % 6;
            fiber * 6 + (local ^ 1)
        })
        .collect();
    let points = GammaSet::new(z2.clone(), n, vec![flip])?;
    let e = EtaleInvolution::new(points, sigma, TauType::Orthogonal, None)
        .map_err(|err| RunError::Validation(err.to_string()))?;
    let psi: TwistedRootDatum =
        build_twisted_datum(&e).map_err(|err| RunError::Validation(err.to_string()))?;

    let diagram = classify(&psi.pinning()?).map_err(torem::embed::EmbedError::RootDatum)?;
    assert_eq!(diagram.type_string(), "D6");

    // The torus index at the nonsplit places: computed, not assumed.
    let full = z2.full_subgroup();
    let psi_index = compute_tits_index(&psi, &full)?;
    assert_eq!(psi_index.distinguished.len(), 3);

    // The two fork nodes of the diagram.
    let component = &diagram.components[0];
    let fork_a = component.nodes[component.nodes.len() - 2];
    let fork_b = component.nodes[component.nodes.len() - 1];
    let psi_fork: Vec<usize> = psi_index
        .distinguished
        .iter()
        .copied()
        .filter(|&x| x == fork_a || x == fork_b)
        .collect();
    assert_eq!(psi_fork.len(), 1, "the torus index circles exactly one fork node");
    let same_fork = psi_fork[0];
    let other_fork = if same_fork == fork_a { fork_b } else { fork_a };

    // The group's indices: the mirror pair of the torus pattern, chosen so
    // places v1, v2 see the same fork and v3, v4 the opposite one.
    let g_same: std::collections::BTreeSet<usize> = psi_index.distinguished.clone();
    let mut g_mirror = g_same.clone();
    g_mirror.remove(&same_fork);
    g_mirror.insert(other_fork);

    let per_place: Vec<(PlaceModel, TitsIndex)> = (1..=4)
        .map(|i| {
            let idx = if i <= 2 { g_same.clone() } else { g_mirror.clone() };
            (
                PlaceModel::new(format!("v{i}"), full.clone()),
                TitsIndex::new(diagram.clone(), idx),
            )
        })
        .collect();

    let g_global = TwistedRootDatum::split(psi.base().clone(), z2.clone());
    let scenario = GlobalScenario { psi: psi.clone(), g_global, per_place };
    let out = decide_all_orientations(&scenario)?;

    // Rows of the report are per-orientation.
    let orientations = out.orientations.len();
    let orientation_verdicts: Vec<Vec<bool>> = (0..orientations)
        .map(|j| out.table.iter().map(|row| row[j]).collect())
        .collect();

    Ok(FailureDemoReport {
        per_place_existence: out.per_place_exists.clone(),
        orientation_verdicts,
        verdict: out.verdict,
        psi_index: out.psi_indices[0].distinguished.iter().copied().collect(),
        g_indices: scenario_g_indices(&scenario),
        place_labels: (1..=4).map(|i| format!("v{i}")).collect(),
    })
}

fn scenario_g_indices(s: &GlobalScenario) -> Vec<Vec<usize>> {
    s.per_place
        .iter()
        .map(|(_, idx)| idx.distinguished.iter().copied().collect())
        .collect()
}
