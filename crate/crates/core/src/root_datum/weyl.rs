//! Weyl groups by closure enumeration, simple systems, Coxeter elements.

use std::collections::{HashMap, VecDeque};
use std::sync::{Arc, Mutex, OnceLock};

use super::{PinnedRootDatum, RootDatum};
use crate::{Int, Mat};

/// The Weyl group of a root datum, fully enumerated as unimodular matrices
/// acting on M.  Element order is the deterministic BFS order from the
/// identity over the sorted reflection generators.
#[derive(Clone)]
pub struct WeylGroup {
    rank: usize,
    elements: Vec<Mat>,
    index: HashMap<Vec<Int>, usize>,
    generators: Vec<Mat>,
}

fn key(m: &Mat) -> Vec<Int> {
    let mut k = Vec::with_capacity(m.rows() * m.cols());
    for i in 0..m.rows() {
        k.extend_from_slice(m.row(i));
    }
    k
}

/// The closed list of matrices generated by the given ones, sorted, or
/// `None` past the cap.
pub(crate) fn matrix_closure_list(rank: usize, generators: &[Mat], cap: usize) -> Option<Vec<Mat>> {
    let mut elements = closure(rank, generators, Some(cap))?;
    elements.sort_by(|a, b| key(a).cmp(&key(b)));
    Some(elements)
}

/// The set of matrix keys generated by a list of matrices, as a hash set.
pub(crate) fn matrix_closure_set(
    rank: usize,
    generators: &[Mat],
) -> std::collections::HashSet<Vec<Int>> {
    closure(rank, generators, None)
        .expect("uncapped closure always terminates")
        .iter()
        .map(key)
        .collect()
}

/// BFS closure of a set of invertible generator matrices.
pub(crate) fn closure(rank: usize, generators: &[Mat], cap: Option<usize>) -> Option<Vec<Mat>> {
    let mut elements = Vec::new();
    let mut index = HashMap::new();
    let mut queue = VecDeque::new();
    let id = Mat::identity(rank);
    index.insert(key(&id), 0);
    elements.push(id.clone());
    queue.push_back(id);
    while let Some(m) = queue.pop_front() {
        for g in generators {
            let next = g * &m;
            let k = key(&next);
            if !index.contains_key(&k) {
                if let Some(cap) = cap {
                    if elements.len() >= cap {
                        return None;
                    }
                }
                index.insert(k, elements.len());
                elements.push(next.clone());
                queue.push_back(next);
            }
        }
    }
    Some(elements)
}

impl WeylGroup {
    pub(crate) fn from_generators(rank: usize, mut generators: Vec<Mat>) -> Self {
        generators.sort_by_key(key);
        generators.dedup();
        let elements =
            closure(rank, &generators, None).expect("uncapped closure always terminates");
        let index = elements.iter().enumerate().map(|(i, m)| (key(m), i)).collect();
        WeylGroup { rank, elements, index, generators }
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn elements(&self) -> &[Mat] {
        &self.elements
    }

    pub fn generators(&self) -> &[Mat] {
        &self.generators
    }

    pub fn contains(&self, m: &Mat) -> bool {
        self.index.contains_key(&key(m))
    }

    pub fn index_of(&self, m: &Mat) -> Option<usize> {
        self.index.get(&key(m)).copied()
    }
}

impl std::fmt::Debug for WeylGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "WeylGroup(rank={}, order={})", self.rank, self.order())
    }
}

/// W(ψ): the group generated by all root reflections.  Results are
/// memoized per datum; enumeration can be expensive for the larger
/// catalog types.
pub fn weyl_group(datum: &RootDatum) -> Arc<WeylGroup> {
    static CACHE: OnceLock<Mutex<HashMap<Vec<Int>, Arc<WeylGroup>>>> = OnceLock::new();
    let mut cache_key: Vec<Int> = vec![datum.rank() as Int];
    for (r, c) in datum.roots().iter().zip(datum.coroots()) {
        cache_key.extend_from_slice(r);
        cache_key.extend_from_slice(c);
    }
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(found) = cache.lock().unwrap().get(&cache_key) {
        return Arc::clone(found);
    }
    let gens: Vec<Mat> = (0..datum.num_roots()).map(|i| datum.reflection_matrix(i)).collect();
    let built = Arc::new(WeylGroup::from_generators(datum.rank(), gens));
    cache.lock().unwrap().insert(cache_key, Arc::clone(&built));
    built
}

/// Positivity: sign of the first nonzero coordinate.  This realizes the
/// generic functional (N^{rank−1}, …, N, 1) for N exceeding twice the
/// largest coordinate; nonzero roots never pair to zero with it.
fn is_positive(v: &[Int]) -> bool {
    v.iter().find(|x| **x != 0).is_some_and(|x| *x > 0)
}

/// Chooses the deterministic simple system: indecomposable positive roots,
/// ordered lexicographically.
pub fn simple_system(datum: &RootDatum) -> PinnedRootDatum {
    let positives: Vec<usize> =
        (0..datum.num_roots()).filter(|&i| is_positive(datum.root(i))).collect();
    let pos_set: std::collections::HashSet<&[Int]> =
        positives.iter().map(|&i| datum.root(i)).collect();
    let mut delta: Vec<usize> = positives
        .iter()
        .copied()
        .filter(|&i| {
            let alpha = datum.root(i);
            !positives.iter().any(|&j| {
                if i == j {
                    return false;
                }
                let beta = datum.root(j);
                let diff: Vec<Int> = alpha.iter().zip(beta).map(|(a, b)| a - b).collect();
                pos_set.contains(diff.as_slice())
            })
        })
        .collect();
    delta.sort_by(|&a, &b| datum.root(a).cmp(datum.root(b)));
    PinnedRootDatum::new(datum.clone(), delta)
        .expect("indecomposable positive roots form a simple system")
}

/// Product of the simple reflections in Δ-index order.
pub fn coxeter_element(pinned: &PinnedRootDatum) -> Mat {
    let mut m = Mat::identity(pinned.base().rank());
    for &i in pinned.delta() {
        m = &m * &pinned.base().reflection_matrix(i);
    }
    m
}
