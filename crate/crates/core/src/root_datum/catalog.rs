//! The catalog of standard root data, built from Cartan matrices shipped as
//! a data file (Bourbaki numbering).
//!
//! The simply connected datum of a Cartan matrix C lives on the weight
//! lattice: simple root j is column j of C in fundamental-weight
//! coordinates and simple coroot j is the standard basis vector.  The full
//! root list is the reflection closure of the simple pairs; adjoint forms
//! are derived.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use super::{DeriveOp, PinnedRootDatum, RootDatum};
use crate::{Int, Mat};

const CATALOG_DATA: &str = include_str!("../../data/catalog.txt");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CatalogForm {
    SimplyConnected,
    Adjoint,
}

fn parse_catalog() -> BTreeMap<String, Mat> {
    let mut out = BTreeMap::new();
    for line in CATALOG_DATA.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (name, rest) = line.split_once(':').expect("catalog line needs NAME:");
        let rows: Vec<Vec<Int>> = rest
            .split('|')
            .map(|r| {
                r.split_whitespace()
                    .map(|v| v.parse::<Int>().expect("catalog entries are integers"))
                    .collect()
            })
            .collect();
        out.insert(name.trim().to_string(), Mat::from_rows(rows));
    }
    out
}

fn catalog() -> &'static BTreeMap<String, Mat> {
    static CACHE: OnceLock<BTreeMap<String, Mat>> = OnceLock::new();
    CACHE.get_or_init(parse_catalog)
}

pub fn standard_names() -> Vec<String> {
    catalog().keys().cloned().collect()
}

/// Reflection closure of the simple (root, coroot) pairs.
fn close_roots(rank: usize, simples: &[(Vec<Int>, Vec<Int>)]) -> Vec<(Vec<Int>, Vec<Int>)> {
    let mut all: BTreeMap<Vec<Int>, Vec<Int>> = BTreeMap::new();
    let mut queue: Vec<(Vec<Int>, Vec<Int>)> = simples.to_vec();
    for (r, c) in simples {
        all.insert(r.clone(), c.clone());
    }
    while let Some((beta, beta_co)) = queue.pop() {
        for (alpha, alpha_co) in simples {
            let p: Int = alpha_co.iter().zip(&beta).map(|(a, b)| a * b).sum();
            let new_root: Vec<Int> =
                beta.iter().zip(alpha).map(|(b, a)| b - p * a).collect();
            let q: Int = beta_co.iter().zip(alpha).map(|(a, b)| a * b).sum();
            let new_co: Vec<Int> =
                beta_co.iter().zip(alpha_co).map(|(b, a)| b - q * a).collect();
            if !all.contains_key(&new_root) {
                all.insert(new_root.clone(), new_co.clone());
                queue.push((new_root, new_co));
            }
        }
    }
    assert!(all.keys().all(|r| r.len() == rank));
    all.into_iter().collect()
}

/// The simply connected datum for a Cartan matrix.
pub(crate) fn simply_connected_from_cartan(c: &Mat) -> PinnedRootDatum {
    let rank = c.rows();
    let simples: Vec<(Vec<Int>, Vec<Int>)> = (0..rank)
        .map(|j| {
            let root = c.col_vec(j);
            let coroot: Vec<Int> = (0..rank).map(|i| if i == j { 1 } else { 0 }).collect();
            (root, coroot)
        })
        .collect();
    let pairs = close_roots(rank, &simples);
    let (roots, coroots): (Vec<_>, Vec<_>) = pairs.into_iter().unzip();
    let datum = RootDatum::new(rank, roots, coroots);
    let delta: Vec<usize> = (0..rank)
        .map(|j| datum.root_index(&c.col_vec(j)).expect("simple root present"))
        .collect();
    PinnedRootDatum::new(datum, delta).expect("closure of a Cartan matrix is pinned")
}

/// A standard datum from the catalog, in simply connected or adjoint form,
/// pinned by its canonical simple system.
pub fn standard(name: &str, form: CatalogForm) -> Option<PinnedRootDatum> {
    let c = catalog().get(name)?;
    let sc = simply_connected_from_cartan(c);
    match form {
        CatalogForm::SimplyConnected => Some(sc),
        CatalogForm::Adjoint => {
            let ad = sc.base().derive(DeriveOp::Ad);
            Some(super::simple_system(&ad))
        }
    }
}
