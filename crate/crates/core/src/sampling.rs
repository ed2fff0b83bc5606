//! Seeded random instance generators for property sweeps: finite-order
//! integer actions, twisted root data, and étale involutions.

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

use crate::algebra_model::{EtaleInvolution, TauType};
use crate::galois::{FiniteGroup, GammaLattice, GammaSet, Perm, TwistedRootDatum};
use crate::root_datum::{aut_group, simple_system, standard, CatalogForm, RootDatum};
use crate::{Int, Mat};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// Companion block of the d-th cyclotomic polynomial, for the orders used
/// by the cyclic sweeps.
fn cyclotomic_block(d: usize) -> Option<Mat> {
    let coeffs: &[Int] = match d {
        1 => &[1],              // x − 1
        2 => &[-1],             // x + 1
        3 => &[-1, -1],         // x² + x + 1
        4 => &[-1, 0],          // x² + 1
        6 => &[-1, 1],          // x² − x + 1
        5 => &[-1, -1, -1, -1], // x⁴ + x³ + x² + x + 1
        8 => &[-1, 0, 0, 0],    // x⁴ + 1
        10 => &[-1, 1, -1, 1],  // x⁴ − x³ + x² − x + 1
        12 => &[-1, 0, 1, 0],   // x⁴ − x² + 1
        _ => return None,
    };
    let r = coeffs.len();
    // Companion matrix: subdiagonal ones, last column from the polynomial.
    Some(Mat::from_fn(r, r, |i, j| {
        if j == r - 1 {
            coeffs[i]
        } else if i == j + 1 {
            1
        } else {
            0
        }
    }))
}

fn block_diag(blocks: &[Mat]) -> Mat {
    let n: usize = blocks.iter().map(Mat::rows).sum();
    let mut out = Mat::zeros(n, n);
    let mut off = 0;
    for b in blocks {
        for i in 0..b.rows() {
            for j in 0..b.cols() {
                out.set(off + i, off + j, *b.get(i, j));
            }
        }
        off += b.rows();
    }
    out
}

/// A random unimodular matrix: a short product of elementary operations.
pub fn random_unimodular(rng: &mut StdRng, n: usize, ops: usize) -> Mat {
    let mut p = Mat::identity(n);
    if n < 2 {
        return p;
    }
    for _ in 0..ops {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n);
        while j == i {
            j = rng.gen_range(0..n);
        }
        let c: Int = if rng.gen_bool(0.5) { 1 } else { -1 };
        p.row_op(i, j, &c);
    }
    p
}

/// A random module for the cyclic group of the given order: a block sum of
/// cyclotomic companions and permutation cycles with orders dividing the
/// group order, conjugated by a random unimodular change of basis.
pub fn random_cyclic_lattice(rng: &mut StdRng, order: usize, max_rank: usize) -> GammaLattice {
    let divisors: Vec<usize> = (1..=order).filter(|d| order % d == 0).collect();
    let mut blocks: Vec<Mat> = Vec::new();
    let mut rank = 0;
    let target = rng.gen_range(1..=max_rank);
    while rank < target {
        let remaining = target - rank;
        let mut options: Vec<Mat> = Vec::new();
        for &d in &divisors {
            if let Some(b) = cyclotomic_block(d) {
                if b.rows() <= remaining {
                    options.push(b);
                }
            }
            // Permutation cycle of length d.
            if d > 1 && d <= remaining {
                options.push(Mat::from_fn(d, d, |i, j| if i == (j + 1) % d { 1 } else { 0 }));
            }
        }
        let choice = options.choose(rng).expect("the identity block always fits").clone();
        rank += choice.rows();
        blocks.push(choice);
    }
    let a = block_diag(&blocks);
    let p = random_unimodular(rng, rank, rank.min(4) + 2);
    let p_inv = p.inverse().expect("elementary products are unimodular");
    let gen = &(&p * &a) * &p_inv;
    let group = crate::galois::groups::cyclic(order);
    GammaLattice::new(group, rank, vec![gen]).expect("block orders divide the group order")
}

/// Builds a twisted datum whose group is the closure of the given
/// automorphism matrices, acting through its regular permutation
/// representation.  `None` when the closure exceeds the cap.
pub fn twisted_from_matrices(
    base: &RootDatum,
    gen_mats: Vec<Mat>,
    cap: usize,
) -> Option<TwistedRootDatum> {
    let elements = crate::root_datum::matrix_closure_list(base.rank(), &gen_mats, cap)?;
    let index = |m: &Mat| elements.iter().position(|x| x == m).unwrap();
    let n = elements.len();
    let perms: Vec<Perm> = gen_mats
        .iter()
        .map(|g| (0..n).map(|x| index(&(g * &elements[x]))).collect())
        .collect();
    let group = FiniteGroup::new(n, perms).ok()?;
    TwistedRootDatum::new(base.clone(), group, gen_mats).ok()
}

pub const SMALL_CATALOG: &[&str] = &["A1", "A2", "A3", "B2", "B3", "C3", "D4"];

/// A random twisted datum over a catalog type, with the group order capped.
pub fn random_twisted_datum(
    rng: &mut StdRng,
    names: &[&str],
    group_cap: usize,
) -> TwistedRootDatum {
    loop {
        let name = names.choose(rng).unwrap();
        let form =
            if rng.gen_bool(0.5) { CatalogForm::SimplyConnected } else { CatalogForm::Adjoint };
        let pinned = standard(name, form).unwrap();
        let base = pinned.base().clone();
        let aut = aut_group(&simple_system(&base)).unwrap();
        let mut gens: Vec<Mat> = Vec::new();
        for _ in 0..rng.gen_range(1..=2usize) {
            let w = aut.weyl.elements().choose(rng).unwrap().clone();
            let e = aut.diagram_autos.choose(rng).unwrap().matrix.clone();
            gens.push(&w * &e);
        }
        if let Some(t) = twisted_from_matrices(&base, gens, group_cap) {
            return t;
        }
    }
}

/// A random σ-commuting permutation: permute the pairs, flip inside a
/// random subset, fix the odd point when present.
fn random_pair_perm(rng: &mut StdRng, pairs: usize, total: usize, fixed_last: bool) -> Perm {
    let mut pair_images: Vec<usize> = (0..pairs).collect();
    pair_images.shuffle(rng);
    let mut p = vec![0usize; total];
    for k in 0..pairs {
        let img = pair_images[k];
        if rng.gen_bool(0.4) {
            p[k] = img + pairs;
            p[k + pairs] = img;
        } else {
            p[k] = img;
            p[k + pairs] = img + pairs;
        }
    }
    if fixed_last {
        p[total - 1] = total - 1;
    }
    p
}

fn etale_from_gens(
    n: usize,
    sigma: Perm,
    gens: Vec<Perm>,
    tau: TauType,
    group_cap: usize,
) -> Option<EtaleInvolution> {
    let group = FiniteGroup::with_cap(n, gens, group_cap).ok()?;
    let gen_perms: Vec<Perm> =
        group.generator_indices().iter().map(|&g| group.perm(g).clone()).collect();
    let points = GammaSet::new(group, n, gen_perms).ok()?;
    EtaleInvolution::new(points, sigma, tau, None).ok()
}

/// A random odd-orthogonal étale involution: pairs (k, m+k) plus one fixed
/// point, with 1–2 random σ-commuting generators, group order ≤ cap.
pub fn random_odd_orthogonal(
    rng: &mut StdRng,
    max_pairs: usize,
    group_cap: usize,
) -> EtaleInvolution {
    loop {
        let m = rng.gen_range(1..=max_pairs);
        let n = 2 * m + 1;
        let sigma: Perm =
            (0..n).map(|y| if y == n - 1 { y } else { (y + m) % (2 * m) }).collect();
        let gens: Vec<Perm> =
            (0..rng.gen_range(1..=2usize)).map(|_| random_pair_perm(rng, m, n, true)).collect();
        if let Some(e) = etale_from_gens(n, sigma, gens, TauType::Orthogonal, group_cap) {
            return e;
        }
    }
}

/// A random symplectic étale involution on 2m points.
pub fn random_symplectic(rng: &mut StdRng, max_pairs: usize, group_cap: usize) -> EtaleInvolution {
    loop {
        let m = rng.gen_range(1..=max_pairs);
        let n = 2 * m;
        let sigma: Perm = (0..n).map(|y| (y + m) % n).collect();
        let gens: Vec<Perm> =
            (0..rng.gen_range(1..=2usize)).map(|_| random_pair_perm(rng, m, n, false)).collect();
        if let Some(e) = etale_from_gens(n, sigma, gens, TauType::Symplectic, group_cap) {
            return e;
        }
    }
}
