use num_bigint::BigInt;
use proptest::prelude::*;

use super::*;
use crate::scalar::Scalar;

type M = IntMatrix<i64>;

fn m(rows: usize, cols: usize, e: &[i64]) -> M {
    M::from_i64(rows, cols, e)
}

/// Independent oracle: the product d₁···d_k of the invariant factors equals
/// the gcd of all k×k minors.
fn minor_gcd_oracle(a: &M) -> Vec<i64> {
    fn combos(n: usize, k: usize) -> Vec<Vec<usize>> {
        if k == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for first in 0..n {
            for mut rest in combos(n, k - 1) {
                if rest.iter().all(|&r| r > first) {
                    let mut c = vec![first];
                    c.append(&mut rest);
                    out.push(c);
                }
            }
        }
        out
    }
    let maxk = a.rows().min(a.cols());
    let mut dk_products = Vec::new();
    for k in 1..=maxk {
        let mut g: i64 = 0;
        for ri in combos(a.rows(), k) {
            for ci in combos(a.cols(), k) {
                let sub = a.select_rows(&ri).select_cols(&ci);
                g = num_integer::gcd(g, sub.det());
            }
        }
        dk_products.push(g);
    }
    // Convert minor gcds to invariant factors.
    let mut inv = Vec::new();
    let mut prev = 1i64;
    for p in dk_products {
        if p == 0 {
            break;
        }
        inv.push(p / prev);
        prev = p;
    }
    inv
}

fn check_snf_against_oracle(a: &M) {
    let (u, d, v) = smith_normal_form(a);
    // Exact decomposition and unimodular transforms.
    assert_eq!(&(&u * a) * &v, d, "u·a·v = d fails for {a:?}");
    assert_eq!(u.det().abs(), 1);
    assert_eq!(v.det().abs(), 1);
    // Diagonal with divisibility chain.
    let diag: Vec<i64> = (0..d.rows().min(d.cols())).map(|i| *d.get(i, i)).collect();
    for i in 0..d.rows() {
        for j in 0..d.cols() {
            if i != j {
                assert_eq!(*d.get(i, j), 0);
            }
        }
    }
    let nz: Vec<i64> = diag.iter().copied().take_while(|&x| x != 0).collect();
    assert!(diag.iter().skip(nz.len()).all(|&x| x == 0));
    for w in nz.windows(2) {
        assert_eq!(w[1] % w[0], 0, "divisibility chain fails for {a:?}");
    }
    assert_eq!(nz, minor_gcd_oracle(a), "invariant factors disagree with minor oracle for {a:?}");
}

#[test]
fn snf_identity_and_zero() {
    let (_, d, _) = smith_normal_form(&M::identity(2));
    assert!(d.is_identity());
    let (_, d, _) = smith_normal_form(&M::zeros(2, 2));
    assert!(d.is_zero());
}

#[test]
fn snf_frozen_example() {
    // d₁ = gcd(2,4,6,8) = 2, d₁·d₂ = |det| = |16−24| = 8 ⟹ d₂ = 4.
    let a = m(2, 2, &[2, 4, 6, 8]);
    let (_, d, _) = smith_normal_form(&a);
    assert_eq!(*d.get(0, 0), 2);
    assert_eq!(*d.get(1, 1), 4);
    check_snf_against_oracle(&a);
}

#[test]
fn snf_deterministic() {
    let a = m(3, 3, &[0, 4, 6, -2, 3, 0, 7, 7, 7]);
    let first = smith_normal_form(&a);
    let second = smith_normal_form(&a);
    assert_eq!(first.0, second.0);
    assert_eq!(first.1, second.1);
    assert_eq!(first.2, second.2);
}

#[test]
fn snf_exhaustive_small() {
    // All 2×2 matrices with entries in [−3, 3] against the minor oracle.
    for a0 in -3..=3i64 {
        for a1 in -3..=3i64 {
            for a2 in -3..=3i64 {
                for a3 in -3..=3i64 {
                    check_snf_against_oracle(&m(2, 2, &[a0, a1, a2, a3]));
                }
            }
        }
    }
}

#[test]
fn snf_exhaustive_rectangular() {
    for a0 in -2..=2i64 {
        for a1 in -2..=2i64 {
            for a2 in -2..=2i64 {
                for a3 in -2..=2i64 {
                    for a4 in -2..=2i64 {
                        for a5 in -2..=2i64 {
                            let e = [a0, a1, a2, a3, a4, a5];
                            check_snf_against_oracle(&m(2, 3, &e));
                            check_snf_against_oracle(&m(3, 2, &e));
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn kernel_examples() {
    assert_eq!(kernel_basis(&M::identity(2)).rows(), 0);
    let k = kernel_basis(&m(1, 2, &[0, 0]));
    assert!(k.is_identity());
    let k = kernel_basis(&m(1, 2, &[2, 3]));
    assert_eq!(k, m(1, 2, &[3, -2]));
}

#[test]
fn kernel_annihilates() {
    let a = m(2, 4, &[1, 2, 3, 4, 0, 2, 0, 2]);
    let k = kernel_basis(&a);
    assert_eq!(k.rows(), 2);
    for row in k.iter_rows() {
        assert!(a.mul_vec(row).iter().all(|v| *v == 0));
    }
}

#[test]
fn saturate_examples() {
    let l = Sublattice::from_rows(2, vec![vec![2i64, 0]]);
    assert_eq!(l.saturate(), Sublattice::from_rows(2, vec![vec![1, 0]]));

    let l = Sublattice::from_rows(2, vec![vec![1i64, 0], vec![0, 2]]);
    let s = l.saturate();
    assert_eq!(s.saturate(), s);

    // Full-rank input: the rational span is all of ℚ², so the saturation is
    // the full lattice.  Verified by the membership oracle below.
    let l = Sublattice::from_rows(2, vec![vec![2i64, 2], vec![0, 4]]);
    let s = l.saturate();
    assert!(s.is_full());
    saturation_oracle(&l, &s);
}

/// Defining-property oracle: `s` is the saturation of `l` iff it contains
/// `l`, has the same rank, is saturated (torsion-free quotient), and every
/// basis vector has an integer multiple inside `l`.
fn saturation_oracle(l: &Sublattice<i64>, s: &Sublattice<i64>) {
    assert!(s.contains_lattice(l));
    assert_eq!(s.rank(), l.rank());
    assert!(quotient_invariants(s.ambient_rank(), s).torsion.is_empty());
    for row in s.basis().iter_rows() {
        let multiple = (1..=64i64).find(|k| {
            let scaled: Vec<i64> = row.iter().map(|v| v * k).collect();
            l.contains(&scaled)
        });
        assert!(multiple.is_some(), "basis vector has no multiple inside the input lattice");
    }
}

#[test]
fn quotient_examples() {
    let inv = quotient_invariants(2, &Sublattice::<i64>::full(2));
    assert!(inv.is_trivial());

    let inv = quotient_invariants(2, &Sublattice::from_rows(2, vec![vec![1i64, 0]]));
    assert_eq!(inv.free_rank, 1);
    assert!(inv.torsion.is_empty());

    // gcd(2,3) = 1 so the chain is [1, 6]; reported as [6], free rank 0.
    let inv = quotient_invariants(2, &Sublattice::from_rows(2, vec![vec![2i64, 0], vec![0, 3]]));
    assert_eq!(inv.free_rank, 0);
    assert_eq!(inv.torsion, vec![6]);
}

#[test]
fn quotient_map_splits() {
    let l = Sublattice::from_rows(3, vec![vec![1i64, 1, 0], vec![0, 2, 1]]);
    let s = l.saturate();
    let (proj, section) = quotient_map(&s);
    assert!((&proj * &section).is_identity());
    for row in s.basis().iter_rows() {
        assert!(proj.mul_vec(row).iter().all(|v| *v == 0));
    }
}

#[test]
fn solve_examples() {
    let a = m(2, 2, &[2, 0, 0, 3]);
    assert_eq!(solve(&a, &[4, 9]), Some(vec![2, 3]));
    assert_eq!(solve(&a, &[1, 0]), None);
    let a = m(1, 2, &[2, 4]);
    let x = solve(&a, &[6]).unwrap();
    assert_eq!(2 * x[0] + 4 * x[1], 6);
}

#[test]
fn hnf_is_canonical() {
    // Same lattice, different generators.
    let a = row_hnf(&m(2, 2, &[1, 1, 0, 2]));
    let b = row_hnf(&m(3, 2, &[1, 3, 1, 1, 2, 4]));
    assert_eq!(a, b);
}

#[test]
fn inverse_unimodular() {
    let a = m(2, 2, &[2, 1, 1, 1]);
    let inv = a.inverse().unwrap();
    assert!((&a * &inv).is_identity());
    assert!(m(2, 2, &[2, 0, 0, 1]).inverse().is_none());
}

#[test]
fn bigint_snf_matches_i64() {
    let a = m(3, 3, &[12, -4, 7, 0, 9, 3, 5, 5, 5]);
    let b: IntMatrix<BigInt> = a.convert();
    let (_, d64, _) = smith_normal_form(&a);
    let (_, dbig, _) = smith_normal_form(&b);
    assert_eq!(d64.map(|v| BigInt::from_small(*v)), dbig);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn snf_random_3x3(entries in prop::collection::vec(-3i64..=3, 9)) {
        check_snf_against_oracle(&m(3, 3, &entries));
    }

    #[test]
    fn saturate_idempotent_and_torsion_free(
        entries in prop::collection::vec(-4i64..=4, 8),
    ) {
        let l = Sublattice::from_generators(4, m(2, 4, &entries));
        let s = l.saturate();
        prop_assert_eq!(s.saturate(), s.clone());
        prop_assert!(quotient_invariants(4, &s).torsion.is_empty());
        prop_assert!(s.contains_lattice(&l));
    }

    #[test]
    fn kernel_members_annihilate(entries in prop::collection::vec(-5i64..=5, 12)) {
        let a = m(3, 4, &entries);
        let k = kernel_basis(&a);
        for row in k.iter_rows() {
            prop_assert!(a.mul_vec(row).iter().all(|v| *v == 0));
        }
        // Kernel rank + matrix rank = column count.
        let f = snf_with(&a, Track::None);
        prop_assert_eq!(k.rows() + f.rank, a.cols());
    }
}
