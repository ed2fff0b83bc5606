use super::*;
use crate::root_datum::{standard, CatalogForm};
use crate::Mat;

fn neg(n: usize) -> Mat {
    Mat::from_fn(n, n, |i, j| if i == j { -1 } else { 0 })
}

fn swap2() -> Mat {
    Mat::from_i64(2, 2, &[0, 1, 1, 0])
}

#[test]
fn group_basics() {
    let s3 = groups::symmetric(3);
    assert_eq!(s3.order(), 6);
    assert_eq!(s3.degree(), 3);
    let table = s3.multiplication_table();
    for i in 0..6 {
        assert_eq!(table[s3.identity()][i], i);
        assert_eq!(table[i][s3.inv(i)], s3.identity());
    }
    assert_eq!(groups::quaternion8().order(), 8);
    assert_eq!(groups::alternating4().order(), 12);
    assert_eq!(groups::dihedral(6).order(), 12);
    assert_eq!(groups::direct_product(&groups::cyclic(2), &groups::cyclic(3)).order(), 6);
}

#[test]
fn order_cap_is_enforced() {
    let err = FiniteGroup::with_cap(5, vec![vec![1, 0, 2, 3, 4], vec![1, 2, 3, 4, 0]], 10);
    assert_eq!(err.unwrap_err(), GroupError::OrderCapExceeded { cap: 10 });
}

#[test]
fn cyclic_subgroup_classes_in_s3() {
    let s3 = groups::symmetric(3);
    // Trivial, the three conjugate order-2s, one class of order-3.
    let classes = s3.cyclic_subgroup_classes();
    let orders: Vec<usize> = classes.iter().map(Subgroup::order).collect();
    let mut sorted = orders.clone();
    sorted.sort_unstable();
    assert_eq!(sorted, vec![1, 2, 3]);
    // All five distinct cyclic subgroups exist before deduplication.
    assert_eq!(s3.cyclic_subgroups().len(), 6 - 2 + 1); // 1 trivial + 3 order-2 + 1 order-3
    for s in &classes {
        assert!(s3.is_subgroup(s));
    }
}

#[test]
fn fixed_sublattice_examples() {
    let z2 = groups::cyclic(2);
    let triv = GammaLattice::trivial(z2.clone(), 2);
    assert!(fixed_sublattice(&triv).unwrap().is_full());

    let sign = GammaLattice::new(z2.clone(), 1, vec![neg(1)]).unwrap();
    assert!(fixed_sublattice(&sign).unwrap().is_zero());

    let swap = GammaLattice::new(z2.clone(), 2, vec![swap2()]).unwrap();
    let fixed = fixed_sublattice(&swap).unwrap();
    assert_eq!(fixed, crate::lattice::Sublattice::from_rows(2, vec![vec![1, 1]]));

    let finite = GammaLattice::finite_cyclic_trivial(z2, 3);
    assert!(matches!(fixed_sublattice(&finite), Err(ActionError::TorsionUnsupported)));
}

#[test]
fn anisotropy_examples() {
    let z2 = groups::cyclic(2);
    let sign = GammaLattice::new(z2.clone(), 1, vec![neg(1)]).unwrap();
    assert!(is_anisotropic(&sign, &z2.full_subgroup()).unwrap());
    assert!(!is_anisotropic(&sign, &z2.trivial_subgroup()).unwrap());

    // Monotone: enlarging the subgroup can only shrink the fixed lattice.
    let z4 = groups::cyclic(4);
    let rot = Mat::from_i64(2, 2, &[0, -1, 1, 0]);
    let l = GammaLattice::new(z4.clone(), 2, vec![rot]).unwrap();
    for s in z4.cyclic_subgroups() {
        let fixed_small = fixed_sublattice_under(&l, &s).unwrap();
        let fixed_full = fixed_sublattice_under(&l, &z4.full_subgroup()).unwrap();
        assert!(fixed_small.contains_lattice(&fixed_full));
    }

    // Coxeter-element cyclic subgroup acting on the A2 weight lattice.
    let a2 = standard("A2", CatalogForm::SimplyConnected).unwrap();
    let cox = crate::root_datum::coxeter_element(&a2);
    let z3 = groups::cyclic(3);
    let l = GammaLattice::new(z3.clone(), 2, vec![cox]).unwrap();
    assert!(is_anisotropic(&l, &z3.full_subgroup()).unwrap());
}

#[test]
fn genericity_examples() {
    let a1 = standard("A1", CatalogForm::SimplyConnected).unwrap().base().clone();
    let z2 = groups::cyclic(2);
    let psi = TwistedRootDatum::new(a1.clone(), z2.clone(), vec![neg(1)]).unwrap();
    assert!(psi.is_generic().unwrap());

    let a2 = standard("A2", CatalogForm::SimplyConnected).unwrap().base().clone();
    let split = TwistedRootDatum::split(a2.clone(), groups::cyclic(1));
    assert!(!split.is_generic().unwrap());

    // S3 acting as the full Weyl group of A2.
    let s3 = groups::symmetric(3);
    let w = crate::root_datum::weyl_group(&a2);
    // Map the S3 generators (a transposition and a 3-cycle) to Weyl elements
    // of matching order: a simple reflection and a Coxeter element.
    let refl = a2
        .roots()
        .iter()
        .enumerate()
        .map(|(i, _)| a2.reflection_matrix(i))
        .next()
        .unwrap();
    let cox = crate::root_datum::coxeter_element(
        &standard("A2", CatalogForm::SimplyConnected).unwrap(),
    );
    assert!(w.contains(&refl) && w.contains(&cox));
    let psi = TwistedRootDatum::new(a2, s3, vec![refl, cox]).unwrap();
    assert!(psi.is_generic().unwrap());
}

#[test]
fn star_action_examples() {
    // Γ acting inside W: trivial diagram action.
    let b2 = standard("B2", CatalogForm::SimplyConnected).unwrap().base().clone();
    let z2 = groups::cyclic(2);
    let psi = TwistedRootDatum::new(b2, z2.clone(), vec![neg(2)]).unwrap();
    let star = psi.star_action().unwrap();
    assert!(star.iter().all(|p| p == &identity_perm(2)), "−1 ∈ W(C2): trivial star action");

    // −1 on A2: the nontrivial element acts as the diagram flip.
    let a2 = standard("A2", CatalogForm::SimplyConnected).unwrap().base().clone();
    let psi = TwistedRootDatum::new(a2, z2.clone(), vec![neg(2)]).unwrap();
    let star = psi.star_action().unwrap();
    let nontrivial = (0..2).find(|&i| psi.matrix(i) == &neg(2)).unwrap();
    assert_eq!(star[nontrivial], vec![1, 0], "−1 = w0·flip on A2");
    assert_eq!(star[1 - nontrivial], identity_perm(2));
}

#[test]
fn induced_lattice_examples() {
    let s3 = groups::symmetric(3);
    let regular = GammaSet::regular(&s3);
    let zg = induced_lattice(&regular);
    assert_eq!(zg.rank(), 6);
    // Fixed lattice of Z[Γ] is the norm line: one orbit.
    assert_eq!(fixed_sublattice(&zg).unwrap().rank(), 1);

    // Single point: the norm-one quotient vanishes.
    let point = GammaSet::trivial(s3.clone(), 1);
    assert_eq!(norm_one_quotient(&point).rank(), 0);

    // Two swapped points: J ≅ ℤ with the sign action.
    let z2 = groups::cyclic(2);
    let swap = GammaSet::new(z2.clone(), 2, vec![vec![1, 0]]).unwrap();
    let j = norm_one_quotient(&swap);
    assert_eq!(j.rank(), 1);
    let nontrivial = (0..2).find(|&i| *z2.perm(i) != identity_perm(2)).unwrap();
    assert_eq!(j.matrix(nontrivial), &neg(1));

    // Rank bookkeeping on a random-ish set: rank(J) = |X|−1 and the fixed
    // part of Z[X] counts orbits.
    let x = GammaSet::new(
        groups::cyclic(4),
        6,
        vec![vec![1, 2, 3, 0, 5, 4]], // a 4-cycle and a 2-cycle
    )
    .unwrap();
    assert_eq!(induced_lattice(&x).rank(), 6);
    assert_eq!(norm_one_quotient(&x).rank(), 5);
    assert_eq!(augmentation_sub(&x).rank(), 5);
    assert_eq!(fixed_sublattice(&induced_lattice(&x)).unwrap().rank(), 2);
    assert_eq!(x.orbits().len(), 2);
}

#[test]
fn twisted_datum_validates_automorphisms() {
    let a2 = standard("A2", CatalogForm::SimplyConnected).unwrap().base().clone();
    let z2 = groups::cyclic(2);
    // An involution of M that does not preserve the roots must be rejected.
    let bad = Mat::from_i64(2, 2, &[1, 0, 0, -1]);
    assert!(matches!(
        TwistedRootDatum::new(a2.clone(), z2.clone(), vec![bad]),
        Err(ActionError::NotAnAutomorphism)
    ));
    // A matrix of the wrong multiplicative order breaks the homomorphism.
    let shear = Mat::from_i64(2, 2, &[1, 1, 0, 1]);
    assert!(matches!(
        TwistedRootDatum::new(a2.clone(), z2.clone(), vec![shear]),
        Err(ActionError::NotAHomomorphism)
    ));
    // Wrong order (identity expected for the involution slot is fine, but a
    // matrix of order 3 under a Z2 generator breaks the homomorphism).
    let cox = crate::root_datum::coxeter_element(
        &standard("A2", CatalogForm::SimplyConnected).unwrap(),
    );
    assert!(matches!(
        TwistedRootDatum::new(a2, z2, vec![cox]),
        Err(ActionError::NotAHomomorphism)
    ));
}

#[test]
fn sc_and_ss_twists() {
    // GL2-style datum twisted by the swap: transports to SL2/PGL2 scale.
    let gl2 = crate::root_datum::tests::gl2();
    let z2 = groups::cyclic(2);
    let psi = TwistedRootDatum::new(gl2, z2, vec![swap2()]).unwrap();

    let sct = psi.simply_connected_twist();
    assert!(sct.base().predicates().simply_connected);
    assert_eq!(sct.base().rank(), 1);
    let sst = psi.semisimple_twist();
    assert!(sst.base().is_semisimple());
    assert_eq!(sst.base().rank(), 1);
    // The swap fixes the radical and negates the root line.
    let nontrivial = (0..2).find(|&i| psi.matrix(i) == &swap2()).unwrap();
    assert_eq!(sct.matrix(nontrivial), &neg(1));
    assert_eq!(sst.matrix(nontrivial), &neg(1));
}

#[test]
fn restriction_of_lattices() {
    let s3 = groups::symmetric(3);
    let regular = GammaSet::regular(&s3);
    let zg = induced_lattice(&regular);
    for d in s3.cyclic_subgroup_classes() {
        let r = zg.restrict(&d).unwrap();
        assert_eq!(r.group().order(), d.order());
        assert_eq!(r.rank(), 6);
    }
}
