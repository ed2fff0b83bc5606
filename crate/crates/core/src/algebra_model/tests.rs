use super::*;
use crate::cohomology::CohomologyConfig;
use crate::embed::{obstruction_group, PlaceSet};
use crate::galois::{groups, GammaSet};
use crate::root_datum::aut_group;

fn cfg() -> CohomologyConfig {
    CohomologyConfig::default()
}

/// A split étale involution: trivial Γ, σ the model pairing.
fn split_etale(tau: TauType, n: usize) -> EtaleInvolution {
    let g = groups::cyclic(1);
    let (sigma, grading) = match tau {
        TauType::Unitary => {
            let half = n / 2;
            let sigma: Perm = (0..n).map(|y| (y + half) % n).collect();
            let grading: Vec<u8> = (0..n).map(|y| u8::from(y >= half)).collect();
            (sigma, Some(grading))
        }
        _ => {
            let model = split_model(tau, n).unwrap();
            (model.diagonal_involution(), None)
        }
    };
    EtaleInvolution::new(GammaSet::trivial(g, n), sigma, tau, grading).unwrap()
}

#[test]
fn split_model_gram_shapes() {
    // Symplectic: antisymmetric Gram matrix.
    let s = split_model(TauType::Symplectic, 4).unwrap();
    assert_eq!(s.b.transpose(), -&s.b);
    // Odd orthogonal: symmetric with the (0,0) corner set.
    let o = split_model(TauType::Orthogonal, 5).unwrap();
    assert_eq!(o.b.transpose(), o.b);
    assert_eq!(*o.b.get(0, 0), 1);
    // Even orthogonal: symmetric, zero diagonal.
    let e = split_model(TauType::Orthogonal, 6).unwrap();
    assert_eq!(e.b.transpose(), e.b);
    assert!((0..6).all(|i| *e.b.get(i, i) == 0));
    assert!(matches!(split_model(TauType::Symplectic, 5), Err(AlgebraError::SymplecticParity)));
}

#[test]
fn split_model_involution_is_involutive() {
    for (tau, n) in [
        (TauType::Symplectic, 4),
        (TauType::Symplectic, 6),
        (TauType::Orthogonal, 5),
        (TauType::Orthogonal, 6),
        (TauType::Orthogonal, 7),
    ] {
        let model = split_model(tau, n).unwrap();
        // τ₀∘τ₀ = id on a basis of matrix units.
        for i in 0..n {
            for j in 0..n {
                let e_ij = Mat::from_fn(n, n, |r, c| if (r, c) == (i, j) { 1 } else { 0 });
                assert_eq!(model.involution_on(&model.involution_on(&e_ij)), e_ij);
            }
        }
    }
}

#[test]
fn split_root_datum_types_and_counts() {
    let cases: Vec<(TauType, usize, &str, usize)> = vec![
        (TauType::Symplectic, 2, "A1", 2),
        (TauType::Symplectic, 4, "B2", 8),
        (TauType::Symplectic, 6, "C3", 18),
        (TauType::Symplectic, 8, "C4", 32),
        (TauType::Orthogonal, 5, "B2", 8),
        (TauType::Orthogonal, 7, "B3", 18),
        (TauType::Orthogonal, 9, "B4", 32),
        (TauType::Orthogonal, 6, "A3", 12),
        (TauType::Orthogonal, 8, "D4", 24),
        (TauType::Unitary, 2, "A1", 2),
        (TauType::Unitary, 3, "A2", 6),
        (TauType::Unitary, 4, "A3", 12),
        (TauType::Unitary, 5, "A4", 20),
    ];
    for (tau, n, expect, count) in cases {
        let p = split_root_datum(tau, n).unwrap();
        assert!(p.base().is_valid());
        assert_eq!(p.base().num_roots(), count, "{tau:?} n={n}");
        assert_eq!(classify_split(&p).unwrap(), expect, "{tau:?} n={n}");
        if tau == TauType::Unitary {
            // Central rank 1: the coradical line survives.
            assert_eq!(p.base().coradical_sublattice().rank(), 1);
            assert_eq!(p.base().rank(), n);
        } else {
            assert!(p.base().is_semisimple());
        }
    }
    // Odd orthogonal n = 3 is B1 = A1.
    let p = split_root_datum(TauType::Orthogonal, 3).unwrap();
    assert_eq!(classify_split(&p).unwrap(), "A1");
    assert!(matches!(
        split_root_datum(TauType::Orthogonal, 2),
        Err(AlgebraError::DegenerateOrthogonal)
    ));
}

#[test]
fn torus_lattice_ranks() {
    // 2m free points: rank m.
    let e = split_etale(TauType::Symplectic, 6);
    assert_eq!(torus_lattice(&e).rank(), 3);
    // Odd orthogonal: the fixed point dies in the torsion quotient.
    let e = split_etale(TauType::Orthogonal, 7);
    assert_eq!(torus_lattice(&e).rank(), 3);
    // A single σ-orbit of size 2.
    let z2 = groups::cyclic(2);
    let swap = GammaSet::new(z2, 2, vec![vec![1, 0]]).unwrap();
    let e = EtaleInvolution::new(swap, vec![1, 0], TauType::Symplectic, None).unwrap();
    assert_eq!(torus_lattice(&e).rank(), 1);
}

#[test]
fn etale_validation() {
    let g = groups::cyclic(1);
    // σ must commute and be an involution.
    let bad = EtaleInvolution::new(
        GammaSet::trivial(g.clone(), 3),
        vec![1, 2, 0],
        TauType::Orthogonal,
        None,
    );
    assert!(matches!(bad, Err(AlgebraError::BadInvolution)));
    // Even orthogonal with a fixed point.
    let bad = EtaleInvolution::new(
        GammaSet::trivial(g.clone(), 4),
        vec![0, 1, 3, 2],
        TauType::Orthogonal,
        None,
    );
    assert!(matches!(bad, Err(AlgebraError::FixedPointParity)));
    // Unitary needs a coherent grading.
    let bad = EtaleInvolution::new(
        GammaSet::trivial(g.clone(), 4),
        vec![2, 3, 0, 1],
        TauType::Unitary,
        Some(vec![0, 0, 0, 1]),
    );
    assert!(matches!(bad, Err(AlgebraError::BadGrading)));
}

/// C-type étale involution with Γ = Z/2 permuting two σ-orbits.
fn c_type_orbit_swap() -> EtaleInvolution {
    let z2 = groups::cyclic(2);
    // Y = {0,1,2,3}, pairs (0,2) and (1,3); γ swaps the pairs.
    let gamma = vec![1, 0, 3, 2];
    let points = GammaSet::new(z2, 4, vec![gamma]).unwrap();
    EtaleInvolution::new(points, vec![2, 3, 0, 1], TauType::Symplectic, None).unwrap()
}

#[test]
fn build_twisted_examples() {
    // Split input: trivial twist.
    let e = split_etale(TauType::Symplectic, 4);
    let psi = build_twisted_datum(&e).unwrap();
    assert!(psi.matrices().iter().all(|m| m.is_identity()));

    // Γ permuting σ-orbits lands in the permutation part of the Weyl group.
    let e = c_type_orbit_swap();
    let psi = build_twisted_datum(&e).unwrap();
    let w = crate::root_datum::weyl_group(psi.base());
    assert!(psi.matrices().iter().all(|m| w.contains(m)), "orbit swaps act through W(C2)");

    // A nonsquare-discriminant orbit hits the sign part on a D-type datum.
    let z2 = groups::cyclic(2);
    // Y = 6 points, pairs (0,3),(1,4),(2,5); γ swaps within the last pair.
    let gamma = vec![0, 1, 5, 3, 4, 2];
    let points = GammaSet::new(z2.clone(), 6, vec![gamma]).unwrap();
    let e = EtaleInvolution::new(points, vec![3, 4, 5, 0, 1, 2], TauType::Orthogonal, None).unwrap();
    let psi = build_twisted_datum(&e).unwrap();
    let nontrivial = (0..2).find(|&i| !psi.matrix(i).is_identity()).unwrap();
    let m = psi.matrix(nontrivial);
    // The action matrix has determinant −1 on the rank-3 lattice: a sign
    // flip outside the rotation part.
    assert_eq!(m.det(), -1);
}

#[test]
fn square_class_hypothesis() {
    // Odd-orthogonal instance, Γ = Z/2 flipping one pair (nonsquare d_i).
    let z2 = groups::cyclic(2);
    // Y: fixed point 4; pairs (0,2) and (1,3); γ flips pair (1,3) only.
    let gamma = vec![0, 3, 2, 1, 4];
    let points = GammaSet::new(z2.clone(), 5, vec![gamma]).unwrap();
    let e = EtaleInvolution::new(points, vec![2, 3, 0, 1, 4], TauType::Orthogonal, None).unwrap();

    // Globally: orbit {pair0} splits, orbit {pair1} does not.
    let orbits = pair_orbits(&e, &e.group().full_subgroup());
    let split_flags: Vec<bool> = orbits.iter().map(|o| o.splits).collect();
    assert_eq!(split_flags.iter().filter(|&&b| b).count(), 1);

    // At the full place the pattern matches; at the trivial place the
    // nonsquare orbit becomes locally split, so the hypothesis fails.
    assert!(square_classes_agree_at(&e, &e.group().full_subgroup()).unwrap());
    assert!(!square_classes_agree_at(&e, &e.group().trivial_subgroup()).unwrap());

    // All-square instance: every place agrees trivially.
    let e = split_etale(TauType::Orthogonal, 5);
    assert!(square_classes_agree_at(&e, &e.group().full_subgroup()).unwrap());
    assert!(square_classes_agree_at(&e, &e.group().trivial_subgroup()).unwrap());

    // Shape guard.
    let e = split_etale(TauType::Symplectic, 4);
    assert!(matches!(
        square_classes_agree_at(&e, &e.group().full_subgroup()),
        Err(AlgebraError::NotOddOrthogonal)
    ));
}

#[test]
fn sc_presentation_reports() {
    // Split odd-orthogonal instance.
    let e = split_etale(TauType::Orthogonal, 7);
    let report = verify_sc_presentation(&e).unwrap();
    assert!(report.passed(), "{report:?}");
    assert_eq!(report.rank_p, report.rank_j_e - report.rank_j_f);

    // Twisted instance with a nonsquare orbit.
    let z2 = groups::cyclic(2);
    let gamma = vec![0, 3, 2, 1, 4];
    let points = GammaSet::new(z2.clone(), 5, vec![gamma]).unwrap();
    let e = EtaleInvolution::new(points, vec![2, 3, 0, 1, 4], TauType::Orthogonal, None).unwrap();
    let report = verify_sc_presentation(&e).unwrap();
    assert!(report.passed(), "{report:?}");

    // Γ permuting the pairs transitively.
    let z3 = groups::cyclic(3);
    let gamma = vec![1, 2, 0, 4, 5, 3, 6];
    let points = GammaSet::new(z3, 7, vec![gamma]).unwrap();
    let e = EtaleInvolution::new(points, vec![3, 4, 5, 0, 1, 2, 6], TauType::Orthogonal, None)
        .unwrap();
    let report = verify_sc_presentation(&e).unwrap();
    assert!(report.passed(), "{report:?}");
}

#[test]
fn even_orthogonal_conditions() {
    let z2 = groups::cyclic(2);
    let gamma = vec![0, 1, 5, 3, 4, 2];
    let points = GammaSet::new(z2.clone(), 6, vec![gamma]).unwrap();
    let e = EtaleInvolution::new(points, vec![3, 4, 5, 0, 1, 2], TauType::Orthogonal, None).unwrap();

    let place_split = LocalAlgebraData {
        place: PlaceModel::new("v0", z2.trivial_subgroup()),
        algebra_split: true,
        discriminant_split: true,
    };
    // Case without quaternionic places: vacuously true.
    assert!(even_orthogonal_local_conditions(
        AlgebraKind::EvenOverQuaternion,
        &[place_split.clone()],
        &e
    )
    .unwrap());

    // Nonsplit algebra, split discriminant, but E_v splits at the trivial
    // decomposition group: the side condition fails.
    let bad = LocalAlgebraData {
        place: PlaceModel::new("v1", z2.trivial_subgroup()),
        algebra_split: false,
        discriminant_split: true,
    };
    assert!(!even_orthogonal_local_conditions(
        AlgebraKind::EvenOverQuaternion,
        &[bad.clone()],
        &e
    )
    .unwrap());

    // At the full place the cover stays nonsplit, so the condition holds.
    let good = LocalAlgebraData {
        place: PlaceModel::new("v2", z2.full_subgroup()),
        algebra_split: false,
        discriminant_split: true,
    };
    assert!(even_orthogonal_local_conditions(
        AlgebraKind::EvenOverQuaternion,
        &[good],
        &e
    )
    .unwrap());

    // The odd-over-quaternion case carries no side condition.
    assert!(even_orthogonal_local_conditions(AlgebraKind::OddOverQuaternion, &[bad], &e).unwrap());

    // Conflicting duplicate flags are rejected.
    let a = LocalAlgebraData {
        place: PlaceModel::new("w", z2.trivial_subgroup()),
        algebra_split: true,
        discriminant_split: true,
    };
    let b = LocalAlgebraData {
        place: PlaceModel::new("w", z2.trivial_subgroup()),
        algebra_split: false,
        discriminant_split: true,
    };
    assert!(matches!(
        even_orthogonal_local_conditions(AlgebraKind::MatrixOverField, &[a, b], &e),
        Err(AlgebraError::InconsistentLocalFlags)
    ));
}

#[test]
fn second_kind_orientation_examples() {
    for n in [2usize, 3, 4, 5] {
        let e = split_etale(TauType::Unitary, 2 * n);
        let psi = build_twisted_datum(&e).unwrap();
        let g = TwistedRootDatum::split(psi.base().clone(), e.group().clone());
        let both = second_kind_orientations(&e, &g).unwrap();
        assert_eq!(both.len(), 2, "the orientation torsor is trivial with two points");
        let zetas: Vec<Int> = both.iter().map(|(_, z)| *z).collect();
        assert!(zetas.contains(&1) && zetas.contains(&-1));
        let distinguished = second_kind_orientation(&e, &g).unwrap();
        // The distinguished coset acts as the identity on the radical line.
        let rad = psi.base().coradical_sublattice();
        let r0 = rad.basis().row_vec(0);
        assert_eq!(distinguished.rep.mul_vec(&r0), r0);

        // |Autext| = 2 for the semisimple part when n ≥ 3, by enumeration.
        if n >= 3 {
            let ss = psi.base().derive(crate::root_datum::DeriveOp::Ss);
            let aut = aut_group(&crate::root_datum::simple_system(&ss)).unwrap();
            assert_eq!(aut.diagram_autos.len(), 2);
        }
    }
}

#[test]
fn type_c_instances_have_trivial_obstruction() {
    let e = c_type_orbit_swap();
    let psi = build_twisted_datum(&e).unwrap();
    let out = obstruction_group(&psi, &PlaceSet::Chebotarev, &cfg()).unwrap();
    assert!(out.is_trivial());
}
