use super::*;
use crate::lattice::Sublattice;
use crate::{Int, Mat};

/// Rank 1, roots {±2}, coroots {±1} in weight coordinates (SL₂-style).
#[allow(dead_code)]
pub(crate) fn sl2() -> RootDatum {
    RootDatum::new(1, vec![vec![2], vec![-2]], vec![vec![1], vec![-1]])
}

/// Rank 1, roots {±1}, coroots {±2} (PGL₂-style).
pub(crate) fn pgl2() -> RootDatum {
    RootDatum::new(1, vec![vec![1], vec![-1]], vec![vec![2], vec![-2]])
}

/// Rank 2 with α = (1,−1) = α∨ (GL₂-style).
pub(crate) fn gl2() -> RootDatum {
    RootDatum::new(2, vec![vec![1, -1], vec![-1, 1]], vec![vec![1, -1], vec![-1, 1]])
}

fn catalog_sc(name: &str) -> PinnedRootDatum {
    standard(name, CatalogForm::SimplyConnected).unwrap()
}

fn catalog_ad(name: &str) -> PinnedRootDatum {
    standard(name, CatalogForm::Adjoint).unwrap()
}

#[test]
fn validation_examples() {
    assert!(sl2().is_valid());
    assert!(pgl2().is_valid());
    assert!(gl2().is_valid());
    // Pairing axiom violation: ⟨α∨, α⟩ = 1.
    let bad = RootDatum::new(1, vec![vec![1], vec![-1]], vec![vec![1], vec![-1]]);
    let report = bad.validate();
    assert!(report
        .violations
        .iter()
        .any(|v| matches!(v, AxiomViolation::PairingNotTwo { value: 1, .. })));
    // A reflection that escapes the root set.
    let escaping = RootDatum::new(
        2,
        vec![vec![2, 0], vec![-2, 0], vec![0, 2], vec![0, -2], vec![2, 2], vec![-2, -2]],
        vec![vec![1, 0], vec![-1, 0], vec![0, 1], vec![0, -1], vec![1, 1], vec![-1, -1]],
    );
    assert!(!escaping.is_valid());
}

#[test]
fn reflection_examples() {
    let d = sl2();
    assert_eq!(d.reflect(0, d.root(0)), d.root(1).to_vec());
    let g = gl2();
    let alpha = g.root_index(&[1, -1]).unwrap();
    assert_eq!(g.reflect(alpha, &[1, 0]), vec![0, 1]);
    // Fixed hyperplane.
    assert_eq!(g.reflect(alpha, &[1, 1]), vec![1, 1]);
    // Involution.
    let twice = g.reflect(alpha, &g.reflect(alpha, &[5, -3]));
    assert_eq!(twice, vec![5, -3]);
    assert!(matches!(d.reflection(7, &[1]), Err(RootDatumError::IndexOutOfRange(7))));
}

#[test]
fn weyl_group_orders() {
    assert_eq!(weyl_group(&RootDatum::torus(3)).order(), 1);
    assert_eq!(weyl_group(catalog_sc("A2").base()).order(), 6);
    assert_eq!(weyl_group(catalog_ad("A2").base()).order(), 6);
    assert_eq!(weyl_group(catalog_sc("C3").base()).order(), 48);
}

#[test]
fn weyl_elements_permute_roots() {
    let d = catalog_sc("B2").base().clone();
    let w = weyl_group(&d);
    assert_eq!(w.order(), 8);
    for m in w.elements() {
        for i in 0..d.num_roots() {
            let img = m.mul_vec(d.root(i));
            let k = d.root_index(&img).expect("weyl image is a root");
            // Contragredient compatibility on the coroot side.
            let mt_inv = m.inverse().unwrap().transpose();
            assert_eq!(mt_inv.mul_vec(d.coroot(i)), d.coroot(k).to_vec());
        }
    }
}

#[test]
fn simple_system_examples() {
    assert_eq!(simple_system(&RootDatum::torus(2)).num_nodes(), 0);
    let a2 = simple_system(catalog_sc("A2").base());
    assert_eq!(a2.num_nodes(), 2);
    let b2 = simple_system(catalog_sc("B2").base());
    assert_eq!(b2.num_nodes(), 2);
    // The highest root decomposes over Δ with coefficient sum ≥ 2.
    let base = b2.base();
    let max_sum = (0..base.num_roots())
        .filter_map(|i| b2.expand_in_simple_roots(base.root(i)))
        .map(|c| c.iter().sum::<Int>())
        .max()
        .unwrap();
    assert!(max_sum >= 2, "B2 highest root expands with total coefficient {max_sum}");
    assert_eq!(max_sum, 3);
}

#[test]
fn cartan_and_classification() {
    let a1 = catalog_sc("A1");
    assert_eq!(cartan_matrix(&a1), Mat::from_i64(1, 1, &[2]));
    assert_eq!(classify(&a1).unwrap().type_string(), "A1");

    for (name, expect) in [
        ("A3", "A3"),
        ("B3", "B3"),
        ("C3", "C3"),
        ("D4", "D4"),
        ("G2", "G2"),
        ("F4", "F4"),
        ("D6", "D6"),
    ] {
        let p = catalog_sc(name);
        assert_eq!(classify(&p).unwrap().type_string(), expect, "classifying {name}");
        let p = catalog_ad(name);
        assert_eq!(classify(&p).unwrap().type_string(), expect, "classifying adjoint {name}");
    }
    // B2 and C2 are the same diagram; both normalize to B2.
    assert_eq!(classify(&catalog_sc("B2")).unwrap().type_string(), "B2");
    assert_eq!(classify(&catalog_sc("C2")).unwrap().type_string(), "B2");

    // GL_n style data classify as A_{n-1}.
    let gl2 = simple_system(&gl2());
    assert_eq!(classify(&gl2).unwrap().type_string(), "A1");

    // Non-reduced data are rejected.
    let nonreduced = RootDatum::new(
        1,
        vec![vec![1], vec![-1], vec![2], vec![-2]],
        vec![vec![2], vec![-2], vec![1], vec![-1]],
    );
    assert!(nonreduced.is_valid());
    let pinned = simple_system(&nonreduced);
    assert!(matches!(classify(&pinned), Err(RootDatumError::NotReduced)));
}

#[test]
fn b3_and_c3_bond_directions_differ() {
    let b3 = classify(&catalog_sc("B3")).unwrap();
    let c3 = classify(&catalog_sc("C3")).unwrap();
    let b_bond = b3.bonds.iter().find(|b| b.multiplicity == 2).unwrap();
    let c_bond = c3.bonds.iter().find(|b| b.multiplicity == 2).unwrap();
    // In B3 the short root sits at the chain end; in C3 the long one does.
    let b_comp = &b3.components[0];
    let c_comp = &c3.components[0];
    assert_ne!(b_bond.long_end, Some(*b_comp.nodes.last().unwrap()));
    assert_eq!(c_bond.long_end, Some(*c_comp.nodes.last().unwrap()));
}

#[test]
fn derive_examples() {
    let g = gl2();
    assert_eq!(g.derive(DeriveOp::Dual).derive(DeriveOp::Dual), g);

    let ad = g.derive(DeriveOp::Ad);
    assert_eq!(ad, pgl2());

    let der = g.derive(DeriveOp::Der);
    assert_eq!(der, sl2());

    assert_eq!(g.coradical_sublattice(), Sublattice::from_rows(2, vec![vec![1, 1]]));
    assert_eq!(g.derive(DeriveOp::Corad).rank(), 1);
    assert_eq!(g.derive(DeriveOp::Rad).rank(), 1);

    // Idempotence and validity across the catalog.
    for name in ["A2", "B2", "C3", "D4", "G2"] {
        let d = catalog_sc(name).base().clone();
        for op in DeriveOp::ALL {
            let out = d.derive(op);
            assert!(out.is_valid(), "{name} {:?} output invalid", op);
        }
        assert_eq!(d.derive(DeriveOp::Ad).derive(DeriveOp::Ad), d.derive(DeriveOp::Ad));
        assert!(d.derive(DeriveOp::Ad).predicates().adjoint, "{name}: ad output is adjoint");
        assert!(d.derive(DeriveOp::Sc).predicates().simply_connected);
        assert_eq!(d.derive(DeriveOp::Der), d.derive(DeriveOp::Dual).derive(DeriveOp::Ss).dual());
    }
}

#[test]
fn predicate_examples() {
    let p = sl2().predicates();
    assert!(p.reduced && p.semisimple && p.simply_connected && !p.adjoint);
    let p = gl2().predicates();
    assert!(p.reduced && !p.semisimple);
    let nonreduced = RootDatum::new(
        1,
        vec![vec![1], vec![-1], vec![2], vec![-2]],
        vec![vec![2], vec![-2], vec![1], vec![-1]],
    );
    assert!(!nonreduced.predicates().reduced);
}

#[test]
fn aut_group_examples() {
    let a1 = catalog_sc("A1");
    let aut = aut_group(&a1).unwrap();
    assert_eq!(aut.weyl.order(), 2);
    assert_eq!(aut.diagram_autos.len(), 1);

    let a2 = catalog_sc("A2");
    let aut = aut_group(&a2).unwrap();
    assert_eq!(aut.order(), 12);
    assert_eq!(aut.diagram_autos.len(), 2);

    let d4 = catalog_sc("D4");
    let aut = aut_group(&d4).unwrap();
    assert_eq!(aut.diagram_autos.len(), 6, "D4 triality");

    assert!(matches!(aut_group(&simple_system(&gl2())), Err(RootDatumError::NotSemisimple)));
}

#[test]
fn aut_factorization_unique() {
    let b2 = catalog_sc("B2");
    let aut = aut_group(&b2).unwrap();
    let mut seen = std::collections::HashSet::new();
    for w in aut.weyl.elements() {
        for e in &aut.diagram_autos {
            let a = w * &e.matrix;
            let (wi, ei) = factor_automorphism(&aut, &a).expect("product factors");
            assert_eq!(aut.weyl.elements()[wi], *w);
            assert_eq!(aut.diagram_autos[ei].matrix, e.matrix);
            let mut k = Vec::new();
            for i in 0..a.rows() {
                k.extend_from_slice(a.row(i));
            }
            assert!(seen.insert(k), "products w·e collide");
        }
    }
    assert_eq!(seen.len(), aut.order());
}

#[test]
fn coxeter_examples() {
    let a1 = catalog_sc("A1");
    assert_eq!(coxeter_element(&a1), Mat::from_i64(1, 1, &[-1]));

    let a2 = catalog_sc("A2");
    let c = coxeter_element(&a2);
    let c3 = &(&c * &c) * &c;
    assert!(c3.is_identity());
    let fixed = crate::lattice::kernel_basis(&(&c - &Mat::identity(2)).convert::<crate::Big>());
    assert_eq!(fixed.rows(), 0, "A2 coxeter element has no fixed vectors");

    let gl = simple_system(&gl2());
    let c = coxeter_element(&gl);
    let fixed = crate::lattice::kernel_basis(&(&c - &Mat::identity(2)).convert::<crate::Big>());
    assert_eq!(fixed.rows(), 1, "GL2 coxeter fixes the radical line");
}

#[test]
fn isomorphism_examples() {
    let a2 = catalog_sc("A2").base().clone();
    let isoms = isomorphisms(&a2, &a2).unwrap();
    assert_eq!(isoms.len(), aut_group(&catalog_sc("A2")).unwrap().order());
    for f in isoms.iter().take(4) {
        assert!(f.is_valid());
        // ᵗf(f(α)∨) = α∨ for every root.
        let ft = f.map.transpose();
        for i in 0..a2.num_roots() {
            let img = f.map.mul_vec(a2.root(i));
            let k = a2.root_index(&img).unwrap();
            assert_eq!(ft.mul_vec(a2.coroot(k)), a2.coroot(i).to_vec());
        }
    }

    // Different fundamental-group invariants: empty.
    let sc = catalog_sc("A2").base().clone();
    let ad = catalog_ad("A2").base().clone();
    assert!(isomorphisms(&sc, &ad).unwrap().is_empty());

    // Spin5 ≅ Sp4.
    let b2 = catalog_sc("B2").base().clone();
    let c2 = catalog_sc("C2").base().clone();
    let isoms = isomorphisms(&b2, &c2).unwrap();
    assert_eq!(isoms.len(), 8);
    assert!(isoms.iter().all(|f| f.is_valid()));

    assert!(matches!(isomorphisms(&gl2(), &gl2()), Err(RootDatumError::NotSemisimple)));
}

#[test]
fn weyl_isomorphism_transport() {
    // A morphism conjugates the Weyl group of the source onto the target's.
    let b2 = catalog_sc("B2").base().clone();
    let c2 = catalog_sc("C2").base().clone();
    let f = &isomorphisms(&b2, &c2).unwrap()[0];
    let w1 = weyl_group(&b2);
    let w2 = weyl_group(&c2);
    let f_inv = f.map.inverse().unwrap();
    for w in w1.elements() {
        let conj = &(&f.map * w) * &f_inv;
        assert!(w2.contains(&conj));
    }
}

#[test]
fn catalog_is_complete() {
    let names = standard_names();
    for expected in
        ["A1", "A2", "A3", "A4", "A5", "B2", "B3", "B4", "C2", "C3", "C4", "D4", "D5", "D6", "G2", "F4"]
    {
        assert!(names.iter().any(|n| n == expected), "catalog missing {expected}");
    }
    for name in &names {
        for form in [CatalogForm::SimplyConnected, CatalogForm::Adjoint] {
            let p = standard(name, form).unwrap();
            assert!(p.base().is_valid(), "catalog {name} {form:?} invalid");
            assert!(p.base().is_semisimple());
        }
    }
}
