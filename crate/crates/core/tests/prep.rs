use equivariant_core::coh::{coboundary, cohomology_group, Cochain, Coefficients, DEFAULT_BUDGET};
use equivariant_core::linalg::{nullspace, CMat};
use equivariant_core::prep::*;
use equivariant_core::{FiniteGroup, UnitRoot};
use num_complex::Complex64;
use proptest::prelude::*;

fn c(n: usize) -> FiniteGroup {
    FiniteGroup::cyclic(n).unwrap()
}

fn dims(g: &FiniteGroup, alpha: &[Complex64]) -> Vec<usize> {
    irreps_twisted(g, alpha, &SplitOptions::default())
        .unwrap()
        .iter()
        .map(|r| r.dim)
        .collect()
}

fn commutant_dim(r: &ProjectiveRep) -> usize {
    // Stack (U ⊗ 1 − 1 ⊗ Uᵀ) acting on vec(X) over all group elements.
    let d = r.dim;
    let id = CMat::identity(d, d);
    let mut big = CMat::zeros(d * d * r.matrices.len(), d * d);
    for (k, u) in r.matrices.iter().enumerate() {
        let block = u.kronecker(&id) - id.kronecker(&u.transpose());
        big.view_mut((k * d * d, 0), (d * d, d * d)).copy_from(&block);
    }
    nullspace(&big, 1e-8).ncols()
}

#[test]
fn ordinary_character_theory_oracle() {
    let cases: Vec<(FiniteGroup, Vec<usize>)> = vec![
        (c(2), vec![1, 1]),
        (c(5), vec![1; 5]),
        (FiniteGroup::symmetric(3).unwrap(), vec![1, 1, 2]),
        (FiniteGroup::dihedral(4).unwrap(), vec![1, 1, 1, 1, 2]),
        (FiniteGroup::symmetric(4).unwrap(), vec![1, 1, 2, 3, 3]),
        (FiniteGroup::dihedral(5).unwrap(), vec![1, 1, 2, 2]),
    ];
    for (g, want) in cases {
        let alpha = trivial_twist(&g);
        assert_eq!(dims(&g, &alpha), want, "order {}", g.order());
        assert_eq!(alpha_regular_classes(&g, &alpha, 1e-9).unwrap().len(), g.conjugacy_classes().classes.len());
    }
}

#[test]
fn order_48_regular_decomposition() {
    let g = FiniteGroup::product(&[c(2), FiniteGroup::symmetric(4).unwrap()]).unwrap();
    let d = dims(&g, &trivial_twist(&g));
    assert_eq!(d.iter().map(|x| x * x).sum::<usize>(), 48);
    assert_eq!(d.len(), 10);
}

#[test]
fn nontrivial_twists() {
    let klein = FiniteGroup::product(&[c(2), c(2)]).unwrap();
    let d4 = FiniteGroup::dihedral(4).unwrap();
    let z2z4 = FiniteGroup::product(&[c(2), c(4)]).unwrap();
    for (g, want) in [(klein, vec![2]), (d4, vec![2, 2]), (z2z4, vec![2, 2])] {
        let h = cohomology_group(&g, 2, Coefficients::Circle, DEFAULT_BUDGET).unwrap();
        let alpha = twist_table(&h.generators[0]);
        let irr = irreps_twisted(&g, &alpha, &SplitOptions::default()).unwrap();
        assert_eq!(irr.iter().map(|r| r.dim).collect::<Vec<_>>(), want);
        assert_eq!(alpha_regular_classes(&g, &alpha, 1e-9).unwrap().len(), want.len());
        for r in &irr {
            assert!(r.defect() < 1e-8);
            assert_eq!(commutant_dim(r), 1);
        }
    }
}

#[test]
fn klein_pauli_assignment_and_brute_force_regularity() {
    let g = FiniteGroup::product(&[c(2), c(2)]).unwrap();
    let h = cohomology_group(&g, 2, Coefficients::Circle, DEFAULT_BUDGET).unwrap();
    let alpha = twist_table(&h.generators[0]);
    // Brute-force twisted commutation scalars u_x u_y u_x⁻¹ u_y⁻¹ = α(x,y)/α(y,x).
    let regular: Vec<usize> = (0..4)
        .filter(|&x| (0..4).all(|y| (alpha[x * 4 + y] / alpha[y * 4 + x] - 1.0).norm() < 1e-9))
        .collect();
    assert_eq!(regular, vec![0]);
    let irr = irreps_twisted(&g, &alpha, &SplitOptions::default()).unwrap();
    let u = &irr[0].matrices;
    // Non-identity matrices pairwise anticommute, as Pauli matrices do.
    for x in 1..4 {
        for y in 1..4 {
            if x != y {
                let ac = &u[x] * &u[y] + &u[y] * &u[x];
                assert!(ac.norm() < 1e-8);
            }
        }
    }
}

#[test]
fn schur_orthogonality() {
    let groups = [FiniteGroup::symmetric(3).unwrap(), FiniteGroup::dihedral(4).unwrap(), c(6)];
    for g in groups {
        for rep in cohomology_group(&g, 2, Coefficients::Circle, DEFAULT_BUDGET)
            .unwrap()
            .generators
            .iter()
            .map(twist_table)
            .chain([trivial_twist(&g)])
        {
            let irr = irreps_twisted(&g, &rep, &SplitOptions::default()).unwrap();
            for (i, a) in irr.iter().enumerate() {
                for (j, b) in irr.iter().enumerate() {
                    let ip = character_inner(&a.character(), &b.character());
                    let want = if i == j { 1.0 } else { 0.0 };
                    assert!((ip - want).norm() < 1e-6);
                }
            }
        }
    }
}

#[test]
fn cyclic_groups_have_n_regular_classes_for_any_twist() {
    for n in 2..=8 {
        let g = c(n);
        let lambda = Cochain::from_fn(&g, 1, |t| UnitRoot::new((t[0] * t[0]) as i64, 2 * n as i64 + 1));
        let alpha = twist_table(&coboundary(&lambda));
        assert_eq!(alpha_regular_classes(&g, &alpha, 1e-9).unwrap().len(), n);
        assert_eq!(dims(&g, &alpha), vec![1; n]);
    }
}

#[test]
fn regular_representation_multiplicities() {
    let g = FiniteGroup::dihedral(4).unwrap();
    let alpha = trivial_twist(&g);
    let irr = irreps_twisted(&g, &alpha, &SplitOptions::default()).unwrap();
    let reg = TwistedGroupAlgebra::new(&g, alpha).regular_rep();
    let mult = multiplicities(&reg, &irr).unwrap();
    assert_eq!(mult, irr.iter().map(|r| r.dim).collect::<Vec<_>>());
}

#[test]
fn twisted_algebra_associativity_tracks_cocycle_condition() {
    let g = FiniteGroup::symmetric(3).unwrap();
    let alg = TwistedGroupAlgebra::new(&g, trivial_twist(&g));
    assert!(alg.associativity_defect() < 1e-12);
    let mut bad = trivial_twist(&g);
    bad[6 + 2] = Complex64::new(-1.0, 0.0);
    let alg = TwistedGroupAlgebra::new(&g, bad.clone());
    assert!(alg.associativity_defect() > 0.5);
    assert!(twist_defect(&g, &bad).0 > 0.5);
}

#[test]
fn deterministic_given_seed() {
    let g = FiniteGroup::symmetric(3).unwrap();
    let a = irreps_twisted(&g, &trivial_twist(&g), &SplitOptions::default()).unwrap();
    let b = irreps_twisted(&g, &trivial_twist(&g), &SplitOptions::default()).unwrap();
    for (x, y) in a.iter().zip(&b) {
        for (u, v) in x.matrices.iter().zip(&y.matrices) {
            assert_eq!(u, v);
        }
    }
}

fn fixture(which: usize) -> FiniteGroup {
    match which {
        0 => FiniteGroup::product(&[c(2), c(2)]).unwrap(),
        1 => FiniteGroup::dihedral(4).unwrap(),
        2 => FiniteGroup::symmetric(3).unwrap(),
        _ => FiniteGroup::product(&[c(2), c(4)]).unwrap(),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn coboundary_reweighting(which in 0usize..4, cls in 0usize..2, lam in proptest::collection::vec(0i64..12, 8)) {
        let g = fixture(which);
        let reps = equivariant_core::coh::enumerate_h2_representatives(&g, DEFAULT_BUDGET).unwrap();
        let base = &reps[cls % reps.len()];
        let lambda = Cochain::from_fn(&g, 1, |t| UnitRoot::new(lam[t[0] % lam.len()], 12));
        let shifted = base.add(&coboundary(&lambda));
        let a0 = twist_table(base);
        let a1 = twist_table(&shifted);
        prop_assert_eq!(dims(&g, &a0), dims(&g, &a1));
        prop_assert_eq!(
            alpha_regular_classes(&g, &a0, 1e-9).unwrap(),
            alpha_regular_classes(&g, &a1, 1e-9).unwrap()
        );
        let irr = irreps_twisted(&g, &a0, &SplitOptions::default()).unwrap();
        let phases: Vec<Complex64> = lambda.to_phases();
        for r in irr {
            let rw = r.reweight(&phases);
            for (x, y) in rw.alpha.iter().zip(&a1) {
                prop_assert!((x - y).norm() < 1e-9);
            }
            prop_assert!(rw.defect() < 1e-8);
        }
    }
}
