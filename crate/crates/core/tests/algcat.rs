use equivariant_core::algcat::*;
use equivariant_core::coh::{enumerate_h2_representatives, phase_class, Cochain, DEFAULT_BUDGET};
use equivariant_core::grp::FiniteGroup;
use equivariant_core::linalg::{CMat, ONE, ZERO};
use equivariant_core::{AlgError, UnitRoot};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;

const TOL: f64 = 1e-8;

fn opts() -> AlgOptions {
    AlgOptions::default()
}

fn c(n: usize) -> FiniteGroup {
    FiniteGroup::cyclic(n).unwrap()
}

fn klein() -> FiniteGroup {
    FiniteGroup::product(&[c(2), c(2)]).unwrap()
}

fn quiver(n: usize) -> Algebra {
    build_cyclic_quiver_algebra(n).unwrap()
}

fn group_algebra(g: &FiniteGroup, twist: &Cochain) -> CrossedProduct {
    let ids = vec![AlgebraAut::identity(1); g.order()];
    crossed_product(&Algebra::scalars(), g, ids, twist, TOL).unwrap()
}

fn inner_sign(n: usize) -> AlgebraAut {
    AlgebraAut::inner(&quiver(n), &quiver_sign(n)).unwrap()
}

/// Klein four on the 4-vertex quiver: `(a, b) ↦ τ^{2a} ∘ Ad(w)^b`.
fn klein_on_quiver() -> Vec<AlgebraAut> {
    let t2 = quiver_rotation(4, 2);
    let s = inner_sign(4);
    let mut out = Vec::new();
    for a in 0..2 {
        for b in 0..2 {
            out.push(t2.power(a).compose(&s.power(b)));
        }
    }
    out
}

fn pauli() -> (Algebra, Vec<Complex64>, Vec<Complex64>) {
    let m2 = Algebra::matrix_algebra(2);
    let x = vec![ZERO, ONE, ONE, ZERO];
    let z = vec![ONE, ZERO, ZERO, -ONE];
    (m2, x, z)
}

fn random_unit(alg: &Algebra, seed: u64) -> Vec<Complex64> {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    loop {
        let v: Vec<Complex64> = (0..alg.dim())
            .map(|_| Complex64::new(rand::Rng::random_range(&mut rng, -1.0..1.0), rand::Rng::random_range(&mut rng, -1.0..1.0)))
            .collect();
        if alg.inverse(&v).is_some() {
            return v;
        }
    }
}

fn close(x: &[Complex64], y: &[Complex64], tol: f64) -> bool {
    x.iter().zip(y).all(|(a, b)| (a - b).norm() < tol)
}

#[test]
fn cyclic_quiver_examples() {
    assert_eq!(quiver(2).dim(), 4);
    let a = quiver(4);
    assert_eq!(a.dim(), 8);
    assert_eq!(center(&a, TOL).dim(), 1);
    assert!(a.associativity_defect() < 1e-14);
    let tau = AlgebraAut::new(&a, quiver_rotation(4, 1).matrix().clone(), TOL).unwrap();
    let id = AlgebraAut::identity(8);
    for k in 1..4 {
        assert!(tau.power(k).distance(&id) > 0.5);
    }
    assert_eq!(tau.power(4).distance(&id), 0.0);
    assert!(is_inner(&a, &tau, &opts()).is_none());
    assert!(matches!(build_cyclic_quiver_algebra(1), Err(AlgError::Invalid(_))));
}

#[test]
fn algebra_validation() {
    let d = 2;
    let mut constants = vec![ZERO; 8];
    // b_0 b_0 = b_1, everything else zero: unit laws fail for any unit.
    constants[1] = ONE;
    assert!(Algebra::new(d, &constants, vec![ONE, ZERO], TOL).is_err());
    assert!(Algebra::new(d, &constants[..7], vec![ONE, ZERO], TOL).is_err());
    let m2 = Algebra::matrix_algebra(2);
    let again = Algebra::from_sparse(4, &m2.sparse_constants(), m2.unit().to_vec(), TOL).unwrap();
    assert_eq!(again.sparse_constants(), m2.sparse_constants());
}

#[test]
fn center_examples() {
    assert_eq!(center(&Algebra::matrix_algebra(2), TOL).dim(), 1);
    assert_eq!(center(&Algebra::matrix_algebra(3), TOL).dim(), 1);
    for g in [c(3), klein(), FiniteGroup::symmetric(3).unwrap(), FiniteGroup::dihedral(4).unwrap()] {
        let ga = group_algebra(&g, &Cochain::zero(&g, 2));
        let z = center(&ga.algebra, TOL);
        let classes = g.conjugacy_classes().classes;
        assert_eq!(z.dim(), classes.len());
        // Class sums are central.
        for cls in &classes {
            let mut v = vec![ZERO; g.order()];
            for &x in &cls.elements {
                v[x] = ONE;
            }
            assert!(z.contains(&v, 1e-10));
        }
        assert!(z.contains(ga.algebra.unit(), 1e-10));
    }
}

#[test]
fn twisted_center_examples() {
    let a = quiver(4);
    assert_eq!(twisted_center(&a, &AlgebraAut::identity(8), TOL).dim(), center(&a, TOL).dim());
    assert_eq!(twisted_center(&a, &quiver_rotation(4, 1), TOL).dim(), 0);
    for (alg, seed) in [(quiver(4), 1), (Algebra::matrix_algebra(3), 2), (group_algebra(&c(3), &Cochain::zero(&c(3), 2)).algebra, 3)] {
        let u = random_unit(&alg, seed);
        let ad = AlgebraAut::inner(&alg, &u).unwrap();
        let tz = twisted_center(&alg, &ad, TOL);
        let z = center(&alg, TOL);
        assert_eq!(tz.dim(), z.dim());
        let ui = alg.inverse(&u).unwrap();
        for v in z.vectors() {
            assert!(tz.contains(&alg.mul(&v, &ui), 1e-8));
        }
    }
}

#[test]
fn is_inner_examples() {
    let a = quiver(4);
    let w = is_inner(&a, &AlgebraAut::identity(8), &opts()).unwrap();
    assert_eq!(w.attempts, 1);
    let (s, _) = a.scalar_part(&w.unit);
    assert!(close(&w.unit, &a.unit().iter().map(|x| x * s).collect::<Vec<_>>(), 1e-10));
    for seed in 0..5 {
        for alg in [quiver(4), Algebra::matrix_algebra(2)] {
            let u = random_unit(&alg, seed);
            let sigma = AlgebraAut::inner(&alg, &u).unwrap();
            let wit = is_inner(&alg, &sigma, &opts()).unwrap();
            let back = AlgebraAut::inner(&alg, &wit.unit).unwrap();
            assert!(back.distance(&sigma) < 1e-8);
            assert!((alg.norm_determinant(&wit.unit) - ONE).norm() < 1e-8);
        }
    }
    // Witnesses for σ form the twisted center of σ⁻¹. For the rotation that
    // is the span of the arrows: it lies in the radical, so nothing in it is
    // invertible.
    let tau = quiver_rotation(4, 1);
    let sol = twisted_center(&a, &tau.inverse(), TOL);
    assert_eq!(sol.dim(), 4);
    let w = wedderburn_blocks(&a, &opts()).unwrap();
    for v in sol.vectors() {
        let image = w.complement.adjoint() * CMat::from_column_slice(8, 1, &v);
        assert!(image.iter().all(|z| z.norm() < 1e-10));
    }
    assert!(is_inner(&a, &tau, &opts()).is_none());
    assert!(is_inner(&a, &quiver_rotation(4, 2), &opts()).is_none());
}

#[test]
fn automorphism_validation() {
    let a = quiver(4);
    assert!(AlgebraAut::new(&a, quiver_rotation(4, 3).matrix().clone(), TOL).is_ok());
    let mut bad = CMat::identity(8, 8);
    bad[(4, 4)] = Complex64::new(2.0, 0.0);
    bad[(0, 0)] = Complex64::new(2.0, 0.0);
    assert!(matches!(AlgebraAut::new(&a, bad, TOL), Err(AlgError::InvalidAut(_))));
    assert!(AlgebraAut::new(&a, CMat::zeros(8, 8), TOL).is_err());
}

#[test]
fn module_examples() {
    let a = quiver(4);
    let reg = AModule::regular(&a);
    assert!(reg.defect(&a) < 1e-14);
    let tw = reg.twist(&quiver_rotation(4, 1));
    assert!(tw.defect(&a) < 1e-14);
    assert!(AModule::new(&a, 8, (0..8).map(|_| CMat::identity(8, 8)).collect(), TOL).is_err());
    let cp = crossed_product(&a, &c(4), (0..4).map(|k| quiver_rotation(4, k)).collect(), &Cochain::zero(&c(4), 2), TOL).unwrap();
    let (res, phis, defect) = cp.underlying(&AModule::regular(&cp.algebra));
    assert_eq!(res.dim(), 4 * a.dim());
    assert_eq!(phis.len(), 4);
    assert!(defect < 1e-12);
}

#[test]
fn out_action_examples() {
    let a = quiver(4);
    let g = klein();
    let honest = out_action_and_units(&a, &g, klein_on_quiver(), &opts()).unwrap();
    assert!(honest.is_honest(&a, 1e-12));
    assert_eq!(honest.attempts, 0);
    for seed in 0..3 {
        let perturbed = inner_perturbation(&a, &g, &klein_on_quiver(), seed).unwrap();
        let oad = out_action_and_units(&a, &g, perturbed, &AlgOptions { seed, ..opts() }).unwrap();
        assert!(!oad.is_honest(&a, 1e-6));
        assert!(oad.relation_defect(&a).2 < 1e-8);
        // Ad(u_{g,h}) σ_{gh} = σ_g σ_h.
        for x in 0..4 {
            for y in 0..4 {
                let lhs = AlgebraAut::inner(&a, oad.unit(x, y)).unwrap().compose(oad.sigma(g.mul(x, y)));
                assert!(lhs.distance(&oad.sigma(x).compose(oad.sigma(y))) < 1e-8);
            }
        }
    }
    // The rotation is not a homomorphism to Out when paired with the wrong group.
    let z2 = c(2);
    let err = out_action_and_units(&a, &z2, vec![AlgebraAut::identity(8), quiver_rotation(4, 1)], &opts());
    assert!(matches!(err, Err(AlgError::NotOutHomomorphism(1, 1))));
}

#[test]
fn obstruction_examples() {
    let a = quiver(4);
    let g = klein();
    let honest = out_action_and_units(&a, &g, klein_on_quiver(), &opts()).unwrap();
    let ob = obstruction_class(&a, &honest, &opts()).unwrap();
    assert!(ob.is_zero());
    assert!(ob.cocycle_defect < 1e-7);
    assert!(ob.corrected_defect.unwrap() < 1e-8);
    // Inner actions by Pauli matrices are projective but unobstructed.
    let (m2, x, z) = pauli();
    let y = m2.mul(&x, &z);
    let sig: Vec<AlgebraAut> = [m2.unit().to_vec(), z.clone(), x.clone(), y]
        .iter()
        .map(|u| AlgebraAut::inner(&m2, u).unwrap())
        .collect();
    let oad = out_action_and_units(&m2, &g, sig, &opts()).unwrap();
    let ob = obstruction_class(&m2, &oad, &opts()).unwrap();
    assert!(ob.is_zero());
    let fixed = ob.corrected.unwrap();
    assert!(ob.corrected_defect.unwrap() < 1e-8);
    assert!(crossed_product_with_units(&m2, &fixed, &Cochain::zero(&g, 2), TOL).is_ok());
    // Center must be scalar.
    let ga = group_algebra(&c(2), &Cochain::zero(&c(2), 2));
    let oad = out_action_and_units(&ga.algebra, &c(2), vec![AlgebraAut::identity(2); 2], &opts()).unwrap();
    assert!(matches!(obstruction_class(&ga.algebra, &oad, &opts()), Err(AlgError::CenterNotScalar(2))));
}

#[test]
fn obstructed_units_give_no_crossed_product() {
    let r = fixture_counterexample(&opts()).unwrap();
    assert!(r.obstruction_nonzero);
    // Rebuild the candidate and try to form the crossed product anyway.
    let a = quiver(4);
    let z2 = c(2);
    let dp = crossed_product(&a, &z2, vec![AlgebraAut::identity(8), quiver_rotation(4, 2)], &Cochain::zero(&z2, 2), TOL).unwrap();
    let chi = equivariant_core::Character {
        values: vec![UnitRoot::ZERO, UnitRoot::new(1, 2)],
    };
    let g = induced_automorphism(&dp, &quiver_rotation(4, 1), &chi, TOL).unwrap();
    let oad = out_action_and_units(&dp.algebra, &z2, vec![AlgebraAut::identity(16), g], &opts()).unwrap();
    for l in enumerate_h2_representatives(&z2, DEFAULT_BUDGET).unwrap() {
        assert!(crossed_product_with_units(&dp.algebra, &oad, &l, TOL).is_err());
    }
}

fn torsor_check(alg: &Algebra, g: &FiniteGroup, sigmas: Vec<AlgebraAut>) -> Vec<DimensionTable> {
    let o = opts();
    let oad = out_action_and_units(alg, g, sigmas, &o).unwrap();
    let ob = obstruction_class(alg, &oad, &o).unwrap();
    assert!(ob.is_zero());
    let base = ob.corrected.unwrap();
    let members = torsor_actions(&base, &o).unwrap();
    assert_eq!(members.len(), enumerate_h2_representatives(g, DEFAULT_BUDGET).unwrap().len());
    let mut tables = Vec::new();
    for (i, mi) in members.iter().enumerate() {
        let obi = obstruction_class(alg, &mi.action, &o).unwrap();
        assert!(obi.is_zero());
        let ratio = unit_ratio_class(alg, &base, &mi.action, &o).unwrap();
        let lam = phase_class(g, 2, &mi.twist.to_phases(), 1e-9, DEFAULT_BUDGET).unwrap();
        assert_eq!(ratio.coordinates, lam.coordinates);
        for (j, mj) in members.iter().enumerate() {
            let r = unit_ratio_class(alg, &mi.action, &mj.action, &o).unwrap();
            assert_eq!(r.is_zero(), i == j);
        }
        let cp = crossed_product_with_units(alg, &mi.action, &Cochain::zero(g, 2), TOL).unwrap();
        tables.push(wedderburn_blocks(&cp.algebra, &o).unwrap().table());
    }
    tables
}

#[test]
fn torsor_examples() {
    let tables = torsor_check(&Algebra::scalars(), &klein(), vec![AlgebraAut::identity(1); 4]);
    assert_eq!(tables[0].simple_dims, vec![1, 1, 1, 1]);
    assert_eq!(tables[1].simple_dims, vec![2]);
    let t = torsor_check(&quiver(4), &klein(), klein_on_quiver());
    assert_eq!(t.len(), 2);
    let t = torsor_check(&quiver(4), &c(4), (0..4).map(|k| quiver_rotation(4, k)).collect());
    assert_eq!(t.len(), 1);
}

#[test]
fn crossed_product_examples() {
    let g = klein();
    let ga = group_algebra(&g, &Cochain::zero(&g, 2));
    assert_eq!(ga.algebra.dim(), 4);
    // Basis element U_x times U_y is U_{xy}.
    for x in 0..4 {
        for y in 0..4 {
            assert_eq!(ga.algebra.constant(x, y, g.mul(x, y)), ONE);
        }
    }
    let lam = enumerate_h2_representatives(&g, DEFAULT_BUDGET).unwrap().pop().unwrap();
    let tw = group_algebra(&g, &lam);
    let w = wedderburn_blocks(&tw.algebra, &opts()).unwrap();
    assert_eq!((w.block_count(), w.simple_dims.clone()), (1, vec![2]));
    let a = quiver(4);
    let z2 = c(2);
    let dp = crossed_product(&a, &z2, vec![AlgebraAut::identity(8), quiver_rotation(4, 2)], &Cochain::zero(&z2, 2), TOL).unwrap();
    assert_eq!(dp.algebra.dim(), 16);
    assert_eq!(center(&dp.algebra, TOL).dim(), 1);
    let bad = crossed_product(&a, &z2, vec![AlgebraAut::identity(8), quiver_rotation(4, 1)], &Cochain::zero(&z2, 2), TOL);
    assert!(matches!(bad, Err(AlgError::NotHomomorphism(1, 1))));
    let mut not_cocycle = Cochain::zero(&g, 2);
    not_cocycle.set(&[1, 2], UnitRoot::new(1, 3));
    let bad = crossed_product(&Algebra::scalars(), &g, vec![AlgebraAut::identity(1); 4], &not_cocycle, TOL);
    assert!(matches!(bad, Err(AlgError::Coh(_))));
}

#[test]
fn wedderburn_examples() {
    let s3 = FiniteGroup::symmetric(3).unwrap();
    let w = wedderburn_blocks(&group_algebra(&s3, &Cochain::zero(&s3, 2)).algebra, &opts()).unwrap();
    assert_eq!(w.table().simple_dims, vec![1, 1, 2]);
    assert_eq!(w.block_count(), 3);
    assert_eq!(w.radical_dim, 0);
    let d4 = FiniteGroup::dihedral(4).unwrap();
    let w = wedderburn_blocks(&group_algebra(&d4, &Cochain::zero(&d4, 2)).algebra, &opts()).unwrap();
    assert_eq!(w.table().simple_dims, vec![1, 1, 1, 1, 2]);
    let w = wedderburn_blocks(&quiver(4), &opts()).unwrap();
    assert_eq!(w.table().simple_dims, vec![1, 1, 1, 1]);
    assert_eq!((w.radical_dim, w.block_count()), (4, 1));
    let w = wedderburn_blocks(&Algebra::matrix_algebra(3), &opts()).unwrap();
    assert_eq!((w.simple_dims.clone(), w.block_count()), (vec![3], 1));
    let z2 = c(2);
    let dp = crossed_product(&quiver(4), &z2, vec![AlgebraAut::identity(8), quiver_rotation(4, 2)], &Cochain::zero(&z2, 2), TOL).unwrap();
    let w = wedderburn_blocks(&dp.algebra, &opts()).unwrap();
    assert_eq!(w.block_count(), 1);
    assert_eq!(w.table().simple_dims, vec![2, 2]);
    // Two quivers side by side: blocks add up.
    let q2 = quiver(2);
    let q3 = quiver(3);
    let sum = direct_sum(&q2, &q3);
    let w = wedderburn_blocks(&sum, &opts()).unwrap();
    assert_eq!(w.table().block_dims, vec![4, 6]);
    assert_eq!(w.simple_count(), 5);
}

fn direct_sum(a: &Algebra, b: &Algebra) -> Algebra {
    let (da, db) = (a.dim(), b.dim());
    let mut entries = a.sparse_constants();
    for (i, j, k, c) in b.sparse_constants() {
        entries.push((da + i, da + j, da + k, c));
    }
    let mut unit = a.unit().to_vec();
    unit.extend_from_slice(b.unit());
    Algebra::from_sparse(da + db, &entries, unit, TOL).unwrap()
}

#[test]
fn faithful_decomposition_examples() {
    let a = quiver(4);
    let z2 = c(2);
    let zero = Cochain::zero(&z2, 2);
    let inner = faithful_decomposition_abelian(&a, &z2, vec![AlgebraAut::identity(8), inner_sign(4)], &zero, &opts()).unwrap();
    assert_eq!(inner.subgroup, vec![0, 1]);
    assert_eq!(inner.crossed.block_dims, vec![8, 8]);
    assert_eq!(inner.components.len(), 2);
    let wa = wedderburn_blocks(&a, &opts()).unwrap().table();
    for comp in &inner.components {
        assert_eq!(comp.block, wa);
        assert!(comp.agree);
    }
    assert!(inner.verified);
    let rot = faithful_decomposition_abelian(&a, &z2, vec![AlgebraAut::identity(8), quiver_rotation(4, 2)], &zero, &opts()).unwrap();
    assert_eq!(rot.subgroup, vec![0]);
    assert_eq!(rot.crossed.block_count, 1);
    assert!(rot.verified);
    let c1 = c(1);
    let triv = faithful_decomposition_abelian(&a, &c1, vec![AlgebraAut::identity(8)], &Cochain::zero(&c1, 2), &opts()).unwrap();
    assert_eq!(triv.subgroup, vec![0]);
    assert_eq!(triv.components.len(), 1);
    assert_eq!(triv.components[0].block, wa);
    assert!(triv.verified);
    // Klein: τ² outer, Ad(w) inner, so H = {e, (0,1)} and two blocks.
    let k = klein();
    let kl = faithful_decomposition_abelian(&a, &k, klein_on_quiver(), &Cochain::zero(&k, 2), &opts()).unwrap();
    assert_eq!(kl.subgroup, vec![0, 1]);
    assert_eq!(kl.crossed.block_dims, vec![16, 16]);
    assert!(kl.verified, "{kl:?}");
    // Hypotheses are checked.
    let ga = group_algebra(&z2, &zero).algebra;
    assert!(matches!(
        faithful_decomposition_abelian(&ga, &z2, vec![AlgebraAut::identity(2); 2], &zero, &opts()),
        Err(AlgError::Hypothesis(_))
    ));
    let s3 = FiniteGroup::symmetric(3).unwrap();
    assert!(matches!(
        faithful_decomposition_abelian(&a, &s3, vec![AlgebraAut::identity(8); 6], &Cochain::zero(&s3, 2), &opts()),
        Err(AlgError::Hypothesis(_))
    ));
}

#[test]
fn counterexample_pipeline() {
    let r = fixture_counterexample(&opts()).unwrap();
    assert_eq!((r.base_dim, r.base_center_dim, r.rotation_order), (8, 1, 4));
    assert!(!r.rotation_square_inner);
    assert_eq!((r.crossed_dim, r.crossed_center_dim), (16, 1));
    assert_eq!((r.divisors.clone(), r.coordinates.clone()), (vec![2], vec![1]));
    assert!(r.cocycle_defect < 1e-7);
    // c(g, g, g) = −1.
    assert!((r.obstruction_values[7] + ONE).norm() < 1e-8);
    assert!(r.stability.stable);
    assert_eq!(r.stability.coordinates.len(), STABILITY_SEEDS);
    assert_eq!(r.simple_permutation, vec![1, 0]);
    assert!(r.fixed_simples.is_empty());
    assert_eq!(r.resolved_coordinates, vec![0]);
    assert_eq!(r.d_prime.simple_dims, vec![2, 2]);
    assert_eq!(r.d_prime_z4.simple_dims, vec![4, 4]);
    assert_eq!(r.d_prime_z4.block_count, 1);
    assert!(r.passed());
}

fn crossed_suite() -> Vec<CrossedProduct> {
    let a = quiver(4);
    let z2 = c(2);
    let k = klein();
    let s3 = FiniteGroup::symmetric(3).unwrap();
    let lam = enumerate_h2_representatives(&k, DEFAULT_BUDGET).unwrap().pop().unwrap();
    let (m2, x, z) = pauli();
    let y = m2.mul(&x, &z);
    let pauli_sig: Vec<AlgebraAut> = [m2.unit().to_vec(), z, x, y].iter().map(|u| AlgebraAut::inner(&m2, u).unwrap()).collect();
    let pauli_oad = out_action_and_units(&m2, &k, pauli_sig, &opts()).unwrap();
    let pauli_fixed = obstruction_class(&m2, &pauli_oad, &opts()).unwrap().corrected.unwrap();
    vec![
        crossed_product(&a, &z2, vec![AlgebraAut::identity(8), quiver_rotation(4, 2)], &Cochain::zero(&z2, 2), TOL).unwrap(),
        crossed_product(&a, &z2, vec![AlgebraAut::identity(8), inner_sign(4)], &Cochain::zero(&z2, 2), TOL).unwrap(),
        crossed_product(&a, &c(4), (0..4).map(|j| quiver_rotation(4, j)).collect(), &Cochain::zero(&c(4), 2), TOL).unwrap(),
        crossed_product(&a, &k, klein_on_quiver(), &lam, TOL).unwrap(),
        crossed_product(&quiver(3), &c(3), (0..3).map(|j| quiver_rotation(3, j)).collect(), &Cochain::zero(&c(3), 2), TOL).unwrap(),
        group_algebra(&s3, &Cochain::zero(&s3, 2)),
        group_algebra(&k, &lam),
        crossed_product_with_units(&m2, &pauli_fixed, &Cochain::zero(&k, 2), TOL).unwrap(),
        crossed_product_with_units(&m2, &pauli_fixed, &lam, TOL).unwrap(),
    ]
}

#[test]
fn center_matches_twisted_conjugation_invariants() {
    for cp in crossed_suite() {
        let h = hochschild_crossed(&cp, &opts()).unwrap();
        assert!(h.agrees, "{h:?}");
        assert_eq!(h.center_dim, h.dim_formula);
        assert_eq!(h.class_dims.iter().sum::<usize>(), h.center_dim);
        assert!((h.euler.re - h.center_dim as f64).abs() < 1e-8 && h.euler.im.abs() < 1e-8);
        let conj = centralizer_conjugation(&cp, TOL).unwrap();
        assert!(conj.action_defect(cp.group()) < 1e-8);
        let w = wedderburn_blocks(&cp.algebra, &opts()).unwrap();
        assert_eq!(w.simple_dims.iter().map(|d| d * d).sum::<usize>(), w.semisimple_dim());
        assert_eq!(w.block_dims.iter().sum::<usize>(), cp.algebra.dim());
        let (_, _, defect) = cp.underlying(&AModule::regular(&cp.algebra));
        assert!(defect < 1e-8);
    }
}

#[test]
fn twisted_center_dimensions_are_conjugation_covariant() {
    // S₃ permuting three orthogonal idempotents, and by permutation matrices on M₃.
    let s3 = FiniteGroup::symmetric(3).unwrap();
    let comm = direct_sum(&direct_sum(&Algebra::scalars(), &Algebra::scalars()), &Algebra::scalars());
    let m3 = Algebra::matrix_algebra(3);
    let perms: Vec<Vec<usize>> = (0..6).map(|g| perm_of(&s3, g)).collect();
    let on_comm: Vec<AlgebraAut> = perms
        .iter()
        .map(|p| {
            let mut m = CMat::zeros(3, 3);
            for i in 0..3 {
                m[(p[i], i)] = ONE;
            }
            AlgebraAut::new(&comm, m, TOL).unwrap()
        })
        .collect();
    let oad = OutActionData::honest(&comm, &s3, on_comm, TOL).unwrap();
    let dims = twisted_center_covariance(&comm, &oad, TOL).unwrap();
    assert_eq!(dims[0], 3);
    let on_m3: Vec<AlgebraAut> = perms
        .iter()
        .map(|p| {
            let mut u = vec![ZERO; 9];
            for i in 0..3 {
                u[p[i] * 3 + i] = ONE;
            }
            AlgebraAut::inner(&m3, &u).unwrap()
        })
        .collect();
    let oad = OutActionData::honest(&m3, &s3, on_m3, TOL).unwrap();
    assert_eq!(twisted_center_covariance(&m3, &oad, TOL).unwrap(), vec![1; 6]);
    for cp in crossed_suite() {
        assert!(twisted_center_covariance(&cp.base, &cp.action, TOL).is_ok());
    }
}

/// The permutation of `{0,1,2}` realized by `g`, read off from the action of
/// `S₃` on the cosets of a subgroup of order 2.
fn perm_of(s3: &FiniteGroup, g: usize) -> Vec<usize> {
    let sub = (1..6).find(|&x| s3.element_order(x) == 2).unwrap();
    let cos = s3.left_cosets(&s3.generated_subgroup(&[sub])).unwrap();
    cos.representatives.iter().map(|&r| cos.coset_of[s3.mul(g, r)]).collect()
}

#[test]
fn invariant_simple_forces_vanishing_obstruction() {
    let a4 = quiver(4);
    let z2 = c(2);
    let dp = crossed_product(&a4, &z2, vec![AlgebraAut::identity(8), quiver_rotation(4, 2)], &Cochain::zero(&z2, 2), TOL).unwrap();
    let chi = equivariant_core::Character {
        values: vec![UnitRoot::ZERO, UnitRoot::new(1, 2)],
    };
    let g = induced_automorphism(&dp, &quiver_rotation(4, 1), &chi, TOL).unwrap();
    let (m2, _, z) = pauli();
    let suite: Vec<(Algebra, AlgebraAut, usize)> = vec![
        (a4.clone(), quiver_rotation(4, 2), 2),
        (a4.clone(), inner_sign(4), 2),
        (a4.clone(), AlgebraAut::identity(8), 3),
        (quiver(2), quiver_rotation(2, 1), 2),
        (quiver(3), quiver_rotation(3, 1), 3),
        (m2.clone(), AlgebraAut::inner(&m2, &z).unwrap(), 2),
        (dp.algebra.clone(), g, 2),
        (dp.algebra.clone(), quiver_like_identity(&dp), 2),
    ];
    let mut obstructed = 0;
    for (alg, sigma, order) in suite {
        let cand = cyclic_candidate(&alg, &sigma, order, &opts()).unwrap();
        assert!(cand.hypotheses_hold());
        let class = cand.class.as_ref().unwrap();
        if !cand.invariant_simples.is_empty() {
            assert!(class.is_zero(), "invariant simples {:?} with nonzero class", cand.invariant_simples);
        }
        if !class.is_zero() {
            obstructed += 1;
        }
    }
    assert_eq!(obstructed, 1);
}

fn quiver_like_identity(cp: &CrossedProduct) -> AlgebraAut {
    AlgebraAut::identity(cp.algebra.dim())
}

#[test]
fn wedderburn_reports_degenerate_splits() {
    // Two copies of ℂ: any split works, but the tolerance must be honoured.
    let two = direct_sum(&Algebra::scalars(), &Algebra::scalars());
    let w = wedderburn_blocks(&two, &opts()).unwrap();
    assert_eq!(w.simple_dims, vec![1, 1]);
    assert!(w.spectral_gap > CLUSTER_TOLERANCE);
}

/// Honest actions of `ℤ_k` on the `n`-vertex quiver by powers of
/// `τ^{n/k}`, optionally composed with `Ad(w)` (n even), twisted by a
/// random coboundary.
fn random_crossed(n: usize, k: usize, sign: bool, gauge: &[i64]) -> CrossedProduct {
    let a = quiver(n);
    let g = c(k);
    let step = n / k;
    let s = if sign && n.is_multiple_of(2) { inner_sign(n) } else { AlgebraAut::identity(2 * n) };
    let sigmas: Vec<AlgebraAut> = (0..k).map(|j| quiver_rotation(n, step * j).compose(&s.power(j % 2 * usize::from(k.is_multiple_of(2))))).collect();
    let mu: Vec<UnitRoot> = (0..k).map(|j| if j == 0 { UnitRoot::ZERO } else { UnitRoot::new(gauge[j % gauge.len()], 12) }).collect();
    let lam = Cochain::from_fn(&g, 2, |t| mu[t[1]] - mu[g.mul(t[0], t[1])] + mu[t[0]]);
    crossed_product(&a, &g, sigmas, &lam, TOL).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 12, ..ProptestConfig::default() })]

    #[test]
    fn crossed_products_satisfy_the_center_formula(
        (n, k) in prop_oneof![Just((2, 2)), Just((3, 3)), Just((4, 2)), Just((4, 4)), Just((6, 3)), Just((6, 2))],
        sign in any::<bool>(),
        gauge in proptest::collection::vec(0i64..12, 1..4),
        seed in 0u64..1000,
    ) {
        let cp = random_crossed(n, k, sign, &gauge);
        let o = AlgOptions { seed, ..opts() };
        let h = hochschild_crossed(&cp, &o).unwrap();
        prop_assert!(h.agrees);
        let w = wedderburn_blocks(&cp.algebra, &o).unwrap();
        prop_assert_eq!(w.simple_dims.iter().map(|d| d * d).sum::<usize>(), w.semisimple_dim());
        prop_assert_eq!(w.block_count(), h.center_dim - w.center_radical_dim);
    }

    #[test]
    fn obstruction_class_is_stable_under_rerandomization(
        (n, k) in prop_oneof![Just((2, 2)), Just((4, 2)), Just((4, 4)), Just((3, 3))],
        sign in any::<bool>(),
        seed in 0u64..1000,
    ) {
        let cp = random_crossed(n, k, sign, &[0]);
        let seeds: Vec<u64> = (0..STABILITY_SEEDS as u64).map(|j| seed + j).collect();
        let st = obstruction_stability(&cp.base, cp.group(), cp.action.sigmas(), &seeds, &opts()).unwrap();
        prop_assert!(st.stable);
        prop_assert!(st.coordinates.iter().all(|c| c.iter().all(|&x| x == 0)));
    }
}
