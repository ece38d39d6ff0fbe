use equivariant_core::coh::*;
use equivariant_core::{CohError, FiniteGroup, GroupHom, UnitRoot};
use num_complex::Complex64;
use proptest::prelude::*;

fn klein() -> FiniteGroup {
    let c2 = FiniteGroup::cyclic(2).unwrap();
    FiniteGroup::product(&[c2.clone(), c2]).unwrap()
}

fn quaternion() -> FiniteGroup {
    // Elements ±1, ±i, ±j, ±k as (sign, unit) with unit 0..4 = 1, i, j, k.
    let unit_mul = |a: usize, b: usize| -> (bool, usize) {
        match (a, b) {
            (0, x) | (x, 0) => (false, x),
            (x, y) if x == y => (true, 0),
            (1, 2) => (false, 3),
            (2, 3) => (false, 1),
            (3, 1) => (false, 2),
            (2, 1) => (true, 3),
            (3, 2) => (true, 1),
            (1, 3) => (true, 2),
            _ => unreachable!(),
        }
    };
    let mut table = vec![0; 64];
    for a in 0..8 {
        for b in 0..8 {
            let (neg, u) = unit_mul(a % 4, b % 4);
            let sign = (a / 4 + b / 4 + neg as usize) % 2;
            table[a * 8 + b] = sign * 4 + u;
        }
    }
    FiniteGroup::from_table(8, table).unwrap()
}

fn small_groups() -> Vec<(&'static str, FiniteGroup)> {
    let c = |n| FiniteGroup::cyclic(n).unwrap();
    vec![
        ("Z2", c(2)),
        ("Z3", c(3)),
        ("Z4", c(4)),
        ("Z5", c(5)),
        ("Z6", c(6)),
        ("Z7", c(7)),
        ("Z8", c(8)),
        ("Z2xZ2", klein()),
        ("Z2xZ4", FiniteGroup::product(&[c(2), c(4)]).unwrap()),
        ("Z2^3", FiniteGroup::product(&[c(2), c(2), c(2)]).unwrap()),
        ("S3", FiniteGroup::symmetric(3).unwrap()),
        ("D4", FiniteGroup::dihedral(4).unwrap()),
        ("Q8", quaternion()),
    ]
}

#[test]
fn cyclic_cohomology_table() {
    for n in 2..=9usize {
        let g = FiniteGroup::cyclic(n).unwrap();
        for i in 1..=4 {
            let h = cohomology_group(&g, i, Coefficients::Circle, DEFAULT_BUDGET).unwrap();
            let want: Vec<i64> = if i % 2 == 1 { vec![n as i64] } else { vec![] };
            assert_eq!(h.divisors, want, "H^{i}(Z_{n}, C*)");
            for gen in &h.generators {
                assert!(coboundary(gen).is_zero());
            }
        }
    }
}

#[test]
fn known_multipliers_and_third_cohomology() {
    // Schur multipliers and H³(G, ℂ*) ≅ H⁴(G, ℤ) for small groups.
    let cases: &[(&str, Vec<i64>, i64)] = &[
        ("Z2xZ2", vec![2], 8),
        ("Z2xZ4", vec![2], 16),
        ("Z2^3", vec![2, 2, 2], 128),
        ("S3", vec![], 6),
        ("D4", vec![2], 16),
        ("Q8", vec![], 8),
    ];
    let groups = small_groups();
    for (name, h2, h3_order) in cases {
        let g = &groups.iter().find(|(n, _)| n == name).unwrap().1;
        let h = cohomology_group(g, 2, Coefficients::Circle, DEFAULT_BUDGET).unwrap();
        assert_eq!(&h.divisors, h2, "H^2({name})");
        let h = cohomology_group(g, 3, Coefficients::Circle, DEFAULT_BUDGET).unwrap();
        assert_eq!(h.order(), *h3_order, "|H^3({name})|");
    }
}

#[test]
fn witnesses_verify_exactly() {
    for (name, g) in small_groups() {
        for n in 1..=3 {
            let h = cohomology_group(&g, n, Coefficients::Circle, DEFAULT_BUDGET).unwrap();
            for gen in &h.generators {
                assert!(is_coboundary(gen, DEFAULT_BUDGET).unwrap().is_none(), "{name} deg {n}");
                // A generator times its order is a coboundary.
                let d = gen.denominator();
                let k = h.divisors[h.generators.iter().position(|x| x == gen).unwrap()];
                assert_eq!(d % k, 0);
                let multiple = gen.scale(k);
                if let Some(w) = is_coboundary(&multiple, DEFAULT_BUDGET).unwrap() {
                    assert_eq!(coboundary(&w), multiple);
                } else {
                    panic!("{name}: k·generator should be a coboundary");
                }
            }
        }
    }
}

#[test]
fn c0_exhaustive_z4_search() {
    let z2 = FiniteGroup::cyclic(2).unwrap();
    let c0 = Cochain::from_fn(&z2, 3, |_| UnitRoot::new(1, 2));
    assert!(is_coboundary(&c0, DEFAULT_BUDGET).unwrap().is_none());
    // The only normalized 2-cochain entry is at (1, 1).
    for a in 0..4 {
        let w = Cochain::from_fn(&z2, 2, |_| UnitRoot::new(a, 4));
        assert_ne!(coboundary(&w), c0);
    }
    let z4 = FiniteGroup::cyclic(4).unwrap();
    let epi = GroupHom::new(z4, z2, vec![0, 1, 0, 1]).unwrap();
    let inf = inflate(&c0, &epi).unwrap();
    let w = is_coboundary(&inf, DEFAULT_BUDGET).unwrap().unwrap();
    assert_eq!(coboundary(&w), inf);
}

/// Exhaustive search over all normalized `(n−1)`-cochains with values in `(1/den)ℤ/ℤ`.
fn exhaustive_witness(c: &Cochain, den: i64) -> bool {
    let g = c.group();
    let n = c.degree();
    let m = g.order();
    let slots: Vec<Vec<usize>> = (0..m.pow(n as u32 - 1))
        .map(|i| {
            let mut t = vec![0; n - 1];
            let mut x = i;
            for k in (0..n - 1).rev() {
                t[k] = x % m;
                x /= m;
            }
            t
        })
        .filter(|t| !t.contains(&g.identity()))
        .collect();
    let total = (den as usize).pow(slots.len() as u32);
    for code in 0..total {
        let mut x = code;
        let mut w = Cochain::zero(g, n - 1);
        for t in &slots {
            w.set(t, UnitRoot::new((x % den as usize) as i64, den));
            x /= den as usize;
        }
        if &coboundary(&w) == c {
            return true;
        }
    }
    false
}

#[test]
fn modular_verdict_matches_exhaustive_search() {
    let z2 = FiniteGroup::cyclic(2).unwrap();
    let z3 = FiniteGroup::cyclic(3).unwrap();
    // Every cocycle is a sum of generators plus coboundaries; test generators,
    // their doubles, and coboundaries of sampled cochains.
    for (g, n, den) in [(z2.clone(), 2, 4), (z2, 3, 4), (z3.clone(), 2, 9), (z3, 3, 3), (klein(), 2, 4)] {
        let h = cohomology_group(&g, n, Coefficients::Circle, DEFAULT_BUDGET).unwrap();
        let mut candidates: Vec<Cochain> = h.generators.clone();
        candidates.extend(h.generators.iter().map(|c| c.scale(2)));
        let w = Cochain::from_fn(&g, n - 1, |t| UnitRoot::new(t.iter().sum::<usize>() as i64, den));
        candidates.push(coboundary(&w));
        for c in candidates {
            if den % c.denominator() != 0 {
                continue;
            }
            let fast = is_coboundary(&c, DEFAULT_BUDGET).unwrap().is_some();
            // Search a strictly larger denominator than the modular system uses.
            let slow = exhaustive_witness(&c, 2 * den * g.order() as i64);
            assert_eq!(fast, slow, "order {} degree {n}", g.order());
        }
    }
}

#[test]
fn phase_class_agrees_with_exact_coordinates() {
    for (name, g) in small_groups() {
        let h = cohomology_group(&g, 3, Coefficients::Circle, DEFAULT_BUDGET).unwrap();
        for (i, gen) in h.generators.iter().enumerate() {
            let exact = h.class_coordinates(gen).unwrap();
            let mut unit = vec![0; h.divisors.len()];
            unit[i] = 1;
            assert_eq!(exact, unit, "{name}");
            let pc = phase_class(&g, 3, &gen.to_phases(), DEFAULT_TOLERANCE, DEFAULT_BUDGET).unwrap();
            assert_eq!(pc.divisors, h.divisors);
            assert_eq!(pc.coordinates, exact, "{name} generator {i}");
        }
    }
}

#[test]
fn phase_class_detects_non_cocycles() {
    let z2 = FiniteGroup::cyclic(2).unwrap();
    let mut v = vec![Complex64::new(1.0, 0.0); 8];
    v[7] = Complex64::new(0.0, 1.0);
    assert!(matches!(
        phase_class(&z2, 3, &v, DEFAULT_TOLERANCE, DEFAULT_BUDGET),
        Err(CohError::NumericalCocycle { .. })
    ));
    v[7] = Complex64::new(2.0, 0.0);
    assert!(matches!(
        phase_class(&z2, 3, &v, DEFAULT_TOLERANCE, DEFAULT_BUDGET),
        Err(CohError::NotUnitModulus { .. })
    ));
}

#[test]
fn budget_is_reported() {
    let g = FiniteGroup::cyclic(9).unwrap();
    match cohomology_group(&g, 4, Coefficients::Circle, 1000) {
        Err(CohError::BudgetExceeded { rows, cols, budget, .. }) => {
            assert_eq!((rows, cols, budget), (32768, 4096, 1000));
        }
        other => panic!("expected budget error, got {other:?}"),
    }
}

#[test]
fn trivialization_of_coboundary_phases() {
    let g = FiniteGroup::dihedral(3).unwrap();
    let w = Cochain::from_fn(&g, 2, |t| UnitRoot::new((t[0] * 3 + t[1]) as i64, 7));
    let c = coboundary(&w);
    let phases = c.to_phases();
    let pc = phase_class(&g, 3, &phases, DEFAULT_TOLERANCE, DEFAULT_BUDGET).unwrap();
    assert!(pc.is_zero());
    let nu = phase_trivialization(&g, &pc, DEFAULT_BUDGET).unwrap().unwrap();
    let m = g.order();
    for a in 0..m {
        for b in 0..m {
            for cc in 0..m {
                let x = nu[b * m + cc] - nu[g.mul(a, b) * m + cc] + nu[a * m + g.mul(b, cc)] - nu[a * m + b];
                let z = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * x);
                assert!((z - phases[(a * m + b) * m + cc]).norm() < 1e-8);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn coboundary_squares_to_zero(which in 0usize..13, n in 0usize..3, seed in any::<u64>()) {
        let (_, g) = small_groups().swap_remove(which);
        let mut x = seed;
        let c = Cochain::from_fn(&g, n, |_| {
            x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            UnitRoot::new((x >> 40) as i64 % 12, 12)
        });
        prop_assert!(coboundary(&coboundary(&c)).is_zero());
    }

    #[test]
    fn phase_class_ignores_lift_choice(which in 0usize..13, gen_seed in any::<u64>(), noise in 0.0f64..1e-10) {
        let (_, g) = small_groups().swap_remove(which);
        let h = cohomology_group(&g, 2, Coefficients::Circle, DEFAULT_BUDGET).unwrap();
        let coords: Vec<i64> = h.divisors.iter().enumerate().map(|(i, d)| ((gen_seed >> (8 * i)) as i64).rem_euclid(*d)).collect();
        let mut w_seed = gen_seed;
        let w = Cochain::from_fn(&g, 1, |_| {
            w_seed = w_seed.rotate_left(13) ^ 0x9e37_79b9_7f4a_7c15;
            UnitRoot::new((w_seed % 5) as i64, 5)
        });
        let c = h.combination(&coords).add(&coboundary(&w));
        let phases: Vec<Complex64> = c.to_phases().into_iter().map(|z| z * Complex64::from_polar(1.0, noise)).collect();
        let pc = phase_class(&g, 2, &phases, 1e-8, DEFAULT_BUDGET).unwrap();
        prop_assert_eq!(pc.coordinates, h.class_coordinates(&c).unwrap());
    }
}
