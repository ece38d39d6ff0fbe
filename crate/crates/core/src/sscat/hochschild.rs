use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{
    class_invariant_dims, equivariant_simples, hom_equivariant, is_equivariant_morphism, linearize, twist_permutation,
    EquivSimple, EquivariantObject, PhaseAction, SSMorphism, SSObject, SerreData, TwistedConjugation,
};
use crate::error::CatError;
use crate::linalg::{nullspace, rank, CMat};
use crate::prep::SplitOptions;

/// Number of random object pairs checked by [`serre_report`].
pub const SERRE_RANDOM_PAIRS: usize = 20;

fn check_serre(a: &PhaseAction, sd: &SerreData) -> Result<(), CatError> {
    if sd.a.len() != a.n {
        return Err(CatError::Mismatch);
    }
    match sd.a.iter().position(|z| z.norm() < 1e-12 || !z.is_finite()) {
        Some(t) => Err(CatError::DegenerateSerre(t)),
        None => Ok(()),
    }
}

/// Whether `a` is constant on every orbit.
pub fn serre_orbit_constant(a: &PhaseAction, sd: &SerreData) -> bool {
    (0..a.n).all(|s| a.group.elements().all(|g| (sd.a[s] - sd.a[a.pi(g, s)]).norm() <= 1e-12 * sd.a[s].norm().max(1.0)))
}

/// `S̃X` for the identity Serre functor: `(φ'_g)_t = (a_t / a_{π_g⁻¹ t})·(φ_g)_t`.
/// The scalars are the components of `t_g` making `a` a morphism `S̃X → X`.
pub fn serre_lift(a: &PhaseAction, sd: &SerreData, x: &EquivariantObject) -> EquivariantObject {
    EquivariantObject {
        underlying: x.underlying.clone(),
        phi: x
            .phi
            .iter()
            .enumerate()
            .map(|(g, blocks)| {
                blocks
                    .iter()
                    .enumerate()
                    .map(|(t, b)| b * (sd.a[t] / sd.a[a.pi_inv(g, t)]))
                    .collect()
            })
            .collect(),
    }
}

fn pairing(sd: &SerreData, f: &SSMorphism, fp: &SSMorphism) -> Complex64 {
    (0..sd.a.len()).map(|t| sd.a[t] * (&fp.blocks[t] * &f.blocks[t]).trace()).sum()
}

/// Verdict of the pairing `Σ_t a_t tr(f'_t f_t)` on one pair of invariant spaces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairingVerdict {
    pub dim_left: usize,
    pub dim_right: usize,
    pub gram_rank: usize,
    pub perfect: bool,
}

fn pairing_verdict(a: &PhaseAction, sd: &SerreData, x: &EquivariantObject, y: &EquivariantObject, target: &EquivariantObject) -> Result<PairingVerdict, CatError> {
    let left = hom_equivariant(a, x, y)?;
    let right = hom_equivariant(a, y, target)?;
    let gram = CMat::from_fn(left.dim, right.dim, |i, j| pairing(sd, &left.basis[i], &right.basis[j]));
    let r = if gram.is_empty() { 0 } else { rank(&gram, 1e-8) };
    Ok(PairingVerdict {
        dim_left: left.dim,
        dim_right: right.dim,
        gram_rank: r,
        perfect: left.dim == right.dim && r == left.dim,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SerrePair {
    /// Pair of equivariant simples, or `None` for a random pair.
    pub simples: Option<(usize, usize)>,
    /// `Hom^G(A,B) × Hom^G(B, S̃A)`.
    pub lifted: PairingVerdict,
    /// `Hom^G(A,B) × Hom^G(B, A)`, ignoring the lift.
    pub naive: PairingVerdict,
}

#[derive(Clone, Debug)]
pub struct SerreReport {
    pub orbit_constant: bool,
    /// Largest cocycle defect among lifted linearizations.
    pub lift_defect: f64,
    pub pairs: Vec<SerrePair>,
    pub all_perfect: bool,
    pub naive_all_perfect: bool,
}

fn random_object(a: &PhaseAction, simples: &[EquivSimple], rng: &mut ChaCha8Rng) -> EquivariantObject {
    if rng.random_bool(0.5) {
        let e = SSObject::new((0..a.n).map(|_| rng.random_range(0..2)).collect());
        linearize(a, &e)
    } else {
        simples.iter().fold(EquivariantObject::zero(a), |acc, s| {
            let k = rng.random_range(0..3);
            acc.direct_sum(&s.object.power(a, k))
        })
    }
}

/// A labelled pair of objects to pair.
type PairInput = (Option<(usize, usize)>, EquivariantObject, EquivariantObject);

/// Checks the lifted Serre pairing on all pairs of equivariant simples and on
/// [`SERRE_RANDOM_PAIRS`] random pairs.
pub fn serre_report(a: &PhaseAction, sd: &SerreData, opts: &SplitOptions) -> Result<SerreReport, CatError> {
    check_serre(a, sd)?;
    let simples = equivariant_simples(a, opts)?;
    let mut objects: Vec<PairInput> = Vec::new();
    for (i, x) in simples.iter().enumerate() {
        for (j, y) in simples.iter().enumerate() {
            objects.push((Some((i, j)), x.object.clone(), y.object.clone()));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for _ in 0..SERRE_RANDOM_PAIRS {
        let x = random_object(a, &simples, &mut rng);
        let y = random_object(a, &simples, &mut rng);
        objects.push((None, x, y));
    }
    let mut pairs = Vec::with_capacity(objects.len());
    let mut lift_defect: f64 = 0.0;
    for (label, x, y) in &objects {
        let sx = serre_lift(a, sd, x);
        lift_defect = lift_defect.max(sx.cocycle_defect(a));
        pairs.push(SerrePair {
            simples: *label,
            lifted: pairing_verdict(a, sd, x, y, &sx)?,
            naive: pairing_verdict(a, sd, x, y, x)?,
        });
    }
    Ok(SerreReport {
        orbit_constant: serre_orbit_constant(a, sd),
        lift_defect,
        all_perfect: pairs.iter().all(|p| p.lifted.perfect),
        naive_all_perfect: pairs.iter().all(|p| p.naive.perfect),
        pairs,
    })
}

/// The central element of `D_G` attached to `t ∈ ⊕_h Fun(Fix π_h)`:
/// on `X` it is `Σ_{h : π_h s = s} t_h(s)·(φ_h)_s⁻¹` in the block `s`.
pub fn perry_endomorphism(a: &PhaseAction, tc: &TwistedConjugation, t: &[Complex64], x: &EquivariantObject) -> SSMorphism {
    let mut f = SSMorphism::zero(&x.underlying, &x.underlying);
    for h in a.group.elements() {
        for (k, &s) in tc.fixed[h].iter().enumerate() {
            let c = t[tc.offsets[h] + k];
            if c.norm() == 0.0 || x.underlying.multiplicities[s] == 0 {
                continue;
            }
            let inv = x.phi[h][s].clone().try_inverse().expect("invertible");
            f.blocks[s] += inv * c;
        }
    }
    f
}

#[derive(Clone, Debug)]
pub struct HochschildReport {
    /// `dim HH⁰(C, ρ_g) = |Fix π_g|`.
    pub fixed_dims: Vec<usize>,
    /// Number of equivariant simples.
    pub dim_direct: usize,
    /// Invariants of the twisted conjugation.
    pub dim_formula: usize,
    pub class_dims: Vec<usize>,
    /// Twisted conjugation is an action.
    pub action_defect: f64,
    /// Perry map: every invariant gives an equivariant endomorphism, scalar on
    /// each simple, and the map to functions on simples is an isomorphism.
    pub perry_equivariant: bool,
    pub perry_rank: usize,
    /// Dual-group permutation of the simples under twisting, `perm[χ][i]`.
    pub dual_permutations: Vec<Vec<usize>>,
    /// `χ` acts on the image of `V_𝔠` by `χ(𝔠)`; largest deviation.
    pub dual_scalar_defect: f64,
    /// `(1/|G|) Σ_{gh=hg} χ_ρ(g,h)`.
    pub euler: Complex64,
    pub euler_agrees: bool,
    /// `Some(constant on orbits)` when Serre data is given.
    pub calabi_yau: Option<bool>,
    /// When Calabi–Yau: the induced trivialization is fixed by the dual group.
    pub cy_dual_fixed: Option<bool>,
}

/// Degree-zero Hochschild data of the equivariant category.
pub fn hochschild_report(a: &PhaseAction, sd: Option<&SerreData>, opts: &SplitOptions) -> Result<HochschildReport, CatError> {
    let g = &a.group;
    let m = g.order();
    let simples = equivariant_simples(a, opts)?;
    let tc = TwistedConjugation::new(a);
    let p = tc.projector();
    let class_dims = class_invariant_dims(a, &tc)?;
    let dim_formula: usize = class_dims.iter().sum();

    // Perry map on a basis of each V_𝔠.
    let classes = g.conjugacy_classes();
    let mut perry_equivariant = true;
    let mut images: Vec<(usize, Vec<Complex64>)> = Vec::new();
    for (ci, class) in classes.classes.iter().enumerate() {
        let idx = tc.indices(&class.elements);
        if idx.is_empty() {
            continue;
        }
        let comp = CMat::identity(idx.len(), idx.len()) - CMat::from_fn(idx.len(), idx.len(), |r, c| p[(idx[r], idx[c])]);
        // Invariants supported on the class are the kernel of (1 − P) there.
        let ns = nullspace(&comp, 1e-8);
        for v in ns.column_iter() {
            let mut t = vec![Complex64::new(0.0, 0.0); tc.dim];
            for (k, &i) in idx.iter().enumerate() {
                t[i] = v[k];
            }
            let mut z = Vec::with_capacity(simples.len());
            for s in &simples {
                let f = perry_endomorphism(a, &tc, &t, &s.object);
                perry_equivariant &= is_equivariant_morphism(a, &s.object, &s.object, &f, 1e-8);
                match f.as_scalar(1e-6) {
                    Some(c) => z.push(c),
                    None => {
                        perry_equivariant = false;
                        z.push(f.trace() / s.object.underlying.total() as f64);
                    }
                }
            }
            images.push((ci, z));
        }
    }
    let img = CMat::from_fn(simples.len(), images.len(), |r, c| images[c].1[r]);
    let perry_rank = if img.is_empty() { 0 } else { rank(&img, 1e-8) };

    // Dual group acting on functions on simples.
    let chars = g.dual_group();
    let mut dual_permutations = Vec::with_capacity(chars.len());
    let mut dual_scalar_defect: f64 = 0.0;
    for chi in &chars {
        let perm = twist_permutation(a, chi, &simples)?;
        let chi_inv = chi.neg();
        let back = twist_permutation(a, &chi_inv, &simples)?;
        for (ci, z) in &images {
            let rep = classes.classes[*ci].elements[0];
            let c = chi.eval(rep).to_complex();
            for i in 0..simples.len() {
                dual_scalar_defect = dual_scalar_defect.max((z[back[i]] - c * z[i]).norm());
            }
        }
        dual_permutations.push(perm);
    }

    // 2-characters: trace of M_h on the g-summand for commuting pairs.
    let mut euler = Complex64::new(0.0, 0.0);
    for x in 0..m {
        for h in 0..m {
            if g.mul(x, h) != g.mul(h, x) {
                continue;
            }
            let (o, k) = (tc.offsets[x], tc.fixed[x].len());
            for i in 0..k {
                euler += tc.matrices[h][(o + i, o + i)];
            }
        }
    }
    euler /= m as f64;
    let euler_agrees = (euler - Complex64::new(simples.len() as f64, 0.0)).norm() < 1e-8;

    let (calabi_yau, cy_dual_fixed) = match sd {
        None => (None, None),
        Some(sd) => {
            check_serre(a, sd)?;
            let cy = serre_orbit_constant(a, sd);
            let fixed = cy.then(|| {
                let lifted: Vec<Complex64> = simples.iter().map(|s| sd.a[s.basepoint]).collect();
                dual_permutations
                    .iter()
                    .all(|perm| (0..simples.len()).all(|i| (lifted[perm[i]] - lifted[i]).norm() < 1e-12))
            });
            (Some(cy), fixed)
        }
    };

    Ok(HochschildReport {
        fixed_dims: (0..m).map(|x| tc.fixed[x].len()).collect(),
        dim_direct: simples.len(),
        dim_formula,
        class_dims,
        action_defect: tc.action_defect(g),
        perry_equivariant,
        perry_rank,
        dual_permutations,
        dual_scalar_defect,
        euler,
        euler_agrees,
        calabi_yau,
        cy_dual_fixed,
    })
}

impl HochschildReport {
    /// All checks pass.
    pub fn consistent(&self) -> bool {
        self.dim_direct == self.dim_formula
            && self.perry_equivariant
            && self.perry_rank == self.dim_direct
            && self.action_defect < 1e-9
            && self.dual_scalar_defect < 1e-6
            && self.euler_agrees
            && self.cy_dual_fixed != Some(false)
    }
}
