use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
#[cfg(not(feature = "std"))]
use num_traits::Float;

use super::{
    equivariant_simples, hom_dim, hom_equivariant, twist_by_character, EquivSimple, EquivariantObject, PhaseAction,
    PhaseAssignment, SSMorphism, SSObject,
};
use crate::error::CatError;
use crate::grp::FiniteGroup;
use crate::linalg::{near_integer, rank, CMat};
use crate::prep::{alpha_regular_classes, SplitOptions};

/// The θ-twisted conjugation action of `G` on `⊕_h Fun(Fix π_h)`:
/// `(g•t)(s) = t(π_g⁻¹ s)·e(θ_{g,h}(π_g⁻¹ s) + θ_{gh,g⁻¹}(s) − θ_{g,g⁻¹}(s))`,
/// landing in the summand of `ghg⁻¹`.
#[derive(Clone, Debug)]
pub struct TwistedConjugation {
    /// `Fix π_h` for each `h`.
    pub fixed: Vec<Vec<usize>>,
    /// Start of each summand in the total space.
    pub offsets: Vec<usize>,
    pub dim: usize,
    /// Action matrix of each group element.
    pub matrices: Vec<CMat>,
}

impl TwistedConjugation {
    pub fn new(a: &PhaseAction) -> Self {
        let g = &a.group;
        let m = g.order();
        let fixed: Vec<Vec<usize>> = (0..m).map(|h| a.fixed_points(h)).collect();
        let mut offsets = Vec::with_capacity(m);
        let mut dim = 0;
        for f in &fixed {
            offsets.push(dim);
            dim += f.len();
        }
        let matrices = (0..m)
            .map(|x| {
                let xi = g.inv(x);
                let mut mat = CMat::zeros(dim, dim);
                for h in 0..m {
                    let h2 = g.conj(x, h);
                    for (k, &u) in fixed[h].iter().enumerate() {
                        let s = a.pi(x, u);
                        let row = offsets[h2] + fixed[h2].binary_search(&s).expect("conjugate fixes the image");
                        let c = a.theta(x, h, u) * a.theta(g.mul(x, h), xi, s) / a.theta(x, xi, s);
                        mat[(row, offsets[h] + k)] = c;
                    }
                }
                mat
            })
            .collect();
        TwistedConjugation {
            fixed,
            offsets,
            dim,
            matrices,
        }
    }

    /// The averaging projector onto invariants.
    pub fn projector(&self) -> CMat {
        let m = self.matrices.len();
        let mut p = CMat::zeros(self.dim, self.dim);
        for x in &self.matrices {
            p += x;
        }
        p / Complex64::new(m as f64, 0.0)
    }

    /// Largest deviation from `M_x M_y = M_{xy}`.
    pub fn action_defect(&self, g: &FiniteGroup) -> f64 {
        let mut worst: f64 = 0.0;
        for x in g.elements() {
            for y in g.elements() {
                let d = &self.matrices[x] * &self.matrices[y] - &self.matrices[g.mul(x, y)];
                worst = worst.max(d.iter().fold(0.0, |acc, z| acc.max(z.norm())));
            }
        }
        worst
    }

    /// Indices of the summands of the given elements.
    pub fn indices(&self, elements: &[usize]) -> Vec<usize> {
        elements
            .iter()
            .flat_map(|&h| (0..self.fixed[h].len()).map(move |k| self.offsets[h] + k))
            .collect()
    }
}

fn principal_submatrix(p: &CMat, idx: &[usize]) -> CMat {
    CMat::from_fn(idx.len(), idx.len(), |i, j| p[(idx[i], idx[j])])
}

/// Dimension of the invariants, required to be an integer trace.
fn invariant_dim(p: &CMat) -> Result<usize, CatError> {
    if p.nrows() == 0 {
        return Ok(0);
    }
    let tr = p.trace();
    let r = rank(p, super::RANK_TOLERANCE);
    match near_integer(tr.re, super::INTEGER_TOLERANCE) {
        Some(k) if k as usize == r => Ok(r),
        _ => Err(CatError::Numerical(format!("invariant projector trace {tr} disagrees with rank {r}"))),
    }
}

/// Dimension of `V_𝔠`, the invariants supported on the summands of a class.
pub fn class_invariant_dims(a: &PhaseAction, tc: &TwistedConjugation) -> Result<Vec<usize>, CatError> {
    let p = tc.projector();
    a.group
        .conjugacy_classes()
        .classes
        .iter()
        .map(|c| invariant_dim(&principal_submatrix(&p, &tc.indices(&c.elements))))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentCount {
    /// Number of equivariant simples.
    pub count_direct: usize,
    /// `dim (⊕_g Fun(Fix π_g))^G` under twisted conjugation.
    pub count_formula: usize,
    /// Sum over orbits of the number of α-regular classes of the stabilizer.
    pub count_regular: usize,
    /// `dim V_𝔠` per conjugacy class.
    pub class_dims: Vec<usize>,
    pub agree: bool,
}

pub fn component_count(a: &PhaseAction, opts: &SplitOptions) -> Result<ComponentCount, CatError> {
    let simples = equivariant_simples(a, opts)?;
    let tc = TwistedConjugation::new(a);
    let formula = invariant_dim(&tc.projector())?;
    let class_dims = class_invariant_dims(a, &tc)?;
    let mut regular = 0;
    for orbit in a.orbits() {
        let b = orbit[0];
        let res = a.restrict(&a.stabilizer(b))?;
        let k = res.action.group.order();
        let alpha: Vec<Complex64> = (0..k * k).map(|i| res.action.theta(i / k, i % k, b)).collect();
        regular += alpha_regular_classes(&res.action.group, &alpha, 1e-6)?.len();
    }
    let agree = simples.len() == formula && formula == regular && class_dims.iter().sum::<usize>() == formula;
    Ok(ComponentCount {
        count_direct: simples.len(),
        count_formula: formula,
        count_regular: regular,
        class_dims,
        agree,
    })
}

/// A strict action on a list of simples, obtained from a (non-strict)
/// action by functors on equivariant objects.
#[derive(Clone, Debug)]
pub struct Strictified {
    pub action: PhaseAction,
    /// `isos[q][i]: F_q Y_i → Y_{σ_q i}`.
    pub isos: Vec<Vec<SSMorphism>>,
}

fn normalize_iso(f: &SSMorphism) -> SSMorphism {
    let n: f64 = f.blocks.iter().map(|b| b.norm_squared()).sum();
    let total = f.source.total() as f64;
    f.scale(Complex64::new((total / n).sqrt(), 0.0))
}

/// Chooses unitary isomorphisms `ι_{q,i}: F_q Y_i → Y_{σ_q i}` and reads off
/// `θ̄_{q1,q2}(i)` as the scalar of
/// `ι_{q1q2,i} ∘ θ_{q1,q2} ∘ F_{q1}(ι_{q2,i})⁻¹ ∘ ι_{q1,σ_{q2} i}⁻¹`.
pub fn strictify<F, M, T>(
    quotient: &FiniteGroup,
    base: &PhaseAction,
    simples: &[EquivariantObject],
    functor: F,
    on_morphism: M,
    theta: T,
) -> Result<Strictified, CatError>
where
    F: Fn(usize, &EquivariantObject) -> EquivariantObject,
    M: Fn(usize, &SSMorphism) -> SSMorphism,
    T: Fn(usize, usize, &EquivariantObject) -> SSMorphism,
{
    let nq = quotient.order();
    let n = simples.len();
    let e = quotient.identity();
    let mut perms = vec![vec![0usize; n]; nq];
    let mut isos: Vec<Vec<SSMorphism>> = Vec::with_capacity(nq);
    for q in 0..nq {
        let mut row = Vec::with_capacity(n);
        for (i, y) in simples.iter().enumerate() {
            if q == e {
                perms[q][i] = i;
                row.push(SSMorphism::identity(&y.underlying));
                continue;
            }
            let fy = functor(q, y);
            let mut found = None;
            for (j, z) in simples.iter().enumerate() {
                if z.underlying != fy.underlying {
                    continue;
                }
                if hom_dim(base, &fy, z)? == 1 {
                    let hs = hom_equivariant(base, &fy, z)?;
                    found = Some((j, normalize_iso(&hs.basis[0])));
                    break;
                }
            }
            let (j, iso) = found.ok_or_else(|| CatError::Numerical(format!("image of simple {i} under {q} is not simple")))?;
            perms[q][i] = j;
            row.push(iso);
        }
        isos.push(row);
    }
    let mut theta_bar = vec![Complex64::new(1.0, 0.0); nq * nq * n];
    for q1 in 0..nq {
        for q2 in 0..nq {
            let q12 = quotient.mul(q1, q2);
            for i in 0..n {
                let j2 = perms[q2][i];
                if perms[q12][i] != perms[q1][j2] {
                    return Err(CatError::Numerical("induced permutations are not a homomorphism".into()));
                }
                let inv_outer = isos[q1][j2].inverse().ok_or_else(|| CatError::Numerical("singular iso".into()))?;
                let inv_inner = on_morphism(q1, &isos[q2][i])
                    .inverse()
                    .ok_or_else(|| CatError::Numerical("singular iso".into()))?;
                let comp = isos[q12][i].compose(&theta(q1, q2, &simples[i])).compose(&inv_inner).compose(&inv_outer);
                let c = comp
                    .as_scalar(1e-6)
                    .ok_or_else(|| CatError::Numerical(format!("θ̄ at ({q1}, {q2}, {i}) is not scalar")))?;
                theta_bar[(q1 * nq + q2) * n + i] = c / c.norm();
            }
        }
    }
    Ok(Strictified {
        action: PhaseAction {
            group: quotient.clone(),
            n,
            perms,
            theta: theta_bar,
        },
        isos,
    })
}

/// Underlying `C`-multiplicities of an object of an equivariantization of
/// `D_H`, given its multiplicities over the simples `Y_i` of `D_H`.
fn flatten(w: &SSObject, ys: &[EquivariantObject], n: usize) -> Vec<usize> {
    let mut out = vec![0; n];
    for (i, &k) in w.multiplicities.iter().enumerate() {
        for t in 0..n {
            out[t] += k * ys[i].underlying.multiplicities[t];
        }
    }
    out
}

/// The induced action of `G/H` on the simples of `D_H`.
#[derive(Clone, Debug)]
pub struct InducedQuotient {
    pub quotient: FiniteGroup,
    pub coset_representatives: Vec<usize>,
    pub h_simples: Vec<EquivSimple>,
    pub strict: Strictified,
}

pub fn induced_quotient_action(a: &PhaseAction, normal: &[usize], opts: &SplitOptions) -> Result<InducedQuotient, CatError> {
    let g = &a.group;
    g.check_normal(normal)?;
    let (quotient, _) = g.quotient(normal)?;
    let cosets = g.left_cosets(normal)?;
    let reps = cosets.representatives.clone();
    let res = a.restrict(normal)?;
    let hs = equivariant_simples(&res.action, opts)?;
    let ys: Vec<EquivariantObject> = hs.iter().map(|s| s.object.clone()).collect();
    let mut local = vec![usize::MAX; g.order()];
    for (i, &x) in res.elements.iter().enumerate() {
        local[x] = i;
    }
    let elements = res.elements.clone();
    let functor = |q: usize, x: &EquivariantObject| -> EquivariantObject {
        let r = reps[q];
        let ri = g.inv(r);
        let phi = elements
            .iter()
            .map(|&h| {
                let hp = g.mul(g.mul(ri, h), r);
                let hr = g.mul(h, r);
                (0..a.n)
                    .map(|t| {
                        let u = a.pi_inv(hr, t);
                        let c = a.theta(r, hp, u) / a.theta(h, r, u);
                        &x.phi[local[hp]][a.pi_inv(r, t)] * c
                    })
                    .collect()
            })
            .collect();
        EquivariantObject {
            underlying: x.underlying.relabel(&a.perms[r]),
            phi,
        }
    };
    let on_morphism = |q: usize, f: &SSMorphism| f.relabel(&a.perms[reps[q]]);
    let theta = |q1: usize, q2: usize, x: &EquivariantObject| -> SSMorphism {
        let (r1, r2) = (reps[q1], reps[q2]);
        let r12 = reps[quotient.mul(q1, q2)];
        let r1r2 = g.mul(r1, r2);
        let k = g.mul(g.inv(r12), r1r2);
        let src = x.underlying.relabel(&a.perms[r1r2]);
        let dst = x.underlying.relabel(&a.perms[r12]);
        let blocks = (0..a.n)
            .map(|t| {
                let u = a.pi_inv(r1r2, t);
                let c = a.theta(r1, r2, u) / a.theta(r12, k, u);
                let inv = x.phi[local[k]][a.pi_inv(r12, t)]
                    .clone()
                    .try_inverse()
                    .expect("linearization blocks are invertible");
                inv * c
            })
            .collect();
        SSMorphism {
            source: src,
            target: dst,
            blocks,
        }
    };
    let strict = strictify(&quotient, &res.action, &ys, functor, on_morphism, theta)?;
    Ok(InducedQuotient {
        quotient,
        coset_representatives: reps.clone(),
        h_simples: hs,
        strict,
    })
}

#[derive(Clone, Debug)]
pub struct QuotientReport {
    pub quotient_order: usize,
    pub h_simple_count: usize,
    /// Coherence defect of the induced strict action.
    pub coherence_defect: f64,
    pub count_direct: usize,
    pub count_iterated: usize,
    /// Sorted underlying multiplicity vectors on both sides.
    pub underlying_direct: Vec<Vec<usize>>,
    pub underlying_iterated: Vec<Vec<usize>>,
    pub agree: bool,
}

/// Compares `D_G` with `(D_H)_{G/H}` for a normal subgroup `H`.
pub fn successive_quotient(a: &PhaseAction, normal: &[usize], opts: &SplitOptions) -> Result<QuotientReport, CatError> {
    let iq = induced_quotient_action(a, normal, opts)?;
    let ys: Vec<EquivariantObject> = iq.h_simples.iter().map(|s| s.object.clone()).collect();
    let outer = equivariant_simples(&iq.strict.action, opts)?;
    let mut iterated: Vec<Vec<usize>> = outer.iter().map(|w| flatten(&w.object.underlying, &ys, a.n)).collect();
    let direct_simples = equivariant_simples(a, opts)?;
    let mut direct: Vec<Vec<usize>> = direct_simples.iter().map(|s| s.object.underlying.multiplicities.clone()).collect();
    iterated.sort();
    direct.sort();
    Ok(QuotientReport {
        quotient_order: iq.quotient.order(),
        h_simple_count: ys.len(),
        coherence_defect: iq.strict.action.defect(),
        count_direct: direct.len(),
        count_iterated: iterated.len(),
        agree: direct == iterated,
        underlying_direct: direct,
        underlying_iterated: iterated,
    })
}

#[derive(Clone, Debug)]
pub struct ReversionReport {
    pub original_count: usize,
    pub equivariant_count: usize,
    pub double_count: usize,
    pub coherence_defect: f64,
    /// Sorted underlying vectors of the double equivariantization.
    pub double_underlying: Vec<Vec<usize>>,
    /// Sorted vectors `|Stab_s|·1_{orbit(s)}` over simples `s`.
    pub expected_underlying: Vec<Vec<usize>>,
    pub agree: bool,
}

/// Equivariantizes `D_G` again under the dual group acting by twists.
pub fn reversion_check(a: &PhaseAction, opts: &SplitOptions) -> Result<ReversionReport, CatError> {
    let g = &a.group;
    if !g.is_abelian() {
        return Err(CatError::NotAbelian);
    }
    let simples = equivariant_simples(a, opts)?;
    let xs: Vec<EquivariantObject> = simples.iter().map(|s| s.object.clone()).collect();
    let (dual, chars) = g.dual_as_group();
    let functor = |q: usize, x: &EquivariantObject| twist_by_character(x, &chars[q]);
    let on_morphism = |_: usize, f: &SSMorphism| f.clone();
    let theta = |_: usize, _: usize, x: &EquivariantObject| SSMorphism::identity(&x.underlying);
    let strict = strictify(&dual, a, &xs, functor, on_morphism, theta)?;
    let double = equivariant_simples(&strict.action, opts)?;
    let mut got: Vec<Vec<usize>> = double.iter().map(|w| flatten(&w.object.underlying, &xs, a.n)).collect();
    got.sort();
    let mut want: Vec<Vec<usize>> = (0..a.n)
        .map(|s| {
            let k = a.stabilizer(s).len();
            let mut v = vec![0; a.n];
            for x in g.elements() {
                v[a.pi(x, s)] = k;
            }
            v
        })
        .collect();
    want.sort();
    Ok(ReversionReport {
        original_count: a.n,
        equivariant_count: xs.len(),
        double_count: double.len(),
        coherence_defect: strict.action.defect(),
        agree: double.len() == a.n && got == want,
        double_underlying: got,
        expected_underlying: want,
    })
}

/// Decomposition data for one orbit.
#[derive(Clone, Debug)]
pub struct OrbitDecomposition {
    pub orbit: Vec<usize>,
    /// `H_O = {h : V_h ≠ 0}` for the action restricted to the orbit.
    pub subgroup: Vec<usize>,
    pub is_subgroup: bool,
    /// Equivariant simples on the orbit.
    pub count_direct: usize,
    /// Simple counts of each `(E_j)_{G/H}`; each should be 1.
    pub component_counts: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct FaithfulReport {
    /// `H = {h : V_[h] ≠ 0}` for the whole action.
    pub subgroup: Vec<usize>,
    pub is_subgroup: bool,
    pub components: usize,
    pub abelian: bool,
    pub orbits: Vec<OrbitDecomposition>,
    pub verified: bool,
}

fn nonzero_summands(a: &PhaseAction) -> Result<Vec<usize>, CatError> {
    let tc = TwistedConjugation::new(a);
    let p = tc.projector();
    let classes = a.group.conjugacy_classes();
    let mut out = Vec::new();
    for c in &classes.classes {
        if invariant_dim(&principal_submatrix(&p, &tc.indices(&c.elements)))? > 0 {
            out.extend_from_slice(&c.elements);
        }
    }
    out.sort_unstable();
    Ok(out)
}

pub fn faithful_decomposition(a: &PhaseAction, opts: &SplitOptions) -> Result<FaithfulReport, CatError> {
    let g = &a.group;
    let h = nonzero_summands(a)?;
    let is_subgroup = g.check_subgroup(&h).is_ok();
    let components = equivariant_simples(a, opts)?.len();
    let abelian = g.is_abelian();
    let mut orbits = Vec::new();
    let mut verified = is_subgroup || a.orbits().len() > 1;
    if abelian {
        for orbit in a.orbits() {
            let sub = a.restrict_simples(&orbit)?;
            let ho = nonzero_summands(&sub)?;
            let ok = g.check_subgroup(&ho).is_ok();
            let count_direct = equivariant_simples(&sub, opts)?.len();
            let mut counts = Vec::new();
            if ok {
                let iq = induced_quotient_action(&sub, &ho, opts)?;
                for e in iq.strict.action.orbits() {
                    let part = iq.strict.action.restrict_simples(&e)?;
                    counts.push(equivariant_simples(&part, opts)?.len());
                }
            }
            verified &= ok && counts.iter().all(|&c| c == 1) && counts.len() == count_direct;
            orbits.push(OrbitDecomposition {
                orbit,
                subgroup: ho,
                is_subgroup: ok,
                count_direct,
                component_counts: counts,
            });
        }
    }
    Ok(FaithfulReport {
        subgroup: h,
        is_subgroup,
        components,
        abelian,
        orbits,
        verified,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StableEntry {
    pub basepoint: usize,
    pub dim: usize,
    pub underlying: Vec<usize>,
    /// Multiplicity constant on the orbit and zero elsewhere.
    pub polystable: bool,
    /// The underlying object is a simple of `C`.
    pub simple_in_c: bool,
}

/// Underlying objects of equivariant simples for a `G`-fixed phase assignment.
pub fn stable_underlying_check(a: &PhaseAction, z: &PhaseAssignment, opts: &SplitOptions) -> Result<Vec<StableEntry>, CatError> {
    for s in 0..a.n {
        for x in a.group.elements() {
            let t = a.pi(x, s);
            if (z.phases[s] - z.phases[t]).abs() > 1e-12 {
                return Err(CatError::PhaseNotOrbitConstant(s, t));
            }
        }
    }
    Ok(equivariant_simples(a, opts)?
        .iter()
        .map(|s| {
            let u = &s.object.underlying.multiplicities;
            let k = u[s.basepoint];
            let polystable = (0..a.n).all(|t| u[t] == if s.orbit.contains(&t) { k } else { 0 });
            StableEntry {
                basepoint: s.basepoint,
                dim: s.dim(),
                underlying: u.clone(),
                polystable,
                simple_in_c: s.object.underlying.total() == 1,
            }
        })
        .collect())
}
