use alloc::vec;
use alloc::vec::Vec;

use super::{hom_dim, induce, twist_by_character, EquivariantObject, PhaseAction, SSAction, SSObject};
use crate::coh::{is_coboundary, phase_class, Cochain, DEFAULT_BUDGET};
use crate::error::CatError;
use crate::grp::Character;
use crate::linalg::CMat;
use crate::prep::{irreps_twisted, ProjectiveRep, SplitOptions};
use crate::root::UnitRoot;

/// An equivariant simple: an orbit, its least point `b`, the stabilizer `K`
/// of `b`, and an irreducible representation of `K` twisted by
/// `α(k, l) = θ_{k,l}(b)`.
#[derive(Clone, Debug)]
pub struct EquivSimple {
    pub orbit: Vec<usize>,
    pub basepoint: usize,
    /// Elements of `G`, sorted; the irrep uses this numbering.
    pub stabilizer: Vec<usize>,
    pub irrep: ProjectiveRep,
    pub object: EquivariantObject,
}

impl EquivSimple {
    pub fn dim(&self) -> usize {
        self.irrep.dim
    }
}

/// Equivariant simples orbit by orbit; within an orbit in the order of
/// [`irreps_twisted`].
pub fn equivariant_simples(a: &PhaseAction, opts: &SplitOptions) -> Result<Vec<EquivSimple>, CatError> {
    let mut out = Vec::new();
    for orbit in a.orbits() {
        let b = orbit[0];
        let stab = a.stabilizer(b);
        let res = a.restrict(&stab)?;
        let k = res.action.group.order();
        let mut alpha = Vec::with_capacity(k * k);
        for x in 0..k {
            for y in 0..k {
                alpha.push(res.action.theta(x, y, b));
            }
        }
        for irrep in irreps_twisted(&res.action.group, &alpha, opts)? {
            let d = irrep.dim;
            let mut mult = vec![0; a.n];
            mult[b] = d;
            // φ_k = U_k⁻¹ at the basepoint satisfies the twisted cocycle law.
            let phi = irrep
                .matrices
                .iter()
                .map(|u| {
                    (0..a.n)
                        .map(|t| if t == b { u.adjoint() } else { CMat::zeros(0, 0) })
                        .collect()
                })
                .collect();
            let f = EquivariantObject {
                underlying: SSObject::new(mult),
                phi,
            };
            let object = induce(a, &res, &f)?;
            out.push(EquivSimple {
                orbit: orbit.clone(),
                basepoint: b,
                stabilizer: stab.clone(),
                irrep,
                object,
            });
        }
    }
    Ok(out)
}

/// Multiplicity of each simple in `x`.
pub fn decompose(a: &PhaseAction, x: &EquivariantObject, simples: &[EquivSimple]) -> Result<Vec<usize>, CatError> {
    simples
        .iter()
        .map(|s| {
            if s.orbit.iter().all(|&t| x.underlying.multiplicities[t] == 0) {
                Ok(0)
            } else {
                hom_dim(a, &s.object, x)
            }
        })
        .collect()
}

/// The simple isomorphic to `x`, if `x` is simple.
pub fn identify_simple(a: &PhaseAction, x: &EquivariantObject, simples: &[EquivSimple]) -> Result<Option<usize>, CatError> {
    let m = decompose(a, x, simples)?;
    let total: usize = m.iter().sum();
    Ok(if total == 1 { m.iter().position(|&k| k == 1) } else { None })
}

/// The permutation of equivariant simples induced by twisting with `χ`.
pub fn twist_permutation(a: &PhaseAction, chi: &Character, simples: &[EquivSimple]) -> Result<Vec<usize>, CatError> {
    simples
        .iter()
        .map(|s| {
            identify_simple(a, &twist_by_character(&s.object, chi), simples)?
                .ok_or_else(|| CatError::Numerical("twist of a simple is not simple".into()))
        })
        .collect()
}

/// Outcome of classifying linearizations of a fixed simple.
#[derive(Clone, Debug, PartialEq)]
pub enum Linearizations {
    /// The class of `θ(·,·)(s)` in `H²(G, ℂ*)` is nonzero.
    Obstructed { divisors: Vec<i64>, coordinates: Vec<i64> },
    /// Scalar linearizations `φ_g = e(x_g)`, one per character, and whether
    /// the dual group acts freely and transitively on them.
    Found {
        phases: Vec<Vec<UnitRoot>>,
        free_transitive: bool,
    },
}

/// Linearizations of a `G`-fixed simple `s`.
pub fn linearizations_of_simple(a: &SSAction, s: usize) -> Result<Linearizations, CatError> {
    let g = &a.group;
    if g.elements().any(|x| a.perm(x)[s] != s) {
        return Err(CatError::NotInvariant(s));
    }
    let alpha = a.theta_at(s);
    let Some(beta) = is_coboundary(&alpha, DEFAULT_BUDGET)? else {
        let pc = phase_class(g, 2, &alpha.to_phases(), 1e-9, DEFAULT_BUDGET)?;
        return Ok(Linearizations::Obstructed {
            divisors: pc.divisors,
            coordinates: pc.coordinates,
        });
    };
    // θ = −δx forces x = −β up to a character.
    let base: Vec<UnitRoot> = g.elements().map(|x| -beta.get(&[x])).collect();
    let chars = g.dual_group();
    let phases: Vec<Vec<UnitRoot>> = chars
        .iter()
        .map(|c| base.iter().enumerate().map(|(x, &v)| v + c.eval(x)).collect())
        .collect();
    let pa = a.phases();
    let objects: Vec<EquivariantObject> = phases.iter().map(|p| scalar_object(&pa, s, p)).collect();
    let mut ok = objects.iter().all(|o| o.cocycle_defect(&pa) < 1e-9);
    for (i, x) in objects.iter().enumerate() {
        for (j, y) in objects.iter().enumerate() {
            ok &= hom_dim(&pa, x, y)? == usize::from(i == j);
        }
    }
    // Twisting the first by χ_j lands exactly on the j-th.
    for (j, c) in chars.iter().enumerate() {
        let t = twist_by_character(&objects[0], c);
        ok &= hom_dim(&pa, &t, &objects[j])? == 1;
    }
    Ok(Linearizations::Found {
        phases,
        free_transitive: ok,
    })
}

/// The simple `s` with scalar linearization `φ_g = e(x_g)`.
pub fn scalar_object(a: &PhaseAction, s: usize, x: &[UnitRoot]) -> EquivariantObject {
    EquivariantObject {
        underlying: SSObject::simple(a.n, s),
        phi: x
            .iter()
            .map(|v| {
                (0..a.n)
                    .map(|t| {
                        if t == s {
                            CMat::from_element(1, 1, v.to_complex())
                        } else {
                            CMat::zeros(0, 0)
                        }
                    })
                    .collect()
            })
            .collect(),
    }
}

/// Restricted cocycle `θ(·,·)(b)` on the stabilizer of `b`, as an exact cochain
/// on the stabilizer subgroup.
pub fn stabilizer_cocycle(a: &SSAction, b: usize) -> Result<Cochain, CatError> {
    let stab: Vec<usize> = a.group.elements().filter(|&x| a.perm(x)[b] == b).collect();
    let (sub, incl) = a.group.subgroup(&stab)?;
    Ok(Cochain::from_fn(&sub, 2, |t| a.theta(incl.apply(t[0]), incl.apply(t[1]), b)))
}
