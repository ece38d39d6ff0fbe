//! The radical-square-zero cyclic quiver algebras, their rotations, and the
//! order-two outer action that does not lift to a group action.

use alloc::format;
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
#[cfg(not(feature = "std"))]
use num_traits::Float;

use super::{
    center, crossed_product, is_inner, obstruction_class, obstruction_stability, out_action_and_units,
    simple_permutation, wedderburn_blocks, AModule, AlgOptions, Algebra, AlgebraAut, CrossedProduct, DimensionTable,
    ObstructionStability,
};
use crate::coh::{Cochain, PhaseClass};
use crate::error::AlgError;
use crate::grp::{Character, FiniteGroup};
use crate::linalg::{CMat, ONE, ZERO};
use crate::root::UnitRoot;

/// Path algebra of the cyclic quiver on `n` vertices modulo paths of length
/// two: basis `e_i` at `i` and the arrow `a_i: i → i+1` at `n + i`, with
/// `a_i = e_{i+1} a_i e_i`.
pub fn build_cyclic_quiver_algebra(n: usize) -> Result<Algebra, AlgError> {
    if n < 2 {
        return Err(AlgError::Invalid(format!("cyclic quiver needs at least 2 vertices, got {n}")));
    }
    let mut entries = Vec::new();
    for i in 0..n {
        entries.push((i, i, i, ONE));
        entries.push((n + i, i, n + i, ONE));
        entries.push(((i + 1) % n, n + i, n + i, ONE));
    }
    let mut unit = vec![ZERO; 2 * n];
    for u in unit.iter_mut().take(n) {
        *u = ONE;
    }
    Algebra::from_sparse(2 * n, &entries, unit, super::DEFAULT_TOLERANCE)
}

/// The rotation `e_i ↦ e_{i+k}`, `a_i ↦ a_{i+k}`.
pub fn quiver_rotation(n: usize, k: usize) -> AlgebraAut {
    let mut m = CMat::zeros(2 * n, 2 * n);
    for i in 0..n {
        m[((i + k) % n, i)] = ONE;
        m[(n + (i + k) % n, n + i)] = ONE;
    }
    AlgebraAut::unchecked(m)
}

/// `w = Σ_i (−1)^i e_i`; `Ad(w)` negates every arrow when `n` is even.
pub fn quiver_sign(n: usize) -> Vec<Complex64> {
    let mut w = vec![ZERO; 2 * n];
    for (i, x) in w.iter_mut().take(n).enumerate() {
        *x = if i % 2 == 0 { ONE } else { -ONE };
    }
    w
}

/// `aU_g ↦ χ(g)·τ(a)U_g` on a crossed product, for `τ` commuting with every
/// `σ_g` and fixing every unit.
pub fn induced_automorphism(cp: &CrossedProduct, tau: &AlgebraAut, chi: &Character, tolerance: f64) -> Result<AlgebraAut, AlgError> {
    let g = cp.group();
    let m = g.order();
    let d = cp.base.dim();
    for x in 0..m {
        let s = cp.action.sigma(x);
        if tau.compose(s).distance(&s.compose(tau)) > tolerance {
            return Err(AlgError::InvalidAut(format!("τ does not commute with σ_{x}")));
        }
        for y in 0..m {
            let u = cp.action.unit(x, y);
            if super::max_diff(&tau.apply(u), u) > tolerance {
                return Err(AlgError::InvalidAut(format!("τ moves the unit ({x}, {y})")));
            }
        }
    }
    let n = cp.algebra.dim();
    let mut mat = CMat::zeros(n, n);
    for x in 0..m {
        let c = chi.eval(x).to_complex();
        for i in 0..d {
            for j in 0..d {
                mat[(x * d + i, x * d + j)] = tau.matrix()[(i, j)] * c;
            }
        }
    }
    AlgebraAut::new(&cp.algebra, mat, tolerance)
}

/// An automorphism whose class in `Out(A)` has order dividing `order`,
/// viewed as a candidate `ℤ_order` action.
#[derive(Clone, Debug)]
pub struct CyclicCandidate {
    pub order: usize,
    pub center_dim: usize,
    /// Simples `S` with `σ^*S ≅ S`.
    pub invariant_simples: Vec<usize>,
    pub class: Option<PhaseClass>,
}

impl CyclicCandidate {
    /// Whether the obstruction was computable (`Z(A) = ℂ`).
    pub fn hypotheses_hold(&self) -> bool {
        self.center_dim == 1 && self.class.is_some()
    }
}

pub fn cyclic_candidate(alg: &Algebra, sigma: &AlgebraAut, order: usize, opts: &AlgOptions) -> Result<CyclicCandidate, AlgError> {
    let group = FiniteGroup::cyclic(order)?;
    let sigmas: Vec<AlgebraAut> = (0..order).map(|k| sigma.power(k)).collect();
    let wed = wedderburn_blocks(alg, opts)?;
    let perm = simple_permutation(&wed, sigma, opts.tolerance)?;
    let invariant_simples = (0..perm.len()).filter(|&i| perm[i] == i).collect();
    let center_dim = center(alg, opts.tolerance).dim();
    let class = if center_dim == 1 {
        let oad = out_action_and_units(alg, &group, sigmas, opts)?;
        Some(obstruction_class(alg, &oad, opts)?.class)
    } else {
        None
    };
    Ok(CyclicCandidate {
        order,
        center_dim,
        invariant_simples,
        class,
    })
}

/// Everything checked by [`fixture_counterexample`].
#[derive(Clone, Debug, PartialEq)]
pub struct CounterexampleReport {
    pub base_dim: usize,
    pub base_center_dim: usize,
    /// Smallest `k ≥ 1` with `τ^k = id`.
    pub rotation_order: usize,
    /// Whether `τ²` is inner in `A` (it must not be).
    pub rotation_square_inner: bool,
    /// `dim D'` for `D' = A ⋊ ⟨τ²⟩`.
    pub crossed_dim: usize,
    pub crossed_center_dim: usize,
    /// Whether `g² = Ad(u)` was found for the candidate `g`.
    pub candidate_units_found: bool,
    pub unit_attempts: usize,
    pub obstruction_values: Vec<Complex64>,
    pub cocycle_defect: f64,
    pub scalar_defect: f64,
    pub divisors: Vec<i64>,
    pub coordinates: Vec<i64>,
    pub obstruction_nonzero: bool,
    pub stability: ObstructionStability,
    /// How `g` permutes the simples of `D'`.
    pub simple_permutation: Vec<usize>,
    pub fixed_simples: Vec<usize>,
    /// The class of the honest `ℤ₄` action `k ↦ g^k` (must vanish).
    pub resolved_coordinates: Vec<i64>,
    pub d_prime: DimensionTable,
    pub d_prime_z4: DimensionTable,
    pub simple_counts_match: bool,
    pub dims_double: bool,
    /// Largest violation of the linearization identities on the regular
    /// `D'_{ℤ₄}`-module restricted to `D'`.
    pub linearization_defect: f64,
}

impl CounterexampleReport {
    pub fn passed(&self) -> bool {
        self.crossed_center_dim == 1
            && self.obstruction_nonzero
            && self.stability.stable
            && self.fixed_simples.is_empty()
            && self.resolved_coordinates.iter().all(|&c| c == 0)
            && self.simple_counts_match
            && self.dims_double
            && self.d_prime_z4.block_count == 1
    }
}

/// Number of random re-runs used to test stability of the class.
pub const STABILITY_SEEDS: usize = 5;

fn stage(name: &str) -> impl Fn(AlgError) -> AlgError + '_ {
    move |e| AlgError::Stage {
        stage: name.to_string(),
        message: e.to_string(),
    }
}

fn require(cond: bool, name: &str, message: impl FnOnce() -> alloc::string::String) -> Result<(), AlgError> {
    if cond {
        Ok(())
    } else {
        Err(AlgError::Stage {
            stage: name.to_string(),
            message: message(),
        })
    }
}

/// On the 4-vertex fixture with rotation `τ`: `D' = A ⋊ ⟨τ²⟩` has center ℂ;
/// the order-two outer automorphism `g = χ ∘ τ̄` of `D'` has nonzero
/// obstruction in `H³(ℤ₂, ℂ*)`; the honest `ℤ₄` action it generates gives
/// `D'_{ℤ₄}` with one block and the simple count of `D'`, simples of twice
/// the dimension.
pub fn fixture_counterexample(opts: &AlgOptions) -> Result<CounterexampleReport, AlgError> {
    let tol = opts.tolerance;
    const HYP: &str = "hypothesis";
    const OBS: &str = "obstruction";
    const EQV: &str = "equivalence";

    let n = 4;
    let a = build_cyclic_quiver_algebra(n).map_err(stage(HYP))?;
    let tau = AlgebraAut::new(&a, quiver_rotation(n, 1).matrix().clone(), tol).map_err(stage(HYP))?;
    let base_center_dim = center(&a, tol).dim();
    require(base_center_dim == 1, HYP, || format!("Z(A) has dimension {base_center_dim}"))?;
    let id = AlgebraAut::identity(a.dim());
    let rotation_order = (1..=2 * n).find(|&k| tau.power(k).distance(&id) <= tol).unwrap_or(0);
    require(rotation_order == n, HYP, || format!("rotation has order {rotation_order}"))?;
    let tau2 = tau.power(2);
    let rotation_square_inner = is_inner(&a, &tau2, opts).is_some();
    require(!rotation_square_inner, HYP, || "τ² is inner".into())?;
    let z2 = FiniteGroup::cyclic(2)?;
    let dp = crossed_product(&a, &z2, vec![id.clone(), tau2.clone()], &Cochain::zero(&z2, 2), tol).map_err(stage(HYP))?;
    let crossed_center_dim = center(&dp.algebra, tol).dim();
    require(crossed_center_dim == 1, HYP, || format!("Z(D') has dimension {crossed_center_dim}"))?;

    let chi = Character {
        values: vec![UnitRoot::ZERO, UnitRoot::new(1, 2)],
    };
    let g = induced_automorphism(&dp, &tau, &chi, tol).map_err(stage(OBS))?;
    let b = &dp.algebra;
    let gs = vec![AlgebraAut::identity(b.dim()), g.clone()];
    let oad = out_action_and_units(b, &z2, gs.clone(), opts).map_err(stage(OBS))?;
    let ob = obstruction_class(b, &oad, opts).map_err(stage(OBS))?;
    require(ob.cocycle_defect <= 1e-7, OBS, || format!("cocycle defect {:e}", ob.cocycle_defect))?;
    require(!ob.is_zero(), OBS, || "obstruction class vanishes".into())?;
    let seeds: Vec<u64> = (0..STABILITY_SEEDS as u64).map(|k| opts.seed.wrapping_add(101 + k)).collect();
    let stability = obstruction_stability(b, &z2, &gs, &seeds, opts).map_err(stage(OBS))?;
    require(stability.stable, OBS, || format!("class changes under re-randomization: {:?}", stability.coordinates))?;
    let wd = wedderburn_blocks(b, opts).map_err(stage(OBS))?;
    let perm = simple_permutation(&wd, &g, tol).map_err(stage(OBS))?;
    let fixed_simples: Vec<usize> = (0..perm.len()).filter(|&i| perm[i] == i).collect();
    require(fixed_simples.is_empty(), OBS, || format!("g fixes the simples {fixed_simples:?}"))?;

    let z4 = FiniteGroup::cyclic(4)?;
    let g4: Vec<AlgebraAut> = (0..4).map(|k| g.power(k)).collect();
    let honest = out_action_and_units(b, &z4, g4.clone(), opts).map_err(stage(EQV))?;
    let resolved = obstruction_class(b, &honest, opts).map_err(stage(EQV))?;
    require(resolved.is_zero(), EQV, || "the ℤ₄ action is obstructed".into())?;
    let dp4 = crossed_product(b, &z4, g4, &Cochain::zero(&z4, 2), tol).map_err(stage(EQV))?;
    let w4 = wedderburn_blocks(&dp4.algebra, opts).map_err(stage(EQV))?;
    let (d_prime, d_prime_z4) = (wd.table(), w4.table());
    let simple_counts_match = d_prime.simple_dims.len() == d_prime_z4.simple_dims.len();
    let dims_double = simple_counts_match
        && d_prime
            .simple_dims
            .iter()
            .zip(&d_prime_z4.simple_dims)
            .all(|(x, y)| 2 * x == *y);
    let (_, _, linearization_defect) = dp4.underlying(&AModule::regular(&dp4.algebra));
    require(d_prime_z4.block_count == 1, EQV, || format!("D'_ℤ₄ has {} blocks", d_prime_z4.block_count))?;
    require(simple_counts_match && dims_double, EQV, || {
        format!("simple dimensions {:?} vs {:?}", d_prime.simple_dims, d_prime_z4.simple_dims)
    })?;
    require(linearization_defect <= tol.sqrt(), EQV, || format!("linearization defect {linearization_defect:e}"))?;

    Ok(CounterexampleReport {
        base_dim: a.dim(),
        base_center_dim,
        rotation_order,
        rotation_square_inner,
        crossed_dim: b.dim(),
        crossed_center_dim,
        candidate_units_found: true,
        unit_attempts: oad.attempts,
        obstruction_values: ob.values.clone(),
        cocycle_defect: ob.cocycle_defect,
        scalar_defect: ob.scalar_defect,
        divisors: ob.class.divisors.clone(),
        coordinates: ob.class.coordinates.clone(),
        obstruction_nonzero: !ob.is_zero(),
        stability,
        simple_permutation: perm,
        fixed_simples,
        resolved_coordinates: resolved.class.coordinates,
        d_prime,
        d_prime_z4,
        simple_counts_match,
        dims_double,
        linearization_defect,
    })
}
