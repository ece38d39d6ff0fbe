//! Outer actions with unit witnesses, the degree-3 obstruction, crossed
//! products and the conjugation action on the centralizer of `A`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
#[cfg(not(feature = "std"))]
use num_traits::Float;

use super::{
    center, column, is_inner, max_diff, random_vector, twisted_center, AlgOptions, Algebra, AlgebraAut, Subspace,
    INTEGER_TOLERANCE,
};
use crate::coh::{cocycle_violation, enumerate_h2_representatives, phase_class, phase_trivialization, Cochain, PhaseClass};
use crate::error::{AlgError, CohError};
use crate::grp::FiniteGroup;
use crate::linalg::{max_abs, near_integer, range, CMat, ONE, ZERO};
use crate::root::phase;

/// A homomorphism `G → Out(A)` with representatives `σ_g` and units
/// `u_{g,h}` such that `σ_g σ_h = Ad(u_{g,h}) σ_{gh}`.
#[derive(Clone, Debug)]
pub struct OutActionData {
    group: FiniteGroup,
    sigmas: Vec<AlgebraAut>,
    /// `u_{g,h}` at index `g·|G| + h`.
    units: Vec<Vec<Complex64>>,
    /// Random draws spent finding the units.
    pub attempts: usize,
}

impl OutActionData {
    /// Validates `σ_e = id`, normalization and invertibility of the units,
    /// and `σ_g σ_h(x)·u_{g,h} = u_{g,h}·σ_{gh}(x)`.
    pub fn from_parts(
        alg: &Algebra,
        group: &FiniteGroup,
        sigmas: Vec<AlgebraAut>,
        units: Vec<Vec<Complex64>>,
        tolerance: f64,
    ) -> Result<Self, AlgError> {
        let m = group.order();
        if sigmas.len() != m || units.len() != m * m {
            return Err(AlgError::Invalid("one automorphism per element and one unit per pair are required".into()));
        }
        let e = group.identity();
        if sigmas[e].distance(&AlgebraAut::identity(alg.dim())) > tolerance {
            return Err(AlgError::InvalidAut("σ_e is not the identity".into()));
        }
        for g in 0..m {
            for (k, u) in [units[e * m + g].as_slice(), units[g * m + e].as_slice()].into_iter().enumerate() {
                if max_diff(u, alg.unit()) > tolerance {
                    let (a, b) = if k == 0 { (e, g) } else { (g, e) };
                    return Err(AlgError::Invalid(format!("unit ({a}, {b}) is not normalized")));
                }
            }
        }
        for (i, u) in units.iter().enumerate() {
            if alg.inverse(u).is_none() {
                return Err(AlgError::Invalid(format!("unit ({}, {}) is not invertible", i / m, i % m)));
            }
        }
        let out = OutActionData {
            group: group.clone(),
            sigmas,
            units,
            attempts: 0,
        };
        let (g, h, defect) = out.relation_defect(alg);
        if defect > tolerance.sqrt() {
            return Err(AlgError::NotOutHomomorphism(g, h));
        }
        Ok(out)
    }

    /// An honest action: all units equal to `1`.
    pub fn honest(alg: &Algebra, group: &FiniteGroup, sigmas: Vec<AlgebraAut>, tolerance: f64) -> Result<Self, AlgError> {
        let m = group.order();
        for g in 0..m {
            for h in 0..m {
                let gh = group.mul(g, h);
                if sigmas[g].compose(&sigmas[h]).distance(&sigmas[gh]) > tolerance {
                    return Err(AlgError::NotHomomorphism(g, h));
                }
            }
        }
        Self::from_parts(alg, group, sigmas, vec![alg.unit().to_vec(); m * m], tolerance)
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn sigma(&self, g: usize) -> &AlgebraAut {
        &self.sigmas[g]
    }

    pub fn sigmas(&self) -> &[AlgebraAut] {
        &self.sigmas
    }

    pub fn unit(&self, g: usize, h: usize) -> &[Complex64] {
        &self.units[g * self.group.order() + h]
    }

    /// Whether every unit is `1` within `tolerance`.
    pub fn is_honest(&self, alg: &Algebra, tolerance: f64) -> bool {
        self.units.iter().all(|u| max_diff(u, alg.unit()) <= tolerance)
    }

    /// Units multiplied by the scalars `e(λ(g,h))`.
    pub fn rescaled(&self, lambda: impl Fn(usize, usize) -> Complex64) -> Self {
        let m = self.group.order();
        let mut out = self.clone();
        for g in 0..m {
            for h in 0..m {
                let s = lambda(g, h);
                for x in out.units[g * m + h].iter_mut() {
                    *x *= s;
                }
            }
        }
        out
    }

    /// Worst pair and value of `max_x |σ_gσ_h(x)·u_{g,h} − u_{g,h}·σ_{gh}(x)|`.
    pub fn relation_defect(&self, alg: &Algebra) -> (usize, usize, f64) {
        let m = self.group.order();
        let mut worst = (0, 0, 0.0f64);
        for g in 0..m {
            for h in 0..m {
                let u = self.unit(g, h);
                let lhs = alg.right(u) * self.sigmas[g].matrix() * self.sigmas[h].matrix();
                let rhs = alg.left(u) * self.sigmas[self.group.mul(g, h)].matrix();
                let d = max_abs(&(lhs - rhs));
                if d > worst.2 {
                    worst = (g, h, d);
                }
            }
        }
        worst
    }
}

/// For each pair computes a unit by [`is_inner`] on `σ_g σ_h σ_{gh}⁻¹`; pairs
/// where that composite is the identity get `u = 1`.
pub fn out_action_and_units(
    alg: &Algebra,
    group: &FiniteGroup,
    sigmas: Vec<AlgebraAut>,
    opts: &AlgOptions,
) -> Result<OutActionData, AlgError> {
    let m = group.order();
    if sigmas.len() != m {
        return Err(AlgError::Invalid("one automorphism per group element is required".into()));
    }
    let e = group.identity();
    let mut units = Vec::with_capacity(m * m);
    let mut attempts = 0;
    for g in 0..m {
        for h in 0..m {
            if g == e || h == e {
                units.push(alg.unit().to_vec());
                continue;
            }
            let composite = sigmas[g]
                .compose(&sigmas[h])
                .compose(&sigmas[group.mul(g, h)].inverse());
            if composite.distance(&AlgebraAut::identity(alg.dim())) <= opts.tolerance {
                units.push(alg.unit().to_vec());
                continue;
            }
            let pair_opts = AlgOptions {
                seed: opts.seed.wrapping_add((g * m + h) as u64 + 1),
                ..*opts
            };
            let w = is_inner(alg, &composite, &pair_opts).ok_or(AlgError::NotOutHomomorphism(g, h))?;
            attempts += w.attempts;
            units.push(w.unit);
        }
    }
    let mut out = OutActionData::from_parts(alg, group, sigmas, units, opts.tolerance)?;
    out.attempts = attempts;
    Ok(out)
}

/// Replaces each `σ_g` (`g ≠ e`) by `Ad(r_g) σ_g` for a seeded random
/// invertible `r_g`; the image in `Out(A)` is unchanged.
pub fn inner_perturbation(alg: &Algebra, group: &FiniteGroup, sigmas: &[AlgebraAut], seed: u64) -> Result<Vec<AlgebraAut>, AlgError> {
    let opts = AlgOptions { seed, ..AlgOptions::default() };
    let mut rng = opts.rng(0x7E27);
    let mut out = Vec::with_capacity(sigmas.len());
    for (g, s) in sigmas.iter().enumerate() {
        if g == group.identity() {
            out.push(s.clone());
            continue;
        }
        let r = (0..super::INNER_RETRIES)
            .map(|_| random_vector(alg.dim(), &mut rng))
            .find(|r| alg.inverse(r).is_some())
            .ok_or_else(|| AlgError::Invalid("no invertible random element found".into()))?;
        out.push(AlgebraAut::inner(alg, &r)?.compose(s));
    }
    Ok(out)
}

/// The numerical 3-cocycle `c(g,h,k)` and its class in `H³(G, ℂ*)`.
#[derive(Clone, Debug)]
pub struct Obstruction {
    /// `c` over `G³`, first argument most significant.
    pub values: Vec<Complex64>,
    /// Largest `|δc − 1|`.
    pub cocycle_defect: f64,
    /// Largest distance of `u_{g,h}u_{gh,k}u_{g,hk}⁻¹σ_g(u_{h,k})⁻¹` from the scalar line.
    pub scalar_defect: f64,
    pub class: PhaseClass,
    /// When the class vanishes: units rescaled by `e(ν)` with `δν` the phase of `c`.
    pub corrected: Option<OutActionData>,
    /// Largest `|c − 1|` for the corrected units.
    pub corrected_defect: Option<f64>,
}

impl Obstruction {
    pub fn is_zero(&self) -> bool {
        self.class.is_zero()
    }
}

fn obstruction_values(alg: &Algebra, oad: &OutActionData) -> Result<(Vec<Complex64>, f64), AlgError> {
    let g = oad.group();
    let m = g.order();
    let inv: Vec<Vec<Complex64>> = oad
        .units
        .iter()
        .map(|u| alg.inverse(u).ok_or_else(|| AlgError::Invalid("unit is not invertible".into())))
        .collect::<Result<_, _>>()?;
    let mut values = Vec::with_capacity(m * m * m);
    let mut scalar_defect: f64 = 0.0;
    for a in 0..m {
        for b in 0..m {
            for c in 0..m {
                let ab = g.mul(a, b);
                let bc = g.mul(b, c);
                let sigma_u = oad.sigma(a).apply(oad.unit(b, c));
                let sigma_u_inv = alg
                    .inverse(&sigma_u)
                    .ok_or_else(|| AlgError::Invalid("σ(u) is not invertible".into()))?;
                let x = alg.mul(
                    &alg.mul(&alg.mul(oad.unit(a, b), oad.unit(ab, c)), &inv[a * m + bc]),
                    &sigma_u_inv,
                );
                let (s, r) = alg.scalar_part(&x);
                scalar_defect = scalar_defect.max(r);
                values.push(s);
            }
        }
    }
    Ok((values, scalar_defect))
}

fn multiplicative_defect(g: &FiniteGroup, values: &[Complex64]) -> f64 {
    let m = g.order();
    let at = |a: usize, b: usize, c: usize| values[(a * m + b) * m + c];
    let mut worst: f64 = 0.0;
    for a in 0..m {
        for b in 0..m {
            for c in 0..m {
                for d in 0..m {
                    let lhs = at(b, c, d) * at(a, g.mul(b, c), d) * at(a, b, c);
                    let rhs = at(g.mul(a, b), c, d) * at(a, b, g.mul(c, d));
                    worst = worst.max((lhs - rhs).norm());
                }
            }
        }
    }
    worst
}

/// Requires `Z(A) = ℂ`. Units are first rescaled to `det L_u = 1`, which
/// forces `|c| = 1`.
pub fn obstruction_class(alg: &Algebra, oad: &OutActionData, opts: &AlgOptions) -> Result<Obstruction, AlgError> {
    let z = center(alg, opts.tolerance).dim();
    if z != 1 {
        return Err(AlgError::CenterNotScalar(z));
    }
    let g = oad.group().clone();
    let m = g.order();
    let mut normalized = oad.clone();
    for u in normalized.units.iter_mut() {
        *u = alg.det_normalized(u);
    }
    let (values, scalar_defect) = obstruction_values(alg, &normalized)?;
    if scalar_defect > opts.tolerance.sqrt() {
        return Err(AlgError::Hypothesis(format!(
            "obstruction element is not scalar (defect {scalar_defect:e})"
        )));
    }
    let cocycle_defect = multiplicative_defect(&g, &values);
    if cocycle_defect > 1e-7 {
        return Err(AlgError::Coh(CohError::NumericalCocycle {
            tuple: Vec::new(),
            residual: cocycle_defect,
        }));
    }
    let class = phase_class(&g, 3, &values, opts.tolerance.sqrt(), opts.budget)?;
    let (corrected, corrected_defect) = match phase_trivialization(&g, &class, opts.budget)? {
        Some(nu) => {
            let fixed = normalized.rescaled(|a, b| phase(nu[a * m + b]));
            let (cv, _) = obstruction_values(alg, &fixed)?;
            let d = cv.iter().fold(0.0f64, |w, c| w.max((c - ONE).norm()));
            (Some(fixed), Some(d))
        }
        None => (None, None),
    };
    Ok(Obstruction {
        values,
        cocycle_defect,
        scalar_defect,
        class,
        corrected,
        corrected_defect,
    })
}

/// Classes of the obstruction over several re-randomizations.
#[derive(Clone, Debug, PartialEq)]
pub struct ObstructionStability {
    pub seeds: Vec<u64>,
    pub divisors: Vec<i64>,
    pub coordinates: Vec<Vec<i64>>,
    pub stable: bool,
}

/// For each seed, perturbs every `σ_g` by a random inner automorphism,
/// recomputes units with that seed and extracts the class.
pub fn obstruction_stability(
    alg: &Algebra,
    group: &FiniteGroup,
    sigmas: &[AlgebraAut],
    seeds: &[u64],
    opts: &AlgOptions,
) -> Result<ObstructionStability, AlgError> {
    let mut coordinates = Vec::new();
    let mut divisors = Vec::new();
    for &seed in seeds {
        let perturbed = inner_perturbation(alg, group, sigmas, seed)?;
        let o = AlgOptions { seed, ..*opts };
        let oad = out_action_and_units(alg, group, perturbed, &o)?;
        let ob = obstruction_class(alg, &oad, &o)?;
        divisors = ob.class.divisors.clone();
        coordinates.push(ob.class.coordinates);
    }
    let stable = coordinates.windows(2).all(|w| w[0] == w[1]);
    Ok(ObstructionStability {
        seeds: seeds.to_vec(),
        divisors,
        coordinates,
        stable,
    })
}

/// The class in `H²(G, ℂ*)` of the scalars `r(g,h)` with
/// `u'_{g,h} = r(g,h)·u_{g,h}`, for two coherent unit systems on the same `σ`.
pub fn unit_ratio_class(alg: &Algebra, a: &OutActionData, b: &OutActionData, opts: &AlgOptions) -> Result<PhaseClass, AlgError> {
    let g = a.group();
    let m = g.order();
    let mut values = Vec::with_capacity(m * m);
    for x in 0..m {
        for y in 0..m {
            if a.sigma(x).distance(b.sigma(x)) > opts.tolerance {
                return Err(AlgError::Invalid("unit systems over different automorphisms".into()));
            }
            let inv = alg
                .inverse(a.unit(x, y))
                .ok_or_else(|| AlgError::Invalid("unit is not invertible".into()))?;
            let (s, r) = alg.scalar_part(&alg.mul(b.unit(x, y), &inv));
            if r > opts.tolerance.sqrt() {
                return Err(AlgError::Hypothesis(format!("units differ by a non-scalar at ({x}, {y})")));
            }
            values.push(s / s.norm());
        }
    }
    Ok(phase_class(g, 2, &values, opts.tolerance.sqrt(), opts.budget)?)
}

/// One member of the `H²(G, ℂ*)`-torsor of coherent actions over a fixed
/// outer action.
#[derive(Clone, Debug)]
pub struct TorsorMember {
    pub twist: Cochain,
    pub action: OutActionData,
}

/// Rescales a coherent unit system by every representative of `H²(G, ℂ*)`.
pub fn torsor_actions(coherent: &OutActionData, opts: &AlgOptions) -> Result<Vec<TorsorMember>, AlgError> {
    let reps = enumerate_h2_representatives(coherent.group(), opts.budget)?;
    Ok(reps
        .into_iter()
        .map(|l| TorsorMember {
            action: coherent.rescaled(|g, h| l.get(&[g, h]).to_complex()),
            twist: l,
        })
        .collect())
}

/// `A ⋊ G` with multiplication `(aU_g)(bU_h) = e(λ(g,h))·a σ_g(b) u_{g,h} U_{gh}`,
/// on the basis `b_i U_g` at index `g·dim A + i`.
#[derive(Clone, Debug)]
pub struct CrossedProduct {
    pub base: Algebra,
    pub action: OutActionData,
    pub twist: Cochain,
    pub algebra: Algebra,
}

/// Crossed product by an honest action.
pub fn crossed_product(
    alg: &Algebra,
    group: &FiniteGroup,
    sigmas: Vec<AlgebraAut>,
    twist: &Cochain,
    tolerance: f64,
) -> Result<CrossedProduct, AlgError> {
    let action = OutActionData::honest(alg, group, sigmas, tolerance)?;
    crossed_product_with_units(alg, &action, twist, tolerance)
}

/// Crossed product by a unit system; fails unless `e(λ)·u` is coherent.
pub fn crossed_product_with_units(
    alg: &Algebra,
    action: &OutActionData,
    twist: &Cochain,
    tolerance: f64,
) -> Result<CrossedProduct, AlgError> {
    let g = action.group();
    if twist.group() != g || twist.degree() != 2 {
        return Err(AlgError::Coh(CohError::Mismatch));
    }
    if let Some(t) = cocycle_violation(twist) {
        return Err(AlgError::Coh(CohError::NotCocycle(t)));
    }
    let m = g.order();
    let d = alg.dim();
    let n = m * d;
    let lefts: Vec<CMat> = (0..d).map(|i| alg.left(&alg.basis(i))).collect();
    let mut table = vec![Vec::new(); n * n];
    for x in 0..m {
        for y in 0..m {
            let xy = g.mul(x, y);
            let scalar = twist.get(&[x, y]).to_complex();
            let ru = alg.right(action.unit(x, y));
            for (i, li) in lefts.iter().enumerate() {
                // Column j: b_i σ_x(b_j) u_{x,y}.
                let p = &ru * li * action.sigma(x).matrix();
                for j in 0..d {
                    let row = &mut table[(x * d + i) * n + y * d + j];
                    for k in 0..d {
                        let c = p[(k, j)] * scalar;
                        if c.norm() > 1e-14 {
                            row.push((xy * d + k, c));
                        }
                    }
                }
            }
        }
    }
    let mut unit = vec![ZERO; n];
    unit[g.identity() * d..(g.identity() + 1) * d].copy_from_slice(alg.unit());
    let algebra = Algebra::from_table(n, table, unit, tolerance).map_err(|e| match e {
        AlgError::Invalid(msg) => AlgError::Invalid(format!("crossed product: {msg}; the twisted unit system is not coherent")),
        other => other,
    })?;
    Ok(CrossedProduct {
        base: alg.clone(),
        action: action.clone(),
        twist: twist.clone(),
        algebra,
    })
}

impl CrossedProduct {
    pub fn group(&self) -> &FiniteGroup {
        self.action.group()
    }

    /// `a·U_g` as an element of the crossed product.
    pub fn element(&self, a: &[Complex64], g: usize) -> Vec<Complex64> {
        let d = self.base.dim();
        let mut v = vec![ZERO; self.algebra.dim()];
        v[g * d..(g + 1) * d].copy_from_slice(a);
        v
    }

    /// The `A`-coefficient of `x` at `U_g`.
    pub fn component(&self, x: &[Complex64], g: usize) -> Vec<Complex64> {
        let d = self.base.dim();
        x[g * d..(g + 1) * d].to_vec()
    }

    /// Automorphism `aU_g ↦ χ(g)·aU_g` for a linear character of `G`.
    pub fn dual_automorphism(&self, chi: &crate::grp::Character) -> AlgebraAut {
        let d = self.base.dim();
        let n = self.algebra.dim();
        let mut m = CMat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = chi.eval(i / d).to_complex();
        }
        AlgebraAut::unchecked(m)
    }

    /// The `A`-module underlying a crossed-product module, with the
    /// linearization `φ_g = ρ(U_g)`. Returns the restricted module, the
    /// matrices `φ_g`, and the largest violation of
    /// `φ_g ρ(a) = ρ(σ_g a) φ_g` and `φ_gφ_h = e(λ(g,h)) ρ(u_{g,h}) φ_{gh}`.
    pub fn underlying(&self, module: &super::AModule) -> (super::AModule, Vec<CMat>, f64) {
        let g = self.group();
        let m = g.order();
        let d = self.base.dim();
        let e = g.identity();
        let restricted: Vec<CMat> = (0..d).map(|i| module.action(e * d + i).clone()).collect();
        let res = super::AModule::new(&self.base, module.dim(), restricted, 1.0).expect("restriction of a module");
        let phis: Vec<CMat> = (0..m).map(|x| module.act(&self.element(self.base.unit(), x))).collect();
        let mut worst: f64 = 0.0;
        for x in 0..m {
            for i in 0..d {
                let lhs = &phis[x] * res.action(i);
                let rhs = res.act(&self.action.sigma(x).apply(&self.base.basis(i))) * &phis[x];
                worst = worst.max(max_abs(&(lhs - rhs)));
            }
            for y in 0..m {
                let lhs = &phis[x] * &phis[y];
                let rhs = res.act(self.action.unit(x, y)) * &phis[g.mul(x, y)] * self.twist.get(&[x, y]).to_complex();
                worst = worst.max(max_abs(&(lhs - rhs)));
            }
        }
        (res, phis, worst)
    }
}

/// Conjugation by `U_h` on the centralizer `⊕_g TZ(σ_g)·U_g` of `A` in a
/// crossed product: the algebra form of the twisted conjugation on
/// `⊕_g Hom(id, ρ_g)`.
#[derive(Clone, Debug)]
pub struct CentralizerConjugation {
    /// Orthonormal basis of `twisted_center(A, σ_g)`, in `A` coordinates.
    pub summands: Vec<Subspace>,
    pub offsets: Vec<usize>,
    pub dim: usize,
    /// One `dim × dim` matrix per group element.
    pub matrices: Vec<CMat>,
    /// Largest residual met while expressing conjugates in the summand bases.
    pub residual: f64,
}

pub fn centralizer_conjugation(cp: &CrossedProduct, tolerance: f64) -> Result<CentralizerConjugation, AlgError> {
    let g = cp.group().clone();
    let m = g.order();
    let b = &cp.algebra;
    let summands: Vec<Subspace> = (0..m)
        .map(|x| twisted_center(&cp.base, cp.action.sigma(x), tolerance))
        .collect();
    let mut offsets = Vec::with_capacity(m);
    let mut dim = 0;
    for s in &summands {
        offsets.push(dim);
        dim += s.dim();
    }
    let mut matrices = Vec::with_capacity(m);
    let mut residual: f64 = 0.0;
    for h in 0..m {
        let uh = cp.element(cp.base.unit(), h);
        let uh_inv = b
            .inverse(&uh)
            .ok_or_else(|| AlgError::Invalid("U_h is not invertible".into()))?;
        let mut mat = CMat::zeros(dim, dim);
        for x in 0..m {
            let target = g.conj(h, x);
            let tb = &summands[target].basis;
            for (k, a) in summands[x].vectors().into_iter().enumerate() {
                let y = b.mul(&b.mul(&uh, &cp.element(&a, x)), &uh_inv);
                for other in (0..m).filter(|&o| o != target) {
                    residual = residual.max(cp.component(&y, other).iter().fold(0.0, |w, z| w.max(z.norm())));
                }
                let comp = nalgebra::DVector::from_vec(cp.component(&y, target));
                let coords = tb.adjoint() * &comp;
                residual = residual.max((tb * &coords - &comp).iter().fold(0.0, |w, z| w.max(z.norm())));
                for (r, c) in coords.iter().enumerate() {
                    mat[(offsets[target] + r, offsets[x] + k)] = *c;
                }
            }
        }
        matrices.push(mat);
    }
    if residual > tolerance.sqrt() {
        return Err(AlgError::Invalid(format!(
            "conjugation leaves the twisted centers (residual {residual:e})"
        )));
    }
    Ok(CentralizerConjugation {
        summands,
        offsets,
        dim,
        matrices,
        residual,
    })
}

impl CentralizerConjugation {
    /// `(1/|G|) Σ_h M_h`.
    pub fn projector(&self) -> CMat {
        let mut p = CMat::zeros(self.dim, self.dim);
        for m in &self.matrices {
            p += m;
        }
        p / Complex64::new(self.matrices.len() as f64, 0.0)
    }

    /// Largest `|M_g M_h − M_{gh}|`.
    pub fn action_defect(&self, g: &FiniteGroup) -> f64 {
        let m = g.order();
        let mut worst: f64 = 0.0;
        for x in 0..m {
            for y in 0..m {
                let d = &self.matrices[x] * &self.matrices[y] - &self.matrices[g.mul(x, y)];
                worst = worst.max(max_abs(&d));
            }
        }
        worst
    }

    fn indices(&self, elements: &[usize]) -> Vec<usize> {
        let mut idx = Vec::new();
        for &x in elements {
            idx.extend(self.offsets[x]..self.offsets[x] + self.summands[x].dim());
        }
        idx
    }

    /// Invariant vectors supported on the summands of `elements`, embedded in
    /// the crossed product as `Σ_g a_g U_g`.
    pub fn invariants_on(&self, cp: &CrossedProduct, elements: &[usize], tolerance: f64) -> Vec<Vec<Complex64>> {
        let idx = self.indices(elements);
        if idx.is_empty() {
            return Vec::new();
        }
        let p = self.projector();
        let sub = p.select_rows(&idx).select_columns(&idx);
        let img = range(&sub, tolerance);
        let n = cp.algebra.dim();
        (0..img.ncols())
            .map(|c| {
                let mut v = vec![ZERO; n];
                for (r, &i) in idx.iter().enumerate() {
                    let x = elements.iter().copied().find(|&x| i >= self.offsets[x] && i < self.offsets[x] + self.summands[x].dim()).unwrap();
                    let a = column(&self.summands[x].basis, i - self.offsets[x]);
                    let coeff = img[(r, c)];
                    let block = cp.element(&a, x);
                    for (vi, bi) in v.iter_mut().zip(block) {
                        *vi += coeff * bi;
                    }
                }
                v
            })
            .collect()
    }
}

fn integer(value: f64) -> Result<usize, AlgError> {
    near_integer(value, INTEGER_TOLERANCE)
        .filter(|&v| v >= 0)
        .map(|v| v as usize)
        .ok_or(AlgError::NonIntegral { value })
}

/// Degree-0 Hochschild checks on a crossed product, through twisted centers.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgHochschild {
    /// `dim Z(A ⋊ G)` from a direct linear solve.
    pub center_dim: usize,
    pub summand_dims: Vec<usize>,
    /// `dim V_𝔠` per conjugacy class.
    pub class_dims: Vec<usize>,
    /// `dim (⊕_g TZ(σ_g))^G`.
    pub dim_formula: usize,
    /// `(1/|G|) Σ_{gh = hg} tr(M_h on TZ(σ_g))`.
    pub euler: Complex64,
    /// Largest distance of a `V_𝔠` vector from the center of `A ⋊ G`.
    pub center_defect: f64,
    /// Largest `|χ·v − χ(𝔠)v|` over characters and `v ∈ V_𝔠`.
    pub dual_defect: f64,
    pub agrees: bool,
}

pub fn hochschild_crossed(cp: &CrossedProduct, opts: &AlgOptions) -> Result<AlgHochschild, AlgError> {
    let g = cp.group().clone();
    let m = g.order();
    let tol = opts.tolerance;
    let conj = centralizer_conjugation(cp, tol)?;
    let center_dim = center(&cp.algebra, tol).dim();
    let p = conj.projector();
    let dim_formula = integer(p.trace().re)?;
    let classes = g.conjugacy_classes();
    let chars = g.dual_group();
    let mut class_dims = Vec::new();
    let mut center_defect: f64 = 0.0;
    let mut dual_defect: f64 = 0.0;
    for cls in &classes.classes {
        let vs = conj.invariants_on(cp, &cls.elements, tol);
        class_dims.push(vs.len());
        for v in &vs {
            for i in 0..cp.algebra.dim() {
                let bi = cp.algebra.basis(i);
                center_defect = center_defect.max(max_diff(&cp.algebra.mul(&bi, v), &cp.algebra.mul(v, &bi)));
            }
            for chi in &chars {
                let w = cp.dual_automorphism(chi).apply(v);
                let c = chi.eval(cls.elements[0]).to_complex();
                let cv: Vec<Complex64> = v.iter().map(|z| z * c).collect();
                dual_defect = dual_defect.max(max_diff(&w, &cv));
            }
        }
    }
    let mut euler = ZERO;
    for x in 0..m {
        for h in 0..m {
            if g.mul(x, h) != g.mul(h, x) {
                continue;
            }
            let (o, k) = (conj.offsets[x], conj.summands[x].dim());
            for i in 0..k {
                euler += conj.matrices[h][(o + i, o + i)];
            }
        }
    }
    euler /= m as f64;
    let slack = tol.sqrt();
    let agrees = center_dim == dim_formula
        && class_dims.iter().sum::<usize>() == dim_formula
        && (euler - Complex64::new(center_dim as f64, 0.0)).norm() < INTEGER_TOLERANCE
        && center_defect < slack
        && dual_defect < slack;
    Ok(AlgHochschild {
        center_dim,
        summand_dims: conj.summands.iter().map(Subspace::dim).collect(),
        class_dims,
        dim_formula,
        euler,
        center_defect,
        dual_defect,
        agrees,
    })
}

/// Checks `dim TZ(σ_{ghg⁻¹}) = dim TZ(σ_h)` for all `g, h`.
pub fn twisted_center_covariance(alg: &Algebra, oad: &OutActionData, tolerance: f64) -> Result<Vec<usize>, (usize, usize)> {
    let g = oad.group();
    let dims: Vec<usize> = (0..g.order())
        .map(|x| twisted_center(alg, oad.sigma(x), tolerance).dim())
        .collect();
    for x in 0..g.order() {
        for h in 0..g.order() {
            if dims[g.conj(x, h)] != dims[h] {
                return Err((x, h));
            }
        }
    }
    Ok(dims)
}
