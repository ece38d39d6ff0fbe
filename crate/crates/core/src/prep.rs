//! Projective representations: `U_g U_h = e(α(g,h))·U_{gh}`.
//!
//! Twists are handled numerically as tables of unit complex numbers over
//! `G × G`, so that exact cocycles and the phases produced by other layers go
//! through the same code. Irreducibles come from splitting the regular twisted
//! representation with random Hermitian elements of commutants.

use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
#[cfg(not(feature = "std"))]
use num_traits::Float;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::coh::Cochain;
use crate::error::RepError;
use crate::grp::FiniteGroup;
use crate::linalg::{hermitian_clusters, max_abs, near_integer, polar_unitary, random_hermitian, CMat, ONE, ZERO};

/// Seed used when a caller does not supply one.
pub const DEFAULT_SEED: u64 = 0x0005_eed0_f7a1;
/// Default tolerance for the multiplicative law and unitarity.
pub const DEFAULT_TOLERANCE: f64 = 1e-8;

/// `e(α(g,h))` for an exact 2-cochain, row-major over `G × G`.
pub fn twist_table(alpha: &Cochain) -> Vec<Complex64> {
    assert_eq!(alpha.degree(), 2);
    alpha.to_phases()
}

/// The trivial twist.
pub fn trivial_twist(g: &FiniteGroup) -> Vec<Complex64> {
    vec![ONE; g.order() * g.order()]
}

/// Largest violation of the multiplicative 2-cocycle law and of
/// normalization, with a witness triple.
pub fn twist_defect(g: &FiniteGroup, alpha: &[Complex64]) -> (f64, Vec<usize>) {
    let m = g.order();
    let a = |x: usize, y: usize| alpha[x * m + y];
    let mut worst = (0.0, Vec::new());
    for x in 0..m {
        for y in 0..m {
            let d = (a(x, y).norm() - 1.0).abs();
            if d > worst.0 {
                worst = (d, vec![x, y]);
            }
            for z in 0..m {
                let lhs = a(x, y) * a(g.mul(x, y), z);
                let rhs = a(y, z) * a(x, g.mul(y, z));
                let d = (lhs - rhs).norm();
                if d > worst.0 {
                    worst = (d, vec![x, y, z]);
                }
            }
        }
    }
    let e = g.identity();
    for x in 0..m {
        for d in [(a(e, x) - ONE).norm(), (a(x, e) - ONE).norm()] {
            if d > worst.0 {
                worst = (d, vec![e, x]);
            }
        }
    }
    worst
}

fn check_twist(g: &FiniteGroup, alpha: &[Complex64], tol: f64) -> Result<(), RepError> {
    if alpha.len() != g.order() * g.order() {
        return Err(RepError::Check("twist table has the wrong size".to_string()));
    }
    let (d, w) = twist_defect(g, alpha);
    if d > tol {
        return Err(RepError::NotCocycle(w));
    }
    Ok(())
}

/// A projective representation with a numerical twist.
#[derive(Clone, Debug)]
pub struct ProjectiveRep {
    pub group: FiniteGroup,
    /// `e(α(g,h))`, row-major over `G × G`.
    pub alpha: Vec<Complex64>,
    pub dim: usize,
    /// `U_g`, indexed by group element.
    pub matrices: Vec<CMat>,
}

impl ProjectiveRep {
    pub fn character(&self) -> Vec<Complex64> {
        self.matrices.iter().map(|m| m.trace()).collect()
    }

    /// Largest deviation from `U_g U_h = α(g,h) U_{gh}`, `U_e = 1` and
    /// unitarity.
    pub fn defect(&self) -> f64 {
        let m = self.group.order();
        let mut worst: f64 = 0.0;
        for g in 0..m {
            for h in 0..m {
                let lhs = &self.matrices[g] * &self.matrices[h];
                let rhs = &self.matrices[self.group.mul(g, h)] * self.alpha[g * m + h];
                worst = worst.max(max_abs(&(lhs - rhs)));
            }
            let u = &self.matrices[g];
            worst = worst.max(max_abs(&(u.adjoint() * u - CMat::identity(self.dim, self.dim))));
        }
        let e = &self.matrices[self.group.identity()];
        worst.max(max_abs(&(e - CMat::identity(self.dim, self.dim))))
    }

    /// Reweights `U_g ↦ e(λ(g))·U_g`, the representation of `α + δλ`.
    pub fn reweight(&self, lambda: &[Complex64]) -> ProjectiveRep {
        let g = &self.group;
        let m = g.order();
        let mut alpha = self.alpha.clone();
        for x in 0..m {
            for y in 0..m {
                alpha[x * m + y] *= lambda[x] * lambda[y] / lambda[g.mul(x, y)];
            }
        }
        ProjectiveRep {
            group: g.clone(),
            alpha,
            dim: self.dim,
            matrices: self.matrices.iter().zip(lambda).map(|(u, &l)| u * l).collect(),
        }
    }

    /// Compression to an invariant subspace with orthonormal basis `q`.
    fn compress(&self, q: &CMat) -> ProjectiveRep {
        let qa = q.adjoint();
        ProjectiveRep {
            group: self.group.clone(),
            alpha: self.alpha.clone(),
            dim: q.ncols(),
            matrices: self.matrices.iter().map(|u| polar_unitary(&(&qa * u * q))).collect(),
        }
    }
}

/// `(1/|G|) Σ conj(χ₁(g)) χ₂(g)`.
pub fn character_inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    let s: Complex64 = a.iter().zip(b).map(|(x, y)| x.conj() * y).sum();
    s / a.len() as f64
}

/// Basis `{u_g}` with `u_g·u_h = e(α(g,h))·u_{gh}`.
#[derive(Clone, Debug)]
pub struct TwistedGroupAlgebra {
    pub group: FiniteGroup,
    pub alpha: Vec<Complex64>,
}

impl TwistedGroupAlgebra {
    pub fn new(group: &FiniteGroup, alpha: Vec<Complex64>) -> Self {
        TwistedGroupAlgebra {
            group: group.clone(),
            alpha,
        }
    }

    /// `u_g·u_h` as `(coefficient, gh)`.
    pub fn mul_basis(&self, g: usize, h: usize) -> (Complex64, usize) {
        (self.alpha[g * self.group.order() + h], self.group.mul(g, h))
    }

    /// Product of two elements given by coefficient vectors.
    pub fn mul(&self, a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
        let m = self.group.order();
        let mut out = vec![ZERO; m];
        for g in 0..m {
            if a[g] == ZERO {
                continue;
            }
            for h in 0..m {
                let (c, gh) = self.mul_basis(g, h);
                out[gh] += a[g] * b[h] * c;
            }
        }
        out
    }

    /// Largest associator `(u_g u_h) u_k − u_g (u_h u_k)` over basis triples.
    pub fn associativity_defect(&self) -> f64 {
        let g = &self.group;
        let m = g.order();
        let mut worst: f64 = 0.0;
        for x in 0..m {
            for y in 0..m {
                for z in 0..m {
                    let (c1, xy) = self.mul_basis(x, y);
                    let (c2, _) = self.mul_basis(xy, z);
                    let (c3, yz) = self.mul_basis(y, z);
                    let (c4, _) = self.mul_basis(x, yz);
                    worst = worst.max((c1 * c2 - c3 * c4).norm());
                }
            }
        }
        worst
    }

    /// Left regular representation `L_g e_h = α(g,h) e_{gh}`.
    pub fn regular_rep(&self) -> ProjectiveRep {
        let g = &self.group;
        let m = g.order();
        let matrices = (0..m)
            .map(|x| {
                let mut u = CMat::zeros(m, m);
                for h in 0..m {
                    u[(g.mul(x, h), h)] = self.alpha[x * m + h];
                }
                u
            })
            .collect();
        ProjectiveRep {
            group: g.clone(),
            alpha: self.alpha.clone(),
            dim: m,
            matrices,
        }
    }
}

/// Whether `x` is α-regular: `α(x,h) = α(h,x)` for every `h` commuting with `x`.
pub fn is_alpha_regular(g: &FiniteGroup, alpha: &[Complex64], x: usize, tol: f64) -> bool {
    let m = g.order();
    g.centralizer(x)
        .into_iter()
        .all(|h| (alpha[x * m + h] - alpha[h * m + x]).norm() <= tol)
}

/// Indices (into `conjugacy_classes().classes`) of the α-regular classes.
pub fn alpha_regular_classes(g: &FiniteGroup, alpha: &[Complex64], tol: f64) -> Result<Vec<usize>, RepError> {
    check_twist(g, alpha, tol)?;
    let classes = g.conjugacy_classes();
    Ok(classes
        .classes
        .iter()
        .enumerate()
        .filter(|(_, c)| is_alpha_regular(g, alpha, c.elements[0], tol))
        .map(|(i, _)| i)
        .collect())
}

/// Options for the numerical decomposition.
#[derive(Clone, Copy, Debug)]
pub struct SplitOptions {
    pub seed: u64,
    pub tolerance: f64,
    /// Eigenvalues closer than this are treated as one cluster.
    pub cluster_tolerance: f64,
    /// Random commutant elements to try before reporting degeneracy.
    pub attempts: usize,
}

impl Default for SplitOptions {
    fn default() -> Self {
        SplitOptions {
            seed: DEFAULT_SEED,
            tolerance: DEFAULT_TOLERANCE,
            cluster_tolerance: 1e-7,
            attempts: 8,
        }
    }
}

fn norm_squared(rep: &ProjectiveRep) -> f64 {
    character_inner(&rep.character(), &rep.character()).re
}

/// Splits `rep` into irreducible subrepresentations (with repetition).
pub fn split_irreducible(rep: &ProjectiveRep, opts: &SplitOptions) -> Result<Vec<ProjectiveRep>, RepError> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut out = Vec::new();
    let mut stack = vec![rep.clone()];
    while let Some(r) = stack.pop() {
        if r.dim == 0 {
            continue;
        }
        let nsq = norm_squared(&r);
        if (nsq - 1.0).abs() < 1e-6 {
            out.push(r);
            continue;
        }
        let mut split = None;
        let mut best_gap: f64 = 0.0;
        for _ in 0..opts.attempts {
            let h = random_hermitian(r.dim, &mut rng);
            let mut p = CMat::zeros(r.dim, r.dim);
            for u in &r.matrices {
                p += u * &h * u.adjoint();
            }
            p /= Complex64::new(r.group.order() as f64, 0.0);
            let p = (&p + p.adjoint()) * Complex64::new(0.5, 0.0);
            let (bases, gap) = hermitian_clusters(&p, opts.cluster_tolerance);
            if bases.len() > 1 {
                if gap > 1e3 * opts.cluster_tolerance {
                    split = Some(bases);
                    break;
                }
                best_gap = best_gap.max(gap);
            }
        }
        let Some(bases) = split else {
            return Err(RepError::Degenerate {
                tolerance: opts.cluster_tolerance,
                gap: best_gap,
            });
        };
        for b in bases {
            stack.push(r.compress(&b));
        }
    }
    Ok(out)
}

/// Pairwise non-isomorphic irreducible α-representations, sorted by
/// dimension and then by character (the trivial representation first when
/// `α = 0`).
pub fn irreps_twisted(g: &FiniteGroup, alpha: &[Complex64], opts: &SplitOptions) -> Result<Vec<ProjectiveRep>, RepError> {
    check_twist(g, alpha, opts.tolerance.max(1e-9))?;
    let reg = TwistedGroupAlgebra::new(g, alpha.to_vec()).regular_rep();
    let pieces = split_irreducible(&reg, opts)?;
    let mut classes: Vec<(ProjectiveRep, Vec<Complex64>, usize)> = Vec::new();
    for p in pieces {
        let chi = p.character();
        match classes.iter_mut().find(|c| (character_inner(&c.1, &chi).norm() - 1.0).abs() < 1e-6) {
            Some(c) => c.2 += 1,
            None => classes.push((p, chi, 1)),
        }
    }
    let total: usize = classes.iter().map(|c| c.0.dim * c.0.dim).sum();
    if total != g.order() || classes.iter().any(|c| c.2 != c.0.dim) {
        return Err(RepError::Check("regular representation multiplicities differ from dimensions".to_string()));
    }
    let regular = alpha_regular_classes(g, alpha, 1e-6)?.len();
    if regular != classes.len() {
        return Err(RepError::Check("irrep count differs from the number of α-regular classes".to_string()));
    }
    for c in &classes {
        let d = c.0.defect();
        if d > 1e-6 {
            return Err(RepError::Check(alloc::format!("multiplicative law violated by {d:e}")));
        }
    }
    let key = |chi: &[Complex64]| -> Vec<(i64, i64)> {
        chi.iter()
            .map(|z| (-(z.re * 1e6).round() as i64, -(z.im * 1e6).round() as i64))
            .collect()
    };
    classes.sort_by_key(|c| (c.0.dim, key(&c.1)));
    Ok(classes.into_iter().map(|c| c.0).collect())
}

/// Multiplicities of `irreps` in `rep` by character inner products.
pub fn multiplicities(rep: &ProjectiveRep, irreps: &[ProjectiveRep]) -> Result<Vec<usize>, RepError> {
    let chi = rep.character();
    irreps
        .iter()
        .map(|ir| {
            let x = character_inner(&ir.character(), &chi);
            match near_integer(x.re, 1e-6) {
                Some(k) if k >= 0 && x.im.abs() < 1e-6 => Ok(k as usize),
                _ => Err(RepError::Check(alloc::format!("non-integral multiplicity {x}"))),
            }
        })
        .collect()
}
