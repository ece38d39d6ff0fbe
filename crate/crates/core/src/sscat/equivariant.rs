use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use super::{PhaseAction, Restriction, SSObject};
use crate::error::CatError;
use crate::grp::Character;
use crate::linalg::{max_abs, near_integer, range, CMat};

/// Relative singular-value threshold for projector ranks.
pub const RANK_TOLERANCE: f64 = 1e-8;
/// Allowed distance of a projector trace from an integer.
pub const INTEGER_TOLERANCE: f64 = 1e-6;

/// A morphism as blocks `f_t`, of shape `target[t] × source[t]`.
#[derive(Clone, Debug, PartialEq)]
pub struct SSMorphism {
    pub source: SSObject,
    pub target: SSObject,
    pub blocks: Vec<CMat>,
}

impl SSMorphism {
    pub fn zero(source: &SSObject, target: &SSObject) -> Self {
        let blocks = source
            .multiplicities
            .iter()
            .zip(&target.multiplicities)
            .map(|(&a, &b)| CMat::zeros(b, a))
            .collect();
        SSMorphism {
            source: source.clone(),
            target: target.clone(),
            blocks,
        }
    }

    pub fn identity(x: &SSObject) -> Self {
        SSMorphism {
            source: x.clone(),
            target: x.clone(),
            blocks: x.multiplicities.iter().map(|&k| CMat::identity(k, k)).collect(),
        }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &SSMorphism) -> SSMorphism {
        SSMorphism {
            source: other.source.clone(),
            target: self.target.clone(),
            blocks: self.blocks.iter().zip(&other.blocks).map(|(a, b)| a * b).collect(),
        }
    }

    pub fn inverse(&self) -> Option<SSMorphism> {
        let blocks: Option<Vec<CMat>> = self.blocks.iter().map(|b| b.clone().try_inverse()).collect();
        Some(SSMorphism {
            source: self.target.clone(),
            target: self.source.clone(),
            blocks: blocks?,
        })
    }

    pub fn scale(&self, c: Complex64) -> SSMorphism {
        SSMorphism {
            source: self.source.clone(),
            target: self.target.clone(),
            blocks: self.blocks.iter().map(|b| b * c).collect(),
        }
    }

    pub fn trace(&self) -> Complex64 {
        self.blocks.iter().map(|b| b.trace()).sum()
    }

    /// `ρ_g f`, with `(ρ_g f)_t = f_{π_g⁻¹ t}`.
    pub fn relabel(&self, perm: &[usize]) -> SSMorphism {
        let mut blocks = self.blocks.clone();
        for (s, b) in self.blocks.iter().enumerate() {
            blocks[perm[s]] = b.clone();
        }
        SSMorphism {
            source: self.source.relabel(perm),
            target: self.target.relabel(perm),
            blocks,
        }
    }

    /// If this endomorphism is `c·id`, returns `c`.
    pub fn as_scalar(&self, tol: f64) -> Option<Complex64> {
        let n = self.source.total();
        if n == 0 {
            return None;
        }
        let c = self.trace() / n as f64;
        let ok = self
            .blocks
            .iter()
            .all(|b| max_abs(&(b - CMat::identity(b.nrows(), b.ncols()) * c)) <= tol * c.norm().max(1.0));
        ok.then_some(c)
    }
}

/// An object with a linearization `φ_g: E → ρ_g E`, stored blockwise: the
/// block `phi[g][t]` maps `E_t` to `E_{π_g⁻¹ t}`.
#[derive(Clone, Debug, PartialEq)]
pub struct EquivariantObject {
    pub underlying: SSObject,
    pub phi: Vec<Vec<CMat>>,
}

impl EquivariantObject {
    pub fn zero(a: &PhaseAction) -> Self {
        EquivariantObject {
            underlying: SSObject::new(vec![0; a.n]),
            phi: vec![vec![CMat::zeros(0, 0); a.n]; a.group.order()],
        }
    }

    /// The morphism `φ_g`.
    pub fn phi_morphism(&self, a: &PhaseAction, g: usize) -> SSMorphism {
        SSMorphism {
            source: self.underlying.clone(),
            target: self.underlying.relabel(&a.perms[g]),
            blocks: self.phi[g].clone(),
        }
    }

    /// Largest violation of `e(θ_{g,h}(π_{gh}⁻¹t))·(φ_h)_{π_g⁻¹t}·(φ_g)_t = (φ_{gh})_t`.
    pub fn cocycle_defect(&self, a: &PhaseAction) -> f64 {
        let g = &a.group;
        let m = g.order();
        let mut worst: f64 = 0.0;
        for x in 0..m {
            for y in 0..m {
                let xy = g.mul(x, y);
                for t in 0..a.n {
                    if self.underlying.multiplicities[t] == 0 {
                        continue;
                    }
                    let c = a.theta(x, y, a.pi_inv(xy, t));
                    let lhs = &self.phi[y][a.pi_inv(x, t)] * &self.phi[x][t] * c;
                    worst = worst.max(max_abs(&(lhs - &self.phi[xy][t])));
                }
            }
        }
        let e = g.identity();
        for t in 0..a.n {
            let k = self.underlying.multiplicities[t];
            worst = worst.max(max_abs(&(&self.phi[e][t] - CMat::identity(k, k))));
        }
        worst
    }

    pub fn direct_sum(&self, other: &EquivariantObject) -> EquivariantObject {
        let n = self.underlying.multiplicities.len();
        let mult: Vec<usize> = (0..n)
            .map(|t| self.underlying.multiplicities[t] + other.underlying.multiplicities[t])
            .collect();
        let phi = self
            .phi
            .iter()
            .zip(&other.phi)
            .map(|(pa, pb)| {
                pa.iter()
                    .zip(pb)
                    .map(|(x, y)| {
                        let mut b = CMat::zeros(x.nrows() + y.nrows(), x.ncols() + y.ncols());
                        b.view_mut((0, 0), x.shape()).copy_from(x);
                        b.view_mut(x.shape(), y.shape()).copy_from(y);
                        b
                    })
                    .collect()
            })
            .collect();
        EquivariantObject {
            underlying: SSObject::new(mult),
            phi,
        }
    }

    /// `k` copies.
    pub fn power(&self, a: &PhaseAction, k: usize) -> EquivariantObject {
        (0..k).fold(EquivariantObject::zero(a), |acc, _| acc.direct_sum(self))
    }
}

/// The forgetful functor `p`.
pub fn forget(x: &EquivariantObject) -> SSObject {
    x.underlying.clone()
}

/// Vectorization layout for `Hom(E, E')`: column-major blocks in simple order.
struct Layout {
    offsets: Vec<usize>,
    total: usize,
}

impl Layout {
    fn new(src: &SSObject, dst: &SSObject) -> Self {
        let mut offsets = Vec::with_capacity(src.multiplicities.len());
        let mut total = 0;
        for (a, b) in src.multiplicities.iter().zip(&dst.multiplicities) {
            offsets.push(total);
            total += a * b;
        }
        Layout { offsets, total }
    }
}

/// Matrix of the averaging projector `f ↦ (1/|G|) Σ_g ψ_g⁻¹ ρ_g(f) φ_g` on
/// vectorized `Hom(E, E')`.
pub fn hom_projector(a: &PhaseAction, x: &EquivariantObject, y: &EquivariantObject) -> CMat {
    let lay = Layout::new(&x.underlying, &y.underlying);
    let mut p = CMat::zeros(lay.total, lay.total);
    let m = a.group.order();
    let w = Complex64::new(1.0 / m as f64, 0.0);
    for g in 0..m {
        for t in 0..a.n {
            let (mx, my) = (x.underlying.multiplicities[t], y.underlying.multiplicities[t]);
            if mx * my == 0 {
                continue;
            }
            let s = a.pi_inv(g, t);
            let psi_inv = y.phi[g][t].clone().try_inverse().expect("linearization blocks are invertible");
            let block = x.phi[g][t].transpose().kronecker(&psi_inv) * w;
            let mut v = p.view_mut((lay.offsets[t], lay.offsets[s]), (mx * my, mx * my));
            v += block;
        }
    }
    p
}

/// `dim Hom^G` by the character formula `(1/|G|) Σ_g Σ_{t ∈ Fix π_g} tr(ψ_g)_t⁻¹ · tr(φ_g)_t`.
pub fn hom_trace(a: &PhaseAction, x: &EquivariantObject, y: &EquivariantObject) -> Complex64 {
    let m = a.group.order();
    let mut acc = Complex64::new(0.0, 0.0);
    for g in 0..m {
        for t in a.fixed_points(g) {
            if x.underlying.multiplicities[t] * y.underlying.multiplicities[t] == 0 {
                continue;
            }
            let psi_inv = y.phi[g][t].clone().try_inverse().expect("invertible");
            acc += psi_inv.trace() * x.phi[g][t].trace();
        }
    }
    acc / m as f64
}

/// `Hom^G(X, Y)` with a basis.
#[derive(Clone, Debug)]
pub struct HomSpace {
    pub dim: usize,
    pub basis: Vec<SSMorphism>,
}

fn unvec(v: &[Complex64], src: &SSObject, dst: &SSObject) -> SSMorphism {
    let lay = Layout::new(src, dst);
    let blocks = (0..src.multiplicities.len())
        .map(|t| {
            let (a, b) = (src.multiplicities[t], dst.multiplicities[t]);
            CMat::from_column_slice(b, a, &v[lay.offsets[t]..lay.offsets[t] + a * b])
        })
        .collect();
    SSMorphism {
        source: src.clone(),
        target: dst.clone(),
        blocks,
    }
}

/// The image of the averaging projector. The rank uses singular values
/// (relative threshold [`RANK_TOLERANCE`]) and must match the trace, which
/// must be an integer within [`INTEGER_TOLERANCE`].
pub fn hom_equivariant(a: &PhaseAction, x: &EquivariantObject, y: &EquivariantObject) -> Result<HomSpace, CatError> {
    let p = hom_projector(a, x, y);
    if p.nrows() == 0 {
        return Ok(HomSpace {
            dim: 0,
            basis: Vec::new(),
        });
    }
    let tr = p.trace();
    let dim = near_integer(tr.re, INTEGER_TOLERANCE)
        .filter(|_| tr.im.abs() <= INTEGER_TOLERANCE)
        .ok_or_else(|| CatError::Numerical(alloc::format!("projector trace {tr} is not an integer")))?;
    let img = range(&p, RANK_TOLERANCE);
    if img.ncols() as i64 != dim {
        return Err(CatError::Numerical(alloc::format!(
            "projector rank {} disagrees with trace {dim}",
            img.ncols()
        )));
    }
    let basis = (0..img.ncols())
        .map(|i| {
            let col: Vec<Complex64> = img.column(i).iter().copied().collect();
            unvec(&col, &x.underlying, &y.underlying)
        })
        .collect();
    Ok(HomSpace {
        dim: img.ncols(),
        basis,
    })
}

/// `dim Hom^G(X, Y)` from the character formula, rounded.
pub fn hom_dim(a: &PhaseAction, x: &EquivariantObject, y: &EquivariantObject) -> Result<usize, CatError> {
    let tr = hom_trace(a, x, y);
    match near_integer(tr.re, INTEGER_TOLERANCE) {
        Some(k) if k >= 0 && tr.im.abs() <= INTEGER_TOLERANCE => Ok(k as usize),
        _ => Err(CatError::Numerical(alloc::format!("Hom dimension {tr} is not an integer"))),
    }
}

/// Whether `f: X → Y` commutes with the linearizations.
pub fn is_equivariant_morphism(a: &PhaseAction, x: &EquivariantObject, y: &EquivariantObject, f: &SSMorphism, tol: f64) -> bool {
    (0..a.group.order()).all(|g| {
        (0..a.n).all(|t| {
            if x.underlying.multiplicities[t] * y.underlying.multiplicities[t] == 0 {
                return true;
            }
            let s = a.pi_inv(g, t);
            let lhs = &y.phi[g][t] * &f.blocks[t];
            let rhs = &f.blocks[s] * &x.phi[g][t];
            max_abs(&(lhs - rhs)) <= tol
        })
    })
}

/// `Ind_H^G F` for an `H`-equivariant object `F` (linearization indexed by
/// the numbering of `H` in `res`).
///
/// The underlying object is `⊕_j ρ_{g_j} E` over left coset representatives
/// with `g_0 = e`. Writing `g·g_i = g_j·h`, the summand `j` maps to the summand
/// `i` of `ρ_g(⊕ ρ_{g_i} E)` through `θ_{g,g_i}⁻¹ ∘ θ_{g_j,h} ∘ ρ_{g_j}(φ_h)`.
pub fn induce(a: &PhaseAction, res: &Restriction, f: &EquivariantObject) -> Result<EquivariantObject, CatError> {
    let g = &a.group;
    let cosets = g.left_cosets(&res.elements)?;
    let reps = &cosets.representatives;
    let r = reps.len();
    let mut local = vec![usize::MAX; g.order()];
    for (i, &x) in res.elements.iter().enumerate() {
        local[x] = i;
    }
    let base = &f.underlying.multiplicities;
    // summand j at position t is E_{π_{g_j}⁻¹ t}
    let part = |j: usize, t: usize| base[a.pi_inv(reps[j], t)];
    let mut offsets = vec![vec![0usize; r]; a.n];
    let mut mult = vec![0usize; a.n];
    for t in 0..a.n {
        for j in 0..r {
            offsets[t][j] = mult[t];
            mult[t] += part(j, t);
        }
    }
    let mut phi = Vec::with_capacity(g.order());
    for x in 0..g.order() {
        let mut blocks = Vec::with_capacity(a.n);
        for t in 0..a.n {
            let s = a.pi_inv(x, t);
            let mut b = CMat::zeros(mult[s], mult[t]);
            for j in 0..r {
                let dj = part(j, t);
                if dj == 0 {
                    continue;
                }
                let i = cosets.coset_of[g.mul(g.inv(x), reps[j])];
                let gi = reps[i];
                let h = g.mul(g.mul(g.inv(reps[j]), x), gi);
                let hl = local[h];
                debug_assert!(hl != usize::MAX);
                let c = a.theta(reps[j], h, a.pi_inv(g.mul(reps[j], h), t))
                    / a.theta(x, gi, a.pi_inv(g.mul(x, gi), t));
                let inner = &f.phi[hl][a.pi_inv(reps[j], t)] * c;
                debug_assert_eq!(inner.nrows(), part(i, s));
                b.view_mut((offsets[s][i], offsets[t][j]), inner.shape()).copy_from(&inner);
            }
            blocks.push(b);
        }
        phi.push(blocks);
    }
    Ok(EquivariantObject {
        underlying: SSObject::new(mult),
        phi,
    })
}

/// `Res^G_H X`.
pub fn restrict_object(res: &Restriction, x: &EquivariantObject) -> EquivariantObject {
    EquivariantObject {
        underlying: x.underlying.clone(),
        phi: res.elements.iter().map(|&g| x.phi[g].clone()).collect(),
    }
}

/// The trivial subgroup as a restriction.
pub fn trivial_restriction(a: &PhaseAction) -> Restriction {
    a.restrict(&[a.group.identity()]).expect("trivial subgroup")
}

/// The linearization functor `q(E) = Ind_{e}^G E`.
pub fn linearize(a: &PhaseAction, e: &SSObject) -> EquivariantObject {
    let res = trivial_restriction(a);
    let f = EquivariantObject {
        underlying: e.clone(),
        phi: vec![e.multiplicities.iter().map(|&k| CMat::identity(k, k)).collect()],
    };
    induce(a, &res, &f).expect("trivial subgroup")
}

/// `χ·(E, φ) = (E, χφ)`.
pub fn twist_by_character(x: &EquivariantObject, chi: &Character) -> EquivariantObject {
    EquivariantObject {
        underlying: x.underlying.clone(),
        phi: x
            .phi
            .iter()
            .enumerate()
            .map(|(g, blocks)| {
                let c = chi.eval(g).to_complex();
                blocks.iter().map(|b| b * c).collect()
            })
            .collect(),
    }
}
