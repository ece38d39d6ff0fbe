//! Radical, semisimple quotient, simples and blocks; the faithful
//! decomposition of a crossed product by an abelian group.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
#[cfg(not(feature = "std"))]
use num_traits::Float;

use super::{
    center, centralizer_conjugation, column, crossed_product, crossed_product_with_units, max_diff, random_vector,
    twisted_center, AlgOptions, Algebra, AlgebraAut, OutActionData, Subspace, INTEGER_TOLERANCE,
};
use crate::coh::Cochain;
use crate::error::AlgError;
use crate::grp::FiniteGroup;
use crate::linalg::{near_integer, nullspace, range, CMat, ZERO};

/// Minimal relative separation of eigenvalues used to split a center.
pub const CLUSTER_TOLERANCE: f64 = 1e-6;
/// Random central elements tried before reporting an eigen-cluster failure.
const SPLIT_RETRIES: usize = 8;

/// Dimension data that certifies nothing beyond itself, compared across
/// algebras: sorted simple and block dimensions plus the radical.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DimensionTable {
    pub dim: usize,
    pub radical_dim: usize,
    pub simple_dims: Vec<usize>,
    pub block_count: usize,
    pub block_dims: Vec<usize>,
}

/// Wedderburn data of a finite-dimensional algebra.
#[derive(Clone, Debug)]
pub struct Wedderburn {
    pub dim: usize,
    pub radical_dim: usize,
    /// Orthonormal complement of the radical; `S`-coordinates are `Q^H x`.
    pub complement: CMat,
    /// The semisimple quotient `S = A / rad A`.
    pub quotient: Algebra,
    /// Simple dimensions, aligned with `simple_idempotents`.
    pub simple_dims: Vec<usize>,
    /// Central primitive idempotents of `S`, in `S` coordinates.
    pub simple_idempotents: Vec<Vec<Complex64>>,
    pub center_dim: usize,
    pub center_radical_dim: usize,
    /// Block dimensions, aligned with `block_idempotents`.
    pub block_dims: Vec<usize>,
    /// Central primitive idempotents of the algebra.
    pub block_idempotents: Vec<Vec<Complex64>>,
    /// Smallest relative eigenvalue separation met while splitting.
    pub spectral_gap: f64,
}

impl Wedderburn {
    pub fn simple_count(&self) -> usize {
        self.simple_dims.len()
    }

    pub fn block_count(&self) -> usize {
        self.block_dims.len()
    }

    pub fn semisimple_dim(&self) -> usize {
        self.dim - self.radical_dim
    }

    pub fn table(&self) -> DimensionTable {
        let mut simple_dims = self.simple_dims.clone();
        simple_dims.sort_unstable();
        let mut block_dims = self.block_dims.clone();
        block_dims.sort_unstable();
        DimensionTable {
            dim: self.dim,
            radical_dim: self.radical_dim,
            simple_dims,
            block_count: block_dims.len(),
            block_dims,
        }
    }
}

fn integer(value: f64) -> Result<usize, AlgError> {
    near_integer(value, INTEGER_TOLERANCE)
        .filter(|&v| v >= 0)
        .map(|v| v as usize)
        .ok_or(AlgError::NonIntegral { value })
}

/// Kernel of the trace form `(x, y) ↦ tr L_{xy}` on the span of `basis`
/// (columns, in `alg` coordinates), as coefficient vectors.
fn trace_form_kernel(alg: &Algebra, basis: &CMat, tolerance: f64) -> CMat {
    let k = basis.ncols();
    let lefts: Vec<CMat> = (0..k).map(|i| alg.left(&column(basis, i))).collect();
    let mut t = CMat::zeros(k, k);
    for i in 0..k {
        for j in i..k {
            let v = (&lefts[i] * &lefts[j]).trace();
            t[(i, j)] = v;
            t[(j, i)] = v;
        }
    }
    nullspace(&t, tolerance)
}

/// The algebra structure on orthonormal columns `basis`, with products
/// projected back by `basis^H`: a subalgebra with unit `unit`, or a quotient
/// when `basis` is orthogonal to an ideal containing the rest.
fn subalgebra(alg: &Algebra, basis: &CMat, unit: &[Complex64], tolerance: f64) -> Result<Algebra, AlgError> {
    let k = basis.ncols();
    let vecs: Vec<Vec<Complex64>> = (0..k).map(|i| column(basis, i)).collect();
    let proj = basis.adjoint();
    let mut constants = vec![ZERO; k * k * k];
    for i in 0..k {
        for j in 0..k {
            let p = nalgebra::DVector::from_vec(alg.mul(&vecs[i], &vecs[j]));
            let c = &proj * p;
            constants[(i * k + j) * k..(i * k + j + 1) * k].copy_from_slice(c.as_slice());
        }
    }
    let u = &proj * nalgebra::DVector::from_column_slice(unit);
    Algebra::new(k, &constants, u.iter().copied().collect(), tolerance)
}

/// Central primitive idempotents of `alg` from an orthonormal basis of its
/// center: split `Z / rad Z` by the eigenvalues of a random central `z`,
/// interpolate, and lift with `e ↦ 3e² − 2e³`.
fn central_idempotents(
    alg: &Algebra,
    zbasis: &CMat,
    opts: &AlgOptions,
    salt: u64,
) -> Result<(Vec<Vec<Complex64>>, usize, f64), AlgError> {
    let m = zbasis.ncols();
    let zrad = trace_form_kernel(alg, zbasis, opts.tolerance);
    let rad_dim = zrad.ncols();
    let comp = nullspace(&zrad.adjoint(), opts.tolerance);
    let k = comp.ncols();
    if k == 0 {
        return Err(AlgError::Invalid("center has no semisimple part".into()));
    }
    let zvecs: Vec<Vec<Complex64>> = (0..m).map(|i| column(zbasis, i)).collect();
    let mut rng = opts.rng(salt);
    let mut best_gap = 0.0;
    for _ in 0..SPLIT_RETRIES {
        let r = random_vector(m, &mut rng);
        let mut z = vec![ZERO; alg.dim()];
        for (c, v) in r.iter().zip(&zvecs) {
            for (zi, vi) in z.iter_mut().zip(v) {
                *zi += c * vi;
            }
        }
        // Multiplication by z on Z, then on Z / rad Z.
        let mut mz = CMat::zeros(m, m);
        for j in 0..m {
            let p = nalgebra::DVector::from_vec(alg.mul(&z, &zvecs[j]));
            mz.set_column(j, &(zbasis.adjoint() * p));
        }
        let mbar = comp.adjoint() * mz * &comp;
        let eig = nalgebra::Schur::new(mbar).eigenvalues();
        let Some(eig) = eig else { continue };
        let lam: Vec<Complex64> = eig.iter().copied().collect();
        let scale = lam.iter().fold(1.0f64, |a, l| a.max(l.norm()));
        let mut gap = f64::INFINITY;
        for a in 0..k {
            for b in a + 1..k {
                gap = gap.min((lam[a] - lam[b]).norm() / scale);
            }
        }
        if k == 1 {
            gap = 1.0;
        }
        if gap < CLUSTER_TOLERANCE {
            best_gap = f64::max(best_gap, gap);
            continue;
        }
        let mut idem = Vec::with_capacity(k);
        for a in 0..k {
            let mut e = alg.unit().to_vec();
            for b in (0..k).filter(|&b| b != a) {
                let shifted: Vec<Complex64> = z.iter().zip(alg.unit()).map(|(zi, ui)| zi - lam[b] * ui).collect();
                let denom = lam[a] - lam[b];
                e = alg.mul(&e, &shifted).into_iter().map(|x| x / denom).collect();
            }
            for _ in 0..100 {
                let e2 = alg.mul(&e, &e);
                if max_diff(&e2, &e) < 1e-13 {
                    break;
                }
                let e3 = alg.mul(&e2, &e);
                e = e2.iter().zip(&e3).map(|(a2, a3)| a2 * 3.0 - a3 * 2.0).collect();
            }
            let e2 = alg.mul(&e, &e);
            if max_diff(&e2, &e) > opts.tolerance.sqrt() {
                return Err(AlgError::Cluster {
                    tolerance: CLUSTER_TOLERANCE,
                    gap,
                });
            }
            idem.push(e);
        }
        return Ok((idem, rad_dim, gap));
    }
    Err(AlgError::Cluster {
        tolerance: CLUSTER_TOLERANCE,
        gap: best_gap,
    })
}

/// Radical by the trace form of the regular representation, the semisimple
/// quotient split into matrix blocks through its center, and the blocks of
/// the algebra from its center.
pub fn wedderburn_blocks(alg: &Algebra, opts: &AlgOptions) -> Result<Wedderburn, AlgError> {
    let d = alg.dim();
    let tol = opts.tolerance;
    let rad = trace_form_kernel(alg, &CMat::identity(d, d), tol);
    let radical_dim = rad.ncols();
    let complement = if radical_dim == 0 {
        CMat::identity(d, d)
    } else {
        nullspace(&rad.adjoint(), tol)
    };
    // Products of complement vectors, projected along the radical.
    let quotient = subalgebra(alg, &complement, alg.unit(), tol)?;
    let s = quotient.dim();
    let zs = center(&quotient, tol);
    let (simple_idempotents, _, gap_s) = central_idempotents(&quotient, &zs.basis, opts, 0x5151)?;
    let mut simple_dims = Vec::with_capacity(simple_idempotents.len());
    for f in &simple_idempotents {
        let sq = integer(quotient.left(f).trace().re)?;
        let root = (sq as f64).sqrt().round() as usize;
        if root * root != sq {
            return Err(AlgError::NonIntegral { value: (sq as f64).sqrt() });
        }
        simple_dims.push(root);
    }
    if simple_dims.iter().map(|x| x * x).sum::<usize>() != s {
        return Err(AlgError::Invalid(format!(
            "simple dimensions {simple_dims:?} do not fill the semisimple quotient of dimension {s}"
        )));
    }
    let zb = center(alg, tol);
    let (block_idempotents, center_radical_dim, gap_b) = central_idempotents(alg, &zb.basis, opts, 0xB10C)?;
    let mut block_dims = Vec::with_capacity(block_idempotents.len());
    for e in &block_idempotents {
        block_dims.push(integer(alg.left(e).trace().re)?);
    }
    if block_dims.iter().sum::<usize>() != d {
        return Err(AlgError::Invalid(format!("block dimensions {block_dims:?} do not sum to {d}")));
    }
    if block_idempotents.len() != zb.dim() - center_radical_dim {
        return Err(AlgError::Invalid("block count differs from dim Z − dim rad Z".into()));
    }
    Ok(Wedderburn {
        dim: d,
        radical_dim,
        complement,
        quotient,
        simple_dims,
        simple_idempotents,
        center_dim: zb.dim(),
        center_radical_dim,
        block_dims,
        block_idempotents,
        spectral_gap: gap_s.min(gap_b),
    })
}

/// How an automorphism permutes the simples: `σ̄(f_k) = f_{π(k)}` on the
/// semisimple quotient.
pub fn simple_permutation(wed: &Wedderburn, sigma: &AlgebraAut, tolerance: f64) -> Result<Vec<usize>, AlgError> {
    let q = &wed.complement;
    let bar = q.adjoint() * sigma.matrix() * q;
    let bar = AlgebraAut::unchecked(bar);
    let mut perm = Vec::with_capacity(wed.simple_idempotents.len());
    for f in &wed.simple_idempotents {
        let image = bar.apply(f);
        let j = wed
            .simple_idempotents
            .iter()
            .position(|g| max_diff(g, &image) < tolerance.sqrt())
            .ok_or_else(|| AlgError::Invalid("automorphism does not permute the central idempotents".into()))?;
        perm.push(j);
    }
    Ok(perm)
}

/// The block `eA` of a central idempotent, as a unital algebra.
pub fn block_algebra(alg: &Algebra, e: &[Complex64], tolerance: f64) -> Result<Algebra, AlgError> {
    let basis = range(&alg.left(e), tolerance);
    subalgebra(alg, &basis, e, tolerance)
}

/// One block of a faithful decomposition, compared with its reconstruction
/// as a crossed product by `G/H`.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgComponent {
    /// `χ̃(h)`: the scalar of the central element `w_h U_h` on this block.
    pub character: Vec<Complex64>,
    pub block: DimensionTable,
    pub reconstructed: DimensionTable,
    pub agree: bool,
}

/// Faithful decomposition of `A ⋊_λ G` for abelian `G` and `Z(A) = ℂ`.
#[derive(Clone, Debug, PartialEq)]
pub struct FaithfulAlg {
    /// `H = {g : (twisted_center(A, σ_g))^G ≠ 0}`.
    pub subgroup: Vec<usize>,
    pub is_subgroup: bool,
    pub summand_dims: Vec<usize>,
    pub invariant_dims: Vec<usize>,
    /// `dim Z(A ⋊ G)` by a direct solve.
    pub center_dim: usize,
    pub crossed: DimensionTable,
    pub quotient_order: usize,
    pub components: Vec<AlgComponent>,
    pub verified: bool,
}

/// Finds `H`, splits `A ⋊ G` into its blocks, and rebuilds each block as
/// `A ⋊ G/H` with the units `ū_{q,r} = e(λ(s_q, s_r) − λ(h, s_{qr}))·χ̃(h)·w_h⁻¹`
/// for `h = s_q s_r s_{qr}⁻¹`, where `s` is a section and `w_h` spans
/// `twisted_center(A, σ_h)`.
pub fn faithful_decomposition_abelian(
    alg: &Algebra,
    group: &FiniteGroup,
    sigmas: Vec<AlgebraAut>,
    twist: &Cochain,
    opts: &AlgOptions,
) -> Result<FaithfulAlg, AlgError> {
    let tol = opts.tolerance;
    if !group.is_abelian() {
        return Err(AlgError::Hypothesis("the acting group is not abelian".into()));
    }
    let zd = center(alg, tol).dim();
    if zd != 1 {
        return Err(AlgError::Hypothesis(format!("Z(A) has dimension {zd}, not 1")));
    }
    let cp = crossed_product(alg, group, sigmas.clone(), twist, tol)?;
    let conj = centralizer_conjugation(&cp, tol)?;
    let m = group.order();
    let p = conj.projector();
    let mut invariant_dims = Vec::with_capacity(m);
    for x in 0..m {
        let (o, k) = (conj.offsets[x], conj.summands[x].dim());
        let sub = p.view((o, o), (k, k)).into_owned();
        invariant_dims.push(integer(sub.trace().re)?);
    }
    let subgroup: Vec<usize> = (0..m).filter(|&x| invariant_dims[x] > 0).collect();
    let is_subgroup = group.check_subgroup(&subgroup).is_ok();
    let center_dim = center(&cp.algebra, tol).dim();
    let wed = wedderburn_blocks(&cp.algebra, opts)?;
    let crossed = wed.table();
    let mut components = Vec::new();
    let mut quotient_order = 0;
    if is_subgroup {
        let (quot, proj) = group.quotient(&subgroup)?;
        quotient_order = quot.order();
        let e = group.identity();
        let section: Vec<usize> = (0..quot.order())
            .map(|q| {
                if proj.apply(e) == q {
                    e
                } else {
                    (0..m).find(|&g| proj.apply(g) == q).unwrap()
                }
            })
            .collect();
        // w_h spanning TZ(σ_h) and its inverse, for h in H.
        let mut w: Vec<Option<(Vec<Complex64>, Vec<Complex64>)>> = vec![None; m];
        for &h in &subgroup {
            let tz: Subspace = twisted_center(alg, &sigmas[h], tol);
            if tz.dim() != 1 {
                return Err(AlgError::Hypothesis(format!("twisted center of σ_{h} has dimension {}", tz.dim())));
            }
            let wh = if h == e { alg.unit().to_vec() } else { column(&tz.basis, 0) };
            let inv = alg
                .inverse(&wh)
                .ok_or_else(|| AlgError::Hypothesis(format!("twisted center of σ_{h} has no invertible element")))?;
            w[h] = Some((wh, inv));
        }
        let qs: Vec<AlgebraAut> = section.iter().map(|&s| sigmas[s].clone()).collect();
        for blk in &wed.block_idempotents {
            let b = &cp.algebra;
            let mut chi = vec![ZERO; m];
            for &h in &subgroup {
                let (wh, _) = w[h].as_ref().unwrap();
                let zh = cp.element(wh, h);
                let y = b.mul(&zh, blk);
                let nn: f64 = blk.iter().map(|x| x.norm_sqr()).sum();
                let c: Complex64 = blk.iter().zip(&y).map(|(a, v)| a.conj() * v).sum::<Complex64>() / nn;
                if max_diff(&y, &blk.iter().map(|a| a * c).collect::<Vec<_>>()) > tol.sqrt() {
                    return Err(AlgError::Invalid("w_h U_h is not scalar on a block".into()));
                }
                chi[h] = c;
            }
            let k = quot.order();
            let mut units = Vec::with_capacity(k * k);
            for q in 0..k {
                for r in 0..k {
                    let (sq, sr, sqr) = (section[q], section[r], section[quot.mul(q, r)]);
                    let h = group.mul(group.mul(sq, sr), group.inv(sqr));
                    let ph = (twist.get(&[sq, sr]) - twist.get(&[h, sqr])).to_complex() * chi[h];
                    let (_, wi) = w[h].as_ref().unwrap();
                    units.push(wi.iter().map(|x| x * ph).collect::<Vec<_>>());
                }
            }
            // Normalization: ū_{e,·} = ū_{·,e} = 1 holds when χ̃(e) = 1.
            let oad = OutActionData::from_parts(alg, &quot, qs.clone(), units, tol)?;
            let rec = crossed_product_with_units(alg, &oad, &Cochain::zero(&quot, 2), tol)?;
            let reconstructed = wedderburn_blocks(&rec.algebra, opts)?.table();
            let block = wedderburn_blocks(&block_algebra(&cp.algebra, blk, tol)?, opts)?.table();
            components.push(AlgComponent {
                character: subgroup.iter().map(|&h| chi[h]).collect(),
                agree: block == reconstructed,
                block,
                reconstructed,
            });
        }
    }
    let expected = subgroup.len();
    let verified = is_subgroup
        && center_dim == invariant_dims.iter().sum::<usize>()
        && crossed.block_count == expected
        && components.iter().all(|c| c.agree)
        && crossed
            .block_dims
            .iter()
            .all(|&b| b * expected == cp.algebra.dim());
    Ok(FaithfulAlg {
        subgroup,
        is_subgroup,
        summand_dims: conj.summands.iter().map(Subspace::dim).collect(),
        invariant_dims,
        center_dim,
        crossed,
        quotient_order,
        components,
        verified,
    })
}
