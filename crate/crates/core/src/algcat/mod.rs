//! Finite-dimensional algebras over ℂ given by structure constants, their
//! automorphisms and modules, outer actions, crossed products and blocks.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::coh::DEFAULT_BUDGET;
use crate::error::AlgError;
use crate::linalg::{nullspace, singular_values, CMat, ONE, ZERO};

mod action;
mod blocks;
mod fixture;

pub use action::*;
pub use blocks::*;
pub use fixture::*;

/// Default relative tolerance for ranks and defects.
pub const DEFAULT_TOLERANCE: f64 = 1e-8;
/// Distance to the nearest integer allowed before a dimension is rounded.
pub const INTEGER_TOLERANCE: f64 = 1e-6;
/// Random draws from a solution space before declaring it free of invertibles.
pub const INNER_RETRIES: usize = 32;
/// Smallest `σ_min/σ_max` of `L_u` for `u` to count as invertible.
pub const INVERTIBLE_CONDITION: f64 = 1e-6;
/// Structure constants below this modulus are dropped.
const DROP: f64 = 1e-14;

/// Numerical options shared by the algebra operations.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AlgOptions {
    pub tolerance: f64,
    pub seed: u64,
    pub budget: usize,
}

impl Default for AlgOptions {
    fn default() -> Self {
        AlgOptions {
            tolerance: DEFAULT_TOLERANCE,
            seed: 0,
            budget: DEFAULT_BUDGET,
        }
    }
}

impl AlgOptions {
    pub(crate) fn rng(&self, salt: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15))
    }
}

pub(crate) fn random_vector<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<Complex64> {
    (0..n)
        .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect()
}

pub(crate) fn max_diff(x: &[Complex64], y: &[Complex64]) -> f64 {
    x.iter().zip(y).fold(0.0, |m, (a, b)| m.max((a - b).norm()))
}

pub(crate) fn column(m: &CMat, j: usize) -> Vec<Complex64> {
    m.column(j).iter().copied().collect()
}

/// Stacks equally wide matrices vertically.
pub(crate) fn stack(blocks: &[CMat], cols: usize) -> CMat {
    let rows: usize = blocks.iter().map(|b| b.nrows()).sum();
    let mut out = CMat::zeros(rows, cols);
    let mut r = 0;
    for b in blocks {
        out.view_mut((r, 0), (b.nrows(), cols)).copy_from(b);
        r += b.nrows();
    }
    out
}

/// An associative unital algebra with basis `b_0 … b_{d−1}` and
/// `b_i b_j = Σ_k c_{ij}^k b_k`.
#[derive(Clone, Debug)]
pub struct Algebra {
    dim: usize,
    /// Nonzero constants of `b_i b_j`, at index `i·d + j`.
    table: Vec<Vec<(usize, Complex64)>>,
    unit: Vec<Complex64>,
}

impl Algebra {
    /// From dense constants indexed `(i·d + j)·d + k`; validates associativity
    /// and the unit laws.
    pub fn new(dim: usize, constants: &[Complex64], unit: Vec<Complex64>, tolerance: f64) -> Result<Self, AlgError> {
        if constants.len() != dim * dim * dim {
            return Err(AlgError::Invalid(format!(
                "expected {} structure constants, got {}",
                dim * dim * dim,
                constants.len()
            )));
        }
        let table = (0..dim * dim)
            .map(|ij| {
                (0..dim)
                    .filter_map(|k| {
                        let c = constants[ij * dim + k];
                        (c.norm() > DROP).then_some((k, c))
                    })
                    .collect()
            })
            .collect();
        Self::from_table(dim, table, unit, tolerance)
    }

    /// From sparse constants `(i, j, k, c)`; repeated entries add up.
    pub fn from_sparse(
        dim: usize,
        entries: &[(usize, usize, usize, Complex64)],
        unit: Vec<Complex64>,
        tolerance: f64,
    ) -> Result<Self, AlgError> {
        let mut dense = vec![ZERO; dim * dim * dim];
        for &(i, j, k, c) in entries {
            if i >= dim || j >= dim || k >= dim {
                return Err(AlgError::Invalid(format!("index ({i}, {j}, {k}) out of range for dimension {dim}")));
            }
            dense[(i * dim + j) * dim + k] += c;
        }
        Self::new(dim, &dense, unit, tolerance)
    }

    pub(crate) fn from_table(
        dim: usize,
        table: Vec<Vec<(usize, Complex64)>>,
        unit: Vec<Complex64>,
        tolerance: f64,
    ) -> Result<Self, AlgError> {
        if unit.len() != dim {
            return Err(AlgError::Invalid(format!("unit has length {}, expected {dim}", unit.len())));
        }
        let a = Algebra { dim, table, unit };
        let scale = a.scale();
        let assoc = a.associativity_defect();
        if assoc > tolerance * scale * scale {
            return Err(AlgError::Invalid(format!("not associative (defect {assoc:e})")));
        }
        let ud = a.unit_defect();
        if ud > tolerance * scale {
            return Err(AlgError::Invalid(format!("unit laws fail (defect {ud:e})")));
        }
        Ok(a)
    }

    /// The one-dimensional algebra ℂ.
    pub fn scalars() -> Self {
        Algebra {
            dim: 1,
            table: vec![vec![(0, ONE)]],
            unit: vec![ONE],
        }
    }

    /// The full matrix algebra `M_n(ℂ)` on matrix units `E_{ab}` at `a·n + b`.
    pub fn matrix_algebra(n: usize) -> Self {
        let d = n * n;
        let mut table = vec![Vec::new(); d * d];
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    table[(a * n + b) * d + b * n + c].push((a * n + c, ONE));
                }
            }
        }
        let mut unit = vec![ZERO; d];
        for a in 0..n {
            unit[a * n + a] = ONE;
        }
        Algebra { dim: d, table, unit }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn unit(&self) -> &[Complex64] {
        &self.unit
    }

    /// Coefficient of `b_k` in `b_i b_j`.
    pub fn constant(&self, i: usize, j: usize, k: usize) -> Complex64 {
        self.table[i * self.dim + j]
            .iter()
            .find(|e| e.0 == k)
            .map_or(ZERO, |e| e.1)
    }

    /// All nonzero constants as `(i, j, k, c)`.
    pub fn sparse_constants(&self) -> Vec<(usize, usize, usize, Complex64)> {
        let d = self.dim;
        let mut out = Vec::new();
        for (ij, row) in self.table.iter().enumerate() {
            for &(k, c) in row {
                out.push((ij / d, ij % d, k, c));
            }
        }
        out
    }

    pub fn basis(&self, i: usize) -> Vec<Complex64> {
        let mut v = vec![ZERO; self.dim];
        v[i] = ONE;
        v
    }

    fn scale(&self) -> f64 {
        self.table
            .iter()
            .flat_map(|r| r.iter().map(|e| e.1.norm()))
            .fold(1.0, f64::max)
    }

    pub fn mul(&self, x: &[Complex64], y: &[Complex64]) -> Vec<Complex64> {
        let d = self.dim;
        let mut out = vec![ZERO; d];
        for (i, &xi) in x.iter().enumerate() {
            if xi == ZERO {
                continue;
            }
            for (j, &yj) in y.iter().enumerate() {
                if yj == ZERO {
                    continue;
                }
                let s = xi * yj;
                for &(k, c) in &self.table[i * d + j] {
                    out[k] += s * c;
                }
            }
        }
        out
    }

    /// Matrix of `y ↦ x·y`.
    pub fn left(&self, x: &[Complex64]) -> CMat {
        let d = self.dim;
        let mut m = CMat::zeros(d, d);
        for (i, &xi) in x.iter().enumerate() {
            if xi == ZERO {
                continue;
            }
            for j in 0..d {
                for &(k, c) in &self.table[i * d + j] {
                    m[(k, j)] += xi * c;
                }
            }
        }
        m
    }

    /// Matrix of `y ↦ y·x`.
    pub fn right(&self, x: &[Complex64]) -> CMat {
        let d = self.dim;
        let mut m = CMat::zeros(d, d);
        for (i, &xi) in x.iter().enumerate() {
            if xi == ZERO {
                continue;
            }
            for j in 0..d {
                for &(k, c) in &self.table[j * d + i] {
                    m[(k, j)] += xi * c;
                }
            }
        }
        m
    }

    /// Largest coefficient of `(b_i b_j) b_k − b_i (b_j b_k)` over all triples.
    pub fn associativity_defect(&self) -> f64 {
        let d = self.dim;
        let mut buf = vec![ZERO; d];
        let mut worst: f64 = 0.0;
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    for &(l, c) in &self.table[i * d + j] {
                        for &(m, e) in &self.table[l * d + k] {
                            buf[m] += c * e;
                        }
                    }
                    for &(l, c) in &self.table[j * d + k] {
                        for &(m, e) in &self.table[i * d + l] {
                            buf[m] -= c * e;
                        }
                    }
                    for v in buf.iter_mut() {
                        worst = worst.max(v.norm());
                        *v = ZERO;
                    }
                }
            }
        }
        worst
    }

    /// Largest coefficient of `1·b_i − b_i` or `b_i·1 − b_i`.
    pub fn unit_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.dim {
            let b = self.basis(i);
            worst = worst.max(max_diff(&self.mul(&self.unit, &b), &b));
            worst = worst.max(max_diff(&self.mul(&b, &self.unit), &b));
        }
        worst
    }

    /// Two-sided inverse, if `L_x` is well conditioned.
    pub fn inverse(&self, x: &[Complex64]) -> Option<Vec<Complex64>> {
        let l = self.left(x);
        let s = singular_values(&l);
        if s.is_empty() || s[s.len() - 1] <= INVERTIBLE_CONDITION * s[0] {
            return None;
        }
        let y = l.lu().solve(&nalgebra::DVector::from_column_slice(&self.unit))?;
        let y: Vec<Complex64> = y.iter().copied().collect();
        let check = max_diff(&self.mul(&y, x), &self.unit);
        (check < INVERTIBLE_CONDITION).then_some(y)
    }

    /// Best `c` with `x ≈ c·1`, and the residual `max |x − c·1|`.
    pub fn scalar_part(&self, x: &[Complex64]) -> (Complex64, f64) {
        let nn: f64 = self.unit.iter().map(|u| u.norm_sqr()).sum();
        let c: Complex64 = self.unit.iter().zip(x).map(|(u, v)| u.conj() * v).sum::<Complex64>() / nn;
        let r = self.unit.iter().zip(x).fold(0.0f64, |m, (u, v)| m.max((v - c * u).norm()));
        (c, r)
    }

    /// `det L_x`, computed through an LU factorization.
    pub fn norm_determinant(&self, x: &[Complex64]) -> Complex64 {
        self.left(x).lu().determinant()
    }

    /// `x` rescaled so that `det L_x = 1` (principal root).
    pub fn det_normalized(&self, x: &[Complex64]) -> Vec<Complex64> {
        let det = self.norm_determinant(x);
        let root = det.powf(1.0 / self.dim as f64);
        x.iter().map(|v| v / root).collect()
    }
}

/// A linear subspace of an algebra, as orthonormal columns.
#[derive(Clone, Debug)]
pub struct Subspace {
    pub basis: CMat,
}

impl Subspace {
    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn vectors(&self) -> Vec<Vec<Complex64>> {
        (0..self.dim()).map(|j| column(&self.basis, j)).collect()
    }

    pub fn contains(&self, x: &[Complex64], tolerance: f64) -> bool {
        let v = nalgebra::DVector::from_column_slice(x);
        let proj = &self.basis * (self.basis.adjoint() * &v);
        (proj - &v).iter().all(|z| z.norm() <= tolerance * (1.0 + v.norm()))
    }
}

/// An automorphism, as the matrix of its action on basis coordinates.
#[derive(Clone, Debug)]
pub struct AlgebraAut {
    matrix: CMat,
}

impl AlgebraAut {
    /// Validates invertibility, multiplicativity on basis pairs and `σ(1) = 1`.
    pub fn new(alg: &Algebra, matrix: CMat, tolerance: f64) -> Result<Self, AlgError> {
        let d = alg.dim();
        if matrix.shape() != (d, d) {
            return Err(AlgError::InvalidAut(format!("matrix is {:?}, expected {d}×{d}", matrix.shape())));
        }
        let s = singular_values(&matrix);
        if s[d - 1] <= INVERTIBLE_CONDITION * s[0] {
            return Err(AlgError::InvalidAut("matrix is singular".into()));
        }
        let a = AlgebraAut { matrix };
        let md = a.multiplicativity_defect(alg);
        if md > tolerance * s[0] * s[0] * alg.scale() {
            return Err(AlgError::InvalidAut(format!("not multiplicative (defect {md:e})")));
        }
        let ud = max_diff(&a.apply(alg.unit()), alg.unit());
        if ud > tolerance * s[0] {
            return Err(AlgError::InvalidAut(format!("does not fix the unit (defect {ud:e})")));
        }
        Ok(a)
    }

    pub(crate) fn unchecked(matrix: CMat) -> Self {
        AlgebraAut { matrix }
    }

    pub fn identity(dim: usize) -> Self {
        AlgebraAut {
            matrix: CMat::identity(dim, dim),
        }
    }

    /// `Ad(u): x ↦ u x u⁻¹`.
    pub fn inner(alg: &Algebra, u: &[Complex64]) -> Result<Self, AlgError> {
        let ui = alg
            .inverse(u)
            .ok_or_else(|| AlgError::InvalidAut("Ad of a non-invertible element".into()))?;
        Ok(AlgebraAut {
            matrix: alg.right(&ui) * alg.left(u),
        })
    }

    pub fn matrix(&self) -> &CMat {
        &self.matrix
    }

    pub fn apply(&self, x: &[Complex64]) -> Vec<Complex64> {
        (&self.matrix * nalgebra::DVector::from_column_slice(x)).iter().copied().collect()
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &AlgebraAut) -> AlgebraAut {
        AlgebraAut {
            matrix: &self.matrix * &other.matrix,
        }
    }

    pub fn inverse(&self) -> AlgebraAut {
        AlgebraAut {
            matrix: self.matrix.clone().try_inverse().expect("automorphisms are invertible"),
        }
    }

    pub fn power(&self, k: usize) -> AlgebraAut {
        let mut out = AlgebraAut::identity(self.matrix.nrows());
        for _ in 0..k {
            out = out.compose(self);
        }
        out
    }

    /// Largest entry of the difference of the two matrices.
    pub fn distance(&self, other: &AlgebraAut) -> f64 {
        crate::linalg::max_abs(&(&self.matrix - &other.matrix))
    }

    /// Largest coefficient of `σ(b_i b_j) − σ(b_i) σ(b_j)`.
    pub fn multiplicativity_defect(&self, alg: &Algebra) -> f64 {
        let d = alg.dim();
        let images: Vec<Vec<Complex64>> = (0..d).map(|i| column(&self.matrix, i)).collect();
        let mut worst: f64 = 0.0;
        for i in 0..d {
            for j in 0..d {
                let prod = alg.mul(&alg.basis(i), &alg.basis(j));
                worst = worst.max(max_diff(&self.apply(&prod), &alg.mul(&images[i], &images[j])));
            }
        }
        worst
    }
}

/// A left module: one matrix per basis element.
#[derive(Clone, Debug)]
pub struct AModule {
    dim: usize,
    action: Vec<CMat>,
}

impl AModule {
    /// Validates `ρ(b_i)ρ(b_j) = Σ_k c_{ij}^k ρ(b_k)` and `ρ(1) = id`.
    pub fn new(alg: &Algebra, dim: usize, action: Vec<CMat>, tolerance: f64) -> Result<Self, AlgError> {
        if action.len() != alg.dim() || action.iter().any(|m| m.shape() != (dim, dim)) {
            return Err(AlgError::Invalid("module action has the wrong shape".into()));
        }
        let m = AModule { dim, action };
        let defect = m.defect(alg);
        if defect > tolerance * (1.0 + m.scale()) {
            return Err(AlgError::Invalid(format!("module axioms fail (defect {defect:e})")));
        }
        Ok(m)
    }

    /// The regular module `A` acting on itself from the left.
    pub fn regular(alg: &Algebra) -> Self {
        AModule {
            dim: alg.dim(),
            action: (0..alg.dim()).map(|i| alg.left(&alg.basis(i))).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn action(&self, i: usize) -> &CMat {
        &self.action[i]
    }

    /// `ρ(x)` for an arbitrary element.
    pub fn act(&self, x: &[Complex64]) -> CMat {
        let mut m = CMat::zeros(self.dim, self.dim);
        for (a, &c) in self.action.iter().zip(x) {
            if c != ZERO {
                m += a * c;
            }
        }
        m
    }

    /// The twist `M^σ` with `ρ'(x) = ρ(σ(x))`.
    pub fn twist(&self, sigma: &AlgebraAut) -> AModule {
        let d = self.action.len();
        AModule {
            dim: self.dim,
            action: (0..d).map(|i| self.act(&column(sigma.matrix(), i))).collect(),
        }
    }

    fn scale(&self) -> f64 {
        self.action.iter().map(crate::linalg::max_abs).fold(0.0, f64::max)
    }

    /// Largest violation of the module axioms.
    pub fn defect(&self, alg: &Algebra) -> f64 {
        let d = alg.dim();
        let mut worst = crate::linalg::max_abs(&(self.act(alg.unit()) - CMat::identity(self.dim, self.dim)));
        for i in 0..d {
            for j in 0..d {
                let lhs = &self.action[i] * &self.action[j];
                let rhs = self.act(&alg.mul(&alg.basis(i), &alg.basis(j)));
                worst = worst.max(crate::linalg::max_abs(&(lhs - rhs)));
            }
        }
        worst
    }
}

/// Solutions of `L_{σ(b_i)} z = R_{b_i} z` for all `i`, i.e. `σ(x)·z = z·x`.
fn intertwiners(alg: &Algebra, left: impl Fn(usize) -> Vec<Complex64>, right: impl Fn(usize) -> Vec<Complex64>, tolerance: f64) -> Subspace {
    let d = alg.dim();
    let blocks: Vec<CMat> = (0..d).map(|i| alg.left(&left(i)) - alg.right(&right(i))).collect();
    Subspace {
        basis: nullspace(&stack(&blocks, d), tolerance),
    }
}

/// The center `{z : xz = zx}`.
pub fn center(alg: &Algebra, tolerance: f64) -> Subspace {
    intertwiners(alg, |i| alg.basis(i), |i| alg.basis(i), tolerance)
}

/// `{a : x·a = a·σ(x) for all x}`.
pub fn twisted_center(alg: &Algebra, sigma: &AlgebraAut, tolerance: f64) -> Subspace {
    intertwiners(alg, |i| alg.basis(i), |i| column(sigma.matrix(), i), tolerance)
}

/// An invertible `u` with `σ = Ad(u)` and `det L_u = 1`.
#[derive(Clone, Debug)]
pub struct InnerWitness {
    pub unit: Vec<Complex64>,
    /// Random draws used (1 on the first success).
    pub attempts: usize,
}

/// Solves `σ(x)·u = u·x` and draws seeded random elements of the solution
/// space until one is invertible, at most [`INNER_RETRIES`] times.
pub fn is_inner(alg: &Algebra, sigma: &AlgebraAut, opts: &AlgOptions) -> Option<InnerWitness> {
    let sol = intertwiners(alg, |i| column(sigma.matrix(), i), |i| alg.basis(i), opts.tolerance);
    if sol.dim() == 0 {
        return None;
    }
    let mut rng = opts.rng(0x1AAE);
    for attempt in 1..=INNER_RETRIES {
        let c = nalgebra::DVector::from_vec(random_vector(sol.dim(), &mut rng));
        let u: Vec<Complex64> = (&sol.basis * c).iter().copied().collect();
        if alg.inverse(&u).is_some() {
            return Some(InnerWitness {
                unit: alg.det_normalized(&u),
                attempts: attempt,
            });
        }
    }
    None
}
