//! Dense complex linear algebra used by the numerical layers.

use alloc::vec::Vec;

use nalgebra::DMatrix;
use num_complex::Complex64;
#[cfg(not(feature = "std"))]
use num_traits::Float;
use rand::Rng;

pub type CMat = DMatrix<Complex64>;

pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Largest entry modulus.
pub fn max_abs(m: &CMat) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

/// Thin singular value decomposition `m = U·diag(σ)·V^H` with `σ` sorted
/// in decreasing order; `U` is `rows × cols` (columns for zero singular values
/// are zero) and `V` is unitary `cols × cols`.
#[derive(Clone, Debug)]
pub struct Svd {
    pub u: CMat,
    pub singular_values: Vec<f64>,
    pub v: CMat,
}

/// One-sided Jacobi SVD. nalgebra's bidiagonalization returns inaccurate
/// factors on rank-deficient inputs, which is exactly where projector ranks
/// and kernels are read off.
pub fn svd(m: &CMat) -> Svd {
    let (rows, cols) = m.shape();
    // Tall inputs: Householder QR first, then Jacobi on the square factor.
    if rows > 2 * cols && cols > 0 {
        let qr = m.clone().qr();
        let inner = svd(&qr.r());
        return Svd {
            u: qr.q() * inner.u,
            singular_values: inner.singular_values,
            v: inner.v,
        };
    }
    let mut a = m.clone();
    let mut v = CMat::identity(cols, cols);
    // Columns below this squared norm are numerically zero and left alone.
    let floor = 1e-34 * m.iter().map(|z| z.norm_sqr()).sum::<f64>();
    for _ in 0..80 {
        let mut rotated = false;
        for p in 0..cols {
            for q in p + 1..cols {
                let alpha: f64 = a.column(p).iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = a.column(q).iter().map(|z| z.norm_sqr()).sum();
                let gamma: Complex64 = a.column(p).iter().zip(a.column(q).iter()).map(|(x, y)| x.conj() * y).sum();
                let g = gamma.norm();
                if alpha.min(beta) <= floor || g <= 1e-15 * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                // Rotate the phase out of γ, then apply a real Jacobi rotation.
                let ph = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for mat in [&mut a, &mut v] {
                    for r in 0..mat.nrows() {
                        let x = mat[(r, p)];
                        let y = mat[(r, q)] * ph.conj();
                        mat[(r, p)] = x * c - y * s;
                        mat[(r, q)] = x * s + y * c;
                    }
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let norms: Vec<f64> = (0..cols).map(|j| a.column(j).norm()).collect();
    let mut order: Vec<usize> = (0..cols).collect();
    order.sort_by(|&x, &y| norms[y].total_cmp(&norms[x]));
    let mut u = CMat::zeros(rows, cols);
    let mut vs = CMat::zeros(cols, cols);
    for (k, &j) in order.iter().enumerate() {
        if norms[j] > 0.0 {
            u.set_column(k, &(a.column(j) / Complex64::new(norms[j], 0.0)));
        }
        vs.set_column(k, &v.column(j));
    }
    Svd {
        u,
        singular_values: order.iter().map(|&j| norms[j]).collect(),
        v: vs,
    }
}

/// Singular values of `m`, decreasing.
pub fn singular_values(m: &CMat) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    svd(m).singular_values
}

fn cutoff(s: &[f64], rel_tol: f64) -> f64 {
    rel_tol * s.iter().fold(0.0f64, |a, &b| a.max(b)).max(1.0)
}

/// Numerical rank with a threshold relative to the largest singular value
/// (and an absolute floor of `rel_tol`).
pub fn rank(m: &CMat, rel_tol: f64) -> usize {
    let s = singular_values(m);
    let cut = cutoff(&s, rel_tol);
    s.iter().filter(|&&x| x > cut).count()
}

/// Orthonormal basis of the image of `m`, as columns.
pub fn range(m: &CMat, rel_tol: f64) -> CMat {
    if m.nrows() == 0 || m.ncols() == 0 {
        return CMat::zeros(m.nrows(), 0);
    }
    let d = svd(m);
    let cut = cutoff(&d.singular_values, rel_tol);
    let k = d.singular_values.iter().filter(|&&x| x > cut).count();
    d.u.columns(0, k).into_owned()
}

/// Orthonormal basis of the kernel of `m`, as columns.
pub fn nullspace(m: &CMat, rel_tol: f64) -> CMat {
    let n = m.ncols();
    if n == 0 {
        return CMat::zeros(0, 0);
    }
    if m.nrows() == 0 {
        return CMat::identity(n, n);
    }
    let d = svd(m);
    let cut = cutoff(&d.singular_values, rel_tol);
    let k = d.singular_values.iter().filter(|&&x| x > cut).count();
    d.v.columns(k, n - k).into_owned()
}

/// Minimum-norm least-squares solution of `m x = b`, ignoring singular
/// values below `rel_tol` relative to the largest.
pub fn least_squares(m: &CMat, b: &[Complex64], rel_tol: f64) -> Vec<Complex64> {
    let n = m.ncols();
    if n == 0 || m.nrows() == 0 {
        return alloc::vec![ZERO; n];
    }
    let d = svd(m);
    let cut = rel_tol * d.singular_values[0];
    let mut x = alloc::vec![ZERO; n];
    for (k, &s) in d.singular_values.iter().enumerate() {
        if s <= cut {
            break;
        }
        let coeff: Complex64 = d.u.column(k).iter().zip(b).map(|(u, y)| u.conj() * y).sum::<Complex64>() / s;
        for (j, xj) in x.iter_mut().enumerate() {
            *xj += d.v[(j, k)] * coeff;
        }
    }
    x
}

/// Unitary polar factor `U` of an invertible `m = U·P`.
pub fn polar_unitary(m: &CMat) -> CMat {
    let d = svd(m);
    &d.u * d.v.adjoint()
}

/// Hermitian matrix with entries uniform in the unit square.
pub fn random_hermitian<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMat {
    let mut h = CMat::zeros(n, n);
    for i in 0..n {
        h[(i, i)] = Complex64::new(rng.random_range(-1.0..1.0), 0.0);
        for j in i + 1..n {
            let z = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            h[(i, j)] = z;
            h[(j, i)] = z.conj();
        }
    }
    h
}

/// Eigenvalue clusters of a Hermitian matrix: eigenvalues within `tol` of
/// their neighbour share a cluster. Returns orthonormal eigenbases per cluster
/// and the smallest gap between clusters (`∞` if there is one cluster).
pub fn hermitian_clusters(h: &CMat, tol: f64) -> (Vec<CMat>, f64) {
    let n = h.nrows();
    let eig = h.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut gap = f64::INFINITY;
    for (k, &i) in order.iter().enumerate() {
        if k > 0 {
            let d = eig.eigenvalues[i] - eig.eigenvalues[order[k - 1]];
            if d <= tol {
                groups.last_mut().unwrap().push(i);
                continue;
            }
            gap = gap.min(d);
        }
        groups.push(alloc::vec![i]);
    }
    let bases = groups
        .into_iter()
        .map(|g| {
            let mut b = CMat::zeros(n, g.len());
            for (k, &i) in g.iter().enumerate() {
                b.set_column(k, &eig.eigenvectors.column(i));
            }
            b
        })
        .collect();
    (bases, gap)
}

/// Kronecker product.
pub fn kron(a: &CMat, b: &CMat) -> CMat {
    a.kronecker(b)
}

/// Trace inner product `tr(a†b)`.
pub fn frob(a: &CMat, b: &CMat) -> Complex64 {
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}

/// Nearest integer to `x` if within `tol`.
pub fn near_integer(x: f64, tol: f64) -> Option<i64> {
    let r = x.round();
    ((x - r).abs() <= tol).then_some(r as i64)
}
