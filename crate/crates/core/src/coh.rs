//! Normalized bar cochains with values in ℚ/ℤ (read inside ℂ*) and their
//! cohomology.
//!
//! `H^n(G, ℂ*)` is computed as `H^{n+1}(G, ℤ)`: the torsion of the cokernel of
//! the integral coboundary `d^n`. A class with divisor `d` is represented by
//! the ℚ/ℤ-valued cocycle `V·e / d`, whose Bockstein is the matching integral
//! class.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::error::CohError;
use crate::grp::{FiniteGroup, GroupHom};
use crate::linalg::{least_squares, CMat};
use crate::root::{lcm, UnitRoot};
use crate::smith::{smith, Smith, SparseIntMatrix};

/// Default cap on the number of nonzeros of a coboundary matrix.
pub const DEFAULT_BUDGET: usize = 4_000_000;
/// Default tolerance for numerical cocycles.
pub const DEFAULT_TOLERANCE: f64 = 1e-8;

/// A normalized `n`-cochain, stored densely over `G^n` (first argument most
/// significant).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cochain {
    group: FiniteGroup,
    degree: usize,
    values: Vec<UnitRoot>,
}

pub(crate) fn tuple_of(index: usize, base: usize, n: usize) -> Vec<usize> {
    let mut t = vec![0; n];
    let mut x = index;
    for k in (0..n).rev() {
        t[k] = x % base;
        x /= base;
    }
    t
}

pub(crate) fn index_of(t: &[usize], base: usize) -> usize {
    t.iter().fold(0, |acc, &x| acc * base + x)
}

impl Cochain {
    pub fn zero(group: &FiniteGroup, degree: usize) -> Self {
        Cochain {
            group: group.clone(),
            degree,
            values: vec![UnitRoot::ZERO; group.order().pow(degree as u32)],
        }
    }

    /// Tabulates `f`; entries with an identity argument are forced to zero.
    pub fn from_fn(group: &FiniteGroup, degree: usize, mut f: impl FnMut(&[usize]) -> UnitRoot) -> Self {
        let m = group.order();
        let e = group.identity();
        let values = (0..m.pow(degree as u32))
            .map(|i| {
                let t = tuple_of(i, m, degree);
                if t.contains(&e) {
                    UnitRoot::ZERO
                } else {
                    f(&t)
                }
            })
            .collect();
        Cochain {
            group: group.clone(),
            degree,
            values,
        }
    }

    /// Builds from sparse `(tuple, value)` pairs; rejects entries that break
    /// normalization or are malformed.
    pub fn from_sparse(
        group: &FiniteGroup,
        degree: usize,
        entries: &[(Vec<usize>, UnitRoot)],
    ) -> Result<Self, CohError> {
        let mut c = Cochain::zero(group, degree);
        for (t, v) in entries {
            if t.len() != degree || t.iter().any(|&x| x >= group.order()) {
                return Err(CohError::Mismatch);
            }
            if t.contains(&group.identity()) && !v.is_zero() {
                return Err(CohError::NotCocycle(t.clone()));
            }
            c.set(t, *v);
        }
        Ok(c)
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn values(&self) -> &[UnitRoot] {
        &self.values
    }

    pub fn get(&self, t: &[usize]) -> UnitRoot {
        self.values[index_of(t, self.group.order())]
    }

    pub fn set(&mut self, t: &[usize], v: UnitRoot) {
        let i = index_of(t, self.group.order());
        self.values[i] = v;
    }

    /// Nonzero entries in index order.
    pub fn sparse(&self) -> Vec<(Vec<usize>, UnitRoot)> {
        let m = self.group.order();
        self.values
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(i, &v)| (tuple_of(i, m, self.degree), v))
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.is_zero())
    }

    pub fn is_normalized(&self) -> bool {
        let m = self.group.order();
        let e = self.group.identity();
        self.values
            .iter()
            .enumerate()
            .all(|(i, v)| v.is_zero() || !tuple_of(i, m, self.degree).contains(&e))
    }

    pub fn add(&self, o: &Cochain) -> Cochain {
        assert_eq!(self.degree, o.degree);
        Cochain {
            group: self.group.clone(),
            degree: self.degree,
            values: self.values.iter().zip(&o.values).map(|(&a, &b)| a + b).collect(),
        }
    }

    pub fn neg(&self) -> Cochain {
        Cochain {
            group: self.group.clone(),
            degree: self.degree,
            values: self.values.iter().map(|&a| -a).collect(),
        }
    }

    pub fn sub(&self, o: &Cochain) -> Cochain {
        self.add(&o.neg())
    }

    pub fn scale(&self, k: i64) -> Cochain {
        Cochain {
            group: self.group.clone(),
            degree: self.degree,
            values: self.values.iter().map(|a| a.scale(k)).collect(),
        }
    }

    /// Least common multiple of the value denominators.
    pub fn denominator(&self) -> i64 {
        self.values.iter().fold(1, |acc, v| lcm(acc, v.denominator()))
    }

    /// Values as points of the unit circle.
    pub fn to_phases(&self) -> Vec<Complex64> {
        self.values.iter().map(|v| v.to_complex()).collect()
    }
}

/// `(δc)(g₁…g_{n+1}) = c(g₂…) + Σᵢ (−1)ⁱ c(…gᵢg_{i+1}…) + (−1)^{n+1} c(g₁…g_n)`.
pub fn coboundary(c: &Cochain) -> Cochain {
    let g = &c.group;
    let n = c.degree;
    let m = g.order();
    let mut out = Cochain::zero(g, n + 1);
    let mut buf = vec![0usize; n];
    for i in 0..m.pow(n as u32 + 1) {
        let t = tuple_of(i, m, n + 1);
        let mut acc = c.get(&t[1..]);
        for k in 0..n {
            buf[..k].copy_from_slice(&t[..k]);
            buf[k] = g.mul(t[k], t[k + 1]);
            buf[k + 1..].copy_from_slice(&t[k + 2..]);
            let v = c.get(&buf);
            if (k + 1) % 2 == 1 {
                acc -= v;
            } else {
                acc += v;
            }
        }
        let last = c.get(&t[..n]);
        if (n + 1) % 2 == 1 {
            acc -= last;
        } else {
            acc += last;
        }
        out.values[i] = acc;
    }
    out
}

/// First tuple where `δc` is nonzero, if any.
pub fn cocycle_violation(c: &Cochain) -> Option<Vec<usize>> {
    coboundary(c).sparse().into_iter().next().map(|(t, _)| t)
}

/// Pullback along a surjection `G' ↠ G`.
pub fn inflate(c: &Cochain, epi: &GroupHom) -> Result<Cochain, CohError> {
    if &epi.target != c.group() {
        return Err(CohError::Mismatch);
    }
    epi.check_surjective()?;
    Ok(Cochain::from_fn(&epi.source, c.degree, |t| {
        let image: Vec<usize> = t.iter().map(|&x| epi.apply(x)).collect();
        c.get(&image)
    }))
}

/// Index bookkeeping for the normalized complex, where `n`-cochains are
/// vectors over `(G∖{e})^n`.
struct Normalized {
    m: usize,
    e: usize,
    /// Position of each non-identity element.
    pos: Vec<usize>,
    /// Non-identity elements in order.
    elems: Vec<usize>,
}

impl Normalized {
    fn new(g: &FiniteGroup) -> Self {
        let e = g.identity();
        let elems: Vec<usize> = g.nontrivial().collect();
        let mut pos = vec![usize::MAX; g.order()];
        for (i, &x) in elems.iter().enumerate() {
            pos[x] = i;
        }
        Normalized {
            m: g.order(),
            e,
            pos,
            elems,
        }
    }

    fn dim(&self, n: usize) -> usize {
        (self.m - 1).pow(n as u32)
    }

    /// Dense `G^n` index of the `k`-th normalized basis tuple.
    fn dense_index(&self, k: usize, n: usize) -> usize {
        let t = tuple_of(k, self.m - 1, n);
        t.iter().fold(0, |acc, &x| acc * self.m + self.elems[x])
    }

    fn tuple(&self, k: usize, n: usize) -> Vec<usize> {
        tuple_of(k, self.m - 1, n).into_iter().map(|x| self.elems[x]).collect()
    }

    /// Normalized index of a tuple, or `None` if it contains the identity.
    fn norm_index(&self, t: &[usize]) -> Option<usize> {
        let mut acc = 0;
        for &x in t {
            if x == self.e {
                return None;
            }
            acc = acc * (self.m - 1) + self.pos[x];
        }
        Some(acc)
    }
}

/// The integral coboundary `d^n: C^n → C^{n+1}` of the normalized complex.
pub fn coboundary_matrix(g: &FiniteGroup, n: usize, budget: usize) -> Result<SparseIntMatrix, CohError> {
    let nz = Normalized::new(g);
    let rows = nz.dim(n + 1);
    let cols = nz.dim(n);
    let estimate = rows.saturating_mul(n + 2);
    if estimate > budget {
        return Err(CohError::BudgetExceeded {
            rows,
            cols,
            nonzeros: estimate,
            budget,
        });
    }
    let mut mat = SparseIntMatrix::zeros(rows, cols);
    let mut buf = vec![0usize; n];
    for r in 0..rows {
        let t = nz.tuple(r, n + 1);
        if let Some(c) = nz.norm_index(&t[1..]) {
            mat.add_entry(r, c, 1);
        }
        for k in 0..n {
            buf[..k].copy_from_slice(&t[..k]);
            buf[k] = g.mul(t[k], t[k + 1]);
            buf[k + 1..].copy_from_slice(&t[k + 2..]);
            if let Some(c) = nz.norm_index(&buf) {
                mat.add_entry(r, c, if (k + 1) % 2 == 1 { -1 } else { 1 });
            }
        }
        if let Some(c) = nz.norm_index(&t[..n]) {
            mat.add_entry(r, c, if (n + 1) % 2 == 1 { -1 } else { 1 });
        }
    }
    Ok(mat)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Coefficients {
    /// ℂ*, computed through ℚ/ℤ and integral cohomology one degree up.
    Circle,
    Integers,
    Modulo(u32),
}

/// A computed cohomology group with representative cocycles.
#[derive(Clone, Debug)]
pub struct CohomologyGroup {
    pub group: FiniteGroup,
    pub degree: usize,
    pub coefficients: Coefficients,
    /// Free rank (nonzero only for `H^0(G, ℤ)`).
    pub free_rank: usize,
    /// Elementary divisors greater than one.
    pub divisors: Vec<i64>,
    /// ℚ/ℤ-valued representatives (for `Circle` and `Modulo`).
    pub generators: Vec<Cochain>,
    /// Integer-valued representatives over `G^n` (for `Integers`).
    pub integral_generators: Vec<Vec<i64>>,
    /// Smith form of `d^n` (for `Circle`) or `d^{n−1}` (for `Integers`).
    smith: Option<Arc<Smith>>,
    /// `d^n` itself, used to take integral coboundaries of lifts.
    matrix: Option<Arc<SparseIntMatrix>>,
    budget: usize,
}

impl CohomologyGroup {
    /// `|H|` (the free part, if any, is ignored).
    pub fn order(&self) -> i64 {
        self.divisors.iter().product()
    }

    pub fn is_trivial(&self) -> bool {
        self.divisors.is_empty() && self.free_rank == 0
    }

    /// The cocycle `Σ aᵢ·genᵢ`.
    pub fn combination(&self, coords: &[i64]) -> Cochain {
        let mut c = Cochain::zero(&self.group, self.degree);
        for (g, &a) in self.generators.iter().zip(coords) {
            c = c.add(&g.scale(a));
        }
        c
    }

    /// Coordinates of the class of a cocycle, `i`-th entry modulo `divisors[i]`.
    pub fn class_coordinates(&self, c: &Cochain) -> Result<Vec<i64>, CohError> {
        if c.group() != &self.group || c.degree() != self.degree {
            return Err(CohError::Mismatch);
        }
        if let Some(t) = cocycle_violation(c) {
            return Err(CohError::NotCocycle(t));
        }
        match self.coefficients {
            Coefficients::Circle => {
                let nz = Normalized::new(&self.group);
                let lden = c.denominator();
                // L·c̃ as integers on normalized tuples.
                let lifted: Vec<i64> = (0..nz.dim(self.degree))
                    .map(|k| {
                        let v = c.values[nz.dense_index(k, self.degree)];
                        v.numerator() * (lden / v.denominator())
                    })
                    .collect();
                let dz = self.matrix.as_ref().unwrap().mul_vec(&lifted);
                let z: Vec<i128> = dz
                    .iter()
                    .map(|&v| {
                        debug_assert_eq!(v % lden, 0);
                        (v / lden) as i128
                    })
                    .collect();
                Ok(self.integral_coordinates_normalized(z))
            }
            Coefficients::Modulo(m) => self.coordinates_by_search(c, m as i64),
            Coefficients::Integers => Err(CohError::Mismatch),
        }
    }

    /// Coordinates of an integral `(n+1)`-cocycle, given on normalized tuples.
    fn integral_coordinates_normalized(&self, mut z: Vec<i128>) -> Vec<i64> {
        let s = self.smith.as_ref().unwrap();
        s.apply_u(&mut z);
        s.pivots
            .iter()
            .filter(|p| p.2 > 1)
            .map(|&(r, _, d)| z[r].rem_euclid(d as i128) as i64)
            .collect()
    }

    /// For `Integers`: coordinates of an integral `n`-cocycle given over `G^n`.
    pub fn integral_class_coordinates(&self, z: &[i64]) -> Result<Vec<i64>, CohError> {
        if self.coefficients != Coefficients::Integers || self.degree == 0 {
            return Err(CohError::Mismatch);
        }
        let nz = Normalized::new(&self.group);
        let v: Vec<i128> = (0..nz.dim(self.degree))
            .map(|k| z[nz.dense_index(k, self.degree)] as i128)
            .collect();
        Ok(self.integral_coordinates_normalized(v))
    }

    fn coordinates_by_search(&self, c: &Cochain, m: i64) -> Result<Vec<i64>, CohError> {
        let mut coords = vec![0i64; self.divisors.len()];
        loop {
            let diff = c.sub(&self.combination(&coords));
            if is_coboundary_mod(&diff, m, self.budget)?.is_some() {
                return Ok(coords);
            }
            let mut i = 0;
            loop {
                if i == coords.len() {
                    return Err(CohError::NotCocycle(Vec::new()));
                }
                coords[i] += 1;
                if coords[i] < self.divisors[i] {
                    break;
                }
                coords[i] = 0;
                i += 1;
            }
        }
    }
}

fn to_dense_cochain(g: &FiniteGroup, n: usize, normalized: &[i128], den: i64) -> Cochain {
    let nz = Normalized::new(g);
    let mut c = Cochain::zero(g, n);
    for (k, &v) in normalized.iter().enumerate() {
        let d = nz.dense_index(k, n);
        c.values[d] = UnitRoot::new((v.rem_euclid(den as i128)) as i64, den);
    }
    c
}

/// Cohomology of `G` in degree `n` with trivial coefficients.
pub fn cohomology_group(
    g: &FiniteGroup,
    n: usize,
    coefficients: Coefficients,
    budget: usize,
) -> Result<CohomologyGroup, CohError> {
    let mut out = CohomologyGroup {
        group: g.clone(),
        degree: n,
        coefficients,
        free_rank: 0,
        divisors: Vec::new(),
        generators: Vec::new(),
        integral_generators: Vec::new(),
        smith: None,
        matrix: None,
        budget,
    };
    match coefficients {
        Coefficients::Circle => {
            if n == 0 {
                return Err(CohError::Degree(0));
            }
            let d = coboundary_matrix(g, n, budget)?;
            let s = smith(&d)?;
            for &(_, c, div) in s.pivots.iter().filter(|p| p.2 > 1) {
                let mut y = vec![0i128; s.cols];
                y[c] = 1;
                s.apply_v(&mut y);
                out.divisors.push(div);
                out.generators.push(to_dense_cochain(g, n, &y, div));
            }
            out.smith = Some(Arc::new(s));
            out.matrix = Some(Arc::new(d));
        }
        Coefficients::Integers => {
            if n == 0 {
                out.free_rank = 1;
                out.integral_generators.push(vec![1]);
                return Ok(out);
            }
            let d = coboundary_matrix(g, n - 1, budget)?;
            let s = smith(&d)?;
            let nz = Normalized::new(g);
            for &(r, _, div) in s.pivots.iter().filter(|p| p.2 > 1) {
                let mut z = vec![0i128; s.rows];
                z[r] = 1;
                s.apply_u_inv(&mut z);
                let mut dense = vec![0i64; g.order().pow(n as u32)];
                for (k, &v) in z.iter().enumerate() {
                    dense[nz.dense_index(k, n)] = v as i64;
                }
                out.divisors.push(div);
                out.integral_generators.push(dense);
            }
            out.smith = Some(Arc::new(s));
        }
        Coefficients::Modulo(m) => {
            let m = m as i64;
            if m < 1 {
                return Err(CohError::Mismatch);
            }
            if n == 0 {
                if m > 1 {
                    out.divisors.push(m);
                    let mut c = Cochain::zero(g, 0);
                    c.values[0] = UnitRoot::new(1, m);
                    out.generators.push(c);
                }
                return Ok(out);
            }
            // H^n(ℤ) ⊗ ℤ_m
            let dl = coboundary_matrix(g, n - 1, budget)?;
            let sl = smith(&dl)?;
            for &(r, _, a) in sl.pivots.iter().filter(|p| p.2 > 1) {
                let gg = crate::root::gcd(a, m);
                if gg > 1 {
                    let mut z = vec![0i128; sl.rows];
                    z[r] = 1;
                    sl.apply_u_inv(&mut z);
                    out.divisors.push(gg);
                    out.generators.push(to_dense_cochain(g, n, &z, m));
                }
            }
            // Tor(H^{n+1}(ℤ), ℤ_m)
            let dh = coboundary_matrix(g, n, budget)?;
            let sh = smith(&dh)?;
            for &(_, c, b) in sh.pivots.iter().filter(|p| p.2 > 1) {
                let gg = crate::root::gcd(b, m);
                if gg > 1 {
                    let mut y = vec![0i128; sh.cols];
                    y[c] = 1;
                    sh.apply_v(&mut y);
                    out.divisors.push(gg);
                    out.generators.push(to_dense_cochain(g, n, &y, gg));
                }
            }
        }
    }
    Ok(out)
}

/// Decides whether a ℚ/ℤ-valued cocycle is a coboundary; returns a witness
/// `w` with `δw = c` exactly.
///
/// The system is solved over `ℤ_M` with `M = lcm(denominators)·|G|`: every
/// class is `|G|`-torsion, so a witness with denominators dividing `M` exists
/// whenever any witness does.
pub fn is_coboundary(c: &Cochain, budget: usize) -> Result<Option<Cochain>, CohError> {
    if let Some(t) = cocycle_violation(c) {
        return Err(CohError::NotCocycle(t));
    }
    let g = c.group();
    let n = c.degree();
    if n == 0 {
        return Err(CohError::Degree(0));
    }
    let m_mod = c.denominator() * g.order() as i64;
    let nz = Normalized::new(g);
    let b: Vec<i128> = (0..nz.dim(n))
        .map(|k| {
            let v = c.values[nz.dense_index(k, n)];
            (v.numerator() * (m_mod / v.denominator())) as i128
        })
        .collect();
    let d = coboundary_matrix(g, n - 1, budget)?;
    let s = smith(&d)?;
    let Some(y) = s.solve_mod(&b, m_mod as i128) else {
        return Ok(None);
    };
    let w = to_dense_cochain(g, n - 1, &y, m_mod);
    assert_eq!(&coboundary(&w), c, "modular witness failed exact verification");
    Ok(Some(w))
}

/// Decides whether a `ℤ_m`-valued cocycle (values in `(1/m)ℤ/ℤ`) is the
/// coboundary of a `ℤ_m`-valued cochain.
pub fn is_coboundary_mod(c: &Cochain, m: i64, budget: usize) -> Result<Option<Cochain>, CohError> {
    let g = c.group();
    let n = c.degree();
    if n == 0 {
        return Ok(if c.is_zero() { Some(Cochain::zero(g, 0)) } else { None });
    }
    let nz = Normalized::new(g);
    let mut b = Vec::with_capacity(nz.dim(n));
    for k in 0..nz.dim(n) {
        let v = c.values[nz.dense_index(k, n)];
        if m % v.denominator() != 0 {
            return Err(CohError::Mismatch);
        }
        b.push((v.numerator() * (m / v.denominator())) as i128);
    }
    let d = coboundary_matrix(g, n - 1, budget)?;
    let s = smith(&d)?;
    Ok(s.solve_mod(&b, m as i128).map(|y| to_dense_cochain(g, n - 1, &y, m)))
}

/// One representative per class of `H²(G, ℂ*)`, the zero cochain first.
pub fn enumerate_h2_representatives(g: &FiniteGroup, budget: usize) -> Result<Vec<Cochain>, CohError> {
    let h = cohomology_group(g, 2, Coefficients::Circle, budget)?;
    let mut out = Vec::new();
    let mut coords = vec![0i64; h.divisors.len()];
    loop {
        out.push(h.combination(&coords));
        let mut i = 0;
        loop {
            if i == coords.len() {
                return Ok(out);
            }
            coords[i] += 1;
            if coords[i] < h.divisors[i] {
                break;
            }
            coords[i] = 0;
            i += 1;
        }
    }
}

/// Class of a numerically given cocycle with unit-modulus values.
#[derive(Clone, Debug, PartialEq)]
pub struct PhaseClass {
    pub degree: usize,
    /// Divisors of `H^n(G, ℂ*) ≅ H^{n+1}(G, ℤ)`.
    pub divisors: Vec<i64>,
    pub coordinates: Vec<i64>,
    /// Real lifts in `[0, 1)` (identity-containing tuples set to 0), over `G^n`.
    pub lifts: Vec<f64>,
    /// The rounded integral coboundary of the lifts, on normalized tuples.
    pub integral: Vec<i64>,
    /// Largest distance of a coboundary entry from the nearest integer.
    pub max_residual: f64,
}

impl PhaseClass {
    pub fn is_zero(&self) -> bool {
        self.coordinates.iter().all(|&c| c == 0)
    }
}

/// Lifts phases to `[0, 1)`, takes the real coboundary, rounds it to an
/// integral cocycle and resolves it in `H^{n+1}(G, ℤ)`.
pub fn phase_class(
    g: &FiniteGroup,
    degree: usize,
    values: &[Complex64],
    tolerance: f64,
    budget: usize,
) -> Result<PhaseClass, CohError> {
    if degree == 0 {
        return Err(CohError::Degree(0));
    }
    let m = g.order();
    let n = degree;
    if values.len() != m.pow(n as u32) {
        return Err(CohError::Mismatch);
    }
    let e = g.identity();
    let mut lifts = vec![0.0; values.len()];
    for (i, v) in values.iter().enumerate() {
        let t = tuple_of(i, m, n);
        let modulus = v.norm();
        if (modulus - 1.0).abs() > tolerance {
            return Err(CohError::NotUnitModulus { tuple: t, modulus });
        }
        let x = v.arg() / (2.0 * core::f64::consts::PI);
        let x = x - x.floor();
        if t.contains(&e) {
            let dist = x.min(1.0 - x);
            if dist > tolerance {
                return Err(CohError::NumericalCocycle { tuple: t, residual: dist });
            }
            continue;
        }
        lifts[i] = if x >= 1.0 { 0.0 } else { x };
    }
    let nz = Normalized::new(g);
    let mut integral = Vec::with_capacity(nz.dim(n + 1));
    let mut max_residual: f64 = 0.0;
    let mut buf = vec![0usize; n];
    for r in 0..nz.dim(n + 1) {
        let t = nz.tuple(r, n + 1);
        let at = |s: &[usize]| lifts[index_of(s, m)];
        let mut acc = at(&t[1..]);
        for k in 0..n {
            buf[..k].copy_from_slice(&t[..k]);
            buf[k] = g.mul(t[k], t[k + 1]);
            buf[k + 1..].copy_from_slice(&t[k + 2..]);
            let v = at(&buf);
            acc += if (k + 1) % 2 == 1 { -v } else { v };
        }
        let v = at(&t[..n]);
        acc += if (n + 1) % 2 == 1 { -v } else { v };
        let rounded = acc.round();
        let res = (acc - rounded).abs();
        max_residual = max_residual.max(res);
        if res > tolerance {
            return Err(CohError::NumericalCocycle { tuple: t, residual: res });
        }
        integral.push(rounded as i64);
    }
    let d = coboundary_matrix(g, n, budget)?;
    let s = smith(&d)?;
    let mut z: Vec<i128> = integral.iter().map(|&v| v as i128).collect();
    s.apply_u(&mut z);
    let mut divisors = Vec::new();
    let mut coordinates = Vec::new();
    for &(r, _, dv) in s.pivots.iter().filter(|p| p.2 > 1) {
        divisors.push(dv);
        coordinates.push(z[r].rem_euclid(dv as i128) as i64);
    }
    Ok(PhaseClass {
        degree: n,
        divisors,
        coordinates,
        lifts,
        integral,
        max_residual,
    })
}

/// For a numerical cocycle whose class vanishes, a real `(n−1)`-cochain `ν`
/// over `G^{n−1}` with `exp(2πi·δν) = values`; `None` if the class is nonzero.
pub fn phase_trivialization(
    g: &FiniteGroup,
    pc: &PhaseClass,
    budget: usize,
) -> Result<Option<Vec<f64>>, CohError> {
    if !pc.is_zero() {
        return Ok(None);
    }
    let n = pc.degree;
    let nz = Normalized::new(g);
    let dn = coboundary_matrix(g, n, budget)?;
    let sn = smith(&dn)?;
    let z: Vec<i128> = pc.integral.iter().map(|&v| v as i128).collect();
    let y = sn.solve_int(&z).ok_or(CohError::NotCocycle(Vec::new()))?;
    // r = φ − y is an honest real cocycle; solve δx = r in least squares.
    let rows = nz.dim(n);
    let rhs: Vec<f64> = (0..rows).map(|k| pc.lifts[nz.dense_index(k, n)] - y[k] as f64).collect();
    let dl = coboundary_matrix(g, n - 1, budget)?;
    let mut a = CMat::zeros(dl.rows, dl.cols);
    for (r, row) in dl.entries.iter().enumerate() {
        for &(c, v) in row {
            a[(r, c)] = Complex64::new(v as f64, 0.0);
        }
    }
    let b: Vec<Complex64> = rhs.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    let x: Vec<f64> = least_squares(&a, &b, 1e-10).iter().map(|z| z.re).collect();
    let resid = (0..dl.rows).fold(0.0f64, |m, r| {
        let ax: f64 = dl.entries[r].iter().map(|&(c, v)| v as f64 * x[c]).sum();
        m.max((ax - rhs[r]).abs())
    });
    if resid > 1e-6 {
        return Err(CohError::NumericalCocycle { tuple: Vec::new(), residual: resid });
    }
    let mut out = vec![0.0; g.order().pow(n as u32 - 1)];
    for k in 0..dl.cols {
        out[nz.dense_index(k, n - 1)] = x[k];
    }
    Ok(Some(out))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c0() -> Cochain {
        let z2 = FiniteGroup::cyclic(2).unwrap();
        Cochain::from_fn(&z2, 3, |_| UnitRoot::new(1, 2))
    }

    fn klein() -> FiniteGroup {
        let c2 = FiniteGroup::cyclic(2).unwrap();
        FiniteGroup::product(&[c2.clone(), c2]).unwrap()
    }

    #[test]
    fn coboundary_examples() {
        let z2 = FiniteGroup::cyclic(2).unwrap();
        assert!(coboundary(&Cochain::zero(&z2, 2)).is_zero());
        let lam = Cochain::from_fn(&z2, 1, |_| UnitRoot::new(1, 2));
        let d = coboundary(&lam);
        assert_eq!(d.get(&[1, 1]), UnitRoot::ZERO);
        let dc0 = coboundary(&c0());
        assert_eq!(dc0.values().len(), 16);
        assert!(dc0.is_zero());
    }

    #[test]
    fn cyclic_small_table() {
        for n in [2usize, 3, 4, 6] {
            let g = FiniteGroup::cyclic(n).unwrap();
            for i in 1..=3 {
                let h = cohomology_group(&g, i, Coefficients::Circle, DEFAULT_BUDGET).unwrap();
                let want: Vec<i64> = if i % 2 == 1 { vec![n as i64] } else { vec![] };
                assert_eq!(h.divisors, want, "H^{i}(Z_{n})");
            }
        }
    }

    #[test]
    fn klein_schur_multiplier() {
        let h = cohomology_group(&klein(), 2, Coefficients::Circle, DEFAULT_BUDGET).unwrap();
        assert_eq!(h.divisors, vec![2]);
        for gen in &h.generators {
            assert!(coboundary(gen).is_zero());
            assert!(is_coboundary(gen, DEFAULT_BUDGET).unwrap().is_none());
        }
        let s3 = FiniteGroup::symmetric(3).unwrap();
        assert_eq!(enumerate_h2_representatives(&s3, DEFAULT_BUDGET).unwrap().len(), 1);
        assert_eq!(enumerate_h2_representatives(&klein(), DEFAULT_BUDGET).unwrap().len(), 2);
    }

    #[test]
    fn c0_is_not_a_coboundary_but_its_inflation_is() {
        assert!(is_coboundary(&c0(), DEFAULT_BUDGET).unwrap().is_none());
        let z4 = FiniteGroup::cyclic(4).unwrap();
        let z2 = FiniteGroup::cyclic(2).unwrap();
        let epi = GroupHom::new(z4, z2, vec![0, 1, 0, 1]).unwrap();
        let inf = inflate(&c0(), &epi).unwrap();
        let w = is_coboundary(&inf, DEFAULT_BUDGET).unwrap().expect("witness");
        assert_eq!(coboundary(&w), inf);
    }

    #[test]
    fn integral_and_modular() {
        let z6 = FiniteGroup::cyclic(6).unwrap();
        let h2 = cohomology_group(&z6, 2, Coefficients::Integers, DEFAULT_BUDGET).unwrap();
        assert_eq!(h2.divisors, vec![6]);
        let h1 = cohomology_group(&z6, 1, Coefficients::Integers, DEFAULT_BUDGET).unwrap();
        assert!(h1.is_trivial());
        for n in 1..=3 {
            let h = cohomology_group(&z6, n, Coefficients::Modulo(4), DEFAULT_BUDGET).unwrap();
            assert_eq!(h.order(), 2, "H^{n}(Z6; Z4)");
        }
        let hk = cohomology_group(&klein(), 1, Coefficients::Modulo(2), DEFAULT_BUDGET).unwrap();
        assert_eq!(hk.order(), 4);
    }

    #[test]
    fn phase_class_of_c0() {
        let c = c0();
        let pc = phase_class(c.group(), 3, &c.to_phases(), DEFAULT_TOLERANCE, DEFAULT_BUDGET).unwrap();
        assert_eq!(pc.divisors, vec![2]);
        assert_eq!(pc.coordinates, vec![1]);
        let z2 = FiniteGroup::cyclic(2).unwrap();
        let ones = vec![Complex64::new(1.0, 0.0); 8];
        assert!(phase_class(&z2, 3, &ones, 1e-8, DEFAULT_BUDGET).unwrap().is_zero());
    }
}
