//! Group actions on semisimple categories with finitely many simples.
//!
//! An action is a permutation `π_g` of the simples together with coherence
//! phases `θ_{g,h}(s)`: the isomorphism `ρ_g ρ_h ⇒ ρ_{gh}` acts on the copy of
//! `π_{gh}(s)` coming from `s` by `e(θ_{g,h}(s))`. Functors act on morphism
//! blocks by relabeling, `(ρ_g f)_t = f_{π_g⁻¹ t}`.
//!
//! Exact actions ([`SSAction`]) carry [`UnitRoot`] phases. Everything numerical
//! runs on [`PhaseAction`], whose phases are complex numbers; this lets the
//! induced actions built by successive quotients and reversion reuse the same
//! machinery.

mod analysis;
mod equivariant;
mod hochschild;
mod simples;

pub use analysis::*;
pub use equivariant::*;
pub use hochschild::*;
pub use simples::*;

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::coh::Cochain;
use crate::error::CatError;
use crate::grp::FiniteGroup;
use crate::root::UnitRoot;

/// Ordered, distinct labels of the simple objects.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SSCategory {
    pub labels: Vec<String>,
}

impl SSCategory {
    pub fn new(labels: Vec<String>) -> Result<Self, CatError> {
        let set: BTreeSet<&String> = labels.iter().collect();
        if set.len() != labels.len() {
            return Err(CatError::InvalidAction("duplicate simple labels".into()));
        }
        Ok(SSCategory { labels })
    }

    /// Simples labelled `s0, s1, …`.
    pub fn numbered(n: usize) -> Self {
        SSCategory {
            labels: (0..n).map(|i| format!("s{i}")).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }
}

/// An object, given by the multiplicity of each simple.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SSObject {
    pub multiplicities: Vec<usize>,
}

impl SSObject {
    pub fn new(multiplicities: Vec<usize>) -> Self {
        SSObject { multiplicities }
    }

    pub fn simple(n: usize, s: usize) -> Self {
        let mut m = vec![0; n];
        m[s] = 1;
        SSObject { multiplicities: m }
    }

    /// The object `ρ_g E`, whose multiplicity at `t` is that of `E` at `π_g⁻¹ t`.
    pub fn relabel(&self, perm: &[usize]) -> Self {
        let mut m = vec![0; self.multiplicities.len()];
        for (s, &k) in self.multiplicities.iter().enumerate() {
            m[perm[s]] = k;
        }
        SSObject { multiplicities: m }
    }

    pub fn total(&self) -> usize {
        self.multiplicities.iter().sum()
    }
}

/// Exact action data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SSAction {
    pub group: FiniteGroup,
    pub category: SSCategory,
    /// `perms[g][s] = π_g(s)`.
    perms: Vec<Vec<usize>>,
    /// `θ_{g,h}(s)` at `(g·|G| + h)·|S| + s`.
    theta: Vec<UnitRoot>,
}

/// What part of the action axioms failed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ViolationKind {
    NotPermutation,
    NotHomomorphism,
    NotNormalized,
    NotCoherent,
}

/// A witness `(g, h, k, s)`; unused slots are zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ActionViolation {
    pub kind: ViolationKind,
    pub g: usize,
    pub h: usize,
    pub k: usize,
    pub s: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ActionReport {
    pub valid: bool,
    pub violation: Option<ActionViolation>,
}

impl SSAction {
    /// Trivial permutations and phases.
    pub fn trivial(group: &FiniteGroup, category: SSCategory) -> Self {
        let n = category.len();
        let m = group.order();
        SSAction {
            group: group.clone(),
            category,
            perms: vec![(0..n).collect(); m],
            theta: vec![UnitRoot::ZERO; m * m * n],
        }
    }

    /// Raw constructor; validate with [`check_action`].
    pub fn from_parts(group: &FiniteGroup, category: SSCategory, perms: Vec<Vec<usize>>, theta: Vec<UnitRoot>) -> Self {
        SSAction {
            group: group.clone(),
            category,
            perms,
            theta,
        }
    }

    /// Extends permutations given on generators to all of `G`; fails if the
    /// assignment does not define a homomorphism.
    pub fn from_generators(
        group: &FiniteGroup,
        category: SSCategory,
        generators: &[(usize, Vec<usize>)],
    ) -> Result<Self, CatError> {
        let n = category.len();
        for (g, p) in generators {
            if *g >= group.order() || !is_permutation(p, n) {
                return Err(CatError::InvalidAction(format!("generator {g} carries an invalid permutation")));
            }
        }
        let id: Vec<usize> = (0..n).collect();
        let mut perms: Vec<Option<Vec<usize>>> = vec![None; group.order()];
        perms[group.identity()] = Some(id);
        let mut stack = vec![group.identity()];
        while let Some(x) = stack.pop() {
            let px = perms[x].clone().unwrap();
            for (s, ps) in generators {
                let y = group.mul(x, *s);
                // π_{xs} = π_x ∘ π_s
                let py: Vec<usize> = (0..n).map(|t| px[ps[t]]).collect();
                match &perms[y] {
                    None => {
                        perms[y] = Some(py);
                        stack.push(y);
                    }
                    Some(q) if *q != py => {
                        return Err(CatError::InvalidAction(format!(
                            "generator permutations do not extend to a homomorphism (conflict at element {y})"
                        )));
                    }
                    _ => {}
                }
            }
        }
        let perms: Option<Vec<Vec<usize>>> = perms.into_iter().collect();
        let perms = perms.ok_or_else(|| CatError::InvalidAction("generators do not generate the group".into()))?;
        let m = group.order();
        Ok(SSAction {
            group: group.clone(),
            category,
            perms,
            theta: vec![UnitRoot::ZERO; m * m * n],
        })
    }

    /// Phases `θ_{g,h}(s) = α(g,h)` for every `s`.
    pub fn with_constant_twist(mut self, alpha: &Cochain) -> Self {
        let n = self.category.len();
        let m = self.group.order();
        for g in 0..m {
            for h in 0..m {
                for s in 0..n {
                    self.theta[(g * m + h) * n + s] = alpha.get(&[g, h]);
                }
            }
        }
        self
    }

    pub fn n_simples(&self) -> usize {
        self.category.len()
    }

    pub fn perm(&self, g: usize) -> &[usize] {
        &self.perms[g]
    }

    pub fn theta(&self, g: usize, h: usize, s: usize) -> UnitRoot {
        self.theta[(g * self.group.order() + h) * self.n_simples() + s]
    }

    pub fn set_theta(&mut self, g: usize, h: usize, s: usize, v: UnitRoot) {
        let i = (g * self.group.order() + h) * self.n_simples() + s;
        self.theta[i] = v;
    }

    /// Nonzero phases as `(g, h, s, value)`.
    pub fn theta_entries(&self) -> Vec<(usize, usize, usize, UnitRoot)> {
        let m = self.group.order();
        let n = self.n_simples();
        self.theta
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(i, &v)| (i / (m * n), (i / n) % m, i % n, v))
            .collect()
    }

    /// The 2-cochain `α(g,h) = θ_{g,h}(s)` (meaningful on the stabilizer of `s`).
    pub fn theta_at(&self, s: usize) -> Cochain {
        Cochain::from_fn(&self.group, 2, |t| self.theta(t[0], t[1], s))
    }

    pub fn phases(&self) -> PhaseAction {
        PhaseAction {
            group: self.group.clone(),
            n: self.n_simples(),
            perms: self.perms.clone(),
            theta: self.theta.iter().map(|v| v.to_complex()).collect(),
        }
    }
}

fn is_permutation(p: &[usize], n: usize) -> bool {
    let mut seen = vec![false; n];
    p.len() == n
        && p.iter().all(|&x| {
            let fresh = x < n && !seen[x];
            if fresh {
                seen[x] = true;
            }
            fresh
        })
}

/// Validates an exact action: permutations, homomorphism, normalization and
/// groupoid coherence `θ_{h,k}(s) + θ_{g,hk}(s) = θ_{g,h}(π_k s) + θ_{gh,k}(s)`.
pub fn check_action(a: &SSAction) -> ActionReport {
    let g = &a.group;
    let m = g.order();
    let n = a.n_simples();
    let fail = |kind, g, h, k, s| ActionReport {
        valid: false,
        violation: Some(ActionViolation { kind, g, h, k, s }),
    };
    if a.perms.len() != m || a.theta.len() != m * m * n {
        return fail(ViolationKind::NotPermutation, 0, 0, 0, 0);
    }
    for x in 0..m {
        if !is_permutation(&a.perms[x], n) {
            return fail(ViolationKind::NotPermutation, x, 0, 0, 0);
        }
    }
    for x in 0..m {
        for y in 0..m {
            let xy = g.mul(x, y);
            for s in 0..n {
                if a.perms[xy][s] != a.perms[x][a.perms[y][s]] {
                    return fail(ViolationKind::NotHomomorphism, x, y, 0, s);
                }
            }
        }
    }
    let e = g.identity();
    if a.perms[e].iter().enumerate().any(|(i, &x)| i != x) {
        return fail(ViolationKind::NotHomomorphism, e, e, 0, 0);
    }
    for x in 0..m {
        for s in 0..n {
            if !a.theta(e, x, s).is_zero() {
                return fail(ViolationKind::NotNormalized, e, x, 0, s);
            }
            if !a.theta(x, e, s).is_zero() {
                return fail(ViolationKind::NotNormalized, x, e, 0, s);
            }
        }
    }
    for x in 0..m {
        for y in 0..m {
            for z in 0..m {
                for s in 0..n {
                    let lhs = a.theta(y, z, s) + a.theta(x, g.mul(y, z), s);
                    let rhs = a.theta(x, y, a.perms[z][s]) + a.theta(g.mul(x, y), z, s);
                    if lhs != rhs {
                        return fail(ViolationKind::NotCoherent, x, y, z, s);
                    }
                }
            }
        }
    }
    ActionReport {
        valid: true,
        violation: None,
    }
}

/// Numerical action data: phases are unit complex numbers.
#[derive(Clone, Debug)]
pub struct PhaseAction {
    pub group: FiniteGroup,
    pub n: usize,
    pub perms: Vec<Vec<usize>>,
    /// `e(θ_{g,h}(s))` at `(g·|G| + h)·n + s`.
    pub theta: Vec<Complex64>,
}

impl PhaseAction {
    pub fn theta(&self, g: usize, h: usize, s: usize) -> Complex64 {
        self.theta[(g * self.group.order() + h) * self.n + s]
    }

    pub fn pi(&self, g: usize, s: usize) -> usize {
        self.perms[g][s]
    }

    pub fn pi_inv(&self, g: usize, s: usize) -> usize {
        self.perms[self.group.inv(g)][s]
    }

    pub fn fixed_points(&self, g: usize) -> Vec<usize> {
        (0..self.n).filter(|&s| self.perms[g][s] == s).collect()
    }

    /// Orbits in order of their least element, each sorted.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for s in 0..self.n {
            if seen[s] {
                continue;
            }
            let mut orbit: Vec<usize> = self.group.elements().map(|g| self.perms[g][s]).collect();
            orbit.sort_unstable();
            orbit.dedup();
            for &t in &orbit {
                seen[t] = true;
            }
            out.push(orbit);
        }
        out
    }

    pub fn stabilizer(&self, s: usize) -> Vec<usize> {
        self.group.elements().filter(|&g| self.perms[g][s] == s).collect()
    }

    /// Largest deviation from coherence and normalization.
    pub fn defect(&self) -> f64 {
        let g = &self.group;
        let m = g.order();
        let mut worst: f64 = 0.0;
        for x in 0..m {
            for y in 0..m {
                for z in 0..m {
                    for s in 0..self.n {
                        let lhs = self.theta(y, z, s) * self.theta(x, g.mul(y, z), s);
                        let rhs = self.theta(x, y, self.perms[z][s]) * self.theta(g.mul(x, y), z, s);
                        worst = worst.max((lhs - rhs).norm());
                    }
                }
            }
        }
        let e = g.identity();
        for x in 0..m {
            for s in 0..self.n {
                worst = worst.max((self.theta(e, x, s) - 1.0).norm());
                worst = worst.max((self.theta(x, e, s) - 1.0).norm());
            }
        }
        worst
    }

    /// The action restricted to a subgroup, numbered as in
    /// [`FiniteGroup::subgroup`] (sorted elements).
    pub fn restrict(&self, subset: &[usize]) -> Result<Restriction, CatError> {
        let (sub, incl) = self.group.subgroup(subset)?;
        let elements = incl.images.clone();
        let k = sub.order();
        let mut theta = Vec::with_capacity(k * k * self.n);
        for &x in &elements {
            for &y in &elements {
                for s in 0..self.n {
                    theta.push(self.theta(x, y, s));
                }
            }
        }
        Ok(Restriction {
            action: PhaseAction {
                group: sub,
                n: self.n,
                perms: elements.iter().map(|&x| self.perms[x].clone()).collect(),
                theta,
            },
            elements,
        })
    }

    /// The action on an invariant subset of simples, renumbered in the
    /// given order.
    pub fn restrict_simples(&self, subset: &[usize]) -> Result<PhaseAction, CatError> {
        let mut pos = vec![usize::MAX; self.n];
        for (i, &s) in subset.iter().enumerate() {
            pos[s] = i;
        }
        let m = self.group.order();
        let mut perms = Vec::with_capacity(m);
        for g in 0..m {
            let mut p = Vec::with_capacity(subset.len());
            for &s in subset {
                let t = pos[self.perms[g][s]];
                if t == usize::MAX {
                    return Err(CatError::InvalidAction("subset is not invariant".into()));
                }
                p.push(t);
            }
            perms.push(p);
        }
        let mut theta = Vec::with_capacity(m * m * subset.len());
        for g in 0..m {
            for h in 0..m {
                for &s in subset {
                    theta.push(self.theta(g, h, s));
                }
            }
        }
        Ok(PhaseAction {
            group: self.group.clone(),
            n: subset.len(),
            perms,
            theta,
        })
    }
}

/// An action restricted to a subgroup `H`, with `elements[i]` the element of
/// `G` numbered `i` in `H`.
#[derive(Clone, Debug)]
pub struct Restriction {
    pub action: PhaseAction,
    pub elements: Vec<usize>,
}

/// A real phase per simple, the semisimple shadow of a stability function.
#[derive(Clone, Debug, PartialEq)]
pub struct PhaseAssignment {
    pub phases: Vec<f64>,
}

/// A trivialization of the (identity) Serre functor: a nonzero scalar per simple.
#[derive(Clone, Debug, PartialEq)]
pub struct SerreData {
    pub a: Vec<Complex64>,
}
