//! Turns a parsed scenario into validated library objects.

use std::fmt;

use equivariant_core::algcat::{self, build_cyclic_quiver_algebra, quiver_rotation, quiver_sign, Algebra, AlgebraAut};
use equivariant_core::coh::{cocycle_violation, cohomology_group, enumerate_h2_representatives, Coefficients, Cochain};
use equivariant_core::fixtures::random_action;
use equivariant_core::linalg::CMat;
use equivariant_core::sscat::{check_action, SSAction, SSCategory, ViolationKind};
use equivariant_core::{FiniteGroup, GroupHom, GroupSpec, UnitRoot};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::scenario::{
    ActionSpec, AlgebraDecl, AutSpec, Backend, CochainEntry, CochainSpec, Elem, GroupDecl, GroupKind, Scenario, SimpleRef,
    Simples, TwistSpec, C,
};

/// A scenario invariant that does not hold.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationError {
    /// Short name of the violated invariant.
    pub invariant: String,
    pub message: String,
}

impl ValidationError {
    pub fn new(invariant: &str, message: impl Into<String>) -> Self {
        ValidationError {
            invariant: invariant.into(),
            message: message.into(),
        }
    }
}

impl fmt::Display for ValidationError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invariant `{}` violated: {}", self.invariant, self.message)
    }
}

impl std::error::Error for ValidationError {}

type VResult<T> = Result<T, ValidationError>;

/// Algebra-backend data: the algebra, an automorphism per group element and
/// the crossed-product twist.
#[derive(Clone, Debug)]
pub struct AlgSetup {
    pub algebra: Algebra,
    pub sigmas: Vec<AlgebraAut>,
    pub twist: Cochain,
    /// Vertex count when the algebra is a cyclic quiver.
    pub quiver: Option<usize>,
}

/// Everything an analysis may read.
#[derive(Clone, Debug)]
pub struct Context {
    pub group: FiniteGroup,
    pub names: Option<Vec<String>>,
    pub backend: Backend,
    pub seed: u64,
    pub tolerance: Option<f64>,
    pub budget: usize,
    pub action: Option<SSAction>,
    pub alg: Option<AlgSetup>,
}

fn group_spec(kind: &GroupKind) -> GroupSpec {
    match kind {
        GroupKind::Cyclic { n } => GroupSpec::Cyclic(*n),
        GroupKind::Dihedral { n } => GroupSpec::Dihedral(*n),
        GroupKind::Symmetric { n } => GroupSpec::Symmetric(*n),
        GroupKind::Product { factors } => GroupSpec::Product(factors.iter().map(group_spec).collect()),
        GroupKind::Explicit { table } => GroupSpec::Explicit(table.clone()),
    }
}

pub fn build_group(decl: &GroupDecl) -> VResult<FiniteGroup> {
    let g = FiniteGroup::build(&group_spec(&decl.spec)).map_err(|e| ValidationError::new("group_spec", e.to_string()))?;
    if let Some(names) = &decl.names {
        if names.len() != g.order() {
            return Err(ValidationError::new(
                "element_names",
                format!("{} names given for a group of order {}", names.len(), g.order()),
            ));
        }
        let mut sorted = names.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != names.len() {
            return Err(ValidationError::new("element_names", "names are not distinct"));
        }
    }
    Ok(g)
}

fn element_in(g: &FiniteGroup, names: Option<&[String]>, e: &Elem) -> VResult<usize> {
    match e {
        Elem::Index(i) if *i < g.order() => Ok(*i),
        Elem::Index(i) => Err(ValidationError::new(
            "element_in_range",
            format!("element {i} out of range for a group of order {}", g.order()),
        )),
        Elem::Name(s) => names
            .and_then(|ns| ns.iter().position(|n| n == s))
            .ok_or_else(|| ValidationError::new("element_name", format!("no element named `{s}`"))),
    }
}

impl Context {
    pub fn element(&self, e: &Elem) -> VResult<usize> {
        element_in(&self.group, self.names.as_deref(), e)
    }

    pub fn elements(&self, es: &[Elem]) -> VResult<Vec<usize>> {
        es.iter().map(|e| self.element(e)).collect()
    }

    pub fn subgroup(&self, es: &[Elem]) -> VResult<Vec<usize>> {
        let s = self.elements(es)?;
        self.group.check_subgroup(&s).map_err(|e| ValidationError::new("subgroup", e.to_string()))
    }

    pub fn normal_subgroup(&self, es: &[Elem]) -> VResult<Vec<usize>> {
        let s = self.elements(es)?;
        self.group.check_normal(&s).map_err(|e| ValidationError::new("normal_subgroup", e.to_string()))
    }

    pub fn twist(&self, t: Option<&TwistSpec>) -> VResult<Cochain> {
        match t {
            None => Ok(Cochain::zero(&self.group, 2)),
            Some(t) => twist_cochain(&self.group, self.names.as_deref(), t, self.budget),
        }
    }

    pub fn cochain(&self, c: &CochainSpec) -> VResult<Cochain> {
        match c {
            CochainSpec::Sparse { degree, entries } => sparse_cochain(&self.group, self.names.as_deref(), *degree, entries),
            CochainSpec::Class { degree, coordinates } => {
                let h = cohomology_group(&self.group, *degree, Coefficients::Circle, self.budget)
                    .map_err(|e| ValidationError::new("cochain_class", e.to_string()))?;
                if coordinates.len() != h.divisors.len() {
                    return Err(ValidationError::new(
                        "cochain_class",
                        format!("{} coordinates for a group with {} cyclic factors", coordinates.len(), h.divisors.len()),
                    ));
                }
                Ok(h.combination(coordinates))
            }
        }
    }

    pub fn ss(&self) -> VResult<&SSAction> {
        self.action
            .as_ref()
            .ok_or_else(|| ValidationError::new("action_present", "this analysis needs an sscat action"))
    }

    pub fn algebra(&self) -> VResult<&AlgSetup> {
        self.alg
            .as_ref()
            .ok_or_else(|| ValidationError::new("action_present", "this analysis needs an algcat action"))
    }

    pub fn simple(&self, r: &SimpleRef) -> VResult<usize> {
        let a = self.ss()?;
        match r {
            SimpleRef::Index(i) if *i < a.n_simples() => Ok(*i),
            SimpleRef::Index(i) => Err(ValidationError::new(
                "simple_in_range",
                format!("simple {i} out of range for {} simples", a.n_simples()),
            )),
            SimpleRef::Label(l) => a
                .category
                .labels
                .iter()
                .position(|x| x == l)
                .ok_or_else(|| ValidationError::new("simple_label", format!("no simple labelled `{l}`"))),
        }
    }

    pub fn label(&self, g: usize) -> String {
        match &self.names {
            Some(n) => n[g].clone(),
            None => g.to_string(),
        }
    }
}

fn sparse_cochain(g: &FiniteGroup, names: Option<&[String]>, degree: usize, entries: &[CochainEntry]) -> VResult<Cochain> {
    let mut out = Vec::with_capacity(entries.len());
    for e in entries {
        if e.args.len() != degree {
            return Err(ValidationError::new(
                "cochain_entry",
                format!("entry with {} arguments in a degree {degree} cochain", e.args.len()),
            ));
        }
        let t = e.args.iter().map(|x| element_in(g, names, x)).collect::<VResult<Vec<_>>>()?;
        if t.contains(&g.identity()) && !e.value.0.is_zero() {
            return Err(ValidationError::new(
                "cochain_normalized",
                format!("nonzero value at {t:?}, which contains the identity"),
            ));
        }
        out.push((t, e.value.0));
    }
    Cochain::from_sparse(g, degree, &out).map_err(|e| ValidationError::new("cochain_entry", e.to_string()))
}

fn twist_cochain(g: &FiniteGroup, names: Option<&[String]>, t: &TwistSpec, budget: usize) -> VResult<Cochain> {
    let c = match t {
        TwistSpec::H2Class(k) => {
            let reps = enumerate_h2_representatives(g, budget).map_err(|e| ValidationError::new("h2_class", e.to_string()))?;
            reps.get(*k).cloned().ok_or_else(|| {
                ValidationError::new("h2_class", format!("class {k} requested but H² has {} elements", reps.len()))
            })?
        }
        TwistSpec::Entries(es) => sparse_cochain(g, names, 2, es)?,
    };
    if let Some(t) = cocycle_violation(&c) {
        return Err(ValidationError::new("twist_cocycle", format!("twist is not a 2-cocycle at {t:?}")));
    }
    Ok(c)
}

fn category(s: &Simples) -> VResult<SSCategory> {
    match s {
        Simples::Count(n) => Ok(SSCategory::numbered(*n)),
        Simples::Labels(l) => SSCategory::new(l.clone()).map_err(|e| ValidationError::new("simple_labels", e.to_string())),
    }
}

fn violation_message(kind: ViolationKind, g: &str, h: &str, k: &str, s: usize) -> (&'static str, String) {
    match kind {
        ViolationKind::NotPermutation => ("permutation", format!("π_{g} is not a permutation")),
        ViolationKind::NotHomomorphism => (
            "homomorphism",
            format!("π_{g}·π_{h} ≠ π_({g}·{h}) at simple {s}"),
        ),
        ViolationKind::NotNormalized => ("theta_normalized", format!("θ is not normalized at (g, h, s) = ({g}, {h}, {s})")),
        ViolationKind::NotCoherent => (
            "theta_coherent",
            format!("θ violates coherence at (g, h, s) = ({g}, {h}, {s}) with k = {k}"),
        ),
    }
}

fn sscat_action(ctx: &Context, spec: &ActionSpec) -> VResult<Option<SSAction>> {
    let g = &ctx.group;
    let a = match spec {
        ActionSpec::Trivial { simples } => SSAction::trivial(g, category(simples)?),
        ActionSpec::Permutation {
            simples,
            generators,
            twist,
            theta,
        } => {
            let cat = category(simples)?;
            let n = cat.len();
            let mut a = if generators.is_empty() {
                SSAction::trivial(g, cat)
            } else {
                let gens = generators
                    .iter()
                    .map(|gp| Ok((ctx.element(&gp.element)?, gp.perm.clone())))
                    .collect::<VResult<Vec<_>>>()?;
                SSAction::from_generators(g, cat, &gens).map_err(|e| ValidationError::new("generators_extend", e.to_string()))?
            };
            if let Some(t) = twist {
                a = a.with_constant_twist(&ctx.twist(Some(t))?);
            }
            for e in theta {
                let x = ctx.element(&e.g)?;
                let y = ctx.element(&e.h)?;
                let s = match &e.s {
                    SimpleRef::Index(i) => *i,
                    SimpleRef::Label(l) => a.category.labels.iter().position(|z| z == l).unwrap_or(usize::MAX),
                };
                if s >= n {
                    return Err(ValidationError::new(
                        "theta_entry",
                        format!("θ entry at (g, h, s) = ({}, {}, {:?}) names a missing simple", ctx.label(x), ctx.label(y), e.s),
                    ));
                }
                let v = a.theta(x, y, s) + e.value.0;
                a.set_theta(x, y, s, v);
            }
            a
        }
        ActionSpec::Random { max_orbits } => {
            let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
            random_action(g, *max_orbits, &mut rng).map_err(|e| ValidationError::new("random_action", e.to_string()))?
        }
        _ => return Ok(None),
    };
    let report = check_action(&a);
    if let Some(v) = report.violation {
        let (inv, msg) = violation_message(v.kind, &ctx.label(v.g), &ctx.label(v.h), &ctx.label(v.k), v.s);
        return Err(ValidationError::new(inv, msg));
    }
    Ok(Some(a))
}

fn complex(c: &C) -> Complex64 {
    Complex64::new(c[0], c[1])
}

fn algebra(decl: &AlgebraDecl, tol: f64) -> VResult<(Algebra, Option<usize>)> {
    let err = |e: equivariant_core::AlgError| ValidationError::new("algebra", e.to_string());
    Ok(match decl {
        AlgebraDecl::CyclicQuiver { n } => (build_cyclic_quiver_algebra(*n).map_err(err)?, Some(*n)),
        AlgebraDecl::Matrix { n } => {
            if *n == 0 {
                return Err(ValidationError::new("algebra", "matrix algebra of size 0"));
            }
            (Algebra::matrix_algebra(*n), None)
        }
        AlgebraDecl::Scalars => (Algebra::scalars(), None),
        AlgebraDecl::Explicit { dim, constants, unit } => {
            let entries: Vec<_> = constants.iter().map(|&(i, j, k, re, im)| (i, j, k, Complex64::new(re, im))).collect();
            let unit = unit.iter().map(complex).collect();
            (Algebra::from_sparse(*dim, &entries, unit, tol).map_err(err)?, None)
        }
    })
}

fn automorphism(alg: &Algebra, quiver: Option<usize>, spec: &AutSpec, tol: f64) -> VResult<AlgebraAut> {
    let err = |e: equivariant_core::AlgError| ValidationError::new("automorphism", e.to_string());
    let need_quiver = || quiver.ok_or_else(|| ValidationError::new("automorphism", "rotation and sign need the cyclic quiver"));
    match spec {
        AutSpec::Identity => Ok(AlgebraAut::identity(alg.dim())),
        AutSpec::Rotation(k) => Ok(quiver_rotation(need_quiver()?, *k)),
        AutSpec::Sign => AlgebraAut::inner(alg, &quiver_sign(need_quiver()?)).map_err(err),
        AutSpec::Inner(u) => {
            if u.len() != alg.dim() {
                return Err(ValidationError::new("automorphism", format!("unit has {} coordinates, expected {}", u.len(), alg.dim())));
            }
            AlgebraAut::inner(alg, &u.iter().map(complex).collect::<Vec<_>>()).map_err(err)
        }
        AutSpec::Matrix(rows) => {
            let d = alg.dim();
            if rows.len() != d || rows.iter().any(|r| r.len() != d) {
                return Err(ValidationError::new("automorphism", format!("matrix must be {d}×{d}")));
            }
            AlgebraAut::new(alg, CMat::from_fn(d, d, |i, j| complex(&rows[i][j])), tol).map_err(err)
        }
        AutSpec::Compose(parts) => parts.iter().try_fold(AlgebraAut::identity(alg.dim()), |acc, p| {
            Ok(acc.compose(&automorphism(alg, quiver, p, tol)?))
        }),
    }
}

fn algcat_setup(ctx: &Context, spec: &ActionSpec) -> VResult<Option<AlgSetup>> {
    let ActionSpec::Outer {
        algebra: decl,
        generators,
        twist,
    } = spec
    else {
        return Ok(None);
    };
    let tol = ctx.tolerance.unwrap_or(algcat::DEFAULT_TOLERANCE);
    let (alg, quiver) = algebra(decl, tol)?;
    let g = &ctx.group;
    let m = g.order();
    let mut sigmas: Vec<Option<AlgebraAut>> = vec![None; m];
    let mut gens = Vec::new();
    for ga in generators {
        let x = ctx.element(&ga.element)?;
        let s = automorphism(&alg, quiver, &ga.aut, tol)?;
        if sigmas[x].is_some() {
            return Err(ValidationError::new("generators_distinct", format!("element {} listed twice", ctx.label(x))));
        }
        sigmas[x] = Some(s.clone());
        gens.push((x, s));
    }
    if gens.is_empty() {
        sigmas.iter_mut().for_each(|s| *s = Some(AlgebraAut::identity(alg.dim())));
    }
    let e = g.identity();
    if sigmas[e].is_none() {
        sigmas[e] = Some(AlgebraAut::identity(alg.dim()));
    }
    // σ_{xs} = σ_x ∘ σ_s along a breadth-first word order.
    let mut queue = std::collections::VecDeque::from([e]);
    let mut seen = vec![false; m];
    seen[e] = true;
    while let Some(x) = queue.pop_front() {
        for (s, ss) in &gens {
            let y = g.mul(x, *s);
            if sigmas[y].is_none() {
                sigmas[y] = Some(sigmas[x].as_ref().unwrap().compose(ss));
            }
            if !seen[y] {
                seen[y] = true;
                queue.push_back(y);
            }
        }
    }
    let sigmas: Option<Vec<AlgebraAut>> = sigmas.into_iter().collect();
    let sigmas = sigmas.ok_or_else(|| ValidationError::new("generators_generate", "the listed elements do not generate the group"))?;
    Ok(Some(AlgSetup {
        algebra: alg,
        sigmas,
        twist: ctx.twist(twist.as_ref())?,
        quiver,
    }))
}

/// Builds the context; fails on the first violated invariant.
pub fn resolve(s: &Scenario, seed: u64, tolerance: Option<f64>, budget: usize) -> VResult<Context> {
    if let Some(t) = tolerance {
        if !(t.is_finite() && t > 0.0) {
            return Err(ValidationError::new("tolerance_positive", format!("tolerance {t} is not positive")));
        }
    }
    let group = build_group(&s.group)?;
    let mut ctx = Context {
        group,
        names: s.group.names.clone(),
        backend: s.backend,
        seed,
        tolerance,
        budget,
        action: None,
        alg: None,
    };
    let wants = match s.action {
        ActionSpec::None => None,
        ActionSpec::Outer { .. } => Some(Backend::Algcat),
        _ => Some(Backend::Sscat),
    };
    if let Some(b) = wants {
        if b != s.backend {
            return Err(ValidationError::new(
                "backend_matches_action",
                format!("action kind belongs to the {b:?} backend, scenario declares {:?}", s.backend),
            ));
        }
    }
    ctx.action = sscat_action(&ctx, &s.action)?;
    ctx.alg = algcat_setup(&ctx, &s.action)?;
    Ok(ctx)
}

/// A surjection `source ↠ G` given by images.
pub fn epimorphism(ctx: &Context, source: &GroupDecl, images: &[Elem]) -> VResult<GroupHom> {
    let src = build_group(source)?;
    let imgs = ctx.elements(images)?;
    let hom = GroupHom::new(src, ctx.group.clone(), imgs).map_err(|e| ValidationError::new("homomorphism", e.to_string()))?;
    hom.check_surjective().map_err(|e| ValidationError::new("surjective", e.to_string()))?;
    Ok(hom)
}

/// Sparse entries of a cochain as `[[args], "p/q"]`.
pub fn cochain_entries(c: &Cochain) -> Vec<(Vec<usize>, String)> {
    c.sparse().into_iter().map(|(t, v): (Vec<usize>, UnitRoot)| (t, v.to_string())).collect()
}
