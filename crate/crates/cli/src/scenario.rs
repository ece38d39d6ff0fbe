//! The scenario file format.
//!
//! A scenario is JSON with `//` and `/* */` comments allowed. Group elements
//! are referenced by index or, when the group declares `names`, by name.

use std::fmt;
use std::str::FromStr;

use equivariant_core::UnitRoot;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::{Map, Value};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default = "GroupDecl::trivial")]
    pub group: GroupDecl,
    pub backend: Backend,
    #[serde(default)]
    pub action: ActionSpec,
    #[serde(default)]
    pub analyses: Vec<Analysis>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Backend {
    Sscat,
    Algcat,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupDecl {
    #[serde(flatten)]
    pub spec: GroupKind,
    /// Optional element names, indexed like the elements.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub names: Option<Vec<String>>,
}

impl GroupDecl {
    pub fn trivial() -> Self {
        GroupDecl {
            spec: GroupKind::Cyclic { n: 1 },
            names: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GroupKind {
    Cyclic { n: usize },
    Dihedral { n: usize },
    Symmetric { n: usize },
    Product { factors: Vec<GroupKind> },
    /// Row-major multiplication table.
    Explicit { table: Vec<Vec<usize>> },
}

/// A group element by index or name.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Elem {
    Index(usize),
    Name(String),
}

/// A simple object by index or label.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SimpleRef {
    Index(usize),
    Label(String),
}

/// A root of unity written as `"p/q"`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Phase(pub UnitRoot);

impl Serialize for Phase {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(&self.0)
    }
}

impl<'de> Deserialize<'de> for Phase {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        UnitRoot::from_str(&s).map(Phase).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Simples as a count or a label list.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Simples {
    Count(usize),
    Labels(Vec<String>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorPerm {
    pub element: Elem,
    pub perm: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThetaEntry {
    pub g: Elem,
    pub h: Elem,
    pub s: SimpleRef,
    pub value: Phase,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CochainEntry {
    pub args: Vec<Elem>,
    pub value: Phase,
}

/// A 2-cocycle with values in ℚ/ℤ.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TwistSpec {
    /// The k-th representative of `H²(G, ℂ*)`.
    H2Class(usize),
    /// Sparse `(g, h) ↦ p/q` entries.
    Entries(Vec<CochainEntry>),
}

/// A cochain of any degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CochainSpec {
    Sparse { degree: usize, entries: Vec<CochainEntry> },
    /// A combination of the generators of `H^degree(G, ℂ*)`.
    Class { degree: usize, coordinates: Vec<i64> },
}

impl CochainSpec {
    pub fn degree(&self) -> usize {
        match self {
            CochainSpec::Sparse { degree, .. } | CochainSpec::Class { degree, .. } => *degree,
        }
    }
}

/// A complex number as `[re, im]`.
pub type C = [f64; 2];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AlgebraDecl {
    /// Path algebra of the cyclic quiver with arrows squaring to zero.
    CyclicQuiver { n: usize },
    Matrix { n: usize },
    Scalars,
    /// Sparse structure constants `e_i e_j = Σ c e_k` as `[i, j, k, re, im]`.
    Explicit { dim: usize, constants: Vec<(usize, usize, usize, f64, f64)>, unit: Vec<C> },
}

/// An automorphism of the declared algebra.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AutSpec {
    Identity,
    /// Rotation of the cyclic quiver by k vertices.
    Rotation(usize),
    /// Conjugation by the alternating vertex sign of the cyclic quiver.
    Sign,
    /// Conjugation by a unit given in coordinates.
    Inner(Vec<C>),
    /// Dense matrix in the basis of the algebra, row-major.
    Matrix(Vec<Vec<C>>),
    /// `a ∘ b ∘ …`
    Compose(Vec<AutSpec>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorAut {
    pub element: Elem,
    pub aut: AutSpec,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, Default)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ActionSpec {
    /// No action data (group-level analyses and named fixtures).
    #[default]
    None,
    /// Trivial permutations and phases on the given simples.
    Trivial { simples: Simples },
    /// Permutations on generators, extended to the whole group, and phases
    /// θ given as a constant twist plus sparse entries.
    Permutation {
        simples: Simples,
        #[serde(default)]
        generators: Vec<GeneratorPerm>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        twist: Option<TwistSpec>,
        #[serde(default)]
        theta: Vec<ThetaEntry>,
    },
    /// A seeded random coherent action with up to `max_orbits` orbits.
    Random { max_orbits: usize },
    /// Automorphisms of an algebra on generators, composed along words;
    /// an optional 2-cocycle twists the crossed product.
    Outer {
        algebra: AlgebraDecl,
        #[serde(default)]
        generators: Vec<GeneratorAut>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        twist: Option<TwistSpec>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum CoeffSpec {
    #[default]
    Circle,
    Integers,
    Modulo(u32),
}

/// An equivariant object for Hom computations.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ObjectSpec {
    /// Multiplicities of the equivariant simples.
    Simples(Vec<usize>),
    /// The linearization of an object of the base, by multiplicities.
    Linearized(Vec<usize>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum WedderburnTarget {
    #[default]
    Base,
    Crossed,
}

/// One requested analysis; each variant is one library operation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum Op {
    GroupInfo,
    ConjugacyClasses,
    DualGroup,
    Quotient { subgroup: Vec<Elem> },
    Cohomology {
        degree: usize,
        #[serde(default)]
        coefficients: CoeffSpec,
    },
    Coboundary { cochain: CochainSpec },
    IsCoboundary { cochain: CochainSpec },
    /// Pulls a cochain back along `source ↠ G`, given by the images of the
    /// elements of `source`, and tests the result for being a coboundary.
    Inflate { cochain: CochainSpec, source: GroupDecl, images: Vec<Elem> },
    PhaseClass { degree: usize, values: Vec<C> },
    H2Representatives,
    AlphaRegularClasses {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        twist: Option<TwistSpec>,
    },
    IrrepsTwisted {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        twist: Option<TwistSpec>,
    },
    CheckAction,
    EquivariantSimples,
    HomEquivariant { x: ObjectSpec, y: ObjectSpec },
    ForgetfulAndLinearize,
    IndRes { subgroup: Vec<Elem> },
    TwistByCharacter { character: usize },
    LinearizationsOfSimple { simple: SimpleRef },
    SuccessiveQuotient { normal: Vec<Elem> },
    Reversion,
    Components,
    FaithfulDecomposition,
    StableUnderlying { phases: Vec<f64> },
    SerreLiftAndPairing { trivialization: Vec<C> },
    Hochschild {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        trivialization: Option<Vec<C>>,
    },
    Center,
    TwistedCenter { element: Elem },
    IsInner { element: Elem },
    OutActionAndUnits,
    ObstructionClass {
        #[serde(default)]
        torsor: bool,
    },
    CrossedProduct,
    WedderburnBlocks {
        #[serde(default)]
        target: WedderburnTarget,
    },
    FaithfulDecompositionAbelian,
    FixtureCounterexample,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Analysis {
    #[serde(flatten)]
    pub op: Op,
    /// Expected result fields; any mismatch fails the verdict.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expect: Option<Map<String, Value>>,
}

impl Op {
    pub fn name(&self) -> String {
        match serde_json::to_value(self) {
            Ok(Value::Object(m)) => m.get("op").and_then(Value::as_str).unwrap_or("").to_string(),
            _ => String::new(),
        }
    }

    /// Which backend the operation needs, if any.
    pub fn backend(&self) -> Option<Backend> {
        use Op::*;
        match self {
            GroupInfo | ConjugacyClasses | DualGroup | Quotient { .. } | Cohomology { .. } | Coboundary { .. }
            | IsCoboundary { .. } | Inflate { .. } | PhaseClass { .. } | H2Representatives
            | AlphaRegularClasses { .. } | IrrepsTwisted { .. } | FixtureCounterexample => None,
            CheckAction
            | EquivariantSimples
            | HomEquivariant { .. }
            | ForgetfulAndLinearize
            | IndRes { .. }
            | TwistByCharacter { .. }
            | LinearizationsOfSimple { .. }
            | SuccessiveQuotient { .. }
            | Reversion
            | Components
            | FaithfulDecomposition
            | StableUnderlying { .. }
            | SerreLiftAndPairing { .. }
            | Hochschild { .. } => Some(Backend::Sscat),
            Center
            | TwistedCenter { .. }
            | IsInner { .. }
            | OutActionAndUnits
            | ObstructionClass { .. }
            | CrossedProduct
            | WedderburnBlocks { .. }
            | FaithfulDecompositionAbelian => Some(Backend::Algcat),
        }
    }
}

/// Every operation name with the library function it runs.
pub const CATALOG: &[(&str, &str)] = &[
    ("group_info", "grp::FiniteGroup::build"),
    ("conjugacy_classes", "grp::FiniteGroup::conjugacy_classes"),
    ("dual_group", "grp::FiniteGroup::dual_group"),
    ("quotient", "grp::FiniteGroup::quotient"),
    ("cohomology", "coh::cohomology_group"),
    ("coboundary", "coh::coboundary"),
    ("is_coboundary", "coh::is_coboundary"),
    ("inflate", "coh::inflate"),
    ("phase_class", "coh::phase_class"),
    ("h2_representatives", "coh::enumerate_h2_representatives"),
    ("alpha_regular_classes", "prep::alpha_regular_classes"),
    ("irreps_twisted", "prep::irreps_twisted"),
    ("check_action", "sscat::check_action"),
    ("equivariant_simples", "sscat::equivariant_simples"),
    ("hom_equivariant", "sscat::hom_equivariant"),
    ("forgetful_and_linearize", "sscat::forget / sscat::linearize"),
    ("ind_res", "sscat::induce / sscat::restrict_object"),
    ("twist_by_character", "sscat::twist_by_character"),
    ("linearizations_of_simple", "sscat::linearizations_of_simple"),
    ("successive_quotient", "sscat::successive_quotient"),
    ("reversion", "sscat::reversion_check"),
    ("components", "sscat::component_count"),
    ("faithful_decomposition", "sscat::faithful_decomposition"),
    ("stable_underlying", "sscat::stable_underlying_check"),
    ("serre_lift_and_pairing", "sscat::serre_report"),
    ("hochschild", "sscat::hochschild_report"),
    ("center", "algcat::center"),
    ("twisted_center", "algcat::twisted_center"),
    ("is_inner", "algcat::is_inner"),
    ("out_action_and_units", "algcat::out_action_and_units"),
    ("obstruction_class", "algcat::obstruction_class"),
    ("crossed_product", "algcat::crossed_product"),
    ("wedderburn_blocks", "algcat::wedderburn_blocks"),
    ("faithful_decomposition_abelian", "algcat::faithful_decomposition_abelian"),
    ("fixture_counterexample", "algcat::fixture_counterexample"),
];

/// Named scenarios shipped with the tool.
pub const FIXTURES: &[(&str, &str, &str)] = &[
    (
        "trivial_components",
        "ℤ₂ acting trivially on one simple; both component counts are 2",
        r#"{
  "group": {"kind": "cyclic", "n": 2},
  "backend": "sscat",
  "action": {"kind": "trivial", "simples": 1},
  "analyses": [{"op": "components"}]
}"#,
    ),
    (
        "klein_projective",
        "Klein four acting trivially with the nontrivial 2-cocycle; one equivariant simple",
        r#"{
  "group": {"kind": "product", "factors": [{"kind": "cyclic", "n": 2}, {"kind": "cyclic", "n": 2}]},
  "backend": "sscat",
  "action": {"kind": "permutation", "simples": 1, "twist": {"h2_class": 1}},
  "analyses": [{"op": "components"}, {"op": "equivariant_simples"}, {"op": "hochschild"}]
}"#,
    ),
    (
        "cyclic_quiver",
        "Cyclic quiver algebra on four vertices with the inner sign action of ℤ₂",
        r#"{
  "group": {"kind": "cyclic", "n": 2},
  "backend": "algcat",
  "action": {"kind": "outer", "algebra": {"kind": "cyclic_quiver", "n": 4},
             "generators": [{"element": 1, "aut": "sign"}]},
  "analyses": [{"op": "center"}, {"op": "crossed_product"}, {"op": "faithful_decomposition_abelian"}]
}"#,
    ),
    (
        "fixture_counterexample",
        "ℤ₄ rotation on the cyclic quiver crossed product: nonzero H³ obstruction and D'_ℤ₄ ≅ D'",
        r#"{
  "backend": "algcat",
  "analyses": [{"op": "fixture_counterexample"}]
}"#,
    ),
];
