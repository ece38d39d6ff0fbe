use alloc::string::String;
use alloc::vec::Vec;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot parse `{0}` as a fraction p/q")]
pub struct ParseRootError(pub String);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("malformed group spec: {0}")]
    Spec(String),
    #[error("table is not associative at ({0}, {1}, {2})")]
    NotAssociative(usize, usize, usize),
    #[error("table has no two-sided identity")]
    NoIdentity,
    #[error("element {0} has no inverse")]
    NotInvertible(usize),
    #[error("table entry {0} out of range")]
    OutOfRange(usize),
    #[error("subset is not a subgroup: {0}")]
    NotSubgroup(String),
    #[error("subgroup is not normal: {g}·{h}·{g}⁻¹ leaves it")]
    NotNormal { g: usize, h: usize },
    #[error("map is not a homomorphism at ({0}, {1})")]
    NotHomomorphism(usize, usize),
    #[error("homomorphism is not surjective; {0} is missed")]
    NotSurjective(usize),
    #[error("group order {0} exceeds the supported maximum")]
    TooLarge(usize),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CohError {
    #[error("coboundary matrix {rows}×{cols} with {nonzeros} nonzeros exceeds the budget of {budget}")]
    BudgetExceeded {
        rows: usize,
        cols: usize,
        nonzeros: usize,
        budget: usize,
    },
    #[error("not a cocycle: coboundary is nonzero at {0:?}")]
    NotCocycle(Vec<usize>),
    #[error("integer overflow during Smith reduction")]
    Overflow,
    #[error("unsupported degree {0}")]
    Degree(usize),
    #[error("cochains live on different groups or degrees")]
    Mismatch,
    #[error("numerical cocycle violates the identity by {residual:e} at {tuple:?}")]
    NumericalCocycle { tuple: Vec<usize>, residual: f64 },
    #[error("value at {tuple:?} has modulus {modulus}, not 1")]
    NotUnitModulus { tuple: Vec<usize>, modulus: f64 },
    #[error("coboundary entry {value} at {tuple:?} is not an integer within tolerance")]
    NonInteger { tuple: Vec<usize>, value: f64 },
    #[error(transparent)]
    Group(#[from] GroupError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RepError {
    #[error("twist is not a 2-cocycle; violation at {0:?}")]
    NotCocycle(Vec<usize>),
    #[error("eigenvalue clusters unresolved at tolerance {tolerance:e} (spectral gap {gap:e}); change the tolerance, the seed, or renormalize the cocycle")]
    Degenerate { tolerance: f64, gap: f64 },
    #[error("decomposition check failed: {0}")]
    Check(String),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CatError {
    #[error("invalid action: {0}")]
    InvalidAction(String),
    #[error("simple {0} is not fixed by the group")]
    NotInvariant(usize),
    #[error("the acting group is not abelian")]
    NotAbelian,
    #[error("objects belong to different actions")]
    Mismatch,
    #[error("phase assignment is not constant on orbits: simples {0} and {1}")]
    PhaseNotOrbitConstant(usize, usize),
    #[error("degenerate Serre trivialization at simple {0}")]
    DegenerateSerre(usize),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Coh(#[from] CohError),
    #[error(transparent)]
    Rep(#[from] RepError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AlgError {
    #[error("invalid algebra: {0}")]
    Invalid(String),
    #[error("invalid automorphism: {0}")]
    InvalidAut(String),
    #[error("center has dimension {0}, expected scalars only")]
    CenterNotScalar(usize),
    #[error("not a homomorphism to Out: no unit for the pair ({0}, {1})")]
    NotOutHomomorphism(usize, usize),
    #[error("action is not a homomorphism at ({0}, {1})")]
    NotHomomorphism(usize, usize),
    #[error("eigenvalue clusters unresolved at tolerance {tolerance:e} (spectral gap {gap:e})")]
    Cluster { tolerance: f64, gap: f64 },
    #[error("dimension {value} is not an integer within tolerance")]
    NonIntegral { value: f64 },
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("stage `{stage}` failed: {message}")]
    Stage { stage: String, message: String },
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Coh(#[from] CohError),
}
