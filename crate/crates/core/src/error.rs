use thiserror::Error;

use crate::graded_module::Grading;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("graph has no vertices")]
    EmptyGraph,
    #[error("duplicate vertex label `{0}`")]
    DuplicateLabel(String),
    #[error("edge references undeclared vertex `{0}`")]
    DanglingEdge(String),
    #[error("self-loop at vertex `{0}`")]
    SelfLoop(String),
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(String, String),
    #[error("invalid vertex label `{0}`")]
    InvalidLabel(String),

    #[error("Brieskorn parameters ({0}, {1}, {2}) must be >= 2 and pairwise coprime")]
    NotCoprime(i64, i64, i64),

    #[error("intersection form is not negative definite")]
    NotNegativeDefinite,
    #[error("intersection form is singular")]
    Singular,
    #[error("algorithm not applicable: {0}")]
    NotApplicable(String),
    #[error("vector has length {got}, graph has {expected} vertices")]
    LengthMismatch { expected: usize, got: usize },
    #[error("vertex index {0} out of range")]
    BadIndex(usize),
    #[error("vector is not characteristic")]
    NotCharacteristic,
    #[error("arithmetic overflow")]
    Overflow,

    #[error("basic box has {size} vectors, above the cap of {cap}")]
    BoxTooLarge { size: u128, cap: usize },
    #[error("full-path search visited more than {0} vectors")]
    SearchCapExceeded(usize),
    #[error("class closure left the hull (margin {0}); enlarge the margin")]
    HullExhausted(u32),
    #[error("tower not reached within {0} U-levels")]
    LevelCapExceeded(u32),

    #[error("cannot parse module: {0}")]
    ModuleParse(String),
    #[error("module has no tower")]
    NoTower,
    #[error("module has {0} towers, expected exactly one")]
    TowerCount(usize),
    #[error("no finite summand at grading {0} matches a tower bottom")]
    NoMatchingFinite(Grading),
    #[error("finite summand index {0} out of range")]
    BadSummand(usize),
    #[error("maps are not composable: {0}")]
    MapMismatch(String),

    #[error("triangle spec: {0}")]
    TriangleSpec(String),
    #[error("window [{lo}, {hi}] does not leave 2 units of slack around grading {at}")]
    WindowTooSmall { lo: Grading, hi: Grading, at: Grading },
    #[error("summand budget {0} exhausted without an inconsistency certificate")]
    BudgetExhausted(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
