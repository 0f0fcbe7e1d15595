use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("duplicate {kind} name `{name}`")]
    Duplicate { kind: &'static str, name: String },

    #[error("sort `{0}` declares no labels or no directions")]
    EmptySort(String),

    #[error("unknown {kind} `{name}`")]
    Unknown { kind: &'static str, name: String },

    #[error("invalid automaton: {0}")]
    Invalid(String),

    #[error("automata are over different signatures")]
    SignatureMismatch,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("hom enumeration needs {needed} candidate maps, cap is {cap}")]
    BoundExceeded { needed: u128, cap: u128 },

    #[error("step function: {0}")]
    Step(String),

    #[error("fixpoint iteration did not stabilize after {0} steps")]
    NotStable(usize),
}
