use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at byte {position}: {message}")]
    Syntax { position: usize, message: String },

    #[error("line {line}: {message}")]
    KbFormat { line: usize, message: String },

    #[error("vocabulary capacity of {capacity} atoms exceeded while adding `{atom}`")]
    CapacityExceeded { atom: String, capacity: usize },

    #[error("invalid atom name `{0}`")]
    InvalidAtom(String),

    #[error("duplicate atom `{0}`")]
    DuplicateAtom(String),

    #[error("formula references atom {atom} outside a universe of {atoms} atoms")]
    VocabularyMismatch { atom: usize, atoms: usize },

    #[error("the default base is inconsistent (no tolerance stratification)")]
    InconsistentBase,

    #[error("simple support on the empty set")]
    EmptyFocal,

    #[error("epsilon must lie strictly between 0 and 1")]
    EpsilonOutOfRange,

    #[error("mass assignments over different universes")]
    UniverseMismatch,

    #[error("total conflict between mass assignments")]
    TotalConflict,

    #[error("conditioning on a set of plausibility zero")]
    DegenerateConditioning,

    #[error("invalid mass assignment: {0}")]
    InvalidMass(String),

    #[error("degree system is infeasible")]
    InfeasibleSystem,

    #[error("unknown epsilon symbol e{0}")]
    UnknownSymbol(u32),

    #[error("empty operand set in max comparison")]
    EmptyOperand,

    #[error("rule {0} has an unsatisfiable antecedent-and-consequent")]
    UnsatisfiableRule(u32),

    #[error("rule {0} cannot be strictly auto-deduced: violation-free worlds on both sides")]
    NotRepresentable(u32),

    #[error("no LCD stratification: round {round} made no progress with constraints {pending:?} active")]
    NoLcdStratification { round: usize, pending: Vec<u32> },

    #[error("LCD verification failed for rule {0}")]
    VerificationFailed(u32),

    #[error("formula has no models")]
    UnsatisfiableQuery,
}
