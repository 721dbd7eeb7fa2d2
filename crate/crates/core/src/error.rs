use thiserror::Error;

/// Every failure the library reports. Variants map to the error names of the public operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    CompositeP(u64),
    #[error("modulus is reducible over F_{0}")]
    ReducibleModulus(u32),
    #[error("field of size {0} exceeds the supported bound 2^16")]
    FieldTooLarge(u64),
    #[error("bad field specification: {0}")]
    BadFieldSpec(String),
    #[error("not a subfield")]
    NotASubfield,
    #[error("operands live over different fields")]
    FieldMismatch,
    #[error("operands live over different rings")]
    RingMismatch,
    #[error("division by an element indistinguishable from zero")]
    ZeroDivisor,
    #[error("valuation of the zero element")]
    ZeroElement,
    #[error("symbol argument is zero")]
    ZeroArgument,
    #[error("division by zero")]
    DivisionByZero,
    #[error("precision too low: {0}")]
    PrecisionTooLow(String),
    #[error("coefficient u^{i} t^{j} lies outside the known precision")]
    CoefficientOutsidePrecision { i: i64, j: i64 },
    #[error("p-adic precision {have} is below the required {need}")]
    InsufficientPadicPrecision { have: u32, need: u32 },
    #[error("ghost vector fails the integrality congruence at index {0}")]
    NonIntegralGhost(usize),
    #[error("Frobenius needs a ring of characteristic p")]
    WrongCharacteristic,
    #[error("level {level} exceeds working precision {prec}")]
    LevelExceedsPrecision { level: i64, prec: i64 },
    #[error("pairing mode mismatch")]
    ModeMismatch,
    #[error("coefficient leaves the supported class: {0}")]
    NotReducible(String),
    #[error("factor {0} is not one of the declared curves")]
    UndeclaredCurveFactor(String),
    #[error("indices ({0}, {1}) are both divisible by p")]
    BadIndexPair(i64, i64),
    #[error("syntax error at byte {offset}: {msg}")]
    SyntaxError { offset: usize, msg: String },
    #[error("undefined symbol '{name}' at byte {offset}")]
    UndefinedSymbol { name: String, offset: usize },
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
