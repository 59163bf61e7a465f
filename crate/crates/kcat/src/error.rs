use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("unknown root datum `{0}`")]
    UnknownDatum(String),
    #[error("coordinates {0:?} do not describe an alcove")]
    InfeasibleCoords(Vec<i64>),
    #[error("weight {0:?} is not integral")]
    NonIntegral(Vec<i64>),
    #[error("characteristic {p} violates the GKM condition for {datum}")]
    Gkm { datum: String, p: u64 },
    #[error("unknown face type `{0}`")]
    UnknownFace(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("polynomial not divisible by the given root")]
    NotDivisible,
    #[error("degree bound exceeded: {0}")]
    BoundExceeded(String),
    #[error("basis is not triangular at {0}")]
    NonTriangularBasis(String),
    #[error("negative coefficient while decomposing at {0}")]
    NegativeCoefficient(String),
    #[error("semisimple quotient of the endomorphism algebra does not split over the coefficient field")]
    SemisimpleQuotientNotSplit,
    #[error("object is not in the expected category: {0}")]
    NotStandard(String),
}

pub type Result<T> = std::result::Result<T, Error>;
