use thiserror::Error;

use crate::complex::ComplexPoint;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("zero vector where a nonzero vector is required")]
    ZeroVector,
    #[error("integer overflow in exact arithmetic")]
    Overflow,
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("rank mismatch: expected {expected}, got {got}")]
    RankMismatch { expected: usize, got: usize },
    #[error("invalid matrix: {0}")]
    BadMatrix(String),
    #[error("cone is not strongly convex (contains a line)")]
    NotStronglyConvex,
    #[error("cone is not simplicial")]
    NotSimplicial,
    #[error("dual cone computation capped at rank 6, cone spans rank {0}")]
    DualRankCap(usize),
    #[error("NotAFan: {0}")]
    NotAFan(String),
    #[error("invalid complex: {0}")]
    InvalidComplex(String),
    #[error("unknown cone id {0}")]
    UnknownCone(usize),
    #[error("groupoid closure exceeded {0} morphisms")]
    GroupoidBlowup(usize),
    #[error("resource cap exceeded: {0}")]
    ResourceCap(String),
    #[error("point {0:?} does not lie in its cone")]
    NotContained(Vec<i64>),
    #[error("bound must be at least 1")]
    ZeroBound,
    #[error("center {0} is not a stable vector")]
    UnstableCenter(ComplexPoint),
    #[error("ray {0} is not stable")]
    UnstableRay(ComplexPoint),
    #[error("cone {0} is not smooth")]
    NotSmooth(usize),
    #[error("support function is not well defined: {0}")]
    IllPosed(String),
    #[error("no ampleness certificate: {0}")]
    NoCertificate(String),
    #[error("coefficient on ray orbit {0} is not supported on exceptional rays")]
    UnsupportedCoefficient(usize),
    #[error("not a subdivision: {0}")]
    NotASubdivision(String),
}

impl Error {
    /// Variant name, for structured error output.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::ZeroVector => "ZeroVector",
            Error::Overflow => "Overflow",
            Error::NotSquare { .. } => "NotSquare",
            Error::RankMismatch { .. } => "RankMismatch",
            Error::BadMatrix(_) => "BadMatrix",
            Error::NotStronglyConvex => "NotStronglyConvex",
            Error::NotSimplicial => "NotSimplicial",
            Error::DualRankCap(_) => "DualRankCap",
            Error::NotAFan(_) => "NotAFan",
            Error::InvalidComplex(_) => "InvalidComplex",
            Error::UnknownCone(_) => "UnknownCone",
            Error::GroupoidBlowup(_) => "GroupoidBlowup",
            Error::ResourceCap(_) => "ResourceCap",
            Error::NotContained(_) => "NotContained",
            Error::ZeroBound => "ZeroBound",
            Error::UnstableCenter(_) => "UnstableCenter",
            Error::UnstableRay(_) => "UnstableRay",
            Error::NotSmooth(_) => "NotSmooth",
            Error::IllPosed(_) => "IllPosed",
            Error::NoCertificate(_) => "NoCertificate",
            Error::UnsupportedCoefficient(_) => "UnsupportedCoefficient",
            Error::NotASubdivision(_) => "NotASubdivision",
        }
    }

    /// Errors that come from exhausting a size or arithmetic budget rather
    /// than from bad input.
    pub fn is_resource(&self) -> bool {
        matches!(
            self,
            Error::Overflow | Error::GroupoidBlowup(_) | Error::ResourceCap(_) | Error::DualRankCap(_)
        )
    }
}
