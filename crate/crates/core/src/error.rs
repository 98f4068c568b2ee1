use thiserror::Error;

/// Errors produced by the operations in this crate.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("delta must be a positive integer")]
    BadForm,

    #[error("vector is not a root: q = {0}, expected -1")]
    NotARoot(String),

    #[error("matrix has non-positive determinant")]
    DetNotPositive,

    #[error("matrix is not elliptic: tr^2 >= 4 det")]
    NotElliptic,

    #[error("point is not in the upper half-plane: y^2 <= 0")]
    NotInUpperHalfPlane,

    #[error("vector has q >= 0 and corresponds to no point of the upper half-plane")]
    NotNegative,

    #[error("matrix does not preserve the Mukai pairing or has |det| != 1")]
    NotAnIsometry,

    #[error("isometry is not induced by any Moebius transformation over the rationals")]
    NotInImage,

    #[error("c = 0: the transformation fixes infinity and has no isometric circle")]
    NoCircle,

    #[error("matrix is not an Atkin-Lehner element of level {0}")]
    NotAtkinLehner(u64),

    #[error("invalid word: {0}")]
    BadWord(String),

    #[error("invalid homomorphism: {0}")]
    BadHom(String),

    #[error("section is not a transversal: {0}")]
    BadSection(String),

    #[error("generator {0} does not have the declared order")]
    OrderMismatch(usize),

    #[error("braid on {braid} strands applied to a tuple of length {tuple}")]
    LengthMismatch { braid: usize, tuple: usize },

    #[error("invalid render window: need x_min < x_max and y_max > 0")]
    BadWindow,

    #[error("catalog schema error: {0}")]
    Schema(String),

    #[error("catalog invariant violated in entry {entry}: {detail}")]
    Invariant { entry: String, detail: String },

    #[error("no catalog entry named {0}")]
    UnknownEntry(String),
}
