use thiserror::Error;

/// Errors raised by the geometric kernels.
///
/// Values that are legitimately absent (points at infinity, horizontal lines,
/// non-integrable conics) are modelled with `Option` or dedicated enums and
/// never show up here.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("basis vectors are linearly dependent (rank {rank} < {dim})")]
    DependentBasis { rank: usize, dim: usize },

    #[error("the empty hypersphere has no coordinates")]
    EmptyHypersphere,

    #[error("zero vector does not define a hypersphere")]
    ZeroVector,

    #[error("invalid generator: {0}")]
    InvalidGenerator(String),

    #[error("matrix is singular")]
    Singular,

    #[error("map is not a conformal transformation: residual {residual:e}")]
    NotConformal { residual: f64 },

    #[error("a stencil point maps to infinity")]
    NearInfinity,

    #[error("hypersphere coordinates are dependent (rank {rank})")]
    DependentSpheres { rank: usize },

    #[error("associated subspace is not indefinite")]
    DegenerateConic,

    #[error("centers {0} and {1} are null-separated")]
    NullSeparatedCenters(usize, usize),

    #[error("orthogonal complement is not indefinite")]
    DegenerateComplement,

    #[error("subspaces are not complementary")]
    NotComplementary,

    #[error("subspace pair contains the point at infinity on both sides and is not a conic")]
    NotAConic,

    #[error("the two sides disagree on the containing-plane class")]
    ClassMismatch,

    #[error("operation not defined for this pair class")]
    WrongCase,

    #[error("line is horizontal and has no John coordinates")]
    HorizontalLine,

    #[error("degenerate configuration: {0}")]
    DegenerateConfiguration(&'static str),

    #[error("lines {0} and {1} are not skew")]
    NotSkew(usize, usize),

    #[error("points do not determine a unique quadric")]
    RankDeficient,

    #[error("wave vector is not null")]
    NonNullWaveVector,

    #[error("quadratic solution is not trace-free for the neutral metric")]
    NotTraceFree,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
