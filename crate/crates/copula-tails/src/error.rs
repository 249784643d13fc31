use thiserror::Error;

/// Errors produced by generator construction, evaluation and classification.
#[derive(Debug, Error)]
pub enum CopulaError {
    #[error("parameter theta={theta} outside legal range {range} for family ({family})")]
    ParameterOutOfRange {
        family: u8,
        theta: f64,
        range: &'static str,
    },
    #[error("parameter alpha={alpha} outside legal range {range} for transform ({transform})")]
    AlphaOutOfRange {
        transform: u8,
        alpha: f64,
        range: &'static str,
    },
    #[error("unknown family id {0}; expected 1-23")]
    UnknownFamily(u8),
    #[error("unknown transform id {0}; expected 1-5")]
    UnknownTransform(u8),
    #[error("dimension {0} too small; need d >= 2")]
    DimensionTooSmall(usize),
    #[error("dimension {dim} exceeds cap {cap} (2^d inclusion-exclusion terms)")]
    DimensionTooLarge { dim: usize, cap: usize },
    #[error("invalid rectangle: lower bound exceeds upper bound at coordinate {0}")]
    InvalidRectangle(usize),
    #[error("argument {name}={value} outside domain {domain}")]
    DomainError {
        name: &'static str,
        value: f64,
        domain: &'static str,
    },
    #[error("indeterminate classification: {0}")]
    Indeterminate(String),
    #[error("insufficient smoothness resolution for derivative of order {order} at y={y}")]
    DerivativeResolution { order: u32, y: f64 },
    #[error("scenario requires {expected} but generator classifies as {got}")]
    WrongCase { expected: String, got: String },
    #[error("degenerate limit: (-D)^{order} phi_inv(0) = 0")]
    DegenerateLimit { order: u32 },
    #[error("kappa = -infinity: limit theorem does not apply; diagonal decays faster than any power")]
    KappaMinusInfinity,
    #[error("kappa unavailable in strict asymptotic-independence case")]
    KappaMissing,
    #[error("generator is strict (phi(0) = infinity): no zero region")]
    StrictGenerator,
    #[error("theta0 = 0: lower tail not asymptotically dependent")]
    NotAsymptoticallyDependent,
    #[error("quadrature failed to converge (depth limit)")]
    QuadratureNonConvergent,
    #[error("function not finite at any grid point")]
    NotFiniteOnGrid,
    #[error("parse error in generator spec: {0}")]
    ParseError(String),
}

pub type Result<T> = std::result::Result<T, CopulaError>;
