use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("model {code} requires order `{order}`")]
    MissingOrder { code: String, order: &'static str },
    #[error("model {code} does not use order `{order}`")]
    UnexpectedOrder { code: String, order: String },
    #[error("order `{order}` = {value} is outside [0, 1]")]
    OrderOutOfRange { order: &'static str, value: f64 },
    #[error("coefficient {name} = {value} must be positive")]
    NonPositiveCoefficient { name: String, value: f64 },
    #[error("model {code} expects {expected} `{which}` coefficients, got {got}")]
    CoefficientCount { code: String, which: &'static str, expected: usize, got: usize },
    #[error("combined exponent {value} is outside (0, 2)")]
    ExponentOutOfRange { value: f64 },
    #[error("exponents {lower} and {upper} are not strictly increasing")]
    DegenerateExponents { lower: f64, upper: f64 },
    #[error("unknown model code `{0}`")]
    UnknownModel(String),
    #[error("power sum evaluated at s = 0")]
    ZeroArgument,
    #[error("s = {re} + {im}i is a zero of the denominator")]
    PoleHit { re: f64, im: f64 },
    #[error("unsupported power-sum shape: {0}")]
    UnsupportedShape(String),
    #[error("exponent gap p - q = {0} too small")]
    DegenerateGap(f64),
    #[error("derivative of the constitutive function vanishes at the pole")]
    DerivativeVanishes,
    #[error("Mittag-Leffler series did not converge for xi = {xi}, zeta = {zeta}, z = {z}")]
    Divergence { xi: f64, zeta: f64, z: f64 },
    #[error("integral representation needs xi in (0,1) and zeta < 1 + xi (xi = {xi}, zeta = {zeta})")]
    ParameterWindow { xi: f64, zeta: f64 },
    #[error("quadrature did not converge: value {value}, error estimate {err}")]
    NotConverged { value: f64, err: f64 },
    #[error("integrand is not integrable at an endpoint (local exponent {0})")]
    NotIntegrable(f64),
    #[error("principal value pole {0} lies on an integration boundary")]
    PoleOnBoundary(f64),
    #[error("Laplace transform is not finite on the Talbot contour")]
    ContourFailure,
    #[error("model {code} does not have the shape needed for {what}")]
    WrongModelShape { code: String, what: &'static str },
    #[error("history grid too coarse: {0}")]
    GridTooCoarse(String),
    #[error("invalid history: {0}")]
    InvalidHistory(String),
    #[error("invalid time grid: {0}")]
    InvalidGrid(String),
    #[error("descriptor: {0}")]
    Descriptor(String),
}

pub type Result<T> = std::result::Result<T, Error>;
