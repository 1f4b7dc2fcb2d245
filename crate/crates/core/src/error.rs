use crate::group::Point;

/// Errors raised by the numerical routines.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dilation factor must be positive, got {0}")]
    NonPositiveDilation(f64),
    #[error("gauge overflow at ({0}, {1}, {2})")]
    GaugeOverflow(f64, f64, f64),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("invalid measure: {0}")]
    Measure(String),
    #[error("integrand not integrable: {0}")]
    Integrability(String),
    #[error("non-finite values at {} point(s), first at {:?}", .0.len(), .0.first())]
    NonFinite(Vec<Point>),
    #[error("flow left the working region at time {time} near {point:?}")]
    Escape { time: f64, point: Point },
    #[error("evaluation at the pole of the kernel")]
    Pole,
    #[error("truncation parameter l must be at least e, got {0}")]
    TruncationParameter(f64),
    #[error("dilatation budget infeasible: eps' = {eps_prime} must be below eps = {eps}")]
    BudgetInfeasible { eps_prime: f64, eps: f64 },
    #[error("map is not normalized: {0}")]
    NotNormalized(String),
    #[error("optimizer failed: {0}")]
    Optimizer(String),
}

pub type Result<T> = std::result::Result<T, Error>;
