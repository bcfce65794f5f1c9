use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("scale too small: n = {n} gives an empty index range [{lo}, {hi}]")]
    ScaleTooSmall { n: f64, lo: i64, hi: i64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("sigmoid `{name}` cannot generate a kernel: {reason}")]
    Construction { name: String, reason: String },

    #[error(
        "finite-difference stencil of order {order} at x = {x} leaves the domain [{lo}, {hi}]"
    )]
    Stencil {
        order: u32,
        x: f64,
        lo: f64,
        hi: f64,
    },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("unsupported kernel `{0}`: constants are specific to the tanh kernel")]
    UnsupportedKernel(String),

    #[error("unknown name `{0}`")]
    Lookup(String),

    #[error("evaluation of `{name}` produced a non-finite value at x = {x}")]
    Evaluation { name: String, x: f64 },

    #[error("rate fit failed: {0}")]
    Fit(String),
}
