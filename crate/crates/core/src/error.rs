use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{what} out of domain: {value}")]
    Domain { what: &'static str, value: f64 },

    #[error("order {nu} is not an integer or half-integer; high-accuracy evaluation unavailable")]
    NonSpectralOrder { nu: f64 },

    #[error("no sign change bracketing zero k={k} of J_{nu} in [{lo}, {hi}]")]
    Bracket { nu: f64, k: u64, lo: f64, hi: f64 },

    #[error("integer overflow computing {0}")]
    Overflow(&'static str),

    #[error("mu = {mu} exceeds the budget {budget} for d = {d}")]
    Budget { mu: f64, d: u32, budget: f64 },

    #[error("reordered sums disagree: {0}")]
    Inconsistent(String),

    #[error("report error: {0}")]
    Report(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(what: &'static str, value: f64) -> Error {
    Error::Domain { what, value }
}
