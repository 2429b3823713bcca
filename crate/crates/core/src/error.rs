use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the real domain where the function is defined.
    #[error("domain error in {function}: {detail}")]
    Domain {
        function: &'static str,
        detail: String,
    },

    /// The exact result exceeds the largest finite double.
    #[error("overflow in {function} at argument {arg}")]
    Overflow { function: &'static str, arg: f64 },

    /// A parameter set violates the invariants of its type.
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    /// Series terms or partial sums left the representable range.
    #[error("series in {context} produced a non-finite value at term {term}")]
    NonFinite { context: &'static str, term: usize },

    /// An integrand returned a non-finite value where its contribution matters.
    #[error("integrand returned a non-finite value at x = {x}")]
    NonFiniteIntegrand { x: f64 },

    /// An inner series evaluation inside an integrand did not converge.
    #[error("inner series did not converge at x = {x} ({terms} terms)")]
    InnerSeries { x: f64, terms: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(function: &'static str, detail: impl Into<String>) -> Error {
    Error::Domain {
        function,
        detail: detail.into(),
    }
}
