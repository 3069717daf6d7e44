//! Exact arithmetic layer: scalars, sparse polynomials, linear forms,
//! truncated multivariate series and the special series used everywhere else.

mod linear;
mod poly;
mod scalar;
mod series;
mod special;

pub use linear::LinearForm;
pub use poly::{Exponents, MultiPoly};
pub use scalar::{binomial, factorial, format_rational, parse_rational, rat, rat_int, Scalar};
pub use series::{SeriesShape, TruncSeries};
pub use special::{
    bernoulli, falling_factorial, gen_bernoulli, rising_factorial, s_power_coeffs, s_power_series, sigma_coeffs,
    sigma_ratio_coeffs, sigma_ratio_series, sigma_series,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error("polynomial is not divisible by the given divisor")]
    NotDivisible,
    #[error("division by the zero polynomial")]
    DivisionByZero,
}
