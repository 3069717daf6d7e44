//! Exact double Hurwitz numbers of simple, monotone, strictly monotone and
//! triply mixed type, their chamber polynomials and wall-crossing formulae.
//!
//! Every quantity is an exact rational. Three independent routes are provided:
//! enumeration in the symmetric group ([`oracle`]), character sums over Young
//! diagrams ([`charactereval`]) and commutation patterns of 𝓔-operators on
//! the semi-infinite wedge ([`wedge`]).

pub mod algebra;
pub mod charactereval;
pub mod cli;
pub mod oracle;
pub mod partitions;
pub mod wallcross;
pub mod wedge;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

pub type Rational = BigRational;
pub type Poly = algebra::MultiPoly<Rational>;
pub type Series = algebra::TruncSeries<Rational>;
pub type Linear = algebra::LinearForm<Rational>;

/// Which constraint the intermediate transpositions satisfy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum HurwitzType {
    Simple,
    Monotone,
    Strict,
    Mixed,
}

impl HurwitzType {
    /// `(p, q, r)` of a pure type with `b` branch points; `None` for mixed.
    pub fn pure_split(self, b: u32) -> Option<(u32, u32, u32)> {
        match self {
            HurwitzType::Simple => Some((b, 0, 0)),
            HurwitzType::Monotone => Some((0, b, 0)),
            HurwitzType::Strict => Some((0, 0, b)),
            HurwitzType::Mixed => None,
        }
    }
}

/// Genus `g` with `b = 2g − 2 + m + n`, if it is a non-negative integer.
pub fn genus_of(b: u32, m: usize, n: usize) -> Option<u32> {
    let twice = b as i64 + 2 - m as i64 - n as i64;
    (twice >= 0 && twice % 2 == 0).then_some((twice / 2) as u32)
}

/// `b = 2g − 2 + m + n`, if non-negative.
pub fn branch_points(g: u32, m: usize, n: usize) -> Option<u32> {
    let b = 2 * g as i64 - 2 + m as i64 + n as i64;
    (b >= 0).then_some(b as u32)
}
