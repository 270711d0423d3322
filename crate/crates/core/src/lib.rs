//! Atiyah bundles on elliptic curves over finite fields and the
//! evaluation codes built from their sections.

pub mod bundle;
pub mod code;
pub mod curve;
pub mod error;
pub mod field;
pub mod funcs;
pub mod json;
pub mod linalg;
pub mod poly;
pub mod search;
pub mod series;

pub use curve::{curve_make, Curve, CurvePoint, Divisor};
pub use error::{Error, Result};
pub use field::{field_enumerate, field_make, Field, FieldElement, FieldSpec, Fq};
pub use poly::{Poly, RatFunc};

/// Resource caps shared by the library and the CLI.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub max_r: usize,
    pub max_m: i64,
    /// Bound on exhaustive enumerations (codewords, section spaces, points).
    pub enum_cap: u64,
    pub field_cap: u64,
    pub search_depth: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_r: 8,
            max_m: 16,
            enum_cap: 2_000_000,
            field_cap: field::DEFAULT_FIELD_CAP,
            search_depth: 1_000_000,
        }
    }
}
