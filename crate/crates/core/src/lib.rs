//! Antiprimitive BCH codes `C(q, q^m + 1, delta, h)` built from finite-field
//! first principles, with exact minimum-distance search and executable
//! distance predicates for designed distance 3.

pub mod bch;
pub mod catalog;
pub mod cosets;
pub mod distance;
mod exec;
pub mod field;
pub mod numtheory;
pub mod poly;
pub mod theorems;

pub use bch::{BchCode, BchError};
pub use cosets::{all_leaders, coset, CosetError, CyclotomicCoset};
pub use distance::{
    classify_singleton, min_distance, sphere_packing_check, BoundVerdict, Distance,
    DistanceError, DistanceReport, Method, SearchConfig, SingletonClass, Witness,
};
pub use field::{FieldElement, FieldError, FiniteField, SubfieldEmbedding};
pub use poly::{minimal_polynomial, PolyError, Polynomial};
