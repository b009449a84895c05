//! Global class-field data over ℚ and imaginary quadratic fields.

pub mod characters;
pub mod criterion;
pub mod delta;
pub mod forms;
pub mod primes;
pub mod quadratic;
pub mod rayclass;

pub use criterion::{criterion_report, criterion_scan, quadratic_splitting_criterion, CriterionRow};
pub use delta::{delta_rank, delta_rank_quadratic_p2};
pub use forms::BinaryQuadraticForm;
pub use primes::{Base, IndexedPrime, IndexedSet, PrimeIdeal};
pub use quadratic::{
    class_group, prime_class_order, principal_generator, QuadraticElement, QuadraticFieldData,
};
pub use rayclass::{ray_class_group, ray_class_group_for, RayClassResult};
