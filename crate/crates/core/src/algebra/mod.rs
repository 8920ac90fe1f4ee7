//! Exact arithmetic on finitely generated abelian groups and integer matrices.

mod group;
mod matrix;
mod smith;

pub use group::{factor_prime_powers, is_prime, Cyclic, FinAbGroup, PrimePower};
pub use matrix::IntMatrix;
pub use smith::{invariant_factors, smith_normal_form, SmithForm};
