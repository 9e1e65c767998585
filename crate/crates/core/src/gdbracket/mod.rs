//! The second Gelfand–Dickey bracket `{F, G} = Tr(∇F · J_L(∇G))`, its
//! Poisson operators, the `u₁ = 0` reduction, and checks of its behaviour
//! under products and inverses.
//!
//! Everything is generic over the product [`Rule`](crate::psido::Rule), so
//! the same code serves the quantum operators and the classical symbols.

mod bracket;
mod checks;
mod factor;
mod reduction;
mod sample;
mod shape;
mod verify;

pub use bracket::{gd_bracket, gradient_form, poisson_matrix, OneForm, PoissonMatrix};
pub use checks::{check_adler_shape, check_antisymmetry, check_coherence, check_jacobi, check_trace_cyclicity};
pub use factor::{grad_under_inverse, grad_under_product, induce, window_text, Factor, Factorization};
pub use reduction::{constraint_residue, dirac_matrix, reduced_gradient, reduced_matrix, solve_first_component};
pub use sample::{Sampler, Sampling};
pub use shape::LaxShape;
pub use verify::{verify_product, verify_inverse, verify_reduced_inverse, verify_reduction};

#[cfg(test)]
mod tests;
