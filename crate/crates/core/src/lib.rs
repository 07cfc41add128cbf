//! Full-separability analysis for tripartite quantum states.
//!
//! Pure states of arbitrary local dimensions are decided exactly by the
//! tensor-grid concurrence [`purecrit::grid_concurrence`], which vanishes
//! iff the state is a product `|a⟩⊗|b⟩⊗|c⟩`. Mixed states get computable
//! lower bounds: an optimized bound over the symmetric T-matrices
//! ([`mixedcrit::lower_bound_direct`]), the same bound restricted to a
//! nearest-Kronecker-product factorization of the doubled-space operator
//! ([`mixedcrit::lower_bound_kronecker`], [`mixedcrit::analytic_bound`]),
//! and the quasi-pure analytic estimate ([`quasipure`]).

pub mod cli;
pub mod error;
pub mod io;
pub mod linalg;
pub mod mixedcrit;
pub mod operators;
pub mod purecrit;
pub mod quasipure;
pub mod report;
pub mod states;

pub use error::{Error, Result};
pub use nalgebra::Complex;

/// Complex double.
pub type C64 = Complex<f64>;
/// Dense complex matrix.
pub type CMatrix = nalgebra::DMatrix<C64>;
