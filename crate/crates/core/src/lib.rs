//! Numerical toolkit for the PT-symmetric ε-deformation of the
//! Korteweg–de Vries equation
//!
//! ```text
//! u_t − 6 u u_x + iε(ε−1)(iu_x)^{ε−2} u_xx² + ε(iu_x)^{ε−1} u_xxx = κ
//! ```
//!
//! The crate is organised bottom-up:
//!
//! * [`specfun`]: complex special functions (₂F₁, Appell F₁, incomplete
//!   beta, Γ, Jacobi `dn`) and the explicit branch phases.
//! * [`model`]: Hamiltonian density, equations of motion, PT reflection and
//!   Galilean boosts on periodic grids.
//! * [`charges`]: the three conserved charges, their fluxes and
//!   conservation-law residuals.
//! * [`waves`]: traveling-wave curves `x − ct` as functions of the wave
//!   amplitude `v`, realness scans and tail limits.
//! * [`evolve`]: pseudospectral Runge–Kutta time stepping.
//! * [`verify`]: the acceptance checks, shared by the test suite and the
//!   command-line front end.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::type_complexity)]

pub mod charges;
pub mod error;
pub mod evolve;
pub mod io;
pub mod model;
pub mod specfun;
mod spectral;
pub mod verify;
pub mod waves;

pub use error::{Error, Result};
