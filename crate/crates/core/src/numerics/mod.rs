//! Scalar numerical kernels shared by the solvers.

pub mod ode;
pub mod quadrature;
pub mod roots;
