//! Scalar numerical building blocks shared by the models.

pub mod brent;
pub mod quad;
