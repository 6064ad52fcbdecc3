//! Exact and floating-point computations with tangent-to-the-identity germs
//! of holomorphic maps of `(C^2, 0)`: infinitesimal generators, point
//! blow-ups, Camacho–Sad and residual indices, reduction of singularities
//! and certification of parabolic curves.

pub mod blowup;
pub mod cli;
pub mod coeffs;
pub mod dynamics;
pub mod germs;
pub mod indices;
pub mod jets;
pub mod parser;
pub mod poly;
pub mod resolution;
