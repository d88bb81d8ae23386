//! Closed-form integral identities for products of two and three solutions
//! of Bessel's equation of integral order, together with the numerical
//! machinery needed to check them: a lobe-aligned Gauss-Kronrod oracle,
//! Fresnel integrals, a large-mode approximation for triple products, a
//! Fourier-Bessel expander and a persistent coefficient database.
//!
//! Every function here is pure; nothing holds mutable global state beyond
//! a lazily built, read-only table of Bessel zeros.

// NaN must fail range checks, so `!(x > 0.0)` is deliberate
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod asymptotics;
pub mod bessel;
pub mod coeff_db;
pub mod error;
pub mod fourier_bessel;
pub mod quadrature;
pub mod roots;
pub mod table1;
pub mod three_product;
pub mod two_product;
pub mod validate;

pub use bessel::{BesselZero, GeneralSolution, Order};
pub use error::{Error, Missing, Result};
pub use quadrature::{Factor, ProductIntegralSpec, QuadratureResult, Weight};
