//! Fractional Zener and anti-Zener viscoelastic models.
//!
//! Each model is a pair of power sums `phi_sigma`, `phi_epsilon` and an order
//! `xi` entering `phi_sigma(s) sigma~ = s^xi phi_epsilon(s) eps~`. The crate
//! checks parameter restrictions, locates zeros of the power sums, and
//! evaluates relaxation modulus, creep compliance, their asymptotics and the
//! energy balance for prescribed histories.

// `!(x > 0.0)` is used on purpose: it rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod asymptotics;
pub mod cli;
pub mod constraints;
pub mod energy;
pub mod error;
pub mod model_catalog;
pub mod mittag_leffler;
pub mod pole_finder;
pub mod quadrature;
pub mod response;

pub use error::{Error, Result};
pub use model_catalog::{build_model, FractionalOrders, ModelCode, ModelDescriptor, ModelSpec, Order, PowerSum};
