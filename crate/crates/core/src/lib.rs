//! Multistability analysis for delayed neural networks with almost-periodic
//! coefficients: coefficient signals, activation classes, hypothesis
//! checkers, basin bounds, stability certificates, a method-of-steps DDE
//! integrator, and numerical location of the `2^N` encoded patterns.
//!
//! The crate is `no_std` and needs only `alloc`.

#![no_std]
// `!(x > 0.0)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod activations;
pub mod criteria;
pub mod dde;
pub mod fixtures;
pub mod mmatrix;
pub mod network;
pub mod patterns;
pub mod roots;
pub mod signals;

pub use activations::{Activation, ActivationClass};
pub use mmatrix::SquareMatrix;
pub use network::{Network, NetworkError, NetworkSpec};
pub use signals::{Term, TrigSignal};
