//! Multistability hypotheses, basin bounds and stability certificates.
//!
//! For each neuron `i` the state space splits into a negative half-line
//! region `[α_i1, β_i1]` and a positive one `[α_i2, β_i2]`. A pattern
//! `Σ ∈ {1, 2}^N` picks one side per neuron, giving `2^N` invariant
//! basins when the hypotheses below hold.

use alloc::vec::Vec;
use core::fmt;

use crate::activations::ActivationClass;
use crate::mmatrix::MatrixError;
use crate::network::Network;

mod certificates;
mod class_a;
mod class_b;
mod report;

pub use certificates::{
    h4_certificate, halanay_gamma, lyapunov_alpha_beta, mu_certificate, mu_weights,
    StabilityCertificate,
};
pub use class_a::{
    aux_f, aux_f_deriv, basin_bounds_a, check_h1a, check_h2a, check_h3a, check_h4a,
    enlarge_basins_a, inflection_points, search_h4_params, H4Params,
};
pub use class_b::{basin_bounds_b, check_h1b, check_h2b, enlarge_basins_b};
pub use report::{verify, VerifyReport};

#[derive(Debug, Clone, PartialEq)]
pub enum CriteriaError {
    /// Activation `i` is not of the class the operation needs.
    WrongClass {
        i: usize,
        expected: ActivationClass,
    },
    /// Slope ratio `sup c_i / (σ_i inf Σ_l a_iil)` outside `(inf ġ_i, sup ġ_i)`.
    H1A {
        i: usize,
        ratio: f64,
    },
    /// `k` is 1 or 2.
    H2A {
        i: usize,
        k: u8,
    },
    H1B {
        i: usize,
    },
    H2B {
        i: usize,
        k: u8,
    },
    /// `C − H G` is not a nonsingular M-matrix.
    H3A,
    Matrix(MatrixError),
    ParamInvariant {
        what: &'static str,
        value: f64,
    },
    NotContractive {
        alpha: f64,
        beta: f64,
    },
}

impl fmt::Display for CriteriaError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CriteriaError::WrongClass { i, expected } => {
                write!(f, "activation {i} is not of class {expected:?}")
            }
            CriteriaError::H1A { i, ratio } => {
                write!(
                    f,
                    "H1A fails at neuron {i}: slope ratio {ratio} outside the derivative range"
                )
            }
            CriteriaError::H2A { i, k } => write!(f, "H2A fails at neuron {i}, k = {k}"),
            CriteriaError::H1B { i } => write!(f, "H1B fails at neuron {i}"),
            CriteriaError::H2B { i, k } => write!(f, "H2B fails at neuron {i}, k = {k}"),
            CriteriaError::H3A => write!(f, "H3A fails: C - HG is not an M-matrix"),
            CriteriaError::Matrix(e) => write!(f, "{e}"),
            CriteriaError::ParamInvariant { what, value } => {
                write!(f, "H4 parameter invariant violated: {what} (got {value})")
            }
            CriteriaError::NotContractive { alpha, beta } => {
                write!(f, "not contractive: alpha = {alpha} <= beta = {beta}")
            }
        }
    }
}

impl core::error::Error for CriteriaError {}

impl From<MatrixError> for CriteriaError {
    fn from(e: MatrixError) -> Self {
        CriteriaError::Matrix(e)
    }
}

/// Basin data of one neuron.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NeuronBounds {
    /// Points where `F_i` turns (class A only).
    pub z1: Option<f64>,
    pub z2: Option<f64>,
    pub alpha1: f64,
    pub beta1: f64,
    pub alpha2: f64,
    pub beta2: f64,
    /// `max{ġ_i(σ_i β_i1), ġ_i(σ_i α_i2)}`; zero on saturated basins.
    pub slope: f64,
    /// `σ_i` times `slope`: the diagonal entry of `G`.
    pub g: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BasinBounds {
    pub class: ActivationClass,
    pub neurons: Vec<NeuronBounds>,
}

impl BasinBounds {
    pub fn n(&self) -> usize {
        self.neurons.len()
    }

    /// `[α_iς, β_iς]` for side `side ∈ {1, 2}`.
    pub fn interval(&self, i: usize, side: u8) -> (f64, f64) {
        let b = &self.neurons[i];
        if side == 1 {
            (b.alpha1, b.beta1)
        } else {
            (b.alpha2, b.beta2)
        }
    }

    /// Boundary point of the invariant half-line: `β_i1` or `α_i2`.
    pub fn anchor(&self, i: usize, side: u8) -> f64 {
        let b = &self.neurons[i];
        if side == 1 {
            b.beta1
        } else {
            b.alpha2
        }
    }

    /// Diagonal of `G`.
    pub fn g_diag(&self) -> Vec<f64> {
        self.neurons.iter().map(|b| b.g).collect()
    }

    /// `α_i1 < β_i1 < 0 < α_i2 < β_i2` for every neuron, and the turning
    /// points lie between the inner bounds when present.
    pub fn is_ordered(&self) -> bool {
        self.neurons.iter().all(|b| {
            let outer = b.alpha1 < b.beta1 && b.beta1 < 0.0 && 0.0 < b.alpha2 && b.alpha2 < b.beta2;
            let inner = match (b.z1, b.z2) {
                (Some(z1), Some(z2)) => b.beta1 < z1 && z2 < b.alpha2,
                _ => true,
            };
            outer && inner
        })
    }
}

/// A choice of side per neuron, entries in `{1, 2}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SigmaPattern(Vec<u8>);

impl SigmaPattern {
    /// `None` if an entry is not 1 or 2.
    pub fn new(entries: Vec<u8>) -> Option<Self> {
        entries
            .iter()
            .all(|&s| s == 1 || s == 2)
            .then_some(Self(entries))
    }

    /// Pattern whose side follows the sign of each component (`> 0` → 2).
    pub fn from_signs(x: &[f64]) -> Self {
        Self(x.iter().map(|&v| if v > 0.0 { 2 } else { 1 }).collect())
    }

    pub fn entries(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for SigmaPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, s) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{s}")?;
        }
        write!(f, ")")
    }
}

fn require_class(net: &Network, class: ActivationClass) -> Result<(), CriteriaError> {
    match net.activations().iter().position(|a| a.class() != class) {
        Some(i) => Err(CriteriaError::WrongClass { i, expected: class }),
        None => Ok(()),
    }
}

/// Basin bounds for whichever class the network uses.
pub fn basin_bounds(net: &Network) -> Result<BasinBounds, CriteriaError> {
    match net.class() {
        Some(ActivationClass::B) => basin_bounds_b(net),
        _ => basin_bounds_a(net),
    }
}

/// Enlarged attracting basins for whichever class the network uses.
pub fn enlarge_basins(net: &Network, bounds: &BasinBounds) -> Result<BasinBounds, CriteriaError> {
    match bounds.class {
        ActivationClass::A => enlarge_basins_a(net, bounds),
        ActivationClass::B => enlarge_basins_b(net, bounds),
    }
}
