//! The delayed network model
//!
//! ```text
//! du_i/dt = -c_i(t) u_i(t) + Σ_l Σ_j a_ijl(t) g_j(σ_j u_j(t - κ_ijl(t))) + J_i(t)
//! ```
//!
//! and the constant bounds derived from its coefficients.

use alloc::vec::Vec;
use core::fmt;

use crate::activations::{Activation, ActivationClass, ClassViolation, SampleGrid};
use crate::signals::{SignalError, TrigSignal};

/// Plain description of a network, nested `[i][j][l]` like the spec file.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkSpec {
    pub n: usize,
    pub m: usize,
    pub decay: Vec<TrigSignal>,
    pub weights: Vec<Vec<Vec<TrigSignal>>>,
    pub delays: Vec<Vec<Vec<TrigSignal>>>,
    pub inputs: Vec<TrigSignal>,
    pub gains: Vec<f64>,
    pub activations: Vec<Activation>,
}

/// Transmission delay of one pathway. An identically zero delay signal
/// describes an instantaneous coupling.
#[derive(Debug, Clone, PartialEq)]
pub enum Delay {
    Instant,
    Lagged {
        signal: TrigSignal,
        floor: f64,
        cap: f64,
    },
}

impl Delay {
    pub fn cap(&self) -> f64 {
        match self {
            Delay::Instant => 0.0,
            Delay::Lagged { cap, .. } => *cap,
        }
    }
}

/// One nonzero pathway `a_ijl`.
#[derive(Debug, Clone, PartialEq)]
pub struct Coupling {
    pub i: usize,
    pub j: usize,
    pub l: usize,
    pub weight: TrigSignal,
    pub delay: Delay,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum H1Violation {
    DecayNotPositive { i: usize, lower: f64 },
    SelfWeightNotPositive { i: usize, lower: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub enum NetworkError {
    Dimension {
        field: &'static str,
        expected: usize,
        found: usize,
    },
    NonPositiveGain {
        j: usize,
        gain: f64,
    },
    Delay {
        i: usize,
        j: usize,
        l: usize,
        source: SignalError,
    },
    Activation {
        j: usize,
        source: ClassViolation,
    },
    H1(H1Violation),
}

impl fmt::Display for NetworkError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NetworkError::Dimension {
                field,
                expected,
                found,
            } => {
                write!(
                    f,
                    "field `{field}` has {found} entries, expected {expected}"
                )
            }
            NetworkError::NonPositiveGain { j, gain } => {
                write!(f, "amplifier gain sigma[{j}] = {gain} is not positive")
            }
            NetworkError::Delay { i, j, l, source } => {
                write!(f, "kappa[{i}][{j}][{l}]: {source}")
            }
            NetworkError::Activation { j, source } => write!(f, "activation[{j}]: {source}"),
            NetworkError::H1(H1Violation::DecayNotPositive { i, lower }) => {
                write!(f, "H1 violation: inf c[{i}] = {lower} is not positive")
            }
            NetworkError::H1(H1Violation::SelfWeightNotPositive { i, lower }) => {
                write!(
                    f,
                    "H1 violation: inf sum_l a[{i}][{i}][l] = {lower} is not positive"
                )
            }
        }
    }
}

impl core::error::Error for NetworkError {}

/// Suprema and infima of the coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct DerivedBounds {
    /// `inf c_i`, the diagonal of `C`.
    pub c_inf: Vec<f64>,
    pub c_sup: Vec<f64>,
    /// `ℏ_ij = Σ_l sup |a_ijl|`, row-major N×N.
    pub h: Vec<f64>,
    /// `inf Σ_l a_iil`.
    pub selfgain_inf: Vec<f64>,
    pub j_sup: Vec<f64>,
    pub j_inf: Vec<f64>,
    pub j_abs_sup: Vec<f64>,
}

impl DerivedBounds {
    pub fn h(&self, i: usize, j: usize) -> f64 {
        let n = self.c_inf.len();
        self.h[i * n + j]
    }
}

/// A structurally valid network.
#[derive(Debug, Clone)]
pub struct Network {
    n: usize,
    m: usize,
    decay: Vec<TrigSignal>,
    weights: Vec<TrigSignal>,
    delays: Vec<Delay>,
    couplings: Vec<Coupling>,
    inputs: Vec<TrigSignal>,
    gains: Vec<f64>,
    activations: Vec<Activation>,
    kappa: f64,
    min_delay: Option<f64>,
    derived: DerivedBounds,
}

fn check_len(field: &'static str, expected: usize, found: usize) -> Result<(), NetworkError> {
    if expected != found {
        return Err(NetworkError::Dimension {
            field,
            expected,
            found,
        });
    }
    Ok(())
}

impl Network {
    /// Builds the network and checks (H1): positive decay rates, positive
    /// self-weight sums, positive delays, positive gains, and activations
    /// that satisfy their class conditions.
    pub fn new(spec: NetworkSpec) -> Result<Self, NetworkError> {
        let net = Self::unconstrained(spec)?;
        for (j, act) in net.activations.iter().enumerate() {
            act.validate(&SampleGrid::default())
                .map_err(|source| NetworkError::Activation { j, source })?;
        }
        let d = &net.derived;
        for i in 0..net.n {
            if d.c_inf[i] <= 0.0 {
                return Err(NetworkError::H1(H1Violation::DecayNotPositive {
                    i,
                    lower: d.c_inf[i],
                }));
            }
            if d.selfgain_inf[i] <= 0.0 {
                return Err(NetworkError::H1(H1Violation::SelfWeightNotPositive {
                    i,
                    lower: d.selfgain_inf[i],
                }));
            }
        }
        Ok(net)
    }

    /// Builds the network with structural checks only. Useful for test
    /// systems (negative feedback, zero decay) outside the (H1) class.
    pub fn unconstrained(spec: NetworkSpec) -> Result<Self, NetworkError> {
        let NetworkSpec {
            n,
            m,
            decay,
            weights,
            delays,
            inputs,
            gains,
            activations,
        } = spec;
        check_len("c", n, decay.len())?;
        check_len("J", n, inputs.len())?;
        check_len("sigma", n, gains.len())?;
        check_len("activations", n, activations.len())?;
        check_len("a", n, weights.len())?;
        check_len("kappa", n, delays.len())?;
        for i in 0..n {
            check_len("a[i]", n, weights[i].len())?;
            check_len("kappa[i]", n, delays[i].len())?;
            for j in 0..n {
                check_len("a[i][j]", m, weights[i][j].len())?;
                check_len("kappa[i][j]", m, delays[i][j].len())?;
            }
        }
        for (j, &gain) in gains.iter().enumerate() {
            if !(gain > 0.0) {
                return Err(NetworkError::NonPositiveGain { j, gain });
            }
        }

        let mut flat_weights = Vec::with_capacity(n * n * m);
        let mut flat_delays = Vec::with_capacity(n * n * m);
        let mut couplings = Vec::new();
        let mut kappa = 0.0f64;
        let mut min_delay: Option<f64> = None;
        for (i, (wrow, drow)) in weights.into_iter().zip(delays).enumerate() {
            for (j, (wl, dl)) in wrow.into_iter().zip(drow).enumerate() {
                for (l, (w, d)) in wl.into_iter().zip(dl).enumerate() {
                    let delay = if d.is_zero() {
                        Delay::Instant
                    } else {
                        let cap = d.validate_delay().map_err(|source| NetworkError::Delay {
                            i,
                            j,
                            l,
                            source,
                        })?;
                        Delay::Lagged {
                            floor: d.lower_bound(),
                            cap,
                            signal: d,
                        }
                    };
                    if !w.is_zero() {
                        if let Delay::Lagged { floor, cap, .. } = &delay {
                            kappa = kappa.max(*cap);
                            min_delay = Some(min_delay.map_or(*floor, |m: f64| m.min(*floor)));
                        }
                        couplings.push(Coupling {
                            i,
                            j,
                            l,
                            weight: w.clone(),
                            delay: delay.clone(),
                        });
                    }
                    flat_weights.push(w);
                    flat_delays.push(delay);
                }
            }
        }

        let derived = derive(n, m, &decay, &flat_weights, &inputs);
        Ok(Self {
            n,
            m,
            decay,
            weights: flat_weights,
            delays: flat_delays,
            couplings,
            inputs,
            gains,
            activations,
            kappa,
            min_delay,
            derived,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    #[inline]
    fn idx(&self, i: usize, j: usize, l: usize) -> usize {
        (i * self.n + j) * self.m + l
    }

    pub fn decay(&self, i: usize) -> &TrigSignal {
        &self.decay[i]
    }

    pub fn weight(&self, i: usize, j: usize, l: usize) -> &TrigSignal {
        &self.weights[self.idx(i, j, l)]
    }

    pub fn delay(&self, i: usize, j: usize, l: usize) -> &Delay {
        &self.delays[self.idx(i, j, l)]
    }

    /// `sup_t |a_ijl(t)|`
    pub fn weight_sup(&self, i: usize, j: usize, l: usize) -> f64 {
        self.weight(i, j, l).abs_sup()
    }

    pub fn input(&self, i: usize) -> &TrigSignal {
        &self.inputs[i]
    }

    pub fn gain(&self, j: usize) -> f64 {
        self.gains[j]
    }

    pub fn gains(&self) -> &[f64] {
        &self.gains
    }

    pub fn activation(&self, j: usize) -> &Activation {
        &self.activations[j]
    }

    pub fn activations(&self) -> &[Activation] {
        &self.activations
    }

    /// Nonzero pathways in `[i][j][l]` order.
    pub fn couplings(&self) -> &[Coupling] {
        &self.couplings
    }

    /// Global delay cap `κ` over nonzero delayed pathways (0 without delays).
    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    /// Smallest delay lower bound over nonzero delayed pathways.
    pub fn min_delay(&self) -> Option<f64> {
        self.min_delay
    }

    pub fn derived(&self) -> &DerivedBounds {
        &self.derived
    }

    /// Common class of all activations, if they agree.
    pub fn class(&self) -> Option<ActivationClass> {
        let first = self.activations.first()?.class();
        self.activations
            .iter()
            .all(|a| a.class() == first)
            .then_some(first)
    }

    /// `Σ_l Σ_{j≠i} sup|a_ijl| B_j`, the worst-case input from other neurons.
    pub fn cross_input_sup(&self, i: usize) -> f64 {
        let mut acc = 0.0;
        for j in (0..self.n).filter(|&j| j != i) {
            let b = self.activations[j].bound();
            for l in 0..self.m {
                acc += self.weight_sup(i, j, l) * b;
            }
        }
        acc
    }

    /// `Σ_l Σ_j sup|a_ijl| B_j + sup|J_i|`, the absorbing-bound numerator.
    pub fn total_input_sup(&self, i: usize) -> f64 {
        let mut acc = self.derived.j_abs_sup[i];
        for j in 0..self.n {
            let b = self.activations[j].bound();
            for l in 0..self.m {
                acc += self.weight_sup(i, j, l) * b;
            }
        }
        acc
    }
}

fn derive(
    n: usize,
    m: usize,
    decay: &[TrigSignal],
    weights: &[TrigSignal],
    inputs: &[TrigSignal],
) -> DerivedBounds {
    let (c_inf, c_sup) = decay.iter().map(TrigSignal::bounds).unzip();
    let mut h = alloc::vec![0.0; n * n];
    let mut selfgain_inf = Vec::with_capacity(n);
    for i in 0..n {
        for j in 0..n {
            let base = (i * n + j) * m;
            h[i * n + j] = weights[base..base + m]
                .iter()
                .map(TrigSignal::abs_sup)
                .sum();
        }
        let base = (i * n + i) * m;
        selfgain_inf.push(TrigSignal::sum(&weights[base..base + m]).lower_bound());
    }
    let (j_inf, j_sup) = inputs.iter().map(TrigSignal::bounds).unzip();
    let j_abs_sup = inputs.iter().map(TrigSignal::abs_sup).collect();
    DerivedBounds {
        c_inf,
        c_sup,
        h,
        selfgain_inf,
        j_sup,
        j_inf,
        j_abs_sup,
    }
}
