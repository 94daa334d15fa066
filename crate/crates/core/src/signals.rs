//! Almost-periodic coefficient signals.
//!
//! Every time-varying coefficient of the network (decay rates, weights,
//! delays, inputs) is a finite trigonometric sum
//!
//! ```text
//! f(t) = offset + Σ amplitude · shape(ω t + phase)
//! ```
//!
//! which is almost periodic for any choice of frequencies. Bounds are the
//! conservative interval `offset ± Σ|amplitude|`, exact for a single term.

use alloc::vec::Vec;
use core::fmt;

/// Sine or cosine carrier of a single term.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Shape {
    Sin,
    Cos,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Term {
    pub amplitude: f64,
    pub omega: f64,
    pub phase: f64,
    pub shape: Shape,
}

impl Term {
    pub fn sin(amplitude: f64, omega: f64) -> Self {
        Self {
            amplitude,
            omega,
            phase: 0.0,
            shape: Shape::Sin,
        }
    }

    pub fn cos(amplitude: f64, omega: f64) -> Self {
        Self {
            amplitude,
            omega,
            phase: 0.0,
            shape: Shape::Cos,
        }
    }

    pub fn with_phase(mut self, phase: f64) -> Self {
        self.phase = phase;
        self
    }

    #[inline]
    fn eval(&self, t: f64) -> f64 {
        let arg = self.omega * t + self.phase;
        match self.shape {
            Shape::Sin => self.amplitude * libm::sin(arg),
            Shape::Cos => self.amplitude * libm::cos(arg),
        }
    }

    /// Antiderivative evaluated at `t` (for ω ≠ 0).
    fn primitive(&self, t: f64) -> f64 {
        let arg = self.omega * t + self.phase;
        match self.shape {
            Shape::Sin => -self.amplitude * libm::cos(arg) / self.omega,
            Shape::Cos => self.amplitude * libm::sin(arg) / self.omega,
        }
    }
}

/// A trigonometric polynomial `offset + Σ terms`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TrigSignal {
    offset: f64,
    terms: Vec<Term>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SignalError {
    /// A delay signal whose lower bound is not strictly positive.
    NonPositiveDelay { lower: f64 },
}

impl fmt::Display for SignalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SignalError::NonPositiveDelay { lower } => {
                write!(f, "delay signal has non-positive lower bound {lower}")
            }
        }
    }
}

impl core::error::Error for SignalError {}

impl TrigSignal {
    pub fn new(offset: f64, terms: Vec<Term>) -> Self {
        Self { offset, terms }
    }

    pub fn constant(offset: f64) -> Self {
        Self {
            offset,
            terms: Vec::new(),
        }
    }

    pub fn zero() -> Self {
        Self::constant(0.0)
    }

    /// `offset + amplitude · sin(ω t)`.
    pub fn sin(offset: f64, amplitude: f64, omega: f64) -> Self {
        Self::new(offset, alloc::vec![Term::sin(amplitude, omega)])
    }

    /// `offset + amplitude · cos(ω t)`.
    pub fn cos(offset: f64, amplitude: f64, omega: f64) -> Self {
        Self::new(offset, alloc::vec![Term::cos(amplitude, omega)])
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    /// True when the signal is identically zero.
    pub fn is_zero(&self) -> bool {
        self.offset == 0.0 && self.terms.iter().all(|t| t.amplitude == 0.0)
    }

    /// True when the signal has no oscillating part.
    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|t| t.amplitude == 0.0)
    }

    #[inline]
    pub fn eval(&self, t: f64) -> f64 {
        self.terms
            .iter()
            .fold(self.offset, |acc, term| acc + term.eval(t))
    }

    fn spread(&self) -> f64 {
        self.terms.iter().map(|t| t.amplitude.abs()).sum()
    }

    pub fn lower_bound(&self) -> f64 {
        self.offset - self.spread()
    }

    pub fn upper_bound(&self) -> f64 {
        self.offset + self.spread()
    }

    /// `(inf, sup)` over all real t, conservative for multi-term signals.
    pub fn bounds(&self) -> (f64, f64) {
        let s = self.spread();
        (self.offset - s, self.offset + s)
    }

    /// Upper bound of `|f(t)|`.
    pub fn abs_sup(&self) -> f64 {
        let (lo, hi) = self.bounds();
        lo.abs().max(hi.abs())
    }

    /// Checks that the signal is usable as a transmission delay and returns
    /// its cap.
    pub fn validate_delay(&self) -> Result<f64, SignalError> {
        let (lower, upper) = self.bounds();
        if lower <= 0.0 {
            return Err(SignalError::NonPositiveDelay { lower });
        }
        Ok(upper)
    }

    /// Pointwise sum. Terms are concatenated, so bounds of the result stay
    /// conservative.
    pub fn sum<'a, I>(signals: I) -> Self
    where
        I: IntoIterator<Item = &'a TrigSignal>,
    {
        let mut out = TrigSignal::zero();
        for s in signals {
            out.offset += s.offset;
            out.terms.extend_from_slice(&s.terms);
        }
        out
    }

    /// Returns the signal multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            offset: self.offset * factor,
            terms: self
                .terms
                .iter()
                .map(|t| Term {
                    amplitude: t.amplitude * factor,
                    ..*t
                })
                .collect(),
        }
    }

    /// Exact `∫_a^b f(v) dv`.
    pub fn integral(&self, a: f64, b: f64) -> f64 {
        let mut acc = self.offset * (b - a);
        for term in &self.terms {
            if term.omega == 0.0 {
                acc += term.eval(0.0) * (b - a);
            } else {
                acc += term.primitive(b) - term.primitive(a);
            }
        }
        acc
    }
}
