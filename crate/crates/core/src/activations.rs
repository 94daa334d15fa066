//! The two activation classes.
//!
//! * Class A: smooth bounded sigmoids with `g(0) = 0`, `g' > 0` and
//!   `x g''(x) < 0` (derivative peaks at the origin).
//! * Class B: continuous saturated activations, constant outside
//!   `[l1, l2]` and increasing inside.

use core::f64::consts::FRAC_2_PI;
use core::fmt;

/// Base shape of a class-A sigmoid. Built-in shapes are normalized to
/// `|h| ≤ 1` and `h'(0) = 1`.
#[allow(unpredictable_function_pointer_comparisons)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SigmoidShape {
    /// `tanh(x)`
    Tanh,
    /// `(2/π) atan(π x / 2)`
    Arctan,
    /// `x / sqrt(1 + x²)`
    Algebraic,
    /// User-supplied shape. `bound` and `deriv_max` are declarations that
    /// [`Activation::validate`] checks by sampling.
    Custom {
        value: fn(f64) -> f64,
        deriv: fn(f64) -> f64,
        bound: f64,
        deriv_max: f64,
    },
}

impl SigmoidShape {
    #[inline]
    fn value(&self, x: f64) -> f64 {
        match *self {
            SigmoidShape::Tanh => libm::tanh(x),
            SigmoidShape::Arctan => FRAC_2_PI * libm::atan(x / FRAC_2_PI),
            SigmoidShape::Algebraic => x / libm::sqrt(1.0 + x * x),
            SigmoidShape::Custom { value, .. } => value(x),
        }
    }

    #[inline]
    fn deriv(&self, x: f64) -> f64 {
        match *self {
            SigmoidShape::Tanh => {
                // sech² without cancellation for large |x|
                let c = libm::cosh(x);
                if c.is_finite() {
                    1.0 / (c * c)
                } else {
                    0.0
                }
            }
            SigmoidShape::Arctan => {
                let u = x / FRAC_2_PI;
                1.0 / (1.0 + u * u)
            }
            SigmoidShape::Algebraic => {
                let s = 1.0 + x * x;
                1.0 / (s * libm::sqrt(s))
            }
            SigmoidShape::Custom { deriv, .. } => deriv(x),
        }
    }

    fn bound(&self) -> f64 {
        match *self {
            SigmoidShape::Custom { bound, .. } => bound,
            _ => 1.0,
        }
    }

    fn deriv_max(&self) -> f64 {
        match *self {
            SigmoidShape::Custom { deriv_max, .. } => deriv_max,
            _ => 1.0,
        }
    }
}

/// Class-A activation `g(x) = amplitude · h(slope · x)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sigmoid {
    pub shape: SigmoidShape,
    pub amplitude: f64,
    pub slope: f64,
}

/// Class-B activation: `u1` below `l1`, `u2` above `l2`, and inside the
/// piecewise-linear interior through `(l1, u1)`, `(0, 0)`, `(l2, u2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Saturated {
    pub l1: f64,
    pub l2: f64,
    pub u1: f64,
    pub u2: f64,
}

impl Saturated {
    #[inline]
    fn left_slope(&self) -> f64 {
        self.u1 / self.l1
    }

    #[inline]
    fn right_slope(&self) -> f64 {
        self.u2 / self.l2
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ActivationClass {
    A,
    B,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Activation {
    ClassA(Sigmoid),
    ClassB(Saturated),
}

/// Which class condition failed during sampling.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Condition {
    ZeroAtOrigin,
    Bound,
    PositiveDerivative,
    Concavity,
    Breakpoints,
    SaturationLevels,
    Monotone,
    Continuity,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassViolation {
    pub x: f64,
    pub condition: Condition,
}

impl fmt::Display for ClassViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "activation class condition {:?} violated at x = {}",
            self.condition, self.x
        )
    }
}

impl core::error::Error for ClassViolation {}

/// Sampling grid for [`Activation::validate`].
#[derive(Debug, Clone, Copy)]
pub struct SampleGrid {
    pub min: f64,
    pub max: f64,
    pub points: usize,
}

impl Default for SampleGrid {
    fn default() -> Self {
        Self {
            min: -50.0,
            max: 50.0,
            points: 10_000,
        }
    }
}

impl SampleGrid {
    fn iter(&self) -> impl Iterator<Item = f64> + '_ {
        let n = self.points.max(2);
        let h = (self.max - self.min) / (n - 1) as f64;
        (0..n).map(move |k| self.min + k as f64 * h)
    }
}

impl Activation {
    pub fn tanh() -> Self {
        Activation::ClassA(Sigmoid {
            shape: SigmoidShape::Tanh,
            amplitude: 1.0,
            slope: 1.0,
        })
    }

    /// `½(|x+1| − |x−1|)`
    pub fn satlin() -> Self {
        Activation::ClassB(Saturated {
            l1: -1.0,
            l2: 1.0,
            u1: -1.0,
            u2: 1.0,
        })
    }

    pub fn class(&self) -> ActivationClass {
        match self {
            Activation::ClassA(_) => ActivationClass::A,
            Activation::ClassB(_) => ActivationClass::B,
        }
    }

    #[inline]
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            Activation::ClassA(s) => s.amplitude * s.shape.value(s.slope * x),
            Activation::ClassB(b) => {
                if x < b.l1 {
                    b.u1
                } else if x > b.l2 {
                    b.u2
                } else if x < 0.0 {
                    b.left_slope() * x
                } else {
                    b.right_slope() * x
                }
            }
        }
    }

    /// First derivative. For class B the breakpoints take the interior
    /// one-sided value, and the origin takes the right slope.
    #[inline]
    pub fn deriv(&self, x: f64) -> f64 {
        match self {
            Activation::ClassA(s) => s.amplitude * s.slope * s.shape.deriv(s.slope * x),
            Activation::ClassB(b) => {
                if x < b.l1 || x > b.l2 {
                    0.0
                } else if x < 0.0 {
                    b.left_slope()
                } else {
                    b.right_slope()
                }
            }
        }
    }

    /// `B` with `|g(x)| ≤ B` (class B: `max |u_k|`).
    pub fn bound(&self) -> f64 {
        match self {
            Activation::ClassA(s) => s.amplitude.abs() * s.shape.bound(),
            Activation::ClassB(b) => b.u1.abs().max(b.u2.abs()),
        }
    }

    /// `sup ġ` over the real line.
    pub fn deriv_sup(&self) -> f64 {
        match self {
            Activation::ClassA(s) => s.amplitude * s.slope * s.shape.deriv_max(),
            Activation::ClassB(b) => b.left_slope().max(b.right_slope()),
        }
    }

    /// `inf ġ` over the real line.
    pub fn deriv_inf(&self) -> f64 {
        0.0
    }

    /// Minimum interior slope on `[l1, l2]` (class B only).
    pub fn interior_slope_min(&self) -> Option<f64> {
        match self {
            Activation::ClassA(_) => None,
            Activation::ClassB(b) => Some(b.left_slope().min(b.right_slope())),
        }
    }

    pub fn saturated(&self) -> Option<&Saturated> {
        match self {
            Activation::ClassB(b) => Some(b),
            Activation::ClassA(_) => None,
        }
    }

    /// Samples the class conditions on `grid` and reports the first
    /// violation.
    pub fn validate(&self, grid: &SampleGrid) -> Result<(), ClassViolation> {
        let fail = |x, condition| Err(ClassViolation { x, condition });
        match self {
            Activation::ClassA(_) => {
                if self.eval(0.0).abs() > 1e-12 {
                    return fail(0.0, Condition::ZeroAtOrigin);
                }
                let bound = self.bound();
                for x in grid.iter() {
                    if self.eval(x).abs() > bound * (1.0 + 1e-12) {
                        return fail(x, Condition::Bound);
                    }
                    if !(self.deriv(x) > 0.0) {
                        // derivative may underflow far in the tails
                        if self.eval(x).abs() < bound * (1.0 - 1e-12) {
                            return fail(x, Condition::PositiveDerivative);
                        }
                    }
                    if x.abs() > 1e-9 {
                        let h = 1e-4 * x.abs().max(1.0);
                        let second = (self.deriv(x + h) - self.deriv(x - h)) / (2.0 * h);
                        // flat tails are numerically zero; only a wrong sign counts
                        let tail = self.deriv(x) < 1e-10 * self.deriv_sup();
                        if !(x * second < 0.0) && !tail {
                            return fail(x, Condition::Concavity);
                        }
                    }
                }
                Ok(())
            }
            Activation::ClassB(b) => {
                if !(b.l1 < 0.0 && 0.0 < b.l2) {
                    return fail(
                        if b.l1 >= 0.0 { b.l1 } else { b.l2 },
                        Condition::Breakpoints,
                    );
                }
                if !(b.u1 < 0.0 && 0.0 < b.u2) {
                    return fail(0.0, Condition::SaturationLevels);
                }
                // continuity at the breakpoints
                let eps = 1e-9;
                for x in [b.l1, b.l2] {
                    if (self.eval(x - eps) - self.eval(x + eps)).abs() > 1e-6 {
                        return fail(x, Condition::Continuity);
                    }
                }
                let mut prev = f64::NEG_INFINITY;
                for x in grid.iter() {
                    let v = self.eval(x);
                    if v < prev {
                        return fail(x, Condition::Monotone);
                    }
                    prev = v;
                }
                Ok(())
            }
        }
    }
}
