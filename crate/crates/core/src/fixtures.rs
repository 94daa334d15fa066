//! The four reference networks: two with tanh activations, two with the
//! saturating activation `½(|x+1| − |x−1|)`. Pathway `l = 0` carries the
//! undelayed terms, `l = 1` the remaining ones.

use alloc::vec;
use alloc::vec::Vec;

use crate::activations::Activation;
use crate::network::NetworkSpec;
use crate::signals::TrigSignal;

fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

fn s(offset: f64, amp: f64, omega: f64) -> TrigSignal {
    TrigSignal::sin(offset, amp, omega)
}

fn c(offset: f64, amp: f64, omega: f64) -> TrigSignal {
    TrigSignal::cos(offset, amp, omega)
}

fn k(v: f64) -> TrigSignal {
    TrigSignal::constant(v)
}

fn zero() -> TrigSignal {
    TrigSignal::zero()
}

fn two_by_two(rows: [[[TrigSignal; 2]; 2]; 2]) -> Vec<Vec<Vec<TrigSignal>>> {
    rows.into_iter()
        .map(|row| row.into_iter().map(Vec::from).collect())
        .collect()
}

/// Almost-periodic stimuli, tanh, gains (1, 2), time-varying delays.
pub fn example1() -> NetworkSpec {
    NetworkSpec {
        n: 2,
        m: 2,
        decay: vec![c(1.2, 0.2, 2.0), s(3.0, 0.1, 3.0)],
        weights: two_by_two([
            [
                [k(3.0), s(4.0, 1.0, sqrt(2.0))],
                [s(0.0, 1.0, sqrt(7.0)), c(0.0, 1.0, sqrt(3.0))],
            ],
            [
                [c(0.0, 1.0, sqrt(3.0)), s(0.0, 1.0, sqrt(5.0))],
                [k(4.0), c(7.0, 1.0, sqrt(3.0))],
            ],
        ]),
        delays: two_by_two([
            [[zero(), zero()], [zero(), s(9.0, 1.0, 1.0)]],
            [[zero(), c(7.0, 3.0, 1.0)], [zero(), zero()]],
        ]),
        inputs: vec![c(0.0, 1.1458, sqrt(5.0)), s(0.0, 4.6679, 2.0)],
        gains: vec![1.0, 2.0],
        activations: vec![Activation::tanh(); 2],
    }
}

/// Periodic stimuli, tanh, gains (1, 2), constant delay 10.
pub fn example2() -> NetworkSpec {
    NetworkSpec {
        n: 2,
        m: 2,
        decay: vec![k(1.4), k(3.1)],
        weights: two_by_two([
            [[k(2.0), k(4.0)], [k(0.1), k(0.1)]],
            [[k(0.1), k(0.1)], [k(3.0), k(7.0)]],
        ]),
        delays: two_by_two([
            [[zero(), k(10.0)], [zero(), k(10.0)]],
            [[zero(), k(10.0)], [zero(), k(10.0)]],
        ]),
        inputs: vec![s(0.0, 3.1456, 1.0), c(0.0, 6.1705, 1.0)],
        gains: vec![1.0, 2.0],
        activations: vec![Activation::tanh(); 2],
    }
}

/// Almost-periodic stimuli, saturating activation, gains (0.5, 0.25).
pub fn example3() -> NetworkSpec {
    NetworkSpec {
        n: 2,
        m: 2,
        decay: vec![c(1.5, 0.5, sqrt(7.0)), s(0.75, 0.25, 1.0)],
        weights: two_by_two([
            [
                [s(4.5, 0.5, sqrt(2.0)), s(2.5, 0.5, sqrt(2.0))],
                [s(0.0, 0.1, 1.0), c(0.0, 0.1, 1.0)],
            ],
            [
                [c(0.0, 0.2, sqrt(5.0)), s(0.0, 0.2, sqrt(7.0))],
                [c(8.0, 1.0, sqrt(3.0)), c(2.0, 1.0, sqrt(3.0))],
            ],
        ]),
        delays: uniform_lagged(10.0),
        inputs: vec![s(0.0, 0.2, 3.0), c(0.0, 0.05, 2.0)],
        gains: vec![0.5, 0.25],
        activations: vec![Activation::satlin(); 2],
    }
}

/// Periodic stimuli, saturating activation, gains (0.5, 0.25).
pub fn example4() -> NetworkSpec {
    NetworkSpec {
        n: 2,
        m: 2,
        decay: vec![c(1.5, 0.5, 1.0), s(0.8, 0.2, 1.0)],
        weights: two_by_two([
            [[k(10.0), k(3.0)], [k(0.1), k(0.1)]],
            [[k(0.2), k(0.2)], [k(9.0), k(3.0)]],
        ]),
        delays: uniform_lagged(10.0),
        inputs: vec![s(0.0, 0.2, 4.0), c(0.0, 0.05, 8.0)],
        gains: vec![0.5, 0.25],
        activations: vec![Activation::satlin(); 2],
    }
}

/// Pathway 0 undelayed, pathway 1 delayed by `lag`.
fn uniform_lagged(lag: f64) -> Vec<Vec<Vec<TrigSignal>>> {
    two_by_two([
        [[zero(), k(lag)], [zero(), k(lag)]],
        [[zero(), k(lag)], [zero(), k(lag)]],
    ])
}

/// Reference network by number (1–4).
pub fn example(id: u8) -> Option<NetworkSpec> {
    match id {
        1 => Some(example1()),
        2 => Some(example2()),
        3 => Some(example3()),
        4 => Some(example4()),
        _ => None,
    }
}

/// Single neuron with constant coefficients:
/// `x' = -c x + a g(x) + J` with tanh and no delays.
pub fn scalar_autonomous(c: f64, a: f64, input: f64) -> NetworkSpec {
    NetworkSpec {
        n: 1,
        m: 1,
        decay: vec![k(c)],
        weights: vec![vec![vec![k(a)]]],
        delays: vec![vec![vec![zero()]]],
        inputs: vec![k(input)],
        gains: vec![1.0],
        activations: vec![Activation::tanh()],
    }
}
