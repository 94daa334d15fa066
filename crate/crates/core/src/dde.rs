//! Fixed-step RK4 for the delayed network, method of steps.
//!
//! Every delayed argument `t − κ_ijl(t)` of an RK stage lies at or before
//! the current grid point as long as `dt` does not exceed the smallest
//! delay, so the history is always available. Between grid points the
//! history is the cubic Hermite interpolant built from stored states and
//! derivatives; before `t0` it is the initial function.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::network::{Delay, Network};
use crate::signals::TrigSignal;

/// States beyond this magnitude abort the integration.
pub const STATE_LIMIT: f64 = 1e15;

#[derive(Debug, Clone, PartialEq)]
pub enum InitialFunction {
    Constant(Vec<f64>),
    /// Samples on `[−κ, 0]` (times relative to `t0`, increasing), linearly
    /// interpolated and held constant outside the sampled range.
    Sampled {
        times: Vec<f64>,
        values: Vec<Vec<f64>>,
    },
}

impl InitialFunction {
    pub fn dim(&self) -> usize {
        match self {
            InitialFunction::Constant(v) => v.len(),
            InitialFunction::Sampled { values, .. } => values.first().map_or(0, Vec::len),
        }
    }

    /// Component `i` at relative time `s ≤ 0`.
    pub fn eval_component(&self, i: usize, s: f64) -> f64 {
        match self {
            InitialFunction::Constant(v) => v[i],
            InitialFunction::Sampled { times, values } => {
                let k = times.partition_point(|&t| t <= s);
                if k == 0 {
                    values[0][i]
                } else if k == times.len() {
                    values[k - 1][i]
                } else {
                    let (t0, t1) = (times[k - 1], times[k]);
                    let w = (s - t0) / (t1 - t0);
                    values[k - 1][i] + w * (values[k][i] - values[k - 1][i])
                }
            }
        }
    }

    pub fn eval(&self, s: f64) -> Vec<f64> {
        (0..self.dim()).map(|i| self.eval_component(i, s)).collect()
    }

    fn covers(&self, kappa: f64) -> bool {
        match self {
            InitialFunction::Constant(_) => true,
            InitialFunction::Sampled { times, values } => {
                !times.is_empty()
                    && times.len() == values.len()
                    && times.windows(2).all(|w| w[0] < w[1])
                    && times[0] <= -kappa
                    && *times.last().unwrap() >= 0.0
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DdeError {
    InvalidStep {
        dt: f64,
    },
    InvalidHorizon {
        t0: f64,
        t_end: f64,
    },
    /// `dt` exceeds the smallest delay lower bound.
    StepTooLarge {
        dt: f64,
        min_delay: f64,
    },
    NonFiniteState {
        t: f64,
        i: usize,
    },
    OutOfRange {
        t: f64,
        lo: f64,
        hi: f64,
    },
    /// Initial function has the wrong dimension or does not cover `[−κ, 0]`.
    InitialFunction {
        expected_dim: usize,
    },
}

impl fmt::Display for DdeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DdeError::InvalidStep { dt } => write!(f, "step {dt} is not positive"),
            DdeError::InvalidHorizon { t0, t_end } => {
                write!(f, "end time {t_end} is not after start {t0}")
            }
            DdeError::StepTooLarge { dt, min_delay } => {
                write!(f, "step {dt} exceeds the smallest delay {min_delay}")
            }
            DdeError::NonFiniteState { t, i } => {
                write!(f, "state component {i} diverged at t = {t}")
            }
            DdeError::OutOfRange { t, lo, hi } => {
                write!(f, "t = {t} outside stored history [{lo}, {hi}]")
            }
            DdeError::InitialFunction { expected_dim } => {
                write!(
                    f,
                    "initial function must have {expected_dim} components and cover [-kappa, 0]"
                )
            }
        }
    }
}

impl core::error::Error for DdeError {}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum HistoryMode {
    /// Keep every grid point.
    #[default]
    Full,
    /// Keep only the grid points needed for delayed lookups.
    Ring,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct IntegrateOptions {
    pub t0: f64,
    pub history: HistoryMode,
}

/// Grid solution with dense history.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    n: usize,
    t0: f64,
    dt: f64,
    kappa: f64,
    /// Grid index of the first stored point (nonzero in ring mode).
    first: usize,
    /// Grid index of the last point.
    last: usize,
    states: Vec<f64>,
    derivs: Vec<f64>,
    phi: InitialFunction,
}

impl Trajectory {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn t_end(&self) -> f64 {
        self.time(self.last)
    }

    pub fn phi(&self) -> &InitialFunction {
        &self.phi
    }

    /// `t0 + k dt`.
    pub fn time(&self, k: usize) -> f64 {
        self.t0 + k as f64 * self.dt
    }

    /// Grid indices currently stored.
    pub fn indices(&self) -> core::ops::RangeInclusive<usize> {
        self.first..=self.last
    }

    pub fn state(&self, k: usize) -> &[f64] {
        let r = (k - self.first) * self.n;
        &self.states[r..r + self.n]
    }

    pub fn deriv(&self, k: usize) -> &[f64] {
        let r = (k - self.first) * self.n;
        &self.derivs[r..r + self.n]
    }

    pub fn last_state(&self) -> &[f64] {
        self.state(self.last)
    }

    /// First grid index with time `≥ t`.
    pub fn index_at_or_after(&self, t: f64) -> usize {
        let k = libm::ceil((t - self.t0) / self.dt - 1e-9).max(0.0) as usize;
        k.clamp(self.first, self.last)
    }

    fn component_unchecked(&self, i: usize, t: f64) -> f64 {
        if t < self.t0 {
            return self.phi.eval_component(i, t - self.t0);
        }
        let x = (t - self.t0) / self.dt;
        let mut k = libm::floor(x) as usize;
        if k >= self.last {
            return self.state(self.last)[i];
        }
        k = k.max(self.first);
        let theta = x - k as f64;
        if theta == 0.0 {
            return self.state(k)[i];
        }
        let (y0, y1) = (self.state(k)[i], self.state(k + 1)[i]);
        let (f0, f1) = (self.deriv(k)[i], self.deriv(k + 1)[i]);
        let t2 = theta * theta;
        let t3 = t2 * theta;
        let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
        let h10 = t3 - 2.0 * t2 + theta;
        let h01 = -2.0 * t3 + 3.0 * t2;
        let h11 = t3 - t2;
        h00 * y0 + h10 * self.dt * f0 + h01 * y1 + h11 * self.dt * f1
    }

    /// Stored time range available to [`Trajectory::history_eval`].
    pub fn history_range(&self) -> (f64, f64) {
        let lo = if self.first == 0 {
            self.t0 - self.kappa
        } else {
            self.time(self.first)
        };
        (lo, self.t_end())
    }

    /// State at any `t` in the stored history: the initial function before
    /// `t0`, cubic Hermite between grid points, exact at grid points.
    pub fn history_eval(&self, t: f64) -> Result<Vec<f64>, DdeError> {
        let (lo, hi) = self.history_range();
        if !(t >= lo && t <= hi) {
            return Err(DdeError::OutOfRange { t, lo, hi });
        }
        Ok((0..self.n)
            .map(|i| self.component_unchecked(i, t))
            .collect())
    }

    /// Componentwise `(min, max)` over grid points in `[from, to]`.
    pub fn component_ranges(&self, from: f64, to: f64) -> Vec<(f64, f64)> {
        let mut out = vec![(f64::INFINITY, f64::NEG_INFINITY); self.n];
        let k0 = self.index_at_or_after(from);
        for k in k0..=self.last {
            if self.time(k) > to + 1e-9 * self.dt {
                break;
            }
            for (r, &x) in out.iter_mut().zip(self.state(k)) {
                r.0 = r.0.min(x);
                r.1 = r.1.max(x);
            }
        }
        out
    }

    fn push(&mut self, x: &[f64], f: &[f64]) {
        self.states.extend_from_slice(x);
        self.derivs.extend_from_slice(f);
        self.last += 1;
    }

    /// Drops grid points older than `keep` steps behind the front.
    fn trim(&mut self, keep: usize) {
        let stored = self.last + 1 - self.first;
        if stored > 2 * keep {
            let drop = stored - keep;
            self.states.drain(..drop * self.n);
            self.derivs.drain(..drop * self.n);
            self.first += drop;
        }
    }
}

struct Link<'a> {
    i: usize,
    j: usize,
    weight: &'a TrigSignal,
    delay: Option<&'a TrigSignal>,
}

/// Right-hand side of the network with delayed states read from a history.
pub struct VectorField<'a> {
    net: &'a Network,
    links: Vec<Link<'a>>,
}

impl<'a> VectorField<'a> {
    pub fn new(net: &'a Network) -> Self {
        let links = net
            .couplings()
            .iter()
            .map(|c| Link {
                i: c.i,
                j: c.j,
                weight: &c.weight,
                delay: match &c.delay {
                    Delay::Instant => None,
                    Delay::Lagged { signal, .. } => Some(signal),
                },
            })
            .collect();
        Self { net, links }
    }

    /// `out = f(t, x, history)`.
    pub fn eval(&self, t: f64, x: &[f64], traj: &Trajectory, out: &mut [f64]) {
        let net = self.net;
        for i in 0..x.len() {
            out[i] = -net.decay(i).eval(t) * x[i] + net.input(i).eval(t);
        }
        for link in &self.links {
            let y = match link.delay {
                None => x[link.j],
                Some(kappa) => traj.component_unchecked(link.j, t - kappa.eval(t)),
            };
            let act = net.activation(link.j);
            out[link.i] += link.weight.eval(t) * act.eval(net.gain(link.j) * y);
        }
    }

    /// Vector field at `t` with the stored history, for consistency checks.
    pub fn eval_with(&self, t: f64, x: &[f64], traj: &Trajectory) -> Vec<f64> {
        let mut out = vec![0.0; x.len()];
        self.eval(t, x, traj, &mut out);
        out
    }
}

pub fn integrate(
    net: &Network,
    phi: &InitialFunction,
    t_end: f64,
    dt: f64,
) -> Result<Trajectory, DdeError> {
    integrate_with(net, phi, t_end, dt, IntegrateOptions::default())
}

/// Integrates from `opts.t0` to `t_end` (absolute times).
pub fn integrate_with(
    net: &Network,
    phi: &InitialFunction,
    t_end: f64,
    dt: f64,
    opts: IntegrateOptions,
) -> Result<Trajectory, DdeError> {
    let n = net.n();
    let t0 = opts.t0;
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(DdeError::InvalidStep { dt });
    }
    if !(t_end > t0) {
        return Err(DdeError::InvalidHorizon { t0, t_end });
    }
    if let Some(min_delay) = net.min_delay() {
        if dt > min_delay {
            return Err(DdeError::StepTooLarge { dt, min_delay });
        }
    }
    if phi.dim() != n || !phi.covers(net.kappa()) {
        return Err(DdeError::InitialFunction { expected_dim: n });
    }
    let steps = libm::ceil((t_end - t0) / dt - 1e-9) as usize;
    let keep = libm::ceil(net.kappa() / dt) as usize + 3;

    let field = VectorField::new(net);
    let x0 = phi.eval(0.0);
    let mut traj = Trajectory {
        n,
        t0,
        dt,
        kappa: net.kappa(),
        first: 0,
        last: 0,
        states: x0.clone(),
        derivs: vec![0.0; n],
        phi: phi.clone(),
    };
    let mut f = vec![0.0; n];
    field.eval(t0, &x0, &traj, &mut f);
    traj.derivs.copy_from_slice(&f);
    if opts.history == HistoryMode::Full {
        traj.states.reserve(steps * n);
        traj.derivs.reserve(steps * n);
    }

    let (mut k2, mut k3, mut k4) = (vec![0.0; n], vec![0.0; n], vec![0.0; n]);
    let mut tmp = vec![0.0; n];
    let mut x = x0;
    for step in 0..steps {
        let t = traj.time(step);
        let k1 = &f;
        for i in 0..n {
            tmp[i] = x[i] + 0.5 * dt * k1[i];
        }
        field.eval(t + 0.5 * dt, &tmp, &traj, &mut k2);
        for i in 0..n {
            tmp[i] = x[i] + 0.5 * dt * k2[i];
        }
        field.eval(t + 0.5 * dt, &tmp, &traj, &mut k3);
        for i in 0..n {
            tmp[i] = x[i] + dt * k3[i];
        }
        field.eval(t + dt, &tmp, &traj, &mut k4);
        for i in 0..n {
            x[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        let t_next = traj.time(step + 1);
        if let Some(i) = x.iter().position(|v| !(v.abs() < STATE_LIMIT)) {
            return Err(DdeError::NonFiniteState { t: t_next, i });
        }
        // delayed arguments at t_next stay at or before the current front
        field.eval(t_next, &x, &traj, &mut f);
        traj.push(&x, &f);
        if opts.history == HistoryMode::Ring {
            traj.trim(keep);
        }
    }
    Ok(traj)
}
