//! Numerical location of the `2^N` encoded patterns, empirical invariance
//! and convergence checks, basin classification, and the fixed-point
//! residual of the integral operator whose fixed points are the patterns.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::criteria::{BasinBounds, SigmaPattern};
use crate::dde::{
    integrate, integrate_with, DdeError, HistoryMode, InitialFunction, IntegrateOptions, Trajectory,
};
use crate::network::{Delay, Network};

/// Largest `N` accepted by [`enumerate_sigma`].
pub const MAX_ENUMERATED: usize = 20;

/// Default tolerance for containment checks.
pub const CONTAINMENT_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PatternError {
    TooLarge {
        n: usize,
    },
    /// First grid point where the trajectory left `[α_iς, β_iς]`.
    EscapedBasin {
        t: f64,
        i: usize,
        value: f64,
    },
    DegenerateSeparation,
    WindowTooShort {
        needed: f64,
        available: f64,
    },
    DimensionMismatch {
        expected: usize,
        found: usize,
    },
    /// Component `i` of an initial function starts on the wrong side of its
    /// basin anchor.
    OutsideBasin {
        i: usize,
    },
    Dde(DdeError),
}

impl fmt::Display for PatternError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PatternError::TooLarge { n } => write!(f, "2^{n} patterns is too many to enumerate"),
            PatternError::EscapedBasin { t, i, value } => {
                write!(f, "component {i} left its basin at t = {t} (value {value})")
            }
            PatternError::DegenerateSeparation => {
                write!(f, "trajectories never separate by more than 1e-12")
            }
            PatternError::WindowTooShort { needed, available } => {
                write!(
                    f,
                    "half window {available} is shorter than the required {needed}"
                )
            }
            PatternError::DimensionMismatch { expected, found } => {
                write!(f, "expected {expected} components, got {found}")
            }
            PatternError::OutsideBasin { i } => {
                write!(f, "initial component {i} lies outside the basin")
            }
            PatternError::Dde(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for PatternError {}

impl From<DdeError> for PatternError {
    fn from(e: DdeError) -> Self {
        PatternError::Dde(e)
    }
}

/// All `2^n` side choices in lexicographic order.
pub fn enumerate_sigma(n: usize) -> Result<Vec<SigmaPattern>, PatternError> {
    if n > MAX_ENUMERATED {
        return Err(PatternError::TooLarge { n });
    }
    Ok((0..1usize << n)
        .map(|code| {
            let entries = (0..n)
                .map(|i| if code >> (n - 1 - i) & 1 == 1 { 2 } else { 1 })
                .collect();
            SigmaPattern::new(entries).expect("entries are 1 or 2")
        })
        .collect())
}

/// Constant initial function at the inner corner of the basin:
/// `β_i1` for side 1, `α_i2` for side 2.
pub fn representative_phi(bounds: &BasinBounds, sigma: &SigmaPattern) -> InitialFunction {
    InitialFunction::Constant(
        sigma
            .entries()
            .iter()
            .enumerate()
            .map(|(i, &s)| bounds.anchor(i, s))
            .collect(),
    )
}

/// Largest signed distance outside `[α_iς, β_iς]` of `x` (negative inside).
pub fn violation(bounds: &BasinBounds, sigma: &SigmaPattern, x: &[f64]) -> f64 {
    x.iter()
        .zip(sigma.entries())
        .enumerate()
        .map(|(i, (&v, &s))| {
            let (lo, hi) = bounds.interval(i, s);
            (v - hi).max(lo - v)
        })
        .fold(f64::NEG_INFINITY, f64::max)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocateOptions {
    pub transient: f64,
    pub window: f64,
    pub dt: f64,
}

impl LocateOptions {
    /// Transient `100 κ` and window `10 κ`, with `κ` at least 1.
    pub fn for_network(net: &Network) -> Self {
        let kappa = net.kappa().max(1.0);
        Self {
            transient: 100.0 * kappa,
            window: 10.0 * kappa,
            dt: 0.01,
        }
    }
}

/// Trajectory of one located pattern, with its observation window.
#[derive(Debug, Clone, PartialEq)]
pub struct PatternSample {
    pub sigma: SigmaPattern,
    pub window_start: f64,
    pub window_end: f64,
    pub trajectory: Trajectory,
    /// Componentwise `(min, max)` over the window.
    pub ranges: Vec<(f64, f64)>,
    /// Largest signed distance outside the basin box over the window.
    pub max_violation: f64,
}

impl PatternSample {
    pub fn new(
        sigma: SigmaPattern,
        trajectory: Trajectory,
        window_start: f64,
        bounds: &BasinBounds,
    ) -> Self {
        let window_end = trajectory.t_end();
        let ranges = trajectory.component_ranges(window_start, window_end);
        let k0 = trajectory.index_at_or_after(window_start);
        let max_violation = (k0..=*trajectory.indices().end())
            .map(|k| violation(bounds, &sigma, trajectory.state(k)))
            .fold(f64::NEG_INFINITY, f64::max);
        Self {
            sigma,
            window_start,
            window_end,
            trajectory,
            ranges,
            max_violation,
        }
    }

    /// Grid indices inside the window.
    pub fn window_indices(&self) -> core::ops::RangeInclusive<usize> {
        self.trajectory.index_at_or_after(self.window_start)..=*self.trajectory.indices().end()
    }
}

/// Integrates from the representative initial function through the
/// transient and keeps the window. Fails at the first grid point that
/// leaves `[α_iς, β_iς]` by more than [`CONTAINMENT_TOL`].
pub fn locate_pattern(
    net: &Network,
    bounds: &BasinBounds,
    sigma: &SigmaPattern,
    opts: LocateOptions,
) -> Result<PatternSample, PatternError> {
    check_dim(net, sigma)?;
    let phi = representative_phi(bounds, sigma);
    let traj = integrate(net, &phi, opts.transient + opts.window, opts.dt)?;
    for k in traj.indices() {
        let x = traj.state(k);
        for (i, (&v, &s)) in x.iter().zip(sigma.entries()).enumerate() {
            let (lo, hi) = bounds.interval(i, s);
            if v < lo - CONTAINMENT_TOL || v > hi + CONTAINMENT_TOL {
                return Err(PatternError::EscapedBasin {
                    t: traj.time(k),
                    i,
                    value: v,
                });
            }
        }
    }
    Ok(PatternSample::new(
        sigma.clone(),
        traj,
        opts.transient,
        bounds,
    ))
}

fn check_dim(net: &Network, sigma: &SigmaPattern) -> Result<(), PatternError> {
    if sigma.len() != net.n() {
        return Err(PatternError::DimensionMismatch {
            expected: net.n(),
            found: sigma.len(),
        });
    }
    Ok(())
}

/// Max-norm distance between two patterns over their common window.
pub fn pattern_separation(a: &PatternSample, b: &PatternSample) -> f64 {
    let start = a.window_start.max(b.window_start);
    let ka = a.trajectory.index_at_or_after(start);
    let kb = b.trajectory.index_at_or_after(start);
    let len = (a.trajectory.indices().end() - ka).min(b.trajectory.indices().end() - kb);
    let mut out = f64::INFINITY;
    for s in 0..=len {
        let d = a
            .trajectory
            .state(ka + s)
            .iter()
            .zip(b.trajectory.state(kb + s))
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max);
        out = out.min(d);
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct InvarianceReport {
    pub trials: usize,
    pub seed: u64,
    /// Largest signed distance outside `[α_iς, β_iς]` over all trials and
    /// grid points; negative when every state stayed strictly inside.
    pub max_violation: f64,
    /// Trials whose violation exceeded the tolerance.
    pub escaped: usize,
    pub tolerance: f64,
}

impl InvarianceReport {
    pub fn passed(&self) -> bool {
        self.escaped == 0
    }
}

/// Uniform constant starts inside `Π [α_iς, β_iς]`.
pub fn draw_starts(
    bounds: &BasinBounds,
    sigma: &SigmaPattern,
    trials: usize,
    seed: u64,
) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..trials)
        .map(|_| {
            sigma
                .entries()
                .iter()
                .enumerate()
                .map(|(i, &s)| {
                    let (lo, hi) = bounds.interval(i, s);
                    rng.gen_range(lo..=hi)
                })
                .collect()
        })
        .collect()
}

/// Largest signed violation along one trajectory started at `x0`.
pub fn invariance_trial(
    net: &Network,
    bounds: &BasinBounds,
    sigma: &SigmaPattern,
    x0: &[f64],
    t_end: f64,
    dt: f64,
) -> Result<f64, PatternError> {
    let traj = integrate(net, &InitialFunction::Constant(x0.to_vec()), t_end, dt)?;
    Ok(traj
        .indices()
        .map(|k| violation(bounds, sigma, traj.state(k)))
        .fold(f64::NEG_INFINITY, f64::max))
}

/// Seeded random starts inside the basin box; reports how far any
/// trajectory strays outside it.
#[allow(clippy::too_many_arguments)]
pub fn verify_invariance(
    net: &Network,
    bounds: &BasinBounds,
    sigma: &SigmaPattern,
    trials: usize,
    t_end: f64,
    dt: f64,
    seed: u64,
) -> Result<InvarianceReport, PatternError> {
    check_dim(net, sigma)?;
    let mut report = InvarianceReport {
        trials,
        seed,
        max_violation: f64::NEG_INFINITY,
        escaped: 0,
        tolerance: CONTAINMENT_TOL,
    };
    for x0 in draw_starts(bounds, sigma, trials, seed) {
        let v = invariance_trial(net, bounds, sigma, &x0, t_end, dt)?;
        report.max_violation = report.max_violation.max(v);
        if v > CONTAINMENT_TOL {
            report.escaped += 1;
        }
    }
    Ok(report)
}

/// Exponential rate at which two solutions approach each other: minus the
/// least-squares slope of `ln max_i |x_1^i − x_2^i|` over `[t_end/2, t_end]`.
/// Both initial functions must start in the half-line basin of `sigma`.
pub fn estimate_decay(
    net: &Network,
    bounds: &BasinBounds,
    sigma: &SigmaPattern,
    phi1: &InitialFunction,
    phi2: &InitialFunction,
    t_end: f64,
    dt: f64,
) -> Result<f64, PatternError> {
    check_dim(net, sigma)?;
    for phi in [phi1, phi2] {
        let x = phi.eval(0.0);
        if x.len() != net.n() {
            return Err(PatternError::DimensionMismatch {
                expected: net.n(),
                found: x.len(),
            });
        }
        for (i, (&v, &s)) in x.iter().zip(sigma.entries()).enumerate() {
            let anchor = bounds.anchor(i, s);
            if (s == 1 && v > anchor) || (s == 2 && v < anchor) {
                return Err(PatternError::OutsideBasin { i });
            }
        }
    }
    let a = integrate(net, phi1, t_end, dt)?;
    let b = integrate(net, phi2, t_end, dt)?;
    let (mut n, mut st, mut sy, mut stt, mut sty) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for k in a.index_at_or_after(0.5 * t_end)..=*a.indices().end() {
        let sep = a
            .state(k)
            .iter()
            .zip(b.state(k))
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max);
        if sep < 1e-12 {
            continue;
        }
        let (t, y) = (a.time(k), libm::log(sep));
        n += 1.0;
        st += t;
        sy += y;
        stt += t * t;
        sty += t * y;
    }
    let denom = n * stt - st * st;
    if n < 2.0 || denom <= 0.0 {
        return Err(PatternError::DegenerateSeparation);
    }
    Ok(-(n * sty - st * sy) / denom)
}

/// Sweep axis: `count` evenly spaced values on `[min, max]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl Axis {
    pub fn value(&self, k: usize) -> f64 {
        if self.count <= 1 {
            self.min
        } else {
            self.min + (self.max - self.min) * k as f64 / (self.count - 1) as f64
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Label {
    Pattern(SigmaPattern),
    Unclassified,
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Pattern(s) => write!(f, "{s}"),
            Label::Unclassified => write!(f, "unclassified"),
        }
    }
}

/// Grid points (first axis slowest) and their labels.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub points: Vec<Vec<f64>>,
    pub labels: Vec<Label>,
}

/// Cartesian grid of constant initial states, first axis slowest.
pub fn grid_points(axes: &[Axis]) -> Vec<Vec<f64>> {
    let total: usize = axes.iter().map(|a| a.count).product();
    (0..total)
        .map(|mut code| {
            let mut p = vec![0.0; axes.len()];
            for (d, axis) in axes.iter().enumerate().rev() {
                p[d] = axis.value(code % axis.count);
                code /= axis.count;
            }
            p
        })
        .collect()
}

/// Sign pattern of the terminal state, if that state lies in the matching
/// basin box.
pub fn classify_point(
    net: &Network,
    bounds: &BasinBounds,
    x0: &[f64],
    t_end: f64,
    dt: f64,
) -> Result<Label, PatternError> {
    let opts = IntegrateOptions {
        t0: 0.0,
        history: HistoryMode::Ring,
    };
    let traj = integrate_with(
        net,
        &InitialFunction::Constant(x0.to_vec()),
        t_end,
        dt,
        opts,
    )?;
    let x = traj.last_state();
    let sigma = SigmaPattern::from_signs(x);
    Ok(if violation(bounds, &sigma, x) <= CONTAINMENT_TOL {
        Label::Pattern(sigma)
    } else {
        Label::Unclassified
    })
}

pub fn basin_sweep(
    net: &Network,
    bounds: &BasinBounds,
    axes: &[Axis],
    t_end: f64,
    dt: f64,
) -> Result<SweepResult, PatternError> {
    if axes.len() != net.n() {
        return Err(PatternError::DimensionMismatch {
            expected: net.n(),
            found: axes.len(),
        });
    }
    let points = grid_points(axes);
    let labels = points
        .iter()
        .map(|p| classify_point(net, bounds, p, t_end, dt))
        .collect::<Result<_, _>>()?;
    Ok(SweepResult { points, labels })
}

/// Number of sample times used by [`operator_residual`].
pub const RESIDUAL_SAMPLES: usize = 16;

/// `max_{i,t} |(ℱ_i u)(t) − u_i(t)|` over sample times in the second half
/// of the window, where
///
/// ```text
/// (ℱ_i u)(t) = ∫_0^∞ [Σ_l Σ_j a_ijl(t−s) g_j(σ_j u_j(t−s−κ_ijl(t−s))) + J_i(t−s)]
///              · exp(−∫_{t−s}^t c_i) ds
/// ```
///
/// truncated where `exp(−s · min inf c) < tail_tol` and integrated with the
/// trapezoid rule at the trajectory step.
pub fn operator_residual(
    net: &Network,
    pattern: &PatternSample,
    tail_tol: f64,
) -> Result<f64, PatternError> {
    let traj = &pattern.trajectory;
    let cmin = net
        .derived()
        .c_inf
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min);
    let horizon = libm::log(1.0 / tail_tol) / cmin;
    let half = 0.5 * (pattern.window_end - pattern.window_start);
    let needed = horizon + net.kappa();
    if !(half >= needed) {
        return Err(PatternError::WindowTooShort {
            needed,
            available: half,
        });
    }
    let dt = traj.dt();
    let steps = libm::ceil(horizon / dt) as usize;
    let mid = pattern.window_start + half;
    let k_first = traj.index_at_or_after(mid);
    let k_last = *traj.indices().end();
    let mut worst = 0.0f64;
    for sample in 0..RESIDUAL_SAMPLES {
        let k = k_first + (k_last - k_first) * sample / (RESIDUAL_SAMPLES - 1);
        let t = traj.time(k);
        let u = traj.state(k);
        for i in 0..net.n() {
            let integrand = |s: f64| {
                let tau = t - s;
                let mut drive = net.input(i).eval(tau);
                for c in net.couplings().iter().filter(|c| c.i == i) {
                    let arg = match &c.delay {
                        Delay::Instant => tau,
                        Delay::Lagged { signal, .. } => tau - signal.eval(tau),
                    };
                    let y = traj.history_eval(arg).map(|v| v[c.j]).unwrap_or(f64::NAN);
                    drive += c.weight.eval(tau) * net.activation(c.j).eval(net.gain(c.j) * y);
                }
                drive * libm::exp(-net.decay(i).integral(tau, t))
            };
            let mut acc = 0.5 * (integrand(0.0) + integrand(steps as f64 * dt));
            for q in 1..steps {
                acc += integrand(q as f64 * dt);
            }
            worst = worst.max((acc * dt - u[i]).abs());
        }
    }
    Ok(worst)
}
