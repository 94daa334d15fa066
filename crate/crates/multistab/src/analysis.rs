//! Parallel drivers over the core pattern routines.

use multistab_core::criteria::{basin_bounds, verify, BasinBounds, SigmaPattern};
use multistab_core::dde::InitialFunction;
use multistab_core::patterns::{
    basin_sweep, classify_point, enumerate_sigma, estimate_decay, grid_points, locate_pattern,
    operator_residual, pattern_separation, representative_phi, verify_invariance, Axis,
    LocateOptions, PatternError, PatternSample, SweepResult,
};
use multistab_core::Network;
use rayon::prelude::*;

use crate::report::{InvarianceJson, PatternJson, PatternsJson};
use crate::Error;

/// Same result as [`basin_sweep`], with grid cells integrated in parallel.
pub fn parallel_sweep(
    net: &Network,
    bounds: &BasinBounds,
    axes: &[Axis],
    t_end: f64,
    dt: f64,
) -> Result<SweepResult, PatternError> {
    if axes.len() != net.n() {
        // let the sequential path report the mismatch
        return basin_sweep(net, bounds, axes, t_end, dt);
    }
    let points = grid_points(axes);
    let labels = points
        .par_iter()
        .map(|p| classify_point(net, bounds, p, t_end, dt))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(SweepResult { points, labels })
}

#[derive(Debug, Clone, PartialEq)]
pub struct PatternsConfig {
    pub dt: f64,
    /// Defaults follow [`LocateOptions::for_network`].
    pub transient: Option<f64>,
    pub window: Option<f64>,
    pub tail_tol: f64,
    /// Horizon of the two-start decay fit.
    pub decay_t_end: f64,
    /// Random starts per pattern; zero skips the invariance check.
    pub trials: usize,
    pub invariance_t_end: f64,
    pub seed: u64,
}

impl Default for PatternsConfig {
    fn default() -> Self {
        Self {
            dt: 0.01,
            transient: None,
            window: None,
            tail_tol: 1e-8,
            decay_t_end: 20.0,
            trials: 0,
            invariance_t_end: 200.0,
            seed: 0,
        }
    }
}

/// Constant initial function at the outer edge of the basin box.
fn outer_phi(bounds: &BasinBounds, sigma: &SigmaPattern) -> InitialFunction {
    let x = sigma.entries().iter().enumerate().map(|(i, &s)| {
        let (lo, hi) = bounds.interval(i, s);
        if s == 1 {
            lo
        } else {
            hi
        }
    });
    InitialFunction::Constant(x.collect())
}

fn analyze_one(
    net: &Network,
    bounds: &BasinBounds,
    sigma: &SigmaPattern,
    opts: LocateOptions,
    cfg: &PatternsConfig,
    seed: u64,
) -> (PatternJson, Option<PatternSample>) {
    let mut json = PatternJson {
        sigma: sigma.entries().to_vec(),
        ranges: None,
        max_violation: None,
        residual: None,
        decay_rate: None,
        invariance: None,
        error: None,
    };
    let sample = match locate_pattern(net, bounds, sigma, opts) {
        Ok(s) => s,
        Err(e) => {
            json.error = Some(e.to_string());
            return (json, None);
        }
    };
    json.ranges = Some(sample.ranges.iter().map(|&(a, b)| [a, b]).collect());
    json.max_violation = Some(sample.max_violation);
    json.residual = operator_residual(net, &sample, cfg.tail_tol).ok();
    json.decay_rate = estimate_decay(
        net,
        bounds,
        sigma,
        &representative_phi(bounds, sigma),
        &outer_phi(bounds, sigma),
        cfg.decay_t_end,
        cfg.dt,
    )
    .ok();
    if cfg.trials > 0 {
        match verify_invariance(
            net,
            bounds,
            sigma,
            cfg.trials,
            cfg.invariance_t_end,
            cfg.dt,
            seed,
        ) {
            Ok(r) => {
                json.invariance = Some(InvarianceJson {
                    trials: r.trials,
                    t_end: cfg.invariance_t_end,
                    max_violation: r.max_violation,
                    escaped: r.escaped,
                })
            }
            Err(e) => json.error = Some(e.to_string()),
        }
    }
    (json, Some(sample))
}

/// Locates every pattern and gathers containment, residual, decay and
/// (optionally) invariance data. Pattern `k` draws its random starts from
/// `seed + k`.
pub fn analyze_patterns(net: &Network, cfg: &PatternsConfig) -> Result<PatternsJson, Error> {
    let report = verify(net)?;
    if !report.passed() {
        let why = report
            .failure
            .map_or_else(|| "hypotheses not satisfied".to_string(), |e| e.to_string());
        return Err(Error::HypothesisFailed(why));
    }
    let bounds = basin_bounds(net)?;
    let defaults = LocateOptions::for_network(net);
    let opts = LocateOptions {
        transient: cfg.transient.unwrap_or(defaults.transient),
        window: cfg.window.unwrap_or(defaults.window),
        dt: cfg.dt,
    };
    let sigmas = enumerate_sigma(net.n())?;
    let results: Vec<(PatternJson, Option<PatternSample>)> = sigmas
        .par_iter()
        .enumerate()
        .map(|(k, s)| analyze_one(net, &bounds, s, opts, cfg, cfg.seed.wrapping_add(k as u64)))
        .collect();
    let samples: Vec<&PatternSample> = results.iter().filter_map(|r| r.1.as_ref()).collect();
    let mut min_separation: Option<f64> = None;
    for (k, a) in samples.iter().enumerate() {
        for b in &samples[k + 1..] {
            let d = pattern_separation(a, b);
            min_separation = Some(min_separation.map_or(d, |m| m.min(d)));
        }
    }
    let patterns: Vec<PatternJson> = results.into_iter().map(|r| r.0).collect();
    let passed =
        patterns.iter().all(PatternJson::contained) && min_separation.is_none_or(|d| d > 0.0);
    Ok(PatternsJson {
        seed: cfg.seed,
        dt: opts.dt,
        transient: opts.transient,
        window: opts.window,
        tail_tol: cfg.tail_tol,
        patterns,
        min_separation,
        passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use multistab_core::fixtures;

    #[test]
    fn parallel_sweep_matches_sequential() {
        let net = Network::new(fixtures::example1()).unwrap();
        let b = basin_bounds(&net).unwrap();
        let axes = [Axis {
            min: -4.0,
            max: 4.0,
            count: 5,
        }; 2];
        assert_eq!(
            parallel_sweep(&net, &b, &axes, 40.0, 0.01).unwrap(),
            basin_sweep(&net, &b, &axes, 40.0, 0.01).unwrap()
        );
    }

    #[test]
    fn example3_patterns() {
        let net = Network::new(fixtures::example3()).unwrap();
        let cfg = PatternsConfig {
            transient: Some(200.0),
            trials: 3,
            invariance_t_end: 50.0,
            ..Default::default()
        };
        let r = analyze_patterns(&net, &cfg).unwrap();
        assert!(r.passed, "{r:?}");
        assert_eq!(r.patterns.len(), 4);
        for p in &r.patterns {
            assert!(p.residual.unwrap() < 1e-3);
            assert!(p.decay_rate.unwrap() > 0.0);
        }
        assert!(r.min_separation.unwrap() > 0.1);
    }
}
