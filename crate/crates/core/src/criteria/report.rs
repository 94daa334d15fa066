//! One-shot evaluation of every hypothesis that applies to a network.

use alloc::vec::Vec;

use super::{
    basin_bounds_a, basin_bounds_b, check_h1a, check_h1b, check_h2a, check_h2b, check_h3a,
    check_h4a, enlarge_basins, h4_certificate, mu_certificate, search_h4_params, BasinBounds,
    CriteriaError, H4Params,
};
use crate::activations::ActivationClass;
use crate::mmatrix::SquareMatrix;
use crate::network::Network;

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub class: ActivationClass,
    pub h1a: Option<Vec<bool>>,
    pub h2a: Option<Vec<[bool; 2]>>,
    pub h3a: Option<bool>,
    pub c_minus_hg: Option<SquareMatrix>,
    pub h4a: Option<Vec<bool>>,
    pub h4_params: Option<H4Params>,
    pub h1b: Option<Vec<bool>>,
    pub h2b: Option<Vec<[bool; 2]>>,
    pub bounds: Option<BasinBounds>,
    pub enlarged: Option<BasinBounds>,
    pub mu: Option<f64>,
    pub gamma: Option<f64>,
    /// First hypothesis that stopped the evaluation, if any.
    pub failure: Option<CriteriaError>,
}

impl VerifyReport {
    fn empty(class: ActivationClass) -> Self {
        Self {
            class,
            h1a: None,
            h2a: None,
            h3a: None,
            c_minus_hg: None,
            h4a: None,
            h4_params: None,
            h1b: None,
            h2b: None,
            bounds: None,
            enlarged: None,
            mu: None,
            gamma: None,
            failure: None,
        }
    }

    /// Existence hypotheses hold and at least one stability hypothesis
    /// holds (class A), or both class-B hypotheses hold.
    pub fn passed(&self) -> bool {
        let all = |v: &Option<Vec<bool>>| v.as_ref().is_some_and(|v| v.iter().all(|&b| b));
        let all2 =
            |v: &Option<Vec<[bool; 2]>>| v.as_ref().is_some_and(|v| v.iter().flatten().all(|&b| b));
        match self.class {
            ActivationClass::A => {
                all(&self.h1a) && all2(&self.h2a) && (self.h3a == Some(true) || all(&self.h4a))
            }
            ActivationClass::B => all(&self.h1b) && all2(&self.h2b),
        }
    }
}

/// Runs the checkers in dependency order. Failures of a hypothesis are
/// recorded in the report; later stages that depend on it are skipped.
/// Mixed activation classes are the only error.
pub fn verify(net: &Network) -> Result<VerifyReport, CriteriaError> {
    let class = match net.class() {
        Some(c) => c,
        None => {
            let first = net.activation(0).class();
            let i = net
                .activations()
                .iter()
                .position(|a| a.class() != first)
                .unwrap_or(0);
            return Err(CriteriaError::WrongClass { i, expected: first });
        }
    };
    let mut r = VerifyReport::empty(class);
    match class {
        ActivationClass::A => {
            let h1 = check_h1a(net);
            let h1_ok = h1.iter().all(|&b| b);
            if let Some(i) = h1.iter().position(|&b| !b) {
                let d = net.derived();
                let ratio = d.c_sup[i] / (net.gain(i) * d.selfgain_inf[i]);
                r.failure = Some(CriteriaError::H1A { i, ratio });
            }
            r.h1a = Some(h1);
            if !h1_ok {
                return Ok(r);
            }
            r.h2a = Some(check_h2a(net)?);
            let bounds = match basin_bounds_a(net) {
                Ok(b) => b,
                Err(e) => {
                    r.failure = Some(e);
                    return Ok(r);
                }
            };
            let (h3, m) = match check_h3a(net, &bounds) {
                Ok(v) => v,
                Err(e) => {
                    r.failure = Some(e);
                    r.bounds = Some(bounds);
                    return Ok(r);
                }
            };
            r.h3a = Some(h3);
            r.c_minus_hg = Some(m);
            if h3 {
                r.mu = mu_certificate(net, &bounds).ok().map(|c| c.rate());
                r.enlarged = enlarge_basins(net, &bounds).ok();
            }
            let params =
                search_h4_params(net, &bounds).unwrap_or_else(|| H4Params::default_for(net));
            r.h4a = Some(check_h4a(net, &bounds, &params)?);
            r.gamma = h4_certificate(net, &bounds, &params).ok().map(|c| c.rate());
            r.h4_params = Some(params);
            if !r.passed() && r.failure.is_none() {
                r.failure = Some(CriteriaError::H3A);
            }
            r.bounds = Some(bounds);
        }
        ActivationClass::B => {
            r.h1b = Some(check_h1b(net)?);
            r.h2b = Some(check_h2b(net)?);
            match basin_bounds_b(net) {
                Ok(bounds) => {
                    let (_, m) = check_h3a(net, &bounds)?;
                    r.c_minus_hg = Some(m);
                    r.mu = mu_certificate(net, &bounds).ok().map(|c| c.rate());
                    r.enlarged = enlarge_basins(net, &bounds).ok();
                    r.bounds = Some(bounds);
                }
                Err(e) => r.failure = Some(e),
            }
        }
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn all_examples_pass() {
        for id in 1..=4 {
            let net = Network::new(fixtures::example(id).unwrap()).unwrap();
            let r = verify(&net).unwrap();
            assert!(r.passed(), "example {id}: {r:?}");
            assert!(r.failure.is_none());
            assert!(r.bounds.as_ref().unwrap().is_ordered());
            assert!(r.mu.unwrap() > 0.0);
        }
    }

    #[test]
    fn h1a_failure_is_reported() {
        let mut spec = fixtures::example1();
        spec.decay = spec.decay.iter().map(|c| c.scaled(10.0)).collect();
        let r = verify(&Network::new(spec).unwrap()).unwrap();
        assert!(!r.passed());
        assert!(!r.h1a.as_ref().unwrap()[0]);
        assert!(matches!(r.failure, Some(CriteriaError::H1A { i: 0, .. })));
        assert!(r.bounds.is_none());
    }
}
