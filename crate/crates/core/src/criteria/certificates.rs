//! Exponential stability certificates: the rate `μ` from the M-matrix cone
//! vector, and the Halanay rate `γ` from the (H4ᴬ) Lyapunov functional.

use alloc::vec::Vec;

use super::class_a::{c_minus_hg, h4_terms};
use super::{BasinBounds, CriteriaError, H4Params};
use crate::network::Network;
use crate::roots::{bisect, last_true};

/// Safety margin applied to the bisected `μ`.
pub const MU_MARGIN: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq)]
pub enum StabilityCertificate {
    /// Cone vector `K` of `C − H G` and the rate `μ` with `W_i(μ) > 0`.
    H3 { mu: f64, k: Vec<f64> },
    /// Halanay rate for `V' ≤ −α V + β sup V`.
    H4 { gamma: f64, alpha: f64, beta: f64 },
}

impl StabilityCertificate {
    pub fn rate(&self) -> f64 {
        match self {
            StabilityCertificate::H3 { mu, .. } => *mu,
            StabilityCertificate::H4 { gamma, .. } => *gamma,
        }
    }
}

/// `W_i(θ) = (inf c_i − θ) K_i − Σ_l Σ_j sup|a_ijl| G_j K_j e^{θ κ_ijl}`
/// for every neuron, with `κ_ijl` the delay cap (zero when undelayed).
pub fn mu_weights(net: &Network, g: &[f64], k: &[f64], theta: f64) -> Vec<f64> {
    let d = net.derived();
    let mut w: Vec<f64> = (0..net.n()).map(|i| (d.c_inf[i] - theta) * k[i]).collect();
    for c in net.couplings() {
        let gain = g[c.j];
        if gain != 0.0 {
            w[c.i] -= c.weight.abs_sup() * gain * k[c.j] * libm::exp(theta * c.delay.cap());
        }
    }
    w
}

/// Largest `μ` in `(0, min inf c_i)` keeping every `W_i(μ) > 0`, shrunk by
/// [`MU_MARGIN`].
pub fn mu_certificate(
    net: &Network,
    bounds: &BasinBounds,
) -> Result<StabilityCertificate, CriteriaError> {
    let g = bounds.g_diag();
    let m = c_minus_hg(net, &g);
    if !m.is_in_m()? {
        return Err(CriteriaError::H3A);
    }
    let k = m.quasidominance_vector()?.ok_or(CriteriaError::H3A)?;
    let positive = |theta: f64| mu_weights(net, &g, &k, theta).iter().all(|&w| w > 0.0);
    let cmin = net
        .derived()
        .c_inf
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min);
    let mu = last_true(positive, 0.0, cmin, 1e-10);
    Ok(StabilityCertificate::H3 {
        mu: mu * (1.0 - MU_MARGIN),
        k,
    })
}

/// Unique `γ ∈ (0, α − β]` with `γ = α − β e^{γ κ}`.
pub fn halanay_gamma(alpha: f64, beta: f64, kappa: f64) -> Result<f64, CriteriaError> {
    if !(alpha > beta) || beta < 0.0 {
        return Err(CriteriaError::NotContractive { alpha, beta });
    }
    if beta == 0.0 {
        return Ok(alpha);
    }
    if kappa == 0.0 {
        return Ok(alpha - beta);
    }
    let f = |gamma: f64| gamma - alpha + beta * libm::exp(gamma * kappa);
    Ok(bisect(f, 0.0, alpha - beta))
}

/// `α = min_i (p d_i inf c_i − instantaneous sum)`,
/// `β = max_i (delayed sum)`.
pub fn lyapunov_alpha_beta(net: &Network, bounds: &BasinBounds, params: &H4Params) -> (f64, f64) {
    let terms = h4_terms(net, bounds, params);
    let alpha = terms
        .iter()
        .map(|(lhs, inst, _)| lhs - inst)
        .fold(f64::INFINITY, f64::min);
    let beta = terms.iter().map(|t| t.2).fold(0.0, f64::max);
    (alpha, beta)
}

/// Halanay certificate on the (H4ᴬ) path with the network's delay cap.
pub fn h4_certificate(
    net: &Network,
    bounds: &BasinBounds,
    params: &H4Params,
) -> Result<StabilityCertificate, CriteriaError> {
    params.validate(net)?;
    let (alpha, beta) = lyapunov_alpha_beta(net, bounds, params);
    let gamma = halanay_gamma(alpha, beta, net.kappa())?;
    Ok(StabilityCertificate::H4 { gamma, alpha, beta })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::criteria::{basin_bounds_a, basin_bounds_b};
    use crate::fixtures;
    use crate::network::NetworkSpec;
    use crate::signals::TrigSignal;
    use crate::Activation;
    use alloc::vec;

    fn ex(id: u8) -> Network {
        Network::new(fixtures::example(id).unwrap()).unwrap()
    }

    #[test]
    fn gamma_examples() {
        assert_eq!(halanay_gamma(2.0, 1.0, 0.0), Ok(1.0));
        let g = halanay_gamma(2.0, 1.0, 1.0).unwrap();
        // independent bisection on γ + e^γ = 2
        let (mut lo, mut hi) = (0.0f64, 1.0f64);
        for _ in 0..100 {
            let mid = 0.5 * (lo + hi);
            if mid + libm::exp(mid) < 2.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        assert!((g - lo).abs() < 1e-12 && (g - 0.4429).abs() < 1e-4);
        assert!((g - 2.0 + libm::exp(g)).abs() < 1e-10);
        assert!(matches!(
            halanay_gamma(1.0, 2.0, 1.0),
            Err(CriteriaError::NotContractive { .. })
        ));
    }

    #[test]
    fn mu_example1_against_grid_scan() {
        let net = ex(1);
        let b = basin_bounds_a(&net).unwrap();
        let cert = mu_certificate(&net, &b).unwrap();
        let StabilityCertificate::H3 { mu, k } = &cert else {
            panic!()
        };
        let g = b.g_diag();
        assert!(mu_weights(&net, &g, k, *mu).iter().all(|&w| w > 0.0));
        // first grid point where some W_i turns nonpositive
        let mut theta = 0.0;
        while mu_weights(&net, &g, k, theta).iter().all(|&w| w > 0.0) {
            theta += 1e-4;
        }
        assert!(
            *mu <= theta && *mu > (theta - 1e-4) * (1.0 - 2.0 * MU_MARGIN),
            "{mu} vs {theta}"
        );
    }

    #[test]
    fn mu_without_coupling_approaches_min_decay() {
        let spec = NetworkSpec {
            n: 2,
            m: 1,
            decay: vec![TrigSignal::constant(1.0); 2],
            weights: vec![
                vec![vec![TrigSignal::constant(2.0)], vec![TrigSignal::zero()]],
                vec![vec![TrigSignal::zero()], vec![TrigSignal::constant(2.0)]],
            ],
            delays: vec![vec![vec![TrigSignal::zero()]; 2]; 2],
            inputs: vec![TrigSignal::zero(); 2],
            gains: vec![1.0; 2],
            activations: vec![Activation::tanh(); 2],
        };
        let net = Network::new(spec).unwrap();
        let mut b = basin_bounds_a(&net).unwrap();
        for nb in b.neurons.iter_mut() {
            nb.g = 0.0;
        }
        let mu = mu_certificate(&net, &b).unwrap().rate();
        assert!((mu - (1.0 - MU_MARGIN)).abs() < 1e-8, "{mu}");
    }

    #[test]
    fn mu_example3_saturated() {
        let net = ex(3);
        let b = basin_bounds_b(&net).unwrap();
        let mu = mu_certificate(&net, &b).unwrap().rate();
        assert!((mu - 0.4995).abs() < 1e-8, "{mu}");
    }

    #[test]
    fn lyapunov_example2() {
        let net = ex(2);
        let b = basin_bounds_a(&net).unwrap();
        let prm = H4Params::uniform(2, 2, 4.0, 1);
        let (alpha, beta) = lyapunov_alpha_beta(&net, &b, &prm);
        // i = 1: 5.6 − 3 Σ (a G)^{2/3}; β = Σ_j Σ_l a_j1l² G_1²
        let g = b.g_diag();
        let inst1 = 3.0
            * [2.0 * g[0], 4.0 * g[0], 0.1 * g[1], 0.1 * g[1]]
                .iter()
                .map(|v: &f64| libm::cbrt(v * v))
                .sum::<f64>();
        assert!((alpha - (5.6 - inst1)).abs() < 1e-12);
        assert!((alpha - 1.1).abs() < 0.05);
        let beta1 = (4.0 + 16.0 + 0.01 + 0.01) * g[0] * g[0];
        assert!((beta - beta1).abs() < 1e-12);
        assert!(alpha > beta && beta > 0.0);
        let cert = h4_certificate(&net, &b, &prm).unwrap();
        let StabilityCertificate::H4 { gamma, .. } = cert else {
            panic!()
        };
        assert!((gamma - alpha + beta * libm::exp(gamma * 10.0)).abs() < 1e-10);
        assert!(gamma > 0.0);
    }

    #[test]
    fn lyapunov_uncoupled() {
        let mut spec = fixtures::example2();
        for row in spec.weights.iter_mut() {
            for wl in row.iter_mut() {
                for w in wl.iter_mut() {
                    *w = TrigSignal::zero();
                }
            }
        }
        let net = Network::unconstrained(spec).unwrap();
        let b = basin_bounds_a(&ex(2)).unwrap();
        let prm = H4Params::uniform(2, 2, 4.0, 1);
        let (alpha, beta) = lyapunov_alpha_beta(&net, &b, &prm);
        assert!((alpha - 4.0 * 1.4).abs() < 1e-12);
        assert_eq!(beta, 0.0);
        assert_eq!(halanay_gamma(alpha, beta, 10.0), Ok(alpha));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn gamma_solves_its_equation(beta in 0.01..5.0f64, gap in 0.001..5.0f64, kappa in 0.0..20.0f64) {
                let alpha = beta + gap;
                let g = halanay_gamma(alpha, beta, kappa).unwrap();
                prop_assert!(g > 0.0 && g <= alpha - beta);
                prop_assert!((g - alpha + beta * libm::exp(g * kappa)).abs() < 1e-10);
            }
        }
    }
}
