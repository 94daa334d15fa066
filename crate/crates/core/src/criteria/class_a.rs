//! Smooth sigmoid activations: turning points, basin roots, (H1ᴬ)–(H4ᴬ).

use alloc::vec;
use alloc::vec::Vec;

use super::{require_class, BasinBounds, CriteriaError, NeuronBounds};
use crate::activations::ActivationClass;
use crate::mmatrix::SquareMatrix;
use crate::network::Network;
use crate::roots::{bisect, bracket_outward, last_true};

/// `F_i(z) = −sup c_i · z + inf Σ_l a_iil · g_i(σ_i z)`.
pub fn aux_f(net: &Network, i: usize, z: f64) -> f64 {
    let d = net.derived();
    -d.c_sup[i] * z + d.selfgain_inf[i] * net.activation(i).eval(net.gain(i) * z)
}

/// `F_i'(z)`.
pub fn aux_f_deriv(net: &Network, i: usize, z: f64) -> f64 {
    let d = net.derived();
    let s = net.gain(i);
    -d.c_sup[i] + d.selfgain_inf[i] * s * net.activation(i).deriv(s * z)
}

fn slope_ratio(net: &Network, i: usize) -> f64 {
    let d = net.derived();
    d.c_sup[i] / (net.gain(i) * d.selfgain_inf[i])
}

/// Per neuron: `inf ġ_i < sup c_i / (σ_i inf Σ_l a_iil) < sup ġ_i`.
pub fn check_h1a(net: &Network) -> Vec<bool> {
    (0..net.n())
        .map(|i| {
            let act = net.activation(i);
            let r = slope_ratio(net, i);
            act.deriv_inf() < r && r < act.deriv_sup()
        })
        .collect()
}

/// The two points `z_i1 < 0 < z_i2` where `F_i' = 0`.
pub fn inflection_points(net: &Network, i: usize) -> Result<(f64, f64), CriteriaError> {
    let act = net.activation(i);
    if act.class() != ActivationClass::A {
        return Err(CriteriaError::WrongClass {
            i,
            expected: ActivationClass::A,
        });
    }
    let ratio = slope_ratio(net, i);
    if !(act.deriv_inf() < ratio && ratio < act.deriv_sup()) {
        return Err(CriteriaError::H1A { i, ratio });
    }
    let s = net.gain(i);
    // ġ peaks at the origin and decreases away from it on both sides
    let h = |z: f64| act.deriv(s * z) - ratio;
    let side = |dir: f64| -> Result<f64, CriteriaError> {
        let (a, b) = bracket_outward(h, 0.0, dir).ok_or(CriteriaError::H1A { i, ratio })?;
        Ok(bisect(h, a, b))
    };
    Ok((side(-1.0)?, side(1.0)?))
}

/// Per neuron `[k = 1, k = 2]`:
/// `(−1)^k (F_i(z_ik) + J_i) > Σ_l Σ_{j≠i} sup|a_ijl| B_j` with the worst
/// case of `J_i` on each side.
pub fn check_h2a(net: &Network) -> Result<Vec<[bool; 2]>, CriteriaError> {
    require_class(net, ActivationClass::A)?;
    (0..net.n())
        .map(|i| {
            let (z1, z2) = inflection_points(net, i)?;
            let d = net.derived();
            let rhs = net.cross_input_sup(i);
            Ok([
                -(aux_f(net, i, z1) + d.j_sup[i]) > rhs,
                aux_f(net, i, z2) + d.j_inf[i] > rhs,
            ])
        })
        .collect()
}

fn boundary_slope(net: &Network, i: usize, beta1: f64, alpha2: f64) -> f64 {
    let act = net.activation(i);
    let s = net.gain(i);
    act.deriv(s * beta1).max(act.deriv(s * alpha2))
}

/// Basin bounds: `β_i1` and `α_i2` are the outer roots of the shifted
/// auxiliary functions, `β_i2 = −α_i1` is the absorbing bound.
pub fn basin_bounds_a(net: &Network) -> Result<BasinBounds, CriteriaError> {
    let h2 = check_h2a(net)?;
    let d = net.derived();
    let mut neurons = Vec::with_capacity(net.n());
    for i in 0..net.n() {
        for (k, ok) in h2[i].iter().enumerate() {
            if !ok {
                return Err(CriteriaError::H2A { i, k: k as u8 + 1 });
            }
        }
        let (z1, z2) = inflection_points(net, i)?;
        let cross = net.cross_input_sup(i);
        let lower = |z: f64| aux_f(net, i, z) + cross + d.j_sup[i];
        let upper = |z: f64| aux_f(net, i, z) - cross + d.j_inf[i];
        let (a, b) = bracket_outward(lower, z1, -1.0).ok_or(CriteriaError::H2A { i, k: 1 })?;
        let beta1 = bisect(lower, a, b);
        let (a, b) = bracket_outward(upper, z2, 1.0).ok_or(CriteriaError::H2A { i, k: 2 })?;
        let alpha2 = bisect(upper, a, b);
        let beta2 = net.total_input_sup(i) / d.c_inf[i];
        let slope = boundary_slope(net, i, beta1, alpha2);
        neurons.push(NeuronBounds {
            z1: Some(z1),
            z2: Some(z2),
            alpha1: -beta2,
            beta1,
            alpha2,
            beta2,
            slope,
            g: net.gain(i) * slope,
        });
    }
    Ok(BasinBounds {
        class: ActivationClass::A,
        neurons,
    })
}

/// `C − H G` with `G = diag(g_i)`.
pub(crate) fn c_minus_hg(net: &Network, g: &[f64]) -> SquareMatrix {
    let n = net.n();
    let d = net.derived();
    let mut m = SquareMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            let diag = if i == j { d.c_inf[i] } else { 0.0 };
            m[(i, j)] = diag - d.h(i, j) * g[j];
        }
    }
    m
}

/// (H3ᴬ): membership of `C − H G` in the M-matrix set, and the matrix.
pub fn check_h3a(
    net: &Network,
    bounds: &BasinBounds,
) -> Result<(bool, SquareMatrix), CriteriaError> {
    let m = c_minus_hg(net, &bounds.g_diag());
    Ok((m.is_in_m()?, m))
}

/// Moves `β_i1 → z_i1` and `α_i2 → z_i2` along one common parameter and
/// keeps the furthest point where `C − H G` stays an M-matrix.
pub fn enlarge_basins_a(net: &Network, bounds: &BasinBounds) -> Result<BasinBounds, CriteriaError> {
    if !check_h3a(net, bounds)?.0 {
        return Err(CriteriaError::H3A);
    }
    let moved = |lambda: f64| {
        let mut out = bounds.clone();
        for (i, b) in out.neurons.iter_mut().enumerate() {
            let (z1, z2) = (b.z1.unwrap_or(b.beta1), b.z2.unwrap_or(b.alpha2));
            b.beta1 += lambda * (z1 - b.beta1);
            b.alpha2 += lambda * (z2 - b.alpha2);
            b.slope = boundary_slope(net, i, b.beta1, b.alpha2);
            b.g = net.gain(i) * b.slope;
        }
        out
    };
    let in_m = |lambda: f64| c_minus_hg(net, &moved(lambda).g_diag()).is_in_m() == Ok(true);
    // stop short of the turning points so the ordering stays strict
    let lambda = last_true(in_m, 0.0, 1.0 - 1e-9, 1e-12);
    Ok(moved(lambda))
}

/// Exponents and weights of the (H4ᴬ) inequality.
///
/// `q` and `pexp` are indexed by `j * M + l` and hold `m + 1` entries each.
#[derive(Debug, Clone, PartialEq)]
pub struct H4Params {
    pub p: f64,
    pub m: usize,
    pub d: Vec<f64>,
    pub o: Vec<f64>,
    pub q: Vec<Vec<f64>>,
    pub pexp: Vec<Vec<f64>>,
}

impl H4Params {
    /// Equal splits: `o_k = (p − 1)/m`, all exponent weights `1/(m + 1)`,
    /// `d` all ones.
    pub fn uniform(n: usize, pathways: usize, p: f64, m: usize) -> Self {
        let w = vec![1.0 / (m + 1) as f64; m + 1];
        Self {
            p,
            m,
            d: vec![1.0; n],
            o: vec![(p - 1.0) / m as f64; m],
            q: vec![w.clone(); n * pathways],
            pexp: vec![w; n * pathways],
        }
    }

    /// `p = 2`, `m = 1`, `o_1 = 1`, weights `1/2`, `d` all ones.
    pub fn default_for(net: &Network) -> Self {
        Self::uniform(net.n(), net.m(), 2.0, 1)
    }

    pub fn with_d(mut self, d: Vec<f64>) -> Self {
        self.d = d;
        self
    }

    pub fn validate(&self, net: &Network) -> Result<(), CriteriaError> {
        let bad = |what, value| Err(CriteriaError::ParamInvariant { what, value });
        if !(self.p > 1.0) {
            return bad("p > 1", self.p);
        }
        if self.m == 0 || self.o.len() != self.m {
            return bad("o has m > 0 entries", self.o.len() as f64);
        }
        if self.d.len() != net.n() || self.d.iter().any(|&v| !(v > 0.0)) {
            return bad("d has N positive entries", self.d.len() as f64);
        }
        if self.o.iter().any(|&v| !(v > 0.0)) {
            return bad(
                "o positive",
                self.o.iter().cloned().fold(f64::INFINITY, f64::min),
            );
        }
        let osum: f64 = self.o.iter().sum();
        if (osum - (self.p - 1.0)).abs() > 1e-12 {
            return bad("sum of o equals p - 1", osum);
        }
        for (what, table) in [
            ("sum of q equals 1", &self.q),
            ("sum of p exponents equals 1", &self.pexp),
        ] {
            if table.len() != net.n() * net.m() {
                return bad("one exponent row per (j, l)", table.len() as f64);
            }
            for row in table {
                let s: f64 = row.iter().sum();
                if row.len() != self.m + 1
                    || row.iter().any(|&v| v < 0.0)
                    || (s - 1.0).abs() > 1e-12
                {
                    return bad(what, s);
                }
            }
        }
        Ok(())
    }
}

/// `a^{e1} G^{e2}`, dropping pathways whose original product `a·G` is zero.
fn split_term(a: f64, g: f64, e1: f64, e2: f64) -> f64 {
    if a * g == 0.0 {
        0.0
    } else {
        libm::pow(a, e1) * libm::pow(g, e2)
    }
}

/// Per neuron: `(p d_i inf c_i, instantaneous sum, delayed sum)`.
pub(crate) fn h4_terms(
    net: &Network,
    bounds: &BasinBounds,
    prm: &H4Params,
) -> Vec<(f64, f64, f64)> {
    let (n, mm, p, m) = (net.n(), net.m(), prm.p, prm.m);
    let d = net.derived();
    let g = bounds.g_diag();
    (0..n)
        .map(|i| {
            let lhs = p * prm.d[i] * d.c_inf[i];
            let mut inst = 0.0;
            let mut delayed = 0.0;
            for l in 0..mm {
                for j in 0..n {
                    let row_i = i * mm + l;
                    delayed += prm.d[j]
                        * split_term(
                            net.weight_sup(j, i, l),
                            g[i],
                            p * prm.pexp[row_i][m],
                            p * prm.q[row_i][m],
                        );
                    let row_j = j * mm + l;
                    for k in 0..m {
                        let ok = prm.o[k];
                        inst += prm.d[i]
                            * ok
                            * split_term(
                                net.weight_sup(i, j, l),
                                g[j],
                                p * prm.pexp[row_j][k] / ok,
                                p * prm.q[row_j][k] / ok,
                            );
                    }
                }
            }
            (lhs, inst, delayed)
        })
        .collect()
}

/// Per neuron verdict of (H4ᴬ).
pub fn check_h4a(
    net: &Network,
    bounds: &BasinBounds,
    params: &H4Params,
) -> Result<Vec<bool>, CriteriaError> {
    params.validate(net)?;
    Ok(h4_terms(net, bounds, params)
        .into_iter()
        .map(|(lhs, inst, del)| lhs > inst + del)
        .collect())
}

/// Tries the default parameters with `d = 1`, then with `d` taken from the
/// cone vectors of `C − H G` and its transpose. Prefers a choice that also
/// gives `α > β`.
pub fn search_h4_params(net: &Network, bounds: &BasinBounds) -> Option<H4Params> {
    let base = H4Params::default_for(net);
    let m = c_minus_hg(net, &bounds.g_diag());
    let mut candidates = vec![base.clone()];
    for mat in [m.clone(), m.transpose()] {
        if let Ok(Some(z)) = mat.quasidominance_vector() {
            candidates.push(base.clone().with_d(z));
        }
    }
    let passes = |prm: &H4Params| check_h4a(net, bounds, prm).is_ok_and(|v| v.iter().all(|&b| b));
    let contractive = |prm: &H4Params| {
        let (a, b) = super::lyapunov_alpha_beta(net, bounds, prm);
        a > b
    };
    candidates
        .iter()
        .find(|prm| passes(prm) && contractive(prm))
        .or_else(|| candidates.iter().find(|prm| passes(prm)))
        .cloned()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::network::Network;
    use crate::signals::TrigSignal;

    fn ex(id: u8) -> Network {
        Network::new(fixtures::example(id).unwrap()).unwrap()
    }

    fn near(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() < tol
    }

    #[test]
    fn aux_f_example1() {
        let net = ex(1);
        assert_eq!(aux_f(&net, 0, 0.0), 0.0);
        assert!(near(aux_f(&net, 0, 1.3565), 3.3544, 1e-3));
        assert!(near(aux_f(&net, 1, 0.792), 6.7370, 1e-3));
    }

    #[test]
    fn inflection_points_example1() {
        let net = ex(1);
        let (a, b) = inflection_points(&net, 0).unwrap();
        assert!(near(a, -1.3565, 1e-3) && near(b, 1.3565, 1e-3));
        let (a, b) = inflection_points(&net, 1).unwrap();
        assert!(near(a, -0.792, 1e-3) && near(b, 0.792, 1e-3));
        for i in 0..2 {
            let (a, b) = inflection_points(&net, i).unwrap();
            assert!(aux_f_deriv(&net, i, a).abs() < 1e-9 && aux_f_deriv(&net, i, b).abs() < 1e-9);
        }
    }

    #[test]
    fn inflection_points_closed_form() {
        let net = Network::new(fixtures::scalar_autonomous(1.0, 2.0, 0.0)).unwrap();
        let (a, b) = inflection_points(&net, 0).unwrap();
        // sech²(z) = 1/2  ⇔  cosh z = √2  ⇔  z = ln(√2 + 1)
        let oracle = libm::log(core::f64::consts::SQRT_2 + 1.0);
        assert!(near(b, oracle, 1e-12) && near(a, -oracle, 1e-12));
        assert!(near(oracle, 0.8814, 1e-3));
    }

    #[test]
    fn h1a_examples() {
        assert_eq!(check_h1a(&ex(1)), vec![true, true]);
        let mut spec = fixtures::example1();
        spec.decay = spec.decay.iter().map(|c| c.scaled(10.0)).collect();
        let net = Network::new(spec).unwrap();
        assert!(!check_h1a(&net)[0]);
        assert!(matches!(
            inflection_points(&net, 0),
            Err(CriteriaError::H1A { i: 0, .. })
        ));
    }

    #[test]
    fn h2a_examples() {
        assert_eq!(check_h2a(&ex(1)).unwrap(), vec![[true, true]; 2]);
        let mut spec = fixtures::example1();
        spec.inputs[0] = TrigSignal::cos(0.0, 2.0, 5f64.sqrt());
        let verdict = check_h2a(&Network::new(spec).unwrap()).unwrap();
        // 3.3544 − 2.0 = 1.354 < 2
        assert_eq!(verdict[0], [false, false]);
    }

    #[test]
    fn basin_bounds_example1() {
        let b = basin_bounds_a(&ex(1)).unwrap();
        let want = [
            [-11.1458, -1.8190, 1.8190, 11.1458],
            [-6.4372, -0.9095, 0.9095, 6.4372],
        ];
        for (nb, w) in b.neurons.iter().zip(want) {
            let got = [nb.alpha1, nb.beta1, nb.alpha2, nb.beta2];
            for (g, w) in got.iter().zip(w) {
                assert!(near(*g, w, 1e-3), "{got:?} vs {w}");
            }
            assert!(near(nb.slope, 0.1, 1e-3));
        }
        assert!(b.is_ordered());
    }

    #[test]
    fn basin_roots_have_small_residuals() {
        for id in [1, 2] {
            let net = ex(id);
            let b = basin_bounds_a(&net).unwrap();
            let d = net.derived();
            for (i, nb) in b.neurons.iter().enumerate() {
                let s = net.cross_input_sup(i);
                assert!((aux_f(&net, i, nb.beta1) + s + d.j_sup[i]).abs() < 1e-9);
                assert!((aux_f(&net, i, nb.alpha2) - s + d.j_inf[i]).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn basin_roots_match_grid_scan() {
        let net = ex(1);
        let b = basin_bounds_a(&net).unwrap();
        let d = net.derived();
        let s = net.cross_input_sup(0);
        let f = |z: f64| aux_f(&net, 0, z) + s + d.j_sup[0];
        // independent scan: first sign change on a 1e-6 grid left of z_11
        let z1 = b.neurons[0].z1.unwrap();
        let mut k = 0u64;
        let root = loop {
            let z = z1 - k as f64 * 1e-6;
            if f(z) > 0.0 {
                break z;
            }
            k += 1;
        };
        assert!(near(root, b.neurons[0].beta1, 1e-5));
    }

    #[test]
    fn basin_bounds_example2() {
        let b = basin_bounds_a(&ex(2)).unwrap();
        let want = [
            [-6.6754, -1.443, 1.443, 6.6754],
            [-5.2808, -1.0891, 1.0891, 5.2808],
        ];
        for (nb, w) in b.neurons.iter().zip(want) {
            let got = [nb.alpha1, nb.beta1, nb.alpha2, nb.beta2];
            for (g, w) in got.iter().zip(w) {
                assert!(near(*g, w, 1e-3), "{got:?} vs {w}");
            }
        }
        // G entries σ_i ġ_i(ζ)
        assert!(near(b.neurons[0].g, 0.2, 1e-3) && near(b.neurons[1].g, 0.1, 1e-3));
    }

    #[test]
    fn odd_symmetric_network_has_symmetric_bounds() {
        let mut spec = fixtures::example1();
        spec.inputs = vec![TrigSignal::zero(); 2];
        let b = basin_bounds_a(&Network::new(spec).unwrap()).unwrap();
        for nb in &b.neurons {
            assert!(near(nb.beta1, -nb.alpha2, 1e-12));
            assert_eq!(nb.alpha1, -nb.beta2);
        }
    }

    #[test]
    fn f_derivative_sign_pattern() {
        let net = ex(1);
        for i in 0..2 {
            let (z1, z2) = inflection_points(&net, i).unwrap();
            for k in 1..100 {
                let z = z1 + (z2 - z1) * k as f64 / 100.0;
                assert!(aux_f_deriv(&net, i, z) > 0.0);
                assert!(aux_f_deriv(&net, i, z1 - 0.05 * k as f64) < 0.0);
                assert!(aux_f_deriv(&net, i, z2 + 0.05 * k as f64) < 0.0);
            }
        }
    }

    #[test]
    fn h3a_example1() {
        let net = ex(1);
        let b = basin_bounds_a(&net).unwrap();
        let (ok, m) = check_h3a(&net, &b).unwrap();
        assert!(ok);
        // direct assembly from C = diag(1, 2.9), H = [[8, 2], [2, 12]], G = diag(σ_i ġ_i)
        let g = b.g_diag();
        let oracle = [
            1.0 - 8.0 * g[0],
            -2.0 * g[1],
            -2.0 * g[0],
            2.9 - 12.0 * g[1],
        ];
        for (x, y) in m.as_slice().iter().zip(oracle) {
            assert!(near(*x, y, 1e-12));
        }
    }

    #[test]
    fn h3a_fails_with_inflated_self_weight() {
        let net = ex(1);
        let mut b = basin_bounds_a(&net).unwrap();
        // ℏ_11 G_1 pushed to 1.1 > inf c_1
        b.neurons[0].g = 1.1 / 8.0;
        let (ok, m) = check_h3a(&net, &b).unwrap();
        assert!(!ok && m[(0, 0)] < 0.0);
    }

    #[test]
    fn enlarge_example1() {
        let net = ex(1);
        let b = basin_bounds_a(&net).unwrap();
        let e = enlarge_basins_a(&net, &b).unwrap();
        assert!(e.is_ordered());
        assert!(near(e.neurons[0].alpha2, 1.77, 0.05), "{:?}", e.neurons[0]);
        assert!(near(e.neurons[1].alpha2, 0.9, 0.05), "{:?}", e.neurons[1]);
        assert!(e.neurons[0].beta1 >= b.neurons[0].beta1);
        assert!(check_h3a(&net, &e).unwrap().0);
    }

    fn ex2_h4() -> H4Params {
        H4Params::uniform(2, 2, 4.0, 1)
    }

    #[test]
    fn h4a_example2() {
        let net = ex(2);
        let b = basin_bounds_a(&net).unwrap();
        assert_eq!(check_h4a(&net, &b, &ex2_h4()).unwrap(), vec![true, true]);
        // direct evaluation with p = 4, o_1 = 3 and all weights 1/2
        let g = b.g_diag();
        let a = |i: usize, j: usize, l: usize| net.weight_sup(i, j, l);
        let terms = h4_terms(&net, &b, &ex2_h4());
        for i in 0..2 {
            let mut rhs = 0.0;
            for j in 0..2 {
                for l in 0..2 {
                    rhs += (a(j, i, l) * g[i]).powi(2);
                    rhs += 3.0 * libm::cbrt((a(i, j, l) * g[j]).powi(2));
                }
            }
            assert!(near(terms[i].1 + terms[i].2, rhs, 1e-12));
        }
        assert!(near(terms[0].0, 5.6, 1e-12) && near(terms[1].0, 12.4, 1e-12));
        assert!(near(terms[0].1 + terms[0].2, 5.29, 0.05));
        assert!(near(terms[1].1 + terms[1].2, 4.73, 0.05));
    }

    #[test]
    fn h4a_fails_with_heavy_weights() {
        let mut spec = fixtures::example2();
        for row in spec.weights.iter_mut() {
            for wl in row.iter_mut() {
                for w in wl.iter_mut() {
                    *w = w.scaled(10.0);
                }
            }
        }
        let net = Network::new(spec).unwrap();
        // keep the original slopes so only the weights change
        let b = basin_bounds_a(&ex(2)).unwrap();
        assert!(check_h4a(&net, &b, &ex2_h4())
            .unwrap()
            .iter()
            .any(|&ok| !ok));
    }

    #[test]
    fn h4a_uncoupled_tiny_weights() {
        let mut spec = fixtures::example2();
        for (i, row) in spec.weights.iter_mut().enumerate() {
            for (j, wl) in row.iter_mut().enumerate() {
                for w in wl.iter_mut() {
                    *w = if i == j {
                        TrigSignal::constant(1e-3)
                    } else {
                        TrigSignal::zero()
                    };
                }
            }
        }
        let net = Network::unconstrained(spec).unwrap();
        let b = basin_bounds_a(&ex(2)).unwrap();
        assert_eq!(check_h4a(&net, &b, &ex2_h4()).unwrap(), vec![true, true]);
    }

    #[test]
    fn h4a_param_invariants() {
        let net = ex(2);
        let b = basin_bounds_a(&net).unwrap();
        let mut prm = ex2_h4();
        prm.o = vec![2.5];
        assert!(matches!(
            check_h4a(&net, &b, &prm),
            Err(CriteriaError::ParamInvariant { .. })
        ));
        let mut prm = ex2_h4();
        prm.q[1] = vec![0.5, 0.6];
        assert!(matches!(
            check_h4a(&net, &b, &prm),
            Err(CriteriaError::ParamInvariant { .. })
        ));
    }

    #[test]
    fn h4_search_finds_example2_params() {
        let net = ex(2);
        let b = basin_bounds_a(&net).unwrap();
        let prm = search_h4_params(&net, &b).unwrap();
        assert!(check_h4a(&net, &b, &prm).unwrap().iter().all(|&v| v));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(1000))]

            // Young-type inequality behind the H4 splitting:
            // y Π x_k^{p_k} ≤ (1/p) Σ p_k x_k^p + (1/p) y^p with Σ p_k = p − 1.
            #[test]
            fn young_type_inequality(
                p in 1.01..6.0f64,
                y in 0.0..10.0f64,
                raw in proptest::collection::vec((0.0..10.0f64, 0.05..1.0f64), 1..5),
            ) {
                let wsum: f64 = raw.iter().map(|(_, w)| w).sum();
                let pk: Vec<f64> = raw.iter().map(|(_, w)| w / wsum * (p - 1.0)).collect();
                let lhs = y * raw.iter().zip(&pk).map(|((x, _), e)| libm::pow(*x, *e)).product::<f64>();
                let rhs = raw.iter().zip(&pk).map(|((x, _), e)| e * libm::pow(*x, p)).sum::<f64>() / p
                    + libm::pow(y, p) / p;
                prop_assert!(lhs <= rhs * (1.0 + 1e-12) + 1e-12, "{lhs} > {rhs}");
            }

            #[test]
            fn h4a_verdict_is_scale_invariant_in_d(lambda in 0.01..100.0f64) {
                let net = ex(2);
                let b = basin_bounds_a(&net).unwrap();
                let base = ex2_h4();
                let scaled = base.clone().with_d(base.d.iter().map(|v| v * lambda).collect());
                prop_assert_eq!(check_h4a(&net, &b, &base).unwrap(), check_h4a(&net, &b, &scaled).unwrap());
            }
        }
    }
}
