//! Saturated activations: (H1ᴮ), (H2ᴮ) and the closed-form basin roots.

use alloc::vec::Vec;

use super::{require_class, BasinBounds, CriteriaError, NeuronBounds};
use crate::activations::{ActivationClass, Saturated};
use crate::network::Network;

fn saturated(net: &Network, i: usize) -> Result<&Saturated, CriteriaError> {
    net.activation(i)
        .saturated()
        .ok_or(CriteriaError::WrongClass {
            i,
            expected: ActivationClass::B,
        })
}

/// Per neuron: `sup c_i < inf Σ_l a_iil · σ_i · min g̃_i'`.
pub fn check_h1b(net: &Network) -> Result<Vec<bool>, CriteriaError> {
    require_class(net, ActivationClass::B)?;
    let d = net.derived();
    Ok((0..net.n())
        .map(|i| {
            let slope = net.activation(i).interior_slope_min().unwrap_or(0.0);
            d.c_sup[i] < d.selfgain_inf[i] * net.gain(i) * slope
        })
        .collect())
}

/// Per neuron `[k = 1, k = 2]`:
/// `(−1)^k (−sup c_i ℓ_ik/σ_i + inf Σ_l a_iil u_ik + J_i) > Σ_l Σ_{j≠i} sup|a_ijl| max_k|u_jk|`.
pub fn check_h2b(net: &Network) -> Result<Vec<[bool; 2]>, CriteriaError> {
    require_class(net, ActivationClass::B)?;
    let d = net.derived();
    (0..net.n())
        .map(|i| {
            let b = saturated(net, i)?;
            let s = net.gain(i);
            let rhs = net.cross_input_sup(i);
            let k1 = -(-d.c_sup[i] * b.l1 / s + d.selfgain_inf[i] * b.u1 + d.j_sup[i]);
            let k2 = -d.c_sup[i] * b.l2 / s + d.selfgain_inf[i] * b.u2 + d.j_inf[i];
            Ok([k1 > rhs, k2 > rhs])
        })
        .collect()
}

/// Basin bounds. In the saturated region `F_i` is affine, so the roots
/// are explicit.
pub fn basin_bounds_b(net: &Network) -> Result<BasinBounds, CriteriaError> {
    let h1 = check_h1b(net)?;
    let h2 = check_h2b(net)?;
    let d = net.derived();
    let mut neurons = Vec::with_capacity(net.n());
    for i in 0..net.n() {
        if !h1[i] {
            return Err(CriteriaError::H1B { i });
        }
        for (k, ok) in h2[i].iter().enumerate() {
            if !ok {
                return Err(CriteriaError::H2B { i, k: k as u8 + 1 });
            }
        }
        let b = saturated(net, i)?;
        let s = net.gain(i);
        let cross = net.cross_input_sup(i);
        let beta1 = (d.selfgain_inf[i] * b.u1 + cross + d.j_sup[i]) / d.c_sup[i];
        let alpha2 = (d.selfgain_inf[i] * b.u2 - cross + d.j_inf[i]) / d.c_sup[i];
        if !(beta1 < b.l1 / s) {
            return Err(CriteriaError::H2B { i, k: 1 });
        }
        if !(alpha2 > b.l2 / s) {
            return Err(CriteriaError::H2B { i, k: 2 });
        }
        let beta2 = net.total_input_sup(i) / d.c_inf[i];
        neurons.push(NeuronBounds {
            z1: None,
            z2: None,
            alpha1: -beta2,
            beta1,
            alpha2,
            beta2,
            slope: 0.0,
            g: 0.0,
        });
    }
    Ok(BasinBounds {
        class: ActivationClass::B,
        neurons,
    })
}

/// Attracting basins reaching the edge of the saturated region:
/// `β_i1 = ℓ_i1/σ_i`, `α_i2 = ℓ_i2/σ_i`.
pub fn enlarge_basins_b(net: &Network, bounds: &BasinBounds) -> Result<BasinBounds, CriteriaError> {
    let mut out = bounds.clone();
    for (i, nb) in out.neurons.iter_mut().enumerate() {
        let b = saturated(net, i)?;
        nb.beta1 = b.l1 / net.gain(i);
        nb.alpha2 = b.l2 / net.gain(i);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::activations::Activation;
    use crate::criteria::check_h3a;
    use crate::fixtures;
    use crate::signals::TrigSignal;
    use alloc::vec;

    fn ex(id: u8) -> Network {
        Network::new(fixtures::example(id).unwrap()).unwrap()
    }

    fn assert_table(b: &BasinBounds, want: [[f64; 4]; 2]) {
        for (nb, w) in b.neurons.iter().zip(want) {
            let got = [nb.alpha1, nb.beta1, nb.alpha2, nb.beta2];
            for (g, w) in got.iter().zip(w) {
                assert!((g - w).abs() < 1e-3, "{got:?} vs {w:?}");
            }
        }
    }

    #[test]
    fn h1b_examples() {
        assert_eq!(check_h1b(&ex(3)).unwrap(), vec![true, true]);
        let mut spec = fixtures::example3();
        spec.gains[0] = 0.25;
        // 2 > 6 · 0.25 · 1
        assert!(!check_h1b(&Network::new(spec).unwrap()).unwrap()[0]);
        assert!(matches!(
            check_h1b(&ex(1)),
            Err(CriteriaError::WrongClass { i: 0, .. })
        ));
    }

    #[test]
    fn h2b_examples() {
        let net = ex(3);
        let d = net.derived();
        // −2·1/0.5 + 6·1 − 0.2 = 1.8 against 0.1 + 0.1
        let margin = -d.c_sup[0] / 0.5 + d.selfgain_inf[0] - 0.2;
        assert!((margin - 1.8).abs() < 1e-12);
        assert!((net.cross_input_sup(0) - 0.2).abs() < 1e-12);
        assert_eq!(check_h2b(&net).unwrap(), vec![[true, true]; 2]);
        assert_eq!(check_h2b(&ex(4)).unwrap()[1], [true, true]);

        let mut spec = fixtures::example3();
        spec.inputs[0] = TrigSignal::sin(0.0, 2.0, 3.0);
        let v = check_h2b(&Network::new(spec).unwrap()).unwrap();
        assert_eq!(v[0], [false, false]);
    }

    #[test]
    fn basin_bounds_example3() {
        let b = basin_bounds_b(&ex(3)).unwrap();
        assert_table(&b, [[-8.4, -2.8, 2.8, 8.4], [-24.9, -7.55, 7.55, 24.9]]);
        assert!(b.is_ordered());
        assert!(b.neurons.iter().all(|n| n.slope == 0.0));
    }

    #[test]
    fn basin_bounds_example4() {
        let b = basin_bounds_b(&ex(4)).unwrap();
        assert_table(
            &b,
            [[-13.4, -6.3, 6.3, 13.4], [-20.75, -11.55, 11.55, 20.75]],
        );
        assert!(b.is_ordered());
    }

    #[test]
    fn roots_solve_the_affine_equations() {
        for id in [3, 4] {
            let net = ex(id);
            let b = basin_bounds_b(&net).unwrap();
            let d = net.derived();
            for (i, nb) in b.neurons.iter().enumerate() {
                let s = net.cross_input_sup(i);
                assert!((super::super::aux_f(&net, i, nb.beta1) + s + d.j_sup[i]).abs() < 1e-9);
                assert!((super::super::aux_f(&net, i, nb.alpha2) - s + d.j_inf[i]).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn symmetric_inputs_give_symmetric_roots() {
        let mut spec = fixtures::example3();
        spec.inputs = vec![TrigSignal::zero(); 2];
        let b = basin_bounds_b(&Network::new(spec).unwrap()).unwrap();
        for nb in &b.neurons {
            assert_eq!(nb.beta1, -nb.alpha2);
        }
    }

    #[test]
    fn enlarged_example3() {
        let net = ex(3);
        let e = enlarge_basins_b(&net, &basin_bounds_b(&net).unwrap()).unwrap();
        assert_eq!((e.neurons[0].beta1, e.neurons[0].alpha2), (-2.0, 2.0));
        assert_eq!((e.neurons[1].beta1, e.neurons[1].alpha2), (-4.0, 4.0));
        assert!(e.is_ordered());
    }

    #[test]
    fn enlarged_unit_gain() {
        let mut spec = fixtures::example3();
        spec.gains = vec![1.0, 1.0];
        spec.activations = vec![Activation::satlin(); 2];
        let net = Network::new(spec).unwrap();
        let e = enlarge_basins_b(&net, &basin_bounds_b(&net).unwrap()).unwrap();
        for nb in &e.neurons {
            assert_eq!((nb.beta1, nb.alpha2), (-1.0, 1.0));
        }
    }

    #[test]
    fn saturated_basins_give_c_matrix() {
        let net = ex(3);
        let b = basin_bounds_b(&net).unwrap();
        let (ok, m) = check_h3a(&net, &b).unwrap();
        assert!(ok);
        assert_eq!(m.as_slice(), &[1.0, 0.0, 0.0, 0.5]);
    }
}
