//! JSON network spec files.
//!
//! ```json
//! {
//!   "N": 2, "M": 1,
//!   "c": [{"offset": 1.0, "terms": [{"amp": 0.2, "omega": 2.0, "phase": 0.0, "shape": "cos"}]}, ...],
//!   "a": [[[signal]]], "kappa": [[[signal]]], "J": [signal],
//!   "sigma": [1.0, 2.0],
//!   "activations": [{"kind": "tanh"}, {"kind": "classB_pwl", "l1": -1, "l2": 1, "u1": -1, "u2": 1}]
//! }
//! ```
//!
//! Coupling arrays nest as `[i][j][l]`.

use std::path::Path;

use multistab_core::activations::{Saturated, Sigmoid, SigmoidShape};
use multistab_core::signals::Shape;
use multistab_core::{Activation, NetworkSpec, Term, TrigSignal};
use serde::{Deserialize, Serialize};

use crate::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ShapeDto {
    Sin,
    Cos,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermDto {
    pub amp: f64,
    pub omega: f64,
    #[serde(default)]
    pub phase: f64,
    pub shape: ShapeDto,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SignalDto {
    #[serde(default)]
    pub offset: f64,
    #[serde(default)]
    pub terms: Vec<TermDto>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SigmoidShapeDto {
    Tanh,
    Arctan,
    Algebraic,
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", deny_unknown_fields)]
pub enum ActivationDto {
    #[serde(rename = "tanh")]
    Tanh {},
    #[serde(rename = "satlin")]
    Satlin {},
    /// `amplitude · shape(slope · x)`
    #[serde(rename = "classA_custom")]
    ClassACustom {
        shape: SigmoidShapeDto,
        #[serde(default = "one")]
        amplitude: f64,
        #[serde(default = "one")]
        slope: f64,
    },
    #[serde(rename = "classB_pwl")]
    ClassBPwl { l1: f64, l2: f64, u1: f64, u2: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecFile {
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "M")]
    pub m: usize,
    pub c: Vec<SignalDto>,
    pub a: Vec<Vec<Vec<SignalDto>>>,
    pub kappa: Vec<Vec<Vec<SignalDto>>>,
    #[serde(rename = "J")]
    pub j: Vec<SignalDto>,
    pub sigma: Vec<f64>,
    pub activations: Vec<ActivationDto>,
}

impl From<&TrigSignal> for SignalDto {
    fn from(s: &TrigSignal) -> Self {
        let terms = s
            .terms()
            .iter()
            .map(|t| TermDto {
                amp: t.amplitude,
                omega: t.omega,
                phase: t.phase,
                shape: match t.shape {
                    Shape::Sin => ShapeDto::Sin,
                    Shape::Cos => ShapeDto::Cos,
                },
            })
            .collect();
        SignalDto {
            offset: s.offset(),
            terms,
        }
    }
}

impl From<&SignalDto> for TrigSignal {
    fn from(s: &SignalDto) -> Self {
        let terms = s
            .terms
            .iter()
            .map(|t| Term {
                amplitude: t.amp,
                omega: t.omega,
                phase: t.phase,
                shape: match t.shape {
                    ShapeDto::Sin => Shape::Sin,
                    ShapeDto::Cos => Shape::Cos,
                },
            })
            .collect();
        TrigSignal::new(s.offset, terms)
    }
}

impl ActivationDto {
    pub fn to_activation(&self) -> Activation {
        match *self {
            ActivationDto::Tanh {} => Activation::tanh(),
            ActivationDto::Satlin {} => Activation::satlin(),
            ActivationDto::ClassACustom {
                shape,
                amplitude,
                slope,
            } => {
                let shape = match shape {
                    SigmoidShapeDto::Tanh => SigmoidShape::Tanh,
                    SigmoidShapeDto::Arctan => SigmoidShape::Arctan,
                    SigmoidShapeDto::Algebraic => SigmoidShape::Algebraic,
                };
                Activation::ClassA(Sigmoid {
                    shape,
                    amplitude,
                    slope,
                })
            }
            ActivationDto::ClassBPwl { l1, l2, u1, u2 } => {
                Activation::ClassB(Saturated { l1, l2, u1, u2 })
            }
        }
    }

    /// Fails for sigmoids built from function pointers.
    pub fn from_activation(act: &Activation) -> Result<Self, Error> {
        if *act == Activation::tanh() {
            return Ok(ActivationDto::Tanh {});
        }
        if *act == Activation::satlin() {
            return Ok(ActivationDto::Satlin {});
        }
        Ok(match *act {
            Activation::ClassA(Sigmoid {
                shape,
                amplitude,
                slope,
            }) => {
                let shape = match shape {
                    SigmoidShape::Tanh => SigmoidShapeDto::Tanh,
                    SigmoidShape::Arctan => SigmoidShapeDto::Arctan,
                    SigmoidShape::Algebraic => SigmoidShapeDto::Algebraic,
                    SigmoidShape::Custom { .. } => {
                        return Err(Error::SpecParse(
                            "custom sigmoid shapes cannot be serialized".into(),
                        ))
                    }
                };
                ActivationDto::ClassACustom {
                    shape,
                    amplitude,
                    slope,
                }
            }
            Activation::ClassB(Saturated { l1, l2, u1, u2 }) => {
                ActivationDto::ClassBPwl { l1, l2, u1, u2 }
            }
        })
    }
}

fn nested<T, U>(v: &[Vec<Vec<T>>], f: impl Fn(&T) -> U) -> Vec<Vec<Vec<U>>> {
    v.iter()
        .map(|row| {
            row.iter()
                .map(|cell| cell.iter().map(&f).collect())
                .collect()
        })
        .collect()
}

impl SpecFile {
    pub fn from_spec(spec: &NetworkSpec) -> Result<Self, Error> {
        Ok(SpecFile {
            n: spec.n,
            m: spec.m,
            c: spec.decay.iter().map(SignalDto::from).collect(),
            a: nested(&spec.weights, |s| SignalDto::from(s)),
            kappa: nested(&spec.delays, |s| SignalDto::from(s)),
            j: spec.inputs.iter().map(SignalDto::from).collect(),
            sigma: spec.gains.clone(),
            activations: spec
                .activations
                .iter()
                .map(ActivationDto::from_activation)
                .collect::<Result<_, _>>()?,
        })
    }

    /// Shape is checked later by `Network::new`.
    pub fn to_spec(&self) -> NetworkSpec {
        NetworkSpec {
            n: self.n,
            m: self.m,
            decay: self.c.iter().map(TrigSignal::from).collect(),
            weights: nested(&self.a, |s| TrigSignal::from(s)),
            delays: nested(&self.kappa, |s| TrigSignal::from(s)),
            inputs: self.j.iter().map(TrigSignal::from).collect(),
            gains: self.sigma.clone(),
            activations: self
                .activations
                .iter()
                .map(ActivationDto::to_activation)
                .collect(),
        }
    }
}

pub fn parse_spec(text: &str) -> Result<NetworkSpec, Error> {
    let file: SpecFile = serde_json::from_str(text).map_err(|e| Error::SpecParse(e.to_string()))?;
    Ok(file.to_spec())
}

pub fn read_spec(path: &Path) -> Result<NetworkSpec, Error> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.to_owned(),
        source: e,
    })?;
    parse_spec(&text).map_err(|e| match e {
        Error::SpecParse(msg) => Error::SpecParse(format!("{}: {msg}", path.display())),
        other => other,
    })
}

pub fn spec_to_json(spec: &NetworkSpec) -> Result<String, Error> {
    Ok(serde_json::to_string_pretty(&SpecFile::from_spec(spec)?)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use multistab_core::fixtures;

    #[test]
    fn fixtures_round_trip() {
        for id in 1..=4 {
            let spec = fixtures::example(id).unwrap();
            assert_eq!(parse_spec(&spec_to_json(&spec).unwrap()).unwrap(), spec);
        }
    }

    #[test]
    fn minimal_file() {
        let text = r#"{"N":1,"M":1,"c":[{"offset":1}],"a":[[[{"offset":3}]]],"kappa":[[[{}]]],
            "J":[{"terms":[{"amp":0.5,"omega":2,"shape":"sin"}]}],"sigma":[1],
            "activations":[{"kind":"classB_pwl","l1":-2,"l2":1,"u1":-1,"u2":1}]}"#;
        let spec = parse_spec(text).unwrap();
        assert_eq!(spec.inputs[0], TrigSignal::sin(0.0, 0.5, 2.0));
        assert_eq!(
            spec.activations[0],
            Activation::ClassB(Saturated {
                l1: -2.0,
                l2: 1.0,
                u1: -1.0,
                u2: 1.0
            })
        );
        assert!(spec.delays[0][0][0].is_zero());
    }

    #[test]
    fn custom_sigmoid() {
        let dto: ActivationDto =
            serde_json::from_str(r#"{"kind":"classA_custom","shape":"arctan","slope":2}"#).unwrap();
        let act = dto.to_activation();
        assert_eq!(
            act,
            Activation::ClassA(Sigmoid {
                shape: SigmoidShape::Arctan,
                amplitude: 1.0,
                slope: 2.0
            })
        );
        assert_eq!(ActivationDto::from_activation(&act).unwrap(), dto);
    }

    #[test]
    fn unknown_fields_are_rejected() {
        assert!(matches!(parse_spec(r#"{"N":1}"#), Err(Error::SpecParse(_))));
        let bad = r#"{"kind":"tanh","gain":2}"#;
        assert!(serde_json::from_str::<ActivationDto>(bad).is_err());
    }
}
