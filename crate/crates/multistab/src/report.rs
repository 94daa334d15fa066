//! Serializable reports for the `verify` and `patterns` commands, and their
//! plain-text renderings.

use std::fmt::Write as _;

use multistab_core::criteria::{BasinBounds, H4Params, NeuronBounds, VerifyReport};
use multistab_core::ActivationClass;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NeuronBoundsJson {
    pub z1: Option<f64>,
    pub z2: Option<f64>,
    pub alpha1: f64,
    pub beta1: f64,
    pub alpha2: f64,
    pub beta2: f64,
    pub slope: f64,
    pub g: f64,
}

impl From<&NeuronBounds> for NeuronBoundsJson {
    fn from(b: &NeuronBounds) -> Self {
        Self {
            z1: b.z1,
            z2: b.z2,
            alpha1: b.alpha1,
            beta1: b.beta1,
            alpha2: b.alpha2,
            beta2: b.beta2,
            slope: b.slope,
            g: b.g,
        }
    }
}

fn bounds_json(b: &BasinBounds) -> Vec<NeuronBoundsJson> {
    b.neurons.iter().map(NeuronBoundsJson::from).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct H4ParamsJson {
    pub p: f64,
    pub m: usize,
    pub d: Vec<f64>,
    pub o: Vec<f64>,
    pub q: Vec<Vec<f64>>,
    pub pexp: Vec<Vec<f64>>,
}

impl From<&H4Params> for H4ParamsJson {
    fn from(h: &H4Params) -> Self {
        Self {
            p: h.p,
            m: h.m,
            d: h.d.clone(),
            o: h.o.clone(),
            q: h.q.clone(),
            pexp: h.pexp.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyJson {
    pub class: String,
    pub passed: bool,
    pub h1a: Option<Vec<bool>>,
    pub h2a: Option<Vec<[bool; 2]>>,
    pub h3a: Option<bool>,
    pub c_minus_hg: Option<Vec<Vec<f64>>>,
    pub h4a: Option<Vec<bool>>,
    pub h4_params: Option<H4ParamsJson>,
    pub h1b: Option<Vec<bool>>,
    pub h2b: Option<Vec<[bool; 2]>>,
    pub bounds: Option<Vec<NeuronBoundsJson>>,
    pub enlarged: Option<Vec<NeuronBoundsJson>>,
    pub mu: Option<f64>,
    pub gamma: Option<f64>,
    pub failure: Option<String>,
}

fn finite(v: Option<f64>) -> Option<f64> {
    v.filter(|x| x.is_finite())
}

impl From<&VerifyReport> for VerifyJson {
    fn from(r: &VerifyReport) -> Self {
        Self {
            class: match r.class {
                ActivationClass::A => "A".into(),
                ActivationClass::B => "B".into(),
            },
            passed: r.passed(),
            h1a: r.h1a.clone(),
            h2a: r.h2a.clone(),
            h3a: r.h3a,
            c_minus_hg: r
                .c_minus_hg
                .as_ref()
                .map(|m| m.rows().map(<[f64]>::to_vec).collect()),
            h4a: r.h4a.clone(),
            h4_params: r.h4_params.as_ref().map(H4ParamsJson::from),
            h1b: r.h1b.clone(),
            h2b: r.h2b.clone(),
            bounds: r.bounds.as_ref().map(bounds_json),
            enlarged: r.enlarged.as_ref().map(bounds_json),
            mu: finite(r.mu),
            gamma: finite(r.gamma),
            failure: r.failure.as_ref().map(|e| e.to_string()),
        }
    }
}

fn flags(v: &[bool]) -> String {
    v.iter()
        .map(|&b| if b { "true" } else { "false" })
        .collect::<Vec<_>>()
        .join(", ")
}

fn pair_flags(v: &[[bool; 2]]) -> String {
    v.iter()
        .map(|p| format!("({})", flags(p)))
        .collect::<Vec<_>>()
        .join(", ")
}

fn bounds_table(out: &mut String, title: &str, b: &[NeuronBoundsJson]) {
    let _ = writeln!(out, "{title}");
    let _ = writeln!(
        out,
        "  {:>3} {:>11} {:>11} {:>11} {:>11} {:>9} {:>9}",
        "i", "alpha1", "beta1", "alpha2", "beta2", "slope", "G"
    );
    for (i, n) in b.iter().enumerate() {
        let _ = writeln!(
            out,
            "  {:>3} {:>11.4} {:>11.4} {:>11.4} {:>11.4} {:>9.4} {:>9.4}",
            i + 1,
            n.alpha1,
            n.beta1,
            n.alpha2,
            n.beta2,
            n.slope,
            n.g
        );
    }
}

impl VerifyJson {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "activation class {}", self.class);
        let line = |out: &mut String, name: &str, v: Option<String>| {
            if let Some(v) = v {
                let _ = writeln!(out, "  {name:<4} {v}");
            }
        };
        line(&mut out, "H1A", self.h1a.as_deref().map(flags));
        line(&mut out, "H2A", self.h2a.as_deref().map(pair_flags));
        line(&mut out, "H3A", self.h3a.map(|b| b.to_string()));
        line(&mut out, "H4A", self.h4a.as_deref().map(flags));
        line(&mut out, "H1B", self.h1b.as_deref().map(flags));
        line(&mut out, "H2B", self.h2b.as_deref().map(pair_flags));
        if let Some(m) = &self.c_minus_hg {
            let _ = writeln!(out, "C - HG");
            for row in m {
                let cells: Vec<String> = row.iter().map(|v| format!("{v:>10.4}")).collect();
                let _ = writeln!(out, "  {}", cells.join(" "));
            }
        }
        if let Some(b) = &self.bounds {
            bounds_table(&mut out, "basin bounds", b);
        }
        if let Some(b) = &self.enlarged {
            bounds_table(&mut out, "enlarged anchors", b);
        }
        if let Some(mu) = self.mu {
            let _ = writeln!(out, "mu    {mu:.6}");
        }
        if let Some(g) = self.gamma {
            let _ = writeln!(out, "gamma {g:.6}");
        }
        if let Some(f) = &self.failure {
            let _ = writeln!(out, "failure: {f}");
        }
        let _ = writeln!(out, "{}", if self.passed { "PASSED" } else { "FAILED" });
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InvarianceJson {
    pub trials: usize,
    pub t_end: f64,
    pub max_violation: f64,
    pub escaped: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PatternJson {
    pub sigma: Vec<u8>,
    /// Componentwise `[min, max]` over the window.
    pub ranges: Option<Vec<[f64; 2]>>,
    pub max_violation: Option<f64>,
    pub residual: Option<f64>,
    pub decay_rate: Option<f64>,
    pub invariance: Option<InvarianceJson>,
    pub error: Option<String>,
}

impl PatternJson {
    pub fn contained(&self) -> bool {
        self.error.is_none()
            && self
                .max_violation
                .is_some_and(|v| v <= multistab_core::patterns::CONTAINMENT_TOL)
            && self.invariance.as_ref().is_none_or(|r| r.escaped == 0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PatternsJson {
    pub seed: u64,
    pub dt: f64,
    pub transient: f64,
    pub window: f64,
    pub tail_tol: f64,
    pub patterns: Vec<PatternJson>,
    pub min_separation: Option<f64>,
    pub passed: bool,
}

fn opt(v: Option<f64>, prec: usize) -> String {
    v.map_or_else(|| "-".into(), |x| format!("{x:.prec$e}"))
}

impl PatternsJson {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "seed {}  dt {}  transient {}  window {}  tail_tol {:e}",
            self.seed, self.dt, self.transient, self.window, self.tail_tol
        );
        for p in &self.patterns {
            let sigma: Vec<String> = p.sigma.iter().map(u8::to_string).collect();
            let _ = write!(out, "({})", sigma.join(","));
            match &p.error {
                Some(e) => {
                    let _ = writeln!(out, "  error: {e}");
                }
                None => {
                    if let Some(r) = &p.ranges {
                        let parts: Vec<String> =
                            r.iter().map(|[a, b]| format!("[{a:.4}, {b:.4}]")).collect();
                        let _ = write!(out, "  range {}", parts.join(" x "));
                    }
                    let _ = write!(
                        out,
                        "  violation {}  residual {}  decay {}",
                        opt(p.max_violation, 2),
                        opt(p.residual, 2),
                        p.decay_rate
                            .map_or_else(|| "-".into(), |d| format!("{d:.4}"))
                    );
                    if let Some(inv) = &p.invariance {
                        let _ = write!(out, "  invariance {}/{} escaped", inv.escaped, inv.trials);
                    }
                    let _ = writeln!(out);
                }
            }
        }
        if let Some(s) = self.min_separation {
            let _ = writeln!(out, "min pairwise separation {s:.4}");
        }
        let _ = writeln!(out, "{}", if self.passed { "PASSED" } else { "FAILED" });
        out
    }
}
