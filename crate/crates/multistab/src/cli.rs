//! Command-line front end.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use multistab_core::criteria::{basin_bounds, verify};
use multistab_core::dde::{integrate, InitialFunction};
use multistab_core::patterns::Axis;
use multistab_core::{fixtures, Network, NetworkSpec};

use crate::analysis::{analyze_patterns, parallel_sweep, PatternsConfig};
use crate::output::{gnuplot_script, write_sweep, write_trajectory};
use crate::report::VerifyJson;
use crate::spec::{read_spec, spec_to_json};
use crate::Error;

#[derive(Debug, Parser)]
#[command(
    name = "multistab",
    version,
    about = "Multistability analysis of delayed neural networks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the existence and stability hypotheses of a spec file.
    Verify {
        /// Network spec file (JSON).
        spec: PathBuf,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Integrate a spec file from a constant initial function.
    Simulate {
        /// Network spec file (JSON).
        spec: PathBuf,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Locate and check all 2^N patterns.
    Patterns {
        /// Network spec file (JSON).
        spec: PathBuf,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Classify a grid of constant initial states by their limit pattern.
    Basins {
        /// Network spec file (JSON).
        spec: PathBuf,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Run a built-in reference network (1-4).
    Example {
        /// Example number.
        id: u32,
        #[command(flatten)]
        action: ExampleAction,
        #[command(flatten)]
        run: RunArgs,
    },
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct ExampleAction {
    /// Check the hypotheses and print the basin bounds.
    #[arg(long)]
    pub verify: bool,
    /// Integrate from a constant initial state.
    #[arg(long)]
    pub simulate: bool,
    /// Locate and check all 2^N patterns.
    #[arg(long)]
    pub patterns: bool,
    /// Classify a grid of constant initial states.
    #[arg(long)]
    pub basins: bool,
    /// Print the network as a spec file.
    #[arg(long)]
    pub emit_spec: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    /// Final time (simulate: 100, basins: 100, invariance runs: 200).
    #[arg(long)]
    pub t_end: Option<f64>,
    /// Integration step.
    #[arg(long, default_value_t = 0.01)]
    pub dt: f64,
    /// Settling time before the pattern window (default 100 max(kappa, 1)).
    #[arg(long)]
    pub transient: Option<f64>,
    /// Observation window (default 10 max(kappa, 1)).
    #[arg(long)]
    pub window: Option<f64>,
    /// Sweep grid as `min:max:count` per axis, comma separated.
    #[arg(long, allow_hyphen_values = true)]
    pub grid: Option<String>,
    /// Seed for the random invariance starts.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Random invariance starts per pattern (0 skips the check).
    #[arg(long, default_value_t = 0)]
    pub trials: usize,
    /// Truncation tolerance of the fixed-point residual integral.
    #[arg(long, default_value_t = 1e-8)]
    pub tail_tol: f64,
    /// Constant initial state for simulate, comma separated.
    #[arg(long, allow_hyphen_values = true)]
    pub phi: Option<String>,
    /// Keep every k-th trajectory row.
    #[arg(long, default_value_t = 1)]
    pub stride: usize,
    /// Write the result to this file instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Output format (verify and patterns: text or json; simulate: csv).
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

/// What a command produced.
#[derive(Debug, Default)]
pub struct Outcome {
    pub stdout: String,
    pub files: Vec<PathBuf>,
    /// Hypotheses or containment checks failed.
    pub failed: bool,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        i32::from(self.failed)
    }
}

fn load(spec: &NetworkSpec) -> Result<Network, Error> {
    Ok(Network::new(spec.clone())?)
}

fn write_file(path: &Path, contents: &[u8]) -> Result<(), Error> {
    fs::write(path, contents).map_err(|e| Error::Io {
        path: path.to_owned(),
        source: e,
    })
}

fn emit(out: &mut Outcome, path: Option<&Path>, text: String) -> Result<(), Error> {
    match path {
        Some(p) => {
            write_file(p, text.as_bytes())?;
            out.files.push(p.to_owned());
        }
        None => out.stdout.push_str(&text),
    }
    Ok(())
}

fn check_dt(dt: f64) -> Result<(), Error> {
    if dt > 0.0 && dt.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "--dt must be positive, got {dt}"
        )))
    }
}

pub fn parse_grid(text: &str) -> Result<Vec<Axis>, Error> {
    let bad = || {
        Error::InvalidArgument(format!(
            "grid `{text}` is not of the form min:max:count,..."
        ))
    };
    text.split(',')
        .map(|axis| {
            let parts: Vec<&str> = axis.trim().split(':').collect();
            let [min, max, count] = parts.as_slice() else {
                return Err(bad());
            };
            let axis = Axis {
                min: min.parse().map_err(|_| bad())?,
                max: max.parse().map_err(|_| bad())?,
                count: count.parse().map_err(|_| bad())?,
            };
            if axis.count == 0 || axis.min.partial_cmp(&axis.max).is_none_or(|o| o.is_gt()) {
                return Err(bad());
            }
            Ok(axis)
        })
        .collect()
}

fn parse_phi(text: &str, n: usize) -> Result<Vec<f64>, Error> {
    let v: Vec<f64> = text
        .split(',')
        .map(|s| {
            s.trim()
                .parse()
                .map_err(|_| Error::InvalidArgument(format!("bad --phi entry `{s}`")))
        })
        .collect::<Result<_, _>>()?;
    if v.len() != n {
        return Err(Error::InvalidArgument(format!(
            "--phi has {} entries, network has {n} neurons",
            v.len()
        )));
    }
    Ok(v)
}

pub fn run_verify(spec: &NetworkSpec, args: &RunArgs) -> Result<Outcome, Error> {
    let net = load(spec)?;
    let json = VerifyJson::from(&verify(&net)?);
    let text = match args.format.unwrap_or(Format::Text) {
        Format::Text => json.to_text(),
        Format::Json => serde_json::to_string_pretty(&json)? + "\n",
        Format::Csv => {
            return Err(Error::InvalidArgument(
                "verify reports are text or json".into(),
            ))
        }
    };
    let mut out = Outcome {
        failed: !json.passed,
        ..Default::default()
    };
    emit(&mut out, args.out.as_deref(), text)?;
    Ok(out)
}

pub fn run_simulate(spec: &NetworkSpec, args: &RunArgs) -> Result<Outcome, Error> {
    check_dt(args.dt)?;
    let net = load(spec)?;
    if args.format.is_some_and(|f| f != Format::Csv) {
        return Err(Error::InvalidArgument(
            "trajectories are written as csv".into(),
        ));
    }
    let x0 = match &args.phi {
        Some(p) => parse_phi(p, net.n())?,
        None => vec![1.0; net.n()],
    };
    let traj = integrate(
        &net,
        &InitialFunction::Constant(x0),
        args.t_end.unwrap_or(100.0),
        args.dt,
    )?;
    let mut buf = Vec::new();
    write_trajectory(&traj, args.stride, &mut buf)?;
    let mut out = Outcome::default();
    emit(
        &mut out,
        args.out.as_deref(),
        String::from_utf8(buf).expect("csv output is utf-8"),
    )?;
    Ok(out)
}

pub fn run_patterns(spec: &NetworkSpec, args: &RunArgs) -> Result<Outcome, Error> {
    check_dt(args.dt)?;
    let net = load(spec)?;
    let cfg = PatternsConfig {
        dt: args.dt,
        transient: args.transient,
        window: args.window,
        tail_tol: args.tail_tol,
        trials: args.trials,
        invariance_t_end: args.t_end.unwrap_or(200.0),
        seed: args.seed,
        ..Default::default()
    };
    let report = match analyze_patterns(&net, &cfg) {
        Err(Error::HypothesisFailed(why)) => {
            return Ok(Outcome {
                stdout: format!("hypotheses not satisfied: {why}\n"),
                failed: true,
                ..Default::default()
            })
        }
        r => r?,
    };
    let text = match args.format.unwrap_or(Format::Text) {
        Format::Text => report.to_text(),
        Format::Json => serde_json::to_string_pretty(&report)? + "\n",
        Format::Csv => {
            return Err(Error::InvalidArgument(
                "pattern reports are text or json".into(),
            ))
        }
    };
    let mut out = Outcome {
        failed: !report.passed,
        ..Default::default()
    };
    emit(&mut out, args.out.as_deref(), text)?;
    Ok(out)
}

pub fn run_basins(spec: &NetworkSpec, args: &RunArgs) -> Result<Outcome, Error> {
    check_dt(args.dt)?;
    let net = load(spec)?;
    let axes = match &args.grid {
        Some(g) => parse_grid(g)?,
        None => vec![
            Axis {
                min: -5.0,
                max: 5.0,
                count: 41
            };
            net.n()
        ],
    };
    let bounds = basin_bounds(&net)?;
    let sweep = parallel_sweep(&net, &bounds, &axes, args.t_end.unwrap_or(100.0), args.dt)?;
    let mut csv = Vec::new();
    write_sweep(&sweep, &mut csv)?;
    let mut out = Outcome::default();
    match &args.out {
        Some(path) => {
            write_file(path, &csv)?;
            out.files.push(path.clone());
            if net.n() == 2 {
                let name = |p: &Path| {
                    p.file_name()
                        .map(|s| s.to_string_lossy().into_owned())
                        .unwrap_or_default()
                };
                let script_path = path.with_extension("gp");
                let script =
                    gnuplot_script(&name(path), &name(&path.with_extension("png")), &sweep);
                write_file(&script_path, script.as_bytes())?;
                out.files.push(script_path);
            }
        }
        None => out.stdout = String::from_utf8(csv).expect("csv output is utf-8"),
    }
    Ok(out)
}

pub fn example_spec(id: u32) -> Result<NetworkSpec, Error> {
    u8::try_from(id)
        .ok()
        .and_then(fixtures::example)
        .ok_or(Error::UnknownExample(id))
}

pub fn run(cli: &Cli) -> Result<Outcome, Error> {
    match &cli.command {
        Command::Verify { spec, run } => run_verify(&read_spec(spec)?, run),
        Command::Simulate { spec, run } => run_simulate(&read_spec(spec)?, run),
        Command::Patterns { spec, run } => run_patterns(&read_spec(spec)?, run),
        Command::Basins { spec, run } => run_basins(&read_spec(spec)?, run),
        Command::Example { id, action, run } => {
            let spec = example_spec(*id)?;
            if action.verify {
                run_verify(&spec, run)
            } else if action.simulate {
                run_simulate(&spec, run)
            } else if action.patterns {
                run_patterns(&spec, run)
            } else if action.basins {
                run_basins(&spec, run)
            } else {
                let mut out = Outcome::default();
                emit(&mut out, run.out.as_deref(), spec_to_json(&spec)? + "\n")?;
                Ok(out)
            }
        }
    }
}

/// Parses `args`, runs, prints, and returns the process exit code.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run(&cli) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(out.stdout.as_bytes());
            for f in &out.files {
                eprintln!("wrote {}", f.display());
            }
            out.exit_code()
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_parsing() {
        let axes = parse_grid("-5:5:41, 0:1:2").unwrap();
        assert_eq!(
            axes,
            vec![
                Axis {
                    min: -5.0,
                    max: 5.0,
                    count: 41
                },
                Axis {
                    min: 0.0,
                    max: 1.0,
                    count: 2
                }
            ]
        );
        for bad in ["1:2", "a:1:2", "0:1:0", "2:1:3"] {
            assert!(
                matches!(parse_grid(bad), Err(Error::InvalidArgument(_))),
                "{bad}"
            );
        }
    }

    #[test]
    fn unknown_example() {
        assert!(matches!(example_spec(5), Err(Error::UnknownExample(5))));
        assert!(matches!(example_spec(300), Err(Error::UnknownExample(300))));
        assert!(example_spec(4).is_ok());
    }

    #[test]
    fn phi_parsing() {
        assert_eq!(parse_phi("1, -2.5", 2).unwrap(), vec![1.0, -2.5]);
        assert!(parse_phi("1", 2).is_err());
    }
}
