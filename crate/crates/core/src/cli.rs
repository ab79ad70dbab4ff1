//! Command-line grammar and the validated run configuration.

use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::complexes::ComplexId;
use crate::linalg::Vector;
use crate::registry;
use crate::report::Format;
use crate::torus::{AlgebraKind, Degree};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "kebab-case")]
pub enum Command {
    Check { id: String },
    CheckAll,
    Dims,
    Closure { seed_fiber: Degree, seed_index: usize },
    Homology { complex: ComplexId },
    Frame {
        #[serde(with = "literal")]
        vector: Vector,
    },
}

/// A validated invocation. `beta`, `alpha` and the frame vector are echoed
/// as the literals they were parsed from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: Command,
    #[serde(rename = "N")]
    pub n: usize,
    pub p: Option<usize>,
    #[serde(with = "literal")]
    pub beta: Vector,
    #[serde(with = "literal")]
    pub alpha: Vector,
    pub window: i64,
    pub rbound: i64,
    pub seed: u64,
    pub samples: usize,
    pub algebra: AlgebraKind,
    pub format: Format,
    pub output: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            command: Command::CheckAll,
            n: 4,
            p: None,
            beta: Vector::zeros(4),
            alpha: Vector::zeros(4),
            window: 2,
            rbound: 1,
            seed: 0,
            samples: 100,
            algebra: AlgebraKind::H,
            format: Format::Json,
            output: None,
        }
    }
}

fn vector_literal(v: &Vector) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

mod literal {
    use serde::{Deserialize, Deserializer, Serializer};

    use crate::linalg::Vector;

    pub fn serialize<S: Serializer>(v: &Vector, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&super::vector_literal(v))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vector, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

impl RunConfig {
    /// Flags that make [`parse_config`] reproduce this configuration.
    pub fn to_args(&self) -> Vec<String> {
        let mut a: Vec<String> = match &self.command {
            Command::Check { id } => vec!["check".into(), "--id".into(), id.clone()],
            Command::CheckAll => vec!["check-all".into()],
            Command::Dims => vec!["dims".into()],
            Command::Closure { seed_fiber, seed_index } => vec![
                "closure".into(),
                "--seed-fiber".into(),
                Degree(seed_fiber.0.clone()).to_string(),
                "--seed-index".into(),
                seed_index.to_string(),
            ],
            Command::Homology { complex } => vec!["homology".into(), "--complex".into(), complex.to_string()],
            Command::Frame { vector } => vec!["frame".into(), "--vector".into(), vector_literal(vector)],
        };
        a.extend(["--N".into(), self.n.to_string()]);
        if let Some(p) = self.p {
            a.extend(["--p".into(), p.to_string()]);
        }
        a.extend([
            "--beta".into(),
            vector_literal(&self.beta),
            "--alpha".into(),
            vector_literal(&self.alpha),
            "--window".into(),
            self.window.to_string(),
            "--rbound".into(),
            self.rbound.to_string(),
            "--seed".into(),
            self.seed.to_string(),
            "--samples".into(),
            self.samples.to_string(),
            "--algebra".into(),
            self.algebra.to_string(),
            "--format".into(),
            self.format.to_string(),
        ]);
        if let Some(o) = &self.output {
            a.extend(["--output".into(), o.display().to_string()]);
        }
        a
    }
}

#[derive(Parser, Debug)]
#[command(name = "slmod", version, about = "Exact checks of tensor-field modules over torus Lie algebras")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
    /// rank of the torus
    #[arg(long = "N", global = true, default_value_t = 4)]
    n: usize,
    /// exterior degree; all valid degrees when omitted
    #[arg(long, global = true)]
    p: Option<usize>,
    /// comma-separated rationals, e.g. 1/2,0,0,0; zero when omitted
    #[arg(long, global = true, allow_hyphen_values = true)]
    beta: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    alpha: Option<String>,
    /// half-width of the degree window; 2 for N <= 4, 1 above
    #[arg(long, global = true, allow_hyphen_values = true)]
    window: Option<i64>,
    /// generators h_r, D(u, r) with max |r_i| <= rbound
    #[arg(long, global = true, default_value_t = 1)]
    rbound: i64,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// random probes per family
    #[arg(long, global = true, default_value_t = 100)]
    samples: usize,
    #[arg(long, global = true, default_value = "H")]
    algebra: String,
    #[arg(long, global = true, default_value = "json")]
    format: String,
    #[arg(long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// run one catalogued check
    Check {
        #[arg(long)]
        id: String,
    },
    /// run every catalogued check on the default grid
    CheckAll,
    /// family fiber dimensions against the independent oracle
    Dims,
    /// closure of one basis vector against the predicted family
    Closure {
        #[arg(long, allow_hyphen_values = true)]
        seed_fiber: String,
        #[arg(long)]
        seed_index: usize,
    },
    /// homology of a complex against its prediction
    Homology {
        #[arg(long)]
        complex: String,
    },
    /// symplectic frame of a vector
    Frame {
        #[arg(long, allow_hyphen_values = true)]
        vector: String,
    },
}

/// Default window half-width at rank `n`.
pub fn default_window(n: usize) -> i64 {
    if n <= 4 {
        2
    } else {
        1
    }
}

fn usage(msg: impl std::fmt::Display) -> clap::Error {
    clap::Error::raw(ErrorKind::ValueValidation, format!("{msg}\n"))
}

fn rational_vector(what: &str, s: Option<&str>, n: usize) -> Result<Vector, clap::Error> {
    let v = match s {
        None => return Ok(Vector::zeros(n)),
        Some(s) => s.parse::<Vector>().map_err(|e| usage(format!("--{what}: {e}")))?,
    };
    if v.len() != n {
        return Err(usage(format!("--{what} has {} entries but N = {n}", v.len())));
    }
    Ok(v)
}

/// Parses and validates `argv` (program name first). Errors carry the clap
/// exit code: 0 for help and version, 2 for usage errors.
pub fn parse_config<I, T>(argv: I) -> Result<RunConfig, clap::Error>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv)?;
    let n = cli.n;
    if n == 0 {
        return Err(usage("--N must be positive"));
    }
    let algebra: AlgebraKind = cli.algebra.parse().map_err(usage)?;
    let format: Format = cli.format.parse().map_err(usage)?;
    let beta = rational_vector("beta", cli.beta.as_deref(), n)?;
    let alpha = rational_vector("alpha", cli.alpha.as_deref(), n)?;
    let window = cli.window.unwrap_or_else(|| default_window(n));
    if window < 0 {
        return Err(usage("--window must be non-negative"));
    }
    if cli.rbound < 1 {
        return Err(usage("--rbound must be at least 1"));
    }
    let command = match cli.command {
        Cmd::Check { id } => {
            let entry = registry::entry(&id).ok_or_else(|| usage(format!("unknown check id {id:?}")))?;
            if entry.algebra == AlgebraKind::H && n % 2 != 0 {
                return Err(usage(format!("check {id} uses the Hamiltonian algebra, which needs even N, got {n}")));
            }
            Command::Check { id }
        }
        Cmd::CheckAll => Command::CheckAll,
        Cmd::Dims => Command::Dims,
        Cmd::Closure { seed_fiber, seed_index } => {
            let k: Degree = seed_fiber.parse().map_err(usage)?;
            if k.len() != n {
                return Err(usage(format!("--seed-fiber has {} entries but N = {n}", k.len())));
            }
            Command::Closure { seed_fiber: k, seed_index }
        }
        Cmd::Homology { complex } => Command::Homology { complex: complex.parse().map_err(usage)? },
        Cmd::Frame { vector } => {
            let v: Vector = vector.parse().map_err(|e| usage(format!("--vector: {e}")))?;
            if v.len() != n {
                return Err(usage(format!("--vector has {} entries but N = {n}", v.len())));
            }
            if v.is_zero() {
                return Err(usage("--vector must be nonzero"));
            }
            Command::Frame { vector: v }
        }
    };
    let uses_h = match &command {
        Command::Check { .. } | Command::CheckAll => false,
        Command::Homology { complex: ComplexId::DeRham(_) } => false,
        Command::Closure { .. } => algebra == AlgebraKind::H,
        Command::Homology { .. } | Command::Frame { .. } | Command::Dims => true,
    };
    if uses_h && n % 2 != 0 {
        return Err(usage(format!("the Hamiltonian algebra needs even N, got {n}")));
    }
    if let Command::Homology { complex } = &command {
        complex.validate(n).map_err(usage)?;
    }
    Ok(RunConfig {
        command,
        n,
        p: cli.p,
        beta,
        alpha,
        window,
        rbound: cli.rbound,
        seed: cli.seed,
        samples: cli.samples,
        algebra,
        format,
        output: cli.output,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> Result<RunConfig, clap::Error> {
        parse_config(std::iter::once("slmod").chain(s.split_whitespace()))
    }

    #[test]
    fn check_example_parses() {
        let c = parse("check --id composition --N 4 --p 2 --beta 1/2,0,0,0 --window 2").unwrap();
        assert_eq!(c.command, Command::Check { id: "composition".into() });
        assert_eq!(c.n, 4);
        assert_eq!(c.p, Some(2));
        assert_eq!(c.beta.to_string(), "(1/2,0,0,0)");
    }

    #[test]
    fn usage_errors_exit_two() {
        for bad in [
            "check --id composition --N 4 --beta 1/2,0,0",
            "dims --N 3",
            "check --id composition --N 3",
            "check --id composition --N 4 --beta 1/0,0,0,0",
            "check --id composition --N 4 --beta x,0,0,0",
            "check --id nonsense",
            "homology --complex FSQ(7)",
        ] {
            let e = parse(bad).unwrap_err();
            assert_eq!(e.exit_code(), 2, "{bad}");
        }
    }

    #[test]
    fn odd_n_allowed_for_witt() {
        let c = parse("check --id classify-W --N 3").unwrap();
        assert_eq!(c.n, 3);
        let c = parse("closure --algebra W --N 3 --p 1 --seed-fiber 0,0,1 --seed-index 0").unwrap();
        assert_eq!(c.algebra, AlgebraKind::W);
    }

    #[test]
    fn round_trip_through_args() {
        for s in [
            "check --id composition --N 4 --p 2 --beta 1/2,0,0,0 --window 2",
            "check-all --seed 7 --samples 10 --format csv --output out.csv",
            "closure --N 4 --p 1 --seed-fiber (1,-1,0,0) --seed-index 0",
            "homology --complex FSQ_FUND(2) --beta -1/3,0,0,2",
            "frame --vector 1,0,-2/3,0 --alpha 0,1,0,0",
        ] {
            let c = parse(s).unwrap();
            let again = parse_config(std::iter::once("slmod".to_string()).chain(c.to_args())).unwrap();
            assert_eq!(c, again, "{s}");
        }
    }

    #[test]
    fn json_echo_uses_literals() {
        let c = parse("check --id composition --N 4 --beta 1/2,0,0,0").unwrap();
        let j = serde_json::to_value(&c).unwrap();
        assert_eq!(j["beta"], "1/2,0,0,0");
        assert_eq!(j["command"]["name"], "check");
        let back: RunConfig = serde_json::from_value(j).unwrap();
        assert_eq!(back, c);
    }
}
