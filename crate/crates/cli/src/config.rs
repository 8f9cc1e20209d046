//! Run configuration: command-line flags merged over an optional flat
//! key-value config file, with the stock defaults applied last.

use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use dicke2p::analysis::GRule;
use dicke2p::model::Branch;

use crate::output::Format;
use crate::CliError;

/// Physics defaults: N = 1000, omega = 1, epsilon = 0.0008, g = 0.49.
pub const DEFAULT_OMEGA: f64 = 1.0;
pub const DEFAULT_EPSILON: f64 = 0.0008;
pub const DEFAULT_N: u64 = 1000;
pub const DEFAULT_G: f64 = 0.49;
pub const DEFAULT_DELTA_NEAR: f64 = 1e-3;
pub const DEFAULT_R_OFFSET: f64 = 1e-3;

/// Which branch(es) of the order parameter a command works with.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum BranchArg {
    Plus,
    Minus,
    Both,
}

impl FromStr for BranchArg {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "plus" | "+" => Ok(BranchArg::Plus),
            "minus" | "-" => Ok(BranchArg::Minus),
            "both" => Ok(BranchArg::Both),
            other => Err(format!(
                "unknown branch {other:?} (expected plus, minus, or both)"
            )),
        }
    }
}

impl BranchArg {
    pub fn branches(&self) -> Vec<Branch> {
        match self {
            BranchArg::Plus => vec![Branch::Plus],
            BranchArg::Minus => vec![Branch::Minus],
            BranchArg::Both => vec![Branch::Plus, Branch::Minus],
        }
    }
}

/// Coupling rule names on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum GRuleArg {
    /// g pinned just below the unbounded boundary, omega/2 - delta_near.
    NearHalfOmega,
    /// g tracking the critical point from above, g_t (1 + r).
    NearGt,
}

impl FromStr for GRuleArg {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "near-half-omega" => Ok(GRuleArg::NearHalfOmega),
            "near-gt" => Ok(GRuleArg::NearGt),
            other => Err(format!(
                "unknown g-rule {other:?} (expected near-half-omega or near-gt)"
            )),
        }
    }
}

impl GRuleArg {
    pub fn to_rule(self, delta_near: f64, r_offset: f64) -> GRule {
        match self {
            GRuleArg::NearHalfOmega => GRule::NearHalfOmega { delta_near },
            GRuleArg::NearGt => GRule::NearGt {
                rel_offset: r_offset,
            },
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            GRuleArg::NearHalfOmega => "near-half-omega",
            GRuleArg::NearGt => "near-gt",
        }
    }
}

/// An inclusive `min,max,count` axis specification.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RangeSpec {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl FromStr for RangeSpec {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != 3 {
            return Err(format!("range {s:?} must be min,max,count"));
        }
        let min: f64 = parts[0]
            .parse()
            .map_err(|_| format!("range min {:?} is not a number", parts[0]))?;
        let max: f64 = parts[1]
            .parse()
            .map_err(|_| format!("range max {:?} is not a number", parts[1]))?;
        let count: usize = parts[2]
            .parse()
            .map_err(|_| format!("range count {:?} is not an integer", parts[2]))?;
        if !min.is_finite() || !max.is_finite() {
            return Err(format!("range {s:?} bounds must be finite"));
        }
        if !(max > min) {
            return Err(format!("range {s:?} needs max > min"));
        }
        if count < 2 {
            return Err(format!("range {s:?} needs count >= 2"));
        }
        Ok(RangeSpec { min, max, count })
    }
}

impl std::fmt::Display for RangeSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{},{},{}", self.min, self.max, self.count)
    }
}

/// Spacing of generated axis values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Spacing {
    Log,
    Linear,
}

impl FromStr for Spacing {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "log" => Ok(Spacing::Log),
            "linear" => Ok(Spacing::Linear),
            other => Err(format!(
                "unknown spacing {other:?} (expected log or linear)"
            )),
        }
    }
}

/// Flat `key = value` config file; `#` starts a comment.
#[derive(Debug, Default)]
pub struct ConfigFile {
    values: HashMap<String, String>,
}

const KNOWN_KEYS: &[&str] = &[
    "omega",
    "epsilon",
    "n",
    "g",
    "g-rule",
    "delta-near",
    "r-offset",
    "branch",
    "format",
    "out",
    "t-max",
    "resolution",
    "t",
    "g-range",
    "n-eps-range",
    "t-range",
    "delta-range",
    "spacing",
];

impl ConfigFile {
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
        let mut values = HashMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(CliError::Config(format!(
                    "config {}:{}: expected `key = value`, got {raw:?}",
                    path.display(),
                    lineno + 1
                )));
            };
            let key = key.trim().to_string();
            if !KNOWN_KEYS.contains(&key.as_str()) {
                return Err(CliError::Config(format!(
                    "config {}:{}: unknown key {key:?}",
                    path.display(),
                    lineno + 1
                )));
            }
            values.insert(key, value.trim().to_string());
        }
        Ok(ConfigFile { values })
    }

    /// Typed lookup; parse failures name the key.
    pub fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>, CliError>
    where
        T::Err: std::fmt::Display,
    {
        match self.values.get(key) {
            None => Ok(None),
            Some(raw) => raw
                .parse::<T>()
                .map(Some)
                .map_err(|e| CliError::Config(format!("config key {key} = {raw:?}: {e}"))),
        }
    }
}

/// Flags shared by every subcommand. All values are optional here;
/// [`Resolved`] applies config-file values and defaults.
#[derive(Debug, clap::Args)]
pub struct CommonArgs {
    /// Flat key = value config file; flags take precedence.
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Cavity frequency (energy units; defaults to 1).
    #[arg(long)]
    pub omega: Option<f64>,
    /// Qubit transition frequency (defaults to 0.0008).
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Number of qubits (defaults to 1000).
    #[arg(long)]
    pub n: Option<u64>,
    /// Coupling strength; mutually exclusive with --g-rule.
    #[arg(long, conflicts_with = "g_rule")]
    pub g: Option<f64>,
    /// Choose the coupling from a rule instead of a fixed value.
    #[arg(long, value_enum)]
    pub g_rule: Option<GRuleArg>,
    /// Distance below omega/2 for the near-half-omega rule.
    #[arg(long)]
    pub delta_near: Option<f64>,
    /// Relative offset above g_t for the near-gt rule.
    #[arg(long)]
    pub r_offset: Option<f64>,
    /// Order-parameter branch: plus, minus, or both.
    #[arg(long, value_enum)]
    pub branch: Option<BranchArg>,
    /// Output path; stdout when omitted.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Output format: csv or json.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

/// Fully resolved common configuration.
#[derive(Debug)]
pub struct Resolved {
    pub omega: f64,
    pub epsilon: f64,
    pub n_qubits: u64,
    /// Fixed coupling, when no rule was requested.
    pub g: Option<f64>,
    pub g_rule: Option<GRuleArg>,
    pub delta_near: f64,
    pub r_offset: f64,
    pub branch: BranchArg,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub file: ConfigFile,
}

impl Resolved {
    pub fn from_args(args: &CommonArgs) -> Result<Self, CliError> {
        let file = ConfigFile::load(args.config.as_deref())?;
        let g_rule = match args.g_rule {
            Some(rule) => Some(rule),
            None => file.get::<GRuleArg>("g-rule")?,
        };
        let g_flag = match args.g {
            Some(g) => Some(g),
            None => file.get::<f64>("g")?,
        };
        // A rule wins over a config-file g; an explicit --g already
        // conflicts with --g-rule at parse time.
        let g = if g_rule.is_some() { None } else { g_flag };
        let out = match &args.out {
            Some(p) => Some(p.clone()),
            None => file.get::<String>("out")?.map(PathBuf::from),
        };
        Ok(Resolved {
            omega: pick(args.omega, &file, "omega")?.unwrap_or(DEFAULT_OMEGA),
            epsilon: pick(args.epsilon, &file, "epsilon")?.unwrap_or(DEFAULT_EPSILON),
            n_qubits: pick(args.n, &file, "n")?.unwrap_or(DEFAULT_N),
            g,
            g_rule,
            delta_near: pick(args.delta_near, &file, "delta-near")?.unwrap_or(DEFAULT_DELTA_NEAR),
            r_offset: pick(args.r_offset, &file, "r-offset")?.unwrap_or(DEFAULT_R_OFFSET),
            branch: pick(args.branch, &file, "branch")?.unwrap_or(BranchArg::Both),
            out,
            format: pick(args.format, &file, "format")?.unwrap_or(Format::Csv),
            file,
        })
    }

    /// The rule as a core [`GRule`], when one was requested.
    pub fn rule(&self) -> Option<GRule> {
        self.g_rule
            .map(|r| r.to_rule(self.delta_near, self.r_offset))
    }

    /// Resolves the coupling for single-point commands: fixed g, a rule,
    /// or the default.
    pub fn resolve_g(&self) -> Result<f64, CliError> {
        if let Some(rule) = self.rule() {
            let probe =
                dicke2p::model::ModelParams::new(self.omega, self.epsilon, self.n_qubits, 0.0)
                    .map_err(CliError::from)?;
            let g_t = dicke2p::model::critical_coupling(&probe);
            Ok(rule.resolve(self.omega, g_t))
        } else {
            Ok(self.g.unwrap_or(DEFAULT_G))
        }
    }

    /// Stamps the shared configuration into a table's metadata block.
    pub fn stamp(&self, table: &mut crate::output::Table, resolved_g: Option<f64>) {
        table.meta("omega", self.omega);
        table.meta("epsilon", self.epsilon);
        table.meta("n", self.n_qubits);
        if let Some(g) = resolved_g {
            table.meta("g", g);
        }
        if let Some(rule) = self.g_rule {
            table.meta("g_rule", rule.name());
            match rule {
                GRuleArg::NearHalfOmega => table.meta("delta_near", self.delta_near),
                GRuleArg::NearGt => table.meta("r_offset", self.r_offset),
            };
        }
    }
}

fn pick<T: FromStr + Copy>(
    flag: Option<T>,
    file: &ConfigFile,
    key: &str,
) -> Result<Option<T>, CliError>
where
    T::Err: std::fmt::Display,
{
    match flag {
        Some(v) => Ok(Some(v)),
        None => file.get(key),
    }
}

/// Generates the axis values of a range with the requested spacing.
pub fn range_values(range: &RangeSpec, spacing: Spacing) -> Result<Vec<f64>, CliError> {
    match spacing {
        Spacing::Linear => Ok(dicke2p::analysis::lin_spaced(
            range.min,
            range.max,
            range.count,
        )),
        Spacing::Log => {
            if range.min <= 0.0 {
                return Err(CliError::Config(format!(
                    "log spacing needs a positive minimum, got {}",
                    range.min
                )));
            }
            Ok(dicke2p::analysis::log_spaced(
                range.min,
                range.max,
                range.count,
            ))
        }
    }
}
