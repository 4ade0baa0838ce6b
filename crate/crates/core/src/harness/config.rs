use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use serde::Deserialize;

use crate::dynamics::{ScheduleKind, MIN_STEPS};
use crate::instance::{make_grover, make_random, reverse_instance};
use crate::{Error, Instance, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScheduleName {
    Full,
    Partial,
    Local,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

/// Settings shared by every subcommand. The same shape is read from a JSON
/// config file and from the command line; command-line values win.
#[derive(Debug, Clone, Default, PartialEq, Args, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// JSON config file with any of these settings.
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,

    /// Instance file (JSON with `xi` and `t_overlap`).
    #[arg(long)]
    pub instance: Option<PathBuf>,

    /// Grover search instance on N items.
    #[arg(long, value_name = "N")]
    pub grover: Option<usize>,

    /// Random instance `N,seed,xi_max,alpha`.
    #[arg(long, value_name = "SPEC")]
    pub random: Option<String>,

    /// Treat the instance as the time-reversed problem.
    #[arg(long)]
    #[serde(default)]
    pub reverse: bool,

    /// Interval half-width multiplier.
    #[arg(long)]
    pub c: Option<f64>,

    /// Number of uniform μ grid points.
    #[arg(long)]
    pub grid: Option<usize>,

    /// Number of lowest eigenvalues to report.
    #[arg(long)]
    pub levels: Option<usize>,

    #[arg(long, value_enum)]
    pub schedule: Option<ScheduleName>,

    /// Total evolution time Γ.
    #[arg(long)]
    pub gamma: Option<f64>,

    #[arg(long)]
    pub steps: Option<usize>,

    #[arg(long)]
    pub trials: Option<usize>,

    #[arg(long)]
    pub seed: Option<u64>,

    #[arg(long)]
    pub out: Option<PathBuf>,

    #[arg(long, value_enum)]
    pub format: Option<OutputFormat>,

    /// Problem sizes for the scaling study.
    #[arg(long, value_delimiter = ',')]
    pub ns: Option<Vec<usize>>,

    /// Target success probability.
    #[arg(long)]
    pub target: Option<f64>,

    /// Number of random instances in the validation sweep.
    #[arg(long)]
    pub ensemble: Option<usize>,
}

pub const DEFAULT_STEPS: usize = 2000;
pub const DEFAULT_GRID: usize = 101;
pub const DEFAULT_TARGET: f64 = 0.9;
pub const DEFAULT_NS: [usize; 3] = [16, 64, 256];

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| {
            Error::config(format!("config line {} column {}", e.line(), e.column()), e.to_string())
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| Error::config("config", format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// Fills every unset field of `self` from `base`.
    pub fn over(self, base: Self) -> Self {
        Self {
            config: self.config.or(base.config),
            instance: self.instance.or(base.instance),
            grover: self.grover.or(base.grover),
            random: self.random.or(base.random),
            reverse: self.reverse || base.reverse,
            c: self.c.or(base.c),
            grid: self.grid.or(base.grid),
            levels: self.levels.or(base.levels),
            schedule: self.schedule.or(base.schedule),
            gamma: self.gamma.or(base.gamma),
            steps: self.steps.or(base.steps),
            trials: self.trials.or(base.trials),
            seed: self.seed.or(base.seed),
            out: self.out.or(base.out),
            format: self.format.or(base.format),
            ns: self.ns.or(base.ns),
            target: self.target.or(base.target),
            ensemble: self.ensemble.or(base.ensemble),
        }
    }

    /// Reads the file named by `config`, if any, under the given flags.
    pub fn with_file(self) -> Result<Self> {
        match &self.config {
            Some(path) => {
                let base = Self::load(path)?;
                Ok(self.over(base))
            }
            None => Ok(self),
        }
    }

    /// Range checks on every numeric setting that is present.
    pub fn validate(&self) -> Result<()> {
        if let Some(p) = &self.instance {
            if !p.is_file() {
                return Err(Error::config("instance", format!("{} does not exist", p.display())));
            }
        }
        if let Some(n) = self.grover {
            if n < 2 {
                return Err(Error::config("grover", format!("N must be at least 2, got {n}")));
            }
        }
        if let Some(c) = self.c {
            if !(c > 1.0 && c.is_finite()) {
                return Err(Error::config("c", format!("must be a finite number above 1, got {c}")));
            }
        }
        if let Some(g) = self.grid {
            if g < 2 {
                return Err(Error::config("grid", format!("need at least 2 points, got {g}")));
            }
        }
        if self.levels == Some(0) {
            return Err(Error::config("levels", "must be at least 1"));
        }
        if let Some(g) = self.gamma {
            if !(g >= 0.0 && g.is_finite()) {
                return Err(Error::config("gamma", format!("must be finite and nonnegative, got {g}")));
            }
        }
        if let Some(s) = self.steps {
            if s < MIN_STEPS {
                return Err(Error::config("steps", format!("must be at least {MIN_STEPS}, got {s}")));
            }
        }
        if self.trials == Some(0) {
            return Err(Error::config("trials", "must be at least 1"));
        }
        if let Some(t) = self.target {
            if !(t > 0.0 && t < 1.0) {
                return Err(Error::config("target", format!("must lie in (0, 1), got {t}")));
            }
        }
        if let Some(ns) = &self.ns {
            if let Some(&n) = ns.iter().find(|&&n| n < 2) {
                return Err(Error::config("ns", format!("sizes must be at least 2, got {n}")));
            }
        }
        Ok(())
    }

    pub fn load_instance(&self) -> Result<Instance> {
        self.validate()?;
        let sources = [self.instance.is_some(), self.grover.is_some(), self.random.is_some()]
            .iter()
            .filter(|&&b| b)
            .count();
        if sources != 1 {
            return Err(Error::config(
                "instance",
                "specify exactly one of --instance, --grover, --random",
            ));
        }
        let inst = if let Some(p) = &self.instance {
            Instance::load(p)?
        } else if let Some(n) = self.grover {
            make_grover(n)?
        } else {
            let spec = self.random.as_deref().unwrap_or_default();
            let (n, seed, xi_max, alpha) = parse_random_spec(spec)?;
            make_random(n, seed, xi_max, alpha).map_err(|e| Error::config("random", e.to_string()))?
        };
        if self.reverse && !inst.is_time_reversed() {
            return reverse_instance(inst.xi().to_vec(), inst.t_overlap().to_vec());
        }
        Ok(inst)
    }

    pub fn c(&self) -> f64 {
        self.c.unwrap_or(crate::analytic::DEFAULT_C)
    }

    pub fn steps(&self) -> usize {
        self.steps.unwrap_or(DEFAULT_STEPS)
    }

    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(0)
    }

    pub fn format(&self) -> OutputFormat {
        self.format.unwrap_or_default()
    }

    pub fn target(&self) -> f64 {
        self.target.unwrap_or(DEFAULT_TARGET)
    }

    pub fn schedule_kind(&self) -> ScheduleKind {
        match self.schedule.unwrap_or(ScheduleName::Full) {
            ScheduleName::Full => ScheduleKind::FullLinear,
            ScheduleName::Partial => ScheduleKind::Partial { c: self.c() },
            ScheduleName::Local => ScheduleKind::LocalAdaptive,
        }
    }
}

/// Parses `N,seed,xi_max,alpha`.
pub fn parse_random_spec(spec: &str) -> Result<(usize, u64, f64, f64)> {
    let parts: Vec<&str> = spec.split(',').map(str::trim).collect();
    let bad = |what: &str| Error::config("random", format!("{what} in {spec:?}; expected N,seed,xi_max,alpha"));
    if parts.len() != 4 {
        return Err(bad("need 4 comma-separated values"));
    }
    let n = parts[0].parse().map_err(|_| bad("bad N"))?;
    let seed = parts[1].parse().map_err(|_| bad("bad seed"))?;
    let xi_max = parts[2].parse().map_err(|_| bad("bad xi_max"))?;
    let alpha = parts[3].parse().map_err(|_| bad("bad alpha"))?;
    Ok((n, seed, xi_max, alpha))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_file() {
        let file = ExperimentConfig::from_json(r#"{"grover": 64, "c": 3.0, "steps": 500}"#).unwrap();
        let flags = ExperimentConfig {
            c: Some(2.5),
            ..Default::default()
        };
        let merged = flags.over(file);
        assert_eq!(merged.grover, Some(64));
        assert_eq!(merged.c, Some(2.5));
        assert_eq!(merged.steps(), 500);
    }

    #[test]
    fn unknown_keys_rejected() {
        let err = ExperimentConfig::from_json(r#"{"grover": 64, "colour": 1}"#).unwrap_err();
        assert!(matches!(err, Error::Config { .. }));
    }

    #[test]
    fn validation_names_fields() {
        let field = |cfg: ExperimentConfig| match cfg.load_instance() {
            Err(Error::Config { field, .. }) => field,
            other => panic!("{other:?}"),
        };
        let g = |f: fn(&mut ExperimentConfig)| {
            let mut c = ExperimentConfig {
                grover: Some(16),
                ..Default::default()
            };
            f(&mut c);
            c
        };
        assert_eq!(field(ExperimentConfig::default()), "instance");
        assert_eq!(field(g(|c| c.random = Some("4,1,1,0.1".into()))), "instance");
        assert_eq!(field(g(|c| c.grid = Some(1))), "grid");
        assert_eq!(field(g(|c| c.c = Some(0.5))), "c");
        assert_eq!(field(g(|c| c.steps = Some(10))), "steps");
        assert_eq!(field(g(|c| c.target = Some(1.5))), "target");
        assert_eq!(
            field(g(|c| {
                c.grover = None;
                c.instance = Some("/nonexistent/instance.json".into());
            })),
            "instance"
        );
        assert!(g(|_| ()).load_instance().is_ok());
        assert!(ExperimentConfig::default().validate().is_ok());
    }

    #[test]
    fn random_spec() {
        assert_eq!(parse_random_spec("8, 3, 1.5, 0.1").unwrap(), (8, 3, 1.5, 0.1));
        assert!(parse_random_spec("8,3,1.5").is_err());
        assert!(parse_random_spec("x,3,1.5,0.1").is_err());
        let cfg = ExperimentConfig {
            random: Some("8,3,1.5,0.1".into()),
            reverse: true,
            ..Default::default()
        };
        let inst = cfg.load_instance().unwrap();
        assert_eq!(inst.dim(), 8);
        assert!(inst.is_time_reversed());
    }
}
