//! Run configuration: a flat `key=value` file overridden by flags.

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use std::collections::BTreeMap;
use std::path::PathBuf;

pub const SEED_ENV: &str = "RIESZ_LAB_SEED";

#[derive(Parser, Debug)]
#[command(name = "riesz-lab", version, about = "Finite-section experiments with exponential systems")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build the iterated interval family.
    ConstructSet(Opts),
    /// Assemble a Gram matrix.
    Gram(Opts),
    /// Finite-section Riesz bounds.
    Bounds(Opts),
    /// Least-squares expansion of a function.
    Expand(Opts),
    /// Coefficient translation diagnostic.
    TranslateTest(Opts),
    /// Translation diagnostic across ε for a weight.
    WeightedScan(Opts),
    /// Sector pigeonhole selection on a seeded random family.
    Pigeonhole(Opts),
    /// Inequality chain on the interval family.
    Theorem2(Opts),
    /// Lune energies on the disk of area one.
    Disk(Opts),
    /// Alternating perturbation of the integers.
    Kadec(Opts),
    /// The golden-ratio threshold.
    Threshold(Opts),
}

impl Command {
    pub fn parts(&self) -> (&'static str, &Opts) {
        match self {
            Command::ConstructSet(o) => ("construct-set", o),
            Command::Gram(o) => ("gram", o),
            Command::Bounds(o) => ("bounds", o),
            Command::Expand(o) => ("expand", o),
            Command::TranslateTest(o) => ("translate-test", o),
            Command::WeightedScan(o) => ("weighted-scan", o),
            Command::Pigeonhole(o) => ("pigeonhole", o),
            Command::Theorem2(o) => ("theorem2", o),
            Command::Disk(o) => ("disk", o),
            Command::Kadec(o) => ("kadec", o),
            Command::Threshold(o) => ("threshold", o),
        }
    }
}

macro_rules! keyed_opts {
    ($($field:ident => $key:literal : $help:literal),* $(,)?) => {
        #[derive(Args, Debug, Default)]
        pub struct Opts {
            /// Flat key=value configuration file; flags take precedence.
            #[arg(long)]
            pub config: Option<PathBuf>,
            /// Seed for every random choice (default 0).
            #[arg(long)]
            pub seed: Option<u64>,
            $(
                #[arg(long = $key, help = $help)]
                pub $field: Option<String>,
            )*
        }

        /// Every key accepted in configuration files and as a flag.
        pub const KEYS: &[&str] = &["seed", $($key),*];

        impl Opts {
            fn flag_entries(&self) -> Vec<(&'static str, &String)> {
                let mut out = Vec::new();
                $(if let Some(v) = &self.$field { out.push(($key, v)); })*
                out
            }
        }
    };
}

keyed_opts! {
    out => "out": "Output directory (default .)",
    name => "name": "Base name of the output files (default: the command)",
    domain => "domain": "intervals | paper-set | disk",
    set => "set": "Interval list lo,hi[;lo,hi...]",
    stages => "stages": "Number of stages of the interval family",
    splits => "splits": "Split counts N_2,...,N_n (default 3^k)",
    freqs => "freqs": "File with one frequency per line (x or x,y)",
    lattice => "lattice": "Lattice step of the frequency set",
    trunc => "trunc": "Truncation bound F of the frequency set",
    perturb => "perturb": "alternating:delta | random:delta",
    weight => "weight": "none | power:alpha | piecewise:lo,hi,value[;...]",
    function => "function": "indicator:lo,hi[;...] | indicator-disk:r | exp:x[,y] | synthesis",
    shift => "shift": "Shifts, ';'-separated (components ','-separated)",
    ridge => "ridge": "Ridge added to the normal equations",
    eps => "eps": "Length or radius epsilon",
    eps_grid => "eps-grid": "Decreasing list of epsilons",
    theta => "theta": "Number of angles",
    radial => "radial": "Radial quadrature nodes",
    angular => "angular": "Angular quadrature nodes",
    ell => "ell": "Integer period ell",
    rule => "rule": "canonical | ridge:value",
    grid => "grid": "Grid nodes per interval of the edge region",
    residual_limit => "residual-limit": "Largest acceptable expansion residual",
    count => "count": "Number of sampled functions",
    points => "points": "Grid points on A",
    a => "a": "Measure of A = [0, a]",
    m => "m": "Subset-sum constant M (default: Cauchy-Schwarz bound)",
    delta => "delta": "Perturbation size",
    n => "n": "Perturbation half-width n",
}

/// The effective configuration of one run.
#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub command: String,
    pub seed: u64,
    pub entries: BTreeMap<String, String>,
}

#[derive(Debug)]
pub struct ConfigError(pub String);

pub fn parse_config_text(text: &str) -> Result<BTreeMap<String, String>, ConfigError> {
    let mut map = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(ConfigError(format!("config line {}: expected key=value", lineno + 1)));
        };
        let key = k.trim();
        if !KEYS.contains(&key) {
            return Err(ConfigError(format!("config line {}: unknown key '{key}'", lineno + 1)));
        }
        map.insert(key.to_string(), v.trim().to_string());
    }
    Ok(map)
}

impl RunConfig {
    /// Defaults < config file < `RIESZ_LAB_SEED` (seed only) < flags.
    pub fn resolve(command: &str, opts: &Opts, env_seed: Option<String>) -> Result<RunConfig, ConfigError> {
        let mut entries = match &opts.config {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| ConfigError(format!("cannot read {}: {e}", path.display())))?;
                parse_config_text(&text)?
            }
            None => BTreeMap::new(),
        };
        for (k, v) in opts.flag_entries() {
            entries.insert(k.to_string(), v.clone());
        }
        let parse_seed = |s: &str| s.trim().parse::<u64>().map_err(|_| ConfigError(format!("seed must be a nonnegative integer, got '{s}'")));
        let mut seed = match entries.remove("seed") {
            Some(s) => parse_seed(&s)?,
            None => 0,
        };
        if let Some(s) = env_seed {
            seed = parse_seed(&s)?;
        }
        if let Some(s) = opts.seed {
            seed = s;
        }
        Ok(RunConfig { command: command.to_string(), seed, entries })
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }

    pub fn parse<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>, ConfigError> {
        self.get(key)
            .map(|s| s.trim().parse::<T>().map_err(|_| ConfigError(format!("cannot parse {key} = '{s}'"))))
            .transpose()
    }

    pub fn parse_or<T: std::str::FromStr>(&self, key: &str, default: T) -> Result<T, ConfigError> {
        Ok(self.parse(key)?.unwrap_or(default))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_text() {
        let m = parse_config_text("# comment\nset = 0,1\n\ntrunc=63 # inline\n").unwrap();
        assert_eq!(m.get("set").unwrap(), "0,1");
        assert_eq!(m.get("trunc").unwrap(), "63");
        assert!(parse_config_text("bogus=1").is_err());
        assert!(parse_config_text("set").is_err());
    }

    #[test]
    fn seed_precedence() {
        let dir = std::env::temp_dir().join(format!("riesz-lab-config-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("run.cfg");
        std::fs::write(&path, "seed=5\ntrunc=8\n").unwrap();
        let mut opts = Opts { config: Some(path), ..Default::default() };
        assert_eq!(RunConfig::resolve("bounds", &opts, None).unwrap().seed, 5);
        assert_eq!(RunConfig::resolve("bounds", &opts, Some("7".into())).unwrap().seed, 7);
        opts.seed = Some(9);
        opts.trunc = Some("16".into());
        let cfg = RunConfig::resolve("bounds", &opts, Some("7".into())).unwrap();
        assert_eq!(cfg.seed, 9);
        assert_eq!(cfg.get("trunc"), Some("16"));
        assert_eq!(RunConfig::resolve("bounds", &Opts::default(), None).unwrap().seed, 0);
        std::fs::remove_dir_all(dir).ok();
    }
}
