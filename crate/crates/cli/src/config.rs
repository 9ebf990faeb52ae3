//! Flag parsing, config files and validation into a [`RunConfig`].

use std::collections::BTreeMap;
use std::path::PathBuf;

use alf_core::mass::{QuadratureSpec, RadiusSchedule};
use alf_core::zoo::{Chart, FamilySpec};
use clap::{Parser, ValueEnum};

use crate::report::Failure;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Mass,
    Curvature,
    Modes,
    SolveExterior,
    Norms,
    Invariance,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Self::Mass => "mass",
            Self::Curvature => "curvature",
            Self::Modes => "modes",
            Self::SolveExterior => "solve-exterior",
            Self::Norms => "norms",
            Self::Invariance => "invariance",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Output {
    Json,
    Csv,
    Table,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ChartArg {
    Area,
    Isotropic,
}

/// Masses and exterior mode analysis for ALF metrics.
#[derive(Debug, Default, Parser)]
#[command(name = "alf-mass", version)]
pub struct Flags {
    /// What to run; may also come from the config file.
    #[arg(value_enum)]
    pub command: Option<Command>,
    /// Key-value TOML file; flags win over its entries.
    #[arg(long)]
    pub config: Option<PathBuf>,

    /// flat, schwarzschild, reissner-nordstrom or taub-nut.
    #[arg(long)]
    pub family: Option<String>,
    /// Total dimension of a Schwarzschild metric.
    #[arg(long)]
    pub n: Option<u32>,
    /// Base dimension.
    #[arg(long)]
    pub m: Option<u32>,
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub mass_param: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub charge: Option<f64>,
    /// Monopole charge k (Hopf models and Taub-NUT).
    #[arg(long)]
    pub monopole_k: Option<u32>,
    #[arg(long)]
    pub fiber_length: Option<f64>,
    #[arg(long, value_enum)]
    pub chart: Option<ChartArg>,

    #[arg(long)]
    pub r0: Option<f64>,
    #[arg(long)]
    pub growth: Option<f64>,
    #[arg(long)]
    pub count: Option<usize>,
    #[arg(long)]
    pub polar_nodes: Option<usize>,
    #[arg(long)]
    pub azimuth_nodes: Option<usize>,
    #[arg(long)]
    pub fiber_nodes: Option<usize>,

    /// Largest spherical-harmonic degree for `modes`.
    #[arg(long)]
    pub jmax: Option<usize>,
    /// Harmonic degree of the mode for `solve-exterior` and `norms`.
    #[arg(long)]
    pub j: Option<usize>,
    /// Fiber wavenumber index of the mode.
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long, allow_negative_numbers = true)]
    pub delta: Option<f64>,
    /// Exponent a of the synthetic profile r^a.
    #[arg(long, allow_negative_numbers = true)]
    pub exponent: Option<f64>,
    /// CSV of `r,value` rows on a log-uniform grid.
    #[arg(long)]
    pub source: Option<PathBuf>,
    #[arg(long)]
    pub r_min: Option<f64>,
    #[arg(long)]
    pub r_max: Option<f64>,
    #[arg(long)]
    pub grid_points: Option<usize>,

    #[arg(long, value_enum)]
    pub output: Option<Output>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Every key a config file may set, in flag spelling.
pub const CONFIG_KEYS: [&str; 28] = [
    "command",
    "family",
    "n",
    "m",
    "gamma",
    "mass-param",
    "charge",
    "monopole-k",
    "fiber-length",
    "chart",
    "r0",
    "growth",
    "count",
    "polar-nodes",
    "azimuth-nodes",
    "fiber-nodes",
    "jmax",
    "j",
    "k",
    "delta",
    "exponent",
    "source",
    "r-min",
    "r-max",
    "grid-points",
    "output",
    "out",
    "config",
];

fn bad(key: &str, reason: impl std::fmt::Display) -> Failure {
    Failure::config(key, reason)
}

fn text<'a>(v: &'a toml::Value, key: &str) -> Result<&'a str, Failure> {
    v.as_str().ok_or_else(|| bad(key, "expected a string"))
}

fn real(v: &toml::Value, key: &str) -> Result<f64, Failure> {
    match v {
        toml::Value::Float(x) => Ok(*x),
        toml::Value::Integer(i) => Ok(*i as f64),
        _ => Err(bad(key, "expected a number")),
    }
}

fn count<T: TryFrom<i64>>(v: &toml::Value, key: &str) -> Result<T, Failure> {
    v.as_integer()
        .and_then(|i| T::try_from(i).ok())
        .ok_or_else(|| bad(key, "expected a non-negative integer"))
}

fn choice<T: ValueEnum>(v: &toml::Value, key: &str) -> Result<T, Failure> {
    T::from_str(text(v, key)?, false).map_err(|e| bad(key, e))
}

impl Flags {
    /// Reads a TOML config file into flag form.
    pub fn from_toml(source: &str) -> Result<Self, Failure> {
        let table: toml::Table = source.parse().map_err(|e: toml::de::Error| bad("config", e.message()))?;
        let mut f = Self::default();
        for (key, v) in &table {
            let k = key.as_str();
            match k {
                "command" => f.command = Some(choice(v, k)?),
                "family" => f.family = Some(text(v, k)?.to_owned()),
                "n" => f.n = Some(count(v, k)?),
                "m" => f.m = Some(count(v, k)?),
                "gamma" => f.gamma = Some(real(v, k)?),
                "mass-param" => f.mass_param = Some(real(v, k)?),
                "charge" => f.charge = Some(real(v, k)?),
                "monopole-k" => f.monopole_k = Some(count(v, k)?),
                "fiber-length" => f.fiber_length = Some(real(v, k)?),
                "chart" => f.chart = Some(choice(v, k)?),
                "r0" => f.r0 = Some(real(v, k)?),
                "growth" => f.growth = Some(real(v, k)?),
                "count" => f.count = Some(count(v, k)?),
                "polar-nodes" => f.polar_nodes = Some(count(v, k)?),
                "azimuth-nodes" => f.azimuth_nodes = Some(count(v, k)?),
                "fiber-nodes" => f.fiber_nodes = Some(count(v, k)?),
                "jmax" => f.jmax = Some(count(v, k)?),
                "j" => f.j = Some(count(v, k)?),
                "k" => f.k = Some(count(v, k)?),
                "delta" => f.delta = Some(real(v, k)?),
                "exponent" => f.exponent = Some(real(v, k)?),
                "source" => f.source = Some(text(v, k)?.into()),
                "r-min" => f.r_min = Some(real(v, k)?),
                "r-max" => f.r_max = Some(real(v, k)?),
                "grid-points" => f.grid_points = Some(count(v, k)?),
                "output" => f.output = Some(choice(v, k)?),
                "out" => f.out = Some(text(v, k)?.into()),
                "config" => return Err(bad(k, "config files cannot include other config files")),
                _ => return Err(bad(k, format!("unknown config key; expected one of {}", CONFIG_KEYS.join(", ")))),
            }
        }
        Ok(f)
    }

    /// Fills every unset field from `base`.
    pub fn or(self, base: Self) -> Self {
        macro_rules! pick {
            ($($field:ident),*) => {
                Self { $($field: self.$field.or(base.$field)),* }
            };
        }
        pick!(
            command, config, family, n, m, gamma, mass_param, charge, monopole_k, fiber_length, chart, r0, growth,
            count, polar_nodes, azimuth_nodes, fiber_nodes, jmax, j, k, delta, exponent, source, r_min, r_max,
            grid_points, output, out
        )
    }

    /// The family parameters that were given, keyed by flag name.
    fn params(&self) -> BTreeMap<String, f64> {
        let entries = [
            ("n", self.n.map(f64::from)),
            ("m", self.m.map(f64::from)),
            ("gamma", self.gamma),
            ("mass-param", self.mass_param),
            ("charge", self.charge),
            ("monopole-k", self.monopole_k.map(f64::from)),
            ("fiber-length", self.fiber_length),
        ];
        entries
            .into_iter()
            .filter_map(|(k, v)| v.map(|v| (k.to_owned(), v)))
            .collect()
    }
}

fn family_keys(name: &str) -> &'static [&'static str] {
    match name {
        "flat" => &["m", "monopole-k", "fiber-length"],
        "schwarzschild" => &["n", "gamma"],
        "reissner-nordstrom" => &["mass-param", "charge"],
        "taub-nut" => &["mass-param", "monopole-k"],
        _ => &[],
    }
}

/// Settings for the radial-profile commands.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeSettings {
    pub m: usize,
    pub j: usize,
    pub k: usize,
    pub fiber_length: f64,
    pub delta: Option<f64>,
    pub exponent: Option<f64>,
    pub source: Option<PathBuf>,
    pub r_min: f64,
    pub r_max: f64,
    pub grid_points: usize,
}

/// A validated run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub family: Option<FamilySpec>,
    pub params: BTreeMap<String, f64>,
    pub schedule: RadiusSchedule,
    pub quadrature: QuadratureSpec,
    pub jmax: usize,
    pub modes: ModeSettings,
    pub output: Output,
    pub out_path: Option<PathBuf>,
}

impl RunConfig {
    pub fn from_flags(f: Flags) -> Result<Self, Failure> {
        let command = f.command.ok_or_else(|| bad("command", "missing; pass it first or set `command`"))?;
        let chart = match f.chart.unwrap_or(ChartArg::Isotropic) {
            ChartArg::Area => Chart::AreaRadial,
            ChartArg::Isotropic => Chart::Isotropic,
        };
        let uses_family = matches!(command, Command::Mass | Command::Curvature | Command::Invariance);
        let params = f.params();
        let family = if uses_family {
            let name = f.family.as_deref().ok_or_else(|| bad("family", "required by this command"))?;
            let allowed = family_keys(name);
            if let Some(extra) = params.keys().find(|k| !allowed.is_empty() && !allowed.contains(&k.as_str())) {
                return Err(bad(extra, format!("does not apply to family `{name}`")));
            }
            if f.chart.is_some() && !matches!(name, "schwarzschild" | "reissner-nordstrom") {
                return Err(bad("chart", format!("family `{name}` has a single chart")));
            }
            Some(FamilySpec::from_params(name, &params, chart).map_err(Failure::from)?)
        } else {
            None
        };
        if command == Command::Invariance && !matches!(family, Some(FamilySpec::Schwarzschild { .. } | FamilySpec::ReissnerNordstrom { .. })) {
            return Err(bad("family", "invariance needs schwarzschild or reissner-nordstrom"));
        }

        let d = RadiusSchedule::default();
        let schedule = RadiusSchedule::new(f.r0.unwrap_or(d.r0), f.growth.unwrap_or(d.growth), f.count.unwrap_or(d.count))?;
        let q = QuadratureSpec::default();
        let quadrature = QuadratureSpec::new(
            f.polar_nodes.unwrap_or(q.polar_nodes),
            f.azimuth_nodes.unwrap_or(q.azimuth_nodes),
            f.fiber_nodes.unwrap_or(q.fiber_nodes),
        )?;

        let needs_m = matches!(command, Command::Modes | Command::SolveExterior | Command::Norms);
        let m = match f.m {
            Some(m) => m as usize,
            None if needs_m => return Err(bad("m", "required by this command")),
            None => 3,
        };
        if command == Command::Norms && f.delta.is_none() {
            return Err(bad("delta", "required by norms"));
        }
        if f.source.is_some() && f.exponent.is_some() {
            return Err(bad("exponent", "give either a source file or an exponent"));
        }
        let grid = alf_core::modes::RadialGrid::default();
        let modes = ModeSettings {
            m,
            j: f.j.unwrap_or(0),
            k: f.k.unwrap_or(0),
            fiber_length: f.fiber_length.unwrap_or(1.0),
            delta: f.delta,
            exponent: f.exponent,
            source: f.source,
            r_min: f.r_min.unwrap_or(grid.s_min.exp()),
            r_max: f.r_max.unwrap_or(grid.s_max.exp()),
            grid_points: f.grid_points.unwrap_or(grid.n_points),
        };
        Ok(Self {
            command,
            family,
            params,
            schedule,
            quadrature,
            jmax: f.jmax.unwrap_or(3),
            modes,
            output: f.output.unwrap_or(Output::Json),
            out_path: f.out,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Flags {
        Flags::try_parse_from(std::iter::once("alf-mass").chain(args.iter().copied())).unwrap()
    }

    #[test]
    fn flags_override_config_entries() {
        let file = Flags::from_toml("command = \"mass\"\nfamily = \"schwarzschild\"\nn = 5\ngamma = 2.0\nr0 = 8").unwrap();
        let cfg = RunConfig::from_flags(parse(&["--gamma", "1"]).or(file)).unwrap();
        assert_eq!(cfg.command, Command::Mass);
        assert_eq!(cfg.params["gamma"], 1.0);
        assert_eq!(cfg.params["n"], 5.0);
        assert_eq!(cfg.schedule.r0, 8.0);
    }

    #[test]
    fn config_errors_name_the_key() {
        let key = |r: Result<Flags, Failure>| r.unwrap_err().key;
        assert_eq!(key(Flags::from_toml("gama = 1.0")).as_deref(), Some("gama"));
        assert_eq!(key(Flags::from_toml("gamma = \"one\"")).as_deref(), Some("gamma"));
        assert_eq!(key(Flags::from_toml("n = -4")).as_deref(), Some("n"));

        let run = |args: &[&str]| RunConfig::from_flags(parse(args)).unwrap_err().key;
        assert_eq!(run(&["mass", "--family", "schwarzschild", "--n", "4"]).as_deref(), Some("gamma"));
        assert_eq!(run(&["mass", "--family", "kerr"]).as_deref(), Some("family"));
        assert_eq!(run(&["mass", "--family", "schwarzschild", "--n", "4", "--gamma", "1", "--charge", "1"]).as_deref(), Some("charge"));
        assert_eq!(run(&["mass", "--family", "flat", "--m", "4", "--monopole-k", "1"]).as_deref(), Some("m"));
        assert_eq!(run(&["mass", "--family", "flat", "--fiber-nodes", "5"]).as_deref(), Some("fiber-nodes"));
        assert_eq!(run(&["mass", "--family", "flat", "--r0", "0.5"]).as_deref(), Some("r0"));
        assert_eq!(run(&["modes"]).as_deref(), Some("m"));
        assert_eq!(run(&["norms", "--m", "3"]).as_deref(), Some("delta"));
        assert_eq!(run(&["invariance", "--family", "taub-nut", "--mass-param", "1"]).as_deref(), Some("family"));
        assert_eq!(run(&[]).as_deref(), Some("command"));
    }

    #[test]
    fn every_config_key_is_accepted() {
        for key in CONFIG_KEYS {
            let value = match key {
                "command" => "\"mass\"",
                "family" | "source" | "out" => "\"x\"",
                "chart" => "\"area\"",
                "output" => "\"csv\"",
                "gamma" | "mass-param" | "charge" | "fiber-length" | "r0" | "growth" | "delta" | "exponent" | "r-min"
                | "r-max" => "1.5",
                "config" => continue,
                _ => "4",
            };
            Flags::from_toml(&format!("{key} = {value}")).unwrap();
        }
    }
}
