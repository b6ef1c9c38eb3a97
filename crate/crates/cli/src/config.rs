//! Experiment specification: flat dotted keys from presets, a TOML file and
//! `--set key=value` overrides, applied in that order.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use nopo_xy::network::{injection_rate_from_transmittance, DEFAULT_ROUND_TRIP};
use nopo_xy::opo::OpoParams;
use toml::{Table, Value};

use crate::error::{CliError, CliResult};
use crate::units::{quantity, quantity_list, Kind};

/// Every accepted key with its meaning, used for validation and `--help`.
pub const KEYS: &[(&str, &str)] = &[
    ("model", "kuramoto | split | full (default kuramoto)"),
    ("graph.topology", "ring | chain (default ring)"),
    ("graph.n_spins", "number of oscillators (default 256)"),
    ("graph.j", "coupling strength J (default 1)"),
    ("coupling.gamma_inj", "injection rate, e.g. \"13.6 kHz\""),
    ("coupling.transmittance", "delay-line power transmittance T; gamma_inj = 2*sqrt(T)/round_trip"),
    ("coupling.round_trip", "cavity round-trip time (default \"5 us\")"),
    ("noise.d_theta", "phase diffusion coefficient, e.g. \"0.44 kHz\""),
    ("noise.d", "field diffusion coefficient D (split/full); d_theta = D / n_ss"),
    ("sweep.beta_set", "list of target inverse temperatures"),
    ("sweep.vary", "d_theta | gamma_inj: which rate the beta grid sets (default d_theta)"),
    ("opo.gamma_s", "signal decay rate (default \"13.6 MHz\")"),
    ("opo.gamma_i", "idler decay rate (default \"1.36 GHz\")"),
    ("opo.gamma_p", "pump decay rate (default \"1.36 GHz\")"),
    ("opo.kappa", "nonlinear coupling (default 1)"),
    ("opo.pump_ratio", "pump amplitude over threshold (default 2)"),
    ("acquisition.t_a", "acquisition times, e.g. [\"1 ms\", \"10 ms\"]"),
    ("run.n_trajectories", "independent trajectories per beta point (default 200)"),
    ("run.master_seed", "master seed (default 1)"),
    ("run.dt", "integration step (default: 1% of the fastest rate)"),
    ("run.initial", "uniform_random | aligned | ring_equilibrium (default uniform_random)"),
    ("output.dir", "output directory (default \"out\")"),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Model {
    Kuramoto,
    Split,
    Full,
}

impl Model {
    pub fn name(self) -> &'static str {
        match self {
            Model::Kuramoto => "kuramoto",
            Model::Split => "split",
            Model::Full => "full",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Topology {
    Ring,
    Chain,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Vary {
    DTheta,
    GammaInj,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Initial {
    UniformRandom,
    Aligned,
    RingEquilibrium,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Noise {
    DTheta(f64),
    Field(f64),
}

/// A validated experiment specification, in seconds and Hz.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub model: Model,
    pub topology: Topology,
    pub n_spins: usize,
    pub j: f64,
    pub gamma_inj: Option<f64>,
    pub transmittance: Option<f64>,
    pub round_trip: f64,
    pub noise: Option<Noise>,
    pub beta_set: Option<Vec<f64>>,
    pub vary: Vary,
    pub opo: OpoParams,
    pub t_a: Vec<f64>,
    pub n_trajectories: usize,
    pub master_seed: u64,
    pub dt: Option<f64>,
    pub initial: Initial,
    pub output_dir: PathBuf,
}

/// One resolved point of a sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub beta_set: f64,
    pub gamma_inj: f64,
    pub d_theta: f64,
}

/// Flattened configuration: dotted key → value.
pub type Flat = BTreeMap<String, Value>;

fn flatten_into(prefix: &str, table: &Table, out: &mut Flat) {
    for (k, v) in table {
        let key = if prefix.is_empty() {
            k.clone()
        } else {
            format!("{prefix}.{k}")
        };
        match v {
            Value::Table(t) => flatten_into(&key, t, out),
            other => {
                out.insert(key, other.clone());
            }
        }
    }
}

pub fn parse_toml(text: &str, origin: &str) -> CliResult<Flat> {
    let table: Table = text
        .parse()
        .map_err(|e: toml::de::Error| CliError::spec(origin, e.to_string()))?;
    let mut out = Flat::new();
    flatten_into("", &table, &mut out);
    Ok(out)
}

pub fn load_file(path: &Path) -> CliResult<Flat> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_toml(&text, &path.display().to_string())
}

/// Parses `key=value`; the value is read as a TOML value, falling back to a
/// bare string.
pub fn parse_override(arg: &str) -> CliResult<(String, Value)> {
    let (k, v) = arg
        .split_once('=')
        .ok_or_else(|| CliError::spec(arg, "override must look like key=value"))?;
    let key = k.trim().to_string();
    let raw = v.trim();
    let value = match format!("v = {raw}").parse::<Table>() {
        Ok(mut t) => t.remove("v").unwrap_or_else(|| Value::String(raw.to_string())),
        Err(_) => Value::String(raw.to_string()),
    };
    Ok((key, value))
}

fn strs(pairs: &[(&str, Value)]) -> Flat {
    pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}

fn s(v: &str) -> Value {
    Value::String(v.into())
}

fn paper_grid() -> Value {
    Value::Array([2.8, 5.7, 15.0, 31.0].iter().map(|&b| Value::Float(b)).collect())
}

fn paper_times() -> Value {
    Value::Array(["1 ms", "10 ms", "100 ms", "1000 ms"].iter().map(|t| s(t)).collect())
}

/// Built-in configurations.
pub fn preset(name: &str) -> CliResult<Flat> {
    match name {
        "fig5" => Ok(strs(&[
            ("model", s("kuramoto")),
            ("coupling.gamma_inj", s("13.64 kHz")),
            ("sweep.vary", s("d_theta")),
            ("sweep.beta_set", paper_grid()),
            ("acquisition.t_a", paper_times()),
        ])),
        "appendix-c" => Ok(strs(&[
            ("model", s("kuramoto")),
            ("noise.d_theta", s("0.44 kHz")),
            ("sweep.vary", s("gamma_inj")),
            ("sweep.beta_set", paper_grid()),
            ("acquisition.t_a", paper_times()),
        ])),
        "uncoupled" => Ok(strs(&[
            ("model", s("kuramoto")),
            ("coupling.gamma_inj", Value::Integer(0)),
            ("noise.d_theta", s("0.44 kHz")),
            ("acquisition.t_a", Value::Array(vec![s("1 ms"), s("10 ms"), s("100 ms")])),
        ])),
        other => Err(CliError::spec(
            "preset",
            format!("unknown preset `{other}` (expected fig5, appendix-c or uncoupled)"),
        )),
    }
}

struct Reader<'a> {
    flat: &'a Flat,
}

impl Reader<'_> {
    fn get(&self, key: &str) -> Option<&Value> {
        self.flat.get(key)
    }

    fn string(&self, key: &str, default: &str) -> CliResult<String> {
        match self.get(key) {
            None => Ok(default.to_string()),
            Some(Value::String(s)) => Ok(s.clone()),
            Some(v) => Err(CliError::spec(key, format!("expected a string, got `{v}`"))),
        }
    }

    fn qty(&self, key: &str, kind: Kind) -> CliResult<Option<f64>> {
        self.get(key).map(|v| quantity(key, v, kind)).transpose()
    }

    fn qty_or(&self, key: &str, kind: Kind, default: f64) -> CliResult<f64> {
        Ok(self.qty(key, kind)?.unwrap_or(default))
    }

    fn uint(&self, key: &str, default: u64) -> CliResult<u64> {
        match self.get(key) {
            None => Ok(default),
            Some(Value::Integer(i)) if *i >= 0 => Ok(*i as u64),
            Some(Value::String(s)) => s
                .trim()
                .parse()
                .map_err(|_| CliError::spec(key, format!("expected a non-negative integer, got `{s}`"))),
            Some(v) => Err(CliError::spec(key, format!("expected a non-negative integer, got `{v}`"))),
        }
    }
}

impl ExperimentSpec {
    pub fn from_flat(flat: &Flat) -> CliResult<Self> {
        for key in flat.keys() {
            if !KEYS.iter().any(|(k, _)| k == key) {
                return Err(CliError::spec(key.as_str(), "unknown key"));
            }
        }
        let r = Reader { flat };
        let model = match r.string("model", "kuramoto")?.as_str() {
            "kuramoto" => Model::Kuramoto,
            "split" => Model::Split,
            "full" => Model::Full,
            other => return Err(CliError::spec("model", format!("unknown model `{other}`"))),
        };
        let topology = match r.string("graph.topology", "ring")?.as_str() {
            "ring" => Topology::Ring,
            "chain" => Topology::Chain,
            other => return Err(CliError::spec("graph.topology", format!("unknown topology `{other}`"))),
        };
        let vary = match r.string("sweep.vary", "d_theta")?.as_str() {
            "d_theta" => Vary::DTheta,
            "gamma_inj" => Vary::GammaInj,
            other => return Err(CliError::spec("sweep.vary", format!("expected d_theta or gamma_inj, got `{other}`"))),
        };
        let initial = match r.string("run.initial", "uniform_random")?.as_str() {
            "uniform_random" => Initial::UniformRandom,
            "aligned" => Initial::Aligned,
            "ring_equilibrium" => Initial::RingEquilibrium,
            other => return Err(CliError::spec("run.initial", format!("unknown initial state `{other}`"))),
        };

        let gamma_inj = r.qty("coupling.gamma_inj", Kind::Rate)?;
        let transmittance = r.qty("coupling.transmittance", Kind::Number)?;
        if gamma_inj.is_some() && transmittance.is_some() {
            return Err(CliError::spec(
                "coupling.gamma_inj",
                "give exactly one of coupling.gamma_inj and coupling.transmittance",
            ));
        }
        let d_theta = r.qty("noise.d_theta", Kind::Rate)?;
        let field_d = r.qty("noise.d", Kind::Rate)?;
        let noise = match (d_theta, field_d) {
            (Some(_), Some(_)) => {
                return Err(CliError::spec("noise.d_theta", "give exactly one of noise.d_theta and noise.d"))
            }
            (Some(x), None) => Some(Noise::DTheta(x)),
            (None, Some(x)) => Some(Noise::Field(x)),
            (None, None) => None,
        };
        let beta_set = r
            .get("sweep.beta_set")
            .map(|v| quantity_list("sweep.beta_set", v, Kind::Number))
            .transpose()?;

        let opo = OpoParams::with_pump_ratio(
            r.qty_or("opo.gamma_s", Kind::Rate, 13.6e6)?,
            r.qty_or("opo.gamma_i", Kind::Rate, 1.36e9)?,
            r.qty_or("opo.gamma_p", Kind::Rate, 1.36e9)?,
            r.qty_or("opo.kappa", Kind::Number, 1.0)?,
            r.qty_or("opo.pump_ratio", Kind::Number, 2.0)?,
        )
        .map_err(|e| CliError::spec("opo", e.to_string()))?;

        let t_a = match r.get("acquisition.t_a") {
            Some(v) => quantity_list("acquisition.t_a", v, Kind::Time)?,
            None => return Err(CliError::spec("acquisition.t_a", "missing acquisition times")),
        };

        let spec = ExperimentSpec {
            model,
            topology,
            n_spins: r.uint("graph.n_spins", 256)? as usize,
            j: r.qty_or("graph.j", Kind::Number, 1.0)?,
            gamma_inj,
            transmittance,
            round_trip: r.qty_or("coupling.round_trip", Kind::Time, DEFAULT_ROUND_TRIP)?,
            noise,
            beta_set,
            vary,
            opo,
            t_a,
            n_trajectories: r.uint("run.n_trajectories", 200)? as usize,
            master_seed: r.uint("run.master_seed", 1)?,
            dt: r.qty("run.dt", Kind::Time)?,
            initial,
            output_dir: PathBuf::from(r.string("output.dir", "out")?),
        };
        spec.validate()?;
        Ok(spec)
    }

    fn validate(&self) -> CliResult<()> {
        let min_spins = match self.topology {
            Topology::Ring => 3,
            Topology::Chain => 2,
        };
        if self.n_spins < min_spins {
            return Err(CliError::spec("graph.n_spins", format!("need at least {min_spins} spins")));
        }
        if !self.j.is_finite() {
            return Err(CliError::spec("graph.j", "must be finite"));
        }
        if self.t_a.is_empty() {
            return Err(CliError::spec("acquisition.t_a", "must not be empty"));
        }
        if self.t_a.iter().any(|&t| !(t > 0.0)) {
            return Err(CliError::spec("acquisition.t_a", "times must be positive"));
        }
        if self.t_a.windows(2).any(|w| w[1] <= w[0]) {
            return Err(CliError::spec("acquisition.t_a", "times must be strictly increasing"));
        }
        if self.n_trajectories == 0 {
            return Err(CliError::spec("run.n_trajectories", "must be at least 1"));
        }
        if let Some(dt) = self.dt {
            if !(dt > 0.0) {
                return Err(CliError::spec("run.dt", "must be positive"));
            }
        }
        if self.initial == Initial::RingEquilibrium && (self.topology != Topology::Ring || self.j != 1.0) {
            return Err(CliError::spec("run.initial", "ring_equilibrium needs graph.topology = ring and graph.j = 1"));
        }
        if let Some(grid) = &self.beta_set {
            if grid.is_empty() || grid.iter().any(|&b| !(b > 0.0)) {
                return Err(CliError::spec("sweep.beta_set", "values must be positive"));
            }
            match self.vary {
                Vary::DTheta => {
                    if self.noise.is_some() {
                        return Err(CliError::spec("noise", "noise is set by sweep.beta_set when sweep.vary = d_theta"));
                    }
                    if self.gamma_inj.is_none() && self.transmittance.is_none() {
                        return Err(CliError::spec("coupling.gamma_inj", "sweep.vary = d_theta needs a fixed injection rate"));
                    }
                }
                Vary::GammaInj => {
                    if self.gamma_inj.is_some() || self.transmittance.is_some() {
                        return Err(CliError::spec(
                            "coupling.gamma_inj",
                            "the injection rate is set by sweep.beta_set when sweep.vary = gamma_inj",
                        ));
                    }
                    if self.noise.is_none() {
                        return Err(CliError::spec("noise.d_theta", "sweep.vary = gamma_inj needs a fixed noise level"));
                    }
                }
            }
        } else {
            if self.gamma_inj.is_none() && self.transmittance.is_none() {
                return Err(CliError::spec("coupling.gamma_inj", "give coupling.gamma_inj or coupling.transmittance"));
            }
            if self.noise.is_none() {
                return Err(CliError::spec("noise.d_theta", "give noise.d_theta or noise.d"));
            }
        }
        if self.model == Model::Kuramoto && matches!(self.noise, Some(Noise::Field(_))) {
            // converted through the OPO steady state, which must then exist
            self.steady_state()?;
        }
        self.points()?;
        Ok(())
    }

    fn steady_state(&self) -> CliResult<f64> {
        let n = nopo_xy::opo::steady_state_photon_number(&self.opo)?;
        if n <= 0.0 {
            return Err(CliError::spec("opo.pump_ratio", "oscillators must be pumped above threshold"));
        }
        Ok(n)
    }

    fn fixed_gamma_inj(&self) -> CliResult<f64> {
        match (self.gamma_inj, self.transmittance) {
            (Some(g), _) if g >= 0.0 => Ok(g),
            (Some(_), _) => Err(CliError::spec("coupling.gamma_inj", "must be non-negative")),
            (None, Some(t)) => injection_rate_from_transmittance(t, self.round_trip)
                .map_err(|e| CliError::spec("coupling.transmittance", e.to_string())),
            (None, None) => Err(CliError::spec("coupling.gamma_inj", "missing")),
        }
    }

    fn fixed_d_theta(&self) -> CliResult<f64> {
        let d = match self.noise {
            Some(Noise::DTheta(d)) => d,
            Some(Noise::Field(d)) => d / self.steady_state()?,
            None => return Err(CliError::spec("noise.d_theta", "missing")),
        };
        if !(d >= 0.0) {
            return Err(CliError::spec("noise", "must be non-negative"));
        }
        Ok(d)
    }

    /// The `(β_set, γ_inj, D_θ)` points of the sweep.
    pub fn points(&self) -> CliResult<Vec<Point>> {
        match (&self.beta_set, self.vary) {
            (Some(grid), Vary::DTheta) => {
                let g = self.fixed_gamma_inj()?;
                if !(g > 0.0) {
                    return Err(CliError::spec("coupling.gamma_inj", "must be positive to set beta via d_theta"));
                }
                Ok(grid.iter().map(|&b| Point { beta_set: b, gamma_inj: g, d_theta: g / b }).collect())
            }
            (Some(grid), Vary::GammaInj) => {
                let d = self.fixed_d_theta()?;
                if !(d > 0.0) {
                    return Err(CliError::spec("noise.d_theta", "must be positive to set beta via gamma_inj"));
                }
                Ok(grid.iter().map(|&b| Point { beta_set: b, gamma_inj: b * d, d_theta: d }).collect())
            }
            (None, _) => {
                let g = self.fixed_gamma_inj()?;
                let d = self.fixed_d_theta()?;
                let beta_set = if g == 0.0 {
                    0.0
                } else if d > 0.0 {
                    g / d
                } else {
                    f64::INFINITY
                };
                Ok(vec![Point { beta_set, gamma_inj: g, d_theta: d }])
            }
        }
    }

    /// Full-scale protocol: N = 5000 and 1000 trajectories.
    pub fn paper_scale(mut self) -> Self {
        self.n_spins = 5000;
        self.n_trajectories = 1000;
        self
    }
}

/// Renders [`KEYS`] for help text.
pub fn key_help() -> String {
    let mut out = String::from("Config keys (TOML, flat dotted names; values may carry kHz/ms/us suffixes):\n");
    for (k, d) in KEYS {
        out.push_str(&format!("  {k:<24} {d}\n"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(text: &str) -> CliResult<ExperimentSpec> {
        ExperimentSpec::from_flat(&parse_toml(text, "test").unwrap())
    }

    #[test]
    fn fig5_grid_sets_d_theta() {
        let s = ExperimentSpec::from_flat(&preset("fig5").unwrap()).unwrap();
        let pts = s.points().unwrap();
        assert_eq!(pts.len(), 4);
        assert!((pts[3].d_theta - 440.0).abs() < 1e-9);
        assert_eq!(s.t_a, vec![1e-3, 1e-2, 1e-1, 1.0]);
    }

    #[test]
    fn appendix_c_grid_sets_gamma_inj() {
        let s = ExperimentSpec::from_flat(&preset("appendix-c").unwrap()).unwrap();
        let pts = s.points().unwrap();
        assert!((pts[0].gamma_inj - 2.8 * 440.0).abs() < 1e-9);
        assert!(pts.iter().all(|p| p.d_theta == 440.0));
    }

    #[test]
    fn transmittance_converts() {
        let s = spec("coupling.transmittance = 0.25\nnoise.d_theta = \"1 kHz\"\nacquisition.t_a = [\"1 ms\"]").unwrap();
        assert!((s.points().unwrap()[0].gamma_inj - 2e5).abs() < 1e-6);
    }

    #[test]
    fn errors_name_the_field() {
        let e = spec("coupling.gamma_inj = 1\ncoupling.transmittance = 0.1\nnoise.d_theta = 1\nacquisition.t_a = [1]")
            .unwrap_err();
        assert!(e.to_string().contains("coupling.gamma_inj"), "{e}");
        let e = spec("coupling.gamma_inj = 1\nnoise.d_theta = 1\nacquisition.t_a = [2, 1]").unwrap_err();
        assert!(e.to_string().contains("acquisition.t_a"));
        let e = spec("bogus.key = 1").unwrap_err();
        assert!(e.to_string().contains("bogus.key"));
    }

    #[test]
    fn overrides_parse_values() {
        assert_eq!(parse_override("graph.n_spins=64").unwrap().1, Value::Integer(64));
        assert_eq!(parse_override("noise.d_theta=2 kHz").unwrap().1, Value::String("2 kHz".into()));
        assert_eq!(parse_override("run.initial=aligned").unwrap().1, Value::String("aligned".into()));
        assert!(parse_override("novalue").is_err());
    }
}
