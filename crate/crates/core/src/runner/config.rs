//! JSON run configuration.

use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::analysis::EngineKind;
use crate::error::{Error, Result};
use crate::model::ProductState;
use crate::statevector::{DEFAULT_CAP, SPECTRUM_CAP};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    Sweep,
    StopRepeat,
    CrossingScan,
    Scaling,
    Spectrum,
    Teleport,
    SreFamilies,
    Compare,
}

impl Experiment {
    pub fn as_str(self) -> &'static str {
        match self {
            Experiment::Sweep => "sweep",
            Experiment::StopRepeat => "stop-repeat",
            Experiment::CrossingScan => "crossing-scan",
            Experiment::Scaling => "scaling",
            Experiment::Spectrum => "spectrum",
            Experiment::Teleport => "teleport",
            Experiment::SreFamilies => "sre-families",
            Experiment::Compare => "compare",
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EngineChoice {
    Fermion,
    Statevector,
    Both,
}

impl EngineChoice {
    pub fn kinds(self) -> Vec<EngineKind> {
        match self {
            EngineChoice::Fermion => vec![EngineKind::Fermion],
            EngineChoice::Statevector => vec![EngineKind::Statevector],
            EngineChoice::Both => vec![EngineKind::Fermion, EngineKind::Statevector],
        }
    }
}

/// A single value, an explicit list, or an inclusive arithmetic range.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Grid<T> {
    One(T),
    List(Vec<T>),
    Range { start: T, stop: T, step: T },
}

pub trait GridValue: Copy + PartialOrd + fmt::Debug {
    fn range(start: Self, stop: Self, step: Self) -> Result<Vec<Self>>;
}

impl GridValue for usize {
    fn range(start: Self, stop: Self, step: Self) -> Result<Vec<Self>> {
        if step == 0 {
            return Err(Error::Config("grid step must be positive".into()));
        }
        Ok((start..=stop).step_by(step).collect())
    }
}

impl GridValue for i64 {
    fn range(start: Self, stop: Self, step: Self) -> Result<Vec<Self>> {
        if step <= 0 {
            return Err(Error::Config("grid step must be positive".into()));
        }
        Ok((start..=stop).step_by(step as usize).collect())
    }
}

impl GridValue for f64 {
    fn range(start: Self, stop: Self, step: Self) -> Result<Vec<Self>> {
        if step.is_nan() || step <= 0.0 || !start.is_finite() || !stop.is_finite() {
            return Err(Error::Config(
                "grid needs finite bounds and a positive step".into(),
            ));
        }
        if stop < start {
            return Ok(Vec::new());
        }
        let n = ((stop - start) / step + 1e-9).floor() as usize;
        Ok((0..=n).map(|k| start + step * k as f64).collect())
    }
}

impl<T: GridValue> Grid<T> {
    pub fn values(&self) -> Result<Vec<T>> {
        let v = match self {
            Grid::One(x) => vec![*x],
            Grid::List(xs) => xs.clone(),
            Grid::Range { start, stop, step } => T::range(*start, *stop, *step)?,
        };
        if v.is_empty() {
            return Err(Error::Config(format!("empty grid {self:?}")));
        }
        Ok(v)
    }
}

/// Initial product state, resolved per chain length.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Initial {
    AllPlus,
    EdgesFlipped,
    /// An explicit `+`/`−` string; fixes the chain length.
    Signs(String),
}

impl Initial {
    pub fn state(&self, sites: usize) -> Result<ProductState> {
        match self {
            Initial::AllPlus => Ok(ProductState::all_plus(sites)),
            Initial::EdgesFlipped => Ok(ProductState::edges_flipped(sites)),
            Initial::Signs(s) => {
                let st: ProductState = s.parse()?;
                st.check_sites(sites)?;
                Ok(st)
            }
        }
    }
}

fn default_r0() -> f64 {
    1.0
}

fn default_initial() -> Initial {
    Initial::AllPlus
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("out")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub experiment: Experiment,
    /// Defaults to `both` when every chain fits the statevector engine,
    /// otherwise `fermion`.
    #[serde(default)]
    pub engine: Option<EngineChoice>,
    #[serde(rename = "L", default)]
    pub sites: Option<Grid<usize>>,
    /// Defaults to `L / 2`.
    #[serde(rename = "L_A", default)]
    pub l_a: Option<Grid<usize>>,
    #[serde(rename = "N_steps", default)]
    pub n_steps: Option<Grid<usize>>,
    #[serde(default = "default_r0")]
    pub r0: f64,
    #[serde(default)]
    pub epsilon: Option<Grid<i64>>,
    #[serde(default)]
    pub r: Option<usize>,
    #[serde(default)]
    pub theta: Option<Grid<f64>>,
    #[serde(default)]
    pub theta1: Option<f64>,
    #[serde(default)]
    pub n_ramp: Option<usize>,
    #[serde(default)]
    pub trials: Option<usize>,
    #[serde(default)]
    pub profile: bool,
    #[serde(default = "default_initial")]
    pub initial: Initial,
    /// Cyclic order of `Z_N × Z_N`.
    #[serde(rename = "N", default)]
    pub group_n: Option<usize>,
    #[serde(default)]
    pub m: Option<usize>,
    #[serde(default)]
    pub c: Option<Vec<usize>>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
}

pub const DEFAULT_REPEATS: usize = 200;
pub const DEFAULT_SPECTRUM_STEPS: usize = 100;
pub const DEFAULT_TRIALS: usize = 20;

impl RunConfig {
    /// A config for `experiment` with every optional field unset.
    pub fn new(experiment: Experiment) -> Self {
        Self {
            experiment,
            engine: None,
            sites: None,
            l_a: None,
            n_steps: None,
            r0: default_r0(),
            epsilon: None,
            r: None,
            theta: None,
            theta1: None,
            n_ramp: None,
            trials: None,
            profile: false,
            initial: default_initial(),
            group_n: None,
            m: None,
            c: None,
            seed: 0,
            output_dir: default_output_dir(),
        }
    }

    fn require<'a, T>(&self, v: &'a Option<T>, name: &str) -> Result<&'a T> {
        v.as_ref()
            .ok_or_else(|| Error::Config(format!("{} requires field {name:?}", self.experiment)))
    }

    pub fn sites(&self) -> Result<Vec<usize>> {
        self.require(&self.sites, "L")?.values()
    }

    pub fn n_steps(&self) -> Result<Vec<usize>> {
        match self.experiment {
            Experiment::Spectrum => self
                .n_steps
                .as_ref()
                .map_or(Ok(vec![DEFAULT_SPECTRUM_STEPS]), Grid::values),
            _ => self.require(&self.n_steps, "N_steps")?.values(),
        }
    }

    /// Subsystem sizes for chain length `sites`.
    pub fn l_a(&self, sites: usize) -> Result<Vec<usize>> {
        match &self.l_a {
            Some(g) => g.values(),
            None => Ok(vec![sites / 2]),
        }
    }

    pub fn epsilon(&self) -> Result<Vec<i64>> {
        self.epsilon.as_ref().map_or(Ok(vec![0]), Grid::values)
    }

    pub fn repeats(&self) -> usize {
        self.r.unwrap_or(DEFAULT_REPEATS)
    }

    pub fn thetas(&self) -> Result<Vec<f64>> {
        self.theta
            .as_ref()
            .map_or(Ok(vec![0.0, std::f64::consts::FRAC_PI_2]), Grid::values)
    }

    pub fn trials(&self) -> usize {
        self.trials.unwrap_or(DEFAULT_TRIALS)
    }

    pub fn pumped_charge(&self) -> Vec<usize> {
        self.c.clone().unwrap_or_else(|| vec![1, 0])
    }

    /// Engines to run, after defaulting.
    pub fn engines(&self) -> Result<Vec<EngineKind>> {
        let choice = match self.engine {
            Some(e) => e,
            None => {
                let small = self
                    .sites
                    .as_ref()
                    .map(|g| g.values().map(|v| v.iter().all(|&l| l <= 10)))
                    .transpose()?
                    .unwrap_or(true);
                if small {
                    EngineChoice::Both
                } else {
                    EngineChoice::Fermion
                }
            }
        };
        Ok(choice.kinds())
    }

    /// Checks every invariant the experiment relies on.
    pub fn validate(&self) -> Result<()> {
        if !self.r0.is_finite() {
            return Err(Error::Config("r0 must be finite".into()));
        }
        match self.experiment {
            Experiment::SreFamilies => return self.validate_group(),
            Experiment::Teleport => {
                for l in self.sites()? {
                    if l < 2 {
                        return Err(Error::Config(format!("L = {l} must be at least 2")));
                    }
                    if l > DEFAULT_CAP {
                        return Err(Error::Capacity {
                            sites: l,
                            cap: DEFAULT_CAP,
                        });
                    }
                    self.initial.state(l)?;
                }
                if let Some(t) = self.theta1 {
                    if !(0.0..std::f64::consts::FRAC_PI_4).contains(&t) {
                        return Err(Error::Config(format!("theta1 = {t} must lie in [0, π/4)")));
                    }
                }
                return Ok(());
            }
            _ => {}
        }
        let engines = self.engines()?;
        let needs_statevector = matches!(self.experiment, Experiment::Compare)
            || engines.contains(&EngineKind::Statevector);
        for l in self.sites()? {
            if l < 2 {
                return Err(Error::Config(format!("L = {l} must be at least 2")));
            }
            for l_a in self.l_a(l)? {
                if l_a == 0 || l_a >= l {
                    return Err(Error::Config(format!(
                        "L_A = {l_a} must satisfy 1 ≤ L_A < L = {l}"
                    )));
                }
            }
            if needs_statevector {
                let cap = if self.experiment == Experiment::Spectrum {
                    SPECTRUM_CAP
                } else {
                    DEFAULT_CAP
                };
                if l > cap {
                    return Err(Error::Capacity { sites: l, cap });
                }
            }
            self.initial.state(l)?;
        }
        let steps = self.n_steps()?;
        match self.experiment {
            Experiment::StopRepeat => {
                for &n in &steps {
                    for e in self.epsilon()? {
                        if e.unsigned_abs() as usize > n / 2 {
                            return Err(Error::Config(format!(
                                "|epsilon| = {} exceeds N_steps/2 = {}",
                                e.abs(),
                                n / 2
                            )));
                        }
                    }
                }
            }
            Experiment::CrossingScan => {
                if let Some(&n) = steps
                    .iter()
                    .find(|&&n| n < crate::analysis::MIN_CROSSING_STEPS)
                {
                    return Err(Error::Config(format!(
                        "crossing scans need N_steps ≥ 10, got {n}"
                    )));
                }
            }
            Experiment::Scaling => {
                if self.sites()?.len() < crate::analysis::MIN_SCALING_POINTS {
                    return Err(Error::Config("scaling needs at least 4 values of L".into()));
                }
                if let Some(&n) = steps
                    .iter()
                    .find(|&&n| crate::analysis::fm_tail_window(n) > n + 1)
                {
                    return Err(Error::Config(format!(
                        "N_steps = {n} is too short for a tail fit"
                    )));
                }
            }
            _ => {}
        }
        Ok(())
    }

    fn validate_group(&self) -> Result<()> {
        let n = *self.require(&self.group_n, "N")?;
        let m = *self.require(&self.m, "m")?;
        if n < 1 || m >= n {
            return Err(Error::Config(format!(
                "need N ≥ 1 and 0 ≤ m < N, got N = {n}, m = {m}"
            )));
        }
        let c = self.pumped_charge();
        if c.len() != 2 || c.iter().any(|&x| x >= n) {
            return Err(Error::Config(format!(
                "c = {c:?} must be a pair of residues mod {n}"
            )));
        }
        Ok(())
    }
}

/// Parses and validates a JSON config. Parse errors carry line and column.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let cfg: RunConfig = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
    cfg.validate()?;
    Ok(cfg)
}

pub fn load_config(path: &Path) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path)?;
    parse_config(&text).map_err(|e| match e {
        Error::Config(msg) => Error::Config(format!("{}: {msg}", path.display())),
        other => other,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_sweep_defaults() {
        let c =
            parse_config(r#"{"experiment": "sweep", "L": 4, "L_A": 2, "N_steps": 10}"#).unwrap();
        assert_eq!(
            c.engines().unwrap(),
            vec![EngineKind::Fermion, EngineKind::Statevector]
        );
        assert_eq!(c.r0, 1.0);
        assert_eq!(c.seed, 0);
    }

    #[test]
    fn subsystem_must_be_smaller_than_chain() {
        let e = parse_config(r#"{"experiment": "sweep", "L": 4, "L_A": 4, "N_steps": 10}"#)
            .unwrap_err();
        assert!(matches!(e, Error::Config(_)));
    }

    #[test]
    fn crossing_grid_plan() {
        let c = parse_config(
            r#"{"experiment": "crossing-scan", "L": {"start": 20, "stop": 100, "step": 20}, "N_steps": [1000, 5000, 10000]}"#,
        )
        .unwrap();
        assert_eq!(c.sites().unwrap(), vec![20, 40, 60, 80, 100]);
        assert_eq!(c.sites().unwrap().len() * c.n_steps().unwrap().len(), 15);
        assert_eq!(c.engines().unwrap(), vec![EngineKind::Fermion]);
    }

    #[test]
    fn statevector_capacity() {
        let e = parse_config(
            r#"{"experiment": "sweep", "engine": "statevector", "L": 20, "N_steps": 10}"#,
        )
        .unwrap_err();
        assert!(matches!(e, Error::Capacity { .. }));
    }

    #[test]
    fn parse_errors_locate_the_problem() {
        let e = parse_config("{\n \"experiment\": \"sweep\",\n \"L\": \"four\"\n}").unwrap_err();
        assert!(e.to_string().contains("line"), "{e}");
        let e = parse_config(r#"{"experiment": "sweep", "L": 4, "N_steps": 2, "bogus": 1}"#)
            .unwrap_err();
        assert!(e.to_string().contains("bogus"), "{e}");
    }

    #[test]
    fn float_range() {
        let g = Grid::Range {
            start: 0.0,
            stop: 0.3,
            step: 0.1,
        };
        assert_eq!(g.values().unwrap().len(), 4);
    }
}
