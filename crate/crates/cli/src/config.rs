//! Strict `key=value` experiment configuration.
//!
//! Pairs are separated by whitespace or newlines, `#` starts a comment and
//! `[name]` opens a section named after a command.  Keys outside a section
//! are either global (`command`, `out`, `seed`, `tol_scale`, `jobs`) or
//! belong to the selected command.  Unknown keys, malformed values and
//! repeated keys are errors that name the key and where it was written.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use osw::exact::ProfileKind;

/// Where a key was written.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Origin {
    Line(usize),
    Argument(usize),
}

impl fmt::Display for Origin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Origin::Line(n) => write!(f, "line {n}"),
            Origin::Argument(n) => write!(f, "argument {n}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("{origin}: expected key=value, found `{text}`")]
    Syntax { origin: Origin, text: String },
    #[error("{origin}: unknown section `[{name}]`")]
    UnknownSection { origin: Origin, name: String },
    #[error("{origin}: unknown key `{key}`{}", in_section(.section))]
    UnknownKey { origin: Origin, key: String, section: Option<String> },
    #[error("{origin}: key `{key}` expects {expected}, found `{found}`")]
    Type { origin: Origin, key: String, expected: &'static str, found: String },
    #[error("{origin}: key `{key}`: {constraint}")]
    Range { origin: Origin, key: String, constraint: String },
    #[error("{origin}: key `{key}` repeats {first}")]
    Duplicate { origin: Origin, key: String, first: Origin },
    #[error("no command given; set command=<profile|sim|verify|collapse|cusp|report>")]
    MissingCommand,
}

fn in_section(section: &Option<String>) -> String {
    section.as_ref().map(|s| format!(" in section [{s}]")).unwrap_or_default()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Profile,
    Sim,
    Verify,
    Collapse,
    Cusp,
    Report,
}

impl Command {
    pub const ALL: [Command; 6] =
        [Command::Profile, Command::Sim, Command::Verify, Command::Collapse, Command::Cusp, Command::Report];

    pub fn name(self) -> &'static str {
        match self {
            Command::Profile => "profile",
            Command::Sim => "sim",
            Command::Verify => "verify",
            Command::Collapse => "collapse",
            Command::Cusp => "cusp",
            Command::Report => "report",
        }
    }
}

impl FromStr for Command {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        Command::ALL.into_iter().find(|c| c.name() == s).ok_or(())
    }
}

/// One parsed pair with its section and origin.
#[derive(Debug, Clone)]
struct Entry {
    section: Option<Command>,
    key: String,
    value: String,
    origin: Origin,
}

/// A block of configuration text together with how its positions are reported.
pub enum Source<'a> {
    /// Config file text; positions are line numbers.
    Text(&'a str),
    /// Command-line pairs; positions are argument numbers.
    Arguments(&'a [String]),
}

fn tokenize(source: &Source<'_>) -> Result<Vec<Entry>, ConfigError> {
    let mut entries = Vec::new();
    let mut section = None;
    let mut push = |token: &str, origin: Origin, section: Option<Command>| -> Result<(), ConfigError> {
        let (key, value) = token
            .split_once('=')
            .filter(|(k, v)| !k.trim().is_empty() && !v.trim().is_empty())
            .ok_or_else(|| ConfigError::Syntax { origin, text: token.to_string() })?;
        entries.push(Entry { section, key: key.trim().to_string(), value: value.trim().to_string(), origin });
        Ok(())
    };
    match source {
        Source::Text(text) => {
            for (index, raw) in text.lines().enumerate() {
                let origin = Origin::Line(index + 1);
                let line = raw.split('#').next().unwrap_or("").trim();
                if line.is_empty() {
                    continue;
                }
                if let Some(name) = line.strip_prefix('[') {
                    let name = name
                        .strip_suffix(']')
                        .ok_or_else(|| ConfigError::Syntax { origin, text: line.to_string() })?
                        .trim();
                    section = Some(
                        name.parse()
                            .map_err(|_| ConfigError::UnknownSection { origin, name: name.to_string() })?,
                    );
                    continue;
                }
                for token in line.split_whitespace() {
                    push(token, origin, section)?;
                }
            }
        }
        Source::Arguments(args) => {
            for (index, token) in args.iter().enumerate() {
                push(token, Origin::Argument(index + 1), None)?;
            }
        }
    }
    Ok(entries)
}

fn parse_value<T: FromStr>(entry: &Entry, expected: &'static str) -> Result<T, ConfigError> {
    entry.value.parse().map_err(|_| ConfigError::Type {
        origin: entry.origin,
        key: entry.key.clone(),
        expected,
        found: entry.value.clone(),
    })
}

fn parse_list<T: FromStr>(entry: &Entry, expected: &'static str) -> Result<Vec<T>, ConfigError> {
    entry
        .value
        .split(',')
        .map(|item| {
            item.trim().parse().map_err(|_| ConfigError::Type {
                origin: entry.origin,
                key: entry.key.clone(),
                expected,
                found: entry.value.clone(),
            })
        })
        .collect()
}

fn range(entry: &Entry, constraint: impl Into<String>) -> ConfigError {
    ConfigError::Range { origin: entry.origin, key: entry.key.clone(), constraint: constraint.into() }
}

fn positive(entry: &Entry) -> Result<f64, ConfigError> {
    let v: f64 = parse_value(entry, "a number")?;
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(range(entry, "must be a positive finite number"))
    }
}

fn count(entry: &Entry, min: usize) -> Result<usize, ConfigError> {
    let v: usize = parse_value(entry, "a non-negative integer")?;
    if v >= min {
        Ok(v)
    } else {
        Err(range(entry, format!("must be at least {min}")))
    }
}

fn finite_list(entry: &Entry) -> Result<Vec<f64>, ConfigError> {
    let v: Vec<f64> = parse_list(entry, "a comma-separated list of numbers")?;
    if v.iter().all(|x| x.is_finite()) {
        Ok(v)
    } else {
        Err(range(entry, "every value must be finite"))
    }
}

/// Hölder index n from either `n` or `alpha`, which must equal 1/n.
fn holder_index(entry: &Entry) -> Result<usize, ConfigError> {
    match entry.key.as_str() {
        "n" => count(entry, 1),
        _ => {
            let alpha: f64 = parse_value(entry, "a number")?;
            match ProfileKind::holder(alpha) {
                Ok(ProfileKind::Holder(n)) => Ok(n),
                _ => Err(range(entry, format!("alpha must be 1/n for a positive integer n, got {alpha}"))),
            }
        }
    }
}

fn choice<'a>(entry: &Entry, options: &[&'a str]) -> Result<&'a str, ConfigError> {
    options.iter().copied().find(|o| *o == entry.value).ok_or_else(|| ConfigError::Type {
        origin: entry.origin,
        key: entry.key.clone(),
        expected: "one of the listed options",
        found: format!("{} (options: {})", entry.value, options.join(", ")),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    Smooth,
    Holder,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProfileParams {
    pub branch: Branch,
    /// Hölder index, α = 1/n.
    pub n: Option<usize>,
    pub terms: usize,
    pub a: Vec<f64>,
    /// Samples of the λ(a) curve across the guarded radius.
    pub curve_points: usize,
}

impl Default for ProfileParams {
    fn default() -> Self {
        ProfileParams { branch: Branch::Smooth, n: None, terms: 8, a: vec![0.0], curve_points: 41 }
    }
}

impl ProfileParams {
    pub fn kind(&self) -> ProfileKind {
        match self.branch {
            Branch::Smooth => ProfileKind::Smooth,
            Branch::Holder => ProfileKind::Holder(self.n.unwrap_or(2)),
        }
    }

    fn apply(&mut self, e: &Entry) -> Result<bool, ConfigError> {
        match e.key.as_str() {
            "branch" => {
                self.branch = if choice(e, &["smooth", "holder"])? == "smooth" { Branch::Smooth } else { Branch::Holder }
            }
            "n" | "alpha" => self.n = Some(holder_index(e)?),
            "terms" => self.terms = terms(e)?,
            "a" => self.a = finite_list(e)?,
            "curve_points" => self.curve_points = count(e, 2)?,
            _ => return Ok(false),
        }
        Ok(true)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DomainKind {
    Line,
    Circle,
}

/// Initial vorticity for `sim`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum InitialData {
    /// x/(1+x²) on the line.
    Special,
    /// x/(1+x²)² on the line.
    Decaying,
    /// sin(kx) on the circle.
    Sine,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Osw,
    Toy,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ControllerKind {
    Cfl,
    Fixed,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimParams {
    pub a: Vec<f64>,
    pub domain: DomainKind,
    pub data: InitialData,
    pub wavenumber: usize,
    pub modes: usize,
    pub map_scale: f64,
    pub t_max: f64,
    pub model: ModelKind,
    pub controller: ControllerKind,
    pub safety: f64,
    pub dt: f64,
    pub threshold: Option<f64>,
    pub snapshots: Vec<f64>,
}

impl Default for SimParams {
    fn default() -> Self {
        SimParams {
            a: vec![0.0],
            domain: DomainKind::Line,
            data: InitialData::Special,
            wavenumber: 1,
            modes: 512,
            map_scale: 1.0,
            t_max: 0.95,
            model: ModelKind::Osw,
            controller: ControllerKind::Cfl,
            safety: osw::sim::run::DEFAULT_SAFETY,
            dt: 1e-3,
            threshold: None,
            snapshots: Vec::new(),
        }
    }
}

impl SimParams {
    fn apply(&mut self, e: &Entry, data_set: &mut bool) -> Result<bool, ConfigError> {
        match e.key.as_str() {
            "a" => self.a = finite_list(e)?,
            "domain" => {
                self.domain = if choice(e, &["line", "circle"])? == "line" { DomainKind::Line } else { DomainKind::Circle }
            }
            "data" => {
                self.data = match choice(e, &["special", "decaying", "sine"])? {
                    "special" => InitialData::Special,
                    "decaying" => InitialData::Decaying,
                    _ => InitialData::Sine,
                };
                *data_set = true;
            }
            "wavenumber" => self.wavenumber = count(e, 1)?,
            "modes" => self.modes = modes(e)?,
            "map_scale" => self.map_scale = positive(e)?,
            "t_max" => self.t_max = positive(e)?,
            "model" => self.model = if choice(e, &["osw", "toy"])? == "osw" { ModelKind::Osw } else { ModelKind::Toy },
            "controller" => {
                self.controller =
                    if choice(e, &["cfl", "fixed"])? == "cfl" { ControllerKind::Cfl } else { ControllerKind::Fixed }
            }
            "safety" => self.safety = positive(e)?,
            "dt" => self.dt = positive(e)?,
            "threshold" => self.threshold = Some(positive(e)?),
            "snapshots" => self.snapshots = times(e)?,
            _ => return Ok(false),
        }
        Ok(true)
    }
}

fn modes(e: &Entry) -> Result<usize, ConfigError> {
    let m = count(e, 16)?;
    if m.is_power_of_two() {
        Ok(m)
    } else {
        Err(range(e, "must be a power of two"))
    }
}

fn terms(e: &Entry) -> Result<usize, ConfigError> {
    let n = count(e, 1)?;
    if n <= 12 {
        Ok(n)
    } else {
        Err(range(e, "at most 12 series terms are supported"))
    }
}

fn times(e: &Entry) -> Result<Vec<f64>, ConfigError> {
    let v = finite_list(e)?;
    if v.iter().any(|t| *t < 0.0) {
        return Err(range(e, "times must be non-negative"));
    }
    Ok(v)
}

/// Acceptance criteria grouped by what they exercise.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    All,
    /// Operator identities, bounds and inverses.
    Identities,
    /// Closed-form solutions and profiles.
    Exact,
    /// Perturbative exponents and norms.
    Series,
    /// Direct simulation.
    Dynamics,
}

impl Suite {
    pub fn criteria(self) -> Vec<u8> {
        match self {
            Suite::All => (1..=16).collect(),
            Suite::Identities => vec![2, 4, 8, 9, 11, 12],
            Suite::Exact => vec![3, 5, 6, 15],
            Suite::Series => vec![1, 10, 13],
            Suite::Dynamics => vec![7, 14, 16],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyParams {
    pub suite: Suite,
    /// Explicit criterion numbers; overrides the suite when set.
    pub criteria: Option<Vec<u8>>,
}

impl Default for VerifyParams {
    fn default() -> Self {
        VerifyParams { suite: Suite::All, criteria: None }
    }
}

impl VerifyParams {
    pub fn selected(&self) -> Vec<u8> {
        self.criteria.clone().unwrap_or_else(|| self.suite.criteria())
    }

    fn apply(&mut self, e: &Entry) -> Result<bool, ConfigError> {
        match e.key.as_str() {
            "suite" => {
                self.suite = match choice(e, &["all", "identities", "exact", "series", "dynamics"])? {
                    "all" => Suite::All,
                    "identities" => Suite::Identities,
                    "exact" => Suite::Exact,
                    "series" => Suite::Series,
                    _ => Suite::Dynamics,
                }
            }
            "criteria" => {
                let ids: Vec<u8> = parse_list(e, "a comma-separated list of criterion numbers")?;
                if ids.is_empty() || ids.iter().any(|id| !(1..=16).contains(id)) {
                    return Err(range(e, "criterion numbers run from 1 to 16"));
                }
                self.criteria = Some(ids);
            }
            _ => return Ok(false),
        }
        Ok(true)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CollapseSource {
    /// Rescaled closed-form solutions of the pure-stretching model.
    Exact,
    /// Direct simulation started from a constructed profile.
    Simulation,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CollapseParams {
    pub source: CollapseSource,
    pub branch: Branch,
    pub n: Option<usize>,
    pub data: InitialData,
    pub times: Vec<f64>,
    pub a: f64,
    pub terms: usize,
    pub modes: usize,
    pub map_scale: f64,
}

impl Default for CollapseParams {
    fn default() -> Self {
        CollapseParams {
            source: CollapseSource::Exact,
            branch: Branch::Smooth,
            n: None,
            data: InitialData::Special,
            times: vec![0.0, 0.5, 0.9, 0.99],
            a: 0.05,
            terms: 8,
            modes: 512,
            map_scale: 1.0,
        }
    }
}

impl CollapseParams {
    fn apply(&mut self, e: &Entry) -> Result<bool, ConfigError> {
        match e.key.as_str() {
            "source" => {
                self.source = if choice(e, &["exact", "simulation"])? == "exact" {
                    CollapseSource::Exact
                } else {
                    CollapseSource::Simulation
                }
            }
            "branch" => {
                self.branch = if choice(e, &["smooth", "holder"])? == "smooth" { Branch::Smooth } else { Branch::Holder }
            }
            "n" | "alpha" => self.n = Some(holder_index(e)?),
            "data" => {
                self.data = if choice(e, &["special", "decaying"])? == "special" {
                    InitialData::Special
                } else {
                    InitialData::Decaying
                }
            }
            "times" => {
                self.times = times(e)?;
                if self.times.iter().any(|t| *t >= 1.0) {
                    return Err(range(e, "times are fractions of the blow-up time and must lie in [0, 1)"));
                }
            }
            "a" => {
                let v: f64 = parse_value(e, "a number")?;
                if !v.is_finite() {
                    return Err(range(e, "must be finite"));
                }
                self.a = v;
            }
            "terms" => self.terms = terms(e)?,
            "modes" => self.modes = modes(e)?,
            "map_scale" => self.map_scale = positive(e)?,
            _ => return Ok(false),
        }
        Ok(true)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CuspParams {
    pub a: Vec<f64>,
    pub modes: usize,
    pub t_max: f64,
    /// Largest coefficient of the random sin(kx) perturbations, k = 2..4.
    pub perturbation: f64,
    pub snapshot_every: usize,
}

impl Default for CuspParams {
    fn default() -> Self {
        CuspParams { a: vec![1.0], modes: 256, t_max: 0.5, perturbation: 0.08, snapshot_every: 0 }
    }
}

impl CuspParams {
    fn apply(&mut self, e: &Entry) -> Result<bool, ConfigError> {
        match e.key.as_str() {
            "a" => {
                self.a = finite_list(e)?;
                if self.a.iter().any(|a| *a >= 2.0) {
                    return Err(range(e, "the cusp tracker needs a < 2"));
                }
            }
            "modes" => self.modes = modes(e)?,
            "t_max" => self.t_max = positive(e)?,
            "perturbation" => {
                let v: f64 = parse_value(e, "a number")?;
                if !(0.0..1.0 / 3.0).contains(&v) {
                    return Err(range(e, "must lie in [0, 1/3) so the data stay positive on (0, π)"));
                }
                self.perturbation = v;
            }
            "snapshot_every" => self.snapshot_every = count(e, 0)?,
            _ => return Ok(false),
        }
        Ok(true)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ReportParams {
    /// Directory scanned for manifests; defaults to the output directory.
    pub input: Option<PathBuf>,
}

impl ReportParams {
    fn apply(&mut self, e: &Entry) -> Result<bool, ConfigError> {
        match e.key.as_str() {
            "input" => self.input = Some(PathBuf::from(&e.value)),
            _ => return Ok(false),
        }
        Ok(true)
    }
}

/// Fully resolved configuration of one run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub command: Command,
    pub out: PathBuf,
    pub seed: u64,
    /// Multiplies every error tolerance; ratio thresholds are unaffected.
    pub tol_scale: f64,
    pub jobs: usize,
    pub profile: ProfileParams,
    pub sim: SimParams,
    pub verify: VerifyParams,
    pub collapse: CollapseParams,
    pub cusp: CuspParams,
    pub report: ReportParams,
}

/// The resolved values that matter to one command, for the manifest echo.
#[derive(Debug, Serialize)]
pub struct ConfigEcho<'a> {
    pub command: Command,
    pub seed: u64,
    pub tol_scale: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub profile: Option<&'a ProfileParams>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sim: Option<&'a SimParams>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verify: Option<&'a VerifyParams>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub collapse: Option<&'a CollapseParams>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cusp: Option<&'a CuspParams>,
}

const GLOBAL_KEYS: [&str; 5] = ["command", "out", "seed", "tol_scale", "jobs"];

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        Self::from_sources(&[Source::Text(text)])
    }

    /// Later sources override keys set by earlier ones; a key repeated
    /// within one source is an error.
    pub fn from_sources(sources: &[Source<'_>]) -> Result<Self, ConfigError> {
        let mut layers = Vec::new();
        for source in sources {
            let entries = tokenize(source)?;
            for (i, e) in entries.iter().enumerate() {
                if let Some(first) = entries[..i].iter().find(|p| p.section == e.section && p.key == e.key) {
                    return Err(ConfigError::Duplicate { origin: e.origin, key: e.key.clone(), first: first.origin });
                }
            }
            layers.push(entries);
        }
        let entries: Vec<Entry> = layers.into_iter().flatten().collect();

        let mut command = None;
        for e in entries.iter().filter(|e| e.section.is_none() && e.key == "command") {
            command = Some(
                e.value.parse::<Command>().map_err(|_| ConfigError::Type {
                    origin: e.origin,
                    key: e.key.clone(),
                    expected: "one of profile, sim, verify, collapse, cusp, report",
                    found: e.value.clone(),
                })?,
            );
        }

        let mut config = ExperimentConfig {
            command: command.unwrap_or(Command::Verify),
            out: PathBuf::from("out"),
            seed: 1,
            tol_scale: 1.0,
            jobs: 1,
            profile: ProfileParams::default(),
            sim: SimParams::default(),
            verify: VerifyParams::default(),
            collapse: CollapseParams::default(),
            cusp: CuspParams::default(),
            report: ReportParams::default(),
        };
        let mut data_set = false;
        for e in &entries {
            match e.section {
                Some(section) => {
                    if !config.apply_to(section, e, &mut data_set)? {
                        return Err(ConfigError::UnknownKey {
                            origin: e.origin,
                            key: e.key.clone(),
                            section: Some(section.name().into()),
                        });
                    }
                }
                None if GLOBAL_KEYS.contains(&e.key.as_str()) => config.apply_global(e)?,
                None => {
                    // Without a command the key is checked against every section that knows it.
                    let targets: Vec<Command> = match command {
                        Some(c) => vec![c],
                        None => Command::ALL.to_vec(),
                    };
                    let mut known = false;
                    for target in targets {
                        known |= config.apply_to(target, e, &mut data_set)?;
                    }
                    if !known {
                        return Err(ConfigError::UnknownKey { origin: e.origin, key: e.key.clone(), section: None });
                    }
                }
            }
        }
        if command.is_none() {
            return Err(ConfigError::MissingCommand);
        }
        if config.sim.domain == DomainKind::Circle && !data_set {
            config.sim.data = InitialData::Sine;
        }
        config.validate(&entries)?;
        Ok(config)
    }

    fn apply_global(&mut self, e: &Entry) -> Result<(), ConfigError> {
        match e.key.as_str() {
            "command" => {}
            "out" => self.out = PathBuf::from(&e.value),
            "seed" => self.seed = parse_value(e, "a non-negative integer")?,
            "tol_scale" => self.tol_scale = positive(e)?,
            "jobs" => self.jobs = count(e, 1)?,
            _ => unreachable!("global keys are listed in GLOBAL_KEYS"),
        }
        Ok(())
    }

    fn apply_to(&mut self, section: Command, e: &Entry, data_set: &mut bool) -> Result<bool, ConfigError> {
        match section {
            Command::Profile => self.profile.apply(e),
            Command::Sim => self.sim.apply(e, data_set),
            Command::Verify => self.verify.apply(e),
            Command::Collapse => self.collapse.apply(e),
            Command::Cusp => self.cusp.apply(e),
            Command::Report => self.report.apply(e),
        }
    }

    /// Checks that involve more than one key.
    fn validate(&self, entries: &[Entry]) -> Result<(), ConfigError> {
        let blame = |keys: &[&str]| -> Entry {
            entries.iter().rev().find(|e| keys.contains(&e.key.as_str())).cloned().unwrap_or(Entry {
                section: None,
                key: keys[0].to_string(),
                value: String::new(),
                origin: Origin::Argument(0),
            })
        };
        match self.command {
            Command::Profile => {
                if self.profile.branch == Branch::Smooth && self.profile.n.is_some_and(|n| n != 1) {
                    return Err(range(&blame(&["n", "alpha"]), "only branch=holder takes a Hölder index"));
                }
                if self.profile.branch == Branch::Holder && self.profile.n.is_none() {
                    return Err(range(&blame(&["branch"]), "branch=holder needs n or alpha"));
                }
            }
            Command::Sim => {
                let circle = self.sim.domain == DomainKind::Circle;
                if circle != (self.sim.data == InitialData::Sine) {
                    return Err(range(&blame(&["data", "domain"]), "data=sine runs on the circle, the others on the line"));
                }
            }
            Command::Collapse => {
                if self.collapse.branch == Branch::Holder && self.collapse.n.is_none() {
                    return Err(range(&blame(&["branch"]), "branch=holder needs n or alpha"));
                }
                if self.collapse.source == CollapseSource::Simulation && self.collapse.branch == Branch::Holder {
                    return Err(range(&blame(&["source"]), "source=simulation follows the smooth branch only"));
                }
            }
            _ => {}
        }
        Ok(())
    }

    /// Override globals from command-line flags.
    pub fn override_globals(&mut self, out: Option<PathBuf>, seed: Option<u64>, tol_scale: Option<f64>, jobs: Option<usize>) {
        if let Some(out) = out {
            self.out = out;
        }
        if let Some(seed) = seed {
            self.seed = seed;
        }
        if let Some(tol_scale) = tol_scale {
            self.tol_scale = tol_scale;
        }
        if let Some(jobs) = jobs {
            self.jobs = jobs;
        }
    }

    pub fn echo(&self) -> ConfigEcho<'_> {
        let c = self.command;
        ConfigEcho {
            command: c,
            seed: self.seed,
            tol_scale: self.tol_scale,
            profile: (c == Command::Profile).then_some(&self.profile),
            sim: (c == Command::Sim).then_some(&self.sim),
            verify: (c == Command::Verify).then_some(&self.verify),
            collapse: (c == Command::Collapse).then_some(&self.collapse),
            cusp: (c == Command::Cusp).then_some(&self.cusp),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_verify_takes_defaults() {
        let c = ExperimentConfig::parse("command=verify suite=identities").unwrap();
        assert_eq!(c.command, Command::Verify);
        assert_eq!(c.verify.suite, Suite::Identities);
        assert_eq!(c.seed, 1);
        assert_eq!(c.tol_scale, 1.0);
        assert_eq!(c.profile, ProfileParams::default());
    }

    #[test]
    fn holder_profile_from_one_line() {
        let c = ExperimentConfig::parse("command=profile branch=holder n=3 terms=8 a=0.1").unwrap();
        assert_eq!(c.profile.kind(), ProfileKind::Holder(3));
        assert_eq!(c.profile.terms, 8);
        assert_eq!(c.profile.a, vec![0.1]);
    }

    #[test]
    fn sections_and_comments() {
        let text = "# sweep\ncommand=sim\n[sim]\na=0,0.5 # two points\ndomain=circle\n\n[profile]\nterms=4\n";
        let c = ExperimentConfig::parse(text).unwrap();
        assert_eq!(c.sim.a, vec![0.0, 0.5]);
        assert_eq!(c.sim.data, InitialData::Sine);
        assert_eq!(c.profile.terms, 4);
    }

    #[test]
    fn alpha_must_be_a_reciprocal() {
        let e = ExperimentConfig::parse("alpha=0.4").unwrap_err();
        let text = e.to_string();
        assert!(matches!(e, ConfigError::Range { .. }), "{e:?}");
        assert!(text.contains("line 1") && text.contains("`alpha`") && text.contains("1/n"), "{text}");
        let c = ExperimentConfig::parse("command=profile branch=holder alpha=0.25").unwrap();
        assert_eq!(c.profile.kind(), ProfileKind::Holder(4));
    }

    #[test]
    fn unknown_and_malformed_keys_name_their_line() {
        let e = ExperimentConfig::parse("command=sim\nt_maxx=1").unwrap_err();
        assert_eq!(e, ConfigError::UnknownKey { origin: Origin::Line(2), key: "t_maxx".into(), section: None });
        let e = ExperimentConfig::parse("command=sim\n[sim]\nmodes=many").unwrap_err();
        assert!(e.to_string().starts_with("line 3: key `modes`"), "{e}");
        let e = ExperimentConfig::parse("command=sim\n[simulation]").unwrap_err();
        assert!(matches!(e, ConfigError::UnknownSection { .. }));
        let e = ExperimentConfig::parse("command=sim a").unwrap_err();
        assert!(matches!(e, ConfigError::Syntax { .. }));
        let e = ExperimentConfig::parse("command=sim\na=1\na=2").unwrap_err();
        assert!(matches!(e, ConfigError::Duplicate { origin: Origin::Line(3), first: Origin::Line(2), .. }));
        assert_eq!(ExperimentConfig::parse("suite=all").unwrap_err(), ConfigError::MissingCommand);
    }

    #[test]
    fn arguments_override_the_file() {
        let args = vec!["t_max=0.5".to_string()];
        let c = ExperimentConfig::from_sources(&[Source::Text("command=sim\nt_max=0.9"), Source::Arguments(&args)])
            .unwrap();
        assert_eq!(c.sim.t_max, 0.5);
        let bad = vec!["modes=100".to_string()];
        let e = ExperimentConfig::from_sources(&[Source::Text("command=sim"), Source::Arguments(&bad)]).unwrap_err();
        assert!(e.to_string().starts_with("argument 1: key `modes`"), "{e}");
    }

    #[test]
    fn cross_key_constraints() {
        assert!(ExperimentConfig::parse("command=profile branch=holder").is_err());
        assert!(ExperimentConfig::parse("command=profile n=3").is_err());
        assert!(ExperimentConfig::parse("command=sim data=sine").is_err());
        assert!(ExperimentConfig::parse("command=cusp a=2").is_err());
    }

    #[test]
    fn suites_partition_the_criteria() {
        let mut all: Vec<u8> = [Suite::Identities, Suite::Exact, Suite::Series, Suite::Dynamics]
            .iter()
            .flat_map(|s| s.criteria())
            .collect();
        all.sort_unstable();
        assert_eq!(all, Suite::All.criteria());
    }
}
