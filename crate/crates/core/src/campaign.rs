//! Campaign runner behind the `polydisc` binary.
//!
//! Each subcommand turns a [`RunConfig`] into a [`Report`]: a table with one
//! row per case, a summary, and the fully resolved config. Cases run in
//! parallel but every case draws from its own seed stream and rows are
//! collected in case order, so rendered reports do not depend on the number
//! of threads.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::bh::{
    bh_exponent, check_bayart, check_blei, check_proof_step, constants_table, verify_bh, verify_bh_multilinear,
    InequalityReport, StatisticalVerdict, SupMode, Verdict,
};
use crate::bohr::{bohr_estimate_small, bohr_lower, DEFAULT_TRUNCATION};
use crate::dirichlet::{
    asymptotic_formula, bcq_partial_sum, bohr_lift, sidon_brute, sidon_n_search, DirichletPolynomial, ASYMPTOTIC_LABEL,
    BRUTE_MAX_N,
};
use crate::error::{invalid, Error, Result};
use crate::multilinear::MultilinearForm;
use crate::poly::{random_homogeneous, CoefficientDistribution, GeneralPolynomial, TorusPolynomial};
use crate::polarization::{check_harris, HarrisPartition};
use crate::seed::{self, DEFAULT_SEED};
use crate::sidon::{
    check_wiener, sidon_crossover, sidon_lower_search, BoundLabel, SearchStrategy, SidonSearchOptions, WienerMode,
};
use crate::supnorm::{certified_step, sup_certified, AscentOptions, GridOptions, SupNormEstimate};
use crate::Complex64;

/// Crossover search in `sidon-mn` rows stops at this `n`.
pub const CROSSOVER_N_MAX: u64 = 1 << 62;

const CASE_STREAM: u64 = 0xCA5E;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Command {
    VerifyBh,
    VerifyBhMultilinear,
    CheckBlei,
    CheckBayart,
    CheckProofStep,
    CheckHarris,
    CheckWiener,
    SidonMn,
    BohrRadius,
    BohrSmall,
    Lift,
    SidonN,
    BcqSum,
    ConstantsTable,
    RandomCampaign,
}

impl Command {
    pub const ALL: [Self; 15] = [
        Self::VerifyBh,
        Self::VerifyBhMultilinear,
        Self::CheckBlei,
        Self::CheckBayart,
        Self::CheckProofStep,
        Self::CheckHarris,
        Self::CheckWiener,
        Self::SidonMn,
        Self::BohrRadius,
        Self::BohrSmall,
        Self::Lift,
        Self::SidonN,
        Self::BcqSum,
        Self::ConstantsTable,
        Self::RandomCampaign,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Self::VerifyBh => "verify-bh",
            Self::VerifyBhMultilinear => "verify-bh-multilinear",
            Self::CheckBlei => "check-blei",
            Self::CheckBayart => "check-bayart",
            Self::CheckProofStep => "check-proof-step",
            Self::CheckHarris => "check-harris",
            Self::CheckWiener => "check-wiener",
            Self::SidonMn => "sidon-mn",
            Self::BohrRadius => "bohr-radius",
            Self::BohrSmall => "bohr-small",
            Self::Lift => "lift",
            Self::SidonN => "sidon-N",
            Self::BcqSum => "bcq-sum",
            Self::ConstantsTable => "constants-table",
            Self::RandomCampaign => "random-campaign",
        }
    }

    /// Flags that mean something for this command.
    fn flags(self) -> &'static [&'static str] {
        const ASCENT: &[&str] = &["m", "n", "count", "seed", "dist", "starts", "iters"];
        match self {
            Self::VerifyBh => &["m", "n", "count", "seed", "dist", "starts", "iters", "grid-step", "grid-cap", "grid-slack"],
            Self::VerifyBhMultilinear => ASCENT,
            Self::CheckBlei => &["m", "n", "count", "seed", "dist"],
            Self::CheckBayart => &["m", "n", "count", "seed", "dist", "samples"],
            Self::CheckProofStep | Self::CheckHarris | Self::CheckWiener => {
                &["m", "n", "count", "seed", "dist", "grid-step", "grid-cap", "grid-slack"]
            }
            Self::SidonMn => &["m", "n", "seed", "budget", "strategy", "label", "grid-cap"],
            Self::BohrRadius => &["n", "m"],
            Self::BohrSmall => &["degree", "grid-step"],
            Self::Lift => &["input"],
            Self::SidonN => &["N", "seed", "budget", "starts", "iters"],
            Self::BcqSum => &["input", "N", "seed", "dist", "c", "n-start"],
            Self::ConstantsTable => &["m-max"],
            Self::RandomCampaign => &["m", "n", "count", "seed", "starts", "iters", "samples", "grid-cap", "grid-slack"],
        }
    }

    fn default_format(self) -> Format {
        match self {
            Self::Lift => Format::Json,
            _ => Format::Csv,
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Command {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|c| c.tag() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown command {s:?}")))
    }
}

impl Serialize for Command {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.tag())
    }
}

impl<'de> Deserialize<'de> for Command {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Self::Json),
            "csv" => Ok(Self::Csv),
            _ => invalid(format!("unknown format {s:?} (json|csv)")),
        }
    }
}

/// Integer values given as `5`, `2..6` (inclusive), `1e12`, or a comma list of those.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct IntList(pub Vec<u64>);

fn parse_int(s: &str) -> Result<u64> {
    let s = s.trim();
    if let Ok(v) = s.parse::<u64>() {
        return Ok(v);
    }
    match s.parse::<f64>() {
        Ok(v) if v >= 0.0 && v.fract() == 0.0 && v <= 9.007_199_254_740_992e15 => Ok(v as u64),
        _ => invalid(format!("not a non-negative integer: {s:?}")),
    }
}

impl FromStr for IntList {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut out = Vec::new();
        for item in s.split(',') {
            if let Some((a, b)) = item.split_once("..") {
                let (a, b) = (parse_int(a)?, parse_int(b.trim_start_matches('='))?);
                if a > b {
                    return invalid(format!("empty range {item:?}"));
                }
                if b - a > 1_000_000 {
                    return invalid(format!("range {item:?} is too long"));
                }
                out.extend(a..=b);
            } else {
                out.push(parse_int(item)?);
            }
        }
        Ok(Self(out))
    }
}

impl IntList {
    fn usizes(&self) -> Vec<usize> {
        self.0.iter().map(|&v| v as usize).collect()
    }
}

/// Multistart count: fixed, or a multiple of the dimension (`8n`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum Starts {
    Fixed(usize),
    PerDimension(usize),
}

impl Starts {
    pub fn resolve(self, n: usize) -> usize {
        match self {
            Self::Fixed(k) => k.max(1),
            Self::PerDimension(k) => (k * n).max(1),
        }
    }
}

impl fmt::Display for Starts {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Fixed(k) => write!(f, "{k}"),
            Self::PerDimension(k) => write!(f, "{k}n"),
        }
    }
}

impl FromStr for Starts {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("starts must look like 16 or 8n, got {s:?}"));
        match s.strip_suffix('n') {
            Some(k) => Ok(Self::PerDimension(k.parse().map_err(|_| bad())?)),
            None => Ok(Self::Fixed(s.parse().map_err(|_| bad())?)),
        }
    }
}

impl From<Starts> for String {
    fn from(s: Starts) -> Self {
        s.to_string()
    }
}

impl TryFrom<String> for Starts {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

/// Grid step for certified sup bounds: explicit, or the finest step that fits the grid cap.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum GridStep {
    Auto,
    Fixed(f64),
}

impl fmt::Display for GridStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Auto => f.write_str("auto"),
            Self::Fixed(h) => write!(f, "{h:?}"),
        }
    }
}

impl FromStr for GridStep {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "auto" {
            return Ok(Self::Auto);
        }
        match s.parse::<f64>() {
            Ok(h) if h > 0.0 && h.is_finite() => Ok(Self::Fixed(h)),
            _ => invalid(format!("grid step must be a positive number or auto, got {s:?}")),
        }
    }
}

impl From<GridStep> for String {
    fn from(g: GridStep) -> Self {
        g.to_string()
    }
}

impl TryFrom<String> for GridStep {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

/// Everything a run depends on. After [`run`] every field the command uses
/// holds its effective value; the output path is not part of it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: Command,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<IntList>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<IntList>,
    #[serde(rename = "N", default, skip_serializing_if = "Option::is_none")]
    pub big_n: Option<IntList>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m_max: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub count: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dist: Option<CoefficientDistribution>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub starts: Option<Starts>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub iters: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid_step: Option<GridStep>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid_cap: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid_slack: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub strategy: Option<SearchStrategy>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<BoundLabel>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_start: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub input: Option<String>,
    pub format: Option<Format>,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        Self {
            command,
            m: None,
            n: None,
            big_n: None,
            m_max: None,
            count: None,
            seed: None,
            dist: None,
            starts: None,
            iters: None,
            samples: None,
            grid_step: None,
            grid_cap: None,
            grid_slack: None,
            budget: None,
            strategy: None,
            label: None,
            c: None,
            n_start: None,
            degree: None,
            input: None,
            format: None,
        }
    }

    fn set_flags(&self) -> Vec<&'static str> {
        [
            ("m", self.m.is_some()),
            ("n", self.n.is_some()),
            ("N", self.big_n.is_some()),
            ("m-max", self.m_max.is_some()),
            ("count", self.count.is_some()),
            ("seed", self.seed.is_some()),
            ("dist", self.dist.is_some()),
            ("starts", self.starts.is_some()),
            ("iters", self.iters.is_some()),
            ("samples", self.samples.is_some()),
            ("grid-step", self.grid_step.is_some()),
            ("grid-cap", self.grid_cap.is_some()),
            ("grid-slack", self.grid_slack.is_some()),
            ("budget", self.budget.is_some()),
            ("strategy", self.strategy.is_some()),
            ("label", self.label.is_some()),
            ("c", self.c.is_some()),
            ("n-start", self.n_start.is_some()),
            ("degree", self.degree.is_some()),
            ("input", self.input.is_some()),
        ]
        .into_iter()
        .filter_map(|(k, set)| set.then_some(k))
        .collect()
    }

    /// Fails on flags the command does not use.
    pub fn check_flags(&self) -> Result<()> {
        let allowed = self.command.flags();
        match self.set_flags().into_iter().find(|f| !allowed.contains(f)) {
            Some(f) => invalid(format!("--{f} does not apply to {}", self.command)),
            None => Ok(()),
        }
    }

    fn fill_defaults(&mut self) {
        let c = self.command;
        let uses = |f: &str| c.flags().contains(&f);
        let (m_default, n_default) = match c {
            Command::CheckWiener => ("3", "2"),
            Command::CheckBlei => ("2..3", "2..4"),
            Command::BohrRadius => ("", "1e2,1e3,1e4,1e5,1e6,1e7,1e8,1e9,1e10,1e11,1e12"),
            Command::SidonMn => ("2..5", "2..6"),
            _ => ("2..4", "2..4"),
        };
        if c == Command::BohrRadius {
            self.m.get_or_insert(IntList(vec![DEFAULT_TRUNCATION as u64]));
        } else if uses("m") {
            self.m.get_or_insert_with(|| m_default.parse().expect("static default"));
        }
        if uses("n") {
            self.n.get_or_insert_with(|| n_default.parse().expect("static default"));
        }
        if uses("N") && self.input.is_none() {
            let d = if c == Command::BcqSum { "100" } else { "2..8" };
            self.big_n.get_or_insert_with(|| d.parse().expect("static default"));
        }
        if uses("m-max") {
            self.m_max.get_or_insert(20);
        }
        if uses("count") {
            self.count.get_or_insert(100);
        }
        if uses("seed") && !(c == Command::BcqSum && self.input.is_some()) {
            self.seed.get_or_insert(DEFAULT_SEED);
        }
        if uses("starts") {
            self.starts.get_or_insert(Starts::PerDimension(8));
        }
        if uses("iters") {
            self.iters.get_or_insert(AscentOptions::DEFAULT_ITERATIONS);
        }
        if uses("samples") {
            self.samples.get_or_insert(100_000);
        }
        match c {
            Command::CheckProofStep | Command::CheckHarris | Command::CheckWiener | Command::RandomCampaign => {
                if c != Command::RandomCampaign {
                    self.grid_step.get_or_insert(GridStep::Auto);
                }
                self.grid_cap.get_or_insert(1_000_000);
                self.grid_slack.get_or_insert(0.05);
            }
            Command::VerifyBh if self.grid_step.is_some() => {
                self.grid_cap.get_or_insert(1_000_000);
                self.grid_slack.get_or_insert(0.05);
            }
            Command::BohrSmall => {
                self.grid_step.get_or_insert(GridStep::Fixed(1e-3));
                self.degree.get_or_insert(50);
            }
            Command::SidonMn => {
                self.budget.get_or_insert(32);
                self.strategy.get_or_insert(SearchStrategy::CoordinateAscent);
                let label = *self.label.get_or_insert(BoundLabel::Heuristic);
                if label == BoundLabel::Certified {
                    self.grid_cap.get_or_insert(2_000_000);
                }
            }
            Command::SidonN => {
                self.budget.get_or_insert(32);
            }
            Command::BcqSum => {
                self.c.get_or_insert(-std::f64::consts::FRAC_1_SQRT_2);
                self.n_start.get_or_insert(3);
                if self.input.is_none() {
                    self.dist.get_or_insert(CoefficientDistribution::ComplexGaussian);
                }
            }
            _ => {}
        }
        self.format.get_or_insert(c.default_format());
    }

    fn seed(&self) -> u64 {
        self.seed.unwrap_or(DEFAULT_SEED)
    }

    fn ms(&self) -> Vec<usize> {
        self.m.as_ref().map(IntList::usizes).unwrap_or_default()
    }

    fn ns(&self) -> Vec<usize> {
        self.n.as_ref().map(IntList::usizes).unwrap_or_default()
    }

    fn ascent(&self, n: usize, seed: u64) -> AscentOptions {
        AscentOptions {
            starts: self.starts.unwrap_or(Starts::PerDimension(8)).resolve(n),
            iterations: self.iters.unwrap_or(AscentOptions::DEFAULT_ITERATIONS),
            seed,
        }
    }

    /// `(m, n, distribution, seed)` for case `k`: `m` varies fastest, then `n`, then the distribution.
    fn case(&self, k: usize) -> Result<(usize, usize, CoefficientDistribution, u64)> {
        let (ms, ns) = (self.ms(), self.ns());
        if ms.is_empty() || ns.is_empty() {
            return invalid("empty m or n range");
        }
        let m = ms[k % ms.len()];
        let n = ns[(k / ms.len()) % ns.len()];
        let dist = self
            .dist
            .unwrap_or(CoefficientDistribution::ALL[(k / (ms.len() * ns.len())) % CoefficientDistribution::ALL.len()]);
        Ok((m, n, dist, seed::derive(self.seed(), &[CASE_STREAM, k as u64])))
    }
}

/// A table cell.
#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Int(u64),
    Float(f64),
    Text(String),
    Bool(bool),
    Null,
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Self::Int(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Self::Int(v as u64)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Self::Float(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Self::Bool(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Self::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Self::Text(v)
    }
}

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(v: Option<T>) -> Self {
        v.map_or(Self::Null, Into::into)
    }
}

impl Cell {
    fn to_json(&self) -> Value {
        match self {
            Self::Int(v) => json!(v),
            Self::Float(v) => json!(v),
            Self::Text(v) => json!(v),
            Self::Bool(v) => json!(v),
            Self::Null => Value::Null,
        }
    }

    fn to_csv(&self) -> String {
        match self {
            Self::Int(v) => v.to_string(),
            Self::Float(v) => format!("{v:?}"),
            Self::Text(v) => v.clone(),
            Self::Bool(v) => v.to_string(),
            Self::Null => String::new(),
        }
    }
}

/// How a case counts in the summary.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    Pass,
    /// Expected at a small rate: a 3-sigma Monte Carlo band missed.
    StatisticalFlag,
    /// The estimate could not decide; a non-pass without a certified violation.
    Inconclusive,
    /// A deterministic check failed or a certified violation was found.
    Fail,
}

impl Outcome {
    fn of(pass: bool) -> Self {
        if pass {
            Self::Pass
        } else {
            Self::Fail
        }
    }

    fn tag(self) -> &'static str {
        match self {
            Self::Pass => "pass",
            Self::StatisticalFlag => "statistical-flag",
            Self::Inconclusive => "inconclusive",
            Self::Fail => "fail",
        }
    }
}

impl From<Verdict> for Outcome {
    fn from(v: Verdict) -> Self {
        match v {
            Verdict::Verified => Self::Pass,
            Verdict::Inconclusive => Self::Inconclusive,
            Verdict::ViolatedNumerically => Self::Fail,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub cases: usize,
    pub pass: usize,
    pub statistical_flags: usize,
    pub inconclusive: usize,
    pub failures: usize,
}

impl Summary {
    fn from_outcomes(outcomes: &[Outcome]) -> Self {
        let count = |o: Outcome| outcomes.iter().filter(|&&x| x == o).count();
        Self {
            cases: outcomes.len(),
            pass: count(Outcome::Pass),
            statistical_flags: count(Outcome::StatisticalFlag),
            inconclusive: count(Outcome::Inconclusive),
            failures: count(Outcome::Fail),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub config: RunConfig,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    pub outcomes: Vec<Outcome>,
    pub summary: Summary,
    /// Top-level JSON fields merged into the JSON rendering.
    pub document: Option<Map<String, Value>>,
}

impl Report {
    /// 0 when every case passed (statistical flags allowed), 2 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.summary.failures + self.summary.inconclusive > 0 {
            2
        } else {
            0
        }
    }

    pub fn column(&self, name: &str) -> Option<Vec<&Cell>> {
        let j = self.columns.iter().position(|&c| c == name)?;
        Some(self.rows.iter().map(|r| &r[j]).collect())
    }

    pub fn render(&self) -> Result<String> {
        match self.config.format.unwrap_or(Format::Csv) {
            Format::Json => self.render_json(),
            Format::Csv => self.render_csv(),
        }
    }

    fn render_json(&self) -> Result<String> {
        let mut doc = self.document.clone().unwrap_or_default();
        doc.insert("config".into(), serde_json::to_value(&self.config)?);
        doc.insert("summary".into(), serde_json::to_value(&self.summary)?);
        let rows = self
            .rows
            .iter()
            .map(|r| Value::Object(self.columns.iter().zip(r).map(|(k, v)| (k.to_string(), v.to_json())).collect()))
            .collect();
        doc.insert("rows".into(), Value::Array(rows));
        let mut s = serde_json::to_string_pretty(&Value::Object(doc))?;
        s.push('\n');
        Ok(s)
    }

    fn render_csv(&self) -> Result<String> {
        let mut out = format!(
            "# config {}\n# summary {}\n",
            serde_json::to_string(&self.config)?,
            serde_json::to_string(&self.summary)?
        );
        let mut w = csv::Writer::from_writer(Vec::new());
        let csv_err = |e: csv::Error| Error::InvalidArgument(format!("csv: {e}"));
        w.write_record(&self.columns).map_err(csv_err)?;
        for r in &self.rows {
            w.write_record(r.iter().map(Cell::to_csv)).map_err(csv_err)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::InvalidArgument(format!("csv: {e}")))?;
        out.push_str(&String::from_utf8(bytes).expect("csv output is utf-8"));
        Ok(out)
    }
}

type CaseFn = fn(&RunConfig, usize) -> Result<CaseResult>;

struct CaseResult {
    cells: Vec<Cell>,
    outcome: Outcome,
}

fn collect(config: RunConfig, columns: Vec<&'static str>, cases: Vec<CaseResult>) -> Report {
    let outcomes: Vec<Outcome> = cases.iter().map(|c| c.outcome).collect();
    Report {
        config,
        columns,
        summary: Summary::from_outcomes(&outcomes),
        outcomes,
        rows: cases.into_iter().map(|c| c.cells).collect(),
        document: None,
    }
}

fn par_cases(count: usize, f: impl Fn(usize) -> Result<CaseResult> + Sync + Send) -> Result<Vec<CaseResult>> {
    (0..count).into_par_iter().map(f).collect::<Vec<_>>().into_iter().collect()
}

/// Certified grid bound for `p` under the config's grid settings.
fn certified_sup<P: TorusPolynomial + ?Sized>(p: &P, cfg: &RunConfig) -> Result<SupNormEstimate> {
    let cap = cfg.grid_cap.unwrap_or(1_000_000);
    let h = match cfg.grid_step.unwrap_or(GridStep::Auto) {
        GridStep::Auto => certified_step(p, cap, cfg.grid_slack.unwrap_or(0.05))?,
        GridStep::Fixed(h) => h,
    };
    sup_certified(p, &GridOptions { grid_step: h, max_points: cap })
}

fn certified_upper<P: TorusPolynomial + ?Sized>(p: &P, cfg: &RunConfig) -> Result<f64> {
    Ok(certified_sup(p, cfg)?.upper.expect("grid bounds carry an upper bound"))
}

const INEQUALITY_COLUMNS: [&str; 11] =
    ["case", "m", "n", "dist", "seed", "lhs", "sup_lower", "sup_upper", "ratio", "constant", "verdict"];

fn inequality_row(k: usize, m: usize, n: usize, dist: CoefficientDistribution, s: u64, r: &InequalityReport) -> CaseResult {
    CaseResult {
        cells: vec![
            k.into(),
            m.into(),
            n.into(),
            dist.tag().into(),
            s.into(),
            r.lhs.into(),
            r.supnorm_used.lower.into(),
            r.supnorm_used.upper.into(),
            r.ratio.into(),
            r.rhs_constant.into(),
            r.verdict.tag().into(),
        ],
        outcome: r.verdict.into(),
    }
}

fn verify_bh_case(cfg: &RunConfig, k: usize) -> Result<CaseResult> {
    let (m, n, dist, s) = cfg.case(k)?;
    let p = random_homogeneous(m, n, dist, s)?;
    let report = if cfg.grid_step.is_some() {
        let sup = certified_sup(&p, cfg)?;
        let lhs = p.coeff_norm(bh_exponent(m)?.norm())?.value;
        InequalityReport::judge(lhs, crate::bh::bh_constant_hyper(m)?, sup)
    } else {
        verify_bh(&p, &SupMode::Ascent(cfg.ascent(n, seed::derive(s, &[1]))))?
    };
    Ok(inequality_row(k, m, n, dist, s, &report))
}

fn verify_bh_multilinear_case(cfg: &RunConfig, k: usize) -> Result<CaseResult> {
    let (m, n, dist, s) = cfg.case(k)?;
    let b = MultilinearForm::random(m, n, dist, s)?;
    let report = verify_bh_multilinear(&b, &cfg.ascent(n, seed::derive(s, &[1])))?;
    Ok(inequality_row(k, m, n, dist, s, &report))
}

fn blei_case(cfg: &RunConfig, k: usize) -> Result<CaseResult> {
    let (m, n, dist, s) = cfg.case(k)?;
    let r = check_blei(&MultilinearForm::random(m, n, dist, s)?)?;
    Ok(CaseResult {
        cells: vec![
            k.into(),
            m.into(),
            n.into(),
            dist.tag().into(),
            s.into(),
            r.lhs.into(),
            r.rhs.into(),
            Outcome::of(r.pass).tag().into(),
        ],
        outcome: Outcome::of(r.pass),
    })
}

fn bayart_case(cfg: &RunConfig, k: usize) -> Result<CaseResult> {
    let (m, n, dist, s) = cfg.case(k)?;
    let p = random_homogeneous(m, n, dist, s)?;
    let r = check_bayart(&p, cfg.samples.unwrap_or(100_000), seed::derive(s, &[2]))?;
    let outcome = match r.verdict {
        StatisticalVerdict::Pass => Outcome::Pass,
        StatisticalVerdict::StatisticalFlag => Outcome::StatisticalFlag,
    };
    Ok(CaseResult {
        cells: vec![
            k.into(),
            m.into(),
            n.into(),
            dist.tag().into(),
            s.into(),
            r.l2.into(),
            r.factor.into(),
            r.l1.mean.into(),
            r.l1.std_error.into(),
            r.rhs_band.into(),
            outcome.tag().into(),
        ],
        outcome,
    })
}

fn proof_step_case(cfg: &RunConfig, k: usize) -> Result<CaseResult> {
    let (m, n, dist, s) = cfg.case(k)?;
    if m < 2 {
        return invalid("check-proof-step needs m >= 2");
    }
    let p = random_homogeneous(m, n, dist, s)?;
    let upper = certified_upper(&p, cfg)?;
    let slot = 1 + (k / 3) % m;
    let r = check_proof_step(&p, slot, upper)?;
    Ok(CaseResult {
        cells: vec![
            k.into(),
            m.into(),
            n.into(),
            dist.tag().into(),
            s.into(),
            slot.into(),
            r.lhs.into(),
            r.constant.into(),
            r.supnorm_upper.into(),
            r.rhs.into(),
            r.parseval_rel_err.into(),
            Outcome::of(r.pass).tag().into(),
        ],
        outcome: Outcome::of(r.pass),
    })
}

fn harris_case(cfg: &RunConfig, k: usize) -> Result<CaseResult> {
    let (m, n, dist, s) = cfg.case(k)?;
    let p = random_homogeneous(m, n, dist, s)?;
    let mut rng = seed::rng(s, &[3]);
    let parts_count = rng.random_range(1..=m);
    let mut parts = vec![1usize; parts_count];
    for _ in parts_count..m {
        parts[rng.random_range(0..parts_count)] += 1;
    }
    let points: Vec<Vec<Complex64>> = (0..parts_count)
        .map(|_| (0..n).map(|_| CoefficientDistribution::UniformDisc.sample(&mut rng)).collect())
        .collect();
    let partition = HarrisPartition::new(parts, m)?;
    let upper = certified_upper(&p, cfg)?;
    let r = check_harris(&p, &partition, &points, upper)?;
    let parts_text = r.partition.iter().map(usize::to_string).collect::<Vec<_>>().join("+");
    Ok(CaseResult {
        cells: vec![
            k.into(),
            m.into(),
            n.into(),
            dist.tag().into(),
            s.into(),
            parts_text.into(),
            r.value.into(),
            r.factor.into(),
            r.supnorm_bound.into(),
            r.rhs.into(),
            Outcome::of(r.pass).tag().into(),
        ],
        outcome: Outcome::of(r.pass),
    })
}

fn wiener_case(cfg: &RunConfig, k: usize) -> Result<CaseResult> {
    let (m, n, dist, s) = cfg.case(k)?;
    let mut rng = seed::rng(s, &[4]);
    let a0 = CoefficientDistribution::UniformDisc.sample(&mut rng);
    let parts = (1..=m)
        .map(|d| random_homogeneous(d, n, dist, seed::derive(s, &[5, d as u64])))
        .collect::<Result<Vec<_>>>()?;
    let raw = GeneralPolynomial::from_parts(n, a0, parts)?;
    let scale = certified_upper(&raw, cfg)?;
    let p = raw.scale(Complex64::new(1.0 / scale, 0.0));
    let upper = certified_upper(&p, cfg)?;
    let mode = WienerMode::Certified { max_points: cfg.grid_cap.unwrap_or(1_000_000), slack: cfg.grid_slack.unwrap_or(0.05) };
    let r = check_wiener(&p, upper, &mode)?;
    let worst = r.parts.iter().map(|x| x.value).fold(0.0, f64::max);
    Ok(CaseResult {
        cells: vec![
            k.into(),
            m.into(),
            n.into(),
            dist.tag().into(),
            s.into(),
            r.a0_abs.into(),
            r.supnorm_upper.into(),
            worst.into(),
            r.bound.into(),
            Outcome::of(r.pass).tag().into(),
        ],
        outcome: Outcome::of(r.pass),
    })
}

fn run_cases(
    cfg: RunConfig,
    columns: Vec<&'static str>,
    f: CaseFn,
) -> Result<Report> {
    let count = cfg.count.unwrap_or(100);
    let cases = par_cases(count, |k| f(&cfg, k))?;
    Ok(collect(cfg, columns, cases))
}

fn sidon_mn(cfg: RunConfig) -> Result<Report> {
    let pairs: Vec<(usize, usize)> = cfg.ms().into_iter().flat_map(|m| cfg.ns().into_iter().map(move |n| (m, n))).collect();
    let cases = par_cases(pairs.len(), |k| {
        let (m, n) = pairs[k];
        let s = seed::derive(cfg.seed(), &[CASE_STREAM, m as u64, n as u64]);
        let mut opts = SidonSearchOptions::new(n, cfg.budget.unwrap_or(32), s, cfg.strategy.unwrap_or(SearchStrategy::CoordinateAscent));
        opts.label = cfg.label.unwrap_or(BoundLabel::Heuristic);
        if let Some(cap) = cfg.grid_cap {
            opts.grid_cap = cap;
        }
        let b = sidon_lower_search(m, n, &opts)?;
        let pass = 1.0 <= b.lower_search && b.lower_search <= b.upper_best + 1e-9;
        Ok(CaseResult {
            cells: vec![
                m.into(),
                n.into(),
                s.into(),
                b.upper_hyper.into(),
                b.upper_trivial.into(),
                b.upper_best.into(),
                b.lower_search.into(),
                b.label.tag().into(),
                b.witness_sup.into(),
                sidon_crossover(m, CROSSOVER_N_MAX)?.into(),
                b.witness.to_json()?.into(),
                Outcome::of(pass).tag().into(),
            ],
            outcome: Outcome::of(pass),
        })
    })?;
    let columns = vec![
        "m",
        "n",
        "seed",
        "upper_hyper",
        "upper_trivial",
        "upper_best",
        "lower_search",
        "label",
        "witness_sup",
        "crossover_n",
        "witness",
        "check",
    ];
    Ok(collect(cfg, columns, cases))
}

fn bohr_radius(cfg: RunConfig) -> Result<Report> {
    let ns = cfg.n.clone().map(|l| l.0).unwrap_or_default();
    let truncation = cfg.ms().first().copied();
    let cases = par_cases(ns.len(), |k| {
        let r = bohr_lower(ns[k], truncation)?;
        let pass = r.certificate_sum <= 0.5 && r.lower <= r.upper;
        Ok(CaseResult {
            cells: vec![
                r.n.into(),
                r.lower.into(),
                r.upper.into(),
                r.b_lower.into(),
                r.m_used.into(),
                r.tail_bound.into(),
                r.certificate_sum.into(),
                Outcome::of(pass).tag().into(),
            ],
            outcome: Outcome::of(pass),
        })
    })?;
    let columns = vec!["n", "K_lower", "K_upper", "b_lower", "M_used", "tail_bound", "certificate_sum", "check"];
    Ok(collect(cfg, columns, cases))
}

fn bohr_small(cfg: RunConfig) -> Result<Report> {
    let step = match cfg.grid_step {
        Some(GridStep::Fixed(h)) => h,
        _ => return invalid("bohr-small needs a numeric --grid-step"),
    };
    let degree = cfg.degree.unwrap_or(50);
    let b = bohr_estimate_small(1, degree, step, step)?;
    let pass = b.upper.is_some_and(|u| b.lower <= 1.0 / 3.0 && 1.0 / 3.0 <= u);
    let case = CaseResult {
        cells: vec![
            1usize.into(),
            b.degree.into(),
            b.a_step.into(),
            b.r_step.into(),
            b.lower.into(),
            b.upper.into(),
            b.violating_a.into(),
            Outcome::of(pass).tag().into(),
        ],
        outcome: Outcome::of(pass),
    };
    Ok(collect(cfg, vec!["n", "degree", "a_step", "r_step", "lower", "upper", "violating_a", "check"], vec![case]))
}

fn read_dirichlet(path: &str) -> Result<DirichletPolynomial> {
    DirichletPolynomial::from_json(&std::fs::read_to_string(path)?)
}

fn lift(cfg: RunConfig) -> Result<Report> {
    let path = cfg.input.clone().ok_or_else(|| Error::InvalidArgument("lift needs --input".into()))?;
    let q = read_dirichlet(&path)?;
    let l = bohr_lift(&q)?;
    let transported = l.poly.l1_coeff_norm() == q.l1_norm();
    let mut doc = match serde_json::from_str::<Value>(&l.poly.to_json()?)? {
        Value::Object(map) => map,
        _ => unreachable!("polynomial documents are objects"),
    };
    doc.insert("primes".into(), json!(l.primes));
    let cases: Vec<CaseResult> = q
        .terms()
        .map(|(n, c)| {
            let alpha = &l.monomials[&n];
            CaseResult {
                cells: vec![
                    n.into(),
                    alpha.alpha.iter().map(u32::to_string).collect::<Vec<_>>().join(" ").into(),
                    alpha.degree().into(),
                    c.re.into(),
                    c.im.into(),
                ],
                outcome: Outcome::of(transported),
            }
        })
        .collect();
    let mut report = collect(cfg, vec!["n", "alpha", "degree", "re", "im"], cases);
    report.document = Some(doc);
    Ok(report)
}

fn sidon_big_n(cfg: RunConfig) -> Result<Report> {
    let lens = cfg.big_n.as_ref().map(IntList::usizes).unwrap_or_default();
    let brute_max = lens.iter().copied().filter(|&l| l <= BRUTE_MAX_N).max();
    let brute = match brute_max {
        Some(l) if l >= 1 => sidon_brute(l)?,
        _ => Vec::new(),
    };
    let c = -std::f64::consts::FRAC_1_SQRT_2;
    let budget = cfg.budget.unwrap_or(32);
    let cases = par_cases(lens.len(), |k| {
        let len = lens[k];
        let vars = crate::dirichlet::primes_up_to(len).len().max(1);
        let s = seed::derive(cfg.seed(), &[CASE_STREAM, len as u64]);
        let search = sidon_n_search(len, budget, s, &cfg.ascent(vars, seed::derive(s, &[1])))?;
        let b = brute.iter().find(|b| b.len == len);
        let (lower, method) = match b {
            Some(b) if b.certified_lower >= search => (b.certified_lower, "brute-certified"),
            _ => (search, "heuristic"),
        };
        let pass = lower >= 1.0 && b.is_none_or(|b| b.certified_lower <= b.estimate + 1e-12);
        Ok(CaseResult {
            cells: vec![
                len.into(),
                lower.into(),
                method.into(),
                search.into(),
                b.map(|b| b.estimate).into(),
                b.map(|b| b.certified_lower).into(),
                b.map(|b| b.grid_points).into(),
                c.into(),
                asymptotic_formula(len as f64, c).ok().into(),
                ASYMPTOTIC_LABEL.into(),
                Outcome::of(pass).tag().into(),
            ],
            outcome: Outcome::of(pass),
        })
    })?;
    let columns = vec![
        "N",
        "lower",
        "method",
        "search_lower",
        "brute_estimate",
        "brute_certified_lower",
        "brute_grid_points",
        "asymptotic_c",
        "formula_value",
        "formula_label",
        "check",
    ];
    Ok(collect(cfg, columns, cases))
}

fn bcq_sum(cfg: RunConfig) -> Result<Report> {
    let q = match &cfg.input {
        Some(path) => read_dirichlet(path)?,
        None => {
            let len = cfg.big_n.as_ref().and_then(|l| l.0.first().copied()).unwrap_or(100) as usize;
            let dist = cfg.dist.unwrap_or(CoefficientDistribution::ComplexGaussian);
            DirichletPolynomial::random(len, dist, seed::derive(cfg.seed(), &[CASE_STREAM]))?
        }
    };
    let c = cfg.c.unwrap_or(-std::f64::consts::FRAC_1_SQRT_2);
    let n_start = cfg.n_start.unwrap_or(3);
    let value = bcq_partial_sum(&q, c, n_start);
    let case = CaseResult {
        cells: vec![q.len().into(), c.into(), n_start.into(), q.l1_norm().into(), value.into()],
        outcome: Outcome::Pass,
    };
    Ok(collect(cfg, vec!["N", "c", "n_start", "l1", "value"], vec![case]))
}

fn constants(cfg: RunConfig) -> Result<Report> {
    let rows = constants_table(cfg.m_max.unwrap_or(20))?;
    let cases = rows
        .iter()
        .map(|r| CaseResult {
            cells: vec![
                r.m.into(),
                r.exponent.to_string().into(),
                r.hyper.into(),
                r.hyper.powf(1.0 / r.m as f64).into(),
                r.polarization.into(),
                r.queffelec.into(),
                r.davie_kaijser.into(),
                (r.hyper < r.queffelec).into(),
                (r.queffelec < r.polarization).into(),
            ],
            outcome: Outcome::Pass,
        })
        .collect();
    let columns = vec![
        "m",
        "exponent",
        "hyper",
        "hyper_root",
        "polarization",
        "queffelec",
        "davie_kaijser",
        "hyper_lt_queffelec",
        "queffelec_lt_polarization",
    ];
    Ok(collect(cfg, columns, cases))
}

/// Checks cycled through by `random-campaign`.
const CAMPAIGN_CHECKS: [(&str, CaseFn); 6] = [
    ("verify-bh", verify_bh_case),
    ("verify-bh-multilinear", verify_bh_multilinear_case),
    ("check-blei", blei_case),
    ("check-bayart", bayart_case),
    ("check-proof-step", proof_step_case),
    ("check-harris", harris_case),
];

fn random_campaign(mut cfg: RunConfig) -> Result<Report> {
    cfg.grid_step = None;
    let inner = {
        let mut c = cfg.clone();
        c.grid_step = Some(GridStep::Auto);
        c
    };
    let count = cfg.count.unwrap_or(100);
    let cases = par_cases(count, |k| {
        let (name, f) = CAMPAIGN_CHECKS[k % CAMPAIGN_CHECKS.len()];
        let sub = k / CAMPAIGN_CHECKS.len();
        let c = if name == "verify-bh" { &cfg } else { &inner };
        let sub_cfg = RunConfig { seed: Some(seed::derive(cfg.seed(), &[CASE_STREAM, k as u64])), ..c.clone() };
        let r = f(&sub_cfg, sub)?;
        let (m, n) = (r.cells[1].clone(), r.cells[2].clone());
        Ok(CaseResult { cells: vec![k.into(), name.into(), m, n, r.outcome.tag().into()], outcome: r.outcome })
    })?;
    Ok(collect(cfg, vec!["case", "check", "m", "n", "outcome"], cases))
}

/// Validates flags, fills in defaults and runs the command.
pub fn run(mut cfg: RunConfig) -> Result<Report> {
    cfg.check_flags()?;
    cfg.fill_defaults();
    const BLEI: [&str; 8] = ["case", "m", "n", "dist", "seed", "lhs", "rhs", "check"];
    const BAYART: [&str; 11] =
        ["case", "m", "n", "dist", "seed", "l2", "factor", "l1_mean", "l1_std_error", "rhs_band", "check"];
    const PROOF: [&str; 12] = [
        "case",
        "m",
        "n",
        "dist",
        "seed",
        "slot",
        "lhs",
        "constant",
        "supnorm_upper",
        "rhs",
        "parseval_rel_err",
        "check",
    ];
    const HARRIS: [&str; 11] =
        ["case", "m", "n", "dist", "seed", "partition", "value", "factor", "supnorm_upper", "rhs", "check"];
    const WIENER: [&str; 10] =
        ["case", "m", "n", "dist", "seed", "a0_abs", "supnorm_upper", "max_part_sup", "bound", "check"];
    match cfg.command {
        Command::VerifyBh => run_cases(cfg, INEQUALITY_COLUMNS.to_vec(), verify_bh_case),
        Command::VerifyBhMultilinear => run_cases(cfg, INEQUALITY_COLUMNS.to_vec(), verify_bh_multilinear_case),
        Command::CheckBlei => run_cases(cfg, BLEI.to_vec(), blei_case),
        Command::CheckBayart => run_cases(cfg, BAYART.to_vec(), bayart_case),
        Command::CheckProofStep => run_cases(cfg, PROOF.to_vec(), proof_step_case),
        Command::CheckHarris => run_cases(cfg, HARRIS.to_vec(), harris_case),
        Command::CheckWiener => run_cases(cfg, WIENER.to_vec(), wiener_case),
        Command::SidonMn => sidon_mn(cfg),
        Command::BohrRadius => bohr_radius(cfg),
        Command::BohrSmall => bohr_small(cfg),
        Command::Lift => lift(cfg),
        Command::SidonN => sidon_big_n(cfg),
        Command::BcqSum => bcq_sum(cfg),
        Command::ConstantsTable => constants(cfg),
        Command::RandomCampaign => random_campaign(cfg),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(command: Command) -> RunConfig {
        RunConfig::new(command)
    }

    #[test]
    fn int_lists() {
        assert_eq!("3".parse::<IntList>().unwrap().0, vec![3]);
        assert_eq!("2..5".parse::<IntList>().unwrap().0, vec![2, 3, 4, 5]);
        assert_eq!("2..=3,7".parse::<IntList>().unwrap().0, vec![2, 3, 7]);
        assert_eq!("1e12".parse::<IntList>().unwrap().0, vec![1_000_000_000_000]);
        assert!("5..2".parse::<IntList>().is_err());
        assert!("x".parse::<IntList>().is_err());
        assert!("1.5".parse::<IntList>().is_err());
    }

    #[test]
    fn starts_and_grid_step_round_trip() {
        for s in ["16", "8n"] {
            assert_eq!(s.parse::<Starts>().unwrap().to_string(), s);
        }
        assert_eq!("4n".parse::<Starts>().unwrap().resolve(3), 12);
        assert!("n".parse::<Starts>().is_err());
        assert_eq!("auto".parse::<GridStep>().unwrap(), GridStep::Auto);
        assert_eq!("0.01".parse::<GridStep>().unwrap(), GridStep::Fixed(0.01));
        assert!("-1".parse::<GridStep>().is_err());
    }

    #[test]
    fn foreign_flags_are_rejected() {
        let mut c = cfg(Command::ConstantsTable);
        c.samples = Some(10);
        assert!(run(c).is_err());
    }

    #[test]
    fn verify_bh_campaign_example() {
        let mut c = cfg(Command::VerifyBh);
        c.m = Some("3".parse().unwrap());
        c.n = Some("4".parse().unwrap());
        c.count = Some(100);
        c.seed = Some(7);
        let r = run(c).unwrap();
        assert_eq!(r.rows.len(), 100);
        assert_eq!(r.summary.pass, 100);
        assert_eq!(r.exit_code(), 0);
        let csv = r.render().unwrap();
        assert!(csv.starts_with("# config {\"command\":\"verify-bh\""));
        assert_eq!(csv.lines().count(), 2 + 1 + 100);
        assert!(csv.contains("\"seed\":7"));
        assert!(csv.contains("\"starts\":\"8n\""));
    }

    #[test]
    fn constants_table_rows() {
        let mut c = cfg(Command::ConstantsTable);
        c.m_max = Some(10);
        let r = run(c).unwrap();
        assert_eq!(r.rows.len(), 9);
        assert_eq!(r.rows[0][1], Cell::Text("4/3".into()));
    }

    #[test]
    fn json_rendering_keeps_column_order() {
        let mut c = cfg(Command::BohrRadius);
        c.n = Some("100".parse().unwrap());
        c.format = Some(Format::Json);
        let r = run(c).unwrap();
        let text = r.render().unwrap();
        let v: Value = serde_json::from_str(&text).unwrap();
        let row = v["rows"][0].as_object().unwrap();
        assert_eq!(row.keys().next().unwrap(), "n");
        assert_eq!(v["config"]["m"], json!([32]));
        assert_eq!(v["summary"]["failures"], json!(0));
    }

    #[test]
    fn reports_do_not_depend_on_thread_count() {
        let mut c = cfg(Command::RandomCampaign);
        c.count = Some(12);
        c.samples = Some(2000);
        c.m = Some("2..3".parse().unwrap());
        c.n = Some("2..3".parse().unwrap());
        let render = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| run(c.clone()).unwrap().render().unwrap())
        };
        let one = render(1);
        assert_eq!(one, render(3));
        assert!(one.lines().count() > 12);
    }
}
