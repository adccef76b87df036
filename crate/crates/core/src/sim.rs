//! Monte Carlo trials across decoders and error rates.

use std::fmt::Write as _;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::channel::{sample_error, PauliPrior};
use crate::code::{paper_code_24, parse_css_support_table, tree_code_4, CssCode, ResidualClass, ResidualClassifier};
use crate::decoders::{decode, DecoderConfig, DecoderKind};
use crate::error::{Error, Result};

/// Environment variable that caps the number of worker threads.
pub const THREADS_ENV: &str = "CSSBP_THREADS";

/// Per-qubit prior family, instantiated at each rate of a sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PriorRepr", into = "PriorRepr")]
pub enum PriorSpec {
    Depolarizing,
    /// Only Y errors: (1-p, 0, 0, p).
    YOnly,
    /// Fixed tables; the sweep rate is then only a label.
    Tables(Vec<[f64; 4]>),
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum PriorRepr {
    Name(String),
    Tables(Vec<[f64; 4]>),
}

impl TryFrom<PriorRepr> for PriorSpec {
    type Error = Error;
    fn try_from(r: PriorRepr) -> Result<Self> {
        match r {
            PriorRepr::Name(s) => s.parse(),
            PriorRepr::Tables(t) => Ok(PriorSpec::Tables(t)),
        }
    }
}

impl From<PriorSpec> for PriorRepr {
    fn from(p: PriorSpec) -> Self {
        match p {
            PriorSpec::Depolarizing => PriorRepr::Name("depolarizing".into()),
            PriorSpec::YOnly => PriorRepr::Name("y-only".into()),
            PriorSpec::Tables(t) => PriorRepr::Tables(t),
        }
    }
}

impl FromStr for PriorSpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "depolarizing" => Ok(PriorSpec::Depolarizing),
            "y-only" => Ok(PriorSpec::YOnly),
            _ if s.starts_with('[') => serde_json::from_str(s)
                .map(PriorSpec::Tables)
                .map_err(|e| Error::InvalidConfig(format!("prior tables: {e}"))),
            _ => Err(Error::InvalidConfig(format!(
                "unknown prior `{s}` (expected depolarizing, y-only or a JSON array of tables)"
            ))),
        }
    }
}

impl PriorSpec {
    pub fn at(&self, n: usize, p: f64) -> Result<PauliPrior> {
        match self {
            PriorSpec::Depolarizing => PauliPrior::depolarizing(n, p),
            PriorSpec::YOnly => PauliPrior::y_only(n, p),
            PriorSpec::Tables(t) => {
                if t.len() != n {
                    return Err(Error::DimensionMismatch(format!("{} prior tables for n = {n}", t.len())));
                }
                PauliPrior::new(t.clone())
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            _ => Err(Error::InvalidConfig(format!("unknown format `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrialConfig {
    /// `paper24`, `tree4`, `alist:HX_PATH,HZ_PATH` or a support-table file.
    pub code: String,
    pub prior: PriorSpec,
    pub rates: Vec<f64>,
    pub trials: usize,
    pub seed: u64,
    pub decoders: Vec<DecoderKind>,
    pub decoder: DecoderConfig,
    pub format: OutputFormat,
    pub out: Option<String>,
}

impl Default for TrialConfig {
    fn default() -> Self {
        TrialConfig {
            code: "paper24".into(),
            prior: PriorSpec::Depolarizing,
            rates: vec![0.1],
            trials: 1000,
            seed: 0,
            decoders: vec![DecoderKind::Joint, DecoderKind::Separate],
            decoder: DecoderConfig::default(),
            format: OutputFormat::Csv,
            out: None,
        }
    }
}

impl TrialConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidConfig("trials must be at least 1".into()));
        }
        if self.rates.is_empty() {
            return Err(Error::InvalidConfig("no error rates given".into()));
        }
        if let Some(&p) = self.rates.iter().find(|p| !(0.0..=1.0).contains(*p)) {
            return Err(Error::InvalidProbability(p));
        }
        if self.decoders.is_empty() {
            return Err(Error::InvalidConfig("no decoders given".into()));
        }
        self.decoder.validate()
    }

    /// SHA-256 of the canonical JSON of the experiment, excluding output
    /// settings.
    pub fn hash(&self) -> String {
        let mut c = self.clone();
        c.out = None;
        c.format = OutputFormat::Csv;
        let json = serde_json::to_string(&c).expect("config serializes");
        hex(&Sha256::digest(json.as_bytes()))
    }
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().fold(String::new(), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

fn read(path: &str) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.to_string(),
        msg: e.to_string(),
    })
}

/// Resolves a code source string.
pub fn load_code(source: &str) -> Result<CssCode> {
    match source {
        "paper24" => Ok(paper_code_24()),
        "tree4" => Ok(tree_code_4()),
        _ => {
            if let Some(rest) = source.strip_prefix("alist:") {
                let (hx, hz) = rest
                    .split_once(',')
                    .ok_or_else(|| Error::InvalidConfig("expected alist:HX_PATH,HZ_PATH".into()))?;
                CssCode::from_alist_pair(&read(hx)?, &read(hz)?)
            } else {
                parse_css_support_table(&read(source)?)
            }
        }
    }
}

/// Source name, dimensions and a digest of the check supports.
pub fn code_identity(source: &str, code: &CssCode) -> String {
    let digest = hex(&Sha256::digest(code.to_support_table().as_bytes()));
    format!("{source} n={} mX={} mZ={} sha256={}", code.n(), code.mx(), code.mz(), &digest[..16])
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Sampling seed of one trial. The decoder is deliberately not an input, so
/// every decoder sees the same error stream.
pub fn trial_seed(base: u64, rate: f64, trial: u64) -> u64 {
    base ^ splitmix64(splitmix64(rate.to_bits()) ^ trial)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatsRow {
    pub decoder: DecoderKind,
    pub p: f64,
    pub trials: usize,
    pub converged: usize,
    pub exact: usize,
    pub stabilizer: usize,
    pub logical: usize,
    pub mismatch: usize,
    pub mean_iters: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub seed: u64,
    pub config_hash: String,
    pub code: String,
    pub prior: PriorSpec,
    pub decoder_config: DecoderConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatsReport {
    pub metadata: Metadata,
    pub rows: Vec<StatsRow>,
}

pub const CSV_HEADER: &str = "decoder,p,trials,converged,exact,stabilizer,logical,mismatch,mean_iters";

impl StatsReport {
    pub fn row(&self, decoder: DecoderKind, p: f64) -> Option<&StatsRow> {
        self.rows.iter().find(|r| r.decoder == decoder && r.p == p)
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from(CSV_HEADER);
        s.push('\n');
        for r in &self.rows {
            let _ = writeln!(
                s,
                "{},{},{},{},{},{},{},{},{:.4}",
                r.decoder, r.p, r.trials, r.converged, r.exact, r.stabilizer, r.logical, r.mismatch, r.mean_iters
            );
        }
        s
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Csv => self.to_csv(),
            OutputFormat::Json => self.to_json(),
        }
    }
}

/// Result of one decoder on one sampled error.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TrialOutcome {
    pub converged: bool,
    pub class: ResidualClass,
    pub iterations: usize,
}

fn thread_pool() -> Result<Option<rayon::ThreadPool>> {
    let Ok(v) = std::env::var(THREADS_ENV) else {
        return Ok(None);
    };
    let k: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&k| k > 0)
        .ok_or_else(|| Error::InvalidConfig(format!("{THREADS_ENV}={v} is not a positive integer")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(k)
        .build()
        .map(Some)
        .map_err(|e| Error::InvalidConfig(e.to_string()))
}

fn run_rate(config: &TrialConfig, code: &CssCode, classifier: &ResidualClassifier<'_>, p: f64) -> Result<Vec<Vec<TrialOutcome>>> {
    let prior = config.prior.at(code.n(), p)?;
    (0..config.trials as u64)
        .into_par_iter()
        .map(|t| {
            let e = sample_error(&prior, trial_seed(config.seed, p, t));
            let s = code.syndrome(&e)?;
            config
                .decoders
                .iter()
                .map(|&kind| {
                    let r = decode(code, &prior, &s, &config.decoder, kind)?;
                    Ok(TrialOutcome {
                        converged: r.converged,
                        class: classifier.classify(&e, &r.decision)?,
                        iterations: r.iterations,
                    })
                })
                .collect()
        })
        .collect()
}

/// Per-trial outcomes indexed as `[rate][trial][decoder]`, in config order.
pub fn trial_outcomes(config: &TrialConfig) -> Result<Vec<Vec<Vec<TrialOutcome>>>> {
    config.validate()?;
    let code = load_code(&config.code)?;
    outcomes_for(config, &code)
}

fn outcomes_for(config: &TrialConfig, code: &CssCode) -> Result<Vec<Vec<Vec<TrialOutcome>>>> {
    let classifier = ResidualClassifier::new(code);
    let work = || -> Result<Vec<Vec<Vec<TrialOutcome>>>> {
        config.rates.iter().map(|&p| run_rate(config, code, &classifier, p)).collect()
    };
    match thread_pool()? {
        Some(pool) => pool.install(work),
        None => work(),
    }
}

/// Runs every (decoder, rate, trial) and aggregates in (decoder, rate) order.
/// The output does not depend on the number of threads.
pub fn run_trials(config: &TrialConfig) -> Result<StatsReport> {
    config.validate()?;
    let code = load_code(&config.code)?;
    let per_rate = outcomes_for(config, &code)?;

    let mut rows = Vec::new();
    for (d, &kind) in config.decoders.iter().enumerate() {
        for (&p, outcomes) in config.rates.iter().zip(&per_rate) {
            let mut row = StatsRow {
                decoder: kind,
                p,
                trials: outcomes.len(),
                converged: 0,
                exact: 0,
                stabilizer: 0,
                logical: 0,
                mismatch: 0,
                mean_iters: 0.0,
            };
            let mut iters = 0usize;
            for o in outcomes.iter().map(|t| t[d]) {
                row.converged += usize::from(o.converged);
                iters += o.iterations;
                match o.class {
                    ResidualClass::Exact => row.exact += 1,
                    ResidualClass::Stabilizer => row.stabilizer += 1,
                    ResidualClass::Logical => row.logical += 1,
                    ResidualClass::SyndromeMismatch => row.mismatch += 1,
                }
            }
            row.mean_iters = iters as f64 / row.trials as f64;
            rows.push(row);
        }
    }
    Ok(StatsReport {
        metadata: Metadata {
            seed: config.seed,
            config_hash: config.hash(),
            code: code_identity(&config.code, &code),
            prior: config.prior.clone(),
            decoder_config: config.decoder.clone(),
        },
        rows,
    })
}
