use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use cssbp_core::decoders::{decode, CheckRule, DecodeResult, DecoderConfig, DecoderKind};
use cssbp_core::equivalence::{run_paired_with, sampled_syndromes, EquivalenceSummary, Initialization};
use cssbp_core::oracle::{exact_marginals, DEFAULT_LIMIT};
use cssbp_core::sim::{code_identity, load_code, run_trials, OutputFormat, PriorSpec, TrialConfig};
use cssbp_core::{phi, sample_error, CssCode, PauliError, PauliPrior, Syndromes};

#[derive(Parser)]
#[command(name = "cssbp", version, about = "Belief-propagation decoding of CSS codes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check orthogonality and print weights and the row intersection census.
    Validate {
        /// `paper24`, `tree4`, a support-table file, or `alist:HX,HZ`.
        code: String,
    },
    /// Decode a single instance.
    Decode(DecodeArgs),
    /// Monte Carlo trials over decoders and error rates.
    Trials(TrialArgs),
    /// Lockstep comparison of joint and four-state BP.
    Equiv(EquivArgs),
    /// Exact posterior marginals by enumeration (small codes only).
    Oracle(OracleArgs),
}

#[derive(Args)]
struct InstanceArgs {
    #[arg(long, default_value = "paper24")]
    code: String,
    /// `depolarizing`, `y-only`, a JSON array of per-qubit tables, or `@FILE`.
    #[arg(long, default_value = "depolarizing")]
    prior: String,
    #[arg(long, default_value_t = 0.1)]
    p: f64,
    /// Error as `X3,Z10,Y5` (1-based) or a dense string over I, X, Y, Z.
    #[arg(long, conflicts_with_all = ["sz", "sx"])]
    error: Option<String>,
    /// X-check syndrome bits, e.g. `01001000`.
    #[arg(long, requires = "sx")]
    sz: Option<String>,
    /// Z-check syndrome bits.
    #[arg(long, requires = "sz")]
    sx: Option<String>,
    /// Samples the error from the prior when neither an error nor syndromes are given.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct DecodeArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    #[arg(long, default_value = "joint")]
    decoder: String,
    #[command(flatten)]
    config: ConfigFlags,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct ConfigFlags {
    #[arg(long)]
    max_iters: Option<usize>,
    /// `exact` or `min-sum`.
    #[arg(long)]
    check_rule: Option<String>,
    #[arg(long)]
    minsum_scale: Option<f64>,
    #[arg(long)]
    damping: Option<f64>,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    no_early_stop: bool,
}

impl ConfigFlags {
    fn apply(&self, c: &mut DecoderConfig) -> Result<()> {
        if let Some(v) = self.max_iters {
            c.max_iterations = v;
        }
        if let Some(v) = &self.check_rule {
            c.check_rule = v.parse::<CheckRule>()?;
        }
        if let Some(v) = self.minsum_scale {
            c.minsum_scale = v;
        }
        if let Some(v) = self.damping {
            c.damping = v;
        }
        if let Some(v) = self.epsilon {
            c.epsilon = v;
        }
        if self.no_early_stop {
            c.early_stop = false;
        }
        c.validate()?;
        Ok(())
    }
}

#[derive(Args)]
struct TrialArgs {
    /// JSON config file; flags given on the command line override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    code: Option<String>,
    #[arg(long)]
    prior: Option<String>,
    /// Error rate; repeat for a sweep.
    #[arg(long = "p")]
    rates: Vec<f64>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Decoder identifier; repeat to compare several.
    #[arg(long = "decoder")]
    decoders: Vec<String>,
    #[command(flatten)]
    flags: ConfigFlags,
    /// `csv` or `json`.
    #[arg(long)]
    format: Option<String>,
    #[arg(long)]
    out: Option<String>,
}

#[derive(Args)]
struct EquivArgs {
    #[arg(long, default_value = "paper24")]
    code: String,
    #[arg(long, default_value = "depolarizing")]
    prior: String,
    #[arg(long, default_value_t = 0.1)]
    p: f64,
    #[arg(long, default_value_t = 20)]
    iters: usize,
    /// Number of sampled syndromes.
    #[arg(long, default_value_t = 30)]
    seeds: usize,
    /// Seed of the first sampled error.
    #[arg(long, default_value_t = 0)]
    base_seed: u64,
    /// Initialize from random four-state variable messages instead of uniform.
    #[arg(long)]
    four_state_first: bool,
    /// Check rule for the binary decoder only (negative control).
    #[arg(long, default_value = "exact")]
    binary_check_rule: String,
    /// Include per-instance, per-iteration reports.
    #[arg(long)]
    detail: bool,
}

#[derive(Args)]
struct OracleArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    #[arg(long, default_value_t = DEFAULT_LIMIT)]
    limit: usize,
}

fn parse_prior(spec: &str, n: usize, p: f64) -> Result<PauliPrior> {
    let spec: PriorSpec = match spec.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path)
            .with_context(|| format!("reading prior {path}"))?
            .parse()?,
        None => spec.parse()?,
    };
    Ok(spec.at(n, p)?)
}

fn parse_bits(s: &str, len: usize, what: &str) -> Result<Vec<u8>> {
    let bits: Vec<u8> = s
        .chars()
        .map(|c| match c {
            '0' => Ok(0),
            '1' => Ok(1),
            _ => bail!("{what}: unexpected character `{c}`"),
        })
        .collect::<Result<_>>()?;
    if bits.len() != len {
        bail!("{what}: expected {len} bits, got {}", bits.len());
    }
    Ok(bits)
}

fn parse_error(s: &str, n: usize) -> Result<PauliError> {
    let mut e = PauliError::zeros(n);
    let set = |e: &mut PauliError, j: usize, c: char| -> Result<()> {
        match c.to_ascii_uppercase() {
            'I' => {}
            'X' => e.x[j] = 1,
            'Z' => e.z[j] = 1,
            'Y' => {
                e.x[j] = 1;
                e.z[j] = 1;
            }
            _ => bail!("unknown Pauli `{c}`"),
        }
        Ok(())
    };
    let s = s.trim();
    if s.chars().all(|c| "IXYZixyz".contains(c)) && s.len() == n {
        for (j, c) in s.chars().enumerate() {
            set(&mut e, j, c)?;
        }
        return Ok(e);
    }
    for tok in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let mut chars = tok.chars();
        let c = chars.next().unwrap();
        let j: usize = chars.as_str().parse().with_context(|| format!("bad error term `{tok}`"))?;
        if j == 0 || j > n {
            bail!("qubit {j} in `{tok}` outside 1..={n}");
        }
        set(&mut e, j - 1, c)?;
    }
    Ok(e)
}

fn format_error(e: &PauliError) -> String {
    let terms: Vec<String> = (0..e.len())
        .filter(|&j| e.x[j] == 1 || e.z[j] == 1)
        .map(|j| {
            let c = match (e.x[j], e.z[j]) {
                (1, 0) => 'X',
                (0, 1) => 'Z',
                _ => 'Y',
            };
            format!("{c}{}", j + 1)
        })
        .collect();
    if terms.is_empty() {
        "I".into()
    } else {
        terms.join(",")
    }
}

struct Instance {
    code: CssCode,
    prior: PauliPrior,
    error: Option<PauliError>,
    syndromes: Syndromes,
}

fn load_instance(a: &InstanceArgs) -> Result<Instance> {
    let code = load_code(&a.code)?;
    let prior = parse_prior(&a.prior, code.n(), a.p)?;
    let (error, syndromes) = match (&a.error, &a.sz, &a.sx) {
        (Some(e), _, _) => {
            let e = parse_error(e, code.n())?;
            let s = code.syndrome(&e)?;
            (Some(e), s)
        }
        (None, Some(sz), Some(sx)) => (
            None,
            Syndromes {
                sz: parse_bits(sz, code.mx(), "--sz")?,
                sx: parse_bits(sx, code.mz(), "--sx")?,
            },
        ),
        _ => {
            let e = sample_error(&prior, a.seed);
            let s = code.syndrome(&e)?;
            (Some(e), s)
        }
    };
    Ok(Instance {
        code,
        prior,
        error,
        syndromes,
    })
}

fn bits(v: &[u8]) -> String {
    v.iter().map(|b| if *b == 1 { '1' } else { '0' }).collect()
}

fn belief_table(beliefs: &[[f64; 4]]) -> String {
    let mut s = String::from("qubit      p(I)       p(X)       p(Z)       p(Y)\n");
    for (j, b) in beliefs.iter().enumerate() {
        let _ = writeln!(s, "{:>5} {:>10.6} {:>10.6} {:>10.6} {:>10.6}", j + 1, b[0], b[1], b[2], b[3]);
    }
    s
}

#[derive(Serialize)]
struct DecodeOutput<'a> {
    syndromes: &'a Syndromes,
    error: Option<&'a PauliError>,
    #[serde(flatten)]
    result: &'a DecodeResult,
}

fn cmd_decode(a: &DecodeArgs) -> Result<String> {
    let inst = load_instance(&a.instance)?;
    let kind: DecoderKind = a.decoder.parse()?;
    let mut cfg = DecoderConfig::default();
    a.config.apply(&mut cfg)?;
    let mut r = decode(&inst.code, &inst.prior, &inst.syndromes, &cfg, kind)?;
    if let Some(e) = &inst.error {
        r.residual = Some(inst.code.classify_residual(e, &r.decision)?);
    }
    if a.json {
        let out = DecodeOutput {
            syndromes: &inst.syndromes,
            error: inst.error.as_ref(),
            result: &r,
        };
        return Ok(serde_json::to_string_pretty(&out)? + "\n");
    }
    let mut s = String::new();
    let _ = writeln!(s, "decoder {kind}");
    let _ = writeln!(s, "sz {}", bits(&inst.syndromes.sz));
    let _ = writeln!(s, "sx {}", bits(&inst.syndromes.sx));
    if let Some(e) = &inst.error {
        let _ = writeln!(s, "error {}", format_error(e));
    }
    let _ = writeln!(s, "iterations {}", r.iterations);
    let _ = writeln!(s, "converged {}", r.converged);
    s.push_str(&belief_table(&r.beliefs));
    let labels: Vec<&str> = (0..r.decision.len())
        .map(|j| phi(r.decision.x[j], r.decision.z[j]).symbol())
        .collect();
    let _ = writeln!(s, "decision {}", format_error(&r.decision));
    let _ = writeln!(s, "labels {}", labels.join(" "));
    if let Some(c) = r.residual {
        let _ = writeln!(s, "residual {}", serde_json::to_value(c)?.as_str().unwrap_or_default());
    }
    Ok(s)
}

fn trial_config(a: &TrialArgs) -> Result<TrialConfig> {
    let mut c = match &a.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?
        }
        None => TrialConfig::default(),
    };
    if let Some(v) = &a.code {
        c.code = v.clone();
    }
    if let Some(v) = &a.prior {
        c.prior = match v.strip_prefix('@') {
            Some(path) => std::fs::read_to_string(path)
                .with_context(|| format!("reading prior {path}"))?
                .parse()?,
            None => v.parse()?,
        };
    }
    if !a.rates.is_empty() {
        c.rates = a.rates.clone();
    }
    if let Some(v) = a.trials {
        c.trials = v;
    }
    if let Some(v) = a.seed {
        c.seed = v;
    }
    if !a.decoders.is_empty() {
        c.decoders = a.decoders.iter().map(|d| d.parse()).collect::<Result<_, _>>()?;
    }
    a.flags.apply(&mut c.decoder)?;
    if let Some(v) = &a.format {
        c.format = v.parse::<OutputFormat>()?;
    }
    if let Some(v) = &a.out {
        c.out = Some(v.clone());
    }
    Ok(c)
}

fn cmd_trials(a: &TrialArgs) -> Result<Option<String>> {
    let cfg = trial_config(a)?;
    let report = run_trials(&cfg)?;
    let text = report.render(cfg.format);
    match &cfg.out {
        Some(path) => {
            std::fs::write(path, text).with_context(|| format!("writing {path}"))?;
            Ok(None)
        }
        None => Ok(Some(text)),
    }
}

#[derive(Serialize)]
struct EquivOutput {
    code: String,
    p: f64,
    initialization: &'static str,
    binary_check_rule: CheckRule,
    #[serde(flatten)]
    summary: EquivalenceSummary,
    #[serde(skip_serializing_if = "Option::is_none")]
    instances: Option<Vec<cssbp_core::EquivalenceReport>>,
}

fn cmd_equiv(a: &EquivArgs) -> Result<String> {
    let code = load_code(&a.code)?;
    let prior = parse_prior(&a.prior, code.n(), a.p)?;
    let four = DecoderConfig::exact(a.iters);
    let binary = DecoderConfig {
        check_rule: a.binary_check_rule.parse()?,
        ..four.clone()
    };
    let reports = sampled_syndromes(&code, &prior, a.seeds, a.base_seed)?
        .iter()
        .enumerate()
        .map(|(k, s)| {
            let init = if a.four_state_first {
                Initialization::FourStateFirst {
                    seed: a.base_seed.wrapping_add(k as u64),
                }
            } else {
                Initialization::Uniform
            };
            run_paired_with(&code, &prior, s, a.iters, &binary, &four, init)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let out = EquivOutput {
        code: code_identity(&a.code, &code),
        p: a.p,
        initialization: if a.four_state_first { "four-state-first" } else { "uniform" },
        binary_check_rule: binary.check_rule,
        summary: EquivalenceSummary::from_reports(a.iters, &reports),
        instances: a.detail.then_some(reports),
    };
    Ok(serde_json::to_string_pretty(&out)? + "\n")
}

fn cmd_oracle(a: &OracleArgs) -> Result<String> {
    let inst = load_instance(&a.instance)?;
    let m = exact_marginals(&inst.code, &inst.prior, &inst.syndromes, a.limit)?;
    let mut s = String::new();
    let _ = writeln!(s, "sz {}", bits(&inst.syndromes.sz));
    let _ = writeln!(s, "sx {}", bits(&inst.syndromes.sx));
    s.push_str(&belief_table(&m));
    Ok(s)
}

fn run(cli: Cli) -> Result<Option<String>> {
    Ok(Some(match cli.command {
        Command::Validate { code } => load_code(&code)?.validate().to_text(),
        Command::Decode(a) => cmd_decode(&a)?,
        Command::Trials(a) => return cmd_trials(&a),
        Command::Equiv(a) => cmd_equiv(&a)?,
        Command::Oracle(a) => cmd_oracle(&a)?,
    }))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            if let Some(s) = out {
                print!("{s}");
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
