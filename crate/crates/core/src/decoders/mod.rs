//! Flooding-schedule sum-product decoders for CSS syndrome decoding.
//!
//! * [`JointBpState`]: binary messages on both Tanner graphs, coupled through
//!   the joint prior at every qubit.
//! * [`LlrJointState`]: the same decoder with scalar LLR messages.
//! * [`SeparateBpState`]: two independent binary decoders on the marginal
//!   priors.
//! * [`FourStateState`]: one four-valued Pauli-label variable per qubit.
//!
//! Every state starts with uniform check-to-variable messages and variable
//! messages computed from the prior. One call to `iterate` updates all check
//! messages and then all variable messages.

mod four_state;
mod joint;
mod llr;
pub mod messages;
mod separate;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use four_state::FourStateState;
pub use joint::JointBpState;
pub use llr::LlrJointState;
pub use separate::{separate_decode, BinaryBpState, ComponentResult, SeparateBpState};

use crate::channel::{joint_index, phi, Label, PauliPrior};
use crate::code::{CssCode, PauliError, ResidualClass, Syndromes};
use crate::error::{Error, Result};

/// Beliefs within this distance of the maximum count as tied.
pub const TIE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum CheckRule {
    #[default]
    #[serde(rename = "exact")]
    Exact,
    #[serde(rename = "min-sum")]
    MinSum,
}

impl FromStr for CheckRule {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" | "box-plus" => Ok(CheckRule::Exact),
            "min-sum" | "minsum" => Ok(CheckRule::MinSum),
            _ => Err(Error::InvalidConfig(format!("unknown check rule `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DecoderConfig {
    pub max_iterations: usize,
    /// Floor applied to probability-domain messages before renormalizing.
    pub epsilon: f64,
    pub check_rule: CheckRule,
    pub minsum_scale: f64,
    /// Weight of the previous check message; 0 disables damping.
    pub damping: f64,
    pub early_stop: bool,
    /// Saturation bound on LLR messages.
    pub llr_clamp: f64,
}

impl Default for DecoderConfig {
    fn default() -> Self {
        DecoderConfig {
            max_iterations: 50,
            epsilon: 0.0,
            check_rule: CheckRule::Exact,
            minsum_scale: 1.0,
            damping: 0.0,
            early_stop: true,
            llr_clamp: 30.0,
        }
    }
}

impl DecoderConfig {
    /// Fixed-iteration exact sum-product, as used for lockstep comparisons.
    pub fn exact(iterations: usize) -> Self {
        DecoderConfig {
            max_iterations: iterations,
            early_stop: false,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1e-3).contains(&self.epsilon) {
            return Err(Error::InvalidConfig(format!(
                "epsilon {} outside [0, 1e-3]",
                self.epsilon
            )));
        }
        if !(self.minsum_scale > 0.0 && self.minsum_scale <= 1.0) {
            return Err(Error::InvalidConfig(format!(
                "min-sum scale {} outside (0, 1]",
                self.minsum_scale
            )));
        }
        if !(0.0..1.0).contains(&self.damping) {
            return Err(Error::InvalidConfig(format!(
                "damping {} outside [0, 1)",
                self.damping
            )));
        }
        if !(self.llr_clamp > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "LLR clamp {} must be positive",
                self.llr_clamp
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum DecoderKind {
    #[serde(rename = "joint")]
    Joint,
    #[serde(rename = "joint-llr")]
    JointLlr,
    #[serde(rename = "separate")]
    Separate,
    #[serde(rename = "four-state")]
    FourState,
}

impl DecoderKind {
    pub const ALL: [DecoderKind; 4] = [
        DecoderKind::Joint,
        DecoderKind::JointLlr,
        DecoderKind::Separate,
        DecoderKind::FourState,
    ];

    pub fn name(self) -> &'static str {
        match self {
            DecoderKind::Joint => "joint",
            DecoderKind::JointLlr => "joint-llr",
            DecoderKind::Separate => "separate",
            DecoderKind::FourState => "four-state",
        }
    }
}

impl fmt::Display for DecoderKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DecoderKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        DecoderKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::UnknownDecoder(s.to_string()))
    }
}

/// Common interface of the iterative decoders.
pub trait BeliefPropagation {
    /// One flooding iteration.
    fn iterate(&mut self) -> Result<()>;

    /// Number of completed iterations.
    fn iteration(&self) -> usize;

    /// Per-qubit beliefs as joint (x, z) tables indexed by [`joint_index`].
    fn joint_beliefs(&self) -> Vec<[f64; 4]>;

    /// Maximum-belief decision under the common tie-breaking order.
    fn hard_decision(&self) -> PauliError {
        hard_decision_joint(&self.joint_beliefs())
    }

    /// Per-component argmax of the product of incoming check messages, for
    /// decoders that have binary variable nodes.
    fn componentwise_estimate(&self) -> Option<PauliError> {
        None
    }
}

/// Argmax of each joint table with ties resolved in the order
/// (0,0), (1,0), (0,1), (1,1).
pub fn hard_decision_joint(beliefs: &[[f64; 4]]) -> PauliError {
    let n = beliefs.len();
    let mut e = PauliError::zeros(n);
    for (j, b) in beliefs.iter().enumerate() {
        let k = messages::argmax_first(b, TIE_TOLERANCE);
        e.x[j] = (k & 1) as u8;
        e.z[j] = (k >> 1) as u8;
    }
    e
}

/// Argmax of each label table with ties resolved in the order 0, 1, ω, ω²,
/// which is the order induced from the joint order through φ.
pub fn hard_decision_four_state(beliefs: &[[f64; 4]]) -> Vec<Label> {
    beliefs
        .iter()
        .map(|b| Label::from_index(messages::argmax_first(b, TIE_TOLERANCE)))
        .collect()
}

/// Per-component argmax of the belief marginals.
pub fn marginal_estimate(beliefs: &[[f64; 4]]) -> PauliError {
    let n = beliefs.len();
    let mut e = PauliError::zeros(n);
    for (j, b) in beliefs.iter().enumerate() {
        let bx = [b[0] + b[2], b[1] + b[3]];
        let bz = [b[0] + b[1], b[2] + b[3]];
        e.x[j] = messages::argmax_first(&bx, TIE_TOLERANCE) as u8;
        e.z[j] = messages::argmax_first(&bz, TIE_TOLERANCE) as u8;
    }
    e
}

/// Converts label beliefs to joint tables through φ.
pub fn label_to_joint(beliefs: &[[f64; 4]]) -> Vec<[f64; 4]> {
    beliefs
        .iter()
        .map(|b| {
            let mut t = [0.0; 4];
            for x in 0..2 {
                for z in 0..2 {
                    t[joint_index(x, z)] = b[phi(x, z).index()];
                }
            }
            t
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecodeResult {
    pub decoder: DecoderKind,
    /// Joint (x, z) belief tables, in (0,0), (1,0), (0,1), (1,1) order.
    pub beliefs: Vec<[f64; 4]>,
    pub decision: PauliError,
    pub componentwise: Option<PauliError>,
    pub marginal: PauliError,
    pub iterations: usize,
    /// The decision reproduces the input syndromes.
    pub converged: bool,
    pub residual: Option<ResidualClass>,
}

pub(crate) fn check_dims(code: &CssCode, prior: &PauliPrior, syndromes: &Syndromes) -> Result<()> {
    if prior.n() != code.n() {
        return Err(Error::DimensionMismatch(format!(
            "prior covers {} qubits, code has n = {}",
            prior.n(),
            code.n()
        )));
    }
    code.check_syndromes(syndromes)
}

/// Builds an initialized decoder of the given kind.
pub fn build_decoder<'a>(
    kind: DecoderKind,
    code: &'a CssCode,
    prior: &'a PauliPrior,
    syndromes: &Syndromes,
    config: &DecoderConfig,
) -> Result<Box<dyn BeliefPropagation + 'a>> {
    Ok(match kind {
        DecoderKind::Joint => Box::new(JointBpState::new(code, prior, syndromes, config.clone())?),
        DecoderKind::JointLlr => Box::new(LlrJointState::new(code, prior, syndromes, config.clone())?),
        DecoderKind::Separate => Box::new(SeparateBpState::new(code, prior, syndromes, config.clone())?),
        DecoderKind::FourState => Box::new(FourStateState::new(code, prior, syndromes, config.clone())?),
    })
}

/// Runs the selected decoder until its decision reproduces the syndromes (when
/// early stopping is on) or `max_iterations` is reached.
pub fn decode(
    code: &CssCode,
    prior: &PauliPrior,
    syndromes: &Syndromes,
    config: &DecoderConfig,
    kind: DecoderKind,
) -> Result<DecodeResult> {
    let mut dec = build_decoder(kind, code, prior, syndromes, config)?;
    let mut decision = dec.hard_decision();
    let mut converged = code.syndrome(&decision)? == *syndromes;
    for _ in 0..config.max_iterations {
        dec.iterate()?;
        decision = dec.hard_decision();
        converged = code.syndrome(&decision)? == *syndromes;
        if converged && config.early_stop {
            break;
        }
    }
    let beliefs = dec.joint_beliefs();
    Ok(DecodeResult {
        decoder: kind,
        marginal: marginal_estimate(&beliefs),
        componentwise: dec.componentwise_estimate(),
        beliefs,
        decision,
        iterations: dec.iteration(),
        converged,
        residual: None,
    })
}

/// [`decode`] on the syndrome of a known error, with the residual classified.
pub fn decode_error(
    code: &CssCode,
    prior: &PauliPrior,
    error: &PauliError,
    config: &DecoderConfig,
    kind: DecoderKind,
) -> Result<DecodeResult> {
    let syndromes = code.syndrome(error)?;
    let mut r = decode(code, prior, &syndromes, config, kind)?;
    r.residual = Some(code.classify_residual(error, &r.decision)?);
    Ok(r)
}
