//! Lockstep comparison of joint BP and four-state BP.
//!
//! Both decoders run in fixed-iteration mode on the same instance. After each
//! iteration the four-state messages and beliefs are relabeled through φ and
//! compared with their binary counterparts edge by edge.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::channel::{phi, sample_error, Label, PauliPrior};
use crate::code::{CssCode, Syndromes};
use crate::decoders::messages::{argmax_first, normalize, Msg2, Msg4};
use crate::decoders::{label_to_joint, DecoderConfig, FourStateState, JointBpState, TIE_TOLERANCE};
use crate::error::Result;

/// Which binary component a message on an edge is about: X-type checks carry
/// messages about z, Z-type checks about x.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Component {
    X,
    Z,
}

impl Component {
    fn relevant(self, a: Label) -> u8 {
        match self {
            Component::X => a.z(),
            Component::Z => a.x(),
        }
    }
}

/// Compatible initializations of the two decoders.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Initialization {
    /// Uniform check-to-variable messages on both sides.
    Uniform,
    /// Seeded random four-state variable-to-check messages, with the binary
    /// side set to their marginals.
    FourStateFirst { seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IterationDeviation {
    pub iteration: usize,
    pub belief: f64,
    pub check_message: f64,
    pub variable_message: f64,
    pub constancy_defect: f64,
    pub decisions_agree: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EquivalenceReport {
    pub iterations: usize,
    pub max_belief_deviation: f64,
    pub max_check_message_deviation: f64,
    pub max_variable_message_deviation: f64,
    pub max_constancy_defect: f64,
    pub hard_decisions_agree: bool,
    pub per_iteration: Vec<IterationDeviation>,
}

/// Marginalizes a label-ordered four-state message onto the relevant
/// component of `component` and returns (sup-norm distance to `binary` after
/// normalization, constancy defect in the irrelevant component).
///
/// The constancy defect is measured on the normalized 4-vector; it is only
/// expected to vanish for check-to-variable messages.
pub fn check_message_identity(four: &Msg4, binary: &Msg2, component: Component) -> (f64, f64) {
    let four = normalize(*four).unwrap_or(*four);
    let mut marginal = [0.0; 2];
    let mut split = [[0.0; 2]; 2];
    for a in Label::ALL {
        let r = component.relevant(a) as usize;
        let other = match component {
            Component::X => a.x(),
            Component::Z => a.z(),
        } as usize;
        marginal[r] += four[a.index()];
        split[r][other] = four[a.index()];
    }
    let marginal = normalize(marginal).unwrap_or(marginal);
    let deviation = (marginal[0] - binary[0]).abs().max((marginal[1] - binary[1]).abs());
    let constancy = (split[0][0] - split[0][1]).abs().max((split[1][0] - split[1][1]).abs());
    (deviation, constancy)
}

/// Whether the label argmax of `b4` equals φ of the joint argmax of `b2`,
/// both under the common tie-breaking order.
pub fn hard_decision_correspondence(b4: &Msg4, b2: &[f64; 4]) -> bool {
    let label = Label::from_index(argmax_first(b4, TIE_TOLERANCE));
    let k = argmax_first(b2, TIE_TOLERANCE);
    label == phi((k & 1) as u8, (k >> 1) as u8)
}

fn sup_norm(a: &[[f64; 4]], b: &[[f64; 4]]) -> f64 {
    a.iter()
        .zip(b)
        .flat_map(|(p, q)| p.iter().zip(q).map(|(u, v)| (u - v).abs()))
        .fold(0.0, f64::max)
}

fn compare(iteration: usize, four: &FourStateState<'_>, joint: &JointBpState<'_>) -> IterationDeviation {
    let b4 = four.beliefs();
    let b2 = joint.beliefs();
    let mut check = 0.0f64;
    let mut var = 0.0f64;
    let mut constancy = 0.0f64;
    let pairs = [
        (four.xcheck_to_var(), joint.xcheck_to_z(), four.var_to_xcheck(), joint.z_to_xcheck(), Component::X),
        (four.zcheck_to_var(), joint.zcheck_to_x(), four.var_to_zcheck(), joint.x_to_zcheck(), Component::Z),
    ];
    for (c4, c2, v4, v2, comp) in pairs {
        for (m4, m2) in c4.iter().zip(c2) {
            let (d, k) = check_message_identity(m4, m2, comp);
            check = check.max(d);
            constancy = constancy.max(k);
        }
        for (m4, m2) in v4.iter().zip(v2) {
            var = var.max(check_message_identity(m4, m2, comp).0);
        }
    }
    IterationDeviation {
        iteration,
        belief: sup_norm(&label_to_joint(&b4), &b2),
        check_message: check,
        variable_message: var,
        constancy_defect: constancy,
        decisions_agree: b4.iter().zip(&b2).all(|(p, q)| hard_decision_correspondence(p, q)),
    }
}

fn random_message(rng: &mut ChaCha8Rng) -> Msg4 {
    let v = [0; 4].map(|_| rng.random_range(0.05..1.0));
    normalize(v).unwrap()
}

/// Runs both decoders with exact updates for `iterations` iterations and
/// compares them at every iteration including the initial state.
pub fn run_paired(code: &CssCode, prior: &PauliPrior, syndromes: &Syndromes, iterations: usize) -> Result<EquivalenceReport> {
    let cfg = DecoderConfig::exact(iterations);
    run_paired_with(code, prior, syndromes, iterations, &cfg, &cfg, Initialization::Uniform)
}

/// [`run_paired`] with separate decoder configurations, e.g. to apply an
/// approximation to one side only. Early stopping is ignored.
pub fn run_paired_with(
    code: &CssCode,
    prior: &PauliPrior,
    syndromes: &Syndromes,
    iterations: usize,
    joint_config: &DecoderConfig,
    four_config: &DecoderConfig,
    init: Initialization,
) -> Result<EquivalenceReport> {
    let mut joint = JointBpState::new(code, prior, syndromes, joint_config.clone())?;
    let mut four = FourStateState::new(code, prior, syndromes, four_config.clone())?;
    if let Initialization::FourStateFirst { seed } = init {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let vx: Vec<Msg4> = (0..code.hx().n_edges()).map(|_| random_message(&mut rng)).collect();
        let vz: Vec<Msg4> = (0..code.hz().n_edges()).map(|_| random_message(&mut rng)).collect();
        let marg = |v: &[Msg4], c: Component| -> Vec<Msg2> {
            v.iter()
                .map(|m| {
                    let mut r = [0.0; 2];
                    for a in Label::ALL {
                        r[c.relevant(a) as usize] += m[a.index()];
                    }
                    r
                })
                .collect()
        };
        joint.set_variable_messages(marg(&vx, Component::X), marg(&vz, Component::Z))?;
        four.set_variable_messages(vx, vz)?;
    }

    let mut per_iteration = vec![compare(0, &four, &joint)];
    for l in 1..=iterations {
        joint.iterate()?;
        four.iterate()?;
        per_iteration.push(compare(l, &four, &joint));
    }
    let max = |f: fn(&IterationDeviation) -> f64| per_iteration.iter().map(f).fold(0.0, f64::max);
    Ok(EquivalenceReport {
        iterations,
        max_belief_deviation: max(|d| d.belief),
        max_check_message_deviation: max(|d| d.check_message),
        max_variable_message_deviation: max(|d| d.variable_message),
        max_constancy_defect: max(|d| d.constancy_defect),
        hard_decisions_agree: per_iteration.iter().all(|d| d.decisions_agree),
        per_iteration,
    })
}

/// Aggregate of paired runs over sampled syndromes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EquivalenceSummary {
    pub instances: usize,
    pub iterations: usize,
    pub max_belief_deviation: f64,
    pub max_check_message_deviation: f64,
    pub max_variable_message_deviation: f64,
    pub max_constancy_defect: f64,
    pub hard_decisions_agree: bool,
}

impl EquivalenceSummary {
    pub fn from_reports(iterations: usize, reports: &[EquivalenceReport]) -> Self {
        let max = |f: fn(&EquivalenceReport) -> f64| reports.iter().map(f).fold(0.0, f64::max);
        EquivalenceSummary {
            instances: reports.len(),
            iterations,
            max_belief_deviation: max(|r| r.max_belief_deviation),
            max_check_message_deviation: max(|r| r.max_check_message_deviation),
            max_variable_message_deviation: max(|r| r.max_variable_message_deviation),
            max_constancy_defect: max(|r| r.max_constancy_defect),
            hard_decisions_agree: reports.iter().all(|r| r.hard_decisions_agree),
        }
    }
}

/// Syndromes of `count` errors sampled from `prior` with seeds
/// `base_seed, base_seed + 1, ...`.
pub fn sampled_syndromes(code: &CssCode, prior: &PauliPrior, count: usize, base_seed: u64) -> Result<Vec<Syndromes>> {
    (0..count as u64)
        .map(|k| code.syndrome(&sample_error(prior, base_seed.wrapping_add(k))))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::paper_code_24;
    use crate::decoders::CheckRule;

    #[test]
    fn constant_four_vector() {
        let (d, k) = check_message_identity(&[0.3, 0.3, 0.2, 0.2], &[0.6, 0.4], Component::X);
        assert!(d < 1e-15);
        assert_eq!(k, 0.0);
    }

    #[test]
    fn constancy_violation_detected() {
        let (_, k) = check_message_identity(&[0.4, 0.2, 0.2, 0.2], &[0.6, 0.4], Component::X);
        assert!(k > 0.1);
        // the same vector is constant in z for a Z-type edge only if paired entries agree
        let (_, k) = check_message_identity(&[0.3, 0.2, 0.3, 0.2], &[0.6, 0.4], Component::Z);
        assert_eq!(k, 0.0);
    }

    #[test]
    fn decision_correspondence_cases() {
        assert!(hard_decision_correspondence(&[0.25; 4], &[0.25; 4]));
        // b2 peaked at (x, z) = (0, 1) is ω
        assert!(hard_decision_correspondence(&[0.1, 0.1, 0.7, 0.1], &[0.1, 0.1, 0.7, 0.1]));
        // two-way tie between (1,0) and (1,1): labels 1 and ω²
        let b2 = [0.1, 0.4, 0.1, 0.4];
        let b4 = [0.1, 0.4, 0.1, 0.4];
        assert!(hard_decision_correspondence(&b4, &b2));
        assert!(!hard_decision_correspondence(&[0.1, 0.1, 0.1, 0.7], &b2));
    }

    #[test]
    fn paired_run_at_high_noise() {
        let code = paper_code_24();
        let prior = PauliPrior::depolarizing(24, 0.3).unwrap();
        for s in sampled_syndromes(&code, &prior, 3, 11).unwrap() {
            let r = run_paired(&code, &prior, &s, 10).unwrap();
            assert_eq!(r.per_iteration.len(), 11);
            assert!(r.max_belief_deviation <= 1e-10, "{r:?}");
            assert!(r.max_check_message_deviation <= 1e-12);
            assert!(r.max_variable_message_deviation <= 1e-12);
            assert!(r.max_constancy_defect <= 1e-12);
            assert!(r.hard_decisions_agree);
        }
    }

    #[test]
    fn four_state_first_initialization() {
        let code = paper_code_24();
        let prior = PauliPrior::depolarizing(24, 0.1).unwrap();
        let s = &sampled_syndromes(&code, &prior, 1, 5).unwrap()[0];
        let cfg = DecoderConfig::exact(8);
        let r = run_paired_with(&code, &prior, s, 8, &cfg, &cfg, Initialization::FourStateFirst { seed: 3 }).unwrap();
        assert!(r.max_belief_deviation <= 1e-10);
        assert!(r.max_variable_message_deviation <= 1e-12);
    }

    #[test]
    fn one_sided_min_sum_is_detected() {
        let code = paper_code_24();
        let prior = PauliPrior::depolarizing(24, 0.1).unwrap();
        let s = &sampled_syndromes(&code, &prior, 1, 2).unwrap()[0];
        let exact = DecoderConfig::exact(10);
        let ms = DecoderConfig {
            check_rule: CheckRule::MinSum,
            ..exact.clone()
        };
        let r = run_paired_with(&code, &prior, s, 10, &ms, &exact, Initialization::Uniform).unwrap();
        assert!(r.max_belief_deviation > 1e-3);
    }
}
