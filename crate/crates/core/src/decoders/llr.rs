use super::messages::{self, argmax_first, llr_to_msg, normalize};
use super::{check_dims, BeliefPropagation, CheckRule, DecoderConfig, TIE_TOLERANCE};
use crate::channel::{joint_index, PauliPrior};
use crate::code::{CssCode, PauliError, Syndromes};
use crate::error::Result;

/// Joint BP with scalar LLR messages `L = ln(r(0)/r(1))`.
///
/// Every stored LLR is clamped to `±bound`, where the bound is the configured
/// `llr_clamp`, tightened to `ln((1-ε)/ε)` when an epsilon floor is set.
#[derive(Debug, Clone)]
pub struct LlrJointState<'a> {
    code: &'a CssCode,
    prior: &'a PauliPrior,
    log_prior: Vec<[f64; 4]>,
    syndromes: Syndromes,
    config: DecoderConfig,
    bound: f64,
    iteration: usize,
    // HX edges: messages about z
    z_to_xcheck: Vec<f64>,
    xcheck_to_z: Vec<f64>,
    // HZ edges: messages about x
    x_to_zcheck: Vec<f64>,
    zcheck_to_x: Vec<f64>,
    ax: Vec<f64>,
    az: Vec<f64>,
}

impl<'a> LlrJointState<'a> {
    pub fn new(code: &'a CssCode, prior: &'a PauliPrior, syndromes: &Syndromes, config: DecoderConfig) -> Result<Self> {
        check_dims(code, prior, syndromes)?;
        config.validate()?;
        let mut bound = config.llr_clamp;
        if config.epsilon > 0.0 {
            bound = bound.min(((1.0 - config.epsilon) / config.epsilon).ln());
        }
        let log_prior = prior.tables().iter().map(|q| q.map(f64::ln)).collect();
        let mut state = LlrJointState {
            code,
            prior,
            log_prior,
            syndromes: syndromes.clone(),
            config,
            bound,
            iteration: 0,
            z_to_xcheck: vec![0.0; code.hx().n_edges()],
            xcheck_to_z: vec![0.0; code.hx().n_edges()],
            x_to_zcheck: vec![0.0; code.hz().n_edges()],
            zcheck_to_x: vec![0.0; code.hz().n_edges()],
            ax: vec![0.0; code.n()],
            az: vec![0.0; code.n()],
        };
        state.update_variables();
        Ok(state)
    }

    pub fn iteration(&self) -> usize {
        self.iteration
    }

    pub fn z_to_xcheck(&self) -> &[f64] {
        &self.z_to_xcheck
    }

    pub fn xcheck_to_z(&self) -> &[f64] {
        &self.xcheck_to_z
    }

    pub fn x_to_zcheck(&self) -> &[f64] {
        &self.x_to_zcheck
    }

    pub fn zcheck_to_x(&self) -> &[f64] {
        &self.zcheck_to_x
    }

    fn clamp(&self, l: f64) -> f64 {
        if l.is_nan() {
            0.0
        } else {
            l.clamp(-self.bound, self.bound)
        }
    }

    fn update_checks(&mut self) {
        let bound = self.bound;
        let rule = self.config.check_rule;
        let scale = self.config.minsum_scale;
        let d = self.config.damping;
        let mut incoming = Vec::new();
        let mut out = Vec::new();
        for (graph, sbits, var, chk) in [
            (self.code.hx(), &self.syndromes.sz, &self.z_to_xcheck, &mut self.xcheck_to_z),
            (self.code.hz(), &self.syndromes.sx, &self.x_to_zcheck, &mut self.zcheck_to_x),
        ] {
            for i in 0..graph.n_rows() {
                let edges = graph.row_edges(i);
                incoming.clear();
                incoming.extend_from_slice(&var[edges.clone()]);
                match rule {
                    CheckRule::Exact => messages::boxplus(&incoming, sbits[i], bound, &mut out),
                    CheckRule::MinSum => messages::min_sum(&incoming, sbits[i], scale, &mut out),
                }
                for (e, &l) in edges.zip(out.iter()) {
                    let l = l.clamp(-bound, bound);
                    chk[e] = d * chk[e] + (1.0 - d) * l;
                }
            }
        }
    }

    fn update_variables(&mut self) {
        for j in 0..self.code.n() {
            let ax: f64 = self.code.hx().col_edges(j).iter().map(|&e| self.xcheck_to_z[e]).sum();
            let az: f64 = self.code.hz().col_edges(j).iter().map(|&e| self.zcheck_to_x[e]).sum();
            self.ax[j] = ax;
            self.az[j] = az;
            let q = self.prior.table(j);
            // ρ as normalized two-entry weights, pushed through Q_j
            let rho_x = llr_to_msg(ax);
            let rho_z = llr_to_msg(az);
            let mut eta_x = [0.0; 2];
            let mut eta_z = [0.0; 2];
            for u in 0..2u8 {
                for w in 0..2u8 {
                    eta_x[u as usize] += q[joint_index(w, u)] * rho_z[w as usize];
                    eta_z[u as usize] += q[joint_index(u, w)] * rho_x[w as usize];
                }
            }
            let lx = eta_x[0].ln() - eta_x[1].ln();
            let lz = eta_z[0].ln() - eta_z[1].ln();
            for &e in self.code.hx().col_edges(j) {
                self.z_to_xcheck[e] = self.clamp(ax - self.xcheck_to_z[e] + lx);
            }
            for &e in self.code.hz().col_edges(j) {
                self.x_to_zcheck[e] = self.clamp(az - self.zcheck_to_x[e] + lz);
            }
        }
    }

    pub fn iterate(&mut self) -> Result<()> {
        self.update_checks();
        self.iteration += 1;
        self.update_variables();
        Ok(())
    }

    /// Unnormalized log-beliefs B_j(x, z).
    pub fn log_beliefs(&self) -> Vec<[f64; 4]> {
        (0..self.code.n())
            .map(|j| {
                let mut b = [0.0; 4];
                for x in 0..2u8 {
                    for z in 0..2u8 {
                        let k = joint_index(x, z);
                        b[k] = self.log_prior[j][k]
                            + f64::from(1 - z) * self.ax[j]
                            + f64::from(1 - x) * self.az[j];
                    }
                }
                b
            })
            .collect()
    }

    pub fn beliefs(&self) -> Vec<[f64; 4]> {
        self.log_beliefs()
            .into_iter()
            .map(|b| {
                let max = b.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                let v = b.map(|l| (l - max).exp());
                normalize(v).unwrap_or(v)
            })
            .collect()
    }

    pub fn componentwise_estimate(&self) -> PauliError {
        let mut e = PauliError::zeros(self.code.n());
        for j in 0..self.code.n() {
            e.z[j] = argmax_first(&llr_to_msg(self.ax[j]), TIE_TOLERANCE) as u8;
            e.x[j] = argmax_first(&llr_to_msg(self.az[j]), TIE_TOLERANCE) as u8;
        }
        e
    }
}

impl BeliefPropagation for LlrJointState<'_> {
    fn iterate(&mut self) -> Result<()> {
        LlrJointState::iterate(self)
    }

    fn iteration(&self) -> usize {
        self.iteration
    }

    fn joint_beliefs(&self) -> Vec<[f64; 4]> {
        self.beliefs()
    }

    fn componentwise_estimate(&self) -> Option<PauliError> {
        Some(LlrJointState::componentwise_estimate(self))
    }
}
