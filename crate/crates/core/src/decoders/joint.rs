use super::messages::{self, damp, floor_at, normalize, products_excluding, Msg2, UNIFORM2};
use super::{check_dims, BeliefPropagation, DecoderConfig};
use crate::channel::{joint_index, PauliPrior};
use crate::code::{CssCode, PauliError, Syndromes};
use crate::error::{Error, Result};

/// Joint BP in the probability domain.
///
/// X-type checks exchange messages about `z_j`, Z-type checks about `x_j`.
/// The only link between the two Tanner graphs is the local table Q_j, through
/// which every variable-to-check message is marginalized.
#[derive(Debug, Clone)]
pub struct JointBpState<'a> {
    code: &'a CssCode,
    prior: &'a PauliPrior,
    syndromes: Syndromes,
    config: DecoderConfig,
    iteration: usize,
    // indexed by HX edge
    z_to_xcheck: Vec<Msg2>,
    xcheck_to_z: Vec<Msg2>,
    // indexed by HZ edge
    x_to_zcheck: Vec<Msg2>,
    zcheck_to_x: Vec<Msg2>,
}

impl<'a> JointBpState<'a> {
    pub fn new(
        code: &'a CssCode,
        prior: &'a PauliPrior,
        syndromes: &Syndromes,
        config: DecoderConfig,
    ) -> Result<Self> {
        check_dims(code, prior, syndromes)?;
        config.validate()?;
        let mut state = JointBpState {
            code,
            prior,
            syndromes: syndromes.clone(),
            config,
            iteration: 0,
            z_to_xcheck: vec![UNIFORM2; code.hx().n_edges()],
            xcheck_to_z: vec![UNIFORM2; code.hx().n_edges()],
            x_to_zcheck: vec![UNIFORM2; code.hz().n_edges()],
            zcheck_to_x: vec![UNIFORM2; code.hz().n_edges()],
        };
        state.update_variables()?;
        Ok(state)
    }

    pub fn iteration(&self) -> usize {
        self.iteration
    }

    pub fn z_to_xcheck(&self) -> &[Msg2] {
        &self.z_to_xcheck
    }

    pub fn xcheck_to_z(&self) -> &[Msg2] {
        &self.xcheck_to_z
    }

    pub fn x_to_zcheck(&self) -> &[Msg2] {
        &self.x_to_zcheck
    }

    pub fn zcheck_to_x(&self) -> &[Msg2] {
        &self.zcheck_to_x
    }

    /// Replaces the variable-to-check messages, e.g. with the binary marginals
    /// of a four-state initialization. Messages are renormalized.
    pub fn set_variable_messages(&mut self, z_to_xcheck: Vec<Msg2>, x_to_zcheck: Vec<Msg2>) -> Result<()> {
        if z_to_xcheck.len() != self.z_to_xcheck.len() || x_to_zcheck.len() != self.x_to_zcheck.len() {
            return Err(Error::DimensionMismatch("variable message count".into()));
        }
        let norm = |v: Vec<Msg2>, graph: &'static str| -> Result<Vec<Msg2>> {
            v.into_iter()
                .enumerate()
                .map(|(e, m)| normalize(m).ok_or(Error::ZeroMessage { graph, edge: e, iteration: 0 }))
                .collect()
        };
        self.z_to_xcheck = norm(z_to_xcheck, "HX")?;
        self.x_to_zcheck = norm(x_to_zcheck, "HZ")?;
        Ok(())
    }

    fn update_checks(&mut self) {
        let rule = self.config.check_rule;
        let scale = self.config.minsum_scale;
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
                messages::parity_check(&incoming, sbits[i], rule, scale, &mut out);
                for (e, m) in edges.zip(out.iter()) {
                    let m = floor_at(*m, self.config.epsilon);
                    chk[e] = damp(&chk[e], m, self.config.damping);
                }
            }
        }
    }

    /// Products of all incoming check messages at qubit `j`, as
    /// (about z from X-checks, about x from Z-checks).
    fn incoming_products(&self, j: usize) -> (Msg2, Msg2) {
        let about_z = self.code.hx().col_edges(j).iter().fold([1.0, 1.0], |acc, &e| {
            messages::mul(&acc, &self.xcheck_to_z[e])
        });
        let about_x = self.code.hz().col_edges(j).iter().fold([1.0, 1.0], |acc, &e| {
            messages::mul(&acc, &self.zcheck_to_x[e])
        });
        (about_z, about_x)
    }

    fn update_variables(&mut self) -> Result<()> {
        let mut items = Vec::new();
        let mut excl = Vec::new();
        for j in 0..self.code.n() {
            let (about_z, about_x) = self.incoming_products(j);
            let q = self.prior.table(j);
            // Q_j marginalized against the other component's incoming product
            let mut through_q_z = [0.0; 2];
            let mut through_q_x = [0.0; 2];
            for u in 0..2u8 {
                for w in 0..2u8 {
                    through_q_z[u as usize] += q[joint_index(w, u)] * about_x[w as usize];
                    through_q_x[u as usize] += q[joint_index(u, w)] * about_z[w as usize];
                }
            }

            let xe = self.code.hx().col_edges(j);
            items.clear();
            items.extend(xe.iter().map(|&e| self.xcheck_to_z[e]));
            products_excluding(&through_q_z, &items, &mut excl);
            for (&e, m) in xe.iter().zip(&excl) {
                let m = normalize(*m).ok_or(Error::ZeroMessage {
                    graph: "HX",
                    edge: e,
                    iteration: self.iteration,
                })?;
                self.z_to_xcheck[e] = floor_at(m, self.config.epsilon);
            }

            let ze = self.code.hz().col_edges(j);
            items.clear();
            items.extend(ze.iter().map(|&e| self.zcheck_to_x[e]));
            products_excluding(&through_q_x, &items, &mut excl);
            for (&e, m) in ze.iter().zip(&excl) {
                let m = normalize(*m).ok_or(Error::ZeroMessage {
                    graph: "HZ",
                    edge: e,
                    iteration: self.iteration,
                })?;
                self.x_to_zcheck[e] = floor_at(m, self.config.epsilon);
            }
        }
        Ok(())
    }

    pub fn iterate(&mut self) -> Result<()> {
        self.update_checks();
        self.iteration += 1;
        self.update_variables()
    }

    /// b_j(x, z) ∝ Q_j(x, z) · Π X-check messages at z · Π Z-check messages at x.
    pub fn beliefs(&self) -> Vec<[f64; 4]> {
        (0..self.code.n())
            .map(|j| {
                let (about_z, about_x) = self.incoming_products(j);
                let q = self.prior.table(j);
                let mut b = [0.0; 4];
                for x in 0..2u8 {
                    for z in 0..2u8 {
                        let k = joint_index(x, z);
                        b[k] = q[k] * about_z[z as usize] * about_x[x as usize];
                    }
                }
                normalize(b).unwrap_or(b)
            })
            .collect()
    }

    /// Argmax of the incoming check-message products of each binary variable,
    /// without the local prior.
    pub fn componentwise_estimate(&self) -> PauliError {
        let mut e = PauliError::zeros(self.code.n());
        for j in 0..self.code.n() {
            let (about_z, about_x) = self.incoming_products(j);
            e.z[j] = messages::argmax_first(&about_z, super::TIE_TOLERANCE) as u8;
            e.x[j] = messages::argmax_first(&about_x, super::TIE_TOLERANCE) as u8;
        }
        e
    }
}

impl BeliefPropagation for JointBpState<'_> {
    fn iterate(&mut self) -> Result<()> {
        JointBpState::iterate(self)
    }

    fn iteration(&self) -> usize {
        self.iteration
    }

    fn joint_beliefs(&self) -> Vec<[f64; 4]> {
        self.beliefs()
    }

    fn componentwise_estimate(&self) -> Option<PauliError> {
        Some(JointBpState::componentwise_estimate(self))
    }
}
