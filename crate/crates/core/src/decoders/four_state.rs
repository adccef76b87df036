use super::messages::{damp, floor_at, normalize, products_excluding, Msg4, UNIFORM4};
use super::{check_dims, hard_decision_four_state, label_to_joint, BeliefPropagation, CheckRule, DecoderConfig};
use crate::channel::{FourStatePrior, Label, PauliPrior};
use crate::code::{CssCode, PauliError, Syndromes, TannerGraph};
use crate::error::{Error, Result};

/// Four-state BP: sum-product with one label variable per qubit.
///
/// An X-type check reads only the ω-coefficient `z(α)` of each neighboring
/// label and a Z-type check only the 1-coefficient `x(α)`, but messages on
/// both kinds of edge are full functions of the label.
#[derive(Debug, Clone)]
pub struct FourStateState<'a> {
    code: &'a CssCode,
    prior: FourStatePrior,
    syndromes: Syndromes,
    config: DecoderConfig,
    iteration: usize,
    var_to_xcheck: Vec<Msg4>,
    xcheck_to_var: Vec<Msg4>,
    var_to_zcheck: Vec<Msg4>,
    zcheck_to_var: Vec<Msg4>,
}

/// Sum-product message from a parity factor over `selector(α)` to each
/// neighbor. Runs a forward/backward pass over the partial parity of the
/// neighbors, summing over all four labels of each.
fn label_parity_check(incoming: &[Msg4], syndrome: u8, selector: fn(Label) -> u8, out: &mut Vec<Msg4>) {
    let d = incoming.len();
    // distribution of the parity of the first k (forward) / last d-k (backward) neighbors
    let mut forward = Vec::with_capacity(d + 1);
    let mut backward = vec![[0.0; 2]; d + 1];
    let step = |acc: &[f64; 2], m: &Msg4| -> [f64; 2] {
        let mut next = [0.0; 2];
        for p in 0..2 {
            for a in Label::ALL {
                next[p ^ selector(a) as usize] += acc[p] * m[a.index()];
            }
        }
        normalize(next).unwrap_or(next)
    };
    forward.push([1.0, 0.0]);
    for m in incoming {
        let next = step(forward.last().unwrap(), m);
        forward.push(next);
    }
    backward[d] = [1.0, 0.0];
    for k in (0..d).rev() {
        backward[k] = step(&backward[k + 1], &incoming[k]);
    }
    out.clear();
    for k in 0..d {
        let mut m = [0.0; 4];
        for a in Label::ALL {
            let need = (syndrome ^ selector(a)) as usize & 1;
            // parity(before) ⊕ parity(after) must equal syndrome ⊕ selector(α)
            m[a.index()] = forward[k][0] * backward[k + 1][need] + forward[k][1] * backward[k + 1][need ^ 1];
        }
        out.push(normalize(m).unwrap_or(m));
    }
}

impl<'a> FourStateState<'a> {
    /// Only the exact check rule is supported: a min-sum variant would have to
    /// be transported through the relabeling to mean the same thing.
    pub fn new(code: &'a CssCode, prior: &PauliPrior, syndromes: &Syndromes, config: DecoderConfig) -> Result<Self> {
        check_dims(code, prior, syndromes)?;
        config.validate()?;
        if config.check_rule != CheckRule::Exact {
            return Err(Error::InvalidConfig(
                "four-state decoder supports only the exact check rule".into(),
            ));
        }
        let mut state = FourStateState {
            code,
            prior: prior.relabel(),
            syndromes: syndromes.clone(),
            config,
            iteration: 0,
            var_to_xcheck: vec![UNIFORM4; code.hx().n_edges()],
            xcheck_to_var: vec![UNIFORM4; code.hx().n_edges()],
            var_to_zcheck: vec![UNIFORM4; code.hz().n_edges()],
            zcheck_to_var: vec![UNIFORM4; code.hz().n_edges()],
        };
        state.update_variables()?;
        Ok(state)
    }

    pub fn iteration(&self) -> usize {
        self.iteration
    }

    pub fn prior(&self) -> &FourStatePrior {
        &self.prior
    }

    pub fn var_to_xcheck(&self) -> &[Msg4] {
        &self.var_to_xcheck
    }

    pub fn xcheck_to_var(&self) -> &[Msg4] {
        &self.xcheck_to_var
    }

    pub fn var_to_zcheck(&self) -> &[Msg4] {
        &self.var_to_zcheck
    }

    pub fn zcheck_to_var(&self) -> &[Msg4] {
        &self.zcheck_to_var
    }

    /// Replaces the variable-to-check messages (renormalized).
    pub fn set_variable_messages(&mut self, var_to_xcheck: Vec<Msg4>, var_to_zcheck: Vec<Msg4>) -> Result<()> {
        if var_to_xcheck.len() != self.var_to_xcheck.len() || var_to_zcheck.len() != self.var_to_zcheck.len() {
            return Err(Error::DimensionMismatch("variable message count".into()));
        }
        let norm = |v: Vec<Msg4>, graph: &'static str| -> Result<Vec<Msg4>> {
            v.into_iter()
                .enumerate()
                .map(|(e, m)| normalize(m).ok_or(Error::ZeroMessage { graph, edge: e, iteration: 0 }))
                .collect()
        };
        self.var_to_xcheck = norm(var_to_xcheck, "HX")?;
        self.var_to_zcheck = norm(var_to_zcheck, "HZ")?;
        Ok(())
    }

    fn update_checks(&mut self) {
        let mut incoming = Vec::new();
        let mut out = Vec::new();
        let jobs: [(&TannerGraph, &[u8], fn(Label) -> u8, &[Msg4], &mut Vec<Msg4>); 2] = [
            (self.code.hx(), &self.syndromes.sz, Label::z, &self.var_to_xcheck, &mut self.xcheck_to_var),
            (self.code.hz(), &self.syndromes.sx, Label::x, &self.var_to_zcheck, &mut self.zcheck_to_var),
        ];
        for (graph, sbits, selector, var, chk) in jobs {
            for i in 0..graph.n_rows() {
                let edges = graph.row_edges(i);
                incoming.clear();
                incoming.extend_from_slice(&var[edges.clone()]);
                label_parity_check(&incoming, sbits[i], selector, &mut out);
                for (e, m) in edges.zip(out.iter()) {
                    let m = floor_at(*m, self.config.epsilon);
                    chk[e] = damp(&chk[e], m, self.config.damping);
                }
            }
        }
    }

    fn update_variables(&mut self) -> Result<()> {
        let mut items = Vec::new();
        let mut excl = Vec::new();
        for j in 0..self.code.n() {
            let xe = self.code.hx().col_edges(j);
            let ze = self.code.hz().col_edges(j);
            items.clear();
            items.extend(xe.iter().map(|&e| self.xcheck_to_var[e]));
            items.extend(ze.iter().map(|&e| self.zcheck_to_var[e]));
            products_excluding(self.prior.table(j), &items, &mut excl);
            let targets = xe
                .iter()
                .map(|&e| ("HX", e))
                .chain(ze.iter().map(|&e| ("HZ", e)));
            for ((graph, e), m) in targets.zip(&excl) {
                let m = normalize(*m).ok_or(Error::ZeroMessage {
                    graph,
                    edge: e,
                    iteration: self.iteration,
                })?;
                let m = floor_at(m, self.config.epsilon);
                if graph == "HX" {
                    self.var_to_xcheck[e] = m;
                } else {
                    self.var_to_zcheck[e] = m;
                }
            }
        }
        Ok(())
    }

    pub fn iterate(&mut self) -> Result<()> {
        self.update_checks();
        self.iteration += 1;
        self.update_variables()
    }

    /// Label beliefs b_j(α) ∝ Q^φ_j(α) · Π all incoming check messages.
    pub fn beliefs(&self) -> Vec<Msg4> {
        (0..self.code.n())
            .map(|j| {
                let mut b = *self.prior.table(j);
                for &e in self.code.hx().col_edges(j) {
                    b = super::messages::mul(&b, &self.xcheck_to_var[e]);
                }
                for &e in self.code.hz().col_edges(j) {
                    b = super::messages::mul(&b, &self.zcheck_to_var[e]);
                }
                normalize(b).unwrap_or(b)
            })
            .collect()
    }

    pub fn label_decision(&self) -> Vec<Label> {
        hard_decision_four_state(&self.beliefs())
    }
}

impl BeliefPropagation for FourStateState<'_> {
    fn iterate(&mut self) -> Result<()> {
        FourStateState::iterate(self)
    }

    fn iteration(&self) -> usize {
        self.iteration
    }

    fn joint_beliefs(&self) -> Vec<[f64; 4]> {
        label_to_joint(&self.beliefs())
    }

    fn hard_decision(&self) -> PauliError {
        let labels = self.label_decision();
        PauliError {
            x: labels.iter().map(|a| a.x()).collect(),
            z: labels.iter().map(|a| a.z()).collect(),
        }
    }
}
