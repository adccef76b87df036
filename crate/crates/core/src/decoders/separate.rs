use super::messages::{self, damp, floor_at, normalize, products_excluding, Msg2, UNIFORM2};
use super::{check_dims, BeliefPropagation, DecoderConfig, TIE_TOLERANCE};
use crate::channel::{joint_index, PauliPrior};
use crate::code::{CssCode, PauliError, Syndromes, TannerGraph};
use crate::error::{Error, Result};

/// Sum-product for one binary error component on one Tanner graph.
#[derive(Debug, Clone)]
pub struct BinaryBpState<'a> {
    graph: &'a TannerGraph,
    label: &'static str,
    prior: Vec<Msg2>,
    syndrome: Vec<u8>,
    config: DecoderConfig,
    iteration: usize,
    var_to_check: Vec<Msg2>,
    check_to_var: Vec<Msg2>,
}

impl<'a> BinaryBpState<'a> {
    pub fn new(
        graph: &'a TannerGraph,
        label: &'static str,
        prior: Vec<Msg2>,
        syndrome: Vec<u8>,
        config: DecoderConfig,
    ) -> Result<Self> {
        if prior.len() != graph.n_cols() || syndrome.len() != graph.n_rows() {
            return Err(Error::DimensionMismatch(format!(
                "{label}: {} priors and {} syndrome bits for a {}x{} graph",
                prior.len(),
                syndrome.len(),
                graph.n_rows(),
                graph.n_cols()
            )));
        }
        config.validate()?;
        let mut state = BinaryBpState {
            graph,
            label,
            prior,
            syndrome,
            config,
            iteration: 0,
            var_to_check: vec![UNIFORM2; graph.n_edges()],
            check_to_var: vec![UNIFORM2; graph.n_edges()],
        };
        state.update_variables()?;
        Ok(state)
    }

    pub fn iteration(&self) -> usize {
        self.iteration
    }

    pub fn var_to_check(&self) -> &[Msg2] {
        &self.var_to_check
    }

    pub fn check_to_var(&self) -> &[Msg2] {
        &self.check_to_var
    }

    fn update_checks(&mut self) {
        let mut incoming = Vec::new();
        let mut out = Vec::new();
        for i in 0..self.graph.n_rows() {
            let edges = self.graph.row_edges(i);
            incoming.clear();
            incoming.extend_from_slice(&self.var_to_check[edges.clone()]);
            messages::parity_check(
                &incoming,
                self.syndrome[i],
                self.config.check_rule,
                self.config.minsum_scale,
                &mut out,
            );
            for (e, m) in edges.zip(out.iter()) {
                let m = floor_at(*m, self.config.epsilon);
                self.check_to_var[e] = damp(&self.check_to_var[e], m, self.config.damping);
            }
        }
    }

    fn update_variables(&mut self) -> Result<()> {
        let mut items = Vec::new();
        let mut excl = Vec::new();
        for j in 0..self.graph.n_cols() {
            let edges = self.graph.col_edges(j);
            items.clear();
            items.extend(edges.iter().map(|&e| self.check_to_var[e]));
            products_excluding(&self.prior[j], &items, &mut excl);
            for (&e, m) in edges.iter().zip(&excl) {
                let m = normalize(*m).ok_or(Error::ZeroMessage {
                    graph: self.label,
                    edge: e,
                    iteration: self.iteration,
                })?;
                self.var_to_check[e] = floor_at(m, self.config.epsilon);
            }
        }
        Ok(())
    }

    pub fn iterate(&mut self) -> Result<()> {
        self.update_checks();
        self.iteration += 1;
        self.update_variables()
    }

    pub fn beliefs(&self) -> Vec<Msg2> {
        (0..self.graph.n_cols())
            .map(|j| {
                let mut b = self.prior[j];
                for &e in self.graph.col_edges(j) {
                    b = messages::mul(&b, &self.check_to_var[e]);
                }
                normalize(b).unwrap_or(b)
            })
            .collect()
    }

    pub fn decision(&self) -> Vec<u8> {
        self.beliefs()
            .iter()
            .map(|b| messages::argmax_first(b, TIE_TOLERANCE) as u8)
            .collect()
    }

    pub fn satisfied(&self) -> bool {
        self.graph.apply(&self.decision()) == self.syndrome
    }
}

/// Separate BP: the X component on the Z-type checks and the Z component on
/// the X-type checks, each with its marginal prior and no coupling.
#[derive(Debug, Clone)]
pub struct SeparateBpState<'a> {
    pub x: BinaryBpState<'a>,
    pub z: BinaryBpState<'a>,
}

impl<'a> SeparateBpState<'a> {
    pub fn new(code: &'a CssCode, prior: &PauliPrior, syndromes: &Syndromes, config: DecoderConfig) -> Result<Self> {
        check_dims(code, prior, syndromes)?;
        let (qx, qz) = prior.marginals();
        Ok(SeparateBpState {
            x: BinaryBpState::new(code.hz(), "HZ", qx, syndromes.sx.clone(), config.clone())?,
            z: BinaryBpState::new(code.hx(), "HX", qz, syndromes.sz.clone(), config)?,
        })
    }

    pub fn iterate(&mut self) -> Result<()> {
        self.x.iterate()?;
        self.z.iterate()
    }

    /// Outer products of the two component beliefs.
    pub fn beliefs(&self) -> Vec<[f64; 4]> {
        self.x
            .beliefs()
            .iter()
            .zip(self.z.beliefs())
            .map(|(bx, bz)| {
                let mut t = [0.0; 4];
                for x in 0..2u8 {
                    for z in 0..2u8 {
                        t[joint_index(x, z)] = bx[x as usize] * bz[z as usize];
                    }
                }
                t
            })
            .collect()
    }
}

impl BeliefPropagation for SeparateBpState<'_> {
    fn iterate(&mut self) -> Result<()> {
        SeparateBpState::iterate(self)
    }

    fn iteration(&self) -> usize {
        self.x.iteration()
    }

    fn joint_beliefs(&self) -> Vec<[f64; 4]> {
        self.beliefs()
    }

    fn hard_decision(&self) -> PauliError {
        PauliError {
            x: self.x.decision(),
            z: self.z.decision(),
        }
    }

    fn componentwise_estimate(&self) -> Option<PauliError> {
        Some(self.hard_decision())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComponentResult {
    pub beliefs: Vec<Msg2>,
    pub decision: Vec<u8>,
    pub iterations: usize,
    pub converged: bool,
}

fn run_component(mut st: BinaryBpState<'_>, max_iterations: usize, early_stop: bool) -> Result<ComponentResult> {
    let mut converged = st.satisfied();
    for _ in 0..max_iterations {
        st.iterate()?;
        converged = st.satisfied();
        if converged && early_stop {
            break;
        }
    }
    Ok(ComponentResult {
        beliefs: st.beliefs(),
        decision: st.decision(),
        iterations: st.iteration(),
        converged,
    })
}

/// Runs the two component decoders independently, each with its own stopping
/// rule. Returns (X component, Z component).
pub fn separate_decode(
    code: &CssCode,
    prior: &PauliPrior,
    syndromes: &Syndromes,
    config: &DecoderConfig,
) -> Result<(ComponentResult, ComponentResult)> {
    let st = SeparateBpState::new(code, prior, syndromes, config.clone())?;
    Ok((
        run_component(st.x, config.max_iterations, config.early_stop)?,
        run_component(st.z, config.max_iterations, config.early_stop)?,
    ))
}
