//! Fixtures shared by the benchmarks.

use cssbp_core::{paper_code_24, sample_error, CssCode, PauliPrior, Syndromes};

/// The 24-qubit code, a depolarizing prior at rate `p`, and `count` sampled
/// syndromes.
pub fn fixture(p: f64, count: usize, seed: u64) -> (CssCode, PauliPrior, Vec<Syndromes>) {
    let code = paper_code_24();
    let prior = PauliPrior::depolarizing(code.n(), p).expect("valid rate");
    let syndromes = (0..count as u64)
        .map(|k| {
            let e = sample_error(&prior, seed.wrapping_add(k));
            code.syndrome(&e).expect("matching length")
        })
        .collect();
    (code, prior, syndromes)
}
