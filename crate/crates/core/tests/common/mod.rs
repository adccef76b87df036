#![allow(dead_code)]

use cssbp_core::{CssCode, PauliError, PauliPrior, Syndromes};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random table with every entry at least `floor`.
pub fn random_table(rng: &mut ChaCha8Rng, floor: f64) -> [f64; 4] {
    let v = [0; 4].map(|_| floor + rng.random::<f64>());
    let s: f64 = v.iter().sum();
    v.map(|x| x / s)
}

pub fn random_prior(rng: &mut ChaCha8Rng, n: usize) -> PauliPrior {
    PauliPrior::new((0..n).map(|_| random_table(rng, 0.01)).collect()).unwrap()
}

/// Random prior where each entry is zeroed with probability 1/4, keeping the
/// identity entry positive.
pub fn random_prior_with_zeros(rng: &mut ChaCha8Rng, n: usize) -> PauliPrior {
    let tables = (0..n)
        .map(|_| {
            let mut t = random_table(rng, 0.01);
            for k in 1..4 {
                if rng.random_bool(0.25) {
                    t[k] = 0.0;
                }
            }
            let s: f64 = t.iter().sum();
            t.map(|x| x / s)
        })
        .collect();
    PauliPrior::new(tables).unwrap()
}

pub fn random_bits(rng: &mut ChaCha8Rng, len: usize) -> Vec<u8> {
    (0..len).map(|_| rng.random_range(0..2u8)).collect()
}

/// Syndromes of a uniformly random error, so always reachable.
pub fn random_syndromes(rng: &mut ChaCha8Rng, code: &CssCode) -> Syndromes {
    let e = PauliError {
        x: random_bits(rng, code.n()),
        z: random_bits(rng, code.n()),
    };
    code.syndrome(&e).unwrap()
}

/// Random orthogonal CSS pair on `n` qubits: HX rows are random nonempty
/// supports, HZ rows are drawn from the vectors orthogonal to all of them.
pub fn random_css_code(rng: &mut ChaCha8Rng, n: usize, mx: usize, mz: usize) -> CssCode {
    loop {
        let hx: Vec<Vec<usize>> = (0..mx).map(|_| random_support(rng, n)).collect();
        let orth: Vec<u32> = (1u32..1 << n)
            .filter(|v| hx.iter().all(|r| r.iter().filter(|&&j| v >> j & 1 == 1).count() % 2 == 0))
            .collect();
        if orth.is_empty() {
            continue;
        }
        let hz: Vec<Vec<usize>> = (0..mz)
            .map(|_| {
                let v = orth[rng.random_range(0..orth.len())];
                (0..n).filter(|&j| v >> j & 1 == 1).collect()
            })
            .collect();
        let code = CssCode::new(n, hx, hz).unwrap();
        assert!(code.validate().orthogonal);
        return code;
    }
}

fn random_support(rng: &mut ChaCha8Rng, n: usize) -> Vec<usize> {
    loop {
        let s: Vec<usize> = (0..n).filter(|_| rng.random_bool(0.5)).collect();
        if !s.is_empty() {
            return s;
        }
    }
}

pub fn sup_norm(a: &[[f64; 4]], b: &[[f64; 4]]) -> f64 {
    a.iter()
        .zip(b)
        .flat_map(|(p, q)| p.iter().zip(q).map(|(u, v)| (u - v).abs()))
        .fold(0.0, f64::max)
}
