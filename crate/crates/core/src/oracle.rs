//! Brute-force posterior evaluation for small codes.

use crate::channel::{joint_index, FourStatePrior, Label, PauliPrior};
use crate::code::{CssCode, PauliError, Syndromes};
use crate::decoders::messages::normalize;
use crate::error::{Error, Result};

/// Largest n accepted by [`exact_marginals`] unless a limit is given.
pub const DEFAULT_LIMIT: usize = 12;

/// Unnormalized posterior factor product.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct PosteriorWeight(pub f64);

impl PosteriorWeight {
    pub fn value(self) -> f64 {
        self.0
    }
}

/// Π_j Q_j(x_j, z_j) if `error` reproduces `syndromes`, else 0.
pub fn weight_p2(code: &CssCode, prior: &PauliPrior, error: &PauliError, syndromes: &Syndromes) -> Result<PosteriorWeight> {
    if prior.n() != code.n() {
        return Err(Error::DimensionMismatch(format!("prior n = {}, code n = {}", prior.n(), code.n())));
    }
    code.check_syndromes(syndromes)?;
    if code.syndrome(error)? != *syndromes {
        return Ok(PosteriorWeight(0.0));
    }
    let mut w = 1.0;
    for j in 0..code.n() {
        w *= prior.q(j, error.x[j], error.z[j]);
    }
    Ok(PosteriorWeight(w))
}

/// The same product over labels, with the syndrome constraints read through
/// x(α) and z(α).
pub fn weight_p4(
    code: &CssCode,
    prior: &FourStatePrior,
    labels: &[Label],
    syndromes: &Syndromes,
) -> Result<PosteriorWeight> {
    if prior.n() != code.n() || labels.len() != code.n() {
        return Err(Error::DimensionMismatch(format!(
            "{} labels and prior n = {} for code n = {}",
            labels.len(),
            prior.n(),
            code.n()
        )));
    }
    code.check_syndromes(syndromes)?;
    let xs: Vec<u8> = labels.iter().map(|a| a.x()).collect();
    let zs: Vec<u8> = labels.iter().map(|a| a.z()).collect();
    if code.hz().apply(&xs) != syndromes.sx || code.hx().apply(&zs) != syndromes.sz {
        return Ok(PosteriorWeight(0.0));
    }
    let mut w = 1.0;
    for (j, &a) in labels.iter().enumerate() {
        w *= prior.q(j, a);
    }
    Ok(PosteriorWeight(w))
}

/// Exact per-qubit posterior tables, indexed by [`joint_index`], by
/// enumerating all 4^n error patterns.
///
/// The enumeration walks a Gray code over the 2n bits, so each step flips a
/// single x_j or z_j and updates the syndrome mismatch count incrementally.
pub fn exact_marginals(
    code: &CssCode,
    prior: &PauliPrior,
    syndromes: &Syndromes,
    limit: usize,
) -> Result<Vec<[f64; 4]>> {
    let n = code.n();
    if n > limit {
        return Err(Error::OracleLimit { n, limit });
    }
    if prior.n() != n {
        return Err(Error::DimensionMismatch(format!("prior n = {}, code n = {n}", prior.n())));
    }
    code.check_syndromes(syndromes)?;

    let mut x = vec![0u8; n];
    let mut z = vec![0u8; n];
    // parities of HZ·x and HX·z for the current pattern
    let mut px = vec![0u8; code.mz()];
    let mut pz = vec![0u8; code.mx()];
    let mut mismatch = syndromes.sx.iter().chain(&syndromes.sz).filter(|&&s| s == 1).count();
    let mut marg = vec![[0.0; 4]; n];
    let mut total = 0.0;

    let mut visit = |x: &[u8], z: &[u8]| {
        let mut w = 1.0;
        for j in 0..n {
            w *= prior.q(j, x[j], z[j]);
        }
        if w > 0.0 {
            total += w;
            for j in 0..n {
                marg[j][joint_index(x[j], z[j])] += w;
            }
        }
    };

    if mismatch == 0 {
        visit(&x, &z);
    }
    let steps: u64 = 1u64 << (2 * n);
    for k in 1..steps {
        let bit = k.trailing_zeros() as usize;
        let (rows, parity, target) = if bit < n {
            x[bit] ^= 1;
            (code.hz().col(bit), &mut px, &syndromes.sx)
        } else {
            z[bit - n] ^= 1;
            (code.hx().col(bit - n), &mut pz, &syndromes.sz)
        };
        for &i in rows {
            parity[i] ^= 1;
            if parity[i] == target[i] {
                mismatch -= 1;
            } else {
                mismatch += 1;
            }
        }
        if mismatch == 0 {
            visit(&x, &z);
        }
    }

    if !(total > 0.0) {
        return Err(Error::ZeroPosteriorMass);
    }
    Ok(marg.into_iter().map(|m| normalize(m).unwrap_or(m)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::phi;
    use crate::code::{paper_code_24, tree_code_4};

    #[test]
    fn zero_error_weight() {
        let code = tree_code_4();
        let prior = PauliPrior::depolarizing(4, 0.3).unwrap();
        let w = weight_p2(&code, &prior, &PauliError::zeros(4), &Syndromes::zeros(&code)).unwrap();
        assert!((w.value() - 0.2401).abs() < 1e-15);
        let mut e = PauliError::zeros(4);
        e.z[2] = 1;
        assert_eq!(weight_p2(&code, &prior, &e, &Syndromes::zeros(&code)).unwrap().value(), 0.0);
        let s = code.syndrome(&e).unwrap();
        assert!(weight_p2(&code, &prior, &e, &s).unwrap().value() > 0.0);
    }

    #[test]
    fn p4_all_zero_labels() {
        let code = tree_code_4();
        let prior = PauliPrior::depolarizing(4, 0.3).unwrap().relabel();
        let w = weight_p4(&code, &prior, &[Label::Zero; 4], &Syndromes::zeros(&code)).unwrap();
        assert_eq!(w.value(), 0.7 * 0.7 * 0.7 * 0.7);
    }

    #[test]
    fn p4_matches_p2_pointwise() {
        let code = tree_code_4();
        let prior = PauliPrior::depolarizing(4, 0.2).unwrap();
        let fs = prior.relabel();
        let mut e = PauliError::zeros(4);
        e.x[0] = 1;
        e.z[2] = 1;
        e.z[0] = 1;
        let s = code.syndrome(&e).unwrap();
        let labels: Vec<Label> = (0..4).map(|j| phi(e.x[j], e.z[j])).collect();
        assert_eq!(
            weight_p4(&code, &fs, &labels, &s).unwrap(),
            weight_p2(&code, &prior, &e, &s).unwrap()
        );
    }

    #[test]
    fn refuses_large_codes() {
        let code = paper_code_24();
        let prior = PauliPrior::depolarizing(24, 0.1).unwrap();
        assert_eq!(
            exact_marginals(&code, &prior, &Syndromes::zeros(&code), DEFAULT_LIMIT),
            Err(Error::OracleLimit { n: 24, limit: 12 })
        );
    }

    #[test]
    fn single_check_symmetry() {
        let code = CssCode::new(2, vec![vec![0, 1]], vec![]).unwrap();
        let prior = PauliPrior::depolarizing(2, 0.1).unwrap();
        let s = Syndromes { sz: vec![1], sx: vec![] };
        let m = exact_marginals(&code, &prior, &s, DEFAULT_LIMIT).unwrap();
        let zm = |t: &[f64; 4]| [t[0] + t[1], t[2] + t[3]];
        assert!((zm(&m[0])[1] - 0.5).abs() < 1e-15);
        assert_eq!(m[0], m[1]);
    }

    #[test]
    fn noiseless_point_mass() {
        let code = tree_code_4();
        let prior = PauliPrior::depolarizing(4, 0.0).unwrap();
        let m = exact_marginals(&code, &prior, &Syndromes::zeros(&code), DEFAULT_LIMIT).unwrap();
        assert!(m.iter().all(|t| *t == [1.0, 0.0, 0.0, 0.0]));
        let s = Syndromes { sz: vec![1], sx: vec![0] };
        assert_eq!(exact_marginals(&code, &prior, &s, DEFAULT_LIMIT), Err(Error::ZeroPosteriorMass));
    }

    #[test]
    fn gray_walk_matches_direct_sum() {
        let code = CssCode::new(5, vec![vec![0, 1, 2, 3]], vec![vec![0, 1], vec![2, 3, 4]]).unwrap();
        let prior = PauliPrior::new(
            (0..5)
                .map(|j| {
                    let a = 0.02 * (j + 1) as f64;
                    [1.0 - 6.0 * a, a, 2.0 * a, 3.0 * a]
                })
                .collect(),
        )
        .unwrap();
        let s = Syndromes { sz: vec![1], sx: vec![1, 0] };
        let m = exact_marginals(&code, &prior, &s, DEFAULT_LIMIT).unwrap();
        let mut direct = vec![[0.0; 4]; 5];
        let mut total = 0.0;
        for bits in 0u32..1 << 10 {
            let e = PauliError {
                x: (0..5).map(|j| (bits >> j & 1) as u8).collect(),
                z: (0..5).map(|j| (bits >> (j + 5) & 1) as u8).collect(),
            };
            let w = weight_p2(&code, &prior, &e, &s).unwrap().value();
            total += w;
            for j in 0..5 {
                direct[j][joint_index(e.x[j], e.z[j])] += w;
            }
        }
        for j in 0..5 {
            for k in 0..4 {
                assert!((m[j][k] - direct[j][k] / total).abs() < 1e-14);
            }
        }
    }
}
