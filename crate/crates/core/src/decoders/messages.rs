//! Message arithmetic shared by the decoders.
//!
//! Probability-domain messages are stored normalized to sum 1. Products over
//! "all other edges" use prefix/suffix passes so that exact zeros never force
//! a division.

use super::CheckRule;

pub type Msg2 = [f64; 2];
pub type Msg4 = [f64; 4];

pub const UNIFORM2: Msg2 = [0.5, 0.5];
pub const UNIFORM4: Msg4 = [0.25; 4];

/// Scales `v` to sum 1. `None` if the mass is zero or not finite.
#[inline]
pub fn normalize<const N: usize>(mut v: [f64; N]) -> Option<[f64; N]> {
    let s: f64 = v.iter().sum();
    if !(s > 0.0 && s.is_finite()) {
        return None;
    }
    for x in &mut v {
        *x /= s;
    }
    Some(v)
}

/// Entrywise product, rescaled to sum 1 when the product is nonzero.
#[inline]
pub fn mul<const N: usize>(a: &[f64; N], b: &[f64; N]) -> [f64; N] {
    let mut v = [0.0; N];
    for k in 0..N {
        v[k] = a[k] * b[k];
    }
    normalize(v).unwrap_or(v)
}

/// Floors every entry at `eps` and renormalizes. No-op for `eps == 0`.
#[inline]
pub fn floor_at<const N: usize>(v: [f64; N], eps: f64) -> [f64; N] {
    if eps <= 0.0 {
        return v;
    }
    let mut w = v;
    for x in &mut w {
        *x = x.max(eps);
    }
    normalize(w).unwrap_or(v)
}

/// Geometric interpolation `old^d · new^(1-d)`, renormalized.
#[inline]
pub fn damp<const N: usize>(old: &[f64; N], new: [f64; N], d: f64) -> [f64; N] {
    if d <= 0.0 {
        return new;
    }
    let mut v = [0.0; N];
    for k in 0..N {
        v[k] = old[k].powf(d) * new[k].powf(1.0 - d);
    }
    normalize(v).unwrap_or(new)
}

/// For each position `k`, writes the product of all `items` except the
/// `k`-th into `out[k]`, starting from `seed`.
pub fn products_excluding<const N: usize>(seed: &[f64; N], items: &[[f64; N]], out: &mut Vec<[f64; N]>) {
    out.clear();
    let mut acc = *seed;
    for it in items {
        out.push(acc);
        acc = mul(&acc, it);
    }
    let mut acc = [1.0; N];
    for (k, it) in items.iter().enumerate().rev() {
        out[k] = mul(&out[k], &acc);
        acc = mul(&acc, it);
    }
}

/// Converts a binary message to its LLR `ln(m0/m1)`, possibly infinite.
#[inline]
pub fn msg_to_llr(m: &Msg2) -> f64 {
    m[0].ln() - m[1].ln()
}

/// Normalized binary message with LLR `l`.
#[inline]
pub fn llr_to_msg(l: f64) -> Msg2 {
    if l >= 0.0 {
        let e = (-l).exp();
        [1.0 / (1.0 + e), e / (1.0 + e)]
    } else {
        let e = l.exp();
        [e / (1.0 + e), 1.0 / (1.0 + e)]
    }
}

/// Probability-domain parity check update. `out[k](u)` is proportional to the
/// probability that the other incoming bits have parity `syndrome ⊕ u`.
pub fn parity_check(incoming: &[Msg2], syndrome: u8, rule: CheckRule, scale: f64, out: &mut Vec<Msg2>) {
    out.clear();
    match rule {
        CheckRule::Exact => {
            // P(even) - P(odd) of a sum of independent bits is the product of
            // the per-bit differences.
            let d = incoming.len();
            let mut suffix = vec![1.0; d + 1];
            for k in (0..d).rev() {
                suffix[k] = suffix[k + 1] * (incoming[k][0] - incoming[k][1]);
            }
            let mut prefix = 1.0;
            for k in 0..d {
                let diff = prefix * suffix[k + 1];
                let even = 0.5 * (1.0 + diff);
                let odd = 0.5 * (1.0 - diff);
                out.push(if syndrome & 1 == 0 { [even, odd] } else { [odd, even] });
                prefix *= incoming[k][0] - incoming[k][1];
            }
        }
        CheckRule::MinSum => {
            let llrs: Vec<f64> = incoming.iter().map(msg_to_llr).collect();
            let mut tmp = Vec::with_capacity(llrs.len());
            min_sum(&llrs, syndrome, scale, &mut tmp);
            out.extend(tmp.into_iter().map(llr_to_msg));
        }
    }
}

/// Scaled min-sum over LLRs, with the syndrome sign applied.
pub fn min_sum(incoming: &[f64], syndrome: u8, scale: f64, out: &mut Vec<f64>) {
    out.clear();
    let mut min1 = f64::INFINITY;
    let mut min2 = f64::INFINITY;
    let mut argmin = usize::MAX;
    let mut negatives = 0usize;
    for (k, &l) in incoming.iter().enumerate() {
        let a = l.abs();
        if l < 0.0 {
            negatives += 1;
        }
        if a < min1 {
            min2 = min1;
            min1 = a;
            argmin = k;
        } else if a < min2 {
            min2 = a;
        }
    }
    for (k, &l) in incoming.iter().enumerate() {
        let mag = if k == argmin { min2 } else { min1 };
        let others_negative = negatives - usize::from(l < 0.0);
        let flip = (others_negative + syndrome as usize) % 2 == 1;
        let v = scale * mag;
        out.push(if flip { -v } else { v });
    }
}

/// Exact LLR check update `(-1)^s · 2 atanh(Π tanh(L/2))`, clamped to
/// `±clamp`.
pub fn boxplus(incoming: &[f64], syndrome: u8, clamp: f64, out: &mut Vec<f64>) {
    out.clear();
    let t: Vec<f64> = incoming.iter().map(|l| (0.5 * l).tanh()).collect();
    let d = t.len();
    let mut suffix = vec![1.0; d + 1];
    for k in (0..d).rev() {
        suffix[k] = suffix[k + 1] * t[k];
    }
    let sign = if syndrome & 1 == 0 { 1.0 } else { -1.0 };
    let mut prefix = 1.0;
    for k in 0..d {
        let p = prefix * suffix[k + 1];
        let l = 2.0 * p.atanh();
        out.push(sign * l.clamp(-clamp, clamp));
        prefix *= t[k];
    }
}

/// Index of the first entry, in storage order, within `tol` of the maximum.
pub fn argmax_first(v: &[f64], tol: f64) -> usize {
    let max = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    v.iter().position(|&x| x >= max - tol).unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn boxplus_two_inputs() {
        let mut out = Vec::new();
        // the message to the third edge combines the first two
        boxplus(&[2.0, 2.0, 0.7], 0, 30.0, &mut out);
        let expected = 2.0 * (1.0f64.tanh() * 1.0f64.tanh()).atanh();
        assert!((expected - 1.325_002_7).abs() < 1e-6, "{expected}");
        assert!((out[2] - expected).abs() < 1e-15);
        boxplus(&[2.0, 2.0, 0.7], 1, 30.0, &mut out);
        assert!((out[2] + expected).abs() < 1e-15);
    }

    #[test]
    fn boxplus_zero_annihilates() {
        let mut out = Vec::new();
        boxplus(&[0.0, 3.0, -5.0], 0, 30.0, &mut out);
        assert_eq!(out[1], 0.0);
        assert_eq!(out[2], 0.0);
        assert!(out[0] != 0.0);
    }

    #[test]
    fn boxplus_saturates_at_clamp() {
        let mut out = Vec::new();
        boxplus(&[80.0, 80.0], 0, 30.0, &mut out);
        assert_eq!(out, vec![30.0, 30.0]);
    }

    #[test]
    fn exact_parity_matches_llr_form() {
        let msgs = [[0.8, 0.2], [0.3, 0.7], [0.55, 0.45], [0.9, 0.1]];
        let llrs: Vec<f64> = msgs.iter().map(msg_to_llr).collect();
        for s in 0..2 {
            let mut p = Vec::new();
            let mut l = Vec::new();
            parity_check(&msgs, s, CheckRule::Exact, 1.0, &mut p);
            boxplus(&llrs, s, 30.0, &mut l);
            for (a, b) in p.iter().zip(&l) {
                assert!((msg_to_llr(a) - b).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn exact_parity_matches_enumeration() {
        let msgs = [[0.8, 0.2], [0.3, 0.7], [0.55, 0.45]];
        let mut out = Vec::new();
        parity_check(&msgs, 1, CheckRule::Exact, 1.0, &mut out);
        // message to edge 0: sum over bits of edges 1, 2 with b1 ^ b2 = 1 ^ u
        for u in 0..2u8 {
            let mut w = 0.0;
            for b1 in 0..2u8 {
                for b2 in 0..2u8 {
                    if b1 ^ b2 == 1 ^ u {
                        w += msgs[1][b1 as usize] * msgs[2][b2 as usize];
                    }
                }
            }
            assert!((out[0][u as usize] - w).abs() < 1e-15);
        }
    }

    #[test]
    fn min_sum_signs_and_magnitudes() {
        let mut out = Vec::new();
        min_sum(&[1.0, -2.0, 3.0], 0, 0.5, &mut out);
        assert_eq!(out, vec![-1.0, 0.5, -0.5]);
        min_sum(&[1.0, -2.0, 3.0], 1, 1.0, &mut out);
        assert_eq!(out, vec![2.0, -1.0, 1.0]);
    }

    #[test]
    fn excluding_products_handle_zeros() {
        let items = [[0.0, 1.0], [0.5, 0.5], [0.2, 0.8]];
        let mut out = Vec::new();
        products_excluding(&[0.5, 0.5], &items, &mut out);
        assert_eq!(out[0], [0.2, 0.8]);
        assert_eq!(out[1][0], 0.0);
        assert_eq!(out[2][0], 0.0);
    }

    #[test]
    fn argmax_ties_go_first() {
        assert_eq!(argmax_first(&[0.25; 4], 0.0), 0);
        assert_eq!(argmax_first(&[0.1, 0.4, 0.4, 0.1], 0.0), 1);
        assert_eq!(argmax_first(&[0.1, 0.4, 0.4 + 1e-15, 0.1], 1e-12), 1);
        assert_eq!(argmax_first(&[0.1, 0.4, 0.4 + 1e-15, 0.1], 0.0), 2);
    }

    #[test]
    fn damping_is_convex_in_llr() {
        let old = llr_to_msg(2.0);
        let new = llr_to_msg(-1.0);
        let d = damp(&old, new, 0.25);
        assert!((msg_to_llr(&d) - (0.25 * 2.0 + 0.75 * -1.0)).abs() < 1e-12);
    }
}
