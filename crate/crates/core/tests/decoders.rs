mod common;

use common::{random_prior, random_syndromes, rng, sup_norm};
use cssbp_core::decoders::{
    decode, CheckRule, DecoderConfig, DecoderKind, JointBpState, LlrJointState, SeparateBpState,
};
use cssbp_core::equivalence::sampled_syndromes;
use cssbp_core::oracle::{exact_marginals, DEFAULT_LIMIT};
use cssbp_core::{paper_code_24, tree_code_4, PauliError, PauliPrior, Syndromes};

#[test]
fn tree_code_beliefs_are_exact() {
    let code = tree_code_4();
    let prior = PauliPrior::depolarizing(4, 0.3).unwrap();
    let s = Syndromes::zeros(&code);
    let mut st = JointBpState::new(&code, &prior, &s, DecoderConfig::exact(2)).unwrap();
    st.iterate().unwrap();
    st.iterate().unwrap();
    let exact = exact_marginals(&code, &prior, &s, DEFAULT_LIMIT).unwrap();
    assert!(sup_norm(&st.beliefs(), &exact) <= 1e-10);

    let mut r = rng(21);
    for _ in 0..10 {
        let prior = random_prior(&mut r, 4);
        let s = random_syndromes(&mut r, &code);
        let exact = exact_marginals(&code, &prior, &s, DEFAULT_LIMIT).unwrap();
        let mut st = JointBpState::new(&code, &prior, &s, DecoderConfig::exact(4)).unwrap();
        for _ in 0..4 {
            st.iterate().unwrap();
        }
        assert!(sup_norm(&st.beliefs(), &exact) <= 1e-10);
    }
}

#[test]
fn product_prior_collapses_to_separate() {
    let code = paper_code_24();
    let mut r = rng(5);
    let marg = |r: &mut rand_chacha::ChaCha8Rng| -> Vec<[f64; 2]> {
        (0..24)
            .map(|_| {
                let p = 0.02 + 0.2 * rand::Rng::random::<f64>(r);
                [1.0 - p, p]
            })
            .collect()
    };
    let prior = PauliPrior::product(&marg(&mut r), &marg(&mut r)).unwrap();
    for s in sampled_syndromes(&code, &prior, 5, 77).unwrap() {
        let mut joint = JointBpState::new(&code, &prior, &s, DecoderConfig::exact(20)).unwrap();
        let mut sep = SeparateBpState::new(&code, &prior, &s, DecoderConfig::exact(20)).unwrap();
        for _ in 0..=20 {
            let pairs = [
                (joint.z_to_xcheck(), sep.z.var_to_check()),
                (joint.xcheck_to_z(), sep.z.check_to_var()),
                (joint.x_to_zcheck(), sep.x.var_to_check()),
                (joint.zcheck_to_x(), sep.x.check_to_var()),
            ];
            for (a, b) in pairs {
                for (p, q) in a.iter().zip(b) {
                    assert!((p[0] - q[0]).abs() <= 1e-12 && (p[1] - q[1]).abs() <= 1e-12);
                }
            }
            joint.iterate().unwrap();
            sep.iterate().unwrap();
        }
    }
}

#[test]
fn probability_and_llr_domains_agree() {
    let code = paper_code_24();
    let mut r = rng(8);
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let prior = random_prior(&mut r, 24);
        let s = random_syndromes(&mut r, &code);
        let mut a = JointBpState::new(&code, &prior, &s, DecoderConfig::exact(20)).unwrap();
        let mut b = LlrJointState::new(&code, &prior, &s, DecoderConfig::exact(20)).unwrap();
        for _ in 0..20 {
            a.iterate().unwrap();
            b.iterate().unwrap();
            worst = worst.max(sup_norm(&a.beliefs(), &b.beliefs()));
        }
    }
    assert!(worst <= 1e-9, "{worst}");
}

#[test]
fn flipping_a_syndrome_bit_swaps_check_messages() {
    let code = paper_code_24();
    let prior = PauliPrior::depolarizing(24, 0.1).unwrap();
    let s = sampled_syndromes(&code, &prior, 1, 4).unwrap().remove(0);
    let mut flipped = s.clone();
    flipped.sz[3] ^= 1;
    for rule in [CheckRule::Exact, CheckRule::MinSum] {
        let cfg = DecoderConfig {
            check_rule: rule,
            ..DecoderConfig::exact(1)
        };
        let mut a = JointBpState::new(&code, &prior, &s, cfg.clone()).unwrap();
        let mut b = JointBpState::new(&code, &prior, &flipped, cfg.clone()).unwrap();
        a.iterate().unwrap();
        b.iterate().unwrap();
        for e in 0..code.hx().n_edges() {
            let (p, q) = (a.xcheck_to_z()[e], b.xcheck_to_z()[e]);
            if code.hx().edge_row(e) == 3 {
                assert_eq!(p, [q[1], q[0]]);
            } else {
                assert_eq!(p, q);
            }
        }
        let mut a = LlrJointState::new(&code, &prior, &s, cfg.clone()).unwrap();
        let mut b = LlrJointState::new(&code, &prior, &flipped, cfg).unwrap();
        a.iterate().unwrap();
        b.iterate().unwrap();
        for e in code.hx().row_edges(3) {
            assert_eq!(a.xcheck_to_z()[e], -b.xcheck_to_z()[e]);
        }
    }
}

#[test]
fn messages_stay_normalized_under_approximations() {
    let code = paper_code_24();
    let prior = PauliPrior::depolarizing(24, 0.12).unwrap();
    let s = sampled_syndromes(&code, &prior, 1, 9).unwrap().remove(0);
    let cfg = DecoderConfig {
        check_rule: CheckRule::MinSum,
        minsum_scale: 0.75,
        damping: 0.3,
        epsilon: 1e-6,
        ..DecoderConfig::exact(15)
    };
    let mut st = JointBpState::new(&code, &prior, &s, cfg).unwrap();
    for _ in 0..15 {
        st.iterate().unwrap();
        for m in st.xcheck_to_z().iter().chain(st.zcheck_to_x()).chain(st.z_to_xcheck()).chain(st.x_to_zcheck()) {
            assert!((m[0] + m[1] - 1.0).abs() < 1e-12);
            assert!(m[0] >= 1e-6 * 0.99 && m[1] >= 1e-6 * 0.99);
        }
    }
}

#[test]
fn zero_syndrome_converges_at_first_iteration() {
    let code = paper_code_24();
    let prior = PauliPrior::depolarizing(24, 0.3).unwrap();
    let s = Syndromes::zeros(&code);
    for kind in DecoderKind::ALL {
        let r = decode(&code, &prior, &s, &DecoderConfig::default(), kind).unwrap();
        assert!(r.converged, "{kind}");
        assert_eq!(r.iterations, 1, "{kind}");
        assert!(r.decision.is_zero());
    }
}

#[test]
fn zero_iteration_budget_uses_prior_decision() {
    let code = paper_code_24();
    let prior = PauliPrior::depolarizing(24, 0.1).unwrap();
    let mut e = PauliError::zeros(24);
    e.x[0] = 1;
    let s = code.syndrome(&e).unwrap();
    let cfg = DecoderConfig {
        max_iterations: 0,
        ..Default::default()
    };
    let r = decode(&code, &prior, &s, &cfg, DecoderKind::Joint).unwrap();
    assert_eq!(r.iterations, 0);
    assert!(r.decision.is_zero());
    assert!(!r.converged);
}

/// A single flip converges exactly when no other column of the same check
/// matrix has the same two checks; twin columns give two equally likely
/// explanations and the beliefs split evenly between them.
#[test]
fn weight_one_convergence_follows_column_uniqueness() {
    let code = paper_code_24();
    let prior = PauliPrior::depolarizing(24, 0.05).unwrap();
    let mut converged = 0;
    for j in 0..24 {
        for (graph, is_x) in [(code.hz(), true), (code.hx(), false)] {
            let mut e = PauliError::zeros(24);
            if is_x {
                e.x[j] = 1;
            } else {
                e.z[j] = 1;
            }
            let s = code.syndrome(&e).unwrap();
            let r = decode(&code, &prior, &s, &DecoderConfig::default(), DecoderKind::Joint).unwrap();
            let unique = (0..24).all(|k| k == j || graph.col(k) != graph.col(j));
            assert_eq!(r.converged, unique, "qubit {j}, x = {is_x}");
            if r.converged {
                assert_eq!(r.decision, e);
                converged += 1;
            }
        }
    }
    assert_eq!(converged, 18);
}

#[test]
fn decoders_agree_on_exact_sum_product_results() {
    let code = paper_code_24();
    let prior = PauliPrior::depolarizing(24, 0.08).unwrap();
    for s in sampled_syndromes(&code, &prior, 10, 31).unwrap() {
        let cfg = DecoderConfig::exact(12);
        let a = decode(&code, &prior, &s, &cfg, DecoderKind::Joint).unwrap();
        let b = decode(&code, &prior, &s, &cfg, DecoderKind::FourState).unwrap();
        let c = decode(&code, &prior, &s, &cfg, DecoderKind::JointLlr).unwrap();
        assert_eq!(a.decision, b.decision);
        assert_eq!(a.decision, c.decision);
        assert!(sup_norm(&a.beliefs, &b.beliefs) <= 1e-10);
        assert!(a.componentwise.is_some() && b.componentwise.is_none());
    }
}
