mod common;

use std::collections::BTreeMap;

use polarlab::ldpc::alist::{parse_alist, write_alist};
use polarlab::ldpc::{realize_degree_sequence, LdpcCodeSpec};
use polarlab::setup::{SetupParams, IRREGULAR_PROFILE};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{degree_oracle_3, girth_by_edge_removal};

fn setup_code(id: u8) -> LdpcCodeSpec {
    SetupParams::preset(id).unwrap().build().unwrap().ldpc.unwrap()
}

#[test]
fn irregular_sequences_match_exhaustive_search() {
    let target = [IRREGULAR_PROFILE[0], IRREGULAR_PROFILE[1], IRREGULAR_PROFILE[2]];
    for (n_vars, n_checks) in [(155, 43), (190, 53), (155, 50), (120, 40)] {
        let got = realize_degree_sequence(n_vars, 3, n_checks, &IRREGULAR_PROFILE);
        let want = degree_oracle_3(n_vars, 3, n_checks, target);
        match want {
            Some(w) => assert_eq!(got.unwrap(), w, "n_vars {n_vars} n_checks {n_checks}"),
            None => assert!(got.is_err()),
        }
    }
    let s3 = realize_degree_sequence(155, 3, 43, &IRREGULAR_PROFILE).unwrap();
    assert_eq!(s3, BTreeMap::from([(4, 14), (5, 7), (17, 22)]));
}

#[test]
fn regular_155_graph_has_no_four_cycles() {
    let counts = BTreeMap::from([(5, 93)]);
    let code = LdpcCodeSpec::construct(155, 3, &counts, 1).unwrap();
    let adj = &code.graph().check_adj;
    for a in 0..adj.len() {
        for b in a + 1..adj.len() {
            let shared = adj[a].iter().filter(|v| adj[b].contains(v)).count();
            assert!(shared <= 1, "checks {a} and {b} share {shared} variables");
        }
    }
    assert!(code.girth().unwrap() >= 6);
    let preset = setup_code(2);
    assert!(preset.girth().unwrap() >= 6);
}

#[test]
fn reported_girth_matches_brute_force() {
    for id in 2..=4 {
        let code = setup_code(id);
        assert_eq!(code.girth(), girth_by_edge_removal(code.graph()), "set-up {id}");
    }
}

#[test]
fn girth_oracle_agrees_on_many_small_graphs() {
    let counts = BTreeMap::from([(3, 4), (4, 3)]);
    for seed in 0..40 {
        let code = LdpcCodeSpec::construct(8, 3, &counts, seed).unwrap();
        assert_eq!(code.girth(), girth_by_edge_removal(code.graph()), "seed {seed}");
    }
}

#[test]
fn degrees_are_realized_exactly() {
    for id in 2..=4 {
        let params = SetupParams::preset(id).unwrap();
        let code = setup_code(id);
        assert!(code.graph().var_adj.iter().all(|c| c.len() == 3));
        let mut realized = BTreeMap::new();
        for vars in &code.graph().check_adj {
            *realized.entry(vars.len()).or_insert(0) += 1;
        }
        assert_eq!(realized, params.check_counts().unwrap());
        assert_eq!(code.n_edges(), 3 * params.n_ldpc);
    }
}

#[test]
fn random_messages_encode_to_codewords() {
    let code = setup_code(3);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..1000 {
        let msg: Vec<u8> = (0..code.k()).map(|_| rng.random::<bool>() as u8).collect();
        let cw = code.encode(&msg).unwrap();
        assert!(code.syndrome(&cw).iter().all(|&s| s == 0));
        assert_eq!(code.extract_message(&cw), msg);
    }
}

#[test]
fn dimension_follows_rank() {
    for id in 2..=4 {
        let code = setup_code(id);
        assert_eq!(code.k(), code.n_vars() - code.rank());
        assert_eq!(code.k(), SetupParams::preset(id).unwrap().k_ldpc);
    }
}

#[test]
fn construction_is_deterministic() {
    let counts = BTreeMap::from([(5, 93)]);
    let a = LdpcCodeSpec::construct(155, 3, &counts, 42).unwrap();
    let b = LdpcCodeSpec::construct(155, 3, &counts, 42).unwrap();
    assert_eq!(a.graph(), b.graph());
    assert_eq!(a.to_alist(), b.to_alist());
}

#[test]
fn alist_round_trip_of_reference_code() {
    let code = setup_code(4);
    let text = code.to_alist();
    let parsed = parse_alist(&text).unwrap();
    assert_eq!(&parsed, code.graph());
    assert_eq!(write_alist(&parsed), text);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn encoding_is_linear(seed in 0u64..1000, a_seed in any::<u64>(), b_seed in any::<u64>()) {
        let counts = BTreeMap::from([(4, 6), (6, 2)]);
        let code = LdpcCodeSpec::construct(12, 3, &counts, seed).unwrap();
        let mut ra = ChaCha8Rng::seed_from_u64(a_seed);
        let mut rb = ChaCha8Rng::seed_from_u64(b_seed);
        let a: Vec<u8> = (0..code.k()).map(|_| ra.random::<bool>() as u8).collect();
        let b: Vec<u8> = (0..code.k()).map(|_| rb.random::<bool>() as u8).collect();
        let sum: Vec<u8> = a.iter().zip(&b).map(|(x, y)| x ^ y).collect();
        let ca = code.encode(&a).unwrap();
        let cb = code.encode(&b).unwrap();
        let cs: Vec<u8> = ca.iter().zip(&cb).map(|(x, y)| x ^ y).collect();
        prop_assert_eq!(code.encode(&sum).unwrap(), cs);
        prop_assert!(code.is_codeword(&ca));
    }

    #[test]
    fn peg_respects_degrees(seed in any::<u64>(), n_vars in 6usize..40) {
        // d_v = 2; two checks of degree 3, the rest of degree 2.
        let edges = 2 * n_vars;
        let counts = BTreeMap::from([(2, (edges - 6) / 2), (3, 2)]);
        let code = LdpcCodeSpec::construct(n_vars, 2, &counts, seed);
        prop_assume!(code.is_ok());
        let code = code.unwrap();
        prop_assert!(code.graph().var_adj.iter().all(|c| c.len() == 2));
        prop_assert_eq!(code.n_edges(), edges);
        prop_assert_eq!(code.k(), n_vars - code.rank());
        let text = code.to_alist();
        prop_assert_eq!(parse_alist(&text).unwrap(), code.graph().clone());
    }
}
