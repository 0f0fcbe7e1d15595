mod common;

use coalg::limits::{equalizer_p, equalizer_q, product_p, product_q, pullback_q};
use coalg::{completion_k, is_isomorphic, AutMorphism, Automaton, LabelId, PAutomaton, QAutomaton, Sort};
use common::*;
use proptest::prelude::*;

fn compose(h: &[usize], p: &AutMorphism) -> Vec<usize> {
    h.iter().map(|&x| p.map[x]).collect()
}

/// Pairs of labeled states of `K a`, `K b` with equal behavior, with
/// componentwise transitions.
fn direct_product(a: &PAutomaton, b: &PAutomaton) -> PAutomaton {
    let (ka, kb) = (completion_k(a), completion_k(b));
    let rel = oracle_bisim(&ka, &kb);
    let pairs: Vec<(usize, usize)> = (0..a.num_states())
        .flat_map(|x| (0..b.num_states()).map(move |y| (x, y)))
        .filter(|&(x, y)| rel[x][y])
        .collect();
    let sig = a.sig().clone();
    let mut out = PAutomaton::new(sig.clone());
    for (k, &(x, _)) in pairs.iter().enumerate() {
        out.add_state(&format!("p{k}"), a.sort_of(x), a.label_of(x)).unwrap();
    }
    for (k, &(x, y)) in pairs.iter().enumerate() {
        for d in sig.dirs_of(a.sort_of(x)) {
            let t = (a.step(x, d).unwrap(), b.step(y, d).unwrap());
            out.set_step(k, d, pairs.iter().position(|&p| p == t).unwrap());
        }
    }
    out
}

#[test]
fn product_p_universal_property() {
    let sig = sig_fg();
    let ps: Vec<_> = all_p_upto(&sig, 2).collect();
    for a in &ps {
        for b in &ps {
            let prod = product_p(a, b).unwrap();
            assert!(oracle_is_morphism(&prod.limit, a, &prod.projections[0].map));
            assert!(oracle_is_morphism(&prod.limit, b, &prod.projections[1].map));
            for c in &ps {
                let mut via: Vec<(Vec<usize>, Vec<usize>)> = oracle_homs(c, &prod.limit)
                    .iter()
                    .map(|h| (compose(h, &prod.projections[0]), compose(h, &prod.projections[1])))
                    .collect();
                via.sort();
                let mut cones = Vec::new();
                for f in oracle_homs(c, a) {
                    for g in oracle_homs(c, b) {
                        cones.push((f.clone(), g));
                    }
                }
                cones.sort();
                assert_eq!(via, cones);
            }
        }
    }
}

#[test]
fn equalizer_p_universal_property() {
    let sig = sig_fg();
    let ps: Vec<_> = all_p_upto(&sig, 2).collect();
    for a in &ps {
        for b in &ps {
            let homs = oracle_homs(a, b);
            for f in &homs {
                for g in &homs {
                    let (f, g) = (AutMorphism { map: f.clone() }, AutMorphism { map: g.clone() });
                    let eq = equalizer_p(a, b, &f, &g).unwrap();
                    let e = &eq.projections[0];
                    assert!(oracle_is_morphism(&eq.limit, a, &e.map));
                    assert_eq!(compose(&e.map, &f), compose(&e.map, &g));
                    assert_eq!(eq.projections[1].map, compose(&e.map, &f));
                    for c in &ps {
                        let mut via: Vec<Vec<usize>> =
                            oracle_homs(c, &eq.limit).iter().map(|h| compose(h, e)).collect();
                        via.sort();
                        let mut equalizing: Vec<Vec<usize>> = oracle_homs(c, a)
                            .into_iter()
                            .filter(|h| compose(h, &f) == compose(h, &g))
                            .collect();
                        equalizing.sort();
                        assert_eq!(via, equalizing);
                    }
                }
            }
        }
    }
}

#[test]
fn product_p_agrees_with_direct_pairs() {
    let sig = sig_fg();
    let small: Vec<_> = all_p_upto(&sig, 2).collect();
    let three: Vec<_> = all_p(&sig, 3).step_by(23).collect();
    for a in small.iter().chain(&three) {
        for b in small.iter().chain(three.iter().step_by(5)) {
            let chain = product_p(a, b).unwrap().limit;
            let direct = direct_product(a, b);
            assert!(is_isomorphic(&chain, &direct));
        }
    }
}

#[test]
fn product_q_matches_bisimilar_pairs() {
    let sig = sig_fg();
    let qs: Vec<_> = all_q_upto(&sig, 2).step_by(3).collect();
    for a in &qs {
        for b in &qs {
            let prod = product_q(a, b).unwrap();
            let rel = oracle_bisim(a, b);
            let expected: Vec<(usize, usize)> = (0..a.num_states())
                .flat_map(|x| (0..b.num_states()).map(move |y| (x, y)))
                .filter(|&(x, y)| rel[x][y])
                .collect();
            let got: Vec<(usize, usize)> = (0..prod.limit.num_states())
                .map(|k| (prod.projections[0].map[k], prod.projections[1].map[k]))
                .collect();
            assert_eq!(got, expected);
            assert!(oracle_is_morphism(&prod.limit, a, &prod.projections[0].map));
            assert!(oracle_is_morphism(&prod.limit, b, &prod.projections[1].map));
        }
    }
}

#[test]
fn pullback_q_universal_property() {
    let sig = sig_fg();
    let qs: Vec<QAutomaton> = all_q_upto(&sig, 2).step_by(9).collect();
    let tests: Vec<QAutomaton> = all_q_upto(&sig, 2).step_by(29).collect();
    for c in qs.iter().step_by(4) {
        for a in &qs {
            for b in qs.iter().step_by(3) {
                for f in oracle_homs(a, c) {
                    let f = AutMorphism { map: f };
                    for g in oracle_homs(b, c) {
                        let g = AutMorphism { map: g };
                        let pb = pullback_q(a, b, c, &f, &g).unwrap();
                        let [p, q, r] = &pb.projections[..] else {
                            panic!("three projections")
                        };
                        assert_eq!(compose(&p.map, &f), compose(&q.map, &g));
                        assert_eq!(r.map, compose(&p.map, &f));
                        for t in &tests {
                            let mut via: Vec<(Vec<usize>, Vec<usize>)> = oracle_homs(t, &pb.limit)
                                .iter()
                                .map(|h| (compose(h, p), compose(h, q)))
                                .collect();
                            via.sort();
                            let mut cones = Vec::new();
                            for x in oracle_homs(t, a) {
                                for y in oracle_homs(t, b) {
                                    if compose(&x, &f) == compose(&y, &g) {
                                        cones.push((x.clone(), y));
                                    }
                                }
                            }
                            cones.sort();
                            assert_eq!(via, cones);
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn equalizer_q_is_pointwise() {
    let sig = sig_fg();
    for a in all_q_upto(&sig, 2).step_by(5) {
        for b in all_q_upto(&sig, 2).step_by(11) {
            let homs = oracle_homs(&a, &b);
            for f in &homs {
                for g in &homs {
                    let (f, g) = (AutMorphism { map: f.clone() }, AutMorphism { map: g.clone() });
                    let eq = equalizer_q(&a, &b, &f, &g).unwrap();
                    let expected: Vec<usize> = (0..a.num_states()).filter(|&q| f.map[q] == g.map[q]).collect();
                    assert_eq!(eq.projections[0].map, expected);
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn product_q_carrier_is_forward_closed(seed in any::<u64>(), sorts in 1usize..4, n in 0usize..6, m in 0usize..6) {
        let mut r = rng(seed);
        let sig = random_sig(&mut r, sorts);
        let (a, b) = (random_q(&mut r, &sig, n), random_q(&mut r, &sig, m));
        let prod = product_q(&a, &b).unwrap();
        coalg::validate_q(&prod.limit).unwrap();
        prop_assert!(oracle_is_morphism(&prod.limit, &a, &prod.projections[0].map));
        prop_assert!(oracle_is_morphism(&prod.limit, &b, &prod.projections[1].map));
        for k in 0..prod.limit.num_states() {
            prop_assert_eq!(prod.limit.label_of(k), a.label_of(prod.projections[0].map[k]));
        }
    }

    #[test]
    fn product_p_of_random_automata(seed in any::<u64>(), sorts in 1usize..4, n in 0usize..5, m in 0usize..5) {
        let mut r = rng(seed);
        let sig = random_sig(&mut r, sorts);
        let (a, b) = (random_p(&mut r, &sig, n), random_p(&mut r, &sig, m));
        let prod = product_p(&a, &b).unwrap();
        prop_assert!(is_isomorphic(&prod.limit, &direct_product(&a, &b)));
        let labels: Vec<LabelId> = (0..prod.limit.num_states()).map(|k| prod.limit.label_of(k)).collect();
        prop_assert!(labels.iter().enumerate().all(|(k, &l)| l == b.label_of(prod.projections[1].map[k])));
        prop_assert!((0..prod.limit.num_states()).all(|k| prod.limit.state_sort(k) != Sort::Sink));
    }
}
