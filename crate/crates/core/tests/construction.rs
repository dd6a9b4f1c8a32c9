use proptest::prelude::*;
use trigen_core::gadgets::{check_lists_in_blowup, companion_letter, mutation_sweep};
use trigen_core::terms::term_reachability_oracle;
use trigen_core::verify::{check_three_generated, Generated};
use trigen_core::{
    all_partitions, bell, build, check_embedding, check_join_conditions, eligible_pairs,
    expected_size, reorder_for_lemma, theta, verify_quadruple, xyz, GadgetSet, GeneratorQuadruple,
    Letter, Partition, DEFAULT_CAP,
};

fn partition(n: usize) -> impl Strategy<Value = Partition> {
    prop::collection::vec(0..n, n).prop_map(|labels| Partition::from_labels(&labels))
}

fn quad(max_n: usize) -> impl Strategy<Value = GeneratorQuadruple> {
    (1..=max_n).prop_flat_map(|n| {
        [partition(n), partition(n), partition(n), partition(n)]
            .prop_map(|parts| GeneratorQuadruple::user(parts).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn size_formula(q in quad(6)) {
        let w = build(&q, GadgetSet::builtin()).unwrap();
        prop_assert_eq!(w.size(), expected_size(q.relations()));
        prop_assert_eq!(w.a0_size(), q.n());
    }

    #[test]
    fn theta_separates_base(q in quad(5)) {
        let w = build(&q, GadgetSet::builtin()).unwrap();
        prop_assert!(theta(&w).restrict(&w.base_map).unwrap().is_bottom());
        let [x, y, z] = xyz(&w);
        prop_assert_eq!([x, y, z], w.graph.relations());
    }

    #[test]
    fn block_lists_hold_in_every_blowup(q in quad(3)) {
        let w = build(&q, GadgetSet::builtin()).unwrap();
        let bad = check_lists_in_blowup(&w, GadgetSet::builtin(), check_join_conditions(&q)).unwrap();
        prop_assert!(bad.is_empty(), "{:?}", bad);
    }

    #[test]
    fn reorder_gives_join_conditions(q in quad(5)) {
        if let Ok(r) = reorder_for_lemma(&q) {
            prop_assert!(check_join_conditions(&r));
            let mut a: Vec<_> = q.relations().to_vec();
            let mut b: Vec<_> = r.relations().to_vec();
            a.sort();
            b.sort();
            prop_assert_eq!(a, b);
        } else {
            let r = q.relations();
            for i in 0..4 {
                for j in i + 1..4 {
                    prop_assert!(!r[i].join(&r[j]).unwrap().is_top());
                }
            }
        }
    }

    #[test]
    fn verify_quadruple_matches_oracle(q in quad(4)) {
        let size = term_reachability_oracle(q.relations(), usize::MAX).len();
        prop_assert_eq!(verify_quadruple(&q).unwrap(), size == bell(q.n()));
    }
}

#[test]
fn shipped_quadruples_generate() {
    for n in [3, 5, 7] {
        let q = GeneratorQuadruple::builtin(n).unwrap();
        assert!(q.is_verified());
        assert!(verify_quadruple(q).unwrap());
        assert!(check_join_conditions(&reorder_for_lemma(q).unwrap()));
    }
}

#[test]
fn equ3_oracle_agrees_with_bell() {
    let q = GeneratorQuadruple::builtin(3).unwrap();
    assert_eq!(term_reachability_oracle(q.relations(), usize::MAX).len(), 5);
}

#[test]
fn alpha_and_beta_colours_meet_trivially() {
    let set = GadgetSet::builtin();
    for l in [Letter::Alpha, Letter::Beta] {
        let [x, y, z] = set.template(l).relations();
        for (a, b) in [(&x, &y), (&x, &z), (&y, &z)] {
            assert!(a.meet(b).unwrap().is_bottom(), "{l}");
        }
    }
}

#[test]
fn eligible_pairs_are_ordered_and_related() {
    for p in all_partitions(5) {
        let pairs = eligible_pairs(&p);
        let blocks = p.blocks();
        let want: usize = blocks.iter().map(|b| b.len() * (b.len() - 1) / 2).sum();
        assert_eq!(pairs.len(), want);
        assert!(pairs.iter().all(|&(u, v)| u < v && p.related(u, v)));
    }
}

#[test]
fn blowup_of_equ3_generates_the_targets() {
    let q = reorder_for_lemma(GeneratorQuadruple::builtin(3).unwrap()).unwrap();
    let w = build(&q, GadgetSet::builtin()).unwrap();
    let c = check_embedding(&q, GadgetSet::builtin(), DEFAULT_CAP).unwrap();
    assert!(c.passed());
    assert_eq!(check_three_generated(&w, &c.h2, DEFAULT_CAP).unwrap(), Generated::Yes);
    assert_eq!(check_three_generated(&w, &c.h2, 3).unwrap(), Generated::Indeterminate);
}

/// Not a gate: reports how many single-edge recolorings the lists detect.
#[test]
fn mutation_report() {
    let set = GadgetSet::builtin();
    for l in Letter::ALL {
        let specs: Vec<_> = set.specs_for(l).cloned().collect();
        let companion = companion_letter(l).map(|c| set.template(c));
        let sweep = mutation_sweep(set.template(l), &specs, companion).unwrap();
        let caught = sweep.iter().filter(|m| m.2).count();
        println!("{l}: {caught} of {} recolorings caught", sweep.len());
    }
}
