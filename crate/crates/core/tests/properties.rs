mod common;

use common::{random_rooted, random_unrooted, rooted_labelable};
use lcl_core::automaton::flex_scc_rooted;
use lcl_core::depth::{trim_rooted, trim_unrooted};
use lcl_core::harness::{check, solve_offline};
use lcl_core::instances::{complete_tree, CompleteKind};
use lcl_core::problem::{serialize_problem, Configuration};
use lcl_core::{depth, parse_problem, LabelSet, Problem, RootedProblem};
use proptest::prelude::*;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rooted(seed: u64) -> RootedProblem {
    random_rooted(&mut ChaCha8Rng::seed_from_u64(seed), 4, 3)
}

/// Same problem with label ids reversed.
fn reversed(p: &RootedProblem) -> RootedProblem {
    let n = p.label_count();
    let r = |l: usize| n - 1 - l;
    RootedProblem::new(
        p.delta(),
        p.labels().iter().rev().cloned().collect(),
        p.constraints()
            .iter()
            .map(|(l, c)| (r(*l), Configuration::new(c.labels().iter().map(|&x| r(x)).collect()))),
    )
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn serialization_round_trips(seed: u64, unrooted: bool) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = if unrooted {
            Problem::Unrooted(random_unrooted(&mut rng, 4, 3))
        } else {
            Problem::Rooted(random_rooted(&mut rng, 4, 3))
        };
        let text = serialize_problem(&p);
        let back = parse_problem(&text).unwrap();
        prop_assert_eq!(&back, &p);
        prop_assert_eq!(serialize_problem(&back), text);
    }

    #[test]
    fn rooted_trim_is_a_monotone_kernel(seed: u64, a: u64, b: u64) {
        let p = rooted(seed);
        let full = p.all_labels().bits();
        let s = LabelSet::from_bits(a & b & full);
        let t = LabelSet::from_bits(a & full);
        let ts = trim_rooted(&p, s);
        prop_assert!(ts.is_subset(s));
        prop_assert!(ts.is_subset(trim_rooted(&p, t)));
        prop_assert_eq!(trim_rooted(&p, ts), ts);
    }

    #[test]
    fn flexible_components_are_disjoint_subsets(seed: u64, a: u64) {
        let p = rooted(seed);
        let s = trim_rooted(&p, LabelSet::from_bits(a & p.all_labels().bits()));
        let comps = flex_scc_rooted(&p, s);
        let mut seen = LabelSet::EMPTY;
        for c in comps {
            prop_assert!(!c.is_empty() && c.is_subset(s));
            prop_assert!(c.intersection(seen).is_empty());
            seen = seen.union(c);
        }
    }

    #[test]
    fn unrooted_trim_is_idempotent(seed: u64) {
        let p = random_unrooted(&mut ChaCha8Rng::seed_from_u64(seed), 4, 3);
        let v = trim_unrooted(&p, &p.all_configs());
        prop_assert_eq!(trim_unrooted(&p, &v), v.clone());
        let fewer = v.iter().copied().filter(|i| i % 2 == 0).collect();
        prop_assert!(trim_unrooted(&p, &fewer).is_subset(&v));
    }

    #[test]
    fn depth_ignores_label_names(seed: u64) {
        let p = rooted(seed);
        prop_assert_eq!(
            depth(&Problem::Rooted(p.clone())).value,
            depth(&Problem::Rooted(reversed(&p))).value
        );
    }

    #[test]
    fn offline_solutions_pass_the_checker(seed: u64, height in 0usize..4) {
        let p = rooted(seed);
        let g = complete_tree(p.delta(), height, CompleteKind::DeltaAry).unwrap();
        let any = rooted_labelable(&p, &vec![true; p.label_count()], height).iter().any(|&x| x);
        let p = Problem::Rooted(p);
        match solve_offline(&g, &p) {
            Some(l) => {
                prop_assert!(any);
                prop_assert!(check(&g, &l, &p).pass());
            }
            None => prop_assert!(!any),
        }
    }

    #[test]
    fn unrooted_offline_solutions_pass_the_checker(seed: u64, height in 0usize..3) {
        let p = random_unrooted(&mut ChaCha8Rng::seed_from_u64(seed), 3, 3);
        let g = complete_tree(p.delta(), height, CompleteKind::TStar).unwrap();
        let p = Problem::Unrooted(p);
        if let Some(l) = solve_offline(&g, &p) {
            prop_assert!(check(&g, &l, &p).pass());
        }
    }
}
