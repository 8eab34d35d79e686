use proptest::prelude::*;

use bniso::config::{configs, Config};
use bniso::digraph::Digraph;
use bniso::enumerate::all_graphs;
use bniso::perm::{conjugate, Perm};
use bniso::sparse::translate;
use bniso::subset::CubeSubset;
use bniso::Network;

fn network_of(n: usize) -> impl Strategy<Value = Network> {
    proptest::collection::vec(0..(1u32 << n), 1 << n)
        .prop_map(move |t| Network::new(n, t.into_iter().map(Config).collect()).unwrap())
}

fn perm_of(n: usize) -> impl Strategy<Value = Perm> {
    Just((0..(1u32 << n)).map(Config).collect::<Vec<_>>())
        .prop_shuffle()
        .prop_map(move |m| Perm::from_map(n, m).unwrap())
}

/// Definitional dependence check, one arc at a time.
fn interaction_graph_by_definition(f: &Network) -> Digraph {
    let mut g = Digraph::new(f.n());
    for j in 0..f.n() {
        for i in 0..f.n() {
            let depends = configs(f.n())
                .any(|x| f.apply(x).bit(i) != f.apply(x.flip(j)).bit(i));
            if depends {
                g.add_arc(j, i);
            }
        }
    }
    g
}

proptest! {
    #[test]
    fn interaction_graph_matches_definition((n, f) in (1usize..=4).prop_flat_map(|n| (Just(n), network_of(n)))) {
        prop_assert_eq!(f.interaction_graph(), interaction_graph_by_definition(&f));
        prop_assert_eq!(n, f.n());
    }

    #[test]
    fn conjugation_is_a_group_action((f, p, q) in (1usize..=5).prop_flat_map(|n| (network_of(n), perm_of(n), perm_of(n)))) {
        let lhs = conjugate(&conjugate(&f, &p).unwrap(), &q).unwrap();
        let rhs = conjugate(&f, &q.compose(&p)).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn conjugation_preserves_dynamics((f, p) in (1usize..=5).prop_flat_map(|n| (network_of(n), perm_of(n)))) {
        let h = conjugate(&f, &p).unwrap();
        let df = f.cycle_decomposition();
        let dh = h.cycle_decomposition();
        prop_assert_eq!(df.fixed_points.len(), dh.fixed_points.len());
        prop_assert_eq!(df.cycle_length_multiset(), dh.cycle_length_multiset());
        prop_assert_eq!(f.image_size(), h.image_size());
    }

    #[test]
    fn conjugate_graphs_lie_in_the_exact_family((f, p) in (1usize..=3).prop_flat_map(|n| (network_of(n), perm_of(n)))) {
        let family = all_graphs(&f, false).unwrap();
        let g = conjugate(&f, &p).unwrap().interaction_graph();
        prop_assert!(family.contains(&g));
    }

    #[test]
    fn translation_never_changes_the_graph((f, z) in (1usize..=5).prop_flat_map(|n| (network_of(n), 0..(1u32 << n)))) {
        prop_assert_eq!(translate(&f, Config(z)).interaction_graph(), f.interaction_graph());
    }

    #[test]
    fn network_text_and_json_round_trip(f in (1usize..=4).prop_flat_map(network_of)) {
        prop_assert_eq!(&Network::from_text(&f.to_text()).unwrap(), &f);
        prop_assert_eq!(&Network::from_json_str(&f.to_json_string()).unwrap(), &f);
    }

    #[test]
    fn perm_json_round_trip(p in (1usize..=4).prop_flat_map(perm_of)) {
        prop_assert_eq!(Perm::from_json_str(&p.to_json_string()).unwrap(), p);
    }

    #[test]
    fn digraph_json_round_trip(f in (1usize..=4).prop_flat_map(network_of)) {
        let g = f.interaction_graph();
        prop_assert_eq!(Digraph::from_json_str(&g.to_json_string()).unwrap(), g);
    }

    #[test]
    fn closing_a_set_by_a_direction_makes_it_even(
        (n, mask, i) in (2usize..=4).prop_flat_map(|n| (Just(n), 0u32..(1u32 << (1 << n)), 0..n))
    ) {
        let members = (0..(1u32 << n)).filter(|&b| mask >> b & 1 == 1).map(Config);
        let x = CubeSubset::from_members(n, members).unwrap();
        let mut closed = x.clone();
        for m in x.shift(i).members() {
            closed.insert(m);
        }
        prop_assert!(closed.is_closed_by(i));
        prop_assert_eq!(closed.len() % 2, 0);
    }

    #[test]
    fn independent_sets_are_independent(f in (1usize..=5).prop_flat_map(network_of)) {
        let a = f.large_independent_set().unwrap();
        prop_assert!(bniso::is_independent_set(&f, &a));
    }
}
