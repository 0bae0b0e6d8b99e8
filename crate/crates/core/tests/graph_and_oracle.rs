mod common;

use common::{k3, k4, paw, random_small, Dense};
use proptest::prelude::*;
use tricount::{count_exact, load_edge_list, local_edge_count, Graph};

fn arb_graph() -> impl Strategy<Value = Graph> {
    (1usize..40).prop_flat_map(|n| {
        prop::collection::vec((0..n, 0..n), 0..120)
            .prop_map(move |edges| Graph::from_edges(n, edges).unwrap().0)
    })
}

proptest! {
    #[test]
    fn structure_invariants(g in arb_graph()) {
        prop_assert!(g.is_valid());
        prop_assert_eq!(g.degrees().sum::<usize>(), 2 * g.m());
        for i in 0..g.n() {
            prop_assert_eq!(g.degree(i), g.neighbors(i).len());
            for j in 0..g.n() {
                prop_assert_eq!(g.has_edge(i, j).unwrap(), g.has_edge(j, i).unwrap());
            }
        }
    }

    #[test]
    fn serialization_round_trip(g in arb_graph()) {
        let mut text = Vec::new();
        g.write_edge_list(&mut text).unwrap();
        if g.m() > 0 {
            prop_assert_eq!(load_edge_list(text.as_slice()).unwrap().graph, g);
        }
    }

    #[test]
    fn profile_identities(g in arb_graph()) {
        let p = count_exact(&g);
        prop_assert!(p.is_consistent(&g));
        prop_assert_eq!(p.per_vertex.iter().sum::<u64>(), 3 * p.total);
    }
}

#[test]
fn oracle_matches_triple_enumeration_on_random_graphs() {
    for seed in 0..200 {
        let g = random_small(30, seed);
        let dense = Dense::new(&g);
        let p = count_exact(&g);
        assert_eq!(p.total, dense.triples(), "seed {seed}");
        assert_eq!(p.total, dense.total(), "seed {seed}");
        for i in 0..g.n() {
            assert_eq!(p.per_vertex[i], dense.vertex(i));
            for j in 0..g.n() {
                if i != j {
                    assert_eq!(p.edge(i, j), dense.edge(i, j));
                    assert_eq!(local_edge_count(&g, i, j).unwrap(), dense.edge(i, j));
                }
            }
        }
    }
}

#[test]
fn reference_graphs() {
    assert_eq!(count_exact(&k3()).total, 1);
    assert_eq!(count_exact(&k4()).total, 4);
    let dense = Dense::new(&paw());
    let p = count_exact(&paw());
    assert_eq!(p.total, dense.triples());
    assert_eq!(
        p.per_vertex,
        (0..4).map(|i| dense.vertex(i)).collect::<Vec<_>>()
    );
    assert_eq!(local_edge_count(&paw(), 2, 3).unwrap(), dense.edge(2, 3));
}

#[test]
fn fixture_files_load() {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("data");
    let paw_file = tricount::load_edge_list_file(dir.join("paw.edges")).unwrap();
    assert_eq!(paw_file.graph, paw());
    assert!(matches!(
        tricount::load_edge_list_file(dir.join("empty-graph.edges")),
        Err(tricount::Error::EmptyInput)
    ));
}
