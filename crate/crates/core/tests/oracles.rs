//! Solver outputs against brute-force references, plus the structural
//! invariants of the solvers on exhaustive small corpora.

mod common;

use thetakit::graph::{enumerate_bipartite, enumerate_graphs, enumerate_graphs_up_to_isomorphism};
use thetakit::linalg::{binomial_basis_coeffs, fermat_basis_coeffs};
use thetakit::minrank::{
    bipartite_minrank_gfp, matches_bipartite_pattern, matches_pattern, minrank_gfp,
    minrank_real_closed_form, zero_forcing_number, Budget,
};
use thetakit::theta::{
    representation_exists_at, theta_bipartite_exact, theta_exact, verify_bipartite_representation,
    verify_representation,
};
use thetakit::{BipartiteGraph, Graph, LSpec};

fn lspecs() -> Vec<LSpec> {
    [
        "finite:1",
        "finite:0,1",
        "finite:1,2",
        "mod:2:1",
        "mod:2:0",
        "mod:3:1,2",
        "mod:3:0",
        "threshold",
        "cofinite-excl:0,2",
    ]
    .iter()
    .map(|s| s.parse().unwrap())
    .collect()
}

fn small_graphs(n_max: usize) -> Vec<Graph> {
    (1..=n_max)
        .flat_map(|n| enumerate_graphs_up_to_isomorphism(n).unwrap())
        .collect()
}

#[test]
fn theta_matches_brute_force() {
    const CAP: usize = 4;
    for lspec in lspecs() {
        for g in small_graphs(4) {
            let solved = theta_exact(&g, &lspec, 10).value();
            let brute = common::brute_theta(&g, |x| lspec.member(x as u64), CAP);
            match brute {
                Some(b) => assert_eq!(solved, Some(b), "{lspec} on {}", g.to_graph6().unwrap()),
                None => assert!(
                    solved.is_none_or(|v| v > CAP),
                    "{lspec} on {}",
                    g.to_graph6().unwrap()
                ),
            }
        }
    }
}

#[test]
fn bipartite_theta_matches_brute_force() {
    const CAP: usize = 3;
    for lspec in lspecs() {
        for (n1, n2) in [(1, 1), (1, 2), (2, 1), (2, 2), (1, 3), (3, 1), (2, 3)] {
            for g in enumerate_bipartite(n1, n2).unwrap() {
                let solved = theta_bipartite_exact(&g, &lspec, 10).value();
                let brute = common::brute_theta_bip(&g, |x| lspec.member(x as u64), CAP);
                match brute {
                    Some(b) => assert_eq!(solved, Some(b), "{lspec} on {}", g.id()),
                    None => assert!(solved.is_none_or(|v| v > CAP), "{lspec} on {}", g.id()),
                }
            }
        }
    }
}

#[test]
fn theta_witness_valid_and_one_less_refuted() {
    for lspec in lspecs() {
        for g in small_graphs(5) {
            let r = theta_exact(&g, &lspec, 12);
            let (Some(l), Some(w)) = (r.value(), r.witness()) else {
                continue;
            };
            assert_eq!(verify_representation(&g, &w.family, &lspec), Ok(true));
            assert!(w.family.support_size() <= l);
            if l > 0 {
                assert_eq!(
                    representation_exists_at(&g, &lspec, None, l - 1),
                    Some(false),
                    "{lspec} on {}",
                    g.to_graph6().unwrap()
                );
            }
        }
    }
}

#[test]
fn bipartite_theta_witness_valid() {
    for lspec in lspecs() {
        for g in enumerate_bipartite(3, 3).unwrap() {
            let r = theta_bipartite_exact(&g, &lspec, 12);
            if let Some(w) = r.witness() {
                assert_eq!(
                    verify_bipartite_representation(&g, &w.family, &lspec),
                    Ok(true)
                );
            }
        }
    }
}

#[test]
fn theta_monotone_on_induced_subgraphs_of_twin_free_graphs() {
    for lspec in lspecs() {
        for g in small_graphs(5).into_iter().filter(Graph::is_twin_free) {
            let Some(whole) = theta_exact(&g, &lspec, 12).value() else {
                continue;
            };
            let full = (1u64 << g.n()) - 1;
            for mask in 1..full {
                let h = g.induced_by_mask(mask).unwrap();
                if let Some(part) = theta_exact(&h, &lspec, 12).value() {
                    assert!(
                        part <= whole,
                        "{lspec}: {} inside {}",
                        h.to_graph6().unwrap(),
                        g.to_graph6().unwrap()
                    );
                }
            }
        }
    }
}

#[test]
fn twin_reduction_and_theta() {
    for lspec in lspecs() {
        // a maximal twin-free induced subgraph never needs a larger universe
        for g in small_graphs(5) {
            let h = g.twin_reduce().graph;
            assert!(!common::has_twin_pair(&h));
            let (a, b) = (
                theta_exact(&h, &lspec, 12).value(),
                theta_exact(&g, &lspec, 12).value(),
            );
            if let (Some(a), Some(b)) = (a, b) {
                assert!(a <= b, "{lspec} on {}", g.to_graph6().unwrap());
            }
        }
        // the bipartite number is unchanged by collapsing same-part twins
        for n1 in 1..=3 {
            for n2 in 1..=3 {
                for g in enumerate_bipartite(n1, n2).unwrap() {
                    let h = g.twin_reduce();
                    assert_eq!(
                        theta_bipartite_exact(&g, &lspec, 12).value(),
                        theta_bipartite_exact(&h, &lspec, 12).value(),
                        "{lspec} on {}",
                        g.id()
                    );
                }
            }
        }
    }
}

#[test]
fn odd_theta_equals_gf2_bipartite_minrank() {
    let odd = LSpec::odd();
    for n1 in 1..=3 {
        for n2 in 1..=3 {
            for g in enumerate_bipartite(n1, n2).unwrap() {
                let theta = theta_bipartite_exact(&g, &odd, 12).value();
                let bmr = common::brute_bminrank(&g, 2);
                assert_eq!(theta, Some(bmr), "{}", g.id());
            }
        }
    }
}

#[test]
fn minrank_matches_brute_force() {
    for p in [2u64, 3, 5] {
        for n in 1..=4 {
            for g in enumerate_graphs(n).unwrap() {
                let r = minrank_gfp(&g, p, &Budget::default()).unwrap();
                assert_eq!(
                    r.value(),
                    Some(common::brute_minrank(&g, p as i64)),
                    "p={p} {}",
                    g.to_graph6().unwrap()
                );
                let w = r.witness().unwrap();
                assert_eq!(w.rank(), r.value().unwrap());
                assert!(matches_pattern(&g, w));
            }
        }
    }
    for p in [2u64, 3] {
        for g in enumerate_graphs_up_to_isomorphism(5).unwrap() {
            let r = minrank_gfp(&g, p, &Budget::default()).unwrap();
            assert_eq!(
                r.value(),
                Some(common::brute_minrank(&g, p as i64)),
                "p={p} {}",
                g.to_graph6().unwrap()
            );
            assert!(matches_pattern(&g, r.witness().unwrap()));
        }
    }
}

#[test]
fn zero_forcing_bound_is_below_minrank() {
    for g in small_graphs(5) {
        let bound = g.n() - zero_forcing_number(&g);
        assert!(bound <= common::brute_minrank(&g, 2));
        assert!(bound <= common::brute_minrank(&g, 3));
    }
}

#[test]
fn bipartite_minrank_matches_brute_force() {
    for p in [2u64, 3] {
        for n1 in 1..=3 {
            for n2 in 1..=3 {
                for g in enumerate_bipartite(n1, n2).unwrap() {
                    let r = bipartite_minrank_gfp(&g, p, &Budget::default()).unwrap();
                    assert_eq!(
                        r.value(),
                        Some(common::brute_bminrank(&g, p as i64)),
                        "p={p} {}",
                        g.id()
                    );
                    let w = r.witness().unwrap();
                    assert_eq!(w.rank(), r.value().unwrap());
                    assert!(matches_bipartite_pattern(&g, w));
                }
            }
        }
    }
}

#[test]
fn bipartite_minrank_sandwiches_minrank() {
    // bmr(B) <= mr(G) <= 2 bmr(B) for the bipartite graph G with biadjacency B
    for n1 in 1..=3 {
        for n2 in 1..=3 {
            for b in enumerate_bipartite(n1, n2).unwrap() {
                let bmr = bipartite_minrank_gfp(&b, 2, &Budget::default())
                    .unwrap()
                    .value()
                    .unwrap();
                let mr = minrank_gfp(&b.to_graph(), 2, &Budget::default())
                    .unwrap()
                    .value()
                    .unwrap();
                assert!(bmr <= mr && mr <= 2 * bmr, "{}", b.id());
            }
        }
    }
    // equality with 2 bmr fails already for a single edge and for P_4
    let edge = BipartiteGraph::matching(1);
    let p4 = BipartiteGraph::from_rows(&["11", "01"]).unwrap();
    for (b, mr, bmr) in [(edge, 1, 1), (p4, 3, 2)] {
        assert_eq!(
            minrank_gfp(&b.to_graph(), 2, &Budget::default())
                .unwrap()
                .value(),
            Some(mr)
        );
        assert_eq!(
            bipartite_minrank_gfp(&b, 2, &Budget::default())
                .unwrap()
                .value(),
            Some(bmr)
        );
    }
}

#[test]
fn minrank_subadditive_on_edge_disjoint_unions_gf2() {
    for n in 1..=5 {
        let graphs: Vec<Graph> = enumerate_graphs(n).unwrap().collect();
        let mr: Vec<usize> = graphs
            .iter()
            .map(|g| {
                minrank_gfp(g, 2, &Budget::default())
                    .unwrap()
                    .value()
                    .unwrap()
            })
            .collect();
        // enumeration order is by edge mask, so the union's index is the OR
        for (i, gi) in graphs.iter().enumerate() {
            assert_eq!(gi.edge_mask() as usize, i);
            for j in (0..graphs.len()).filter(|j| i & j == 0) {
                assert!(mr[i | j] <= mr[i] + mr[j], "n={n} masks {i:#x} {j:#x}");
            }
        }
    }
}

#[test]
fn shared_edges_can_cancel_over_gf2() {
    // triangle on {0,1,2} and K_4 on {0,1,3,4} share the edge 01
    let tri = Graph::from_edges(5, &[(0, 1), (0, 2), (1, 2)]).unwrap();
    let k4 = Graph::from_edges(5, &[(0, 1), (0, 3), (0, 4), (1, 3), (1, 4), (3, 4)]).unwrap();
    let mr = |g: &Graph, p| {
        minrank_gfp(g, p, &Budget::default())
            .unwrap()
            .value()
            .unwrap()
    };
    let union = tri.union(&k4).unwrap();
    assert_eq!((mr(&tri, 2), mr(&k4, 2), mr(&union, 2)), (1, 1, 3));
    // with a third nonzero scalar available the sum avoids the cancellation
    assert_eq!(mr(&union, 3), 2);
}

#[test]
fn minrank_monotone_on_induced_subgraphs_gf2() {
    for g in (1..=5).flat_map(|n| enumerate_graphs(n).unwrap()) {
        let whole = minrank_gfp(&g, 2, &Budget::default())
            .unwrap()
            .value()
            .unwrap();
        for mask in 1..(1u64 << g.n()) {
            let h = g.induced_by_mask(mask).unwrap();
            assert!(
                minrank_gfp(&h, 2, &Budget::default())
                    .unwrap()
                    .value()
                    .unwrap()
                    <= whole
            );
        }
    }
}

#[test]
fn real_closed_forms_match_bounded_search() {
    let cases = [
        (Graph::path(4), 3),
        (Graph::cycle(5), 3),
        (Graph::cycle(4), 2),
        (Graph::complete(4), 1),
        (Graph::complete_bipartite(1, 3), 2),
        (Graph::path(3).complement(), 1),
    ];
    for (g, expected) in cases {
        assert_eq!(minrank_real_closed_form(&g).value(), Some(expected));
        // signs along a spanning tree can be fixed by a ±1 diagonal similarity
        let edges = g.edges();
        let mut comp: Vec<usize> = (0..g.n()).collect();
        let mut tree = Vec::new();
        for &(u, v) in &edges {
            let (a, b) = (comp[u], comp[v]);
            if a != b {
                comp.iter_mut().filter(|c| **c == b).for_each(|c| *c = a);
                tree.push((u, v));
            }
        }
        assert_eq!(
            common::bounded_real_minrank(&g, 2, &tree),
            expected,
            "{}",
            g.to_graph6().unwrap()
        );
    }
}

#[test]
fn isomorphism_class_counts() {
    for (n, expected) in [(1, 1), (2, 2), (3, 4), (4, 11), (5, 34)] {
        assert_eq!(common::iso_class_count(n), expected);
        assert_eq!(
            enumerate_graphs_up_to_isomorphism(n).unwrap().len(),
            expected
        );
    }
}

#[test]
fn frozen_coefficients() {
    assert_eq!(
        binomial_basis_coeffs(&[1, 2], 3).unwrap().coeffs(),
        [2, 1, 2]
    );
    assert_eq!(binomial_basis_coeffs(&[1], 2).unwrap().coeffs(), [1, 1]);
    assert_eq!(fermat_basis_coeffs(1, 2).unwrap().coeffs(), [0, 1]);
    assert_eq!(fermat_basis_coeffs(0, 2).unwrap().coeffs(), [1, 1]);
    for p in [2i64, 3, 5, 7] {
        for mask in 1u32..1 << p {
            let r: Vec<u64> = (0..p as u64).filter(|&x| mask >> x & 1 == 1).collect();
            let f = |x: u64| {
                r.iter()
                    .fold(1i64, |acc, &ri| acc * (x as i64 - ri as i64))
                    .rem_euclid(p)
            };
            let lib = binomial_basis_coeffs(&r, p as u64).unwrap();
            let oracle: Vec<u64> = common::basis_coeffs(f, r.len(), p)
                .iter()
                .map(|&a| a as u64)
                .collect();
            assert_eq!(lib.coeffs(), &oracle[..], "p={p} R={r:?}");
        }
    }
}
