// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

mod common;

use std::collections::BTreeSet;

use common::arb_graph;
use kdense::graph::load_edge_list;
use kdense::Graph;
use kdense_oracles as oracle;
use proptest::prelude::*;

fn label_edges(g: &Graph) -> BTreeSet<(String, String)> {
    g.edges()
        .iter()
        .map(|&(u, v)| {
            let (a, b) = (g.label(u).to_string(), g.label(v).to_string());
            if a < b {
                (a, b)
            } else {
                (b, a)
            }
        })
        .collect()
}

proptest! {
    #[test]
    fn multiplicity_counts_triangles(g in arb_graph(1, 12)) {
        let expected = oracle::triangles_per_edge(g.node_count(), g.edges());
        for (&(u, v), &t) in g.edges().iter().zip(&expected) {
            prop_assert_eq!(g.edge_multiplicity(u, v).unwrap(), t);
            prop_assert_eq!(g.common_neighbors(u, v).unwrap().len(), t);
        }
    }

    #[test]
    fn multiplicity_sum_is_three_triangles(g in arb_graph(1, 30)) {
        let sum: usize = g.edges().iter().map(|&(u, v)| g.edge_multiplicity(u, v).unwrap()).sum();
        prop_assert_eq!(sum, 3 * oracle::triangle_count(g.node_count(), g.edges()));
    }

    #[test]
    fn canonical_writer_round_trips(g in arb_graph(2, 30)) {
        prop_assume!(g.edge_count() > 0);
        let mut text = Vec::new();
        g.write_edge_list(&mut text).unwrap();
        let (h, meta) = load_edge_list(text.as_slice(), None).unwrap();
        prop_assert_eq!(meta.link_count, g.edge_count());
        prop_assert_eq!(label_edges(&h), label_edges(&g));
        let mut again = Vec::new();
        h.write_edge_list(&mut again).unwrap();
        prop_assert_eq!(again, text);
    }

    #[test]
    fn density_matches_average_degree(g in arb_graph(2, 40)) {
        let d = g.density().unwrap();
        let k = g.average_degree().unwrap();
        prop_assert!((d - k / (g.node_count() - 1) as f64).abs() < 1e-12);
    }

    #[test]
    fn induced_subgraph_keeps_exactly_the_given_edges(g in arb_graph(2, 20), mask in any::<u64>()) {
        let keep: Vec<(u32, u32)> = g
            .edges()
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> (i % 64) & 1 == 1)
            .map(|(_, &e)| e)
            .collect();
        let h = g.induced_subgraph(&keep).unwrap();
        prop_assert_eq!(h.edge_count(), keep.len());
        for &(u, v) in h.edges() {
            let (a, b) = (g.node(h.label(u)).unwrap(), g.node(h.label(v)).unwrap());
            prop_assert!(keep.contains(&(a.min(b), a.max(b))));
        }
    }
}
