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

//! Brute-force reference implementations.
//!
//! Everything here works on a plain `(n, edge list)` description and uses
//! adjacency matrices and exhaustive loops, so it shares no code path with
//! the optimized kernels it is used to check. Only meant for small graphs.

#![allow(clippy::needless_range_loop)]

use std::collections::{BTreeMap, HashSet};

pub type Edges = [(u32, u32)];

pub fn adjacency(n: usize, edges: &Edges) -> Vec<Vec<bool>> {
    let mut adj = vec![vec![false; n]; n];
    for &(u, v) in edges {
        if u != v {
            adj[u as usize][v as usize] = true;
            adj[v as usize][u as usize] = true;
        }
    }
    adj
}

/// Triangles through each listed edge, by scanning every third node.
pub fn triangles_per_edge(n: usize, edges: &Edges) -> Vec<usize> {
    let adj = adjacency(n, edges);
    edges
        .iter()
        .map(|&(u, v)| {
            (0..n)
                .filter(|&w| adj[u as usize][w] && adj[v as usize][w])
                .count()
        })
        .collect()
}

pub fn triangle_count(n: usize, edges: &Edges) -> usize {
    let adj = adjacency(n, edges);
    let mut t = 0;
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                if adj[a][b] && adj[b][c] && adj[a][c] {
                    t += 1;
                }
            }
        }
    }
    t
}

/// Membership of each listed edge in `H_k`: delete every edge with fewer
/// than `k - 2` live triangles, recount everything from scratch, repeat.
pub fn kdense_membership(n: usize, edges: &Edges, k: u32) -> Vec<bool> {
    let mut alive = vec![true; edges.len()];
    loop {
        let live: Vec<(u32, u32)> = edges
            .iter()
            .zip(&alive)
            .filter(|(_, &a)| a)
            .map(|(&e, _)| e)
            .collect();
        let adj = adjacency(n, &live);
        let mut changed = false;
        let mut next = alive.clone();
        for (i, &(u, v)) in edges.iter().enumerate() {
            if !alive[i] {
                continue;
            }
            let m = (0..n)
                .filter(|&w| adj[u as usize][w] && adj[v as usize][w])
                .count();
            if (m as i64) < k as i64 - 2 {
                next[i] = false;
                changed = true;
            }
        }
        alive = next;
        if !changed {
            return alive;
        }
    }
}

/// Edge k-dense-indices (largest `k` with the edge in `H_k`), each `H_k`
/// recomputed from the full graph.
pub fn kdense_edge_indices(n: usize, edges: &Edges) -> Vec<u32> {
    let mut index = vec![0u32; edges.len()];
    let mut k = 2;
    loop {
        let member = kdense_membership(n, edges, k);
        if !member.iter().any(|&m| m) {
            return index;
        }
        for (i, &m) in member.iter().enumerate() {
            if m {
                index[i] = k;
            }
        }
        k += 1;
    }
}

/// Node indices: max over incident edges, 2 for isolated nodes.
pub fn kdense_node_indices(n: usize, edges: &Edges, edge_index: &[u32]) -> Vec<u32> {
    let mut out = vec![2u32; n];
    for (&(u, v), &k) in edges.iter().zip(edge_index) {
        out[u as usize] = out[u as usize].max(k);
        out[v as usize] = out[v as usize].max(k);
    }
    out
}

/// Coreness by recomputing the k-core from scratch for every `k`.
pub fn coreness(n: usize, edges: &Edges) -> Vec<u32> {
    let adj = adjacency(n, edges);
    let mut out = vec![0u32; n];
    for k in 1..=n {
        let mut present = vec![true; n];
        loop {
            let mut changed = false;
            for v in 0..n {
                if present[v] && (0..n).filter(|&w| present[w] && adj[v][w]).count() < k {
                    present[v] = false;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        if !present.iter().any(|&p| p) {
            break;
        }
        for v in 0..n {
            if present[v] {
                out[v] = k as u32;
            }
        }
    }
    out
}

const INF: usize = usize::MAX / 4;

pub fn floyd_warshall(n: usize, edges: &Edges) -> Vec<Vec<usize>> {
    let adj = adjacency(n, edges);
    let mut d = vec![vec![INF; n]; n];
    for i in 0..n {
        d[i][i] = 0;
        for j in 0..n {
            if adj[i][j] {
                d[i][j] = 1;
            }
        }
    }
    for m in 0..n {
        for i in 0..n {
            for j in 0..n {
                if d[i][m] + d[m][j] < d[i][j] {
                    d[i][j] = d[i][m] + d[m][j];
                }
            }
        }
    }
    d
}

pub fn path_histogram(n: usize, edges: &Edges) -> BTreeMap<usize, u64> {
    let d = floyd_warshall(n, edges);
    let mut h = BTreeMap::new();
    for i in 0..n {
        for j in i + 1..n {
            if d[i][j] < INF {
                *h.entry(d[i][j]).or_insert(0) += 1;
            }
        }
    }
    h
}

/// Number of shortest paths between every ordered pair, counted layer by
/// layer over the distance matrix.
pub fn shortest_path_counts(n: usize, edges: &Edges) -> (Vec<Vec<usize>>, Vec<Vec<f64>>) {
    let adj = adjacency(n, edges);
    let d = floyd_warshall(n, edges);
    let mut sigma = vec![vec![0.0; n]; n];
    for s in 0..n {
        let mut order: Vec<usize> = (0..n).filter(|&t| d[s][t] < INF).collect();
        order.sort_by_key(|&t| d[s][t]);
        for &t in &order {
            sigma[s][t] = if t == s {
                1.0
            } else {
                (0..n)
                    .filter(|&u| adj[u][t] && d[s][u] < INF && d[s][u] + 1 == d[s][t])
                    .map(|u| sigma[s][u])
                    .sum()
            };
        }
    }
    (d, sigma)
}

/// Betweenness from pair dependencies: for every unordered pair `{s, t}`,
/// each intermediate `v` on a shortest path gets `sigma_sv sigma_vt / sigma_st`.
pub fn betweenness(n: usize, edges: &Edges) -> Vec<f64> {
    let (d, sigma) = shortest_path_counts(n, edges);
    let mut out = vec![0.0; n];
    for s in 0..n {
        for t in s + 1..n {
            if d[s][t] >= INF {
                continue;
            }
            for v in 0..n {
                if v != s
                    && v != t
                    && d[s][v] < INF
                    && d[v][t] < INF
                    && d[s][v] + d[v][t] == d[s][t]
                {
                    out[v] += sigma[s][v] * sigma[v][t] / sigma[s][t];
                }
            }
        }
    }
    out
}

pub fn clustering(n: usize, edges: &Edges, v: usize) -> f64 {
    let adj = adjacency(n, edges);
    let nbrs: Vec<usize> = (0..n).filter(|&w| adj[v][w]).collect();
    if nbrs.len() < 2 {
        return 0.0;
    }
    let mut links = 0;
    for (i, &a) in nbrs.iter().enumerate() {
        for &b in &nbrs[i + 1..] {
            if adj[a][b] {
                links += 1;
            }
        }
    }
    links as f64 / (nbrs.len() * (nbrs.len() - 1) / 2) as f64
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

fn induced_connected(adj: &[Vec<bool>], nodes: &[usize]) -> bool {
    let mut reached = vec![false; nodes.len()];
    reached[0] = true;
    let mut stack = vec![0];
    while let Some(i) = stack.pop() {
        for j in 0..nodes.len() {
            if !reached[j] && adj[nodes[i]][nodes[j]] {
                reached[j] = true;
                stack.push(j);
            }
        }
    }
    reached.iter().all(|&r| r)
}

/// Induced connected subgraph counts on every `size`-subset of nodes, keyed
/// by class name (`path3`, `triangle`, `path4`, `star4`, `cycle4`, `paw`,
/// `diamond`, `clique4`).
pub fn motif_census(n: usize, edges: &Edges, size: usize) -> BTreeMap<&'static str, u64> {
    let adj = adjacency(n, edges);
    let mut out = BTreeMap::new();
    let names: &[&str] = if size == 3 {
        &["path3", "triangle"]
    } else {
        &["path4", "star4", "cycle4", "paw", "diamond", "clique4"]
    };
    for name in names {
        out.insert(*name, 0);
    }
    for nodes in combinations(n, size) {
        if !induced_connected(&adj, &nodes) {
            continue;
        }
        let mut deg = vec![0; size];
        let mut m = 0;
        for i in 0..size {
            for j in i + 1..size {
                if adj[nodes[i]][nodes[j]] {
                    m += 1;
                    deg[i] += 1;
                    deg[j] += 1;
                }
            }
        }
        deg.sort_unstable();
        let name = match (size, m, deg.as_slice()) {
            (3, 2, _) => "path3",
            (3, 3, _) => "triangle",
            (4, 3, [1, 1, 1, 3]) => "star4",
            (4, 3, [1, 1, 2, 2]) => "path4",
            (4, 4, [2, 2, 2, 2]) => "cycle4",
            (4, 4, [1, 2, 2, 3]) => "paw",
            (4, 5, _) => "diamond",
            (4, 6, _) => "clique4",
            other => panic!("unexpected connected subgraph {other:?}"),
        };
        *out.get_mut(name).unwrap() += 1;
    }
    out
}

/// Reflexive transitive closure of a directed graph (Warshall).
pub fn transitive_closure(n: usize, arcs: &Edges) -> Vec<Vec<bool>> {
    let mut r = vec![vec![false; n]; n];
    for (i, row) in r.iter_mut().enumerate() {
        row[i] = true;
    }
    for &(a, b) in arcs {
        r[a as usize][b as usize] = true;
    }
    for m in 0..n {
        for i in 0..n {
            if r[i][m] {
                for j in 0..n {
                    if r[m][j] {
                        r[i][j] = true;
                    }
                }
            }
        }
    }
    r
}

/// Every non-increasing degree sequence realized by some simple graph on
/// `n` nodes, found by enumerating all `2^(n(n-1)/2)` graphs.
pub fn realizable_sequences(n: usize) -> HashSet<Vec<usize>> {
    assert!(n <= 7, "exhaustive enumeration is limited to small n");
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect();
    let mut out = HashSet::new();
    for mask in 0u64..(1u64 << pairs.len()) {
        let mut deg = vec![0usize; n];
        for (b, &(i, j)) in pairs.iter().enumerate() {
            if mask >> b & 1 == 1 {
                deg[i] += 1;
                deg[j] += 1;
            }
        }
        deg.sort_unstable_by(|a, b| b.cmp(a));
        out.insert(deg);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k4_oracles() {
        let k4: Vec<(u32, u32)> = vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
        assert_eq!(kdense_edge_indices(4, &k4), vec![4; 6]);
        assert_eq!(coreness(4, &k4), vec![3; 4]);
        assert_eq!(triangle_count(4, &k4), 4);
        assert_eq!(motif_census(4, &k4, 4)["clique4"], 1);
        assert_eq!(betweenness(4, &k4), vec![0.0; 4]);
    }

    #[test]
    fn cycle_betweenness_splits_paths() {
        let c4: Vec<(u32, u32)> = vec![(0, 1), (1, 2), (2, 3), (3, 0)];
        assert_eq!(betweenness(4, &c4), vec![0.5; 4]);
    }

    #[test]
    fn small_realizable_sets() {
        let r3 = realizable_sequences(3);
        assert!(r3.contains(&vec![2, 2, 2]));
        assert!(r3.contains(&vec![2, 1, 1]));
        assert!(!r3.contains(&vec![2, 2, 0]));
        assert_eq!(r3.len(), 4);
    }
}
