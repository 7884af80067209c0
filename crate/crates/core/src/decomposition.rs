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

//! k-dense and k-core decompositions.
//!
//! `H_k` is the maximal subgraph in which every edge sits in at least `k - 2`
//! triangles of `H_k` itself. The decomposition walks `k = 2, 3, ...`, deriving
//! each `H_{k+1}` by pruning inside `H_k`. Pruning is a worklist over edges
//! whose multiplicity fell below the threshold; removing an edge decrements
//! the multiplicity of the two other edges of every live triangle through it.

use std::collections::VecDeque;
use std::io::Write;

use crate::graph::{for_each_common, Graph};
use crate::{EdgeId, Error, NodeId, Result};

/// Per-edge and per-node k-dense-indices of one graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DenseDecomposition {
    edge_index: Vec<u32>,
    node_index: Vec<u32>,
    k_min: u32,
    k_max: u32,
}

impl DenseDecomposition {
    pub fn edge_index(&self, e: EdgeId) -> u32 {
        self.edge_index[e as usize]
    }

    pub fn node_index(&self, v: NodeId) -> u32 {
        self.node_index[v as usize]
    }

    pub fn edge_indices(&self) -> &[u32] {
        &self.edge_index
    }

    pub fn node_indices(&self) -> &[u32] {
        &self.node_index
    }

    /// Base level of the hierarchy. Always 2: every edge belongs to `H_2`.
    pub fn k_min(&self) -> u32 {
        self.k_min
    }

    pub fn k_max(&self) -> u32 {
        self.k_max
    }

    pub fn node_count(&self) -> usize {
        self.node_index.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_index.len()
    }

    fn check_range(&self, k: u32) -> Result<()> {
        if k < self.k_min || k > self.k_max {
            return Err(Error::domain(format!(
                "k = {k} outside [{}, {}]",
                self.k_min, self.k_max
            )));
        }
        Ok(())
    }

    /// Edges with index exactly `k`.
    pub fn shell(&self, k: u32) -> Result<Vec<EdgeId>> {
        self.check_range(k)?;
        Ok(positions_equal(&self.edge_index, k))
    }

    /// Nodes with index exactly `k`.
    pub fn set(&self, k: u32) -> Result<Vec<NodeId>> {
        self.check_range(k)?;
        Ok(positions_equal(&self.node_index, k))
    }

    /// Edges of `H_k`, i.e. with index `>= k`.
    pub fn subgraph_edges(&self, k: u32) -> Vec<EdgeId> {
        (0..self.edge_index.len() as EdgeId)
            .filter(|&e| self.edge_index[e as usize] >= k)
            .collect()
    }

    /// `(k, |shell k|)` for every non-empty shell, ascending.
    pub fn shell_sizes(&self) -> Vec<(u32, usize)> {
        histogram(&self.edge_index, self.k_max)
    }

    /// `(k, |set k|)` for every non-empty set, ascending.
    pub fn set_sizes(&self) -> Vec<(u32, usize)> {
        histogram(&self.node_index, self.k_max)
    }
}

fn positions_equal(values: &[u32], k: u32) -> Vec<u32> {
    values
        .iter()
        .enumerate()
        .filter(|(_, &x)| x == k)
        .map(|(i, _)| i as u32)
        .collect()
}

fn histogram(values: &[u32], k_max: u32) -> Vec<(u32, usize)> {
    let mut counts = vec![0usize; k_max as usize + 1];
    for &x in values {
        counts[x as usize] += 1;
    }
    counts
        .into_iter()
        .enumerate()
        .filter(|&(_, c)| c > 0)
        .map(|(k, c)| (k as u32, c))
        .collect()
}

struct Pruner<'g> {
    graph: &'g Graph,
    alive: Vec<bool>,
    queued: Vec<bool>,
    multiplicity: Vec<u32>,
    alive_count: usize,
}

impl<'g> Pruner<'g> {
    fn new(graph: &'g Graph) -> Self {
        let multiplicity = graph
            .edges()
            .iter()
            .map(|&(u, v)| {
                crate::graph::count_common(graph.neighbors(u), graph.neighbors(v)) as u32
            })
            .collect();
        Pruner {
            graph,
            alive: vec![true; graph.edge_count()],
            queued: vec![false; graph.edge_count()],
            multiplicity,
            alive_count: graph.edge_count(),
        }
    }

    /// Removes live edges until every survivor has live multiplicity
    /// `>= threshold`. `on_remove` sees each removed edge once.
    fn prune<F: FnMut(EdgeId)>(&mut self, threshold: u32, mut on_remove: F) {
        let Pruner {
            graph,
            alive,
            queued,
            multiplicity,
            alive_count,
        } = self;
        let mut queue: VecDeque<EdgeId> = VecDeque::new();
        for e in 0..alive.len() {
            if alive[e] && multiplicity[e] < threshold {
                queued[e] = true;
                queue.push_back(e as EdgeId);
            }
        }
        while let Some(e) = queue.pop_front() {
            alive[e as usize] = false;
            *alive_count -= 1;
            on_remove(e);
            let (u, v) = graph.edge(e);
            let (eu, ev) = (graph.incident_edges(u), graph.incident_edges(v));
            for_each_common(graph.neighbors(u), graph.neighbors(v), |i, j, _| {
                let (a, b) = (eu[i] as usize, ev[j] as usize);
                if !(alive[a] && alive[b]) {
                    return;
                }
                for x in [a, b] {
                    multiplicity[x] -= 1;
                    if multiplicity[x] < threshold && !queued[x] {
                        queued[x] = true;
                        queue.push_back(x as EdgeId);
                    }
                }
            });
        }
    }

    fn alive_edges(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.alive
            .iter()
            .enumerate()
            .filter(|(_, &a)| a)
            .map(|(e, _)| e as EdgeId)
    }
}

/// `H_k` as a standalone graph (isolated nodes dropped, labels kept).
pub fn k_dense_subgraph(g: &Graph, k: u32) -> Result<Graph> {
    if k < 2 {
        return Err(Error::domain(format!(
            "k-dense subgraph needs k >= 2, got {k}"
        )));
    }
    let mut pruner = Pruner::new(g);
    pruner.prune(k - 2, |_| {});
    Ok(g.edge_subgraph(pruner.alive_edges()))
}

/// Full k-dense decomposition. Isolated nodes get index 2.
pub fn k_dense_decomposition(g: &Graph) -> Result<DenseDecomposition> {
    if g.edge_count() == 0 {
        return Err(Error::domain(
            "k-dense decomposition of a graph without edges",
        ));
    }
    let mut edge_index = vec![0u32; g.edge_count()];
    let mut pruner = Pruner::new(g);
    // Invariant at the top of the loop: live edges are exactly H_k.
    let mut k = 2u32;
    loop {
        pruner.prune(k - 1, |e| edge_index[e as usize] = k);
        if pruner.alive_count == 0 {
            break;
        }
        k += 1;
    }
    let mut node_index = vec![2u32; g.node_count()];
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        let idx = edge_index[e];
        node_index[u as usize] = node_index[u as usize].max(idx);
        node_index[v as usize] = node_index[v as usize].max(idx);
    }
    Ok(DenseDecomposition {
        edge_index,
        node_index,
        k_min: 2,
        k_max: k,
    })
}

/// `H_kmax` as a standalone graph, with `k_max`.
pub fn extract_kmax_core(g: &Graph) -> Result<(Graph, u32)> {
    let d = k_dense_decomposition(g)?;
    if d.k_max() <= 2 {
        return Err(Error::DegenerateCore);
    }
    Ok((g.edge_subgraph(d.subgraph_edges(d.k_max())), d.k_max()))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoreDecomposition {
    coreness: Vec<u32>,
}

impl CoreDecomposition {
    pub fn coreness(&self, v: NodeId) -> u32 {
        self.coreness[v as usize]
    }

    pub fn values(&self) -> &[u32] {
        &self.coreness
    }

    pub fn max_core(&self) -> u32 {
        self.coreness.iter().copied().max().unwrap_or(0)
    }
}

/// Coreness of every node by bucketed minimum-degree peeling.
pub fn k_core_decomposition(g: &Graph) -> CoreDecomposition {
    let n = g.node_count();
    let mut degree: Vec<usize> = g.degrees();
    let max_degree = degree.iter().copied().max().unwrap_or(0);

    // bin_start[d]: first position in `order` of nodes with current degree d.
    let mut bin_start = vec![0usize; max_degree + 2];
    for &d in &degree {
        bin_start[d + 1] += 1;
    }
    for d in 1..bin_start.len() {
        bin_start[d] += bin_start[d - 1];
    }
    let mut order = vec![0 as NodeId; n];
    let mut pos = vec![0usize; n];
    let mut fill = bin_start.clone();
    for v in 0..n {
        pos[v] = fill[degree[v]];
        order[pos[v]] = v as NodeId;
        fill[degree[v]] += 1;
    }

    for i in 0..n {
        let v = order[i];
        for &w in g.neighbors(v) {
            let w = w as usize;
            if degree[w] > degree[v as usize] {
                let dw = degree[w];
                let first = bin_start[dw];
                let other = order[first];
                if other as usize != w {
                    order.swap(first, pos[w]);
                    pos[other as usize] = pos[w];
                    pos[w] = first;
                }
                bin_start[dw] += 1;
                degree[w] -= 1;
            }
        }
    }
    CoreDecomposition {
        coreness: degree.into_iter().map(|d| d as u32).collect(),
    }
}

/// Writes `node_token,k_dense_index,coreness` rows in node id order.
pub fn write_node_csv<W: Write>(
    g: &Graph,
    dense: &DenseDecomposition,
    cores: &CoreDecomposition,
    mut out: W,
) -> std::io::Result<()> {
    writeln!(out, "node_token,k_dense_index,coreness")?;
    for v in g.nodes() {
        writeln!(
            out,
            "{},{},{}",
            g.label(v),
            dense.node_index(v),
            cores.coreness(v)
        )?;
    }
    Ok(())
}

/// Writes `node_token_u,node_token_v,k_dense_index` rows in edge id order.
pub fn write_edge_csv<W: Write>(
    g: &Graph,
    dense: &DenseDecomposition,
    mut out: W,
) -> std::io::Result<()> {
    writeln!(out, "node_token_u,node_token_v,k_dense_index")?;
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        writeln!(
            out,
            "{},{},{}",
            g.label(u),
            g.label(v),
            dense.edge_index(e as EdgeId)
        )?;
    }
    Ok(())
}
