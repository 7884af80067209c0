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

//! Immutable undirected simple graphs and edge-list ingestion.
//!
//! Nodes carry an external token (an AS number, usually) and a dense internal
//! id. Adjacency is stored in CSR form with every neighbor run sorted, so the
//! common-neighbor kernel behind edge multiplicity is a linear merge.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub type NodeId = u32;
pub type EdgeId = u32;

/// Orders external node tokens: numeric tokens first by value, then the rest
/// lexicographically.
pub fn token_cmp(a: &str, b: &str) -> Ordering {
    match (a.parse::<u64>(), b.parse::<u64>()) {
        (Ok(x), Ok(y)) => x.cmp(&y).then_with(|| a.cmp(b)),
        (Ok(_), Err(_)) => Ordering::Less,
        (Err(_), Ok(_)) => Ordering::Greater,
        (Err(_), Err(_)) => a.cmp(b),
    }
}

#[derive(Clone, Debug)]
pub struct Graph {
    offsets: Vec<usize>,
    neighbors: Vec<NodeId>,
    slot_edges: Vec<EdgeId>,
    edges: Vec<(NodeId, NodeId)>,
    labels: Vec<String>,
    index: HashMap<String, NodeId>,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.labels == other.labels && self.edges == other.edges
    }
}

impl Eq for Graph {}

impl Graph {
    /// Builds a graph over `labels.len()` nodes. Self-loops are dropped and
    /// duplicate or reversed pairs collapse to one edge.
    pub fn from_labeled_edges<I>(labels: Vec<String>, edges: I) -> Result<Graph>
    where
        I: IntoIterator<Item = (NodeId, NodeId)>,
    {
        let n = labels.len();
        let mut index = HashMap::with_capacity(n);
        for (i, label) in labels.iter().enumerate() {
            if index.insert(label.clone(), i as NodeId).is_some() {
                return Err(Error::domain(format!("duplicate node label {label:?}")));
            }
        }
        let mut canon = Vec::new();
        for (u, v) in edges {
            if u as usize >= n || v as usize >= n {
                return Err(Error::domain(format!(
                    "edge ({u}, {v}) references a node outside 0..{n}"
                )));
            }
            if u != v {
                canon.push((u.min(v), u.max(v)));
            }
        }
        canon.sort_unstable();
        canon.dedup();
        Ok(Self::build(labels, index, canon))
    }

    /// Graph on nodes labelled `"0"..n-1`.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Graph>
    where
        I: IntoIterator<Item = (NodeId, NodeId)>,
    {
        Self::from_labeled_edges((0..n).map(|i| i.to_string()).collect(), edges)
    }

    // `edges` must be sorted, deduplicated and oriented u < v.
    fn build(
        labels: Vec<String>,
        index: HashMap<String, NodeId>,
        edges: Vec<(NodeId, NodeId)>,
    ) -> Graph {
        let n = labels.len();
        let mut degree = vec![0usize; n];
        for &(u, v) in &edges {
            degree[u as usize] += 1;
            degree[v as usize] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        for d in &degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut fill = offsets[..n].to_vec();
        let mut neighbors = vec![0; 2 * edges.len()];
        let mut slot_edges = vec![0; 2 * edges.len()];
        // Edges are sorted by (u, v), so each node's run is filled in ascending
        // order: first the smaller neighbors (as v), then the larger (as u).
        // Both passes below keep that order.
        for (e, &(u, v)) in edges.iter().enumerate() {
            let slot = fill[v as usize];
            neighbors[slot] = u;
            slot_edges[slot] = e as EdgeId;
            fill[v as usize] += 1;
        }
        for (e, &(u, v)) in edges.iter().enumerate() {
            let slot = fill[u as usize];
            neighbors[slot] = v;
            slot_edges[slot] = e as EdgeId;
            fill[u as usize] += 1;
        }
        debug_assert!((0..n).all(|i| neighbors[offsets[i]..offsets[i + 1]]
            .windows(2)
            .all(|w| w[0] < w[1])));
        Graph {
            offsets,
            neighbors,
            slot_edges,
            edges,
            labels,
            index,
        }
    }

    pub fn complete(n: usize) -> Graph {
        let edges = (0..n as NodeId).flat_map(|u| (u + 1..n as NodeId).map(move |v| (u, v)));
        Self::from_edges(n, edges).expect("valid complete graph")
    }

    /// Star with node 0 at the center and `leaves` leaves.
    pub fn star(leaves: usize) -> Graph {
        Self::from_edges(leaves + 1, (1..=leaves as NodeId).map(|v| (0, v))).expect("valid star")
    }

    /// Path on `n` nodes.
    pub fn path(n: usize) -> Graph {
        Self::from_edges(n, (1..n as NodeId).map(|v| (v - 1, v))).expect("valid path")
    }

    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> {
        0..self.node_count() as NodeId
    }

    pub fn degree(&self, v: NodeId) -> usize {
        self.offsets[v as usize + 1] - self.offsets[v as usize]
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.nodes().map(|v| self.degree(v)).collect()
    }

    /// Sorted neighbors of `v`.
    pub fn neighbors(&self, v: NodeId) -> &[NodeId] {
        &self.neighbors[self.offsets[v as usize]..self.offsets[v as usize + 1]]
    }

    /// Edge ids parallel to [`Graph::neighbors`].
    pub fn incident_edges(&self, v: NodeId) -> &[EdgeId] {
        &self.slot_edges[self.offsets[v as usize]..self.offsets[v as usize + 1]]
    }

    /// All edges as `(u, v)` with `u < v`, indexed by [`EdgeId`].
    pub fn edges(&self) -> &[(NodeId, NodeId)] {
        &self.edges
    }

    pub fn edge(&self, e: EdgeId) -> (NodeId, NodeId) {
        self.edges[e as usize]
    }

    pub fn edge_id(&self, u: NodeId, v: NodeId) -> Option<EdgeId> {
        if u as usize >= self.node_count() || v as usize >= self.node_count() {
            return None;
        }
        let (a, b) = if self.degree(u) <= self.degree(v) {
            (u, v)
        } else {
            (v, u)
        };
        self.neighbors(a)
            .binary_search(&b)
            .ok()
            .map(|pos| self.incident_edges(a)[pos])
    }

    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        self.edge_id(u, v).is_some()
    }

    pub fn label(&self, v: NodeId) -> &str {
        &self.labels[v as usize]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn node(&self, token: &str) -> Option<NodeId> {
        self.index.get(token).copied()
    }

    fn check_node(&self, v: NodeId) -> Result<()> {
        if (v as usize) < self.node_count() {
            Ok(())
        } else {
            Err(Error::domain(format!("unknown node id {v}")))
        }
    }

    /// Exact intersection of the neighbor sets of `u` and `v`.
    pub fn common_neighbors(&self, u: NodeId, v: NodeId) -> Result<Vec<NodeId>> {
        self.check_node(u)?;
        self.check_node(v)?;
        let mut out = Vec::new();
        for_each_common(self.neighbors(u), self.neighbors(v), |_, _, w| out.push(w));
        Ok(out)
    }

    /// Number of triangles containing the edge `(u, v)`.
    pub fn edge_multiplicity(&self, u: NodeId, v: NodeId) -> Result<usize> {
        self.check_node(u)?;
        self.check_node(v)?;
        if !self.has_edge(u, v) {
            return Err(Error::domain(format!(
                "({}, {}) is not an edge",
                self.label(u),
                self.label(v)
            )));
        }
        Ok(count_common(self.neighbors(u), self.neighbors(v)))
    }

    /// `2M / (N (N - 1))`.
    pub fn density(&self) -> Result<f64> {
        density_of(self.node_count(), self.edge_count())
    }

    /// `2M / N`.
    pub fn average_degree(&self) -> Result<f64> {
        average_degree_of(self.node_count(), self.edge_count())
    }

    /// Subgraph made of exactly the `keep` edges and their endpoints. Labels
    /// are preserved; internal ids are compacted in their original order.
    pub fn induced_subgraph(&self, keep: &[(NodeId, NodeId)]) -> Result<Graph> {
        let mut ids = Vec::with_capacity(keep.len());
        for &(u, v) in keep {
            match self.edge_id(u, v) {
                Some(e) => ids.push(e),
                None => return Err(Error::domain(format!("({u}, {v}) is not an edge"))),
            }
        }
        Ok(self.edge_subgraph(ids))
    }

    /// Like [`Graph::induced_subgraph`], addressed by edge id.
    pub fn edge_subgraph<I: IntoIterator<Item = EdgeId>>(&self, ids: I) -> Graph {
        let mut keep_edge = vec![false; self.edge_count()];
        for e in ids {
            keep_edge[e as usize] = true;
        }
        let mut keep_node = vec![false; self.node_count()];
        for (e, &(u, v)) in self.edges.iter().enumerate() {
            if keep_edge[e] {
                keep_node[u as usize] = true;
                keep_node[v as usize] = true;
            }
        }
        let mut remap = vec![NodeId::MAX; self.node_count()];
        let mut labels = Vec::new();
        let mut index = HashMap::new();
        for v in 0..self.node_count() {
            if keep_node[v] {
                remap[v] = labels.len() as NodeId;
                index.insert(self.labels[v].clone(), labels.len() as NodeId);
                labels.push(self.labels[v].clone());
            }
        }
        // Remapping is monotone, so the filtered edge list stays sorted.
        let edges = self
            .edges
            .iter()
            .enumerate()
            .filter(|(e, _)| keep_edge[*e])
            .map(|(_, &(u, v))| (remap[u as usize], remap[v as usize]))
            .collect();
        Self::build(labels, index, edges)
    }

    /// Canonical edge list: one `"u v"` line per edge with `u < v` in token
    /// order, lines sorted.
    pub fn write_edge_list<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        let mut pairs: Vec<(&str, &str)> = self
            .edges
            .iter()
            .map(|&(u, v)| {
                let (a, b) = (self.label(u), self.label(v));
                if token_cmp(a, b) == Ordering::Greater {
                    (b, a)
                } else {
                    (a, b)
                }
            })
            .collect();
        pairs.sort_by(|x, y| token_cmp(x.0, y.0).then_with(|| token_cmp(x.1, y.1)));
        for (a, b) in pairs {
            writeln!(out, "{a} {b}")?;
        }
        Ok(())
    }
}

/// `2M / (N (N - 1))` from raw counts.
pub fn density_of(nodes: usize, links: usize) -> Result<f64> {
    if nodes < 2 {
        return Err(Error::domain(format!(
            "density needs at least 2 nodes, got {nodes}"
        )));
    }
    Ok(2.0 * links as f64 / (nodes as f64 * (nodes as f64 - 1.0)))
}

/// `2M / N` from raw counts.
pub fn average_degree_of(nodes: usize, links: usize) -> Result<f64> {
    if nodes == 0 {
        return Err(Error::domain("average degree of an empty graph"));
    }
    Ok(2.0 * links as f64 / nodes as f64)
}

pub const FIT_SLOPE: f64 = 1.3;
pub const FIT_OFFSET: f64 = 7.5;

/// Logarithmic growth law of the average degree, `a ln(n) - b`.
pub fn average_degree_fit(n: usize, a: f64, b: f64) -> f64 {
    a * (n as f64).ln() - b
}

/// Calls `f(i, j, w)` for every `w` present in both sorted slices, with `i`
/// and `j` its positions in `a` and `b`.
pub(crate) fn for_each_common<F: FnMut(usize, usize, NodeId)>(
    a: &[NodeId],
    b: &[NodeId],
    mut f: F,
) {
    // Gallop through the longer run when the sizes are lopsided (hub vs leaf).
    let (short, long, swapped) = if a.len() <= b.len() {
        (a, b, false)
    } else {
        (b, a, true)
    };
    if short.is_empty() {
        return;
    }
    if long.len() / short.len() >= 16 {
        let mut lo = 0;
        for (i, &w) in short.iter().enumerate() {
            match long[lo..].binary_search(&w) {
                Ok(p) => {
                    let j = lo + p;
                    if swapped {
                        f(j, i, w)
                    } else {
                        f(i, j, w)
                    }
                    lo = j + 1;
                }
                Err(p) => lo += p,
            }
            if lo >= long.len() {
                break;
            }
        }
        return;
    }
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            Ordering::Less => i += 1,
            Ordering::Greater => j += 1,
            Ordering::Equal => {
                f(i, j, a[i]);
                i += 1;
                j += 1;
            }
        }
    }
}

pub(crate) fn count_common(a: &[NodeId], b: &[NodeId]) -> usize {
    let mut n = 0;
    for_each_common(a, b, |_, _, _| n += 1);
    n
}

/// Counters describing how raw input lines were canonicalized.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LoadDiagnostics {
    pub records: usize,
    pub self_loops_dropped: usize,
    pub duplicates_collapsed: usize,
    pub filtered_by_cutoff: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SnapshotMeta {
    pub snapshot_id: String,
    pub node_count: usize,
    pub link_count: usize,
    pub cutoff: Option<i64>,
    pub diagnostics: LoadDiagnostics,
}

/// Parses a whitespace-separated edge list (`nodeA nodeB [last_seen]`).
///
/// With a cutoff, records whose `last_seen` is older than the cutoff are
/// discarded; records without a timestamp are always kept. Nodes that only
/// appear on discarded records are absent from the result. Internal ids follow
/// [`token_cmp`] order.
pub fn load_edge_list<R: BufRead>(source: R, cutoff: Option<i64>) -> Result<(Graph, SnapshotMeta)> {
    let mut diag = LoadDiagnostics::default();
    let mut raw: Vec<(String, String)> = Vec::new();
    for (lineno, line) in source.lines().enumerate() {
        let line = line?;
        let content = line.split('#').next().unwrap_or("");
        let tokens: Vec<&str> = content.split_whitespace().collect();
        if tokens.is_empty() {
            continue;
        }
        if tokens.len() != 2 && tokens.len() != 3 {
            return Err(Error::parse(
                lineno + 1,
                format!("expected 2 or 3 fields, found {}", tokens.len()),
            ));
        }
        diag.records += 1;
        if tokens.len() == 3 {
            let seen: i64 = tokens[2].parse().map_err(|_| {
                Error::parse(lineno + 1, format!("non-numeric timestamp {:?}", tokens[2]))
            })?;
            if cutoff.is_some_and(|c| seen < c) {
                diag.filtered_by_cutoff += 1;
                continue;
            }
        }
        if tokens[0] == tokens[1] {
            diag.self_loops_dropped += 1;
            continue;
        }
        raw.push((tokens[0].to_string(), tokens[1].to_string()));
    }
    if raw.is_empty() {
        return Err(Error::EmptyGraph);
    }

    let mut labels: Vec<String> = raw
        .iter()
        .flat_map(|(a, b)| [a.clone(), b.clone()])
        .collect();
    labels.sort_by(|a, b| token_cmp(a, b));
    labels.dedup();
    let index: HashMap<String, NodeId> = labels
        .iter()
        .enumerate()
        .map(|(i, l)| (l.clone(), i as NodeId))
        .collect();
    let pairs: Vec<(NodeId, NodeId)> = raw.iter().map(|(a, b)| (index[a], index[b])).collect();
    let total = pairs.len();
    let graph = Graph::from_labeled_edges(labels, pairs)?;
    diag.duplicates_collapsed = total - graph.edge_count();

    let meta = SnapshotMeta {
        snapshot_id: String::new(),
        node_count: graph.node_count(),
        link_count: graph.edge_count(),
        cutoff,
        diagnostics: diag,
    };
    Ok((graph, meta))
}
