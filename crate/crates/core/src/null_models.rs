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

//! dK-series null models.
//!
//! - 0K: uniform `G(N, M)`.
//! - 1K: deterministic Havel–Hakimi realization of a degree sequence, then
//!   degree-preserving double edge swaps.
//! - 2K: rewiring of a template graph with swaps that only exchange endpoints
//!   of equal degree, which keeps the joint degree matrix fixed.
//!
//! Every generator takes a `u64` seed and draws from a ChaCha8 stream seeded
//! with it. Ensembles seed instance `i` with `seed + i`.

use std::collections::{BTreeMap, HashSet};

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::{Error, Graph, NodeId, Result};

pub const DEFAULT_SWAP_FACTOR: f64 = 10.0;
pub const DEFAULT_INSTANCES: usize = 10;

/// Rejected proposals are bounded by this multiple of the accepted-swap target.
const PROPOSAL_BUDGET_FACTOR: f64 = 100.0;

pub fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Non-increasing degree sequence.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DegreeSequence(Vec<usize>);

impl DegreeSequence {
    pub fn new(mut degrees: Vec<usize>) -> Self {
        degrees.sort_unstable_by(|a, b| b.cmp(a));
        DegreeSequence(degrees)
    }

    pub fn from_graph(g: &Graph) -> Self {
        Self::new(g.degrees())
    }

    pub fn degrees(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn sum(&self) -> usize {
        self.0.iter().sum()
    }
}

/// Erdős–Gallai test.
pub fn is_graphical(s: &DegreeSequence) -> bool {
    let d = s.degrees();
    let n = d.len();
    if s.sum() % 2 == 1 {
        return false;
    }
    if d.first().is_some_and(|&max| max >= n.max(1)) {
        return false;
    }
    // suffix_min_sum[k] = sum_{i >= k} min(d_i, k), evaluated lazily with a
    // pointer to the first index whose degree drops below k.
    let mut prefix = 0usize;
    let mut tail_start = n; // first index i with d[i] < k+1, searched per k
    let suffix_sum: Vec<usize> = {
        let mut acc = vec![0usize; n + 1];
        for i in (0..n).rev() {
            acc[i] = acc[i + 1] + d[i];
        }
        acc
    };
    for k in 1..=n {
        prefix += d[k - 1];
        // Indices i >= k with d[i] >= k contribute k, the rest contribute d[i].
        // d is non-increasing, so those with d[i] >= k form a prefix of the tail.
        while tail_start > 0 && d[tail_start - 1] < k {
            tail_start -= 1;
        }
        let split = tail_start.max(k);
        let rhs = k * (k - 1) + k * (split - k) + suffix_sum[split];
        if prefix > rhs {
            return false;
        }
    }
    true
}

/// Uniform simple graph with exactly `n` nodes and `m` edges.
pub fn generate_0k(n: usize, m: usize, seed: u64) -> Result<Graph> {
    let pairs = n as u64 * (n as u64).saturating_sub(1) / 2;
    if m as u64 > pairs {
        return Err(Error::domain(format!(
            "{m} edges do not fit on {n} nodes (at most {pairs})"
        )));
    }
    let mut rng = rng_for(seed);
    let picked = index::sample(&mut rng, pairs as usize, m);
    let edges = picked
        .into_iter()
        .map(|p| pair_from_index(n as u64, p as u64));
    Graph::from_edges(n, edges)
}

/// Inverse of the row-major enumeration of `{(i, j) : 0 <= i < j < n}`.
fn pair_from_index(n: u64, p: u64) -> (NodeId, NodeId) {
    // Row i starts at offset i*n - i*(i+1)/2. Estimate i in floating point,
    // then correct by at most a step either way.
    let row_start = |i: u64| i * n - i * (i + 1) / 2;
    let nf = n as f64;
    let disc = (2.0 * nf - 1.0).powi(2) - 8.0 * p as f64;
    let mut i = (((2.0 * nf - 1.0) - disc.max(0.0).sqrt()) / 2.0).floor() as u64;
    i = i.min(n.saturating_sub(2));
    while i > 0 && row_start(i) > p {
        i -= 1;
    }
    while i + 1 < n && row_start(i + 1) <= p {
        i += 1;
    }
    let j = p - row_start(i) + i + 1;
    (i as NodeId, j as NodeId)
}

/// Havel–Hakimi realization: repeatedly connect a node of largest residual
/// degree to the nodes with the next-largest residual degrees.
pub fn havel_hakimi(s: &DegreeSequence) -> Result<Graph> {
    if !is_graphical(s) {
        return Err(Error::domain("degree sequence is not graphical"));
    }
    let n = s.len();
    let mut residual: Vec<usize> = s.degrees().to_vec();
    let max_degree = residual.first().copied().unwrap_or(0);

    // Nodes sorted ascending by residual degree; bin_start[d] is where the
    // block of degree-d nodes begins. Decrementing a node swaps it to the
    // front of its block and shifts the boundary, as in core peeling.
    let mut order: Vec<usize> = (0..n).rev().collect();
    let mut pos: Vec<usize> = vec![0; n];
    for (p, &v) in order.iter().enumerate() {
        pos[v] = p;
    }
    let mut bin_start = vec![n; max_degree + 2];
    for (p, &v) in order.iter().enumerate().rev() {
        bin_start[residual[v]] = p;
    }
    for d in (0..=max_degree).rev() {
        bin_start[d] = bin_start[d].min(bin_start[d + 1]);
    }

    let mut edges = Vec::with_capacity(s.sum() / 2);
    let mut end = n;
    while end > 0 {
        let pivot = order[end - 1];
        let d = residual[pivot];
        if d == 0 {
            break;
        }
        end -= 1;
        if d > end {
            return Err(Error::domain("degree sequence is not graphical"));
        }
        let targets: Vec<usize> = order[end - d..end].to_vec();
        residual[pivot] = 0;
        for &t in &targets {
            let dt = residual[t];
            if dt == 0 {
                return Err(Error::domain("degree sequence is not graphical"));
            }
            let first = bin_start[dt];
            let other = order[first];
            order.swap(first, pos[t]);
            pos[other] = pos[t];
            pos[t] = first;
            bin_start[dt] += 1;
            residual[t] -= 1;
            edges.push((pivot as NodeId, t as NodeId));
        }
    }
    Graph::from_edges(n, edges)
}

/// 1K-random graph: Havel–Hakimi followed by `ceil(swap_factor * M)`
/// accepted double edge swaps.
pub fn generate_1k(s: &DegreeSequence, seed: u64, swap_factor: f64) -> Result<Graph> {
    check_swap_factor(swap_factor)?;
    let start = havel_hakimi(s)?;
    let mut rng = rng_for(seed);
    let mut edges = start.edges().to_vec();
    let mut present: HashSet<(NodeId, NodeId)> = edges.iter().copied().collect();
    let (target, budget) = swap_targets(edges.len(), swap_factor);
    let (mut accepted, mut proposed) = (0u64, 0u64);
    let m = edges.len();
    while m >= 2 && accepted < target && proposed < budget {
        proposed += 1;
        let i = rng.gen_range(0..m);
        let j = rng.gen_range(0..m);
        if i == j {
            continue;
        }
        let (a, b) = edges[i];
        let (mut c, mut d) = edges[j];
        if rng.gen::<bool>() {
            std::mem::swap(&mut c, &mut d);
        }
        // (a,b),(c,d) -> (a,d),(c,b)
        if a == d || c == b {
            continue;
        }
        let (e1, e2) = (ordered(a, d), ordered(c, b));
        if present.contains(&e1) || present.contains(&e2) {
            continue;
        }
        present.remove(&edges[i]);
        present.remove(&edges[j]);
        present.insert(e1);
        present.insert(e2);
        edges[i] = e1;
        edges[j] = e2;
        accepted += 1;
        debug_assert_eq!(present.len(), m);
    }
    Graph::from_edges(s.len(), edges)
}

/// 2K-random graph: rewires a copy of `g` with `ceil(swap_factor * M)`
/// accepted swaps, each exchanging two edge endpoints of equal degree.
pub fn generate_2k(g: &Graph, seed: u64, swap_factor: f64) -> Result<Graph> {
    check_swap_factor(swap_factor)?;
    if g.edge_count() < 2 {
        return Err(Error::domain("2K rewiring needs at least 2 edges"));
    }
    let degree = g.degrees();
    let mut edges = g.edges().to_vec();
    let m = edges.len();
    // A stub is (edge slot, side). Swaps only exchange nodes of equal degree,
    // so the degree seen at each stub never changes and the per-degree stub
    // lists stay valid for the whole run.
    let mut by_degree: BTreeMap<usize, Vec<(usize, u8)>> = BTreeMap::new();
    for (i, &(u, v)) in edges.iter().enumerate() {
        by_degree
            .entry(degree[u as usize])
            .or_default()
            .push((i, 0));
        by_degree
            .entry(degree[v as usize])
            .or_default()
            .push((i, 1));
    }
    let mut present: HashSet<(NodeId, NodeId)> = edges.iter().copied().collect();
    let mut rng = rng_for(seed);
    let (target, budget) = swap_targets(m, swap_factor);
    let (mut accepted, mut proposed) = (0u64, 0u64);
    let end = |e: (NodeId, NodeId), side: u8| if side == 0 { e.0 } else { e.1 };
    while accepted < target && proposed < budget {
        proposed += 1;
        let i = rng.gen_range(0..m);
        let side_i: u8 = rng.gen_range(0..2);
        let b = end(edges[i], side_i);
        let a = end(edges[i], 1 - side_i);
        let class = &by_degree[&degree[b as usize]];
        let (j, side_j) = class[rng.gen_range(0..class.len())];
        if j == i {
            continue;
        }
        let d = end(edges[j], side_j);
        let c = end(edges[j], 1 - side_j);
        // (a,b),(c,d) -> (a,d),(c,b)
        if b == d || a == d || c == b {
            continue;
        }
        let (e1, e2) = (ordered(a, d), ordered(c, b));
        if present.contains(&e1) || present.contains(&e2) {
            continue;
        }
        present.remove(&ordered(edges[i].0, edges[i].1));
        present.remove(&ordered(edges[j].0, edges[j].1));
        present.insert(e1);
        present.insert(e2);
        // Keep each stub's node at the same side so the stub lists stay exact.
        edges[i] = if side_i == 0 { (d, a) } else { (a, d) };
        edges[j] = if side_j == 0 { (b, c) } else { (c, b) };
        accepted += 1;
        debug_assert_eq!(present.len(), m);
    }
    Graph::from_labeled_edges(g.labels().to_vec(), edges)
}

fn ordered(u: NodeId, v: NodeId) -> (NodeId, NodeId) {
    (u.min(v), u.max(v))
}

fn check_swap_factor(swap_factor: f64) -> Result<()> {
    if swap_factor.is_finite() && swap_factor > 0.0 {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "swap factor must be positive, got {swap_factor}"
        )))
    }
}

fn swap_targets(m: usize, swap_factor: f64) -> (u64, u64) {
    let target = (swap_factor * m as f64).ceil() as u64;
    let budget = (PROPOSAL_BUDGET_FACTOR * swap_factor * m as f64).ceil() as u64;
    (target, budget)
}

/// Edge counts keyed by the unordered endpoint-degree pair `(d1 <= d2)`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct JointDegreeMatrix(BTreeMap<(usize, usize), usize>);

impl JointDegreeMatrix {
    pub fn entries(&self) -> &BTreeMap<(usize, usize), usize> {
        &self.0
    }

    pub fn get(&self, d1: usize, d2: usize) -> usize {
        self.0.get(&(d1.min(d2), d1.max(d2))).copied().unwrap_or(0)
    }

    pub fn total(&self) -> usize {
        self.0.values().sum()
    }
}

pub fn joint_degree_matrix(g: &Graph) -> JointDegreeMatrix {
    let degree = g.degrees();
    let mut jdm = BTreeMap::new();
    for &(u, v) in g.edges() {
        let (a, b) = (degree[u as usize], degree[v as usize]);
        *jdm.entry((a.min(b), a.max(b))).or_insert(0) += 1;
    }
    JointDegreeMatrix(jdm)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "u8", try_from = "u8")]
pub enum DkOrder {
    Zero,
    One,
    Two,
}

impl DkOrder {
    pub fn as_u8(self) -> u8 {
        match self {
            DkOrder::Zero => 0,
            DkOrder::One => 1,
            DkOrder::Two => 2,
        }
    }
}

impl From<DkOrder> for u8 {
    fn from(d: DkOrder) -> u8 {
        d.as_u8()
    }
}

impl TryFrom<u8> for DkOrder {
    type Error = Error;

    fn try_from(d: u8) -> Result<Self> {
        match d {
            0 => Ok(DkOrder::Zero),
            1 => Ok(DkOrder::One),
            2 => Ok(DkOrder::Two),
            _ => Err(Error::domain(format!(
                "dK order must be 0, 1 or 2, got {d}"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleSpec {
    pub d: DkOrder,
    pub instances: usize,
    pub seed: u64,
    pub swap_factor: f64,
}

impl EnsembleSpec {
    pub fn validate(&self) -> Result<()> {
        if self.instances == 0 {
            return Err(Error::domain("ensemble needs at least one instance"));
        }
        check_swap_factor(self.swap_factor)
    }

    pub fn instance_seed(&self, i: usize) -> u64 {
        self.seed.wrapping_add(i as u64)
    }
}

/// One dK-random graph for the `i`-th slot of an ensemble.
pub fn generate_instance(spec: &EnsembleSpec, template: &Graph, i: usize) -> Result<Graph> {
    let seed = spec.instance_seed(i);
    match spec.d {
        DkOrder::Zero => generate_0k(template.node_count(), template.edge_count(), seed),
        DkOrder::One => generate_1k(
            &DegreeSequence::from_graph(template),
            seed,
            spec.swap_factor,
        ),
        DkOrder::Two => generate_2k(template, seed, spec.swap_factor),
    }
}

/// `spec.instances` independent dK-random graphs matching `template`.
/// Instances are generated in parallel; the result does not depend on the
/// thread count.
pub fn generate_ensemble(spec: &EnsembleSpec, template: &Graph) -> Result<Vec<Graph>> {
    spec.validate()?;
    (0..spec.instances)
        .into_par_iter()
        .map(|i| generate_instance(spec, template, i))
        .collect()
}

/// Record of a generated ensemble written next to the instance edge lists.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleManifest {
    pub spec: EnsembleSpec,
    pub instances: Vec<ManifestEntry>,
    pub complete: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub index: usize,
    pub seed: u64,
    pub path: String,
}

/// `G(n, p)` sample, used for randomized testing and examples.
pub fn gnp(n: usize, p: f64, seed: u64) -> Graph {
    let mut rng = rng_for(seed);
    let mut edges = Vec::new();
    for u in 0..n as NodeId {
        for v in u + 1..n as NodeId {
            if rng.gen::<f64>() < p {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, edges).expect("valid G(n,p) sample")
}
