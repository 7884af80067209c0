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

//! Structural statistics: clustering, neighbor degree, betweenness, path
//! lengths, motif census and degree-binned series.
//!
//! Conventions: betweenness is exact Brandes accumulation over unordered
//! pairs, endpoints excluded, not normalized. The motif census counts induced
//! connected subgraphs.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::graph::count_common;
use crate::stats::{self, Summary};
use crate::{Error, Graph, NodeId, Result};

/// Sources per parallel work unit. Fixed so that floating-point reduction
/// order, and therefore the output, does not depend on the thread count.
const SOURCE_CHUNK: usize = 64;

/// Number of triangles through `v`.
pub fn triangles_at(g: &Graph, v: NodeId) -> usize {
    let nv = g.neighbors(v);
    nv.iter()
        .map(|&w| count_common(nv, g.neighbors(w)))
        .sum::<usize>()
        / 2
}

/// Local clustering coefficient; 0 for degree < 2.
pub fn clustering(g: &Graph, v: NodeId) -> f64 {
    let d = g.degree(v);
    if d < 2 {
        return 0.0;
    }
    triangles_at(g, v) as f64 / (d * (d - 1) / 2) as f64
}

pub fn average_neighbor_degree(g: &Graph, v: NodeId) -> Result<f64> {
    let nv = g.neighbors(v);
    if nv.is_empty() {
        return Err(Error::domain(format!("node {} is isolated", g.label(v))));
    }
    Ok(nv.iter().map(|&w| g.degree(w) as f64).sum::<f64>() / nv.len() as f64)
}

/// Exact shortest-path betweenness of every node.
pub fn betweenness(g: &Graph) -> Vec<f64> {
    let n = g.node_count();
    let sources: Vec<NodeId> = g.nodes().collect();
    let partials: Vec<Vec<f64>> = sources
        .par_chunks(SOURCE_CHUNK)
        .map(|chunk| {
            let mut acc = vec![0.0; n];
            let mut scratch = BrandesScratch::new(n);
            for &s in chunk {
                scratch.accumulate(g, s, &mut acc);
            }
            acc
        })
        .collect();
    let mut total = vec![0.0; n];
    for part in partials {
        for (t, p) in total.iter_mut().zip(part) {
            *t += p;
        }
    }
    // Each unordered pair was counted from both ends.
    total.iter_mut().for_each(|b| *b /= 2.0);
    total
}

struct BrandesScratch {
    sigma: Vec<f64>,
    dist: Vec<i64>,
    delta: Vec<f64>,
    stack: Vec<NodeId>,
    queue: VecDeque<NodeId>,
}

impl BrandesScratch {
    fn new(n: usize) -> Self {
        BrandesScratch {
            sigma: vec![0.0; n],
            dist: vec![-1; n],
            delta: vec![0.0; n],
            stack: Vec::with_capacity(n),
            queue: VecDeque::with_capacity(n),
        }
    }

    fn accumulate(&mut self, g: &Graph, s: NodeId, acc: &mut [f64]) {
        // Reset only what the previous source touched.
        for &v in &self.stack {
            self.sigma[v as usize] = 0.0;
            self.dist[v as usize] = -1;
            self.delta[v as usize] = 0.0;
        }
        self.stack.clear();
        self.sigma[s as usize] = 1.0;
        self.dist[s as usize] = 0;
        self.queue.push_back(s);
        while let Some(v) = self.queue.pop_front() {
            self.stack.push(v);
            let dv = self.dist[v as usize];
            for &w in g.neighbors(v) {
                let w = w as usize;
                if self.dist[w] < 0 {
                    self.dist[w] = dv + 1;
                    self.queue.push_back(w as NodeId);
                }
                if self.dist[w] == dv + 1 {
                    self.sigma[w] += self.sigma[v as usize];
                }
            }
        }
        // Predecessors are recovered from distances instead of stored lists.
        for &w in self.stack.iter().rev() {
            let wu = w as usize;
            let coeff = (1.0 + self.delta[wu]) / self.sigma[wu];
            for &v in g.neighbors(w) {
                let v = v as usize;
                if self.dist[v] == self.dist[wu] - 1 {
                    self.delta[v] += self.sigma[v] * coeff;
                }
            }
            if w != s {
                acc[wu] += self.delta[wu];
            }
        }
    }
}

/// Histogram of shortest-path lengths over connected unordered pairs.
pub fn shortest_path_distribution(g: &Graph) -> BTreeMap<usize, u64> {
    let n = g.node_count();
    let sources: Vec<NodeId> = g.nodes().collect();
    let partials: Vec<Vec<u64>> = sources
        .par_chunks(SOURCE_CHUNK)
        .map(|chunk| {
            let mut hist = Vec::new();
            let mut dist = vec![usize::MAX; n];
            let mut seen = Vec::with_capacity(n);
            let mut queue = VecDeque::new();
            for &s in chunk {
                for &v in &seen {
                    dist[v as usize] = usize::MAX;
                }
                seen.clear();
                dist[s as usize] = 0;
                seen.push(s);
                queue.push_back(s);
                while let Some(v) = queue.pop_front() {
                    let dv = dist[v as usize];
                    if v > s {
                        if hist.len() <= dv {
                            hist.resize(dv + 1, 0);
                        }
                        hist[dv] += 1;
                    }
                    for &w in g.neighbors(v) {
                        if dist[w as usize] == usize::MAX {
                            dist[w as usize] = dv + 1;
                            seen.push(w);
                            queue.push_back(w);
                        }
                    }
                }
            }
            hist
        })
        .collect();
    let mut out = BTreeMap::new();
    for part in partials {
        for (len, c) in part.into_iter().enumerate() {
            if c > 0 {
                *out.entry(len).or_insert(0) += c;
            }
        }
    }
    out
}

/// Connected graphs on 3 and 4 nodes, up to isomorphism.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MotifClass {
    Path3,
    Triangle,
    Path4,
    Star4,
    Cycle4,
    /// Triangle with a pendant edge.
    Paw,
    /// K4 minus one edge.
    Diamond,
    Clique4,
}

impl MotifClass {
    pub const SIZE3: [MotifClass; 2] = [MotifClass::Path3, MotifClass::Triangle];
    pub const SIZE4: [MotifClass; 6] = [
        MotifClass::Path4,
        MotifClass::Star4,
        MotifClass::Cycle4,
        MotifClass::Paw,
        MotifClass::Diamond,
        MotifClass::Clique4,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MotifClass::Path3 => "path3",
            MotifClass::Triangle => "triangle",
            MotifClass::Path4 => "path4",
            MotifClass::Star4 => "star4",
            MotifClass::Cycle4 => "cycle4",
            MotifClass::Paw => "paw",
            MotifClass::Diamond => "diamond",
            MotifClass::Clique4 => "clique4",
        }
    }

    pub fn of_size(size: usize) -> Result<&'static [MotifClass]> {
        match size {
            3 => Ok(&Self::SIZE3),
            4 => Ok(&Self::SIZE4),
            _ => Err(Error::domain(format!(
                "motif size must be 3 or 4, got {size}"
            ))),
        }
    }
}

impl fmt::Display for MotifClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MotifCensus {
    pub size: usize,
    pub counts: BTreeMap<MotifClass, u64>,
}

impl MotifCensus {
    pub fn count(&self, class: MotifClass) -> u64 {
        self.counts.get(&class).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }
}

/// Counts of induced connected subgraphs on `size` nodes per isomorphism
/// class. Every class of that size is present in the result, possibly 0.
pub fn motif_census(g: &Graph, size: usize) -> Result<MotifCensus> {
    let classes = MotifClass::of_size(size)?;
    let mut counts: BTreeMap<MotifClass, u64> = classes.iter().map(|&c| (c, 0)).collect();
    if size == 3 {
        let mut wedges = 0u64;
        let mut triangle_edges = 0u64;
        for v in g.nodes() {
            let d = g.degree(v) as u64;
            wedges += d * d.saturating_sub(1) / 2;
        }
        for &(u, v) in g.edges() {
            triangle_edges += count_common(g.neighbors(u), g.neighbors(v)) as u64;
        }
        let triangles = triangle_edges / 3;
        counts.insert(MotifClass::Triangle, triangles);
        counts.insert(MotifClass::Path3, wedges - 3 * triangles);
    } else {
        let per_root: Vec<[u64; 6]> = g
            .nodes()
            .collect::<Vec<_>>()
            .par_iter()
            .map(|&root| {
                let mut local = [0u64; 6];
                esu_from(g, root, &mut |nodes: &[NodeId]| {
                    local[classify4(g, nodes) as usize] += 1;
                });
                local
            })
            .collect();
        for local in per_root {
            for (class, c) in MotifClass::SIZE4.iter().zip(local) {
                *counts.get_mut(class).unwrap() += c;
            }
        }
    }
    Ok(MotifCensus { size, counts })
}

/// ESU enumeration of connected 4-node sets whose smallest id is `root`.
fn esu_from<F: FnMut(&[NodeId])>(g: &Graph, root: NodeId, visit: &mut F) {
    let ext: Vec<NodeId> = g
        .neighbors(root)
        .iter()
        .copied()
        .filter(|&u| u > root)
        .collect();
    let mut sub = vec![root];
    esu_extend(g, root, &mut sub, ext, visit);
}

fn esu_extend<F: FnMut(&[NodeId])>(
    g: &Graph,
    root: NodeId,
    sub: &mut Vec<NodeId>,
    mut ext: Vec<NodeId>,
    visit: &mut F,
) {
    if sub.len() == 4 {
        visit(sub);
        return;
    }
    while let Some(w) = ext.pop() {
        let mut next = ext.clone();
        // Exclusive neighbors of w: above the root, not in sub, and not
        // adjacent to anything already in sub.
        for &u in g.neighbors(w) {
            if u > root
                && !sub.contains(&u)
                && !next.contains(&u)
                && !sub.iter().any(|&s| g.has_edge(s, u))
            {
                next.push(u);
            }
        }
        sub.push(w);
        esu_extend(g, root, sub, next, visit);
        sub.pop();
    }
}

/// Index into [`MotifClass::SIZE4`] of a connected 4-node set.
fn classify4(g: &Graph, nodes: &[NodeId]) -> u8 {
    let mut deg = [0u8; 4];
    let mut edges = 0;
    for i in 0..4 {
        for j in i + 1..4 {
            if g.has_edge(nodes[i], nodes[j]) {
                edges += 1;
                deg[i] += 1;
                deg[j] += 1;
            }
        }
    }
    let max_deg = *deg.iter().max().unwrap();
    match (edges, max_deg) {
        (3, 3) => 1,
        (3, _) => 0,
        (4, 2) => 2,
        (4, _) => 3,
        (5, _) => 4,
        (6, _) => 5,
        _ => unreachable!("ESU only yields connected sets"),
    }
}

/// A z-score, or the sentinel for a nonzero deviation from a zero-variance
/// ensemble.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ZScore {
    Finite(f64),
    PositiveInfinite,
    NegativeInfinite,
}

impl ZScore {
    pub fn finite(self) -> Option<f64> {
        match self {
            ZScore::Finite(z) => Some(z),
            _ => None,
        }
    }
}

impl Serialize for ZScore {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            ZScore::Finite(z) => s.serialize_f64(*z),
            ZScore::PositiveInfinite => s.serialize_str("+inf"),
            ZScore::NegativeInfinite => s.serialize_str("-inf"),
        }
    }
}

impl fmt::Display for ZScore {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ZScore::Finite(z) => write!(f, "{z}"),
            ZScore::PositiveInfinite => f.write_str("+inf"),
            ZScore::NegativeInfinite => f.write_str("-inf"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MotifZScore {
    pub x: u64,
    pub mean: f64,
    pub sigma: f64,
    pub z: ZScore,
}

/// `z = (x - mu) / sigma` per class, with the population standard deviation
/// of the ensemble counts.
pub fn motif_zscores(
    target: &MotifCensus,
    ensemble: &[MotifCensus],
) -> Result<BTreeMap<MotifClass, MotifZScore>> {
    if ensemble.len() < 2 {
        return Err(Error::domain("z-scores need at least 2 ensemble censuses"));
    }
    if let Some(bad) = ensemble.iter().find(|c| c.size != target.size) {
        return Err(Error::domain(format!(
            "motif size mismatch: target {} vs ensemble {}",
            target.size, bad.size
        )));
    }
    let mut out = BTreeMap::new();
    for &class in MotifClass::of_size(target.size)? {
        let samples: Vec<f64> = ensemble.iter().map(|c| c.count(class) as f64).collect();
        let mean = stats::mean(&samples);
        let sigma = stats::std_dev(&samples);
        let x = target.count(class);
        let dev = x as f64 - mean;
        let z = if sigma > 0.0 {
            ZScore::Finite(dev / sigma)
        } else if dev == 0.0 {
            ZScore::Finite(0.0)
        } else if dev > 0.0 {
            ZScore::PositiveInfinite
        } else {
            ZScore::NegativeInfinite
        };
        out.insert(class, MotifZScore { x, mean, sigma, z });
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DegreeBin {
    /// Bin bounds `[lo, hi)` in degree units.
    pub lo: f64,
    pub hi: f64,
    /// Smallest and largest observed degree in the bin.
    pub degree_min: usize,
    pub degree_max: usize,
    pub summary: Summary,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DegreeBinnedSeries {
    pub bins_per_decade: usize,
    pub bins: Vec<DegreeBin>,
}

/// Lower edge of logarithmic bin `i`.
fn log_bin_edge(i: i64, per_decade: usize) -> f64 {
    if i % per_decade as i64 == 0 {
        10f64.powi((i / per_decade as i64) as i32)
    } else {
        10f64.powf(i as f64 / per_decade as f64)
    }
}

fn log_bin_index(degree: usize, per_decade: usize) -> i64 {
    let d = degree as f64;
    let mut i = (per_decade as f64 * d.log10()).floor() as i64;
    while log_bin_edge(i, per_decade) > d {
        i -= 1;
    }
    while log_bin_edge(i + 1, per_decade) <= d {
        i += 1;
    }
    i
}

/// Groups per-node values by logarithmic degree bins (`bins_per_decade` per
/// factor of ten). Degree-0 nodes land in a `[0, 1)` bin. Only non-empty bins
/// are emitted.
pub fn logbin_by_degree(
    values: &BTreeMap<NodeId, f64>,
    g: &Graph,
    bins_per_decade: usize,
) -> Result<DegreeBinnedSeries> {
    if bins_per_decade == 0 {
        return Err(Error::domain("bins_per_decade must be at least 1"));
    }
    if values.is_empty() {
        return Err(Error::domain("no values to bin"));
    }
    // Key None is the degree-0 bin, ordered first.
    let mut groups: BTreeMap<Option<i64>, (Vec<f64>, usize, usize)> = BTreeMap::new();
    for (&v, &x) in values {
        let d = g.degree(v);
        let key = (d > 0).then(|| log_bin_index(d, bins_per_decade));
        let entry = groups.entry(key).or_insert((Vec::new(), usize::MAX, 0));
        entry.0.push(x);
        entry.1 = entry.1.min(d);
        entry.2 = entry.2.max(d);
    }
    let bins = groups
        .into_iter()
        .map(|(key, (xs, dmin, dmax))| {
            let (lo, hi) = match key {
                None => (0.0, 1.0),
                Some(i) => (
                    log_bin_edge(i, bins_per_decade),
                    log_bin_edge(i + 1, bins_per_decade),
                ),
            };
            DegreeBin {
                lo,
                hi,
                degree_min: dmin,
                degree_max: dmax,
                summary: Summary::of(&xs).expect("non-empty group"),
            }
        })
        .collect();
    Ok(DegreeBinnedSeries {
        bins_per_decade,
        bins,
    })
}

/// Groups per-node values by exact degree.
pub fn per_degree(values: &BTreeMap<NodeId, f64>, g: &Graph) -> Vec<(usize, Summary)> {
    let mut groups: BTreeMap<usize, Vec<f64>> = BTreeMap::new();
    for (&v, &x) in values {
        groups.entry(g.degree(v)).or_default().push(x);
    }
    groups
        .into_iter()
        .map(|(d, xs)| (d, Summary::of(&xs).expect("non-empty group")))
        .collect()
}
