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

//! Normalized decomposition profiles and their aggregation across snapshots.
//!
//! Indices are mapped to `x = (k - k_min) / (k_max - k_min)`; node and link
//! counts are divided by the snapshot totals. Profiles are then linearly
//! binned on `x` and aggregated bin by bin.

use std::collections::BTreeMap;
use std::fmt;
use std::io::Write;

use serde::Serialize;

use crate::decomposition::DenseDecomposition;
use crate::metrics;
use crate::stats::Summary;
use crate::{Error, Graph, NodeId, Result};

pub const DEFAULT_BIN_WIDTH: f64 = 0.05;

/// Slack for floating-point bin boundaries such as `0.35 / 0.05`.
const BIN_EPS: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ProfileKind {
    NodeFraction,
    LinkFraction,
    Attachment,
    SetToSet(u32),
}

impl fmt::Display for ProfileKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProfileKind::NodeFraction => f.write_str("node_fraction"),
            ProfileKind::LinkFraction => f.write_str("link_fraction"),
            ProfileKind::Attachment => f.write_str("attachment"),
            ProfileKind::SetToSet(k0) => write!(f, "set_to_set_{k0}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProfilePoint {
    pub k: u32,
    pub x: f64,
    pub y: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Profile {
    pub kind: ProfileKind,
    pub points: Vec<ProfilePoint>,
}

impl Profile {
    pub fn total(&self) -> f64 {
        self.points.iter().map(|p| p.y).sum()
    }
}

/// `(k - k_min) / (k_max - k_min)`.
pub fn normalize_index(k: u32, k_min: u32, k_max: u32) -> Result<f64> {
    if k_max == k_min {
        return Err(Error::DegenerateRange(k_min));
    }
    if k < k_min || k > k_max {
        return Err(Error::domain(format!("k = {k} outside [{k_min}, {k_max}]")));
    }
    Ok((k - k_min) as f64 / (k_max - k_min) as f64)
}

/// Index fraction for profile points. A decomposition with a single level
/// (`k_max = k_min = 2`) has all of its mass at `x = 0`.
fn index_fraction(d: &DenseDecomposition, k: u32) -> f64 {
    if d.k_max() == d.k_min() {
        0.0
    } else {
        normalize_index(k, d.k_min(), d.k_max()).expect("index within decomposition range")
    }
}

fn counts_to_profile(
    kind: ProfileKind,
    d: &DenseDecomposition,
    counts: &[(u32, usize)],
    total: usize,
) -> Profile {
    Profile {
        kind,
        points: counts
            .iter()
            .filter(|&&(_, c)| c > 0)
            .map(|&(k, c)| ProfilePoint {
                k,
                x: index_fraction(d, k),
                y: c as f64 / total as f64,
            })
            .collect(),
    }
}

/// Fraction of nodes in each non-empty k-dense-set.
pub fn node_fraction_profile(d: &DenseDecomposition, n_total: usize) -> Result<Profile> {
    if n_total == 0 {
        return Err(Error::domain("node total must be positive"));
    }
    Ok(counts_to_profile(
        ProfileKind::NodeFraction,
        d,
        &d.set_sizes(),
        n_total,
    ))
}

/// Fraction of links in each non-empty k-dense-shell.
pub fn link_fraction_profile(d: &DenseDecomposition, m_total: usize) -> Result<Profile> {
    if m_total == 0 {
        return Err(Error::domain("link total must be positive"));
    }
    Ok(counts_to_profile(
        ProfileKind::LinkFraction,
        d,
        &d.shell_sizes(),
        m_total,
    ))
}

/// Fraction of all links with at least one endpoint in each k-dense-set.
/// A link between two sets counts for both, so the values may sum above 1.
pub fn attachment_profile(g: &Graph, d: &DenseDecomposition) -> Profile {
    let mut counts: BTreeMap<u32, usize> = BTreeMap::new();
    for &(u, v) in g.edges() {
        let (ku, kv) = (d.node_index(u), d.node_index(v));
        *counts.entry(ku).or_default() += 1;
        if kv != ku {
            *counts.entry(kv).or_default() += 1;
        }
    }
    let counts: Vec<(u32, usize)> = counts.into_iter().collect();
    counts_to_profile(ProfileKind::Attachment, d, &counts, g.edge_count().max(1))
}

/// Among links attached to the `k0`-dense-set, the fraction whose other end
/// lies in each set. Links inside set `k0` count toward `k0`.
pub fn set_to_set_profile(g: &Graph, d: &DenseDecomposition, k0: u32) -> Result<Profile> {
    if !d.node_indices().contains(&k0) {
        return Err(Error::domain(format!("the {k0}-dense-set is empty")));
    }
    let mut counts: BTreeMap<u32, usize> = BTreeMap::new();
    let mut attached = 0;
    for &(u, v) in g.edges() {
        let (ku, kv) = (d.node_index(u), d.node_index(v));
        let other = if ku == k0 {
            kv
        } else if kv == k0 {
            ku
        } else {
            continue;
        };
        attached += 1;
        *counts.entry(other).or_default() += 1;
    }
    if attached == 0 {
        return Err(Error::domain(format!(
            "no links attached to the {k0}-dense-set"
        )));
    }
    let counts: Vec<(u32, usize)> = counts.into_iter().collect();
    Ok(counts_to_profile(
        ProfileKind::SetToSet(k0),
        d,
        &counts,
        attached,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProfileBin {
    pub index: usize,
    pub y: f64,
}

/// A profile summed into linear bins `[i w, (i + 1) w)` of `x`, the last bin
/// closed. Only occupied bins are stored.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BinnedProfile {
    pub kind: ProfileKind,
    pub bin_width: f64,
    pub bins: Vec<ProfileBin>,
}

fn bin_count(width: f64) -> usize {
    ((1.0 / width) - BIN_EPS).ceil().max(1.0) as usize
}

fn bin_bounds(width: f64, index: usize) -> (f64, f64) {
    let lo = index as f64 * width;
    let hi = if index + 1 == bin_count(width) {
        1.0
    } else {
        (index + 1) as f64 * width
    };
    (lo, hi)
}

impl BinnedProfile {
    pub fn bin_count(&self) -> usize {
        bin_count(self.bin_width)
    }

    pub fn bounds(&self, index: usize) -> (f64, f64) {
        bin_bounds(self.bin_width, index)
    }

    pub fn total(&self) -> f64 {
        self.bins.iter().map(|b| b.y).sum()
    }

    /// Bins as profile points located at the bin midpoints.
    pub fn to_points(&self) -> Vec<(f64, f64)> {
        self.bins
            .iter()
            .map(|b| {
                let (lo, hi) = self.bounds(b.index);
                ((lo + hi) / 2.0, b.y)
            })
            .collect()
    }
}

pub fn bin_profile(p: &Profile, bin_width: f64) -> Result<BinnedProfile> {
    if !(bin_width > 0.0 && bin_width <= 1.0) {
        return Err(Error::domain(format!(
            "bin width must be in (0, 1], got {bin_width}"
        )));
    }
    let nbins = bin_count(bin_width);
    let mut sums: BTreeMap<usize, f64> = BTreeMap::new();
    for pt in &p.points {
        let idx = ((pt.x / bin_width + BIN_EPS).floor().max(0.0) as usize).min(nbins - 1);
        *sums.entry(idx).or_default() += pt.y;
    }
    Ok(BinnedProfile {
        kind: p.kind,
        bin_width,
        bins: sums
            .into_iter()
            .map(|(index, y)| ProfileBin { index, y })
            .collect(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AggregatedBin {
    pub lo: f64,
    pub hi: f64,
    /// `None` when no snapshot has a point in this bin.
    pub stats: Option<Summary>,
}

impl AggregatedBin {
    pub fn sample_count(&self) -> usize {
        self.stats.map_or(0, |s| s.n)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AggregatedProfile {
    pub kind: ProfileKind,
    pub bin_width: f64,
    pub bins: Vec<AggregatedBin>,
}

/// Per-bin mean, nearest-rank p10/p90, min and max over the snapshots that
/// contribute to each bin. Every bin of the `[0, 1]` tiling is emitted.
pub fn aggregate_profiles(ps: &[BinnedProfile]) -> Result<AggregatedProfile> {
    let first = ps
        .first()
        .ok_or_else(|| Error::domain("nothing to aggregate"))?;
    if let Some(bad) = ps.iter().find(|p| p.bin_width != first.bin_width) {
        return Err(Error::domain(format!(
            "bin width mismatch: {} vs {}",
            first.bin_width, bad.bin_width
        )));
    }
    let nbins = first.bin_count();
    let mut samples: Vec<Vec<f64>> = vec![Vec::new(); nbins];
    for p in ps {
        for b in &p.bins {
            samples[b.index].push(b.y);
        }
    }
    let bins = samples
        .iter()
        .enumerate()
        .map(|(i, ys)| {
            let (lo, hi) = bin_bounds(first.bin_width, i);
            AggregatedBin {
                lo,
                hi,
                stats: Summary::of(ys),
            }
        })
        .collect();
    Ok(AggregatedProfile {
        kind: first.kind,
        bin_width: first.bin_width,
        bins,
    })
}

/// Averages of node metrics over one k-dense-set (metrics measured on the
/// whole graph).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SetSummary {
    pub k: u32,
    pub nodes: usize,
    pub mean_degree: f64,
    pub mean_clustering: f64,
    pub mean_betweenness: f64,
}

pub fn set_summary(g: &Graph, d: &DenseDecomposition, k: u32) -> Result<SetSummary> {
    set_summary_with(g, d, k, &metrics::betweenness(g))
}

/// [`set_summary`] with precomputed betweenness, so several sets can share
/// one all-pairs pass.
pub fn set_summary_with(
    g: &Graph,
    d: &DenseDecomposition,
    k: u32,
    betweenness: &[f64],
) -> Result<SetSummary> {
    let members: Vec<NodeId> = g.nodes().filter(|&v| d.node_index(v) == k).collect();
    if members.is_empty() {
        return Err(Error::domain(format!("the {k}-dense-set is empty")));
    }
    let n = members.len() as f64;
    Ok(SetSummary {
        k,
        nodes: members.len(),
        mean_degree: members.iter().map(|&v| g.degree(v) as f64).sum::<f64>() / n,
        mean_clustering: members
            .iter()
            .map(|&v| metrics::clustering(g, v))
            .sum::<f64>()
            / n,
        mean_betweenness: members
            .iter()
            .map(|&v| betweenness[v as usize])
            .sum::<f64>()
            / n,
    })
}

/// Distribution of node degrees within each non-empty k-dense-set.
pub fn degree_by_index(g: &Graph, d: &DenseDecomposition) -> Vec<(u32, Summary)> {
    let mut groups: BTreeMap<u32, Vec<f64>> = BTreeMap::new();
    for v in g.nodes() {
        groups
            .entry(d.node_index(v))
            .or_default()
            .push(g.degree(v) as f64);
    }
    groups
        .into_iter()
        .map(|(k, xs)| (k, Summary::of(&xs).expect("non-empty group")))
        .collect()
}

/// `kind,k,x,y` rows.
pub fn write_profiles_csv<W: Write>(profiles: &[Profile], mut out: W) -> std::io::Result<()> {
    writeln!(out, "kind,k,x,y")?;
    for p in profiles {
        for pt in &p.points {
            writeln!(out, "{},{},{},{}", p.kind, pt.k, pt.x, pt.y)?;
        }
    }
    Ok(())
}

/// `bin_lo,bin_hi,mean,p10,p90,min,max,n` rows; empty bins leave the
/// statistics blank.
pub fn write_aggregated_csv<W: Write>(agg: &AggregatedProfile, mut out: W) -> std::io::Result<()> {
    writeln!(out, "bin_lo,bin_hi,mean,p10,p90,min,max,n")?;
    for b in &agg.bins {
        match b.stats {
            Some(s) => writeln!(
                out,
                "{},{},{},{},{},{},{},{}",
                b.lo, b.hi, s.mean, s.p10, s.p90, s.min, s.max, s.n
            )?,
            None => writeln!(out, "{},{},,,,,,0", b.lo, b.hi)?,
        }
    }
    Ok(())
}
