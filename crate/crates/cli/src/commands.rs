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

//! The five analyses. Each reads its inputs from a validated [`RunConfig`]
//! and writes report files through a [`Reporter`].

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fs::File;
use std::io::BufReader;
use std::path::Path;

use anyhow::{bail, Context};
use kdense::asdata::{
    cone_distribution, load_ranked_list, load_relationships, load_weights, rank_overlap,
    top_n_by_metric, RelationshipGraph,
};
use kdense::decomposition::{
    extract_kmax_core, k_core_decomposition, k_dense_decomposition, DenseDecomposition,
};
use kdense::graph::{average_degree_fit, load_edge_list, FIT_OFFSET, FIT_SLOPE};
use kdense::metrics::{
    average_neighbor_degree, betweenness, clustering, logbin_by_degree, motif_census,
    motif_zscores, shortest_path_distribution, MotifCensus, ZScore,
};
use kdense::null_models::{
    generate_instance, joint_degree_matrix, DegreeSequence, DkOrder, EnsembleManifest,
    EnsembleSpec, ManifestEntry,
};
use kdense::profiles::{
    aggregate_profiles, attachment_profile, bin_profile, link_fraction_profile,
    node_fraction_profile, set_summary_with, set_to_set_profile, BinnedProfile, Profile,
};
use kdense::stats::{mean, std_dev, Summary};
use kdense::{Graph, NodeId, SnapshotMeta};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{Command, RunConfig};
use crate::report::{summary_cells, Cell, Reporter, Table, SUMMARY_COLUMNS};
use crate::row;

/// Bins per decade for degree-binned series.
const BINS_PER_DECADE: usize = 10;

pub fn dispatch(cfg: &RunConfig, rep: &Reporter) -> anyhow::Result<()> {
    match cfg.command {
        Command::Decompose => decompose(cfg, rep),
        Command::Compare => compare(cfg, rep),
        Command::Null => null(cfg, rep),
        Command::Core => core(cfg, rep),
        Command::Cone => cone(cfg, rep),
    }
}

fn load_snapshot(cfg: &RunConfig, path: &Path) -> anyhow::Result<(Graph, SnapshotMeta)> {
    let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    let (g, mut meta) = load_edge_list(BufReader::new(file), cfg.cutoff)
        .with_context(|| format!("loading {}", path.display()))?;
    meta.snapshot_id = path
        .file_name()
        .map_or_else(String::new, |n| n.to_string_lossy().into_owned());
    Ok((g, meta))
}

fn with_columns(lead: &[&str]) -> Table {
    Table::new(lead.iter().copied().chain(SUMMARY_COLUMNS))
}

/// Distinct non-empty k-dense-sets among 2, 3 and `k_max`, with a name for
/// each role.
fn focus_sets(d: &DenseDecomposition) -> Vec<(&'static str, u32)> {
    let mut out: Vec<(&'static str, u32)> = Vec::new();
    for (name, k) in [("2", 2), ("3", 3), ("kmax", d.k_max())] {
        if k <= d.k_max() && d.node_indices().contains(&k) {
            out.push((name, k));
        }
    }
    out
}

fn has_attached_link(g: &Graph, d: &DenseDecomposition, k0: u32) -> bool {
    g.edges()
        .iter()
        .any(|&(u, v)| d.node_index(u) == k0 || d.node_index(v) == k0)
}

/// Node, link and attachment profiles plus set-to-set profiles of the focus
/// sets, each labelled for cross-snapshot grouping.
fn labelled_profiles(g: &Graph, d: &DenseDecomposition) -> anyhow::Result<Vec<(String, Profile)>> {
    let mut out = vec![
        (
            "node_fraction".to_string(),
            node_fraction_profile(d, g.node_count())?,
        ),
        (
            "link_fraction".to_string(),
            link_fraction_profile(d, g.edge_count())?,
        ),
        ("attachment".to_string(), attachment_profile(g, d)),
    ];
    for (name, k0) in focus_sets(d) {
        if has_attached_link(g, d, k0) {
            out.push((format!("set_to_set_{name}"), set_to_set_profile(g, d, k0)?));
        }
    }
    Ok(out)
}

#[derive(Serialize)]
struct DecomposeMeta {
    snapshot: SnapshotMeta,
    nodes: usize,
    links: usize,
    k_min: u32,
    k_max: u32,
    average_degree: f64,
    density: f64,
}

fn decompose(cfg: &RunConfig, rep: &Reporter) -> anyhow::Result<()> {
    let (g, meta) = load_snapshot(cfg, &cfg.inputs[0])?;
    let d = k_dense_decomposition(&g)?;
    let cores = k_core_decomposition(&g);
    rep.json(
        "meta",
        &DecomposeMeta {
            nodes: g.node_count(),
            links: g.edge_count(),
            k_min: d.k_min(),
            k_max: d.k_max(),
            average_degree: g.average_degree()?,
            density: g.density()?,
            snapshot: meta,
        },
    )?;

    let mut nodes = Table::new(["node_token", "k_dense_index", "coreness"]);
    for v in g.nodes() {
        nodes.push(row![g.label(v), d.node_index(v), cores.coreness(v)]);
    }
    rep.table("nodes", &nodes)?;

    let mut edges = Table::new(["node_token_u", "node_token_v", "k_dense_index"]);
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        edges.push(row![g.label(u), g.label(v), d.edge_index(e as u32)]);
    }
    rep.table("edges", &edges)?;

    let mut profiles = Table::new(["kind", "k", "x", "y"]);
    for (name, p) in labelled_profiles(&g, &d)? {
        for pt in &p.points {
            profiles.push(row![name.as_str(), pt.k, pt.x, pt.y]);
        }
    }
    rep.table("profiles", &profiles)?;

    let bc = betweenness(&g);
    let mut sets = Table::new([
        "k",
        "nodes",
        "mean_degree",
        "mean_clustering",
        "mean_betweenness",
    ]);
    for (_, k) in focus_sets(&d) {
        let s = set_summary_with(&g, &d, k, &bc)?;
        sets.push(row![
            s.k,
            s.nodes,
            s.mean_degree,
            s.mean_clustering,
            s.mean_betweenness
        ]);
    }
    rep.table("set_summaries", &sets)?;

    let mut by_index = with_columns(&["k"]);
    for (k, s) in kdense::profiles::degree_by_index(&g, &d) {
        let mut r = row![k];
        r.extend(summary_cells(Some(&s)));
        by_index.push(r);
    }
    rep.table("degree_by_index", &by_index)?;

    let index_values: BTreeMap<NodeId, f64> =
        g.nodes().map(|v| (v, d.node_index(v) as f64)).collect();
    let series = logbin_by_degree(&index_values, &g, BINS_PER_DECADE)?;
    let mut by_degree = with_columns(&["degree_lo", "degree_hi", "degree_min", "degree_max"]);
    for b in &series.bins {
        let mut r = row![b.lo, b.hi, b.degree_min, b.degree_max];
        r.extend(summary_cells(Some(&b.summary)));
        by_degree.push(r);
    }
    rep.table("index_by_degree", &by_degree)
}

struct SnapshotAnalysis {
    meta: SnapshotMeta,
    k_max: u32,
    average_degree: f64,
    profiles: Vec<(String, Profile)>,
}

fn compare(cfg: &RunConfig, rep: &Reporter) -> anyhow::Result<()> {
    let snapshots: Vec<SnapshotAnalysis> = cfg
        .inputs
        .par_iter()
        .map(|path| {
            let (g, meta) = load_snapshot(cfg, path)?;
            let d = k_dense_decomposition(&g)?;
            Ok(SnapshotAnalysis {
                meta,
                k_max: d.k_max(),
                average_degree: g.average_degree()?,
                profiles: labelled_profiles(&g, &d)?,
            })
        })
        .collect::<anyhow::Result<_>>()?;

    let mut points = Table::new(["snapshot", "kind", "k", "x", "y"]);
    let mut binned_rows = Table::new(["snapshot", "kind", "bin", "bin_lo", "bin_hi", "y"]);
    let mut by_kind: BTreeMap<String, Vec<BinnedProfile>> = BTreeMap::new();
    for s in &snapshots {
        for (name, p) in &s.profiles {
            for pt in &p.points {
                points.push(row![
                    s.meta.snapshot_id.as_str(),
                    name.as_str(),
                    pt.k,
                    pt.x,
                    pt.y
                ]);
            }
            let b = bin_profile(p, cfg.bin_width)?;
            for bin in &b.bins {
                let (lo, hi) = b.bounds(bin.index);
                binned_rows.push(row![
                    s.meta.snapshot_id.as_str(),
                    name.as_str(),
                    bin.index,
                    lo,
                    hi,
                    bin.y
                ]);
            }
            by_kind.entry(name.clone()).or_default().push(b);
        }
    }
    rep.table("snapshot_profiles", &points)?;
    rep.table("binned_profiles", &binned_rows)?;

    let mut aggregated = with_columns(&["kind", "bin", "bin_lo", "bin_hi"]);
    for (name, binned) in &by_kind {
        let agg = aggregate_profiles(binned)?;
        for (i, bin) in agg.bins.iter().enumerate() {
            let mut r = row![name.as_str(), i, bin.lo, bin.hi];
            r.extend(summary_cells(bin.stats.as_ref()));
            aggregated.push(r);
        }
    }
    rep.table("aggregated_profiles", &aggregated)?;

    let t0 = &snapshots[0];
    let fit = |n: usize| average_degree_fit(n, FIT_SLOPE, FIT_OFFSET);
    let mut growth = Table::new([
        "snapshot",
        "nodes",
        "links",
        "k_max",
        "average_degree",
        "nodes_ratio",
        "links_ratio",
        "k_max_ratio",
        "average_degree_ratio",
        "average_degree_fit",
        "average_degree_fit_ratio",
    ]);
    for s in &snapshots {
        let (n, m) = (s.meta.node_count, s.meta.link_count);
        growth.push(row![
            s.meta.snapshot_id.as_str(),
            n,
            m,
            s.k_max,
            s.average_degree,
            n as f64 / t0.meta.node_count as f64,
            m as f64 / t0.meta.link_count as f64,
            s.k_max as f64 / t0.k_max as f64,
            s.average_degree / t0.average_degree,
            fit(n),
            fit(n) / fit(t0.meta.node_count),
        ]);
    }
    rep.table("growth", &growth)
}

#[derive(Serialize)]
struct NullSummary {
    template: SizeRecord,
    d: DkOrder,
    instances: usize,
    swap_factor: f64,
    mean_k_max: f64,
    sigma_k_max: f64,
    /// Present for d >= 1.
    degree_sequence_preserved: Option<bool>,
    /// Present for d = 2.
    joint_degree_matrix_preserved: Option<bool>,
}

#[derive(Serialize)]
struct SizeRecord {
    nodes: usize,
    links: usize,
    k_max: u32,
}

fn null(cfg: &RunConfig, rep: &Reporter) -> anyhow::Result<()> {
    let (g, _) = load_snapshot(cfg, &cfg.inputs[0])?;
    let spec = EnsembleSpec {
        d: cfg.dk_order()?,
        instances: cfg.instance_count(),
        seed: cfg.seed,
        swap_factor: cfg.swap_factor,
    };
    spec.validate()?;
    let template = k_dense_decomposition(&g)?;

    let results: Vec<kdense::Result<Graph>> = (0..spec.instances)
        .into_par_iter()
        .map(|i| generate_instance(&spec, &g, i))
        .collect();
    let mut entries = Vec::new();
    let mut first_error = None;
    for (i, r) in results.iter().enumerate() {
        match r {
            Ok(h) => {
                let path = format!("instances/instance_{i:03}.txt");
                rep.edge_list(&path, h)?;
                entries.push(ManifestEntry {
                    index: i,
                    seed: spec.instance_seed(i),
                    path,
                });
            }
            Err(e) if first_error.is_none() => first_error = Some(format!("instance {i}: {e}")),
            Err(_) => {}
        }
    }
    let manifest = EnsembleManifest {
        spec: spec.clone(),
        instances: entries,
        complete: first_error.is_none(),
    };
    rep.json("manifest", &manifest)?;
    if let Some(e) = first_error {
        bail!("ensemble generation failed at {e}");
    }
    let graphs: Vec<Graph> = results
        .into_iter()
        .map(|r| r.expect("checked above"))
        .collect();

    let decomps: Vec<DenseDecomposition> = graphs
        .par_iter()
        .map(k_dense_decomposition)
        .collect::<kdense::Result<_>>()?;
    let k_maxes: Vec<f64> = decomps.iter().map(|d| d.k_max() as f64).collect();

    let mut kmax_table = Table::new(["instance", "seed", "k_max"]);
    for (i, d) in decomps.iter().enumerate() {
        kmax_table.push(row![i, spec.instance_seed(i), d.k_max()]);
    }
    rep.table("k_max", &kmax_table)?;

    let template_degrees = DegreeSequence::from_graph(&g);
    let template_jdm = joint_degree_matrix(&g);
    rep.json(
        "null_summary",
        &NullSummary {
            template: SizeRecord {
                nodes: g.node_count(),
                links: g.edge_count(),
                k_max: template.k_max(),
            },
            d: spec.d,
            instances: spec.instances,
            swap_factor: spec.swap_factor,
            mean_k_max: mean(&k_maxes),
            sigma_k_max: std_dev(&k_maxes),
            degree_sequence_preserved: (spec.d != DkOrder::Zero).then(|| {
                graphs
                    .iter()
                    .all(|h| DegreeSequence::from_graph(h) == template_degrees)
            }),
            joint_degree_matrix_preserved: (spec.d == DkOrder::Two).then(|| {
                graphs
                    .iter()
                    .all(|h| joint_degree_matrix(h) == template_jdm)
            }),
        },
    )?;

    let template_binned = bin_profile(
        &link_fraction_profile(&template, g.edge_count())?,
        cfg.bin_width,
    )?;
    let binned: Vec<BinnedProfile> = decomps
        .iter()
        .map(|d| bin_profile(&link_fraction_profile(d, d.edge_count())?, cfg.bin_width))
        .collect::<kdense::Result<_>>()?;
    let agg = aggregate_profiles(&binned)?;
    let template_y: BTreeMap<usize, f64> = template_binned
        .bins
        .iter()
        .map(|b| (b.index, b.y))
        .collect();
    let mut overlay = with_columns(&["bin", "bin_lo", "bin_hi", "template_y"]);
    for (i, bin) in agg.bins.iter().enumerate() {
        let mut r = row![i, bin.lo, bin.hi, template_y.get(&i).copied()];
        r.extend(summary_cells(bin.stats.as_ref()));
        overlay.push(r);
    }
    rep.table("link_profiles", &overlay)
}

#[derive(Serialize)]
struct CoreRecord {
    k_max: u32,
    nodes: usize,
    links: usize,
    density: f64,
    instances: usize,
    one_k_degree_sequence_preserved: bool,
}

/// Per-node metric values of one graph, keyed by degree.
fn degree_samples(g: &Graph, into: &mut BTreeMap<&'static str, BTreeMap<usize, Vec<f64>>>) {
    let bc = betweenness(g);
    for v in g.nodes() {
        let deg = g.degree(v);
        if deg == 0 {
            continue;
        }
        let knn = average_neighbor_degree(g, v).expect("node has neighbors");
        for (metric, x) in [
            ("knn", knn),
            ("clustering", clustering(g, v)),
            ("betweenness", bc[v as usize]),
        ] {
            into.entry(metric)
                .or_default()
                .entry(deg)
                .or_default()
                .push(x);
        }
    }
}

fn path_fractions(g: &Graph) -> BTreeMap<usize, f64> {
    let hist = shortest_path_distribution(g);
    let total: u64 = hist.values().sum();
    hist.into_iter()
        .map(|(len, c)| (len, c as f64 / total.max(1) as f64))
        .collect()
}

fn core(cfg: &RunConfig, rep: &Reporter) -> anyhow::Result<()> {
    let (g, _) = load_snapshot(cfg, &cfg.inputs[0])?;
    let (core, k_max) = extract_kmax_core(&g)?;
    let instances = cfg.instance_count();
    let ensemble = |d: DkOrder| -> anyhow::Result<Vec<Graph>> {
        let spec = EnsembleSpec {
            d,
            instances,
            seed: cfg.seed,
            swap_factor: cfg.swap_factor,
        };
        Ok(kdense::null_models::generate_ensemble(&spec, &core)?)
    };
    let zero = ensemble(DkOrder::Zero)?;
    let one = ensemble(DkOrder::One)?;
    let core_degrees = DegreeSequence::from_graph(&core);
    rep.json(
        "core",
        &CoreRecord {
            k_max,
            nodes: core.node_count(),
            links: core.edge_count(),
            density: core.density()?,
            instances,
            one_k_degree_sequence_preserved: one
                .iter()
                .all(|h| DegreeSequence::from_graph(h) == core_degrees),
        },
    )?;

    let groups: [(&str, &[Graph]); 3] = [
        ("core", std::slice::from_ref(&core)),
        ("0k", &zero),
        ("1k", &one),
    ];

    let mut per_degree = with_columns(&["graph", "metric", "degree"]);
    for (name, graphs) in groups {
        let mut samples = BTreeMap::new();
        for h in graphs {
            degree_samples(h, &mut samples);
        }
        for (metric, by_deg) in &samples {
            for (deg, xs) in by_deg {
                let mut r = row![name, *metric, *deg];
                r.extend(summary_cells(Summary::of(xs).as_ref()));
                per_degree.push(r);
            }
        }
    }
    rep.table("per_degree", &per_degree)?;

    let mut paths = with_columns(&["graph", "length"]);
    for (name, graphs) in groups {
        let fractions: Vec<BTreeMap<usize, f64>> = graphs.par_iter().map(path_fractions).collect();
        let lengths: BTreeSet<usize> = fractions.iter().flat_map(|f| f.keys().copied()).collect();
        for len in lengths {
            let xs: Vec<f64> = fractions
                .iter()
                .map(|f| f.get(&len).copied().unwrap_or(0.0))
                .collect();
            let mut r = row![name, len];
            r.extend(summary_cells(Summary::of(&xs).as_ref()));
            paths.push(r);
        }
    }
    rep.table("path_distribution", &paths)?;

    let mut motifs = Table::new(["model", "size", "class", "x", "mean", "sigma", "z"]);
    for size in [3, 4] {
        let target = motif_census(&core, size)?;
        for (model, graphs) in [("0k", &zero), ("1k", &one)] {
            let censuses: Vec<MotifCensus> = graphs
                .par_iter()
                .map(|h| motif_census(h, size))
                .collect::<kdense::Result<_>>()?;
            for (class, z) in motif_zscores(&target, &censuses)? {
                let zc: Cell = match z.z {
                    ZScore::Finite(v) => v.into(),
                    other => other.to_string().into(),
                };
                motifs.push(vec![
                    model.into(),
                    size.into(),
                    class.name().into(),
                    z.x.into(),
                    z.mean.into(),
                    z.sigma.into(),
                    zc,
                ]);
            }
        }
    }
    rep.table("motif_zscores", &motifs)
}

#[derive(Serialize)]
struct ConeSummary {
    k_max: u32,
    set_size: usize,
    /// Members of the k_max-dense-set present in the relationship data; only
    /// these have cones.
    set_in_relationships: usize,
    relationship_ases: usize,
    p2c_links: usize,
    peer_links: usize,
}

fn open(path: &Path) -> anyhow::Result<BufReader<File>> {
    Ok(BufReader::new(
        File::open(path).with_context(|| format!("opening {}", path.display()))?,
    ))
}

fn cone(cfg: &RunConfig, rep: &Reporter) -> anyhow::Result<()> {
    let (g, _) = load_snapshot(cfg, &cfg.inputs[0])?;
    let rel_path = cfg
        .relationships
        .as_ref()
        .context("cone needs --relationships")?;
    let rel: RelationshipGraph = load_relationships(open(rel_path)?)
        .with_context(|| format!("loading {}", rel_path.display()))?;
    let weights: Option<HashMap<String, u64>> = match &cfg.weights {
        Some(p) => {
            Some(load_weights(open(p)?).with_context(|| format!("loading {}", p.display()))?)
        }
        None => None,
    };
    let d = k_dense_decomposition(&g)?;
    let dense_set: BTreeSet<String> = d
        .set(d.k_max())?
        .into_iter()
        .map(|v| g.label(v).to_string())
        .collect();
    let known: BTreeSet<String> = dense_set
        .iter()
        .filter(|t| rel.contains(t))
        .cloned()
        .collect();

    rep.json(
        "cone_summary",
        &ConeSummary {
            k_max: d.k_max(),
            set_size: dense_set.len(),
            set_in_relationships: known.len(),
            relationship_ases: rel.as_count(),
            p2c_links: rel.p2c_edges().len(),
            peer_links: rel.peer_count(),
        },
    )?;

    let mut dist = Table::new(["population", "weight", "cone_value", "as_count"]);
    let mut weightings: Vec<(&str, Option<&HashMap<String, u64>>)> = vec![("as_count", None)];
    if let Some(w) = &weights {
        weightings.push(("address", Some(w)));
    }
    for (population, subset) in [("all", None), ("kmax_set", Some(&known))] {
        for &(wname, w) in &weightings {
            for (value, count) in cone_distribution(&rel, subset, w)? {
                dist.push(row![population, wname, value, count]);
            }
        }
    }
    rep.table("cone_distribution", &dist)?;

    let degrees: HashMap<String, f64> = g
        .nodes()
        .map(|v| (g.label(v).to_string(), g.degree(v) as f64))
        .collect();
    let mut rankings = vec![top_n_by_metric(&degrees, degrees.len(), "degree")?];
    for p in &cfg.ranks {
        let name = p
            .file_stem()
            .map_or_else(|| "ranks".to_string(), |s| s.to_string_lossy().into_owned());
        rankings.push(
            load_ranked_list(&name, open(p)?)
                .with_context(|| format!("loading {}", p.display()))?,
        );
    }
    let mut overlap = Table::new(["ranking", "top_n", "overlap", "set_size"]);
    for r in &rankings {
        let n = dense_set.len().min(r.len());
        overlap.push(row![
            r.metric_name.as_str(),
            n,
            rank_overlap(&dense_set, r, n)?,
            dense_set.len()
        ]);
    }
    rep.table("overlap", &overlap)
}
