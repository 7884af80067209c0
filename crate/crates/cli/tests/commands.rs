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

use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command as Process;

use kdense_cli::{run, Command, Format, RunConfig, INCOMPLETE_MARKER};
use serde_json::Value;
use tempfile::TempDir;

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

fn complete_text(n: usize) -> String {
    let mut s = String::new();
    for u in 0..n {
        for v in u + 1..n {
            s.push_str(&format!("{u} {v}\n"));
        }
    }
    s
}

fn json(path: PathBuf) -> Value {
    serde_json::from_slice(
        &fs::read(&path).unwrap_or_else(|_| panic!("missing {}", path.display())),
    )
    .unwrap()
}

/// CSV rows below the header comments, split into fields.
fn csv_rows(path: PathBuf) -> Vec<Vec<String>> {
    let text = fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing {}", path.display()));
    let mut r = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    r.records()
        .map(|rec| rec.unwrap().iter().map(String::from).collect())
        .collect()
}

fn config(tmp: &TempDir, command: Command, inputs: Vec<PathBuf>) -> RunConfig {
    RunConfig {
        command,
        inputs,
        out: tmp.path().join("out"),
        ..RunConfig::default()
    }
}

#[test]
fn decompose_reports_size_and_top_index() {
    let tmp = TempDir::new().unwrap();
    let tri = write(tmp.path(), "tri.txt", "a b\nb c\na c\nc d\n");
    let cfg = config(&tmp, Command::Decompose, vec![tri]);
    run(&cfg).unwrap();
    let meta = json(cfg.out.join("meta.json"));
    assert_eq!(
        (
            meta["nodes"].as_u64(),
            meta["links"].as_u64(),
            meta["k_max"].as_u64()
        ),
        (Some(4), Some(4), Some(3))
    );
    assert_eq!(meta["header"]["seed"], 0);
    let nodes = csv_rows(cfg.out.join("nodes.csv"));
    assert_eq!(nodes[3], ["d", "2", "1"]);
    for name in [
        "edges.csv",
        "profiles.csv",
        "set_summaries.csv",
        "degree_by_index.csv",
        "index_by_degree.csv",
    ] {
        let text = fs::read_to_string(cfg.out.join(name)).unwrap();
        assert!(text.starts_with("# kdense "), "{name}");
    }

    let k5 = write(tmp.path(), "k5.txt", &complete_text(5));
    let cfg = RunConfig {
        format: Format::Json,
        ..config(&tmp, Command::Decompose, vec![k5])
    };
    run(&cfg).unwrap();
    let meta = json(cfg.out.join("meta.json"));
    assert_eq!(
        (
            meta["nodes"].as_u64(),
            meta["links"].as_u64(),
            meta["k_max"].as_u64()
        ),
        (Some(5), Some(10), Some(5))
    );
    let nodes = json(cfg.out.join("nodes.json"));
    assert_eq!(nodes["rows"].as_array().unwrap().len(), 5);
    assert!(nodes["header"]["config_hash"].is_string());
}

#[test]
fn compare_growth_and_bands() {
    let tmp = TempDir::new().unwrap();
    let inputs: Vec<PathBuf> = (4..=6)
        .map(|n| write(tmp.path(), &format!("k{n}.txt"), &complete_text(n)))
        .collect();
    let cfg = config(&tmp, Command::Compare, inputs);
    run(&cfg).unwrap();
    let growth = csv_rows(cfg.out.join("growth.csv"));
    let ratios: Vec<&str> = growth.iter().map(|r| r[7].as_str()).collect();
    assert_eq!(ratios, ["1", "1.25", "1.5"]);

    let twice = write(tmp.path(), "g.txt", "1 2\n2 3\n1 3\n3 4\n4 5\n3 5\n5 6\n");
    let cfg = config(&tmp, Command::Compare, vec![twice.clone(), twice]);
    run(&cfg).unwrap();
    for r in csv_rows(cfg.out.join("aggregated_profiles.csv")) {
        // mean, p10, p90, min, max, n
        if r[9] != "0" {
            assert_eq!(r[5], r[6]);
            assert_eq!(r[7], r[8]);
        }
    }
}

#[test]
fn compare_single_snapshot_reproduces_its_profile() {
    let tmp = TempDir::new().unwrap();
    let g = write(
        tmp.path(),
        "g.txt",
        "1 2\n2 3\n1 3\n3 4\n4 5\n3 5\n5 6\n2 4\n",
    );
    let cfg = config(&tmp, Command::Compare, vec![g]);
    run(&cfg).unwrap();
    let binned = csv_rows(cfg.out.join("binned_profiles.csv"));
    let agg = csv_rows(cfg.out.join("aggregated_profiles.csv"));
    for b in &binned {
        let a = agg.iter().find(|a| a[0] == b[1] && a[1] == b[2]).unwrap();
        assert_eq!(a[4], b[5]);
        assert_eq!(a[9], "1");
    }
    let occupied = agg.iter().filter(|a| a[9] != "0").count();
    assert_eq!(occupied, binned.len());
}

#[test]
fn null_one_k_of_complete_graph_is_rigid() {
    let tmp = TempDir::new().unwrap();
    let k5 = write(tmp.path(), "k5.txt", &complete_text(5));
    let cfg = RunConfig {
        d: 1,
        instances: Some(4),
        ..config(&tmp, Command::Null, vec![k5])
    };
    run(&cfg).unwrap();
    let s = json(cfg.out.join("null_summary.json"));
    assert_eq!(s["mean_k_max"], 5.0);
    assert_eq!(s["sigma_k_max"], 0.0);
    assert_eq!(s["degree_sequence_preserved"], true);
    let manifest = json(cfg.out.join("manifest.json"));
    assert_eq!(manifest["complete"], true);
    let entries = manifest["instances"].as_array().unwrap();
    assert_eq!(entries.len(), 4);
    for e in entries {
        let path = cfg.out.join(e["path"].as_str().unwrap());
        let (g, _) =
            kdense::graph::load_edge_list(fs::read(path).unwrap().as_slice(), None).unwrap();
        assert_eq!(g.edge_count(), 10);
    }
}

#[test]
fn null_two_k_preserves_joint_degrees() {
    let tmp = TempDir::new().unwrap();
    let mut text = String::new();
    for (u, v) in kdense::null_models::gnp(40, 0.15, 3).edges() {
        text.push_str(&format!("{u} {v}\n"));
    }
    let g = write(tmp.path(), "g.txt", &text);
    let cfg = RunConfig {
        d: 2,
        instances: Some(3),
        ..config(&tmp, Command::Null, vec![g])
    };
    run(&cfg).unwrap();
    let s = json(cfg.out.join("null_summary.json"));
    assert_eq!(s["joint_degree_matrix_preserved"], true);
    assert_eq!(s["degree_sequence_preserved"], true);
    assert_eq!(csv_rows(cfg.out.join("link_profiles.csv")).len(), 20);
}

#[test]
fn core_of_clique_with_tail() {
    let tmp = TempDir::new().unwrap();
    let text = complete_text(6) + "5 6\n6 7\n7 8\n";
    let g = write(tmp.path(), "g.txt", &text);
    let cfg = RunConfig {
        instances: Some(3),
        ..config(&tmp, Command::Core, vec![g])
    };
    run(&cfg).unwrap();
    let rec = json(cfg.out.join("core.json"));
    assert_eq!(rec["k_max"], 6);
    assert_eq!(rec["nodes"], 6);
    assert_eq!(rec["links"], 15);
    assert_eq!(rec["density"], 1.0);
    assert_eq!(rec["one_k_degree_sequence_preserved"], true);
    let z = csv_rows(cfg.out.join("motif_zscores.csv"));
    assert_eq!(z.len(), 2 * (2 + 6));
    for name in ["per_degree.csv", "path_distribution.csv"] {
        assert!(!csv_rows(cfg.out.join(name)).is_empty());
    }
}

#[test]
fn core_of_triangle_free_graph_fails_with_marker() {
    let tmp = TempDir::new().unwrap();
    let g = write(tmp.path(), "g.txt", "1 2\n2 3\n3 4\n");
    let cfg = config(&tmp, Command::Core, vec![g]);
    assert!(run(&cfg).is_err());
    assert!(cfg.out.join(INCOMPLETE_MARKER).exists());
}

#[test]
fn cone_chain_over_triangle() {
    let tmp = TempDir::new().unwrap();
    let g = write(tmp.path(), "g.txt", "1 2\n2 3\n1 3\n");
    let rel = write(tmp.path(), "rel.txt", "1|2|-1\n2|3|-1\n");
    let ranks = write(
        tmp.path(),
        "asrank.csv",
        "rank,as_token,score\n1,3,9\n2,1,8\n3,2,7\n",
    );
    let cfg = RunConfig {
        relationships: Some(rel),
        ranks: vec![ranks],
        ..config(&tmp, Command::Cone, vec![g])
    };
    run(&cfg).unwrap();
    let dist = csv_rows(cfg.out.join("cone_distribution.csv"));
    let all: Vec<(&str, &str)> = dist
        .iter()
        .filter(|r| r[0] == "all")
        .map(|r| (r[2].as_str(), r[3].as_str()))
        .collect();
    assert_eq!(all, [("1", "1"), ("2", "1"), ("3", "1")]);
    let overlap = csv_rows(cfg.out.join("overlap.csv"));
    assert_eq!(overlap[1], ["asrank", "3", "3", "3"]);
}

#[test]
fn cone_without_relationships_is_a_config_error() {
    let tmp = TempDir::new().unwrap();
    let g = write(tmp.path(), "g.txt", "1 2\n");
    assert!(run(&config(&tmp, Command::Cone, vec![g])).is_err());
}

#[test]
fn binary_exit_status_and_config_file() {
    let tmp = TempDir::new().unwrap();
    let g = write(tmp.path(), "g.txt", &complete_text(4));
    let out = tmp.path().join("out");
    let conf = write(
        tmp.path(),
        "run.toml",
        &format!(
            "inputs = [{:?}]\nformat = \"json\"\nseed = 3\n",
            g.to_str().unwrap()
        ),
    );
    let status = Process::new(env!("CARGO_BIN_EXE_kdense"))
        .args([
            "decompose",
            "--config",
            conf.to_str().unwrap(),
            "--seed",
            "11",
            "--out",
            out.to_str().unwrap(),
        ])
        .status()
        .unwrap();
    assert!(status.success());
    let meta = json(out.join("meta.json"));
    assert_eq!(meta["header"]["seed"], 11);
    assert!(out.join("nodes.json").exists());
    assert!(!out.join(INCOMPLETE_MARKER).exists());

    let bad = write(tmp.path(), "bad.txt", "1 2 notanumber\n");
    let status = Process::new(env!("CARGO_BIN_EXE_kdense"))
        .args([
            "decompose",
            "--input",
            bad.to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
        ])
        .status()
        .unwrap();
    assert!(!status.success());
    assert!(out.join(INCOMPLETE_MARKER).exists());
}
