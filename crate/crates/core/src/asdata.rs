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

//! AS business relationships, customer cones and rank overlaps.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::io::BufRead;

use rayon::prelude::*;
use serde::Serialize;

use crate::graph::token_cmp;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Relation {
    /// First AS is the provider of the second.
    ProviderCustomer,
    Peer,
}

/// Provider-to-customer arcs plus undirected peerings over AS tokens.
#[derive(Debug, Clone, Default)]
pub struct RelationshipGraph {
    tokens: Vec<String>,
    index: HashMap<String, u32>,
    customers: Vec<Vec<u32>>,
    peers: BTreeSet<(u32, u32)>,
}

impl RelationshipGraph {
    fn intern(&mut self, token: &str) -> u32 {
        if let Some(&id) = self.index.get(token) {
            return id;
        }
        let id = self.tokens.len() as u32;
        self.tokens.push(token.to_string());
        self.index.insert(token.to_string(), id);
        self.customers.push(Vec::new());
        id
    }

    pub fn as_count(&self) -> usize {
        self.tokens.len()
    }

    pub fn contains(&self, token: &str) -> bool {
        self.index.contains_key(token)
    }

    /// All AS tokens, in token order.
    pub fn tokens(&self) -> Vec<&str> {
        let mut out: Vec<&str> = self.tokens.iter().map(String::as_str).collect();
        out.sort_by(|a, b| token_cmp(a, b));
        out
    }

    /// `(provider, customer)` pairs in token order.
    pub fn p2c_edges(&self) -> Vec<(&str, &str)> {
        let mut out: Vec<(&str, &str)> = self
            .customers
            .iter()
            .enumerate()
            .flat_map(|(p, cs)| {
                cs.iter()
                    .map(move |&c| (self.tokens[p].as_str(), self.tokens[c as usize].as_str()))
            })
            .collect();
        out.sort_by(|a, b| token_cmp(a.0, b.0).then_with(|| token_cmp(a.1, b.1)));
        out
    }

    pub fn peer_count(&self) -> usize {
        self.peers.len()
    }

    fn id(&self, token: &str) -> Result<u32> {
        self.index
            .get(token)
            .copied()
            .ok_or_else(|| Error::domain(format!("AS {token} has no relationships")))
    }

    fn cone_ids(&self, start: u32) -> Vec<u32> {
        let mut seen = vec![false; self.tokens.len()];
        let mut stack = vec![start];
        let mut out = Vec::new();
        seen[start as usize] = true;
        while let Some(a) = stack.pop() {
            out.push(a);
            for &c in &self.customers[a as usize] {
                if !seen[c as usize] {
                    seen[c as usize] = true;
                    stack.push(c);
                }
            }
        }
        out
    }
}

/// Parses `A|B|r` lines, `r = -1` when A is a provider of B and `r = 0` for
/// peers. A fourth field (a data source tag in some published files) is
/// ignored. Repeated lines collapse; contradicting lines are an error.
pub fn load_relationships<R: BufRead>(source: R) -> Result<RelationshipGraph> {
    let mut rg = RelationshipGraph::default();
    let mut seen: HashMap<(u32, u32), (Relation, bool)> = HashMap::new();
    for (lineno, line) in source.lines().enumerate() {
        let line = line?;
        let content = line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let fields: Vec<&str> = content.split('|').map(str::trim).collect();
        if fields.len() != 3 && fields.len() != 4 {
            return Err(Error::parse(
                lineno + 1,
                format!("expected A|B|r, got {content:?}"),
            ));
        }
        let (a, b) = (fields[0], fields[1]);
        if a.is_empty() || b.is_empty() {
            return Err(Error::parse(lineno + 1, "empty AS token"));
        }
        if a == b {
            return Err(Error::parse(
                lineno + 1,
                format!("self-relation for AS {a}"),
            ));
        }
        let rel = match fields[2] {
            "-1" => Relation::ProviderCustomer,
            "0" => Relation::Peer,
            other => {
                return Err(Error::parse(
                    lineno + 1,
                    format!("unknown relation {other:?}"),
                ))
            }
        };
        let (ia, ib) = (rg.intern(a), rg.intern(b));
        // Key on the unordered pair; remember whether the line's first AS is
        // the smaller id, which fixes the provider side for p2c.
        let key = (ia.min(ib), ia.max(ib));
        let forward = ia < ib;
        match seen.get(&key) {
            Some(&(prev, prev_forward)) => {
                let same = prev == rel && (rel == Relation::Peer || prev_forward == forward);
                if !same {
                    return Err(Error::parse(
                        lineno + 1,
                        format!("conflicting relationship for {a}|{b}"),
                    ));
                }
            }
            None => {
                seen.insert(key, (rel, forward));
                match rel {
                    Relation::ProviderCustomer => rg.customers[ia as usize].push(ib),
                    Relation::Peer => {
                        rg.peers.insert(key);
                    }
                }
            }
        }
    }
    Ok(rg)
}

/// ASes reachable from `token` over provider-to-customer arcs, including
/// `token` itself. Cycles in the input are fine.
pub fn customer_cone(r: &RelationshipGraph, token: &str) -> Result<BTreeSet<String>> {
    let id = r.id(token)?;
    Ok(r.cone_ids(id)
        .into_iter()
        .map(|a| r.tokens[a as usize].clone())
        .collect())
}

/// Sum of per-AS weights over the cone of `token`. Without weights every AS
/// counts 1; with weights, ASes missing from the map count 0.
pub fn cone_weight(
    r: &RelationshipGraph,
    token: &str,
    weights: Option<&HashMap<String, u64>>,
) -> Result<u64> {
    let id = r.id(token)?;
    Ok(weigh(r, &r.cone_ids(id), weights))
}

fn weigh(r: &RelationshipGraph, cone: &[u32], weights: Option<&HashMap<String, u64>>) -> u64 {
    match weights {
        None => cone.len() as u64,
        Some(w) => cone
            .iter()
            .map(|&a| w.get(&r.tokens[a as usize]).copied().unwrap_or(0))
            .sum(),
    }
}

/// Sorted `(cone weight, number of ASes)` pairs over `subset` (default: every
/// AS in `r`). Cones are computed in parallel.
pub fn cone_distribution(
    r: &RelationshipGraph,
    subset: Option<&BTreeSet<String>>,
    weights: Option<&HashMap<String, u64>>,
) -> Result<Vec<(u64, usize)>> {
    let ids: Vec<u32> = match subset {
        None => (0..r.as_count() as u32).collect(),
        Some(s) => s.iter().map(|t| r.id(t)).collect::<Result<_>>()?,
    };
    let values: Vec<u64> = ids
        .par_iter()
        .map(|&a| weigh(r, &r.cone_ids(a), weights))
        .collect();
    let mut hist: BTreeMap<u64, usize> = BTreeMap::new();
    for v in values {
        *hist.entry(v).or_default() += 1;
    }
    Ok(hist.into_iter().collect())
}

/// Parses `as_token,weight` CSV rows; a non-numeric first line is taken as a
/// header.
pub fn load_weights<R: BufRead>(source: R) -> Result<HashMap<String, u64>> {
    let mut out = HashMap::new();
    for (lineno, line) in source.lines().enumerate() {
        let line = line?;
        let content = line.trim();
        if content.is_empty() || content.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = content.split(',').map(str::trim).collect();
        if fields.len() != 2 {
            return Err(Error::parse(lineno + 1, "expected as_token,weight"));
        }
        match fields[1].parse::<u64>() {
            Ok(w) => {
                out.insert(fields[0].to_string(), w);
            }
            Err(_) if out.is_empty() && lineno == 0 => continue,
            Err(_) => {
                return Err(Error::parse(
                    lineno + 1,
                    format!("bad weight {:?}", fields[1]),
                ))
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankedList {
    pub metric_name: String,
    entries: Vec<(String, f64)>,
}

impl RankedList {
    /// Entries must have unique tokens and non-increasing scores.
    pub fn new(metric_name: impl Into<String>, entries: Vec<(String, f64)>) -> Result<Self> {
        let mut tokens = BTreeSet::new();
        for (t, _) in &entries {
            if !tokens.insert(t.as_str()) {
                return Err(Error::domain(format!("duplicate AS {t} in ranked list")));
            }
        }
        if entries.windows(2).any(|w| w[1].1 > w[0].1) {
            return Err(Error::domain("ranked list scores must be non-increasing"));
        }
        Ok(RankedList {
            metric_name: metric_name.into(),
            entries,
        })
    }

    pub fn entries(&self) -> &[(String, f64)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn top(&self, n: usize) -> impl Iterator<Item = &str> {
        self.entries.iter().take(n).map(|(t, _)| t.as_str())
    }
}

/// Parses `rank,as_token,score` CSV rows (header optional) into a list
/// ordered by rank.
pub fn load_ranked_list<R: BufRead>(metric_name: &str, source: R) -> Result<RankedList> {
    let mut rows: Vec<(u64, String, f64)> = Vec::new();
    for (lineno, line) in source.lines().enumerate() {
        let line = line?;
        let content = line.trim();
        if content.is_empty() || content.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = content.split(',').map(str::trim).collect();
        if fields.len() != 3 {
            return Err(Error::parse(lineno + 1, "expected rank,as_token,score"));
        }
        let rank = fields[0].parse::<u64>();
        let score = fields[2].parse::<f64>();
        match (rank, score) {
            (Ok(rank), Ok(score)) => rows.push((rank, fields[1].to_string(), score)),
            _ if rows.is_empty() && lineno == 0 => continue,
            _ => {
                return Err(Error::parse(
                    lineno + 1,
                    format!("bad rank row {content:?}"),
                ))
            }
        }
    }
    rows.sort_by_key(|r| r.0);
    RankedList::new(
        metric_name,
        rows.into_iter().map(|(_, t, s)| (t, s)).collect(),
    )
}

/// `|s ∩ top_n(ranked)|`.
pub fn rank_overlap(s: &BTreeSet<String>, ranked: &RankedList, top_n: usize) -> Result<usize> {
    if top_n > ranked.len() {
        return Err(Error::domain(format!(
            "top {top_n} requested from a list of {}",
            ranked.len()
        )));
    }
    Ok(ranked.top(top_n).filter(|t| s.contains(*t)).count())
}

/// The `n` highest-scoring ASes, ties broken by ascending token.
pub fn top_n_by_metric(
    values: &HashMap<String, f64>,
    n: usize,
    metric_name: &str,
) -> Result<RankedList> {
    if n > values.len() {
        return Err(Error::domain(format!(
            "top {n} requested from {} values",
            values.len()
        )));
    }
    let mut all: Vec<(&String, f64)> = values.iter().map(|(t, &v)| (t, v)).collect();
    all.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| token_cmp(a.0, b.0)));
    RankedList::new(
        metric_name,
        all.into_iter()
            .take(n)
            .map(|(t, v)| (t.clone(), v))
            .collect(),
    )
}
