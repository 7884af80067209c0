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

#![allow(dead_code)]

use kdense::Graph;
use proptest::prelude::*;

/// Random simple graph on `min_n..=max_n` nodes with edge probability drawn
/// from `[0.1, 0.9]`.
pub fn arb_graph(min_n: usize, max_n: usize) -> impl Strategy<Value = Graph> {
    (min_n..=max_n, 0.1f64..0.9, any::<u64>())
        .prop_map(|(n, p, seed)| kdense::null_models::gnp(n, p, seed))
}

/// Random graph guaranteed to have at least one edge.
pub fn arb_nonempty_graph(min_n: usize, max_n: usize) -> impl Strategy<Value = Graph> {
    arb_graph(min_n.max(2), max_n).prop_filter("needs an edge", |g| g.edge_count() > 0)
}

pub fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
}
