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

//! k-dense decomposition toolkit for AS-level network snapshots.
//!
//! The crate is organized bottom-up:
//!
//! - [`graph`]: immutable simple graphs, edge-list ingestion and local primitives
//!   (edge multiplicity, common neighbors, density).
//! - [`decomposition`]: k-dense and k-core decompositions, shells, sets and
//!   `H_kmax` extraction.
//! - [`null_models`]: 0K/1K/2K random graph generators and graphicality tests.
//! - [`metrics`]: clustering, betweenness, path-length histograms, motif census
//!   and degree binning.
//! - [`profiles`]: normalized decomposition profiles and their aggregation
//!   across snapshots.
//! - [`asdata`]: provider-to-customer relationship graphs, customer cones and
//!   rank overlaps.

pub mod asdata;
pub mod decomposition;
mod error;
pub mod graph;
pub mod metrics;
pub mod null_models;
pub mod profiles;
pub mod stats;

pub use error::{Error, Result};
pub use graph::{EdgeId, Graph, NodeId, SnapshotMeta};
