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

//! Pipeline behind the `kdense` binary.
//!
//! A [`RunConfig`] names one command and its inputs; [`run`] validates it,
//! executes the command and writes reports into the output directory. A
//! failed run leaves an `INCOMPLETE` file next to whatever was written.

pub mod commands;
pub mod config;
pub mod report;

use std::fs;

pub use config::{Command, Format, RunConfig};

pub const INCOMPLETE_MARKER: &str = "INCOMPLETE";

pub fn run(cfg: &RunConfig) -> anyhow::Result<()> {
    let marker = cfg.out.join(INCOMPLETE_MARKER);
    if marker.exists() {
        fs::remove_file(&marker)?;
    }
    let result = cfg
        .validate()
        .and_then(|()| report::Reporter::new(cfg))
        .and_then(|rep| commands::dispatch(cfg, &rep));
    if let Err(e) = &result {
        if fs::create_dir_all(&cfg.out).is_ok() {
            let _ = fs::write(&marker, format!("{e:#}\n"));
        }
    }
    result
}
