//! File formats: JSON state files and plain-text graph files.

use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::state::StateVector;

/// Input norm may differ from 1 by this much before a state file is rejected.
pub const NORM_SLACK: f64 = 1e-6;

/// `{ "n": int, "amplitudes": [[re, im], ...] }`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateFile {
    pub n: usize,
    pub amplitudes: Vec<[f64; 2]>,
}

impl StateFile {
    pub fn from_state(state: &StateVector) -> Self {
        Self {
            n: state.n(),
            amplitudes: state.amplitudes().iter().map(|a| [a.re, a.im]).collect(),
        }
    }

    pub fn into_state(self) -> Result<StateVector> {
        let amps = self
            .amplitudes
            .into_iter()
            .map(|[re, im]| Complex64::new(re, im))
            .collect();
        StateVector::normalized(self.n, amps, NORM_SLACK)
    }
}

pub fn parse_state(json: &str) -> Result<StateVector> {
    let file: StateFile =
        serde_json::from_str(json).map_err(|e| Error::Parse(format!("state file: {e}")))?;
    file.into_state()
}

pub fn state_to_json(state: &StateVector) -> String {
    serde_json::to_string_pretty(&StateFile::from_state(state)).expect("state serializes")
}

pub fn read_state(path: &Path) -> Result<StateVector> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
    parse_state(&text)
}

pub fn read_graph(path: &Path) -> Result<Graph> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
    Graph::parse(&text)
}
