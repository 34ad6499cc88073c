//! JSON state files.
//!
//! ```json
//! { "d": 4, "n": 2,
//!   "amplitudes": [ { "orbitals": [0, 1], "re": 1.0, "im": 0.0 },
//!                   { "orbitals": [2, 3], "re": 1.0, "im": 0.0 } ] }
//! ```
//!
//! Orbitals are 0-based and strictly increasing. Omitted tuples are zero.
//! The loader normalizes and reports the norm it found.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::state::FermionState;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateFile {
    pub d: usize,
    pub n: usize,
    pub amplitudes: Vec<AmplitudeEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AmplitudeEntry {
    pub orbitals: SortedOrbitals,
    pub re: f64,
    pub im: f64,
}

/// Strictly increasing orbital list; rejected during deserialization
/// otherwise, so the parser can report the offending line.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct SortedOrbitals(Vec<usize>);

impl SortedOrbitals {
    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }
}

impl TryFrom<Vec<usize>> for SortedOrbitals {
    type Error = String;

    fn try_from(v: Vec<usize>) -> std::result::Result<Self, String> {
        if let Some(w) = v.windows(2).find(|w| w[0] >= w[1]) {
            return Err(format!(
                "orbitals {v:?} are not strictly increasing ({} followed by {})",
                w[0], w[1]
            ));
        }
        Ok(Self(v))
    }
}

impl From<SortedOrbitals> for Vec<usize> {
    fn from(s: SortedOrbitals) -> Self {
        s.0
    }
}

/// A parsed state plus the norm of the amplitudes as written in the file.
#[derive(Debug, Clone)]
pub struct LoadedState {
    pub state: FermionState,
    pub input_norm: f64,
}

impl StateFile {
    /// All nonzero amplitudes of `state`, in rank order.
    pub fn from_state(state: &FermionState) -> Self {
        Self {
            d: state.d(),
            n: state.n(),
            amplitudes: state
                .entries()
                .map(|(t, c)| AmplitudeEntry {
                    orbitals: SortedOrbitals(t),
                    re: c.re,
                    im: c.im,
                })
                .collect(),
        }
    }

    pub fn to_state(&self) -> Result<LoadedState> {
        let entries: Vec<(Vec<usize>, Complex64)> = self
            .amplitudes
            .iter()
            .map(|e| (e.orbitals.0.clone(), Complex64::new(e.re, e.im)))
            .collect();
        let (state, input_norm) =
            FermionState::from_coefficients_with_norm(self.d, self.n, &entries)?;
        Ok(LoadedState { state, input_norm })
    }
}

/// Parses a state file. Errors carry the line number of the offending
/// entry where one can be identified.
pub fn parse_state(text: &str) -> Result<LoadedState> {
    let file: StateFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    file.to_state().map_err(|e| match e {
        Error::InvalidTuple { ref tuple, .. } | Error::DuplicateEntry(ref tuple) => {
            let entry = match &e {
                Error::DuplicateEntry(_) => file
                    .amplitudes
                    .iter()
                    .enumerate()
                    .filter(|(_, a)| a.orbitals.as_slice() == tuple.as_slice())
                    .nth(1)
                    .map(|(k, _)| k),
                _ => file
                    .amplitudes
                    .iter()
                    .position(|a| a.orbitals.as_slice() == tuple.as_slice()),
            };
            match entry.and_then(|k| line_of_entry(text, k)) {
                Some(line) => Error::Parse(format!("{e} at line {line}")),
                None => Error::Parse(e.to_string()),
            }
        }
        Error::Dimension(_) | Error::ZeroState => Error::Parse(e.to_string()),
        other => other,
    })
}

/// 1-based line of the `k`-th `"orbitals"` key.
fn line_of_entry(text: &str, k: usize) -> Option<usize> {
    let (offset, _) = text.match_indices("\"orbitals\"").nth(k)?;
    Some(text[..offset].matches('\n').count() + 1)
}

pub fn to_json(state: &FermionState) -> String {
    serde_json::to_string_pretty(&StateFile::from_state(state)).expect("state file serializes")
}
