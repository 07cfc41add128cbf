//! JSON file formats for states.
//!
//! Pure: `{"type":"pure","dims":[n1,n2,n3],"amplitudes":[[re,im],…]}` in flat
//! order. Mixed: `{"type":"mixed","dims":[…],"matrix":[[[re,im],…],…]}`
//! row-major. Floats are written in shortest round-trip form, so a
//! write/read cycle is bit-exact.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::mixedcrit::DensityMatrix;
use crate::operators::Dims;
use crate::purecrit::PureStateTensor;
use crate::{CMatrix, Error, Result, C64};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum StateFile {
    Pure {
        dims: Dims,
        amplitudes: Vec<[f64; 2]>,
    },
    Mixed {
        dims: Dims,
        matrix: Vec<Vec<[f64; 2]>>,
    },
}

/// A loaded state of either kind.
#[derive(Clone, Debug, PartialEq)]
pub enum LoadedState {
    Pure(PureStateTensor),
    Mixed(DensityMatrix),
}

impl LoadedState {
    /// Density matrix of the loaded state (pure states are normalized).
    pub fn into_density(self) -> Result<DensityMatrix> {
        match self {
            LoadedState::Pure(p) => DensityMatrix::from_pure(&p),
            LoadedState::Mixed(m) => Ok(m),
        }
    }
}

fn pair(z: &C64) -> [f64; 2] {
    [z.re, z.im]
}

impl From<&PureStateTensor> for StateFile {
    fn from(p: &PureStateTensor) -> Self {
        StateFile::Pure {
            dims: p.dims(),
            amplitudes: p.amplitudes().iter().map(pair).collect(),
        }
    }
}

impl From<&DensityMatrix> for StateFile {
    fn from(rho: &DensityMatrix) -> Self {
        let m = rho.matrix();
        StateFile::Mixed {
            dims: rho.dims(),
            matrix: (0..m.nrows()).map(|r| m.row(r).iter().map(pair).collect()).collect(),
        }
    }
}

impl StateFile {
    pub fn into_state(self) -> Result<LoadedState> {
        match self {
            StateFile::Pure { dims, amplitudes } => {
                let amps = amplitudes.iter().map(|[re, im]| C64::new(*re, *im)).collect();
                Ok(LoadedState::Pure(PureStateTensor::new(dims, amps)?))
            }
            StateFile::Mixed { dims, matrix } => {
                let d = dims.total();
                if matrix.len() != d || matrix.iter().any(|row| row.len() != d) {
                    return Err(Error::InvalidInput(format!(
                        "density matrix on {dims} must be {d}x{d}"
                    )));
                }
                let m = CMatrix::from_fn(d, d, |r, c| {
                    let [re, im] = matrix[r][c];
                    C64::new(re, im)
                });
                Ok(LoadedState::Mixed(DensityMatrix::new(dims, m)?))
            }
        }
    }
}

pub fn to_json(file: &StateFile) -> Result<String> {
    let mut s = serde_json::to_string_pretty(file)?;
    s.push('\n');
    Ok(s)
}

pub fn from_json(text: &str) -> Result<LoadedState> {
    serde_json::from_str::<StateFile>(text)?.into_state()
}

pub fn write_state(path: &Path, file: &StateFile) -> Result<()> {
    fs::write(path, to_json(file)?)?;
    Ok(())
}

pub fn read_state(path: &Path) -> Result<LoadedState> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))?;
    from_json(&text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{mix_with_identity, random_state, StateKind, StateSpec};
    use proptest::prelude::*;

    #[test]
    fn pure_file_layout() {
        let dims = Dims::new(2, 2, 2).unwrap();
        let mut amps = vec![C64::new(0.0, 0.0); 8];
        amps[0] = C64::new(0.5, -0.25);
        let p = PureStateTensor::new(dims, amps).unwrap();
        let v: serde_json::Value = serde_json::from_str(&to_json(&StateFile::from(&p)).unwrap()).unwrap();
        assert_eq!(v["type"], "pure");
        assert_eq!(v["dims"], serde_json::json!([2, 2, 2]));
        assert_eq!(v["amplitudes"][0], serde_json::json!([0.5, -0.25]));
    }

    #[test]
    fn mixed_round_trip() {
        let dims = Dims::new(2, 2, 3).unwrap();
        let psi = random_state(&StateSpec::random(StateKind::RandomPure, dims, 3)).unwrap();
        let rho = mix_with_identity(&psi, 0.4).unwrap();
        let back = from_json(&to_json(&StateFile::from(&rho)).unwrap()).unwrap();
        assert_eq!(back, LoadedState::Mixed(rho));
    }

    #[test]
    fn malformed_files_are_rejected() {
        assert!(matches!(from_json("{"), Err(Error::Json(_))));
        assert!(from_json(r#"{"type":"pure","dims":[2,2],"amplitudes":[]}"#).is_err());
        assert!(from_json(r#"{"type":"pure","dims":[2,2,2],"amplitudes":[[1,0]]}"#).is_err());
        assert!(from_json(r#"{"type":"mixed","dims":[2,2,2],"matrix":[[[1,0]]]}"#).is_err());
        let not_psd = {
            let mut rows = vec![vec![[0.0, 0.0]; 8]; 8];
            rows[0][0] = [2.0, 0.0];
            rows[1][1] = [-1.0, 0.0];
            serde_json::json!({"type": "mixed", "dims": [2, 2, 2], "matrix": rows}).to_string()
        };
        assert!(matches!(from_json(&not_psd), Err(Error::InvalidState(_))));
    }

    proptest! {
        #[test]
        fn pure_round_trip_is_bit_exact(seed in any::<u64>(), n in 2usize..4) {
            let dims = Dims::new(2, n, 3).unwrap();
            let psi = random_state(&StateSpec::random(StateKind::RandomPure, dims, seed)).unwrap();
            let back = from_json(&to_json(&StateFile::from(&psi)).unwrap()).unwrap();
            prop_assert_eq!(back, LoadedState::Pure(psi));
        }
    }
}
