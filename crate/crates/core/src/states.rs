//! Named states, seeded random ensembles and identity-noise mixtures.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::linalg::singular_values_desc;
use crate::mixedcrit::DensityMatrix;
use crate::operators::Dims;
use crate::purecrit::PureStateTensor;
use crate::{CMatrix, Error, Result, C64};

/// Semiseparable draws are rejected when the second Schmidt coefficient of
/// the entangled pair falls below this.
pub const MIN_SECOND_SCHMIDT: f64 = 1e-3;

/// Which two parties share the entangled factor of a semiseparable state.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Cut {
    #[default]
    AB,
    AC,
    BC,
}

impl FromStr for Cut {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ab" => Ok(Cut::AB),
            "ac" => Ok(Cut::AC),
            "bc" => Ok(Cut::BC),
            other => Err(Error::InvalidSpec(format!("unknown cut '{other}', expected ab, ac or bc"))),
        }
    }
}

impl fmt::Display for Cut {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Cut::AB => "ab",
            Cut::AC => "ac",
            Cut::BC => "bc",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StateKind {
    /// `Σ_i |iii⟩/√n` on `(n, n, n)`.
    Ghz,
    /// `(|001⟩ + |010⟩ + |100⟩)/√3`.
    W,
    /// `(|000⟩ + |101⟩ + |011⟩ + |112⟩)/2` on `(2, 2, 3)`.
    GhzPrime,
    /// `(|000⟩ + |011⟩ + |112⟩)/√3` on `(2, 2, 3)`.
    WPrime,
    RandomProduct,
    RandomPure,
    RandomSemiseparable(Cut),
}

impl StateKind {
    pub fn is_random(&self) -> bool {
        matches!(
            self,
            StateKind::RandomProduct | StateKind::RandomPure | StateKind::RandomSemiseparable(_)
        )
    }

    pub fn name(&self) -> &'static str {
        match self {
            StateKind::Ghz => "ghz",
            StateKind::W => "w",
            StateKind::GhzPrime => "ghz_prime",
            StateKind::WPrime => "w_prime",
            StateKind::RandomProduct => "random_product",
            StateKind::RandomPure => "random_pure",
            StateKind::RandomSemiseparable(_) => "random_semiseparable",
        }
    }
}

impl FromStr for StateKind {
    type Err = Error;

    /// Accepts the plain names; `random_semiseparable` takes an optional
    /// `:ab|ac|bc` suffix (default `ab`).
    fn from_str(s: &str) -> Result<Self> {
        let (name, cut) = match s.split_once(':') {
            Some((n, c)) => (n, Some(c.parse::<Cut>()?)),
            None => (s, None),
        };
        let kind = match name {
            "ghz" => StateKind::Ghz,
            "w" => StateKind::W,
            "ghz_prime" => StateKind::GhzPrime,
            "w_prime" => StateKind::WPrime,
            "random_product" => StateKind::RandomProduct,
            "random_pure" => StateKind::RandomPure,
            "random_semiseparable" => StateKind::RandomSemiseparable(cut.unwrap_or_default()),
            other => return Err(Error::InvalidSpec(format!("unknown state name '{other}'"))),
        };
        if cut.is_some() && !matches!(kind, StateKind::RandomSemiseparable(_)) {
            return Err(Error::InvalidSpec(format!("state '{name}' does not take a cut")));
        }
        Ok(kind)
    }
}

/// What to generate. `dims` defaults per family: `(2,2,3)` for the primed
/// states and `(2,2,2)` otherwise.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StateSpec {
    pub kind: StateKind,
    pub dims: Option<Dims>,
    pub seed: Option<u64>,
}

impl StateSpec {
    pub fn named(kind: StateKind) -> Self {
        StateSpec {
            kind,
            dims: None,
            seed: None,
        }
    }

    pub fn random(kind: StateKind, dims: Dims, seed: u64) -> Self {
        StateSpec {
            kind,
            dims: Some(dims),
            seed: Some(seed),
        }
    }

    pub fn with_dims(mut self, dims: Dims) -> Self {
        self.dims = Some(dims);
        self
    }

    pub fn resolved_dims(&self) -> Dims {
        self.dims.unwrap_or_else(|| match self.kind {
            StateKind::GhzPrime | StateKind::WPrime => Dims::new(2, 2, 3).expect("valid"),
            _ => Dims::new(2, 2, 2).expect("valid"),
        })
    }

    /// Dispatches to [`named_state`] or [`random_state`].
    pub fn build(&self) -> Result<PureStateTensor> {
        if self.kind.is_random() {
            random_state(self)
        } else {
            named_state(self)
        }
    }
}

fn basis_superposition(dims: Dims, terms: &[(usize, usize, usize)]) -> Result<PureStateTensor> {
    let amp = C64::new(1.0 / (terms.len() as f64).sqrt(), 0.0);
    let mut amps = vec![C64::new(0.0, 0.0); dims.total()];
    for &(i, j, k) in terms {
        amps[dims.flat(i, j, k)] = amp;
    }
    PureStateTensor::new(dims, amps)
}

fn require_dims(spec: &StateSpec, want: [usize; 3]) -> Result<Dims> {
    let dims = spec.resolved_dims();
    if dims.local() != want {
        return Err(Error::InvalidSpec(format!(
            "state '{}' is defined on {}x{}x{}, got {dims}",
            spec.kind.name(),
            want[0],
            want[1],
            want[2]
        )));
    }
    Ok(dims)
}

/// Deterministic named states.
pub fn named_state(spec: &StateSpec) -> Result<PureStateTensor> {
    match spec.kind {
        StateKind::Ghz => {
            let dims = spec.resolved_dims();
            let [n, n2, n3] = dims.local();
            if n != n2 || n != n3 {
                return Err(Error::InvalidSpec(format!("ghz needs equal local dimensions, got {dims}")));
            }
            let terms: Vec<_> = (0..n).map(|i| (i, i, i)).collect();
            basis_superposition(dims, &terms)
        }
        StateKind::W => {
            let dims = require_dims(spec, [2, 2, 2])?;
            basis_superposition(dims, &[(0, 0, 1), (0, 1, 0), (1, 0, 0)])
        }
        StateKind::GhzPrime => {
            let dims = require_dims(spec, [2, 2, 3])?;
            basis_superposition(dims, &[(0, 0, 0), (1, 0, 1), (0, 1, 1), (1, 1, 2)])
        }
        StateKind::WPrime => {
            let dims = require_dims(spec, [2, 2, 3])?;
            basis_superposition(dims, &[(0, 0, 0), (0, 1, 1), (1, 1, 2)])
        }
        _ => Err(Error::InvalidSpec(format!(
            "'{}' is a random family; use random_state",
            spec.kind.name()
        ))),
    }
}

fn complex_normal(rng: &mut ChaCha8Rng) -> C64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    C64::new(re, im)
}

fn random_unit_vector(n: usize, rng: &mut ChaCha8Rng) -> Vec<C64> {
    let v: Vec<C64> = (0..n).map(|_| complex_normal(rng)).collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / norm).collect()
}

/// Normalized random `rows×cols` coefficient matrix whose second Schmidt
/// coefficient is at least [`MIN_SECOND_SCHMIDT`].
fn random_entangled_pair(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> CMatrix {
    loop {
        let flat = random_unit_vector(rows * cols, rng);
        let m = DMatrix::from_row_slice(rows, cols, &flat);
        let sv = singular_values_desc(&m);
        if sv.get(1).copied().unwrap_or(0.0) >= MIN_SECOND_SCHMIDT {
            return m;
        }
    }
}

/// Seeded random families; identical specs give identical amplitudes.
pub fn random_state(spec: &StateSpec) -> Result<PureStateTensor> {
    let seed = spec.seed.ok_or_else(|| {
        Error::InvalidSpec(format!("random state '{}' needs a seed", spec.kind.name()))
    })?;
    let dims = spec.resolved_dims();
    let [n1, n2, n3] = dims.local();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match spec.kind {
        StateKind::RandomProduct => {
            let a = random_unit_vector(n1, &mut rng);
            let b = random_unit_vector(n2, &mut rng);
            let c = random_unit_vector(n3, &mut rng);
            PureStateTensor::product(&a, &b, &c)
        }
        StateKind::RandomPure => PureStateTensor::new(dims, random_unit_vector(dims.total(), &mut rng)),
        StateKind::RandomSemiseparable(cut) => {
            let mut amps = vec![C64::new(0.0, 0.0); dims.total()];
            match cut {
                Cut::AB => {
                    let m = random_entangled_pair(n1, n2, &mut rng);
                    let c = random_unit_vector(n3, &mut rng);
                    for (f, amp) in amps.iter_mut().enumerate() {
                        let (i, j, k) = dims.split(f);
                        *amp = m[(i, j)] * c[k];
                    }
                }
                Cut::AC => {
                    let m = random_entangled_pair(n1, n3, &mut rng);
                    let b = random_unit_vector(n2, &mut rng);
                    for (f, amp) in amps.iter_mut().enumerate() {
                        let (i, j, k) = dims.split(f);
                        *amp = m[(i, k)] * b[j];
                    }
                }
                Cut::BC => {
                    let m = random_entangled_pair(n2, n3, &mut rng);
                    let a = random_unit_vector(n1, &mut rng);
                    for (f, amp) in amps.iter_mut().enumerate() {
                        let (i, j, k) = dims.split(f);
                        *amp = a[i] * m[(j, k)];
                    }
                }
            }
            PureStateTensor::new(dims, amps)
        }
        _ => Err(Error::InvalidSpec(format!(
            "'{}' is not a random family; use named_state",
            spec.kind.name()
        ))),
    }
}

/// `x·|ψ⟩⟨ψ| + (1 − x)·I/d`.
pub fn mix_with_identity(psi: &PureStateTensor, x: f64) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::InvalidSpec(format!("mixing weight x must lie in [0, 1], got {x}")));
    }
    let d = psi.dims().total();
    let a = psi.amplitudes();
    let noise = (1.0 - x) / d as f64;
    let m = CMatrix::from_fn(d, d, |r, c| {
        let diag = if r == c { noise } else { 0.0 };
        a[r] * a[c].conj() * x + diag
    });
    DensityMatrix::new(psi.dims(), m)
}
