//! Fixed operator families of the criterion.
//!
//! A tripartite basis state `|i j k⟩` on local dimensions `(n₁, n₂, n₃)` has
//! flat index `i·n₂·n₃ + j·n₃ + k`. A *cube* restricts every party to a pair
//! of levels `(j, k)`, `j < k`, which yields an 8-amplitude (three-qubit)
//! sub-state. The nine cube operators `s^δ` act on those eight amplitudes;
//! conjugating them by the cube selector gives the sparse d×d observables
//! `Ô = Sᵀ s^δ S` that every criterion in this crate is built from.

use std::sync::OnceLock;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::{Error, Result, C64};

/// Number of cube operators.
pub const CUBE_OPERATOR_COUNT: usize = 9;

/// Local dimensions `(n₁, n₂, n₃)` of a tripartite system, each at least 2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Dims([usize; 3]);

impl Dims {
    pub fn new(n1: usize, n2: usize, n3: usize) -> Result<Self> {
        for (party, &n) in [n1, n2, n3].iter().enumerate() {
            if n < 2 {
                return Err(Error::InvalidDimension(format!(
                    "local dimension of party {} must be >= 2, got {n}",
                    party + 1
                )));
            }
        }
        Ok(Dims([n1, n2, n3]))
    }

    pub fn from_slice(dims: &[usize]) -> Result<Self> {
        match dims {
            [a, b, c] => Dims::new(*a, *b, *c),
            _ => Err(Error::InvalidDimension(format!(
                "expected three local dimensions, got {}",
                dims.len()
            ))),
        }
    }

    pub fn local(&self) -> [usize; 3] {
        self.0
    }

    /// Total Hilbert-space dimension `d = n₁n₂n₃`.
    pub fn total(&self) -> usize {
        self.0.iter().product()
    }

    pub fn flat(&self, i: usize, j: usize, k: usize) -> usize {
        let [_, n2, n3] = self.0;
        i * n2 * n3 + j * n3 + k
    }

    pub fn split(&self, flat: usize) -> (usize, usize, usize) {
        let [_, n2, n3] = self.0;
        (flat / (n2 * n3), (flat / n3) % n2, flat % n3)
    }

    /// `N_p = n_p(n_p − 1)/2` per party.
    pub fn pair_counts(&self) -> [usize; 3] {
        self.0.map(|n| n * (n - 1) / 2)
    }

    /// Number of cubes `M = N₁N₂N₃`.
    pub fn cube_count(&self) -> usize {
        self.pair_counts().iter().product()
    }

    /// Number of observables `I = 9·N₁N₂N₃`.
    pub fn tuple_count(&self) -> usize {
        CUBE_OPERATOR_COUNT * self.cube_count()
    }
}

impl TryFrom<Vec<usize>> for Dims {
    type Error = Error;

    fn try_from(v: Vec<usize>) -> Result<Self> {
        Dims::from_slice(&v)
    }
}

impl From<Dims> for Vec<usize> {
    fn from(d: Dims) -> Self {
        d.0.to_vec()
    }
}

impl std::fmt::Display for Dims {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}x{}x{}", self.0[0], self.0[1], self.0[2])
    }
}

type Mat8 = [[f64; 8]; 8];

/// The nine real symmetric 8×8 cube operators `s¹..s⁹`.
#[derive(Clone, Debug, PartialEq)]
pub struct CubeOperatorSet {
    ops: Vec<Mat8>,
}

impl CubeOperatorSet {
    /// Shared, lazily built instance.
    pub fn shared() -> &'static CubeOperatorSet {
        static OPS: OnceLock<CubeOperatorSet> = OnceLock::new();
        OPS.get_or_init(cube_operators)
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    /// Operator `s^δ` with `δ` counted from 1.
    pub fn get(&self, delta: usize) -> Option<&Mat8> {
        delta.checked_sub(1).and_then(|i| self.ops.get(i))
    }

    pub fn iter(&self) -> impl Iterator<Item = &Mat8> {
        self.ops.iter()
    }

    /// Nonzero entries `(row, col, value)` of `s^δ` in row-major order.
    pub fn nonzeros(&self, delta: usize) -> Vec<(usize, usize, f64)> {
        let op = self.get(delta).expect("delta in 1..=9");
        let mut out = Vec::new();
        for (r, row) in op.iter().enumerate() {
            for (c, &v) in row.iter().enumerate() {
                if v != 0.0 {
                    out.push((r, c, v));
                }
            }
        }
        out
    }
}

fn pauli(kind: char) -> [[C64; 2]; 2] {
    let o = C64::new(0.0, 0.0);
    let one = C64::new(1.0, 0.0);
    let i = C64::new(0.0, 1.0);
    match kind {
        'x' => [[o, one], [one, o]],
        'y' => [[o, -i], [i, o]],
        // projectors |0⟩⟨0| and |1⟩⟨1|
        '1' => [[one, o], [o, o]],
        '2' => [[o, o], [o, one]],
        _ => unreachable!("unknown building block {kind}"),
    }
}

/// `−a⊗b⊗c` for 2×2 building blocks; the result is real by construction.
fn negated_triple(a: char, b: char, c: char) -> Mat8 {
    let (a, b, c) = (pauli(a), pauli(b), pauli(c));
    let mut out = [[0.0; 8]; 8];
    for r in 0..8 {
        for col in 0..8 {
            let v = a[r >> 2][col >> 2] * b[(r >> 1) & 1][(col >> 1) & 1] * c[r & 1][col & 1];
            debug_assert!(v.im == 0.0);
            out[r][col] = -v.re;
        }
    }
    out
}

/// Builds the nine cube operators in their canonical order.
pub fn cube_operators() -> CubeOperatorSet {
    let patterns = [
        ('y', 'y', '1'),
        ('y', 'y', '2'),
        ('y', '1', 'y'),
        ('y', '2', 'y'),
        ('1', 'y', 'y'),
        ('2', 'y', 'y'),
        ('x', 'y', 'y'),
        ('y', 'x', 'y'),
        ('y', 'y', 'x'),
    ];
    CubeOperatorSet {
        ops: patterns.iter().map(|&(a, b, c)| negated_triple(a, b, c)).collect(),
    }
}

/// One 2×n selector: unit rows at levels `pair.0` and `pair.1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Selector {
    pub dim: usize,
    pub pair: (usize, usize),
    /// Position of `pair` in the lexicographic pair list.
    pub index: usize,
}

impl Selector {
    pub fn matrix(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(2, self.dim);
        m[(0, self.pair.0)] = 1.0;
        m[(1, self.pair.1)] = 1.0;
        m
    }
}

/// All level-pair selectors of one party.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SelectorSet {
    pub dim: usize,
    pub selectors: Vec<Selector>,
}

impl SelectorSet {
    pub fn len(&self) -> usize {
        self.selectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.selectors.is_empty()
    }

    pub fn pair_index(&self) -> Vec<(usize, usize)> {
        self.selectors.iter().map(|s| s.pair).collect()
    }
}

/// Selectors for all pairs `(j, k)`, `j < k`, of an `n`-level party.
pub fn selector_set(n: usize) -> Result<SelectorSet> {
    if n < 2 {
        return Err(Error::InvalidDimension(format!(
            "selector set needs local dimension >= 2, got {n}"
        )));
    }
    let mut selectors = Vec::with_capacity(n * (n - 1) / 2);
    for j in 0..n {
        for k in j + 1..n {
            selectors.push(Selector {
                dim: n,
                pair: (j, k),
                index: selectors.len(),
            });
        }
    }
    Ok(SelectorSet { dim: n, selectors })
}

/// `S_{αβγ} = s_α ⊗ s_β ⊗ s_γ`, stored as the flat column hit by each of its
/// eight unit rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompositeSelector {
    pub dims: Dims,
    pub parts: [Selector; 3],
    /// Pair indices `(α, β, γ)`.
    pub cube_id: [usize; 3],
    /// Row `r = 4a + 2b + c` has its unit entry at column `columns[r]`.
    pub columns: [usize; 8],
}

impl CompositeSelector {
    /// Dense 8×d matrix.
    pub fn matrix(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(8, self.dims.total());
        for (r, &c) in self.columns.iter().enumerate() {
            m[(r, c)] = 1.0;
        }
        m
    }

    /// The eight cube amplitudes of a flattened state.
    pub fn extract(&self, amplitudes: &[C64]) -> [C64; 8] {
        self.columns.map(|c| amplitudes[c])
    }

    /// `Ô = Sᵀ s^δ S` as a coordinate list (`δ` counted from 1).
    pub fn observable(&self, delta: usize) -> Result<SparseObservable> {
        if !(1..=CUBE_OPERATOR_COUNT).contains(&delta) {
            return Err(Error::InvalidInput(format!(
                "cube operator index must be in 1..=9, got {delta}"
            )));
        }
        let entries = CubeOperatorSet::shared()
            .nonzeros(delta)
            .into_iter()
            .map(|(r, c, v)| (self.columns[r], self.columns[c], v))
            .collect();
        Ok(SparseObservable {
            dim: self.dims.total(),
            cube_id: self.cube_id,
            delta,
            entries,
        })
    }
}

pub fn composite_selector(
    s_alpha: &Selector,
    s_beta: &Selector,
    s_gamma: &Selector,
    dims: Dims,
) -> Result<CompositeSelector> {
    let parts = [*s_alpha, *s_beta, *s_gamma];
    for (p, (s, n)) in parts.iter().zip(dims.local()).enumerate() {
        if s.dim != n || s.pair.0 >= s.pair.1 || s.pair.1 >= n {
            return Err(Error::InvalidDimension(format!(
                "selector for party {} has {} columns and pair {:?}, dims are {dims}",
                p + 1,
                s.dim,
                s.pair
            )));
        }
    }
    let level = |s: &Selector, bit: usize| if bit == 0 { s.pair.0 } else { s.pair.1 };
    let mut columns = [0usize; 8];
    for (r, col) in columns.iter_mut().enumerate() {
        *col = dims.flat(
            level(&parts[0], r >> 2),
            level(&parts[1], (r >> 1) & 1),
            level(&parts[2], r & 1),
        );
    }
    Ok(CompositeSelector {
        dims,
        parts,
        cube_id: [s_alpha.index, s_beta.index, s_gamma.index],
        columns,
    })
}

/// Every composite selector of `dims` in lexicographic `(α, β, γ)` order.
pub fn composite_selectors(dims: Dims) -> Vec<CompositeSelector> {
    let sets: Vec<SelectorSet> = dims
        .local()
        .iter()
        .map(|&n| selector_set(n).expect("dims validated"))
        .collect();
    let mut out = Vec::with_capacity(dims.cube_count());
    for a in &sets[0].selectors {
        for b in &sets[1].selectors {
            for c in &sets[2].selectors {
                out.push(composite_selector(a, b, c, dims).expect("consistent selectors"));
            }
        }
    }
    out
}

/// Identifies one observable: a cube and an operator index `δ` (from 1).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TupleId {
    pub cube_id: [usize; 3],
    pub delta: usize,
}

/// Sparse real symmetric d×d observable `Sᵀ s^δ S`.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseObservable {
    pub dim: usize,
    pub cube_id: [usize; 3],
    pub delta: usize,
    pub entries: Vec<(usize, usize, f64)>,
}

impl SparseObservable {
    pub fn tuple(&self) -> TupleId {
        TupleId {
            cube_id: self.cube_id,
            delta: self.delta,
        }
    }

    /// Bilinear form `xᵀ Ô y` (no conjugation).
    pub fn bilinear(&self, x: &[C64], y: &[C64]) -> C64 {
        self.entries
            .iter()
            .fold(C64::new(0.0, 0.0), |acc, &(r, c, v)| acc + x[r] * y[c] * v)
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.dim, self.dim);
        for &(r, c, v) in &self.entries {
            m[(r, c)] += v;
        }
        m
    }
}

/// All `I = 9·N₁N₂N₃` observables, cube-major with `δ` innermost.
pub fn observables(dims: Dims) -> Vec<SparseObservable> {
    composite_selectors(dims)
        .iter()
        .flat_map(|s| (1..=CUBE_OPERATOR_COUNT).map(move |delta| s.observable(delta).expect("delta in range")))
        .collect()
}
