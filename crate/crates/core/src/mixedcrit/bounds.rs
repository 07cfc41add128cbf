use serde::{Deserialize, Serialize};

use crate::linalg::{singular_values_desc, top_minus_rest};
use crate::{Error, Result, C64};

use super::{optimize_z, KroneckerFactorization, OptimizeOutcome, OptimizerConfig, TMatrixSet};

/// Largest T-matrix count accepted by [`lower_bound_direct`].
pub const DIRECT_MAX_TUPLES: usize = 1024;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Pure,
    Direct,
    Kronecker,
    Analytic,
    Quasipure,
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::Pure => "pure",
            Method::Direct => "direct",
            Method::Kronecker => "kronecker",
            Method::Analytic => "analytic",
            Method::Quasipure => "quasipure",
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OptimizerDiagnostics {
    pub restarts_used: usize,
    pub iterations: usize,
    pub converged: bool,
}

/// A lower bound (or estimate) of the mixed-state criterion.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundReport {
    pub method: Method,
    /// `max(raw_value, 0)`.
    pub value: f64,
    pub raw_value: f64,
    /// `λ_i` at the optimum, descending.
    pub singular_values: Vec<f64>,
    /// Optimal parameters, when an optimizer ran.
    pub z: Option<Vec<C64>>,
    pub optimizer: Option<OptimizerDiagnostics>,
    /// `u₂/u₁` of the source state, when known.
    pub dominance_ratio: Option<f64>,
    pub flags: Vec<String>,
}

impl BoundReport {
    pub(crate) fn closed_form(method: Method, singular_values: Vec<f64>) -> Self {
        let raw = top_minus_rest(&singular_values);
        BoundReport {
            method,
            value: raw.max(0.0),
            raw_value: raw,
            singular_values,
            z: None,
            optimizer: None,
            dominance_ratio: None,
            flags: Vec::new(),
        }
    }

    fn optimized(method: Method, out: OptimizeOutcome) -> Self {
        BoundReport {
            method,
            value: out.value.max(0.0),
            raw_value: out.value,
            singular_values: out.singular_values,
            z: Some(out.z),
            optimizer: Some(OptimizerDiagnostics {
                restarts_used: out.restarts_used,
                iterations: out.iterations,
                converged: out.converged,
            }),
            dominance_ratio: None,
            flags: Vec::new(),
        }
    }
}

/// Optimized bound over the retained Kronecker factors.
pub fn lower_bound_kronecker(fact: &KroneckerFactorization, cfg: &OptimizerConfig) -> Result<BoundReport> {
    if fact.factors.is_empty() {
        return Err(Error::InvalidInput("factorization has no factors".into()));
    }
    Ok(BoundReport::optimized(Method::Kronecker, optimize_z(&fact.factors, cfg)?))
}

/// Kronecker bounds using the leading `1, 2, …, R` factors. Each step is
/// warm-started from the previous optimum, so the sequence is nondecreasing.
pub fn lower_bound_kronecker_ladder(
    fact: &KroneckerFactorization,
    cfg: &OptimizerConfig,
) -> Result<Vec<BoundReport>> {
    let mut out: Vec<BoundReport> = Vec::with_capacity(fact.retained());
    for count in 1..=fact.retained() {
        let mut step_cfg = cfg.clone();
        if let Some(prev) = out.last().and_then(|r| r.z.clone()) {
            step_cfg.warm_starts.push(prev);
        }
        out.push(lower_bound_kronecker(&fact.truncated(count), &step_cfg)?);
    }
    Ok(out)
}

/// Optimized bound over all T-matrices.
pub fn lower_bound_direct(tset: &TMatrixSet, cfg: &OptimizerConfig) -> Result<BoundReport> {
    if tset.len() > DIRECT_MAX_TUPLES {
        return Err(Error::SizeGuard(format!(
            "direct bound optimizes over {} T-matrices (limit {DIRECT_MAX_TUPLES}); use the kronecker method",
            tset.len()
        )));
    }
    Ok(BoundReport::optimized(Method::Direct, optimize_z(&tset.matrices, cfg)?))
}

/// `λ₁ − Σ_{i>1} λ_i` of the leading factor alone, clamped at 0.
pub fn analytic_bound(fact: &KroneckerFactorization) -> Result<BoundReport> {
    let lead = fact
        .factors
        .first()
        .ok_or_else(|| Error::InvalidInput("factorization has no factors".into()))?;
    Ok(BoundReport::closed_form(Method::Analytic, singular_values_desc(lead)))
}
