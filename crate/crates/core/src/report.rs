//! Machine-readable separability reports and the end-to-end analysis
//! drivers used by the CLI.

use serde::Serialize;

use crate::mixedcrit::{
    analytic_bound, eigen_structure, kronecker_factorize, lower_bound_direct, lower_bound_kronecker, t_matrices,
    BoundReport, DensityMatrix, Method, OptimizerConfig, DEFAULT_RANK_TOL, DEFAULT_TRUNC_TOL,
};
use crate::purecrit::{is_fully_separable_pure, PureStateTensor, DEFAULT_PURE_TOL};
use crate::quasipure::{quasi_pure_estimate, tau_matrix, DEFAULT_TAU_EPS};
use crate::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    #[serde(rename = "entangled")]
    Entangled,
    #[serde(rename = "fully separable")]
    FullySeparable,
    /// A vanishing lower bound proves nothing.
    #[serde(rename = "inconclusive")]
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Diagnostics {
    pub rank: Option<usize>,
    pub dominance_ratio: Option<f64>,
    pub sigma_spectrum: Vec<f64>,
    pub lambda_at_optimum: Vec<f64>,
    pub converged: bool,
    pub restarts_used: Option<usize>,
    pub iterations: Option<usize>,
    pub flags: Vec<String>,
}

/// Numeric knobs echoed into every report.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AnalysisConfig {
    pub tol: f64,
    pub rank_tol: f64,
    pub trunc_tol: f64,
    pub max_factors: Option<usize>,
    pub tau_eps: f64,
    pub optimizer: OptimizerConfig,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        AnalysisConfig {
            tol: DEFAULT_PURE_TOL,
            rank_tol: DEFAULT_RANK_TOL,
            trunc_tol: DEFAULT_TRUNC_TOL,
            max_factors: None,
            tau_eps: DEFAULT_TAU_EPS,
            optimizer: OptimizerConfig::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SeparabilityReport {
    pub method: Method,
    pub value: f64,
    pub raw_value: f64,
    pub verdict: Verdict,
    pub diagnostics: Diagnostics,
    pub config: AnalysisConfig,
}

/// Which mixed-state estimates to run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MethodSelection {
    One(Method),
    All,
}

impl std::str::FromStr for MethodSelection {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "all" => MethodSelection::All,
            "direct" => MethodSelection::One(Method::Direct),
            "kronecker" => MethodSelection::One(Method::Kronecker),
            "analytic" => MethodSelection::One(Method::Analytic),
            "quasipure" => MethodSelection::One(Method::Quasipure),
            "pure" => MethodSelection::One(Method::Pure),
            other => {
                return Err(crate::Error::InvalidInput(format!(
                    "unknown method '{other}', expected direct, kronecker, analytic, quasipure or all"
                )))
            }
        })
    }
}

impl MethodSelection {
    fn methods(&self) -> Vec<Method> {
        match self {
            MethodSelection::All => vec![Method::Direct, Method::Kronecker, Method::Analytic, Method::Quasipure],
            MethodSelection::One(m) => vec![*m],
        }
    }
}

/// Report for the exact pure-state criterion.
pub fn pure_report(chi: &PureStateTensor, cfg: &AnalysisConfig) -> Result<SeparabilityReport> {
    let decision = is_fully_separable_pure(chi, cfg.tol)?;
    let mut flags = Vec::new();
    if decision.degenerate {
        flags.push("degenerate input".to_string());
    }
    Ok(SeparabilityReport {
        method: Method::Pure,
        value: decision.value,
        raw_value: decision.value,
        verdict: if decision.separable { Verdict::FullySeparable } else { Verdict::Entangled },
        diagnostics: Diagnostics {
            rank: None,
            dominance_ratio: None,
            sigma_spectrum: Vec::new(),
            lambda_at_optimum: Vec::new(),
            converged: true,
            restarts_used: None,
            iterations: None,
            flags,
        },
        config: cfg.clone(),
    })
}

fn bound_to_report(
    bound: BoundReport,
    rank: usize,
    dominance_ratio: f64,
    sigma_spectrum: Vec<f64>,
    cfg: &AnalysisConfig,
) -> SeparabilityReport {
    let verdict = if bound.value > cfg.tol { Verdict::Entangled } else { Verdict::Inconclusive };
    let (converged, restarts_used, iterations) = match &bound.optimizer {
        Some(o) => (o.converged, Some(o.restarts_used), Some(o.iterations)),
        None => (true, None, None),
    };
    SeparabilityReport {
        method: bound.method,
        value: bound.value,
        raw_value: bound.raw_value,
        verdict,
        diagnostics: Diagnostics {
            rank: Some(rank),
            dominance_ratio: Some(bound.dominance_ratio.unwrap_or(dominance_ratio)),
            sigma_spectrum,
            lambda_at_optimum: bound.singular_values,
            converged,
            restarts_used,
            iterations,
            flags: bound.flags,
        },
        config: cfg.clone(),
    }
}

/// Runs the selected mixed-state estimates in the order direct, kronecker,
/// analytic, quasipure. `Method::Pure` is not a mixed-state method and
/// yields an invalid-input error.
pub fn mixed_reports(
    rho: &DensityMatrix,
    selection: MethodSelection,
    cfg: &AnalysisConfig,
) -> Result<Vec<SeparabilityReport>> {
    let methods = selection.methods();
    if methods.contains(&Method::Pure) {
        return Err(crate::Error::InvalidInput("method 'pure' needs a pure-state file".into()));
    }
    let eig = eigen_structure(rho, cfg.rank_tol)?;
    let tset = t_matrices(&eig);
    let ratio = eig.dominance_ratio();
    let needs_fact = methods.iter().any(|m| matches!(m, Method::Kronecker | Method::Analytic));
    let fact = if needs_fact {
        Some(kronecker_factorize(&tset, cfg.trunc_tol, cfg.max_factors)?)
    } else {
        None
    };
    let spectrum = fact.as_ref().map(|f| f.sigmas.clone()).unwrap_or_default();

    let mut out = Vec::with_capacity(methods.len());
    for method in methods {
        let bound = match method {
            Method::Direct => lower_bound_direct(&tset, &cfg.optimizer)?,
            Method::Kronecker => lower_bound_kronecker(fact.as_ref().expect("built"), &cfg.optimizer)?,
            Method::Analytic => analytic_bound(fact.as_ref().expect("built"))?,
            Method::Quasipure => quasi_pure_estimate(&tau_matrix(&eig, &tset, cfg.tau_eps)?),
            Method::Pure => unreachable!(),
        };
        out.push(bound_to_report(bound, eig.rank, ratio, spectrum.clone(), cfg));
    }
    Ok(out)
}
