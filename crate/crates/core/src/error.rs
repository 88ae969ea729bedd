use thiserror::Error;

/// Pipeline stage an error is attributed to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    Profile,
    Jost,
    Resonances,
    Scattering,
    Hadamard,
    Marchenko,
    Recovery,
}

impl std::fmt::Display for Stage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Stage::Profile => "profile",
            Stage::Jost => "jost",
            Stage::Resonances => "resonances",
            Stage::Scattering => "scattering",
            Stage::Hadamard => "hadamard",
            Stage::Marchenko => "marchenko",
            Stage::Recovery => "recovery",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("point {xi} lies on a branch cut; choose a side")]
    OnCut { xi: num_complex::Complex64 },

    #[error("overflow guard: |Im k| = {im_k:.3} exceeds the largest safe value {max_safe:.3} for x_I = {x_i}")]
    Overflow { im_k: f64, max_safe: f64, x_i: f64 },

    #[error("zero of the evaluator within guard distance of the contour after {attempts} perturbations")]
    BoundaryDegeneracy { attempts: usize },

    #[error("class condition violated: {0}")]
    ClassViolation(String),

    #[error("inconsistent results: {0}")]
    Inconsistent(String),

    #[error("search region incomplete: {0}")]
    Incomplete(String),

    #[error("zero set is not symmetric under k -> -conj(k): unmatched zero {0}")]
    Asymmetric(num_complex::Complex64),

    #[error("calibration failed: residual {residual:.3e} exceeds tolerance {tol:.3e}")]
    Calibration { residual: f64, tol: f64 },

    #[error("degenerate Marchenko system at x = {x}: condition number {cond:.3e}")]
    Degenerate { x: f64, cond: f64 },

    #[error("singular shear recovery at x = {x}: denominator {denominator:.3e}")]
    SingularRecovery { x: f64, denominator: f64 },

    #[error("{stage} stage failed: {source}")]
    Stage {
        stage: Stage,
        #[source]
        source: Box<Error>,
    },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    pub fn at(self, stage: Stage) -> Error {
        match self {
            e @ Error::Stage { .. } => e,
            e => Error::Stage {
                stage,
                source: Box::new(e),
            },
        }
    }

    /// Innermost error, skipping stage attribution wrappers.
    pub fn root(&self) -> &Error {
        match self {
            Error::Stage { source, .. } => source.root(),
            e => e,
        }
    }

    pub fn stage(&self) -> Option<Stage> {
        match self {
            Error::Stage { stage, .. } => Some(*stage),
            _ => None,
        }
    }

    pub fn is_class_violation(&self) -> bool {
        matches!(
            self.root(),
            Error::ClassViolation(_) | Error::Asymmetric(_)
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
