use thiserror::Error;

/// Every failure the solver can report.
#[derive(Debug, Error)]
pub enum PlateauError {
    /// A parameter is outside its admissible range.
    #[error("{0}")]
    InvalidParameter(String),

    /// The collocation matrix is numerically singular.
    #[error("ill-posed basis: spectrum entry {index} has magnitude {magnitude:e} below {threshold:e}")]
    IllPosedBasis { index: usize, magnitude: f64, threshold: f64 },

    /// The inverse transform left an imaginary part larger than roundoff explains.
    #[error("imaginary residue {residue:e} exceeds tolerance {tolerance:e}")]
    ImaginaryResidue { residue: f64, tolerance: f64 },

    #[error("degenerate tangent plane at z = {re}{im:+}i (|X_1 x X_2| = {cross:e})")]
    DegenerateTangentPlane { re: f64, im: f64, cross: f64 },

    /// The optimizer produced a non-finite energy, usually a step size that is too large.
    #[error("energy became non-finite at iteration {iter} (eta = {eta:e})")]
    NonFiniteEnergy { iter: usize, eta: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl PlateauError {
    /// Shorthand for [`PlateauError::InvalidParameter`].
    pub fn invalid(msg: impl Into<String>) -> Self {
        PlateauError::InvalidParameter(msg.into())
    }

    /// True for errors caused by bad input rather than by the numerics.
    pub fn is_config_error(&self) -> bool {
        matches!(self, PlateauError::InvalidParameter(_) | PlateauError::IllPosedBasis { .. } | PlateauError::Json(_))
    }
}

pub type Result<T, E = PlateauError> = std::result::Result<T, E>;
