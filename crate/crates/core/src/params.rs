use crate::error::{Error, Result};

/// Order parameter of the Gegenbauer structure together with the constant
/// splitting the small-radius and large-radius regimes of the measure
/// envelopes.
///
/// The order must satisfy 0 < λ < 1/2; the regime constant must satisfy
/// c ≥ 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GegenbauerParams {
    lambda: f64,
    regime_constant: f64,
}

impl GegenbauerParams {
    pub fn new(lambda: f64, regime_constant: f64) -> Result<Self> {
        if !(lambda > 0.0 && lambda < 0.5) {
            return Err(Error::InvalidParameter(format!(
                "lambda = {lambda} must lie in the open interval (0, 1/2)"
            )));
        }
        if !(regime_constant >= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "regime constant c = {regime_constant} must be >= 1"
            )));
        }
        Ok(Self {
            lambda,
            regime_constant,
        })
    }

    /// λ with the default regime constant c = 1.
    pub fn with_lambda(lambda: f64) -> Result<Self> {
        Self::new(lambda, 1.0)
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn regime_constant(&self) -> f64 {
        self.regime_constant
    }

    /// Normalization of the shift operator, Γ(λ+1/2)/(Γ(1/2)Γ(λ)).
    pub fn shift_normalization(&self) -> f64 {
        crate::special::gamma_fn(self.lambda + 0.5).unwrap()
            / (crate::special::gamma_fn(0.5).unwrap()
                * crate::special::gamma_fn(self.lambda).unwrap())
    }
}

/// Spectral degree variable of the transform pair; the transforms run over
/// γ ∈ [1, ∞).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Degree {
    gamma: f64,
}

impl Degree {
    pub fn new(gamma: f64) -> Result<Self> {
        if !(gamma >= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "degree gamma = {gamma} must be >= 1"
            )));
        }
        Ok(Self { gamma })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// Eigenvalue γ(γ+2λ) of the generator on the degree-γ eigenfunctions.
    pub fn eigenvalue(&self, params: &GegenbauerParams) -> f64 {
        self.gamma * (self.gamma + 2.0 * params.lambda())
    }
}
