//! Zeeman splitting to magnetic field conversion, `Δ = g μ_B B / ħ`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Bohr magneton over Planck's constant, in MHz per gauss.
pub const BOHR_MAGNETON_MHZ_PER_GAUSS: f64 = 1.3996246;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BFieldQuery {
    /// Splitting of adjacent Zeeman sublevels, MHz.
    pub splitting_mhz: f64,
    /// Landé factor.
    pub lande_g: f64,
}

impl BFieldQuery {
    pub fn validate(self) -> Result<Self> {
        if !(self.splitting_mhz.is_finite() && self.splitting_mhz >= 0.0) {
            return Err(Error::InvalidArgument(format!("splitting must be a finite nonnegative frequency, got {}", self.splitting_mhz)));
        }
        if !(self.lande_g.is_finite() && self.lande_g > 0.0) {
            return Err(Error::InvalidArgument(format!("Lande factor must be finite and positive, got {}", self.lande_g)));
        }
        Ok(self)
    }
}

/// Field in gauss that produces the requested splitting.
pub fn bfield_for_splitting(q: BFieldQuery) -> Result<f64> {
    let q = q.validate()?;
    Ok(q.splitting_mhz / (q.lande_g * BOHR_MAGNETON_MHZ_PER_GAUSS))
}
