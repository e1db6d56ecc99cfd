use crate::error::{Error, Result};

/// Per-frequency Gaussian phase noise with standard deviation `σ`.
///
/// The matching SNR is `1 / (2σ²)`, reported in dB as `10·log10(1/(2σ²))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseSpec {
    sigma_rad: f64,
}

impl NoiseSpec {
    pub fn new(sigma_rad: f64) -> Result<Self> {
        if !(sigma_rad.is_finite() && sigma_rad >= 0.0) {
            return Err(Error::invalid(format!("noise deviation {sigma_rad} must be finite and >= 0")));
        }
        Ok(NoiseSpec { sigma_rad })
    }

    pub fn noiseless() -> Self {
        NoiseSpec { sigma_rad: 0.0 }
    }

    pub fn from_snr_db(snr_db: f64) -> Result<Self> {
        if !snr_db.is_finite() {
            return Err(Error::invalid(format!("SNR {snr_db} dB is not finite")));
        }
        Self::new(crate::theory::snr_to_sigma(snr_db))
    }

    pub fn sigma_rad(&self) -> f64 {
        self.sigma_rad
    }

    /// `+∞` for the noiseless case.
    pub fn snr_db(&self) -> f64 {
        crate::theory::sigma_to_snr(self.sigma_rad)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_negative_and_nan() {
        assert!(NoiseSpec::new(-1e-3).is_err());
        assert!(NoiseSpec::new(f64::NAN).is_err());
        assert!(NoiseSpec::from_snr_db(f64::NAN).is_err());
    }

    #[test]
    fn snr_round_trip() {
        for snr in [-20.0, -3.5, 0.0, 5.0, 20.0, 47.25, 60.0] {
            let n = NoiseSpec::from_snr_db(snr).unwrap();
            assert!((n.snr_db() - snr).abs() <= 1e-12 * snr.abs().max(1.0));
        }
        assert_eq!(NoiseSpec::noiseless().snr_db(), f64::INFINITY);
    }
}
