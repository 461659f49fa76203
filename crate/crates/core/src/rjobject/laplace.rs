use crate::error::{Error, Result};

/// Laplace (biexponential) distribution with density
/// `exp(-|x - a| / b) / (2b)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Laplace {
    location: f64,
    scale: f64,
}

impl Laplace {
    pub fn new(location: f64, scale: f64) -> Result<Self> {
        if !(scale > 0.0 && scale.is_finite()) || !location.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "Laplace needs a finite location and positive scale (got {location}, {scale})"
            )));
        }
        Ok(Laplace { location, scale })
    }

    pub fn location(&self) -> f64 {
        self.location
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn log_pdf(&self, x: f64) -> f64 {
        -(2.0 * self.scale).ln() - (x - self.location).abs() / self.scale
    }

    pub fn cdf(&self, x: f64) -> f64 {
        let z = (x - self.location) / self.scale;
        if z < 0.0 {
            0.5 * z.exp()
        } else {
            1.0 - 0.5 * (-z).exp()
        }
    }

    pub fn cdf_inverse(&self, u: f64) -> Result<f64> {
        if !(u > 0.0 && u < 1.0) {
            return Err(Error::InvalidArgument(format!(
                "Laplace quantile needs u in (0, 1), got {u}"
            )));
        }
        let z = if u < 0.5 {
            (2.0 * u).ln()
        } else {
            -(2.0 * (1.0 - u)).ln()
        };
        Ok(self.location + self.scale * z)
    }
}
