use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A 1-periodic template function; evaluation always reduces the argument
/// to its fractional part, so phi(x) = phi(x - floor(x)) holds exactly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case")]
pub enum PeriodicTemplate {
    /// theta * (sin(6 pi t) + |frac(t) - 1/2| - 1/2) + 5 sin(4 pi t):
    /// two sine harmonics plus a triangle dip, with the first harmonic
    /// and the triangle scaled by theta.
    SineTriangleMix { theta: f64 },
    /// sin(2 pi f t) with f full oscillations per period.
    Sine { frequency: u32 },
    /// Piecewise-linear interpolation of one period of samples; the
    /// segment from the last sample wraps back to the first.
    Custom { samples: Vec<f64> },
}

impl PeriodicTemplate {
    pub fn sine_triangle_mix(theta: f64) -> Result<Self> {
        if !theta.is_finite() {
            return Err(Error::invalid("theta must be finite"));
        }
        Ok(PeriodicTemplate::SineTriangleMix { theta })
    }

    pub fn sine(frequency: u32) -> Result<Self> {
        if frequency == 0 {
            return Err(Error::invalid("sine frequency must be positive"));
        }
        Ok(PeriodicTemplate::Sine { frequency })
    }

    pub fn custom(samples: Vec<f64>) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::invalid("custom template needs at least 2 samples"));
        }
        if samples.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("custom template samples must be finite"));
        }
        Ok(PeriodicTemplate::Custom { samples })
    }

    pub fn eval(&self, x: f64) -> f64 {
        let t = x - x.floor();
        match self {
            PeriodicTemplate::SineTriangleMix { theta } => {
                let tri = (t - 0.5).abs() - 0.5;
                theta * ((6.0 * std::f64::consts::PI * t).sin() + tri)
                    + 5.0 * (4.0 * std::f64::consts::PI * t).sin()
            }
            PeriodicTemplate::Sine { frequency } => {
                (2.0 * std::f64::consts::PI * f64::from(*frequency) * t).sin()
            }
            PeriodicTemplate::Custom { samples } => {
                let k = samples.len();
                let scaled = t * k as f64;
                let i = (scaled.floor() as usize).min(k - 1);
                let frac = scaled - i as f64;
                let a = samples[i];
                let b = samples[(i + 1) % k];
                a + frac * (b - a)
            }
        }
    }

    /// Amplitude max - min, estimated on a uniform grid of `resolution`
    /// points over one period.
    pub fn amplitude(&self, resolution: usize) -> f64 {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..resolution {
            let v = self.eval(i as f64 / resolution as f64);
            lo = lo.min(v);
            hi = hi.max(v);
        }
        hi - lo
    }
}
