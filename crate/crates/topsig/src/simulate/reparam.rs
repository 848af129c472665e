use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::simulate::rng::{stream, Seed, TAG_REPARAM};

/// Law of the velocity sequence driving the reparametrization.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case")]
pub enum VelocityLaw {
    /// Independent velocities, uniform on [v_min, v_max].
    IidUniform { v_min: f64, v_max: f64 },
    /// Markov chain on [v_min, v_max]: the next velocity is a Gaussian
    /// step of scale eta around the current one, truncated to the
    /// interval; the chain starts uniform on the interval.
    MarkovTruncGauss { v_min: f64, v_max: f64, eta: f64 },
}

impl VelocityLaw {
    pub fn support(&self) -> (f64, f64) {
        match *self {
            VelocityLaw::IidUniform { v_min, v_max } => (v_min, v_max),
            VelocityLaw::MarkovTruncGauss { v_min, v_max, .. } => (v_min, v_max),
        }
    }
}

/// Initial value gamma_0 of the reparametrization.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case")]
pub enum StartLaw {
    /// gamma_0 uniform on [0, 1); makes frac(gamma_n) exactly stationary.
    UniformFrac,
    Fixed { value: f64 },
}

/// Strictly increasing time warp gamma_{n+1} = gamma_n + h V_n.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReparamModel {
    pub law: VelocityLaw,
    pub h: f64,
    pub start: StartLaw,
}

impl ReparamModel {
    pub fn validate(&self) -> Result<()> {
        let (v_min, v_max) = self.law.support();
        if !(v_min.is_finite() && v_max.is_finite() && 0.0 < v_min && v_min <= v_max) {
            return Err(Error::invalid(format!(
                "velocity support needs 0 < v_min <= v_max, got [{v_min}, {v_max}]"
            )));
        }
        if let VelocityLaw::MarkovTruncGauss { eta, .. } = self.law {
            let quarter = (v_max - v_min) / 4.0;
            if !(eta.is_finite() && 0.0 < eta && eta < quarter) {
                return Err(Error::invalid(format!(
                    "eta must lie in (0, (v_max - v_min)/4) = (0, {quarter}), got {eta}"
                )));
            }
        }
        if !(self.h.is_finite() && self.h > 0.0) {
            return Err(Error::invalid(format!("h must be positive, got {}", self.h)));
        }
        if let StartLaw::Fixed { value } = self.start {
            if !value.is_finite() {
                return Err(Error::invalid("fixed gamma_0 must be finite"));
            }
        }
        Ok(())
    }

    pub fn with_h(mut self, h: f64) -> Self {
        self.h = h;
        self
    }
}

/// Samples gamma_0..gamma_n (n + 1 values). Strictly increasing, with
/// every increment inside [h v_min, h v_max]; deterministic given seed.
pub fn sample_reparam(model: &ReparamModel, n: usize, seed: Seed) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(Error::invalid("need n >= 1 reparametrization steps"));
    }
    model.validate()?;
    let mut rng = stream(seed, TAG_REPARAM, 0);

    let gamma0 = match model.start {
        StartLaw::UniformFrac => rng.random::<f64>(),
        StartLaw::Fixed { value } => value,
    };

    let (v_min, v_max) = model.law.support();
    let mut out = Vec::with_capacity(n + 1);
    out.push(gamma0);
    let mut gamma = gamma0;

    match model.law {
        VelocityLaw::IidUniform { .. } => {
            for _ in 0..n {
                let v = if v_min == v_max {
                    v_min
                } else {
                    v_min + (v_max - v_min) * rng.random::<f64>()
                };
                gamma += model.h * v;
                out.push(gamma);
            }
        }
        VelocityLaw::MarkovTruncGauss { eta, .. } => {
            let mut v = v_min + (v_max - v_min) * rng.random::<f64>();
            for _ in 0..n {
                gamma += model.h * v;
                out.push(gamma);
                v = truncated_gaussian(&mut rng, v, eta, v_min, v_max);
            }
        }
    }
    Ok(out)
}

/// Inverse-CDF sampler for a Gaussian(mu, sigma) truncated to [lo, hi].
/// Exact truncation, no rejection loop.
pub(crate) fn truncated_gaussian<R: Rng>(rng: &mut R, mu: f64, sigma: f64, lo: f64, hi: f64) -> f64 {
    debug_assert!(lo < hi && sigma > 0.0);
    let fa = normal_cdf((lo - mu) / sigma);
    let fb = normal_cdf((hi - mu) / sigma);
    let u = rng.random::<f64>();
    let p = (fa + u * (fb - fa)).clamp(f64::MIN_POSITIVE, 1.0 - f64::EPSILON);
    let x = mu + sigma * normal_quantile(p);
    x.clamp(lo, hi)
}

pub(crate) fn normal_cdf(z: f64) -> f64 {
    0.5 * libm::erfc(-z / std::f64::consts::SQRT_2)
}

pub(crate) fn normal_quantile(p: f64) -> f64 {
    std::f64::consts::SQRT_2 * erf_inv(2.0 * p - 1.0)
}

/// Inverse error function: Winitzki's initializer refined by Newton
/// steps against libm::erf, giving close to full double precision.
pub(crate) fn erf_inv(y: f64) -> f64 {
    debug_assert!((-1.0..=1.0).contains(&y));
    if y == 0.0 {
        return 0.0;
    }
    if y >= 1.0 {
        return f64::INFINITY;
    }
    if y <= -1.0 {
        return f64::NEG_INFINITY;
    }

    const A: f64 = 0.147;
    let ln_term = (1.0 - y * y).ln();
    let t = 2.0 / (std::f64::consts::PI * A) + ln_term / 2.0;
    let mut x = (t * t - ln_term / A).sqrt();
    x = (x - t).sqrt().copysign(y);

    // f(x) = erf(x) - y, f'(x) = 2/sqrt(pi) exp(-x^2)
    let half_sqrt_pi = 0.5 * std::f64::consts::PI.sqrt();
    for _ in 0..3 {
        let err = libm::erf(x) - y;
        x -= err * half_sqrt_pi * (x * x).exp();
    }
    x
}
