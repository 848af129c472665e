//! Generators for the synthetic observation model: a 1-periodic template
//! composed with a random increasing time warp, plus stationary Gaussian
//! noise. Everything is a pure function of (config, seed).

mod noise;
mod reparam;
mod rng;
mod template;

pub use noise::{sample_gp_noise, NoiseModel};
pub use reparam::{sample_reparam, ReparamModel, StartLaw, VelocityLaw};
pub use rng::Seed;
pub use template::PeriodicTemplate;

pub(crate) use rng::{stream, TAG_BOOTSTRAP, TAG_VALIDATE};

use crate::error::{Error, Result};
use crate::series::TimeSeries;

/// Samples S_n = phi(gamma_n) + W_n for n = 0..round(duration * rate),
/// with the warp stepped at h = 1/rate. The warp and the noise draw from
/// independent sub-streams of `seed`.
pub fn simulate_signal(
    template: &PeriodicTemplate,
    reparam: &ReparamModel,
    noise: &NoiseModel,
    duration: f64,
    rate: f64,
    seed: Seed,
) -> Result<TimeSeries> {
    if !(duration.is_finite() && rate.is_finite() && duration > 0.0 && rate > 0.0) {
        return Err(Error::invalid(format!(
            "duration and rate must be positive, got {duration} and {rate}"
        )));
    }
    let n = (duration * rate).round() as usize;
    if n < 2 {
        return Err(Error::invalid(format!(
            "duration * rate must be at least 2 samples, got {n}"
        )));
    }
    let dt = 1.0 / rate;
    let gamma = sample_reparam(&reparam.with_h(dt), n - 1, seed)?;
    let w = sample_gp_noise(noise, n, dt, seed)?;
    let values = gamma
        .iter()
        .zip(&w)
        .map(|(&g, &wn)| template.eval(g) + wn)
        .collect();
    TimeSeries::new(values, dt)
}
