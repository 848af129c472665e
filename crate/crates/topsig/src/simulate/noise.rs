use rand::Rng;
use rand_distr::StandardNormal;
use rustfft::num_complex::Complex;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::simulate::rng::{stream, Seed, TAG_NOISE};

/// Stationary zero-mean Gaussian noise with squared-exponential
/// covariance sigma^2 exp(-(s-t)^2 / (2 tau^2)).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    pub sigma: f64,
    pub tau: f64,
}

impl NoiseModel {
    pub fn validate(&self) -> Result<()> {
        if !(self.sigma.is_finite() && self.sigma >= 0.0) {
            return Err(Error::invalid(format!("sigma must be >= 0, got {}", self.sigma)));
        }
        if !(self.tau.is_finite() && self.tau > 0.0) {
            return Err(Error::invalid(format!("tau must be positive, got {}", self.tau)));
        }
        Ok(())
    }

    pub fn covariance(&self, lag_seconds: f64) -> f64 {
        let z = lag_seconds / self.tau;
        self.sigma * self.sigma * (-0.5 * z * z).exp()
    }
}

const PADDING_FACTOR: usize = 4;
const SPECTRUM_JITTER: f64 = 1e-10;
const CHOLESKY_FALLBACK_MAX: usize = 4000;

/// Draws `n` samples of the process at spacing `dt`; deterministic given
/// seed. Circulant embedding (FFT) is the main path; an exact dense
/// Cholesky covers small problems whose embedding is not PSD.
pub fn sample_gp_noise(model: &NoiseModel, n: usize, dt: f64, seed: Seed) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(Error::invalid("need n >= 1 noise samples"));
    }
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::invalid(format!("dt must be positive, got {dt}")));
    }
    model.validate()?;
    if model.sigma == 0.0 {
        return Ok(vec![0.0; n]);
    }
    let mut rng = stream(seed, TAG_NOISE, 0);
    if n == 1 {
        let z: f64 = rng.sample(StandardNormal);
        return Ok(vec![model.sigma * z]);
    }

    match circulant_embedding(model, n, dt, &mut rng) {
        Ok(samples) => Ok(samples),
        Err(err) if n <= CHOLESKY_FALLBACK_MAX => {
            // Re-derive the stream so the fallback is deterministic too.
            let mut rng = stream(seed, TAG_NOISE, 1);
            cholesky_sample(model, n, dt, &mut rng).map_err(|_| err)
        }
        Err(err) => Err(err),
    }
}

fn circulant_embedding<R: Rng>(
    model: &NoiseModel,
    n: usize,
    dt: f64,
    rng: &mut R,
) -> Result<Vec<f64>> {
    let m = (PADDING_FACTOR * n).next_power_of_two();
    let mut row: Vec<Complex<f64>> = (0..m)
        .map(|j| {
            let lag = j.min(m - j) as f64 * dt;
            Complex::new(model.covariance(lag), 0.0)
        })
        .collect();

    let mut planner = FftPlanner::new();
    planner.plan_fft_forward(m).process(&mut row);

    let lambda_max = row.iter().map(|c| c.re).fold(0.0, f64::max);
    let jitter = SPECTRUM_JITTER * lambda_max;
    let mut lambda = Vec::with_capacity(m);
    for c in &row {
        let v = c.re + jitter;
        if v < 0.0 {
            if v >= -1e-8 * lambda_max {
                lambda.push(0.0);
            } else {
                return Err(Error::numeric(format!(
                    "circulant embedding spectrum has eigenvalue {v:.3e} (max {lambda_max:.3e}); \
                     increase the padding factor or shorten the correlation time"
                )));
            }
        } else {
            lambda.push(v);
        }
    }

    // Complex normals with independent N(0,1) parts make the real part of
    // the inverse transform an exact sample of the target covariance.
    let mut buf: Vec<Complex<f64>> = lambda
        .iter()
        .map(|&l| {
            let a: f64 = rng.sample(StandardNormal);
            let b: f64 = rng.sample(StandardNormal);
            Complex::new(a, b) * l.sqrt()
        })
        .collect();
    planner.plan_fft_inverse(m).process(&mut buf);

    let scale = 1.0 / (m as f64).sqrt();
    Ok(buf[..n].iter().map(|c| c.re * scale).collect())
}

fn cholesky_sample<R: Rng>(model: &NoiseModel, n: usize, dt: f64, rng: &mut R) -> Result<Vec<f64>> {
    // Dense lower-triangular factor of the Toeplitz covariance with a
    // small diagonal jitter.
    let jitter = SPECTRUM_JITTER * model.sigma * model.sigma;
    let mut l = vec![0.0f64; n * n];
    for i in 0..n {
        for j in 0..=i {
            let mut sum = model.covariance((i - j) as f64 * dt);
            if i == j {
                sum += jitter;
            }
            for k in 0..j {
                sum -= l[i * n + k] * l[j * n + k];
            }
            if i == j {
                if sum <= 0.0 {
                    return Err(Error::numeric(
                        "covariance matrix is not positive definite".to_string(),
                    ));
                }
                l[i * n + j] = sum.sqrt();
            } else {
                l[i * n + j] = sum / l[j * n + j];
            }
        }
    }
    let z: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
    Ok((0..n)
        .map(|i| (0..=i).map(|k| l[i * n + k] * z[k]).sum())
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_sigma_is_all_zeros() {
        let m = NoiseModel { sigma: 0.0, tau: 1.0 };
        assert_eq!(sample_gp_noise(&m, 100, 0.02, Seed(0)).unwrap(), vec![0.0; 100]);
    }

    #[test]
    fn deterministic_given_seed() {
        let m = NoiseModel { sigma: 1.5, tau: 0.1 };
        let a = sample_gp_noise(&m, 256, 0.02, Seed(9)).unwrap();
        let b = sample_gp_noise(&m, 256, 0.02, Seed(9)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn lag0_variance_matches_sigma_squared() {
        // 10^6 draws pooled over independent series.
        let m = NoiseModel { sigma: 0.7, tau: 0.1 };
        let per = 250;
        let series = 4000;
        let mut sum_sq = 0.0;
        for s in 0..series {
            let x = sample_gp_noise(&m, per, 0.05, Seed(s as u64)).unwrap();
            sum_sq += x.iter().map(|v| v * v).sum::<f64>();
        }
        let var = sum_sq / (per * series) as f64;
        let want = m.sigma * m.sigma;
        assert!(
            (var - want).abs() < 0.01 * want,
            "sample variance {var}, want {want}"
        );
    }

    #[test]
    fn lag_covariance_matches_closed_form() {
        let m = NoiseModel { sigma: 1.0, tau: 0.1 };
        let dt = 0.05;
        let per = 400;
        let series = 800;
        for &lag in &[1usize, 2, 4] {
            let mut per_series = Vec::with_capacity(series);
            for s in 0..series {
                let x = sample_gp_noise(&m, per, dt, Seed(1000 + s as u64)).unwrap();
                let mut c = 0.0;
                for i in 0..per - lag {
                    c += x[i] * x[i + lag];
                }
                per_series.push(c / (per - lag) as f64);
            }
            let mean = per_series.iter().sum::<f64>() / series as f64;
            let var = per_series.iter().map(|v| (v - mean).powi(2)).sum::<f64>()
                / (series as f64 - 1.0);
            let se = (var / series as f64).sqrt();
            let want = m.covariance(lag as f64 * dt);
            assert!(
                (mean - want).abs() < 5.0 * se,
                "lag {lag}: mean {mean}, want {want}, se {se}"
            );
        }
    }

    #[test]
    fn cholesky_agrees_with_covariance() {
        let m = NoiseModel { sigma: 0.9, tau: 0.2 };
        let mut rng = stream(Seed(5), TAG_NOISE, 1);
        let n = 64;
        let trials = 4000;
        let mut lag0 = 0.0;
        for _ in 0..trials {
            let x = cholesky_sample(&m, n, 0.1, &mut rng).unwrap();
            lag0 += x.iter().map(|v| v * v).sum::<f64>() / n as f64;
        }
        lag0 /= trials as f64;
        let want = m.sigma * m.sigma;
        assert!((lag0 - want).abs() < 0.02 * want, "lag0 {lag0}, want {want}");
    }

    #[test]
    fn single_sample_has_unit_scale() {
        let m = NoiseModel { sigma: 2.0, tau: 1.0 };
        let trials = 20000;
        let mut sum_sq = 0.0;
        for s in 0..trials {
            let x = sample_gp_noise(&m, 1, 1.0, Seed(s)).unwrap();
            sum_sq += x[0] * x[0];
        }
        let var = sum_sq / trials as f64;
        assert!((var - 4.0).abs() < 0.15, "variance {var}");
    }
}
