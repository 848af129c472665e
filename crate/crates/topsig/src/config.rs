//! Run configuration documents. Every CLI invocation and C-API call is
//! described by one of these; the document is echoed verbatim into each
//! output artifact so results stay reproducible from their own metadata.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::estimate::{
    bootstrap_bands, default_block_len, empirical_signature, windows, BandKind, BootstrapConfig,
    SignatureEstimate, WindowConfig,
};
use crate::functional::{EvaluationGrid, FunctionalCurve, KernelSpec, TruncationSpec};
use crate::series::TimeSeries;
use crate::simulate::{simulate_signal, NoiseModel, PeriodicTemplate, ReparamModel, Seed};

/// Full description of one simulated observation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulateConfig {
    pub template: PeriodicTemplate,
    pub reparam: ReparamModel,
    pub noise: NoiseModel,
    pub duration: f64,
    pub rate: f64,
    pub seed: Seed,
}

impl SimulateConfig {
    pub fn run(&self) -> Result<TimeSeries> {
        simulate_signal(
            &self.template,
            &self.reparam,
            &self.noise,
            self.duration,
            self.rate,
            self.seed,
        )
    }
}

/// Windowed-signature parameters: window, truncation weights, kernel and
/// evaluation grid (kernel default when omitted).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignatureConfig {
    pub window_len: usize,
    #[serde(default = "default_stride")]
    pub stride: usize,
    pub truncation: TruncationSpec,
    pub kernel: KernelSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<EvaluationGrid>,
}

fn default_stride() -> usize {
    1
}

impl SignatureConfig {
    pub fn window_config(&self) -> WindowConfig {
        WindowConfig::new(self.window_len).with_stride(self.stride)
    }

    pub fn grid(&self) -> EvaluationGrid {
        self.grid.clone().unwrap_or_else(|| self.kernel.default_grid())
    }

    fn validate(&self) -> Result<()> {
        if let Some(grid) = &self.grid {
            if grid.dim() != self.kernel.dim() {
                return Err(crate::error::Error::invalid(format!(
                    "grid dimension {} does not match the kernel's index space dimension {}",
                    grid.dim(),
                    self.kernel.dim()
                )));
            }
        }
        Ok(())
    }

    pub fn run(&self, series: &TimeSeries) -> Result<FunctionalCurve> {
        self.validate()?;
        empirical_signature(
            series,
            self.window_config(),
            self.truncation,
            &self.kernel,
            &self.grid(),
        )
    }
}

/// Signature estimation with moving-block-bootstrap bands. A missing
/// block length selects the default num_windows^(2/5) rule.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BootstrapRunConfig {
    #[serde(flatten)]
    pub signature: SignatureConfig,
    pub replicates: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub block_len: Option<usize>,
    pub alpha: f64,
    pub band: BandKind,
    pub seed: Seed,
}

impl BootstrapRunConfig {
    pub fn resolve_block_len(&self, series: &TimeSeries) -> Result<usize> {
        match self.block_len {
            Some(l) => Ok(l),
            None => {
                let n = windows(series, self.signature.window_config())?.len();
                Ok(default_block_len(n))
            }
        }
    }

    pub fn run(&self, series: &TimeSeries) -> Result<SignatureEstimate> {
        self.signature.validate()?;
        let bcfg = BootstrapConfig {
            replicates: self.replicates,
            block_len: self.resolve_block_len(series)?,
            level: self.alpha,
            seed: self.seed,
            band_kind: self.band,
        };
        bootstrap_bands(
            series,
            self.signature.window_config(),
            self.signature.truncation,
            &self.signature.kernel,
            &self.signature.grid(),
            &bcfg,
        )
    }
}
