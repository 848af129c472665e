//! Topological signatures of periodic-like 1d signals.
//!
//! The pipeline: a signal's sublevel-set H0 persistence diagram encodes
//! its local extrema; truncated-persistence-weighted kernel functionals
//! turn diagrams into curves that are robust to time reparametrization;
//! sliding windows plus a moving-block bootstrap estimate those curves
//! with confidence bands from a single dependent observation. A
//! simulator generates the reference models and `validate` stress-tests
//! the advertised inequalities.

pub mod bottleneck;
pub mod config;
pub mod diagram;
pub mod error;
pub mod estimate;
pub mod functional;
pub mod plot;
pub mod series;
pub mod simulate;
pub mod validate;

pub use bottleneck::bottleneck_distance;
pub use config::{BootstrapRunConfig, SignatureConfig, SimulateConfig};
pub use diagram::{diagram_union, sublevel_diagram, DiagramPoint, PersistenceDiagram};
pub use error::{Error, Result};
pub use estimate::{
    bootstrap_bands, default_block_len, empirical_signature, mbb_indices, mbb_resample,
    window_curves, windows, BandKind, BootstrapConfig, SignatureEstimate, WindowConfig,
};
pub use functional::{
    linear_functional, normalized_functional, project, truncated_persistence, truncated_weight,
    EvaluationGrid, FunctionalCurve, GridAxis, KernelSpec, ProjectionWindow, TruncationSpec,
};
pub use series::TimeSeries;
pub use simulate::{
    sample_gp_noise, sample_reparam, simulate_signal, NoiseModel, PeriodicTemplate, ReparamModel,
    Seed, StartLaw, VelocityLaw,
};
pub use validate::CheckReport;
