use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::diagram::{DiagramPoint, PersistenceDiagram};
use crate::error::{Error, Result};

/// Truncation parameters: weight w_eps(b, d) = (d - b - eps)_+ raised to
/// the power p in all aggregates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TruncationSpec {
    pub epsilon: f64,
    pub p: f64,
}

impl TruncationSpec {
    pub fn new(epsilon: f64, p: f64) -> Result<Self> {
        if !(epsilon.is_finite() && epsilon >= 0.0) {
            return Err(Error::invalid(format!("epsilon must be >= 0, got {epsilon}")));
        }
        if !(p.is_finite() && p >= 1.0) {
            return Err(Error::invalid(format!("p must be >= 1, got {p}")));
        }
        Ok(TruncationSpec { epsilon, p })
    }
}

/// Truncated persistence weight of a single point: (death - birth - eps)_+.
pub fn truncated_weight(point: DiagramPoint, spec: TruncationSpec) -> f64 {
    (point.death - point.birth - spec.epsilon).max(0.0)
}

/// eps-truncated p-persistence: (sum of w_eps^p)^(1/p); 0 on the empty diagram.
pub fn truncated_persistence(d: &PersistenceDiagram, spec: TruncationSpec) -> f64 {
    truncated_persistence_pow(d, spec).powf(1.0 / spec.p)
}

/// The p-th power form, sum of w_eps^p, used as the normalizer.
pub fn truncated_persistence_pow(d: &PersistenceDiagram, spec: TruncationSpec) -> f64 {
    d.points()
        .iter()
        .map(|&x| truncated_weight(x, spec).powf(spec.p))
        .sum()
}

/// Clamping window [L, U] of the projection that gives every kernel a
/// common compact support.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProjectionWindow {
    pub lower: f64,
    pub upper: f64,
}

impl ProjectionWindow {
    pub fn new(lower: f64, upper: f64) -> Result<Self> {
        if !(lower.is_finite() && upper.is_finite() && lower < upper) {
            return Err(Error::invalid(format!(
                "projection window needs lower < upper, got [{lower}, {upper}]"
            )));
        }
        Ok(ProjectionWindow { lower, upper })
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }
}

/// Moves a point above the diagonal along (1, -1) onto the closed upper
/// triangle with corner (L, U): shift = min(max(d - U, L - b, 0), (d-b)/2).
/// Persistence never increases; interior points are fixed.
pub fn project(point: DiagramPoint, window: ProjectionWindow) -> DiagramPoint {
    let slack = (point.death - window.upper)
        .max(window.lower - point.birth)
        .max(0.0);
    let shift = slack.min((point.death - point.birth) / 2.0);
    DiagramPoint {
        birth: point.birth + shift,
        death: point.death - shift,
    }
}

/// Kernel family attached to each diagram point. The silhouette maps a
/// point to a tent function on the line; the persistence image maps it to
/// a tapered Gaussian bump on the plane. Both are precomposed with the
/// projection so their supports stay inside a fixed compact set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case")]
pub enum KernelSpec {
    Silhouette {
        window: ProjectionWindow,
    },
    PersistenceImage {
        window: ProjectionWindow,
        sigma: f64,
        r: f64,
    },
}

impl KernelSpec {
    pub fn silhouette(window: ProjectionWindow) -> Self {
        KernelSpec::Silhouette { window }
    }

    pub fn persistence_image(window: ProjectionWindow, sigma: f64, r: f64) -> Result<Self> {
        if !(sigma.is_finite() && sigma > 0.0) {
            return Err(Error::invalid(format!("sigma must be positive, got {sigma}")));
        }
        if !(r.is_finite() && r > 1.0) {
            return Err(Error::invalid(format!("r must exceed 1, got {r}")));
        }
        Ok(KernelSpec::PersistenceImage { window, sigma, r })
    }

    pub fn window(&self) -> ProjectionWindow {
        match *self {
            KernelSpec::Silhouette { window } => window,
            KernelSpec::PersistenceImage { window, .. } => window,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            KernelSpec::Silhouette { .. } => 1,
            KernelSpec::PersistenceImage { .. } => 2,
        }
    }

    /// Lipschitz constant of x -> k(x) in the sup norm over the index space.
    pub fn point_lipschitz(&self) -> f64 {
        match *self {
            KernelSpec::Silhouette { .. } => 2.0,
            KernelSpec::PersistenceImage { sigma, r, .. } => {
                2f64.powf(r - 1.0) * (r + 2.0) / (PI * sigma.powi(3))
            }
        }
    }

    /// Lipschitz constant of t -> k(x)(t), uniform over points x.
    pub fn time_lipschitz(&self) -> f64 {
        match *self {
            KernelSpec::Silhouette { .. } => 2.0,
            KernelSpec::PersistenceImage { sigma, r, .. } => {
                2f64.powf(r + 1.0) / (PI * std::f64::consts::E * sigma.powi(3))
            }
        }
    }

    /// Bound on |k(x)| for x on the diagonal.
    pub fn diagonal_bound(&self) -> f64 {
        match *self {
            KernelSpec::Silhouette { .. } => 0.0,
            KernelSpec::PersistenceImage { sigma, r, .. } => {
                2f64.powf(r - 1.0) / (PI * sigma * sigma)
            }
        }
    }

    /// Evaluates the kernel of `point` at one index-space node.
    /// `node` has one coordinate for the silhouette, two for the image.
    pub fn eval(&self, point: DiagramPoint, node: &[f64]) -> f64 {
        match *self {
            KernelSpec::Silhouette { window } => {
                debug_assert_eq!(node.len(), 1);
                let p = project(point, window);
                let half_life = (p.death - p.birth) / 2.0;
                let center = (p.birth + p.death) / 2.0;
                (half_life - (node[0] - center).abs()).max(0.0)
            }
            KernelSpec::PersistenceImage { window, sigma, r } => {
                debug_assert_eq!(node.len(), 2);
                let p = project(point, window);
                let dx = p.birth - node[0];
                let dy = p.death - node[1];
                let taper = (2.0 - dx.abs().max(dy.abs()) / sigma).max(0.0).powf(r);
                if taper == 0.0 {
                    return 0.0;
                }
                let gauss = (-(dx * dx + dy * dy) / (2.0 * sigma * sigma)).exp()
                    / (2.0 * PI * sigma * sigma);
                taper * gauss
            }
        }
    }

    /// Default evaluation grid: the projection window padded by an eighth
    /// of its width on each side; 512 nodes for curves, 64 x 64 for images.
    pub fn default_grid(&self) -> EvaluationGrid {
        let w = self.window();
        let pad = w.width() / 8.0;
        let axis = GridAxis {
            start: w.lower - pad,
            stop: w.upper + pad,
            count: match self {
                KernelSpec::Silhouette { .. } => 512,
                KernelSpec::PersistenceImage { .. } => 64,
            },
        };
        let axes = match self {
            KernelSpec::Silhouette { .. } => vec![axis],
            KernelSpec::PersistenceImage { .. } => vec![axis, axis],
        };
        EvaluationGrid::new(axes).expect("default axes are valid")
    }
}

/// One uniformly spaced axis of an evaluation grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridAxis {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl GridAxis {
    pub fn node(&self, i: usize) -> f64 {
        debug_assert!(i < self.count);
        self.start + (self.stop - self.start) * i as f64 / (self.count - 1) as f64
    }

    pub fn step(&self) -> f64 {
        (self.stop - self.start) / (self.count - 1) as f64
    }
}

/// Finite grid over the kernel's index space; one axis for curves, two
/// (row-major, first axis outer) for images.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationGrid {
    pub axes: Vec<GridAxis>,
}

impl EvaluationGrid {
    pub fn new(axes: Vec<GridAxis>) -> Result<Self> {
        if axes.is_empty() || axes.len() > 2 {
            return Err(Error::invalid("grid must have one or two axes"));
        }
        for axis in &axes {
            if !(axis.start.is_finite() && axis.stop.is_finite() && axis.start < axis.stop) {
                return Err(Error::invalid(format!(
                    "grid axis needs start < stop, got [{}, {}]",
                    axis.start, axis.stop
                )));
            }
            if axis.count < 2 {
                return Err(Error::invalid("grid axis needs at least 2 nodes"));
            }
        }
        Ok(EvaluationGrid { axes })
    }

    pub fn uniform_1d(start: f64, stop: f64, count: usize) -> Result<Self> {
        EvaluationGrid::new(vec![GridAxis { start, stop, count }])
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    pub fn node_count(&self) -> usize {
        self.axes.iter().map(|a| a.count).product()
    }

    /// Coordinates of the flat node index (row-major for dim 2).
    pub fn node(&self, flat: usize) -> Vec<f64> {
        match self.axes.len() {
            1 => vec![self.axes[0].node(flat)],
            2 => {
                let ny = self.axes[1].count;
                vec![self.axes[0].node(flat / ny), self.axes[1].node(flat % ny)]
            }
            _ => unreachable!(),
        }
    }

    pub fn nodes(&self) -> impl Iterator<Item = Vec<f64>> + '_ {
        (0..self.node_count()).map(move |i| self.node(i))
    }

    /// All node coordinates in one flat buffer (`dim` entries per node).
    pub fn flat_nodes(&self) -> Vec<f64> {
        let dim = self.dim();
        let mut out = Vec::with_capacity(self.node_count() * dim);
        for i in 0..self.node_count() {
            out.extend_from_slice(&self.node(i));
        }
        out
    }
}

/// A functional evaluated on a grid; `values[i]` belongs to `grid.node(i)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FunctionalCurve {
    pub grid: EvaluationGrid,
    pub values: Vec<f64>,
}

impl FunctionalCurve {
    pub fn zeros(grid: EvaluationGrid) -> Self {
        let n = grid.node_count();
        FunctionalCurve { grid, values: vec![0.0; n] }
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn sup_distance(&self, other: &FunctionalCurve) -> f64 {
        debug_assert_eq!(self.values.len(), other.values.len());
        self.values
            .iter()
            .zip(&other.values)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }

    /// CSV export: `t,value` rows for curves, `x,y,value` for images.
    pub fn write_csv<W: std::io::Write>(&self, mut out: W) -> Result<()> {
        match self.grid.dim() {
            1 => {
                writeln!(out, "t,value")?;
                for (i, v) in self.values.iter().enumerate() {
                    writeln!(out, "{},{}", self.grid.axes[0].node(i), v)?;
                }
            }
            _ => {
                writeln!(out, "x,y,value")?;
                for (i, v) in self.values.iter().enumerate() {
                    let node = self.grid.node(i);
                    writeln!(out, "{},{},{}", node[0], node[1], v)?;
                }
            }
        }
        Ok(())
    }
}

/// Linear functional rho(D)(t) = sum over points of w_eps^p * k(point)(t).
pub fn linear_functional(
    d: &PersistenceDiagram,
    spec: TruncationSpec,
    kernel: &KernelSpec,
    grid: &EvaluationGrid,
) -> FunctionalCurve {
    let mut curve = FunctionalCurve::zeros(grid.clone());
    let dim = grid.dim();
    let nodes = grid.flat_nodes();
    for &point in d.points() {
        let weight = truncated_weight(point, spec).powf(spec.p);
        if weight == 0.0 {
            continue;
        }
        for (value, node) in curve.values.iter_mut().zip(nodes.chunks_exact(dim)) {
            *value += weight * kernel.eval(point, node);
        }
    }
    curve
}

/// Normalized functional: rho divided by the total truncated p-persistence
/// (to the p), or the zero curve when the normalizer vanishes. Invariant
/// to replicating the diagram.
pub fn normalized_functional(
    d: &PersistenceDiagram,
    spec: TruncationSpec,
    kernel: &KernelSpec,
    grid: &EvaluationGrid,
) -> FunctionalCurve {
    let normalizer = truncated_persistence_pow(d, spec);
    let mut curve = linear_functional(d, spec, kernel, grid);
    if normalizer > 0.0 {
        for v in &mut curve.values {
            *v /= normalizer;
        }
    } else {
        for v in &mut curve.values {
            *v = 0.0;
        }
    }
    curve
}
