use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::TimeSeries;

/// A birth/death pair of the sublevel-set filtration: a local minimum
/// value paired with the merging local maximum value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiagramPoint {
    pub birth: f64,
    pub death: f64,
}

impl DiagramPoint {
    pub fn new(birth: f64, death: f64) -> Self {
        debug_assert!(death >= birth, "death {death} < birth {birth}");
        DiagramPoint { birth, death }
    }

    pub fn persistence(&self) -> f64 {
        self.death - self.birth
    }

    fn key(&self) -> (u64, u64) {
        (ordered_bits(self.birth), ordered_bits(self.death))
    }
}

// Order-preserving bit transform so points can be sorted totally.
fn ordered_bits(v: f64) -> u64 {
    let bits = v.to_bits();
    if bits >> 63 == 0 {
        bits ^ (1 << 63)
    } else {
        !bits
    }
}

/// Finite multiset of diagram points, kept sorted lexicographically by
/// (birth, death). The diagonal is implicit and never stored; points
/// with zero persistence are dropped at construction.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PersistenceDiagram {
    points: Vec<DiagramPoint>,
}

impl PersistenceDiagram {
    pub fn empty() -> Self {
        PersistenceDiagram { points: Vec::new() }
    }

    /// Builds the canonical (sorted, zero-persistence-free) diagram.
    pub fn from_points(mut points: Vec<DiagramPoint>) -> Self {
        points.retain(|p| p.death > p.birth);
        points.sort_by_key(|p| p.key());
        PersistenceDiagram { points }
    }

    pub fn points(&self) -> &[DiagramPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn max_persistence(&self) -> f64 {
        self.points
            .iter()
            .map(|p| p.persistence())
            .fold(0.0, f64::max)
    }

    /// Multiset equality with a per-coordinate absolute tolerance.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.points.len() == other.points.len()
            && self
                .points
                .iter()
                .zip(&other.points)
                .all(|(a, b)| (a.birth - b.birth).abs() <= tol && (a.death - b.death).abs() <= tol)
    }

    /// Multiset difference `self \ other` with tolerance; `None` when some
    /// point of `other` has no unmatched counterpart in `self`.
    pub fn multiset_subtract(&self, other: &Self, tol: f64) -> Option<Self> {
        let mut remaining = self.points.clone();
        for p in &other.points {
            let pos = remaining.iter().position(|q| {
                (q.birth - p.birth).abs() <= tol && (q.death - p.death).abs() <= tol
            })?;
            remaining.remove(pos);
        }
        Some(PersistenceDiagram { points: remaining })
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::json!({
            "points": self.points.iter().map(|p| vec![p.birth, p.death]).collect::<Vec<_>>()
        })
    }

    pub fn write_json<W: Write>(&self, mut out: W) -> Result<()> {
        let text = serde_json::to_string_pretty(&self.to_json_value())?;
        out.write_all(text.as_bytes())?;
        out.write_all(b"\n")?;
        Ok(())
    }

    /// Reads the `{"points": [[b, d], ...]}` form; unsorted input is accepted.
    pub fn read_json<R: Read>(mut input: R) -> Result<Self> {
        let mut text = String::new();
        input.read_to_string(&mut text)?;
        let doc: DiagramDoc = serde_json::from_str(&text)?;
        let mut points = Vec::with_capacity(doc.points.len());
        for pair in doc.points {
            let [b, d] = pair;
            if !(b.is_finite() && d.is_finite()) {
                return Err(Error::invalid("diagram coordinates must be finite"));
            }
            if d < b {
                return Err(Error::invalid(format!("death {d} below birth {b}")));
            }
            points.push(DiagramPoint::new(b, d));
        }
        Ok(PersistenceDiagram::from_points(points))
    }
}

#[derive(Deserialize)]
struct DiagramDoc {
    points: Vec<[f64; 2]>,
}

/// Multiset union with multiplicities summed.
pub fn diagram_union(d1: &PersistenceDiagram, d2: &PersistenceDiagram) -> PersistenceDiagram {
    let mut points = Vec::with_capacity(d1.len() + d2.len());
    points.extend_from_slice(d1.points());
    points.extend_from_slice(d2.points());
    PersistenceDiagram::from_points(points)
}

/// H0 sublevel-set persistence diagram of the piecewise-linear
/// interpolation of `series`.
///
/// Each local minimum births a component at its value. When two
/// components meet at a local maximum the one with the larger birth
/// value dies there (equal births: the component whose minimum has the
/// larger sample index dies). The last component dies at the global
/// maximum, so no point carries an infinite death. The result depends
/// only on the ordered values, not on `dt`.
pub fn sublevel_diagram(series: &TimeSeries) -> PersistenceDiagram {
    diagram_of_values(series.values())
}

pub(crate) fn diagram_of_values(values: &[f64]) -> PersistenceDiagram {
    assert!(!values.is_empty(), "series validated nonempty at construction");

    // Collapse plateaus: runs of equal consecutive values contribute the
    // same sublevel topology as a single sample. Keeping the first index
    // of each run preserves the tie-break order.
    let mut samples: Vec<(usize, f64)> = Vec::with_capacity(values.len());
    for (i, &v) in values.iter().enumerate() {
        match samples.last() {
            Some(&(_, last)) if last == v => {}
            _ => samples.push((i, v)),
        }
    }

    if samples.len() == 1 {
        // Constant input: the lone component has zero persistence.
        return PersistenceDiagram::empty();
    }

    // Sweep vertices by increasing value (ties by original index) and
    // union adjacent active vertices. Each union at value v kills the
    // younger of the two merging components at v.
    let n = samples.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        samples[a]
            .1
            .partial_cmp(&samples[b].1)
            .expect("values are finite")
            .then(samples[a].0.cmp(&samples[b].0))
    });

    let mut forest = MergeForest::new(n);
    let mut active = vec![false; n];
    let mut points = Vec::new();

    for &i in &order {
        let value = samples[i].1;
        forest.activate(i, value, samples[i].0);
        active[i] = true;
        if i > 0 && active[i - 1] {
            if let Some(p) = forest.union(i - 1, i, value) {
                points.push(p);
            }
        }
        if i + 1 < n && active[i + 1] {
            if let Some(p) = forest.union(i, i + 1, value) {
                points.push(p);
            }
        }
    }

    // The surviving component is the essential one; by convention it dies
    // at the global maximum.
    let global_max = samples.iter().map(|&(_, v)| v).fold(f64::NEG_INFINITY, f64::max);
    let root = forest.find(order[0]);
    points.push(DiagramPoint::new(forest.birth[root], global_max));

    PersistenceDiagram::from_points(points)
}

/// Union-find over collapsed sample indices; every set remembers the
/// value and original index of its minimum (its birth).
struct MergeForest {
    parent: Vec<usize>,
    birth: Vec<f64>,
    birth_index: Vec<usize>,
}

impl MergeForest {
    fn new(n: usize) -> Self {
        MergeForest {
            parent: (0..n).collect(),
            birth: vec![f64::INFINITY; n],
            birth_index: vec![usize::MAX; n],
        }
    }

    fn activate(&mut self, i: usize, value: f64, original_index: usize) {
        self.birth[i] = value;
        self.birth_index[i] = original_index;
    }

    fn find(&mut self, mut i: usize) -> usize {
        while self.parent[i] != i {
            self.parent[i] = self.parent[self.parent[i]];
            i = self.parent[i];
        }
        i
    }

    /// Merges the components of `a` and `b` at filtration value `at`,
    /// returning the death of the younger component (elder rule); `None`
    /// when both sides are already one component.
    fn union(&mut self, a: usize, b: usize, at: f64) -> Option<DiagramPoint> {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra == rb {
            return None;
        }
        // Older component: smaller birth value, then smaller sample index.
        let a_is_elder = (self.birth[ra], self.birth_index[ra]) < (self.birth[rb], self.birth_index[rb]);
        let (keep, die) = if a_is_elder { (ra, rb) } else { (rb, ra) };
        self.parent[die] = keep;
        Some(DiagramPoint::new(self.birth[die], at))
    }
}
