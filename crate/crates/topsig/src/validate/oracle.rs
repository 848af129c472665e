//! Brute-force reference for the sublevel-set diagram.
//!
//! Independent of the union-find sweep in `diagram`: it enumerates the
//! connected components of every sublevel set at every critical value,
//! forms the rank function of the inclusion maps, and reads multiplicities
//! off the rank function by inclusion-exclusion. No pairing rule appears
//! anywhere; intervals fall out of the rank counts alone.

use crate::diagram::{DiagramPoint, PersistenceDiagram};

/// Number of components of the sublevel set at level `t` that contain at
/// least one sample with value <= `s` (the rank of the inclusion-induced
/// map between the two sublevel sets), for s <= t. The module is zero at
/// and above the global maximum.
fn rank(values: &[f64], s: f64, t: f64, global_max: f64) -> usize {
    if t >= global_max {
        return 0;
    }
    let mut count = 0;
    let mut in_run = false;
    let mut run_has_s = false;
    for &v in values {
        if v <= t {
            if !in_run {
                in_run = true;
                run_has_s = false;
            }
            if v <= s {
                run_has_s = true;
            }
        } else if in_run {
            if run_has_s {
                count += 1;
            }
            in_run = false;
        }
    }
    if in_run && run_has_s {
        count += 1;
    }
    count
}

/// Reference diagram via the level sweep described above.
pub fn oracle_diagram(values: &[f64]) -> PersistenceDiagram {
    assert!(!values.is_empty());
    let mut levels: Vec<f64> = values.to_vec();
    levels.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    levels.dedup();
    let global_max = *levels.last().expect("nonempty");

    let r = |i: isize, j: isize| -> isize {
        if i < 0 {
            return 0;
        }
        debug_assert!(i <= j);
        rank(values, levels[i as usize], levels[j as usize], global_max) as isize
    };

    let k = levels.len() as isize;
    let mut points = Vec::new();
    for i in 0..k {
        for j in (i + 1)..k {
            // multiplicity of the interval [levels[i], levels[j]):
            // alive at (s, t) iff i <= s-index and t-index <= j-1
            let m = r(i, j - 1) - r(i - 1, j - 1) - r(i, j) + r(i - 1, j);
            debug_assert!(m >= 0, "negative multiplicity {m} at ({i}, {j})");
            for _ in 0..m {
                points.push(DiagramPoint::new(levels[i as usize], levels[j as usize]));
            }
        }
    }
    PersistenceDiagram::from_points(points)
}
