use crate::diagram::PersistenceDiagram;

/// Exact bottleneck distance between two finite diagrams.
///
/// The infimum over bijections of the augmented multisets (each diagram
/// plus one diagonal copy per point of the other) under the sup-norm
/// point cost. The optimum is attained at one of the finitely many
/// candidate radii (pairwise sup-distances and half-persistences), so a
/// binary search over the sorted candidates with a bipartite matching
/// feasibility test returns the exact value.
pub fn bottleneck_distance(d1: &PersistenceDiagram, d2: &PersistenceDiagram) -> f64 {
    if d1.is_empty() && d2.is_empty() {
        return 0.0;
    }

    let a: Vec<(f64, f64)> = d1.points().iter().map(|p| (p.birth, p.death)).collect();
    let b: Vec<(f64, f64)> = d2.points().iter().map(|p| (p.birth, p.death)).collect();

    let mut candidates = vec![0.0f64];
    for &(pb, pd) in &a {
        candidates.push((pd - pb) / 2.0);
    }
    for &(qb, qd) in &b {
        candidates.push((qd - qb) / 2.0);
    }
    for &(pb, pd) in &a {
        for &(qb, qd) in &b {
            candidates.push(sup_dist((pb, pd), (qb, qd)));
        }
    }
    candidates.sort_by(|x, y| x.partial_cmp(y).expect("finite"));
    candidates.dedup();

    let mut lo = 0usize;
    let mut hi = candidates.len() - 1;
    debug_assert!(feasible(&a, &b, candidates[hi]));
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if feasible(&a, &b, candidates[mid]) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    candidates[lo]
}

fn sup_dist(p: (f64, f64), q: (f64, f64)) -> f64 {
    (p.0 - q.0).abs().max((p.1 - q.1).abs())
}

/// Perfect matching test in the diagonal-augmented bipartite graph.
///
/// Left nodes: points of `a`, then one diagonal ghost per point of `b`.
/// Right nodes: points of `b`, then one diagonal ghost per point of `a`.
/// Ghost-to-ghost pairs cost nothing and are always allowed.
fn feasible(a: &[(f64, f64)], b: &[(f64, f64)], r: f64) -> bool {
    let m = a.len();
    let n = b.len();
    let total = m + n;
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); total];

    for (i, &p) in a.iter().enumerate() {
        for (j, &q) in b.iter().enumerate() {
            if sup_dist(p, q) <= r {
                adj[i].push(j);
            }
        }
        if (p.1 - p.0) / 2.0 <= r {
            adj[i].push(n + i);
        }
    }
    for (j, &q) in b.iter().enumerate() {
        if (q.1 - q.0) / 2.0 <= r {
            adj[m + j].push(j);
        }
        for i in 0..m {
            adj[m + j].push(n + i);
        }
    }

    hopcroft_karp(&adj, total, total) == total
}

/// Maximum bipartite matching; O(E sqrt(V)).
fn hopcroft_karp(adj: &[Vec<usize>], n_left: usize, n_right: usize) -> usize {
    const NIL: usize = usize::MAX;
    let mut match_left = vec![NIL; n_left];
    let mut match_right = vec![NIL; n_right];
    let mut dist = vec![0usize; n_left];
    let mut matching = 0;

    loop {
        // BFS from free left vertices to build layers.
        let mut queue = std::collections::VecDeque::new();
        for u in 0..n_left {
            if match_left[u] == NIL {
                dist[u] = 0;
                queue.push_back(u);
            } else {
                dist[u] = usize::MAX;
            }
        }
        let mut found_augmenting = false;
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                let w = match_right[v];
                if w == NIL {
                    found_augmenting = true;
                } else if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        if !found_augmenting {
            break;
        }

        fn dfs(
            u: usize,
            adj: &[Vec<usize>],
            dist: &mut [usize],
            match_left: &mut [usize],
            match_right: &mut [usize],
        ) -> bool {
            const NIL: usize = usize::MAX;
            for idx in 0..adj[u].len() {
                let v = adj[u][idx];
                let w = match_right[v];
                let ok = if w == NIL {
                    true
                } else if dist[w] == dist[u] + 1 {
                    dfs(w, adj, dist, match_left, match_right)
                } else {
                    false
                };
                if ok {
                    match_left[u] = v;
                    match_right[v] = u;
                    return true;
                }
            }
            dist[u] = usize::MAX;
            false
        }

        for u in 0..n_left {
            if match_left[u] == NIL
                && dfs(u, adj, &mut dist, &mut match_left, &mut match_right)
            {
                matching += 1;
            }
        }
    }
    matching
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::{DiagramPoint, PersistenceDiagram};

    fn diag(points: &[(f64, f64)]) -> PersistenceDiagram {
        PersistenceDiagram::from_points(
            points.iter().map(|&(b, d)| DiagramPoint::new(b, d)).collect(),
        )
    }

    #[test]
    fn identity_is_zero() {
        let d = diag(&[(0.0, 3.0), (1.0, 2.0), (1.0, 2.0)]);
        assert_eq!(bottleneck_distance(&d, &d), 0.0);
        assert_eq!(
            bottleneck_distance(&PersistenceDiagram::empty(), &PersistenceDiagram::empty()),
            0.0
        );
    }

    #[test]
    fn direct_match_beats_diagonal() {
        // Feasible matchings: direct (cost 1) or both points to the
        // diagonal (cost 1.5); enumerated by hand.
        let d1 = diag(&[(0.0, 2.0)]);
        let d2 = diag(&[(0.0, 3.0)]);
        assert_eq!(bottleneck_distance(&d1, &d2), 1.0);
        assert_eq!(bottleneck_distance(&d2, &d1), 1.0);
    }

    #[test]
    fn empty_vs_single_point() {
        let d = diag(&[(0.0, 2.0)]);
        assert_eq!(bottleneck_distance(&d, &PersistenceDiagram::empty()), 1.0);
        assert_eq!(bottleneck_distance(&PersistenceDiagram::empty(), &d), 1.0);
    }

    #[test]
    fn multiplicity_forces_diagonal() {
        // Two identical points vs one: the spare one pays its half-life.
        let d1 = diag(&[(0.0, 4.0), (0.0, 4.0)]);
        let d2 = diag(&[(0.0, 4.0)]);
        assert_eq!(bottleneck_distance(&d1, &d2), 2.0);
    }

    #[test]
    fn translation_moves_distance_linearly() {
        let d1 = diag(&[(0.0, 3.0), (1.0, 2.0)]);
        let shifted = diag(&[(0.5, 3.5), (1.5, 2.5)]);
        assert!((bottleneck_distance(&d1, &shifted) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn symmetric_on_random_inputs() {
        let d1 = diag(&[(0.0, 1.0), (-2.0, 5.0), (3.0, 3.5)]);
        let d2 = diag(&[(0.2, 0.9), (-1.0, 4.0)]);
        let ab = bottleneck_distance(&d1, &d2);
        let ba = bottleneck_distance(&d2, &d1);
        assert_eq!(ab, ba);
        assert!(ab > 0.0);
    }
}
