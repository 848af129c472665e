//! Randomized, desk-scale checks of the inequalities the library's
//! quantities are supposed to satisfy, each reporting machine-readable
//! pass/fail evidence. All checks are deterministic given the seed.

pub mod oracle;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bottleneck::bottleneck_distance;
use crate::diagram::{diagram_union, sublevel_diagram, DiagramPoint, PersistenceDiagram};
use crate::error::{Error, Result};
use crate::functional::{
    normalized_functional, truncated_persistence_pow, KernelSpec, ProjectionWindow, TruncationSpec,
};
use crate::series::TimeSeries;
use crate::simulate::{
    sample_reparam, PeriodicTemplate, ReparamModel, Seed, StartLaw, VelocityLaw, TAG_VALIDATE,
};

const SLACK: f64 = 1e-9;
const DIAGRAM_TOL: f64 = 1e-12;

/// Outcome of one check: `violations == 0` means pass; `worst_margin` is
/// the smallest slack (bound minus achieved value) seen across trials,
/// recorded even when every trial passes.
#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    pub check_id: String,
    pub trials: usize,
    pub violations: usize,
    pub worst_margin: f64,
    pub config: serde_json::Value,
}

impl CheckReport {
    fn new(check_id: &str, config: serde_json::Value) -> Self {
        CheckReport {
            check_id: check_id.to_string(),
            trials: 0,
            violations: 0,
            worst_margin: f64::INFINITY,
            config,
        }
    }

    fn record(&mut self, margin: f64) {
        self.trials += 1;
        if margin < 0.0 {
            self.violations += 1;
        }
        if margin < self.worst_margin {
            self.worst_margin = margin;
        }
    }

    fn finish(mut self) -> Self {
        if !self.worst_margin.is_finite() {
            self.worst_margin = 0.0;
        }
        self
    }

    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

fn rng_for(seed: Seed, salt: u64) -> ChaCha8Rng {
    crate::simulate::stream(seed, TAG_VALIDATE, salt)
}

fn random_values(rng: &mut ChaCha8Rng, len: usize, amplitude: f64) -> Vec<f64> {
    (0..len).map(|_| (rng.random::<f64>() * 2.0 - 1.0) * amplitude).collect()
}

fn series(values: Vec<f64>) -> TimeSeries {
    TimeSeries::new(values, 1.0).expect("check generators produce valid series")
}

/// d_b(D(f), D(f+e)) <= sup|e| on random piecewise-linear series.
pub fn check_bottleneck_stability(trials: usize, seed: Seed) -> CheckReport {
    let mut report = CheckReport::new(
        "bottleneck",
        serde_json::json!({"trials": trials, "seed": seed.0}),
    );
    let mut rng = rng_for(seed, 0);
    for _ in 0..trials {
        let len = rng.random_range(4..=200);
        let amp = 0.5 + rng.random::<f64>() * 4.0;
        let f = random_values(&mut rng, len, amp);
        let delta = rng.random::<f64>() * amp * 0.5;
        let e: Vec<f64> = (0..len).map(|_| (rng.random::<f64>() * 2.0 - 1.0) * delta).collect();
        let g: Vec<f64> = f.iter().zip(&e).map(|(a, b)| a + b).collect();
        let sup = e.iter().fold(0.0f64, |m, v| m.max(v.abs()));

        let d1 = sublevel_diagram(&series(f));
        let d2 = sublevel_diagram(&series(g));
        let dist = bottleneck_distance(&d1, &d2);
        report.record(sup + SLACK - dist);
    }
    report.finish()
}

/// Samples one period of the template and rotates the samples so the
/// largest one sits first; the tiled series then attains its global max
/// on the grid at every period boundary.
fn aligned_period(template: &PeriodicTemplate, samples_per_period: usize) -> Vec<f64> {
    let k = samples_per_period;
    let raw: Vec<f64> = (0..k).map(|i| template.eval(i as f64 / k as f64)).collect();
    let argmax = raw
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.partial_cmp(b.1).expect("finite"))
        .map(|(i, _)| i)
        .expect("nonempty");
    (0..k).map(|i| raw[(i + argmax) % k]).collect()
}

fn tile(period: &[f64], periods: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(period.len() * periods + 1);
    for _ in 0..periods {
        out.extend_from_slice(period);
    }
    out.push(period[0]);
    out
}

/// Diagram additivity across periods cut at a global maximum: the
/// R-period diagram decomposes into R copies of the one-period diagram,
/// and the remainder after removing floor(R-1) copies has p-persistence
/// at most twice the one-period p-persistence.
pub fn check_additivity(template: &PeriodicTemplate, max_periods: usize, seed: Seed) -> CheckReport {
    let samples_per_period = 64;
    let mut report = CheckReport::new(
        "additivity",
        serde_json::json!({
            "template": template,
            "max_periods": max_periods,
            "samples_per_period": samples_per_period,
            "seed": seed.0,
        }),
    );
    let period = aligned_period(template, samples_per_period);
    let d1 = sublevel_diagram(&series(tile(&period, 1)));

    for r in 1..=max_periods {
        let dr = sublevel_diagram(&series(tile(&period, r)));

        // exact decomposition: D_R equals R copies of D_1
        let mut copies = PersistenceDiagram::empty();
        for _ in 0..r {
            copies = diagram_union(&copies, &d1);
        }
        report.record(if dr.approx_eq(&copies, DIAGRAM_TOL) { 0.0 } else { -1.0 });

        // the stated bound: remove floor(R-1) copies, bound the rest
        let mut partial = PersistenceDiagram::empty();
        for _ in 0..r - 1 {
            partial = diagram_union(&partial, &d1);
        }
        match dr.multiset_subtract(&partial, DIAGRAM_TOL) {
            None => report.record(-1.0),
            Some(remainder) => {
                for p in [1.0, 2.0] {
                    let spec = TruncationSpec::new(0.0, p).expect("valid");
                    let rem = truncated_persistence_pow(&remainder, spec).powf(1.0 / p);
                    let one = truncated_persistence_pow(&d1, spec).powf(1.0 / p);
                    report.record(2.0 * one + SLACK - rem);
                }
            }
        }
    }
    report.finish()
}

/// Convergence of the normalized functional to its one-period limit at
/// rate 4(C + L_k A) / (R - 1), plus a nonincreasing difference envelope.
pub fn check_consistency_rate(
    template: &PeriodicTemplate,
    periods: &[usize],
    spec: TruncationSpec,
    kernel: &KernelSpec,
) -> CheckReport {
    let samples_per_period = 200;
    let mut report = CheckReport::new(
        "consistency",
        serde_json::json!({
            "template": template,
            "periods": periods,
            "epsilon": spec.epsilon,
            "p": spec.p,
            "kernel": kernel,
            "samples_per_period": samples_per_period,
        }),
    );
    let grid = kernel.default_grid();
    let k = samples_per_period;

    // limit object: one max-aligned period
    let aligned = aligned_period(template, k);
    let limit_diagram = sublevel_diagram(&series(tile(&aligned, 1)));
    let limit = normalized_functional(&limit_diagram, spec, kernel, &grid);

    let amplitude = {
        let lo = aligned.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = aligned.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        hi - lo
    };
    let rate_constant = 4.0 * (kernel.diagonal_bound() + kernel.point_lipschitz() * amplitude);

    // unaligned sampling: the signal simply starts at phase zero
    let mut diffs = Vec::with_capacity(periods.len());
    for &r in periods {
        let values: Vec<f64> = (0..=r * k).map(|i| template.eval(i as f64 / k as f64)).collect();
        let d = sublevel_diagram(&series(values));
        let curve = normalized_functional(&d, spec, kernel, &grid);
        let diff = curve.sup_distance(&limit);
        diffs.push(diff);
        if r >= 2 {
            report.record(rate_constant / (r as f64 - 1.0) + SLACK - diff);
        }
    }
    for w in diffs.windows(2) {
        report.record(w[0] + SLACK - w[1]);
    }
    report.finish()
}

fn random_diagram(rng: &mut ChaCha8Rng, max_points: usize, max_persistence: f64) -> PersistenceDiagram {
    let n = rng.random_range(1..=max_points);
    let points = (0..n)
        .map(|_| {
            let birth = (rng.random::<f64>() * 2.0 - 1.0) * 3.0;
            let pers = rng.random::<f64>() * max_persistence;
            DiagramPoint::new(birth, birth + pers)
        })
        .collect();
    PersistenceDiagram::from_points(points)
}

fn jitter_diagram(rng: &mut ChaCha8Rng, d: &PersistenceDiagram, scale: f64) -> PersistenceDiagram {
    let mut points: Vec<DiagramPoint> = d
        .points()
        .iter()
        .map(|p| {
            let b = p.birth + (rng.random::<f64>() * 2.0 - 1.0) * scale;
            let d = p.death + (rng.random::<f64>() * 2.0 - 1.0) * scale;
            DiagramPoint::new(b.min(d), d.max(b))
        })
        .collect();
    if rng.random::<f64>() < 0.3 {
        let birth = (rng.random::<f64>() * 2.0 - 1.0) * 3.0;
        points.push(DiagramPoint::new(birth, birth + rng.random::<f64>() * scale));
    }
    if points.len() > 1 && rng.random::<f64>() < 0.3 {
        points.pop();
    }
    PersistenceDiagram::from_points(points)
}

/// Bottleneck continuity of the normalized functional:
/// |F(D1) - F(D2)| <= (L_k + 2p (L_k U + C) (S1 + S2) / N1) d_B(D1, D2),
/// where S_i are the (p-1)-truncated persistences, N1 the p-normalizer
/// and U a bound on the point persistences.
pub fn check_functional_continuity(
    trials: usize,
    spec: TruncationSpec,
    kernels: &[KernelSpec],
    seed: Seed,
) -> CheckReport {
    let mut report = CheckReport::new(
        "continuity",
        serde_json::json!({
            "trials": trials,
            "epsilon": spec.epsilon,
            "p": spec.p,
            "kernels": kernels,
            "seed": seed.0,
        }),
    );
    assert!(spec.p >= 2.0, "continuity bound asserted for p >= 2 only");
    let mut rng = rng_for(seed, 1);
    let lower_spec = TruncationSpec::new(spec.epsilon, spec.p - 1.0).expect("p - 1 >= 1");

    for t in 0..trials {
        let kernel = &kernels[t % kernels.len()];
        let grid = kernel.default_grid();
        let d1 = random_diagram(&mut rng, 10, 4.0);
        let d2 = jitter_diagram(&mut rng, &d1, 0.4);

        let n1 = truncated_persistence_pow(&d1, spec);
        if n1 <= 0.0 {
            continue; // bound vacuous
        }
        let u = d1.max_persistence().max(d2.max_persistence());
        let s1 = truncated_persistence_pow(&d1, lower_spec);
        let s2 = truncated_persistence_pow(&d2, lower_spec);
        let factor = kernel.point_lipschitz()
            + 2.0 * spec.p * (kernel.point_lipschitz() * u + kernel.diagonal_bound()) * (s1 + s2)
                / n1;
        let bound = factor * bottleneck_distance(&d1, &d2);

        let f1 = normalized_functional(&d1, spec, kernel, &grid);
        let f2 = normalized_functional(&d2, spec, kernel, &grid);
        report.record(bound + SLACK - f1.sup_distance(&f2));
    }
    report.finish()
}

/// Upper bound, function-Lipschitz bound and noise lower bound for the
/// truncated persistence, including the exact tightness case of the
/// lower bound.
pub fn check_persistence_bounds(trials: usize, seed: Seed) -> CheckReport {
    let mut report = CheckReport::new(
        "persistence-bounds",
        serde_json::json!({"trials": trials, "seed": seed.0}),
    );
    let mut rng = rng_for(seed, 2);
    let p = 3.0;

    for _ in 0..trials {
        let len = rng.random_range(4..=80);
        let amp = 0.5 + rng.random::<f64>() * 3.0;
        let f = random_values(&mut rng, len, amp);
        let df = sublevel_diagram(&series(f.clone()));

        let lo = f.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = f.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let a_h = hi - lo;
        if a_h <= 0.0 {
            continue;
        }
        let lambda = f.windows(2).map(|w| (w[1] - w[0]).abs()).fold(0.0, f64::max);
        let t_len = (len - 1) as f64;
        let epsilon = a_h * (0.05 + 0.75 * rng.random::<f64>());
        let spec = TruncationSpec::new(epsilon, p).expect("valid");

        // amplitude/oscillation upper bound (Lipschitz sample paths)
        let upper = (a_h - epsilon).powf(p) * (1.0 + p * t_len * (2.0 * lambda / epsilon));
        report.record(upper + SLACK - truncated_persistence_pow(&df, spec));

        // Lipschitz-in-function bound, p - 1 exponent on the right
        let delta = rng.random::<f64>() * amp * 0.3;
        let g: Vec<f64> = f
            .iter()
            .map(|v| v + (rng.random::<f64>() * 2.0 - 1.0) * delta)
            .collect();
        let sup = f.iter().zip(&g).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        let dg = sublevel_diagram(&series(g));
        let lower_spec = TruncationSpec::new(epsilon, p - 1.0).expect("valid");
        let lhs = (truncated_persistence_pow(&df, spec) - truncated_persistence_pow(&dg, spec)).abs();
        let rhs = p
            * sup
            * (truncated_persistence_pow(&df, lower_spec)
                + truncated_persistence_pow(&dg, lower_spec));
        report.record(rhs + SLACK - lhs);

        // noise lower bound: pers_{p, eps}(f + W) >= pers_{p, eps + A_W}(f)
        let w: Vec<f64> = (0..len)
            .map(|_| (rng.random::<f64>() * 2.0 - 1.0) * delta)
            .collect();
        let w_lo = w.iter().cloned().fold(f64::INFINITY, f64::min);
        let w_hi = w.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let fw: Vec<f64> = f.iter().zip(&w).map(|(a, b)| a + b).collect();
        let dfw = sublevel_diagram(&series(fw));
        let widened = TruncationSpec::new(epsilon + (w_hi - w_lo), p).expect("valid");
        report.record(
            truncated_persistence_pow(&dfw, spec) + SLACK
                - truncated_persistence_pow(&df, widened),
        );
    }

    // Tightness of the lower bound: f a symmetric triangle wave with
    // max - min = 2 sup|f|, W = -f/2; equality holds exactly.
    let f = vec![-1.0, 1.0, -1.0, 1.0, -1.0];
    let half: Vec<f64> = f.iter().map(|v| v * 0.5).collect();
    for &eps in &[0.0, 0.3, 0.7] {
        let p = 2.0;
        let lhs = truncated_persistence_pow(
            &sublevel_diagram(&series(half.clone())),
            TruncationSpec::new(eps, p).expect("valid"),
        );
        let rhs = truncated_persistence_pow(
            &sublevel_diagram(&series(f.clone())),
            TruncationSpec::new(eps + 1.0, p).expect("valid"),
        );
        report.record(SLACK - (lhs - rhs).abs());
    }
    report.finish()
}

/// Inserts extra samples inside each linear segment; the values appear in
/// the same order, so the piecewise-linear sublevel topology is unchanged.
fn random_warp(rng: &mut ChaCha8Rng, values: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(values.len() * 3);
    for w in values.windows(2) {
        let (a, b) = (w[0], w[1]);
        out.push(a);
        let extra = rng.random_range(0..=3);
        let mut inner: Vec<f64> = (0..extra)
            .map(|_| a + rng.random::<f64>() * (b - a))
            .collect();
        inner.sort_by(|x, y| if a <= b { x.partial_cmp(y).unwrap() } else { y.partial_cmp(x).unwrap() });
        out.extend(inner);
    }
    out.push(*values.last().expect("nonempty"));
    out
}

/// Diagram invariance under value-preserving re-gridding, plus exact
/// translation equivariance.
pub fn check_invariance(trials: usize, seed: Seed) -> CheckReport {
    let mut report = CheckReport::new(
        "invariance",
        serde_json::json!({"trials": trials, "seed": seed.0}),
    );
    let mut rng = rng_for(seed, 3);
    for _ in 0..trials {
        let len = rng.random_range(2..=60);
        let f = random_values(&mut rng, len, 3.0);
        let warped = random_warp(&mut rng, &f);
        let dt_a = 0.01 + rng.random::<f64>();
        let dt_b = 0.01 + rng.random::<f64>();

        let d1 = sublevel_diagram(&TimeSeries::new(f.clone(), dt_a).expect("valid"));
        let d2 = sublevel_diagram(&TimeSeries::new(warped.clone(), dt_b).expect("valid"));
        report.record(if d1 == d2 { 0.0 } else { -1.0 });

        // warp plus constant shift: diagram shifts by the constant
        let c = (rng.random::<f64>() * 2.0 - 1.0) * 5.0;
        let shifted: Vec<f64> = warped.iter().map(|v| v + c).collect();
        let d3 = sublevel_diagram(&series(shifted));
        let translated = PersistenceDiagram::from_points(
            d1.points()
                .iter()
                .map(|p| DiagramPoint::new(p.birth + c, p.death + c))
                .collect(),
        );
        report.record(if d3 == translated { 0.0 } else { -1.0 });
    }
    report.finish()
}

/// Exhaustive agreement between the union-find sweep and the level-sweep
/// oracle on every series over the alphabet {0, 1, 2} up to `max_len`.
pub fn check_oracle_equivalence(max_len: usize, seed: Seed) -> CheckReport {
    let mut report = CheckReport::new(
        "oracle",
        serde_json::json!({"max_len": max_len, "alphabet": [0.0, 1.0, 2.0], "seed": seed.0}),
    );
    let mut values = Vec::with_capacity(max_len);
    for len in 1..=max_len {
        let total = 3usize.pow(len as u32);
        for code in 0..total {
            values.clear();
            let mut c = code;
            for _ in 0..len {
                values.push((c % 3) as f64);
                c /= 3;
            }
            let fast = crate::diagram::diagram_of_values(&values);
            let slow = oracle::oracle_diagram(&values);
            report.record(if fast == slow { 0.0 } else { -1.0 });
        }
    }
    report.finish()
}

/// Kolmogorov-Smirnov statistic of a sample against Uniform[0, 1).
fn ks_statistic_uniform(sample: &mut [f64]) -> f64 {
    sample.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    let n = sample.len() as f64;
    let mut d = 0.0f64;
    for (i, &x) in sample.iter().enumerate() {
        d = d.max((i as f64 + 1.0) / n - x).max(x - i as f64 / n);
    }
    d
}

/// Asymptotic 1% critical value with the usual finite-sample correction.
fn ks_critical_1pct(n: usize) -> f64 {
    let n = n as f64;
    1.62762 / (n.sqrt() + 0.12 + 0.11 / n.sqrt())
}

/// frac(gamma_n) should be exactly uniform when gamma_0 ~ Uniform[0, 1):
/// the KS statistic stays below the 1% critical value in at least 95% of
/// batches, for both velocity models.
pub fn check_stationarity(batches: usize, seeds_per_batch: usize, seed: Seed) -> CheckReport {
    let mut report = CheckReport::new(
        "stationarity",
        serde_json::json!({
            "batches": batches,
            "seeds_per_batch": seeds_per_batch,
            "seed": seed.0,
        }),
    );
    let laws = [
        VelocityLaw::IidUniform { v_min: 0.5, v_max: 1.5 },
        VelocityLaw::MarkovTruncGauss { v_min: 0.5, v_max: 1.5, eta: 0.2 },
    ];
    let checkpoints = [37usize, 137];
    let critical = ks_critical_1pct(seeds_per_batch);

    for (law_index, law) in laws.iter().enumerate() {
        let model = ReparamModel { law: *law, h: 0.02, start: StartLaw::UniformFrac };
        let mut passed = 0usize;
        for batch in 0..batches {
            let n = checkpoints[batch % checkpoints.len()];
            let mut sample = Vec::with_capacity(seeds_per_batch);
            for s in 0..seeds_per_batch {
                let chain_seed = Seed(crate::simulate::Seed(seed.0).0
                    ^ (law_index as u64) << 56
                    ^ (batch as u64) << 32
                    ^ s as u64);
                let gamma = sample_reparam(&model, n, chain_seed).expect("valid model");
                let x = gamma[n];
                sample.push(x - x.floor());
            }
            if ks_statistic_uniform(&mut sample) < critical {
                passed += 1;
            }
        }
        let rate = passed as f64 / batches as f64;
        report.record(rate - 0.95);
    }
    report.finish()
}

/// Qualitative reparametrization stability: with a shared noise path and
/// time warps interpolating towards a base warp (equal endpoints), the
/// signature distance shrinks along the ladder.
pub fn check_reparam_stability(seed: Seed) -> CheckReport {
    let mut report = CheckReport::new(
        "reparam-stability",
        serde_json::json!({"seed": seed.0, "ladder": [1.0, 0.3, 0.09]}),
    );
    let template = PeriodicTemplate::sine_triangle_mix(1.0).expect("valid");
    let model = ReparamModel {
        law: VelocityLaw::MarkovTruncGauss { v_min: 0.5, v_max: 1.5, eta: 0.2 },
        h: 0.02,
        start: StartLaw::Fixed { value: 0.0 },
    };
    let n = 2000usize;
    let spec = TruncationSpec::new(0.2, 1.0).expect("valid");
    let kernel = KernelSpec::silhouette(ProjectionWindow::new(-9.0, 9.0).expect("valid"));
    let grid = kernel.default_grid();
    let ladder = [1.0, 0.3, 0.09];

    // The stability statement compares signatures (expectations over the
    // reparametrization law) of laws with equal endpoints at shrinking
    // law distance. The perturbed law adds a smooth bump, vanishing at
    // both endpoints and small on the period scale, to the base warp;
    // scaling the bump by the ladder factor scales the law distance.
    let draws = 4u64;
    let bump_amplitude = 0.15;
    let mut reference = crate::functional::FunctionalCurve::zeros(grid.clone());
    let mut mixed_means: Vec<crate::functional::FunctionalCurve> =
        ladder.iter().map(|_| crate::functional::FunctionalCurve::zeros(grid.clone())).collect();

    for k in 0..draws {
        let base = sample_reparam(&model, n, Seed(seed.0 ^ (0x51 + 16 * k))).expect("valid");
        let noise = crate::simulate::NoiseModel { sigma: 0.3, tau: 0.1 };
        let w = crate::simulate::sample_gp_noise(&noise, n + 1, 0.02, Seed(seed.0 ^ (0x53 + 16 * k)))
            .expect("valid noise");

        let signature = |gamma: &[f64]| {
            let values: Vec<f64> =
                gamma.iter().zip(&w).map(|(&g, &wn)| template.eval(g) + wn).collect();
            let s = TimeSeries::new(values, 0.02).expect("valid");
            crate::estimate::empirical_signature(
                &s,
                crate::estimate::WindowConfig::new(150),
                spec,
                &kernel,
                &grid,
            )
            .expect("valid window config")
        };

        let base_curve = signature(&base);
        for (acc, v) in reference.values.iter_mut().zip(&base_curve.values) {
            *acc += v / draws as f64;
        }
        for (slot, &lambda) in mixed_means.iter_mut().zip(&ladder) {
            // bump slope stays far below the minimum warp increment, so
            // the perturbed warp is still strictly increasing
            let mixed: Vec<f64> = base
                .iter()
                .enumerate()
                .map(|(i, &b)| {
                    b + lambda * bump_amplitude * (std::f64::consts::PI * i as f64 / n as f64).sin()
                })
                .collect();
            let curve = signature(&mixed);
            for (acc, v) in slot.values.iter_mut().zip(&curve.values) {
                *acc += v / draws as f64;
            }
        }
    }

    let distances: Vec<f64> =
        mixed_means.iter().map(|m| m.sup_distance(&reference)).collect();
    for pair in distances.windows(2) {
        report.record(pair[0] + SLACK - pair[1]);
    }
    report.finish()
}

/// Names understood by `run_suite`, in execution order.
pub const SUITE_NAMES: &[&str] = &[
    "oracle",
    "invariance",
    "bottleneck",
    "additivity",
    "consistency",
    "continuity",
    "persistence-bounds",
    "stationarity",
    "reparam-stability",
];

fn default_kernels() -> Vec<KernelSpec> {
    let window = ProjectionWindow::new(-9.0, 9.0).expect("valid");
    vec![
        KernelSpec::silhouette(window),
        KernelSpec::persistence_image(window, 1.0, 1.1).expect("valid"),
    ]
}

/// Runs one named check with its default desk-scale configuration.
pub fn run_check(name: &str, seed: Seed) -> Result<CheckReport> {
    let sine = PeriodicTemplate::sine(1).expect("valid");
    let mix = PeriodicTemplate::sine_triangle_mix(1.0).expect("valid");
    match name {
        "oracle" => Ok(check_oracle_equivalence(9, seed)),
        "invariance" => Ok(check_invariance(1000, seed)),
        "bottleneck" => Ok(check_bottleneck_stability(1000, seed)),
        "additivity" => {
            let mut a = check_additivity(&sine, 10, seed);
            let b = check_additivity(&mix, 10, seed);
            a.trials += b.trials;
            a.violations += b.violations;
            a.worst_margin = a.worst_margin.min(b.worst_margin);
            Ok(a)
        }
        "consistency" => {
            let spec = TruncationSpec::new(0.2, 1.0).expect("valid");
            let kernel = KernelSpec::silhouette(ProjectionWindow::new(-9.0, 9.0).expect("valid"));
            Ok(check_consistency_rate(&sine, &[2, 3, 6, 11, 21], spec, &kernel))
        }
        "continuity" => {
            let spec = TruncationSpec::new(0.05, 2.0).expect("valid");
            Ok(check_functional_continuity(500, spec, &default_kernels(), seed))
        }
        "persistence-bounds" => Ok(check_persistence_bounds(500, seed)),
        "stationarity" => Ok(check_stationarity(100, 200, seed)),
        "reparam-stability" => Ok(check_reparam_stability(seed)),
        other => Err(Error::invalid(format!(
            "unknown suite `{other}`; known: {}",
            SUITE_NAMES.join(", ")
        ))),
    }
}

/// Runs `all` or a single named check.
pub fn run_suite(selector: &str, seed: Seed) -> Result<Vec<CheckReport>> {
    if selector == "all" {
        SUITE_NAMES.iter().map(|name| run_check(name, seed)).collect()
    } else {
        Ok(vec![run_check(selector, seed)?])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_perturbation_gives_zero_distance() {
        let f = series(vec![0.0, 2.0, 1.0, 3.0, -1.0]);
        let d = sublevel_diagram(&f);
        assert_eq!(bottleneck_distance(&d, &d), 0.0);
    }

    #[test]
    fn constant_shift_translates_the_diagram() {
        let f = vec![0.0, 2.0, 1.0, 3.0, -1.0];
        let c = 2.5;
        let shifted: Vec<f64> = f.iter().map(|v| v + c).collect();
        let d1 = sublevel_diagram(&series(f));
        let d2 = sublevel_diagram(&series(shifted));
        let translated = PersistenceDiagram::from_points(
            d1.points()
                .iter()
                .map(|p| DiagramPoint::new(p.birth + c, p.death + c))
                .collect(),
        );
        assert_eq!(d2, translated);
        // distance between original and shift is the shift itself, which
        // matches the sup-norm of the difference
        assert!((bottleneck_distance(&d1, &d2) - c).abs() <= c);
        assert!(bottleneck_distance(&d1, &d2) <= c + 1e-12);
    }

    #[test]
    fn identity_warp_is_identical() {
        let f = vec![0.5, -1.0, 2.0];
        assert_eq!(
            sublevel_diagram(&series(f.clone())),
            sublevel_diagram(&TimeSeries::new(f, 0.25).unwrap())
        );
    }

    #[test]
    fn single_point_translation_continuity_case() {
        // single-point diagrams translated by delta: LHS <= L_k * delta
        let w = ProjectionWindow::new(-9.0, 9.0).unwrap();
        let kernel = KernelSpec::silhouette(w);
        let spec = TruncationSpec::new(0.0, 2.0).unwrap();
        let grid = kernel.default_grid();
        let delta = 0.125;
        let d1 = PersistenceDiagram::from_points(vec![DiagramPoint::new(0.0, 2.0)]);
        let d2 = PersistenceDiagram::from_points(vec![DiagramPoint::new(delta, 2.0 + delta)]);
        let f1 = normalized_functional(&d1, spec, &kernel, &grid);
        let f2 = normalized_functional(&d2, spec, &kernel, &grid);
        let lhs = f1.sup_distance(&f2);
        assert!(lhs <= kernel.point_lipschitz() * delta + 1e-12);
        assert!(bottleneck_distance(&d1, &d2) <= delta + 1e-15);
    }

    #[test]
    fn identical_diagrams_have_zero_continuity_gap() {
        let d = sublevel_diagram(&series(vec![0.0, 2.0, 1.0, 3.0]));
        let kernel = KernelSpec::silhouette(ProjectionWindow::new(-9.0, 9.0).unwrap());
        let spec = TruncationSpec::new(0.0, 2.0).unwrap();
        let grid = kernel.default_grid();
        let f = normalized_functional(&d, spec, &kernel, &grid);
        assert_eq!(f.sup_distance(&f), 0.0);
        assert_eq!(bottleneck_distance(&d, &d), 0.0);
    }

    #[test]
    fn constant_series_satisfies_all_persistence_bounds() {
        let d = sublevel_diagram(&series(vec![2.0; 10]));
        assert!(d.is_empty());
        for p in [1.0, 2.0, 3.0] {
            let spec = TruncationSpec::new(0.1, p).unwrap();
            assert_eq!(truncated_persistence_pow(&d, spec), 0.0);
        }
    }

    #[test]
    fn additivity_of_single_period_is_trivial() {
        let sine = PeriodicTemplate::sine(1).unwrap();
        let report = check_additivity(&sine, 1, Seed(0));
        assert!(report.passed(), "{report:?}");
    }

    #[test]
    fn rate_bound_at_two_periods_is_the_full_constant() {
        // R = 2 makes the denominator 1: bound = 4 (C + L_k A)
        let sine = PeriodicTemplate::sine(1).unwrap();
        let spec = TruncationSpec::new(0.0, 1.0).unwrap();
        let kernel = KernelSpec::silhouette(ProjectionWindow::new(-9.0, 9.0).unwrap());
        let report = check_consistency_rate(&sine, &[2], spec, &kernel);
        assert!(report.passed(), "{report:?}");
        // silhouette: C = 0, L_k = 2, sine amplitude 2 -> constant 16
        assert!(report.worst_margin <= 16.0 + 1e-9);
    }

    #[test]
    fn unknown_suite_is_rejected() {
        assert!(run_check("no-such-check", Seed(0)).is_err());
        assert!(run_suite("also-missing", Seed(0)).is_err());
    }

    #[test]
    fn ks_critical_value_is_sane() {
        // classical asymptotic value ~1.63/sqrt(n)
        let c = ks_critical_1pct(200);
        assert!(c > 0.10 && c < 0.13, "critical {c}");
    }
}
