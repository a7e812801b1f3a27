//! Deterministic ingredients of the second-eigenvalue concentration
//! argument: the three remainder quantities and their comparison
//! inequalities, the light/heavy edge decomposition, the finite net with
//! its rounding map and size bound, and the martingale tail bound.

use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::{
    abs_pow, dirichlet_energy, signed_pow, weighted_p_norm, DegreeSequence, Multigraph,
    VertexFunction,
};
use crate::rng::RngSeed;

/// The three remainder quantities attached to a pair of reals at a given p.
#[derive(Debug, Clone, Copy)]
pub struct RemainderTriple {
    /// |a|^p + |b|^p - |a-b|^p.
    pub r: f64,
    /// {a}^{p-1} b + a {b}^{p-1}.
    pub r_tilde: f64,
    /// max(|a|^{p-1}|b|, |a||b|^{p-1}).
    pub r_bar: f64,
}

pub fn remainders(a: f64, b: f64, p: f64) -> RemainderTriple {
    let r = abs_pow(a.abs(), p) + abs_pow(b.abs(), p) - abs_pow((a - b).abs(), p);
    let r_tilde = signed_pow(a, p - 1.0) * b + a * signed_pow(b, p - 1.0);
    let r_bar = (abs_pow(a.abs(), p - 1.0) * b.abs()).max(a.abs() * abs_pow(b.abs(), p - 1.0));
    RemainderTriple { r, r_tilde, r_bar }
}

/// Outcome of stress testing the remainder inequalities on random triples.
/// All violation counts must be zero; the ratio fields record how close the
/// sampled triples came to each bound.
#[derive(Debug, Clone)]
pub struct RemainderReport {
    pub samples: usize,
    pub violations_lower: usize,
    pub violations_upper: usize,
    pub violations_tilde: usize,
    pub violations_p3: usize,
    /// Smallest observed |r| / r_bar (at least 1 when the bound holds).
    pub min_ratio_lower: f64,
    /// Largest observed |r| / ((1 + p 2^{p-1}) r_bar).
    pub max_ratio_upper: f64,
    /// Largest observed |r_tilde| / (2 r_bar).
    pub max_ratio_tilde: f64,
    /// Largest observed r - p r_tilde over the p >= 3 samples.
    pub max_excess_p3: f64,
}

/// Evaluates the three comparison inequalities on random (a, b, p) triples
/// with a, b uniform in [-10, 10] and p uniform in `p_range`. The fourth
/// inequality is only claimed for p >= 3 and is skipped below that.
pub fn remainder_inequality_suite(
    samples: usize,
    p_range: (f64, f64),
    seed: &RngSeed,
) -> Result<RemainderReport> {
    let (p_lo, p_hi) = p_range;
    if !(2.0 <= p_lo && p_lo <= p_hi) {
        return Err(Error::Parameter(format!(
            "p range must satisfy 2 <= lo <= hi, got [{p_lo}, {p_hi}]"
        )));
    }
    let mut rng = seed.rng();
    let mut report = RemainderReport {
        samples,
        violations_lower: 0,
        violations_upper: 0,
        violations_tilde: 0,
        violations_p3: 0,
        min_ratio_lower: f64::INFINITY,
        max_ratio_upper: 0.0,
        max_ratio_tilde: 0.0,
        max_excess_p3: f64::NEG_INFINITY,
    };
    for _ in 0..samples {
        let a = rng.gen_range(-10.0..=10.0);
        let b = rng.gen_range(-10.0..=10.0);
        let p = if p_lo == p_hi {
            p_lo
        } else {
            rng.gen_range(p_lo..=p_hi)
        };
        let t = remainders(a, b, p);
        let abs_r = t.r.abs();
        let upper_scale = (1.0 + p * 2.0f64.powf(p - 1.0)) * t.r_bar;
        // Strict float comparisons would flag exact-equality cases such as
        // b = 0, so each test carries a tiny relative slack.
        let slack = 1e-9 * (1.0 + abs_r + t.r_bar);
        if t.r_bar > abs_r + slack {
            report.violations_lower += 1;
        }
        if abs_r > upper_scale + slack {
            report.violations_upper += 1;
        }
        if t.r_tilde.abs() > 2.0 * t.r_bar + slack {
            report.violations_tilde += 1;
        }
        if p >= 3.0 {
            let excess = t.r - p * t.r_tilde;
            if excess > slack {
                report.violations_p3 += 1;
            }
            if excess > report.max_excess_p3 {
                report.max_excess_p3 = excess;
            }
        }
        if t.r_bar > 0.0 {
            report.min_ratio_lower = report.min_ratio_lower.min(abs_r / t.r_bar);
            report.max_ratio_upper = report.max_ratio_upper.max(abs_r / upper_scale);
            report.max_ratio_tilde = report
                .max_ratio_tilde
                .max(t.r_tilde.abs() / (2.0 * t.r_bar));
        }
    }
    Ok(report)
}

/// Edge split of a vertex function into light and heavy contributions.
#[derive(Debug, Clone)]
pub struct Decomposition {
    pub light_edges: Vec<usize>,
    pub heavy_edges: Vec<usize>,
    /// Remainder sum over all edges; equals x_light + x_heavy by
    /// construction.
    pub x_total: f64,
    pub x_light: f64,
    pub x_heavy: f64,
    /// Light-edge sum of the tilde remainder, used by the expectation
    /// regression tests.
    pub x_tilde_light: f64,
    pub threshold: f64,
    /// |energy - (norm^p - x_total)|; near zero whenever x sits on the
    /// constraint sphere.
    pub identity_gap: f64,
}

/// Partitions edges by comparing the bar remainder against d^beta/(d m)
/// with beta = p/(2+2p); light edges sit at or below the threshold.
pub fn decompose_light_heavy(
    g: &Multigraph,
    x: &VertexFunction,
    p: f64,
    d_max: usize,
) -> Result<Decomposition> {
    if x.len() != g.vertex_count() {
        return Err(Error::Dimension {
            expected: g.vertex_count(),
            got: x.len(),
        });
    }
    if d_max < 1 {
        return Err(Error::Parameter("maximum degree must be positive".into()));
    }
    let beta = p / (2.0 + 2.0 * p);
    let d = d_max as f64;
    let m = g.vertex_count() as f64;
    let threshold = abs_pow(d, beta) / (d * m);
    let mut dec = Decomposition {
        light_edges: Vec::new(),
        heavy_edges: Vec::new(),
        x_total: 0.0,
        x_light: 0.0,
        x_heavy: 0.0,
        x_tilde_light: 0.0,
        threshold,
        identity_gap: 0.0,
    };
    for (idx, &(u, v)) in g.edges().iter().enumerate() {
        let t = remainders(x[u], x[v], p);
        if t.r_bar > threshold {
            dec.heavy_edges.push(idx);
            dec.x_heavy += t.r;
        } else {
            dec.light_edges.push(idx);
            dec.x_light += t.r;
            dec.x_tilde_light += t.r_tilde;
        }
    }
    dec.x_total = dec.x_light + dec.x_heavy;
    let norm_p = weighted_p_norm(x, &g.degree_sequence(), p)?;
    let energy = dirichlet_energy(g, x, p)?;
    dec.identity_gap = (energy - (norm_p - dec.x_total)).abs();
    Ok(dec)
}

/// Parameters of the finite net in signed-power coordinates.
#[derive(Debug, Clone)]
pub struct NetParams {
    pub p: f64,
    pub epsilon: f64,
    pub theta: f64,
    /// Norm ceiling (1 + eps theta^{1/p})^q.
    pub r_upper: f64,
    /// Norm floor (1 - eps theta^{1/p})^q guaranteed for rounded points.
    pub r_lower: f64,
    pub d: DegreeSequence,
}

impl NetParams {
    pub fn new(p: f64, epsilon: f64, theta: f64, d: DegreeSequence) -> Result<Self> {
        if p < 2.0 {
            return Err(Error::Parameter(format!("net requires p >= 2, got {p}")));
        }
        if !(0.0 < epsilon && epsilon <= 1.0) {
            return Err(Error::Parameter(format!(
                "epsilon must lie in (0, 1], got {epsilon}"
            )));
        }
        if theta < 1.0 {
            return Err(Error::Parameter(format!("theta must be >= 1, got {theta}")));
        }
        if epsilon * theta > 1.0 {
            return Err(Error::Parameter(format!(
                "need epsilon * theta <= 1, got {}",
                epsilon * theta
            )));
        }
        if d.is_empty() {
            return Err(Error::Parameter("degree sequence is empty".into()));
        }
        let q = p / (p - 1.0);
        let s = epsilon * theta.powf(1.0 / p);
        Ok(NetParams {
            p,
            epsilon,
            theta,
            r_upper: (1.0 + s).powf(q),
            r_lower: (1.0 - s).powf(q),
            d,
        })
    }

    pub fn q(&self) -> f64 {
        self.p / (self.p - 1.0)
    }

    /// Grid spacing of {x_i}^{p-1} at vertex i: eps d^{1/p} / (d_i m^{1/q}).
    pub fn step(&self, i: usize) -> f64 {
        let m = self.d.len() as f64;
        self.epsilon * (self.d.max() as f64).powf(1.0 / self.p)
            / (self.d.get(i) as f64 * m.powf(1.0 / self.q()))
    }
}

/// Rounds a constraint-sphere point onto the net: each signed power is
/// floored to its vertex grid, then the first r coordinates are bumped one
/// step up so the weighted signed-power sum is zero in exact grid integers.
/// Returns the rounded point and r.
pub fn net_round(x: &VertexFunction, params: &NetParams) -> Result<(VertexFunction, usize)> {
    let m = params.d.len();
    if x.len() != m {
        return Err(Error::Dimension {
            expected: m,
            got: x.len(),
        });
    }
    let p = params.p;
    let norm = weighted_p_norm(x, &params.d, p)?;
    let mean: f64 = (0..m)
        .map(|i| signed_pow(x[i], p - 1.0) * params.d.get(i) as f64)
        .sum();
    // step(i) * d_i is constant over i, so it is the natural scale for the
    // zero-mean tolerance.
    let scale = params.step(0) * params.d.get(0) as f64;
    if (norm - 1.0).abs() > 1e-6 || mean.abs() > 1e-6 * scale.max(1.0) {
        return Err(Error::Parameter(format!(
            "input must lie on the constraint sphere: norm^p = {norm}, weighted mean = {mean}"
        )));
    }
    let mut k = vec![0i64; m];
    for i in 0..m {
        let t = signed_pow(x[i], p - 1.0) / params.step(i);
        // The snap keeps already-aligned coordinates from flooring down a
        // full step over a rounding error.
        k[i] = (t + 1e-9).floor() as i64;
    }
    let r = -k.iter().sum::<i64>();
    if r < 0 || r >= m as i64 {
        return Err(Error::Degenerate(format!(
            "rounding shift {r} escaped [0, {m}); input too far off the sphere"
        )));
    }
    let mut out = vec![0.0f64; m];
    for i in 0..m {
        let bump = if (i as i64) < r { 1 } else { 0 };
        let grid = params.step(i) * (k[i] + bump) as f64;
        out[i] = signed_pow(grid, 1.0 / (p - 1.0));
    }
    Ok((VertexFunction(out), r as usize))
}

const NET_ENUM_MAX_VERTICES: usize = 4;
const NET_ENUM_CAP: u128 = 10_000_000;

/// Exhaustively lists the net: all grid-integer vectors with zero weighted
/// signed-power sum and weighted p-norm at most the ceiling. Guarded to
/// tiny vertex counts.
pub fn net_enumerate_tiny(params: &NetParams) -> Result<Vec<VertexFunction>> {
    let m = params.d.len();
    if m > NET_ENUM_MAX_VERTICES {
        return Err(Error::TooLarge {
            got: m,
            cap: NET_ENUM_MAX_VERTICES,
        });
    }
    let q = params.q();
    // Per-coordinate bound: |step_i k_i|^q d_i <= R.
    let mut k_max = vec![0i64; m];
    let mut estimate: u128 = 1;
    for i in 0..m {
        let cap = (params.r_upper / params.d.get(i) as f64).powf(1.0 / q) / params.step(i);
        k_max[i] = cap.floor() as i64;
        estimate = estimate.saturating_mul((2 * k_max[i] + 1) as u128);
    }
    if estimate > NET_ENUM_CAP {
        return Err(Error::EnumerationTooLarge {
            estimate,
            cap: NET_ENUM_CAP,
        });
    }
    let mut out = Vec::new();
    let mut k = vec![0i64; m];
    enumerate_rec(params, &k_max, &mut k, 0, 0, &mut out);
    Ok(out)
}

fn enumerate_rec(
    params: &NetParams,
    k_max: &[i64],
    k: &mut Vec<i64>,
    depth: usize,
    sum: i64,
    out: &mut Vec<VertexFunction>,
) {
    let m = params.d.len();
    if depth == m {
        if sum != 0 {
            return;
        }
        let q = params.q();
        let norm: f64 = (0..m)
            .map(|i| abs_pow((params.step(i) * k[i] as f64).abs(), q) * params.d.get(i) as f64)
            .sum();
        if norm <= params.r_upper * (1.0 + 1e-12) {
            let x: Vec<f64> = (0..m)
                .map(|i| signed_pow(params.step(i) * k[i] as f64, 1.0 / (params.p - 1.0)))
                .collect();
            out.push(VertexFunction(x));
        }
        return;
    }
    for v in -k_max[depth]..=k_max[depth] {
        k[depth] = v;
        enumerate_rec(params, k_max, k, depth + 1, sum + v, out);
    }
    k[depth] = 0;
}

/// Two-sided martingale tail 2 exp(-T^2 / (2 N c^2)), clamped to [0, 2].
pub fn azuma_tail(t: f64, n: usize, c: f64) -> Result<f64> {
    if n < 1 {
        return Err(Error::Parameter("need at least one increment".into()));
    }
    if c <= 0.0 {
        return Err(Error::Parameter(format!(
            "increment bound must be positive, got {c}"
        )));
    }
    let e = 2.0 * (-(t * t) / (2.0 * n as f64 * c * c)).exp();
    Ok(e.clamp(0.0, 2.0))
}
