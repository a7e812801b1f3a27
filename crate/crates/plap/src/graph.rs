//! Multigraphs with explicit parallel edges and loops, vertex/edge functions,
//! and the weighted norms and quotients built on them.
//!
//! Conventions: a loop at u contributes 2 to val(u) and nothing to the total
//! derivative. Vertices are 0-indexed. Graphs are immutable after construction.

use crate::error::{Error, Result};

/// Signed power {x}^e = sign(x) |x|^e, with {0}^e = 0 for every e > 0.
///
/// Small integer exponents take a multiplication path; powf otherwise.
pub fn signed_pow(x: f64, e: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    let s = if x < 0.0 { -1.0 } else { 1.0 };
    let a = x.abs();
    let k = e.round();
    if (e - k).abs() < 1e-12 && (0.0..=32.0).contains(&k) {
        s * a.powi(k as i32)
    } else {
        s * a.powf(e)
    }
}

/// |x|^e with the same fast path as `signed_pow`.
pub fn abs_pow(x: f64, e: f64) -> f64 {
    let a = x.abs();
    if a == 0.0 {
        return 0.0;
    }
    let k = e.round();
    if (e - k).abs() < 1e-12 && (0.0..=32.0).contains(&k) {
        a.powi(k as i32)
    } else {
        a.powf(e)
    }
}

/// Real-valued function on the vertices of a graph.
#[derive(Debug, Clone, PartialEq)]
pub struct VertexFunction(pub Vec<f64>);

impl VertexFunction {
    pub fn zeros(m: usize) -> Self {
        VertexFunction(vec![0.0; m])
    }
    pub fn len(&self) -> usize {
        self.0.len()
    }
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0_f64, |a, &v| a.max(v.abs()))
    }
}

impl std::ops::Deref for VertexFunction {
    type Target = [f64];
    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl std::ops::DerefMut for VertexFunction {
    fn deref_mut(&mut self) -> &mut [f64] {
        &mut self.0
    }
}

impl From<Vec<f64>> for VertexFunction {
    fn from(v: Vec<f64>) -> Self {
        VertexFunction(v)
    }
}

/// Real-valued function on the (oriented) edges of a graph.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeFunction(pub Vec<f64>);

impl std::ops::Deref for EdgeFunction {
    type Target = [f64];
    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl From<Vec<f64>> for EdgeFunction {
    fn from(v: Vec<f64>) -> Self {
        EdgeFunction(v)
    }
}

/// Degree/valency sequence with cached extremes.
#[derive(Debug, Clone, PartialEq)]
pub struct DegreeSequence {
    d: Vec<usize>,
}

impl DegreeSequence {
    pub fn new(d: Vec<usize>) -> Self {
        DegreeSequence { d }
    }
    pub fn len(&self) -> usize {
        self.d.len()
    }
    pub fn is_empty(&self) -> bool {
        self.d.is_empty()
    }
    pub fn values(&self) -> &[usize] {
        &self.d
    }
    pub fn get(&self, u: usize) -> usize {
        self.d[u]
    }
    pub fn max(&self) -> usize {
        self.d.iter().copied().max().unwrap_or(0)
    }
    pub fn min(&self) -> usize {
        self.d.iter().copied().min().unwrap_or(0)
    }
    pub fn total(&self) -> usize {
        self.d.iter().sum()
    }
    /// Ratio d_max / d_min; infinite when some degree is zero.
    pub fn theta(&self) -> f64 {
        let mn = self.min();
        if mn == 0 {
            f64::INFINITY
        } else {
            self.max() as f64 / mn as f64
        }
    }
}

/// Finite multigraph: m vertices, a list of edges (e_minus, e_plus) that may
/// repeat and may be loops.
#[derive(Debug, Clone, PartialEq)]
pub struct Multigraph {
    m: usize,
    edges: Vec<(usize, usize)>,
    valency: Vec<usize>,
}

impl Multigraph {
    pub fn new(m: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        if m == 0 {
            return Err(Error::Parameter("vertex count must be positive".into()));
        }
        let mut valency = vec![0usize; m];
        for &(a, b) in &edges {
            if a >= m {
                return Err(Error::EndpointOutOfRange { vertex: a, m });
            }
            if b >= m {
                return Err(Error::EndpointOutOfRange { vertex: b, m });
            }
            valency[a] += 1;
            valency[b] += 1;
        }
        Ok(Multigraph { m, edges, valency })
    }

    pub fn vertex_count(&self) -> usize {
        self.m
    }
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }
    /// val(u): incidence count, loops contributing 2.
    pub fn valency(&self, u: usize) -> usize {
        self.valency[u]
    }
    pub fn valencies(&self) -> &[usize] {
        &self.valency
    }
    pub fn degree_sequence(&self) -> DegreeSequence {
        DegreeSequence::new(self.valency.clone())
    }
    pub fn loop_count(&self, u: usize) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == u && b == u).count()
    }

    pub fn first_isolated_vertex(&self) -> Option<usize> {
        self.valency.iter().position(|&v| v == 0)
    }

    /// Component label per vertex, labels dense from 0 in first-seen order.
    pub fn components(&self) -> Vec<usize> {
        let mut adj = vec![Vec::new(); self.m];
        for &(a, b) in &self.edges {
            if a != b {
                adj[a].push(b);
                adj[b].push(a);
            }
        }
        let mut label = vec![usize::MAX; self.m];
        let mut next = 0usize;
        let mut stack = Vec::new();
        for s in 0..self.m {
            if label[s] != usize::MAX {
                continue;
            }
            label[s] = next;
            stack.push(s);
            while let Some(u) = stack.pop() {
                for &v in &adj[u] {
                    if label[v] == usize::MAX {
                        label[v] = next;
                        stack.push(v);
                    }
                }
            }
            next += 1;
        }
        label
    }

    pub fn is_connected(&self) -> bool {
        self.components().iter().all(|&c| c == 0)
    }

    /// K_m.
    pub fn complete(m: usize) -> Result<Self> {
        let mut edges = Vec::new();
        for u in 0..m {
            for v in (u + 1)..m {
                edges.push((u, v));
            }
        }
        Multigraph::new(m, edges)
    }

    /// Complete multipartite K_{k x part}: k parts of `part` vertices each,
    /// parts laid out contiguously.
    pub fn complete_multipartite(k: usize, part: usize) -> Result<Self> {
        if k < 2 || part < 1 {
            return Err(Error::Parameter(
                "complete multipartite needs k >= 2 parts of size >= 1".into(),
            ));
        }
        let m = k * part;
        let mut edges = Vec::new();
        for u in 0..m {
            for v in (u + 1)..m {
                if u / part != v / part {
                    edges.push((u, v));
                }
            }
        }
        Multigraph::new(m, edges)
    }

    pub fn cycle(m: usize) -> Result<Self> {
        if m < 3 {
            return Err(Error::Parameter("cycle needs at least 3 vertices".into()));
        }
        let edges = (0..m).map(|u| (u, (u + 1) % m)).collect();
        Multigraph::new(m, edges)
    }

    pub fn path(m: usize) -> Result<Self> {
        if m < 2 {
            return Err(Error::Parameter("path needs at least 2 vertices".into()));
        }
        let edges = (0..m - 1).map(|u| (u, u + 1)).collect();
        Multigraph::new(m, edges)
    }

    pub fn star(leaves: usize) -> Result<Self> {
        let edges = (1..=leaves).map(|v| (0, v)).collect();
        Multigraph::new(leaves + 1, edges)
    }
}

/// (dx)(e) = x_{e_plus} - x_{e_minus}; loops give 0.
pub fn total_derivative(g: &Multigraph, x: &VertexFunction) -> Result<EdgeFunction> {
    if x.len() != g.vertex_count() {
        return Err(Error::Dimension {
            expected: g.vertex_count(),
            got: x.len(),
        });
    }
    Ok(EdgeFunction(
        g.edges().iter().map(|&(a, b)| x[b] - x[a]).collect(),
    ))
}

/// ||x||_{p,d}^p = sum_u |x_u|^p d_u  (the p-th power, not its root).
pub fn weighted_p_norm(x: &VertexFunction, d: &DegreeSequence, p: f64) -> Result<f64> {
    if x.len() != d.len() {
        return Err(Error::Dimension {
            expected: d.len(),
            got: x.len(),
        });
    }
    if p < 1.0 {
        return Err(Error::Parameter(format!("p must be >= 1, got {p}")));
    }
    Ok(x.iter()
        .zip(d.values())
        .map(|(&v, &w)| abs_pow(v, p) * w as f64)
        .sum())
}

/// ||dx||_p^p = sum_e |x_{e+} - x_{e-}|^p.
pub fn dirichlet_energy(g: &Multigraph, x: &VertexFunction, p: f64) -> Result<f64> {
    if x.len() != g.vertex_count() {
        return Err(Error::Dimension {
            expected: g.vertex_count(),
            got: x.len(),
        });
    }
    Ok(g.edges()
        .iter()
        .map(|&(a, b)| abs_pow(x[b] - x[a], p))
        .sum())
}

pub(crate) fn center_tolerance(x: &VertexFunction) -> f64 {
    1e-12 * (x.max_abs() + 1.0)
}

/// Shift x by the constant c solving sum_u {x_u - c}^{p-1} val(u) = 0.
///
/// The map c -> sum is strictly decreasing, so bisection on [min x, max x]
/// brackets the unique root; the p = 2 root is the d-weighted mean and is
/// taken in closed form. Returns (x - c, c).
pub fn center_to_zero_p_mean(
    x: &VertexFunction,
    d: &DegreeSequence,
    p: f64,
) -> Result<(VertexFunction, f64)> {
    center_with_tol(x, d, p, center_tolerance(x))
}

pub(crate) fn center_with_tol(
    x: &VertexFunction,
    d: &DegreeSequence,
    p: f64,
    tol: f64,
) -> Result<(VertexFunction, f64)> {
    if x.len() != d.len() {
        return Err(Error::Dimension {
            expected: d.len(),
            got: x.len(),
        });
    }
    if p <= 1.0 {
        return Err(Error::Parameter(format!("p must be > 1, got {p}")));
    }
    let c = if (p - 2.0).abs() < 1e-15 {
        let wsum: f64 = d.values().iter().map(|&w| w as f64).sum();
        if wsum == 0.0 {
            0.0
        } else {
            x.iter()
                .zip(d.values())
                .map(|(&v, &w)| v * w as f64)
                .sum::<f64>()
                / wsum
        }
    } else {
        let pm1 = p - 1.0;
        let h = |c: f64| -> f64 {
            x.iter()
                .zip(d.values())
                .map(|(&v, &w)| signed_pow(v - c, pm1) * w as f64)
                .sum()
        };
        let mut lo = x.iter().cloned().fold(f64::INFINITY, f64::min);
        let mut hi = x.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        if !lo.is_finite() || !hi.is_finite() {
            return Err(Error::Degenerate("empty or non-finite input".into()));
        }
        for _ in 0..200 {
            if hi - lo <= tol {
                break;
            }
            let mid = 0.5 * (lo + hi);
            if h(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    };
    let shifted = VertexFunction(x.iter().map(|&v| v - c).collect());
    Ok((shifted, c))
}

/// Scale x onto the sphere ||x||_{p,d}^p = 1. Errors on the zero function.
pub fn normalize_to_sphere(
    x: &VertexFunction,
    d: &DegreeSequence,
    p: f64,
) -> Result<VertexFunction> {
    let n = weighted_p_norm(x, d, p)?;
    if n <= 0.0 {
        return Err(Error::Degenerate(
            "cannot normalize a function with zero weighted norm".into(),
        ));
    }
    let s = n.powf(1.0 / p);
    Ok(VertexFunction(x.iter().map(|&v| v / s).collect()))
}

/// Rayleigh quotient ||dx||_p^p / inf_c sum_u |x_u - c|^p val(u).
pub fn rayleigh_quotient(g: &Multigraph, x: &VertexFunction, p: f64) -> Result<f64> {
    let num = dirichlet_energy(g, x, p)?;
    let d = g.degree_sequence();
    let (centered, _) = center_to_zero_p_mean(x, &d, p)?;
    let den = weighted_p_norm(&centered, &d, p)?;
    let scale = x.max_abs().max(1.0);
    if den <= 1e-14 * abs_pow(scale, p) * d.total().max(1) as f64 {
        return Err(Error::Degenerate(
            "denominator vanishes: x is constant where it matters".into(),
        ));
    }
    Ok(num / den)
}

/// Parse the plain text graph format: optional '#' comments, a header line
/// `m <count>`, then one `u v` pair per line (0-indexed).
pub fn parse_graph(text: &str) -> Result<Multigraph> {
    let mut m: Option<usize> = None;
    let mut edges = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        if m.is_none() {
            if toks.len() != 2 || toks[0] != "m" {
                return Err(Error::Parse {
                    line: idx + 1,
                    msg: "expected header `m <count>`".into(),
                });
            }
            m = Some(toks[1].parse().map_err(|_| Error::Parse {
                line: idx + 1,
                msg: "vertex count is not an integer".into(),
            })?);
        } else {
            if toks.len() != 2 {
                return Err(Error::Parse {
                    line: idx + 1,
                    msg: "expected `u v`".into(),
                });
            }
            let a = toks[0].parse().map_err(|_| Error::Parse {
                line: idx + 1,
                msg: "endpoint is not an integer".into(),
            })?;
            let b = toks[1].parse().map_err(|_| Error::Parse {
                line: idx + 1,
                msg: "endpoint is not an integer".into(),
            })?;
            edges.push((a, b));
        }
    }
    match m {
        Some(m) => Multigraph::new(m, edges),
        None => Err(Error::Parse {
            line: 0,
            msg: "missing header".into(),
        }),
    }
}

pub fn render_graph(g: &Multigraph) -> String {
    let mut out = format!("m {}\n", g.vertex_count());
    for &(a, b) in g.edges() {
        out.push_str(&format!("{a} {b}\n"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vf(v: &[f64]) -> VertexFunction {
        VertexFunction(v.to_vec())
    }

    #[test]
    fn valency_counts_loops_twice() {
        let g = Multigraph::new(3, vec![(0, 1), (1, 1), (1, 2)]).unwrap();
        assert_eq!(g.valencies(), &[1, 4, 1]);
        assert_eq!(g.loop_count(1), 1);
    }

    #[test]
    fn endpoint_validation() {
        assert!(Multigraph::new(2, vec![(0, 2)]).is_err());
        assert!(Multigraph::new(0, vec![]).is_err());
    }

    #[test]
    fn derivative_on_triangle() {
        let g = Multigraph::new(3, vec![(0, 1), (1, 2), (2, 0)]).unwrap();
        let dx = total_derivative(&g, &vf(&[1.0, 0.0, -1.0])).unwrap();
        assert_eq!(&*dx, &[-1.0, -1.0, 2.0]);
    }

    #[test]
    fn derivative_ignores_loops() {
        let g = Multigraph::new(2, vec![(0, 0), (0, 1)]).unwrap();
        let dx = total_derivative(&g, &vf(&[3.0, 5.0])).unwrap();
        assert_eq!(&*dx, &[0.0, 2.0]);
    }

    #[test]
    fn weighted_norm_p3() {
        let d = DegreeSequence::new(vec![2, 1]);
        let n = weighted_p_norm(&vf(&[-2.0, 1.0]), &d, 3.0).unwrap();
        assert!((n - 17.0).abs() < 1e-12);
    }

    #[test]
    fn signed_pow_basics() {
        assert_eq!(signed_pow(0.0, 3.0), 0.0);
        assert!((signed_pow(-2.0, 2.0) + 4.0).abs() < 1e-15);
        assert!((signed_pow(-2.0, 1.5) + 2.0_f64.powf(1.5)).abs() < 1e-12);
        assert!((signed_pow(3.0, 1.0) - 3.0).abs() < 1e-15);
    }

    #[test]
    fn center_p2_is_weighted_mean() {
        let d = DegreeSequence::new(vec![1, 3]);
        let (y, c) = center_to_zero_p_mean(&vf(&[4.0, 0.0]), &d, 2.0).unwrap();
        assert!((c - 1.0).abs() < 1e-12);
        assert!((y[0] - 3.0).abs() < 1e-12 && (y[1] + 1.0).abs() < 1e-12);
    }

    #[test]
    fn center_p3_known_root() {
        // Solve {2-c}^2 = 2{c}^2 on degrees (1,1,1): c = 2(sqrt2 - 1).
        let d = DegreeSequence::new(vec![1, 1, 1]);
        let (_, c) = center_to_zero_p_mean(&vf(&[2.0, 0.0, 0.0]), &d, 3.0).unwrap();
        let expect = 2.0 * (2.0_f64.sqrt() - 1.0);
        assert!((c - expect).abs() < 1e-9, "c = {c}, expected {expect}");
    }

    #[test]
    fn center_p3_matches_direct_minimization() {
        // The zero-p-mean shift is the argmin of c -> sum |x-c|^p d; check
        // against a fine scan plus local refinement.
        let d = DegreeSequence::new(vec![2, 1, 1, 3]);
        let x = vf(&[0.3, -1.2, 2.0, 0.7]);
        let p = 3.0;
        let obj = |c: f64| -> f64 {
            x.iter()
                .zip(d.values())
                .map(|(&v, &w)| abs_pow(v - c, p) * w as f64)
                .sum()
        };
        let mut best_c = -2.0;
        let mut best = f64::INFINITY;
        let mut c = -2.0;
        while c <= 2.5 {
            let v = obj(c);
            if v < best {
                best = v;
                best_c = c;
            }
            c += 1e-4;
        }
        let (_, croot) = center_to_zero_p_mean(&x, &d, p).unwrap();
        assert!(
            (croot - best_c).abs() < 1e-3,
            "bisection {croot} vs scan {best_c}"
        );
        assert!(obj(croot) <= best + 1e-9);
    }

    #[test]
    fn center_constant_returns_zero() {
        let d = DegreeSequence::new(vec![1, 1]);
        let (y, c) = center_to_zero_p_mean(&vf(&[5.0, 5.0]), &d, 4.0).unwrap();
        assert!((c - 5.0).abs() < 1e-9);
        assert!(y.max_abs() < 1e-9);
    }

    #[test]
    fn normalize_unit_norm() {
        let d = DegreeSequence::new(vec![2, 2]);
        let y = normalize_to_sphere(&vf(&[1.0, -1.0]), &d, 3.0).unwrap();
        let n = weighted_p_norm(&y, &d, 3.0).unwrap();
        assert!((n - 1.0).abs() < 1e-12);
        assert!(normalize_to_sphere(&vf(&[0.0, 0.0]), &d, 3.0).is_err());
    }

    #[test]
    fn rayleigh_on_c4_eigenfunction() {
        let g = Multigraph::cycle(4).unwrap();
        let r = rayleigh_quotient(&g, &vf(&[1.0, 0.0, -1.0, 0.0]), 2.0).unwrap();
        assert!((r - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rayleigh_rejects_constants() {
        let g = Multigraph::complete(3).unwrap();
        assert!(rayleigh_quotient(&g, &vf(&[2.0, 2.0, 2.0]), 2.0).is_err());
    }

    #[test]
    fn components_and_connectivity() {
        let g = Multigraph::new(4, vec![(0, 1), (2, 3)]).unwrap();
        assert_eq!(g.components(), vec![0, 0, 1, 1]);
        assert!(!g.is_connected());
        assert!(Multigraph::complete(4).unwrap().is_connected());
        // Isolated vertex forms its own component.
        let h = Multigraph::new(3, vec![(0, 1)]).unwrap();
        assert_eq!(h.first_isolated_vertex(), Some(2));
        assert!(!h.is_connected());
    }

    #[test]
    fn graph_format_round_trip() {
        let g = Multigraph::new(3, vec![(0, 1), (1, 1), (2, 0)]).unwrap();
        let text = render_graph(&g);
        let h = parse_graph(&text).unwrap();
        assert_eq!(g, h);
    }

    #[test]
    fn graph_format_comments_and_errors() {
        let g = parse_graph("# header comment\nm 2 # two vertices\n0 1\n").unwrap();
        assert_eq!(g.vertex_count(), 2);
        assert!(parse_graph("0 1\n").is_err());
        assert!(parse_graph("m 2\n0\n").is_err());
        assert!(parse_graph("m 2\n0 5\n").is_err());
    }

    #[test]
    fn constructors_shapes() {
        let k5 = Multigraph::complete(5).unwrap();
        assert_eq!(k5.edge_count(), 10);
        assert!(k5.valencies().iter().all(|&v| v == 4));
        let k23 = Multigraph::complete_multipartite(2, 3).unwrap();
        assert_eq!(k23.edge_count(), 9);
        assert!(k23.valencies().iter().all(|&v| v == 3));
        let s4 = Multigraph::star(4).unwrap();
        assert_eq!(s4.valency(0), 4);
    }
}
