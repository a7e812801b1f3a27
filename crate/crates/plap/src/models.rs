//! Random graph samplers and the structural checks that go with them:
//! binomial graphs, the configuration model over half-edges, multipartite
//! variants with prescribed cross-degrees, degree concentration, and the
//! controlled edge density test.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::{DegreeSequence, Multigraph};
use crate::rng::RngSeed;

/// Half-edge structure behind a configuration-model sample.
///
/// `points` lists every half-edge as a (vertex, slot) pair; `pairing` is a
/// perfect matching given as index pairs into `points`.
#[derive(Debug, Clone)]
pub struct HalfEdgeMatching {
    pub points: Vec<(usize, usize)>,
    pub pairing: Vec<(usize, usize)>,
}

impl HalfEdgeMatching {
    /// True when the pairing covers every point exactly once with no point
    /// matched to itself.
    pub fn is_perfect(&self) -> bool {
        let n = self.points.len();
        let mut seen = vec![false; n];
        for &(i, j) in &self.pairing {
            if i == j || i >= n || j >= n || seen[i] || seen[j] {
                return false;
            }
            seen[i] = true;
            seen[j] = true;
        }
        seen.iter().all(|&s| s)
    }
}

/// Simple binomial graph: each unordered pair joined independently with
/// probability `rho`.
pub fn sample_er(m: usize, rho: f64, seed: &RngSeed) -> Result<Multigraph> {
    if !(0.0..=1.0).contains(&rho) {
        return Err(Error::Parameter(format!(
            "edge probability must lie in [0,1], got {rho}"
        )));
    }
    let mut rng = seed.rng();
    let mut edges = Vec::new();
    for u in 0..m {
        for v in (u + 1)..m {
            if rng.gen::<f64>() < rho {
                edges.push((u, v));
            }
        }
    }
    Multigraph::new(m, edges)
}

/// Configuration model: a uniform perfect matching of labeled half-edges,
/// projected to a multigraph. Loops and parallel edges survive projection,
/// so the valency of u in the output equals d_u exactly.
pub fn sample_configuration(
    d: &DegreeSequence,
    seed: &RngSeed,
) -> Result<(HalfEdgeMatching, Multigraph)> {
    let total = d.total();
    if total % 2 != 0 {
        return Err(Error::Parameter(format!(
            "degree sum must be even, got {total}"
        )));
    }
    let mut points = Vec::with_capacity(total);
    for (u, &du) in d.values().iter().enumerate() {
        for s in 0..du {
            points.push((u, s));
        }
    }
    // A uniform permutation paired off consecutively induces the uniform
    // distribution on perfect matchings.
    let mut order: Vec<usize> = (0..total).collect();
    let mut rng = seed.rng();
    order.shuffle(&mut rng);
    let mut pairing = Vec::with_capacity(total / 2);
    let mut edges = Vec::with_capacity(total / 2);
    for t in 0..total / 2 {
        let (i, j) = (order[2 * t], order[2 * t + 1]);
        pairing.push((i, j));
        edges.push((points[i].0, points[j].0));
    }
    let g = Multigraph::new(d.len(), edges)?;
    Ok((HalfEdgeMatching { points, pairing }, g))
}

/// Binomial multipartite graph: `k` parts of `part_size` vertices each;
/// cross-part pairs joined independently with probability `rho`, within-part
/// pairs never.
pub fn sample_multipartite_er(
    k: usize,
    part_size: usize,
    rho: f64,
    seed: &RngSeed,
) -> Result<Multigraph> {
    if k < 2 || part_size < 1 {
        return Err(Error::Parameter(format!(
            "need at least 2 parts of at least 1 vertex, got k={k}, part size {part_size}"
        )));
    }
    if !(0.0..=1.0).contains(&rho) {
        return Err(Error::Parameter(format!(
            "edge probability must lie in [0,1], got {rho}"
        )));
    }
    let m = k * part_size;
    let mut rng = seed.rng();
    let mut edges = Vec::new();
    for u in 0..m {
        for v in (u + 1)..m {
            if u / part_size != v / part_size && rng.gen::<f64>() < rho {
                edges.push((u, v));
            }
        }
    }
    Multigraph::new(m, edges)
}

/// Per-vertex per-part degree table for the multipartite matching model.
/// Vertex u belongs to part u / part_size; entry (u, j) prescribes how many
/// half-edges u points at part j.
#[derive(Debug, Clone)]
pub struct DegreeMatrix {
    k: usize,
    part_size: usize,
    rows: Vec<Vec<usize>>,
}

impl DegreeMatrix {
    /// Validates shape, the zero diagonal blocks, and admissibility: for
    /// every part pair the two half-edge collections pointing at each other
    /// must have equal size.
    pub fn new(k: usize, part_size: usize, rows: Vec<Vec<usize>>) -> Result<Self> {
        if k < 2 || part_size < 1 {
            return Err(Error::Parameter(format!(
                "need at least 2 parts of at least 1 vertex, got k={k}, part size {part_size}"
            )));
        }
        let m = k * part_size;
        if rows.len() != m {
            return Err(Error::Dimension {
                expected: m,
                got: rows.len(),
            });
        }
        for (u, row) in rows.iter().enumerate() {
            if row.len() != k {
                return Err(Error::Dimension {
                    expected: k,
                    got: row.len(),
                });
            }
            if row[u / part_size] != 0 {
                return Err(Error::Inadmissible(format!(
                    "vertex {u} prescribes edges into its own part"
                )));
            }
        }
        let dm = DegreeMatrix { k, part_size, rows };
        for i in 0..k {
            for j in (i + 1)..k {
                let a = dm.cross_total(i, j);
                let b = dm.cross_total(j, i);
                if a != b {
                    return Err(Error::Inadmissible(format!(
                        "parts {i} and {j} prescribe {a} vs {b} half-edges"
                    )));
                }
            }
        }
        Ok(dm)
    }

    /// Constant table: every vertex points `cross` half-edges at every other
    /// part. Always admissible.
    pub fn uniform_cross(k: usize, part_size: usize, cross: usize) -> Result<Self> {
        let rows = (0..k * part_size)
            .map(|u| {
                (0..k)
                    .map(|j| if j == u / part_size { 0 } else { cross })
                    .collect()
            })
            .collect();
        DegreeMatrix::new(k, part_size, rows)
    }

    pub fn parts(&self) -> usize {
        self.k
    }

    pub fn part_size(&self) -> usize {
        self.part_size
    }

    pub fn vertex_count(&self) -> usize {
        self.k * self.part_size
    }

    pub fn part_of(&self, u: usize) -> usize {
        u / self.part_size
    }

    pub fn degree(&self, u: usize, j: usize) -> usize {
        self.rows[u][j]
    }

    /// Total half-edges part i points at part j.
    pub fn cross_total(&self, i: usize, j: usize) -> usize {
        (i * self.part_size..(i + 1) * self.part_size)
            .map(|u| self.rows[u][j])
            .sum()
    }
}

/// Multipartite matching model: for each part pair, the two equal-size
/// half-edge collections are joined by a uniform matching. The output can
/// carry parallel edges but never loops or within-part edges.
pub fn sample_multipartite_matching(dm: &DegreeMatrix, seed: &RngSeed) -> Result<Multigraph> {
    let mut rng = seed.rng();
    let mut edges = Vec::new();
    for i in 0..dm.parts() {
        for j in (i + 1)..dm.parts() {
            let mut left = Vec::new();
            for u in i * dm.part_size()..(i + 1) * dm.part_size() {
                left.extend(std::iter::repeat(u).take(dm.degree(u, j)));
            }
            let mut right = Vec::new();
            for v in j * dm.part_size()..(j + 1) * dm.part_size() {
                right.extend(std::iter::repeat(v).take(dm.degree(v, i)));
            }
            // Shuffling one side of a balanced bipartite half-edge list and
            // pairing positionally is a uniform matching.
            right.shuffle(&mut rng);
            edges.extend(left.into_iter().zip(right));
        }
    }
    Multigraph::new(dm.vertex_count(), edges)
}

/// Result of a uniform degree window test.
#[derive(Debug, Clone)]
pub struct ConcentrationReport {
    pub ok: bool,
    pub worst_vertex: usize,
    pub max_relative_deviation: f64,
}

/// Checks that every valency lies within a relative `delta` of `expected`
/// and reports the vertex that strays farthest.
pub fn degree_concentration_check(
    g: &Multigraph,
    expected: f64,
    delta: f64,
) -> Result<ConcentrationReport> {
    if expected <= 0.0 {
        return Err(Error::Parameter(format!(
            "expected degree must be positive, got {expected}"
        )));
    }
    let mut worst_vertex = 0usize;
    let mut worst = -1.0f64;
    for u in 0..g.vertex_count() {
        let dev = (g.valency(u) as f64 - expected).abs() / expected;
        if dev > worst {
            worst = dev;
            worst_vertex = u;
        }
    }
    Ok(ConcentrationReport {
        ok: worst <= delta,
        worst_vertex,
        max_relative_deviation: worst.max(0.0),
    })
}

/// How the edge density test explores subset pairs.
#[derive(Debug, Clone, Copy)]
pub enum DensityMode {
    /// Every pair of nonempty vertex subsets; the vertex count is capped.
    Exact,
    /// The given number of random pairs with log-uniform sizes.
    Sampled(usize),
}

/// The subset pair a density verdict is anchored to.
#[derive(Debug, Clone)]
pub struct DensityWitness {
    pub a: Vec<usize>,
    pub b: Vec<usize>,
    pub edge_count: u64,
    pub mu: f64,
}

#[derive(Debug, Clone)]
pub struct DensityReport {
    pub controlled: bool,
    pub pairs_checked: u64,
    /// A violating pair when one exists, otherwise the pair that comes
    /// closest to violating (largest edge count relative to its mean).
    pub witness: DensityWitness,
}

/// Number of edges with one endpoint in `a` and the other in `b`, counted
/// with multiplicity; a loop at u counts exactly when u lies in both sets.
pub fn edge_count_between(g: &Multigraph, a: &[usize], b: &[usize]) -> u64 {
    let m = g.vertex_count();
    let mut in_a = vec![false; m];
    let mut in_b = vec![false; m];
    for &u in a {
        in_a[u] = true;
    }
    for &v in b {
        in_b[v] = true;
    }
    g.edges()
        .iter()
        .filter(|&&(u, v)| (in_a[u] && in_b[v]) || (in_a[v] && in_b[u]))
        .count() as u64
}

const DENSITY_EXACT_CAP: usize = 14;

/// Tests the two-sided edge density property: for every subset pair (A, B),
/// either the edge count stays below C times its mean mu = theta |A||B| d/m,
/// or the entropy-type alternative holds. Exact mode enumerates all pairs
/// via a subset DP; sampled mode spot-checks random pairs.
pub fn edge_density_check(
    g: &Multigraph,
    theta: f64,
    c: f64,
    mode: DensityMode,
    seed: &RngSeed,
) -> Result<DensityReport> {
    if theta < 1.0 {
        return Err(Error::Parameter(format!("theta must be >= 1, got {theta}")));
    }
    if c < std::f64::consts::E {
        return Err(Error::Parameter(format!("constant must be >= e, got {c}")));
    }
    match mode {
        DensityMode::Exact => {
            let m = g.vertex_count();
            if m > DENSITY_EXACT_CAP {
                return Err(Error::TooLarge {
                    got: m,
                    cap: DENSITY_EXACT_CAP,
                });
            }
            Ok(density_exact(g, theta, c))
        }
        DensityMode::Sampled(n) => Ok(density_sampled(g, theta, c, n, seed)),
    }
}

/// Per-pair verdict plus a severity used to pick the worst witness.
/// Severity of a violating pair always exceeds that of a conforming one.
fn density_judge(
    e: u64,
    mu: f64,
    size_a: usize,
    size_b: usize,
    m: usize,
    c: f64,
) -> (bool, f64) {
    if e == 0 {
        return (false, 0.0);
    }
    if mu <= 0.0 {
        // Positive edge count with zero mean cannot be controlled.
        return (true, f64::INFINITY);
    }
    let ef = e as f64;
    let ratio = ef / mu;
    if ef <= c * mu {
        return (false, ratio);
    }
    let s = size_a.max(size_b) as f64;
    let entropy_ok = ef * ratio.ln() <= c * s * (m as f64 / s).ln();
    (!entropy_ok, ratio)
}

/// Edge counts within every vertex subset, indexed by bitmask. Entry for S
/// counts edges with both endpoints in S; a loop at u needs only u in S.
fn subset_within_table(g: &Multigraph) -> Vec<u64> {
    let m = g.vertex_count();
    let mut loops = vec![0u64; m];
    let mut neigh: Vec<Vec<usize>> = vec![Vec::new(); m];
    for &(u, v) in g.edges() {
        if u == v {
            loops[u] += 1;
        } else {
            neigh[u].push(v);
            neigh[v].push(u);
        }
    }
    let mut within = vec![0u64; 1usize << m];
    for mask in 1u32..(1u32 << m) {
        let u = mask.trailing_zeros() as usize;
        let rest = (mask & (mask - 1)) as usize;
        // Peeling the lowest vertex counts each of its in-mask edges once;
        // the recursion on the remainder never sees u again, so the double
        // storage in neigh cannot double count.
        let mut cnt = loops[u];
        for &v in &neigh[u] {
            if (mask >> v) & 1 == 1 {
                cnt += 1;
            }
        }
        within[mask as usize] = within[rest] + cnt;
    }
    within
}

fn mask_to_vec(mask: u32) -> Vec<usize> {
    (0..32).filter(|&i| (mask >> i) & 1 == 1).collect()
}

fn density_exact(g: &Multigraph, theta: f64, c: f64) -> DensityReport {
    let m = g.vertex_count();
    let d_max = g.degree_sequence().max() as f64;
    let within = subset_within_table(g);
    let full = (1u32 << m) - 1;
    let mut violated = false;
    let mut best_sev = -1.0f64;
    let mut best = (1u32, 1u32, 0u64, 0.0f64);
    let mut pairs = 0u64;
    for a in 1u32..=full {
        let sa = a.count_ones() as usize;
        for b in 1u32..=full {
            let sb = b.count_ones() as usize;
            let e = within[(a | b) as usize] - within[(a & !b) as usize]
                - within[(b & !a) as usize];
            let mu = theta * (sa * sb) as f64 * d_max / m as f64;
            let (bad, sev) = density_judge(e, mu, sa, sb, m, c);
            if bad && !violated {
                // First violation resets the ranking so conforming pairs
                // can no longer win the witness slot.
                violated = true;
                best_sev = -1.0;
            }
            if bad == violated && sev > best_sev {
                best_sev = sev;
                best = (a, b, e, mu);
            }
            pairs += 1;
        }
    }
    DensityReport {
        controlled: !violated,
        pairs_checked: pairs,
        witness: DensityWitness {
            a: mask_to_vec(best.0),
            b: mask_to_vec(best.1),
            edge_count: best.2,
            mu: best.3,
        },
    }
}

fn log_uniform_size<R: Rng>(rng: &mut R, hi: usize) -> usize {
    if hi <= 1 {
        return 1;
    }
    let x = rng.gen_range(0.0..((hi as f64 + 1.0).ln()));
    (x.exp().floor() as usize).clamp(1, hi)
}

fn density_sampled(g: &Multigraph, theta: f64, c: f64, n: usize, seed: &RngSeed) -> DensityReport {
    let m = g.vertex_count();
    let d_max = g.degree_sequence().max() as f64;
    let hi = (m / 2).max(1);
    let mut rng = seed.rng();
    let mut violated = false;
    let mut best_sev = -1.0f64;
    let mut best: (Vec<usize>, Vec<usize>, u64, f64) = (vec![0], vec![0], 0, 0.0);
    for _ in 0..n {
        let sa = log_uniform_size(&mut rng, hi);
        let sb = log_uniform_size(&mut rng, hi);
        let a = rand::seq::index::sample(&mut rng, m, sa).into_vec();
        let b = rand::seq::index::sample(&mut rng, m, sb).into_vec();
        let e = edge_count_between(g, &a, &b);
        let mu = theta * (sa * sb) as f64 * d_max / m as f64;
        let (bad, sev) = density_judge(e, mu, sa, sb, m, c);
        if bad && !violated {
            violated = true;
            best_sev = -1.0;
        }
        if bad == violated && sev > best_sev {
            best_sev = sev;
            best = (a, b, e, mu);
        }
    }
    let (mut a, mut b) = (best.0, best.1);
    a.sort_unstable();
    b.sort_unstable();
    DensityReport {
        controlled: !violated,
        pairs_checked: n as u64,
        witness: DensityWitness {
            a,
            b,
            edge_count: best.2,
            mu: best.3,
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn is_simple(g: &Multigraph) -> bool {
        let mut seen = std::collections::HashSet::new();
        for &(u, v) in g.edges() {
            if u == v || !seen.insert((u.min(v), u.max(v))) {
                return false;
            }
        }
        true
    }

    #[test]
    fn er_rho_extremes() {
        let s = RngSeed::new(1);
        let g0 = sample_er(7, 0.0, &s).unwrap();
        assert_eq!(g0.edge_count(), 0);
        let g1 = sample_er(7, 1.0, &s).unwrap();
        assert_eq!(g1.edge_count(), 21);
        assert!(is_simple(&g1));
    }

    #[test]
    fn er_edge_count_concentrates() {
        // Binomial(4950, 0.1): mean 495, four standard deviations is 84.
        let g = sample_er(100, 0.1, &RngSeed::new(11)).unwrap();
        assert!(is_simple(&g));
        let count = g.edge_count() as f64;
        assert!((count - 495.0).abs() <= 85.0, "edge count {count}");
    }

    #[test]
    fn er_rejects_bad_rho() {
        assert!(sample_er(5, -0.1, &RngSeed::new(0)).is_err());
        assert!(sample_er(5, 1.5, &RngSeed::new(0)).is_err());
    }

    #[test]
    fn er_reproducible() {
        let a = sample_er(40, 0.3, &RngSeed::new(9).with_stream(2)).unwrap();
        let b = sample_er(40, 0.3, &RngSeed::new(9).with_stream(2)).unwrap();
        assert_eq!(a.edges(), b.edges());
        let c = sample_er(40, 0.3, &RngSeed::new(9).with_stream(3)).unwrap();
        assert_ne!(a.edges(), c.edges());
    }

    #[test]
    fn config_forced_single_edge() {
        let d = DegreeSequence::new(vec![1, 1]);
        for s in 0..20 {
            let (f, g) = sample_configuration(&d, &RngSeed::new(s)).unwrap();
            assert!(f.is_perfect());
            assert_eq!(g.edge_count(), 1);
            let (u, v) = g.edges()[0];
            assert_eq!((u.min(v), u.max(v)), (0, 1));
        }
    }

    #[test]
    fn config_double_edge_vs_loop_ratio() {
        // Degrees (2,2) admit three matchings of the four points: two give a
        // doubled edge, one gives a loop at each vertex.
        let d = DegreeSequence::new(vec![2, 2]);
        let trials = 3000u64;
        let mut doubled = 0u64;
        for t in 0..trials {
            let (_, g) = sample_configuration(&d, &RngSeed::new(77).with_stream(t)).unwrap();
            let loops = g.loop_count(0) + g.loop_count(1);
            if loops == 0 {
                doubled += 1;
            } else {
                assert_eq!(loops, 2);
            }
        }
        let frac = doubled as f64 / trials as f64;
        assert!((0.62..=0.71).contains(&frac), "doubled fraction {frac}");
    }

    #[test]
    fn config_preserves_degrees() {
        let d = DegreeSequence::new(vec![3, 2, 2, 1]);
        let (f, g) = sample_configuration(&d, &RngSeed::new(5)).unwrap();
        assert!(f.is_perfect());
        assert_eq!(g.valencies(), d.values());
    }

    #[test]
    fn config_rejects_odd_sum() {
        let d = DegreeSequence::new(vec![1, 1, 1]);
        assert!(sample_configuration(&d, &RngSeed::new(0)).is_err());
    }

    #[test]
    fn config_simple_fraction_cubic() {
        // For degrees (3,3,3,3) the simple projections are exactly the
        // (3!)^4 = 1296 matchings realizing the complete graph, out of
        // 11!! = 10395 total, so the simple fraction is about 0.1247.
        let d = DegreeSequence::new(vec![3, 3, 3, 3]);
        let trials = 100_000u64;
        let mut simple = 0u64;
        for t in 0..trials {
            let (_, g) = sample_configuration(&d, &RngSeed::new(13).with_stream(t)).unwrap();
            if is_simple(&g) {
                simple += 1;
            }
        }
        let frac = simple as f64 / trials as f64;
        assert!(frac >= (-9.0f64).exp() * 0.9);
        assert!((0.115..=0.135).contains(&frac), "simple fraction {frac}");
    }

    #[test]
    fn multipartite_er_structure() {
        let g = sample_multipartite_er(3, 2, 1.0, &RngSeed::new(0)).unwrap();
        assert_eq!(g.edge_count(), 12);
        let g = sample_multipartite_er(2, 50, 0.2, &RngSeed::new(21)).unwrap();
        assert!(is_simple(&g));
        for &(u, v) in g.edges() {
            assert_ne!(u / 50, v / 50);
        }
        let count = g.edge_count() as f64;
        // Binomial(2500, 0.2): mean 500, four standard deviations is 80.
        assert!((count - 500.0).abs() <= 81.0, "edge count {count}");
    }

    #[test]
    fn multipartite_matching_forced_edge() {
        let dm = DegreeMatrix::uniform_cross(2, 1, 1).unwrap();
        for s in 0..10 {
            let g = sample_multipartite_matching(&dm, &RngSeed::new(s)).unwrap();
            assert_eq!(g.edges(), &[(0, 1)]);
        }
    }

    #[test]
    fn multipartite_matching_degrees() {
        let dm = DegreeMatrix::uniform_cross(2, 3, 3).unwrap();
        let g = sample_multipartite_matching(&dm, &RngSeed::new(4)).unwrap();
        assert!(g.valencies().iter().all(|&d| d == 3));
        for &(u, v) in g.edges() {
            assert_ne!(dm.part_of(u), dm.part_of(v));
            assert_ne!(u, v);
        }
        let dm = DegreeMatrix::uniform_cross(3, 2, 1).unwrap();
        let g = sample_multipartite_matching(&dm, &RngSeed::new(4)).unwrap();
        assert!(g.valencies().iter().all(|&d| d == 2));
    }

    #[test]
    fn degree_matrix_validation() {
        // Within-part prescription.
        let rows = vec![vec![1, 1], vec![0, 1], vec![1, 0], vec![1, 0]];
        assert!(DegreeMatrix::new(2, 2, rows).is_err());
        // Unbalanced cross totals: part 0 sends 3, part 1 sends 2.
        let rows = vec![vec![0, 1], vec![0, 2], vec![1, 0], vec![1, 0]];
        assert!(DegreeMatrix::new(2, 2, rows).is_err());
        // Ragged row.
        let rows = vec![vec![0, 1], vec![0, 1], vec![1], vec![1, 0]];
        assert!(DegreeMatrix::new(2, 2, rows).is_err());
        let rows = vec![vec![0, 2], vec![0, 1], vec![2, 0], vec![1, 0]];
        let dm = DegreeMatrix::new(2, 2, rows).unwrap();
        assert_eq!(dm.cross_total(0, 1), 3);
        assert_eq!(dm.cross_total(1, 0), 3);
    }

    #[test]
    fn concentration_extremes() {
        let k6 = Multigraph::complete(6).unwrap();
        let r = degree_concentration_check(&k6, 5.0, 0.0).unwrap();
        assert!(r.ok);
        assert_eq!(r.max_relative_deviation, 0.0);
        let empty = Multigraph::new(4, vec![]).unwrap();
        let r = degree_concentration_check(&empty, 1.0, 0.5).unwrap();
        assert!(!r.ok);
        assert_eq!(r.max_relative_deviation, 1.0);
        assert!(degree_concentration_check(&k6, 0.0, 0.1).is_err());
    }

    #[test]
    fn concentration_worst_vertex() {
        let p3 = Multigraph::path(3).unwrap();
        let r = degree_concentration_check(&p3, 2.0, 0.5).unwrap();
        assert!(r.ok);
        assert_eq!(r.worst_vertex, 0);
        assert!((r.max_relative_deviation - 0.5).abs() < 1e-15);
        let r = degree_concentration_check(&p3, 2.0, 0.49).unwrap();
        assert!(!r.ok);
    }

    #[test]
    fn within_table_matches_bruteforce() {
        let g = Multigraph::new(
            5,
            vec![(0, 1), (0, 1), (3, 3), (3, 3), (1, 2), (2, 4), (0, 4)],
        )
        .unwrap();
        let within = subset_within_table(&g);
        for mask in 0u32..32 {
            let verts = mask_to_vec(mask);
            let brute = edge_count_between(&g, &verts, &verts);
            // Between a set and itself every non-loop within edge matches
            // once and every loop once, so the counts agree.
            assert_eq!(within[mask as usize], brute, "mask {mask:b}");
        }
    }

    #[test]
    fn density_edgeless_controlled() {
        let g = Multigraph::new(5, vec![]).unwrap();
        let r = edge_density_check(&g, 1.0, std::f64::consts::E, DensityMode::Exact, &RngSeed::new(0))
            .unwrap();
        assert!(r.controlled);
    }

    #[test]
    fn density_complete_controlled() {
        let g = Multigraph::complete(6).unwrap();
        let r = edge_density_check(&g, 1.0, std::f64::consts::E, DensityMode::Exact, &RngSeed::new(0))
            .unwrap();
        assert!(r.controlled);
        assert_eq!(r.pairs_checked, 63 * 63);
    }

    #[test]
    fn density_star_numbers() {
        // Star with 9 leaves: center against all leaves has 9 edges and
        // mean 1 * 1 * 9 * 9 / 10 = 8.1, so e * 8.1 clears it by margin.
        let g = Multigraph::star(9).unwrap();
        let leaves: Vec<usize> = (1..10).collect();
        let e = edge_count_between(&g, &[0], &leaves);
        assert_eq!(e, 9);
        let mu: f64 = 1.0 * 1.0 * 9.0 * 9.0 / 10.0;
        assert!((mu - 8.1).abs() < 1e-12);
        assert!((e as f64) <= std::f64::consts::E * mu);
        let r = edge_density_check(&g, 1.0, std::f64::consts::E, DensityMode::Exact, &RngSeed::new(0))
            .unwrap();
        assert!(r.controlled);
    }

    #[test]
    fn density_exact_finds_violation() {
        // Fifty parallel edges between 0 and 1 against a sparse tail: the
        // pair ({0},{1}) has 50 edges, mean 51/12, and fails both clauses.
        let mut edges = vec![(0usize, 1usize); 50];
        edges.extend((1..11).map(|i| (i, i + 1)));
        let g = Multigraph::new(12, edges).unwrap();
        let r = edge_density_check(&g, 1.0, std::f64::consts::E, DensityMode::Exact, &RngSeed::new(0))
            .unwrap();
        assert!(!r.controlled);
        assert_eq!(r.witness.a, vec![0]);
        assert_eq!(r.witness.b, vec![1]);
        assert_eq!(r.witness.edge_count, 50);
        assert!((r.witness.mu - 51.0 / 12.0).abs() < 1e-12);
    }

    #[test]
    fn density_sampled_finds_violation() {
        let mut edges = vec![(0usize, 1usize); 50];
        edges.extend((1..11).map(|i| (i, i + 1)));
        let g = Multigraph::new(12, edges).unwrap();
        let r = edge_density_check(
            &g,
            1.0,
            std::f64::consts::E,
            DensityMode::Sampled(5000),
            &RngSeed::new(3),
        )
        .unwrap();
        assert!(!r.controlled);
        let r2 = edge_density_check(
            &g,
            1.0,
            std::f64::consts::E,
            DensityMode::Sampled(5000),
            &RngSeed::new(3),
        )
        .unwrap();
        assert_eq!(r.witness.a, r2.witness.a);
        assert_eq!(r.witness.b, r2.witness.b);
        assert_eq!(r.witness.edge_count, r2.witness.edge_count);
    }

    #[test]
    fn density_exact_cap_and_params() {
        let g = sample_er(15, 0.4, &RngSeed::new(2)).unwrap();
        assert!(matches!(
            edge_density_check(&g, 1.0, 3.0, DensityMode::Exact, &RngSeed::new(0)),
            Err(Error::TooLarge { .. })
        ));
        let k4 = Multigraph::complete(4).unwrap();
        assert!(edge_density_check(&k4, 0.5, 3.0, DensityMode::Exact, &RngSeed::new(0)).is_err());
        assert!(edge_density_check(&k4, 1.0, 2.0, DensityMode::Exact, &RngSeed::new(0)).is_err());
    }
}
