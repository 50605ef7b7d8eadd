//! Numerical unit-distance embeddings: damped least-squares search,
//! verification, polishing and infinitesimal rigidity.

mod linalg;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::Graph;

pub use linalg::rank as numerical_rank;

/// Coordinates for every vertex plus their edge and separation metrics.
#[derive(Clone, Debug, PartialEq)]
pub struct Embedding {
    graph: Graph,
    coords: Vec<[f64; 2]>,
    max_edge_deviation: f64,
    min_separation: f64,
}

impl Embedding {
    pub fn new(graph: &Graph, coords: Vec<[f64; 2]>) -> Result<Self, EmbedError> {
        if coords.len() != graph.n() {
            return Err(EmbedError::CoordCount { expected: graph.n(), got: coords.len() });
        }
        let (max_edge_deviation, min_separation) = metrics(graph, &coords);
        Ok(Embedding { graph: graph.clone(), coords, max_edge_deviation, min_separation })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn coords(&self) -> &[[f64; 2]] {
        &self.coords
    }

    pub fn max_edge_deviation(&self) -> f64 {
        self.max_edge_deviation
    }

    pub fn min_separation(&self) -> f64 {
        self.min_separation
    }

    /// Sum over edges of `(|p_u - p_v|^2 - 1)^2`.
    pub fn residual(&self) -> f64 {
        edge_residual(&self.graph, &self.coords)
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EmbedError {
    #[error("expected {expected} coordinates, got {got}")]
    CoordCount { expected: usize, got: usize },
    #[error("embedding not verified: max edge deviation {max_edge_deviation:e}, min separation {min_separation:e}")]
    Unverified { max_edge_deviation: f64, min_separation: f64 },
}

fn dist(a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

fn metrics(g: &Graph, coords: &[[f64; 2]]) -> (f64, f64) {
    let dev = g
        .edges()
        .iter()
        .map(|&(u, v)| (dist(coords[u], coords[v]) - 1.0).abs())
        .fold(0.0, f64::max);
    let mut sep = f64::INFINITY;
    for u in 0..coords.len() {
        for v in u + 1..coords.len() {
            sep = sep.min(dist(coords[u], coords[v]));
        }
    }
    (dev, sep)
}

fn edge_residual(g: &Graph, coords: &[[f64; 2]]) -> f64 {
    g.edges()
        .iter()
        .map(|&(u, v)| {
            let (dx, dy) = (coords[u][0] - coords[v][0], coords[u][1] - coords[v][1]);
            let r = dx * dx + dy * dy - 1.0;
            r * r
        })
        .sum()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyTolerances {
    pub max_edge_deviation: f64,
    pub min_separation: f64,
}

impl Default for VerifyTolerances {
    fn default() -> Self {
        VerifyTolerances { max_edge_deviation: 1e-9, min_separation: 1e-6 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verification {
    pub max_edge_deviation: f64,
    pub min_separation: f64,
    pub pass: bool,
}

pub fn verify(g: &Graph, coords: &[[f64; 2]], tol: &VerifyTolerances) -> Result<Verification, EmbedError> {
    if coords.len() != g.n() {
        return Err(EmbedError::CoordCount { expected: g.n(), got: coords.len() });
    }
    let (max_edge_deviation, min_separation) = metrics(g, coords);
    Ok(Verification {
        max_edge_deviation,
        min_separation,
        pass: max_edge_deviation <= tol.max_edge_deviation && min_separation >= tol.min_separation,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveOptions {
    pub restarts: usize,
    /// Success threshold on the sum of squared edge residuals.
    pub residual_tol: f64,
    pub separation_floor: f64,
    pub max_iterations: usize,
    pub seed: u64,
    /// Half-width of the uniform initial box; `None` means n/2.
    pub init_box: Option<f64>,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            restarts: 200,
            residual_tol: 1e-12,
            separation_floor: 1e-3,
            max_iterations: 500,
            seed: 0,
            init_box: None,
        }
    }
}

/// No embedding was found. This is not a proof that none exists.
#[derive(Clone, Debug, PartialEq, Error)]
#[error("no embedding found after {restarts_used} restarts (best residual {best_residual:e}, separation {best_separation:e})")]
pub struct SolveFailure {
    pub best_residual: f64,
    pub best_separation: f64,
    pub restarts_used: usize,
    pub best: Option<Embedding>,
}

const REPULSION_WEIGHT: f64 = 1e-2;
const RESTART_BATCH: usize = 16;

struct LmProblem<'a> {
    graph: &'a Graph,
    /// Vertex index → position in the unknown vector, `None` if held fixed.
    slot: Vec<Option<usize>>,
    /// Repulsion radius; 0 disables the term.
    floor: f64,
}

impl LmProblem<'_> {
    fn unknowns(&self) -> usize {
        2 * self.slot.iter().flatten().count()
    }

    fn close_pairs(&self, c: &[[f64; 2]]) -> Vec<(usize, usize, f64)> {
        let mut out = Vec::new();
        if self.floor <= 0.0 {
            return out;
        }
        for u in 0..c.len() {
            for v in u + 1..c.len() {
                let d = dist(c[u], c[v]);
                if d < self.floor && (self.slot[u].is_some() || self.slot[v].is_some()) {
                    out.push((u, v, d));
                }
            }
        }
        out
    }

    /// Residuals and row-major Jacobian over the free coordinates.
    fn linearize(&self, c: &[[f64; 2]]) -> (Vec<f64>, Vec<f64>) {
        let k = self.unknowns();
        let close = self.close_pairs(c);
        let m = self.graph.edge_count() + close.len();
        let mut r = Vec::with_capacity(m);
        let mut jac = vec![0.0; m * k];
        let put = |row: usize, v: usize, g: [f64; 2], jac: &mut Vec<f64>| {
            if let Some(s) = self.slot[v] {
                jac[row * k + 2 * s] += g[0];
                jac[row * k + 2 * s + 1] += g[1];
            }
        };
        for (row, &(u, v)) in self.graph.edges().iter().enumerate() {
            let (dx, dy) = (c[u][0] - c[v][0], c[u][1] - c[v][1]);
            r.push(dx * dx + dy * dy - 1.0);
            put(row, u, [2.0 * dx, 2.0 * dy], &mut jac);
            put(row, v, [-2.0 * dx, -2.0 * dy], &mut jac);
        }
        for (i, &(u, v, d)) in close.iter().enumerate() {
            let row = self.graph.edge_count() + i;
            r.push(REPULSION_WEIGHT * (1.0 - d / self.floor));
            if d > 0.0 {
                let s = -REPULSION_WEIGHT / (self.floor * d);
                let (dx, dy) = (c[u][0] - c[v][0], c[u][1] - c[v][1]);
                put(row, u, [s * dx, s * dy], &mut jac);
                put(row, v, [-s * dx, -s * dy], &mut jac);
            }
        }
        (r, jac)
    }

    fn objective(&self, c: &[[f64; 2]]) -> f64 {
        let rep: f64 = self
            .close_pairs(c)
            .iter()
            .map(|&(_, _, d)| (REPULSION_WEIGHT * (1.0 - d / self.floor)).powi(2))
            .sum();
        edge_residual(self.graph, c) + rep
    }

    fn apply(&self, c: &[[f64; 2]], step: &[f64]) -> Vec<[f64; 2]> {
        let mut out = c.to_vec();
        for (v, s) in self.slot.iter().enumerate() {
            if let Some(s) = s {
                out[v][0] += step[2 * s];
                out[v][1] += step[2 * s + 1];
            }
        }
        out
    }

    /// Levenberg-damped Gauss–Newton; returns the final objective.
    fn minimize(&self, coords: &mut Vec<[f64; 2]>, max_iterations: usize) -> f64 {
        let k = self.unknowns();
        let mut f = self.objective(coords);
        if k == 0 {
            return f;
        }
        let mut lambda = 1e-3;
        for _ in 0..max_iterations {
            if f < 1e-30 {
                break;
            }
            let (r, jac) = self.linearize(coords);
            let m = r.len();
            let mut jtj = vec![0.0; k * k];
            let mut jtr = vec![0.0; k];
            for row in 0..m {
                let jr = &jac[row * k..(row + 1) * k];
                for a in 0..k {
                    if jr[a] == 0.0 {
                        continue;
                    }
                    jtr[a] -= jr[a] * r[row];
                    for b in 0..k {
                        jtj[a * k + b] += jr[a] * jr[b];
                    }
                }
            }
            let mut improved = false;
            while lambda < 1e16 {
                let mut a = jtj.clone();
                for i in 0..k {
                    a[i * k + i] += lambda;
                }
                if let Some(step) = linalg::solve_spd(&a, k, &jtr) {
                    let trial = self.apply(coords, &step);
                    let ft = self.objective(&trial);
                    if ft < f {
                        *coords = trial;
                        f = ft;
                        lambda = (lambda / 3.0).max(1e-15);
                        improved = true;
                        break;
                    }
                }
                lambda *= 4.0;
            }
            if !improved {
                break;
            }
        }
        f
    }
}

fn gauge_normalize(coords: &mut [[f64; 2]]) {
    if let Some(p) = coords.iter().find(|p| p[1].abs() > 1e-9) {
        if p[1] < 0.0 {
            for q in coords.iter_mut() {
                q[1] = -q[1];
            }
        }
    }
}

struct Attempt {
    coords: Vec<[f64; 2]>,
    residual: f64,
    separation: f64,
}

fn solve_connected(g: &Graph, opts: &SolveOptions) -> Result<Vec<[f64; 2]>, SolveFailure> {
    let n = g.n();
    if g.edge_count() == 0 {
        return Ok(vec![[0.0, 0.0]]);
    }
    let &(a, b) = g.edges().iter().min().unwrap();
    let mut slot = vec![None; n];
    let mut next = 0;
    for (v, s) in slot.iter_mut().enumerate() {
        if v != a && v != b {
            *s = Some(next);
            next += 1;
        }
    }
    let problem = LmProblem { graph: g, slot, floor: opts.separation_floor };
    let half = opts.init_box.unwrap_or(n as f64 / 2.0);
    let run = |restart: usize| -> Attempt {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        rng.set_stream(restart as u64);
        let mut coords: Vec<[f64; 2]> = (0..n)
            .map(|_| [0.5 + rng.gen_range(-half..=half), rng.gen_range(-half..=half)])
            .collect();
        coords[a] = [0.0, 0.0];
        coords[b] = [1.0, 0.0];
        problem.minimize(&mut coords, opts.max_iterations);
        gauge_normalize(&mut coords);
        let (_, separation) = metrics(g, &coords);
        Attempt { residual: edge_residual(g, &coords), separation, coords }
    };
    let ok = |t: &Attempt| t.residual < opts.residual_tol && t.separation > opts.separation_floor;
    let mut best: Option<(usize, Attempt)> = None;
    let mut used = 0;
    while used < opts.restarts {
        let end = (used + RESTART_BATCH).min(opts.restarts);
        let batch: Vec<Attempt> = (used..end).into_par_iter().map(run).collect();
        let mut winner: Option<(usize, Attempt)> = None;
        for (i, t) in batch.into_iter().enumerate() {
            let idx = used + i;
            if ok(&t) {
                if winner.as_ref().is_none_or(|(_, w)| t.residual < w.residual) {
                    winner = Some((idx, t));
                }
            } else if best.as_ref().is_none_or(|(_, w)| t.residual < w.residual) {
                best = Some((idx, t));
            }
        }
        used = end;
        if let Some((_, w)) = winner {
            return Ok(w.coords);
        }
    }
    let best = best.map(|(_, t)| t);
    Err(SolveFailure {
        best_residual: best.as_ref().map_or(f64::INFINITY, |t| t.residual),
        best_separation: best.as_ref().map_or(0.0, |t| t.separation),
        restarts_used: used,
        best: best.map(|t| Embedding::new(g, t.coords).expect("coordinate count")),
    })
}

/// Random-restart search for a unit-distance embedding. Disconnected graphs
/// are solved per component and the components laid side by side.
pub fn solve(g: &Graph, opts: &SolveOptions) -> Result<Embedding, SolveFailure> {
    let comps = g.components();
    if comps.len() == 1 {
        return solve_connected(g, opts).map(|c| Embedding::new(g, c).expect("coordinate count"));
    }
    let mut coords = vec![[0.0, 0.0]; g.n()];
    let mut offset = 0.0;
    for comp in &comps {
        let sub = induced(g, comp);
        let placed = solve_connected(&sub, opts).map_err(|f| SolveFailure {
            best: None,
            ..f
        })?;
        let width = placed.iter().map(|p| p[0]).fold(f64::NEG_INFINITY, f64::max);
        let left = placed.iter().map(|p| p[0]).fold(f64::INFINITY, f64::min);
        for (i, &v) in comp.iter().enumerate() {
            coords[v] = [placed[i][0] - left + offset, placed[i][1]];
        }
        offset += width - left + 2.0;
    }
    Ok(Embedding::new(g, coords).expect("coordinate count"))
}

fn induced(g: &Graph, members: &[usize]) -> Graph {
    let pos = |v: usize| members.iter().position(|&m| m == v);
    let edges = g
        .edges()
        .iter()
        .filter_map(|&(u, v)| Some((pos(u)?, pos(v)?)));
    Graph::new(members.iter().map(|&v| g.label(v).to_string()), edges).expect("induced subgraph")
}

/// Polishing failed to lower the residual at all.
#[derive(Clone, Debug, PartialEq, Error)]
#[error("refinement made no progress (residual {residual:e})")]
pub struct RefineFailure {
    pub residual: f64,
    pub best: Embedding,
}

/// Scale minimizing `sum (s^2 |p_u - p_v|^2 - 1)^2`.
pub fn best_fit_scale(g: &Graph, coords: &[[f64; 2]]) -> f64 {
    let (mut s1, mut s2) = (0.0, 0.0);
    for &(u, v) in g.edges() {
        let q = dist(coords[u], coords[v]).powi(2);
        s1 += q;
        s2 += q * q;
    }
    if s2 == 0.0 {
        1.0
    } else {
        (s1 / s2).sqrt()
    }
}

/// Least-squares polish of approximate coordinates, optionally after a
/// best-fit uniform rescale.
pub fn refine(
    g: &Graph,
    coords: &[[f64; 2]],
    allow_similarity: bool,
    max_iterations: usize,
) -> Result<Embedding, RefineFailure> {
    let mut c = coords.to_vec();
    if allow_similarity {
        let s = best_fit_scale(g, &c);
        for p in &mut c {
            p[0] *= s;
            p[1] *= s;
        }
    }
    let start = edge_residual(g, &c);
    let problem = LmProblem { graph: g, slot: (0..g.n()).map(Some).collect(), floor: 0.0 };
    let end = problem.minimize(&mut c, max_iterations);
    let emb = Embedding::new(g, c).expect("coordinate count");
    if end >= start && start > 1e-24 {
        return Err(RefineFailure { residual: end, best: emb });
    }
    Ok(emb)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RigidityReport {
    pub jacobian_rank: usize,
    pub flex_count: usize,
    pub rigid: bool,
    pub rank_tolerance: f64,
}

pub const RANK_TOLERANCE: f64 = 1e-8;

/// `|E| × 2n` matrix whose row for edge `(u, v)` is the gradient of
/// `|p_u - p_v|^2`.
pub fn rigidity_matrix(g: &Graph, coords: &[[f64; 2]]) -> Vec<f64> {
    let cols = 2 * g.n();
    let mut m = vec![0.0; g.edge_count() * cols];
    for (row, &(u, v)) in g.edges().iter().enumerate() {
        let (dx, dy) = (coords[u][0] - coords[v][0], coords[u][1] - coords[v][1]);
        m[row * cols + 2 * u] = 2.0 * dx;
        m[row * cols + 2 * u + 1] = 2.0 * dy;
        m[row * cols + 2 * v] = -2.0 * dx;
        m[row * cols + 2 * v + 1] = -2.0 * dy;
    }
    m
}

pub fn rigidity_report(g: &Graph, emb: &Embedding) -> Result<RigidityReport, EmbedError> {
    let loose = VerifyTolerances { max_edge_deviation: 1e-6, min_separation: 1e-6 };
    let v = verify(g, emb.coords(), &loose)?;
    if !v.pass {
        return Err(EmbedError::Unverified {
            max_edge_deviation: v.max_edge_deviation,
            min_separation: v.min_separation,
        });
    }
    let m = rigidity_matrix(g, emb.coords());
    let jacobian_rank = linalg::rank(&m, g.edge_count(), 2 * g.n(), RANK_TOLERANCE);
    let flex_count = (2 * g.n() as i64 - 3 - jacobian_rank as i64).max(0) as usize;
    Ok(RigidityReport { jacobian_rank, flex_count, rigid: flex_count == 0, rank_tolerance: RANK_TOLERANCE })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::catalog;

    const H: f64 = 0.866_025_403_784_438_6;

    fn k4e_exact() -> Vec<[f64; 2]> {
        vec![[0.0, 0.0], [1.0, 0.0], [0.5, H], [1.5, H]]
    }

    #[test]
    fn verify_k4e() {
        let g = catalog("k4_minus_e").unwrap();
        let v = verify(&g, &k4e_exact(), &VerifyTolerances::default()).unwrap();
        assert!(v.pass);
        assert!(v.max_edge_deviation < 1e-15);
        assert!(verify(&g, &k4e_exact()[..3], &VerifyTolerances::default()).is_err());
    }

    #[test]
    fn collapsed_k2_fails() {
        let g = catalog("k2").unwrap();
        let v = verify(&g, &[[0.0, 0.0], [0.0, 0.0]], &VerifyTolerances::default()).unwrap();
        assert!(!v.pass);
        assert_eq!(v.max_edge_deviation, 1.0);
    }

    #[test]
    fn k2_solves_by_gauge() {
        let g = catalog("k2").unwrap();
        let e = solve(&g, &SolveOptions::default()).unwrap();
        assert_eq!(e.coords(), &[[0.0, 0.0], [1.0, 0.0]]);
    }

    #[test]
    fn k4e_solution_is_congruent() {
        let g = catalog("k4_minus_e").unwrap();
        let e = solve(&g, &SolveOptions { seed: 3, ..Default::default() }).unwrap();
        assert!(e.max_edge_deviation() < 1e-9);
        // 1-2-3 and 2-3-4 are unit triangles, so |1 4| = sqrt(3).
        let d14 = dist(e.coords()[0], e.coords()[3]);
        assert!((d14 - 3f64.sqrt()).abs() < 1e-9);
    }

    #[test]
    fn refine_fixed_point() {
        let g = catalog("k4_minus_e").unwrap();
        let e = refine(&g, &k4e_exact(), false, 500).unwrap();
        for (a, b) in e.coords().iter().zip(k4e_exact()) {
            assert!(dist(*a, b) < 1e-12);
        }
    }

    #[test]
    fn rigidity_small() {
        let k3 = catalog("k3").unwrap();
        let tri = Embedding::new(&k3, vec![[0.0, 0.0], [1.0, 0.0], [0.5, H]]).unwrap();
        let r = rigidity_report(&k3, &tri).unwrap();
        assert_eq!((r.jacobian_rank, r.flex_count, r.rigid), (3, 0, true));
        let p3 = catalog("p3").unwrap();
        let path = Embedding::new(&p3, vec![[0.0, 0.0], [1.0, 0.0], [1.5, H]]).unwrap();
        let r = rigidity_report(&p3, &path).unwrap();
        assert_eq!((r.jacobian_rank, r.flex_count, r.rigid), (2, 1, false));
        let bad = Embedding::new(&p3, vec![[0.0, 0.0], [2.0, 0.0], [3.0, 0.0]]).unwrap();
        assert!(matches!(rigidity_report(&p3, &bad), Err(EmbedError::Unverified { .. })));
    }

    #[test]
    fn disconnected_graph_per_component() {
        let g = Graph::new(["a", "b", "c", "d"], [(0, 1), (2, 3)]).unwrap();
        let e = solve(&g, &SolveOptions::default()).unwrap();
        assert!(e.max_edge_deviation() < 1e-12);
        assert!(e.min_separation() > 0.5);
    }

    #[test]
    fn best_fit_scale_recovers_uniform_scaling() {
        let g = catalog("k4_minus_e").unwrap();
        let scaled: Vec<[f64; 2]> = k4e_exact().iter().map(|p| [p[0] * 1.3, p[1] * 1.3]).collect();
        assert!((best_fit_scale(&g, &scaled) - 1.0 / 1.3).abs() < 1e-12);
    }
}
