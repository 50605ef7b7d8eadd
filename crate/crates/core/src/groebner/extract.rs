use crate::graph::Graph;
use crate::poly::{rat_to_f64, Axis, OrderKind, Polynomial};
use crate::system::ConstraintSystem;

use super::{GroebnerResult, Status};

const ROOT_BOUND: f64 = 1e6;
const ROOT_TOL: f64 = 1e-12;
const CONSISTENCY_TOL: f64 = 1e-7;

/// Real point of a zero-dimensional system, indexed like the variable table.
#[derive(Clone, Debug, PartialEq)]
pub struct Solution {
    pub values: Vec<f64>,
}

impl Solution {
    /// Per-vertex coordinates in graph order, pinned vertices included.
    pub fn coordinates(&self, sys: &ConstraintSystem) -> Vec<[f64; 2]> {
        sys.graph
            .labels()
            .iter()
            .map(|l| match sys.pin_of(l) {
                Some(p) => [rat_to_f64(&p.x), rat_to_f64(&p.y)],
                None => [
                    self.values[sys.vars.coord(l, Axis::X).unwrap()],
                    self.values[sys.vars.coord(l, Axis::Y).unwrap()],
                ],
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Extraction {
    Solutions {
        solutions: Vec<Solution>,
        /// Branches abandoned because no candidate root satisfied every
        /// element introducing the variable.
        dead_branches: usize,
    },
    /// The basis does not describe finitely many points; nothing is guessed.
    NonTriangular,
}

/// Back-substitution through a lex basis whose every variable appears as a
/// pure power leading monomial. All real branches are returned.
pub fn extract_solutions(result: &GroebnerResult) -> Extraction {
    assert_eq!(result.status, Status::Feasible, "extraction needs a feasible basis");
    assert_eq!(result.order.kind, OrderKind::Lex, "extraction needs a lex order");
    let order = &result.order;
    let n = order.nvars();
    // Group basis elements by their largest variable (in precedence rank).
    let mut groups: Vec<Vec<&Polynomial>> = vec![Vec::new(); n];
    let mut pure: Vec<Option<&Polynomial>> = vec![None; n];
    for p in &result.basis {
        let Some(top) = p.vars().into_iter().map(|v| order.rank(v)).min() else {
            continue;
        };
        groups[top].push(p);
        let (lm, _) = p.leading(order).unwrap();
        if lm.pairs().len() == 1 && pure[top].is_none_or(|q| q.total_degree() > p.total_degree()) {
            pure[top] = Some(p);
        }
    }
    if pure.iter().any(Option::is_none) {
        return Extraction::NonTriangular;
    }
    let prec = order.precedence();
    let mut partial: Vec<Vec<f64>> = vec![vec![f64::NAN; n]];
    let mut dead = 0;
    for r in (0..n).rev() {
        let var = prec[r];
        let mut next = Vec::new();
        for point in partial {
            let main = univariate(pure[r].unwrap(), var, &point);
            let roots = real_roots(&main, -ROOT_BOUND, ROOT_BOUND);
            let mut any = false;
            for root in roots {
                let mut cand = point.clone();
                cand[var] = root;
                let ok = groups[r].iter().all(|g| {
                    let u = univariate(g, var, &point);
                    eval(&u, root).abs() <= CONSISTENCY_TOL * scale(&u, root)
                });
                if ok {
                    any = true;
                    next.push(cand);
                }
            }
            if !any {
                dead += 1;
            }
        }
        partial = next;
    }
    let mut solutions: Vec<Solution> = partial.into_iter().map(|values| Solution { values }).collect();
    solutions.sort_by(|a, b| a.values.partial_cmp(&b.values).unwrap());
    Extraction::Solutions { solutions, dead_branches: dead }
}

/// Coefficients (ascending powers of `var`) after substituting the known
/// values in `point`.
fn univariate(p: &Polynomial, var: usize, point: &[f64]) -> Vec<f64> {
    let mut c = vec![0.0; p.total_degree() as usize + 1];
    for (m, coef) in p.terms() {
        let mut v = rat_to_f64(coef);
        let mut k = 0;
        for &(x, e) in m.pairs() {
            if x == var {
                k = e as usize;
            } else {
                v *= point[x].powi(e as i32);
            }
        }
        c[k] += v;
    }
    while c.len() > 1 && *c.last().unwrap() == 0.0 {
        c.pop();
    }
    c
}

fn eval(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &a| acc * x + a)
}

fn scale(c: &[f64], x: f64) -> f64 {
    let ax = x.abs().max(1.0);
    c.iter().enumerate().map(|(k, a)| a.abs() * ax.powi(k as i32)).sum::<f64>().max(1.0)
}

fn derivative(c: &[f64]) -> Vec<f64> {
    c.iter().enumerate().skip(1).map(|(k, a)| a * k as f64).collect()
}

/// Real roots in `[lo, hi]`: the critical points of `p` split the interval
/// into monotone pieces, each bisected on a sign change; critical points
/// where `p` vanishes are reported as multiple roots.
pub(crate) fn real_roots(c: &[f64], lo: f64, hi: f64) -> Vec<f64> {
    let deg = c.len() - 1;
    if deg == 0 {
        return Vec::new();
    }
    if deg == 1 {
        let r = -c[0] / c[1];
        return if (lo..=hi).contains(&r) { vec![r] } else { Vec::new() };
    }
    let crit = real_roots(&derivative(c), lo, hi);
    let mut knots = vec![lo];
    knots.extend(crit.iter().copied().filter(|&x| x > lo && x < hi));
    knots.push(hi);
    let mut roots = Vec::new();
    for &k in &knots[1..knots.len() - 1] {
        if eval(c, k).abs() <= 1e-10 * scale(c, k) {
            roots.push(k);
        }
    }
    for w in knots.windows(2) {
        let (a, b) = (w[0], w[1]);
        let (fa, fb) = (eval(c, a), eval(c, b));
        if fa == 0.0 && a == lo {
            roots.push(a);
        }
        if fa * fb < 0.0 {
            roots.push(bisect(c, a, b, fa));
        } else if fb == 0.0 && b == hi {
            roots.push(b);
        }
    }
    roots.sort_by(|a, b| a.partial_cmp(b).unwrap());
    roots.dedup_by(|a, b| (*a - *b).abs() <= 1e-9 * b.abs().max(1.0));
    roots
}

fn bisect(c: &[f64], mut a: f64, mut b: f64, mut fa: f64) -> f64 {
    for _ in 0..400 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b || (b - a) <= ROOT_TOL * m.abs().max(1.0) * 1e-3 {
            break;
        }
        let fm = eval(c, m);
        if fm == 0.0 {
            return m;
        }
        if fa * fm < 0.0 {
            b = m;
        } else {
            a = m;
            fa = fm;
        }
    }
    0.5 * (a + b)
}

/// Duplicate-vertex check for one coordinate assignment.
#[derive(Clone, Debug, PartialEq)]
pub struct DistinctReport {
    pub coords: Vec<[f64; 2]>,
    /// `(u, v, distance)` for every pair closer than the tolerance.
    pub duplicates: Vec<(String, String, f64)>,
    pub pass: bool,
}

pub fn check_distinct(solutions: &[Vec<[f64; 2]>], graph: &Graph, tolerance: f64) -> Vec<DistinctReport> {
    solutions
        .iter()
        .map(|coords| {
            let mut duplicates = Vec::new();
            for u in 0..coords.len() {
                for v in u + 1..coords.len() {
                    let d = (coords[u][0] - coords[v][0]).hypot(coords[u][1] - coords[v][1]);
                    if d < tolerance {
                        duplicates.push((graph.label(u).to_string(), graph.label(v).to_string(), d));
                    }
                }
            }
            DistinctReport { coords: coords.clone(), pass: duplicates.is_empty(), duplicates }
        })
        .collect()
}
