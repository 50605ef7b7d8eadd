//! Ruler-and-compass placement programs, parameter sweeps and bisection on
//! a monitored vertex distance.

use std::collections::HashSet;
use std::f64::consts::{PI, TAU};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::embed::{self, Embedding, Verification, VerifyTolerances};
use crate::graph::{catalog, Graph};

/// Which intersection of two unit circles to take: `Plus` is left of the
/// directed line from the first anchor to the second.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }

    pub fn flip(self) -> Branch {
        match self {
            Branch::Plus => Branch::Minus,
            Branch::Minus => Branch::Plus,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Angle {
    Param(String),
    Const(f64),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "step", rename_all = "snake_case")]
pub enum PlacementStep {
    FixPoint { vertex: String, x: f64, y: f64 },
    PolarFrom { vertex: String, anchor: String, angle: Angle },
    CircleCircle { vertex: String, anchor_a: String, anchor_b: String, branch: Branch },
}

impl PlacementStep {
    pub fn vertex(&self) -> &str {
        match self {
            PlacementStep::FixPoint { vertex, .. }
            | PlacementStep::PolarFrom { vertex, .. }
            | PlacementStep::CircleCircle { vertex, .. } => vertex,
        }
    }

    fn anchors(&self) -> Vec<&str> {
        match self {
            PlacementStep::FixPoint { .. } => vec![],
            PlacementStep::PolarFrom { anchor, .. } => vec![anchor],
            PlacementStep::CircleCircle { anchor_a, anchor_b, .. } => vec![anchor_a, anchor_b],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Parameter {
    pub name: String,
    pub default: f64,
    pub lo: f64,
    pub hi: f64,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PlanError {
    #[error("step {step} places `{vertex}`, which is not a graph vertex")]
    UnknownVertex { step: usize, vertex: String },
    #[error("step {step} places `{vertex}` a second time")]
    PlacedTwice { step: usize, vertex: String },
    #[error("step {step} uses anchor `{anchor}` before it is placed")]
    AnchorNotPlaced { step: usize, anchor: String },
    #[error("step {step} realizes `{u}`–`{v}`, which is not a graph edge")]
    NotAnEdge { step: usize, u: String, v: String },
    #[error("vertex `{0}` is never placed")]
    Unplaced(String),
    #[error("edge `{0}`–`{1}` is not realized by any step")]
    Unrealized(String, String),
    #[error("fixed points `{0}` and `{1}` are adjacent but not at unit distance ({2})")]
    FrameEdge(String, String, f64),
    #[error("unknown parameter `{0}`")]
    UnknownParameter(String),
    #[error("target pair must name two distinct vertices")]
    BadTarget,
}

/// Ordered placement steps plus the free parameters they read. Every graph
/// edge other than the target pair is realized at unit length by the steps.
#[derive(Clone, Debug)]
pub struct ConstructionPlan {
    pub name: String,
    pub steps: Vec<PlacementStep>,
    pub parameters: Vec<Parameter>,
    pub target: (String, String),
    pub graph: Graph,
    realized: Vec<(usize, usize)>,
    order: Vec<usize>,
}

const FRAME_TOL: f64 = 1e-12;
const COINCIDENT_TOL: f64 = 1e-12;

impl ConstructionPlan {
    pub fn new(
        name: &str,
        graph: Graph,
        steps: Vec<PlacementStep>,
        parameters: Vec<Parameter>,
        target: (&str, &str),
    ) -> Result<Self, PlanError> {
        let (tu, tv) = match (graph.index_of(target.0), graph.index_of(target.1)) {
            (Some(a), Some(b)) if a != b => (a, b),
            _ => return Err(PlanError::BadTarget),
        };
        let target_edge = (tu.min(tv), tu.max(tv));
        let mut placed: HashSet<usize> = HashSet::new();
        let mut realized: Vec<(usize, usize)> = Vec::new();
        let mut fixed: Vec<(usize, f64, f64)> = Vec::new();
        let mut order = Vec::new();
        for (i, s) in steps.iter().enumerate() {
            let v = graph.index_of(s.vertex()).ok_or_else(|| PlanError::UnknownVertex {
                step: i,
                vertex: s.vertex().to_string(),
            })?;
            if !placed.insert(v) {
                return Err(PlanError::PlacedTwice { step: i, vertex: s.vertex().to_string() });
            }
            for a in s.anchors() {
                let ai = graph.index_of(a).filter(|x| *x != v && placed.contains(x)).ok_or_else(
                    || PlanError::AnchorNotPlaced { step: i, anchor: a.to_string() },
                )?;
                if !graph.has_edge(v, ai) {
                    return Err(PlanError::NotAnEdge {
                        step: i,
                        u: s.vertex().to_string(),
                        v: a.to_string(),
                    });
                }
                realized.push((v.min(ai), v.max(ai)));
            }
            if let PlacementStep::PolarFrom { angle: Angle::Param(p), .. } = s {
                if !parameters.iter().any(|q| &q.name == p) {
                    return Err(PlanError::UnknownParameter(p.clone()));
                }
            }
            if let PlacementStep::FixPoint { x, y, .. } = s {
                for &(w, wx, wy) in &fixed {
                    if graph.has_edge(v, w) && (v.min(w), v.max(w)) != target_edge {
                        let d = (x - wx).hypot(y - wy);
                        if (d - 1.0).abs() > FRAME_TOL {
                            return Err(PlanError::FrameEdge(
                                graph.label(w).to_string(),
                                s.vertex().to_string(),
                                d,
                            ));
                        }
                        realized.push((v.min(w), v.max(w)));
                    }
                }
                fixed.push((v, *x, *y));
            }
            order.push(v);
        }
        for v in 0..graph.n() {
            if !placed.contains(&v) {
                return Err(PlanError::Unplaced(graph.label(v).to_string()));
            }
        }
        for &e in graph.edges() {
            if e != target_edge && !realized.contains(&e) {
                return Err(PlanError::Unrealized(
                    graph.label(e.0).to_string(),
                    graph.label(e.1).to_string(),
                ));
            }
        }
        realized.sort_unstable();
        realized.dedup();
        Ok(ConstructionPlan {
            name: name.to_string(),
            steps,
            parameters,
            target: (target.0.to_string(), target.1.to_string()),
            graph,
            realized,
            order,
        })
    }

    pub fn defaults(&self) -> Vec<f64> {
        self.parameters.iter().map(|p| p.default).collect()
    }

    pub fn param_index(&self, name: &str) -> Option<usize> {
        self.parameters.iter().position(|p| p.name == name)
    }

    /// Edges realized at unit length by construction.
    pub fn realized_edges(&self) -> &[(usize, usize)] {
        &self.realized
    }

    /// Graph vertices in placement order.
    pub fn placement_order(&self) -> &[usize] {
        &self.order
    }

    pub fn target_indices(&self) -> (usize, usize) {
        (
            self.graph.index_of(&self.target.0).unwrap(),
            self.graph.index_of(&self.target.1).unwrap(),
        )
    }

    /// Same plan with the branch of the step placing `vertex` replaced.
    pub fn with_branch(&self, vertex: &str, branch: Branch) -> ConstructionPlan {
        let mut p = self.clone();
        for s in &mut p.steps {
            if let PlacementStep::CircleCircle { vertex: v, branch: b, .. } = s {
                if v == vertex {
                    *b = branch;
                }
            }
        }
        p
    }
}

/// A circle–circle step had no intersection (anchors more than 2 apart) or
/// coincident anchors. The parameter values are outside the valid region.
#[derive(Clone, Debug, PartialEq, Error, Serialize, Deserialize)]
#[error("step {step_index} ({vertex}) failed: anchor distance {anchor_distance}")]
pub struct StepFailure {
    pub step_index: usize,
    pub vertex: String,
    pub anchor_distance: f64,
}

#[derive(Clone, Debug, PartialEq, Error)]
pub enum ExecuteError {
    #[error(transparent)]
    Step(#[from] StepFailure),
    #[error("expected {expected} parameter values, got {got}")]
    ParamCount { expected: usize, got: usize },
    #[error("parameter `{name}` = {value} outside [{lo}, {hi}]")]
    OutOfRange { name: String, value: f64, lo: f64, hi: f64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Execution {
    /// Coordinates in graph vertex order.
    pub coords: Vec<[f64; 2]>,
    pub target_distance: f64,
}

/// Unit-circle intersection about `a` and `b`, or `None` when the circles
/// are disjoint or the anchors coincide.
pub fn circle_circle(a: [f64; 2], b: [f64; 2], branch: Branch) -> Option<[f64; 2]> {
    let (dx, dy) = (b[0] - a[0], b[1] - a[1]);
    let d = dx.hypot(dy);
    if !(COINCIDENT_TOL..=2.0).contains(&d) {
        return None;
    }
    let h = (1.0 - d * d / 4.0).max(0.0).sqrt();
    let (ux, uy) = (dx / d, dy / d);
    let s = branch.sign();
    Some([0.5 * (a[0] + b[0]) - s * h * uy, 0.5 * (a[1] + b[1]) + s * h * ux])
}

pub fn execute(plan: &ConstructionPlan, params: &[f64]) -> Result<Execution, ExecuteError> {
    if params.len() != plan.parameters.len() {
        return Err(ExecuteError::ParamCount { expected: plan.parameters.len(), got: params.len() });
    }
    for (p, &v) in plan.parameters.iter().zip(params) {
        if !(p.lo..=p.hi).contains(&v) {
            return Err(ExecuteError::OutOfRange { name: p.name.clone(), value: v, lo: p.lo, hi: p.hi });
        }
    }
    let g = &plan.graph;
    let mut coords = vec![[f64::NAN; 2]; g.n()];
    let at = |coords: &[[f64; 2]], l: &str| coords[g.index_of(l).unwrap()];
    for (i, (step, &v)) in plan.steps.iter().zip(&plan.order).enumerate() {
        coords[v] = match step {
            PlacementStep::FixPoint { x, y, .. } => [*x, *y],
            PlacementStep::PolarFrom { anchor, angle, .. } => {
                let t = match angle {
                    Angle::Const(t) => *t,
                    Angle::Param(name) => params[plan.param_index(name).unwrap()],
                };
                let o = at(&coords, anchor);
                [o[0] + t.cos(), o[1] + t.sin()]
            }
            PlacementStep::CircleCircle { vertex, anchor_a, anchor_b, branch } => {
                let (a, b) = (at(&coords, anchor_a), at(&coords, anchor_b));
                circle_circle(a, b, *branch).ok_or_else(|| StepFailure {
                    step_index: i,
                    vertex: vertex.clone(),
                    anchor_distance: (b[0] - a[0]).hypot(b[1] - a[1]),
                })?
            }
        };
    }
    let (tu, tv) = plan.target_indices();
    let target_distance = (coords[tu][0] - coords[tv][0]).hypot(coords[tu][1] - coords[tv][1]);
    Ok(Execution { coords, target_distance })
}

/// Branch choices for vertices 2, 6, a and 1 of the Heawood plan.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeawoodBranches {
    pub v2: Branch,
    pub v6: Branch,
    pub va: Branch,
    pub v1: Branch,
}

impl Default for HeawoodBranches {
    /// The choice whose placements lie nearest the hand-drawn final pose.
    fn default() -> Self {
        HeawoodBranches { v2: Branch::Plus, v6: Branch::Minus, va: Branch::Minus, v1: Branch::Minus }
    }
}

impl HeawoodBranches {
    /// All 16 variants; bit k set flips the k-th of (2, 6, a, 1) relative
    /// to the default.
    pub fn variant(index: usize) -> HeawoodBranches {
        let d = HeawoodBranches::default();
        let pick = |b: Branch, bit: usize| if index >> bit & 1 == 1 { b.flip() } else { b };
        HeawoodBranches { v2: pick(d.v2, 0), v6: pick(d.v6, 1), va: pick(d.va, 2), v1: pick(d.v1, 3) }
    }
}

/// Angle of `d` about 5 at the folded pose.
pub const HEAWOOD_ALPHA: f64 = 3.052_395_024_557_908;
/// Angle of 4 about `d` at the folded pose.
pub const HEAWOOD_BETA: f64 = 1.996_082_735_031_935;

/// Placement program for the Heawood graph minus the edge 1–a: a fixed
/// hexagonal frame on a 1 × 2 rectangle, the folded chain 5–d–4–f driven by
/// two angles, then the remaining rungs and the last two vertices by
/// circle intersections. The monitored pair is (1, a).
pub fn heawood_plan(branches: HeawoodBranches) -> ConstructionPlan {
    use PlacementStep::*;
    let fix = |v: &str, x: f64, y: f64| FixPoint { vertex: v.into(), x, y };
    let cc = |v: &str, a: &str, b: &str, branch: Branch| CircleCircle {
        vertex: v.into(),
        anchor_a: a.into(),
        anchor_b: b.into(),
        branch,
    };
    let steps = vec![
        fix("7", 0.5, 1.0),
        fix("b", -0.5, 1.0),
        fix("3", -0.5, 0.0),
        fix("e", -0.5, -1.0),
        fix("5", 0.5, -1.0),
        fix("g", 0.5, 0.0),
        PolarFrom { vertex: "d".into(), anchor: "5".into(), angle: Angle::Param("alpha".into()) },
        PolarFrom { vertex: "4".into(), anchor: "d".into(), angle: Angle::Param("beta".into()) },
        cc("f", "4", "7", Branch::Plus),
        cc("c", "3", "4", Branch::Minus),
        cc("2", "b", "d", branches.v2),
        cc("6", "e", "f", branches.v6),
        cc("a", "6", "2", branches.va),
        cc("1", "g", "c", branches.v1),
    ];
    let parameters = vec![
        Parameter { name: "alpha".into(), default: HEAWOOD_ALPHA, lo: 0.0, hi: TAU },
        Parameter { name: "beta".into(), default: HEAWOOD_BETA, lo: 0.0, hi: TAU },
    ];
    ConstructionPlan::new("heawood", catalog("heawood").unwrap(), steps, parameters, ("1", "a"))
        .expect("heawood plan is well formed")
}

/// Rhombus A(0,0), B(1,0), C = B + (cos θ, sin θ), D = the second unit
/// intersection about A and C. The monitored pair (B, D) has length
/// 2 sin(θ/2), so it equals 1 at θ = π/3.
pub fn four_bar_plan() -> ConstructionPlan {
    use PlacementStep::*;
    let g = Graph::from_labeled_edges([("A", "B"), ("B", "C"), ("C", "D"), ("D", "A"), ("B", "D")])
        .unwrap();
    let steps = vec![
        FixPoint { vertex: "A".into(), x: 0.0, y: 0.0 },
        FixPoint { vertex: "B".into(), x: 1.0, y: 0.0 },
        PolarFrom { vertex: "C".into(), anchor: "B".into(), angle: Angle::Param("theta".into()) },
        CircleCircle { vertex: "D".into(), anchor_a: "A".into(), anchor_b: "C".into(), branch: Branch::Plus },
    ];
    let parameters = vec![Parameter { name: "theta".into(), default: PI / 2.0, lo: 0.0, hi: PI }];
    ConstructionPlan::new("four_bar", g, steps, parameters, ("B", "D")).unwrap()
}

pub fn plan_by_name(name: &str, variant: usize) -> Option<ConstructionPlan> {
    match name {
        "heawood" if variant < 16 => Some(heawood_plan(HeawoodBranches::variant(variant))),
        "four_bar" => Some(four_bar_plan()),
        _ => None,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub params: Vec<f64>,
    pub target_distance: Option<f64>,
    pub min_separation: Option<f64>,
    pub failure: Option<StepFailure>,
}

/// Adjacent executable samples along `axis` where `target_distance - 1`
/// changes sign. Endpoints differ only in the axis coordinate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Bracket {
    pub axis: usize,
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
    pub lo_value: f64,
    pub hi_value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub samples: Vec<Sample>,
    pub brackets: Vec<Bracket>,
}

fn min_separation(coords: &[[f64; 2]]) -> f64 {
    let mut s = f64::INFINITY;
    for i in 0..coords.len() {
        for j in i + 1..coords.len() {
            s = s.min((coords[i][0] - coords[j][0]).hypot(coords[i][1] - coords[j][1]));
        }
    }
    s
}

fn sample_at(plan: &ConstructionPlan, params: Vec<f64>) -> Sample {
    match execute(plan, &params) {
        Ok(e) => Sample {
            target_distance: Some(e.target_distance),
            min_separation: Some(min_separation(&e.coords)),
            failure: None,
            params,
        },
        Err(ExecuteError::Step(f)) => Sample { params, target_distance: None, min_separation: None, failure: Some(f) },
        Err(e) => panic!("sweep produced invalid parameters: {e}"),
    }
}

fn brackets_along(samples: &[Sample], axis: usize) -> Vec<Bracket> {
    let mut out = Vec::new();
    for w in samples.windows(2) {
        let (Some(a), Some(b)) = (w[0].target_distance, w[1].target_distance) else {
            continue;
        };
        let (fa, fb) = (a - 1.0, b - 1.0);
        if (fa < 0.0 && fb > 0.0) || (fa > 0.0 && fb < 0.0) {
            out.push(Bracket { axis, lo: w[0].params.clone(), hi: w[1].params.clone(), lo_value: fa, hi_value: fb });
        }
    }
    for s in samples {
        if s.target_distance == Some(1.0) {
            out.push(Bracket { axis, lo: s.params.clone(), hi: s.params.clone(), lo_value: 0.0, hi_value: 0.0 });
        }
    }
    out
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    // the last point is hi exactly, and rounding never leaves [lo, hi]
    (0..n)
        .map(|i| if i + 1 == n { hi } else { (lo + (hi - lo) * i as f64 / (n - 1) as f64).clamp(lo, hi) })
        .collect()
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SweepError {
    #[error("unknown axis `{0}`")]
    UnknownAxis(String),
    #[error("need at least 2 samples")]
    TooFewSamples,
    #[error("range [{0}, {1}] is outside the parameter range")]
    BadRange(f64, f64),
    #[error("expected {0} fixed parameter values")]
    ParamCount(usize),
}

fn check_axis(plan: &ConstructionPlan, axis: &str, range: (f64, f64), samples: usize) -> Result<usize, SweepError> {
    let i = plan.param_index(axis).ok_or_else(|| SweepError::UnknownAxis(axis.to_string()))?;
    if samples < 2 {
        return Err(SweepError::TooFewSamples);
    }
    let p = &plan.parameters[i];
    if !(range.0 <= range.1 && range.0 >= p.lo && range.1 <= p.hi) {
        return Err(SweepError::BadRange(range.0, range.1));
    }
    Ok(i)
}

/// Executes the plan at `samples` evenly spaced values of `axis`, other
/// parameters held at `fixed`.
pub fn sweep(
    plan: &ConstructionPlan,
    axis: &str,
    range: (f64, f64),
    samples: usize,
    fixed: &[f64],
) -> Result<SweepResult, SweepError> {
    let ai = check_axis(plan, axis, range, samples)?;
    if fixed.len() != plan.parameters.len() {
        return Err(SweepError::ParamCount(plan.parameters.len()));
    }
    let samples: Vec<Sample> = linspace(range.0, range.1, samples)
        .into_par_iter()
        .map(|t| {
            let mut p = fixed.to_vec();
            p[ai] = t;
            sample_at(plan, p)
        })
        .collect();
    let brackets = brackets_along(&samples, ai);
    Ok(SweepResult { samples, brackets })
}

/// Grid over two parameters, scanned as nested 1-D sweeps; brackets are
/// collected along both axes. Samples are ordered row by row (first axis
/// fastest).
pub fn sweep_grid(
    plan: &ConstructionPlan,
    axes: [(&str, (f64, f64), usize); 2],
    fixed: &[f64],
) -> Result<SweepResult, SweepError> {
    let i0 = check_axis(plan, axes[0].0, axes[0].1, axes[0].2)?;
    let i1 = check_axis(plan, axes[1].0, axes[1].1, axes[1].2)?;
    if fixed.len() != plan.parameters.len() {
        return Err(SweepError::ParamCount(plan.parameters.len()));
    }
    let (n0, n1) = (axes[0].2, axes[1].2);
    let v0 = linspace(axes[0].1 .0, axes[0].1 .1, n0);
    let v1 = linspace(axes[1].1 .0, axes[1].1 .1, n1);
    let rows: Vec<Vec<Sample>> = v1
        .par_iter()
        .map(|&b| {
            v0.iter()
                .map(|&a| {
                    let mut p = fixed.to_vec();
                    p[i0] = a;
                    p[i1] = b;
                    sample_at(plan, p)
                })
                .collect()
        })
        .collect();
    let mut brackets = Vec::new();
    for row in &rows {
        brackets.extend(brackets_along(row, i0));
    }
    for c in 0..n0 {
        let col: Vec<Sample> = rows.iter().map(|r| r[c].clone()).collect();
        brackets.extend(brackets_along(&col, i1).into_iter().filter(|b| b.lo != b.hi));
    }
    Ok(SweepResult { samples: rows.into_iter().flatten().collect(), brackets })
}

#[derive(Clone, Debug, PartialEq)]
pub struct BisectOutcome {
    pub params: Vec<f64>,
    pub execution: Execution,
    pub iterations: usize,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BisectError {
    #[error("bracket endpoints do not straddle the target ({0}, {1})")]
    NotABracket(f64, f64),
    #[error("step failure inside [{lo}, {hi}]: {failure}")]
    Invalidated { lo: f64, hi: f64, failure: StepFailure },
    #[error(transparent)]
    Execute(#[from] ExecuteError),
}

pub const BISECT_MAX_ITERATIONS: usize = 200;

/// Bisection on the bracket axis until `|d - 1| < tol` or the interval is
/// narrower than 1e-15.
pub fn bisect_bracket(plan: &ConstructionPlan, bracket: &Bracket, tol: f64) -> Result<BisectOutcome, BisectError> {
    let axis = bracket.axis;
    let eval = |t: f64| {
        let mut p = bracket.lo.clone();
        p[axis] = t;
        execute(plan, &p).map(|e| (p, e))
    };
    let (mut lo, mut hi) = (bracket.lo[axis], bracket.hi[axis]);
    let (p_lo, e_lo) = eval(lo)?;
    let f_lo = e_lo.target_distance - 1.0;
    if lo == hi || f_lo.abs() < tol {
        return Ok(BisectOutcome { params: p_lo, execution: e_lo, iterations: 0 });
    }
    let (_, e_hi) = eval(hi)?;
    let f_hi = e_hi.target_distance - 1.0;
    if f_lo * f_hi > 0.0 {
        return Err(BisectError::NotABracket(f_lo, f_hi));
    }
    let mut f_lo = f_lo;
    let mut best = (p_lo, e_lo);
    let mut iterations = 0;
    while iterations < BISECT_MAX_ITERATIONS && (hi - lo).abs() >= 1e-15 {
        iterations += 1;
        let mid = 0.5 * (lo + hi);
        let (p, e) = match eval(mid) {
            Ok(x) => x,
            Err(ExecuteError::Step(failure)) => return Err(BisectError::Invalidated { lo, hi, failure }),
            Err(e) => return Err(e.into()),
        };
        let f = e.target_distance - 1.0;
        let done = f.abs() < tol;
        if f_lo * f <= 0.0 {
            hi = mid;
        } else {
            lo = mid;
            f_lo = f;
        }
        best = (p, e);
        if done {
            break;
        }
    }
    Ok(BisectOutcome { params: best.0, execution: best.1, iterations })
}

/// A bisected configuration polished on the full graph (target edge
/// included) and measured. A candidate, not a certificate.
#[derive(Clone, Debug, PartialEq)]
pub struct Candidate {
    pub bisection: BisectOutcome,
    pub embedding: Embedding,
    pub verification: Verification,
}

pub fn candidate_from_bracket(plan: &ConstructionPlan, bracket: &Bracket, tol: f64) -> Result<Candidate, BisectError> {
    let bisection = bisect_bracket(plan, bracket, tol)?;
    let embedding = match embed::refine(&plan.graph, &bisection.execution.coords, false, 500) {
        Ok(e) => e,
        Err(f) => f.best,
    };
    let verification = embed::verify(&plan.graph, embedding.coords(), &VerifyTolerances::default())
        .expect("coordinate count");
    Ok(Candidate { bisection, embedding, verification })
}
