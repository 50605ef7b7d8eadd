use proptest::prelude::*;

use unitdist::catalog;
use unitdist::construct::{execute, heawood_plan, HeawoodBranches};
use unitdist::embed::{
    best_fit_scale, refine, rigidity_matrix, rigidity_report, solve, verify, Embedding, SolveOptions,
    VerifyTolerances,
};
use unitdist::graph::Graph;

fn coords_for(g: &Graph, table: &[(&str, f64, f64)]) -> Vec<[f64; 2]> {
    g.labels()
        .iter()
        .map(|l| {
            let &(_, x, y) = table.iter().find(|t| t.0 == l).unwrap();
            [x, y]
        })
        .collect()
}

const MOSER_FIGURE: [(&str, f64, f64); 7] = [
    ("1", 0.0, 1.0),
    ("2", -0.728714, 0.32),
    ("3", -0.228714, 0.0),
    ("4", 0.228714, 0.0),
    ("5", 0.728714, 0.32),
    ("6", -0.5, -0.68),
    ("7", 0.5, -0.68),
];

const PETERSEN_FIGURE: [(&str, f64, f64); 10] = [
    ("1", 0.0, 0.911),
    ("2", 0.866, 0.282),
    ("3", 0.534, -0.737),
    ("4", -0.534, -0.737),
    ("5", -0.866, 0.282),
    ("a", 0.563, 0.0),
    ("b", 0.174, -0.536),
    ("c", -0.455, -0.331),
    ("d", -0.455, 0.331),
    ("e", 0.174, 0.536),
];

/// Same pairwise distances, so equal up to a rigid motion.
fn congruent(a: &[[f64; 2]], b: &[[f64; 2]], tol: f64) -> bool {
    let d = |c: &[[f64; 2]], i: usize, j: usize| (c[i][0] - c[j][0]).hypot(c[i][1] - c[j][1]);
    (0..a.len()).all(|i| (0..a.len()).all(|j| (d(a, i, j) - d(b, i, j)).abs() < tol))
}

#[test]
fn k2_is_the_gauge() {
    let g = catalog("k2").unwrap();
    let e = solve(&g, &SolveOptions::default()).unwrap();
    assert_eq!(e.coords(), &[[0.0, 0.0], [1.0, 0.0]]);
}

#[test]
fn k4_minus_e_matches_table() {
    let g = catalog("k4_minus_e").unwrap();
    let e = solve(&g, &SolveOptions::default()).unwrap();
    let h = 3f64.sqrt() / 2.0;
    let table = [[0.0, 0.0], [1.0, 0.0], [0.5, h], [1.5, h]];
    assert!(congruent(e.coords(), &table, 1e-6), "{:?}", e.coords());
    let v = verify(&g, &table, &VerifyTolerances::default()).unwrap();
    assert!(v.pass && v.max_edge_deviation < 1e-15);
}

#[test]
fn solve_is_deterministic() {
    let g = catalog("moser_spindle").unwrap();
    let opts = SolveOptions { seed: 7, ..SolveOptions::default() };
    let a = solve(&g, &opts).unwrap();
    let b = solve(&g, &opts).unwrap();
    assert_eq!(a.coords(), b.coords());
    assert!(verify(&g, a.coords(), &VerifyTolerances::default()).unwrap().pass);
}

#[test]
fn k2_3_collapses() {
    let g = catalog("k2_3").unwrap();
    let f = solve(&g, &SolveOptions::default()).unwrap_err();
    assert_eq!(f.restarts_used, 200);
    // Two-circle argument: two points have at most two common unit
    // neighbours, so three distinct ones cannot exist.
    let best = f.best.expect("best iterate kept");
    assert!(best.min_separation() < 1e-3 || best.residual() >= 1e-12);
}

#[test]
fn k4_never_solves() {
    let g = catalog("k4").unwrap();
    for seed in 0..5 {
        let f = solve(&g, &SolveOptions { seed, restarts: 40, ..SolveOptions::default() }).unwrap_err();
        assert!(f.best_residual > 1e-9);
    }
}

#[test]
fn zero_coords_fail_verify() {
    let g = catalog("k2").unwrap();
    let v = verify(&g, &[[0.0, 0.0], [0.0, 0.0]], &VerifyTolerances::default()).unwrap();
    assert!(!v.pass);
    assert_eq!(v.max_edge_deviation, 1.0);
}

#[test]
fn moser_refines_from_figure() {
    let g = catalog("moser_spindle").unwrap();
    let c = coords_for(&g, &MOSER_FIGURE);
    let e = refine(&g, &c, true, 500).unwrap();
    assert!(e.residual() < 1e-12);
    assert!(e.max_edge_deviation() < 1e-12 && e.min_separation() > 0.1);
}

#[test]
fn petersen_figure_is_scaled() {
    let g = catalog("petersen").unwrap();
    let c = coords_for(&g, &PETERSEN_FIGURE);
    assert!(!verify(&g, &c, &VerifyTolerances::default()).unwrap().pass);
    // mean edge length of the drawing, as an independent estimate of the scale
    let mean: f64 = g
        .edges()
        .iter()
        .map(|&(u, v)| (c[u][0] - c[v][0]).hypot(c[u][1] - c[v][1]))
        .sum::<f64>()
        / g.edge_count() as f64;
    let s = best_fit_scale(&g, &c);
    assert!((s - 1.0 / mean).abs() < 0.02, "{s} vs {}", 1.0 / mean);
    // the drawing is enlarged about 1.07 times
    assert!((1.0 / s - 1.07).abs() < 0.005);
    let e = refine(&g, &c, true, 500).unwrap();
    assert!(e.max_edge_deviation() < 1e-12 && e.min_separation() > 0.1);
}

#[test]
fn exact_solution_is_a_fixed_point() {
    let g = catalog("k4_minus_e").unwrap();
    let h = 3f64.sqrt() / 2.0;
    let c = vec![[0.0, 0.0], [1.0, 0.0], [0.5, h], [1.5, h]];
    let e = refine(&g, &c, false, 100).unwrap();
    for (a, b) in e.coords().iter().zip(&c) {
        assert!((a[0] - b[0]).abs() < 1e-15 && (a[1] - b[1]).abs() < 1e-15);
    }
}

#[test]
fn heawood_minus_edge_from_plan_and_by_search() {
    let plan = heawood_plan(HeawoodBranches::default());
    let ex = execute(&plan, &plan.defaults()).unwrap();
    let g = catalog("heawood_minus_edge").unwrap();
    // the plan graph has the same labels; map coordinates across by label
    let c: Vec<[f64; 2]> = g.labels().iter().map(|l| ex.coords[plan.graph.index_of(l).unwrap()]).collect();
    let v = verify(&g, &c, &VerifyTolerances::default()).unwrap();
    assert!(v.pass && v.max_edge_deviation < 1e-12, "{v:?}");

    let e = solve(&g, &SolveOptions::default()).unwrap();
    assert!(e.max_edge_deviation() < 1e-9 && e.min_separation() > 1e-3);
    let r = rigidity_report(&g, &e).unwrap();
    assert!(r.flex_count >= 1);
}

#[test]
fn rigidity_examples() {
    let k3 = catalog("k3").unwrap();
    let h = 3f64.sqrt() / 2.0;
    let e = Embedding::new(&k3, vec![[0.0, 0.0], [1.0, 0.0], [0.5, h]]).unwrap();
    let r = rigidity_report(&k3, &e).unwrap();
    assert_eq!((r.jacobian_rank, r.flex_count, r.rigid), (3, 0, true));
    let p3 = catalog("p3").unwrap();
    let e = Embedding::new(&p3, vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0]]).unwrap();
    let r = rigidity_report(&p3, &e).unwrap();
    assert_eq!((r.jacobian_rank, r.flex_count), (2, 1));
    let bad = Embedding::new(&p3, vec![[0.0, 0.0], [2.0, 0.0], [1.0, 1.0]]).unwrap();
    assert!(rigidity_report(&p3, &bad).is_err());
}

fn rotate(c: &[[f64; 2]], th: f64, t: [f64; 2]) -> Vec<[f64; 2]> {
    let (s, co) = th.sin_cos();
    c.iter().map(|p| [co * p[0] - s * p[1] + t[0], s * p[0] + co * p[1] + t[1]]).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn jacobian_matches_finite_differences(
        pts in proptest::collection::vec((-2.0f64..2.0, -2.0f64..2.0), 7),
    ) {
        let g = catalog("moser_spindle").unwrap();
        let c: Vec<[f64; 2]> = pts.iter().map(|&(x, y)| [x, y]).collect();
        let n = g.n();
        let jac = rigidity_matrix(&g, &c);
        let q = |c: &[[f64; 2]], u: usize, v: usize| (c[u][0] - c[v][0]).powi(2) + (c[u][1] - c[v][1]).powi(2);
        let h = 1e-6;
        for (row, &(u, v)) in g.edges().iter().enumerate() {
            for col in 0..2 * n {
                let mut cp = c.clone();
                let mut cm = c.clone();
                cp[col / 2][col % 2] += h;
                cm[col / 2][col % 2] -= h;
                let fd = (q(&cp, u, v) - q(&cm, u, v)) / (2.0 * h);
                let an = jac[row * 2 * n + col];
                prop_assert!((fd - an).abs() <= 1e-6 * an.abs().max(1.0), "row {row} col {col}: {fd} vs {an}");
            }
        }
    }

    #[test]
    fn verify_is_gauge_invariant(th in 0.0f64..std::f64::consts::TAU, tx in -50.0f64..50.0, ty in -50.0f64..50.0) {
        let g = catalog("moser_spindle").unwrap();
        let e = refine(&g, &coords_for(&g, &MOSER_FIGURE), true, 500).unwrap();
        let tol = VerifyTolerances::default();
        let a = verify(&g, e.coords(), &tol).unwrap();
        let b = verify(&g, &rotate(e.coords(), th, [tx, ty]), &tol).unwrap();
        prop_assert!((a.max_edge_deviation - b.max_edge_deviation).abs() < 1e-12);
        prop_assert!((a.min_separation - b.min_separation).abs() < 1e-12);
    }
}
