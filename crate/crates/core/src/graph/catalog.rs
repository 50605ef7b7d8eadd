use super::{Graph, GraphError};

pub const CATALOG_NAMES: &[&str] = &[
    "k2",
    "k3",
    "p3",
    "k4",
    "k4_minus_e",
    "k2_3",
    "moser_spindle",
    "petersen",
    "heawood",
    "heawood_minus_edge",
    "heawood_minus_1a",
    "mobius_ladder_m4_subdivided",
];

/// Heawood cycle order; consecutive entries (cyclically) are adjacent.
const HEAWOOD_CYCLE: [&str; 14] = [
    "1", "a", "2", "b", "3", "c", "4", "d", "5", "e", "6", "f", "7", "g",
];

const HEAWOOD_CHORDS: [(&str, &str); 7] = [
    ("1", "c"),
    ("2", "d"),
    ("3", "e"),
    ("4", "f"),
    ("5", "g"),
    ("6", "a"),
    ("7", "b"),
];

fn labeled(labels: &[&str], edges: &[(&str, &str)]) -> Graph {
    let idx = |s: &str| labels.iter().position(|l| *l == s).expect("catalog label");
    Graph::new(
        labels.iter().copied(),
        edges.iter().map(|&(a, b)| (idx(a), idx(b))),
    )
    .expect("catalog graph")
}

fn heawood() -> Graph {
    let mut edges: Vec<(&str, &str)> = (0..14)
        .map(|i| (HEAWOOD_CYCLE[i], HEAWOOD_CYCLE[(i + 1) % 14]))
        .collect();
    edges.extend_from_slice(&HEAWOOD_CHORDS);
    labeled(&HEAWOOD_CYCLE, &edges)
}

/// C8 on `r0..r7` with each diameter `r_i r_{i+4}` subdivided by `m_i`.
fn subdivided_mobius_ladder() -> Graph {
    let mut labels: Vec<String> = (0..8).map(|i| format!("r{i}")).collect();
    labels.extend((0..4).map(|i| format!("m{i}")));
    let mut edges: Vec<(usize, usize)> = (0..8).map(|i| (i, (i + 1) % 8)).collect();
    for i in 0..4 {
        edges.push((i, 8 + i));
        edges.push((8 + i, i + 4));
    }
    Graph::new(labels, edges).expect("catalog graph")
}

/// Named graphs with the labelings used in the figures they come from.
pub fn catalog(name: &str) -> Result<Graph, GraphError> {
    let g = match name {
        "k2" => labeled(&["1", "2"], &[("1", "2")]),
        "k3" => labeled(&["1", "2", "3"], &[("1", "2"), ("1", "3"), ("2", "3")]),
        "p3" => labeled(&["1", "2", "3"], &[("1", "2"), ("2", "3")]),
        "k4" => labeled(
            &["1", "2", "3", "4"],
            &[("1", "2"), ("1", "3"), ("1", "4"), ("2", "3"), ("2", "4"), ("3", "4")],
        ),
        "k4_minus_e" => labeled(
            &["1", "2", "3", "4"],
            &[("1", "2"), ("1", "3"), ("2", "3"), ("2", "4"), ("3", "4")],
        ),
        "k2_3" => labeled(
            &["1", "2", "3", "4", "5"],
            &[("1", "3"), ("1", "4"), ("1", "5"), ("2", "3"), ("2", "4"), ("2", "5")],
        ),
        "moser_spindle" => labeled(
            &["1", "2", "3", "4", "5", "6", "7"],
            &[
                ("1", "2"),
                ("1", "3"),
                ("1", "4"),
                ("1", "5"),
                ("2", "4"),
                ("3", "5"),
                ("2", "6"),
                ("4", "6"),
                ("3", "7"),
                ("5", "7"),
                ("6", "7"),
            ],
        ),
        "petersen" => labeled(
            &["1", "2", "3", "4", "5", "a", "b", "c", "d", "e"],
            &[
                ("1", "2"),
                ("2", "3"),
                ("3", "4"),
                ("4", "5"),
                ("5", "1"),
                ("a", "c"),
                ("b", "d"),
                ("c", "e"),
                ("d", "a"),
                ("e", "b"),
                ("1", "a"),
                ("2", "b"),
                ("3", "c"),
                ("4", "d"),
                ("5", "e"),
            ],
        ),
        "heawood" => heawood(),
        "heawood_minus_edge" => heawood().delete_edge("1", "a")?,
        "heawood_minus_1a" => heawood().delete_vertex("1")?.delete_vertex("a")?,
        "mobius_ladder_m4_subdivided" => subdivided_mobius_ladder(),
        other => return Err(GraphError::UnknownCatalog(other.to_string())),
    };
    Ok(g)
}
