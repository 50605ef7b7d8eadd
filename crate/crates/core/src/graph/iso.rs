use std::collections::BTreeMap;

use super::Graph;

const MAX_VERTICES: usize = 20;

/// Color refinement run on both graphs with a shared palette, so that equal
/// colors are comparable across graphs. Returns `None` if the color histograms
/// diverge, which rules out an isomorphism.
fn refine(a: &[Vec<usize>], b: &[Vec<usize>]) -> Option<(Vec<usize>, Vec<usize>)> {
    let mut ca: Vec<usize> = a.iter().map(Vec::len).collect();
    let mut cb: Vec<usize> = b.iter().map(Vec::len).collect();
    let mut classes = usize::MAX;
    loop {
        let sig = |adj: &[Vec<usize>], col: &[usize], v: usize| {
            let mut n: Vec<usize> = adj[v].iter().map(|&w| col[w]).collect();
            n.sort_unstable();
            (col[v], n)
        };
        let sa: Vec<_> = (0..a.len()).map(|v| sig(a, &ca, v)).collect();
        let sb: Vec<_> = (0..b.len()).map(|v| sig(b, &cb, v)).collect();
        let mut palette = BTreeMap::new();
        for s in sa.iter().chain(sb.iter()) {
            let next = palette.len();
            palette.entry(s.clone()).or_insert(next);
        }
        // BTreeMap order makes the palette independent of vertex numbering.
        for (i, v) in palette.values_mut().enumerate() {
            *v = i;
        }
        ca = sa.iter().map(|s| palette[s]).collect();
        cb = sb.iter().map(|s| palette[s]).collect();
        let mut ha = ca.clone();
        let mut hb = cb.clone();
        ha.sort_unstable();
        hb.sort_unstable();
        if ha != hb {
            return None;
        }
        if palette.len() == classes {
            return Some((ca, cb));
        }
        classes = palette.len();
    }
}

/// Exact isomorphism test for small graphs (n ≤ 20) by refinement plus
/// backtracking. Larger inputs panic.
pub fn isomorphic(g1: &Graph, g2: &Graph) -> bool {
    if g1.n() != g2.n() || g1.edge_count() != g2.edge_count() {
        return false;
    }
    assert!(g1.n() <= MAX_VERTICES, "isomorphism test limited to {MAX_VERTICES} vertices");
    if g1.degree_sequence() != g2.degree_sequence() {
        return false;
    }
    let (a, b) = (g1.adjacency(), g2.adjacency());
    let Some((ca, cb)) = refine(&a, &b) else {
        return false;
    };
    let n = g1.n();
    let mut am = vec![vec![false; n]; n];
    let mut bm = vec![vec![false; n]; n];
    for &(u, v) in g1.edges() {
        am[u][v] = true;
        am[v][u] = true;
    }
    for &(u, v) in g2.edges() {
        bm[u][v] = true;
        bm[v][u] = true;
    }
    // Map vertices of g1 in an order that keeps the partial map connected:
    // rarest color first, then BFS-like growth.
    let mut order: Vec<usize> = Vec::with_capacity(n);
    let mut placed = vec![false; n];
    let class_size = |c: usize| ca.iter().filter(|&&x| x == c).count();
    while order.len() < n {
        let next = (0..n)
            .filter(|&v| !placed[v])
            .max_by_key(|&v| {
                let linked = order.iter().filter(|&&u| am[u][v]).count();
                (linked, std::cmp::Reverse(class_size(ca[v])), std::cmp::Reverse(v))
            })
            .unwrap();
        placed[next] = true;
        order.push(next);
    }
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    extend(0, &order, &ca, &cb, &am, &bm, &mut map, &mut used)
}

#[allow(clippy::too_many_arguments)]
fn extend(
    depth: usize,
    order: &[usize],
    ca: &[usize],
    cb: &[usize],
    am: &[Vec<bool>],
    bm: &[Vec<bool>],
    map: &mut [usize],
    used: &mut [bool],
) -> bool {
    if depth == order.len() {
        return true;
    }
    let v = order[depth];
    for w in 0..cb.len() {
        if used[w] || cb[w] != ca[v] {
            continue;
        }
        let consistent = order[..depth].iter().all(|&u| am[u][v] == bm[map[u]][w]);
        if !consistent {
            continue;
        }
        map[v] = w;
        used[w] = true;
        if extend(depth + 1, order, ca, cb, am, bm, map, used) {
            return true;
        }
        used[w] = false;
        map[v] = usize::MAX;
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::catalog;

    #[test]
    fn k4_vs_k2_3() {
        assert!(!isomorphic(&catalog("k4").unwrap(), &catalog("k2_3").unwrap()));
    }

    #[test]
    fn k4_minus_edge() {
        let g = catalog("k4").unwrap().delete_edge("1", "4").unwrap();
        assert!(isomorphic(&g, &catalog("k4_minus_e").unwrap()));
    }

    #[test]
    fn same_degrees_not_isomorphic() {
        // C6 versus two disjoint triangles: both 2-regular on 6 vertices.
        let c6 = Graph::new(
            (0..6).map(|i| i.to_string()),
            (0..6).map(|i| (i, (i + 1) % 6)),
        )
        .unwrap();
        let tt = Graph::new(
            (0..6).map(|i| i.to_string()),
            [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)],
        )
        .unwrap();
        assert!(!isomorphic(&c6, &tt));
    }

    #[test]
    fn heawood_minus_1a_is_subdivided_ladder() {
        assert!(isomorphic(
            &catalog("heawood_minus_1a").unwrap(),
            &catalog("mobius_ladder_m4_subdivided").unwrap()
        ));
    }

    #[test]
    fn different_sizes() {
        assert!(!isomorphic(
            &catalog("petersen").unwrap(),
            &catalog("moser_spindle").unwrap()
        ));
    }
}
