//! Structural predicates: girth, cycle intersections, degeneracy, the three
//! sparseness properties used for colorability, and dangerous edges.

use std::collections::{HashSet, VecDeque};

use rand::seq::index::sample;
use rand::Rng;

use crate::error::{Error, Result};
use crate::game::rng_from_seed;

use super::GraphView;

/// Length of a shortest cycle, `None` for forests.
pub fn girth(g: &GraphView) -> Option<usize> {
    let n = g.n();
    let mut best = usize::MAX;
    let mut dist = vec![usize::MAX; n];
    let mut parent = vec![usize::MAX; n];
    let mut queue = VecDeque::new();
    for s in 0..n {
        let mut touched = vec![s];
        dist[s] = 0;
        queue.push_back(s);
        'bfs: while let Some(v) = queue.pop_front() {
            if 2 * dist[v] + 1 >= best {
                break;
            }
            for &w in g.neighbors(v) {
                let w = w as usize;
                if dist[w] == usize::MAX {
                    dist[w] = dist[v] + 1;
                    parent[w] = v;
                    touched.push(w);
                    queue.push_back(w);
                } else if parent[v] != w {
                    best = best.min(dist[v] + dist[w] + 1);
                    if best == 3 {
                        break 'bfs;
                    }
                }
            }
        }
        queue.clear();
        for v in touched {
            dist[v] = usize::MAX;
            parent[v] = usize::MAX;
        }
    }
    (best != usize::MAX).then_some(best)
}

pub fn is_linear_forest(g: &GraphView) -> bool {
    g.max_degree() <= 2 && g.is_forest()
}

/// Smallest d such that every subgraph has a vertex of degree at most d.
pub fn degeneracy(g: &GraphView) -> usize {
    let n = g.n();
    let mut deg: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let maxd = deg.iter().copied().max().unwrap_or(0);
    let mut buckets: Vec<Vec<usize>> = vec![Vec::new(); maxd + 1];
    for v in 0..n {
        buckets[deg[v]].push(v);
    }
    let mut removed = vec![false; n];
    let mut best = 0;
    let mut d: usize = 0;
    for _ in 0..n {
        d = d.saturating_sub(1);
        let v = loop {
            match buckets[d].pop() {
                Some(v) if !removed[v] && deg[v] == d => break v,
                Some(_) => continue,
                None => d += 1,
            }
        };
        best = best.max(d);
        removed[v] = true;
        for &w in g.neighbors(v) {
            let w = w as usize;
            if !removed[w] {
                deg[w] -= 1;
                buckets[deg[w]].push(w);
            }
        }
    }
    best
}

/// Blocks (biconnected components) as (vertex set, edge count).
fn blocks(g: &GraphView) -> Vec<(Vec<usize>, usize)> {
    let n = g.n();
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut time = 0;
    let mut edge_stack: Vec<(usize, usize)> = Vec::new();
    let mut out = Vec::new();
    for root in 0..n {
        if disc[root] != usize::MAX {
            continue;
        }
        disc[root] = time;
        low[root] = time;
        time += 1;
        // (vertex, parent, next neighbour index)
        let mut stack = vec![(root, usize::MAX, 0usize)];
        while let Some(&mut (v, p, ref mut i)) = stack.last_mut() {
            if let Some(&w) = g.neighbors(v).get(*i) {
                *i += 1;
                let w = w as usize;
                if w == p {
                    continue;
                }
                if disc[w] == usize::MAX {
                    edge_stack.push((v, w));
                    disc[w] = time;
                    low[w] = time;
                    time += 1;
                    stack.push((w, v, 0));
                } else if disc[w] < disc[v] {
                    edge_stack.push((v, w));
                    low[v] = low[v].min(disc[w]);
                }
            } else {
                stack.pop();
                if p != usize::MAX {
                    low[p] = low[p].min(low[v]);
                    if low[v] >= disc[p] {
                        let mut verts = HashSet::new();
                        let mut edges = 0;
                        while let Some((a, b)) = edge_stack.pop() {
                            verts.insert(a);
                            verts.insert(b);
                            edges += 1;
                            if (a, b) == (p, v) {
                                break;
                            }
                        }
                        out.push((verts.into_iter().collect(), edges));
                    }
                }
            }
        }
    }
    out
}

/// True iff every two cycles of `g` are vertex-disjoint: every block is an
/// edge or a cycle, and no vertex lies on two cyclic blocks.
pub fn no_intersecting_cycles(g: &GraphView) -> bool {
    let mut on_cycle = vec![false; g.n()];
    for (verts, edges) in blocks(g) {
        if edges == 1 {
            continue;
        }
        if edges != verts.len() {
            return false;
        }
        for v in verts {
            if on_cycle[v] {
                return false;
            }
            on_cycle[v] = true;
        }
    }
    true
}

/// Free edges whose addition to `g` would close a cycle of length 3 or 4.
pub fn dangerous_edges(g: &GraphView, free: &[(usize, usize)]) -> Vec<(usize, usize)> {
    free.iter().copied().filter(|&(u, v)| is_dangerous(g, u, v)).collect()
}

pub(crate) fn is_dangerous(g: &GraphView, u: usize, v: usize) -> bool {
    let nu = g.neighbors(u);
    let nv = g.neighbors(v);
    if nu.iter().any(|w| nv.binary_search(w).is_ok()) {
        return true;
    }
    nu.iter().any(|&x| {
        let x = x as usize;
        x != v && g.neighbors(x).iter().any(|&y| y as usize != u && y as usize != x && nv.binary_search(&y).is_ok())
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PropertyMode {
    /// All vertex subsets; needs n <= 20.
    Exhaustive,
    /// Random subsets drawn from a seeded generator.
    Sampled { samples: usize, seed: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ColorabilityReport {
    /// Cycles of length at most 4 are pairwise vertex-disjoint.
    pub a: bool,
    /// e(S) <= |S| k ln k / 16 for every checked S.
    pub b: bool,
    /// e(S) >= |S| k/6 implies e(S, V minus S) < |S| k ln k / 8 for every checked S.
    pub c: bool,
    /// False when (b) and (c) were only sampled.
    pub exhaustive: bool,
}

fn short_cycles(g: &GraphView) -> Vec<Vec<usize>> {
    let n = g.n();
    let mut out = Vec::new();
    for u in 0..n {
        for &v in g.neighbors(u).iter().filter(|&&v| v as usize > u) {
            for &w in g.neighbors(v as usize).iter().filter(|&&w| w > v) {
                if g.has_edge(u, w as usize) {
                    out.push(vec![u, v as usize, w as usize]);
                }
            }
        }
    }
    let mut seen = HashSet::new();
    for a in 0..n {
        for c in a + 1..n {
            let common: Vec<usize> = g
                .neighbors(a)
                .iter()
                .filter(|w| g.neighbors(c).binary_search(w).is_ok())
                .map(|&w| w as usize)
                .collect();
            for (i, &b) in common.iter().enumerate() {
                for &d in &common[i + 1..] {
                    let mut key = [a, b, c, d];
                    key.sort_unstable();
                    // the same 4-cycle shows up through its other diagonal
                    let diag = (a.min(c), a.max(c), b.min(d), b.max(d));
                    let canon = if (diag.0, diag.1) < (diag.2, diag.3) { diag } else { (diag.2, diag.3, diag.0, diag.1) };
                    if seen.insert(canon) {
                        out.push(vec![a, b, c, d]);
                    }
                }
            }
        }
    }
    out
}

pub fn check_colorability_properties(
    g: &GraphView,
    n: usize,
    k: usize,
    mode: PropertyMode,
) -> Result<ColorabilityReport> {
    if g.n() != n {
        return Err(Error::Parameter(format!("graph has {} vertices, expected {n}", g.n())));
    }
    let mut count = vec![0u32; n];
    for c in short_cycles(g) {
        for v in c {
            count[v] += 1;
        }
    }
    let a = count.iter().all(|&c| c <= 1);
    let kf = k as f64;
    let klk = kf * kf.ln();
    let mut b = true;
    let mut c = true;
    let mut check = |size: usize, inside: usize, leaving: usize| {
        let s = size as f64;
        if inside as f64 > s * klk / 16.0 {
            b = false;
        }
        if inside as f64 >= s * kf / 6.0 && leaving as f64 >= s * klk / 8.0 {
            c = false;
        }
    };
    match mode {
        PropertyMode::Exhaustive => {
            if n > 20 {
                return Err(Error::Cap(format!("exhaustive subset sweep needs n <= 20, got {n}")));
            }
            let adj: Vec<u32> = (0..n).map(|v| g.neighbors(v).iter().fold(0u32, |m, &w| m | 1 << w)).collect();
            let mut set = 0u32;
            let mut inside = 0usize;
            let mut deg_sum = 0usize;
            // Gray code walk over all non-empty subsets
            for i in 1u32..(1u32 << n) {
                let v = i.trailing_zeros() as usize;
                let links = (adj[v] & set).count_ones() as usize;
                if set >> v & 1 == 1 {
                    set &= !(1 << v);
                    inside -= links;
                    deg_sum -= g.degree(v);
                } else {
                    set |= 1 << v;
                    inside += links;
                    deg_sum += g.degree(v);
                }
                check(set.count_ones() as usize, inside, deg_sum - 2 * inside);
            }
        }
        PropertyMode::Sampled { samples, seed } => {
            let mut rng = rng_from_seed(seed, 7);
            let mut member = vec![false; n];
            for _ in 0..samples {
                if n == 0 {
                    break;
                }
                let size = rng.random_range(1..=n);
                let chosen = sample(&mut rng, n, size);
                for v in chosen.iter() {
                    member[v] = true;
                }
                let mut inside2 = 0;
                let mut deg_sum = 0;
                for v in chosen.iter() {
                    deg_sum += g.degree(v);
                    inside2 += g.neighbors(v).iter().filter(|&&w| member[w as usize]).count();
                }
                let inside = inside2 / 2;
                check(size, inside, deg_sum - inside2);
                for v in chosen.iter() {
                    member[v] = false;
                }
            }
        }
    }
    Ok(ColorabilityReport { a, b, c, exhaustive: matches!(mode, PropertyMode::Exhaustive) })
}
