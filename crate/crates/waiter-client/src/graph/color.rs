//! Colorings, cliques and independent sets.

use crate::error::{Error, Result};

use super::GraphView;

/// Largest graph handled by the exact routines.
pub const EXACT_CAP: usize = 60;

/// A value that is exact, or only a bound when `exact` is false.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Bounded<T> {
    pub value: T,
    pub exact: bool,
}

fn masks(g: &GraphView) -> Vec<u64> {
    (0..g.n()).map(|v| g.neighbors(v).iter().fold(0u64, |m, &w| m | 1 << w)).collect()
}

/// DSATUR greedy coloring; returns a color per vertex.
pub fn dsatur_coloring(g: &GraphView) -> Vec<usize> {
    let n = g.n();
    let mut color = vec![usize::MAX; n];
    let mut seen: Vec<Vec<bool>> = vec![Vec::new(); n];
    let mut sat = vec![0usize; n];
    for _ in 0..n {
        let v = (0..n)
            .filter(|&v| color[v] == usize::MAX)
            .max_by_key(|&v| (sat[v], g.degree(v), std::cmp::Reverse(v)))
            .expect("uncolored vertex");
        let c = (0..).find(|&c| !seen[v].get(c).copied().unwrap_or(false)).expect("free color");
        color[v] = c;
        for &w in g.neighbors(v) {
            let w = w as usize;
            if color[w] != usize::MAX {
                continue;
            }
            if seen[w].len() <= c {
                seen[w].resize(c + 1, false);
            }
            if !seen[w][c] {
                seen[w][c] = true;
                sat[w] += 1;
            }
        }
    }
    color
}

fn color_count(colors: &[usize]) -> usize {
    colors.iter().max().map_or(0, |&m| m + 1)
}

fn exact_k_colorable(adj: &[u64], k: usize) -> bool {
    let n = adj.len();
    if n == 0 {
        return true;
    }
    if k == 0 {
        return false;
    }
    let mut classes = vec![0u64; k];
    let mut colored = 0u64;
    backtrack(adj, k, &mut classes, &mut colored, 0, n)
}

fn backtrack(adj: &[u64], k: usize, classes: &mut [u64], colored: &mut u64, used: usize, n: usize) -> bool {
    if colored.count_ones() as usize == n {
        return true;
    }
    // most saturated uncolored vertex
    let mut best = usize::MAX;
    let mut best_key = (0usize, 0u32);
    for v in 0..n {
        if *colored >> v & 1 == 1 {
            continue;
        }
        let sat = classes[..used].iter().filter(|&&c| c & adj[v] != 0).count();
        let key = (sat, (adj[v] & !*colored).count_ones());
        if best == usize::MAX || key > best_key {
            best = v;
            best_key = key;
        }
    }
    let v = best;
    if best_key.0 >= k {
        return false;
    }
    for c in 0..(used + 1).min(k) {
        if classes[c] & adj[v] != 0 {
            continue;
        }
        classes[c] |= 1 << v;
        *colored |= 1 << v;
        if backtrack(adj, k, classes, colored, used.max(c + 1), n) {
            return true;
        }
        classes[c] &= !(1 << v);
        *colored &= !(1 << v);
    }
    false
}

/// Whether `g` has a proper k-coloring. Exact up to [`EXACT_CAP`] vertices;
/// above it only a DSATUR success can certify colorability.
pub fn is_k_colorable(g: &GraphView, k: usize) -> Result<bool> {
    if color_count(&dsatur_coloring(g)) <= k {
        return Ok(true);
    }
    if g.n() > EXACT_CAP {
        return Err(Error::Cap(format!("exact coloring needs at most {EXACT_CAP} vertices, got {}", g.n())));
    }
    Ok(exact_k_colorable(&masks(g), k))
}

/// χ(g): exact up to [`EXACT_CAP`] vertices, a DSATUR upper bound beyond.
pub fn chromatic_number(g: &GraphView) -> Bounded<usize> {
    let upper = color_count(&dsatur_coloring(g));
    if g.n() > EXACT_CAP {
        return Bounded { value: upper, exact: false };
    }
    let adj = masks(g);
    let lower = max_clique(&adj).max(usize::from(g.n() > 0));
    let value = (lower..upper).find(|&k| exact_k_colorable(&adj, k)).unwrap_or(upper);
    Bounded { value, exact: true }
}

fn max_clique(adj: &[u64]) -> usize {
    let n = adj.len();
    let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut best = 0;
    expand(adj, 0, all, &mut best);
    best
}

fn expand(adj: &[u64], size: usize, mut cand: u64, best: &mut usize) {
    if cand == 0 {
        *best = (*best).max(size);
        return;
    }
    while cand != 0 {
        if size + cand.count_ones() as usize <= *best {
            return;
        }
        let v = cand.trailing_zeros() as usize;
        cand &= cand - 1;
        expand(adj, size + 1, cand & adj[v], best);
    }
}

fn greedy_clique(g: &GraphView) -> usize {
    let mut order: Vec<usize> = (0..g.n()).collect();
    order.sort_by_key(|&v| std::cmp::Reverse(g.degree(v)));
    let mut clique: Vec<usize> = Vec::new();
    for v in order {
        if clique.iter().all(|&u| g.has_edge(u, v)) {
            clique.push(v);
        }
    }
    clique.len()
}

/// ω(g): exact up to [`EXACT_CAP`] vertices, a greedy lower bound beyond.
pub fn clique_number(g: &GraphView) -> Bounded<usize> {
    if g.n() > EXACT_CAP {
        return Bounded { value: greedy_clique(g), exact: false };
    }
    Bounded { value: max_clique(&masks(g)), exact: true }
}

/// α(g) = ω(complement of g).
pub fn independence_number(g: &GraphView) -> Bounded<usize> {
    if g.n() > EXACT_CAP {
        // greedy minimum-degree independent set
        let mut order: Vec<usize> = (0..g.n()).collect();
        order.sort_by_key(|&v| g.degree(v));
        let mut taken = vec![false; g.n()];
        let mut blocked = vec![false; g.n()];
        for v in order {
            if !blocked[v] {
                taken[v] = true;
                for &w in g.neighbors(v) {
                    blocked[w as usize] = true;
                }
            }
        }
        return Bounded { value: taken.iter().filter(|&&t| t).count(), exact: false };
    }
    clique_number(&g.complement())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chromatic_examples() {
        assert_eq!(chromatic_number(&GraphView::complete(5)).value, 5);
        assert_eq!(chromatic_number(&GraphView::cycle(5)).value, 3);
        assert_eq!(chromatic_number(&GraphView::cycle(6)).value, 2);
        assert_eq!(chromatic_number(&GraphView::petersen()), Bounded { value: 3, exact: true });
        assert_eq!(chromatic_number(&GraphView::empty(3)).value, 1);
        assert_eq!(chromatic_number(&GraphView::empty(0)).value, 0);
    }

    #[test]
    fn independence_and_clique_examples() {
        assert_eq!(independence_number(&GraphView::complete(5)).value, 1);
        assert_eq!(independence_number(&GraphView::cycle(5)).value, 2);
        assert_eq!(independence_number(&GraphView::petersen()).value, 4);
        assert_eq!(clique_number(&GraphView::petersen()).value, 2);
    }

    #[test]
    fn colorability() {
        assert!(is_k_colorable(&GraphView::petersen(), 3).unwrap());
        assert!(!is_k_colorable(&GraphView::petersen(), 2).unwrap());
        let big = GraphView::complete(70);
        assert!(is_k_colorable(&big, 70).unwrap());
        assert!(is_k_colorable(&big, 69).is_err());
    }

    #[test]
    fn dsatur_is_proper() {
        let g = GraphView::petersen();
        let c = dsatur_coloring(&g);
        assert!(g.edges().all(|(u, v)| c[u] != c[v]));
    }
}
