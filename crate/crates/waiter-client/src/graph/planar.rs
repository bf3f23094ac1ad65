//! Left-right planarity test (testing phase only, no embedding).
//!
//! Follows the classical formulation: a DFS orients the graph and computes
//! low points and nesting depths, then a second DFS in nesting order keeps a
//! stack of conflict pairs of return-edge intervals; the graph is planar iff
//! no conflict pair ever needs both of its intervals on the same side.

use super::GraphView;

const NONE: usize = usize::MAX;

#[derive(Clone, Copy, Debug)]
struct Interval {
    low: usize,
    high: usize,
}

impl Interval {
    const EMPTY: Interval = Interval { low: NONE, high: NONE };

    fn is_empty(&self) -> bool {
        self.low == NONE && self.high == NONE
    }
}

#[derive(Clone, Copy, Debug)]
struct ConflictPair {
    left: Interval,
    right: Interval,
}

impl ConflictPair {
    fn swap(&mut self) {
        std::mem::swap(&mut self.left, &mut self.right);
    }
}

struct Lr<'a> {
    g: &'a GraphView,
    // oriented edges: source, target
    src: Vec<usize>,
    dst: Vec<usize>,
    height: Vec<usize>,
    parent_edge: Vec<usize>,
    lowpt: Vec<usize>,
    lowpt2: Vec<usize>,
    nesting: Vec<usize>,
    out: Vec<Vec<usize>>,
    ref_: Vec<usize>,
    lowpt_edge: Vec<usize>,
    stack_bottom: Vec<usize>,
    stack: Vec<ConflictPair>,
}

/// Whether `g` is planar.
pub fn is_planar(g: &GraphView) -> bool {
    let n = g.n();
    if n >= 3 && g.edge_count() > 3 * n - 6 {
        return false;
    }
    let mut lr = Lr {
        g,
        src: Vec::with_capacity(g.edge_count()),
        dst: Vec::with_capacity(g.edge_count()),
        height: vec![NONE; n],
        parent_edge: vec![NONE; n],
        lowpt: Vec::new(),
        lowpt2: Vec::new(),
        nesting: Vec::new(),
        out: vec![Vec::new(); n],
        ref_: Vec::new(),
        lowpt_edge: Vec::new(),
        stack_bottom: Vec::new(),
        stack: Vec::new(),
    };
    let mut oriented = std::collections::HashSet::new();
    let mut roots = Vec::new();
    for s in 0..n {
        if lr.height[s] == NONE {
            lr.height[s] = 0;
            roots.push(s);
            lr.orient(s, &mut oriented);
        }
    }
    let m = lr.src.len();
    lr.ref_ = vec![NONE; m];
    lr.lowpt_edge = vec![NONE; m];
    lr.stack_bottom = vec![NONE; m];
    for v in 0..n {
        let nesting = &lr.nesting;
        lr.out[v].sort_by_key(|&e| nesting[e]);
    }
    roots.into_iter().all(|s| lr.test(s))
}

impl Lr<'_> {
    fn orient(&mut self, v: usize, oriented: &mut std::collections::HashSet<(usize, usize)>) {
        let e = self.parent_edge[v];
        for &w in self.g.neighbors(v) {
            let w = w as usize;
            let key = (v.min(w), v.max(w));
            if !oriented.insert(key) {
                continue;
            }
            let ei = self.src.len();
            self.src.push(v);
            self.dst.push(w);
            self.out[v].push(ei);
            self.lowpt.push(self.height[v]);
            self.lowpt2.push(self.height[v]);
            self.nesting.push(0);
            if self.height[w] == NONE {
                self.parent_edge[w] = ei;
                self.height[w] = self.height[v] + 1;
                self.orient(w, oriented);
            } else {
                self.lowpt[ei] = self.height[w];
            }
            self.nesting[ei] = 2 * self.lowpt[ei] + usize::from(self.lowpt2[ei] < self.height[v]);
            if e != NONE {
                if self.lowpt[ei] < self.lowpt[e] {
                    self.lowpt2[e] = self.lowpt[e].min(self.lowpt2[ei]);
                    self.lowpt[e] = self.lowpt[ei];
                } else if self.lowpt[ei] > self.lowpt[e] {
                    self.lowpt2[e] = self.lowpt2[e].min(self.lowpt[ei]);
                } else {
                    self.lowpt2[e] = self.lowpt2[e].min(self.lowpt2[ei]);
                }
            }
        }
    }

    fn conflicting(&self, i: &Interval, b: usize) -> bool {
        !i.is_empty() && self.lowpt[i.high] > self.lowpt[b]
    }

    fn lowest(&self, p: &ConflictPair) -> usize {
        if p.left.is_empty() {
            return self.lowpt[p.right.low];
        }
        if p.right.is_empty() {
            return self.lowpt[p.left.low];
        }
        self.lowpt[p.left.low].min(self.lowpt[p.right.low])
    }

    fn test(&mut self, v: usize) -> bool {
        let e = self.parent_edge[v];
        let edges = self.out[v].clone();
        for (idx, &ei) in edges.iter().enumerate() {
            let w = self.dst[ei];
            self.stack_bottom[ei] = self.stack.len();
            if ei == self.parent_edge[w] {
                if !self.test(w) {
                    return false;
                }
            } else {
                self.lowpt_edge[ei] = ei;
                self.stack.push(ConflictPair { left: Interval::EMPTY, right: Interval { low: ei, high: ei } });
            }
            if self.lowpt[ei] < self.height[v] {
                if idx == 0 {
                    if e != NONE {
                        self.lowpt_edge[e] = self.lowpt_edge[ei];
                    }
                } else if !self.add_constraints(ei, e) {
                    return false;
                }
            }
        }
        if e != NONE {
            self.remove_back_edges(e);
        }
        true
    }

    fn add_constraints(&mut self, ei: usize, e: usize) -> bool {
        let mut p = ConflictPair { left: Interval::EMPTY, right: Interval::EMPTY };
        loop {
            let Some(mut q) = self.stack.pop() else {
                return false;
            };
            if !q.left.is_empty() {
                q.swap();
            }
            if !q.left.is_empty() {
                return false;
            }
            if self.lowpt[q.right.low] > self.lowpt[e] {
                if p.right.is_empty() {
                    p.right = q.right;
                } else {
                    self.ref_[p.right.low] = q.right.high;
                }
                p.right.low = q.right.low;
            } else {
                self.ref_[q.right.low] = self.lowpt_edge[e];
            }
            if self.stack.len() == self.stack_bottom[ei] {
                break;
            }
        }
        while let Some(top) = self.stack.last() {
            if !(self.conflicting(&top.left, ei) || self.conflicting(&top.right, ei)) {
                break;
            }
            let mut q = self.stack.pop().expect("non-empty");
            if self.conflicting(&q.right, ei) {
                q.swap();
            }
            if self.conflicting(&q.right, ei) {
                return false;
            }
            if p.right.low != NONE {
                self.ref_[p.right.low] = q.right.high;
            }
            if q.right.low != NONE {
                p.right.low = q.right.low;
            }
            if p.left.is_empty() {
                p.left = q.left;
            } else if p.left.low != NONE {
                self.ref_[p.left.low] = q.left.high;
            }
            p.left.low = q.left.low;
        }
        if !(p.left.is_empty() && p.right.is_empty()) {
            self.stack.push(p);
        }
        true
    }

    fn remove_back_edges(&mut self, e: usize) {
        let u = self.src[e];
        while let Some(top) = self.stack.last() {
            if self.lowest(top) != self.height[u] {
                break;
            }
            self.stack.pop();
        }
        if let Some(mut p) = self.stack.pop() {
            while p.left.high != NONE && self.dst[p.left.high] == u {
                p.left.high = self.ref_[p.left.high];
            }
            if p.left.high == NONE && p.left.low != NONE {
                self.ref_[p.left.low] = p.right.low;
                p.left.low = NONE;
            }
            while p.right.high != NONE && self.dst[p.right.high] == u {
                p.right.high = self.ref_[p.right.high];
            }
            if p.right.high == NONE && p.right.low != NONE {
                self.ref_[p.right.low] = p.left.low;
                p.right.low = NONE;
            }
            self.stack.push(p);
        }
        if self.lowpt[e] < self.height[u] {
            if let Some(top) = self.stack.last() {
                let (hl, hr) = (top.left.high, top.right.high);
                self.ref_[e] = if hl != NONE && (hr == NONE || self.lowpt[hl] > self.lowpt[hr]) { hl } else { hr };
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kuratowski_graphs() {
        assert!(is_planar(&GraphView::complete(4)));
        assert!(!is_planar(&GraphView::complete(5)));
        assert!(!is_planar(&GraphView::complete_bipartite(3, 3)));
        assert!(!is_planar(&GraphView::petersen()));
        assert!(is_planar(&GraphView::cycle(8)));
        assert!(is_planar(&GraphView::complete_bipartite(2, 7)));
    }

    #[test]
    fn subdivided_k33_is_nonplanar() {
        // K_{3,3} with every edge subdivided once
        let mut edges = Vec::new();
        let mut next = 6;
        for a in 0..3 {
            for b in 3..6 {
                edges.push((a, next));
                edges.push((next, b));
                next += 1;
            }
        }
        let g = GraphView::from_edges(next, edges).unwrap();
        assert!(!is_planar(&g));
    }

    #[test]
    fn grid_and_wheel_are_planar() {
        let k = 5;
        let mut edges = Vec::new();
        for r in 0..k {
            for c in 0..k {
                let v = r * k + c;
                if c + 1 < k {
                    edges.push((v, v + 1));
                }
                if r + 1 < k {
                    edges.push((v, v + k));
                }
            }
        }
        assert!(is_planar(&GraphView::from_edges(k * k, edges).unwrap()));
        let mut wheel: Vec<_> = (1..9).map(|i| (0, i)).collect();
        wheel.extend((1..9).map(|i| (i, i % 8 + 1)));
        assert!(is_planar(&GraphView::from_edges(9, wheel).unwrap()));
    }
}
