//! Winning families over edge boards and the potential sums built on them.

mod formulas;
mod potential;

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::board::EdgeBoard;
use crate::error::{Error, Result};
use crate::game::ElementId;

pub use formulas::{
    binomial_f64, clique_bednarska_formula, clique_cw_formula, cycles_count, phi2_bound,
    phi_formula_colorability, phi_formula_cycles_tail, ColorabilityFamily, FormulaValue,
};
pub use potential::{
    bednarska_sum, client_fully_claims, is_transversal, phi_cw, phi_wc, phi_wc_live, NeumaierSum,
};

/// Default limit on the number of sets an enumeration may produce.
pub const DEFAULT_CAP: u64 = 10_000_000;

/// A finite family of winning sets with an element-to-set membership index.
#[derive(Debug, Clone, PartialEq)]
pub struct WinningFamily {
    label: String,
    n_elements: usize,
    sets: Vec<Vec<ElementId>>,
    index: Vec<Vec<u32>>,
}

#[derive(Serialize, Deserialize)]
struct FamilyJson {
    label: String,
    n_elements: usize,
    sets: Vec<Vec<u32>>,
}

impl WinningFamily {
    /// Sorts every set; empty sets, repeated elements and out-of-range ids
    /// are rejected.
    pub fn new(label: impl Into<String>, n_elements: usize, sets: Vec<Vec<ElementId>>) -> Result<Self> {
        let mut index = vec![Vec::new(); n_elements];
        let mut clean = Vec::with_capacity(sets.len());
        for (i, mut s) in sets.into_iter().enumerate() {
            if s.is_empty() {
                return Err(Error::Parameter(format!("winning set {i} is empty")));
            }
            s.sort_unstable();
            if s.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::Parameter(format!("winning set {i} repeats an element")));
            }
            for &e in &s {
                if e.index() >= n_elements {
                    return Err(Error::UnknownElement(e));
                }
                index[e.index()].push(i as u32);
            }
            clean.push(s);
        }
        Ok(WinningFamily { label: label.into(), n_elements, sets: clean, index })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn n_elements(&self) -> usize {
        self.n_elements
    }

    pub fn sets(&self) -> &[Vec<ElementId>] {
        &self.sets
    }

    pub fn set(&self, i: usize) -> &[ElementId] {
        &self.sets[i]
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    /// Indices of the sets containing `e`.
    pub fn containing(&self, e: ElementId) -> &[u32] {
        &self.index[e.index()]
    }

    /// Union of two families on the same board; repeated sets are kept once.
    pub fn union(&self, other: &WinningFamily) -> Result<WinningFamily> {
        if self.n_elements != other.n_elements {
            return Err(Error::Parameter("families live on different boards".into()));
        }
        let mut seen = HashSet::new();
        let sets: Vec<_> = self
            .sets
            .iter()
            .chain(other.sets.iter())
            .filter(|s| seen.insert((*s).clone()))
            .cloned()
            .collect();
        WinningFamily::new(format!("{}+{}", self.label, other.label), self.n_elements, sets)
    }

    pub fn to_json(&self) -> String {
        let j = FamilyJson {
            label: self.label.clone(),
            n_elements: self.n_elements,
            sets: self.sets.iter().map(|s| s.iter().map(|e| e.0).collect()).collect(),
        };
        serde_json::to_string(&j).expect("family serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let j: FamilyJson = serde_json::from_str(s)?;
        let sets = j.sets.into_iter().map(|s| s.into_iter().map(ElementId).collect()).collect();
        WinningFamily::new(j.label, j.n_elements, sets)
    }
}

/// Parametrized description of a family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FamilySpec {
    /// Edge sets of all cycles of K_n with length in `lmin..=lmax`.
    Cycles { n: usize, lmin: usize, lmax: usize },
    /// Edge sets of all r-cliques of K_n.
    Cliques { n: usize, r: usize },
    /// Unions E(C1) ∪ E(C2) of distinct vertex-intersecting cycles of length 3 or 4.
    IntersectingShortCyclePairs { n: usize },
    /// Unions of distinct cycles of length at most `lmax` whose intersection is a path.
    CyclePairsSharingPath { n: usize, lmax: usize },
    /// Explicit sets over `n_elements`.
    Explicit { n_elements: usize, sets: Vec<Vec<u32>> },
}

impl FamilySpec {
    /// Board size of the family.
    pub fn board_size(&self) -> usize {
        match *self {
            FamilySpec::Cycles { n, .. }
            | FamilySpec::Cliques { n, .. }
            | FamilySpec::IntersectingShortCyclePairs { n }
            | FamilySpec::CyclePairsSharingPath { n, .. } => crate::board::edge_count(n),
            FamilySpec::Explicit { n_elements, .. } => n_elements,
        }
    }

    fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Parameter(m));
        match *self {
            FamilySpec::Cycles { n, lmin, lmax } => {
                if !(3 <= lmin && lmin <= lmax && lmax <= n) {
                    return bad(format!("cycles need 3 <= lmin <= lmax <= n, got ({n},{lmin},{lmax})"));
                }
            }
            FamilySpec::Cliques { n, r } => {
                if !(2 <= r && r <= n) {
                    return bad(format!("cliques need 2 <= r <= n, got ({n},{r})"));
                }
            }
            FamilySpec::IntersectingShortCyclePairs { n } => {
                if n < 4 {
                    return bad(format!("intersecting short cycle pairs need n >= 4, got {n}"));
                }
            }
            FamilySpec::CyclePairsSharingPath { n, lmax } => {
                if !(3 <= lmax && lmax <= n) {
                    return bad(format!("cycle pairs need 3 <= lmax <= n, got ({n},{lmax})"));
                }
                if n > 8 {
                    return bad(format!("cycle pairs are enumerated only for n <= 8, got {n}"));
                }
            }
            FamilySpec::Explicit { .. } => {}
        }
        Ok(())
    }

    /// Closed-form size (or, for the pair families, an upper bound used for
    /// the cap check).
    pub fn size_estimate(&self) -> f64 {
        match *self {
            FamilySpec::Cycles { n, lmin, lmax } => (lmin..=lmax).map(|k| cycles_count(n, k)).sum(),
            FamilySpec::Cliques { n, r } => binomial_f64(n as u64, r as u64),
            FamilySpec::IntersectingShortCyclePairs { n } => {
                let c = cycles_count(n, 3) + cycles_count(n, 4);
                c * (c - 1.0) / 2.0
            }
            FamilySpec::CyclePairsSharingPath { n, lmax } => {
                let c: f64 = (3..=lmax).map(|k| cycles_count(n, k)).sum();
                c * (c - 1.0) / 2.0
            }
            FamilySpec::Explicit { ref sets, .. } => sets.len() as f64,
        }
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilySpec::Cycles { n, lmin, lmax } => write!(f, "cycles({n},{lmin},{lmax})"),
            FamilySpec::Cliques { n, r } => write!(f, "cliques({n},{r})"),
            FamilySpec::IntersectingShortCyclePairs { n } => write!(f, "short_cycle_pairs({n})"),
            FamilySpec::CyclePairsSharingPath { n, lmax } => write!(f, "cycle_pairs({n},{lmax})"),
            FamilySpec::Explicit { n_elements, sets } => {
                write!(f, "explicit({n_elements};")?;
                let parts: Vec<String> = sets
                    .iter()
                    .map(|s| s.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(" "))
                    .collect();
                write!(f, "{})", parts.join("|"))
            }
        }
    }
}

impl FromStr for FamilySpec {
    type Err = Error;

    /// Accepts `cycles(n,lmin,lmax)`, `cliques(n,r)`, `short_cycle_pairs(n)`,
    /// `cycle_pairs(n,lmax)` and `explicit(N;0 1|1 2)`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let open = s.find('(').ok_or_else(|| Error::Parse(format!("family `{s}` lacks arguments")))?;
        if !s.ends_with(')') {
            return Err(Error::Parse(format!("family `{s}` lacks a closing parenthesis")));
        }
        let name = &s[..open];
        let body = &s[open + 1..s.len() - 1];
        if name == "explicit" {
            let (n, rest) = body
                .split_once(';')
                .ok_or_else(|| Error::Parse("explicit family needs `N;sets`".into()))?;
            let n_elements = parse_usize(n)?;
            let sets = rest
                .split('|')
                .filter(|p| !p.trim().is_empty())
                .map(|p| p.split_whitespace().map(|x| parse_usize(x).map(|v| v as u32)).collect())
                .collect::<Result<Vec<Vec<u32>>>>()?;
            return Ok(FamilySpec::Explicit { n_elements, sets });
        }
        let args = body.split(',').map(parse_usize).collect::<Result<Vec<_>>>()?;
        match (name, args.as_slice()) {
            ("cycles", &[n, lmin, lmax]) => Ok(FamilySpec::Cycles { n, lmin, lmax }),
            ("cliques", &[n, r]) => Ok(FamilySpec::Cliques { n, r }),
            ("short_cycle_pairs", &[n]) => Ok(FamilySpec::IntersectingShortCyclePairs { n }),
            ("cycle_pairs", &[n, lmax]) => Ok(FamilySpec::CyclePairsSharingPath { n, lmax }),
            _ => Err(Error::Parse(format!("unknown family `{s}`"))),
        }
    }
}

fn parse_usize(s: &str) -> Result<usize> {
    s.trim().parse().map_err(|_| Error::Parse(format!("`{s}` is not a non-negative integer")))
}

pub fn enumerate(spec: &FamilySpec) -> Result<WinningFamily> {
    enumerate_with_cap(spec, DEFAULT_CAP)
}

pub fn enumerate_with_cap(spec: &FamilySpec, cap: u64) -> Result<WinningFamily> {
    spec.validate()?;
    let count = spec.size_estimate();
    if count > cap as f64 {
        return Err(Error::InfeasibleEnumeration { label: spec.to_string(), count, cap });
    }
    let label = spec.to_string();
    match *spec {
        FamilySpec::Cycles { n, lmin, lmax } => {
            let board = EdgeBoard::new(n)?;
            let mut sets = Vec::with_capacity(count as usize);
            for k in lmin..=lmax {
                for_each_cycle(n, k, |cyc| sets.push(cycle_edges(&board, cyc)));
            }
            WinningFamily::new(label, board.size(), sets)
        }
        FamilySpec::Cliques { n, r } => {
            let board = EdgeBoard::new(n)?;
            let mut sets = Vec::new();
            for_each_combination(n, r, |verts| {
                let mut s = Vec::with_capacity(r * (r - 1) / 2);
                for (i, &u) in verts.iter().enumerate() {
                    for &v in &verts[i + 1..] {
                        s.push(board.id(u, v));
                    }
                }
                sets.push(s);
            });
            WinningFamily::new(label, board.size(), sets)
        }
        FamilySpec::IntersectingShortCyclePairs { n } => {
            let board = EdgeBoard::new(n)?;
            let cycles = cycle_masks(&board, 3, 4);
            let sets = pair_unions(&cycles, |a, b| a.vertices & b.vertices != 0);
            WinningFamily::new(label, board.size(), masks_to_sets(sets))
        }
        FamilySpec::CyclePairsSharingPath { n, lmax } => {
            let board = EdgeBoard::new(n)?;
            let cycles = cycle_masks(&board, 3, lmax);
            let sets = pair_unions(&cycles, |a, b| {
                let shared_v = (a.vertices & b.vertices).count_ones();
                let shared_e = (a.edges & b.edges).count_ones();
                // a proper sub-path of a cycle has one edge fewer than vertices
                shared_v >= 1 && shared_e + 1 == shared_v
            });
            WinningFamily::new(label, board.size(), masks_to_sets(sets))
        }
        FamilySpec::Explicit { n_elements, ref sets } => WinningFamily::new(
            label,
            n_elements,
            sets.iter().map(|s| s.iter().map(|&e| ElementId(e)).collect()).collect(),
        ),
    }
}

/// Calls `f` once per cycle of length `k` in K_n, given as a vertex sequence
/// starting at its smallest vertex with `seq[1] < seq[k-1]`.
pub fn for_each_cycle(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    if k < 3 || k > n {
        return;
    }
    let mut path = Vec::with_capacity(k);
    let mut used = vec![false; n];
    for s in 0..n {
        path.clear();
        path.push(s);
        used[s] = true;
        extend_cycle(n, k, s, &mut path, &mut used, &mut f);
        used[s] = false;
    }
}

fn extend_cycle(
    n: usize,
    k: usize,
    start: usize,
    path: &mut Vec<usize>,
    used: &mut [bool],
    f: &mut impl FnMut(&[usize]),
) {
    if path.len() == k {
        if path[1] < path[k - 1] {
            f(path);
        }
        return;
    }
    for v in start + 1..n {
        if !used[v] {
            used[v] = true;
            path.push(v);
            extend_cycle(n, k, start, path, used, f);
            path.pop();
            used[v] = false;
        }
    }
}

/// Calls `f` with every r-subset of `0..n` in lexicographic order.
pub fn for_each_combination(n: usize, r: usize, mut f: impl FnMut(&[usize])) {
    if r > n {
        return;
    }
    let mut c: Vec<usize> = (0..r).collect();
    loop {
        f(&c);
        let Some(i) = (0..r).rev().find(|&i| c[i] < n - r + i) else {
            return;
        };
        c[i] += 1;
        for j in i + 1..r {
            c[j] = c[j - 1] + 1;
        }
    }
}

fn cycle_edges(board: &EdgeBoard, cyc: &[usize]) -> Vec<ElementId> {
    let k = cyc.len();
    (0..k).map(|i| board.id(cyc[i], cyc[(i + 1) % k])).collect()
}

struct CycleMask {
    vertices: u64,
    edges: u64,
}

fn cycle_masks(board: &EdgeBoard, lmin: usize, lmax: usize) -> Vec<CycleMask> {
    assert!(board.size() <= 64, "mask enumeration needs at most 64 edges");
    let mut out = Vec::new();
    for k in lmin..=lmax {
        for_each_cycle(board.n(), k, |cyc| {
            let vertices = cyc.iter().fold(0u64, |m, &v| m | 1 << v);
            let edges = cycle_edges(board, cyc).iter().fold(0u64, |m, e| m | 1 << e.0);
            out.push(CycleMask { vertices, edges });
        });
    }
    out
}

fn pair_unions(cycles: &[CycleMask], keep: impl Fn(&CycleMask, &CycleMask) -> bool) -> Vec<u64> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for (i, a) in cycles.iter().enumerate() {
        for b in &cycles[i + 1..] {
            if keep(a, b) {
                let u = a.edges | b.edges;
                if seen.insert(u) {
                    out.push(u);
                }
            }
        }
    }
    out
}

fn masks_to_sets(masks: Vec<u64>) -> Vec<Vec<ElementId>> {
    masks
        .into_iter()
        .map(|m| (0..64).filter(|i| m >> i & 1 == 1).map(ElementId).collect())
        .collect()
}

/// Family of unions of two distinct intersecting cycles of length 3 or 4
/// restricted to K_n with n <= 7, counted by (vertices spanned, edges).
/// Entry `[v][e]` is the number of members spanning exactly `v` given vertices.
pub(crate) fn short_pair_type_counts() -> Vec<Vec<f64>> {
    let board = EdgeBoard::new(7).expect("K_7");
    let cycles = cycle_masks(&board, 3, 4);
    let mut seen = HashSet::new();
    let mut counts = vec![vec![0.0; 22]; 8];
    for (i, a) in cycles.iter().enumerate() {
        for b in &cycles[i + 1..] {
            if a.vertices & b.vertices == 0 {
                continue;
            }
            let e = a.edges | b.edges;
            if !seen.insert(e) {
                continue;
            }
            let v = a.vertices | b.vertices;
            // count only members supported on the first |v| vertices
            let size = v.count_ones() as usize;
            if v == (1u64 << size) - 1 {
                counts[size][e.count_ones() as usize] += 1.0;
            }
        }
    }
    counts
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k4_cycles() {
        let f = enumerate(&FamilySpec::Cycles { n: 4, lmin: 3, lmax: 4 }).unwrap();
        assert_eq!(f.len(), 7);
        assert_eq!(f.sets().iter().filter(|s| s.len() == 3).count(), 4);
    }

    #[test]
    fn k5_cycles() {
        let f = enumerate(&FamilySpec::Cycles { n: 5, lmin: 3, lmax: 5 }).unwrap();
        assert_eq!(f.len(), 37);
    }

    #[test]
    fn cliques_of_size_two_are_edges() {
        let f = enumerate(&FamilySpec::Cliques { n: 4, r: 2 }).unwrap();
        assert_eq!(f.len(), 6);
        assert!(f.sets().iter().all(|s| s.len() == 1));
    }

    #[test]
    fn combinations_are_lexicographic() {
        let mut all = Vec::new();
        for_each_combination(4, 2, |c| all.push(c.to_vec()));
        assert_eq!(all, vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]);
        let mut empty = 0;
        for_each_combination(3, 0, |_| empty += 1);
        assert_eq!(empty, 1);
    }

    #[test]
    fn cap_reports_closed_form_count() {
        let err = enumerate_with_cap(&FamilySpec::Cycles { n: 8, lmin: 3, lmax: 8 }, 100).unwrap_err();
        match err {
            Error::InfeasibleEnumeration { count, .. } => assert_eq!(count, 8018.0),
            e => panic!("unexpected {e}"),
        }
    }

    #[test]
    fn spec_strings_round_trip() {
        for s in ["cycles(6,3,6)", "cliques(5,3)", "short_cycle_pairs(6)", "cycle_pairs(6,4)", "explicit(4;0 1|2 3)"] {
            let spec: FamilySpec = s.parse().unwrap();
            assert_eq!(spec.to_string(), s);
        }
        assert!("cycles(6,3)".parse::<FamilySpec>().is_err());
    }

    #[test]
    fn json_round_trip() {
        let f = enumerate(&FamilySpec::Cliques { n: 4, r: 3 }).unwrap();
        let g = WinningFamily::from_json(&f.to_json()).unwrap();
        assert_eq!(f, g);
    }

    #[test]
    fn invalid_sets_are_rejected() {
        assert!(WinningFamily::new("x", 3, vec![vec![]]).is_err());
        assert!(WinningFamily::new("x", 3, vec![vec![ElementId(3)]]).is_err());
        assert!(WinningFamily::new("x", 3, vec![vec![ElementId(1), ElementId(1)]]).is_err());
    }
}
