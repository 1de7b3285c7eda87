//! Edge-weighted bipartite graphs with brute-force matching-sum oracles.
//! These provide the left-hand sides that the reductions must reproduce.

use crate::digraph::{collect_rest, content_lines, format_weight, parse_endpoints, parse_weight};
use crate::error::{Error, Result};
use crate::poly::Poly2;
use std::collections::BTreeMap;
use std::fmt::Write as _;

/// A bipartite graph on left vertices `0..n_left` and right vertices
/// `0..n_right` with exact polynomial edge weights. At most one edge per
/// pair; weights are nonzero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BipartiteGraph {
    n_left: usize,
    n_right: usize,
    edges: BTreeMap<(usize, usize), Poly2>,
}

impl BipartiteGraph {
    pub fn new(n_left: usize, n_right: usize) -> Self {
        BipartiteGraph { n_left, n_right, edges: BTreeMap::new() }
    }

    pub fn n_left(&self) -> usize {
        self.n_left
    }

    pub fn n_right(&self) -> usize {
        self.n_right
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Adds the edge `{l, r}` of nonzero weight. Rejects out-of-range
    /// endpoints, zero weights, and duplicates.
    pub fn add_edge(&mut self, l: usize, r: usize, w: Poly2) -> Result<()> {
        if l >= self.n_left || r >= self.n_right {
            return Err(Error::Precondition(format!(
                "edge ({l},{r}) out of range for sides {} x {}",
                self.n_left, self.n_right
            )));
        }
        if w.is_zero() {
            return Err(Error::Precondition(format!("edge ({l},{r}) has zero weight")));
        }
        if self.edges.insert((l, r), w).is_some() {
            return Err(Error::Precondition(format!("duplicate edge ({l},{r})")));
        }
        Ok(())
    }

    pub fn edge_weight(&self, l: usize, r: usize) -> Option<&Poly2> {
        self.edges.get(&(l, r))
    }

    pub fn edges(&self) -> impl Iterator<Item = (&(usize, usize), &Poly2)> {
        self.edges.iter()
    }

    /// Total number of vertices on both sides.
    pub fn total_vertices(&self) -> usize {
        self.n_left + self.n_right
    }

    /// Sums `prod_{e in M} w(e)` over all matchings `M` with exactly `k`
    /// edges, by brute-force enumeration. `k = 0` yields the empty matching,
    /// weight 1.
    pub fn matching_sum(&self, k: usize) -> Poly2 {
        let edge_list: Vec<(usize, usize, &Poly2)> =
            self.edges.iter().map(|(&(l, r), w)| (l, r, w)).collect();
        let mut total = Poly2::zero();
        let mut used_l = vec![false; self.n_left];
        let mut used_r = vec![false; self.n_right];
        fn rec(
            edges: &[(usize, usize, &Poly2)],
            start: usize,
            left: usize,
            acc: &Poly2,
            used_l: &mut Vec<bool>,
            used_r: &mut Vec<bool>,
            total: &mut Poly2,
        ) {
            if left == 0 {
                *total += acc;
                return;
            }
            if edges.len() - start < left {
                return;
            }
            for i in start..edges.len() {
                let (l, r, w) = edges[i];
                if used_l[l] || used_r[r] {
                    continue;
                }
                used_l[l] = true;
                used_r[r] = true;
                let next = acc * w;
                rec(edges, i + 1, left - 1, &next, used_l, used_r, total);
                used_l[l] = false;
                used_r[r] = false;
            }
        }
        rec(&edge_list, 0, k, &Poly2::one(), &mut used_l, &mut used_r, &mut total);
        total
    }

    /// Sum over perfect matchings. Requires equal sides; zero when no
    /// perfect matching exists.
    pub fn perfect_matching_sum(&self) -> Result<Poly2> {
        if self.n_left != self.n_right {
            return Err(Error::Precondition(format!(
                "perfect matchings need equal sides, got {} x {}",
                self.n_left, self.n_right
            )));
        }
        Ok(self.matching_sum(self.n_left))
    }
}

/// Parses the bipartite graph file format: `#` comments, a
/// `bigraph <n_left> <n_right>` header, then one `l r <weight>` line per edge.
pub fn parse_bigraph(text: &str) -> Result<BipartiteGraph> {
    let mut lines = content_lines(text);
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty bigraph file".into()))?;
    let mut it = header.split_whitespace();
    if it.next() != Some("bigraph") {
        return Err(Error::Parse("expected `bigraph <n_left> <n_right>` header".into()));
    }
    let n_left: usize = it
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| Error::Parse("invalid left size in bigraph header".into()))?;
    let n_right: usize = it
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| Error::Parse("invalid right size in bigraph header".into()))?;
    if it.next().is_some() {
        return Err(Error::Parse("trailing tokens in bigraph header".into()));
    }
    let mut g = BipartiteGraph::new(n_left, n_right);
    for line in lines {
        let mut it = line.split_whitespace();
        let (l, r) = parse_endpoints(&mut it, line)?;
        let w = parse_weight(&collect_rest(&mut it, line)?)?;
        g.add_edge(l, r, w)?;
    }
    Ok(g)
}

/// Serializes a bipartite graph in the format accepted by [`parse_bigraph`].
pub fn format_bigraph(g: &BipartiteGraph) -> Result<String> {
    let mut out = String::new();
    writeln!(out, "bigraph {} {}", g.n_left(), g.n_right()).unwrap();
    for (&(l, r), w) in g.edges() {
        writeln!(out, "{l} {r} {}", format_weight(w)?).unwrap();
    }
    Ok(out)
}

/// The complete bipartite graph `K_{a,b}` with all edge weights 1.
pub fn complete_bipartite(a: usize, b: usize) -> BipartiteGraph {
    let mut g = BipartiteGraph::new(a, b);
    for l in 0..a {
        for r in 0..b {
            g.add_edge(l, r, Poly2::one()).unwrap();
        }
    }
    g
}
