//! Weighted digraphs over exact polynomial weights, cycle-cover enumeration,
//! immanants, format-restricted cover sums, determinant/permanent oracles,
//! and exact interpolation-based coefficient recovery.

use crate::characters::CharacterCache;
use crate::error::{Error, Result};
use crate::partition::Partition;
use crate::poly::Poly2;
use crate::{rat, Rat};
use num::traits::Zero;
use std::collections::BTreeMap;
use std::fmt::Write as _;

/// A directed graph with exact polynomial arc weights. Self-loops are
/// allowed; at most one arc per ordered vertex pair; weights are nonzero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedDigraph {
    n: usize,
    arcs: BTreeMap<(usize, usize), Poly2>,
}

impl WeightedDigraph {
    pub fn new(n: usize) -> Self {
        WeightedDigraph { n, arcs: BTreeMap::new() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Adds an arc `u -> v` of nonzero weight. Rejects out-of-range
    /// endpoints, zero weights, and duplicate arcs.
    pub fn add_arc(&mut self, u: usize, v: usize, w: Poly2) -> Result<()> {
        if u >= self.n || v >= self.n {
            return Err(Error::Precondition(format!(
                "arc ({u},{v}) out of range for {} vertices",
                self.n
            )));
        }
        if w.is_zero() {
            return Err(Error::Precondition(format!("arc ({u},{v}) has zero weight")));
        }
        if self.arcs.insert((u, v), w).is_some() {
            return Err(Error::Precondition(format!("duplicate arc ({u},{v})")));
        }
        Ok(())
    }

    pub fn arc_weight(&self, u: usize, v: usize) -> Option<&Poly2> {
        self.arcs.get(&(u, v))
    }

    pub fn arcs(&self) -> impl Iterator<Item = (&(usize, usize), &Poly2)> {
        self.arcs.iter()
    }

    /// The adjacency matrix (zero polynomial for absent arcs).
    pub fn adjacency_matrix(&self) -> Vec<Vec<Poly2>> {
        let mut m = vec![vec![Poly2::zero(); self.n]; self.n];
        for (&(u, v), w) in &self.arcs {
            m[u][v] = w.clone();
        }
        m
    }

    /// Builds the digraph whose adjacency matrix is `m` (nonzero entries
    /// become arcs).
    pub fn from_matrix(m: &[Vec<Poly2>]) -> Result<WeightedDigraph> {
        let n = m.len();
        let mut g = WeightedDigraph::new(n);
        for (u, row) in m.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Precondition("matrix is not square".into()));
            }
            for (v, w) in row.iter().enumerate() {
                if !w.is_zero() {
                    g.add_arc(u, v, w.clone())?;
                }
            }
        }
        Ok(g)
    }

    /// Returns a copy with `x` and `y` substituted by the given rationals
    /// (dropping arcs whose weight evaluates to zero would change the graph,
    /// so zero-evaluating arcs are kept out of the cover sums naturally by
    /// contributing weight zero — they are simply omitted).
    pub fn substitute(&self, xv: &Rat, yv: &Rat) -> WeightedDigraph {
        let mut g = WeightedDigraph::new(self.n);
        for (&(u, v), w) in &self.arcs {
            let val = w.eval(xv, yv);
            if !val.is_zero() {
                g.arcs.insert((u, v), Poly2::constant(val));
            }
        }
        g
    }

    /// Enumerates every cycle cover (successor permutation supported on the
    /// arc set) exactly once, invoking `f` with the successor array. Uses
    /// backtracking with a fewest-choices-first vertex order, so forced
    /// vertices (padding loops and digons) cost O(1) each.
    pub fn for_each_cycle_cover(&self, mut f: impl FnMut(&[usize])) {
        let out_adj: Vec<Vec<usize>> = {
            let mut adj = vec![Vec::new(); self.n];
            for &(u, v) in self.arcs.keys() {
                adj[u].push(v);
            }
            adj
        };
        let mut succ: Vec<usize> = vec![usize::MAX; self.n];
        let mut used: Vec<bool> = vec![false; self.n];
        fn rec(
            out_adj: &[Vec<usize>],
            succ: &mut Vec<usize>,
            used: &mut Vec<bool>,
            remaining: usize,
            f: &mut impl FnMut(&[usize]),
        ) {
            if remaining == 0 {
                f(succ);
                return;
            }
            // Pick the unassigned vertex with the fewest available targets.
            let mut best: Option<(usize, usize)> = None;
            for u in 0..succ.len() {
                if succ[u] != usize::MAX {
                    continue;
                }
                let choices = out_adj[u].iter().filter(|&&v| !used[v]).count();
                if choices == 0 {
                    return; // dead branch
                }
                if best.map_or(true, |(_, c)| choices < c) {
                    best = Some((u, choices));
                    if choices == 1 {
                        break;
                    }
                }
            }
            let (u, _) = best.expect("remaining > 0 implies an unassigned vertex");
            for &v in &out_adj[u] {
                if used[v] {
                    continue;
                }
                succ[u] = v;
                used[v] = true;
                rec(out_adj, succ, used, remaining - 1, f);
                succ[u] = usize::MAX;
                used[v] = false;
            }
        }
        rec(&out_adj, &mut succ, &mut used, self.n, &mut f);
    }

    /// The weight of the cover given by a successor array: the product of
    /// the chosen arc weights.
    pub fn cover_weight(&self, succ: &[usize]) -> Poly2 {
        let mut w = Poly2::one();
        for (u, &v) in succ.iter().enumerate() {
            w *= &self.arcs[&(u, v)];
        }
        w
    }

    /// Sums cover weights grouped by cycle format.
    pub fn cover_sums_by_format(&self) -> BTreeMap<Partition, Poly2> {
        let mut sums: BTreeMap<Partition, Poly2> = BTreeMap::new();
        self.for_each_cycle_cover(|succ| {
            let fmt = cycle_format(succ);
            let w = self.cover_weight(succ);
            sums.entry(fmt)
                .and_modify(|acc| *acc += &w)
                .or_insert(w);
        });
        sums
    }
}

/// The cycle format of a successor permutation: the partition of cycle lengths.
pub fn cycle_format(succ: &[usize]) -> Partition {
    let mut seen = vec![false; succ.len()];
    let mut lengths = Vec::new();
    for start in 0..succ.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut v = start;
        while !seen[v] {
            seen[v] = true;
            len += 1;
            v = succ[v];
        }
        lengths.push(len);
    }
    Partition::new(lengths)
}

/// Converts an exact integer character value to a rational.
fn chi_rat(c: num::BigInt) -> Rat {
    Rat::from_integer(c)
}

/// The immanant `imm_lambda(G) = sum over cycle covers C of
/// chi_lambda(format(C)) * weight(C)`. Characters are memoized per format.
pub fn immanant(lambda: &Partition, g: &WeightedDigraph) -> Result<Poly2> {
    immanant_with_cache(lambda, g, &mut CharacterCache::new())
}

/// [`immanant`] reusing a caller-provided character cache.
pub fn immanant_with_cache(
    lambda: &Partition,
    g: &WeightedDigraph,
    cache: &mut CharacterCache,
) -> Result<Poly2> {
    if lambda.size() != g.n() {
        return Err(Error::SizeMismatch(format!(
            "|lambda| = {} but the graph has {} vertices",
            lambda.size(),
            g.n()
        )));
    }
    let mut total = Poly2::zero();
    for (fmt, wsum) in g.cover_sums_by_format() {
        let chi = cache.chi(lambda, &fmt)?;
        if !chi.is_zero() {
            total += &wsum.scale(&chi_rat(chi));
        }
    }
    Ok(total)
}

/// The format-restricted cycle-cover sum `#CC(G, rho)`: total weight of
/// covers with cycle format exactly `rho`.
pub fn cc_sum(g: &WeightedDigraph, rho: &Partition) -> Result<Poly2> {
    if rho.size() != g.n() {
        return Err(Error::SizeMismatch(format!(
            "|rho| = {} but the graph has {} vertices",
            rho.size(),
            g.n()
        )));
    }
    let mut total = Poly2::zero();
    g.for_each_cycle_cover(|succ| {
        if &cycle_format(succ) == rho {
            total += &g.cover_weight(succ);
        }
    });
    Ok(total)
}

/// Exact determinant of a square matrix of polynomial entries. Rational
/// matrices go through Gaussian elimination; genuinely polynomial matrices
/// fall back to signed permutation expansion (desk scale).
pub fn determinant(m: &[Vec<Poly2>]) -> Result<Poly2> {
    let n = m.len();
    if m.iter().any(|row| row.len() != n) {
        return Err(Error::Precondition("matrix is not square".into()));
    }
    if m.iter().flatten().all(|e| e.is_constant()) {
        // Exact rational elimination with partial "pivot on first nonzero".
        let mut a: Vec<Vec<Rat>> = m
            .iter()
            .map(|row| row.iter().map(|e| e.constant_term()).collect())
            .collect();
        let mut det = rat(1);
        for col in 0..n {
            let Some(pivot) = (col..n).find(|&r| !a[r][col].is_zero()) else {
                return Ok(Poly2::zero());
            };
            if pivot != col {
                a.swap(pivot, col);
                det = -det;
            }
            let p = a[col][col].clone();
            det *= &p;
            for r in col + 1..n {
                let factor = &a[r][col] / &p;
                if factor.is_zero() {
                    continue;
                }
                for c in col..n {
                    let sub = &a[col][c] * &factor;
                    a[r][c] -= sub;
                }
            }
        }
        return Ok(Poly2::constant(det));
    }
    // Permutation expansion over the polynomial ring.
    let mut total = Poly2::zero();
    let mut perm: Vec<usize> = Vec::with_capacity(n);
    let mut used = vec![false; n];
    fn rec(
        m: &[Vec<Poly2>],
        perm: &mut Vec<usize>,
        used: &mut Vec<bool>,
        sign: i64,
        total: &mut Poly2,
    ) {
        let i = perm.len();
        if i == m.len() {
            let mut term = Poly2::constant(rat(sign));
            for (r, &c) in perm.iter().enumerate() {
                if m[r][c].is_zero() {
                    return;
                }
                term *= &m[r][c];
            }
            *total += &term;
            return;
        }
        for j in 0..m.len() {
            if used[j] || m[i][j].is_zero() {
                continue;
            }
            // Each transposition relative to insertion order flips the sign:
            // count inversions introduced by placing j now.
            let inversions = perm.iter().filter(|&&k| k > j).count();
            let s = if inversions % 2 == 0 { sign } else { -sign };
            used[j] = true;
            perm.push(j);
            rec(m, perm, used, s, total);
            perm.pop();
            used[j] = false;
        }
    }
    rec(m, &mut perm, &mut used, 1, &mut total);
    Ok(total)
}

/// Exact permanent via Ryser's inclusion-exclusion formula.
pub fn permanent(m: &[Vec<Poly2>]) -> Result<Poly2> {
    let n = m.len();
    if m.iter().any(|row| row.len() != n) {
        return Err(Error::Precondition("matrix is not square".into()));
    }
    if n == 0 {
        return Ok(Poly2::one());
    }
    let mut total = Poly2::zero();
    for mask in 1u64..(1 << n) {
        let mut prod = Poly2::one();
        for row in m {
            let mut rowsum = Poly2::zero();
            for (j, e) in row.iter().enumerate() {
                if mask >> j & 1 == 1 {
                    rowsum += e;
                }
            }
            if rowsum.is_zero() {
                prod = Poly2::zero();
                break;
            }
            prod *= &rowsum;
        }
        if (n - (mask.count_ones() as usize)) % 2 == 1 {
            total = &total - &prod;
        } else {
            total += &prod;
        }
    }
    Ok(total)
}

/// Coefficients (index = degree) of the unique polynomial of degree
/// `< values.len()` taking `values[i]` at the integer node `i`, by Newton's
/// divided differences, exactly.
pub fn interpolate_univariate(values: &[Rat]) -> Vec<Rat> {
    let n = values.len();
    // Divided-difference table on nodes 0, 1, ..., n-1.
    let mut dd: Vec<Rat> = values.to_vec();
    let mut newton: Vec<Rat> = Vec::with_capacity(n);
    for level in 0..n {
        newton.push(dd[0].clone());
        let width = rat(level as i64 + 1);
        for i in 0..n - level - 1 {
            dd[i] = (&dd[i + 1] - &dd[i]) / &width;
        }
        dd.truncate(n - level - 1);
    }
    // Expand sum_k newton[k] * prod_{i<k} (x - i) into monomial coefficients.
    let mut coeffs = vec![Rat::zero(); n];
    let mut basis = vec![Rat::zero(); n]; // coefficients of prod_{i<k} (x - i)
    basis[0] = rat(1);
    let mut basis_deg = 0;
    for (k, nk) in newton.iter().enumerate() {
        if k > 0 {
            // Multiply the basis polynomial by (x - (k-1)).
            let root = rat(k as i64 - 1);
            for d in (0..=basis_deg).rev() {
                let b = basis[d].clone();
                basis[d + 1] += &b;
                basis[d] = -(&b * &root);
            }
            basis_deg += 1;
        }
        for d in 0..=basis_deg {
            coeffs[d] += &basis[d] * nk;
        }
    }
    coeffs
}

/// Recovers the coefficient of `x^a y^b` in `imm_lambda(G)` by evaluating
/// the immanant on an exact integer substitution grid and solving the
/// Vandermonde systems. Requires every arc weight to be a rational multiple
/// of a single monomial in {1, x, y}. The result must (and does, see the
/// test suite) equal `immanant(lambda, G).coeff(a, b)`.
pub fn interpolate_immanant_coefficient(
    lambda: &Partition,
    g: &WeightedDigraph,
    a: u32,
    b: u32,
) -> Result<Rat> {
    let mut dx = 0u32;
    let mut dy = 0u32;
    for (&(u, v), w) in g.arcs() {
        match w.as_monomial() {
            Some((_, 0, 0)) => {}
            Some((_, 1, 0)) => dx += 1,
            Some((_, 0, 1)) => dy += 1,
            _ => {
                return Err(Error::Precondition(format!(
                    "arc ({u},{v}) weight {w} is not a rational multiple of 1, x, or y"
                )))
            }
        }
    }
    if a > dx || b > dy {
        return Ok(Rat::zero());
    }
    let mut cache = CharacterCache::new();
    // values[j][i] = imm at (x = i, y = j).
    let mut per_y: Vec<Vec<Rat>> = Vec::with_capacity(dy as usize + 1);
    for j in 0..=dy {
        let mut row = Vec::with_capacity(dx as usize + 1);
        for i in 0..=dx {
            let gi = g.substitute(&rat(i as i64), &rat(j as i64));
            let val = immanant_with_cache(lambda, &gi, &mut cache)?;
            debug_assert!(val.is_constant());
            row.push(val.constant_term());
        }
        // Coefficients in x of the slice y = j.
        per_y.push(interpolate_univariate(&row));
    }
    // For the fixed x-degree a, interpolate across y.
    let slice: Vec<Rat> = per_y.iter().map(|cs| cs[a as usize].clone()).collect();
    let coeffs_y = interpolate_univariate(&slice);
    Ok(coeffs_y[b as usize].clone())
}

/// Parses a monomial weight: optional sign, a rational `p` or `p/q`, and an
/// optional indeterminate suffix `x` or `y` (e.g. `3x`, `-1/2`, `2y`). A bare
/// `x`/`y` with implied coefficient 1 is also accepted.
pub fn parse_weight(s: &str) -> Result<Poly2> {
    let s = s.trim();
    let (body, var) = match s.strip_suffix('x') {
        Some(b) => (b, Some('x')),
        None => match s.strip_suffix('y') {
            Some(b) => (b, Some('y')),
            None => (s, None),
        },
    };
    let body = body.trim();
    let coeff: Rat = if body.is_empty() || body == "-" || body == "+" {
        if var.is_none() {
            return Err(Error::Parse(format!("invalid weight `{s}`")));
        }
        if body == "-" {
            rat(-1)
        } else {
            rat(1)
        }
    } else {
        body.parse::<Rat>()
            .map_err(|_| Error::Parse(format!("invalid weight `{s}`")))?
    };
    let (a, b) = match var {
        None => (0, 0),
        Some('x') => (1, 0),
        Some(_) => (0, 1),
    };
    let w = Poly2::monomial(coeff, a, b);
    Ok(w)
}

/// Serializes a monomial weight in the grammar accepted by [`parse_weight`].
pub fn format_weight(w: &Poly2) -> Result<String> {
    let (c, a, b) = w
        .as_monomial()
        .ok_or_else(|| Error::Precondition(format!("weight {w} is not a monomial")))?;
    let suffix = match (a, b) {
        (0, 0) => "",
        (1, 0) => "x",
        (0, 1) => "y",
        _ => {
            return Err(Error::Precondition(format!(
                "weight {w} is not linear in a single indeterminate"
            )))
        }
    };
    Ok(format!("{c}{suffix}"))
}

/// Parses the digraph file format: `#` comments, a `digraph <n>` header,
/// then one `u v <weight>` line per arc (0-based endpoints).
pub fn parse_digraph(text: &str) -> Result<WeightedDigraph> {
    let mut lines = content_lines(text);
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty digraph file".into()))?;
    let mut it = header.split_whitespace();
    if it.next() != Some("digraph") {
        return Err(Error::Parse("expected `digraph <n>` header".into()));
    }
    let n: usize = it
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| Error::Parse("invalid vertex count in digraph header".into()))?;
    if it.next().is_some() {
        return Err(Error::Parse("trailing tokens in digraph header".into()));
    }
    let mut g = WeightedDigraph::new(n);
    for line in lines {
        let mut it = line.split_whitespace();
        let (u, v) = parse_endpoints(&mut it, line)?;
        let w = parse_weight(&collect_rest(&mut it, line)?)?;
        g.add_arc(u, v, w)?;
    }
    Ok(g)
}

/// Serializes a digraph in the format accepted by [`parse_digraph`].
pub fn format_digraph(g: &WeightedDigraph) -> Result<String> {
    let mut out = String::new();
    writeln!(out, "digraph {}", g.n()).unwrap();
    for (&(u, v), w) in g.arcs() {
        writeln!(out, "{u} {v} {}", format_weight(w)?).unwrap();
    }
    Ok(out)
}

pub(crate) fn content_lines(text: &str) -> impl Iterator<Item = &str> {
    text.lines()
        .map(|l| match l.find('#') {
            Some(i) => l[..i].trim(),
            None => l.trim(),
        })
        .filter(|l| !l.is_empty())
}

pub(crate) fn parse_endpoints<'a>(
    it: &mut impl Iterator<Item = &'a str>,
    line: &str,
) -> Result<(usize, usize)> {
    let u = it
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| Error::Parse(format!("bad arc line `{line}`")))?;
    let v = it
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| Error::Parse(format!("bad arc line `{line}`")))?;
    Ok((u, v))
}

pub(crate) fn collect_rest<'a>(
    it: &mut impl Iterator<Item = &'a str>,
    line: &str,
) -> Result<String> {
    let rest: Vec<&str> = it.collect();
    if rest.is_empty() {
        return Err(Error::Parse(format!("missing weight in line `{line}`")));
    }
    Ok(rest.join(""))
}

/// Signum helper used by tests: the sign of a permutation given its format.
pub fn format_sign(rho: &Partition) -> i64 {
    if (rho.size() - rho.len()) % 2 == 0 {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratio;

    fn p(s: &str) -> Partition {
        Partition::parse(s).unwrap()
    }

    fn unit_digon() -> WeightedDigraph {
        let mut g = WeightedDigraph::new(2);
        g.add_arc(0, 1, Poly2::one()).unwrap();
        g.add_arc(1, 0, Poly2::one()).unwrap();
        g
    }

    #[test]
    fn cycle_cover_enumeration() {
        // A directed 3-cycle has exactly one cover, of format (3).
        let mut g = WeightedDigraph::new(3);
        for (u, v) in [(0, 1), (1, 2), (2, 0)] {
            g.add_arc(u, v, Poly2::one()).unwrap();
        }
        let mut formats = Vec::new();
        g.for_each_cycle_cover(|s| formats.push(cycle_format(s)));
        assert_eq!(formats, vec![p("3")]);
        // Two isolated looped vertices: one cover, format (1,1).
        let mut g = WeightedDigraph::new(2);
        g.add_arc(0, 0, Poly2::one()).unwrap();
        g.add_arc(1, 1, Poly2::one()).unwrap();
        let mut formats = Vec::new();
        g.for_each_cycle_cover(|s| formats.push(cycle_format(s)));
        assert_eq!(formats, vec![p("1,1")]);
        // Complete digraph without loops on 3 vertices: derangements of 3.
        let mut g = WeightedDigraph::new(3);
        for u in 0..3 {
            for v in 0..3 {
                if u != v {
                    g.add_arc(u, v, Poly2::one()).unwrap();
                }
            }
        }
        let mut count = 0;
        g.for_each_cycle_cover(|_| count += 1);
        assert_eq!(count, 2);
        // Complete digraph with loops on n vertices: n! covers.
        for n in 1..=5 {
            let mut g = WeightedDigraph::new(n);
            for u in 0..n {
                for v in 0..n {
                    g.add_arc(u, v, Poly2::one()).unwrap();
                }
            }
            let mut count = 0usize;
            g.for_each_cycle_cover(|_| count += 1);
            assert_eq!(count, (1..=n).product::<usize>());
        }
    }

    #[test]
    fn immanant_examples() {
        let g = unit_digon();
        assert_eq!(
            immanant(&p("1,1"), &g).unwrap(),
            Poly2::constant(rat(-1))
        );
        assert_eq!(immanant(&p("2"), &g).unwrap(), Poly2::one());
        let mut loopy = WeightedDigraph::new(1);
        loopy.add_arc(0, 0, Poly2::constant(rat(5))).unwrap();
        assert_eq!(immanant(&p("1"), &loopy).unwrap(), Poly2::constant(rat(5)));
        assert!(immanant(&p("3"), &g).is_err());
    }

    #[test]
    fn cc_sum_examples() {
        let mut tri = WeightedDigraph::new(3);
        for (u, v) in [(0, 1), (1, 2), (2, 0)] {
            tri.add_arc(u, v, Poly2::one()).unwrap();
        }
        assert_eq!(cc_sum(&tri, &p("3")).unwrap(), Poly2::one());
        assert_eq!(cc_sum(&tri, &p("1,1,1")).unwrap(), Poly2::zero());
        // Identity: sum_rho chi_lambda(rho) cc_sum(G, rho) = imm_lambda(G).
        let mut g = WeightedDigraph::new(3);
        let ws = [2, -1, 3, 1, 1, -2, 5, 1, 7];
        for u in 0..3 {
            for v in 0..3 {
                g.add_arc(u, v, Poly2::constant(rat(ws[3 * u + v]))).unwrap();
            }
        }
        for lam in Partition::all_of(3) {
            let mut total = Poly2::zero();
            for rho in Partition::all_of(3) {
                let chi = crate::characters::character(&lam, &rho).unwrap();
                total += &cc_sum(&g, &rho).unwrap().scale(&Rat::from_integer(chi));
            }
            assert_eq!(total, immanant(&lam, &g).unwrap());
        }
    }

    #[test]
    fn det_per_oracles() {
        let id: Vec<Vec<Poly2>> = (0..3)
            .map(|i| {
                (0..3)
                    .map(|j| if i == j { Poly2::one() } else { Poly2::zero() })
                    .collect()
            })
            .collect();
        assert_eq!(determinant(&id).unwrap(), Poly2::one());
        assert_eq!(permanent(&id).unwrap(), Poly2::one());
        let swap = vec![
            vec![Poly2::zero(), Poly2::one()],
            vec![Poly2::one(), Poly2::zero()],
        ];
        assert_eq!(determinant(&swap).unwrap(), Poly2::constant(rat(-1)));
        assert_eq!(permanent(&swap).unwrap(), Poly2::one());
        // Polynomial entries force the expansion path; check against the
        // cofactor value of [[x, 1], [y, x]]: x^2 - y.
        let m = vec![
            vec![Poly2::x(), Poly2::one()],
            vec![Poly2::y(), Poly2::x()],
        ];
        let d = determinant(&m).unwrap();
        assert_eq!(d.coeff(2, 0), rat(1));
        assert_eq!(d.coeff(0, 1), rat(-1));
        let per = permanent(&m).unwrap();
        assert_eq!(per.coeff(0, 1), rat(1));
    }

    #[test]
    fn univariate_interpolation_roundtrip() {
        // p(x) = 2 - x + 3x^2 at nodes 0, 1, 2.
        let values = vec![rat(2), rat(4), rat(12)];
        assert_eq!(interpolate_univariate(&values), vec![rat(2), rat(-1), rat(3)]);
        assert_eq!(interpolate_univariate(&[ratio(7, 3)]), vec![ratio(7, 3)]);
    }

    #[test]
    fn interpolation_examples() {
        // Single looped vertex of weight x: the x^1 coefficient is 1.
        let mut g = WeightedDigraph::new(1);
        g.add_arc(0, 0, Poly2::x()).unwrap();
        assert_eq!(
            interpolate_immanant_coefficient(&p("1"), &g, 1, 0).unwrap(),
            rat(1)
        );
        assert_eq!(
            interpolate_immanant_coefficient(&p("1"), &g, 0, 0).unwrap(),
            rat(0)
        );
        // No x or y arcs: any coefficient other than (0,0) vanishes and the
        // constant term equals the plain immanant.
        let g = unit_digon();
        assert_eq!(
            interpolate_immanant_coefficient(&p("1,1"), &g, 0, 0).unwrap(),
            rat(-1)
        );
        assert_eq!(
            interpolate_immanant_coefficient(&p("1,1"), &g, 1, 0).unwrap(),
            rat(0)
        );
        // A mixed x/y graph: loops x, y, 1 on three vertices plus a digon.
        let mut g = WeightedDigraph::new(3);
        g.add_arc(0, 0, Poly2::x()).unwrap();
        g.add_arc(1, 1, Poly2::y()).unwrap();
        g.add_arc(2, 2, Poly2::constant(rat(3))).unwrap();
        g.add_arc(0, 1, Poly2::constant(rat(2))).unwrap();
        g.add_arc(1, 0, Poly2::constant(rat(5))).unwrap();
        for lam in Partition::all_of(3) {
            let exact = immanant(&lam, &g).unwrap();
            for a in 0..=1 {
                for b in 0..=1 {
                    assert_eq!(
                        interpolate_immanant_coefficient(&lam, &g, a, b).unwrap(),
                        exact.coeff(a, b),
                        "lambda={lam}, ({a},{b})"
                    );
                }
            }
        }
    }

    #[test]
    fn digraph_file_roundtrip() {
        let text = "# demo\ndigraph 3\n0 1 3x\n1 0 -1/2\n2 2 2y\n";
        let g = parse_digraph(text).unwrap();
        assert_eq!(g.n(), 3);
        assert_eq!(g.arc_weight(0, 1), Some(&Poly2::monomial(rat(3), 1, 0)));
        assert_eq!(g.arc_weight(1, 0), Some(&Poly2::constant(ratio(-1, 2))));
        assert_eq!(g.arc_weight(2, 2), Some(&Poly2::monomial(rat(2), 0, 1)));
        let text2 = format_digraph(&g).unwrap();
        assert_eq!(parse_digraph(&text2).unwrap(), g);
        assert!(parse_digraph("digraph 2\n0 1 1\n0 1 2\n").is_err());
        assert!(parse_digraph("digraph 2\n0 5 1\n").is_err());
        assert!(parse_weight("3z").is_err());
        assert_eq!(parse_weight("-x").unwrap(), Poly2::monomial(rat(-1), 1, 0));
    }
}
