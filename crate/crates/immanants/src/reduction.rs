//! Compiles matching-counting instances into immanant instances.
//!
//! Two routes are implemented. The *staircase* route spends the staircase
//! part of `lambda`: matched edges ride on long odd cycles threaded through
//! transit vertices, and the onion cycle format `rho` is the only format
//! with a nonzero character, so `imm_lambda(G)` collapses to a single
//! format-restricted cover sum. The *tetromino* route spends the
//! non-vanishing-tetromino supply `s(lambda)`: each host edge becomes a
//! 4-vertex gadget whose inconsistent states cancel, leaving one passive
//! state (weight -1) and four active states (weight `w`, cycle formats
//! `(2,2)` twice and `(4)` twice), so the immanant factors through the
//! extended character on the product `theta_s`.
//!
//! Every builder returns the graph together with the exact constant `c` and
//! the extraction target, and [`certify`] replays the identity against
//! brute-force matching enumeration on desk-scale instances.

use crate::characters::{character, character_on_product, theta_product, CharacterCache};
use crate::digraph::{
    cycle_format, interpolate_immanant_coefficient, WeightedDigraph,
};
use crate::error::{Error, Result};
use crate::gadget::{builtin_gadget, enumerate_local_states, EdgeGadget};
use crate::matching::BipartiteGraph;
use crate::partition::{onion_from_stats, two_core, OnionFormat, Partition, PartitionStats};
use crate::poly::Poly2;
use crate::Rat;
use num::traits::Zero;
use num::BigInt;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::fmt::Write as _;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Route {
    Staircase,
    Tetromino,
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Route::Staircase => write!(f, "staircase"),
            Route::Tetromino => write!(f, "tetromino"),
        }
    }
}

impl std::str::FromStr for Route {
    type Err = Error;
    fn from_str(s: &str) -> Result<Route> {
        match s {
            "staircase" => Ok(Route::Staircase),
            "tetromino" => Ok(Route::Tetromino),
            _ => Err(Error::Parse(format!("unknown route `{s}`"))),
        }
    }
}

/// What to read off the immanant: the full value, or one coefficient.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Target {
    Value,
    Coefficient { x_deg: u32, y_deg: u32 },
}

/// One gadget copy embedded in the host graph, with the host-arc sets of
/// its admissible (passive + active) local states precomputed for the
/// consistency check.
#[derive(Clone, Debug)]
pub struct GadgetInstance {
    pub verts: [usize; 4],
    all_arcs: BTreeSet<(usize, usize)>,
    allowed: Vec<Vec<(usize, usize)>>,
}

impl GadgetInstance {
    pub fn new(gadget: &EdgeGadget, verts: [usize; 4]) -> GadgetInstance {
        let all_arcs = gadget
            .arcs()
            .map(|(&(s, t), _)| (verts[s], verts[t]))
            .collect();
        let mut allowed = Vec::new();
        for dv in [[true; 4], [false; 4]] {
            for state in enumerate_local_states(gadget, dv) {
                let mut arcs: Vec<(usize, usize)> = state
                    .arcs
                    .iter()
                    .map(|&(s, t)| (verts[s], verts[t]))
                    .collect();
                arcs.sort_unstable();
                allowed.push(arcs);
            }
        }
        GadgetInstance { verts, all_arcs, allowed }
    }

    /// Whether the cover's restriction to this gadget is one of the
    /// admissible local states.
    pub fn consistent(&self, succ: &[usize]) -> bool {
        let mut used: Vec<(usize, usize)> = Vec::with_capacity(4);
        for &s in &self.verts {
            let arc = (s, succ[s]);
            if self.all_arcs.contains(&arc) {
                used.push(arc);
            }
        }
        used.sort_unstable();
        self.allowed.iter().any(|a| a == &used)
    }
}

/// A compiled reduction instance.
#[derive(Clone, Debug)]
pub struct ReductionOutput {
    pub g: WeightedDigraph,
    pub c: Rat,
    pub route: Route,
    pub target: Target,
    /// The onion format (staircase route only).
    pub rho: Option<Partition>,
    pub lambda: Partition,
    /// Isolated padding/slack edges added to H (unit weight on the PM
    /// route, weight `y` on the k-match route).
    pub padded_isolated_edges: usize,
    /// Gadget copies (tetromino route only).
    pub gadgets: Vec<GadgetInstance>,
}

fn fact(n: usize) -> BigInt {
    (1..=n as u64).map(BigInt::from).product()
}

fn sign_pow(e: usize) -> BigInt {
    if e % 2 == 0 {
        BigInt::from(1)
    } else {
        BigInt::from(-1)
    }
}

fn add_digons(g: &mut WeightedDigraph, next: &mut usize, count: usize) -> Result<()> {
    for _ in 0..count {
        let (p, q) = (*next, *next + 1);
        *next += 2;
        g.add_arc(p, q, Poly2::one())?;
        g.add_arc(q, p, Poly2::one())?;
    }
    Ok(())
}

fn add_loops(g: &mut WeightedDigraph, next: &mut usize, count: usize) -> Result<()> {
    for _ in 0..count {
        g.add_arc(*next, *next, Poly2::one())?;
        *next += 1;
    }
    Ok(())
}

fn check_budget(next: usize, lambda: &Partition) -> Result<()> {
    if next != lambda.size() {
        return Err(Error::Internal(format!(
            "vertex budget: built {next} vertices but |lambda| = {}",
            lambda.size()
        )));
    }
    Ok(())
}

/// Inverts an integer constant, rejecting zero as a falsified theorem.
fn invert_constant(value: BigInt, what: &str) -> Result<Rat> {
    if value.is_zero() {
        return Err(Error::Internal(format!("{what} is zero")));
    }
    Ok(Rat::from_integer(value).recip())
}

fn staircase_pm_plan(
    stats: &PartitionStats,
    n_half: usize,
) -> std::result::Result<(usize, OnionFormat), Vec<String>> {
    let mut failures = Vec::new();
    if stats.w == 0 {
        failures.push("w(lambda) >= 1 (no staircase, hence no onion)".into());
        return Err(failures);
    }
    let l = (0..=stats.w / 2).find(|&l| l * (stats.w - l) >= n_half);
    let Some(l) = l else {
        failures.push(format!(
            "l*(w-l) >= n/2 for some l <= w/2 (w = {}, n/2 = {n_half})",
            stats.w
        ));
        return Err(failures);
    };
    let onion = onion_from_stats(stats, l).expect("l <= w/2 by construction");
    Ok((l, onion))
}

/// The staircase perfect-matching reduction: `#PerfMatch(H) =
/// c * imm_lambda(G)` with `c = 1/((n_padded/2)! * chi_lambda(rho))`.
pub fn build_staircase_pm(h: &BipartiteGraph, lambda: &Partition) -> Result<ReductionOutput> {
    if h.n_left() != h.n_right() {
        return Err(Error::Precondition(format!(
            "perfect matchings need equal sides, got {} x {}",
            h.n_left(),
            h.n_right()
        )));
    }
    let stats = two_core(lambda);
    let (l, onion) = staircase_pm_plan(&stats, h.n_left())
        .map_err(|f| Error::InsufficientResources(f.join("; ")))?;
    let k_hat = onion.accommodated_edges;
    let pad = k_hat - h.n_left();
    let theta_size = onion.theta.size();

    let mut g = WeightedDigraph::new(lambda.size());
    // Layout: L = 0..k_hat, R = k_hat..2k_hat, T = 2k_hat..2k_hat+l,
    // then padding digons and loops.
    let right = |r: usize| k_hat + r;
    let transit = |t: usize| 2 * k_hat + t;
    for (&(lft, r), w) in h.edges() {
        g.add_arc(lft, right(r), w.clone())?;
    }
    for i in h.n_left()..k_hat {
        g.add_arc(i, right(i), Poly2::one())?;
    }
    for r in 0..k_hat {
        for lft in 0..k_hat {
            g.add_arc(right(r), lft, Poly2::one())?;
        }
        for t in 0..l {
            g.add_arc(right(r), transit(t), Poly2::one())?;
        }
    }
    for t in 0..l {
        for lft in 0..k_hat {
            g.add_arc(transit(t), lft, Poly2::one())?;
        }
    }
    let mut next = 2 * k_hat + l;
    add_digons(&mut g, &mut next, stats.d)?;
    add_loops(&mut g, &mut next, stats.z - theta_size)?;
    check_budget(next, lambda)?;

    let chi = character(lambda, &onion.format)?;
    let c = invert_constant(fact(k_hat) * chi, "chi_lambda(rho) (onion format)")?;
    Ok(ReductionOutput {
        g,
        c,
        route: Route::Staircase,
        target: Target::Value,
        rho: Some(onion.format),
        lambda: lambda.clone(),
        padded_isolated_edges: pad,
        gadgets: Vec::new(),
    })
}

fn staircase_kmatch_plan(
    stats: &PartitionStats,
    n: usize,
    k: usize,
) -> std::result::Result<(usize, OnionFormat), Vec<String>> {
    let mut failures = Vec::new();
    // Minimal l accommodating k edges; larger l only tightens the z budget.
    let l = (0..=stats.w / 2).find(|&l| l * (stats.w - l) >= k);
    let Some(l) = l else {
        failures.push(format!(
            "l*(w-l) >= k for some l <= w/2 (w = {}, k = {k})",
            stats.w
        ));
        return Err(failures);
    };
    let onion = onion_from_stats(stats, l).expect("l <= w/2 by construction");
    let k_hat = onion.accommodated_edges;
    let theta_size = onion.theta.size();
    if stats.z - theta_size < 2 * k_hat {
        failures.push(format!(
            "z - |theta| >= 2*k_hat ({} - {} < {})",
            stats.z,
            theta_size,
            2 * k_hat
        ));
    }
    // n_aug - 2*k_hat = n - 2k independently of l.
    if stats.d + 2 * k < n {
        failures.push(format!(
            "d >= n_aug - 2*k_hat, i.e. d >= n - 2k ({} < {} - {})",
            stats.d,
            n,
            2 * k
        ));
    }
    if failures.is_empty() {
        Ok((l, onion))
    } else {
        Err(failures)
    }
}

/// The staircase k-matching reduction: `#Match(H,k) =
/// c * [x^{2*k_hat} y^{k_hat - k}] imm_lambda(G)` with
/// `c = 1/(k_hat! * chi_lambda(rho))`. Slack between the onion capacity
/// `k_hat` and `k` is absorbed by isolated edges of weight `y`, which the
/// `y`-exponent pins into the matching.
pub fn build_staircase_kmatch(
    h: &BipartiteGraph,
    k: usize,
    lambda: &Partition,
) -> Result<ReductionOutput> {
    let stats = two_core(lambda);
    let n = h.total_vertices();
    let (l, onion) = staircase_kmatch_plan(&stats, n, k)
        .map_err(|f| Error::InsufficientResources(f.join("; ")))?;
    let k_hat = onion.accommodated_edges;
    let j = k_hat - k;
    let theta_size = onion.theta.size();
    let (n_la, n_ra) = (h.n_left() + j, h.n_right() + j);
    let n_aug = n + 2 * j;

    let mut g = WeightedDigraph::new(lambda.size());
    // Layout: L = 0..n_la, R = n_la..n_la+n_ra, T = next l vertices,
    // switches (one per L and R vertex, same order), padding digons, loops.
    let right = |r: usize| n_la + r;
    let transit = |t: usize| n_la + n_ra + t;
    let switch = |p: usize| n_la + n_ra + l + p;
    for (&(lft, r), w) in h.edges() {
        g.add_arc(lft, right(r), w.clone())?;
    }
    for s in 0..j {
        g.add_arc(h.n_left() + s, right(h.n_right() + s), Poly2::y())?;
    }
    for r in 0..n_ra {
        for lft in 0..n_la {
            g.add_arc(right(r), lft, Poly2::one())?;
        }
        for t in 0..l {
            g.add_arc(right(r), transit(t), Poly2::one())?;
        }
    }
    for t in 0..l {
        for lft in 0..n_la {
            g.add_arc(transit(t), lft, Poly2::one())?;
        }
    }
    for p in 0..n_aug {
        g.add_arc(p, switch(p), Poly2::one())?;
        g.add_arc(switch(p), p, Poly2::one())?;
        g.add_arc(switch(p), switch(p), Poly2::x())?;
    }
    let mut next = 2 * n_aug + l;
    add_digons(&mut g, &mut next, stats.d - (n_aug - 2 * k_hat))?;
    add_loops(&mut g, &mut next, stats.z - theta_size - 2 * k_hat)?;
    check_budget(next, lambda)?;

    let chi = character(lambda, &onion.format)?;
    let c = invert_constant(fact(k_hat) * chi, "chi_lambda(rho) (onion format)")?;
    Ok(ReductionOutput {
        g,
        c,
        route: Route::Staircase,
        target: Target::Coefficient { x_deg: 2 * k_hat as u32, y_deg: j as u32 },
        rho: Some(onion.format),
        lambda: lambda.clone(),
        padded_isolated_edges: j,
        gadgets: Vec::new(),
    })
}

fn tetromino_pm_failures(stats: &PartitionStats, s: usize, n: usize, m: usize) -> Vec<String> {
    let mut failures = Vec::new();
    if s < n / 2 {
        failures.push(format!("s(lambda) >= n/2 ({s} < {})", n / 2));
    }
    if stats.d < n / 2 + m {
        failures.push(format!("d >= n/2 + m ({} < {})", stats.d, n / 2 + m));
    }
    if stats.d < n {
        failures.push(format!(
            "d >= n (theta_(n/2) spends n dominos; {} < {n})",
            stats.d
        ));
    }
    failures
}

/// The tetromino perfect-matching reduction: `imm_lambda(G) =
/// c1 * #PerfMatch(H)` with `c1 = (-1)^(m - n/2) * 2^(n/2) *
/// chi_lambda(theta_(n/2))`; `c = 1/c1`.
pub fn build_tetromino_pm(h: &BipartiteGraph, lambda: &Partition) -> Result<ReductionOutput> {
    if h.n_left() != h.n_right() {
        return Err(Error::Precondition(format!(
            "perfect matchings need equal sides, got {} x {}",
            h.n_left(),
            h.n_right()
        )));
    }
    let stats = two_core(lambda);
    let (s_supply, _) = crate::partition::tetromino_number(lambda);
    let (n, m) = (h.total_vertices(), h.edge_count());
    let failures = tetromino_pm_failures(&stats, s_supply, n, m);
    if !failures.is_empty() {
        return Err(Error::InsufficientResources(failures.join("; ")));
    }
    let gadget = builtin_gadget();
    let mut g = WeightedDigraph::new(lambda.size());
    // Layout: host vertices 0..n (left then right), two internals per
    // gadget, padding digons, loops.
    let mut next = n;
    let mut gadgets = Vec::new();
    for (&(lft, r), w) in h.edges() {
        let verts = [lft, h.n_left() + r, next, next + 1];
        next += 2;
        gadget.instantiate(&mut g, verts, w)?;
        gadgets.push(GadgetInstance::new(&gadget, verts));
    }
    add_digons(&mut g, &mut next, stats.d - (n / 2 + m))?;
    add_loops(&mut g, &mut next, stats.z)?;
    check_budget(next, lambda)?;

    let chi = character_on_product(lambda, &theta_product(lambda, n / 2)?)?;
    // (-1)^(m - n/2) = (-1)^(m + n/2), which cannot underflow when m < n/2.
    let c1 = sign_pow(m + n / 2) * BigInt::from(2u32).pow(n as u32 / 2) * chi;
    let c = invert_constant(c1, "c1 = (-1)^(m-n/2) * 2^(n/2) * chi_lambda(theta_(n/2))")?;
    Ok(ReductionOutput {
        g,
        c,
        route: Route::Tetromino,
        target: Target::Value,
        rho: None,
        lambda: lambda.clone(),
        padded_isolated_edges: 0,
        gadgets,
    })
}

fn tetromino_kmatch_failures(
    stats: &PartitionStats,
    s: usize,
    n: usize,
    m: usize,
    k: usize,
) -> Vec<String> {
    let mut failures = Vec::new();
    if s < 3 * k {
        failures.push(format!("s(lambda) >= 3k ({s} < {})", 3 * k));
    }
    if stats.d < m + n + 2 * k * n + k {
        failures.push(format!(
            "d >= m + n + 2kn + k ({} < {})",
            stats.d,
            m + n + 2 * k * n + k
        ));
    }
    if stats.d < 6 * k {
        failures.push(format!(
            "d >= 6k (theta_(3k) spends 6k dominos; {} < {})",
            stats.d,
            6 * k
        ));
    }
    failures
}

/// The tetromino k-matching reduction: `imm_lambda(G) = c2 * #Match(H,k)`
/// with `c2 = (-1)^(m + 2kn - 3k) * (2k)! * 2^(3k) * chi_lambda(theta_(3k))`;
/// `c = 1/c2`. The 2k receptor vertices force exactly 2k switches (hence k
/// host edges) active.
pub fn build_tetromino_kmatch(
    h: &BipartiteGraph,
    k: usize,
    lambda: &Partition,
) -> Result<ReductionOutput> {
    let stats = two_core(lambda);
    let (s_supply, _) = crate::partition::tetromino_number(lambda);
    let (n, m) = (h.total_vertices(), h.edge_count());
    let failures = tetromino_kmatch_failures(&stats, s_supply, n, m, k);
    if !failures.is_empty() {
        return Err(Error::InsufficientResources(failures.join("; ")));
    }
    let gadget = builtin_gadget();
    let mut g = WeightedDigraph::new(lambda.size());
    // Layout: host 0..n, switches n..2n, receptors 2n..2n+2k, gadget
    // internals, padding digons, loops.
    let switch = |p: usize| n + p;
    let receptor = |i: usize| 2 * n + i;
    for p in 0..n {
        g.add_arc(p, switch(p), Poly2::one())?;
        g.add_arc(switch(p), p, Poly2::one())?;
    }
    let mut next = 2 * n + 2 * k;
    let mut gadgets = Vec::new();
    for (&(lft, r), w) in h.edges() {
        let verts = [lft, h.n_left() + r, next, next + 1];
        next += 2;
        gadget.instantiate(&mut g, verts, w)?;
        gadgets.push(GadgetInstance::new(&gadget, verts));
    }
    for i in 0..2 * k {
        for p in 0..n {
            let verts = [receptor(i), switch(p), next, next + 1];
            next += 2;
            gadget.instantiate(&mut g, verts, &Poly2::one())?;
            gadgets.push(GadgetInstance::new(&gadget, verts));
        }
    }
    let d_prime = stats.d - (m + n + 2 * k * n + k);
    // The digon supply d - 6k must be exactly accounted for by unmatched
    // switches, passive gadgets, and padding (signed arithmetic: the
    // passive-gadget count m + 2kn - 3k can be negative only for n < 2,
    // where no k-matching exists anyway).
    let (di, ni, mi, ki, dpi) =
        (stats.d as i64, n as i64, m as i64, k as i64, d_prime as i64);
    if di - 6 * ki != (ni - 2 * ki) + (mi + 2 * ki * ni - 3 * ki) + dpi {
        return Err(Error::Internal("digon budget does not balance".into()));
    }
    add_digons(&mut g, &mut next, d_prime)?;
    add_loops(&mut g, &mut next, stats.z)?;
    check_budget(next, lambda)?;

    let chi = character_on_product(lambda, &theta_product(lambda, 3 * k)?)?;
    // (-1)^(m + 2kn - 3k) = (-1)^(m + 2kn + 3k): avoids underflow for n < 2.
    let c2 = sign_pow(m + 2 * k * n + 3 * k)
        * fact(2 * k)
        * BigInt::from(2u32).pow(3 * k as u32)
        * chi;
    let c = invert_constant(c2, "c2 = (-1)^(m+2kn-3k) * (2k)! * 2^(3k) * chi_lambda(theta_(3k))")?;
    Ok(ReductionOutput {
        g,
        c,
        route: Route::Tetromino,
        target: Target::Value,
        rho: None,
        lambda: lambda.clone(),
        padded_isolated_edges: 0,
        gadgets,
    })
}

/// Picks a satisfiable route for the instance, preferring the tetromino
/// route (its PM variant needs no coefficient extraction). Errors list the
/// failed inequalities of both routes.
pub fn choose_route(h: &BipartiteGraph, k: Option<usize>, lambda: &Partition) -> Result<Route> {
    let stats = two_core(lambda);
    let (s_supply, _) = crate::partition::tetromino_number(lambda);
    let (n, m) = (h.total_vertices(), h.edge_count());
    let tetro = match k {
        None => tetromino_pm_failures(&stats, s_supply, n, m),
        Some(k) => tetromino_kmatch_failures(&stats, s_supply, n, m, k),
    };
    if tetro.is_empty() {
        return Ok(Route::Tetromino);
    }
    let stair = match k {
        None => staircase_pm_plan(&stats, h.n_left()).err(),
        Some(k) => staircase_kmatch_plan(&stats, n, k).err(),
    };
    match stair {
        None => Ok(Route::Staircase),
        Some(sf) => Err(Error::InsufficientResources(format!(
            "tetromino route: {}; staircase route: {}",
            tetro.join("; "),
            sf.join("; ")
        ))),
    }
}

/// Builds the reduction for the given route (PM when `k` is `None`).
pub fn build(
    h: &BipartiteGraph,
    k: Option<usize>,
    lambda: &Partition,
    route: Route,
) -> Result<ReductionOutput> {
    match (route, k) {
        (Route::Staircase, None) => build_staircase_pm(h, lambda),
        (Route::Staircase, Some(k)) => build_staircase_kmatch(h, k, lambda),
        (Route::Tetromino, None) => build_tetromino_pm(h, lambda),
        (Route::Tetromino, Some(k)) => build_tetromino_kmatch(h, k, lambda),
    }
}

/// The certification transcript: the brute-force matching count, the value
/// recovered through the immanant by direct enumeration and (where the
/// weights allow) by interpolation, and the route-specific structural
/// checks.
#[derive(Clone, Debug)]
pub struct CertifyReport {
    pub lhs: Poly2,
    pub rhs_enumerated: Poly2,
    pub rhs_interpolated: Option<Poly2>,
    /// Staircase route: every cover with at least `d` digons, the
    /// prescribed loop count, and a nonvanishing character has format `rho`.
    pub format_filter_ok: Option<bool>,
    /// Tetromino route: the immanant restricted to gadget-consistent covers
    /// equals the full immanant.
    pub consistent_only_ok: Option<bool>,
}

impl CertifyReport {
    pub fn passed(&self) -> bool {
        self.lhs == self.rhs_enumerated
            && self
                .rhs_interpolated
                .as_ref()
                .map_or(true, |v| v == &self.lhs)
            && self.format_filter_ok.unwrap_or(true)
            && self.consistent_only_ok.unwrap_or(true)
    }
}

/// Replays the reduction identity on a desk-scale instance: computes the
/// left side by brute-force matching enumeration and the right side through
/// the immanant, twice (exhaustive cycle covers and interpolation), plus
/// the structural invariants of the route.
pub fn certify(output: &ReductionOutput, h: &BipartiteGraph, k: Option<usize>) -> Result<CertifyReport> {
    let lhs = match k {
        None => h.perfect_matching_sum()?,
        Some(k) => h.matching_sum(k),
    };
    // One pass over the cycle covers collects everything at once.
    let mut format_sums: BTreeMap<Partition, Poly2> = BTreeMap::new();
    let mut consistent_sums: BTreeMap<Partition, Poly2> = BTreeMap::new();
    let mut filter_formats: BTreeSet<Partition> = BTreeSet::new();
    let (filter_digons, filter_loops) = match &output.rho {
        Some(rho) => {
            let digons = rho.parts().iter().filter(|&&p| p == 2).count();
            let loops = rho.parts().iter().filter(|&&p| p == 1).count();
            (digons, loops)
        }
        None => (0, 0),
    };
    output.g.for_each_cycle_cover(|succ| {
        let fmt = cycle_format(succ);
        let w = output.g.cover_weight(succ);
        if output.rho.is_some() {
            let digons = fmt.parts().iter().filter(|&&p| p == 2).count();
            let loops = fmt.parts().iter().filter(|&&p| p == 1).count();
            if digons >= filter_digons && loops == filter_loops {
                filter_formats.insert(fmt.clone());
            }
        }
        if !output.gadgets.is_empty() && output.gadgets.iter().all(|gi| gi.consistent(succ)) {
            consistent_sums
                .entry(fmt.clone())
                .and_modify(|acc| *acc += &w)
                .or_insert_with(|| w.clone());
        }
        format_sums
            .entry(fmt)
            .and_modify(|acc| *acc += &w)
            .or_insert(w);
    });
    let mut cache = CharacterCache::new();
    let mut weigh = |sums: &BTreeMap<Partition, Poly2>| -> Result<Poly2> {
        let mut total = Poly2::zero();
        for (fmt, wsum) in sums {
            let chi = cache.chi(&output.lambda, fmt)?;
            if !chi.is_zero() {
                total += &wsum.scale(&Rat::from_integer(chi));
            }
        }
        Ok(total)
    };
    let imm = weigh(&format_sums)?;
    let consistent_only_ok = if output.gadgets.is_empty() {
        None
    } else {
        Some(weigh(&consistent_sums)? == imm)
    };
    let format_filter_ok = match &output.rho {
        None => None,
        Some(rho) => {
            let mut ok = true;
            for fmt in &filter_formats {
                if fmt != rho && !cache.chi(&output.lambda, fmt)?.is_zero() {
                    ok = false;
                }
            }
            Some(ok)
        }
    };
    let extracted = match output.target {
        Target::Value => imm.clone(),
        Target::Coefficient { x_deg, y_deg } => Poly2::constant(imm.coeff(x_deg, y_deg)),
    };
    let rhs_enumerated = extracted.scale(&output.c);
    // Interpolation applies when every arc weight is a rational multiple of
    // 1, x, or y, and the target is a single coefficient (a Value target
    // qualifies when the immanant is constant).
    let interp_target = match output.target {
        Target::Coefficient { x_deg, y_deg } => Some((x_deg, y_deg)),
        Target::Value if imm.is_constant() => Some((0, 0)),
        Target::Value => None,
    };
    let weights_monomial = output.g.arcs().all(|(_, w)| {
        matches!(w.as_monomial(), Some((_, 0, 0)) | Some((_, 1, 0)) | Some((_, 0, 1)))
    });
    let rhs_interpolated = match interp_target {
        Some((a, b)) if weights_monomial => {
            let coeff = interpolate_immanant_coefficient(&output.lambda, &output.g, a, b)?;
            Some(Poly2::constant(coeff * &output.c))
        }
        _ => None,
    };
    Ok(CertifyReport {
        lhs,
        rhs_enumerated,
        rhs_interpolated,
        format_filter_ok,
        consistent_only_ok,
    })
}

/// Serializes the reduction metadata (key=value lines). `k` is recorded for
/// k-matching instances so that certification can be replayed from files.
pub fn format_metadata(output: &ReductionOutput, k: Option<usize>) -> String {
    let mut out = String::new();
    writeln!(out, "route={}", output.route).unwrap();
    writeln!(out, "lambda={}", output.lambda).unwrap();
    writeln!(out, "c={}", output.c).unwrap();
    match output.target {
        Target::Value => writeln!(out, "target=value").unwrap(),
        Target::Coefficient { x_deg, y_deg } => {
            writeln!(out, "target=coeff").unwrap();
            writeln!(out, "x_deg={x_deg}").unwrap();
            writeln!(out, "y_deg={y_deg}").unwrap();
        }
    }
    if let Some(rho) = &output.rho {
        writeln!(out, "rho={rho}").unwrap();
    }
    writeln!(out, "padded_isolated_edges={}", output.padded_isolated_edges).unwrap();
    if let Some(k) = k {
        writeln!(out, "k={k}").unwrap();
    }
    if !output.gadgets.is_empty() {
        let quads: Vec<String> = output
            .gadgets
            .iter()
            .map(|gi| {
                gi.verts
                    .iter()
                    .map(|v| v.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            })
            .collect();
        writeln!(out, "gadgets={}", quads.join(";")).unwrap();
    }
    out
}

/// Reconstructs a [`ReductionOutput`] (plus the recorded `k`) from the
/// metadata text and the separately parsed graph.
pub fn parse_metadata(
    text: &str,
    g: WeightedDigraph,
) -> Result<(ReductionOutput, Option<usize>)> {
    let mut map: BTreeMap<&str, &str> = BTreeMap::new();
    for line in crate::digraph::content_lines(text) {
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("bad metadata line `{line}`")))?;
        if map.insert(key.trim(), value.trim()).is_some() {
            return Err(Error::Parse(format!("duplicate metadata key `{key}`")));
        }
    }
    let get = |key: &str| -> Result<&str> {
        map.get(key)
            .copied()
            .ok_or_else(|| Error::Parse(format!("missing metadata key `{key}`")))
    };
    let route: Route = get("route")?.parse()?;
    let lambda = Partition::parse(get("lambda")?)?;
    let c: Rat = get("c")?
        .parse()
        .map_err(|_| Error::Parse("invalid rational in `c=`".into()))?;
    if c.is_zero() {
        return Err(Error::Parse("c must be nonzero".into()));
    }
    let target = match get("target")? {
        "value" => Target::Value,
        "coeff" => {
            let parse_deg = |key: &str| -> Result<u32> {
                get(key)?
                    .parse()
                    .map_err(|_| Error::Parse(format!("invalid `{key}=`")))
            };
            Target::Coefficient { x_deg: parse_deg("x_deg")?, y_deg: parse_deg("y_deg")? }
        }
        other => return Err(Error::Parse(format!("unknown target `{other}`"))),
    };
    let rho = match map.get("rho") {
        Some(s) => Some(Partition::parse(s)?),
        None => None,
    };
    let padded_isolated_edges: usize = get("padded_isolated_edges")?
        .parse()
        .map_err(|_| Error::Parse("invalid `padded_isolated_edges=`".into()))?;
    let k = match map.get("k") {
        Some(s) => Some(
            s.parse::<usize>()
                .map_err(|_| Error::Parse("invalid `k=`".into()))?,
        ),
        None => None,
    };
    let mut gadgets = Vec::new();
    if let Some(spec) = map.get("gadgets") {
        let gadget = builtin_gadget();
        for quad in spec.split(';') {
            let verts: Vec<usize> = quad
                .split(',')
                .map(|t| {
                    t.trim()
                        .parse()
                        .map_err(|_| Error::Parse(format!("invalid gadget vertex `{t}`")))
                })
                .collect::<Result<_>>()?;
            let verts: [usize; 4] = verts
                .try_into()
                .map_err(|_| Error::Parse("gadget entries need four vertices".into()))?;
            gadgets.push(GadgetInstance::new(&gadget, verts));
        }
    }
    if g.n() != lambda.size() {
        return Err(Error::SizeMismatch(format!(
            "graph has {} vertices but |lambda| = {}",
            g.n(),
            lambda.size()
        )));
    }
    Ok((
        ReductionOutput {
            g,
            c,
            route,
            target,
            rho,
            lambda,
            padded_isolated_edges,
            gadgets,
        },
        k,
    ))
}
