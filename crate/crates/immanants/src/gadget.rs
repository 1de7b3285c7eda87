//! The 4-vertex edge gadget used by the tetromino-route reductions, its
//! cancellation contract, a verifier, and an exhaustive search over a small
//! weight alphabet.
//!
//! A gadget has two endpoint vertices `u`, `v` (shared with the host graph)
//! and two internal vertices `a`, `b`. Arc weights are rational constants,
//! except for exactly two arcs carrying `+w` or `-w`, where `w` is the host
//! edge weight to be transported. Internally `w` is stored in the `x` slot
//! of [`Poly2`].
//!
//! In a cycle cover of a host graph, the gadget is left in one of six
//! balanced local configurations, described by the vector of *external*
//! degrees `(in_u, out_u, in_v, out_v)`. The contract is:
//!
//! * passive `(1,1,1,1)`: the internal digon group nets `-1`, everything
//!   else nets `0`;
//! * active `(0,0,0,0)`: the two-digon group (cycle format `(2,2)`) nets
//!   `2w`, the 4-cycle group (format `(4)`) nets `2w`, everything else `0`;
//! * the four mixed vectors: every group nets `0`.
//!
//! Groups collect local states that induce identical cycle structure in the
//! host (same open-path connections with the same lengths and the same
//! internal cycle format), so states in different groups can never cancel
//! against each other globally; the contract above is exactly what the
//! counting argument of the tetromino reductions consumes.

use crate::digraph::content_lines;
use crate::error::{Error, Result};
use crate::poly::Poly2;
use crate::{rat, Rat};
use num::traits::Zero;
use std::collections::BTreeMap;
use std::fmt::Write as _;

/// Vertex indices inside a gadget: endpoints first, internals second.
pub const GADGET_U: usize = 0;
pub const GADGET_V: usize = 1;
pub const GADGET_A: usize = 2;
pub const GADGET_B: usize = 3;

const VERTEX_COUNT: usize = 4;

/// A candidate (or verified) edge gadget.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeGadget {
    names: [String; VERTEX_COUNT],
    arcs: BTreeMap<(usize, usize), Poly2>,
}

impl EdgeGadget {
    /// Builds a gadget from arcs over the vertex indices
    /// [`GADGET_U`], [`GADGET_V`], [`GADGET_A`], [`GADGET_B`].
    /// Validates the structural rules: no loops, exactly two arcs of weight
    /// `+w` or `-w`, all other weights nonzero rational constants.
    pub fn new(arcs: BTreeMap<(usize, usize), Poly2>) -> Result<EdgeGadget> {
        let names = ["u", "v", "a", "b"].map(String::from);
        let mut w_arcs = 0;
        for (&(s, t), wt) in &arcs {
            if s >= VERTEX_COUNT || t >= VERTEX_COUNT {
                return Err(Error::Precondition(format!(
                    "gadget arc ({s},{t}) out of range"
                )));
            }
            if s == t {
                return Err(Error::Precondition("gadget arcs must not be loops".into()));
            }
            match wt.as_monomial() {
                Some((c, 0, 0)) if !c.is_zero() => {}
                Some((c, 1, 0)) if c == rat(1) || c == rat(-1) => w_arcs += 1,
                _ => {
                    return Err(Error::Precondition(format!(
                        "gadget arc ({s},{t}) weight {wt} is neither a nonzero \
                         rational nor +w/-w"
                    )))
                }
            }
        }
        if w_arcs != 2 {
            return Err(Error::Precondition(format!(
                "gadget must carry exactly two w-arcs, found {w_arcs}"
            )));
        }
        Ok(EdgeGadget { names, arcs })
    }

    pub fn arcs(&self) -> impl Iterator<Item = (&(usize, usize), &Poly2)> {
        self.arcs.iter()
    }

    /// Renames the four vertices (order: u, v, a, b) for display purposes.
    pub fn with_names(mut self, names: [&str; VERTEX_COUNT]) -> Self {
        self.names = names.map(String::from);
        self
    }

    /// Adds this gadget's arcs to a host digraph. `verts` maps the gadget
    /// vertices (u, v, a, b) to host vertex indices — endpoints to the host
    /// vertices of the edge being simulated, internals to fresh vertices.
    /// `w_value` is substituted for `w`.
    pub fn instantiate(
        &self,
        host: &mut crate::digraph::WeightedDigraph,
        verts: [usize; VERTEX_COUNT],
        w_value: &Poly2,
    ) -> Result<()> {
        for (&(s, t), wt) in &self.arcs {
            let (c, xdeg, _) = wt.as_monomial().expect("validated at construction");
            let weight = if xdeg == 1 {
                w_value.scale(&c)
            } else {
                Poly2::constant(c)
            };
            host.add_arc(verts[s], verts[t], weight)?;
        }
        Ok(())
    }
}

/// External degree vector `(in_u, out_u, in_v, out_v)`; `true` means the
/// host, not the gadget, supplies that arc.
pub type DegreeVector = [bool; 4];

/// The six balanced external degree vectors, active first (so verification
/// fails fast during search), passive last.
pub const BALANCED_VECTORS: [DegreeVector; 6] = [
    [false, false, false, false],
    [true, false, false, true],
    [false, true, true, false],
    [true, true, false, false],
    [false, false, true, true],
    [true, true, true, true],
];

/// How a local state wires into the host: the open path through the gadget
/// (if any) as `(start endpoint, end endpoint, arc count)`, plus the format
/// of purely internal cycles. States with different keys shape the global
/// cycle cover differently and can never cancel against each other.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct GroupKey {
    pub path: Option<(usize, usize, usize)>,
    pub cycles: Vec<usize>,
}

/// One admissible set of gadget arcs for a given external degree vector.
#[derive(Clone, Debug)]
pub struct LocalState {
    pub arcs: Vec<(usize, usize)>,
    pub key: GroupKey,
    pub weight: Poly2,
}

/// Enumerates the local states of `gadget` for external degree vector `dv`:
/// arc subsets giving every vertex exactly the internal in/out degrees the
/// vector leaves to the gadget (internals `a`, `b` are always fully
/// internal).
pub fn enumerate_local_states(gadget: &EdgeGadget, dv: DegreeVector) -> Vec<LocalState> {
    // needs_out[p] / needs_in[p]: vertex p must have an internal out-/in-arc.
    let needs_out = [!dv[1], !dv[3], true, true];
    let needs_in = [!dv[0], !dv[2], true, true];
    let sources: Vec<usize> = (0..VERTEX_COUNT).filter(|&p| needs_out[p]).collect();
    let mut states = Vec::new();
    let mut succ: [Option<usize>; VERTEX_COUNT] = [None; VERTEX_COUNT];
    let mut taken = [false; VERTEX_COUNT];
    fn rec(
        gadget: &EdgeGadget,
        sources: &[usize],
        i: usize,
        needs_in: &[bool; 4],
        succ: &mut [Option<usize>; 4],
        taken: &mut [bool; 4],
        states: &mut Vec<LocalState>,
    ) {
        if i == sources.len() {
            states.push(build_state(gadget, succ));
            return;
        }
        let s = sources[i];
        for t in 0..VERTEX_COUNT {
            if !needs_in[t] || taken[t] || !gadget.arcs.contains_key(&(s, t)) {
                continue;
            }
            succ[s] = Some(t);
            taken[t] = true;
            rec(gadget, sources, i + 1, needs_in, succ, taken, states);
            succ[s] = None;
            taken[t] = false;
        }
    }
    rec(gadget, &sources, 0, &needs_in, &mut succ, &mut taken, &mut states);
    states
}

fn build_state(gadget: &EdgeGadget, succ: &[Option<usize>; 4]) -> LocalState {
    let mut arcs = Vec::new();
    let mut weight = Poly2::one();
    for s in 0..VERTEX_COUNT {
        if let Some(t) = succ[s] {
            arcs.push((s, t));
            weight *= &gadget.arcs[&(s, t)];
        }
    }
    // Decompose into the open path (if any) and internal cycles.
    let mut visited = [false; VERTEX_COUNT];
    let mut path = None;
    // An open path starts at a vertex with an out-arc whose in-side is
    // external, i.e. no internal predecessor.
    for start in 0..VERTEX_COUNT {
        if succ[start].is_none() || (0..VERTEX_COUNT).any(|p| succ[p] == Some(start)) {
            continue;
        }
        let mut len = 0;
        let mut cur = start;
        visited[cur] = true;
        while let Some(next) = succ[cur] {
            len += 1;
            cur = next;
            visited[cur] = true;
        }
        debug_assert!(path.is_none(), "at most one open path in a 2-endpoint gadget");
        path = Some((start, cur, len));
    }
    let mut cycles = Vec::new();
    for start in 0..VERTEX_COUNT {
        if visited[start] || succ[start].is_none() {
            continue;
        }
        let mut len = 0;
        let mut cur = start;
        loop {
            visited[cur] = true;
            len += 1;
            cur = succ[cur].expect("cycle vertices have successors");
            if cur == start {
                break;
            }
        }
        cycles.push(len);
    }
    cycles.sort_unstable_by(|a, b| b.cmp(a));
    LocalState { arcs, key: GroupKey { path, cycles }, weight }
}

/// Net contributions per group for one degree vector.
pub type GroupSums = BTreeMap<GroupKey, Poly2>;

/// The full verification transcript: for each balanced vector, the group
/// sums, plus any contract violations.
#[derive(Clone, Debug)]
pub struct GadgetReport {
    pub per_vector: Vec<(DegreeVector, GroupSums)>,
    pub violations: Vec<String>,
}

impl GadgetReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

fn group_sums(gadget: &EdgeGadget, dv: DegreeVector) -> GroupSums {
    let mut sums: GroupSums = BTreeMap::new();
    for st in enumerate_local_states(gadget, dv) {
        sums.entry(st.key)
            .and_modify(|acc| *acc += &st.weight)
            .or_insert(st.weight);
    }
    sums.retain(|_, v| !v.is_zero());
    sums
}

fn expected_groups(dv: DegreeVector) -> Vec<(GroupKey, Poly2)> {
    match dv {
        [true, true, true, true] => vec![(
            GroupKey { path: None, cycles: vec![2] },
            Poly2::constant(rat(-1)),
        )],
        [false, false, false, false] => vec![
            (
                GroupKey { path: None, cycles: vec![2, 2] },
                Poly2::monomial(rat(2), 1, 0),
            ),
            (
                GroupKey { path: None, cycles: vec![4] },
                Poly2::monomial(rat(2), 1, 0),
            ),
        ],
        _ => vec![],
    }
}

fn vector_name(dv: DegreeVector) -> String {
    let bits: Vec<&str> = dv.iter().map(|&b| if b { "1" } else { "0" }).collect();
    format!("({})", bits.join(","))
}

/// Checks the cancellation contract and returns the full transcript.
/// `report.passed()` tells whether the gadget is usable.
pub fn verify_gadget(gadget: &EdgeGadget) -> GadgetReport {
    let mut per_vector = Vec::new();
    let mut violations = Vec::new();
    for dv in BALANCED_VECTORS {
        let sums = group_sums(gadget, dv);
        let expected = expected_groups(dv);
        for (key, want) in &expected {
            let got = sums.get(key).cloned().unwrap_or_else(Poly2::zero);
            if &got != want {
                violations.push(format!(
                    "vector {}: group {key:?} nets {got}, expected {want}",
                    vector_name(dv)
                ));
            }
        }
        for (key, got) in &sums {
            if !expected.iter().any(|(k, _)| k == key) {
                violations.push(format!(
                    "vector {}: group {key:?} nets {got}, expected 0",
                    vector_name(dv)
                ));
            }
        }
        per_vector.push((dv, sums));
    }
    GadgetReport { per_vector, violations }
}

/// Fast pass/fail check used by the search inner loop.
fn gadget_ok(gadget: &EdgeGadget) -> bool {
    for dv in BALANCED_VECTORS {
        let sums = group_sums(gadget, dv);
        let expected = expected_groups(dv);
        if sums.len() != expected.len() {
            return false;
        }
        for (key, want) in &expected {
            if sums.get(key) != Some(want) {
                return false;
            }
        }
    }
    true
}

/// Exhaustively searches for a verified gadget whose rational arcs draw
/// their weights from `alphabet`. Deterministic: candidates are scanned in
/// a fixed order and the first verified gadget is returned.
///
/// The passive contract forces the internal digon `a <-> b` to exist with
/// rational weights of product `-1`, which prunes the space; the two w-arcs
/// range over the remaining ten ordered pairs.
pub fn search_gadget(alphabet: &[Rat]) -> Result<EdgeGadget> {
    if alphabet.iter().any(|c| c.is_zero()) {
        return Err(Error::Precondition("gadget weight alphabet contains 0".into()));
    }
    // Ordered vertex pairs other than the internal digon.
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for s in 0..VERTEX_COUNT {
        for t in 0..VERTEX_COUNT {
            if s != t && (s, t) != (GADGET_A, GADGET_B) && (s, t) != (GADGET_B, GADGET_A) {
                pairs.push((s, t));
            }
        }
    }
    // Options per non-digon pair when it does not carry a w-arc: absent,
    // then each alphabet weight.
    let mut options: Vec<Option<Rat>> = vec![None];
    options.extend(alphabet.iter().cloned().map(Some));
    let minus_one = rat(-1);
    let signs = [rat(1), rat(-1)];
    let mut candidates = 0u64;
    for ab in alphabet {
        for ba in alphabet {
            if ab * ba != minus_one {
                continue;
            }
            for wi in 0..pairs.len() {
                for wj in wi + 1..pairs.len() {
                    for si in &signs {
                        for sj in &signs {
                            // Odometer over the remaining eight pairs.
                            let free: Vec<usize> = (0..pairs.len())
                                .filter(|&i| i != wi && i != wj)
                                .collect();
                            let mut idx = vec![0usize; free.len()];
                            loop {
                                candidates += 1;
                                let mut arcs: BTreeMap<(usize, usize), Poly2> =
                                    BTreeMap::new();
                                arcs.insert(
                                    (GADGET_A, GADGET_B),
                                    Poly2::constant(ab.clone()),
                                );
                                arcs.insert(
                                    (GADGET_B, GADGET_A),
                                    Poly2::constant(ba.clone()),
                                );
                                arcs.insert(pairs[wi], Poly2::monomial(si.clone(), 1, 0));
                                arcs.insert(pairs[wj], Poly2::monomial(sj.clone(), 1, 0));
                                for (slot, &pi) in free.iter().enumerate() {
                                    if let Some(c) = &options[idx[slot]] {
                                        arcs.insert(pairs[pi], Poly2::constant(c.clone()));
                                    }
                                }
                                let gadget = EdgeGadget { names: default_names(), arcs };
                                if gadget_ok(&gadget) {
                                    return Ok(gadget);
                                }
                                // Advance the odometer.
                                let mut carry = true;
                                for d in idx.iter_mut() {
                                    *d += 1;
                                    if *d < options.len() {
                                        carry = false;
                                        break;
                                    }
                                    *d = 0;
                                }
                                if carry {
                                    break;
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    Err(Error::GadgetNotFound(format!(
        "scanned {candidates} candidates over alphabet {{{}}}",
        alphabet
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(", ")
    )))
}

fn default_names() -> [String; VERTEX_COUNT] {
    ["u", "v", "a", "b"].map(String::from)
}

fn format_gadget_weight(w: &Poly2) -> String {
    let (c, xdeg, _) = w.as_monomial().expect("gadget weights are monomials");
    match xdeg {
        0 => c.to_string(),
        _ if c == rat(1) => "w".into(),
        _ if c == rat(-1) => "-w".into(),
        _ => format!("{c}w"),
    }
}

fn parse_gadget_weight(s: &str) -> Result<Poly2> {
    match s.strip_suffix('w') {
        Some(body) => {
            let body = body.trim();
            let c: Rat = match body {
                "" | "+" => rat(1),
                "-" => rat(-1),
                _ => body
                    .parse()
                    .map_err(|_| Error::Parse(format!("invalid gadget weight `{s}`")))?,
            };
            Ok(Poly2::monomial(c, 1, 0))
        }
        None => {
            let c: Rat = s
                .parse()
                .map_err(|_| Error::Parse(format!("invalid gadget weight `{s}`")))?;
            Ok(Poly2::constant(c))
        }
    }
}

/// Serializes a gadget in the fixture format accepted by [`parse_gadget`].
pub fn format_gadget(g: &EdgeGadget) -> String {
    let mut out = String::new();
    out.push_str("gadget\n");
    writeln!(out, "endpoints {} {}", g.names[GADGET_U], g.names[GADGET_V]).unwrap();
    writeln!(out, "internals {} {}", g.names[GADGET_A], g.names[GADGET_B]).unwrap();
    for (&(s, t), w) in &g.arcs {
        writeln!(out, "{} {} {}", g.names[s], g.names[t], format_gadget_weight(w)).unwrap();
    }
    out
}

/// Parses the gadget fixture format: a `gadget` header, `endpoints <u> <v>`
/// and `internals <a> <b>` naming lines, then one `<from> <to> <weight>`
/// line per arc, where weights are rationals or `[c]w` / `-w` / `w`.
pub fn parse_gadget(text: &str) -> Result<EdgeGadget> {
    let mut lines = content_lines(text);
    if lines.next() != Some("gadget") {
        return Err(Error::Parse("expected `gadget` header".into()));
    }
    let mut names: [Option<String>; VERTEX_COUNT] = [None, None, None, None];
    let mut take_pair = |line: Option<&str>, kw: &str, i: usize, j: usize| -> Result<()> {
        let line = line.ok_or_else(|| Error::Parse(format!("missing `{kw}` line")))?;
        let mut it = line.split_whitespace();
        if it.next() != Some(kw) {
            return Err(Error::Parse(format!("expected `{kw} <name> <name>`")));
        }
        for slot in [i, j] {
            names[slot] = Some(
                it.next()
                    .ok_or_else(|| Error::Parse(format!("`{kw}` needs two names")))?
                    .to_string(),
            );
        }
        Ok(())
    };
    take_pair(lines.next(), "endpoints", GADGET_U, GADGET_V)?;
    take_pair(lines.next(), "internals", GADGET_A, GADGET_B)?;
    let names = names.map(|n| n.expect("all four names set"));
    let index_of = |name: &str| -> Result<usize> {
        names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::Parse(format!("unknown gadget vertex `{name}`")))
    };
    let mut arcs = BTreeMap::new();
    for line in lines {
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != 3 {
            return Err(Error::Parse(format!("bad gadget arc line `{line}`")));
        }
        let s = index_of(toks[0])?;
        let t = index_of(toks[1])?;
        if arcs.insert((s, t), parse_gadget_weight(toks[2])?).is_some() {
            return Err(Error::Parse(format!("duplicate gadget arc `{line}`")));
        }
    }
    let g = EdgeGadget::new(arcs)?;
    Ok(EdgeGadget { names, arcs: g.arcs })
}

/// The verified gadget shipped with the crate (found by [`search_gadget`]
/// over the alphabet `{1, -1}` and checked by [`verify_gadget`] in the test
/// suite).
pub fn builtin_gadget() -> EdgeGadget {
    parse_gadget(include_str!("../fixtures/gadget.txt"))
        .expect("the bundled gadget fixture parses")
}

#[cfg(test)]
mod tests {
    use super::*;

    /// A hand-built verified gadget, independent of the search and fixture.
    fn reference_gadget() -> EdgeGadget {
        let one = Poly2::one;
        let w = || Poly2::x();
        let mut arcs = BTreeMap::new();
        for (s, t) in [
            (GADGET_U, GADGET_A),
            (GADGET_A, GADGET_U),
            (GADGET_U, GADGET_B),
            (GADGET_B, GADGET_U),
            (GADGET_V, GADGET_A),
            (GADGET_V, GADGET_B),
        ] {
            arcs.insert((s, t), one());
        }
        arcs.insert((GADGET_A, GADGET_V), w());
        arcs.insert((GADGET_B, GADGET_V), w());
        arcs.insert((GADGET_A, GADGET_B), Poly2::constant(rat(-1)));
        arcs.insert((GADGET_B, GADGET_A), one());
        EdgeGadget::new(arcs).unwrap()
    }

    #[test]
    fn reference_gadget_verifies() {
        let g = reference_gadget();
        let report = verify_gadget(&g);
        assert!(report.passed(), "violations: {:?}", report.violations);
        // Spot-check the active vector's group sums.
        let (_, active) = &report.per_vector[0];
        let two_w = Poly2::monomial(rat(2), 1, 0);
        assert_eq!(
            active.get(&GroupKey { path: None, cycles: vec![2, 2] }),
            Some(&two_w)
        );
        assert_eq!(
            active.get(&GroupKey { path: None, cycles: vec![4] }),
            Some(&two_w)
        );
        assert_eq!(active.len(), 2);
    }

    #[test]
    fn broken_gadgets_fail_verification() {
        // Flip the internal digon sign: the passive group nets +1, not -1.
        let mut g = reference_gadget();
        g.arcs.insert((GADGET_A, GADGET_B), Poly2::one());
        assert!(!verify_gadget(&g).passed());
        // Add a direct u -> v arc: mixed vectors stop cancelling.
        let mut g = reference_gadget();
        g.arcs.insert((GADGET_U, GADGET_V), Poly2::one());
        assert!(!verify_gadget(&g).passed());
    }

    #[test]
    fn structural_validation() {
        let mut arcs = BTreeMap::new();
        arcs.insert((GADGET_A, GADGET_A), Poly2::one());
        assert!(EdgeGadget::new(arcs).is_err()); // loop
        let mut arcs = BTreeMap::new();
        arcs.insert((GADGET_A, GADGET_B), Poly2::x());
        assert!(EdgeGadget::new(arcs).is_err()); // only one w-arc
    }

    #[test]
    fn fixture_roundtrip() {
        let g = reference_gadget();
        let text = format_gadget(&g);
        let back = parse_gadget(&text).unwrap();
        assert_eq!(back.arcs, g.arcs);
        assert!(parse_gadget("gadget\nendpoints u v\ninternals a b\nu q 1\n").is_err());
    }

    #[test]
    fn builtin_fixture_verifies() {
        let g = builtin_gadget();
        assert!(verify_gadget(&g).passed());
    }

    #[test]
    fn search_finds_a_verified_gadget() {
        let g = search_gadget(&[rat(1), rat(-1)]).unwrap();
        assert!(verify_gadget(&g).passed());
        assert!(search_gadget(&[rat(1)]).is_err()); // no digon of product -1
    }

    #[test]
    fn local_state_counts() {
        let g = reference_gadget();
        // Passive: only the internal digon.
        let passive = enumerate_local_states(&g, [true, true, true, true]);
        assert_eq!(passive.len(), 1);
        assert_eq!(passive[0].key, GroupKey { path: None, cycles: vec![2] });
        assert_eq!(passive[0].weight, Poly2::constant(rat(-1)));
        // Active: two digon pairs and two 4-cycles.
        let active = enumerate_local_states(&g, [false, false, false, false]);
        assert_eq!(active.len(), 4);
    }
}
