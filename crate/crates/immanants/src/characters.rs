//! Symmetric-group characters via border-strip recursion, border strip
//! tableau enumeration, partition products with their alpha coefficients,
//! the non-vanishing tetromino table, and domino-tiling parity.

use crate::error::{Error, Result};
use crate::partition::{Partition, SkewShape};
use num::traits::{One, Zero};
use num::BigInt;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

/// One legal removal of a border strip from a partition.
#[derive(Clone, Debug)]
pub struct StripRemoval {
    /// The partition left after removing the strip.
    pub result: Partition,
    /// Height of the strip: occupied rows minus one.
    pub height: usize,
    /// The removed boxes, in the coordinates of the original diagram.
    pub boxes: Vec<(usize, usize)>,
}

/// Enumerates every way to remove a border strip of `k` boxes from `lambda`
/// so that a partition remains. A strip occupying rows `i..=j` removes the
/// rightmost boxes of those rows; the remaining row lengths are
/// `lambda[r+1] - 1` for `i <= r < j` and `lambda[i] - k + (j - i)` for row `j`.
pub fn strip_removals(lambda: &Partition, k: usize) -> Vec<StripRemoval> {
    let parts = lambda.parts();
    let mut out = Vec::new();
    if k == 0 {
        return out;
    }
    for i in 0..parts.len() {
        for j in i..parts.len() {
            // New length of row j after removing the strip.
            let taken_above: usize = (i..j).map(|r| parts[r] - (parts[r + 1] - 1)).sum();
            if taken_above >= k && j > i {
                break; // strips further down only get longer
            }
            let rest = k - taken_above;
            if rest == 0 || rest > parts[j] {
                continue;
            }
            let new_j = parts[j] - rest;
            if new_j < lambda.row(j + 1) {
                continue;
            }
            // Assemble the result and the strip boxes.
            let mut rows = parts.to_vec();
            let mut boxes = Vec::with_capacity(k);
            for r in i..j {
                let new_r = parts[r + 1] - 1;
                for c in new_r..parts[r] {
                    boxes.push((r, c));
                }
                rows[r] = new_r;
            }
            for c in new_j..parts[j] {
                boxes.push((j, c));
            }
            rows[j] = new_j;
            if !rows.windows(2).all(|w| w[0] >= w[1]) {
                continue;
            }
            debug_assert_eq!(boxes.len(), k);
            out.push(StripRemoval {
                result: Partition::new(rows),
                height: j - i,
                boxes,
            });
        }
    }
    out
}

/// A border strip tableau: an increasing chain of shapes from `shape.inner()`
/// to `shape.outer()` whose i-th step adds a border strip of `kappa[i]` boxes.
#[derive(Clone, Debug)]
pub struct BorderStripTableau {
    pub shape: SkewShape,
    /// `strips[i]` is the box set of the strip with entry `i + 1`.
    pub strips: Vec<Vec<(usize, usize)>>,
}

impl BorderStripTableau {
    /// The height sign: the product over strips of `(-1)^(occupied rows - 1)`.
    pub fn height_sign(&self) -> i64 {
        let mut sign = 1i64;
        for strip in &self.strips {
            let mut rows: Vec<usize> = strip.iter().map(|b| b.0).collect();
            rows.sort_unstable();
            rows.dedup();
            if (rows.len() - 1) % 2 == 1 {
                sign = -sign;
            }
        }
        sign
    }
}

/// Enumerates all border strip tableaux of `shape` whose i-th strip has
/// `kappa[i]` boxes, in a deterministic order. Rejects a size mismatch.
pub fn enumerate_bst(shape: &SkewShape, kappa: &[usize]) -> Result<Vec<BorderStripTableau>> {
    let total: usize = kappa.iter().sum();
    if total != shape.box_count() {
        return Err(Error::SizeMismatch(format!(
            "kappa sums to {total} but shape {shape} has {} boxes",
            shape.box_count()
        )));
    }
    fn rec(
        outer: &Partition,
        inner: &Partition,
        kappa: &[usize],
        acc: &mut Vec<Vec<(usize, usize)>>,
        out: &mut Vec<Vec<Vec<(usize, usize)>>>,
    ) {
        let Some((&k, head)) = kappa.split_last() else {
            let mut strips = acc.clone();
            strips.reverse();
            out.push(strips);
            return;
        };
        for removal in strip_removals(outer, k) {
            if removal.result.contains(inner) {
                acc.push(removal.boxes);
                rec(&removal.result, inner, head, acc, out);
                acc.pop();
            }
        }
    }
    let mut raw = Vec::new();
    rec(shape.outer(), shape.inner(), kappa, &mut Vec::new(), &mut raw);
    Ok(raw
        .into_iter()
        .map(|strips| BorderStripTableau { shape: shape.clone(), strips })
        .collect())
}

/// Memoizing context for character evaluation. Reuse one cache when
/// evaluating many characters of the same (or related) partitions.
#[derive(Default)]
pub struct CharacterCache {
    memo: HashMap<(Vec<usize>, Vec<usize>), BigInt>,
}

impl CharacterCache {
    pub fn new() -> Self {
        Self::default()
    }

    /// The irreducible character `chi_lambda(rho)`, by border-strip recursion
    /// peeling the larger format parts first. Rejects a size mismatch.
    pub fn chi(&mut self, lambda: &Partition, rho: &Partition) -> Result<BigInt> {
        if lambda.size() != rho.size() {
            return Err(Error::SizeMismatch(format!(
                "|lambda|={} but |rho|={}",
                lambda.size(),
                rho.size()
            )));
        }
        Ok(self.rec(lambda.parts().to_vec(), rho.parts()))
    }

    fn rec(&mut self, lambda: Vec<usize>, rho: &[usize]) -> BigInt {
        let Some((&k, rest)) = rho.split_first() else {
            return BigInt::one(); // empty shape, empty format
        };
        let key = (lambda, rho.to_vec());
        if let Some(v) = self.memo.get(&key) {
            return v.clone();
        }
        let lam = Partition::new(key.0.clone());
        let mut total = BigInt::zero();
        for removal in strip_removals(&lam, k) {
            let sub = self.rec(removal.result.parts().to_vec(), rest);
            if removal.height % 2 == 1 {
                total -= sub;
            } else {
                total += sub;
            }
        }
        self.memo.insert(key, total.clone());
        total
    }
}

/// One-off character evaluation `chi_lambda(rho)`.
pub fn character(lambda: &Partition, rho: &Partition) -> Result<BigInt> {
    CharacterCache::new().chi(lambda, rho)
}

/// The full character table for the symmetric group on `n` letters:
/// `(labels, table)` where `table[i][j] = chi_{labels[i]}(labels[j])` and the
/// labels run over all partitions of `n` in descending lexicographic order.
pub fn character_table(n: usize) -> (Vec<Partition>, Vec<Vec<BigInt>>) {
    let labels = Partition::all_of(n);
    let mut cache = CharacterCache::new();
    let table = labels
        .iter()
        .map(|lam| {
            labels
                .iter()
                .map(|rho| cache.chi(lam, rho).expect("equal sizes"))
                .collect()
        })
        .collect();
    (labels, table)
}

/// The signed tableau count `alpha_F(gamma) = sum_{rho in F} sum_{T in
/// B(gamma, rho)} ht(T)`. All partitions in `F` must have exactly
/// `gamma.box_count()` boxes.
pub fn alpha(f: &[Partition], gamma: &SkewShape) -> Result<BigInt> {
    let boxes = gamma.box_count();
    let mut total = BigInt::zero();
    for rho in f {
        if rho.size() != boxes {
            return Err(Error::SizeMismatch(format!(
                "format {rho} has {} boxes but shape {gamma} has {boxes}",
                rho.size()
            )));
        }
        for t in enumerate_bst(gamma, rho.parts())? {
            total += BigInt::from(t.height_sign());
        }
    }
    Ok(total)
}

/// `alpha_F(gamma)` for the tetromino family `F = {(2,2), (4)}`, as a plain
/// integer (its value is always in {-2, -1, 0, 1, 2}).
pub fn alpha_tetromino(gamma: &SkewShape) -> i64 {
    if gamma.box_count() != 4 {
        return 0;
    }
    let f = [Partition::new(vec![2, 2]), Partition::new(vec![4])];
    let a = alpha(&f, gamma).expect("sizes match");
    i64::try_from(&a).expect("alpha of a 4-box shape is tiny")
}

/// A partition product `F_1 x ... x F_t`: each factor is a non-empty set of
/// partitions of a common size.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionProduct {
    factors: Vec<Vec<Partition>>,
}

impl PartitionProduct {
    pub fn new(factors: Vec<Vec<Partition>>) -> Result<PartitionProduct> {
        for f in &factors {
            if f.is_empty() {
                return Err(Error::Precondition("empty factor in partition product".into()));
            }
            let d = f[0].size();
            if f.iter().any(|p| p.size() != d) {
                return Err(Error::Precondition(format!(
                    "factor {{{}}} mixes partition sizes",
                    f.iter().map(|p| p.to_string()).collect::<Vec<_>>().join("; ")
                )));
            }
        }
        Ok(PartitionProduct { factors })
    }

    pub fn factors(&self) -> &[Vec<Partition>] {
        &self.factors
    }

    /// Sum of the factor sizes `d_1 + ... + d_t`.
    pub fn total_size(&self) -> usize {
        self.factors.iter().map(|f| f[0].size()).sum()
    }

    /// All concatenations choosing one partition per factor (2^s many for
    /// theta_s). Used as the brute-force oracle for the extended rule.
    pub fn concatenations(&self) -> Vec<Partition> {
        let mut acc = vec![Partition::empty()];
        for f in &self.factors {
            let mut next = Vec::with_capacity(acc.len() * f.len());
            for base in &acc {
                for p in f {
                    next.push(base.concat(p));
                }
            }
            acc = next;
        }
        acc
    }
}

impl fmt::Display for PartitionProduct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let fs: Vec<String> = self
            .factors
            .iter()
            .map(|fac| {
                let ps: Vec<String> = fac.iter().map(|p| p.to_string()).collect();
                format!("{{{}}}", ps.join("; "))
            })
            .collect();
        write!(f, "{}", fs.join(" x "))
    }
}

/// The character of a partition product,
/// `chi_lambda(F_1 x ... x F_t) = sum over skew tableaux of prod alpha_i`,
/// by memoized recursion peeling one factor at a time from the outside.
pub fn character_on_product(lambda: &Partition, product: &PartitionProduct) -> Result<BigInt> {
    if product.total_size() != lambda.size() {
        return Err(Error::SizeMismatch(format!(
            "product size {} but |lambda| = {}",
            product.total_size(),
            lambda.size()
        )));
    }
    // For one factor set F, peels each rho in F strip by strip from `shape`,
    // grouping signed counts by the remaining partition: the result maps
    // mu -> alpha_F(shape/mu) for every peelable mu.
    fn peel_factor(shape: &Partition, factor: &[Partition]) -> HashMap<Partition, BigInt> {
        let mut grouped: HashMap<Partition, BigInt> = HashMap::new();
        for rho in factor {
            let mut frontier: HashMap<Partition, BigInt> = HashMap::new();
            frontier.insert(shape.clone(), BigInt::one());
            for &k in rho.parts() {
                let mut next: HashMap<Partition, BigInt> = HashMap::new();
                for (shape, coeff) in frontier {
                    for removal in strip_removals(&shape, k) {
                        let signed = if removal.height % 2 == 1 {
                            -coeff.clone()
                        } else {
                            coeff.clone()
                        };
                        *next.entry(removal.result).or_insert_with(BigInt::zero) += signed;
                    }
                }
                frontier = next;
            }
            for (mu, coeff) in frontier {
                *grouped.entry(mu).or_insert_with(BigInt::zero) += coeff;
            }
        }
        grouped.retain(|_, v| !v.is_zero());
        grouped
    }

    fn rec(
        shape: &Partition,
        factors: &[Vec<Partition>],
        memo: &mut HashMap<(Partition, usize), BigInt>,
    ) -> BigInt {
        let Some((last, head)) = factors.split_last() else {
            return if shape.is_empty() { BigInt::one() } else { BigInt::zero() };
        };
        let key = (shape.clone(), factors.len());
        if let Some(v) = memo.get(&key) {
            return v.clone();
        }
        let mut total = BigInt::zero();
        for (mu, a) in peel_factor(shape, last) {
            total += a * rec(&mu, head, memo);
        }
        memo.insert(key, total.clone());
        total
    }

    let mut memo = HashMap::new();
    Ok(rec(lambda, product.factors(), &mut memo))
}

/// The product `theta_s = {(2,2); (4)}^s x {(2^(d-2s), 1^z)}` for the
/// resources `d = d(lambda)`, `z = z(lambda)`. Rejects `2s > d`.
pub fn theta_product(lambda: &Partition, s: usize) -> Result<PartitionProduct> {
    let stats = crate::partition::two_core(lambda);
    if 2 * s > stats.d {
        return Err(Error::Precondition(format!(
            "theta_s requires 2s <= d: s={s}, d={}",
            stats.d
        )));
    }
    let tetro = vec![Partition::new(vec![2, 2]), Partition::new(vec![4])];
    let mut factors: Vec<Vec<Partition>> = std::iter::repeat(tetro).take(s).collect();
    let mut block = vec![2; stats.d - 2 * s];
    block.extend(std::iter::repeat(1).take(stats.z));
    factors.push(vec![Partition::new(block)]);
    PartitionProduct::new(factors)
}

/// Parity of a domino tiling: even/odd number of vertical dominos.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Parity {
    Even,
    Odd,
}

/// Enumerates all domino tilings of a skew shape. All tilings of a fixed
/// shape share one parity, which also equals the parity of the number of
/// boxes in even rows ("white" boxes under the alternating-row 2-coloring);
/// both facts are checked and a violation surfaces as an internal error.
/// Returns the common parity and the tiling count, or `Untileable`.
pub fn domino_tiling_parity(shape: &SkewShape) -> Result<(Parity, u64)> {
    if shape.box_count() % 2 != 0 {
        return Err(Error::Precondition(format!(
            "shape {shape} has an odd number of boxes"
        )));
    }
    let boxes = shape.boxes();
    let set: std::collections::HashSet<(usize, usize)> = boxes.iter().copied().collect();
    // Backtracking exact cover: always tile the first uncovered box (row-major)
    // with its right or down neighbor.
    fn rec(
        boxes: &[(usize, usize)],
        set: &std::collections::HashSet<(usize, usize)>,
        covered: &mut std::collections::HashSet<(usize, usize)>,
        verticals: usize,
        count: &mut u64,
        parities: &mut Vec<usize>,
    ) {
        let Some(&first) = boxes.iter().find(|b| !covered.contains(b)) else {
            *count += 1;
            parities.push(verticals % 2);
            return;
        };
        let (r, c) = first;
        let right = (r, c + 1);
        if set.contains(&right) && !covered.contains(&right) {
            covered.insert(first);
            covered.insert(right);
            rec(boxes, set, covered, verticals, count, parities);
            covered.remove(&first);
            covered.remove(&right);
        }
        let down = (r + 1, c);
        if set.contains(&down) && !covered.contains(&down) {
            covered.insert(first);
            covered.insert(down);
            rec(boxes, set, covered, verticals + 1, count, parities);
            covered.remove(&first);
            covered.remove(&down);
        }
    }
    let mut count = 0;
    let mut parities = Vec::new();
    rec(&boxes, &set, &mut Default::default(), 0, &mut count, &mut parities);
    if count == 0 {
        return Err(Error::Untileable);
    }
    parities.dedup();
    if parities.len() != 1 {
        return Err(Error::Internal(format!(
            "domino tilings of {shape} have mixed parities"
        )));
    }
    let white = boxes.iter().filter(|&&(r, _)| r % 2 == 0).count();
    if white % 2 != parities[0] {
        return Err(Error::Internal(format!(
            "tiling parity of {shape} disagrees with its white-box parity"
        )));
    }
    Ok((if parities[0] == 0 { Parity::Even } else { Parity::Odd }, count))
}

/// The tetromino classification table: canonical 4-box skew shape (as a
/// normalized box set) mapped to its `alpha_F` value for `F = {(2,2), (4)}`.
#[derive(Clone, Debug)]
pub struct TetrominoTable {
    entries: BTreeMap<Vec<(usize, usize)>, i64>,
}

impl TetrominoTable {
    /// Classifies every 4-box skew shape that arises as the union of two
    /// successively peeled dominos from any partition with at most
    /// `max_boxes` boxes. Shapes are deduplicated by canonical box set
    /// (empty rows/columns removed, anchored at the origin); the alpha value
    /// is checked to be consistent across all occurrences of a class.
    pub fn build(max_boxes: usize) -> Result<TetrominoTable> {
        let mut entries: BTreeMap<Vec<(usize, usize)>, i64> = BTreeMap::new();
        for n in 4..=max_boxes {
            for lam in Partition::all_of(n) {
                let mut remainders = Vec::new();
                for (_, after1) in crate::partition::peel_domino(&lam) {
                    for (_, after2) in crate::partition::peel_domino(&after1) {
                        if !remainders.contains(&after2) {
                            remainders.push(after2);
                        }
                    }
                }
                for rem in remainders {
                    let gamma = SkewShape::new(lam.clone(), rem)?;
                    let a = alpha_tetromino(&gamma);
                    let key = gamma.canonical_boxes();
                    if let Some(&prev) = entries.get(&key) {
                        if prev != a {
                            return Err(Error::Internal(format!(
                                "alpha value of class {key:?} is ambiguous: {prev} vs {a}"
                            )));
                        }
                    } else {
                        entries.insert(key, a);
                    }
                }
            }
        }
        Ok(TetrominoTable { entries })
    }

    pub fn entries(&self) -> &BTreeMap<Vec<(usize, usize)>, i64> {
        &self.entries
    }

    /// The alpha value of a shape's class, if the class was seen.
    pub fn value(&self, gamma: &SkewShape) -> Option<i64> {
        self.entries.get(&gamma.canonical_boxes()).copied()
    }
}

/// True iff `chi_mu(rho) = 0` for a staircase `mu`. Requires `mu` to be a
/// staircase of the same size as `rho`.
pub fn staircase_vanishing_check(mu: &Partition, rho: &Partition) -> Result<bool> {
    if !mu.is_staircase() {
        return Err(Error::Precondition(format!("{mu} is not a staircase")));
    }
    Ok(character(mu, rho)?.is_zero())
}

/// Number of standard Young tableaux of shape `lambda`, by direct
/// removable-corner recursion (an oracle independent of the character code).
pub fn syt_count(lambda: &Partition) -> BigInt {
    fn rec(parts: &Partition, memo: &mut HashMap<Partition, BigInt>) -> BigInt {
        if parts.is_empty() {
            return BigInt::one();
        }
        if let Some(v) = memo.get(parts) {
            return v.clone();
        }
        let mut total = BigInt::zero();
        for i in 0..parts.len() {
            if parts.row(i) > parts.row(i + 1) {
                let mut rows = parts.parts().to_vec();
                rows[i] -= 1;
                total += rec(&Partition::new(rows), memo);
            }
        }
        memo.insert(parts.clone(), total.clone());
        total
    }
    rec(lambda, &mut HashMap::new())
}

/// Size of the conjugacy class of cycle type `rho` in the symmetric group on
/// `|rho|` letters: `n! / prod_i i^(m_i) m_i!`.
pub fn class_size(rho: &Partition) -> BigInt {
    let n = rho.size();
    let mut num = BigInt::one();
    for k in 1..=n {
        num *= BigInt::from(k);
    }
    let mut mult: HashMap<usize, usize> = HashMap::new();
    for &p in rho.parts() {
        *mult.entry(p).or_insert(0) += 1;
    }
    let mut den = BigInt::one();
    for (i, m) in mult {
        for _ in 0..m {
            den *= BigInt::from(i);
        }
        for j in 1..=m {
            den *= BigInt::from(j);
        }
    }
    num / den
}
