//! Sparse exact bivariate polynomials over the rationals in two
//! indeterminates `x` and `y`. This is the scalar type for arc weights and
//! immanant values; it degenerates to plain rationals (degree 0) or to
//! univariate polynomials whenever an indeterminate is unused.

use crate::{rat, Rat};
use num::traits::{One, Zero};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub};

/// A sparse polynomial `sum c_{a,b} x^a y^b` with exact rational
/// coefficients. Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct Poly2 {
    terms: BTreeMap<(u32, u32), Rat>,
}

impl Poly2 {
    pub fn zero() -> Self {
        Poly2 { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Poly2::constant(rat(1))
    }

    pub fn constant(c: Rat) -> Self {
        Poly2::monomial(c, 0, 0)
    }

    /// The monomial `c x^a y^b`; the zero polynomial if `c == 0`.
    pub fn monomial(c: Rat, a: u32, b: u32) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert((a, b), c);
        }
        Poly2 { terms }
    }

    /// The indeterminate `x`.
    pub fn x() -> Self {
        Poly2::monomial(rat(1), 1, 0)
    }

    /// The indeterminate `y`.
    pub fn y() -> Self {
        Poly2::monomial(rat(1), 0, 1)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// True if the polynomial is a constant (possibly zero).
    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|&k| k == (0, 0))
    }

    /// The coefficient of `x^a y^b` (zero if the monomial is absent).
    pub fn coeff(&self, a: u32, b: u32) -> Rat {
        self.terms.get(&(a, b)).cloned().unwrap_or_else(Rat::zero)
    }

    /// The constant term.
    pub fn constant_term(&self) -> Rat {
        self.coeff(0, 0)
    }

    /// If the polynomial is a single term `c x^a y^b`, returns `(c, a, b)`.
    /// The zero polynomial reports as `(0, 0, 0)`.
    pub fn as_monomial(&self) -> Option<(Rat, u32, u32)> {
        match self.terms.len() {
            0 => Some((Rat::zero(), 0, 0)),
            1 => {
                let (&(a, b), c) = self.terms.iter().next().unwrap();
                Some((c.clone(), a, b))
            }
            _ => None,
        }
    }

    /// Maximum degree in `x` appearing in any term.
    pub fn x_degree(&self) -> u32 {
        self.terms.keys().map(|&(a, _)| a).max().unwrap_or(0)
    }

    /// Maximum degree in `y` appearing in any term.
    pub fn y_degree(&self) -> u32 {
        self.terms.keys().map(|&(_, b)| b).max().unwrap_or(0)
    }

    /// Exact evaluation at rational points `x = xv`, `y = yv`.
    pub fn eval(&self, xv: &Rat, yv: &Rat) -> Rat {
        // Horner in x of polynomials in y would be fancier; term-by-term
        // powers are fine at the degrees this crate encounters.
        let mut acc = Rat::zero();
        for (&(a, b), c) in &self.terms {
            let mut t = c.clone();
            for _ in 0..a {
                t *= xv;
            }
            for _ in 0..b {
                t *= yv;
            }
            acc += t;
        }
        acc
    }

    /// Iterator over `((a, b), coefficient)` in canonical (sorted) order.
    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &Rat)> {
        self.terms.iter()
    }

    fn insert_add(&mut self, key: (u32, u32), c: Rat) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(key) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &Rat) -> Poly2 {
        if c.is_zero() {
            return Poly2::zero();
        }
        Poly2 {
            terms: self.terms.iter().map(|(&k, v)| (k, v * c)).collect(),
        }
    }
}

impl From<Rat> for Poly2 {
    fn from(c: Rat) -> Self {
        Poly2::constant(c)
    }
}

impl Add for &Poly2 {
    type Output = Poly2;
    fn add(self, rhs: &Poly2) -> Poly2 {
        let mut out = self.clone();
        for (&k, c) in &rhs.terms {
            out.insert_add(k, c.clone());
        }
        out
    }
}

impl AddAssign<&Poly2> for Poly2 {
    fn add_assign(&mut self, rhs: &Poly2) {
        for (&k, c) in &rhs.terms {
            self.insert_add(k, c.clone());
        }
    }
}

impl Sub for &Poly2 {
    type Output = Poly2;
    fn sub(self, rhs: &Poly2) -> Poly2 {
        let mut out = self.clone();
        for (&k, c) in &rhs.terms {
            out.insert_add(k, -c.clone());
        }
        out
    }
}

impl Neg for &Poly2 {
    type Output = Poly2;
    fn neg(self) -> Poly2 {
        Poly2 {
            terms: self.terms.iter().map(|(&k, v)| (k, -v.clone())).collect(),
        }
    }
}

impl Mul for &Poly2 {
    type Output = Poly2;
    fn mul(self, rhs: &Poly2) -> Poly2 {
        let mut out = Poly2::zero();
        for (&(a1, b1), c1) in &self.terms {
            for (&(a2, b2), c2) in &rhs.terms {
                out.insert_add((a1 + a2, b1 + b2), c1 * c2);
            }
        }
        out
    }
}

impl MulAssign<&Poly2> for Poly2 {
    fn mul_assign(&mut self, rhs: &Poly2) {
        let prod = &*self * rhs;
        *self = prod;
    }
}

/// Canonical text form: terms in sorted monomial order, e.g. `3 - 1/2*x + x^2*y`.
/// The zero polynomial prints as `0`.
impl fmt::Display for Poly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&(a, b), c) in &self.terms {
            let neg = c < &Rat::zero();
            let mag = if neg { -c.clone() } else { c.clone() };
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mut pieces: Vec<String> = Vec::new();
            if !mag.is_one() || (a == 0 && b == 0) {
                pieces.push(mag.to_string());
            }
            match a {
                0 => {}
                1 => pieces.push("x".into()),
                _ => pieces.push(format!("x^{a}")),
            }
            match b {
                0 => {}
                1 => pieces.push("y".into()),
                _ => pieces.push(format!("y^{b}")),
            }
            write!(f, "{}", pieces.join("*"))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Poly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly2({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratio;

    #[test]
    fn coefficient_extraction() {
        // p = 3x^2y + 2
        let p = &Poly2::monomial(rat(3), 2, 1) + &Poly2::constant(rat(2));
        assert_eq!(p.coeff(2, 1), rat(3));
        assert_eq!(p.coeff(0, 0), rat(2));
        assert_eq!(p.coeff(1, 1), rat(0));
        assert_eq!(Poly2::zero().coeff(5, 5), rat(0));
    }

    #[test]
    fn ring_ops_and_cancellation() {
        let x = Poly2::x();
        let y = Poly2::y();
        let p = &(&x + &y) * &(&x - &y); // x^2 - y^2
        assert_eq!(p.coeff(2, 0), rat(1));
        assert_eq!(p.coeff(0, 2), rat(-1));
        assert_eq!(p.coeff(1, 1), rat(0));
        let q = &p - &p;
        assert!(q.is_zero());
        assert_eq!(p.x_degree(), 2);
        assert_eq!(p.y_degree(), 2);
    }

    #[test]
    fn display_canonical() {
        let p = &(&Poly2::monomial(ratio(-1, 2), 1, 0) + &Poly2::constant(rat(3)))
            + &Poly2::monomial(rat(1), 2, 1);
        assert_eq!(p.to_string(), "3 - 1/2*x + x^2*y");
        assert_eq!(Poly2::zero().to_string(), "0");
    }

    #[test]
    fn eval_matches_terms() {
        let p = &(&Poly2::x() * &Poly2::x()) + &Poly2::monomial(rat(2), 0, 1); // x^2 + 2y
        assert_eq!(p.eval(&rat(3), &rat(5)), rat(19));
    }
}
