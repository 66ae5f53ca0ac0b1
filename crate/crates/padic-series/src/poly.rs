//! Sparse bivariate polynomial algebra over arbitrary-precision integers.
//!
//! [`IntPoly2`] is the substrate for every generated polynomial family in
//! this crate. The indeterminate `m` stands for a shifted summation index
//! and `y` for a fixed power of the series argument, so a single exact
//! representation covers coefficient polynomials, their closed forms, and
//! everything the summation identities need to evaluate.
//!
//! The term map is canonical: no stored coefficient is zero and the zero
//! polynomial is the empty map, so structural equality is polynomial
//! equality. Coefficients are unbounded integers throughout; nothing in
//! this module is modular or approximate.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

/// One serialized term of an [`IntPoly2`].
///
/// The coefficient travels as a decimal string so consumers never have to
/// fit it into a 64-bit integer.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PolyTerm {
    pub m: u32,
    pub y: u32,
    pub c: String,
}

/// Sparse bivariate polynomial in `m` and `y` with `BigInt` coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct IntPoly2 {
    terms: BTreeMap<(u32, u32), BigInt>,
}

impl IntPoly2 {
    /// The zero polynomial (empty term map).
    pub fn zero() -> Self {
        Self::default()
    }

    /// The constant polynomial 1.
    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    /// A constant polynomial.
    pub fn constant<C: Into<BigInt>>(c: C) -> Self {
        Self::monomial(0, 0, c)
    }

    /// The single-term polynomial `c * m^m_exp * y^y_exp`.
    pub fn monomial<C: Into<BigInt>>(m_exp: u32, y_exp: u32, c: C) -> Self {
        let mut poly = Self::zero();
        poly.insert_add((m_exp, y_exp), c.into());
        poly
    }

    /// Build from `(m_exp, y_exp, coeff)` triples. Duplicate exponent pairs
    /// are summed and zero coefficients dropped, so the result is canonical
    /// whatever the input.
    pub fn from_terms<C, I>(terms: I) -> Self
    where
        C: Into<BigInt>,
        I: IntoIterator<Item = (u32, u32, C)>,
    {
        let mut poly = Self::zero();
        for (m_exp, y_exp, c) in terms {
            poly.insert_add((m_exp, y_exp), c.into());
        }
        poly
    }

    fn insert_add(&mut self, key: (u32, u32), value: BigInt) {
        if value.is_zero() {
            return;
        }
        match self.terms.entry(key) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(value);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += value;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Iterate terms in ascending `(m_exp, y_exp)` order.
    pub fn terms(&self) -> impl Iterator<Item = (u32, u32, &BigInt)> {
        self.terms.iter().map(|(&(m, y), c)| (m, y, c))
    }

    /// The coefficient of `m^m_exp * y^y_exp` (zero if the term is absent).
    pub fn coeff(&self, m_exp: u32, y_exp: u32) -> BigInt {
        self.terms
            .get(&(m_exp, y_exp))
            .cloned()
            .unwrap_or_else(BigInt::zero)
    }

    /// Degree in `m`, or `None` for the zero polynomial.
    pub fn deg_m(&self) -> Option<u32> {
        self.terms.keys().map(|&(m, _)| m).max()
    }

    /// Degree in `y`, or `None` for the zero polynomial.
    pub fn deg_y(&self) -> Option<u32> {
        self.terms.keys().map(|&(_, y)| y).max()
    }

    /// True when no term involves `m`.
    pub fn is_pure_y(&self) -> bool {
        self.terms.keys().all(|&(m, _)| m == 0)
    }

    /// The coefficient of `y^y_exp`, as a polynomial in `m`.
    pub fn coeff_of_y(&self, y_exp: u32) -> IntPoly2 {
        let mut out = Self::zero();
        for (&(m, y), c) in &self.terms {
            if y == y_exp {
                out.insert_add((m, 0), c.clone());
            }
        }
        out
    }

    /// Multiply by the single term `c * m^m_shift * y^y_shift`.
    pub fn mul_term(&self, c: &BigInt, m_shift: u32, y_shift: u32) -> IntPoly2 {
        if c.is_zero() {
            return Self::zero();
        }
        let mut out = Self::zero();
        for (&(m, y), coeff) in &self.terms {
            out.insert_add((m + m_shift, y + y_shift), coeff * c);
        }
        out
    }

    /// Multiply every coefficient by `c`.
    pub fn mul_scalar(&self, c: &BigInt) -> IntPoly2 {
        self.mul_term(c, 0, 0)
    }

    /// Exact value at `m = m_value`, `y = y_value`.
    pub fn eval(&self, m_value: &BigInt, y_value: &BigInt) -> BigInt {
        let m_pows = power_table(m_value, self.deg_m().unwrap_or(0));
        let y_pows = power_table(y_value, self.deg_y().unwrap_or(0));
        let mut acc = BigInt::zero();
        for (&(m, y), c) in &self.terms {
            acc += c * &m_pows[m as usize] * &y_pows[y as usize];
        }
        acc
    }

    /// Substitute `m = m_value`, leaving a polynomial in `y` alone.
    pub fn eval_m(&self, m_value: &BigInt) -> IntPoly2 {
        let m_pows = power_table(m_value, self.deg_m().unwrap_or(0));
        let mut out = Self::zero();
        for (&(m, y), c) in &self.terms {
            out.insert_add((0, y), c * &m_pows[m as usize]);
        }
        out
    }

    /// Exact value of a polynomial in `y` alone.
    pub fn eval_y(&self, y_value: &BigInt) -> BigInt {
        debug_assert!(self.is_pure_y(), "eval_y on a polynomial with m-terms");
        self.eval(&BigInt::zero(), y_value)
    }

    /// Terms in descending `(m, y)` order with decimal-string coefficients,
    /// the wire format used by the CLI.
    pub fn to_json_terms(&self) -> Vec<PolyTerm> {
        self.terms
            .iter()
            .rev()
            .map(|(&(m, y), c)| PolyTerm {
                m,
                y,
                c: c.to_string(),
            })
            .collect()
    }
}

fn power_table(base: &BigInt, max_exp: u32) -> Vec<BigInt> {
    let mut pows = Vec::with_capacity(max_exp as usize + 1);
    pows.push(BigInt::one());
    for _ in 0..max_exp {
        let next = pows.last().unwrap() * base;
        pows.push(next);
    }
    pows
}

impl Serialize for IntPoly2 {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let terms = self.to_json_terms();
        let mut seq = serializer.serialize_seq(Some(terms.len()))?;
        for term in &terms {
            seq.serialize_element(term)?;
        }
        seq.end()
    }
}

impl std::ops::Add<&IntPoly2> for &IntPoly2 {
    type Output = IntPoly2;
    fn add(self, rhs: &IntPoly2) -> IntPoly2 {
        let mut out = self.clone();
        for (&key, c) in &rhs.terms {
            out.insert_add(key, c.clone());
        }
        out
    }
}

impl std::ops::Sub<&IntPoly2> for &IntPoly2 {
    type Output = IntPoly2;
    fn sub(self, rhs: &IntPoly2) -> IntPoly2 {
        let mut out = self.clone();
        for (&key, c) in &rhs.terms {
            out.insert_add(key, -c.clone());
        }
        out
    }
}

impl std::ops::Mul<&IntPoly2> for &IntPoly2 {
    type Output = IntPoly2;
    fn mul(self, rhs: &IntPoly2) -> IntPoly2 {
        let mut out = IntPoly2::zero();
        for (&(ma, ya), ca) in &self.terms {
            for (&(mb, yb), cb) in &rhs.terms {
                out.insert_add((ma + mb, ya + yb), ca * cb);
            }
        }
        out
    }
}

impl std::ops::Neg for &IntPoly2 {
    type Output = IntPoly2;
    fn neg(self) -> IntPoly2 {
        IntPoly2 {
            terms: self.terms.iter().map(|(&k, c)| (k, -c.clone())).collect(),
        }
    }
}

impl fmt::Display for IntPoly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&(m, y), c) in self.terms.iter().rev() {
            let neg = c < &BigInt::zero();
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
            let mut vars = String::new();
            if m > 0 {
                vars.push('m');
                if m > 1 {
                    vars.push_str(&format!("^{m}"));
                }
            }
            if y > 0 {
                if !vars.is_empty() {
                    vars.push('*');
                }
                vars.push('y');
                if y > 1 {
                    vars.push_str(&format!("^{y}"));
                }
            }
            if vars.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{vars}")?;
            } else {
                write!(f, "{mag}*{vars}")?;
            }
        }
        Ok(())
    }
}

/// Exact binomial coefficient C(n, l).
///
/// Panics when `l > n`; the callers in this crate never leave the triangle.
pub fn binomial(n: u64, l: u64) -> BigInt {
    assert!(l <= n, "binomial: require l <= n, got C({n}, {l})");
    let l = l.min(n - l);
    let mut acc = BigInt::one();
    for i in 1..=l {
        acc = acc * BigInt::from(n - l + i) / BigInt::from(i);
    }
    acc
}

/// Exact factorial n!.
pub fn factorial(n: u64) -> BigInt {
    let mut acc = BigInt::one();
    for i in 2..=n {
        acc *= BigInt::from(i);
    }
    acc
}
