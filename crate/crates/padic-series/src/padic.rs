//! Factorial valuations and truncated p-adic integer arithmetic.
//!
//! The factorial series summed by this crate diverge over the reals but
//! converge p-adically for every prime, because the p-adic size of `n!`
//! collapses: the exponent of `p` in `n!` is `(n - s_n) / (p - 1)` where
//! `s_n` is the base-`p` digit sum of `n`. That exponent is computed here
//! without ever factoring a factorial, and [`PadicInt`] provides exact
//! arithmetic on the first `M` p-adic digits for the convergence
//! demonstrations.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::families::SeriesParams;

/// Default number of p-adic digits retained by [`PadicInt`] constructors in
/// the CLI.
pub const DEFAULT_PRECISION: u32 = 64;

/// Deterministic primality by trial division; intended for desk-scale
/// moduli, not cryptographic sizes.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// All primes up to and including `limit`, by sieve.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            primes.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    primes
}

/// Sum of the base-`p` digits of `n`.
pub fn digit_sum(n: u64, p: u64) -> u64 {
    assert!(is_prime_u64(p), "digit_sum: {p} is not prime");
    let mut n = n;
    let mut s = 0;
    while n > 0 {
        s += n % p;
        n /= p;
    }
    s
}

/// The exponent of `p` in `n!` together with the digit sum it came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ValuationReport {
    pub n: u64,
    pub p: u64,
    pub digit_sum: u64,
    pub valuation: u64,
}

/// Exponent of the prime `p` in `n!` via the digit-sum formula
/// `(n - s_n) / (p - 1)`.
pub fn factorial_valuation(n: u64, p: u64) -> ValuationReport {
    let s = digit_sum(n, p);
    debug_assert_eq!((n - s) % (p - 1), 0);
    ValuationReport {
        n,
        p,
        digit_sum: s,
        valuation: (n - s) / (p - 1),
    }
}

/// A p-adic valuation: the exponent of `p`, or `Infinite` for the value 0
/// (never a numeric sentinel). Ordered with `Infinite` above every finite
/// exponent.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Valuation {
    Finite(u64),
    Infinite,
}

impl Valuation {
    pub fn is_infinite(self) -> bool {
        self == Valuation::Infinite
    }

    /// The finite exponent, panicking on `Infinite`.
    pub fn finite(self) -> u64 {
        match self {
            Valuation::Finite(v) => v,
            Valuation::Infinite => panic!("valuation is infinite"),
        }
    }
}

impl std::fmt::Display for Valuation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => write!(f, "inf"),
        }
    }
}

impl serde::Serialize for Valuation {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Valuation::Finite(v) => serializer.serialize_u64(*v),
            Valuation::Infinite => serializer.serialize_str("inf"),
        }
    }
}

/// Largest `e` with `p^e` dividing `v`; `Infinite` for `v = 0`.
pub fn padic_valuation(v: &BigInt, p: u64) -> Valuation {
    assert!(is_prime_u64(p), "padic_valuation: {p} is not prime");
    if v.is_zero() {
        return Valuation::Infinite;
    }
    let p_big = BigUint::from(p);
    let mut mag = v.magnitude().clone();
    let mut e = 0u64;
    loop {
        let (q, r) = mag.div_rem(&p_big);
        if !r.is_zero() {
            return Valuation::Finite(e);
        }
        mag = q;
        e += 1;
    }
}

/// Lower bound on the valuation of the `n`-th series term
/// `eps^n (n+nu)! P(n; x) x^{alpha*n+beta}` for integer-coefficient `P`:
/// the factorial contributes `(n+nu - s_{n+nu}) / (p-1)` and the explicit
/// power of `x` contributes `(alpha*n+beta) * v_p(x)`.
///
/// For `x = 0` the term itself vanishes whenever the exponent is positive,
/// reported as `Infinite`.
pub fn term_valuation_lower_bound(n: u64, params: &SeriesParams, x: &BigInt, p: u64) -> Valuation {
    let fact_part = factorial_valuation(n + params.nu as u64, p).valuation;
    let exp = params.alpha as u64 * n + params.beta as u64;
    if x.is_zero() {
        if exp == 0 {
            Valuation::Finite(fact_part)
        } else {
            Valuation::Infinite
        }
    } else {
        let vx = padic_valuation(x, p).finite();
        Valuation::Finite(fact_part + exp * vx)
    }
}

/// A truncated p-adic integer: the residue of a value modulo `p^M`,
/// i.e. its first `M` p-adic digits. Arithmetic is exact modulo `p^M`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PadicInt {
    prime: u64,
    precision: u32,
    modulus: BigUint,
    residue: BigUint,
}

impl PadicInt {
    /// Reduce an integer to its first `precision` p-adic digits. The prime
    /// is validated by trial division.
    pub fn from_integer(v: &BigInt, prime: u64, precision: u32) -> Self {
        assert!(is_prime_u64(prime), "PadicInt: {prime} is not prime");
        assert!(precision >= 1, "PadicInt: precision must be at least 1");
        let modulus = BigUint::from(prime).pow(precision);
        let residue = v
            .mod_floor(&BigInt::from(modulus.clone()))
            .to_biguint()
            .expect("mod_floor of a positive modulus is non-negative");
        Self {
            prime,
            precision,
            modulus,
            residue,
        }
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    /// The canonical non-negative residue below `p^M`.
    pub fn residue(&self) -> &BigUint {
        &self.residue
    }

    fn check_compatible(&self, other: &PadicInt) {
        assert!(
            self.prime == other.prime && self.precision == other.precision,
            "PadicInt arithmetic requires matching prime and precision"
        );
    }

    pub fn add(&self, other: &PadicInt) -> PadicInt {
        self.check_compatible(other);
        let mut sum = &self.residue + &other.residue;
        if sum >= self.modulus {
            sum -= &self.modulus;
        }
        self.with_residue(sum)
    }

    pub fn sub(&self, other: &PadicInt) -> PadicInt {
        self.check_compatible(other);
        let res = if self.residue >= other.residue {
            &self.residue - &other.residue
        } else {
            &self.modulus - (&other.residue - &self.residue)
        };
        self.with_residue(res)
    }

    pub fn mul(&self, other: &PadicInt) -> PadicInt {
        self.check_compatible(other);
        self.with_residue((&self.residue * &other.residue) % &self.modulus)
    }

    pub fn neg(&self) -> PadicInt {
        let res = if self.residue.is_zero() {
            BigUint::zero()
        } else {
            &self.modulus - &self.residue
        };
        self.with_residue(res)
    }

    fn with_residue(&self, residue: BigUint) -> PadicInt {
        PadicInt {
            prime: self.prime,
            precision: self.precision,
            modulus: self.modulus.clone(),
            residue,
        }
    }

    /// Valuation of the represented value as far as the precision can see:
    /// a residue of zero is indistinguishable from 0, reported `Infinite`.
    pub fn valuation(&self) -> Valuation {
        if self.residue.is_zero() {
            return Valuation::Infinite;
        }
        padic_valuation(&BigInt::from(self.residue.clone()), self.prime)
    }

    /// The `M` retained digits, least significant first.
    pub fn digits(&self) -> Vec<u64> {
        let p = BigUint::from(self.prime);
        let mut digits = Vec::with_capacity(self.precision as usize);
        let mut rest = self.residue.clone();
        for _ in 0..self.precision {
            let (q, r) = rest.div_rem(&p);
            digits.push(r.to_u64().expect("digit below a u64 prime"));
            rest = q;
        }
        digits
    }
}

impl std::ops::Add<&PadicInt> for &PadicInt {
    type Output = PadicInt;
    fn add(self, rhs: &PadicInt) -> PadicInt {
        PadicInt::add(self, rhs)
    }
}

impl std::ops::Sub<&PadicInt> for &PadicInt {
    type Output = PadicInt;
    fn sub(self, rhs: &PadicInt) -> PadicInt {
        PadicInt::sub(self, rhs)
    }
}

impl std::ops::Mul<&PadicInt> for &PadicInt {
    type Output = PadicInt;
    fn mul(self, rhs: &PadicInt) -> PadicInt {
        PadicInt::mul(self, rhs)
    }
}

impl std::ops::Neg for &PadicInt {
    type Output = PadicInt;
    fn neg(self) -> PadicInt {
        PadicInt::neg(self)
    }
}
