//! Generation of the three polynomial families behind the factorial-series
//! identities.
//!
//! For a fixed sign `epsilon` and shift `nu`, the finite sums
//! `sum_{n=0}^{N-1} eps^n (n+nu)! [(n+nu)^k x^{k*alpha} + U_k(x)] x^{alpha*n+beta}`
//! collapse to `V_{k-1}(x) + A_{k-1}(N; x) * eps^{N-1} (N+nu)! x^{alpha*N+beta}`
//! once the families `U_k`, `V_{k-1}`, `A_{k-1}` are chosen correctly. Each
//! family satisfies a triangular linear recurrence whose top coefficient is
//! a binomial equal to 1, so the members are integer polynomials and can be
//! generated exactly by isolating the highest index.
//!
//! Working variables: `y` abbreviates `x^alpha` and `m` abbreviates the
//! shifted index `N + nu`. `U_k` and the `V` cores are polynomials in `y`
//! alone; `A_k` lives in both `m` and `y`. The common factor `x^beta` of the
//! full `V` polynomial is tracked as metadata rather than multiplied in,
//! which keeps the cores pure integer polynomials (and their value at
//! `y = 0` well defined). The core also absorbs the constant `-eps * nu!`.
//!
//! `U` and `V` can be recovered from `A` alone (`derive_u_from_a`,
//! `derive_v_from_a`); agreement of the two routes is one of the crate's
//! standing cross-checks. Note that the recurrences for `U` contain no
//! `nu` at all, so `U_k` is independent of `nu`; the derivation route makes
//! `nu` appear only to cancel.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::One;

use crate::poly::{binomial, factorial, IntPoly2};

/// Hard ceiling on family generation depth used by the CLI. Coefficients
/// grow combinatorially with `k`, so callers must opt in to anything deeper.
pub const DEFAULT_K_CAP: u32 = 64;

/// A sign, +1 or -1. The series alternate when `Minus`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn to_bigint(self) -> BigInt {
        BigInt::from(self.value())
    }

    /// `self` raised to an integer power.
    pub fn pow(self, exp: u64) -> Sign {
        if self == Sign::Minus && exp % 2 == 1 {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    /// Negate `v` when the sign is `Minus`.
    pub fn apply(self, v: BigInt) -> BigInt {
        match self {
            Sign::Plus => v,
            Sign::Minus => -v,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value())
    }
}

impl FromStr for Sign {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "1" | "+1" => Ok(Sign::Plus),
            "-1" => Ok(Sign::Minus),
            other => Err(format!("expected 1 or -1, got {other:?}")),
        }
    }
}

/// The parameter tuple of one series family: sign `epsilon`, argument power
/// `alpha >= 1`, common exponent offset `beta`, and factorial shift `nu`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SeriesParams {
    pub epsilon: Sign,
    pub alpha: u32,
    pub beta: u32,
    pub nu: u32,
}

impl SeriesParams {
    pub fn new(epsilon: Sign, alpha: u32, beta: u32, nu: u32) -> Self {
        assert!(alpha >= 1, "series parameter alpha must be at least 1");
        Self {
            epsilon,
            alpha,
            beta,
            nu,
        }
    }
}

/// The generated family members for one degree index `k`: `U_k`, the core of
/// `V_{k-1}`, and `A_{k-1}`, along with the parameters they were generated
/// for. The full `V` polynomial is `v_core * x^beta`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyTriple {
    k: u32,
    u: IntPoly2,
    v_core: IntPoly2,
    a: IntPoly2,
    params: SeriesParams,
}

impl PolyTriple {
    pub fn new(k: u32, u: IntPoly2, v_core: IntPoly2, a: IntPoly2, params: SeriesParams) -> Self {
        assert!(k >= 1, "triples are indexed from k = 1");
        assert!(u.is_pure_y(), "U must be a polynomial in y alone");
        assert!(v_core.is_pure_y(), "V core must be a polynomial in y alone");
        Self {
            k,
            u,
            v_core,
            a,
            params,
        }
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn u(&self) -> &IntPoly2 {
        &self.u
    }

    pub fn v_core(&self) -> &IntPoly2 {
        &self.v_core
    }

    pub fn a(&self) -> &IntPoly2 {
        &self.a
    }

    pub fn params(&self) -> &SeriesParams {
        &self.params
    }

    /// The suppressed `x^beta` exponent of the full `V` polynomial.
    pub fn beta_exponent(&self) -> u32 {
        self.params.beta
    }
}

/// Generate `A_0 .. A_{k_max-1}`, polynomials in `m` and `y` with `A_0 = 1`.
///
/// The defining recurrence, solved for the top index, is
/// `A_k = eps*A_{k-1} + m^k y^k - sum_{l=1}^{k} C(k+1, l) y^{k+1-l} A_{l-1}`.
/// `nu` enters only through `m = N + nu`, so the output is independent of
/// the parameters apart from `epsilon`.
pub fn gen_a(k_max: u32, params: &SeriesParams) -> Vec<IntPoly2> {
    assert!(k_max >= 1, "k_max must be at least 1");
    let eps = params.epsilon.to_bigint();
    let mut list: Vec<IntPoly2> = Vec::with_capacity(k_max as usize);
    list.push(IntPoly2::one());
    for k in 1..k_max {
        let mut next = list[(k - 1) as usize].mul_scalar(&eps);
        next = &next + &IntPoly2::monomial(k, k, BigInt::one());
        for l in 1..=k {
            let c = binomial(k as u64 + 1, l as u64);
            next = &next - &list[(l - 1) as usize].mul_term(&c, 0, k + 1 - l);
        }
        list.push(next);
    }
    debug_assert!((1..k_max).all(|k| a_recurrence_residual(k, &list, params).is_zero()));
    list
}

/// Generate `U_1 .. U_{k_max}`, polynomials in `y` alone with
/// `U_1 = y - eps`.
///
/// Top-index form: `U_{k+1} = eps*U_k + y^{k+1} - sum_{l=1}^{k} C(k+1, l) y^{k+1-l} U_l`.
pub fn gen_u(k_max: u32, params: &SeriesParams) -> Vec<IntPoly2> {
    assert!(k_max >= 1, "k_max must be at least 1");
    let eps = params.epsilon.to_bigint();
    let mut list: Vec<IntPoly2> = Vec::with_capacity(k_max as usize);
    list.push(IntPoly2::from_terms([
        (0u32, 1u32, BigInt::one()),
        (0, 0, -&eps),
    ]));
    for k in 1..k_max {
        let mut next = list[(k - 1) as usize].mul_scalar(&eps);
        next = &next + &IntPoly2::monomial(0, k + 1, BigInt::one());
        for l in 1..=k {
            let c = binomial(k as u64 + 1, l as u64);
            next = &next - &list[(l - 1) as usize].mul_term(&c, 0, k + 1 - l);
        }
        list.push(next);
    }
    debug_assert!((1..k_max).all(|k| u_recurrence_residual(k, &list, params).is_zero()));
    list
}

/// Generate the cores of `V_0 .. V_{k_max-1}`, polynomials in `y` alone with
/// `V_0` core equal to `-eps * nu!` (the `x^beta` factor stays metadata).
///
/// Top-index form:
/// `V_k = eps*V_{k-1} - eps*nu!*nu^k y^k - sum_{l=1}^{k} C(k+1, l) y^{k+1-l} V_{l-1}`.
pub fn gen_v(k_max: u32, params: &SeriesParams) -> Vec<IntPoly2> {
    assert!(k_max >= 1, "k_max must be at least 1");
    let eps = params.epsilon.to_bigint();
    let nu_fact = factorial(params.nu as u64);
    let nu_big = BigInt::from(params.nu);
    let mut list: Vec<IntPoly2> = Vec::with_capacity(k_max as usize);
    list.push(IntPoly2::constant(-(&eps * &nu_fact)));
    let mut nu_pow = BigInt::one();
    for k in 1..k_max {
        nu_pow *= &nu_big;
        let mut next = list[(k - 1) as usize].mul_scalar(&eps);
        next = &next - &IntPoly2::monomial(0, k, &eps * &nu_fact * &nu_pow);
        for l in 1..=k {
            let c = binomial(k as u64 + 1, l as u64);
            next = &next - &list[(l - 1) as usize].mul_term(&c, 0, k + 1 - l);
        }
        list.push(next);
    }
    debug_assert!((1..k_max).all(|k| v_recurrence_residual(k, &list, params).is_zero()));
    list
}

/// Recover `U_k` from `A_{k-1}` by the closed form
/// `U_k = (nu+1) y A_{k-1}(m = nu+1) - eps A_{k-1}(m = nu) - nu^k y^k`.
///
/// The result is independent of `nu` even though `nu` appears in the
/// formula; that cancellation is a tested invariant.
pub fn derive_u_from_a(k: u32, a_prev: &IntPoly2, params: &SeriesParams) -> IntPoly2 {
    assert!(k >= 1);
    let nu = BigInt::from(params.nu);
    let at_one = a_prev.eval_m(&(&nu + 1));
    let at_zero = a_prev.eval_m(&nu);
    let mut out = at_one.mul_term(&(&nu + 1), 0, 1);
    out = &out - &at_zero.mul_scalar(&params.epsilon.to_bigint());
    let nu_pow_k = num_traits::pow::pow(nu, k as usize);
    &out - &IntPoly2::monomial(0, k, nu_pow_k)
}

/// Recover the core of `V_{k-1}` from `A_{k-1}`:
/// `-eps * nu! * A_{k-1}(m = nu)`.
pub fn derive_v_from_a(k: u32, a_prev: &IntPoly2, params: &SeriesParams) -> IntPoly2 {
    assert!(k >= 1);
    let nu = BigInt::from(params.nu);
    let scale = -(params.epsilon.to_bigint() * factorial(params.nu as u64));
    a_prev.eval_m(&nu).mul_scalar(&scale)
}

/// Generate the full triple list for `k = 1 ..= k_max`.
pub fn generate_triples(k_max: u32, params: &SeriesParams) -> Vec<PolyTriple> {
    let u = gen_u(k_max, params);
    let v = gen_v(k_max, params);
    let a = gen_a(k_max, params);
    u.into_iter()
        .zip(v)
        .zip(a)
        .enumerate()
        .map(|(i, ((u_k, v_core), a_prev))| {
            PolyTriple::new(i as u32 + 1, u_k, v_core, a_prev, *params)
        })
        .collect()
}

/// Residual of the defining `U` recurrence at index `k`:
/// `sum_{l=1}^{k+1} C(k+1, l) y^{k-l+1} U_l - eps U_k - y^{k+1}`.
///
/// Zero exactly when the listed polynomials satisfy the recurrence. The
/// slice holds `U_1 ..` as produced by [`gen_u`] and must reach `U_{k+1}`.
pub fn u_recurrence_residual(k: u32, u_list: &[IntPoly2], params: &SeriesParams) -> IntPoly2 {
    assert!(
        k >= 1 && u_list.len() as u32 > k,
        "need U_1 ..= U_{}",
        k + 1
    );
    let mut acc = IntPoly2::zero();
    for l in 1..=k + 1 {
        let c = binomial(k as u64 + 1, l as u64);
        acc = &acc + &u_list[(l - 1) as usize].mul_term(&c, 0, k + 1 - l);
    }
    acc = &acc - &u_list[(k - 1) as usize].mul_scalar(&params.epsilon.to_bigint());
    &acc - &IntPoly2::monomial(0, k + 1, BigInt::one())
}

/// Residual of the defining `V` recurrence at index `k`, in core form:
/// `sum_{l=1}^{k+1} C(k+1, l) y^{k-l+1} V_{l-1} - eps V_{k-1} + eps nu! nu^k y^k`.
///
/// The slice holds `V_0 ..` as produced by [`gen_v`] and must reach `V_k`.
pub fn v_recurrence_residual(k: u32, v_list: &[IntPoly2], params: &SeriesParams) -> IntPoly2 {
    assert!(k >= 1 && v_list.len() as u32 > k, "need V_0 ..= V_{k}");
    let mut acc = IntPoly2::zero();
    for l in 1..=k + 1 {
        let c = binomial(k as u64 + 1, l as u64);
        acc = &acc + &v_list[(l - 1) as usize].mul_term(&c, 0, k + 1 - l);
    }
    acc = &acc - &v_list[(k - 1) as usize].mul_scalar(&params.epsilon.to_bigint());
    let nu = BigInt::from(params.nu);
    let inhom = params.epsilon.to_bigint()
        * factorial(params.nu as u64)
        * num_traits::pow::pow(nu, k as usize);
    &acc + &IntPoly2::monomial(0, k, inhom)
}

/// Residual of the defining `A` recurrence at index `k`:
/// `sum_{l=1}^{k+1} C(k+1, l) y^{k-l+1} A_{l-1} - eps A_{k-1} - m^k y^k`.
///
/// The slice holds `A_0 ..` as produced by [`gen_a`] and must reach `A_k`.
pub fn a_recurrence_residual(k: u32, a_list: &[IntPoly2], params: &SeriesParams) -> IntPoly2 {
    assert!(k >= 1 && a_list.len() as u32 > k, "need A_0 ..= A_{k}");
    let mut acc = IntPoly2::zero();
    for l in 1..=k + 1 {
        let c = binomial(k as u64 + 1, l as u64);
        acc = &acc + &a_list[(l - 1) as usize].mul_term(&c, 0, k + 1 - l);
    }
    acc = &acc - &a_list[(k - 1) as usize].mul_scalar(&params.epsilon.to_bigint());
    &acc - &IntPoly2::monomial(k, k, BigInt::one())
}
