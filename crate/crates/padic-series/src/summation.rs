//! Exact partial sums, identity certification, and p-adic convergence
//! traces for the factorial series family.
//!
//! The central object is the finite identity
//!
//! ```text
//! sum_{n=0}^{N-1} eps^n (n+nu)! [(n+nu)^k x^{k*alpha} + U_k(x^alpha)] x^{alpha*n+beta}
//!     = V_{k-1}(x) + A_{k-1}(N; x) eps^{N-1} (N+nu)! x^{alpha*N+beta}
//! ```
//!
//! which holds as an equality of integers for every integer `x` and every
//! `N >= 1` once the families from [`crate::families`] are substituted.
//! [`certify_identity`] checks it pointwise over a parameter grid and
//! returns one [`IdentityCertificate`] per point; a failing certificate is
//! data, not a panic, because the certificate list is the diagnostic
//! artifact.
//!
//! Letting `N` grow, the boundary term carries the factor `(N+nu)!` whose
//! p-adic size collapses, so the partial sums converge p-adically to the
//! `V` value, the same integer for every prime. [`convergence_trace`]
//! records the valuation of the distance for each `N`, and
//! [`build_general_series`] assembles integer linear combinations of the
//! identities into series with prescribed polynomial weights, summing to
//! `Q(x) = sum_j B_j V_{j-1}(x)`.

use std::collections::HashMap;
use std::ops::RangeInclusive;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::families::{gen_a, gen_u, gen_v, PolyTriple, SeriesParams, Sign};
use crate::padic::{padic_valuation, PadicInt, Valuation};
use crate::poly::{factorial, IntPoly2};

/// `x^e` with the empty-product convention `x^0 = 1`, including `0^0 = 1`.
pub fn int_pow(x: &BigInt, e: u64) -> BigInt {
    if e == 0 {
        return BigInt::one();
    }
    let mut acc = x.clone();
    let mut result = BigInt::one();
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            result *= &acc;
        }
        e >>= 1;
        if e > 0 {
            acc = &acc * &acc;
        }
    }
    result
}

/// Incrementally produces the signed common factor
/// `eps^n (n+nu)! x^{alpha*n+beta}` of consecutive series terms, one
/// big-integer multiplication per step instead of a factorial from scratch.
struct TermBase {
    fact: BigInt,
    xpow: BigInt,
    x_alpha: BigInt,
    nu: u64,
    alternating: bool,
    negative: bool,
    next_n: u64,
}

impl TermBase {
    fn new(params: &SeriesParams, x: &BigInt) -> Self {
        Self {
            fact: factorial(params.nu as u64),
            xpow: int_pow(x, params.beta as u64),
            x_alpha: int_pow(x, params.alpha as u64),
            nu: params.nu as u64,
            alternating: params.epsilon == Sign::Minus,
            negative: false,
            next_n: 0,
        }
    }

    /// The term index and signed base for the next `n`, advancing the state.
    fn next_term(&mut self) -> (u64, BigInt) {
        let n = self.next_n;
        if n > 0 {
            self.fact *= BigInt::from(n + self.nu);
            self.xpow *= &self.x_alpha;
            if self.alternating {
                self.negative = !self.negative;
            }
        }
        self.next_n = n + 1;
        let base = &self.fact * &self.xpow;
        (n, if self.negative { -base } else { base })
    }
}

fn weighted_sums(n_terms: u64, k: u32, params: &SeriesParams, x: &BigInt) -> (BigInt, BigInt) {
    assert!(n_terms >= 1, "partial sums need at least one term");
    let mut base = TermBase::new(params, x);
    let mut s0 = BigInt::zero();
    let mut sk = BigInt::zero();
    for _ in 0..n_terms {
        let (n, signed) = base.next_term();
        let weight = int_pow(&BigInt::from(n + params.nu as u64), k as u64);
        sk += &signed * weight;
        s0 += signed;
    }
    (s0, sk)
}

/// The plain partial sum `sum_{n=0}^{N-1} eps^n (n+nu)! x^{alpha*n+beta}`.
pub fn partial_sum_s0(n_terms: u64, params: &SeriesParams, x: &BigInt) -> BigInt {
    weighted_sums(n_terms, 0, params, x).0
}

/// The power-weighted partial sum
/// `sum_{n=0}^{N-1} eps^n (n+nu)! (n+nu)^k x^{alpha*n+beta}`.
pub fn partial_sum_sk(n_terms: u64, k: u32, params: &SeriesParams, x: &BigInt) -> BigInt {
    weighted_sums(n_terms, k, params, x).1
}

fn lhs_value(u_k: &IntPoly2, k: u32, params: &SeriesParams, x: &BigInt, n_terms: u64) -> BigInt {
    let (s0, sk) = weighted_sums(n_terms, k, params, x);
    let y = int_pow(x, params.alpha as u64);
    let x_k_alpha = int_pow(&y, k as u64);
    x_k_alpha * sk + u_k.eval_y(&y) * s0
}

fn rhs_value(
    v_core: &IntPoly2,
    a_prev: &IntPoly2,
    params: &SeriesParams,
    x: &BigInt,
    n_terms: u64,
) -> BigInt {
    let y = int_pow(x, params.alpha as u64);
    let v_value = v_core.eval_y(&y) * int_pow(x, params.beta as u64);
    let m = BigInt::from(n_terms + params.nu as u64);
    let a_value = a_prev.eval(&m, &y);
    let tail_sign = params.epsilon.pow(n_terms - 1);
    let tail = a_value
        * factorial(n_terms + params.nu as u64)
        * int_pow(x, params.alpha as u64 * n_terms + params.beta as u64);
    v_value + tail_sign.apply(tail)
}

/// Left side of the identity for the family member `triple`, as an exact
/// integer: `x^{k*alpha} * S_k + U_k(x^alpha) * S_0` over `N` terms.
pub fn lhs_identity(n_terms: u64, triple: &PolyTriple, x: &BigInt) -> BigInt {
    lhs_value(triple.u(), triple.k(), triple.params(), x, n_terms)
}

/// Right side of the identity: the `V` value plus the factorial boundary
/// term with `A_{k-1}` evaluated at `m = N + nu`, `y = x^alpha`.
pub fn rhs_identity(n_terms: u64, triple: &PolyTriple, x: &BigInt) -> BigInt {
    rhs_value(triple.v_core(), triple.a(), triple.params(), x, n_terms)
}

/// The record of one exact identity check at one parameter point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityCertificate {
    pub k: u32,
    pub params: SeriesParams,
    pub x: i64,
    pub n_terms: u64,
    pub lhs: BigInt,
    pub rhs: BigInt,
    pub pass: bool,
}

impl Serialize for IdentityCertificate {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("IdentityCertificate", 10)?;
        s.serialize_field("k", &self.k)?;
        s.serialize_field("alpha", &self.params.alpha)?;
        s.serialize_field("beta", &self.params.beta)?;
        s.serialize_field("nu", &self.params.nu)?;
        s.serialize_field("epsilon", &self.params.epsilon.value())?;
        s.serialize_field("x", &self.x)?;
        s.serialize_field("N", &self.n_terms)?;
        s.serialize_field("lhs", &self.lhs.to_string())?;
        s.serialize_field("rhs", &self.rhs.to_string())?;
        s.serialize_field("pass", &self.pass)?;
        s.end()
    }
}

/// Certify the identity at a single point using the supplied triple.
pub fn certify_point(triple: &PolyTriple, x: i64, n_terms: u64) -> IdentityCertificate {
    let x_big = BigInt::from(x);
    let lhs = lhs_identity(n_terms, triple, &x_big);
    let rhs = rhs_identity(n_terms, triple, &x_big);
    let pass = lhs == rhs;
    IdentityCertificate {
        k: triple.k(),
        params: *triple.params(),
        x,
        n_terms,
        lhs,
        rhs,
        pass,
    }
}

/// An inclusive parameter grid for [`certify_identity`]. Iteration is
/// lexicographic in `(k, alpha, beta, nu, epsilon, x, n_terms)` with
/// `epsilon` in the order listed, so output ordering is deterministic.
#[derive(Clone, Debug)]
pub struct IdentityGrid {
    pub k: RangeInclusive<u32>,
    pub alpha: RangeInclusive<u32>,
    pub beta: RangeInclusive<u32>,
    pub nu: RangeInclusive<u32>,
    pub epsilon: Vec<Sign>,
    pub x: RangeInclusive<i64>,
    pub n_terms: RangeInclusive<u64>,
}

/// One point of an [`IdentityGrid`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GridPoint {
    pub k: u32,
    pub params: SeriesParams,
    pub x: i64,
    pub n_terms: u64,
}

impl IdentityGrid {
    /// The default certification sweep: `k` 1..8, `alpha` 1..3, `beta` 0..2,
    /// `nu` 0..3, both signs, `x` -5..5, `N` 1..12.
    pub fn default_sweep() -> Self {
        Self {
            k: 1..=8,
            alpha: 1..=3,
            beta: 0..=2,
            nu: 0..=3,
            epsilon: vec![Sign::Plus, Sign::Minus],
            x: -5..=5,
            n_terms: 1..=12,
        }
    }

    pub fn point_count(&self) -> u64 {
        let len_u32 = |r: &RangeInclusive<u32>| (r.end() - r.start() + 1) as u64;
        let x_len = (self.x.end() - self.x.start() + 1) as u64;
        let n_len = self.n_terms.end() - self.n_terms.start() + 1;
        len_u32(&self.k)
            * len_u32(&self.alpha)
            * len_u32(&self.beta)
            * len_u32(&self.nu)
            * self.epsilon.len() as u64
            * x_len
            * n_len
    }

    /// Iterate the grid points in the documented deterministic order.
    pub fn points(&self) -> impl Iterator<Item = GridPoint> {
        let alpha_r = self.alpha.clone();
        let beta_r = self.beta.clone();
        let nu_r = self.nu.clone();
        let eps_v = self.epsilon.clone();
        let x_r = self.x.clone();
        let n_r = self.n_terms.clone();
        self.k.clone().flat_map(move |k| {
            let beta_r = beta_r.clone();
            let nu_r = nu_r.clone();
            let eps_v = eps_v.clone();
            let x_r = x_r.clone();
            let n_r = n_r.clone();
            alpha_r.clone().flat_map(move |alpha| {
                let nu_r = nu_r.clone();
                let eps_v = eps_v.clone();
                let x_r = x_r.clone();
                let n_r = n_r.clone();
                beta_r.clone().flat_map(move |beta| {
                    let eps_v = eps_v.clone();
                    let x_r = x_r.clone();
                    let n_r = n_r.clone();
                    nu_r.clone().flat_map(move |nu| {
                        let x_r = x_r.clone();
                        let n_r = n_r.clone();
                        eps_v.clone().into_iter().flat_map(move |epsilon| {
                            let n_r = n_r.clone();
                            x_r.clone().flat_map(move |x| {
                                n_r.clone().map(move |n_terms| GridPoint {
                                    k,
                                    params: SeriesParams::new(epsilon, alpha, beta, nu),
                                    x,
                                    n_terms,
                                })
                            })
                        })
                    })
                })
            })
        })
    }
}

/// Check the identity exactly at every grid point. Failures are collected,
/// never raised: the certificate list is the artifact.
pub fn certify_identity(grid: &IdentityGrid) -> Vec<IdentityCertificate> {
    type FamilyLists = (Vec<IntPoly2>, Vec<IntPoly2>, Vec<IntPoly2>);
    let k_max = *grid.k.end();
    // The polynomial families depend only on (epsilon, nu); reuse them
    // across the alpha/beta/x/N axes of the sweep.
    let mut cache: HashMap<(Sign, u32), FamilyLists> = HashMap::new();
    for &epsilon in &grid.epsilon {
        for nu in grid.nu.clone() {
            let params = SeriesParams::new(epsilon, 1, 0, nu);
            cache.insert(
                (epsilon, nu),
                (
                    gen_u(k_max, &params),
                    gen_v(k_max, &params),
                    gen_a(k_max, &params),
                ),
            );
        }
    }
    let mut certificates = Vec::with_capacity(grid.point_count() as usize);
    for point in grid.points() {
        let (u, v, a) = &cache[&(point.params.epsilon, point.params.nu)];
        let idx = (point.k - 1) as usize;
        let x_big = BigInt::from(point.x);
        let lhs = lhs_value(&u[idx], point.k, &point.params, &x_big, point.n_terms);
        let rhs = rhs_value(&v[idx], &a[idx], &point.params, &x_big, point.n_terms);
        let pass = lhs == rhs;
        certificates.push(IdentityCertificate {
            k: point.k,
            params: point.params,
            x: point.x,
            n_terms: point.n_terms,
            lhs,
            rhs,
            pass,
        });
    }
    certificates
}

/// One row of a convergence trace: the p-adic valuation of the distance
/// between the `N`-term partial sum and the series value.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TraceRow {
    pub n_terms: u64,
    pub valuation: Valuation,
}

/// The p-adic convergence record of one series member at one prime.
#[derive(Clone, Debug)]
pub struct ConvergenceTrace {
    pub k: u32,
    pub params: SeriesParams,
    pub x: BigInt,
    pub prime: u64,
    /// The limit value `V_{k-1}(x)` the partial sums approach.
    pub series_value: BigInt,
    pub rows: Vec<TraceRow>,
}

/// Trace `v_p(S_N - V)` for `N = 1 ..= n_max`.
///
/// By the certified identity the distance equals the boundary term, so each
/// valuation is at least the factorial bound
/// `(N+nu - s_{N+nu})/(p-1) + (alpha*N+beta) * v_p(x)` and grows without
/// bound. A distance of exactly zero (for example every row when `x = 0`,
/// where the series degenerates to its value) is reported as
/// [`Valuation::Infinite`].
pub fn convergence_trace(
    k: u32,
    params: &SeriesParams,
    x: &BigInt,
    prime: u64,
    n_max: u64,
) -> ConvergenceTrace {
    assert!(k >= 1);
    let u = gen_u(k, params);
    let v = gen_v(k, params);
    let u_k = &u[(k - 1) as usize];
    let v_core = &v[(k - 1) as usize];

    let y = int_pow(x, params.alpha as u64);
    let x_k_alpha = int_pow(&y, k as u64);
    let u_value = u_k.eval_y(&y);
    let series_value = v_core.eval_y(&y) * int_pow(x, params.beta as u64);

    let mut base = TermBase::new(params, x);
    let mut s0 = BigInt::zero();
    let mut sk = BigInt::zero();
    let mut rows = Vec::with_capacity(n_max as usize);
    for _ in 0..n_max {
        let (n, signed) = base.next_term();
        let weight = int_pow(&BigInt::from(n + params.nu as u64), k as u64);
        sk += &signed * weight;
        s0 += signed;
        let partial = &x_k_alpha * &sk + &u_value * &s0;
        let distance = partial - &series_value;
        rows.push(TraceRow {
            n_terms: n + 1,
            valuation: padic_valuation(&distance, prime),
        });
    }
    ConvergenceTrace {
        k,
        params: *params,
        x: x.clone(),
        prime,
        series_value,
        rows,
    }
}

/// Like [`convergence_trace`], but carried out entirely in truncated
/// p-adic arithmetic with `precision` digits: every accumulator is a
/// [`PadicInt`] residue mod `p^precision`. A distance divisible by
/// `p^precision` is indistinguishable from zero at that precision and its
/// row reports [`Valuation::Infinite`]; all shallower rows agree exactly
/// with the exact trace.
pub fn truncated_trace(
    k: u32,
    params: &SeriesParams,
    x: &BigInt,
    prime: u64,
    n_max: u64,
    precision: u32,
) -> ConvergenceTrace {
    assert!(k >= 1);
    let u = gen_u(k, params);
    let v = gen_v(k, params);
    let u_k = &u[(k - 1) as usize];
    let v_core = &v[(k - 1) as usize];

    let y = int_pow(x, params.alpha as u64);
    let series_value = v_core.eval_y(&y) * int_pow(x, params.beta as u64);

    let reduce = |v: &BigInt| PadicInt::from_integer(v, prime, precision);
    let x_k_alpha = reduce(&int_pow(&y, k as u64));
    let u_value = reduce(&u_k.eval_y(&y));
    let v_reduced = reduce(&series_value);
    let x_alpha = reduce(&int_pow(x, params.alpha as u64));

    let mut fact = reduce(&factorial(params.nu as u64));
    let mut xpow = reduce(&int_pow(x, params.beta as u64));
    let mut s0 = reduce(&BigInt::zero());
    let mut sk = s0.clone();
    let mut rows = Vec::with_capacity(n_max as usize);
    for n in 0..n_max {
        if n > 0 {
            fact = fact.mul(&reduce(&BigInt::from(n + params.nu as u64)));
            xpow = xpow.mul(&x_alpha);
        }
        let mut base = fact.mul(&xpow);
        if params.epsilon == Sign::Minus && n % 2 == 1 {
            base = base.neg();
        }
        let mut weight = reduce(&BigInt::one());
        let m = reduce(&BigInt::from(n + params.nu as u64));
        for _ in 0..k {
            weight = weight.mul(&m);
        }
        sk = sk.add(&base.mul(&weight));
        s0 = s0.add(&base);
        let partial = x_k_alpha.mul(&sk).add(&u_value.mul(&s0));
        rows.push(TraceRow {
            n_terms: n + 1,
            valuation: partial.sub(&v_reduced).valuation(),
        });
    }
    ConvergenceTrace {
        k,
        params: *params,
        x: x.clone(),
        prime,
        series_value,
        rows,
    }
}

/// A series with polynomial weight `P(n; x) = sum_j B_j [(n+nu)^j x^{j*alpha}
/// + U_j(x)]`, which sums p-adically to `Q(x) = sum_j B_j V_{j-1}(x)` for
/// every integer `x`, independent of the prime.
#[derive(Clone, Debug)]
pub struct GeneralSeries {
    /// The integer weights `B_1 ..= B_k`.
    pub coefficients: Vec<BigInt>,
    pub params: SeriesParams,
    /// The `(j, U_j)` pairs describing the weight polynomial.
    pub p_terms: Vec<(u32, IntPoly2)>,
    /// Core of the series value `Q`; the full value is `q_core(x^alpha) * x^beta`.
    pub q_core: IntPoly2,
}

/// Assemble the general series for weights `B_1 ..= B_k` (the length of
/// `coefficients` is `k`). The top weight must be nonzero so the weight
/// polynomial genuinely has degree `k*alpha`.
pub fn build_general_series(coefficients: Vec<BigInt>, params: &SeriesParams) -> GeneralSeries {
    assert!(!coefficients.is_empty(), "need at least one weight B_1");
    assert!(
        !coefficients.last().unwrap().is_zero(),
        "the top weight B_k must be nonzero"
    );
    let k = coefficients.len() as u32;
    let u = gen_u(k, params);
    let v = gen_v(k, params);
    let p_terms: Vec<(u32, IntPoly2)> = (1..=k).zip(u).collect();
    let mut q_core = IntPoly2::zero();
    for (b, v_core) in coefficients.iter().zip(&v) {
        q_core = &q_core + &v_core.mul_scalar(b);
    }
    GeneralSeries {
        coefficients,
        params: *params,
        p_terms,
        q_core,
    }
}

/// The series value `Q(x)` the partial sums converge to p-adically.
pub fn general_series_value(gs: &GeneralSeries, x: &BigInt) -> BigInt {
    let y = int_pow(x, gs.params.alpha as u64);
    gs.q_core.eval_y(&y) * int_pow(x, gs.params.beta as u64)
}

/// Exact `N`-term partial sum of the general series, computed term by term
/// from the weight polynomial.
pub fn general_series_partial(gs: &GeneralSeries, x: &BigInt, n_terms: u64) -> BigInt {
    assert!(n_terms >= 1);
    let y = int_pow(x, gs.params.alpha as u64);
    let u_values: Vec<BigInt> = gs.p_terms.iter().map(|(_, u)| u.eval_y(&y)).collect();
    let y_pows: Vec<BigInt> = (0..=gs.coefficients.len() as u64)
        .map(|j| int_pow(&y, j))
        .collect();
    let nu = gs.params.nu as u64;
    let mut base = TermBase::new(&gs.params, x);
    let mut acc = BigInt::zero();
    for _ in 0..n_terms {
        let (n, signed) = base.next_term();
        let m = BigInt::from(n + nu);
        let mut weight = BigInt::zero();
        for (j, b) in gs.coefficients.iter().enumerate() {
            let power = int_pow(&m, j as u64 + 1);
            weight += b * (power * &y_pows[j + 1] + &u_values[j]);
        }
        acc += signed * weight;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::generate_triples;

    fn params(epsilon: Sign, alpha: u32, beta: u32, nu: u32) -> SeriesParams {
        SeriesParams::new(epsilon, alpha, beta, nu)
    }

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    /// Term-by-term reference: every factorial and power recomputed from
    /// scratch, no shared accumulators.
    fn naive_s_k(n_terms: u64, k: u32, p: &SeriesParams, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for n in 0..n_terms {
            let m = n + p.nu as u64;
            let term = p.epsilon.pow(n).apply(
                factorial(m)
                    * int_pow(&BigInt::from(m), k as u64)
                    * int_pow(x, p.alpha as u64 * n + p.beta as u64),
            );
            acc += term;
        }
        acc
    }

    #[test]
    fn int_pow_conventions() {
        assert_eq!(int_pow(&big(0), 0), big(1));
        assert_eq!(int_pow(&big(0), 5), big(0));
        assert_eq!(int_pow(&big(-2), 10), big(1024));
        assert_eq!(int_pow(&big(-2), 11), big(-2048));
    }

    #[test]
    fn s0_examples() {
        assert_eq!(
            partial_sum_s0(1, &params(Sign::Plus, 1, 0, 0), &big(5)),
            big(1)
        );
        assert_eq!(
            partial_sum_s0(1, &params(Sign::Minus, 3, 0, 0), &big(-2)),
            big(1)
        );
        assert_eq!(
            partial_sum_s0(3, &params(Sign::Plus, 1, 0, 0), &big(1)),
            big(4)
        );
        // 1!*1 - 2!*2 = -3
        assert_eq!(
            partial_sum_s0(2, &params(Sign::Minus, 1, 0, 1), &big(2)),
            big(-3)
        );
    }

    #[test]
    fn sk_examples() {
        let p = params(Sign::Plus, 1, 0, 0);
        // k = 0 is the plain sum by definition
        for n in 1..6 {
            assert_eq!(
                partial_sum_sk(n, 0, &p, &big(2)),
                partial_sum_s0(n, &p, &big(2))
            );
        }
        // 0 + 1 + 4 + 18 = 23 = 4! - 1
        assert_eq!(partial_sum_sk(4, 1, &p, &big(1)), big(23));
        // x = 0 with k >= 1: every term vanishes (the n=0 weight is 0^k = 0)
        assert_eq!(partial_sum_sk(3, 2, &p, &big(0)), big(0));
    }

    #[test]
    fn accumulators_match_naive_reference() {
        for eps in [Sign::Plus, Sign::Minus] {
            for (alpha, beta, nu) in [(1, 0, 0), (2, 1, 1), (1, 2, 3)] {
                let p = params(eps, alpha, beta, nu);
                for x in [-3i64, -1, 0, 1, 2] {
                    for k in 0..4u32 {
                        for n in 1..7u64 {
                            assert_eq!(
                                partial_sum_sk(n, k, &p, &big(x)),
                                naive_s_k(n, k, &p, &big(x)),
                                "eps={eps:?} a={alpha} b={beta} nu={nu} x={x} k={k} N={n}"
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn lhs_known_values() {
        let p = params(Sign::Plus, 1, 0, 0);
        let triples = generate_triples(1, &p);
        // sum n!*n over n = 0..2 is 5
        assert_eq!(lhs_identity(3, &triples[0], &big(1)), big(5));

        let p_minus = params(Sign::Minus, 1, 0, 0);
        let triples_minus = generate_triples(1, &p_minus);
        // alternating weight n + 2: 2 - 3 = -1
        assert_eq!(lhs_identity(2, &triples_minus[0], &big(1)), big(-1));
    }

    #[test]
    fn lhs_single_term_is_u_value() {
        // With nu = 0 and one term, only U_k(x^alpha) survives for k >= 1.
        let p = params(Sign::Plus, 2, 0, 0);
        let triples = generate_triples(4, &p);
        for t in &triples {
            for x in [-2i64, 1, 3] {
                let y = int_pow(&big(x), 2);
                assert_eq!(lhs_identity(1, t, &big(x)), t.u().eval_y(&y));
            }
        }
    }

    #[test]
    fn rhs_known_values() {
        let p = params(Sign::Plus, 1, 0, 0);
        let triples = generate_triples(1, &p);
        // -1 + 3! = 5
        assert_eq!(rhs_identity(3, &triples[0], &big(1)), big(5));

        let p_minus = params(Sign::Minus, 1, 0, 0);
        let triples_minus = generate_triples(1, &p_minus);
        // V_0 = 1, boundary -2!: total -1
        assert_eq!(rhs_identity(2, &triples_minus[0], &big(1)), big(-1));
    }

    #[test]
    fn rhs_at_x_zero_is_v_constant() {
        for eps in [Sign::Plus, Sign::Minus] {
            for nu in 0u32..3 {
                let p = params(eps, 2, 0, nu);
                let triples = generate_triples(5, &p);
                let nu_fact: i64 = (1..=nu as i64).product::<i64>().max(1);
                for t in &triples {
                    let expect = big(-nu_fact * eps.value().pow(t.k()));
                    for n in 1..4u64 {
                        assert_eq!(rhs_identity(n, t, &big(0)), expect, "k={}", t.k());
                        assert_eq!(lhs_identity(n, t, &big(0)), expect, "k={}", t.k());
                    }
                }
            }
        }
    }

    #[test]
    fn certify_small_grid_passes() {
        let grid = IdentityGrid {
            k: 1..=3,
            alpha: 1..=2,
            beta: 0..=1,
            nu: 0..=1,
            epsilon: vec![Sign::Plus, Sign::Minus],
            x: -2..=2,
            n_terms: 1..=4,
        };
        let certs = certify_identity(&grid);
        assert_eq!(certs.len() as u64, grid.point_count());
        assert!(certs.iter().all(|c| c.pass));
        assert!(certs.iter().all(|c| c.lhs == c.rhs));
    }

    #[test]
    fn corrupted_u_fails_somewhere() {
        let p = params(Sign::Plus, 1, 0, 0);
        let triples = generate_triples(2, &p);
        let t = &triples[1];
        let bad_u = t.u() + &IntPoly2::constant(1);
        let bad = PolyTriple::new(t.k(), bad_u, t.v_core().clone(), t.a().clone(), *t.params());
        let failures = (1..=4u64)
            .filter(|&n| !certify_point(&bad, 1, n).pass)
            .count();
        assert!(failures > 0, "a corrupted U must break the identity");
    }

    #[test]
    fn certificate_json_shape() {
        let p = params(Sign::Minus, 2, 1, 0);
        let triples = generate_triples(1, &p);
        let cert = certify_point(&triples[0], -3, 2);
        assert!(cert.pass);
        let json = serde_json::to_string(&cert).unwrap();
        assert!(json.starts_with(r#"{"k":1,"alpha":2,"beta":1,"nu":0,"epsilon":-1,"x":-3,"N":2,"#));
        assert!(json.contains(r#""pass":true"#));
    }

    #[test]
    fn trace_landmark_rows() {
        let p = params(Sign::Plus, 1, 0, 0);
        let trace = convergence_trace(1, &p, &big(1), 2, 8);
        assert_eq!(trace.series_value, big(-1));
        let vals: Vec<Valuation> = trace.rows.iter().map(|r| r.valuation).collect();
        // S_N - (-1) = N!, so the valuations are v_2(N!)
        let expect: Vec<Valuation> = (1..=8u64)
            .map(|n| padic_valuation(&factorial(n), 2))
            .collect();
        assert_eq!(vals, expect);
        assert_eq!(vals[3], Valuation::Finite(3)); // v_2(4!) = 3
        assert_eq!(vals[7], Valuation::Finite(7)); // v_2(8!) = 7
    }

    #[test]
    fn truncated_trace_saturates_at_precision() {
        let p = params(Sign::Plus, 1, 0, 0);
        let exact = convergence_trace(1, &p, &big(1), 2, 10);
        let truncated = truncated_trace(1, &p, &big(1), 2, 10, 5);
        for (e, t) in exact.rows.iter().zip(&truncated.rows) {
            match e.valuation {
                Valuation::Finite(v) if v < 5 => assert_eq!(t.valuation, e.valuation),
                // 5 digits cannot distinguish the distance from zero
                _ => assert_eq!(t.valuation, Valuation::Infinite),
            }
        }
        // with enough digits the truncated rows are the exact rows
        let deep = truncated_trace(1, &p, &big(1), 2, 10, 64);
        assert_eq!(deep.rows, exact.rows);
    }

    #[test]
    fn truncated_trace_matches_exact_across_params() {
        for eps in [Sign::Plus, Sign::Minus] {
            let p = params(eps, 2, 1, 1);
            for x in [-2i64, 1, 3] {
                let exact = convergence_trace(2, &p, &big(x), 3, 12);
                let truncated = truncated_trace(2, &p, &big(x), 3, 12, 64);
                assert_eq!(truncated.rows, exact.rows, "eps={eps:?} x={x}");
            }
        }
    }

    #[test]
    fn trace_bound_attained_at_unit_boundary_values() {
        // The distance equals A_{k-1}(N; x) times the factorial tail, so the
        // factorial bound is attained exactly when that A value is a unit.
        use crate::padic::term_valuation_lower_bound;
        let pr = params(Sign::Plus, 1, 0, 0);
        for p in [2u64, 3, 5] {
            for k in 1..=3u32 {
                let a = crate::families::gen_a(k, &pr);
                let a_prev = &a[(k - 1) as usize];
                for x in [1i64, -1, 2] {
                    let xb = big(x);
                    let trace = convergence_trace(k, &pr, &xb, p, 20);
                    for row in &trace.rows {
                        let a_val = a_prev.eval(&BigInt::from(row.n_terms), &xb);
                        let bound = term_valuation_lower_bound(row.n_terms, &pr, &xb, p);
                        if padic_valuation(&a_val, p) == Valuation::Finite(0) {
                            assert_eq!(row.valuation, bound, "p={p} k={k} x={x} N={}", row.n_terms);
                        } else {
                            assert!(row.valuation > bound || a_val.is_zero());
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn trace_degenerate_at_x_zero() {
        // With x = 0 the partial sums equal the series value from N = 1 on,
        // so every distance is exactly zero.
        for beta in 0..2u32 {
            let p = params(Sign::Plus, 1, beta, 1);
            let trace = convergence_trace(2, &p, &big(0), 3, 5);
            assert!(trace
                .rows
                .iter()
                .all(|r| r.valuation == Valuation::Infinite));
        }
    }

    // Independent expansions of the two lowest identities, written directly
    // from their explicit closed forms rather than through the generators.

    fn first_identity_sides(p: &SeriesParams, x: &BigInt, n_terms: u64) -> (BigInt, BigInt) {
        let eps = p.epsilon.to_bigint();
        let y = int_pow(x, p.alpha as u64);
        let mut lhs = BigInt::zero();
        for n in 0..n_terms {
            let m = n + p.nu as u64;
            let weight = &y * BigInt::from(m) + &y - &eps;
            lhs += p
                .epsilon
                .pow(n)
                .apply(factorial(m) * weight * int_pow(x, p.alpha as u64 * n + p.beta as u64));
        }
        let rhs = -&eps * factorial(p.nu as u64) * int_pow(x, p.beta as u64)
            + p.epsilon.pow(n_terms - 1).apply(
                factorial(n_terms + p.nu as u64)
                    * int_pow(x, p.alpha as u64 * n_terms + p.beta as u64),
            );
        (lhs, rhs)
    }

    fn second_identity_sides(p: &SeriesParams, x: &BigInt, n_terms: u64) -> (BigInt, BigInt) {
        let eps = p.epsilon.to_bigint();
        let y = int_pow(x, p.alpha as u64);
        let y2 = &y * &y;
        let nu = BigInt::from(p.nu);
        let mut lhs = BigInt::zero();
        for n in 0..n_terms {
            let m = n + p.nu as u64;
            let m_big = BigInt::from(m);
            let weight = &y2 * &m_big * &m_big - (&y2 - BigInt::from(3) * &eps * &y + 1);
            lhs += p
                .epsilon
                .pow(n)
                .apply(factorial(m) * weight * int_pow(x, p.alpha as u64 * n + p.beta as u64));
        }
        let m_n = BigInt::from(n_terms + p.nu as u64);
        let rhs = &eps
            * factorial(p.nu as u64)
            * ((BigInt::from(2) - &nu) * &y - &eps)
            * int_pow(x, p.beta as u64)
            + p.epsilon.pow(n_terms - 1).apply(
                ((&m_n - BigInt::from(2)) * &y + &eps)
                    * factorial(n_terms + p.nu as u64)
                    * int_pow(x, p.alpha as u64 * n_terms + p.beta as u64),
            );
        (lhs, rhs)
    }

    #[test]
    fn lowest_identities_match_general_machinery() {
        for eps in [Sign::Plus, Sign::Minus] {
            for alpha in 1..=2u32 {
                for beta in 0..=1u32 {
                    for nu in 0..=2u32 {
                        let p = params(eps, alpha, beta, nu);
                        let triples = generate_triples(2, &p);
                        for x in -2i64..=2 {
                            for n in 1..=5u64 {
                                let xb = big(x);
                                let (l1, r1) = first_identity_sides(&p, &xb, n);
                                assert_eq!(l1, r1);
                                assert_eq!(l1, lhs_identity(n, &triples[0], &xb));
                                assert_eq!(r1, rhs_identity(n, &triples[0], &xb));
                                let (l2, r2) = second_identity_sides(&p, &xb, n);
                                assert_eq!(l2, r2);
                                assert_eq!(l2, lhs_identity(n, &triples[1], &xb));
                                assert_eq!(r2, rhs_identity(n, &triples[1], &xb));
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn general_series_base_case() {
        let p = params(Sign::Plus, 1, 0, 0);
        let gs = build_general_series(vec![big(1)], &p);
        assert_eq!(gs.q_core, IntPoly2::constant(-1));
        assert_eq!(general_series_value(&gs, &big(1)), big(-1));
        // weight (n+1)x - 1 at x = 1 is n: direct five-term sum of n!*n
        let mut brute = BigInt::zero();
        for n in 0..5u64 {
            brute += factorial(n) * BigInt::from(n);
        }
        assert_eq!(brute, big(119));
        assert_eq!(general_series_partial(&gs, &big(1), 5), big(119));
    }

    #[test]
    fn general_series_two_weights() {
        let p = params(Sign::Plus, 1, 0, 0);
        let gs = build_general_series(vec![big(1), big(1)], &p);
        assert_eq!(
            gs.q_core,
            IntPoly2::from_terms([(0u32, 1u32, 2i64), (0, 0, -2)])
        );
        assert_eq!(gs.p_terms.len(), 2);
    }

    #[test]
    fn general_series_single_term_partial() {
        // One term with nu = 0, beta = 0: only the U values survive.
        let p = params(Sign::Plus, 1, 0, 0);
        let gs = build_general_series(vec![big(2), big(-3)], &p);
        for x in [-2i64, 1, 3] {
            let y = big(x);
            let expect = big(2) * gs.p_terms[0].1.eval_y(&y) + big(-3) * gs.p_terms[1].1.eval_y(&y);
            assert_eq!(general_series_partial(&gs, &big(x), 1), expect);
        }
    }

    #[test]
    fn general_series_linearity() {
        let p = params(Sign::Minus, 2, 1, 1);
        let weights = vec![big(3), big(-1), big(2)];
        let gs = build_general_series(weights.clone(), &p);
        let triples = generate_triples(3, &p);
        for x in -2i64..=2 {
            let xb = big(x);
            for n in 1..=6u64 {
                let by_parts: BigInt = weights
                    .iter()
                    .zip(&triples)
                    .map(|(b, t)| b * lhs_identity(n, t, &xb))
                    .sum();
                assert_eq!(general_series_partial(&gs, &xb, n), by_parts);
                // and the distance to Q decomposes through the boundary terms
                let q = general_series_value(&gs, &xb);
                let boundary: BigInt = weights
                    .iter()
                    .zip(&triples)
                    .map(|(b, t)| {
                        let y = int_pow(&xb, p.alpha as u64);
                        let v_val = t.v_core().eval_y(&y) * int_pow(&xb, p.beta as u64);
                        b * (rhs_identity(n, t, &xb) - v_val)
                    })
                    .sum();
                assert_eq!(general_series_partial(&gs, &xb, n) - q, boundary);
            }
        }
    }

    #[test]
    #[should_panic(expected = "at least one weight")]
    fn general_series_rejects_empty() {
        build_general_series(vec![], &params(Sign::Plus, 1, 0, 0));
    }

    #[test]
    #[should_panic(expected = "top weight")]
    fn general_series_rejects_zero_top() {
        build_general_series(vec![big(1), big(0)], &params(Sign::Plus, 1, 0, 0));
    }
}
