//! Exact arithmetic for factorial series with p-adic invariant sums.
//!
//! The series treated here have the shape
//!
//! ```text
//! sum_{n>=0} eps^n (n+nu)! P(n; x) x^{alpha*n + beta},    eps = +1 or -1,
//! ```
//!
//! with an integer-coefficient polynomial weight `P`. Over the reals they
//! diverge wildly; p-adically they converge for every integer `x` and every
//! prime, because the p-adic size of `(n+nu)!` collapses as `n` grows. For
//! the right choices of `P` the sum is one integer, the *same* integer in
//! every p-adic field.
//!
//! This crate generates the polynomial families behind those choices,
//! certifies the finite-sum identities they satisfy as exact integer
//! equalities over parameter grids, traces the p-adic convergence of the
//! infinite series, and reproduces the integer sequences the families
//! contain, including the shifted Bell numbers and two left-factorial
//! (Kurepa hypothesis) scans.
//!
//! Everything is exact: coefficients and sums are arbitrary-precision
//! integers, valuations come from the digit-sum formula, and no check in
//! the crate compares floating-point numbers.
//!
//! ```
//! use num_bigint::BigInt;
//! use padic_series::{generate_triples, lhs_identity, rhs_identity};
//! use padic_series::{SeriesParams, Sign};
//!
//! // sum_{n=0}^{N-1} n! * n telescopes to N! - 1: certify it exactly.
//! let params = SeriesParams::new(Sign::Plus, 1, 0, 0);
//! let triple = &generate_triples(1, &params)[0];
//! let x = BigInt::from(1);
//! for n in 1..=20u64 {
//!     assert_eq!(lhs_identity(n, triple, &x), rhs_identity(n, triple, &x));
//! }
//! ```

pub mod families;
pub mod padic;
pub mod poly;
pub mod sequences;
pub mod summation;

pub use families::{
    derive_u_from_a, derive_v_from_a, gen_a, gen_u, gen_v, generate_triples, PolyTriple,
    SeriesParams, Sign, DEFAULT_K_CAP,
};
pub use padic::{
    digit_sum, factorial_valuation, is_prime_u64, padic_valuation, primes_up_to,
    term_valuation_lower_bound, PadicInt, Valuation, ValuationReport, DEFAULT_PRECISION,
};
pub use poly::{binomial, factorial, IntPoly2, PolyTerm};
pub use sequences::{
    bell, bell_coincidence_first_mismatch, kurepa_gcd_scan, kurepa_padic_digit, seq_a_at_point,
    seq_u, seq_u_bar, seq_v, seq_v_bar, KurepaGcdRow, Parity, SequenceTable,
};
pub use summation::{
    build_general_series, certify_identity, certify_point, convergence_trace,
    general_series_partial, general_series_value, int_pow, lhs_identity, partial_sum_s0,
    partial_sum_sk, rhs_identity, truncated_trace, ConvergenceTrace, GeneralSeries, GridPoint,
    IdentityCertificate, IdentityGrid, TraceRow,
};
