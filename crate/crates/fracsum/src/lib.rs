//! Exact and asymptotic evaluation of divisor-weighted fractional sums.
//!
//! The library evaluates T_f(x) = Σ_{n<=x} f(⌊x/n⌋) τ(n) exactly by two
//! independent routes (a direct sieve walk and a sublinear quotient-block
//! algorithm), computes the asymptotic main term C1(f)·x·log x + C2(f)·x
//! with rigorous truncation tails, and ships verification harnesses for the
//! supporting estimates: the sawtooth series form of the divisor error term
//! Δ(x), its tapered Fourier truncation with a Fejér error majorant, dyadic
//! averages of |Δ|, and triple exponential sums under the starred norm.
//!
//! Entry points by module:
//! - [`arith`]: divisor-count sieve, quotient blocks, function descriptors.
//! - [`divisor`]: D(x), Δ(x), the ψ-series form, averaged |Δ| reports.
//! - [`psi`]: ψ, the tapered truncation, and its error bound.
//! - [`expsum`]: starred norms and triple exponential sum sweeps.
//! - [`sums`]: S_f and T_f evaluators plus the three-term diagnostic split.
//! - [`asymptotics`]: constants with tails, main/error terms, exponent fits.
//! - [`cli`]: the command-line front end (grid scans, CSV/JSON emission).
//!
//! Numerical backbone: [`hp::DoubleDouble`], a two-word compensated real
//! giving ~32 significant digits, needed because main terms near 1e16
//! coexist with error terms near 1e4.

pub mod arith;
pub mod asymptotics;
pub mod cli;
pub mod divisor;
pub mod error;
pub mod expsum;
pub mod hp;
pub mod psi;
pub mod sums;
pub mod tolerances;

pub use arith::{quotient_blocks, quotient_blocks_vec, tau_sieve, FunctionSpec, QuotientBlock};
pub use asymptotics::{
    c1, c2, c3, constants, error_term, fit_exponent, main_term, predicted_exponents, Constants,
    ExponentSet, FitResult, TailBoundedValue,
};
pub use divisor::{
    delta, delta_average, delta_average_shifted, delta_psi_form, delta_rational,
    divisor_summatory, DeltaAverageReport, DivisorTable,
};
pub use error::{Error, Result};
pub use expsum::{rs_bound, rs_ratio_sweep, rs_sum, star_norm, ExpSumParams, StarNorm};
pub use hp::{hp_sum, DoubleDouble, EULER_GAMMA, TWO_GAMMA_MINUS_ONE};
pub use psi::{psi, psi_truncated, vaaler_error_bound, vaaler_phi, VaalerSeries};
pub use sums::{sf_exact, tf_decomposition, tf_exact_fast, tf_exact_sieve, DecompositionReport};
