//! Frozen thresholds and capacity limits.
//!
//! Every empirical ceiling used by the verification suites lives here with
//! its rationale, so no check carries an ad-hoc magic number. Capacity
//! limits accept environment overrides; thresholds do not.

use std::sync::OnceLock;

/// Ceiling for the residual |Δ(x) - (-2 Σ_{n≤√x} ψ(x/n))|.
///
/// The identity guarantees only a bounded residual with no explicit
/// constant. Scans to 1e8 observe a supremum below 2; 3 leaves margin
/// without letting a real defect slip through.
pub const PSI_FORM_RESIDUAL_MAX: f64 = 3.0;

/// Ceiling for S/bound in the triple exponential sum sweep.
///
/// The bound is a ≪ statement with an unspecified implied constant, so the
/// suite asserts boundedness rather than a sharp value. Observed sweep
/// maxima sit well under 10; 100 is a policy ceiling, not a sharp claim.
pub const RS_RATIO_MAX: f64 = 100.0;

/// Ceiling for lhs/bound in the averaged-|Δ| checks, same reasoning as
/// [`RS_RATIO_MAX`].
pub const DELTA_AVERAGE_RATIO_MAX: f64 = 100.0;

/// Default ε applied to averaged-|Δ| bounds. Small enough that the
/// (XD)^ε inflation stays interpretable.
pub const DELTA_AVERAGE_EPSILON: f64 = 0.05;

/// Default ε for the exponential-sum sweep bound.
pub const RS_EPSILON: f64 = 0.1;

/// Rounding slack added to the sawtooth approximation inequality, which is
/// exact in real arithmetic; the slack covers f64 evaluation only.
pub const VAALER_ROUNDING_SLACK: f64 = 1e-12;

/// Fitted slopes are compared against reference exponents plus this margin,
/// absorbing finite-range fit noise.
pub const FIT_SLOPE_MARGIN: f64 = 0.08;

/// Samples with |E| below this floor are dropped before log-log fitting;
/// they carry no scale information and their logs explode.
pub const FIT_SAMPLE_FLOOR: f64 = 1e-6;

/// Warn when the truncated-constant uncertainty in an error term exceeds
/// this fraction of the term itself.
pub const CONSTANT_UNCERTAINTY_FRACTION: f64 = 0.01;

/// Relative agreement required between independent high-precision routes
/// to the same quantity (decomposition identity, oracle equivalence).
pub const HP_RELATIVE_TOL: f64 = 1e-20;

const DEFAULT_SIEVE_CAP: u64 = 100_000_000;
const DEFAULT_STAR_EXACT_CUTOFF: usize = 4096;

fn env_u64(name: &str) -> Option<u64> {
    std::env::var(name).ok()?.trim().parse().ok()
}

/// Largest `limit` accepted by the divisor sieve and summatory table.
/// Override with `FRACSUM_MEMORY_CAP` (number of entries).
pub fn sieve_memory_cap() -> u64 {
    static CAP: OnceLock<u64> = OnceLock::new();
    *CAP.get_or_init(|| env_u64("FRACSUM_MEMORY_CAP").unwrap_or(DEFAULT_SIEVE_CAP))
}

/// Sequence length up to which the starred norm is computed exactly in
/// O(len^2); longer inputs fall back to the flagged prefix-sum proxy.
/// Override with `FRACSUM_STAR_CUTOFF`.
pub fn star_exact_cutoff() -> usize {
    static CUTOFF: OnceLock<usize> = OnceLock::new();
    *CUTOFF.get_or_init(|| {
        env_u64("FRACSUM_STAR_CUTOFF")
            .map(|v| v as usize)
            .unwrap_or(DEFAULT_STAR_EXACT_CUTOFF)
    })
}

/// Work cap (H·N·M) for a single exponential-sum evaluation.
pub const RS_WORK_CAP: u128 = 1 << 34;
