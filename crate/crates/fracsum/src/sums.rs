//! Exact evaluation of the fractional sums S_f(x) = Σ_{n<=x} f(⌊x/n⌋) and
//! T_f(x) = Σ_{n<=x} f(⌊x/n⌋) τ(n), by a direct sieve oracle and by the
//! sublinear block algorithm, plus the three-term diagnostic split of T_f.

use crate::arith::{checked_floor, tau_sieve, FunctionSpec};
use crate::divisor::{delta_rational, delta_with, divisor_summatory_u64};
use crate::error::{Error, Result};
use crate::hp::{DoubleDouble, TWO_GAMMA_MINUS_ONE};

/// S_f(x) over quotient blocks: Σ_blocks f(q)·(block length), in O(√x)
/// evaluations of f. Generic core; growth metadata is irrelevant here.
pub fn sf_exact_fn(eval: impl Fn(u64) -> f64, x: f64) -> Result<DoubleDouble> {
    let n_floor = checked_floor(x)?;
    let mut acc = DoubleDouble::ZERO;
    let mut n = 1u64;
    while n <= n_floor {
        let q = n_floor / n;
        let hi = n_floor / q;
        let count = hi - n + 1;
        acc += DoubleDouble::from_u64(count) * eval(q);
        n = hi + 1;
    }
    Ok(acc)
}

/// S_f(x) = Σ_{n<=x} f(⌊x/n⌋).
pub fn sf_exact(f: &FunctionSpec, x: f64) -> Result<DoubleDouble> {
    sf_exact_fn(|n| f.eval(n), x)
}

/// Oracle-grade T_f(x): walks every n <= x against a τ table. Prepared
/// variant for bulk verification against shared sieve and value tables;
/// `f_table` must cover at least min(⌊x⌋, f_table.len()-1) and `tau` all of ⌊x⌋.
pub fn tf_exact_sieve_prepared(
    f: &FunctionSpec,
    f_table: &[f64],
    tau: &[u32],
    x: f64,
) -> Result<DoubleDouble> {
    let n_floor = checked_floor(x)?;
    if (tau.len() as u64) < n_floor + 1 {
        return Err(Error::capacity(format!(
            "tau table covers {} entries but x needs {}",
            tau.len(),
            n_floor + 1
        )));
    }
    let table_max = f_table.len().saturating_sub(1) as u64;
    let mut acc = DoubleDouble::ZERO;
    for n in 1..=n_floor {
        let q = n_floor / n;
        let fq = if q <= table_max { f_table[q as usize] } else { f.eval(q) };
        acc += DoubleDouble::from(fq * f64::from(tau[n as usize]));
    }
    Ok(acc)
}

/// Oracle-grade T_f(x) = Σ_{n<=x} f(⌊x/n⌋) τ(n) by direct summation over a
/// freshly sieved τ table. O(x log x) sieve + O(x) walk; memory-capped.
pub fn tf_exact_sieve(f: &FunctionSpec, x: f64) -> Result<DoubleDouble> {
    let n_floor = checked_floor(x)?;
    let tau = tau_sieve(n_floor)?;
    let f_table = f.table(n_floor.min(1_000_000));
    tf_exact_sieve_prepared(f, &f_table, &tau, x)
}

/// Fast T_f(x): regroups by the value d = ⌊x/n⌋, so
/// T_f(x) = Σ_d f(d)·(D(⌊x/d⌋) - D(⌊x/(d+1)⌋)).
///
/// Walks the quotient blocks in ascending d (descending n); consecutive
/// blocks share a D endpoint, so each distinct argument gets exactly one
/// O(√·) hyperbola evaluation and the total cost is O(x^{3/4}).
pub fn tf_exact_fast(f: &FunctionSpec, x: f64) -> Result<DoubleDouble> {
    tf_exact_fast_fn(|n| f.eval(n), x)
}

pub fn tf_exact_fast_fn(eval: impl Fn(u64) -> f64, x: f64) -> Result<DoubleDouble> {
    let n_floor = checked_floor(x)?;
    let mut acc = DoubleDouble::ZERO;
    let mut hi = n_floor;
    let mut d_hi = divisor_summatory_u64(n_floor);
    while hi >= 1 {
        let q = n_floor / hi;
        let lo = n_floor / (q + 1) + 1;
        let d_lo = if lo > 1 { divisor_summatory_u64(lo - 1) } else { 0 };
        // τ-sum over the block n in [lo, hi]
        let block_tau = d_hi - d_lo;
        acc += DoubleDouble::from_u128(block_tau) * eval(q);
        hi = lo - 1;
        d_hi = d_lo;
    }
    Ok(acc)
}

/// The three-term split of T_f at cut parameter N.
///
/// The d-side cut is d_cut = ⌊x/N⌋ and the n-side cut is taken as
/// n_cut = ⌊x/(d_cut+1)⌋, which is the unique choice making the split
/// exact: blocks of constant ⌊x/n⌋ never straddle the boundary. (Cutting
/// literally at n = N double-counts the straddling block.)
#[derive(Clone, Copy, Debug)]
pub struct DecompositionReport {
    /// Requested cut parameter.
    pub n_param: f64,
    /// Effective d-side cut ⌊x/N⌋.
    pub d_cut: u64,
    /// Effective n-side cut ⌊x/(d_cut+1)⌋.
    pub n_cut: u64,
    pub t1: DoubleDouble,
    pub t21: DoubleDouble,
    pub t22: DoubleDouble,
    pub t_delta: DoubleDouble,
    /// t21 - t22 + t_delta.
    pub t2: DoubleDouble,
    /// T_f(x) by the independent fast evaluator; t1 + t2 must match it.
    pub total: DoubleDouble,
}

/// Splits T_f(x) = T1 + T21 - T22 + TΔ at cut N in [1, x).
pub fn tf_decomposition(f: &FunctionSpec, x: f64, n_param: f64) -> Result<DecompositionReport> {
    let n_floor = checked_floor(x)?;
    if !(n_param >= 1.0) || n_param >= x {
        return Err(Error::domain(format!(
            "cut parameter must lie in [1, x), got N = {n_param} for x = {x}"
        )));
    }
    let x_is_int = x.fract() == 0.0;
    let d_cut = if x_is_int && n_param.fract() == 0.0 {
        n_floor / n_param as u64
    } else {
        (x / n_param).floor() as u64
    };
    let n_cut = n_floor / (d_cut + 1);

    // T1 = Σ_{n <= n_cut} f(⌊x/n⌋) τ(n)
    let mut t1 = DoubleDouble::ZERO;
    if n_cut >= 1 {
        let tau = tau_sieve(n_cut)?;
        for n in 1..=n_cut {
            t1 += DoubleDouble::from(f.eval(n_floor / n) * f64::from(tau[n as usize]));
        }
    }

    // d-side components over d <= d_cut
    let x_dd = DoubleDouble::from(x);
    let log_factor = x_dd * (x_dd.ln() + TWO_GAMMA_MINUS_ONE);
    let mut sum_c1 = DoubleDouble::ZERO; // Σ f(d)/(d(d+1))
    let mut sum_c3 = DoubleDouble::ZERO; // Σ f(d)(log d/d - log(d+1)/(d+1))
    let mut t_delta = DoubleDouble::ZERO;
    let mut ln_d = DoubleDouble::ZERO; // ln 1
    let mut delta_hi = if x_is_int {
        delta_rational(n_floor, 1, None)?
    } else {
        delta_with(x, None)?
    };
    for d in 1..=d_cut {
        let fd = f.eval(d);
        let ln_d1 = DoubleDouble::from_u64(d + 1).ln();
        sum_c1 += DoubleDouble::from(fd) / DoubleDouble::from_u128(u128::from(d) * u128::from(d + 1));
        let g_diff = ln_d / DoubleDouble::from_u64(d) - ln_d1 / DoubleDouble::from_u64(d + 1);
        sum_c3 += g_diff * fd;
        let delta_lo = if x_is_int {
            delta_rational(n_floor, d + 1, None)?
        } else {
            delta_with(x / (d as f64 + 1.0), None)?
        };
        t_delta += (delta_hi - delta_lo) * fd;
        ln_d = ln_d1;
        delta_hi = delta_lo;
    }
    let t21 = log_factor * sum_c1;
    let t22 = x_dd * sum_c3;
    let t2 = t21 - t22 + t_delta;
    let total = tf_exact_fast(f, x)?;
    Ok(DecompositionReport { n_param, d_cut, n_cut, t1, t21, t22, t_delta, t2, total })
}
