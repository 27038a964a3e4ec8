//! The divisor summatory function D(x) = Σ_{n<=x} τ(n), its error term
//! Δ(x) = D(x) - x(log x + 2γ - 1), the sawtooth series form of Δ, and the
//! dyadic averaged-|Δ| sums with their power bounds.

use rayon::prelude::*;

use crate::arith::{checked_floor, tau_fill_segment};
use crate::error::{Error, Result};
use crate::hp::{hp_sum, DoubleDouble, TWO_GAMMA_MINUS_ONE};
use crate::tolerances;

/// D(x) for integer argument, by the hyperbola identity
/// D(n) = 2 Σ_{k<=⌊√n⌋} ⌊n/k⌋ - ⌊√n⌋², in O(√n) divisions.
pub fn divisor_summatory_u64(n: u64) -> u128 {
    if n == 0 {
        return 0;
    }
    let s = n.isqrt();
    let mut sum: u128 = 0;
    for k in 1..=s {
        sum += u128::from(n / k);
    }
    2 * sum - u128::from(s) * u128::from(s)
}

/// D(x) = Σ_{n<=x} τ(n) for real x >= 1. Exact; runtime O(√x).
pub fn divisor_summatory(x: f64) -> Result<u128> {
    Ok(divisor_summatory_u64(checked_floor(x)?))
}

/// Prefix sums of τ at the requested points (any order), computed by a
/// segmented sieve pass up to the largest point. Memory stays
/// segment-sized regardless of the range.
pub fn divisor_prefix_at_points(points: &[u64]) -> Result<Vec<u128>> {
    let &max = match points.iter().max() {
        Some(m) => m,
        None => return Ok(Vec::new()),
    };
    if max > tolerances::sieve_memory_cap() {
        return Err(Error::capacity(format!(
            "sieve range {max} exceeds the memory cap {}",
            tolerances::sieve_memory_cap()
        )));
    }
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by_key(|&i| points[i]);
    let mut out = vec![0u128; points.len()];
    let mut next = 0usize;
    // points equal to 0 resolve immediately
    while next < order.len() && points[order[next]] == 0 {
        next += 1;
    }
    let mut running: u128 = 0;
    let seg_len = 1usize << 22;
    let mut buf = vec![0u32; seg_len];
    let mut lo = 1u64;
    while lo <= max && next < order.len() {
        let len = seg_len.min((max - lo + 1) as usize);
        tau_fill_segment(lo, &mut buf[..len]);
        for (i, &t) in buf[..len].iter().enumerate() {
            running += u128::from(t);
            let n = lo + i as u64;
            while next < order.len() && points[order[next]] == n {
                out[order[next]] = running;
                next += 1;
            }
        }
        lo += len as u64;
    }
    Ok(out)
}

/// Table of D(n) for n <= limit, built by the segmented sieve. Backs bulk
/// Δ evaluations (the averaged sums probe millions of arguments below a
/// common ceiling, and a lookup beats an O(√n) hyperbola pass there).
pub struct DivisorTable {
    prefix: Vec<u64>,
}

impl DivisorTable {
    pub fn new(limit: u64) -> Result<Self> {
        if limit < 1 {
            return Err(Error::domain("DivisorTable requires limit >= 1".to_string()));
        }
        if limit > tolerances::sieve_memory_cap() {
            return Err(Error::capacity(format!(
                "DivisorTable limit {limit} exceeds the memory cap {}",
                tolerances::sieve_memory_cap()
            )));
        }
        let mut prefix = Vec::with_capacity(limit as usize + 1);
        prefix.push(0u64);
        let seg_len = 1usize << 22;
        let mut buf = vec![0u32; seg_len];
        let mut running = 0u64;
        let mut lo = 1u64;
        while lo <= limit {
            let len = seg_len.min((limit - lo + 1) as usize);
            tau_fill_segment(lo, &mut buf[..len]);
            for &t in &buf[..len] {
                running += u64::from(t);
                prefix.push(running);
            }
            lo += len as u64;
        }
        Ok(Self { prefix })
    }

    #[inline]
    pub fn limit(&self) -> u64 {
        (self.prefix.len() - 1) as u64
    }

    /// D(n); n must be <= limit.
    #[inline]
    pub fn d(&self, n: u64) -> u64 {
        self.prefix[n as usize]
    }
}

#[inline]
fn d_of(n: u64, table: Option<&DivisorTable>) -> u128 {
    match table {
        Some(t) if n <= t.limit() => u128::from(t.d(n)),
        _ => divisor_summatory_u64(n),
    }
}

fn delta_from_parts(d_value: u128, x: DoubleDouble) -> DoubleDouble {
    let main = x * (x.ln() + TWO_GAMMA_MINUS_ONE);
    DoubleDouble::from_u128(d_value) - main
}

/// Δ(x) = D(x) - x(log x + 2γ - 1) for real x >= 1, in double-double so the
/// cancellation against the ~x log x main term is harmless.
pub fn delta(x: f64) -> Result<DoubleDouble> {
    delta_with(x, None)
}

pub fn delta_with(x: f64, table: Option<&DivisorTable>) -> Result<DoubleDouble> {
    let n = checked_floor(x)?;
    Ok(delta_from_parts(d_of(n, table), DoubleDouble::from(x)))
}

/// Δ(num/den) with the floor taken by integer division, so arguments that
/// land exactly on integers are classified exactly.
pub fn delta_rational(num: u64, den: u64, table: Option<&DivisorTable>) -> Result<DoubleDouble> {
    if den == 0 || num < den {
        return Err(Error::domain(format!(
            "delta_rational requires num/den >= 1, got {num}/{den}"
        )));
    }
    let n = num / den;
    let x = DoubleDouble::from_u64(num) / DoubleDouble::from_u64(den);
    Ok(delta_from_parts(d_of(n, table), x))
}

/// The series form -2 Σ_{n<=√x} ψ(x/n). Its gap to Δ(x) is bounded, with
/// observed supremum below [`tolerances::PSI_FORM_RESIDUAL_MAX`].
///
/// ψ(x/n) is evaluated as (x - n⌊x/n⌋)/n - 1/2 with the floor taken in
/// integer arithmetic: the products n⌊x/n⌋ are exact in f64 below 2^53 and
/// the subtraction is exact by Sterbenz, so block-boundary arguments are
/// never misclassified.
pub fn delta_psi_form(x: f64) -> Result<f64> {
    let n_floor = checked_floor(x)?;
    let s = n_floor.isqrt();
    let mut sum = 0.0;
    for n in 1..=s {
        let q = n_floor / n;
        let rem = x - (q * n) as f64;
        sum += rem / (n as f64) - 0.5;
    }
    Ok(-2.0 * sum)
}

/// How an averaged-|Δ| sum forms its per-d argument.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum DeltaAverageKind {
    /// Arguments X (d/D)^alpha over d ~ D.
    Monomial { alpha: f64 },
    /// Arguments x/(d+shift) over d ~ D, shift in {0, 1}.
    Shifted { shift: u8 },
}

/// One averaged-|Δ| evaluation against its power bound.
#[derive(Clone, Copy, Debug)]
pub struct DeltaAverageReport {
    pub kind: DeltaAverageKind,
    /// X (monomial form) or x (shifted form).
    pub scale: f64,
    /// Dyadic parameter D; the sum runs over D < d <= 2D.
    pub d_range: u64,
    pub epsilon: f64,
    /// Σ_{d~D} |Δ(argument(d))|, summed in ascending d order.
    pub lhs: DoubleDouble,
    pub bound: f64,
    pub ratio: f64,
}

#[derive(Clone, Copy)]
enum ArgRule {
    Rational { num_factor: u64, den_fixed: Option<u64>, shift: u64 },
    Real { scale: f64, alpha: f64, d_base: f64 },
}

impl ArgRule {
    /// Argument for a given d, as an exact rational when possible.
    fn argument(self, d: u64) -> ArgValue {
        match self {
            ArgRule::Rational { num_factor, den_fixed, shift } => match den_fixed {
                // alpha = +1 monomial: X d / D
                Some(den) => ArgValue::Rational(num_factor * d, den),
                // alpha = -1 monomial (X D / d) and shifted (x / (d+δ))
                None => ArgValue::Rational(num_factor, d + shift),
            },
            ArgRule::Real { scale, alpha, d_base } => {
                ArgValue::Real(scale * (d as f64 / d_base).powf(alpha))
            }
        }
    }
}

enum ArgValue {
    Rational(u64, u64),
    Real(f64),
}

fn abs_delta_of(arg: ArgValue, table: Option<&DivisorTable>) -> Result<DoubleDouble> {
    let v = match arg {
        ArgValue::Rational(num, den) => delta_rational(num, den, table)?,
        ArgValue::Real(x) => delta_with(x, table)?,
    };
    Ok(v.abs())
}

/// Σ_{d~D} |Δ| with the per-d rule, parallelized over d and reduced in
/// ascending-d order so results are independent of thread count.
fn sum_abs_delta(
    d_range: u64,
    rule: ArgRule,
    table: Option<&DivisorTable>,
) -> Result<DoubleDouble> {
    let ds: Vec<u64> = (d_range + 1..=2 * d_range).collect();
    let terms: Result<Vec<DoubleDouble>> = if d_range >= 1024 {
        ds.par_iter()
            .map(|&d| abs_delta_of(rule.argument(d), table))
            .collect()
    } else {
        ds.iter()
            .map(|&d| abs_delta_of(rule.argument(d), table))
            .collect()
    };
    Ok(hp_sum(terms?))
}

fn is_exact_integer(x: f64) -> bool {
    x.fract() == 0.0 && x.abs() <= crate::arith::MAX_EXACT_F64
}

/// Σ_{d~D} |Δ(X d^α / D^α)| against (X^{3/8} D^{3/4} + X^{1/4} D)(XD)^ε.
///
/// For α = ±1 and integer X the arguments are formed as exact rationals;
/// other parameters go through f64 powers.
pub fn delta_average(
    x_scale: f64,
    d_range: u64,
    alpha: f64,
    epsilon: f64,
    table: Option<&DivisorTable>,
) -> Result<DeltaAverageReport> {
    if !(x_scale >= 1.0) {
        return Err(Error::domain(format!("X must be >= 1, got {x_scale}")));
    }
    if alpha == 0.0 {
        return Err(Error::domain("alpha must be nonzero".to_string()));
    }
    if d_range < 1 {
        return Err(Error::domain("D must be >= 1".to_string()));
    }
    // (d/D)^alpha >= 1 when alpha > 0, so only alpha < 0 can push an
    // argument below 1; the minimum sits at d = 2D.
    if alpha < 0.0 && x_scale * 2f64.powf(alpha) < 1.0 {
        return Err(Error::domain(format!(
            "arguments X(d/D)^alpha fall below 1 for X = {x_scale}, D = {d_range}, alpha = {alpha}"
        )));
    }
    let exact_rational = is_exact_integer(x_scale)
        && (x_scale as u64).checked_mul(2 * d_range).is_some();
    let rule = if alpha == -1.0 && exact_rational {
        ArgRule::Rational { num_factor: x_scale as u64 * d_range, den_fixed: None, shift: 0 }
    } else if alpha == 1.0 && exact_rational {
        ArgRule::Rational { num_factor: x_scale as u64, den_fixed: Some(d_range), shift: 0 }
    } else {
        ArgRule::Real { scale: x_scale, alpha, d_base: d_range as f64 }
    };
    let lhs = sum_abs_delta(d_range, rule, table)?;
    let d = d_range as f64;
    let bound = (x_scale.powf(0.375) * d.powf(0.75) + x_scale.powf(0.25) * d)
        * (x_scale * d).powf(epsilon);
    Ok(DeltaAverageReport {
        kind: DeltaAverageKind::Monomial { alpha },
        scale: x_scale,
        d_range,
        epsilon,
        lhs,
        bound,
        ratio: lhs.to_f64() / bound,
    })
}

/// Σ_{d~D} |Δ(x/(d+δ))| against (x^{3/8} D^{3/8} + x^{1/4} D^{3/4}) x^ε,
/// δ in {0, 1}.
pub fn delta_average_shifted(
    x: f64,
    d_range: u64,
    shift: u8,
    epsilon: f64,
    table: Option<&DivisorTable>,
) -> Result<DeltaAverageReport> {
    if shift > 1 {
        return Err(Error::domain(format!("shift must be 0 or 1, got {shift}")));
    }
    if !(x >= 1.0) || d_range < 1 {
        return Err(Error::domain(format!("need x >= 1 and D >= 1, got x = {x}, D = {d_range}")));
    }
    if (d_range as f64) > x {
        return Err(Error::domain(format!("need D <= x, got D = {d_range}, x = {x}")));
    }
    if x / ((2 * d_range + u64::from(shift)) as f64) < 1.0 {
        return Err(Error::domain(format!(
            "smallest argument x/(2D+δ) falls below 1 for x = {x}, D = {d_range}, δ = {shift}"
        )));
    }
    let lhs = if is_exact_integer(x) {
        let rule =
            ArgRule::Rational { num_factor: x as u64, den_fixed: None, shift: u64::from(shift) };
        sum_abs_delta(d_range, rule, table)?
    } else {
        let ds: Vec<u64> = (d_range + 1..=2 * d_range).collect();
        let terms: Result<Vec<DoubleDouble>> = ds
            .par_iter()
            .map(|&d| abs_delta_of(ArgValue::Real(x / (d + u64::from(shift)) as f64), table))
            .collect();
        hp_sum(terms?)
    };
    let d = d_range as f64;
    let bound = (x.powf(0.375) * d.powf(0.375) + x.powf(0.25) * d.powf(0.75)) * x.powf(epsilon);
    Ok(DeltaAverageReport {
        kind: DeltaAverageKind::Shifted { shift },
        scale: x,
        d_range,
        epsilon,
        lhs,
        bound,
        ratio: lhs.to_f64() / bound,
    })
}
