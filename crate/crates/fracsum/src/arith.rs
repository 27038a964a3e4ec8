//! Shared arithmetic substrate: the divisor-count sieve, quotient-block
//! enumeration, and the arithmetic-function descriptors everything else
//! consumes.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::hp::DoubleDouble;
use crate::tolerances;

/// Largest f64 that still has exact integer semantics.
pub(crate) const MAX_EXACT_F64: f64 = 9_007_199_254_740_992.0; // 2^53

/// Closed-form values of the two constant series, available for functions
/// where the series telescope exactly.
#[derive(Clone, Copy, Debug)]
pub struct ClosedConstants {
    pub c1: DoubleDouble,
    pub c3: DoubleDouble,
}

type EvalFn = Arc<dyn Fn(u64) -> f64 + Send + Sync>;

/// A named arithmetic function f with declared growth |f(n)| <= K n^alpha (log(n+2))^theta.
///
/// `alpha` must lie strictly inside [0, 1); the constant series driving the
/// main term diverge at alpha = 1.
#[derive(Clone)]
pub struct FunctionSpec {
    name: String,
    alpha: f64,
    log_power: f64,
    growth_k: f64,
    eval: EvalFn,
    closed_constants: Option<ClosedConstants>,
}

impl fmt::Debug for FunctionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FunctionSpec")
            .field("name", &self.name)
            .field("alpha", &self.alpha)
            .field("log_power", &self.log_power)
            .field("growth_k", &self.growth_k)
            .finish()
    }
}

impl FunctionSpec {
    pub fn new(
        name: impl Into<String>,
        alpha: f64,
        log_power: f64,
        growth_k: f64,
        eval: impl Fn(u64) -> f64 + Send + Sync + 'static,
    ) -> Result<Self> {
        if !(0.0..1.0).contains(&alpha) {
            return Err(Error::domain(format!(
                "growth exponent alpha must lie in [0, 1), got {alpha}"
            )));
        }
        if !(log_power >= 0.0) {
            return Err(Error::domain(format!(
                "log_power must be nonnegative, got {log_power}"
            )));
        }
        if !(growth_k > 0.0) {
            return Err(Error::domain(format!(
                "growth constant must be positive, got {growth_k}"
            )));
        }
        Ok(Self {
            name: name.into(),
            alpha,
            log_power,
            growth_k,
            eval: Arc::new(eval),
            closed_constants: None,
        })
    }

    fn with_closed_constants(mut self, c: ClosedConstants) -> Self {
        self.closed_constants = Some(c);
        self
    }

    /// f ≡ 1. Both constant series telescope: C1 = 1 and C3 = 0 exactly.
    pub fn one() -> Self {
        Self::new("one", 0.0, 0.0, 1.0, |_| 1.0)
            .expect("static parameters")
            .with_closed_constants(ClosedConstants {
                c1: DoubleDouble::ONE,
                c3: DoubleDouble::ZERO,
            })
    }

    /// f(n) = ⌊√n⌋, computed by exact integer square root.
    pub fn sqrt_floor() -> Self {
        Self::new("sqrt_floor", 0.5, 0.0, 1.0, |n| n.isqrt() as f64).expect("static parameters")
    }

    /// f(n) = ⌊n^alpha⌋ for a caller-chosen alpha in (0, 1).
    pub fn pow_floor(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::domain(format!(
                "pow_floor needs alpha in (0, 1), got {alpha}"
            )));
        }
        Self::new(format!("pow_floor_{alpha}"), alpha, 0.0, 1.0, move |n| {
            (n as f64).powf(alpha).floor()
        })
    }

    /// f(n) = ⌊log n⌋ + 1: zero power growth with a single log factor.
    pub fn log_floor() -> Self {
        Self::new("log_floor", 0.0, 1.0, 1.5, |n| (n as f64).ln().floor() + 1.0)
            .expect("static parameters")
    }

    /// The built-in library used by verification sweeps: spans alpha = 0,
    /// 1/2, 3/4 and a log-only growth.
    pub fn builtins() -> Vec<Self> {
        vec![
            Self::one(),
            Self::sqrt_floor(),
            Self::pow_floor(0.75).expect("static parameters"),
            Self::log_floor(),
        ]
    }

    /// Looks up a function by CLI name. `pow_floor` requires an alpha.
    pub fn by_name(name: &str, alpha: Option<f64>) -> Result<Self> {
        match name {
            "one" => Ok(Self::one()),
            "sqrt_floor" | "sqrt" => Ok(Self::sqrt_floor()),
            "log_floor" | "log" => Ok(Self::log_floor()),
            "pow_floor" | "pow" => {
                let a = alpha.ok_or_else(|| {
                    Error::domain("pow_floor requires --alpha in (0, 1)".to_string())
                })?;
                Self::pow_floor(a)
            }
            other => Err(Error::domain(format!(
                "unknown function '{other}' (expected one, sqrt_floor, pow_floor, log_floor)"
            ))),
        }
    }

    #[inline]
    pub fn eval(&self, n: u64) -> f64 {
        debug_assert!(n >= 1, "arithmetic functions are evaluated at n >= 1");
        (self.eval)(n)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn log_power(&self) -> f64 {
        self.log_power
    }

    pub fn growth_k(&self) -> f64 {
        self.growth_k
    }

    pub fn closed_constants(&self) -> Option<ClosedConstants> {
        self.closed_constants
    }

    /// Table of f(1..=limit), index n; entry 0 is unused. Hot loops that
    /// revisit small arguments should evaluate through this.
    pub fn table(&self, limit: u64) -> Vec<f64> {
        let mut t = Vec::with_capacity(limit as usize + 1);
        t.push(0.0);
        for n in 1..=limit {
            t.push(self.eval(n));
        }
        t
    }

    /// Scans n <= n_max for violations of |f(n)| <= K n^alpha (log(n+2))^theta.
    /// Returns the first offender, if any.
    pub fn first_growth_violation(&self, n_max: u64) -> Option<u64> {
        (1..=n_max).find(|&n| {
            let bound =
                self.growth_k * (n as f64).powf(self.alpha) * ((n as f64) + 2.0).ln().powf(self.log_power);
            self.eval(n).abs() > bound
        })
    }
}

/// A maximal range [n_lo, n_hi] on which ⌊x/n⌋ takes the constant value q.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QuotientBlock {
    pub q: u64,
    pub n_lo: u64,
    pub n_hi: u64,
}

impl QuotientBlock {
    #[inline]
    pub fn len(&self) -> u64 {
        self.n_hi - self.n_lo + 1
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        false // blocks are nonempty by construction
    }
}

/// Floor of a nonnegative real accepted as `f64`, with the exactness guard
/// the block decomposition depends on.
pub(crate) fn checked_floor(x: f64) -> Result<u64> {
    if !x.is_finite() || x < 1.0 {
        return Err(Error::domain(format!("argument must satisfy x >= 1, got {x}")));
    }
    if x > MAX_EXACT_F64 {
        return Err(Error::domain(format!(
            "argument {x} exceeds the exact-integer range of f64 (2^53)"
        )));
    }
    Ok(x.floor() as u64)
}

/// Iterator over the quotient blocks of ⌊x/n⌋ for n = 1..⌊x⌋, ascending in n
/// (so q strictly decreases). There are at most 2√x + 1 blocks.
///
/// Since ⌊x/n⌋ = ⌊⌊x⌋/n⌋ for integer n >= 1, enumeration is pure integer
/// arithmetic on ⌊x⌋.
#[derive(Clone, Debug)]
pub struct QuotientBlocks {
    n_floor: u64,
    next_n: u64,
}

impl Iterator for QuotientBlocks {
    type Item = QuotientBlock;

    #[inline]
    fn next(&mut self) -> Option<QuotientBlock> {
        let n = self.next_n;
        if n > self.n_floor {
            return None;
        }
        let q = self.n_floor / n;
        let n_hi = self.n_floor / q;
        self.next_n = n_hi + 1;
        Some(QuotientBlock { q, n_lo: n, n_hi })
    }
}

/// Enumerates the quotient blocks of x. Errors for x < 1.
pub fn quotient_blocks(x: f64) -> Result<QuotientBlocks> {
    let n_floor = checked_floor(x)?;
    Ok(QuotientBlocks { n_floor, next_n: 1 })
}

/// Collected form of [`quotient_blocks`], for callers that want the list.
pub fn quotient_blocks_vec(x: f64) -> Result<Vec<QuotientBlock>> {
    Ok(quotient_blocks(x)?.collect())
}

/// Fills `buf[i] = τ(lo + i)` for a segment starting at `lo >= 1`.
///
/// Counts divisor pairs: each divisor d with d² < n contributes 2 (d and
/// n/d), and perfect squares get the middle divisor once.
pub(crate) fn tau_fill_segment(lo: u64, buf: &mut [u32]) {
    debug_assert!(lo >= 1);
    buf.fill(0);
    let len = buf.len() as u64;
    let hi = lo + len; // exclusive
    let d_max = (hi - 1).isqrt();
    for d in 1..=d_max {
        // multiples m of d with m > d^2 and m in [lo, hi)
        let start = lo.div_ceil(d).max(d + 1) * d;
        let mut m = start;
        while m < hi {
            buf[(m - lo) as usize] += 2;
            m += d;
        }
        let sq = d * d;
        if sq >= lo && sq < hi {
            buf[(sq - lo) as usize] += 1;
        }
    }
}

const TAU_SEGMENT_LEN: usize = 1 << 22;

/// τ(n) for 1 <= n <= limit. Segmented internally so the sieve working set
/// stays cache-sized; the output array is the only large allocation.
pub fn tau_sieve(limit: u64) -> Result<Vec<u32>> {
    if limit < 1 {
        return Err(Error::domain("tau_sieve requires limit >= 1".to_string()));
    }
    if limit > tolerances::sieve_memory_cap() {
        return Err(Error::capacity(format!(
            "tau_sieve limit {limit} exceeds the memory cap {} (override with FRACSUM_MEMORY_CAP)",
            tolerances::sieve_memory_cap()
        )));
    }
    let mut out = vec![0u32; limit as usize + 1];
    let mut lo = 1u64;
    while lo <= limit {
        let seg = TAU_SEGMENT_LEN.min((limit - lo + 1) as usize);
        tau_fill_segment(lo, &mut out[lo as usize..lo as usize + seg]);
        lo += seg as u64;
    }
    Ok(out)
}
