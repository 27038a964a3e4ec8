//! Triple exponential sums S = Σ_h Σ_n |Σ_m e(X m^a h^b n^c / (M^a H^b N^c))|*
//! with the starred norm (maximal contiguous partial sum), and the
//! (HNM)^{1+ε} {(X/(HNM²))^{1/4} + M^{-1/2} + X^{-1}} budget they are
//! checked against.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::psi::{cos_2pi, sin_2pi};
use crate::tolerances;

/// Parameters of one triple sum. The phase exponents must satisfy
/// a(a-1)·b·c ≠ 0.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExpSumParams {
    pub h: u64,
    pub n: u64,
    pub m: u64,
    pub x: f64,
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl ExpSumParams {
    pub fn new(h: u64, n: u64, m: u64, x: f64, a: f64, b: f64, c: f64) -> Result<Self> {
        if h < 1 || n < 1 || m < 1 {
            return Err(Error::domain("H, N, M must be positive".to_string()));
        }
        if !(x >= 1.0) {
            return Err(Error::domain(format!("X must satisfy X >= 1, got {x}")));
        }
        if a * (a - 1.0) * b * c == 0.0 {
            return Err(Error::domain(format!(
                "exponents must satisfy a(a-1)bc != 0, got a={a}, b={b}, c={c}"
            )));
        }
        Ok(Self { h, n, m, x, a, b, c })
    }

    fn work(&self) -> u128 {
        u128::from(self.h) * u128::from(self.n) * u128::from(self.m)
    }
}

/// Result of a starred-norm evaluation. `exact` is false when the sequence
/// exceeded the exact cutoff and the 2·max|prefix| upper proxy was used.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StarNorm {
    pub value: f64,
    pub exact: bool,
}

/// max_{1<=j<=k<=len} |z_j + ... + z_k|, exact in O(len²) below the cutoff.
pub fn star_norm(z: &[Complex64]) -> StarNorm {
    star_norm_with_cutoff(z, tolerances::star_exact_cutoff())
}

pub(crate) fn star_norm_with_cutoff(z: &[Complex64], cutoff: usize) -> StarNorm {
    // prefix[k] = z_0 + ... + z_{k-1}; every interval sum is a prefix difference
    let mut prefix = Vec::with_capacity(z.len() + 1);
    let mut acc = Complex64::new(0.0, 0.0);
    prefix.push(acc);
    for &v in z {
        acc += v;
        prefix.push(acc);
    }
    if z.len() <= cutoff {
        let mut best = 0.0f64;
        for j in 0..prefix.len() {
            for k in j + 1..prefix.len() {
                best = best.max((prefix[k] - prefix[j]).norm_sqr());
            }
        }
        StarNorm { value: best.sqrt(), exact: true }
    } else {
        let max_prefix = prefix.iter().map(|p| p.norm()).fold(0.0f64, f64::max);
        StarNorm { value: 2.0 * max_prefix, exact: false }
    }
}

/// e(t) = exp(2πit), with the argument reduced mod 1 before the trig calls.
#[inline]
fn e_unit(t: f64) -> Complex64 {
    Complex64::new(cos_2pi(t), sin_2pi(t))
}

/// Outcome of one triple-sum evaluation.
#[derive(Clone, Copy, Debug)]
pub struct RsSum {
    pub value: f64,
    /// True when every inner starred norm was computed exactly.
    pub exact_norm: bool,
}

/// Evaluates S for the given parameters. Parallel over (h, n); the outer
/// sum is reduced in fixed (h, n) order.
pub fn rs_sum(p: &ExpSumParams) -> Result<RsSum> {
    if p.work() > tolerances::RS_WORK_CAP {
        return Err(Error::capacity(format!(
            "H*N*M = {} exceeds the work cap {}",
            p.work(),
            tolerances::RS_WORK_CAP
        )));
    }
    let m_base = p.m as f64;
    let h_base = p.h as f64;
    let n_base = p.n as f64;
    let m_pow: Vec<f64> = (p.m + 1..=2 * p.m).map(|m| (m as f64 / m_base).powf(p.a)).collect();
    let h_pow: Vec<f64> = (p.h + 1..=2 * p.h).map(|h| (h as f64 / h_base).powf(p.b)).collect();
    let n_pow: Vec<f64> = (p.n + 1..=2 * p.n).map(|n| (n as f64 / n_base).powf(p.c)).collect();

    let pairs: Vec<(usize, usize)> = (0..h_pow.len())
        .flat_map(|ih| (0..n_pow.len()).map(move |in_| (ih, in_)))
        .collect();
    let norms: Vec<StarNorm> = pairs
        .par_iter()
        .map(|&(ih, in_)| {
            let scale = p.x * h_pow[ih] * n_pow[in_];
            let z: Vec<Complex64> = m_pow.iter().map(|&w| e_unit(scale * w)).collect();
            star_norm(&z)
        })
        .collect();

    let mut value = 0.0;
    let mut exact_norm = true;
    for s in &norms {
        value += s.value;
        exact_norm &= s.exact;
    }
    Ok(RsSum { value, exact_norm })
}

/// The comparison budget (HNM)^{1+ε} {(X/(HNM²))^{1/4} + M^{-1/2} + X^{-1}}.
pub fn rs_bound(p: &ExpSumParams, epsilon: f64) -> Result<f64> {
    if !(epsilon > 0.0) {
        return Err(Error::domain(format!("epsilon must be positive, got {epsilon}")));
    }
    let (h, n, m) = (p.h as f64, p.n as f64, p.m as f64);
    let hnm = h * n * m;
    let brace = (p.x / (h * n * m * m)).powf(0.25) + m.powf(-0.5) + 1.0 / p.x;
    Ok(hnm.powf(1.0 + epsilon) * brace)
}

/// One sweep row: parameters, S, its budget, and their ratio.
#[derive(Clone, Copy, Debug)]
pub struct RsRow {
    pub params: ExpSumParams,
    pub epsilon: f64,
    pub s: f64,
    pub bound: f64,
    pub ratio: f64,
    pub exact_norm: bool,
}

/// Evaluates every grid point and returns the rows in grid order.
pub fn rs_ratio_sweep(grid: &[ExpSumParams], epsilon: f64) -> Result<Vec<RsRow>> {
    grid.iter()
        .map(|p| {
            let s = rs_sum(p)?;
            let bound = rs_bound(p, epsilon)?;
            Ok(RsRow {
                params: *p,
                epsilon,
                s: s.value,
                bound,
                ratio: s.value / bound,
                exact_norm: s.exact_norm,
            })
        })
        .collect()
}

/// The dyadic default sweep: H, N, M over powers of two in [4, 64],
/// X in {1, 10, 100, 1000}, exponents (-1, 1, 1).
pub fn default_sweep_grid() -> Vec<ExpSumParams> {
    let mut grid = Vec::new();
    for &h in &[4u64, 8, 16, 32, 64] {
        for &n in &[4u64, 8, 16, 32, 64] {
            for &m in &[4u64, 8, 16, 32, 64] {
                for &x in &[1.0, 10.0, 100.0, 1000.0] {
                    grid.push(
                        ExpSumParams::new(h, n, m, x, -1.0, 1.0, 1.0)
                            .expect("static parameters are valid"),
                    );
                }
            }
        }
    }
    grid
}
