//! Shared oracles for the integration suites. Everything here is an
//! independent route: brute-force enumeration or textbook limits, never the
//! library's own fast paths.

#![allow(dead_code)]

/// Euler–Mascheroni constant from the defining limit H_N - ln N, with
/// Richardson extrapolation over N = 2^k against the asymptotic error
/// shape c1/N + c2/N² + c4/N⁴ + c6/N⁶. Good to better than 1e-12.
pub fn gamma_richardson() -> f64 {
    let ks: Vec<u32> = (10..=22).collect();
    let mut rows: Vec<f64> = ks
        .iter()
        .map(|&k| {
            let n = 1u64 << k;
            harmonic(n) - (n as f64).ln()
        })
        .collect();
    // successive eliminations of the 1/N^p terms, p = 1, 2, 4, 6
    for &p in &[1i32, 2, 4, 6] {
        let w = 2f64.powi(p);
        rows = rows.windows(2).map(|pair| (w * pair[1] - pair[0]) / (w - 1.0)).collect();
    }
    *rows.last().expect("nonempty extrapolation table")
}

/// Compensated harmonic number H_N.
fn harmonic(n: u64) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for k in 1..=n {
        let term = 1.0 / k as f64;
        let y = term - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    sum
}

/// Divisor count by trial division.
pub fn tau_brute(n: u64) -> u32 {
    let mut count = 0;
    let s = n.isqrt();
    for d in 1..=s {
        if n % d == 0 {
            count += 2;
        }
    }
    if s * s == n {
        count -= 1;
    }
    count
}

/// D(x) by per-n divisor counting. Only for small x.
pub fn divisor_summatory_brute(x: u64) -> u128 {
    (1..=x).map(|n| u128::from(tau_brute(n))).sum()
}

/// A tiny splitmix-style generator for reproducible test streams without
/// touching the library's RNG choices.
pub struct SplitMix(pub u64);

impl SplitMix {
    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// Uniform in [1, cap].
    pub fn below(&mut self, cap: u64) -> u64 {
        self.next_u64() % cap + 1
    }

    /// Uniform in [0, 1).
    pub fn unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }
}
