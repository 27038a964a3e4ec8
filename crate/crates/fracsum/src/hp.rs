//! Double-word ("double-double") floating point: an unevaluated sum of two
//! `f64` words giving roughly 32 significant decimal digits.
//!
//! Main terms like `x (log x + 2γ - 1)` reach ~3.5e16 at x = 1e15 while the
//! error term Δ(x) sits near 1e4, so plain `f64` subtraction would wipe out
//! the quantity under study. All accumulations that feed error terms go
//! through [`DoubleDouble`].

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

/// Two-word compensated real. Invariant: `hi = fl(hi + lo)`,
/// i.e. the words do not overlap.
#[derive(Copy, Clone, Debug, Default, PartialEq)]
pub struct DoubleDouble {
    hi: f64,
    lo: f64,
}

/// Euler–Mascheroni constant γ, good to ~33 digits.
/// Decimal reference: 0.57721566490153286060651209008240243104216.
pub const EULER_GAMMA: DoubleDouble = DoubleDouble {
    hi: 0.5772156649015329,
    lo: -4.942915152430645e-18,
};

/// 2γ - 1, the coefficient of x in the Dirichlet main term.
pub const TWO_GAMMA_MINUS_ONE: DoubleDouble = DoubleDouble {
    hi: 0.15443132980306573,
    lo: -9.88583030486129e-18,
};

/// ln 2 to double-double precision.
pub const LN_2: DoubleDouble = DoubleDouble {
    hi: 0.6931471805599453,
    lo: 2.3190468138462996e-17,
};

/// π to double-double precision.
pub const PI: DoubleDouble = DoubleDouble {
    hi: 3.141592653589793,
    lo: 1.2246467991473532e-16,
};

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

/// Requires |a| >= |b|.
#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let err = b - (s - a);
    (s, err)
}

/// Dekker split into two 26-bit halves.
#[inline]
fn split(a: f64) -> (f64, f64) {
    const SPLITTER: f64 = 134217729.0; // 2^27 + 1
    let t = SPLITTER * a;
    let hi = t - (t - a);
    let lo = a - hi;
    (hi, lo)
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let (ahi, alo) = split(a);
    let (bhi, blo) = split(b);
    let err = ((ahi * bhi - p) + ahi * blo + alo * bhi) + alo * blo;
    (p, err)
}

impl DoubleDouble {
    pub const ZERO: Self = Self { hi: 0.0, lo: 0.0 };
    pub const ONE: Self = Self { hi: 1.0, lo: 0.0 };

    /// Builds from pre-normalized words. Caller guarantees `hi = fl(hi + lo)`.
    #[inline]
    pub const fn from_parts(hi: f64, lo: f64) -> Self {
        Self { hi, lo }
    }

    #[inline]
    pub fn new(hi: f64, lo: f64) -> Self {
        let (s, e) = two_sum(hi, lo);
        Self { hi: s, lo: e }
    }

    #[inline]
    pub fn hi(self) -> f64 {
        self.hi
    }

    #[inline]
    pub fn lo(self) -> f64 {
        self.lo
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi
    }

    #[inline]
    pub fn from_u64(n: u64) -> Self {
        let hi = n as f64;
        // Residual fits in 11 bits, so the low word is exact.
        let lo = (n as i128 - hi as i128) as f64;
        let (s, e) = quick_two_sum(hi, lo);
        Self { hi: s, lo: e }
    }

    #[inline]
    pub fn from_i64(n: i64) -> Self {
        if n < 0 {
            -Self::from_u64(n.unsigned_abs())
        } else {
            Self::from_u64(n as u64)
        }
    }

    /// Exact for |n| < 2^106; nearest representable value beyond that.
    pub fn from_u128(n: u128) -> Self {
        const SHIFT: f64 = 18446744073709551616.0; // 2^64, exact scale
        let high = (n >> 64) as u64;
        let low = n as u64;
        Self::from_u64(high) * SHIFT + Self::from_u64(low)
    }

    pub fn from_i128(n: i128) -> Self {
        if n < 0 {
            -Self::from_u128(n.unsigned_abs())
        } else {
            Self::from_u128(n as u128)
        }
    }

    #[inline]
    pub fn abs(self) -> Self {
        if self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0) {
            -self
        } else {
            self
        }
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.hi.is_finite() && self.lo.is_finite()
    }

    /// Rounds to the nearest i128. Intended for values well inside i128 range.
    pub fn to_i128_nearest(self) -> i128 {
        let first = self.hi.round();
        let i1 = first as i128;
        let rem = self - Self::from_i128(i1);
        let i2 = rem.hi.round() as i128;
        let rem2 = rem - Self::from_i128(i2);
        let i3 = rem2.hi.round() as i128;
        i1 + i2 + i3
    }

    /// Natural exponential to ~31 digits, via k·ln2 reduction and a Taylor
    /// tail on |r| <= ln2/2.
    pub fn exp(self) -> Self {
        if self.hi == 0.0 && self.lo == 0.0 {
            return Self::ONE;
        }
        if self.hi > 709.0 {
            return Self::from_parts(f64::INFINITY, 0.0);
        }
        if self.hi < -745.0 {
            return Self::ZERO;
        }
        let k = (self.hi / LN_2.hi).round();
        let r = self - LN_2 * k;
        // sum_{i>=0} r^i / i!; 28 terms puts the truncation below 1e-35
        let inv_fact = inv_factorials();
        let mut power = Self::ONE;
        let mut sum = Self::ONE;
        for inv in &inv_fact[1..] {
            power = power * r;
            sum = sum + power * *inv;
        }
        let scale = f64::exp2(k);
        Self::from_parts(sum.hi * scale, sum.lo * scale)
    }

    /// Natural logarithm to ~31 digits: f64 seed plus one Newton step
    /// `y <- y + x e^{-y} - 1`, which squares the seed's accuracy.
    pub fn ln(self) -> Self {
        assert!(
            self.hi > 0.0,
            "DoubleDouble::ln requires a positive argument, got {}",
            self.hi
        );
        let seed = Self::from(self.hi.ln());
        let correction = self * (-seed).exp() - Self::ONE;
        seed + correction
    }

    /// Scientific-notation rendering with `digits` significant digits
    /// (clamped to [1, 32]). Deterministic: identical values always produce
    /// identical strings.
    pub fn to_sci_string(self, digits: usize) -> String {
        let digits = digits.clamp(1, 32);
        if !self.is_finite() {
            return format!("{}", self.hi);
        }
        if self.hi == 0.0 {
            return if digits == 1 {
                "0e0".to_string()
            } else {
                format!("0.{}e0", "0".repeat(digits - 1))
            };
        }
        let neg = self.hi < 0.0;
        let v = self.abs();
        let mut e10 = v.hi.log10().floor() as i32;
        let low = pow10_u128(digits as u32 - 1);
        let high = low * 10;
        let mut mant;
        loop {
            let scaled = v * pow10_dd(digits as i32 - 1 - e10);
            mant = scaled.to_i128_nearest() as u128;
            if mant >= high {
                e10 += 1;
            } else if mant < low {
                e10 -= 1;
            } else {
                break;
            }
        }
        let s = mant.to_string();
        let mut out = String::with_capacity(digits + 8);
        if neg {
            out.push('-');
        }
        out.push_str(&s[..1]);
        if digits > 1 {
            out.push('.');
            out.push_str(&s[1..]);
        }
        out.push('e');
        out.push_str(&e10.to_string());
        out
    }
}

/// 1/i! for i = 0..=28, computed once.
fn inv_factorials() -> &'static [DoubleDouble; 29] {
    use std::sync::OnceLock;
    static TABLE: OnceLock<[DoubleDouble; 29]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = [DoubleDouble::ONE; 29];
        let mut fact = DoubleDouble::ONE;
        for i in 1..29u64 {
            fact = fact * DoubleDouble::from_u64(i);
            t[i as usize] = DoubleDouble::ONE / fact;
        }
        t
    })
}

fn pow10_u128(k: u32) -> u128 {
    10u128.pow(k)
}

/// 10^k as a double-double. Exact for 0 <= k <= 31; beyond that the result
/// carries normal double-double rounding.
fn pow10_dd(k: i32) -> DoubleDouble {
    if k < 0 {
        return DoubleDouble::ONE / pow10_dd(-k);
    }
    let mut result = DoubleDouble::ONE;
    let mut base = DoubleDouble::from(10.0);
    let mut e = k as u32;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base;
        }
        base = base * base;
        e >>= 1;
    }
    result
}

impl From<f64> for DoubleDouble {
    #[inline]
    fn from(v: f64) -> Self {
        Self { hi: v, lo: 0.0 }
    }
}

impl From<u64> for DoubleDouble {
    #[inline]
    fn from(v: u64) -> Self {
        Self::from_u64(v)
    }
}

impl Neg for DoubleDouble {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Self {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Add for DoubleDouble {
    type Output = Self;
    #[inline]
    fn add(self, rhs: Self) -> Self {
        let (s1, s2) = two_sum(self.hi, rhs.hi);
        let (t1, t2) = two_sum(self.lo, rhs.lo);
        let (s1, s2) = quick_two_sum(s1, s2 + t1);
        let (hi, lo) = quick_two_sum(s1, s2 + t2);
        Self { hi, lo }
    }
}

impl Add<f64> for DoubleDouble {
    type Output = Self;
    #[inline]
    fn add(self, rhs: f64) -> Self {
        let (s1, s2) = two_sum(self.hi, rhs);
        let (hi, lo) = quick_two_sum(s1, s2 + self.lo);
        Self { hi, lo }
    }
}

impl Sub for DoubleDouble {
    type Output = Self;
    #[inline]
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Sub<f64> for DoubleDouble {
    type Output = Self;
    #[inline]
    fn sub(self, rhs: f64) -> Self {
        self + (-rhs)
    }
}

impl Mul for DoubleDouble {
    type Output = Self;
    #[inline]
    fn mul(self, rhs: Self) -> Self {
        let (p1, p2) = two_prod(self.hi, rhs.hi);
        let p2 = p2 + self.hi * rhs.lo + self.lo * rhs.hi;
        let (hi, lo) = quick_two_sum(p1, p2);
        Self { hi, lo }
    }
}

impl Mul<f64> for DoubleDouble {
    type Output = Self;
    #[inline]
    fn mul(self, rhs: f64) -> Self {
        let (p1, p2) = two_prod(self.hi, rhs);
        let (hi, lo) = quick_two_sum(p1, p2 + self.lo * rhs);
        Self { hi, lo }
    }
}

impl Div for DoubleDouble {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        let q1 = self.hi / rhs.hi;
        let r = self - rhs * q1;
        let q2 = r.hi / rhs.hi;
        let r = r - rhs * q2;
        let q3 = r.hi / rhs.hi;
        let (s, e) = quick_two_sum(q1, q2);
        Self::new(s, e + q3)
    }
}

impl Div<f64> for DoubleDouble {
    type Output = Self;
    #[inline]
    fn div(self, rhs: f64) -> Self {
        self / Self::from(rhs)
    }
}

impl AddAssign for DoubleDouble {
    #[inline]
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl SubAssign for DoubleDouble {
    #[inline]
    fn sub_assign(&mut self, rhs: Self) {
        *self = *self - rhs;
    }
}

impl PartialOrd for DoubleDouble {
    #[inline]
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        // Normalized words make lexicographic comparison correct.
        match self.hi.partial_cmp(&other.hi) {
            Some(Ordering::Equal) => self.lo.partial_cmp(&other.lo),
            ord => ord,
        }
    }
}

impl Sum for DoubleDouble {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        hp_sum(iter)
    }
}

impl fmt::Display for DoubleDouble {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_sci_string(32))
    }
}

/// Compensated sum of a sequence, accumulated strictly in iteration order so
/// the result never depends on chunking or thread count.
pub fn hp_sum<I: IntoIterator<Item = DoubleDouble>>(terms: I) -> DoubleDouble {
    let mut acc = DoubleDouble::ZERO;
    for t in terms {
        acc += t;
    }
    acc
}
