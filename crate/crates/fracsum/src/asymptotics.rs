//! The constants C1(f) = Σ f(d)/(d(d+1)), C3(f) = Σ f(d)(log d/d - log(d+1)/(d+1)),
//! C2(f) = (2γ-1) C1(f) - C3(f), their rigorous truncation tails, the main
//! term C1 x log x + C2 x, the measured error term, and the exponent
//! bookkeeping (reference exponents plus log-log slope fits).
//!
//! The literature writes C2 as "C1(2γ-1) - C3(f)"; the reading adopted here
//! is (2γ-1)·C1(f) - C3(f), which is the combination the three-term split
//! actually produces (the x-coefficient of T21 is (log x + 2γ-1) Σ f(d)/(d(d+1))).

use crate::arith::FunctionSpec;
use crate::error::{Error, Result};
use crate::hp::{DoubleDouble, TWO_GAMMA_MINUS_ONE};
use crate::sums::tf_exact_fast;
use crate::tolerances::{CONSTANT_UNCERTAINTY_FRACTION, FIT_SAMPLE_FLOOR};

/// A partial sum plus a rigorous radius around it containing the full
/// series limit.
#[derive(Clone, Copy, Debug)]
pub struct TailBoundedValue {
    pub partial: DoubleDouble,
    pub tail_radius: f64,
    pub d_cut: u64,
}

impl TailBoundedValue {
    pub fn contains(&self, v: DoubleDouble) -> bool {
        (v - self.partial).abs().to_f64() <= self.tail_radius
    }

    pub fn midpoint(&self) -> DoubleDouble {
        self.partial
    }
}

/// ∫_D^∞ t^{α-2} (ln t)^m dt for α < 1, via the recursion
/// I_m = (D^{α-1} (ln D)^m + m I_{m-1}) / (1-α).
fn log_power_integral(alpha: f64, m: u32, d: f64) -> f64 {
    let base = d.powf(alpha - 1.0);
    let mut value = base / (1.0 - alpha);
    for j in 1..=m {
        value = (base * d.ln().powi(j as i32) + f64::from(j) * value) / (1.0 - alpha);
    }
    value
}

/// Rigorous bound on Σ_{d>D} K d^{α-2} ln(d+2)^θ.
///
/// Explicit head up to max(D, 8), then an integral comparison using
/// ln(d+2) <= 2 ln d (d >= 2) and (ln d)^θ <= (ln d)^⌈θ⌉ (d >= 3).
fn c1_tail(k: f64, alpha: f64, theta: f64, d_cut: u64) -> f64 {
    let d0 = d_cut.max(8);
    let mut head = 0.0;
    for d in d_cut + 1..=d0 {
        let df = d as f64;
        head += k * df.powf(alpha - 2.0) * (df + 2.0).ln().powf(theta);
    }
    let m = theta.ceil() as u32;
    head + k * 2f64.powi(m as i32) * log_power_integral(alpha, m, d0 as f64)
}

/// Rigorous bound on Σ_{d>D} |f(d)| |log d/d - log(d+1)/(d+1)|, using
/// |g(d)-g(d+1)| <= 2 ln d / d² for d >= 4 (hence the D >= 3 precondition).
fn c3_tail(k: f64, alpha: f64, theta: f64, d_cut: u64) -> f64 {
    let d0 = d_cut.max(8);
    let mut head = 0.0;
    for d in d_cut + 1..=d0 {
        let df = d as f64;
        head += k * df.powf(alpha) * (df + 2.0).ln().powf(theta) * 2.0 * df.ln() / (df * df);
    }
    let m = theta.ceil() as u32;
    head + k * 2f64.powi(m as i32) * 2.0 * log_power_integral(alpha, m + 1, d0 as f64)
}

/// The three constants of one function at one truncation depth.
#[derive(Clone, Copy, Debug)]
pub struct Constants {
    pub c1: TailBoundedValue,
    pub c2: TailBoundedValue,
    pub c3: TailBoundedValue,
}

/// Computes C1, C2, C3 in a single pass over d <= d_cut. Functions with
/// telescoping closed forms (f ≡ 1) short-circuit with zero-radius values.
pub fn constants(f: &FunctionSpec, d_cut: u64) -> Result<Constants> {
    if d_cut < 3 {
        return Err(Error::domain(format!(
            "constants need d_cut >= 3, got {d_cut}"
        )));
    }
    if let Some(cc) = f.closed_constants() {
        let exact = |v: DoubleDouble| TailBoundedValue { partial: v, tail_radius: 0.0, d_cut };
        let c2v = TWO_GAMMA_MINUS_ONE * cc.c1 - cc.c3;
        return Ok(Constants { c1: exact(cc.c1), c2: exact(c2v), c3: exact(cc.c3) });
    }
    let mut s1 = DoubleDouble::ZERO;
    let mut s3 = DoubleDouble::ZERO;
    let mut ln_d = DoubleDouble::ZERO; // ln 1
    for d in 1..=d_cut {
        let fd = f.eval(d);
        let ln_d1 = DoubleDouble::from_u64(d + 1).ln();
        s1 += DoubleDouble::from(fd)
            / DoubleDouble::from_u128(u128::from(d) * u128::from(d + 1));
        let g_diff = ln_d / DoubleDouble::from_u64(d) - ln_d1 / DoubleDouble::from_u64(d + 1);
        s3 += g_diff * fd;
        ln_d = ln_d1;
    }
    let (k, a, t) = (f.growth_k(), f.alpha(), f.log_power());
    let r1 = c1_tail(k, a, t, d_cut);
    let r3 = c3_tail(k, a, t, d_cut);
    let c1v = TailBoundedValue { partial: s1, tail_radius: r1, d_cut };
    let c3v = TailBoundedValue { partial: s3, tail_radius: r3, d_cut };
    let c2v = TailBoundedValue {
        partial: TWO_GAMMA_MINUS_ONE * s1 - s3,
        tail_radius: TWO_GAMMA_MINUS_ONE.to_f64() * r1 + r3,
        d_cut,
    };
    Ok(Constants { c1: c1v, c2: c2v, c3: c3v })
}

/// C1(f) truncated at d_cut with its tail radius.
pub fn c1(f: &FunctionSpec, d_cut: u64) -> Result<TailBoundedValue> {
    if d_cut < 1 {
        return Err(Error::domain("c1 needs d_cut >= 1".to_string()));
    }
    Ok(constants(f, d_cut.max(3))?.c1)
}

/// C3(f) truncated at d_cut (d_cut >= 3) with its tail radius.
pub fn c3(f: &FunctionSpec, d_cut: u64) -> Result<TailBoundedValue> {
    if d_cut < 3 {
        return Err(Error::domain("c3 needs d_cut >= 3".to_string()));
    }
    Ok(constants(f, d_cut)?.c3)
}

/// C2(f) = (2γ-1) C1(f) - C3(f) as an interval combination.
pub fn c2(f: &FunctionSpec, d_cut: u64) -> Result<TailBoundedValue> {
    if d_cut < 3 {
        return Err(Error::domain("c2 needs d_cut >= 3".to_string()));
    }
    Ok(constants(f, d_cut)?.c2)
}

/// C1 x log x + C2 x at midpoint constants, plus the propagated radius.
#[derive(Clone, Copy, Debug)]
pub struct MainTerm {
    pub value: DoubleDouble,
    /// x log x · radius(C1) + x · radius(C2): how far the truncated
    /// constants can push the value.
    pub uncertainty: f64,
}

pub fn main_term_with(consts: &Constants, x: f64) -> Result<MainTerm> {
    if !(x >= 2.0) {
        return Err(Error::domain(format!("main term needs x >= 2, got {x}")));
    }
    let x_dd = DoubleDouble::from(x);
    let log_x = x_dd.ln();
    let value = consts.c1.partial * x_dd * log_x + consts.c2.partial * x_dd;
    let uncertainty = x * log_x.to_f64() * consts.c1.tail_radius + x * consts.c2.tail_radius;
    Ok(MainTerm { value, uncertainty })
}

pub fn main_term(f: &FunctionSpec, x: f64, d_cut: u64) -> Result<MainTerm> {
    main_term_with(&constants(f, d_cut)?, x)
}

/// E(x) = T_f(x) - main term. `uncertain` flags points where the
/// truncated-constant radius exceeds 1% of |E|.
#[derive(Clone, Copy, Debug)]
pub struct ErrorTerm {
    pub value: DoubleDouble,
    pub uncertainty: f64,
    pub uncertain: bool,
}

pub fn error_term_with(f: &FunctionSpec, consts: &Constants, x: f64) -> Result<ErrorTerm> {
    let main = main_term_with(consts, x)?;
    let value = tf_exact_fast(f, x)? - main.value;
    let uncertain = main.uncertainty > CONSTANT_UNCERTAINTY_FRACTION * value.abs().to_f64();
    Ok(ErrorTerm { value, uncertainty: main.uncertainty, uncertain })
}

pub fn error_term(f: &FunctionSpec, x: f64, d_cut: u64) -> Result<ErrorTerm> {
    error_term_with(f, &constants(f, d_cut)?, x)
}

/// The four reference exponents for a growth exponent alpha.
#[derive(Clone, Copy, Debug)]
pub struct ExponentSet {
    /// (1+α)/2: the unconditional S_f exponent.
    pub zhai_wu: f64,
    /// (α(1-θ)+1)/(2-θ): conditional on Δ(x) ≪ x^{θ+ε}.
    pub conditional: f64,
    /// (416+285α)/701: the conditional exponent at θ = 131/416.
    pub huxley_driven: f64,
    /// (4+3α)/7: the unconditional T_f exponent (θ = 1/4 made unconditional).
    pub theorem: f64,
}

pub fn predicted_exponents(alpha: f64, theta: f64) -> Result<ExponentSet> {
    if !(0.0..1.0).contains(&alpha) {
        return Err(Error::domain(format!("alpha must lie in [0,1), got {alpha}")));
    }
    if !(theta > 0.0 && theta <= 0.5) {
        return Err(Error::domain(format!("theta must lie in (0, 1/2], got {theta}")));
    }
    Ok(ExponentSet {
        zhai_wu: (1.0 + alpha) / 2.0,
        conditional: (alpha * (1.0 - theta) + 1.0) / (2.0 - theta),
        huxley_driven: (416.0 + 285.0 * alpha) / 701.0,
        theorem: (4.0 + 3.0 * alpha) / 7.0,
    })
}

/// Least-squares fit of log|E| against log x.
#[derive(Clone, Copy, Debug)]
pub struct FitResult {
    pub slope: f64,
    pub intercept: f64,
    pub residual_rms: f64,
    pub points_used: usize,
}

/// Fits log|E| = slope · log x + intercept, discarding samples with
/// |E| below the configured floor.
pub fn fit_exponent(samples: &[(f64, f64)]) -> Result<FitResult> {
    let pts: Vec<(f64, f64)> = samples
        .iter()
        .filter(|(x, e)| *x > 0.0 && e.abs() >= FIT_SAMPLE_FLOOR)
        .map(|(x, e)| (x.ln(), e.abs().ln()))
        .collect();
    if pts.len() < 2 {
        return Err(Error::InsufficientData(format!(
            "need >= 2 samples above the |E| floor, have {}",
            pts.len()
        )));
    }
    let n = pts.len() as f64;
    let mean_x = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    if sxx == 0.0 {
        return Err(Error::InsufficientData("all samples share one x".to_string()));
    }
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let ss_res: f64 = pts.iter().map(|p| (p.1 - (slope * p.0 + intercept)).powi(2)).sum();
    Ok(FitResult {
        slope,
        intercept,
        residual_rms: (ss_res / n).sqrt(),
        points_used: pts.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constants_for_one_are_closed_form() {
        let f = FunctionSpec::one();
        let c = constants(&f, 100).unwrap();
        assert_eq!(c.c1.partial.to_f64(), 1.0);
        assert_eq!(c.c1.tail_radius, 0.0);
        assert_eq!(c.c3.partial.to_f64(), 0.0);
        let expect_c2 = TWO_GAMMA_MINUS_ONE;
        assert!((c.c2.partial - expect_c2).abs().to_f64() < 1e-30);
    }

    #[test]
    fn numeric_one_series_lands_inside_its_own_tail() {
        // Run f ≡ 1 through the numeric path (no closed form) and check the
        // interval still contains the true limits C1 = 1, C3 = 0.
        let f = FunctionSpec::new("one_numeric", 0.0, 0.0, 1.0, |_| 1.0).unwrap();
        for d_cut in [10u64, 100, 10_000] {
            let c = constants(&f, d_cut).unwrap();
            assert!(c.c1.contains(DoubleDouble::ONE), "d_cut = {d_cut}");
            assert!(c.c3.contains(DoubleDouble::ZERO), "d_cut = {d_cut}");
            assert!(c.c2.contains(TWO_GAMMA_MINUS_ONE), "d_cut = {d_cut}");
        }
    }

    #[test]
    fn tail_radius_dominates_measured_remainder() {
        // Compare the claimed radius at D against the observed partial-sum
        // movement out to 50 D.
        for f in [FunctionSpec::sqrt_floor(), FunctionSpec::log_floor()] {
            let d = 200u64;
            let near = constants(&f, d).unwrap();
            let far = constants(&f, 50 * d).unwrap();
            let moved1 = (far.c1.partial - near.c1.partial).abs().to_f64();
            let moved3 = (far.c3.partial - near.c3.partial).abs().to_f64();
            assert!(moved1 <= near.c1.tail_radius, "{}: {moved1:e}", f.name());
            assert!(moved3 <= near.c3.tail_radius, "{}: {moved3:e}", f.name());
        }
    }

    #[test]
    fn intervals_nest_as_dcut_grows() {
        let f = FunctionSpec::sqrt_floor();
        let cuts = [1_000u64, 10_000, 100_000];
        let vals: Vec<_> = cuts.iter().map(|&d| constants(&f, d).unwrap()).collect();
        for earlier in 0..vals.len() {
            for later in earlier + 1..vals.len() {
                assert!(
                    vals[earlier].c1.contains(vals[later].c1.partial),
                    "c1 midpoint at {} escapes interval at {}",
                    cuts[later],
                    cuts[earlier]
                );
                assert!(vals[earlier].c3.contains(vals[later].c3.partial));
            }
        }
    }

    #[test]
    fn main_term_for_one_is_dirichlet_main_term() {
        let f = FunctionSpec::one();
        let c = constants(&f, 10).unwrap();
        let x = std::f64::consts::E;
        // x >= 2 gate uses e > 2: value = e·1 + (2γ-1)e
        let m = main_term_with(&c, x).unwrap();
        let expect = x + TWO_GAMMA_MINUS_ONE.to_f64() * x;
        assert!((m.value.to_f64() - expect).abs() < 1e-12);
        assert_eq!(m.uncertainty, 0.0);
        assert!(main_term_with(&c, 1.5).is_err());
    }

    #[test]
    fn error_term_for_one_is_delta() {
        let f = FunctionSpec::one();
        let c = constants(&f, 10).unwrap();
        for &x in &[2.0, 100.0, 12345.0, 1_000_000.0] {
            let e = error_term_with(&f, &c, x).unwrap();
            let d = crate::divisor::delta(x).unwrap();
            assert!(
                (e.value - d).abs().to_f64() < 1e-18,
                "x = {x}: {} vs {}",
                e.value,
                d
            );
            assert!(!e.uncertain);
        }
    }

    #[test]
    fn exponent_set_reference_values() {
        let e = predicted_exponents(0.0, 0.25).unwrap();
        assert!((e.theorem - 4.0 / 7.0).abs() < 1e-15);
        assert!((e.conditional - 4.0 / 7.0).abs() < 1e-15);
        assert!((e.zhai_wu - 0.5).abs() < 1e-15);
        assert!((e.huxley_driven - 416.0 / 701.0).abs() < 1e-15);
        let h = predicted_exponents(0.5, 0.25).unwrap();
        assert!((h.theorem - 5.5 / 7.0).abs() < 1e-15);
        assert!(predicted_exponents(1.0, 0.25).is_err());
    }

    #[test]
    fn theorem_equals_conditional_quarter_and_beats_huxley() {
        for k in 0..10 {
            let alpha = k as f64 / 10.0;
            let e = predicted_exponents(alpha, 0.25).unwrap();
            assert!((e.theorem - e.conditional).abs() < 1e-14, "alpha = {alpha}");
            assert!(e.theorem < e.huxley_driven, "alpha = {alpha}");
        }
    }

    #[test]
    fn fit_recovers_synthetic_exponents() {
        let grid: Vec<f64> = (1..=20).map(|k| 10f64.powf(2.0 + 0.2 * k as f64)).collect();
        let half: Vec<(f64, f64)> = grid.iter().map(|&x| (x, x.powf(0.5))).collect();
        let r = fit_exponent(&half).unwrap();
        assert!((r.slope - 0.5).abs() < 1e-12, "{}", r.slope);
        assert!(r.residual_rms < 1e-12);

        let scaled: Vec<(f64, f64)> = grid.iter().map(|&x| (x, 3.0 * x.powf(0.25))).collect();
        let r = fit_exponent(&scaled).unwrap();
        assert!((r.slope - 0.25).abs() < 1e-12);
        assert!((r.intercept - 3f64.ln()).abs() < 1e-10);
    }

    #[test]
    fn fit_is_scale_equivariant() {
        let grid: Vec<(f64, f64)> = (1..=15)
            .map(|k| {
                let x = 10f64.powf(1.0 + 0.3 * k as f64);
                (x, x.powf(0.4) * (1.0 + 0.1 * (k as f64).sin()))
            })
            .collect();
        let base = fit_exponent(&grid).unwrap();
        let scaled: Vec<(f64, f64)> = grid.iter().map(|&(x, e)| (x, 7.5 * e)).collect();
        let shifted = fit_exponent(&scaled).unwrap();
        assert!((base.slope - shifted.slope).abs() < 1e-12);
        assert!((shifted.intercept - base.intercept - 7.5f64.ln()).abs() < 1e-10);
    }

    #[test]
    fn fit_rejects_thin_data() {
        assert!(fit_exponent(&[(10.0, 5.0)]).is_err());
        // floor removes everything
        assert!(fit_exponent(&[(10.0, 1e-9), (100.0, 1e-9)]).is_err());
    }
}
