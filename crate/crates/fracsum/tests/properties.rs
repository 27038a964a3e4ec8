//! Property-based invariants across the numeric kernels.

mod common;

use num_complex::Complex64;
use proptest::prelude::*;

use fracsum::hp::{hp_sum, DoubleDouble};
use fracsum::psi::psi;
use fracsum::star_norm;
use fracsum::{quotient_blocks_vec, tau_sieve, QuotientBlock};

fn blocks_brute(x: f64) -> Vec<QuotientBlock> {
    let nf = x.floor() as u64;
    let mut out: Vec<QuotientBlock> = Vec::new();
    for n in 1..=nf {
        let q = nf / n;
        match out.last_mut() {
            Some(b) if b.q == q => b.n_hi = n,
            _ => out.push(QuotientBlock { q, n_lo: n, n_hi: n }),
        }
    }
    out
}

proptest! {
    #[test]
    fn quotient_blocks_match_brute_force(x in 1.0f64..200_000.0) {
        let fast = quotient_blocks_vec(x).unwrap();
        prop_assert_eq!(fast, blocks_brute(x));
    }

    #[test]
    fn quotient_block_count_budget(x in 1.0f64..5_000_000.0) {
        let count = quotient_blocks_vec(x).unwrap().len() as f64;
        prop_assert!(count <= 2.0 * x.sqrt() + 1.0);
    }

    #[test]
    fn quotient_blocks_are_contiguous_and_decreasing(x in 1.0f64..100_000.0) {
        let blocks = quotient_blocks_vec(x).unwrap();
        prop_assert_eq!(blocks.first().unwrap().n_lo, 1);
        prop_assert_eq!(blocks.last().unwrap().n_hi, x.floor() as u64);
        for w in blocks.windows(2) {
            prop_assert_eq!(w[1].n_lo, w[0].n_hi + 1);
            prop_assert!(w[1].q < w[0].q);
        }
    }

    #[test]
    fn psi_is_periodic_and_bounded(num in 0u32..(1 << 16), pow in 0u32..16, k in 1u8..30) {
        // dyadic x keeps x + k exact, so periodicity must hold bit-for-bit
        let x = f64::from(num) / f64::from(1u32 << pow);
        let v = psi(x);
        prop_assert!((-0.5..0.5).contains(&v));
        prop_assert_eq!(v, psi(x + f64::from(k)));
    }

    #[test]
    fn psi_nearly_periodic_off_grid(num in 0u32..10_000, den in 1u32..10_000) {
        let x = f64::from(num) / f64::from(den);
        prop_assert!((psi(x) - psi(x + 1.0)).abs() < 1e-12);
    }

    #[test]
    fn star_norm_sandwich(parts in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 0..64)) {
        let z: Vec<Complex64> = parts.iter().map(|&(re, im)| Complex64::new(re, im)).collect();
        let star = star_norm(&z).value;
        let total: Complex64 = z.iter().sum();
        let abs_sum: f64 = z.iter().map(|v| v.norm()).sum();
        let max_single = z.iter().map(|v| v.norm()).fold(0.0f64, f64::max);
        prop_assert!(star + 1e-12 >= total.norm());
        prop_assert!(star + 1e-12 >= max_single);
        prop_assert!(star <= abs_sum + 1e-12);
    }

    #[test]
    fn dd_integer_conversion_roundtrip(hi in 0u64..u64::MAX, lo in 0u64..u64::MAX) {
        // any 106-bit integer must survive the round trip exactly
        let n = (u128::from(hi) << 42) | u128::from(lo >> 22);
        let v = DoubleDouble::from_u128(n);
        prop_assert_eq!(v.to_i128_nearest() as u128, n);
    }

    #[test]
    fn dd_sum_of_integers_is_exact(terms in prop::collection::vec(0u64..(1 << 40), 1..50)) {
        let dd = hp_sum(terms.iter().map(|&t| DoubleDouble::from_u64(t)));
        let exact: u128 = terms.iter().map(|&t| u128::from(t)).sum();
        prop_assert_eq!(dd.to_i128_nearest() as u128, exact);
    }

    #[test]
    fn dd_product_relative_error(a in 1.0f64..1e12, b in 1.0f64..1e12) {
        // compare against exact integer product of the truncations
        let (ia, ib) = (a.trunc(), b.trunc());
        let p = DoubleDouble::from(ia) * DoubleDouble::from(ib);
        let exact = (ia as u128) * (ib as u128);
        let err = (p - DoubleDouble::from_u128(exact)).abs().to_f64();
        prop_assert!(err <= 1e-30 * (exact as f64).max(1.0));
    }

    #[test]
    fn tau_sieve_matches_trial_division(n in 1u64..3000) {
        let sieve = tau_sieve(n).unwrap();
        prop_assert_eq!(sieve[n as usize], common::tau_brute(n));
    }
}
