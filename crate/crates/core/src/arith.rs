//! Scalar number-theoretic helpers: divisor sums, pentagonal and triangular
//! closed forms, binomial coefficients modulo 2 and modulo odd primes, and
//! p-adic valuations.

use num_bigint::BigInt;
use num_integer::Roots;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Sum of the positive divisors of `n`.
pub fn sigma(n: u64) -> Result<u64> {
    if n == 0 {
        return Err(Error::invalid("sigma is defined for n >= 1"));
    }
    let mut total = 0u64;
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            total += d;
            let e = n / d;
            if e != d {
                total += e;
            }
        }
        d += 1;
    }
    Ok(total)
}

/// Coefficient of `q^n` in `∏(1 − q^m)`: `(−1)^l` when `n = (3l² ± l)/2`, else 0.
///
/// `24n + 1 = (6l ± 1)²` exactly at the generalized pentagonal numbers, so the
/// query is one integer square root.
pub fn omega(n: u64) -> i64 {
    let disc = 24 * n + 1;
    let s = disc.sqrt();
    if s * s != disc {
        return 0;
    }
    // s is odd and prime to 3, so s ≡ ±1 (mod 6)
    let l = if s % 6 == 1 { (s - 1) / 6 } else { (s + 1) / 6 };
    if l % 2 == 0 {
        1
    } else {
        -1
    }
}

/// `omega(n / c)` when `c | n`, else 0: the coefficients of `∏(1 − q^{cm})`.
pub fn omega_scaled(n: u64, c: u64) -> i64 {
    assert!(c >= 1, "scale must be positive");
    if n % c == 0 {
        omega(n / c)
    } else {
        0
    }
}

/// Coefficient of `q^n` in `∏(1 − q^m)³`: `(−1)^t (2t + 1)` when `n = t(t+1)/2`.
pub fn triangular_coeff(n: u64) -> i64 {
    let disc = 8 * n + 1;
    let s = disc.sqrt();
    if s * s != disc {
        return 0;
    }
    let t = (s - 1) / 2;
    let v = (2 * t + 1) as i64;
    if t % 2 == 0 {
        v
    } else {
        -v
    }
}

pub fn is_triangular(n: u64) -> bool {
    triangular_coeff(n) != 0
}

/// Parity of `C(n, k)` by Glaisher's halving rule: an even top over an odd
/// bottom is even, otherwise halve both.
pub fn binom_mod2(n: u64, k: u64) -> u8 {
    let (mut n, mut k) = (n, k);
    if k > n {
        return 0;
    }
    while k > 0 {
        if n % 2 == 0 && k % 2 == 1 {
            return 0;
        }
        n /= 2;
        k /= 2;
    }
    1
}

/// `C(n + k, k) mod l` from the residue `r = n mod l` alone.
///
/// For `r ≤ l − k − 1` this is `(−1)^r C(l − k − 1, r)`, otherwise 0.
pub fn binom_shifted_mod_l(n: u64, k: u64, l: u64) -> Result<u64> {
    if l < 3 || !is_prime(l) {
        return Err(Error::invalid(format!("{l} is not an odd prime")));
    }
    if k == 0 || k >= l {
        return Err(Error::invalid(format!("k = {k} must satisfy 1 <= k < {l}")));
    }
    let r = n % l;
    if r > l - k - 1 {
        return Ok(0);
    }
    let c = binom_exact(l - k - 1, r as i64);
    let signed = if r % 2 == 0 { c } else { -c };
    Ok(residue(&signed, l))
}

/// Exponent of the largest power of the prime `p` dividing `m`.
pub fn p_adic_valuation(m: u64, p: u64) -> Result<u32> {
    if m == 0 {
        return Err(Error::invalid("valuation of 0 is undefined"));
    }
    if !is_prime(p) {
        return Err(Error::invalid(format!("{p} is not prime")));
    }
    let mut m = m;
    let mut v = 0;
    while m % p == 0 {
        m /= p;
        v += 1;
    }
    Ok(v)
}

/// Exact `C(n, k)`; zero outside `0 ≤ k ≤ n`.
pub fn binom_exact(n: u64, k: i64) -> BigInt {
    if k < 0 || k as u64 > n {
        return BigInt::zero();
    }
    let k = (k as u64).min(n - k as u64);
    let mut acc = BigInt::one();
    for i in 0..k {
        // acc = C(n, i) here, so the division below is exact
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// Deterministic trial division; moduli here are small.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Canonical residue of `x` in `[0, m)`.
pub fn residue(x: &BigInt, m: u64) -> u64 {
    let r = x % BigInt::from(m);
    let r = if r < BigInt::zero() { r + m } else { r };
    // r < m fits
    r.iter_u64_digits().next().unwrap_or(0)
}

pub fn residue_i64(x: i64, m: u64) -> u64 {
    x.rem_euclid(m as i64) as u64
}

/// One generalized pentagonal number `(3l² − l)/2` for signed `l`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PentagonalEntry {
    pub index: i64,
    pub value: u64,
    pub sign: i64,
}

/// All generalized pentagonal numbers up to a bound, in increasing order.
///
/// Signed indices cover both branches: `l > 0` gives `(3l² − l)/2` and
/// `l < 0` gives `(3l² + |l|)/2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PentagonalTable {
    bound: u64,
    entries: Vec<PentagonalEntry>,
}

impl PentagonalTable {
    pub fn up_to(bound: u64) -> Self {
        let mut entries = vec![PentagonalEntry { index: 0, value: 0, sign: 1 }];
        let mut l = 1i64;
        loop {
            let lu = l as u64;
            let minus = (3 * lu * lu - lu) / 2;
            if minus > bound {
                break;
            }
            let sign = if l % 2 == 0 { 1 } else { -1 };
            entries.push(PentagonalEntry { index: l, value: minus, sign });
            let plus = minus + lu;
            if plus <= bound {
                entries.push(PentagonalEntry { index: -l, value: plus, sign });
            }
            l += 1;
        }
        PentagonalTable { bound, entries }
    }

    pub fn bound(&self) -> u64 {
        self.bound
    }

    pub fn entries(&self) -> &[PentagonalEntry] {
        &self.entries
    }

    pub fn iter(&self) -> impl Iterator<Item = &PentagonalEntry> {
        self.entries.iter()
    }

    /// `(value, sign)` pairs, the sparse form of `∏(1 − q^m)` up to the bound.
    pub fn terms(&self) -> Vec<(u64, i64)> {
        self.entries.iter().map(|e| (e.value, e.sign)).collect()
    }
}

/// `(t(t+1)/2, (−1)^t (2t+1))` for every triangular number up to `bound`.
pub fn triangular_terms(bound: u64) -> Vec<(u64, i64)> {
    let mut out = Vec::new();
    let mut t = 0u64;
    while t * (t + 1) / 2 <= bound {
        let v = (2 * t + 1) as i64;
        out.push((t * (t + 1) / 2, if t % 2 == 0 { v } else { -v }));
        t += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sigma_values() {
        assert_eq!(sigma(1).unwrap(), 1);
        assert_eq!(sigma(13).unwrap(), 14);
        assert_eq!(sigma(12).unwrap(), 28);
        assert_eq!(sigma(36).unwrap(), 91);
        assert!(sigma(0).is_err());
    }

    #[test]
    fn omega_examples() {
        assert_eq!(omega(0), 1);
        assert_eq!(omega(5), 1);
        assert_eq!(omega(3), 0);
        assert_eq!(omega(12), -1);
        let first: Vec<i64> = (0..8).map(omega).collect();
        assert_eq!(first, vec![1, -1, -1, 0, 0, 1, 0, 1]);
    }

    #[test]
    fn omega_scaled_examples() {
        assert_eq!(omega_scaled(0, 9), 1);
        assert_eq!(omega_scaled(18, 9), -1);
        assert_eq!(omega_scaled(10, 9), 0);
    }

    #[test]
    fn triangular_examples() {
        assert_eq!(triangular_coeff(0), 1);
        assert_eq!(triangular_coeff(1), -3);
        assert_eq!(triangular_coeff(3), 5);
        assert_eq!(triangular_coeff(2), 0);
        assert_eq!(triangular_coeff(6), -7);
    }

    #[test]
    fn binom_mod2_examples() {
        assert_eq!(binom_mod2(24, 8), 1);
        assert_eq!(binom_mod2(24, 4), 0);
        assert_eq!(binom_mod2(3, 5), 0);
        let odd: Vec<u64> = (1..=24).filter(|&k| binom_mod2(24, k) == 1).collect();
        assert_eq!(odd, vec![8, 16, 24]);
        for s in 1..8 {
            let top = (1u64 << s) - 1;
            assert!((0..=top).all(|k| binom_mod2(top, k) == 1));
        }
    }

    #[test]
    fn binom_mod2_matches_exact() {
        for n in 0..=512u64 {
            for k in 0..=n {
                let exact = residue(&binom_exact(n, k as i64), 2) as u8;
                assert_eq!(binom_mod2(n, k), exact, "C({n},{k})");
            }
        }
    }

    #[test]
    fn shifted_binomial_examples() {
        assert_eq!(binom_shifted_mod_l(0, 2, 5).unwrap(), 1);
        assert_eq!(binom_shifted_mod_l(3, 2, 5).unwrap(), 0);
        assert_eq!(binom_shifted_mod_l(6, 2, 5).unwrap(), 3);
        assert!(binom_shifted_mod_l(1, 0, 5).is_err());
        assert!(binom_shifted_mod_l(1, 5, 5).is_err());
        assert!(binom_shifted_mod_l(1, 2, 9).is_err());
    }

    #[test]
    fn shifted_binomial_matches_exact() {
        for l in [3u64, 5, 7, 11, 13, 23] {
            for k in 1..l {
                for n in 0..=500u64 {
                    let exact = residue(&binom_exact(n + k, k as i64), l);
                    assert_eq!(binom_shifted_mod_l(n, k, l).unwrap(), exact, "l={l} k={k} n={n}");
                }
            }
        }
    }

    #[test]
    fn valuation_examples() {
        assert_eq!(p_adic_valuation(7, 7).unwrap(), 1);
        assert_eq!(p_adic_valuation(24, 2).unwrap(), 3);
        assert_eq!(p_adic_valuation(24, 5).unwrap(), 0);
        assert!(p_adic_valuation(0, 3).is_err());
        assert!(p_adic_valuation(8, 4).is_err());
    }

    #[test]
    fn binom_exact_examples() {
        assert_eq!(binom_exact(24, 12), BigInt::from(2704156));
        assert_eq!(binom_exact(9, 0), BigInt::one());
        assert_eq!(binom_exact(24, 1), BigInt::from(24));
        assert_eq!(binom_exact(4, 5), BigInt::zero());
        assert_eq!(binom_exact(4, -1), BigInt::zero());
    }

    #[test]
    fn primes() {
        let small: Vec<u64> = (0..30).filter(|&n| is_prime(n)).collect();
        assert_eq!(small, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
    }

    #[test]
    fn pentagonal_table_is_sorted_and_matches_omega() {
        let table = PentagonalTable::up_to(1000);
        let values: Vec<u64> = table.iter().map(|e| e.value).collect();
        assert!(values.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(&values[..6], &[0, 1, 2, 5, 7, 12]);
        for e in table.iter() {
            assert_eq!(omega(e.value), e.sign);
        }
        let hits = (0..=1000).filter(|&n| omega(n) != 0).count();
        assert_eq!(hits, table.entries().len());
    }

    #[test]
    fn triangular_terms_match_closed_form() {
        for (n, c) in triangular_terms(5000) {
            assert_eq!(triangular_coeff(n), c);
        }
    }
}
