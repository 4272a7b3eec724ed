//! The generalized tau function `τ_k(n)`, the coefficient of `qⁿ` in
//! `q ∏(1 − q^m)^k`, computed along three independent routes:
//!
//! - **series**: sparse pentagonal expansion of the eta product;
//! - **recurrence**: the logarithmic-derivative recurrence
//!   `n τ_k(n+1) = −k Σ_{i=1..n} τ_k(i) σ(n+1−i)`;
//! - **partition sum**: binomial-weighted sums over partitions of `n − 1`.
//!
//! `τ_24` is Ramanujan's tau and `τ_1(n+1) = ω(n)`.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{binom_exact, sigma, triangular_coeff};
use crate::error::{Error, Result};
use crate::partitions::{enum_partitions, FrequencyConstraint};
use crate::series::{eta_product, EtaProductSpec};

/// Largest `n` accepted by [`tau_partition_sum`]; enumeration is exponential.
pub const PARTITION_SUM_CAP: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    Series,
    Recurrence,
    PartitionSum,
}

/// `τ_k(1), …, τ_k(max_n)` together with the route that produced them.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "TauRepr", into = "TauRepr")]
pub struct TauTable {
    k: i64,
    route: Route,
    values: Vec<BigInt>,
}

impl TauTable {
    pub fn k(&self) -> i64 {
        self.k
    }

    pub fn route(&self) -> Route {
        self.route
    }

    pub fn max_n(&self) -> usize {
        self.values.len()
    }

    /// `τ_k(n)` for `1 ≤ n ≤ max_n`.
    pub fn get(&self, n: usize) -> Option<&BigInt> {
        n.checked_sub(1).and_then(|i| self.values.get(i))
    }

    pub fn values(&self) -> &[BigInt] {
        &self.values
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,value\n");
        for (i, v) in self.values.iter().enumerate() {
            let _ = writeln!(out, "{},{}", i + 1, v);
        }
        out
    }
}

#[derive(Serialize, Deserialize)]
struct TauRepr {
    k: i64,
    route: Route,
    values: Vec<String>,
}

impl From<TauTable> for TauRepr {
    fn from(t: TauTable) -> Self {
        TauRepr { k: t.k, route: t.route, values: t.values.iter().map(|v| v.to_string()).collect() }
    }
}

impl TryFrom<TauRepr> for TauTable {
    type Error = Error;

    fn try_from(r: TauRepr) -> Result<Self> {
        if r.k == 0 {
            return Err(Error::ZeroExponent);
        }
        let values = r
            .values
            .iter()
            .map(|s| s.parse::<BigInt>().map_err(|e| Error::invalid(format!("bad value `{s}`: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        Ok(TauTable { k: r.k, route: r.route, values })
    }
}

fn check_args(k: i64, max_n: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::ZeroExponent);
    }
    if max_n == 0 {
        return Err(Error::invalid("max_n must be at least 1"));
    }
    Ok(())
}

pub fn tau_series(k: i64, max_n: usize) -> Result<TauTable> {
    check_args(k, max_n)?;
    let mut values = eta_product(&EtaProductSpec::tau(k), max_n).into_coeffs();
    values.remove(0);
    Ok(TauTable { k, route: Route::Series, values })
}

pub fn tau_recurrence(k: i64, max_n: usize) -> Result<TauTable> {
    check_args(k, max_n)?;
    let sig: Vec<BigInt> = (1..=max_n as u64)
        .map(|n| sigma(n).map(BigInt::from))
        .collect::<Result<_>>()?;
    let mut values: Vec<BigInt> = Vec::with_capacity(max_n);
    values.push(BigInt::one());
    let k_big = BigInt::from(k);
    for n in 1..max_n {
        // values[i-1] = τ(i), sig[j-1] = σ(j)
        let mut s = BigInt::zero();
        for i in 1..=n {
            s += &values[i - 1] * &sig[n - i];
        }
        let numerator = -(&k_big * s);
        let (q, r) = numerator.div_rem(&BigInt::from(n));
        if !r.is_zero() {
            return Err(Error::InexactDivision { n });
        }
        values.push(q);
    }
    Ok(TauTable { k, route: Route::Recurrence, values })
}

/// `τ_k(n)` as a sum over partitions of `n − 1`.
///
/// For `k > 0` only partitions with every frequency `≤ k` count, each with
/// weight `(−1)^{Σf} ∏ C(k, f)`; for `k < 0` every partition counts with
/// weight `∏ C(f + |k| − 1, |k| − 1)`.
pub fn tau_partition_sum(k: i64, n: usize) -> Result<BigInt> {
    if k == 0 {
        return Err(Error::ZeroExponent);
    }
    if n == 0 || n > PARTITION_SUM_CAP {
        return Err(Error::invalid(format!("partition sums are limited to 1 <= n <= {PARTITION_SUM_CAP}")));
    }
    let constraint = if k > 0 {
        FrequencyConstraint::MaxFrequency(k as u64)
    } else {
        FrequencyConstraint::Unconstrained
    };
    let kappa = k.unsigned_abs();
    let mut total = BigInt::zero();
    for shape in enum_partitions(n as u64 - 1, constraint)? {
        let mut w = BigInt::one();
        let mut total_freq = 0u64;
        for f in shape.frequencies() {
            total_freq += f;
            if k > 0 {
                w *= binom_exact(kappa, f as i64);
            } else {
                w *= binom_exact(f + kappa - 1, kappa as i64 - 1);
            }
        }
        if k > 0 && total_freq % 2 == 1 {
            total -= w;
        } else {
            total += w;
        }
    }
    Ok(total)
}

pub fn tau_partition_sum_table(k: i64, max_n: usize) -> Result<TauTable> {
    check_args(k, max_n)?;
    let values = (1..=max_n).map(|n| tau_partition_sum(k, n)).collect::<Result<_>>()?;
    Ok(TauTable { k, route: Route::PartitionSum, values })
}

pub fn tau_table(k: i64, max_n: usize, route: Route) -> Result<TauTable> {
    match route {
        Route::Series => tau_series(k, max_n),
        Route::Recurrence => tau_recurrence(k, max_n),
        Route::PartitionSum => tau_partition_sum_table(k, max_n),
    }
}

/// `τ_3(n)` from the triangular-number closed form of `∏(1 − q^m)³`.
pub fn tau3_closed(n: u64) -> Result<i64> {
    if n == 0 {
        return Err(Error::invalid("tau is indexed from n = 1"));
    }
    Ok(triangular_coeff(n - 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::omega;
    use crate::partitions::composition_weighted_sum_enumerated;

    const TAU: [i64; 7] = [1, -24, 252, -1472, 4830, -6048, -16744];

    fn small(t: &TauTable) -> Vec<i64> {
        t.values().iter().map(|v| i64::try_from(v).unwrap()).collect()
    }

    #[test]
    fn ramanujan_tau_first_values() {
        assert_eq!(small(&tau_series(24, 7).unwrap()), TAU);
        assert_eq!(small(&tau_recurrence(24, 7).unwrap()), TAU);
    }

    #[test]
    fn tau_one_is_omega() {
        let t = tau_series(1, 101).unwrap();
        for n in 0..=100u64 {
            assert_eq!(t.get(n as usize + 1).unwrap(), &BigInt::from(omega(n)));
        }
        let r = tau_recurrence(1, 8).unwrap();
        assert_eq!(r.get(6).unwrap(), &BigInt::one());
    }

    #[test]
    fn negative_exponents() {
        assert_eq!(tau_series(-2, 3).unwrap().get(3).unwrap(), &BigInt::from(5));
        let rec = tau_recurrence(-2, 21).unwrap();
        for n in 0..=20 {
            assert_eq!(rec.get(n + 1).unwrap(), &composition_weighted_sum_enumerated(2, n).unwrap());
        }
    }

    #[test]
    fn partition_sum_examples() {
        assert_eq!(tau_partition_sum(2, 4).unwrap(), BigInt::from(2));
        assert_eq!(tau_partition_sum(-3, 3).unwrap(), BigInt::from(9));
        for k in [-5, -1, 1, 7, 24] {
            assert_eq!(tau_partition_sum(k, 1).unwrap(), BigInt::one());
        }
        assert!(tau_partition_sum(3, 65).is_err());
    }

    #[test]
    fn first_two_values_for_any_k() {
        for k in (-12..=12).filter(|&k| k != 0) {
            for route in [Route::Series, Route::Recurrence, Route::PartitionSum] {
                let t = tau_table(k, 2, route).unwrap();
                assert_eq!(t.get(1).unwrap(), &BigInt::one());
                assert_eq!(t.get(2).unwrap(), &BigInt::from(-k));
            }
        }
    }

    #[test]
    fn zero_k_rejected() {
        assert_eq!(tau_series(0, 5), Err(Error::ZeroExponent));
        assert_eq!(tau_recurrence(0, 5), Err(Error::ZeroExponent));
        assert!(tau_series(3, 0).is_err());
    }

    #[test]
    fn closed_form_tau3() {
        assert_eq!(tau3_closed(1).unwrap(), 1);
        assert_eq!(tau3_closed(4).unwrap(), 5);
        assert_eq!(tau3_closed(3).unwrap(), 0);
        let t = tau_series(3, 5000).unwrap();
        for n in 1..=5000u64 {
            assert_eq!(t.get(n as usize).unwrap(), &BigInt::from(tau3_closed(n).unwrap()));
        }
    }

    #[test]
    fn serialization() {
        let t = tau_series(24, 3).unwrap();
        assert_eq!(t.to_csv(), "n,value\n1,1\n2,-24\n3,252\n");
        let json = serde_json::to_string(&t).unwrap();
        assert_eq!(json, r#"{"k":24,"route":"series","values":["1","-24","252"]}"#);
        assert_eq!(serde_json::from_str::<TauTable>(&json).unwrap(), t);
    }
}
