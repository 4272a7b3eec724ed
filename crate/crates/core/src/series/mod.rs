//! Truncated power series with exact integer coefficients.
//!
//! A series of order `N` stores the coefficients of `q^0 … q^N`. Binary
//! operations truncate to the smaller order of their inputs.

mod eta;
mod modular;

pub use eta::{eta_factor, eta_product, eta_product_mod, EtaFactor, EtaProductSpec};
pub use modular::ModSeries;

use std::ops::{Add, Index, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::PentagonalTable;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "SeriesRepr", into = "SeriesRepr")]
pub struct IntSeries {
    coeffs: Vec<BigInt>,
}

impl IntSeries {
    /// Builds a series of the given order, padding missing coefficients with 0.
    pub fn new(mut coeffs: Vec<BigInt>, order: usize) -> Result<Self> {
        if coeffs.len() > order + 1 {
            return Err(Error::TooManyCoefficients { len: coeffs.len(), order });
        }
        coeffs.resize(order + 1, BigInt::zero());
        Ok(IntSeries { coeffs })
    }

    pub fn from_i64s(coeffs: &[i64], order: usize) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect(), order)
    }

    pub fn zero(order: usize) -> Self {
        IntSeries { coeffs: vec![BigInt::zero(); order + 1] }
    }

    pub fn one(order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = BigInt::one();
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigInt> {
        self.coeffs
    }

    pub fn coeff(&self, n: usize) -> Result<&BigInt> {
        self.coeffs
            .get(n)
            .ok_or(Error::IndexOutOfRange { n, order: self.order() })
    }

    pub fn truncate(&self, order: usize) -> Self {
        let keep = order.min(self.order()) + 1;
        IntSeries { coeffs: self.coeffs[..keep].to_vec() }
    }

    pub fn negate(&self) -> Self {
        IntSeries { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    /// Multiplies by `q^shift`, keeping the order.
    pub fn shift(&self, shift: usize) -> Self {
        let mut out = Self::zero(self.order());
        for (i, c) in self.coeffs.iter().enumerate() {
            if i + shift > self.order() {
                break;
            }
            out.coeffs[i + shift] = c.clone();
        }
        out
    }

    /// Multiplicative inverse up to the truncation order. The constant term
    /// must be `±1`.
    pub fn invert(&self) -> Result<Self> {
        let c0 = &self.coeffs[0];
        if c0.abs() != BigInt::one() {
            return Err(Error::NonUnitConstant);
        }
        let negative = c0.is_negative();
        let order = self.order();
        let mut g: Vec<BigInt> = Vec::with_capacity(order + 1);
        g.push(c0.clone());
        for n in 1..=order {
            let mut acc = BigInt::zero();
            for i in 1..=n {
                let fi = &self.coeffs[i];
                if !fi.is_zero() {
                    acc += fi * &g[n - i];
                }
            }
            // g_n = −f₀⁻¹ Σ f_i g_{n−i}, and f₀⁻¹ = f₀
            g.push(if negative { acc } else { -acc });
        }
        Ok(IntSeries { coeffs: g })
    }

    /// `self^e` by repeated squaring; negative exponents invert first.
    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.invert()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = Self::one(self.order());
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &sq;
            }
            e >>= 1;
            if e > 0 {
                sq = &sq * &sq;
            }
        }
        Ok(acc)
    }

    /// In-place multiplication by `∏_{m≥1}(1 − q^{cm})`.
    ///
    /// Only the pentagonal offsets `c·g ≤ N` contribute, so one pass costs
    /// `O(N·√(N/c))` additions.
    pub fn mul_eta_factor(&mut self, c: u64) {
        let order = self.order();
        let offsets = sparse_offsets(order, c);
        for n in (1..=order).rev() {
            let (lo, hi) = self.coeffs.split_at_mut(n);
            let target = &mut hi[0];
            for &(off, sign) in &offsets {
                if off > n {
                    break;
                }
                if sign > 0 {
                    *target += &lo[n - off];
                } else {
                    *target -= &lo[n - off];
                }
            }
        }
    }

    /// In-place division by `∏_{m≥1}(1 − q^{cm})`, solving `g·E = f` one
    /// coefficient at a time.
    pub fn div_eta_factor(&mut self, c: u64) {
        let order = self.order();
        let offsets = sparse_offsets(order, c);
        for n in 1..=order {
            let (lo, hi) = self.coeffs.split_at_mut(n);
            let target = &mut hi[0];
            for &(off, sign) in &offsets {
                if off > n {
                    break;
                }
                if sign > 0 {
                    *target -= &lo[n - off];
                } else {
                    *target += &lo[n - off];
                }
            }
        }
    }

    pub fn reduce_mod(&self, m: u64) -> Result<ModSeries> {
        ModSeries::from_int_series(self, m)
    }
}

/// Nonzero pentagonal offsets `c·g ≤ order` with their signs, ascending.
fn sparse_offsets(order: usize, c: u64) -> Vec<(usize, i64)> {
    assert!(c >= 1, "eta factor scale must be positive");
    PentagonalTable::up_to(order as u64 / c)
        .iter()
        .skip(1)
        .map(|e| ((e.value * c) as usize, e.sign))
        .collect()
}

impl Index<usize> for IntSeries {
    type Output = BigInt;

    fn index(&self, n: usize) -> &BigInt {
        &self.coeffs[n]
    }
}

impl Add for &IntSeries {
    type Output = IntSeries;

    fn add(self, rhs: &IntSeries) -> IntSeries {
        let order = self.order().min(rhs.order());
        let coeffs = (0..=order).map(|i| &self.coeffs[i] + &rhs.coeffs[i]).collect();
        IntSeries { coeffs }
    }
}

impl Sub for &IntSeries {
    type Output = IntSeries;

    fn sub(self, rhs: &IntSeries) -> IntSeries {
        let order = self.order().min(rhs.order());
        let coeffs = (0..=order).map(|i| &self.coeffs[i] - &rhs.coeffs[i]).collect();
        IntSeries { coeffs }
    }
}

impl Neg for &IntSeries {
    type Output = IntSeries;

    fn neg(self) -> IntSeries {
        self.negate()
    }
}

/// Truncated Cauchy product, `O(N²)`. Also the reference the sparse eta
/// kernels are tested against.
impl Mul for &IntSeries {
    type Output = IntSeries;

    fn mul(self, rhs: &IntSeries) -> IntSeries {
        let order = self.order().min(rhs.order());
        let mut coeffs = vec![BigInt::zero(); order + 1];
        for (i, a) in self.coeffs[..=order].iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs[..=order - i].iter().enumerate() {
                if !b.is_zero() {
                    coeffs[i + j] += a * b;
                }
            }
        }
        IntSeries { coeffs }
    }
}

/// JSON form: coefficients as decimal strings since they outgrow 53-bit floats.
#[derive(Serialize, Deserialize)]
struct SeriesRepr {
    order: usize,
    coeffs: Vec<String>,
}

impl From<IntSeries> for SeriesRepr {
    fn from(s: IntSeries) -> Self {
        SeriesRepr {
            order: s.order(),
            coeffs: s.coeffs.iter().map(|c| c.to_string()).collect(),
        }
    }
}

impl TryFrom<SeriesRepr> for IntSeries {
    type Error = Error;

    fn try_from(r: SeriesRepr) -> Result<Self> {
        if r.coeffs.len() != r.order + 1 {
            return Err(Error::invalid(format!(
                "order {} needs {} coefficients, found {}",
                r.order,
                r.order + 1,
                r.coeffs.len()
            )));
        }
        let coeffs = r
            .coeffs
            .iter()
            .map(|s| s.parse::<BigInt>().map_err(|e| Error::invalid(format!("bad coefficient `{s}`: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        IntSeries::new(coeffs, r.order)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(c: &[i64], order: usize) -> IntSeries {
        IntSeries::from_i64s(c, order).unwrap()
    }

    #[test]
    fn construction() {
        assert_eq!(s(&[1], 3).coeffs(), s(&[1, 0, 0, 0], 3).coeffs());
        assert_eq!(s(&[0, 1], 2).coeffs().len(), 3);
        assert_eq!(s(&[1, -1, -1, 0, 0, 1], 5)[5], BigInt::from(1));
        assert!(IntSeries::from_i64s(&[1, 2, 3], 1).is_err());
    }

    #[test]
    fn coeff_out_of_range() {
        let f = s(&[1, 2], 1);
        assert_eq!(f.coeff(1).unwrap(), &BigInt::from(2));
        assert_eq!(f.coeff(2), Err(Error::IndexOutOfRange { n: 2, order: 1 }));
    }

    #[test]
    fn telescoping_product() {
        let p = &s(&[1, -1], 2) * &s(&[1, 1, 1], 2);
        assert_eq!(p, IntSeries::one(2));
    }

    #[test]
    fn order_mismatch_truncates() {
        let f = s(&[1, 2, 3, 4], 3);
        let g = s(&[1, 1], 1);
        assert_eq!((&f + &g).order(), 1);
        assert_eq!((&f * &g).order(), 1);
    }

    #[test]
    fn identity_and_geometric_inverse() {
        let f = s(&[3, -1, 4, 1, -5], 4);
        assert_eq!(&f * &IntSeries::one(4), f);
        assert_eq!(s(&[1, -1], 4).invert().unwrap(), s(&[1, 1, 1, 1, 1], 4));
        assert_eq!(s(&[2, 1], 4).invert(), Err(Error::NonUnitConstant));
        let neg = s(&[-1, 1], 3).invert().unwrap();
        assert_eq!(neg, s(&[-1, -1, -1, -1], 3));
    }

    #[test]
    fn powers() {
        assert_eq!(s(&[1, -1], 2).pow(2).unwrap(), s(&[1, -2, 1], 2));
        assert_eq!(s(&[1, -1], 5).pow(0).unwrap(), IntSeries::one(5));
        let f = s(&[1, 3, -2, 7], 3);
        assert_eq!(f.pow(-1).unwrap(), f.invert().unwrap());
        assert!(s(&[2, 1], 3).pow(-2).is_err());
    }

    #[test]
    fn sparse_kernels_match_dense() {
        let order = 40;
        let mut f = s(&[1, 4, -2, 0, 9, 1], order);
        let dense = &f * &eta_factor(3, order);
        f.mul_eta_factor(3);
        assert_eq!(f, dense);
        f.div_eta_factor(3);
        assert_eq!(f, s(&[1, 4, -2, 0, 9, 1], order));
    }

    #[test]
    fn shift_keeps_order() {
        assert_eq!(s(&[1, 2, 3], 2).shift(1), s(&[0, 1, 2], 2));
    }

    #[test]
    fn json_uses_decimal_strings() {
        let f = s(&[1, -24], 2);
        let json = serde_json::to_string(&f).unwrap();
        assert_eq!(json, r#"{"order":2,"coeffs":["1","-24","0"]}"#);
        let back: IntSeries = serde_json::from_str(&json).unwrap();
        assert_eq!(back, f);
        assert!(serde_json::from_str::<IntSeries>(r#"{"order":3,"coeffs":["1"]}"#).is_err());
    }
}
