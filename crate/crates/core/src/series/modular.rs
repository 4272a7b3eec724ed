use std::ops::{Add, Index, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use super::{sparse_offsets, IntSeries};
use crate::arith::residue;
use crate::error::{Error, Result};

/// Truncated series over `Z/mZ`; every coefficient is kept in `[0, m)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "ModRepr", into = "ModRepr")]
pub struct ModSeries {
    coeffs: Vec<u64>,
    modulus: u64,
}

fn check_modulus(m: u64) -> Result<()> {
    if m < 2 {
        Err(Error::InvalidModulus(m))
    } else {
        Ok(())
    }
}

impl ModSeries {
    pub fn new(coeffs: &[i64], order: usize, modulus: u64) -> Result<Self> {
        check_modulus(modulus)?;
        if coeffs.len() > order + 1 {
            return Err(Error::TooManyCoefficients { len: coeffs.len(), order });
        }
        let mut c: Vec<u64> = coeffs.iter().map(|&x| x.rem_euclid(modulus as i64) as u64).collect();
        c.resize(order + 1, 0);
        Ok(ModSeries { coeffs: c, modulus })
    }

    pub fn from_int_series(f: &IntSeries, modulus: u64) -> Result<Self> {
        check_modulus(modulus)?;
        let coeffs = f.coeffs().iter().map(|c| residue(c, modulus)).collect();
        Ok(ModSeries { coeffs, modulus })
    }

    /// Caller guarantees every entry is already below `modulus`.
    pub(super) fn from_residues(coeffs: Vec<u64>, modulus: u64) -> Self {
        debug_assert!(coeffs.iter().all(|&c| c < modulus));
        ModSeries { coeffs, modulus }
    }

    pub fn zero(order: usize, modulus: u64) -> Result<Self> {
        check_modulus(modulus)?;
        Ok(ModSeries { coeffs: vec![0; order + 1], modulus })
    }

    pub fn one(order: usize, modulus: u64) -> Result<Self> {
        let mut s = Self::zero(order, modulus)?;
        s.coeffs[0] = 1;
        Ok(s)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> Result<u64> {
        self.coeffs
            .get(n)
            .copied()
            .ok_or(Error::IndexOutOfRange { n, order: self.order() })
    }

    pub fn truncate(&self, order: usize) -> Self {
        let keep = order.min(self.order()) + 1;
        ModSeries { coeffs: self.coeffs[..keep].to_vec(), modulus: self.modulus }
    }

    pub fn shift(&self, shift: usize) -> Self {
        let mut coeffs = vec![0; self.coeffs.len()];
        for (i, &c) in self.coeffs.iter().enumerate() {
            if i + shift >= coeffs.len() {
                break;
            }
            coeffs[i + shift] = c;
        }
        ModSeries { coeffs, modulus: self.modulus }
    }

    fn same_modulus(&self, rhs: &ModSeries) {
        assert_eq!(self.modulus, rhs.modulus, "series over different moduli");
    }

    /// Inverse up to the truncation order; the constant term must be a unit mod m.
    pub fn invert(&self) -> Result<Self> {
        let m = self.modulus;
        let inv0 = mod_inverse(self.coeffs[0], m).ok_or(Error::NonUnitConstant)?;
        let order = self.order();
        let mut g = Vec::with_capacity(order + 1);
        g.push(inv0);
        for n in 1..=order {
            let mut acc: u128 = 0;
            for i in 1..=n {
                let fi = self.coeffs[i];
                if fi != 0 {
                    acc = (acc + fi as u128 * g[n - i] as u128) % m as u128;
                }
            }
            let t = (acc * inv0 as u128 % m as u128) as u64;
            g.push((m - t) % m);
        }
        Ok(ModSeries { coeffs: g, modulus: m })
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.invert()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = Self::one(self.order(), self.modulus)?;
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

    /// In-place multiplication by `∏(1 − q^{cm})`.
    pub fn mul_eta_factor(&mut self, c: u64) {
        let m = self.modulus;
        let order = self.order();
        let offsets = sparse_offsets(order, c);
        for n in (1..=order).rev() {
            let mut acc = self.coeffs[n];
            for &(off, sign) in &offsets {
                if off > n {
                    break;
                }
                let v = self.coeffs[n - off];
                acc = if sign > 0 { add_mod(acc, v, m) } else { sub_mod(acc, v, m) };
            }
            self.coeffs[n] = acc;
        }
    }

    /// In-place division by `∏(1 − q^{cm})`.
    pub fn div_eta_factor(&mut self, c: u64) {
        let m = self.modulus;
        let order = self.order();
        let offsets = sparse_offsets(order, c);
        for n in 1..=order {
            let mut acc = self.coeffs[n];
            for &(off, sign) in &offsets {
                if off > n {
                    break;
                }
                let v = self.coeffs[n - off];
                acc = if sign > 0 { sub_mod(acc, v, m) } else { add_mod(acc, v, m) };
            }
            self.coeffs[n] = acc;
        }
    }
}

fn add_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 + b as u128) % m as u128) as u64
}

fn sub_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 + m as u128 - b as u128) % m as u128) as u64
}

fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    let (mut r0, mut r1) = (m as i128, a as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 != 1 {
        return None;
    }
    Some(t0.rem_euclid(m as i128) as u64)
}

impl Index<usize> for ModSeries {
    type Output = u64;

    fn index(&self, n: usize) -> &u64 {
        &self.coeffs[n]
    }
}

impl Add for &ModSeries {
    type Output = ModSeries;

    fn add(self, rhs: &ModSeries) -> ModSeries {
        self.same_modulus(rhs);
        let order = self.order().min(rhs.order());
        let m = self.modulus;
        let coeffs = (0..=order).map(|i| add_mod(self.coeffs[i], rhs.coeffs[i], m)).collect();
        ModSeries { coeffs, modulus: m }
    }
}

impl Sub for &ModSeries {
    type Output = ModSeries;

    fn sub(self, rhs: &ModSeries) -> ModSeries {
        self.same_modulus(rhs);
        let order = self.order().min(rhs.order());
        let m = self.modulus;
        let coeffs = (0..=order).map(|i| sub_mod(self.coeffs[i], rhs.coeffs[i], m)).collect();
        ModSeries { coeffs, modulus: m }
    }
}

impl Neg for &ModSeries {
    type Output = ModSeries;

    fn neg(self) -> ModSeries {
        let m = self.modulus;
        ModSeries { coeffs: self.coeffs.iter().map(|&c| (m - c) % m).collect(), modulus: m }
    }
}

impl Mul for &ModSeries {
    type Output = ModSeries;

    fn mul(self, rhs: &ModSeries) -> ModSeries {
        self.same_modulus(rhs);
        let order = self.order().min(rhs.order());
        let m = self.modulus as u128;
        let mut acc = vec![0u128; order + 1];
        for (i, &a) in self.coeffs[..=order].iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in rhs.coeffs[..=order - i].iter().enumerate() {
                acc[i + j] = (acc[i + j] + a as u128 * b as u128) % m;
            }
        }
        ModSeries { coeffs: acc.into_iter().map(|c| c as u64).collect(), modulus: self.modulus }
    }
}

#[derive(Serialize, Deserialize)]
struct ModRepr {
    order: usize,
    modulus: u64,
    coeffs: Vec<String>,
}

impl From<ModSeries> for ModRepr {
    fn from(s: ModSeries) -> Self {
        ModRepr {
            order: s.order(),
            modulus: s.modulus,
            coeffs: s.coeffs.iter().map(|c| c.to_string()).collect(),
        }
    }
}

impl TryFrom<ModRepr> for ModSeries {
    type Error = Error;

    fn try_from(r: ModRepr) -> Result<Self> {
        check_modulus(r.modulus)?;
        if r.coeffs.len() != r.order + 1 {
            return Err(Error::invalid("coefficient count does not match order"));
        }
        let coeffs = r
            .coeffs
            .iter()
            .map(|s| match s.parse::<u64>() {
                Ok(v) if v < r.modulus => Ok(v),
                _ => Err(Error::invalid(format!("`{s}` is not a residue mod {}", r.modulus))),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ModSeries { coeffs, modulus: r.modulus })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduction_is_canonical() {
        let f = IntSeries::from_i64s(&[1, -24], 1).unwrap();
        assert_eq!(f.reduce_mod(5).unwrap().coeffs(), &[1, 1]);
        assert_eq!(f.reduce_mod(1), Err(Error::InvalidModulus(1)));
    }

    #[test]
    fn inverse_mod_m() {
        let f = ModSeries::new(&[2, 1, 3], 6, 7).unwrap();
        let g = f.invert().unwrap();
        assert_eq!(&f * &g, ModSeries::one(6, 7).unwrap());
        let h = ModSeries::new(&[2, 1], 3, 4).unwrap();
        assert_eq!(h.invert(), Err(Error::NonUnitConstant));
    }

    #[test]
    fn modular_inverse_helper() {
        assert_eq!(mod_inverse(3, 7), Some(5));
        assert_eq!(mod_inverse(6, 9), None);
        assert_eq!(mod_inverse(1, 2), Some(1));
    }

    #[test]
    fn sparse_division_round_trip() {
        let base = ModSeries::new(&[1, 4, 0, 2], 30, 25).unwrap();
        let mut f = base.clone();
        f.div_eta_factor(2);
        f.mul_eta_factor(2);
        assert_eq!(f, base);
    }

    #[test]
    fn json_round_trip() {
        let f = ModSeries::new(&[1, -1, 3], 2, 5).unwrap();
        let json = serde_json::to_string(&f).unwrap();
        assert_eq!(json, r#"{"order":2,"modulus":5,"coeffs":["1","4","3"]}"#);
        assert_eq!(serde_json::from_str::<ModSeries>(&json).unwrap(), f);
        assert!(serde_json::from_str::<ModSeries>(r#"{"order":0,"modulus":5,"coeffs":["7"]}"#).is_err());
    }
}
