use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;

use super::{IntSeries, ModSeries};
use crate::arith::PentagonalTable;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EtaFactor {
    pub scale: u64,
    pub exponent: i64,
}

/// `q^delta · ∏_j ∏_{m≥1} (1 − q^{c_j m})^{e_j}`.
///
/// Factors are kept merged by scale, sorted, and without zero exponents, so
/// two specs for the same product compare equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EtaProductSpec {
    delta: usize,
    factors: Vec<EtaFactor>,
}

impl EtaProductSpec {
    pub fn new(delta: usize, factors: impl IntoIterator<Item = (u64, i64)>) -> Result<Self> {
        let mut merged: BTreeMap<u64, i64> = BTreeMap::new();
        for (scale, exponent) in factors {
            if scale == 0 {
                return Err(Error::InvalidScale);
            }
            *merged.entry(scale).or_default() += exponent;
        }
        let factors = merged
            .into_iter()
            .filter(|&(_, e)| e != 0)
            .map(|(scale, exponent)| EtaFactor { scale, exponent })
            .collect();
        Ok(EtaProductSpec { delta, factors })
    }

    /// `∏(1 − q^m)^k`.
    pub fn eta_power(k: i64) -> Self {
        Self::new(0, [(1, k)]).expect("scale 1 is valid")
    }

    /// `q ∏(1 − q^m)^k`, whose coefficients are `τ_k(n)`.
    pub fn tau(k: i64) -> Self {
        Self::new(1, [(1, k)]).expect("scale 1 is valid")
    }

    /// `∏(1 − q^{tm}) / (1 − q^m)`, the t-regular partition generating function.
    pub fn regular(t: u64) -> Result<Self> {
        Self::new(0, [(t, 1), (1, -1)])
    }

    pub fn delta(&self) -> usize {
        self.delta
    }

    pub fn factors(&self) -> &[EtaFactor] {
        &self.factors
    }

    pub fn with_delta(&self, delta: usize) -> Self {
        EtaProductSpec { delta, factors: self.factors.clone() }
    }
}

impl fmt::Display for EtaProductSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{};", self.delta)?;
        for factor in &self.factors {
            write!(f, " {}^{}", factor.scale, factor.exponent)?;
        }
        Ok(())
    }
}

/// Grammar: `delta; c1^e1 c2^e2 …`, whitespace separated, exponents may be
/// negative. Error positions are 0-based byte offsets into the input.
impl FromStr for EtaProductSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let err = |pos: usize, message: &str| Error::SpecParse { pos, message: message.to_string() };
        let semi = s.find(';').ok_or_else(|| err(s.len(), "expected `;` after delta"))?;
        let head = &s[..semi];
        let delta_start = head.len() - head.trim_start().len();
        let delta = head
            .trim()
            .parse::<usize>()
            .map_err(|_| err(delta_start, "delta must be a nonnegative integer"))?;

        let mut factors = Vec::new();
        for (start, token) in tokens(&s[semi + 1..]) {
            let start = start + semi + 1;
            let caret = token
                .find('^')
                .ok_or_else(|| err(start, "expected a factor of the form c^e"))?;
            let scale = token[..caret]
                .parse::<u64>()
                .map_err(|_| err(start, "scale must be a positive integer"))?;
            if scale == 0 {
                return Err(err(start, "scale must be positive"));
            }
            let exponent = token[caret + 1..]
                .parse::<i64>()
                .map_err(|_| err(start + caret + 1, "exponent must be an integer"))?;
            factors.push((scale, exponent));
        }
        EtaProductSpec::new(delta, factors)
    }
}

fn tokens(s: &str) -> impl Iterator<Item = (usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in s.char_indices() {
        match (ch.is_whitespace(), start) {
            (true, Some(b)) => {
                out.push((b, &s[b..i]));
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    if let Some(b) = start {
        out.push((b, &s[b..]));
    }
    out.into_iter()
}

/// `∏_{m≥1}(1 − q^{cm})` to the given order, straight from the pentagonal numbers.
pub fn eta_factor(c: u64, order: usize) -> IntSeries {
    assert!(c >= 1, "eta factor scale must be positive");
    let mut s = IntSeries::zero(order);
    for e in PentagonalTable::up_to(order as u64 / c).iter() {
        s.coeffs[(e.value * c) as usize] = BigInt::from(e.sign);
    }
    s
}

/// Exact expansion of a spec, one sparse pass per unit of exponent.
pub fn eta_product(spec: &EtaProductSpec, order: usize) -> IntSeries {
    if spec.delta > order {
        return IntSeries::zero(order);
    }
    let mut s = IntSeries::one(order - spec.delta);
    for f in &spec.factors {
        for _ in 0..f.exponent.unsigned_abs() {
            if f.exponent > 0 {
                s.mul_eta_factor(f.scale);
            } else {
                s.div_eta_factor(f.scale);
            }
        }
    }
    let mut coeffs = vec![BigInt::from(0); spec.delta];
    coeffs.extend(s.into_coeffs());
    IntSeries { coeffs }
}

/// The same expansion carried out directly over `Z/mZ`.
pub fn eta_product_mod(spec: &EtaProductSpec, order: usize, modulus: u64) -> Result<ModSeries> {
    if spec.delta > order {
        return ModSeries::zero(order, modulus);
    }
    let mut s = ModSeries::one(order - spec.delta, modulus)?;
    for f in &spec.factors {
        for _ in 0..f.exponent.unsigned_abs() {
            if f.exponent > 0 {
                s.mul_eta_factor(f.scale);
            } else {
                s.div_eta_factor(f.scale);
            }
        }
    }
    let mut coeffs = vec![0; spec.delta];
    coeffs.extend_from_slice(s.coeffs());
    Ok(ModSeries::from_residues(coeffs, modulus))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::omega;

    fn ints(s: &IntSeries) -> Vec<i64> {
        s.coeffs().iter().map(|c| i64::try_from(c).unwrap()).collect()
    }

    #[test]
    fn pentagonal_factor() {
        assert_eq!(ints(&eta_factor(1, 7)), vec![1, -1, -1, 0, 0, 1, 0, 1]);
        assert_eq!(ints(&eta_factor(3, 6)), vec![1, 0, 0, -1, 0, 0, -1]);
        assert_eq!(eta_factor(1, 12)[12], BigInt::from(-1));
        assert_eq!(eta_factor(1, 10).coeff(5).unwrap(), &BigInt::from(1));
    }

    #[test]
    fn spec_normalization() {
        let a = EtaProductSpec::new(0, [(1, 2), (5, 3), (1, -2), (5, 1)]).unwrap();
        assert_eq!(a.factors(), &[EtaFactor { scale: 5, exponent: 4 }]);
        assert_eq!(EtaProductSpec::new(0, [(0, 1)]), Err(Error::InvalidScale));
    }

    #[test]
    fn tau_spec_small_values() {
        let s = eta_product(&EtaProductSpec::tau(24), 7);
        assert_eq!(ints(&s), vec![0, 1, -24, 252, -1472, 4830, -6048, -16744]);
    }

    #[test]
    fn empty_product_is_one() {
        let spec = EtaProductSpec::new(0, []).unwrap();
        assert_eq!(eta_product(&spec, 5), IntSeries::one(5));
    }

    #[test]
    fn regular_partitions() {
        let s = eta_product(&EtaProductSpec::regular(4).unwrap(), 6);
        assert_eq!(ints(&s), vec![1, 1, 2, 3, 4, 6, 9]);
    }

    #[test]
    fn delta_beyond_order() {
        let spec = EtaProductSpec::new(4, [(1, 1)]).unwrap();
        assert_eq!(eta_product(&spec, 2), IntSeries::zero(2));
        assert_eq!(eta_product_mod(&spec, 2, 5).unwrap(), ModSeries::zero(2, 5).unwrap());
    }

    #[test]
    fn modular_expansion_matches_reduction() {
        let spec = EtaProductSpec::new(1, [(1, -3), (7, 2), (2, 5)]).unwrap();
        for m in [2, 7, 25] {
            let exact = eta_product(&spec, 120).reduce_mod(m).unwrap();
            assert_eq!(eta_product_mod(&spec, 120, m).unwrap(), exact);
        }
    }

    #[test]
    fn eta_factor_matches_omega() {
        let s = eta_factor(1, 2000);
        for n in 0..=2000 {
            assert_eq!(s[n as usize], BigInt::from(omega(n)));
        }
    }

    #[test]
    fn parse_and_display() {
        let spec: EtaProductSpec = "1; 1^24".parse().unwrap();
        assert_eq!(spec, EtaProductSpec::tau(24));
        let r4: EtaProductSpec = " 0;  4^1   1^-1 ".parse().unwrap();
        assert_eq!(r4, EtaProductSpec::regular(4).unwrap());
        assert_eq!(r4.to_string(), "0; 1^-1 4^1");
        assert_eq!(r4.to_string().parse::<EtaProductSpec>().unwrap(), r4);
        assert_eq!("0;".parse::<EtaProductSpec>().unwrap(), EtaProductSpec::new(0, []).unwrap());
    }

    #[test]
    fn parse_errors_carry_positions() {
        let pos = |s: &str| match s.parse::<EtaProductSpec>() {
            Err(Error::SpecParse { pos, .. }) => pos,
            other => panic!("expected parse error, got {other:?}"),
        };
        assert_eq!(pos("0; 0^2"), 3);
        assert_eq!(pos("1 1^24"), 6);
        assert_eq!(pos("x; 1^2"), 0);
        assert_eq!(pos("0; 1^2 3"), 7);
        assert_eq!(pos("0; 2^q"), 5);
    }
}
