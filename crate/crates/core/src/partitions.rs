//! Partition counting and constrained enumeration.

use std::collections::BTreeSet;
use std::sync::RwLock;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::arith::PentagonalTable;
use crate::error::{Error, Result};
use crate::series::{eta_product, EtaProductSpec, IntSeries};

/// A partition in frequency form `a₁^{f₁} ⋯ a_r^{f_r}`, parts strictly decreasing.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct PartitionShape {
    pairs: Vec<(u64, u64)>,
}

impl PartitionShape {
    pub fn new(pairs: Vec<(u64, u64)>) -> Result<Self> {
        if pairs.iter().any(|&(a, f)| a == 0 || f == 0) {
            return Err(Error::invalid("parts and frequencies must be positive"));
        }
        if pairs.windows(2).any(|w| w[0].0 <= w[1].0) {
            return Err(Error::invalid("parts must be strictly decreasing"));
        }
        Ok(PartitionShape { pairs })
    }

    pub fn pairs(&self) -> &[(u64, u64)] {
        &self.pairs
    }

    pub fn total(&self) -> u64 {
        self.pairs.iter().map(|&(a, f)| a * f).sum()
    }

    pub fn frequencies(&self) -> impl Iterator<Item = u64> + '_ {
        self.pairs.iter().map(|&(_, f)| f)
    }

    /// The non-increasing sequence of parts.
    pub fn parts(&self) -> Vec<u64> {
        self.pairs
            .iter()
            .flat_map(|&(a, f)| std::iter::repeat_n(a, f as usize))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FrequencyConstraint {
    Unconstrained,
    MaxFrequency(u64),
    FrequencySet(BTreeSet<u64>),
    DistinctParts,
    NoPartDivisibleBy(u64),
}

impl FrequencyConstraint {
    pub fn frequency_set(set: impl IntoIterator<Item = u64>) -> Result<Self> {
        let c = FrequencyConstraint::FrequencySet(set.into_iter().collect());
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            FrequencyConstraint::MaxFrequency(0) => Err(Error::invalid("maximum frequency must be positive")),
            FrequencyConstraint::NoPartDivisibleBy(t) if *t < 2 => {
                Err(Error::invalid("regularity parameter must be at least 2"))
            }
            FrequencyConstraint::FrequencySet(a) if a.is_empty() || a.contains(&0) => {
                Err(Error::invalid("frequency set must be nonempty and positive"))
            }
            _ => Ok(()),
        }
    }

    fn part_allowed(&self, a: u64) -> bool {
        match self {
            FrequencyConstraint::NoPartDivisibleBy(t) => a % t != 0,
            _ => true,
        }
    }

    fn frequency_allowed(&self, f: u64) -> bool {
        match self {
            FrequencyConstraint::MaxFrequency(t) => f <= *t,
            FrequencyConstraint::FrequencySet(a) => a.contains(&f),
            FrequencyConstraint::DistinctParts => f == 1,
            _ => true,
        }
    }
}

/// Streams the partitions of `n` satisfying `constraint` in reverse
/// lexicographic order of their part sequences.
pub fn enum_partitions(n: u64, constraint: FrequencyConstraint) -> Result<Partitions> {
    constraint.validate()?;
    Ok(Partitions { n, constraint, stack: Vec::new(), rem: n, started: false, done: false })
}

pub struct Partitions {
    n: u64,
    constraint: FrequencyConstraint,
    stack: Vec<(u64, u64)>,
    rem: u64,
    started: bool,
    done: bool,
}

impl Partitions {
    /// First admissible `(part, frequency)` at the current level, strictly
    /// after `after` in the (part desc, frequency desc) order.
    fn next_choice(&self, max_part: u64, after: Option<(u64, u64)>) -> Option<(u64, u64)> {
        let rem = self.rem;
        let top = max_part.min(rem);
        let (first_part, freq_cap) = match after {
            Some((a, f)) => (a, Some(f)),
            None => (top, None),
        };
        for a in (1..=first_part).rev() {
            if !self.constraint.part_allowed(a) {
                continue;
            }
            let mut f_hi = rem / a;
            if a == first_part {
                if let Some(f) = freq_cap {
                    f_hi = f_hi.min(f.saturating_sub(1));
                }
            }
            for f in (1..=f_hi).rev() {
                // parts equal to 1 must finish the partition
                if a == 1 && f != rem {
                    continue;
                }
                if self.constraint.frequency_allowed(f) {
                    return Some((a, f));
                }
            }
        }
        None
    }
}

impl Iterator for Partitions {
    type Item = PartitionShape;

    fn next(&mut self) -> Option<PartitionShape> {
        if self.done {
            return None;
        }
        let mut resume = None;
        if !self.started {
            self.started = true;
            if self.n == 0 {
                self.done = true;
                return Some(PartitionShape::default());
            }
        } else {
            let last = self.stack.pop()?;
            self.rem += last.0 * last.1;
            resume = Some(last);
        }
        loop {
            let max_part = self.stack.last().map_or(self.n, |&(a, _)| a - 1);
            match self.next_choice(max_part, resume) {
                Some((a, f)) => {
                    self.stack.push((a, f));
                    self.rem -= a * f;
                    resume = None;
                    if self.rem == 0 {
                        return Some(PartitionShape { pairs: self.stack.clone() });
                    }
                }
                None => match self.stack.pop() {
                    Some(last) => {
                        self.rem += last.0 * last.1;
                        resume = Some(last);
                    }
                    None => {
                        self.done = true;
                        return None;
                    }
                },
            }
        }
    }
}

/// `p(0), …, p(max_n)` by the pentagonal recurrence
/// `p(n) = Σ_{g>0} −ω(g) p(n − g)`.
pub fn partition_numbers(max_n: usize) -> Vec<BigInt> {
    let mut p = Vec::with_capacity(max_n + 1);
    p.push(BigInt::one());
    extend_partition_numbers(&mut p, max_n);
    p
}

fn extend_partition_numbers(p: &mut Vec<BigInt>, max_n: usize) {
    let offsets: Vec<(usize, i64)> = PentagonalTable::up_to(max_n as u64)
        .iter()
        .skip(1)
        .map(|e| (e.value as usize, e.sign))
        .collect();
    for n in p.len()..=max_n {
        let mut acc = BigInt::zero();
        for &(g, sign) in &offsets {
            if g > n {
                break;
            }
            if sign > 0 {
                acc -= &p[n - g];
            } else {
                acc += &p[n - g];
            }
        }
        p.push(acc);
    }
}

static P_TABLE: RwLock<Vec<BigInt>> = RwLock::new(Vec::new());

/// `p(n)`, served from a process-wide table that only ever grows.
pub fn p_count(n: usize) -> BigInt {
    if let Some(v) = P_TABLE.read().expect("p table poisoned").get(n) {
        return v.clone();
    }
    let mut table = P_TABLE.write().expect("p table poisoned");
    if table.is_empty() {
        table.push(BigInt::one());
    }
    extend_partition_numbers(&mut table, n);
    table[n].clone()
}

/// Partitions into distinct parts, from the product `∏(1 + q^m)`.
pub fn distinct_part_numbers(max_n: usize) -> Vec<BigInt> {
    let mut a = vec![BigInt::zero(); max_n + 1];
    a[0] = BigInt::one();
    for m in 1..=max_n {
        for i in (m..=max_n).rev() {
            let (lo, hi) = a.split_at_mut(i);
            hi[0] += &lo[i - m];
        }
    }
    a
}

pub fn q_distinct(n: usize) -> BigInt {
    distinct_part_numbers(n).swap_remove(n)
}

/// `R_t(0), …, R_t(max_n)` from `∏(1 − q^{tm})/(1 − q^m)`.
pub fn regular_numbers(t: u64, max_n: usize) -> Result<Vec<BigInt>> {
    if t < 2 {
        return Err(Error::invalid("t-regular partitions need t >= 2"));
    }
    Ok(eta_product(&EtaProductSpec::regular(t)?, max_n).into_coeffs())
}

pub fn regular_count(t: u64, n: usize) -> Result<BigInt> {
    Ok(regular_numbers(t, n)?.swap_remove(n))
}

/// Partitions whose frequencies all lie in `set`, from the product
/// `∏_m (1 + Σ_{a∈A} q^{am})`.
pub fn frequency_set_numbers(set: &BTreeSet<u64>, max_n: usize) -> Result<Vec<BigInt>> {
    FrequencyConstraint::FrequencySet(set.clone()).validate()?;
    let freqs: Vec<usize> = set.iter().map(|&a| a as usize).collect();
    let mut c = vec![BigInt::zero(); max_n + 1];
    c[0] = BigInt::one();
    for m in 1..=max_n {
        if freqs[0] * m > max_n {
            break;
        }
        for i in (1..=max_n).rev() {
            let (lo, hi) = c.split_at_mut(i);
            for &a in &freqs {
                let off = a * m;
                if off > i {
                    break;
                }
                hi[0] += &lo[i - off];
            }
        }
    }
    Ok(c)
}

/// `F_A(n)`. Small frequency sets go through the product expansion; anything
/// larger is counted by enumeration.
pub fn frequency_set_count(set: &BTreeSet<u64>, n: usize) -> Result<BigInt> {
    let max = set.iter().next_back().copied().unwrap_or(0);
    if max.saturating_mul(set.len() as u64) <= 4096 {
        Ok(frequency_set_numbers(set, n)?.swap_remove(n))
    } else {
        frequency_set_count_enumerated(set, n)
    }
}

pub fn frequency_set_count_enumerated(set: &BTreeSet<u64>, n: usize) -> Result<BigInt> {
    let it = enum_partitions(n as u64, FrequencyConstraint::FrequencySet(set.clone()))?;
    Ok(BigInt::from(it.count()))
}

/// `d_t(0), …, d_t(max_n)`: partitions with every frequency at most `t`.
pub fn bounded_frequency_numbers(t: u64, max_n: usize) -> Result<Vec<BigInt>> {
    if t == 0 {
        return Err(Error::invalid("frequency bound must be positive"));
    }
    frequency_set_numbers(&(1..=t).collect(), max_n)
}

pub fn bounded_frequency_count(t: u64, n: usize) -> Result<BigInt> {
    Ok(bounded_frequency_numbers(t, n)?.swap_remove(n))
}

/// `Σ p(a₁)⋯p(a_k)` over weak compositions of each `n ≤ max_n`, as the k-th
/// power of the partition generating function.
pub fn composition_weighted_numbers(k: u32, max_n: usize) -> Result<Vec<BigInt>> {
    if k == 0 {
        return Err(Error::invalid("composition length must be positive"));
    }
    let p = IntSeries::new(partition_numbers(max_n), max_n)?;
    Ok(p.pow(k as i64)?.into_coeffs())
}

pub fn composition_weighted_sum(k: u32, n: usize) -> Result<BigInt> {
    Ok(composition_weighted_numbers(k, n)?.swap_remove(n))
}

/// The same sum by walking every weak composition explicitly; exponential,
/// meant for small cross-checks.
pub fn composition_weighted_sum_enumerated(k: u32, n: usize) -> Result<BigInt> {
    if k == 0 {
        return Err(Error::invalid("composition length must be positive"));
    }
    let p = partition_numbers(n);
    fn walk(p: &[BigInt], slots: u32, rem: usize, acc: &BigInt, total: &mut BigInt) {
        if slots == 1 {
            *total += acc * &p[rem];
            return;
        }
        for a in 0..=rem {
            walk(p, slots - 1, rem - a, &(acc * &p[a]), total);
        }
    }
    let mut total = BigInt::zero();
    walk(&p, k, n, &BigInt::one(), &mut total);
    Ok(total)
}
