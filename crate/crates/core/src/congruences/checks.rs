use std::collections::BTreeSet;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::{Integer, Roots};

use super::{CheckInfo, Ctx, Scan, Status};
use crate::arith::{
    binom_exact, binom_mod2, binom_shifted_mod_l, is_prime, is_triangular, omega, omega_scaled,
    residue, residue_i64, sigma, triangular_terms, PentagonalTable,
};
use crate::error::{Error, Result};
use crate::partitions::{
    bounded_frequency_numbers, composition_weighted_numbers, composition_weighted_sum_enumerated,
    distinct_part_numbers, frequency_set_numbers,
};
use crate::series::{EtaProductSpec, IntSeries};

const Q: u64 = 300;

macro_rules! check {
    ($id:expr, $run:ident, $desc:expr, $claim:expr, [$($p:expr),*], $quick:expr, $full:expr) => {
        check!($id, $run, $desc, $claim, [$($p),*], $quick, $full, Status::Pass)
    };
    ($id:expr, $run:ident, $desc:expr, $claim:expr, [$($p:expr),*], $quick:expr, $full:expr, $expected:expr) => {
        CheckInfo {
            id: $id,
            description: $desc,
            claim: $claim,
            expected: $expected,
            params: &[$($p),*],
            quick_limit: $quick,
            full_limit: $full,
            run: $run,
        }
    };
}

pub(super) static CATALOG: &[CheckInfo] = &[
    check!("P2.1", p2_1,
        "tau_k(n) vanishes mod the prime k-1 when no pentagonal shift of n-1 is divisible by k-1; k in {3,4,6,8,12,24}",
        "k-1 prime, n-1-g != 0 (mod k-1) for all pentagonal g <= n-1  =>  tau_k(n) = 0 (mod k-1)",
        ["k"], Q, 1000),
    check!("P2.2", p2_2,
        "n tau_k(n+1) is divisible by |k|; k in +-2..+-30",
        "n tau_k(n+1) = 0 (mod |k|)",
        ["k"], Q, 1000),
    check!("P2.3", p2_3,
        "divisibility of tau_k on residue classes; k in {6,12,24}, tags k and d",
        "d | |k|, d < |k|, gcd(r, |k|/d) = 1  =>  tau_k(|k|m + dr + 1) = 0 (mod |k|/d)",
        ["k"], Q, 1000),
    check!("P2.4a", p2_4a,
        "audit of the five printed tau(24m+r+1) divisibility items; items 2, 4 and 5 are wrong and must fail",
        "tau(24m+r+1) = 0 mod 24 @ r in {1,5,7,11,13,17,19,23}; mod 12 @ {4,20}; mod 8 @ {3,9,6,15}; mod 6 @ {8,16}; mod 4 @ {12}",
        [], 50, 200, Status::Fail),
    check!("P2.4b", p2_4b,
        "tau(24m+r+1) divisibility as derived from P2.3 with k = 24",
        "tau(24m+r+1) = 0 mod 24 @ {1,5,7,11,13,17,19,23}; 12 @ {2,10,14,22}; 8 @ {3,9,15,21}; 6 @ {4,20}; 4 @ {6,18}; 3 @ {8,16}; 2 @ {12}",
        [], 50, 200),
    check!("T3.2", t3_2,
        "parity of tau_k against partitions with frequencies in A = {a : C(k,a) odd}; k in {6,14,24}",
        "tau_k(n+1) = F_A(n) (mod 2)",
        ["k"], Q, 2000),
    check!("T3.3", t3_3,
        "4-regular partition counts are odd exactly at triangular numbers",
        "R_4(n) odd  <=>  n = t(t+1)/2",
        [], Q, 2000),
    check!("E6", e6,
        "partitions with frequencies at most 3 as a convolution of distinct-part counts (exact)",
        "d_3(n) = sum_{s <= n/2} q(n-2s) q(s)",
        [], Q, 500),
    check!("T3.4a", t3_4a,
        "parity of tau_14 at odd arguments against 8-regular partitions",
        "tau_14(2n+1) = R_8(n) (mod 2)",
        [], Q, 2000),
    check!("T3.4b", t3_4b,
        "tau_6 at odd arguments is odd exactly at triangular n",
        "tau_6(2n+1) odd  <=>  n = t(t+1)/2",
        [], Q, 2000),
    check!("R-EVEN", r_even,
        "even-exponent tau is even at even arguments; k in 1..12",
        "tau_{2k}(2n) = 0 (mod 2)",
        ["k"], Q, 2000),
    check!("R-EWELL", r_ewell,
        "Ramanujan tau is odd only at odd squares",
        "tau(m) odd  =>  m is an odd square",
        [], Q, 5000),
    check!("T3.5", t3_5,
        "2^s-regular partitions against tau_{2^s - 1} mod 2; s in 1..5",
        "R_{2^s}(n) = tau_{2^s-1}(n+1) (mod 2)",
        ["s"], Q, 2000),
    check!("T3.6", t3_6,
        "Ramanujan tau mod 3 through 9-regular partitions",
        "tau(n+1) = R_9(n/3) (mod 3) if 3 | n, else 0",
        [], Q, 5000),
    check!("C3.6a", c3_6a,
        "tau(3n) vanishes mod 3; scans n with 3n <= limit",
        "tau(3n) = 0 (mod 3)",
        [], Q, 5000),
    check!("C3.6b", c3_6b,
        "9-regular partitions mod 3 through the divisor sum",
        "R_9(n) = sigma(3n+1) (mod 3)",
        [], Q, 5000),
    check!("T-MOD5", t_mod5,
        "Ramanujan tau mod 5 through 25-regular partitions (form 0) and the divisor-sum form (form 1)",
        "tau(n+1) = R_25(n) = (n+1) sigma(n+1) (mod 5)",
        [], Q, 5000),
    check!("T-MOD7", t_mod7,
        "tau mod 7 at series level (form 0) and as a triangular double sum (form 1)",
        "prod(1-q^m)^24 = prod(1-q^m)^3 prod(1-q^7m)^3 (mod 7)",
        [], Q, 2000),
    check!("C-MOD7", c_mod7,
        "tau(7n) vanishes mod 7; scans n with 7n <= limit",
        "tau(7n) = 0 (mod 7)",
        [], Q, 5000),
    check!("T-MOD11", t_mod11,
        "tau mod 11 at series level (form 0) and as a fourfold pentagonal sum (form 1)",
        "prod(1-q^m)^24 = prod(1-q^m)^2 prod(1-q^11m)^2 (mod 11)",
        [], Q, 2000),
    check!("T-MOD13", t_mod13,
        "tau mod 13 at series level (form 0) and as sum_{n = 13g_r + s} (-1)^r tau_11(s+1) (form 1)",
        "prod(1-q^m)^24 = prod(1-q^m)^11 prod(1-q^13m) (mod 13)",
        [], Q, 2000),
    check!("T-MOD17", t_mod17,
        "tau mod 17 at series level (form 0) and as sum_{n = 17g_r + s} (-1)^r tau_7(s+1) (form 1)",
        "prod(1-q^m)^24 = prod(1-q^m)^7 prod(1-q^17m) (mod 17)",
        [], Q, 2000),
    check!("T-MOD19", t_mod19,
        "tau mod 19 at series level (form 0) and as sum_{n = 19g_r + s} (-1)^r tau_5(s+1) (form 1)",
        "prod(1-q^m)^24 = prod(1-q^m)^5 prod(1-q^19m) (mod 19)",
        [], Q, 2000),
    check!("T-MOD23", t_mod23,
        "tau mod 23 at series level (form 0), as a double pentagonal sum (form 1), and vanishing on the non-residue classes (form 2)",
        "prod(1-q^m)^24 = prod(1-q^m) prod(1-q^23m) (mod 23); tau(23n+r) = 0 for r in {5,7,10,11,14,15,17,19,20,21,22}",
        [], Q, 2000),
    check!("T-MOD25", t_mod25,
        "tau mod 25 at series level (form 0) and as sum (-1)^{s+t} (2s+1) R_5(r) (form 1)",
        "prod(1-q^m)^24 = prod(1-q^5m)^5 / prod(1-q^m) (mod 25)",
        [], Q, 2000),
    check!("T-PS", t_ps,
        "tau_{p^s} mod p is supported on p^s times the pentagonal numbers; p in {2,3,5,7}, s in 1..3",
        "tau_{p^s}(n+1) = omega(n / p^s) (mod p), and 0 off multiples of p^s",
        ["p", "s"], Q, 1000),
    check!("T-2P", t_2p,
        "tau_{2p} mod p at series level (form 0), as a double pentagonal sum (form 1), and vanishing for p not dividing n (form 2)",
        "prod(1-q^m)^{2p} = prod(1-q^pm)^2 (mod p); p !| n  =>  tau_{2p}(n+1) = 0 (mod p)",
        ["p"], Q, 1000),
    check!("T-2P1", t_2p1,
        "tau_{2p+1} mod p at series level (form 0) and as a triple pentagonal sum over n = g_r + p(g_s + g_t) (form 1)",
        "prod(1-q^m)^{2p+1} = prod(1-q^m) prod(1-q^pm)^2 (mod p)",
        ["p"], Q, 1000),
    check!("T-P21", t_p21,
        "tau_{p^2+1} mod p at series level (form 0) and as a pentagonal sum over n = g_r + p^2 g_s (form 1)",
        "prod(1-q^m)^{p^2+1} = prod(1-q^m) prod(1-q^{p^2 m}) (mod p)",
        ["p"], Q, 1000),
    check!("T3.7", t3_7,
        "9-regular partitions mod 3 are invariant under n -> 4n+1 (form 0); iterated form for r, s <= 5 (form 1) and its closed values (form 2)",
        "R_9(4n+1) = R_9(n) (mod 3); R_9((r-1)4^{s-1} + (4^s-1)/3) = R_9(r) (mod 3)",
        [], Q, 2000),
    check!("T3.8", t3_8,
        "p-regular partitions against tau_{p-1} mod p; p in {2,3,5,7,11,13}",
        "R_p(n) = tau_{p-1}(n+1) (mod p)",
        ["p"], Q, 1000),
    check!("L4.1", l4_1,
        "C(n+k, k) mod l from n mod l alone, against exact binomials; l in {3,5,7,11,13,23}",
        "C(n+k, k) = (-1)^r C(l-k-1, r) (mod l) for r = n mod l <= l-k-1, else 0",
        ["l"], Q, 500),
    check!("T4.2", t4_2,
        "weighted compositions mod l: series level (form 0), sum over n+1 = t + ls (form 1), brute force for k <= 4, n <= 25 (form 2)",
        "prod(1-q^m)^{-k} = prod(1-q^m)^{l-k} / prod(1-q^lm) (mod l); sum p(a_1)...p(a_k) = sum_{n+1=t+ls} tau_{l-k}(t) p(s) (mod l)",
        ["l", "k"], Q, 300),
    check!("C4.2a", c4_2a,
        "weighted 2-compositions mod 3 through pentagonal weights",
        "sum_{a+b=n} p(a) p(b) = sum_{n = t+3s} omega(t) p(s) (mod 3)",
        [], Q, 300),
    check!("C4.2b", c4_2b,
        "weighted (l-3)-compositions vanish mod l off the residue set S; l in {5,7,11}",
        "n mod l not in S = {0} u {(-1)^r C(l-3, r) mod l}  =>  sum p(a_1)...p(a_{l-3}) = 0 (mod l)",
        ["l"], Q, 300),
    check!("CLASSIC-P", classic_p,
        "Ramanujan's partition congruences",
        "p(5n+4) = 0 (mod 5), p(7n+5) = 0 (mod 7), p(11n+6) = 0 (mod 11)",
        [], Q, 2000),
    check!("CLASSIC-TAU", classic_tau,
        "spot checks: multiplicativity for coprime m, n <= limit (form 0), Hecke at p^2 for p <= 7 (form 1), Deligne bound for p <= 97 (form 2)",
        "tau(mn) = tau(m) tau(n); tau(p^2) = tau(p)^2 - p^11; tau(p)^2 <= 4 p^11",
        [], 40, 40),
];

/// Order of the `τ_24` table a check needs at a given limit, so it can be
/// built once before checks run in parallel.
pub(super) fn tau24_order(id: &str, limit: u64) -> usize {
    let l = limit as usize;
    match id {
        "P2.4a" | "P2.4b" => 24 * l + 24,
        "CLASSIC-TAU" => (l * l).max(97),
        "P2.1" | "P2.2" | "P2.3" | "R-EWELL" | "T3.6" | "C3.6a" | "T-MOD5" | "T-MOD7" | "C-MOD7"
        | "T-MOD11" | "T-MOD13" | "T-MOD17" | "T-MOD19" | "T-MOD23" | "T-MOD25" => l,
        _ => 0,
    }
}

fn res(x: &BigInt, m: u64) -> u64 {
    residue(x, m)
}

fn bit(b: bool) -> u64 {
    b as u64
}

fn need_prime(p: i64, min: i64) -> Result<u64> {
    if p < min || !is_prime(p as u64) {
        return Err(Error::invalid(format!("{p} is not a prime >= {min}")));
    }
    Ok(p as u64)
}

fn need_positive(name: &str, v: i64) -> Result<u64> {
    if v < 1 {
        return Err(Error::invalid(format!("{name} must be positive, got {v}")));
    }
    Ok(v as u64)
}

type Sparse = Vec<(usize, u64)>;

fn pent(c: u64, order: usize, m: u64) -> Sparse {
    PentagonalTable::up_to(order as u64 / c)
        .terms()
        .into_iter()
        .map(|(g, s)| ((g * c) as usize, residue_i64(s, m)))
        .collect()
}

fn tri(c: u64, order: usize, m: u64) -> Sparse {
    triangular_terms(order as u64 / c)
        .into_iter()
        .map(|(t, w)| ((t * c) as usize, residue_i64(w, m)))
        .collect()
}

fn dense(s: &IntSeries, order: usize, m: u64) -> Sparse {
    (0..=order).map(|i| (i, res(&s[i], m))).collect()
}

/// Coefficients mod `m` of a product of explicit term lists, i.e. the sum
/// over all index tuples of the products of their weights.
fn stated_sum(factors: &[Sparse], order: usize, m: u64) -> Vec<u64> {
    let mut acc = vec![0u64; order + 1];
    acc[0] = 1;
    for f in factors {
        let mut next = vec![0u64; order + 1];
        for (i, &a) in acc.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for &(off, w) in f {
                if i + off > order {
                    break;
                }
                next[i + off] = (next[i + off] + a * w) % m;
            }
        }
        acc = next;
    }
    acc
}

fn tau24(ctx: &Ctx<'_>, order: usize) -> Result<Arc<IntSeries>> {
    ctx.tables.eta_power(24, order)
}

fn p2_1(ctx: &Ctx<'_>) -> Result<Scan> {
    let pent = PentagonalTable::up_to(ctx.limit);
    let mut scan = Scan::conditional(1, ctx.limit);
    for k in ctx.list("k", &[3, 4, 6, 8, 12, 24]) {
        let p = need_prime(k - 1, 2)?;
        let s = ctx.tables.eta_power(k, ctx.n())?;
        for n in 1..=ctx.limit {
            let hyp = pent
                .iter()
                .take_while(|e| e.value < n)
                .all(|e| (n - 1 - e.value) % p != 0);
            if hyp {
                scan.eq(n, res(&s[n as usize - 1], p), 0, &[("k", k)]);
            } else {
                scan.vacuous();
            }
        }
    }
    Ok(scan)
}

fn p2_2(ctx: &Ctx<'_>) -> Result<Scan> {
    let default: Vec<i64> = (2..=30).flat_map(|k| [k, -k]).collect();
    let mut scan = Scan::new(1, ctx.limit);
    for k in ctx.list("k", &default) {
        if k == 0 {
            return Err(Error::ZeroExponent);
        }
        let m = k.unsigned_abs();
        let s = ctx.tables.eta_power(k, ctx.n())?;
        for n in 1..=ctx.limit {
            scan.eq(n, res(&(&s[n as usize] * n), m), 0, &[("k", k)]);
        }
    }
    Ok(scan)
}

fn p2_3(ctx: &Ctx<'_>) -> Result<Scan> {
    let mut scan = Scan::conditional(1, ctx.limit);
    for k in ctx.list("k", &[6, 12, 24]) {
        let m = k.unsigned_abs();
        if m < 2 {
            return Err(Error::invalid("P2.3 needs |k| >= 2"));
        }
        let divisors: Vec<u64> = (1..m).filter(|d| m % d == 0).collect();
        let s = ctx.tables.eta_power(k, ctx.n())?;
        // n = |k|m' + dr with gcd(r, |k|/d) = 1 is the same as d | n, gcd(n/d, |k|/d) = 1
        for n in 1..=ctx.limit {
            let mut any = false;
            for &d in &divisors {
                if n % d == 0 && (n / d).gcd(&(m / d)) == 1 {
                    any = true;
                    scan.eq(n, res(&s[n as usize], m / d), 0, &[("k", k), ("d", d as i64)]);
                }
            }
            if !any {
                scan.vacuous();
            }
        }
    }
    Ok(scan)
}

type Items = &'static [(i64, u64, &'static [u64])];

const PRINTED: Items = &[
    (1, 24, &[1, 5, 7, 11, 13, 17, 19, 23]),
    (2, 12, &[4, 20]),
    (3, 8, &[3, 9, 6, 15]),
    (4, 6, &[8, 16]),
    (5, 4, &[12]),
];

const DERIVED: Items = &[
    (1, 24, &[1, 5, 7, 11, 13, 17, 19, 23]),
    (2, 12, &[2, 10, 14, 22]),
    (3, 8, &[3, 9, 15, 21]),
    (4, 6, &[4, 20]),
    (5, 4, &[6, 18]),
    (6, 3, &[8, 16]),
    (7, 2, &[12]),
];

fn prop24(ctx: &Ctx<'_>, items: Items) -> Result<(Scan, BTreeSet<i64>)> {
    let s = tau24(ctx, 24 * ctx.n() + 24)?;
    let mut scan = Scan::new(0, ctx.limit);
    let mut failing = BTreeSet::new();
    for m in 0..=ctx.limit {
        for &(item, modulus, rs) in items {
            for &r in rs {
                let n = 24 * m + r + 1;
                let tags = [("item", item), ("modulus", modulus as i64), ("m", m as i64), ("r", r as i64)];
                if !scan.eq(n, res(&s[n as usize - 1], modulus), 0, &tags) {
                    failing.insert(item);
                }
            }
        }
    }
    Ok((scan, failing))
}

fn p2_4a(ctx: &Ctx<'_>) -> Result<Scan> {
    let (mut scan, failing) = prop24(ctx, PRINTED)?;
    scan.audit = Some(failing == BTreeSet::from([2, 4, 5]));
    Ok(scan)
}

fn p2_4b(ctx: &Ctx<'_>) -> Result<Scan> {
    Ok(prop24(ctx, DERIVED)?.0)
}

fn t3_2(ctx: &Ctx<'_>) -> Result<Scan> {
    let n = ctx.n();
    let mut scan = Scan::new(0, ctx.limit);
    for k in ctx.list("k", &[6, 14, 24]) {
        let ku = need_positive("k", k)?;
        let set: BTreeSet<u64> = (1..=ku).filter(|&a| binom_mod2(ku, a) == 1).collect();
        let f = frequency_set_numbers(&set, n)?;
        let s = ctx.tables.eta_power(k, n)?;
        for i in 0..=n {
            scan.eq(i as u64, res(&s[i], 2), res(&f[i], 2), &[("k", k)]);
        }
    }
    Ok(scan)
}

fn t3_3(ctx: &Ctx<'_>) -> Result<Scan> {
    let r4 = ctx.tables.regular(4, ctx.n())?;
    let mut scan = Scan::new(1, ctx.limit);
    for n in 1..=ctx.limit {
        scan.eq(n, res(&r4[n as usize], 2), bit(is_triangular(n)), &[]);
    }
    Ok(scan)
}

fn e6(ctx: &Ctx<'_>) -> Result<Scan> {
    let n = ctx.n();
    let d3 = bounded_frequency_numbers(3, n)?;
    let q = distinct_part_numbers(n);
    let mut scan = Scan::new(0, ctx.limit);
    for i in 0..=n {
        let rhs: BigInt = (0..=i / 2).map(|s| &q[i - 2 * s] * &q[s]).sum();
        scan.eq(i as u64, d3[i].clone(), rhs, &[]);
    }
    Ok(scan)
}

fn t3_4a(ctx: &Ctx<'_>) -> Result<Scan> {
    let n = ctx.n();
    let s = ctx.tables.eta_power(14, 2 * n)?;
    let r8 = ctx.tables.regular(8, n)?;
    let mut scan = Scan::new(0, ctx.limit);
    for i in 0..=n {
        scan.eq(i as u64, res(&s[2 * i], 2), res(&r8[i], 2), &[]);
    }
    Ok(scan)
}

fn t3_4b(ctx: &Ctx<'_>) -> Result<Scan> {
    let n = ctx.n();
    let s = ctx.tables.eta_power(6, 2 * n)?;
    let mut scan = Scan::new(0, ctx.limit);
    for i in 0..=n {
        scan.eq(i as u64, res(&s[2 * i], 2), bit(is_triangular(i as u64)), &[]);
    }
    Ok(scan)
}

fn r_even(ctx: &Ctx<'_>) -> Result<Scan> {
    let n = ctx.n();
    let mut scan = Scan::new(1, ctx.limit);
    for k in ctx.list("k", &(1..=12).collect::<Vec<_>>()) {
        need_positive("k", k)?;
        let s = ctx.tables.eta_power(2 * k, 2 * n - 1)?;
        for i in 1..=n {
            scan.eq(i as u64, res(&s[2 * i - 1], 2), 0, &[("k", k)]);
        }
    }
    Ok(scan)
}

fn r_ewell(ctx: &Ctx<'_>) -> Result<Scan> {
    let s = tau24(ctx, ctx.n())?;
    let mut scan = Scan::conditional(1, ctx.limit);
    for m in 1..=ctx.limit {
        if res(&s[m as usize - 1], 2) == 1 {
            let odd_square = m % 2 == 1 && m.sqrt().pow(2) == m;
            scan.eq(m, bit(odd_square), 1, &[]);
        } else {
            scan.vacuous();
        }
    }
    Ok(scan)
}

fn t3_5(ctx: &Ctx<'_>) -> Result<Scan> {
    let n = ctx.n();
    let mut scan = Scan::new(0, ctx.limit);
    for s in ctx.list("s", &[1, 2, 3, 4, 5]) {
        if !(1..=12).contains(&s) {
            return Err(Error::invalid(format!("s must be in 1..=12, got {s}")));
        }
        let t = 1u64 << s;
        let r = ctx.tables.regular(t, n)?;
        let tau = ctx.tables.eta_power(t as i64 - 1, n)?;
        for i in 0..=n {
            scan.eq(i as u64, res(&r[i], 2), res(&tau[i], 2), &[("s", s)]);
        }
    }
    Ok(scan)
}

fn t3_6(ctx: &Ctx<'_>) -> Result<Scan> {
    let n = ctx.n();
    let s = tau24(ctx, n)?;
    let r9 = ctx.tables.regular(9, n / 3)?;
    let mut scan = Scan::new(0, ctx.limit);
    for i in 0..=n {
        let rhs = if i % 3 == 0 { res(&r9[i / 3], 3) } else { 0 };
        scan.eq(i as u64, res(&s[i], 3), rhs, &[]);
    }
    Ok(scan)
}

fn c3_6a(ctx: &Ctx<'_>) -> Result<Scan> {
    let hi = ctx.n() / 3;
    let s = tau24(ctx, 3 * hi)?;
    let mut scan = Scan::new(1, hi as u64);
    for i in 1..=hi {
        scan.eq(i as u64, res(&s[3 * i - 1], 3), 0, &[]);
    }
    Ok(scan)
}

fn c3_6b(ctx: &Ctx<'_>) -> Result<Scan> {
    let r9 = ctx.tables.regular(9, ctx.n())?;
    let mut scan = Scan::new(0, ctx.limit);
    for i in 0..=ctx.limit {
        scan.eq(i, res(&r9[i as usize], 3), sigma(3 * i + 1)? % 3, &[]);
    }
    Ok(scan)
}

fn t_mod5(ctx: &Ctx<'_>) -> Result<Scan> {
    let n = ctx.n();
    let s = tau24(ctx, n)?;
    let r25 = ctx.tables.regular(25, n)?;
    let mut scan = Scan::new(0, ctx.limit);
    for i in 0..=ctx.limit {
        let r = res(&r25[i as usize], 5);
        scan.eq(i, res(&s[i as usize], 5), r, &[("form", 0)]);
        scan.eq(i, r, (i + 1) * sigma(i + 1)? % 5, &[("form", 1)]);
    }
    Ok(scan)
}

/// `τ` mod `m` against an eta product (form 0) and an explicit sum (form 1).
fn tau_mod(ctx: &Ctx<'_>, m: u64, rhs: &[(u64, i64)], stated: &[Sparse]) -> Result<(Scan, Arc<IntSeries>)> {
    let n = ctx.n();
    let tau = tau24(ctx, n)?;
    let spec = EtaProductSpec::new(0, rhs.iter().copied())?;
    let rhs = ctx.tables.modular(&spec, n, m)?;
    let sum = stated_sum(stated, n, m);
    let mut scan = Scan::new(0, ctx.limit);
    for i in 0..=n {
        let lhs = res(&tau[i], m);
        scan.eq(i as u64, lhs, rhs[i], &[("form", 0)]);
        scan.eq(i as u64, lhs, sum[i], &[("form", 1)]);
    }
    Ok((scan, tau))
}

fn t_mod7(ctx: &Ctx<'_>) -> Result<Scan> {
    let n = ctx.n();
    Ok(tau_mod(ctx, 7, &[(1, 3), (7, 3)], &[tri(1, n, 7), tri(7, n, 7)])?.0)
}

fn c_mod7(ctx: &Ctx<'_>) -> Result<Scan> {
    let hi = ctx.n() / 7;
    let s = tau24(ctx, 7 * hi)?;
    let mut scan = Scan::new(1, hi as u64);
    for i in 1..=hi {
        scan.eq(i as u64, res(&s[7 * i - 1], 7), 0, &[]);
    }
    Ok(scan)
}

fn t_mod11(ctx: &Ctx<'_>) -> Result<Scan> {
    let n = ctx.n();
    let stated = [pent(1, n, 11), pent(1, n, 11), pent(11, n, 11), pent(11, n, 11)];
    Ok(tau_mod(ctx, 11, &[(1, 2), (11, 2)], &stated)?.0)
}

fn tau_mod_prime(ctx: &Ctx<'_>, p: u64, j: i64) -> Result<Scan> {
    let n = ctx.n();
    let tj = ctx.tables.eta_power(j, n)?;
    let stated = [pent(p, n, p), dense(&tj, n, p)];
    Ok(tau_mod(ctx, p, &[(1, j), (p, 1)], &stated)?.0)
}

fn t_mod13(ctx: &Ctx<'_>) -> Result<Scan> {
    tau_mod_prime(ctx, 13, 11)
}

fn t_mod17(ctx: &Ctx<'_>) -> Result<Scan> {
    tau_mod_prime(ctx, 17, 7)
}

fn t_mod19(ctx: &Ctx<'_>) -> Result<Scan> {
    tau_mod_prime(ctx, 19, 5)
}

const NONRESIDUES_23: [u64; 11] = [5, 7, 10, 11, 14, 15, 17, 19, 20, 21, 22];

fn t_mod23(ctx: &Ctx<'_>) -> Result<Scan> {
    let n = ctx.n();
    let (mut scan, tau) = tau_mod(ctx, 23, &[(1, 1), (23, 1)], &[pent(1, n, 23), pent(23, n, 23)])?;
    for i in 0..=n {
        let r = (i as u64 + 1) % 23;
        if NONRESIDUES_23.contains(&r) {
            scan.eq(i as u64, res(&tau[i], 23), 0, &[("form", 2), ("r", r as i64)]);
        }
    }
    Ok(scan)
}

fn t_mod25(ctx: &Ctx<'_>) -> Result<Scan> {
    let n = ctx.n();
    let r5 = ctx.tables.regular(5, n)?;
    let stated = [dense(&r5, n, 25), tri(5, n, 25), pent(5, n, 25)];
    Ok(tau_mod(ctx, 25, &[(5, 5), (1, -1)], &stated)?.0)
}

fn t_ps(ctx: &Ctx<'_>) -> Result<Scan> {
    let n = ctx.n();
    let mut scan = Scan::new(0, ctx.limit);
    for p in ctx.list("p", &[2, 3, 5, 7]) {
        let pu = need_prime(p, 2)?;
        for s in ctx.list("s", &[1, 2, 3]) {
            let s = need_positive("s", s)? as u32;
            let e = pu
                .checked_pow(s)
                .filter(|&e| e <= 4096)
                .ok_or_else(|| Error::invalid("p^s must be at most 4096"))?;
            let lhs = ctx.tables.modular(&EtaProductSpec::eta_power(e as i64), n, pu)?;
            for i in 0..=n {
                let rhs = residue_i64(omega_scaled(i as u64, e), pu);
                scan.eq(i as u64, lhs[i], rhs, &[("p", p), ("s", s as i64)]);
            }
        }
    }
    Ok(scan)
}

/// `∏(1−q^m)^k` mod `p` against an eta product (form 0) and an explicit sum (form 1).
fn power_mod_p(
    ctx: &Ctx<'_>,
    scan: &mut Scan,
    p: i64,
    k: i64,
    rhs: &[(u64, i64)],
    stated: &[Sparse],
) -> Result<Arc<crate::series::ModSeries>> {
    let n = ctx.n();
    let pu = p as u64;
    let lhs = ctx.tables.modular(&EtaProductSpec::eta_power(k), n, pu)?;
    let rhs = ctx.tables.modular(&EtaProductSpec::new(0, rhs.iter().copied())?, n, pu)?;
    let sum = stated_sum(stated, n, pu);
    for i in 0..=n {
        scan.eq(i as u64, lhs[i], rhs[i], &[("form", 0), ("p", p)]);
        scan.eq(i as u64, lhs[i], sum[i], &[("form", 1), ("p", p)]);
    }
    Ok(lhs)
}

const SMALL_PRIMES: [i64; 5] = [3, 5, 7, 11, 13];

fn t_2p(ctx: &Ctx<'_>) -> Result<Scan> {
    let n = ctx.n();
    let mut scan = Scan::new(0, ctx.limit);
    for p in ctx.list("p", &SMALL_PRIMES) {
        let pu = need_prime(p, 2)?;
        let stated = [pent(pu, n, pu), pent(pu, n, pu)];
        let lhs = power_mod_p(ctx, &mut scan, p, 2 * p, &[(pu, 2)], &stated)?;
        for i in (0..=n).filter(|&i| i as u64 % pu != 0) {
            scan.eq(i as u64, lhs[i], 0, &[("form", 2), ("p", p)]);
        }
    }
    Ok(scan)
}

fn t_2p1(ctx: &Ctx<'_>) -> Result<Scan> {
    let n = ctx.n();
    let mut scan = Scan::new(0, ctx.limit);
    for p in ctx.list("p", &SMALL_PRIMES) {
        let pu = need_prime(p, 2)?;
        let stated = [pent(1, n, pu), pent(pu, n, pu), pent(pu, n, pu)];
        power_mod_p(ctx, &mut scan, p, 2 * p + 1, &[(1, 1), (pu, 2)], &stated)?;
    }
    Ok(scan)
}

fn t_p21(ctx: &Ctx<'_>) -> Result<Scan> {
    let n = ctx.n();
    let mut scan = Scan::new(0, ctx.limit);
    for p in ctx.list("p", &SMALL_PRIMES) {
        let pu = need_prime(p, 2)?;
        if p > 63 {
            return Err(Error::invalid("p must be at most 63"));
        }
        let stated = [pent(1, n, pu), pent(pu * pu, n, pu)];
        power_mod_p(ctx, &mut scan, p, p * p + 1, &[(1, 1), (pu * pu, 1)], &stated)?;
    }
    Ok(scan)
}

fn t3_7(ctx: &Ctx<'_>) -> Result<Scan> {
    let n = ctx.n();
    let idx = |r: u64, s: u32| (r - 1) * 4u64.pow(s - 1) + (4u64.pow(s) - 1) / 3;
    let order = (4 * n + 1).max(idx(5, 5) as usize);
    let r9 = ctx.tables.regular(9, order)?;
    let mut scan = Scan::new(0, ctx.limit);
    for i in 0..=n {
        scan.eq(i as u64, res(&r9[4 * i + 1], 3), res(&r9[i], 3), &[("form", 0)]);
    }
    for r in 1..=5u64 {
        for s in 1..=5u32 {
            let j = idx(r, s);
            let lhs = res(&r9[j as usize], 3);
            let tags = [("r", r as i64), ("s", s as i64)];
            scan.eq(j, lhs, res(&r9[r as usize], 3), &[("form", 1), tags[0], tags[1]]);
            if r <= 3 {
                scan.eq(j, lhs, [1, 2, 0][r as usize - 1], &[("form", 2), tags[0], tags[1]]);
            }
        }
    }
    Ok(scan)
}

fn t3_8(ctx: &Ctx<'_>) -> Result<Scan> {
    let n = ctx.n();
    let mut scan = Scan::new(0, ctx.limit);
    for p in ctx.list("p", &[2, 3, 5, 7, 11, 13]) {
        let pu = need_prime(p, 2)?;
        let r = ctx.tables.regular(pu, n)?;
        let tau = ctx.tables.eta_power(p - 1, n)?;
        for i in 0..=n {
            scan.eq(i as u64, res(&r[i], pu), res(&tau[i], pu), &[("p", p)]);
        }
    }
    Ok(scan)
}

fn l4_1(ctx: &Ctx<'_>) -> Result<Scan> {
    let mut scan = Scan::new(0, ctx.limit);
    for l in ctx.list("l", &[3, 5, 7, 11, 13, 23]) {
        let lu = need_prime(l, 3)?;
        for n in 0..=ctx.limit {
            for k in 1..lu {
                let exact = residue(&binom_exact(n + k, k as i64), lu);
                scan.eq(n, binom_shifted_mod_l(n, k, lu)?, exact, &[("l", l), ("k", k as i64)]);
            }
        }
    }
    Ok(scan)
}

const T42_PAIRS: [(i64, i64); 7] = [(3, 2), (5, 2), (5, 3), (7, 4), (7, 5), (11, 8), (13, 10)];

fn t4_2(ctx: &Ctx<'_>) -> Result<Scan> {
    let pairs = match (ctx.params.get("l"), ctx.params.get("k")) {
        (None, None) => T42_PAIRS.to_vec(),
        (Some(&l), Some(&k)) => vec![(l, k)],
        _ => return Err(Error::invalid("T4.2 takes l and k together")),
    };
    let n = ctx.n();
    let p = ctx.tables.eta_power(-1, n)?;
    let mut scan = Scan::new(0, ctx.limit);
    for (l, k) in pairs {
        let lu = need_prime(l, 3)?;
        if k < 1 || k >= l {
            return Err(Error::invalid(format!("k must satisfy 1 <= k < l, got k = {k}")));
        }
        let lhs = ctx.tables.modular(&EtaProductSpec::eta_power(-k), n, lu)?;
        let rhs = ctx.tables.modular(&EtaProductSpec::new(0, [(1, l - k), (lu, -1)])?, n, lu)?;
        let comp = composition_weighted_numbers(k as u32, n)?;
        let tau = ctx.tables.eta_power(l - k, n)?;
        let pl: Vec<u64> = p.coeffs()[..=n].iter().map(|v| res(v, lu)).collect();
        let tl: Vec<u64> = tau.coeffs()[..=n].iter().map(|v| res(v, lu)).collect();
        let tags = |form: i64| [("form", form), ("l", l), ("k", k)];
        for i in 0..=n {
            scan.eq(i as u64, lhs[i], rhs[i], &tags(0));
            // n + 1 = t + l s with τ_{l−k}(t) at series index t − 1 = i − l s
            let stated = (0..=i / lu as usize).fold(0, |acc, s| (acc + tl[i - lu as usize * s] * pl[s]) % lu);
            scan.eq(i as u64, res(&comp[i], lu), stated, &tags(1));
            if k <= 4 && i <= 25 {
                scan.eq(i as u64, composition_weighted_sum_enumerated(k as u32, i)?, comp[i].clone(), &tags(2));
            }
        }
    }
    Ok(scan)
}

fn c4_2a(ctx: &Ctx<'_>) -> Result<Scan> {
    let n = ctx.n();
    let comp = composition_weighted_numbers(2, n)?;
    let p = ctx.tables.eta_power(-1, n)?;
    let mut scan = Scan::new(0, ctx.limit);
    for i in 0..=n {
        let rhs = (0..=i / 3).fold(0, |acc, s| {
            (acc + residue_i64(omega((i - 3 * s) as u64), 3) * res(&p[s], 3)) % 3
        });
        scan.eq(i as u64, res(&comp[i], 3), rhs, &[]);
    }
    Ok(scan)
}

fn c4_2b(ctx: &Ctx<'_>) -> Result<Scan> {
    let n = ctx.n();
    let mut scan = Scan::conditional(0, ctx.limit);
    for l in ctx.list("l", &[5, 7, 11]) {
        let lu = need_prime(l, 5)?;
        let mut allowed: BTreeSet<u64> = BTreeSet::from([0]);
        for r in 0..=(lu - 3) / 2 {
            let c = binom_exact(lu - 3, r as i64);
            allowed.insert(residue(&if r % 2 == 0 { c } else { -c }, lu));
        }
        let comp = composition_weighted_numbers(lu as u32 - 3, n)?;
        for i in 0..=n {
            if allowed.contains(&(i as u64 % lu)) {
                scan.vacuous();
            } else {
                scan.eq(i as u64, res(&comp[i], lu), 0, &[("l", l)]);
            }
        }
    }
    Ok(scan)
}

fn classic_p(ctx: &Ctx<'_>) -> Result<Scan> {
    let p = ctx.tables.eta_power(-1, ctx.n())?;
    let mut scan = Scan::new(0, ctx.limit);
    for (m, r) in [(5u64, 4u64), (7, 5), (11, 6)] {
        for j in (r..=ctx.limit).step_by(m as usize) {
            scan.eq(j, res(&p[j as usize], m), 0, &[("modulus", m as i64)]);
        }
    }
    Ok(scan)
}

fn classic_tau(ctx: &Ctx<'_>) -> Result<Scan> {
    let b = ctx.limit;
    let s = tau24(ctx, ((b * b) as usize).max(97))?;
    let tau = |t: u64| &s[t as usize - 1];
    let mut scan = Scan::new(1, b);
    for x in 1..=b {
        for y in x..=b {
            if x.gcd(&y) == 1 {
                scan.eq(x * y, tau(x * y).clone(), tau(x) * tau(y), &[("form", 0), ("a", x as i64), ("b", y as i64)]);
            }
        }
    }
    for p in [2u64, 3, 5, 7] {
        let rhs = tau(p) * tau(p) - BigInt::from(p).pow(11);
        scan.eq(p * p, tau(p * p).clone(), rhs, &[("form", 1), ("p", p as i64)]);
    }
    for p in (2..=97u64).filter(|&p| is_prime(p)) {
        let lhs = tau(p) * tau(p);
        let bound = BigInt::from(p).pow(11) * 4u32;
        let ok = lhs <= bound;
        scan.record(p, lhs, bound, ok, &[("form", 2), ("p", p as i64)]);
    }
    Ok(scan)
}
