//! Numerics behind the lower bound for the major arcs with `k` powers of two:
//! the prime product `C₁`, exponential sums over the powers of 2 modulo
//! `15015`, exact residue counts, and the final choice of `k`.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{mult_order2, nth_prime, primes_up_to};
use crate::error::{domain, resource, Result};
use crate::interval::{CInterval, RInterval};
use crate::localsums::a_of;
use crate::powers2::power_sum_distribution;
use crate::series::singular_series_batch;
use crate::ExactRational;

/// `∏_{3<p<14} p`.
pub const Q_51: u64 = 5005;
/// `3·Q_51`, with `ρ(15015) = 60`.
pub const Q3_51: u64 = 15015;
/// Reference value of the tail factor, kept for comparison.
pub const TAIL_REFERENCE: f64 = 0.99994271;
pub const HEAD_TARGET: f64 = 0.904923;
pub const C1_TARGET: f64 = 0.904811;
pub const SLACK_REFERENCE: f64 = 1e-7;
pub const DEFAULT_LAMBDA: f64 = 0.887167;
pub const MAXEXP_CAP: u64 = 1_000_000_000;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PrimeProduct51 {
    /// `p_{5000}`.
    pub cutoff: u64,
    pub head: RInterval,
    pub tail: RInterval,
    pub c1: RInterval,
    pub tail_reference: f64,
    /// Primes in the head product.
    pub primes_used: usize,
}

fn head_factor(p: u64) -> (BigInt, BigInt) {
    let p = p as i128;
    let den = (p - 1).pow(4);
    let c = if p % 4 == 1 {
        5 * p * p + 10 * p + 1
    } else {
        5 * p * p - 2 * p + 1
    };
    (BigInt::from(den - c), BigInt::from(den))
}

fn product_tree(fs: &[(BigInt, BigInt)]) -> (BigInt, BigInt) {
    match fs.len() {
        0 => (BigInt::one(), BigInt::one()),
        1 => fs[0].clone(),
        n => {
            let (a, b) = fs.split_at(n / 2);
            let ((an, ad), (bn, bd)) = rayon::join(|| product_tree(a), || product_tree(b));
            (an * bn, ad * bd)
        }
    }
}

/// Exact head product as `(numerator, denominator)`, unreduced.
pub fn head_product_exact(reversed: bool) -> Result<(BigInt, BigInt)> {
    let cutoff = nth_prime(5000)?;
    let mut fs: Vec<(BigInt, BigInt)> = primes_up_to(cutoff - 1)?
        .into_iter()
        .filter(|&p| p >= 17)
        .map(head_factor)
        .collect();
    if reversed {
        fs.reverse();
    }
    Ok(product_tree(&fs))
}

/// Lower bound for `∏_{p≥17}(1 + A(n,p))`, uniform in `n`.
///
/// The head runs over `17 <= p < p_{5000}`; beyond it every factor is at least
/// `(1 − 1/(p−1)²)^6` and the product over all integers telescopes to
/// `(1 − 1/(p_{5000}−1))^6`.
pub fn prime_product_51() -> Result<PrimeProduct51> {
    let cutoff = nth_prime(5000)?;
    let (num, den) = head_product_exact(false)?;
    let head = RInterval::from_ratio(&ExactRational::new_raw(num, den));
    let base = ExactRational::new(BigInt::from(cutoff - 2), BigInt::from(cutoff - 1));
    let tail = RInterval::from_ratio(&num_traits::pow(base, 6));
    let primes_used = primes_up_to(cutoff - 1)?.iter().filter(|&&p| p >= 17).count();
    Ok(PrimeProduct51 {
        cutoff,
        head,
        tail,
        c1: head * tail,
        tail_reference: TAIL_REFERENCE,
        primes_used,
    })
}

/// `S_q(j) = Σ_{s=1}^{ρ(q)} e(j·2^s/q)`.
pub fn power_exp_sum(q: u64, j: u64) -> Result<CInterval> {
    let rho = mult_order2(q)?;
    let mut s = CInterval::ZERO;
    let mut x = 1u64;
    for _ in 0..rho {
        x = 2 * x % q;
        s = s + CInterval::e_frac((j % q) as i128 * x as i128, q);
    }
    Ok(s)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SlackEntry {
    pub k: u32,
    /// `(q−1)(max/ρ)^k`.
    pub slack: RInterval,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MaxExpResult {
    pub q: u64,
    pub rho: u64,
    /// Encloses `max_{1<=j<q} |S_q(j)|`.
    pub max_abs: RInterval,
    pub attaining_j: u64,
    pub slack: Vec<SlackEntry>,
}

pub fn maxexp(q: u64, k_list: &[u32]) -> Result<MaxExpResult> {
    if q < 3 || q % 2 == 0 {
        return domain(format!("maxexp: q = {q} must be odd and >= 3"));
    }
    let rho = mult_order2(q)?;
    if q.saturating_mul(rho) > MAXEXP_CAP {
        return resource(format!("maxexp: q·ρ = {q}·{rho} exceeds cap {MAXEXP_CAP}"));
    }
    let mut pows = Vec::with_capacity(rho as usize);
    let mut x = 1u64;
    for _ in 0..rho {
        x = 2 * x % q;
        pows.push(x);
    }
    let chunk = 4096u64;
    let starts: Vec<u64> = (1..q).step_by(chunk as usize).collect();
    // (lo, hi, argmax of hi) per chunk, merged in order.
    let parts: Vec<(f64, f64, u64)> = starts
        .par_iter()
        .map(|&s| {
            let mut best = (0.0f64, 0.0f64, s);
            for j in s..(s + chunk).min(q) {
                let mut acc = CInterval::ZERO;
                for &pw in &pows {
                    acc = acc + CInterval::e_frac(j as i128 * pw as i128, q);
                }
                let a = acc.abs();
                best.0 = best.0.max(a.lo());
                if a.hi() > best.1 {
                    best.1 = a.hi();
                    best.2 = j;
                }
            }
            best
        })
        .collect();
    let mut lo = 0.0f64;
    let mut hi = 0.0f64;
    let mut arg = 1;
    for (l, h, j) in parts {
        lo = lo.max(l);
        if h > hi {
            hi = h;
            arg = j;
        }
    }
    let max_abs = RInterval::new(lo, hi);
    let ratio = max_abs / RInterval::from_u64(rho);
    let slack = k_list
        .iter()
        .map(|&k| SlackEntry {
            k,
            slack: RInterval::from_u64(q - 1) * ratio.powi(k),
        })
        .collect();
    Ok(MaxExpResult {
        q,
        rho,
        max_abs,
        attaining_j: arg,
        slack,
    })
}

/// `8·C₁·(1 − slack)`, which must be at least `7.2`.
pub fn downstream_bound(c1: RInterval, slack: RInterval) -> (RInterval, bool) {
    let v = RInterval::point(8.0) * c1 * (RInterval::ONE - slack);
    (v, v.lo() >= 7.2)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResidueCount {
    pub q3: u64,
    pub k: u32,
    pub a: u64,
    pub rho: u64,
    #[serde(serialize_with = "crate::serde_util::display")]
    pub count: BigUint,
    /// `(ρ^k/q3)(1 − (q3−1)(max/ρ)^k)`.
    pub lower_bound: RInterval,
    /// `(ρ^k/q3)(1 + (q3−1)(max/ρ)^k)`.
    pub upper_bound: RInterval,
    /// Count at least the lower bound.
    pub holds: bool,
    /// Count inside both bounds.
    pub in_band: bool,
}

/// `(ρ^k/q3)(1 ∓ slack)` from the finite Fourier expansion of the count.
fn residue_band(q3: u64, k: u32, rho: u64) -> Result<(RInterval, RInterval)> {
    let m = maxexp(q3, &[k])?;
    let main = RInterval::from_biguint(&BigUint::from(rho).pow(k)) / RInterval::from_u64(q3);
    let slack = m.slack[0].slack;
    Ok((main * (RInterval::ONE - slack), main * (RInterval::ONE + slack)))
}

/// `#{ν ∈ [1,ρ]^k : Σ 2^{ν_j} ≡ a (mod q3)}` with the lower-bound check.
pub fn residue_count(q3: u64, k: u32, a: u64) -> Result<ResidueCount> {
    let dist = power_sum_distribution(q3, k)?;
    let (lower_bound, upper_bound) = residue_band(q3, k, dist.rho)?;
    let count = dist.count(a).clone();
    let c = RInterval::from_biguint(&count);
    let holds = c.lo() >= lower_bound.hi();
    Ok(ResidueCount {
        q3,
        k,
        a: a % q3,
        rho: dist.rho,
        count,
        lower_bound,
        upper_bound,
        holds,
        in_band: holds && c.hi() <= upper_bound.lo(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResidueSweep {
    pub q3: u64,
    pub k: u32,
    pub step: u64,
    pub classes: u64,
    #[serde(serialize_with = "crate::serde_util::display")]
    pub min_count: BigUint,
    pub argmin: u64,
    pub lower_bound: RInterval,
    pub all_hold: bool,
}

/// Lower-bound check over every residue `a ≡ 0 (mod step)`.
pub fn residue_sweep(q3: u64, k: u32, step: u64) -> Result<ResidueSweep> {
    if step == 0 || q3 % step != 0 {
        return domain(format!("residue_sweep: step {step} must divide {q3}"));
    }
    let dist = power_sum_distribution(q3, k)?;
    let (lower_bound, _) = residue_band(q3, k, dist.rho)?;
    let mut min_count: Option<BigUint> = None;
    let mut argmin = 0;
    for a in (0..q3).step_by(step as usize) {
        let c = dist.count(a);
        if min_count.as_ref().is_none_or(|m| c < m) {
            min_count = Some(c.clone());
            argmin = a;
        }
    }
    let min_count = min_count.unwrap_or_default();
    let all_hold = RInterval::from_biguint(&min_count).lo() >= lower_bound.hi();
    Ok(ResidueSweep {
        q3,
        k,
        step,
        classes: q3 / step,
        min_count,
        argmin,
        lower_bound,
        all_hold,
    })
}

/// The residue mod `3q` that is `0 (mod 3)` and `j (mod q)`.
pub fn a_j(j: i64, q: u64) -> Result<u64> {
    if q % 3 == 0 || q == 0 {
        return domain(format!("a_j: q = {q} must be coprime to 3"));
    }
    let m = 3 * q;
    let jr = j.rem_euclid(q as i64) as u64;
    // 3t ≡ j (mod q) with t = j·3^{-1}.
    let inv3 = (0..q).find(|&t| (3 * t) % q == 1 % q).unwrap_or(0);
    Ok((3 * ((jr * inv3) % q)) % m)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SumAIdentity {
    pub p: u64,
    #[serde(serialize_with = "crate::serde_util::display")]
    pub sum: ExactRational,
    pub holds: bool,
}

/// `Σ_{j=1}^{p} (1 + A(j,p))`, which should equal `p`.
pub fn sum_a_identity(p: u64) -> Result<SumAIdentity> {
    if !crate::arith::is_prime(p) {
        return domain(format!("sum_a_identity: {p} is not prime"));
    }
    let mut sum = ExactRational::zero();
    for j in 1..=p as i64 {
        sum += ExactRational::one() + a_of(j, p)?;
    }
    let holds = sum == ExactRational::from_integer(BigInt::from(p));
    Ok(SumAIdentity { p, sum, holds })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AvgSingularSeries {
    pub n: i64,
    pub k: u32,
    /// `log(N/log N)/log 2`.
    pub l_real: f64,
    /// Largest allowed exponent, `⌊L⌋`.
    pub l_int: u32,
    pub tuples: u64,
    pub excluded_small: u64,
    pub kept: u64,
    pub distinct_n: usize,
    pub sum: RInterval,
    /// `Σ 𝔖(n) / (8 (⌊L⌋−3)^k)`.
    pub ratio: RInterval,
    pub target: f64,
    pub all_4_mod_8: bool,
}

/// Average of `𝔖(n)` over `n = N − Σ_{j≤k} 2^{ν_j}`, `4 <= ν_j <= L`,
/// restricted to `n >= 2` and `n ≡ 4 (mod 24)`.
pub fn avg_singular_series(n_big: i64, k: u32, pmax: u64) -> Result<AvgSingularSeries> {
    if n_big % 8 != 4 || n_big < 100 {
        return domain(format!("avg_singular_series: N = {n_big} must be ≡ 4 mod 8 and >= 100"));
    }
    if k == 0 || k > 4 || n_big > 10_000_000 {
        return resource(format!("avg_singular_series: k = {k}, N = {n_big} outside desk scale"));
    }
    let nf = n_big as f64;
    let l_real = (nf / nf.ln()).ln() / 2f64.ln();
    let l_int = l_real.floor() as u32;
    if l_int < 4 {
        return domain("avg_singular_series: L < 4");
    }
    let exps: Vec<i64> = (4..=l_int).map(|v| 1i64 << v).collect();
    let mut mult: std::collections::BTreeMap<i64, u64> = std::collections::BTreeMap::new();
    let mut tuples = 0u64;
    let mut excluded_small = 0u64;
    let mut all_4_mod_8 = true;
    let mut idx = vec![0usize; k as usize];
    loop {
        tuples += 1;
        let n = n_big - idx.iter().map(|&i| exps[i]).sum::<i64>();
        if n < 2 {
            excluded_small += 1;
        } else {
            all_4_mod_8 &= n.rem_euclid(8) == 4;
            if n % 24 == 4 {
                *mult.entry(n).or_default() += 1;
            }
        }
        let mut pos = 0;
        while pos < idx.len() {
            idx[pos] += 1;
            if idx[pos] < exps.len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
        if pos == idx.len() {
            break;
        }
    }
    let ns: Vec<i64> = mult.keys().copied().collect();
    let vals = singular_series_batch(&ns, pmax)?;
    let sum = RInterval::sum(
        vals.iter()
            .zip(mult.values())
            .map(|(v, &m)| v.value * RInterval::from_u64(m)),
    );
    let kept: u64 = mult.values().sum();
    let box_size = RInterval::from_u64(((l_int - 3) as u64).pow(k));
    Ok(AvgSingularSeries {
        n: n_big,
        k,
        l_real,
        l_int,
        tuples,
        excluded_small,
        kept,
        distinct_n: ns.len(),
        sum,
        ratio: sum / (RInterval::point(8.0) * box_size),
        target: 0.9,
        all_4_mod_8,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MarginInput {
    pub k: u32,
    pub lambda: f64,
    pub c0: RInterval,
    /// `𝔍(0)/𝔦(1)`.
    pub ji_ratio: RInterval,
    pub major_floor: f64,
}

impl Default for MarginInput {
    fn default() -> Self {
        MarginInput {
            k: 44,
            lambda: DEFAULT_LAMBDA,
            c0: RInterval::around(0.69),
            ji_ratio: RInterval::ONE,
            major_floor: 0.9,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MarginResult {
    pub input: MarginInput,
    /// `floor − λ^{k−14}·45·c₀·ratio`, in units of `𝔦(1)`.
    pub margin: RInterval,
    pub minor_coefficient: RInterval,
    /// Least `k >= 14` with a certainly positive margin.
    pub minimal_k: Option<u32>,
}

fn margin_at(input: &MarginInput, k: u32) -> (RInterval, RInterval) {
    let lam = RInterval::around(input.lambda);
    let coef = lam.powi(k - 14) * RInterval::point(45.0) * input.c0 * input.ji_ratio;
    (RInterval::around(input.major_floor) - coef, coef)
}

pub fn final_margin(input: MarginInput) -> Result<MarginResult> {
    if !(input.lambda > 0.0 && input.lambda < 1.0) {
        return domain(format!("final_margin: λ = {} must lie in (0, 1)", input.lambda));
    }
    if input.k < 14 {
        return domain(format!("final_margin: k = {} must be >= 14", input.k));
    }
    if input.c0.lo() < 0.0 || input.ji_ratio.lo() <= 0.0 {
        return domain("final_margin: c₀ and the integral ratio must be positive");
    }
    let (margin, minor_coefficient) = margin_at(&input, input.k);
    let minimal_k = (14..=10_000).find(|&k| margin_at(&input, k).0.lo() > 0.0);
    Ok(MarginResult {
        input,
        margin,
        minor_coefficient,
        minimal_k,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::localsums::b_prime_closed_form;
    use num_traits::ToPrimitive;
    use proptest::prelude::*;

    #[test]
    fn prime_product_values() {
        let r = prime_product_51().unwrap();
        assert_eq!(r.cutoff, 48611);
        assert!(r.head.lo() >= HEAD_TARGET, "{:?}", r.head);
        assert!(r.c1.lo() >= C1_TARGET, "{:?}", r.c1);
        assert!(r.head.width() < 1e-6 && r.c1.width() < 1e-6);
        let t = (1.0 - 1.0 / 48610.0f64).powi(6);
        assert!((r.tail.mid() - t).abs() < 1e-14);
        assert!((r.tail.mid() - 0.9998766).abs() < 1e-7);
        assert!(r.tail.hi() < TAIL_REFERENCE);
        let (a, b) = head_product_exact(false).unwrap();
        let (c, d) = head_product_exact(true).unwrap();
        assert_eq!((a, b), (c, d));
    }

    #[test]
    fn head_factors_bound_true_local_factors() {
        // 1 + A(n,p) >= the two-case factor for every class of n.
        for p in primes_up_to(400).unwrap().into_iter().filter(|&p| p >= 7) {
            let (num, den) = head_factor(p);
            let f = ExactRational::new(num, den.clone());
            for n in 0..p as i64 {
                let v = ExactRational::new(den.clone() + BigInt::from(b_prime_closed_form(n, p)), den.clone());
                assert!(v >= f, "p={p} n={n}");
            }
        }
    }

    #[test]
    fn maxexp_small_moduli() {
        let m = maxexp(5, &[1]).unwrap();
        assert!(m.max_abs.contains(1.0) && m.max_abs.width() < 1e-12);
        let m = maxexp(9, &[]).unwrap();
        assert!(m.max_abs.contains(3.0));
        let s = power_exp_sum(9, 3).unwrap();
        assert!(s.contains(-3.0, 0.0));
        let m = maxexp(3, &[]).unwrap();
        assert!(m.max_abs.contains(1.0));
        let m = maxexp(7, &[]).unwrap();
        // {2,4,1} sums at j=1: e(2/7)+e(4/7)+e(1/7), modulus sqrt(2).
        assert!(m.max_abs.contains(2f64.sqrt()));
        for q in (3..400u64).step_by(2) {
            let m = maxexp(q, &[]).unwrap();
            assert!(m.max_abs.hi() < m.rho as f64, "q={q}");
        }
    }

    #[test]
    fn maxexp_matches_sampled_sums() {
        let m = maxexp(255, &[]).unwrap();
        for j in 1..255 {
            assert!(power_exp_sum(255, j).unwrap().abs().hi() <= m.max_abs.hi());
        }
        let at = power_exp_sum(255, m.attaining_j).unwrap().abs();
        assert!(at.intersects(&m.max_abs));
    }

    #[test]
    fn maxexp_15015() {
        let m = maxexp(Q3_51, &[35]).unwrap();
        assert_eq!(m.rho, 60);
        assert!(m.max_abs.lo() > 34.5 && m.max_abs.hi() < 34.6, "{:?}", m.max_abs);
        let slack = m.slack[0].slack;
        assert!(slack.hi() < 1e-4);
        let c1 = prime_product_51().unwrap().c1;
        assert!(downstream_bound(c1, slack).1);
    }

    fn brute(q3: u64, k: u32, rho: u64) -> Vec<u64> {
        let mut cnt = vec![0u64; q3 as usize];
        for idx in 0..rho.pow(k) {
            let mut i = idx;
            let mut s = 0;
            for _ in 0..k {
                s += crate::arith::pow_mod(2, i % rho + 1, q3);
                i /= rho;
            }
            cnt[(s % q3) as usize] += 1;
        }
        cnt
    }

    #[test]
    fn residue_counts() {
        let r = residue_count(9, 2, 2).unwrap();
        assert_eq!(r.count, BigUint::from(3u32));
        for a in [0u64, 3, 3003, 15012] {
            assert!(residue_count(Q3_51, 35, a).unwrap().in_band);
        }
        for q3 in [9u64, 15, 21, 33, 45, 63, 99] {
            let rho = mult_order2(q3).unwrap();
            for k in 1..=4u32 {
                if rho.pow(k) > 3_000_000 {
                    continue;
                }
                let b = brute(q3, k, rho);
                let mut total = BigUint::zero();
                for a in 0..q3 {
                    let r = residue_count(q3, k, a).unwrap();
                    assert_eq!(r.count, BigUint::from(b[a as usize]), "q3={q3} k={k} a={a}");
                    total += r.count;
                }
                assert_eq!(total, BigUint::from(rho).pow(k));
            }
        }
    }

    #[test]
    fn residue_sweep_15015() {
        let s = residue_sweep(Q3_51, 35, 3).unwrap();
        assert_eq!(s.classes, 5005);
        assert!(s.all_hold);
        assert!(s.lower_bound.lo() > 0.0);
    }

    #[test]
    fn a_j_crt() {
        for j in -20..40i64 {
            let a = a_j(j, Q_51).unwrap();
            assert_eq!(a % 3, 0);
            assert_eq!(a as i64 % 5005, j.rem_euclid(5005));
        }
        assert!(a_j(1, 9).is_err());
    }

    #[test]
    fn sum_a_examples() {
        let r = sum_a_identity(5).unwrap();
        assert_eq!(r.sum, ExactRational::from_integer(BigInt::from(5)));
        let vals: Vec<ExactRational> = (1..=5).map(|j| a_of(j, 5).unwrap()).collect();
        let e = |n: i64| ExactRational::new(BigInt::from(n), BigInt::from(256));
        assert_eq!(vals, vec![e(-176), e(64), e(64), e(-176), e(224)]);
        for p in primes_up_to(100).unwrap() {
            assert!(sum_a_identity(p).unwrap().holds, "p={p}");
        }
        assert!(sum_a_identity(9).is_err());
    }

    #[test]
    fn avg_series_smoke() {
        let r = avg_singular_series(1_000_004, 3, 20_000).unwrap();
        assert_eq!(r.l_int, 16);
        assert_eq!(r.tuples, 13u64.pow(3));
        assert!(r.all_4_mod_8);
        assert!(r.ratio.lo() >= 0.5, "{:?}", r.ratio);
        let r = avg_singular_series(204, 2, 1000).unwrap();
        assert_eq!(r.kept + r.excluded_small + (r.tuples - r.kept - r.excluded_small), r.tuples);
        assert!(avg_singular_series(1_000_003, 3, 1000).is_err());
    }

    #[test]
    fn margin_examples() {
        let r = final_margin(MarginInput::default()).unwrap();
        assert!(r.margin.lo() > 0.04 && r.margin.hi() < 0.05, "{:?}", r.margin);
        assert_eq!(r.minimal_k, Some(44));
        let r43 = final_margin(MarginInput { k: 43, ..Default::default() }).unwrap();
        assert!(r43.margin.hi() < 0.0);
        assert!(final_margin(MarginInput { lambda: 1.0, ..Default::default() }).is_err());
    }

    proptest! {
        #[test]
        fn margin_monotone(k in 14u32..80, c in 0.1f64..1.0, dc in 0.0f64..0.5) {
            let a = final_margin(MarginInput { k, c0: RInterval::point(c), ..Default::default() }).unwrap();
            let b = final_margin(MarginInput { k: k + 1, c0: RInterval::point(c), ..Default::default() }).unwrap();
            let d = final_margin(MarginInput { k, c0: RInterval::point(c + dc), ..Default::default() }).unwrap();
            prop_assert!(b.margin.lo() >= a.margin.lo() && b.margin.hi() >= a.margin.hi());
            prop_assert!(d.margin.lo() <= a.margin.lo() && d.margin.hi() <= a.margin.hi());
            prop_assert!(a.margin.hi().to_f64().unwrap() <= 0.9);
        }
    }
}
