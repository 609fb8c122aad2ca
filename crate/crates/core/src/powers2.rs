//! Counting with powers of two: signed-sum histograms `r_t(h)`, power-sum
//! distributions modulo odd `q`, `β(d)`, and the constants `c₁`, `c₂`, `c₀`.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{is_prime, mersenne_factorization, mult_order2, ExactRational};
use crate::error::{domain, resource, Result};
use crate::interval::{consts, RInterval};
use crate::ntt;
use crate::series::{c3_c4, c_of};

/// Default bound on `t·2^L` for [`r_t_histogram`].
pub const HISTOGRAM_CAP: u64 = 1 << 25;

/// Default modulus cap for exact power-sum counts in [`c1_c2`].
pub const DP_MODULUS_CAP: u64 = 1_000_000;

/// Work cap (`q·t`) for one distribution.
pub const DP_WORK_CAP: u64 = 2_000_000_000;

/// `r_t(h) = #{ν, μ ∈ [4, L]^t : Σ 2^{ν_j} − Σ 2^{μ_j} = h}`.
///
/// Every `h` in the support is a multiple of 16; values are stored by
/// `k = h/16` over `[−kmax, kmax]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Histogram {
    pub t: u32,
    pub l: u32,
    kmax: i64,
    values: Vec<u128>,
}

impl Histogram {
    pub fn max_k(&self) -> i64 {
        self.kmax
    }

    pub fn count_k(&self, k: i64) -> u128 {
        if k.abs() > self.kmax {
            0
        } else {
            self.values[(k + self.kmax) as usize]
        }
    }

    /// `r_t(h)`.
    pub fn get(&self, h: i64) -> u128 {
        if h % 16 != 0 {
            0
        } else {
            self.count_k(h / 16)
        }
    }

    pub fn total(&self) -> u128 {
        self.values.iter().sum()
    }

    /// Nonzero entries as `(h, r_t(h))`, increasing in `h`.
    pub fn iter(&self) -> impl Iterator<Item = (i64, u128)> + '_ {
        self.values
            .iter()
            .enumerate()
            .filter(|(_, &v)| v != 0)
            .map(move |(i, &v)| (16 * (i as i64 - self.kmax), v))
    }
}

fn convolve_power(base: &[u128], t: u32, bound: u128) -> Result<Vec<u128>> {
    let mut acc = base.to_vec();
    for _ in 1..t {
        acc = ntt::convolve(&acc, base, bound)?;
    }
    Ok(acc)
}

pub fn r_t_histogram(t: u32, l: u32) -> Result<Histogram> {
    if t == 0 || l < 4 {
        return domain("r_t_histogram: need t >= 1 and L >= 4");
    }
    if l > 40 || (t as u64) << l > HISTOGRAM_CAP {
        return resource(format!("r_t_histogram: t·2^L = {t}·2^{l} exceeds cap {HISTOGRAM_CAP}"));
    }
    let choices = (l - 3) as u128;
    let total = choices
        .checked_pow(2 * t)
        .filter(|&v| v < 1u128 << 110)
        .ok_or_else(|| crate::Error::Resource(format!("r_{t} counts overflow for L = {l}")))?;
    // Indicator of {2^{ν−4} : 4 <= ν <= L}.
    let width = 1usize << (l - 4);
    let mut base = vec![0u128; width + 1];
    for v in 0..=(l - 4) {
        base[1 << v] = 1;
    }
    let u = convolve_power(&base, t, total)?;
    let mut rev = u.clone();
    rev.reverse();
    // corr[i] = Σ_s u[s]·u[s − (i − len + 1)].
    let corr = ntt::convolve(&u, &rev, total)?;
    let kmax = (u.len() - 1) as i64;
    Ok(Histogram {
        t,
        l,
        kmax,
        values: corr,
    })
}

/// Counts of `Σ_{j≤t} 2^{ν_j} mod q` over `ν ∈ [1, ρ(q)]^t`.
///
/// The counts are constant on orbits of `r ↦ 2r`, so only one value per orbit
/// is stored.
#[derive(Clone, Debug)]
pub struct PowerSumDistribution {
    pub q: u64,
    pub rho: u64,
    pub t: u32,
    orbit_of: Vec<u32>,
    orbit_size: Vec<u32>,
    counts: Vec<BigUint>,
}

impl PowerSumDistribution {
    pub fn count(&self, r: u64) -> &BigUint {
        &self.counts[self.orbit_of[(r % self.q) as usize] as usize]
    }

    pub fn orbit_count(&self) -> usize {
        self.counts.len()
    }

    /// `Σ_r count(r)`, which must equal `ρ^t`.
    pub fn total(&self) -> BigUint {
        self.counts
            .iter()
            .zip(&self.orbit_size)
            .map(|(c, &s)| c * s)
            .sum()
    }

    /// `Σ_r count(r)²`: pairs of tuples landing in the same class.
    pub fn pair_count(&self) -> BigUint {
        self.counts
            .iter()
            .zip(&self.orbit_size)
            .map(|(c, &s)| c * c * s)
            .sum()
    }

    /// Largest and smallest class counts.
    pub fn extremes(&self) -> (BigUint, BigUint) {
        let max = self.counts.iter().max().cloned().unwrap_or_default();
        let min = self.counts.iter().min().cloned().unwrap_or_default();
        (min, max)
    }
}

/// Primes just below 2^61 used for multi-modular counting.
fn dp_primes() -> &'static [u64] {
    static P: OnceLock<Vec<u64>> = OnceLock::new();
    P.get_or_init(|| {
        let mut v = Vec::new();
        let mut c = (1u64 << 61) - 1;
        while v.len() < 12 {
            if is_prime(c) {
                v.push(c);
            }
            c -= 2;
        }
        v
    })
}

fn orbits(q: u64) -> (Vec<u32>, Vec<u32>, Vec<u64>) {
    let mut orbit_of = vec![u32::MAX; q as usize];
    let mut sizes = Vec::new();
    let mut reps = Vec::new();
    for r in 0..q {
        if orbit_of[r as usize] != u32::MAX {
            continue;
        }
        let id = sizes.len() as u32;
        let mut x = r;
        let mut size = 0;
        loop {
            orbit_of[x as usize] = id;
            size += 1;
            x = (2 * x) % q;
            if x == r {
                break;
            }
        }
        sizes.push(size);
        reps.push(r);
    }
    (orbit_of, sizes, reps)
}

/// Exact power-sum distribution by `t`-fold orbit-reduced convolution,
/// carried out modulo enough 61-bit primes to recover `ρ^t` exactly.
pub fn power_sum_distribution(q: u64, t: u32) -> Result<PowerSumDistribution> {
    if q < 3 || q % 2 == 0 {
        return domain(format!("power sums: modulus {q} must be odd and >= 3"));
    }
    if t == 0 {
        return domain("power sums: t must be >= 1");
    }
    if q.saturating_mul(t as u64) > DP_WORK_CAP {
        return resource(format!("power sums: q·t = {q}·{t} exceeds work cap"));
    }
    let rho = mult_order2(q)?;
    let (orbit_of, orbit_size, reps) = orbits(q);
    let bits = (rho as f64).log2() * t as f64;
    let nprimes = (bits / 60.0).floor() as usize + 1;
    if nprimes > dp_primes().len() {
        return resource(format!("power sums: ρ^t needs {nprimes} moduli"));
    }
    let primes = &dp_primes()[..nprimes];
    let pows: Vec<u64> = {
        let mut v = Vec::with_capacity(rho as usize);
        let mut x = 1u64;
        for _ in 0..rho {
            x = (2 * x) % q;
            v.push(x);
        }
        v
    };
    let no = reps.len();
    let k = nprimes;
    let mut cur = vec![0u64; no * k];
    let one_orbit = orbit_of[(2 % q) as usize] as usize;
    for j in 0..k {
        cur[one_orbit * k + j] = 1;
    }
    let mut next = vec![0u64; no * k];
    for _ in 1..t {
        for (o, &r) in reps.iter().enumerate() {
            let mut acc = [0u64; 12];
            for &pw in &pows {
                let src = orbit_of[((r + q - pw) % q) as usize] as usize;
                for j in 0..k {
                    let v = acc[j] + cur[src * k + j];
                    acc[j] = if v >= primes[j] { v - primes[j] } else { v };
                }
            }
            next[o * k..o * k + k].copy_from_slice(&acc[..k]);
        }
        std::mem::swap(&mut cur, &mut next);
    }
    let counts: Vec<BigUint> = (0..no).map(|o| crt(&cur[o * k..o * k + k], primes)).collect();
    Ok(PowerSumDistribution {
        q,
        rho,
        t,
        orbit_of,
        orbit_size,
        counts,
    })
}

fn crt(res: &[u64], primes: &[u64]) -> BigUint {
    if res.len() == 1 {
        return BigUint::from(res[0]);
    }
    let mut x = BigInt::from(res[0]);
    let mut m = BigInt::from(primes[0]);
    for (&r, &p) in res.iter().zip(primes).skip(1) {
        let pb = BigInt::from(p);
        let inv = m.modpow(&BigInt::from(p - 2), &pb);
        let diff = (BigInt::from(r) - &x).mod_floor(&pb);
        let t = (diff * inv).mod_floor(&pb);
        x += &m * t;
        m *= pb;
    }
    x.to_biguint().expect("nonnegative")
}

/// Distribution for `(q, t)` and `n_q(t) = Σ_r count(r)²`.
pub fn power_congruence_count(q: u64, t: u32) -> Result<(PowerSumDistribution, BigUint)> {
    let d = power_sum_distribution(q, t)?;
    let n = d.pair_count();
    Ok((d, n))
}

/// `ρ(q)^14 / n_q(7)` for an arbitrary odd modulus.
pub fn beta_for_modulus(q: u64) -> Result<ExactRational> {
    let (d, n) = power_congruence_count(q, 7)?;
    let num = BigInt::from(d.rho).pow(14);
    Ok(ExactRational::new(num, BigInt::from(n)))
}

/// `β(d) = ρ(3d)^14 / n_{3d}(7)` for `d` coprime to 30 (squarefree in use).
pub fn beta(d: u64) -> Result<ExactRational> {
    if d == 0 || d.gcd(&30) != 1 {
        return domain(format!("beta: d = {d} must be coprime to 30"));
    }
    beta_for_modulus(3 * d)
}

/// A candidate `d` with `ρ(b·d) < M` (`b = 3` or `15`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Candidate {
    pub d: u64,
    pub rho: u64,
}

/// Squarefree `d` with all prime factors `> 5` and `lcm(base_order, ord_p(2) : p | d) < m`,
/// where `base_order` is `ρ(3) = 2` or `ρ(15) = 4`. Sorted by `(ρ, d)`.
pub fn candidate_d_enum_with(m: u64, base_order: u64) -> Result<Vec<Candidate>> {
    if !(2..=64).contains(&m) {
        return domain(format!("candidate_d_enum: M = {m} outside 2..=64"));
    }
    let mut primes: BTreeMap<u64, u64> = BTreeMap::new();
    for e in 1..m as u32 {
        for (p, _) in mersenne_factorization(e)? {
            if p > 5 && !primes.contains_key(&p) {
                let o = mult_order2(p)?;
                if base_order.lcm(&o) < m {
                    primes.insert(p, o);
                }
            }
        }
    }
    let list: Vec<(u64, u64)> = primes.into_iter().collect();
    let mut out = Vec::new();
    fn dfs(list: &[(u64, u64)], i: usize, d: u64, l: u64, m: u64, out: &mut Vec<Candidate>) {
        out.push(Candidate { d, rho: l });
        for j in i..list.len() {
            let (p, o) = list[j];
            let nl = l.lcm(&o);
            if nl < m {
                dfs(list, j + 1, d * p, nl, m, out);
            }
        }
    }
    dfs(&list, 0, 1, base_order, m, &mut out);
    out.sort_by_key(|c| (c.rho, c.d));
    Ok(out)
}

/// Candidates for `c₁` (modulus `3d`).
pub fn candidate_d_enum(m: u64) -> Result<Vec<Candidate>> {
    candidate_d_enum_with(m, 2)
}

/// Verdict of one named constant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Info,
}

/// How an enclosure is compared with its target.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Comparison {
    /// Upper endpoint `<=` target.
    AtMost,
    /// Upper endpoint `<` target.
    Below,
    /// Lower endpoint `>=` target.
    AtLeast,
    /// Lower endpoint `>` target.
    Above,
    /// Enclosure strictly inside `(lo, hi)`.
    Inside(f64, f64),
    /// Enclosure is the exact point target.
    Equals,
    /// Recorded only.
    None,
}

impl Comparison {
    pub fn holds(&self, enc: &RInterval, target: Option<f64>) -> Verdict {
        let t = target.unwrap_or(f64::NAN);
        let ok = match *self {
            Comparison::AtMost => enc.hi() <= t,
            Comparison::Below => enc.hi() < t,
            Comparison::AtLeast => enc.lo() >= t,
            Comparison::Above => enc.lo() > t,
            Comparison::Inside(a, b) => a < enc.lo() && enc.hi() < b,
            Comparison::Equals => enc.lo() == t && enc.hi() == t,
            Comparison::None => return Verdict::Info,
        };
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

/// A named constant with its enclosure and target.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConstantEntry {
    pub name: String,
    pub enclosure: RInterval,
    pub target: Option<f64>,
    pub comparison: Comparison,
    pub verdict: Verdict,
    pub notes: String,
}

impl ConstantEntry {
    pub fn new(name: &str, enclosure: RInterval, target: Option<f64>, comparison: Comparison, notes: &str) -> Self {
        ConstantEntry {
            name: name.to_string(),
            enclosure,
            target,
            comparison,
            verdict: comparison.holds(&enclosure, target),
            notes: notes.to_string(),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct ConstantsReport {
    pub entries: Vec<ConstantEntry>,
}

impl ConstantsReport {
    pub fn push(&mut self, e: ConstantEntry) {
        self.entries.push(e);
    }

    pub fn get(&self, name: &str) -> Option<&ConstantEntry> {
        self.entries.iter().find(|e| e.name == name)
    }

    pub fn all_pass(&self) -> bool {
        self.entries.iter().all(|e| e.verdict != Verdict::Fail)
    }
}

/// One `d` in the sums for `c₁` or `c₂`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BetaTerm {
    pub d: u64,
    pub rho: u64,
    /// Exact `β(d)` when the modulus was within the cap.
    #[serde(serialize_with = "serialize_opt_ratio")]
    pub beta: Option<ExactRational>,
    /// Upper bound used for `1/β(d)`.
    pub inv_beta: RInterval,
    /// `μ²(d)/c(d)·(1/β(d) − 1/M)` if positive, else 0.
    pub term: RInterval,
    /// True when `1/β(d)` came from the fallback bound.
    pub fallback: bool,
    /// `β(d) >= ρ(bd)` (only checked for exact `β`).
    pub beta_ge_rho: Option<bool>,
}

fn serialize_opt_ratio<S: serde::Serializer>(v: &Option<ExactRational>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(r) => s.collect_str(r),
        None => s.serialize_none(),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct C1C2 {
    pub m: u64,
    pub dp_cap: u64,
    pub c1: RInterval,
    pub c2: RInterval,
    pub c0: RInterval,
    pub c3: RInterval,
    pub tail: RInterval,
    pub terms1: Vec<BetaTerm>,
    pub terms2: Vec<BetaTerm>,
    pub report: ConstantsReport,
}

fn beta_terms(cands: &[Candidate], base: u64, m: u64, cap: u64) -> Result<Vec<BetaTerm>> {
    let inv_m = RInterval::ONE / RInterval::from_u64(m);
    let exact: Vec<Option<ExactRational>> = cands
        .par_iter()
        .map(|c| {
            let q = base * c.d;
            if q <= cap {
                beta_for_modulus(q).map(Some)
            } else {
                Ok(None)
            }
        })
        .collect::<Result<_>>()?;
    let mut out: Vec<BetaTerm> = Vec::with_capacity(cands.len());
    for (i, c) in cands.iter().enumerate() {
        let (inv_beta, fallback, ge) = match &exact[i] {
            Some(b) => {
                let inv = RInterval::from_ratio(&(ExactRational::one() / b));
                let ge = *b >= ExactRational::from_integer(BigInt::from(c.rho));
                (inv, false, Some(ge))
            }
            None => {
                // β(d) >= ρ(bd), and β(d) >= β(d') for d' | d.
                let mut ub = (RInterval::ONE / RInterval::from_u64(c.rho)).hi();
                for (j, other) in cands.iter().enumerate() {
                    if c.d % other.d == 0 {
                        if let Some(b) = &exact[j] {
                            ub = ub.min(RInterval::from_ratio(&(ExactRational::one() / b)).hi());
                        }
                    }
                }
                (RInterval::new(0.0, ub), true, None)
            }
        };
        let inv_c = RInterval::from_ratio(&(ExactRational::one() / c_of(c.d)?));
        let raw = inv_c * (inv_beta - inv_m);
        let term = if raw.hi() <= 0.0 {
            RInterval::ZERO
        } else {
            RInterval::new(raw.lo().max(0.0), raw.hi())
        };
        out.push(BetaTerm {
            d: c.d,
            rho: c.rho,
            beta: exact[i].clone(),
            inv_beta,
            term,
            fallback,
            beta_ge_rho: ge,
        });
    }
    Ok(out)
}

/// Upper bounds for `c₁`, `c₂` and `c₀ = (25/32)c₁ + (23/32)c₂`.
pub fn c1_c2(m: u64) -> Result<C1C2> {
    c1_c2_with(m, DP_MODULUS_CAP, None)
}

pub fn c1_c2_with(m: u64, dp_cap: u64, c3: Option<RInterval>) -> Result<C1C2> {
    let c3 = match c3 {
        Some(c) => c,
        None => c3_c4()?.c3,
    };
    let mi = RInterval::from_u64(m);
    let tail = RInterval::point(8.0) * RInterval::point(c3.hi()) / RInterval::point(15.0)
        * consts::exp_euler_gamma()
        * (RInterval::ONE + mi.ln())
        / mi;
    let cands1 = candidate_d_enum_with(m, 2)?;
    let cands2 = candidate_d_enum_with(m, 4)?;
    let terms1 = beta_terms(&cands1, 3, m, dp_cap)?;
    let terms2 = beta_terms(&cands2, 15, m, dp_cap)?;
    let sum = |ts: &[BetaTerm]| RInterval::sum(ts.iter().map(|t| t.term));
    let c1 = sum(&terms1) + tail;
    let c2 = sum(&terms2) + tail;
    let c0 = RInterval::point(25.0 / 32.0) * c1 + RInterval::point(23.0 / 32.0) * c2;
    let mut report = ConstantsReport::default();
    let skipped = terms1.iter().chain(&terms2).filter(|t| t.fallback).count();
    let note = format!("M = {m}; {skipped} moduli above cap {dp_cap} bounded via β ≥ ρ and divisor monotonicity");
    report.push(ConstantEntry::new("c1", c1, None, Comparison::None, &note));
    report.push(ConstantEntry::new("c2", c2, None, Comparison::None, &note));
    report.push(ConstantEntry::new("c0", c0, Some(0.69), Comparison::Below, "(25/32)c1 + (23/32)c2"));
    report.push(ConstantEntry::new("c1c2_tail", tail, None, Comparison::None, "(8c3/15)e^γ(1+log M)/M"));
    Ok(C1C2 {
        m,
        dp_cap,
        c1,
        c2,
        c0,
        c3,
        tail,
        terms1,
        terms2,
        report,
    })
}

/// One row of [`m_ratio_check`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MRatioRow {
    pub x: u32,
    #[serde(serialize_with = "crate::serde_util::display")]
    pub ratio: ExactRational,
    pub ratio_enclosure: RInterval,
    /// `e^γ log x`.
    pub bound: RInterval,
    /// Whether `x >= 9` (the range where the inequality is claimed).
    pub checked: bool,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MRatioReport {
    pub rows: Vec<MRatioRow>,
    pub all_hold: bool,
}

/// `m(x)/φ(m(x))` for `m(x) = ∏_{e<=x}(2^e − 1)` against `e^γ log x`.
pub fn m_ratio_check(xmax: u32) -> Result<MRatioReport> {
    if !(1..=63).contains(&xmax) {
        return domain(format!("m_ratio_check: xmax = {xmax} outside 1..=63"));
    }
    let mut primes: Vec<u64> = Vec::new();
    let mut rows = Vec::new();
    let mut ratio = ExactRational::one();
    for x in 1..=xmax {
        for (p, _) in mersenne_factorization(x)? {
            if !primes.contains(&p) {
                primes.push(p);
                ratio *= ExactRational::new(BigInt::from(p), BigInt::from(p - 1));
            }
        }
        let enc = RInterval::from_ratio(&ratio);
        let bound = consts::exp_euler_gamma() * RInterval::from_u64(x as u64).ln();
        let checked = x >= 9;
        rows.push(MRatioRow {
            x,
            ratio: ratio.clone(),
            ratio_enclosure: enc,
            bound,
            checked,
            holds: enc.hi() <= bound.lo(),
        });
    }
    let all_hold = rows.iter().filter(|r| r.checked).all(|r| r.holds);
    Ok(MRatioReport { rows, all_hold })
}

/// `n_q(t)` through the finite Fourier expansion
/// `n = (1/q) Σ_j |S(j)|^{2t}`, `S(j) = Σ_{s=1}^{ρ} e(j2^s/q)`, in interval arithmetic.
pub fn pair_count_fourier(q: u64, t: u32) -> Result<RInterval> {
    let rho = mult_order2(q)?;
    let mut pows = Vec::with_capacity(rho as usize);
    let mut x = 1u64;
    for _ in 0..rho {
        x = 2 * x % q;
        pows.push(x);
    }
    let mut acc = RInterval::ZERO;
    for j in 0..q {
        let mut s = crate::interval::CInterval::ZERO;
        for &pw in &pows {
            s = s + crate::interval::CInterval::e_frac((j as i128) * pw as i128, q);
        }
        acc = acc + s.norm_sqr().powi(t);
    }
    Ok(acc / RInterval::from_u64(q))
}

/// Exact value of `n` as `f64`-friendly `u128` when small (tests, CLI).
pub fn biguint_to_u128(n: &BigUint) -> Option<u128> {
    n.to_u128()
}

/// Whether `x` is zero (helper for reports).
pub fn is_zero(n: &BigUint) -> bool {
    n.is_zero()
}
