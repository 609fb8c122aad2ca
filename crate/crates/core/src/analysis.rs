//! The archimedean side and empirical checks: `g(β)`, the singular integrals
//! `𝔦`, `𝔍`, `𝔍⁺`, windowed counts of sums of four prime squares, the fourth
//! moment of `T`, the divisor-weighted quadruple count `J`, and Mertens' product.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::One;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{divisor_counts, primes_up_to};
use crate::error::{domain, resource, Result};
use crate::interval::{consts, CInterval, RInterval};
use crate::series::singular_series_batch;
use crate::ExactRational;

pub const DEFAULT_CELLS: usize = 1 << 20;
pub const COUNT_N_CAP: u64 = 1_000_000_000;
pub const FULL_RANGE_CAP: u64 = 10_000_000;
pub const LEMMA_J_CAP: u64 = 100_000;

/// Which form of `g` enters the integral.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GVariant {
    Plain,
    Plus,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum IntegralKind {
    /// `𝔦(h) = ∫ (∫ e(x²β)dx)^4 e(−hβ) dβ`.
    I,
    /// `𝔍(h) = ∫ |g(β)|^4 e(−hβ) dβ`.
    J,
    /// As `J` with the widened limits of `g⁺`.
    Jplus,
}

fn check_eta(eta: f64) -> Result<()> {
    if eta > 0.0 && eta < 0.2 {
        Ok(())
    } else {
        domain(format!("eta = {eta} outside (0, 0.2)"))
    }
}

/// `(A, B)` with `t = x²` ranging over `[A, B]`.
fn t_range(eta: f64, variant: GVariant) -> (RInterval, RInterval) {
    let e = RInterval::point(eta);
    let w = match variant {
        GVariant::Plain => e,
        GVariant::Plus => e + e * e,
    };
    let q = RInterval::point(0.25);
    (q - w, q + w)
}

/// `e(θ)` for a real interval `θ`.
fn e_real(theta: RInterval) -> CInterval {
    let m = theta.mid();
    let r = m - m.round();
    let rad = (theta.hi() - m).max(m - theta.lo());
    let (s, c) = (2.0 * std::f64::consts::PI * r).sin_cos();
    let err = 2.0 * std::f64::consts::PI * rad * (1.0 + 1e-15) + 4e-16 + 1e-15;
    let clamp = |v: f64| RInterval::new((v - err).max(-1.0), (v + err).min(1.0));
    CInterval::new(clamp(c), clamp(s))
}

/// `g(β)` (or `g⁺(β)`) by the composite midpoint rule with its remainder
/// `(b−a)h²/24 · max|f''|`, `|f''| <= 4π|β| + 16π²x²β²`.
pub fn g_eval(beta: f64, eta: f64, variant: GVariant) -> Result<CInterval> {
    check_eta(eta)?;
    if !beta.is_finite() || beta.abs() > 1e7 {
        return domain(format!("g_eval: beta = {beta} outside [-1e7, 1e7]"));
    }
    let (ta, tb) = t_range(eta, variant);
    let (a, b) = (ta.sqrt(), tb.sqrt());
    let (x0, x1) = (a.hi(), b.lo());
    let len = x1 - x0;
    let pi = std::f64::consts::PI;
    let m2 = 4.0 * pi * beta.abs() + 16.0 * pi * pi * b.hi() * b.hi() * beta * beta;
    let tol = 1e-13;
    let need = (len * len * len * m2 / 24.0 / tol).sqrt().ceil();
    let n = need.clamp(64.0, (1u64 << 22) as f64) as u64;
    let h = len / n as f64;
    let bi = RInterval::point(beta);
    let mut sum = CInterval::ZERO;
    for i in 0..n {
        let x = RInterval::point(x0) + RInterval::point(h) * RInterval::point(i as f64 + 0.5);
        sum = sum + e_real(x.square() * bi);
    }
    let hi_len = RInterval::point(x1) - RInterval::point(x0);
    let step = hi_len / RInterval::from_u64(n);
    let mut val = sum.scale(step);
    // Quadrature remainder, and the pieces [a, x0], [x1, b] of length <= width.
    let hh = step.hi();
    let rem = hi_len.hi() * hh * hh / 24.0 * m2 * (1.0 + 1e-12) + a.width() + b.width();
    let pad = RInterval::new(-rem, rem);
    val = CInterval::new(val.re + pad, val.im + pad);
    Ok(val)
}

/// `ψ₂(s) = ∫ f(t) f(s−t) dt` with `f(t) = 1/(2√t)` on `[A, B]`, i.e.
/// `½[asin √(t/s)]` between `max(A, s−B)` and `min(B, s−A)`.
///
/// `ψ₂` increases up to `s = 1/2` and decreases after it.
fn psi2(s: f64, a: RInterval, b: RInterval) -> RInterval {
    if s <= 2.0 * a.lo() || s >= 2.0 * b.hi() {
        return RInterval::ZERO;
    }
    let si = RInterval::point(s);
    let unit = |x: RInterval| RInterval::new(x.lo().clamp(0.0, 1.0), x.hi().clamp(0.0, 1.0));
    let asr = |x: RInterval| unit(x / si).sqrt().asin();
    let v = if s <= 0.5 {
        asr(si - a) - asr(a)
    } else {
        asr(b) - asr(si - b)
    };
    let v = RInterval::point(0.5) * v;
    RInterval::new(v.lo().max(0.0), v.hi().max(0.0))
}

/// Range of `ψ₂` over `[u, v]` from its unimodality.
fn psi2_cell(u: f64, v: f64, a: RInterval, b: RInterval, peak: RInterval) -> RInterval {
    let pu = psi2(u, a, b);
    let pv = psi2(v, a, b);
    let mut lo = pu.lo().min(pv.lo());
    let mut hi = pu.hi().max(pv.hi());
    if u <= 0.5 && 0.5 <= v {
        hi = hi.max(peak.hi());
    }
    lo = lo.max(0.0);
    RInterval::new(lo, hi)
}

fn grid(a: RInterval, b: RInterval, cells: usize) -> Vec<f64> {
    let s0 = 2.0 * a.lo();
    let s1 = 2.0 * b.hi();
    let mut g: Vec<f64> = (0..=cells)
        .map(|i| s0 + (s1 - s0) * i as f64 / cells as f64)
        .collect();
    g[0] = s0;
    g[cells] = s1;
    g
}

/// Enclosure of `𝔦(h)`, `𝔍(h)` or `𝔍⁺(h)` with the default resolution.
pub fn singular_integral(h: f64, eta: f64, kind: IntegralKind) -> Result<RInterval> {
    singular_integral_with(h, eta, kind, DEFAULT_CELLS)
}

/// Integrates `ψ₂(s)ψ₂(h−s)` (kind `I`) or `ψ₂(s)ψ₂(s−h)` over `cells`
/// subintervals, bounding each cell by the range of both factors.
pub fn singular_integral_with(h: f64, eta: f64, kind: IntegralKind, cells: usize) -> Result<RInterval> {
    check_eta(eta)?;
    if !h.is_finite() || cells < 2 {
        return domain("singular_integral: need finite h and at least two cells");
    }
    let variant = if kind == IntegralKind::Jplus {
        GVariant::Plus
    } else {
        GVariant::Plain
    };
    let (a, b) = t_range(eta, variant);
    let (lo_s, hi_s) = (2.0 * a.lo(), 2.0 * b.hi());
    // Support of the full density.
    let (sup_lo, sup_hi) = match kind {
        IntegralKind::I => (2.0 * lo_s, 2.0 * hi_s),
        _ => (lo_s - hi_s, hi_s - lo_s),
    };
    if h <= sup_lo || h >= sup_hi {
        return Ok(RInterval::ZERO);
    }
    let peak = psi2(0.5, a, b);
    let g = grid(a, b, cells);
    let pv: Vec<RInterval> = g.windows(2).map(|w| psi2_cell(w[0], w[1], a, b, peak)).collect();
    let hi_ = RInterval::point(h);
    let parts: Vec<RInterval> = (0..cells)
        .into_par_iter()
        .with_min_len(4096)
        .map(|i| {
            let (u, v) = (g[i], g[i + 1]);
            let (ru, rv) = match kind {
                IntegralKind::I => ((hi_ - RInterval::point(v)).lo(), (hi_ - RInterval::point(u)).hi()),
                _ => ((RInterval::point(u) - hi_).lo(), (RInterval::point(v) - hi_).hi()),
            };
            let other = if rv <= lo_s || ru >= hi_s {
                RInterval::ZERO
            } else {
                psi2_cell(ru, rv, a, b, peak)
            };
            (RInterval::point(v) - RInterval::point(u)) * pv[i] * other
        })
        .collect();
    let sum = RInterval::sum(parts);
    Ok(RInterval::new(sum.lo().max(0.0), sum.hi()))
}

/// Neumaier-compensated sum.
fn ksum<I: IntoIterator<Item = f64>>(it: I) -> f64 {
    let mut s = 0.0f64;
    let mut c = 0.0f64;
    for x in it {
        let t = s + x;
        if s.abs() >= x.abs() {
            c += (s - t) + x;
        } else {
            c += (x - t) + s;
        }
        s = t;
    }
    s + c
}

/// Primes `p` with `(1/4 − η)N <= p² <= (1/4 + η)N`, decided exactly.
pub fn window_primes(n: u64, eta: f64) -> Result<Vec<u64>> {
    check_eta(eta)?;
    let e = ExactRational::from_float(eta).expect("finite eta");
    let quarter = ExactRational::new(BigInt::one(), BigInt::from(4));
    let nn = ExactRational::from_integer(BigInt::from(n));
    let lo = (&quarter - &e) * &nn;
    let hi = (&quarter + &e) * &nn;
    let top = ((0.25 + eta) * n as f64).sqrt() as u64 + 2;
    let sq = |p: u64| ExactRational::from_integer(BigInt::from(p) * BigInt::from(p));
    Ok(primes_up_to(top)?
        .into_iter()
        .filter(|&p| {
            let v = (p as f64) * (p as f64);
            let approx_lo = (0.25 - eta) * n as f64;
            let approx_hi = (0.25 + eta) * n as f64;
            if v < approx_lo * (1.0 - 1e-9) || v > approx_hi * (1.0 + 1e-9) {
                return false;
            }
            let s = sq(p);
            s >= lo && s <= hi
        })
        .collect())
}

/// Ordered pairs of primes aggregated by `p₁² + p₂²`: `(count, Σ log p₁ log p₂)`.
fn pair_sums(primes: &[u64]) -> HashMap<u64, (u64, f64)> {
    let logs: Vec<f64> = primes.iter().map(|&p| (p as f64).ln()).collect();
    let mut m: HashMap<u64, (u64, f64)> = HashMap::new();
    for (i, &p) in primes.iter().enumerate() {
        for (j, &q) in primes.iter().enumerate() {
            let e = m.entry(p * p + q * q).or_insert((0, 0.0));
            e.0 += 1;
            e.1 += logs[i] * logs[j];
        }
    }
    m
}

fn sorted_pairs(m: &HashMap<u64, (u64, f64)>) -> Vec<(u64, u64, f64)> {
    let mut v: Vec<(u64, u64, f64)> = m.iter().map(|(&s, &(c, w))| (s, c, w)).collect();
    v.sort_by_key(|x| x.0);
    v
}

/// Ordered quadruples with `Σ p_i² = n`: `(count, Σ ∏ log p_i)`.
fn quad_counts(pairs: &[(u64, u64, f64)], lookup: &HashMap<u64, (u64, f64)>, n: u64) -> (u64, f64) {
    let mut c = 0u64;
    let mut ws = Vec::new();
    for &(s, c1, w1) in pairs {
        if s >= n {
            break;
        }
        if let Some(&(c2, w2)) = lookup.get(&(n - s)) {
            c += c1 * c2;
            ws.push(w1 * w2);
        }
    }
    (c, ksum(ws))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WindowRow {
    pub n: u64,
    pub count: u64,
    pub weighted: f64,
    /// `𝔖(n)𝔦(n/N)N`.
    pub prediction: RInterval,
    /// `weighted / prediction` at the prediction midpoint.
    pub ratio: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WindowStats {
    pub n_big: u64,
    pub eta: f64,
    pub primes_in_window: usize,
    pub rows: Vec<WindowRow>,
    pub mean_ratio: f64,
    pub dispersion: f64,
}

/// Integral resolution used for per-target predictions.
pub const PREDICTION_CELLS: usize = 1 << 14;

/// Counts of `n = p₁² + ⋯ + p₄²` with every `p_i ∈ 𝓑`, against the main term.
pub fn count4_window(n_big: u64, eta: f64, targets: &[u64]) -> Result<WindowStats> {
    if n_big > COUNT_N_CAP {
        return resource(format!("count4_window: N = {n_big} exceeds cap {COUNT_N_CAP}"));
    }
    if n_big < 100 {
        return domain("count4_window: N must be >= 100");
    }
    let primes = window_primes(n_big, eta)?;
    let map = pair_sums(&primes);
    let pairs = sorted_pairs(&map);
    let ns: Vec<i64> = targets.iter().map(|&n| n as i64).collect();
    if let Some(n) = targets.iter().find(|&&n| n % 24 != 4) {
        return domain(format!("count4_window: target {n} is not ≡ 4 mod 24"));
    }
    let series = singular_series_batch(&ns, crate::series::SERIES_PMAX)?;
    let rows: Vec<WindowRow> = targets
        .par_iter()
        .zip(series.par_iter())
        .map(|(&n, s)| {
            let (count, weighted) = quad_counts(&pairs, &map, n);
            let i = singular_integral_with(n as f64 / n_big as f64, eta, IntegralKind::I, PREDICTION_CELLS)?;
            let prediction = s.value * i * RInterval::from_u64(n_big);
            let ratio = (prediction.mid() > 0.0).then(|| weighted / prediction.mid());
            Ok(WindowRow {
                n,
                count,
                weighted,
                prediction,
                ratio,
            })
        })
        .collect::<Result<_>>()?;
    let finite: Vec<f64> = rows.iter().filter_map(|r| r.ratio).collect();
    let k = finite.len().max(1) as f64;
    let mean_ratio = ksum(finite.iter().copied()) / k;
    let dispersion = (ksum(finite.iter().map(|r| (r - mean_ratio).powi(2))) / k).sqrt();
    Ok(WindowStats {
        n_big,
        eta,
        primes_in_window: primes.len(),
        rows,
        mean_ratio,
        dispersion,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FullRangeRow {
    pub n: u64,
    pub count: u64,
    pub weighted: f64,
}

/// Ordered representations by four prime squares with no window restriction.
pub fn count4_full(targets: &[u64]) -> Result<Vec<FullRangeRow>> {
    let max = targets.iter().copied().max().unwrap_or(0);
    if max > FULL_RANGE_CAP {
        return resource(format!("count4_full: n = {max} exceeds cap {FULL_RANGE_CAP}"));
    }
    let primes = primes_up_to(crate::arith::isqrt(max).max(2))?;
    let map = pair_sums(&primes);
    let pairs = sorted_pairs(&map);
    Ok(targets
        .iter()
        .map(|&n| {
            let (count, weighted) = quad_counts(&pairs, &map, n);
            FullRangeRow { n, count, weighted }
        })
        .collect())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RiegerSum {
    pub n_big: u64,
    pub eta: f64,
    pub total: f64,
    pub diagonal: f64,
    pub ratio_to_n_log_sq_n: f64,
}

/// `∫₀¹ |T(α)|⁴ dα` as the weighted count of `p₁² + p₂² = p₃² + p₄²` in `𝓑`.
pub fn rieger_sum(n_big: u64, eta: f64) -> Result<RiegerSum> {
    if n_big > COUNT_N_CAP {
        return resource(format!("rieger_sum: N = {n_big} exceeds cap {COUNT_N_CAP}"));
    }
    let primes = window_primes(n_big, eta)?;
    let pairs = sorted_pairs(&pair_sums(&primes));
    let total = ksum(pairs.iter().map(|&(_, _, w)| w * w));
    let l2 = ksum(primes.iter().map(|&p| (p as f64).ln().powi(2)));
    let nf = n_big as f64;
    Ok(RiegerSum {
        n_big,
        eta,
        total,
        diagonal: l2 * l2,
        ratio_to_n_log_sq_n: total / (nf * nf.ln() * nf.ln()),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuadCount {
    pub p: u64,
    #[serde(serialize_with = "crate::serde_util::display")]
    pub j_total: u128,
    #[serde(serialize_with = "crate::serde_util::display")]
    pub j_diag: u128,
    #[serde(serialize_with = "crate::serde_util::display")]
    pub j_offdiag: i128,
}

/// `J = Σ_{x₁²+x₂²=x₃²+x₄², x_i<=P} τ(x₁)τ(x₂)τ(x₃)τ(x₄)`.
///
/// Square sums are processed in blocks `[S, S+K)`; for each `x₁` the matching
/// `x₂` form a contiguous range, so memory stays `O(K)`.
pub fn lemma_j(p: u64) -> Result<QuadCount> {
    if p == 0 || p > LEMMA_J_CAP {
        return domain(format!("lemma_j: P = {p} outside 1..={LEMMA_J_CAP}"));
    }
    let tau = divisor_counts(p as usize);
    let tau: Vec<u64> = tau.iter().map(|&t| t as u64).collect();
    let max_s = 2 * p * p;
    let block = (1u64 << 22).min(max_s + 1);
    let starts: Vec<u64> = (2..=max_s).step_by(block as usize).collect();
    let j_total: u128 = starts
        .par_iter()
        .map(|&s0| {
            let s1 = (s0 + block).min(max_s + 1);
            let mut w = vec![0u64; (s1 - s0) as usize];
            for x1 in 1..=p {
                let q1 = x1 * x1;
                if q1 + 1 >= s1 {
                    break;
                }
                let lo = if s0 > q1 + 1 { crate::arith::isqrt(s0 - q1 - 1) + 1 } else { 1 };
                let lo = lo.max(1);
                let t1 = tau[x1 as usize];
                let mut x2 = lo;
                while x2 <= p {
                    let s = q1 + x2 * x2;
                    if s >= s1 {
                        break;
                    }
                    if s >= s0 {
                        w[(s - s0) as usize] += t1 * tau[x2 as usize];
                    }
                    x2 += 1;
                }
            }
            w.iter().map(|&v| (v as u128) * (v as u128)).sum::<u128>()
        })
        .sum();
    let d: u128 = (1..=p).map(|x| (tau[x as usize] as u128).pow(2)).sum();
    let j_diag = d * d;
    Ok(QuadCount {
        p,
        j_total,
        j_diag,
        j_offdiag: j_total as i128 - j_diag as i128,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MertensCheck {
    pub z: u64,
    /// `∏_{p<z} (1 − 1/p)`.
    pub product: RInterval,
    /// `e^{−γ}/log z`.
    pub reference: RInterval,
    pub ratio: RInterval,
}

pub fn mertens_check(z: u64) -> Result<MertensCheck> {
    if z < 3 {
        return domain(format!("mertens_check: z = {z} must be >= 3"));
    }
    let primes = primes_up_to(z - 1)?;
    fn tree(ps: &[u64]) -> (BigInt, BigInt) {
        match ps.len() {
            0 => (BigInt::one(), BigInt::one()),
            1 => (BigInt::from(ps[0] - 1), BigInt::from(ps[0])),
            n => {
                let (a, b) = ps.split_at(n / 2);
                let (x, y) = (tree(a), tree(b));
                (x.0 * y.0, x.1 * y.1)
            }
        }
    }
    let (num, den) = tree(&primes);
    let product = RInterval::from_ratio(&ExactRational::new_raw(num, den));
    let reference = consts::exp_neg_euler_gamma() / RInterval::from_u64(z).ln();
    Ok(MertensCheck {
        z,
        product,
        reference,
        ratio: product / reference,
    })
}

/// `√(1/4+η) − √(1/4−η)`, the length of the `x`-interval.
pub fn box_length(eta: f64, variant: GVariant) -> RInterval {
    let (a, b) = t_range(eta, variant);
    b.sqrt() - a.sqrt()
}

/// `𝔍(0)/𝔦(1)` at the default resolution.
pub fn ji_ratio(eta: f64) -> Result<RInterval> {
    let j = singular_integral(0.0, eta, IntegralKind::J)?;
    let i = singular_integral(1.0, eta, IntegralKind::I)?;
    Ok(j / i)
}

/// Exact `J` for tiny `P` by direct quadruple enumeration (tests, CLI sanity).
pub fn lemma_j_naive(p: u64) -> u128 {
    let tau = divisor_counts(p.max(1) as usize);
    let mut total = 0u128;
    for a in 1..=p {
        for b in 1..=p {
            for c in 1..=p {
                for d in 1..=p {
                    if a * a + b * b == c * c + d * d {
                        total += [a, b, c, d].iter().map(|&x| tau[x as usize] as u128).product::<u128>();
                    }
                }
            }
        }
    }
    total
}
