//! Singular series, the weights `a(p)`, `b(p)`, `c(d)`, `κ(h)`, and the
//! infinite products `c₃`, `c₄`.
//!
//! Euler products are evaluated exactly (closed-form local factors, checked
//! against the counting identities in `localsums`) up to a truncation point
//! `P`; the remaining primes are covered by a bound `|factor − 1| ≤ K/p²`
//! with `K` derived from the factor's polynomial form, and
//! `Σ_{p>P} 1/p² ≤ 2·1.25506/(P log P)` from `π(x) < 1.25506 x/log x`.

use num_bigint::BigInt;
use num_traits::{One, Signed};
use serde::Serialize;

use crate::arith::{factorize, is_prime, jacobi, primes_up_to, small_primes, ExactRational, SpfTable};
use crate::error::{domain, Result};
use crate::interval::RInterval;
use crate::localsums::{a_of, b_prime_closed_form, bbold_closed_form};

/// Default truncation point for `𝔖(n)` and `𝐒(h)`.
pub const SERIES_PMAX: u64 = 100_000;

/// Default truncation point for `c₃` and `c₄`.
pub const CONSTANTS_PMAX: u64 = 2_000_000;

/// Constant in the Rosser–Schoenfeld bound `π(x) < 1.25506 x / log x` (x > 1).
const PI_BOUND: f64 = 1.25506;

/// An Euler product evaluated to `pmax` with a rigorous tail.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SeriesValue {
    pub value: RInterval,
    pub pmax: u64,
    /// Enclosure of `log(true value / partial product)`.
    pub tail_log_bound: RInterval,
    pub exact_part: String,
}

/// `a(p)`, `b(p)` and `c(p)` at a prime `p > 5`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WeightTriple {
    pub p: u64,
    pub a_val: i128,
    pub b_val: i128,
    #[serde(serialize_with = "crate::serde_util::display")]
    pub c_val: ExactRational,
}

/// Integer polynomial, coefficients from the constant term upward.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Poly(pub Vec<i128>);

impl Poly {
    pub fn new(mut c: Vec<i128>) -> Self {
        while c.len() > 1 && *c.last().unwrap() == 0 {
            c.pop();
        }
        Poly(c)
    }

    pub fn degree(&self) -> usize {
        self.0.len() - 1
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        let mut c = vec![0i128; self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Poly::new(c)
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let n = self.0.len().max(o.0.len());
        let c = (0..n)
            .map(|i| self.0.get(i).copied().unwrap_or(0) + o.0.get(i).copied().unwrap_or(0))
            .collect();
        Poly::new(c)
    }

    pub fn neg(&self) -> Poly {
        Poly::new(self.0.iter().map(|c| -c).collect())
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        self.add(&o.neg())
    }

    #[cfg(test)]
    pub fn eval(&self, x: i128) -> i128 {
        self.0.iter().rev().fold(0, |acc, c| acc * x + c)
    }
}

/// `K` with `|num(p)/den(p)| <= K/p²` for all `p >= x0`.
///
/// Requires `deg den >= deg num + 2` and a positive leading coefficient of
/// `den`; bounds `|num(p)| <= p^k Σ|n_i| x0^{i−k}` and
/// `den(p) >= p^m (d_m − Σ_{i<m} |d_i| x0^{i−m})`.
pub(crate) fn tail_constant(num: &Poly, den: &Poly, x0: f64) -> RInterval {
    let m = den.degree();
    assert!(m >= num.degree() + 2 && den.0[m] > 0);
    let k = m - 2;
    let x = RInterval::point(x0);
    let mut top = RInterval::ZERO;
    for (i, c) in num.0.iter().enumerate() {
        top = top + RInterval::from_i128(c.abs()) / x.powi((k - i) as u32);
    }
    let mut bottom = RInterval::from_i128(den.0[m]);
    for (i, c) in den.0.iter().enumerate().take(m) {
        bottom = bottom - RInterval::from_i128(c.abs()) / x.powi((m - i) as u32);
    }
    assert!(bottom.lo() > 0.0, "denominator not dominated at x0 = {x0}");
    RInterval::new(0.0, (top / bottom).hi())
}

/// Upper bound for `Σ_{p>P} 1/p²`.
pub fn prime_tail_inv_sq(p: u64) -> RInterval {
    let pp = RInterval::from_u64(p);
    let b = RInterval::point(2.0 * PI_BOUND) / (pp * pp.ln());
    RInterval::new(0.0, b.hi())
}

/// Upper bound for `Σ_{p>P} p^{-3/2}`.
pub fn prime_tail_inv_three_halves(p: u64) -> RInterval {
    let pp = RInterval::from_u64(p);
    let b = RInterval::point(3.0 * PI_BOUND) / (pp.sqrt() * pp.ln());
    RInterval::new(0.0, b.hi())
}

/// Enclosure of `Σ_{p>P} log f_p` given `|f_p − 1| <= K/p²`.
pub(crate) fn log_tail(k: RInterval, pmax: u64) -> RInterval {
    let p0 = RInterval::from_u64(pmax + 1);
    let u0 = k / (p0 * p0);
    assert!(u0.hi() < 0.5);
    let t = k / (RInterval::ONE - u0) * prime_tail_inv_sq(pmax);
    RInterval::new(-t.hi(), t.hi())
}

/// `num/den` as an interval, exact when both fit in 53 bits.
pub(crate) fn ratio_interval(num: i128, den: i128) -> RInterval {
    RInterval::from_i128(num) / RInterval::from_i128(den)
}

fn phi4(p: u64) -> i128 {
    (p as i128 - 1).pow(4)
}

fn phi4_poly() -> Poly {
    let x = Poly::new(vec![-1, 1]);
    x.mul(&x).mul(&x).mul(&x)
}

/// `a(p)`: the largest value of `𝐁(p,h)` over `p ∤ h`.
pub fn a_weight(p: u64) -> i128 {
    let pi = p as i128;
    if p % 4 == 3 {
        -(pi + 1) * (pi + 1)
    } else {
        3 * pi * pi - 2 * pi - 1
    }
}

/// `b(p) = 𝐁(p,h)` for `p | h`.
pub fn b_weight(p: u64) -> i128 {
    let pi = p as i128;
    if p % 4 == 3 {
        (pi - 1) * (pi + 1) * (pi + 1)
    } else {
        (pi - 1) * (pi * pi + 6 * pi + 1)
    }
}

fn a_poly(class: u64) -> Poly {
    if class == 3 {
        Poly::new(vec![-1, -2, -1])
    } else {
        Poly::new(vec![-1, -2, 3])
    }
}

fn b_poly(class: u64) -> Poly {
    let pm1 = Poly::new(vec![-1, 1]);
    if class == 3 {
        pm1.mul(&Poly::new(vec![1, 2, 1]))
    } else {
        pm1.mul(&Poly::new(vec![1, 6, 1]))
    }
}

/// `c(p)` defined by `1 + 1/c(p) = (1 + b(p)/(p−1)⁴)/(1 + a(p)/(p−1)⁴)`.
pub fn c_prime(p: u64) -> Result<ExactRational> {
    if p <= 5 || !is_prime(p) {
        return domain(format!("c(p) needs a prime p > 5, got {p}"));
    }
    let a = a_weight(p);
    let b = b_weight(p);
    Ok(ExactRational::new(
        BigInt::from(phi4(p) + a),
        BigInt::from(b - a),
    ))
}

/// `c(d) = ∏_{p|d} c(p)` for squarefree `d` coprime to 30; `c(1) = 1`.
pub fn c_of(d: u64) -> Result<ExactRational> {
    let mut acc = ExactRational::one();
    for (p, e) in factorize(d)? {
        if e > 1 || p <= 5 {
            return domain(format!("c(d) needs squarefree d coprime to 30, got {d}"));
        }
        acc *= c_prime(p)?;
    }
    Ok(acc)
}

pub fn abc_weights(p: u64) -> Result<WeightTriple> {
    Ok(WeightTriple {
        p,
        a_val: a_weight(p),
        b_val: b_weight(p),
        c_val: c_prime(p)?,
    })
}

/// `1 + 1/c(p)` as an interval.
pub(crate) fn one_plus_inv_c(p: u64) -> RInterval {
    let a = a_weight(p);
    let b = b_weight(p);
    ratio_interval(phi4(p) + b, phi4(p) + a)
}

/// `κ(h) = (25 + 15(h/5))/32` for `5 ∤ h`, `3/2` for `5 | h`.
pub fn kappa(h: i64) -> Result<ExactRational> {
    if h == 0 {
        return domain("kappa: h must be nonzero");
    }
    if h % 5 == 0 {
        return Ok(ExactRational::new(BigInt::from(3), BigInt::from(2)));
    }
    let chi = jacobi(h, 5) as i64;
    Ok(ExactRational::new(BigInt::from(25 + 15 * chi), BigInt::from(32)))
}

/// The actual local factor `1 + 𝐁(5,h)/4⁴`: `(25 − 15(h/5))/32` or `15/8`.
pub fn local_factor_five(h: i64) -> ExactRational {
    ExactRational::new(BigInt::from(256 + bbold_closed_form(5, h)), BigInt::from(256))
}

fn exact_factor_interval(r: &ExactRational) -> RInterval {
    RInterval::from_ratio(r)
}

/// `𝔖(n) = ∏_p (1 + Σ_k A(n,p^k))`.
///
/// Factors at 2 and 3 use the counting identity at 2, 4, 8 and 3 (higher
/// powers contribute zero). For `p >= 5` up to `pmax`, and for every prime
/// factor of `n`, the factor `1 + B(n,p)/(p−1)⁴` is exact. The tail uses
/// `|B(n,p)| <= 5p² + 10p + 1` for `p ∤ n`.
pub fn singular_series(n: i64, pmax: u64) -> Result<SeriesValue> {
    singular_series_with(n, pmax, None)
}

fn primes_for(pmax: u64) -> Result<std::borrow::Cow<'static, [u64]>> {
    let sp = small_primes();
    if pmax <= *sp.last().unwrap() {
        let end = sp.partition_point(|&p| p <= pmax);
        Ok(std::borrow::Cow::Borrowed(&sp[..end]))
    } else {
        Ok(std::borrow::Cow::Owned(primes_up_to(pmax)?))
    }
}

fn singular_series_with(n: i64, pmax: u64, primes: Option<&[u64]>) -> Result<SeriesValue> {
    if n < 2 {
        return domain(format!("singular_series: n = {n} must be >= 2"));
    }
    if pmax < 13 {
        return domain("singular_series: pmax must be >= 13");
    }
    let owned;
    let primes = match primes {
        Some(p) => p,
        None => {
            owned = primes_for(pmax)?;
            &owned[..]
        }
    };
    let two = ExactRational::one() + a_of(n, 2)? + a_of(n, 4)? + a_of(n, 8)?;
    let three = ExactRational::one() + a_of(n, 3)?;
    let mut value = exact_factor_interval(&(two * three));
    for &p in primes.iter().filter(|&&p| p >= 5) {
        value = value * ratio_interval(phi4(p) + b_prime_closed_form(n, p), phi4(p));
    }
    let mut big_factors = Vec::new();
    for (p, _) in factorize(n as u64)? {
        if p > pmax {
            value = value * ratio_interval(phi4(p) + b_prime_closed_form(n, p), phi4(p));
            big_factors.push(p);
        }
    }
    let k = tail_constant(&Poly::new(vec![1, 10, 5]), &phi4_poly(), (pmax + 1) as f64);
    let tail = log_tail(k, pmax);
    let exact_part = if big_factors.is_empty() {
        format!("all primes <= {pmax}")
    } else {
        format!("all primes <= {pmax} and prime factors {big_factors:?}")
    };
    Ok(SeriesValue {
        value: value * tail.exp(),
        pmax,
        tail_log_bound: tail,
        exact_part,
    })
}

/// Many singular series sharing one prime table.
pub fn singular_series_batch(ns: &[i64], pmax: u64) -> Result<Vec<SeriesValue>> {
    let primes = primes_for(pmax)?;
    ns.iter()
        .map(|&n| singular_series_with(n, pmax, Some(&primes)))
        .collect()
}

/// `Σ_{q <= q0} A(n,q)` with a Rankin-type tail: for `σ = 1/2`,
/// `Σ_{q>q0} |A(n,q)| <= q0^{−σ} ∏_p (1 + Σ_k p^{kσ}|A(n,p^k)|)`.
pub fn singular_series_divisor_sum(n: i64, q0: u64) -> Result<RInterval> {
    if n < 2 {
        return domain(format!("divisor sum: n = {n} must be >= 2"));
    }
    let two: Vec<RInterval> = [1u64, 2, 4, 8]
        .iter()
        .map(|&q| Ok(RInterval::from_ratio(&a_of(n, q)?)))
        .collect::<Result<_>>()?;
    let three = RInterval::from_ratio(&a_of(n, 3)?);
    let primes = primes_for(q0.max(13))?;
    let odd: Vec<(u64, RInterval)> = primes
        .iter()
        .filter(|&&p| p >= 5 && p <= q0)
        .map(|&p| (p, ratio_interval(b_prime_closed_form(n, p), phi4(p))))
        .collect();

    // Truncated sum over q = 2^e · 3^f · (squarefree product of primes >= 5).
    fn walk(odd: &[(u64, RInterval)], start: usize, m: u64, cap: u64, val: RInterval, acc: &mut RInterval) {
        *acc = *acc + val;
        for i in start..odd.len() {
            let (p, a) = odd[i];
            if m * p > cap {
                break;
            }
            walk(odd, i + 1, m * p, cap, val * a, acc);
        }
    }
    let mut total = RInterval::ZERO;
    for (e, &a2) in two.iter().enumerate() {
        for (f, a3) in [(1u64, RInterval::ONE), (3, three)] {
            let m = (1u64 << e) * f;
            if m <= q0 {
                walk(&odd, 0, m, q0, a2 * a3, &mut total);
            }
        }
    }

    // Rankin factor.
    let sqrt_p = |p: u64| RInterval::from_u64(p).sqrt();
    let mut rankin = RInterval::ONE
        + sqrt_p(2) * two[1].abs()
        + RInterval::point(2.0) * two[2].abs()
        + sqrt_p(8) * two[3].abs();
    rankin = rankin * (RInterval::ONE + sqrt_p(3) * three.abs());
    let pcut = *primes.last().unwrap();
    for &(p, a) in &odd {
        rankin = rankin * (RInterval::ONE + sqrt_p(p) * a.abs());
    }
    for (p, _) in factorize(n as u64)? {
        if p > pcut {
            let a = ratio_interval(b_prime_closed_form(n, p), phi4(p));
            rankin = rankin * (RInterval::ONE + sqrt_p(p) * a.abs());
        }
    }
    // Primes beyond pcut not dividing n: p^{1/2}|A| <= K p^{-3/2}.
    let k = tail_constant(&Poly::new(vec![1, 10, 5]), &phi4_poly(), (pcut + 1) as f64);
    let log_rest = k * prime_tail_inv_three_halves(pcut);
    rankin = rankin * log_rest.exp();
    let tail = rankin / RInterval::from_u64(q0).sqrt();
    Ok(total + RInterval::new(-tail.hi(), tail.hi()))
}

/// `𝐒(h)` together with its comparison bound
/// `3·f₅(h)·c₄·∏_{p|h, p>5}(1 + 1/c(p))` where `f₅` is the exact local factor at 5.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SboldValue {
    pub series: SeriesValue,
    /// `None` when `3 ∤ h` (the series is then exactly zero).
    pub bound_form: Option<RInterval>,
}

/// `𝐒(h) = ∏_{p>2} (1 + 𝐁(p,h)/(p−1)⁴)`.
pub fn sbold(h: i64, pmax: u64) -> Result<SboldValue> {
    sbold_with(h, pmax, None)
}

pub fn sbold_with(h: i64, pmax: u64, c4: Option<RInterval>) -> Result<SboldValue> {
    if h == 0 {
        return domain("sbold: h must be nonzero");
    }
    if pmax < 13 {
        return domain("sbold: pmax must be >= 13");
    }
    if h % 3 != 0 {
        // 1 + 𝐁(3,h)/16 = 1 − 16/16.
        return Ok(SboldValue {
            series: SeriesValue {
                value: RInterval::ZERO,
                pmax,
                tail_log_bound: RInterval::ZERO,
                exact_part: "p = 3 factor vanishes".into(),
            },
            bound_form: None,
        });
    }
    let primes = primes_for(pmax)?;
    let mut value = RInterval::ONE;
    for &p in primes.iter().skip(1) {
        value = value * ratio_interval(phi4(p) + bbold_closed_form(p, h), phi4(p));
    }
    let mut big = Vec::new();
    for (p, _) in factorize(h.unsigned_abs())? {
        if p > pmax {
            value = value * ratio_interval(phi4(p) + bbold_closed_form(p, h), phi4(p));
            big.push(p);
        }
    }
    let k = tail_constant(&Poly::new(vec![1, 10, 5]), &phi4_poly(), (pmax + 1) as f64);
    let tail = log_tail(k, pmax);
    let c4 = match c4 {
        Some(c) => c,
        None => c3_c4_with(SERIES_PMAX)?.c4,
    };
    let mut bound = RInterval::point(3.0) * RInterval::from_ratio(&local_factor_five(h)) * c4;
    for (p, _) in factorize(h.unsigned_abs())? {
        if p > 5 {
            bound = bound * one_plus_inv_c(p);
        }
    }
    let exact_part = if big.is_empty() {
        format!("all primes <= {pmax}")
    } else {
        format!("all primes <= {pmax} and prime factors {big:?}")
    };
    Ok(SboldValue {
        series: SeriesValue {
            value: value * tail.exp(),
            pmax,
            tail_log_bound: tail,
            exact_part,
        },
        bound_form: Some(bound),
    })
}

/// Enclosures of `c₃ = ∏_{p>5} (1 + 1/c(p))/(1 + 1/(p−1))` and
/// `c₄ = ∏_{p>5} (1 + a(p)/(p−1)⁴)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct C3C4 {
    pub c3: RInterval,
    pub c4: RInterval,
    pub pmax: u64,
    pub c3_tail: RInterval,
    pub c4_tail: RInterval,
    /// Partial products at `pmax / 10`, for the monotonicity record.
    pub c3_coarse: RInterval,
    pub c4_coarse: RInterval,
}

pub fn c3_c4() -> Result<C3C4> {
    c3_c4_with(CONSTANTS_PMAX)
}

fn c3_c4_tail_constants(x0: f64) -> (RInterval, RInterval) {
    let mut k3 = RInterval::ZERO;
    let mut k4 = RInterval::ZERO;
    for class in [1u64, 3] {
        let a = a_poly(class);
        let b = b_poly(class);
        let f = phi4_poly();
        let x = Poly::new(vec![0, 1]);
        let pm1 = Poly::new(vec![-1, 1]);
        let num3 = f.add(&b).mul(&pm1).sub(&f.add(&a).mul(&x));
        let den3 = f.add(&a).mul(&x);
        k3 = k3.max(tail_constant(&num3, &den3, x0));
        k4 = k4.max(tail_constant(&a, &f, x0));
    }
    (k3, k4)
}

pub fn c3_c4_with(pmax: u64) -> Result<C3C4> {
    if pmax < 1000 {
        return domain("c3_c4: pmax must be >= 1000");
    }
    let primes = primes_for(pmax)?;
    let coarse_at = pmax / 10;
    let (mut c3, mut c4) = (RInterval::ONE, RInterval::ONE);
    let (mut c3_coarse, mut c4_coarse) = (RInterval::ONE, RInterval::ONE);
    for &p in primes.iter().filter(|&&p| p > 5) {
        if p > coarse_at && c3_coarse == RInterval::ONE {
            let (k3, k4) = c3_c4_tail_constants((coarse_at + 1) as f64);
            c3_coarse = c3 * log_tail(k3, coarse_at).exp();
            c4_coarse = c4 * log_tail(k4, coarse_at).exp();
        }
        let pi = p as i128;
        let (a, b, f) = (a_weight(p), b_weight(p), phi4(p));
        c3 = c3 * ratio_interval((f + b) * (pi - 1), (f + a) * pi);
        c4 = c4 * ratio_interval(f + a, f);
    }
    let (k3, k4) = c3_c4_tail_constants((pmax + 1) as f64);
    let t3 = log_tail(k3, pmax);
    let t4 = log_tail(k4, pmax);
    Ok(C3C4 {
        c3: c3 * t3.exp(),
        c4: c4 * t4.exp(),
        pmax,
        c3_tail: t3,
        c4_tail: t4,
        c3_coarse,
        c4_coarse,
    })
}

/// Per-`h` weight used in [`sum_r7_weighted`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum R7Mode {
    /// `κ(h)·∏_{p|h, p>5}(1 + 1/c(p))`.
    Kappa,
    /// `3·c₄·κ̃(h)·∏_{p|h, p>5}(1 + 1/c(p))` with `κ̃ = κ·[3 | h]`.
    KappaC4,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SumR7Report {
    pub l: u32,
    pub mode: R7Mode,
    /// `Σ_{h≠0} r₇(h)·weight(h)`.
    pub lhs: RInterval,
    /// `lhs / L¹⁴`.
    pub ratio_l14: RInterval,
    /// `lhs / (L−3)¹⁴`, normalised by the number of exponent tuples.
    pub ratio_box: RInterval,
    /// Number of `h ≠ 0` in the support.
    pub support: usize,
    /// Contributions of `h` and `−h` coincide for every `h`.
    pub symmetric: bool,
    /// No `h` with `3 ∤ h` received a nonzero weight.
    pub nonmultiples_of_three_vanish: bool,
}

pub fn sum_r7_weighted(l: u32, mode: R7Mode) -> Result<SumR7Report> {
    if !(10..=18).contains(&l) {
        return domain(format!("sum_r7_weighted: L = {l} outside 10..=18"));
    }
    let hist = crate::powers2::r_t_histogram(7, l)?;
    let kmax = hist.max_k();
    let spf = SpfTable::new(kmax as usize + 1);
    let plimit = kmax as u64 + 1;
    let mut inv_c = vec![RInterval::ONE; plimit as usize + 1];
    for p in primes_up_to(plimit)? {
        if p > 5 {
            inv_c[p as usize] = one_plus_inv_c(p);
        }
    }
    let c4 = match mode {
        R7Mode::Kappa => RInterval::ONE,
        R7Mode::KappaC4 => c3_c4_with(SERIES_PMAX)?.c4,
    };
    let weight = |h: i64| -> Result<RInterval> {
        if mode == R7Mode::KappaC4 && h % 3 != 0 {
            return Ok(RInterval::ZERO);
        }
        let mut w = RInterval::from_ratio(&kappa(h)?);
        for p in spf.distinct_primes(h.unsigned_abs() / 16) {
            if p > 5 {
                w = w * inv_c[p as usize];
            }
        }
        if mode == R7Mode::KappaC4 {
            w = RInterval::point(3.0) * c4 * w;
        }
        Ok(w)
    };
    let mut lhs = RInterval::ZERO;
    let mut symmetric = true;
    let mut vanish = true;
    let mut support = 0usize;
    for k in 1..=kmax {
        let (rp, rm) = (hist.count_k(k), hist.count_k(-k));
        if rp == 0 && rm == 0 {
            continue;
        }
        let h = 16 * k;
        let (wp, wm) = (weight(h)?, weight(-h)?);
        let cp = RInterval::from_i128(rp as i128) * wp;
        let cm = RInterval::from_i128(rm as i128) * wm;
        symmetric &= rp == rm && cp == cm;
        if h % 3 != 0 && (wp != RInterval::ZERO || wm != RInterval::ZERO) {
            vanish = false;
        }
        support += (rp > 0) as usize + (rm > 0) as usize;
        lhs = lhs + cp + cm;
    }
    let lf = RInterval::from_u64(l as u64);
    let boxn = RInterval::from_u64(l as u64 - 3);
    Ok(SumR7Report {
        l,
        mode,
        lhs,
        ratio_l14: lhs / lf.powi(14),
        ratio_box: lhs / boxn.powi(14),
        support,
        symmetric,
        nonmultiples_of_three_vanish: vanish,
    })
}

/// `|A(n,p)|·(p−1)⁴ <= 5p² + 10p + 1` for `p ∤ n` and all primes `5 <= p <= limit`.
pub fn check_pointwise_tail_bound(limit: u64) -> Result<bool> {
    for p in primes_up_to(limit)?.into_iter().filter(|&p| p >= 5) {
        let bound = 5 * (p as i128).pow(2) + 10 * p as i128 + 1;
        // B(n,p) for p ∤ n depends only on the class (−n/p).
        let nr = (2..p as i64).find(|&x| jacobi(x, p) == -1).unwrap();
        for n in [1i64, nr] {
            if b_prime_closed_form(n, p).abs() > bound || bbold_closed_form(p, n).abs() > bound {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;
    use proptest::prelude::*;

    fn r(n: i64, d: i64) -> ExactRational {
        ExactRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn weight_examples() {
        let w = abc_weights(7).unwrap();
        assert_eq!((w.a_val, w.b_val, w.c_val), (-64, 384, r(11, 4)));
        let w = abc_weights(11).unwrap();
        assert_eq!((w.a_val, w.b_val, w.c_val), (-144, 1440, r(616, 99)));
        let w = abc_weights(13).unwrap();
        assert_eq!((w.a_val, w.b_val), (480, 2976));
        assert!(abc_weights(5).is_err());
    }

    #[test]
    fn weights_match_local_table() {
        for p in primes_up_to(200).unwrap().into_iter().filter(|&p| p > 5) {
            let w = abc_weights(p).unwrap();
            assert_eq!(w.b_val, bbold_closed_form(p, 0));
            let cls: Vec<i128> = (1..p as i64).map(|h| bbold_closed_form(p, h)).collect();
            assert_eq!(w.a_val, *cls.iter().max().unwrap());
            let lhs = ExactRational::one() + ExactRational::one() / &w.c_val;
            let f = BigInt::from(phi4(p));
            let rhs = ExactRational::new(&f + w.b_val, f.clone()) / ExactRational::new(&f + w.a_val, f);
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn kappa_examples() {
        assert_eq!(kappa(15).unwrap(), r(3, 2));
        assert_eq!(kappa(1).unwrap(), r(5, 4));
        assert_eq!(kappa(3).unwrap(), r(5, 16));
        assert!(kappa(0).is_err());
        for h in 1..200 {
            assert_eq!(kappa(h).unwrap(), kappa(-h).unwrap());
        }
    }

    #[test]
    fn tail_bound_machine_check() {
        assert!(check_pointwise_tail_bound(10_000).unwrap());
    }

    #[test]
    fn tail_constant_dominates_sampled_ratios() {
        let num = Poly::new(vec![1, 10, 5]);
        let den = phi4_poly();
        let k = tail_constant(&num, &den, 100.0);
        for p in 100..5000i128 {
            let v = num.eval(p) as f64 / den.eval(p) as f64 * (p * p) as f64;
            assert!(v <= k.hi(), "p={p}");
        }
    }

    #[test]
    fn prime_tail_bounds_hold() {
        let ps = primes_up_to(2_000_000).unwrap();
        for cut in [100u64, 1000, 10_000] {
            let s: f64 = ps.iter().filter(|&&p| p > cut).map(|&p| 1.0 / (p as f64 * p as f64)).sum();
            assert!(s < prime_tail_inv_sq(cut).hi());
            let s: f64 = ps.iter().filter(|&&p| p > cut).map(|&p| (p as f64).powf(-1.5)).sum();
            assert!(s < prime_tail_inv_three_halves(cut).hi());
        }
    }

    #[test]
    fn two_and_three_factors_give_24() {
        for n in (4..2000i64).step_by(24) {
            let two = ExactRational::one() + a_of(n, 2).unwrap() + a_of(n, 4).unwrap() + a_of(n, 8).unwrap();
            let three = ExactRational::one() + a_of(n, 3).unwrap();
            assert_eq!(two * three, r(24, 1));
        }
    }

    #[test]
    fn singular_series_positive_and_consistent() {
        let s = singular_series(1_000_012, 10_000).unwrap();
        assert!(s.value.lo() > 0.0);
        assert_eq!(a_of(4, 5).unwrap(), r(-11, 16));
        for n in [28i64, 52, 100] {
            let e5 = singular_series(n, SERIES_PMAX).unwrap().value;
            let e3 = singular_series_divisor_sum(n, 10_000).unwrap();
            assert!(e5.intersects(&e3), "n={n}: {e5:?} vs {e3:?}");
        }
        assert!(singular_series(1, 100).is_err());
    }

    #[test]
    fn singular_series_floor_on_sample() {
        let ns: Vec<i64> = (0..200).map(|i| 4 + 24 * (i * 4999 % 41_000)).collect();
        for s in singular_series_batch(&ns, 10_000).unwrap() {
            assert!(s.value.lo() > 0.5);
        }
    }

    #[test]
    fn divisor_sum_agrees_on_random_n() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let n: i64 = rng.gen_range(2..1_000_000);
            let e5 = singular_series(n, 20_000).unwrap().value;
            let e3 = singular_series_divisor_sum(n, 10_000).unwrap();
            assert!(e5.intersects(&e3), "n={n}");
        }
    }

    #[test]
    fn sbold_examples() {
        for h in [1i64, 2, 4, 5, -7, 100] {
            assert_eq!(sbold(h, 1000).unwrap().series.value, RInterval::ZERO);
        }
        assert!(sbold(0, 1000).is_err());
        let v = sbold(48, 1000).unwrap();
        assert!(v.series.value.lo() > 0.0);
        for h in (6..=600i64).step_by(6) {
            let v = sbold(h, 5000).unwrap();
            assert!(v.series.value.lo() >= 0.0);
            assert!(v.series.value.hi() <= v.bound_form.unwrap().hi() + 1e-9, "h={h}");
        }
    }

    #[test]
    fn c3_c4_values() {
        let c = c3_c4().unwrap();
        let coarse = c3_c4_with(200_000).unwrap();
        assert!(coarse.c3.contains_interval(&c.c3) || coarse.c3.intersects(&c.c3));
        assert!(c.c3.hi() <= 1.3904, "{:?}", c.c3);
        assert!(c.c4.hi() <= 0.9743, "{:?}", c.c4);
        assert!(c.c3.width() < 1e-5 && c.c4.width() < 1e-5);
        assert!(c.c3_coarse.intersects(&c.c3) && c.c4_coarse.intersects(&c.c4));
        assert!(c.c3_coarse.width() > c.c3.width());
    }

    #[test]
    fn r7_sums() {
        let a = sum_r7_weighted(12, R7Mode::KappaC4).unwrap();
        assert!(a.symmetric && a.nonmultiples_of_three_vanish);
        assert!(a.ratio_l14.lo() > 0.0 && a.ratio_l14.hi() < 2.0);
        let b = sum_r7_weighted(12, R7Mode::Kappa).unwrap();
        assert!(b.symmetric);
        assert!(sum_r7_weighted(9, R7Mode::Kappa).is_err());
    }

    proptest! {
        #[test]
        fn c_is_multiplicative(i in 3usize..60, j in 3usize..60) {
            prop_assume!(i != j);
            let ps = primes_up_to(400).unwrap();
            let (p, q) = (ps[i], ps[j]);
            prop_assert_eq!(c_of(p * q).unwrap(), c_prime(p).unwrap() * c_prime(q).unwrap());
            prop_assert!(c_prime(p).unwrap().to_f64().unwrap() > 0.0);
        }
    }
}
