//! Elementary number theory on machine integers.
//!
//! Everything here works on `u64`/`i64`; exact rationals use [`ExactRational`].

use std::sync::OnceLock;

use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{domain, resource, Result};

/// Reduced rational with a positive denominator.
pub type ExactRational = BigRational;

/// Largest limit accepted by [`primes_up_to`].
pub const SIEVE_CAP: u64 = 400_000_000;

/// Seed used for the rho method unless a caller supplies one.
pub const DEFAULT_RHO_SEED: u64 = 0x5eed_2468;

/// Budget for [`factorize_with`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct FactorConfig {
    /// Trial division runs up to this bound.
    pub trial_limit: u64,
    /// Composite cofactors above this bound are refused.
    pub cofactor_cap: u64,
    pub seed: u64,
}

impl Default for FactorConfig {
    fn default() -> Self {
        FactorConfig {
            trial_limit: 1_000_000,
            cofactor_cap: 1_000_000_000_000_000_000,
            seed: DEFAULT_RHO_SEED,
        }
    }
}

/// Factorization of `n` and the multiplicative functions derived from it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NatStats {
    pub n: u64,
    pub factorization: Vec<(u64, u32)>,
    pub phi: u64,
    pub mu: i8,
    pub tau: u64,
}

/// All primes `<= limit`, in increasing order.
pub fn primes_up_to(limit: u64) -> Result<Vec<u64>> {
    if limit > SIEVE_CAP {
        return resource(format!("sieve limit {limit} exceeds cap {SIEVE_CAP}"));
    }
    let mut out = Vec::new();
    if limit < 2 {
        return Ok(out);
    }
    out.push(2);
    if limit < 3 {
        return Ok(out);
    }
    // Segmented sieve over odd numbers.
    let root = isqrt(limit);
    let mut small = vec![true; root as usize + 1];
    let mut base: Vec<u64> = Vec::new();
    let mut i = 3u64;
    while i <= root {
        if small[i as usize] {
            base.push(i);
            let mut j = i * i;
            while j <= root {
                small[j as usize] = false;
                j += 2 * i;
            }
        }
        i += 2;
    }
    out.reserve((limit as f64 / (limit as f64).ln() * 1.2) as usize);
    const SEG: u64 = 1 << 18;
    let mut seg = vec![true; SEG as usize];
    let mut lo = 3u64;
    while lo <= limit {
        // seg[k] represents lo + 2k.
        let hi = (lo + 2 * SEG - 1).min(limit);
        let len = ((hi - lo) / 2 + 1) as usize;
        seg[..len].fill(true);
        for &p in &base {
            if p * p > hi {
                break;
            }
            let mut start = (p * p).max(lo.div_ceil(p) * p);
            if start % 2 == 0 {
                start += p;
            }
            let mut j = (start - lo) / 2;
            while j < len as u64 {
                seg[j as usize] = false;
                j += p;
            }
        }
        for (k, &is_p) in seg[..len].iter().enumerate() {
            if is_p {
                out.push(lo + 2 * k as u64);
            }
        }
        lo += 2 * SEG;
    }
    Ok(out)
}

/// The `r`-th prime (1-based).
pub fn nth_prime(r: u64) -> Result<u64> {
    if r == 0 {
        return domain("nth_prime: r must be >= 1");
    }
    let bound = if r < 6 {
        13
    } else {
        let x = r as f64;
        (x * (x.ln() + x.ln().ln())).ceil() as u64 + 1
    };
    if bound > SIEVE_CAP {
        return resource(format!("nth_prime({r}) needs a sieve beyond cap {SIEVE_CAP}"));
    }
    let ps = primes_up_to(bound)?;
    Ok(ps[(r - 1) as usize])
}

/// Shared prime table up to 2·10⁷, built on first use.
pub fn small_primes() -> &'static [u64] {
    static TABLE: OnceLock<Vec<u64>> = OnceLock::new();
    TABLE.get_or_init(|| primes_up_to(20_000_000).expect("within cap"))
}

pub fn isqrt(n: u64) -> u64 {
    if n < 2 {
        return n;
    }
    let mut x = (n as f64).sqrt() as u64;
    while x * x > n {
        x -= 1;
    }
    while (x + 1).checked_mul(x + 1).is_some_and(|v| v <= n) {
        x += 1;
    }
    x
}

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller–Rabin for all 64-bit inputs (Jim Sinclair's base set).
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'bases: for a in [2u64, 325, 9375, 28178, 450775, 9780504, 1795265022] {
        let a = a % n;
        if a == 0 {
            continue;
        }
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

fn brent_rho(n: u64, rng: &mut ChaCha8Rng) -> u64 {
    if n % 2 == 0 {
        return 2;
    }
    loop {
        let c = rng.gen_range(1..n);
        let mut y = rng.gen_range(0..n);
        let m = 128u64;
        let (mut g, mut r, mut q) = (1u64, 1u64, 1u64);
        let mut x = y;
        let mut ys = y;
        let f = |v: u64| (mul_mod(v, v, n) + c) % n;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..m.min(r - k) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = q.gcd(&n);
                k += m;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = x.abs_diff(ys).gcd(&n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
    }
}

fn split_into(n: u64, cfg: &FactorConfig, rng: &mut ChaCha8Rng, out: &mut Vec<u64>) -> Result<()> {
    if n == 1 {
        return Ok(());
    }
    if is_prime(n) {
        out.push(n);
        return Ok(());
    }
    if n > cfg.cofactor_cap {
        return resource(format!(
            "composite cofactor {n} exceeds factoring cap {}",
            cfg.cofactor_cap
        ));
    }
    let d = brent_rho(n, rng);
    split_into(d, cfg, rng, out)?;
    split_into(n / d, cfg, rng, out)
}

/// Prime factorization as sorted `(prime, exponent)` pairs; `1` gives `[]`.
pub fn factorize_with(n: u64, cfg: &FactorConfig) -> Result<Vec<(u64, u32)>> {
    if n == 0 {
        return domain("cannot factor 0");
    }
    let mut ps: Vec<u64> = Vec::new();
    let mut m = n;
    while m % 2 == 0 {
        ps.push(2);
        m /= 2;
    }
    let mut p = 3u64;
    while p <= cfg.trial_limit && p * p <= m {
        while m % p == 0 {
            ps.push(p);
            m /= p;
        }
        p += 2;
    }
    if m > 1 {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        split_into(m, cfg, &mut rng, &mut ps)?;
    }
    ps.sort_unstable();
    let mut out: Vec<(u64, u32)> = Vec::new();
    for p in ps {
        match out.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => out.push((p, 1)),
        }
    }
    Ok(out)
}

pub fn factorize(n: u64) -> Result<Vec<(u64, u32)>> {
    factorize_with(n, &FactorConfig::default())
}

fn stats_from(n: u64, factorization: Vec<(u64, u32)>) -> NatStats {
    let mut phi = 1u64;
    let mut tau = 1u64;
    let mut mu = 1i8;
    for &(p, e) in &factorization {
        phi *= (p - 1) * p.pow(e - 1);
        tau *= e as u64 + 1;
        mu = if e >= 2 { 0 } else { -mu };
    }
    NatStats {
        n,
        factorization,
        phi,
        mu,
        tau,
    }
}

pub fn multiplicative_stats(n: u64) -> Result<NatStats> {
    Ok(stats_from(n, factorize(n)?))
}

pub fn multiplicative_stats_with(n: u64, cfg: &FactorConfig) -> Result<NatStats> {
    Ok(stats_from(n, factorize_with(n, cfg)?))
}

/// Jacobi symbol `(a/n)` for odd `n >= 1`.
///
/// # Panics
/// If `n` is even.
pub fn jacobi(a: i64, n: u64) -> i32 {
    assert!(n % 2 == 1, "jacobi: modulus {n} must be odd");
    let mut a = a.rem_euclid(n as i64) as u64;
    let mut n = n;
    let mut s = 1i32;
    while a != 0 {
        let tz = a.trailing_zeros();
        a >>= tz;
        if tz % 2 == 1 && (n % 8 == 3 || n % 8 == 5) {
            s = -s;
        }
        if a % 4 == 3 && n % 4 == 3 {
            s = -s;
        }
        std::mem::swap(&mut a, &mut n);
        a %= n;
    }
    if n == 1 {
        s
    } else {
        0
    }
}

/// Ramanujan sum `c_q(n)`, through the multiplicative formula at each `p^e || q`.
pub fn ramanujan(q: u64, n: i64) -> i64 {
    assert!(q >= 1);
    let f = factorize(q).expect("modulus within factoring budget");
    ramanujan_factored(&f, n)
}

pub fn ramanujan_factored(factorization: &[(u64, u32)], n: i64) -> i64 {
    let mut acc = 1i64;
    for &(p, e) in factorization {
        let pe1 = p.pow(e - 1);
        let pe = pe1 * p;
        let r = n.unsigned_abs();
        acc *= if r % pe == 0 {
            (pe - pe1) as i64
        } else if r % pe1 == 0 {
            -(pe1 as i64)
        } else {
            return 0;
        };
    }
    acc
}

/// Order of `2^e (mod p^k)` for an odd prime power, given `ord_p(2)`.
fn order2_prime_power(p: u64, k: u32) -> Result<u64> {
    let pk = p.pow(k);
    let mut ord = p - 1;
    for (r, _) in factorize(p - 1)? {
        while ord % r == 0 && pow_mod(2, ord / r, p) == 1 {
            ord /= r;
        }
    }
    while pow_mod(2, ord, pk) != 1 {
        ord *= p;
    }
    Ok(ord)
}

/// Multiplicative order of 2 modulo an odd `q >= 3`: lcm of the orders at
/// each prime power of `q`.
pub fn mult_order2(q: u64) -> Result<u64> {
    if q % 2 == 0 || q < 3 {
        return domain(format!("mult_order2: q = {q} must be odd and >= 3"));
    }
    let mut acc = 1u64;
    for (p, k) in factorize(q)? {
        acc = acc.lcm(&order2_prime_power(p, k)?);
    }
    Ok(acc)
}

/// `2^e - 1` factored through its cyclotomic pieces `Φ_d(2)`, `d | e`, each
/// of which stays far below the rho cap for `e <= 63`.
pub fn mersenne_factorization(e: u32) -> Result<Vec<(u64, u32)>> {
    if !(1..=63).contains(&e) {
        return domain(format!("2^{e}-1: exponent must lie in 1..=63"));
    }
    let mut all: Vec<(u64, u32)> = Vec::new();
    for d in 1..=e {
        if e % d != 0 {
            continue;
        }
        let phi_d = cyclotomic_at_two(d);
        let v = phi_d.to_u64().expect("Φ_d(2) < 2^63");
        for (p, k) in factorize(v)? {
            match all.iter_mut().find(|(q, _)| *q == p) {
                Some((_, kk)) => *kk += k,
                None => all.push((p, k)),
            }
        }
    }
    all.sort_unstable();
    Ok(all)
}

/// `Φ_d(2) = ∏_{k | d} (2^k − 1)^{μ(d/k)}`.
fn cyclotomic_at_two(d: u32) -> BigUint {
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for k in 1..=d {
        if d % k != 0 {
            continue;
        }
        let term = (BigUint::one() << k) - 1u32;
        match mobius_small(d / k) {
            1 => num *= term,
            -1 => den *= term,
            _ => {}
        }
    }
    num / den
}

fn mobius_small(n: u32) -> i32 {
    let mut n = n;
    let mut mu = 1;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            mu = -mu;
        }
        p += 1;
    }
    if n > 1 {
        mu = -mu;
    }
    mu
}

/// Smallest-prime-factor table for fast factorization of many small integers.
#[derive(Clone, Debug)]
pub struct SpfTable {
    spf: Vec<u32>,
}

impl SpfTable {
    pub fn new(limit: usize) -> Self {
        let mut spf = vec![0u32; limit + 1];
        for i in 2..=limit {
            if spf[i] == 0 {
                let mut j = i;
                while j <= limit {
                    if spf[j] == 0 {
                        spf[j] = i as u32;
                    }
                    j += i;
                }
            }
        }
        SpfTable { spf }
    }

    pub fn limit(&self) -> u64 {
        self.spf.len() as u64 - 1
    }

    /// Distinct prime factors of `n` (`1 <= n <= limit`).
    pub fn distinct_primes(&self, n: u64) -> Vec<u64> {
        let mut n = n as usize;
        let mut out = Vec::new();
        while n > 1 {
            let p = self.spf[n] as usize;
            out.push(p as u64);
            while n % p == 0 {
                n /= p;
            }
        }
        out
    }

    pub fn factorize(&self, n: u64) -> Vec<(u64, u32)> {
        let mut n = n as usize;
        let mut out: Vec<(u64, u32)> = Vec::new();
        while n > 1 {
            let p = self.spf[n] as usize;
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p as u64, e));
        }
        out
    }
}

/// `τ(n)` for `0 <= n <= limit` (with `τ(0) = 0`).
pub fn divisor_counts(limit: usize) -> Vec<u32> {
    let mut tau = vec![0u32; limit + 1];
    for d in 1..=limit {
        let mut m = d;
        while m <= limit {
            tau[m] += 1;
            m += d;
        }
    }
    tau
}

pub fn is_squarefree(factorization: &[(u64, u32)]) -> bool {
    factorization.iter().all(|&(_, e)| e == 1)
}
