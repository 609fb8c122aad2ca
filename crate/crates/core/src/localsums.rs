//! Exact local sums modulo `q`.
//!
//! Every fourth-power Gauss-sum expression here expands into a sum over
//! residue tuples of a Ramanujan sum. For instance
//!
//! ```text
//! B(n,q) = Σ_{(a,q)=1} C*(q,a)^4 e(-an/q) = Σ_{m ∈ (Z/q)^×⁴} c_q(m1²+m2²+m3²+m4² − n)
//! ```
//!
//! so each value is `Σ_r N(r) c_q(r − s)` where `N` is the distribution of the
//! quadratic form over the relevant residue boxes. `N` is built by cyclic
//! convolution of one-variable square distributions and cached per modulus.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::arith::{factorize, is_prime, jacobi, ExactRational};
use crate::error::{domain, resource, Result};
use crate::interval::CInterval;
use crate::ntt;

/// Moduli above this are refused by the counting routines.
pub const EXACT_CAP: u64 = 1_000_000;

/// Direct Gauss-sum summation limit.
pub const GAUSS_CAP: u64 = 1_000_000;

/// Distributions for moduli up to this size are memoised.
const CACHE_LIMIT: u64 = 20_000;

/// Below this modulus cyclic convolution is done directly.
const DIRECT_CONV_LIMIT: u64 = 4096;

/// One variable of a diagonal quadratic form: `coef·x²` with `x` running over
/// units or over all residues.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Var {
    Unit(u64),
    Full(u64),
}

fn unit_mask(q: u64) -> Vec<bool> {
    let mut mask = vec![true; q as usize];
    if q == 1 {
        return mask;
    }
    for (p, _) in factorize(q).expect("modulus factors") {
        let mut j = 0;
        while j < q {
            mask[j as usize] = false;
            j += p;
        }
    }
    mask
}

fn var_dist(q: u64, v: Var, units: &[bool]) -> Vec<u128> {
    let mut d = vec![0u128; q as usize];
    let (coef, only_units) = match v {
        Var::Unit(c) => (c, true),
        Var::Full(c) => (c, false),
    };
    for x in 0..q {
        if only_units && !units[x as usize] {
            continue;
        }
        let r = ((x as u128 * x as u128 % q as u128) * coef as u128 % q as u128) as usize;
        d[r] += 1;
    }
    d
}

fn cyclic_convolve(a: &[u128], b: &[u128], q: u64) -> Result<Vec<u128>> {
    let n = q as usize;
    if q <= DIRECT_CONV_LIMIT {
        let mut out = vec![0u128; n];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                if y != 0 {
                    let k = if i + j >= n { i + j - n } else { i + j };
                    out[k] += x * y;
                }
            }
        }
        return Ok(out);
    }
    let bound = a.iter().sum::<u128>() * b.iter().sum::<u128>();
    let lin = ntt::convolve(a, b, bound)?;
    let mut out = vec![0u128; n];
    for (k, v) in lin.into_iter().enumerate() {
        out[k % n] += v;
    }
    Ok(out)
}

type FormKey = (u64, Vec<Var>);

fn form_cache() -> &'static Mutex<HashMap<FormKey, Arc<Vec<u128>>>> {
    static C: OnceLock<Mutex<HashMap<FormKey, Arc<Vec<u128>>>>> = OnceLock::new();
    C.get_or_init(|| Mutex::new(HashMap::new()))
}

fn ramanujan_cache() -> &'static Mutex<HashMap<u64, Arc<Vec<i64>>>> {
    static C: OnceLock<Mutex<HashMap<u64, Arc<Vec<i64>>>>> = OnceLock::new();
    C.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Distribution `N(r) = #{x : Σ coef_i x_i² ≡ r (mod q)}`.
fn form_dist(q: u64, vars: &[Var]) -> Result<Arc<Vec<u128>>> {
    if q > EXACT_CAP {
        return resource(format!("modulus {q} exceeds exact-counting cap {EXACT_CAP}"));
    }
    let key = (q, vars.to_vec());
    if q <= CACHE_LIMIT {
        if let Some(d) = form_cache().lock().unwrap().get(&key) {
            return Ok(d.clone());
        }
    }
    let units = unit_mask(q);
    let mut acc = var_dist(q, vars[0], &units);
    for &v in &vars[1..] {
        acc = cyclic_convolve(&acc, &var_dist(q, v, &units), q)?;
    }
    let acc = Arc::new(acc);
    if q <= CACHE_LIMIT {
        form_cache().lock().unwrap().insert(key, acc.clone());
    }
    Ok(acc)
}

/// Table of `c_q(r)` for `0 <= r < q`.
fn ramanujan_table(q: u64) -> Arc<Vec<i64>> {
    if let Some(t) = ramanujan_cache().lock().unwrap().get(&q) {
        return t.clone();
    }
    let f = factorize(q).expect("modulus factors");
    let t: Vec<i64> = (0..q)
        .map(|r| crate::arith::ramanujan_factored(&f, r as i64))
        .collect();
    let t = Arc::new(t);
    if q <= CACHE_LIMIT {
        ramanujan_cache().lock().unwrap().insert(q, t.clone());
    }
    t
}

/// `Σ_r N(r) c_q(r − shift)`.
fn form_value(q: u64, vars: &[Var], shift: i64) -> Result<BigInt> {
    let dist = form_dist(q, vars)?;
    let c = ramanujan_table(q);
    let s = shift.rem_euclid(q as i64) as usize;
    let n = q as usize;
    let mut acc: i128 = 0;
    for (r, &cnt) in dist.iter().enumerate() {
        if cnt != 0 {
            let k = if r >= s { r - s } else { r + n - s };
            acc += cnt as i128 * c[k] as i128;
        }
    }
    Ok(BigInt::from(acc))
}

fn neg_mod(c: i64, q: u64) -> u64 {
    c.rem_euclid(q as i64) as u64
}

fn b_form(q: u64) -> [Var; 4] {
    [Var::Unit(1 % q); 4]
}

fn bbold_form(q: u64) -> [Var; 4] {
    let m = neg_mod(-1, q);
    [Var::Unit(1 % q), Var::Unit(1 % q), Var::Unit(m), Var::Unit(m)]
}

fn a_form(q: u64, d: u64) -> [Var; 4] {
    let m = neg_mod(-1, q);
    let dd = (d as u128 * d as u128 % q as u128) as u64;
    [
        Var::Unit(1 % q),
        Var::Unit(1 % q),
        Var::Unit(m),
        Var::Full((q - dd) % q),
    ]
}

fn check_gauss_cap(q: u64) -> Result<()> {
    if q == 0 {
        return domain("modulus must be positive");
    }
    if q > GAUSS_CAP {
        return resource(format!("modulus {q} exceeds Gauss-sum cap {GAUSS_CAP}"));
    }
    Ok(())
}

/// Enclosure of `C(q,a) = Σ_{x mod q} e(ax²/q)` by direct summation.
pub fn gauss_sum(q: u64, a: i64) -> Result<CInterval> {
    check_gauss_cap(q)?;
    let mut acc = CInterval::ZERO;
    for x in 0..q as i128 {
        acc = acc + CInterval::e_frac(a as i128 * x * x, q);
    }
    Ok(acc)
}

/// Enclosure of `C*(q,a)`, the sum restricted to `x` coprime to `q`.
pub fn gauss_sum_coprime(q: u64, a: i64) -> Result<CInterval> {
    check_gauss_cap(q)?;
    let units = unit_mask(q);
    let mut acc = CInterval::ZERO;
    for x in 0..q {
        if units[x as usize] {
            let x = x as i128;
            acc = acc + CInterval::e_frac(a as i128 * x * x, q);
        }
    }
    Ok(acc)
}

/// `B(n,q)` as an exact integer.
pub fn b_of(n: i64, q: u64) -> Result<BigInt> {
    if q == 0 {
        return domain("b_of: q must be positive");
    }
    form_value(q, &b_form(q), n)
}

/// `A(n,q) = B(n,q)/φ(q)⁴`.
pub fn a_of(n: i64, q: u64) -> Result<ExactRational> {
    let b = b_of(n, q)?;
    let phi = crate::arith::multiplicative_stats(q)?.phi;
    Ok(ExactRational::new(b, BigInt::from(phi).pow(4)))
}

/// `B(n,p)` for an odd prime from the Gauss-sum evaluation
/// `C*(p,a) = (a/p)G − 1`, `G² = (−1/p)p`.
pub fn b_prime_closed_form(n: i64, p: u64) -> i128 {
    let pi = p as i128;
    let ps = jacobi(-1, p) as i128 * pi;
    let base = pi * pi + 6 * ps + 1;
    if n.rem_euclid(p as i64) == 0 {
        (pi - 1) * base
    } else {
        -base - 4 * ps * (ps + 1) * jacobi(-n, p) as i128
    }
}

/// Exact and closed-form values of `𝐁(p,h) = Σ_{(a,p)=1} |C*(p,a)|⁴ e(ah/p)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BboldValue {
    #[serde(serialize_with = "crate::serde_util::display")]
    pub exact: BigInt,
    #[serde(serialize_with = "crate::serde_util::display")]
    pub closed_form: BigInt,
}

/// Case table for `𝐁(p,h)`.
pub fn bbold_closed_form(p: u64, h: i64) -> i128 {
    let pi = p as i128;
    let divides = h.rem_euclid(p as i64) == 0;
    if p % 4 == 3 {
        if divides {
            (pi - 1) * (pi + 1) * (pi + 1)
        } else {
            -(pi + 1) * (pi + 1)
        }
    } else {
        let base = pi * pi + 6 * pi + 1;
        if divides {
            (pi - 1) * base
        } else {
            -base - 4 * pi * (pi + 1) * jacobi(h, p) as i128
        }
    }
}

pub fn bbold(p: u64, h: i64) -> Result<BboldValue> {
    if p == 2 || !is_prime(p) {
        return domain(format!("bbold: p = {p} must be an odd prime"));
    }
    let exact = form_value(p, &bbold_form(p), -h)?;
    Ok(BboldValue {
        exact,
        closed_form: BigInt::from(bbold_closed_form(p, h)),
    })
}

/// `𝒜_d(q,h) = Σ_{(a,q)=1} C*(q,a)² C*(q,−a) C(q,−ad²) e(−ah/q)`.
pub fn a_d_local(q: u64, h: i64, d: u64) -> Result<BigInt> {
    if q == 0 || d == 0 {
        return domain("a_d_local: q and d must be positive");
    }
    form_value(q, &a_form(q, d), h)
}

/// Local data at an odd prime for the sieve ratio `Ω(p)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OmegaLocal {
    pub p: u64,
    pub h: i64,
    /// `𝒜₁(p,h)`.
    #[serde(serialize_with = "crate::serde_util::display")]
    pub a1: BigInt,
    /// `𝒜_p(p,h)`.
    #[serde(serialize_with = "crate::serde_util::display")]
    pub ap: BigInt,
    #[serde(serialize_with = "crate::serde_util::display")]
    pub bbold: BigInt,
    /// `1 + 𝒜₁(p,h)/(p(p−1)³)`.
    #[serde(serialize_with = "crate::serde_util::display")]
    pub middle: ExactRational,
    /// `(1 + 𝒜_p/(p(p−1)³)) / (1 + 𝒜₁/(p(p−1)³))`, or 0 when degenerate.
    #[serde(serialize_with = "crate::serde_util::display")]
    pub omega: ExactRational,
    pub degenerate: bool,
    /// Whether `(1 − Ω/p)(1 − 1/p)^{-1}·middle = 1 + 𝐁(p,h)/(p−1)⁴` holds exactly.
    pub identity_holds: bool,
}

/// `Ω(p)` as the ratio of the local densities with and without the extra
/// divisibility by `p`, followed by an exact check of the local identity.
pub fn omega_local(p: u64, h: i64) -> Result<OmegaLocal> {
    if p == 2 || !is_prime(p) {
        return domain(format!("omega_local: p = {p} must be an odd prime"));
    }
    let a1 = a_d_local(p, h, 1)?;
    let ap = a_d_local(p, h, p)?;
    let bb = form_value(p, &bbold_form(p), -h)?;
    let pb = BigInt::from(p);
    let phi = BigInt::from(p - 1);
    let scale = &pb * phi.pow(3);
    let one = ExactRational::one();
    let middle = &one + ExactRational::new(a1.clone(), scale.clone());
    let with_p = &one + ExactRational::new(ap.clone(), scale);
    let degenerate = middle.is_zero();
    let omega = if degenerate {
        ExactRational::zero()
    } else {
        &with_p / &middle
    };
    let lhs = (&one - &omega / ExactRational::from_integer(pb.clone()))
        * ExactRational::new(pb, phi.clone())
        * &middle;
    let rhs = &one + ExactRational::new(bb.clone(), phi.pow(4));
    Ok(OmegaLocal {
        p,
        h,
        a1,
        ap,
        bbold: bb,
        middle,
        omega,
        degenerate,
        identity_holds: lhs == rhs,
    })
}

/// Largest `k` for which the 2-adic term is counted directly; beyond it the
/// term vanishes because `C*(2^k, a) = 0` for odd `a` and `k >= 4`: the shift
/// `m ↦ m + 2^{k−2}` maps odd residues to odd residues and changes `m²` by
/// `2^{k−1}` modulo `2^k`, so the terms cancel in pairs.
pub const DYADIC_EXACT_MAX_K: u32 = 12;

/// `Σ_{a odd mod 2^k} C*(2^k,a)² C*(2^k,−a) C(2^k,−a) / (2^k φ(2^k)³)`.
pub fn dyadic_term(k: u32) -> Result<ExactRational> {
    if k == 0 {
        return domain("dyadic_term: k must be >= 1");
    }
    if k > DYADIC_EXACT_MAX_K {
        return Ok(ExactRational::zero());
    }
    let q = 1u64 << k;
    let s = a_d_local(q, 0, 1)?;
    let den = BigInt::from(q) * BigInt::from(q / 2).pow(3);
    Ok(ExactRational::new(s, den))
}

/// `1 + Σ_{k=1}^{kmax}` of [`dyadic_term`].
pub fn dyadic_factor(kmax: u32) -> Result<ExactRational> {
    if kmax == 0 {
        return domain("dyadic_factor: kmax must be >= 1");
    }
    let mut acc = ExactRational::one();
    for k in 1..=kmax {
        acc += dyadic_term(k)?;
    }
    Ok(acc)
}

/// Which local sum a [`LocalFactor`] carries.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum LocalKind {
    /// `B(n,p)`, factor `1 + A(n,p)`.
    Singular,
    /// `𝐁(p,h)`, factor `1 + 𝐁(p,h)/(p−1)⁴`.
    Bold,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LocalFactor {
    pub p: u64,
    pub h_or_n: i64,
    pub kind: LocalKind,
    #[serde(serialize_with = "crate::serde_util::display")]
    pub bvalue: BigInt,
    #[serde(serialize_with = "crate::serde_util::display")]
    pub factor: ExactRational,
}

pub fn local_factor(p: u64, h_or_n: i64, kind: LocalKind) -> Result<LocalFactor> {
    if p == 2 || !is_prime(p) {
        return domain(format!("local_factor: p = {p} must be an odd prime"));
    }
    let bvalue = match kind {
        LocalKind::Singular => b_of(h_or_n, p)?,
        LocalKind::Bold => bbold(p, h_or_n)?.exact,
    };
    let factor =
        ExactRational::one() + ExactRational::new(bvalue.clone(), BigInt::from(p - 1).pow(4));
    Ok(LocalFactor {
        p,
        h_or_n,
        kind,
        bvalue,
        factor,
    })
}
