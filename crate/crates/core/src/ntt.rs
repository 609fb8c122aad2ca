//! Exact integer convolution through four NTT primes and Garner recombination.
//!
//! Results are exact whenever every output coefficient is below the product
//! of the moduli (about 2^115); callers pass an a-priori bound and get a
//! resource error otherwise.

use crate::error::{resource, Result};

const PRIMES: [(u64, u64); 4] = [
    (998_244_353, 3),
    (167_772_161, 3),
    (469_762_049, 3),
    (754_974_721, 11),
];

/// Largest transform length supported by every modulus.
const MAX_LEN: usize = 1 << 23;

fn pw(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

fn transform(a: &mut [u64], p: u64, g: u64, invert: bool) {
    let n = a.len();
    let mut j = 0;
    for i in 1..n {
        let mut bit = n >> 1;
        while j & bit != 0 {
            j ^= bit;
            bit >>= 1;
        }
        j |= bit;
        if i < j {
            a.swap(i, j);
        }
    }
    let mut len = 2;
    while len <= n {
        let mut w = pw(g, (p - 1) / len as u64, p);
        if invert {
            w = pw(w, p - 2, p);
        }
        let half = len / 2;
        let mut tw = Vec::with_capacity(half);
        let mut cur = 1u64;
        for _ in 0..half {
            tw.push(cur);
            cur = cur * w % p;
        }
        for chunk in a.chunks_mut(len) {
            let (lo, hi) = chunk.split_at_mut(half);
            for k in 0..half {
                let u = lo[k];
                let v = hi[k] * tw[k] % p;
                lo[k] = if u + v >= p { u + v - p } else { u + v };
                hi[k] = if u >= v { u - v } else { u + p - v };
            }
        }
        len <<= 1;
    }
    if invert {
        let inv = pw(n as u64, p - 2, p);
        for x in a.iter_mut() {
            *x = *x * inv % p;
        }
    }
}

fn convolve_mod(a: &[u128], b: &[u128], size: usize, p: u64, g: u64) -> Vec<u64> {
    let mut fa = vec![0u64; size];
    let mut fb = vec![0u64; size];
    for (d, &s) in fa.iter_mut().zip(a) {
        *d = (s % p as u128) as u64;
    }
    for (d, &s) in fb.iter_mut().zip(b) {
        *d = (s % p as u128) as u64;
    }
    transform(&mut fa, p, g, false);
    transform(&mut fb, p, g, false);
    for (x, y) in fa.iter_mut().zip(&fb) {
        *x = *x * y % p;
    }
    transform(&mut fa, p, g, true);
    fa
}

/// Linear convolution `c[k] = Σ a[i] b[k-i]` of nonnegative sequences.
///
/// `bound` must dominate every output coefficient.
pub(crate) fn convolve(a: &[u128], b: &[u128], bound: u128) -> Result<Vec<u128>> {
    if a.is_empty() || b.is_empty() {
        return Ok(Vec::new());
    }
    let modulus_product: u128 = PRIMES.iter().map(|&(p, _)| p as u128).product();
    if bound >= modulus_product {
        return resource(format!("convolution bound {bound} exceeds exact NTT range"));
    }
    let out_len = a.len() + b.len() - 1;
    let size = out_len.next_power_of_two();
    if size > MAX_LEN {
        return resource(format!("convolution length {out_len} exceeds NTT limit"));
    }
    let residues: Vec<Vec<u64>> = PRIMES
        .iter()
        .map(|&(p, g)| convolve_mod(a, b, size, p, g))
        .collect();
    // Garner: x = r0 + p0 (t1 + p1 (t2 + p2 t3)).
    let ps: Vec<u64> = PRIMES.iter().map(|&(p, _)| p).collect();
    let mut inv = [[0u64; 4]; 4];
    for i in 0..4 {
        for j in 0..i {
            inv[j][i] = pw(ps[j] % ps[i], ps[i] - 2, ps[i]);
        }
    }
    let mut out = Vec::with_capacity(out_len);
    for k in 0..out_len {
        let mut t = [0u64; 4];
        for i in 0..4 {
            let mut v = residues[i][k];
            for j in 0..i {
                let diff = (v + ps[i] - t[j] % ps[i]) % ps[i];
                v = diff * inv[j][i] % ps[i];
            }
            t[i] = v;
        }
        let mut x: u128 = 0;
        for i in (0..4).rev() {
            x = x * ps[i] as u128 + t[i] as u128;
        }
        out.push(x);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn naive(a: &[u128], b: &[u128]) -> Vec<u128> {
        let mut c = vec![0u128; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                c[i + j] += x * y;
            }
        }
        c
    }

    #[test]
    fn large_coefficients_survive_recombination() {
        let a = vec![1u128 << 50, 3, (1u128 << 50) + 7];
        let b = vec![(1u128 << 55) + 1, 1u128 << 40];
        assert_eq!(convolve(&a, &b, 1u128 << 110).unwrap(), naive(&a, &b));
    }

    #[test]
    fn refuses_unbounded_outputs() {
        assert!(convolve(&[1], &[1], u128::MAX).is_err());
    }

    proptest! {
        #[test]
        fn matches_naive(a in prop::collection::vec(0u128..1_000_000_000_000, 1..60),
                         b in prop::collection::vec(0u128..1_000_000_000_000, 1..60)) {
            let bound = 60u128 * 1_000_000_000_000 * 1_000_000_000_000;
            prop_assert_eq!(convolve(&a, &b, bound).unwrap(), naive(&a, &b));
        }
    }
}
