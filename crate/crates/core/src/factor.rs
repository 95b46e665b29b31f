//! Primality and factorization of machine-size integers.
//!
//! Deterministic Miller-Rabin for all `u64`, trial division up to
//! [`TRIAL_LIMIT`], then Pollard rho with Brent's cycle detection for the
//! remaining cofactor.

use num_integer::Integer;

use crate::error::{Error, Result};

/// Trial division bound used before Pollard rho takes over.
pub const TRIAL_LIMIT: u64 = 1_000_000;

#[inline]
pub(crate) fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic for every `u64` with this witness set.
const MR_BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &q in &MR_BASES {
        if n % q == 0 {
            return n == q;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &MR_BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Primes `2 <= p <= limit`, ascending.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut sieve = vec![true; n + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i <= n {
        if sieve[i] {
            let mut j = i * i;
            while j <= n {
                sieve[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    sieve
        .iter()
        .enumerate()
        .filter_map(|(k, &b)| b.then_some(k as u64))
        .collect()
}

// Brent's variant: x -> x^2 + c, gcd accumulated over blocks of 128 steps.
fn brent(n: u64, c: u64) -> Option<u64> {
    let f = |x: u64| (mul_mod(x, x, n) + c) % n;
    let (mut y, mut r, mut q) = (2u64, 1u64, 1u64);
    let mut x = y;
    let mut ys = y;
    let mut g = 1u64;
    const BLOCK: u64 = 128;
    while g == 1 {
        x = y;
        for _ in 0..r {
            y = f(y);
        }
        let mut k = 0;
        while k < r && g == 1 {
            ys = y;
            for _ in 0..BLOCK.min(r - k) {
                y = f(y);
                q = mul_mod(q, x.abs_diff(y), n);
            }
            g = q.gcd(&n);
            k += BLOCK;
        }
        r *= 2;
        if r > 1 << 26 {
            return None;
        }
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
    (g != n).then_some(g)
}

fn split(n: u64) -> Result<u64> {
    for c in 1..64 {
        if let Some(d) = brent(n, c) {
            return Ok(d);
        }
    }
    Err(Error::Factorization(n))
}

fn push_factor(out: &mut Vec<(u64, u32)>, q: u64, e: u32) {
    match out.iter_mut().find(|(r, _)| *r == q) {
        Some(entry) => entry.1 += e,
        None => out.push((q, e)),
    }
}

/// Prime factorization of `n >= 1` as `(prime, exponent)` pairs sorted by prime.
pub fn factorize(n: u64) -> Result<Vec<(u64, u32)>> {
    let mut out = Vec::new();
    let mut m = n;
    let mut q = 2u64;
    while q <= TRIAL_LIMIT && q * q <= m {
        if m % q == 0 {
            let mut e = 0;
            while m % q == 0 {
                m /= q;
                e += 1;
            }
            out.push((q, e));
        }
        q += if q == 2 { 1 } else { 2 };
    }
    let mut stack = Vec::new();
    if m > 1 {
        stack.push(m);
    }
    while let Some(c) = stack.pop() {
        if is_prime(c) {
            push_factor(&mut out, c, 1);
        } else {
            let d = split(c)?;
            stack.push(d);
            stack.push(c / d);
        }
    }
    out.sort_unstable();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive_is_prime(n: u64) -> bool {
        n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
    }

    #[test]
    fn miller_rabin_matches_trial_division() {
        for n in 0..20_000 {
            assert_eq!(is_prime(n), naive_is_prime(n), "n = {n}");
        }
        assert!(is_prime(1_000_000_007));
        assert!(!is_prime(3_215_031_751)); // strong pseudoprime to bases 2,3,5,7
        assert!(is_prime(18_446_744_073_709_551_557));
    }

    #[test]
    fn sieve_agrees() {
        let ps = primes_up_to(600);
        assert_eq!(ps.len(), 109);
        assert!(ps.iter().all(|&p| is_prime(p)));
    }

    #[test]
    fn factorizations_multiply_back() {
        for n in [1u64, 2, 12, 31, 168, 5 * 5 * 5 - 1, 599 * 599 * 599 - 1, 999_983u64 * 999_979] {
            let fs = factorize(n).unwrap();
            let prod: u64 = fs.iter().map(|&(q, e)| q.pow(e)).product();
            assert_eq!(prod, n);
            assert!(fs.iter().all(|&(q, _)| is_prime(q)));
        }
        // two factors above the trial-division bound
        let fs = factorize(1_000_003u64 * 1_000_033).unwrap();
        assert_eq!(fs, vec![(1_000_003, 1), (1_000_033, 1)]);
    }
}
