//! Exact and modular Tribonacci numbers on all of Z.
//!
//! `(T(n+2), T(n+1), T(n)) = M^n (1, 1, 0)` with `M = [[1,1,1],[1,0,0],[0,1,0]]`.
//! Since `det M = 1`, negative indices use the integer inverse
//! `[[0,1,0],[0,0,1],[1,-1,-1]]`.

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;

use crate::padic::{p_pow, reduce_signed, Valuation};

/// Indices where `T` vanishes.
pub const INTEGER_ZEROS: [i64; 4] = [0, -1, -4, -17];

type Mat<T> = [[T; 3]; 3];

const FORWARD: Mat<i64> = [[1, 1, 1], [1, 0, 0], [0, 1, 0]];
const BACKWARD: Mat<i64> = [[0, 1, 0], [0, 0, 1], [1, -1, -1]];

fn big_mat(m: &Mat<i64>) -> Mat<BigInt> {
    m.map(|row| row.map(BigInt::from))
}

fn mat_mul_big(a: &Mat<BigInt>, b: &Mat<BigInt>, modulus: Option<&BigInt>) -> Mat<BigInt> {
    let mut out: Mat<BigInt> = Default::default();
    for i in 0..3 {
        for j in 0..3 {
            let mut s = BigInt::zero();
            for k in 0..3 {
                s += &a[i][k] * &b[k][j];
            }
            if let Some(m) = modulus {
                s %= m;
            }
            out[i][j] = s;
        }
    }
    out
}

fn mat_pow_big(base: &Mat<i64>, mut e: u128, modulus: Option<&BigInt>) -> Mat<BigInt> {
    let mut acc = big_mat(&[[1, 0, 0], [0, 1, 0], [0, 0, 1]]);
    let mut b = big_mat(base);
    while e > 0 {
        if e & 1 == 1 {
            acc = mat_mul_big(&acc, &b, modulus);
        }
        e >>= 1;
        if e > 0 {
            b = mat_mul_big(&b, &b, modulus);
        }
    }
    acc
}

fn power_for(n: i128, modulus: Option<&BigInt>) -> Mat<BigInt> {
    if n >= 0 {
        mat_pow_big(&FORWARD, n as u128, modulus)
    } else {
        mat_pow_big(&BACKWARD, n.unsigned_abs(), modulus)
    }
}

/// Exact `T(n)`.
pub fn trib(n: i64) -> BigInt {
    let m = power_for(n as i128, None);
    // bottom row applied to (1, 1, 0)
    &m[2][0] + &m[2][1]
}

/// `(T(n), T(n+1), T(n+2))` modulo `m`, each in `[0, m)`.
pub fn trib_triple_mod(n: i128, m: &BigUint) -> [BigUint; 3] {
    let mb = BigInt::from(m.clone());
    let mat = power_for(n, Some(&mb));
    let t = |row: usize| reduce_signed(&(&mat[row][0] + &mat[row][1]), m);
    [t(2), t(1), t(0)]
}

/// `T(n) mod m` for `m >= 2`.
pub fn trib_mod(n: i128, m: &BigUint) -> BigUint {
    let [t0, _, _] = trib_triple_mod(n, m);
    t0
}

fn mat_mul_u64(a: &Mat<u64>, b: &Mat<u64>, m: u64) -> Mat<u64> {
    let mut out = [[0u64; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let mut s = 0u128;
            for k in 0..3 {
                s += a[i][k] as u128 * b[k][j] as u128;
            }
            out[i][j] = (s % m as u128) as u64;
        }
    }
    out
}

/// `(T(n), T(n+1), T(n+2))` modulo a machine-size `m`.
pub fn trib_triple_mod_u64(n: i128, m: u64) -> [u64; 3] {
    assert!(m >= 1, "modulus must be positive");
    let base = if n >= 0 { FORWARD } else { BACKWARD };
    let mut b = base.map(|row| row.map(|x| x.rem_euclid(m as i64) as u64));
    let mut acc = [[1 % m, 0, 0], [0, 1 % m, 0], [0, 0, 1 % m]];
    let mut e = n.unsigned_abs();
    while e > 0 {
        if e & 1 == 1 {
            acc = mat_mul_u64(&acc, &b, m);
        }
        e >>= 1;
        if e > 0 {
            b = mat_mul_u64(&b, &b, m);
        }
    }
    let t = |row: usize| (acc[row][0] + acc[row][1]) % m;
    [t(2), t(1), t(0)]
}

pub fn trib_mod_u64(n: i128, m: u64) -> u64 {
    trib_triple_mod_u64(n, m)[0]
}

/// Sliding window `(T(n), T(n+1), T(n+2))` modulo `m`, advanced one step at a time.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TribWindow {
    pub t: [u64; 3],
    pub m: u64,
}

impl TribWindow {
    pub fn at(n: i128, m: u64) -> TribWindow {
        TribWindow {
            t: trib_triple_mod_u64(n, m),
            m,
        }
    }

    pub fn current(&self) -> u64 {
        self.t[0]
    }

    pub fn step(&mut self) {
        let next = ((self.t[0] as u128 + self.t[1] as u128 + self.t[2] as u128) % self.m as u128) as u64;
        self.t = [self.t[1], self.t[2], next];
    }
}

/// Period of `T mod m`, the least `π > 0` with `T(n + π) ≡ T(n)` for all n.
pub fn trib_period_mod(m: u64) -> u64 {
    let start = TribWindow::at(0, m);
    let mut w = start;
    let mut k = 0u64;
    loop {
        w.step();
        k += 1;
        if w.t == start.t {
            return k;
        }
    }
}

pub fn is_integer_zero(n: i128) -> bool {
    INTEGER_ZEROS.iter().any(|&z| z as i128 == n)
}

/// `ν_p(T(n))`; infinite exactly on the integer zero set.
///
/// Works modulo `p^K` and doubles `K` until the residue is nonzero.
pub fn trib_val(n: i128, p: u64) -> Valuation {
    if is_integer_zero(n) {
        return Valuation::Infinite;
    }
    let mut k = 24u32;
    loop {
        let m = p_pow(p, k);
        let r = trib_mod(n, &m);
        if !r.is_zero() {
            let mut v = 0;
            let mut r = r;
            let pb = BigUint::from(p);
            while (&r % &pb).is_zero() {
                r /= &pb;
                v += 1;
            }
            return Valuation::Finite(v);
        }
        k *= 2;
    }
}

/// `ν_p(T(n))` for `n` outside the integer zero set, using the machine-size
/// modulus `p^k` when it fits; falls back to [`trib_val`] otherwise.
pub fn trib_val_fast(n: i128, p: u64) -> Valuation {
    if is_integer_zero(n) {
        return Valuation::Infinite;
    }
    let mut m = 1u64;
    let mut k = 0;
    while let Some(next) = m.checked_mul(p) {
        if next > 1 << 62 {
            break;
        }
        m = next;
        k += 1;
    }
    let r = trib_mod_u64(n, m);
    if r == 0 {
        return trib_val(n, p);
    }
    let mut v = 0;
    let mut r = r;
    while r % p == 0 && v < k {
        r /= p;
        v += 1;
    }
    Valuation::Finite(v)
}

/// `T(n)` for `n` in a contiguous range, by the recurrence.
pub fn trib_range(start: i64, len: usize) -> Vec<BigInt> {
    let mut out = Vec::with_capacity(len);
    let m = power_for(start as i128, None);
    let mut w = [&m[2][0] + &m[2][1], &m[1][0] + &m[1][1], &m[0][0] + &m[0][1]];
    for _ in 0..len {
        out.push(w[0].clone());
        let next = &w[0] + &w[1] + &w[2];
        w = [w[1].clone(), w[2].clone(), next];
    }
    out
}
