//! Independent brute-force references.
//!
//! Ground truth for everything else in the crate: exact big-integer modular
//! multiplication, the O(n²) schoolbook negacyclic product, and direct
//! polynomial remaindering for the NTT. Deliberately slow and simple, and
//! deliberately sharing no code with the word-size arithmetic or the NTT
//! engine.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub const N: usize = 256;

/// Centered representative in (−q/2, q/2) of a big integer.
fn centered(x: &BigInt, q: i64) -> i64 {
    let qb = BigInt::from(q);
    let mut r = x % &qb;
    let half = BigInt::from((q - 1) / 2);
    if r > half {
        r -= &qb;
    } else if r < -half.clone() {
        r += &qb;
    }
    r.to_i64().unwrap()
}

/// Modular inverse by extended Euclid; panics if gcd ≠ 1.
fn big_mod_inv(a: &BigInt, m: &BigInt) -> BigInt {
    let (mut r0, mut r1) = (m.clone(), a.mod_floor_ref(m));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while !r1.is_zero() {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        r0 = std::mem::replace(&mut r1, r2);
        let t2 = &t0 - &q * &t1;
        t0 = std::mem::replace(&mut t1, t2);
    }
    assert!(r0.is_one(), "not invertible");
    t0.mod_floor_ref(m)
}

trait ModFloorRef {
    fn mod_floor_ref(&self, m: &BigInt) -> BigInt;
}

impl ModFloorRef for BigInt {
    fn mod_floor_ref(&self, m: &BigInt) -> BigInt {
        let r = self % m;
        if r.is_negative() {
            r + m
        } else {
            r
        }
    }
}

/// a·b·2^{twist} mod± q, exactly. Negative twists multiply by the inverse of
/// the power of two (twist = −l checks Montgomery outputs; twist = −2l plus a
/// sign flip checks Plantard outputs).
pub fn naive_mod_mul(a: i64, b: i64, q: i64, twist: i32) -> i64 {
    let mut x = BigInt::from(a) * BigInt::from(b);
    if twist >= 0 {
        x <<= twist as usize;
    } else {
        let inv = big_mod_inv(&(BigInt::one() << (-twist) as usize), &BigInt::from(q));
        x *= inv;
    }
    centered(&x, q)
}

/// a·b·(−2^{−two_l}) mod± q: the Plantard result the formula must reproduce.
pub fn naive_neg_mod_mul(a: i64, b: i64, q: i64, two_l: u32) -> i64 {
    let r = naive_mod_mul(a, b, q, -(two_l as i32));
    mod_pm_i64(-r, q)
}

/// (−base^{−k}) mod± q.
pub fn pow_mod_inv_neg(base: i64, k: u32, q: i64) -> i64 {
    let m = BigInt::from(q);
    let p = BigInt::from(base).modpow(&BigInt::from(k), &m);
    let inv = big_mod_inv(&p, &m);
    centered(&(-inv), q)
}

fn mod_pm_i64(x: i64, q: i64) -> i64 {
    let mut r = x % q;
    if r > (q - 1) / 2 {
        r -= q;
    } else if r < -(q - 1) / 2 {
        r += q;
    }
    r
}

/// b^e mod q for word-size q.
pub fn pow_mod(b: i64, e: u64, q: i64) -> i64 {
    let mut acc = 1i128;
    let mut base = (b as i128).rem_euclid(q as i128);
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % q as i128;
        }
        base = base * base % q as i128;
        e >>= 1;
    }
    acc as i64
}

pub fn inv_mod(a: i64, q: i64) -> i64 {
    big_mod_inv(&BigInt::from(a), &BigInt::from(q))
        .to_i64()
        .unwrap()
}

/// Bit-reversal of a 7-bit index.
pub fn br7(i: usize) -> usize {
    let mut r = 0;
    for b in 0..7 {
        r |= ((i >> b) & 1) << (6 - b);
    }
    r
}

/// Exact negacyclic schoolbook product mod (X^256 + 1), coefficients mod± q.
pub fn schoolbook_mul(a: &[i64; N], b: &[i64; N], q: i64) -> [i64; N] {
    for &x in a.iter().chain(b.iter()) {
        debug_assert!(x.unsigned_abs() < 1 << 50);
    }
    let mut acc = [0i128; N];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            let k = i + j;
            let p = ai as i128 * bj as i128;
            if k < N {
                acc[k] += p;
            } else {
                acc[k - N] -= p;
            }
        }
    }
    let mut out = [0i64; N];
    for (o, &v) in out.iter_mut().zip(acc.iter()) {
        *o = centered(&BigInt::from(v), q);
    }
    out
}

/// The i-th degree-2 modulus root: ζ^{2·br₇(i)+1}.
pub fn pair_root(i: usize, q: i64, zeta: i64) -> i64 {
    pow_mod(zeta, (2 * br7(i) + 1) as u64, q)
}

/// The 128 degree-2 residues of a mod (X² − ζ^{2br₇(i)+1}), computed by
/// direct polynomial remaindering. Pair i lands at indices (2i, 2i+1).
pub fn dft_reference(a: &[i64; N], q: i64, zeta: i64) -> [i64; N] {
    let mut out = [0i64; N];
    for i in 0..N / 2 {
        let gamma = pair_root(i, q, zeta);
        // Remainder of a(X) by X² − γ: fold X^j down two at a time.
        let mut rem: Vec<i64> = a.iter().map(|&c| c.rem_euclid(q)).collect();
        for j in (2..N).rev() {
            let c = rem[j];
            if c != 0 {
                rem[j - 2] = ((rem[j - 2] as i128 + c as i128 * gamma as i128)
                    .rem_euclid(q as i128)) as i64;
                rem[j] = 0;
            }
        }
        out[2 * i] = mod_pm_i64(rem[0], q);
        out[2 * i + 1] = mod_pm_i64(rem[1], q);
    }
    out
}

/// Exact inverse of [`dft_reference`]: interpolates the polynomial from its
/// degree-2 residues via e_j = 128⁻¹·Σ_i X_{2i}·γ_i^{−j} (and likewise for
/// the odd sublattice).
pub fn intt_reference(x: &[i64; N], q: i64, zeta: i64) -> [i64; N] {
    let inv128 = inv_mod(128, q);
    let mut out = [0i64; N];
    for j in 0..N / 2 {
        let (mut e, mut o) = (0i128, 0i128);
        for i in 0..N / 2 {
            let g_inv_j = pow_mod(inv_mod(pair_root(i, q, zeta), q), j as u64, q);
            e += x[2 * i] as i128 * g_inv_j as i128;
            o += x[2 * i + 1] as i128 * g_inv_j as i128;
            e %= q as i128;
            o %= q as i128;
        }
        out[2 * j] = mod_pm_i64((e as i64).rem_euclid(q) * inv128 % q, q);
        out[2 * j + 1] = mod_pm_i64((o as i64).rem_euclid(q) * inv128 % q, q);
    }
    out
}
