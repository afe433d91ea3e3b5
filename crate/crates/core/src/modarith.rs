//! Word-size signed modular arithmetic: Plantard multiplication with an
//! enlarged input range, signed Montgomery multiplication, and the signed
//! Barrett reduction used by the reference Kyber code.
//!
//! Everything is parameterized by the working register type `W` (see
//! [`Word`]), so the same code runs at l = 8 (`i16`, exhaustively testable)
//! and l = 16 (`i32`, the production Kyber configuration).
//!
//! The Plantard form computed throughout is
//!
//! ```text
//! r = [([[a·b·q']_{2l}]^l + 2^α)·q]^l  ≡  a·b·(−2^{−2l})  (mod± q)
//! ```
//!
//! with `[x]_{2l}` the two's-complement truncation at 2l bits and `[x]^l` an
//! arithmetic right shift by l. Inputs are admissible whenever the exact
//! product `a·b` lies in the open interval `(−q·2^{l+α}, 2^{2l} − q·2^{l+α})`,
//! which for q = 3329, l = 16, α = 3 covers `a ∈ [−157q, 230q]` against any
//! constant `b ∈ [0, q)`.
//!
//! The `*_checked` entry points verify their preconditions on every call and
//! are what the verification suites drive; the plain entry points assert only
//! in debug builds and are what the NTT inner loops use.

use crate::word::Word;
use num_traits::One;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum ModArithError {
    #[error("modulus must be odd, got {0}")]
    EvenModulus(i64),
    #[error("modulus {q} too large for word half-size l = {l} (needs q < 2^(l-1))")]
    ModulusTooLarge { q: i64, l: u32 },
    #[error("modulus must be at least 3, got {0}")]
    ModulusTooSmall(i64),
    #[error("product {0} outside admissible range ({1}, {2})")]
    ProductOutOfRange(i64, i64, i64),
    #[error("operand {0} outside constant-multiplication input range [{1}, {2}]")]
    ConstInputOutOfRange(i64, i64, i64),
    #[error("constant {0} not in [0, {1})")]
    ConstOutOfRange(i64, i64),
    #[error("montgomery product {0} outside [-q·2^(l-1), q·2^(l-1))")]
    MontProductOutOfRange(i64),
}

/// Modulus/word-size parameter bundle with every precomputed constant the
/// arithmetic needs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ModParams<W: Word> {
    /// Odd modulus q < 2^{l−α−1}.
    pub q: W,
    /// Largest slack exponent α ≥ 0 with q < 2^{l−α−1}.
    pub alpha: u32,
    /// q⁻¹ mod± 2^{2l}.
    pub q_inv_2l2: W,
    /// q·2^l, for the multiply-high form of the final reduction step.
    pub q_shift_l: W,
    /// ((−2^{2l} mod q)·q⁻¹) mod± 2^{2l}; multiplying by this constant
    /// reduces a coefficient to (−q/2, q/2) without changing its residue.
    pub red_const: W,
    /// q⁻¹ mod± 2^l, for Montgomery.
    pub mont_qinv: W,
    /// Admissible product interval (−q·2^{l+α}, 2^{2l} − q·2^{l+α}),
    /// exclusive on both ends.
    pub prod_range: (W::Wide, W::Wide),
    /// Admissible single-operand interval when the other operand is a
    /// constant in [0, q); inclusive on both ends.
    pub const_input_range: (W, W),
}

/// Compute the parameter bundle for an odd modulus at the register width of
/// `W` (l = half the register width).
pub fn derive_params<W: Word>(q: W) -> Result<ModParams<W>, ModArithError> {
    let l = W::half_bits();
    let q64 = q.to_i64_();
    if q64 % 2 == 0 {
        return Err(ModArithError::EvenModulus(q64));
    }
    if q64 < 3 {
        return Err(ModArithError::ModulusTooSmall(q64));
    }
    // alpha = l − 1 − bits(q) is the largest α with q < 2^{l−α−1}.
    let bits = 64 - (q64 as u64).leading_zeros();
    if bits + 1 > l {
        return Err(ModArithError::ModulusTooLarge { q: q64, l });
    }
    let alpha = l - 1 - bits;

    // Newton iteration doubles correct low bits each round; q is odd so q·q ≡ 1 (mod 8).
    let mut inv = q;
    for _ in 0..6 {
        let two = W::from_i64(2);
        inv = inv.wrapping_mul(&two.wrapping_sub(&q.wrapping_mul(&inv)));
    }
    debug_assert!(q.wrapping_mul(&inv) == W::one());

    let mont_qinv = inv.sext_low();
    let q_shift_l = q << l as usize;

    let one_2l2 = W::wide_from_i64(1) << (2 * l) as usize;
    let q_wide = W::wide_from_i64(q64);
    let prod_lo = -(q_wide << (l + alpha) as usize);
    let prod_hi = one_2l2 - (q_wide << (l + alpha) as usize);

    // Truncated-toward-zero division by b_max = q − 1 (twiddles reduced to [0, q)).
    let bmax = W::wide_from_i64(q64 - 1);
    let const_lo = W::wrap(prod_lo / bmax + W::wide_from_i64(1));
    let const_hi = W::wrap(prod_hi / bmax);
    // prod bounds are exclusive: const_hi·(q−1) must stay strictly below prod_hi.
    let const_hi = if const_hi.widen() * bmax >= prod_hi {
        const_hi - W::one()
    } else {
        const_hi
    };
    let const_lo = if const_lo.widen() * bmax <= prod_lo {
        const_lo + W::one()
    } else {
        const_lo
    };

    // −2^{2l} mod q, the coefficient-reduction constant before pre-twisting.
    let neg_two_2l2 = W::from_i64(q64 - W::wide_to_i64(one_2l2 % q_wide));
    let red_const = neg_two_2l2.wrapping_mul(&inv);

    Ok(ModParams {
        q,
        alpha,
        q_inv_2l2: inv,
        q_shift_l,
        red_const,
        mont_qinv,
        prod_range: (prod_lo, prod_hi),
        const_input_range: (const_lo, const_hi),
    })
}

impl<W: Word> ModParams<W> {
    #[inline]
    pub fn l(&self) -> u32 {
        W::half_bits()
    }

    /// −2^{2l} mod q as a value in [0, q).
    #[inline]
    pub fn neg_two_2l2(&self) -> W {
        self.red_const.wrapping_mul(&self.q)
    }

    #[inline]
    pub fn in_prod_range(&self, product: W::Wide) -> bool {
        product > self.prod_range.0 && product < self.prod_range.1
    }

    #[inline]
    pub fn in_const_input_range(&self, a: W) -> bool {
        a >= self.const_input_range.0 && a <= self.const_input_range.1
    }
}

/// The shared tail of every Plantard form: t is the wrapped product with the
/// q'-twisted constant already folded in.
#[inline]
fn plantard_tail<W: Word>(t: W, p: &ModParams<W>) -> W {
    let l = W::half_bits() as usize;
    ((t >> l) + (W::one() << p.alpha as usize)).wrapping_mul(&p.q) >> l
}

/// Same tail computed with a high-half multiplication by q·2^l, as done on
/// cores with a mulh instruction. Bit-identical to [`plantard_tail`].
#[inline]
pub fn plantard_tail_mulh<W: Word>(t: W, p: &ModParams<W>) -> W {
    let l = W::half_bits() as usize;
    ((t >> l) + (W::one() << p.alpha as usize)).mulh(p.q_shift_l)
}

/// Plantard multiplication of two variables: a·b·(−2^{−2l}) mod± q.
/// Debug-asserts the product range; the checked variant is
/// [`plantard_mul_checked`].
#[inline]
pub fn plantard_mul<W: Word>(a: W, b: W, p: &ModParams<W>) -> W {
    debug_assert!(p.in_prod_range(a.widen() * b.widen()));
    plantard_tail(a.wrapping_mul(&b).wrapping_mul(&p.q_inv_2l2), p)
}

pub fn plantard_mul_checked<W: Word>(a: W, b: W, p: &ModParams<W>) -> Result<W, ModArithError> {
    let prod = a.widen() * b.widen();
    if !p.in_prod_range(prod) {
        return Err(ModArithError::ProductOutOfRange(
            W::wide_to_i64(prod),
            W::wide_to_i64(p.prod_range.0),
            W::wide_to_i64(p.prod_range.1),
        ));
    }
    Ok(plantard_mul(a, b, p))
}

/// Pre-twist a constant b ∈ [0, q): returns b·q⁻¹ mod± 2^{2l}.
pub fn precompute_const<W: Word>(b: W, p: &ModParams<W>) -> Result<W, ModArithError> {
    if b < W::zero() || b >= p.q {
        return Err(ModArithError::ConstOutOfRange(b.to_i64_(), p.q.to_i64_()));
    }
    Ok(b.wrapping_mul(&p.q_inv_2l2))
}

/// Plantard multiplication by a pre-twisted constant: bit-identical to
/// `plantard_mul(a, b, p)` for `bq_prime = precompute_const(b, p)`.
#[inline]
pub fn plantard_mul_const<W: Word>(a: W, bq_prime: W, p: &ModParams<W>) -> W {
    debug_assert!(p.in_const_input_range(a));
    plantard_tail(a.wrapping_mul(&bq_prime), p)
}

pub fn plantard_mul_const_checked<W: Word>(
    a: W,
    bq_prime: W,
    p: &ModParams<W>,
) -> Result<W, ModArithError> {
    if !p.in_const_input_range(a) {
        return Err(ModArithError::ConstInputOutOfRange(
            a.to_i64_(),
            p.const_input_range.0.to_i64_(),
            p.const_input_range.1.to_i64_(),
        ));
    }
    Ok(plantard_mul_const(a, bq_prime, p))
}

/// Plantard reduction of a full 2l-bit product: a·(−2^{−2l}) mod± q.
/// The constant is q⁻¹ mod 2^{2l} itself.
#[inline]
pub fn reduce_product<W: Word>(a: W, p: &ModParams<W>) -> W {
    debug_assert!(p.in_prod_range(a.widen()));
    plantard_tail(a.wrapping_mul(&p.q_inv_2l2), p)
}

pub fn reduce_product_checked<W: Word>(a: W, p: &ModParams<W>) -> Result<W, ModArithError> {
    if !p.in_prod_range(a.widen()) {
        return Err(ModArithError::ProductOutOfRange(
            a.to_i64_(),
            W::wide_to_i64(p.prod_range.0),
            W::wide_to_i64(p.prod_range.1),
        ));
    }
    Ok(reduce_product(a, p))
}

/// Plantard reduction of a coefficient: a mod± q, residue unchanged.
/// The constant is (−2^{2l} mod q)·q⁻¹ mod 2^{2l}, so the −2^{−2l} factor
/// cancels.
#[inline]
pub fn reduce_coeff<W: Word>(a: W, p: &ModParams<W>) -> W {
    debug_assert!(p.in_const_input_range(a));
    plantard_tail(a.wrapping_mul(&p.red_const), p)
}

pub fn reduce_coeff_checked<W: Word>(a: W, p: &ModParams<W>) -> Result<W, ModArithError> {
    if !p.in_const_input_range(a) {
        return Err(ModArithError::ConstInputOutOfRange(
            a.to_i64_(),
            p.const_input_range.0.to_i64_(),
            p.const_input_range.1.to_i64_(),
        ));
    }
    Ok(reduce_coeff(a, p))
}

/// Signed Montgomery multiplication: a·b·2^{−l} mod q, result in (−q, q).
/// Requires −q·2^{l−1} ≤ a·b < q·2^{l−1}.
#[inline]
pub fn mont_mul<W: Word>(a: W, b: W, p: &ModParams<W>) -> W {
    let l = W::half_bits() as usize;
    let c = a.widen() * b.widen();
    debug_assert!(mont_product_ok(c, p));
    let c0 = W::wrap(c).sext_low();
    let m = c0.wrapping_mul(&p.mont_qinv).sext_low();
    let t1 = (m * p.q) >> l;
    let c1 = W::wrap(c >> l);
    c1 - t1
}

fn mont_product_ok<W: Word>(c: W::Wide, p: &ModParams<W>) -> bool {
    let l = W::half_bits() as usize;
    let bound = p.q.widen() << (l - 1);
    c >= -bound && c < bound
}

pub fn mont_mul_checked<W: Word>(a: W, b: W, p: &ModParams<W>) -> Result<W, ModArithError> {
    let c = a.widen() * b.widen();
    if !mont_product_ok(c, p) {
        return Err(ModArithError::MontProductOutOfRange(W::wide_to_i64(c)));
    }
    Ok(mont_mul(a, b, p))
}

/// Signed Barrett reduction, exactly the reference Kyber variant: input any
/// signed l-bit value, output congruent to a mod q with magnitude at most
/// (q−1)/2 + 1 (the rounding can land one step past the centered window).
#[inline]
pub fn barrett_reduce<W: Word>(a: W, p: &ModParams<W>) -> W {
    let l = W::half_bits() as usize;
    debug_assert!(a.widen() >= -(W::Wide::one() << (l - 1)) && a.widen() < W::Wide::one() << (l - 1));
    let shift = 2 * l - 6;
    let v = ((W::one() << shift) + p.q / W::from_i64(2)) / p.q;
    let t = (v * a + (W::one() << (shift - 1))) >> shift;
    a - t.wrapping_mul(&p.q)
}

/// Centered representative of x mod q, in (−q/2, q/2).
pub fn mod_pm(x: i64, q: i64) -> i64 {
    let mut r = x % q;
    if r > (q - 1) / 2 {
        r -= q;
    } else if r < -(q - 1) / 2 {
        r += q;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;

    fn kyber() -> ModParams<i32> {
        derive_params(3329i32).unwrap()
    }

    fn small() -> ModParams<i16> {
        derive_params(17i16).unwrap()
    }

    #[test]
    fn kyber_params_match_hand_derivation() {
        let p = kyber();
        assert_eq!(p.alpha, 3);
        assert_eq!(p.q.wrapping_mul(p.q_inv_2l2), 1);
        assert_eq!(p.q.wrapping_mul(p.mont_qinv).sext_low(), 1);
        assert_eq!(p.q_shift_l, 3329 << 16);
        // Exact endpoints of the admissible product interval.
        assert_eq!(p.prod_range.0, -1_745_354_752);
        assert_eq!(p.prod_range.1, 2_549_612_544);
        // Constant-operand input range covers [−157q, 230q].
        assert!(p.const_input_range.0 <= -157 * 3329);
        assert!(p.const_input_range.1 >= 230 * 3329);
        // −2^{32} mod q = 1976 (2^{32} mod 3329 = 1353).
        assert_eq!(p.neg_two_2l2(), 1976);
    }

    #[test]
    fn range_enlargement_factor_at_least_2_45() {
        // Width of [−157q, 230q] over the prior [−64q, 64q]: (157+230)/128.
        let p = kyber();
        let lo = (p.const_input_range.0 / 3329).unsigned_abs() as u64;
        let hi = (p.const_input_range.1 / 3329) as u64;
        // 100·(lo+hi) ≥ 245·128 without floating point.
        assert!(100 * (lo + hi) >= 245 * 128);
        assert!(lo >= 157 && hi >= 230);
    }

    #[test]
    fn small_params_match_spec_example() {
        let p = small();
        assert_eq!(p.alpha, 2);
        assert_eq!(p.prod_range, (-17408, 48128));
    }

    #[test]
    fn even_modulus_rejected() {
        assert_eq!(
            derive_params(2i32).unwrap_err(),
            ModArithError::EvenModulus(2)
        );
        assert_eq!(
            derive_params(1i32).unwrap_err(),
            ModArithError::ModulusTooSmall(1)
        );
        assert!(matches!(
            derive_params(0x7fffi16),
            Err(ModArithError::ModulusTooLarge { .. })
        ));
    }

    #[test]
    fn plantard_zero_product() {
        let p = kyber();
        assert_eq!(plantard_mul_checked(0, 12345, &p).unwrap(), 0);
        let bq = precompute_const(7, &p).unwrap();
        assert_eq!(plantard_mul_const_checked(0, bq, &p).unwrap(), 0);
    }

    #[test]
    fn plantard_kyber_extreme_corner() {
        // a = 230q against the largest reduced constant b = 3328: the largest
        // admissible product, checked against the exact oracle.
        let p = kyber();
        let (a, b) = (230 * 3329i32, 3328i32);
        let r = plantard_mul_checked(a, b, &p).unwrap();
        let want = oracle::naive_neg_mod_mul(a as i64, b as i64, 3329, 32);
        assert_eq!(r as i64, want);
        let bq = precompute_const(b, &p).unwrap();
        assert_eq!(plantard_mul_const_checked(a, bq, &p).unwrap(), r);

        let lo = plantard_mul_checked(-157 * 3329, b, &p).unwrap();
        assert_eq!(
            lo as i64,
            oracle::naive_neg_mod_mul(-157 * 3329, b as i64, 3329, 32)
        );
    }

    #[test]
    fn plantard_rejects_out_of_range_product() {
        // 231q·3328 = 2 559 228 672 exceeds 2^{32} − q·2^{19} = 2 549 612 544.
        let p = kyber();
        let err = plantard_mul_checked(231 * 3329, 3328, &p).unwrap_err();
        assert_eq!(
            err,
            ModArithError::ProductOutOfRange(2_559_228_672, -1_745_354_752, 2_549_612_544)
        );
        let bq = precompute_const(3328, &p).unwrap();
        assert!(matches!(
            plantard_mul_const_checked(231 * 3329, bq, &p),
            Err(ModArithError::ConstInputOutOfRange(..))
        ));
    }

    #[test]
    fn precompute_const_domain() {
        let p = kyber();
        assert_eq!(precompute_const(0, &p).unwrap(), 0);
        assert!(precompute_const(3329, &p).is_err());
        assert!(precompute_const(-1, &p).is_err());
        // b = 1 gives q⁻¹ mod± 2^{32} itself.
        assert_eq!(precompute_const(1, &p).unwrap(), p.q_inv_2l2);
    }

    #[test]
    fn reduce_coeff_reduces_without_changing_residue() {
        let p = kyber();
        assert_eq!(reduce_coeff_checked(0, &p).unwrap(), 0);
        assert_eq!(reduce_coeff_checked(3329, &p).unwrap(), 0);
        // 72q + 3 is the worst INTT coefficient the schedules produce.
        let r = reduce_coeff_checked(72 * 3329 + 3, &p).unwrap();
        assert_eq!(r, 3);
        for a in [-157 * 3329, -12345, 1664, 230 * 3329] {
            let r = reduce_coeff_checked(a, &p).unwrap();
            assert_eq!(r as i64, mod_pm(a as i64, 3329));
            assert!(r.abs() <= 1664);
        }
    }

    #[test]
    fn mulh_tail_is_bit_identical() {
        let p = kyber();
        for a in (-157 * 3329..230 * 3329i32).step_by(9973) {
            let bq = precompute_const(1234, &p).unwrap();
            let t = a.wrapping_mul(bq);
            assert_eq!(plantard_tail(t, &p), plantard_tail_mulh(t, &p));
        }
        let ps = small();
        for t in i16::MIN..=i16::MAX {
            assert_eq!(plantard_tail(t, &ps), plantard_tail_mulh(t, &ps));
        }
    }

    #[test]
    fn montgomery_zero_and_window() {
        let p = kyber();
        assert_eq!(mont_mul_checked(0, 999, &p).unwrap(), 0);
        // Montgomery-domain one maps b back to its residue, up to the (−q, q) window.
        let mont_one = {
            // 2^16 mod q
            (1i64 << 16).rem_euclid(3329) as i32
        };
        for b in [1i32, 2, 1000, 3328, -1664] {
            let r = mont_mul_checked(mont_one, b, &p).unwrap();
            assert!(r > -3329 && r < 3329);
            assert_eq!(mod_pm(r as i64, 3329), mod_pm(b as i64, 3329));
        }
    }

    #[test]
    fn montgomery_exhaustive_small() {
        // Every admissible product at q = 17, l = 8 against the oracle.
        let p = small();
        let q = 17i64;
        for c in -q * 128..q * 128 {
            let r = mont_mul_checked(c as i16, 1, &p).unwrap();
            assert!(r > -17 && r < 17, "window violated at c = {c}: r = {r}");
            let want = oracle::naive_mod_mul(c, 1, 17, -8);
            assert_eq!(mod_pm(r as i64, 17), want, "c = {c}");
        }
        assert!(mont_mul_checked(i16::MAX, i16::MAX, &p).is_err());
    }

    #[test]
    fn barrett_exhaustive_16bit() {
        // Full 65 536-case sweep against the naive centered reduction.
        let p = kyber();
        let mut max_abs = 0i64;
        for a in i16::MIN..=i16::MAX {
            let r = barrett_reduce(a as i32, &p) as i64;
            assert_eq!(mod_pm(r, 3329), mod_pm(a as i64, 3329), "a = {a}");
            max_abs = max_abs.max(r.abs());
        }
        // Reference convention: always within (q−1)/2 + 1.
        assert!(max_abs <= 1664 + 1, "max {max_abs}");
    }

    #[test]
    fn barrett_small_values() {
        let p = kyber();
        assert_eq!(barrett_reduce(0, &p), 0);
        assert_eq!(barrett_reduce(3329, &p), 0);
        assert_eq!(barrett_reduce(-3329, &p), 0);
        assert_eq!(barrett_reduce(42, &p), 42);
    }

    #[test]
    fn montgomery_plantard_cross_check() {
        // plantard(a,b) ≡ mont(a,b)·(−2^{−l}) (mod q) wherever both apply.
        let p = kyber();
        let factor = oracle::pow_mod_inv_neg(2, 16, 3329); // −2^{−16} mod± q
        for (a, b) in [(3i32, 5i32), (1000, -1000), (3328, 3328), (-1664, 1664)] {
            let pl = plantard_mul_checked(a, b, &p).unwrap() as i64;
            let mo = mont_mul_checked(a, b, &p).unwrap() as i64;
            assert_eq!(mod_pm(pl, 3329), mod_pm(mo * factor, 3329));
        }
    }
}
