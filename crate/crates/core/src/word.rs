//! The working-register abstraction.
//!
//! All word-size modular arithmetic here operates on a signed register of
//! width 2l bits with two's-complement wrap-around: `i16` models the l = 8
//! test configuration, `i32` the l = 16 production configuration. Exact
//! (non-wrapping) products for range checks use the associated double-width
//! type.

use num_traits::{PrimInt, Signed, WrappingAdd, WrappingMul, WrappingSub};

pub trait Word:
    PrimInt + Signed + WrappingAdd + WrappingSub + WrappingMul + std::fmt::Display + std::fmt::Debug
{
    /// Register width in bits (2l).
    const BITS2L: u32;

    /// Double-width type holding exact products of two registers.
    type Wide: PrimInt + Signed + std::fmt::Display + std::fmt::Debug;

    fn widen(self) -> Self::Wide;

    /// Truncate a wide value to the register width (mod± 2^{2l}).
    fn wrap(wide: Self::Wide) -> Self;

    fn from_i64(v: i64) -> Self;
    fn to_i64_(self) -> i64;
    fn wide_from_i64(v: i64) -> Self::Wide;
    fn wide_to_i64(w: Self::Wide) -> i64;

    /// Half width l in bits.
    #[inline]
    fn half_bits() -> u32 {
        Self::BITS2L / 2
    }

    /// Sign-extend the low l bits (the value mod± 2^l).
    #[inline]
    fn sext_low(self) -> Self {
        let l = Self::half_bits() as usize;
        (self << l) >> l
    }

    /// High half of the exact 2l x 2l product: (a·b) >> 2l.
    #[inline]
    fn mulh(self, other: Self) -> Self {
        let p = self.widen() * other.widen();
        Self::wrap(p >> Self::BITS2L as usize)
    }
}

impl Word for i16 {
    const BITS2L: u32 = 16;
    type Wide = i32;

    #[inline]
    fn widen(self) -> i32 {
        self as i32
    }
    #[inline]
    fn wrap(wide: i32) -> i16 {
        wide as i16
    }
    #[inline]
    fn from_i64(v: i64) -> i16 {
        v as i16
    }
    #[inline]
    fn to_i64_(self) -> i64 {
        self as i64
    }
    #[inline]
    fn wide_from_i64(v: i64) -> i32 {
        v as i32
    }
    #[inline]
    fn wide_to_i64(w: i32) -> i64 {
        w as i64
    }
}

impl Word for i32 {
    const BITS2L: u32 = 32;
    type Wide = i64;

    #[inline]
    fn widen(self) -> i64 {
        self as i64
    }
    #[inline]
    fn wrap(wide: i64) -> i32 {
        wide as i32
    }
    #[inline]
    fn from_i64(v: i64) -> i32 {
        v as i32
    }
    #[inline]
    fn to_i64_(self) -> i64 {
        self as i64
    }
    #[inline]
    fn wide_from_i64(v: i64) -> i64 {
        v
    }
    #[inline]
    fn wide_to_i64(w: i64) -> i64 {
        w
    }
}
