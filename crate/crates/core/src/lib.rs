//! Signed word-size modular arithmetic (Plantard with enlarged input range,
//! Montgomery, Barrett) and a 7-layer incomplete NTT/INTT engine over
//! Z_3329[X]/(X^256+1) with configurable layer merging and lazy-reduction
//! schedules, plus a static coefficient-bound analyzer, an abstract
//! instruction-cost model, and brute-force oracles.

pub mod analyzer;
pub mod cost;
pub mod modarith;
pub mod ntt;
pub mod oracle;
pub mod polyalg;
pub mod word;

pub use modarith::{derive_params, ModArithError, ModParams};
pub use word::Word;

/// Kyber production configuration: q = 3329 at l = 16 (32-bit registers).
pub type KyberWord = i32;
pub type KyberParams = ModParams<i32>;

/// Exhaustive-verification configuration: small odd moduli at l = 8.
pub type SmallWord = i16;
pub type SmallParams = ModParams<i16>;

/// The Kyber modulus.
pub const KYBER_Q: i32 = 3329;

pub fn kyber_params() -> KyberParams {
    derive_params(KYBER_Q).expect("kyber parameters are valid")
}
