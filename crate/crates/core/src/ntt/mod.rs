//! 7-layer incomplete NTT/INTT over Z_3329[X]/(X^256+1) with Plantard-domain
//! twiddles, configurable layer merging, and lazy-reduction schedules.

pub mod engine;
pub mod schedule;
pub mod twiddle;

pub use engine::{ct_butterfly, gs_butterfly, light_butterfly, NttEngine, Trace};
pub use schedule::{ButterflyKind, LanePred, ReductionPoint, Schedule, Strategy, Variant};
pub use twiddle::{basemul_twiddles, entry_for, find_zeta, gen_twiddles, Layout, TwiddleTable};

use thiserror::Error;

pub const N: usize = 256;
pub const LANES: usize = 128;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Domain {
    Normal,
    Ntt,
}

/// A length-256 coefficient vector of signed 16-bit values with a domain tag.
/// Between merged passes every coefficient fits a signed 16-bit integer;
/// inside a pass the engine works on 32-bit registers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly {
    pub coeffs: [i16; N],
    pub domain: Domain,
}

impl Poly {
    pub fn zero(domain: Domain) -> Poly {
        Poly {
            coeffs: [0; N],
            domain,
        }
    }

    pub fn from_coeffs(coeffs: [i16; N], domain: Domain) -> Poly {
        Poly { coeffs, domain }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NttError {
    #[error("expected {expected:?} domain, got {got:?}")]
    DomainMismatch { expected: Domain, got: Domain },
    #[error("invalid schedule: {0}")]
    ScheduleInvalid(String),
    #[error("schedule direction does not match the requested transform")]
    DirectionMismatch,
    #[error("input coefficient {index} = {value} outside |x| <= {bound}")]
    InputBound {
        index: usize,
        value: i64,
        bound: i64,
    },
    #[error("store-back overflow after layer {layer}: coefficient {index} = {value} exceeds 16-bit")]
    StoreBackOverflow {
        layer: u8,
        index: usize,
        value: i64,
    },
}
