//! Twiddle precomputation.
//!
//! Every table entry is a Plantard-domain constant: for a desired multiplier
//! c ∈ [0, q) the stored word is ((c·(−2^{2l}) mod q)·q⁻¹) mod± 2^{2l}, so a
//! single Plantard multiplication by the entry yields the exact product with
//! c, reduced to (−q/2, q/2), with no residual domain factor.
//!
//! Four layouts are generated:
//!
//! * `NttCt` — forward 7-layer CT traversal, 127 entries.
//! * `InttGs34` — GS inverse traversal; the last layer folds 128⁻¹ into both
//!   output constants (126 + 2 = 128 entries).
//! * `InttCt313` — CT inverse built from the even/odd sublattice structure:
//!   each sublattice is a cyclic size-128 DIT (root ω⁻¹ = ζ⁻², bit-reversed
//!   input order) whose j-th output is then twisted by ζ^{−j}·128⁻¹. Layers
//!   1–3 keep their trivial twiddles as hardcoded light butterflies; layers
//!   4–6 are slot-driven, with a zero slot marking a light butterfly; layer 7
//!   folds the final twist into two constants per butterfly plus one shared
//!   ζ^{−64} entry for the upper output half (4 + 8 + 16 + 32 + 129 = 189
//!   entries). The layer-4 slot for the trivial twiddle holds the real
//!   multiply-by-one constant: its output lands back in (−q/2, q/2), which is
//!   what keeps the layer-4 store-back inside 16 bits.
//! * `InttCt331` — same arithmetic with the 3+3+1 pass split; layers 5 and 6
//!   also clamp their trivial-twiddle slots because their outputs would
//!   otherwise have to be stored mid-pass.

use crate::modarith::{precompute_const, ModParams};
use serde::Serialize;

pub const N: usize = 256;
pub const LANES: usize = 128;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Layout {
    NttCt,
    InttGs34,
    InttCt313,
    InttCt331,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TableMeta {
    pub entries: usize,
    /// Table loads one full transform performs. Entries are laid out in
    /// traversal order and each slot is fetched exactly once per transform
    /// (pass-resident constants are deduplicated in the layout itself), so
    /// this equals `entries`.
    pub accesses_per_transform: usize,
}

#[derive(Debug, Clone)]
pub struct TwiddleTable {
    pub layout: Layout,
    pub entries: Vec<i32>,
    pub meta: TableMeta,
}

/// Sentinel slot value marking a light butterfly in slot-driven layers.
/// Real twiddles are units mod q, whose Plantard-domain form is never zero.
pub const LIGHT_SLOT: i32 = 0;

// Local modular helpers so twiddle generation shares nothing with the
// brute-force oracles it is tested against.
fn pow_mod(b: i64, e: u64, q: i64) -> i64 {
    let mut acc = 1i64;
    let mut base = b.rem_euclid(q);
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % q;
        }
        base = base * base % q;
        e >>= 1;
    }
    acc
}

fn inv_mod(a: i64, q: i64) -> i64 {
    // q is prime for every supported parameter set.
    pow_mod(a, (q - 2) as u64, q)
}

fn br7(i: usize) -> usize {
    let mut r = 0;
    for b in 0..7 {
        r |= ((i >> b) & 1) << (6 - b);
    }
    r
}

/// Smallest primitive 256-th root of unity mod q, by brute-force search.
pub fn find_zeta(q: i64) -> i64 {
    (2..q)
        .find(|&g| pow_mod(g, 128, q) == q - 1)
        .expect("modulus admits a 256-th root of unity")
}

/// Plantard-domain entry that multiplies by c exactly.
pub fn entry_for(c: i64, p: &ModParams<i32>) -> i32 {
    let q = p.q as i64;
    let neg22l = p.neg_two_2l2() as i64;
    precompute_const((c.rem_euclid(q) * neg22l % q) as i32, p).expect("reduced constant")
}

pub fn gen_twiddles(p: &ModParams<i32>, layout: Layout) -> TwiddleTable {
    let q = p.q as i64;
    let zeta = find_zeta(q);
    let entries = match layout {
        Layout::NttCt => ntt_ct(p, q, zeta),
        Layout::InttGs34 => intt_gs(p, q, zeta),
        Layout::InttCt313 => intt_ct(p, q, zeta, false),
        Layout::InttCt331 => intt_ct(p, q, zeta, true),
    };
    let meta = TableMeta {
        entries: entries.len(),
        accesses_per_transform: entries.len(),
    };
    TwiddleTable {
        layout,
        entries,
        meta,
    }
}

fn ntt_ct(p: &ModParams<i32>, q: i64, zeta: i64) -> Vec<i32> {
    (1..128)
        .map(|k| entry_for(pow_mod(zeta, br7(k) as u64, q), p))
        .collect()
}

fn intt_gs(p: &ModParams<i32>, q: i64, zeta: i64) -> Vec<i32> {
    let zeta_inv = inv_mod(zeta, q);
    let inv128 = inv_mod(128, q);
    let mut out = Vec::with_capacity(128);
    // Layers 1..=6: exact inverses of forward layers 7..=2, same block walk.
    for layer in 1..=6u32 {
        let blocks = 128usize >> layer;
        for b in 0..blocks {
            let k_fwd = blocks + b;
            out.push(entry_for(pow_mod(zeta_inv, br7(k_fwd) as u64, q), p));
        }
    }
    // Layer 7 folds 128⁻¹ into both outputs: a' = (a+b)·128⁻¹ and
    // b' = (a−b)·ζ^{−br₇(1)}·128⁻¹.
    out.push(entry_for(inv128, p));
    out.push(entry_for(pow_mod(zeta_inv, br7(1) as u64, q) * inv128 % q, p));
    out
}

fn intt_ct(p: &ModParams<i32>, q: i64, zeta: i64, clamp_pass3: bool) -> Vec<i32> {
    let omega_inv = inv_mod(zeta * zeta % q, q);
    let psi_inv = inv_mod(zeta, q);
    let inv128 = inv_mod(128, q);
    let mut out = Vec::new();
    // Pass-resident constants for layers 2 and 3 (layer 1 is all light).
    out.push(entry_for(pow_mod(omega_inv, 32, q), p));
    for jj in 1..4u64 {
        out.push(entry_for(pow_mod(omega_inv, 16 * jj, q), p));
    }
    // Layer 4: all slots multiply; jj = 0 is the real multiply-by-one
    // constant so the store-back after this single-layer pass fits 16 bits.
    for jj in 0..8u64 {
        out.push(entry_for(pow_mod(omega_inv, 8 * jj, q), p));
    }
    // Layers 5 and 6: slot-driven. In the 3+1+3 split these layers live in
    // the final in-register pass, so their trivial twiddles stay light; in
    // the 3+3+1 split their outputs are stored and must be clamped.
    for (layer_half, shift) in [(16u64, 4u64), (32, 2)] {
        for jj in 0..layer_half {
            if jj == 0 && !clamp_pass3 {
                out.push(LIGHT_SLOT);
            } else {
                out.push(entry_for(pow_mod(omega_inv, shift * jj, q), p));
            }
        }
    }
    // Layer 7: two constants per butterfly folding ω^{−jj}, the output twist
    // ζ^{−jj} and 128⁻¹; one shared ζ^{−64} entry finishes the upper half.
    for jj in 0..64u64 {
        let tw_a = pow_mod(psi_inv, jj, q) * inv128 % q;
        if jj == 0 {
            out.push(entry_for(inv128, p));
            out.push(entry_for(pow_mod(psi_inv, 64, q) * inv128 % q, p));
        } else {
            let w = pow_mod(omega_inv, jj, q);
            out.push(entry_for(tw_a, p));
            out.push(entry_for(tw_a * w % q, p));
        }
    }
    out.push(entry_for(pow_mod(psi_inv, 64, q), p));
    out
}

/// Base-multiplication twiddles: entry i multiplies by ζ^{2br₇(i)+1}.
pub fn basemul_twiddles(p: &ModParams<i32>) -> Vec<i32> {
    let q = p.q as i64;
    let zeta = find_zeta(q);
    (0..LANES)
        .map(|i| entry_for(pow_mod(zeta, (2 * br7(i) + 1) as u64, q), p))
        .collect()
}
