//! Degree-2 base multiplication and the vector algebra built on it:
//! asymmetric multiplication with cached twisted halves, stack- and
//! speed-version matrix-vector product and inner product, and the
//! memory-footprint accounting for the half-cache and double-poly layouts.
//!
//! Products of two variables go through `reduce_product`, which leaves a
//! −2^{−2l} factor; one further constant multiplication by −2^{2l} mod q
//! (the engine's `fix_entry`) cancels it, so every output coefficient is the
//! true residue reduced to (−q/2, q/2).

use crate::modarith::plantard_mul_const;
use crate::ntt::{Domain, NttEngine, NttError, Poly, LANES, N};
use serde::Serialize;

/// Cached twisted odd-index secret coefficients: entry i holds
/// ŝ_{2i+1}·ζ^{2br₇(i)+1} reduced to (−q/2, q/2).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyHalf {
    pub coeffs: [i16; LANES],
}

/// 512 16-bit coefficients: byte-for-byte the footprint of the 256-entry
/// 32-bit accumulator it can re-purpose.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyDouble {
    pub coeffs: [i16; 2 * N],
}

/// 256 signed 32-bit accumulator entries for the speed-version sum of k
/// unreduced degree-2 products.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Accumulator32 {
    pub entries: [i32; N],
}

impl Accumulator32 {
    pub fn zero() -> Accumulator32 {
        Accumulator32 { entries: [0; N] }
    }
}

impl PolyDouble {
    /// Re-purpose a spent accumulator's storage as 512 16-bit coefficients.
    /// Pure data conversion; the point is the equal footprint.
    pub fn reuse(acc: Accumulator32) -> PolyDouble {
        debug_assert_eq!(
            std::mem::size_of::<Accumulator32>(),
            std::mem::size_of::<PolyDouble>()
        );
        let mut coeffs = [0i16; 2 * N];
        for (i, v) in acc.entries.iter().enumerate() {
            coeffs[2 * i] = (*v & 0xffff) as u16 as i16;
            coeffs[2 * i + 1] = (*v >> 16) as i16;
        }
        PolyDouble { coeffs }
    }
}

fn expect_ntt(p: &Poly) -> Result<(), NttError> {
    if p.domain != Domain::Ntt {
        return Err(NttError::DomainMismatch {
            expected: Domain::Ntt,
            got: p.domain,
        });
    }
    Ok(())
}

/// ĉ_{2i} = â_{2i}·b̂_{2i} + â_{2i+1}·b̂_{2i+1}·ζ^{2br₇(i)+1},
/// ĉ_{2i+1} = â_{2i}·b̂_{2i+1} + â_{2i+1}·b̂_{2i}; outputs in (−q/2, q/2).
pub fn basemul(e: &NttEngine, a_hat: &Poly, b_hat: &Poly) -> Result<Poly, NttError> {
    expect_ntt(a_hat)?;
    expect_ntt(b_hat)?;
    let mut out = Poly::zero(Domain::Ntt);
    for i in 0..LANES {
        let t = plantard_mul_const(b_hat.coeffs[2 * i + 1] as i32, e.basemul_tw[i], &e.params);
        let (c0, c1) = basemul_pair(
            e,
            a_hat.coeffs[2 * i] as i32,
            a_hat.coeffs[2 * i + 1] as i32,
            b_hat.coeffs[2 * i] as i32,
            b_hat.coeffs[2 * i + 1] as i32,
            t,
        );
        out.coeffs[2 * i] = c0 as i16;
        out.coeffs[2 * i + 1] = c1 as i16;
    }
    Ok(out)
}

#[inline]
fn basemul_pair(e: &NttEngine, a0: i32, a1: i32, b0: i32, b1: i32, t: i32) -> (i32, i32) {
    let c0 = reduce_exact(e, a0 * b0 + a1 * t);
    let c1 = reduce_exact(e, a0 * b1 + a1 * b0);
    (c0, c1)
}

/// Residue-exact reduction of an accumulated product sum.
#[inline]
fn reduce_exact(e: &NttEngine, sum: i32) -> i32 {
    let r = crate::modarith::reduce_product(sum, &e.params);
    plantard_mul_const(r, e.fix_entry, &e.params)
}

/// Cache the twisted odd half of a secret: entry i = ŝ_{2i+1}·ζ^{2br₇(i)+1}.
/// The even coefficients stay in the original polynomial; no redundant copy.
pub fn cache_secret_half(e: &NttEngine, s_hat: &Poly) -> Result<PolyHalf, NttError> {
    expect_ntt(s_hat)?;
    let mut coeffs = [0i16; LANES];
    for (i, c) in coeffs.iter_mut().enumerate() {
        *c = plantard_mul_const(s_hat.coeffs[2 * i + 1] as i32, e.basemul_tw[i], &e.params) as i16;
    }
    Ok(PolyHalf { coeffs })
}

/// Base multiplication against a secret whose twisted half is cached:
/// residue-identical to `basemul(a_hat, s_hat)` with one modular
/// multiplication fewer per coefficient pair.
pub fn basemul_cached(
    e: &NttEngine,
    a_hat: &Poly,
    s_hat: &Poly,
    cache: &PolyHalf,
) -> Result<Poly, NttError> {
    expect_ntt(a_hat)?;
    expect_ntt(s_hat)?;
    let mut out = Poly::zero(Domain::Ntt);
    for i in 0..LANES {
        let (c0, c1) = basemul_pair(
            e,
            a_hat.coeffs[2 * i] as i32,
            a_hat.coeffs[2 * i + 1] as i32,
            s_hat.coeffs[2 * i] as i32,
            s_hat.coeffs[2 * i + 1] as i32,
            cache.coeffs[i] as i32,
        );
        out.coeffs[2 * i] = c0 as i16;
        out.coeffs[2 * i + 1] = c1 as i16;
    }
    Ok(out)
}

/// Stack version: reduce every intermediate product polynomial, then
/// accumulate the k reduced polynomials. Outputs lie in (−kq/2, kq/2).
pub fn matvec_stack(
    e: &NttEngine,
    a_mat: &[Vec<Poly>],
    s_vec: &[Poly],
) -> Result<Vec<Poly>, NttError> {
    let k = s_vec.len();
    let mut out = Vec::with_capacity(k);
    for row in a_mat {
        assert_eq!(row.len(), k);
        let mut acc = Poly::zero(Domain::Ntt);
        for (a, s) in row.iter().zip(s_vec) {
            let prod = basemul(e, a, s)?;
            for (o, p) in acc.coeffs.iter_mut().zip(prod.coeffs.iter()) {
                *o += p;
            }
        }
        out.push(acc);
    }
    Ok(out)
}

/// Speed version: accumulate the k unreduced degree-2 product sums in a
/// 32-bit accumulator, then reduce once. Outputs lie in (−q/2, q/2).
/// The caches must come from `cache_secret_half` over `s_vec`.
pub fn matvec_speed(
    e: &NttEngine,
    a_mat: &[Vec<Poly>],
    s_vec: &[Poly],
    caches: &[PolyHalf],
) -> Result<Vec<Poly>, NttError> {
    let k = s_vec.len();
    assert_eq!(caches.len(), k);
    let mut out = Vec::with_capacity(a_mat.len());
    for row in a_mat {
        assert_eq!(row.len(), k);
        let mut acc = Accumulator32::zero();
        for ((a, s), cache) in row.iter().zip(s_vec).zip(caches) {
            expect_ntt(a)?;
            expect_ntt(s)?;
            for i in 0..LANES {
                let (a0, a1) = (a.coeffs[2 * i] as i32, a.coeffs[2 * i + 1] as i32);
                let (s0, s1) = (s.coeffs[2 * i] as i32, s.coeffs[2 * i + 1] as i32);
                let t = cache.coeffs[i] as i32;
                acc.entries[2 * i] = acc.entries[2 * i]
                    .checked_add(a0 * s0 + a1 * t)
                    .expect("accumulator stays below 2^31");
                acc.entries[2 * i + 1] = acc.entries[2 * i + 1]
                    .checked_add(a0 * s1 + a1 * s0)
                    .expect("accumulator stays below 2^31");
            }
        }
        let mut poly = Poly::zero(Domain::Ntt);
        for (o, v) in poly.coeffs.iter_mut().zip(acc.entries.iter()) {
            *o = reduce_exact(e, *v) as i16;
        }
        out.push(poly);
    }
    Ok(out)
}

pub fn inner_product_stack(
    e: &NttEngine,
    a_vec: &[Poly],
    b_vec: &[Poly],
) -> Result<Poly, NttError> {
    let row = vec![a_vec.to_vec()];
    Ok(matvec_stack(e, &row, b_vec)?.pop().unwrap())
}

pub fn inner_product_speed(
    e: &NttEngine,
    a_vec: &[Poly],
    b_vec: &[Poly],
    caches: &[PolyHalf],
) -> Result<Poly, NttError> {
    let row = vec![a_vec.to_vec()];
    Ok(matvec_speed(e, &row, b_vec, caches)?.pop().unwrap())
}

/// Static memory accounting for the caching layouts, in bytes. Pure
/// arithmetic over the type definitions; the redundant-pair layout that
/// stores ŝ_{2i} next to each twisted ŝ_{2i+1} is kept as the comparison
/// baseline only.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MemoryReport {
    pub k: usize,
    pub poly_half_bytes: usize,
    pub polyvec_half_bytes: usize,
    pub redundant_pair_poly_bytes: usize,
    pub redundant_pair_vec_bytes: usize,
    pub half_cache_saving_bytes: usize,
    pub poly_double_bytes: usize,
    pub accumulator32_bytes: usize,
}

pub fn memory_report(k: usize) -> MemoryReport {
    let poly_half_bytes = std::mem::size_of::<PolyHalf>();
    let redundant_pair_poly_bytes = 2 * poly_half_bytes;
    MemoryReport {
        k,
        poly_half_bytes,
        polyvec_half_bytes: k * poly_half_bytes,
        redundant_pair_poly_bytes,
        redundant_pair_vec_bytes: k * redundant_pair_poly_bytes,
        half_cache_saving_bytes: k * (redundant_pair_poly_bytes - poly_half_bytes),
        poly_double_bytes: std::mem::size_of::<PolyDouble>(),
        accumulator32_bytes: std::mem::size_of::<Accumulator32>(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modarith::mod_pm;
    use crate::ntt::Schedule;
    use crate::oracle;

    fn poly(seed: i64, bound: i64, domain: Domain) -> Poly {
        let mut state = seed.wrapping_mul(0x9e3779b97f4a7c15u64 as i64) | 1;
        let coeffs = std::array::from_fn(|_| {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            ((state as u64 >> 33) as i64 % (2 * bound + 1) - bound) as i16
        });
        Poly { coeffs, domain }
    }

    fn to_i64(p: &Poly) -> [i64; N] {
        std::array::from_fn(|i| p.coeffs[i] as i64)
    }

    #[test]
    fn basemul_zero_and_identity() {
        let e = NttEngine::new();
        let z = Poly::zero(Domain::Ntt);
        let b = poly(2, 1664, Domain::Ntt);
        assert_eq!(basemul(&e, &z, &b).unwrap().coeffs, [0; N]);

        // NTT(1) ∘ NTT(x) inverts to x.
        let mut one = Poly::zero(Domain::Normal);
        one.coeffs[0] = 1;
        let x = poly(3, 1664, Domain::Normal);
        let sched = Schedule::ntt_m3();
        let oh = e.ntt_forward(&one, &sched, None).unwrap();
        let xh = e.ntt_forward(&x, &sched, None).unwrap();
        let prod = basemul(&e, &oh, &xh).unwrap();
        let back = e
            .intt(&prod, &Schedule::intt_gs34(crate::ntt::Variant::Speed), None)
            .unwrap();
        for i in 0..N {
            assert_eq!(
                mod_pm(back.coeffs[i] as i64, 3329),
                mod_pm(x.coeffs[i] as i64, 3329)
            );
        }
    }

    #[test]
    fn basemul_matches_oracle_pointwise() {
        // Residue-level check in the transform domain itself: each pair is a
        // product mod (X² − γ_i) against exact integer arithmetic.
        let e = NttEngine::new();
        let a = poly(5, 1664, Domain::Ntt);
        let b = poly(6, 1664, Domain::Ntt);
        let c = basemul(&e, &a, &b).unwrap();
        for i in 0..LANES {
            let g = oracle::pair_root(i, 3329, 17);
            let (a0, a1) = (a.coeffs[2 * i] as i64, a.coeffs[2 * i + 1] as i64);
            let (b0, b1) = (b.coeffs[2 * i] as i64, b.coeffs[2 * i + 1] as i64);
            let want0 = mod_pm(a0 * b0 + a1 * b1 % 3329 * g, 3329);
            let want1 = mod_pm(a0 * b1 + a1 * b0, 3329);
            assert_eq!(mod_pm(c.coeffs[2 * i] as i64, 3329), want0, "pair {i}");
            assert_eq!(mod_pm(c.coeffs[2 * i + 1] as i64, 3329), want1, "pair {i}");
            assert!(c.coeffs[2 * i].abs() <= 1664);
        }
    }

    #[test]
    fn ntt_basemul_intt_equals_schoolbook() {
        let e = NttEngine::new();
        let a = poly(7, 1664, Domain::Normal);
        let b = poly(8, 1664, Domain::Normal);
        let sched = Schedule::ntt_rv();
        let ah = e.ntt_forward(&a, &sched, None).unwrap();
        let bh = e.ntt_forward(&b, &sched, None).unwrap();
        let ch = basemul(&e, &ah, &bh).unwrap();
        let c = e
            .intt(&ch, &Schedule::intt_gs34(crate::ntt::Variant::Speed), None)
            .unwrap();
        let want = oracle::schoolbook_mul(&to_i64(&a), &to_i64(&b), 3329);
        for i in 0..N {
            assert_eq!(mod_pm(c.coeffs[i] as i64, 3329), want[i], "index {i}");
        }
    }

    #[test]
    fn cached_basemul_is_residue_transparent() {
        let e = NttEngine::new();
        for seed in 0..10 {
            let a = poly(100 + seed, 1664, Domain::Ntt);
            let s = poly(200 + seed, 1664, Domain::Ntt);
            let cache = cache_secret_half(&e, &s).unwrap();
            let plain = basemul(&e, &a, &s).unwrap();
            let cached = basemul_cached(&e, &a, &s, &cache).unwrap();
            assert_eq!(plain, cached);
        }
        let z = Poly::zero(Domain::Ntt);
        let s = poly(42, 1664, Domain::Ntt);
        let cache = cache_secret_half(&e, &s).unwrap();
        assert_eq!(basemul_cached(&e, &z, &s, &cache).unwrap().coeffs, [0; N]);
        assert_eq!(
            cache_secret_half(&e, &Poly::zero(Domain::Ntt)).unwrap().coeffs,
            [0; LANES]
        );
    }

    fn matvec_case(k: usize) {
        let e = NttEngine::new();
        let a_mat: Vec<Vec<Poly>> = (0..k)
            .map(|i| {
                (0..k)
                    .map(|j| poly((10 * i + j) as i64 + 1, 1664, Domain::Ntt))
                    .collect()
            })
            .collect();
        let s_vec: Vec<Poly> = (0..k)
            .map(|j| poly(1000 + j as i64, 1664, Domain::Ntt))
            .collect();
        let caches: Vec<PolyHalf> = s_vec
            .iter()
            .map(|s| cache_secret_half(&e, s).unwrap())
            .collect();

        let stack = matvec_stack(&e, &a_mat, &s_vec).unwrap();
        let speed = matvec_speed(&e, &a_mat, &s_vec, &caches).unwrap();
        let bound_stack = (k as i64 * 3329 - 1) / 2;
        for (row_s, row_f) in stack.iter().zip(speed.iter()) {
            for i in 0..N {
                assert_eq!(
                    mod_pm(row_s.coeffs[i] as i64, 3329),
                    mod_pm(row_f.coeffs[i] as i64, 3329)
                );
                assert!((row_s.coeffs[i] as i64).abs() <= bound_stack);
                assert!(row_f.coeffs[i].abs() <= 1664);
            }
        }

        // Against the schoolbook oracle through the inverse transform.
        let intt = |p: &Poly| {
            e.intt(
                p,
                &Schedule::intt_gs34(crate::ntt::Variant::Stack(k as u8)),
                None,
            )
            .unwrap()
        };
        for (r, row) in a_mat.iter().enumerate() {
            let got = intt(&stack[r]);
            let mut want = [0i64; N];
            for (a, s) in row.iter().zip(&s_vec) {
                // The operands live in the transform domain; reconstruct
                // their normal-domain counterparts through the oracle.
                let an = oracle::intt_reference(&to_i64(a), 3329, 17);
                let sn = oracle::intt_reference(&to_i64(s), 3329, 17);
                let prod = oracle::schoolbook_mul(&an, &sn, 3329);
                for i in 0..N {
                    want[i] = mod_pm(want[i] + prod[i], 3329);
                }
            }
            for i in 0..N {
                assert_eq!(mod_pm(got.coeffs[i] as i64, 3329), want[i], "row {r} i {i}");
            }
        }
    }

    #[test]
    fn matvec_stack_speed_agree_and_match_oracle() {
        for k in 2..=4 {
            matvec_case(k);
        }
    }

    #[test]
    fn matvec_single_entry_column_reduces_to_basemul() {
        let e = NttEngine::new();
        let k = 3;
        let a_mat: Vec<Vec<Poly>> = (0..k)
            .map(|i| (0..k).map(|j| poly((7 * i + j) as i64 + 3, 1664, Domain::Ntt)).collect())
            .collect();
        let mut s_vec: Vec<Poly> = (0..k).map(|_| Poly::zero(Domain::Ntt)).collect();
        s_vec[1] = poly(77, 1664, Domain::Ntt);
        let got = matvec_stack(&e, &a_mat, &s_vec).unwrap();
        for (row, out) in a_mat.iter().zip(got.iter()) {
            let want = basemul(&e, &row[1], &s_vec[1]).unwrap();
            assert_eq!(out, &want);
        }
    }

    #[test]
    fn inner_product_k1_reduces_to_basemul() {
        let e = NttEngine::new();
        let a = poly(501, 1664, Domain::Ntt);
        let b = poly(502, 1664, Domain::Ntt);
        let ip = inner_product_stack(&e, &[a.clone()], &[b.clone()]).unwrap();
        assert_eq!(ip, basemul(&e, &a, &b).unwrap());
        let cache = cache_secret_half(&e, &b).unwrap();
        let ips = inner_product_speed(&e, &[a.clone()], &[b], &[cache]).unwrap();
        for i in 0..N {
            assert_eq!(
                mod_pm(ips.coeffs[i] as i64, 3329),
                mod_pm(ip.coeffs[i] as i64, 3329)
            );
        }
    }

    #[test]
    fn accumulator_worst_case_fits_32_bits() {
        // k = 4 rows of saturated (−q/2, q/2) operands: the accumulator peak
        // stays far below 2^31 (the checked_add in matvec_speed also guards
        // every real run).
        let max = 8i64 * 1664 * (1664 + 1664);
        assert!(max < i32::MAX as i64);
        let e = NttEngine::new();
        let a = Poly::from_coeffs([1664; N], Domain::Ntt);
        let s = Poly::from_coeffs([-1664; N], Domain::Ntt);
        let caches: Vec<PolyHalf> = (0..4).map(|_| cache_secret_half(&e, &s).unwrap()).collect();
        let a_mat = vec![vec![a; 4]];
        let s_vec = vec![s; 4];
        matvec_speed(&e, &a_mat, &s_vec, &caches).unwrap();
    }

    #[test]
    fn memory_accounting() {
        let r2 = memory_report(2);
        let r3 = memory_report(3);
        let r4 = memory_report(4);
        assert_eq!(r2.poly_half_bytes, 256);
        assert_eq!(
            (r2.half_cache_saving_bytes, r3.half_cache_saving_bytes, r4.half_cache_saving_bytes),
            (512, 768, 1024)
        );
        assert_eq!(r2.poly_double_bytes, r2.accumulator32_bytes);
        assert_eq!(r2.poly_double_bytes, 1024);
    }

    #[test]
    fn poly_double_reuses_accumulator_storage() {
        let mut acc = Accumulator32::zero();
        acc.entries[0] = 0x0001_0002;
        acc.entries[255] = -1;
        let pd = PolyDouble::reuse(acc);
        assert_eq!(pd.coeffs[0], 2);
        assert_eq!(pd.coeffs[1], 1);
        assert_eq!(pd.coeffs[510], -1);
        assert_eq!(pd.coeffs[511], -1);
    }
}
