//! Abstract primitive-operation accounting.
//!
//! Each algorithm is written once as a sequence of abstract machine steps
//! over 32-bit registers (the 2l-bit working width). Executing the sequence
//! both computes the algorithm's result — unit tests pin it against the
//! direct implementations — and counts the primitives, so the reported
//! instruction counts can never silently drift away from the code.
//!
//! Two target profiles exist and differ only in whether the fused
//! shift-then-add/sub primitive is available: `BarrelShifter` models cores
//! with an inline barrel shifter, `PlainRisc` plain RV32IM-like cores, where
//! the same arithmetic uses a separate shift plus a high-half multiplication
//! by the precomputed q·2^l.

use crate::modarith::ModParams;
use serde::Serialize;
use std::collections::BTreeMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Profile {
    BarrelShifter,
    PlainRisc,
}

impl Profile {
    pub const ALL: [Profile; 2] = [Profile::BarrelShifter, Profile::PlainRisc];

    /// Cycle weights for reporting only; counts are what gets asserted.
    pub fn cycle_weight(&self, prim: Prim) -> u64 {
        match self {
            Profile::BarrelShifter => match prim {
                Prim::MulAcc => 2,
                Prim::Load | Prim::Store => 2,
                _ => 1,
            },
            Profile::PlainRisc => match prim {
                Prim::MulLo | Prim::MulHi | Prim::MulAcc => 5,
                Prim::Load | Prim::Store => 2,
                _ => 1,
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Prim {
    MulLo,
    MulHi,
    MulAcc,
    Shift,
    AddSub,
    FusedShiftAdd,
    Load,
    Store,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Algorithm {
    PlantardMulConst,
    PlantardReduce,
    MontMul,
    BarrettReduce,
    CtButterfly,
    GsButterfly,
    LightButterfly,
    /// One coefficient pair of the uncached base multiplication.
    Basemul,
    /// One coefficient pair against a cached twisted half.
    BasemulCached,
}

impl Algorithm {
    pub const ALL: [Algorithm; 9] = [
        Algorithm::PlantardMulConst,
        Algorithm::PlantardReduce,
        Algorithm::MontMul,
        Algorithm::BarrettReduce,
        Algorithm::CtButterfly,
        Algorithm::GsButterfly,
        Algorithm::LightButterfly,
        Algorithm::Basemul,
        Algorithm::BasemulCached,
    ];
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct CostReport {
    pub counts: BTreeMap<Prim, u64>,
}

impl CostReport {
    pub fn get(&self, p: Prim) -> u64 {
        self.counts.get(&p).copied().unwrap_or(0)
    }

    /// Total step count.
    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    /// Arithmetic steps only (loads and stores excluded).
    pub fn arith_total(&self) -> u64 {
        self.total() - self.get(Prim::Load) - self.get(Prim::Store)
    }

    /// All multiplication steps (low, high, accumulate).
    pub fn mul_total(&self) -> u64 {
        self.get(Prim::MulLo) + self.get(Prim::MulHi) + self.get(Prim::MulAcc)
    }

    pub fn cycles(&self, profile: Profile) -> u64 {
        self.counts
            .iter()
            .map(|(&p, &n)| n * profile.cycle_weight(p))
            .sum()
    }
}

type Reg = usize;

/// Abstract steps over 32-bit registers. Shifts are arithmetic; products
/// wrap at 32 bits except MulHi, which keeps the exact high half.
#[derive(Debug, Clone, Copy)]
enum Instr {
    MulLo(Reg, Reg, Reg),
    MulHi(Reg, Reg, Reg),
    /// d = acc + a·b (the multiply-accumulate some cores provide).
    MulAcc(Reg, Reg, Reg, Reg),
    Sar(Reg, Reg, u32),
    /// Sign-extend the low 16 bits (shift-pair idiom, counted as one shift).
    SignExt(Reg, Reg),
    Add(Reg, Reg, Reg),
    Sub(Reg, Reg, Reg),
    AddImm(Reg, Reg, i32),
    /// d = imm + (a >> k): the barrel-shifter fused form.
    AddImmSar(Reg, i32, Reg, u32),
    /// d = a ± (b >> k).
    AddSar(Reg, Reg, Reg, u32),
    SubSar(Reg, Reg, Reg, u32),
    Load(Reg),
    Store(Reg),
}

impl Instr {
    fn prim(&self) -> Prim {
        match self {
            Instr::MulLo(..) => Prim::MulLo,
            Instr::MulHi(..) => Prim::MulHi,
            Instr::MulAcc(..) => Prim::MulAcc,
            Instr::Sar(..) | Instr::SignExt(..) => Prim::Shift,
            Instr::Add(..) | Instr::Sub(..) | Instr::AddImm(..) => Prim::AddSub,
            Instr::AddImmSar(..) | Instr::AddSar(..) | Instr::SubSar(..) => Prim::FusedShiftAdd,
            Instr::Load(..) => Prim::Load,
            Instr::Store(..) => Prim::Store,
        }
    }
}

const NREGS: usize = 16;

struct Interp {
    regs: [i32; NREGS],
    report: CostReport,
}

impl Interp {
    fn new() -> Interp {
        Interp {
            regs: [0; NREGS],
            report: CostReport::default(),
        }
    }

    fn run(&mut self, program: &[Instr]) {
        for ins in program {
            *self.report.counts.entry(ins.prim()).or_insert(0) += 1;
            let r = &mut self.regs;
            match *ins {
                Instr::MulLo(d, a, b) => r[d] = r[a].wrapping_mul(r[b]),
                Instr::MulHi(d, a, b) => r[d] = ((r[a] as i64 * r[b] as i64) >> 32) as i32,
                Instr::MulAcc(d, a, b, acc) => r[d] = r[acc].wrapping_add(r[a].wrapping_mul(r[b])),
                Instr::Sar(d, a, k) => r[d] = r[a] >> k,
                Instr::SignExt(d, a) => r[d] = (r[a] << 16) >> 16,
                Instr::Add(d, a, b) => r[d] = r[a].wrapping_add(r[b]),
                Instr::Sub(d, a, b) => r[d] = r[a].wrapping_sub(r[b]),
                Instr::AddImm(d, a, imm) => r[d] = r[a].wrapping_add(imm),
                Instr::AddImmSar(d, imm, a, k) => r[d] = imm.wrapping_add(r[a] >> k),
                Instr::AddSar(d, a, b, k) => r[d] = r[a].wrapping_add(r[b] >> k),
                Instr::SubSar(d, a, b, k) => r[d] = r[a].wrapping_sub(r[b] >> k),
                Instr::Load(_) | Instr::Store(_) => {}
            }
        }
    }
}

// Register conventions shared by the program builders.
const A: Reg = 0; // first operand / coefficient
const B: Reg = 1; // second operand
const T: Reg = 2; // scratch
const OUT2: Reg = 3; // second butterfly output
const S0: Reg = 4;
const S1: Reg = 5;
const T2: Reg = 6;
const C_CONST: Reg = 8; // pre-twisted constant (bq', q', twiddle, cache)
const Q: Reg = 9;
const Q2L: Reg = 10; // q·2^l
const MQINV: Reg = 11; // −q⁻¹ mod 2^16
const VBAR: Reg = 12; // barrett multiplier
const FIXC: Reg = 13; // −2^{2l} correction constant
const QP: Reg = 14; // q⁻¹ mod 2^{2l}

/// The four-step Plantard tail on `src` with the pre-twisted constant in
/// `creg`, leaving the result in `src`.
fn plantard_steps(profile: Profile, src: Reg, creg: Reg, alpha: u32) -> Vec<Instr> {
    match profile {
        Profile::BarrelShifter => vec![
            Instr::MulLo(src, src, creg),
            Instr::AddImmSar(src, 1 << alpha, src, 16),
            Instr::MulLo(src, src, Q),
            Instr::Sar(src, src, 16),
        ],
        Profile::PlainRisc => vec![
            Instr::MulLo(src, src, creg),
            Instr::Sar(src, src, 16),
            Instr::AddImm(src, src, 1 << alpha),
            Instr::MulHi(src, src, Q2L),
        ],
    }
}

fn program(alg: Algorithm, profile: Profile, alpha: u32) -> Vec<Instr> {
    use Instr::*;
    match alg {
        // Operand in A, pre-twisted constant resident in C_CONST; result in A.
        Algorithm::PlantardMulConst => plantard_steps(profile, A, C_CONST, alpha),
        // Same sequence; the constant is q⁻¹ mod 2^{2l} (product reduction)
        // or the coefficient-reduction constant.
        Algorithm::PlantardReduce => plantard_steps(profile, A, QP, alpha),
        Algorithm::MontMul => vec![
            MulLo(T, A, B),
            MulLo(OUT2, T, MQINV),
            SignExt(OUT2, OUT2),
            MulAcc(T, OUT2, Q, T),
            Sar(T, T, 16),
        ],
        Algorithm::BarrettReduce => vec![
            MulLo(T, A, VBAR),
            AddImm(T, T, 1 << 25),
            Sar(T, T, 26),
            MulLo(T, T, Q),
            Sub(T, A, T),
        ],
        Algorithm::CtButterfly => match profile {
            Profile::BarrelShifter => vec![
                MulLo(B, B, C_CONST),
                AddImmSar(B, 1 << alpha, B, 16),
                MulLo(T, B, Q),
                SubSar(OUT2, A, T, 16),
                AddSar(A, A, T, 16),
            ],
            Profile::PlainRisc => vec![
                MulLo(B, B, C_CONST),
                Sar(B, B, 16),
                AddImm(B, B, 1 << alpha),
                MulHi(T, B, Q2L),
                Sub(OUT2, A, T),
                Add(A, A, T),
            ],
        },
        // a' = a + b in T, b' = (a − b)·ζ in B.
        Algorithm::GsButterfly => {
            let mut p = vec![Add(T, A, B), Sub(B, A, B)];
            p.extend(plantard_steps(profile, B, C_CONST, alpha));
            p
        }
        Algorithm::LightButterfly => vec![Add(T, A, B), Sub(OUT2, A, B)],
        Algorithm::Basemul | Algorithm::BasemulCached => {
            let cached = alg == Algorithm::BasemulCached;
            // Coefficient traffic: the four pair operands plus either the
            // twiddle or the cached twisted half.
            let mut p = vec![Load(A), Load(B), Load(S0), Load(S1), Load(C_CONST)];
            if !cached {
                // Twist the odd secret coefficient: t = s1·ζ.
                p.push(MulLo(T2, S1, C_CONST));
                p.extend(plantard_steps(profile, T2, C_CONST, alpha).split_off(1));
            }
            // When cached, C_CONST itself holds the twisted half.
            let t_reg = if cached { C_CONST } else { T2 };
            // c0 = fix(reduce(a0·s0 + a1·t)).
            p.push(MulLo(T, A, S0));
            p.push(MulAcc(T, B, t_reg, T));
            p.extend(plantard_steps(profile, T, QP, alpha));
            p.extend(plantard_steps(profile, T, FIXC, alpha));
            p.push(Store(T));
            // c1 = fix(reduce(a0·s1 + a1·s0)).
            p.push(MulLo(T, A, S1));
            p.push(MulAcc(T, B, S0, T));
            p.extend(plantard_steps(profile, T, QP, alpha));
            p.extend(plantard_steps(profile, T, FIXC, alpha));
            p.push(Store(T));
            p
        }
    }
}

/// Execute the algorithm's abstract step sequence on sample inputs and
/// return the mechanically gathered counts.
pub fn cost_of(alg: Algorithm, profile: Profile, p: &ModParams<i32>) -> CostReport {
    let (report, _) = run_program(alg, profile, p, [1000, -700, 123, -45]);
    report
}

/// Run with explicit inputs [a, b, s0, s1] and return both the counts and
/// the register file for semantic checks.
pub fn run_program(
    alg: Algorithm,
    profile: Profile,
    p: &ModParams<i32>,
    inputs: [i32; 4],
) -> (CostReport, [i32; NREGS]) {
    let mut it = Interp::new();
    it.regs[A] = inputs[0];
    it.regs[B] = inputs[1];
    it.regs[S0] = inputs[2];
    it.regs[S1] = inputs[3];
    it.regs[Q] = p.q;
    it.regs[Q2L] = p.q_shift_l;
    it.regs[MQINV] = ((-p.mont_qinv) << 16) >> 16;
    it.regs[VBAR] = ((1 << 26) + p.q / 2) / p.q;
    it.regs[QP] = p.q_inv_2l2;
    let neg22l = p.neg_two_2l2();
    it.regs[FIXC] = (neg22l.wrapping_mul(neg22l).rem_euclid(p.q)).wrapping_mul(p.q_inv_2l2);
    it.regs[C_CONST] = match alg {
        // A constant multiplier b = 17, pre-twisted.
        Algorithm::PlantardMulConst | Algorithm::CtButterfly | Algorithm::GsButterfly => {
            17i32.wrapping_mul(p.q_inv_2l2)
        }
        // Exact-product twiddle for ζ-like constant 1729.
        Algorithm::Basemul => (1729i64 * neg22l as i64).rem_euclid(p.q as i64) as i32 * 1i32,
        // The cached twisted half arrives as a small reduced value.
        Algorithm::BasemulCached => 42,
        _ => 0,
    };
    if alg == Algorithm::Basemul {
        it.regs[C_CONST] = it.regs[C_CONST].wrapping_mul(p.q_inv_2l2);
    }
    let prog = program(alg, profile, p.alpha);
    it.run(&prog);
    (it.report, it.regs)
}

/// Cost table over every algorithm and profile.
pub fn cost_table(p: &ModParams<i32>) -> Vec<(Algorithm, Profile, CostReport)> {
    let mut rows = Vec::new();
    for alg in Algorithm::ALL {
        for profile in Profile::ALL {
            rows.push((alg, profile, cost_of(alg, profile, p)));
        }
    }
    rows
}
