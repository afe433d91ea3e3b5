//! Butterfly-layer plans: merge groups, butterfly kinds, and explicit
//! reduction points.
//!
//! Reduction points are data rather than code so the bound analyzer can
//! propose and verify them. Lane predicates are residue classes over the
//! transform-lane index (coefficient index divided by two: the even and odd
//! coefficient sublattices move in lockstep).

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ButterflyKind {
    Ct,
    Gs,
    Light,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Variant {
    /// Inputs in (−kq/2, kq/2): k reduced polynomials accumulated.
    Stack(u8),
    /// Inputs already reduced to (−q/2, q/2).
    Speed,
}

impl Variant {
    /// Largest admissible |coefficient| on an INTT input.
    pub fn input_abs_max(&self, q: i64) -> i64 {
        match self {
            Variant::Stack(k) => (*k as i64 * q - 1) / 2,
            Variant::Speed => (q - 1) / 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Strategy {
    /// Forward NTT, 3+3+1 merge (three-layer passes on 8 registers).
    NttCt331,
    /// Forward NTT, 4+3 merge (four-layer passes on 16 registers).
    NttCt43,
    /// Inverse with GS butterflies, 3+4 merge.
    InttGs34,
    /// Inverse with CT/light butterflies, 3+1+3 merge.
    InttCt313,
    /// Inverse with CT/light butterflies, 3+3+1 merge (overflows at k = 4).
    InttCt331,
}

impl Strategy {
    pub fn is_inverse(&self) -> bool {
        matches!(
            self,
            Strategy::InttGs34 | Strategy::InttCt313 | Strategy::InttCt331
        )
    }
}

/// Residue-class predicate over transform lanes (0..128).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LanePred {
    pub modulus: u8,
    pub residues: Vec<u8>,
}

impl LanePred {
    pub fn new(modulus: u8, residues: Vec<u8>) -> Self {
        LanePred { modulus, residues }
    }

    pub fn matches_lane(&self, lane: usize) -> bool {
        self.residues
            .iter()
            .any(|&r| lane % self.modulus as usize == r as usize)
    }

    /// Number of polynomial coefficients the predicate selects (both
    /// sublattices).
    pub fn coeff_count(&self) -> usize {
        2 * (128 / self.modulus as usize) * self.residues.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReductionPoint {
    pub after_layer: u8,
    pub lanes: LanePred,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Schedule {
    pub strategy: Strategy,
    pub merges: Vec<u8>,
    pub butterfly_per_layer: [ButterflyKind; 7],
    pub reduction_points: Vec<ReductionPoint>,
    pub variant: Variant,
}

impl Schedule {
    pub fn validate(&self) -> Result<(), String> {
        if self.merges.iter().map(|&m| m as u32).sum::<u32>() != 7 {
            return Err(format!("merges {:?} do not sum to 7", self.merges));
        }
        if let Variant::Stack(k) = self.variant {
            if !(2..=4).contains(&k) {
                return Err(format!("stack k = {k} outside 2..=4"));
            }
        }
        for (i, kind) in self.butterfly_per_layer.iter().enumerate() {
            if *kind == ButterflyKind::Light
                && (i >= 3 || !matches!(self.strategy, Strategy::InttCt313 | Strategy::InttCt331))
            {
                return Err("light butterflies only in the first three CT-inverse layers".into());
            }
        }
        for rp in &self.reduction_points {
            if rp.after_layer == 0 || rp.after_layer > 7 {
                return Err(format!("reduction point after layer {}", rp.after_layer));
            }
        }
        Ok(())
    }

    /// Pass boundaries (layer indices after which coefficients are stored
    /// back to 16-bit memory). The final boundary is the transform output.
    pub fn store_boundaries(&self) -> Vec<u8> {
        let mut acc = 0;
        self.merges
            .iter()
            .map(|&m| {
                acc += m;
                acc
            })
            .collect()
    }

    pub fn ntt_m3() -> Schedule {
        Schedule {
            strategy: Strategy::NttCt331,
            merges: vec![3, 3, 1],
            butterfly_per_layer: [ButterflyKind::Ct; 7],
            reduction_points: vec![],
            variant: Variant::Speed,
        }
    }

    pub fn ntt_rv() -> Schedule {
        Schedule {
            strategy: Strategy::NttCt43,
            merges: vec![4, 3],
            butterfly_per_layer: [ButterflyKind::Ct; 7],
            reduction_points: vec![],
            variant: Variant::Speed,
        }
    }

    /// GS 3+4 inverse with the canonical lazy-reduction points: none for
    /// Stack(2) and Speed, 32 coefficients after layer 3 for Stack(3/4).
    pub fn intt_gs34(variant: Variant) -> Schedule {
        let reduction_points = match variant {
            Variant::Stack(k) if k >= 3 => vec![ReductionPoint {
                after_layer: 3,
                lanes: LanePred::new(8, vec![0]),
            }],
            _ => vec![],
        };
        Schedule {
            strategy: Strategy::InttGs34,
            merges: vec![3, 4],
            butterfly_per_layer: [ButterflyKind::Gs; 7],
            reduction_points,
            variant,
        }
    }

    /// CT 3+1+3 inverse: 32 coefficients reduced after layer 2 for
    /// Stack(3/4), none otherwise.
    pub fn intt_ct313(variant: Variant) -> Schedule {
        let reduction_points = match variant {
            Variant::Stack(k) if k >= 3 => vec![ReductionPoint {
                after_layer: 2,
                lanes: LanePred::new(8, vec![0]),
            }],
            _ => vec![],
        };
        Schedule {
            strategy: Strategy::InttCt313,
            merges: vec![3, 1, 3],
            butterfly_per_layer: ct_inverse_kinds(),
            reduction_points,
            variant,
        }
    }

    /// CT 3+3+1 inverse, kept as the comparison point the 3+1+3 split beats:
    /// its second pass stores coefficients that reach 10q at k = 4.
    pub fn intt_ct331(variant: Variant) -> Schedule {
        let reduction_points = match variant {
            Variant::Stack(k) if k >= 3 => vec![ReductionPoint {
                after_layer: 2,
                lanes: LanePred::new(8, vec![0]),
            }],
            _ => vec![],
        };
        Schedule {
            strategy: Strategy::InttCt331,
            merges: vec![3, 3, 1],
            butterfly_per_layer: ct_inverse_kinds(),
            reduction_points,
            variant,
        }
    }
}

fn ct_inverse_kinds() -> [ButterflyKind; 7] {
    [
        ButterflyKind::Light,
        ButterflyKind::Light,
        ButterflyKind::Light,
        ButterflyKind::Ct,
        ButterflyKind::Ct,
        ButterflyKind::Ct,
        ButterflyKind::Ct,
    ]
}
