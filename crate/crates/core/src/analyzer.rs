//! Static worst-case interval propagation through butterfly schedules.
//!
//! Intervals are exact rationals in units of q, so the layer maxima the
//! schedules are famous for (4kq, 6.5q, 8.5q, 9q, 64q, 72q, 128q) come out
//! as literal fractions. Transfer functions:
//!
//! * light add/sub: interval addition/subtraction;
//! * any Plantard constant multiplication: output exactly [−1/2, 1/2];
//! * a CT butterfly therefore maps the u-operand's interval to
//!   [lo − 1/2, hi + 1/2] on both outputs;
//! * a reduction point collapses matching lanes to [−1/2, 1/2].
//!
//! The same per-layer butterfly enumeration drives three passes: interval
//! propagation (`propagate`/`check_schedule`), a greedy reduction-point
//! search (`derive_reduction_points`), and an exact linear-coefficient pass
//! that builds adversarial inputs saturating additive paths
//! (`adversarial_input`).

use crate::modarith::ModParams;
use crate::ntt::schedule::{LanePred, ReductionPoint, Schedule, Strategy, Variant};
use crate::ntt::LANES;
use num_rational::Ratio;
use serde::Serialize;

type Q = Ratio<i64>;

/// Serializable exact rational.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Rat {
    pub num: i64,
    pub den: i64,
}

impl From<Q> for Rat {
    fn from(r: Q) -> Rat {
        Rat {
            num: *r.numer(),
            den: *r.denom(),
        }
    }
}

impl Rat {
    pub fn as_ratio(&self) -> Q {
        Ratio::new(self.num, self.den)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: Q,
    pub hi: Q,
}

impl Interval {
    fn point(v: Q) -> Interval {
        Interval { lo: v, hi: v }
    }

    fn symmetric(v: Q) -> Interval {
        Interval { lo: -v, hi: v }
    }

    fn add(self, o: Interval) -> Interval {
        Interval {
            lo: self.lo + o.lo,
            hi: self.hi + o.hi,
        }
    }

    fn sub(self, o: Interval) -> Interval {
        Interval {
            lo: self.lo - o.hi,
            hi: self.hi - o.lo,
        }
    }

    fn abs_max(&self) -> Q {
        if -self.lo > self.hi {
            -self.lo
        } else {
            self.hi
        }
    }
}

/// Structural butterfly kinds shared by every analysis pass.
#[derive(Debug, Clone, Copy, PartialEq)]
enum Node {
    /// (u + v, u − v), no multiplication.
    Light,
    /// CT with a real twiddle slot: t = mc(v); (u + t, u − t).
    CtMul,
    /// GS inner layer: (u + v, mc(u − v)).
    GsInner,
    /// Final layer, trivial inner twiddle: (mc(u + v), mc(u − v)).
    LastFolded,
    /// Final CT layer, nontrivial twiddle: p = mc(u), s = mc(v),
    /// (p + s, mc(p − s)).
    LastPair,
}

#[derive(Debug, Clone, Copy)]
struct Bfly {
    lo: usize,
    hi: usize,
    node: Node,
}

/// Butterflies of one layer (1-based) over the 128 transform lanes.
fn layer_bflys(strategy: Strategy, layer: u8) -> Vec<Bfly> {
    let mut out = Vec::new();
    match strategy {
        Strategy::InttGs34 => {
            let half = 1usize << (layer - 1);
            let node = if layer == 7 { Node::LastFolded } else { Node::GsInner };
            let mut k = 0;
            while k < LANES {
                for jj in 0..half {
                    out.push(Bfly {
                        lo: k + jj,
                        hi: k + jj + half,
                        node,
                    });
                }
                k += 2 * half;
            }
        }
        Strategy::InttCt313 | Strategy::InttCt331 => {
            let half = 1usize << (layer - 1);
            let mut k = 0;
            while k < LANES {
                for jj in 0..half {
                    let node = match layer {
                        1..=3 => {
                            if jj == 0 {
                                Node::Light
                            } else {
                                Node::CtMul
                            }
                        }
                        4 => Node::CtMul,
                        5 | 6 => {
                            if jj == 0 && strategy == Strategy::InttCt313 {
                                Node::Light
                            } else {
                                Node::CtMul
                            }
                        }
                        _ => {
                            if jj == 0 {
                                Node::LastFolded
                            } else {
                                Node::LastPair
                            }
                        }
                    };
                    out.push(Bfly {
                        lo: k + jj,
                        hi: k + jj + half,
                        node,
                    });
                }
                k += 2 * half;
            }
        }
        // Forward NTT: every layer is plain CT, widest blocks first.
        Strategy::NttCt331 | Strategy::NttCt43 => {
            let half = LANES >> layer;
            let mut k = 0;
            while k < LANES {
                for jj in 0..half {
                    out.push(Bfly {
                        lo: k + jj,
                        hi: k + jj + half,
                        node: Node::CtMul,
                    });
                }
                k += 2 * half;
            }
        }
    }
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassBound {
    pub lanes: String,
    pub lane_count: usize,
    pub lo: Rat,
    pub hi: Rat,
}

#[derive(Debug, Clone, Serialize)]
pub struct StoreBackCheck {
    pub max_abs_q: Rat,
    pub limit_abs: i64,
    pub ok: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct LayerBound {
    pub layer: u8,
    /// Max |value| over the layer's nodes, including pre-multiplication sums.
    pub max_abs_q: Rat,
    pub classes: Vec<ClassBound>,
    pub reduced_coeffs: usize,
    pub store_back: Option<StoreBackCheck>,
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundReport {
    pub strategy: Strategy,
    pub variant: Variant,
    pub input_bound_q: Rat,
    pub layers: Vec<LayerBound>,
    pub const_input_ok: bool,
    pub pass: bool,
    pub first_violation: Option<String>,
}

impl BoundReport {
    pub fn layer_max(&self, layer: u8) -> Q {
        self.layers[layer as usize - 1].max_abs_q.as_ratio()
    }
}

/// Propagate per-lane worst-case intervals (in units of q) through the
/// schedule, seeding every lane with [−input_bound, input_bound].
pub fn propagate(sched: &Schedule, input_bound: Q, p: &ModParams<i32>) -> BoundReport {
    let q = p.q as i64;
    let half = Ratio::new(1i64, 2);
    let store_limit = i16::MAX as i64;
    // Constant-operand admissible interval, in q units.
    let const_lo = Ratio::new(p.const_input_range.0 as i64, q);
    let const_hi = Ratio::new(p.const_input_range.1 as i64, q);

    let mut lanes = vec![Interval::symmetric(input_bound); LANES];
    let mut layers = Vec::new();
    let mut const_input_ok = true;
    let mut first_violation: Option<String> = None;
    let boundaries = sched.store_boundaries();

    for layer in 1..=7u8 {
        let mut layer_max = Ratio::new(0, 1);
        let mut track = |iv: &Interval| {
            if iv.abs_max() > layer_max {
                layer_max = iv.abs_max();
            }
        };
        let mut mc_input = |iv: &Interval, what: &str| {
            if iv.lo < const_lo || iv.hi > const_hi {
                const_input_ok = false;
                if first_violation.is_none() {
                    first_violation = Some(format!(
                        "layer {layer}: {what} interval [{}, {}]q outside constant-input range",
                        iv.lo, iv.hi
                    ));
                }
            }
        };
        for b in layer_bflys(sched.strategy, layer) {
            let (u, v) = (lanes[b.lo], lanes[b.hi]);
            match b.node {
                Node::Light => {
                    let (s, d) = (u.add(v), u.sub(v));
                    track(&s);
                    track(&d);
                    lanes[b.lo] = s;
                    lanes[b.hi] = d;
                }
                Node::CtMul => {
                    mc_input(&v, "CT multiplicand");
                    let out = Interval {
                        lo: u.lo - half,
                        hi: u.hi + half,
                    };
                    track(&out);
                    lanes[b.lo] = out;
                    lanes[b.hi] = out;
                }
                Node::GsInner => {
                    let (s, d) = (u.add(v), u.sub(v));
                    track(&s);
                    track(&d);
                    mc_input(&d, "GS difference");
                    lanes[b.lo] = s;
                    lanes[b.hi] = Interval::symmetric(half);
                }
                Node::LastFolded => {
                    let (s, d) = (u.add(v), u.sub(v));
                    track(&s);
                    track(&d);
                    mc_input(&s, "folded sum");
                    mc_input(&d, "folded difference");
                    lanes[b.lo] = Interval::symmetric(half);
                    lanes[b.hi] = Interval::symmetric(half);
                }
                Node::LastPair => {
                    mc_input(&u, "twisted operand");
                    mc_input(&v, "twisted operand");
                    let ps = Interval::symmetric(half).add(Interval::symmetric(half));
                    track(&ps);
                    lanes[b.lo] = ps;
                    lanes[b.hi] = Interval::symmetric(half);
                }
            }
        }
        // Reduction points scheduled after this layer.
        let mut reduced_coeffs = 0;
        for rp in sched
            .reduction_points
            .iter()
            .filter(|rp| rp.after_layer == layer)
        {
            for (lane, iv) in lanes.iter_mut().enumerate() {
                if rp.lanes.matches_lane(lane) {
                    mc_input_check_static(iv, const_lo, const_hi, layer, &mut const_input_ok, &mut first_violation);
                    *iv = Interval::symmetric(half);
                    reduced_coeffs += 2;
                }
            }
        }
        // Store-back check at merge boundaries.
        let store_back = if boundaries.contains(&layer) {
            let max = lanes
                .iter()
                .map(|iv| iv.abs_max())
                .max()
                .unwrap_or_else(|| Ratio::new(0, 1));
            let ok = max * Ratio::new(q, 1) <= Ratio::new(store_limit, 1);
            if !ok && first_violation.is_none() {
                first_violation = Some(format!(
                    "layer {layer}: store-back max {max}q exceeds 16-bit limit"
                ));
            }
            Some(StoreBackCheck {
                max_abs_q: max.into(),
                limit_abs: store_limit,
                ok,
            })
        } else {
            None
        };

        layers.push(LayerBound {
            layer,
            max_abs_q: layer_max.into(),
            classes: group_classes(&lanes),
            reduced_coeffs,
            store_back,
        });
    }

    let pass = const_input_ok && layers.iter().all(|l| l.store_back.as_ref().map_or(true, |s| s.ok));
    BoundReport {
        strategy: sched.strategy,
        variant: sched.variant,
        input_bound_q: input_bound.into(),
        layers,
        const_input_ok,
        pass,
        first_violation,
    }
}

fn mc_input_check_static(
    iv: &Interval,
    const_lo: Q,
    const_hi: Q,
    layer: u8,
    ok: &mut bool,
    first: &mut Option<String>,
) {
    if iv.lo < const_lo || iv.hi > const_hi {
        *ok = false;
        if first.is_none() {
            *first = Some(format!(
                "layer {layer}: reduction input [{}, {}]q outside constant-input range",
                iv.lo, iv.hi
            ));
        }
    }
}

fn group_classes(lanes: &[Interval]) -> Vec<ClassBound> {
    let mut groups: Vec<(Interval, Vec<usize>)> = Vec::new();
    for (i, iv) in lanes.iter().enumerate() {
        if let Some(g) = groups.iter_mut().find(|(g, _)| g == iv) {
            g.1.push(i);
        } else {
            groups.push((*iv, vec![i]));
        }
    }
    groups.sort_by(|a, b| b.0.abs_max().cmp(&a.0.abs_max()));
    groups
        .into_iter()
        .map(|(iv, members)| {
            let shown: Vec<String> = members.iter().take(4).map(|m| m.to_string()).collect();
            let lanes = if members.len() > 4 {
                format!("{},…", shown.join(","))
            } else {
                shown.join(",")
            };
            ClassBound {
                lanes,
                lane_count: members.len(),
                lo: iv.lo.into(),
                hi: iv.hi.into(),
            }
        })
        .collect()
}

/// Check a schedule against the 16-bit store-back limit and the Plantard
/// constant-input range, seeding with the variant's worst input.
pub fn check_schedule(sched: &Schedule, p: &ModParams<i32>) -> (bool, BoundReport) {
    let x = match sched.variant {
        Variant::Stack(k) => Ratio::new(k as i64, 2),
        Variant::Speed => Ratio::new(1, 2),
    };
    let report = propagate(sched, x, p);
    (report.pass, report)
}

/// Greedy lazy-reduction search: the fewest reduced coefficients, placed as
/// late as the store-back and range constraints allow. Returns the schedule
/// with its reduction points replaced; errors if nothing feasible exists.
pub fn derive_reduction_points(
    sched: &Schedule,
    p: &ModParams<i32>,
) -> Result<Schedule, String> {
    let mut base = sched.clone();
    base.reduction_points.clear();
    if check_schedule(&base, p).0 {
        return Ok(base);
    }
    // Residue-class candidates mod 8, by ascending reduced-coefficient count
    // and then by how late the reduction runs.
    for size in 1..=8usize {
        let mut best: Option<Schedule> = None;
        for after_layer in (1..=6u8).rev() {
            for combo in residue_combos(size) {
                let mut cand = base.clone();
                cand.reduction_points.push(ReductionPoint {
                    after_layer,
                    lanes: LanePred::new(8, combo.clone()),
                });
                if check_schedule(&cand, p).0 {
                    best = Some(cand);
                    break;
                }
            }
            if best.is_some() {
                break;
            }
        }
        if let Some(s) = best {
            return Ok(s);
        }
    }
    Err("no feasible reduction placement within one residue-class point".into())
}

fn residue_combos(size: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    let mut combo = Vec::new();
    fn rec(start: u8, size: usize, combo: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        if combo.len() == size {
            out.push(combo.clone());
            return;
        }
        for r in start..8 {
            combo.push(r);
            rec(r + 1, size, combo, out);
            combo.pop();
        }
    }
    rec(0, size, &mut combo, &mut out);
    out
}

/// An adversarial input and the exact value its target node attains when the
/// path to it is purely additive (multiplication outputs count as zero).
#[derive(Debug, Clone)]
pub struct Adversarial {
    pub coeffs: [i16; 2 * LANES],
    /// Exact linear-part value of the target node under these inputs.
    pub predicted: i64,
}

/// Build an input saturating the (layer, lane) node of the inverse network.
/// Every input lane is set to ±X (X = the variant's admissible max) with the
/// sign of its linear coefficient into the target. Lanes that pass through a
/// scheduled reduction are steered so the reduced value re-enters with full
/// magnitude (q−1)/2 and the right sign, when their supports are free.
pub fn adversarial_input(
    sched: &Schedule,
    target_layer: u8,
    target_lane: usize,
    p: &ModParams<i32>,
) -> Adversarial {
    let q = p.q as i64;
    let x = sched.variant.input_abs_max(q);
    let hmax = (q - 1) / 2;

    // rows[t] = integer coefficients of each input lane in lane t's current
    // value, with multiplication outputs zeroed.
    let mut rows: Vec<Vec<i64>> = (0..LANES)
        .map(|t| {
            let mut r = vec![0i64; LANES];
            r[t] = 1;
            r
        })
        .collect();
    // (downstream weight into target, pre-reduction row) per reduction site.
    let mut reduced_sites: Vec<(usize, Vec<i64>)> = Vec::new();
    // Marker rows for reduction outputs: reduced_mark[t] = Some(site index).
    let mut site_weight_rows: Vec<Vec<i64>> = Vec::new();

    let mut target_row: Option<Vec<i64>> = None;
    'outer: for layer in 1..=7u8 {
        for b in layer_bflys(sched.strategy, layer) {
            let (u, v) = (rows[b.lo].clone(), rows[b.hi].clone());
            let at_target =
                layer == target_layer && (b.lo == target_lane || b.hi == target_lane);
            let (sum, diff) = (vec_add(&u, &v), vec_sub(&u, &v));
            match b.node {
                Node::Light | Node::GsInner | Node::LastFolded => {
                    if at_target {
                        target_row = Some(if b.lo == target_lane { sum.clone() } else { diff.clone() });
                        // Capture site weights into the target.
                        for (i, w) in site_weight_rows.iter().enumerate() {
                            let val = if b.lo == target_lane {
                                w[b.lo] + w[b.hi]
                            } else {
                                w[b.lo] - w[b.hi]
                            };
                            reduced_sites[i].0 = val.unsigned_abs() as usize;
                            if val < 0 {
                                reduced_sites[i].1.iter_mut().for_each(|c| *c = -*c);
                            }
                        }
                        break 'outer;
                    }
                    match b.node {
                        Node::Light => {
                            rows[b.lo] = sum;
                            rows[b.hi] = diff;
                            for w in site_weight_rows.iter_mut() {
                                let (a, c) = (w[b.lo], w[b.hi]);
                                w[b.lo] = a + c;
                                w[b.hi] = a - c;
                            }
                        }
                        Node::GsInner => {
                            rows[b.lo] = sum;
                            rows[b.hi] = vec![0; LANES];
                            for w in site_weight_rows.iter_mut() {
                                let (a, c) = (w[b.lo], w[b.hi]);
                                w[b.lo] = a + c;
                                w[b.hi] = 0;
                            }
                        }
                        _ => {
                            rows[b.lo] = vec![0; LANES];
                            rows[b.hi] = vec![0; LANES];
                            for w in site_weight_rows.iter_mut() {
                                w[b.lo] = 0;
                                w[b.hi] = 0;
                            }
                        }
                    }
                }
                Node::CtMul => {
                    if at_target {
                        target_row = Some(u.clone());
                        for (i, w) in site_weight_rows.iter().enumerate() {
                            let val = w[b.lo];
                            reduced_sites[i].0 = val.unsigned_abs() as usize;
                            if val < 0 {
                                reduced_sites[i].1.iter_mut().for_each(|c| *c = -*c);
                            }
                        }
                        break 'outer;
                    }
                    rows[b.lo] = u.clone();
                    rows[b.hi] = u;
                    for w in site_weight_rows.iter_mut() {
                        let a = w[b.lo];
                        w[b.hi] = a;
                    }
                }
                Node::LastPair => {
                    if at_target {
                        target_row = Some(vec![0; LANES]);
                        break 'outer;
                    }
                    rows[b.lo] = vec![0; LANES];
                    rows[b.hi] = vec![0; LANES];
                    for w in site_weight_rows.iter_mut() {
                        w[b.lo] = 0;
                        w[b.hi] = 0;
                    }
                }
            }
        }
        if layer == target_layer {
            // Target is the post-layer lane value.
            target_row = Some(rows[target_lane].clone());
            for (i, w) in site_weight_rows.iter().enumerate() {
                let val = w[target_lane];
                reduced_sites[i].0 = val.unsigned_abs() as usize;
                if val < 0 {
                    reduced_sites[i].1.iter_mut().for_each(|c| *c = -*c);
                }
            }
            break;
        }
        for rp in sched
            .reduction_points
            .iter()
            .filter(|rp| rp.after_layer == layer)
        {
            for lane in 0..LANES {
                if rp.lanes.matches_lane(lane) {
                    reduced_sites.push((0, rows[lane].clone()));
                    let mut marker = vec![0i64; LANES];
                    marker[lane] = 1;
                    site_weight_rows.push(marker);
                    rows[lane] = vec![0; LANES];
                }
            }
        }
    }

    let row = target_row.expect("target reachable");
    let mut inputs = vec![0i64; LANES];
    let mut predicted: i64 = 0;
    for (i, &c) in row.iter().enumerate() {
        if c != 0 {
            inputs[i] = if c > 0 { x } else { -x };
            predicted += c.abs() * x;
        }
    }
    // One-level steering: point each reduced value at sign·(q−1)/2 by fixing
    // one input lane in its pre-reduction support that the target's linear
    // part does not use.
    for (weight, pre_row) in &reduced_sites {
        if *weight == 0 {
            continue;
        }
        let mut fixed = 0i64;
        let mut free: Option<(usize, i64)> = None;
        let mut ok = true;
        for (i, &c) in pre_row.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if row[i] != 0 {
                fixed += c * inputs[i];
            } else if free.is_none() && inputs[i] == 0 {
                free = Some((i, c));
            } else if inputs[i] != 0 && row[i] == 0 {
                // Already steered by another site; keep its contribution.
                fixed += c * inputs[i];
            } else {
                ok = false;
            }
        }
        if !ok {
            continue;
        }
        if let Some((i, c)) = free {
            // Solve c·x_i + fixed ≡ hmax (mod q) with x_i in [−x, x].
            let inv = mod_inverse(c.rem_euclid(q), q);
            let want = (hmax - fixed).rem_euclid(q);
            let mut xi = (inv * want).rem_euclid(q);
            if xi > x {
                xi -= q;
            }
            if xi.abs() <= x {
                inputs[i] = xi;
                predicted += *weight as i64 * hmax;
            }
        }
    }

    let mut coeffs = [0i16; 2 * LANES];
    for (i, &v) in inputs.iter().enumerate() {
        coeffs[2 * i] = v as i16;
    }
    Adversarial { coeffs, predicted }
}

fn vec_add(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn vec_sub(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn mod_inverse(a: i64, q: i64) -> i64 {
    // q prime in every supported configuration.
    let mut result = 1i64;
    let mut base = a.rem_euclid(q);
    let mut e = q - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % q;
        }
        base = base * base % q;
        e >>= 1;
    }
    result
}

/// Aligned-text rendering of a bound report, one row per layer.
pub fn render_text(report: &BoundReport) -> String {
    let mut s = String::new();
    s.push_str(&format!(
        "strategy {:?}  variant {:?}  input ±{}q\n",
        report.strategy,
        report.variant,
        report.input_bound_q.as_ratio()
    ));
    s.push_str("layer  max|x|/q     reduced  store-back\n");
    for l in &report.layers {
        let sb = match &l.store_back {
            Some(c) if c.ok => format!("{}q <= {}  ok", c.max_abs_q.as_ratio(), c.limit_abs),
            Some(c) => format!("{}q > {}  FAIL", c.max_abs_q.as_ratio(), c.limit_abs),
            None => "-".to_string(),
        };
        s.push_str(&format!(
            "{:>5}  {:>10}  {:>7}  {}\n",
            l.layer,
            l.max_abs_q.as_ratio().to_string(),
            l.reduced_coeffs,
            sb
        ));
    }
    s.push_str(&format!(
        "constant-input range ok: {}   overall: {}\n",
        report.const_input_ok,
        if report.pass { "PASS" } else { "FAIL" }
    ));
    if let Some(v) = &report.first_violation {
        s.push_str(&format!("first violation: {v}\n"));
    }
    s
}
