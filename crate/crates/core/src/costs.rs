//! Piecewise-linear edge costs and their inverses.
//!
//! A cost `l` is given by pieces `l(x) = a_k x + b_k` on `[τ_k, τ_{k+1})`.
//! The first piece starts at `-∞` (undirected edge) or at `0` (directed
//! edge, `l = -∞` for negative flow). An optional capacity ends the last
//! piece with a jump to `+∞`.
//!
//! The inverse is stored as one ordered list of segments in the cost
//! coordinate `v`: sloped segments invert an increasing piece, flat
//! segments come from jumps of `l` (the flow stays at the jump location
//! while `v` runs from the left to the right limit) and constant segments
//! come from zero-slope pieces (`v` is fixed while the flow runs through the
//! piece). Every segment also carries its flow range, so that the combined
//! coordinate `x + v` strictly increases along the list.

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::number::{int, ExtendedRational, NegInf, PosInf, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PiecewiseLinearCost {
    /// Piece start points; the first is `-∞` or `0`.
    pub breakpoints: Vec<ExtendedRational>,
    pub slopes: Vec<Rational>,
    pub offsets: Vec<Rational>,
    /// Flow at which the cost jumps to `+∞`.
    pub capacity: Option<Rational>,
}

/// Cost value with both one-sided limits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CostValue {
    pub value: ExtendedRational,
    pub left: ExtendedRational,
    pub right: ExtendedRational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SegmentKind {
    /// `x = c·v − d` with `c > 0`.
    Sloped { c: Rational, d: Rational },
    /// `x` fixed while `v` ranges over the segment.
    Flat { flow: Rational },
    /// `v` fixed while `x` ranges over the segment.
    Constant { value: Rational },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InverseSegment {
    pub sigma_lo: ExtendedRational,
    pub sigma_hi: ExtendedRational,
    pub tau_lo: ExtendedRational,
    pub tau_hi: ExtendedRational,
    pub kind: SegmentKind,
}

impl InverseSegment {
    /// Lower end in the combined coordinate `x + v`.
    pub fn s_lo(&self) -> ExtendedRational {
        self.tau_lo.add(&self.sigma_lo).expect("segment ends are consistent")
    }

    pub fn s_hi(&self) -> ExtendedRational {
        self.tau_hi.add(&self.sigma_hi).expect("segment ends are consistent")
    }

    /// Conductivity: `c` on sloped segments, `0` on flat ones, `+∞` on
    /// constant ones.
    pub fn conductivity(&self) -> ExtendedRational {
        match &self.kind {
            SegmentKind::Sloped { c, .. } => ExtendedRational::Finite(c.clone()),
            SegmentKind::Flat { .. } => ExtendedRational::zero(),
            SegmentKind::Constant { .. } => PosInf,
        }
    }

    pub fn is_sloped(&self) -> bool {
        matches!(self.kind, SegmentKind::Sloped { .. })
    }

    pub fn is_constant(&self) -> bool {
        matches!(self.kind, SegmentKind::Constant { .. })
    }

    pub fn is_flat(&self) -> bool {
        matches!(self.kind, SegmentKind::Flat { .. })
    }

    /// Flow on this segment at cost coordinate `v` (for constant segments the
    /// lower end of the flow range).
    pub fn flow_at(&self, v: &Rational) -> ExtendedRational {
        match &self.kind {
            SegmentKind::Sloped { c, d } => ExtendedRational::Finite(c * v - d),
            SegmentKind::Flat { flow } => ExtendedRational::Finite(flow.clone()),
            SegmentKind::Constant { .. } => self.tau_lo.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InverseCost {
    pub segments: Vec<InverseSegment>,
}

/// Closed range of flows; a single point except on constant segments.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlowRange {
    pub lo: ExtendedRational,
    pub hi: ExtendedRational,
}

impl PiecewiseLinearCost {
    /// A single affine piece `a x + b` on the whole line.
    pub fn affine(a: Rational, b: Rational) -> Self {
        PiecewiseLinearCost { breakpoints: vec![NegInf], slopes: vec![a], offsets: vec![b], capacity: None }
    }

    /// Undirected cost from interior breakpoints and per-piece `(a, b)`.
    pub fn undirected(breaks: &[Rational], pieces: &[(Rational, Rational)]) -> Self {
        let mut breakpoints = vec![NegInf];
        breakpoints.extend(breaks.iter().cloned().map(ExtendedRational::Finite));
        PiecewiseLinearCost {
            breakpoints,
            slopes: pieces.iter().map(|p| p.0.clone()).collect(),
            offsets: pieces.iter().map(|p| p.1.clone()).collect(),
            capacity: None,
        }
    }

    /// Directed cost (domain `x ≥ 0`) from interior breakpoints and pieces.
    pub fn directed(breaks: &[Rational], pieces: &[(Rational, Rational)], capacity: Option<Rational>) -> Self {
        let mut cost = Self::undirected(breaks, pieces);
        cost.breakpoints[0] = ExtendedRational::zero();
        cost.capacity = capacity;
        cost
    }

    pub fn is_directed(&self) -> bool {
        self.breakpoints.first() == Some(&ExtendedRational::zero())
    }

    pub fn piece_count(&self) -> usize {
        self.slopes.len()
    }

    pub fn has_zero_slope(&self) -> bool {
        self.slopes.iter().any(|a| a.is_zero())
    }

    /// End of piece `k`: the next breakpoint, the capacity, or `+∞`.
    fn piece_end(&self, k: usize) -> ExtendedRational {
        if k + 1 < self.breakpoints.len() {
            self.breakpoints[k + 1].clone()
        } else if let Some(cap) = &self.capacity {
            ExtendedRational::Finite(cap.clone())
        } else {
            PosInf
        }
    }

    fn piece_value(&self, k: usize, x: &Rational) -> Rational {
        &self.slopes[k] * x + &self.offsets[k]
    }

    fn piece_value_ext(&self, k: usize, x: &ExtendedRational) -> ExtendedRational {
        match x {
            ExtendedRational::Finite(x) => ExtendedRational::Finite(self.piece_value(k, x)),
            _ if self.slopes[k].is_zero() => ExtendedRational::Finite(self.offsets[k].clone()),
            inf => inf.clone(),
        }
    }

    /// Checks the structural invariants; `allow_constant` admits zero slopes.
    pub fn validate(&self, edge: &str, allow_constant: bool) -> Result<()> {
        let fail = |reason: String| Err(Error::Cost { edge: edge.to_string(), reason });
        let k = self.breakpoints.len();
        if k == 0 {
            return fail("no pieces".into());
        }
        if self.slopes.len() != k || self.offsets.len() != k {
            return fail(format!(
                "{} breakpoints but {} slopes and {} offsets",
                k,
                self.slopes.len(),
                self.offsets.len()
            ));
        }
        match &self.breakpoints[0] {
            NegInf => {}
            ExtendedRational::Finite(z) if z.is_zero() => {}
            other => return fail(format!("first breakpoint must be -inf or 0, got {other}")),
        }
        for i in 1..k {
            if !self.breakpoints[i].is_finite() {
                return fail("interior breakpoints must be finite".into());
            }
            if self.breakpoints[i] <= self.breakpoints[i - 1] {
                return fail("breakpoints are not strictly increasing".into());
            }
        }
        if let Some(cap) = &self.capacity {
            if ExtendedRational::Finite(cap.clone()) <= self.breakpoints[k - 1] || !cap.is_positive() {
                return fail("capacity must be positive and beyond the last breakpoint".into());
            }
        }
        for (i, a) in self.slopes.iter().enumerate() {
            if a.is_negative() {
                return fail(format!("piece {i} is decreasing"));
            }
            if a.is_zero() && !allow_constant {
                return fail(format!("piece {i} has zero slope and constant costs are disabled"));
            }
        }
        for i in 1..k {
            let tau = self.breakpoints[i].expect_finite();
            if self.piece_value(i - 1, tau) > self.piece_value(i, tau) {
                return fail(format!("cost jumps down at breakpoint {tau}"));
            }
        }
        // Sign condition: l ≥ 0 on positive flows, l ≤ 0 on negative flows.
        let at_zero = evaluate_cost(self, &Rational::zero());
        if at_zero.right < ExtendedRational::zero() {
            return fail("cost is negative for small positive flow".into());
        }
        if at_zero.left > ExtendedRational::zero() {
            return fail("cost is positive for small negative flow".into());
        }
        Ok(())
    }

    /// Scales slopes and offsets by `factor` (used when splitting an edge).
    pub fn scaled(&self, factor: &Rational) -> Self {
        PiecewiseLinearCost {
            breakpoints: self.breakpoints.clone(),
            slopes: self.slopes.iter().map(|a| a * factor).collect(),
            offsets: self.offsets.iter().map(|b| b * factor).collect(),
            capacity: self.capacity.clone(),
        }
    }
}

fn piece_index(cost: &PiecewiseLinearCost, x: &Rational) -> Option<usize> {
    let xe = ExtendedRational::Finite(x.clone());
    if xe < cost.breakpoints[0] {
        return None;
    }
    if let Some(cap) = &cost.capacity {
        if x >= cap {
            return None;
        }
    }
    Some(cost.breakpoints.iter().rposition(|b| *b <= xe).expect("x is above the first breakpoint"))
}

/// Cost at `x` together with its left and right limits.
///
/// Pieces are closed on the left, so the value equals the right limit. For a
/// directed edge the left limit at `0` is `-∞`; at the capacity the right
/// limit is `+∞`.
pub fn evaluate_cost(cost: &PiecewiseLinearCost, x: &Rational) -> CostValue {
    let xe = ExtendedRational::Finite(x.clone());
    let right = match piece_index(cost, x) {
        Some(k) => ExtendedRational::Finite(cost.piece_value(k, x)),
        None if xe < cost.breakpoints[0] => NegInf,
        None => PosInf,
    };
    let left = if xe <= cost.breakpoints[0] {
        if cost.breakpoints[0] == NegInf {
            right.clone()
        } else {
            NegInf
        }
    } else {
        let k = cost.breakpoints.iter().rposition(|b| *b < xe).expect("x is above the first breakpoint");
        if xe > cost.piece_end(k) {
            PosInf
        } else {
            ExtendedRational::Finite(cost.piece_value(k, x))
        }
    };
    CostValue { value: right.clone(), left, right }
}

/// Float evaluation used by the oracle: `(left limit, right limit)`.
pub fn evaluate_cost_f64(cost: &PiecewiseLinearCost, x: f64) -> (f64, f64) {
    let bp: Vec<f64> = cost.breakpoints.iter().map(|b| b.to_f64()).collect();
    let cap = cost.capacity.as_ref().map(crate::number::to_f64).unwrap_or(f64::INFINITY);
    let value = |k: usize| crate::number::to_f64(&cost.slopes[k]) * x + crate::number::to_f64(&cost.offsets[k]);
    let right = if x < bp[0] {
        f64::NEG_INFINITY
    } else if x >= cap {
        f64::INFINITY
    } else {
        value(bp.iter().rposition(|&b| b <= x).unwrap())
    };
    let left = if x <= bp[0] {
        if bp[0] == f64::NEG_INFINITY {
            right
        } else {
            f64::NEG_INFINITY
        }
    } else if x > cap {
        f64::INFINITY
    } else {
        value(bp.iter().rposition(|&b| b < x).unwrap())
    };
    (left, right)
}

/// Builds the segment list of `l⁻¹`.
pub fn invert_cost(cost: &PiecewiseLinearCost) -> Result<InverseCost> {
    cost.validate("?", true)?;
    let k = cost.piece_count();
    let mut segments = Vec::new();
    if cost.is_directed() {
        // Negative flow is impossible: a flat segment at zero flow.
        let top = cost.piece_value(0, &Rational::zero());
        segments.push(InverseSegment {
            sigma_lo: NegInf,
            sigma_hi: ExtendedRational::Finite(top),
            tau_lo: ExtendedRational::zero(),
            tau_hi: ExtendedRational::zero(),
            kind: SegmentKind::Flat { flow: Rational::zero() },
        });
    }
    for i in 0..k {
        let lo = cost.breakpoints[i].clone();
        let hi = cost.piece_end(i);
        if i > 0 {
            // Jump at the start of this piece.
            let tau = lo.expect_finite();
            let left = cost.piece_value(i - 1, tau);
            let right = cost.piece_value(i, tau);
            if left < right {
                segments.push(InverseSegment {
                    sigma_lo: ExtendedRational::Finite(left),
                    sigma_hi: ExtendedRational::Finite(right),
                    tau_lo: lo.clone(),
                    tau_hi: lo.clone(),
                    kind: SegmentKind::Flat { flow: tau.clone() },
                });
            }
        }
        let a = &cost.slopes[i];
        let b = &cost.offsets[i];
        let sigma_lo = cost.piece_value_ext(i, &lo);
        let sigma_hi = cost.piece_value_ext(i, &hi);
        let kind = if a.is_zero() {
            SegmentKind::Constant { value: b.clone() }
        } else {
            SegmentKind::Sloped { c: a.recip(), d: b / a }
        };
        segments.push(InverseSegment { sigma_lo, sigma_hi, tau_lo: lo, tau_hi: hi.clone(), kind });
    }
    if let Some(cap) = &cost.capacity {
        let left = cost.piece_value(k - 1, cap);
        segments.push(InverseSegment {
            sigma_lo: ExtendedRational::Finite(left),
            sigma_hi: PosInf,
            tau_lo: ExtendedRational::Finite(cap.clone()),
            tau_hi: ExtendedRational::Finite(cap.clone()),
            kind: SegmentKind::Flat { flow: cap.clone() },
        });
    }
    Ok(InverseCost { segments })
}

impl InverseCost {
    /// Index of the segment whose closed `x + v` range contains `s`,
    /// preferring the upper one at a shared end.
    pub fn segment_containing(&self, x: &Rational, v: &Rational) -> Option<usize> {
        let s = ExtendedRational::Finite(x + v);
        self.segments.iter().rposition(|seg| seg.s_lo() <= s && s <= seg.s_hi())
    }

    /// Breakpoints `σ` of the inverse in increasing order.
    pub fn sigma_breakpoints(&self) -> Vec<ExtendedRational> {
        self.segments[1..].iter().map(|s| s.sigma_lo.clone()).collect()
    }
}

/// The set of flows `x` with `l(x⁻) ≤ v ≤ l(x⁺)`.
pub fn evaluate_inverse(inv: &InverseCost, v: &Rational) -> FlowRange {
    let ve = ExtendedRational::Finite(v.clone());
    let mut lo: Option<ExtendedRational> = None;
    let mut hi: Option<ExtendedRational> = None;
    for seg in &inv.segments {
        if seg.sigma_lo <= ve && ve <= seg.sigma_hi {
            let (a, b) = match &seg.kind {
                SegmentKind::Constant { .. } => (seg.tau_lo.clone(), seg.tau_hi.clone()),
                _ => {
                    let f = seg.flow_at(v);
                    (f.clone(), f)
                }
            };
            if lo.as_ref().is_none_or(|l| a < *l) {
                lo = Some(a);
            }
            if hi.as_ref().is_none_or(|h| b > *h) {
                hi = Some(b);
            }
        }
    }
    FlowRange { lo: lo.expect("inverse covers the line"), hi: hi.expect("inverse covers the line") }
}

/// Restricts a cost to nonnegative flow with `l = -∞` below zero.
pub fn directify(cost: &PiecewiseLinearCost) -> Result<PiecewiseLinearCost> {
    if cost.is_directed() {
        return Ok(cost.clone());
    }
    let zero = ExtendedRational::zero();
    let first = cost.breakpoints.iter().rposition(|b| *b <= zero).expect("first breakpoint is -inf");
    let at_zero = cost.piece_value(first, &Rational::zero());
    if at_zero.is_negative() {
        return Err(Error::Cost { edge: "?".into(), reason: "negative cost at zero flow".into() });
    }
    let mut breakpoints = vec![zero];
    breakpoints.extend(cost.breakpoints[first + 1..].iter().cloned());
    Ok(PiecewiseLinearCost {
        breakpoints,
        slopes: cost.slopes[first..].to_vec(),
        offsets: cost.offsets[first..].to_vec(),
        capacity: cost.capacity.clone(),
    })
}

/// Integral `∫₀^x l` for the oracle's objective, in floats.
pub fn integral_f64(cost: &PiecewiseLinearCost, x: f64) -> f64 {
    let (from, to, sign) = if x >= 0.0 { (0.0, x, 1.0) } else { (x, 0.0, -1.0) };
    let mut total = 0.0;
    for k in 0..cost.piece_count() {
        let lo = cost.breakpoints[k].to_f64().max(from);
        let hi = cost.piece_end(k).to_f64().min(to);
        if hi > lo {
            let a = crate::number::to_f64(&cost.slopes[k]);
            let b = crate::number::to_f64(&cost.offsets[k]);
            total += 0.5 * a * (hi * hi - lo * lo) + b * (hi - lo);
        }
    }
    sign * total
}

/// Slopes of the pieces right above and right below `x` (`None` where the
/// flow cannot move).
pub fn one_sided_slopes(cost: &PiecewiseLinearCost, x: &Rational) -> (Option<Rational>, Option<Rational>) {
    let xe = ExtendedRational::Finite(x.clone());
    let up = piece_index(cost, x).map(|k| cost.slopes[k].clone());
    let down = if xe <= cost.breakpoints[0] {
        if cost.breakpoints[0] == NegInf {
            up.clone()
        } else {
            None
        }
    } else {
        let k = cost.breakpoints.iter().rposition(|b| *b < xe).unwrap();
        if xe > cost.piece_end(k) {
            None
        } else {
            Some(cost.slopes[k].clone())
        }
    };
    (up, down)
}

/// Identity cost `l(x) = x`.
pub fn identity() -> PiecewiseLinearCost {
    PiecewiseLinearCost::affine(int(1), int(0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::number::rat;

    fn ambiguous_e2() -> PiecewiseLinearCost {
        PiecewiseLinearCost::directed(&[int(1)], &[(int(1), int(0)), (int(1), int(2))], Some(int(2)))
    }

    fn fin(r: Rational) -> ExtendedRational {
        ExtendedRational::Finite(r)
    }

    fn point(inv: &InverseCost, v: Rational) -> ExtendedRational {
        let r = evaluate_inverse(inv, &v);
        assert_eq!(r.lo, r.hi);
        r.lo
    }

    #[test]
    fn inverse_of_directed_capacitated_edge() {
        let inv = invert_cost(&ambiguous_e2()).unwrap();
        assert_eq!(inv.segments.len(), 5);
        assert_eq!(point(&inv, int(-3)), fin(int(0)));
        assert_eq!(point(&inv, rat(1, 2)), fin(rat(1, 2)));
        assert_eq!(point(&inv, int(2)), fin(int(1)));
        assert_eq!(point(&inv, rat(7, 2)), fin(rat(3, 2)));
        assert_eq!(point(&inv, int(9)), fin(int(2)));
        assert_eq!(
            inv.sigma_breakpoints(),
            vec![fin(int(0)), fin(int(1)), fin(int(3)), fin(int(4))]
        );
        assert!(matches!(inv.segments[2].kind, SegmentKind::Flat { .. }));
    }

    #[test]
    fn inverse_of_identity() {
        let inv = invert_cost(&identity()).unwrap();
        assert_eq!(inv.segments.len(), 1);
        assert_eq!(inv.segments[0].kind, SegmentKind::Sloped { c: int(1), d: int(0) });
        assert_eq!(point(&inv, int(0)), fin(int(0)));
    }

    #[test]
    fn inverse_of_kinked_cost() {
        let l1 = PiecewiseLinearCost::undirected(&[int(1)], &[(int(1), int(0)), (int(2), int(-1))]);
        let inv = invert_cost(&l1).unwrap();
        assert_eq!(inv.segments.len(), 2);
        assert_eq!(inv.segments[0].sigma_hi, fin(int(1)));
        assert_eq!(inv.segments[1].kind, SegmentKind::Sloped { c: rat(1, 2), d: rat(-1, 2) });
        for v in [int(0), rat(1, 2), int(1), int(3)] {
            let x = point(&inv, v.clone());
            assert_eq!(evaluate_cost(&l1, x.expect_finite()).value, fin(v));
        }
    }

    #[test]
    fn cost_limits() {
        let l3 = PiecewiseLinearCost::undirected(&[int(2)], &[(int(2), int(0)), (int(1), int(2))]);
        let c = evaluate_cost(&l3, &int(2));
        assert_eq!((c.value, c.left, c.right), (fin(int(4)), fin(int(4)), fin(int(4))));
        let lex3 = PiecewiseLinearCost::undirected(&[int(2)], &[(int(1), int(0)), (int(12), int(-22))]);
        assert_eq!(evaluate_cost(&lex3, &int(2)).left, fin(int(2)));
        assert_eq!(evaluate_cost(&identity(), &int(0)).value, fin(int(0)));
        let e2 = ambiguous_e2();
        let at0 = evaluate_cost(&e2, &int(0));
        assert_eq!((at0.left, at0.right), (NegInf, fin(int(0))));
        let at1 = evaluate_cost(&e2, &int(1));
        assert_eq!((at1.left, at1.right), (fin(int(1)), fin(int(3))));
        let at2 = evaluate_cost(&e2, &int(2));
        assert_eq!((at2.left, at2.right), (fin(int(4)), PosInf));
    }

    #[test]
    fn directify_shifted_identity() {
        let directed = directify(&PiecewiseLinearCost::affine(int(1), int(1))).unwrap();
        assert!(directed.is_directed());
        let inv = invert_cost(&directed).unwrap();
        assert_eq!(inv.segments[0].sigma_hi, fin(int(1)));
        assert_eq!(point(&inv, int(-5)), fin(int(0)));
        assert_eq!(point(&inv, int(3)), fin(int(2)));
        let id = directify(&identity()).unwrap();
        let inv = invert_cost(&id).unwrap();
        assert_eq!(point(&inv, int(-1)), fin(int(0)));
        assert_eq!(point(&inv, int(2)), fin(int(2)));
        let kinked = PiecewiseLinearCost::undirected(&[int(-1), int(1)], &[(int(1), int(0)), (int(2), int(0)), (int(3), int(-1))]);
        let d = directify(&kinked).unwrap();
        assert_eq!(d.breakpoints, vec![fin(int(0)), fin(int(1))]);
        assert_eq!(d.slopes, vec![int(2), int(3)]);
        assert!(directify(&PiecewiseLinearCost::affine(int(1), int(-1))).is_err());
    }

    #[test]
    fn constant_piece_inverse_is_a_range() {
        let cost = PiecewiseLinearCost::directed(&[int(2)], &[(int(0), int(3)), (int(1), int(1))], None);
        assert!(cost.validate("e", false).is_err());
        cost.validate("e", true).unwrap();
        let inv = invert_cost(&cost).unwrap();
        let r = evaluate_inverse(&inv, &int(3));
        assert_eq!((r.lo, r.hi), (fin(int(0)), fin(int(2))));
        assert!(inv.segments[1].is_constant());
    }

    #[test]
    fn validation_rejects_bad_costs() {
        let decreasing = PiecewiseLinearCost::affine(int(-1), int(0));
        assert!(decreasing.validate("e", true).is_err());
        let unordered = PiecewiseLinearCost::undirected(&[int(2), int(1)], &vec![(int(1), int(0)); 3]);
        assert!(unordered.validate("e", false).is_err());
        let positive_below_zero = PiecewiseLinearCost::affine(int(1), int(1));
        assert!(positive_below_zero.validate("e", false).is_err());
        let jump_down = PiecewiseLinearCost::undirected(&[int(1)], &[(int(1), int(0)), (int(1), int(-1))]);
        assert!(jump_down.validate("e", false).is_err());
    }

    #[test]
    fn combined_coordinate_increases() {
        let inv = invert_cost(&ambiguous_e2()).unwrap();
        for w in inv.segments.windows(2) {
            assert_eq!(w[0].s_hi(), w[1].s_lo());
            assert_eq!(w[0].sigma_hi, w[1].sigma_lo);
        }
        for seg in &inv.segments {
            assert!(seg.s_lo() < seg.s_hi());
        }
    }

    #[test]
    fn float_evaluation_matches_exact() {
        let e2 = ambiguous_e2();
        assert_eq!(evaluate_cost_f64(&e2, 1.0), (1.0, 3.0));
        assert_eq!(evaluate_cost_f64(&e2, 0.0).0, f64::NEG_INFINITY);
        assert_eq!(evaluate_cost_f64(&e2, 2.0), (4.0, f64::INFINITY));
        assert!((integral_f64(&e2, 1.5) - (0.5 + 0.5 * (1.5f64 * 1.5 - 1.0) + 2.0 * 0.5)).abs() < 1e-12);
    }
}
