//! The path-following solver.
//!
//! The curve starts at zero demand and moves through regions of the
//! potential space. Inside a region the potential and flow are affine in `λ`;
//! at a boundary one edge changes segment and the inverse of the reduced
//! Laplacian is patched with a rank-one update.
//!
//! Boundary distances are measured in the per-edge coordinate
//! `s_e = x_e + γ_eᵀπ`, which strictly increases along an edge's segment list
//! whatever the segment kind. This lets sloped, flat and constant segments
//! share one step-length rule.

use std::collections::HashSet;

use num_traits::{One, Signed, Zero};

use crate::costs::{invert_cost, InverseCost, InverseSegment, PiecewiseLinearCost, SegmentKind};
use crate::degeneracy::{self, DegeneracyRecord};
use crate::error::{Error, Result};
use crate::linalg::{
    active_components, invert_spd, reduced_incidence, reduced_laplacian, sherman_morrison_limit,
    sherman_morrison_update, Matrix, RegionVector,
};
use crate::network::{excess_of, unit_demand, Network};
use crate::number::{ExtendedRational, PosInf, Rational};

#[derive(Clone, Debug)]
pub struct SolverOptions {
    /// Stop the curve at this demand; `None` runs until no boundary is ahead.
    pub lambda_max: Option<Rational>,
    /// Total number of boundary crossings, virtual ones included.
    pub max_pivots: usize,
    /// Re-invert the Laplacian from scratch after this many updates.
    pub reinvert_every: usize,
    /// Admit zero-slope cost pieces.
    pub constant_costs: bool,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions { lambda_max: None, max_pivots: 100_000, reinvert_every: 64, constant_costs: false }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RecordKind {
    Segment,
    /// Zero-length move of the potential at fixed demand and flow.
    Jump,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveSegment {
    pub lambda_lo: Rational,
    pub lambda_hi: ExtendedRational,
    pub region: RegionVector,
    pub flow_offset: Vec<Rational>,
    pub flow_slope: Vec<Rational>,
    pub potential_offset: Vec<Rational>,
    /// Per unit of `λ` for segments; the full potential change for jumps.
    pub potential_slope: Vec<Rational>,
    pub kind: RecordKind,
    /// Reduced-Laplacian inverse used for the direction (segments only).
    pub inverse: Option<Matrix>,
}

impl CurveSegment {
    pub fn flow_at(&self, lambda: &Rational) -> Vec<Rational> {
        let d = lambda - &self.lambda_lo;
        self.flow_offset.iter().zip(&self.flow_slope).map(|(n, m)| n + m * &d).collect()
    }

    pub fn potential_at(&self, lambda: &Rational) -> Vec<Rational> {
        match self.kind {
            RecordKind::Jump => self.potential_offset.iter().zip(&self.potential_slope).map(|(a, b)| a + b).collect(),
            RecordKind::Segment => {
                let d = lambda - &self.lambda_lo;
                self.potential_offset.iter().zip(&self.potential_slope).map(|(p, q)| p + q * &d).collect()
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CurveStats {
    pub pivots: usize,
    pub degenerate_points: usize,
    pub jumps: usize,
    pub max_coeff_bits: u64,
    pub reinversions: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Termination {
    /// No boundary lies ahead; the last segment is unbounded.
    Unbounded,
    LambdaMax,
    /// The s–t cut is saturated: no larger demand is feasible.
    Saturated,
}

#[derive(Clone, Debug)]
pub struct SolutionCurve {
    pub segments: Vec<CurveSegment>,
    pub stats: CurveStats,
    pub degeneracies: Vec<DegeneracyRecord>,
    pub termination: Termination,
}

impl SolutionCurve {
    /// Distinct start demands of all records plus the final finite end.
    pub fn breakpoints(&self) -> Vec<Rational> {
        let mut out: Vec<Rational> = Vec::new();
        for seg in &self.segments {
            if out.last() != Some(&seg.lambda_lo) {
                out.push(seg.lambda_lo.clone());
            }
        }
        if let Some(ExtendedRational::Finite(hi)) = self.segments.last().map(|s| &s.lambda_hi) {
            if out.last() != Some(hi) {
                out.push(hi.clone());
            }
        }
        out
    }

    pub fn regular_segments(&self) -> impl Iterator<Item = &CurveSegment> {
        self.segments.iter().filter(|s| s.kind == RecordKind::Segment)
    }

    /// Largest demand covered, `+∞` for an unbounded curve.
    pub fn lambda_end(&self) -> ExtendedRational {
        self.segments.last().map_or(ExtendedRational::zero(), |s| s.lambda_hi.clone())
    }
}

/// Flow and potential on the curve at demand `λ`.
///
/// At a jump the state after the jump is returned.
pub fn sample(curve: &SolutionCurve, lambda: &Rational) -> Result<(Vec<Rational>, Vec<Rational>)> {
    if lambda.is_negative() {
        return Err(Error::OutOfRange(crate::number::format_rational(lambda)));
    }
    let le = ExtendedRational::Finite(lambda.clone());
    let regular: Vec<&CurveSegment> = curve.regular_segments().collect();
    let hit = regular
        .iter()
        .find(|s| s.lambda_lo <= *lambda && le < s.lambda_hi)
        .or_else(|| regular.iter().rev().find(|s| s.lambda_hi == le));
    match hit {
        Some(seg) => Ok((seg.flow_at(lambda), seg.potential_at(lambda))),
        None if lambda.is_zero() => {
            // A curve that saturates immediately has only jump records.
            let first = curve.segments.first().ok_or_else(|| Error::OutOfRange("0".into()))?;
            Ok((first.flow_offset.clone(), first.potential_offset.clone()))
        }
        None => Err(Error::OutOfRange(crate::number::format_rational(lambda))),
    }
}

/// Potential and flow directions of the current region.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Direction {
    pub dpi: Vec<Rational>,
    pub dx: Vec<Rational>,
    /// True when `s` and `t` are actively disconnected: the potential moves
    /// at fixed demand and flow.
    pub jump: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum End {
    Lo,
    Hi,
}

/// Solver state: position on the curve, region and maintained inverses.
#[derive(Clone, Debug)]
pub struct HomotopyState<'a> {
    net: &'a Network,
    inverses: Vec<InverseCost>,
    pub lambda: Rational,
    pub pi: Vec<Rational>,
    pub x: Vec<Rational>,
    t: Vec<usize>,
    /// Inverse of the reduced Laplacian with constant edges at unit
    /// conductance, restricted to the active component of `s`.
    base: Matrix,
    /// `base` with every constant edge taken to infinite conductance.
    h: Matrix,
    /// True when the active component of `s` spans all vertices.
    full: bool,
    pub pivots: usize,
    max_pivots: usize,
    reinvert_every: usize,
    since_refresh: usize,
    pub max_bits: u64,
    pub reinversions: usize,
}

fn base_conductance(seg: &InverseSegment) -> Rational {
    match &seg.kind {
        SegmentKind::Sloped { c, .. } => c.clone(),
        SegmentKind::Flat { .. } => Rational::zero(),
        SegmentKind::Constant { .. } => Rational::one(),
    }
}

fn sign(r: &Rational) -> i32 {
    if r.is_positive() {
        1
    } else if r.is_negative() {
        -1
    } else {
        0
    }
}

impl<'a> HomotopyState<'a> {
    /// State at zero demand with shortest-path potentials, each edge in the
    /// segment holding zero flow; degeneracy is not yet resolved.
    pub fn new(net: &'a Network, costs: &[PiecewiseLinearCost], opts: &SolverOptions) -> Result<Self> {
        if costs.len() != net.edge_count() {
            return Err(Error::Dimension { expected: net.edge_count(), got: costs.len() });
        }
        let mut inverses = Vec::with_capacity(costs.len());
        for (e, cost) in costs.iter().enumerate() {
            cost.validate(net.edge_label(e), opts.constant_costs)?;
            inverses.push(invert_cost(cost).map_err(|err| match err {
                Error::Cost { reason, .. } => Error::Cost { edge: net.edge_label(e).to_string(), reason },
                other => other,
            })?);
        }
        let pi = initial_potential(net, costs)?;
        let x = vec![Rational::zero(); net.edge_count()];
        let mut t = Vec::with_capacity(net.edge_count());
        for (e, inv) in inverses.iter().enumerate() {
            let v = net.potential_difference(e, &pi);
            t.push(inv.segment_containing(&Rational::zero(), &v).ok_or_else(|| {
                Error::invariant(format!("no segment of edge {} contains the start point", net.edge_label(e)))
            })?);
        }
        let k = net.vertex_count() - 1;
        let mut state = HomotopyState {
            net,
            inverses,
            lambda: Rational::zero(),
            pi,
            x,
            t,
            base: Matrix::zeros(k, k),
            h: Matrix::zeros(k, k),
            full: false,
            pivots: 0,
            max_pivots: opts.max_pivots,
            reinvert_every: opts.reinvert_every.max(1),
            since_refresh: 0,
            max_bits: 0,
            reinversions: 0,
        };
        state.refresh()?;
        state.check_consistency()?;
        Ok(state)
    }

    pub fn network(&self) -> &Network {
        self.net
    }

    pub fn inverses(&self) -> &[InverseCost] {
        &self.inverses
    }

    pub fn region(&self) -> RegionVector {
        RegionVector(self.t.clone())
    }

    pub fn segment(&self, e: usize) -> &InverseSegment {
        &self.inverses[e].segments[self.t[e]]
    }

    /// The maintained inverse (with constant edges contracted).
    pub fn inverse(&self) -> &Matrix {
        &self.h
    }

    pub fn is_sloped(&self, e: usize) -> bool {
        self.segment(e).is_sloped()
    }

    /// Segment index across the boundary at `end`, if any.
    pub fn neighbor(&self, e: usize, end: End) -> Option<usize> {
        match end {
            End::Lo => self.t[e].checked_sub(1),
            End::Hi => Some(self.t[e] + 1).filter(|&k| k < self.inverses[e].segments.len()),
        }
    }

    fn active(&self) -> Vec<bool> {
        (0..self.net.edge_count()).map(|e| !self.segment(e).is_flat()).collect()
    }

    /// Recomputes `base` and `h` from scratch.
    fn refresh(&mut self) -> Result<()> {
        self.reinversions += 1;
        self.since_refresh = 0;
        let n = self.net.vertex_count();
        let comp = active_components(self.net, &self.active());
        let members: Vec<usize> = (1..n).filter(|&v| comp[v] == comp[0]).collect();
        self.full = members.len() == n - 1;
        let cb: Vec<Rational> = (0..self.net.edge_count()).map(|e| base_conductance(self.segment(e))).collect();
        let lap = reduced_laplacian(self.net, &cb);
        let mut base = Matrix::zeros(n - 1, n - 1);
        if !members.is_empty() {
            let sub = Matrix::from_rows(
                members.iter().map(|&a| members.iter().map(|&b| lap.get(a - 1, b - 1).clone()).collect()).collect(),
            );
            let inv = invert_spd(&sub)?.h;
            for (i, &a) in members.iter().enumerate() {
                for (j, &b) in members.iter().enumerate() {
                    base.set(a - 1, b - 1, inv.get(i, j).clone());
                }
            }
        }
        let mut h = base.clone();
        for e in 0..self.net.edge_count() {
            if self.segment(e).is_constant() && comp[self.net.endpoints(e).0] == comp[0] {
                h = contract(&h, &reduced_incidence(self.net, e), self.net.edge_label(e))?;
            }
        }
        self.base = base;
        self.h = h;
        self.track_bits();
        Ok(())
    }

    fn track_bits(&mut self) {
        self.max_bits = self.max_bits.max(self.h.max_bits()).max(self.base.max_bits());
    }

    /// Direction of the curve in the current region.
    pub fn direction(&self) -> Result<Direction> {
        let net = self.net;
        let n = net.vertex_count();
        let m = net.edge_count();
        let comp = active_components(net, &self.active());
        let (s, t) = (net.source(), net.sink());
        if comp[s] != comp[t] {
            let dpi = degeneracy::jump_direction(&comp, s, t)?;
            return Ok(Direction { dpi, dx: vec![Rational::zero(); m], jump: true });
        }
        let mut dpi = vec![Rational::zero(); n];
        for v in 1..n {
            dpi[v] = self.h.get(v - 1, n - 2).clone();
        }
        let mut dx = Vec::with_capacity(m);
        for e in 0..m {
            let seg = self.segment(e);
            dx.push(match &seg.kind {
                SegmentKind::Sloped { c, .. } => c * net.potential_difference(e, &dpi),
                SegmentKind::Flat { .. } => Rational::zero(),
                SegmentKind::Constant { .. } => {
                    if comp[net.endpoints(e).0] == comp[s] {
                        self.constant_edge_flow(e, &comp)?
                    } else {
                        Rational::zero()
                    }
                }
            });
        }
        let y = excess_of(net, &dx)?;
        if y != unit_demand(net) {
            return Err(Error::invariant(format!("direction in {} is not a unit s-t flow", self.region().label())));
        }
        Ok(Direction { dpi, dx, jump: false })
    }

    /// Flow rate on a constant edge: the limit of `c γᵀΔπ` as its
    /// conductivity grows without bound, taken from the inverse in which
    /// every other constant edge is contracted.
    fn constant_edge_flow(&self, e: usize, comp: &[usize]) -> Result<Rational> {
        let mut h = self.base.clone();
        for f in 0..self.net.edge_count() {
            if f != e && self.segment(f).is_constant() && comp[self.net.endpoints(f).0] == comp[0] {
                h = contract(&h, &reduced_incidence(self.net, f), self.net.edge_label(f))?;
            }
        }
        let g = reduced_incidence(self.net, e);
        let hg = h.mul_vec(&g);
        let denom = crate::linalg::dot(&g, &hg);
        if denom.is_zero() {
            return Err(Error::invariant(format!(
                "constant-cost edges close a cycle through {}",
                self.net.edge_label(e)
            )));
        }
        // γ̂ᵀ H Δŷ with Δŷ the unit vector of t.
        Ok(&hg[self.net.vertex_count() - 2] / denom)
    }

    /// `s_e = x_e + γ_eᵀπ`.
    pub fn coordinate(&self, e: usize) -> Rational {
        &self.x[e] + self.net.potential_difference(e, &self.pi)
    }

    /// Rate of change of `s_e` along a direction.
    pub fn rates(&self, dir: &Direction) -> Vec<Rational> {
        (0..self.net.edge_count()).map(|e| &dir.dx[e] + self.net.potential_difference(e, &dir.dpi)).collect()
    }

    /// The end of its current segment an edge sits on, if any.
    pub fn boundary_end(&self, e: usize) -> Option<End> {
        let seg = self.segment(e);
        let s = ExtendedRational::Finite(self.coordinate(e));
        if s == seg.s_lo() {
            Some(End::Lo)
        } else if s == seg.s_hi() {
            Some(End::Hi)
        } else {
            None
        }
    }

    /// All edges sitting on a boundary of their segment.
    pub fn boundary_edges(&self) -> Vec<usize> {
        (0..self.net.edge_count()).filter(|&e| self.boundary_end(e).is_some()).collect()
    }

    /// Per-edge distance `ε(e)` to the next boundary along `dir`, the
    /// minimum and the set of edges attaining it.
    pub fn step_length(&self, dir: &Direction) -> (Vec<ExtendedRational>, ExtendedRational, Vec<usize>) {
        let rates = self.rates(dir);
        let eps: Vec<ExtendedRational> = (0..self.net.edge_count())
            .map(|e| {
                let seg = self.segment(e);
                let s = self.coordinate(e);
                let r = &rates[e];
                let target = if r.is_positive() {
                    seg.s_hi()
                } else if r.is_negative() {
                    seg.s_lo()
                } else {
                    return PosInf;
                };
                match target {
                    ExtendedRational::Finite(b) => ExtendedRational::Finite((b - s) / r),
                    _ => PosInf,
                }
            })
            .collect();
        let min = eps.iter().min().cloned().unwrap_or(PosInf);
        let estar = if min.is_finite() { (0..eps.len()).filter(|&e| eps[e] == min).collect() } else { Vec::new() };
        (eps, min, estar)
    }

    /// Moves along `dir` by `eps` (in units of the curve parameter).
    pub fn advance(&mut self, dir: &Direction, eps: &Rational) {
        for (p, d) in self.pi.iter_mut().zip(&dir.dpi) {
            *p += d * eps;
        }
        for (x, d) in self.x.iter_mut().zip(&dir.dx) {
            *x += d * eps;
        }
        if !dir.jump {
            self.lambda += eps;
        }
    }

    /// Moves edge `e` into the neighbouring segment and updates the
    /// inverses.
    pub fn cross_boundary(&mut self, e: usize, end: End) -> Result<()> {
        self.pivots += 1;
        if self.pivots > self.max_pivots {
            return Err(Error::Budget(self.max_pivots));
        }
        if self.boundary_end(e) != Some(end) {
            return Err(Error::invariant(format!(
                "edge {} is not on the boundary it is asked to cross",
                self.net.edge_label(e)
            )));
        }
        let next = self.neighbor(e, end).ok_or_else(|| {
            Error::invariant(format!("edge {} has no segment beyond its boundary", self.net.edge_label(e)))
        })?;
        let old = self.segment(e).clone();
        self.t[e] = next;
        let new = self.segment(e).clone();
        let delta = base_conductance(&new) - base_conductance(&old);
        if old.is_flat() && new.is_flat() {
            return Err(Error::invariant(format!(
                "edge {} crosses between two flat segments",
                self.net.edge_label(e)
            )));
        }
        self.since_refresh += 1;
        if !self.full || self.since_refresh >= self.reinvert_every {
            return self.refresh();
        }
        let g = reduced_incidence(self.net, e);
        match sherman_morrison_update(&self.base, &g, &delta) {
            Ok(b) => self.base = b,
            Err(Error::ZeroPivot) => return self.refresh(),
            Err(err) => return Err(err),
        }
        let h = if new.is_constant() {
            sherman_morrison_limit(&self.h, &g)
        } else if old.is_constant() {
            self.contract_all()
        } else {
            sherman_morrison_update(&self.h, &g, &delta)
        };
        match h {
            Ok(h) => {
                self.h = h;
                self.track_bits();
                Ok(())
            }
            Err(Error::ZeroPivot) => self.refresh(),
            Err(err) => Err(err),
        }
    }

    fn contract_all(&self) -> Result<Matrix> {
        let mut h = self.base.clone();
        for e in 0..self.net.edge_count() {
            if self.segment(e).is_constant() {
                h = sherman_morrison_limit(&h, &reduced_incidence(self.net, e))?;
            }
        }
        Ok(h)
    }

    /// Checks that `(x, π)` lies on the current segments.
    pub fn check_consistency(&self) -> Result<()> {
        for e in 0..self.net.edge_count() {
            let seg = self.segment(e);
            let v = self.net.potential_difference(e, &self.pi);
            let x = &self.x[e];
            let ok = match &seg.kind {
                SegmentKind::Sloped { c, d } => *x == c * &v - d,
                SegmentKind::Flat { flow } => x == flow,
                SegmentKind::Constant { value } => {
                    let xe = ExtendedRational::Finite(x.clone());
                    v == *value && seg.tau_lo <= xe && xe <= seg.tau_hi
                }
            };
            let s = ExtendedRational::Finite(x + &v);
            if !ok || s < seg.s_lo() || s > seg.s_hi() {
                return Err(Error::invariant(format!(
                    "edge {} left its segment {} at lambda {}",
                    self.net.edge_label(e),
                    self.t[e] + 1,
                    crate::number::format_rational(&self.lambda)
                )));
            }
        }
        Ok(())
    }
}

fn contract(h: &Matrix, g: &[Rational], label: &str) -> Result<Matrix> {
    sherman_morrison_limit(h, g).map_err(|err| match err {
        Error::ZeroPivot => Error::invariant(format!("constant-cost edges close a cycle through {label}")),
        other => other,
    })
}

/// Shortest-path potentials at zero flow: forward arcs cost `l(0⁺)`,
/// backward arcs `−l(0⁻)` (absent on directed edges). Vertices that cannot
/// be reached from `s` are lifted above every reachable potential, which
/// keeps their edges strictly inside the zero-flow segment.
pub fn initial_potential(net: &Network, costs: &[PiecewiseLinearCost]) -> Result<Vec<Rational>> {
    let n = net.vertex_count();
    let mut arcs: Vec<(usize, usize, Rational)> = Vec::new();
    for (e, cost) in costs.iter().enumerate() {
        let (v, w) = net.endpoints(e);
        let at0 = crate::costs::evaluate_cost(cost, &Rational::zero());
        if let ExtendedRational::Finite(r) = &at0.right {
            arcs.push((v, w, r.clone()));
        }
        if let ExtendedRational::Finite(l) = &at0.left {
            arcs.push((w, v, -l));
        }
    }
    let relax = |dist: &mut Vec<Option<Rational>>| -> Result<()> {
        for round in 0..=n {
            let mut changed = false;
            for (a, b, w) in &arcs {
                if let Some(da) = dist[*a].clone() {
                    let cand = da + w;
                    if dist[*b].as_ref().is_none_or(|db| cand < *db) {
                        dist[*b] = Some(cand);
                        changed = true;
                    }
                }
            }
            if !changed {
                return Ok(());
            }
            if round == n {
                break;
            }
        }
        Err(Error::invariant("negative cycle in zero-flow costs"))
    };
    let mut dist: Vec<Option<Rational>> = vec![None; n];
    dist[net.source()] = Some(Rational::zero());
    relax(&mut dist)?;
    if dist[net.sink()].is_none() {
        return Err(Error::Network("the sink cannot be reached from the source".into()));
    }
    if dist.iter().any(Option::is_none) {
        let top = dist.iter().flatten().max().cloned().unwrap_or_else(Rational::zero) + Rational::one();
        for d in dist.iter_mut() {
            if d.is_none() {
                *d = Some(top.clone());
            }
        }
        relax(&mut dist)?;
    }
    Ok(dist.into_iter().map(|d| d.expect("all vertices labelled")).collect())
}

/// Starting potential and region after resolving the zero-flow point.
pub fn initial_point(net: &Network, costs: &[PiecewiseLinearCost], opts: &SolverOptions) -> Result<(Vec<Rational>, RegionVector)> {
    let mut state = HomotopyState::new(net, costs, opts)?;
    let boundary = state.boundary_edges();
    if !boundary.is_empty() {
        degeneracy::resolve_degenerate_flow(&mut state, &boundary)?;
    }
    Ok((state.pi.clone(), state.region()))
}

/// Computes the whole solution curve.
pub fn run(net: &Network, costs: &[PiecewiseLinearCost], opts: &SolverOptions) -> Result<SolutionCurve> {
    if let Some(lm) = &opts.lambda_max {
        if !lm.is_positive() {
            return Err(Error::OutOfRange(format!("lambda_max must be positive, got {lm}")));
        }
    }
    let mut state = HomotopyState::new(net, costs, opts)?;
    let mut degeneracies = Vec::new();
    let mut stats = CurveStats::default();
    let start = state.boundary_edges();
    if !start.is_empty() {
        degeneracies.push(degeneracy::resolve_degenerate_flow(&mut state, &start)?);
    }
    let mut segments: Vec<CurveSegment> = Vec::new();
    let mut visited: HashSet<RegionVector> = HashSet::new();
    // Sign of the last crossed edge's rate, checked in the next region.
    let mut pending: Option<(usize, i32)> = None;
    let termination;
    loop {
        let dir = state.direction()?;
        let rates = state.rates(&dir);
        if let Some((e, sgn)) = pending.take() {
            if sign(&rates[e]) * sgn < 0 {
                return Err(Error::invariant(format!(
                    "direction on edge {} flipped when crossing its boundary",
                    net.edge_label(e)
                )));
            }
        }
        let (_, eps, estar) = state.step_length(&dir);
        if let ExtendedRational::Finite(e) = &eps {
            if !e.is_positive() {
                return Err(Error::invariant("zero step length outside a degenerate point"));
            }
        }
        let region = state.region();
        if !visited.insert(region.clone()) {
            return Err(Error::invariant(format!("region {} visited twice", region.label())));
        }
        if dir.jump {
            let ExtendedRational::Finite(step) = eps else {
                termination = Termination::Saturated;
                break;
            };
            stats.jumps += 1;
            segments.push(CurveSegment {
                lambda_lo: state.lambda.clone(),
                lambda_hi: ExtendedRational::Finite(state.lambda.clone()),
                region,
                flow_offset: state.x.clone(),
                flow_slope: vec![Rational::zero(); net.edge_count()],
                potential_offset: state.pi.clone(),
                potential_slope: dir.dpi.iter().map(|d| d * &step).collect(),
                kind: RecordKind::Jump,
                inverse: None,
            });
            let before = state.x.clone();
            state.advance(&dir, &step);
            if state.x != before {
                return Err(Error::invariant("flow changed during a jump"));
            }
        } else {
            let limit = opts.lambda_max.as_ref().map(|lm| lm - &state.lambda);
            let stop_at_max = match (&eps, &limit) {
                (_, None) => false,
                (ExtendedRational::Finite(e), Some(l)) => e >= l,
                (_, Some(_)) => true,
            };
            let step = if stop_at_max {
                ExtendedRational::Finite(limit.clone().expect("limit set"))
            } else {
                eps.clone()
            };
            segments.push(CurveSegment {
                lambda_lo: state.lambda.clone(),
                lambda_hi: step.add_finite(&state.lambda),
                region,
                flow_offset: state.x.clone(),
                flow_slope: dir.dx.clone(),
                potential_offset: state.pi.clone(),
                potential_slope: dir.dpi.clone(),
                kind: RecordKind::Segment,
                inverse: Some(state.h.clone()),
            });
            let ExtendedRational::Finite(step) = step else {
                termination = Termination::Unbounded;
                break;
            };
            state.advance(&dir, &step);
            if stop_at_max {
                state.check_consistency()?;
                termination = Termination::LambdaMax;
                break;
            }
        }
        state.check_consistency()?;
        let boundary = state.boundary_edges();
        if !estar.iter().all(|e| boundary.contains(e)) {
            return Err(Error::invariant("edge reached its boundary but is not on it"));
        }
        if boundary == estar && estar.len() == 1 {
            let e = estar[0];
            let end = if rates[e].is_positive() { End::Hi } else { End::Lo };
            state.cross_boundary(e, end)?;
            pending = Some((e, sign(&rates[e])));
        } else {
            stats.degenerate_points += 1;
            let all_sloped = boundary == estar
                && estar.iter().all(|&e| {
                    let end = if rates[e].is_positive() { End::Hi } else { End::Lo };
                    state.is_sloped(e)
                        && state
                            .neighbor(e, end)
                            .is_some_and(|k| state.inverses()[e].segments[k].is_sloped())
                });
            let record = if all_sloped {
                degeneracy::resolve_degenerate_potential(&mut state, &estar, &dir)?
            } else {
                degeneracy::resolve_degenerate_flow(&mut state, &boundary)?
            };
            degeneracies.push(record);
        }
    }
    stats.pivots = state.pivots;
    stats.max_coeff_bits = state.max_bits;
    stats.reinversions = state.reinversions;
    Ok(SolutionCurve { segments, stats, degeneracies, termination })
}
