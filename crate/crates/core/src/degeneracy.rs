//! Lexicographic resolution of degenerate points.
//!
//! At a point where several boundaries meet, the curve is continued through
//! a perturbed problem: every boundary involved is shifted by a symbolic
//! infinitesimal, and the crossing order of the perturbed curve is read off
//! lexicographically. Each step of the walk moves into a neighbouring
//! ("virtual") region without moving the point, until no perturbed boundary
//! is ahead.
//!
//! Two perturbations are implemented. The potential rule shifts `π` itself
//! and is used when every edge involved is sloped on both sides. The flow
//! rule shifts each boundary edge's combined coordinate `s_e = x_e + γ_eᵀπ`
//! into the interior of its current segment and handles flat and constant
//! segments as well as boundary edges that are not moving.

use std::cmp::Ordering;
use std::collections::HashSet;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::homotopy::{Direction, End, HomotopyState};
use crate::linalg::{Matrix, RegionVector};
use crate::number::Rational;

/// Perturbation coefficients of one candidate; `Infinite` when the edge
/// does not move in the current region.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LexVector {
    Finite(Vec<Rational>),
    Infinite,
}

impl LexVector {
    /// `0 ⊲ m ⊲ ∞`.
    pub fn is_positive(&self) -> bool {
        match self {
            LexVector::Finite(v) => lex_sign(v) == Ordering::Greater,
            LexVector::Infinite => false,
        }
    }
}

/// Lexicographic order, most significant component last.
pub fn lex_compare(a: &[Rational], b: &[Rational]) -> Ordering {
    debug_assert_eq!(a.len(), b.len());
    for (x, y) in a.iter().zip(b).rev() {
        match x.cmp(y) {
            Ordering::Equal => continue,
            other => return other,
        }
    }
    Ordering::Equal
}

fn lex_sign(v: &[Rational]) -> Ordering {
    v.iter().rev().find(|x| !x.is_zero()).map_or(Ordering::Equal, |x| x.cmp(&Rational::zero()))
}

fn lex_cmp(a: &LexVector, b: &LexVector) -> Ordering {
    match (a, b) {
        (LexVector::Finite(x), LexVector::Finite(y)) => lex_compare(x, y),
        (LexVector::Finite(_), LexVector::Infinite) => Ordering::Less,
        (LexVector::Infinite, LexVector::Finite(_)) => Ordering::Greater,
        (LexVector::Infinite, LexVector::Infinite) => Ordering::Equal,
    }
}

/// Unique lexicographic minimum among the candidates (only lex-positive
/// ones when `positive_only`). Ties mean the perturbation failed to
/// separate two boundaries and are reported as an error.
pub fn select(candidates: &[(usize, LexVector)], positive_only: bool) -> Result<Option<usize>> {
    let pool: Vec<&(usize, LexVector)> = candidates
        .iter()
        .filter(|(_, m)| if positive_only { m.is_positive() } else { matches!(m, LexVector::Finite(_)) })
        .collect();
    let Some(best) = pool.iter().min_by(|a, b| lex_cmp(&a.1, &b.1)) else {
        return Ok(None);
    };
    if pool.iter().filter(|c| lex_cmp(&c.1, &best.1) == Ordering::Equal).count() > 1 {
        return Err(Error::invariant("lexicographic minimum is not unique"));
    }
    Ok(Some(best.0))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LexRule {
    Potential,
    Flow,
}

impl LexRule {
    pub fn name(self) -> &'static str {
        match self {
            LexRule::Potential => "potential",
            LexRule::Flow => "flow",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LexStep {
    /// Region the step starts from.
    pub region: RegionVector,
    pub direction: Vec<Rational>,
    pub candidates: Vec<(usize, LexVector)>,
    pub chosen: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegeneracyRecord {
    pub lambda: Rational,
    pub rule: LexRule,
    /// Edges whose boundaries are perturbed.
    pub edges: Vec<usize>,
    pub steps: Vec<LexStep>,
    pub final_region: RegionVector,
}

impl DegeneracyRecord {
    pub fn region_sequence(&self) -> Vec<RegionVector> {
        let mut out: Vec<RegionVector> = self.steps.iter().map(|s| s.region.clone()).collect();
        if out.last() != Some(&self.final_region) {
            out.push(self.final_region.clone());
        }
        out
    }
}

/// Potential direction of a region in which `s` and `t` are not actively
/// connected: the component of `t` is lifted by one, everything else stays.
pub fn jump_direction(components: &[usize], s: usize, t: usize) -> Result<Vec<Rational>> {
    if components[s] == components[t] {
        return Err(Error::invariant("jump requested while s and t are connected"));
    }
    Ok(components.iter().map(|&c| if c == components[t] { Rational::one() } else { Rational::zero() }).collect())
}

fn end_for_rate(rate: &Rational) -> End {
    if rate.is_positive() {
        End::Hi
    } else {
        End::Lo
    }
}

fn check_sign(state: &HomotopyState, e: usize, before: &Rational, after: &Rational) -> Result<()> {
    if (before.is_positive() && after.is_negative()) || (before.is_negative() && after.is_positive()) {
        return Err(Error::invariant(format!(
            "direction on edge {} flipped during a virtual crossing",
            state.network().edge_label(e)
        )));
    }
    Ok(())
}

/// `m_e = −(1/γ_eᵀΔπ) γ_eᵀ M` over the potential perturbation.
pub fn potential_m_vectors(state: &HomotopyState, edges: &[usize], dpi: &[Rational], m: &Matrix) -> Vec<(usize, LexVector)> {
    let net = state.network();
    edges
        .iter()
        .map(|&e| {
            let rate = net.potential_difference(e, dpi);
            if rate.is_zero() {
                return (e, LexVector::Infinite);
            }
            let (v, w) = net.endpoints(e);
            let scale = -rate.recip();
            let row: Vec<Rational> = (0..m.cols()).map(|j| (m.get(w, j) - m.get(v, j)) * &scale).collect();
            (e, LexVector::Finite(row))
        })
        .collect()
}

/// Resolves a degenerate point by perturbing the potential.
///
/// `dir` is the direction of the region the curve arrived in; all of
/// `estar` must be sloped on both sides of their boundary.
pub fn resolve_degenerate_potential(
    state: &mut HomotopyState,
    estar: &[usize],
    dir: &Direction,
) -> Result<DegeneracyRecord> {
    let n = state.network().vertex_count();
    let mut m = Matrix::identity(n);
    let mut dpi = dir.dpi.clone();
    let mut steps = Vec::new();
    let mut seen = HashSet::new();
    seen.insert(state.region());
    let mut first = true;
    loop {
        let candidates = potential_m_vectors(state, estar, &dpi, &m);
        let chosen = select(&candidates, !first)?;
        steps.push(LexStep { region: state.region(), direction: dpi.clone(), candidates, chosen });
        let Some(e) = chosen else { break };
        first = false;
        let net = state.network();
        let rate = net.potential_difference(e, &dpi);
        // M̃ = I − Δπ γ_eᵀ / (γ_eᵀΔπ), with the direction before the crossing.
        let (v, w) = net.endpoints(e);
        let mut tilde = Matrix::identity(n);
        for i in 0..n {
            let coef = &dpi[i] / &rate;
            if !coef.is_zero() {
                tilde.set(i, w, tilde.get(i, w) - &coef);
                tilde.set(i, v, tilde.get(i, v) + &coef);
            }
        }
        m = tilde.mul(&m);
        state.cross_boundary(e, end_for_rate(&rate))?;
        if !seen.insert(state.region()) {
            return Err(Error::invariant(format!("region {} revisited at a degenerate point", state.region().label())));
        }
        let next = state.direction()?;
        check_sign(state, e, &rate, &state.network().potential_difference(e, &next.dpi))?;
        dpi = next.dpi;
    }
    Ok(DegeneracyRecord {
        lambda: state.lambda.clone(),
        rule: LexRule::Potential,
        edges: estar.to_vec(),
        steps,
        final_region: state.region(),
    })
}

/// `m_e = −(1/r_e) u_eᵀ M` over the boundary-coordinate perturbation.
fn flow_m_vectors(tset: &[usize], rates: &[Rational], m: &Matrix) -> Vec<(usize, LexVector)> {
    tset.iter()
        .enumerate()
        .map(|(i, &e)| {
            let r = &rates[e];
            if r.is_zero() {
                return (e, LexVector::Infinite);
            }
            let scale = -r.recip();
            (e, LexVector::Finite(m.row(i).iter().map(|x| x * &scale).collect()))
        })
        .collect()
}

/// Resolves a degenerate point by shifting each boundary edge's coordinate
/// `s_e` into the interior of its current segment.
///
/// `tset` lists every edge sitting on a boundary. The walk only crosses
/// boundaries ahead of the perturbed point, so it works unchanged for flat,
/// constant and non-moving edges, and for regions whose direction is a jump.
pub fn resolve_degenerate_flow(state: &mut HomotopyState, tset: &[usize]) -> Result<DegeneracyRecord> {
    let k = tset.len();
    let mut m = Matrix::zeros(k, k);
    for (i, &e) in tset.iter().enumerate() {
        let sgn = match state.boundary_end(e) {
            Some(End::Lo) => Rational::one(),
            Some(End::Hi) => -Rational::one(),
            None => return Err(Error::invariant("perturbed edge is not on a boundary")),
        };
        m.set(i, i, sgn);
    }
    let mut steps = Vec::new();
    let mut seen = HashSet::new();
    seen.insert(state.region());
    loop {
        let dir = state.direction()?;
        let rates = state.rates(&dir);
        let candidates = flow_m_vectors(tset, &rates, &m);
        let chosen = select(&candidates, true)?;
        steps.push(LexStep { region: state.region(), direction: dir.dpi.clone(), candidates, chosen });
        let Some(e) = chosen else { break };
        let pos = tset.iter().position(|&f| f == e).expect("candidate from tset");
        let r = rates[e].clone();
        let end = state.boundary_end(e);
        if end != Some(end_for_rate(&r)) {
            return Err(Error::invariant(format!(
                "perturbed edge {} moves away from its boundary",
                state.network().edge_label(e)
            )));
        }
        // M̃ = I − r u_eᵀ / r_e restricted to the perturbed edges.
        let pivot_row: Vec<Rational> = m.row(pos).to_vec();
        let mut next = m.clone();
        for (i, &f) in tset.iter().enumerate() {
            let coef = &rates[f] / &r;
            if coef.is_zero() {
                continue;
            }
            for j in 0..k {
                next.set(i, j, m.get(i, j) - &coef * &pivot_row[j]);
            }
        }
        m = next;
        state.cross_boundary(e, end_for_rate(&r))?;
        if !seen.insert(state.region()) {
            return Err(Error::invariant(format!("region {} revisited at a degenerate point", state.region().label())));
        }
        let after = state.rates(&state.direction()?);
        check_sign(state, e, &r, &after[e])?;
    }
    Ok(DegeneracyRecord {
        lambda: state.lambda.clone(),
        rule: LexRule::Flow,
        edges: tset.to_vec(),
        steps,
        final_region: state.region(),
    })
}
