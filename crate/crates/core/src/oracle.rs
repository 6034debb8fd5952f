//! Fixed-demand cross-checks that share no code with the path follower.
//!
//! * [`verify_equilibrium`] decides exactly whether a flow is a user
//!   equilibrium by solving the difference constraints
//!   `l_e(x_e⁻) ≤ π_w − π_v ≤ l_e(x_e⁺)` with Bellman–Ford.
//! * [`equilibrium_at`] minimises the Beckmann potential over path flows
//!   with pairwise path swaps and an exact piecewise-linear line search, in
//!   floats, then tries to confirm the result in rationals.
//! * [`direction_qp`] computes the direction of the equilibrium from a
//!   given equilibrium flow by solving the quadratic program over one-sided
//!   slopes.

use num_traits::{Signed, Zero};

use crate::costs::{evaluate_cost, evaluate_cost_f64, invert_cost, one_sided_slopes, PiecewiseLinearCost, SegmentKind};
use crate::error::{Error, Result};
use crate::network::{excess_of, Network};
use crate::number::{to_f64, ExtendedRational, Rational};

/// Outcome of [`verify_equilibrium`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquilibriumCertificate {
    pub lambda: Rational,
    pub flow: Vec<Rational>,
    /// Potentials with `π_s = 0`; shortest distances from `s` where the
    /// constraints are consistent.
    pub potential: Vec<Rational>,
    /// Largest edgewise violation of the sandwich condition; zero exactly at
    /// an equilibrium.
    pub gap: Rational,
}

impl EquilibriumCertificate {
    pub fn is_equilibrium(&self) -> bool {
        self.gap.is_zero()
    }
}

/// Demand carried by `x`, or an error if `x` is not an s–t flow.
fn demand_of(net: &Network, x: &[Rational]) -> Result<Rational> {
    let y = excess_of(net, x)?;
    let lambda = y[net.sink()].clone();
    let ok = y[net.source()] == -lambda.clone()
        && y.iter().enumerate().all(|(v, yv)| v == net.source() || v == net.sink() || yv.is_zero());
    if !ok || lambda.is_negative() {
        return Err(Error::invariant("flow is not a nonnegative s-t flow"));
    }
    Ok(lambda)
}

type Arc = (usize, usize, Rational);

/// Difference-constraint arcs: `π_w − π_v ≤ l(x⁺)` and `π_v − π_w ≤ −l(x⁻)`.
fn sandwich_arcs(net: &Network, costs: &[PiecewiseLinearCost], x: &[Rational]) -> Result<Vec<Arc>> {
    let mut arcs = Vec::new();
    for (e, cost) in costs.iter().enumerate() {
        let (v, w) = net.endpoints(e);
        let val = evaluate_cost(cost, &x[e]);
        let below_domain = cost.is_directed() && x[e].is_negative();
        let above_domain = cost.capacity.as_ref().is_some_and(|cap| x[e] > *cap);
        if below_domain || above_domain {
            return Err(Error::invariant(format!("flow on edge {} is outside its cost domain", net.edge_label(e))));
        }
        if let ExtendedRational::Finite(r) = &val.right {
            arcs.push((v, w, r.clone()));
        }
        if let ExtendedRational::Finite(l) = &val.left {
            arcs.push((w, v, -l));
        }
    }
    Ok(arcs)
}

/// Shortest distances from `source`; vertices it cannot reach are placed
/// far enough above that every arc touching them is slack. `None` on a
/// negative cycle.
fn difference_potentials(n: usize, arcs: &[Arc], source: usize) -> Option<Vec<Rational>> {
    let relax = |dist: &mut Vec<Option<Rational>>| -> bool {
        for _ in 0..=n {
            let mut changed = false;
            for (a, b, w) in arcs {
                if let Some(da) = &dist[*a] {
                    let cand = da + w;
                    if dist[*b].as_ref().map_or(true, |db| cand < *db) {
                        dist[*b] = Some(cand);
                        changed = true;
                    }
                }
            }
            if !changed {
                return true;
            }
        }
        false
    };
    let mut dist: Vec<Option<Rational>> = vec![None; n];
    dist[source] = Some(Rational::zero());
    if !relax(&mut dist) {
        return None;
    }
    if dist.iter().any(Option::is_none) {
        let spread: Rational = arcs.iter().map(|(_, _, w)| w.abs()).sum();
        let top = dist.iter().flatten().max().cloned().unwrap_or_else(Rational::zero);
        let lift = top + Rational::from_integer(1.into()) + spread.clone() + spread;
        for d in dist.iter_mut().filter(|d| d.is_none()) {
            *d = Some(lift.clone());
        }
        if !relax(&mut dist) {
            return None;
        }
    }
    Some(dist.into_iter().map(|d| d.expect("every vertex labelled")).collect())
}

/// Largest violation of `l_e(x_e⁻) ≤ γ_eᵀπ ≤ l_e(x_e⁺)` over all edges.
pub fn sandwich_gap(net: &Network, costs: &[PiecewiseLinearCost], x: &[Rational], pi: &[Rational]) -> Rational {
    let mut gap = Rational::zero();
    for (e, cost) in costs.iter().enumerate() {
        let diff = net.potential_difference(e, pi);
        let val = evaluate_cost(cost, &x[e]);
        if let ExtendedRational::Finite(l) = &val.left {
            gap = gap.max(l - &diff);
        }
        if let ExtendedRational::Finite(r) = &val.right {
            gap = gap.max(&diff - r);
        }
    }
    gap
}

/// Exact user-equilibrium test for a flow.
///
/// When the constraints are inconsistent the reported potential is the
/// one reached after `n` Bellman–Ford rounds and the gap is its largest
/// violation, which is then positive.
pub fn verify_equilibrium(net: &Network, costs: &[PiecewiseLinearCost], x: &[Rational]) -> Result<EquilibriumCertificate> {
    if costs.len() != net.edge_count() {
        return Err(Error::Dimension { expected: net.edge_count(), got: costs.len() });
    }
    let lambda = demand_of(net, x)?;
    let arcs = sandwich_arcs(net, costs, x)?;
    let n = net.vertex_count();
    let potential = match difference_potentials(n, &arcs, net.source()) {
        Some(pi) => pi,
        None => {
            // Plain n-round relaxation from a virtual root.
            let mut pi = vec![Rational::zero(); n];
            for _ in 0..n {
                for (a, b, w) in &arcs {
                    let cand = &pi[*a] + w;
                    if cand < pi[*b] {
                        pi[*b] = cand;
                    }
                }
            }
            let base = pi[net.source()].clone();
            pi.iter().map(|p| p - &base).collect()
        }
    };
    let gap = sandwich_gap(net, costs, x, &potential);
    Ok(EquilibriumCertificate { lambda, flow: x.to_vec(), potential, gap })
}

/// Edges with nonzero flow.
pub fn support_set(x: &[Rational]) -> Vec<usize> {
    (0..x.len()).filter(|&e| !x[e].is_zero()).collect()
}

#[derive(Clone, Debug)]
pub struct OracleOptions {
    /// Stop once the cost spread of used paths is below this.
    pub tolerance: f64,
    pub max_iterations: usize,
    pub max_paths: usize,
    /// Try to confirm the float flow exactly on instances with at most
    /// this many edges.
    pub confirm_edges: usize,
}

impl Default for OracleOptions {
    fn default() -> Self {
        OracleOptions { tolerance: 1e-8, max_iterations: 200_000, max_paths: 50_000, confirm_edges: 12 }
    }
}

#[derive(Clone, Debug)]
pub struct OracleSolution {
    pub flow: Vec<f64>,
    /// Cost of the cheapest s–t path, `π_t − π_s` at equilibrium.
    pub path_cost: f64,
    /// Cost spread between the dearest used path and the cheapest path.
    pub gap: f64,
    pub iterations: usize,
    /// Exact equilibrium matching the float one, when confirmed.
    pub exact: Option<EquilibriumCertificate>,
}

/// A simple s–t path as `(edge, ±1)` steps.
type Path = Vec<(usize, i8)>;

/// All simple s–t paths; undirected edges may be used against their
/// orientation.
pub fn enumerate_paths(net: &Network, costs: &[PiecewiseLinearCost], limit: usize) -> Result<Vec<Path>> {
    let n = net.vertex_count();
    let mut adj: Vec<Vec<(usize, usize, i8)>> = vec![Vec::new(); n];
    for (e, cost) in costs.iter().enumerate() {
        let (v, w) = net.endpoints(e);
        adj[v].push((w, e, 1));
        if !cost.is_directed() {
            adj[w].push((v, e, -1));
        }
    }
    let mut out = Vec::new();
    let mut on_path = vec![false; n];
    let mut stack: Path = Vec::new();
    fn dfs(
        v: usize,
        t: usize,
        adj: &[Vec<(usize, usize, i8)>],
        on_path: &mut [bool],
        stack: &mut Path,
        out: &mut Vec<Path>,
        limit: usize,
    ) -> bool {
        if v == t {
            out.push(stack.clone());
            return out.len() <= limit;
        }
        on_path[v] = true;
        for &(w, e, dir) in &adj[v] {
            if !on_path[w] {
                stack.push((e, dir));
                let ok = dfs(w, t, adj, on_path, stack, out, limit);
                stack.pop();
                if !ok {
                    return false;
                }
            }
        }
        on_path[v] = false;
        true
    }
    if !dfs(net.source(), net.sink(), &adj, &mut on_path, &mut stack, &mut out, limit) {
        return Err(Error::Convergence(format!("more than {limit} s-t paths")));
    }
    if out.is_empty() {
        return Err(Error::Network("no s-t path".into()));
    }
    Ok(out)
}

/// Marginal cost of pushing (`adding`) or withdrawing flow along a path;
/// the two differ only at cost jumps.
fn path_cost(path: &Path, costs: &[PiecewiseLinearCost], x: &[f64], adding: bool) -> f64 {
    path.iter()
        .map(|&(e, dir)| {
            let (left, right) = evaluate_cost_f64(&costs[e], x[e]);
            match (dir > 0, adding) {
                (true, true) => right,
                (true, false) => left,
                (false, true) => -left,
                (false, false) => -right,
            }
        })
        .sum()
}

/// Minimiser of `θ ↦ Φ(x + θ d)` on `[0, hi]`; `Φ'` is piecewise linear
/// and nondecreasing.
fn line_search(costs: &[PiecewiseLinearCost], x: &[f64], d: &[f64], hi: f64) -> f64 {
    let mut hi = hi;
    let mut points = Vec::new();
    for (e, cost) in costs.iter().enumerate() {
        if d[e] == 0.0 {
            continue;
        }
        let mut taus: Vec<f64> = cost.breakpoints.iter().filter(|b| b.is_finite()).map(|b| b.to_f64()).collect();
        if let Some(cap) = &cost.capacity {
            let c = to_f64(cap);
            if d[e] > 0.0 {
                hi = hi.min(((c - x[e]) / d[e]).max(0.0));
            }
            taus.push(c);
        }
        for tau in taus {
            let theta = (tau - x[e]) / d[e];
            if theta > 0.0 && theta < hi {
                points.push(theta);
            }
        }
    }
    points.push(hi);
    points.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    // One-sided derivative just after (`right`) or before a point.
    let deriv = |theta: f64, right: bool| -> f64 {
        (0..costs.len())
            .filter(|&e| d[e] != 0.0)
            .map(|e| {
                let (l, r) = evaluate_cost_f64(&costs[e], x[e] + theta * d[e]);
                let forward = (d[e] > 0.0) == right;
                d[e] * if forward { r } else { l }
            })
            .sum()
    };
    let mut lo = 0.0;
    let mut dlo = deriv(0.0, true);
    if dlo >= 0.0 {
        return 0.0;
    }
    for &p in &points {
        let dp = deriv(p, false);
        if dp >= 0.0 {
            return lo + (p - lo) * (-dlo) / (dp - dlo);
        }
        let dp_after = deriv(p, true);
        if dp_after >= 0.0 || p >= hi {
            return p;
        }
        lo = p;
        dlo = dp_after;
    }
    hi
}

/// Equilibrium flow at demand `λ` by pairwise path swaps.
pub fn equilibrium_at(
    net: &Network,
    costs: &[PiecewiseLinearCost],
    lambda: &Rational,
    opts: &OracleOptions,
) -> Result<OracleSolution> {
    if lambda.is_negative() {
        return Err(Error::OutOfRange(lambda.to_string()));
    }
    let m = net.edge_count();
    let paths = enumerate_paths(net, costs, opts.max_paths)?;
    let lam = to_f64(lambda);
    let mut h = vec![0.0; paths.len()];
    let mut x = vec![0.0; m];
    let apply = |x: &mut Vec<f64>, path: &Path, amount: f64| {
        for &(e, dir) in path {
            x[e] += amount * f64::from(dir);
        }
    };
    let cheapest = |x: &[f64]| -> (usize, f64) {
        let mut best = (0, f64::INFINITY);
        for (i, p) in paths.iter().enumerate() {
            let c = path_cost(p, costs, x, true);
            if c < best.1 {
                best = (i, c);
            }
        }
        best
    };
    if lam > 0.0 {
        let (q, _) = cheapest(&x);
        // Start on the cheapest path, then fill any capacity overflow by the
        // path swaps below.
        h[q] = lam;
        apply(&mut x, &paths[q], lam);
    }
    let mut iterations = 0;
    let mut gap;
    let mut best_cost;
    loop {
        let (q, cq) = cheapest(&x);
        best_cost = cq;
        let mut worst = (usize::MAX, f64::NEG_INFINITY);
        for (i, p) in paths.iter().enumerate() {
            if h[i] > 0.0 {
                let c = path_cost(p, costs, &x, false);
                if c > worst.1 {
                    worst = (i, c);
                }
            }
        }
        gap = if worst.0 == usize::MAX { 0.0 } else { worst.1 - cq };
        if gap <= opts.tolerance || iterations >= opts.max_iterations {
            break;
        }
        iterations += 1;
        let p = worst.0;
        let mut d = vec![0.0; m];
        apply(&mut d, &paths[q], 1.0);
        apply(&mut d, &paths[p], -1.0);
        let theta = line_search(costs, &x, &d, h[p]);
        if theta <= 0.0 {
            return Err(Error::Convergence(format!("path swap stalled with gap {gap:e}")));
        }
        let theta = theta.min(h[p]);
        h[p] -= theta;
        h[q] += theta;
        if h[p] < 1e-300 {
            h[p] = 0.0;
        }
        for e in 0..m {
            x[e] += theta * d[e];
        }
    }
    if gap > opts.tolerance {
        return Err(Error::Convergence(format!("path-swap gap {gap:e} after {iterations} iterations")));
    }
    let exact = if m <= opts.confirm_edges { confirm(net, costs, lambda, &x) } else { None };
    Ok(OracleSolution { flow: x, path_cost: best_cost, gap, iterations, exact })
}

/// Exact solution of `A z = b` with free variables set to zero; `None` if
/// inconsistent.
fn solve_linear(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>, cols: usize) -> Option<Vec<Rational>> {
    let rows = a.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, p);
        b.swap(r, p);
        let inv = a[r][c].recip();
        for j in c..cols {
            a[r][j] = &a[r][j] * &inv;
        }
        b[r] = &b[r] * &inv;
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in c..cols {
                    let sub = &f * &a[r][j];
                    a[i][j] -= sub;
                }
                let sub = &f * &b[r];
                b[i] -= sub;
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    if (r..rows).any(|i| !b[i].is_zero()) {
        return None;
    }
    let mut z = vec![Rational::zero(); cols];
    for (i, &c) in pivots.iter().enumerate() {
        z[c] = b[i].clone();
    }
    Some(z)
}

/// Guesses the inverse-cost segment of every edge from the float flow and
/// solves for an exact equilibrium on those segments.
fn confirm(net: &Network, costs: &[PiecewiseLinearCost], lambda: &Rational, x: &[f64]) -> Option<EquilibriumCertificate> {
    const NEAR: f64 = 1e-6;
    let n = net.vertex_count();
    let m = net.edge_count();
    let inverses: Vec<_> = costs.iter().map(|c| invert_cost(c).ok()).collect::<Option<Vec<_>>>()?;
    let mut options: Vec<Vec<usize>> = Vec::with_capacity(m);
    for e in 0..m {
        let cands: Vec<usize> = inverses[e]
            .segments
            .iter()
            .enumerate()
            .filter(|(_, s)| s.tau_lo.to_f64() - NEAR <= x[e] && x[e] <= s.tau_hi.to_f64() + NEAR)
            .map(|(k, _)| k)
            .collect();
        if cands.is_empty() {
            return None;
        }
        options.push(cands);
    }
    let combos: usize = options.iter().map(Vec::len).product();
    if combos > 4096 {
        return None;
    }
    let constant: Vec<usize> = (0..m).collect();
    for idx in 0..combos {
        let mut k = idx;
        let choice: Vec<usize> = options
            .iter()
            .map(|o| {
                let c = o[k % o.len()];
                k /= o.len();
                c
            })
            .collect();
        // Unknowns: π_1..π_{n-1}, then the flows of constant-segment edges.
        let consts: Vec<usize> =
            constant.iter().copied().filter(|&e| inverses[e].segments[choice[e]].is_constant()).collect();
        let cols = n - 1 + consts.len();
        let mut a = vec![vec![Rational::zero(); cols]; n - 1 + consts.len()];
        let mut b = vec![Rational::zero(); n - 1 + consts.len()];
        b[net.sink() - 1] = lambda.clone();
        for e in 0..m {
            let (v, w) = net.endpoints(e);
            // Row contribution of x_e: −1 at the tail, +1 at the head.
            let mut add = |row_vertex: usize, sign: i64, coeffs: &[(usize, Rational)], constant_term: &Rational| {
                if row_vertex == 0 {
                    return;
                }
                let s = Rational::from_integer(sign.into());
                for (col, c) in coeffs {
                    a[row_vertex - 1][*col] += &s * c;
                }
                b[row_vertex - 1] -= &s * constant_term;
            };
            let seg = &inverses[e].segments[choice[e]];
            let (coeffs, c0): (Vec<(usize, Rational)>, Rational) = match &seg.kind {
                SegmentKind::Sloped { c, d } => {
                    let mut co = Vec::new();
                    if w != 0 {
                        co.push((w - 1, c.clone()));
                    }
                    if v != 0 {
                        co.push((v - 1, -c.clone()));
                    }
                    (co, -d.clone())
                }
                SegmentKind::Flat { flow } => (Vec::new(), flow.clone()),
                SegmentKind::Constant { .. } => {
                    let col = n - 1 + consts.iter().position(|&f| f == e).expect("listed");
                    (vec![(col, Rational::from_integer(1.into()))], Rational::zero())
                }
            };
            add(v, -1, &coeffs, &c0);
            add(w, 1, &coeffs, &c0);
        }
        for (i, &e) in consts.iter().enumerate() {
            let (v, w) = net.endpoints(e);
            let SegmentKind::Constant { value } = &inverses[e].segments[choice[e]].kind else { unreachable!() };
            let row = n - 1 + i;
            if w != 0 {
                a[row][w - 1] += Rational::from_integer(1.into());
            }
            if v != 0 {
                a[row][v - 1] -= Rational::from_integer(1.into());
            }
            b[row] = value.clone();
        }
        let Some(z) = solve_linear(a, b, cols) else { continue };
        let mut pi = vec![Rational::zero(); n];
        pi[1..].clone_from_slice(&z[..n - 1]);
        let flow: Vec<Rational> = (0..m)
            .map(|e| {
                let seg = &inverses[e].segments[choice[e]];
                match &seg.kind {
                    SegmentKind::Sloped { c, d } => c * net.potential_difference(e, &pi) - d,
                    SegmentKind::Flat { flow } => flow.clone(),
                    SegmentKind::Constant { .. } => z[n - 1 + consts.iter().position(|&f| f == e).expect("listed")].clone(),
                }
            })
            .collect();
        if let Ok(cert) = verify_equilibrium(net, costs, &flow) {
            if cert.is_equilibrium() && cert.lambda == *lambda {
                return Some(cert);
            }
        }
    }
    None
}

/// Solution of the direction program.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QpDirection {
    pub dx: Vec<Rational>,
    /// Multipliers of the conservation constraints, grounded at `s`.
    pub dpi: Vec<Rational>,
}

/// Reciprocal one-sided slopes `(c⁺, c⁻)` at an equilibrium; zero where
/// the flow cannot move in that direction.
fn one_sided_conductances(
    net: &Network,
    costs: &[PiecewiseLinearCost],
    x: &[Rational],
    pi: &[Rational],
) -> Result<Vec<(Rational, Rational)>> {
    let mut out = Vec::with_capacity(costs.len());
    for (e, cost) in costs.iter().enumerate() {
        let diff = ExtendedRational::Finite(net.potential_difference(e, pi));
        let val = evaluate_cost(cost, &x[e]);
        let (up, down) = one_sided_slopes(cost, &x[e]);
        let side = |slope: Option<Rational>, tight: bool| -> Result<Rational> {
            match slope {
                Some(a) if tight => {
                    if a.is_zero() {
                        Err(Error::Unknown(format!("zero slope on edge {} in the direction program", net.edge_label(e))))
                    } else {
                        Ok(a.recip())
                    }
                }
                _ => Ok(Rational::zero()),
            }
        };
        out.push((side(up, diff == val.right)?, side(down, diff == val.left)?));
    }
    Ok(out)
}

/// Direction of the equilibrium curve just above the demand of `x_eq`.
///
/// Minimises `½ Σ a⁺ (z⁺)² + a⁻ (z⁻)²` over unit s–t flows `z`, where a side
/// is closed when the cost cannot be reached from the equilibrium
/// potential. The dual is solved by a damped semismooth Newton method in
/// floats; the sign pattern it finds is then solved exactly and refined by
/// an exact active-set loop until it is self-consistent.
pub fn direction_qp(net: &Network, costs: &[PiecewiseLinearCost], x_eq: &[Rational]) -> Result<QpDirection> {
    let cert = verify_equilibrium(net, costs, x_eq)?;
    if !cert.is_equilibrium() {
        return Err(Error::invariant("direction program needs an equilibrium flow"));
    }
    let cond = one_sided_conductances(net, costs, x_eq, &cert.potential)?;
    let m = net.edge_count();
    let p_float = newton_dual(net, &cond);
    let mut pattern: Vec<i8> = (0..m)
        .map(|e| {
            let u = net.potential_difference_f64(e, &p_float);
            if u > 1e-9 {
                1
            } else if u < -1e-9 {
                -1
            } else {
                0
            }
        })
        .collect();
    let mut seen = std::collections::HashSet::new();
    for _ in 0..4 * m + 8 {
        if !seen.insert(pattern.clone()) {
            break;
        }
        let c: Vec<Rational> = (0..m)
            .map(|e| match pattern[e] {
                1 => cond[e].0.clone(),
                -1 => cond[e].1.clone(),
                _ => Rational::zero(),
            })
            .collect();
        let Some(p) = grounded_solve(net, &c) else {
            // Sign pattern disconnects the sink; open every near-zero edge.
            for e in 0..m {
                if pattern[e] == 0 && (!cond[e].0.is_zero() || !cond[e].1.is_zero()) {
                    pattern[e] = if !cond[e].0.is_zero() { 1 } else { -1 };
                }
            }
            continue;
        };
        let dx: Vec<Rational> = (0..m)
            .map(|e| {
                let u = net.potential_difference(e, &p);
                if u.is_positive() {
                    &cond[e].0 * &u
                } else {
                    &cond[e].1 * &u
                }
            })
            .collect();
        let y = excess_of(net, &dx)?;
        let unit = y[net.sink()] == Rational::from_integer(1.into())
            && y.iter().enumerate().all(|(v, yv)| v == net.sink() || v == net.source() || yv.is_zero());
        if unit {
            return Ok(QpDirection { dx, dpi: p });
        }
        pattern = (0..m)
            .map(|e| {
                let u = net.potential_difference(e, &p);
                if u.is_positive() {
                    1
                } else if u.is_negative() {
                    -1
                } else {
                    pattern[e]
                }
            })
            .collect();
    }
    Err(Error::Convergence("direction program active set did not settle".into()))
}

/// Potentials for conductances `c` with `π_s = 0` and unit s–t demand,
/// restricted to the part of the graph connected to `s`. `None` if the
/// sink is not connected.
fn grounded_solve(net: &Network, c: &[Rational]) -> Option<Vec<Rational>> {
    let n = net.vertex_count();
    let mut comp: Vec<usize> = (0..n).collect();
    fn root(comp: &mut [usize], v: usize) -> usize {
        let mut r = v;
        while comp[r] != r {
            r = comp[r];
        }
        comp[v] = r;
        r
    }
    for (e, ce) in c.iter().enumerate() {
        if ce.is_positive() {
            let (v, w) = net.endpoints(e);
            let (a, b) = (root(&mut comp, v), root(&mut comp, w));
            comp[a.max(b)] = a.min(b);
        }
    }
    let s_root = root(&mut comp, net.source());
    if root(&mut comp, net.sink()) != s_root {
        return None;
    }
    let members: Vec<usize> = (1..n).filter(|&v| root(&mut comp, v) == s_root).collect();
    let pos = |v: usize| members.iter().position(|&u| u == v);
    let k = members.len();
    let mut a = vec![vec![Rational::zero(); k]; k];
    for (e, ce) in c.iter().enumerate() {
        if ce.is_zero() {
            continue;
        }
        let (v, w) = net.endpoints(e);
        let (pv, pw) = (pos(v), pos(w));
        if let Some(i) = pv {
            a[i][i] += ce;
        }
        if let Some(j) = pw {
            a[j][j] += ce;
        }
        if let (Some(i), Some(j)) = (pv, pw) {
            a[i][j] -= ce;
            a[j][i] -= ce;
        }
    }
    let mut b = vec![Rational::zero(); k];
    b[pos(net.sink()).expect("sink in component")] = Rational::from_integer(1.into());
    let z = solve_linear(a, b, k)?;
    let mut p = vec![Rational::zero(); n];
    for (i, &v) in members.iter().enumerate() {
        p[v] = z[i].clone();
    }
    Some(p)
}

/// Damped semismooth Newton on the concave dual
/// `max pᵀΔy − Σ ½ (c⁺ max(γᵀp,0)² + c⁻ min(γᵀp,0)²)` with `p_s = 0`.
fn newton_dual(net: &Network, cond: &[(Rational, Rational)]) -> Vec<f64> {
    let n = net.vertex_count();
    let m = net.edge_count();
    let cp: Vec<f64> = cond.iter().map(|c| to_f64(&c.0)).collect();
    let cm: Vec<f64> = cond.iter().map(|c| to_f64(&c.1)).collect();
    let dual = |p: &[f64]| -> f64 {
        let mut val = p[net.sink()] - p[net.source()];
        for e in 0..m {
            let u = net.potential_difference_f64(e, p);
            val -= 0.5 * if u > 0.0 { cp[e] * u * u } else { cm[e] * u * u };
        }
        val
    };
    let mut p = vec![0.0; n];
    for _ in 0..100 {
        let mut grad = vec![0.0; n];
        grad[net.sink()] += 1.0;
        grad[net.source()] -= 1.0;
        let mut hess = vec![vec![0.0; n]; n];
        for e in 0..m {
            let (v, w) = net.endpoints(e);
            let u = net.potential_difference_f64(e, &p);
            let c = if u > 0.0 || (u == 0.0 && cp[e] > 0.0) { cp[e] } else { cm[e] };
            let flow = c * u;
            grad[w] -= flow;
            grad[v] += flow;
            hess[v][v] += c;
            hess[w][w] += c;
            hess[v][w] -= c;
            hess[w][v] -= c;
        }
        let norm: f64 = grad.iter().skip(1).map(|g| g * g).sum::<f64>().sqrt();
        if norm < 1e-13 {
            break;
        }
        // Newton step on the non-source coordinates, regularised.
        let k = n - 1;
        let mut a: Vec<Vec<f64>> = (0..k).map(|i| (0..k).map(|j| hess[i + 1][j + 1]).collect()).collect();
        let mut b: Vec<f64> = (0..k).map(|i| grad[i + 1]).collect();
        for (i, row) in a.iter_mut().enumerate() {
            row[i] += 1e-10;
        }
        for c in 0..k {
            let piv = (c..k).max_by(|&i, &j| a[i][c].abs().partial_cmp(&a[j][c].abs()).expect("finite")).expect("rows");
            a.swap(c, piv);
            b.swap(c, piv);
            for i in c + 1..k {
                let f = a[i][c] / a[c][c];
                for j in c..k {
                    a[i][j] -= f * a[c][j];
                }
                b[i] -= f * b[c];
            }
        }
        let mut step = vec![0.0; k];
        for i in (0..k).rev() {
            let s: f64 = (i + 1..k).map(|j| a[i][j] * step[j]).sum();
            step[i] = (b[i] - s) / a[i][i];
        }
        let base = dual(&p);
        let mut t = 1.0;
        loop {
            let trial: Vec<f64> = (0..n).map(|v| if v == 0 { 0.0 } else { p[v] + t * step[v - 1] }).collect();
            if dual(&trial) >= base || t < 1e-12 {
                p = trial;
                break;
            }
            t *= 0.5;
        }
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::paper_example;
    use crate::number::{int, rat};

    fn example5() -> (Network, Vec<PiecewiseLinearCost>) {
        paper_example("ex_simple_undirected").unwrap().build().unwrap()
    }

    #[test]
    fn verifies_example5_breakpoint() {
        let (net, costs) = example5();
        let cert = verify_equilibrium(&net, &costs, &[int(1), int(1), int(1)]).unwrap();
        assert!(cert.is_equilibrium());
        assert_eq!(cert.lambda, int(2));
        assert_eq!(cert.potential, vec![int(0), int(1), int(2)]);
        let bad = verify_equilibrium(&net, &costs, &[int(2), int(2), int(0)]).unwrap();
        assert!(bad.gap.is_positive());
        let zero = verify_equilibrium(&net, &costs, &[int(0), int(0), int(0)]).unwrap();
        assert!(zero.is_equilibrium());
        assert!(verify_equilibrium(&net, &costs, &[int(1), int(0), int(0)]).is_err());
    }

    #[test]
    fn path_swap_matches_example5() {
        let (net, costs) = example5();
        let sol = equilibrium_at(&net, &costs, &int(5), &OracleOptions::default()).unwrap();
        for (got, want) in sol.flow.iter().zip([2.0, 2.0, 3.0]) {
            assert!((got - want).abs() < 1e-8, "{got} vs {want}");
        }
        assert_eq!(sol.exact.unwrap().flow, vec![int(2), int(2), int(3)]);
        let zero = equilibrium_at(&net, &costs, &int(0), &OracleOptions::default()).unwrap();
        assert!(zero.flow.iter().all(|x| *x == 0.0));
    }

    #[test]
    fn direction_program_example5() {
        let (net, costs) = example5();
        let d = direction_qp(&net, &costs, &[int(1), int(1), int(1)]).unwrap();
        assert_eq!(d.dx, vec![rat(2, 5), rat(2, 5), rat(3, 5)]);
        assert_eq!(d.dpi, vec![int(0), rat(4, 5), rat(6, 5)]);
    }

    #[test]
    fn supports() {
        assert_eq!(support_set(&[int(1), int(1), int(0)]), vec![0, 1]);
        assert_eq!(support_set(&[int(-1), int(0)]), vec![0]);
    }
}
