//! Worked examples, the nested Braess family and a small random sampler.

use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::costs::{directify, PiecewiseLinearCost};
use crate::error::{Error, Result};
use crate::homotopy::{run, SolutionCurve, SolverOptions};
use crate::network::{build_labeled, Network};
use crate::number::{int, rat, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeSpec {
    pub id: String,
    pub tail: String,
    pub head: String,
    pub cost: PiecewiseLinearCost,
}

/// An instance as the user wrote it: labelled vertices, edges with their
/// costs, and mode flags.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InstanceBundle {
    pub name: String,
    /// Every edge is restricted to nonnegative flow.
    pub directed: bool,
    /// Zero-slope cost pieces are admitted.
    pub constant_costs: bool,
    pub vertices: Vec<String>,
    pub source: String,
    pub sink: String,
    pub edges: Vec<EdgeSpec>,
    pub note: String,
}

impl InstanceBundle {
    fn vertex(&self, label: &str) -> Result<usize> {
        self.vertices.iter().position(|v| v == label).ok_or_else(|| Error::Unknown(format!("vertex {label}")))
    }

    /// Internal network and per-edge costs. Both halves of a split parallel
    /// edge carry half the original cost.
    pub fn build(&self) -> Result<(Network, Vec<PiecewiseLinearCost>)> {
        let mut list = Vec::with_capacity(self.edges.len());
        for e in &self.edges {
            list.push((e.id.clone(), self.vertex(&e.tail)?, self.vertex(&e.head)?));
        }
        let net = build_labeled(&self.vertices, &list, self.vertex(&self.source)?, self.vertex(&self.sink)?)?;
        let half = rat(1, 2);
        let mut costs = Vec::with_capacity(net.edge_count());
        for e in 0..net.edge_count() {
            let spec = &self.edges[net.edge_origin(e)];
            spec.cost.validate(&spec.id, self.constant_costs)?;
            let mut cost = if self.directed {
                directify(&spec.cost).map_err(|_| Error::Cost {
                    edge: spec.id.clone(),
                    reason: "negative cost at zero flow".into(),
                })?
            } else {
                spec.cost.clone()
            };
            if net.is_split(e) {
                cost = cost.scaled(&half);
            }
            costs.push(cost);
        }
        Ok((net, costs))
    }

    pub fn options(&self) -> SolverOptions {
        SolverOptions { constant_costs: self.constant_costs, ..SolverOptions::default() }
    }

    pub fn solve(&self, opts: &SolverOptions) -> Result<(Network, Vec<PiecewiseLinearCost>, SolutionCurve)> {
        let (net, costs) = self.build()?;
        let opts = SolverOptions { constant_costs: self.constant_costs || opts.constant_costs, ..opts.clone() };
        let curve = run(&net, &costs, &opts)?;
        Ok((net, costs, curve))
    }
}

fn labels(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

fn edge(id: &str, tail: &str, head: &str, cost: PiecewiseLinearCost) -> EdgeSpec {
    EdgeSpec { id: id.into(), tail: tail.into(), head: head.into(), cost }
}

fn triangle(name: &str, note: &str, edges: Vec<EdgeSpec>, constant_costs: bool) -> InstanceBundle {
    InstanceBundle {
        name: name.into(),
        directed: false,
        constant_costs,
        vertices: labels(&["s", "v", "t"]),
        source: "s".into(),
        sink: "t".into(),
        edges,
        note: note.into(),
    }
}

/// Names accepted by [`paper_example`].
pub const EXAMPLE_NAMES: &[&str] =
    &["fig1_regions", "ex_simple_undirected", "ex_lexicographic", "ex_ambiguous", "fig_degenerate_region"];

/// A worked example by name. `fig_degenerate_region` takes its slope
/// parameter as a suffix, `fig_degenerate_region:2`; `inf` (the default)
/// makes the middle piece constant.
pub fn paper_example(name: &str) -> Result<InstanceBundle> {
    let u = |breaks: &[Rational], pieces: &[(i64, i64, i64)]| {
        let pieces: Vec<(Rational, Rational)> = pieces.iter().map(|&(a, b, q)| (int(a), rat(b, q))).collect();
        PiecewiseLinearCost::undirected(breaks, &pieces)
    };
    let (base, param) = name.split_once(':').unwrap_or((name, ""));
    match base {
        "fig1_regions" => Ok(triangle(
            name,
            "three-edge undirected graph with one breakpoint per edge; e3 joins v and t",
            vec![
                edge("e1", "s", "v", u(&[int(2)], &[(1, 0, 1), (4, -6, 1)])),
                edge(
                    "e2",
                    "s",
                    "t",
                    PiecewiseLinearCost::undirected(&[int(1)], &[(int(1), int(0)), (rat(1, 4), rat(3, 4))]),
                ),
                edge(
                    "e3",
                    "v",
                    "t",
                    PiecewiseLinearCost::undirected(&[int(1)], &[(int(1), int(0)), (rat(1, 2), rat(1, 2))]),
                ),
            ],
            false,
        )),
        "ex_simple_undirected" => Ok(triangle(
            name,
            "undirected continuous costs; four segments with breakpoints 0, 2, 11/3, 5",
            vec![
                edge("e1", "s", "v", u(&[int(1)], &[(1, 0, 1), (2, -1, 1)])),
                edge("e2", "v", "t", u(&[int(2)], &[(1, 0, 1), (2, -2, 1)])),
                edge("e3", "s", "t", u(&[int(2)], &[(2, 0, 1), (1, 2, 1)])),
            ],
            false,
        )),
        "ex_lexicographic" => Ok(triangle(
            name,
            "three breakpoints meet at the potential (0,1,2) reached at demand 3",
            vec![
                edge("e1", "s", "v", u(&[int(1)], &[(1, 0, 1), (5, -4, 1)])),
                edge("e2", "v", "t", u(&[int(1)], &[(1, 0, 1), (7, -6, 1)])),
                edge("e3", "s", "t", u(&[int(2)], &[(1, 0, 1), (12, -22, 1)])),
            ],
            false,
        )),
        "ex_ambiguous" => Ok(triangle(
            name,
            "e2 is directed with capacity 2 and e3 jumps at 3/2; the curve jumps at demand 5/2",
            vec![
                edge("e1", "s", "v", u(&[], &[(1, 0, 1)])),
                edge(
                    "e2",
                    "v",
                    "t",
                    PiecewiseLinearCost::directed(&[int(1)], &[(int(1), int(0)), (int(1), int(2))], Some(int(2))),
                ),
                edge("e3", "s", "t", u(&[rat(3, 2)], &[(2, 0, 1), (2, 2, 1)])),
            ],
            false,
        )),
        "fig_degenerate_region" => {
            let alpha = match param {
                "" | "inf" => None,
                p => Some(crate::number::parse_rational(p)?),
            };
            let middle = match &alpha {
                None => (Rational::zero(), Rational::one()),
                Some(a) => (a.recip(), (a - Rational::one()) / a),
            };
            let last = match &alpha {
                None => (Rational::one(), int(-2)),
                Some(a) => (Rational::one(), (int(2) - int(2) * a) / a),
            };
            let l3 = PiecewiseLinearCost::undirected(&[int(1), int(3)], &[(int(1), int(0)), middle, last]);
            Ok(triangle(
                name,
                "e3 has a middle piece of slope 1/alpha; constant for alpha = inf",
                vec![
                    edge("e1", "s", "v", u(&[], &[(1, 0, 1)])),
                    edge("e2", "s", "t", u(&[], &[(1, 0, 1)])),
                    edge("e3", "v", "t", l3),
                ],
                alpha.is_none(),
            ))
        }
        _ => Err(Error::Unknown(format!("example {name}"))),
    }
}

/// The `j`-th nested Braess network on `v0 … v_{2j+1}` (source `v0`, sink
/// `v_{2j+1}`), all edges directed.
///
/// The path edges `(v_i, v_{i+1})`, `i ≠ j`, cost `x`. The outer edges
/// `(v_i, v_{2j−i})` and `(v_{i+1}, v_{2j+1−i})` for `i < j` both have the
/// constant cost `10^{j−1−i}`, so that the subnetwork between `v_p` and
/// `v_{2j+1−p}` is again a nested Braess network of depth `j − p`. The inner
/// edge `(v_j, v_{j+1})` costs nothing. With `eps` set, every constant cost gets slope `eps` instead.
pub fn nested_braess(j: usize, eps: Option<Rational>) -> Result<InstanceBundle> {
    if j < 1 {
        return Err(Error::OutOfRange(format!("nested Braess index must be at least 1, got {j}")));
    }
    let v = |i: usize| format!("v{i}");
    let pow10 = |k: usize| Rational::from_integer(num_bigint::BigInt::from(10u32).pow(k as u32));
    let slope0 = eps.clone().unwrap_or_else(Rational::zero);
    let directed = |a: Rational, b: Rational| PiecewiseLinearCost::directed(&[], &[(a, b)], None);
    let mut edges = Vec::new();
    let mut k = 0;
    let mut push = |edges: &mut Vec<EdgeSpec>, tail: String, head: String, cost: PiecewiseLinearCost| {
        k += 1;
        edges.push(EdgeSpec { id: format!("e{k}"), tail, head, cost });
    };
    for i in 0..=2 * j {
        if i != j {
            push(&mut edges, v(i), v(i + 1), directed(Rational::one(), Rational::zero()));
        }
    }
    for i in 0..j {
        push(&mut edges, v(i), v(2 * j - i), directed(slope0.clone(), pow10(j - 1 - i)));
    }
    for i in 0..j {
        push(&mut edges, v(i + 1), v(2 * j + 1 - i), directed(slope0.clone(), pow10(j - 1 - i)));
    }
    push(&mut edges, v(j), v(j + 1), directed(slope0.clone(), Rational::zero()));
    Ok(InstanceBundle {
        name: match &eps {
            Some(e) => format!("braess_{j}_eps_{e}"),
            None => format!("braess_{j}"),
        },
        directed: true,
        constant_costs: eps.is_none(),
        vertices: (0..2 * j + 2).map(v).collect(),
        source: v(0),
        sink: v(2 * j + 1),
        edges,
        note: format!("nested Braess network of depth {j}"),
    })
}

/// Default slope of the otherwise constant edges in the Braess family.
pub fn braess_eps() -> Rational {
    rat(1, 1_000_000)
}

/// Knobs for [`random_instance`].
#[derive(Clone, Debug)]
pub struct SamplerConfig {
    pub max_vertices: usize,
    pub max_edges: usize,
    pub max_breakpoints: usize,
    /// Probability that an edge is directed.
    pub directed_share: f64,
    /// Allow upward jumps at breakpoints of directed edges.
    pub jumps: bool,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        SamplerConfig { max_vertices: 6, max_edges: 10, max_breakpoints: 3, directed_share: 0.5, jumps: false }
    }
}

fn small_positive(rng: &mut ChaCha8Rng) -> Rational {
    let choices = [rat(1, 2), int(1), int(1), int(2), int(3), rat(3, 2), int(4), rat(1, 3)];
    choices.choose(rng).expect("nonempty").clone()
}

/// Continuous (or, for directed edges with `jumps`, upper-jumping)
/// piecewise-linear cost with sorted random breakpoints.
fn random_cost(rng: &mut ChaCha8Rng, directed: bool, cfg: &SamplerConfig) -> PiecewiseLinearCost {
    let count = rng.gen_range(0..=cfg.max_breakpoints);
    let mut breaks: Vec<Rational> = Vec::new();
    while breaks.len() < count {
        let b = if directed {
            rat(rng.gen_range(1..=8), 2)
        } else {
            rat(rng.gen_range(-6..=8), 2)
        };
        if !breaks.contains(&b) && !(b.is_zero() && !directed) {
            breaks.push(b);
        }
    }
    breaks.sort();
    let slopes: Vec<Rational> = (0..=count).map(|_| small_positive(rng)).collect();
    // Offsets chosen for continuity with l(0) = b0 on the piece holding 0.
    let start = if directed { rat(rng.gen_range(0..=4), 2) } else { Rational::zero() };
    let zero_piece = breaks.iter().filter(|b| **b <= Rational::zero()).count();
    let mut offsets = vec![Rational::zero(); count + 1];
    offsets[zero_piece] = start;
    for k in zero_piece + 1..=count {
        let tau = &breaks[k - 1];
        let mut value = &slopes[k - 1] * tau + &offsets[k - 1];
        if directed && cfg.jumps && rng.gen_bool(0.3) {
            value += rat(rng.gen_range(1..=4), 2);
        }
        offsets[k] = value - &slopes[k] * tau;
    }
    for k in (0..zero_piece).rev() {
        let tau = &breaks[k];
        let value = &slopes[k + 1] * tau + &offsets[k + 1];
        offsets[k] = value - &slopes[k] * tau;
    }
    let pieces: Vec<(Rational, Rational)> = slopes.into_iter().zip(offsets).collect();
    if directed {
        PiecewiseLinearCost::directed(&breaks, &pieces, None)
    } else {
        PiecewiseLinearCost::undirected(&breaks, &pieces)
    }
}

/// A random connected instance in which the sink is reachable from the
/// source along edge orientations (so zero flow is not the only feasible
/// flow). Deterministic in `seed`.
pub fn random_instance(seed: u64, cfg: &SamplerConfig) -> InstanceBundle {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(2..=cfg.max_vertices.max(2));
    let vertices: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    // A random s-t path first, then a spanning tree over the rest.
    let mut inner: Vec<usize> = (1..n - 1).collect();
    inner.shuffle(&mut rng);
    let path_len = rng.gen_range(0..=inner.len());
    let mut path = vec![0];
    path.extend(&inner[..path_len]);
    path.push(n - 1);
    for w in path.windows(2) {
        pairs.push((w[0], w[1]));
    }
    for &v in &inner[path_len..] {
        let attached: Vec<usize> = (0..n).filter(|u| *u != v && pairs.iter().any(|&(a, b)| a == *u || b == *u)).collect();
        let u = *attached.choose(&mut rng).expect("path is nonempty");
        pairs.push(if rng.gen_bool(0.5) { (u, v) } else { (v, u) });
    }
    let max_edges = cfg.max_edges.max(pairs.len());
    let extra = rng.gen_range(0..=max_edges - pairs.len());
    for _ in 0..extra {
        let a = rng.gen_range(0..n);
        let b = rng.gen_range(0..n);
        if a != b {
            pairs.push((a, b));
        }
    }
    let edges = pairs
        .iter()
        .enumerate()
        .map(|(i, &(a, b))| {
            let directed = rng.gen_bool(cfg.directed_share);
            EdgeSpec {
                id: format!("e{}", i + 1),
                tail: vertices[a].clone(),
                head: vertices[b].clone(),
                cost: random_cost(&mut rng, directed, cfg),
            }
        })
        .collect();
    InstanceBundle {
        name: format!("random_{seed}"),
        directed: false,
        constant_costs: false,
        source: vertices[0].clone(),
        sink: vertices[n - 1].clone(),
        vertices,
        edges,
        note: format!("random instance, seed {seed}"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn braess_sizes() {
        for j in 1..=4 {
            let b = nested_braess(j, Some(braess_eps())).unwrap();
            assert_eq!(b.vertices.len(), 2 * j + 2);
            assert_eq!(b.edges.len(), 4 * j + 1);
            let (net, _) = b.build().unwrap();
            assert_eq!(net.edge_count(), 4 * j + 1);
        }
        assert!(nested_braess(0, None).is_err());
        let b3 = nested_braess(3, None).unwrap();
        assert!(b3.edges.iter().any(|e| e.cost.offsets[0] == int(100)));
    }

    #[test]
    fn examples_build() {
        for name in EXAMPLE_NAMES {
            let (net, costs) = paper_example(name).unwrap().build().unwrap();
            assert_eq!(net.edge_count(), 3);
            assert_eq!(costs.len(), 3);
        }
        assert!(paper_example("fig_degenerate_region:2").unwrap().build().is_ok());
        assert!(paper_example("nope").is_err());
        let amb = paper_example("ex_ambiguous").unwrap();
        assert_eq!(amb.edges[1].cost.capacity, Some(int(2)));
    }

    #[test]
    fn random_instances_are_valid() {
        for seed in 0..100 {
            let inst = random_instance(seed, &SamplerConfig { jumps: seed % 2 == 0, ..Default::default() });
            assert!(inst.vertices.len() <= 6);
            assert!(inst.edges.len() <= 10);
            inst.build().unwrap_or_else(|e| panic!("seed {seed}: {e}"));
        }
    }
}
