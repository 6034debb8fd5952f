//! Graph model and incidence algebra.
//!
//! Vertices are renumbered so that the source is `0` and the sink is `n - 1`;
//! the original labels are kept for I/O. Parallel edges are split at a dummy
//! vertex so that no two edges join the same unordered pair.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::number::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Network {
    n: usize,
    edges: Vec<(usize, usize)>,
    vertex_labels: Vec<String>,
    edge_labels: Vec<String>,
    edge_origin: Vec<usize>,
    split: Vec<bool>,
}

impl Network {
    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn source(&self) -> usize {
        0
    }

    pub fn sink(&self) -> usize {
        self.n - 1
    }

    /// `(tail, head)` of an internal edge.
    pub fn endpoints(&self, e: usize) -> (usize, usize) {
        self.edges[e]
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn vertex_label(&self, v: usize) -> &str {
        &self.vertex_labels[v]
    }

    pub fn vertex_labels(&self) -> &[String] {
        &self.vertex_labels
    }

    pub fn edge_label(&self, e: usize) -> &str {
        &self.edge_labels[e]
    }

    pub fn edge_labels(&self) -> &[String] {
        &self.edge_labels
    }

    /// Index of the input edge an internal edge was built from.
    pub fn edge_origin(&self, e: usize) -> usize {
        self.edge_origin[e]
    }

    /// True for both halves of a split parallel edge.
    pub fn is_split(&self, e: usize) -> bool {
        self.split[e]
    }

    pub fn vertex_index(&self, label: &str) -> Option<usize> {
        self.vertex_labels.iter().position(|l| l == label)
    }

    pub fn edge_index(&self, label: &str) -> Option<usize> {
        self.edge_labels.iter().position(|l| l == label)
    }

    /// `γ_eᵀ π = π_head − π_tail`.
    pub fn potential_difference(&self, e: usize, pi: &[Rational]) -> Rational {
        let (v, w) = self.edges[e];
        &pi[w] - &pi[v]
    }

    /// Same as [`Network::potential_difference`] for floats.
    pub fn potential_difference_f64(&self, e: usize, pi: &[f64]) -> f64 {
        let (v, w) = self.edges[e];
        pi[w] - pi[v]
    }
}

/// Builds a network from 0-based endpoints, with generated labels `v0..`
/// and `e0..`.
pub fn build_network(
    vertex_count: usize,
    edge_list: &[(usize, usize)],
    source: usize,
    sink: usize,
) -> Result<Network> {
    let vertices: Vec<String> = (0..vertex_count).map(|v| format!("v{v}")).collect();
    let edges: Vec<(String, usize, usize)> = edge_list
        .iter()
        .enumerate()
        .map(|(i, &(a, b))| (format!("e{i}"), a, b))
        .collect();
    build_labeled(&vertices, &edges, source, sink)
}

/// Builds a network from labelled vertices and edges given by input vertex
/// positions.
pub fn build_labeled(
    vertex_labels: &[String],
    edge_list: &[(String, usize, usize)],
    source: usize,
    sink: usize,
) -> Result<Network> {
    let count = vertex_labels.len();
    if count < 2 {
        return Err(Error::Network("at least two vertices are required".into()));
    }
    if source >= count || sink >= count {
        return Err(Error::Network("source or sink out of range".into()));
    }
    if source == sink {
        return Err(Error::Network("source and sink coincide".into()));
    }
    for (i, label) in vertex_labels.iter().enumerate() {
        if vertex_labels[..i].contains(label) {
            return Err(Error::Network(format!("duplicate vertex label {label:?}")));
        }
    }
    for (i, (label, a, b)) in edge_list.iter().enumerate() {
        if *a >= count || *b >= count {
            return Err(Error::Network(format!("edge {label} has an endpoint out of range")));
        }
        if a == b {
            return Err(Error::Network(format!("edge {label} is a self-loop")));
        }
        if edge_list[..i].iter().any(|(l, _, _)| l == label) {
            return Err(Error::Network(format!("duplicate edge id {label:?}")));
        }
    }

    // Source first, sink last, everything else in input order. The sink
    // gets a placeholder index until the number of dummy vertices is known.
    const SINK: usize = usize::MAX;
    let mut order: Vec<usize> = vec![source];
    order.extend((0..count).filter(|&v| v != source && v != sink));
    let mut position = vec![SINK; count];
    for (i, &v) in order.iter().enumerate() {
        position[v] = i;
    }

    let mut labels: Vec<String> = order.iter().map(|&v| vertex_labels[v].clone()).collect();
    let mut edges = Vec::new();
    let mut edge_labels = Vec::new();
    let mut edge_origin = Vec::new();
    let mut split = Vec::new();
    let mut seen: Vec<(usize, usize)> = Vec::new();
    for (i, (label, a, b)) in edge_list.iter().enumerate() {
        let (u, w) = (position[*a], position[*b]);
        let key = (u.min(w), u.max(w));
        if seen.contains(&key) {
            let d = labels.len();
            let mut name = format!("{label}~mid");
            while labels.contains(&name) || vertex_labels.contains(&name) {
                name.push('\'');
            }
            labels.push(name);
            edges.push((u, d));
            edges.push((d, w));
            edge_labels.push(format!("{label}#1"));
            edge_labels.push(format!("{label}#2"));
            edge_origin.extend([i, i]);
            split.extend([true, true]);
        } else {
            seen.push(key);
            edges.push((u, w));
            edge_labels.push(label.clone());
            edge_origin.push(i);
            split.push(false);
        }
    }
    labels.push(vertex_labels[sink].clone());
    let n = labels.len();
    for (u, w) in edges.iter_mut() {
        if *u == SINK {
            *u = n - 1;
        }
        if *w == SINK {
            *w = n - 1;
        }
    }

    let net = Network { n, edges, vertex_labels: labels, edge_labels, edge_origin, split };
    if !weakly_connected(&net) {
        return Err(Error::Network("graph is disconnected".into()));
    }
    Ok(net)
}

fn weakly_connected(net: &Network) -> bool {
    let mut seen = vec![false; net.n];
    let mut stack = vec![0usize];
    seen[0] = true;
    while let Some(v) = stack.pop() {
        for &(a, b) in &net.edges {
            for (x, y) in [(a, b), (b, a)] {
                if x == v && !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
    }
    seen.into_iter().all(|s| s)
}

/// The incidence column `γ_e`: `-1` at the tail, `+1` at the head.
pub fn incidence_column(net: &Network, e: usize) -> Result<Vec<i32>> {
    if e >= net.edge_count() {
        return Err(Error::Network(format!("edge index {e} out of range")));
    }
    let mut col = vec![0; net.n];
    let (v, w) = net.edges[e];
    col[v] = -1;
    col[w] = 1;
    Ok(col)
}

/// Net inflow `y = Γx` at every vertex.
pub fn excess_of(net: &Network, flow: &[Rational]) -> Result<Vec<Rational>> {
    if flow.len() != net.edge_count() {
        return Err(Error::Dimension { expected: net.edge_count(), got: flow.len() });
    }
    let mut y = vec![Rational::zero(); net.n];
    for (e, x) in flow.iter().enumerate() {
        let (v, w) = net.edges[e];
        y[v] -= x;
        y[w] += x;
    }
    Ok(y)
}

/// `Δy = (-1, 0, …, 0, 1)`: unit demand from source to sink.
pub fn unit_demand(net: &Network) -> Vec<Rational> {
    let mut y = vec![Rational::zero(); net.n];
    y[0] = Rational::from_integer((-1).into());
    y[net.n - 1] = Rational::from_integer(1.into());
    y
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::number::int;

    fn fig1() -> Network {
        // s = 0, v = 1, t = 2 with e1 = (s,v), e2 = (v,t), e3 = (s,t).
        build_network(3, &[(0, 1), (1, 2), (0, 2)], 0, 2).unwrap()
    }

    #[test]
    fn incidence_columns() {
        let net = fig1();
        assert_eq!(incidence_column(&net, 0).unwrap(), vec![-1, 1, 0]);
        assert_eq!(incidence_column(&net, 2).unwrap(), vec![-1, 0, 1]);
        assert!(incidence_column(&net, 3).is_err());
        let single = build_network(2, &[(0, 1)], 0, 1).unwrap();
        assert_eq!(incidence_column(&single, 0).unwrap(), vec![-1, 1]);
    }

    #[test]
    fn excess_is_gamma_x() {
        let net = fig1();
        let y = excess_of(&net, &[int(1), int(1), int(1)]).unwrap();
        assert_eq!(y, vec![int(-2), int(0), int(2)]);
        assert_eq!(excess_of(&net, &vec![int(0); 3]).unwrap(), vec![int(0); 3]);
        assert!(excess_of(&net, &[int(1)]).is_err());
    }

    #[test]
    fn reorders_source_and_sink() {
        let net = build_network(3, &[(2, 1), (1, 0)], 2, 0).unwrap();
        assert_eq!(net.vertex_label(0), "v2");
        assert_eq!(net.vertex_label(2), "v0");
        assert_eq!(net.endpoints(0), (0, 1));
        assert_eq!(net.endpoints(1), (1, 2));
    }

    #[test]
    fn splits_parallel_edges() {
        let net = build_network(3, &[(0, 2), (0, 1), (2, 0)], 0, 2).unwrap();
        assert_eq!(net.vertex_count(), 4);
        assert_eq!(net.edge_count(), 4);
        assert_eq!(net.sink(), 3);
        assert_eq!(net.vertex_label(3), "v2");
        assert_eq!(net.endpoints(0), (0, 3));
        assert_eq!(net.endpoints(2), (3, 2));
        assert_eq!(net.endpoints(3), (2, 0));
        assert!(net.is_split(2) && net.is_split(3) && !net.is_split(0));
        assert_eq!(net.edge_origin(3), 2);
        for e in 0..net.edge_count() {
            let col = incidence_column(&net, e).unwrap();
            assert_eq!(col.iter().sum::<i32>(), 0);
            assert_eq!(col.iter().filter(|&&c| c == 1).count(), 1);
            assert_eq!(col.iter().filter(|&&c| c == -1).count(), 1);
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(build_network(1, &[], 0, 0).is_err());
        assert!(build_network(3, &[(0, 1)], 0, 2).is_err());
        assert!(build_network(2, &[(0, 0), (0, 1)], 0, 1).is_err());
        assert!(build_network(2, &[(0, 5)], 0, 1).is_err());
        assert!(build_network(2, &[(0, 1)], 0, 0).is_err());
    }
}
