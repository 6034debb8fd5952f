//! Exact rational matrices, reduced Laplacians and their rank-one updates.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::costs::InverseCost;
use crate::error::{Error, Result};
use crate::network::Network;
use crate::number::{bit_length, ExtendedRational, Rational};

/// Dense row-major rational matrix.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Rational::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: Rational) {
        self.data[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let idx = i * other.cols + j;
                        out.data[idx] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(self.cols, v.len(), "dimension mismatch");
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    /// `vᵀ A`.
    pub fn vec_mul(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(self.rows, v.len(), "dimension mismatch");
        let mut out = vec![Rational::zero(); self.cols];
        for (i, vi) in v.iter().enumerate() {
            if vi.is_zero() {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                let a = self.get(i, j);
                if !a.is_zero() {
                    *o += vi * a;
                }
            }
        }
        out
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.rows)
    }

    /// Largest bit length over all numerators and denominators.
    pub fn max_bits(&self) -> u64 {
        self.data.iter().map(bit_length).max().unwrap_or(0)
    }

    pub fn to_f64_rows(&self) -> Vec<Vec<f64>> {
        (0..self.rows).map(|i| self.row(i).iter().map(crate::number::to_f64).collect()).collect()
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<Vec<String>> =
            (0..self.rows).map(|i| self.row(i).iter().map(crate::number::format_rational).collect()).collect();
        write!(f, "{rows:?}")
    }
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).filter(|(x, y)| !x.is_zero() && !y.is_zero()).fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

/// Per-edge segment index into the edge's inverse-cost segment list.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RegionVector(pub Vec<usize>);

impl RegionVector {
    /// 1-based rendering, `R(1,2,1)`.
    pub fn label(&self) -> String {
        let parts: Vec<String> = self.0.iter().map(|t| (t + 1).to_string()).collect();
        format!("R({})", parts.join(","))
    }
}

/// Inverse of a reduced Laplacian together with its growth statistics.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReducedLaplacianInverse {
    pub h: Matrix,
}

impl ReducedLaplacianInverse {
    pub fn max_bits(&self) -> u64 {
        self.h.max_bits()
    }
}

/// Conductivities `c_e` and offsets `d_e` of a region: `x_e = c_e γ_eᵀπ − d_e`
/// on sloped segments, `c_e = 0` and `d_e = −x_e` on flat ones, `c_e = +∞` on
/// constant ones (with `d_e = 0`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Conductances {
    pub c: Vec<ExtendedRational>,
    pub d: Vec<Rational>,
}

pub fn conductance_matrix(
    inverses: &[InverseCost],
    region: &RegionVector,
    allow_constant: bool,
) -> Result<Conductances> {
    if region.0.len() != inverses.len() {
        return Err(Error::Dimension { expected: inverses.len(), got: region.0.len() });
    }
    let mut c = Vec::with_capacity(inverses.len());
    let mut d = Vec::with_capacity(inverses.len());
    for (e, (inv, &t)) in inverses.iter().zip(&region.0).enumerate() {
        let seg = inv
            .segments
            .get(t)
            .ok_or_else(|| Error::invariant(format!("segment index {t} out of range on edge {e}")))?;
        match &seg.kind {
            crate::costs::SegmentKind::Sloped { c: ce, d: de } => {
                c.push(ExtendedRational::Finite(ce.clone()));
                d.push(de.clone());
            }
            crate::costs::SegmentKind::Flat { flow } => {
                c.push(ExtendedRational::zero());
                d.push(-flow);
            }
            crate::costs::SegmentKind::Constant { .. } => {
                if !allow_constant {
                    return Err(Error::invariant(format!("constant-cost segment on edge {e} while disabled")));
                }
                c.push(ExtendedRational::PosInf);
                d.push(Rational::zero());
            }
        }
    }
    Ok(Conductances { c, d })
}

/// `Γ C Γᵀ` with the source row and column removed.
pub fn reduced_laplacian(net: &Network, c: &[Rational]) -> Matrix {
    let n = net.vertex_count() - 1;
    let mut l = Matrix::zeros(n, n);
    for (e, &(v, w)) in net.edges().iter().enumerate() {
        let ce = &c[e];
        if ce.is_zero() {
            continue;
        }
        let idx = |u: usize| if u == 0 { None } else { Some(u - 1) };
        let (iv, iw) = (idx(v), idx(w));
        for (a, sa) in [(iv, 1i32), (iw, -1)] {
            for (b, sb) in [(iv, 1i32), (iw, -1)] {
                if let (Some(a), Some(b)) = (a, b) {
                    let cur = l.get(a, b).clone();
                    let term = if sa * sb > 0 { ce.clone() } else { -ce.clone() };
                    l.set(a, b, cur + term);
                }
            }
        }
    }
    l
}

/// `γ̂_e`: the incidence column without the source entry.
pub fn reduced_incidence(net: &Network, e: usize) -> Vec<Rational> {
    let mut g = vec![Rational::zero(); net.vertex_count() - 1];
    let (v, w) = net.endpoints(e);
    if v != 0 {
        g[v - 1] = -Rational::one();
    }
    if w != 0 {
        g[w - 1] = Rational::one();
    }
    g
}

/// Exact inverse by fraction-free (Bareiss) elimination.
///
/// Rows are first scaled to integers; elimination then stays in `BigInt`
/// until the final back substitution.
pub fn invert_spd(a: &Matrix) -> Result<ReducedLaplacianInverse> {
    if a.rows != a.cols {
        return Err(Error::Dimension { expected: a.rows, got: a.cols });
    }
    let n = a.rows;
    // Row scaling: A = D⁻¹ B with B integral, so A⁻¹ = B⁻¹ D.
    let mut scale = Vec::with_capacity(n);
    let mut m: Vec<Vec<BigInt>> = Vec::with_capacity(n);
    for i in 0..n {
        let lcm = a.row(i).iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let row: Vec<BigInt> = a
            .row(i)
            .iter()
            .map(|x| x.numer() * (&lcm / x.denom()))
            .chain((0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }))
            .collect();
        scale.push(lcm);
        m.push(row);
    }
    let width = 2 * n;
    let mut prev = BigInt::one();
    for k in 0..n {
        let pivot = (k..n).find(|&i| !m[i][k].is_zero()).ok_or(Error::Singular)?;
        m.swap(k, pivot);
        for i in k + 1..n {
            for j in k + 1..width {
                let value = (&m[k][k] * &m[i][j] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = value;
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    // Back substitution on the upper-triangular system.
    let mut inv = Matrix::zeros(n, n);
    for col in 0..n {
        let mut x = vec![Rational::zero(); n];
        for i in (0..n).rev() {
            let mut acc = Rational::from_integer(m[i][n + col].clone());
            for j in i + 1..n {
                if !m[i][j].is_zero() {
                    acc -= Rational::from_integer(m[i][j].clone()) * &x[j];
                }
            }
            x[i] = acc / Rational::from_integer(m[i][i].clone());
        }
        for i in 0..n {
            inv.set(i, col, x[i].clone());
        }
    }
    // Undo the row scaling: multiply column j by its scale factor.
    for j in 0..n {
        let s = Rational::from_integer(scale[j].clone());
        for i in 0..n {
            let v = inv.get(i, j) * &s;
            inv.set(i, j, v);
        }
    }
    Ok(ReducedLaplacianInverse { h: inv })
}

/// `(I − α/(1 + α wᵀHv) · H v wᵀ) H`, the inverse after adding `α v wᵀ`.
pub fn rank_one_update(h: &Matrix, v: &[Rational], w: &[Rational], alpha: &Rational) -> Result<Matrix> {
    if alpha.is_zero() {
        return Ok(h.clone());
    }
    let hv = h.mul_vec(v);
    let wh = h.vec_mul(w);
    let denom = Rational::one() + alpha * dot(w, &hv);
    if denom.is_zero() {
        return Err(Error::ZeroPivot);
    }
    let k = alpha / denom;
    Ok(subtract_outer(h, &hv, &wh, &k))
}

fn subtract_outer(h: &Matrix, u: &[Rational], w: &[Rational], k: &Rational) -> Matrix {
    let mut out = h.clone();
    for (i, ui) in u.iter().enumerate() {
        if ui.is_zero() {
            continue;
        }
        let kui = k * ui;
        for (j, wj) in w.iter().enumerate() {
            if !wj.is_zero() {
                let idx = i * out.cols + j;
                out.data[idx] -= &kui * wj;
            }
        }
    }
    out
}

/// Inverse after changing the conductivity of an edge with reduced
/// incidence `γ̂` by `Δc`.
pub fn sherman_morrison_update(h: &Matrix, gamma: &[Rational], delta_c: &Rational) -> Result<Matrix> {
    rank_one_update(h, gamma, gamma, delta_c)
}

/// The limit `α → ∞` of the rank-one update for a general pair `v, w`:
/// `(I − H w vᵀ / (vᵀ H w)) H`.
pub fn limit_operator(h: &Matrix, v: &[Rational], w: &[Rational]) -> Result<Matrix> {
    let hw = h.mul_vec(w);
    let denom = dot(v, &hw);
    if denom.is_zero() {
        return Err(Error::ZeroPivot);
    }
    let vh = h.vec_mul(v);
    Ok(subtract_outer(h, &hw, &vh, &denom.recip()))
}

/// The limit operator for an edge becoming a constant-cost (infinite
/// conductivity) edge. The result annihilates `γ̂` on both sides.
pub fn sherman_morrison_limit(h: &Matrix, gamma: &[Rational]) -> Result<Matrix> {
    limit_operator(h, gamma, gamma)
}

/// Connected components of the subgraph of edges marked active.
///
/// Returns a component label per vertex; labels are numbered in order of
/// their smallest vertex.
pub fn active_components(net: &Network, active: &[bool]) -> Vec<usize> {
    let n = net.vertex_count();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while parent[r] != r {
            r = parent[r];
        }
        let mut y = x;
        while parent[y] != r {
            let next = parent[y];
            parent[y] = r;
            y = next;
        }
        r
    }
    for (e, &(v, w)) in net.edges().iter().enumerate() {
        if active[e] {
            let (a, b) = (find(&mut parent, v), find(&mut parent, w));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut label = vec![usize::MAX; n];
    let mut next = 0;
    let mut out = vec![0; n];
    for v in 0..n {
        let r = find(&mut parent, v);
        if label[r] == usize::MAX {
            label[r] = next;
            next += 1;
        }
        out[v] = label[r];
    }
    out
}

/// Number of distinct labels returned by [`active_components`].
pub fn component_count(labels: &[usize]) -> usize {
    labels.iter().max().map_or(0, |m| m + 1)
}

/// Rank of a rational matrix (used by tests and diagnostics).
pub fn rank(a: &Matrix) -> usize {
    let mut m = a.to_rows();
    let (rows, cols) = (a.rows, a.cols);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = &m[i][c] / &m[r][c];
                for j in c..cols {
                    let v = &m[r][j] * &f;
                    m[i][j] -= v;
                }
            }
        }
        r += 1;
        if r == rows {
            break;
        }
    }
    r
}

/// True when every entry is nonnegative.
pub fn is_nonnegative(a: &Matrix) -> bool {
    a.data.iter().all(|x| !x.is_negative())
}
