//! Dense matrices for the small state spaces that occur here: boolean
//! reachability matrices stored as row bitsets, and row-major `f64` matrices.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Square 0/1 matrix with rows stored as `u64` bitsets.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BoolMatrix {
    size: usize,
    words: usize,
    bits: Vec<u64>,
}

impl BoolMatrix {
    pub fn zeros(size: usize) -> Self {
        let words = size.div_ceil(64).max(1);
        BoolMatrix { size, words, bits: vec![0; size * words] }
    }

    pub fn identity(size: usize) -> Self {
        let mut m = Self::zeros(size);
        for i in 0..size {
            m.set(i, i, true);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<u8>]) -> Result<Self> {
        let size = rows.len();
        let mut m = Self::zeros(size);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != size {
                return Err(Error::MalformedMatrix(alloc::format!(
                    "row {i} has {} entries, expected {size}",
                    row.len()
                )));
            }
            for (j, &v) in row.iter().enumerate() {
                match v {
                    0 => {}
                    1 => m.set(i, j, true),
                    other => {
                        return Err(Error::MalformedMatrix(alloc::format!(
                            "entry ({i},{j}) = {other} is not 0/1"
                        )))
                    }
                }
            }
        }
        Ok(m)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        self.bits[i * self.words + j / 64] >> (j % 64) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: bool) {
        let w = &mut self.bits[i * self.words + j / 64];
        if v {
            *w |= 1 << (j % 64);
        } else {
            *w &= !(1 << (j % 64));
        }
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.bits[i * self.words..(i + 1) * self.words]
    }

    /// Column indices of the set entries in row `i`.
    pub fn row_ones(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.row(i).iter().enumerate().flat_map(|(w, &bits)| BitIter { bits }.map(move |b| w * 64 + b))
    }

    /// Boolean product `sign(self * other)`.
    pub fn mul(&self, other: &BoolMatrix) -> BoolMatrix {
        assert_eq!(self.size, other.size);
        let mut out = BoolMatrix::zeros(self.size);
        for i in 0..self.size {
            let start = i * self.words;
            for k in self.row_ones(i) {
                let src = other.row(k);
                for (dst, s) in out.bits[start..start + self.words].iter_mut().zip(src) {
                    *dst |= s;
                }
            }
        }
        out
    }

    /// Union of the rows indexed by the set bits of `set`.
    pub fn image(&self, set: &[u64], out: &mut [u64]) {
        out.iter_mut().for_each(|w| *w = 0);
        for (w, &bits) in set.iter().enumerate() {
            for b in (BitIter { bits }) {
                for (dst, s) in out.iter_mut().zip(self.row(w * 64 + b)) {
                    *dst |= s;
                }
            }
        }
    }

    pub fn all_ones(&self) -> bool {
        (0..self.size).all(|i| (0..self.size).all(|j| self.get(i, j)))
    }

    pub fn words_per_row(&self) -> usize {
        self.words
    }

    pub fn to_rows(&self) -> Vec<Vec<u8>> {
        (0..self.size).map(|i| (0..self.size).map(|j| u8::from(self.get(i, j))).collect()).collect()
    }

    pub fn to_dense(&self) -> Matrix {
        let mut m = Matrix::zeros(self.size, self.size);
        for i in 0..self.size {
            for j in self.row_ones(i) {
                m[(i, j)] = 1.0;
            }
        }
        m
    }
}

pub(crate) struct BitIter {
    pub(crate) bits: u64,
}

impl Iterator for BitIter {
    type Item = usize;
    #[inline]
    fn next(&mut self) -> Option<usize> {
        if self.bits == 0 {
            return None;
        }
        let b = self.bits.trailing_zeros() as usize;
        self.bits &= self.bits - 1;
        Some(b)
    }
}

/// Row-major dense `f64` matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl core::ops::Index<(usize, usize)> for Matrix {
    type Output = f64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl core::ops::IndexMut<(usize, usize)> for Matrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let r = rows.len();
        if r == 0 {
            return Err(Error::MalformedMatrix("empty matrix".into()));
        }
        let c = rows[0].len();
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::MalformedMatrix("ragged rows".into()));
        }
        Ok(Matrix { rows: r, cols: c, data: rows.iter().flatten().copied().collect() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows);
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += a * other[(k, j)];
                }
            }
        }
        out
    }

    /// Row vector times matrix.
    pub fn left_mul(&self, v: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.cols];
        for (i, &vi) in v.iter().enumerate() {
            if vi == 0.0 {
                continue;
            }
            for (o, &m) in out.iter_mut().zip(self.row(i)) {
                *o += vi * m;
            }
        }
        out
    }

    /// Matrix times column vector.
    pub fn right_mul(&self, v: &[f64]) -> Vec<f64> {
        (0..self.rows).map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum()).collect()
    }

    /// Successive powers `self^1, ..., self^count`.
    pub fn powers(&self, count: usize) -> Vec<Matrix> {
        let mut out = Vec::with_capacity(count);
        if count == 0 {
            return out;
        }
        out.push(self.clone());
        for i in 1..count {
            let next = out[i - 1].mul(self);
            out.push(next);
        }
        out
    }
}

/// Solve `a x = b` by Gaussian elimination with partial pivoting.
///
/// Returns the solution together with the ratio of largest to smallest
/// pivot magnitude, a cheap condition indicator.
pub fn solve(a: &Matrix, b: &[f64]) -> Result<(Vec<f64>, f64)> {
    let n = a.rows();
    assert_eq!(n, a.cols());
    let mut m = a.clone();
    let mut rhs = b.to_vec();
    let scale = a.data.iter().fold(0.0f64, |acc, v| acc.max(v.abs())).max(1.0);
    let (mut max_pivot, mut min_pivot) = (0.0f64, f64::INFINITY);
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| m[(i, col)].abs().total_cmp(&m[(j, col)].abs()))
            .unwrap_or(col);
        let pv = m[(piv, col)].abs();
        if pv <= 1e-13 * scale {
            return Err(Error::NonUniqueStationary);
        }
        max_pivot = max_pivot.max(pv);
        min_pivot = min_pivot.min(pv);
        if piv != col {
            for j in 0..n {
                m.data.swap(piv * n + j, col * n + j);
            }
            rhs.swap(piv, col);
        }
        for i in col + 1..n {
            let f = m[(i, col)] / m[(col, col)];
            if f == 0.0 {
                continue;
            }
            for j in col..n {
                let v = m[(col, j)];
                m[(i, j)] -= f * v;
            }
            rhs[i] -= f * rhs[col];
        }
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let s: f64 = (i + 1..n).map(|j| m[(i, j)] * x[j]).sum();
        x[i] = (rhs[i] - s) / m[(i, i)];
    }
    Ok((x, max_pivot / min_pivot))
}

/// Strongly connected components of the directed graph with an edge
/// `i -> j` wherever `weights(i, j) > 0`. Components are returned in
/// discovery order; each is a sorted list of vertices.
pub fn strongly_connected_components(n: usize, edge: impl Fn(usize, usize) -> bool) -> Vec<Vec<usize>> {
    // iterative Tarjan
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut comps = Vec::new();
    let mut next = 0usize;
    for root in 0..n {
        if index[root] != usize::MAX {
            continue;
        }
        let mut call: Vec<(usize, usize)> = vec![(root, 0)];
        index[root] = next;
        low[root] = next;
        next += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&mut (v, ref mut j)) = call.last_mut() {
            if *j < n {
                let w = *j;
                *j += 1;
                if !edge(v, w) {
                    continue;
                }
                if index[w] == usize::MAX {
                    index[w] = next;
                    low[w] = next;
                    next += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call.pop();
                if let Some(&(parent, _)) = call.last() {
                    low[parent] = low[parent].min(low[v]);
                }
                if low[v] == index[v] {
                    let mut comp = Vec::new();
                    while let Some(w) = stack.pop() {
                        on_stack[w] = false;
                        comp.push(w);
                        if w == v {
                            break;
                        }
                    }
                    comp.sort_unstable();
                    comps.push(comp);
                }
            }
        }
    }
    comps
}

/// Perron root (spectral radius) of a nonnegative square matrix.
///
/// The radius is the maximum over irreducible components. Each component
/// `C` is iterated as `C + I`, which is primitive, and the iteration stops
/// once the Collatz-Wielandt bounds `min (Av)_i/v_i <= rho <= max (Av)_i/v_i`
/// agree to `tol` relative.
pub fn perron_root(m: &Matrix, tol: f64, max_iter: usize) -> Result<f64> {
    let n = m.rows();
    if n == 0 || n != m.cols() {
        return Err(Error::MalformedMatrix("perron root needs a nonempty square matrix".into()));
    }
    if m.data.iter().any(|v| *v < 0.0 || !v.is_finite()) {
        return Err(Error::MalformedMatrix("perron root needs nonnegative finite entries".into()));
    }
    let comps = strongly_connected_components(n, |i, j| m[(i, j)] > 0.0);
    let mut best = 0.0f64;
    for comp in comps {
        let k = comp.len();
        if k == 1 {
            best = best.max(m[(comp[0], comp[0])]);
            continue;
        }
        let mut v = vec![1.0; k];
        let mut w = vec![0.0; k];
        let mut converged = false;
        for _ in 0..max_iter {
            for (a, &i) in comp.iter().enumerate() {
                let mut s = v[a];
                for (b, &j) in comp.iter().enumerate() {
                    s += m[(i, j)] * v[b];
                }
                w[a] = s;
            }
            let (lo, hi) = w.iter().zip(&v).fold((f64::INFINITY, 0.0f64), |(lo, hi), (a, b)| {
                let r = a / b;
                (lo.min(r), hi.max(r))
            });
            let norm = w.iter().fold(0.0f64, |acc, x| acc.max(*x));
            v.iter_mut().zip(&w).for_each(|(vi, wi)| *vi = wi / norm);
            if hi - lo <= tol * hi {
                best = best.max(0.5 * (lo + hi) - 1.0);
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::NonConvergence { iterations: max_iter });
        }
    }
    Ok(best)
}
