//! Exact linear algebra: a small dense matrix type and an incremental sparse
//! solver for the intertwining systems behind every hom computation.

use std::collections::HashMap;
use std::ops::{Index, IndexMut};

use crate::field::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

impl<F: Scalar> Matrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![F::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = F::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<F>>, cols: usize) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged matrix rows");
            data.extend(r);
        }
        Matrix { rows: n, cols, data }
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[Vec<F>], rows: usize) -> Self {
        let mut m = Self::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), rows);
            for (i, x) in c.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[F] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<F> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn nonzero_count(&self) -> usize {
        self.data.iter().filter(|x| !x.is_zero()).count()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matrix shapes do not compose");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        let v = out[(i, j)].clone() + a.clone() * b.clone();
                        out[(i, j)] = v;
                    }
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[F]) -> Vec<F> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = F::zero();
                for (a, x) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !x.is_zero() {
                        acc = acc + a.clone() * x.clone();
                    }
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a.clone() + b.clone()).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, c: &F) -> Self {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a.clone() * c.clone()).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-F::one()))
    }

    /// Places `block` with its top-left corner at `(r, c)`.
    pub fn set_block(&mut self, r: usize, c: usize, block: &Self) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self[(r + i, c + j)] = block[(i, j)].clone();
            }
        }
    }

    pub fn block(&self, r: usize, c: usize, rows: usize, cols: usize) -> Self {
        let mut out = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                out[(i, j)] = self[(r + i, c + j)].clone();
            }
        }
        out
    }

    pub fn trace(&self) -> F {
        (0..self.rows.min(self.cols)).fold(F::zero(), |acc, i| acc + self[(i, i)].clone())
    }

    /// Reduced row echelon form and its pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else { continue };
            m.swap_rows(r, p);
            let inv = m[(r, c)].inv();
            for j in c..m.cols {
                let v = m[(r, j)].clone() * inv.clone();
                m[(r, j)] = v;
            }
            for i in 0..m.rows {
                if i != r && !m[(i, c)].is_zero() {
                    let f = m[(i, c)].clone();
                    for j in c..m.cols {
                        if !m[(r, j)].is_zero() {
                            let v = m[(i, j)].clone() - f.clone() * m[(r, j)].clone();
                            m[(i, j)] = v;
                        }
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of {x : Ax = 0}, one vector per free column.
    pub fn nullspace(&self) -> Vec<Vec<F>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut x = vec![F::zero(); self.cols];
                x[f] = F::one();
                for (i, &p) in pivots.iter().enumerate() {
                    x[p] = -r[(i, f)].clone();
                }
                x
            })
            .collect()
    }

    /// Reduced column echelon basis of the column space. Each returned
    /// vector has a 1 in its own pivot row and 0 in every other pivot row.
    pub fn column_space(&self) -> ColumnBasis<F> {
        let (r, pivots) = self.transpose().rref();
        let vectors = (0..pivots.len()).map(|i| r.row(i).to_vec()).collect();
        ColumnBasis { dim: self.rows, vectors, pivot_rows: pivots }
    }

    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols && self.rank() == self.rows
    }

    pub fn inverse(&self) -> Option<Self> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut aug = Self::zeros(n, 2 * n);
        aug.set_block(0, 0, self);
        aug.set_block(0, n, &Self::identity(n));
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        Some(r.block(0, n, n, n))
    }

    pub fn map<G: Scalar>(&self, f: impl Fn(&F) -> G) -> Matrix<G> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }
}

impl<F> Index<(usize, usize)> for Matrix<F> {
    type Output = F;
    fn index(&self, (i, j): (usize, usize)) -> &F {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<F> IndexMut<(usize, usize)> for Matrix<F> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut F {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

/// Canonical basis of a subspace of F^dim in reduced column echelon form.
#[derive(Clone, Debug, PartialEq)]
pub struct ColumnBasis<F> {
    pub dim: usize,
    pub vectors: Vec<Vec<F>>,
    pub pivot_rows: Vec<usize>,
}

impl<F: Scalar> ColumnBasis<F> {
    pub fn rank(&self) -> usize {
        self.vectors.len()
    }

    /// Coordinates of `v`, assumed to lie in the span.
    pub fn coordinates(&self, v: &[F]) -> Vec<F> {
        self.pivot_rows.iter().map(|&p| v[p].clone()).collect()
    }

    pub fn contains(&self, v: &[F]) -> bool {
        let mut w = v.to_vec();
        for (b, &p) in self.vectors.iter().zip(&self.pivot_rows) {
            let c = v[p].clone();
            if !c.is_zero() {
                for (wi, bi) in w.iter_mut().zip(b) {
                    if !bi.is_zero() {
                        *wi = wi.clone() - c.clone() * bi.clone();
                    }
                }
            }
        }
        w.iter().all(|x| x.is_zero())
    }

    pub fn as_matrix(&self) -> Matrix<F> {
        Matrix::from_columns(&self.vectors, self.dim)
    }
}

/// Projection onto the standard-coordinate complement of a subspace: the
/// canonical section used for quotients. Coordinates of the class of `v`
/// are read off at the non-pivot positions after reduction.
#[derive(Clone, Debug)]
pub struct Quotient<F> {
    dim: usize,
    rows: Vec<Vec<F>>,
    pivots: Vec<usize>,
    free: Vec<usize>,
}

impl<F: Scalar> Quotient<F> {
    pub fn new(dim: usize, spanning: &[Vec<F>]) -> Self {
        let m = Matrix::from_rows(spanning.to_vec(), dim);
        let (r, pivots) = m.rref();
        let rows = (0..pivots.len()).map(|i| r.row(i).to_vec()).collect();
        let free = (0..dim).filter(|c| !pivots.contains(c)).collect();
        Quotient { dim, rows, pivots, free }
    }

    pub fn dim(&self) -> usize {
        self.free.len()
    }

    pub fn kernel_dim(&self) -> usize {
        self.pivots.len()
    }

    pub fn free_positions(&self) -> &[usize] {
        &self.free
    }

    pub fn project(&self, v: &[F]) -> Vec<F> {
        assert_eq!(v.len(), self.dim);
        let mut w = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            let c = w[p].clone();
            if !c.is_zero() {
                for (wi, ri) in w.iter_mut().zip(row) {
                    if !ri.is_zero() {
                        *wi = wi.clone() - c.clone() * ri.clone();
                    }
                }
            }
        }
        self.free.iter().map(|&j| w[j].clone()).collect()
    }

    /// Reduced rows spanning the subspace.
    pub fn kernel_rows(&self) -> &[Vec<F>] {
        &self.rows
    }
}

type SparseRow<F> = Vec<(usize, F)>;

fn axpy<F: Scalar>(row: &SparseRow<F>, c: &F, pivot: &SparseRow<F>) -> SparseRow<F> {
    // row - c * pivot, both sorted by column
    let mut out = Vec::with_capacity(row.len() + pivot.len());
    let (mut i, mut j) = (0, 0);
    while i < row.len() || j < pivot.len() {
        let take_row = j == pivot.len() || (i < row.len() && row[i].0 < pivot[j].0);
        let take_piv = i == row.len() || (j < pivot.len() && pivot[j].0 < row[i].0);
        if take_row {
            out.push(row[i].clone());
            i += 1;
        } else if take_piv {
            out.push((pivot[j].0, -(c.clone() * pivot[j].1.clone())));
            j += 1;
        } else {
            let v = row[i].1.clone() - c.clone() * pivot[j].1.clone();
            if !v.is_zero() {
                out.push((row[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Incremental sparse Gaussian elimination. Each stored row is normalized
/// with its pivot at its smallest column, so reduction only introduces
/// larger columns and terminates in one left-to-right sweep.
#[derive(Clone, Debug)]
pub struct LinearSystem<F> {
    nvars: usize,
    pivots: HashMap<usize, (SparseRow<F>, F)>,
    consistent: bool,
}

impl<F: Scalar> LinearSystem<F> {
    pub fn new(nvars: usize) -> Self {
        LinearSystem { nvars, pivots: HashMap::new(), consistent: true }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn is_consistent(&self) -> bool {
        self.consistent
    }

    /// Adds the equation sum(coef * x_var) = rhs. Repeated variables are summed.
    pub fn add_equation(&mut self, terms: impl IntoIterator<Item = (usize, F)>, rhs: F) {
        let mut row: SparseRow<F> = Vec::new();
        for (v, c) in terms {
            assert!(v < self.nvars, "variable out of range");
            if !c.is_zero() {
                row.push((v, c));
            }
        }
        row.sort_by_key(|t| t.0);
        let mut merged: SparseRow<F> = Vec::with_capacity(row.len());
        for (v, c) in row {
            match merged.last_mut() {
                Some(last) if last.0 == v => last.1 = last.1.clone() + c,
                _ => merged.push((v, c)),
            }
        }
        merged.retain(|t| !t.1.is_zero());
        let mut row = merged;
        let mut rhs = rhs;
        let mut idx = 0;
        while idx < row.len() {
            let col = row[idx].0;
            if let Some((prow, prhs)) = self.pivots.get(&col) {
                let c = row[idx].1.clone();
                rhs = rhs - c.clone() * prhs.clone();
                row = axpy(&row, &c, prow);
            } else {
                idx += 1;
            }
        }
        if row.is_empty() {
            if !rhs.is_zero() {
                self.consistent = false;
            }
            return;
        }
        let inv = row[0].1.inv();
        for t in row.iter_mut() {
            t.1 = t.1.clone() * inv.clone();
        }
        let col = row[0].0;
        self.pivots.insert(col, (row, rhs * inv));
    }

    fn back_substitute(&self, mut x: Vec<F>, with_rhs: bool) -> Vec<F> {
        let mut cols: Vec<usize> = self.pivots.keys().copied().collect();
        cols.sort_unstable_by(|a, b| b.cmp(a));
        for c in cols {
            let (row, rhs) = &self.pivots[&c];
            let mut v = if with_rhs { rhs.clone() } else { F::zero() };
            for (j, a) in row.iter().skip(1) {
                if !x[*j].is_zero() {
                    v = v - a.clone() * x[*j].clone();
                }
            }
            x[c] = v;
        }
        x
    }

    /// One solution with all free variables zero.
    pub fn solution(&self) -> Option<Vec<F>> {
        if !self.consistent {
            return None;
        }
        Some(self.back_substitute(vec![F::zero(); self.nvars], true))
    }

    pub fn free_variables(&self) -> Vec<usize> {
        (0..self.nvars).filter(|v| !self.pivots.contains_key(v)).collect()
    }

    /// Basis of the homogeneous solution space.
    pub fn kernel_basis(&self) -> Vec<Vec<F>> {
        self.free_variables()
            .into_iter()
            .map(|f| {
                let mut x = vec![F::zero(); self.nvars];
                x[f] = F::one();
                self.back_substitute(x, false)
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{rat, Rational};

    fn m(rows: &[&[i64]]) -> Matrix<Rational> {
        let cols = rows.first().map_or(0, |r| r.len());
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect(), cols)
    }

    #[test]
    fn nullspace_is_annihilated() {
        let a = m(&[&[1, 2, 3, 4], &[2, 4, 6, 8], &[0, 1, 1, 0]]);
        let ns = a.nullspace();
        assert_eq!(ns.len(), 2);
        for v in ns {
            assert!(a.apply(&v).iter().all(|x| *x == rat(0)));
        }
    }

    #[test]
    fn inverse_of_invertible() {
        let a = m(&[&[2, 1], &[1, 1]]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), Matrix::identity(2));
        assert!(m(&[&[1, 2], &[2, 4]]).inverse().is_none());
    }

    #[test]
    fn sparse_matches_dense() {
        let a = m(&[&[1, 0, 2, 0, 1], &[0, 1, 1, 0, 0], &[1, 1, 3, 0, 1], &[0, 0, 0, 1, -1]]);
        let mut sys = LinearSystem::new(5);
        for i in 0..a.rows() {
            sys.add_equation(a.row(i).iter().cloned().enumerate(), rat(0));
        }
        assert_eq!(sys.rank(), a.rank());
        for v in sys.kernel_basis() {
            assert!(a.apply(&v).iter().all(|x| *x == rat(0)));
        }
        assert_eq!(sys.kernel_basis().len(), a.nullspace().len());
    }

    #[test]
    fn inconsistent_system_detected() {
        let mut sys = LinearSystem::<Rational>::new(2);
        sys.add_equation([(0, rat(1)), (1, rat(1))], rat(1));
        sys.add_equation([(0, rat(2)), (1, rat(2))], rat(3));
        assert!(sys.solution().is_none());
    }

    #[test]
    fn quotient_projection_kills_subspace() {
        let q = Quotient::new(3, &[vec![rat(1), rat(1), rat(0)]]);
        assert_eq!(q.dim(), 2);
        assert_eq!(q.project(&[rat(1), rat(1), rat(0)]), vec![rat(0), rat(0)]);
        assert_eq!(q.project(&[rat(1), rat(0), rat(0)]), vec![rat(-1), rat(0)]);
    }

    #[test]
    fn column_space_coordinates() {
        let a = m(&[&[1, 2], &[0, 0], &[1, 2]]);
        let cs = a.column_space();
        assert_eq!(cs.rank(), 1);
        let v = vec![rat(3), rat(0), rat(3)];
        assert!(cs.contains(&v));
        assert_eq!(cs.coordinates(&v), vec![rat(3)]);
        assert!(!cs.contains(&[rat(1), rat(0), rat(0)]));
    }
}
