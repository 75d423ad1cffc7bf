use std::collections::BTreeSet;
use std::fmt;

use super::field::Field;
use super::sparse::{self, SVec};
use crate::error::{Error, Result};

/// A sparse matrix over an exact field, stored row by row.
///
/// Every stored entry is nonzero and every index is in bounds.
#[derive(Clone, PartialEq)]
pub struct Mat<F: Field> {
    field: F,
    nrows: usize,
    ncols: usize,
    rows: Vec<SVec<F::Elem>>,
}

impl<F: Field> fmt::Debug for Mat<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat {}x{} over {}", self.nrows, self.ncols, self.field.name())?;
        if self.nrows <= 12 && self.ncols <= 12 {
            for r in 0..self.nrows {
                let line: Vec<String> = (0..self.ncols).map(|c| self.field.format(&self.get(r, c))).collect();
                writeln!(f, "  [{}]", line.join(", "))?;
            }
        }
        Ok(())
    }
}

impl<F: Field> Mat<F> {
    pub fn zeros(field: &F, nrows: usize, ncols: usize) -> Self {
        Mat {
            field: field.clone(),
            nrows,
            ncols,
            rows: vec![Vec::new(); nrows],
        }
    }

    pub fn identity(field: &F, n: usize) -> Self {
        let rows = (0..n).map(|i| vec![(i, field.one())]).collect();
        Mat {
            field: field.clone(),
            nrows: n,
            ncols: n,
            rows,
        }
    }

    /// Builds a matrix from `(row, col, value)` triplets; duplicates are summed.
    ///
    /// Panics on out-of-range indices.
    pub fn from_triplets(
        field: &F,
        nrows: usize,
        ncols: usize,
        triplets: impl IntoIterator<Item = (usize, usize, F::Elem)>,
    ) -> Self {
        let mut rows: Vec<Vec<(usize, F::Elem)>> = vec![Vec::new(); nrows];
        for (r, c, v) in triplets {
            assert!(r < nrows && c < ncols, "triplet ({r},{c}) out of bounds for {nrows}x{ncols}");
            rows[r].push((c, v));
        }
        let rows = rows.into_iter().map(|row| sparse::normalize(field, row)).collect();
        Mat {
            field: field.clone(),
            nrows,
            ncols,
            rows,
        }
    }

    /// Builds from sparse rows; rows are normalized.
    pub fn from_sparse_rows(field: &F, ncols: usize, rows: Vec<SVec<F::Elem>>) -> Self {
        let rows: Vec<_> = rows.into_iter().map(|row| sparse::normalize(field, row)).collect();
        for row in &rows {
            if let Some((c, _)) = row.last() {
                assert!(*c < ncols, "column {c} out of bounds for {ncols} columns");
            }
        }
        Mat {
            field: field.clone(),
            nrows: rows.len(),
            ncols,
            rows,
        }
    }

    /// Builds from sparse columns of length `nrows`.
    pub fn from_sparse_columns(field: &F, nrows: usize, cols: &[SVec<F::Elem>]) -> Self {
        let triplets = cols
            .iter()
            .enumerate()
            .flat_map(|(c, col)| col.iter().map(move |(r, v)| (*r, c, v.clone())));
        Mat::from_triplets(field, nrows, cols.len(), triplets)
    }

    pub fn from_dense(field: &F, nrows: usize, ncols: usize, entries: &[Vec<F::Elem>]) -> Result<Self> {
        if entries.len() != nrows || entries.iter().any(|r| r.len() != ncols) {
            return Err(Error::DimensionMismatch(format!("dense data is not {nrows}x{ncols}")));
        }
        let rows = entries.iter().map(|r| sparse::from_dense(field, r)).collect();
        Ok(Mat {
            field: field.clone(),
            nrows,
            ncols,
            rows,
        })
    }

    /// Convenience constructor from small integer rows.
    pub fn from_i64_rows(field: &F, entries: &[&[i64]]) -> Self {
        let nrows = entries.len();
        let ncols = entries.first().map_or(0, |r| r.len());
        let triplets = entries.iter().enumerate().flat_map(|(r, row)| {
            assert_eq!(row.len(), ncols, "ragged integer rows");
            row.iter().enumerate().map(move |(c, v)| (r, c, field.from_i64(*v)))
        });
        Mat::from_triplets(field, nrows, ncols, triplets)
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.nrows, self.ncols)
    }

    pub fn row(&self, r: usize) -> &[(usize, F::Elem)] {
        &self.rows[r]
    }

    pub fn rows(&self) -> &[SVec<F::Elem>] {
        &self.rows
    }

    pub fn get(&self, r: usize, c: usize) -> F::Elem {
        match self.rows[r].binary_search_by_key(&c, |(i, _)| *i) {
            Ok(k) => self.rows[r][k].1.clone(),
            Err(_) => self.field.zero(),
        }
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(Vec::is_empty)
    }

    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, &F::Elem)> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(r, row)| row.iter().map(move |(c, v)| (r, *c, v)))
    }

    pub fn transpose(&self) -> Self {
        let mut cols: Vec<SVec<F::Elem>> = vec![Vec::new(); self.ncols];
        for (r, row) in self.rows.iter().enumerate() {
            for (c, v) in row {
                cols[*c].push((r, v.clone()));
            }
        }
        Mat {
            field: self.field.clone(),
            nrows: self.ncols,
            ncols: self.nrows,
            rows: cols,
        }
    }

    /// Columns as sparse vectors.
    pub fn columns(&self) -> Vec<SVec<F::Elem>> {
        self.transpose().rows
    }

    pub fn mul(&self, other: &Mat<F>) -> Result<Mat<F>> {
        if self.ncols != other.nrows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.nrows, self.ncols, other.nrows, other.ncols
            )));
        }
        let f = &self.field;
        let rows = self
            .rows
            .iter()
            .map(|row| {
                let mut acc: Vec<(usize, F::Elem)> = Vec::new();
                for (k, a) in row {
                    for (c, b) in &other.rows[*k] {
                        acc.push((*c, f.mul(a, b)));
                    }
                }
                sparse::normalize(f, acc)
            })
            .collect();
        Ok(Mat {
            field: f.clone(),
            nrows: self.nrows,
            ncols: other.ncols,
            rows,
        })
    }

    pub fn add(&self, other: &Mat<F>) -> Result<Mat<F>> {
        self.combine(other, &self.field.one())
    }

    pub fn sub(&self, other: &Mat<F>) -> Result<Mat<F>> {
        self.combine(other, &self.field.from_i64(-1))
    }

    /// `self + a * other`.
    pub fn combine(&self, other: &Mat<F>, a: &F::Elem) -> Result<Mat<F>> {
        if self.shape() != other.shape() {
            return Err(Error::DimensionMismatch(format!(
                "cannot add {}x{} and {}x{}",
                self.nrows, self.ncols, other.nrows, other.ncols
            )));
        }
        let rows = self
            .rows
            .iter()
            .zip(&other.rows)
            .map(|(x, y)| sparse::axpy(&self.field, x, a, y))
            .collect();
        Ok(Mat {
            field: self.field.clone(),
            nrows: self.nrows,
            ncols: self.ncols,
            rows,
        })
    }

    pub fn scale(&self, a: &F::Elem) -> Mat<F> {
        let rows = self.rows.iter().map(|r| sparse::scale(&self.field, a, r)).collect();
        Mat {
            field: self.field.clone(),
            nrows: self.nrows,
            ncols: self.ncols,
            rows,
        }
    }

    pub fn neg(&self) -> Mat<F> {
        self.scale(&self.field.from_i64(-1))
    }

    pub fn apply(&self, v: &[F::Elem]) -> Vec<F::Elem> {
        assert_eq!(v.len(), self.ncols, "vector length mismatch");
        let f = &self.field;
        self.rows
            .iter()
            .map(|row| row.iter().fold(f.zero(), |acc, (c, a)| f.add(&acc, &f.mul(a, &v[*c]))))
            .collect()
    }

    /// Applies the matrix to a sparse column vector.
    pub fn apply_sparse(&self, v: &[(usize, F::Elem)]) -> SVec<F::Elem> {
        let f = &self.field;
        let mut dense = vec![f.zero(); self.ncols];
        for (i, x) in v {
            dense[*i] = x.clone();
        }
        let out: Vec<(usize, F::Elem)> = self
            .rows
            .iter()
            .enumerate()
            .filter_map(|(r, row)| {
                let mut acc = f.zero();
                for (c, a) in row {
                    if !f.is_zero(&dense[*c]) {
                        acc = f.add(&acc, &f.mul(a, &dense[*c]));
                    }
                }
                (!f.is_zero(&acc)).then_some((r, acc))
            })
            .collect();
        out
    }

    /// The submatrix on the given row and column ranges, reindexed from zero.
    pub fn submatrix(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> Mat<F> {
        assert!(rows.end <= self.nrows && cols.end <= self.ncols);
        let out = self.rows[rows.clone()]
            .iter()
            .map(|row| {
                row.iter()
                    .filter(|(c, _)| cols.contains(c))
                    .map(|(c, v)| (c - cols.start, v.clone()))
                    .collect()
            })
            .collect();
        Mat {
            field: self.field.clone(),
            nrows: rows.len(),
            ncols: cols.len(),
            rows: out,
        }
    }

    pub fn vstack(field: &F, ncols: usize, blocks: &[&Mat<F>]) -> Result<Mat<F>> {
        let mut rows = Vec::new();
        for b in blocks {
            if b.ncols != ncols {
                return Err(Error::DimensionMismatch(format!("vstack: {} columns, expected {ncols}", b.ncols)));
            }
            rows.extend(b.rows.iter().cloned());
        }
        Ok(Mat {
            field: field.clone(),
            nrows: rows.len(),
            ncols,
            rows,
        })
    }

    /// Places `block` with its top-left corner at `(r0, c0)` in a triplet list.
    pub fn push_block(&self, r0: usize, c0: usize, sign: &F::Elem, out: &mut Vec<(usize, usize, F::Elem)>) {
        for (r, row) in self.rows.iter().enumerate() {
            for (c, v) in row {
                out.push((r0 + r, c0 + c, self.field.mul(sign, v)));
            }
        }
    }

    pub fn to_dense(&self) -> Vec<Vec<F::Elem>> {
        self.rows.iter().map(|r| sparse::to_dense(&self.field, self.ncols, r)).collect()
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &Mat<F>) -> Mat<F> {
        let f = &self.field;
        let mut t = Vec::with_capacity(self.nnz() * other.nnz());
        for (r1, c1, a) in self.triplets() {
            for (r2, c2, b) in other.triplets() {
                t.push((r1 * other.nrows + r2, c1 * other.ncols + c2, f.mul(a, b)));
            }
        }
        Mat::from_triplets(f, self.nrows * other.nrows, self.ncols * other.ncols, t)
    }

    /// Rank over the field.
    pub fn rank(&self) -> usize {
        Eliminator::new(&self.field, self.ncols, self.rows.clone(), false).run().pivots.len()
    }

    /// A basis of the null space, each vector of length `ncols`.
    pub fn kernel_basis(&self) -> Vec<Vec<F::Elem>> {
        self.kernel_sparse()
            .iter()
            .map(|v| sparse::to_dense(&self.field, self.ncols, v))
            .collect()
    }

    /// Null space basis as sparse vectors, one per non-pivot column in
    /// increasing column order.
    pub fn kernel_sparse(&self) -> Vec<SVec<F::Elem>> {
        let f = &self.field;
        let reduced = Eliminator::new(f, self.ncols, self.rows.clone(), true).run();
        let mut is_pivot = vec![false; self.ncols];
        for &(_, c) in &reduced.pivots {
            is_pivot[c] = true;
        }
        let mut kernel: Vec<SVec<F::Elem>> = vec![Vec::new(); self.ncols];
        for &(r, pc) in &reduced.pivots {
            let row = &reduced.rows[r];
            let p = row.iter().find(|(c, _)| *c == pc).expect("pivot entry").1.clone();
            let pinv = f.inv(&p).expect("nonzero pivot");
            for (c, a) in row {
                if *c != pc {
                    debug_assert!(!is_pivot[*c]);
                    kernel[*c].push((pc, f.neg(&f.mul(a, &pinv))));
                }
            }
        }
        (0..self.ncols)
            .filter(|c| !is_pivot[*c])
            .map(|c| {
                let mut v = std::mem::take(&mut kernel[c]);
                v.push((c, f.one()));
                v.sort_by_key(|(i, _)| *i);
                v
            })
            .collect()
    }

    /// Null space basis as the columns of a matrix.
    pub fn kernel_matrix(&self) -> Mat<F> {
        Mat::from_sparse_columns(&self.field, self.ncols, &self.kernel_sparse())
    }
}

struct Reduced<E> {
    rows: Vec<SVec<E>>,
    /// `(row, column)` in pivot order.
    pivots: Vec<(usize, usize)>,
}

/// Sparse Gaussian elimination with deterministic Markowitz-style pivoting:
/// the pivot row is the sparsest remaining row (smallest index on ties) and
/// the pivot column is the entry of that row whose column is sparsest
/// (smallest index on ties).
struct Eliminator<'a, F: Field> {
    field: &'a F,
    rows: Vec<SVec<F::Elem>>,
    /// For each column, the rows currently holding a nonzero there.
    col_rows: Vec<BTreeSet<usize>>,
    /// Candidate rows keyed by `(nnz, row)`.
    queue: BTreeSet<(usize, usize)>,
    /// Whether pivot columns are also cleared from earlier pivot rows.
    full: bool,
}

impl<'a, F: Field> Eliminator<'a, F> {
    fn new(field: &'a F, ncols: usize, rows: Vec<SVec<F::Elem>>, full: bool) -> Self {
        let mut col_rows = vec![BTreeSet::new(); ncols];
        let mut queue = BTreeSet::new();
        for (r, row) in rows.iter().enumerate() {
            for (c, _) in row {
                col_rows[*c].insert(r);
            }
            if !row.is_empty() {
                queue.insert((row.len(), r));
            }
        }
        Eliminator {
            field,
            rows,
            col_rows,
            queue,
            full,
        }
    }

    fn run(mut self) -> Reduced<F::Elem> {
        let f = self.field;
        let mut pivots = Vec::new();
        let mut pivoted = vec![false; self.rows.len()];
        while let Some(&(len, pr)) = self.queue.iter().next() {
            self.queue.remove(&(len, pr));
            pivoted[pr] = true;
            let pc = self.rows[pr]
                .iter()
                .map(|(c, _)| *c)
                .min_by_key(|c| (self.col_rows[*c].len(), *c))
                .expect("queued rows are nonempty");
            if !self.full {
                for (c, _) in &self.rows[pr] {
                    self.col_rows[*c].remove(&pr);
                }
            }
            let prow = self.rows[pr].clone();
            let pval = prow.iter().find(|(c, _)| *c == pc).unwrap().1.clone();
            let pinv = f.inv(&pval).expect("nonzero pivot");
            let targets: Vec<usize> = self.col_rows[pc].iter().copied().filter(|&r| r != pr).collect();
            for r in targets {
                let a = self.rows[r].iter().find(|(c, _)| *c == pc).unwrap().1.clone();
                let factor = f.neg(&f.mul(&a, &pinv));
                let old = std::mem::take(&mut self.rows[r]);
                let new = sparse::axpy(f, &old, &factor, &prow);
                for (c, _) in &old {
                    self.col_rows[*c].remove(&r);
                }
                for (c, _) in &new {
                    self.col_rows[*c].insert(r);
                }
                if !pivoted[r] {
                    self.queue.remove(&(old.len(), r));
                    if !new.is_empty() {
                        self.queue.insert((new.len(), r));
                    }
                }
                self.rows[r] = new;
            }
            pivots.push((pr, pc));
        }
        Reduced {
            rows: self.rows,
            pivots,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{PrimeField, Rationals};

    #[test]
    fn rank_examples() {
        let q = Rationals;
        assert_eq!(Mat::identity(&q, 2).rank(), 2);
        assert_eq!(Mat::zeros(&q, 3, 4).rank(), 0);
        assert_eq!(Mat::from_i64_rows(&q, &[&[1, 2], &[2, 4]]).rank(), 1);
    }

    #[test]
    fn kernel_examples() {
        let q = Rationals;
        assert!(Mat::identity(&q, 2).kernel_basis().is_empty());
        assert_eq!(Mat::zeros(&q, 2, 3).kernel_basis().len(), 3);
        let f2 = PrimeField::new(2).unwrap();
        let k = Mat::from_i64_rows(&f2, &[&[1, 1]]).kernel_basis();
        assert_eq!(k, vec![vec![1, 1]]);
    }

    #[test]
    fn kernel_vectors_are_annihilated() {
        let q = Rationals;
        let m = Mat::from_i64_rows(&q, &[&[1, 2, 3, 4], &[2, 4, 6, 8], &[0, 1, -1, 2]]);
        let k = m.kernel_basis();
        assert_eq!(k.len(), 4 - m.rank());
        for v in &k {
            assert!(m.apply(v).iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn product_and_transpose() {
        let q = Rationals;
        let a = Mat::from_i64_rows(&q, &[&[1, 2], &[3, 4]]);
        let b = Mat::from_i64_rows(&q, &[&[0, 1], &[1, 0]]);
        assert_eq!(a.mul(&b).unwrap(), Mat::from_i64_rows(&q, &[&[2, 1], &[4, 3]]));
        assert_eq!(a.transpose(), Mat::from_i64_rows(&q, &[&[1, 3], &[2, 4]]));
        assert!(a.mul(&Mat::zeros(&q, 3, 1)).is_err());
    }
}
