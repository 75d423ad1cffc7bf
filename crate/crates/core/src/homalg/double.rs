use crate::error::{Error, Result};
use crate::exactalg::{Field, Mat};

use super::complex::CochainComplex;

/// A block of a total complex: bidegree `(p, q)` placed at `offset`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Block {
    pub p: usize,
    pub q: usize,
    pub offset: usize,
    pub dim: usize,
}

/// A first-quadrant double complex on the rectangle `[0, P] × [0, Q]`.
///
/// Differentials are stored commuting: `d_h d_v = d_v d_h`. The sign is
/// inserted at totalization, `D = d_v + (−1)^q d_h`.
///
/// An optional truncation `N` records that the complex was cut at total
/// degree `N`: blocks with `p + q > N` are zero and total degree `N` is a
/// boundary degree.
#[derive(Clone, Debug, PartialEq)]
pub struct DoubleComplex<F: Field> {
    field: F,
    dims: Vec<Vec<usize>>,
    dh: Vec<Vec<Mat<F>>>,
    dv: Vec<Vec<Mat<F>>>,
    trunc: Option<usize>,
}

impl<F: Field> DoubleComplex<F> {
    /// `dims[p][q]`; `dh[p][q] : (p,q) → (p+1,q)` for `p < P`;
    /// `dv[p][q] : (p,q) → (p,q+1)` for `q < Q`. All invariants are checked.
    pub fn new(
        field: &F,
        dims: Vec<Vec<usize>>,
        dh: Vec<Vec<Mat<F>>>,
        dv: Vec<Vec<Mat<F>>>,
        trunc: Option<usize>,
    ) -> Result<Self> {
        let dc = DoubleComplex {
            field: field.clone(),
            dims,
            dh,
            dv,
            trunc,
        };
        dc.validate()?;
        Ok(dc)
    }

    /// Builds the complex from closures producing each differential.
    pub fn from_fn(
        field: &F,
        dims: Vec<Vec<usize>>,
        trunc: Option<usize>,
        mut dh: impl FnMut(usize, usize) -> Mat<F>,
        mut dv: impl FnMut(usize, usize) -> Mat<F>,
    ) -> Result<Self> {
        let pn = dims.len();
        let qn = dims.first().map_or(0, Vec::len);
        let h = (0..pn.saturating_sub(1))
            .map(|p| (0..qn).map(|q| dh(p, q)).collect())
            .collect();
        let v = (0..pn).map(|p| (0..qn.saturating_sub(1)).map(|q| dv(p, q)).collect()).collect();
        DoubleComplex::new(field, dims, h, v, trunc)
    }

    fn validate(&self) -> Result<()> {
        let pn = self.dims.len();
        if pn == 0 {
            return Err(Error::DimensionMismatch("empty double complex".into()));
        }
        let qn = self.dims[0].len();
        if qn == 0 || self.dims.iter().any(|r| r.len() != qn) {
            return Err(Error::DimensionMismatch("ragged bidegree rectangle".into()));
        }
        if self.dh.len() != pn - 1 || self.dh.iter().any(|r| r.len() != qn) {
            return Err(Error::DimensionMismatch("wrong number of horizontal differentials".into()));
        }
        if self.dv.len() != pn || self.dv.iter().any(|r| r.len() != qn - 1) {
            return Err(Error::DimensionMismatch("wrong number of vertical differentials".into()));
        }
        for p in 0..pn {
            for q in 0..qn {
                if p + 1 < pn && self.dh[p][q].shape() != (self.dims[p + 1][q], self.dims[p][q]) {
                    return Err(Error::DimensionMismatch(format!("d_h at ({p},{q}) has wrong shape")));
                }
                if q + 1 < qn && self.dv[p][q].shape() != (self.dims[p][q + 1], self.dims[p][q]) {
                    return Err(Error::DimensionMismatch(format!("d_v at ({p},{q}) has wrong shape")));
                }
            }
        }
        for p in 0..pn {
            for q in 0..qn {
                let loc = || format!("bidegree ({p},{q})");
                if p + 2 < pn && !self.dh[p + 1][q].mul(&self.dh[p][q])?.is_zero() {
                    return Err(Error::invariant(loc(), "d_h² ≠ 0"));
                }
                if q + 2 < qn && !self.dv[p][q + 1].mul(&self.dv[p][q])?.is_zero() {
                    return Err(Error::invariant(loc(), "d_v² ≠ 0"));
                }
                if p + 1 < pn && q + 1 < qn {
                    let hv = self.dh[p][q + 1].mul(&self.dv[p][q])?;
                    let vh = self.dv[p + 1][q].mul(&self.dh[p][q])?;
                    if hv != vh {
                        return Err(Error::invariant(loc(), "d_h d_v ≠ d_v d_h"));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    /// Largest horizontal index `P`.
    pub fn pmax(&self) -> usize {
        self.dims.len() - 1
    }

    /// Largest vertical index `Q`.
    pub fn qmax(&self) -> usize {
        self.dims[0].len() - 1
    }

    pub fn dim(&self, p: usize, q: usize) -> usize {
        self.dims.get(p).and_then(|r| r.get(q)).copied().unwrap_or(0)
    }

    pub fn dims(&self) -> &[Vec<usize>] {
        &self.dims
    }

    pub fn dh(&self, p: usize, q: usize) -> &Mat<F> {
        &self.dh[p][q]
    }

    pub fn dv(&self, p: usize, q: usize) -> &Mat<F> {
        &self.dv[p][q]
    }

    pub fn trunc(&self) -> Option<usize> {
        self.trunc
    }

    /// Highest total degree present in the total complex.
    pub fn top_degree(&self) -> usize {
        let full = self.pmax() + self.qmax();
        self.trunc.map_or(full, |n| n.min(full))
    }

    /// Blocks of total degree `n`, ordered by increasing `p`.
    pub fn layout(&self, n: usize) -> Vec<Block> {
        let mut offset = 0;
        let lo = n.saturating_sub(self.qmax());
        let hi = n.min(self.pmax());
        let mut out = Vec::new();
        for p in lo..=hi {
            if p > n {
                break;
            }
            let q = n - p;
            let dim = self.dim(p, q);
            out.push(Block { p, q, offset, dim });
            offset += dim;
        }
        out
    }

    pub fn total_dim(&self, n: usize) -> usize {
        self.layout(n).iter().map(|b| b.dim).sum()
    }

    /// `D^n : Tot^n → Tot^{n+1}` with `D = d_v + (−1)^q d_h`.
    pub fn total_differential(&self, n: usize) -> Mat<F> {
        let f = &self.field;
        let src = self.layout(n);
        let dst = self.layout(n + 1);
        let rows: usize = dst.iter().map(|b| b.dim).sum();
        let cols: usize = src.iter().map(|b| b.dim).sum();
        let find = |p: usize, q: usize| dst.iter().find(|b| b.p == p && b.q == q).copied();
        let mut t = Vec::new();
        for b in &src {
            if b.q < self.qmax() {
                if let Some(target) = find(b.p, b.q + 1) {
                    self.dv[b.p][b.q].push_block(target.offset, b.offset, &f.one(), &mut t);
                }
            }
            if b.p < self.pmax() {
                if let Some(target) = find(b.p + 1, b.q) {
                    let sign = if b.q % 2 == 0 { f.one() } else { f.from_i64(-1) };
                    self.dh[b.p][b.q].push_block(target.offset, b.offset, &sign, &mut t);
                }
            }
        }
        Mat::from_triplets(f, rows, cols, t)
    }

    /// The total complex; `D² = 0` is re-verified on construction.
    pub fn total_complex(&self) -> Result<CochainComplex<F>> {
        let top = self.top_degree();
        let dims = (0..=top).map(|n| self.total_dim(n)).collect();
        let diffs = (0..top).map(|n| self.total_differential(n)).collect();
        CochainComplex::new(&self.field, dims, diffs, self.trunc.is_some()).map_err(|e| match e {
            Error::CompositionNonzero(m) => Error::invariant("total complex", format!("D² ≠ 0 ({m})")),
            other => other,
        })
    }

    /// Swaps the two indices.
    pub fn transpose(&self) -> DoubleComplex<F> {
        let (pn, qn) = (self.pmax() + 1, self.qmax() + 1);
        let dims = (0..qn).map(|q| (0..pn).map(|p| self.dims[p][q]).collect()).collect();
        let dh = (0..qn.saturating_sub(1))
            .map(|q| (0..pn).map(|p| self.dv[p][q].clone()).collect())
            .collect();
        let dv = (0..qn)
            .map(|q| (0..pn.saturating_sub(1)).map(|p| self.dh[p][q].clone()).collect())
            .collect();
        DoubleComplex {
            field: self.field.clone(),
            dims,
            dh,
            dv,
            trunc: self.trunc,
        }
    }

    /// `Σ (−1)^{p+q} dim C^{p,q}`.
    pub fn euler_characteristic(&self) -> i64 {
        let mut chi = 0i64;
        for (p, row) in self.dims.iter().enumerate() {
            for (q, d) in row.iter().enumerate() {
                let d = *d as i64;
                chi += if (p + q) % 2 == 0 { d } else { -d };
            }
        }
        chi
    }

    /// Zeroes every block with `p + q > n` and records the truncation.
    pub fn truncated(&self, n: usize) -> DoubleComplex<F> {
        let f = &self.field;
        let keep = |p: usize, q: usize| p + q <= n;
        let dims: Vec<Vec<usize>> = self
            .dims
            .iter()
            .enumerate()
            .map(|(p, r)| r.iter().enumerate().map(|(q, d)| if keep(p, q) { *d } else { 0 }).collect())
            .collect();
        let dh = self
            .dh
            .iter()
            .enumerate()
            .map(|(p, r)| {
                r.iter()
                    .enumerate()
                    .map(|(q, m)| {
                        if keep(p + 1, q) {
                            m.clone()
                        } else {
                            Mat::zeros(f, dims[p + 1][q], dims[p][q])
                        }
                    })
                    .collect()
            })
            .collect();
        let dv = self
            .dv
            .iter()
            .enumerate()
            .map(|(p, r)| {
                r.iter()
                    .enumerate()
                    .map(|(q, m)| {
                        if keep(p, q + 1) {
                            m.clone()
                        } else {
                            Mat::zeros(f, dims[p][q + 1], dims[p][q])
                        }
                    })
                    .collect()
            })
            .collect();
        let trunc = Some(self.trunc.map_or(n, |t| t.min(n)));
        DoubleComplex {
            field: f.clone(),
            dims,
            dh,
            dv,
            trunc,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::Rationals;

    fn one_by_one(q: &Rationals, a: i64) -> Mat<Rationals> {
        Mat::from_i64_rows(q, &[&[a]])
    }

    #[test]
    fn single_entry() {
        let q = Rationals;
        let dc = DoubleComplex::new(&q, vec![vec![1]], vec![], vec![vec![]], None).unwrap();
        let tot = dc.total_complex().unwrap();
        assert_eq!(tot.betti(0..=0).unwrap(), vec![1]);
    }

    #[test]
    fn horizontal_iso_is_acyclic() {
        let q = Rationals;
        let dc = DoubleComplex::new(&q, vec![vec![1], vec![1]], vec![vec![one_by_one(&q, 1)]], vec![vec![], vec![]], None)
            .unwrap();
        let tot = dc.total_complex().unwrap();
        assert_eq!(tot.betti(0..=1).unwrap(), vec![0, 0]);
    }

    #[test]
    fn square_of_identities() {
        // D^0 = (1, 1)ᵀ and D^1 = (−1, 1) both have rank 1, so Tot is acyclic.
        let q = Rationals;
        let id = one_by_one(&q, 1);
        let dc = DoubleComplex::new(
            &q,
            vec![vec![1, 1], vec![1, 1]],
            vec![vec![id.clone(), id.clone()]],
            vec![vec![id.clone()], vec![id.clone()]],
            None,
        )
        .unwrap();
        let tot = dc.total_complex().unwrap();
        assert_eq!(tot.betti(0..=2).unwrap(), vec![0, 0, 0]);
        assert_eq!(dc.euler_characteristic(), tot.euler_characteristic());
    }

    #[test]
    fn square_with_zero_maps_into_corner() {
        // Only the maps out of (0,0) are nonzero: D^0 has rank 1 and D^1 = 0,
        // so H = (0, 1, 1).
        let q = Rationals;
        let id = one_by_one(&q, 1);
        let zero = one_by_one(&q, 0);
        let dc = DoubleComplex::new(
            &q,
            vec![vec![1, 1], vec![1, 1]],
            vec![vec![id.clone(), zero.clone()]],
            vec![vec![id.clone()], vec![zero.clone()]],
            None,
        )
        .unwrap();
        assert_eq!(dc.total_complex().unwrap().betti(0..=2).unwrap(), vec![0, 1, 1]);
    }

    #[test]
    fn rejects_noncommuting() {
        let q = Rationals;
        let id = one_by_one(&q, 1);
        let zero = one_by_one(&q, 0);
        let err = DoubleComplex::new(
            &q,
            vec![vec![1, 1], vec![1, 1]],
            vec![vec![id.clone(), id.clone()]],
            vec![vec![id.clone()], vec![zero]],
            None,
        )
        .unwrap_err();
        assert!(matches!(err, Error::InvariantViolation { .. }));
    }
}
