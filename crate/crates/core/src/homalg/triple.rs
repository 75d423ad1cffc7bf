use crate::error::{Error, Result};
use crate::exactalg::{Field, Mat};

use super::double::DoubleComplex;

/// Which adjacent pair of indices is totalized by [`TripleComplex::collapse`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Collapse {
    /// `(a, b, c) ↦ (a + b, c)`.
    Leading,
    /// `(a, b, c) ↦ (a, b + c)`.
    Trailing,
}

/// A first-quadrant triple complex on the box `[0, A] × [0, B] × [0, C]`
/// with three pairwise commuting differentials, each squaring to zero.
///
/// Totalizing either pair first gives the total differential
/// `d₂ + (−1)^c d₁ + (−1)^{b+c} d₀`.
#[derive(Clone, Debug)]
pub struct TripleComplex<F: Field> {
    field: F,
    extent: [usize; 3],
    dims: Vec<usize>,
    /// `diffs[axis][flat]`, `None` on the upper face of that axis.
    diffs: [Vec<Option<Mat<F>>>; 3],
    trunc: Option<usize>,
}

fn step(idx: [usize; 3], axis: usize) -> [usize; 3] {
    let mut next = idx;
    next[axis] += 1;
    next
}

impl<F: Field> TripleComplex<F> {
    /// `extent[k]` is the largest index along axis `k`. `dim` gives block
    /// dimensions and `diff(axis, idx)` the differential leaving `idx`
    /// along `axis` (only called when the target exists).
    pub fn from_fn(
        field: &F,
        extent: [usize; 3],
        trunc: Option<usize>,
        dim: impl Fn([usize; 3]) -> usize,
        mut diff: impl FnMut(usize, [usize; 3]) -> Mat<F>,
    ) -> Result<Self> {
        let total = (extent[0] + 1) * (extent[1] + 1) * (extent[2] + 1);
        let mut tc = TripleComplex {
            field: field.clone(),
            extent,
            dims: vec![0; total],
            diffs: [vec![None; total], vec![None; total], vec![None; total]],
            trunc,
        };
        for idx in tc.indices() {
            let k = tc.flat(idx);
            tc.dims[k] = dim(idx);
        }
        for idx in tc.indices() {
            let k = tc.flat(idx);
            for axis in 0..3 {
                if idx[axis] < extent[axis] {
                    tc.diffs[axis][k] = Some(diff(axis, idx));
                }
            }
        }
        tc.validate()?;
        Ok(tc)
    }

    fn flat(&self, idx: [usize; 3]) -> usize {
        let [_, b, c] = self.extent;
        (idx[0] * (b + 1) + idx[1]) * (c + 1) + idx[2]
    }

    /// All multi-indices in lexicographic order.
    pub fn indices(&self) -> Vec<[usize; 3]> {
        let [a, b, c] = self.extent;
        let mut out = Vec::with_capacity((a + 1) * (b + 1) * (c + 1));
        for i in 0..=a {
            for j in 0..=b {
                for k in 0..=c {
                    out.push([i, j, k]);
                }
            }
        }
        out
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn extent(&self) -> [usize; 3] {
        self.extent
    }

    pub fn trunc(&self) -> Option<usize> {
        self.trunc
    }

    pub fn dim(&self, idx: [usize; 3]) -> usize {
        if (0..3).any(|k| idx[k] > self.extent[k]) {
            return 0;
        }
        self.dims[self.flat(idx)]
    }

    /// Differential leaving `idx` along `axis`, if its target is in the box.
    pub fn diff(&self, axis: usize, idx: [usize; 3]) -> Option<&Mat<F>> {
        self.diffs[axis][self.flat(idx)].as_ref()
    }

    fn validate(&self) -> Result<()> {
        for idx in self.indices() {
            for axis in 0..3 {
                if let Some(d) = self.diff(axis, idx) {
                    let expected = (self.dim(step(idx, axis)), self.dim(idx));
                    if d.shape() != expected {
                        return Err(Error::DimensionMismatch(format!(
                            "differential along axis {axis} at {idx:?} has shape {:?}, expected {expected:?}",
                            d.shape()
                        )));
                    }
                }
            }
        }
        for idx in self.indices() {
            let loc = || format!("triple index {idx:?}");
            for axis in 0..3 {
                let Some(first) = self.diff(axis, idx) else { continue };
                if let Some(second) = self.diff(axis, step(idx, axis)) {
                    if !second.mul(first)?.is_zero() {
                        return Err(Error::invariant(loc(), format!("d{axis}² ≠ 0")));
                    }
                }
                for other in axis + 1..3 {
                    let Some(d_other) = self.diff(other, idx) else { continue };
                    let lhs = self.diff(other, step(idx, axis)).map(|m| m.mul(first)).transpose()?;
                    let rhs = self.diff(axis, step(idx, other)).map(|m| m.mul(d_other)).transpose()?;
                    if lhs != rhs {
                        return Err(Error::invariant(loc(), format!("d{axis} and d{other} do not commute")));
                    }
                }
            }
        }
        Ok(())
    }

    /// Reorders the axes: axis `k` of the result is axis `perm[k]` of `self`.
    pub fn permute(&self, perm: [usize; 3]) -> Result<TripleComplex<F>> {
        let mut seen = [false; 3];
        for &k in &perm {
            if k > 2 || std::mem::replace(&mut seen[k], true) {
                return Err(Error::DimensionMismatch(format!("{perm:?} is not a permutation")));
            }
        }
        let extent = [self.extent[perm[0]], self.extent[perm[1]], self.extent[perm[2]]];
        let source = |idx: [usize; 3]| {
            let mut s = [0; 3];
            for k in 0..3 {
                s[perm[k]] = idx[k];
            }
            s
        };
        TripleComplex::from_fn(
            &self.field,
            extent,
            self.trunc,
            |idx| self.dim(source(idx)),
            |axis, idx| self.diff(perm[axis], source(idx)).cloned().expect("target inside box"),
        )
    }

    /// Totalizes one adjacent pair, keeping the stored-commuting form of
    /// the remaining pair. Blocks of a collapsed degree are ordered by the
    /// first index of the pair.
    pub fn collapse(&self, how: Collapse) -> Result<DoubleComplex<F>> {
        let f = &self.field;
        let [ea, eb, ec] = self.extent;
        let sign = |k: usize| if k.is_multiple_of(2) { f.one() } else { f.from_i64(-1) };
        match how {
            Collapse::Leading => {
                // (m, c) with m = a + b.
                let blocks = |m: usize| -> Vec<(usize, usize)> {
                    (m.saturating_sub(eb)..=m.min(ea)).filter(|a| *a <= m).map(|a| (a, m - a)).collect()
                };
                let dims: Vec<Vec<usize>> = (0..=ea + eb)
                    .map(|m| (0..=ec).map(|c| blocks(m).iter().map(|&(a, b)| self.dim([a, b, c])).sum()).collect())
                    .collect();
                let offsets = |m: usize, c: usize| -> Vec<((usize, usize), usize)> {
                    let mut off = 0;
                    blocks(m)
                        .into_iter()
                        .map(|ab| {
                            let o = off;
                            off += self.dim([ab.0, ab.1, c]);
                            (ab, o)
                        })
                        .collect()
                };
                DoubleComplex::from_fn(
                    f,
                    dims.clone(),
                    self.trunc,
                    |m, c| {
                        let src = offsets(m, c);
                        let dst = offsets(m + 1, c);
                        let find = |a: usize, b: usize| dst.iter().find(|(ab, _)| *ab == (a, b)).map(|(_, o)| *o);
                        let mut t = Vec::new();
                        for &((a, b), o) in &src {
                            if let (Some(d), Some(r)) = (self.diff(1, [a, b, c]), find(a, b + 1)) {
                                d.push_block(r, o, &f.one(), &mut t);
                            }
                            if let (Some(d), Some(r)) = (self.diff(0, [a, b, c]), find(a + 1, b)) {
                                d.push_block(r, o, &sign(b), &mut t);
                            }
                        }
                        Mat::from_triplets(f, dims[m + 1][c], dims[m][c], t)
                    },
                    |m, c| {
                        let src = offsets(m, c);
                        let dst = offsets(m, c + 1);
                        let mut t = Vec::new();
                        for (&((a, b), o), &(_, r)) in src.iter().zip(&dst) {
                            if let Some(d) = self.diff(2, [a, b, c]) {
                                d.push_block(r, o, &f.one(), &mut t);
                            }
                        }
                        Mat::from_triplets(f, dims[m][c + 1], dims[m][c], t)
                    },
                )
            }
            Collapse::Trailing => {
                // (a, m) with m = b + c.
                let blocks = |m: usize| -> Vec<(usize, usize)> {
                    (m.saturating_sub(ec)..=m.min(eb)).filter(|b| *b <= m).map(|b| (b, m - b)).collect()
                };
                let dims: Vec<Vec<usize>> = (0..=ea)
                    .map(|a| (0..=eb + ec).map(|m| blocks(m).iter().map(|&(b, c)| self.dim([a, b, c])).sum()).collect())
                    .collect();
                let offsets = |a: usize, m: usize| -> Vec<((usize, usize), usize)> {
                    let mut off = 0;
                    blocks(m)
                        .into_iter()
                        .map(|bc| {
                            let o = off;
                            off += self.dim([a, bc.0, bc.1]);
                            (bc, o)
                        })
                        .collect()
                };
                DoubleComplex::from_fn(
                    f,
                    dims.clone(),
                    self.trunc,
                    |a, m| {
                        let src = offsets(a, m);
                        let dst = offsets(a + 1, m);
                        let mut t = Vec::new();
                        for (&((b, c), o), &(_, r)) in src.iter().zip(&dst) {
                            if let Some(d) = self.diff(0, [a, b, c]) {
                                d.push_block(r, o, &f.one(), &mut t);
                            }
                        }
                        Mat::from_triplets(f, dims[a + 1][m], dims[a][m], t)
                    },
                    |a, m| {
                        let src = offsets(a, m);
                        let dst = offsets(a, m + 1);
                        let find = |b: usize, c: usize| dst.iter().find(|(bc, _)| *bc == (b, c)).map(|(_, o)| *o);
                        let mut t = Vec::new();
                        for &((b, c), o) in &src {
                            if let (Some(d), Some(r)) = (self.diff(2, [a, b, c]), find(b, c + 1)) {
                                d.push_block(r, o, &f.one(), &mut t);
                            }
                            if let (Some(d), Some(r)) = (self.diff(1, [a, b, c]), find(b + 1, c)) {
                                d.push_block(r, o, &sign(c), &mut t);
                            }
                        }
                        Mat::from_triplets(f, dims[a][m + 1], dims[a][m], t)
                    },
                )
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::Rationals;

    fn cube(q: &Rationals, extent: [usize; 3], iso_axis: Option<usize>) -> TripleComplex<Rationals> {
        TripleComplex::from_fn(
            q,
            extent,
            None,
            |_| 1,
            |axis, _| if Some(axis) == iso_axis { Mat::identity(q, 1) } else { Mat::zeros(q, 1, 1) },
        )
        .unwrap()
    }

    #[test]
    fn concentrated_at_origin() {
        let q = Rationals;
        let tc = cube(&q, [0, 0, 0], None);
        for how in [Collapse::Leading, Collapse::Trailing] {
            let dc = tc.collapse(how).unwrap();
            assert_eq!((dc.pmax(), dc.qmax()), (0, 0));
            assert_eq!(dc.dim(0, 0), 1);
        }
    }

    #[test]
    fn identity_along_collapsed_pair_is_acyclic() {
        let q = Rationals;
        let tc = cube(&q, [0, 1, 0], Some(1));
        let dc = tc.collapse(Collapse::Leading).unwrap();
        assert_eq!(dc.total_complex().unwrap().betti(0..=1).unwrap(), vec![0, 0]);
    }

    #[test]
    fn collapse_orders_agree_on_cube() {
        let q = Rationals;
        for axis in [None, Some(0), Some(1), Some(2)] {
            let tc = cube(&q, [1, 1, 1], axis);
            let lead = tc.collapse(Collapse::Leading).unwrap().total_complex().unwrap();
            let trail = tc.collapse(Collapse::Trailing).unwrap().total_complex().unwrap();
            assert_eq!(lead.betti(0..=3).unwrap(), trail.betti(0..=3).unwrap());
        }
    }

    #[test]
    fn permute_roundtrip() {
        let q = Rationals;
        let tc = cube(&q, [1, 2, 0], Some(0));
        let p = tc.permute([2, 0, 1]).unwrap();
        assert_eq!(p.extent(), [0, 1, 2]);
        assert!(p.diff(1, [0, 0, 0]).unwrap() == &Mat::identity(&q, 1));
    }

    #[test]
    fn rejects_noncommuting_axes() {
        let q = Rationals;
        let err = TripleComplex::from_fn(
            &q,
            [1, 1, 0],
            None,
            |_| 1,
            |axis, idx| if axis == 0 && idx[1] == 0 { Mat::identity(&q, 1) } else if axis == 1 { Mat::identity(&q, 1) } else { Mat::zeros(&q, 1, 1) },
        )
        .unwrap_err();
        assert!(matches!(err, Error::InvariantViolation { .. }));
    }
}
