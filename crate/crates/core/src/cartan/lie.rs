use crate::error::{Error, Result};
use crate::exactalg::sparse::{self, SVec};
use crate::exactalg::{Field, Mat};

/// A finite-dimensional Lie algebra given by structure constants
/// `[ξ_a, ξ_b] = Σ_c c^c_{ab} ξ_c`.
#[derive(Clone, Debug, PartialEq)]
pub struct LieAlgebraData<F: Field> {
    field: F,
    labels: Vec<String>,
    /// `brackets[a][b]` is `[ξ_a, ξ_b]` as a sparse vector over the basis.
    brackets: Vec<Vec<SVec<F::Elem>>>,
}

impl<F: Field> LieAlgebraData<F> {
    /// Builds from sparse entries `(a, b, c, c^c_{ab})`. Repeated entries are
    /// summed. Antisymmetry and the Jacobi identity are verified.
    pub fn new(field: &F, labels: Vec<String>, entries: &[(usize, usize, usize, F::Elem)]) -> Result<Self> {
        let k = labels.len();
        let mut dense = vec![vec![vec![field.zero(); k]; k]; k];
        for (i, (a, b, c, v)) in entries.iter().enumerate() {
            if *a >= k || *b >= k || *c >= k {
                return Err(Error::DimensionMismatch(format!("structure constant {i} indexes outside dim {k}")));
            }
            dense[*a][*b][*c] = field.add(&dense[*a][*b][*c], v);
        }
        let brackets = dense
            .iter()
            .map(|row| row.iter().map(|v| sparse::from_dense(field, v)).collect())
            .collect();
        let g = LieAlgebraData {
            field: field.clone(),
            labels,
            brackets,
        };
        g.check()?;
        Ok(g)
    }

    pub fn abelian(field: &F, k: usize) -> Self {
        LieAlgebraData {
            field: field.clone(),
            labels: (1..=k).map(|i| format!("ξ{i}")).collect(),
            brackets: vec![vec![Vec::new(); k]; k],
        }
    }

    /// `su(2)`: `[ξ_1, ξ_2] = ξ_3` and cyclic.
    pub fn su2(field: &F) -> Self {
        let one = field.one();
        let m = field.neg(&one);
        let entries = [
            (0, 1, 2, one.clone()),
            (1, 0, 2, m.clone()),
            (1, 2, 0, one.clone()),
            (2, 1, 0, m.clone()),
            (2, 0, 1, one),
            (0, 2, 1, m),
        ];
        LieAlgebraData::new(field, vec!["ξ1".into(), "ξ2".into(), "ξ3".into()], &entries).expect("su(2) is a Lie algebra")
    }

    fn check(&self) -> Result<()> {
        let f = &self.field;
        let k = self.dim();
        for a in 0..k {
            for b in 0..k {
                let sum = sparse::axpy(f, &self.brackets[a][b], &f.one(), &self.brackets[b][a]);
                if !sum.is_empty() {
                    return Err(Error::invariant(format!("lie/{a}/{b}"), "structure constants are not antisymmetric"));
                }
            }
        }
        for a in 0..k {
            for b in 0..k {
                for c in 0..k {
                    let mut acc = self.bracket_vec(&self.brackets[a][b], &[(c, f.one())]);
                    acc = sparse::axpy(f, &acc, &f.one(), &self.bracket_vec(&self.brackets[b][c], &[(a, f.one())]));
                    acc = sparse::axpy(f, &acc, &f.one(), &self.bracket_vec(&self.brackets[c][a], &[(b, f.one())]));
                    if !acc.is_empty() {
                        return Err(Error::invariant(format!("lie/{a}/{b}/{c}"), "Jacobi identity fails"));
                    }
                }
            }
        }
        Ok(())
    }

    fn bracket_vec(&self, x: &[(usize, F::Elem)], y: &[(usize, F::Elem)]) -> SVec<F::Elem> {
        let f = &self.field;
        let mut out = Vec::new();
        for (a, xa) in x {
            for (b, yb) in y {
                out = sparse::axpy(f, &out, &f.mul(xa, yb), &self.brackets[*a][*b]);
            }
        }
        out
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// `c^c_{ab}`.
    pub fn constant(&self, a: usize, b: usize, c: usize) -> F::Elem {
        self.brackets[a][b]
            .iter()
            .find(|(i, _)| *i == c)
            .map_or_else(|| self.field.zero(), |(_, v)| v.clone())
    }

    pub fn bracket(&self, a: usize, b: usize) -> &[(usize, F::Elem)] {
        &self.brackets[a][b]
    }

    pub fn is_abelian(&self) -> bool {
        self.brackets.iter().flatten().all(|v| v.is_empty())
    }

    /// The adjoint action `ad(ξ_a)` on `g`.
    pub fn ad(&self, a: usize) -> Mat<F> {
        Mat::from_sparse_columns(&self.field, self.dim(), &self.brackets[a])
    }

    /// The coadjoint action on `g∨` in the dual basis `u_b`:
    /// `ad*_a u_b = −Σ_c c^b_{ac} u_c`.
    pub fn coadjoint(&self, a: usize) -> Mat<F> {
        self.ad(a).transpose().neg()
    }

    /// `Σ_c c^c_{ab} X_c` for a family of operators indexed by the basis.
    pub(crate) fn combine_bracket(&self, a: usize, b: usize, ops: &[Mat<F>]) -> Result<Mat<F>> {
        let (r, c) = ops.first().map_or((0, 0), Mat::shape);
        let mut out = Mat::zeros(&self.field, r, c);
        for (i, v) in self.bracket(a, b) {
            out = out.combine(&ops[*i], v)?;
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::Rationals;

    #[test]
    fn rejects_non_antisymmetric() {
        let err = LieAlgebraData::new(&Rationals, vec!["a".into(), "b".into()], &[(0, 1, 0, Rationals.one())]).unwrap_err();
        assert!(matches!(err, Error::InvariantViolation { .. }));
    }

    #[test]
    fn rejects_jacobi_failure() {
        // [a,b] = c, [b,c] = a, [c,a] = c fails Jacobi.
        let q = Rationals;
        let e = |a, b, c, v: i64| [(a, b, c, q.from_i64(v)), (b, a, c, q.from_i64(-v))];
        let mut entries = Vec::new();
        entries.extend(e(0, 1, 2, 1));
        entries.extend(e(1, 2, 0, 1));
        entries.extend(e(2, 0, 2, 1));
        let err = LieAlgebraData::new(&q, vec!["a".into(), "b".into(), "c".into()], &entries).unwrap_err();
        assert!(matches!(err, Error::InvariantViolation { .. }));
    }

    #[test]
    fn su2_coadjoint_is_antisymmetric() {
        let g = LieAlgebraData::su2(&Rationals);
        for a in 0..3 {
            let m = g.coadjoint(a);
            assert_eq!(m.transpose(), m.neg());
        }
        assert!(!g.is_abelian());
        assert!(LieAlgebraData::abelian(&Rationals, 2).is_abelian());
    }
}
