//! The Cartan model for a compact connected group presented by its Lie
//! algebra acting on a finite-dimensional g-DGA, with the comparisons to a
//! maximal torus and to a subgroup.

mod complex;
mod gdga;
mod lie;
mod poly;
mod weyl;

pub use complex::{cartan_cohomology, cartan_e1, CartanComplex, CartanE1};
pub use gdga::{invariants_subalgebra, validate_gdga, CalculusFailure, Gdga, GdgaReport};
pub use lie::LieAlgebraData;
pub use poly::{check_matrix_group, invariant_polynomials, monomials, multiply_by_variable, sym_derivation, sym_power, MonomialBasis};
pub use weyl::{restriction_check, torus_weyl_check, RestrictionReport, WeylAction, WeylReport, WeylRow};

use crate::error::{Error, Result};
use crate::exactalg::sparse::SVec;
use crate::exactalg::{Field, Mat, Span};

/// A basis of a subspace, with coordinates of members in that basis.
#[derive(Clone, Debug)]
pub(crate) struct SubspaceBasis<F: Field> {
    span: Span<F>,
    vectors: Vec<SVec<F::Elem>>,
}

impl<F: Field> SubspaceBasis<F> {
    /// `vectors` must be linearly independent.
    pub fn new(field: &F, ambient: usize, vectors: Vec<SVec<F::Elem>>) -> Self {
        let mut span = Span::new(field, ambient);
        for v in &vectors {
            let grew = span.insert(v);
            debug_assert!(grew, "basis vectors are dependent");
        }
        SubspaceBasis { span, vectors }
    }

    /// The whole ambient space with its standard basis.
    pub fn full(field: &F, ambient: usize) -> Self {
        let vectors = (0..ambient).map(|i| vec![(i, field.one())]).collect();
        SubspaceBasis::new(field, ambient, vectors)
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn vectors(&self) -> &[SVec<F::Elem>] {
        &self.vectors
    }

    pub fn coords(&self, v: &[(usize, F::Elem)]) -> Option<SVec<F::Elem>> {
        self.span.coords(v)
    }

    /// The matrix of `op` from this subspace to `target`, or
    /// `NotClosedUnderOperators` naming `what`.
    pub fn restrict(&self, op: &Mat<F>, target: &SubspaceBasis<F>, what: impl Fn() -> String) -> Result<Mat<F>> {
        let field = op.field();
        let mut cols = Vec::with_capacity(self.len());
        for (j, v) in self.vectors.iter().enumerate() {
            let image = op.apply_sparse(v);
            let c = target
                .coords(&image)
                .ok_or_else(|| Error::NotClosedUnderOperators(format!("{} on basis vector {j}", what())))?;
            cols.push(c);
        }
        Ok(Mat::from_sparse_columns(field, target.len(), &cols))
    }
}
