//! Exact linear algebra over ℚ and prime fields.

mod field;
mod mat;
mod rational;
pub mod sparse;
mod span;

pub use field::{is_prime, Field, PrimeField, Rationals};
pub use mat::Mat;
pub use rational::{ParseRatError, Rat};
pub use span::{Reduction, Span, Subquotient};

use crate::error::{Error, Result};
use sparse::SVec;

/// `dim ker(d_out) − rank(d_in)` for a two-step piece `· --d_in--> V --d_out--> ·`.
pub fn cohomology_dim<F: Field>(d_out: &Mat<F>, d_in: &Mat<F>) -> Result<usize> {
    check_composable(d_out, d_in)?;
    Ok(d_out.ncols() - d_out.rank() - d_in.rank())
}

/// Like [`cohomology_dim`], also returning cocycles spanning a complement
/// of `im(d_in)` inside `ker(d_out)`.
pub fn cohomology_with_representatives<F: Field>(d_out: &Mat<F>, d_in: &Mat<F>) -> Result<Subquotient<F>> {
    check_composable(d_out, d_in)?;
    let field = d_out.field();
    let image: Vec<SVec<F::Elem>> = d_in.columns();
    let kernel = d_out.kernel_sparse();
    Ok(Subquotient::new(field, d_out.ncols(), &image, &kernel))
}

fn check_composable<F: Field>(d_out: &Mat<F>, d_in: &Mat<F>) -> Result<()> {
    if d_out.ncols() != d_in.nrows() {
        return Err(Error::DimensionMismatch(format!(
            "d_out has {} columns but d_in has {} rows",
            d_out.ncols(),
            d_in.nrows()
        )));
    }
    if !d_out.mul(d_in)?.is_zero() {
        return Err(Error::CompositionNonzero("d_out · d_in ≠ 0".into()));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cohomology_dim_examples() {
        let q = Rationals;
        // point complex
        assert_eq!(cohomology_dim(&Mat::zeros(&q, 1, 1), &Mat::zeros(&q, 1, 0)).unwrap(), 1);
        // acyclic
        assert_eq!(cohomology_dim(&Mat::identity(&q, 1), &Mat::zeros(&q, 1, 0)).unwrap(), 0);
        // 0 (1x2) after [[1],[1]]
        let d_in = Mat::from_i64_rows(&q, &[&[1], &[1]]);
        assert_eq!(cohomology_dim(&Mat::zeros(&q, 1, 2), &d_in).unwrap(), 1);
    }

    #[test]
    fn cohomology_dim_errors() {
        let q = Rationals;
        let id = Mat::identity(&q, 1);
        assert!(matches!(cohomology_dim(&id, &id), Err(Error::CompositionNonzero(_))));
        assert!(matches!(
            cohomology_dim(&id, &Mat::zeros(&q, 2, 1)),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn representatives_are_cocycles_outside_image() {
        let q = Rationals;
        let d_in = Mat::from_i64_rows(&q, &[&[1], &[1]]);
        let d_out = Mat::zeros(&q, 1, 2);
        let sq = cohomology_with_representatives(&d_out, &d_in).unwrap();
        assert_eq!(sq.dim(), 1);
        let rep = &sq.representatives()[0];
        assert!(d_out.apply_sparse(rep).is_empty());
        assert!(sq.class_of(&[(0, q.one()), (1, q.one())]).unwrap()[0].is_zero());
    }
}
