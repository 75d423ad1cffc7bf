use crate::error::{Error, Result};
use crate::exactalg::{Field, Mat};
use crate::stackact::FiniteGroup;

/// A finite-dimensional representation `ρ` of a finite group.
#[derive(Clone, Debug)]
pub struct GModule<F: Field> {
    field: F,
    group: FiniteGroup,
    dim: usize,
    rho: Vec<Mat<F>>,
}

impl<F: Field> GModule<F> {
    /// `rho[g]` is the matrix of `g`. Checks `ρ(e) = 1` and `ρ(g)ρ(h) = ρ(gh)`.
    pub fn new(field: &F, group: &FiniteGroup, rho: Vec<Mat<F>>) -> Result<Self> {
        if rho.len() != group.order() {
            return Err(Error::DimensionMismatch(format!(
                "{} matrices given for a group of order {}",
                rho.len(),
                group.order()
            )));
        }
        let dim = rho.first().map_or(0, Mat::nrows);
        if let Some(g) = rho.iter().position(|m| m.shape() != (dim, dim)) {
            return Err(Error::DimensionMismatch(format!("rho/{g} is not {dim}×{dim}")));
        }
        if rho[group.identity()] != Mat::identity(field, dim) {
            return Err(Error::invariant(format!("rho/{}", group.identity()), "identity does not act trivially"));
        }
        for g in 0..group.order() {
            for h in 0..group.order() {
                if rho[g].mul(&rho[h])? != rho[group.mul(g, h)] {
                    return Err(Error::invariant(format!("rho/{g}/{h}"), "ρ(g)ρ(h) ≠ ρ(gh)"));
                }
            }
        }
        Ok(GModule {
            field: field.clone(),
            group: group.clone(),
            dim,
            rho,
        })
    }

    /// `k^dim` with every element acting as the identity.
    pub fn trivial(field: &F, group: &FiniteGroup, dim: usize) -> Self {
        GModule {
            field: field.clone(),
            group: group.clone(),
            dim,
            rho: vec![Mat::identity(field, dim); group.order()],
        }
    }

    /// A one-dimensional module through a character `χ : G → {±1}`.
    pub fn character(field: &F, group: &FiniteGroup, chi: impl Fn(usize) -> i64) -> Result<Self> {
        let rho = (0..group.order()).map(|g| Mat::from_i64_rows(field, &[&[chi(g)]])).collect();
        GModule::new(field, group, rho)
    }

    /// The permutation module of an action on `0..n`, `g·e_x = e_{g·x}`.
    pub fn permutation(field: &F, group: &FiniteGroup, n: usize, act: impl Fn(usize, usize) -> usize) -> Result<Self> {
        let rho = (0..group.order())
            .map(|g| Mat::from_triplets(field, n, n, (0..n).map(|x| (act(g, x), x, field.one()))))
            .collect();
        GModule::new(field, group, rho)
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rho(&self, g: usize) -> &Mat<F> {
        &self.rho[g]
    }

    pub fn matrices(&self) -> &[Mat<F>] {
        &self.rho
    }

    pub fn is_trivial(&self) -> bool {
        let id = Mat::identity(&self.field, self.dim);
        self.rho.iter().all(|m| *m == id)
    }

    /// `ρ(g)^{-1} = ρ(g^{-1})`.
    pub fn rho_inv(&self, g: usize) -> &Mat<F> {
        &self.rho[self.group.inv(g)]
    }

    /// A basis of the fixed vectors, the joint kernel of `ρ(g) − 1`.
    pub fn invariants(&self) -> Vec<Vec<F::Elem>> {
        let id = Mat::identity(&self.field, self.dim);
        let blocks: Vec<Mat<F>> = self.rho.iter().map(|m| m.sub(&id).expect("square")).collect();
        let refs: Vec<&Mat<F>> = blocks.iter().collect();
        Mat::vstack(&self.field, self.dim, &refs).expect("equal widths").kernel_basis()
    }

    /// `V ⊗ W` with the diagonal action.
    pub fn tensor(&self, other: &GModule<F>) -> Result<GModule<F>> {
        if self.group != other.group {
            return Err(Error::DimensionMismatch("tensor product of modules over different groups".into()));
        }
        let rho = self.rho.iter().zip(&other.rho).map(|(a, b)| a.kron(b)).collect();
        Ok(GModule {
            field: self.field.clone(),
            group: self.group.clone(),
            dim: self.dim * other.dim,
            rho,
        })
    }

    /// Whether `m : self → other` commutes with the action.
    pub fn is_equivariant_map(&self, other: &GModule<F>, m: &Mat<F>) -> Result<bool> {
        if m.shape() != (other.dim, self.dim) {
            return Err(Error::DimensionMismatch(format!(
                "map has shape {:?}, expected {:?}",
                m.shape(),
                (other.dim, self.dim)
            )));
        }
        for g in 0..self.group.order() {
            if other.rho[g].mul(m)? != m.mul(&self.rho[g])? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::Rationals;

    #[test]
    fn sign_module_has_no_invariants() {
        let q = Rationals;
        let z2 = FiniteGroup::cyclic(2);
        let sign = GModule::character(&q, &z2, |g| if g == 0 { 1 } else { -1 }).unwrap();
        assert!(sign.invariants().is_empty());
        assert_eq!(GModule::trivial(&q, &z2, 2).invariants().len(), 2);
    }

    #[test]
    fn permutation_module_invariants() {
        let q = Rationals;
        let z3 = FiniteGroup::cyclic(3);
        let m = GModule::permutation(&q, &z3, 3, |g, x| (g + x) % 3).unwrap();
        assert_eq!(m.invariants().len(), 1);
    }

    #[test]
    fn rejects_non_homomorphism() {
        let q = Rationals;
        let z3 = FiniteGroup::cyclic(3);
        let err = GModule::character(&q, &z3, |g| if g == 0 { 1 } else { -1 }).unwrap_err();
        assert!(matches!(err, Error::InvariantViolation { .. }));
    }
}
