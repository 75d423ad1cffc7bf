use crate::error::{Error, Result};
use crate::exactalg::{Field, Mat};
use crate::groupcoh::GModule;
use crate::stackact::FiniteGroup;

/// A bounded complex of modules `M_0 → M_1 → ⋯ → M_m` with equivariant
/// differentials.
#[derive(Clone, Debug)]
pub struct CoefficientComplex<F: Field> {
    modules: Vec<GModule<F>>,
    diffs: Vec<Mat<F>>,
}

impl<F: Field> CoefficientComplex<F> {
    /// `diffs[c] : M_c → M_{c+1}`.
    pub fn new(modules: Vec<GModule<F>>, diffs: Vec<Mat<F>>) -> Result<Self> {
        if modules.is_empty() {
            return Err(Error::DimensionMismatch("a coefficient complex needs at least one module".into()));
        }
        if diffs.len() + 1 != modules.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} modules need {} differentials, got {}",
                modules.len(),
                modules.len() - 1,
                diffs.len()
            )));
        }
        let group = modules[0].group();
        if modules.iter().any(|m| m.group() != group) {
            return Err(Error::DimensionMismatch("modules are over different groups".into()));
        }
        for (c, d) in diffs.iter().enumerate() {
            if d.shape() != (modules[c + 1].dim(), modules[c].dim()) {
                return Err(Error::DimensionMismatch(format!(
                    "differential {c} has shape {:?}, expected {:?}",
                    d.shape(),
                    (modules[c + 1].dim(), modules[c].dim())
                )));
            }
            if !modules[c].is_equivariant_map(&modules[c + 1], d)? {
                return Err(Error::NonEquivariantCoefficients(format!("differential {c}")));
            }
        }
        for c in 1..diffs.len() {
            if !diffs[c].mul(&diffs[c - 1])?.is_zero() {
                return Err(Error::invariant(format!("coefficients/{c}"), "consecutive differentials compose to a nonzero map"));
            }
        }
        Ok(CoefficientComplex { modules, diffs })
    }

    pub fn single(module: GModule<F>) -> Self {
        CoefficientComplex {
            modules: vec![module],
            diffs: Vec::new(),
        }
    }

    pub fn field(&self) -> &F {
        self.modules[0].field()
    }

    pub fn group(&self) -> &FiniteGroup {
        self.modules[0].group()
    }

    /// Index of the last module.
    pub fn top(&self) -> usize {
        self.modules.len() - 1
    }

    pub fn module(&self, c: usize) -> &GModule<F> {
        &self.modules[c]
    }

    pub fn modules(&self) -> &[GModule<F>] {
        &self.modules
    }

    pub fn diff(&self, c: usize) -> &Mat<F> {
        &self.diffs[c]
    }
}
