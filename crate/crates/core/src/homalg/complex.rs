use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::exactalg::{cohomology_with_representatives, Field, Mat, Subquotient};

/// A bounded cochain complex `C^0 → C^1 → … → C^N`.
///
/// When `truncated` is set the complex was cut out of a longer one at
/// degree `N`, so `ker(d^N)` is unknown and `H^N` is refused unless the
/// caller explicitly overrides.
pub struct CochainComplex<F: Field> {
    field: F,
    dims: Vec<usize>,
    diffs: Vec<Mat<F>>,
    truncated: bool,
    labels: Option<Vec<Vec<String>>>,
    ranks: Vec<OnceLock<usize>>,
}

impl<F: Field> Clone for CochainComplex<F> {
    fn clone(&self) -> Self {
        CochainComplex {
            field: self.field.clone(),
            dims: self.dims.clone(),
            diffs: self.diffs.clone(),
            truncated: self.truncated,
            labels: self.labels.clone(),
            ranks: self.ranks.clone(),
        }
    }
}

impl<F: Field> std::fmt::Debug for CochainComplex<F> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CochainComplex")
            .field("field", &self.field.name())
            .field("dims", &self.dims)
            .field("truncated", &self.truncated)
            .finish()
    }
}

impl<F: Field> CochainComplex<F> {
    /// `diffs[n]` maps degree `n` to degree `n + 1`; there must be exactly
    /// `dims.len() - 1` of them. `d² = 0` is verified.
    pub fn new(field: &F, dims: Vec<usize>, diffs: Vec<Mat<F>>, truncated: bool) -> Result<Self> {
        if dims.is_empty() || diffs.len() + 1 != dims.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} degrees need {} differentials, got {}",
                dims.len(),
                dims.len().saturating_sub(1),
                diffs.len()
            )));
        }
        for (n, d) in diffs.iter().enumerate() {
            if d.shape() != (dims[n + 1], dims[n]) {
                return Err(Error::DimensionMismatch(format!(
                    "d^{n} has shape {:?}, expected {:?}",
                    d.shape(),
                    (dims[n + 1], dims[n])
                )));
            }
        }
        for n in 1..diffs.len() {
            if !diffs[n].mul(&diffs[n - 1])?.is_zero() {
                return Err(Error::CompositionNonzero(format!("d^{} · d^{} ≠ 0", n, n - 1)));
            }
        }
        let ranks = (0..diffs.len()).map(|_| OnceLock::new()).collect();
        Ok(CochainComplex {
            field: field.clone(),
            dims,
            diffs,
            truncated,
            labels: None,
            ranks,
        })
    }

    pub fn with_labels(mut self, labels: Vec<Vec<String>>) -> Result<Self> {
        if labels.len() != self.dims.len() || labels.iter().zip(&self.dims).any(|(l, d)| l.len() != *d) {
            return Err(Error::DimensionMismatch("basis labels do not match dimensions".into()));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    /// Top degree `N`.
    pub fn top(&self) -> usize {
        self.dims.len() - 1
    }

    pub fn is_truncated(&self) -> bool {
        self.truncated
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self, n: usize) -> usize {
        self.dims.get(n).copied().unwrap_or(0)
    }

    pub fn labels(&self) -> Option<&[Vec<String>]> {
        self.labels.as_deref()
    }

    /// `d^n : C^n → C^{n+1}`, or `None` at and above the top degree.
    pub fn diff(&self, n: usize) -> Option<&Mat<F>> {
        self.diffs.get(n)
    }

    pub fn diffs(&self) -> &[Mat<F>] {
        &self.diffs
    }

    fn rank_of(&self, n: usize) -> usize {
        *self.ranks[n].get_or_init(|| self.diffs[n].rank())
    }

    fn check_degree(&self, n: usize) -> Result<()> {
        if self.truncated && n >= self.top() {
            return Err(Error::TruncationBoundary {
                degree: n,
                trunc: self.top(),
            });
        }
        Ok(())
    }

    /// `dim H^n`. Errors at the truncation boundary.
    pub fn cohomology(&self, n: usize) -> Result<usize> {
        self.check_degree(n)?;
        Ok(self.cohomology_unchecked(n))
    }

    /// `dim H^n` ignoring the truncation boundary: at the top degree of a
    /// truncated complex this is only an upper bound.
    pub fn cohomology_unchecked(&self, n: usize) -> usize {
        if n > self.top() {
            return 0;
        }
        let rank_out = if n < self.diffs.len() { self.rank_of(n) } else { 0 };
        let rank_in = if n > 0 { self.rank_of(n - 1) } else { 0 };
        self.dims[n] - rank_out - rank_in
    }

    /// `H^n` with explicit cocycle representatives.
    pub fn cohomology_representatives(&self, n: usize) -> Result<Subquotient<F>> {
        self.check_degree(n)?;
        let d_out = match self.diffs.get(n) {
            Some(d) => d.clone(),
            None => Mat::zeros(&self.field, 0, self.dim(n)),
        };
        let d_in = if n > 0 {
            self.diffs[n - 1].clone()
        } else {
            Mat::zeros(&self.field, self.dim(0), 0)
        };
        cohomology_with_representatives(&d_out, &d_in)
    }

    /// `dim H^n` for every `n` in `degrees`.
    pub fn betti(&self, degrees: std::ops::RangeInclusive<usize>) -> Result<Vec<usize>> {
        degrees.map(|n| self.cohomology(n)).collect()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.dims
            .iter()
            .enumerate()
            .map(|(n, d)| if n % 2 == 0 { *d as i64 } else { -(*d as i64) })
            .sum()
    }
}
