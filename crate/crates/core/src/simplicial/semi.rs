use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::exactalg::{Field, Mat};
use crate::homalg::CochainComplex;

use super::coefficients::Coefficients;

/// One level of a semi-simplicial set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Level {
    /// Canonical identifier of each cell.
    pub ids: Vec<Vec<usize>>,
    /// `faces[i][k]` is the index of `∂_i` of cell `k` one level down.
    pub faces: Vec<Vec<usize>>,
    /// Optional group element carried by each face, `labels[i][k]`. Module
    /// coefficients are transported along face `i` by `ρ(label)^{-1}`.
    pub labels: Option<Vec<Vec<usize>>>,
}

impl Level {
    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }
}

/// A finite semi-simplicial set (face maps only) on levels `0..=N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemiSimplicialSet {
    levels: Vec<Level>,
    truncated: bool,
}

impl SemiSimplicialSet {
    /// Checks face counts, index bounds and every identity
    /// `∂_i ∂_j = ∂_{j−1} ∂_i` for `i < j`.
    pub fn new(levels: Vec<Level>, truncated: bool) -> Result<Self> {
        let s = SemiSimplicialSet { levels, truncated };
        s.check_shape()?;
        s.check_face_identities()?;
        Ok(s)
    }

    fn check_shape(&self) -> Result<()> {
        if self.levels.is_empty() {
            return Err(Error::DimensionMismatch("a semi-simplicial set needs level 0".into()));
        }
        for (n, level) in self.levels.iter().enumerate() {
            let expected = if n == 0 { 0 } else { n + 1 };
            if level.faces.len() != expected {
                return Err(Error::SimplicialIdentityFailure(format!(
                    "level {n} has {} face maps, expected {expected}",
                    level.faces.len()
                )));
            }
            for (i, face) in level.faces.iter().enumerate() {
                if face.len() != level.len() || face.iter().any(|&k| k >= self.levels[n - 1].len()) {
                    return Err(Error::SimplicialIdentityFailure(format!("face ∂_{i} on level {n} is malformed")));
                }
            }
            if let Some(labels) = &level.labels {
                if labels.len() != expected || labels.iter().any(|l| l.len() != level.len()) {
                    return Err(Error::DimensionMismatch(format!("face labels on level {n} are malformed")));
                }
            }
        }
        Ok(())
    }

    /// Exhaustive check of `∂_i ∂_j = ∂_{j−1} ∂_i` (`i < j`) on every level.
    pub fn check_face_identities(&self) -> Result<()> {
        for n in 2..self.levels.len() {
            let (hi, lo) = (&self.levels[n], &self.levels[n - 1]);
            for k in 0..hi.len() {
                for j in 1..=n {
                    for i in 0..j {
                        let left = lo.faces[i][hi.faces[j][k]];
                        let right = lo.faces[j - 1][hi.faces[i][k]];
                        if left != right {
                            return Err(Error::SimplicialIdentityFailure(format!(
                                "∂_{i}∂_{j} ≠ ∂_{}∂_{i} on cell {:?} of level {n}",
                                j - 1,
                                hi.ids[k]
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Checks that face labels compose coherently,
    /// `l_{j−1}(∂_i σ)·l_i(σ) = l_i(∂_j σ)·l_j(σ)` for `i < j`, which makes
    /// twisted cochains square to zero.
    pub fn check_label_cocycle(&self, mul: impl Fn(usize, usize) -> usize) -> Result<()> {
        for n in 2..self.levels.len() {
            let (hi, lo) = (&self.levels[n], &self.levels[n - 1]);
            let (Some(lh), Some(ll)) = (&hi.labels, &lo.labels) else { continue };
            for k in 0..hi.len() {
                for j in 1..=n {
                    for i in 0..j {
                        let left = mul(ll[j - 1][hi.faces[i][k]], lh[i][k]);
                        let right = mul(ll[i][hi.faces[j][k]], lh[j][k]);
                        if left != right {
                            return Err(Error::SimplicialIdentityFailure(format!(
                                "face labels are incoherent at ∂_{i}∂_{j} on cell {:?}",
                                hi.ids[k]
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Top level `N`.
    pub fn top(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn is_truncated(&self) -> bool {
        self.truncated
    }

    pub fn level(&self, n: usize) -> &Level {
        &self.levels[n]
    }

    pub fn levels(&self) -> &[Level] {
        &self.levels
    }

    pub fn len(&self, n: usize) -> usize {
        self.levels[n].len()
    }

    pub fn counts(&self) -> Vec<usize> {
        self.levels.iter().map(Level::len).collect()
    }

    pub fn face(&self, n: usize, i: usize, k: usize) -> usize {
        self.levels[n].faces[i][k]
    }

    /// Map from identifier to index on level `n`.
    pub fn index(&self, n: usize) -> HashMap<&[usize], usize> {
        self.levels[n].ids.iter().enumerate().map(|(k, id)| (id.as_slice(), k)).collect()
    }

    /// The first `n + 1` levels.
    pub fn truncate(&self, n: usize) -> SemiSimplicialSet {
        SemiSimplicialSet {
            levels: self.levels[..=n.min(self.top())].to_vec(),
            truncated: self.truncated || n < self.top(),
        }
    }

    /// Cochains with `∂* = Σ (−1)^i ∂_i*`, twisted by the face labels when
    /// the coefficients are a module.
    pub fn cochains<F: Field>(&self, coeff: &Coefficients<F>) -> Result<CochainComplex<F>> {
        let r = coeff.rank();
        let dims: Vec<usize> = self.levels.iter().map(|l| l.len() * r).collect();
        let diffs = (0..self.top()).map(|n| self.coboundary(n, coeff)).collect();
        CochainComplex::new(coeff.field(), dims, diffs, self.truncated).map_err(|e| match e {
            Error::CompositionNonzero(m) => Error::invariant("semi-simplicial cochains", m),
            other => other,
        })
    }

    /// `C^n → C^{n+1}`.
    pub fn coboundary<F: Field>(&self, n: usize, coeff: &Coefficients<F>) -> Mat<F> {
        let hi = &self.levels[n + 1];
        alternating_coboundary(coeff, &hi.faces, hi.labels.as_deref(), self.levels[n].len())
    }
}

/// `Σ (−1)^i ∂_i*` from cochains on the `lower` cells to cochains on the
/// cells whose faces are `faces[i]`, transporting along labelled faces.
pub(crate) fn alternating_coboundary<F: Field>(
    coeff: &Coefficients<F>,
    faces: &[Vec<usize>],
    labels: Option<&[Vec<usize>]>,
    lower: usize,
) -> Mat<F> {
    let f = coeff.field();
    let r = coeff.rank();
    let upper = faces.first().map_or(0, Vec::len);
    let plain = coeff.transport(None);
    let twisted: Vec<Mat<F>> = match (coeff.module(), labels) {
        (Some(m), Some(_)) => (0..m.group().order()).map(|g| coeff.transport(Some(g))).collect(),
        _ => Vec::new(),
    };
    let mut t = Vec::new();
    for (i, face) in faces.iter().enumerate() {
        let sign = if i % 2 == 0 { f.one() } else { f.from_i64(-1) };
        for (k, &src) in face.iter().enumerate() {
            let block = match labels {
                Some(l) if !twisted.is_empty() => &twisted[l[i][k]],
                _ => &plain,
            };
            block.push_block(k * r, src * r, &sign, &mut t);
        }
    }
    Mat::from_triplets(f, upper * r, lower * r, t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::Rationals;

    fn circle() -> SemiSimplicialSet {
        // Two vertices, two edges a: 0 → 1, b: 1 → 0 with ∂_0 = target.
        SemiSimplicialSet::new(
            vec![
                Level {
                    ids: vec![vec![0], vec![1]],
                    faces: vec![],
                    labels: None,
                },
                Level {
                    ids: vec![vec![0], vec![1]],
                    faces: vec![vec![1, 0], vec![0, 1]],
                    labels: None,
                },
            ],
            false,
        )
        .unwrap()
    }

    #[test]
    fn circle_cohomology() {
        let c = circle().cochains(&Coefficients::Field(Rationals)).unwrap();
        assert_eq!(c.betti(0..=1).unwrap(), vec![1, 1]);
    }

    #[test]
    fn detects_broken_identity() {
        let mut levels = vec![
            Level {
                ids: vec![vec![0], vec![1]],
                faces: vec![],
                labels: None,
            },
            Level {
                ids: vec![vec![0]],
                faces: vec![vec![1], vec![0]],
                labels: None,
            },
            Level {
                ids: vec![vec![0]],
                faces: vec![vec![0], vec![0], vec![0]],
                labels: None,
            },
        ];
        assert!(matches!(
            SemiSimplicialSet::new(levels.clone(), true),
            Err(Error::SimplicialIdentityFailure(_))
        ));
        levels.truncate(2);
        assert!(SemiSimplicialSet::new(levels, true).is_ok());
    }
}
