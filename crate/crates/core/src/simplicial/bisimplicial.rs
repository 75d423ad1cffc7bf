use crate::error::{Error, Result};
use crate::exactalg::{Field, Mat};
use crate::homalg::DoubleComplex;

use super::coefficients::Coefficients;
use super::semi::{alternating_coboundary, Level, SemiSimplicialSet};

/// The cells of bidegree `(p, n)` of a bisemi-simplicial set.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BiLevel {
    pub ids: Vec<Vec<usize>>,
    /// `hfaces[i][k]`: `∂^H_i` into bidegree `(p − 1, n)`.
    pub hfaces: Vec<Vec<usize>>,
    /// `vfaces[j][k]`: `∂^V_j` into bidegree `(p, n − 1)`.
    pub vfaces: Vec<Vec<usize>>,
    /// Optional group labels on horizontal faces.
    pub hlabels: Option<Vec<Vec<usize>>>,
}

impl BiLevel {
    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }
}

/// A finite bisemi-simplicial set on the rectangle `[0, P] × [0, Q]`,
/// optionally cut to the triangle `p + n ≤ bound`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BiSemiSimplicialSet {
    cells: Vec<Vec<BiLevel>>,
    bound: Option<usize>,
    truncated: bool,
}

impl BiSemiSimplicialSet {
    /// `cells[p][n]`. Bidegrees outside the bound must be empty. All
    /// horizontal, vertical and mixed identities are checked.
    pub fn new(cells: Vec<Vec<BiLevel>>, bound: Option<usize>, truncated: bool) -> Result<Self> {
        let b = BiSemiSimplicialSet { cells, bound, truncated };
        b.check()?;
        Ok(b)
    }

    /// The external product: `cells[p][n] = a_p × b_n`, indexed `k_a·|b_n| + k_b`.
    /// Horizontal labels come from `a`.
    pub fn product(a: &SemiSimplicialSet, b: &SemiSimplicialSet, bound: Option<usize>) -> Result<Self> {
        let mut cells = Vec::with_capacity(a.top() + 1);
        for p in 0..=a.top() {
            let mut row = Vec::with_capacity(b.top() + 1);
            for n in 0..=b.top() {
                if bound.is_some_and(|m| p + n > m) {
                    row.push(empty_bilevel(p, n));
                    continue;
                }
                let (la, lb) = (a.level(p), b.level(n));
                let nb = lb.len();
                let ids = la
                    .ids
                    .iter()
                    .flat_map(|x| lb.ids.iter().map(move |y| [x.as_slice(), y.as_slice()].concat()))
                    .collect();
                let hfaces = la
                    .faces
                    .iter()
                    .map(|f| (0..la.len() * nb).map(|k| f[k / nb] * nb + k % nb).collect())
                    .collect();
                let nb_low = if n > 0 { b.len(n - 1) } else { 0 };
                let vfaces = lb
                    .faces
                    .iter()
                    .map(|f| (0..la.len() * nb).map(|k| (k / nb) * nb_low + f[k % nb]).collect())
                    .collect();
                let hlabels = la
                    .labels
                    .as_ref()
                    .map(|ls| ls.iter().map(|l| (0..la.len() * nb).map(|k| l[k / nb]).collect()).collect());
                row.push(BiLevel {
                    ids,
                    hfaces,
                    vfaces,
                    hlabels,
                });
            }
            cells.push(row);
        }
        BiSemiSimplicialSet::new(cells, bound, a.is_truncated() || b.is_truncated())
    }

    pub fn pmax(&self) -> usize {
        self.cells.len() - 1
    }

    pub fn nmax(&self) -> usize {
        self.cells[0].len() - 1
    }

    pub fn bound(&self) -> Option<usize> {
        self.bound
    }

    pub fn is_truncated(&self) -> bool {
        self.truncated
    }

    pub fn cells(&self, p: usize, n: usize) -> &BiLevel {
        &self.cells[p][n]
    }

    pub fn counts(&self) -> Vec<Vec<usize>> {
        self.cells.iter().map(|r| r.iter().map(BiLevel::len).collect()).collect()
    }

    fn in_range(&self, p: usize, n: usize) -> bool {
        self.bound.is_none_or(|m| p + n <= m)
    }

    fn check(&self) -> Result<()> {
        if self.cells.is_empty() || self.cells[0].is_empty() {
            return Err(Error::DimensionMismatch("empty bisemi-simplicial set".into()));
        }
        let nn = self.cells[0].len();
        if self.cells.iter().any(|r| r.len() != nn) {
            return Err(Error::DimensionMismatch("ragged bidegree rectangle".into()));
        }
        let fail = |msg: String| Err(Error::SimplicialIdentityFailure(msg));
        for p in 0..self.cells.len() {
            for n in 0..nn {
                let c = &self.cells[p][n];
                if !self.in_range(p, n) && !c.is_empty() {
                    return fail(format!("bidegree ({p},{n}) lies outside the bound but has cells"));
                }
                let hcount = if p == 0 { 0 } else { p + 1 };
                let vcount = if n == 0 { 0 } else { n + 1 };
                if c.hfaces.len() != hcount || c.vfaces.len() != vcount {
                    return fail(format!("bidegree ({p},{n}) has the wrong number of face maps"));
                }
                if c.hfaces.iter().any(|f| f.len() != c.len() || f.iter().any(|&k| k >= self.cells[p - 1][n].len())) {
                    return fail(format!("horizontal faces at ({p},{n}) are malformed"));
                }
                if c.vfaces.iter().any(|f| f.len() != c.len() || f.iter().any(|&k| k >= self.cells[p][n - 1].len())) {
                    return fail(format!("vertical faces at ({p},{n}) are malformed"));
                }
                if let Some(l) = &c.hlabels {
                    if l.len() != hcount || l.iter().any(|x| x.len() != c.len()) {
                        return Err(Error::DimensionMismatch(format!("labels at ({p},{n}) are malformed")));
                    }
                }
            }
        }
        for p in 0..self.cells.len() {
            for n in 0..nn {
                let c = &self.cells[p][n];
                for k in 0..c.len() {
                    if p >= 2 {
                        let lo = &self.cells[p - 1][n];
                        for j in 1..=p {
                            for i in 0..j {
                                if lo.hfaces[i][c.hfaces[j][k]] != lo.hfaces[j - 1][c.hfaces[i][k]] {
                                    return fail(format!("horizontal identity ∂_{i}∂_{j} fails at ({p},{n}) cell {k}"));
                                }
                            }
                        }
                    }
                    if n >= 2 {
                        let lo = &self.cells[p][n - 1];
                        for j in 1..=n {
                            for i in 0..j {
                                if lo.vfaces[i][c.vfaces[j][k]] != lo.vfaces[j - 1][c.vfaces[i][k]] {
                                    return fail(format!("vertical identity ∂_{i}∂_{j} fails at ({p},{n}) cell {k}"));
                                }
                            }
                        }
                    }
                    if p >= 1 && n >= 1 {
                        let below = &self.cells[p][n - 1];
                        let left = &self.cells[p - 1][n];
                        for i in 0..=p {
                            for j in 0..=n {
                                if below.hfaces[i][c.vfaces[j][k]] != left.vfaces[j][c.hfaces[i][k]] {
                                    return fail(format!("∂^H_{i} and ∂^V_{j} do not commute at ({p},{n}) cell {k}"));
                                }
                                if let (Some(lc), Some(lb)) = (&c.hlabels, &below.hlabels) {
                                    if lb[i][c.vfaces[j][k]] != lc[i][k] {
                                        return fail(format!("horizontal label {i} changes along ∂^V_{j} at ({p},{n})"));
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Level `n` is bidegree `(n, n)` with `∂_i = ∂^H_i ∘ ∂^V_i`.
    pub fn diagonal(&self) -> Result<SemiSimplicialSet> {
        let top = self.pmax();
        if self.nmax() != top || self.bound.is_some_and(|m| m < 2 * top) {
            return Err(Error::TruncationMismatch {
                horizontal: self.pmax(),
                vertical: self.nmax(),
            });
        }
        let levels = (0..=top)
            .map(|n| {
                let c = &self.cells[n][n];
                let faces = if n == 0 {
                    Vec::new()
                } else {
                    let mid = &self.cells[n][n - 1];
                    (0..=n).map(|i| (0..c.len()).map(|k| mid.hfaces[i][c.vfaces[i][k]]).collect()).collect()
                };
                Level {
                    ids: c.ids.clone(),
                    faces,
                    labels: c.hlabels.clone(),
                }
            })
            .collect();
        SemiSimplicialSet::new(levels, self.truncated)
    }

    /// `d_h : C^{p,n} → C^{p+1,n}`, twisted along labelled faces.
    pub fn horizontal_coboundary<F: Field>(&self, p: usize, n: usize, coeff: &Coefficients<F>) -> Mat<F> {
        let hi = &self.cells[p + 1][n];
        alternating_coboundary(coeff, &hi.hfaces, hi.hlabels.as_deref(), self.cells[p][n].len())
    }

    /// `d_v : C^{p,n} → C^{p,n+1}`.
    pub fn vertical_coboundary<F: Field>(&self, p: usize, n: usize, coeff: &Coefficients<F>) -> Mat<F> {
        let hi = &self.cells[p][n + 1];
        alternating_coboundary(coeff, &hi.vfaces, None, self.cells[p][n].len())
    }

    /// `C^{p,n}` = cochains on the `(p, n)` cells, with `d_h` and `d_v` the
    /// alternating sums over horizontal and vertical faces. A truncated set
    /// yields a double complex truncated at the largest reliable total degree.
    pub fn total_cochains<F: Field>(&self, coeff: &Coefficients<F>) -> Result<DoubleComplex<F>> {
        let (pm, nm) = (self.pmax(), self.nmax());
        let r = coeff.rank();
        let dims = self.cells.iter().map(|row| row.iter().map(|c| c.len() * r).collect()).collect();
        let dc = DoubleComplex::from_fn(
            coeff.field(),
            dims,
            None,
            |p, n| self.horizontal_coboundary(p, n, coeff),
            |p, n| self.vertical_coboundary(p, n, coeff),
        )?;
        if !self.truncated && self.bound.is_none() {
            return Ok(dc);
        }
        let reliable = self.bound.unwrap_or(usize::MAX).min(pm).min(nm);
        Ok(dc.truncated(reliable))
    }
}

pub(crate) fn empty_bilevel(p: usize, n: usize) -> BiLevel {
    BiLevel {
        ids: Vec::new(),
        hfaces: vec![Vec::new(); if p == 0 { 0 } else { p + 1 }],
        vfaces: vec![Vec::new(); if n == 0 { 0 } else { n + 1 }],
        hlabels: None,
    }
}
