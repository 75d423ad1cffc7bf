//! The spectral sequence computed directly from its definition: every entry
//! is the subquotient `Z_r^s / (Z_{r−1}^{s+1} + D Z_{r−1}^{s−r+1})` of the
//! total complex, with `Z_r^s = {x ∈ F^s : Dx ∈ F^{s+r}}`. Slow, but
//! independent of the normal form used by [`super::pages`].

use std::collections::{BTreeMap, HashMap};
use std::ops::Range;

use crate::error::{Error, Result};
use crate::exactalg::sparse::{self, SVec};
use crate::exactalg::{Field, Mat, Subquotient};
use crate::homalg::DoubleComplex;

use super::Filtration;

pub struct ReferencePage<F: Field> {
    pub entries: BTreeMap<(usize, usize), usize>,
    pub differentials: BTreeMap<(usize, usize), Mat<F>>,
}

/// Pages `E_0, …, E_last`.
pub fn reference_pages<F: Field>(dc: &DoubleComplex<F>, filtration: Filtration, last: usize) -> Result<Vec<ReferencePage<F>>> {
    let ctx = Context::new(dc, filtration);
    let mut cache = HashMap::new();
    (0..=last).map(|r| ctx.page(r, &mut cache)).collect()
}

struct Context<'a, F: Field> {
    dc: &'a DoubleComplex<F>,
    field: F,
    filtration: Filtration,
    smax: usize,
    top: usize,
    diffs: Vec<Mat<F>>,
}

type ZKey = (i64, i64, usize);

impl<'a, F: Field> Context<'a, F> {
    fn new(dc: &'a DoubleComplex<F>, filtration: Filtration) -> Self {
        let top = dc.top_degree();
        let smax = match filtration {
            Filtration::ByColumns => dc.pmax(),
            Filtration::ByRows => dc.qmax(),
        };
        Context {
            dc,
            field: dc.field().clone(),
            filtration,
            smax,
            top,
            diffs: (0..=top).map(|n| dc.total_differential(n)).collect(),
        }
    }

    fn level(&self, p: usize, q: usize) -> usize {
        match self.filtration {
            Filtration::ByColumns => p,
            Filtration::ByRows => q,
        }
    }

    /// Coordinates of `F^s Tot^n`. Blocks are laid out by increasing `p`,
    /// so this is a suffix for columns and a prefix for rows.
    fn filtered(&self, n: usize, s: i64) -> Range<usize> {
        let blocks = self.dc.layout(n);
        let total: usize = blocks.iter().map(|b| b.dim).sum();
        let inside: Vec<_> = blocks.iter().filter(|b| self.level(b.p, b.q) as i64 >= s).collect();
        match (inside.first(), inside.last()) {
            (Some(a), Some(b)) => a.offset..b.offset + b.dim,
            _ => match self.filtration {
                Filtration::ByColumns => total..total,
                Filtration::ByRows => 0..0,
            },
        }
    }

    fn complement(&self, n: usize, s: i64) -> Range<usize> {
        let total = self.dc.total_dim(n);
        let f = self.filtered(n, s);
        match self.filtration {
            Filtration::ByColumns => 0..f.start,
            Filtration::ByRows => f.end..total,
        }
    }

    /// `Z_r^{s,n} = {x ∈ F^s Tot^n : Dx ∈ F^{s+r}}`, for `r ≥ −1` and any `s`.
    fn z<'c>(&self, r: i64, s: i64, n: usize, cache: &'c mut HashMap<ZKey, Vec<SVec<F::Elem>>>) -> &'c [SVec<F::Elem>] {
        cache.entry((r, s, n)).or_insert_with(|| {
            let cols = self.filtered(n, s);
            let rows = if n < self.top { self.complement(n + 1, s + r) } else { 0..0 };
            let restricted = self.diffs[n].submatrix(rows, cols.clone());
            restricted
                .kernel_sparse()
                .into_iter()
                .map(|v| sparse::shift(&v, cols.start))
                .collect()
        })
    }

    fn entry(&self, r: usize, s: usize, n: usize, cache: &mut HashMap<ZKey, Vec<SVec<F::Elem>>>) -> Subquotient<F> {
        let (ri, si) = (r as i64, s as i64);
        let numerator = self.z(ri, si, n, cache).to_vec();
        let mut denominator = self.z(ri - 1, si + 1, n, cache).to_vec();
        if n > 0 {
            let sources = self.z(ri - 1, si - ri + 1, n - 1, cache).to_vec();
            let d = &self.diffs[n - 1];
            denominator.extend(sources.iter().map(|v| d.apply_sparse(v)).filter(|v| !v.is_empty()));
        }
        Subquotient::new(&self.field, self.dc.total_dim(n), &denominator, &numerator)
    }

    fn page(&self, r: usize, cache: &mut HashMap<ZKey, Vec<SVec<F::Elem>>>) -> Result<ReferencePage<F>> {
        let f = &self.field;
        let mut entries = BTreeMap::new();
        let mut quotients = BTreeMap::new();
        for n in 0..=self.top {
            for s in 0..=self.smax.min(n) {
                let t = n - s;
                let (p, q) = match self.filtration {
                    Filtration::ByColumns => (s, t),
                    Filtration::ByRows => (t, s),
                };
                if p > self.dc.pmax() || q > self.dc.qmax() {
                    continue;
                }
                let sq = self.entry(r, s, n, cache);
                entries.insert((s, t), sq.dim());
                quotients.insert((s, t), sq);
            }
        }
        let mut differentials = BTreeMap::new();
        for (&(s, t), source) in &quotients {
            let n = s + t;
            let key = (t + 1).checked_sub(r).map(|tt| (s + r, tt));
            let known = key.and_then(|k| quotients.get(&k));
            // A target outside the rectangle is zero, but the image must still
            // be checked to vanish there.
            let hidden = match known {
                None if n < self.top && s + r <= self.smax => Some(self.entry(r, s + r, n + 1, cache)),
                _ => None,
            };
            let target = known.or(hidden.as_ref());
            let rows = known.map_or(0, Subquotient::dim);
            let mut columns = Vec::with_capacity(source.dim());
            for rep in source.representatives() {
                let image = if n < self.top { self.diffs[n].apply_sparse(rep) } else { Vec::new() };
                let class = match target {
                    Some(tq) => tq.class_of(&image).ok_or_else(|| {
                        Error::invariant(
                            format!("E_{r}/{s}/{t}"),
                            "the image of a representative is not a cycle of the target",
                        )
                    })?,
                    None if image.is_empty() => Vec::new(),
                    None => {
                        return Err(Error::invariant(
                            format!("E_{r}/{s}/{t}"),
                            "a representative maps outside the filtration range",
                        ))
                    }
                };
                if class.len() != rows && class.iter().any(|c| !f.is_zero(c)) {
                    return Err(Error::invariant(format!("E_{r}/{s}/{t}"), "nonzero image in an empty entry"));
                }
                let class = if class.len() == rows { class } else { Vec::new() };
                columns.push(sparse::from_dense(f, &class));
            }
            differentials.insert((s, t), Mat::from_sparse_columns(f, rows, &columns));
        }
        for (&(s, t), d) in &differentials {
            if let Some(next) = (t + 1).checked_sub(r).and_then(|tt| differentials.get(&(s + r, tt))) {
                if !next.mul(d)?.is_zero() {
                    return Err(Error::invariant(format!("E_{r}/{s}/{t}"), "d_r ∘ d_r ≠ 0"));
                }
            }
        }
        Ok(ReferencePage { entries, differentials })
    }
}

