use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};
use crate::exactalg::sparse::{self, SVec};
use crate::exactalg::{Field, Mat};
use crate::homalg::{CochainComplex, DoubleComplex};

/// Which index of a double complex is used as the filtration degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Filtration {
    /// `F^s = ⊕_{p ≥ s} C^{p,•}`; entries are reported as `(p, q)`.
    ByColumns,
    /// `F^s = ⊕_{q ≥ s} C^{•,q}`; entries are reported as `(q, p)`.
    ByRows,
}

/// One page `E_r`. Entries are keyed by `(s, t)` with `s` the filtration
/// degree and `s + t` the total degree; `d_r : E_r^{s,t} → E_r^{s+r,t−r+1}`.
#[derive(Clone, Debug)]
pub struct Page<F: Field> {
    pub r: usize,
    pub entries: BTreeMap<(usize, usize), usize>,
    pub differentials: BTreeMap<(usize, usize), Mat<F>>,
    /// Cocycle representatives in `Tot^{s+t}` of the basis of `E_r^{s,t}`
    /// that the differentials are written in.
    pub representatives: BTreeMap<(usize, usize), Vec<SVec<F::Elem>>>,
}

impl<F: Field> Page<F> {
    pub fn dim(&self, s: usize, t: usize) -> usize {
        self.entries.get(&(s, t)).copied().unwrap_or(0)
    }

    /// `Σ_{s+t=n} dim E_r^{s,t}`.
    pub fn total(&self, n: usize) -> usize {
        self.entries.iter().filter(|((s, t), _)| s + t == n).map(|(_, d)| d).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.values().all(|d| *d == 0)
    }

    pub fn differentials_vanish(&self) -> bool {
        self.differentials.values().all(Mat::is_zero)
    }
}

/// A flat record of one page entry, as dumped by the command line tool.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PageEntry {
    pub r: usize,
    pub s: usize,
    pub t: usize,
    pub dim: usize,
    pub boundary: bool,
}

#[derive(Clone, Debug)]
pub struct SpectralSequence<F: Field> {
    pub filtration: Filtration,
    pub pages: Vec<Page<F>>,
    /// Truncation of the underlying double complex, if any.
    pub trunc: Option<usize>,
    /// The page from which every later page is provably equal: one past the
    /// largest filtration degree.
    pub stable_page: usize,
    /// The first page after which every differential vanishes.
    pub degeneration_page: usize,
}

impl<F: Field> SpectralSequence<F> {
    pub fn page(&self, r: usize) -> Option<&Page<F>> {
        self.pages.get(r)
    }

    pub fn e_infinity(&self) -> &Page<F> {
        &self.pages[self.stable_page]
    }

    /// Entries of total degree `≥ N` see a cut-off differential and are not
    /// reliable.
    pub fn is_boundary(&self, s: usize, t: usize) -> bool {
        self.trunc.is_some_and(|n| s + t >= n)
    }

    pub fn records(&self) -> Vec<PageEntry> {
        self.pages
            .iter()
            .flat_map(|page| {
                page.entries.iter().map(move |(&(s, t), &dim)| PageEntry {
                    r: page.r,
                    s,
                    t,
                    dim,
                    boundary: self.is_boundary(s, t),
                })
            })
            .collect()
    }
}

/// Computes `E_0, …, E_{max(r_max, S+1)}` where `S` is the largest
/// filtration degree.
///
/// The total complex is first brought to a filtration-compatible normal
/// form: a basis in which `D` sends every basis vector either to zero or to
/// another basis vector. A pair `x ↦ y` with filtration gap `g` contributes
/// to `E_0, …, E_g` and is cancelled by `d_g`; unpaired cocycles survive to
/// `E_∞`. Every page is checked to be the cohomology of the previous one.
pub fn pages<F: Field>(dc: &DoubleComplex<F>, filtration: Filtration, r_max: usize) -> Result<SpectralSequence<F>> {
    let smax = match filtration {
        Filtration::ByColumns => dc.pmax(),
        Filtration::ByRows => dc.qmax(),
    };
    let stable_page = smax + 1;
    let last = r_max.max(stable_page);
    let form = NormalForm::new(dc, filtration);
    let mut out: Vec<Page<F>> = Vec::with_capacity(last + 1);
    for r in 0..=last {
        let page = form.page(r, smax)?;
        if let Some(prev) = out.last() {
            check_page_homology(prev, &page)?;
        }
        out.push(page);
    }
    let degeneration_page = (0..=last)
        .rev()
        .take_while(|&r| out[r].differentials_vanish())
        .last()
        .unwrap_or(last);
    Ok(SpectralSequence {
        filtration,
        pages: out,
        trunc: dc.trunc(),
        stable_page,
        degeneration_page,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Role {
    /// An unpaired cocycle.
    Essential,
    /// `x` with `Dx = y` the element `partner` of the next degree.
    Source { gap: usize, partner: usize },
    /// `y = Dx` for an `x` of the previous degree.
    Target { gap: usize },
}

impl Role {
    fn alive(self, r: usize) -> bool {
        match self {
            Role::Essential => true,
            Role::Source { gap, .. } | Role::Target { gap } => r <= gap,
        }
    }
}

struct Element<E> {
    level: usize,
    role: Role,
    vector: SVec<E>,
}

struct NormalForm<'a, F: Field> {
    dc: &'a DoubleComplex<F>,
    filtration: Filtration,
    /// `elements[n]` is a basis of `Tot^n`.
    elements: Vec<Vec<Element<F::Elem>>>,
}

impl<'a, F: Field> NormalForm<'a, F> {
    fn levels(dc: &DoubleComplex<F>, filtration: Filtration, n: usize) -> Vec<usize> {
        let mut out = Vec::with_capacity(dc.total_dim(n));
        for b in dc.layout(n) {
            let s = match filtration {
                Filtration::ByColumns => b.p,
                Filtration::ByRows => b.q,
            };
            out.extend(std::iter::repeat_n(s, b.dim));
        }
        out
    }

    /// Column reduction of each `D_n`, processing coordinates from the most
    /// filtered to the least and pivoting on the least filtered entry.
    fn new(dc: &'a DoubleComplex<F>, filtration: Filtration) -> Self {
        let f = dc.field();
        let top = dc.top_degree();
        let levels: Vec<Vec<usize>> = (0..=top + 1).map(|n| Self::levels(dc, filtration, n)).collect();
        // `rank[n][i]`: position of coordinate `i` in the processing order.
        let rank: Vec<Vec<usize>> = levels
            .iter()
            .map(|lv| {
                let mut order: Vec<usize> = (0..lv.len()).collect();
                order.sort_by_key(|&i| (std::cmp::Reverse(lv[i]), i));
                let mut rank = vec![0; lv.len()];
                for (k, &i) in order.iter().enumerate() {
                    rank[i] = k;
                }
                rank
            })
            .collect();
        let mut elements: Vec<Vec<Element<F::Elem>>> = (0..=top + 1).map(|_| Vec::new()).collect();
        // Coordinates of degree `n` that are pivots of `D_{n−1}`: their own
        // columns reduce to zero and are not needed.
        let mut cleared: Vec<bool> = Vec::new();
        for n in 0..=top {
            let dim = levels[n].len();
            if cleared.len() != dim {
                cleared = vec![false; dim];
            }
            let d = dc.total_differential(n);
            let columns = d.columns();
            let mut order: Vec<usize> = (0..dim).collect();
            order.sort_by_key(|&i| rank[n][i]);
            let low = |v: &SVec<F::Elem>| v.iter().max_by_key(|(i, _)| rank[n + 1][*i]).map(|(i, a)| (*i, a.clone()));
            // pivot row → (reduced column, its combination, source coordinate)
            let mut pivots: HashMap<usize, (SVec<F::Elem>, SVec<F::Elem>, usize)> = HashMap::new();
            let mut next_cleared = vec![false; levels[n + 1].len()];
            let mut pending: Vec<(usize, SVec<F::Elem>, Option<usize>)> = Vec::new();
            for &c in &order {
                if cleared[c] {
                    continue;
                }
                let mut col = columns[c].clone();
                let mut v: SVec<F::Elem> = vec![(c, f.one())];
                let mut pivot = None;
                while let Some((row, a)) = low(&col) {
                    match pivots.get(&row) {
                        Some((pcol, pv, _)) => {
                            let b = pcol.iter().find(|(i, _)| *i == row).map(|(_, b)| b.clone()).expect("pivot entry");
                            let factor = f.neg(&f.div(&a, &b).expect("nonzero pivot"));
                            col = sparse::axpy(f, &col, &factor, pcol);
                            v = sparse::axpy(f, &v, &factor, pv);
                        }
                        None => {
                            pivot = Some(row);
                            break;
                        }
                    }
                }
                if let Some(row) = pivot {
                    next_cleared[row] = true;
                    pivots.insert(row, (col, v.clone(), c));
                }
                pending.push((c, v, pivot));
            }
            for (c, v, pivot) in pending {
                let level = levels[n][c];
                let role = match pivot {
                    None => Role::Essential,
                    Some(row) => {
                        let (y, _, _) = &pivots[&row];
                        let y_level = levels[n + 1][row];
                        let gap = y_level - level;
                        elements[n + 1].push(Element {
                            level: y_level,
                            role: Role::Target { gap },
                            vector: y.clone(),
                        });
                        Role::Source {
                            gap,
                            partner: elements[n + 1].len() - 1,
                        }
                    }
                };
                elements[n].push(Element { level, role, vector: v });
            }
            cleared = next_cleared;
        }
        elements.truncate(top + 1);
        NormalForm { dc, filtration, elements }
    }

    fn page(&self, r: usize, smax: usize) -> Result<Page<F>> {
        let f = self.dc.field();
        let top = self.elements.len() - 1;
        let mut entries = BTreeMap::new();
        let mut representatives: BTreeMap<(usize, usize), Vec<SVec<F::Elem>>> = BTreeMap::new();
        // (degree, element) → (entry, position in the entry's basis)
        let mut position: Vec<HashMap<usize, usize>> = vec![HashMap::new(); top + 1];
        for n in 0..=top {
            for s in 0..=smax.min(n) {
                let t = n - s;
                let (p, q) = match self.filtration {
                    Filtration::ByColumns => (s, t),
                    Filtration::ByRows => (t, s),
                };
                if p > self.dc.pmax() || q > self.dc.qmax() {
                    continue;
                }
                entries.insert((s, t), 0);
                representatives.insert((s, t), Vec::new());
            }
            for (k, e) in self.elements[n].iter().enumerate() {
                if !e.role.alive(r) {
                    continue;
                }
                let key = (e.level, n - e.level);
                let reps = representatives.get_mut(&key).ok_or_else(|| {
                    Error::invariant(format!("E_{r}/{}/{}", key.0, key.1), "basis element outside the rectangle")
                })?;
                position[n].insert(k, reps.len());
                reps.push(e.vector.clone());
                *entries.get_mut(&key).expect("entry exists") += 1;
            }
        }
        let mut differentials = BTreeMap::new();
        for (&(s, t), &dim) in &entries {
            let n = s + t;
            let target = (t + 1).checked_sub(r).map(|tt| (s + r, tt));
            let rows = target.and_then(|k| entries.get(&k)).copied().unwrap_or(0);
            let mut triplets = Vec::new();
            for (k, e) in self.elements[n].iter().enumerate() {
                if let (Role::Source { gap, partner }, Some(&col)) = (e.role, position[n].get(&k)) {
                    if gap == r && e.level == s {
                        let row = position[n + 1][&partner];
                        triplets.push((row, col, f.one()));
                    }
                }
            }
            differentials.insert((s, t), Mat::from_triplets(f, rows, dim, triplets));
        }
        for (&(s, t), d) in &differentials {
            if let Some(next) = (t + 1).checked_sub(r).and_then(|tt| differentials.get(&(s + r, tt))) {
                if !next.mul(d)?.is_zero() {
                    return Err(Error::invariant(format!("E_{r}/{s}/{t}"), "d_r ∘ d_r ≠ 0"));
                }
            }
        }
        Ok(Page {
            r,
            entries,
            differentials,
            representatives,
        })
    }
}

/// `dim E_{r+1} = dim ker d_r − rank d_r(incoming)` at every entry.
fn check_page_homology<F: Field>(prev: &Page<F>, next: &Page<F>) -> Result<()> {
    let r = prev.r;
    for (&(s, t), &dim) in &prev.entries {
        let out_rank = prev.differentials.get(&(s, t)).map_or(0, Mat::rank);
        let in_rank = match (s.checked_sub(r), (t + r).checked_sub(1)) {
            (Some(ss), Some(tt)) => prev.differentials.get(&(ss, tt)).map_or(0, Mat::rank),
            _ => 0,
        };
        let expected = dim - out_rank - in_rank;
        if next.dim(s, t) != expected {
            return Err(Error::invariant(
                format!("E_{}/{s}/{t}", r + 1),
                format!("dimension {} but the homology of E_{r} has dimension {expected}", next.dim(s, t)),
            ));
        }
    }
    Ok(())
}

/// Comparison of `E_∞` with the cohomology of the total complex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvergenceReport {
    /// `(n, Σ_{s+t=n} dim E_∞^{s,t}, dim H^n(Tot))` for every checked degree.
    pub degrees: Vec<(usize, usize, usize)>,
    /// Degrees where the two disagree.
    pub violations: Vec<usize>,
}

impl ConvergenceReport {
    pub fn is_consistent(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks `Σ_{s+t=n} dim E_∞^{s,t} = dim H^n(total)` in every reliable degree.
pub fn convergence_check<F: Field>(ss: &SpectralSequence<F>, total: &CochainComplex<F>) -> Result<ConvergenceReport> {
    let e = ss.e_infinity();
    let last = if total.is_truncated() { total.top().saturating_sub(1) } else { total.top() };
    let mut degrees = Vec::new();
    let mut violations = Vec::new();
    if total.is_truncated() && total.top() == 0 {
        return Ok(ConvergenceReport { degrees, violations });
    }
    for n in 0..=last {
        let h = total.cohomology_unchecked(n);
        let sum = e.total(n);
        if sum != h {
            violations.push(n);
        }
        degrees.push((n, sum, h));
    }
    Ok(ConvergenceReport { degrees, violations })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{PrimeField, Rationals};

    fn single() -> DoubleComplex<Rationals> {
        let q = Rationals;
        DoubleComplex::from_fn(&q, vec![vec![1]], None, |_, _| unreachable!(), |_, _| unreachable!()).unwrap()
    }

    #[test]
    fn single_entry_is_constant() {
        let dc = single();
        for filtration in [Filtration::ByColumns, Filtration::ByRows] {
            let ss = pages(&dc, filtration, 3).unwrap();
            assert_eq!(ss.pages.len(), 4);
            for page in &ss.pages {
                assert_eq!(page.entries, BTreeMap::from([((0, 0), 1)]));
            }
            let total = dc.total_complex().unwrap();
            assert!(convergence_check(&ss, &total).unwrap().is_consistent());
        }
    }

    #[test]
    fn horizontal_isomorphism() {
        let q = Rationals;
        let dc = DoubleComplex::from_fn(
            &q,
            vec![vec![1], vec![1]],
            None,
            |_, _| Mat::identity(&q, 1),
            |_, _| unreachable!(),
        )
        .unwrap();
        // By columns d_0 is vertical, so the isomorphism is d_1.
        let by_cols = pages(&dc, Filtration::ByColumns, 2).unwrap();
        assert_eq!(by_cols.pages[0].entries, BTreeMap::from([((0, 0), 1), ((1, 0), 1)]));
        assert_eq!(by_cols.pages[1].entries, by_cols.pages[0].entries);
        assert_eq!(by_cols.pages[1].differentials[&(0, 0)].rank(), 1);
        assert!(by_cols.pages[2].is_zero());
        // By rows both cells share a row and the isomorphism is d_0.
        let by_rows = pages(&dc, Filtration::ByRows, 2).unwrap();
        assert_eq!(by_rows.pages[0].entries, BTreeMap::from([((0, 0), 1), ((0, 1), 1)]));
        assert!(by_rows.pages[1].is_zero());
    }

    #[test]
    fn vertical_isomorphism_survives_to_e1_by_rows() {
        let q = Rationals;
        let dc = DoubleComplex::from_fn(&q, vec![vec![1, 1]], None, |_, _| unreachable!(), |_, _| {
            Mat::identity(&q, 1)
        })
        .unwrap();
        let ss = pages(&dc, Filtration::ByRows, 2).unwrap();
        assert_eq!(ss.pages[1].dim(0, 0), 1);
        assert_eq!(ss.pages[1].dim(1, 0), 1);
        assert!(!ss.pages[1].differentials[&(0, 0)].is_zero());
        assert!(ss.pages[2].is_zero());
        assert_eq!(ss.degeneration_page, 2);
    }

    #[test]
    fn zigzag_has_a_d2() {
        // x ∈ C^{0,1} ↦ y ∈ C^{1,1} = d_v z, z ∈ C^{1,0} ↦ w ∈ C^{2,0}:
        // by columns x and w survive to E_2 and d_2 x = ±w.
        let q = Rationals;
        let dims = vec![vec![0, 1], vec![1, 1], vec![1, 0]];
        let d = dims.clone();
        let e = dims.clone();
        let dc = DoubleComplex::from_fn(
            &q,
            dims,
            None,
            |p, r| match (p, r) {
                (0, 1) | (1, 0) => Mat::identity(&q, 1),
                _ => Mat::zeros(&q, d[p + 1][r], d[p][r]),
            },
            |p, r| match (p, r) {
                (1, 0) => Mat::identity(&q, 1),
                _ => Mat::zeros(&q, e[p][r + 1], e[p][r]),
            },
        )
        .unwrap();
        let ss = pages(&dc, Filtration::ByColumns, 3).unwrap();
        assert_eq!(ss.pages[2].entries.iter().filter(|(_, d)| **d > 0).count(), 2);
        assert_eq!(ss.pages[2].dim(0, 1), 1);
        assert_eq!(ss.pages[2].dim(2, 0), 1);
        assert_eq!(ss.pages[2].differentials[&(0, 1)].rank(), 1);
        assert!(ss.e_infinity().is_zero());
        let total = dc.total_complex().unwrap();
        assert!(convergence_check(&ss, &total).unwrap().is_consistent());
        assert_eq!(ss.degeneration_page, 3);
    }

    /// A double complex on `[0,2]²` built from elementary pieces (dots,
    /// horizontal and vertical arrows, staircases) and then conjugated by
    /// random invertible changes of basis in each block.
    fn random_double(pieces: &[(u8, usize, usize)], ops: &[(usize, usize, usize, usize)]) -> DoubleComplex<PrimeField> {
        let f = PrimeField::new(2).unwrap();
        let size = 3;
        let mut dims = vec![vec![0usize; size]; size];
        let mut h: Vec<(usize, usize, usize, usize)> = Vec::new(); // (p, q, from, to)
        let mut v: Vec<(usize, usize, usize, usize)> = Vec::new();
        let cell = |dims: &mut Vec<Vec<usize>>, p: usize, q: usize| {
            dims[p][q] += 1;
            dims[p][q] - 1
        };
        for &(kind, p, q) in pieces {
            match kind % 4 {
                0 => {
                    cell(&mut dims, p, q);
                }
                1 if p + 1 < size => {
                    let a = cell(&mut dims, p, q);
                    let b = cell(&mut dims, p + 1, q);
                    h.push((p, q, a, b));
                }
                2 if q + 1 < size => {
                    let a = cell(&mut dims, p, q);
                    let b = cell(&mut dims, p, q + 1);
                    v.push((p, q, a, b));
                }
                3 if p + 2 < size && q >= 1 => {
                    // x0 → y1 ← x1 → y2
                    let x0 = cell(&mut dims, p, q);
                    let y1 = cell(&mut dims, p + 1, q);
                    let x1 = cell(&mut dims, p + 1, q - 1);
                    let y2 = cell(&mut dims, p + 2, q - 1);
                    h.push((p, q, x0, y1));
                    v.push((p + 1, q - 1, x1, y1));
                    h.push((p + 1, q - 1, x1, y2));
                }
                _ => {
                    cell(&mut dims, p, q);
                }
            }
        }
        // Change of basis B = product of elementary additions, per block.
        let mut basis: Vec<Vec<Mat<PrimeField>>> =
            dims.iter().map(|row| row.iter().map(|&d| Mat::identity(&f, d)).collect()).collect();
        let mut inverse = basis.clone();
        for &(p, q, i, j) in ops {
            let (p, q) = (p % size, q % size);
            let d = dims[p][q];
            if d < 2 || i % d == j % d {
                continue;
            }
            let (i, j) = (i % d, j % d);
            let e = Mat::from_triplets(&f, d, d, (0..d).map(|k| (k, k, f.one())).chain([(i, j, f.one())]));
            basis[p][q] = e.mul(&basis[p][q]).unwrap();
            // (I + E_ij)^{-1} = I − E_ij = I + E_ij over F_2.
            inverse[p][q] = inverse[p][q].mul(&e).unwrap();
        }
        let raw = |arrows: &[(usize, usize, usize, usize)], p: usize, q: usize, tp: usize, tq: usize| {
            let t = arrows.iter().filter(|a| a.0 == p && a.1 == q).map(|a| (a.3, a.2, f.one()));
            Mat::from_triplets(&f, dims[tp][tq], dims[p][q], t)
        };
        let conj = |m: Mat<PrimeField>, p: usize, q: usize, tp: usize, tq: usize| {
            basis[tp][tq].mul(&m).unwrap().mul(&inverse[p][q]).unwrap()
        };
        DoubleComplex::from_fn(
            &f,
            dims.clone(),
            None,
            |p, q| conj(raw(&h, p, q, p + 1, q), p, q, p + 1, q),
            |p, q| conj(raw(&v, p, q, p, q + 1), p, q, p, q + 1),
        )
        .expect("elementary pieces give a double complex")
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(64))]

        #[test]
        fn normal_form_matches_definition(
            pieces in proptest::collection::vec((0u8..4, 0usize..3, 0usize..3), 0..8),
            ops in proptest::collection::vec((0usize..3, 0usize..3, 0usize..6, 0usize..6), 0..20),
        ) {
            let dc = random_double(&pieces, &ops);
            for filtration in [Filtration::ByColumns, Filtration::ByRows] {
                let ss = pages(&dc, filtration, 3).unwrap();
                let reference = super::super::reference::reference_pages(&dc, filtration, ss.pages.len() - 1).unwrap();
                for (page, expected) in ss.pages.iter().zip(&reference) {
                    proptest::prop_assert_eq!(&page.entries, &expected.entries);
                    for (key, d) in &page.differentials {
                        proptest::prop_assert_eq!(d.rank(), expected.differentials[key].rank());
                    }
                }
                let total = dc.total_complex().unwrap();
                proptest::prop_assert!(convergence_check(&ss, &total).unwrap().is_consistent());
            }
        }

        #[test]
        fn transpose_swaps_filtrations(
            pieces in proptest::collection::vec((0u8..4, 0usize..3, 0usize..3), 0..8),
            ops in proptest::collection::vec((0usize..3, 0usize..3, 0usize..6, 0usize..6), 0..20),
        ) {
            let dc = random_double(&pieces, &ops);
            let cols = pages(&dc, Filtration::ByColumns, 3).unwrap();
            let rows = pages(&dc.transpose(), Filtration::ByRows, 3).unwrap();
            for (a, b) in cols.pages.iter().zip(&rows.pages) {
                proptest::prop_assert_eq!(&a.entries, &b.entries);
            }
        }
    }
}
