use std::collections::BTreeMap;
use std::ops::RangeInclusive;

use crate::error::{Error, Result};
use crate::exactalg::{Field, Mat};
use crate::homalg::{CochainComplex, DoubleComplex};
use crate::spectra::{convergence_check, pages, ConvergenceReport, Filtration, Mismatch, SpectralSequence};

use super::gdga::{validate_gdga, Gdga};
use super::lie::LieAlgebraData;
use super::poly::{invariant_polynomials, multiply_by_variable, sym_derivation, MonomialBasis};
use super::SubspaceBasis;

/// The Cartan complex `C^s = ⊕_{2p+m=s, p≤P} (S^p(g∨) ⊗ A^m)^g` with
/// `d_C = 1⊗d − Σ_a u_a ⊗ ι_a`.
///
/// A piece `(p, m)` lives in `S^p ⊗ A^m` with coordinates
/// `monomial · dim A^m + basis index`; its g-invariants are the joint kernel
/// of `ad*_a ⊗ 1 + 1 ⊗ L_a`.
#[derive(Clone, Debug)]
pub struct CartanComplex<F: Field> {
    poly_trunc: usize,
    safe_top: usize,
    pieces: Vec<Vec<SubspaceBasis<F>>>,
    vertical: Vec<Vec<Mat<F>>>,
    horizontal: Vec<Vec<Mat<F>>>,
    complex: CochainComplex<F>,
}

impl<F: Field> CartanComplex<F> {
    /// Builds the complex for a validated g-DGA and asserts `d_C² = 0`.
    pub fn new(g: &LieAlgebraData<F>, a: &Gdga<F>, poly_trunc: usize) -> Result<Self> {
        let report = validate_gdga(g, a);
        if !report.is_valid() {
            return Err(Error::invariant("gdga", report.to_string()));
        }
        let top = a.top();
        let reach = 2 * poly_trunc;
        if reach < top.max(1) {
            return Err(Error::TruncationBoundary { degree: 0, trunc: 0 });
        }
        let safe_top = reach - top.max(1);
        let f = a.field();
        let k = g.dim();
        let abelian_trivial = g.is_abelian() && (0..k).all(|i| a.lie(i).is_zero());
        let mut pieces = Vec::with_capacity(poly_trunc + 1);
        for p in 0..=poly_trunc {
            let n_p = MonomialBasis::new(k, p).len();
            let coad: Vec<Mat<F>> = (0..k).map(|i| sym_derivation(&g.coadjoint(i), p)).collect();
            let mut row = Vec::with_capacity(top + 1);
            for m in 0..=top {
                let dim_m = a.dims()[m];
                let ambient = n_p * dim_m;
                if abelian_trivial {
                    row.push(SubspaceBasis::full(f, ambient));
                    continue;
                }
                let ops: Vec<Mat<F>> = (0..k)
                    .map(|i| {
                        let lie = a.block(a.lie(i), m, m);
                        coad[i].kron(&Mat::identity(f, dim_m)).add(&Mat::identity(f, n_p).kron(&lie))
                    })
                    .collect::<Result<_>>()?;
                let refs: Vec<&Mat<F>> = ops.iter().collect();
                let kernel = Mat::vstack(f, ambient, &refs)?.kernel_sparse();
                row.push(SubspaceBasis::new(f, ambient, kernel));
            }
            pieces.push(row);
        }

        let mut vertical = Vec::with_capacity(poly_trunc + 1);
        let mut horizontal = Vec::with_capacity(poly_trunc + 1);
        for p in 0..=poly_trunc {
            let n_p = MonomialBasis::new(k, p).len();
            let mut vrow = Vec::new();
            for m in 0..top {
                let op = Mat::identity(f, n_p).kron(&a.block(a.d(), m, m + 1));
                vrow.push(pieces[p][m].restrict(&op, &pieces[p][m + 1], || format!("1⊗d at ({p},{m})"))?);
            }
            vertical.push(vrow);
            let mut hrow = Vec::new();
            if p < poly_trunc {
                for m in 1..=top {
                    let (rows, cols) = (MonomialBasis::new(k, p + 1).len() * a.dims()[m - 1], n_p * a.dims()[m]);
                    let mut op = Mat::zeros(f, rows, cols);
                    for i in 0..k {
                        let term = multiply_by_variable(f, k, i, p).kron(&a.block(a.iota(i), m, m - 1));
                        op = op.sub(&term)?;
                    }
                    hrow.push(pieces[p][m].restrict(&op, &pieces[p + 1][m - 1], || format!("u⊗ι at ({p},{m})"))?);
                }
            }
            horizontal.push(hrow);
        }

        let mut c = CartanComplex {
            poly_trunc,
            safe_top,
            pieces,
            vertical,
            horizontal,
            complex: CochainComplex::new(f, vec![0], Vec::new(), true)?,
        };
        c.complex = c.assemble(f).map_err(|e| match e {
            Error::CompositionNonzero(m) => Error::invariant("cartan complex", format!("d_C² ≠ 0 ({m})")),
            other => other,
        })?;
        Ok(c)
    }

    fn top_m(&self) -> usize {
        self.pieces[0].len() - 1
    }

    pub(crate) fn piece(&self, p: usize, m: usize) -> &SubspaceBasis<F> {
        &self.pieces[p][m]
    }

    fn piece_dim(&self, p: usize, m: usize) -> usize {
        self.pieces.get(p).and_then(|r| r.get(m)).map_or(0, SubspaceBasis::len)
    }

    /// Pieces `(p, m)` of total degree `s`, by increasing `p`, with offsets.
    pub(crate) fn layout(&self, s: usize) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        let mut offset = 0;
        for p in 0..=self.poly_trunc.min(s / 2) {
            let m = s - 2 * p;
            if m <= self.top_m() {
                out.push((p, m, offset));
                offset += self.piece_dim(p, m);
            }
        }
        out
    }

    fn assemble(&self, f: &F) -> Result<CochainComplex<F>> {
        let smax = 2 * self.poly_trunc + self.top_m();
        let dims: Vec<usize> = (0..=smax)
            .map(|s| self.layout(s).iter().map(|&(p, m, _)| self.piece_dim(p, m)).sum())
            .collect();
        let one = f.one();
        let mut diffs = Vec::with_capacity(smax);
        for s in 0..smax {
            let dst = self.layout(s + 1);
            let find = |p: usize, m: usize| dst.iter().find(|b| b.0 == p && b.1 == m).map(|b| b.2);
            let mut t = Vec::new();
            for &(p, m, off) in &self.layout(s) {
                if m < self.top_m() {
                    if let Some(o) = find(p, m + 1) {
                        self.vertical[p][m].push_block(o, off, &one, &mut t);
                    }
                }
                if m >= 1 && p < self.poly_trunc {
                    if let Some(o) = find(p + 1, m - 1) {
                        self.horizontal[p][m - 1].push_block(o, off, &one, &mut t);
                    }
                }
            }
            diffs.push(Mat::from_triplets(f, dims[s + 1], dims[s], t));
        }
        CochainComplex::new(f, dims, diffs, true)
    }

    pub fn poly_trunc(&self) -> usize {
        self.poly_trunc
    }

    /// Highest degree whose cohomology is certified: `2P − max(1, top A)`.
    pub fn safe_top(&self) -> usize {
        self.safe_top
    }

    /// The total complex, including the uncertified degrees above
    /// [`CartanComplex::safe_top`].
    pub fn complex(&self) -> &CochainComplex<F> {
        &self.complex
    }

    /// `C^{p,q} = (S^p ⊗ A^{q−p})^g` with `d_v = 1⊗d` and `d_h` the
    /// contraction term, signed by `(−1)^q` so that the stored
    /// differentials commute. Truncated at `safe_top + 1`.
    pub fn double_complex(&self) -> Result<DoubleComplex<F>> {
        let f = self.complex.field();
        let (pn, qn) = (self.poly_trunc + 1, self.poly_trunc + self.top_m() + 1);
        let m_of = |p: usize, q: usize| q.checked_sub(p).filter(|m| *m <= self.top_m());
        let dims = (0..pn)
            .map(|p| (0..qn).map(|q| m_of(p, q).map_or(0, |m| self.piece_dim(p, m))).collect())
            .collect();
        let dv = |p: usize, q: usize| match (m_of(p, q), m_of(p, q + 1)) {
            (Some(m), Some(_)) => self.vertical[p][m].clone(),
            _ => Mat::zeros(f, m_of(p, q + 1).map_or(0, |m| self.piece_dim(p, m)), m_of(p, q).map_or(0, |m| self.piece_dim(p, m))),
        };
        let dh = |p: usize, q: usize| {
            let rows = m_of(p + 1, q).map_or(0, |m| self.piece_dim(p + 1, m));
            match m_of(p, q) {
                Some(m) if m >= 1 => {
                    let h = &self.horizontal[p][m - 1];
                    if q.is_multiple_of(2) {
                        h.clone()
                    } else {
                        h.neg()
                    }
                }
                other => Mat::zeros(f, rows, other.map_or(0, |m| self.piece_dim(p, m))),
            }
        };
        let dc = DoubleComplex::from_fn(f, dims, None, dh, dv)?;
        Ok(dc.truncated(self.safe_top + 1))
    }

    pub fn cohomology(&self, degrees: RangeInclusive<usize>) -> Result<Vec<usize>> {
        if *degrees.end() > self.safe_top {
            return Err(Error::TruncationBoundary {
                degree: *degrees.end(),
                trunc: self.safe_top + 1,
            });
        }
        degrees.map(|s| self.complex.cohomology(s)).collect()
    }
}

/// `dim H^s` of the Cartan complex for `s` in `degrees`, all of which must
/// be at most `2P − max(1, top A)`.
pub fn cartan_cohomology<F: Field>(
    g: &LieAlgebraData<F>,
    a: &Gdga<F>,
    poly_trunc: usize,
    degrees: RangeInclusive<usize>,
) -> Result<Vec<usize>> {
    CartanComplex::new(g, a, poly_trunc)?.cohomology(degrees)
}

/// The Cartan spectral sequence compared with `S^p(g∨)^g ⊗ H^{q−p}(A)`.
#[derive(Clone, Debug)]
pub struct CartanE1<F: Field> {
    /// Expected `E_1^{p,q}` for `p + q ≤ safe_top`, zero entries omitted.
    pub expected: BTreeMap<(usize, usize), usize>,
    pub sequence: SpectralSequence<F>,
    pub mismatches: Vec<Mismatch>,
    pub convergence: ConvergenceReport,
    /// `dim H^s` of the Cartan complex for `s ≤ safe_top`.
    pub cohomology: Vec<usize>,
    /// Degrees where `Σ_{p+q=s} dim E_∞^{p,q}` differs from `cohomology`.
    pub abutment_mismatches: Vec<usize>,
}

impl<F: Field> CartanE1<F> {
    pub fn is_consistent(&self) -> bool {
        self.mismatches.is_empty() && self.convergence.is_consistent() && self.abutment_mismatches.is_empty()
    }
}

pub fn cartan_e1<F: Field>(g: &LieAlgebraData<F>, a: &Gdga<F>, poly_trunc: usize) -> Result<CartanE1<F>> {
    let cartan = CartanComplex::new(g, a, poly_trunc)?;
    let safe = cartan.safe_top();
    let inv = invariant_polynomials(g, None, poly_trunc)?;
    let h_a = a.cohomology();
    let mut expected = BTreeMap::new();
    for p in 0..=poly_trunc {
        for m in 0..h_a.len() {
            let q = p + m;
            let v = inv[p] * h_a[m];
            if p + q <= safe && v > 0 {
                expected.insert((p, q), v);
            }
        }
    }
    let dc = cartan.double_complex()?;
    let sequence = pages(&dc, Filtration::ByColumns, 2)?;
    let e1 = sequence.page(1).expect("page 1 exists");
    let mut mismatches = Vec::new();
    for p in 0..=dc.pmax() {
        for q in 0..=dc.qmax() {
            if p + q > safe {
                continue;
            }
            let want = expected.get(&(p, q)).copied().unwrap_or(0);
            let found = e1.dim(p, q);
            if want != found {
                mismatches.push(Mismatch { s: p, t: q, expected: want, found });
            }
        }
    }
    let convergence = convergence_check(&sequence, &dc.total_complex()?)?;
    let cohomology = cartan.cohomology(0..=safe)?;
    let e_inf = sequence.e_infinity();
    let abutment_mismatches = (0..=safe).filter(|&s| e_inf.total(s) != cohomology[s]).collect();
    Ok(CartanE1 {
        expected,
        sequence,
        mismatches,
        convergence,
        cohomology,
        abutment_mismatches,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{PrimeField, Rat, Rationals};

    fn q() -> Rationals {
        Rationals
    }

    fn free_circle() -> Gdga<Rationals> {
        Gdga::exterior(&q(), 1, &[vec![q().one()]]).unwrap()
    }

    #[test]
    fn point_gives_polynomial_ring() {
        let g = LieAlgebraData::abelian(&q(), 1);
        let h = cartan_cohomology(&g, &Gdga::point(&q(), 1), 6, 0..=11).unwrap();
        assert_eq!(h, vec![1, 0, 1, 0, 1, 0, 1, 0, 1, 0, 1, 0]);
        assert!(matches!(
            cartan_cohomology(&g, &Gdga::point(&q(), 1), 6, 0..=12),
            Err(Error::TruncationBoundary { .. })
        ));
    }

    #[test]
    fn free_circle_is_a_point() {
        let g = LieAlgebraData::abelian(&q(), 1);
        let h = cartan_cohomology(&g, &free_circle(), 5, 0..=9).unwrap();
        assert_eq!(h, vec![1, 0, 0, 0, 0, 0, 0, 0, 0, 0]);
    }

    #[test]
    fn torus_on_itself_is_a_point() {
        let one = q().one();
        let z = q().zero();
        let a = Gdga::exterior(&q(), 2, &[vec![one.clone(), z.clone()], vec![z, one]]).unwrap();
        let g = LieAlgebraData::abelian(&q(), 2);
        let h = cartan_cohomology(&g, &a, 4, 0..=6).unwrap();
        assert_eq!(h, vec![1, 0, 0, 0, 0, 0, 0]);
    }

    #[test]
    fn trivial_circle_is_a_product() {
        let g = LieAlgebraData::abelian(&q(), 1);
        let a = Gdga::exterior(&q(), 1, &[vec![q().zero()]]).unwrap();
        let h = cartan_cohomology(&g, &a, 5, 0..=9).unwrap();
        assert_eq!(h, vec![1; 10]);
        let e = cartan_e1(&g, &a, 5).unwrap();
        assert!(e.is_consistent(), "{:?}", e.mismatches);
        assert_eq!(e.expected.get(&(2, 3)), Some(&1));
    }

    #[test]
    fn e1_examples() {
        let g = LieAlgebraData::abelian(&q(), 1);
        let e = cartan_e1(&g, &Gdga::point(&q(), 1), 4).unwrap();
        assert!(e.is_consistent());
        let page = e.sequence.page(1).unwrap();
        // E_1^{p,q} = S^p ⊗ H^{q−p}: the point contributes on the diagonal,
        // in total degree 2p.
        for p in 0..=3 {
            assert_eq!(page.dim(p, p), 1);
            assert_eq!(page.total(2 * p), 1);
            assert_eq!(page.total(2 * p + 1), 0);
        }
        let e = cartan_e1(&g, &free_circle(), 4).unwrap();
        assert!(e.is_consistent(), "{:?}", e.mismatches);
        assert_eq!(e.cohomology, vec![1, 0, 0, 0, 0, 0, 0, 0]);
        assert!(e.sequence.page(1).unwrap().dim(1, 2) == 1);
    }

    #[test]
    fn su2_point_is_classifying_space() {
        let g = LieAlgebraData::su2(&q());
        let e = cartan_e1(&g, &Gdga::point(&q(), 3), 4).unwrap();
        assert!(e.is_consistent(), "{:?}", e.mismatches);
        assert_eq!(e.cohomology, vec![1, 0, 0, 0, 1, 0, 0, 0]);
    }

    #[test]
    fn works_over_prime_fields() {
        let f = PrimeField::new(5).unwrap();
        let g = LieAlgebraData::abelian(&f, 1);
        let a = Gdga::exterior(&f, 1, &[vec![f.one()]]).unwrap();
        assert_eq!(cartan_cohomology(&g, &a, 3, 0..=5).unwrap(), vec![1, 0, 0, 0, 0, 0]);
    }

    /// Series of `Λ(n − r) ⊗ S(k − r)` with generators in degrees 1 and 2:
    /// the Cartan cohomology of `Λ(θ_1..θ_n)` when the contraction matrix has
    /// rank `r`.
    fn koszul_series(n: usize, k: usize, r: usize, len: usize) -> Vec<usize> {
        let mut series = vec![0usize; len];
        series[0] = 1;
        for _ in 0..(n - r) {
            for s in (1..len).rev() {
                series[s] += series[s - 1];
            }
        }
        for _ in 0..(k - r) {
            for s in 2..len {
                series[s] += series[s - 2];
            }
        }
        series
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(48))]

        #[test]
        fn exterior_models(
            n in 1usize..=3,
            k in 1usize..=2,
            entries in proptest::collection::vec(-1i64..=1, 6),
            p in 2usize..=3,
        ) {
            let f = q();
            let iota: Vec<Vec<Rat>> = (0..k).map(|a| (0..n).map(|j| f.from_i64(entries[a * 3 + j])).collect()).collect();
            let a = Gdga::exterior(&f, n, &iota).unwrap();
            let g = LieAlgebraData::abelian(&f, k);
            let rank = Mat::from_dense(&f, k, n, &iota).unwrap().rank();
            let small = CartanComplex::new(&g, &a, p).unwrap();
            let safe = small.safe_top();
            let h = small.cohomology(0..=safe).unwrap();
            proptest::prop_assert_eq!(&h, &koszul_series(n, k, rank, safe + 1));
            let bigger = cartan_cohomology(&g, &a, p + 1, 0..=safe).unwrap();
            proptest::prop_assert_eq!(&h, &bigger);
            let e = cartan_e1(&g, &a, p).unwrap();
            proptest::prop_assert!(e.is_consistent(), "{:?}", e.mismatches);
        }
    }
}
