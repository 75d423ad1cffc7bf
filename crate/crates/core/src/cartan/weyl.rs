use crate::error::{Error, Result};
use crate::exactalg::sparse;
use crate::exactalg::{Field, Mat, Span};
use crate::homalg::CochainComplex;

use super::complex::CartanComplex;
use super::gdga::{validate_gdga, Gdga};
use super::lie::LieAlgebraData;
use super::poly::{check_matrix_group, fixed_dim, invariant_polynomials, sym_derivation, sym_power, MonomialBasis};
use super::SubspaceBasis;

/// A finite group `W` acting on `t∨` (`on_dual`) and on a g-DGA
/// (`on_algebra`), element by element in the same order.
#[derive(Clone, Debug)]
pub struct WeylAction<F: Field> {
    pub on_dual: Vec<Mat<F>>,
    pub on_algebra: Vec<Mat<F>>,
}

impl<F: Field> WeylAction<F> {
    /// `W` acting trivially.
    pub fn trivial(field: &F, rank: usize, algebra_dim: usize) -> Self {
        WeylAction {
            on_dual: vec![Mat::identity(field, rank)],
            on_algebra: vec![Mat::identity(field, algebra_dim)],
        }
    }
}

/// One degree of a [`WeylReport`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeylRow {
    pub degree: usize,
    /// `dim H_T^s`.
    pub h_t: usize,
    /// `dim (H_T^s)^W`, from the action on cohomology classes.
    pub h_t_invariant: usize,
    /// `dim H^s` of the `W`-invariant Cartan subcomplex.
    pub invariant_complex: usize,
    /// `Σ_{2p+m=s} dim (S^p(t∨) ⊗ H^m(A))^W`, the invariant `E_1` total.
    pub e1_bound: usize,
}

impl WeylRow {
    pub fn is_match(&self) -> bool {
        self.h_t_invariant == self.invariant_complex && self.invariant_complex <= self.e1_bound
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeylReport {
    pub rows: Vec<WeylRow>,
}

impl WeylReport {
    pub fn is_consistent(&self) -> bool {
        self.rows.iter().all(WeylRow::is_match)
    }

    pub fn mismatched_degrees(&self) -> Vec<usize> {
        self.rows.iter().filter(|r| !r.is_match()).map(|r| r.degree).collect()
    }

    /// The `(H_T)^W` series.
    pub fn series(&self) -> Vec<usize> {
        self.rows.iter().map(|r| r.h_t_invariant).collect()
    }
}

fn check_weyl<F: Field>(t: &LieAlgebraData<F>, a: &Gdga<F>, w: &WeylAction<F>) -> Result<()> {
    let f = a.field();
    let n = a.total_dim();
    check_matrix_group(f, t.dim(), &w.on_dual)?;
    if w.on_algebra.len() != w.on_dual.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} algebra matrices for {} Weyl elements",
            w.on_algebra.len(),
            w.on_dual.len()
        )));
    }
    if let Some(i) = w.on_algebra.iter().position(|m| m.shape() != (n, n)) {
        return Err(Error::DimensionMismatch(format!("weyl/{i}/algebra is not {n}×{n}")));
    }
    for (i, (m, x)) in w.on_dual.iter().zip(&w.on_algebra).enumerate() {
        let minv = inverse_in_group(&w.on_dual, m)?;
        let xinv = w.on_algebra[w.on_dual.iter().position(|y| *y == minv).expect("inverse is listed")].clone();
        if x.mul(&xinv)? != Mat::identity(f, n) {
            return Err(Error::NonEquivariantInput(format!("weyl/{i}: algebra matrices do not follow the group law")));
        }
        if x.mul(a.d())? != a.d().mul(x)? {
            return Err(Error::NonEquivariantInput(format!("weyl/{i} does not commute with d")));
        }
        for b in 0..t.dim() {
            let conj = x.mul(a.iota(b))?.mul(&xinv)?;
            let mut want = Mat::zeros(f, n, n);
            for c in 0..t.dim() {
                want = want.combine(a.iota(c), &minv.get(b, c))?;
            }
            if conj != want {
                return Err(Error::NonEquivariantInput(format!("weyl/{i} does not intertwine iota/{b}")));
            }
        }
    }
    Ok(())
}

fn inverse_in_group<F: Field>(group: &[Mat<F>], m: &Mat<F>) -> Result<Mat<F>> {
    let id = Mat::identity(m.field(), m.nrows());
    for x in group {
        if m.mul(x)? == id {
            return Ok(x.clone());
        }
    }
    Err(Error::invariant("weyl", "an element has no inverse in the group"))
}

/// Dimension of the `W`-fixed part of `H^s(C)` for matrices `acts[w]` on `C^s`.
fn fixed_on_cohomology<F: Field>(c: &CochainComplex<F>, s: usize, acts: &[Mat<F>]) -> Result<usize> {
    let sq = c.cohomology_representatives(s)?;
    if sq.dim() == 0 {
        return Ok(0);
    }
    let f = c.field();
    let mut mats = Vec::with_capacity(acts.len());
    for (i, x) in acts.iter().enumerate() {
        let mut cols = Vec::with_capacity(sq.dim());
        for rep in sq.representatives() {
            let class = sq
                .class_of(&x.apply_sparse(rep))
                .ok_or_else(|| Error::NonEquivariantInput(format!("weyl/{i} does not preserve cocycles in degree {s}")))?;
            cols.push(sparse::from_dense(f, &class));
        }
        mats.push(Mat::from_sparse_columns(f, sq.dim(), &cols));
    }
    fixed_dim(f, &mats)
}

/// Compares `(H_T)^W` with the cohomology of the `W`-invariant Cartan
/// complex of the torus, degree by degree up to the certified range.
pub fn torus_weyl_check<F: Field>(t: &LieAlgebraData<F>, a: &Gdga<F>, w: &WeylAction<F>, poly_trunc: usize) -> Result<WeylReport> {
    if !t.is_abelian() {
        return Err(Error::invariant("torus", "the torus Lie algebra must be abelian"));
    }
    check_weyl(t, a, w)?;
    let f = a.field();
    let cartan = CartanComplex::new(t, a, poly_trunc)?;
    let complex = cartan.complex();
    let safe = cartan.safe_top();

    // W on every degree of the Cartan complex, block by block.
    let mut acts: Vec<Vec<Mat<F>>> = Vec::with_capacity(safe + 2);
    for s in 0..=(safe + 1).min(complex.top()) {
        let per_w = w
            .on_dual
            .iter()
            .zip(&w.on_algebra)
            .enumerate()
            .map(|(i, (m, x))| {
                let mut t = Vec::new();
                for (p, mdeg, off) in cartan.layout(s) {
                    let op = sym_power(m, p).kron(&a.block(x, mdeg, mdeg));
                    let piece = cartan.piece(p, mdeg);
                    piece
                        .restrict(&op, piece, || format!("weyl/{i} at ({p},{mdeg})"))?
                        .push_block(off, off, &f.one(), &mut t);
                }
                let n = complex.dim(s);
                Ok(Mat::from_triplets(f, n, n, t))
            })
            .collect::<Result<Vec<_>>>()?;
        acts.push(per_w);
    }

    // The W-invariant subcomplex.
    let fixed: Vec<SubspaceBasis<F>> = acts
        .iter()
        .enumerate()
        .map(|(s, per_w)| {
            let n = complex.dim(s);
            let id = Mat::identity(f, n);
            let diffs: Vec<Mat<F>> = per_w.iter().map(|x| x.sub(&id)).collect::<Result<_>>()?;
            let refs: Vec<&Mat<F>> = diffs.iter().collect();
            Ok(SubspaceBasis::new(f, n, Mat::vstack(f, n, &refs)?.kernel_sparse()))
        })
        .collect::<Result<_>>()?;
    let inv_diffs = (0..fixed.len() - 1)
        .map(|s| {
            let d = complex.diff(s).expect("degree below top");
            fixed[s].restrict(d, &fixed[s + 1], || format!("d_C on invariants in degree {s}"))
        })
        .collect::<Result<Vec<_>>>()?;
    let inv_complex = CochainComplex::new(f, fixed.iter().map(SubspaceBasis::len).collect(), inv_diffs, true)?;

    // Invariant E_1 totals.
    let h_a = a.cohomology();
    let h_a_actions: Vec<Vec<Mat<F>>> = (0..h_a.len())
        .map(|m| {
            let c = graded_complex(a, m)?;
            let sq = c.cohomology_representatives(1)?;
            w.on_algebra
                .iter()
                .map(|x| {
                    let xb = a.block(x, m, m);
                    let cols: Vec<_> = sq
                        .representatives()
                        .iter()
                        .map(|rep| {
                            let class = sq.class_of(&xb.apply_sparse(rep)).expect("W commutes with d");
                            sparse::from_dense(f, &class)
                        })
                        .collect();
                    Ok(Mat::from_sparse_columns(f, sq.dim(), &cols))
                })
                .collect()
        })
        .collect::<Result<_>>()?;

    let mut rows = Vec::with_capacity(safe + 1);
    for s in 0..=safe {
        let mut e1 = 0;
        for p in 0..=(s / 2).min(poly_trunc) {
            let m = s - 2 * p;
            if m >= h_a.len() || h_a[m] == 0 {
                continue;
            }
            let mats: Vec<Mat<F>> = w
                .on_dual
                .iter()
                .zip(&h_a_actions[m])
                .map(|(dual, hx)| sym_power(dual, p).kron(hx))
                .collect();
            e1 += fixed_dim(f, &mats)?;
        }
        rows.push(WeylRow {
            degree: s,
            h_t: complex.cohomology(s)?,
            h_t_invariant: fixed_on_cohomology(complex, s, &acts[s])?,
            invariant_complex: inv_complex.cohomology(s)?,
            e1_bound: e1,
        });
    }
    Ok(WeylReport { rows })
}

/// `A^{m−1} → A^m → A^{m+1}` as a three-term complex, so that degree 1 is `A^m`.
fn graded_complex<F: Field>(a: &Gdga<F>, m: usize) -> Result<CochainComplex<F>> {
    let f = a.field();
    let dims = a.dims();
    let below = if m == 0 { 0 } else { dims[m - 1] };
    let above = dims.get(m + 1).copied().unwrap_or(0);
    let d_in = if m == 0 { Mat::zeros(f, dims[0], 0) } else { a.block(a.d(), m - 1, m) };
    let d_out = a.block(a.d(), m, m + 1);
    CochainComplex::new(f, vec![below, dims[m], above], vec![d_in, d_out], false)
}

/// Outcome of the conditional restriction comparison.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RestrictionReport {
    /// `dim S^p(g∨)^g`, `p ≤ P`.
    pub invariants_g: Vec<usize>,
    /// `dim S^p(k∨)^k`, `p ≤ P`.
    pub invariants_k: Vec<usize>,
    /// Whether restriction `S(g∨)^g → S(k∨)^k` is bijective in every degree `≤ P`.
    pub hypothesis: bool,
    pub cohomology_g: Vec<usize>,
    pub cohomology_k: Vec<usize>,
}

impl RestrictionReport {
    pub fn series_agree(&self) -> bool {
        self.cohomology_g == self.cohomology_k
    }

    /// The conclusion holds whenever the hypothesis does.
    pub fn is_consistent(&self) -> bool {
        !self.hypothesis || self.series_agree()
    }
}

/// Restricts the action on `A` to the subalgebra `k ⊂ g` spanned by the
/// columns of `inclusion` (`dim g × dim k`) and compares the two Cartan
/// series when restriction of invariant polynomials is an isomorphism.
pub fn restriction_check<F: Field>(
    g: &LieAlgebraData<F>,
    k: &LieAlgebraData<F>,
    inclusion: &Mat<F>,
    a: &Gdga<F>,
    poly_trunc: usize,
) -> Result<RestrictionReport> {
    let f = g.field();
    if inclusion.shape() != (g.dim(), k.dim()) {
        return Err(Error::DimensionMismatch(format!(
            "inclusion is {:?}, expected {}×{}",
            inclusion.shape(),
            g.dim(),
            k.dim()
        )));
    }
    if inclusion.rank() != k.dim() {
        return Err(Error::invariant("inclusion", "not injective"));
    }
    // The inclusion must be a Lie algebra map.
    let cols = inclusion.columns();
    for i in 0..k.dim() {
        for j in 0..k.dim() {
            let mut lhs = Vec::new();
            for (a_, x) in &cols[i] {
                for (b_, y) in &cols[j] {
                    lhs = sparse::axpy(f, &lhs, &f.mul(x, y), g.bracket(*a_, *b_));
                }
            }
            let rhs = inclusion.apply_sparse(k.bracket(i, j));
            if lhs != rhs {
                return Err(Error::invariant(format!("inclusion/{i}/{j}"), "not a Lie algebra homomorphism"));
            }
        }
    }
    let restrict_ops = |ops: &dyn Fn(usize) -> Mat<F>| -> Result<Vec<Mat<F>>> {
        (0..k.dim())
            .map(|j| {
                let n = a.total_dim();
                let mut out = Mat::zeros(f, n, n);
                for (b, x) in &cols[j] {
                    out = out.combine(&ops(*b), x)?;
                }
                Ok(out)
            })
            .collect()
    };
    let iota = restrict_ops(&|b| a.iota(b).clone())?;
    let lie = restrict_ops(&|b| a.lie(b).clone())?;
    let a_k = Gdga::new(f, a.dims().to_vec(), a.d().clone(), iota, Some(lie), None)?;
    let report = validate_gdga(k, &a_k);
    if !report.is_valid() {
        return Err(Error::invariant("restricted gdga", report.to_string()));
    }

    let invariants_g = invariant_polynomials(g, None, poly_trunc)?;
    let invariants_k = invariant_polynomials(k, None, poly_trunc)?;
    let subst = inclusion.transpose();
    let mut hypothesis = invariants_g == invariants_k;
    for p in 0..=poly_trunc {
        if !hypothesis {
            break;
        }
        let n = MonomialBasis::new(g.dim(), p).len();
        let ders: Vec<Mat<F>> = (0..g.dim()).map(|i| sym_derivation(&g.coadjoint(i), p)).collect();
        let refs: Vec<&Mat<F>> = ders.iter().collect();
        let basis = Mat::vstack(f, n, &refs)?.kernel_sparse();
        let r = sym_power(&subst, p);
        let mut span = Span::new(f, r.nrows());
        for v in &basis {
            span.insert(&r.apply_sparse(v));
        }
        hypothesis = span.dim() == invariants_k[p];
    }

    let cg = CartanComplex::new(g, a, poly_trunc)?;
    let ck = CartanComplex::new(k, &a_k, poly_trunc)?;
    let top = cg.safe_top().min(ck.safe_top());
    Ok(RestrictionReport {
        invariants_g,
        invariants_k,
        hypothesis,
        cohomology_g: cg.cohomology(0..=top)?,
        cohomology_k: ck.cohomology(0..=top)?,
    })
}
