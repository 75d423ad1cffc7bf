//! Symmetric powers `S^p(V)` in the monomial basis.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::exactalg::sparse::SVec;
use crate::exactalg::{Field, Mat};

use super::lie::LieAlgebraData;

/// Monomials of degree `p` in `k` variables as exponent vectors, in
/// lexicographically decreasing order (`u_1^p` first).
pub fn monomials(k: usize, p: usize) -> Vec<Vec<u32>> {
    fn go(k: usize, p: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if prefix.len() + 1 == k {
            prefix.push(p);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for e in (0..=p).rev() {
            prefix.push(e);
            go(k, p - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if k == 0 {
        if p == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    go(k, p as u32, &mut Vec::new(), &mut out);
    out
}

/// Indexing of the monomials of one degree.
#[derive(Clone, Debug)]
pub struct MonomialBasis {
    k: usize,
    monos: Vec<Vec<u32>>,
    index: HashMap<Vec<u32>, usize>,
}

impl MonomialBasis {
    pub fn new(k: usize, p: usize) -> Self {
        let monos = monomials(k, p);
        let index = monos.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
        MonomialBasis { k, monos, index }
    }

    pub fn len(&self) -> usize {
        self.monos.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monos.is_empty()
    }

    pub fn variables(&self) -> usize {
        self.k
    }

    pub fn monomial(&self, i: usize) -> &[u32] {
        &self.monos[i]
    }

    pub fn index_of(&self, m: &[u32]) -> usize {
        self.index[m]
    }
}

/// The matrix of `S^p(M)`, where the linear substitution `M` sends
/// `u_b ↦ Σ_c M_{cb} v_c` (so `M` is `k_out × k_in`).
pub fn sym_power<F: Field>(m: &Mat<F>, p: usize) -> Mat<F> {
    let f = m.field();
    let src = MonomialBasis::new(m.ncols(), p);
    let dst = MonomialBasis::new(m.nrows(), p);
    let images: Vec<SVec<F::Elem>> = m.columns();
    let mut t = Vec::new();
    for (c, mono) in src.monos.iter().enumerate() {
        // Expand Π_b (Σ_c M_{cb} v_c)^{α_b} as a map from exponents to coefficients.
        let mut poly: HashMap<Vec<u32>, F::Elem> = HashMap::from([(vec![0; dst.k], f.one())]);
        for (b, &e) in mono.iter().enumerate() {
            for _ in 0..e {
                let mut next: HashMap<Vec<u32>, F::Elem> = HashMap::new();
                for (exp, coef) in &poly {
                    for (v, x) in &images[b] {
                        let mut e2 = exp.clone();
                        e2[*v] += 1;
                        let entry = next.entry(e2).or_insert_with(|| f.zero());
                        *entry = f.add(entry, &f.mul(coef, x));
                    }
                }
                poly = next;
            }
        }
        for (exp, coef) in poly {
            if !f.is_zero(&coef) {
                t.push((dst.index_of(&exp), c, coef));
            }
        }
    }
    Mat::from_triplets(f, dst.len(), src.len(), t)
}

/// The derivation of `S^p(V)` extending the endomorphism `M` of `V`:
/// `u^α ↦ Σ_b α_b u^{α − e_b} · M(u_b)`.
pub fn sym_derivation<F: Field>(m: &Mat<F>, p: usize) -> Mat<F> {
    let f = m.field();
    let basis = MonomialBasis::new(m.ncols(), p);
    let images = m.columns();
    let mut t = Vec::new();
    for (c, mono) in basis.monos.iter().enumerate() {
        for (b, &e) in mono.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let mult = f.from_i64(e as i64);
            for (v, x) in &images[b] {
                let mut exp = mono.to_vec();
                exp[b] -= 1;
                exp[*v] += 1;
                t.push((basis.index_of(&exp), c, f.mul(&mult, x)));
            }
        }
    }
    Mat::from_triplets(f, basis.len(), basis.len(), t)
}

/// Multiplication by `u_a`, from `S^p` to `S^{p+1}`.
pub fn multiply_by_variable<F: Field>(field: &F, k: usize, a: usize, p: usize) -> Mat<F> {
    let src = MonomialBasis::new(k, p);
    let dst = MonomialBasis::new(k, p + 1);
    let t = src.monos.iter().enumerate().map(|(c, mono)| {
        let mut exp = mono.clone();
        exp[a] += 1;
        (dst.index_of(&exp), c, field.one())
    });
    Mat::from_triplets(field, dst.len(), src.len(), t)
}

/// Checks that `w` is a finite matrix group on `g∨` (closed under products
/// and containing the identity) and that `|W|` is a unit in the field.
pub fn check_matrix_group<F: Field>(field: &F, dim: usize, w: &[Mat<F>]) -> Result<()> {
    if let Some(i) = w.iter().position(|m| m.shape() != (dim, dim)) {
        return Err(Error::DimensionMismatch(format!("weyl/{i} is not {dim}×{dim}")));
    }
    if !w.contains(&Mat::identity(field, dim)) {
        return Err(Error::invariant("weyl", "the identity is missing"));
    }
    for (i, x) in w.iter().enumerate() {
        for (j, y) in w.iter().enumerate() {
            if !w.contains(&x.mul(y)?) {
                return Err(Error::invariant(format!("weyl/{i}/{j}"), "not closed under products"));
            }
        }
    }
    if !field.is_unit_integer(w.len() as u64) {
        return Err(Error::NonInvertibleOrder {
            order: w.len(),
            characteristic: field.characteristic(),
        });
    }
    Ok(())
}

/// `dim V^W = rank Σ_w ρ(w)` for a finite group with invertible order.
pub(crate) fn fixed_dim<F: Field>(field: &F, mats: &[Mat<F>]) -> Result<usize> {
    let Some(first) = mats.first() else {
        return Ok(0);
    };
    let mut sum = Mat::zeros(field, first.nrows(), first.ncols());
    for m in mats {
        sum = sum.add(m)?;
    }
    Ok(sum.rank())
}

/// Graded dimensions of the invariant polynomials `S^p(g∨)^G`, `p = 0..=P`.
///
/// With `weyl` given, `G` is the finite group of those matrices acting on
/// `g∨` and invariants are computed by averaging. Without it, `G` is the
/// connected group and invariants are the joint kernel of the coadjoint
/// derivations.
pub fn invariant_polynomials<F: Field>(g: &LieAlgebraData<F>, weyl: Option<&[Mat<F>]>, max_degree: usize) -> Result<Vec<usize>> {
    let f = g.field();
    let k = g.dim();
    match weyl {
        Some(w) => {
            check_matrix_group(f, k, w)?;
            (0..=max_degree)
                .map(|p| {
                    let reps: Vec<Mat<F>> = w.iter().map(|m| sym_power(m, p)).collect();
                    fixed_dim(f, &reps)
                })
                .collect()
        }
        None => (0..=max_degree)
            .map(|p| {
                let n = MonomialBasis::new(k, p).len();
                let ders: Vec<Mat<F>> = (0..k).map(|a| sym_derivation(&g.coadjoint(a), p)).collect();
                let refs: Vec<&Mat<F>> = ders.iter().collect();
                Ok(n - Mat::vstack(f, n, &refs)?.rank())
            })
            .collect(),
    }
}
