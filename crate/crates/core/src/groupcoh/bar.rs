use crate::error::{Error, Result};
use crate::exactalg::{Field, Mat};
use crate::homalg::CochainComplex;
use crate::simplicial::Coefficients;
use crate::stackact::GroupoidAction;

use super::module::GModule;

/// Inhomogeneous cochains `C^p = Map(G^p, M)` up to degree `top`, with
///
/// `(δf)(g_1, …, g_{p+1}) = f(g_2, …) + Σ_{i=1}^{p} (−1)^i f(…, g_i g_{i+1}, …)
///  + (−1)^{p+1} ρ(g_{p+1})^{-1} f(g_1, …, g_p)`.
///
/// Coordinates of `C^p` are `tuple_index·dim M + component`.
pub fn bar_complex<F: Field>(m: &GModule<F>, top: usize) -> Result<CochainComplex<F>> {
    let g = m.group();
    let f = m.field();
    let d = m.dim();
    let dims: Vec<usize> = (0..=top).map(|p| g.tuple_count(p) * d).collect();
    let id = Mat::identity(f, d);
    let mut diffs = Vec::with_capacity(top);
    for p in 0..top {
        let mut t = Vec::new();
        for out in 0..g.tuple_count(p + 1) {
            let gs = g.tuple_at(p + 1, out);
            let row = out * d;
            id.push_block(row, g.tuple_index(&gs[1..]) * d, &f.one(), &mut t);
            for i in 1..=p {
                let mut merged = gs[..i - 1].to_vec();
                merged.push(g.mul(gs[i - 1], gs[i]));
                merged.extend_from_slice(&gs[i + 1..]);
                let sign = if i % 2 == 0 { f.one() } else { f.from_i64(-1) };
                id.push_block(row, g.tuple_index(&merged) * d, &sign, &mut t);
            }
            let sign = if (p + 1) % 2 == 0 { f.one() } else { f.from_i64(-1) };
            m.rho_inv(gs[p]).push_block(row, g.tuple_index(&gs[..p]) * d, &sign, &mut t);
        }
        diffs.push(Mat::from_triplets(f, dims[p + 1], dims[p], t));
    }
    CochainComplex::new(f, dims, diffs, true).map_err(|e| match e {
        Error::CompositionNonzero(msg) => Error::invariant("bar complex", msg),
        other => other,
    })
}

/// `dim H^p(G; M)` for `p` in `degrees`, truncating at `max + 2`.
pub fn group_cohomology<F: Field>(m: &GModule<F>, degrees: std::ops::RangeInclusive<usize>) -> Result<Vec<usize>> {
    bar_complex(m, degrees.end() + 2)?.betti(degrees)
}

/// The left action `(g·φ)(σ) = ρ(g) φ(g^{-1}σ)` on degree-`n` atlas cochains.
/// `pullback[k]` is the index of `g^{-1}·σ_k`.
fn cochain_action<F: Field>(coeff: &Coefficients<F>, pullback: &[usize], rho: &Mat<F>) -> Mat<F> {
    let f = coeff.field();
    let r = coeff.rank();
    let mut t = Vec::new();
    for (k, &source) in pullback.iter().enumerate() {
        rho.push_block(k * r, source * r, &f.one(), &mut t);
    }
    Mat::from_triplets(f, pullback.len() * r, pullback.len() * r, t)
}

/// `H^n` of the atlas nerve with coefficients, as a module through the
/// induced action on chosen representative cocycles. `top` is the nerve
/// truncation and must exceed `n`.
pub fn action_on_cohomology<F: Field>(
    a: &GroupoidAction,
    coeff: &Coefficients<F>,
    n: usize,
    top: usize,
) -> Result<GModule<F>> {
    if n >= top {
        return Err(Error::TruncationBoundary { degree: n, trunc: top });
    }
    let group = a.group();
    if let Some(m) = coeff.module() {
        if m.group() != group {
            return Err(Error::DimensionMismatch("coefficient module is over a different group".into()));
        }
    }
    let f = coeff.field();
    let (x, act) = a.induced_nerve_action(top)?;
    let complex = x.cochains(coeff)?;
    let h = complex.cohomology_representatives(n)?;
    let mut rho = Vec::with_capacity(group.order());
    for g in 0..group.order() {
        let ginv = group.inv(g);
        let rho_g = match coeff.module() {
            Some(m) => m.rho(g).clone(),
            None => Mat::identity(f, 1),
        };
        let action = cochain_action(coeff, &act[n][ginv], &rho_g);
        let mut columns = Vec::with_capacity(h.dim());
        for rep in h.representatives() {
            let image = action.apply_sparse(rep);
            let class = h.class_of(&image).ok_or_else(|| {
                Error::RepresentativeDrift(format!(
                    "the image of a degree-{n} representative under {} is not a cocycle",
                    group.names()[g]
                ))
            })?;
            columns.push(class.into_iter().enumerate().filter(|(_, v)| !f.is_zero(v)).collect::<Vec<_>>());
        }
        rho.push(Mat::from_sparse_columns(f, h.dim(), &columns));
    }
    GModule::new(f, group, rho).map_err(|e| match e {
        Error::InvariantViolation { message, .. } => {
            Error::RepresentativeDrift(format!("induced matrices are not a representation: {message}"))
        }
        other => other,
    })
}
