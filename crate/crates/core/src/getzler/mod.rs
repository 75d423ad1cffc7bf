//! The Getzler model for a finite (discrete) group acting on an atlas.
//!
//! For a discrete group the Lie algebra is zero, so `S^{>0}(g∨) = 0`, the
//! contraction `ῑ` vanishes and the Cartan operator `d + ι` has nothing to
//! act on: a finite atlas carries cochains in form degree 0 only. What is
//! left is `C^{p,n} = Map(G^p, Map(X_n, M))` with
//! `D = d̄ + (−1)^p ∂_X` in total degree `p + n`.

use std::ops::RangeInclusive;

use crate::error::{Error, Result};
use crate::exactalg::{Field, Mat};
use crate::homalg::{CochainComplex, DoubleComplex};
use crate::simplicial::{Coefficients, SemiSimplicialSet};
use crate::stackact::{default_trunc, equivariant_cohomology, FiniteGroup, GroupoidAction};

/// A Getzler cochain of group degree `p` and nerve degree `n`, as a dense
/// table: entry `(tuple_index·|X_n| + σ)·rank + i` is component `i` of
/// `f(g_1, …, g_p)(σ)`.
#[derive(Clone, Debug, PartialEq)]
pub struct GetzlerCochain<F: Field> {
    pub p: usize,
    pub n: usize,
    pub values: Vec<F::Elem>,
}

/// The cochain spaces and operators of the discrete Getzler model, up to
/// total degree `N`.
#[derive(Clone, Debug)]
pub struct GetzlerModel<F: Field> {
    group: FiniteGroup,
    coeff: Coefficients<F>,
    trunc: usize,
    nerve: SemiSimplicialSet,
    /// `act[n][g][σ]` is the index of `g·σ` in level `n`.
    act: Vec<Vec<Vec<usize>>>,
    rho: Vec<Mat<F>>,
}

impl<F: Field> GetzlerModel<F> {
    pub fn new(a: &GroupoidAction, coeff: &Coefficients<F>, trunc: usize) -> Result<Self> {
        if let Some(m) = coeff.module() {
            if m.group() != a.group() {
                return Err(Error::DimensionMismatch("coefficient module is over a different group".into()));
            }
        }
        let (nerve, act) = a.induced_nerve_action(trunc)?;
        let f = coeff.field();
        let rho = (0..a.group().order())
            .map(|g| match coeff.module() {
                Some(m) => m.rho(g).clone(),
                None => Mat::identity(f, 1),
            })
            .collect();
        Ok(GetzlerModel {
            group: a.group().clone(),
            coeff: coeff.clone(),
            trunc,
            nerve,
            act,
            rho,
        })
    }

    pub fn trunc(&self) -> usize {
        self.trunc
    }

    fn rank(&self) -> usize {
        self.coeff.rank()
    }

    pub fn cochain_dim(&self, p: usize, n: usize) -> usize {
        self.group.tuple_count(p) * self.nerve.len(n) * self.rank()
    }

    pub fn zero(&self, p: usize, n: usize) -> GetzlerCochain<F> {
        GetzlerCochain {
            p,
            n,
            values: vec![self.coeff.field().zero(); self.cochain_dim(p, n)],
        }
    }

    fn check(&self, c: &GetzlerCochain<F>) -> Result<()> {
        if c.n > self.nerve.top() || c.values.len() != self.cochain_dim(c.p, c.n) {
            return Err(Error::DegreeMismatch(format!(
                "a cochain of bidegree ({}, {}) needs {} values, got {}",
                c.p,
                c.n,
                self.cochain_dim(c.p, c.n),
                c.values.len()
            )));
        }
        Ok(())
    }

    /// `f(gs)(σ)` as a slice of length `rank`.
    fn value<'a>(&self, c: &'a GetzlerCochain<F>, gs: &[usize], sigma: usize) -> &'a [F::Elem] {
        let r = self.rank();
        let at = (self.group.tuple_index(gs) * self.nerve.len(c.n) + sigma) * r;
        &c.values[at..at + r]
    }

    /// `(d̄f)(g_0, …, g_k) = f(g_1, …, g_k) + Σ_{i=1}^k (−1)^i f(…, g_{i−1}g_i, …)
    /// + (−1)^{k+1} g_k^{-1}·f(g_0, …, g_{k−1})`, where `G` acts on
    /// `Map(X_n, M)` by `(h·φ)(σ) = ρ(h) φ(h^{-1}σ)`.
    pub fn dbar(&self, c: &GetzlerCochain<F>) -> Result<GetzlerCochain<F>> {
        self.check(c)?;
        let f = self.coeff.field();
        let k = c.p;
        let r = self.rank();
        let cells = self.nerve.len(c.n);
        let mut out = self.zero(k + 1, c.n);
        let sign = |i: usize| if i.is_multiple_of(2) { f.one() } else { f.from_i64(-1) };
        for t in 0..self.group.tuple_count(k + 1) {
            let gs = self.group.tuple_at(k + 1, t);
            for sigma in 0..cells {
                let mut acc = self.value(c, &gs[1..], sigma).to_vec();
                for i in 1..=k {
                    let mut merged = gs[..i - 1].to_vec();
                    merged.push(self.group.mul(gs[i - 1], gs[i]));
                    merged.extend_from_slice(&gs[i + 1..]);
                    let s = sign(i);
                    for (x, y) in acc.iter_mut().zip(self.value(c, &merged, sigma)) {
                        *x = f.add(x, &f.mul(&s, y));
                    }
                }
                // g_k^{-1}·φ at σ is ρ(g_k^{-1}) φ(g_k σ).
                let last = gs[k];
                let moved = self.act[c.n][last][sigma];
                let twisted = self.rho[self.group.inv(last)].apply(self.value(c, &gs[..k], moved));
                let s = sign(k + 1);
                for (x, y) in acc.iter_mut().zip(&twisted) {
                    *x = f.add(x, &f.mul(&s, y));
                }
                let at = (t * cells + sigma) * r;
                out.values[at..at + r].clone_from_slice(&acc);
            }
        }
        Ok(out)
    }

    /// `ῑ`, which differentiates along one-parameter subgroups. With a zero
    /// Lie algebra it is identically zero; positive-dimensional Lie data is
    /// refused.
    pub fn iota_bar(&self, c: &GetzlerCochain<F>, lie_dim: usize) -> Result<GetzlerCochain<F>> {
        if lie_dim > 0 {
            return Err(Error::UnsupportedRegime(format!(
                "ῑ needs smooth cochains on a Lie group of dimension {lie_dim}"
            )));
        }
        self.check(c)?;
        if c.p == 0 {
            return Err(Error::DegreeMismatch("ῑ lowers the group degree and is undefined on p = 0".into()));
        }
        Ok(self.zero(c.p - 1, c.n))
    }

    /// `(∂_X φ)(τ) = Σ_i (−1)^i φ(d_i τ)`, tuple by tuple.
    pub fn partial_x(&self, c: &GetzlerCochain<F>) -> Result<GetzlerCochain<F>> {
        self.check(c)?;
        if c.n >= self.nerve.top() {
            return Err(Error::TruncationBoundary {
                degree: c.n + 1,
                trunc: self.nerve.top(),
            });
        }
        let f = self.coeff.field();
        let r = self.rank();
        let (src, dst) = (self.nerve.len(c.n), self.nerve.len(c.n + 1));
        let mut out = self.zero(c.p, c.n + 1);
        for t in 0..self.group.tuple_count(c.p) {
            for tau in 0..dst {
                for i in 0..=c.n + 1 {
                    let face = self.nerve.face(c.n + 1, i, tau);
                    let s = if i % 2 == 0 { f.one() } else { f.from_i64(-1) };
                    for j in 0..r {
                        let at = (t * dst + tau) * r + j;
                        let y = &c.values[(t * src + face) * r + j];
                        out.values[at] = f.add(&out.values[at], &f.mul(&s, y));
                    }
                }
            }
        }
        Ok(out)
    }

    /// The matrix of `d̄ : C^{p,n} → C^{p+1,n}`. With `twisted = false` the
    /// last face omits the action, which is the rejected alternative.
    fn dbar_matrix_with(&self, p: usize, n: usize, twisted: bool) -> Mat<F> {
        let f = self.coeff.field();
        let g = &self.group;
        let r = self.rank();
        let cells = self.nerve.len(n);
        let id = Mat::identity(f, r);
        let sign = |i: usize| if i.is_multiple_of(2) { f.one() } else { f.from_i64(-1) };
        let mut t = Vec::new();
        for out in 0..g.tuple_count(p + 1) {
            let gs = g.tuple_at(p + 1, out);
            let col = |tuple: &[usize], sigma: usize| (g.tuple_index(tuple) * cells + sigma) * r;
            for sigma in 0..cells {
                let row = (out * cells + sigma) * r;
                id.push_block(row, col(&gs[1..], sigma), &f.one(), &mut t);
                for i in 1..=p {
                    let mut merged = gs[..i - 1].to_vec();
                    merged.push(g.mul(gs[i - 1], gs[i]));
                    merged.extend_from_slice(&gs[i + 1..]);
                    id.push_block(row, col(&merged, sigma), &sign(i), &mut t);
                }
                let last = gs[p];
                if twisted {
                    let moved = self.act[n][last][sigma];
                    self.rho[g.inv(last)].push_block(row, col(&gs[..p], moved), &sign(p + 1), &mut t);
                } else {
                    id.push_block(row, col(&gs[..p], sigma), &sign(p + 1), &mut t);
                }
            }
        }
        Mat::from_triplets(f, self.cochain_dim(p + 1, n), self.cochain_dim(p, n), t)
    }

    pub fn dbar_matrix(&self, p: usize, n: usize) -> Mat<F> {
        self.dbar_matrix_with(p, n, true)
    }

    /// The matrix of `∂_X : C^{p,n} → C^{p,n+1}`.
    pub fn partial_matrix(&self, p: usize, n: usize) -> Mat<F> {
        let f = self.coeff.field();
        let r = self.rank();
        let (src, dst) = (self.nerve.len(n), self.nerve.len(n + 1));
        let mut t = Vec::new();
        for tuple in 0..self.group.tuple_count(p) {
            for tau in 0..dst {
                for i in 0..=n + 1 {
                    let face = self.nerve.face(n + 1, i, tau);
                    let s = if i % 2 == 0 { f.one() } else { f.from_i64(-1) };
                    for j in 0..r {
                        t.push(((tuple * dst + tau) * r + j, (tuple * src + face) * r + j, s.clone()));
                    }
                }
            }
        }
        Mat::from_triplets(f, self.cochain_dim(p, n + 1), self.cochain_dim(p, n), t)
    }

    /// The model as a double complex on blocks with `p + n ≤ N`. The first
    /// index is the nerve degree `n` and the second the group degree `p`,
    /// so that totalization `d_v + (−1)^p d_h` is `d̄ + (−1)^p ∂_X`.
    pub fn double_complex(&self) -> Result<DoubleComplex<F>> {
        let f = self.coeff.field();
        let big = self.trunc;
        let keep = |n: usize, p: usize| n + p <= big;
        let dims = (0..=big)
            .map(|n| (0..=big).map(|p| if keep(n, p) { self.cochain_dim(p, n) } else { 0 }).collect())
            .collect();
        let dim = |n: usize, p: usize| if keep(n, p) { self.cochain_dim(p, n) } else { 0 };
        let dh = |n: usize, p: usize| {
            if keep(n + 1, p) {
                self.partial_matrix(p, n)
            } else {
                Mat::zeros(f, dim(n + 1, p), dim(n, p))
            }
        };
        let dv = |n: usize, p: usize| {
            if keep(n, p + 1) {
                self.dbar_matrix(p, n)
            } else {
                Mat::zeros(f, dim(n, p + 1), dim(n, p))
            }
        };
        DoubleComplex::from_fn(f, dims, Some(big), dh, dv)
    }

    /// The total Getzler complex; `D² = 0` is verified on construction.
    pub fn total_complex(&self) -> Result<CochainComplex<F>> {
        self.double_complex()?.total_complex()
    }
}

/// `dim H^s` of the total Getzler complex and of the Borel model.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GetzlerComparison {
    pub degrees: Vec<usize>,
    pub getzler: Vec<usize>,
    pub borel: Vec<usize>,
}

impl GetzlerComparison {
    pub fn agrees(&self) -> bool {
        self.getzler == self.borel
    }
}

/// Computes the Getzler cohomology and the Borel-model cohomology side by
/// side, with `N = max + 2` unless given.
pub fn getzler_comparison<F: Field>(
    a: &GroupoidAction,
    coeff: &Coefficients<F>,
    degrees: RangeInclusive<usize>,
    trunc: Option<usize>,
) -> Result<GetzlerComparison> {
    let n = default_trunc(&degrees, trunc)?;
    let model = GetzlerModel::new(a, coeff, n)?;
    let getzler = model.total_complex()?.betti(degrees.clone())?;
    let borel = equivariant_cohomology(a, coeff, degrees.clone(), Some(n))?;
    Ok(GetzlerComparison {
        degrees: degrees.collect(),
        getzler,
        borel,
    })
}

/// `dim H^s` of the total Getzler complex, asserted equal to the Borel model.
pub fn getzler_total_cohomology<F: Field>(
    a: &GroupoidAction,
    coeff: &Coefficients<F>,
    degrees: RangeInclusive<usize>,
    trunc: Option<usize>,
) -> Result<Vec<usize>> {
    let c = getzler_comparison(a, coeff, degrees, trunc)?;
    if !c.agrees() {
        return Err(Error::invariant(
            "getzler",
            format!("Getzler model gives {:?} but the Borel model gives {:?}", c.getzler, c.borel),
        ));
    }
    Ok(c.getzler)
}
